//! JSON form of [`Domain`].
//!
//! ```json
//! {"type": "box", "bounds": [[-1, 1], [-1, 1]]}
//! {"type": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]}
//! {"type": "interval_union", "intervals": [[0, 1], [2, 3]]}
//! {"type": "copy", "isometry": {"linear": [[0, -1], [1, 0]], "translation": [0, 0]}, "domain": {...}}
//! {"type": "union", "members": [{...}, {...}]}
//! {"type": "product", "factors": [{...}, {...}]}
//! ```

use serde::{Deserialize, Serialize};

use super::{AxisBox, Domain, Isometry};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Box {
        bounds: Vec<[f64; 2]>,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    IntervalUnion {
        intervals: Vec<[f64; 2]>,
    },
    Copy {
        isometry: Isometry,
        domain: Box<DomainSpec>,
    },
    Union {
        members: Vec<DomainSpec>,
    },
    Product {
        factors: [Box<DomainSpec>; 2],
    },
}

impl TryFrom<DomainSpec> for Domain {
    type Error = Error;

    fn try_from(spec: DomainSpec) -> Result<Domain> {
        Ok(match spec {
            DomainSpec::Box { bounds } => Domain::Box(AxisBox::try_from(bounds)?),
            DomainSpec::Polygon { vertices } => Domain::polygon(vertices)?,
            DomainSpec::IntervalUnion { intervals } => {
                Domain::interval_union(intervals.into_iter().map(|[a, b]| (a, b)).collect())?
            }
            DomainSpec::Copy { isometry, domain } => {
                Domain::try_from(*domain)?.apply_isometry(&isometry)?
            }
            DomainSpec::Union { members } => Domain::disjoint_union(
                members
                    .into_iter()
                    .map(Domain::try_from)
                    .collect::<Result<_>>()?,
            )?,
            DomainSpec::Product { factors: [a, b] } => {
                Domain::product(Domain::try_from(*a)?, Domain::try_from(*b)?)
            }
        })
    }
}

impl From<Domain> for DomainSpec {
    fn from(d: Domain) -> Self {
        match d {
            Domain::IntervalUnion(iv) => DomainSpec::IntervalUnion {
                intervals: iv.into_iter().map(|(a, b)| [a, b]).collect(),
            },
            Domain::Box(b) => DomainSpec::Box { bounds: b.into() },
            Domain::Polygon(p) => DomainSpec::Polygon {
                vertices: p.vertices().to_vec(),
            },
            Domain::Copy(c) => DomainSpec::Copy {
                isometry: c.isometry,
                domain: Box::new((*c.base).into()),
            },
            Domain::DisjointUnion(m) => DomainSpec::Union {
                members: m.into_iter().map(Into::into).collect(),
            },
            Domain::Product(a, b) => DomainSpec::Product {
                factors: [Box::new((*a).into()), Box::new((*b).into())],
            },
        }
    }
}

//! λ specifications: `x`, `a:step:b` (inclusive) or `log:a:b:n`.

use anyhow::{bail, Context, Result};

pub fn parse_lambda_spec(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .with_context(|| format!("'{s}' is not a number in λ spec '{spec}'"))
    };
    let values = if let Some(rest) = spec.strip_prefix("log:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            bail!("log grid must look like log:a:b:n, got '{spec}'");
        }
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2]
            .trim()
            .parse()
            .with_context(|| format!("bad point count in '{spec}'"))?;
        if n < 2 || !(a > 0.0 && b > a) {
            bail!("log grid needs 0 < a < b and n ≥ 2, got '{spec}'");
        }
        let (la, lb) = (a.ln(), b.ln());
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
                }
            })
            .collect()
    } else if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            bail!("range must look like a:step:b, got '{spec}'");
        }
        let (a, step, b) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || b < a {
            bail!("range needs step > 0 and b ≥ a, got '{spec}'");
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        if n > 10_000_000 {
            bail!("range '{spec}' has too many points");
        }
        (0..=n).map(|i| a + step * i as f64).collect()
    } else if spec.contains(',') {
        spec.split(',').map(num).collect::<Result<Vec<_>>>()?
    } else {
        vec![num(spec)?]
    };
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        bail!("λ values must be positive, got {bad} in '{spec}'");
    }
    Ok(values)
}

pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|_| anyhow::anyhow!("'{p}' is not a valid {what}"))
        })
        .collect()
}

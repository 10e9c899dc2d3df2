//! P1 finite elements for Laplace eigenvalues on polygons and intervals.

mod assemble;
mod eigen;
mod mesh;
mod skyline;
mod sparse;
mod study;

pub use assemble::{assemble, assemble_interval, element_matrices, AssembledPencil};
pub use eigen::{fem_spectrum_below, inertia_count, solve_smallest, FemSolution, DEFAULT_TOL};
pub use mesh::{ear_clip, triangulate, IntervalMesh, Mesh};
pub use skyline::{reverse_cuthill_mckee, SkylineLdl};
pub use sparse::CsrMatrix;
pub use study::{convergence_study, ConvergenceStudy};

//! Crystal combinatorics, rigged configurations and the periodic box-ball system
//! over U_q(sl^_2) at q = 0.

pub mod crystal;
pub mod energy_dist;
pub mod kkr;
pub mod linalg;
pub mod pbbs;
pub mod scattering;
pub mod theta;

pub use crystal::{affine_r, combinatorial_r, path, AffineElement, BoxElement, Node, Path};
pub use kkr::{phi, phi_inverse, prepend_ones_shift, RiggedConfiguration};

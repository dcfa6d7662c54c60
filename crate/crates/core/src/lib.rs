//! Enumeration, search and analysis of `4ℤ^d`-periodic packings and tilings
//! of `ℝ^d` by integral translates of the cube `[0,2)^d`.
//!
//! Everything lives on the torus `(ℤ/4)^d`: a cube is named by its corner
//! label in `{0,1,2,3}^d`, and two cubes are disjoint iff some coordinate of
//! their labels differs by exactly 2 mod 4.

pub mod analysis;
pub mod bits;
pub mod canon;
pub mod checks;
pub mod enumeration;
pub mod error;
pub mod flips;
pub mod io;
pub mod label;
pub mod packing;
pub mod stochastic;
pub mod symmetry;

pub use canon::{are_isomorphic, canonical_form, invariant_fingerprint, CanonicalKey, Fingerprint};
pub use error::{Error, Result};
pub use label::{overlaps, CubeLabel, UnitCell, WindowCorner};
pub use packing::{
    free_labels, is_packing, is_tiling, lift, product_packing, regular_tiling, LabelCodes, LabelSet, Packing,
};
pub use symmetry::{CoordMap, Symmetry};

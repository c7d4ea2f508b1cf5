//! Exact SL_n quantum traces on ideal triangulations.
//!
//! The crate builds the Fock–Goncharov X-tori and the A-tori attached to a
//! triangulated punctured bordered surface, the integer matrices relating
//! them, and the X-trace images of stated corner arcs and simple arcs. All
//! arithmetic is exact in Z[hq^{±1}] with `q = hq^{2n²}`.

pub mod error;
pub mod imat;
pub mod lattice;
pub mod par;
pub mod qmatrix;
pub mod qtorus;
pub mod qtrace;
pub mod scalars;
pub mod structmat;
pub mod surface;
pub mod weight;

pub use error::{Error, Result};
pub use imat::IMat;
pub use qtorus::{Degree, MonomialMap, TorusElement, TorusPresentation};
pub use scalars::LaurentScalar;
pub use weight::{weight_pairing, WeightVector};

//! Quantum traces of stated arcs: corner arcs on a single triangle via
//! compatible paths, and simple arcs on surfaces via cutting.

pub mod arc;
pub mod context;
pub mod counit;
pub mod cs;
pub mod frame;
pub mod paths;

pub use arc::{
    arc_corpus, boundary_homogeneity, projection_pr, trace_a, trace_arc, trace_arc_with, CutMap, Direction,
    SimpleArcSpec,
};
pub use context::SurfaceContext;
pub use counit::AttachMonoid;
pub use cs::{exchange_relation_check, factorization_check, quantum_matrix_checks, Braiding, RelationCheck};
pub use frame::{frame_checks, trace_g, trace_g_triangle};
pub use paths::{
    compatible_paths, path_exponent, trace_corner, transport_matrix, transport_matrix_with, triangle_torus,
    CompatiblePath, DualNode, Orientation, StatedCornerArc, Step,
};

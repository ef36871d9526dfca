//! Executable models of framed McKay quivers, their preprojective
//! representations, the stability fan of the chamber `C+`, the cornered
//! algebra presentation of `Hilb^n(C^2/Gamma)` and an exact verifier for
//! dimension-vector bounds of `theta_J`-stable modules.

pub mod corner;
pub mod error;
pub mod fan;
pub mod hilb;
pub mod linalg;
pub mod poly;
pub mod quiver;
pub mod rep;
pub mod verify;

pub use corner::{j_star_corner, CornerIdealK, CornerJson, CornerModule, QPrime, RelationReport};
pub use error::{Error, Result};
pub use fan::{classify, eta_j, face_poset, theta_j, Classification, Face, FacePoset, StabilityParameter};
pub use hilb::{
    corner_from_staircase, enumerate_monoid_staircases, enumerate_regular_fixed_points, enumerate_staircases,
    euler_characteristic_series, intersect_with_invariants, rep_from_ideal, weight_profile, MonoidStaircase, Staircase,
    WeightProfile,
};
pub use linalg::{closure_under, RMatrix, Rational, Subspace};
pub use poly::{hypersurface, HypersurfaceData, Poly2, Poly3};
pub use quiver::{
    build_framed_quiver, dimension_vector_v, DimensionVector, DynkinType, Family, FramedMcKayQuiver, Vertex,
};
pub use rep::{QuiverRepresentation, RepJson, VertexProbe};
pub use verify::{
    build_system, integer_enumerate, lp_max, verify_all, verify_bound, ConstraintSystem, Status, VerificationReport,
};

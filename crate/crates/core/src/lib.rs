//! Exact classification of pencils of quadrics in P³.
//!
//! A pencil `⟨Q₀, Q₁⟩` of quadric surfaces is classified through its
//! discriminant binary quartic `det(s·Q₀ + t·Q₁)`: the root type of that
//! quartic separates the smooth locus from the tangency strata, and on the
//! smooth locus the j-invariant of the quartic is a complete invariant.
//! Everything that decides an equality is computed over ℚ; complex
//! approximations are only used to locate roots and are certified.

pub mod error;
pub mod linalg;
pub mod moduli;
pub mod normal_forms;
pub mod numeric;
pub mod pencil;
pub mod poly;
pub mod quartic;
pub mod rat;
pub mod report;
pub mod roots;
pub mod sampling;
pub mod schubert;
pub mod slice;

pub use error::{Error, Result};
pub use moduli::{cross_ratio_lambda, fiber_structure, legendre_j, legendre_ramification};
pub use normal_forms::{
    diagonal_pencil, nodal_canonicalize, nodal_normalize, simultaneous_diagonalize, verify_node,
};
pub use pencil::{classify, classify_with, infinitesimal_stabilizer_dim, w_node, OrbitClass, OrbitTag, Pencil, SymMat4};
pub use poly::UniPoly;
pub use quartic::{BinaryQuartic, InvariantTriple, ProjValue, RootType};
pub use rat::Rat;
pub use roots::{complex_roots, CRoot};
pub use schubert::{degree, divisor_class_report, pieri_sigma1, ClassSum, Partition2};
pub use slice::{count_tangents, j_fiber_count, random_slice, slice_campaign, tangent_polynomial, PlaneSlice};

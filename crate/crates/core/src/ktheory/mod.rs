//! Orbit bases, descended boundary operators and K-theory of free wreath products.

mod boundary;
mod compute;
mod exactness;
mod orbit;
mod rewriting;

pub use boundary::{apply_d, apply_partial, apply_partial_fundamental, apply_partial_u, assemble_delta, ClassCombo, DeltaMatrix};
pub use compute::{compute_ktheory, expected_kernel, KTheoryResult, RadiusTrace};
pub use exactness::{exactness_check, lattice_control, ExactnessReport, LatticeControl};
pub use orbit::{OrbitClass, Summand, SummandKind, WreathModel};
pub use rewriting::{
    alternative_sign_sequence, class_image, image_lattice_fundamental, image_lattice_u, rewriting_cokernel,
    sequence_a, sequence_b, ImageLattice, Rewriting,
};

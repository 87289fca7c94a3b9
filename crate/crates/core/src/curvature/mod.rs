//! Symmetric 2-tensors, algebraic curvature tensors, the Kulkarni–Nomizu
//! product, and the Weyl/Ricci/scalar splitting.
//!
//! Three inner products appear in this crate and are kept separate:
//! `tr(AᵀB)` on symmetric 2-tensors, `½ tr(AᵀB)` on 2-forms (only through
//! [`Rank4::to_two_form_matrix`]), and the unweighted full contraction on
//! `(0,4)` tensors.

mod decompose;
pub mod exact;
mod rank4;
mod sym;

pub use decompose::{
    decompose, einstein_defect, is_einstein, ricci, scalar_curvature, RiemannDecomposition,
    EINSTEIN_TOL,
};
pub use rank4::{
    bianchi_project, inner_product, kulkarni_nomizu, norm_sq, pairs, CurvatureTensor, Rank4,
    TensorDocument, MEMBERSHIP_TOL,
};
pub use sym::SymTensor;

/// `g∧g` in dimension `n`.
pub fn metric_product(n: usize) -> CurvatureTensor {
    let g = SymTensor::metric(n);
    kulkarni_nomizu(&g, &g).expect("same dimension")
}

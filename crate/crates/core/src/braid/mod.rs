//! Braid group generators on lowest-weight spaces.

pub mod action;
pub mod closed;
pub mod matrix;
pub mod rewrite;

pub use action::{
    apply_sigma_direct, apply_sigma_printed, apply_sigma_series, compare_formulas, full_space_matrices,
    full_space_matrices_printed, BraidGenerator, FormulaComparison, FormulaMismatch, SigmaFormula,
};
pub use closed::{
    closed_family, closed_form_burau, closed_form_distinguished, closed_form_laurent, closed_form_lkb,
    corrjk_change_of_basis, eval_laurent, lkb_basis, ClosedFamily, CorrJk,
};
pub use matrix::{
    basis_elements, braid_relation_residual, braid_relations_exact, build_exact, build_matrix, build_numeric,
    compare_matrices, evaluate_word, inverse_residual, is_exact_inverse, parse_word, Backend, BasisElement,
    BraidMatrices, BuildOptions, BuiltMatrices, MatrixComparison, Route,
};
pub use rewrite::{rewrite_sigma, OMonomial};

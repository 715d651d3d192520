//! Irreducible representations of the deformed oscillator algebra on
//! occupation bases, their tensor products, and the operators acting there.

mod model;
mod ops;
mod state;

pub use model::{ExactModel, Model, NumericModel};
pub use ops::{
    apply_generator, apply_o, casimir_action, coproduct_action, gram_schmidt, inner_product, operator_matrix,
    star_adjoint_check, ActionScope, Generator,
};
pub use state::{LabelSet, RepLabel, TensorState, WeightVector};

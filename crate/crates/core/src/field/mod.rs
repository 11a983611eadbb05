//! Scalar fields as expression trees with exact second-order differentiation.

mod expr;
mod jet;
mod manufactured;
mod ops;
mod parse;

pub use expr::{Node, ScalarField};
pub use jet::Jet2;
pub use manufactured::{ac_defining_field, manufactured, SampleFn1D, VanishOn};
pub use ops::{
    apply_d, apply_o, apply_x, d_of_jet, dilate, dilation_field, directional_pm, directional_pm_of_jet,
    energy_density, energy_of_jet, norm_density, norm_of_jet, o_of_jet, weighted_gradient_of_jet, x_of_jet,
};

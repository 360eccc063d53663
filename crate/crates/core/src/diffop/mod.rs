//! Difference operators: windowed Laurent series in Λ under the twisted
//! product.

mod algebra;
mod op;
mod window;

pub use algebra::{
    lambda_s, op_bar, op_invert, op_power, op_powers, op_scale, q_bracket_power, res_functional,
};
pub use op::{commutator, op_mul, op_mul_all, shift_coeff, twisted_product, Coeff, DiffOp, Op};
pub use window::{Orientation, Window};

#[cfg(test)]
mod tests;

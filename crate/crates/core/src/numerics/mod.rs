//! Numerical building blocks shared by the physics modules.

pub mod fit;
pub mod quadrature;
pub mod roots;
pub mod summation;

pub use fit::{fit_line, LineFit};
pub use quadrature::{integrate_adaptive, AdaptiveOptions, GaussLegendre, Integral};
pub use roots::{bisect, sign_change_brackets};
pub use summation::{compensated_sum, ComplexSum, NeumaierSum};

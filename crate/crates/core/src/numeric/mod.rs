//! Numerical building blocks shared by the potential-theory modules.

pub mod quad;
pub mod stability;
pub mod sum;

pub use quad::{Integral, QuadOptions};
pub use stability::{Extension, Stabilization, Tri};

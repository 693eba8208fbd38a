//! Potential theory near the imaginary axis: logarithmic interval functions
//! of charges, the conditions built from them, balayage onto `iR`, and
//! growth checks for canonical products.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod balayage;
pub mod cli;
pub mod conditions;
pub mod entire;
pub mod error;
pub mod io;
pub mod logmetrics;
pub mod measures;
pub mod numeric;

pub use error::{Error, Result};
pub use measures::{Atom, AtomicCharge, Divisor, GridSpec, IntervalGrid, LineCharge};
pub use numeric::{Extension, Integral, QuadOptions, Stabilization, Tri};

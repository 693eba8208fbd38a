//! Genus-one canonical products, integral means, growth characteristics
//! and the majorant inequalities for products on the imaginary axis.

mod growth;
mod means;
mod product;
mod verify;

pub use growth::{growth_report, GrowthReport};
pub use means::{circle_mean, disk_mean, sup_on_circle, SupOnCircle};
pub use product::{log_abs_e1, log_abs_sin_pi, CanonicalProduct, LogAbs, TailDescriptor};
pub use verify::{check_a1_bound, check_a3, check_b3_c3, A1Report, B3C3Mode, VerifyOptions};

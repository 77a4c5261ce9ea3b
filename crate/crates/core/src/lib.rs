//! Exact computations around the curves `y^2 = x^3 + n`: rational torsion,
//! class groups of the imaginary quadratic fields `Q(sqrt(n - m^3))` and the
//! pure cubic fields `Q(cbrt(n))`, the norm-power specialization into
//! quadratic class groups, and the `x - theta` descent map into cubic square
//! classes and ideal classes.
//!
//! Everything is exact: rationals and big integers throughout, with a step
//! budget on every long-running loop.

pub mod arith;
pub mod audit;
pub mod cubic;
pub mod descent;
pub mod elliptic;
pub mod error;
pub mod group;
pub mod quad;
pub mod report;
pub mod scan;

pub use error::{Error, Result, DEFAULT_BUDGET};

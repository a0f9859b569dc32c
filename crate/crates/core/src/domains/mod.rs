//! Abstract domains: intervals, reduced affine forms, constant propagation
//! and the One-Hot domain for categorical tiers.

pub mod cp;
pub mod interval;
pub mod onehot;
pub mod raf;

pub use cp::CpValue;
pub use interval::{Hyperrectangle, IntervalValue, MonotoneFn};
pub use onehot::OneHotValue;
pub use raf::{ExpMode, RafValue, Symbol};

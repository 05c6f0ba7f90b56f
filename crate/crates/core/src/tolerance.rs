//! Numeric tolerances shared by the library, its tests and the acceptance suite.

/// Agreement required between two evaluations of the same exact quantity.
pub const EXACT: f64 = 1e-12;

/// Agreement required between two independent numerical routes.
pub const CROSS_PATH: f64 = 1e-9;

/// Accepted deviation of an input probability vector's total mass from one.
pub const PROBABILITY_MASS: f64 = 1e-9;

//! Numerical tolerances shared by every module.

/// Primal feasibility of rows and bounds.
pub const FEAS: f64 = 1e-6;
/// Distance from the nearest integer below which a value counts as integral.
pub const INT: f64 = 1e-6;
/// Reduced-cost optimality threshold.
pub const DUAL: f64 = 1e-9;
/// Smallest acceptable pivot magnitude.
pub const PIVOT: f64 = 1e-9;
/// Relative tolerance for comparing objective values.
pub const OBJ: f64 = 1e-6;

/// Objective-space equality: `|a-b| <= 1e-6 (1 + |a| + |b|)`.
#[inline]
pub fn obj_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= OBJ * (1.0 + a.abs() + b.abs())
}

/// `a <= b` up to [`obj_eq`].
#[inline]
pub fn obj_le(a: f64, b: f64) -> bool {
    a <= b || obj_eq(a, b)
}

/// `a < b` and not equal up to [`obj_eq`].
#[inline]
pub fn obj_lt(a: f64, b: f64) -> bool {
    a < b && !obj_eq(a, b)
}

#[inline]
pub fn is_integral(v: f64) -> bool {
    (v - libm::round(v)).abs() <= INT
}

#[inline]
pub fn round(v: f64) -> f64 {
    libm::round(v)
}

#[inline]
pub fn floor(v: f64) -> f64 {
    libm::floor(v)
}

#[inline]
pub fn ceil(v: f64) -> f64 {
    libm::ceil(v)
}

#[inline]
pub fn sqrt(v: f64) -> f64 {
    libm::sqrt(v)
}

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hyperbolic distance in the upper half-plane.
///
/// Evaluated as `2 asinh(|z - w| / (2 sqrt(Im z Im w)))`, which equals
/// `arccosh(1 + |z - w|^2 / (2 Im z Im w))` without the cancellation near 0.
///
/// ```
/// use catfill::model_spaces::halfplane_distance;
/// use num_complex::Complex64;
///
/// let d = halfplane_distance(Complex64::i(), Complex64::new(0.0, 2.0)).unwrap();
/// assert!((d - 2f64.ln()).abs() < 1e-15);
/// ```
pub fn halfplane_distance(z: Complex64, w: Complex64) -> Result<f64> {
    for p in [z, w] {
        if !(p.im > 0.0) {
            return Err(Error::Domain { im: p.im });
        }
    }
    Ok(2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh())
}

/// `e^(ua) (tanh t + i sech t)`: the strip `[0, ∞) ×_{u cosh t} ℝ` into the
/// half-plane.
pub fn strip_to_halfplane(t: f64, a: f64, u: f64) -> Complex64 {
    (u * a).exp() * Complex64::new(t.tanh(), 1.0 / t.cosh())
}

/// `x + i e^(-r)`: the chart `ℝ ×_{e^r} E¹` onto the half-plane.
pub fn horo_to_halfplane(r: f64, x: f64) -> Complex64 {
    Complex64::new(x, (-r).exp())
}

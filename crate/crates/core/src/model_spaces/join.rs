use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// A point `(φ, a, b)` of the spherical join `A ∗ B`.
///
/// At `φ = 0` the point lies in `A` and `b_point` is irrelevant; at
/// `φ = π/2` it lies in `B` and `a_point` is irrelevant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JoinPoint<A, B> {
    pub phi: f64,
    pub a_point: A,
    pub b_point: B,
}

impl<A: PartialEq, B: PartialEq> PartialEq for JoinPoint<A, B> {
    fn eq(&self, other: &Self) -> bool {
        if self.phi != other.phi {
            return false;
        }
        let same_a = self.a_point == other.a_point;
        let same_b = self.b_point == other.b_point;
        if self.phi == 0.0 {
            same_a
        } else if self.phi == FRAC_PI_2 {
            same_b
        } else {
            same_a && same_b
        }
    }
}

/// `min(π, d)`.
pub fn truncated(d: f64) -> f64 {
    d.min(PI)
}

/// Spherical join distance built from metrics on the two factors.
///
/// ```
/// use catfill::model_spaces::{spherical_join_distance, JoinPoint};
/// use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
///
/// let p = JoinPoint { phi: FRAC_PI_4, a_point: 0.0, b_point: 0.0 };
/// let q = JoinPoint { phi: FRAC_PI_4, a_point: PI, b_point: 0.0 };
/// let d = spherical_join_distance(&p, &q, |x: &f64, y: &f64| (x - y).abs(), |x: &f64, y: &f64| (x - y).abs());
/// assert!((d - FRAC_PI_2).abs() < 1e-12);
/// ```
pub fn spherical_join_distance<A, B>(
    p: &JoinPoint<A, B>,
    q: &JoinPoint<A, B>,
    da: impl Fn(&A, &A) -> f64,
    db: impl Fn(&B, &B) -> f64,
) -> f64 {
    let ca = truncated(da(&p.a_point, &q.a_point)).cos();
    let cb = truncated(db(&p.b_point, &q.b_point)).cos();
    let c = p.phi.cos() * q.phi.cos() * ca + p.phi.sin() * q.phi.sin() * cb;
    c.clamp(-1.0, 1.0).acos()
}

/// Intrinsic distance on a circle of the given circumference.
pub fn circle_distance(x: f64, y: f64, circumference: f64) -> f64 {
    let d = (x - y).rem_euclid(circumference);
    d.min(circumference - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(x: &f64, y: &f64) -> f64 {
        (x - y).abs()
    }

    #[test]
    fn degenerates_to_first_factor() {
        let p = JoinPoint { phi: 0.0, a_point: 0.3, b_point: 5.0 };
        let q = JoinPoint { phi: 0.0, a_point: 1.4, b_point: -2.0 };
        assert!((spherical_join_distance(&p, &q, line, line) - 1.1).abs() < 1e-12);
        let far = JoinPoint { phi: 0.0, a_point: 10.0, b_point: 0.0 };
        assert!((spherical_join_distance(&p, &far, line, line) - PI).abs() < 1e-12);
    }

    #[test]
    fn factors_are_orthogonal() {
        let p = JoinPoint { phi: 0.0, a_point: 0.0, b_point: 0.0 };
        let q = JoinPoint { phi: FRAC_PI_2, a_point: 2.0, b_point: 1.0 };
        assert!((spherical_join_distance(&p, &q, line, line) - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn quotient_equality() {
        let p = JoinPoint { phi: 0.0, a_point: 1.0, b_point: 2.0 };
        let q = JoinPoint { phi: 0.0, a_point: 1.0, b_point: 3.0 };
        assert_eq!(p, q);
        let p = JoinPoint { phi: FRAC_PI_2, a_point: 1.0, b_point: 2.0 };
        let q = JoinPoint { phi: FRAC_PI_2, a_point: 0.0, b_point: 2.0 };
        assert_eq!(p, q);
        let p = JoinPoint { phi: 0.5, a_point: 1.0, b_point: 2.0 };
        let q = JoinPoint { phi: 0.5, a_point: 0.0, b_point: 2.0 };
        assert_ne!(p, q);
    }

    #[test]
    fn circle_wraps() {
        assert!((circle_distance(0.1, 6.2, 2.0 * PI) - (0.1 + 2.0 * PI - 6.2)).abs() < 1e-12);
        assert_eq!(circle_distance(1.0, 3.0, 8.0), 2.0);
        assert_eq!(circle_distance(1.0, 7.0, 8.0), 2.0);
    }
}

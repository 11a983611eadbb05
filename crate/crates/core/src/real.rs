//! Real-branch fractional powers.
//!
//! `x^(p/q)` for negative `x` is taken on the real branch
//! `sign(x)^p * |x|^(p/q)`, which is only defined when `q` is odd.

/// Real-branch power `base^(p/q)`.
///
/// Returns `None` for a negative base with even `q`, and for `0` raised to a
/// negative exponent.
pub fn signed_pow(base: f64, p: i64, q: i64) -> Option<f64> {
    assert!(q > 0, "denominator of a rational exponent must be positive");
    let g = gcd(p.unsigned_abs(), q as u64) as i64;
    let (p, q) = (p / g.max(1), q / g.max(1));
    if base == 0.0 {
        return match p.cmp(&0) {
            std::cmp::Ordering::Less => None,
            std::cmp::Ordering::Equal => Some(1.0),
            std::cmp::Ordering::Greater => Some(0.0),
        };
    }
    if q == 1 {
        return Some(base.powi(p as i32));
    }
    if base > 0.0 {
        return Some(base.powf(p as f64 / q as f64));
    }
    if q % 2 == 0 {
        return None;
    }
    let magnitude = if q == 3 { (-base).cbrt().powi(p as i32) } else { (-base).powf(p as f64 / q as f64) };
    Some(if p % 2 == 0 { magnitude } else { -magnitude })
}

/// Real `q`-th root with the odd-root convention; `q` must be odd for negative input.
pub fn odd_root(base: f64, q: i64) -> Option<f64> {
    signed_pow(base, 1, q)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_base_odd_root() {
        assert_eq!(signed_pow(-8.0, 1, 3), Some(-2.0));
        assert_eq!(signed_pow(-8.0, 2, 3), Some(4.0));
        assert!((signed_pow(-0.25, 1, 3).unwrap() + 0.629_960_524_947_436_6).abs() < 1e-15);
    }

    #[test]
    fn even_root_of_negative_is_rejected() {
        assert_eq!(signed_pow(-1.0, 1, 2), None);
        // 2/4 reduces to 1/2
        assert_eq!(signed_pow(-1.0, 2, 4), None);
        // 2/2 reduces to an integer power
        assert_eq!(signed_pow(-3.0, 2, 2), Some(-3.0));
    }

    #[test]
    fn zero_base() {
        assert_eq!(signed_pow(0.0, 3, 2), Some(0.0));
        assert_eq!(signed_pow(0.0, -1, 3), None);
    }
}

//! `f(x) = log(1-x)/log(x)`, its inverse, and a Lambert W upper bound.

/// `f(x) = log(1-x) / log(x)` on `(0, 1)`; strictly increasing.
pub fn f_log_ratio(x: f64) -> f64 {
    (1.0 - x).ln() / x.ln()
}

/// Lower bound `1 / (-2 log x)` on `f'(x)` for `x ∈ (0, 1/2]`.
pub fn f_prime_lower(x: f64) -> f64 {
    1.0 / (-2.0 * x.ln())
}

pub const F_INVERSE_TOL: f64 = 1e-13;

/// Solves `f(x) = y` on `[lo, hi]` by bisection; `y` is clamped to
/// `[f(lo), f(hi)]` first.
pub fn f_inverse(y: f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let y = y.clamp(f_log_ratio(lo), f_log_ratio(hi));
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f_log_ratio(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A certified upper bound on the principal branch `W(v)`, `v ≥ 0`:
/// `w · e^w ≥ v` holds for the returned `w`.
pub fn lambert_w_upper(v: f64) -> f64 {
    if v < std::f64::consts::E {
        return (1.0 + v).ln();
    }
    let mut w = v.ln();
    for _ in 0..100 {
        let ew = w.exp();
        let step = (w * ew - v) / (ew * (w + 1.0));
        w -= step;
        if step.abs() < 1e-12 {
            w += step.abs();
            break;
        }
    }
    while w * w.exp() < v {
        w = next_up(w);
    }
    w
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn f_fixed_point_and_round_trip() {
        assert_eq!(f_log_ratio(0.5), 1.0);
        assert!((f_inverse(1.0, 1e-6, 0.5, F_INVERSE_TOL) - 0.5).abs() < 1e-12);
        for x in [0.01, 0.1, 0.3, 0.45, 0.6] {
            assert!((f_inverse(f_log_ratio(x), 1e-6, 2.0 / 3.0, F_INVERSE_TOL) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn f_is_increasing_above_its_derivative_bound() {
        let h = 1e-7;
        for i in 1..500 {
            let x = i as f64 / 1000.0;
            let slope = (f_log_ratio(x + h) - f_log_ratio(x - h)) / (2.0 * h);
            assert!(slope >= f_prime_lower(x) * (1.0 - 1e-6), "x = {x}");
        }
    }

    #[test]
    fn lambert_values() {
        assert!((lambert_w_upper(std::f64::consts::E) - 1.0).abs() < 1e-10);
        let w = lambert_w_upper(100.0);
        assert!((w - 3.38563014029005).abs() < 1e-10);
    }

    #[test]
    fn lambert_is_an_upper_bound() {
        let mut rng = crate::rng::stream(17);
        for _ in 0..1000 {
            let v = 10f64.powf(rng.gen_range(-3.0..8.0));
            let w = lambert_w_upper(v);
            assert!(w * w.exp() >= v);
            assert!(w <= (1.0 + v).ln() + 1e-12);
        }
        for n in [3.0f64, 10.0, 50.0, 200.0, 800.0, 1e6] {
            assert!(lambert_w_upper(n) <= n.ln() - n.ln().ln() + 1.0);
        }
    }
}

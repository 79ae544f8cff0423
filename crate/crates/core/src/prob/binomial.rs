//! Closed-form success probabilities of the goal families.

use crate::goal::FamilyKind;

/// Above this `n` the pmf is accumulated in log space.
const LOG_SPACE_ABOVE: usize = 30;

/// `p^{|w|₁} (1-p)^{n-|w|₁}`.
pub fn phi_value(p: f64, word: &[bool]) -> f64 {
    let ones = word.iter().filter(|&&b| b).count();
    pow(p, ones) * pow(1.0 - p, word.len() - ones)
}

fn pow(x: f64, k: usize) -> f64 {
    // 0^0 = 1.
    if k == 0 {
        1.0
    } else {
        x.powi(k as i32)
    }
}

/// The whole pmf `P(X = r)`, `X ~ Bin(n, p)`, `r = 0..=n`.
pub fn pmf_all(p: f64, n: usize) -> Vec<f64> {
    if p <= 0.0 || p >= 1.0 {
        let mut out = vec![0.0; n + 1];
        out[if p <= 0.0 { 0 } else { n }] = 1.0;
        return out;
    }
    if n <= LOG_SPACE_ABOVE {
        let mut c = 1.0;
        (0..=n)
            .map(|r| {
                if r > 0 {
                    c = c * (n - r + 1) as f64 / r as f64;
                }
                c * pow(p, r) * pow(1.0 - p, n - r)
            })
            .collect()
    } else {
        let log_odds = (p / (1.0 - p)).ln();
        let mut log_pmf = n as f64 * (-p).ln_1p();
        (0..=n)
            .map(|r| {
                if r > 0 {
                    log_pmf += ((n - r + 1) as f64 / r as f64).ln() + log_odds;
                }
                log_pmf.exp()
            })
            .collect()
    }
}

/// `C(n, r) p^r (1-p)^{n-r}`.
pub fn rho_value(p: f64, n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    pmf_all(p, n)[r]
}

/// `(P(X ≤ k), P(X > k))` for `k ∈ [-1, n]`. The smaller side is summed
/// directly and the other is its complement, so the pair adds to exactly 1.
pub fn tails(p: f64, n: usize, k: i64) -> (f64, f64) {
    assert!((-1..=n as i64).contains(&k), "k = {k} outside [-1, {n}]");
    if k < 0 {
        return (0.0, 1.0);
    }
    if k == n as i64 {
        return (1.0, 0.0);
    }
    let pmf = pmf_all(p, n);
    let k = k as usize;
    if (k as f64 + 0.5) < n as f64 * p {
        let le: f64 = pmf[..=k].iter().sum::<f64>().min(1.0);
        (le, 1.0 - le)
    } else {
        let gt: f64 = pmf[k + 1..].iter().sum::<f64>().min(1.0);
        (1.0 - gt, gt)
    }
}

pub fn tail_le(p: f64, n: usize, k: i64) -> f64 {
    tails(p, n, k).0
}

pub fn tail_gt(p: f64, n: usize, k: i64) -> f64 {
    tails(p, n, k).1
}

/// Optimal success probability of a family member when the probed
/// transition has probability `p`.
pub fn family_value(kind: &FamilyKind, p: f64) -> f64 {
    match kind {
        FamilyKind::PhiW { word, .. } => phi_value(p, word),
        FamilyKind::Rho { n, r, .. } => rho_value(p, *n, *r),
        FamilyKind::PsiLe { n, k, .. } => tail_le(p, *n, *k),
        FamilyKind::ChiGt { n, k, .. } => tail_gt(p, *n, *k),
        FamilyKind::XiK { n, k, .. } => {
            let (le, gt) = tails(p, *n, *k);
            le.max(gt)
        }
        FamilyKind::XiRs { r, s, complement, .. } => {
            let q = if *complement { 1.0 - p } else { p };
            pow(q, *r).max(pow(1.0 - q, *s))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        assert!((phi_value(0.35, &[true, false, true]) - 0.079625).abs() < 1e-15);
        assert_eq!(phi_value(0.7, &[]), 1.0);
        assert_eq!(phi_value(0.0, &[false; 4]), 1.0);
        assert_eq!(phi_value(1.0, &[true; 4]), 1.0);
    }

    #[test]
    fn family_values() {
        let xi = FamilyKind::XiRs { a: 0, b: 1, r: 2, s: 1, complement: false };
        assert!((family_value(&xi, 0.3) - 0.7).abs() < 1e-15);
        let xi = FamilyKind::XiRs { a: 0, b: 1, r: 2, s: 1, complement: true };
        assert!((family_value(&xi, 0.3) - 0.49).abs() < 1e-15);
        let k = FamilyKind::XiK { a: 0, b: 1, n: 20, k: 6 };
        assert!((family_value(&k, 0.35) - (1.0 - 0.416625418219)).abs() < 1e-9);
    }

    #[test]
    fn pmf_normalizes() {
        let total: f64 = (0..=10).map(|r| rho_value(0.3, 10, r)).sum();
        assert!((total - 1.0).abs() < 1e-14);
        let total: f64 = pmf_all(0.3, 500).iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_space_matches_direct() {
        // n = 31 is the first log-space size; compare with the direct product.
        let p = 0.35;
        let log = pmf_all(p, 31);
        let mut c = 1.0;
        for (r, &value) in log.iter().enumerate() {
            if r > 0 {
                c = c * (31 - r + 1) as f64 / r as f64;
            }
            let direct = c * p.powi(r as i32) * (1.0 - p).powi(31 - r as i32);
            assert!((value - direct).abs() <= 1e-13 * direct.max(1e-300) + 1e-300, "r = {r}");
        }
    }

    #[test]
    fn tail_edges_and_crossover_regime() {
        assert_eq!(tail_le(0.4, 10, -1), 0.0);
        assert_eq!(tail_gt(0.4, 10, 10), 0.0);
        // The majority switches between k = 6 and k = 7.
        assert!((tail_le(0.35, 20, 6) - 0.416625418219).abs() < 1e-11);
        assert!((tail_le(0.35, 20, 7) - 0.601026).abs() < 1e-6);
        for k in -1..=20 {
            let (le, gt) = tails(0.35, 20, k);
            assert_eq!(le + gt, 1.0);
        }
    }
}

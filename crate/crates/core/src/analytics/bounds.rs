//! Closed-form bounds on SI hitting times.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::InfectionRate;

/// `H_n = sum_{i=1}^n 1/i`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> f64 {
    // Summed smallest-first for accuracy.
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirthChainBound {
    /// `sum_{i=1}^{k-1} 1 / (lambda i (n - i))`.
    pub exact: f64,
    /// Harmonic-number relaxation of `exact`.
    pub simplified: f64,
}

fn check_k(n: u64, k: u64) -> Result<()> {
    if k < 2 || k > n {
        return Err(invalid("k", format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(())
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(name, format!("must be finite and positive, got {v}")));
    }
    Ok(())
}

/// Upper bound on `E[tau_k]` for `beta = inf` from the coupled birth chain
/// that moves from `i` to `i + 1` infected at rate `lambda i (n - i)`.
pub fn bound_tau_beta_inf(n: u64, k: u64, lambda: f64) -> Result<BirthChainBound> {
    check_k(n, k)?;
    check_positive("lambda", lambda)?;
    let exact: f64 = (1..k)
        .rev()
        .map(|i| 1.0 / (lambda * i as f64 * (n - i) as f64))
        .sum();
    let (nf, kf) = (n as f64, k as f64);
    let simplified = if k == n {
        2.0 * (1.0 + (nf - 1.0).ln()) / (lambda * nf)
    } else {
        (2.0 + (nf * kf / (nf - kf)).ln()) / (lambda * nf)
    };
    Ok(BirthChainBound { exact, simplified })
}

/// `(1 / (lambda n)) (H_{k-1} + H_{n-1} - H_{n-k})`.
pub fn harmonic_form_tau_beta_inf(n: u64, k: u64, lambda: f64) -> Result<f64> {
    check_k(n, k)?;
    check_positive("lambda", lambda)?;
    Ok((harmonic(k - 1) + harmonic(n - 1) - harmonic(n - k)) / (lambda * n as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactBound {
    /// `sqrt(pi / (2 beta lambda)) sum_{m=1}^{k-1} 1 / sqrt(m (n - m))`.
    pub sum: f64,
    /// Continuum limit `sqrt(pi / (2 beta lambda)) acos(1 - 2k/n)`.
    pub integral: f64,
}

/// Upper bound on `E[tau_k]` for finite `beta`, as a sum and as its
/// large-`n` integral.
pub fn bound_tau_beta_finite(n: u64, k: u64, beta: f64, lambda: f64) -> Result<ContactBound> {
    check_k(n, k)?;
    check_positive("beta", beta)?;
    check_positive("lambda", lambda)?;
    let scale = (PI / (2.0 * beta * lambda)).sqrt();
    let sum: f64 = (1..k)
        .map(|m| 1.0 / ((m as f64) * (n - m) as f64).sqrt())
        .sum();
    let ratio = 1.0 - 2.0 * k as f64 / n as f64;
    Ok(ContactBound {
        sum: scale * sum,
        integral: scale * ratio.clamp(-1.0, 1.0).acos(),
    })
}

/// `n`-independent ceiling `sqrt(pi^3 / (2 beta lambda))` on `E[tau_n]`.
pub fn full_infection_ceiling(beta: f64, lambda: f64) -> Result<f64> {
    check_positive("beta", beta)?;
    check_positive("lambda", lambda)?;
    Ok((PI.powi(3) / (2.0 * beta * lambda)).sqrt())
}

/// Asymptotic lower bound on `tau_n`: `sqrt(2 log n / (beta lambda n))` for
/// finite `beta`, `log n / (lambda n)` for `beta = inf`.
///
/// `n` is real-valued so the formula can be probed off the integers.
pub fn lower_bound_tau_n(n: f64, beta: InfectionRate, lambda: f64) -> Result<f64> {
    if !(n >= 2.0) || !n.is_finite() {
        return Err(invalid("n", format!("must be finite and >= 2, got {n}")));
    }
    check_positive("lambda", lambda)?;
    match beta {
        InfectionRate::Finite(b) => {
            check_positive("beta", b)?;
            Ok((2.0 * n.ln() / (b * lambda * n)).sqrt())
        }
        InfectionRate::Infinite => Ok(n.ln() / (lambda * n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn birth_chain_small_case() {
        let b = bound_tau_beta_inf(3, 2, 1.0).unwrap();
        assert!((b.exact - 0.5).abs() < 1e-15);
        // (1/3)(H_1 + H_2 - H_1)
        assert!((harmonic_form_tau_beta_inf(3, 2, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(b.exact <= b.simplified);
    }

    #[test]
    fn birth_chain_full_infection_simplified() {
        let b = bound_tau_beta_inf(1000, 1000, 1.0).unwrap();
        let expected = 2.0 * (1.0 + 999f64.ln()) / 1000.0;
        assert!((b.simplified - expected).abs() < 1e-15);
        // Printed to five figures as 1.5815e-2; the value is 1.58135e-2.
        assert!((b.simplified - 1.5815e-2).abs() < 2e-6);
        assert!(b.exact <= b.simplified);
        assert!(bound_tau_beta_inf(10, 11, 1.0).is_err());
        assert!(bound_tau_beta_inf(10, 1, 1.0).is_err());
    }

    #[test]
    fn contact_bound_examples() {
        let half = bound_tau_beta_finite(100, 50, 2.0, 0.5).unwrap();
        let scale = (PI / 2.0).sqrt();
        assert!((half.integral - scale * PI / 2.0).abs() < 1e-14);
        let full = bound_tau_beta_finite(100, 100, 1.0, 1.0).unwrap();
        assert!((full.integral - (PI.powi(3) / 2.0).sqrt()).abs() < 1e-14);
        assert!((full.integral - 3.9374).abs() < 1e-4);
        assert!((full_infection_ceiling(1.0, 1.0).unwrap() - full.integral).abs() < 1e-14);
    }

    #[test]
    fn riemann_sum_approaches_integral() {
        let n = 1_000_000;
        let b = bound_tau_beta_finite(n, n / 2, 1.0, 1.0).unwrap();
        assert!((b.sum / b.integral - 1.0).abs() <= 1e-2);
    }

    #[test]
    fn lower_bound_examples() {
        let fin = lower_bound_tau_n(E, InfectionRate::Finite(1.0), 1.0).unwrap();
        assert!((fin - (2.0 / E).sqrt()).abs() < 1e-15);
        assert!((fin - 0.8578).abs() < 1e-4);
        let inf = lower_bound_tau_n(E, InfectionRate::Infinite, 1.0).unwrap();
        assert!((inf - 1.0 / E).abs() < 1e-15);
        for &n in &[10.0, 1000.0, 1e6] {
            let ratio = lower_bound_tau_n(4.0 * n, InfectionRate::Finite(1.0), 1.0).unwrap()
                / lower_bound_tau_n(n, InfectionRate::Finite(1.0), 1.0).unwrap();
            let expected = ((4.0 * n as f64).ln() / (4.0 * (n as f64).ln())).sqrt();
            assert!((ratio - expected).abs() < 1e-14);
        }
    }
}

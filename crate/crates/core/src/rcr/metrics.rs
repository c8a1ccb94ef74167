use crate::error::{Error, Result};
use crate::scalar::Real;

/// `τ/T = 1/ln 2`: above this ratio the cyclic error underestimates the
/// asymptotic error.
pub const ALPHA_UNITY_TAU_OVER_PERIOD: f64 = std::f64::consts::LOG2_E;

/// `P̄ₙ = P̄∞ + exp(-n T/τ) (P̄₀ - P̄∞)`.
pub fn mean_pressure_recursion<T: Real>(p0_mean: T, p_inf_mean: T, tau_over_period: T, n: usize) -> T {
    let decay = (-T::of_usize(n) / tau_over_period).exp();
    p_inf_mean + decay * (p0_mean - p_inf_mean)
}

/// `|P̄∞ - P̄ₙ| / |P̄∞|`.
pub fn asymptotic_error<T: Real>(p_n_mean: T, p_inf_mean: T) -> Result<T> {
    if p_inf_mean == T::zero() {
        return Err(Error::ZeroAsymptote);
    }
    Ok((p_inf_mean - p_n_mean).abs() / p_inf_mean.abs())
}

/// `|P̄ₙ - P̄ₙ₋₁| / |P̄∞|` for consecutive cycle means.
pub fn cyclic_error<T: Real>(p_prev_mean: T, p_curr_mean: T, p_inf_mean: T) -> Result<T> {
    if p_inf_mean == T::zero() {
        return Err(Error::ZeroAsymptote);
    }
    Ok((p_curr_mean - p_prev_mean).abs() / p_inf_mean.abs())
}

/// `α = ε∞ / εₙ = 1 / (exp(T/τ) - 1)`.
pub fn error_ratio_alpha<T: Real>(tau_over_period: T) -> T {
    T::one() / (T::one() / tau_over_period).exp_m1()
}

fn check_tolerance<T: Real>(epsilon: T) -> Result<()> {
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::param(format!("tolerance {epsilon} outside (0, 1]")));
    }
    Ok(())
}

/// Smallest `n ≥ 0` with `exp(-n T/τ) |1 - P̄₀/P̄∞| ≤ ε`.
///
/// A tolerance of exactly 1 is accepted as the degenerate upper end of the
/// range and always yields 0 for a zero initial state.
pub fn cycles_to_convergence<T: Real>(tau_over_period: T, epsilon: T, p0_over_pinf: T) -> Result<usize> {
    check_tolerance(epsilon)?;
    if !(tau_over_period > T::zero() && tau_over_period.is_finite()) {
        return Err(Error::param(format!("τ/T must be positive, got {tau_over_period}")));
    }
    let initial = (T::one() - p0_over_pinf).abs();
    if initial <= epsilon {
        return Ok(0);
    }
    let bound = -tau_over_period * (epsilon / initial).ln();
    Ok(bound.ceil().max(T::zero()).to_usize().unwrap_or(usize::MAX))
}

/// Zero initial pressure: `ceil(-τ/T · ln ε)`.
pub fn cycles_to_convergence_zero_ic<T: Real>(tau_over_period: T, epsilon: T) -> Result<usize> {
    cycles_to_convergence(tau_over_period, epsilon, T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: iterate the recursion until the asymptotic error is within ε.
    fn brute_cycles(tau_over_t: f64, eps: f64, p0: f64) -> usize {
        let mut n = 0;
        loop {
            let pn = mean_pressure_recursion(p0, 1.0, tau_over_t, n);
            if asymptotic_error(pn, 1.0).unwrap() <= eps * (1.0 + 1e-12) {
                return n;
            }
            n += 1;
        }
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(mean_pressure_recursion(2.0f64, 2.0, 3.0, 17), 2.0);
        let v = mean_pressure_recursion(0.0f64, 1.0, 2.0, 2);
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((v - 0.63212).abs() < 1e-5);
        assert!((mean_pressure_recursion(0.0f64, 1.0, 2.0, 2000) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_error_examples() {
        assert_eq!(asymptotic_error(4.0f64, 4.0).unwrap(), 0.0);
        let e = asymptotic_error(mean_pressure_recursion(0.0f64, 1.0, 2.0, 4), 1.0).unwrap();
        assert!((e - (-2.0f64).exp()).abs() < 1e-15);
        assert!((e - 0.13534).abs() < 1e-5);
        // P̄₀ = 0 gives exactly exp(-nT/τ)
        for n in 0..20 {
            let e = asymptotic_error(mean_pressure_recursion(0.0f64, 3.0, 4.4, n), 3.0).unwrap();
            assert!((e - (-(n as f64) / 4.4).exp()).abs() < 1e-14);
        }
        assert!(matches!(asymptotic_error(1.0f64, 0.0), Err(Error::ZeroAsymptote)));
        // from above
        assert!((asymptotic_error(1.5f64, 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cycle_count_examples() {
        assert_eq!(cycles_to_convergence(4.4, 0.01, 1.0).unwrap(), 0);
        assert_eq!(cycles_to_convergence(4.4, 0.01, 0.0).unwrap(), 21);
        assert_eq!(cycles_to_convergence(2.0, 0.01, 0.0).unwrap(), 10);
        assert_eq!(cycles_to_convergence_zero_ic(4.4, 0.01).unwrap(), 21);
        assert_eq!(cycles_to_convergence_zero_ic(0.3, 0.01).unwrap(), 2);
        assert_eq!(cycles_to_convergence_zero_ic(9.6, 0.01).unwrap(), 45);
        assert_eq!(cycles_to_convergence_zero_ic(4.4, 1.0).unwrap(), 0);
        assert!(cycles_to_convergence_zero_ic(4.4, 0.0).is_err());
        assert!(cycles_to_convergence_zero_ic(4.4, 1.5).is_err());
    }

    #[test]
    fn cycle_count_matches_brute_force() {
        for &t in &[0.1, 0.3, 1.0, 1.44, 2.0, 4.4, 7.3, 9.6] {
            for &eps in &[0.1, 0.01, 1e-3, 1e-6] {
                for &p0 in &[0.0, 0.5, 0.9, 1.3, -2.0] {
                    assert_eq!(
                        cycles_to_convergence(t, eps, p0).unwrap(),
                        brute_cycles(t, eps, p0),
                        "τ/T={t} ε={eps} p0={p0}"
                    );
                }
            }
        }
    }

    #[test]
    fn cyclic_error_examples() {
        assert_eq!(cyclic_error(2.0f64, 2.0, 3.0).unwrap(), 0.0);
        let p1 = mean_pressure_recursion(0.0f64, 1.0, 2.0, 1);
        let p2 = mean_pressure_recursion(0.0, 1.0, 2.0, 2);
        let e = cyclic_error(p1, p2, 1.0).unwrap();
        let hand = (-1.0f64).exp() * (0.5f64.exp() - 1.0);
        assert!((e - hand).abs() < 1e-15);
        assert!((e - 0.238651).abs() < 1e-6);
        assert!(cyclic_error(1.0f64, 2.0, 0.0).is_err());
    }

    #[test]
    fn paper_regime_alpha_and_cyclic_error() {
        let alpha: f64 = error_ratio_alpha(4.4);
        assert!((3.87..=3.97).contains(&alpha), "{alpha}");
        assert!((error_ratio_alpha(ALPHA_UNITY_TAU_OVER_PERIOD) - 1.0f64).abs() < 1e-12);
        // ε∞ = 1 % at convergence gives εₙ = ε∞/α ≈ 0.26 %
        let eps_n = 0.01 / alpha;
        assert!((eps_n - 0.0026).abs() < 0.00005, "{eps_n}");
        assert!(error_ratio_alpha(1e-3f64) < 1e-12);
    }
}

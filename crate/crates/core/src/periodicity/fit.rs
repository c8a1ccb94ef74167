use crate::error::{Error, Result};
use crate::rcr::RcrParameters;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions<T> {
    /// Errors at or below this value are excluded from the fit.
    pub floor: T,
    /// Leading cycles to skip (early cycles may carry faster modes).
    pub skip: usize,
}

impl<T: Real> Default for FitOptions<T> {
    fn default() -> Self {
        Self { floor: T::lit(1e-6), skip: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeConstantFit<T> {
    pub tau_over_period: T,
    /// Slope of `ln ε∞` per cycle.
    pub slope: T,
    pub intercept: T,
    /// Root-mean-square residual of `ln ε∞`.
    pub residual: T,
    pub cycles_used: usize,
}

/// Least-squares line through `(n, ln ε∞(n))` for cycles `n = 1, 2, …`
/// above the floor; `τ̄/T = -1/slope`.
pub fn fit_model_time_constant<T: Real>(errors: &[T], options: &FitOptions<T>) -> Result<TimeConstantFit<T>> {
    let points: Vec<(T, T)> = errors
        .iter()
        .enumerate()
        .skip(options.skip)
        .filter(|(_, &e)| e.is_finite() && e > options.floor)
        .map(|(i, &e)| (T::of_usize(i + 1), e.ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} cycles above the error floor, at least 3 required",
            points.len()
        )));
    }
    let n = T::of_usize(points.len());
    let mx = points.iter().map(|p| p.0).sum::<T>() / n;
    let my = points.iter().map(|p| p.1).sum::<T>() / n;
    let sxx: T = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: T = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    if !(slope < T::zero()) {
        return Err(Error::Divergent { slope: slope.as_f64() });
    }
    let intercept = my - slope * mx;
    let ss: T = points
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    Ok(TimeConstantFit {
        tau_over_period: -T::one() / slope,
        slope,
        intercept,
        residual: (ss / n).sqrt(),
        cycles_used: points.len(),
    })
}

/// `mean(R_d C) / T` over outlets.
pub fn mean_outlet_time_constant<T: Real>(params: &[RcrParameters<T>], period: T) -> Result<T> {
    if params.is_empty() {
        return Err(Error::InsufficientData("no outlets".into()));
    }
    let total: T = params.iter().map(|p| p.time_constant()).sum();
    Ok(total / T::of_usize(params.len()) / period)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_sequence() {
        let e: Vec<f64> = (1..=20).map(|n| 0.7 * (-(n as f64) / 2.0).exp()).collect();
        let fit = fit_model_time_constant(&e, &FitOptions::default()).unwrap();
        assert!((fit.tau_over_period - 2.0).abs() < 1e-6);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn floor_and_count() {
        let e = [0.5, 0.2, 1e-7, 1e-9];
        assert!(matches!(fit_model_time_constant(&e, &FitOptions::default()), Err(Error::InsufficientData(_))));
        let rising = [0.1, 0.2, 0.4, 0.8];
        assert!(matches!(fit_model_time_constant(&rising, &FitOptions::default()), Err(Error::Divergent { .. })));
    }

    #[test]
    fn mean_of_outlets() {
        let a = RcrParameters::new(0.0f64, 0.1, 1.0).unwrap();
        let b = RcrParameters::new(0.0, 0.3, 1.0).unwrap();
        assert!((mean_outlet_time_constant(&[a, b], 1.0).unwrap() - 0.2).abs() < 1e-15);
        assert!((mean_outlet_time_constant(&[a, a], 1.0).unwrap() - 0.1).abs() < 1e-15);
        assert!(mean_outlet_time_constant::<f64>(&[], 1.0).is_err());
    }
}

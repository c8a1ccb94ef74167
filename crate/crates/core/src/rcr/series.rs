use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniformly sampled signal `values[i] = x(start + i * dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    pub start: T,
    pub dt: T,
    pub values: Vec<T>,
}

impl<T: Real> TimeSeries<T> {
    pub fn new(start: T, dt: T, values: Vec<T>) -> Result<Self> {
        if !(dt.is_finite() && dt > T::zero()) {
            return Err(Error::param(format!("time step must be positive, got {dt}")));
        }
        Ok(Self { start, dt, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> T {
        self.start + T::of_usize(i) * self.dt
    }

    pub fn end_time(&self) -> T {
        self.time(self.values.len().saturating_sub(1))
    }

    /// Number of samples per period; fails when `period / dt` is not an
    /// integer within `rel_tol` (relative to the period).
    pub fn samples_per_period(&self, period: T, rel_tol: T) -> Result<usize> {
        samples_per_period(period, self.dt, rel_tol)
    }

    /// Trapezoidal time average over samples `[first, last]`.
    pub fn trapezoid_mean(&self, first: usize, last: usize) -> T {
        trapezoid_mean(&self.values[first..=last])
    }
}

/// `round(period / dt)`, checked against `rel_tol * period`.
pub fn samples_per_period<T: Real>(period: T, dt: T, rel_tol: T) -> Result<usize> {
    if !(period > T::zero() && dt > T::zero()) {
        return Err(Error::param("period and time step must be positive"));
    }
    let ratio = period / dt;
    let m = ratio.round();
    if m < T::one() {
        return Err(Error::Misaligned(format!("time step {dt} exceeds the period {period}")));
    }
    if (m * dt - period).abs() > rel_tol * period {
        return Err(Error::Misaligned(format!("period {period} is not a multiple of the time step {dt}")));
    }
    m.to_usize().ok_or_else(|| Error::param("samples per period out of range"))
}

/// Trapezoidal mean of uniformly spaced samples (first and last sample are
/// the interval end points).
pub fn trapezoid_mean<T: Real>(samples: &[T]) -> T {
    match samples.len() {
        0 => T::nan(),
        1 => samples[0],
        n => {
            let inner: T = samples[1..n - 1].iter().copied().sum();
            (inner + T::half() * (samples[0] + samples[n - 1])) / T::of_usize(n - 1)
        }
    }
}

/// Per-cycle means `P̄_0, P̄_1, …` of a quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleMeans<T> {
    pub period: T,
    pub values: Vec<T>,
}

impl<T: Real> CycleMeans<T> {
    /// Means of every complete cycle in `series`.
    pub fn from_series(series: &TimeSeries<T>, period: T) -> Result<Self> {
        let m = series.samples_per_period(period, T::lit(1e-6))?;
        if series.len() < m + 1 {
            return Err(Error::OutOfRange("series shorter than one cycle".into()));
        }
        let cycles = (series.len() - 1) / m;
        let values = (0..cycles).map(|n| series.trapezoid_mean(n * m, (n + 1) * m)).collect();
        Ok(Self { period, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Trapezoidal average of `series` over the window `[nT, (n+1)T]`, with cycle
/// 0 starting at the first sample.
pub fn mean_over_cycle<T: Real>(series: &TimeSeries<T>, period: T, cycle_index: usize) -> Result<T> {
    let m = series.samples_per_period(period, T::lit(1e-6))?;
    let first = cycle_index * m;
    let last = first + m;
    if last >= series.len() {
        return Err(Error::OutOfRange(format!(
            "cycle {cycle_index} needs samples up to {last}, series has {}",
            series.len()
        )));
    }
    Ok(series.trapezoid_mean(first, last))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_means() {
        let s = TimeSeries::new(0.0, 0.01, vec![3.5; 301]).unwrap();
        for n in 0..3 {
            assert_eq!(mean_over_cycle(&s, 1.0, n).unwrap(), 3.5);
        }
        assert!(mean_over_cycle(&s, 1.0, 3).is_err());
    }

    #[test]
    fn sine_mean_vanishes() {
        let m = 1000;
        let dt = 1.0 / m as f64;
        let vals = (0..=m).map(|i| (2.0 * std::f64::consts::PI * i as f64 * dt).sin()).collect();
        let s = TimeSeries::new(0.0, dt, vals).unwrap();
        assert!(mean_over_cycle(&s, 1.0, 0).unwrap().abs() <= 1e-6);
    }

    #[test]
    fn step_response_means_follow_recursion() {
        // P(t) = 1 - exp(-t/tau), tau/T = 2. Closed-form cycle means are the
        // independent oracle: 1 - exp(-n/2) * 2 * (1 - exp(-1/2)).
        let tau = 2.0;
        let m = 2000;
        let dt = 1.0 / m as f64;
        let vals = (0..=11 * m).map(|i| 1.0 - (-(i as f64 * dt) / tau).exp()).collect();
        let s = TimeSeries::new(0.0, dt, vals).unwrap();
        let p0 = mean_over_cycle(&s, 1.0, 0).unwrap();
        for n in 1..=10 {
            let exact = 1.0 - (-(n as f64) / tau).exp() * tau * (1.0 - (-1.0 / tau).exp());
            let got = mean_over_cycle(&s, 1.0, n).unwrap();
            assert!((got - exact).abs() < 1e-7, "n={n}: {got} vs {exact}");
            let recursion = 1.0 + (-(n as f64) / tau).exp() * (p0 - 1.0);
            assert!((got - recursion).abs() < 1e-7);
        }
    }

    #[test]
    fn misaligned_grid_is_rejected() {
        let s = TimeSeries::new(0.0, 0.3, vec![0.0; 20]).unwrap();
        assert!(matches!(s.samples_per_period(1.0, 1e-6), Err(Error::Misaligned(_))));
    }
}

//! Periodic-state check for multi-outlet simulations.
//!
//! Each outlet of a pulsatile simulation ends in an RCR element. Given the
//! outlet flow and pressure traces, a companion 0D model driven by the last
//! simulated flow cycle predicts the limit-cycle pressure. Comparing every
//! simulated cycle mean against that prediction gives the asymptotic error
//! per cycle, from which a model time constant is fitted and the remaining
//! number of cycles is predicted.

mod errors;
mod fit;
mod predict;

pub use errors::{asymptotic_error_per_cycle, OutletErrors};
pub use fit::{fit_model_time_constant, mean_outlet_time_constant, FitOptions, TimeConstantFit};
pub use predict::{predict_all, predict_periodic_pressure, OutletPrediction, PeriodicPrediction, PredictOptions};

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::rcr::{cycles_to_convergence, samples_per_period, PeriodicWaveform, RcrParameters, TimeSeries};
use crate::scalar::Real;

/// Relative tolerance for the trace grid to line up with cycle boundaries.
pub const GRID_TOLERANCE: f64 = 1e-6;

/// Flow and pressure recorded at one outlet.
#[derive(Debug, Clone, PartialEq)]
pub struct OutletTrace<T> {
    pub id: String,
    pub params: RcrParameters<T>,
    pub flow: Vec<T>,
    pub pressure: Vec<T>,
}

/// Outlet traces on a shared uniform grid starting at a cycle boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct OutletTraceSet<T> {
    period: T,
    dt: T,
    steps_per_cycle: usize,
    outlets: Vec<OutletTrace<T>>,
}

impl<T: Real> OutletTraceSet<T> {
    pub fn new(period: T, dt: T, outlets: Vec<OutletTrace<T>>) -> Result<Self> {
        let steps_per_cycle = samples_per_period(period, dt, T::lit(GRID_TOLERANCE))?;
        if steps_per_cycle < 2 {
            return Err(Error::InsufficientData("at least 2 samples per cycle required".into()));
        }
        let first = outlets.first().ok_or_else(|| Error::InsufficientData("no outlets".into()))?;
        let len = first.flow.len();
        for o in &outlets {
            for series in [&o.flow, &o.pressure] {
                if series.len() != len {
                    return Err(Error::LengthMismatch { expected: len, found: series.len() });
                }
                if series.iter().any(|v| !v.is_finite()) {
                    return Err(Error::param(format!("outlet {} has non-finite samples", o.id)));
                }
            }
        }
        if len < steps_per_cycle + 1 {
            return Err(Error::InsufficientData(format!(
                "{len} samples do not cover one cycle of {steps_per_cycle} steps"
            )));
        }
        Ok(Self { period, dt, steps_per_cycle, outlets })
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn steps_per_cycle(&self) -> usize {
        self.steps_per_cycle
    }

    pub fn outlets(&self) -> &[OutletTrace<T>] {
        &self.outlets
    }

    pub fn sample_count(&self) -> usize {
        self.outlets[0].flow.len()
    }

    /// Complete cycles in the traces.
    pub fn cycles(&self) -> usize {
        (self.sample_count() - 1) / self.steps_per_cycle
    }

    /// Sample windows of every complete cycle.
    pub fn windows(&self) -> Vec<RangeInclusive<usize>> {
        let m = self.steps_per_cycle;
        (0..self.cycles()).map(|k| k * m..=(k + 1) * m).collect()
    }

    /// Flow of the last complete cycle as a periodic waveform.
    pub fn last_flow_cycle(&self, outlet: usize) -> Result<PeriodicWaveform<T>> {
        let m = self.steps_per_cycle;
        let start = (self.cycles() - 1) * m;
        let times = (0..m).map(|i| T::of_usize(i) * self.dt).collect();
        let values = self.outlets[outlet].flow[start..start + m].to_vec();
        PeriodicWaveform::from_parts(self.period, times, values)
    }
}

/// Inclusive sample windows `[kT, (k+1)T]` of every complete cycle of
/// `series`; a trailing partial cycle is dropped.
pub fn segment_cycles<T: Real>(series: &TimeSeries<T>, period: T) -> Result<Vec<RangeInclusive<usize>>> {
    let m = series.samples_per_period(period, T::lit(GRID_TOLERANCE))?;
    if series.len() < m + 1 {
        return Err(Error::InsufficientData(format!("series of {} samples is shorter than one cycle", series.len())));
    }
    let cycles = (series.len() - 1) / m;
    Ok((0..cycles).map(|k| k * m..=(k + 1) * m).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions<T> {
    /// Target asymptotic error; also the bound on the flow cyclic change.
    pub epsilon_target: T,
    pub predict: PredictOptions<T>,
    pub fit: FitOptions<T>,
}

impl<T: Real> Default for CheckOptions<T> {
    fn default() -> Self {
        Self { epsilon_target: T::lit(0.01), predict: PredictOptions::default(), fit: FitOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutletReport<T> {
    pub id: String,
    pub prediction: OutletPrediction<T>,
    pub errors: OutletErrors<T>,
    pub fit: Option<TimeConstantFit<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub epsilon_target: T,
    pub cycles: usize,
    pub outlets: Vec<OutletReport<T>>,
    /// Fit of the per-cycle maximum of the outlet asymptotic errors.
    pub fitted_tau_over_period: Option<T>,
    pub mean_tau_over_period: T,
    /// Largest pressure asymptotic error over outlets, last cycle.
    pub last_asymptotic_error: T,
    /// Largest flow cyclic change over outlets, last cycle (zero for a
    /// single cycle).
    pub last_flow_change: T,
    /// Cycle count (1-based, counted from the first traced cycle) at which
    /// the target is expected to be met.
    pub predicted_cycles: usize,
    /// First cycle meeting both the pressure and flow criteria.
    pub first_converged_cycle: Option<usize>,
    pub converged: bool,
    /// The flow had not settled when the prediction was made, or only one
    /// cycle was available to judge it.
    pub provisional: bool,
}

/// Runs the full check: predicts each outlet's periodic pressure from its
/// last flow cycle, measures the errors of every cycle and decides whether
/// the traces are periodic at `options.epsilon_target`.
pub fn check_convergence<T: Real>(
    traces: &OutletTraceSet<T>,
    options: &CheckOptions<T>,
) -> Result<ConvergenceReport<T>> {
    let eps = options.epsilon_target;
    if !(eps > T::zero() && eps <= T::one()) {
        return Err(Error::param(format!("target tolerance {eps} outside (0, 1]")));
    }
    let prediction = predict_all(traces, &options.predict)?;
    let errors = asymptotic_error_per_cycle(traces, &prediction)?;
    let cycles = traces.cycles();
    let period = traces.period();

    let params: Vec<_> = traces.outlets().iter().map(|o| o.params).collect();
    let mean_tau = mean_outlet_time_constant(&params, period)?;

    let worst: Vec<T> = (0..cycles).map(|n| errors.iter().fold(T::zero(), |a, e| a.max(e.asymptotic[n]))).collect();
    let fitted = fit_model_time_constant(&worst, &options.fit).ok().map(|f| f.tau_over_period);
    let tau_used = fitted.unwrap_or(mean_tau);

    let mut predicted_cycles = 1;
    for e in &errors {
        let ratio = e.pressure_means[0] / e.limit_mean;
        let n = cycles_to_convergence(tau_used, eps, ratio)?;
        predicted_cycles = predicted_cycles.max(1 + n);
    }

    let passes = |n: usize| errors.iter().all(|e| e.asymptotic[n] <= eps && (n == 0 || e.flow_cyclic[n - 1] <= eps));
    let first_converged_cycle = (0..cycles).find(|&n| passes(n)).map(|n| n + 1);
    let last_flow_change =
        errors.iter().fold(T::zero(), |a, e| a.max(e.flow_cyclic.last().copied().unwrap_or(T::zero())));
    let converged = passes(cycles - 1);
    let provisional = cycles < 2 || last_flow_change > eps;

    let outlets = errors
        .into_iter()
        .zip(prediction.outlets)
        .map(|(errors, prediction)| OutletReport {
            id: errors.id.clone(),
            fit: fit_model_time_constant(&errors.asymptotic, &options.fit).ok(),
            prediction,
            errors,
        })
        .collect();

    Ok(ConvergenceReport {
        epsilon_target: eps,
        cycles,
        outlets,
        fitted_tau_over_period: fitted,
        mean_tau_over_period: mean_tau,
        last_asymptotic_error: worst[cycles - 1],
        last_flow_change,
        predicted_cycles,
        first_converged_cycle,
        converged,
        provisional,
    })
}

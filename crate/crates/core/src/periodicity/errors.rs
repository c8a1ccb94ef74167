use super::{OutletTraceSet, PeriodicPrediction};
use crate::error::{Error, Result};
use crate::rcr::{asymptotic_error, cyclic_error, trapezoid_mean};
use crate::scalar::Real;

/// Per-cycle error sequences of one outlet. Cycle vectors are indexed from
/// the first traced cycle; the cyclic vectors start at the second cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct OutletErrors<T> {
    pub id: String,
    /// `P̄_0D` used as the limit.
    pub limit_mean: T,
    pub pressure_means: Vec<T>,
    pub flow_means: Vec<T>,
    /// `|P̄ₙ - P̄_0D| / |P̄_0D|`.
    pub asymptotic: Vec<T>,
    /// `|Q̄ₙ - Q̄_last| / |Q̄_last|`.
    pub flow_asymptotic: Vec<T>,
    /// `|P̄ₙ - P̄ₙ₋₁| / |P̄_0D|`.
    pub cyclic: Vec<T>,
    /// `|Q̄ₙ - Q̄ₙ₋₁| / |Q̄_last|`.
    pub flow_cyclic: Vec<T>,
    /// `max_t |P(t) - P_0D(t)| / |P̄_0D|` within each cycle.
    pub max_deviation: Vec<T>,
}

/// Flow normalizer: the last cycle mean, or the largest sample magnitude
/// when the mean vanishes, or one for an identically zero flow.
fn flow_scale<T: Real>(last_mean: T, flow: &[T]) -> T {
    if last_mean != T::zero() {
        return last_mean.abs();
    }
    let peak = flow.iter().fold(T::zero(), |a, v| a.max(v.abs()));
    if peak > T::zero() {
        peak
    } else {
        T::one()
    }
}

/// Measures every traced cycle against the predicted limit cycle.
pub fn asymptotic_error_per_cycle<T: Real>(
    traces: &OutletTraceSet<T>,
    prediction: &PeriodicPrediction<T>,
) -> Result<Vec<OutletErrors<T>>> {
    if prediction.outlets.len() != traces.outlets().len() {
        return Err(Error::LengthMismatch { expected: traces.outlets().len(), found: prediction.outlets.len() });
    }
    let windows = traces.windows();
    let dt = traces.dt();
    traces
        .outlets()
        .iter()
        .zip(&prediction.outlets)
        .map(|(outlet, pred)| {
            let limit = pred.mean;
            if limit == T::zero() {
                return Err(Error::ZeroAsymptote);
            }
            let means = |s: &[T]| -> Vec<T> { windows.iter().map(|w| trapezoid_mean(&s[w.clone()])).collect() };
            let pressure_means = means(&outlet.pressure);
            let flow_means = means(&outlet.flow);
            let q_scale = flow_scale(*flow_means.last().expect("one cycle"), &outlet.flow);
            let last_q = *flow_means.last().expect("one cycle");

            let asymptotic = pressure_means.iter().map(|&p| asymptotic_error(p, limit)).collect::<Result<Vec<_>>>()?;
            let flow_asymptotic = flow_means.iter().map(|&q| (q - last_q).abs() / q_scale).collect();
            let cyclic =
                pressure_means.windows(2).map(|w| cyclic_error(w[0], w[1], limit)).collect::<Result<Vec<_>>>()?;
            let flow_cyclic = flow_means.windows(2).map(|w| (w[1] - w[0]).abs() / q_scale).collect();
            let max_deviation = windows
                .iter()
                .map(|w| {
                    w.clone().fold(T::zero(), |a, i| {
                        let local = T::of_usize(i - w.start()) * dt;
                        a.max((outlet.pressure[i] - pred.pressure.value_at(local)).abs())
                    }) / limit.abs()
                })
                .collect();
            Ok(OutletErrors {
                id: outlet.id.clone(),
                limit_mean: limit,
                pressure_means,
                flow_means,
                asymptotic,
                flow_asymptotic,
                cyclic,
                flow_cyclic,
                max_deviation,
            })
        })
        .collect()
}

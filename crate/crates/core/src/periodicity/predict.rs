use rayon::prelude::*;

use super::OutletTraceSet;
use crate::error::Result;
use crate::network::{run_rcr_to_periodic, PeriodicOptions};
use crate::rcr::{PeriodicWaveform, RcrParameters};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct PredictOptions<T> {
    /// Periodicity tolerance of the companion 0D run.
    pub epsilon: T,
    /// The 0D step is the flow sample spacing refined until at least this
    /// many steps fall in one cycle.
    pub min_steps_per_cycle: usize,
    pub max_cycles: usize,
}

impl<T: Real> Default for PredictOptions<T> {
    fn default() -> Self {
        Self { epsilon: T::lit(1e-8), min_steps_per_cycle: 1000, max_cycles: 1000 }
    }
}

/// Limit-cycle pressure of one outlet.
#[derive(Debug, Clone, PartialEq)]
pub struct OutletPrediction<T> {
    pub pressure: PeriodicWaveform<T>,
    /// `P̄∞`, the time average of `pressure`.
    pub mean: T,
    pub cycles_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPrediction<T> {
    pub outlets: Vec<OutletPrediction<T>>,
}

/// Drives an RCR with the repeated `flow_cycle` until periodic and returns
/// its last pressure cycle. The run starts from the steady pressure
/// `R_p Q(0) + R_d Q̄`, which removes most of the transient.
pub fn predict_periodic_pressure<T: Real>(
    flow_cycle: &PeriodicWaveform<T>,
    params: &RcrParameters<T>,
    options: &PredictOptions<T>,
) -> Result<OutletPrediction<T>> {
    let knots = flow_cycle.len();
    let refine = options.min_steps_per_cycle.div_ceil(knots).max(1);
    let dt = flow_cycle.period() / T::of_usize(knots * refine);
    let p0 = params.r_proximal() * flow_cycle.value_at(T::zero()) + params.r_distal() * flow_cycle.mean();
    let run_options = PeriodicOptions { epsilon: options.epsilon, max_cycles: options.max_cycles };
    let out = run_rcr_to_periodic(params, flow_cycle, p0, dt, &run_options)?;
    let mean = *out.cycle_means[0].last().expect("at least one cycle");
    let pressure = out.last_cycle.into_iter().next().expect("one monitored quantity");
    Ok(OutletPrediction { pressure, mean, cycles_used: out.cycles_used })
}

/// Predictions for every outlet from its last complete flow cycle; outlets
/// are processed in parallel.
pub fn predict_all<T: Real>(traces: &OutletTraceSet<T>, options: &PredictOptions<T>) -> Result<PeriodicPrediction<T>> {
    let outlets = (0..traces.outlets().len())
        .into_par_iter()
        .map(|i| {
            let flow = traces.last_flow_cycle(i)?;
            predict_periodic_pressure(&flow, &traces.outlets()[i].params, options)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PeriodicPrediction { outlets })
}

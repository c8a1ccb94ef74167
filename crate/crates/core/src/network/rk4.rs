use super::SolutionTrace;
use crate::error::{Error, Result};
use crate::rcr::{samples_per_period, PeriodicWaveform, RcrParameters, Side};
use crate::scalar::Real;

/// Explicit RK4 integrator for the RCR pressure equation
/// `dP/dt = (R_p + R_d) Q/τ - P/τ + R_p dQ/dt`.
///
/// `dQ/dt` is the exact slope of the piecewise-linear inflow. Stages at the
/// start of a step use the slope of the segment the step begins in and
/// stages at its end the slope of the segment it ends in, so a step never
/// sees the kink of a neighbouring segment.
#[derive(Debug, Clone)]
pub struct RcrStepper<'a, T> {
    params: RcrParameters<T>,
    inflow: &'a PeriodicWaveform<T>,
    dt: T,
    steps_per_cycle: usize,
    step: usize,
    pressure: T,
}

impl<'a, T: Real> RcrStepper<'a, T> {
    pub fn new(params: RcrParameters<T>, inflow: &'a PeriodicWaveform<T>, p_initial: T, dt: T) -> Result<Self> {
        if !p_initial.is_finite() {
            return Err(Error::param("initial pressure must be finite"));
        }
        let steps_per_cycle = samples_per_period(inflow.period(), dt, T::lit(1e-9))?;
        Ok(Self { params, inflow, dt, steps_per_cycle, step: 0, pressure: p_initial })
    }

    pub fn pressure(&self) -> T {
        self.pressure
    }

    pub fn steps_per_cycle(&self) -> usize {
        self.steps_per_cycle
    }

    pub fn params(&self) -> &RcrParameters<T> {
        &self.params
    }

    pub fn inflow(&self) -> &PeriodicWaveform<T> {
        self.inflow
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    /// Cycle-local time of the current step.
    pub fn local_time(&self) -> T {
        T::of_usize(self.step % self.steps_per_cycle) * self.dt
    }

    pub fn advance(&mut self) -> Result<T> {
        let h = self.dt;
        let t0 = self.local_time();
        let th = t0 + T::half() * h;
        let t1 = t0 + h;
        let w = self.inflow;
        let (q0, qh, q1) = (w.value_at(t0), w.value_at(th), w.value_at(t1));
        // probing a quarter step inside keeps rounding in `t0 + h` from
        // selecting the segment beyond a knot
        let quarter = T::half() * T::half() * h;
        let (s0, sh, s1) =
            (w.slope_at(t0 + quarter, Side::Right), w.slope_at(th, Side::Right), w.slope_at(t1 - quarter, Side::Left));
        let f = |p: T, q: T, s: T| self.params.pressure_rate(p, q, s);
        let p = self.pressure;
        let k1 = f(p, q0, s0);
        let k2 = f(p + T::half() * h * k1, qh, sh);
        let k3 = f(p + T::half() * h * k2, qh, sh);
        let k4 = f(p + h * k3, q1, s1);
        let next = p + h / T::lit(6.0) * (k1 + T::two() * (k2 + k3) + k4);
        self.step += 1;
        if !next.is_finite() {
            return Err(Error::Unstable { step: self.step });
        }
        self.pressure = next;
        Ok(next)
    }
}

/// Integrates `n_cycles` cycles from `p_initial`. The trace has one node
/// (the inlet pressure) and one flow (the prescribed inflow).
pub fn simulate_rcr_rk4<T: Real>(
    params: &RcrParameters<T>,
    inflow: &PeriodicWaveform<T>,
    p_initial: T,
    dt: T,
    n_cycles: usize,
) -> Result<SolutionTrace<T>> {
    if n_cycles == 0 {
        return Err(Error::param("at least one cycle required"));
    }
    let mut stepper = RcrStepper::new(*params, inflow, p_initial, dt)?;
    let m = stepper.steps_per_cycle();
    let total = m * n_cycles;
    let mut pressure = Vec::with_capacity(total + 1);
    let mut flow = Vec::with_capacity(total + 1);
    pressure.push(p_initial);
    flow.push(inflow.value_at(T::zero()));
    for k in 1..=total {
        pressure.push(stepper.advance()?);
        flow.push(inflow.value_at(T::of_usize(k % m) * dt));
    }
    Ok(SolutionTrace {
        dt,
        period: inflow.period(),
        cycles: n_cycles,
        steps_per_cycle: m,
        node_pressures: vec![pressure],
        element_flows: vec![flow],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcr::{mean_over_cycle, mean_pressure_recursion, rcr_pressure_semianalytic};
    use crate::scalar::max_relative_error;

    fn pulsatile(n: usize) -> PeriodicWaveform<f64> {
        PeriodicWaveform::from_fn(1.0, n, |t| {
            let w = 2.0 * std::f64::consts::PI * t;
            1.0 + 0.8 * w.sin() + 0.3 * (2.0 * w).cos()
        })
        .unwrap()
    }

    #[test]
    fn constant_inflow_reaches_steady_pressure() {
        let p = RcrParameters::new(0.2f64, 0.5, 1.8).unwrap();
        let q = PeriodicWaveform::constant(1.0, 2.5);
        let trace = simulate_rcr_rk4(&p, &q, 0.0, 1e-2, 40).unwrap();
        let last = *trace.node_pressures[0].last().unwrap();
        let p_inf = 2.5 * 2.0;
        assert!((last - p_inf).abs() <= 1e-6 * p_inf);
    }

    #[test]
    fn matches_semianalytic_on_pulsatile_inflow() {
        let p = RcrParameters::new(0.1, 1.2, 1.0).unwrap();
        let q = pulsatile(100);
        let dt = 1e-3;
        let rk = simulate_rcr_rk4(&p, &q, 0.0, dt, 10).unwrap();
        let sa = rcr_pressure_semianalytic(&p, &q, 0.0, 10.0, dt).unwrap();
        let err = max_relative_error(&rk.node_pressures[0], &sa.values);
        assert!(err < 1e-4, "{err:e}");
    }

    #[test]
    fn rk4_order_against_semianalytic() {
        let p = RcrParameters::new(0.3, 0.15, 1.0).unwrap();
        let q = pulsatile(50);
        let err_at = |dt: f64| {
            let rk = simulate_rcr_rk4(&p, &q, 0.0, dt, 2).unwrap();
            let sa = rcr_pressure_semianalytic(&p, &q, 0.0, 2.0, dt).unwrap();
            max_relative_error(&rk.node_pressures[0], &sa.values)
        };
        // semi-analytic is exact for grid-aligned piecewise-linear inflow
        let (e1, e2) = (err_at(1.0 / 100.0), err_at(1.0 / 200.0));
        let order = (e1 / e2).log2();
        assert!(order >= 3.7, "observed order {order} ({e1:e} -> {e2:e})");
    }

    #[test]
    fn slow_capacitor_growth_follows_recursion() {
        // τ/T = 1000: pressure barely builds; cycle means follow the recursion
        let p = RcrParameters::new(0.1, 1000.0, 1.0).unwrap();
        let q = pulsatile(100);
        let trace = simulate_rcr_rk4(&p, &q, 0.0, 1e-3, 3).unwrap();
        let s = trace.pressure_series(0);
        let means: Vec<f64> = (0..3).map(|n| mean_over_cycle(&s, 1.0, n).unwrap()).collect();
        let p_inf = 1.1 * q.mean();
        let growth = means[2] - means[1];
        let predicted = mean_pressure_recursion(means[1], p_inf, 1000.0, 1) - means[1];
        assert!(((growth - predicted) / predicted).abs() < 0.01);
    }

    #[test]
    fn misaligned_step_rejected() {
        let p = RcrParameters::new(0.1, 1.0, 1.0).unwrap();
        let q = PeriodicWaveform::constant(1.0, 1.0);
        assert!(matches!(simulate_rcr_rk4(&p, &q, 0.0, 0.3, 2), Err(Error::Misaligned(_))));
    }

    #[test]
    fn deterministic() {
        let p = RcrParameters::new(0.1, 1.0, 1.0).unwrap();
        let q = pulsatile(64);
        let a = simulate_rcr_rk4(&p, &q, 0.3, 1.0 / 640.0, 3).unwrap();
        let b = simulate_rcr_rk4(&p, &q, 0.3, 1.0 / 640.0, 3).unwrap();
        assert_eq!(a, b);
    }
}

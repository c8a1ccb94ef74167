use super::{LumpedNetwork, NetworkOptions, NetworkStepper, RcrStepper};
use crate::error::{Error, Result};
use crate::rcr::{trapezoid_mean, PeriodicWaveform, RcrParameters};
use crate::scalar::Real;

/// A model that can be advanced one cardiac cycle at a time.
pub trait CycleSystem<T: Real> {
    fn period(&self) -> T;

    fn steps_per_cycle(&self) -> usize;

    fn monitored_count(&self) -> usize;

    /// Full state vector at the current cycle boundary.
    fn state(&self) -> Vec<T>;

    /// Advances one cycle; returns `[quantity][sample]` with both cycle end
    /// points included (`steps_per_cycle + 1` samples).
    fn advance_cycle(&mut self) -> Result<Vec<Vec<T>>>;
}

impl<T: Real> CycleSystem<T> for RcrStepper<'_, T> {
    fn period(&self) -> T {
        self.inflow().period()
    }

    fn steps_per_cycle(&self) -> usize {
        RcrStepper::steps_per_cycle(self)
    }

    fn monitored_count(&self) -> usize {
        1
    }

    fn state(&self) -> Vec<T> {
        vec![self.pressure()]
    }

    fn advance_cycle(&mut self) -> Result<Vec<Vec<T>>> {
        let m = RcrStepper::steps_per_cycle(self);
        let mut out = Vec::with_capacity(m + 1);
        out.push(self.pressure());
        for _ in 0..m {
            out.push(self.advance()?);
        }
        Ok(vec![out])
    }
}

/// Monitors the pressure of every node that is not a ground node.
impl<T: Real> CycleSystem<T> for NetworkStepper<'_, T> {
    fn period(&self) -> T {
        NetworkStepper::period(self)
    }

    fn steps_per_cycle(&self) -> usize {
        NetworkStepper::steps_per_cycle(self)
    }

    fn monitored_count(&self) -> usize {
        let net = self.network();
        (0..net.node_count()).filter(|&j| !net.is_ground(j)).count()
    }

    fn state(&self) -> Vec<T> {
        NetworkStepper::state(self).to_vec()
    }

    fn advance_cycle(&mut self) -> Result<Vec<Vec<T>>> {
        let m = NetworkStepper::steps_per_cycle(self);
        let nodes: Vec<usize> = {
            let net = self.network();
            (0..net.node_count()).filter(|&j| !net.is_ground(j)).collect()
        };
        let mut out: Vec<Vec<T>> = nodes
            .iter()
            .map(|&j| {
                let mut v = Vec::with_capacity(m + 1);
                v.push(self.pressure(j));
                v
            })
            .collect();
        for _ in 0..m {
            self.advance()?;
            for (col, &j) in out.iter_mut().zip(&nodes) {
                col.push(self.pressure(j));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicOptions<T> {
    /// Target error of the periodic state.
    pub epsilon: T,
    /// Hard limit on simulated cycles.
    pub max_cycles: usize,
}

impl<T: Real> Default for PeriodicOptions<T> {
    fn default() -> Self {
        Self { epsilon: T::lit(1e-8), max_cycles: 1000 }
    }
}

/// Result of [`run_to_periodic`].
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOutcome<T> {
    /// Final cycle of every monitored quantity, sampled at the integration
    /// grid.
    pub last_cycle: Vec<PeriodicWaveform<T>>,
    /// Number of simulated cycles.
    pub cycles_used: usize,
    /// `[quantity][cycle]` trapezoidal cycle means, cycle 1 first.
    pub cycle_means: Vec<Vec<T>>,
    /// Error estimate at which the run stopped.
    pub achieved_error: T,
}

/// Runs `system` until its cycle means are periodic within
/// `options.epsilon`.
///
/// After cycle `k ≥ 2` the cyclic change `d_k = max |m_k - m_{k-1}| / |m_k|`
/// over all monitored means is formed. Because lumped models approach their
/// limit geometrically, the remaining distance to the limit is
/// `d_k r / (1 - r)` with `r = d_k / d_{k-1}`; the run stops once this
/// extrapolated asymptotic error is within tolerance, so slowly converging
/// models are not stopped early. After the first cycle the only test is
/// whether the state returned to its initial value.
pub fn run_to_periodic<T: Real, S: CycleSystem<T>>(
    system: &mut S,
    options: &PeriodicOptions<T>,
) -> Result<PeriodicOutcome<T>> {
    let eps = options.epsilon;
    if !(eps > T::zero()) {
        return Err(Error::param("periodic tolerance must be positive"));
    }
    if options.max_cycles == 0 {
        return Err(Error::param("cycle cap must be positive"));
    }
    let q = system.monitored_count();
    let period = system.period();
    let m = system.steps_per_cycle();
    let dt = period / T::of_usize(m);
    let mut means: Vec<Vec<T>> = vec![Vec::new(); q];
    let mut prev_change: Option<T> = None;
    let mut achieved;
    let mut start_state = system.state();
    for cycle in 1..=options.max_cycles {
        let samples = system.advance_cycle()?;
        for (acc, s) in means.iter_mut().zip(&samples) {
            acc.push(trapezoid_mean(s));
        }
        let end_state = system.state();
        let converged = if cycle == 1 {
            let scale = start_state.iter().chain(&end_state).fold(T::zero(), |a, &v| a.max(v.abs()));
            let mismatch = start_state.iter().zip(&end_state).fold(T::zero(), |a, (&x, &y)| a.max((x - y).abs()));
            achieved = if scale > T::zero() { mismatch / scale } else { mismatch };
            achieved <= eps
        } else {
            let change = means.iter().fold(T::zero(), |a, v| {
                let (cur, prev) = (v[cycle - 1], v[cycle - 2]);
                let diff = (cur - prev).abs();
                let rel = if cur != T::zero() { diff / cur.abs() } else { diff };
                a.max(rel)
            });
            let done = if change <= eps * T::lit(1e-3) {
                achieved = change;
                true
            } else if let Some(prev) = prev_change.filter(|&p| p > T::zero()) {
                let ratio = change / prev;
                if ratio < T::one() {
                    achieved = change * ratio / (T::one() - ratio);
                    achieved <= eps
                } else {
                    achieved = change;
                    false
                }
            } else {
                achieved = change;
                false
            };
            prev_change = Some(change);
            done
        };
        if converged || cycle == options.max_cycles {
            if !converged {
                return Err(Error::NotConverged { cycles: cycle, achieved: achieved.as_f64() });
            }
            let times: Vec<T> = (0..m).map(|i| T::of_usize(i) * dt).collect();
            let last_cycle = samples
                .into_iter()
                .map(|mut s| {
                    s.truncate(m);
                    PeriodicWaveform::from_parts(period, times.clone(), s)
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(PeriodicOutcome {
                last_cycle,
                cycles_used: cycle,
                cycle_means: means,
                achieved_error: achieved,
            });
        }
        start_state = end_state;
    }
    unreachable!("loop returns on the last cycle")
}

/// [`run_to_periodic`] for a single RCR element integrated with RK4.
pub fn run_rcr_to_periodic<T: Real>(
    params: &RcrParameters<T>,
    inflow: &PeriodicWaveform<T>,
    p_initial: T,
    dt: T,
    options: &PeriodicOptions<T>,
) -> Result<PeriodicOutcome<T>> {
    let mut stepper = RcrStepper::new(*params, inflow, p_initial, dt)?;
    run_to_periodic(&mut stepper, options)
}

/// [`run_to_periodic`] for a lumped network integrated with generalized-α.
/// Monitored quantities are the non-ground node pressures in node order.
pub fn run_network_to_periodic<T: Real>(
    network: &LumpedNetwork<T>,
    dt: T,
    network_options: &NetworkOptions<T>,
    options: &PeriodicOptions<T>,
) -> Result<PeriodicOutcome<T>> {
    let mut stepper = NetworkStepper::new(network, dt, network_options)?;
    run_to_periodic(&mut stepper, options)
}

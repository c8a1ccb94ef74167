use super::{PeriodicWaveform, RcrParameters, TimeSeries};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pressure of an RCR element under constant inflow `q_bar`:
/// `P∞ + exp(-t/τ) (P₀ - P∞)` with `P∞ = q_bar (R_p + R_d)`.
pub fn step_response<T: Real>(params: &RcrParameters<T>, q_bar: T, p_initial: T, t: T) -> T {
    let p_inf = q_bar * params.total_resistance();
    p_inf + (-t / params.time_constant()).exp() * (p_initial - p_inf)
}

/// Semi-analytic pressure on the grid `{0, dt, …}` up to `t_end`:
///
/// ```text
/// P(t) = [P(0) - R_p Q(0)] e^{-t/τ} + R_p Q(t) + ∫₀ᵗ e^{-(t-s)/τ} Q(s) / C ds
/// ```
///
/// The convolution is advanced step by step with the recurrence
/// `I_{k+1} = e^{-dt/τ} I_k + (w₀ Q_k + w₁ Q_{k+1}) / C`, where the weights
/// integrate the exponential kernel exactly against the linear interpolant of
/// `Q` between grid points. This is the trapezoidal rule with the kernel
/// treated analytically; it is exact whenever the waveform knots lie on the
/// grid.
pub fn rcr_pressure_semianalytic<T: Real>(
    params: &RcrParameters<T>,
    inflow: &PeriodicWaveform<T>,
    p_initial: T,
    t_end: T,
    dt: T,
) -> Result<TimeSeries<T>> {
    if !(dt.is_finite() && dt > T::zero()) {
        return Err(Error::param(format!("time step must be positive, got {dt}")));
    }
    if !(p_initial.is_finite() && t_end.is_finite()) {
        return Err(Error::param("initial pressure and end time must be finite"));
    }
    if t_end < dt {
        return Err(Error::param(format!("end time {t_end} shorter than one step {dt}")));
    }
    let steps = (t_end / dt + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    let tau = params.time_constant();
    let rp = params.r_proximal();
    let inv_c = T::one() / params.capacitance();
    let (decay, w_prev, w_next) = step_weights(dt, tau);

    let q0 = inflow.value_at(T::zero());
    let homogeneous = p_initial - rp * q0;
    let mut values = Vec::with_capacity(steps + 1);
    let mut integral = T::zero();
    let mut q_prev = q0;
    values.push(p_initial);
    for k in 1..=steps {
        let t = T::of_usize(k) * dt;
        let q = inflow.value_at(t);
        integral = decay * integral + (w_prev * q_prev + w_next * q) * inv_c;
        let p = homogeneous * (-t / tau).exp() + rp * q + integral;
        if !p.is_finite() {
            return Err(Error::Unstable { step: k });
        }
        values.push(p);
        q_prev = q;
    }
    TimeSeries::new(T::zero(), dt, values)
}

/// Decay factor and first-order-hold weights for one step of length `h`:
/// `∫₀ʰ e^{-(h-s)/τ} Q(s) ds = w₀ Q(0) + w₁ Q(h)` for linear `Q`.
pub(crate) fn step_weights<T: Real>(h: T, tau: T) -> (T, T, T) {
    let a = h / tau;
    let decay = (-a).exp();
    // g(a) = 1 - e^{-a}(1 + a), evaluated by series for small a
    let g = if a < T::lit(0.1) {
        let mut term = a;
        let mut sum = T::zero();
        let mut sign = T::one();
        for k in 2..14usize {
            term = term * a / T::of_usize(k);
            sum += sign * term * T::of_usize(k - 1);
            sign = -sign;
        }
        sum
    } else {
        T::one() - decay * (T::one() + a)
    };
    let w_prev = tau * g / a;
    let w_next = tau * (T::one() - decay) - w_prev;
    (decay, w_prev, w_next)
}

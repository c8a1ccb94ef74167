//! Closed-form and semi-analytic mathematics of the three-element Windkessel
//! (RCR) boundary condition.
//!
//! The inlet pressure `P` of an RCR element driven by a flow `Q` obeys
//!
//! ```text
//! dP/dt + P/τ = R_p dQ/dt + (R_p + R_d) Q / τ,    τ = R_d C
//! ```
//!
//! Under periodic forcing the cycle-averaged pressure approaches its limit
//! geometrically with ratio `exp(-T/τ)` per cycle; [`metrics`] turns that law
//! into error measures and cycle-count predictions.

mod metrics;
mod response;
mod series;
mod waveform;

pub use metrics::{
    asymptotic_error, cycles_to_convergence, cycles_to_convergence_zero_ic, cyclic_error, error_ratio_alpha,
    mean_pressure_recursion, ALPHA_UNITY_TAU_OVER_PERIOD,
};
pub use response::{rcr_pressure_semianalytic, step_response};
pub use series::{mean_over_cycle, samples_per_period, trapezoid_mean, CycleMeans, TimeSeries};
pub use waveform::{PeriodicWaveform, Side};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Proximal resistance, capacitance and distal resistance of an RCR element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RcrParameters<T> {
    r_proximal: T,
    capacitance: T,
    r_distal: T,
}

impl<T: Real> RcrParameters<T> {
    pub fn new(r_proximal: T, capacitance: T, r_distal: T) -> Result<Self> {
        if !(r_proximal.is_finite() && capacitance.is_finite() && r_distal.is_finite()) {
            return Err(Error::param("RCR parameters must be finite"));
        }
        if r_proximal < T::zero() {
            return Err(Error::param(format!("proximal resistance {r_proximal} < 0")));
        }
        if r_distal <= T::zero() {
            return Err(Error::param(format!("distal resistance {r_distal} <= 0")));
        }
        if capacitance <= T::zero() {
            return Err(Error::param(format!("capacitance {capacitance} <= 0")));
        }
        Ok(Self { r_proximal, capacitance, r_distal })
    }

    pub fn r_proximal(&self) -> T {
        self.r_proximal
    }

    pub fn capacitance(&self) -> T {
        self.capacitance
    }

    pub fn r_distal(&self) -> T {
        self.r_distal
    }

    /// `τ = R_d C`.
    pub fn time_constant(&self) -> T {
        self.r_distal * self.capacitance
    }

    /// `R_p + R_d`, the steady-state pressure per unit flow.
    pub fn total_resistance(&self) -> T {
        self.r_proximal + self.r_distal
    }

    /// Right-hand side of the pressure equation.
    #[inline]
    pub fn pressure_rate(&self, pressure: T, flow: T, flow_rate: T) -> T {
        let tau = self.time_constant();
        (self.total_resistance() * flow - pressure) / tau + self.r_proximal * flow_rate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_parameters() {
        assert!(RcrParameters::new(0.0, 1.0, 1.0).is_ok());
        assert!(RcrParameters::new(-1.0, 1.0, 1.0).is_err());
        assert!(RcrParameters::new(1.0, 0.0, 1.0).is_err());
        assert!(RcrParameters::new(1.0, 1.0, 0.0).is_err());
        assert!(RcrParameters::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn time_constant_is_distal_times_capacitance() {
        let p = RcrParameters::new(0.1f64, 2.0, 3.0).unwrap();
        assert_eq!(p.time_constant(), 6.0);
        assert!((p.total_resistance() - 3.1).abs() < 1e-15);
    }
}

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Form of the exponential wall stiffness `Eh / r0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StiffnessLaw {
    /// `k1 * exp(k2 * r0 + k3)`.
    #[default]
    AsTypeset,
    /// `k1 * exp(k2 * r0) + k3`.
    Conventional,
}

/// Material constants of the wall stiffness law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallStiffness<T> {
    pub k1: T,
    pub k2: T,
    pub k3: T,
    pub law: StiffnessLaw,
}

impl<T: Real> WallStiffness<T> {
    /// `Eh / r0` at reference radius `r0`.
    pub fn eh_over_r0(&self, r0: T) -> T {
        match self.law {
            StiffnessLaw::AsTypeset => self.k1 * (self.k2 * r0 + self.k3).exp(),
            StiffnessLaw::Conventional => self.k1 * (self.k2 * r0).exp() + self.k3,
        }
    }
}

/// Pressure-area relation `P = P0 + 4/3 (Eh / r0) (1 - sqrt(S0 / S))`.
pub fn olufsen_pressure<T: Real>(s: T, s0: T, p0: T, r0: T, wall: &WallStiffness<T>) -> Result<T> {
    if !(s > T::zero() && s0 > T::zero() && r0 > T::zero()) {
        return Err(Error::param("areas and reference radius must be positive"));
    }
    let stiffness = wall.eh_over_r0(r0);
    Ok(p0 + T::lit(4.0) / T::lit(3.0) * stiffness * (T::one() - (s0 / s).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const WALL: WallStiffness<f64> = WallStiffness { k1: 3.0, k2: -2.0, k3: 0.5, law: StiffnessLaw::AsTypeset };

    #[test]
    fn reference_and_limits() {
        let r0 = 0.3;
        let s0 = std::f64::consts::PI * r0 * r0;
        let eh = WALL.eh_over_r0(r0);
        assert_eq!(olufsen_pressure(s0, s0, 10.0, r0, &WALL).unwrap(), 10.0);
        let quad = olufsen_pressure(4.0 * s0, s0, 10.0, r0, &WALL).unwrap();
        assert!((quad - (10.0 + 4.0 / 3.0 * eh * 0.5)).abs() < 1e-9 * quad.abs());
        let far = olufsen_pressure(1e12 * s0, s0, 10.0, r0, &WALL).unwrap();
        assert!((far - (10.0 + 4.0 / 3.0 * eh)).abs() < 1e-5 * far.abs());
        assert!(olufsen_pressure(0.0, s0, 0.0, r0, &WALL).is_err());
    }

    #[test]
    fn laws_differ() {
        let r0 = 0.3f64;
        let conventional = WallStiffness { law: StiffnessLaw::Conventional, ..WALL };
        assert_eq!(WALL.eh_over_r0(r0), 3.0 * (-2.0 * r0 + 0.5).exp());
        assert_eq!(conventional.eh_over_r0(r0), 3.0 * (-2.0 * r0).exp() + 0.5);
    }
}

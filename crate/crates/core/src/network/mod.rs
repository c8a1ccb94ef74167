//! Time integration of lumped-parameter (0D) models.
//!
//! Two integrators live here: an explicit fourth-order Runge–Kutta scheme for
//! the single RCR element ([`simulate_rcr_rk4`]) and an implicit
//! generalized-α scheme for arbitrary R/C/L/diode networks
//! ([`simulate_network`]). [`run_to_periodic`] drives either one cycle by
//! cycle until the solution is periodic.

mod genalpha;
mod periodic;
mod rk4;

pub use genalpha::{simulate_network, GeneralizedAlpha, InitialState, NetworkOptions, NetworkStepper};
pub use periodic::{
    run_network_to_periodic, run_rcr_to_periodic, run_to_periodic, CycleSystem, PeriodicOptions, PeriodicOutcome,
};
pub use rk4::{simulate_rcr_rk4, RcrStepper};

use crate::error::{Error, Result};
use crate::rcr::{PeriodicWaveform, RcrParameters};
use crate::scalar::Real;

/// Ideal valve law `Q = (|Q| + Q) / 2`.
pub fn diode_flow<T: Real>(q: T) -> T {
    (q.abs() + q) * T::half()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// `ΔP = R Q`
    Resistor,
    /// `Q = C dΔP/dt`
    Capacitor,
    /// `ΔP = L dQ/dt`
    Inductor,
    /// Ideal valve: `ΔP = 0` while open, `Q = 0` while closed.
    Diode,
}

impl ElementKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::Resistor => "R",
            ElementKind::Capacitor => "C",
            ElementKind::Inductor => "L",
            ElementKind::Diode => "D",
        }
    }
}

/// Two-terminal element; positive flow runs from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpedElement<T> {
    pub kind: ElementKind,
    pub value: T,
    pub from: usize,
    pub to: usize,
}

impl<T: Real> LumpedElement<T> {
    pub fn resistor(value: T, from: usize, to: usize) -> Self {
        Self { kind: ElementKind::Resistor, value, from, to }
    }

    pub fn capacitor(value: T, from: usize, to: usize) -> Self {
        Self { kind: ElementKind::Capacitor, value, from, to }
    }

    pub fn inductor(value: T, from: usize, to: usize) -> Self {
        Self { kind: ElementKind::Inductor, value, from, to }
    }

    pub fn diode(from: usize, to: usize) -> Self {
        Self { kind: ElementKind::Diode, value: T::zero(), from, to }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inflow<T> {
    pub node: usize,
    pub waveform: PeriodicWaveform<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundPressure<T> {
    pub node: usize,
    pub pressure: T,
}

/// Validated lumped-parameter network.
#[derive(Debug, Clone, PartialEq)]
pub struct LumpedNetwork<T> {
    node_count: usize,
    elements: Vec<LumpedElement<T>>,
    inflows: Vec<Inflow<T>>,
    grounds: Vec<GroundPressure<T>>,
}

impl<T: Real> LumpedNetwork<T> {
    pub fn new(
        node_count: usize,
        elements: Vec<LumpedElement<T>>,
        inflows: Vec<Inflow<T>>,
        grounds: Vec<GroundPressure<T>>,
    ) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::Topology("network has no nodes".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            if e.from >= node_count || e.to >= node_count {
                return Err(Error::Topology(format!("element {i} references a missing node")));
            }
            if e.from == e.to {
                return Err(Error::Topology(format!("element {i} connects node {} to itself", e.from)));
            }
            if e.kind != ElementKind::Diode && !(e.value > T::zero() && e.value.is_finite()) {
                return Err(Error::param(format!(
                    "element {i} ({}) needs a positive value, got {}",
                    e.kind.keyword(),
                    e.value
                )));
            }
        }
        if grounds.is_empty() {
            return Err(Error::Topology("network needs at least one ground node".into()));
        }
        let mut seen = vec![false; node_count];
        for g in &grounds {
            if g.node >= node_count || !g.pressure.is_finite() {
                return Err(Error::Topology(format!("invalid ground node {}", g.node)));
            }
            if std::mem::replace(&mut seen[g.node], true) {
                return Err(Error::Topology(format!("node {} grounded twice", g.node)));
            }
        }
        for f in &inflows {
            if f.node >= node_count {
                return Err(Error::Topology(format!("inflow at missing node {}", f.node)));
            }
            if seen[f.node] {
                return Err(Error::Topology(format!("node {} has both an inflow and a ground pressure", f.node)));
            }
        }
        if let Some(first) = inflows.first() {
            let period = first.waveform.period();
            for f in &inflows[1..] {
                if (f.waveform.period() - period).abs() > T::lit(1e-9) * period {
                    return Err(Error::param("inflow waveforms must share one period"));
                }
            }
        }
        // connectivity by union-find over element end points
        let mut parent: Vec<usize> = (0..node_count).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for e in &elements {
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (1..node_count).any(|i| find(&mut parent, i) != root) {
            return Err(Error::Topology("network graph is not connected".into()));
        }
        Ok(Self { node_count, elements, inflows, grounds })
    }

    /// Single RCR element driven at node 0: `0 -R_p- 1 -(C ∥ R_d)- 2 = ground`.
    /// With `R_p = 0` the proximal resistor is dropped and the capacitor
    /// attaches directly to node 0.
    pub fn rcr(params: &RcrParameters<T>, inflow: PeriodicWaveform<T>) -> Self {
        let mut elements = Vec::new();
        let (mid, ground, nodes) = if params.r_proximal() > T::zero() {
            elements.push(LumpedElement::resistor(params.r_proximal(), 0, 1));
            (1, 2, 3)
        } else {
            (0, 1, 2)
        };
        elements.push(LumpedElement::capacitor(params.capacitance(), mid, ground));
        elements.push(LumpedElement::resistor(params.r_distal(), mid, ground));
        Self::new(
            nodes,
            elements,
            vec![Inflow { node: 0, waveform: inflow }],
            vec![GroundPressure { node: ground, pressure: T::zero() }],
        )
        .expect("RCR network is well formed")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn elements(&self) -> &[LumpedElement<T>] {
        &self.elements
    }

    pub fn inflows(&self) -> &[Inflow<T>] {
        &self.inflows
    }

    pub fn grounds(&self) -> &[GroundPressure<T>] {
        &self.grounds
    }

    /// Period shared by the inflow waveforms.
    pub fn period(&self) -> Option<T> {
        self.inflows.first().map(|f| f.waveform.period())
    }

    pub fn is_ground(&self, node: usize) -> bool {
        self.grounds.iter().any(|g| g.node == node)
    }
}

/// Uniformly sampled solution of a lumped model.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrace<T> {
    pub dt: T,
    pub period: T,
    pub cycles: usize,
    pub steps_per_cycle: usize,
    /// `[node][sample]`
    pub node_pressures: Vec<Vec<T>>,
    /// `[element][sample]`
    pub element_flows: Vec<Vec<T>>,
}

impl<T: Real> SolutionTrace<T> {
    pub fn len(&self) -> usize {
        self.cycles * self.steps_per_cycle + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> T {
        T::of_usize(i) * self.dt
    }

    pub fn pressure_series(&self, node: usize) -> crate::rcr::TimeSeries<T> {
        crate::rcr::TimeSeries { start: T::zero(), dt: self.dt, values: self.node_pressures[node].clone() }
    }

    pub fn flow_series(&self, element: usize) -> crate::rcr::TimeSeries<T> {
        crate::rcr::TimeSeries { start: T::zero(), dt: self.dt, values: self.element_flows[element].clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diode_examples() {
        assert_eq!(diode_flow(5.0), 5.0);
        assert_eq!(diode_flow(-3.0), 0.0);
        assert_eq!(diode_flow(0.0), 0.0);
    }

    #[test]
    fn validation() {
        let q = PeriodicWaveform::constant(1.0, 1.0);
        let inflow = || vec![Inflow { node: 0, waveform: q.clone() }];
        let ground = vec![GroundPressure { node: 1, pressure: 0.0 }];
        assert!(LumpedNetwork::new(2, vec![LumpedElement::resistor(1.0, 0, 1)], inflow(), ground.clone()).is_ok());
        assert!(LumpedNetwork::new(2, vec![LumpedElement::resistor(-1.0, 0, 1)], inflow(), ground.clone()).is_err());
        assert!(LumpedNetwork::new(2, vec![LumpedElement::resistor(1.0, 0, 0)], inflow(), ground.clone()).is_err());
        assert!(LumpedNetwork::new(2, vec![LumpedElement::resistor(1.0, 0, 1)], inflow(), vec![]).is_err());
        // node 2 dangling
        assert!(matches!(
            LumpedNetwork::new(3, vec![LumpedElement::resistor(1.0, 0, 1)], inflow(), ground),
            Err(Error::Topology(_))
        ));
    }
}

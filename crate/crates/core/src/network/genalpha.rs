use std::collections::HashMap;

use super::{ElementKind, LumpedNetwork, SolutionTrace};
use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::rcr::{samples_per_period, Side};
use crate::scalar::Real;

const MAX_DIODE_ITERATIONS: usize = 50;

/// Coefficients of the first-order generalized-α method, parameterized by
/// the high-frequency spectral radius `ρ∞ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedAlpha<T> {
    pub alpha_m: T,
    pub alpha_f: T,
    pub gamma: T,
}

impl<T: Real> GeneralizedAlpha<T> {
    pub fn from_spectral_radius(rho_inf: T) -> Result<Self> {
        if !(rho_inf >= T::zero() && rho_inf <= T::one()) {
            return Err(Error::param(format!("spectral radius {rho_inf} outside [0, 1]")));
        }
        let one = T::one();
        let alpha_m = T::half() * (T::lit(3.0) - rho_inf) / (one + rho_inf);
        let alpha_f = one / (one + rho_inf);
        let gamma = T::half() + alpha_m - alpha_f;
        Ok(Self { alpha_m, alpha_f, gamma })
    }
}

/// How the differential states (capacitor pressure drops, inductor flows)
/// are initialized. Algebraic unknowns are always made consistent with them.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState<T> {
    /// Uncharged capacitors, inductors at rest.
    Zero,
    /// Steady solution under the time-averaged inflows.
    Steady,
    /// Capacitor drops taken from the given node pressures.
    NodePressures(Vec<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkOptions<T> {
    pub rho_inf: T,
    pub initial: InitialState<T>,
}

impl<T: Real> Default for NetworkOptions<T> {
    fn default() -> Self {
        Self { rho_inf: T::half(), initial: InitialState::Zero }
    }
}

/// Row `r` of the assembled DAE `E ẏ + A y = b(t)`. Unknowns are the node
/// pressures followed by the element flows; rows are the element laws
/// followed by one row per node (ground pressure or flow balance).
struct Assembly<'a, T> {
    network: &'a LumpedNetwork<T>,
    nodes: usize,
    size: usize,
    e_mat: Matrix<T>,
    /// `A` without diode rows.
    a_base: Matrix<T>,
    diodes: Vec<usize>,
}

impl<'a, T: Real> Assembly<'a, T> {
    fn new(network: &'a LumpedNetwork<T>) -> Self {
        let nodes = network.node_count();
        let elems = network.elements().len();
        let size = nodes + elems;
        let mut e_mat = Matrix::zeros(size);
        let mut a = Matrix::zeros(size);
        let mut diodes = Vec::new();
        let q = |e: usize| nodes + e;
        for (i, el) in network.elements().iter().enumerate() {
            let (pa, pb) = (el.from, el.to);
            match el.kind {
                ElementKind::Resistor => {
                    a.set(i, pa, T::one());
                    a.set(i, pb, -T::one());
                    a.set(i, q(i), -el.value);
                }
                ElementKind::Capacitor => {
                    a.set(i, q(i), T::one());
                    e_mat.set(i, pa, -el.value);
                    e_mat.set(i, pb, el.value);
                }
                ElementKind::Inductor => {
                    a.set(i, pa, T::one());
                    a.set(i, pb, -T::one());
                    e_mat.set(i, q(i), -el.value);
                }
                ElementKind::Diode => diodes.push(i),
            }
        }
        for j in 0..nodes {
            let row = elems + j;
            if network.is_ground(j) {
                a.set(row, j, T::one());
            }
        }
        for (i, el) in network.elements().iter().enumerate() {
            if !network.is_ground(el.to) {
                a.add(elems + el.to, q(i), T::one());
            }
            if !network.is_ground(el.from) {
                a.add(elems + el.from, q(i), -T::one());
            }
        }
        Self { network, nodes, size, e_mat, a_base: a, diodes }
    }

    fn flow_index(&self, element: usize) -> usize {
        self.nodes + element
    }

    fn is_differential(&self, row: usize) -> bool {
        self.e_mat.row(row).iter().any(|&v| v != T::zero())
    }

    fn a_matrix(&self, open: &[bool]) -> Matrix<T> {
        let mut a = self.a_base.clone();
        for (&e, &is_open) in self.diodes.iter().zip(open) {
            let el = &self.network.elements()[e];
            if is_open {
                a.set(e, el.from, T::one());
                a.set(e, el.to, -T::one());
            } else {
                a.set(e, self.flow_index(e), T::one());
            }
        }
        a
    }

    /// `b(t)`; `mean_inflow` replaces the waveforms by their averages.
    fn rhs(&self, t: T, mean_inflow: bool) -> Vec<T> {
        let elems = self.network.elements().len();
        let mut b = vec![T::zero(); self.size];
        for g in self.network.grounds() {
            b[elems + g.node] = g.pressure;
        }
        for f in self.network.inflows() {
            let q = if mean_inflow { f.waveform.mean() } else { f.waveform.value_at(t) };
            b[elems + f.node] -= q;
        }
        b
    }

    /// Right-hand time derivative of `b(t)`.
    fn rhs_rate(&self, t: T) -> Vec<T> {
        let elems = self.network.elements().len();
        let mut b = vec![T::zero(); self.size];
        for f in self.network.inflows() {
            b[elems + f.node] -= f.waveform.slope_at(t, Side::Right);
        }
        b
    }

    /// Updates diode states from a candidate solution; returns true if any
    /// state changed.
    fn update_diodes(&self, y: &[T], open: &mut [bool]) -> bool {
        let scale = y.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        let tol = scale * T::lit(1e-12);
        let mut changed = false;
        for (&e, state) in self.diodes.iter().zip(open.iter_mut()) {
            let el = &self.network.elements()[e];
            if *state {
                if y[self.flow_index(e)] < -tol {
                    *state = false;
                    changed = true;
                }
            } else if y[el.from] - y[el.to] > tol {
                *state = true;
                changed = true;
            }
        }
        changed
    }

    /// Solves the algebraic system obtained by replacing the differential
    /// rows through `replace(row) -> Some((coeffs, rhs))`.
    fn solve_with_rows(
        &self,
        open: &mut [bool],
        rhs_base: &[T],
        replace: &dyn Fn(usize, &mut [T]) -> Option<T>,
    ) -> Result<Vec<T>> {
        for _ in 0..MAX_DIODE_ITERATIONS {
            let mut m = self.a_matrix(open);
            let mut b = rhs_base.to_vec();
            for row in 0..self.size {
                if self.is_differential(row) {
                    let coeffs = m.row_mut(row);
                    coeffs.iter_mut().for_each(|c| *c = T::zero());
                    if let Some(v) = replace(row, coeffs) {
                        b[row] = v;
                    }
                }
            }
            let y = Lu::factor(m)?.solve(&b);
            if !self.update_diodes(&y, open) {
                return Ok(y);
            }
        }
        Err(Error::DiodeNonConvergence { step: 0, iterations: MAX_DIODE_ITERATIONS })
    }

    /// Differential state values (`ΔP` for capacitors, `Q` for inductors),
    /// indexed by element.
    fn differential_states(&self, initial: &InitialState<T>, open: &mut [bool]) -> Result<Vec<T>> {
        let els = self.network.elements();
        let mut states = vec![T::zero(); els.len()];
        match initial {
            InitialState::Zero => {}
            InitialState::NodePressures(p) => {
                if p.len() != self.nodes {
                    return Err(Error::LengthMismatch { expected: self.nodes, found: p.len() });
                }
                for (i, el) in els.iter().enumerate() {
                    if el.kind == ElementKind::Capacitor {
                        states[i] = p[el.from] - p[el.to];
                    }
                }
            }
            InitialState::Steady => {
                let nodes = self.nodes;
                let y = self.solve_with_rows(open, &self.rhs(T::zero(), true), &|row, coeffs| {
                    let el = &els[row];
                    match el.kind {
                        ElementKind::Capacitor => coeffs[nodes + row] = T::one(),
                        ElementKind::Inductor => {
                            coeffs[el.from] = T::one();
                            coeffs[el.to] = -T::one();
                        }
                        _ => {}
                    }
                    Some(T::zero())
                })?;
                for (i, el) in els.iter().enumerate() {
                    states[i] = match el.kind {
                        ElementKind::Capacitor => y[el.from] - y[el.to],
                        ElementKind::Inductor => y[nodes + i],
                        _ => T::zero(),
                    };
                }
            }
        }
        Ok(states)
    }

    /// Writes the row pinning the differential state of element `row`
    /// (`ΔP` of a capacitor, `Q` of an inductor).
    fn state_row(&self, row: usize, coeffs: &mut [T]) {
        let el = &self.network.elements()[row];
        match el.kind {
            ElementKind::Capacitor => {
                coeffs[el.from] = T::one();
                coeffs[el.to] = -T::one();
            }
            ElementKind::Inductor => coeffs[self.flow_index(row)] = T::one(),
            _ => {}
        }
    }

    fn state_value(&self, row: usize, y: &[T]) -> T {
        let el = &self.network.elements()[row];
        match el.kind {
            ElementKind::Capacitor => y[el.from] - y[el.to],
            ElementKind::Inductor => y[self.flow_index(row)],
            _ => T::zero(),
        }
    }

    /// Algebraic system with the differential rows replaced by state pins.
    fn projection_matrix(&self, open: &[bool]) -> Matrix<T> {
        let mut m = self.a_matrix(open);
        for row in 0..self.size {
            if self.is_differential(row) {
                let coeffs = m.row_mut(row);
                coeffs.iter_mut().for_each(|c| *c = T::zero());
                self.state_row(row, coeffs);
            }
        }
        m
    }

    /// Consistent `(y₀, ẏ₀)` for the given differential states.
    fn consistent_start(&self, states: &[T], open: &mut [bool]) -> Result<(Vec<T>, Vec<T>)> {
        let y0 = self.solve_with_rows(open, &self.rhs(T::zero(), false), &|row, coeffs| {
            self.state_row(row, coeffs);
            Some(states[row])
        })?;
        // ẏ₀: differential rows from E ẏ = b - A y, algebraic rows differentiated
        let a = self.a_matrix(open);
        let residual: Vec<T> = self.rhs(T::zero(), false).iter().zip(a.mul_vec(&y0)).map(|(&b, ay)| b - ay).collect();
        let rate = self.rhs_rate(T::zero());
        let mut m = a;
        let mut rhs = rate;
        for row in 0..self.size {
            if self.is_differential(row) {
                m.row_mut(row).copy_from_slice(self.e_mat.row(row));
                rhs[row] = residual[row];
            }
        }
        let ydot0 = Lu::factor(m)?.solve(&rhs);
        Ok((y0, ydot0))
    }
}

/// Per active set: `A`, the step matrix and the projection matrix.
struct Factors<T> {
    a: Matrix<T>,
    step: Lu<T>,
    projection: Lu<T>,
}

/// Generalized-α integrator state for one network.
///
/// After each step the algebraic unknowns are projected onto the
/// constraints at `t_{n+1}` with the differential states held fixed; the
/// method itself only enforces them at `t_{n+α_f}`, which lets algebraic
/// flows ring after a diode switches.
pub struct NetworkStepper<'a, T> {
    asm: Assembly<'a, T>,
    coeffs: GeneralizedAlpha<T>,
    dt: T,
    steps_per_cycle: usize,
    step: usize,
    y: Vec<T>,
    ydot: Vec<T>,
    open: Vec<bool>,
    factors: HashMap<Vec<bool>, Factors<T>>,
}

impl<'a, T: Real> NetworkStepper<'a, T> {
    pub fn new(network: &'a LumpedNetwork<T>, dt: T, options: &NetworkOptions<T>) -> Result<Self> {
        let period = network.period().ok_or_else(|| Error::param("network has no inflow to define a period"))?;
        let steps_per_cycle = samples_per_period(period, dt, T::lit(1e-9))?;
        let coeffs = GeneralizedAlpha::from_spectral_radius(options.rho_inf)?;
        let asm = Assembly::new(network);
        let mut open = vec![true; asm.diodes.len()];
        let states = asm.differential_states(&options.initial, &mut open)?;
        let (y, ydot) = asm.consistent_start(&states, &mut open)?;
        Ok(Self { asm, coeffs, dt, steps_per_cycle, step: 0, y, ydot, open, factors: HashMap::new() })
    }

    pub fn steps_per_cycle(&self) -> usize {
        self.steps_per_cycle
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn period(&self) -> T {
        T::of_usize(self.steps_per_cycle) * self.dt
    }

    pub fn network(&self) -> &LumpedNetwork<T> {
        self.asm.network
    }

    /// Full state `[pressures..., flows...]`.
    pub fn state(&self) -> &[T] {
        &self.y
    }

    pub fn pressure(&self, node: usize) -> T {
        self.y[node]
    }

    pub fn flow(&self, element: usize) -> T {
        self.y[self.asm.flow_index(element)]
    }

    fn ensure_factor(&mut self) -> Result<()> {
        if !self.factors.contains_key(&self.open) {
            let a = self.asm.a_matrix(&self.open);
            let k = self.asm.e_mat.combine(self.coeffs.alpha_m, &a, self.coeffs.alpha_f * self.coeffs.gamma * self.dt);
            let step = Lu::factor(k)?;
            let projection = Lu::factor(self.asm.projection_matrix(&self.open))?;
            self.factors.insert(self.open.clone(), Factors { a, step, projection });
        }
        Ok(())
    }

    pub fn advance(&mut self) -> Result<()> {
        let GeneralizedAlpha { alpha_m, alpha_f, gamma } = self.coeffs;
        let dt = self.dt;
        let local = T::of_usize(self.step % self.steps_per_cycle);
        let t_af = (local + alpha_f) * dt;
        let t_next = (local + T::one()) * dt;
        let b = self.asm.rhs(t_af, false);
        let e_part = self.asm.e_mat.mul_vec(&self.ydot.iter().map(|&v| (T::one() - alpha_m) * v).collect::<Vec<_>>());
        let y_pred: Vec<T> =
            self.y.iter().zip(&self.ydot).map(|(&y, &yd)| y + alpha_f * dt * (T::one() - gamma) * yd).collect();
        let step_index = self.step + 1;
        let mut visited: Vec<Vec<bool>> = vec![self.open.clone()];
        let mut settle = false;
        for _ in 0..MAX_DIODE_ITERATIONS {
            self.ensure_factor()?;
            let Factors { a, step, .. } = &self.factors[&self.open];
            let a_part = a.mul_vec(&y_pred);
            let rhs: Vec<T> = b.iter().zip(&e_part).zip(&a_part).map(|((&b, &e), &a)| b - e - a).collect();
            let ydot_next = step.solve(&rhs);
            let y_next: Vec<T> = self
                .y
                .iter()
                .zip(&self.ydot)
                .zip(&ydot_next)
                .map(|((&y, &yd), &yn)| y + dt * ((T::one() - gamma) * yd + gamma * yn))
                .collect();
            let mut open = self.open.clone();
            if !settle && self.asm.update_diodes(&y_next, &mut open) {
                if visited.contains(&open) {
                    // the switch happens inside the step: block every diode
                    // whose state is disputed and accept that solution
                    self.open = self.open.iter().zip(&open).map(|(&a, &b)| a && b).collect();
                    settle = true;
                } else {
                    visited.push(open.clone());
                    self.open = open;
                }
                continue;
            }
            if y_next.iter().any(|v| !v.is_finite()) {
                return Err(Error::Unstable { step: step_index });
            }
            let mut pinned = self.asm.rhs(t_next, false);
            for (row, value) in pinned.iter_mut().enumerate() {
                if self.asm.is_differential(row) {
                    *value = self.asm.state_value(row, &y_next);
                }
            }
            let y_next = self.factors[&self.open].projection.solve(&pinned);
            self.y = y_next;
            self.ydot = ydot_next;
            self.step = step_index;
            return Ok(());
        }
        Err(Error::DiodeNonConvergence { step: step_index, iterations: MAX_DIODE_ITERATIONS })
    }
}

/// Integrates `n_cycles` cycles of the network with the generalized-α method.
pub fn simulate_network<T: Real>(
    network: &LumpedNetwork<T>,
    dt: T,
    n_cycles: usize,
    options: &NetworkOptions<T>,
) -> Result<SolutionTrace<T>> {
    if n_cycles == 0 {
        return Err(Error::param("at least one cycle required"));
    }
    let mut stepper = NetworkStepper::new(network, dt, options)?;
    let m = stepper.steps_per_cycle();
    let total = m * n_cycles;
    let nodes = network.node_count();
    let elems = network.elements().len();
    let mut pressures = vec![Vec::with_capacity(total + 1); nodes];
    let mut flows = vec![Vec::with_capacity(total + 1); elems];
    let record = |s: &NetworkStepper<T>, p: &mut Vec<Vec<T>>, q: &mut Vec<Vec<T>>| {
        for (j, col) in p.iter_mut().enumerate() {
            col.push(s.pressure(j));
        }
        for (e, col) in q.iter_mut().enumerate() {
            col.push(s.flow(e));
        }
    };
    record(&stepper, &mut pressures, &mut flows);
    for _ in 0..total {
        stepper.advance()?;
        record(&stepper, &mut pressures, &mut flows);
    }
    Ok(SolutionTrace {
        dt,
        period: stepper.period(),
        cycles: n_cycles,
        steps_per_cycle: m,
        node_pressures: pressures,
        element_flows: flows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{simulate_rcr_rk4, GroundPressure, Inflow, LumpedElement};
    use crate::rcr::{mean_over_cycle, PeriodicWaveform, RcrParameters};

    fn pulsatile() -> PeriodicWaveform<f64> {
        PeriodicWaveform::from_fn(1.0, 100, |t| {
            let w = 2.0 * std::f64::consts::PI * t;
            1.0 + 0.9 * w.sin() + 0.2 * (3.0 * w).cos()
        })
        .unwrap()
    }

    #[test]
    fn coefficients_for_default_radius() {
        let c = GeneralizedAlpha::<f64>::from_spectral_radius(0.5).unwrap();
        assert!((c.alpha_m - 2.5 / 3.0).abs() < 1e-15);
        assert!((c.alpha_f - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.gamma - (0.5 + 2.5 / 3.0 - 2.0 / 3.0)).abs() < 1e-15);
        assert!(GeneralizedAlpha::from_spectral_radius(1.5).is_err());
    }

    #[test]
    fn single_resistor_obeys_ohm() {
        let net = LumpedNetwork::new(
            2,
            vec![LumpedElement::resistor(3.0, 0, 1)],
            vec![Inflow { node: 0, waveform: PeriodicWaveform::constant(1.0f64, 1.0) }],
            vec![GroundPressure { node: 1, pressure: 0.0 }],
        )
        .unwrap();
        let trace = simulate_network(&net, 0.1, 1, &NetworkOptions::default()).unwrap();
        for &p in &trace.node_pressures[0] {
            assert!((p - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rcr_constant_inflow_steady_pressure() {
        let params = RcrParameters::new(0.2f64, 0.5, 1.8).unwrap();
        let net = LumpedNetwork::rcr(&params, PeriodicWaveform::constant(1.0, 2.0));
        let trace = simulate_network(&net, 0.01, 30, &NetworkOptions::default()).unwrap();
        let last = *trace.node_pressures[0].last().unwrap();
        assert!((last - 4.0).abs() < 1e-6 * 4.0, "{last}");
        let steady = NetworkOptions { initial: InitialState::Steady, ..Default::default() };
        let trace = simulate_network(&net, 0.01, 1, &steady).unwrap();
        assert!((trace.node_pressures[0][0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rcr_cycle_means_match_rk4() {
        let params = RcrParameters::new(0.1, 1.5, 1.0).unwrap();
        let q = pulsatile();
        let dt = 1e-3;
        let net = LumpedNetwork::rcr(&params, q.clone());
        let ga = simulate_network(&net, dt, 10, &NetworkOptions::default()).unwrap();
        // zero capacitor charge corresponds to P(0) = R_p Q(0)
        let p0 = params.r_proximal() * q.value_at(0.0);
        let rk = simulate_rcr_rk4(&params, &q, p0, dt, 10).unwrap();
        let (sa, sb) = (ga.pressure_series(0), rk.pressure_series(0));
        for n in 0..10 {
            let a = mean_over_cycle(&sa, 1.0, n).unwrap();
            let b = mean_over_cycle(&sb, 1.0, n).unwrap();
            assert!(((a - b) / b).abs() < 1e-3, "cycle {n}: {a} vs {b}");
        }
    }

    #[test]
    fn flow_conservation_at_internal_nodes() {
        // inlet -> R -> junction -> two RCR outlets
        let q = pulsatile();
        let mut els = vec![LumpedElement::resistor(0.05, 0, 1)];
        let mut grounds = Vec::new();
        let mut next = 2;
        for (rp, c, rd) in [(0.1, 1.0, 1.5), (0.2, 0.6, 2.0)] {
            let (mid, gnd) = (next, next + 1);
            next += 2;
            els.push(LumpedElement::resistor(rp, 1, mid));
            els.push(LumpedElement::capacitor(c, mid, gnd));
            els.push(LumpedElement::resistor(rd, mid, gnd));
            grounds.push(GroundPressure { node: gnd, pressure: 0.0 });
        }
        let net = LumpedNetwork::new(next, els, vec![Inflow { node: 0, waveform: q }], grounds).unwrap();
        let trace = simulate_network(&net, 1e-3, 3, &NetworkOptions::default()).unwrap();
        let max_flow = trace.element_flows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..trace.len() {
            for node in [1usize, 2, 4] {
                let mut sum = 0.0;
                for (e, el) in net.elements().iter().enumerate() {
                    if el.to == node {
                        sum += trace.element_flows[e][k];
                    }
                    if el.from == node {
                        sum -= trace.element_flows[e][k];
                    }
                }
                assert!(sum.abs() <= 1e-9 * max_flow, "node {node} step {k}: {sum:e}");
            }
        }
    }

    #[test]
    fn diode_blocks_reverse_flow() {
        // inflow alternates sign; diode to an RC load only passes forward flow,
        // the bypass resistor takes the rest
        let q = PeriodicWaveform::from_fn(1.0, 100, |t| (2.0 * std::f64::consts::PI * t).sin()).unwrap();
        let net = LumpedNetwork::new(
            3,
            vec![
                LumpedElement::resistor(1.0, 0, 2),
                LumpedElement::diode(0, 1),
                LumpedElement::resistor(0.5, 1, 2),
                LumpedElement::capacitor(0.2, 1, 2),
            ],
            vec![Inflow { node: 0, waveform: q }],
            vec![GroundPressure { node: 2, pressure: 0.0 }],
        )
        .unwrap();
        let trace = simulate_network(&net, 1e-3, 3, &NetworkOptions::default()).unwrap();
        let diode = &trace.element_flows[1];
        let scale = diode.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(scale > 0.1);
        assert!(diode.iter().all(|&v| v >= -1e-9 * scale));
        assert!(diode.iter().any(|&v| v.abs() <= 1e-12 * scale));
    }

    #[test]
    fn inductor_charges_exponentially() {
        // step inflow into L ∥ R: P(t) = Q R exp(-t R / L)
        let (l, r, q) = (0.1, 2.0, 1.5);
        let net = LumpedNetwork::new(
            2,
            vec![LumpedElement::inductor(l, 0, 1), LumpedElement::resistor(r, 0, 1)],
            vec![Inflow { node: 0, waveform: PeriodicWaveform::constant(1.0f64, q) }],
            vec![GroundPressure { node: 1, pressure: 0.0 }],
        )
        .unwrap();
        let trace = simulate_network(&net, 1e-3, 1, &NetworkOptions::default()).unwrap();
        for k in 0..trace.len() {
            let exact = q * r * (-trace.time(k) * r / l).exp();
            assert!((trace.node_pressures[0][k] - exact).abs() < 2e-3 * q * r, "step {k}");
        }
        assert!((trace.element_flows[0].last().unwrap() - q).abs() < 1e-7);
        let steady = NetworkOptions { initial: InitialState::Steady, ..Default::default() };
        let trace = simulate_network(&net, 1e-2, 1, &steady).unwrap();
        assert!(trace.node_pressures[0].iter().all(|p| p.abs() < 1e-12));
    }

    #[test]
    fn deterministic() {
        let params = RcrParameters::new(0.1, 1.5, 1.0).unwrap();
        let net = LumpedNetwork::rcr(&params, pulsatile());
        let a = simulate_network(&net, 1e-2, 2, &NetworkOptions::default()).unwrap();
        let b = simulate_network(&net, 1e-2, 2, &NetworkOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}

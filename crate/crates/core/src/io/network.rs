use std::collections::HashSet;

use super::{expect_columns, field, float, push_float, token_lines, TraceFile};
use crate::error::{Error, Result};
use crate::network::{GroundPressure, Inflow, LumpedElement, LumpedNetwork, SolutionTrace};
use crate::rcr::{PeriodicWaveform, RcrParameters};

/// RCR outlet declared in a network file.
#[derive(Debug, Clone, PartialEq)]
pub struct Outlet {
    pub id: String,
    pub params: RcrParameters<f64>,
    /// Network node the outlet is attached to; its pressure is the outlet
    /// pressure.
    pub node: usize,
    /// Elements whose flows add up to the outlet flow.
    pub flow_elements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkFile {
    pub network: LumpedNetwork<f64>,
    pub outlets: Vec<Outlet>,
}

impl NetworkFile {
    /// Outlet flows and pressures of a solution of this network.
    pub fn trace(&self, solution: &SolutionTrace<f64>) -> TraceFile {
        let time = (0..solution.len()).map(|k| solution.time(k)).collect();
        let flow = self
            .outlets
            .iter()
            .map(|o| {
                (0..solution.len())
                    .map(|k| o.flow_elements.iter().map(|&e| solution.element_flows[e][k]).sum())
                    .collect()
            })
            .collect();
        let pressure = self.outlets.iter().map(|o| solution.node_pressures[o.node].clone()).collect();
        TraceFile {
            period: solution.period,
            time,
            ids: self.outlets.iter().map(|o| o.id.clone()).collect(),
            flow,
            pressure,
        }
    }

    /// `(id, parameters)` of every outlet.
    pub fn boundary_conditions(&self) -> Vec<(String, RcrParameters<f64>)> {
        self.outlets.iter().map(|o| (o.id.clone(), o.params)).collect()
    }
}

/// Network file, one statement per line:
///
/// ```text
/// R <value> <from> <to>          resistor (likewise C, L)
/// D <from> <to>                  ideal diode
/// INFLOW <node> <waveform-file>
/// GROUND <node> <pressure>
/// RCR <id> <Rp> <C> <Rd> <node>  outlet to zero pressure
/// ```
///
/// Each `RCR` line adds its internal node and a shared zero-pressure ground
/// node after the user nodes. `load_waveform` resolves `INFLOW` file names.
pub fn parse_network(
    text: &str,
    source: &str,
    mut load_waveform: impl FnMut(&str) -> Result<PeriodicWaveform<f64>>,
) -> Result<NetworkFile> {
    let mut elements = Vec::new();
    let mut inflows = Vec::new();
    let mut grounds = Vec::new();
    let mut rcrs: Vec<(String, RcrParameters<f64>, usize)> = Vec::new();
    let mut max_node = 0usize;
    let mut any_node = false;
    let mut node = |line: usize, tok: &str| -> Result<usize> {
        let n: usize = field(source, line, tok, "node id")?;
        max_node = max_node.max(n);
        any_node = true;
        Ok(n)
    };
    for (line, t) in token_lines(text) {
        match t[0] {
            "R" | "C" | "L" => {
                expect_columns(source, line, &t, 4, t[0])?;
                let value = float(source, line, t[1], "element value")?;
                let (from, to) = (node(line, t[2])?, node(line, t[3])?);
                elements.push(match t[0] {
                    "R" => LumpedElement::resistor(value, from, to),
                    "C" => LumpedElement::capacitor(value, from, to),
                    _ => LumpedElement::inductor(value, from, to),
                });
            }
            "D" => {
                expect_columns(source, line, &t, 3, "D")?;
                elements.push(LumpedElement::diode(node(line, t[1])?, node(line, t[2])?));
            }
            "INFLOW" => {
                expect_columns(source, line, &t, 3, "INFLOW")?;
                let n = node(line, t[1])?;
                inflows.push(Inflow { node: n, waveform: load_waveform(t[2])? });
            }
            "GROUND" => {
                expect_columns(source, line, &t, 3, "GROUND")?;
                let n = node(line, t[1])?;
                grounds.push(GroundPressure { node: n, pressure: float(source, line, t[2], "pressure")? });
            }
            "RCR" => {
                expect_columns(source, line, &t, 6, "RCR")?;
                let (id, params) = rcr_line(source, line, &t)?;
                if rcrs.iter().any(|r| r.0 == id) {
                    return Err(Error::parse(source, line, format!("outlet '{id}' declared twice")));
                }
                rcrs.push((id, params, node(line, t[5])?));
            }
            other => return Err(Error::parse(source, line, format!("unknown statement '{other}'"))),
        }
    }
    if !any_node {
        return Err(Error::parse(source, 0, "network file declares no nodes"));
    }
    let mut count = max_node + 1;
    let mut outlets = Vec::new();
    if !rcrs.is_empty() {
        let ground = count + rcrs.len();
        grounds.push(GroundPressure { node: ground, pressure: 0.0 });
        for (id, params, at) in rcrs {
            let mid = count;
            count += 1;
            let first = elements.len();
            elements.push(LumpedElement::resistor(params.r_proximal(), at, mid));
            elements.push(LumpedElement::capacitor(params.capacitance(), mid, ground));
            elements.push(LumpedElement::resistor(params.r_distal(), mid, ground));
            outlets.push(Outlet { id, params, node: at, flow_elements: vec![first] });
        }
        count += 1;
    }
    let network = LumpedNetwork::new(count, elements, inflows, grounds)?;
    Ok(NetworkFile { network, outlets })
}

fn rcr_line(source: &str, line: usize, t: &[&str]) -> Result<(String, RcrParameters<f64>)> {
    let rp = float(source, line, t[2], "Rp")?;
    let c = float(source, line, t[3], "C")?;
    let rd = float(source, line, t[4], "Rd")?;
    if rp <= 0.0 {
        return Err(Error::parse(source, line, "Rp must be positive"));
    }
    let params = RcrParameters::new(rp, c, rd).map_err(|e| Error::parse(source, line, e.to_string()))?;
    Ok((t[1].to_string(), params))
}

/// Boundary-condition file: `RCR <id> <Rp> <C> <Rd>` per outlet. A trailing
/// node column is accepted and other network statements are skipped, so a
/// network file can be used directly.
pub fn parse_boundary_conditions(text: &str, source: &str) -> Result<Vec<(String, RcrParameters<f64>)>> {
    let mut out: Vec<(String, RcrParameters<f64>)> = Vec::new();
    let mut seen = HashSet::new();
    for (line, t) in token_lines(text) {
        match t[0] {
            "RCR" => {
                if !(t.len() == 5 || t.len() == 6) {
                    return Err(Error::parse(source, line, format!("RCR needs 5 or 6 columns, found {}", t.len())));
                }
                let (id, params) = rcr_line(source, line, &t)?;
                if !seen.insert(id.clone()) {
                    return Err(Error::parse(source, line, format!("outlet '{id}' declared twice")));
                }
                out.push((id, params));
            }
            "R" | "C" | "L" | "D" | "INFLOW" | "GROUND" => {}
            other => return Err(Error::parse(source, line, format!("unknown statement '{other}'"))),
        }
    }
    if out.is_empty() {
        return Err(Error::parse(source, 0, "no RCR outlets declared"));
    }
    Ok(out)
}

pub fn write_boundary_conditions(outlets: &[(String, RcrParameters<f64>)]) -> String {
    let mut out = String::new();
    for (id, p) in outlets {
        out.push_str("RCR ");
        out.push_str(id);
        for v in [p.r_proximal(), p.capacitance(), p.r_distal()] {
            out.push(' ');
            push_float(&mut out, v);
        }
        out.push('\n');
    }
    out
}

use super::{expect_columns, field, float, push_float, token_lines};
use crate::error::{Error, Result};
use crate::init::InitialConditionField;
use crate::mesh::{Centerline, CenterlineNode, VolumeMesh};

/// Mesh file:
///
/// ```text
/// NODES <n>
/// <id> <x> <y> <z>        n lines, ids 0..n in order
/// TETS <m>
/// <a> <b> <c> <d>         m lines
/// WALL <k>
/// <a> <b> <c>             k lines
/// ```
pub fn parse_mesh(text: &str, source: &str) -> Result<VolumeMesh<f64>> {
    let mut lines = token_lines(text);
    let (line, t) = lines.next().ok_or_else(|| Error::parse(source, 0, "missing NODES section"))?;
    if t.len() != 2 || t[0] != "NODES" {
        return Err(Error::parse(source, line, "expected 'NODES <count>'"));
    }
    let n: usize = field(source, line, t[1], "count")?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let (line, t) =
            lines.next().ok_or_else(|| Error::parse(source, 0, format!("expected {n} nodes, found {i}")))?;
        expect_columns(source, line, &t, 4, "node line")?;
        let id: usize = field(source, line, t[0], "node id")?;
        if id != i {
            return Err(Error::parse(source, line, format!("node id {id} out of order, expected {i}")));
        }
        rows.push([float(source, line, t[1], "x")?, float(source, line, t[2], "y")?, float(source, line, t[3], "z")?]);
    }
    let mut counted = |name: &str, width: usize| -> Result<Vec<Vec<usize>>> {
        let (line, t) = lines.next().ok_or_else(|| Error::parse(source, 0, format!("missing {name} section")))?;
        if t.len() != 2 || t[0] != name {
            return Err(Error::parse(source, line, format!("expected '{name} <count>'")));
        }
        let count: usize = field(source, line, t[1], "count")?;
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let (line, t) = lines
                .next()
                .ok_or_else(|| Error::parse(source, 0, format!("expected {count} {name} lines, found {i}")))?;
            expect_columns(source, line, &t, width, name)?;
            let ids = t
                .iter()
                .map(|tok| {
                    let v: usize = field(source, line, tok, "node id")?;
                    if v >= n {
                        return Err(Error::parse(source, line, format!("node id {v} out of range")));
                    }
                    Ok(v)
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(ids);
        }
        Ok(out)
    };
    let cells = counted("TETS", 4)?.into_iter().map(|c| [c[0], c[1], c[2], c[3]]).collect();
    let walls = counted("WALL", 3)?.into_iter().map(|c| [c[0], c[1], c[2]]).collect();
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(source, line, "trailing content after WALL section"));
    }
    VolumeMesh::new(rows, cells, walls)
}

pub fn write_mesh(mesh: &VolumeMesh<f64>) -> String {
    let mut out = String::with_capacity(mesh.node_count() * 80);
    out.push_str(&format!("NODES {}\n", mesh.node_count()));
    for (i, p) in mesh.nodes().iter().enumerate() {
        out.push_str(&i.to_string());
        for &v in p {
            out.push(' ');
            push_float(&mut out, v);
        }
        out.push('\n');
    }
    out.push_str(&format!("TETS {}\n", mesh.cells().len()));
    for c in mesh.cells() {
        out.push_str(&format!("{} {} {} {}\n", c[0], c[1], c[2], c[3]));
    }
    out.push_str(&format!("WALL {}\n", mesh.wall_faces().len()));
    for f in mesh.wall_faces() {
        out.push_str(&format!("{} {} {}\n", f[0], f[1], f[2]));
    }
    out
}

/// Centerline with optional pressure and flow per node.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterlineSolution {
    pub centerline: Centerline<f64>,
    pub pressure: Option<Vec<f64>>,
    pub flow: Option<Vec<f64>>,
}

const CENTERLINE_COLUMNS: [&str; 11] = ["id", "branch", "x", "y", "z", "tx", "ty", "tz", "area", "pressure", "flow"];

/// One node per line: `id branch x y z tx ty tz area [pressure [flow]]`.
/// Every line must have the same number of columns (9, 10 or 11).
pub fn parse_centerline_solution(text: &str, source: &str) -> Result<CenterlineSolution> {
    let mut nodes = Vec::new();
    let mut pressure = Vec::new();
    let mut flow = Vec::new();
    let mut width = None;
    for (line, t) in token_lines(text) {
        if !(9..=11).contains(&t.len()) {
            return Err(Error::parse(
                source,
                line,
                format!("centerline line needs 9 to 11 columns, found {}", t.len()),
            ));
        }
        if *width.get_or_insert(t.len()) != t.len() {
            return Err(Error::parse(source, line, "column count differs from the first line"));
        }
        let id: usize = field(source, line, t[0], "node id")?;
        if id != nodes.len() {
            return Err(Error::parse(source, line, format!("node id {id} out of order, expected {}", nodes.len())));
        }
        let mut v = [0.0; 11];
        for c in 2..t.len() {
            v[c] = float(source, line, t[c], CENTERLINE_COLUMNS[c])?;
        }
        nodes.push(CenterlineNode {
            position: [v[2], v[3], v[4]],
            tangent: [v[5], v[6], v[7]],
            area: v[8],
            branch: field(source, line, t[1], "branch id")?,
        });
        if t.len() >= 10 {
            pressure.push(v[9]);
        }
        if t.len() == 11 {
            flow.push(v[10]);
        }
    }
    let width = width.ok_or_else(|| Error::parse(source, 0, "centerline file has no nodes"))?;
    Ok(CenterlineSolution {
        centerline: Centerline::new(nodes)?,
        pressure: (width >= 10).then_some(pressure),
        flow: (width == 11).then_some(flow),
    })
}

pub fn write_centerline_solution(solution: &CenterlineSolution) -> String {
    let mut out = String::from("# id branch x y z tx ty tz area");
    if solution.pressure.is_some() {
        out.push_str(" pressure");
        if solution.flow.is_some() {
            out.push_str(" flow");
        }
    }
    out.push('\n');
    for (i, n) in solution.centerline.nodes().iter().enumerate() {
        out.push_str(&format!("{i} {}", n.branch));
        let mut values: Vec<f64> = n.position.iter().chain(&n.tangent).copied().collect();
        values.push(n.area);
        if let Some(p) = &solution.pressure {
            values.push(p[i]);
            if let Some(q) = &solution.flow {
                values.push(q[i]);
            }
        }
        for v in values {
            out.push(' ');
            push_float(&mut out, v);
        }
        out.push('\n');
    }
    out
}

/// One node per line in mesh order: `id p vx vy vz`.
pub fn parse_initial_condition(text: &str, source: &str) -> Result<InitialConditionField<f64>> {
    let mut pressure = Vec::new();
    let mut velocity = Vec::new();
    for (line, t) in token_lines(text) {
        expect_columns(source, line, &t, 5, "initial condition line")?;
        let id: usize = field(source, line, t[0], "node id")?;
        if id != pressure.len() {
            return Err(Error::parse(source, line, format!("node id {id} out of order, expected {}", pressure.len())));
        }
        pressure.push(float(source, line, t[1], "pressure")?);
        velocity.push([
            float(source, line, t[2], "vx")?,
            float(source, line, t[3], "vy")?,
            float(source, line, t[4], "vz")?,
        ]);
    }
    Ok(InitialConditionField { pressure, velocity })
}

pub fn write_initial_condition(field: &InitialConditionField<f64>) -> String {
    let mut out = String::with_capacity(field.pressure.len() * 100);
    out.push_str("# id pressure vx vy vz\n");
    for (i, (p, v)) in field.pressure.iter().zip(&field.velocity).enumerate() {
        out.push_str(&i.to_string());
        for &x in std::iter::once(p).chain(v) {
            out.push(' ');
            push_float(&mut out, x);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::fixtures::straight_tube;

    #[test]
    fn mesh_round_trip() {
        let f = straight_tube(0.7f64, 1.3, 4, 3, 4).unwrap();
        let text = write_mesh(&f.mesh);
        assert_eq!(parse_mesh(&text, "m").unwrap(), f.mesh);
    }

    #[test]
    fn mesh_errors_carry_lines() {
        let bad = "NODES 1\n0 0 0 x\nTETS 0\nWALL 0\n";
        match parse_mesh(bad, "m") {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains('z'));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_mesh("NODES 1\n0 0 0 0\n", "m").unwrap_err().is_parse());
    }

    #[test]
    fn centerline_round_trip_with_optional_columns() {
        let f = straight_tube(1.0f64, 2.0, 2, 2, 5).unwrap();
        let p: Vec<f64> = (0..5).map(|i| 1.0 / (i as f64 + 3.0)).collect();
        let q: Vec<f64> = (0..5).map(|i| (i as f64).sqrt()).collect();
        for (pressure, flow) in [(None, None), (Some(p.clone()), None), (Some(p), Some(q))] {
            let sol = CenterlineSolution { centerline: f.centerline.clone(), pressure, flow };
            let text = write_centerline_solution(&sol);
            assert_eq!(parse_centerline_solution(&text, "c").unwrap(), sol);
        }
    }

    #[test]
    fn initial_condition_round_trip() {
        let field = InitialConditionField {
            pressure: vec![0.1, -2.5e-7, 3.0],
            velocity: vec![[1.0 / 3.0, 0.0, -1e300], [0.0; 3], [2.0f64.sqrt(), 1e-310, 7.0]],
        };
        let text = write_initial_condition(&field);
        assert_eq!(parse_initial_condition(&text, "ic").unwrap(), field);
    }
}

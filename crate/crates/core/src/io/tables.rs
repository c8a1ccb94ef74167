use csv::{ReaderBuilder, StringRecord, Trim};

use super::{float, push_float};
use crate::error::{Error, Result};
use crate::periodicity::{OutletTrace, OutletTraceSet};
use crate::rcr::{PeriodicWaveform, RcrParameters};

const STEP_TOLERANCE: f64 = 1e-6;

/// Value of the `# period=<T>` line.
fn period_line(text: &str, source: &str) -> Result<f64> {
    let mut found = None;
    for (i, line) in text.lines().enumerate() {
        let Some(rest) = line.trim().strip_prefix('#') else { continue };
        let Some((key, value)) = rest.split_once('=') else { continue };
        if key.trim() != "period" {
            continue;
        }
        if found.is_some() {
            return Err(Error::parse(source, i + 1, "period given twice"));
        }
        let period = float(source, i + 1, value.trim(), "period")?;
        if period <= 0.0 {
            return Err(Error::parse(source, i + 1, "period must be positive"));
        }
        found = Some(period);
    }
    found.ok_or_else(|| Error::parse(source, 1, "missing '# period=<T>' line"))
}

struct Table {
    header: StringRecord,
    header_line: usize,
    rows: Vec<(usize, Vec<f64>)>,
}

/// Header and numeric rows of a CSV body; `#` lines are skipped.
fn read_table(text: &str, source: &str) -> Result<Table> {
    let header_line = text.lines().position(|l| !l.trim_start().starts_with('#')).map_or(1, |i| i + 1);
    let mut reader =
        ReaderBuilder::new().comment(Some(b'#')).trim(Trim::All).has_headers(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::parse(source, header_line, e.to_string()))?.clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(source, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let values = record
            .iter()
            .zip(header.iter())
            .map(|(tok, name)| float(source, line, tok, &format!("value in column '{name}'")))
            .collect::<Result<Vec<_>>>()?;
        rows.push((line, values));
    }
    Ok(Table { header, header_line, rows })
}

/// Inflow waveform: `# period=<T>`, a `t,Q` header and one sample per row.
/// A closing sample at `t = T` is dropped since it repeats `t = 0`.
pub fn parse_inflow(text: &str, source: &str) -> Result<PeriodicWaveform<f64>> {
    let period = period_line(text, source)?;
    let Table { header, header_line, rows } = read_table(text, source)?;
    if header.len() != 2 {
        return Err(Error::parse(
            source,
            header_line,
            format!("inflow needs 2 columns (t, Q), found {}", header.len()),
        ));
    }
    let mut samples = Vec::with_capacity(rows.len());
    for (line, v) in rows {
        if (v[0] - period).abs() <= STEP_TOLERANCE * period && !samples.is_empty() {
            continue;
        }
        if v[0] < 0.0 || v[0] >= period {
            return Err(Error::parse(source, line, format!("time {} outside [0, {period})", v[0])));
        }
        samples.push((v[0], v[1]));
    }
    PeriodicWaveform::new(period, samples).map_err(|e| Error::parse(source, 0, e.to_string()))
}

pub fn write_inflow(waveform: &PeriodicWaveform<f64>) -> String {
    let mut out = String::from("# period=");
    push_float(&mut out, waveform.period());
    out.push_str("\nt,Q\n");
    for (&t, &q) in waveform.times().iter().zip(waveform.values()) {
        push_float(&mut out, t);
        out.push(',');
        push_float(&mut out, q);
        out.push('\n');
    }
    out
}

/// Multi-outlet trace on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub period: f64,
    pub time: Vec<f64>,
    pub ids: Vec<String>,
    pub flow: Vec<Vec<f64>>,
    pub pressure: Vec<Vec<f64>>,
}

impl TraceFile {
    /// Sample spacing; the grid is checked to be uniform when parsed.
    pub fn dt(&self) -> f64 {
        let n = self.time.len();
        (self.time[n - 1] - self.time[0]) / (n - 1) as f64
    }
}

/// Trace: `# period=<T>`, header `time,flow:<id>,pressure:<id>,...` and
/// one row per sample. Samples must be uniformly spaced.
pub fn parse_trace(text: &str, source: &str) -> Result<TraceFile> {
    let period = period_line(text, source)?;
    let Table { header, header_line, rows } = read_table(text, source)?;
    let column_error =
        |c: usize, msg: String| Error::parse(source, header_line, format!("column {} '{}': {msg}", c + 1, &header[c]));
    if header.is_empty() || &header[0] != "time" {
        return Err(column_error(0, "expected 'time'".into()));
    }
    if header.len() < 3 || header.len() % 2 == 0 {
        return Err(Error::parse(source, header_line, "header needs 'time' then flow:<id>,pressure:<id> pairs"));
    }
    let mut ids: Vec<String> = Vec::new();
    for c in (1..header.len()).step_by(2) {
        let id = header[c]
            .strip_prefix("flow:")
            .filter(|id| !id.is_empty())
            .ok_or_else(|| column_error(c, "expected 'flow:<id>'".into()))?;
        if header[c + 1].strip_prefix("pressure:") != Some(id) {
            return Err(column_error(c + 1, format!("expected 'pressure:{id}'")));
        }
        if ids.iter().any(|x| x == id) {
            return Err(column_error(c, format!("outlet '{id}' repeated")));
        }
        ids.push(id.to_string());
    }
    if rows.len() < 2 {
        return Err(Error::parse(source, 0, "trace needs at least 2 samples"));
    }
    let n = rows.len();
    let t0 = rows[0].1[0];
    let dt = (rows[n - 1].1[0] - t0) / (n - 1) as f64;
    if !(dt > 0.0) {
        return Err(Error::parse(source, rows[1].0, "time must increase"));
    }
    let mut time = Vec::with_capacity(n);
    let mut flow = vec![Vec::with_capacity(n); ids.len()];
    let mut pressure = vec![Vec::with_capacity(n); ids.len()];
    for (k, (line, v)) in rows.into_iter().enumerate() {
        if (v[0] - (t0 + k as f64 * dt)).abs() > STEP_TOLERANCE * dt {
            return Err(Error::parse(source, line, format!("time {} breaks the uniform step {dt}", v[0])));
        }
        time.push(v[0]);
        for o in 0..ids.len() {
            flow[o].push(v[1 + 2 * o]);
            pressure[o].push(v[2 + 2 * o]);
        }
    }
    Ok(TraceFile { period, time, ids, flow, pressure })
}

pub fn write_trace(trace: &TraceFile) -> String {
    let mut out = String::from("# period=");
    push_float(&mut out, trace.period);
    out.push_str("\ntime");
    for id in &trace.ids {
        out.push_str(&format!(",flow:{id},pressure:{id}"));
    }
    out.push('\n');
    for (k, &t) in trace.time.iter().enumerate() {
        push_float(&mut out, t);
        for o in 0..trace.ids.len() {
            out.push(',');
            push_float(&mut out, trace.flow[o][k]);
            out.push(',');
            push_float(&mut out, trace.pressure[o][k]);
        }
        out.push('\n');
    }
    out
}

/// Pairs every traced outlet with its RCR parameters.
pub fn trace_set(trace: &TraceFile, params: &[(String, RcrParameters<f64>)]) -> Result<OutletTraceSet<f64>> {
    let outlets = trace
        .ids
        .iter()
        .enumerate()
        .map(|(o, id)| {
            let p = params
                .iter()
                .find(|(name, _)| name == id)
                .ok_or_else(|| Error::param(format!("no RCR parameters for outlet '{id}'")))?;
            Ok(OutletTrace {
                id: id.clone(),
                params: p.1,
                flow: trace.flow[o].clone(),
                pressure: trace.pressure[o].clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    OutletTraceSet::new(trace.period, trace.dt(), outlets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inflow_round_trip_and_closing_sample() {
        let w = PeriodicWaveform::from_fn(0.8, 7, |t: f64| 1.0 + (t * 3.0).sin()).unwrap();
        assert_eq!(parse_inflow(&write_inflow(&w), "q").unwrap(), w);
        let closed = "# period=1\nt,Q\n0,1\n0.5,2\n1,1\n";
        assert_eq!(parse_inflow(closed, "q").unwrap().len(), 2);
        assert!(parse_inflow("t,Q\n0,1\n0.5,1\n", "q").unwrap_err().is_parse());
    }

    #[test]
    fn trace_round_trip() {
        let trace = TraceFile {
            period: 1.0,
            time: (0..5).map(|k| k as f64 * 0.25).collect(),
            ids: vec!["a".into(), "b2".into()],
            flow: vec![vec![0.1, 0.2, 0.3, 0.4, 0.5], vec![1.0 / 3.0; 5]],
            pressure: vec![vec![5.0; 5], vec![-1e-9, 2.0, 3.0, 4.0, 5.0]],
        };
        let parsed = parse_trace(&write_trace(&trace), "t").unwrap();
        assert_eq!(parsed, trace);
        assert_eq!(parsed.dt(), 0.25);
    }

    #[test]
    fn malformed_header_names_the_column() {
        let e = parse_trace("# period=1\ntime,flow:a,presure:a\n0,1,1\n0.5,1,1\n", "t").unwrap_err();
        let msg = e.to_string();
        assert!(matches!(e, Error::Parse { line: 2, .. }) && msg.contains("presure:a"), "{msg}");
        let e = parse_trace("# period=1\ntime,flow:a,pressure:a\n0,1,1\n0.5,x,1\n", "t").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e}");
        let e = parse_trace("# period=1\ntime,flow:a,pressure:a\n0,1,1\n0.5,1,1\n0.7,1,1\n", "t").unwrap_err();
        assert!(e.is_parse());
    }
}

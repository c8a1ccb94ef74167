use std::fmt::Write;

use vascinit::ConvergenceReport64;

/// `key = value` lines, one per quantity, outlets prefixed by
/// `outlet.<id>.`. The first line is the verdict.
pub fn render(r: &ConvergenceReport64) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("write to String");
    kv("status", if r.converged { "PASS" } else { "FAIL" }.into());
    kv("tolerance", r.epsilon_target.to_string());
    kv("cycles", r.cycles.to_string());
    kv("asymptotic_error", r.last_asymptotic_error.to_string());
    kv("flow_change", r.last_flow_change.to_string());
    kv("first_converged_cycle", r.first_converged_cycle.map_or("none".into(), |c| c.to_string()));
    kv("predicted_cycles", r.predicted_cycles.to_string());
    kv("mean_tau_over_period", r.mean_tau_over_period.to_string());
    kv("fitted_tau_over_period", r.fitted_tau_over_period.map_or("none".into(), |t| t.to_string()));
    kv("provisional", r.provisional.to_string());
    for o in &r.outlets {
        let e = &o.errors;
        let key = |name: &str| format!("outlet.{}.{name}", o.id);
        kv(&key("periodic_mean_pressure"), o.prediction.mean.to_string());
        kv(&key("asymptotic_error"), e.asymptotic.last().copied().unwrap_or(f64::NAN).to_string());
        kv(&key("cyclic_error"), e.cyclic.last().map_or("none".into(), |c| c.to_string()));
        kv(&key("flow_change"), e.flow_cyclic.last().map_or("none".into(), |c| c.to_string()));
        kv(&key("fitted_tau_over_period"), o.fit.as_ref().map_or("none".into(), |f| f.tau_over_period.to_string()));
    }
    out
}

//! One function per subcommand; each returns its JSON result and summary.

use std::fmt::Write as _;
use std::path::Path;

use dseu_core::aa::{aa_value, independence_witness, realize_lottery_act, reduce_act};
use dseu_core::audit::{run_audit, AuditConfig, AuditContext, AuditReport};
use dseu_core::bracketing::{bracket_act, bracket_profile};
use dseu_core::elicitation::{complementary_demo, elicit as elicit_session, ellsberg_demo, section2_demo, subset_label};
use dseu_core::equivalents::{time_equivalent_act, time_equivalent_bisect_with, BisectOptions, EquivalentTime};
use dseu_core::oracles::{seu_oracle, ValueFunctional};
use dseu_core::{DiscountRate, DseuModel, GridAct, Outcome, State, StateSet, StateSpace};
use serde_json::{json, Map, Value};

use crate::formats::{
    act_json, bound_json, elicitation_json, lottery_act_json, profile_json, read_act, read_lottery_act, read_model,
    read_oracle, time_set_json, CliError, CliResult,
};
use crate::table;

pub struct Report {
    pub json: Value,
    pub summary: String,
}

fn check_tol(tol: f64) -> CliResult<f64> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Validation(format!("tolerance must be finite and > 0, got {tol}")))
    }
}

fn model_and_act(model: &Path, act: &Path) -> CliResult<(DseuModel, GridAct)> {
    let (space, m) = read_model(model)?;
    let f = read_act(act)?;
    if f.space() != &space {
        return Err(CliError::Validation(format!(
            "{}: act states {:?} differ from model states {:?}",
            act.display(),
            labels(f.space()),
            labels(&space)
        )));
    }
    Ok((m, f))
}

fn labels(space: &StateSpace) -> Vec<&str> {
    space.states().iter().map(|s| s.as_str()).collect()
}

fn outcome_or(label: Option<&str>, fallback: &Outcome) -> Outcome {
    label.map(Outcome::from).unwrap_or_else(|| fallback.clone())
}

fn time_json(t: EquivalentTime) -> Value {
    match t {
        EquivalentTime::Finite(t) => json!(t),
        EquivalentTime::WholeHorizon => bound_json(f64::INFINITY),
    }
}

fn time_text(t: EquivalentTime) -> String {
    match t {
        EquivalentTime::Finite(t) => t.to_string(),
        EquivalentTime::WholeHorizon => "inf".into(),
    }
}

pub fn eval(model: &Path, act: &Path) -> CliResult<Report> {
    let (m, f) = model_and_act(model, act)?;
    let state_first = m.act_value(&f)?;
    let time_first = m.act_value_dual(&f)?;
    let per_state: Map<String, Value> = f
        .space()
        .states()
        .iter()
        .zip(f.profiles())
        .map(|(s, p)| Ok((s.to_string(), json!(m.profile_value(p)?))))
        .collect::<CliResult<_>>()?;
    let gap = (state_first - time_first).abs();
    let json = json!({
        "value": state_first,
        "state_first": state_first,
        "time_first": time_first,
        "fubini_gap": gap,
        "per_state": per_state,
    });
    let summary = format!("V(f) = {state_first}\n  state-first  {state_first}\n  time-first   {time_first}\n  difference   {gap:e}\n");
    Ok(Report { json, summary })
}

pub fn equiv(model: &Path, act: &Path, x: Option<&str>, y: Option<&str>, tol: f64) -> CliResult<Report> {
    let tol = check_tol(tol)?;
    let (m, f) = model_and_act(model, act)?;
    let x = outcome_or(x, m.util.best().0);
    let y = outcome_or(y, m.util.worst().0);
    let oracle = seu_oracle(m.clone(), 0.0)?;
    let bisect = time_equivalent_bisect_with(&oracle, &f, &x, &y, &BisectOptions::with_tol(tol).for_rate(m.rate))?;
    let closed = time_equivalent_act(&m, &f, &x, &y)?;
    let value = m.act_value(&f)?;
    let equivalent = m.act_value(&GridAct::deterministic(f.space().clone(), closed.profile(&x, &y)))?;
    let json = json!({
        "x": x.as_str(),
        "y": y.as_str(),
        "value": value,
        "closed_form": {
            "time": time_json(closed.time),
            "mass": closed.mass(m.rate),
            "equivalent_value": equivalent,
            "gap": (equivalent - value).abs(),
        },
        "bisection": {
            "time": time_json(bisect.time),
            "bracket_width": bisect.bracket_width,
            "queries": bisect.queries,
            "tol": tol,
        },
    });
    let mut summary = format!("time equivalent of f between `{x}` and `{y}`\n");
    let _ = writeln!(summary, "  closed form  t = {}  (mass {})", time_text(closed.time), closed.mass(m.rate));
    let _ = writeln!(
        summary,
        "  bisection    t = {}  (width {:e}, {} queries)",
        time_text(bisect.time),
        bisect.bracket_width,
        bisect.queries
    );
    let _ = writeln!(summary, "  |V(x_[0,t) y) − V(f)| = {:e}", (equivalent - value).abs());
    Ok(Report { json, summary })
}

pub fn elicit(oracle: &Path, x: Option<&str>, y: Option<&str>, tol: f64) -> CliResult<Report> {
    let tol = check_tol(tol)?;
    let spec = read_oracle(oracle)?;
    let x = outcome_or(x, spec.util.best().0);
    let y = outcome_or(y, spec.util.worst().0);
    let rep = elicit_session(&spec.oracle(), &spec.space, &x, &y, tol)?;
    let mut json = elicitation_json(&spec.space, &rep);
    json["kind"] = json!(spec.kind);
    let rows: Vec<Vec<String>> = rep
        .mu_hat
        .iter()
        .map(|(e, v)| vec![subset_label(&spec.space, *e), v.to_string()])
        .collect();
    let mut summary = format!(
        "λ̂ = {} (half-life {}), {} queries\n",
        rep.lambda_hat.lambda(),
        rep.lambda_hat.half_life(),
        rep.query_count
    );
    summary += &table::render(&["event", "μ̂"], &rows);
    let verdict = if rep.is_additive() { "PASS" } else { "FAIL" };
    let _ = write!(summary, "additivity: {verdict} (max residual {:e}, threshold {:e}", rep.max_residual, rep.threshold);
    if let Some(((e, f), r)) = rep.worst_pair().filter(|_| !rep.is_additive()) {
        let _ = write!(
            summary,
            "; worst μ̂({}∪{}) − μ̂({}) − μ̂({}) = {r}",
            subset_label(&spec.space, e),
            subset_label(&spec.space, f),
            subset_label(&spec.space, e),
            subset_label(&spec.space, f)
        );
    }
    summary += ")\n";
    Ok(Report { json, summary })
}

pub fn audit_json(report: &AuditReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let violations: Vec<Value> = c
                .violations
                .iter()
                .map(|v| {
                    let queries: Vec<Value> = v
                        .queries
                        .iter()
                        .map(|q| json!({ "f": act_json(&q.f), "g": act_json(&q.g), "response": q.response.symbol() }))
                        .collect();
                    json!({ "description": v.description, "residual": v.residual, "queries": queries })
                })
                .collect();
            json!({
                "axiom": c.axiom.name(),
                "verdict": c.verdict.name(),
                "checked": c.checked,
                "note": c.note,
                "violations": violations,
            })
        })
        .collect();
    json!({ "all_pass": report.all_pass(), "checks": checks })
}

pub fn audit(oracle: &Path, samples: usize, seed: u64, horizon_max: u32) -> CliResult<Report> {
    let spec = read_oracle(oracle)?;
    let or = spec.oracle();
    let outcomes: Vec<Outcome> = spec.util.iter().map(|(o, _)| o.clone()).collect();
    let ctx = AuditContext::probe(&or, spec.space.clone(), &outcomes, spec.rate)?;
    let config = AuditConfig { samples, seed, horizon_max };
    let functional: &dyn ValueFunctional = &*spec.functional;
    let report = run_audit(&or, &ctx, &config, Some((functional, &spec.claimed)))?;
    let mut json = audit_json(&report);
    json["kind"] = json!(spec.kind);
    json["config"] = json!({ "samples": samples, "seed": seed, "horizon_max": horizon_max });
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.axiom.name().to_string(),
                c.verdict.name().to_string(),
                c.checked.to_string(),
                c.violations.len().to_string(),
                c.note.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut summary = format!("audit of a {} oracle, {samples} samples, seed {seed}\n", spec.kind);
    summary += &table::render(&["axiom", "verdict", "checked", "violations", "note"], &rows);
    for c in report.checks.iter().filter(|c| !c.violations.is_empty()) {
        let _ = writeln!(summary, "first {} violation: {}", c.axiom.name(), c.violations[0].description);
    }
    Ok(Report { json, summary })
}

pub fn bracket(model: &Path, act: &Path, n: usize, state: Option<&str>) -> CliResult<Report> {
    let (m, f) = model_and_act(model, act)?;
    let (json, lower_value, upper_value, target, gap) = match state {
        Some(s) => {
            let p = f.restrict(&State::from(s))?;
            let b = bracket_profile(&m, p, n)?;
            let json = json!({
                "target": "profile",
                "state": s,
                "n": n,
                "lower": profile_json(&b.lower),
                "upper": profile_json(&b.upper),
                "lower_value": b.lower_value,
                "upper_value": b.upper_value,
                "target_value": b.target_value,
                "gap": b.gap,
                "reference": [b.reference.0.as_str(), b.reference.1.as_str()],
                "bins": b.bins.iter().map(time_set_json).collect::<Vec<_>>(),
                "selections": b.selections.iter().map(time_set_json).collect::<Vec<_>>(),
            });
            (json, b.lower_value, b.upper_value, b.target_value, b.gap)
        }
        None => {
            let b = bracket_act(&m, &f, n)?;
            let bins: Vec<Vec<&str>> = b
                .bins
                .iter()
                .map(|set| set.iter().map(|i| f.space().state(i).as_str()).collect())
                .collect();
            let json = json!({
                "target": "act",
                "n": n,
                "lower": act_json(&b.lower),
                "upper": act_json(&b.upper),
                "lower_value": b.lower_value,
                "upper_value": b.upper_value,
                "target_value": b.target_value,
                "gap": b.gap,
                "reference": [b.reference.0.as_str(), b.reference.1.as_str()],
                "bins": bins,
                "selections": b.selections.iter().map(time_set_json).collect::<Vec<_>>(),
            });
            (json, b.lower_value, b.upper_value, b.target_value, b.gap)
        }
    };
    let summary = format!(
        "N = {n}\n  lower   {lower_value}\n  target  {target}\n  upper   {upper_value}\n  gap     {gap} (normalized, bound {})\n",
        1.0 / n as f64
    );
    Ok(Report { json, summary })
}

pub fn aa(model: &Path, act: &Path, witness: Option<(&Path, f64)>) -> CliResult<Report> {
    let (m, f) = model_and_act(model, act)?;
    let value = m.act_value(&f)?;
    let reduced_value = aa_value(&m, &f)?;
    let mut json = json!({
        "value": value,
        "aa_value": reduced_value,
        "gap": (value - reduced_value).abs(),
        "reduced": lottery_act_json(&reduce_act(m.rate, &f)),
    });
    let mut summary = format!("V(f) = {value}\nAA value = {reduced_value}\n");
    if let Some((path, t)) = witness {
        let g = read_lottery_act(path)?;
        let (lhs, rhs) = independence_witness(m.rate, t, &g, &f)?;
        let gap = lhs.max_gap(&rhs)?;
        json["witness"] = json!({
            "t": t,
            "realized": act_json(&realize_lottery_act(m.rate, t, &g)?),
            "lhs": lottery_act_json(&lhs),
            "rhs": lottery_act_json(&rhs),
            "gap": gap,
        });
        let _ = writeln!(summary, "independence at t = {t}: entrywise gap {gap:e}");
    }
    Ok(Report { json, summary })
}

fn rate(lambda: f64) -> CliResult<DiscountRate> {
    Ok(DiscountRate::new(lambda)?)
}

pub fn demo_section2(lambda: f64, mu_e: f64, mu_f: f64) -> CliResult<Report> {
    let tr = section2_demo(rate(lambda)?, mu_e, mu_f)?;
    let comp = complementary_demo(tr.rate, 1e-12)?;
    let acts: Vec<Value> = tr
        .acts
        .iter()
        .map(|(name, act, v)| json!({ "name": name, "value": v, "act": act_json(act) }))
        .collect();
    let checks: Vec<Value> = tr
        .checks
        .iter()
        .map(|c| json!({ "first": c.first, "second": c.second, "gap": c.gap }))
        .collect();
    let json = json!({
        "lambda": lambda,
        "mu_e": mu_e,
        "mu_f": mu_f,
        "t": tr.t,
        "t_e": bound_json(tr.t_e),
        "t_f": bound_json(tr.t_f),
        "t_ef": bound_json(tr.t_ef),
        "t_f_prime": tr.t_f_prime,
        "acts": acts,
        "checks": checks,
        "identity_lhs": tr.identity_lhs,
        "identity_rhs": tr.identity_rhs,
        "identity_residual": tr.identity_residual,
        "mu_hat_e": tr.mu_hat_e,
        "mu_hat_f": tr.mu_hat_f,
        "mu_hat_ef": tr.mu_hat_ef,
        "additivity_residual": tr.additivity_residual,
        "holds": tr.holds(1e-12),
        "complementary": { "t": comp.t, "bet_gap": comp.bet_gap, "equivalent_gap": comp.equivalent_gap, "mu_hat": comp.mu_hat },
    });
    let mut s = format!("λ = {lambda}, μ(E) = {mu_e}, μ(F) = {mu_f}\n");
    let _ = writeln!(s, "half-life t = {}", tr.t);
    let _ = writeln!(s, "t_E = {}, t_F = {}, t_E∪F = {}, t'_F = {}", tr.t_e, tr.t_f, tr.t_ef, tr.t_f_prime);
    let rows: Vec<Vec<String>> = tr.acts.iter().map(|(n, _, v)| vec![n.to_string(), v.to_string()]).collect();
    s += &table::render(&["act", "value"], &rows);
    let rows: Vec<Vec<String>> =
        tr.checks.iter().map(|c| vec![format!("{} ∼ {}", c.first, c.second), format!("{:e}", c.gap)]).collect();
    s += &table::render(&["indifference", "gap"], &rows);
    let _ = writeln!(s, "identity residual {:e}", tr.identity_residual);
    let _ = writeln!(s, "μ̂(E) = {}, μ̂(F) = {}, μ̂(E∪F) = {}", tr.mu_hat_e, tr.mu_hat_f, tr.mu_hat_ef);
    let _ = writeln!(s, "complementary events: μ̂ = {}", comp.mu_hat);
    let r = tr.additivity_residual.abs();
    if tr.holds(1e-12) {
        let _ = writeln!(s, "μ(E∪F) = μ(E) + μ(F): additivity residual ≤ 1e−12 ({r:e})");
    } else {
        let _ = writeln!(s, "μ(E∪F) = μ(E) + μ(F): additivity residual {r:e} exceeds 1e−12");
    }
    Ok(Report { json, summary: s })
}

pub fn demo_ellsberg(lambda: f64, epsilon: f64, tol: f64) -> CliResult<Report> {
    let tol = check_tol(tol)?;
    let tr = ellsberg_demo(rate(lambda)?, epsilon, tol)?;
    let space = StateSpace::new(["R", "B"])?;
    let json = json!({
        "lambda": lambda,
        "epsilon": epsilon,
        "red_bet": tr.red_bet,
        "black_bet": tr.black_bet,
        "unambiguous_bet": tr.unambiguous_bet,
        "red_vs_unambiguous": tr.red_vs_unambiguous.symbol(),
        "black_vs_unambiguous": tr.black_vs_unambiguous.symbol(),
        "report": elicitation_json(&space, &tr.report),
        "control": elicitation_json(&space, &tr.control),
    });
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let mut s = format!("ε = {epsilon}, λ = {lambda}\n");
    let _ = writeln!(s, "bet on red    {}  ({} half-life bet)", tr.red_bet, tr.red_vs_unambiguous);
    let _ = writeln!(s, "bet on black  {}  ({} half-life bet)", tr.black_bet, tr.black_vs_unambiguous);
    let _ = writeln!(s, "half-life bet {}", tr.unambiguous_bet);
    let _ = writeln!(
        s,
        "contaminated: μ̂(R) = {}, μ̂(B) = {}, residual {}: {}",
        tr.report.mu_hat[&StateSet::singleton(0)],
        tr.report.mu_hat[&StateSet::singleton(1)],
        tr.report.max_residual,
        verdict(tr.report.is_additive())
    );
    let _ = writeln!(
        s,
        "additive control: residual {:e}: {}",
        tr.control.max_residual,
        verdict(tr.control.is_additive())
    );
    Ok(Report { json, summary: s })
}

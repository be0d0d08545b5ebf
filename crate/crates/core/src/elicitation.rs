//! Recovering the discount rate and subjective probabilities from
//! indifference queries.
//!
//! The rate comes from a half-life query: the `t*` at which `x` on `[0, t*)`
//! then `y` is indifferent to `y` on `[0, t*)` then `x` satisfies
//! `e^{−λt*} = 1/2`. With `λ̂` known, the time equivalent `t_E` of the bet
//! `x_E y` gives `μ̂(E) = 1 − e^{−λ̂ t_E}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::acts::{GridAct, Outcome, StateSet, StateSpace, StepProfile};
use crate::equivalents::{monotone_search, time_equivalent_bisect_with, BisectOptions, EquivalentTime, Search};
use crate::error::{Error, Result};
use crate::evaluate::{Beliefs, DseuModel, UtilityModel};
use crate::exp_measure::DiscountRate;
use crate::oracles::{choquet_oracle, Capacity, ChoquetFunctional, Preference, PreferenceOracle, ThresholdOracle, ValueFunctional};

/// Largest state space for which every subset is elicited.
pub const FULL_ENUMERATION_STATES: usize = 10;

/// Outcome of the half-life query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub rate: DiscountRate,
    pub half_life: f64,
    pub bracket_width: f64,
    pub queries: usize,
}

/// Estimates `λ` by bisecting for the half-life.
pub fn elicit_lambda<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    space: &StateSpace,
    x: &Outcome,
    y: &Outcome,
    tol: f64,
) -> Result<RateEstimate> {
    let opts = BisectOptions::with_tol(tol);
    let cx = GridAct::constant(space.clone(), x.clone());
    let cy = GridAct::constant(space.clone(), y.clone());
    if oracle.compare(&cx, &cy)? != Preference::StrictlyFirst {
        return Err(Error::protocol(format!("oracle does not strictly prefer `{x}` to `{y}`")));
    }
    let mut queries = 1;
    let search = monotone_search(&opts, &mut queries, |t| {
        let early = GridAct::deterministic(space.clone(), StepProfile::prefix(x.clone(), t, y.clone())?);
        let late = GridAct::deterministic(space.clone(), StepProfile::prefix(y.clone(), t, x.clone())?);
        oracle.compare(&early, &late)
    })?;
    match search {
        Search::Found { t, width } if t > 0.0 => Ok(RateEstimate {
            rate: DiscountRate::new(LN_2 / t)?,
            half_life: t,
            bracket_width: width,
            queries,
        }),
        _ => Err(Error::protocol(format!(
            "no half-life indifference found below t = {}",
            opts.ceiling
        ))),
    }
}

/// Elicited probability of one event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventEstimate {
    pub mass: f64,
    /// Time equivalent of the bet, `None` for the whole horizon.
    pub time: Option<f64>,
    pub queries: usize,
}

/// `μ̂(E) = 1 − e^{−λ̂ t_E}` from the time equivalent of the bet `x_E y`.
pub fn elicit_event<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    rate: DiscountRate,
    space: &StateSpace,
    event: StateSet,
    x: &Outcome,
    y: &Outcome,
    tol: f64,
) -> Result<EventEstimate> {
    let full = space.full();
    if !event.is_subset(full) {
        return Err(Error::validation("event is not a subset of the state space"));
    }
    if event.is_empty() {
        return Ok(EventEstimate { mass: 0.0, time: Some(0.0), queries: 0 });
    }
    if event == full {
        return Ok(EventEstimate { mass: 1.0, time: None, queries: 0 });
    }
    let bet = GridAct::bet(space.clone(), event, x.clone(), y.clone());
    let opts = BisectOptions::with_tol(tol).for_rate(rate);
    let te = time_equivalent_bisect_with(oracle, &bet, x, y, &opts)?;
    Ok(match te.time {
        EquivalentTime::Finite(t) => EventEstimate { mass: rate.cdf(t)?, time: Some(t), queries: te.queries },
        EquivalentTime::WholeHorizon => EventEstimate { mass: 1.0, time: None, queries: te.queries },
    })
}

/// Elicited measure with its additivity audit.
#[derive(Debug, Clone, PartialEq)]
pub struct ElicitationReport {
    pub lambda_hat: DiscountRate,
    pub mu_hat: BTreeMap<StateSet, f64>,
    /// `μ̂(E∪F) − μ̂(E) − μ̂(F)` for disjoint, non-empty `E, F` with `E < F`.
    pub additivity_residuals: BTreeMap<(StateSet, StateSet), f64>,
    pub max_residual: f64,
    /// Residuals above this are attributed to the oracle, not to the search.
    pub threshold: f64,
    pub query_count: usize,
}

impl ElicitationReport {
    pub fn is_additive(&self) -> bool {
        self.max_residual <= self.threshold
    }

    /// The pair with the largest residual, if any.
    pub fn worst_pair(&self) -> Option<((StateSet, StateSet), f64)> {
        self.additivity_residuals
            .iter()
            .map(|(k, v)| (*k, *v))
            .fold(None, |acc, (k, v)| match acc {
                Some((_, w)) if f64::abs(w) >= v.abs() => acc,
                _ => Some((k, v)),
            })
    }
}

/// Elicits `μ̂` on every subset (up to [`FULL_ENUMERATION_STATES`] states) or
/// on singletons and unions of two singletons, and audits additivity.
pub fn elicit_measure<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    rate: DiscountRate,
    space: &StateSpace,
    x: &Outcome,
    y: &Outcome,
    tol: f64,
) -> Result<ElicitationReport> {
    let n = space.len();
    let events: Vec<StateSet> = if n <= FULL_ENUMERATION_STATES {
        StateSet::all_subsets(n).collect()
    } else {
        let mut v = alloc::vec![StateSet::empty(), space.full()];
        for i in 0..n {
            v.push(StateSet::singleton(i));
            for j in i + 1..n {
                v.push(StateSet::singleton(i).with(j));
            }
        }
        v.sort();
        v
    };
    let mut mu_hat = BTreeMap::new();
    let mut query_count = 0;
    for e in events {
        let est = elicit_event(oracle, rate, space, e, x, y, tol)?;
        query_count += est.queries;
        mu_hat.insert(e, est.mass);
    }
    let mut additivity_residuals = BTreeMap::new();
    let keys: Vec<StateSet> = mu_hat.keys().copied().filter(|e| !e.is_empty()).collect();
    for (k, e) in keys.iter().enumerate() {
        for f in &keys[k + 1..] {
            if !e.is_disjoint(*f) {
                continue;
            }
            if let Some(u) = mu_hat.get(&e.union(*f)) {
                additivity_residuals.insert((*e, *f), u - mu_hat[e] - mu_hat[f]);
            }
        }
    }
    let max_residual = additivity_residuals.values().fold(0.0f64, |m, r| m.max(r.abs()));
    Ok(ElicitationReport {
        lambda_hat: rate,
        mu_hat,
        additivity_residuals,
        max_residual,
        threshold: 10.0 * rate.lambda() * tol + 1e-12,
        query_count,
    })
}

/// Rate first, then the measure, in one session.
pub fn elicit<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    space: &StateSpace,
    x: &Outcome,
    y: &Outcome,
    tol: f64,
) -> Result<ElicitationReport> {
    let est = elicit_lambda(oracle, space, x, y, tol)?;
    let mut report = elicit_measure(oracle, est.rate, space, x, y, tol)?;
    report.query_count += est.queries;
    Ok(report)
}

/// A claimed indifference and its value gap.
#[derive(Debug, Clone, PartialEq)]
pub struct IndifferenceCheck {
    pub first: &'static str,
    pub second: &'static str,
    pub gap: f64,
}

/// Every quantity of the three-event calibration walkthrough.
#[derive(Debug, Clone, PartialEq)]
pub struct Section2Trace {
    pub rate: DiscountRate,
    pub mu_e: f64,
    pub mu_f: f64,
    /// Half-life, `e^{−λt} = 1/2`.
    pub t: f64,
    pub t_e: f64,
    pub t_f: f64,
    pub t_ef: f64,
    /// `1 − e^{−λt'_F} = e^{−λt}(1 − e^{−λt_F})`.
    pub t_f_prime: f64,
    pub space: StateSpace,
    /// The seven acts with their values.
    pub acts: Vec<(&'static str, GridAct, f64)>,
    pub checks: Vec<IndifferenceCheck>,
    /// `e^{−λt} − e^{−λ(t+t_{E∪F})}`.
    pub identity_lhs: f64,
    /// `1 − e^{−λt'_F} + e^{−λt} − e^{−λ(t+t_E)}`.
    pub identity_rhs: f64,
    pub identity_residual: f64,
    pub mu_hat_e: f64,
    pub mu_hat_f: f64,
    pub mu_hat_ef: f64,
    pub additivity_residual: f64,
}

impl Section2Trace {
    pub fn max_gap(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.gap))
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_gap() <= tol && self.identity_residual <= tol && self.additivity_residual.abs() <= tol
    }

    pub fn act(&self, name: &str) -> Option<&GridAct> {
        self.acts.iter().find(|(n, _, _)| *n == name).map(|(_, a, _)| a)
    }
}

/// Time at which the prefix mass reaches `p`, `∞` when `p = 1`.
fn horizon(rate: DiscountRate, p: f64) -> Result<f64> {
    if p >= 1.0 {
        Ok(f64::INFINITY)
    } else {
        rate.quantile(p)
    }
}

/// Builds the seven matrix acts on states `E`, `F`, `R` and checks every
/// indifference of the three chains and the final additivity identity.
pub fn section2_demo(rate: DiscountRate, mu_e: f64, mu_f: f64) -> Result<Section2Trace> {
    if !(mu_e >= 0.0 && mu_f >= 0.0 && mu_e + mu_f <= 1.0) {
        return Err(Error::validation(format!(
            "need μE, μF ≥ 0 and μE + μF ≤ 1, got μE = {mu_e}, μF = {mu_f}"
        )));
    }
    let space = StateSpace::new(["E", "F", "R"])?;
    let mu_r = (1.0 - mu_e - mu_f).max(0.0);
    let beliefs = Beliefs::on_space(&space, &[mu_e, mu_f, mu_r])?;
    let util = UtilityModel::new([("10", 10.0), ("0", 0.0)])?;
    let model = DseuModel::new(rate, util, beliefs);

    let t = rate.half_life();
    let t_e = horizon(rate, mu_e)?;
    let t_f = horizon(rate, mu_f)?;
    let t_ef = horizon(rate, mu_e + mu_f)?;
    let t_fp = rate.quantile(mu_f / 2.0)?;

    let ten = Outcome::new("10");
    let zero = Outcome::new("0");
    let steps = |first: &Outcome, switches: &[(f64, &Outcome)]| -> Result<StepProfile> {
        let owned: Vec<(f64, Outcome)> = switches.iter().map(|(s, x)| (*s, (*x).clone())).collect();
        StepProfile::from_steps(first.clone(), &owned)
    };
    let rows = |e: StepProfile, f: StepProfile, r: StepProfile| GridAct::new(space.clone(), alloc::vec![e, f, r]);
    let nothing = StepProfile::constant(zero.clone());

    let early = steps(&ten, &[(t, &zero)])?;
    let late = steps(&zero, &[(t, &ten)])?;
    let a1 = rows(early.clone(), early.clone(), nothing.clone())?;
    let a2 = rows(late.clone(), late.clone(), nothing.clone())?;
    let window_ef = steps(&zero, &[(t, &ten), (t + t_ef, &zero)])?;
    let a3 = GridAct::deterministic(space.clone(), window_ef);
    let b2 = rows(early.clone(), late, nothing)?;
    let window_f = steps(&zero, &[(t, &ten), (t + t_f, &zero)])?;
    let b3 = rows(steps(&ten, &[(t, &ten), (t + t_f, &zero)])?, window_f.clone(), window_f)?;
    let head_f = steps(&ten, &[(t_fp, &zero)])?;
    let c2 = rows(steps(&ten, &[(t_fp, &zero), (t, &ten)])?, head_f.clone(), head_f)?;
    let c3 = GridAct::deterministic(space.clone(), steps(&ten, &[(t_fp, &zero), (t, &ten), (t + t_e, &zero)])?);

    let named = [("A1", a1), ("A2", a2), ("A3", a3), ("B2", b2), ("B3", b3), ("C2", c2), ("C3", c3)];
    let mut acts = Vec::with_capacity(named.len());
    for (name, act) in named {
        let v = model.act_value(&act)?;
        acts.push((name, act, v));
    }
    let value = |name: &str| acts.iter().find(|(n, _, _)| *n == name).map(|(_, _, v)| *v).expect("named act");
    let chain = [("A1", "A2"), ("A2", "A3"), ("A1", "B2"), ("B2", "B3"), ("B3", "C2"), ("C2", "C3")];
    let checks = chain
        .iter()
        .map(|(a, b)| IndifferenceCheck { first: a, second: b, gap: (value(a) - value(b)).abs() })
        .collect();

    let d = |s: f64| rate.discount(s);
    let identity_lhs = d(t) - d(t + t_ef);
    let identity_rhs = rate.cdf(t_fp)? + d(t) - d(t + t_e);
    let mu_hat = |s: f64| if s.is_infinite() { Ok(1.0) } else { rate.cdf(s) };
    let mu_hat_e = mu_hat(t_e)?;
    let mu_hat_f = mu_hat(t_f)?;
    let mu_hat_ef = mu_hat(t_ef)?;
    Ok(Section2Trace {
        rate,
        mu_e,
        mu_f,
        t,
        t_e,
        t_f,
        t_ef,
        t_f_prime: t_fp,
        space,
        acts,
        checks,
        identity_lhs,
        identity_rhs,
        identity_residual: (identity_lhs - identity_rhs).abs(),
        mu_hat_e,
        mu_hat_f,
        mu_hat_ef,
        additivity_residual: mu_hat_ef - mu_hat_e - mu_hat_f,
    })
}

/// Two complementary events judged equally likely.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementaryTrace {
    pub t: f64,
    /// `|V(x_E y) − V(x_{Eᶜ} y)|`.
    pub bet_gap: f64,
    /// `|V(x_E y) − V(x_{[0,t)} y)|`.
    pub equivalent_gap: f64,
    pub mu_hat: f64,
}

/// Bets on `E` and on `Eᶜ` are indifferent, so each is worth the half-life
/// prefix and `μ̂(E) = 1 − e^{−λt} = 1 − 1/2`.
pub fn complementary_demo(rate: DiscountRate, tol: f64) -> Result<ComplementaryTrace> {
    let space = StateSpace::new(["E", "Ec"])?;
    let util = UtilityModel::new([("10", 10.0), ("0", 0.0)])?;
    let model = DseuModel::new(rate, util, Beliefs::uniform(&space));
    let x = Outcome::new("10");
    let y = Outcome::new("0");
    let on_e = model.act_value(&GridAct::bet(space.clone(), StateSet::singleton(0), x.clone(), y.clone()))?;
    let on_ec = model.act_value(&GridAct::bet(space.clone(), StateSet::singleton(1), x.clone(), y.clone()))?;
    let t = rate.half_life();
    let prefix = model.act_value(&GridAct::deterministic(space, StepProfile::prefix(x, t, y)?))?;
    let bet_gap = (on_e - on_ec).abs();
    let equivalent_gap = (on_e - prefix).abs();
    if bet_gap > tol || equivalent_gap > tol {
        return Err(Error::protocol(format!(
            "complementary bets are not indifferent to the half-life prefix (gaps {bet_gap}, {equivalent_gap})"
        )));
    }
    Ok(ComplementaryTrace { t, bet_gap, equivalent_gap, mu_hat: 1.0 - 0.5 })
}

/// The two-colour urn run against an ambiguity-averse agent.
#[derive(Debug, Clone)]
pub struct EllsbergTrace {
    pub epsilon: f64,
    pub red_bet: f64,
    pub black_bet: f64,
    /// `x` until the half-life, then `y`.
    pub unambiguous_bet: f64,
    pub red_vs_unambiguous: Preference,
    pub black_vs_unambiguous: Preference,
    pub report: ElicitationReport,
    /// The same session against the additive capacity.
    pub control: ElicitationReport,
}

/// Runs the full elicitation against an `ε`-contaminated uniform capacity
/// on two states and against its additive counterpart.
pub fn ellsberg_demo(rate: DiscountRate, epsilon: f64, tol: f64) -> Result<EllsbergTrace> {
    let space = StateSpace::new(["R", "B"])?;
    let util = UtilityModel::new([("x", 1.0), ("y", 0.0)])?;
    let uniform = Beliefs::uniform(&space);
    let cap = Capacity::contaminated(space.clone(), &uniform, epsilon)?;
    let oracle: ThresholdOracle<ChoquetFunctional> = choquet_oracle(rate, util.clone(), cap, 0.0)?;
    let additive = choquet_oracle(rate, util, Capacity::additive(space.clone(), &uniform)?, 0.0)?;
    let x = Outcome::new("x");
    let y = Outcome::new("y");
    let red = GridAct::bet(space.clone(), StateSet::singleton(0), x.clone(), y.clone());
    let black = GridAct::bet(space.clone(), StateSet::singleton(1), x.clone(), y.clone());
    let half = GridAct::deterministic(space.clone(), StepProfile::prefix(x.clone(), rate.half_life(), y.clone())?);
    let f = oracle.functional();
    Ok(EllsbergTrace {
        epsilon,
        red_bet: f.value(&red)?,
        black_bet: f.value(&black)?,
        unambiguous_bet: f.value(&half)?,
        red_vs_unambiguous: oracle.compare(&red, &half)?,
        black_vs_unambiguous: oracle.compare(&black, &half)?,
        report: elicit(&oracle, &space, &x, &y, tol)?,
        control: elicit(&additive, &space, &x, &y, tol)?,
    })
}

/// `{a,b}` style label of a state subset.
pub fn subset_label(space: &StateSpace, set: StateSet) -> String {
    let names: Vec<&str> = set.iter().map(|i| space.state(i).as_str()).collect();
    format!("{{{}}}", names.join(","))
}

//! Finite checks of the preference axioms against a black-box oracle.
//!
//! Each check samples instances from a seeded generator, queries the oracle
//! and records every inconsistent response pattern together with the queries
//! that exhibit it, so a violation can be replayed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acts::{splice_event, splice_time, Event, GridAct, Outcome, StateSet, StateSpace, StepProfile};
use crate::error::{Error, Result};
use crate::evaluate::DseuModel;
use crate::exp_measure::{DiscountRate, TimeInterval, TimeSet};
use crate::oracles::{Preference, PreferenceOracle, ValueFunctional};
use crate::sampling::{pick, random_act, random_profile, random_time_set};

/// Largest identity residual accepted by the decomposition check.
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-10;

const MAX_PIECES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Stationarity,
    Dominance,
    TMonotonicity,
    TSeparability,
    MonotoneContinuity,
    TMeasurability,
    Decomposition,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Stationarity => "stationarity",
            Axiom::Dominance => "dominance",
            Axiom::TMonotonicity => "t-monotonicity",
            Axiom::TSeparability => "t-separability",
            Axiom::MonotoneContinuity => "monotone-continuity",
            Axiom::TMeasurability => "t-measurability",
            Axiom::Decomposition => "decomposition",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One oracle comparison and its answer.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub f: GridAct,
    pub g: GridAct,
    pub response: Preference,
}

/// An inconsistent response pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub description: String,
    /// The comparisons exhibiting the violation, in the order asked.
    pub queries: Vec<Query>,
    /// Identity residual, for functional checks.
    pub residual: Option<f64>,
}

impl Violation {
    /// Whether re-asking every query gives the logged answers.
    pub fn replay<O: PreferenceOracle + ?Sized>(&self, oracle: &O) -> Result<bool> {
        for q in &self.queries {
            if oracle.compare(&q.f, &q.g)? != q.response {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub axiom: Axiom,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl CheckReport {
    fn from_violations(axiom: Axiom, checked: usize, violations: Vec<Violation>) -> Self {
        let verdict = if violations.is_empty() { Verdict::Pass } else { Verdict::Fail };
        CheckReport { axiom, checked, violations, verdict, note: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub checks: Vec<CheckReport>,
}

impl AuditReport {
    pub fn get(&self, axiom: Axiom) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }
}

/// Records comparisons as they are made.
struct Recorder<'o, O: ?Sized> {
    oracle: &'o O,
    log: Vec<Query>,
}

impl<'o, O: PreferenceOracle + ?Sized> Recorder<'o, O> {
    fn new(oracle: &'o O) -> Self {
        Recorder { oracle, log: Vec::new() }
    }

    fn ask(&mut self, f: &GridAct, g: &GridAct) -> Result<Preference> {
        let response = self.oracle.compare(f, g)?;
        self.log.push(Query { f: f.clone(), g: g.clone(), response });
        Ok(response)
    }

    fn violation(&mut self, description: String) -> Violation {
        Violation { description, queries: core::mem::take(&mut self.log), residual: None }
    }
}

/// What the audit may draw random acts from.
#[derive(Debug, Clone)]
pub struct AuditContext {
    pub space: StateSpace,
    /// Outcome alphabet, worst first by the oracle's ranking.
    pub outcomes: Vec<Outcome>,
    /// `rank[i]` counts the outcomes strictly below `outcomes[i]`.
    rank: Vec<usize>,
    /// States on which a bet is strictly better than the worst outcome.
    pub non_null: StateSet,
    /// Rate used to place breakpoints.
    pub sampling_rate: DiscountRate,
}

impl AuditContext {
    /// Ranks the alphabet and finds non-null states by querying the oracle.
    pub fn probe<O: PreferenceOracle + ?Sized>(
        oracle: &O,
        space: StateSpace,
        outcomes: &[Outcome],
        sampling_rate: DiscountRate,
    ) -> Result<Self> {
        if outcomes.len() < 2 {
            return Err(Error::validation("an audit needs at least two outcomes"));
        }
        let constant = |x: &Outcome| GridAct::constant(space.clone(), x.clone());
        let mut ranked: Vec<(usize, Outcome)> = Vec::with_capacity(outcomes.len());
        for x in outcomes {
            let mut below = 0;
            for y in outcomes {
                if oracle.compare(&constant(x), &constant(y))? == Preference::StrictlyFirst {
                    below += 1;
                }
            }
            ranked.push((below, x.clone()));
        }
        ranked.sort();
        let (rank, outcomes): (Vec<usize>, Vec<Outcome>) = ranked.into_iter().unzip();
        if rank[rank.len() - 1] == 0 {
            return Err(Error::validation("the oracle is indifferent between all outcomes"));
        }
        let worst = &outcomes[0];
        let best = &outcomes[outcomes.len() - 1];
        let mut non_null = StateSet::empty();
        for i in 0..space.len() {
            let bet = GridAct::bet(space.clone(), StateSet::singleton(i), best.clone(), worst.clone());
            if oracle.compare(&bet, &constant(worst))? == Preference::StrictlyFirst {
                non_null = non_null.with(i);
            }
        }
        Ok(AuditContext { space, outcomes, rank, non_null, sampling_rate })
    }

    fn rank_of(&self, x: &Outcome) -> usize {
        self.outcomes.iter().position(|o| o == x).map(|i| self.rank[i]).unwrap_or(0)
    }

    pub fn worst(&self) -> &Outcome {
        &self.outcomes[0]
    }

    pub fn best(&self) -> &Outcome {
        &self.outcomes[self.outcomes.len() - 1]
    }

    fn act<R: Rng>(&self, rng: &mut R) -> GridAct {
        random_act(rng, &self.space, self.sampling_rate, &self.outcomes, MAX_PIECES)
    }

    fn profile<R: Rng>(&self, rng: &mut R) -> StepProfile {
        random_profile(rng, self.sampling_rate, &self.outcomes, MAX_PIECES)
    }

    fn lift(&self, p: &StepProfile) -> GridAct {
        GridAct::deterministic(self.space.clone(), p.clone())
    }

    /// Replaces one random piece by a weakly better outcome, strictly better
    /// when `strict` and possible.
    fn improve<R: Rng>(&self, rng: &mut R, p: &StepProfile, strict: bool) -> StepProfile {
        let k = rng.gen_range(0..p.len());
        let mut pieces = p.pieces().to_vec();
        let current = self.rank_of(&pieces[k].1);
        let better: Vec<Outcome> = self
            .outcomes
            .iter()
            .filter(|o| if strict { self.rank_of(o) > current } else { self.rank_of(o) >= current })
            .cloned()
            .collect();
        if let Some(x) = (!better.is_empty()).then(|| pick(rng, &better).clone()) {
            pieces[k].1 = x;
        }
        StepProfile::normalize(pieces).expect("pieces still tile")
    }

    fn strictly_better(&self, x: &Outcome, y: &Outcome) -> bool {
        self.rank_of(x) > self.rank_of(y)
    }

    fn weakly_better(&self, x: &Outcome, y: &Outcome) -> bool {
        self.rank_of(x) >= self.rank_of(y)
    }

    fn strict_pair<R: Rng>(&self, rng: &mut R) -> (Outcome, Outcome) {
        loop {
            let a = pick(rng, &self.outcomes).clone();
            let b = pick(rng, &self.outcomes).clone();
            if self.strictly_better(&a, &b) {
                return (a, b);
            }
        }
    }
}

/// Audit settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConfig {
    pub samples: usize,
    pub seed: u64,
    pub horizon_max: u32,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { samples: 500, seed: 1, horizon_max: 64 }
    }
}

fn rng_for(seed: u64, axiom: Axiom) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((axiom as u64 + 1) << 56))
}

/// Delaying both acts behind a common prefix must not change the answer.
pub fn stationarity_instance<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    h: &GridAct,
    t: f64,
    f: &GridAct,
    g: &GridAct,
) -> Result<Option<Violation>> {
    let mut rec = Recorder::new(oracle);
    let before = rec.ask(f, g)?;
    let after = rec.ask(&splice_time(h, t, f)?, &splice_time(h, t, g)?)?;
    Ok((before != after).then(|| rec.violation(format!("f {before} g but h_t f {after} h_t g at t = {t}"))))
}

pub fn check_stationarity<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    ctx: &AuditContext,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_for(seed, Axiom::Stationarity);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let (f, g, h) = (ctx.act(&mut rng), ctx.act(&mut rng), ctx.act(&mut rng));
        let t = if rng.gen_bool(0.1) { 0.0 } else { ctx.sampling_rate.quantile(rng.gen_range(0.0..0.99))? };
        violations.extend(stationarity_instance(oracle, &h, t, &f, &g)?);
    }
    Ok(CheckReport::from_violations(Axiom::Stationarity, samples, violations))
}

/// State-wise weak improvement must be weakly preferred, and strictly when
/// some non-null state improves strictly. Pairs whose row premise the oracle
/// does not confirm are skipped and reported as `Ok(None)`.
pub fn dominance_instance<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    ctx: &AuditContext,
    f: &GridAct,
    g: &GridAct,
) -> Result<Option<Violation>> {
    let mut rec = Recorder::new(oracle);
    let mut strict_non_null = false;
    for (s, (fp, gp)) in f.profiles().iter().zip(g.profiles()).enumerate() {
        match rec.ask(&ctx.lift(fp), &ctx.lift(gp))? {
            Preference::StrictlySecond => return Ok(None),
            Preference::StrictlyFirst if ctx.non_null.contains(s) => strict_non_null = true,
            _ => {}
        }
    }
    let r = rec.ask(f, g)?;
    if r == Preference::StrictlySecond {
        return Ok(Some(rec.violation("rows weakly dominate but the act is strictly worse".into())));
    }
    if strict_non_null && r != Preference::StrictlyFirst {
        return Ok(Some(rec.violation(format!(
            "rows dominate strictly on a non-null state but f {r} g"
        ))));
    }
    Ok(None)
}

pub fn check_dominance<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    ctx: &AuditContext,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_for(seed, Axiom::Dominance);
    let mut violations = Vec::new();
    for k in 0..samples {
        let g = ctx.act(&mut rng);
        let f = if k % 10 == 0 {
            g.clone()
        } else {
            let strict = rng.gen_bool(0.7);
            let mut chosen = StateSet::empty();
            while chosen.is_empty() {
                for s in 0..ctx.space.len() {
                    if rng.gen_bool(0.5) {
                        chosen = chosen.with(s);
                    }
                }
            }
            let profiles: Vec<StepProfile> = g
                .profiles()
                .iter()
                .enumerate()
                .map(|(s, p)| if chosen.contains(s) { ctx.improve(&mut rng, p, strict) } else { p.clone() })
                .collect();
            GridAct::new(ctx.space.clone(), profiles)?
        };
        violations.extend(dominance_instance(oracle, ctx, &f, &g)?);
    }
    Ok(CheckReport::from_violations(Axiom::Dominance, samples, violations))
}

/// Pointwise weakly better profiles must be weakly preferred, and strictly
/// when they are strictly better on a set of positive measure.
pub fn t_monotonicity_instance<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    ctx: &AuditContext,
    x: &StepProfile,
    y: &StepProfile,
) -> Result<Option<Violation>> {
    let mut cuts: Vec<f64> = x.breakpoints().chain(y.breakpoints()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut strict = false;
    for lo in core::iter::once(0.0).chain(cuts) {
        let (a, b) = (x.outcome_at(lo), y.outcome_at(lo));
        if !ctx.weakly_better(a, b) {
            return Ok(None);
        }
        strict |= ctx.strictly_better(a, b);
    }
    let mut rec = Recorder::new(oracle);
    let r = rec.ask(&ctx.lift(x), &ctx.lift(y))?;
    if r == Preference::StrictlySecond || (strict && r != Preference::StrictlyFirst) {
        let kind = if strict { "strictly" } else { "weakly" };
        return Ok(Some(rec.violation(format!("pointwise {kind} better profile but x {r} y"))));
    }
    Ok(None)
}

pub fn check_t_monotonicity<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    ctx: &AuditContext,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_for(seed, Axiom::TMonotonicity);
    let mut violations = Vec::new();
    for k in 0..samples {
        let y = ctx.profile(&mut rng);
        let x = if k % 10 == 0 {
            y.clone()
        } else {
            let mut x = ctx.improve(&mut rng, &y, true);
            for _ in 0..rng.gen_range(0..3) {
                x = ctx.improve(&mut rng, &x, false);
            }
            x
        };
        violations.extend(t_monotonicity_instance(oracle, ctx, &x, &y)?);
    }
    Ok(CheckReport::from_violations(Axiom::TMonotonicity, samples, violations))
}

/// `better` on `e`, `worse` on `f`, `background` elsewhere.
fn swap_profile(better: &Outcome, e: &TimeSet, worse: &Outcome, f: &TimeSet, background: &StepProfile) -> StepProfile {
    let with_e = StepProfile::constant(better.clone()).paste(e, background);
    StepProfile::constant(worse.clone()).paste(f, &with_e)
}

/// One instance of the separability comparison for disjoint `e`, `f`.
#[derive(Debug, Clone)]
pub struct SeparabilityInstance {
    pub e: TimeSet,
    pub f: TimeSet,
    pub first_pair: (Outcome, Outcome),
    pub first_background: StepProfile,
    pub second_pair: (Outcome, Outcome),
    pub second_background: StepProfile,
}

/// Moving the better outcome from `f` to `e` must be judged the same way for
/// both stake pairs and backgrounds.
pub fn t_separability_instance<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    ctx: &AuditContext,
    inst: &SeparabilityInstance,
) -> Result<Option<Violation>> {
    if !inst.e.is_disjoint(&inst.f) {
        return Err(Error::validation("separability needs disjoint time sets"));
    }
    let mut rec = Recorder::new(oracle);
    let mut answer = |(hi, lo): &(Outcome, Outcome), bg: &StepProfile| {
        let on_e = swap_profile(hi, &inst.e, lo, &inst.f, bg);
        let on_f = swap_profile(lo, &inst.e, hi, &inst.f, bg);
        rec.ask(&ctx.lift(&on_e), &ctx.lift(&on_f))
    };
    let r1 = answer(&inst.first_pair, &inst.first_background)?;
    let r2 = answer(&inst.second_pair, &inst.second_background)?;
    Ok((r1 != r2).then(|| rec.violation(format!("better outcome on E vs F: {r1} for one stake pair, {r2} for another"))))
}

pub fn check_t_separability<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    ctx: &AuditContext,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_for(seed, Axiom::TSeparability);
    let mut violations = Vec::new();
    let mut checked = 0;
    while checked < samples {
        let e = random_time_set(&mut rng, ctx.sampling_rate, 3);
        let f = random_time_set(&mut rng, ctx.sampling_rate, 3).difference(&e);
        if e.is_empty() && f.is_empty() {
            continue;
        }
        checked += 1;
        let inst = SeparabilityInstance {
            e,
            f,
            first_pair: ctx.strict_pair(&mut rng),
            first_background: ctx.profile(&mut rng),
            second_pair: ctx.strict_pair(&mut rng),
            second_background: ctx.profile(&mut rng),
        };
        violations.extend(t_separability_instance(oracle, ctx, &inst)?);
    }
    Ok(CheckReport::from_violations(Axiom::TSeparability, samples, violations))
}

/// Searches `n ≤ horizon_max` with `x` on `S×[n,∞)` keeping both strict
/// preferences `x_{E_n} f ≻ g` and `f ≻ x_{E_n} g`.
///
/// Finding one passes; finding none is inconclusive.
pub fn check_monotone_continuity<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    f: &GridAct,
    g: &GridAct,
    x: &Outcome,
    horizon_max: u32,
) -> Result<CheckReport> {
    if oracle.compare(f, g)? != Preference::StrictlyFirst {
        return Err(Error::validation("monotone continuity needs f strictly preferred to g"));
    }
    let cx = GridAct::constant(f.space().clone(), x.clone());
    let n_states = f.space().len();
    for n in 1..=horizon_max {
        let tail = Event::times(n_states, TimeSet::interval(TimeInterval::from(f64::from(n))?));
        let xf = splice_event(&cx, &tail, f)?;
        let xg = splice_event(&cx, &tail, g)?;
        if oracle.compare(&xf, g)? == Preference::StrictlyFirst && oracle.compare(f, &xg)? == Preference::StrictlyFirst {
            return Ok(CheckReport {
                axiom: Axiom::MonotoneContinuity,
                checked: n as usize,
                violations: Vec::new(),
                verdict: Verdict::Pass,
                note: Some(format!("tail index n = {n}")),
            });
        }
    }
    Ok(CheckReport {
        axiom: Axiom::MonotoneContinuity,
        checked: horizon_max as usize,
        violations: Vec::new(),
        verdict: Verdict::Inconclusive,
        note: Some(format!("no tail index n ≤ {horizon_max} keeps both strict preferences")),
    })
}

/// Tail index found by a passing continuity report.
pub fn continuity_index(report: &CheckReport) -> Option<u32> {
    if report.verdict != Verdict::Pass {
        return None;
    }
    report.note.as_deref()?.strip_prefix("tail index n = ")?.parse().ok()
}

/// The identity `W(h_t f) = ∫∫_{[0,t)} u[h] + e^{−λt} W(f)` for a functional
/// `W` that claims the form `(λ, u, μ)` of `claimed`.
pub fn decomposition_residual<V: ValueFunctional + ?Sized>(
    functional: &V,
    claimed: &DseuModel,
    h: &GridAct,
    t: f64,
    f: &GridAct,
) -> Result<f64> {
    let lhs = functional.value(&splice_time(h, t, f)?)?;
    let rhs = claimed.prefix_value(h, t)? + claimed.rate.discount(t) * functional.value(f)?;
    Ok((lhs - rhs).abs())
}

pub fn check_decomposition<V: ValueFunctional + ?Sized>(
    functional: &V,
    claimed: &DseuModel,
    ctx: &AuditContext,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_for(seed, Axiom::Decomposition);
    let mut worst: Option<(f64, GridAct, f64, GridAct)> = None;
    let mut failures = 0;
    for _ in 0..samples {
        let (h, f) = (ctx.act(&mut rng), ctx.act(&mut rng));
        let t = if rng.gen_bool(0.1) { 0.0 } else { claimed.rate.quantile(rng.gen_range(0.0..0.99))? };
        let r = decomposition_residual(functional, claimed, &h, t, &f)?;
        if r > DECOMPOSITION_TOLERANCE {
            failures += 1;
            if worst.as_ref().is_none_or(|w| r > w.0) {
                worst = Some((r, h, t, f));
            }
        }
    }
    let violations = worst
        .map(|(r, h, t, f)| {
            alloc::vec![Violation {
                description: format!("{failures} of {samples} samples exceed {DECOMPOSITION_TOLERANCE:e}; worst residual {r} at t = {t}"),
                queries: alloc::vec![Query { f: h, g: f, response: Preference::Indifferent }],
                residual: Some(r),
            }]
        })
        .unwrap_or_default();
    Ok(CheckReport::from_violations(Axiom::Decomposition, samples, violations))
}

/// Re-evaluates a decomposition violation; the logged query holds `(h, f)`.
pub fn replay_decomposition<V: ValueFunctional + ?Sized>(
    functional: &V,
    claimed: &DseuModel,
    v: &Violation,
) -> Result<bool> {
    let (Some(q), Some(r)) = (v.queries.first(), v.residual) else {
        return Ok(false);
    };
    let t = v
        .description
        .rsplit("t = ")
        .next()
        .and_then(|s| s.parse::<f64>().ok())
        .ok_or_else(|| Error::validation("violation does not record t"))?;
    Ok(decomposition_residual(functional, claimed, &q.f, t, &q.g)? == r)
}

fn t_measurability() -> CheckReport {
    CheckReport {
        axiom: Axiom::TMeasurability,
        checked: 0,
        violations: Vec::new(),
        verdict: Verdict::Pass,
        note: Some("holds for every step profile over a finite alphabet".into()),
    }
}

/// Default strict pair for the continuity proxy: the best outcome on prefixes
/// of mass 0.6 and 0.3, then the worst; `x` is the worst outcome.
pub fn default_continuity_pair(ctx: &AuditContext) -> Result<(GridAct, GridAct, Outcome)> {
    let rate = ctx.sampling_rate;
    let prefix = |p: f64| -> Result<GridAct> {
        Ok(ctx.lift(&StepProfile::prefix(ctx.best().clone(), rate.quantile(p)?, ctx.worst().clone())?))
    };
    Ok((prefix(0.6)?, prefix(0.3)?, ctx.worst().clone()))
}

/// Runs every check. The decomposition check needs a functional and the
/// model it claims; it is skipped when `decomposition` is `None`.
pub fn run_audit<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    ctx: &AuditContext,
    config: &AuditConfig,
    decomposition: Option<(&dyn ValueFunctional, &DseuModel)>,
) -> Result<AuditReport> {
    let (f, g, x) = default_continuity_pair(ctx)?;
    let mut checks = alloc::vec![
        check_stationarity(oracle, ctx, config.samples, config.seed)?,
        check_dominance(oracle, ctx, config.samples, config.seed)?,
        check_t_monotonicity(oracle, ctx, config.samples, config.seed)?,
        check_t_separability(oracle, ctx, config.samples, config.seed)?,
    ];
    checks.push(match oracle.compare(&f, &g)? {
        Preference::StrictlyFirst => check_monotone_continuity(oracle, &f, &g, &x, config.horizon_max)?,
        r => CheckReport {
            axiom: Axiom::MonotoneContinuity,
            checked: 0,
            violations: Vec::new(),
            verdict: Verdict::Inconclusive,
            note: Some(format!("default pair is not strictly ordered ({r})")),
        },
    });
    checks.push(t_measurability());
    if let Some((functional, claimed)) = decomposition {
        checks.push(check_decomposition(functional, claimed, ctx, config.samples, config.seed)?);
    }
    Ok(AuditReport { checks })
}

/// Count of violations per axiom.
pub fn violation_counts(report: &AuditReport) -> BTreeMap<Axiom, usize> {
    report.checks.iter().map(|c| (c.axiom, c.violations.len())).collect()
}

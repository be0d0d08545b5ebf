//! Time equivalents: the prefix length `t` at which `x` on `[0, t)` followed
//! by `y` is worth as much as a given act.

use alloc::format;

use crate::acts::{GridAct, Outcome, StepProfile};
use crate::error::{Error, Result};
use crate::evaluate::DseuModel;
use crate::exp_measure::DiscountRate;
use crate::oracles::{Preference, PreferenceOracle};

/// Default bisection tolerance, in time units.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default query budget for one bisection.
pub const DEFAULT_MAX_QUERIES: usize = 64;

/// Default search ceiling when the discount rate is unknown.
pub const DEFAULT_CEILING: f64 = 1024.0;

/// Prefix mass beyond which a time equivalent is reported as the whole horizon.
pub const HORIZON_MASS: f64 = 1.0 - 1e-9;

/// Where the equivalent prefix ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquivalentTime {
    Finite(f64),
    /// `x` forever.
    WholeHorizon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeEquivalent {
    pub time: EquivalentTime,
    /// Width of the final bracket; 0 for closed-form answers and for exact
    /// indifference reported by an oracle.
    pub bracket_width: f64,
    /// Oracle comparisons used.
    pub queries: usize,
}

impl TimeEquivalent {
    fn closed(t: EquivalentTime) -> Self {
        TimeEquivalent { time: t, bracket_width: 0.0, queries: 0 }
    }

    pub fn finite(&self) -> Option<f64> {
        match self.time {
            EquivalentTime::Finite(t) => Some(t),
            EquivalentTime::WholeHorizon => None,
        }
    }

    pub fn is_whole_horizon(&self) -> bool {
        self.time == EquivalentTime::WholeHorizon
    }

    /// `ε_λ[0, t)`, with the whole horizon mapped to 1.
    pub fn mass(&self, rate: DiscountRate) -> f64 {
        match self.time {
            EquivalentTime::Finite(t) => rate.cdf(t).expect("time equivalents are non-negative"),
            EquivalentTime::WholeHorizon => 1.0,
        }
    }

    /// The equivalent profile `x_{[0,t)} y`.
    pub fn profile(&self, x: &Outcome, y: &Outcome) -> StepProfile {
        match self.time {
            EquivalentTime::Finite(t) => StepProfile::prefix(x.clone(), t, y.clone()).expect("t ≥ 0"),
            EquivalentTime::WholeHorizon => StepProfile::constant(x.clone()),
        }
    }
}

/// Closed-form time equivalent of the value `v`.
pub fn time_equivalent_value(model: &DseuModel, v: f64, x: &Outcome, y: &Outcome) -> Result<TimeEquivalent> {
    let ux = model.util.get(x)?;
    let uy = model.util.get(y)?;
    if ux <= uy {
        return Err(Error::domain(format!("u({x}) = {ux} must exceed u({y}) = {uy}")));
    }
    if !(v >= uy && v <= ux) {
        return Err(Error::range(format!("value must lie in [{uy}, {ux}]"), v));
    }
    let p = (v - uy) / (ux - uy);
    if p >= 1.0 {
        return Ok(TimeEquivalent::closed(EquivalentTime::WholeHorizon));
    }
    Ok(TimeEquivalent::closed(EquivalentTime::Finite(model.rate.quantile(p)?)))
}

/// Closed-form time equivalent of an act.
pub fn time_equivalent_act(model: &DseuModel, f: &GridAct, x: &Outcome, y: &Outcome) -> Result<TimeEquivalent> {
    let v = model.act_value(f)?;
    let ux = model.util.get(x)?;
    let uy = model.util.get(y)?;
    if ux > uy && !(uy..=ux).contains(&v) {
        return Err(Error::range(format!("act value is outside [{uy}, {ux}]"), v));
    }
    time_equivalent_value(model, v, x, y)
}

/// Search settings for [`time_equivalent_bisect_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectOptions {
    pub tol: f64,
    pub max_queries: usize,
    /// Largest prefix length tried before declaring the whole horizon.
    pub ceiling: f64,
}

impl Default for BisectOptions {
    fn default() -> Self {
        BisectOptions { tol: DEFAULT_TOL, max_queries: DEFAULT_MAX_QUERIES, ceiling: DEFAULT_CEILING }
    }
}

impl BisectOptions {
    pub fn with_tol(tol: f64) -> Self {
        BisectOptions { tol, ..Self::default() }
    }

    /// Ceiling at the time whose prefix mass is [`HORIZON_MASS`].
    #[must_use]
    pub fn for_rate(self, rate: DiscountRate) -> Self {
        BisectOptions { ceiling: rate.quantile(HORIZON_MASS).expect("mass < 1"), ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::domain(format!("tolerance must be finite and > 0, got {}", self.tol)));
        }
        if !(self.ceiling > 0.0) || !self.ceiling.is_finite() {
            return Err(Error::domain(format!("search ceiling must be finite and > 0, got {}", self.ceiling)));
        }
        Ok(())
    }
}

/// Result of a monotone search over prefix lengths.
pub(crate) enum Search {
    Found { t: f64, width: f64 },
    Ceiling,
}

/// Finds where `probe` switches from `StrictlySecond` (too short) to
/// `StrictlyFirst` (too long), given that it answers `StrictlySecond` at 0.
pub(crate) fn monotone_search(
    opts: &BisectOptions,
    queries: &mut usize,
    mut probe: impl FnMut(f64) -> Result<Preference>,
) -> Result<Search> {
    opts.validate()?;
    let mut ask = |t: f64, queries: &mut usize| -> Result<Preference> {
        if *queries >= opts.max_queries {
            return Err(Error::protocol(format!("query budget of {} exhausted", opts.max_queries)));
        }
        *queries += 1;
        probe(t)
    };
    let mut lo = 0.0;
    let mut hi = opts.ceiling.min(1.0);
    loop {
        match ask(hi, queries)? {
            Preference::Indifferent => return Ok(Search::Found { t: hi, width: 0.0 }),
            Preference::StrictlyFirst => break,
            Preference::StrictlySecond if hi >= opts.ceiling => return Ok(Search::Ceiling),
            Preference::StrictlySecond => {
                lo = hi;
                hi = (2.0 * hi).min(opts.ceiling);
            }
        }
    }
    while hi - lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match ask(mid, queries)? {
            Preference::Indifferent => return Ok(Search::Found { t: mid, width: 0.0 }),
            Preference::StrictlyFirst => hi = mid,
            Preference::StrictlySecond => lo = mid,
        }
    }
    Ok(Search::Found { t: 0.5 * (lo + hi), width: hi - lo })
}

/// Time equivalent of `f` found by querying `oracle`, with default options.
pub fn time_equivalent_bisect<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    f: &GridAct,
    x: &Outcome,
    y: &Outcome,
    tol: f64,
) -> Result<TimeEquivalent> {
    time_equivalent_bisect_with(oracle, f, x, y, &BisectOptions::with_tol(tol))
}

/// Time equivalent of `f` found by querying `oracle`.
///
/// The oracle must strictly prefer constant `x` to constant `y` and rank `f`
/// weakly between them; other answers are protocol errors.
pub fn time_equivalent_bisect_with<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    f: &GridAct,
    x: &Outcome,
    y: &Outcome,
    opts: &BisectOptions,
) -> Result<TimeEquivalent> {
    opts.validate()?;
    let space = f.space().clone();
    let cx = GridAct::constant(space.clone(), x.clone());
    let cy = GridAct::constant(space.clone(), y.clone());
    let mut queries = 3;
    if oracle.compare(&cx, &cy)? != Preference::StrictlyFirst {
        return Err(Error::protocol(format!("oracle does not strictly prefer `{x}` to `{y}`")));
    }
    match oracle.compare(f, &cx)? {
        Preference::StrictlyFirst => {
            return Err(Error::protocol(format!("oracle prefers the act to constant `{x}`")));
        }
        Preference::Indifferent => {
            return Ok(TimeEquivalent { time: EquivalentTime::WholeHorizon, bracket_width: 0.0, queries: 2 });
        }
        Preference::StrictlySecond => {}
    }
    match oracle.compare(f, &cy)? {
        Preference::StrictlySecond => {
            return Err(Error::protocol(format!("oracle prefers constant `{y}` to the act")));
        }
        Preference::Indifferent => {
            return Ok(TimeEquivalent { time: EquivalentTime::Finite(0.0), bracket_width: 0.0, queries });
        }
        Preference::StrictlyFirst => {}
    }
    let search = monotone_search(opts, &mut queries, |t| {
        let prefix = GridAct::deterministic(space.clone(), StepProfile::prefix(x.clone(), t, y.clone())?);
        oracle.compare(&prefix, f)
    })?;
    Ok(match search {
        Search::Found { t, width } => TimeEquivalent { time: EquivalentTime::Finite(t), bracket_width: width, queries },
        Search::Ceiling => TimeEquivalent { time: EquivalentTime::WholeHorizon, bracket_width: 0.0, queries },
    })
}

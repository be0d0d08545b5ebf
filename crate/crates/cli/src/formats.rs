//! JSON documents read and written by the command line.
//!
//! Interval ends are numbers, except an unbounded upper end which is the
//! string `"inf"`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use dseu_core::aa::{Lottery, LotteryAct};
use dseu_core::elicitation::{subset_label, ElicitationReport};
use dseu_core::oracles::{Capacity, ChoquetFunctional, DualRateFunctional, ThresholdOracle, ValueFunctional};
use dseu_core::{
    Beliefs, DiscountRate, DseuModel, ErrorKind, GridAct, Outcome, State, StateSet, StateSpace, StepProfile, TimeInterval,
    TimeSet, UtilityModel,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

/// Failure classes that map onto exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Validation(String),
    Protocol(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Protocol(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Protocol(m) => f.write_str(m),
        }
    }
}

impl From<dseu_core::Error> for CliError {
    fn from(e: dseu_core::Error) -> Self {
        match e.kind() {
            ErrorKind::Protocol => CliError::Protocol(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Parses a JSON file; syntax and schema errors carry the path and line.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Bound {
    Number(f64),
    Tag(String),
}

impl Bound {
    fn value(&self) -> CliResult<f64> {
        match self {
            Bound::Number(x) => Ok(*x),
            Bound::Tag(s) if s == "inf" => Ok(f64::INFINITY),
            Bound::Tag(s) => Err(invalid(format!("interval end must be a number or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
struct PieceDoc(f64, Bound, String);

#[derive(Debug, Clone, Deserialize)]
struct IntervalDoc(f64, Bound);

/// `{"states": [...], "profiles": {state: [[lo, hi, outcome], ...]}}`
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActDoc {
    states: Vec<String>,
    profiles: BTreeMap<String, Vec<PieceDoc>>,
}

fn profile_from(pieces: &[PieceDoc]) -> CliResult<StepProfile> {
    let pieces = pieces
        .iter()
        .map(|PieceDoc(lo, hi, x)| Ok((TimeInterval::new(*lo, hi.value()?)?, Outcome::from(x.as_str()))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(StepProfile::normalize(pieces)?)
}

impl ActDoc {
    pub fn to_act(&self) -> CliResult<GridAct> {
        let space = StateSpace::new(self.states.iter().map(String::as_str))?;
        if let Some(extra) = self.profiles.keys().find(|k| !self.states.contains(k)) {
            return Err(invalid(format!("profile given for unknown state `{extra}`")));
        }
        let profiles = self
            .states
            .iter()
            .map(|s| {
                let pieces = self.profiles.get(s).ok_or_else(|| invalid(format!("no profile for state `{s}`")))?;
                profile_from(pieces).map_err(|e| match e {
                    CliError::Validation(m) => invalid(format!("state `{s}`: {m}")),
                    other => other,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(GridAct::new(space, profiles)?)
    }
}

pub fn read_act(path: &Path) -> CliResult<GridAct> {
    read_json::<ActDoc>(path)?.to_act().map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Validation(m) => invalid(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn utility_from(map: &BTreeMap<String, f64>) -> CliResult<UtilityModel> {
    Ok(UtilityModel::new(map.iter().map(|(k, v)| (k.as_str(), *v)))?)
}

fn space_from(states: Option<&Vec<String>>, mu: &BTreeMap<String, f64>) -> CliResult<StateSpace> {
    match states {
        Some(s) => Ok(StateSpace::new(s.iter().map(String::as_str))?),
        None => Ok(StateSpace::new(mu.keys().map(String::as_str))?),
    }
}

fn beliefs_on(space: &StateSpace, mu: &BTreeMap<String, f64>) -> CliResult<Beliefs> {
    if let Some(extra) = mu.keys().find(|k| space.states().iter().all(|s| s.as_str() != k.as_str())) {
        return Err(invalid(format!("probability given for unknown state `{extra}`")));
    }
    let probs: Vec<f64> = space.states().iter().map(|s| mu.get(s.as_str()).copied().unwrap_or(0.0)).collect();
    Ok(Beliefs::on_space(space, &probs)?)
}

/// `{"lambda": λ, "utility": {outcome: u}, "mu": {state: p}}`, with an
/// optional `"states"` list fixing the state order.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    lambda: f64,
    utility: BTreeMap<String, f64>,
    mu: BTreeMap<String, f64>,
    #[serde(default)]
    states: Option<Vec<String>>,
}

impl ModelDoc {
    pub fn to_model(&self) -> CliResult<(StateSpace, DseuModel)> {
        let space = space_from(self.states.as_ref(), &self.mu)?;
        let beliefs = beliefs_on(&space, &self.mu)?;
        Ok((space, DseuModel::new(DiscountRate::new(self.lambda)?, utility_from(&self.utility)?, beliefs)))
    }
}

pub fn read_model(path: &Path) -> CliResult<(StateSpace, DseuModel)> {
    read_json::<ModelDoc>(path)?.to_model().map_err(|e| with_path(path, e))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum OracleDoc {
    Seu {
        lambda: f64,
        utility: BTreeMap<String, f64>,
        mu: BTreeMap<String, f64>,
        #[serde(default)]
        states: Option<Vec<String>>,
        #[serde(default)]
        band: f64,
    },
    Choquet {
        lambda: f64,
        utility: BTreeMap<String, f64>,
        #[serde(default)]
        states: Option<Vec<String>>,
        /// Keys are comma-joined state labels.
        #[serde(default)]
        capacity: Option<BTreeMap<String, f64>>,
        #[serde(default)]
        epsilon: Option<f64>,
        #[serde(default)]
        mu: Option<BTreeMap<String, f64>>,
        #[serde(default)]
        band: f64,
    },
    DualRate {
        lambdas: [f64; 2],
        utility: BTreeMap<String, f64>,
        mu: BTreeMap<String, f64>,
        #[serde(default)]
        states: Option<Vec<String>>,
        #[serde(default)]
        band: f64,
    },
}

/// A preference oracle read from disk, together with the SEU model it is
/// audited against.
pub struct OracleSpec {
    pub kind: &'static str,
    pub space: StateSpace,
    pub rate: DiscountRate,
    pub util: UtilityModel,
    pub band: f64,
    pub functional: Box<dyn ValueFunctional>,
    /// `(λ, u, μ)` used by the decomposition check.
    pub claimed: DseuModel,
}

impl OracleSpec {
    pub fn oracle(&self) -> ThresholdOracle<&dyn ValueFunctional> {
        ThresholdOracle::new(&*self.functional, self.band).expect("band validated on read")
    }
}

fn capacity_table(space: &StateSpace, table: &BTreeMap<String, f64>) -> CliResult<BTreeMap<StateSet, f64>> {
    table
        .iter()
        .map(|(key, v)| {
            let labels: Vec<State> = key.split(',').map(str::trim).filter(|s| !s.is_empty()).map(State::from).collect();
            Ok((space.subset(&labels)?, *v))
        })
        .collect()
}

/// Singleton capacities, normalized; uniform when they all vanish.
fn singleton_beliefs(cap: &Capacity) -> CliResult<Beliefs> {
    let space = cap.space();
    let raw: Vec<f64> = (0..space.len()).map(|i| cap.get(StateSet::singleton(i))).collect();
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Ok(Beliefs::uniform(space));
    }
    let mut p: Vec<f64> = raw.iter().map(|v| v / total).collect();
    let head: f64 = p[..p.len() - 1].iter().sum();
    *p.last_mut().expect("non-empty space") = 1.0 - head;
    Ok(Beliefs::on_space(space, &p)?)
}

fn check_band(band: f64) -> CliResult<f64> {
    if band.is_finite() && band >= 0.0 {
        Ok(band)
    } else {
        Err(invalid(format!("band must be finite and ≥ 0, got {band}")))
    }
}

impl OracleDoc {
    fn to_spec(&self) -> CliResult<OracleSpec> {
        match self {
            OracleDoc::Seu { lambda, utility, mu, states, band } => {
                let space = space_from(states.as_ref(), mu)?;
                let model = DseuModel::new(DiscountRate::new(*lambda)?, utility_from(utility)?, beliefs_on(&space, mu)?);
                Ok(OracleSpec {
                    kind: "seu",
                    space,
                    rate: model.rate,
                    util: model.util.clone(),
                    band: check_band(*band)?,
                    functional: Box::new(model.clone()),
                    claimed: model,
                })
            }
            OracleDoc::Choquet { lambda, utility, states, capacity, epsilon, mu, band } => {
                let rate = DiscountRate::new(*lambda)?;
                let util = utility_from(utility)?;
                let cap = match (capacity, epsilon, mu) {
                    (Some(table), None, None) => {
                        let states = states.as_ref().ok_or_else(|| invalid("a capacity table needs a \"states\" list"))?;
                        let space = StateSpace::new(states.iter().map(String::as_str))?;
                        let values = capacity_table(&space, table)?;
                        Capacity::from_table(space, &values)?
                    }
                    (None, Some(eps), Some(mu)) => {
                        let space = space_from(states.as_ref(), mu)?;
                        let beliefs = beliefs_on(&space, mu)?;
                        Capacity::contaminated(space, &beliefs, *eps)?
                    }
                    _ => return Err(invalid("a Choquet oracle needs either \"capacity\" or both \"epsilon\" and \"mu\"")),
                };
                let space = cap.space().clone();
                let claimed = DseuModel::new(rate, util.clone(), singleton_beliefs(&cap)?);
                Ok(OracleSpec {
                    kind: "choquet",
                    space,
                    rate,
                    util: util.clone(),
                    band: check_band(*band)?,
                    functional: Box::new(ChoquetFunctional { rate, util, capacity: cap }),
                    claimed,
                })
            }
            OracleDoc::DualRate { lambdas, utility, mu, states, band } => {
                let space = space_from(states.as_ref(), mu)?;
                let rates = (DiscountRate::new(lambdas[0])?, DiscountRate::new(lambdas[1])?);
                let util = utility_from(utility)?;
                let beliefs = beliefs_on(&space, mu)?;
                let claimed = DseuModel::new(rates.0, util.clone(), beliefs.clone());
                Ok(OracleSpec {
                    kind: "dual-rate",
                    space,
                    rate: rates.0,
                    util: util.clone(),
                    band: check_band(*band)?,
                    functional: Box::new(DualRateFunctional { rates, util, beliefs }),
                    claimed,
                })
            }
        }
    }
}

pub fn read_oracle(path: &Path) -> CliResult<OracleSpec> {
    read_json::<OracleDoc>(path)?.to_spec().map_err(|e| with_path(path, e))
}

/// `{"states": [...], "lotteries": {state: {outcome: p}}}`
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LotteryActDoc {
    states: Vec<String>,
    lotteries: BTreeMap<String, BTreeMap<String, f64>>,
}

impl LotteryActDoc {
    pub fn to_lottery_act(&self) -> CliResult<LotteryAct> {
        let space = StateSpace::new(self.states.iter().map(String::as_str))?;
        if let Some(extra) = self.lotteries.keys().find(|k| !self.states.contains(k)) {
            return Err(invalid(format!("lottery given for unknown state `{extra}`")));
        }
        let lots = self
            .states
            .iter()
            .map(|s| {
                let l = self.lotteries.get(s).ok_or_else(|| invalid(format!("no lottery for state `{s}`")))?;
                Ok(Lottery::new(l.iter().map(|(o, p)| (o.as_str(), *p)))?)
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(LotteryAct::new(space, lots)?)
    }
}

pub fn read_lottery_act(path: &Path) -> CliResult<LotteryAct> {
    read_json::<LotteryActDoc>(path)?.to_lottery_act().map_err(|e| with_path(path, e))
}

pub fn bound_json(x: f64) -> Value {
    if x == f64::INFINITY {
        json!("inf")
    } else {
        json!(x)
    }
}

pub fn time_set_json(set: &TimeSet) -> Value {
    Value::Array(set.intervals().iter().map(|i| json!([i.lo(), bound_json(i.hi())])).collect())
}

pub fn read_time_set(v: &Value) -> CliResult<TimeSet> {
    let docs: Vec<IntervalDoc> = serde_json::from_value(v.clone()).map_err(|e| invalid(e.to_string()))?;
    let intervals = docs
        .iter()
        .map(|IntervalDoc(lo, hi)| Ok(TimeInterval::new(*lo, hi.value()?)?))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(TimeSet::from_intervals(intervals))
}

pub fn profile_json(p: &StepProfile) -> Value {
    Value::Array(p.pieces().iter().map(|(i, x)| json!([i.lo(), bound_json(i.hi()), x.as_str()])).collect())
}

pub fn act_json(f: &GridAct) -> Value {
    let states: Vec<&str> = f.space().states().iter().map(|s| s.as_str()).collect();
    let profiles: Map<String, Value> = f
        .space()
        .states()
        .iter()
        .zip(f.profiles())
        .map(|(s, p)| (s.to_string(), profile_json(p)))
        .collect();
    json!({ "states": states, "profiles": profiles })
}

pub fn act_from_json(v: &Value) -> CliResult<GridAct> {
    serde_json::from_value::<ActDoc>(v.clone()).map_err(|e| invalid(e.to_string()))?.to_act()
}

pub fn lottery_act_json(g: &LotteryAct) -> Value {
    let states: Vec<&str> = g.space().states().iter().map(|s| s.as_str()).collect();
    let lots: Map<String, Value> = g
        .space()
        .states()
        .iter()
        .zip(g.lotteries())
        .map(|(s, l)| {
            let probs: Map<String, Value> = l.iter().map(|(o, p)| (o.to_string(), json!(p))).collect();
            (s.to_string(), Value::Object(probs))
        })
        .collect();
    json!({ "states": states, "lotteries": lots })
}

pub fn lottery_act_from_json(v: &Value) -> CliResult<LotteryAct> {
    serde_json::from_value::<LotteryActDoc>(v.clone()).map_err(|e| invalid(e.to_string()))?.to_lottery_act()
}

pub fn elicitation_json(space: &StateSpace, rep: &ElicitationReport) -> Value {
    let mu: Map<String, Value> = rep.mu_hat.iter().map(|(e, v)| (subset_label(space, *e), json!(v))).collect();
    let residuals: Vec<Value> = rep
        .additivity_residuals
        .iter()
        .map(|((e, f), r)| json!({ "e": subset_label(space, *e), "f": subset_label(space, *f), "residual": r }))
        .collect();
    json!({
        "lambda_hat": rep.lambda_hat.lambda(),
        "half_life": rep.lambda_hat.half_life(),
        "mu_hat": mu,
        "additivity_residuals": residuals,
        "max_residual": rep.max_residual,
        "threshold": rep.threshold,
        "additive": rep.is_additive(),
        "query_count": rep.query_count,
    })
}

//! The discounted SEU functional and its time-first dual.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::acts::{splice_time, GridAct, Outcome, State, StateSet, StateSpace, StepProfile};
use crate::error::{Error, Result};
use crate::exp_measure::{DiscountRate, TimeInterval, WEIGHT_TOLERANCE};

/// Bounded, nonconstant utility on a finite outcome alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityModel {
    u: BTreeMap<Outcome, f64>,
}

impl UtilityModel {
    pub fn new<I, O>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (O, f64)>,
        O: Into<Outcome>,
    {
        let mut u = BTreeMap::new();
        for (o, v) in values {
            let o = o.into();
            if !v.is_finite() {
                return Err(Error::validation(format!("utility of `{o}` is not finite: {v}")));
            }
            if u.insert(o.clone(), v).is_some() {
                return Err(Error::validation(format!("outcome `{o}` listed twice")));
            }
        }
        let mut values = u.values();
        let first = values.next().copied();
        if first.is_none_or(|f| values.all(|v| *v == f)) {
            return Err(Error::validation("utility must take at least two distinct values"));
        }
        Ok(UtilityModel { u })
    }

    pub fn get(&self, outcome: &Outcome) -> Result<f64> {
        self.u
            .get(outcome)
            .copied()
            .ok_or_else(|| Error::lookup(format!("no utility for outcome `{outcome}`")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Outcome, f64)> {
        self.u.iter().map(|(o, v)| (o, *v))
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// First outcome (in label order) attaining the minimum utility.
    pub fn worst(&self) -> (&Outcome, f64) {
        self.iter().fold(None, |acc: Option<(&Outcome, f64)>, (o, v)| match acc {
            Some((_, best)) if best <= v => acc,
            _ => Some((o, v)),
        })
        .expect("utility is non-empty")
    }

    /// First outcome (in label order) attaining the maximum utility.
    pub fn best(&self) -> (&Outcome, f64) {
        self.iter().fold(None, |acc: Option<(&Outcome, f64)>, (o, v)| match acc {
            Some((_, best)) if best >= v => acc,
            _ => Some((o, v)),
        })
        .expect("utility is non-empty")
    }

    /// `a·u + b`.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !b.is_finite() {
            return Err(Error::domain(format!("affine map needs a > 0 and finite b, got a={a}, b={b}")));
        }
        UtilityModel::new(self.u.iter().map(|(o, v)| (o.clone(), a * v + b)))
    }
}

/// Probability on states.
#[derive(Debug, Clone, PartialEq)]
pub struct Beliefs {
    mu: BTreeMap<State, f64>,
}

impl Beliefs {
    pub fn new<I, S>(probs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<State>,
    {
        let mut mu = BTreeMap::new();
        let mut total = 0.0;
        for (s, p) in probs {
            let s = s.into();
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::validation(format!("probability of `{s}` must be finite and ≥ 0, got {p}")));
            }
            total += p;
            if mu.insert(s.clone(), p).is_some() {
                return Err(Error::validation(format!("state `{s}` listed twice")));
            }
        }
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::validation(format!("beliefs sum to {total}, not 1")));
        }
        Ok(Beliefs { mu })
    }

    /// Probabilities listed in the order of `space`.
    pub fn on_space(space: &StateSpace, probs: &[f64]) -> Result<Self> {
        if probs.len() != space.len() {
            return Err(Error::validation(format!("{} probabilities for {} states", probs.len(), space.len())));
        }
        Beliefs::new(space.states().iter().cloned().zip(probs.iter().copied()))
    }

    pub fn uniform(space: &StateSpace) -> Self {
        let p = 1.0 / space.len() as f64;
        Beliefs { mu: space.states().iter().map(|s| (s.clone(), p)).collect() }
    }

    pub fn get(&self, state: &State) -> Result<f64> {
        self.mu
            .get(state)
            .copied()
            .ok_or_else(|| Error::lookup(format!("no belief for state `{state}`")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&State, f64)> {
        self.mu.iter().map(|(s, p)| (s, *p))
    }

    /// Weights in the order of `space`.
    pub fn weights(&self, space: &StateSpace) -> Result<Vec<f64>> {
        space.states().iter().map(|s| self.get(s)).collect()
    }

    /// `μ(E)` for a subset of `space`.
    pub fn event(&self, space: &StateSpace, event: StateSet) -> Result<f64> {
        event.iter().map(|i| self.get(space.state(i))).sum()
    }
}

/// The representing triple `(λ, u, μ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DseuModel {
    pub rate: DiscountRate,
    pub util: UtilityModel,
    pub beliefs: Beliefs,
}

impl DseuModel {
    pub fn new(rate: DiscountRate, util: UtilityModel, beliefs: Beliefs) -> Self {
        DseuModel { rate, util, beliefs }
    }

    /// `∫ u[x(t)] dε_λ(t)`.
    pub fn profile_value(&self, p: &StepProfile) -> Result<f64> {
        profile_value(self.rate, &self.util, p)
    }

    /// State-first evaluation `Σ_s μ(s) ∫ u[f(s,t)] dε_λ(t)`.
    pub fn act_value(&self, f: &GridAct) -> Result<f64> {
        let weights = self.beliefs.weights(f.space())?;
        let mut total = 0.0;
        for (w, p) in weights.iter().zip(f.profiles()) {
            total += w * self.profile_value(p)?;
        }
        Ok(total)
    }

    /// Time-first evaluation over the common refinement of all profiles.
    pub fn act_value_dual(&self, f: &GridAct) -> Result<f64> {
        let weights = self.beliefs.weights(f.space())?;
        let mut cuts: Vec<f64> = f.profiles().iter().flat_map(StepProfile::breakpoints).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = 0.0;
        let mut lo = 0.0;
        for hi in cuts.into_iter().chain(core::iter::once(f64::INFINITY)) {
            let mut expected = 0.0;
            for (w, p) in weights.iter().zip(f.profiles()) {
                expected += w * self.util.get(p.outcome_at(lo))?;
            }
            total += self.rate.interval_mass(&TimeInterval::new(lo, hi)?) * expected;
            lo = hi;
        }
        Ok(total)
    }

    /// `∫_S ∫_{[0,t)} u[h(s,τ)] dε_λ(τ) dμ(s)`.
    pub fn prefix_value(&self, h: &GridAct, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("prefix length must be ≥ 0, got {t}")));
        }
        let weights = self.beliefs.weights(h.space())?;
        let mut total = 0.0;
        for (w, p) in weights.iter().zip(h.profiles()) {
            let mut v = 0.0;
            for (i, x) in p.pieces() {
                if i.lo() >= t {
                    break;
                }
                let cut = TimeInterval::new(i.lo(), i.hi().min(t))?;
                v += self.rate.interval_mass(&cut) * self.util.get(x)?;
            }
            total += w * v;
        }
        Ok(total)
    }

    /// Both sides of `V(h_t f) = ∫∫ 1_{[0,t)} u[h] + e^{−λt} V(f)`.
    pub fn decomposition_check(&self, h: &GridAct, t: f64, f: &GridAct) -> Result<(f64, f64)> {
        let lhs = self.act_value(&splice_time(h, t, f)?)?;
        let rhs = self.prefix_value(h, t)? + self.rate.discount(t) * self.act_value(f)?;
        Ok((lhs, rhs))
    }
}

/// `∫ u[x(t)] dε_λ(t)` for a step profile.
pub fn profile_value(rate: DiscountRate, util: &UtilityModel, p: &StepProfile) -> Result<f64> {
    let mut v = 0.0;
    for (i, x) in p.pieces() {
        v += rate.interval_mass(i) * util.get(x)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acts::{splice_event, Event};
    use crate::exp_measure::TimeSet;
    use alloc::vec;

    fn o(s: &str) -> Outcome {
        Outcome::new(s)
    }

    fn model(lambda: f64) -> (StateSpace, DseuModel) {
        let sp = StateSpace::new(["a", "b", "c"]).unwrap();
        let util = UtilityModel::new([("x", 1.0), ("y", 0.0), ("z", -2.5)]).unwrap();
        let beliefs = Beliefs::on_space(&sp, &[0.3, 0.2, 0.5]).unwrap();
        (sp, DseuModel::new(DiscountRate::new(lambda).unwrap(), util, beliefs))
    }

    // midpoint rule on each piece truncated at `horizon`, plus the tail beyond it
    fn quadrature(lambda: f64, util: &UtilityModel, p: &StepProfile, horizon: f64, cells: usize) -> f64 {
        let h = horizon / cells as f64;
        let mut acc = 0.0;
        for (i, x) in p.pieces() {
            let (lo, hi) = (i.lo(), i.hi().min(horizon));
            if lo >= hi {
                continue;
            }
            let k = ((hi - lo) / h).ceil() as usize;
            let w = (hi - lo) / k as f64;
            let u = util.get(x).unwrap();
            for j in 0..k {
                let t = lo + (j as f64 + 0.5) * w;
                acc += lambda * (-lambda * t).exp() * u * w;
            }
        }
        acc + (-lambda * horizon).exp() * util.get(p.outcome_at(horizon)).unwrap()
    }

    #[test]
    fn constant_and_half_life() {
        let (_, m) = model(core::f64::consts::LN_2);
        assert_eq!(m.profile_value(&StepProfile::constant(o("z"))).unwrap(), -2.5);
        let p = StepProfile::prefix(o("x"), 1.0, o("y")).unwrap();
        assert!((m.profile_value(&p).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eight_piece_profile_against_quadrature() {
        let (_, m) = model(0.7);
        let names = ["x", "z", "y", "x", "y", "z", "x", "y"];
        let steps: Vec<(f64, Outcome)> =
            names[1..].iter().enumerate().map(|(k, n)| (0.4 * (k + 1) as f64 + 0.05 * k as f64, o(n))).collect();
        let p = StepProfile::from_steps(o(names[0]), &steps).unwrap();
        let closed = m.profile_value(&p).unwrap();
        let numeric = quadrature(0.7, &m.util, &p, 30.0, 1_000_000);
        assert!((closed - numeric).abs() < 1e-6, "{closed} vs {numeric}");
        assert_eq!(closed, -0.26011522783130153);
    }

    #[test]
    fn bet_is_expectation() {
        let (sp, m) = model(1.3);
        let bet = GridAct::bet(sp, StateSet::from_bits(0b011), o("x"), o("z"));
        let v = m.act_value(&bet).unwrap();
        assert!((v - (0.5 * 1.0 + 0.5 * -2.5)).abs() < 1e-15);
    }

    #[test]
    fn both_orders_agree() {
        let (sp, m) = model(0.9);
        let f = GridAct::new(
            sp,
            vec![
                StepProfile::from_steps(o("x"), &[(0.3, o("z")), (1.7, o("y"))]).unwrap(),
                StepProfile::from_steps(o("y"), &[(0.3, o("x"))]).unwrap(),
                StepProfile::from_steps(o("z"), &[(2.2, o("x")), (5.0, o("y"))]).unwrap(),
            ],
        )
        .unwrap();
        let a = m.act_value(&f).unwrap();
        let b = m.act_value_dual(&f).unwrap();
        assert!((a - b).abs() < 1e-12);
        let d = GridAct::deterministic(f.space().clone(), f.profile(0).clone());
        assert!((m.act_value_dual(&d).unwrap() - m.profile_value(f.profile(0)).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn decomposition_edges() {
        let (sp, m) = model(0.4);
        let h = GridAct::stochastic(sp.clone(), vec![o("x"), o("z"), o("y")]).unwrap();
        let f = GridAct::deterministic(sp.clone(), StepProfile::prefix(o("z"), 2.0, o("x")).unwrap());
        let (l, r) = m.decomposition_check(&h, 0.0, &f).unwrap();
        assert_eq!(l, r);
        assert!((l - m.act_value(&f).unwrap()).abs() < 1e-15);
        let c = GridAct::constant(sp, o("x"));
        let (l, r) = m.decomposition_check(&c, 1.5, &c).unwrap();
        assert!((l - 1.0).abs() < 1e-15 && (r - 1.0).abs() < 1e-15);
        let (l, r) = m.decomposition_check(&h, 0.8, &f).unwrap();
        assert!((l - r).abs() < 1e-12);
    }

    #[test]
    fn null_rectangle_is_ignored() {
        let sp = StateSpace::new(["a", "b"]).unwrap();
        let util = UtilityModel::new([("x", 1.0), ("y", 0.0)]).unwrap();
        let m = DseuModel::new(DiscountRate::new(1.0).unwrap(), util, Beliefs::on_space(&sp, &[1.0, 0.0]).unwrap());
        let f = GridAct::constant(sp.clone(), o("y"));
        let g = GridAct::constant(sp, o("x"));
        let e = Event::new(StateSet::singleton(1), TimeSet::whole());
        assert_eq!(m.act_value(&splice_event(&g, &e, &f).unwrap()).unwrap(), m.act_value(&f).unwrap());
    }

    #[test]
    fn lookup_errors() {
        let (sp, m) = model(1.0);
        let f = GridAct::constant(sp, o("nope"));
        assert_eq!(m.act_value(&f).unwrap_err().kind(), crate::ErrorKind::Lookup);
        let other = StateSpace::new(["q"]).unwrap();
        assert_eq!(m.act_value(&GridAct::constant(other, o("x"))).unwrap_err().kind(), crate::ErrorKind::Lookup);
    }

    #[test]
    fn model_validation() {
        assert!(UtilityModel::new([("x", 1.0), ("y", 1.0)]).is_err());
        assert!(UtilityModel::new([("x", f64::NAN), ("y", 1.0)]).is_err());
        assert!(Beliefs::new([("a", 0.5), ("b", 0.4)]).is_err());
        assert!(Beliefs::new([("a", 1.5), ("b", -0.5)]).is_err());
        let u = UtilityModel::new([("b", 2.0), ("a", 2.0), ("c", -1.0)]).unwrap();
        assert_eq!(u.best().0, &o("a"));
        assert_eq!(u.worst().0, &o("c"));
    }
}

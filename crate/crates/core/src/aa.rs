//! Reduction of acts to state-wise lotteries.
//!
//! Pushing the discount measure through a profile gives a lottery over
//! outcomes; doing so state by state turns a grid act into a lottery act.
//! Conversely, any finite lottery can be laid out on a time interval so that
//! each outcome receives its share of the interval's mass.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::acts::{splice_time, GridAct, Outcome, StateSpace, StepProfile};
use crate::error::{Error, Result};
use crate::evaluate::DseuModel;
use crate::exp_measure::{DiscountRate, TimeInterval, WEIGHT_TOLERANCE};

/// Finitely supported probability on outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Lottery {
    probs: BTreeMap<Outcome, f64>,
}

impl Lottery {
    pub fn new<I, O>(probs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (O, f64)>,
        O: Into<Outcome>,
    {
        let mut map = BTreeMap::new();
        let mut total = 0.0;
        for (o, p) in probs {
            let o = o.into();
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::validation(format!("probability of `{o}` must be finite and ≥ 0, got {p}")));
            }
            total += p;
            if map.insert(o.clone(), p).is_some() {
                return Err(Error::validation(format!("outcome `{o}` listed twice")));
            }
        }
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::validation(format!("lottery sums to {total}, not 1")));
        }
        Ok(Lottery { probs: map })
    }

    pub fn degenerate(x: Outcome) -> Self {
        Lottery { probs: BTreeMap::from([(x, 1.0)]) }
    }

    pub fn get(&self, x: &Outcome) -> f64 {
        self.probs.get(x).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Outcome, f64)> {
        self.probs.iter().map(|(o, p)| (o, *p))
    }

    /// Outcomes with positive probability.
    pub fn support(&self) -> impl Iterator<Item = &Outcome> {
        self.probs.iter().filter(|(_, p)| **p > 0.0).map(|(o, _)| o)
    }

    /// Largest entrywise difference.
    pub fn max_gap(&self, other: &Lottery) -> f64 {
        self.probs
            .keys()
            .chain(other.probs.keys())
            .map(|o| (self.get(o) - other.get(o)).abs())
            .fold(0.0, f64::max)
    }

    fn mix(&self, other: &Lottery, w: f64) -> Lottery {
        let keys: BTreeSet<&Outcome> = self.probs.keys().chain(other.probs.keys()).collect();
        Lottery {
            probs: keys
                .into_iter()
                .map(|o| (o.clone(), w * self.get(o) + (1.0 - w) * other.get(o)))
                .collect(),
        }
    }
}

/// One lottery per state.
#[derive(Debug, Clone, PartialEq)]
pub struct LotteryAct {
    space: StateSpace,
    lotteries: Vec<Lottery>,
}

impl LotteryAct {
    pub fn new(space: StateSpace, lotteries: Vec<Lottery>) -> Result<Self> {
        if lotteries.len() != space.len() {
            return Err(Error::validation(format!("{} lotteries for {} states", lotteries.len(), space.len())));
        }
        Ok(LotteryAct { space, lotteries })
    }

    pub fn constant(space: StateSpace, lottery: Lottery) -> Self {
        let lotteries = alloc::vec![lottery; space.len()];
        LotteryAct { space, lotteries }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn lotteries(&self) -> &[Lottery] {
        &self.lotteries
    }

    pub fn lottery(&self, index: usize) -> &Lottery {
        &self.lotteries[index]
    }

    pub fn max_gap(&self, other: &LotteryAct) -> Result<f64> {
        self.space.ensure_same(&other.space)?;
        Ok(self.lotteries.iter().zip(&other.lotteries).map(|(a, b)| a.max_gap(b)).fold(0.0, f64::max))
    }

    fn outcomes(&self) -> BTreeSet<&Outcome> {
        self.lotteries.iter().flat_map(|l| l.probs.keys()).collect()
    }
}

/// `φ(x)(o) = ε_λ{t : x(t) = o}`.
pub fn reduce_profile(rate: DiscountRate, p: &StepProfile) -> Lottery {
    let mut probs = BTreeMap::new();
    for (i, x) in p.pieces() {
        *probs.entry(x.clone()).or_insert(0.0) += rate.interval_mass(i);
    }
    Lottery { probs }
}

/// [`reduce_profile`] state by state.
pub fn reduce_act(rate: DiscountRate, f: &GridAct) -> LotteryAct {
    LotteryAct {
        space: f.space().clone(),
        lotteries: f.profiles().iter().map(|p| reduce_profile(rate, p)).collect(),
    }
}

/// `w·a + (1−w)·b`, state by state.
pub fn mix(a: &LotteryAct, b: &LotteryAct, w: f64) -> Result<LotteryAct> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::domain(format!("mixture weight must lie in [0, 1], got {w}")));
    }
    a.space.ensure_same(&b.space)?;
    Ok(LotteryAct {
        space: a.space.clone(),
        lotteries: a.lotteries.iter().zip(&b.lotteries).map(|(x, y)| x.mix(y, w)).collect(),
    })
}

/// Lays `n` out on `interval`: consecutive pieces in outcome order, each with
/// `n(o)·ε_λ(interval)` mass. Zero-probability outcomes get no piece.
pub fn realize_lottery(rate: DiscountRate, interval: &TimeInterval, n: &Lottery) -> Result<Vec<(TimeInterval, Outcome)>> {
    let outcomes: Vec<&Outcome> = n.probs.keys().collect();
    let weights: Vec<f64> = n.probs.values().copied().collect();
    Ok(rate
        .split_interval_indexed(interval, &weights)?
        .into_iter()
        .map(|(k, i)| (i, outcomes[k].clone()))
        .collect())
}

/// Realizes `g(s)` on `[0, t)` at every state, followed by the first outcome
/// (in label order) appearing in `g`.
pub fn realize_lottery_act(rate: DiscountRate, t: f64, g: &LotteryAct) -> Result<GridAct> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("realization window must be finite and > 0, got {t}")));
    }
    let filler = g.outcomes().into_iter().next().cloned().expect("lotteries are non-empty");
    let window = TimeInterval::new(0.0, t)?;
    let tail = TimeInterval::from(t)?;
    let profiles = g
        .lotteries
        .iter()
        .map(|n| {
            let mut pieces = realize_lottery(rate, &window, n)?;
            pieces.push((tail, filler.clone()));
            StepProfile::normalize(pieces)
        })
        .collect::<Result<Vec<_>>>()?;
    GridAct::new(g.space.clone(), profiles)
}

/// Distribution of a profile's outcomes on `[0, t)`, renormalized.
pub fn conditional_on_prefix(rate: DiscountRate, p: &StepProfile, t: f64) -> Result<Lottery> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("conditioning window must be finite and > 0, got {t}")));
    }
    let total = rate.cdf(t)?;
    let mut probs = BTreeMap::new();
    for (i, x) in p.pieces() {
        if i.lo() >= t {
            break;
        }
        let cut = TimeInterval::new(i.lo(), i.hi().min(t))?;
        *probs.entry(x.clone()).or_insert(0.0) += rate.interval_mass(&cut) / total;
    }
    Ok(Lottery { probs })
}

/// [`conditional_on_prefix`] state by state.
pub fn conditional_act(rate: DiscountRate, f: &GridAct, t: f64) -> Result<LotteryAct> {
    Ok(LotteryAct {
        space: f.space().clone(),
        lotteries: f.profiles().iter().map(|p| conditional_on_prefix(rate, p, t)).collect::<Result<_>>()?,
    })
}

/// Both sides of `φ(h_t f) = e^{−λt}·φ(f) + (1 − e^{−λt})·g`, where `h`
/// realizes `g` on `[0, t)`.
pub fn independence_witness(rate: DiscountRate, t: f64, g: &LotteryAct, f: &GridAct) -> Result<(LotteryAct, LotteryAct)> {
    let h = realize_lottery_act(rate, t, g)?;
    let lhs = reduce_act(rate, &splice_time(&h, t, f)?);
    let rhs = mix(&reduce_act(rate, f), g, rate.discount(t))?;
    Ok((lhs, rhs))
}

/// `Σ_s μ(s) Σ_o φ(f)(s)(o)·u(o)`.
pub fn aa_value(model: &DseuModel, f: &GridAct) -> Result<f64> {
    let w = model.beliefs.weights(f.space())?;
    let reduced = reduce_act(model.rate, f);
    let mut total = 0.0;
    for (w, l) in w.iter().zip(reduced.lotteries()) {
        let mut e = 0.0;
        for (o, p) in l.iter() {
            e += p * model.util.get(o)?;
        }
        total += w * e;
    }
    Ok(total)
}

/// Continuity check through the time equivalent of `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityWitness {
    /// `ε_λ[0, t)` at the time equivalent.
    pub alpha: f64,
    /// `φ` of the equivalent profile.
    pub reduced: Lottery,
    /// `α·δ_x + (1−α)·δ_y`.
    pub expected: Lottery,
}

pub fn continuity_witness(model: &DseuModel, f: &GridAct, x: &Outcome, y: &Outcome) -> Result<ContinuityWitness> {
    let te = crate::equivalents::time_equivalent_act(model, f, x, y)?;
    let alpha = te.mass(model.rate);
    let reduced = reduce_profile(model.rate, &te.profile(x, y));
    let mut probs = BTreeMap::new();
    probs.insert(x.clone(), alpha);
    *probs.entry(y.clone()).or_insert(0.0) += 1.0 - alpha;
    Ok(ContinuityWitness { alpha, reduced, expected: Lottery { probs } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acts::{StateSet, StateSpace};
    use crate::evaluate::{Beliefs, UtilityModel};
    use core::f64::consts::LN_2;

    fn o(s: &str) -> Outcome {
        Outcome::new(s)
    }

    fn rate(l: f64) -> DiscountRate {
        DiscountRate::new(l).unwrap()
    }

    #[test]
    fn reduce_basics() {
        assert_eq!(reduce_profile(rate(1.0), &StepProfile::constant(o("x"))), Lottery::degenerate(o("x")));
        let l = reduce_profile(rate(LN_2), &StepProfile::prefix(o("x"), 1.0, o("y")).unwrap());
        assert!((l.get(&o("x")) - 0.5).abs() < 1e-15);
        assert!((l.get(&o("y")) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reduce_matches_level_set_mass() {
        let r = rate(0.6);
        let p = StepProfile::from_steps(o("a"), &[(0.5, o("b")), (1.25, o("a")), (3.0, o("c")), (4.0, o("b"))]).unwrap();
        let l = reduce_profile(r, &p);
        for x in ["a", "b", "c"] {
            assert!((l.get(&o(x)) - r.mass(&p.level_set(&o(x)))).abs() < 1e-15);
        }
    }

    #[test]
    fn mixture_edges() {
        let sp = StateSpace::new(["s", "t"]).unwrap();
        let a = LotteryAct::constant(sp.clone(), Lottery::degenerate(o("x")));
        let b = LotteryAct::constant(sp, Lottery::degenerate(o("y")));
        assert_eq!(mix(&a, &b, 1.0).unwrap().max_gap(&a).unwrap(), 0.0);
        assert_eq!(mix(&a, &b, 0.0).unwrap().max_gap(&b).unwrap(), 0.0);
        let m = mix(&a, &b, 0.5).unwrap();
        assert_eq!(m.lottery(1).get(&o("x")), 0.5);
        assert!(mix(&a, &b, 1.5).is_err());
    }

    #[test]
    fn realization_masses() {
        let r = rate(1.0);
        let i = TimeInterval::new(0.0, 2.0).unwrap();
        let one = realize_lottery(r, &i, &Lottery::degenerate(o("x"))).unwrap();
        assert_eq!(one, alloc::vec![(i, o("x"))]);
        let half = realize_lottery(r, &i, &Lottery::new([("x", 0.5), ("y", 0.5)]).unwrap()).unwrap();
        assert_eq!(half.len(), 2);
        assert!((half[0].0.hi() - r.quantile(r.interval_mass(&i) / 2.0).unwrap()).abs() < 1e-15);
        let n = Lottery::new([("a", 0.2), ("b", 0.5), ("c", 0.3)]).unwrap();
        let three = realize_lottery(r, &i, &n).unwrap();
        assert_eq!(three.len(), 3);
        for (piece, x) in &three {
            assert!((r.interval_mass(piece) - n.get(x) * r.interval_mass(&i)).abs() < 1e-15);
        }
    }

    #[test]
    fn realized_act_conditionals() {
        let sp = StateSpace::new(["s", "t"]).unwrap();
        let g = LotteryAct::new(
            sp,
            alloc::vec![Lottery::new([("x", 0.25), ("y", 0.75)]).unwrap(), Lottery::degenerate(o("z"))],
        )
        .unwrap();
        let h = realize_lottery_act(rate(2.0), 0.4, &g).unwrap();
        assert_eq!(h.outcome_at(1, 0.39), &o("z"));
        // filler is the first label appearing in g
        assert_eq!(h.outcome_at(1, 0.4), &o("x"));
        let back = conditional_act(rate(2.0), &h, 0.4).unwrap();
        assert!(back.max_gap(&g).unwrap() < 1e-15);
    }

    #[test]
    fn witness_edges() {
        let sp = StateSpace::new(["s", "t"]).unwrap();
        let r = rate(1.0);
        let f = GridAct::bet(sp.clone(), StateSet::singleton(0), o("x"), o("y"));
        let g = LotteryAct::constant(sp.clone(), Lottery::new([("x", 0.5), ("z", 0.5)]).unwrap());
        let (lhs, rhs) = independence_witness(r, 1e-9, &g, &f).unwrap();
        assert!(lhs.max_gap(&reduce_act(r, &f)).unwrap() < 1e-8);
        assert!(lhs.max_gap(&rhs).unwrap() < 1e-12);
        let c = GridAct::constant(sp.clone(), o("x"));
        let gx = LotteryAct::constant(sp, Lottery::degenerate(o("x")));
        let (lhs, rhs) = independence_witness(r, 0.7, &gx, &c).unwrap();
        assert_eq!(lhs.lottery(0), &Lottery::degenerate(o("x")));
        assert!(rhs.max_gap(&lhs).unwrap() < 1e-15);
    }

    #[test]
    fn aa_value_matches() {
        let sp = StateSpace::new(["s", "t"]).unwrap();
        let util = UtilityModel::new([("x", 3.0), ("y", -1.0)]).unwrap();
        let m = DseuModel::new(rate(0.9), util, Beliefs::on_space(&sp, &[0.4, 0.6]).unwrap());
        let c = GridAct::constant(sp.clone(), o("x"));
        assert_eq!(aa_value(&m, &c).unwrap(), 3.0);
        let bet = GridAct::bet(sp.clone(), StateSet::singleton(1), o("x"), o("y"));
        assert!((aa_value(&m, &bet).unwrap() - (0.6 * 3.0 - 0.4)).abs() < 1e-15);
        let f = GridAct::new(
            sp,
            alloc::vec![
                StepProfile::from_steps(o("y"), &[(0.3, o("x")), (1.1, o("y"))]).unwrap(),
                StepProfile::prefix(o("x"), 2.0, o("y")).unwrap(),
            ],
        )
        .unwrap();
        assert!((aa_value(&m, &f).unwrap() - m.act_value(&f).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn continuity() {
        let sp = StateSpace::new(["s", "t"]).unwrap();
        let util = UtilityModel::new([("x", 1.0), ("y", 0.0)]).unwrap();
        let m = DseuModel::new(rate(1.0), util, Beliefs::on_space(&sp, &[0.3, 0.7]).unwrap());
        let bet = GridAct::bet(sp, StateSet::singleton(0), o("x"), o("y"));
        let w = continuity_witness(&m, &bet, &o("x"), &o("y")).unwrap();
        assert!((w.alpha - 0.3).abs() < 1e-15);
        assert!(w.reduced.max_gap(&w.expected) < 1e-15);
    }
}

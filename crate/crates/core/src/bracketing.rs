//! Two-outcome brackets with value gap `1/N`.
//!
//! Utilities are normalized so the worst outcome of the alphabet scores 0 and
//! the best scores 1. A profile is cut into `N` utility bins; on bin `n` the
//! lower bracket pays the best outcome on a share `(n−1)/N` of the bin's mass
//! and the upper bracket on a share `n/N`. The shares are taken as left
//! portions of every interval of every bin, so the paying set is independent
//! of each bin under `ε_λ`.

use alloc::format;
use alloc::vec::Vec;

use crate::acts::{GridAct, Outcome, StateSet, StepProfile};
use crate::error::{Error, Result};
use crate::evaluate::{profile_value, DseuModel, UtilityModel};
use crate::exp_measure::{DiscountRate, TimeInterval, TimeSet};

/// Lower and upper brackets of a target.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketResult<T, B> {
    pub lower: T,
    pub upper: T,
    pub lower_value: f64,
    pub upper_value: f64,
    pub target_value: f64,
    /// `upper − lower` in normalized utility units.
    pub gap: f64,
    /// Bin `n` (0-based) holds normalized values in `[n/N, (n+1)/N)`.
    pub bins: Vec<B>,
    /// `selections[k]` pays the best outcome with mass share `k/N`.
    pub selections: Vec<TimeSet>,
    /// Worst and best outcomes of the alphabet.
    pub reference: (Outcome, Outcome),
}

impl<T, B> BracketResult<T, B> {
    /// `lower ≤ target ≤ upper` up to `tol` in original units.
    pub fn sandwiched(&self, tol: f64) -> bool {
        self.lower_value <= self.target_value + tol && self.target_value <= self.upper_value + tol
    }
}

pub type ProfileBracket = BracketResult<StepProfile, TimeSet>;
pub type ActBracket = BracketResult<GridAct, StateSet>;

struct Scale<'a> {
    worst: (&'a Outcome, f64),
    best: (&'a Outcome, f64),
}

impl<'a> Scale<'a> {
    fn of(util: &'a UtilityModel) -> Self {
        Scale { worst: util.worst(), best: util.best() }
    }

    fn normalize(&self, v: f64) -> f64 {
        (v - self.worst.1) / (self.best.1 - self.worst.1)
    }

    fn reference(&self) -> (Outcome, Outcome) {
        (self.worst.0.clone(), self.best.0.clone())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("number of bins must be ≥ 1"));
    }
    Ok(())
}

/// 0-based bin of a normalized value; the top bin is closed at 1.
fn bin_of(v: f64, n: usize) -> usize {
    ((v * n as f64).max(0.0) as usize).min(n - 1)
}

/// Time sets on which the normalized utility of `p` falls in each bin.
pub fn utility_bins(model: &DseuModel, p: &StepProfile, n: usize) -> Result<Vec<TimeSet>> {
    check_n(n)?;
    let scale = Scale::of(&model.util);
    let mut members: Vec<Vec<TimeInterval>> = alloc::vec![Vec::new(); n];
    for (i, x) in p.pieces() {
        members[bin_of(scale.normalize(model.util.get(x)?), n)].push(*i);
    }
    Ok(members.into_iter().map(TimeSet::from_intervals).collect())
}

/// Union over bins of left portions holding share `p_target` of each
/// interval's mass, so `ε_λ(B ∩ A) = p_target·ε_λ(A)` for every bin `A`.
pub fn independent_selection(rate: DiscountRate, bins: &[TimeSet], p_target: f64) -> Result<TimeSet> {
    if p_target >= 1.0 {
        return Err(Error::range("selection share must be < 1", p_target));
    }
    if !(p_target >= 0.0) {
        return Err(Error::domain(format!("selection share must be ≥ 0, got {p_target}")));
    }
    if p_target == 0.0 {
        return Ok(TimeSet::empty());
    }
    let mut picked = Vec::new();
    for bin in bins {
        for i in bin.intervals() {
            let parts = rate.split_interval_indexed(i, &[p_target, 1.0 - p_target])?;
            if let Some((0, left)) = parts.first() {
                picked.push(*left);
            }
        }
    }
    Ok(TimeSet::from_intervals(picked))
}

/// Brackets a profile between two-outcome profiles `1/N` apart.
pub fn bracket_profile(model: &DseuModel, p: &StepProfile, n: usize) -> Result<ProfileBracket> {
    let bins = utility_bins(model, p, n)?;
    let scale = Scale::of(&model.util);
    let (x0, x1) = scale.reference();
    let mut selections = Vec::with_capacity(n + 1);
    for k in 0..n {
        selections.push(independent_selection(model.rate, &bins, k as f64 / n as f64)?);
    }
    selections.push(TimeSet::whole());
    let mut low_set = TimeSet::empty();
    let mut high_set = TimeSet::empty();
    for (k, bin) in bins.iter().enumerate() {
        low_set = low_set.union(&selections[k].intersection(bin));
        high_set = high_set.union(&selections[k + 1].intersection(bin));
    }
    let lower = StepProfile::indicator(x1.clone(), &low_set, x0.clone());
    let upper = StepProfile::indicator(x1.clone(), &high_set, x0.clone());
    let lower_value = profile_value(model.rate, &model.util, &lower)?;
    let upper_value = profile_value(model.rate, &model.util, &upper)?;
    Ok(BracketResult {
        gap: scale.normalize(upper_value) - scale.normalize(lower_value),
        target_value: profile_value(model.rate, &model.util, p)?,
        lower,
        upper,
        lower_value,
        upper_value,
        bins,
        selections,
        reference: (x0, x1),
    })
}

/// Brackets an act by binning states on their normalized profile values and
/// paying the best outcome on `[0, t_k)` with `ε_λ[0, t_k) = k/N`.
pub fn bracket_act(model: &DseuModel, f: &GridAct, n: usize) -> Result<ActBracket> {
    check_n(n)?;
    let scale = Scale::of(&model.util);
    let (x0, x1) = scale.reference();
    let mut selections = Vec::with_capacity(n + 1);
    let mut ladder = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let (set, profile) = if k == n {
            (TimeSet::whole(), StepProfile::constant(x1.clone()))
        } else {
            let t = model.rate.quantile(k as f64 / n as f64)?;
            let set = if t > 0.0 { TimeSet::interval(TimeInterval::new(0.0, t)?) } else { TimeSet::empty() };
            (set, StepProfile::prefix(x1.clone(), t, x0.clone())?)
        };
        selections.push(set);
        ladder.push(profile);
    }
    let mut bins = alloc::vec![StateSet::empty(); n];
    let mut low = Vec::with_capacity(f.space().len());
    let mut high = Vec::with_capacity(f.space().len());
    for (s, p) in f.profiles().iter().enumerate() {
        let k = bin_of(scale.normalize(profile_value(model.rate, &model.util, p)?), n);
        bins[k] = bins[k].with(s);
        low.push(ladder[k].clone());
        high.push(ladder[k + 1].clone());
    }
    let lower = GridAct::new(f.space().clone(), low)?;
    let upper = GridAct::new(f.space().clone(), high)?;
    let lower_value = model.act_value(&lower)?;
    let upper_value = model.act_value(&upper)?;
    Ok(BracketResult {
        gap: scale.normalize(upper_value) - scale.normalize(lower_value),
        target_value: model.act_value(f)?,
        lower,
        upper,
        lower_value,
        upper_value,
        bins,
        selections,
        reference: (x0, x1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acts::StateSpace;
    use crate::evaluate::Beliefs;
    use crate::ErrorKind;

    fn o(s: &str) -> Outcome {
        Outcome::new(s)
    }

    fn model(lambda: f64) -> DseuModel {
        let sp = StateSpace::new(["a"]).unwrap();
        let util = UtilityModel::new([("lo", -1.0), ("mid", 0.5), ("hi", 3.0), ("q", 1.0)]).unwrap();
        DseuModel::new(DiscountRate::new(lambda).unwrap(), util, Beliefs::uniform(&sp))
    }

    #[test]
    fn one_bin_is_everything() {
        let m = model(1.0);
        let p = StepProfile::from_steps(o("mid"), &[(1.0, o("hi")), (2.0, o("lo"))]).unwrap();
        assert_eq!(utility_bins(&m, &p, 1).unwrap(), alloc::vec![TimeSet::whole()]);
        assert_eq!(utility_bins(&m, &p, 0).unwrap_err().kind(), ErrorKind::Domain);
    }

    #[test]
    fn two_outcome_bins_are_level_sets() {
        let m = model(1.0);
        let p = StepProfile::from_steps(o("lo"), &[(0.5, o("hi")), (2.0, o("lo"))]).unwrap();
        let bins = utility_bins(&m, &p, 2).unwrap();
        assert_eq!(bins[0], p.level_set(&o("lo")));
        assert_eq!(bins[1], p.level_set(&o("hi")));
    }

    #[test]
    fn selection_edges() {
        let r = DiscountRate::new(1.3).unwrap();
        let bins = [TimeSet::whole()];
        assert!(independent_selection(r, &bins, 0.0).unwrap().is_empty());
        let half = independent_selection(r, &bins, 0.5).unwrap();
        let expected = TimeSet::interval(TimeInterval::new(0.0, r.quantile(0.5).unwrap()).unwrap());
        assert_eq!(half.intervals().len(), 1);
        assert!((half.intervals()[0].hi() - expected.intervals()[0].hi()).abs() < 1e-15);
        assert_eq!(independent_selection(r, &bins, 1.0).unwrap_err().kind(), ErrorKind::Range);
    }

    #[test]
    fn selection_is_independent() {
        let m = model(0.8);
        let p = StepProfile::from_steps(
            o("mid"),
            &[(0.2, o("hi")), (0.9, o("lo")), (1.4, o("q")), (2.5, o("hi")), (4.0, o("mid"))],
        )
        .unwrap();
        let bins = utility_bins(&m, &p, 4).unwrap();
        let b = independent_selection(m.rate, &bins, 0.3).unwrap();
        assert!((m.rate.mass(&b) - 0.3).abs() < 1e-15);
        for a in &bins {
            let joint = m.rate.mass(&b.intersection(a));
            assert!((joint - m.rate.mass(&b) * m.rate.mass(a)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_profile_bracket() {
        let m = model(1.0);
        for n in [1, 3, 8] {
            let r = bracket_profile(&m, &StepProfile::constant(o("mid")), n).unwrap();
            assert!(r.sandwiched(1e-12));
            assert!(r.gap <= 1.0 / n as f64 + 1e-12);
        }
    }

    #[test]
    fn gap_halves_with_n() {
        let m = model(0.5);
        let steps: Vec<(f64, Outcome)> = (1..50)
            .map(|k| {
                let t = 0.1 * k as f64;
                let v = (-t * t).exp();
                let x = if v > 0.75 { "hi" } else if v > 0.5 { "q" } else if v > 0.25 { "mid" } else { "lo" };
                (t, o(x))
            })
            .collect();
        let p = StepProfile::from_steps(o("hi"), &steps).unwrap();
        let r16 = bracket_profile(&m, &p, 16).unwrap();
        assert!(r16.sandwiched(1e-12) && r16.gap <= 1.0 / 16.0 + 1e-12);
        let mut last = f64::INFINITY;
        for n in [2, 4, 8, 16, 32, 64] {
            let r = bracket_profile(&m, &p, n).unwrap();
            assert!(r.sandwiched(1e-12));
            assert!((r.gap - 1.0 / n as f64).abs() < 1e-12);
            assert!(r.gap < last);
            last = r.gap;
        }
    }

    #[test]
    fn act_bracket() {
        let sp = StateSpace::new(["a", "b", "c"]).unwrap();
        let util = UtilityModel::new([("lo", 0.0), ("hi", 1.0), ("mid", 0.4)]).unwrap();
        let m = DseuModel::new(DiscountRate::new(1.0).unwrap(), util, Beliefs::on_space(&sp, &[0.2, 0.5, 0.3]).unwrap());
        let f = GridAct::new(
            sp,
            alloc::vec![
                StepProfile::prefix(o("hi"), 0.4, o("mid")).unwrap(),
                StepProfile::constant(o("lo")),
                StepProfile::from_steps(o("mid"), &[(1.0, o("hi"))]).unwrap(),
            ],
        )
        .unwrap();
        let r = bracket_act(&m, &f, 10).unwrap();
        assert!(r.sandwiched(1e-12) && r.gap <= 0.1 + 1e-12);
        let one = bracket_act(&m, &f, 1).unwrap();
        assert_eq!(one.lower, GridAct::constant(f.space().clone(), o("lo")));
        assert_eq!(one.upper, GridAct::constant(f.space().clone(), o("hi")));
    }
}

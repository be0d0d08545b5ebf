//! Simulated decision makers.
//!
//! A [`PreferenceOracle`] answers pairwise comparisons of acts. The oracles
//! here all compare the numbers produced by a [`ValueFunctional`], reporting
//! indifference when the values are within a fixed band.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cell::Cell;
use core::fmt;

use crate::acts::{GridAct, StateSet, StateSpace, StepProfile};
use crate::error::{Error, Result};
use crate::evaluate::{profile_value, Beliefs, DseuModel, UtilityModel};
use crate::exp_measure::{DiscountRate, TimeInterval, TimeSet};

/// Largest state space a [`Capacity`] table supports.
pub const MAX_CAPACITY_STATES: usize = 20;

/// Tolerance for capacity normalization and monotonicity.
const CAPACITY_TOLERANCE: f64 = 1e-12;

/// Answer to "how does the first act compare to the second?".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Preference {
    StrictlyFirst,
    Indifferent,
    StrictlySecond,
}

impl Preference {
    /// The answer with the arguments swapped.
    #[must_use]
    pub fn reversed(self) -> Preference {
        match self {
            Preference::StrictlyFirst => Preference::StrictlySecond,
            Preference::Indifferent => Preference::Indifferent,
            Preference::StrictlySecond => Preference::StrictlyFirst,
        }
    }

    /// Weak preference for the first act.
    pub fn weakly_first(self) -> bool {
        self != Preference::StrictlySecond
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Preference::StrictlyFirst => "≻",
            Preference::Indifferent => "∼",
            Preference::StrictlySecond => "≺",
        }
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Black-box comparator on acts.
pub trait PreferenceOracle {
    fn compare(&self, f: &GridAct, g: &GridAct) -> Result<Preference>;

    /// Value gap below which the oracle reports indifference, when it has one.
    fn indifference_band(&self) -> f64;
}

impl<O: PreferenceOracle + ?Sized> PreferenceOracle for &O {
    fn compare(&self, f: &GridAct, g: &GridAct) -> Result<Preference> {
        (**self).compare(f, g)
    }

    fn indifference_band(&self) -> f64 {
        (**self).indifference_band()
    }
}

impl<O: PreferenceOracle + ?Sized> PreferenceOracle for Box<O> {
    fn compare(&self, f: &GridAct, g: &GridAct) -> Result<Preference> {
        (**self).compare(f, g)
    }

    fn indifference_band(&self) -> f64 {
        (**self).indifference_band()
    }
}

/// Numerical representation of a preference.
pub trait ValueFunctional {
    fn value(&self, f: &GridAct) -> Result<f64>;
}

impl<V: ValueFunctional + ?Sized> ValueFunctional for &V {
    fn value(&self, f: &GridAct) -> Result<f64> {
        (**self).value(f)
    }
}

impl ValueFunctional for DseuModel {
    fn value(&self, f: &GridAct) -> Result<f64> {
        self.act_value(f)
    }
}

/// Wraps a closure as a [`ValueFunctional`].
pub struct FnFunctional<F>(pub F);

impl<F: Fn(&GridAct) -> Result<f64>> ValueFunctional for FnFunctional<F> {
    fn value(&self, f: &GridAct) -> Result<f64> {
        (self.0)(f)
    }
}

/// Compares functional values, treating gaps `≤ band` as indifference.
#[derive(Debug, Clone)]
pub struct ThresholdOracle<V> {
    functional: V,
    band: f64,
}

impl<V: ValueFunctional> ThresholdOracle<V> {
    pub fn new(functional: V, band: f64) -> Result<Self> {
        if !(band >= 0.0) || !band.is_finite() {
            return Err(Error::domain(format!("indifference band must be finite and ≥ 0, got {band}")));
        }
        Ok(ThresholdOracle { functional, band })
    }

    pub fn functional(&self) -> &V {
        &self.functional
    }
}

impl<V: ValueFunctional> PreferenceOracle for ThresholdOracle<V> {
    fn compare(&self, f: &GridAct, g: &GridAct) -> Result<Preference> {
        let d = self.functional.value(f)? - self.functional.value(g)?;
        Ok(if d.abs() <= self.band {
            Preference::Indifferent
        } else if d > 0.0 {
            Preference::StrictlyFirst
        } else {
            Preference::StrictlySecond
        })
    }

    fn indifference_band(&self) -> f64 {
        self.band
    }
}

/// Discounted SEU agent.
pub fn seu_oracle(model: DseuModel, band: f64) -> Result<ThresholdOracle<DseuModel>> {
    ThresholdOracle::new(model, band)
}

/// Discounted-then-Choquet agent.
pub fn choquet_oracle(
    rate: DiscountRate,
    util: UtilityModel,
    capacity: Capacity,
    band: f64,
) -> Result<ThresholdOracle<ChoquetFunctional>> {
    ThresholdOracle::new(ChoquetFunctional { rate, util, capacity }, band)
}

/// The same agent with its indifference band widened by `inflation`.
pub fn noisy_oracle<V: ValueFunctional>(inner: ThresholdOracle<V>, inflation: f64) -> Result<ThresholdOracle<V>> {
    if !(inflation >= 0.0) {
        return Err(Error::domain(format!("band inflation must be ≥ 0, got {inflation}")));
    }
    ThresholdOracle::new(inner.functional, inner.band + inflation)
}

/// Forwards to an oracle and counts the queries.
pub struct CountingOracle<O> {
    inner: O,
    queries: Cell<usize>,
}

impl<O: PreferenceOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle { inner, queries: Cell::new(0) }
    }

    pub fn queries(&self) -> usize {
        self.queries.get()
    }

    pub fn reset(&self) {
        self.queries.set(0);
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: PreferenceOracle> PreferenceOracle for CountingOracle<O> {
    fn compare(&self, f: &GridAct, g: &GridAct) -> Result<Preference> {
        self.queries.set(self.queries.get() + 1);
        self.inner.compare(f, g)
    }

    fn indifference_band(&self) -> f64 {
        self.inner.indifference_band()
    }
}

/// Monotone, normalized set function on the subsets of a state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Capacity {
    space: StateSpace,
    table: Vec<f64>,
}

impl Capacity {
    /// From a function on subsets; validates the result.
    pub fn from_fn(space: StateSpace, nu: impl Fn(StateSet) -> f64) -> Result<Self> {
        let n = space.len();
        if n > MAX_CAPACITY_STATES {
            return Err(Error::validation(format!(
                "capacities support at most {MAX_CAPACITY_STATES} states, got {n}"
            )));
        }
        let table = StateSet::all_subsets(n).map(nu).collect();
        let cap = Capacity { space, table };
        cap.validate()?;
        Ok(cap)
    }

    /// From explicit values. `∅` and `S` may be omitted; every other subset
    /// must be listed.
    pub fn from_table(space: StateSpace, values: &BTreeMap<StateSet, f64>) -> Result<Self> {
        let n = space.len();
        let full = StateSet::full(n);
        for set in values.keys() {
            if !set.is_subset(full) {
                return Err(Error::validation(format!("capacity entry {:#b} is outside the state space", set.bits())));
            }
        }
        if n > MAX_CAPACITY_STATES {
            return Err(Error::validation(format!(
                "capacities support at most {MAX_CAPACITY_STATES} states, got {n}"
            )));
        }
        for set in StateSet::all_subsets(n) {
            if !set.is_empty() && set != full && !values.contains_key(&set) {
                let labels = space.labels(set);
                let names: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
                return Err(Error::validation(format!("capacity has no value for {{{}}}", names.join(","))));
            }
        }
        Capacity::from_fn(space, |set| {
            values.get(&set).copied().unwrap_or(if set.is_empty() { 0.0 } else { 1.0 })
        })
    }

    /// The capacity of a probability.
    pub fn additive(space: StateSpace, beliefs: &Beliefs) -> Result<Self> {
        let w = beliefs.weights(&space)?;
        Capacity::from_fn(space, |set| set.iter().map(|i| w[i]).sum())
    }

    /// `ν(A) = (1−ε)μ(A)` for `A ≠ S`, `ν(S) = 1`.
    pub fn contaminated(space: StateSpace, beliefs: &Beliefs, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::domain(format!("contamination must lie in [0, 1], got {epsilon}")));
        }
        let w = beliefs.weights(&space)?;
        let full = space.full();
        Capacity::from_fn(space, |set| {
            if set == full {
                1.0
            } else {
                (1.0 - epsilon) * set.iter().map(|i| w[i]).sum::<f64>()
            }
        })
    }

    fn validate(&self) -> Result<()> {
        let n = self.space.len();
        let full = StateSet::full(n);
        if self.table[0] != 0.0 {
            return Err(Error::validation(format!("capacity of ∅ must be 0, got {}", self.table[0])));
        }
        let top = self.table[full.bits() as usize];
        if (top - 1.0).abs() > CAPACITY_TOLERANCE {
            return Err(Error::validation(format!("capacity of the whole space must be 1, got {top}")));
        }
        for (bits, v) in self.table.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::validation(format!("capacity value {v} is not finite")));
            }
            for i in 0..n {
                let bigger = bits | (1 << i);
                if bigger != bits && self.table[bigger] < v - CAPACITY_TOLERANCE {
                    let small = self.space.labels(StateSet::from_bits(bits as u64));
                    return Err(Error::validation(format!(
                        "capacity is not monotone: adding `{}` to {:?} lowers it",
                        self.space.state(i),
                        small.iter().map(|s| s.as_str()).collect::<Vec<_>>()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn get(&self, set: StateSet) -> f64 {
        self.table[set.bits() as usize]
    }

    /// Whether `ν(A ∪ B) = ν(A) + ν(B)` for all disjoint `A, B`, within `tol`.
    pub fn is_additive(&self, tol: f64) -> bool {
        let n = self.space.len();
        StateSet::all_subsets(n).all(|a| {
            let singles: f64 = a.iter().map(|i| self.get(StateSet::singleton(i))).sum();
            (self.get(a) - singles).abs() <= tol
        })
    }

    /// Choquet integral of per-state values listed in state order.
    pub fn choquet(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.space.len());
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|a, b| values[*b].total_cmp(&values[*a]).then(a.cmp(b)));
        let mut upper = StateSet::empty();
        let mut prev = 0.0;
        let mut total = 0.0;
        for i in order {
            upper = upper.with(i);
            let nu = self.get(upper);
            total += values[i] * (nu - prev);
            prev = nu;
        }
        total
    }
}

/// Choquet integral over states of the discounted per-state values.
#[derive(Debug, Clone)]
pub struct ChoquetFunctional {
    pub rate: DiscountRate,
    pub util: UtilityModel,
    pub capacity: Capacity,
}

impl ValueFunctional for ChoquetFunctional {
    fn value(&self, f: &GridAct) -> Result<f64> {
        self.capacity.space.ensure_same(f.space())?;
        let values = f
            .profiles()
            .iter()
            .map(|p| profile_value(self.rate, &self.util, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.capacity.choquet(&values))
    }
}

/// Rank-dependent evaluation over time, expected over states.
///
/// Each profile is valued by a Choquet integral against the time capacity
/// `ν(A) = max(ε_{λ₁}(A), ε_{λ₂}(A))`. The capacity is not additive, so the
/// comparison of two disjoint time periods can depend on the stakes.
#[derive(Debug, Clone)]
pub struct DualRateFunctional {
    pub rates: (DiscountRate, DiscountRate),
    pub util: UtilityModel,
    pub beliefs: Beliefs,
}

impl DualRateFunctional {
    fn time_capacity(&self, set: &TimeSet) -> f64 {
        self.rates.0.mass(set).max(self.rates.1.mass(set))
    }

    pub fn profile_value(&self, p: &StepProfile) -> Result<f64> {
        let mut pieces: Vec<(f64, TimeInterval)> =
            p.pieces().iter().map(|(i, x)| Ok((self.util.get(x)?, *i))).collect::<Result<_>>()?;
        pieces.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut upper = Vec::with_capacity(pieces.len());
        let mut prev = 0.0;
        let mut total = 0.0;
        for (u, i) in pieces {
            upper.push(i);
            let nu = self.time_capacity(&TimeSet::from_intervals(upper.iter().copied()));
            total += u * (nu - prev);
            prev = nu;
        }
        Ok(total)
    }
}

impl ValueFunctional for DualRateFunctional {
    fn value(&self, f: &GridAct) -> Result<f64> {
        let w = self.beliefs.weights(f.space())?;
        let mut total = 0.0;
        for (w, p) in w.iter().zip(f.profiles()) {
            total += w * self.profile_value(p)?;
        }
        Ok(total)
    }
}

//! Acts on a finite state space and continuous time.
//!
//! A [`StepProfile`] is a deterministic act: a finite step function from
//! `[0, ∞)` to outcomes. A [`GridAct`] carries one profile per state. Both are
//! kept in canonical form (adjacent equal outcomes merged), so structural
//! equality is pointwise equality.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::exp_measure::{TimeInterval, TimeSet};

/// Largest supported state space; subsets are stored as 64-bit masks.
pub const MAX_STATES: usize = 64;

macro_rules! label_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(label: &str) -> Self {
                $name(Arc::from(label))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(Arc::from(s))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

label_type!(
    /// Opaque outcome label.
    Outcome
);
label_type!(
    /// Opaque state label.
    State
);

/// Ordered, non-empty list of distinct states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace(Arc<[State]>);

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<State>,
    {
        let states: Vec<State> = labels.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(Error::validation("state space must be non-empty"));
        }
        if states.len() > MAX_STATES {
            return Err(Error::validation(format!(
                "state space has {} states; at most {MAX_STATES} are supported",
                states.len()
            )));
        }
        let unique: BTreeSet<&State> = states.iter().collect();
        if unique.len() != states.len() {
            return Err(Error::validation("state labels must be unique"));
        }
        Ok(StateSpace(states.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn states(&self) -> &[State] {
        &self.0
    }

    pub fn state(&self, index: usize) -> &State {
        &self.0[index]
    }

    pub fn index_of(&self, state: &State) -> Result<usize> {
        self.0
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| Error::lookup(format!("unknown state `{state}`")))
    }

    pub fn full(&self) -> StateSet {
        StateSet::full(self.len())
    }

    /// Subset from labels.
    pub fn subset<'a, I>(&self, labels: I) -> Result<StateSet>
    where
        I: IntoIterator<Item = &'a State>,
    {
        let mut set = StateSet::empty();
        for s in labels {
            set = set.with(self.index_of(s)?);
        }
        Ok(set)
    }

    /// Labels of the members of `set`.
    pub fn labels(&self, set: StateSet) -> Vec<State> {
        set.iter().map(|i| self.0[i].clone()).collect()
    }

    pub(crate) fn ensure_same(&self, other: &StateSpace) -> Result<()> {
        if Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0 {
            Ok(())
        } else {
            Err(Error::validation("acts are defined on different state spaces"))
        }
    }
}

/// Subset of a [`StateSpace`], as a bit mask over state indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StateSet(u64);

impl StateSet {
    pub const fn empty() -> Self {
        StateSet(0)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(index: usize) -> Self {
        StateSet(1u64 << index)
    }

    pub const fn from_bits(bits: u64) -> Self {
        StateSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    #[must_use]
    pub fn with(self, index: usize) -> Self {
        StateSet(self.0 | (1u64 << index))
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 & (1u64 << index) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[must_use]
    pub fn union(self, other: StateSet) -> StateSet {
        StateSet(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: StateSet) -> StateSet {
        StateSet(self.0 & other.0)
    }

    /// Complement within a space of `n` states.
    #[must_use]
    pub fn complement(self, n: usize) -> StateSet {
        StateSet(!self.0 & StateSet::full(n).0)
    }

    pub fn is_disjoint(self, other: StateSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.0 & (1u64 << i) != 0)
    }

    /// Every subset of a space of `n` states, in mask order. Needs `n < 64`.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = StateSet> {
        assert!(n < 64, "cannot enumerate subsets of {n} states");
        (0..(1u64 << n)).map(StateSet)
    }
}

/// Finite step function `[0, ∞) → outcomes`, canonical form.
///
/// The pieces tile `[0, ∞)`: the first starts at 0, the last is unbounded and
/// each piece ends where the next starts. Adjacent pieces carry distinct
/// outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct StepProfile {
    pieces: Vec<(TimeInterval, Outcome)>,
}

impl StepProfile {
    pub fn constant(x: Outcome) -> Self {
        StepProfile { pieces: alloc::vec![(TimeInterval::whole(), x)] }
    }

    /// Validates that `pieces` tile `[0, ∞)` and merges equal neighbours.
    pub fn normalize(pieces: Vec<(TimeInterval, Outcome)>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::validation("a profile needs at least one piece"));
        };
        if first.0.lo() != 0.0 {
            return Err(Error::validation(format!("profile starts at {} instead of 0", first.0.lo())));
        }
        for w in pieces.windows(2) {
            if w[0].0.hi() != w[1].0.lo() {
                let kind = if w[0].0.hi() < w[1].0.lo() { "gap" } else { "overlap" };
                return Err(Error::validation(format!(
                    "{kind} between {} and {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if !pieces[pieces.len() - 1].0.is_unbounded() {
            return Err(Error::validation("the last piece of a profile must extend to ∞"));
        }
        Ok(Self::merged(pieces))
    }

    /// Builds from an initial outcome and `(time, outcome)` switches.
    ///
    /// Switch times must be non-decreasing; zero-length pieces are dropped and
    /// an infinite switch time is ignored.
    pub fn from_steps(initial: Outcome, steps: &[(f64, Outcome)]) -> Result<Self> {
        let mut pieces: Vec<(TimeInterval, Outcome)> = Vec::with_capacity(steps.len() + 1);
        let mut start = 0.0;
        let mut current = initial;
        for (t, x) in steps {
            if t.is_nan() || *t < start {
                return Err(Error::validation(format!("switch times must be non-decreasing, got {t} after {start}")));
            }
            if *t == f64::INFINITY {
                break;
            }
            if *t > start {
                pieces.push((TimeInterval::new(start, *t)?, current));
                start = *t;
            }
            current = x.clone();
        }
        pieces.push((TimeInterval::from(start)?, current));
        Ok(Self::merged(pieces))
    }

    /// `x` on `[0, t)` followed by `y`. `t = ∞` gives the constant `x`.
    pub fn prefix(x: Outcome, t: f64, y: Outcome) -> Result<Self> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::domain(format!("prefix length must be ≥ 0, got {t}")));
        }
        Self::from_steps(x, &[(t, y)])
    }

    /// `x_A y`: `x` on `a`, `y` elsewhere.
    pub fn indicator(x: Outcome, a: &TimeSet, y: Outcome) -> Self {
        let mut steps = Vec::with_capacity(2 * a.intervals().len());
        let mut initial = y.clone();
        for i in a.intervals() {
            if i.lo() == 0.0 {
                initial = x.clone();
            } else {
                steps.push((i.lo(), x.clone()));
            }
            if !i.is_unbounded() {
                steps.push((i.hi(), y.clone()));
            }
        }
        Self::from_steps(initial, &steps).expect("time-set boundaries are increasing")
    }

    fn merged(pieces: Vec<(TimeInterval, Outcome)>) -> Self {
        let mut out: Vec<(TimeInterval, Outcome)> = Vec::with_capacity(pieces.len());
        for (i, x) in pieces {
            match out.last_mut() {
                Some((last, y)) if *y == x => {
                    *last = TimeInterval::new(last.lo(), i.hi()).expect("merged piece is non-empty");
                }
                _ => out.push((i, x)),
            }
        }
        StepProfile { pieces: out }
    }

    pub fn pieces(&self) -> &[(TimeInterval, Outcome)] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_constant(&self) -> bool {
        self.pieces.len() == 1
    }

    /// Outcome at time `t ≥ 0`.
    pub fn outcome_at(&self, t: f64) -> &Outcome {
        let idx = self.pieces.partition_point(|(i, _)| i.lo() <= t);
        &self.pieces[idx.saturating_sub(1)].1
    }

    /// Interior switch times.
    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.pieces.iter().skip(1).map(|(i, _)| i.lo())
    }

    pub fn outcomes(&self) -> BTreeSet<&Outcome> {
        self.pieces.iter().map(|(_, x)| x).collect()
    }

    /// `{t : x(t) = outcome}`.
    pub fn level_set(&self, outcome: &Outcome) -> TimeSet {
        TimeSet::from_intervals(self.pieces.iter().filter(|(_, x)| x == outcome).map(|(i, _)| *i))
    }

    /// `self` before `t`, `suffix` shifted to start at `t` afterwards.
    pub fn splice_time(&self, t: f64, suffix: &StepProfile) -> Result<StepProfile> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("splice time must be ≥ 0, got {t}")));
        }
        if t == f64::INFINITY {
            return Ok(self.clone());
        }
        let mut pieces = Vec::with_capacity(self.pieces.len() + suffix.pieces.len());
        for (i, x) in &self.pieces {
            if i.lo() >= t {
                break;
            }
            pieces.push((TimeInterval::new(i.lo(), i.hi().min(t))?, x.clone()));
        }
        for (i, x) in &suffix.pieces {
            pieces.push((i.shifted(t), x.clone()));
        }
        // shifting can collapse very short pieces when t dwarfs them
        pieces.retain(|(i, _)| i.hi() > i.lo());
        Ok(Self::merged(pieces))
    }

    /// `self` on `a`, `other` off `a`.
    pub fn paste(&self, a: &TimeSet, other: &StepProfile) -> StepProfile {
        let mut cuts: Vec<f64> = self
            .breakpoints()
            .chain(other.breakpoints())
            .chain(a.boundaries())
            .filter(|t| *t > 0.0)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        let mut start = 0.0;
        for end in cuts.into_iter().chain(core::iter::once(f64::INFINITY)) {
            let src = if a.contains(start) { self } else { other };
            pieces.push((TimeInterval::new(start, end).expect("cuts are increasing"), src.outcome_at(start).clone()));
            start = end;
        }
        Self::merged(pieces)
    }

    /// Replaces every outcome through `map`.
    pub fn map_outcomes(&self, mut map: impl FnMut(&Outcome) -> Outcome) -> StepProfile {
        Self::merged(self.pieces.iter().map(|(i, x)| (*i, map(x))).collect())
    }
}

impl fmt::Display for StepProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, x)) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}→{x}")?;
        }
        Ok(())
    }
}

/// Rectangle event `E_S × E_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub states: StateSet,
    pub times: TimeSet,
}

impl Event {
    pub fn new(states: StateSet, times: TimeSet) -> Self {
        Event { states, times }
    }

    /// `E_S × [0, ∞)`.
    pub fn states(states: StateSet) -> Self {
        Event { states, times: TimeSet::whole() }
    }

    /// `S × E_T` for a space of `n` states.
    pub fn times(n: usize, times: TimeSet) -> Self {
        Event { states: StateSet::full(n), times }
    }

    pub fn empty() -> Self {
        Event { states: StateSet::empty(), times: TimeSet::empty() }
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty() || self.times.is_empty()
    }

    /// Complement, when it is again a rectangle: this needs one of the two
    /// sides to be full.
    pub fn complement(&self, n: usize) -> Option<Event> {
        let full_states = StateSet::full(n);
        if self.is_empty() {
            Some(Event::new(full_states, TimeSet::whole()))
        } else if self.times == TimeSet::whole() {
            Some(Event::states(self.states.complement(n)))
        } else if self.states == full_states {
            Some(Event::times(n, self.times.complement()))
        } else {
            None
        }
    }
}

/// An act constant on the cells of a finite state partition × finite time
/// partition: one step profile per state.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAct {
    space: StateSpace,
    profiles: Vec<StepProfile>,
}

impl GridAct {
    /// Profiles are listed in state order.
    pub fn new(space: StateSpace, profiles: Vec<StepProfile>) -> Result<Self> {
        if profiles.len() != space.len() {
            return Err(Error::validation(format!(
                "{} profiles for {} states",
                profiles.len(),
                space.len()
            )));
        }
        Ok(GridAct { space, profiles })
    }

    /// Profiles keyed by state label; every state must be covered.
    pub fn from_labeled<I>(space: StateSpace, profiles: I) -> Result<Self>
    where
        I: IntoIterator<Item = (State, StepProfile)>,
    {
        let mut slots: Vec<Option<StepProfile>> = alloc::vec![None; space.len()];
        for (s, p) in profiles {
            let idx = space.index_of(&s)?;
            if slots[idx].replace(p).is_some() {
                return Err(Error::validation(format!("state `{s}` has two profiles")));
            }
        }
        let profiles = slots
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::validation(format!("state `{}` has no profile", space.state(i)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(GridAct { space, profiles })
    }

    pub fn constant(space: StateSpace, x: Outcome) -> Self {
        Self::deterministic(space, StepProfile::constant(x))
    }

    /// The same profile at every state.
    pub fn deterministic(space: StateSpace, profile: StepProfile) -> Self {
        let profiles = alloc::vec![profile; space.len()];
        GridAct { space, profiles }
    }

    /// A time-constant act: one outcome per state.
    pub fn stochastic(space: StateSpace, outcomes: Vec<Outcome>) -> Result<Self> {
        let profiles = outcomes.into_iter().map(StepProfile::constant).collect();
        GridAct::new(space, profiles)
    }

    /// The bet `x_E y`: `x` forever on `E`, `y` forever elsewhere.
    pub fn bet(space: StateSpace, event: StateSet, x: Outcome, y: Outcome) -> Self {
        let profiles = (0..space.len())
            .map(|i| StepProfile::constant(if event.contains(i) { x.clone() } else { y.clone() }))
            .collect();
        GridAct { space, profiles }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn profiles(&self) -> &[StepProfile] {
        &self.profiles
    }

    pub fn profile(&self, index: usize) -> &StepProfile {
        &self.profiles[index]
    }

    /// `f(s, ·)`.
    pub fn restrict(&self, state: &State) -> Result<&StepProfile> {
        Ok(&self.profiles[self.space.index_of(state)?])
    }

    pub fn outcome_at(&self, state_index: usize, t: f64) -> &Outcome {
        self.profiles[state_index].outcome_at(t)
    }

    pub fn is_deterministic(&self) -> bool {
        self.profiles.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_stochastic(&self) -> bool {
        self.profiles.iter().all(StepProfile::is_constant)
    }

    pub fn outcomes(&self) -> BTreeSet<&Outcome> {
        self.profiles.iter().flat_map(|p| p.pieces().iter().map(|(_, x)| x)).collect()
    }

    pub fn map_profiles(&self, mut map: impl FnMut(usize, &StepProfile) -> StepProfile) -> GridAct {
        GridAct {
            space: self.space.clone(),
            profiles: self.profiles.iter().enumerate().map(|(i, p)| map(i, p)).collect(),
        }
    }
}

impl fmt::Display for GridAct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (s, p)) in self.space.states().iter().zip(&self.profiles).enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{s}: {p}")?;
        }
        Ok(())
    }
}

/// `h_t f`: `h` before time `t`, then `f` delayed by `t`.
pub fn splice_time(h: &GridAct, t: f64, f: &GridAct) -> Result<GridAct> {
    h.space.ensure_same(&f.space)?;
    let profiles = h
        .profiles
        .iter()
        .zip(&f.profiles)
        .map(|(hp, fp)| hp.splice_time(t, fp))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridAct { space: h.space.clone(), profiles })
}

/// `f_E g`: `f` on the rectangle `E`, `g` off it.
pub fn splice_event(f: &GridAct, event: &Event, g: &GridAct) -> Result<GridAct> {
    f.space.ensure_same(&g.space)?;
    let profiles = f
        .profiles
        .iter()
        .zip(&g.profiles)
        .enumerate()
        .map(|(i, (fp, gp))| {
            if !event.states.contains(i) || event.times.is_empty() {
                gp.clone()
            } else if event.times == TimeSet::whole() {
                fp.clone()
            } else {
                fp.paste(&event.times, gp)
            }
        })
        .collect();
    Ok(GridAct { space: f.space.clone(), profiles })
}

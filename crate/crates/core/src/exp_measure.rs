//! The exponential discount measure `ε_λ` on time.
//!
//! `ε_λ` is the probability measure on `[0, ∞)` with `ε_λ[0,t) = 1 − e^{−λt}`.
//! Measurable sets are restricted to finite unions of half-open intervals
//! ([`TimeSet`]); on those sets every mass, quantile and split is closed form.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::LN_2;
use core::fmt;

use crate::error::{Error, Result};

/// Tolerance on `Σ weights = 1` accepted by [`DiscountRate::split_interval`].
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Discount rate `λ > 0`, in units of 1/time.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DiscountRate(f64);

impl DiscountRate {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(DiscountRate(lambda))
        } else {
            Err(Error::domain(format!(
                "discount rate must be positive and finite, got {lambda}"
            )))
        }
    }

    /// The rate whose half-life (`e^{−λt} = 1/2`) is `t`.
    pub fn from_half_life(t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::domain(format!("half-life must be positive, got {t}")));
        }
        DiscountRate::new(LN_2 / t)
    }

    #[inline]
    pub fn lambda(self) -> f64 {
        self.0
    }

    pub fn half_life(self) -> f64 {
        LN_2 / self.0
    }

    /// `e^{−λt}`, the mass of `[t, ∞)`. Accepts `t = +∞`.
    #[inline]
    pub fn discount(self, t: f64) -> f64 {
        libm::exp(-self.0 * t)
    }

    /// `F_λ(t) = 1 − e^{−λt}`.
    pub fn cdf(self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::domain(format!("cdf needs a finite t ≥ 0, got {t}")));
        }
        Ok(-libm::expm1(-self.0 * t))
    }

    /// Inverse of [`cdf`](Self::cdf): `−ln(1−p)/λ` for `0 ≤ p < 1`.
    pub fn quantile(self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 0.0 {
            return Err(Error::domain(format!("quantile needs p ≥ 0, got {p}")));
        }
        if p >= 1.0 {
            return Err(Error::range("F_λ never attains 1; quantile needs p < 1", p));
        }
        Ok(-libm::log1p(-p) / self.0)
    }

    /// `ε_λ[lo, hi) = e^{−λ lo}·(1 − e^{−λ(hi−lo)})`.
    pub fn interval_mass(self, interval: &TimeInterval) -> f64 {
        let head = self.discount(interval.lo);
        if interval.hi == f64::INFINITY {
            head
        } else {
            head * -libm::expm1(-self.0 * (interval.hi - interval.lo))
        }
    }

    pub fn mass(self, set: &TimeSet) -> f64 {
        set.intervals.iter().map(|i| self.interval_mass(i)).sum()
    }

    /// Splits `interval` into consecutive sub-intervals whose masses are
    /// `weights[i] · ε_λ(interval)`. Zero-weight entries are dropped.
    pub fn split_interval(self, interval: &TimeInterval, weights: &[f64]) -> Result<Vec<TimeInterval>> {
        Ok(self
            .split_interval_indexed(interval, weights)?
            .into_iter()
            .map(|(_, piece)| piece)
            .collect())
    }

    /// Like [`split_interval`](Self::split_interval), but each piece carries
    /// the index of the weight it realizes.
    pub fn split_interval_indexed(
        self,
        interval: &TimeInterval,
        weights: &[f64],
    ) -> Result<Vec<(usize, TimeInterval)>> {
        if weights.is_empty() {
            return Err(Error::validation("split_interval needs at least one weight"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::validation(format!("weights must be finite and non-negative, got {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::validation(format!("weights sum to {total}, expected 1")));
        }
        // Mass of the whole interval relative to its own head e^{−λ lo}.
        let relative = if interval.hi == f64::INFINITY {
            1.0
        } else {
            -libm::expm1(-self.0 * (interval.hi - interval.lo))
        };
        let last_positive = weights.iter().rposition(|w| *w > 0.0).unwrap_or(0);

        let mut out = Vec::with_capacity(weights.len());
        let mut cumulative = 0.0;
        let mut start = interval.lo;
        for (i, w) in weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            cumulative += w;
            let end = if i == last_positive {
                interval.hi
            } else {
                let q = (cumulative * relative).min(relative);
                let b = interval.lo - libm::log1p(-q) / self.0;
                b.clamp(interval.lo, interval.hi)
            };
            if end > start {
                out.push((i, TimeInterval { lo: start, hi: end }));
                start = end;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for DiscountRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ={}", self.0)
    }
}

/// Half-open interval `[lo, hi)` with `0 ≤ lo < hi ≤ +∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInterval {
    lo: f64,
    hi: f64,
}

impl TimeInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && lo >= 0.0) {
            return Err(Error::validation(format!("interval start must be finite and ≥ 0, got {lo}")));
        }
        if hi.is_nan() || hi <= lo {
            return Err(Error::validation(format!("interval [{lo}, {hi}) is empty or malformed")));
        }
        Ok(TimeInterval { lo, hi })
    }

    /// `[lo, ∞)`.
    pub fn from(lo: f64) -> Result<Self> {
        TimeInterval::new(lo, f64::INFINITY)
    }

    /// `[0, ∞)`.
    pub const fn whole() -> Self {
        TimeInterval { lo: 0.0, hi: f64::INFINITY }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_unbounded(&self) -> bool {
        self.hi == f64::INFINITY
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t < self.hi
    }

    pub(crate) fn shifted(&self, t: f64) -> TimeInterval {
        TimeInterval { lo: self.lo + t, hi: self.hi + t }
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unbounded() {
            write!(f, "[{}, ∞)", self.lo)
        } else {
            write!(f, "[{}, {})", self.lo, self.hi)
        }
    }
}

/// A finite disjoint union of half-open intervals, kept sorted with no two
/// intervals touching.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSet {
    intervals: Vec<TimeInterval>,
}

impl TimeSet {
    pub const fn empty() -> Self {
        TimeSet { intervals: Vec::new() }
    }

    /// `[0, ∞)`.
    pub fn whole() -> Self {
        TimeSet { intervals: alloc::vec![TimeInterval::whole()] }
    }

    pub fn interval(interval: TimeInterval) -> Self {
        TimeSet { intervals: alloc::vec![interval] }
    }

    /// Union of arbitrary (possibly overlapping) intervals, in canonical form.
    pub fn from_intervals<I: IntoIterator<Item = TimeInterval>>(intervals: I) -> Self {
        let mut v: Vec<TimeInterval> = intervals.into_iter().collect();
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut out: Vec<TimeInterval> = Vec::with_capacity(v.len());
        for i in v {
            match out.last_mut() {
                Some(last) if i.lo <= last.hi => {
                    if i.hi > last.hi {
                        last.hi = i.hi;
                    }
                }
                _ => out.push(i),
            }
        }
        TimeSet { intervals: out }
    }

    pub fn intervals(&self) -> &[TimeInterval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        // intervals are sorted, so the candidate is the last one starting at or before t
        let idx = self.intervals.partition_point(|i| i.lo <= t);
        idx > 0 && self.intervals[idx - 1].contains(t)
    }

    pub fn union(&self, other: &TimeSet) -> TimeSet {
        TimeSet::from_intervals(self.intervals.iter().chain(other.intervals.iter()).copied())
    }

    pub fn intersection(&self, other: &TimeSet) -> TimeSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let a = self.intervals[i];
            let b = other.intervals[j];
            let lo = a.lo.max(b.lo);
            let hi = a.hi.min(b.hi);
            if lo < hi {
                out.push(TimeInterval { lo, hi });
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        TimeSet { intervals: out }
    }

    pub fn complement(&self) -> TimeSet {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for i in &self.intervals {
            if i.lo > cursor {
                out.push(TimeInterval { lo: cursor, hi: i.lo });
            }
            cursor = i.hi;
        }
        if cursor < f64::INFINITY {
            out.push(TimeInterval { lo: cursor, hi: f64::INFINITY });
        }
        TimeSet { intervals: out }
    }

    pub fn difference(&self, other: &TimeSet) -> TimeSet {
        self.intersection(&other.complement())
    }

    pub fn is_disjoint(&self, other: &TimeSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// Translation `t + A`.
    pub fn shifted(&self, t: f64) -> Result<TimeSet> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::domain(format!("shift needs a finite t ≥ 0, got {t}")));
        }
        Ok(TimeSet { intervals: self.intervals.iter().map(|i| i.shifted(t)).collect() })
    }

    /// Every finite interval endpoint, in increasing order.
    pub fn boundaries(&self) -> impl Iterator<Item = f64> + '_ {
        self.intervals
            .iter()
            .flat_map(|i| [i.lo, i.hi])
            .filter(|t| t.is_finite())
    }
}

impl fmt::Display for TimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (k, i) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

//! Random acts for audits and tests.
//!
//! Breakpoints are quantiles of the discount measure so that the early,
//! heavily weighted part of the horizon is well exercised.

use alloc::vec::Vec;

use rand::Rng;

use crate::acts::{GridAct, Outcome, StateSpace, StepProfile};
use crate::exp_measure::{DiscountRate, TimeInterval, TimeSet};

/// Largest prefix mass at which a breakpoint is drawn.
const TOP_MASS: f64 = 0.995;

/// Smallest mass between two drawn breakpoints.
const MIN_SPACING: f64 = 0.005;

/// `k` sorted masses in `(0, TOP_MASS)`, pairwise at least `MIN_SPACING`
/// apart and away from 0.
pub fn spaced_masses<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    loop {
        let mut ps: Vec<f64> = (0..k).map(|_| rng.gen_range(MIN_SPACING..TOP_MASS)).collect();
        ps.sort_by(f64::total_cmp);
        if ps.windows(2).all(|w| w[1] - w[0] >= MIN_SPACING) {
            return ps;
        }
    }
}

/// `k` breakpoint times drawn through the quantile of `rate`.
pub fn breakpoints<R: Rng + ?Sized>(rng: &mut R, rate: DiscountRate, k: usize) -> Vec<f64> {
    spaced_masses(rng, k)
        .into_iter()
        .map(|p| rate.quantile(p).expect("p < 1"))
        .collect()
}

pub fn pick<'a, R: Rng + ?Sized, T>(rng: &mut R, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// Step profile with 1 to `max_pieces` pieces over `outcomes`.
pub fn random_profile<R: Rng + ?Sized>(
    rng: &mut R,
    rate: DiscountRate,
    outcomes: &[Outcome],
    max_pieces: usize,
) -> StepProfile {
    let pieces = rng.gen_range(1..=max_pieces.max(1));
    let cuts = breakpoints(rng, rate, pieces - 1);
    let steps: Vec<(f64, Outcome)> = cuts.into_iter().map(|t| (t, pick(rng, outcomes).clone())).collect();
    StepProfile::from_steps(pick(rng, outcomes).clone(), &steps).expect("breakpoints are increasing")
}

/// Grid act with an independent random profile at every state.
pub fn random_act<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
    rate: DiscountRate,
    outcomes: &[Outcome],
    max_pieces: usize,
) -> GridAct {
    let profiles = (0..space.len()).map(|_| random_profile(rng, rate, outcomes, max_pieces)).collect();
    GridAct::new(space.clone(), profiles).expect("one profile per state")
}

/// Union of up to `max_intervals` intervals with quantile endpoints; the last
/// one may be unbounded.
pub fn random_time_set<R: Rng + ?Sized>(rng: &mut R, rate: DiscountRate, max_intervals: usize) -> TimeSet {
    let k = rng.gen_range(0..=max_intervals);
    let mut ends = breakpoints(rng, rate, 2 * k);
    if k > 0 && rng.gen_bool(0.2) {
        ends[2 * k - 1] = f64::INFINITY;
    }
    if k > 0 && rng.gen_bool(0.2) {
        ends[0] = 0.0;
    }
    TimeSet::from_intervals(
        ends.chunks(2)
            .map(|c| TimeInterval::new(c[0], c[1]).expect("endpoints are increasing")),
    )
}

/// Probability vector of length `n` with every entry positive.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut p: Vec<f64> = raw.iter().map(|r| r / total).collect();
    // push the rounding residue onto the last entry so the sum is 1
    let head: f64 = p[..n - 1].iter().sum();
    p[n - 1] = 1.0 - head;
    p
}

/// Labels `prefix0 … prefix{n-1}`.
pub fn labels(prefix: &str, n: usize) -> Vec<alloc::string::String> {
    (0..n).map(|i| alloc::format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn profiles_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rate = DiscountRate::new(0.7).unwrap();
        let xs = [Outcome::new("a"), Outcome::new("b"), Outcome::new("c")];
        for _ in 0..200 {
            let p = random_profile(&mut rng, rate, &xs, 6);
            assert!(p.len() <= 6);
            let masses: Vec<f64> = p.breakpoints().map(|t| rate.cdf(t).unwrap()).collect();
            assert!(masses.iter().all(|m| *m < TOP_MASS + 1e-12));
        }
    }

    #[test]
    fn simplex_sums_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..8 {
            let p = random_simplex(&mut rng, n);
            assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-15);
            assert!(p.iter().all(|x| *x > 0.0));
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let rate = DiscountRate::new(1.0).unwrap();
        let a = random_time_set(&mut ChaCha8Rng::seed_from_u64(5), rate, 4);
        let b = random_time_set(&mut ChaCha8Rng::seed_from_u64(5), rate, 4);
        assert_eq!(a, b);
    }
}

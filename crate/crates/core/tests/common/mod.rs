#![allow(dead_code)]

use dseu_core::sampling::{random_act, random_simplex};
use dseu_core::{Beliefs, DiscountRate, DseuModel, GridAct, Outcome, State, StateSpace, UtilityModel};
use rand::Rng;

pub fn space(n: usize) -> StateSpace {
    StateSpace::new((0..n).map(|i| State::from(format!("s{i}")))).unwrap()
}

pub fn outcomes(n: usize) -> Vec<Outcome> {
    (0..n).map(|i| Outcome::from(format!("o{i}"))).collect()
}

/// Random model on `n` states with `k ≥ 2` outcomes of distinct utility.
pub fn model<R: Rng>(rng: &mut R, n: usize, k: usize) -> (StateSpace, Vec<Outcome>, DseuModel) {
    let sp = space(n);
    let xs = outcomes(k);
    let mut us: Vec<f64> = (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect();
    us[0] = -5.5;
    us[k - 1] = 5.5;
    let util = UtilityModel::new(xs.iter().cloned().zip(us)).unwrap();
    let rate = DiscountRate::new(rng.gen_range(0.05..5.0)).unwrap();
    let beliefs = Beliefs::on_space(&sp, &random_simplex(rng, n)).unwrap();
    (sp, xs, DseuModel::new(rate, util, beliefs))
}

pub fn act<R: Rng>(rng: &mut R, sp: &StateSpace, m: &DseuModel, xs: &[Outcome], pieces: usize) -> GridAct {
    random_act(rng, sp, m.rate, xs, pieces)
}

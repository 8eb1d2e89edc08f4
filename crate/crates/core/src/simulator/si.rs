//! SI contact process on the dynamic graph.
//!
//! Only pairs with exactly one infected endpoint influence the infection
//! process, so those are the only pairs tracked. A susceptible–susceptible
//! pair is never observed while both ends stay susceptible; when one end
//! becomes infected its state is drawn from the exact law given the start
//! (stationary `p`, or the snapshot state relaxed to time `t`).
//!
//! For finite `beta` the pairs into a susceptible `j` are exchangeable, so
//! the state reduces to `c_j`, the number of on edges from infected nodes
//! to `j`. With `m` infected nodes, `j` gains an on edge at rate
//! `lambda (m - c_j)`, loses one at `mu c_j`, and is infected at `beta c_j`.
//!
//! For infinite `beta` every infected–susceptible pair is off between
//! events (an on pair would have transmitted already). The next event is an
//! infected–susceptible pair switching on, at total rate `lambda m S`, which
//! infects the susceptible endpoint together with its whole susceptible
//! component, found by breadth-first search over lazily drawn pairs.

use rand::Rng;

use super::trajectory::SiTrajectory;
use super::{validate_seeds, SiConfig, SiStart, StopRule};
use crate::collections::Fenwick;
use crate::error::{invalid, Result};
use crate::model::{derive_stationary, edge_on_probability, EdgeParams, GraphSnapshot, InfectionRate};
use crate::rng::exp_wait;

/// Conditional on-probability of a never-observed pair at time `t`.
enum PairLaw<'a> {
    Stationary(f64),
    Snapshot { graph: &'a GraphSnapshot, params: EdgeParams },
}

impl PairLaw<'_> {
    fn at(&self, t: f64) -> Result<PairProbs<'_>> {
        Ok(match self {
            PairLaw::Stationary(p) => PairProbs {
                graph: None,
                if_on: *p,
                if_off: *p,
            },
            PairLaw::Snapshot { graph, params } => PairProbs {
                graph: Some(graph),
                if_on: edge_on_probability(true, t, params)?,
                if_off: edge_on_probability(false, t, params)?,
            },
        })
    }
}

struct PairProbs<'a> {
    graph: Option<&'a GraphSnapshot>,
    if_on: f64,
    if_off: f64,
}

impl PairProbs<'_> {
    fn prob(&self, i: usize, j: usize) -> f64 {
        match self.graph {
            Some(g) if g.contains(i, j) => self.if_on,
            _ => self.if_off,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, i: usize, j: usize, rng: &mut R) -> bool {
        let q = self.prob(i, j);
        q >= 1.0 || (q > 0.0 && rng.random::<f64>() < q)
    }
}

fn pair_law(config: &SiConfig) -> Result<PairLaw<'_>> {
    Ok(match &config.start {
        SiStart::Stationary => PairLaw::Stationary(derive_stationary(&config.params)?.p),
        SiStart::Snapshot(graph) => PairLaw::Snapshot {
            graph,
            params: config.params,
        },
    })
}

struct Recorder {
    jumps: Vec<(f64, usize)>,
    infections: Vec<(f64, usize)>,
}

impl Recorder {
    fn new(seeds: &[usize]) -> Self {
        Self {
            jumps: vec![(0.0, seeds.len())],
            infections: seeds.iter().map(|&s| (0.0, s)).collect(),
        }
    }

    fn infect(&mut self, t: f64, v: usize) {
        self.infections.push((t, v));
    }

    /// Closes a jump if the infected count moved.
    fn jump(&mut self, t: f64) {
        let x = self.infections.len();
        if self.jumps.last().is_some_and(|&(_, last)| last < x) {
            self.jumps.push((t, x));
        }
    }

    fn finish(self, n: usize, end_time: f64) -> SiTrajectory {
        SiTrajectory {
            n,
            jumps: self.jumps,
            infections: self.infections,
            end_time,
        }
    }
}

/// Simulates SI from `config.seeds` until the stop rule fires, everyone is
/// infected, or no further infection is possible.
pub fn simulate_si<R: Rng + ?Sized>(config: &SiConfig, rng: &mut R) -> Result<SiTrajectory> {
    config.validate()?;
    match config.beta {
        InfectionRate::Finite(beta) => {
            if !(beta > 0.0) || !beta.is_finite() {
                return Err(invalid("beta", format!("must be finite and > 0, got {beta}")));
            }
            simulate_finite(config, beta, rng)
        }
        InfectionRate::Infinite => simulate_infinite(config, rng),
    }
}

fn end_time(stop: &StopRule, t: f64) -> f64 {
    stop.horizon.unwrap_or(t)
}

fn simulate_finite<R: Rng + ?Sized>(config: &SiConfig, beta: f64, rng: &mut R) -> Result<SiTrajectory> {
    let n = config.n;
    let law = pair_law(config)?;
    let lambda = if config.params.is_instant_removal() {
        // An edge that vanishes on arrival never carries a finite-rate infection.
        0.0
    } else {
        config.params.lambda()
    };
    let mu = config.params.mu().unwrap_or(0.0);
    let limit = config.stop.time_limit();

    let mut infected = vec![false; n];
    for &s in &config.seeds {
        infected[s] = true;
    }
    let mut m = config.seeds.len() as i64;
    let mut c = vec![0i64; n];
    let probs = law.at(0.0)?;
    for j in (0..n).filter(|&j| !infected[j]) {
        c[j] = config.seeds.iter().filter(|&&i| probs.draw(i, j, rng)).count() as i64;
    }
    let build = |infected: &[bool], c: &[i64], m: i64| {
        let on: Vec<i64> = (0..n).map(|j| if infected[j] { 0 } else { c[j] }).collect();
        let off: Vec<i64> = (0..n).map(|j| if infected[j] { 0 } else { m - c[j] }).collect();
        (Fenwick::from_weights(&on), Fenwick::from_weights(&off))
    };
    let (mut on_tree, mut off_tree) = build(&infected, &c, m);
    let mut on_total = on_tree.total();
    let mut off_total = off_tree.total();

    let mut rec = Recorder::new(&config.seeds);
    let mut t = 0.0;
    loop {
        if config.stop.reached(m as usize) || m as usize == n {
            return Ok(rec.finish(n, t));
        }
        let up = lambda * off_total as f64;
        let down = mu * on_total as f64;
        let infect = beta * on_total as f64;
        let rate = up + down + infect;
        if rate == 0.0 {
            return Ok(rec.finish(n, end_time(&config.stop, t)));
        }
        let next = t + exp_wait(rng, rate);
        if next > limit {
            return Ok(rec.finish(n, limit));
        }
        t = next;
        let u = rng.random::<f64>() * rate;
        if u < up {
            let j = off_tree.search(rng.random_range(0..off_total));
            c[j] += 1;
            on_tree.add(j, 1);
            off_tree.add(j, -1);
            on_total += 1;
            off_total -= 1;
        } else if u < up + down {
            let j = on_tree.search(rng.random_range(0..on_total));
            c[j] -= 1;
            on_tree.add(j, -1);
            off_tree.add(j, 1);
            on_total -= 1;
            off_total += 1;
        } else {
            let k = on_tree.search(rng.random_range(0..on_total));
            infected[k] = true;
            m += 1;
            rec.infect(t, k);
            rec.jump(t);
            let probs = law.at(t)?;
            for j in (0..n).filter(|&j| !infected[j]) {
                if probs.draw(k, j, rng) {
                    c[j] += 1;
                }
            }
            (on_tree, off_tree) = build(&infected, &c, m);
            on_total = on_tree.total();
            off_total = off_tree.total();
        }
    }
}

/// Infects every susceptible reachable from `queue` through pairs that are
/// on at time `t`, drawing each pair the first time it is examined.
fn absorb_components<R: Rng + ?Sized>(
    mut queue: Vec<usize>,
    susceptible: &mut Vec<usize>,
    probs: &PairProbs<'_>,
    t: f64,
    rec: &mut Recorder,
    rng: &mut R,
) {
    while let Some(u) = queue.pop() {
        let mut idx = 0;
        while idx < susceptible.len() {
            let v = susceptible[idx];
            if probs.draw(u, v, rng) {
                susceptible.swap_remove(idx);
                rec.infect(t, v);
                queue.push(v);
            } else {
                idx += 1;
            }
        }
    }
}

fn simulate_infinite<R: Rng + ?Sized>(config: &SiConfig, rng: &mut R) -> Result<SiTrajectory> {
    let n = config.n;
    let law = pair_law(config)?;
    let lambda = config.params.lambda();
    let limit = config.stop.time_limit();

    let mut is_seed = vec![false; n];
    for &s in &config.seeds {
        is_seed[s] = true;
    }
    let mut susceptible: Vec<usize> = (0..n).filter(|&v| !is_seed[v]).collect();
    let mut rec = Recorder::new(&config.seeds);
    absorb_components(config.seeds.clone(), &mut susceptible, &law.at(0.0)?, 0.0, &mut rec, rng);
    rec.jump(0.0);

    let mut t = 0.0;
    loop {
        let m = n - susceptible.len();
        if config.stop.reached(m) || susceptible.is_empty() {
            return Ok(rec.finish(n, t));
        }
        let rate = lambda * m as f64 * susceptible.len() as f64;
        if rate == 0.0 {
            return Ok(rec.finish(n, end_time(&config.stop, t)));
        }
        let next = t + exp_wait(rng, rate);
        if next > limit {
            return Ok(rec.finish(n, limit));
        }
        t = next;
        let j = susceptible.swap_remove(rng.random_range(0..susceptible.len()));
        rec.infect(t, j);
        absorb_components(vec![j], &mut susceptible, &law.at(t)?, t, &mut rec, rng);
        rec.jump(t);
    }
}

/// Infinitely fast edges: a static complete graph with per-pair rate
/// `beta p`, so `m` infected become `m + 1` at rate `beta p m (n - m)`.
pub fn simulate_si_alpha_inf<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    beta: f64,
    seeds: &[usize],
    stop: &StopRule,
    rng: &mut R,
) -> Result<SiTrajectory> {
    if n == 0 {
        return Err(invalid("n", "must be >= 1"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid("p", format!("must lie in (0, 1], got {p}")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid("beta", format!("must be finite and > 0, got {beta}")));
    }
    validate_seeds(n, seeds)?;
    stop.validate()?;
    let limit = stop.time_limit();
    let mut is_seed = vec![false; n];
    for &s in seeds {
        is_seed[s] = true;
    }
    let mut susceptible: Vec<usize> = (0..n).filter(|&v| !is_seed[v]).collect();
    let mut rec = Recorder::new(seeds);
    let mut t = 0.0;
    loop {
        let m = n - susceptible.len();
        if stop.reached(m) || susceptible.is_empty() {
            return Ok(rec.finish(n, t));
        }
        let rate = beta * p * m as f64 * susceptible.len() as f64;
        let next = t + exp_wait(rng, rate);
        if next > limit {
            return Ok(rec.finish(n, limit));
        }
        t = next;
        let j = susceptible.swap_remove(rng.random_range(0..susceptible.len()));
        rec.infect(t, j);
        rec.jump(t);
    }
}

//! Preferential attachment with node removal, in discrete steps.
//!
//! Each step first removes one node according to the lifespan policy (its
//! edges leave with it) and then adds a node that links to `m` distinct
//! existing nodes chosen with probability proportional to degree. The node
//! count therefore stays at `n` once the initial graph has grown.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::policy::{HazardCalibration, LifespanPolicy};
use super::DegreeHistogram;
use crate::collections::IndexedSet;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaConfig {
    pub n: usize,
    pub m: usize,
    pub policy: LifespanPolicy,
    pub steps: u64,
    /// Also accumulate the degree table over this trailing fraction of steps.
    pub average_last: Option<f64>,
}

impl PaConfig {
    pub fn new(n: usize, m: usize, policy: LifespanPolicy, steps: u64) -> Self {
        Self {
            n,
            m,
            policy,
            steps,
            average_last: None,
        }
    }
}

/// Irregular events worth surfacing in run metadata.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaFlags {
    /// Steps where the degree sum was zero and a clique was seeded instead.
    pub reseeded: u64,
    /// Steps where fewer than `m` nodes had positive degree, so the draw was
    /// completed uniformly from degree-zero nodes.
    pub short_draws: u64,
}

/// Degree-sum bookkeeping for one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub removed_degree: usize,
    /// Edges created by the arriving node (`m` unless reseeded).
    pub added_edges: usize,
    pub degree_sum_before: usize,
    pub degree_sum_after: usize,
    pub reseeded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaRun {
    /// Snapshot at the final step.
    pub histogram: DegreeHistogram,
    /// Node-step counts pooled over the trailing window, when requested.
    pub averaged: Option<DegreeHistogram>,
    pub flags: PaFlags,
    /// Degree sum averaged over all steps (twice the edge count).
    pub mean_degree_sum: f64,
    pub steps: u64,
}

/// The evolving network. Slots are reused: an arriving node takes the slot
/// of the node removed in the same step.
#[derive(Debug, Clone)]
pub struct PaNetwork {
    m: usize,
    policy: LifespanPolicy,
    step: i64,
    born: Vec<i64>,
    adj: Vec<Vec<u32>>,
    edges: IndexedSet<(u32, u32)>,
    degree_count: Vec<u64>,
    /// Slots in birth order; stale entries are skipped via `born`.
    queue: VecDeque<(u32, i64)>,
    /// Age classes for piecewise hazards; `old` holds ages >= breakpoint.
    young: IndexedSet<u32>,
    old: IndexedSet<u32>,
    old_cursor: VecDeque<(u32, i64)>,
    flags: PaFlags,
}

fn key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl PaNetwork {
    /// A clique on `m + 1` nodes grown by plain preferential attachment to
    /// `n` nodes. Initial nodes have ages `n, n-1, ..., 1`.
    pub fn new<R: Rng + ?Sized>(n: usize, m: usize, policy: LifespanPolicy, rng: &mut R) -> Result<Self> {
        if m == 0 {
            return Err(invalid("m", "must be >= 1"));
        }
        if n <= m {
            return Err(invalid("n", format!("must exceed m = {m}, got {n}")));
        }
        if n > u32::MAX as usize {
            return Err(invalid("n", "exceeds the u32 slot range"));
        }
        let mut net = Self {
            m,
            policy,
            step: 0,
            born: Vec::with_capacity(n),
            adj: Vec::with_capacity(n),
            edges: IndexedSet::new(),
            degree_count: vec![0; 2 * m + 2],
            queue: VecDeque::with_capacity(n + 1),
            young: IndexedSet::new(),
            old: IndexedSet::new(),
            old_cursor: VecDeque::new(),
            flags: PaFlags::default(),
        };
        for i in 0..n {
            let slot = i as u32;
            net.born.push(i as i64 - n as i64);
            net.adj.push(Vec::new());
            net.degree_count[0] += 1;
            if i <= m {
                for j in 0..i {
                    net.link(slot, j as u32);
                }
            } else {
                // Every earlier node has degree >= 1 here, so i > m candidates.
                let targets = net.preferential_targets(rng);
                for t in targets {
                    net.link(slot, t);
                }
            }
            net.enroll(slot);
        }
        net.refresh_classes();
        Ok(net)
    }

    pub fn n(&self) -> usize {
        self.born.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, slot: u32) -> usize {
        self.adj[slot as usize].len()
    }

    pub fn degree_sum(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn flags(&self) -> PaFlags {
        self.flags
    }

    pub fn age(&self, slot: u32) -> i64 {
        self.step - self.born[slot as usize]
    }

    pub fn histogram(&self) -> DegreeHistogram {
        DegreeHistogram::from_counts(
            self.degree_count.iter().enumerate().map(|(d, &c)| (d as u64, c)),
            self.m as u64,
        )
    }

    fn bump(&mut self, from: usize, to: usize) {
        self.degree_count[from] -= 1;
        if to >= self.degree_count.len() {
            self.degree_count.resize(to + 1, 0);
        }
        self.degree_count[to] += 1;
    }

    fn link(&mut self, a: u32, b: u32) {
        if self.edges.insert(key(a, b)) {
            for (x, y) in [(a, b), (b, a)] {
                let d = self.adj[x as usize].len();
                self.adj[x as usize].push(y);
                self.bump(d, d + 1);
            }
        }
    }

    fn enroll(&mut self, slot: u32) {
        let birth = self.born[slot as usize];
        self.queue.push_back((slot, birth));
        if let LifespanPolicy::HazardGamma(HazardCalibration::Piecewise { .. }) = self.policy {
            self.young.insert(slot);
            self.old_cursor.push_back((slot, birth));
        }
    }

    fn is_current(&self, slot: u32, birth: i64) -> bool {
        self.born[slot as usize] == birth
    }

    /// Moves nodes whose age reached the breakpoint into the old class.
    fn refresh_classes(&mut self) {
        let LifespanPolicy::HazardGamma(HazardCalibration::Piecewise { breakpoint, .. }) = self.policy else {
            return;
        };
        while let Some(&(slot, birth)) = self.old_cursor.front() {
            if !self.is_current(slot, birth) {
                self.old_cursor.pop_front();
                continue;
            }
            if ((self.step - birth) as f64) < breakpoint {
                break;
            }
            self.old_cursor.pop_front();
            self.young.remove(&slot);
            self.old.insert(slot);
        }
    }

    fn oldest(&mut self) -> u32 {
        while let Some(&(slot, birth)) = self.queue.front() {
            if self.is_current(slot, birth) {
                return slot;
            }
            self.queue.pop_front();
        }
        unreachable!("the network is never empty")
    }

    fn choose_victim<R: Rng + ?Sized>(&mut self, rng: &mut R) -> u32 {
        let n = self.n();
        match self.policy {
            LifespanPolicy::Exponential => rng.random_range(0..n) as u32,
            LifespanPolicy::Fifo => self.oldest(),
            LifespanPolicy::HazardGamma(HazardCalibration::Truncated { max_age, .. }) => {
                let oldest = self.oldest();
                if self.age(oldest) as f64 >= max_age {
                    oldest
                } else {
                    rng.random_range(0..n) as u32
                }
            }
            LifespanPolicy::HazardGamma(HazardCalibration::Piecewise {
                young_hazard,
                tail_hazard,
                ..
            }) => {
                let wy = young_hazard * self.young.len() as f64;
                let wo = tail_hazard * self.old.len() as f64;
                let pick_young = rng.random::<f64>() * (wy + wo) < wy;
                let class = if pick_young && !self.young.is_empty() || self.old.is_empty() {
                    &self.young
                } else {
                    &self.old
                };
                class.sample(rng).expect("some class is non-empty")
            }
        }
    }

    /// Detaches every edge of `slot`; returns its former degree.
    fn isolate(&mut self, slot: u32) -> usize {
        let neighbors = std::mem::take(&mut self.adj[slot as usize]);
        let d = neighbors.len();
        for &v in &neighbors {
            self.edges.remove(&key(slot, v));
            let list = &mut self.adj[v as usize];
            let pos = list.iter().position(|&x| x == slot).expect("adjacency is symmetric");
            list.swap_remove(pos);
            let dv = list.len();
            self.bump(dv + 1, dv);
        }
        self.bump(d, 0);
        d
    }

    /// `m` distinct degree-weighted targets among slots `0..limit` except `me`.
    fn draw_targets<R: Rng + ?Sized>(&mut self, me: u32, limit: usize, rng: &mut R) -> Vec<u32> {
        let positive = (0..limit as u32).filter(|&v| v != me && self.degree(v) > 0).count();
        let mut chosen: Vec<u32> = Vec::with_capacity(self.m);
        if positive > self.m {
            return self.preferential_targets(rng);
        }
        // Every positive-degree node is taken; pad uniformly.
        chosen.extend((0..limit as u32).filter(|&v| v != me && self.degree(v) > 0));
        if chosen.len() < self.m {
            self.flags.short_draws += 1;
            while chosen.len() < self.m {
                let v = rng.random_range(0..limit) as u32;
                if v != me && !chosen.contains(&v) {
                    chosen.push(v);
                }
            }
        }
        chosen
    }

    /// `m` distinct endpoints of uniformly drawn edges. Requires more than
    /// `m` nodes of positive degree.
    fn preferential_targets<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        let mut chosen = Vec::with_capacity(self.m);
        while chosen.len() < self.m {
            let (a, b) = self.edges.sample(rng).expect("edges exist");
            let v = if rng.random::<bool>() { a } else { b };
            if !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        chosen
    }

    /// Positive-degree count, cheap form used once the network is full.
    fn positive_degree_nodes(&self) -> usize {
        self.n() - self.degree_count[0] as usize
    }

    /// One removal followed by one preferential arrival.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> StepReport {
        self.step += 1;
        self.refresh_classes();
        let degree_sum_before = self.degree_sum();
        let victim = self.choose_victim(rng);
        let removed_degree = self.isolate(victim);
        self.young.remove(&victim);
        self.old.remove(&victim);
        self.born[victim as usize] = self.step;

        let reseeded = self.edges.is_empty();
        let added_before = self.edges.len();
        if reseeded {
            self.flags.reseeded += 1;
            let mut clique = vec![victim];
            while clique.len() <= self.m {
                let v = rng.random_range(0..self.n()) as u32;
                if !clique.contains(&v) {
                    clique.push(v);
                }
            }
            for i in 0..clique.len() {
                for j in 0..i {
                    self.link(clique[i], clique[j]);
                }
            }
        } else {
            // The victim now has degree 0, so it is never drawn from the
            // edge list.
            let targets = if self.positive_degree_nodes() > self.m {
                self.preferential_targets(rng)
            } else {
                self.draw_targets(victim, self.n(), rng)
            };
            for t in targets {
                self.link(victim, t);
            }
        }
        self.enroll(victim);
        StepReport {
            removed_degree,
            added_edges: self.edges.len() - added_before,
            degree_sum_before,
            degree_sum_after: self.degree_sum(),
            reseeded,
        }
    }

    /// Adjacency symmetry, edge-set agreement and degree-table agreement.
    pub fn check_invariants(&self) -> Result<()> {
        let mut table = vec![0u64; self.degree_count.len()];
        let mut endpoints = 0;
        for (v, list) in self.adj.iter().enumerate() {
            for &w in list {
                if !self.edges.contains(&key(v as u32, w)) {
                    return Err(Error::Numerical(format!("adjacency ({v}, {w}) missing from edge set")));
                }
            }
            endpoints += list.len();
            if list.len() >= table.len() {
                return Err(Error::Numerical("degree table too short".into()));
            }
            table[list.len()] += 1;
        }
        if endpoints != 2 * self.edges.len() {
            return Err(Error::Numerical("edge set and adjacency sizes disagree".into()));
        }
        if table != self.degree_count {
            return Err(Error::Numerical("incremental degree table drifted".into()));
        }
        Ok(())
    }
}

/// Grows the initial graph and then runs `steps` removal/arrival steps.
pub fn simulate_pa_turnover<R: Rng + ?Sized>(config: &PaConfig, rng: &mut R) -> Result<PaRun> {
    if let Some(f) = config.average_last {
        if !(f > 0.0 && f <= 1.0) {
            return Err(invalid("average_last", format!("must lie in (0, 1], got {f}")));
        }
    }
    let mut net = PaNetwork::new(config.n, config.m, config.policy, rng)?;
    let window_start = config
        .average_last
        .map(|f| config.steps - ((config.steps as f64 * f).ceil() as u64).min(config.steps));
    let mut pooled: Option<Vec<u64>> = window_start.map(|_| Vec::new());
    let mut degree_sum_total = 0.0;
    for s in 0..config.steps {
        net.step(rng);
        degree_sum_total += net.degree_sum() as f64;
        if let (Some(start), Some(acc)) = (window_start, pooled.as_mut()) {
            if s >= start {
                if acc.len() < net.degree_count.len() {
                    acc.resize(net.degree_count.len(), 0);
                }
                for (a, &c) in acc.iter_mut().zip(&net.degree_count) {
                    *a += c;
                }
            }
        }
    }
    let mean_degree_sum = if config.steps == 0 {
        net.degree_sum() as f64
    } else {
        degree_sum_total / config.steps as f64
    };
    let averaged = pooled.map(|acc| {
        DegreeHistogram::from_counts(acc.into_iter().enumerate().map(|(d, c)| (d as u64, c)), config.m as u64)
    });
    Ok(PaRun {
        histogram: net.histogram(),
        averaged,
        flags: net.flags(),
        mean_degree_sum,
        steps: config.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::turnover::calibrate_hazard;

    #[test]
    fn zero_steps_gives_seed_graph() {
        let run = simulate_pa_turnover(&PaConfig::new(50, 2, LifespanPolicy::Exponential, 0), &mut seeded(1)).unwrap();
        assert_eq!(run.histogram.total(), 50);
        // Clique on 3 nodes (3 edges) plus 47 arrivals with 2 edges each.
        assert!((run.histogram.mean() - 2.0 * 97.0 / 50.0).abs() < 1e-12);
        assert_eq!(run.flags, PaFlags::default());
    }

    #[test]
    fn degree_sum_bookkeeping() {
        for policy in [
            LifespanPolicy::Exponential,
            LifespanPolicy::Fifo,
            LifespanPolicy::HazardGamma(calibrate_hazard(4.0, 200.0).unwrap()),
        ] {
            let mut rng = seeded(5);
            let mut net = PaNetwork::new(200, 3, policy, &mut rng).unwrap();
            for _ in 0..2000 {
                let r = net.step(&mut rng);
                assert!(!r.reseeded);
                assert_eq!(r.added_edges, 3);
                assert_eq!(r.degree_sum_after + 2 * r.removed_degree, r.degree_sum_before + 2 * 3);
            }
            net.check_invariants().unwrap();
            assert_eq!(net.histogram().total(), 200);
        }
    }

    #[test]
    fn fifo_removes_oldest() {
        let mut rng = seeded(2);
        let mut net = PaNetwork::new(30, 2, LifespanPolicy::Fifo, &mut rng).unwrap();
        for _ in 0..100 {
            let oldest = (0..30u32).max_by_key(|&s| net.age(s)).unwrap();
            net.step(&mut rng);
            assert_eq!(net.age(oldest), 0, "the oldest slot was recycled");
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let cfg = PaConfig::new(300, 2, LifespanPolicy::Exponential, 3000);
        let a = simulate_pa_turnover(&cfg, &mut seeded(11)).unwrap();
        let b = simulate_pa_turnover(&cfg, &mut seeded(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_configs() {
        assert!(PaNetwork::new(2, 2, LifespanPolicy::Fifo, &mut seeded(0)).is_err());
        assert!(PaNetwork::new(10, 0, LifespanPolicy::Fifo, &mut seeded(0)).is_err());
        let mut cfg = PaConfig::new(10, 2, LifespanPolicy::Fifo, 10);
        cfg.average_last = Some(1.5);
        assert!(simulate_pa_turnover(&cfg, &mut seeded(0)).is_err());
    }
}

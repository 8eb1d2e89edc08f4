//! Dynamic Erdős–Rényi graph with node births and deaths.
//!
//! Nodes arrive as a Poisson process of rate `n` and each lives an `Exp(1)`
//! lifetime. Every pair of living nodes carries a telegraph edge that starts
//! off when the younger node arrives; a departing node takes its edges.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::collections::IndexedSet;
use crate::error::{invalid, Error, Result};
use crate::model::{EdgeParams, GraphSnapshot};
use crate::rng::exp_wait;

/// Closed form printed for the steady-state edge probability of the
/// turnover graph: `p (1 - 1 / (lambda + mu + 1))`.
pub fn effective_edge_probability(p: f64, params: &EdgeParams) -> f64 {
    match params.relaxation_rate() {
        Some(rate) => p * (1.0 - 1.0 / (rate + 1.0)),
        None => p,
    }
}

/// Same quantity rederived with the pair lifetime `T ~ Exp(2)`:
/// `p (1 - E[exp(-(lambda + mu) T)]) = p (1 - 2 / (lambda + mu + 2))`.
pub fn effective_edge_probability_pair_lifetime(p: f64, params: &EdgeParams) -> f64 {
    match params.relaxation_rate() {
        Some(rate) => p * (1.0 - 2.0 / (rate + 2.0)),
        None => p,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnoverConfig {
    /// Birth rate, and the steady-state mean node count.
    pub n: usize,
    pub params: EdgeParams,
    pub horizon: f64,
    pub sample_interval: f64,
    /// Samples start at this time.
    pub burn_in: f64,
}

impl TurnoverConfig {
    pub fn new(n: usize, params: EdgeParams, horizon: f64) -> Self {
        Self {
            n,
            params,
            horizon,
            sample_interval: 1.0,
            burn_in: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnoverSample {
    pub time: f64,
    pub nodes: usize,
    pub edges: usize,
}

impl TurnoverSample {
    /// Edges per living pair, `None` with fewer than two nodes.
    pub fn pair_fraction(&self) -> Option<f64> {
        let pairs = self.nodes * self.nodes.saturating_sub(1) / 2;
        (pairs > 0).then(|| self.edges as f64 / pairs as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnoverTrajectory {
    pub samples: Vec<TurnoverSample>,
    /// Living nodes relabeled `0..N` at the horizon.
    pub final_graph: GraphSnapshot,
    /// Age of each node of `final_graph`.
    pub final_ages: Vec<f64>,
    pub events: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurnoverEvent {
    Birth(u32),
    Death { node: u32, degree: usize },
    EdgeOn(u32, u32),
    EdgeOff(u32, u32),
}

/// Event-driven state of the turnover graph. Node ids are reusable slots.
#[derive(Debug, Clone)]
pub struct TurnoverEr {
    birth_rate: f64,
    params: EdgeParams,
    time: f64,
    alive: IndexedSet<u32>,
    born: Vec<f64>,
    adj: Vec<Vec<u32>>,
    on: IndexedSet<(u32, u32)>,
    free: Vec<u32>,
}

fn key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl TurnoverEr {
    /// `n` nodes with stationary `Exp(1)` ages and no edges at time 0.
    pub fn new<R: Rng + ?Sized>(n: usize, params: EdgeParams, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "must be >= 1"));
        }
        let mut g = Self {
            birth_rate: n as f64,
            params,
            time: 0.0,
            alive: IndexedSet::new(),
            born: Vec::with_capacity(2 * n),
            adj: Vec::with_capacity(2 * n),
            on: IndexedSet::new(),
            free: Vec::new(),
        };
        for _ in 0..n {
            let slot = g.allocate(-exp_wait(rng, 1.0));
            g.alive.insert(slot);
        }
        Ok(g)
    }

    fn allocate(&mut self, born: f64) -> u32 {
        if let Some(slot) = self.free.pop() {
            self.born[slot as usize] = born;
            slot
        } else {
            self.born.push(born);
            self.adj.push(Vec::new());
            (self.born.len() - 1) as u32
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn node_count(&self) -> usize {
        self.alive.len()
    }

    pub fn edge_count(&self) -> usize {
        self.on.len()
    }

    pub fn alive_pairs(&self) -> usize {
        let n = self.alive.len();
        n * n.saturating_sub(1) / 2
    }

    fn up_rate(&self) -> f64 {
        if self.params.is_instant_removal() {
            return 0.0;
        }
        self.params.lambda() * (self.alive_pairs() - self.on.len()) as f64
    }

    fn down_rate(&self) -> f64 {
        self.params.mu().unwrap_or(0.0) * self.on.len() as f64
    }

    /// Advances to the next event if it happens by `until`; otherwise moves
    /// the clock to `until` and returns `None`.
    pub fn next_event<R: Rng + ?Sized>(&mut self, rng: &mut R, until: f64) -> Option<TurnoverEvent> {
        let death = self.alive.len() as f64;
        let up = self.up_rate();
        let down = self.down_rate();
        let total = self.birth_rate + death + up + down;
        let t = self.time + exp_wait(rng, total);
        if t > until {
            self.time = until;
            return None;
        }
        self.time = t;
        let mut u = rng.random::<f64>() * total;
        if u < self.birth_rate {
            let slot = self.allocate(t);
            self.alive.insert(slot);
            return Some(TurnoverEvent::Birth(slot));
        }
        u -= self.birth_rate;
        if u < death {
            let node = self.alive.sample(rng).expect("death rate implies a living node");
            let degree = self.kill(node);
            return Some(TurnoverEvent::Death { node, degree });
        }
        u -= death;
        if u < up {
            let (a, b) = self.sample_off_pair(rng);
            self.on.insert(key(a, b));
            self.adj[a as usize].push(b);
            self.adj[b as usize].push(a);
            return Some(TurnoverEvent::EdgeOn(a, b));
        }
        let (a, b) = self.on.sample(rng).expect("down rate implies an edge");
        self.unlink(a, b);
        Some(TurnoverEvent::EdgeOff(a, b))
    }

    fn unlink(&mut self, a: u32, b: u32) {
        self.on.remove(&key(a, b));
        for (x, y) in [(a, b), (b, a)] {
            let list = &mut self.adj[x as usize];
            let pos = list.iter().position(|&v| v == y).expect("adjacency is symmetric");
            list.swap_remove(pos);
        }
    }

    fn kill(&mut self, node: u32) -> usize {
        let neighbors = std::mem::take(&mut self.adj[node as usize]);
        for &v in &neighbors {
            self.on.remove(&key(node, v));
            let list = &mut self.adj[v as usize];
            let pos = list.iter().position(|&x| x == node).expect("adjacency is symmetric");
            list.swap_remove(pos);
        }
        self.alive.remove(&node);
        self.free.push(node);
        neighbors.len()
    }

    /// Uniform living pair that is currently off.
    fn sample_off_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, u32) {
        for _ in 0..256 {
            let a = self.alive.sample(rng).expect("pairs exist");
            let b = self.alive.sample(rng).expect("pairs exist");
            if a != b && !self.on.contains(&key(a, b)) {
                return key(a, b);
            }
        }
        // Dense graph: enumerate the off pairs.
        let nodes: Vec<u32> = self.alive.iter().copied().collect();
        let mut off = Vec::new();
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                if !self.on.contains(&key(a, b)) {
                    off.push(key(a, b));
                }
            }
        }
        off[rng.random_range(0..off.len())]
    }

    /// Every edge joins two living nodes and adjacency mirrors the edge set.
    pub fn check_invariants(&self) -> Result<()> {
        let mut endpoint_total = 0;
        for &(a, b) in self.on.iter() {
            if !self.alive.contains(&a) || !self.alive.contains(&b) {
                return Err(Error::Numerical(format!("dangling edge ({a}, {b})")));
            }
        }
        for &v in self.alive.iter() {
            for &w in &self.adj[v as usize] {
                if !self.on.contains(&key(v, w)) {
                    return Err(Error::Numerical(format!("adjacency ({v}, {w}) not in edge set")));
                }
            }
            endpoint_total += self.adj[v as usize].len();
        }
        if endpoint_total != 2 * self.on.len() {
            return Err(Error::Numerical("adjacency and edge set sizes disagree".into()));
        }
        Ok(())
    }

    /// Living nodes relabeled `0..N` with their ages.
    pub fn snapshot(&self) -> (GraphSnapshot, Vec<f64>) {
        let mut nodes: Vec<u32> = self.alive.iter().copied().collect();
        nodes.sort_unstable();
        let mut label = vec![usize::MAX; self.born.len()];
        for (i, &v) in nodes.iter().enumerate() {
            label[v as usize] = i;
        }
        let mut g = GraphSnapshot::empty(nodes.len());
        for &(a, b) in self.on.iter() {
            g.insert(label[a as usize], label[b as usize])
                .expect("living endpoints are labeled");
        }
        let ages = nodes.iter().map(|&v| self.time - self.born[v as usize]).collect();
        (g, ages)
    }

    fn sample(&self) -> TurnoverSample {
        TurnoverSample {
            time: self.time,
            nodes: self.alive.len(),
            edges: self.on.len(),
        }
    }
}

/// Runs the turnover graph to `config.horizon`, sampling `(t, N, E)` every
/// `sample_interval` from `burn_in` on.
pub fn simulate_turnover_er<R: Rng + ?Sized>(config: &TurnoverConfig, rng: &mut R) -> Result<TurnoverTrajectory> {
    if !(config.horizon > 0.0) || !config.horizon.is_finite() {
        return Err(invalid("horizon", format!("must be positive, got {}", config.horizon)));
    }
    if !(config.sample_interval > 0.0) {
        return Err(invalid("sample_interval", "must be positive"));
    }
    if !(config.burn_in >= 0.0) {
        return Err(invalid("burn_in", "must be >= 0"));
    }
    let mut g = TurnoverEr::new(config.n, config.params, rng)?;
    let mut samples = Vec::new();
    let mut events = 0u64;
    let mut next_sample = config.burn_in;
    while next_sample <= config.horizon {
        while g.next_event(rng, next_sample).is_some() {
            events += 1;
        }
        samples.push(g.sample());
        next_sample += config.sample_interval;
    }
    while g.next_event(rng, config.horizon).is_some() {
        events += 1;
    }
    let (final_graph, final_ages) = g.snapshot();
    Ok(TurnoverTrajectory {
        samples,
        final_graph,
        final_ages,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn printed_and_rederived_edge_probability() {
        let params = EdgeParams::new(0.5, 0.5).unwrap();
        assert!((effective_edge_probability(0.5, &params) - 0.25).abs() < 1e-15);
        assert!((effective_edge_probability_pair_lifetime(0.5, &params) - 0.5 / 3.0).abs() < 1e-15);
        assert_eq!(effective_edge_probability(0.0, &params), 0.0);
        let fast = EdgeParams::new(1e9, 1e9).unwrap();
        assert!((effective_edge_probability(0.5, &fast) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn no_edges_without_lambda() {
        let params = EdgeParams::new(0.0, 1.0).unwrap();
        let traj = simulate_turnover_er(&TurnoverConfig::new(30, params, 50.0), &mut seeded(3)).unwrap();
        assert!(traj.samples.iter().all(|s| s.edges == 0));
        assert_eq!(traj.final_graph.edge_count(), 0);
    }

    #[test]
    fn deaths_leave_no_dangling_edges() {
        let params = EdgeParams::new(0.4, 0.2).unwrap();
        let mut rng = seeded(9);
        let mut g = TurnoverEr::new(40, params, &mut rng).unwrap();
        let mut deaths = 0;
        while let Some(ev) = g.next_event(&mut rng, 30.0) {
            if let TurnoverEvent::Death { .. } = ev {
                deaths += 1;
                g.check_invariants().unwrap();
            }
        }
        assert!(deaths > 100);
        assert!(g.edge_count() > 0);
    }
}

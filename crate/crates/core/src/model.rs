//! Edge-rate algebra and the single-edge telegraph process.
//!
//! Each potential edge of the dynamic Erdős–Rényi graph is an independent
//! two-state chain: off → on at rate `lambda`, on → off at rate `mu`.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::exp_wait;

/// How an edge that is on gets removed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Removal {
    /// Exponential holding time with this rate.
    Rate(f64),
    /// The edge vanishes the instant it appears (`mu = inf`).
    Instant,
}

/// Rate pair of the telegraph process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeParams {
    lambda: f64,
    removal: Removal,
}

/// Stationary edge probability and cycle-completion rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stationary {
    pub p: f64,
    pub alpha: f64,
}

fn check_rate(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(invalid(name, format!("must be finite and >= 0, got {value}")));
    }
    Ok(())
}

impl EdgeParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        check_rate("lambda", lambda)?;
        check_rate("mu", mu)?;
        Ok(Self {
            lambda,
            removal: Removal::Rate(mu),
        })
    }

    /// Edges appear at `lambda` and disappear immediately.
    pub fn instant_removal(lambda: f64) -> Result<Self> {
        check_rate("lambda", lambda)?;
        Ok(Self {
            lambda,
            removal: Removal::Instant,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Finite removal rate, `None` under instant removal.
    pub fn mu(&self) -> Option<f64> {
        match self.removal {
            Removal::Rate(mu) => Some(mu),
            Removal::Instant => None,
        }
    }

    pub fn removal(&self) -> Removal {
        self.removal
    }

    pub fn is_instant_removal(&self) -> bool {
        matches!(self.removal, Removal::Instant)
    }

    /// `lambda + mu`, the relaxation rate toward stationarity.
    pub fn relaxation_rate(&self) -> Option<f64> {
        self.mu().map(|mu| self.lambda + mu)
    }

    /// Same process with both rates multiplied by `r`.
    pub fn scaled(&self, r: f64) -> Result<Self> {
        check_rate("scale", r)?;
        let removal = match self.removal {
            Removal::Rate(mu) => Removal::Rate(mu * r),
            Removal::Instant => Removal::Instant,
        };
        Ok(Self {
            lambda: self.lambda * r,
            removal,
        })
    }

    pub fn stationary(&self) -> Result<Stationary> {
        derive_stationary(self)
    }

    /// Steady-state expected degree `(n - 1) p`.
    pub fn expected_degree(&self, n: usize) -> Result<f64> {
        Ok((n.saturating_sub(1)) as f64 * self.stationary()?.p)
    }
}

/// `p = lambda / (lambda + mu)` and `alpha = lambda mu / (lambda + mu)`.
///
/// Instant removal gives `p = 0` and `alpha = lambda`.
pub fn derive_stationary(params: &EdgeParams) -> Result<Stationary> {
    let lambda = params.lambda;
    match params.removal {
        Removal::Instant => Ok(Stationary { p: 0.0, alpha: lambda }),
        Removal::Rate(mu) => {
            let total = lambda + mu;
            if total <= 0.0 {
                return Err(Error::DegenerateRates);
            }
            Ok(Stationary {
                p: lambda / total,
                alpha: mu * lambda / total,
            })
        }
    }
}

/// Inverse of [`derive_stationary`]: `lambda = alpha / (1 - p)`, `mu = alpha / p`.
pub fn derive_rates(p: f64, alpha: f64) -> Result<EdgeParams> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(invalid("p", format!("must lie in [0, 1], got {p}")));
    }
    check_rate("alpha", alpha)?;
    if p == 0.0 || p == 1.0 {
        return Err(Error::DegenerateProbability(p));
    }
    EdgeParams::new(alpha / (1.0 - p), alpha / p)
}

/// `Pr[e(t) = 1]` for an edge starting in `initial_on`:
/// `p + (1{initial_on} - p) exp(-(lambda + mu) t)`.
pub fn edge_on_probability(initial_on: bool, t: f64, params: &EdgeParams) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let start = if initial_on { 1.0 } else { 0.0 };
    if t == 0.0 {
        return Ok(start);
    }
    match params.removal {
        Removal::Instant => Ok(0.0),
        Removal::Rate(mu) => {
            let total = params.lambda + mu;
            if total == 0.0 {
                return Ok(start);
            }
            let p = params.lambda / total;
            Ok((p + (start - p) * (-total * t).exp()).clamp(0.0, 1.0))
        }
    }
}

/// Per-edge infection rate of the SI process; `Infinite` infects a whole
/// component the instant it touches an infected node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfectionRate {
    Finite(f64),
    Infinite,
}

impl InfectionRate {
    pub fn finite(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(invalid("beta", format!("must be finite and > 0, got {beta}")));
        }
        Ok(Self::Finite(beta))
    }

    pub fn scaled(&self, r: f64) -> Self {
        match *self {
            Self::Finite(beta) => Self::Finite(beta * r),
            Self::Infinite => Self::Infinite,
        }
    }
}

/// Unordered node pair stored as `(lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(usize, usize);

impl Edge {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(invalid("edge", format!("self-loop at node {i}")));
        }
        Ok(if i < j { Edge(i, j) } else { Edge(j, i) })
    }

    pub fn lo(&self) -> usize {
        self.0
    }

    pub fn hi(&self) -> usize {
        self.1
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.0 {
            self.1
        } else {
            self.0
        }
    }
}

/// Node count plus the undirected edge set at one instant.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphSnapshot {
    n: usize,
    edges: BTreeSet<Edge>,
}

impl GraphSnapshot {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (i, j) in pairs {
            g.insert(i, j)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| Edge(i, j)))
            .collect();
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        Edge::new(i, j).is_ok_and(|e| self.edges.contains(&e))
    }

    /// Inserts the pair; returns `false` if it was already present.
    pub fn insert(&mut self, i: usize, j: usize) -> Result<bool> {
        if i >= self.n || j >= self.n {
            return Err(invalid(
                "edge",
                format!("endpoint ({i}, {j}) outside [0, {})", self.n),
            ));
        }
        Ok(self.edges.insert(Edge::new(i, j)?))
    }

    pub fn remove(&mut self, i: usize, j: usize) -> bool {
        Edge::new(i, j).is_ok_and(|e| self.edges.remove(&e))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v || e.1 == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.0] += 1;
            deg[e.1] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

/// Draws a `G(n, p)` graph: each pair present independently with probability `p`.
pub fn sample_stationary_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<GraphSnapshot> {
    if n == 0 {
        return Err(invalid("n", "must be >= 1"));
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(invalid("p", format!("must lie in [0, 1], got {p}")));
    }
    let mut g = GraphSnapshot::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                g.edges.insert(Edge(i, j));
            }
        }
    }
    Ok(g)
}

/// Toggle times of one telegraph edge on `[0, horizon]`.
pub fn sample_edge_trajectory<R: Rng + ?Sized>(
    initial_on: bool,
    horizon: f64,
    params: &EdgeParams,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if horizon.is_nan() || horizon < 0.0 {
        return Err(Error::NegativeTime(horizon));
    }
    let Some(mu) = params.mu() else {
        return Err(invalid(
            "params",
            "instant-removal edges have zero-length on periods and no toggle trajectory",
        ));
    };
    let mut toggles = Vec::new();
    let mut on = initial_on;
    let mut t = 0.0;
    loop {
        let rate = if on { mu } else { params.lambda };
        if rate == 0.0 {
            break;
        }
        t += exp_wait(rng, rate);
        if t > horizon {
            break;
        }
        toggles.push(t);
        on = !on;
    }
    Ok(toggles)
}

/// State of an edge at time `t` given its toggle history.
pub fn state_at(initial_on: bool, toggles: &[f64], t: f64) -> bool {
    let flips = toggles.partition_point(|&s| s <= t);
    initial_on ^ (flips % 2 == 1)
}

/// Fraction of `[0, horizon]` spent on.
pub fn on_fraction(initial_on: bool, toggles: &[f64], horizon: f64) -> f64 {
    if horizon <= 0.0 {
        return if initial_on { 1.0 } else { 0.0 };
    }
    let mut on = initial_on;
    let mut last = 0.0;
    let mut total = 0.0;
    for &s in toggles.iter().take_while(|&&s| s <= horizon) {
        if on {
            total += s - last;
        }
        last = s;
        on = !on;
    }
    if on {
        total += horizon - last;
    }
    total / horizon
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn stationary_at_figure_defaults() {
        let s = derive_stationary(&EdgeParams::new(0.01, 0.01).unwrap()).unwrap();
        assert!(close(s.p, 0.5, 1e-15));
        assert!(close(s.alpha, 0.005, 1e-15));
    }

    #[test]
    fn one_sided_rates() {
        let s = derive_stationary(&EdgeParams::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!((s.p, s.alpha), (1.0, 0.0));
        let s = derive_stationary(&EdgeParams::new(0.0, 1.0).unwrap()).unwrap();
        assert_eq!((s.p, s.alpha), (0.0, 0.0));
        let s = derive_stationary(&EdgeParams::instant_removal(0.3).unwrap()).unwrap();
        assert_eq!((s.p, s.alpha), (0.0, 0.3));
    }

    #[test]
    fn zero_rates_are_degenerate() {
        let params = EdgeParams::new(0.0, 0.0).unwrap();
        assert_eq!(derive_stationary(&params), Err(Error::DegenerateRates));
        assert!(EdgeParams::new(-1.0, 1.0).is_err());
        assert!(EdgeParams::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn rates_from_stationary() {
        let r = derive_rates(0.5, 0.005).unwrap();
        assert!(close(r.lambda(), 0.01, 1e-14) && close(r.mu().unwrap(), 0.01, 1e-14));
        let r = derive_rates(0.25, 0.03).unwrap();
        assert!(close(r.lambda(), 0.04, 1e-14) && close(r.mu().unwrap(), 0.12, 1e-14));
        let r = derive_rates(0.5, 0.0).unwrap();
        assert_eq!((r.lambda(), r.mu()), (0.0, Some(0.0)));
        assert_eq!(derive_rates(0.0, 1.0), Err(Error::DegenerateProbability(0.0)));
        assert_eq!(derive_rates(1.0, 1.0), Err(Error::DegenerateProbability(1.0)));
    }

    #[test]
    fn on_probability_examples() {
        let params = EdgeParams::new(0.01, 0.01).unwrap();
        assert_eq!(edge_on_probability(true, 0.0, &params).unwrap(), 1.0);
        assert!(close(edge_on_probability(false, 1e6, &params).unwrap(), 0.5, 1e-12));
        let v = edge_on_probability(true, 50.0, &params).unwrap();
        assert!(close(v, 0.5 + 0.5 * (-1.0f64).exp(), 1e-14));
        assert!((v - 0.6839).abs() < 1e-4);
        assert_eq!(edge_on_probability(true, -1.0, &params), Err(Error::NegativeTime(-1.0)));
    }

    #[test]
    fn snapshot_rejects_bad_edges() {
        let mut g = GraphSnapshot::empty(3);
        assert!(g.insert(1, 1).is_err());
        assert!(g.insert(0, 3).is_err());
        assert!(g.insert(2, 0).unwrap());
        assert!(!g.insert(0, 2).unwrap());
        assert_eq!(g.edges().next(), Some(Edge(0, 2)));
    }

    #[test]
    fn stationary_graph_extremes() {
        let mut rng = seeded(1);
        assert_eq!(sample_stationary_graph(5, 0.0, &mut rng).unwrap().edge_count(), 0);
        let full = sample_stationary_graph(5, 1.0, &mut rng).unwrap();
        assert_eq!(full.edge_count(), 10);
        assert_eq!(full, GraphSnapshot::complete(5));
        assert!(sample_stationary_graph(0, 0.5, &mut rng).is_err());
        assert!(sample_stationary_graph(3, 1.5, &mut rng).is_err());
    }

    #[test]
    fn frozen_trajectories() {
        let mut rng = seeded(2);
        let never_on = EdgeParams::new(0.0, 1.0).unwrap();
        assert!(sample_edge_trajectory(false, 100.0, &never_on, &mut rng).unwrap().is_empty());
        let never_off = EdgeParams::new(1.0, 0.0).unwrap();
        assert!(sample_edge_trajectory(true, 100.0, &never_off, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn state_and_fraction_helpers() {
        let toggles = [1.0, 3.0];
        assert!(!state_at(false, &toggles, 0.5));
        assert!(state_at(false, &toggles, 1.0));
        assert!(!state_at(false, &toggles, 3.5));
        assert!(close(on_fraction(false, &toggles, 4.0), 0.5, 1e-15));
    }
}

//! SI with every edge tracked explicitly.
//!
//! Slower than [`super::simulate_si`] and memory-bound by the edge count,
//! but it records the full joint history of edges and infections, which is
//! what trajectory export needs. It also serves as a brute-force reference
//! for the lumped simulator.

use rand::Rng;

use super::trajectory::{Event, EventKind, EventTrajectory, SiTrajectory};
use super::{SiConfig, SiStart};
use crate::collections::IndexedSet;
use crate::error::{invalid, Result};
use crate::model::{derive_stationary, sample_stationary_graph, InfectionRate};
use crate::rng::exp_wait;

/// Output of [`simulate_si_with_edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct SiEdgeRun {
    pub events: EventTrajectory,
    pub infections: SiTrajectory,
}

fn key(a: usize, b: usize) -> (u32, u32) {
    if a < b {
        (a as u32, b as u32)
    } else {
        (b as u32, a as u32)
    }
}

struct State {
    infected: Vec<bool>,
    adj: Vec<Vec<u32>>,
    on: IndexedSet<(u32, u32)>,
    /// On pairs stored as (infected, susceptible).
    frontier: IndexedSet<(u32, u32)>,
    events: Vec<Event>,
    jumps: Vec<(f64, usize)>,
    infections: Vec<(f64, usize)>,
    count: usize,
}

impl State {
    fn link(&mut self, a: usize, b: usize) {
        self.on.insert(key(a, b));
        self.adj[a].push(b as u32);
        self.adj[b].push(a as u32);
        match (self.infected[a], self.infected[b]) {
            (true, false) => {
                self.frontier.insert((a as u32, b as u32));
            }
            (false, true) => {
                self.frontier.insert((b as u32, a as u32));
            }
            _ => {}
        }
    }

    fn unlink(&mut self, a: usize, b: usize) {
        self.on.remove(&key(a, b));
        self.adj[a].retain(|&x| x as usize != b);
        self.adj[b].retain(|&x| x as usize != a);
        self.frontier.remove(&(a as u32, b as u32));
        self.frontier.remove(&(b as u32, a as u32));
    }

    /// Infects `v`; with `cascade`, also every susceptible reachable from
    /// it through on edges.
    fn infect(&mut self, t: f64, v: usize, cascade: bool, record: bool) {
        let mut stack = vec![v];
        self.mark(t, v, record);
        while let Some(u) = stack.pop() {
            for idx in 0..self.adj[u].len() {
                let w = self.adj[u][idx] as usize;
                if self.infected[w] {
                    self.frontier.remove(&(w as u32, u as u32));
                } else if cascade {
                    self.mark(t, w, record);
                    stack.push(w);
                } else {
                    self.frontier.insert((u as u32, w as u32));
                }
            }
        }
    }

    fn mark(&mut self, t: f64, v: usize, record: bool) {
        self.infected[v] = true;
        self.count += 1;
        self.infections.push((t, v));
        if record {
            self.events.push(Event {
                t,
                kind: EventKind::Infect(v),
            });
        }
    }

    fn jump(&mut self, t: f64) {
        if self.jumps.last().is_none_or(|&(_, x)| x < self.count) {
            self.jumps.push((t, self.count));
        }
    }
}

/// Simulates SI jointly with all `n(n-1)/2` edges.
///
/// Stops when the stop rule's target is reached, at its horizon, or, with
/// no horizon, once everyone is infected. With a horizon the edges keep
/// evolving after full infection.
pub fn simulate_si_with_edges<R: Rng + ?Sized>(config: &SiConfig, rng: &mut R) -> Result<SiEdgeRun> {
    config.validate()?;
    let n = config.n;
    let Some(mu) = config.params.mu() else {
        return Err(invalid("params", "instant removal has no edge history to record"));
    };
    let lambda = config.params.lambda();
    let beta = match config.beta {
        InfectionRate::Finite(b) if b > 0.0 && b.is_finite() => Some(b),
        InfectionRate::Finite(b) => return Err(invalid("beta", format!("must be finite and > 0, got {b}"))),
        InfectionRate::Infinite => None,
    };
    let initial = match &config.start {
        SiStart::Stationary => sample_stationary_graph(n, derive_stationary(&config.params)?.p, rng)?,
        SiStart::Snapshot(g) => g.clone(),
    };
    let total_pairs = n * n.saturating_sub(1) / 2;
    let mut s = State {
        infected: vec![false; n],
        adj: vec![Vec::new(); n],
        on: IndexedSet::new(),
        frontier: IndexedSet::new(),
        events: Vec::new(),
        jumps: Vec::new(),
        infections: Vec::new(),
        count: 0,
    };
    for e in initial.edges() {
        s.link(e.lo(), e.hi());
    }
    for &v in &config.seeds {
        s.infect(0.0, v, false, false);
    }
    s.jumps.push((0.0, s.count));
    if beta.is_none() {
        // Susceptibles already joined to a seed are infected at once.
        let reached: Vec<usize> = s.frontier.iter().map(|&(_, b)| b as usize).collect();
        for v in reached {
            if !s.infected[v] {
                s.infect(0.0, v, true, true);
            }
        }
        s.jump(0.0);
    }

    let limit = config.stop.time_limit();
    let mut t = 0.0;
    let end = loop {
        if config.stop.reached(s.count) || (s.count == n && config.stop.horizon.is_none()) {
            break t;
        }
        let up = lambda * (total_pairs - s.on.len()) as f64;
        let down = mu * s.on.len() as f64;
        let infect = beta.map_or(0.0, |b| b * s.frontier.len() as f64);
        let rate = up + down + infect;
        if rate == 0.0 {
            break config.stop.horizon.unwrap_or(t);
        }
        let next = t + exp_wait(rng, rate);
        if next > limit {
            break limit;
        }
        t = next;
        let u = rng.random::<f64>() * rate;
        if u < up {
            let (a, b) = sample_off_pair(n, &s.on, rng);
            s.link(a, b);
            s.events.push(Event {
                t,
                kind: EventKind::EdgeOn(a, b),
            });
            if beta.is_none() && s.infected[a] != s.infected[b] {
                let v = if s.infected[a] { b } else { a };
                s.infect(t, v, true, true);
                s.jump(t);
            }
        } else if u < up + down {
            let (a, b) = s.on.sample(rng).expect("positive down rate");
            let (a, b) = (a as usize, b as usize);
            s.unlink(a, b);
            s.events.push(Event {
                t,
                kind: EventKind::EdgeOff(a, b),
            });
        } else {
            let (_, v) = s.frontier.sample(rng).expect("positive infection rate");
            s.infect(t, v as usize, false, true);
            s.jump(t);
        }
    };
    Ok(SiEdgeRun {
        events: EventTrajectory {
            initial,
            initially_infected: config.seeds.clone(),
            horizon: end,
            events: s.events,
        },
        infections: SiTrajectory {
            n,
            jumps: s.jumps,
            infections: s.infections,
            end_time: end,
        },
    })
}

fn sample_off_pair<R: Rng + ?Sized>(n: usize, on: &IndexedSet<(u32, u32)>, rng: &mut R) -> (usize, usize) {
    loop {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b && !on.contains(&key(a, b)) {
            return (a.min(b), a.max(b));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EdgeParams;
    use crate::rng::seeded;
    use crate::simulator::StopRule;

    #[test]
    fn replay_is_legal() {
        for beta in [InfectionRate::Finite(0.8), InfectionRate::Infinite] {
            let mut cfg = SiConfig::new(30, EdgeParams::new(0.2, 0.6).unwrap(), beta);
            cfg.stop = StopRule::horizon(15.0);
            let run = simulate_si_with_edges(&cfg, &mut seeded(3)).unwrap();
            run.events.validate().unwrap();
            let infect_events = run.events.events.iter().filter(|e| matches!(e.kind, EventKind::Infect(_))).count();
            assert_eq!(infect_events + 1, run.infections.infections.len());
            assert_eq!(run.infections.infected(), run.infections.infections.len());
            assert_eq!(run.events.horizon, 15.0);
        }
    }

    #[test]
    fn infinite_beta_never_leaves_an_on_boundary_edge() {
        let mut cfg = SiConfig::new(25, EdgeParams::new(0.3, 0.3).unwrap(), InfectionRate::Infinite);
        cfg.stop = StopRule::horizon(3.0);
        let run = simulate_si_with_edges(&cfg, &mut seeded(8)).unwrap();
        let infected: Vec<bool> = {
            let mut v = vec![false; 25];
            for &(_, x) in &run.infections.infections {
                v[x] = true;
            }
            v
        };
        let g = run.events.graph_at(3.0);
        assert!(g.edges().all(|e| infected[e.lo()] == infected[e.hi()]));
    }

    #[test]
    fn rejects_instant_removal() {
        let cfg = SiConfig::new(5, EdgeParams::instant_removal(1.0).unwrap(), InfectionRate::Infinite);
        assert!(simulate_si_with_edges(&cfg, &mut seeded(0)).is_err());
    }
}

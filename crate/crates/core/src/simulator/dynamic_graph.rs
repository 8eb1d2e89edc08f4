use rand::Rng;

use super::trajectory::{Event, EventKind, EventTrajectory};
use super::SimLimits;
use crate::collections::IndexedSet;
use crate::error::{invalid, Error, Result};
use crate::model::{EdgeParams, GraphSnapshot};
use crate::rng::exp_wait;

/// Runs all `n(n-1)/2` telegraph edges jointly from `initial` to `horizon`.
///
/// Direct method on aggregate rates: off pairs switch on at total rate
/// `lambda (N - E)`, on pairs switch off at `mu E`, and the switching pair is
/// uniform within its class. Memory is proportional to the edge count.
pub fn simulate_dynamic_graph<R: Rng + ?Sized>(
    n: usize,
    params: &EdgeParams,
    initial: &GraphSnapshot,
    horizon: f64,
    limits: &SimLimits,
    rng: &mut R,
) -> Result<EventTrajectory> {
    if initial.n() != n {
        return Err(invalid("initial", format!("snapshot has {} nodes, expected {n}", initial.n())));
    }
    if horizon.is_nan() || horizon < 0.0 {
        return Err(Error::NegativeTime(horizon));
    }
    limits.check(n)?;
    let Some(mu) = params.mu() else {
        return Err(invalid(
            "params",
            "instant removal leaves no edge on for positive time; there is nothing to simulate",
        ));
    };
    let lambda = params.lambda();
    let total_pairs = n * n.saturating_sub(1) / 2;
    let mut on: IndexedSet<(u32, u32)> = IndexedSet::new();
    for e in initial.edges() {
        on.insert((e.lo() as u32, e.hi() as u32));
    }
    let mut events = Vec::new();
    let mut t = 0.0;
    loop {
        let up = lambda * (total_pairs - on.len()) as f64;
        let down = mu * on.len() as f64;
        let rate = up + down;
        if rate == 0.0 {
            break;
        }
        t += exp_wait(rng, rate);
        if t > horizon {
            break;
        }
        if rng.random::<f64>() * rate < up {
            let (i, j) = sample_off_pair(n, &on, rng);
            on.insert((i, j));
            events.push(Event {
                t,
                kind: EventKind::EdgeOn(i as usize, j as usize),
            });
        } else {
            let (i, j) = on.sample(rng).expect("positive down rate");
            on.remove(&(i, j));
            events.push(Event {
                t,
                kind: EventKind::EdgeOff(i as usize, j as usize),
            });
        }
    }
    Ok(EventTrajectory {
        initial: initial.clone(),
        initially_infected: Vec::new(),
        horizon,
        events,
    })
}

fn sample_off_pair<R: Rng + ?Sized>(n: usize, on: &IndexedSet<(u32, u32)>, rng: &mut R) -> (u32, u32) {
    for _ in 0..256 {
        let a = rng.random_range(0..n) as u32;
        let b = rng.random_range(0..n) as u32;
        if a == b {
            continue;
        }
        let pair = if a < b { (a, b) } else { (b, a) };
        if !on.contains(&pair) {
            return pair;
        }
    }
    // Nearly complete graph: enumerate what is left.
    let mut off = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if !on.contains(&(a, b)) {
                off.push((a, b));
            }
        }
    }
    off[rng.random_range(0..off.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn frozen_without_lambda() {
        let params = EdgeParams::new(0.0, 1.0).unwrap();
        let tr = simulate_dynamic_graph(3, &params, &GraphSnapshot::empty(3), 100.0, &SimLimits::default(), &mut seeded(0))
            .unwrap();
        assert!(tr.events.is_empty());
    }

    #[test]
    fn replay_is_legal_and_repeatable() {
        let params = EdgeParams::new(0.7, 0.3).unwrap();
        let g0 = GraphSnapshot::from_edges(6, [(0, 1), (2, 5)]).unwrap();
        let run = |seed| simulate_dynamic_graph(6, &params, &g0, 20.0, &SimLimits::default(), &mut seeded(seed)).unwrap();
        let a = run(4);
        a.validate().unwrap();
        assert!(!a.events.is_empty());
        assert_eq!(a, run(4));
        assert_ne!(a, run(5));
    }

    #[test]
    fn cap_and_mismatch() {
        let params = EdgeParams::new(1.0, 1.0).unwrap();
        let limits = SimLimits { max_nodes: 4 };
        assert!(matches!(
            simulate_dynamic_graph(5, &params, &GraphSnapshot::empty(5), 1.0, &limits, &mut seeded(0)),
            Err(Error::ResourceCap { .. })
        ));
        assert!(simulate_dynamic_graph(3, &params, &GraphSnapshot::empty(4), 1.0, &limits, &mut seeded(0)).is_err());
    }
}

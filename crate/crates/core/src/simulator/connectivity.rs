//! First time the pure-birth edge process (`mu = 0`, empty start) connects
//! the graph.

use std::collections::HashSet;

use rand::Rng;

use crate::collections::UnionFind;
use crate::error::{invalid, Result};
use crate::rng::exp_wait;

fn check(n: usize, lambda: f64) -> Result<()> {
    if n < 2 {
        return Err(invalid("n", format!("must be >= 2, got {n}")));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("must be finite and > 0, got {lambda}")));
    }
    Ok(())
}

/// Connection time generated in arrival order.
///
/// The `i`-th arrival among `N` independent `Exp(lambda)` clocks comes
/// `Exp(lambda (N - i))` after the previous one and picks a uniformly random
/// pair not yet arrived. Connectivity needs only `O(n log n)` arrivals, so
/// this avoids drawing all `N` clocks.
pub fn connectivity_time<R: Rng + ?Sized>(n: usize, lambda: f64, rng: &mut R) -> Result<f64> {
    check(n, lambda)?;
    let total = n as u64 * (n as u64 - 1) / 2;
    let mut arrived: HashSet<(u32, u32)> = HashSet::new();
    let mut uf = UnionFind::new(n);
    let mut t = 0.0;
    loop {
        t += exp_wait(rng, lambda * (total - arrived.len() as u64) as f64);
        let (a, b) = loop {
            let a = rng.random_range(0..n) as u32;
            let b = rng.random_range(0..n) as u32;
            if a == b {
                continue;
            }
            let pair = if a < b { (a, b) } else { (b, a) };
            if arrived.insert(pair) {
                break pair;
            }
        };
        uf.union(a as usize, b as usize);
        if uf.components() == 1 {
            return Ok(t);
        }
    }
}

/// Reference implementation: draws every pair's clock, sorts, and sweeps
/// with union-find. `O(n^2 log n)`.
pub fn connectivity_time_sweep<R: Rng + ?Sized>(n: usize, lambda: f64, rng: &mut R) -> Result<f64> {
    check(n, lambda)?;
    let mut clocks = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            clocks.push((exp_wait(rng, lambda), i, j));
        }
    }
    clocks.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut uf = UnionFind::new(n);
    for (t, i, j) in clocks {
        uf.union(i, j);
        if uf.components() == 1 {
            return Ok(t);
        }
    }
    unreachable!("all pairs present connects the graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn two_nodes_single_clock() {
        let mut rng = seeded(0);
        let trials = 20_000;
        let mean: f64 = (0..trials).map(|_| connectivity_time(2, 2.0, &mut rng).unwrap()).sum::<f64>() / trials as f64;
        // Exp(2): mean 0.5, sd 0.5.
        assert!((mean - 0.5).abs() < 4.0 * 0.5 / (trials as f64).sqrt());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(connectivity_time(1, 1.0, &mut seeded(0)).is_err());
        assert!(connectivity_time(5, 0.0, &mut seeded(0)).is_err());
        assert!(connectivity_time_sweep(5, -1.0, &mut seeded(0)).is_err());
    }
}

//! Expected absorption time of the infective-edge birth–death chain.
//!
//! State `k` counts active edges among `N` potential ones between an
//! infected set and a susceptible set. From `k` the chain moves up at rate
//! `(N - k) lambda`, down at `k mu`, and is absorbed (a new infection) at
//! `k beta`. The hitting times satisfy
//!
//! ```text
//! ((N - k) lambda + k mu + k beta) t_k = 1 + (N - k) lambda t_{k+1} + k mu t_{k-1}
//! ```
//!
//! which is tridiagonal in `t_0..t_N`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::model::EdgeParams;

/// Solves `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]` by forward
/// elimination and back substitution. `sub[0]` and `sup[n-1]` are ignored.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if sub.len() != n || sup.len() != n || rhs.len() != n {
        return Err(invalid("system", "band and right-hand-side lengths differ"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::Numerical("zero pivot in row 0".into()));
    }
    c[0] = sup[0] / denom;
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sub[i] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::Numerical(format!("zero pivot in row {i}")));
        }
        c[i] = if i + 1 < n { sup[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

struct Chain {
    n: u64,
    lambda: f64,
    mu: f64,
    beta: f64,
}

impl Chain {
    fn new(n_edges: u64, params: &EdgeParams, beta: f64) -> Result<Self> {
        if n_edges == 0 {
            return Err(invalid("N", "must be >= 1"));
        }
        let mu = params
            .mu()
            .ok_or_else(|| invalid("params", "instant removal never absorbs"))?;
        let lambda = params.lambda();
        if !(lambda > 0.0) {
            return Err(invalid("lambda", "must be positive"));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(invalid("beta", format!("must be finite and positive, got {beta}")));
        }
        Ok(Self { n: n_edges, lambda, mu, beta })
    }

    fn up(&self, k: u64) -> f64 {
        (self.n - k) as f64 * self.lambda
    }

    fn down(&self, k: u64) -> f64 {
        k as f64 * self.mu
    }

    fn absorb(&self, k: u64) -> f64 {
        k as f64 * self.beta
    }
}

/// All hitting times `t_0..=t_N`.
pub fn lemma4_hitting_times(n_edges: u64, params: &EdgeParams, beta: f64) -> Result<Vec<f64>> {
    let chain = Chain::new(n_edges, params, beta)?;
    let size = n_edges as usize + 1;
    let mut sub = vec![0.0; size];
    let mut diag = vec![0.0; size];
    let mut sup = vec![0.0; size];
    for k in 0..=n_edges {
        let i = k as usize;
        diag[i] = chain.up(k) + chain.down(k) + chain.absorb(k);
        sup[i] = -chain.up(k);
        sub[i] = -chain.down(k);
    }
    solve_tridiagonal(&sub, &diag, &sup, &vec![1.0; size])
}

/// Expected time to absorption from zero active edges.
pub fn lemma4_t0_exact(n_edges: u64, params: &EdgeParams, beta: f64) -> Result<f64> {
    Ok(lemma4_hitting_times(n_edges, params, beta)?[0])
}

/// Largest relative residual of the recurrence over every state, each
/// residual scaled by the largest term in its equation.
pub fn lemma4_max_residual(times: &[f64], params: &EdgeParams, beta: f64) -> Result<f64> {
    if times.is_empty() {
        return Err(invalid("times", "empty"));
    }
    let chain = Chain::new(times.len() as u64 - 1, params, beta)?;
    let mut worst: f64 = 0.0;
    for (i, &t) in times.iter().enumerate() {
        let k = i as u64;
        let lhs = (chain.up(k) + chain.down(k) + chain.absorb(k)) * t;
        let next = times.get(i + 1).map_or(0.0, |&x| chain.up(k) * x);
        let prev = if i > 0 { chain.down(k) * times[i - 1] } else { 0.0 };
        let rhs = 1.0 + next + prev;
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    Ok(worst)
}

/// Large-`N` asymptote `sqrt(pi / (2 beta lambda N))`, independent of `mu`.
pub fn lemma4_t0_asymptotic(n_edges: u64, lambda: f64, beta: f64) -> Result<f64> {
    if n_edges == 0 {
        return Err(invalid("N", "must be >= 1"));
    }
    if !(lambda > 0.0 && beta > 0.0) {
        return Err(invalid("rates", "lambda and beta must be positive"));
    }
    Ok((PI / (2.0 * beta * lambda * n_edges as f64)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> EdgeParams {
        EdgeParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn single_edge_chain_by_hand() {
        // t_0 = 1/lambda + t_1, t_1 = (1 + mu t_0) / (mu + beta)
        // => t_0 = (lambda + mu + beta) / (lambda beta).
        assert!((lemma4_t0_exact(1, &unit(), 1.0).unwrap() - 3.0).abs() < 1e-14);
        let params = EdgeParams::new(0.5, 2.0).unwrap();
        let expected = (0.5 + 2.0 + 3.0) / (0.5 * 3.0);
        assert!((lemma4_t0_exact(1, &params, 3.0).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn hitting_times_strictly_decrease() {
        for &(n, lambda, mu, beta) in &[(50, 1.0, 1.0, 1.0), (200, 0.3, 5.0, 0.1), (10, 2.0, 0.0, 0.5)] {
            let params = EdgeParams::new(lambda, mu).unwrap();
            let t = lemma4_hitting_times(n, &params, beta).unwrap();
            assert!(t.windows(2).all(|w| w[0] > w[1]), "N={n}");
            assert!(*t.last().unwrap() > 0.0);
            assert!(lemma4_max_residual(&t, &params, beta).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn asymptote_examples() {
        let v = lemma4_t0_asymptotic(1, 1.0, 1.0).unwrap();
        assert!((v - (PI / 2.0).sqrt()).abs() < 1e-15);
        assert!((v - 1.2533).abs() < 1e-4);
        let quarter = lemma4_t0_asymptotic(400, 1.0, 1.0).unwrap();
        let base = lemma4_t0_asymptotic(100, 1.0, 1.0).unwrap();
        assert!((quarter / base - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tridiagonal_matches_dense_elimination() {
        let sub = [0.0, -1.0, 2.0, -0.5];
        let diag = [4.0, 5.0, 6.0, 3.0];
        let sup = [1.0, -2.0, 0.5, 0.0];
        let rhs = [1.0, 2.0, 3.0, 4.0];
        let x = solve_tridiagonal(&sub, &diag, &sup, &rhs).unwrap();
        // Dense Gaussian elimination with partial pivoting.
        let mut a = [[0.0f64; 5]; 4];
        for i in 0..4 {
            a[i][i] = diag[i];
            if i > 0 {
                a[i][i - 1] = sub[i];
            }
            if i < 3 {
                a[i][i + 1] = sup[i];
            }
            a[i][4] = rhs[i];
        }
        for col in 0..4 {
            let piv = (col..4).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
            a.swap(col, piv);
            for r in col + 1..4 {
                let f = a[r][col] / a[col][col];
                for c in col..5 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
        let mut y = [0.0; 4];
        for r in (0..4).rev() {
            let s: f64 = (r + 1..4).map(|c| a[r][c] * y[c]).sum();
            y[r] = (a[r][4] - s) / a[r][r];
        }
        for i in 0..4 {
            assert!((x[i] - y[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(lemma4_t0_exact(0, &unit(), 1.0).is_err());
        assert!(lemma4_t0_exact(5, &EdgeParams::new(0.0, 1.0).unwrap(), 1.0).is_err());
        assert!(lemma4_t0_exact(5, &unit(), 0.0).is_err());
        assert!(solve_tridiagonal(&[0.0], &[0.0], &[0.0], &[1.0]).is_err());
    }
}

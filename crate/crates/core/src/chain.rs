//! Finite Markov chains with a validated stationary distribution.
//!
//! A [`MarkovChain`] owns a row-stochastic matrix `P` (row major), its
//! stationary distribution `pi`, and two cached structural flags:
//!
//! * `lazy`: every holding probability `P(x,x) >= 1/2`,
//! * `reversible`: detailed balance `pi(x) P(x,y) = pi(y) P(y,x)`.
//!
//! Construction validates everything once; all downstream functionals may
//! assume a stochastic, irreducible chain with a strictly positive `pi`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::set::StateSet;
use crate::tol;

#[derive(Debug, Clone)]
pub struct MarkovChain {
    n: usize,
    /// Row-major transition matrix, `p[x * n + y] = P(x, y)`.
    p: Vec<f64>,
    pi: Vec<f64>,
    lazy: bool,
    reversible: bool,
}

impl MarkovChain {
    /// Builds a chain from matrix rows, solving for the stationary
    /// distribution and validating all invariants.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotStochastic {
                    row: i,
                    detail: format!("row length {} in a {n}-state chain", row.len()),
                });
            }
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_flat(n, flat)
    }

    /// Builds a chain from a flat row-major matrix.
    pub fn from_flat(n: usize, p: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParam("chain needs at least one state".into()));
        }
        if p.len() != n * n {
            return Err(Error::BadParam(format!(
                "matrix length {} does not match {n} states",
                p.len()
            )));
        }
        validate_stochastic(n, &p)?;
        validate_irreducible(n, &p)?;
        let pi = solve_stationary(n, &p)?;
        Ok(Self::from_validated(n, p, pi))
    }

    /// Assembles a chain from parts that already satisfy stochasticity,
    /// irreducibility and stationarity; recomputes the cached flags.
    fn from_validated(n: usize, p: Vec<f64>, pi: Vec<f64>) -> Self {
        let lazy = (0..n).all(|x| p[x * n + x] >= tol::LAZY_MIN);
        let reversible = is_reversible(n, &p, &pi);
        MarkovChain {
            n,
            p,
            pi,
            lazy,
            reversible,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.p[x * self.n..(x + 1) * self.n]
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn pi_at(&self, x: usize) -> f64 {
        self.pi[x]
    }

    /// Smallest stationary mass, the usual starting point of profile bounds.
    pub fn pi_min(&self) -> f64 {
        self.pi.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    pub fn is_reversible(&self) -> bool {
        self.reversible
    }

    /// Transition mass from `x` into `set`.
    pub fn row_mass(&self, x: usize, set: &StateSet) -> f64 {
        let row = self.row(x);
        set.members().iter().map(|&y| row[y]).sum()
    }

    /// Ergodic flow `Q(A, B) = sum_{x in A, y in B} pi(x) P(x, y)`.
    pub fn ergodic_flow(&self, a: &StateSet, b: &StateSet) -> f64 {
        a.members()
            .iter()
            .map(|&x| self.pi[x] * self.row_mass(x, b))
            .sum()
    }

    /// Time reversal `P'(x, y) = pi(y) P(y, x) / pi(x)`.
    ///
    /// Shares `pi` with the original chain so that quantities computed on the
    /// two chains see bit-identical stationary masses. Rows are renormalized
    /// to absorb the stationarity residual of the solve.
    pub fn reversal(&self) -> MarkovChain {
        let n = self.n;
        let mut p = vec![0.0; n * n];
        for x in 0..n {
            for y in 0..n {
                p[x * n + y] = self.pi[y] * self.p[y * n + x] / self.pi[x];
            }
            let sum: f64 = p[x * n..(x + 1) * n].iter().sum();
            for y in 0..n {
                p[x * n + y] /= sum;
            }
        }
        MarkovChain::from_validated(n, p, self.pi.clone())
    }

    /// The lazified chain `(I + P) / 2`; keeps the same stationary
    /// distribution and is always lazy.
    pub fn lazify(&self) -> MarkovChain {
        let n = self.n;
        let mut p = vec![0.0; n * n];
        for x in 0..n {
            for y in 0..n {
                let hold = if x == y { 1.0 } else { 0.0 };
                p[x * n + y] = 0.5 * (hold + self.p[x * n + y]);
            }
        }
        MarkovChain::from_validated(n, p, self.pi.clone())
    }
}

fn validate_stochastic(n: usize, p: &[f64]) -> Result<()> {
    for x in 0..n {
        let row = &p[x * n..(x + 1) * n];
        for (y, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NotStochastic {
                    row: x,
                    detail: format!("entry ({x},{y}) = {v}"),
                });
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > tol::MASS {
            return Err(Error::NotStochastic {
                row: x,
                detail: format!("row sum {sum}"),
            });
        }
    }
    Ok(())
}

/// Irreducibility as strong connectivity of the positive-entry digraph:
/// every state reachable from state 0 and state 0 reachable from every state.
fn validate_irreducible(n: usize, p: &[f64]) -> Result<()> {
    let forward = reach(n, |x, y| p[x * n + y] > 0.0);
    if let Some(state) = forward.iter().position(|&r| !r) {
        return Err(Error::Reducible { state });
    }
    let backward = reach(n, |x, y| p[y * n + x] > 0.0);
    if let Some(state) = backward.iter().position(|&r| !r) {
        return Err(Error::Reducible { state });
    }
    Ok(())
}

fn reach(n: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in 0..n {
            if !seen[y] && edge(x, y) {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Solves `pi P = pi`, `sum pi = 1` by a dense LU factorization of the
/// transposed system with the normalization replacing one redundant row.
/// Doubly stochastic chains short-circuit to the uniform distribution,
/// which keeps large structured grids cheap to build.
fn solve_stationary(n: usize, p: &[f64]) -> Result<Vec<f64>> {
    if n == 1 {
        return Ok(vec![1.0]);
    }
    if n > 64 && is_doubly_stochastic(n, p) {
        let pi = vec![1.0 / n as f64; n];
        check_stationary(n, p, &pi)?;
        return Ok(pi);
    }
    // M = P^T - I with the last row replaced by the normalization sum(pi)=1.
    let mut m = DMatrix::<f64>::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            m[(y, x)] = p[x * n + y] - if x == y { 1.0 } else { 0.0 };
        }
    }
    for x in 0..n {
        m[(n - 1, x)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(n);
    b[n - 1] = 1.0;
    let lu = m.lu();
    let sol = lu
        .solve(&b)
        .ok_or_else(|| Error::SingularStationary("LU solve returned no solution".into()))?;
    let total: f64 = sol.iter().sum();
    let pi: Vec<f64> = sol.iter().map(|v| v / total).collect();
    check_stationary(n, p, &pi)?;
    Ok(pi)
}

fn is_doubly_stochastic(n: usize, p: &[f64]) -> bool {
    (0..n).all(|y| {
        let col: f64 = (0..n).map(|x| p[x * n + y]).sum();
        (col - 1.0).abs() <= tol::MASS
    })
}

fn check_stationary(n: usize, p: &[f64], pi: &[f64]) -> Result<()> {
    for (x, &mass) in pi.iter().enumerate() {
        if !(mass > 0.0) {
            return Err(Error::SingularStationary(format!(
                "stationary mass {mass} at state {x}"
            )));
        }
    }
    for y in 0..n {
        let image: f64 = (0..n).map(|x| pi[x] * p[x * n + y]).sum();
        if (image - pi[y]).abs() > tol::MASS {
            return Err(Error::SingularStationary(format!(
                "stationarity residual {} at state {y}",
                (image - pi[y]).abs()
            )));
        }
    }
    Ok(())
}

fn is_reversible(n: usize, p: &[f64], pi: &[f64]) -> bool {
    for x in 0..n {
        for y in (x + 1)..n {
            if (pi[x] * p[x * n + y] - pi[y] * p[y * n + x]).abs() > tol::MASS {
                return false;
            }
        }
    }
    true
}

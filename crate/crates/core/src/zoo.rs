//! Constructors for the benchmark chains: complete graphs, lazy paths,
//! products (hypercube, grid), the barbell, a biased non-reversible ring,
//! a discretized continuous sharpness example, and a two-block chain with
//! constant exit probabilities.

use crate::chain::MarkovChain;
use crate::error::{Error, Result};
use crate::set::StateSet;

/// Cap on the state count of product chains (dense storage).
pub const PRODUCT_LIMIT: usize = 4096;

/// Leak mass wired from the exiting block to the leftover block of
/// `two_block_sharp`, keeping the chain irreducible without disturbing the
/// constant exit probability (the per-state exit stays exactly alpha/2).
const TWO_BLOCK_LEAK: f64 = 1e-6;

/// Lazy walk on the complete graph: hold `(1 + 1/n)/2`, move to each other
/// state with probability `1/(2n)`.
pub fn complete_graph(n: usize) -> Result<MarkovChain> {
    if n < 2 {
        return Err(Error::BadParam(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    let off = 1.0 / (2.0 * n as f64);
    let hold = 0.5 * (1.0 + 1.0 / n as f64);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { hold } else { off }).collect())
        .collect();
    MarkovChain::from_rows(&rows)
}

/// Lazy walk on the line `{0, .., k-1}`: step probability 1/4 to each
/// existing neighbor, endpoints holding the missing quarter.
pub fn lazy_path(k: usize) -> Result<MarkovChain> {
    if k < 2 {
        return Err(Error::BadParam(format!("path needs k >= 2, got {k}")));
    }
    let mut rows = vec![vec![0.0; k]; k];
    for i in 0..k {
        if i > 0 {
            rows[i][i - 1] = 0.25;
        }
        if i + 1 < k {
            rows[i][i + 1] = 0.25;
        }
        let moving: f64 = rows[i].iter().sum();
        rows[i][i] = 1.0 - moving;
    }
    MarkovChain::from_rows(&rows)
}

/// Two states, flip with probability 1/2. The building block whose d-fold
/// product is the lazy hypercube walk.
pub fn two_state_flip() -> MarkovChain {
    MarkovChain::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]])
        .expect("two-state flip chain is valid")
}

/// Cartesian product: pick a coordinate uniformly, move it by its
/// component chain. States are mixed-radix tuples with the first
/// component fastest.
pub fn product(components: &[MarkovChain]) -> Result<MarkovChain> {
    if components.is_empty() {
        return Err(Error::BadParam("product of no components".into()));
    }
    let mut total: usize = 1;
    for c in components {
        total = total.saturating_mul(c.n());
        if total > PRODUCT_LIMIT {
            return Err(Error::TooLarge {
                n: total,
                limit: PRODUCT_LIMIT,
            });
        }
    }
    let d = components.len();
    let weight = 1.0 / d as f64;
    let mut rows = vec![vec![0.0; total]; total];
    for s in 0..total {
        // Decompose s once, then move one coordinate at a time.
        let mut stride = 1;
        for c in components {
            let coord = (s / stride) % c.n();
            let base = s - coord * stride;
            for (target_coord, &p) in c.row(coord).iter().enumerate() {
                if p > 0.0 {
                    rows[s][base + target_coord * stride] += weight * p;
                }
            }
            stride *= c.n();
        }
    }
    MarkovChain::from_rows(&rows)
}

/// Lazy walk on the d-cube, built directly: flip each coordinate with
/// probability `1/(2d)`, hold otherwise.
pub fn hypercube(d: usize) -> Result<MarkovChain> {
    if d == 0 {
        return Err(Error::BadParam("hypercube needs d >= 1".into()));
    }
    if d > 12 {
        return Err(Error::TooLarge {
            n: 1 << d,
            limit: PRODUCT_LIMIT,
        });
    }
    let n = 1usize << d;
    let flip = 1.0 / (2.0 * d as f64);
    let mut rows = vec![vec![0.0; n]; n];
    for v in 0..n {
        rows[v][v] = 0.5;
        for i in 0..d {
            rows[v][v ^ (1 << i)] = flip;
        }
    }
    MarkovChain::from_rows(&rows)
}

/// Lazy walk on the grid `[k]^d` as a product of path walks.
pub fn grid(k: usize, d: usize) -> Result<MarkovChain> {
    if d == 0 {
        return Err(Error::BadParam("grid needs d >= 1".into()));
    }
    let path = lazy_path(k)?;
    let components: Vec<MarkovChain> = (0..d).map(|_| path.clone()).collect();
    product(&components)
}

/// Two m-cliques joined by one edge between states `m-1` and `m`; every
/// vertex moves to each neighbor with probability `1/(2m)` and holds the
/// rest, so the matrix is symmetric and the walk lazy.
pub fn barbell(m: usize) -> Result<MarkovChain> {
    if m < 3 {
        return Err(Error::BadParam(format!("barbell needs m >= 3, got {m}")));
    }
    let n = 2 * m;
    let step = 1.0 / (2.0 * m as f64);
    let mut rows = vec![vec![0.0; n]; n];
    for v in 0..n {
        let clique = if v < m { 0..m } else { m..n };
        for w in clique {
            if w != v {
                rows[v][w] = step;
            }
        }
        if v == m - 1 {
            rows[v][m] = step;
        }
        if v == m {
            rows[v][m - 1] = step;
        }
        let moving: f64 = rows[v].iter().sum();
        rows[v][v] = 1.0 - moving;
    }
    MarkovChain::from_rows(&rows)
}

/// Lazy non-reversible ring: forward probability `p_fwd`, backward
/// `p_back`, holding the rest. Doubly stochastic, so pi is uniform.
pub fn biased_ring(n: usize, p_fwd: f64, p_back: f64) -> Result<MarkovChain> {
    if n < 3 {
        return Err(Error::BadParam(format!("ring needs n >= 3, got {n}")));
    }
    if !(p_fwd > 0.0 && p_back >= 0.0 && p_fwd + p_back <= 0.5) {
        return Err(Error::BadParam(format!(
            "ring probabilities must satisfy p_fwd > 0, p_back >= 0, p_fwd + p_back <= 1/2, \
             got {p_fwd} and {p_back}"
        )));
    }
    let mut rows = vec![vec![0.0; n]; n];
    for v in 0..n {
        rows[v][(v + 1) % n] = p_fwd;
        rows[v][(v + n - 1) % n] = p_back;
        rows[v][v] = 1.0 - p_fwd - p_back;
    }
    MarkovChain::from_rows(&rows)
}

/// Average of the transition density over the cell `[a, b]`: the density
/// is 1 up to `eps` and `(eps/t)^2` beyond, integrated exactly.
fn cell_average_density(a: f64, b: f64, eps: f64, n: usize) -> f64 {
    let flat = (b.min(eps) - a).max(0.0);
    let lo = a.max(eps);
    let tail = if b > lo {
        eps * eps * (1.0 / lo - 1.0 / b)
    } else {
        0.0
    };
    n as f64 * (flat + tail)
}

fn grid_count(value: f64, n: usize, what: &str) -> Result<usize> {
    let scaled = value * n as f64;
    let rounded = scaled.round();
    if (scaled - rounded).abs() > 1e-9 || rounded < 1.0 {
        return Err(Error::BadParam(format!(
            "{what} = {value} does not land on the 1/{n} grid"
        )));
    }
    Ok(rounded as usize)
}

/// Discretization of the continuous sharpness example on `[0, 1]`: states
/// are n equal cells; a lower-half cell connects to every upper-half cell
/// with probability `avg_density/n`, symmetrically, and everything else is
/// holding. Returns the chain together with `A = [0, x_set]`.
pub fn continuous_example(
    eps: f64,
    x_set: f64,
    n_states: usize,
) -> Result<(MarkovChain, StateSet)> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::BadParam(format!("eps = {eps} outside (0, 1/2]")));
    }
    if !(x_set > 0.0 && x_set <= 0.5) {
        return Err(Error::BadParam(format!("x_set = {x_set} outside (0, 1/2]")));
    }
    if n_states < 10 || !n_states.is_multiple_of(2) {
        return Err(Error::BadParam(format!(
            "n_states must be even and at least 10, got {n_states}"
        )));
    }
    let n = n_states;
    let a_cells = grid_count(x_set, n, "x_set")?;
    let half = n / 2;
    let cross: Vec<f64> = (0..half)
        .map(|i| {
            let a = i as f64 / n as f64;
            let b = (i + 1) as f64 / n as f64;
            cell_average_density(a, b, eps, n) / n as f64
        })
        .collect();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..half {
        for j in half..n {
            rows[i][j] = cross[i];
            rows[j][i] = cross[i];
        }
    }
    for (v, row) in rows.iter_mut().enumerate() {
        let moving: f64 = row.iter().sum();
        row[v] = 1.0 - moving;
    }
    let chain = MarkovChain::from_rows(&rows)?;
    let members: Vec<usize> = (0..a_cells).collect();
    let set = StateSet::from_indices(&chain, &members)?;
    Ok((chain, set))
}

/// A chain where every state of `A` exits with probability exactly
/// `alpha/2`, almost all of it landing uniformly on a receiving block of
/// measure `alpha * x`; a vanishing leak keeps any leftover block
/// connected. Returns the chain together with `A`.
pub fn two_block_sharp(x: f64, alpha: f64, n_states: usize) -> Result<(MarkovChain, StateSet)> {
    if !(x > 0.0 && x <= 0.5) {
        return Err(Error::BadParam(format!("x = {x} outside (0, 1/2]")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::BadParam(format!("alpha = {alpha} outside (0, 1]")));
    }
    let n = n_states;
    if n < 2 {
        return Err(Error::BadParam(format!(
            "need at least two states, got {n}"
        )));
    }
    let a = grid_count(x, n, "x")?;
    let r = grid_count(alpha * x, n, "alpha * x")?;
    if a + r > n {
        return Err(Error::BadParam(format!(
            "blocks of {a} and {r} states exceed the {n}-state space"
        )));
    }
    let l = n - a - r;
    let leak = if l > 0 { TWO_BLOCK_LEAK } else { 0.0 };
    let to_receiver = 0.5 * alpha * (1.0 - leak) / r as f64;
    let to_leftover = if l > 0 {
        0.5 * alpha * leak / l as f64
    } else {
        0.0
    };
    let mut rows = vec![vec![0.0; n]; n];
    for v in 0..a {
        for w in a..a + r {
            rows[v][w] = to_receiver;
            rows[w][v] = to_receiver;
        }
        for w in a + r..n {
            rows[v][w] = to_leftover;
            rows[w][v] = to_leftover;
        }
    }
    for (v, row) in rows.iter_mut().enumerate() {
        let moving: f64 = row.iter().sum();
        row[v] = 1.0 - moving;
    }
    let chain = MarkovChain::from_rows(&rows)?;
    let members: Vec<usize> = (0..a).collect();
    let set = StateSet::from_indices(&chain, &members)?;
    Ok((chain, set))
}

/// A named chain family with numeric parameters, as accepted on the
/// command line.
#[derive(Debug, Clone)]
pub struct ZooSpec {
    pub family: String,
    pub params: Vec<f64>,
}

/// `(name, parameter signature, description)` for every family.
pub fn families() -> &'static [(&'static str, &'static str, &'static str)] {
    &[
        (
            "complete_graph",
            "N",
            "lazy walk on the complete graph with N states",
        ),
        ("lazy_path", "K", "lazy walk on the line with K states"),
        ("hypercube", "D", "lazy coordinate-flip walk on {0,1}^D"),
        ("grid", "K D", "lazy walk on the grid [K]^D"),
        (
            "barbell",
            "M",
            "two M-cliques joined by a single edge, lazy walk",
        ),
        (
            "biased_ring",
            "N P_FWD P_BACK",
            "lazy non-reversible ring walk on N states",
        ),
        (
            "continuous_example",
            "EPS X N",
            "discretized continuous sharpness example; also selects A = [0, X]",
        ),
        (
            "two_block_sharp",
            "X ALPHA N",
            "constant-exit two-block chain; also selects the exiting block A",
        ),
    ]
}

impl ZooSpec {
    fn usize_param(&self, idx: usize) -> Result<usize> {
        let v = self.params[idx];
        if v < 0.0 || v.fract() != 0.0 || v > usize::MAX as f64 {
            return Err(Error::BadParam(format!(
                "{} parameter {} must be a nonnegative integer, got {v}",
                self.family,
                idx + 1
            )));
        }
        Ok(v as usize)
    }

    fn expect_params(&self, count: usize) -> Result<()> {
        if self.params.len() != count {
            return Err(Error::BadParam(format!(
                "{} takes {count} parameter(s), got {}",
                self.family,
                self.params.len()
            )));
        }
        Ok(())
    }

    /// Build the chain; families defining a canonical set also return it.
    pub fn build(&self) -> Result<(MarkovChain, Option<StateSet>)> {
        match self.family.as_str() {
            "complete_graph" => {
                self.expect_params(1)?;
                Ok((complete_graph(self.usize_param(0)?)?, None))
            }
            "lazy_path" => {
                self.expect_params(1)?;
                Ok((lazy_path(self.usize_param(0)?)?, None))
            }
            "hypercube" => {
                self.expect_params(1)?;
                Ok((hypercube(self.usize_param(0)?)?, None))
            }
            "grid" => {
                self.expect_params(2)?;
                Ok((grid(self.usize_param(0)?, self.usize_param(1)?)?, None))
            }
            "barbell" => {
                self.expect_params(1)?;
                Ok((barbell(self.usize_param(0)?)?, None))
            }
            "biased_ring" => {
                self.expect_params(3)?;
                Ok((
                    biased_ring(self.usize_param(0)?, self.params[1], self.params[2])?,
                    None,
                ))
            }
            "continuous_example" => {
                self.expect_params(3)?;
                let (chain, set) =
                    continuous_example(self.params[0], self.params[1], self.usize_param(2)?)?;
                Ok((chain, Some(set)))
            }
            "two_block_sharp" => {
                self.expect_params(3)?;
                let (chain, set) =
                    two_block_sharp(self.params[0], self.params[1], self.usize_param(2)?)?;
                Ok((chain, Some(set)))
            }
            other => Err(Error::BadParam(format!(
                "unknown chain family {other:?}; run the zoo listing for options"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isoperimetry::conductance;
    use approx::assert_abs_diff_eq;

    #[test]
    fn complete_graph_four_matches_the_worked_matrix() {
        let c = complete_graph(4).unwrap();
        assert_abs_diff_eq!(c.prob(0, 0), 0.625, epsilon = 0.0);
        assert_abs_diff_eq!(c.prob(0, 1), 0.125, epsilon = 0.0);
        assert!(c.is_lazy() && c.is_reversible());
        assert_abs_diff_eq!(c.pi_at(2), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn complete_graph_exit_probability_is_half_the_complement_measure() {
        let c = complete_graph(6).unwrap();
        let a = StateSet::from_indices(&c, &[1, 3, 4]).unwrap();
        let ac = a.complement(&c);
        for &v in a.members() {
            assert_abs_diff_eq!(c.row_mass(v, &ac), 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn lazy_path_endpoints_hold_three_quarters() {
        let c = lazy_path(2).unwrap();
        assert_abs_diff_eq!(c.prob(0, 1), 0.25, epsilon = 0.0);
        assert_abs_diff_eq!(c.prob(0, 0), 0.75, epsilon = 0.0);
    }

    #[test]
    fn lazy_path_prefix_conductance_is_one_over_four_j() {
        let c = lazy_path(6).unwrap();
        for j in 1..=3usize {
            let a = StateSet::from_indices(&c, &(0..j).collect::<Vec<_>>()).unwrap();
            assert_abs_diff_eq!(conductance(&c, &a), 1.0 / (4 * j) as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn product_of_one_chain_is_that_chain() {
        let c = lazy_path(3).unwrap();
        let p = product(std::slice::from_ref(&c)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(p.prob(i, j), c.prob(i, j), epsilon = 0.0);
            }
        }
    }

    #[test]
    fn hypercube_equals_product_of_flips() {
        let direct = hypercube(3).unwrap();
        let flips: Vec<MarkovChain> = (0..3).map(|_| two_state_flip()).collect();
        let via_product = product(&flips).unwrap();
        assert_eq!(direct.n(), via_product.n());
        for i in 0..direct.n() {
            for j in 0..direct.n() {
                assert_abs_diff_eq!(direct.prob(i, j), via_product.prob(i, j), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn grid_three_squared_is_uniform_and_lazy() {
        let c = grid(3, 2).unwrap();
        assert_eq!(c.n(), 9);
        assert!(c.is_lazy() && c.is_reversible());
        for v in 0..9 {
            assert_abs_diff_eq!(c.pi_at(v), 1.0 / 9.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn barbell_bridge_carries_the_whole_cross_flow() {
        let m = 3;
        let c = barbell(m).unwrap();
        let left = StateSet::from_indices(&c, &[0, 1, 2]).unwrap();
        let right = left.complement(&c);
        let expected = 1.0 / (4.0 * (m * m) as f64);
        assert_abs_diff_eq!(c.ergodic_flow(&left, &right), expected, epsilon = 1e-15);
        assert!(c.is_lazy() && c.is_reversible());
    }

    #[test]
    fn biased_ring_is_lazy_non_reversible_uniform() {
        let c = biased_ring(5, 0.3, 0.1).unwrap();
        assert!(c.is_lazy());
        assert!(!c.is_reversible());
        for v in 0..5 {
            assert_abs_diff_eq!(c.pi_at(v), 0.2, epsilon = 1e-14);
        }
        assert!(biased_ring(5, 0.4, 0.2).is_err());
    }

    #[test]
    fn continuous_example_inner_cells_connect_at_full_density() {
        let (c, a) = continuous_example(0.1, 0.5, 20).unwrap();
        assert_abs_diff_eq!(a.measure(), 0.5, epsilon = 1e-14);
        assert!(c.is_lazy() && c.is_reversible());
        // The first cell [0, 0.05] sits inside [0, eps], so its average
        // density is 1 and its total exit is 1/2.
        let upper = a.complement(&c);
        assert_abs_diff_eq!(c.row_mass(0, &upper), 0.5, epsilon = 1e-13);
        assert!(c.row_mass(19, &a) < 0.5);
    }

    #[test]
    fn continuous_example_rejects_off_grid_sets() {
        assert!(continuous_example(0.1, 0.33, 20).is_err());
        assert!(continuous_example(0.6, 0.5, 20).is_err());
        assert!(continuous_example(0.1, 0.5, 15).is_err());
    }

    #[test]
    fn two_block_exit_probabilities_are_constant_and_exact() {
        let (c, a) = two_block_sharp(0.25, 0.5, 8).unwrap();
        let ac = a.complement(&c);
        let first = c.row_mass(0, &ac);
        for &v in a.members() {
            assert_eq!(c.row_mass(v, &ac).to_bits(), first.to_bits());
        }
        assert_abs_diff_eq!(first, 0.25, epsilon = 1e-12);
        assert!(c.is_lazy() && c.is_reversible());
    }

    #[test]
    fn two_block_without_leftover_block_has_no_leak() {
        let (c, a) = two_block_sharp(0.5, 1.0, 8).unwrap();
        let ac = a.complement(&c);
        for &v in a.members() {
            assert_abs_diff_eq!(c.row_mass(v, &ac), 0.5, epsilon = 0.0);
        }
    }

    #[test]
    fn zoo_spec_rejects_bad_params() {
        let spec = ZooSpec {
            family: "complete_graph".into(),
            params: vec![4.5],
        };
        assert!(spec.build().is_err());
        let spec = ZooSpec {
            family: "nonesuch".into(),
            params: vec![],
        };
        assert!(spec.build().is_err());
        let spec = ZooSpec {
            family: "grid".into(),
            params: vec![3.0],
        };
        assert!(spec.build().is_err());
    }

    #[test]
    fn zoo_spec_builds_the_continuous_example_with_its_set() {
        let spec = ZooSpec {
            family: "continuous_example".into(),
            params: vec![0.1, 0.5, 20.0],
        };
        let (chain, set) = spec.build().unwrap();
        assert_eq!(chain.n(), 20);
        assert_eq!(set.unwrap().len(), 10);
    }
}

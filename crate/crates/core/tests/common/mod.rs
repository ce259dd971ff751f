//! Shared fixtures for the integration suites: seeded random chains,
//! canonical zoo instance lists, and independent numerical oracles.

#![allow(dead_code)]

use isomix::isoperimetry::{self, FlowMode};
use isomix::zoo;
use isomix::{MarkovChain, StateSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense strictly positive rows, each moving at most `max_moving` mass off
/// the diagonal, so the chain is irreducible and almost surely
/// non-reversible; `max_moving <= 1/2` makes it lazy.
pub fn random_chain(rng: &mut ChaCha8Rng, n: usize, max_moving: f64) -> MarkovChain {
    let mut rows = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        let mut off: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        off[i] = 0.0;
        let total: f64 = off.iter().sum();
        let moving = rng.gen_range(0.2 * max_moving..max_moving);
        for (j, v) in off.iter().enumerate() {
            row[j] = moving * v / total;
        }
        row[i] = 1.0 - moving;
    }
    MarkovChain::from_rows(&rows).expect("random rows are valid")
}

/// Dense strictly positive rows with holding at least 1/2 plus a random
/// spare, so the chain is lazy, irreducible and almost surely
/// non-reversible.
pub fn random_lazy_chain(rng: &mut ChaCha8Rng, n: usize) -> MarkovChain {
    random_chain(rng, n, 0.5)
}

/// Relabel states: state i of the original becomes `perm[i]`.
pub fn permute_chain(chain: &MarkovChain, perm: &[usize]) -> MarkovChain {
    let n = chain.n();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[perm[i]][perm[j]] = chain.prob(i, j);
        }
    }
    MarkovChain::from_rows(&rows).expect("permuted rows are valid")
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Metropolis walk on a random positive weight vector: reversible, lazy,
/// non-uniform stationary distribution.
pub fn random_reversible_lazy(rng: &mut ChaCha8Rng, n: usize) -> MarkovChain {
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut moving = 0.0;
        for j in 0..n {
            if i != j {
                let accept = (weights[j] / weights[i]).min(1.0);
                rows[i][j] = accept / (2 * n) as f64;
                moving += rows[i][j];
            }
        }
        rows[i][i] = 1.0 - moving;
    }
    MarkovChain::from_rows(&rows).expect("metropolis rows are valid")
}

/// A uniformly random proper nonempty subset.
pub fn random_proper_subset(rng: &mut ChaCha8Rng, chain: &MarkovChain) -> StateSet {
    let n = chain.n();
    let top = (1u64 << n) - 1;
    let mask = rng.gen_range(1..top);
    StateSet::from_mask(chain, mask).expect("mask in range is proper")
}

/// Every proper nonempty subset of an n-state chain, as masks.
pub fn proper_masks(n: usize) -> impl Iterator<Item = u64> {
    1..(1u64 << n) - 1
}

/// Named zoo instances with at most 12 states, as the theorem suites use.
/// Includes non-reversible lazy rings and a leaky two-block chain.
pub fn zoo_small() -> Vec<(String, MarkovChain)> {
    let mut out: Vec<(String, MarkovChain)> = Vec::new();
    let mut push = |name: &str, chain: MarkovChain| out.push((name.to_string(), chain));
    push("complete_graph(4)", zoo::complete_graph(4).unwrap());
    push("complete_graph(6)", zoo::complete_graph(6).unwrap());
    push("lazy_path(2)", zoo::lazy_path(2).unwrap());
    push("lazy_path(5)", zoo::lazy_path(5).unwrap());
    push("hypercube(2)", zoo::hypercube(2).unwrap());
    push("hypercube(3)", zoo::hypercube(3).unwrap());
    push("grid(3,2)", zoo::grid(3, 2).unwrap());
    push("grid(2,3)", zoo::grid(2, 3).unwrap());
    push("barbell(3)", zoo::barbell(3).unwrap());
    push("barbell(5)", zoo::barbell(5).unwrap());
    push(
        "biased_ring(6,0.3,0.1)",
        zoo::biased_ring(6, 0.3, 0.1).unwrap(),
    );
    push(
        "biased_ring(9,0.45,0.05)",
        zoo::biased_ring(9, 0.45, 0.05).unwrap(),
    );
    push(
        "continuous_example(0.1,0.5,10)",
        zoo::continuous_example(0.1, 0.5, 10).unwrap().0,
    );
    push(
        "continuous_example(0.2,0.3,10)",
        zoo::continuous_example(0.2, 0.3, 10).unwrap().0,
    );
    push(
        "two_block_sharp(0.5,1.0,8)",
        zoo::two_block_sharp(0.5, 1.0, 8).unwrap().0,
    );
    push(
        "two_block_sharp(0.25,0.5,8)",
        zoo::two_block_sharp(0.25, 0.5, 8).unwrap().0,
    );
    push(
        "two_block_sharp(0.25,1.0,12)",
        zoo::two_block_sharp(0.25, 1.0, 12).unwrap().0,
    );
    out
}

/// Zoo instances with at most 16 states whose mixing times are small
/// enough to compute exactly. The leaky two-block chains are excluded:
/// their leftover block connects at rate 1e-6, which is the point of the
/// construction but makes exact mixing astronomically slow.
pub fn zoo_mixing() -> Vec<(String, MarkovChain)> {
    let mut out: Vec<(String, MarkovChain)> = Vec::new();
    let mut push = |name: &str, chain: MarkovChain| out.push((name.to_string(), chain));
    push("complete_graph(4)", zoo::complete_graph(4).unwrap());
    push("complete_graph(8)", zoo::complete_graph(8).unwrap());
    push("complete_graph(16)", zoo::complete_graph(16).unwrap());
    push("lazy_path(4)", zoo::lazy_path(4).unwrap());
    push("lazy_path(8)", zoo::lazy_path(8).unwrap());
    push("lazy_path(16)", zoo::lazy_path(16).unwrap());
    push("hypercube(2)", zoo::hypercube(2).unwrap());
    push("hypercube(3)", zoo::hypercube(3).unwrap());
    push("hypercube(4)", zoo::hypercube(4).unwrap());
    push("grid(3,2)", zoo::grid(3, 2).unwrap());
    push("grid(4,2)", zoo::grid(4, 2).unwrap());
    push("grid(2,4)", zoo::grid(2, 4).unwrap());
    push("barbell(4)", zoo::barbell(4).unwrap());
    push("barbell(8)", zoo::barbell(8).unwrap());
    push(
        "biased_ring(6,0.3,0.1)",
        zoo::biased_ring(6, 0.3, 0.1).unwrap(),
    );
    push(
        "biased_ring(16,0.4,0.1)",
        zoo::biased_ring(16, 0.4, 0.1).unwrap(),
    );
    push(
        "continuous_example(0.1,0.5,16)",
        zoo::continuous_example(0.1, 0.5, 16).unwrap().0,
    );
    push(
        "two_block_sharp(0.5,1.0,16)",
        zoo::two_block_sharp(0.5, 1.0, 16).unwrap().0,
    );
    out
}

/// Midpoint-rule quadrature of the spread integral
/// `psi_plus = (1/pi(A)^2) int_0^{pi(A)} Psi(t) dt`.
/// Exact on linear pieces, so only the cells containing breakpoints
/// contribute error, each O(h^2).
pub fn quadrature_spread_plus(chain: &MarkovChain, a: &StateSet, cells: usize) -> f64 {
    let profile = isoperimetry::flow_profile(chain, a, FlowMode::Infimum);
    let x = a.measure();
    let h = x / cells as f64;
    let mut sum = 0.0;
    for k in 0..cells {
        sum += profile
            .eval(h * (k as f64 + 0.5))
            .expect("midpoint inside the domain");
    }
    sum * h / (x * x)
}

/// Monte Carlo estimate of `psi_evo = 1 - E sqrt(pi(A_u)/pi(A))` over
/// uniform u, with its standard error.
pub fn monte_carlo_psi_evo(
    rng: &mut ChaCha8Rng,
    chain: &MarkovChain,
    a: &StateSet,
    samples: usize,
) -> (f64, f64) {
    let levels = isoperimetry::level_set_profile(chain, a);
    let x = a.measure();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let u: f64 = rng.gen_range(0.0..1.0);
        let v = (levels.eval(u).expect("u inside [0,1)") / x).sqrt();
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (1.0 - mean, (var / n).sqrt())
}

/// Brute-force minimum flow into `A^c` over all fractional subsets of `A`
/// of mass `t`: every split into a whole part S and one fractional state.
pub fn brute_force_min_exit_flow(chain: &MarkovChain, a: &StateSet, t: f64) -> f64 {
    let ac = a.complement(chain);
    let members = a.members();
    let exits: Vec<f64> = members.iter().map(|&v| chain.row_mass(v, &ac)).collect();
    let masses: Vec<f64> = members.iter().map(|&v| chain.pi_at(v)).collect();
    let mut best = f64::INFINITY;
    for mask in 0..(1u64 << members.len()) {
        let mut whole_mass = 0.0;
        let mut whole_flow = 0.0;
        for (k, (&m, &e)) in masses.iter().zip(&exits).enumerate() {
            if mask >> k & 1 == 1 {
                whole_mass += m;
                whole_flow += m * e;
            }
        }
        if whole_mass > t + 1e-12 {
            continue;
        }
        let rest = t - whole_mass;
        if rest <= 1e-12 {
            best = best.min(whole_flow);
            continue;
        }
        for (k, (&m, &e)) in masses.iter().zip(&exits).enumerate() {
            if mask >> k & 1 == 0 && m >= rest - 1e-12 {
                best = best.min(whole_flow + rest * e);
            }
        }
    }
    best
}

/// Brute-force right-branch value: minimum flow from a fractional subset
/// of `A^c` of mass `1 - t` into `A`.
pub fn brute_force_min_entry_flow(chain: &MarkovChain, a: &StateSet, t: f64) -> f64 {
    let ac = a.complement(chain);
    brute_force_min_exit_flow(chain, &ac, 1.0 - t)
}

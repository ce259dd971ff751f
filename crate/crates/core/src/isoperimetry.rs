//! Isoperimetric functionals of a set under a Markov chain: the continuized
//! flow profile, the four spread constants, the supremum spread, evolving-set
//! level sets, and the records tying them together.
//!
//! The continuization is exact. For a set `A` and `t <= pi(A)` the profile
//!
//! ```text
//! Psi(t, A^c) = inf { Q(B, A^c) : B subset of A, pi(B) = t }
//! ```
//!
//! ranges over *fractional* subsets, and the infimum is attained by filling
//! states of `A` in ascending order of exit probability `P(v, A^c)`, taking
//! the final state fractionally. The profile is therefore piecewise linear
//! with breakpoints at the prefix measures of that order, and linear
//! interpolation between breakpoints *is* the exact fractional value. For
//! `t > pi(A)` the same construction runs on the complement with flows into
//! `A`, entering the profile as `Psi(1 - t, A)`. The supremum variant fills
//! in descending order instead.
//!
//! All spread integrals are evaluated in closed form from these segments.

use serde::Serialize;

use crate::chain::MarkovChain;
use crate::error::{Error, Result};
use crate::piecewise::{PiecewiseLinear, StepFunction};
use crate::set::StateSet;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMode {
    Infimum,
    Supremum,
}

/// States of `src` with their transition mass into `target`, sorted by that
/// mass (ties broken by state index). The sort order is the only place a
/// tie-break enters any functional; the integrals are tie-invariant.
fn exit_order(
    chain: &MarkovChain,
    src: &[usize],
    target: &StateSet,
    ascending: bool,
) -> Vec<(usize, f64)> {
    let mut order: Vec<(usize, f64)> = src
        .iter()
        .map(|&v| (v, chain.row_mass(v, target)))
        .collect();
    order.sort_by(|(va, ea), (vb, eb)| {
        let by_rate = if ascending {
            ea.total_cmp(eb)
        } else {
            eb.total_cmp(ea)
        };
        by_rate.then(va.cmp(vb))
    });
    order
}

/// The continuized flow profile `t -> Psi(t, A^c)` on `[0, 1]`.
///
/// `xs()[a.len()]` is the junction breakpoint at `pi(A)` where the profile
/// value equals the ergodic flow `Q(A, A^c)`.
pub fn flow_profile(chain: &MarkovChain, a: &StateSet, mode: FlowMode) -> PiecewiseLinear {
    let ascending = mode == FlowMode::Infimum;
    let ac = a.complement(chain);

    let mut xs = vec![0.0];
    let mut ys = vec![0.0];
    let mut cum_x = 0.0;
    let mut cum_y = 0.0;
    for (v, e) in exit_order(chain, a.members(), &ac, ascending) {
        cum_x += chain.pi_at(v);
        cum_y += chain.pi_at(v) * e;
        xs.push(cum_x);
        ys.push(cum_y);
    }

    // Branch for t > pi(A): Psi(1 - t, A) over subsets of the complement,
    // built from t = 1 downwards. The innermost complement breakpoint is
    // dropped; the junction at pi(A) comes from the left branch, and the
    // bridging segment carries the final complement state's rate.
    let into_a = exit_order(chain, ac.members(), a, ascending);
    let mut upper = vec![(1.0, 0.0)];
    let mut s = 0.0;
    let mut y = 0.0;
    for (w, e) in into_a.iter().take(into_a.len() - 1) {
        s += chain.pi_at(*w);
        y += chain.pi_at(*w) * e;
        upper.push((1.0 - s, y));
    }
    for (t, v) in upper.into_iter().rev() {
        if t > cum_x {
            xs.push(t);
            ys.push(v);
        }
    }

    PiecewiseLinear::new(xs, ys).expect("profile breakpoints are strictly increasing")
}

/// Conductance `Phi(A) = Q(A, A^c) / pi(A)`.
pub fn conductance(chain: &MarkovChain, a: &StateSet) -> f64 {
    let ac = a.complement(chain);
    chain.ergodic_flow(a, &ac) / a.measure()
}

/// `sum_v e_v (c_v pi_v + pi_v^2 / 2)` over the given exit order, where
/// `c_v` is the measure placed before `v`. Equals
/// `int_0^{pi(A)} y P(y, A^c) dy` with states laid on `[0, pi(A)]` in that
/// order, which is `int_0^{pi(A)} Psi(t) dt` for the opposite fill order.
fn positional_exit_integral(chain: &MarkovChain, order: &[(usize, f64)]) -> f64 {
    let mut before = 0.0;
    let mut total = 0.0;
    for &(v, e) in order {
        let m = chain.pi_at(v);
        total += e * (before * m + m * m / 2.0);
        before += m;
    }
    total
}

/// `psi_plus(A) = int_0^{pi(A)} Psi(t, A^c) dt / pi(A)^2`, in closed form
/// via the descending exit order.
pub fn spread_plus(chain: &MarkovChain, a: &StateSet) -> f64 {
    let ac = a.complement(chain);
    let order = exit_order(chain, a.members(), &ac, false);
    let x = a.measure();
    positional_exit_integral(chain, &order) / (x * x)
}

/// `psi_big(A) = int_0^{pi(A)} Psi_big(t, A^c) dt / pi(A)^2`, the supremum
/// analogue, in closed form via the ascending exit order.
pub fn psi_big(chain: &MarkovChain, a: &StateSet) -> f64 {
    let ac = a.complement(chain);
    let order = exit_order(chain, a.members(), &ac, true);
    let x = a.measure();
    positional_exit_integral(chain, &order) / (x * x)
}

/// `psi_minus(A) = int_{pi(A)}^1 Psi(t, A^c) dt / pi(A)^2`.
pub fn spread_minus(chain: &MarkovChain, a: &StateSet) -> f64 {
    let prof = flow_profile(chain, a, FlowMode::Infimum);
    spread_minus_from_profile(&prof, a)
}

fn spread_minus_from_profile(prof: &PiecewiseLinear, a: &StateSet) -> f64 {
    let junction = prof.xs()[a.len()];
    let x = a.measure();
    prof.integral(junction, 1.0).expect("profile covers [0, 1]") / (x * x)
}

/// `psi_gl(A) = int_0^1 Psi(t, A^c) dt / pi(A)^2`.
pub fn spread_gl(chain: &MarkovChain, a: &StateSet) -> f64 {
    let prof = flow_profile(chain, a, FlowMode::Infimum);
    spread_gl_from_profile(&prof, a)
}

fn spread_gl_from_profile(prof: &PiecewiseLinear, a: &StateSet) -> f64 {
    let x = a.measure();
    prof.integral(0.0, 1.0).expect("profile covers [0, 1]") / (x * x)
}

/// `psi_mod(A) = int_0^1 Psi(t, A^c) / (pi(A) min(t, 1-t)) dt`, integrated
/// analytically on each linear segment after splitting at `t = 1/2`.
pub fn spread_mod(chain: &MarkovChain, a: &StateSet) -> f64 {
    let prof = flow_profile(chain, a, FlowMode::Infimum);
    spread_mod_from_profile(&prof, a)
}

fn spread_mod_from_profile(prof: &PiecewiseLinear, a: &StateSet) -> f64 {
    let prof = prof.with_breakpoint(0.5).expect("1/2 lies inside [0, 1]");
    let mut total = 0.0;
    for (x0, x1, y0, y1) in prof.segments() {
        let beta = (y1 - y0) / (x1 - x0);
        if x1 <= 0.5 {
            // int (alpha + beta t)/t dt; alpha vanishes exactly at x0 = 0
            // because the profile starts at (0, 0).
            let alpha = (y0 * x1 - y1 * x0) / (x1 - x0);
            if alpha != 0.0 {
                total += alpha * (x1 / x0).ln();
            }
            total += beta * (x1 - x0);
        } else {
            // int (alpha + beta t)/(1-t) dt; the coefficient is the line's
            // value at t = 1, which vanishes exactly on the last segment.
            let gamma = y1 + beta * (1.0 - x1);
            if gamma != 0.0 {
                total += gamma * ((1.0 - x0) / (1.0 - x1)).ln();
            }
            total -= beta * (x1 - x0);
        }
    }
    total / a.measure()
}

/// The level-set size profile `u -> pi(A_u)` on `[0, 1)`, where
/// `A_u = { y : P'(y, A) > u }` and `P'` is the time reversal. Breakpoints
/// sit at the distinct positive rates; the profile is non-increasing and
/// right continuous, and `int_0^1 pi(A_u) du = pi(A)` exactly.
pub fn level_set_profile(chain: &MarkovChain, a: &StateSet) -> StepFunction {
    let n = chain.n();
    let mut flow = vec![0.0; n];
    for &v in a.members() {
        let row = chain.row(v);
        let mass = chain.pi_at(v);
        for (y, &p) in row.iter().enumerate() {
            flow[y] += mass * p;
        }
    }
    let mut rated: Vec<(f64, usize)> = (0..n).map(|y| (flow[y] / chain.pi_at(y), y)).collect();
    rated.sort_by(|(ra, ya), (rb, yb)| ra.total_cmp(rb).then(ya.cmp(yb)));

    // Distinct positive rates with their group masses, ascending.
    let mut groups: Vec<(f64, f64)> = Vec::new();
    for &(r, y) in &rated {
        if r <= 0.0 {
            continue;
        }
        match groups.last_mut() {
            Some((d, m)) if *d == r => *m += chain.pi_at(y),
            _ => groups.push((r, chain.pi_at(y))),
        }
    }
    // Mass strictly above each distinct rate, accumulated from the top.
    let mut above = vec![0.0; groups.len()];
    let mut acc = 0.0;
    for k in (0..groups.len()).rev() {
        above[k] = acc;
        acc += groups[k].1;
    }

    let mut xs = vec![0.0];
    let mut vs = vec![acc];
    for (k, &(d, _)) in groups.iter().enumerate() {
        if d < 1.0 {
            xs.push(d);
            vs.push(above[k]);
        }
    }
    StepFunction::new(xs, vs, 1.0).expect("distinct rates are strictly increasing")
}

/// Evolving-set spread `psi_evo(A) = 1 - int_0^1 sqrt(pi(A_u)/pi(A)) du`.
pub fn psi_evo(chain: &MarkovChain, a: &StateSet) -> f64 {
    let prof = level_set_profile(chain, a);
    let x = a.measure();
    let mut integral = 0.0;
    for (s, e, v) in prof.pieces() {
        integral += (e - s) * (v / x).sqrt();
    }
    1.0 - integral
}

/// The plus spread of the time reversal computed from level sets alone:
/// `1/2 int_{1/2}^1 ((pi(A) - pi(A_u)) / pi(A))^2 du`. Requires laziness,
/// which forces `A_u` inside `A` for `u >= 1/2`.
pub fn psi_plus_via_levelsets(chain: &MarkovChain, a: &StateSet) -> Result<f64> {
    if !chain.is_lazy() {
        let min_hold = (0..chain.n())
            .map(|x| chain.prob(x, x))
            .fold(f64::INFINITY, f64::min);
        return Err(Error::NotLazy(min_hold));
    }
    let prof = level_set_profile(chain, a);
    let x = a.measure();
    let mut total = 0.0;
    for (s, e, v) in prof.pieces() {
        let s = s.max(0.5);
        if s >= e {
            continue;
        }
        let ratio = (x - v) / x;
        total += (e - s) * ratio * ratio;
    }
    Ok(0.5 * total)
}

/// Both sides of the level-set representation of the reversed flow profile:
///
/// ```text
/// Psi'(t, A^c) = int_{w(t)}^1 (t - pi(A_u)) du        for t <= pi(A)
///              = int_0^{w(t)} (pi(A_u) - t) du        for t >  pi(A)
/// ```
///
/// with `w(t) = inf { u : pi(A_u) <= t }` and `Psi'` the infimum profile of
/// the time reversal. Returns `(lhs, rhs)`; the two agree to rounding.
pub fn lemma_flow_identity(chain: &MarkovChain, a: &StateSet, t: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::DomainError(format!("set size {t} outside [0, 1]")));
    }
    let rev = chain.reversal();
    let lhs = flow_profile(&rev, a, FlowMode::Infimum).eval(t)?;

    let prof = level_set_profile(chain, a);
    let mut w = prof.end();
    for (s, _, v) in prof.pieces() {
        if v <= t {
            w = s;
            break;
        }
    }
    let mut rhs = 0.0;
    if t <= a.measure() {
        for (s, e, v) in prof.pieces() {
            if s >= w {
                rhs += (e - s) * (t - v);
            }
        }
    } else {
        for (s, e, v) in prof.pieces() {
            if e <= w {
                rhs += (e - s) * (v - t);
            }
        }
    }
    Ok((lhs, rhs))
}

/// All scalar spread quantities of one set, computed on the chain itself or
/// on its time reversal.
#[derive(Debug, Clone, Serialize)]
pub struct SpreadRecord {
    pub psi_plus: f64,
    pub psi_minus: f64,
    pub psi_gl: f64,
    pub psi_mod: f64,
    pub psi_evo: f64,
    pub psi_big: f64,
    pub conductance: f64,
    pub reversed: bool,
}

impl SpreadRecord {
    /// Internal identities every record satisfies; violations are returned
    /// as human-readable strings for the verification suite.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let sum = self.psi_plus + self.psi_minus;
        if (self.psi_gl - sum).abs() > tol::RECORD {
            out.push(format!(
                "psi_gl = {} but psi_plus + psi_minus = {sum}",
                self.psi_gl
            ));
        }
        let split = self.psi_big + self.psi_plus;
        if (split - self.conductance).abs() > tol::RECORD {
            out.push(format!(
                "psi_big + psi_plus = {split} but conductance = {}",
                self.conductance
            ));
        }
        for (name, v) in [
            ("psi_plus", self.psi_plus),
            ("psi_minus", self.psi_minus),
            ("psi_gl", self.psi_gl),
            ("psi_mod", self.psi_mod),
            ("psi_evo", self.psi_evo),
            ("psi_big", self.psi_big),
            ("conductance", self.conductance),
        ] {
            if !(v >= -tol::RECORD) || !v.is_finite() {
                out.push(format!("{name} = {v} is not a nonnegative real"));
            }
        }
        out
    }
}

pub fn spread_record(chain: &MarkovChain, a: &StateSet, reversed: bool) -> SpreadRecord {
    let owned;
    let c = if reversed {
        owned = chain.reversal();
        &owned
    } else {
        chain
    };
    let prof = flow_profile(c, a, FlowMode::Infimum);
    SpreadRecord {
        psi_plus: spread_plus(c, a),
        psi_minus: spread_minus_from_profile(&prof, a),
        psi_gl: spread_gl_from_profile(&prof, a),
        psi_mod: spread_mod_from_profile(&prof, a),
        psi_evo: psi_evo(c, a),
        psi_big: psi_big(c, a),
        conductance: conductance(c, a),
        reversed,
    }
}

//! Size-indexed profiles: exhaustive minimization of a set functional over
//! all discrete subsets with `pi(A) <= 1/2`, grouped by exact set size.
//!
//! The outer infimum ranges over discrete sets only (the inner flow infima
//! are exactly continuized). Restricting the outer sets keeps every profile
//! a valid upper bound on its fully fractional counterpart; reports built
//! from profiles carry a matching caveat.
//!
//! Enumeration parallelizes over subset masks. Each subset's value is
//! computed independently and combined only through `min`, so the result is
//! bit-identical for every thread count.

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::chain::MarkovChain;
use crate::error::{Error, Result};
use crate::isoperimetry;
use crate::piecewise::StepFunction;
use crate::set::StateSet;
use crate::tol;

/// Default cap on the state count for exhaustive subset enumeration.
pub const ENUM_LIMIT: usize = 22;

/// Set functionals a profile can minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetQuantity {
    Conductance,
    SpreadPlus,
    SpreadMinus,
    SpreadGl,
    SpreadMod,
    PsiEvo,
    PsiBig,
    /// `spread_plus` of the time reversal.
    SpreadPlusReversed,
    /// The composite `pi(A) * psi_gl(A)` appearing in the global-spread
    /// mixing bound.
    GlWeight,
}

impl SetQuantity {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "conductance" => Self::Conductance,
            "psi_plus" => Self::SpreadPlus,
            "psi_minus" => Self::SpreadMinus,
            "psi_gl" => Self::SpreadGl,
            "psi_mod" => Self::SpreadMod,
            "psi_evo" => Self::PsiEvo,
            "psi_big" => Self::PsiBig,
            "psi_plus_rev" => Self::SpreadPlusReversed,
            "gl_weight" => Self::GlWeight,
            other => {
                return Err(Error::BadParam(format!(
                    "unknown quantity {other:?}; expected one of conductance, psi_plus, \
                     psi_minus, psi_gl, psi_mod, psi_evo, psi_big, psi_plus_rev, gl_weight"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Conductance => "conductance",
            Self::SpreadPlus => "psi_plus",
            Self::SpreadMinus => "psi_minus",
            Self::SpreadGl => "psi_gl",
            Self::SpreadMod => "psi_mod",
            Self::PsiEvo => "psi_evo",
            Self::PsiBig => "psi_big",
            Self::SpreadPlusReversed => "psi_plus_rev",
            Self::GlWeight => "gl_weight",
        }
    }

    fn eval(self, chain: &MarkovChain, rev: Option<&MarkovChain>, a: &StateSet) -> f64 {
        match self {
            Self::Conductance => isoperimetry::conductance(chain, a),
            Self::SpreadPlus => isoperimetry::spread_plus(chain, a),
            Self::SpreadMinus => isoperimetry::spread_minus(chain, a),
            Self::SpreadGl => isoperimetry::spread_gl(chain, a),
            Self::SpreadMod => isoperimetry::spread_mod(chain, a),
            Self::PsiEvo => isoperimetry::psi_evo(chain, a),
            Self::PsiBig => isoperimetry::psi_big(chain, a),
            Self::SpreadPlusReversed => {
                isoperimetry::spread_plus(rev.expect("reversal precomputed"), a)
            }
            Self::GlWeight => a.measure() * isoperimetry::spread_gl(chain, a),
        }
    }
}

/// Window of set sizes contributing to the profile value at x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// `inf over pi(A) <= x`, the usual profile.
    AtMostX,
    /// `inf over x/2 <= pi(A) <= x`; where the half-window contains no
    /// achievable size it extends down to the nearest achievable one.
    HalfToX,
}

impl Window {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "at_most_x" => Self::AtMostX,
            "half_to_x" => Self::HalfToX,
            other => {
                return Err(Error::BadParam(format!(
                    "unknown window {other:?}; expected at_most_x or half_to_x"
                )))
            }
        })
    }
}

/// Per-size minima of `f` over all proper nonempty subsets with
/// `pi(A) <= 1/2`, sorted by size. Groups are keyed by the exact f64 size,
/// so equal sizes collapse regardless of which states realize them.
pub(crate) fn minima_by_size<F>(chain: &MarkovChain, limit: usize, f: F) -> Result<Vec<(f64, f64)>>
where
    F: Fn(&StateSet) -> f64 + Sync,
{
    let n = chain.n();
    if n > limit || n >= 64 {
        return Err(Error::TooLarge { n, limit });
    }
    let top: u64 = (1 << n) - 1;
    let groups: BTreeMap<u64, f64> = (1..top)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<u64, f64>, mask| {
            let a = StateSet::from_mask(chain, mask).expect("mask is proper and nonempty");
            let x = a.measure();
            if x <= 0.5 + tol::MASS {
                let v = f(&a);
                acc.entry(x.to_bits())
                    .and_modify(|m| *m = m.min(v))
                    .or_insert(v);
            }
            acc
        })
        .reduce(BTreeMap::new, |mut left, right| {
            for (k, v) in right {
                left.entry(k).and_modify(|m| *m = m.min(v)).or_insert(v);
            }
            left
        });
    // BTreeMap orders by the bit pattern of nonnegative finite f64 sizes,
    // which coincides with numeric order.
    Ok(groups
        .into_iter()
        .map(|(bits, v)| (f64::from_bits(bits), v))
        .collect())
}

pub fn profile_with_limit(
    chain: &MarkovChain,
    quantity: SetQuantity,
    window: Window,
    limit: usize,
) -> Result<StepFunction> {
    let rev = match quantity {
        SetQuantity::SpreadPlusReversed => Some(chain.reversal()),
        _ => None,
    };
    let raw = minima_by_size(chain, limit, |a| quantity.eval(chain, rev.as_ref(), a))?;

    let sizes: Vec<f64> = raw.iter().map(|&(s, _)| s).collect();
    let mins: Vec<f64> = raw.iter().map(|&(_, v)| v).collect();
    let values: Vec<f64> = match window {
        Window::AtMostX => {
            let mut acc = f64::INFINITY;
            mins.iter()
                .map(|&v| {
                    acc = acc.min(v);
                    acc
                })
                .collect()
        }
        Window::HalfToX => (0..sizes.len())
            .map(|k| {
                let lo = sizes[k] / 2.0 - tol::MASS;
                let mut best = f64::INFINITY;
                for j in (0..=k).rev() {
                    if sizes[j] < lo {
                        break;
                    }
                    best = best.min(mins[j]);
                }
                best
            })
            .collect(),
    };

    let end = 0.5f64.max(*sizes.last().expect("at least one achievable size"));
    StepFunction::new(sizes, values, end)
}

/// The exact inf-profile of a set functional over discrete subsets,
/// as a step function of the size x on `[pi_min, max(1/2, largest size)]`.
pub fn profile(chain: &MarkovChain, quantity: SetQuantity, window: Window) -> Result<StepFunction> {
    profile_with_limit(chain, quantity, window, ENUM_LIMIT)
}

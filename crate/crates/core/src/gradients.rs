//! Discrete p-gradients, the exit constants calibrating their sandwich
//! bounds, the Gaussian isoperimetric function, and the tensorization
//! bounds for product chains.

use serde::{Serialize, Serializer};

use crate::chain::MarkovChain;
use crate::error::{Error, Result};
use crate::isoperimetry;
use crate::profile::{minima_by_size, ENUM_LIMIT};
use crate::set::StateSet;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradP {
    One,
    Two,
    Infinity,
}

impl GradP {
    pub fn label(self) -> &'static str {
        match self {
            Self::One => "1",
            Self::Two => "2",
            Self::Infinity => "inf",
        }
    }

    fn apply(self, exit: f64) -> f64 {
        match self {
            Self::One => exit,
            Self::Two => exit.sqrt(),
            Self::Infinity => {
                if exit > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl Serialize for GradP {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn label(self) -> &'static str {
        match self {
            Self::Plus => "plus",
            Self::Minus => "minus",
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// `Q_p(C, D) = sum_{v in C} pi(v) P(v, D)^{1/p}`, with the p = infinity
/// case the measure of the states of `C` that reach `D` in one step.
pub fn q_p(chain: &MarkovChain, from: &StateSet, to: &StateSet, p: GradP) -> f64 {
    from.members()
        .iter()
        .map(|&v| chain.pi_at(v) * p.apply(chain.row_mass(v, to)))
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientRecord {
    pub p: GradP,
    pub sign: Sign,
    pub value: f64,
    pub q_flow: f64,
    pub denominator: f64,
}

/// `h_p^+(A) = Q_p(A, A^c) / min(pi(A), pi(A^c))`; the minus sign swaps the
/// roles of `A` and its complement in the flow.
pub fn h_p(chain: &MarkovChain, a: &StateSet, p: GradP, sign: Sign) -> GradientRecord {
    let ac = a.complement(chain);
    let q_flow = match sign {
        Sign::Plus => q_p(chain, a, &ac, p),
        Sign::Minus => q_p(chain, &ac, a, p),
    };
    let denominator = a.measure().min(ac.measure());
    GradientRecord {
        p,
        sign,
        value: q_flow / denominator,
        q_flow,
        denominator,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExitConstants {
    /// Worst per-state escape probability: `1 - inf_{u in A} P(u, A)`.
    pub p_star: f64,
    /// Smallest positive single-transition probability out of `A`.
    pub p_min: f64,
    /// The same infimum of `P(u, v) / pi(v)`, reported for reference; see
    /// the sandwich notes for why the bounds use the un-normalized value.
    pub p_min_normalized: f64,
}

pub fn exit_constants(chain: &MarkovChain, a: &StateSet) -> Result<ExitConstants> {
    let ac = a.complement(chain);
    let mut worst_hold = f64::INFINITY;
    let mut p_min = f64::INFINITY;
    let mut p_min_normalized = f64::INFINITY;
    for &u in a.members() {
        worst_hold = worst_hold.min(chain.row_mass(u, a));
        for &v in ac.members() {
            let p = chain.prob(u, v);
            if p > 0.0 {
                p_min = p_min.min(p);
                p_min_normalized = p_min_normalized.min(p / chain.pi_at(v));
            }
        }
    }
    if !p_min.is_finite() {
        return Err(Error::NoBoundaryEdge);
    }
    Ok(ExitConstants {
        p_star: 1.0 - worst_hold,
        p_min,
        p_min_normalized,
    })
}

/// Upper and lower estimates bracketing one spread constant through the
/// gradient norms.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub sign: Sign,
    /// `h_2^2 / 2`; sharp when the exit probability is constant on the set.
    pub upper: f64,
    pub lower_log: f64,
    pub lower_sqrt: f64,
    /// `p_min h_inf^2 / 2`.
    pub lower_alon: f64,
    /// `h_1^2 / (2 p_star)`.
    pub lower_js: f64,
    /// The bracketed spread constant itself.
    pub psi: f64,
    pub p_star: f64,
    pub p_min: f64,
    /// True when `12 h_1 h_inf / h_2^2 < e`, where the clamped log bound
    /// carries no information beyond the plain upper estimate.
    pub degenerate_log: bool,
    /// Set-level reports involve no outer enumeration, so this is always
    /// false here; profile-based reports set their own caveat.
    pub discrete_outer_sets: bool,
}

/// The gradient sandwich around `psi_plus` or `psi_minus`.
///
/// The lower bounds use the un-normalized `p_min`: the per-state flow step
/// they rest on needs `P(v, A^c) >= p_min` pointwise, which fails for the
/// normalized variant (on the complete four-state chain with a singleton
/// set the normalized value would exceed the spread itself). The minus-sign
/// constants come from the complement, whose states carry the reverse flow.
pub fn sandwich(chain: &MarkovChain, a: &StateSet, sign: Sign) -> Result<SandwichReport> {
    let x = a.measure();
    if x > 0.5 + tol::MASS {
        return Err(Error::TooBig(x));
    }
    let h1 = h_p(chain, a, GradP::One, sign).value;
    let h2 = h_p(chain, a, GradP::Two, sign).value;
    let hinf = h_p(chain, a, GradP::Infinity, sign).value;
    let constants = match sign {
        Sign::Plus => exit_constants(chain, a)?,
        Sign::Minus => exit_constants(chain, &a.complement(chain))?,
    };
    let psi = match sign {
        Sign::Plus => isoperimetry::spread_plus(chain, a),
        Sign::Minus => isoperimetry::spread_minus(chain, a),
    };
    let h2sq = h2 * h2;
    let ratio = 12.0 * h1 * hinf / h2sq;
    Ok(SandwichReport {
        sign,
        upper: 0.5 * h2sq,
        lower_log: 0.5 * h2sq / ratio.ln().max(1.0),
        lower_sqrt: 0.5 * h2sq * (constants.p_min / constants.p_star).sqrt(),
        lower_alon: 0.5 * constants.p_min * hinf * hinf,
        lower_js: 0.5 * h1 * h1 / constants.p_star,
        psi,
        p_star: constants.p_star,
        p_min: constants.p_min,
        degenerate_log: ratio < std::f64::consts::E,
        discrete_outer_sets: false,
    })
}

/// The Gaussian isoperimetric function `I(x) = phi(Phi^{-1}(x))` for the
/// standard normal density phi and CDF Phi. Symmetric about 1/2 by
/// construction, zero at the endpoints.
pub fn gaussian_iso(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("{x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    if x > 0.5 {
        return gaussian_iso(1.0 - x);
    }
    let z = normal_quantile(x);
    Ok((-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt())
}

/// Standard normal quantile for x in (0, 1/2], polished with Newton steps
/// against the erfc-based CDF until the update stalls.
fn normal_quantile(x: f64) -> f64 {
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut z = -sqrt2 * statrs::function::erf::erfc_inv(2.0 * x);
    for _ in 0..4 {
        let cdf = 0.5 * crate::erf::erfc(-z / sqrt2);
        let pdf = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
        if pdf <= 0.0 {
            break;
        }
        let step = (cdf - x) / pdf;
        z -= step;
        if step.abs() <= 1e-16 * z.abs().max(1.0) {
            break;
        }
    }
    z
}

/// Murali's constant: the exhaustive infimum of
/// `Q(A, A^c)^2 / (pi(A) pi(A^c))` over proper nonempty sets, returned as
/// its positive square root. The objective is complement-symmetric, so
/// enumeration over `pi(A) <= 1/2` covers every set.
pub fn beta_plus(chain: &MarkovChain) -> Result<f64> {
    beta_plus_with_limit(chain, ENUM_LIMIT)
}

pub fn beta_plus_with_limit(chain: &MarkovChain, limit: usize) -> Result<f64> {
    let groups = minima_by_size(chain, limit, |a| {
        let ac = a.complement(chain);
        let q = chain.ergodic_flow(a, &ac);
        q * q / (a.measure() * ac.measure())
    })?;
    let inf = groups
        .into_iter()
        .map(|(_, v)| v)
        .fold(f64::INFINITY, f64::min);
    Ok(inf.sqrt())
}

/// Tensorized vertex-expansion bound for a product of `n` components:
/// `h_2^+(x) >= (1/2) min_i beta_plus(K_i) sqrt(-log x(1-x) / n)`.
pub fn tensor_bound(components: &[MarkovChain], x: f64) -> Result<f64> {
    if components.is_empty() {
        return Err(Error::BadParam("no components".into()));
    }
    if !(0.0 < x && x < 1.0) {
        return Err(Error::DomainError(format!("{x} outside (0, 1)")));
    }
    let mut beta = f64::INFINITY;
    for c in components {
        beta = beta.min(beta_plus(c)?);
    }
    let n = components.len() as f64;
    Ok(0.5 * beta * (-(x * (1.0 - x)).ln() / n).sqrt())
}

/// Talagrand's cube bound: `h_2^+(x) >= (1/4) sqrt(-log x(1-x) / n)`.
pub fn talagrand_bound(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::BadParam("n must be at least 1".into()));
    }
    if !(0.0 < x && x < 1.0) {
        return Err(Error::DomainError(format!("{x} outside (0, 1)")));
    }
    Ok(0.25 * (-(x * (1.0 - x)).ln() / n as f64).sqrt())
}

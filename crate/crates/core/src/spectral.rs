//! Spectral gap, exact mixing times by direct iteration, and the mixing
//! bounds built from isoperimetric profiles.
//!
//! Profile-backed bounds come in two layers: `*_from_profile` functions
//! evaluate a bound from a precomputed step profile (useful when symmetry
//! gives the profile without enumeration), and the chain-level wrappers
//! enumerate the profile first.

use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::chain::MarkovChain;
use crate::dist;
use crate::error::{Error, Result};
use crate::piecewise::StepFunction;
use crate::profile::{profile, SetQuantity, Window};

/// Hard cap on mixing-time iteration.
pub const ITERATION_CAP: u64 = 1_000_000;

/// The paper-shaped constant in the blocking-conductance bound.
const BLOCKING_CONSTANT: f64 = 8.0 * 1376.0;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralRecord {
    pub lambda: f64,
    pub second_eigenvalue: f64,
}

/// Spectral gap of a reversible chain: `1 - mu_2` where `mu_2` is the
/// second largest eigenvalue of `D^{1/2} P D^{-1/2}`, `D = diag(pi)`.
pub fn spectral_gap(chain: &MarkovChain) -> Result<SpectralRecord> {
    if !chain.is_reversible() {
        return Err(Error::NotReversible);
    }
    let n = chain.n();
    let mut s = DMatrix::from_fn(n, n, |i, j| {
        chain.pi_at(i).sqrt() * chain.prob(i, j) / chain.pi_at(j).sqrt()
    });
    // Reversibility makes S symmetric up to rounding; fold the residue.
    let st = s.transpose();
    s = (s + st) * 0.5;
    let mut eigs: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| b.total_cmp(a));
    let second = eigs[1];
    Ok(SpectralRecord {
        lambda: 1.0 - second,
        second_eigenvalue: second,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Tv,
    Chi2,
}

impl Metric {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "tv" => Self::Tv,
            "chi2" => Self::Chi2,
            other => {
                return Err(Error::BadParam(format!(
                    "unknown metric {other:?}; expected tv or chi2"
                )))
            }
        })
    }
}

fn transition_matrix(chain: &MarkovChain) -> DMatrix<f64> {
    let n = chain.n();
    DMatrix::from_fn(n, n, |i, j| chain.prob(i, j))
}

/// Smallest t at which the worst-start distance to stationarity drops to
/// `epsilon`. Point-mass starts suffice: both distances are convex in the
/// start distribution, so the maximum over starts sits at a vertex of the
/// simplex.
pub fn exact_mixing(chain: &MarkovChain, epsilon: f64, metric: Metric) -> Result<u64> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::DomainError(format!(
            "epsilon {epsilon} outside (0, 1)"
        )));
    }
    let n = chain.n();
    let p = transition_matrix(chain);
    let pi = chain.pi();
    let mut powers = DMatrix::<f64>::identity(n, n);
    let mut row = vec![0.0; n];
    for t in 0..=ITERATION_CAP {
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for j in 0..n {
                row[j] = powers[(x, j)];
            }
            let d = match metric {
                Metric::Tv => dist::tv_raw(&row, pi),
                Metric::Chi2 => dist::chi2_raw(&row, pi),
            };
            worst = worst.max(d);
        }
        if worst <= epsilon {
            return Ok(t);
        }
        powers *= &p;
    }
    Err(Error::IterationCap(ITERATION_CAP))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HVariant {
    Plus,
    Mod,
    Gl,
}

impl HVariant {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "plus" => Self::Plus,
            "mod" => Self::Mod,
            "gl" => Self::Gl,
            other => {
                return Err(Error::BadParam(format!(
                    "unknown h variant {other:?}; expected plus, mod or gl"
                )))
            }
        })
    }
}

/// `8 * 1376 * (int_{pi0}^{1/2} h(x) dx + h(1/2))` for an h of the form
/// `1/(x * prof(x))` (`reciprocal_x` true) or `1/prof(x)` (false).
/// The profile's first segment is extended down to `pi0` if needed.
pub fn blocking_tau_from_profile(prof: &StepFunction, pi0: f64, reciprocal_x: bool) -> Result<f64> {
    let prof = prof.extended_down(pi0);
    let integral = if reciprocal_x {
        prof.integral_recip_x(pi0, 0.5)?
    } else {
        prof.integral_recip(pi0, 0.5)?
    };
    let at_half = prof.eval(0.5)?;
    let h_half = if reciprocal_x {
        1.0 / (0.5 * at_half)
    } else {
        1.0 / at_half
    };
    Ok(BLOCKING_CONSTANT * (integral + h_half))
}

/// Blocking-conductance upper bound on the TV mixing time at 1/4,
/// applicable to reversible chains only.
pub fn bound_blocking_tau(chain: &MarkovChain, variant: HVariant) -> Result<f64> {
    if !chain.is_reversible() {
        return Err(Error::NotReversible);
    }
    let (prof, reciprocal_x) = match variant {
        HVariant::Plus => (
            profile(chain, SetQuantity::SpreadPlus, Window::HalfToX)?,
            true,
        ),
        HVariant::Mod => (
            profile(chain, SetQuantity::SpreadMod, Window::AtMostX)?,
            true,
        ),
        HVariant::Gl => (
            profile(chain, SetQuantity::GlWeight, Window::AtMostX)?,
            false,
        ),
    };
    blocking_tau_from_profile(&prof, chain.pi_min(), reciprocal_x)
}

/// `int_{pi0}^{1/2} dx/(x psi_evo(x)) + log(8/eps)/psi_evo(1/2)` from a
/// precomputed evolving-set profile.
pub fn chi2_evolving_from_profile(prof: &StepFunction, pi0: f64, epsilon: f64) -> Result<f64> {
    let prof = prof.extended_down(pi0);
    Ok(prof.integral_recip_x(pi0, 0.5)? + (8.0 / epsilon).ln() / prof.eval(0.5)?)
}

/// Evolving-set upper bound on the chi-square mixing time; works for
/// non-reversible chains but needs laziness.
pub fn bound_chi2_evolving(chain: &MarkovChain, epsilon: f64) -> Result<f64> {
    require_lazy(chain)?;
    require_epsilon(epsilon)?;
    let prof = profile(chain, SetQuantity::PsiEvo, Window::AtMostX)?;
    chi2_evolving_from_profile(&prof, chain.pi_min(), epsilon)
}

/// Both spread-based chi-square bounds from a reversed-spread profile:
/// the integral form `4 int dx/(x psi(x)) + 4 log(2/eps^2)/psi(1/2)` and
/// the flat form `(2/psi(1/2)) (log(1/pi0) + 2 log(1/2eps))`.
pub fn chi2_spread_from_profile(prof: &StepFunction, pi0: f64, epsilon: f64) -> Result<(f64, f64)> {
    let prof = prof.extended_down(pi0);
    let at_half = prof.eval(0.5)?;
    let integral_form =
        4.0 * prof.integral_recip_x(pi0, 0.5)? + 4.0 * (2.0 / (epsilon * epsilon)).ln() / at_half;
    let flat_form = 2.0 / at_half * ((1.0 / pi0).ln() + 2.0 * (1.0 / (2.0 * epsilon)).ln());
    Ok((integral_form, flat_form))
}

pub fn bound_chi2_spread(chain: &MarkovChain, epsilon: f64) -> Result<(f64, f64)> {
    require_lazy(chain)?;
    require_epsilon(epsilon)?;
    let prof = profile(chain, SetQuantity::SpreadPlusReversed, Window::AtMostX)?;
    chi2_spread_from_profile(&prof, chain.pi_min(), epsilon)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralSandwich {
    /// `4 psi_big(1/2)`.
    pub upper: f64,
    /// `psi_plus(1/2) / 4`.
    pub lower: f64,
    pub lambda: f64,
}

/// The two-sided spectral estimate `4 psi_big(1/2) >= lambda >=
/// psi_plus(1/2)/4` for lazy reversible chains.
pub fn bound_spectral_sandwich(chain: &MarkovChain) -> Result<SpectralSandwich> {
    let gap = spectral_gap(chain)?;
    let big = profile(chain, SetQuantity::PsiBig, Window::AtMostX)?.eval(0.5)?;
    let plus = profile(chain, SetQuantity::SpreadPlus, Window::AtMostX)?.eval(0.5)?;
    Ok(SpectralSandwich {
        upper: 4.0 * big,
        lower: 0.25 * plus,
        lambda: gap.lambda,
    })
}

/// Lower bounds on the TV mixing time: the psi_big form
/// `(1 - 4 psi_big(1/2))/(8 psi_big(1/2)) log(1/2eps)` and the spectral
/// form `(1 - lambda)/(2 lambda) log(1/2eps)`. Vacuous (negative) values
/// clamp to zero.
pub fn bound_tau_lower(chain: &MarkovChain, epsilon: f64) -> Result<(f64, f64)> {
    require_epsilon(epsilon)?;
    let gap = spectral_gap(chain)?;
    let big = profile(chain, SetQuantity::PsiBig, Window::AtMostX)?.eval(0.5)?;
    let log_term = (1.0 / (2.0 * epsilon)).ln();
    let psi_big_form = ((1.0 - 4.0 * big) / (8.0 * big) * log_term).max(0.0);
    let gap_form = (0.5 * (1.0 - gap.lambda) / gap.lambda * log_term).max(0.0);
    Ok((psi_big_form, gap_form))
}

/// Both sides of the pointwise chi-square product estimate
/// `max_{x,z} P^{n+m}(x,z)/pi(z) - 1 <= |P^n(x,.) - pi| |rev^m(z,.) - pi|`
/// in the chi-square norms, evaluated at the maximizing pair `(x, z)`.
pub fn pointwise_bound_check(chain: &MarkovChain, n_steps: u32, m_steps: u32) -> (f64, f64) {
    let n = chain.n();
    let p = transition_matrix(chain);
    let rev = chain.reversal();
    let p_rev = transition_matrix(&rev);

    let mut total = DMatrix::<f64>::identity(n, n);
    for _ in 0..(n_steps + m_steps) {
        total *= &p;
    }
    let (mut best_x, mut best_z, mut lhs) = (0, 0, f64::NEG_INFINITY);
    for x in 0..n {
        for z in 0..n {
            let v = total[(x, z)] / chain.pi_at(z) - 1.0;
            if v > lhs {
                (best_x, best_z, lhs) = (x, z, v);
            }
        }
    }

    let mut fwd = DMatrix::<f64>::identity(n, n);
    for _ in 0..n_steps {
        fwd *= &p;
    }
    let mut bwd = DMatrix::<f64>::identity(n, n);
    for _ in 0..m_steps {
        bwd *= &p_rev;
    }
    let row_fwd: Vec<f64> = (0..n).map(|j| fwd[(best_x, j)]).collect();
    let row_bwd: Vec<f64> = (0..n).map(|j| bwd[(best_z, j)]).collect();
    let rhs =
        dist::chi2_raw(&row_fwd, chain.pi()).sqrt() * dist::chi2_raw(&row_bwd, chain.pi()).sqrt();
    (lhs, rhs)
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingReport {
    pub epsilon: f64,
    pub tau_exact: u64,
    pub chi2_exact: u64,
    pub bounds: BTreeMap<String, f64>,
    pub lower_bounds: BTreeMap<String, f64>,
    pub caveats: Vec<String>,
}

/// Exact mixing times plus every profile bound the chain qualifies for.
/// The blocking bounds target the TV time at 1/4 regardless of `epsilon`;
/// the chi-square bounds use `epsilon` directly.
pub fn mixing_report(chain: &MarkovChain, epsilon: f64) -> Result<MixingReport> {
    let tau_exact = exact_mixing(chain, epsilon, Metric::Tv)?;
    let chi2_exact = exact_mixing(chain, epsilon, Metric::Chi2)?;
    let mut bounds = BTreeMap::new();
    let mut lower_bounds = BTreeMap::new();
    if chain.is_reversible() {
        bounds.insert(
            "blocking_tau_quarter_plus".into(),
            bound_blocking_tau(chain, HVariant::Plus)?,
        );
        bounds.insert(
            "blocking_tau_quarter_mod".into(),
            bound_blocking_tau(chain, HVariant::Mod)?,
        );
        bounds.insert(
            "blocking_tau_quarter_gl".into(),
            bound_blocking_tau(chain, HVariant::Gl)?,
        );
        let (psi_big_form, gap_form) = bound_tau_lower(chain, epsilon)?;
        lower_bounds.insert("tau_lower_psi_big".into(), psi_big_form);
        lower_bounds.insert("tau_lower_gap".into(), gap_form);
    }
    if chain.is_lazy() {
        bounds.insert("chi2_evolving".into(), bound_chi2_evolving(chain, epsilon)?);
        let (integral_form, flat_form) = bound_chi2_spread(chain, epsilon)?;
        bounds.insert("chi2_spread_integral".into(), integral_form);
        bounds.insert("chi2_spread_flat".into(), flat_form);
    }
    Ok(MixingReport {
        epsilon,
        tau_exact,
        chi2_exact,
        bounds,
        lower_bounds,
        caveats: vec!["discrete-outer-sets".into()],
    })
}

fn require_lazy(chain: &MarkovChain) -> Result<()> {
    if chain.is_lazy() {
        Ok(())
    } else {
        let min_hold = (0..chain.n())
            .map(|x| chain.prob(x, x))
            .fold(f64::INFINITY, f64::min);
        Err(Error::NotLazy(min_hold))
    }
}

fn require_epsilon(epsilon: f64) -> Result<()> {
    if 0.0 < epsilon && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "epsilon {epsilon} outside (0, 1)"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;
    use approx::assert_abs_diff_eq;

    fn k4() -> MarkovChain {
        let rows = vec![
            vec![0.625, 0.125, 0.125, 0.125],
            vec![0.125, 0.625, 0.125, 0.125],
            vec![0.125, 0.125, 0.625, 0.125],
            vec![0.125, 0.125, 0.125, 0.625],
        ];
        MarkovChain::from_rows(&rows).unwrap()
    }

    fn rotor3() -> MarkovChain {
        let rows = vec![
            vec![0.5, 1.0 / 3.0, 1.0 / 6.0],
            vec![1.0 / 6.0, 0.5, 1.0 / 3.0],
            vec![1.0 / 3.0, 1.0 / 6.0, 0.5],
        ];
        MarkovChain::from_rows(&rows).unwrap()
    }

    #[test]
    fn k4_gap_is_one_half() {
        let rec = spectral_gap(&k4()).unwrap();
        assert_abs_diff_eq!(rec.lambda, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rec.second_eigenvalue, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn lazify_halves_the_gap() {
        let rows = vec![vec![0.75, 0.25], vec![0.25, 0.75]];
        let c = MarkovChain::from_rows(&rows).unwrap();
        let before = spectral_gap(&c).unwrap().lambda;
        let after = spectral_gap(&c.lazify()).unwrap().lambda;
        assert_abs_diff_eq!(after, before / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn non_reversible_chains_have_no_gap_record() {
        assert!(matches!(spectral_gap(&rotor3()), Err(Error::NotReversible)));
    }

    #[test]
    fn k4_exact_mixing_times_at_one_quarter() {
        let c = k4();
        assert_eq!(exact_mixing(&c, 0.25, Metric::Tv).unwrap(), 2);
        assert_eq!(exact_mixing(&c, 0.25, Metric::Chi2).unwrap(), 2);
        assert!(exact_mixing(&c, 1.5, Metric::Tv).is_err());
    }

    #[test]
    fn k4_tau_lower_bounds_match_hand_arithmetic() {
        let (psi_big_form, gap_form) = bound_tau_lower(&k4(), 0.25).unwrap();
        assert_abs_diff_eq!(psi_big_form, 0.5 * 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(gap_form, 0.5 * 2f64.ln(), epsilon = 1e-12);
        assert!(psi_big_form <= 2.0 && gap_form <= 2.0);
    }

    #[test]
    fn k4_spectral_sandwich_is_tight_above() {
        let s = bound_spectral_sandwich(&k4()).unwrap();
        assert_abs_diff_eq!(s.upper, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.lambda, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.lower, 0.125 / 4.0, epsilon = 1e-12);
        assert!(s.upper >= s.lambda - tol::SLACK && s.lambda >= s.lower - tol::SLACK);
    }

    #[test]
    fn k4_flat_spread_bound_matches_hand_value() {
        let (integral_form, flat_form) = bound_chi2_spread(&k4(), 0.25).unwrap();
        // psi_plus(1/2) = 1/8; log(1/pi0) = log 4; 2 log(1/2eps) = 2 log 2.
        assert_abs_diff_eq!(flat_form, 16.0 * 4.0 * 2f64.ln(), epsilon = 1e-10);
        assert!(integral_form >= 2.0 && flat_form >= 2.0);
    }

    #[test]
    fn k4_upper_bounds_dominate_exact_times() {
        let c = k4();
        let report = mixing_report(&c, 0.25).unwrap();
        assert_eq!(report.tau_exact, 2);
        assert_eq!(report.chi2_exact, 2);
        for (name, value) in &report.bounds {
            let target = if name.starts_with("blocking") {
                report.tau_exact
            } else {
                report.chi2_exact
            };
            assert!(
                *value >= target as f64,
                "{name} = {value} below exact {target}"
            );
        }
        for value in report.lower_bounds.values() {
            assert!(*value <= report.tau_exact as f64);
        }
        assert_eq!(report.caveats, vec!["discrete-outer-sets".to_string()]);
    }

    #[test]
    fn evolving_bound_accepts_the_non_reversible_rotor() {
        let c = rotor3();
        let bound = bound_chi2_evolving(&c, 0.25).unwrap();
        let exact = exact_mixing(&c, 0.25, Metric::Chi2).unwrap();
        assert!(bound >= exact as f64);
        assert!(matches!(
            bound_blocking_tau(&c, HVariant::Plus),
            Err(Error::NotReversible)
        ));
    }

    #[test]
    fn pointwise_check_at_zero_steps_is_tight() {
        let c = rotor3();
        let (lhs, rhs) = pointwise_bound_check(&c, 0, 0);
        assert_abs_diff_eq!(lhs, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rhs, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn pointwise_check_holds_after_one_step_each_way() {
        let (lhs, rhs) = pointwise_bound_check(&k4(), 1, 1);
        assert!(lhs <= rhs + tol::SLACK, "{lhs} > {rhs}");
    }
}

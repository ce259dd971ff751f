//! Exhaustive inequality audit: every proper subset of the state space is
//! run through the identity and theorem checks, and anything outside its
//! slack is reported as a violation.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::MarkovChain;
use crate::error::{Error, Result};
use crate::gradients::{self, GradP, Sign};
use crate::isoperimetry;
use crate::set::StateSet;
use crate::tol;

/// Largest state count accepted without an explicit override.
pub const VERIFY_LIMIT: usize = 22;

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub mask: u64,
    pub set: Vec<usize>,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n_states: usize,
    pub subsets_checked: u64,
    pub checks_run: u64,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One subset's worth of checks; violations carry the subset so they can
/// be merged and sorted afterwards.
struct SubsetAudit<'a> {
    chain: &'a MarkovChain,
    mask: u64,
    members: Vec<usize>,
    checks: u64,
    violations: Vec<Violation>,
}

impl<'a> SubsetAudit<'a> {
    fn record(&mut self, check: &str, lhs: f64, rhs: f64, slack: f64, ok: bool) {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                mask: self.mask,
                set: self.members.clone(),
                check: check.to_string(),
                lhs,
                rhs,
                slack,
            });
        }
    }

    /// lhs = rhs within slack.
    fn equal(&mut self, check: &str, lhs: f64, rhs: f64, slack: f64) {
        let ok = (lhs - rhs).abs() <= slack && lhs.is_finite() && rhs.is_finite();
        self.record(check, lhs, rhs, slack, ok);
    }

    /// lhs >= rhs - slack.
    fn at_least(&mut self, check: &str, lhs: f64, rhs: f64, slack: f64) {
        let ok = lhs >= rhs - slack && lhs.is_finite() && rhs.is_finite();
        self.record(check, lhs, rhs, slack, ok);
    }

    fn run(&mut self, rev: &MarkovChain) -> Result<()> {
        let chain = self.chain;
        let a = StateSet::from_mask(chain, self.mask)?;
        let ac = a.complement(chain);

        // Stationarity makes the ergodic flow symmetric.
        self.equal(
            "flow_symmetry",
            chain.ergodic_flow(&a, &ac),
            chain.ergodic_flow(&ac, &a),
            tol::MASS,
        );

        let record = isoperimetry::spread_record(chain, &a, false);
        self.equal(
            "gl_decomposition",
            record.psi_gl,
            record.psi_plus + record.psi_minus,
            tol::RECORD,
        );
        self.equal(
            "big_split",
            record.psi_big + record.psi_plus,
            record.conductance,
            tol::RECORD,
        );
        self.at_least(
            "big_below_conductance",
            record.conductance,
            record.psi_big,
            tol::SLACK,
        );
        self.at_least(
            "big_above_half_conductance",
            record.psi_big,
            0.5 * record.conductance,
            tol::SLACK,
        );

        let levels = isoperimetry::level_set_profile(chain, &a);
        self.equal(
            "martingale",
            levels.integral(0.0, 1.0)?,
            a.measure(),
            tol::MASS,
        );

        for sign in [Sign::Plus, Sign::Minus] {
            let h1 = gradients::h_p(chain, &a, GradP::One, sign).value;
            let h2 = gradients::h_p(chain, &a, GradP::Two, sign).value;
            let hinf = gradients::h_p(chain, &a, GradP::Infinity, sign).value;
            self.at_least(
                &format!("cauchy_schwarz_{}", sign.label()),
                h1 * hinf,
                h2 * h2,
                tol::MASS,
            );
        }

        if !chain.is_lazy() {
            return Ok(());
        }

        // Laziness turns on the level-set rewrite and the theorem suites.
        let rewrite = isoperimetry::psi_plus_via_levelsets(chain, &a)?;
        let reversed_plus = isoperimetry::spread_plus(rev, &a);
        self.equal("levelset_rewrite", rewrite, reversed_plus, tol::RECORD);

        if a.measure() > 0.5 + tol::MASS {
            return Ok(());
        }

        let reversed_gl = isoperimetry::spread_gl(rev, &a);
        let reversed_mod = isoperimetry::spread_mod(rev, &a);
        let evo = isoperimetry::psi_evo(chain, &a);
        self.at_least(
            "theorem_chain_gl_mod",
            reversed_gl,
            0.5 * reversed_mod,
            tol::SLACK,
        );
        self.at_least("theorem_chain_mod_evo", 0.5 * reversed_mod, evo, tol::SLACK);
        self.at_least(
            "theorem_chain_evo_plus",
            evo,
            0.25 * reversed_plus,
            tol::SLACK,
        );
        self.at_least(
            "reversed_plus_vs_conductance_sq",
            reversed_plus,
            record.conductance * record.conductance,
            tol::SLACK,
        );

        for sign in [Sign::Plus, Sign::Minus] {
            let s = gradients::sandwich(chain, &a, sign)?;
            let tag = sign.label();
            self.at_least(&format!("sandwich_{tag}_upper"), s.upper, s.psi, tol::SLACK);
            self.at_least(
                &format!("sandwich_{tag}_log"),
                s.psi,
                s.lower_log,
                tol::SLACK,
            );
            self.at_least(
                &format!("sandwich_{tag}_sqrt"),
                s.psi,
                s.lower_sqrt,
                tol::SLACK,
            );
            self.at_least(
                &format!("sandwich_{tag}_alon"),
                s.psi,
                s.lower_alon,
                tol::SLACK,
            );
            self.at_least(&format!("sandwich_{tag}_js"), s.psi, s.lower_js, tol::SLACK);
        }
        Ok(())
    }
}

fn audit_mask(chain: &MarkovChain, rev: &MarkovChain, mask: u64) -> Result<(u64, Vec<Violation>)> {
    let members: Vec<usize> = (0..chain.n()).filter(|&v| mask >> v & 1 == 1).collect();
    let mut audit = SubsetAudit {
        chain,
        mask,
        members,
        checks: 0,
        violations: Vec::new(),
    };
    audit.run(rev)?;
    Ok((audit.checks, audit.violations))
}

pub fn verify_chain(chain: &MarkovChain) -> Result<VerifyReport> {
    verify_chain_with_limit(chain, VERIFY_LIMIT)
}

/// Check every proper nonempty subset. Each subset's numbers are computed
/// independently and merged by concatenation, so the report is identical
/// for any thread count.
pub fn verify_chain_with_limit(chain: &MarkovChain, limit: usize) -> Result<VerifyReport> {
    let n = chain.n();
    if n > limit || n >= 64 {
        return Err(Error::TooLarge {
            n,
            limit: limit.min(63),
        });
    }
    let rev = chain.reversal();
    let top = (1u64 << n) - 1;
    let audited: Vec<(u64, Vec<Violation>)> = (1..top)
        .into_par_iter()
        .map(|mask| audit_mask(chain, &rev, mask))
        .collect::<Result<_>>()?;
    let mut checks_run = 0;
    let mut violations = Vec::new();
    for (checks, mut subset_violations) in audited {
        checks_run += checks;
        violations.append(&mut subset_violations);
    }
    violations.sort_by(|a, b| (a.mask, &a.check).cmp(&(b.mask, &b.check)));
    Ok(VerifyReport {
        n_states: n,
        subsets_checked: top - 1,
        checks_run,
        violations,
    })
}

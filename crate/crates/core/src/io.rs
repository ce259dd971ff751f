//! Chain files and profile exports.
//!
//! A chain file is JSON: `{"n": states, "P": [[row-major reals]], "pi":
//! optional [reals]}`. A supplied `pi` is cross-checked against the
//! computed stationary distribution and rejected on disagreement, so a
//! file can carry its expected answer as a self-test.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chain::MarkovChain;
use crate::error::{Error, Result};
use crate::piecewise::StepFunction;

/// Largest allowed pointwise gap between a supplied `pi` and the computed
/// stationary distribution.
const PI_CHECK: f64 = 1e-9;

#[derive(Debug, Serialize, Deserialize)]
pub struct ChainFile {
    pub n: usize,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<f64>>,
}

pub fn chain_from_json(text: &str) -> Result<MarkovChain> {
    let file: ChainFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if file.p.len() != file.n {
        return Err(Error::Format(format!(
            "header says n = {} but P has {} rows",
            file.n,
            file.p.len()
        )));
    }
    if let Some(row) = file.p.iter().find(|row| row.len() != file.n) {
        return Err(Error::Format(format!(
            "P must be square: found a row of length {} in a {}-state chain",
            row.len(),
            file.n
        )));
    }
    let chain = MarkovChain::from_rows(&file.p)?;
    if let Some(pi) = &file.pi {
        if pi.len() != file.n {
            return Err(Error::Format(format!(
                "pi has {} entries for {} states",
                pi.len(),
                file.n
            )));
        }
        for (v, &claimed) in pi.iter().enumerate() {
            let actual = chain.pi_at(v);
            if (claimed - actual).abs() > PI_CHECK {
                return Err(Error::BadParam(format!(
                    "supplied pi({v}) = {claimed} but the stationary distribution \
                     has {actual}"
                )));
            }
        }
    }
    Ok(chain)
}

pub fn load_chain(path: &Path) -> Result<MarkovChain> {
    let text = std::fs::read_to_string(path)?;
    chain_from_json(&text)
}

/// Serialize a chain, always including the computed stationary
/// distribution so the file round-trips through the `pi` cross-check.
pub fn chain_to_json(chain: &MarkovChain) -> String {
    let n = chain.n();
    let file = ChainFile {
        n,
        p: (0..n).map(|v| chain.row(v).to_vec()).collect(),
        pi: Some((0..n).map(|v| chain.pi_at(v)).collect()),
    };
    serde_json::to_string_pretty(&file).expect("chain serialization cannot fail")
}

pub fn save_chain(chain: &MarkovChain, path: &Path) -> Result<()> {
    std::fs::write(path, chain_to_json(chain) + "\n")?;
    Ok(())
}

/// CSV with header `x,value`, one row per breakpoint, 17 significant
/// digits (enough to reproduce every f64 exactly).
pub fn profile_csv(profile: &StepFunction) -> String {
    let mut out = String::from("x,value\n");
    for (x, v) in profile.xs().iter().zip(profile.values()) {
        out.push_str(&format!("{x:.16e},{v:.16e}\n"));
    }
    out
}

pub fn save_profile_csv(profile: &StepFunction, path: &Path) -> Result<()> {
    std::fs::write(path, profile_csv(profile))?;
    Ok(())
}

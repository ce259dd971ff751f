//! Probability distributions on a finite state space and the two distances
//! used for mixing: total variation and chi-square.

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::DomainError(format!("weight {w} at state {i}")));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol::MASS {
            return Err(Error::DomainError(format!("total mass {sum}")));
        }
        Ok(Distribution(weights))
    }

    pub fn point_mass(n: usize, x: usize) -> Result<Self> {
        if x >= n {
            return Err(Error::DomainError(format!("state {x} out of range {n}")));
        }
        let mut w = vec![0.0; n];
        w[x] = 1.0;
        Ok(Distribution(w))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Total variation distance `1/2 sum |p - q|`.
pub fn tv_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DomainError(format!(
            "distribution sizes {} and {} differ",
            p.len(),
            q.len()
        )));
    }
    Ok(tv_raw(p.as_slice(), q.as_slice()))
}

/// Chi-square distance `sum (p/pi - 1)^2 pi` to a strictly positive
/// reference distribution.
pub fn chi2_distance(p: &Distribution, pi: &Distribution) -> Result<f64> {
    if p.len() != pi.len() {
        return Err(Error::DomainError(format!(
            "distribution sizes {} and {} differ",
            p.len(),
            pi.len()
        )));
    }
    if let Some(z) = pi.as_slice().iter().position(|&m| m <= 0.0) {
        return Err(Error::ZeroReferenceMass(z));
    }
    Ok(chi2_raw(p.as_slice(), pi.as_slice()))
}

/// Unvalidated total variation on raw slices; callers guarantee equal length.
pub(crate) fn tv_raw(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Unvalidated chi-square on raw slices; callers guarantee a positive
/// reference.
pub(crate) fn chi2_raw(p: &[f64], pi: &[f64]) -> f64 {
    p.iter()
        .zip(pi)
        .map(|(a, m)| {
            let d = a - m;
            d * d / m
        })
        .sum()
}

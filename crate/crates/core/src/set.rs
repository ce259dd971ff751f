//! Nonempty proper subsets of a chain's state space.
//!
//! A [`StateSet`] caches its sorted member list, a bitmask for O(1)
//! membership, and its stationary measure. The measure is summed in state
//! order, so equal subsets always carry bit-identical measures.

use crate::chain::MarkovChain;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StateSet {
    n: usize,
    blocks: Vec<u64>,
    members: Vec<usize>,
    measure: f64,
}

impl StateSet {
    /// Builds a set from state indices (duplicates allowed, order ignored).
    pub fn from_indices(chain: &MarkovChain, indices: &[usize]) -> Result<Self> {
        let n = chain.n();
        let mut blocks = vec![0u64; n.div_ceil(64)];
        for &v in indices {
            if v >= n {
                return Err(Error::DomainError(format!(
                    "state {v} out of range for a {n}-state chain"
                )));
            }
            blocks[v / 64] |= 1 << (v % 64);
        }
        Self::from_blocks(chain, blocks)
    }

    /// Builds a set from a bitmask; only valid for chains with at most 64
    /// states, where it is the cheap path for exhaustive enumeration.
    pub fn from_mask(chain: &MarkovChain, mask: u64) -> Result<Self> {
        let n = chain.n();
        if n > 64 {
            return Err(Error::DomainError(format!(
                "bitmask construction needs n <= 64, chain has {n} states"
            )));
        }
        if n < 64 && mask >> n != 0 {
            return Err(Error::DomainError(format!(
                "mask {mask:#x} has bits outside the {n}-state space"
            )));
        }
        Self::from_blocks(chain, vec![mask])
    }

    fn from_blocks(chain: &MarkovChain, blocks: Vec<u64>) -> Result<Self> {
        let n = chain.n();
        let mut members = Vec::new();
        for v in 0..n {
            if blocks[v / 64] >> (v % 64) & 1 == 1 {
                members.push(v);
            }
        }
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        if members.len() == n {
            return Err(Error::FullSet);
        }
        let measure = members.iter().map(|&v| chain.pi_at(v)).sum();
        Ok(StateSet {
            n,
            blocks,
            members,
            measure,
        })
    }

    pub fn complement(&self, chain: &MarkovChain) -> StateSet {
        let mut blocks: Vec<u64> = self.blocks.iter().map(|b| !b).collect();
        // Clear the padding bits above state n-1.
        let spare = self.n % 64;
        if spare != 0 {
            *blocks.last_mut().unwrap() &= (1u64 << spare) - 1;
        }
        // A proper nonempty subset always has a proper nonempty complement.
        StateSet::from_blocks(chain, blocks).unwrap()
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.blocks[v / 64] >> (v % 64) & 1 == 1
    }

    /// Member states in increasing order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Stationary measure `pi(A)`.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// The mask for chains with at most 64 states.
    pub fn mask(&self) -> Option<u64> {
        if self.n <= 64 {
            Some(self.blocks[0])
        } else {
            None
        }
    }
}

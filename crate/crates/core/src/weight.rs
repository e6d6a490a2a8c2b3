//! Hamming weight of linear spaces and their cosets over `B`.

use crate::error::{Error, Result};
use crate::linalg::BMatrix;

/// A vector over the base field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubVector(pub Vec<u8>);

impl SubVector {
    pub fn zeros(m: usize) -> Self {
        SubVector(vec![0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, _)| j).collect()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&x| x != 0).count()
    }
}

/// Support size and total weight of the coset `y + rowspace(G)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetWeight {
    /// `|supp(W)| = nz(G)`.
    pub support: usize,
    /// `sum_{w in W} wt(y + w)`.
    pub total_weight: u128,
}

/// Weight of `y + W` where `W` is the row space of `g`, from column counts
/// alone: each nonzero column of `g` takes every value of `B` exactly
/// `q^(k-1)` times across the coset, and every zero column is constant.
pub fn coset_weight(g: &BMatrix, y: &SubVector) -> Result<CosetWeight> {
    if y.len() != g.cols() {
        return Err(Error::Dimension(format!(
            "coset shift of length {} for {} columns",
            y.len(),
            g.cols()
        )));
    }
    let k = g.rows() as u32;
    if g.rank() != g.rows() {
        return Err(Error::DependentRows);
    }
    let q = g.q() as u128;
    let support = g.nonzero_columns();
    let outside = y.support().iter().filter(|j| !support.contains(j)).count() as u128;
    let total_weight = if k == 0 {
        outside
    } else {
        support.len() as u128 * q.pow(k - 1) * (q - 1) + outside * q.pow(k)
    };
    Ok(CosetWeight { support: support.len(), total_weight })
}

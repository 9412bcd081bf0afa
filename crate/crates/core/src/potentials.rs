//! Structurally Markov target distributions.
//!
//! A distribution over decomposable graphs of the form
//! `π(G) ∝ Π_C φ(C) / Π_S φ(S)` is fixed by a potential `φ` on vertex sets.
//! Everything here works in the log domain; `φ = 0` is `-∞`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set::VertexSet;

/// A log-domain potential on vertex sets.
pub trait Potential<T: Scalar>: Send + Sync {
    /// `log φ(set)`; `-∞` encodes a zero potential. Must be finite on `∅`.
    fn log_phi(&self, set: &VertexSet) -> T;

    fn name(&self) -> String;

    /// Log Metropolis ratio `π(G⁻)/π(G)` for removing the edge `(x, y)`,
    /// given `S_xy`:
    /// `log φ(S_x) + log φ(S_y) − log φ(S_xy) − log φ(C_xy)`.
    ///
    /// The reverse move (adding `(x, y)`) has the negated ratio.
    fn log_ratio_disconnect(&self, local: &LocalSets) -> T {
        let gain = self.log_phi(&local.sx) + self.log_phi(&local.sy);
        let loss = self.log_phi(&local.sxy) + self.log_phi(&local.cxy);
        ratio(gain, loss)
    }

    /// Log Metropolis ratio `π(G⁺)/π(G)` for adding the edge `(x, y)`.
    fn log_ratio_connect(&self, local: &LocalSets) -> T {
        let gain = self.log_phi(&local.sxy) + self.log_phi(&local.cxy);
        let loss = self.log_phi(&local.sx) + self.log_phi(&local.sy);
        ratio(gain, loss)
    }
}

/// `gain − loss` where `loss = −∞` means the local sets of the current
/// state carry zero potential. Such a move cannot be a legal move out of a
/// positive-probability state, so it is scored `-∞` instead of NaN or `+∞`.
fn ratio<T: Scalar>(gain: T, loss: T) -> T {
    if loss == T::neg_infinity() {
        T::neg_infinity()
    } else {
        gain - loss
    }
}

/// The four sets that determine a single-edge move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSets {
    pub sxy: VertexSet,
    pub sx: VertexSet,
    pub sy: VertexSet,
    pub cxy: VertexSet,
}

impl LocalSets {
    pub fn new(x: usize, y: usize, sxy: VertexSet) -> Self {
        let sx = sxy.with(x);
        let sy = sxy.with(y);
        let cxy = sx.with(y);
        Self { sxy, sx, sy, cxy }
    }
}

/// The built-in potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialModel<T> {
    /// `φ ≡ 1`: uniform over decomposable graphs.
    Uniform,
    /// `φ(A) = 1` if `|A| ≤ k`, else 0: uniform over decomposable graphs
    /// whose cliques have at most `k` vertices.
    MaxClique { k: usize },
    /// `log φ(A) = −α |A|(|A|−1)/2`, giving `π(G) ∝ exp(−α |E|)`.
    EdgePenalty { alpha: T },
}

impl<T: Scalar> PotentialModel<T> {
    pub fn uniform() -> Self {
        PotentialModel::Uniform
    }

    pub fn max_clique(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("max clique size must be at least 1".into()));
        }
        Ok(PotentialModel::MaxClique { k })
    }

    pub fn edge_penalty(alpha: T) -> Self {
        PotentialModel::EdgePenalty { alpha }
    }
}

impl<T: Scalar> Potential<T> for PotentialModel<T> {
    fn log_phi(&self, set: &VertexSet) -> T {
        match *self {
            PotentialModel::Uniform => T::zero(),
            PotentialModel::MaxClique { k } => {
                if set.len() <= k {
                    T::zero()
                } else {
                    T::neg_infinity()
                }
            }
            PotentialModel::EdgePenalty { alpha } => -alpha * T::of_count(set.pair_count()),
        }
    }

    fn name(&self) -> String {
        match self {
            PotentialModel::Uniform => "uniform".into(),
            PotentialModel::MaxClique { k } => format!("max-clique(k={k})"),
            PotentialModel::EdgePenalty { alpha } => format!("edge-penalty(alpha={alpha})"),
        }
    }
}

/// Model selector as it appears in configuration files and reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    Uniform,
    MaxClique { k: usize },
    EdgePenalty { alpha: f64 },
}

impl ModelSpec {
    pub fn build<T: Scalar>(&self) -> Result<PotentialModel<T>> {
        match *self {
            ModelSpec::Uniform => Ok(PotentialModel::uniform()),
            ModelSpec::MaxClique { k } => PotentialModel::max_clique(k),
            ModelSpec::EdgePenalty { alpha } => {
                if !alpha.is_finite() {
                    return Err(Error::InvalidConfig("alpha must be finite".into()));
                }
                Ok(PotentialModel::edge_penalty(T::of(alpha)))
            }
        }
    }
}

/// `log π(G)` up to the normalizing constant, from the cliques and the
/// separator multiset (set → multiplicity).
///
/// Any zero-potential clique gives `-∞`. A zero-potential separator with
/// all cliques positive makes `π` undefined and is reported as
/// [`Error::ModelMisuse`].
pub fn graph_log_prob<'a, T, P>(
    model: &P,
    cliques: impl IntoIterator<Item = &'a VertexSet>,
    separators: &HashMap<VertexSet, usize>,
) -> Result<T>
where
    T: Scalar,
    P: Potential<T> + ?Sized,
{
    let mut total = T::zero();
    let mut zero_clique = false;
    for c in cliques {
        let v = model.log_phi(c);
        if v == T::neg_infinity() {
            zero_clique = true;
        } else {
            total = total + v;
        }
    }
    if zero_clique {
        return Ok(T::neg_infinity());
    }
    // Sum in a canonical order so the result does not depend on map layout.
    let mut seps: Vec<_> = separators.iter().collect();
    seps.sort();
    for (s, &m) in seps {
        let v = model.log_phi(s);
        if v == T::neg_infinity() {
            return Err(Error::ModelMisuse(s.clone()));
        }
        total = total - v * T::of_count(m);
    }
    Ok(total)
}

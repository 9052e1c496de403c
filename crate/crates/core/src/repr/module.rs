use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use num_traits::Zero;

use super::affine::{AffineBracket, AffineGenerator, LieGen};
use crate::error::Result;
use crate::rational::Rat;
use crate::vector::SparseVec;

/// A degree-truncated module on which current generators act. Degrees are
/// non-positive and bounded below by `-depth`.
pub trait AdmissibleModule: Send + Sync {
    type Basis: Clone + Ord + Hash + Debug + Send + Sync;

    fn level(&self) -> &Rat;

    fn depth(&self) -> i32;

    fn degree_of(&self, b: &Self::Basis) -> i32;

    fn vacuum(&self) -> Self::Basis;

    /// Every basis element of degree in `[-depth, 0]`, in a fixed order.
    fn basis(&self) -> Vec<Self::Basis>;

    fn act_basis(&self, x: LieGen, b: &Self::Basis) -> Result<Arc<SparseVec<Self::Basis>>>;

    fn act(&self, x: LieGen, v: &SparseVec<Self::Basis>) -> Result<SparseVec<Self::Basis>> {
        let mut out = SparseVec::new();
        for (b, c) in v.iter() {
            out.add_scaled(&*self.act_basis(x, b)?, c);
        }
        Ok(out)
    }

    fn act_generator(&self, g: AffineGenerator, v: &SparseVec<Self::Basis>) -> Result<SparseVec<Self::Basis>> {
        match g {
            AffineGenerator::Central => Ok(v.scaled(self.level())),
            AffineGenerator::Lie(x) => self.act(x, v),
        }
    }

    /// Smallest degree among the components, `None` for zero.
    fn min_degree(&self, v: &SparseVec<Self::Basis>) -> Option<i32> {
        v.keys().map(|b| self.degree_of(b)).min()
    }

    /// Applies a bracket's Lie part and central term.
    fn act_bracket(&self, br: &AffineBracket, v: &SparseVec<Self::Basis>) -> Result<SparseVec<Self::Basis>> {
        let mut out = SparseVec::new();
        for (x, c) in br.lie.iter() {
            out.add_scaled(&self.act(*x, v)?, c);
        }
        if !br.central.is_zero() {
            out.add_scaled(v, &(&br.central * self.level()));
        }
        Ok(out)
    }
}

/// Lowest degree at which generators are guaranteed to kill `v`: every
/// generator of degree `>= 1 - min_degree(v)` lands above degree 0.
pub fn annihilation_bound<M: AdmissibleModule>(module: &M, v: &SparseVec<M::Basis>) -> i32 {
    1 - module.min_degree(v).unwrap_or(0)
}

/// True iff every probed generator of degree at or above the computed
/// bound annihilates `v`. Probes degrees `bound..bound + span`.
pub fn admissibility_check<M: AdmissibleModule>(
    module: &M,
    v: &SparseVec<M::Basis>,
    generators: impl Fn(i32) -> Vec<LieGen>,
    span: i32,
) -> Result<bool> {
    let bound = annihilation_bound(module, v);
    for n in bound..bound + span {
        for x in generators(n) {
            if !module.act(x, v)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

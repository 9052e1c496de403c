use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::cocycle::function_cocycle_constant;
use crate::error::{Error, Result};
use crate::findim::FinLieAlgebra;
use crate::knbasis::{KNBasisTable, Label};
use crate::memo::Memo;
use crate::rational::Rat;
use crate::vector::SparseVec;

/// `x_index(degree, point)`. The derived order (degree, point label, Lie
/// index) is the canonical PBW order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LieGen {
    pub degree: i32,
    pub point: usize,
    pub index: usize,
}

impl LieGen {
    pub fn new(index: usize, degree: i32, point: usize) -> Self {
        Self { degree, point, index }
    }

    pub fn label(&self) -> Label {
        Label::new(self.degree, self.point)
    }

    /// `[lieIndex, degree, pointLabel]`
    pub fn encode(&self) -> serde_json::Value {
        serde_json::json!([self.index, self.degree, self.point])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AffineGenerator {
    Lie(LieGen),
    Central,
}

/// Lie part and central coefficient of a bracket of two generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AffineBracket {
    pub lie: SparseVec<LieGen>,
    pub central: Rat,
}

/// The current algebra `g ⊗ A` with its central term, over one point
/// configuration.
#[derive(Debug)]
pub struct AffineAlgebra {
    table: Arc<KNBasisTable>,
    algebra: Arc<FinLieAlgebra>,
    brackets: Memo<(LieGen, LieGen), Arc<AffineBracket>>,
}

impl AffineAlgebra {
    pub fn new(table: Arc<KNBasisTable>, algebra: Arc<FinLieAlgebra>) -> Self {
        Self { table, algebra, brackets: Memo::new() }
    }

    pub fn table(&self) -> &Arc<KNBasisTable> {
        &self.table
    }

    pub fn algebra(&self) -> &Arc<FinLieAlgebra> {
        &self.algebra
    }

    pub fn check(&self, x: LieGen) -> Result<()> {
        if x.index >= self.algebra.dim() || x.point == 0 || x.point > self.table.k() {
            return Err(Error::BadGenerator(format!("{x:?}")));
        }
        Ok(())
    }

    /// `[x_i ⊗ a, x_j ⊗ b] = Σ_k c_ij^k x_k ⊗ (a·b) + B_ij γ(a, b) t`.
    pub fn bracket(&self, x: LieGen, y: LieGen) -> Result<Arc<AffineBracket>> {
        self.check(x)?;
        self.check(y)?;
        self.brackets.get_or_try_insert(&(x, y), || {
            let mut out = AffineBracket::default();
            let lie = self.algebra.bracket(x.index, y.index);
            if !lie.is_empty() {
                let alpha = self.table.product_constants(x.label(), y.label())?;
                for (k, c) in lie {
                    for (h, a) in alpha.iter() {
                        out.lie.add_term(LieGen::new(*k, h.n, h.p), &(c * a));
                    }
                }
            }
            let b = &self.algebra.form()[(x.index, y.index)];
            if !b.is_zero() {
                out.central = b * function_cocycle_constant(&self.table, x.label(), y.label())?;
            }
            Ok(Arc::new(out))
        })
    }
}

use std::sync::Arc;

use super::affine::{AffineAlgebra, LieGen};
use super::module::AdmissibleModule;
use crate::error::{Error, Result};
use crate::memo::Memo;
use crate::rational::{to_fraction_string, Rat};
use crate::registry::{Named, Registry};
use crate::vector::SparseVec;

/// Sorted product of creation generators applied to the vacuum.
pub type Monomial = Vec<LieGen>;

pub type ModuleVector = SparseVec<Monomial>;

pub fn monomial_degree(m: &Monomial) -> i32 {
    m.iter().map(|g| g.degree).sum()
}

/// Which generators kill the vacuum; the rest create.
pub trait Induction: Named + Send + Sync {
    fn annihilates(&self, degree: i32) -> bool;
}

/// Induced from all non-negative degrees plus the center.
pub struct NonNegative;

/// Induced from strictly positive degrees plus the center; degree-0
/// generators create freely, so their multiplicity must be capped.
pub struct FreeZero;

impl Named for NonNegative {
    fn name(&self) -> &'static str {
        "vacuum"
    }
}

impl Induction for NonNegative {
    fn annihilates(&self, degree: i32) -> bool {
        degree >= 0
    }
}

impl Named for FreeZero {
    fn name(&self) -> &'static str {
        "free-zero"
    }
}

impl Induction for FreeZero {
    fn annihilates(&self, degree: i32) -> bool {
        degree >= 1
    }
}

pub fn inductions() -> Registry<dyn Induction> {
    let mut reg: Registry<dyn Induction> = Registry::new("induction");
    reg.register(Arc::new(NonNegative));
    reg.register(Arc::new(FreeZero));
    reg
}

/// Module induced from a one-dimensional character (zero on the inducing
/// generators, `level` on the center), truncated at degree `-depth`.
pub struct VacuumModule {
    affine: Arc<AffineAlgebra>,
    level: Rat,
    depth: i32,
    induction: Arc<dyn Induction>,
    zero_cap: usize,
    memo: Memo<(LieGen, Monomial), Arc<ModuleVector>>,
}

impl VacuumModule {
    pub fn new(affine: Arc<AffineAlgebra>, level: Rat, depth: i32) -> Self {
        Self::with_induction(affine, level, depth, Arc::new(NonNegative), 0)
    }

    /// `zero_cap` bounds the number of degree-0 factors in a monomial and
    /// only matters when degree-0 generators create.
    pub fn with_induction(
        affine: Arc<AffineAlgebra>,
        level: Rat,
        depth: i32,
        induction: Arc<dyn Induction>,
        zero_cap: usize,
    ) -> Self {
        Self { affine, level, depth, induction, zero_cap, memo: Memo::new() }
    }

    pub fn affine(&self) -> &Arc<AffineAlgebra> {
        &self.affine
    }

    pub fn induction(&self) -> &Arc<dyn Induction> {
        &self.induction
    }

    fn creators(&self) -> Vec<LieGen> {
        let top = if self.induction.annihilates(0) { -1 } else { 0 };
        let (d, k) = (self.affine.algebra().dim(), self.affine.table().k());
        let mut out = Vec::new();
        for degree in -self.depth..=top {
            for point in 1..=k {
                for index in 0..d {
                    out.push(LieGen::new(index, degree, point));
                }
            }
        }
        out.sort();
        out
    }

    fn prepend(&self, x: LieGen, m: &Monomial) -> Result<Monomial> {
        let mut out = Vec::with_capacity(m.len() + 1);
        out.push(x);
        out.extend_from_slice(m);
        let degree = monomial_degree(&out);
        if degree < -self.depth {
            return Err(Error::DepthExceeded { degree, depth: self.depth });
        }
        if out.iter().filter(|g| g.degree == 0).count() > self.zero_cap {
            return Err(Error::DepthExceeded { degree, depth: self.depth });
        }
        Ok(out)
    }

    fn reduce(&self, x: LieGen, m: &Monomial) -> Result<ModuleVector> {
        if x.degree + monomial_degree(m) > 0 {
            return Ok(ModuleVector::new());
        }
        let creates = !self.induction.annihilates(x.degree);
        let Some((first, rest)) = m.split_first() else {
            return Ok(if creates { ModuleVector::basis(self.prepend(x, m)?) } else { ModuleVector::new() });
        };
        if creates && x <= *first {
            return Ok(ModuleVector::basis(self.prepend(x, m)?));
        }
        // x·(y rest) = y·(x rest) + [x, y]·rest
        let rest = rest.to_vec();
        let inner = self.act_basis(x, &rest)?;
        let mut out = self.act(*first, &inner)?;
        let br = self.affine.bracket(x, *first)?;
        out.add_assign(&self.act_bracket(&br, &ModuleVector::basis(rest))?);
        Ok(out)
    }

    /// Basis vectors and a vector as JSON, monomials as lists of
    /// `[lieIndex, degree, pointLabel]`.
    pub fn dump(&self, v: Option<&ModuleVector>) -> serde_json::Value {
        let encode = |m: &Monomial| serde_json::Value::Array(m.iter().map(LieGen::encode).collect());
        let basis: Vec<_> = self.basis().iter().map(encode).collect();
        let mut doc = serde_json::json!({
            "level": to_fraction_string(&self.level),
            "depth": self.depth,
            "induction": self.induction.name(),
            "basis": basis,
        });
        if let Some(v) = v {
            let terms: Vec<_> = v
                .iter()
                .map(|(m, c)| serde_json::json!({"monomial": encode(m), "coeff": to_fraction_string(c)}))
                .collect();
            doc["vector"] = serde_json::Value::Array(terms);
        }
        doc
    }
}

impl AdmissibleModule for VacuumModule {
    type Basis = Monomial;

    fn level(&self) -> &Rat {
        &self.level
    }

    fn depth(&self) -> i32 {
        self.depth
    }

    fn degree_of(&self, b: &Monomial) -> i32 {
        monomial_degree(b)
    }

    fn vacuum(&self) -> Monomial {
        Vec::new()
    }

    fn basis(&self) -> Vec<Monomial> {
        let creators = self.creators();
        let mut out = Vec::new();
        let mut stack: Vec<(Monomial, usize, i32, usize)> = vec![(Vec::new(), 0, 0, 0)];
        while let Some((m, start, degree, zeros)) = stack.pop() {
            out.push(m.clone());
            for (i, g) in creators.iter().enumerate().skip(start) {
                let nd = degree + g.degree;
                let nz = zeros + usize::from(g.degree == 0);
                if nd < -self.depth || nz > self.zero_cap {
                    continue;
                }
                let mut next = m.clone();
                next.push(*g);
                stack.push((next, i, nd, nz));
            }
        }
        out.sort_by(|a, b| monomial_degree(b).cmp(&monomial_degree(a)).then_with(|| a.cmp(b)));
        out
    }

    fn act_basis(&self, x: LieGen, b: &Monomial) -> Result<Arc<ModuleVector>> {
        self.affine.check(x)?;
        let key = (x, b.clone());
        self.memo.get_or_try_insert(&key, || self.reduce(x, b).map(Arc::new))
    }
}

/// Number of monomials in `count` colours per degree with total degree in
/// `[-depth, 0]`, by the partition generating function.
pub fn count_monomials(colours_per_degree: usize, depth: i32) -> usize {
    let depth = depth.max(0) as usize;
    let mut ways = vec![0usize; depth + 1];
    ways[0] = 1;
    for part in 1..=depth {
        for _ in 0..colours_per_degree {
            for total in part..=depth {
                ways[total] += ways[total - part];
            }
        }
    }
    ways.iter().sum()
}

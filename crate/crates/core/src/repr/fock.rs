use std::sync::Arc;

use num_traits::One;

use super::affine::LieGen;
use super::module::AdmissibleModule;
use crate::error::{Error, Result};
use crate::memo::Memo;
use crate::rational::Rat;
use crate::vector::SparseVec;

/// Monomial `Π x_j^{e_j}` as sorted `(j, e_j)` pairs with `e_j > 0`.
pub type FockMonomial = Vec<(u32, u32)>;

pub type FockVector = SparseVec<FockMonomial>;

pub fn weighted_degree(m: &FockMonomial) -> i32 {
    m.iter().map(|(j, e)| (j * e) as i32).sum()
}

/// Polynomials in `x_1, x_2, …` with `a_n = ∂/∂x_n`, `a_{-n} = n x_n`,
/// `a_0 = id` and the center acting as 1. Module degree is minus the
/// weighted degree.
#[derive(Debug)]
pub struct FockModule {
    depth: i32,
    level: Rat,
    memo: Memo<(i32, FockMonomial), Arc<FockVector>>,
}

impl FockModule {
    pub fn new(depth: i32) -> Self {
        Self { depth, level: Rat::one(), memo: Memo::new() }
    }

    pub fn a(n: i32) -> LieGen {
        LieGen::new(0, n, 1)
    }

    fn apply(&self, n: i32, m: &FockMonomial) -> Result<FockVector> {
        let mut out = FockVector::new();
        match n {
            0 => out.add_term(m.clone(), &Rat::one()),
            n if n > 0 => {
                let j = n as u32;
                if let Some(pos) = m.iter().position(|(v, _)| *v == j) {
                    let e = m[pos].1;
                    let mut next = m.clone();
                    if e == 1 {
                        next.remove(pos);
                    } else {
                        next[pos].1 -= 1;
                    }
                    out.add_term(next, &Rat::from_integer(e.into()));
                }
            }
            n => {
                let j = (-n) as u32;
                let degree = weighted_degree(m) + j as i32;
                if degree > self.depth {
                    return Err(Error::DepthExceeded { degree: -degree, depth: self.depth });
                }
                let mut next = m.clone();
                match next.iter().position(|(v, _)| *v >= j) {
                    Some(pos) if next[pos].0 == j => next[pos].1 += 1,
                    Some(pos) => next.insert(pos, (j, 1)),
                    None => next.push((j, 1)),
                }
                out.add_term(next, &Rat::from_integer(j.into()));
            }
        }
        Ok(out)
    }
}

impl AdmissibleModule for FockModule {
    type Basis = FockMonomial;

    fn level(&self) -> &Rat {
        &self.level
    }

    fn depth(&self) -> i32 {
        self.depth
    }

    fn degree_of(&self, b: &FockMonomial) -> i32 {
        -weighted_degree(b)
    }

    fn vacuum(&self) -> FockMonomial {
        Vec::new()
    }

    fn basis(&self) -> Vec<FockMonomial> {
        // partitions of each weight, parts as (part, multiplicity)
        fn parts(rest: u32, max: u32, acc: &mut FockMonomial, out: &mut Vec<FockMonomial>) {
            if rest == 0 {
                let mut m = acc.clone();
                m.sort();
                out.push(m);
                return;
            }
            for j in (1..=max.min(rest)).rev() {
                for e in 1..=rest / j {
                    acc.push((j, e));
                    parts(rest - j * e, j - 1, acc, out);
                    acc.pop();
                }
            }
        }
        let mut out = Vec::new();
        for w in 0..=self.depth.max(0) as u32 {
            let mut level = Vec::new();
            parts(w, w, &mut Vec::new(), &mut level);
            level.sort();
            out.extend(level);
        }
        out
    }

    fn act_basis(&self, x: LieGen, b: &FockMonomial) -> Result<Arc<FockVector>> {
        if x.index != 0 || x.point != 1 {
            return Err(Error::BadGenerator(format!("{x:?}")));
        }
        let key = (x.degree, b.clone());
        self.memo.get_or_try_insert(&key, || self.apply(x.degree, b).map(Arc::new))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::make_abelian;
    use crate::knbasis::{KNBasisTable, PointConfig};
    use crate::rational::int;
    use crate::repr::{AffineAlgebra, VacuumModule};

    #[test]
    fn action_formulas() {
        let f = FockModule::new(4);
        let one = FockVector::basis(vec![]);
        let x1 = FockVector::basis(vec![(1, 1)]);
        assert_eq!(f.act(FockModule::a(-1), &one).unwrap(), x1);
        assert_eq!(f.act(FockModule::a(1), &x1).unwrap(), one);
        assert_eq!(f.act(FockModule::a(0), &x1).unwrap(), x1);
        let x2 = f.act(FockModule::a(-2), &one).unwrap();
        assert_eq!(x2, FockVector::basis(vec![(2, 1)]).scaled(&int(2)));
        assert!(f.act(FockModule::a(-5), &one).is_err());
    }

    #[test]
    fn basis_is_partitions() {
        let f = FockModule::new(6);
        assert_eq!(f.basis().len(), 1 + 1 + 2 + 3 + 5 + 7 + 11);
        assert!(f.basis().iter().all(|m| weighted_degree(m) <= 6));
    }

    #[test]
    fn heisenberg_relations() {
        let f = FockModule::new(6);
        for b in f.basis() {
            let v = FockVector::basis(b.clone());
            for n in -2..=2 {
                for m in -2..=2 {
                    if weighted_degree(&b) + 4 > 6 {
                        continue;
                    }
                    let nm = f.act(FockModule::a(n), &f.act(FockModule::a(m), &v).unwrap()).unwrap();
                    let mn = f.act(FockModule::a(m), &f.act(FockModule::a(n), &v).unwrap()).unwrap();
                    let want = if n + m == 0 { v.scaled(&int(n.into())) } else { FockVector::new() };
                    assert_eq!(nm.sub(&mn), want);
                }
            }
        }
    }

    /// `a(-n_1)…a(-n_k)|0>` maps to `Π n_i x_{n_i}`; nonzero modes agree,
    /// the zero mode is 0 on one side and the identity on the other.
    #[test]
    fn dictionary_with_vacuum_module() {
        let affine = AffineAlgebra::new(Arc::new(KNBasisTable::new(PointConfig::classical())), Arc::new(make_abelian(1).unwrap()));
        let vm = VacuumModule::new(Arc::new(affine), int(1), 5);
        let fm = FockModule::new(5);
        let image = |v: &SparseVec<Vec<LieGen>>| -> FockVector {
            let mut out = FockVector::new();
            for (m, c) in v.iter() {
                let mut w = FockVector::basis(vec![]);
                for g in m.iter().rev() {
                    w = fm.act(FockModule::a(g.degree), &w).unwrap();
                }
                out.add_scaled(&w, c);
            }
            out
        };
        for b in vm.basis() {
            let v = SparseVec::basis(b.clone());
            for n in -2..=3 {
                if crate::repr::monomial_degree(&b) + n.min(0) < -5 {
                    continue;
                }
                let lhs = image(&vm.act(FockModule::a(n), &v).unwrap());
                let rhs = fm.act(FockModule::a(n), &image(&v)).unwrap();
                if n == 0 {
                    assert!(lhs.is_zero());
                    assert_eq!(rhs, image(&v));
                } else {
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

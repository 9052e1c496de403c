//! Sugawara operators built from currents, and exact checks of their
//! commutation relations on truncated modules.

mod classical;
mod ordering;

use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use crate::cocycle::{fit_central_charge, vectorfield_cocycle, CentralFit, CocycleTable, ProjectiveConnection};
use crate::error::{Error, Result};
use crate::findim::FinLieAlgebra;
use crate::knbasis::{prescribe_orders, Expansion, KNBasisTable, KNIndex, Label};
use crate::memo::Memo;
use crate::rational::{frac, to_fraction_string, Rat};
use crate::repr::{AdmissibleModule, LieGen};
use crate::vector::SparseVec;

pub use classical::{classical_virasoro_check, fock_s, ClassicalReport};
pub use ordering::{normal_order_pair, normal_orderings, Lagged, NormalOrdering, Standard, SwapEqual};

/// `c·dim g / (c + κ)`.
pub fn central_charge(level: &Rat, g: &FinLieAlgebra) -> Result<Rat> {
    let shift = level + g.kappa()?;
    if shift.is_zero() {
        return Err(Error::CriticalLevel);
    }
    Ok(level * Rat::from_integer((g.dim() as i64).into()) / shift)
}

/// `-1/(c + κ)`.
pub fn rescale_factor(level: &Rat, kappa: &Rat) -> Result<Rat> {
    let shift = level + kappa;
    if shift.is_zero() {
        return Err(Error::CriticalLevel);
    }
    Ok(-shift.recip())
}

/// `l^{a,b}_k = Σ_I res(ω^a ω^b e_k)` with `ω^{n,p} = f^1_{-n,p}` and
/// `e_k = f^{-1}_k`.
#[derive(Debug)]
pub struct SugawaraCoefficientTable {
    table: Arc<KNBasisTable>,
    values: Memo<(Label, Label, Label), Rat>,
}

impl SugawaraCoefficientTable {
    pub fn new(table: Arc<KNBasisTable>) -> Self {
        Self { table, values: Memo::new() }
    }

    pub fn coefficient(&self, a: Label, b: Label, k: Label) -> Result<Rat> {
        let key = if a <= b { (a, b, k) } else { (b, a, k) };
        self.values.get_or_try_insert(&key, || {
            let wa = KNIndex::new(1, -key.0.n, key.0.p);
            let wb = KNIndex::new(1, -key.1.n, key.1.p);
            self.table.in_residue_of_product(&[wa, wb, KNIndex { weight: -1, label: k }], None)
        })
    }

    /// Range of totals `n + m` that can carry a nonzero coefficient for
    /// `e_k`. The lower end comes from the in-point orders, the upper end
    /// from the out-point orders, where a nonzero residue needs a pole.
    pub fn total_range(&self, k: Label) -> Result<(i32, i32)> {
        let cfg = self.table.config();
        let at0 = prescribe_orders(cfg, 1, 0, 1);
        let at1 = prescribe_orders(cfg, 1, 1, 1);
        let field = prescribe_orders(cfg, -1, k.n, k.p);
        let mut hi: Option<i32> = None;
        for j in cfg.k()..at0.len() {
            let (a, b, e) = (at0[j].1, at1[j].1 - at0[j].1, field[j].1);
            // order of ω^{n,p} ω^{m,r} e_k at this point is 2a - b(n+m) + e
            if b < 0 {
                let bound = (-1 - 2 * a - e).div_euclid(-b);
                hi = Some(hi.map_or(bound, |h| h.max(bound)));
            } else if b > 0 || 2 * a + e <= -1 {
                return Err(Error::UnboundedExpansion);
            }
        }
        Ok((k.n, hi.unwrap_or(k.n - 1)))
    }

    /// Width of the total band, `max - min` of the range above.
    pub fn band(&self, k: Label) -> Result<i32> {
        let (lo, hi) = self.total_range(k)?;
        Ok(hi - lo)
    }
}

/// Unrescaled Sugawara operators `L_{k,s}` on a module.
pub struct Sugawara<'a, M: AdmissibleModule> {
    module: &'a M,
    table: Arc<KNBasisTable>,
    algebra: Arc<FinLieAlgebra>,
    ordering: Arc<dyn NormalOrdering>,
    /// `(i, j, ½ D_ij)` over the nonzero entries of the inverse form.
    half_dual: Vec<(usize, usize, Rat)>,
    coefficients: SugawaraCoefficientTable,
    cache: Memo<(Label, M::Basis), Arc<SparseVec<M::Basis>>>,
}

impl<'a, M: AdmissibleModule> Sugawara<'a, M> {
    pub fn new(
        module: &'a M,
        table: Arc<KNBasisTable>,
        algebra: Arc<FinLieAlgebra>,
        ordering: Arc<dyn NormalOrdering>,
    ) -> Result<Self> {
        let dual = algebra.dual_basis()?;
        let d = algebra.dim();
        let mut half_dual = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if !dual[(i, j)].is_zero() {
                    half_dual.push((i, j, &dual[(i, j)] * frac(1, 2)));
                }
            }
        }
        let coefficients = SugawaraCoefficientTable::new(table.clone());
        Ok(Self { module, table, algebra, ordering, half_dual, coefficients, cache: Memo::new() })
    }

    pub fn module(&self) -> &M {
        self.module
    }

    pub fn table(&self) -> &Arc<KNBasisTable> {
        &self.table
    }

    pub fn coefficients(&self) -> &SugawaraCoefficientTable {
        &self.coefficients
    }

    /// `c + κ`, which must be nonzero.
    pub fn shift(&self) -> Result<Rat> {
        let s = self.module.level() + self.algebra.kappa()?;
        if s.is_zero() {
            return Err(Error::CriticalLevel);
        }
        Ok(s)
    }

    /// Ordered current pairs `(left, right, coefficient)` contributing to
    /// `L_k b`; `right` acts first. Finite because every pair whose first-acting factor has degree at
    /// least `1 - deg b` kills `b`.
    pub fn active_pairs(&self, k: Label, b: &M::Basis) -> Result<Vec<(LieGen, LieGen, Rat)>> {
        let k_points = self.table.k();
        let kill = 1 - self.module.degree_of(b);
        let (lo, hi) = self.coefficients.total_range(k)?;
        let mut out = Vec::new();
        for t in lo..=hi {
            for n in (t - kill - 1)..=(kill + 1) {
                let m = t - n;
                let keep = self.ordering.keep(n, m);
                let first = if keep { m } else { n };
                if first >= kill {
                    continue;
                }
                for p in 1..=k_points {
                    for r in 1..=k_points {
                        let l = self.coefficients.coefficient(Label::new(n, p), Label::new(m, r), k)?;
                        if l.is_zero() {
                            continue;
                        }
                        for (i, j, hd) in &self.half_dual {
                            let x = LieGen::new(*i, n, p);
                            let y = LieGen::new(*j, m, r);
                            let (left, right) = normal_order_pair(self.ordering.as_ref(), x, y);
                            out.push((left, right, &l * hd));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `L_k b` for a basis element.
    pub fn apply_basis(&self, k: Label, b: &M::Basis) -> Result<Arc<SparseVec<M::Basis>>> {
        let key = (k, b.clone());
        self.cache.get_or_try_insert(&key, || {
            let mut out = SparseVec::new();
            for (left, right, c) in self.active_pairs(k, b)? {
                let w = self.module.act_basis(right, b)?;
                if w.is_zero() {
                    continue;
                }
                out.add_scaled(&self.module.act(left, &w)?, &c);
            }
            Ok(Arc::new(out))
        })
    }

    /// `L_k v`.
    pub fn apply(&self, k: Label, v: &SparseVec<M::Basis>) -> Result<SparseVec<M::Basis>> {
        let mut out = SparseVec::new();
        for (b, c) in v.iter() {
            out.add_scaled(&*self.apply_basis(k, b)?, c);
        }
        Ok(out)
    }

    /// `L*_k v = -(c+κ)^{-1} L_k v`.
    pub fn apply_rescaled(&self, k: Label, v: &SparseVec<M::Basis>) -> Result<SparseVec<M::Basis>> {
        let f = rescale_factor(self.module.level(), &self.algebra.kappa()?)?;
        Ok(self.apply(k, v)?.scaled(&f))
    }

    /// Basis elements with room for a double application of shifts
    /// `s1`, `s2`.
    pub fn eligible(&self, s1: i32, s2: i32) -> Vec<M::Basis> {
        let floor = -self.module.depth() - s1.min(0) - s2.min(0);
        self.module.basis().into_iter().filter(|b| self.module.degree_of(b) >= floor).collect()
    }

    /// `[L_k, x(a)] v + (c+κ) x(∇_{e_k} a) v` on one vector.
    pub fn current_defect(&self, k: Label, index: usize, a: Label, v: &SparseVec<M::Basis>) -> Result<SparseVec<M::Basis>> {
        let x = LieGen::new(index, a.n, a.p);
        let lx = self.apply(k, &self.module.act(x, v)?)?;
        let xl = self.module.act(x, &self.apply(k, v)?)?;
        let mut out = lx.sub(&xl);
        let beta = self.table.derivation_constants(k, a)?;
        let shift = self.shift()?;
        for (h, c) in beta.iter() {
            out.add_scaled(&self.module.act(LieGen::new(index, h.n, h.p), v)?, &(c * &shift));
        }
        Ok(out)
    }

    /// Checks the current commutator on every eligible basis vector and
    /// returns how many vectors were checked, or the first failing one.
    pub fn verify_current_commutator(&self, k: Label, index: usize, a: Label) -> Result<CurrentReport<M::Basis>> {
        let vectors = self.eligible(k.n, a.n);
        let checked = vectors.len();
        let failure = vectors
            .par_iter()
            .map(|b| self.current_defect(k, index, a, &SparseVec::basis(b.clone())).map(|d| (b.clone(), d)))
            .filter(|r| r.as_ref().map_or(true, |(_, d)| !d.is_zero()))
            .find_any(|_| true)
            .transpose()?;
        Ok(CurrentReport { checked, failure })
    }

    /// Scalar `s` with `([L*_a, L*_b] - Σ C^h L*_h) v = s v` on every
    /// eligible vector, or `None` when no vector has enough room.
    pub fn defect_scalar(&self, a: Label, b: Label) -> Result<Option<Rat>> {
        let br = self.table.bracket_constants(a, b)?;
        let shift = self.shift()?;
        let vectors = self.eligible(a.n, b.n);
        let scalars: Vec<Rat> = vectors
            .par_iter()
            .map(|basis| -> Result<Rat> {
                let v = SparseVec::basis(basis.clone());
                // (c+κ)^2 [L*_a, L*_b] = [L_a, L_b] and (c+κ)^2 L*_h = -(c+κ) L_h
                let mut d = self.apply(a, &self.apply(b, &v)?)?.sub(&self.apply(b, &self.apply(a, &v)?)?);
                for (h, c) in br.iter() {
                    d.add_scaled(&self.apply(*h, &v)?, &(c * &shift));
                }
                let d = d.scaled(&(&shift * &shift).recip());
                if d.is_zero() {
                    return Ok(Rat::zero());
                }
                d.ratio_to(&v).ok_or(Error::NonScalarDefect { a: (a.n, a.p), b: (b.n, b.p) })
            })
            .collect::<Result<_>>()?;
        match scalars.split_first() {
            None => Ok(None),
            Some((s, rest)) if rest.iter().all(|x| x == s) => Ok(Some(s.clone())),
            Some(_) => Err(Error::NonScalarDefect { a: (a.n, a.p), b: (b.n, b.p) }),
        }
    }

    /// Defect cocycle on all pairs of `labels` with room to evaluate.
    pub fn defect_cocycle(&self, labels: &[Label]) -> Result<(CocycleTable, usize)> {
        let pairs: Vec<(Label, Label)> =
            labels.iter().flat_map(|a| labels.iter().filter(move |b| a < *b).map(move |b| (*a, *b))).collect();
        let values: Vec<Option<(Label, Label, Rat)>> = pairs
            .par_iter()
            .map(|&(a, b)| Ok(self.defect_scalar(a, b)?.map(|s| (a, b, s))))
            .collect::<Result<_>>()?;
        let mut table = CocycleTable::new();
        let mut checked = 0;
        for (a, b, s) in values.into_iter().flatten() {
            table.insert(a, b, s);
            checked += 1;
        }
        for a in labels {
            table.insert(*a, *a, Rat::zero());
        }
        Ok((table, checked))
    }

    /// Full check that the rescaled operators represent a central
    /// extension of the vector field algebra on the window `labels`.
    pub fn verify_virasoro(&self, labels: &[Label], connection: &ProjectiveConnection) -> Result<VirasoroReport> {
        let (defect, pairs_checked) = self.defect_cocycle(labels)?;
        let locality = defect.locality_bound()?;
        let triples = defect.closed_triples(self.table.as_ref())?;
        let cocycle_identity = defect.check_cocycle_identity(self.table.as_ref(), &triples)?;
        let in_points = self.table.config().in_points().to_vec();
        let chi = CocycleTable::build(labels, |a, b| {
            vectorfield_cocycle(&self.table.form(-1, a)?, &self.table.form(-1, b)?, connection, &in_points)
        })?;
        let fit = fit_central_charge(&defect, &chi, self.table.as_ref())?;
        let expected = central_charge(self.module.level(), &self.algebra)?;
        let pass = cocycle_identity && locality.is_none_or(|t| t <= 0) && fit.charge == expected && defect.is_antisymmetric();
        Ok(VirasoroReport {
            pairs_checked,
            triples_checked: triples.len(),
            defect,
            locality,
            cocycle_identity,
            fit,
            expected,
            pass,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentReport<B: Ord> {
    pub checked: usize,
    pub failure: Option<(B, SparseVec<B>)>,
}

impl<B: Ord> CurrentReport<B> {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirasoroReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub defect: CocycleTable,
    pub locality: Option<i32>,
    pub cocycle_identity: bool,
    pub fit: CentralFit,
    pub expected: Rat,
    pub pass: bool,
}

impl VirasoroReport {
    pub fn central_charge(&self) -> &Rat {
        &self.fit.charge
    }

    /// Turns a failed report into the matching error.
    pub fn ensure(&self) -> Result<()> {
        if self.fit.charge != self.expected {
            return Err(Error::CentralChargeMismatch {
                found: to_fraction_string(&self.fit.charge),
                expected: to_fraction_string(&self.expected),
            });
        }
        if !self.pass {
            return Err(Error::NotCohomologous);
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pairs_checked": self.pairs_checked,
            "triples_checked": self.triples_checked,
            "defect_cocycle": self.defect.to_json()["pairs"],
            "locality_bound": self.locality,
            "cocycle_identity": self.cocycle_identity,
            "coboundary": expansion_json(&self.fit.coboundary),
            "central_charge": to_fraction_string(&self.fit.charge),
            "expected": to_fraction_string(&self.expected),
            "pass": self.pass,
        })
    }
}

pub fn expansion_json(e: &Expansion) -> serde_json::Value {
    let terms: serde_json::Map<String, serde_json::Value> =
        e.iter().map(|(l, c)| (format!("{},{}", l.n, l.p), serde_json::Value::String(to_fraction_string(c)))).collect();
    serde_json::Value::Object(terms)
}

/// `Some(b)` when the two defect cocycles differ by a coboundary.
pub fn ordering_independence(g1: &CocycleTable, g2: &CocycleTable, table: &KNBasisTable) -> Result<Option<Expansion>> {
    crate::cocycle::coboundary_equivalence(g1, g2, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::{make_abelian, make_sl};
    use crate::knbasis::PointConfig;
    use crate::rational::int;
    use crate::repr::{AffineAlgebra, FockModule, FockVector, VacuumModule};

    fn classical_table() -> Arc<KNBasisTable> {
        Arc::new(KNBasisTable::new(PointConfig::classical()))
    }

    #[test]
    fn charges_and_critical_level() {
        assert_eq!(central_charge(&int(1), &make_abelian(1).unwrap()).unwrap(), int(1));
        assert_eq!(central_charge(&int(1), &make_sl(2).unwrap()).unwrap(), int(1));
        assert_eq!(central_charge(&int(2), &make_sl(2).unwrap()).unwrap(), frac(3, 2));
        assert_eq!(central_charge(&int(-2), &make_sl(2).unwrap()), Err(Error::CriticalLevel));
        assert_eq!(rescale_factor(&int(1), &int(2)).unwrap(), frac(-1, 3));
        assert_eq!(rescale_factor(&int(1), &int(0)).unwrap(), int(-1));
    }

    #[test]
    fn classical_coefficients_are_deltas() {
        let c = SugawaraCoefficientTable::new(classical_table());
        for k in -3..=3 {
            assert_eq!(c.total_range(Label::new(k, 1)).unwrap(), (k, k));
            for n in -4..=4 {
                for m in -4..=4 {
                    let want = if n + m == k { int(1) } else { int(0) };
                    assert_eq!(c.coefficient(Label::new(n, 1), Label::new(m, 1), Label::new(k, 1)).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn two_point_coefficient_band() {
        let t = Arc::new(KNBasisTable::new(PointConfig::two_by_two()));
        let c = SugawaraCoefficientTable::new(t.clone());
        for k in t.labels(-2, 2) {
            let (lo, hi) = c.total_range(k).unwrap();
            assert_eq!(hi - lo, 1);
            for a in t.labels(-4, 4) {
                for b in t.labels(-4, 4) {
                    let v = c.coefficient(a, b, k).unwrap();
                    if a.n + b.n < lo || a.n + b.n > hi {
                        assert!(v.is_zero(), "{a} {b} {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn generic_operator_matches_fock_formula() {
        let fock = FockModule::new(6);
        let s = Sugawara::new(&fock, classical_table(), Arc::new(make_abelian(1).unwrap()), Arc::new(Standard)).unwrap();
        for b in fock.basis() {
            let v = FockVector::basis(b.clone());
            for k in -2..=2 {
                if crate::repr::weighted_degree(&b) - k.min(0) > 6 {
                    continue;
                }
                let generic = s.apply_rescaled(Label::new(k, 1), &v).unwrap();
                assert_eq!(generic, fock_s(&fock, k, &v).unwrap());
            }
        }
    }

    #[test]
    fn vacuum_module_zero_mode_shift() {
        // a(0) kills the vacuum here, so L*_0 differs from the Fock S_0 by ½
        let affine = AffineAlgebra::new(classical_table(), Arc::new(make_abelian(1).unwrap()));
        let m = VacuumModule::new(Arc::new(affine), int(1), 4);
        let s = Sugawara::new(&m, classical_table(), Arc::new(make_abelian(1).unwrap()), Arc::new(Standard)).unwrap();
        for b in m.basis() {
            let v = SparseVec::basis(b.clone());
            let want = -Rat::from_integer((-crate::repr::monomial_degree(&b)).into());
            assert_eq!(s.apply_rescaled(Label::new(0, 1), &v).unwrap(), v.scaled(&want));
        }
    }

    #[test]
    fn classical_sl2_current_commutator() {
        let g = Arc::new(make_sl(2).unwrap());
        let affine = AffineAlgebra::new(classical_table(), g.clone());
        let m = VacuumModule::new(Arc::new(affine), int(1), 3);
        let s = Sugawara::new(&m, classical_table(), g, Arc::new(Standard)).unwrap();
        for k in -1..=1 {
            for x in 0..3 {
                for n in -1..=1 {
                    let r = s.verify_current_commutator(Label::new(k, 1), x, Label::new(n, 1)).unwrap();
                    assert!(r.passed(), "k={k} x={x} n={n}");
                    assert!(r.checked > 0);
                }
            }
        }
    }

    #[test]
    fn classical_heisenberg_virasoro() {
        let g = Arc::new(make_abelian(1).unwrap());
        let affine = AffineAlgebra::new(classical_table(), g.clone());
        let m = VacuumModule::new(Arc::new(affine), int(1), 6);
        let s = Sugawara::new(&m, classical_table(), g, Arc::new(Standard)).unwrap();
        let labels = classical_table().labels(-3, 3);
        let report = s.verify_virasoro(&labels, &ProjectiveConnection::zero()).unwrap();
        assert!(report.pass, "{:?}", report.to_json());
        for n in -3..=3 {
            let want = frac((n * n * n - n).into(), 12);
            assert_eq!(report.defect.get(Label::new(n, 1), Label::new(-n, 1)), Some(&want));
        }
        assert_eq!(report.central_charge(), &int(1));
        assert!(report.ensure().is_ok());
    }

    #[test]
    fn critical_level_is_rejected() {
        let g = Arc::new(make_sl(2).unwrap());
        let affine = AffineAlgebra::new(classical_table(), g.clone());
        let m = VacuumModule::new(Arc::new(affine), int(-2), 2);
        let s = Sugawara::new(&m, classical_table(), g, Arc::new(Standard)).unwrap();
        let v = SparseVec::basis(Vec::new());
        assert_eq!(s.apply_rescaled(Label::new(0, 1), &v), Err(Error::CriticalLevel));
    }

    #[test]
    fn lagged_ordering_shifts_by_a_coboundary() {
        let table = Arc::new(KNBasisTable::new(PointConfig::two_by_two()));
        let g = Arc::new(make_abelian(1).unwrap());
        let affine = Arc::new(AffineAlgebra::new(table.clone(), g.clone()));
        let m = VacuumModule::new(affine, int(1), 4);
        let labels = table.labels(-2, 2);
        let run = |rule: Arc<dyn NormalOrdering>| {
            let s = Sugawara::new(&m, table.clone(), g.clone(), rule).unwrap();
            s.verify_virasoro(&labels, &ProjectiveConnection::zero()).unwrap()
        };
        let standard = run(Arc::new(Standard));
        let lagged = run(Arc::new(Lagged));
        assert!(standard.pass && lagged.pass);
        assert_eq!(lagged.central_charge(), &int(1));
        let witness = ordering_independence(&standard.defect, &lagged.defect, &table).unwrap();
        assert!(witness.is_some_and(|b| !b.is_zero()));
    }
}

//! Geometric two-cocycles computed by residues over the in-points.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::funcfield::{schwarzian, LocalExpansion, MeroForm, Point, Poly, RationalFunction};
use crate::knbasis::{Expansion, KNBasisTable, KNIndex, Label};
use crate::linalg::Matrix;
use crate::rational::{frac, to_fraction_string, Rat};

/// Source of bracket expansions `[e_a, e_b] = Σ C^h e_h`.
pub trait BracketProvider {
    fn bracket(&self, a: Label, b: Label) -> Result<Arc<Expansion>>;
}

impl BracketProvider for KNBasisTable {
    fn bracket(&self, a: Label, b: Label) -> Result<Arc<Expansion>> {
        self.bracket_constants(a, b)
    }
}

/// A projective connection on the sphere given by its representative in
/// the `z` chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveConnection {
    rep: RationalFunction,
}

impl Default for ProjectiveConnection {
    fn default() -> Self {
        Self::zero()
    }
}

impl ProjectiveConnection {
    pub fn zero() -> Self {
        Self { rep: RationalFunction::zero() }
    }

    pub fn new(rep: RationalFunction) -> Self {
        Self { rep }
    }

    pub fn rep(&self) -> &RationalFunction {
        &self.rep
    }

    /// Representative in the chart `w = 1/z`:
    /// `R_w(w) = R(1/w) (h'(w))^2 + S(h)(w)` with `h(w) = 1/w`.
    pub fn in_w_chart(&self) -> Result<RationalFunction> {
        let h = RationalFunction::monomial(Rat::one(), -1);
        let dh = h.derivative();
        Ok(&(&self.rep.compose(&h)? * &(&dh * &dh)) + &schwarzian(&h)?)
    }

    /// True when both chart representatives are holomorphic away from the
    /// given points.
    pub fn is_holomorphic_off(&self, points: &[Point]) -> Result<bool> {
        let mut den = self.rep.denom().clone();
        for p in points {
            if let Point::Finite(x) = p {
                let lin = Poly::linear_root(x);
                loop {
                    let (q, r) = den.div_rem(&lin);
                    if den.degree() == Some(0) || !r.is_zero() {
                        break;
                    }
                    den = q;
                }
            }
        }
        let at_infinity = MeroForm::new(0, self.in_w_chart()?).order_at(&Point::Finite(Rat::zero()));
        let infinity_ok = points.contains(&Point::Infinity) || at_infinity.finite().is_none_or(|o| o >= 0);
        Ok(den.degree() == Some(0) && infinity_ok)
    }
}

/// `γ(g, h) = -(1/2πi) ∮ g dh` over the in-points.
pub fn function_cocycle(g: &MeroForm, h: &MeroForm, in_points: &[Point]) -> Result<Rat> {
    g.expect_weight(0)?;
    let integrand = g.product(&h.exterior_derivative()?);
    Ok(-integrand.contour_integral(in_points)?)
}

/// `γ(a_a, a_b)` for basis functions through cached local expansions.
pub fn function_cocycle_constant(table: &KNBasisTable, a: Label, b: Label) -> Result<Rat> {
    let ia = KNIndex { weight: 0, label: a };
    let ib = KNIndex { weight: 0, label: b };
    let ea = table.element(ia)?;
    let mut dh: Vec<LocalExpansion> = Vec::with_capacity(table.k());
    for i in 0..table.k() {
        let need = -ea.orders[i].1;
        dh.push(table.in_expansion(ib, i, need)?.derivative());
    }
    Ok(-table.in_residue_of_product(&[ia], Some(&dh))?)
}

/// `χ_R(e, f) = (1/12)(1/2πi) ∮ (½(e'''f - e f''') - R (e'f - e f')) dz`.
pub fn vectorfield_cocycle(e: &MeroForm, f: &MeroForm, r: &ProjectiveConnection, in_points: &[Point]) -> Result<Rat> {
    e.expect_weight(-1)?;
    f.expect_weight(-1)?;
    let (e0, f0) = (&e.rep, &f.rep);
    let e1 = e0.derivative();
    let f1 = f0.derivative();
    let e3 = e1.derivative().derivative();
    let f3 = f1.derivative().derivative();
    let half = RationalFunction::constant(frac(1, 2));
    let third = &half * &(&(&e3 * f0) - &(e0 * &f3));
    let wronskian = &(&e1 * f0) - &(e0 * &f1);
    let integrand = &third - &(&r.rep * &wronskian);
    let total = MeroForm::new(1, integrand).contour_integral(in_points)?;
    Ok(total * frac(1, 12))
}

/// Antisymmetric table of cocycle values on pairs of labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocycleTable {
    values: BTreeMap<(Label, Label), Rat>,
}

impl CocycleTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fills the table from `f` on all ordered pairs `a < b` of `labels`.
    pub fn build(labels: &[Label], f: impl Fn(Label, Label) -> Result<Rat> + Sync) -> Result<Self> {
        use rayon::prelude::*;
        let pairs: Vec<(Label, Label)> =
            labels.iter().flat_map(|a| labels.iter().filter(move |b| a < *b).map(move |b| (*a, *b))).collect();
        let vals = pairs.par_iter().map(|&(a, b)| f(a, b).map(|v| (a, b, v))).collect::<Result<Vec<_>>>()?;
        let mut t = Self::new();
        for (a, b, v) in vals {
            t.insert(a, b, v);
        }
        for a in labels {
            t.insert(*a, *a, Rat::zero());
        }
        Ok(t)
    }

    /// Sets `(a, b)` and `(b, a)` antisymmetrically.
    pub fn insert(&mut self, a: Label, b: Label, v: Rat) {
        self.values.insert((b, a), -v.clone());
        self.values.insert((a, b), v);
    }

    pub fn get(&self, a: Label, b: Label) -> Option<&Rat> {
        self.values.get(&(a, b))
    }

    pub fn contains(&self, a: Label, b: Label) -> bool {
        self.values.contains_key(&(a, b))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Label, Label), &Rat)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.values.keys().flat_map(|(a, b)| [*a, *b]).collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.values.iter().all(|((a, b), v)| self.values.get(&(*b, *a)).is_some_and(|w| *w == -v.clone()))
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        Self { values: self.values.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            *values.entry(*k).or_insert_with(Rat::zero) -= v;
        }
        Self { values }
    }

    /// `Σ_h C^h_{ab} value(h, c)`, failing if some `(h, c)` is missing.
    fn on_bracket(&self, br: &Expansion, c: Label, a: Label, b: Label) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (h, coeff) in br.iter() {
            let v = self.get(*h, c).ok_or(Error::DomainEscape { a: (a.n, a.p), b: (b.n, b.p), escaped: (h.n, h.p) })?;
            acc += coeff * v;
        }
        Ok(acc)
    }

    /// `v([a,b],c) + v([b,c],a) + v([c,a],b) = 0` on every triple.
    pub fn check_cocycle_identity(&self, brackets: &dyn BracketProvider, triples: &[(Label, Label, Label)]) -> Result<bool> {
        for &(a, b, c) in triples {
            let s = self.on_bracket(&*brackets.bracket(a, b)?, c, a, b)?
                + self.on_bracket(&*brackets.bracket(b, c)?, a, b, c)?
                + self.on_bracket(&*brackets.bracket(c, a)?, b, c, a)?;
            if !s.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Triples from the table's labels whose brackets stay inside the table.
    pub fn closed_triples(&self, brackets: &dyn BracketProvider) -> Result<Vec<(Label, Label, Label)>> {
        let labels: Vec<Label> = self.labels().into_iter().collect();
        let mut out = Vec::new();
        for (i, &a) in labels.iter().enumerate() {
            for (j, &b) in labels.iter().enumerate().skip(i + 1) {
                for &c in &labels[j + 1..] {
                    let inside = |x: Label, y: Label, z: Label| -> Result<bool> {
                        Ok(brackets.bracket(x, y)?.keys().all(|h| self.contains(*h, z)))
                    };
                    if inside(a, b, c)? && inside(b, c, a)? && inside(c, a, b)? {
                        out.push((a, b, c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest total degree `n + m` carrying a nonzero value, `None` for
    /// the zero table. Nonzero values at positive total degree are an
    /// error.
    pub fn locality_bound(&self) -> Result<Option<i32>> {
        let mut highest = None;
        for ((a, b), v) in &self.values {
            if v.is_zero() {
                continue;
            }
            let t = a.n + b.n;
            if t > 0 {
                return Err(Error::UpperBandViolation(t));
            }
            highest = Some(highest.map_or(t, |h: i32| h.max(t)));
        }
        Ok(highest)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pairs: Vec<_> = self
            .values
            .iter()
            .map(|((a, b), v)| {
                serde_json::json!({"a": [a.n, a.p], "b": [b.n, b.p], "value": to_fraction_string(v)})
            })
            .collect();
        let bound = self.locality_bound().ok().flatten();
        serde_json::json!({"pairs": pairs, "bound_T": bound})
    }
}

/// Pairs `a < b` of the table together with their brackets.
fn bracket_system(
    table: &CocycleTable,
    brackets: &dyn BracketProvider,
) -> Result<(Vec<(Label, Label)>, Vec<Arc<Expansion>>, Vec<Label>)> {
    let labels: Vec<Label> = table.labels().into_iter().collect();
    let mut pairs = Vec::new();
    let mut brs = Vec::new();
    let mut support = BTreeSet::new();
    for (i, &a) in labels.iter().enumerate() {
        for &b in &labels[i + 1..] {
            if !table.contains(a, b) {
                continue;
            }
            let br = brackets.bracket(a, b)?;
            support.extend(br.keys().copied());
            pairs.push((a, b));
            brs.push(br);
        }
    }
    Ok((pairs, brs, support.into_iter().collect()))
}

/// A functional `b` with `(γ₁ - γ₂)(e, f) = b([e, f])` on every pair of the
/// table, or `None` when no such functional exists.
pub fn coboundary_equivalence(
    g1: &CocycleTable,
    g2: &CocycleTable,
    brackets: &dyn BracketProvider,
) -> Result<Option<Expansion>> {
    let diff = g1.sub(g2);
    let (pairs, brs, support) = bracket_system(&diff, brackets)?;
    let rows: Vec<Vec<Rat>> = brs.iter().map(|br| support.iter().map(|h| br.get(h)).collect()).collect();
    let rhs: Vec<Rat> = pairs.iter().map(|(a, b)| diff.get(*a, *b).cloned().unwrap_or_default()).collect();
    if rows.is_empty() || support.is_empty() {
        return Ok(rhs.iter().all(Zero::is_zero).then(Expansion::new));
    }
    Ok(Matrix::from_rows(rows).solve(&rhs).map(|x| Expansion::from_terms(support.into_iter().zip(x))))
}

/// Result of writing `γ = c·χ + b([·,·])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralFit {
    pub charge: Rat,
    pub coboundary: Expansion,
}

/// Fits `γ = c·χ + b([·,·])` with `c` forced to be unique.
pub fn fit_central_charge(gamma: &CocycleTable, chi: &CocycleTable, brackets: &dyn BracketProvider) -> Result<CentralFit> {
    let (pairs, brs, support) = bracket_system(gamma, brackets)?;
    let mut rows = Vec::with_capacity(pairs.len());
    let mut rhs = Vec::with_capacity(pairs.len());
    for ((a, b), br) in pairs.iter().zip(&brs) {
        let x = chi.get(*a, *b).cloned().ok_or(Error::DomainEscape { a: (a.n, a.p), b: (b.n, b.p), escaped: (b.n, b.p) })?;
        let mut row = vec![x];
        row.extend(support.iter().map(|h| br.get(h)));
        rows.push(row);
        rhs.push(gamma.get(*a, *b).cloned().unwrap_or_default());
    }
    if rows.is_empty() {
        return Err(Error::NotCohomologous);
    }
    let m = Matrix::from_rows(rows);
    let sol = m.solve(&rhs).ok_or(Error::NotCohomologous)?;
    let without: Vec<Vec<Rat>> = (0..m.rows()).map(|i| m.row(i)[1..].to_vec()).collect();
    let rank_without = if support.is_empty() { 0 } else { Matrix::from_rows(without).rank() };
    if m.rank() != rank_without + 1 {
        return Err(Error::NotCohomologous);
    }
    let charge = sol[0].clone();
    Ok(CentralFit { charge, coboundary: Expansion::from_terms(support.into_iter().zip(sol.into_iter().skip(1))) })
}

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::config::PointConfig;
use crate::error::{Error, Result};
use crate::funcfield::{LocalExpansion, MeroForm, Order, Point, Poly, RationalFunction};
use crate::linalg::Matrix;
use crate::memo::Memo;
use crate::rational::{binomial, pow, Rat};
use crate::vector::SparseVec;

/// Degree `n` and in-point label `p` (1-based) of a homogeneous basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub n: i32,
    pub p: usize,
}

impl Label {
    pub fn new(n: i32, p: usize) -> Self {
        Self { n, p }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.p)
    }
}

/// Index of `f_{n,p}^λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KNIndex {
    pub weight: i32,
    pub label: Label,
}

impl KNIndex {
    pub fn new(weight: i32, n: i32, p: usize) -> Self {
        Self { weight, label: Label::new(n, p) }
    }
}

/// Coefficients of a form in the basis of one weight.
pub type Expansion = SparseVec<Label>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KNBasisElement {
    pub index: KNIndex,
    pub form: MeroForm,
    pub orders: Vec<(Point, i32)>,
}

/// Smallest and largest `h - (n + m)` over a probe window, for the vector
/// field bracket (`r`) and the function product (`s`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradingBounds {
    pub r: i32,
    pub s: i32,
}

/// Orders of `f_{n,p}^λ` at every point of `A`, in configuration order.
///
/// In-points get `(n+1-λ) - δ_i^p`, out-points other than the last get
/// `-(n+1-λ)`, and the last out-point absorbs whatever makes the total `-2λ`.
pub fn prescribe_orders(config: &PointConfig, weight: i32, n: i32, p: usize) -> Vec<(Point, i32)> {
    let base = n + 1 - weight;
    let mut out = Vec::with_capacity(config.k() + config.l());
    for (i, pt) in config.in_points().iter().enumerate() {
        out.push((pt.clone(), base - i32::from(i + 1 == p)));
    }
    let l = config.l();
    for pt in &config.out_points()[..l - 1] {
        out.push((pt.clone(), -base));
    }
    let sum: i32 = out.iter().map(|(_, o)| o).sum();
    out.push((config.out_points()[l - 1].clone(), -2 * weight - sum));
    out
}

/// Lie derivative of a weight-λ form along a vector field:
/// `(e g' + λ g e') dz^λ`.
pub fn lie_derivative(e: &MeroForm, g: &MeroForm) -> Result<MeroForm> {
    e.expect_weight(-1)?;
    let lambda = RationalFunction::constant(Rat::from_integer(g.weight.into()));
    let rep = &(&e.rep * &g.rep.derivative()) + &(&lambda * &(&g.rep * &e.rep.derivative()));
    Ok(MeroForm::new(g.weight, rep))
}

/// Vector field bracket `(e f' - f e') d/dz`.
pub fn vector_field_bracket(e: &MeroForm, f: &MeroForm) -> Result<MeroForm> {
    e.expect_weight(-1)?;
    f.expect_weight(-1)?;
    lie_derivative(e, f)
}

/// Memoizing table of Krichever-Novikov basis elements and derived
/// constants for one point configuration.
#[derive(Debug)]
pub struct KNBasisTable {
    config: PointConfig,
    elements: Memo<KNIndex, Arc<KNBasisElement>>,
    in_expansions: Memo<(KNIndex, usize), Arc<LocalExpansion>>,
    products: Memo<(Label, Label), Arc<Expansion>>,
    brackets: Memo<(Label, Label), Arc<Expansion>>,
    derivations: Memo<(Label, Label), Arc<Expansion>>,
}

impl KNBasisTable {
    pub fn new(config: PointConfig) -> Self {
        Self {
            config,
            elements: Memo::new(),
            in_expansions: Memo::new(),
            products: Memo::new(),
            brackets: Memo::new(),
            derivations: Memo::new(),
        }
    }

    pub fn config(&self) -> &PointConfig {
        &self.config
    }

    pub fn k(&self) -> usize {
        self.config.k()
    }

    /// All labels with degree in `lo..=hi`, degree-major.
    pub fn labels(&self, lo: i32, hi: i32) -> Vec<Label> {
        (lo..=hi).flat_map(|n| (1..=self.k()).map(move |p| Label::new(n, p))).collect()
    }

    pub fn element(&self, idx: KNIndex) -> Result<Arc<KNBasisElement>> {
        self.elements.get_or_try_insert(&idx, || self.build_element(idx).map(Arc::new))
    }

    pub fn form(&self, weight: i32, label: Label) -> Result<MeroForm> {
        Ok(self.element(KNIndex { weight, label })?.form.clone())
    }

    fn build_element(&self, idx: KNIndex) -> Result<KNBasisElement> {
        let KNIndex { weight, label: Label { n, p } } = idx;
        if p == 0 || p > self.k() {
            return Err(Error::BadConfig(format!("in-point label {p} outside 1..={}", self.k())));
        }
        let orders = prescribe_orders(&self.config, weight, n, p);
        let non_unique = |dim| Error::NonUniqueElement { lambda: weight, n, p, dim };

        // Ansatz: numerator / prod over finite poles, numerator degree capped by the order at infinity.
        let mut den = Poly::one();
        let mut den_degree = 0i32;
        let mut order_at_infinity = 0;
        for (pt, a) in &orders {
            match pt {
                Point::Finite(x) if *a < 0 => {
                    den = &den * &Poly::linear_root(x).pow((-a) as usize);
                    den_degree -= a;
                }
                Point::Infinity => order_at_infinity = *a,
                _ => {}
            }
        }
        let num_degree = den_degree - 2 * weight - order_at_infinity;
        if num_degree < 0 {
            return Err(non_unique(0));
        }
        let unknowns = num_degree as usize + 1;
        let mut rows = Vec::new();
        for (pt, a) in &orders {
            let Point::Finite(x) = pt else { continue };
            for i in 0..(*a).max(0) as usize {
                // i-th Taylor coefficient of the numerator at x
                let row = (0..unknowns)
                    .map(|j| {
                        if j < i {
                            Rat::zero()
                        } else {
                            Rat::from_integer(binomial(j, i)) * pow(x, (j - i) as i32)
                        }
                    })
                    .collect();
                rows.push(row);
            }
        }
        let kernel = if rows.is_empty() {
            (0..unknowns).map(|j| (0..unknowns).map(|i| Rat::from_integer(i64::from(i == j).into())).collect()).collect()
        } else {
            Matrix::from_rows(rows).nullspace()
        };
        if kernel.len() != 1 {
            return Err(non_unique(kernel.len()));
        }
        let num = Poly::new(kernel.into_iter().next().expect("one vector"));
        let rep = RationalFunction::new(num, den)?;
        let form = MeroForm::new(weight, rep);

        let mut checks: Vec<(Point, i32)> = orders.clone();
        if !orders.iter().any(|(pt, _)| *pt == Point::Infinity) {
            checks.push((Point::Infinity, 0));
        }
        for (pt, prescribed) in &checks {
            match form.order_at(pt) {
                Order::Finite(found) if found == *prescribed => {}
                Order::Finite(found) => {
                    return Err(Error::OrderSlack {
                        lambda: weight,
                        n,
                        p,
                        point: pt.clone(),
                        prescribed: *prescribed,
                        found,
                    })
                }
                Order::PlusInfinity => return Err(non_unique(0)),
            }
        }
        let anchor = &self.config.in_points()[p - 1];
        let lead_order = orders[p - 1].1;
        let lead = form.local_expansion(anchor, (lead_order, lead_order)).coeff(lead_order);
        let form = form.scale(&lead.recip());
        Ok(KNBasisElement { index: idx, form, orders })
    }

    /// Expansion of a basis element at the `i`-th in-point, starting at its
    /// true order and reaching at least `max_order`.
    pub fn in_expansion(&self, idx: KNIndex, i: usize, max_order: i32) -> Result<Arc<LocalExpansion>> {
        let key = (idx, i);
        if let Some(e) = self.in_expansions.get(&key) {
            if e.window.1 >= max_order {
                return Ok(e);
            }
        }
        let el = self.element(idx)?;
        let lo = el.orders[i].1;
        let hi = max_order.max(lo) + 4;
        let e = Arc::new(el.form.local_expansion(&self.config.in_points()[i], (lo, hi)));
        self.in_expansions.replace(key, e.clone());
        Ok(e)
    }

    /// `Σ_{P ∈ I} res_P` of a product of basis elements and optional extra
    /// expansions (one per in-point), whose weights must sum to 1.
    pub fn in_residue_of_product(&self, factors: &[KNIndex], extra: Option<&[LocalExpansion]>) -> Result<Rat> {
        let mut total = Rat::zero();
        for i in 0..self.k() {
            let mut base_orders: Vec<i32> = Vec::with_capacity(factors.len() + 1);
            for idx in factors {
                base_orders.push(self.element(*idx)?.orders[i].1);
            }
            if let Some(extra) = extra {
                let e = &extra[i];
                match e.iter().find(|(_, c)| !c.is_zero()) {
                    Some((o, _)) => base_orders.push(o),
                    None => continue,
                }
            }
            let sum: i32 = base_orders.iter().sum();
            if sum >= 0 {
                continue;
            }
            let mut exps = Vec::with_capacity(factors.len());
            for (j, idx) in factors.iter().enumerate() {
                let need = -1 - (sum - base_orders[j]);
                exps.push(self.in_expansion(*idx, i, need)?);
            }
            let mut refs: Vec<&LocalExpansion> = exps.iter().map(|e| e.as_ref()).collect();
            if let Some(extra) = extra {
                refs.push(&extra[i]);
            }
            total += LocalExpansion::product_coeff(&refs, -1);
        }
        Ok(total)
    }

    /// `(1/2πi) ∫_{C_τ} a · b` for basis elements of complementary weight.
    pub fn duality_pairing(&self, a: KNIndex, b: KNIndex) -> Result<Rat> {
        if a.weight + b.weight != 1 {
            return Err(Error::WrongWeights(a.weight, b.weight));
        }
        self.in_residue_of_product(&[a, b], None)
    }

    /// Degree window outside of which the basis coefficients of a weight-λ
    /// form with the given orders at `A` must vanish.
    pub fn natural_window(&self, weight: i32, orders: &[Order]) -> Result<Option<(i32, i32)>> {
        let k = self.k();
        let in_min = orders[..k].iter().filter_map(|o| o.finite()).min();
        let Some(in_min) = in_min else {
            return Ok(None);
        };
        let lo = in_min + weight;
        let dual = 1 - weight;
        let mut hi: Option<i32> = None;
        for s in 1..=k {
            let at0 = prescribe_orders(&self.config, dual, 0, s);
            let at1 = prescribe_orders(&self.config, dual, -1, s);
            for j in k..at0.len() {
                let Some(q) = orders[j].finite() else { continue };
                let a = at0[j].1;
                let b = at1[j].1 - a;
                // nonzero residue at this out-point needs q + a + b h <= -1
                if b > 0 {
                    let bound = (-1 - q - a).div_euclid(b);
                    hi = Some(hi.map_or(bound, |h| h.max(bound)));
                } else if b < 0 || q + a <= -1 {
                    return Err(Error::UnboundedExpansion);
                }
            }
        }
        Ok(Some((lo, hi.unwrap_or(lo - 1))))
    }

    fn orders_of(&self, form: &MeroForm) -> Vec<Order> {
        self.config.all_points().map(|pt| form.order_at(pt)).collect()
    }

    /// Basis coefficients `c_{n,p} = <f, f_{-n,p}^{1-λ}>` over a degree
    /// window, checked by exact reconstruction.
    pub fn expand_in_basis(&self, f: &MeroForm, window: (i32, i32)) -> Result<Expansion> {
        let coeffs = self.pair_against_duals(f, window)?;
        let rebuilt = self.recombine(f.weight, &coeffs)?;
        if rebuilt.rep != f.rep {
            return Err(Error::NotInWindow { lo: window.0, hi: window.1 });
        }
        Ok(coeffs)
    }

    /// Expansion over the window derived from the orders of `f`.
    pub fn expand_natural(&self, f: &MeroForm) -> Result<Expansion> {
        match self.natural_window(f.weight, &self.orders_of(f))? {
            None => Ok(Expansion::new()),
            Some(w) => self.expand_in_basis(f, w),
        }
    }

    fn pair_against_duals(&self, f: &MeroForm, (lo, hi): (i32, i32)) -> Result<Expansion> {
        let mut out = Expansion::new();
        if lo > hi || f.is_zero() {
            return Ok(out);
        }
        let dual = 1 - f.weight;
        // dual order at P_i is at least -hi + λ - 1, so f is needed up to hi - λ
        let need = hi - f.weight;
        let exps: Vec<LocalExpansion> = self
            .config
            .in_points()
            .iter()
            .map(|pt| {
                let o = f.order_at(pt).finite().unwrap_or(need);
                f.local_expansion(pt, (o.min(need), need.max(o)))
            })
            .collect();
        for label in self.labels(lo, hi) {
            let idx = KNIndex::new(dual, -label.n, label.p);
            let c = self.in_residue_of_product(&[idx], Some(&exps))?;
            out.add_term(label, &c);
        }
        Ok(out)
    }

    pub fn recombine(&self, weight: i32, coeffs: &Expansion) -> Result<MeroForm> {
        let mut acc = MeroForm::zero(weight);
        for (label, c) in coeffs.iter() {
            acc = acc.add(&self.form(weight, *label)?.scale(c))?;
        }
        Ok(acc)
    }

    /// `a_{n,p} · a_{m,r} = Σ α a_{h,s}`, by pairing with weight-one duals.
    pub fn product_constants(&self, a: Label, b: Label) -> Result<Arc<Expansion>> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.products.get_or_try_insert(&key, || {
            let ia = KNIndex { weight: 0, label: a };
            let ib = KNIndex { weight: 0, label: b };
            let orders: Vec<Order> = {
                let ea = self.element(ia)?;
                let eb = self.element(ib)?;
                ea.orders.iter().zip(&eb.orders).map(|((_, x), (_, y))| Order::Finite(x + y)).collect()
            };
            let mut out = Expansion::new();
            if let Some((lo, hi)) = self.natural_window(0, &orders)? {
                for label in self.labels(lo, hi) {
                    let dual = KNIndex::new(1, -label.n, label.p);
                    let c = self.in_residue_of_product(&[ia, ib, dual], None)?;
                    out.add_term(label, &c);
                }
            }
            Ok(Arc::new(out))
        })
    }

    /// `[e_{n,p}, e_{m,r}] = Σ C e_{h,s}`.
    pub fn bracket_constants(&self, a: Label, b: Label) -> Result<Arc<Expansion>> {
        if a == b {
            return Ok(Arc::new(Expansion::new()));
        }
        if b < a {
            return Ok(Arc::new(self.bracket_constants(b, a)?.scaled(&-Rat::one())));
        }
        self.brackets.get_or_try_insert(&(a, b), || {
            let e = self.form(-1, a)?;
            let f = self.form(-1, b)?;
            Ok(Arc::new(self.expand_natural(&vector_field_bracket(&e, &f)?)?))
        })
    }

    /// `∇_{e_{k,s}} a_{n,p} = e · a'` expanded in the function basis.
    pub fn derivation_constants(&self, field: Label, function: Label) -> Result<Arc<Expansion>> {
        self.derivations.get_or_try_insert(&(field, function), || {
            let e = self.form(-1, field)?;
            let a = self.form(0, function)?;
            Ok(Arc::new(self.expand_natural(&lie_derivative(&e, &a)?)?))
        })
    }

    /// Almost-grading bands over `lo..=hi` in both arguments. Every support
    /// must start at or above `n + m`; the band, taken as the maximum over
    /// each fixed first degree `n`, must not depend on `n`.
    pub fn almost_grading_bounds(&self, (lo, hi): (i32, i32)) -> Result<GradingBounds> {
        let labels = self.labels(lo, hi);
        let band = |constants: &dyn Fn(Label, Label) -> Result<Arc<Expansion>>| -> Result<i32> {
            let mut rows: Vec<i32> = Vec::new();
            for n in lo..=hi {
                let mut row: Option<i32> = None;
                for a in labels.iter().filter(|l| l.n == n) {
                    for b in &labels {
                        let c = constants(*a, *b)?;
                        for h in c.keys() {
                            let excess = h.n - (a.n + b.n);
                            if excess < 0 {
                                return Err(Error::BandViolation { n: a.n, m: b.n, h: h.n });
                            }
                            row = Some(row.map_or(excess, |r| r.max(excess)));
                        }
                    }
                }
                rows.extend(row);
            }
            if rows.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::BandNotConstant(rows));
            }
            Ok(rows.first().copied().unwrap_or(0))
        };
        let r = band(&|a, b| self.bracket_constants(a, b))?;
        let s = band(&|a, b| self.product_constants(a, b))?;
        Ok(GradingBounds { r, s })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn closed_form(cfg: &PointConfig, weight: i32, n: i32, p: usize) -> RationalFunction {
        let mut f = RationalFunction::one();
        for (pt, a) in prescribe_orders(cfg, weight, n, p) {
            if let Point::Finite(x) = pt {
                f = &f * &RationalFunction::linear_power(&x, a);
            }
        }
        let form = MeroForm::new(weight, f);
        let anchor = &cfg.in_points()[p - 1];
        let o = form.order_at(anchor).finite().unwrap();
        form.scale(&form.local_expansion(anchor, (o, o)).coeff(o).recip()).rep
    }

    #[test]
    fn classical_elements_are_monomials() {
        let t = KNBasisTable::new(PointConfig::classical());
        for weight in -1..=2 {
            for n in -4..=4 {
                let f = t.form(weight, Label::new(n, 1)).unwrap();
                assert_eq!(f.rep, RationalFunction::monomial(int(1), n - weight));
            }
        }
    }

    #[test]
    fn linear_solve_matches_product_formula() {
        let cfg = PointConfig::two_by_two();
        let t = KNBasisTable::new(cfg.clone());
        for weight in -1..=2 {
            for n in -3..=3 {
                for p in 1..=2 {
                    let f = t.form(weight, Label::new(n, p)).unwrap();
                    assert_eq!(f.rep, closed_form(&cfg, weight, n, p), "λ={weight} n={n} p={p}");
                }
            }
        }
    }

    #[test]
    fn all_finite_points_work() {
        let cfg = PointConfig::new(
            vec![Point::Finite(int(0)), Point::Finite(frac(1, 2))],
            vec![Point::Finite(int(3)), Point::Finite(int(-1))],
        )
        .unwrap();
        let t = KNBasisTable::new(cfg.clone());
        for n in -2..=2 {
            for p in 1..=2 {
                let f = t.form(1, Label::new(n, p)).unwrap();
                assert_eq!(f.rep, closed_form(&cfg, 1, n, p));
            }
        }
    }

    #[test]
    fn bad_label_is_rejected() {
        let t = KNBasisTable::new(PointConfig::classical());
        assert!(matches!(t.element(KNIndex::new(0, 0, 2)), Err(Error::BadConfig(_))));
    }

    #[test]
    fn duality_in_two_point_config() {
        let t = KNBasisTable::new(PointConfig::two_by_two());
        for weight in -1..=2 {
            for a in t.labels(-3, 3) {
                for b in t.labels(-3, 3) {
                    let x = KNIndex { weight, label: a };
                    let y = KNIndex { weight: 1 - weight, label: b };
                    let fast = t.duality_pairing(x, y).unwrap();
                    let want = if a.n == -b.n && a.p == b.p { Rat::one() } else { Rat::zero() };
                    assert_eq!(fast, want, "{a} {b} λ={weight}");
                }
            }
        }
        let a = t.form(2, Label::new(1, 2)).unwrap();
        let b = t.form(-1, Label::new(-1, 2)).unwrap();
        let slow = a.product(&b).contour_integral(t.config().in_points()).unwrap();
        assert_eq!(slow, Rat::one());
    }

    #[test]
    fn pairing_rejects_wrong_weights() {
        let t = KNBasisTable::new(PointConfig::classical());
        let r = t.duality_pairing(KNIndex::new(0, 0, 1), KNIndex::new(0, 0, 1));
        assert_eq!(r, Err(Error::WrongWeights(0, 0)));
    }

    #[test]
    fn expansion_round_trips() {
        let t = KNBasisTable::new(PointConfig::two_by_two());
        let mut c = Expansion::new();
        c.add_term(Label::new(-2, 1), &frac(3, 2));
        c.add_term(Label::new(0, 2), &int(-1));
        c.add_term(Label::new(3, 1), &int(5));
        let f = t.recombine(1, &c).unwrap();
        assert_eq!(t.expand_natural(&f).unwrap(), c);
        assert_eq!(t.expand_in_basis(&f, (-2, 3)).unwrap(), c);
        assert!(matches!(t.expand_in_basis(&f, (-1, 3)), Err(Error::NotInWindow { .. })));
    }

    #[test]
    fn forms_with_poles_off_a_cannot_be_expanded() {
        let t = KNBasisTable::new(PointConfig::two_by_two());
        let f = MeroForm::new(0, RationalFunction::linear_power(&int(5), -1));
        assert!(t.expand_in_basis(&f, (-6, 6)).is_err());
    }

    #[test]
    fn classical_structure_constants() {
        let t = KNBasisTable::new(PointConfig::classical());
        for n in -3..=3 {
            for m in -3..=3 {
                let br = t.bracket_constants(Label::new(n, 1), Label::new(m, 1)).unwrap();
                let mut want = Expansion::new();
                want.add_term(Label::new(n + m, 1), &int((m - n).into()));
                assert_eq!(*br, want);
                let pr = t.product_constants(Label::new(n, 1), Label::new(m, 1)).unwrap();
                assert_eq!(*pr, Expansion::basis(Label::new(n + m, 1)));
            }
        }
        assert_eq!(t.almost_grading_bounds((-3, 3)).unwrap(), GradingBounds { r: 0, s: 0 });
    }

    #[test]
    fn product_constants_reconstruct_products() {
        let t = KNBasisTable::new(PointConfig::two_by_two());
        for a in t.labels(-2, 2) {
            for b in t.labels(-2, 2) {
                let pr = t.product_constants(a, b).unwrap();
                let direct = t.form(0, a).unwrap().product(&t.form(0, b).unwrap());
                assert_eq!(t.recombine(0, &pr).unwrap(), direct);
            }
        }
    }

    #[test]
    fn two_point_bands() {
        let t = KNBasisTable::new(PointConfig::two_by_two());
        let g = t.almost_grading_bounds((-3, 3)).unwrap();
        assert_eq!(g.s, 1);
        assert!(g.r >= 1);
    }

    #[test]
    fn two_point_function_example() {
        let cfg = PointConfig::two_by_two();
        let t = KNBasisTable::new(cfg.clone());
        let e = t.element(KNIndex::new(0, 0, 1)).unwrap();
        let want = RationalFunction::new(Poly::from_ints(&[-2, 2]), Poly::from_ints(&[-2, 1])).unwrap();
        assert_eq!(e.form.rep, want);
        let orders: Vec<i32> = cfg.all_points().map(|p| e.form.order_at(p).finite().unwrap()).collect();
        assert_eq!(orders, [0, 1, -1, 0]);
    }
}

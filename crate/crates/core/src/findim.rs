//! Finite-dimensional Lie algebras with an invariant form, given by
//! structure constants in a fixed basis.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::registry::{Named, Registry};
use crate::rational::{int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLieAlgebra {
    names: Vec<String>,
    /// `brackets[i][j]` lists `(k, c_ij^k)` with nonzero coefficients.
    brackets: Vec<Vec<Vec<(usize, Rat)>>>,
    form: Matrix,
}

impl FinLieAlgebra {
    /// Checks antisymmetry, Jacobi, symmetry, non-degeneracy and invariance.
    pub fn new(names: Vec<String>, brackets: Vec<Vec<Vec<(usize, Rat)>>>, form: Matrix) -> Result<Self> {
        let d = names.len();
        if d == 0 || brackets.len() != d || form.rows() != d || form.cols() != d {
            return Err(Error::BadDimension(format!("inconsistent sizes for dimension {d}")));
        }
        let g = Self { names, brackets, form };
        if g.form.transpose() != g.form || g.form.inverse().is_none() {
            return Err(Error::DegenerateForm);
        }
        if !g.is_antisymmetric() || !g.satisfies_jacobi() {
            return Err(Error::BadDimension("structure constants do not define a Lie algebra".into()));
        }
        if !g.form_is_invariant() {
            return Err(Error::DegenerateForm);
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.brackets[i][j]
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket_vec(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (k, c) in self.bracket(i, j) {
                    out[*k] += xi * yj * c;
                }
            }
        }
        out
    }

    pub fn form_vec(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let bx = self.form.mul_vec(y);
        x.iter().zip(&bx).map(|(a, b)| a * b).sum()
    }

    fn unit(&self, i: usize) -> Vec<Rat> {
        (0..self.dim()).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.bracket_vec(&self.unit(i), &self.unit(j)) == neg(&self.bracket_vec(&self.unit(j), &self.unit(i)))))
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                    let t1 = self.bracket_vec(&a, &self.bracket_vec(&b, &c));
                    let t2 = self.bracket_vec(&b, &self.bracket_vec(&c, &a));
                    let t3 = self.bracket_vec(&c, &self.bracket_vec(&a, &b));
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `B([a,b],c) = B(a,[b,c])` on all basis triples.
    pub fn form_is_invariant(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            (0..d).all(|j| {
                (0..d).all(|k| {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                    self.form_vec(&self.bracket_vec(&a, &b), &c) == self.form_vec(&a, &self.bracket_vec(&b, &c))
                })
            })
        })
    }

    /// Matrix of `ad_{u_i}` acting on coefficient columns.
    pub fn ad(&self, i: usize) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for j in 0..d {
            for (k, c) in self.bracket(i, j) {
                m[(*k, j)] += c;
            }
        }
        m
    }

    /// Row `i` holds the coefficients of the dual element `u^i`, so that
    /// `B(u_i, u^j) = δ_ij`. Equal to `B⁻¹` since `B` is symmetric.
    pub fn dual_basis(&self) -> Result<Matrix> {
        self.form.inverse().ok_or(Error::DegenerateForm)
    }

    /// `Σ_i ad_{u_i} ad_{u^i}`.
    pub fn casimir_on_adjoint(&self) -> Result<Matrix> {
        let dual = self.dual_basis()?;
        let d = self.dim();
        let ads: Vec<Matrix> = (0..d).map(|i| self.ad(i)).collect();
        let mut acc = Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let c = &dual[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let prod = ads[i].mul(&ads[j]);
                for r in 0..d {
                    for s in 0..d {
                        acc[(r, s)] += c * &prod[(r, s)];
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Half the scalar by which the Casimir acts on the adjoint module.
    pub fn kappa(&self) -> Result<Rat> {
        let m = self.casimir_on_adjoint()?;
        let s = m.is_scalar().ok_or(Error::NotScalarOnAdjoint)?;
        Ok(s / int(2))
    }

    /// Block sum; the form is the orthogonal sum of the two forms.
    pub fn direct_sum(&self, other: &FinLieAlgebra) -> FinLieAlgebra {
        let (d1, d2) = (self.dim(), other.dim());
        let d = d1 + d2;
        let mut brackets = vec![vec![Vec::new(); d]; d];
        for i in 0..d1 {
            for j in 0..d1 {
                brackets[i][j] = self.brackets[i][j].clone();
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                brackets[d1 + i][d1 + j] = other.brackets[i][j].iter().map(|(k, c)| (d1 + k, c.clone())).collect();
            }
        }
        let mut form = Matrix::zeros(d, d);
        for i in 0..d1 {
            for j in 0..d1 {
                form[(i, j)] = self.form[(i, j)].clone();
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                form[(d1 + i, d1 + j)] = other.form[(i, j)].clone();
            }
        }
        let names = self.names.iter().chain(&other.names).cloned().collect();
        FinLieAlgebra { names, brackets, form }
    }

    /// Same brackets with the form multiplied by `c`.
    pub fn rescaled_form(&self, c: &Rat) -> FinLieAlgebra {
        let mut form = self.form.clone();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                form[(i, j)] = &form[(i, j)] * c;
            }
        }
        FinLieAlgebra { form, ..self.clone() }
    }
}

fn neg(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| -x.clone()).collect()
}

/// Zero brackets and the identity form.
pub fn make_abelian(d: usize) -> Result<FinLieAlgebra> {
    if d == 0 {
        return Err(Error::BadDimension("abelian algebra needs d >= 1".into()));
    }
    let names = (0..d).map(|i| format!("a{i}")).collect();
    FinLieAlgebra::new(names, vec![vec![Vec::new(); d]; d], Matrix::identity(d))
}

/// `sl(size)` with the trace form. Basis: `E_ij` for `i < j`, then
/// `H_i = E_ii - E_{i+1,i+1}`, then `E_ji` for `i < j`.
pub fn make_sl(size: usize) -> Result<FinLieAlgebra> {
    if size < 2 {
        return Err(Error::BadDimension("sl needs matrix size >= 2".into()));
    }
    let unit = |i: usize, j: usize| {
        let mut m = Matrix::zeros(size, size);
        m[(i, j)] = Rat::one();
        m
    };
    let mut basis: Vec<(String, Matrix)> = Vec::new();
    let upper: Vec<(usize, usize)> = (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).collect();
    for &(i, j) in &upper {
        basis.push((format!("E{}{}", i + 1, j + 1), unit(i, j)));
    }
    for i in 0..size - 1 {
        let mut h = unit(i, i);
        h[(i + 1, i + 1)] = -Rat::one();
        basis.push((format!("H{}", i + 1), h));
    }
    for &(i, j) in &upper {
        basis.push((format!("E{}{}", j + 1, i + 1), unit(j, i)));
    }
    let d = basis.len();
    let off_index = |r: usize, c: usize| -> usize {
        let pos = upper.iter().position(|&(i, j)| (i, j) == (r.min(c), r.max(c))).expect("off-diagonal");
        if r < c {
            pos
        } else {
            upper.len() + size - 1 + pos
        }
    };
    let decompose = |m: &Matrix| -> Vec<(usize, Rat)> {
        let mut out = Vec::new();
        for r in 0..size {
            for c in 0..size {
                if r != c && !m[(r, c)].is_zero() {
                    out.push((off_index(r, c), m[(r, c)].clone()));
                }
            }
        }
        let mut running = Rat::zero();
        for i in 0..size - 1 {
            running += &m[(i, i)];
            if !running.is_zero() {
                out.push((upper.len() + i, running.clone()));
            }
        }
        out.sort_by_key(|(k, _)| *k);
        out
    };
    let mut brackets = vec![vec![Vec::new(); d]; d];
    let mut form = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let (x, y) = (&basis[i].1, &basis[j].1);
            let xy = x.mul(y);
            let yx = y.mul(x);
            let mut comm = Matrix::zeros(size, size);
            let mut trace = Rat::zero();
            for r in 0..size {
                trace += &xy[(r, r)];
                for c in 0..size {
                    comm[(r, c)] = &xy[(r, c)] - &yx[(r, c)];
                }
            }
            brackets[i][j] = decompose(&comm);
            form[(i, j)] = trace;
        }
    }
    FinLieAlgebra::new(basis.into_iter().map(|(n, _)| n).collect(), brackets, form)
}

/// A parametrized family of algebras, selectable by name.
pub trait AlgebraFamily: Named + Send + Sync {
    fn build(&self, param: usize) -> Result<FinLieAlgebra>;
}

struct Abelian;
struct SpecialLinear;

impl Named for Abelian {
    fn name(&self) -> &'static str {
        "abelian"
    }
}

impl AlgebraFamily for Abelian {
    fn build(&self, param: usize) -> Result<FinLieAlgebra> {
        make_abelian(param)
    }
}

impl Named for SpecialLinear {
    fn name(&self) -> &'static str {
        "sl"
    }
}

impl AlgebraFamily for SpecialLinear {
    fn build(&self, param: usize) -> Result<FinLieAlgebra> {
        make_sl(param)
    }
}

pub fn algebra_families() -> Registry<dyn AlgebraFamily> {
    let mut reg: Registry<dyn AlgebraFamily> = Registry::new("algebra");
    reg.register(Arc::new(Abelian));
    reg.register(Arc::new(SpecialLinear));
    reg
}

/// Parses `abelian:d`, `sl:n` (matrix size `n`) and `+`-joined sums.
pub fn parse_algebra(token: &str) -> Result<FinLieAlgebra> {
    let families = algebra_families();
    let mut acc: Option<FinLieAlgebra> = None;
    for part in token.split('+') {
        let (name, param) = part
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("algebra token `{part}` is not name:param")))?;
        let param: usize = param.parse().map_err(|_| Error::Parse(format!("bad algebra parameter `{param}`")))?;
        let g = families.get(name)?.build(param)?;
        acc = Some(match acc {
            None => g,
            Some(prev) => prev.direct_sum(&g),
        });
    }
    acc.ok_or_else(|| Error::Parse("empty algebra token".into()))
}

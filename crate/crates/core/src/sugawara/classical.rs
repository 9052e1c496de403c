use crate::error::Result;
use crate::rational::{frac, Rat};
use crate::repr::{weighted_degree, AdmissibleModule, FockModule, FockMonomial, FockVector};

/// `S_k v = -½ Σ_l :a_{k-l} a_l: v`, with `a_l` acting first iff
/// `l >= k - l`.
pub fn fock_s(fock: &FockModule, k: i32, v: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::new();
    for (b, c) in v.iter() {
        let w = weighted_degree(b);
        for l in (k - w - 1)..=(w + 1) {
            let (left, right) = if l >= k - l { (k - l, l) } else { (l, k - l) };
            if right > w {
                continue;
            }
            let inner = fock.act(FockModule::a(right), &FockVector::basis(b.clone()))?;
            out.add_scaled(&fock.act(FockModule::a(left), &inner)?, &(c * frac(-1, 2)));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalReport {
    pub checked: usize,
    /// `(n, m, v)` of the first failing relation.
    pub counterexample: Option<(i32, i32, FockMonomial)>,
}

impl ClassicalReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// `[S_n, S_m] v = (m-n) S_{n+m} v + central·(n³-n)/12 δ_{n+m,0} v` on the
/// Fock window of weighted degree `<= depth`, for `|n|, |m| <= nmax` and
/// every basis vector with room for both applications. The correct
/// `central` is 1.
pub fn classical_virasoro_check(depth: i32, nmax: i32, central: &Rat) -> Result<ClassicalReport> {
    let fock = FockModule::new(depth);
    let mut checked = 0;
    for b in fock.basis() {
        let w = weighted_degree(&b);
        let v = FockVector::basis(b.clone());
        for n in -nmax..=nmax {
            for m in -nmax..=nmax {
                if w - n.min(0) - m.min(0) > depth {
                    continue;
                }
                let lhs = fock_s(&fock, n, &fock_s(&fock, m, &v)?)?.sub(&fock_s(&fock, m, &fock_s(&fock, n, &v)?)?);
                let mut rhs = fock_s(&fock, n + m, &v)?.scaled(&Rat::from_integer((m - n).into()));
                if n + m == 0 {
                    let n3 = Rat::from_integer((n * n * n - n).into());
                    rhs.add_scaled(&v, &(n3 * frac(1, 12) * central));
                }
                checked += 1;
                if !lhs.sub(&rhs).is_zero() {
                    return Ok(ClassicalReport { checked, counterexample: Some((n, m, b)) });
                }
            }
        }
    }
    Ok(ClassicalReport { checked, counterexample: None })
}

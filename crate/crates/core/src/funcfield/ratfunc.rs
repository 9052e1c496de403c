use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::rational::Rat;

/// Reduced quotient of polynomials with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().recip();
        Ok(Self { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    /// The chart coordinate `z`.
    pub fn z() -> Self {
        Self::from_poly(Poly::from_ints(&[0, 1]))
    }

    /// `c * z^k` for any integer `k`.
    pub fn monomial(c: Rat, k: i32) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            Self { num: Poly::constant(c), den: Poly::monomial(Rat::one(), (-k) as usize) }
                .renormalized()
        }
    }

    /// `(z - a)^k` for any integer `k`.
    pub fn linear_power(a: &Rat, k: i32) -> Self {
        let base = Poly::linear_root(a).pow(k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(base)
        } else {
            Self { num: Poly::one(), den: base }
        }
    }

    fn renormalized(self) -> Self {
        Self::new(self.num, self.den).expect("denominator checked nonzero")
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        Self::new(n, d).expect("square of nonzero polynomial")
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        if e < 0 {
            if self.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            let inv = Self::new(self.den.clone(), self.num.clone())?;
            return inv.powi(-e);
        }
        Ok(Self::new(self.num.pow(e as usize), self.den.pow(e as usize)).expect("nonzero"))
    }

    /// `self(g(z))`.
    pub fn compose(&self, g: &RationalFunction) -> Result<Self> {
        let horner = |p: &Poly| {
            p.coeffs().iter().rev().fold(RationalFunction::zero(), |acc, c| {
                &(&acc * g) + &RationalFunction::constant(c.clone())
            })
        };
        let n = horner(&self.num);
        let d = horner(&self.den);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(&n / &d)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(n, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num).expect("nonzero")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

/// `h''' / h' - 3/2 (h'' / h')^2`.
pub fn schwarzian(h: &RationalFunction) -> Result<RationalFunction> {
    let d1 = h.derivative();
    if d1.is_zero() {
        return Err(Error::DegenerateMap);
    }
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let q = &d2 / &d1;
    let three_halves = RationalFunction::constant(Rat::new(3.into(), 2.into()));
    Ok(&(&d3 / &d1) - &(&three_halves * &(&q * &q)))
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn make_rational_function_examples() {
        assert_eq!(rf(&[-1, 0, 1], &[-1, 1]), rf(&[1, 1], &[1]));
        let already = rf(&[-2, 2], &[-2, 1]);
        assert_eq!(already.numer(), &Poly::from_ints(&[-2, 2]));
        assert_eq!(already.denom(), &Poly::from_ints(&[-2, 1]));
        assert!(rf(&[0], &[0, 1]).is_zero());
        assert_eq!(
            RationalFunction::new(Poly::one(), Poly::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn denominator_is_monic() {
        let f = rf(&[1], &[4, 2]);
        assert_eq!(f.denom(), &Poly::from_ints(&[2, 1]));
        assert_eq!(f.eval(&int(0)), Some(frac(1, 4)));
    }

    #[test]
    fn schwarzian_examples() {
        let inv = rf(&[1], &[0, 1]);
        assert!(schwarzian(&inv).unwrap().is_zero());
        assert!(schwarzian(&rf(&[5, 3], &[1])).unwrap().is_zero());
        let sq = schwarzian(&rf(&[0, 0, 1], &[1])).unwrap();
        assert_eq!(sq, RationalFunction::monomial(frac(-3, 2), -2));
        assert_eq!(schwarzian(&RationalFunction::constant(int(4))), Err(Error::DegenerateMap));
    }

    #[test]
    fn composition() {
        let h = rf(&[0, 0, 1], &[1]);
        let g = rf(&[1], &[0, 1]);
        assert_eq!(h.compose(&g).unwrap(), RationalFunction::monomial(int(1), -2));
    }
}

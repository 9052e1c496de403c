use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use super::poly::Poly;
use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};
use crate::rational::{parse_rat, Rat};

/// A point of the Riemann sphere.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(Rat),
    Infinity,
}

impl Point {
    pub fn finite(r: Rat) -> Self {
        Point::Finite(r)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Point::Infinity),
            other => parse_rat(other).map(Point::Finite),
        }
    }

    /// Text form used in JSON documents: `"inf"` or `"p/q"`.
    pub fn encode(&self) -> String {
        match self {
            Point::Infinity => "inf".to_string(),
            Point::Finite(r) => crate::rational::to_fraction_string(r),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "∞"),
            Point::Finite(r) => write!(f, "{r}"),
        }
    }
}

/// Vanishing order; the zero form has order `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(i32),
    PlusInfinity,
}

impl Order {
    pub fn finite(self) -> Option<i32> {
        match self {
            Order::Finite(v) => Some(v),
            Order::PlusInfinity => None,
        }
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
            (Order::Finite(_), Order::PlusInfinity) => Ordering::Less,
            (Order::PlusInfinity, Order::Finite(_)) => Ordering::Greater,
            (Order::PlusInfinity, Order::PlusInfinity) => Ordering::Equal,
        }
    }
}

/// `g(z) dz^λ` written in the standard chart.
///
/// In the chart `w = 1/z` at infinity the same form reads
/// `g(1/w) (-w^-2)^λ dw^λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeroForm {
    pub weight: i32,
    pub rep: RationalFunction,
}

impl MeroForm {
    pub fn new(weight: i32, rep: RationalFunction) -> Self {
        Self { weight, rep }
    }

    pub fn zero(weight: i32) -> Self {
        Self::new(weight, RationalFunction::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.weight, self.rep.scale(c))
    }

    pub fn add(&self, other: &MeroForm) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::WrongWeight { expected: self.weight, found: other.weight });
        }
        Ok(Self::new(self.weight, &self.rep + &other.rep))
    }

    /// Weights add, representing functions multiply.
    pub fn product(&self, other: &MeroForm) -> Self {
        Self::new(self.weight + other.weight, &self.rep * &other.rep)
    }

    /// `d(g)` for a function `g`.
    pub fn exterior_derivative(&self) -> Result<Self> {
        self.expect_weight(0)?;
        Ok(Self::new(1, self.rep.derivative()))
    }

    /// The same form written in the coordinate `w = 1/z`, as a form in `w`.
    /// Applying it twice returns the original form.
    pub fn flipped(&self) -> Self {
        let inv = RationalFunction::monomial(Rat::one(), -1);
        let pulled = self.rep.compose(&inv).expect("1/w never makes a zero denominator");
        let sign = if self.weight % 2 == 0 { Rat::one() } else { -Rat::one() };
        let jac = RationalFunction::monomial(sign, -2 * self.weight);
        Self::new(self.weight, &pulled * &jac)
    }

    pub fn expect_weight(&self, w: i32) -> Result<()> {
        if self.weight == w {
            Ok(())
        } else {
            Err(Error::WrongWeight { expected: w, found: self.weight })
        }
    }

    pub fn order_at(&self, p: &Point) -> Order {
        local_order(&self.rep, self.weight, p)
    }

    pub fn local_expansion(&self, p: &Point, window: (i32, i32)) -> LocalExpansion {
        expand(&self.rep, self.weight, p, window)
    }

    /// Coefficient of order -1 of a one-form in the local coordinate at `p`.
    pub fn residue_at(&self, p: &Point) -> Result<Rat> {
        self.expect_weight(1)?;
        Ok(self.local_expansion(p, (-1, -1)).coeff(-1))
    }

    /// `(1/2πi)` times the integral over a level line separating `in_points`
    /// from the remaining poles, i.e. the residue sum over `in_points`.
    pub fn contour_integral(&self, in_points: &[Point]) -> Result<Rat> {
        self.expect_weight(1)?;
        let mut acc = Rat::zero();
        for p in in_points {
            acc += self.residue_at(p)?;
        }
        Ok(acc)
    }
}

/// Exact Laurent coefficients of a form in the local coordinate at a point,
/// over an inclusive window of orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalExpansion {
    pub point: Point,
    pub window: (i32, i32),
    coeffs: Vec<Rat>,
}

impl LocalExpansion {
    pub fn coeff(&self, order: i32) -> Rat {
        if order < self.window.0 || order > self.window.1 {
            return Rat::zero();
        }
        self.coeffs[(order - self.window.0) as usize].clone()
    }

    pub fn coeff_ref(&self, order: i32) -> Option<&Rat> {
        if order < self.window.0 || order > self.window.1 {
            return None;
        }
        Some(&self.coeffs[(order - self.window.0) as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &Rat)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.window.0 + i as i32, c))
    }

    /// Termwise derivative in the local coordinate, read as a 1-form. Only
    /// meaningful for expansions of functions.
    pub fn derivative(&self) -> LocalExpansion {
        let coeffs = self.iter().map(|(k, c)| c * Rat::from_integer(k.into())).collect();
        LocalExpansion { point: self.point.clone(), window: (self.window.0 - 1, self.window.1 - 1), coeffs }
    }

    /// Coefficient of order `target` of the product of several expansions.
    /// Each factor must cover every order the product needs, which holds when
    /// windows start at the true orders and extend far enough.
    pub fn product_coeff(factors: &[&LocalExpansion], target: i32) -> Rat {
        match factors {
            [] => {
                if target == 0 {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }
            [single] => single.coeff(target),
            [first, rest @ ..] => {
                let rest_min: i32 = rest.iter().map(|e| e.window.0).sum();
                let mut acc = Rat::zero();
                for (a, c) in first.iter() {
                    if a + rest_min > target {
                        break;
                    }
                    if c.is_zero() {
                        continue;
                    }
                    let tail = Self::product_coeff(rest, target - a);
                    if !tail.is_zero() {
                        acc += c * tail;
                    }
                }
                acc
            }
        }
    }
}

/// A rational function written near a point as `t^shift * num(t) / den(t)`
/// with `num(0) != 0` and `den(0) != 0`.
struct LocalQuotient {
    shift: i32,
    num: Poly,
    den: Poly,
}

fn local_quotient(rep: &RationalFunction, weight: i32, p: &Point) -> Option<LocalQuotient> {
    if rep.is_zero() {
        return None;
    }
    match p {
        Point::Finite(a) => {
            let n = rep.numer().taylor_shift(a);
            let d = rep.denom().taylor_shift(a);
            let vn = n.valuation().expect("nonzero");
            let vd = d.valuation().expect("nonzero");
            Some(LocalQuotient { shift: vn as i32 - vd as i32, num: n.shift_down(vn), den: d.shift_down(vd) })
        }
        Point::Infinity => {
            let dn = rep.numer().degree().expect("nonzero") as i32;
            let dd = rep.denom().degree().expect("nonzero") as i32;
            let mut num = rep.numer().reversed();
            if weight % 2 != 0 {
                num = -&num;
            }
            Some(LocalQuotient { shift: dd - dn - 2 * weight, num, den: rep.denom().reversed() })
        }
    }
}

fn local_order(rep: &RationalFunction, weight: i32, p: &Point) -> Order {
    match local_quotient(rep, weight, p) {
        None => Order::PlusInfinity,
        Some(q) => Order::Finite(q.shift),
    }
}

fn expand(rep: &RationalFunction, weight: i32, p: &Point, window: (i32, i32)) -> LocalExpansion {
    assert!(window.0 <= window.1, "empty expansion window");
    let len = (window.1 - window.0 + 1) as usize;
    let mut coeffs = vec![Rat::zero(); len];
    if let Some(q) = local_quotient(rep, weight, p) {
        if q.shift <= window.1 {
            let terms = (window.1 - q.shift + 1) as usize;
            let series = q.num.series_div(&q.den, terms);
            for (i, c) in series.into_iter().enumerate() {
                let order = q.shift + i as i32;
                if order >= window.0 {
                    coeffs[(order - window.0) as usize] = c;
                }
            }
        }
    }
    LocalExpansion { point: p.clone(), window, coeffs }
}

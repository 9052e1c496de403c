use kn_core::funcfield::{schwarzian, LocalExpansion, MeroForm, Point, Poly, RationalFunction};
use kn_core::rational::{frac, int};
use kn_core::{Error, Rat};
use num_traits::Zero;
use proptest::prelude::*;

const CENTRES: [i64; 5] = [-2, -1, 0, 1, 3];

/// Numerator coefficients plus pole multiplicities at `CENTRES`.
fn rational() -> impl Strategy<Value = RationalFunction> {
    (prop::collection::vec(-4i64..=4, 1..5), prop::collection::vec(0usize..3, CENTRES.len())).prop_filter_map(
        "zero numerator",
        |(num, mult)| {
            let num = Poly::from_ints(&num);
            if num.is_zero() {
                return None;
            }
            let mut den = Poly::one();
            for (a, k) in CENTRES.iter().zip(mult) {
                den = &den * &Poly::linear_root(&int(*a)).pow(k);
            }
            RationalFunction::new(num, den).ok()
        },
    )
}

/// Low-degree functions for tests that compose.
fn small_rational() -> impl Strategy<Value = RationalFunction> {
    (prop::collection::vec(-3i64..=3, 1..4), 0usize..2, 0usize..2).prop_filter_map("zero numerator", |(num, a, b)| {
        let num = Poly::from_ints(&num);
        let den = &Poly::linear_root(&int(1)).pow(a) * &Poly::linear_root(&int(-1)).pow(b);
        (!num.is_zero()).then(|| RationalFunction::new(num, den).unwrap())
    })
}

fn poles() -> Vec<Point> {
    CENTRES.iter().map(|a| Point::finite(int(*a))).chain([Point::Infinity]).collect()
}

/// The point `1/a` seen from the flipped chart.
fn flip_point(p: &Point) -> Point {
    match p {
        Point::Infinity => Point::finite(int(0)),
        Point::Finite(a) if a.is_zero() => Point::Infinity,
        Point::Finite(a) => Point::finite(a.recip()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residues_sum_to_zero(f in rational()) {
        let form = MeroForm::new(1, f);
        let mut total = Rat::zero();
        for p in poles() {
            total += form.residue_at(&p).unwrap();
        }
        prop_assert_eq!(total, Rat::zero());
    }

    #[test]
    fn orders_agree_across_the_flip(f in rational(), weight in -2i32..=2, extra in -3i64..=3) {
        let form = MeroForm::new(weight, f);
        let flipped = form.flipped();
        prop_assert_eq!(flipped.flipped(), form.clone());
        let mut points = poles();
        points.push(Point::finite(frac(extra, 2)));
        for p in points {
            prop_assert_eq!(form.order_at(&p), flipped.order_at(&flip_point(&p)), "at {:?}", p);
        }
    }

    #[test]
    fn expansions_multiply(f in rational(), g in rational(), wf in -1i32..=1, wg in -1i32..=1, at in 0usize..6) {
        let p = &poles()[at];
        let (a, b) = (MeroForm::new(wf, f), MeroForm::new(wg, g));
        let (oa, ob) = (a.order_at(p).finite().unwrap(), b.order_at(p).finite().unwrap());
        let span = 5;
        let ea = a.local_expansion(p, (oa, oa + span));
        let eb = b.local_expansion(p, (ob, ob + span));
        let prod = a.product(&b).local_expansion(p, (oa + ob, oa + ob + span));
        for k in oa + ob..=oa + ob + span {
            prop_assert_eq!(LocalExpansion::product_coeff(&[&ea, &eb], k), prod.coeff(k));
        }
    }

    #[test]
    fn differentials_have_no_residues(f in rational()) {
        let d = MeroForm::new(0, f).exterior_derivative().unwrap();
        prop_assert_eq!(d.contour_integral(&poles()).unwrap(), Rat::zero());
        for p in poles() {
            prop_assert_eq!(d.residue_at(&p).unwrap(), Rat::zero());
        }
    }

    #[test]
    fn schwarzian_chain_rule(h in small_rational(), gn in prop::collection::vec(-3i64..=3, 2..4), shift in 4i64..=6) {
        let g = RationalFunction::new(Poly::from_ints(&gn), Poly::linear_root(&int(shift))).unwrap();
        let hg = match h.compose(&g) {
            Ok(x) => x,
            Err(Error::ZeroDenominator) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let (Ok(s_hg), Ok(s_h), Ok(s_g)) = (schwarzian(&hg), schwarzian(&h), schwarzian(&g)) else {
            return Ok(());
        };
        let g1 = g.derivative();
        let rhs = &(&s_h.compose(&g).unwrap() * &(&g1 * &g1)) + &s_g;
        prop_assert_eq!(s_hg, rhs);
    }
}

//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::sync::Arc;
use std::time::Instant;

use kn_core::cocycle::{vectorfield_cocycle, ProjectiveConnection};
use kn_core::findim::{make_abelian, make_sl, FinLieAlgebra};
use kn_core::funcfield::{MeroForm, Point, RationalFunction};
use kn_core::knbasis::{Expansion, KNBasisTable, KNIndex, Label, PointConfig};
use kn_core::rational::{frac, int, to_fraction_string};
use kn_core::repr::{AffineAlgebra, VacuumModule};
use kn_core::sugawara::{
    classical_virasoro_check, ordering_independence, NormalOrdering, Standard, Sugawara, SwapEqual, VirasoroReport,
};
use kn_core::{Rat, Result};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn flatten(r: Result<Outcome>) -> Outcome {
    r.unwrap_or_else(|e| Err(format!("error: {e}")))
}

fn vacuum_sugawara<'a>(
    module: &'a VacuumModule,
    table: &Arc<KNBasisTable>,
    g: &Arc<FinLieAlgebra>,
    ordering: Arc<dyn NormalOrdering>,
) -> Result<Sugawara<'a, VacuumModule>> {
    Sugawara::new(module, table.clone(), g.clone(), ordering)
}

fn vacuum_module(table: &Arc<KNBasisTable>, g: &Arc<FinLieAlgebra>, level: i64, depth: i32) -> VacuumModule {
    let affine = AffineAlgebra::new(table.clone(), g.clone());
    VacuumModule::new(Arc::new(affine), int(level), depth)
}

fn classical_cocycle() -> Result<Outcome> {
    let table = KNBasisTable::new(PointConfig::classical());
    let zero = [Point::finite(int(0))];
    let field = |n: i32| MeroForm::new(-1, RationalFunction::monomial(Rat::one(), n + 1));
    let mut pairs = 0;
    for n in -10..=10 {
        // the basis element must be the plain field z^{n+1} d/dz
        if table.form(-1, Label::new(n, 1))? != field(n) {
            return Ok(Err(format!("basis element {n} is not z^(n+1)")));
        }
        for m in -10..=10 {
            let got = vectorfield_cocycle(&field(n), &field(m), &ProjectiveConnection::zero(), &zero)?;
            let want = if n + m == 0 { frac(i64::from(n * n * n - n), 12) } else { Rat::zero() };
            if got != want {
                return Ok(Err(format!("chi({n},{m}) = {got}, want {want}")));
            }
            pairs += 1;
        }
    }
    Ok(Ok(format!("{pairs} pairs")))
}

fn heisenberg() -> Result<Outcome> {
    let r = classical_virasoro_check(10, 4, &int(1))?;
    Ok(check(r.passed(), format!("{} relations, counterexample {:?}", r.checked, r.counterexample)))
}

fn kappas() -> Result<Outcome> {
    let got = [make_sl(2)?.kappa()?, make_sl(3)?.kappa()?, make_sl(4)?.kappa()?, make_abelian(1)?.kappa()?, make_abelian(3)?.kappa()?];
    let want = [int(2), int(3), int(4), int(0), int(0)];
    let shown: Vec<String> = got.iter().map(to_fraction_string).collect();
    Ok(check(got == want, shown.join(", ")))
}

fn virasoro_line(r: &VirasoroReport) -> String {
    format!(
        "{} pairs, {} triples, locality {:?}, charge {}",
        r.pairs_checked, r.triples_checked, r.locality, r.fit.charge
    )
}

fn classical_affine() -> Result<Outcome> {
    let table = Arc::new(KNBasisTable::new(PointConfig::classical()));
    let g = Arc::new(make_sl(2)?);
    let labels = table.labels(-2, 2);
    let mut lines = Vec::new();
    let mut ok = true;
    for (level, want) in [(1, int(1)), (2, frac(3, 2))] {
        let module = vacuum_module(&table, &g, level, 4);
        let s = vacuum_sugawara(&module, &table, &g, Arc::new(Standard))?;
        let r = s.verify_virasoro(&labels, &ProjectiveConnection::zero())?;
        ok &= r.pass && r.fit.charge == want;
        lines.push(format!("c={level}: {}", virasoro_line(&r)));
    }
    Ok(check(ok, lines.join("; ")))
}

fn duality() -> Result<Outcome> {
    let table = KNBasisTable::new(PointConfig::two_by_two());
    let labels = table.labels(-5, 5);
    let mut entries = 0;
    for weight in -1..=2 {
        for a in &labels {
            for b in &labels {
                let got = table.duality_pairing(KNIndex { weight, label: *a }, KNIndex { weight: 1 - weight, label: *b })?;
                let want = if a.n == -b.n && a.p == b.p { Rat::one() } else { Rat::zero() };
                if got != want {
                    return Ok(Err(format!("weight {weight}: <{a},{b}> = {got}")));
                }
                entries += 1;
            }
        }
    }
    Ok(Ok(format!("{entries} entries")))
}

fn bands() -> Result<Outcome> {
    let table = KNBasisTable::new(PointConfig::two_by_two());
    let b = table.almost_grading_bounds((-5, 5))?;
    Ok(check(b.r >= 0 && b.s >= 0, format!("R = {}, S = {}", b.r, b.s)))
}

fn multipoint_setup() -> Result<(Arc<KNBasisTable>, Arc<FinLieAlgebra>)> {
    Ok((Arc::new(KNBasisTable::new(PointConfig::two_by_two())), Arc::new(make_sl(2)?)))
}

fn current_commutator() -> Result<Outcome> {
    let (table, g) = multipoint_setup()?;
    let module = vacuum_module(&table, &g, 1, 4);
    let s = vacuum_sugawara(&module, &table, &g, Arc::new(Standard))?;
    let mut cases = 0;
    let mut vectors = 0;
    for k in table.labels(-2, 2) {
        for x in 0..g.dim() {
            for a in table.labels(-2, 2) {
                let r = s.verify_current_commutator(k, x, a)?;
                if let Some((b, d)) = r.failure {
                    return Ok(Err(format!("k={k} x={x} a={a} on {b:?}: {} terms", d.len())));
                }
                cases += 1;
                vectors += r.checked;
            }
        }
    }
    Ok(check(vectors > 0, format!("{cases} cases, {vectors} vector checks")))
}

fn multipoint_virasoro(ordering: Arc<dyn NormalOrdering>) -> Result<VirasoroReport> {
    let (table, g) = multipoint_setup()?;
    let module = vacuum_module(&table, &g, 1, 4);
    let s = vacuum_sugawara(&module, &table, &g, ordering)?;
    s.verify_virasoro(&table.labels(-2, 2), &ProjectiveConnection::zero())
}

fn central_extension() -> Result<Outcome> {
    let r = multipoint_virasoro(Arc::new(Standard))?;
    let ok = r.pass && r.fit.charge == int(1) && r.triples_checked > 0 && r.locality.is_none_or(|t| t <= 0);
    Ok(check(ok, format!("{}, witness {} terms", virasoro_line(&r), r.fit.coboundary.len())))
}

fn ordering_change() -> Result<Outcome> {
    let standard = multipoint_virasoro(Arc::new(Standard))?;
    let swapped = multipoint_virasoro(Arc::new(SwapEqual))?;
    let table = KNBasisTable::new(PointConfig::two_by_two());
    let witness = ordering_independence(&standard.defect, &swapped.defect, &table)?;
    Ok(match witness {
        Some(b) => check(swapped.pass, format!("coboundary with {} terms, {}", b.len(), virasoro_line(&swapped))),
        None => Err("defect cocycles are not cohomologous".into()),
    })
}

fn reconstruction() -> Result<Outcome> {
    let table = KNBasisTable::new(PointConfig::two_by_two());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let window = (-3, 3);
    let labels = table.labels(window.0, window.1);
    let mut total = 0;
    for weight in -1..=2 {
        for _ in 0..50 {
            let mut coeffs = Expansion::new();
            for l in &labels {
                if rng.gen_bool(0.4) {
                    let c = frac(rng.gen_range(-9..=9), rng.gen_range(1..=5));
                    coeffs.add_term(*l, &c);
                }
            }
            let f = table.recombine(weight, &coeffs)?;
            let back = table.expand_in_basis(&f, window)?;
            if back != coeffs || table.recombine(weight, &back)? != f {
                return Ok(Err(format!("weight {weight}: round trip changed {coeffs:?}")));
            }
            total += 1;
        }
    }
    Ok(Ok(format!("{total} forms")))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("classical vector field cocycle", classical_cocycle),
        ("Heisenberg Sugawara on Fock space", heisenberg),
        ("kappa values", kappas),
        ("classical affine Sugawara, sl2", classical_affine),
        ("multi-point duality", duality),
        ("almost-grading bands", bands),
        ("current commutator, multi-point sl2", current_commutator),
        ("central extension, multi-point sl2", central_extension),
        ("normal ordering independence", ordering_change),
        ("delta reconstruction", reconstruction),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = flatten(run());
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name} ({detail}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

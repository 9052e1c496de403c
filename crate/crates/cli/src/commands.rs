use std::sync::Arc;

use kn_core::cocycle::{function_cocycle_constant, vectorfield_cocycle, CocycleTable, ProjectiveConnection};
use kn_core::findim::{parse_algebra, FinLieAlgebra};
use kn_core::knbasis::{KNBasisTable, KNIndex, Label};
use kn_core::rational::{int, to_fraction_string};
use kn_core::repr::{inductions, AdmissibleModule, AffineAlgebra, FockModule, VacuumModule};
use kn_core::sugawara::{classical_virasoro_check, expansion_json, normal_orderings, NormalOrdering, Sugawara};
use kn_core::{Error, Result};
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};

/// The JSON document and whether every check in it passed.
pub struct Outcome {
    pub doc: Value,
    pub pass: bool,
}

impl Outcome {
    fn done(doc: Value) -> Self {
        Self { doc, pass: true }
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Basis => basis(cfg),
        Command::Tables => tables(cfg),
        Command::Kappa => kappa(cfg),
        Command::Verify => verify(cfg),
        Command::Module => module(cfg),
    }
}

fn label_json(l: Label) -> Value {
    json!([l.n, l.p])
}

fn coeffs_json(c: &[kn_core::Rat]) -> Value {
    c.iter().map(to_fraction_string).collect()
}

fn basis(cfg: &RunConfig) -> Result<Outcome> {
    let table = KNBasisTable::new(cfg.points.clone());
    let (lo, hi) = cfg.window_or((-2, 2));
    let mut elements = Vec::new();
    for label in table.labels(lo, hi) {
        let e = table.element(KNIndex { weight: cfg.lambda, label })?;
        let orders: Vec<Value> = e.orders.iter().map(|(p, o)| json!({"point": p.encode(), "order": o})).collect();
        elements.push(json!({
            "n": label.n,
            "p": label.p,
            "function": e.form.rep.to_string(),
            "numerator": coeffs_json(e.form.rep.numer().coeffs()),
            "denominator": coeffs_json(e.form.rep.denom().coeffs()),
            "orders": orders,
        }));
    }
    Ok(Outcome::done(json!({
        "command": "basis",
        "config": cfg.points.to_json(),
        "lambda": cfg.lambda,
        "window": [lo, hi],
        "elements": elements,
    })))
}

fn constant_table(labels: &[Label], f: impl Fn(Label, Label) -> Result<Value>) -> Result<Vec<Value>> {
    let mut out = Vec::new();
    for a in labels {
        for b in labels {
            out.push(json!({"a": label_json(*a), "b": label_json(*b), "terms": f(*a, *b)?}));
        }
    }
    Ok(out)
}

fn tables(cfg: &RunConfig) -> Result<Outcome> {
    let table = KNBasisTable::new(cfg.points.clone());
    let window = cfg.window_or((-3, 3));
    let labels = table.labels(window.0, window.1);
    let brackets = constant_table(&labels, |a, b| Ok(expansion_json(&*table.bracket_constants(a, b)?)))?;
    let products = constant_table(&labels, |a, b| Ok(expansion_json(&*table.product_constants(a, b)?)))?;
    let gamma = CocycleTable::build(&labels, |a, b| function_cocycle_constant(&table, a, b))?;
    let ins = table.config().in_points();
    let chi = CocycleTable::build(&labels, |a, b| {
        vectorfield_cocycle(&table.form(-1, a)?, &table.form(-1, b)?, &ProjectiveConnection::zero(), ins)
    })?;
    chi.locality_bound()?;
    let bands = table.almost_grading_bounds(window)?;
    Ok(Outcome::done(json!({
        "command": "tables",
        "config": cfg.points.to_json(),
        "window": [window.0, window.1],
        "brackets": brackets,
        "products": products,
        "function_cocycle": gamma.to_json(),
        "vector_field_cocycle": chi.to_json(),
        "bands": {"R": bands.r, "S": bands.s},
    })))
}

fn kappa(cfg: &RunConfig) -> Result<Outcome> {
    let g = parse_algebra(&cfg.algebra)?;
    Ok(Outcome::done(json!({
        "command": "kappa",
        "algebra": cfg.algebra,
        "dim": g.dim(),
        "kappa": to_fraction_string(&g.kappa()?),
    })))
}

fn current_checks<M: AdmissibleModule>(s: &Sugawara<M>, labels: &[Label], dim: usize) -> Result<Value> {
    let mut cases = 0;
    let mut vectors = 0;
    let mut failures = Vec::new();
    for k in labels {
        for x in 0..dim {
            for a in labels {
                let r = s.verify_current_commutator(*k, x, *a)?;
                cases += 1;
                vectors += r.checked;
                if let Some((b, _)) = r.failure {
                    failures.push(json!({"k": label_json(*k), "x": x, "a": label_json(*a), "vector": format!("{b:?}")}));
                }
            }
        }
    }
    Ok(json!({"cases": cases, "vectors_checked": vectors, "failures": failures, "pass": failures.is_empty()}))
}

fn sugawara_report<M: AdmissibleModule>(
    module: &M,
    table: &Arc<KNBasisTable>,
    g: &Arc<FinLieAlgebra>,
    ordering: Arc<dyn NormalOrdering>,
    nmax: i32,
) -> Result<(Value, Value, bool)> {
    let s = Sugawara::new(module, table.clone(), g.clone(), ordering)?;
    let labels = table.labels(-nmax, nmax);
    let current = current_checks(&s, &labels, g.dim())?;
    let virasoro = s.verify_virasoro(&labels, &ProjectiveConnection::zero())?;
    let pass = current["pass"] == Value::Bool(true) && virasoro.pass;
    Ok((current, virasoro.to_json(), pass))
}

fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let g = Arc::new(parse_algebra(&cfg.algebra)?);
    let required = 2 * cfg.nmax;
    if cfg.depth < required {
        return Err(Error::DepthExceeded { degree: -required, depth: cfg.depth });
    }
    if (&cfg.level + g.kappa()?) == int(0) {
        return Err(Error::CriticalLevel);
    }
    let table = Arc::new(KNBasisTable::new(cfg.points.clone()));
    let ordering = normal_orderings().get(&cfg.ordering)?;
    let mut doc = json!({
        "command": "verify",
        "config": cfg.points.to_json(),
        "algebra": cfg.algebra,
        "level": to_fraction_string(&cfg.level),
        "depth": cfg.depth,
        "nmax": cfg.nmax,
        "ordering": ordering.name(),
        "module": cfg.module,
        "headroom": {"required_depth": required, "depth": cfg.depth},
    });
    let (current, virasoro, mut pass) = match cfg.module.as_str() {
        "vacuum" => {
            let affine = Arc::new(AffineAlgebra::new(table.clone(), g.clone()));
            let induction = inductions().get(&cfg.induction)?;
            let m = VacuumModule::with_induction(affine, cfg.level.clone(), cfg.depth, induction, 1);
            sugawara_report(&m, &table, &g, ordering, cfg.nmax)?
        }
        "fock" => {
            if !cfg.points.is_classical() || g.dim() != 1 || g.kappa()? != int(0) || cfg.level != int(1) {
                return Err(Error::BadConfig("the Fock module needs the classical points, abelian:1 and level 1".into()));
            }
            let fock = FockModule::new(cfg.depth);
            let classical = classical_virasoro_check(cfg.depth, cfg.nmax, &int(1))?;
            doc["fock_relations"] = json!({
                "checked": classical.checked,
                "counterexample": classical.counterexample.as_ref().map(|(n, m, v)| json!({"n": n, "m": m, "vector": v})),
                "pass": classical.passed(),
            });
            let (c, v, p) = sugawara_report(&fock, &table, &g, ordering, cfg.nmax)?;
            (c, v, p && classical.passed())
        }
        other => return Err(Error::UnknownStrategy { kind: "module", name: other.to_string() }),
    };
    pass &= virasoro["pass"] == Value::Bool(true);
    doc["current_commutator"] = current;
    doc["virasoro"] = virasoro;
    doc["pass"] = Value::Bool(pass);
    Ok(Outcome { doc, pass })
}

fn module(cfg: &RunConfig) -> Result<Outcome> {
    let g = Arc::new(parse_algebra(&cfg.algebra)?);
    let table = Arc::new(KNBasisTable::new(cfg.points.clone()));
    let affine = Arc::new(AffineAlgebra::new(table, g));
    let induction = inductions().get(&cfg.induction)?;
    let m = VacuumModule::with_induction(affine, cfg.level.clone(), cfg.depth, induction, 1);
    let mut doc = m.dump(None);
    doc["command"] = json!("module");
    doc["config"] = cfg.points.to_json();
    doc["algebra"] = json!(cfg.algebra);
    doc["dimension"] = json!(m.basis().len());
    Ok(Outcome::done(doc))
}

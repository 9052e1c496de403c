use thiserror::Error;

use crate::funcfield::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("rational function with zero denominator")]
    ZeroDenominator,
    #[error("order of the zero form is undefined")]
    ZeroForm,
    #[error("expected a form of weight {expected}, got weight {found}")]
    WrongWeight { expected: i32, found: i32 },
    #[error("pairing needs weights summing to 1, got {0} and {1}")]
    WrongWeights(i32, i32),
    #[error("schwarzian of a map with vanishing derivative")]
    DegenerateMap,

    #[error("invalid point configuration: {0}")]
    BadConfig(String),
    #[error("basis element (lambda={lambda}, n={n}, p={p}) has a {dim}-dimensional solution space")]
    NonUniqueElement { lambda: i32, n: i32, p: usize, dim: usize },
    #[error("basis element (lambda={lambda}, n={n}, p={p}) has order {found} > {prescribed} at {point}")]
    OrderSlack { lambda: i32, n: i32, p: usize, point: Point, prescribed: i32, found: i32 },
    #[error("form is not reproduced by its expansion over degrees {lo}..={hi}")]
    NotInWindow { lo: i32, hi: i32 },
    #[error("cannot bound the basis expansion of this form for the configuration")]
    UnboundedExpansion,
    #[error("structure constant support below n+m: ({n},{m}) reaches degree {h}")]
    BandViolation { n: i32, m: i32, h: i32 },
    #[error("almost-grading band differs across the probe window: {0:?}")]
    BandNotConstant(Vec<i32>),

    #[error("bracket of {a:?} and {b:?} leaves the table domain at {escaped:?}")]
    DomainEscape { a: (i32, usize), b: (i32, usize), escaped: (i32, usize) },
    #[error("nonzero cocycle value at total degree {0} > 0")]
    UpperBandViolation(i32),

    #[error("bad Lie algebra dimension: {0}")]
    BadDimension(String),
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("Casimir does not act as a scalar on the adjoint representation")]
    NotScalarOnAdjoint,
    #[error("unknown {kind} '{name}'")]
    UnknownStrategy { kind: &'static str, name: String },

    #[error("result reaches degree {degree}, below the module window -{depth}")]
    DepthExceeded { degree: i32, depth: i32 },
    #[error("critical level: c + kappa = 0")]
    CriticalLevel,
    #[error("generator index out of range: {0}")]
    BadGenerator(String),

    #[error("commutator defect for {a:?},{b:?} is not a multiple of the identity")]
    NonScalarDefect { a: (i32, usize), b: (i32, usize) },
    #[error("defect cocycle is not cohomologous to a multiple of the reference cocycle")]
    NotCohomologous,
    #[error("fitted central charge {found} differs from predicted {expected}")]
    CentralChargeMismatch { found: String, expected: String },

    #[error("parse error: {0}")]
    Parse(String),
}

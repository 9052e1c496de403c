use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcfield::Point;
use crate::rational::int;

/// In-points `I` and out-points `O` on the sphere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointConfig {
    in_points: Vec<Point>,
    out_points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct RawConfig {
    #[serde(rename = "in")]
    in_points: Vec<String>,
    #[serde(rename = "out")]
    out_points: Vec<String>,
}

impl PointConfig {
    pub fn new(in_points: Vec<Point>, out_points: Vec<Point>) -> Result<Self> {
        if in_points.is_empty() || out_points.is_empty() {
            return Err(Error::BadConfig("need at least one in-point and one out-point".into()));
        }
        let all: Vec<&Point> = in_points.iter().chain(&out_points).collect();
        for (i, a) in all.iter().enumerate() {
            if all[i + 1..].contains(a) {
                return Err(Error::BadConfig(format!("point {a} appears twice")));
            }
        }
        Ok(Self { in_points, out_points })
    }

    /// `I = {0}`, `O = {∞}`.
    pub fn classical() -> Self {
        Self::new(vec![Point::Finite(int(0))], vec![Point::Infinity]).expect("valid")
    }

    /// `I = (0, 1)`, `O = (2, ∞)`.
    pub fn two_by_two() -> Self {
        Self::new(
            vec![Point::Finite(int(0)), Point::Finite(int(1))],
            vec![Point::Finite(int(2)), Point::Infinity],
        )
        .expect("valid")
    }

    /// Parses `{"in": ["0","1"], "out": ["2","inf"]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_value(&serde_json::to_value(raw).map_err(|e| Error::Parse(e.to_string()))?)
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Self> {
        let raw: RawConfig = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let parse = |xs: &[String]| xs.iter().map(|s| Point::parse(s)).collect::<Result<Vec<_>>>();
        let cfg = Self::new(parse(&raw.in_points)?, parse(&raw.out_points)?);
        cfg.map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "in": self.in_points.iter().map(Point::encode).collect::<Vec<_>>(),
            "out": self.out_points.iter().map(Point::encode).collect::<Vec<_>>(),
        })
    }

    pub fn in_points(&self) -> &[Point] {
        &self.in_points
    }

    pub fn out_points(&self) -> &[Point] {
        &self.out_points
    }

    /// `K = #I`
    pub fn k(&self) -> usize {
        self.in_points.len()
    }

    /// `L = #O`
    pub fn l(&self) -> usize {
        self.out_points.len()
    }

    /// In-points first, then out-points, in configuration order.
    pub fn all_points(&self) -> impl Iterator<Item = &Point> {
        self.in_points.iter().chain(&self.out_points)
    }

    pub fn is_classical(&self) -> bool {
        *self == Self::classical()
    }
}

//! Krichever-Novikov bases on the sphere with several in- and out-points.

mod basis;
mod config;

pub use basis::{
    lie_derivative, prescribe_orders, vector_field_bracket, Expansion, GradingBounds, KNBasisElement,
    KNBasisTable, KNIndex, Label,
};
pub use config::PointConfig;

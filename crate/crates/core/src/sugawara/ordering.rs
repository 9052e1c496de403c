use std::sync::Arc;

use crate::registry::{Named, Registry};
use crate::repr::LieGen;

/// Decides which factor of a current pair acts first.
pub trait NormalOrdering: Named + Send + Sync {
    /// Whether `x(n) y(m)` keeps its written order, so that `y(m)` acts
    /// first.
    fn keep(&self, n: i32, m: i32) -> bool;
}

/// Keep iff `m >= n`.
pub struct Standard;

/// Keep iff `m > n`; equal degrees are swapped.
pub struct SwapEqual;

/// Keep iff `m >= n - 1`. Differs from the standard rule on adjacent
/// degrees, so the operators change by constants.
pub struct Lagged;

impl Named for Standard {
    fn name(&self) -> &'static str {
        "standard"
    }
}

impl NormalOrdering for Standard {
    fn keep(&self, n: i32, m: i32) -> bool {
        m >= n
    }
}

impl Named for SwapEqual {
    fn name(&self) -> &'static str {
        "swap-equal"
    }
}

impl NormalOrdering for SwapEqual {
    fn keep(&self, n: i32, m: i32) -> bool {
        m > n
    }
}

impl Named for Lagged {
    fn name(&self) -> &'static str {
        "lagged"
    }
}

impl NormalOrdering for Lagged {
    fn keep(&self, n: i32, m: i32) -> bool {
        m >= n - 1
    }
}

pub fn normal_orderings() -> Registry<dyn NormalOrdering> {
    let mut reg: Registry<dyn NormalOrdering> = Registry::new("normal ordering");
    reg.register(Arc::new(Standard));
    reg.register(Arc::new(SwapEqual));
    reg.register(Arc::new(Lagged));
    reg
}

/// `(left, right)` for the written product `x y`; `right` acts first.
pub fn normal_order_pair(rule: &dyn NormalOrdering, x: LieGen, y: LieGen) -> (LieGen, LieGen) {
    if rule.keep(x.degree, y.degree) {
        (x, y)
    } else {
        (y, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_rule() {
        let g = |n| LieGen::new(0, n, 1);
        assert_eq!(normal_order_pair(&Standard, g(1), g(0)), (g(0), g(1)));
        assert_eq!(normal_order_pair(&Standard, g(0), g(0)), (g(0), g(0)));
        assert_eq!(normal_order_pair(&Standard, g(-2), g(5)), (g(-2), g(5)));
        assert!(!SwapEqual.keep(3, 3));
        assert!(Lagged.keep(3, 2));
        let names: Vec<_> = normal_orderings().names().collect();
        assert_eq!(names, ["lagged", "standard", "swap-equal"]);
    }
}

//! Finitely supported vectors over the rationals, keyed by any ordered basis label.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<K: Ord> {
    terms: BTreeMap<K, Rat>,
}

impl<K: Ord> Default for SparseVec<K> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        let mut v = Self::new();
        v.terms.insert(key, crate::rational::one());
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, Rat)>) -> Self {
        let mut v = Self::new();
        for (k, c) in terms {
            v.add_term(k, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &K) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, key: K, coeff: &Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff.clone());
            }
        }
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &Self, scale: &Rat) {
        if scale.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), &(c * scale));
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c);
        }
    }

    pub fn scaled(&self, scale: &Rat) -> Self {
        if scale.is_zero() {
            return Self::new();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * scale)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-crate::rational::one());
        out
    }

    /// If `self == s * other` for a scalar `s`, returns it. Both zero gives `Some(0)`.
    pub fn ratio_to(&self, other: &Self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        let (k, c) = self.terms.iter().next()?;
        let d = other.terms.get(k)?;
        let s = c / d;
        if other.scaled(&s) == *self {
            Some(s)
        } else {
            None
        }
    }
}

impl<K: Ord> IntoIterator for SparseVec<K> {
    type Item = (K, Rat);
    type IntoIter = std::collections::btree_map::IntoIter<K, Rat>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn cancellation_prunes_terms() {
        let mut v = SparseVec::basis(1u32);
        v.add_term(2, &int(3));
        v.add_term(1, &int(-1));
        assert_eq!(v.len(), 1);
        assert_eq!(v.get(&2), int(3));
        assert_eq!(v.get(&1), int(0));
    }

    #[test]
    fn ratio_detects_scalar_multiples() {
        let a = SparseVec::from_terms([(1u32, int(2)), (3, int(4))]);
        let b = SparseVec::from_terms([(1u32, int(1)), (3, int(2))]);
        assert_eq!(a.ratio_to(&b), Some(int(2)));
        let c = SparseVec::from_terms([(1u32, int(1)), (3, int(3))]);
        assert_eq!(a.ratio_to(&c), None);
        assert_eq!(SparseVec::<u32>::new().ratio_to(&b), Some(int(0)));
        assert_eq!(b.scaled(&frac(1, 2)).get(&3), int(1));
    }
}

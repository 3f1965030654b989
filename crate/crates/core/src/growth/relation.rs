use std::collections::BTreeMap;

use crate::affine::AffineMap;
use crate::error::{Error, Result};

/// A set of index pairs `E ⊆ A×B` with the multiplicities `r_E(x)` of its products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    left: Vec<AffineMap>,
    right: Vec<AffineMap>,
    pairs: Vec<(usize, usize)>,
    products: BTreeMap<AffineMap, usize>,
}

/// `A ∘_E B` with multiplicities.
pub fn partial_product(a: &[AffineMap], b: &[AffineMap], e: &[(usize, usize)]) -> Result<Relation> {
    let mut pairs = e.to_vec();
    pairs.sort_unstable();
    pairs.dedup();
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= a.len() || j >= b.len()) {
        return Err(Error::IndexOutOfRange(i, j));
    }
    let mut products = BTreeMap::new();
    for &(i, j) in &pairs {
        *products.entry(a[i].compose(&b[j])?).or_insert(0) += 1;
    }
    Ok(Relation {
        left: a.to_vec(),
        right: b.to_vec(),
        pairs,
        products,
    })
}

impl Relation {
    pub fn left(&self) -> &[AffineMap] {
        &self.left
    }

    pub fn right(&self) -> &[AffineMap] {
        &self.right
    }

    /// Sorted, without repeats.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn products(&self) -> &BTreeMap<AffineMap, usize> {
        &self.products
    }

    pub fn product_set(&self) -> Vec<AffineMap> {
        self.products.keys().cloned().collect()
    }

    pub fn multiplicity(&self, x: &AffineMap) -> usize {
        self.products.get(x).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.binary_search(&(i, j)).is_ok()
    }

    pub fn product_of(&self, i: usize, j: usize) -> AffineMap {
        &self.left[i] * &self.right[j]
    }

    /// The sub-relation of pairs whose product passes `keep`.
    pub fn restrict(&self, keep: impl Fn(&AffineMap, usize) -> bool) -> Relation {
        let products: BTreeMap<AffineMap, usize> = self
            .products
            .iter()
            .filter(|(x, &r)| keep(x, r))
            .map(|(x, &r)| (x.clone(), r))
            .collect();
        let pairs = self
            .pairs
            .iter()
            .copied()
            .filter(|&(i, j)| products.contains_key(&self.product_of(i, j)))
            .collect();
        Relation {
            left: self.left.clone(),
            right: self.right.clone(),
            pairs,
            products,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn q(a: i64, b: i64) -> AffineMap {
        AffineMap::from_ints(a, b, Field::Rational).unwrap()
    }

    #[test]
    fn examples() {
        let r = partial_product(&[q(1, 0)], &[q(1, 1)], &[(0, 0)]).unwrap();
        assert_eq!(r.product_set(), vec![q(1, 1)]);
        assert_eq!(r.multiplicity(&q(1, 1)), 1);
        let r = partial_product(&[q(1, 0)], &[q(1, 1)], &[]).unwrap();
        assert!(r.products().is_empty());
        let a = [q(1, 1), q(1, 2)];
        let full = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let r = partial_product(&a, &a, &full).unwrap();
        assert_eq!(r.product_set(), vec![q(1, 2), q(1, 3), q(1, 4)]);
        let mult: Vec<usize> = r.products().values().copied().collect();
        assert_eq!(mult, vec![1, 2, 1]);
        assert_eq!(mult.iter().sum::<usize>(), r.len());
        assert!(matches!(
            partial_product(&a, &a, &[(2, 0)]),
            Err(Error::IndexOutOfRange(2, 0))
        ));
    }

    #[test]
    fn restriction_keeps_sums() {
        let a = [q(1, 1), q(1, 2)];
        let full = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let r = partial_product(&a, &a, &full).unwrap();
        let s = r.restrict(|_, m| m >= 2);
        assert_eq!(s.len(), 2);
        assert_eq!(s.product_set(), vec![q(1, 3)]);
    }
}

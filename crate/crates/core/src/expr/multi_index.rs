use alloc::vec::Vec;
use core::cmp::Ordering;

/// Derivative multi-index `α = (α_1, …, α_n)`; `u_α` is the jet coordinate
/// `∂^{|α|} u / ∂x_1^{α_1} … ∂x_n^{α_n}`.
///
/// Ordered graded-lexicographically: higher order first, then by the counts
/// compared left to right, so `u_t` ranks above `u_x` for variables `(t, x)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(alloc::vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[i] = 1;
        m
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        MultiIndex(counts)
    }

    /// Builds the multi-index of a derivative listed variable by variable,
    /// e.g. `[0, 1, 1]` for `u_{t x x}` over `(t, x)`.
    pub fn from_vars(n: usize, vars: &[usize]) -> Self {
        let mut m = Self::zero(n);
        for &v in vars {
            m.0[v] += 1;
        }
        m
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `|α|`
    pub fn order(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn incremented(&self, i: usize) -> MultiIndex {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    pub fn decremented(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[i] -= 1;
        Some(m)
    }

    /// `self - other` when `self ≥ other` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !self.dominates(other) {
            return None;
        }
        Some(MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// The variables of the derivative listed with multiplicity, in index order.
    pub fn vars(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order());
        for (i, &c) in self.0.iter().enumerate() {
            for _ in 0..c {
                out.push(i);
            }
        }
        out
    }

    /// All multi-indices of length `n` with `1 ≤ |α| ≤ max_order`, sorted.
    pub fn all_up_to(n: usize, max_order: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut frontier = alloc::vec![MultiIndex::zero(n)];
        for _ in 0..max_order {
            let mut next = Vec::new();
            for m in &frontier {
                for i in 0..n {
                    let c = m.incremented(i);
                    if !next.contains(&c) {
                        next.push(c);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        out
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_increments_order() {
        let a = MultiIndex::from_counts(alloc::vec![1, 2]);
        for i in 0..2 {
            assert_eq!(a.add(&MultiIndex::unit(2, i)).order(), a.order() + 1);
        }
    }

    #[test]
    fn addition_commutes() {
        let a = MultiIndex::from_counts(alloc::vec![1, 0, 3]);
        let b = MultiIndex::from_counts(alloc::vec![0, 2, 1]);
        assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn graded_lex_order() {
        let t = MultiIndex::unit(2, 0);
        let x = MultiIndex::unit(2, 1);
        let xx = MultiIndex::from_counts(alloc::vec![0, 2]);
        assert!(t > x);
        assert!(xx > t);
        assert!(MultiIndex::zero(2) < x);
    }

    #[test]
    fn enumerate_jets() {
        assert_eq!(MultiIndex::all_up_to(2, 2).len(), 5);
        assert_eq!(MultiIndex::all_up_to(3, 1).len(), 3);
    }

    #[test]
    fn subtraction_requires_dominance() {
        let tx = MultiIndex::from_counts(alloc::vec![1, 1]);
        let t = MultiIndex::unit(2, 0);
        assert_eq!(tx.checked_sub(&t), Some(MultiIndex::unit(2, 1)));
        assert_eq!(t.checked_sub(&tx), None);
    }
}

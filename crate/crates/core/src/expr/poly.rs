use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::{Atom, Expr, Rat};

/// Product of atoms with positive exponents, sorted by atom.
///
/// At most one `exp` factor is present: `exp(a)·exp(b)` is stored as
/// `exp(a + b)` and `exp(a)^k` as `exp(k·a)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub(crate) Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial::from_factors(alloc::vec![(a, 1)])
    }

    /// Sorts and combines factors, merging exponentials.
    pub fn from_factors(mut factors: Vec<(Atom, u32)>) -> Self {
        factors.retain(|(_, k)| *k > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(factors.len());
        let mut exp_arg: Option<Expr> = None;
        for (a, k) in factors {
            if let Atom::Exp(arg) = &a {
                let scaled = arg * &Expr::int(k as i64);
                exp_arg = Some(match exp_arg {
                    None => scaled,
                    Some(prev) => prev + scaled,
                });
                continue;
            }
            match out.last_mut() {
                Some((last, e)) if *last == a => *e += k,
                _ => out.push((a, k)),
            }
        }
        let mut m = Monomial(out);
        if let Some(arg) = exp_arg {
            if !arg.is_zero() {
                m.insert_sorted(Atom::Exp(arg), 1);
            }
        }
        m
    }

    fn insert_sorted(&mut self, a: Atom, k: u32) {
        match self.0.binary_search_by(|(b, _)| b.cmp(&a)) {
            Ok(i) => self.0[i].1 += k,
            Err(i) => self.0.insert(i, (a, k)),
        }
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.0
            .binary_search_by(|(b, _)| b.cmp(a))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    fn has_exp(&self) -> bool {
        self.0.iter().any(|(a, _)| matches!(a, Atom::Exp(_)))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.has_exp() && other.has_exp() {
            let mut f = self.0.clone();
            f.extend(other.0.iter().cloned());
            return Monomial::from_factors(f);
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial::from_factors(self.0.iter().map(|(a, e)| (a.clone(), e * k)).collect())
    }

    /// Plain exponent-wise division; `None` unless `other` divides `self`.
    /// Exponentials are treated as ordinary atoms here.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, k) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *a {
                let kb = other.0[j].1;
                if kb > *k {
                    return None;
                }
                if kb < *k {
                    out.push((a.clone(), k - kb));
                }
                j += 1;
            } else {
                if j < other.0.len() && other.0[j].0 < *a {
                    return None;
                }
                out.push((a.clone(), *k));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(a, k)| {
                    let kb = other.degree_in(a);
                    (kb > 0).then(|| (a.clone(), (*k).min(kb)))
                })
                .collect(),
        )
    }

    /// Removes `a^k` completely, returning the rest and `k`.
    pub fn split_off(&self, a: &Atom) -> (Monomial, u32) {
        let k = self.degree_in(a);
        (Monomial(self.0.iter().filter(|(b, _)| b != a).cloned().collect()), k)
    }
}

/// Lexicographic monomial order with the largest atom most significant; it is
/// compatible with multiplication as long as no exponentials merge.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (self.0.len(), other.0.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {
                    let (a, ea) = &self.0[i - 1];
                    let (b, eb) = &other.0[j - 1];
                    match a.cmp(b) {
                        Ordering::Equal => match ea.cmp(eb) {
                            Ordering::Equal => {
                                i -= 1;
                                j -= 1;
                            }
                            o => return o,
                        },
                        o => return o,
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over the rationals with atoms as variables. Terms are
/// sorted by [`Monomial`] order and coefficients are nonzero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Poly {
    pub(crate) terms: Vec<(Monomial, Rat)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: alloc::vec![(Monomial::one(), c)] }
        }
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: alloc::vec![(m, c)] }
        }
    }

    pub fn atom(a: Atom) -> Self {
        Poly::term(Monomial::atom(a), Rat::one())
    }

    pub(crate) fn from_map(map: BTreeMap<Monomial, Rat>) -> Self {
        Poly { terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Leading term in monomial order.
    pub fn leading(&self) -> Option<&(Monomial, Rat)> {
        self.terms.last()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = BTreeSet::new();
        for (m, _) in &self.terms {
            for (a, _) in &m.0 {
                s.insert(a.clone());
            }
        }
        s
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.terms.iter().any(|(m, _)| m.degree_in(a) > 0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        if !m.has_exp() {
            // multiplication by an exp-free monomial preserves the order
            return Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * k)).collect() };
        }
        let mut acc = BTreeMap::new();
        for (n, c) in &self.terms {
            add_into(&mut acc, n.mul(m), c * k);
        }
        Poly::from_map(acc)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                add_into(&mut acc, m1.mul(m2), c1 * c2);
            }
        }
        Poly::from_map(acc)
    }

    pub fn pow(&self, k: u32) -> Poly {
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            return Poly::term(m.pow(k), num_traits::pow(c.clone(), k as usize));
        }
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(a)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `a`, keyed by the power of `a`.
    pub fn coeffs_in(&self, a: &Atom) -> BTreeMap<u32, Poly> {
        let mut acc: BTreeMap<u32, BTreeMap<Monomial, Rat>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, k) = m.split_off(a);
            add_into(acc.entry(k).or_default(), rest, c.clone());
        }
        acc.into_iter().map(|(k, m)| (k, Poly::from_map(m))).collect()
    }

    pub fn coeff_of_power(&self, a: &Atom, k: u32) -> Poly {
        let mut acc = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, d) = m.split_off(a);
            if d == k {
                add_into(&mut acc, rest, c.clone());
            }
        }
        Poly::from_map(acc)
    }

    /// Formal partial derivative with respect to an atom. An `exp` factor is
    /// differentiated as an ordinary variable of degree one.
    pub fn formal_derivative(&self, a: &Atom) -> Poly {
        let mut acc = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.degree_in(a);
            if k == 0 {
                continue;
            }
            let mut f = m.0.clone();
            let i = f.iter().position(|(b, _)| b == a).unwrap();
            if k == 1 {
                f.remove(i);
            } else {
                f[i].1 -= 1;
            }
            add_into(&mut acc, Monomial(f), c * Rat::from_integer(k.into()));
        }
        Poly::from_map(acc)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        if m.is_one() {
            return Some(self.clone());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (n, c) in &self.terms {
            terms.push((n.div(m)?, c.clone()));
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Some(Poly { terms })
    }

    /// Exact division; `None` when `d` does not divide `self`. Only valid for
    /// polynomials without exponential atoms (see the gcd module).
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if d.is_monomial() {
            let (m, c) = &d.terms[0];
            return self.div_monomial(m).map(|p| p.scale(&c.recip()));
        }
        let (lm, lc) = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, Rat> = BTreeMap::new();
        while let Some((m, c)) = rem.leading().cloned() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            add_into(&mut quot, qm, qc);
        }
        Some(Poly::from_map(quot))
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn leading_coeff_is_negative(&self) -> bool {
        self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }

    pub(crate) fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Poly {
        let mut acc = BTreeMap::new();
        for (m, c) in &self.terms {
            add_into(&mut acc, f(m), c.clone());
        }
        Poly::from_map(acc)
    }
}

pub(crate) fn add_into(acc: &mut BTreeMap<Monomial, Rat>, m: Monomial, c: Rat) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        alloc::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        alloc::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::atom(Atom::Indep(0))
    }
    fn y() -> Poly {
        Poly::atom(Atom::Indep(1))
    }

    #[test]
    fn order_is_multiplicative() {
        let a = Monomial::atom(Atom::Indep(0));
        let b = Monomial::atom(Atom::Indep(1));
        assert!(a < b);
        assert!(a.mul(&a) < b.mul(&a));
        assert!(a.pow(5) < b);
    }

    #[test]
    fn exact_division() {
        let p = x().add(&y());
        let q = x().sub(&y());
        let prod = p.mul(&q);
        assert_eq!(prod.exact_div(&p), Some(q.clone()));
        assert_eq!(prod.add(&Poly::one()).exact_div(&p), None);
    }

    #[test]
    fn exponentials_merge() {
        let e = Poly::atom(Atom::Exp(Expr::indep(0)));
        let sq = e.mul(&e);
        assert_eq!(sq, Poly::atom(Atom::Exp(Expr::indep(0) * Expr::int(2))));
        let inv = Poly::atom(Atom::Exp(-Expr::indep(0)));
        assert!(e.mul(&inv).is_one());
    }

    #[test]
    fn coefficient_split() {
        let p = x().mul(&y()).add(&y().pow(2)).add(&x());
        let c = p.coeffs_in(&Atom::Indep(1));
        assert_eq!(c[&0], x());
        assert_eq!(c[&1], x());
        assert_eq!(c[&2], Poly::one());
    }
}

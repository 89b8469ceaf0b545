use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{Expr, MultiIndex};

/// Application of an unknown function, possibly differentiated.
///
/// `deriv[k]` counts derivatives with respect to the `k`-th argument slot, so
/// `θ_xu` for `θ(t, x, u)` is `deriv = [0, 1, 1]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FuncApp {
    pub name: Arc<str>,
    pub deriv: Vec<u32>,
    pub args: Vec<Expr>,
}

impl FuncApp {
    pub fn order(&self) -> usize {
        self.deriv.iter().map(|&d| d as usize).sum()
    }

    pub fn differentiated(&self, slot: usize) -> FuncApp {
        let mut f = self.clone();
        f.deriv[slot] += 1;
        f
    }
}

/// Indivisible factor of a monomial.
///
/// Variant order fixes the canonical order: independent variables, then jet
/// coordinates (dependent variables are the order-zero jets), parameters,
/// unknown functions, and finally composite nodes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Atom {
    Indep(usize),
    Jet(usize, MultiIndex),
    Param(Arc<str>),
    Func(FuncApp),
    Exp(Expr),
    Log(Expr),
    /// Formal antiderivative of the expression with respect to an
    /// independent variable.
    Int(Expr, usize),
    /// Opaque placeholder used internally by the gcd routines.
    Var(u32),
}

impl Atom {
    fn rank(&self) -> u8 {
        match self {
            Atom::Indep(_) => 0,
            Atom::Jet(..) => 1,
            Atom::Param(_) => 2,
            Atom::Func(_) => 3,
            Atom::Exp(_) => 4,
            Atom::Log(_) => 5,
            Atom::Int(..) => 6,
            Atom::Var(_) => 7,
        }
    }

    pub fn is_symbol(&self) -> bool {
        matches!(self, Atom::Indep(_) | Atom::Jet(..) | Atom::Param(_))
    }

    /// Expressions nested inside this atom.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Atom::Func(f) => f.args.iter().collect(),
            Atom::Exp(e) | Atom::Log(e) | Atom::Int(e, _) => alloc::vec![e],
            _ => Vec::new(),
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Atom::Indep(a), Atom::Indep(b)) => a.cmp(b),
            (Atom::Jet(j1, a1), Atom::Jet(j2, a2)) => a1.cmp(a2).then(j1.cmp(j2)),
            (Atom::Param(a), Atom::Param(b)) => a.cmp(b),
            (Atom::Func(a), Atom::Func(b)) => a
                .name
                .cmp(&b.name)
                .then_with(|| a.order().cmp(&b.order()))
                .then_with(|| a.deriv.cmp(&b.deriv))
                .then_with(|| a.args.cmp(&b.args)),
            (Atom::Exp(a), Atom::Exp(b)) | (Atom::Log(a), Atom::Log(b)) => a.cmp(b),
            (Atom::Int(a, v), Atom::Int(b, w)) => v.cmp(w).then_with(|| a.cmp(b)),
            (Atom::Var(a), Atom::Var(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_kind_order() {
        let x = Atom::Indep(1);
        let u = Atom::Jet(0, MultiIndex::zero(2));
        let ux = Atom::Jet(0, MultiIndex::unit(2, 1));
        let a = Atom::Param("A".into());
        let f = Atom::Func(FuncApp { name: "f".into(), deriv: alloc::vec![0], args: alloc::vec![Expr::indep(0)] });
        let e = Atom::Exp(Expr::indep(0));
        let mut v = alloc::vec![e.clone(), f.clone(), a.clone(), ux.clone(), u.clone(), x.clone()];
        v.sort();
        assert_eq!(v, alloc::vec![x, u, ux, a, f, e]);
    }
}

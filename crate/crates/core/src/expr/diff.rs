//! Partial and total derivatives.

use alloc::collections::BTreeMap;

use super::{Atom, Expr, FuncApp, JetContext, Poly, Symbol};
use crate::{Error, Result};

/// How a derivation acts on the leaves of an expression; composite atoms are
/// handled by the chain rule.
pub(crate) trait Derivation {
    fn leaf(&self, a: &Atom) -> Expr;
    fn integral(&self, integrand: &Expr, var: usize) -> Expr;
}

struct Total(usize);

impl Derivation for Total {
    fn leaf(&self, a: &Atom) -> Expr {
        match a {
            Atom::Indep(k) if *k == self.0 => Expr::one(),
            Atom::Jet(j, alpha) => Expr::jet(*j, alpha.incremented(self.0)),
            _ => Expr::zero(),
        }
    }

    fn integral(&self, integrand: &Expr, var: usize) -> Expr {
        if var == self.0 {
            integrand.clone()
        } else {
            Expr::integral(derive(self, integrand), var)
        }
    }
}

struct Partial<'a>(&'a Atom);

impl Derivation for Partial<'_> {
    fn leaf(&self, a: &Atom) -> Expr {
        if a == self.0 {
            Expr::one()
        } else {
            Expr::zero()
        }
    }

    fn integral(&self, integrand: &Expr, var: usize) -> Expr {
        if *self.0 == Atom::Indep(var) {
            integrand.clone()
        } else {
            Expr::integral(derive(self, integrand), var)
        }
    }
}

pub(crate) fn derive<D: Derivation>(d: &D, e: &Expr) -> Expr {
    let mut memo = BTreeMap::new();
    let dn = derive_poly(d, e.num(), &mut memo);
    if e.den().is_one() {
        return dn;
    }
    let dd = derive_poly(d, e.den(), &mut memo);
    if dd.is_zero() {
        return dn * Expr::from_parts(Poly::one(), e.den().clone()).unwrap();
    }
    let den = Expr::from_poly(e.den().clone());
    let num = Expr::from_poly(e.num().clone());
    (dn * &den - num * dd) / den.pow(2)
}

fn derive_poly<D: Derivation>(d: &D, p: &Poly, memo: &mut BTreeMap<Atom, Expr>) -> Expr {
    let mut poly_part = Poly::zero();
    let mut rest = Expr::zero();
    for a in p.atoms() {
        let da = match memo.get(&a) {
            Some(v) => v.clone(),
            None => {
                let v = atom_derivative(d, &a);
                memo.insert(a.clone(), v.clone());
                v
            }
        };
        if da.is_zero() {
            continue;
        }
        let fd = p.formal_derivative(&a);
        if da.den().is_one() {
            poly_part = poly_part.add(&fd.mul(da.num()));
        } else {
            rest = rest + Expr::from_poly(fd) * da;
        }
    }
    Expr::from_poly(poly_part) + rest
}

fn atom_derivative<D: Derivation>(d: &D, a: &Atom) -> Expr {
    match a {
        Atom::Indep(_) | Atom::Jet(..) | Atom::Param(_) => d.leaf(a),
        Atom::Func(f) => func_derivative(d, f),
        Atom::Exp(arg) => {
            let da = derive(d, arg);
            if da.is_zero() {
                Expr::zero()
            } else {
                Expr::from_atom(a.clone()) * da
            }
        }
        Atom::Log(arg) => {
            let da = derive(d, arg);
            if da.is_zero() {
                Expr::zero()
            } else {
                da / arg
            }
        }
        Atom::Int(f, var) => d.integral(f, *var),
        Atom::Var(_) => Expr::zero(),
    }
}

fn func_derivative<D: Derivation>(d: &D, f: &FuncApp) -> Expr {
    let mut out = Expr::zero();
    for (k, arg) in f.args.iter().enumerate() {
        let da = derive(d, arg);
        if da.is_zero() {
            continue;
        }
        out = out + Expr::from_atom(Atom::Func(f.differentiated(k))) * da;
    }
    out
}

/// `D_i e = ∂_{x_i} e + Σ u^j_{α+e_i} ∂e/∂u^j_α`.
pub(crate) fn total_derivative(e: &Expr, i: usize) -> Expr {
    derive(&Total(i), e)
}

pub(crate) fn partial(e: &Expr, s: &Symbol) -> Expr {
    derive(&Partial(&s.atom()), e)
}

/// Partial derivative with respect to a named symbol of the context.
pub fn partial_derivative(e: &Expr, s: &Symbol, ctx: &JetContext) -> Result<Expr> {
    match s {
        Symbol::Indep(i) if *i >= ctx.n() => return Err(Error::UnknownSymbol(alloc::format!("x#{i}"))),
        Symbol::Jet(j, a) if *j >= ctx.m() || a.len() != ctx.n() => {
            return Err(Error::UnknownSymbol(alloc::format!("u#{j}")))
        }
        _ => {}
    }
    Ok(partial(e, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::MultiIndex;

    fn ctx() -> JetContext {
        JetContext::new(&["t", "x"], &["u"]).unwrap()
    }

    #[test]
    fn partial_examples() {
        let c = ctx();
        let (t, u, ux, ut, uxx) = (c.x(0), c.u(0), c.jet(0, &[1]), c.jet(0, &[0]), c.jet(0, &[1, 1]));
        let sx = Symbol::Jet(0, MultiIndex::unit(2, 1));
        let e = &t * ux.pow(2) + &u;
        assert_eq!(e.partial(&sx), Expr::int(2) * &t * &ux);
        let su = Symbol::dep(0, 2);
        assert_eq!(Expr::exp(u.clone()).partial(&su), Expr::exp(u.clone()));
        let st = Symbol::Jet(0, MultiIndex::unit(2, 0));
        assert_eq!((&ut - &uxx).partial(&st), Expr::one());
        assert!(partial_derivative(&u, &Symbol::Indep(5), &c).is_err());
    }

    #[test]
    fn total_examples() {
        let c = ctx();
        let (t, x, u) = (c.x(0), c.x(1), c.u(0));
        let (ut, ux, uxx, utt, utx) =
            (c.jet(0, &[0]), c.jet(0, &[1]), c.jet(0, &[1, 1]), c.jet(0, &[0, 0]), c.jet(0, &[0, 1]));
        assert_eq!(u.total_derivative(1), ux);
        assert_eq!((&x * &ux).total_derivative(1), &ux + &x * &uxx);
        let e = Expr::int(-2) * &t * &ut - &x * &ux;
        let expected = Expr::int(-2) * &ut - Expr::int(2) * &t * &utt - &x * &utx;
        assert_eq!(e.total_derivative(0), expected);
        assert_eq!(u.total_derivative_multi(&MultiIndex::from_counts(alloc::vec![0, 2])), uxx);
        assert_eq!(u.total_derivative_multi(&MultiIndex::from_counts(alloc::vec![1, 1])), utx);
    }

    #[test]
    fn chain_rule_through_unknown_function() {
        let c = ctx();
        let (t, x, u) = (c.x(0), c.x(1), c.u(0));
        let theta = Expr::func("theta", alloc::vec![t.clone(), x.clone(), u.clone()]);
        let th_x = Expr::func_deriv("theta", alloc::vec![0, 1, 0], alloc::vec![t.clone(), x.clone(), u.clone()]);
        let th_u = Expr::func_deriv("theta", alloc::vec![0, 0, 1], alloc::vec![t, x, u]);
        assert_eq!(theta.total_derivative(1), &th_x + &th_u * c.jet(0, &[1]));
        // non-arguments have zero derivative
        let h = Expr::func("h", alloc::vec![c.x(0)]);
        assert!(h.total_derivative(1).is_zero());
    }

    #[test]
    fn integral_differentiates_back() {
        let c = ctx();
        let h = Expr::func("h", alloc::vec![c.x(0)]);
        let i = Expr::integral(&h - Expr::one(), 0);
        assert_eq!(i.total_derivative(0), &h - Expr::one());
        assert!(i.total_derivative(1).is_zero());
    }

    #[test]
    fn quotient_rule() {
        let c = ctx();
        let x = c.x(1);
        let e = Expr::one() / &x;
        assert_eq!(e.total_derivative(1), Expr::int(-1) / x.pow(2));
        let l = Expr::log(x.clone());
        assert_eq!(l.partial(&Symbol::Indep(1)), Expr::one() / &x);
    }
}

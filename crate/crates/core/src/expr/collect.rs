use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{Atom, Expr, Monomial, Poly};
use crate::{Error, Result};

/// Splits `e` as a polynomial in `vars`, returning the coefficient of each
/// monomial. Coefficients are free of `vars`; zero coefficients are omitted.
///
/// Fails with [`Error::NonPolynomial`] when a variable occurs in the
/// denominator or inside a nested subterm such as `exp(u_x)`.
pub fn collect_coefficients(e: &Expr, vars: &[Atom]) -> Result<BTreeMap<Monomial, Expr>> {
    let nested = |a: &Atom| -> Option<&Atom> {
        if vars.contains(a) {
            return None;
        }
        let deep = Expr::from_atom(a.clone()).atoms_deep();
        vars.iter().find(|v| deep.contains(v))
    };
    for a in e.den().atoms() {
        if let Some(v) = vars.iter().find(|v| **v == a).or_else(|| nested(&a)) {
            return Err(Error::NonPolynomial { var: format!("{v:?}"), term: format!("{:?}", e.denominator()) });
        }
    }
    let mut parts: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in e.num().terms() {
        let mut key = Vec::new();
        let mut rest = Vec::new();
        for (a, k) in m.factors() {
            if vars.contains(a) {
                key.push((a.clone(), *k));
            } else if let Some(v) = nested(a) {
                return Err(Error::NonPolynomial {
                    var: format!("{v:?}"),
                    term: format!("{:?}", Expr::from_atom(a.clone())),
                });
            } else {
                rest.push((a.clone(), *k));
            }
        }
        let coeff = Poly::term(Monomial::from_factors(rest), c.clone());
        let slot = parts.entry(Monomial::from_factors(key)).or_insert_with(Poly::zero);
        *slot = slot.add(&coeff);
    }
    let mut out = BTreeMap::new();
    for (k, p) in parts {
        if !p.is_zero() {
            out.insert(k, Expr::from_parts(p, e.den().clone())?);
        }
    }
    Ok(out)
}

/// Rebuilds `Σ coeff · monomial`; inverse of [`collect_coefficients`].
pub fn recombine(parts: &BTreeMap<Monomial, Expr>) -> Expr {
    Expr::sum(parts.iter().map(|(m, c)| c * &Expr::from_poly(Poly::term(m.clone(), super::Rat::from_integer(1.into())))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::JetContext;

    #[test]
    fn collects_in_jets() {
        let c = JetContext::new(&["t", "x"], &["u"]).unwrap();
        let (x, ux, uxx) = (c.x(1), c.jet(0, &[1]), c.jet(0, &[1, 1]));
        let a = Expr::func("a", alloc::vec![c.x(0)]);
        let e = (&a * &ux * &ux + &x * &uxx + &x * &x + Expr::one()) / (Expr::int(1) + &x);
        let vars = [ux.as_atom().unwrap().clone(), uxx.as_atom().unwrap().clone()];
        let parts = collect_coefficients(&e, &vars).unwrap();
        assert_eq!(parts.len(), 3);
        assert_eq!(recombine(&parts), e);
        assert_eq!(parts[&Monomial::one()], (&x * &x + Expr::one()) / (Expr::int(1) + &x));
    }

    #[test]
    fn rejects_nested_occurrences() {
        let c = JetContext::new(&["x"], &["u"]).unwrap();
        let ux = c.jet(0, &[0]);
        let e = Expr::exp(ux.clone()) + c.x(0);
        let err = collect_coefficients(&e, &[ux.as_atom().unwrap().clone()]).unwrap_err();
        assert!(matches!(err, Error::NonPolynomial { .. }));
        let e = Expr::one() / (Expr::one() + &ux);
        assert!(collect_coefficients(&e, &[ux.as_atom().unwrap().clone()]).is_err());
    }
}

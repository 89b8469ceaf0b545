//! Multivariate polynomial gcd over the rationals (recursive primitive
//! remainder sequences) and cancellation of fractions.

use alloc::vec::Vec;

use alloc::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use super::poly::{add_into, Monomial, Poly};
use super::Rat;
use super::{Atom, Expr};

/// Replaces exponential atoms with opaque variables so that multiplication
/// is an honest monomial operation.
struct Opaque {
    exps: Vec<Expr>,
}

impl Opaque {
    fn new() -> Self {
        Opaque { exps: Vec::new() }
    }

    fn hide(&mut self, p: &Poly) -> Poly {
        if !p.terms.iter().any(|(m, _)| m.0.iter().any(|(a, _)| matches!(a, Atom::Exp(_)))) {
            return p.clone();
        }
        let mut terms: Vec<(Monomial, super::Rat)> = Vec::with_capacity(p.terms.len());
        for (m, c) in &p.terms {
            let mut f = Vec::with_capacity(m.0.len());
            for (a, k) in &m.0 {
                if let Atom::Exp(arg) = a {
                    let idx = match self.exps.iter().position(|e| e == arg) {
                        Some(i) => i,
                        None => {
                            self.exps.push(arg.clone());
                            self.exps.len() - 1
                        }
                    };
                    f.push((Atom::Var(idx as u32), *k));
                } else {
                    f.push((a.clone(), *k));
                }
            }
            f.sort_by(|a, b| a.0.cmp(&b.0));
            terms.push((Monomial(f), c.clone()));
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    fn reveal(&self, p: &Poly) -> Poly {
        if self.exps.is_empty() {
            return p.clone();
        }
        p.map_monomials(|m| {
            Monomial::from_factors(
                m.0.iter()
                    .map(|(a, k)| match a {
                        Atom::Var(i) => (Atom::Exp(self.exps[*i as usize].clone()), *k),
                        _ => (a.clone(), *k),
                    })
                    .collect(),
            )
        })
    }
}

/// Monic gcd of two polynomials.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut o = Opaque::new();
    let (ha, hb) = (o.hide(a), o.hide(b));
    o.reveal(&gcd(&ha, &hb))
}

/// Cancels the gcd of numerator and denominator; the denominator of the
/// result is monic.
pub fn cancel(num: &Poly, den: &Poly) -> (Poly, Poly) {
    let mut o = Opaque::new();
    let (hn, hd) = (o.hide(num), o.hide(den));
    let g = gcd(&hn, &hd);
    let (mut n, mut d) = if g.is_constant() {
        (hn, hd)
    } else {
        (hn.exact_div(&g).expect("gcd divides numerator"), hd.exact_div(&g).expect("gcd divides denominator"))
    };
    if let Some((_, lc)) = d.leading() {
        let inv = lc.recip();
        n = n.scale(&inv);
        d = d.scale(&inv);
    }
    (o.reveal(&n), o.reveal(&d))
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma).unwrap();
    let b1 = b.div_monomial(&mb).unwrap();
    let g = match heuristic_gcd(&a1, &b1) {
        Some(g) => g,
        None => gcd_primitive(&a1, &b1),
    };
    g.mul_term(&mg, &super::Rat::from_integer(1.into())).monic()
}

fn int_poly(p: &Poly) -> Poly {
    let l = p.terms.iter().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    p.scale(&Rat::from_integer(l))
}

fn int_content(p: &Poly) -> BigInt {
    p.terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms.iter().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn eval_at(p: &Poly, v: &Atom, xi: &BigInt) -> Poly {
    let mut acc = BTreeMap::new();
    for (m, c) in &p.terms {
        let (rest, k) = m.split_off(v);
        add_into(&mut acc, rest, c * Rat::from_integer(Pow::pow(xi, k)));
    }
    Poly::from_map(acc)
}

/// Symmetric `ξ`-adic expansion of an integral image back into a polynomial
/// in `v`.
fn interpolate(h: &Poly, v: &Atom, xi: &BigInt) -> Poly {
    let half = xi / BigInt::from(2);
    let mut h = h.clone();
    let mut out = BTreeMap::new();
    let mut i = 0u32;
    while !h.is_zero() {
        let mut digit = BTreeMap::new();
        for (m, c) in &h.terms {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            add_into(&mut digit, m.clone(), Rat::from_integer(r));
        }
        let digit = Poly::from_map(digit);
        for (m, c) in &digit.terms {
            let vm = if i == 0 { m.clone() } else { m.mul(&Monomial::from_factors(alloc::vec![(v.clone(), i)])) };
            add_into(&mut out, vm, c.clone());
        }
        h = h.sub(&digit).scale(&Rat::from_integer(xi.clone()).recip());
        i += 1;
    }
    Poly::from_map(out)
}

fn primitive_int(p: &Poly) -> Poly {
    let c = int_content(p);
    let p = if c.is_one() { p.clone() } else { p.scale(&Rat::from_integer(c).recip()) };
    if p.leading_coeff_is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Heuristic gcd by evaluation at a large integer and `ξ`-adic
/// reconstruction. Every candidate is checked by trial division, so a
/// `Some` result is the gcd up to a constant.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    heu(&primitive_int(&int_poly(a)), &primitive_int(&int_poly(b)), 0)
}

fn heu(f: &Poly, g: &Poly, depth: usize) -> Option<Poly> {
    let (cf, cg) = (int_content(f), int_content(g));
    let gc = cf.gcd(&cg);
    let konst = || Poly::constant(Rat::from_integer(gc.clone()));
    if f.is_constant() || g.is_constant() {
        return Some(konst());
    }
    let f = f.scale(&Rat::from_integer(cf).recip());
    let g = g.scale(&Rat::from_integer(cg).recip());
    let (af, ag) = (f.atoms(), g.atoms());
    let Some(v) = af.intersection(&ag).max().cloned() else {
        return Some(konst());
    };
    if depth > 12 {
        return None;
    }
    let bound = BigInt::from(2) * max_norm(&f).min(max_norm(&g)) + BigInt::from(29);
    let mut xi = bound;
    for _ in 0..6 {
        let (ff, gg) = (eval_at(&f, &v, &xi), eval_at(&g, &v, &xi));
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(h) = heu(&ff, &gg, depth + 1) {
                let cand = primitive_int(&interpolate(&h, &v, &xi));
                if !cand.is_constant() || cand.is_one() {
                    if let (Some(_), Some(_)) = (f.exact_div(&cand), g.exact_div(&cand)) {
                        return Some(cand.scale(&Rat::from_integer(gc)));
                    }
                }
                for (p, q, pp) in [(&f, &g, &ff), (&g, &f, &gg)] {
                    if let Some(cof) = pp.exact_div(&h) {
                        let cof = primitive_int(&interpolate(&cof, &v, &xi));
                        if let Some(cand) = p.exact_div(&cof) {
                            if q.exact_div(&cand).is_some() {
                                return Some(primitive_int(&cand).scale(&Rat::from_integer(gc)));
                            }
                        }
                    }
                }
            }
        }
        xi = &xi * BigInt::from(73794) * xi.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

fn main_var(a: &Poly, b: &Poly) -> Option<Atom> {
    let top = |p: &Poly| p.terms.iter().filter_map(|(m, _)| m.0.last().map(|x| x.0.clone())).max();
    match (top(a), top(b)) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    }
}

fn content(p: &Poly, v: &Atom) -> Poly {
    let mut g: Option<Poly> = None;
    for (_, c) in p.coeffs_in(v).into_iter().rev() {
        g = Some(match g {
            None => c.monic(),
            Some(prev) => gcd(&prev, &c),
        });
        if g.as_ref().is_some_and(|g| g.is_constant()) {
            return Poly::one();
        }
    }
    g.unwrap_or_else(Poly::one)
}

fn primitive_part(p: &Poly, v: &Atom) -> Poly {
    let c = content(p, v);
    let pp = if c.is_constant() { p.clone() } else { p.exact_div(&c).expect("content divides") };
    pp.monic()
}

/// Pseudo-remainder of `p` by `q` with respect to `v`.
fn prem(p: &Poly, q: &Poly, v: &Atom) -> Poly {
    let dq = q.degree_in(v);
    let lcq = q.coeff_of_power(v, dq);
    let mut r = p.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < dq {
            break;
        }
        let lcr = r.coeff_of_power(v, dr);
        let shift = Monomial::from_factors(alloc::vec![(v.clone(), dr - dq)]);
        let sub = q.mul(&lcr).mul_term(&shift, &super::Rat::from_integer(1.into()));
        r = r.mul(&lcq).sub(&sub);
    }
    r
}

fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let v = main_var(a, b).expect("non-constant polynomials have atoms");
    let (da, db) = (a.degree_in(&v), b.degree_in(&v));
    if da == 0 {
        return gcd(a, &content(b, &v));
    }
    if db == 0 {
        return gcd(&content(a, &v), b);
    }
    let ca = content(a, &v);
    let cb = content(b, &v);
    let c = gcd(&ca, &cb);
    let mut p = primitive_part(a, &v);
    let mut q = primitive_part(b, &v);
    if p.degree_in(&v) < q.degree_in(&v) {
        core::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = prem(&p, &q, &v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&v) == 0 {
            return c;
        }
        p = q;
        q = primitive_part(&r, &v);
    }
    primitive_part(&q, &v).mul(&c).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Poly {
        Poly::atom(Atom::Indep(i))
    }

    #[test]
    fn gcd_of_products() {
        let x = v(0);
        let y = v(1);
        let z = v(2);
        let common = x.mul(&y).add(&z).add(&Poly::one());
        let a = common.mul(&x.sub(&y));
        let b = common.mul(&x.add(&z.pow(2)));
        assert_eq!(poly_gcd(&a, &b), common.monic());
    }

    #[test]
    fn coprime_gives_one() {
        let a = v(0).add(&Poly::one());
        let b = v(0).sub(&Poly::one());
        assert!(poly_gcd(&a, &b).is_one());
    }

    #[test]
    fn cancel_fraction() {
        let x = v(0);
        let num = x.pow(2).sub(&Poly::one());
        let den = x.sub(&Poly::one()).scale(&super::super::Rat::from_integer(2.into()));
        let (n, d) = cancel(&num, &den);
        assert!(d.is_one());
        assert_eq!(n, x.add(&Poly::one()).scale(&super::super::Rat::new(1.into(), 2.into())));
    }

    #[test]
    fn gcd_with_exponentials() {
        let e = Poly::atom(Atom::Exp(Expr::indep(0)));
        let x = v(0);
        let a = e.add(&x).mul(&x);
        let b = e.add(&x).mul(&Poly::one().add(&x));
        assert_eq!(poly_gcd(&a, &b), e.add(&x).monic());
    }
}

//! Ansatz verification and reduction of an equation to fewer variables.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::expr::{poly_gcd, Atom, Expr, FuncApp, Monomial, Poly, Rat, Rule, RuleSet, Symbol};
use crate::invariance::PdeSystem;
use crate::operators::InvolutiveSet;
use crate::{Error, Result};

/// Invariant `ω` with the independent variable that is solved from
/// `ω = const` during reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub name: Arc<str>,
    pub expr: Expr,
    pub solve_for: usize,
}

/// Solved ansatz `u = F(x, φ(ω))` together with the first integral `W(x, u)`
/// satisfying `W = φ(ω)`.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub invariants: Vec<Invariant>,
    pub phi: Arc<str>,
    pub form: Expr,
    pub w: Expr,
}

impl Ansatz {
    /// `φ(ω_1, …)` with the invariants as arguments.
    pub fn phi_of_invariants(&self) -> Expr {
        Expr::func(&self.phi, self.invariants.iter().map(|i| i.expr.clone()).collect())
    }

    /// `φ` applied to the invariant symbols, the variables of the reduced
    /// equation.
    pub fn phi_of_symbols(&self) -> Expr {
        Expr::func(&self.phi, self.invariants.iter().map(|i| Expr::param(&i.name)).collect())
    }
}

/// Checks the rank condition, that each operator annihilates every invariant
/// and `W`, that `∂W/∂u ≠ 0`, and that `u = F` solves `W = φ(ω)`.
pub fn verify_ansatz(set: &InvolutiveSet, a: &Ansatz) -> Result<bool> {
    set.check_rank()?;
    let n = set.ops()[0].n();
    for q in set.ops() {
        for inv in &a.invariants {
            if !q.apply(&inv.expr).is_zero() {
                return Ok(false);
            }
        }
        if !q.apply(&a.w).is_zero() {
            return Ok(false);
        }
    }
    if a.w.partial(&Symbol::dep(0, n)).is_zero() {
        return Ok(false);
    }
    let plugged = RuleSet::new(alloc::vec![Rule::symbol(Symbol::dep(0, n), a.form.clone())])?.apply(&a.w)?;
    Ok(plugged == a.phi_of_invariants())
}

/// Outcome of a reduction: `residual = multiplier · equations[0]` when a
/// single equation results. When explicit variables survive, the residual is
/// split by their powers into several equations and their common factor is
/// reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSystem {
    pub equations: Vec<Expr>,
    pub multiplier: Expr,
    pub common_factor: Option<Expr>,
    /// Independent variables left over after rewriting in the invariants.
    pub leftover: Vec<usize>,
}

impl ReducedSystem {
    /// Some equation reads `c = 0` with a nonzero constant `c`.
    pub fn is_inconsistent(&self) -> bool {
        self.equations.iter().any(|e| e.is_constant() && !e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.equations.is_empty()
    }

    /// The single reduced equation: the only equation, or the common factor
    /// of a split system.
    pub fn reduced_equation(&self) -> Option<&Expr> {
        match self.equations.as_slice() {
            [e] => Some(e),
            _ => self.common_factor.as_ref(),
        }
    }
}

/// Solves `ω = w` for `x_i` when `ω` is affine in `x_i` or a monomial of
/// degree ±1 in it.
fn solve_invariant(inv: &Invariant) -> Result<Expr> {
    let x = Expr::indep(inv.solve_for);
    let s = Symbol::Indep(inv.solve_for);
    let w = Expr::param(&inv.name);
    let om = &inv.expr;
    let d = om.partial(&s);
    if d.is_zero() {
        return Err(Error::Unsupported(format!("invariant `{}` does not depend on its designated variable", inv.name)));
    }
    if !d.depends_on(&s) {
        let b = om - &(&d * &x);
        return (&w - &b).checked_div(&d);
    }
    // ω = c·x^{±1}
    let c = om.checked_div(&x)?;
    if !c.depends_on(&s) {
        return w.checked_div(&c);
    }
    let c = om * &x;
    if !c.depends_on(&s) {
        return c.checked_div(&w);
    }
    Err(Error::Unsupported(format!(
        "invariant `{}` is neither affine nor of degree ±1 in its designated variable",
        inv.name
    )))
}

fn primitive(e: &Expr) -> (Expr, Rat) {
    let p = e.num();
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::one();
    for (_, c) in p.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return (e.clone(), Rat::one());
    }
    let mut k = Rat::new(num, den);
    if p.leading().map_or(false, |(_, c)| c.is_negative()) {
        k = -k;
    }
    (Expr::from_poly_public(p.scale(&k.recip())), k)
}

/// Substitutes the ansatz into the equation and rewrites the residual in the
/// invariants.
pub fn reduce(sys: &PdeSystem, a: &Ansatz) -> Result<ReducedSystem> {
    let eq = sys.equations().first().ok_or_else(|| Error::Context("empty system".into()))?;
    let n = sys.ctx().n();
    let l = eq.expr();
    let mut rules = alloc::vec![Rule::symbol(Symbol::dep(0, n), a.form.clone())];
    for (j, alpha) in l.jets() {
        if !alpha.is_zero() {
            rules.push(Rule::jet(j, alpha.clone(), a.form.total_derivative_multi(&alpha)));
        }
    }
    let mut res = RuleSet::new(rules)?.apply(&l)?;
    res = RuleSet::new(sys.constraints().to_vec())?.apply(&res)?;
    let mut solved = Vec::new();
    for inv in &a.invariants {
        solved.push(Rule::symbol(Symbol::Indep(inv.solve_for), solve_invariant(inv)?));
    }
    let res = crate::expr::subst::replace_rules(&res, solved)?;
    let phi_atoms: BTreeSet<Atom> = res
        .atoms()
        .into_iter()
        .filter(|x| matches!(x, Atom::Func(f) if f.name == a.phi))
        .collect();
    let phi_atoms: Vec<Atom> = phi_atoms.into_iter().collect();
    let designated: Vec<usize> = a.invariants.iter().map(|i| i.solve_for).collect();
    let leftover: Vec<usize> = (0..n).filter(|i| !designated.contains(i) && res.depends_on(&Symbol::Indep(*i))).collect();
    let parts = crate::expr::collect_coefficients(&res, &phi_atoms)?;
    if parts.is_empty() {
        return Ok(ReducedSystem { equations: Vec::new(), multiplier: Expr::one(), common_factor: None, leftover });
    }
    let (key, reference) = parts.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    let _ = key;
    let free = |e: &Expr| leftover.iter().all(|i| !e.depends_on(&Symbol::Indep(*i)));
    let ratios: Vec<(Monomial, Expr)> = parts.iter().map(|(m, c)| (m.clone(), c.checked_div(&reference).unwrap())).collect();
    if ratios.iter().all(|(_, r)| free(r)) {
        let e0 = Expr::sum(ratios.iter().map(|(m, r)| r * &Expr::from_poly_public(Poly::term(m.clone(), Rat::one()))));
        let (e, _) = primitive(&e0.numerator());
        let multiplier = res.checked_div(&e)?;
        return Ok(ReducedSystem { equations: alloc::vec![e], multiplier, common_factor: None, leftover });
    }
    // explicit variables remain: split by their powers
    let vars: Vec<Atom> = leftover.iter().map(|i| Atom::Indep(*i)).collect();
    let split = crate::expr::collect_coefficients(&res.numerator(), &vars)?;
    let mut equations = Vec::new();
    let mut g: Option<Poly> = None;
    for c in split.values().rev() {
        let (e, _) = primitive(c);
        g = Some(match g {
            None => e.num().clone(),
            Some(prev) => poly_gcd(&prev, e.num()),
        });
        if !equations.contains(&e) {
            equations.push(e);
        }
    }
    let common_factor = g
        .map(|p| primitive(&Expr::from_poly_public(p)).0)
        .filter(|e| !e.is_constant());
    Ok(ReducedSystem { equations, multiplier: Expr::one(), common_factor, leftover })
}

/// Whether the explicit candidate `u(x)` satisfies the equation and every
/// invariant surface condition.
pub fn joint_system_check(sys: &PdeSystem, set: &InvolutiveSet, candidate: &Expr) -> Result<bool> {
    let n = sys.ctx().n();
    if candidate.jets().iter().next().is_some() {
        return Err(Error::Context("candidate must be an explicit function of the independent variables".into()));
    }
    let plug = |e: &Expr| -> Result<Expr> {
        let mut rules = alloc::vec![Rule::symbol(Symbol::dep(0, n), candidate.clone())];
        for (j, alpha) in e.jets() {
            if !alpha.is_zero() {
                rules.push(Rule::jet(j, alpha.clone(), candidate.total_derivative_multi(&alpha)));
            }
        }
        RuleSet::new(rules)?.apply(e)
    };
    let constraints = RuleSet::new(sys.constraints().to_vec())?;
    for eq in sys.equations() {
        if !constraints.apply(&plug(&eq.expr())?)?.is_zero() {
            return Ok(false);
        }
    }
    for q in set.ops() {
        if !plug(&q.characteristic(0))?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Underived application of `φ` in the reduced variables.
pub fn phi_application(a: &Ansatz, deriv: Vec<u32>) -> Expr {
    Expr::from_atom(Atom::Func(FuncApp {
        name: a.phi.clone(),
        deriv,
        args: a.invariants.iter().map(|i| Expr::param(&i.name)).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{JetContext, MultiIndex};
    use crate::invariance::SolvedEquation;
    use crate::operators::VectorField;

    fn ctx() -> JetContext {
        JetContext::new(&["t", "x"], &["u"]).unwrap()
    }

    fn dilatation_case() -> (PdeSystem, InvolutiveSet, Ansatz) {
        let c = ctx();
        let (t, x) = (c.x(0), c.x(1));
        let rhs = (Expr::one() - &x * c.jet(0, &[1])) / t.clone();
        let sys = PdeSystem::single(c.clone(), SolvedEquation::new("e", 0, MultiIndex::from_vars(2, &[0]), rhs).unwrap()).unwrap();
        let q = VectorField::new(&c, alloc::vec![t.clone(), x.clone()], alloc::vec![Expr::zero()]).unwrap();
        let om = &x / &t;
        let a = Ansatz {
            invariants: alloc::vec![Invariant { name: "w".into(), expr: om.clone(), solve_for: 1 }],
            phi: "phi".into(),
            form: Expr::func("phi", alloc::vec![om.clone()]),
            w: c.u(0),
        };
        (sys, InvolutiveSet::single(q), a)
    }

    #[test]
    fn inconsistent_reduction() {
        let (sys, set, a) = dilatation_case();
        assert!(verify_ansatz(&set, &a).unwrap());
        let r = reduce(&sys, &a).unwrap();
        assert!(r.is_inconsistent());
        assert_eq!(r.equations, alloc::vec![Expr::one()]);
        // the solved form u_t = (1 − x u_x)/t carries the factor 1/t
        assert_eq!(r.multiplier, -(Expr::one() / Expr::indep(0)));
    }

    #[test]
    fn heat_similarity_reduction() {
        let c = ctx();
        let (t, x) = (c.x(0), c.x(1));
        let sys = PdeSystem::single(c.clone(), SolvedEquation::new("heat", 0, MultiIndex::from_vars(2, &[0]), c.jet(0, &[1, 1])).unwrap()).unwrap();
        let om = &x * &x / &t;
        let a = Ansatz {
            invariants: alloc::vec![Invariant { name: "w".into(), expr: om.clone(), solve_for: 0 }],
            phi: "phi".into(),
            form: Expr::func("phi", alloc::vec![om]),
            w: c.u(0),
        };
        let r = reduce(&sys, &a).unwrap();
        let w = Expr::param("w");
        let p = |k| phi_application(&a, alloc::vec![k]);
        let want = Expr::int(4) * &w * p(2) + (&w + Expr::int(2)) * p(1);
        assert_eq!(r.equations, alloc::vec![want]);
        assert_eq!(r.multiplier, -(&w / (&x * &x)));
    }
}

//! First-order operators on `(x, u)`-space and their prolongations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::expr::{Atom, Expr, JetContext, MultiIndex, RuleSet, Symbol};
use crate::linalg;
use crate::{Error, Result};

/// `Q = Σ ξ^i ∂_{x_i} + Σ η^j ∂_{u^j}` with coefficients in `(x, u)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    xi: Vec<Expr>,
    eta: Vec<Expr>,
}

impl VectorField {
    pub fn new(ctx: &JetContext, xi: Vec<Expr>, eta: Vec<Expr>) -> Result<Self> {
        if xi.len() != ctx.n() || eta.len() != ctx.m() {
            return Err(Error::Context(format!(
                "operator needs {} ξ and {} η coefficients, got {} and {}",
                ctx.n(),
                ctx.m(),
                xi.len(),
                eta.len()
            )));
        }
        for c in xi.iter().chain(&eta) {
            ctx.validate(c)?;
            if c.jet_order() > 0 {
                return Err(Error::Context(format!(
                    "operator coefficient `{}` depends on derivatives",
                    c.display(ctx)
                )));
            }
        }
        Ok(VectorField { xi, eta })
    }

    pub fn zero(ctx: &JetContext) -> Self {
        VectorField { xi: alloc::vec![Expr::zero(); ctx.n()], eta: alloc::vec![Expr::zero(); ctx.m()] }
    }

    /// `∂_{x_i}`.
    pub fn d_indep(ctx: &JetContext, i: usize) -> Self {
        let mut q = VectorField::zero(ctx);
        q.xi[i] = Expr::one();
        q
    }

    /// `∂_{u^j}`.
    pub fn d_dep(ctx: &JetContext, j: usize) -> Self {
        let mut q = VectorField::zero(ctx);
        q.eta[j] = Expr::one();
        q
    }

    pub fn xi(&self) -> &[Expr] {
        &self.xi
    }

    pub fn eta(&self) -> &[Expr] {
        &self.eta
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }

    pub fn m(&self) -> usize {
        self.eta.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients().all(Expr::is_zero)
    }

    /// ξ followed by η.
    pub fn coefficients(&self) -> impl Iterator<Item = &Expr> {
        self.xi.iter().chain(self.eta.iter())
    }

    fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        VectorField { xi: self.xi.iter().map(&f).collect(), eta: self.eta.iter().map(&f).collect() }
    }

    fn try_map(&self, f: impl Fn(&Expr) -> Result<Expr>) -> Result<Self> {
        Ok(VectorField {
            xi: self.xi.iter().map(&f).collect::<Result<_>>()?,
            eta: self.eta.iter().map(&f).collect::<Result<_>>()?,
        })
    }

    pub fn scale(&self, lambda: &Expr) -> Self {
        self.map(|c| c * lambda)
    }

    pub fn add(&self, other: &VectorField) -> Self {
        let zip = |a: &[Expr], b: &[Expr]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        VectorField { xi: zip(&self.xi, &other.xi), eta: zip(&self.eta, &other.eta) }
    }

    pub fn sub(&self, other: &VectorField) -> Self {
        self.add(&other.scale(&-Expr::one()))
    }

    /// Applies substitution rules to every coefficient.
    pub fn substitute(&self, rules: &RuleSet) -> Result<Self> {
        self.try_map(|c| rules.apply(c))
    }

    /// Action as a derivation on functions of `(x, u)`.
    pub fn apply(&self, f: &Expr) -> Expr {
        let n = self.n();
        let mut acc = Expr::zero();
        for (i, c) in self.xi.iter().enumerate() {
            if !c.is_zero() {
                acc = acc + c * &f.partial(&Symbol::Indep(i));
            }
        }
        for (j, c) in self.eta.iter().enumerate() {
            if !c.is_zero() {
                acc = acc + c * &f.partial(&Symbol::dep(j, n));
            }
        }
        acc
    }

    /// `Q u^j = η^j − Σ ξ^i u^j_i`.
    pub fn characteristic(&self, j: usize) -> Expr {
        let n = self.n();
        let mut acc = self.eta[j].clone();
        for (i, c) in self.xi.iter().enumerate() {
            if !c.is_zero() {
                acc = acc - c * &Expr::jet(j, MultiIndex::unit(n, i));
            }
        }
        acc
    }

    pub fn prolong(&self, r: usize) -> ProlongedField {
        prolong(self, r)
    }

    /// Script form using `dx`-style basis symbols, e.g. `t*dx - 1/2*x*u*du`.
    pub fn to_script(&self, ctx: &JetContext) -> String {
        let names = ctx.indep_names().iter().chain(ctx.dep_names());
        let mut out = String::new();
        for (c, name) in self.coefficients().zip(names) {
            if c.is_zero() {
                continue;
            }
            let basis = format!("d{name}");
            let (neg, body) = match c.as_rational() {
                Some(q) if q < num_traits::Zero::zero() => (true, Expr::rat(-q)),
                _ => (false, c.clone()),
            };
            let term = if body.is_one() {
                basis
            } else if body.as_rational().is_some() || body.as_atom().is_some() {
                format!("{}*{basis}", body.dsl(ctx))
            } else {
                format!("({})*{basis}", body.dsl(ctx))
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// `characteristic(Q, j)`.
pub fn characteristic(q: &VectorField, j: usize) -> Expr {
    q.characteristic(j)
}

/// Prolongation of a vector field to order `r`.
#[derive(Clone, Debug)]
pub struct ProlongedField {
    base: VectorField,
    order: usize,
    coeffs: BTreeMap<(usize, MultiIndex), Expr>,
}

/// `η_α = D_α(Q u) + Σ_i ξ^i u_{α+e_i}` for `1 ≤ |α| ≤ r`.
pub fn prolong(q: &VectorField, r: usize) -> ProlongedField {
    let n = q.n();
    let mut coeffs = BTreeMap::new();
    for j in 0..q.m() {
        // D_α(Qu) built incrementally from a parent multi-index
        let mut dq: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
        dq.insert(MultiIndex::zero(n), q.characteristic(j));
        for alpha in MultiIndex::all_up_to(n, r) {
            if alpha.is_zero() {
                continue;
            }
            let i = alpha.vars()[alpha.order() - 1];
            let parent = alpha.decremented(i).unwrap();
            let d = dq[&parent].total_derivative(i);
            let mut eta = d.clone();
            for (k, c) in q.xi.iter().enumerate() {
                if !c.is_zero() {
                    eta = eta + c * &Expr::jet(j, alpha.incremented(k));
                }
            }
            dq.insert(alpha.clone(), d);
            coeffs.insert((j, alpha), eta);
        }
    }
    ProlongedField { base: q.clone(), order: r, coeffs }
}

impl ProlongedField {
    pub fn base(&self) -> &VectorField {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `η_α` for dependent variable `j`; `α = 0` gives `η^j`.
    pub fn coefficient(&self, j: usize, alpha: &MultiIndex) -> Option<&Expr> {
        if alpha.is_zero() {
            return self.base.eta.get(j);
        }
        self.coeffs.get(&(j, alpha.clone()))
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&(usize, MultiIndex), &Expr)> {
        self.coeffs.iter()
    }

    /// Recomputes every stored coefficient from the defining formula.
    pub fn check(&self) -> bool {
        let n = self.base.n();
        self.coeffs.iter().all(|((j, alpha), eta)| {
            let mut want = self.base.characteristic(*j).total_derivative_multi(alpha);
            for (k, c) in self.base.xi.iter().enumerate() {
                want = want + c * &Expr::jet(*j, alpha.incremented(k));
            }
            debug_assert_eq!(alpha.len(), n);
            (&want - eta).is_zero()
        })
    }

    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        apply_prolonged(self, e)
    }
}

/// `pr Q e = Σ ξ^i ∂_{x_i} e + Σ η^j ∂_{u^j} e + Σ η_α ∂_{u_α} e`.
pub fn apply_prolonged(p: &ProlongedField, e: &Expr) -> Result<Expr> {
    let need = e.jet_order();
    if need > p.order {
        return Err(Error::OrderMismatch { have: p.order, need });
    }
    let mut acc = Expr::zero();
    for (i, c) in p.base.xi.iter().enumerate() {
        if !c.is_zero() {
            acc = acc + c * &e.partial(&Symbol::Indep(i));
        }
    }
    for (j, alpha) in e.jets() {
        let c = p.coefficient(j, &alpha).expect("order checked");
        if !c.is_zero() {
            acc = acc + c * &e.partial(&Symbol::Jet(j, alpha));
        }
    }
    Ok(acc)
}

/// `pr Q L − Σ_α (∂_{u_α} L) D_α(Q u) − Σ_i ξ^i D_i L`; zero for every `L`, `Q`.
pub fn evolutionary_identity_residual(l: &Expr, q: &VectorField) -> Expr {
    let p = prolong(q, l.jet_order());
    let mut res = apply_prolonged(&p, l).expect("prolonged to the order of L");
    for (j, alpha) in l.jets() {
        let d = l.partial(&Symbol::Jet(j, alpha.clone()));
        res = res - d * q.characteristic(j).total_derivative_multi(&alpha);
    }
    for (i, c) in q.xi.iter().enumerate() {
        if !c.is_zero() {
            res = res - c * &l.total_derivative(i);
        }
    }
    res
}

/// `[Q1, Q2] = Q1 Q2 − Q2 Q1` as a first-order operator.
pub fn lie_bracket(q1: &VectorField, q2: &VectorField) -> VectorField {
    let comp = |a: &Expr, b: &Expr| q1.apply(b) - q2.apply(a);
    VectorField {
        xi: q1.xi.iter().zip(&q2.xi).map(|(a, b)| comp(a, b)).collect(),
        eta: q1.eta.iter().zip(&q2.eta).map(|(a, b)| comp(a, b)).collect(),
    }
}

/// Structure functions `f[k][l][p]` with `[Q^k, Q^l] = Σ_p f^{klp} Q^p`.
pub type StructureFunctions = Vec<Vec<Vec<Expr>>>;

/// Checks `[Q^k, Q^l] = Σ_p f^{klp} Q^p` for all pairs with the given
/// structure functions.
pub fn verify_involutive(ops: &[VectorField], f: &StructureFunctions) -> bool {
    let s = ops.len();
    if f.len() != s || f.iter().any(|r| r.len() != s || r.iter().any(|c| c.len() != s)) {
        return false;
    }
    for k in 0..s {
        for l in 0..s {
            let mut rest = lie_bracket(&ops[k], &ops[l]);
            for p in 0..s {
                rest = rest.sub(&ops[p].scale(&f[k][l][p]));
            }
            if !rest.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Expresses `v` as `Σ c_p ops[p]` with coefficients in `(x, u)`; `None`
/// when `v` is outside the span.
pub fn span_coefficients(ops: &[VectorField], v: &VectorField) -> Result<Option<Vec<Expr>>> {
    let unknowns: Vec<Atom> = (0..ops.len()).map(|p| Atom::Param(Arc::from(format!("#c{p}").as_str()))).collect();
    let mut eqs = Vec::new();
    for (row, target) in v.coefficients().enumerate() {
        let mut e = -target.clone();
        for (p, q) in ops.iter().enumerate() {
            let c = q.coefficients().nth(row).unwrap();
            if !c.is_zero() {
                e = e + c * &Expr::from_atom(unknowns[p].clone());
            }
        }
        eqs.push(e);
    }
    linalg::solve_linear_equations(&eqs, &unknowns)
}

/// Finds structure functions when the operators are involutive.
pub fn structure_functions(ops: &[VectorField]) -> Result<Option<StructureFunctions>> {
    let s = ops.len();
    let mut f = alloc::vec![alloc::vec![alloc::vec![Expr::zero(); s]; s]; s];
    for k in 0..s {
        for l in k + 1..s {
            let b = lie_bracket(&ops[k], &ops[l]);
            let Some(c) = span_coefficients(ops, &b)? else {
                return Ok(None);
            };
            for p in 0..s {
                f[l][k][p] = -c[p].clone();
                f[k][l][p] = c[p].clone();
            }
        }
    }
    Ok(Some(f))
}

/// Involutive set of operators with its structure functions.
#[derive(Clone, Debug)]
pub struct InvolutiveSet {
    ops: Vec<VectorField>,
    structure: StructureFunctions,
}

impl InvolutiveSet {
    /// Computes structure functions; fails if some bracket leaves the span.
    pub fn new(ops: Vec<VectorField>) -> Result<Self> {
        match structure_functions(&ops)? {
            Some(structure) => Ok(InvolutiveSet { ops, structure }),
            None => Err(Error::NotInvolutive("a commutator is not a combination of the operators".into())),
        }
    }

    pub fn with_structure(ops: Vec<VectorField>, structure: StructureFunctions) -> Result<Self> {
        if verify_involutive(&ops, &structure) {
            Ok(InvolutiveSet { ops, structure })
        } else {
            Err(Error::NotInvolutive("supplied structure functions do not match the commutators".into()))
        }
    }

    pub fn single(q: VectorField) -> Self {
        let z = alloc::vec![alloc::vec![alloc::vec![Expr::zero()]]];
        InvolutiveSet { ops: alloc::vec![q], structure: z }
    }

    pub fn ops(&self) -> &[VectorField] {
        &self.ops
    }

    pub fn structure(&self) -> &StructureFunctions {
        &self.structure
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `rank ‖ξ^{ki}‖ = rank ‖ξ^{ki}, η^{kj}‖ = s`.
    pub fn check_rank(&self) -> Result<()> {
        let s = self.ops.len();
        let xi: Vec<Vec<Expr>> = self.ops.iter().map(|q| q.xi.clone()).collect();
        let full: Vec<Vec<Expr>> = self.ops.iter().map(|q| q.coefficients().cloned().collect()).collect();
        let (r1, r2) = (linalg::rank(&xi), linalg::rank(&full));
        if r1 != s || r2 != s {
            return Err(Error::Rank(format!("rank ‖ξ‖ = {r1}, rank ‖ξ, η‖ = {r2}, expected {s}")));
        }
        Ok(())
    }
}

/// `{Σ_l λ_{kl} Q^l}` for an invertible matrix `λ` of functions of `(x, u)`.
pub fn apply_equivalence(set: &InvolutiveSet, lambda: &[Vec<Expr>]) -> Result<InvolutiveSet> {
    let s = set.len();
    if lambda.len() != s || lambda.iter().any(|r| r.len() != s) {
        return Err(Error::Context(format!("equivalence matrix must be {s}×{s}")));
    }
    for c in lambda.iter().flatten() {
        if c.jet_order() > 0 {
            return Err(Error::Context("equivalence coefficients must not depend on derivatives".into()));
        }
    }
    if linalg::det(lambda)?.is_zero() {
        return Err(Error::Singular("det ‖λ‖ vanishes".into()));
    }
    let ops: Vec<VectorField> = lambda
        .iter()
        .map(|row| {
            row.iter()
                .zip(&set.ops)
                .fold(VectorField { xi: alloc::vec![Expr::zero(); set.ops[0].n()], eta: alloc::vec![Expr::zero(); set.ops[0].m()] }, |acc, (c, q)| {
                    acc.add(&q.scale(c))
                })
        })
        .collect();
    InvolutiveSet::new(ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heat() -> JetContext {
        JetContext::new(&["t", "x"], &["u"]).unwrap()
    }

    fn galilei(c: &JetContext) -> VectorField {
        VectorField::new(c, alloc::vec![Expr::zero(), c.x(0)], alloc::vec![Expr::rational(-1, 2) * c.x(1) * c.u(0)]).unwrap()
    }

    #[test]
    fn characteristics() {
        let c = heat();
        assert_eq!(VectorField::d_indep(&c, 0).characteristic(0), -c.jet(0, &[0]));
        let want = Expr::rational(-1, 2) * c.x(1) * c.u(0) - c.x(0) * c.jet(0, &[1]);
        assert_eq!(galilei(&c).characteristic(0), want);
    }

    #[test]
    fn galilei_prolongation() {
        let c = heat();
        let p = galilei(&c).prolong(2);
        let half = Expr::rational(1, 2);
        let eta_t = p.coefficient(0, &MultiIndex::from_vars(2, &[0])).unwrap();
        assert_eq!(*eta_t, -&half * c.x(1) * c.jet(0, &[0]) - c.jet(0, &[1]));
        let eta_xx = p.coefficient(0, &MultiIndex::from_vars(2, &[1, 1])).unwrap();
        assert_eq!(*eta_xx, -c.jet(0, &[1]) - half * c.x(1) * c.jet(0, &[1, 1]));
        assert!(p.check());
        let heat_l = c.jet(0, &[0]) - c.jet(0, &[1, 1]);
        assert_eq!(p.apply(&heat_l).unwrap(), Expr::rational(-1, 2) * c.x(1) * heat_l);
    }

    #[test]
    fn order_mismatch() {
        let c = heat();
        let p = VectorField::d_indep(&c, 0).prolong(1);
        assert!(matches!(p.apply(&c.jet(0, &[1, 1])), Err(Error::OrderMismatch { have: 1, need: 2 })));
    }

    #[test]
    fn brackets() {
        let c = heat();
        let dx = VectorField::d_indep(&c, 1);
        let b = lie_bracket(&dx, &galilei(&c));
        assert_eq!(b, VectorField::new(&c, alloc::vec![Expr::zero(), Expr::zero()], alloc::vec![Expr::rational(-1, 2) * c.u(0)]).unwrap());
        assert!(lie_bracket(&dx, &dx).is_zero());
        let z = alloc::vec![alloc::vec![alloc::vec![Expr::zero(); 2]; 2]; 2];
        assert!(!verify_involutive(&[dx.clone(), galilei(&c)], &z));
        assert!(verify_involutive(&[VectorField::d_indep(&c, 0), dx], &z));
    }

    #[test]
    fn equivalence_requires_invertible_matrix() {
        let c = heat();
        let set = InvolutiveSet::new(alloc::vec![VectorField::d_indep(&c, 0), VectorField::d_indep(&c, 1)]).unwrap();
        let lam = alloc::vec![alloc::vec![Expr::one(), c.x(0)], alloc::vec![Expr::zero(), Expr::one()]];
        let out = apply_equivalence(&set, &lam).unwrap();
        assert_eq!(out.ops()[0], VectorField::new(&c, alloc::vec![Expr::one(), c.x(0)], alloc::vec![Expr::zero()]).unwrap());
        let bad = alloc::vec![alloc::vec![Expr::one(), c.x(0)], alloc::vec![Expr::one(), c.x(0)]];
        assert!(matches!(apply_equivalence(&set, &bad), Err(Error::Singular(_))));
    }

    #[test]
    fn script_form() {
        let c = heat();
        assert_eq!(galilei(&c).to_script(&c), "t*dx + (-1/2*x*u)*du");
    }
}

//! Invariance residuals restricted to solution manifolds, and determining
//! systems of operator templates.
//!
//! Three restrictions are available for an equation `L = 0` of order `r`:
//!
//! * `K`: the equation and its differential consequences (Lie symmetry),
//! * `N`: the invariant surface conditions `Q^l u = 0` and their consequences
//!   up to order `r`, together with `L = 0` itself (Q-conditional symmetry),
//! * `M`: the equation, the surface condition and all their consequences.
//!   Every operator passes this test, which is why it is of no use for
//!   finding symmetries.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::expr::{Atom, Expr, FuncApp, JetContext, Monomial, MultiIndex, Rat, Rule, RuleSet, Symbol, Target};
use crate::linalg;
use crate::operators::{lie_bracket, InvolutiveSet, VectorField};
use crate::{Error, Result};

/// One equation `u^j_α = rhs` in solved form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedEquation {
    name: String,
    dep: usize,
    lead: MultiIndex,
    rhs: Expr,
}

impl SolvedEquation {
    pub fn new(name: &str, dep: usize, lead: MultiIndex, rhs: Expr) -> Result<Self> {
        if let Some((_, b)) = rhs.jets().into_iter().find(|(j, b)| *j == dep && b.dominates(&lead)) {
            return Err(Error::NotSolved(format!(
                "right-hand side of `{name}` contains the leading derivative or a derivative of it ({:?})",
                b.counts()
            )));
        }
        Ok(SolvedEquation { name: name.to_string(), dep, lead, rhs })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dep(&self) -> usize {
        self.dep
    }

    pub fn lead(&self) -> &MultiIndex {
        &self.lead
    }

    pub fn lead_expr(&self) -> Expr {
        Expr::jet(self.dep, self.lead.clone())
    }

    pub fn rhs(&self) -> &Expr {
        &self.rhs
    }

    /// `L = u_α − rhs`.
    pub fn expr(&self) -> Expr {
        self.lead_expr() - &self.rhs
    }

    pub fn order(&self) -> usize {
        self.lead.order().max(self.rhs.jet_order())
    }

    pub fn rule(&self, cap: Option<usize>) -> Result<Rule> {
        let r = Rule::jet(self.dep, self.lead.clone(), self.rhs.clone());
        match cap {
            Some(_) => r.with_closure(cap),
            None => Ok(r),
        }
    }
}

/// System of equations in solved form over a jet context, with optional
/// constraints on unknown functions (for example `f_t = f_xx`).
#[derive(Clone, Debug)]
pub struct PdeSystem {
    ctx: JetContext,
    equations: Vec<SolvedEquation>,
    constraints: Vec<Rule>,
}

impl PdeSystem {
    pub fn new(ctx: JetContext, equations: Vec<SolvedEquation>) -> Result<Self> {
        if equations.is_empty() {
            return Err(Error::Context("a system needs at least one equation".into()));
        }
        for (k, e) in equations.iter().enumerate() {
            ctx.validate(&e.rhs)?;
            if e.dep >= ctx.m() || e.lead.len() != ctx.n() {
                return Err(Error::Context(format!("equation `{}` does not fit the context", e.name)));
            }
            if equations[k + 1..].iter().any(|o| o.dep == e.dep && o.lead == e.lead) {
                return Err(Error::NotSolved(format!("two equations share the leading derivative of `{}`", e.name)));
            }
        }
        Ok(PdeSystem { ctx, equations, constraints: Vec::new() })
    }

    pub fn single(ctx: JetContext, eq: SolvedEquation) -> Result<Self> {
        PdeSystem::new(ctx, alloc::vec![eq])
    }

    /// Adds a rule for unknown functions, e.g. `f_t → f_xx` with closure.
    pub fn with_constraint(mut self, rule: Rule) -> Result<Self> {
        self.constraints.push(rule);
        RuleSet::new(self.constraints.clone())?;
        Ok(self)
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn equations(&self) -> &[SolvedEquation] {
        &self.equations
    }

    pub fn constraints(&self) -> &[Rule] {
        &self.constraints
    }

    pub fn order(&self) -> usize {
        self.equations.iter().map(SolvedEquation::order).max().unwrap_or(0)
    }

    /// Default consequence-closure cap, `2r`.
    pub fn default_cap(&self) -> usize {
        2 * self.order().max(1)
    }

    fn k_rules(&self, cap: usize) -> Result<RuleSet> {
        let mut rules = Vec::new();
        for e in &self.equations {
            rules.push(e.rule(Some(cap))?);
        }
        rules.extend(self.constraints.iter().cloned());
        RuleSet::new(rules)
    }

    fn single_equation(&self) -> Result<&SolvedEquation> {
        if self.equations.len() != 1 || self.ctx.m() != 1 {
            return Err(Error::Unsupported("conditional invariance is implemented for one equation in one unknown".into()));
        }
        Ok(&self.equations[0])
    }
}

/// Residuals of the Lie invariance condition on `K`, one per equation.
pub fn lie_residual(sys: &PdeSystem, q: &VectorField, cap: Option<usize>) -> Result<Vec<Expr>> {
    let cap = cap.unwrap_or_else(|| sys.default_cap());
    let rules = sys.k_rules(cap)?;
    let mut out = Vec::new();
    for e in &sys.equations {
        let l = e.expr();
        let raw = q.prolong(l.jet_order()).apply(&l)?;
        out.push(rules.apply(&raw)?);
    }
    Ok(out)
}

pub fn is_lie_symmetry(sys: &PdeSystem, q: &VectorField) -> Result<bool> {
    Ok(lie_residual(sys, q, None)?.iter().all(Expr::is_zero))
}

/// Solves `Q^l u = 0` for distinct first derivatives, choosing pivots among
/// the earliest independent variables.
pub fn surface_rules(set: &InvolutiveSet, cap: usize) -> Result<Vec<Rule>> {
    let n = set.ops()[0].n();
    if set.ops()[0].m() != 1 {
        return Err(Error::Unsupported("surface conditions are implemented for one dependent variable".into()));
    }
    let rows: Vec<Vec<Expr>> = set.ops().iter().map(|q| q.coefficients().cloned().collect()).collect();
    let (m, piv) = linalg::rref(&rows);
    if piv.len() != set.len() || piv.iter().any(|&p| p >= n) {
        return Err(Error::DegenerateSurface(format!("rank of ‖ξ‖ is below {}", set.len())));
    }
    let mut rules = Vec::new();
    for (row, &p) in m.iter().zip(&piv) {
        let mut rhs = row[n].clone();
        for i in 0..n {
            if i != p && !piv.contains(&i) && !row[i].is_zero() {
                rhs = rhs - &row[i] * &Expr::jet(0, MultiIndex::unit(n, i));
            }
        }
        rules.push(Rule::jet(0, MultiIndex::unit(n, p), rhs).with_closure(Some(cap.max(1)))?);
    }
    Ok(rules)
}

/// Rule `u_α → rhs`, closed under differentiation up to `cap` unless the
/// right-hand side contains a derivative of `u_α` itself.
fn solved_rule(j: usize, alpha: MultiIndex, rhs: Expr, cap: usize) -> Result<Rule> {
    let self_referential = rhs.jets().iter().any(|(k, b)| *k == j && b.dominates(&alpha));
    let rule = Rule::jet(j, alpha, rhs);
    if self_referential {
        Ok(rule)
    } else {
        rule.with_closure(Some(cap))
    }
}

/// Highest-ranked jet appearing linearly in `e`, with `e = c·v + rest`;
/// returns `(v, −rest/c)`.
pub fn solve_for_linear_jet(e: &Expr) -> Option<((usize, MultiIndex), Expr)> {
    let mut jets: Vec<(usize, MultiIndex)> = e.jets().into_iter().collect();
    jets.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    for (j, alpha) in jets {
        let a = Atom::Jet(j, alpha.clone());
        if e.den().contains_atom(&a) || e.num().degree_in(&a) != 1 {
            continue;
        }
        let nested = e.num().atoms().iter().any(|b| *b != a && Expr::from_atom(b.clone()).contains_atom(&a));
        if nested {
            continue;
        }
        let coeffs = e.num().coeffs_in(&a);
        let c = Expr::from_parts(coeffs[&1].clone(), Poly1::one()).ok()?;
        let rest = coeffs.get(&0).cloned().map(|p| Expr::from_parts(p, Poly1::one()).unwrap()).unwrap_or_else(Expr::zero);
        if c.is_zero() {
            continue;
        }
        return Some(((j, alpha), (-rest).checked_div(&c).ok()?));
    }
    None
}

use crate::expr::Poly as Poly1;

/// Rules restricting onto `L = 0` together with `N`.
struct QRestriction {
    combined: RuleSet,
    /// `L`-first variant when the leading derivative survives `N`.
    alternative: Option<(RuleSet, RuleSet)>,
}

fn q_restriction(sys: &PdeSystem, set: &InvolutiveSet, n_cap: usize) -> Result<QRestriction> {
    let eq = sys.single_equation()?;
    let r = sys.order();
    let n_rules = surface_rules(set, n_cap)?;
    let n_set = RuleSet::new(n_rules.clone())?;
    let lead = eq.lead_expr();
    let reduced_lead = n_set.apply(&lead)?;
    let mut rules = n_rules.clone();
    let mut alternative = None;
    if reduced_lead == lead {
        let rhs = n_set.apply(eq.rhs())?;
        rules.push(Rule::jet(eq.dep(), eq.lead().clone(), rhs).with_closure(Some(r))?);
        let mut l_only = alloc::vec![eq.rule(Some(r))?];
        l_only.extend(sys.constraints.iter().cloned());
        let mut n_only = n_rules;
        n_only.extend(sys.constraints.iter().cloned());
        alternative = Some((RuleSet::new(l_only)?, RuleSet::new(n_only)?));
    } else {
        let l = n_set.apply(&eq.expr())?;
        if !l.is_zero() {
            let Some(((j, alpha), rhs)) = solve_for_linear_jet(&l) else {
                return Err(Error::NotSolved(format!(
                    "equation `{}` restricted by the surface conditions has no derivative appearing linearly",
                    eq.name()
                )));
            };
            rules.push(solved_rule(j, alpha, rhs, r)?);
        }
    }
    rules.extend(sys.constraints.iter().cloned());
    Ok(QRestriction { combined: RuleSet::new(rules)?, alternative })
}

/// Residuals of the Q-conditional invariance condition (one per operator),
/// restricted on `L = 0` and on consequences of the surface conditions of
/// order at most `r`.
pub fn qcond_residual(sys: &PdeSystem, set: &InvolutiveSet) -> Result<Vec<Expr>> {
    let eq = sys.single_equation()?;
    let r = sys.order();
    let res = q_restriction(sys, set, r)?;
    let l = eq.expr();
    let mut out = Vec::new();
    for q in set.ops() {
        let raw = q.prolong(r).apply(&l)?;
        let got = res.combined.apply(&raw)?;
        if let Some((l_only, n_only)) = &res.alternative {
            let alt = n_only.apply(&l_only.apply(&raw)?)?;
            if alt != got {
                return Err(Error::EliminationOrder(format!(
                    "surface-first and equation-first restrictions differ by {:?}",
                    &alt - &got
                )));
            }
        }
        out.push(got);
    }
    Ok(out)
}

pub fn is_qcond_symmetry(sys: &PdeSystem, set: &InvolutiveSet) -> Result<bool> {
    Ok(qcond_residual(sys, set)?.iter().all(Expr::is_zero))
}

/// Residual of the invariance condition restricted on the manifold of the
/// equation, the surface condition `Q u = 0` and all their differential
/// consequences.
pub fn m_residual(sys: &PdeSystem, q: &VectorField) -> Result<Expr> {
    let eq = sys.single_equation()?;
    let r = sys.order();
    let cap = r + 1;
    let set = InvolutiveSet::single(q.clone());
    let mut rules = surface_rules(&set, cap)?;
    let Target::Symbol(Symbol::Jet(_, k_index)) = &rules[0].target else { unreachable!() };
    let k = k_index.vars()[0];
    let n_set = RuleSet::new(rules.clone())?;
    let l = n_set.apply(&eq.expr())?;
    if !l.is_zero() {
        let Some(((j, alpha), rhs)) = solve_for_linear_jet(&l) else {
            return Err(Error::NotSolved(format!("equation `{}` has no derivative appearing linearly", eq.name())));
        };
        rules.push(solved_rule(j, alpha, rhs, cap)?);
    }
    rules.extend(sys.constraints.iter().cloned());
    let mut set_rules = RuleSet::new(rules.clone())?;
    let l_full = eq.expr();
    let mut res = set_rules.apply(&q.prolong(r).apply(&l_full)?)?;
    // integrability conditions D_k L on the surface join the manifold
    for _ in 0..3 {
        if res.is_zero() {
            break;
        }
        let c = set_rules.apply(&l_full.total_derivative(k))?;
        if c.is_zero() {
            break;
        }
        let quotient = res.checked_div(&c)?;
        if quotient.jet_order() == 0 && quotient.jets().is_empty() {
            return Ok(Expr::zero());
        }
        let Some(((j, alpha), rhs)) = solve_for_linear_jet(&c) else { break };
        rules.push(Rule::jet(j, alpha, rhs));
        set_rules = match RuleSet::new(rules.clone()) {
            Ok(s) => s,
            Err(_) => break,
        };
        res = set_rules.apply(&res)?;
    }
    Ok(res)
}

/// Determining equations of an operator template.
#[derive(Clone, Debug)]
pub struct DeterminingSystem {
    ctx: JetContext,
    template: VectorField,
    unknowns: Vec<FuncApp>,
    parametric: Vec<Atom>,
    equations: Vec<Expr>,
}

impl DeterminingSystem {
    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn template(&self) -> &VectorField {
        &self.template
    }

    /// Unknown functions (underived) with their signatures.
    pub fn unknowns(&self) -> &[FuncApp] {
        &self.unknowns
    }

    pub fn parametric(&self) -> &[Atom] {
        &self.parametric
    }

    pub fn equations(&self) -> &[Expr] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Common argument list of the unknown functions.
    pub fn signature(&self) -> Result<Vec<Symbol>> {
        let mut sig: Option<Vec<Symbol>> = None;
        for f in &self.unknowns {
            let s: Option<Vec<Symbol>> = f.args.iter().map(Expr::as_symbol).collect();
            let Some(s) = s else {
                return Err(Error::Unsupported(format!("`{}` has non-symbol arguments", f.name)));
            };
            match &sig {
                None => sig = Some(s),
                Some(prev) if *prev == s => {}
                Some(_) => return Err(Error::Unsupported("unknown functions have different signatures".into())),
            }
        }
        sig.ok_or_else(|| Error::Context("template has no unknown functions".into()))
    }

    /// Jet context in which the unknowns are dependent variables over their
    /// common signature, e.g. `(t, x; g1, g2, g3)`.
    pub fn unknown_context(&self) -> Result<JetContext> {
        let sig = self.signature()?;
        let names: Vec<String> = sig.iter().map(|s| alloc::format!("{}", s.expr().display(&self.ctx))).collect();
        let deps: Vec<String> = self.unknowns.iter().map(|f| f.name.to_string()).collect();
        let all: Vec<String> = names.into_iter().chain(deps).collect();
        let n = sig.len();
        JetContext::new(&all[..n], &all[n..])
    }

    /// Rewrites an expression in the unknowns as an expression over
    /// [`Self::unknown_context`].
    pub fn to_unknown_context(&self, e: &Expr) -> Result<Expr> {
        let sig = self.signature()?;
        let sig_atoms: Vec<Atom> = sig.iter().map(Symbol::atom).collect();
        let names: Vec<Arc<str>> = self.unknowns.iter().map(|f| f.name.clone()).collect();
        let n = sig.len();
        crate::expr::map_atoms(e, &mut |a: &Atom| -> Result<Option<Expr>> {
            if let Some(k) = sig_atoms.iter().position(|s| s == a) {
                return Ok(Some(Expr::indep(k)));
            }
            match a {
                Atom::Func(f) => match names.iter().position(|nm| *nm == f.name) {
                    Some(j) => {
                        if f.args.iter().map(Expr::as_symbol).collect::<Option<Vec<_>>>() != Some(sig.clone()) {
                            return Err(Error::Unsupported(format!("`{}` applied to other arguments", f.name)));
                        }
                        Ok(Some(Expr::jet(j, MultiIndex::from_counts(f.deriv.clone()))))
                    }
                    None => Ok(None),
                },
                Atom::Jet(..) | Atom::Indep(_) => Err(Error::Context(format!(
                    "symbol {a:?} is not among the {n} signature variables"
                ))),
                _ => Ok(None),
            }
        })
    }

    /// Solves each equation for a leading derivative and returns the system
    /// over [`Self::unknown_context`]. Among derivatives with a constant
    /// coefficient, the lexicographically greatest multi-index is chosen, so
    /// derivatives in the first signature variable win.
    pub fn to_pde_system(&self) -> Result<PdeSystem> {
        let ctx = self.unknown_context()?;
        let mut eqs = Vec::new();
        let mut used = BTreeSet::new();
        for (k, e) in self.equations.iter().enumerate() {
            let e = self.to_unknown_context(e)?;
            let mut cands: Vec<(usize, MultiIndex)> = e
                .jets()
                .into_iter()
                .filter(|(j, a)| {
                    let at = Atom::Jet(*j, a.clone());
                    !e.den().contains_atom(&at)
                        && e.num().degree_in(&at) == 1
                        && e.num().coeffs_in(&at)[&1].is_constant()
                        && !used.contains(&(*j, a.clone()))
                })
                .collect();
            cands.sort_by(|a, b| b.1.counts().cmp(a.1.counts()).then(a.0.cmp(&b.0)));
            let Some((j, alpha)) = cands.into_iter().next() else {
                return Err(Error::NotSolved(format!("determining equation #{k} has no derivative with constant coefficient")));
            };
            let at = Atom::Jet(j, alpha.clone());
            let coeffs = e.num().coeffs_in(&at);
            let c = coeffs[&1].as_constant().unwrap();
            let rest = Expr::from_parts(coeffs.get(&0).cloned().unwrap_or_else(Poly1::zero), Poly1::one())?;
            let rhs = -rest * Expr::rat(c.recip());
            used.insert((j, alpha.clone()));
            let name = format!("{}#{k}", ctx.jet_name(j, &alpha));
            eqs.push(SolvedEquation::new(&name, j, alpha, rhs)?);
        }
        PdeSystem::new(ctx, eqs)
    }
}

/// Unknown functions (underived) occurring in the template coefficients.
fn template_unknowns(t: &VectorField) -> Vec<FuncApp> {
    let mut seen: BTreeMap<Arc<str>, FuncApp> = BTreeMap::new();
    for c in t.coefficients() {
        for f in c.funcs() {
            seen.entry(f.name.clone()).or_insert_with(|| FuncApp { name: f.name.clone(), deriv: alloc::vec![0; f.args.len()], args: f.args.clone() });
        }
    }
    seen.into_values().collect()
}

fn split_residuals(ctx: &JetContext, template: &VectorField, residuals: &[Expr]) -> Result<DeterminingSystem> {
    let unknowns = template_unknowns(template);
    let n = ctx.n();
    let mut parametric: BTreeSet<Atom> = BTreeSet::new();
    for r in residuals {
        for (j, a) in r.jets() {
            parametric.insert(Atom::Jet(j, a));
        }
    }
    for j in 0..ctx.m() {
        let u = Atom::Jet(j, MultiIndex::zero(n));
        let in_args = unknowns.iter().any(|f| f.args.iter().any(|a| a.contains_atom(&u)));
        let nested = residuals.iter().any(|r| r.funcs().iter().any(|f| f.args.iter().any(|a| a.contains_atom(&u))));
        if in_args || nested {
            parametric.remove(&u);
        }
    }
    let parametric: Vec<Atom> = parametric.into_iter().collect();
    let mut equations = Vec::new();
    for r in residuals {
        let parts = crate::expr::collect_coefficients(r, &parametric)?;
        let mut keyed: Vec<(Monomial, Expr)> = parts.into_iter().collect();
        keyed.reverse();
        for (_, c) in keyed {
            let e = c.numerator();
            if !e.is_zero() && !equations.contains(&e) {
                equations.push(e);
            }
        }
    }
    Ok(DeterminingSystem { ctx: ctx.clone(), template: template.clone(), unknowns, parametric, equations })
}

/// Q-conditional determining system of a template with unknown functions.
pub fn qcond_determining_system(sys: &PdeSystem, template: &VectorField) -> Result<DeterminingSystem> {
    let res = qcond_residual(sys, &InvolutiveSet::single(template.clone()))?;
    split_residuals(&sys.ctx, template, &res)
}

/// Lie determining system of a template (restriction on `K` only).
pub fn lie_determining_system(sys: &PdeSystem, template: &VectorField) -> Result<DeterminingSystem> {
    let res = lie_residual(sys, template, None)?;
    split_residuals(&sys.ctx, template, &res)
}

/// Whether two expressions agree up to a nonzero rational factor.
pub fn equal_up_to_factor(a: &Expr, b: &Expr) -> Option<Rat> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    a.checked_div(b).ok()?.as_rational()
}

/// Commutator table of an operator list with constant structure constants.
#[derive(Clone, Debug)]
pub struct AlgebraClosure {
    pub closes: bool,
    /// `table[k][l]` holds the constants `c_p` with `[Q_k, Q_l] = Σ c_p Q_p`.
    pub table: Vec<Vec<Option<Vec<Rat>>>>,
}

/// Checks that all pairwise brackets are constant-coefficient combinations
/// of the operators.
pub fn check_algebra_closure(ops: &[VectorField]) -> Result<AlgebraClosure> {
    let s = ops.len();
    let mut table = alloc::vec![alloc::vec![None; s]; s];
    let mut closes = true;
    for k in 0..s {
        for l in 0..s {
            if l < k {
                let neg: Option<Vec<Rat>> = table[l][k].as_ref().map(|v: &Vec<Rat>| v.iter().map(|c| -c.clone()).collect());
                table[k][l] = neg;
                continue;
            }
            let b = lie_bracket(&ops[k], &ops[l]);
            let c = constant_span(ops, &b)?;
            closes &= c.is_some();
            table[k][l] = c;
        }
    }
    Ok(AlgebraClosure { closes, table })
}

/// Constants `c_p` with `v = Σ c_p ops[p]`, if they exist.
pub fn constant_span(ops: &[VectorField], v: &VectorField) -> Result<Option<Vec<Rat>>> {
    let cs: Vec<Atom> = (0..ops.len()).map(|p| Atom::Param(Arc::from(format!("#k{p}").as_str()))).collect();
    let mut eqs: Vec<Expr> = Vec::new();
    for (row, target) in v.coefficients().enumerate() {
        let mut e = -target.clone();
        for (p, q) in ops.iter().enumerate() {
            let c = q.coefficients().nth(row).unwrap();
            if !c.is_zero() {
                e = e + c * &Expr::from_atom(cs[p].clone());
            }
        }
        // split the numerator by every monomial in the non-constant atoms
        let mut parts: BTreeMap<Monomial, Expr> = BTreeMap::new();
        for (m, coef) in e.num().terms() {
            let mut key = Vec::new();
            let mut lin = Expr::rat(coef.clone());
            for (a, k) in m.factors() {
                if cs.contains(a) {
                    lin = lin * Expr::from_atom(a.clone()).pow(*k as i32);
                } else {
                    key.push((a.clone(), *k));
                }
            }
            let slot = parts.entry(Monomial::from_factors(key)).or_insert_with(Expr::zero);
            *slot = &*slot + &lin;
        }
        eqs.extend(parts.into_values().filter(|e| !e.is_zero()));
    }
    match linalg::solve_linear_equations(&eqs, &cs)? {
        None => Ok(None),
        Some(sol) => Ok(Some(sol.iter().map(|e| e.as_rational().expect("constant solution")).collect())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heat_ctx() -> JetContext {
        JetContext::new(&["t", "x"], &["u"]).unwrap()
    }

    fn heat() -> PdeSystem {
        let c = heat_ctx();
        let eq = SolvedEquation::new("heat", 0, MultiIndex::from_vars(2, &[0]), c.jet(0, &[1, 1])).unwrap();
        PdeSystem::single(c, eq).unwrap()
    }

    fn vf(c: &JetContext, t: Expr, x: Expr, u: Expr) -> VectorField {
        VectorField::new(c, alloc::vec![t, x], alloc::vec![u]).unwrap()
    }

    #[test]
    fn solved_form_is_checked() {
        let c = heat_ctx();
        assert!(SolvedEquation::new("bad", 0, MultiIndex::from_vars(2, &[1]), c.jet(0, &[1, 1])).is_err());
    }

    #[test]
    fn projective_operator_is_lie() {
        let c = heat_ctx();
        let (t, x, u) = (c.x(0), c.x(1), c.u(0));
        let pi = vf(
            &c,
            Expr::int(4) * &t * &t,
            Expr::int(4) * &t * &x,
            -(&x * &x + Expr::int(2) * &t) * &u,
        );
        assert!(is_lie_symmetry(&heat(), &pi).unwrap());
        let bad = vf(&c, Expr::zero(), Expr::one(), &u * &u);
        assert!(!is_lie_symmetry(&heat(), &bad).unwrap());
    }

    #[test]
    fn theta_branch() {
        let c = heat_ctx();
        let args = alloc::vec![c.x(0), c.x(1), c.u(0)];
        let th = Expr::func("theta", args.clone());
        let q = vf(&c, Expr::zero(), Expr::one(), th.clone());
        let ds = qcond_determining_system(&heat(), &q).unwrap();
        assert_eq!(ds.len(), 1);
        let d = |v: [u32; 3]| Expr::func_deriv("theta", v.to_vec(), args.clone());
        let want = d([1, 0, 0]) - d([0, 2, 0]) - Expr::int(2) * &th * d([0, 1, 1]) - &th * &th * d([0, 0, 2]);
        assert!(equal_up_to_factor(&ds.equations()[0], &want).is_some());
        let sys = ds.to_pde_system().unwrap();
        assert_eq!(sys.equations()[0].lead(), &MultiIndex::from_counts(alloc::vec![1, 0, 0]));
    }

    #[test]
    fn closure_table() {
        let c = heat_ctx();
        let dt = VectorField::d_indep(&c, 0);
        let d = vf(&c, Expr::int(2) * c.x(0), c.x(1), Expr::zero());
        assert!(check_algebra_closure(&[dt, d.clone()]).unwrap().closes);
        let pi = vf(&c, Expr::int(4) * c.x(0) * c.x(0), Expr::int(4) * c.x(0) * c.x(1), -(c.x(1) * c.x(1) + Expr::int(2) * c.x(0)) * c.u(0));
        assert!(!check_algebra_closure(&[VectorField::d_indep(&c, 1), pi]).unwrap().closes);
    }
}

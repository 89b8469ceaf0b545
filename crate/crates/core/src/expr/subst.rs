//! Simultaneous substitution with optional differential-consequence closure.
//!
//! A rule `u_α → R` applies to the jet `u_α` itself. When the rule carries a
//! closure cap `c`, it also applies to every `u_β` with `β ≥ α` and
//! `|β| ≤ c`, which is replaced by `D_{β−α} R`. Results of closure rules are
//! reduced again, so the output is a normal form modulo the rules and their
//! permitted consequences. Rules are tried in order; the first match wins.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Atom, Expr, FuncApp, MultiIndex, Symbol};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Target {
    /// Independent variable, jet coordinate or parameter.
    Symbol(Symbol),
    /// Derivative of an unknown function given by its per-slot counts.
    FuncDeriv { name: Arc<str>, deriv: Vec<u32> },
    /// The unknown function itself, replaced by `body(params)`; derivatives
    /// of the function become derivatives of the body.
    Function { name: Arc<str>, params: Vec<Symbol> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub target: Target,
    pub rhs: Expr,
    pub closure: Option<usize>,
}

impl Rule {
    pub fn new(target: Target, rhs: Expr) -> Rule {
        Rule { target, rhs, closure: None }
    }

    pub fn symbol(s: Symbol, rhs: Expr) -> Rule {
        Rule::new(Target::Symbol(s), rhs)
    }

    pub fn jet(j: usize, alpha: MultiIndex, rhs: Expr) -> Rule {
        Rule::symbol(Symbol::Jet(j, alpha), rhs)
    }

    pub fn function(name: &str, params: Vec<Symbol>, body: Expr) -> Rule {
        Rule::new(Target::Function { name: name.into(), params }, body)
    }

    pub fn func_deriv(name: &str, deriv: Vec<u32>, rhs: Expr) -> Rule {
        Rule::new(Target::FuncDeriv { name: name.into(), deriv }, rhs)
    }

    /// Enables differential-consequence closure up to the given order.
    /// Requesting closure without a cap is an error.
    pub fn with_closure(mut self, cap: Option<usize>) -> Result<Rule> {
        match cap {
            None => Err(Error::MissingOrderCap),
            Some(c) => {
                self.closure = Some(c);
                Ok(self)
            }
        }
    }

    fn label(&self) -> String {
        match &self.target {
            Target::Symbol(s) => format!("{:?}", s.expr()),
            Target::FuncDeriv { name, deriv } => format!("{name}{deriv:?}"),
            Target::Function { name, .. } => format!("{name}"),
        }
    }

    fn target_name(&self) -> Option<&Arc<str>> {
        match &self.target {
            Target::FuncDeriv { name, .. } | Target::Function { name, .. } => Some(name),
            Target::Symbol(_) => None,
        }
    }

    /// Whether `e` mentions this rule's left-hand side.
    fn occurs_in(&self, e: &Expr) -> bool {
        match &self.target {
            Target::Symbol(s) => e.depends_on(s),
            Target::FuncDeriv { name, deriv } => e.funcs().iter().any(|f| &f.name == name && &f.deriv == deriv),
            Target::Function { name, .. } => e.funcs().iter().any(|f| &f.name == name),
        }
    }
}

/// Validated list of rules.
#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    rules: Vec<Rule>,
    max_steps: usize,
}

const DEFAULT_MAX_STEPS: usize = 200_000;

impl RuleSet {
    pub fn new(rules: Vec<Rule>) -> Result<RuleSet> {
        for (i, r) in rules.iter().enumerate() {
            for o in &rules[i + 1..] {
                let clash = r.target == o.target
                    || (r.target_name().is_some()
                        && r.target_name() == o.target_name()
                        && (matches!(r.target, Target::Function { .. }) || matches!(o.target, Target::Function { .. })));
                if clash {
                    return Err(Error::DuplicateRule(r.label()));
                }
            }
        }
        for r in &rules {
            for o in &rules {
                if o.occurs_in(&r.rhs) {
                    return Err(Error::CyclicRules(o.label()));
                }
            }
        }
        Ok(RuleSet { rules, max_steps: DEFAULT_MAX_STEPS })
    }

    pub fn empty() -> RuleSet {
        RuleSet { rules: Vec::new(), max_steps: DEFAULT_MAX_STEPS }
    }

    pub fn with_max_steps(mut self, n: usize) -> RuleSet {
        self.max_steps = n;
        self
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        if self.rules.is_empty() {
            return Ok(e.clone());
        }
        Applier::new(&self.rules, self.max_steps).expr(e)
    }
}

/// Applies `rules` to `e` simultaneously (see the module docs for closure).
pub fn substitute(e: &Expr, rules: &RuleSet) -> Result<Expr> {
    rules.apply(e)
}

/// Simultaneous replacement of symbols without any validation; used to bind
/// function parameters to arguments.
pub(crate) fn replace_symbols(e: &Expr, map: &[(Symbol, Expr)]) -> Result<Expr> {
    let rules: Vec<Rule> = map.iter().map(|(s, r)| Rule::symbol(s.clone(), r.clone())).collect();
    Applier::new(&rules, DEFAULT_MAX_STEPS).expr(e)
}

/// Rebuilds `e` with every atom passed through `f`; atoms for which `f`
/// returns `None` are kept, with their nested expressions rewritten.
pub fn map_atoms(e: &Expr, f: &mut dyn FnMut(&Atom) -> Result<Option<Expr>>) -> Result<Expr> {
    let mut images = BTreeMap::new();
    let mut changed = false;
    for a in e.atoms() {
        let img = match f(&a)? {
            Some(v) => v,
            None => match &a {
                Atom::Func(fa) => {
                    let args = fa.args.iter().map(|x| map_atoms(x, f)).collect::<Result<Vec<_>>>()?;
                    Expr::from_atom(Atom::Func(FuncApp { name: fa.name.clone(), deriv: fa.deriv.clone(), args }))
                }
                Atom::Exp(x) => Expr::exp(map_atoms(x, f)?),
                Atom::Log(x) => Expr::log(map_atoms(x, f)?),
                Atom::Int(x, v) => Expr::integral(map_atoms(x, f)?, *v),
                _ => Expr::from_atom(a.clone()),
            },
        };
        changed |= img.as_atom() != Some(&a);
        images.insert(a, img);
    }
    if !changed {
        return Ok(e.clone());
    }
    eval_poly(e.num(), &images).checked_div(&eval_poly(e.den(), &images))
}

/// Applies rules simultaneously without validating them.
pub(crate) fn replace_rules(e: &Expr, rules: Vec<Rule>) -> Result<Expr> {
    Applier::new(&rules, DEFAULT_MAX_STEPS).expr(e)
}

struct Applier<'a> {
    rules: &'a [Rule],
    memo: BTreeMap<Atom, Expr>,
    active: BTreeSet<Atom>,
    steps: usize,
    max_steps: usize,
    normal_form: bool,
}

impl<'a> Applier<'a> {
    fn new(rules: &'a [Rule], max_steps: usize) -> Self {
        let normal_form = rules.iter().any(|r| r.closure.is_some());
        Applier { rules, memo: BTreeMap::new(), active: BTreeSet::new(), steps: 0, max_steps, normal_form }
    }

    fn expr(&mut self, e: &Expr) -> Result<Expr> {
        let mut images: BTreeMap<Atom, Expr> = BTreeMap::new();
        let mut changed = false;
        for a in e.atoms() {
            let img = self.atom(&a)?;
            if img.as_atom() != Some(&a) {
                changed = true;
            }
            images.insert(a, img);
        }
        if !changed {
            return Ok(e.clone());
        }
        let num = eval_poly(e.num(), &images);
        let den = eval_poly(e.den(), &images);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        num.checked_div(&den)
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(Error::ClosureLimit(format!("more than {} reduction steps", self.max_steps)));
        }
        Ok(())
    }

    fn atom(&mut self, a: &Atom) -> Result<Expr> {
        if let Some(v) = self.memo.get(a) {
            return Ok(v.clone());
        }
        self.tick()?;
        if !self.active.insert(a.clone()) {
            return Err(Error::CyclicRules(format!("{a:?} is needed to rewrite itself")));
        }
        let out = self.rewrite(a);
        self.active.remove(a);
        let out = out?;
        self.memo.insert(a.clone(), out.clone());
        Ok(out)
    }

    fn rewrite(&mut self, a: &Atom) -> Result<Expr> {
        Ok(match a {
            Atom::Indep(_) | Atom::Param(_) => {
                let s = Symbol::from_atom(a).unwrap();
                match self.rules.iter().find(|r| r.target == Target::Symbol(s.clone())) {
                    Some(r) => self.finish(&r.rhs)?,
                    None => Expr::from_atom(a.clone()),
                }
            }
            Atom::Jet(j, beta) => self.jet(*j, beta)?,
            Atom::Func(f) => self.func(f)?,
            Atom::Exp(arg) => Expr::exp(self.expr(arg)?),
            Atom::Log(arg) => Expr::log(self.expr(arg)?),
            Atom::Int(f, v) => Expr::integral(self.expr(f)?, *v),
            Atom::Var(_) => Expr::from_atom(a.clone()),
        })
    }

    fn finish(&mut self, rhs: &Expr) -> Result<Expr> {
        if self.normal_form {
            self.expr(rhs)
        } else {
            Ok(rhs.clone())
        }
    }

    fn jet(&mut self, j: usize, beta: &MultiIndex) -> Result<Expr> {
        let found = self.rules.iter().find_map(|r| match &r.target {
            Target::Symbol(Symbol::Jet(rj, alpha)) if *rj == j => {
                if alpha == beta {
                    Some((r, alpha))
                } else {
                    match r.closure {
                        Some(cap) if beta.dominates(alpha) && beta.order() <= cap => Some((r, alpha)),
                        _ => None,
                    }
                }
            }
            _ => None,
        });
        let Some((rule, alpha)) = found else {
            return Ok(Expr::jet(j, beta.clone()));
        };
        if alpha == beta {
            return self.finish(&rule.rhs);
        }
        let i = (0..beta.len()).find(|&i| beta.get(i) > alpha.get(i)).unwrap();
        let prev = self.atom(&Atom::Jet(j, beta.decremented(i).unwrap()))?;
        self.expr(&prev.total_derivative(i))
    }

    fn func(&mut self, f: &FuncApp) -> Result<Expr> {
        for r in self.rules {
            match &r.target {
                Target::Function { name, params } if *name == f.name => {
                    if params.len() != f.args.len() {
                        return Err(Error::Context(format!(
                            "function rule for `{name}` has {} parameters, application has {} arguments",
                            params.len(),
                            f.args.len()
                        )));
                    }
                    let mut body = r.rhs.clone();
                    for (k, &c) in f.deriv.iter().enumerate() {
                        for _ in 0..c {
                            body = body.partial(&params[k]);
                        }
                    }
                    let mut bind = Vec::with_capacity(params.len());
                    for (p, arg) in params.iter().zip(&f.args) {
                        bind.push((p.clone(), self.expr(arg)?));
                    }
                    return replace_symbols(&body, &bind);
                }
                Target::FuncDeriv { name, deriv } if *name == f.name && deriv.len() == f.deriv.len() => {
                    if *deriv == f.deriv {
                        return self.finish(&r.rhs);
                    }
                    let dominated = f.deriv.iter().zip(deriv).all(|(a, b)| a >= b);
                    if let Some(cap) = r.closure {
                        if dominated && f.order() <= cap {
                            let k = (0..deriv.len()).find(|&k| f.deriv[k] > deriv[k]).unwrap();
                            let Some(s) = f.args[k].as_symbol() else {
                                return Err(Error::Unsupported(format!(
                                    "closure for `{name}` needs plain symbols as arguments"
                                )));
                            };
                            let mut lower = f.clone();
                            lower.deriv[k] -= 1;
                            let prev = self.atom(&Atom::Func(lower))?;
                            return self.expr(&prev.partial(&s));
                        }
                    }
                }
                _ => {}
            }
        }
        let mut args = Vec::with_capacity(f.args.len());
        let mut changed = false;
        for a in &f.args {
            let v = self.expr(a)?;
            changed |= v != *a;
            args.push(v);
        }
        if !changed {
            return Ok(Expr::from_atom(Atom::Func(f.clone())));
        }
        Ok(Expr::from_atom(Atom::Func(FuncApp { name: f.name.clone(), deriv: f.deriv.clone(), args })))
    }
}

fn eval_poly(p: &super::Poly, images: &BTreeMap<Atom, Expr>) -> Expr {
    let mut acc = Expr::zero();
    let mut poly_acc = super::Poly::zero();
    for (m, c) in p.terms() {
        let mut term = Expr::rat(c.clone());
        for (a, k) in m.factors() {
            let img = &images[a];
            term = term * img.pow(*k as i32);
        }
        if term.den().is_one() {
            poly_acc = poly_acc.add(term.num());
        } else {
            acc = acc + term;
        }
    }
    Expr::from_poly(poly_acc) + acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::JetContext;

    fn ctx() -> JetContext {
        JetContext::new(&["t", "x"], &["u"]).unwrap()
    }

    fn jet(v: &[u32]) -> MultiIndex {
        MultiIndex::from_counts(v.to_vec())
    }

    #[test]
    fn plain_substitution() {
        let c = ctx();
        let (ut, uxx) = (c.jet(0, &[0]), c.jet(0, &[1, 1]));
        let rules = RuleSet::new(alloc::vec![Rule::jet(0, jet(&[1, 0]), uxx.clone())]).unwrap();
        assert!(substitute(&(&ut - &uxx), &rules).unwrap().is_zero());
    }

    #[test]
    fn consequence_closure() {
        let c = ctx();
        let uxx = c.jet(0, &[1, 1]);
        let rule = Rule::jet(0, jet(&[1, 0]), uxx).with_closure(Some(3)).unwrap();
        let rules = RuleSet::new(alloc::vec![rule]).unwrap();
        let utx = c.jet(0, &[0, 1]);
        assert_eq!(substitute(&utx, &rules).unwrap(), c.jet(0, &[1, 1, 1]));
        // without closure the mixed derivative is left alone
        let plain = RuleSet::new(alloc::vec![Rule::jet(0, jet(&[1, 0]), c.jet(0, &[1, 1]))]).unwrap();
        assert_eq!(substitute(&utx, &plain).unwrap(), utx);
    }

    #[test]
    fn closure_through_unknown_function() {
        let c = ctx();
        let args = alloc::vec![c.x(0), c.x(1), c.u(0)];
        let theta = Expr::func("theta", args.clone());
        let rule = Rule::jet(0, jet(&[0, 1]), theta.clone()).with_closure(Some(2)).unwrap();
        let rules = RuleSet::new(alloc::vec![rule]).unwrap();
        let got = substitute(&c.jet(0, &[1, 1]), &rules).unwrap();
        let th_x = Expr::func_deriv("theta", alloc::vec![0, 1, 0], args.clone());
        let th_u = Expr::func_deriv("theta", alloc::vec![0, 0, 1], args);
        assert_eq!(got, th_x + th_u * theta);
    }

    #[test]
    fn closure_requires_cap() {
        let r = Rule::jet(0, jet(&[1, 0]), Expr::zero());
        assert_eq!(r.with_closure(None), Err(Error::MissingOrderCap));
    }

    #[test]
    fn cyclic_and_duplicate_rules_rejected() {
        let c = ctx();
        let a = Rule::jet(0, jet(&[1, 0]), c.jet(0, &[1]));
        let b = Rule::jet(0, jet(&[0, 1]), c.jet(0, &[0]));
        assert!(matches!(RuleSet::new(alloc::vec![a.clone(), b]), Err(Error::CyclicRules(_))));
        assert!(matches!(RuleSet::new(alloc::vec![a.clone(), a]), Err(Error::DuplicateRule(_))));
    }

    #[test]
    fn empty_rules_are_identity() {
        let c = ctx();
        let e = c.x(0) * c.jet(0, &[1]) + Expr::exp(c.u(0));
        assert_eq!(substitute(&e, &RuleSet::empty()).unwrap(), e);
    }

    #[test]
    fn function_rule_and_constraint() {
        let c = ctx();
        let (t, x) = (c.x(0), c.x(1));
        let args = alloc::vec![t.clone(), x.clone()];
        let f = Expr::func("f", args.clone());
        let f_x = Expr::func_deriv("f", alloc::vec![0, 1], args.clone());
        let body = &x * &x + Expr::int(2) * &t;
        let rule = Rule::function("f", alloc::vec![Symbol::Indep(0), Symbol::Indep(1)], body);
        let rules = RuleSet::new(alloc::vec![rule]).unwrap();
        assert_eq!(substitute(&(&f + &f_x), &rules).unwrap(), &x * &x + Expr::int(2) * &t + Expr::int(2) * &x);
        // f_t -> f_xx with closure turns f_tx into f_xxx
        let constraint = Rule::func_deriv("f", alloc::vec![1, 0], Expr::func_deriv("f", alloc::vec![0, 2], args.clone()))
            .with_closure(Some(4))
            .unwrap();
        let rules = RuleSet::new(alloc::vec![constraint]).unwrap();
        let f_tx = Expr::func_deriv("f", alloc::vec![1, 1], args.clone());
        assert_eq!(substitute(&f_tx, &rules).unwrap(), Expr::func_deriv("f", alloc::vec![0, 3], args));
    }
}

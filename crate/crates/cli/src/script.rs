//! Resolved scripts: declarations, directives and the symbol environment.

use std::collections::BTreeMap;
use std::sync::Arc;

use qcond_core::expr::{collect_coefficients, Atom, Expr, JetContext, Monomial, Rat, Rule};
use qcond_core::reduction::{verify_ansatz, Invariant};
use qcond_core::{Ansatz, InvolutiveSet, PdeSystem, SolvedEquation, VectorField};

use crate::syntax::{lex, BinOp, Cursor, ErrorKind, Node, PResult, ParseError, Pos, Spanned, Tok};

/// Order cap used when closing constraints on unknown functions.
pub const CONSTRAINT_CLOSURE: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Script {
    pub statements: Vec<Statement>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Vars(Vec<String>),
    Dep(Vec<String>),
    Param(Vec<String>),
    Unknown { name: String, signature: Vec<String> },
    Eq { system: String, lhs: Expr, rhs: Expr },
    Constraint { system: String, lhs: Expr, rhs: Expr },
    Op { name: String, template: bool, coeffs: Vec<Expr> },
    Ansatz(AnsatzDecl),
    Directive(Directive),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzDecl {
    pub name: String,
    pub dep: String,
    pub form: Expr,
    pub phi: String,
    pub invariants: Vec<InvariantDecl>,
    pub via: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantDecl {
    pub name: String,
    pub expr: Expr,
    pub solve: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeriveKind {
    Lie,
    Qcond,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Directive {
    CheckLie { system: String, ops: Vec<String>, expect: Expect },
    CheckQcond { system: String, ops: Vec<String>, expect: Expect },
    Derive { kind: DeriveKind, system: String, template: String },
    Bracket { a: String, b: String, expected: Option<Vec<Expr>> },
    Reduce { system: String, ansatz: String, by: Vec<String>, expected: Option<Expr> },
    VerifyCase(String),
    RunCasebook,
}

/// Declared system with the context it lives in.
#[derive(Clone, Debug)]
pub struct SystemDef {
    pub ctx: usize,
    pub equations: Vec<SolvedEquation>,
    pub constraints: Vec<Rule>,
}

/// Symbol tables built by walking the statements in order.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub contexts: Vec<JetContext>,
    pending_vars: Option<Vec<String>>,
    pub current: Option<usize>,
    pub params: Vec<String>,
    pub unknowns: BTreeMap<String, Vec<String>>,
    pub systems: BTreeMap<String, SystemDef>,
    pub ops: BTreeMap<String, (usize, VectorField)>,
    pub ansatzes: BTreeMap<String, (usize, Ansatz)>,
}

impl Env {
    pub fn ctx(&self, k: usize) -> &JetContext {
        &self.contexts[k]
    }

    pub fn current_ctx(&self) -> Option<&JetContext> {
        self.current.map(|k| &self.contexts[k])
    }

    pub fn system(&self, name: &str) -> Result<PdeSystem, String> {
        let def = self.systems.get(name).ok_or_else(|| format!("undeclared system `{name}`"))?;
        let mut sys = PdeSystem::new(self.ctx(def.ctx).clone(), def.equations.clone()).map_err(|e| e.to_string())?;
        for r in &def.constraints {
            sys = sys.with_constraint(r.clone()).map_err(|e| e.to_string())?;
        }
        Ok(sys)
    }

    pub fn op(&self, name: &str) -> Result<&(usize, VectorField), String> {
        self.ops.get(name).ok_or_else(|| format!("undeclared operator `{name}`"))
    }

    pub fn ansatz(&self, name: &str) -> Result<&(usize, Ansatz), String> {
        self.ansatzes.get(name).ok_or_else(|| format!("undeclared ansatz `{name}`"))
    }

    fn need_ctx(&self) -> Result<usize, String> {
        self.current.ok_or_else(|| "no context: declare `vars` and `dep` first".to_string())
    }

    fn is_symbol_name(&self, s: &str) -> bool {
        let in_ctx = self.current_ctx().is_some_and(|c| c.indep_index(s).is_some() || c.dep_index(s).is_some());
        in_ctx || self.params.iter().any(|p| p == s)
    }

    /// Records the effect of one statement.
    pub fn apply(&mut self, st: &Statement) -> Result<(), String> {
        match st {
            Statement::Vars(names) => {
                self.pending_vars = Some(names.clone());
                self.current = None;
            }
            Statement::Dep(names) => {
                let vars = self.pending_vars.take().ok_or("`dep` must follow `vars`")?;
                let ctx = JetContext::new(&vars, names).map_err(|e| e.to_string())?;
                self.contexts.push(ctx);
                self.current = Some(self.contexts.len() - 1);
            }
            Statement::Param(names) => {
                for n in names {
                    if !self.params.contains(n) {
                        self.params.push(n.clone());
                    }
                }
            }
            Statement::Unknown { name, signature } => {
                for s in signature {
                    if !self.is_symbol_name(s) {
                        return Err(format!("signature of `{name}` mentions undeclared symbol `{s}`"));
                    }
                }
                self.unknowns.insert(name.clone(), signature.clone());
            }
            Statement::Eq { system, lhs, rhs } => {
                let k = self.need_ctx()?;
                let Some(Atom::Jet(j, alpha)) = lhs.as_atom() else {
                    return Err("left-hand side of an equation must be a derivative of a dependent variable".into());
                };
                let eq = SolvedEquation::new(system, *j, alpha.clone(), rhs.clone()).map_err(|e| e.to_string())?;
                let def = self.systems.entry(system.clone()).or_insert(SystemDef {
                    ctx: k,
                    equations: Vec::new(),
                    constraints: Vec::new(),
                });
                if def.ctx != k {
                    return Err(format!("system `{system}` was declared in a different context"));
                }
                def.equations.push(eq);
                self.system(system)?;
            }
            Statement::Constraint { system, lhs, rhs } => {
                let Some(Atom::Func(f)) = lhs.as_atom() else {
                    return Err("left-hand side of a constraint must be a derivative of an unknown function".into());
                };
                if f.order() == 0 {
                    return Err("left-hand side of a constraint must be a derivative of an unknown function".into());
                }
                let rule = Rule::func_deriv(&f.name, f.deriv.clone(), rhs.clone())
                    .with_closure(Some(CONSTRAINT_CLOSURE))
                    .map_err(|e| e.to_string())?;
                let def = self.systems.get_mut(system).ok_or_else(|| format!("undeclared system `{system}`"))?;
                def.constraints.push(rule);
                self.system(system)?;
            }
            Statement::Op { name, coeffs, .. } => {
                let k = self.need_ctx()?;
                let c = self.ctx(k);
                let q = VectorField::new(c, coeffs[..c.n()].to_vec(), coeffs[c.n()..].to_vec()).map_err(|e| e.to_string())?;
                self.ops.insert(name.clone(), (k, q));
            }
            Statement::Ansatz(a) => {
                let k = self.need_ctx()?;
                let c = self.ctx(k).clone();
                let mut invariants = Vec::new();
                for inv in &a.invariants {
                    let solve_for = c.indep_index(&inv.solve).ok_or_else(|| format!("`{}` is not an independent variable", inv.solve))?;
                    invariants.push(Invariant { name: Arc::from(inv.name.as_str()), expr: inv.expr.clone(), solve_for });
                }
                let w = a.via.clone().unwrap_or_else(|| c.u(0));
                let ansatz = Ansatz { invariants, phi: Arc::from(a.phi.as_str()), form: a.form.clone(), w };
                self.ansatzes.insert(a.name.clone(), (k, ansatz));
            }
            Statement::Directive(d) => self.check_directive(d)?,
        }
        Ok(())
    }

    fn same_ctx(&self, what: &str, a: usize, b: usize) -> Result<(), String> {
        if a == b {
            Ok(())
        } else {
            Err(format!("{what} live in different contexts"))
        }
    }

    fn check_directive(&self, d: &Directive) -> Result<(), String> {
        match d {
            Directive::CheckLie { system, ops, .. } | Directive::CheckQcond { system, ops, .. } => {
                let s = self.systems.get(system).ok_or_else(|| format!("undeclared system `{system}`"))?;
                for o in ops {
                    self.same_ctx("system and operator", s.ctx, self.op(o)?.0)?;
                }
            }
            Directive::Derive { system, template, .. } => {
                let s = self.systems.get(system).ok_or_else(|| format!("undeclared system `{system}`"))?;
                self.same_ctx("system and template", s.ctx, self.op(template)?.0)?;
            }
            Directive::Bracket { a, b, .. } => self.same_ctx("operators", self.op(a)?.0, self.op(b)?.0)?,
            Directive::Reduce { system, ansatz, by, .. } => {
                let s = self.systems.get(system).ok_or_else(|| format!("undeclared system `{system}`"))?;
                self.same_ctx("system and ansatz", s.ctx, self.ansatz(ansatz)?.0)?;
                for o in by {
                    self.same_ctx("system and operator", s.ctx, self.op(o)?.0)?;
                }
            }
            Directive::VerifyCase(id) => {
                if !qcond_core::casebook::CASE_IDS.contains(&id.as_str()) {
                    return Err(format!("unknown casebook entry `{id}`"));
                }
            }
            Directive::RunCasebook => {}
        }
        Ok(())
    }

    /// Operators of a directive as an involutive set.
    pub fn involutive_set(&self, ops: &[String]) -> Result<InvolutiveSet, String> {
        let fields: Vec<VectorField> = ops.iter().map(|o| self.op(o).map(|x| x.1.clone())).collect::<Result<_, _>>()?;
        if fields.len() == 1 {
            Ok(InvolutiveSet::single(fields.into_iter().next().unwrap()))
        } else {
            InvolutiveSet::new(fields).map_err(|e| e.to_string())
        }
    }

    pub fn check_ansatz(&self, ansatz: &Ansatz, ops: &[String]) -> Result<bool, String> {
        let set = self.involutive_set(ops)?;
        verify_ansatz(&set, ansatz).map_err(|e| e.to_string())
    }
}

/// Internal name of the basis symbol `d<name>` inside operator expressions.
fn basis_name(name: &str) -> String {
    format!("\u{2202}{name}")
}

#[derive(Clone, Copy)]
enum Mode<'a> {
    Plain,
    /// Operator body: `dt`, `dx`, `du` are basis symbols.
    Field,
    /// Ansatz form: invariant names stand for their expressions and the one
    /// undeclared function is the ansatz function.
    Form(&'a [(String, Expr)]),
    /// Expected reduced equation: invariant names are parameters and `phi`
    /// is the ansatz function.
    Reduced { invariants: &'a [String], phi: &'a str },
}

struct Resolver<'a> {
    env: &'a Env,
    ctx: &'a JetContext,
    mode: Mode<'a>,
    phi: Option<(String, usize)>,
}

fn err(pos: Pos, kind: ErrorKind, msg: impl Into<String>) -> ParseError {
    ParseError::new(pos, kind, msg)
}

impl Resolver<'_> {
    fn signature(&self, name: &str, pos: Pos) -> PResult<Vec<Expr>> {
        let sig = &self.env.unknowns[name];
        sig.iter()
            .map(|s| self.plain_symbol(s).ok_or_else(|| err(pos, ErrorKind::Undeclared, format!("`{s}` in the signature of `{name}`"))))
            .collect()
    }

    fn plain_symbol(&self, s: &str) -> Option<Expr> {
        if let Ok(e) = self.ctx.var(s) {
            return Some(e);
        }
        self.env.params.iter().any(|p| p == s).then(|| Expr::param(s))
    }

    fn phi_name(&self, name: &str) -> Option<usize> {
        match self.mode {
            Mode::Form(inv) if !self.env.unknowns.contains_key(name) => Some(inv.len()),
            Mode::Reduced { invariants, phi } if name == phi => Some(invariants.len()),
            _ => None,
        }
    }

    fn ident(&mut self, name: &str, pos: Pos) -> PResult<Expr> {
        match self.mode {
            Mode::Form(inv) => {
                if let Some((_, e)) = inv.iter().find(|(n, _)| n == name) {
                    return Ok(e.clone());
                }
            }
            Mode::Reduced { invariants, .. } => {
                if invariants.iter().any(|n| n == name) {
                    return Ok(Expr::param(name));
                }
            }
            Mode::Field => {
                if let Some(rest) = name.strip_prefix('d') {
                    if self.ctx.indep_index(rest).is_some() || self.ctx.dep_index(rest).is_some() {
                        return Ok(Expr::param(&basis_name(rest)));
                    }
                }
            }
            Mode::Plain => {}
        }
        if let Some(e) = self.plain_symbol(name) {
            return Ok(e);
        }
        if self.env.unknowns.contains_key(name) {
            return Ok(Expr::func(name, self.signature(name, pos)?));
        }
        if let Some((base, suffix)) = name.rsplit_once('_') {
            if !suffix.is_empty() {
                if let Some(j) = self.ctx.dep_index(base) {
                    let mut vars = Vec::new();
                    for ch in suffix.chars() {
                        let i = self.ctx.indep_index(&ch.to_string()).ok_or_else(|| {
                            err(pos, ErrorKind::Undeclared, format!("`{ch}` in `{name}` is not an independent variable"))
                        })?;
                        vars.push(i);
                    }
                    return Ok(self.ctx.jet(j, &vars));
                }
                if let Some(sig) = self.env.unknowns.get(base) {
                    let mut deriv = vec![0u32; sig.len()];
                    for ch in suffix.chars() {
                        let k = sig.iter().position(|s| *s == ch.to_string()).ok_or_else(|| {
                            err(pos, ErrorKind::Undeclared, format!("`{ch}` in `{name}` is not an argument of `{base}`"))
                        })?;
                        deriv[k] += 1;
                    }
                    return Ok(Expr::func_deriv(base, deriv, self.signature(base, pos)?));
                }
            }
        }
        Err(err(pos, ErrorKind::Undeclared, format!("`{name}`")))
    }

    fn capture_phi(&mut self, name: &str, arity: usize, pos: Pos) -> PResult<()> {
        match &self.phi {
            Some((p, _)) if p != name => Err(err(pos, ErrorKind::Semantic, format!("ansatz uses two unknown functions `{p}` and `{name}`"))),
            _ => {
                self.phi = Some((name.to_string(), arity));
                Ok(())
            }
        }
    }

    fn derivative(&mut self, args: &[Spanned], pos: Pos) -> PResult<Expr> {
        let Some(Spanned { node: Node::Ident(base), pos: bpos }) = args.first() else {
            return Err(err(pos, ErrorKind::Syntax, "`d` takes a variable or unknown function first"));
        };
        let mut steps: Vec<(String, Pos, u32)> = Vec::new();
        for a in &args[1..] {
            match &a.node {
                Node::Ident(v) => steps.push((v.clone(), a.pos, 1)),
                Node::Num(k) => {
                    let Some(last) = steps.last_mut() else {
                        return Err(err(a.pos, ErrorKind::Syntax, "derivative count before any variable"));
                    };
                    let k: u32 = k.parse().map_err(|_| err(a.pos, ErrorKind::Syntax, "derivative count out of range"))?;
                    if k == 0 || last.2 != 1 {
                        return Err(err(a.pos, ErrorKind::Syntax, "misplaced derivative count"));
                    }
                    last.2 = k;
                }
                _ => return Err(err(a.pos, ErrorKind::Syntax, "expected a variable name or a count")),
            }
        }
        if steps.is_empty() {
            return Err(err(pos, ErrorKind::Syntax, "`d` needs at least one variable"));
        }
        if let Some(j) = self.ctx.dep_index(base) {
            let mut vars = Vec::new();
            for (v, p, k) in steps {
                let i = self
                    .ctx
                    .indep_index(&v)
                    .ok_or_else(|| err(p, ErrorKind::Undeclared, format!("`{v}` is not an independent variable")))?;
                vars.extend(std::iter::repeat_n(i, k as usize));
            }
            return Ok(self.ctx.jet(j, &vars));
        }
        if let Some(sig) = self.env.unknowns.get(base) {
            let mut deriv = vec![0u32; sig.len()];
            for (v, p, k) in steps {
                let slot = sig
                    .iter()
                    .position(|s| *s == v)
                    .ok_or_else(|| err(p, ErrorKind::Undeclared, format!("`{v}` is not an argument of `{base}`")))?;
                deriv[slot] += k;
            }
            return Ok(Expr::func_deriv(base, deriv, self.signature(base, *bpos)?));
        }
        Err(err(*bpos, ErrorKind::Undeclared, format!("`{base}` is neither a dependent variable nor an unknown function")))
    }

    fn call(&mut self, name: &str, args: &[Spanned], deriv: Option<&[u32]>, pos: Pos) -> PResult<Expr> {
        if deriv.is_none() {
            match name {
                "d" => return self.derivative(args, pos),
                "exp" | "log" => {
                    if args.len() != 1 {
                        return Err(err(pos, ErrorKind::Arity, format!("`{name}` takes one argument")));
                    }
                    let a = self.expr(&args[0])?;
                    return Ok(if name == "exp" { Expr::exp(a) } else { Expr::log(a) });
                }
                "Int" | "int" => {
                    if args.len() != 2 {
                        return Err(err(pos, ErrorKind::Arity, "`Int` takes an integrand and a variable"));
                    }
                    let a = self.expr(&args[0])?;
                    let Node::Ident(v) = &args[1].node else {
                        return Err(err(args[1].pos, ErrorKind::Syntax, "expected an independent variable"));
                    };
                    let i = self
                        .ctx
                        .indep_index(v)
                        .ok_or_else(|| err(args[1].pos, ErrorKind::Undeclared, format!("`{v}` is not an independent variable")))?;
                    return Ok(Expr::integral(a, i));
                }
                _ => {}
            }
        }
        let arity = if let Some(sig) = self.env.unknowns.get(name) {
            sig.len()
        } else if let Some(k) = self.phi_name(name) {
            self.capture_phi(name, k, pos)?;
            k
        } else {
            return Err(err(pos, ErrorKind::Undeclared, format!("function `{name}`")));
        };
        if args.len() != arity {
            return Err(err(pos, ErrorKind::Arity, format!("`{name}` takes {arity} arguments, found {}", args.len())));
        }
        let args: Vec<Expr> = args.iter().map(|a| self.expr(a)).collect::<PResult<_>>()?;
        match deriv {
            None => Ok(Expr::func(name, args)),
            Some(d) if d.len() == arity => Ok(Expr::func_deriv(name, d.to_vec(), args)),
            Some(d) => Err(err(pos, ErrorKind::Arity, format!("`{name}` takes {arity} derivative counts, found {}", d.len()))),
        }
    }

    fn expr(&mut self, s: &Spanned) -> PResult<Expr> {
        match &s.node {
            Node::Num(n) => n
                .parse::<Rat>()
                .map(Expr::rat)
                .map_err(|_| err(s.pos, ErrorKind::Syntax, "malformed number")),
            Node::Ident(name) => self.ident(name, s.pos),
            Node::Call(name, args) => self.call(name, args, None, s.pos),
            Node::Deriv(name, d, args) => self.call(name, args, Some(d), s.pos),
            Node::Neg(a) => Ok(-self.expr(a)?),
            Node::Bin(op, a, b) => {
                let (a, b) = (self.expr(a)?, self.expr(b)?);
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => a.checked_div(&b).map_err(|_| err(s.pos, ErrorKind::Semantic, "division by zero")),
                }
            }
            Node::Pow(a, k) => {
                let a = self.expr(a)?;
                if *k < 0 && a.is_zero() {
                    return Err(err(s.pos, ErrorKind::Semantic, "division by zero"));
                }
                Ok(a.pow(*k as i32))
            }
        }
    }
}

fn resolve(env: &Env, ctx: &JetContext, mode: Mode<'_>, node: &Spanned) -> PResult<Expr> {
    Resolver { env, ctx, mode, phi: None }.expr(node)
}

/// Splits an operator expression into its coefficients along `dt, dx, …, du, …`.
fn field_coefficients(env: &Env, ctx: &JetContext, node: &Spanned) -> PResult<Vec<Expr>> {
    let e = resolve(env, ctx, Mode::Field, node)?;
    let names: Vec<&String> = ctx.indep_names().iter().chain(ctx.dep_names()).collect();
    let basis: Vec<Atom> = names.iter().map(|n| Atom::Param(basis_name(n).into())).collect();
    let linear = || err(node.pos, ErrorKind::Semantic, "operator must be linear in the basis symbols with no free term");
    let parts = collect_coefficients(&e, &basis).map_err(|_| linear())?;
    let mut coeffs = vec![Expr::zero(); basis.len()];
    for (m, c) in parts {
        let k = basis.iter().position(|b| m == Monomial::atom(b.clone())).ok_or_else(linear)?;
        coeffs[k] = c;
    }
    Ok(coeffs)
}

/// Parses and resolves a script.
pub fn parse(src: &str) -> PResult<Script> {
    let mut p = Parser { cur: Cursor::new(lex(src)?), env: Env::default() };
    let mut statements = Vec::new();
    while !p.cur.at_eof() {
        let pos = p.cur.pos();
        let st = p.statement()?;
        p.env.apply(&st).map_err(|m| err(pos, ErrorKind::Semantic, m))?;
        statements.push(st);
    }
    Ok(Script { statements })
}

/// Resolves `text` against everything `script` declares, in its last context.
pub fn expression(script: &Script, text: &str) -> PResult<Expr> {
    let mut env = Env::default();
    for st in &script.statements {
        env.apply(st).map_err(|m| err(Pos { line: 0, col: 0 }, ErrorKind::Semantic, m))?;
    }
    let mut cur = Cursor::new(lex(text)?);
    let node = cur.expr()?;
    if !cur.at_eof() {
        return cur.unexpected("end of expression");
    }
    let ctx = env.current_ctx().cloned().ok_or_else(|| err(node.pos, ErrorKind::Semantic, "script declares no context"))?;
    resolve(&env, &ctx, Mode::Plain, &node)
}

struct Parser {
    cur: Cursor,
    env: Env,
}

const RESERVED: &[&str] = &["d", "exp", "log", "Int", "int", "where", "solve", "via", "by", "expect"];

impl Parser {
    fn names_until_semi(&mut self) -> PResult<Vec<String>> {
        let mut names = Vec::new();
        while !self.cur.is_punct(';') {
            names.push(self.new_name()?);
        }
        self.cur.expect_punct(';')?;
        if names.is_empty() {
            return self.cur.unexpected("a name");
        }
        Ok(names)
    }

    fn new_name(&mut self) -> PResult<String> {
        let (n, pos) = self.cur.ident()?;
        if RESERVED.contains(&n.as_str()) {
            return Err(err(pos, ErrorKind::Syntax, format!("`{n}` is reserved")));
        }
        Ok(n)
    }

    fn ctx(&self, pos: Pos) -> PResult<JetContext> {
        self.env
            .current_ctx()
            .cloned()
            .ok_or_else(|| err(pos, ErrorKind::Semantic, "no context: declare `vars` and `dep` first"))
    }

    fn statement(&mut self) -> PResult<Statement> {
        let (kw, pos) = self.cur.word()?;
        let st = match kw.as_str() {
            "vars" => Statement::Vars(self.names_until_semi()?),
            "dep" => Statement::Dep(self.names_until_semi()?),
            "param" => Statement::Param(self.names_until_semi()?),
            "unknown" => {
                let name = self.new_name()?;
                self.cur.expect_punct('(')?;
                let mut signature = Vec::new();
                loop {
                    let (s, spos) = self.cur.ident()?;
                    if !self.env.is_symbol_name(&s) {
                        return Err(err(spos, ErrorKind::Undeclared, format!("`{s}`")));
                    }
                    signature.push(s);
                    if self.cur.eat_punct(')') {
                        break;
                    }
                    self.cur.expect_punct(',')?;
                }
                self.cur.expect_punct(';')?;
                Statement::Unknown { name, signature }
            }
            "eq" | "constraint" => {
                let system = self.new_name()?;
                self.cur.expect_punct(':')?;
                let ctx = self.ctx(pos)?;
                let l = self.cur.expr()?;
                self.cur.expect_punct('=')?;
                let r = self.cur.expr()?;
                self.cur.expect_punct(';')?;
                let lhs = resolve(&self.env, &ctx, Mode::Plain, &l)?;
                let rhs = resolve(&self.env, &ctx, Mode::Plain, &r)?;
                if kw == "eq" {
                    Statement::Eq { system, lhs, rhs }
                } else {
                    Statement::Constraint { system, lhs, rhs }
                }
            }
            "op" | "template" => {
                let name = self.new_name()?;
                self.cur.expect_punct(':')?;
                let ctx = self.ctx(pos)?;
                let body = self.cur.expr()?;
                self.cur.expect_punct(';')?;
                let coeffs = field_coefficients(&self.env, &ctx, &body)?;
                Statement::Op { name, template: kw == "template", coeffs }
            }
            "ansatz" => Statement::Ansatz(self.ansatz(pos)?),
            _ => Statement::Directive(self.directive(&kw, pos)?),
        };
        Ok(st)
    }

    fn ansatz(&mut self, pos: Pos) -> PResult<AnsatzDecl> {
        let ctx = self.ctx(pos)?;
        let name = self.new_name()?;
        self.cur.expect_punct(':')?;
        let (dep, dpos) = self.cur.ident()?;
        if ctx.dep_index(&dep) != Some(0) || ctx.m() != 1 {
            return Err(err(dpos, ErrorKind::Semantic, "an ansatz solves for the single dependent variable"));
        }
        self.cur.expect_punct('=')?;
        let form_node = self.cur.expr()?;
        self.cur.expect_word("where")?;
        let mut invariants = Vec::new();
        let mut bound: Vec<(String, Expr)> = Vec::new();
        loop {
            let iname = self.new_name()?;
            self.cur.expect_punct('=')?;
            let node = self.cur.expr()?;
            let expr = resolve(&self.env, &ctx, Mode::Plain, &node)?;
            self.cur.expect_word("solve")?;
            let (solve, spos) = self.cur.ident()?;
            if ctx.indep_index(&solve).is_none() {
                return Err(err(spos, ErrorKind::Undeclared, format!("`{solve}` is not an independent variable")));
            }
            bound.push((iname.clone(), expr.clone()));
            invariants.push(InvariantDecl { name: iname, expr, solve });
            if !self.cur.eat_punct(',') {
                break;
            }
        }
        let via = if self.cur.eat_word("via") {
            let node = self.cur.expr()?;
            Some(resolve(&self.env, &ctx, Mode::Plain, &node)?)
        } else {
            None
        };
        self.cur.expect_punct(';')?;
        let mut r = Resolver { env: &self.env, ctx: &ctx, mode: Mode::Form(&bound), phi: None };
        let form = r.expr(&form_node)?;
        let Some((phi, _)) = r.phi else {
            return Err(err(form_node.pos, ErrorKind::Semantic, "ansatz form must apply an unknown function to the invariants"));
        };
        if via.is_none() {
            let direct = Expr::func(&phi, invariants.iter().map(|i| i.expr.clone()).collect());
            if form != direct {
                return Err(err(form_node.pos, ErrorKind::Semantic, "ansatz form is not solved for the function; give `via W`"));
            }
        }
        Ok(AnsatzDecl { name, dep, form, phi, invariants, via })
    }

    fn ops_list(&mut self) -> PResult<Vec<String>> {
        let mut ops = Vec::new();
        while matches!(&self.cur.peek().tok, Tok::Ident(s) if !RESERVED.contains(&s.as_str())) {
            ops.push(self.cur.ident()?.0);
        }
        if ops.is_empty() {
            return self.cur.unexpected("an operator name");
        }
        Ok(ops)
    }

    fn expect_clause(&mut self) -> PResult<Expect> {
        if !self.cur.eat_word("expect") {
            return Ok(Expect::Pass);
        }
        if self.cur.eat_word("pass") {
            Ok(Expect::Pass)
        } else if self.cur.eat_word("fail") {
            Ok(Expect::Fail)
        } else {
            self.cur.unexpected("`pass` or `fail`")
        }
    }

    fn directive(&mut self, kw: &str, pos: Pos) -> PResult<Directive> {
        let d = match kw {
            "check-lie" | "check-qcond" => {
                let system = self.cur.ident()?.0;
                let ops = self.ops_list()?;
                let expect = self.expect_clause()?;
                if kw == "check-lie" {
                    Directive::CheckLie { system, ops, expect }
                } else {
                    Directive::CheckQcond { system, ops, expect }
                }
            }
            "derive" => {
                let kind = if self.cur.eat_word("lie") {
                    DeriveKind::Lie
                } else if self.cur.eat_word("qcond") {
                    DeriveKind::Qcond
                } else {
                    return self.cur.unexpected("`lie` or `qcond`");
                };
                let system = self.cur.ident()?.0;
                let template = self.cur.ident()?.0;
                Directive::Derive { kind, system, template }
            }
            "bracket" => {
                let (a, apos) = self.cur.ident()?;
                let b = self.cur.ident()?.0;
                let expected = if self.cur.eat_punct('=') {
                    let k = self.env.op(&a).map_err(|m| err(apos, ErrorKind::Undeclared, m))?.0;
                    let ctx = self.env.ctx(k).clone();
                    let node = self.cur.expr()?;
                    Some(field_coefficients(&self.env, &ctx, &node)?)
                } else {
                    None
                };
                Directive::Bracket { a, b, expected }
            }
            "reduce" => {
                let system = self.cur.ident()?.0;
                let (ansatz, apos) = self.cur.ident()?;
                let by = if self.cur.eat_word("by") { self.ops_list()? } else { Vec::new() };
                let expected = if self.cur.eat_punct('=') {
                    let (k, a) = self.env.ansatz(&ansatz).map_err(|m| err(apos, ErrorKind::Undeclared, m))?.clone();
                    let ctx = self.env.ctx(k).clone();
                    let names: Vec<String> = a.invariants.iter().map(|i| i.name.to_string()).collect();
                    let node = self.cur.expr()?;
                    let mode = Mode::Reduced { invariants: &names, phi: &a.phi };
                    Some(resolve(&self.env, &ctx, mode, &node)?)
                } else {
                    None
                };
                Directive::Reduce { system, ansatz, by, expected }
            }
            "verify-case" => Directive::VerifyCase(self.cur.word()?.0),
            "run-casebook" => Directive::RunCasebook,
            other => return Err(err(pos, ErrorKind::Syntax, format!("unknown statement `{other}`"))),
        };
        self.cur.expect_punct(';')?;
        Ok(d)
    }
}

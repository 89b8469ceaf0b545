//! Script printer; its output parses back to the same script.

use std::fmt::Write;

use qcond_core::expr::{Expr, JetContext};

use crate::script::{Directive, DeriveKind, Env, Expect, Script, Statement};

/// One term of an operator, `c*dx` style, with the sign split off.
fn field_term(c: &Expr, basis: &str, ctx: &JetContext) -> (bool, String) {
    let single = c.num().terms().len() == 1;
    let neg = single && c.num().leading_coeff_is_negative();
    let body = if neg { -c } else { c.clone() };
    if body.is_one() {
        return (neg, basis.to_string());
    }
    let bare = single && (body.den().is_one() || body.den().terms().len() == 1);
    if bare {
        (neg, format!("{}*{basis}", body.dsl(ctx)))
    } else {
        (neg, format!("({})*{basis}", body.dsl(ctx)))
    }
}

pub fn field(coeffs: &[Expr], ctx: &JetContext) -> String {
    let names = ctx.indep_names().iter().chain(ctx.dep_names());
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let (neg, term) = field_term(c, &format!("d{name}"), ctx);
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn expect(e: Expect) -> &'static str {
    match e {
        Expect::Pass => "",
        Expect::Fail => " expect fail",
    }
}

/// Directive text without the trailing `;`.
pub fn directive(d: &Directive, env: &Env) -> String {
    match d {
        Directive::CheckLie { system, ops, expect: e } => format!("check-lie {system} {}{}", ops.join(" "), expect(*e)),
        Directive::CheckQcond { system, ops, expect: e } => format!("check-qcond {system} {}{}", ops.join(" "), expect(*e)),
        Directive::Derive { kind, system, template } => {
            let k = match kind {
                DeriveKind::Lie => "lie",
                DeriveKind::Qcond => "qcond",
            };
            format!("derive {k} {system} {template}")
        }
        Directive::Bracket { a, b, expected } => {
            let mut s = format!("bracket {a} {b}");
            if let (Some(coeffs), Ok((k, _))) = (expected, env.op(a)) {
                write!(s, " = {}", field(coeffs, env.ctx(*k))).unwrap();
            }
            s
        }
        Directive::Reduce { system, ansatz, by, expected } => {
            let mut s = format!("reduce {system} {ansatz}");
            if !by.is_empty() {
                write!(s, " by {}", by.join(" ")).unwrap();
            }
            if let (Some(e), Ok((k, _))) = (expected, env.ansatz(ansatz)) {
                write!(s, " = {}", e.dsl(env.ctx(*k))).unwrap();
            }
            s
        }
        Directive::VerifyCase(id) => format!("verify-case {id}"),
        Directive::RunCasebook => "run-casebook".into(),
    }
}

fn statement(st: &Statement, env: &Env) -> String {
    let ctx = || env.current_ctx().expect("statement resolved in a context");
    match st {
        Statement::Vars(n) => format!("vars {};", n.join(" ")),
        Statement::Dep(n) => format!("dep {};", n.join(" ")),
        Statement::Param(n) => format!("param {};", n.join(" ")),
        Statement::Unknown { name, signature } => format!("unknown {name}({});", signature.join(", ")),
        Statement::Eq { system, lhs, rhs } => format!("eq {system}: {} = {};", lhs.dsl(ctx()), rhs.dsl(ctx())),
        Statement::Constraint { system, lhs, rhs } => {
            format!("constraint {system}: {} = {};", lhs.dsl(ctx()), rhs.dsl(ctx()))
        }
        Statement::Op { name, template, coeffs } => {
            format!("{} {name}: {};", if *template { "template" } else { "op" }, field(coeffs, ctx()))
        }
        Statement::Ansatz(a) => {
            let c = ctx();
            let mut s = format!("ansatz {}: {} = {} where ", a.name, a.dep, a.form.dsl(c));
            let invs: Vec<String> =
                a.invariants.iter().map(|i| format!("{} = {} solve {}", i.name, i.expr.dsl(c), i.solve)).collect();
            s.push_str(&invs.join(", "));
            if let Some(w) = &a.via {
                write!(s, " via {}", w.dsl(c)).unwrap();
            }
            s.push(';');
            s
        }
        Statement::Directive(d) => format!("{};", directive(d, env)),
    }
}

/// Canonical text of a script, one statement per line.
pub fn script(s: &Script) -> String {
    let mut env = Env::default();
    let mut out = String::new();
    for st in &s.statements {
        out.push_str(&statement(st, &env));
        out.push('\n');
        env.apply(st).expect("script was validated by the parser");
    }
    out
}

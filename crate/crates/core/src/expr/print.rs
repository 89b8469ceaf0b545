use alloc::format;
use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed};

use super::{Atom, Expr, FuncApp, JetContext, Monomial, Poly, Rat};

/// Output flavour.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// Short human-readable infix; derivatives of unknown functions with plain
    /// symbol arguments print as `theta_xu`.
    Compact,
    /// Infix notation accepted back by the script parser.
    Script,
    /// Parenthesised prefix notation, stable across runs.
    Prefix,
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    ctx: Option<&'a JetContext>,
    style: Style,
}

impl<'a> ExprDisplay<'a> {
    pub fn new(expr: &'a Expr, ctx: Option<&'a JetContext>, style: Style) -> Self {
        ExprDisplay { expr, ctx, style }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = Printer { ctx: self.ctx, style: self.style };
        f.write_str(&p.expr(self.expr))
    }
}

struct Printer<'a> {
    ctx: Option<&'a JetContext>,
    style: Style,
}

fn rat(c: &Rat) -> String {
    if c.is_integer() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl Printer<'_> {
    fn expr(&self, e: &Expr) -> String {
        if self.style == Style::Prefix {
            return self.prefix_expr(e);
        }
        let num = self.poly(e.num());
        if e.den().is_one() {
            return num;
        }
        let num = if e.num().terms().len() > 1 { format!("({num})") } else { num };
        let den = self.poly(e.den());
        let simple = e.den().terms().len() == 1 && {
            let (m, c) = &e.den().terms()[0];
            (c.is_one() && m.factors().len() == 1 && m.factors()[0].1 == 1) || m.is_one()
        };
        if simple {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }

    fn poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in p.terms().iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let c = c.abs();
            if m.is_one() {
                s.push_str(&rat(&c));
            } else if c.is_one() {
                s.push_str(&self.monomial(m));
            } else {
                s.push_str(&rat(&c));
                s.push('*');
                s.push_str(&self.monomial(m));
            }
        }
        s
    }

    fn monomial(&self, m: &Monomial) -> String {
        let mut s = String::new();
        for (k, (a, e)) in m.factors().iter().enumerate() {
            if k > 0 {
                s.push('*');
            }
            s.push_str(&self.atom(a));
            if *e > 1 {
                s.push_str(&format!("^{e}"));
            }
        }
        s
    }

    fn indep(&self, i: usize) -> String {
        match self.ctx {
            Some(c) if i < c.n() => c.indep_names()[i].clone(),
            _ => format!("x{i}"),
        }
    }

    fn atom(&self, a: &Atom) -> String {
        match a {
            Atom::Indep(i) => self.indep(*i),
            Atom::Jet(j, alpha) => match self.ctx {
                Some(c) if *j < c.m() && alpha.len() == c.n() => c.jet_name(*j, alpha),
                _ if alpha.is_zero() => format!("u{j}"),
                _ => format!("u{j}{:?}", alpha.counts()),
            },
            Atom::Param(p) => format!("{p}"),
            Atom::Func(f) => self.func(f),
            Atom::Exp(e) => format!("exp({})", self.expr(e)),
            Atom::Log(e) => format!("log({})", self.expr(e)),
            Atom::Int(e, v) => format!("Int({}, {})", self.expr(e), self.indep(*v)),
            Atom::Var(k) => format!("#{k}"),
        }
    }

    /// Short suffix such as `xu` when every argument is a plain symbol with a
    /// one-character name.
    fn short_suffix(&self, f: &FuncApp) -> Option<String> {
        let mut names = alloc::vec::Vec::new();
        for a in &f.args {
            let n = self.atom(a.as_atom().filter(|a| a.is_symbol())?);
            if n.chars().count() != 1 {
                return None;
            }
            names.push(n);
        }
        let mut s = String::new();
        for (k, &c) in f.deriv.iter().enumerate() {
            for _ in 0..c {
                s.push_str(&names[k]);
            }
        }
        Some(s)
    }

    fn func(&self, f: &FuncApp) -> String {
        let args = || {
            let parts: alloc::vec::Vec<String> = f.args.iter().map(|a| self.expr(a)).collect();
            parts.join(", ")
        };
        if self.style == Style::Compact {
            if let Some(s) = self.short_suffix(f) {
                return if s.is_empty() { format!("{}", f.name) } else { format!("{}_{s}", f.name) };
            }
        }
        if f.order() == 0 {
            format!("{}({})", f.name, args())
        } else {
            let d: alloc::vec::Vec<String> = f.deriv.iter().map(|c| format!("{c}")).collect();
            format!("{}[{}]({})", f.name, d.join(","), args())
        }
    }

    fn prefix_expr(&self, e: &Expr) -> String {
        let num = self.prefix_poly(e.num());
        if e.den().is_one() {
            num
        } else {
            format!("(/ {num} {})", self.prefix_poly(e.den()))
        }
    }

    fn prefix_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let terms: alloc::vec::Vec<String> = p.terms().iter().map(|(m, c)| self.prefix_term(m, c)).collect();
        if terms.len() == 1 {
            terms.into_iter().next().unwrap()
        } else {
            format!("(+ {})", terms.join(" "))
        }
    }

    fn prefix_term(&self, m: &Monomial, c: &Rat) -> String {
        let mut parts = alloc::vec::Vec::new();
        if !c.is_one() || m.is_one() {
            parts.push(rat(c));
        }
        for (a, k) in m.factors() {
            let s = self.prefix_atom(a);
            parts.push(if *k > 1 { format!("(^ {s} {k})") } else { s });
        }
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            format!("(* {})", parts.join(" "))
        }
    }

    fn prefix_atom(&self, a: &Atom) -> String {
        match a {
            Atom::Func(f) => {
                let mut s = format!("({}", f.name);
                if f.order() > 0 {
                    let d: alloc::vec::Vec<String> = f.deriv.iter().map(|c| format!("{c}")).collect();
                    s.push_str(&format!("[{}]", d.join(",")));
                }
                for a in &f.args {
                    s.push(' ');
                    s.push_str(&self.prefix_expr(a));
                }
                s.push(')');
                s
            }
            Atom::Exp(e) => format!("(exp {})", self.prefix_expr(e)),
            Atom::Log(e) => format!("(log {})", self.prefix_expr(e)),
            Atom::Int(e, v) => format!("(Int {} {})", self.prefix_expr(e), self.indep(*v)),
            other => self.atom(other),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn compact_and_script_forms() {
        let c = JetContext::new(&["t", "x"], &["u"]).unwrap();
        let args = alloc::vec![c.x(0), c.x(1), c.u(0)];
        let th_xu = Expr::func_deriv("theta", alloc::vec![0, 1, 1], args);
        let e = Expr::int(2) * &th_xu * c.jet(0, &[1]) - c.jet(0, &[1, 1]) + Expr::rational(1, 2);
        let compact = e.display(&c).to_string();
        assert!(compact.contains("theta_xu"), "{compact}");
        let script = e.dsl(&c).to_string();
        assert!(script.contains("theta[0,1,1](t, x, u)"), "{script}");
        let q = (c.x(1) + Expr::one()) / (c.x(0) * c.x(0));
        assert_eq!(q.display(&c).to_string(), "(x + 1)/(t^2)");
    }

    #[test]
    fn prefix_is_deterministic() {
        let c = JetContext::new(&["t", "x"], &["u"]).unwrap();
        let e = c.x(1) * c.x(1) - Expr::int(3) * c.u(0);
        assert_eq!(e.prefix(&c).to_string(), "(+ (^ x 2) (* -3 u))");
    }
}

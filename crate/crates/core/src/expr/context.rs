use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Atom, Expr, MultiIndex};
use crate::{Error, Result};

/// Names of the independent and dependent variables an expression lives over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JetContext {
    indep: Vec<String>,
    dep: Vec<String>,
    max_order: usize,
}

impl JetContext {
    pub fn new<S: AsRef<str>>(indep: &[S], dep: &[S]) -> Result<Self> {
        if indep.is_empty() {
            return Err(Error::Context("at least one independent variable is required".into()));
        }
        if dep.is_empty() {
            return Err(Error::Context("at least one dependent variable is required".into()));
        }
        let indep: Vec<String> = indep.iter().map(|s| s.as_ref().to_string()).collect();
        let dep: Vec<String> = dep.iter().map(|s| s.as_ref().to_string()).collect();
        for (k, name) in indep.iter().chain(dep.iter()).enumerate() {
            if indep.iter().chain(dep.iter()).skip(k + 1).any(|o| o == name) {
                return Err(Error::Context(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(JetContext { indep, dep, max_order: 4 })
    }

    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn n(&self) -> usize {
        self.indep.len()
    }

    pub fn m(&self) -> usize {
        self.dep.len()
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn indep_names(&self) -> &[String] {
        &self.indep
    }

    pub fn dep_names(&self) -> &[String] {
        &self.dep
    }

    pub fn indep_index(&self, name: &str) -> Option<usize> {
        self.indep.iter().position(|n| n == name)
    }

    pub fn dep_index(&self, name: &str) -> Option<usize> {
        self.dep.iter().position(|n| n == name)
    }

    pub fn x(&self, i: usize) -> Expr {
        Expr::indep(i)
    }

    pub fn u(&self, j: usize) -> Expr {
        Expr::jet(j, MultiIndex::zero(self.n()))
    }

    /// Jet coordinate from a list of differentiation variables.
    pub fn jet(&self, j: usize, vars: &[usize]) -> Expr {
        Expr::jet(j, MultiIndex::from_vars(self.n(), vars))
    }

    /// Looks up a variable by name: independent, then dependent.
    pub fn var(&self, name: &str) -> Result<Expr> {
        if let Some(i) = self.indep_index(name) {
            Ok(Expr::indep(i))
        } else if let Some(j) = self.dep_index(name) {
            Ok(self.u(j))
        } else {
            Err(Error::UnknownSymbol(name.into()))
        }
    }

    /// Whether jets can use the `u_tx` shorthand.
    pub(crate) fn short_jets(&self) -> bool {
        self.indep.iter().all(|n| n.chars().count() == 1)
    }

    pub fn jet_name(&self, j: usize, alpha: &MultiIndex) -> String {
        let base = &self.dep[j];
        if alpha.is_zero() {
            return base.clone();
        }
        if self.short_jets() {
            let mut s = format!("{base}_");
            for v in alpha.vars() {
                s.push_str(&self.indep[v]);
            }
            s
        } else {
            let mut s = format!("d({base}");
            for (i, &c) in alpha.counts().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                s.push(',');
                s.push_str(&self.indep[i]);
                if c > 1 {
                    s.push_str(&format!(",{c}"));
                }
            }
            s.push(')');
            s
        }
    }

    /// Checks every symbol of `e` against this context.
    pub fn validate(&self, e: &Expr) -> Result<()> {
        for atom in e.atoms_deep() {
            match &atom {
                Atom::Indep(i) if *i >= self.n() => {
                    return Err(Error::Context(format!("independent variable #{i} out of range")));
                }
                Atom::Jet(j, alpha) => {
                    if *j >= self.m() {
                        return Err(Error::Context(format!("dependent variable #{j} out of range")));
                    }
                    if alpha.len() != self.n() {
                        return Err(Error::Context(format!(
                            "multi-index of length {} in a context with {} independent variables",
                            alpha.len(),
                            self.n()
                        )));
                    }
                }
                Atom::Int(_, v) if *v >= self.n() => {
                    return Err(Error::Context(format!("integration variable #{v} out of range")));
                }
                Atom::Var(_) => return Err(Error::Context("internal placeholder in expression".into())),
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn requires_variables() {
        let none: [&str; 0] = [];
        assert!(JetContext::new(&none, &["u"]).is_err());
        assert!(JetContext::new(&["t"], &none).is_err());
        assert!(JetContext::new(&["t", "t"], &["u"]).is_err());
    }

    #[test]
    fn jet_names() {
        let ctx = JetContext::new(&["t", "x"], &["u"]).unwrap();
        assert_eq!(ctx.jet_name(0, &MultiIndex::from_vars(2, &[0, 1])), "u_tx");
        assert_eq!(ctx.jet_name(0, &MultiIndex::zero(2)), "u");
        let long = JetContext::new(&["y0", "y1"], &["Psi"]).unwrap();
        assert_eq!(long.jet_name(0, &MultiIndex::from_vars(2, &[1, 1])), "d(Psi,y1,2)");
    }

    #[test]
    fn validation_catches_foreign_symbols() {
        let ctx = JetContext::new(&["t", "x"], &["u"]).unwrap();
        assert!(ctx.validate(&(ctx.x(1) * ctx.u(0))).is_ok());
        assert!(ctx.validate(&Expr::indep(2)).is_err());
        assert!(ctx.validate(&Expr::jet(0, MultiIndex::zero(3))).is_err());
    }
}

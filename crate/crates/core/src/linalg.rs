//! Gaussian elimination over the field of canonical rational expressions.

use alloc::vec::Vec;

use crate::expr::{collect_coefficients, Atom, Expr};
use crate::{Error, Result};

/// Row echelon form in place; returns pivot columns.
fn echelon(m: &mut [Vec<Expr>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("pivot is nonzero");
        for k in c..cols {
            m[r][k] = &m[r][k] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let v = &m[i][k] - &(&f * &m[r][k]);
                    m[i][k] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form and pivot columns.
pub fn rref(rows: &[Vec<Expr>]) -> (Vec<Vec<Expr>>, Vec<usize>) {
    let mut m = rows.to_vec();
    let piv = echelon(&mut m);
    (m, piv)
}

pub fn rank(rows: &[Vec<Expr>]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).len()
}

/// Determinant of a square matrix.
pub fn det(m: &[Vec<Expr>]) -> Result<Expr> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Unsupported("determinant of a non-square matrix".into()));
    }
    let mut a = m.to_vec();
    let mut d = Expr::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(Expr::zero());
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d = &d * &piv;
        let inv = piv.recip()?;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for k in c..n {
                let v = &a[i][k] - &(&f * &a[c][k]);
                a[i][k] = v;
            }
        }
    }
    Ok(d)
}

/// Solves `A x = b` for a square nonsingular `A`.
pub fn solve(a: &[Vec<Expr>], b: &[Expr]) -> Result<Vec<Expr>> {
    let n = a.len();
    let mut m: Vec<Vec<Expr>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = echelon(&mut m);
    if piv.len() < n || piv.iter().any(|&c| c >= n) {
        return Err(Error::Singular("coefficient matrix has deficient rank".into()));
    }
    Ok(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Finds a particular solution of a linear system in `unknowns` whose
/// coefficients are arbitrary expressions free of the unknowns. Free
/// unknowns are set to zero; `None` means the system is inconsistent.
pub fn solve_linear_equations(eqs: &[Expr], unknowns: &[Atom]) -> Result<Option<Vec<Expr>>> {
    let n = unknowns.len();
    let mut m = Vec::with_capacity(eqs.len());
    for e in eqs {
        let parts = collect_coefficients(e, unknowns)?;
        let mut row = alloc::vec![Expr::zero(); n + 1];
        for (mono, c) in parts {
            if mono.is_one() {
                row[n] = -c;
                continue;
            }
            match mono.factors() {
                [(a, 1)] => {
                    let k = unknowns.iter().position(|u| u == a).expect("collected over unknowns");
                    row[k] = c;
                }
                _ => return Err(Error::Unsupported("equation is not linear in the unknowns".into())),
            }
        }
        m.push(row);
    }
    let piv = echelon(&mut m);
    if piv.contains(&n) {
        return Ok(None);
    }
    let mut x = alloc::vec![Expr::zero(); n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    Ok(Some(x))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::indep(0)
    }

    #[test]
    fn symbolic_determinant() {
        let m = alloc::vec![alloc::vec![x(), Expr::one()], alloc::vec![Expr::one(), x()]];
        assert_eq!(det(&m).unwrap(), &x() * &x() - Expr::one());
        let sing = alloc::vec![alloc::vec![x(), Expr::int(2) * x()], alloc::vec![Expr::one(), Expr::int(2)]];
        assert!(det(&sing).unwrap().is_zero());
        assert_eq!(rank(&sing), 1);
    }

    #[test]
    fn linear_solutions() {
        let a = alloc::vec![alloc::vec![Expr::one(), Expr::one()], alloc::vec![Expr::one(), -Expr::one()]];
        let s = solve(&a, &[Expr::int(2) * x(), Expr::zero()]).unwrap();
        assert_eq!(s, alloc::vec![x(), x()]);
        let c = Atom::Param("c".into());
        let ce = Expr::from_atom(c.clone());
        let got = solve_linear_equations(&[&ce * &x() - x()], &[c.clone()]).unwrap();
        assert_eq!(got, Some(alloc::vec![Expr::one()]));
        assert_eq!(solve_linear_equations(&[ce.clone() - Expr::one(), ce - Expr::int(2)], &[c]).unwrap(), None);
    }
}

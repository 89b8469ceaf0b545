//! Seeded generators of random test data: expressions, operators and exact
//! solutions of the heat equation.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Expr, JetContext, MultiIndex};
use crate::operators::VectorField;

/// Deterministic generator; the same seed gives the same sequence everywhere.
pub struct Gen(ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.random_range(lo..=hi)
    }

    pub fn nonzero(&mut self, lo: i64, hi: i64) -> i64 {
        loop {
            let k = self.int(lo, hi);
            if k != 0 {
                return k;
            }
        }
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.0.random_range(0..items.len())]
    }

    /// Sum of up to `terms` monomials of degree at most `deg` in `vars`.
    pub fn poly(&mut self, vars: &[Expr], terms: usize, deg: u32) -> Expr {
        let mut acc = Expr::zero();
        for _ in 0..self.0.random_range(1..=terms) {
            let mut m = Expr::int(self.nonzero(-3, 3));
            for _ in 0..self.0.random_range(0..=deg) {
                m = m * self.pick(vars).clone();
            }
            acc = acc + m;
        }
        acc
    }

    /// Random expression of jet order up to `order` with polynomial
    /// dependence on `(x, u)` and the jets.
    pub fn jet_expr(&mut self, ctx: &JetContext, order: usize) -> Expr {
        let base = base_vars(ctx);
        let mut jets: Vec<Expr> = Vec::new();
        for j in 0..ctx.m() {
            for a in MultiIndex::all_up_to(ctx.n(), order) {
                if !a.is_zero() {
                    jets.push(Expr::jet(j, a));
                }
            }
        }
        let mut acc = self.poly(&base, 2, 2);
        for _ in 0..self.0.random_range(1..=3) {
            let coeff = self.poly(&base, 2, 1);
            let mut m = self.pick(&jets).clone();
            if self.0.random_bool(0.3) {
                m = m * self.pick(&jets).clone();
            }
            acc = acc + coeff * m;
        }
        acc
    }

    /// Operator with random polynomial coefficients in `(x, u)`.
    pub fn field(&mut self, ctx: &JetContext) -> VectorField {
        let base = base_vars(ctx);
        let xi = (0..ctx.n()).map(|_| self.sparse(&base)).collect();
        let eta = (0..ctx.m()).map(|_| self.sparse(&base)).collect();
        VectorField::new(ctx, xi, eta).expect("coefficients live in (x, u)")
    }

    /// Operator whose first ξ coefficient is a nonzero constant.
    pub fn field_with_unit(&mut self, ctx: &JetContext) -> VectorField {
        let q = self.field(ctx);
        let mut xi = q.xi().to_vec();
        xi[0] = Expr::int(self.nonzero(-2, 2));
        VectorField::new(ctx, xi, q.eta().to_vec()).unwrap()
    }

    fn sparse(&mut self, base: &[Expr]) -> Expr {
        if self.0.random_bool(0.25) {
            Expr::zero()
        } else {
            self.poly(base, 3, 2)
        }
    }

    /// Nonzero function of `(x, u)`: a nonzero constant plus a square.
    pub fn lambda(&mut self, ctx: &JetContext) -> Expr {
        let base = base_vars(ctx);
        let p = self.poly(&base, 2, 1);
        Expr::int(self.int(1, 3)) + &p * &p
    }

    /// Random exact solution of `z_t = z_xx` over `(t, x)` given as
    /// expressions: a combination of boosted heat polynomials
    /// `v_n(x + 2kt, t)·exp(k²t + kx)`.
    pub fn heat_solution(&mut self, t: &Expr, x: &Expr) -> Expr {
        let mut acc = Expr::zero();
        for _ in 0..self.0.random_range(1..=3) {
            let k = self.int(-1, 1);
            acc = acc + self.boosted_term(t, x, k);
        }
        acc
    }

    /// Like [`Gen::heat_solution`] with every term sharing the boost `k`.
    pub fn heat_solution_boosted(&mut self, t: &Expr, x: &Expr, k: i64) -> Expr {
        let mut acc = Expr::zero();
        for _ in 0..self.0.random_range(1..=3) {
            acc = acc + self.boosted_term(t, x, k);
        }
        acc
    }

    fn boosted_term(&mut self, t: &Expr, x: &Expr, k: i64) -> Expr {
        let n = self.0.random_range(0..=3u32);
        let c = Expr::int(self.nonzero(-3, 3));
        let xs = x + &(Expr::int(2 * k) * t);
        let e = Expr::exp(Expr::int(k * k) * t + Expr::int(k) * x);
        c * heat_polynomial(n, &xs, t) * e
    }
}

fn base_vars(ctx: &JetContext) -> Vec<Expr> {
    (0..ctx.n()).map(|i| ctx.x(i)).chain((0..ctx.m()).map(|j| ctx.u(j))).collect()
}

/// Heat polynomial `v_n(x, t) = Σ_k n!/(k!(n−2k)!) x^{n−2k} t^k`.
pub fn heat_polynomial(n: u32, x: &Expr, t: &Expr) -> Expr {
    let fact = |m: u32| (1..=m as i64).product::<i64>();
    let mut acc = Expr::zero();
    for k in 0..=n / 2 {
        let c = fact(n) / (fact(k) * fact(n - 2 * k));
        acc = acc + Expr::int(c) * x.pow((n - 2 * k) as i32) * t.pow(k as i32);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Symbol;

    #[test]
    fn heat_solutions_solve_heat() {
        let (t, x) = (Expr::indep(0), Expr::indep(1));
        let mut g = Gen::new(7);
        for _ in 0..20 {
            let z = g.heat_solution(&t, &x);
            let zt = z.partial(&Symbol::Indep(0));
            let zxx = z.partial(&Symbol::Indep(1)).partial(&Symbol::Indep(1));
            assert!((zt - zxx).is_zero(), "{z:?}");
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let ctx = JetContext::new(&["t", "x"], &["u"]).unwrap();
        let a = Gen::new(3).jet_expr(&ctx, 2);
        let b = Gen::new(3).jet_expr(&ctx, 2);
        assert_eq!(a, b);
    }
}

use alloc::format;
use alloc::vec::Vec;

use super::heat::{heat_context, heat_system, theorem4_map};
use super::transfer::{h_of_t, transfer_context, transfer_system, TRANSFER_READING};
use super::CaseReport;
use crate::expr::{Expr, JetContext, MultiIndex};
use crate::invariance::{is_lie_symmetry, is_qcond_symmetry, m_residual, PdeSystem, SolvedEquation};
use crate::operators::{apply_equivalence, evolutionary_identity_residual, InvolutiveSet, VectorField};
use crate::random::Gen;
use crate::reduction::{joint_system_check, phi_application, reduce, Ansatz, Invariant};
use crate::Result;

fn tx() -> JetContext {
    JetContext::new(&["t", "x"], &["u"]).expect("valid names")
}

fn solved_for_ut(c: &JetContext, rhs: Expr) -> Result<PdeSystem> {
    PdeSystem::single(c.clone(), SolvedEquation::new("L", 0, MultiIndex::from_vars(2, &[0]), rhs)?)
}

/// `Q̄L − ξ^i D_i L − Σ ∂L/∂u_α D_α(Qu)` on random pairs of orders up to 3.
pub fn master_identity(seed: u64, count: usize) -> Result<CaseReport> {
    let mut rep = CaseReport::new("identity", "prolongation identity on random (L, Q)");
    let c = tx();
    let mut gen = Gen::new(seed);
    let mut bad = Vec::new();
    for i in 0..count {
        let order = gen.int(1, 3) as usize;
        let l = gen.jet_expr(&c, order);
        let q = gen.field(&c);
        if !evolutionary_identity_residual(&l, &q).is_zero() {
            bad.push(i);
        }
    }
    rep.check(format!("{count} random pairs"), bad.is_empty(), format!("{} nonzero residuals", bad.len()));
    Ok(rep)
}

/// Three ways invariance, compatibility and reduction come apart.
pub fn counterexamples() -> Result<CaseReport> {
    let mut rep = CaseReport::new("counterexamples", "invariance, compatibility and reduction are independent");
    let c = tx();
    let (t, x, u) = (c.x(0), c.x(1), c.u(0));
    let (ut, ux, uxx) = (c.jet(0, &[0]), c.jet(0, &[1]), c.jet(0, &[1, 1]));

    // t u_t + x u_x = 1 under t dt + x dx
    let sys = solved_for_ut(&c, (Expr::one() - &x * &ux) / &t)?;
    let q = VectorField::new(&c, alloc::vec![t.clone(), x.clone()], alloc::vec![Expr::zero()])?;
    rep.check("t dt + x dx is a Lie symmetry of t u_t + x u_x = 1", is_lie_symmetry(&sys, &q)?, "");
    let om = &x / &t;
    let a = Ansatz {
        invariants: alloc::vec![Invariant { name: "w".into(), expr: om.clone(), solve_for: 1 }],
        phi: "phi".into(),
        form: Expr::func("phi", alloc::vec![om]),
        w: u.clone(),
    };
    let r = reduce(&sys, &a)?;
    rep.check("its reduction is 0 = 1", r.is_inconsistent() && r.equations == alloc::vec![Expr::one()], "");

    // u_t + u_xx − u + t(u_x − u) = 0 with u_t = 0
    let sys = solved_for_ut(&c, &u - &uxx - &t * (&ux - &u))?;
    let dt = VectorField::d_indep(&c, 0);
    let cand = Expr::param("C") * Expr::exp(x.clone());
    rep.check(
        "u = C exp(x) solves u_t + u_xx - u + t(u_x - u) = 0 together with u_t = 0",
        joint_system_check(&sys, &InvolutiveSet::single(dt.clone()), &cand)?,
        "",
    );
    rep.check("dt is not a Lie symmetry of it", !is_lie_symmetry(&sys, &dt)?, "");

    // u_t + (u_x + t u_xx)(u_xx + 1) = 0 with u = phi(x)
    let _ = ut;
    let sys = solved_for_ut(&c, -((&ux + &t * &uxx) * (&uxx + Expr::one())))?;
    let a = Ansatz {
        invariants: alloc::vec![Invariant { name: "w".into(), expr: x.clone(), solve_for: 1 }],
        phi: "phi".into(),
        form: Expr::func("phi", alloc::vec![x.clone()]),
        w: u.clone(),
    };
    let r = reduce(&sys, &a)?;
    let want = phi_application(&a, alloc::vec![2]) + Expr::one();
    let got = r.reduced_equation().cloned();
    rep.check(
        "u = phi(x) reduces u_t + (u_x + t u_xx)(u_xx + 1) = 0 to phi'' + 1 = 0",
        got.as_ref() == Some(&want),
        got.map(|e| format!("{}", e.display(&c))).unwrap_or_default(),
    );
    rep.check(
        "dt is not a conditional symmetry of it",
        !is_qcond_symmetry(&sys, &InvolutiveSet::single(dt))?,
        "",
    );
    Ok(rep)
}

/// The invariance condition restricted to the full manifold of the equation,
/// the surface condition and their differential consequences vanishes for
/// any operator.
pub fn definition1_degeneracy(seed: u64, count: usize) -> Result<CaseReport> {
    let mut rep = CaseReport::new("def1", "invariance on the full manifold is an identity");
    let c = tx();
    let base = alloc::vec![c.x(0), c.x(1), c.u(0), c.jet(0, &[1])];
    let mut gen = Gen::new(seed ^ 0xdef1);
    let mut zero = 0;
    let mut failures = Vec::new();
    for i in 0..count {
        let a = gen.lambda(&c);
        let b = gen.poly(&base, 3, 2);
        let sys = solved_for_ut(&c, a * c.jet(0, &[1, 1]) + b)?;
        let q = gen.field_with_unit(&c);
        match m_residual(&sys, &q) {
            Ok(r) if r.is_zero() => zero += 1,
            Ok(r) => failures.push(format!("#{i}: {}", r.display(&c))),
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    rep.check(format!("{count} random (equation, operator) pairs"), zero == count, format!("{zero} vanish"));
    for f in failures {
        rep.note(f);
    }
    Ok(rep)
}

/// Conditional invariance survives `Q ↦ λQ` for random nonvanishing `λ`.
pub fn lemma_check(seed: u64, count: usize) -> Result<CaseReport> {
    let mut rep = CaseReport::new("lemma", "conditional invariance is kept under equivalence");
    let hc = heat_context();
    let heat = heat_system();
    let (t, x, u) = (hc.x(0), hc.x(1), hc.u(0));
    let galilei = VectorField::new(&hc, alloc::vec![Expr::zero(), Expr::one()], alloc::vec![-(&x * &u) / (Expr::int(2) * &t)])?;
    let e = Expr::exp(&t + &x);
    let g = theorem4_map([&Expr::one(), &x, &e])?;
    let thm4 = VectorField::new(&hc, alloc::vec![Expr::one(), g[0].clone()], alloc::vec![&g[1] * &u + &g[2]])?;
    let tc = transfer_context();
    let transfer = transfer_system(&h_of_t(&tc), TRANSFER_READING)?;
    let (tt, tx_, tu) = (tc.x(0), tc.x(1), tc.u(0));
    let xop = VectorField::new(&tc, alloc::vec![Expr::one(), (h_of_t(&tc) - Expr::one()) / &tx_], alloc::vec![Expr::zero()])?;
    let gt = VectorField::new(
        &tc,
        alloc::vec![Expr::zero(), Expr::int(2) * &tt + Expr::param("A")],
        alloc::vec![-(&tx_ * &tu)],
    )?;
    let cases: Vec<(&str, &PdeSystem, &JetContext, VectorField)> = alloc::vec![
        ("heat, dx - xu/(2t) du", &heat, &hc, galilei),
        ("heat, dt + exp(t + x) du", &heat, &hc, thm4),
        ("transfer, X", &transfer, &tc, xop),
        ("transfer, G~", &transfer, &tc, gt),
    ];
    let mut gen = Gen::new(seed ^ 0x1e33a);
    for (label, sys, ctx, q) in cases {
        let base = is_qcond_symmetry(sys, &InvolutiveSet::single(q.clone()))?;
        let mut kept = 0;
        for _ in 0..count {
            let lambda = gen.lambda(ctx);
            let scaled = apply_equivalence(&InvolutiveSet::single(q.clone()), &[alloc::vec![lambda]])?;
            if is_qcond_symmetry(sys, &scaled)? {
                kept += 1;
            }
        }
        rep.check(format!("{label}: conditional symmetry"), base, "");
        rep.check(format!("{label}: kept under {count} random multipliers"), kept == count, format!("{kept} kept"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::println;

    fn show(r: Result<CaseReport>) {
        let r = r.unwrap();
        println!("{}", r.render());
        assert!(r.passed());
    }

    #[test]
    fn identity() {
        show(master_identity(7, 30));
    }

    #[test]
    fn triptych() {
        show(counterexamples());
    }

    #[test]
    fn def1() {
        show(definition1_degeneracy(7, 20));
    }

    #[test]
    fn lemma() {
        show(lemma_check(7, 3));
    }
}

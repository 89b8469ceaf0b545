use proptest::prelude::*;
use qcond_core::expr::{collect_coefficients, poly_gcd, recombine, Atom, Expr, JetContext, MultiIndex, RuleSet};
use qcond_core::operators::{evolutionary_identity_residual, lie_bracket, prolong, VectorField};
use qcond_core::random::Gen;

fn ctx() -> JetContext {
    JetContext::new(&["t", "x"], &["u"]).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let c = ctx();
        let e = Gen::new(seed).jet_expr(&c, 2);
        prop_assert_eq!(e.total_derivative(0).total_derivative(1), e.total_derivative(1).total_derivative(0));
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), i in 0usize..2) {
        let c = ctx();
        let mut g = Gen::new(seed);
        let (a, b) = (g.jet_expr(&c, 2), g.jet_expr(&c, 1));
        let lhs = (&a * &b).total_derivative(i);
        let rhs = a.total_derivative(i) * &b + &a * b.total_derivative(i);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn arithmetic_round_trips(seed in any::<u64>()) {
        let c = ctx();
        let mut g = Gen::new(seed);
        let (a, b) = (g.jet_expr(&c, 1), g.lambda(&c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a.clone());
        prop_assert_eq!(a.checked_div(&b).unwrap() * &b, a.clone());
        prop_assert_eq!(a.normalize(), a);
    }

    #[test]
    fn gcd_finds_common_factor(seed in any::<u64>()) {
        let c = ctx();
        let vars = [c.x(0), c.x(1), c.u(0)];
        let mut g = Gen::new(seed);
        let (a, b, f) = (g.poly(&vars, 3, 2), g.poly(&vars, 3, 2), g.poly(&vars, 2, 2));
        prop_assume!(!f.is_constant() && !a.is_zero() && !b.is_zero());
        let h = poly_gcd((&a * &f).num(), (&b * &f).num());
        prop_assert!(h.exact_div(f.num()).is_some());
        prop_assert!((&a * &f).num().exact_div(&h).is_some());
        prop_assert!((&b * &f).num().exact_div(&h).is_some());
    }

    #[test]
    fn collect_then_recombine(seed in any::<u64>()) {
        let c = ctx();
        let e = Gen::new(seed).jet_expr(&c, 2);
        let vars: Vec<Atom> = e.jets().into_iter().map(|(j, a)| Atom::Jet(j, a)).collect();
        let parts = collect_coefficients(&e, &vars).unwrap();
        prop_assert_eq!(recombine(&parts), e);
    }

    #[test]
    fn empty_rules_are_identity(seed in any::<u64>()) {
        let c = ctx();
        let e = Gen::new(seed).jet_expr(&c, 3);
        prop_assert_eq!(RuleSet::empty().apply(&e).unwrap(), e);
    }

    #[test]
    fn prolongation_matches_formula(seed in any::<u64>()) {
        let c = ctx();
        let q = Gen::new(seed).field(&c);
        let p = prolong(&q, 2);
        let qu = q.characteristic(0);
        for alpha in MultiIndex::all_up_to(2, 2) {
            let mut want = qu.total_derivative_multi(&alpha);
            for i in 0..2 {
                want = want + &q.xi()[i] * Expr::jet(0, alpha.incremented(i));
            }
            prop_assert_eq!(p.coefficient(0, &alpha).cloned().unwrap(), want);
        }
    }

    #[test]
    fn prolongation_is_linear(seed in any::<u64>()) {
        let c = ctx();
        let mut g = Gen::new(seed);
        let (q1, q2) = (g.field(&c), g.field(&c));
        let sum = prolong(&q1.add(&q2), 2);
        let (p1, p2) = (prolong(&q1, 2), prolong(&q2, 2));
        for alpha in MultiIndex::all_up_to(2, 2) {
            let lhs = sum.coefficient(0, &alpha).cloned().unwrap();
            let rhs = p1.coefficient(0, &alpha).unwrap() + p2.coefficient(0, &alpha).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi(seed in any::<u64>()) {
        let c = ctx();
        let mut g = Gen::new(seed);
        let (a, b, d) = (g.field(&c), g.field(&c), g.field(&c));
        prop_assert!(lie_bracket(&a, &b).add(&lie_bracket(&b, &a)).is_zero());
        let jac = lie_bracket(&a, &lie_bracket(&b, &d))
            .add(&lie_bracket(&b, &lie_bracket(&d, &a)))
            .add(&lie_bracket(&d, &lie_bracket(&a, &b)));
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn evolutionary_identity(seed in any::<u64>()) {
        let c = ctx();
        let mut g = Gen::new(seed);
        let l = g.jet_expr(&c, 3);
        let q: VectorField = g.field(&c);
        prop_assert!(evolutionary_identity_residual(&l, &q).is_zero());
    }
}

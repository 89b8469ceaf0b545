use proptest::prelude::*;
use qcond::script::Statement;
use qcond::syntax::ErrorKind;
use qcond::{expression, parse, run, Options, Status, CASEBOOK};
use qcond_core::expr::{Expr, JetContext};
use qcond_core::random::Gen;

const HEAT: &str = "vars t x; dep u; eq heat: d(u,t) = d(u,x,2);";

fn ctx() -> JetContext {
    JetContext::new(&["t", "x"], &["u"]).unwrap()
}

fn op_coeffs(src: &str, name: &str) -> Vec<Expr> {
    let s = parse(src).unwrap();
    s.statements
        .iter()
        .find_map(|st| match st {
            Statement::Op { name: n, coeffs, .. } if n == name => Some(coeffs.clone()),
            _ => None,
        })
        .unwrap()
}

#[test]
fn heat_equation_declaration() {
    let s = parse(HEAT).unwrap();
    let c = ctx();
    assert_eq!(s.statements.len(), 3);
    let Statement::Eq { system, lhs, rhs } = &s.statements[2] else { panic!() };
    assert_eq!(system, "heat");
    assert_eq!(*lhs, c.jet(0, &[0]));
    assert_eq!(*rhs, c.jet(0, &[1, 1]));
    assert_eq!(s, parse("vars t x; dep u; eq heat: u_t = u_xx;").unwrap());
}

#[test]
fn galilei_operator() {
    let c = ctx();
    let q = op_coeffs("vars t x; dep u; op G: t*dx - (1/2)*x*u*du;", "G");
    assert_eq!(q, vec![Expr::zero(), c.x(0), Expr::rational(-1, 2) * c.x(1) * c.u(0)]);
}

#[test]
fn template_with_unknown_function() {
    let c = ctx();
    let q = op_coeffs("vars t x; dep u; unknown theta(t,x,u); op Q: dx + theta*du;", "Q");
    let theta = Expr::func("theta", vec![c.x(0), c.x(1), c.u(0)]);
    assert_eq!(q, vec![Expr::zero(), Expr::one(), theta]);
}

#[test]
fn derivative_spellings_agree() {
    let s = parse("vars t x; dep u; unknown theta(t, x, u);").unwrap();
    let a = expression(&s, "theta_xu").unwrap();
    assert_eq!(a, expression(&s, "d(theta, x, u)").unwrap());
    assert_eq!(a, expression(&s, "theta[0,1,1](t, x, u)").unwrap());
    assert_eq!(expression(&s, "u_xxt").unwrap(), expression(&s, "d(u,x,2,t)").unwrap());
    assert_eq!(expression(&s, "x^-2").unwrap(), expression(&s, "1/x^2").unwrap());
}

#[test]
fn antiderivative_literal() {
    let s = parse("vars t x; dep u; unknown h(t); eq e: u_t = u_xx + Int(h - 1, t)*u;").unwrap();
    let text = qcond::print::script(&s);
    assert!(text.contains("Int(h(t) - 1, t)"), "{text}");
    assert_eq!(parse(&text).unwrap(), s);
}

#[test]
fn syntax_error_has_position() {
    let e = parse("vars t x;\ndep u;\neq heat: u_t = ;").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Syntax);
    assert_eq!((e.pos.line, e.pos.col), (3, 16));
    assert!(e.to_string().starts_with("3:16: syntax error"), "{e}");
}

#[test]
fn undeclared_symbol() {
    let e = parse("vars t x; dep u;\n eq heat: u_t = v_xx;").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Undeclared);
    assert_eq!((e.pos.line, e.pos.col), (2, 17));
    let e = parse("vars t x; dep u; unknown f(t, y);").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Undeclared);
}

#[test]
fn arity_mismatch() {
    let e = parse("vars t x; dep u; unknown theta(t, x, u); op Q: dx + theta(t, x)*du;").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Arity);
    let e = parse("vars t x; dep u; unknown f(t, x); eq e: u_t = f[1](t, x);").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Arity);
}

#[test]
fn non_linear_operator_is_rejected() {
    let e = parse("vars t x; dep u; op Q: dx*dx;").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Semantic);
    assert!(parse("vars t x; dep u; op Q: dx + 1;").is_err());
}

#[test]
fn directives_need_declared_objects() {
    assert!(parse("vars t x; dep u; eq heat: u_t = u_xx; check-lie heat G;").is_err());
    assert!(parse("verify-case nope;").is_err());
    assert!(parse("vars t x; dep u; check-lie heat Dt;").is_err());
}

#[test]
fn casebook_round_trip() {
    let s = parse(CASEBOOK).unwrap();
    let text = qcond::print::script(&s);
    let again = parse(&text).unwrap();
    assert_eq!(again, s);
    assert_eq!(qcond::print::script(&again), text);
}

#[test]
fn check_lie_galilei_passes_with_zero_residual() {
    let s = parse(&format!("{HEAT} op G: t*dx - (1/2)*x*u*du; check-lie heat G;")).unwrap();
    let out = run(&s, &Options::default());
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].status, Status::Pass);
    assert_eq!(out[0].residuals, vec!["0"]);
}

#[test]
fn derive_template1_prints_three_equations() {
    let src = format!(
        "{HEAT} unknown g1(t, x); unknown g2(t, x); unknown g3(t, x);
         template template1: dt + g1*dx + (g2*u + g3)*du;
         derive qcond heat template1;"
    );
    let out = run(&parse(&src).unwrap(), &Options::default());
    assert_eq!(out[0].status, Status::Pass);
    assert_eq!(out[0].residuals.len(), 3);
    assert_eq!(out[0].lines[0], "3 determining equations");
}

#[test]
fn failed_check_sets_exit_code() {
    let src = format!("{HEAT} op Q: x*dt; check-lie heat Q; check-lie heat Q expect fail;");
    let out = run(&parse(&src).unwrap(), &Options::default());
    assert_eq!(out[0].status, Status::Fail);
    assert_eq!(out[1].status, Status::Pass);
    assert_eq!(qcond::exit_code(&out), 1);
    assert_eq!(qcond::exit_code(&out[1..]), 0);
}

#[test]
fn engine_errors_name_the_directive() {
    let src = format!("{HEAT} op Dt: dt; ansatz A: u = phi(w) where w = t solve x; check-lie heat Dt; reduce heat A;");
    let out = run(&parse(&src).unwrap(), &Options::default());
    assert_eq!(out[1].status, Status::Error);
    let text = out[1].render();
    assert!(text.contains("error in directive 002"), "{text}");
    assert_eq!(qcond::exit_code(&out), 1);
}

#[test]
fn bracket_expectation() {
    let src = format!("{HEAT} op Dt: dt; op G: t*dx - 1/2*x*u*du; bracket Dt G = dx; bracket G Dt = dx;");
    let out = run(&parse(&src).unwrap(), &Options::default());
    assert_eq!(out[0].status, Status::Pass);
    assert_eq!(out[1].status, Status::Fail);
}

#[test]
fn names_are_resolved_at_the_directive() {
    let src = format!("{HEAT} op Q: dt; check-lie heat Q; op Q: x*dt; check-lie heat Q;");
    let out = run(&parse(&src).unwrap(), &Options::default());
    assert_eq!(out[0].status, Status::Pass);
    assert_eq!(out[1].status, Status::Fail);
}

#[test]
fn several_contexts() {
    let src = "vars t x; dep u; eq heat: u_t = u_xx; op G: t*dx - 1/2*x*u*du;
               vars t y; dep v; eq other: v_t = v_yy; op H: t*dy - 1/2*y*v*dv;
               check-lie heat G; check-lie other H;";
    let out = run(&parse(src).unwrap(), &Options::default());
    assert!(out.iter().all(|o| o.status == Status::Pass));
    assert!(parse("vars t x; dep u; op G: dx; vars t y; dep v; eq e: v_t = v_yy; check-lie e G;").is_err());
}

#[test]
fn parallel_merge_is_deterministic() {
    let s = parse(CASEBOOK).unwrap();
    let seq = run(&s, &Options { seed: 7, ..Options::default() });
    let par = run(&s, &Options { seed: 7, parallel: true, ..Options::default() });
    assert_eq!(seq, par);
    assert_eq!(qcond::render_all(&seq), qcond::render_all(&par));
}

#[test]
fn summary_lines_are_json() {
    let src = format!("{HEAT} op G: t*dx - 1/2*x*u*du; op Q: x*dt; check-lie heat G; check-lie heat Q;");
    let out = run(&parse(&src).unwrap(), &Options::default());
    let text = qcond::summary(&out);
    let recs: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0]["id"], "001");
    assert_eq!(recs[0]["directive"], "check-lie heat G");
    assert_eq!(recs[0]["status"], "pass");
    assert_eq!(recs[1]["status"], "fail");
    assert_ne!(recs[1]["residuals"][0], "0");
}

#[test]
fn run_casebook_directive() {
    let out = run(&parse("run-casebook;").unwrap(), &Options { seed: 3, ..Options::default() });
    assert_eq!(out[0].status, Status::Pass, "{}", out[0].render());
}

#[test]
fn reduce_reports_the_reduced_equation() {
    let src = format!("{HEAT} op Dx: dx; ansatz A: u = phi(w) where w = t solve t; reduce heat A by Dx = phi[1](w);");
    let out = run(&parse(&src).unwrap(), &Options::default());
    assert_eq!(out[0].status, Status::Pass, "{}", out[0].render());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn printed_equations_parse_back(seed in any::<u64>(), order in 1usize..=3) {
        let c = ctx();
        let mut gen = Gen::new(seed);
        let rhs = gen.jet_expr(&c, order);
        let q = gen.field(&c);
        let src = format!(
            "vars t x; dep u; eq e: u_tttt = {}; op Q: {};",
            rhs.dsl(&c),
            qcond::print::field(&q.coefficients().cloned().collect::<Vec<_>>(), &c)
        );
        let s = parse(&src).unwrap();
        let Statement::Eq { rhs: got, .. } = &s.statements[2] else { panic!() };
        prop_assert_eq!(got, &rhs);
        let Statement::Op { coeffs, .. } = &s.statements[3] else { panic!() };
        prop_assert_eq!(coeffs, &q.coefficients().cloned().collect::<Vec<_>>());
        prop_assert_eq!(parse(&qcond::print::script(&s)).unwrap(), s);
    }
}


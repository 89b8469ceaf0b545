//! The acceptance gate: one line per criterion, then a single assertion.

use std::io::Write;

use qcond::{parse, render_all, run, summary, Options, CASEBOOK};
use qcond_core::casebook::{self, CaseReport};
use qcond_core::invariance::{equal_up_to_factor, qcond_determining_system};

const SEED: u64 = 2024;

struct Gate {
    results: Vec<(usize, bool)>,
}

impl Gate {
    fn record(&mut self, n: usize, name: &str, outcome: Result<(bool, String), String>) {
        let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        let line = format!("criterion {n:>2} [{}] {name}{}{detail}\n", if ok { "PASS" } else { "FAIL" }, if detail.is_empty() { "" } else { ": " });
        // straight to the terminal so the lines show without --nocapture
        let mut out = std::io::stdout().lock();
        out.write_all(line.as_bytes()).unwrap();
        out.flush().unwrap();
        self.results.push((n, ok));
    }
}

fn report(r: qcond_core::Result<CaseReport>) -> Result<CaseReport, String> {
    r.map_err(|e| e.to_string())
}

fn failures(r: &CaseReport) -> String {
    let bad: Vec<&str> = r.checks.iter().filter(|c| !c.ok).map(|c| c.label.as_str()).collect();
    if bad.is_empty() {
        format!("{} checks", r.checks.len())
    } else {
        format!("failed: {}", bad.join("; "))
    }
}

fn case(r: qcond_core::Result<CaseReport>) -> Result<(bool, String), String> {
    let r = report(r)?;
    Ok((r.passed(), failures(&r)))
}

fn branch1() -> Result<(bool, String), String> {
    let rep = report(casebook::theorem1_determining_systems())?;
    let sys = casebook::heat_system();
    let ds = qcond_determining_system(&sys, &casebook::template1(sys.ctx())).map_err(|e| e.to_string())?;
    // the printed system, written in the script language
    let decls = parse("vars t x; dep u; unknown g1(t, x); unknown g2(t, x); unknown g3(t, x);").map_err(|e| e.to_string())?;
    let printed = [
        "g1_t - g1_xx + 2*g1_x*g1 + 2*g2_x",
        "g2_t - g2_xx + 2*g1_x*g2",
        "g3_t - g3_xx + 2*g1_x*g3",
    ];
    let mut matched = 0;
    for (k, text) in printed.iter().enumerate() {
        let want = qcond::expression(&decls, text).map_err(|e| e.to_string())?;
        if ds.equations().get(k).and_then(|e| equal_up_to_factor(e, &want)).is_some() {
            matched += 1;
        }
    }
    Ok((
        ds.len() == 3 && matched == 3 && rep.passed(),
        format!("{} equations, {matched}/3 match the printed system up to a constant factor", ds.len()),
    ))
}

fn branch2() -> Result<(bool, String), String> {
    let sys = casebook::heat_system();
    let ds = qcond_determining_system(&sys, &casebook::template2(sys.ctx())).map_err(|e| e.to_string())?;
    let oracle = casebook::theta_compatibility_oracle(sys.ctx());
    let same = ds.len() == 1 && equal_up_to_factor(&ds.equations()[0], &oracle).is_some();
    let rep = report(casebook::theorem1_determining_systems())?;
    let diff = rep.notes.iter().find(|n| n.contains("printed")).cloned().unwrap_or_default();
    Ok((same, format!("derived equation equals the oracle; {diff}")))
}

fn transfer_reading() -> Result<(bool, String), String> {
    let rep = report(casebook::theorem6_transfer_algebra())?;
    let valid: Vec<&String> = rep.notes.iter().filter(|n| n.ends_with("validates")).collect();
    Ok((
        rep.passed() && valid.len() == 1,
        format!("{}; {}", failures(&rep), valid.first().map(|s| s.as_str()).unwrap_or("no reading validates")),
    ))
}

fn cli_round_trip() -> Result<(bool, String), String> {
    let s = parse(CASEBOOK).map_err(|e| e.to_string())?;
    let text = qcond::print::script(&s);
    let again = parse(&text).map_err(|e| e.to_string())?;
    let round_trip = again == s && qcond::print::script(&again) == text;
    let opts = Options { seed: SEED, ..Options::default() };
    let first = run(&s, &opts);
    let second = run(&again, &Options { parallel: true, ..opts });
    let identical = render_all(&first) == render_all(&second) && summary(&first) == summary(&second);
    let all_pass = first.iter().all(|o| o.passed());
    Ok((
        round_trip && identical && all_pass,
        format!(
            "round trip {}, reports {}, {}/{} directives pass",
            if round_trip { "exact" } else { "differs" },
            if identical { "byte-identical" } else { "differ" },
            first.iter().filter(|o| o.passed()).count(),
            first.len()
        ),
    ))
}

#[test]
fn acceptance() {
    let mut g = Gate { results: Vec::new() };
    g.record(1, "evolutionary identity on 100 random pairs", case(casebook::master_identity(SEED, 100)));
    g.record(2, "heat Lie algebra and commutator table", case(casebook::heat_lie_algebra_check()));
    g.record(3, "heat determining system, template 1", branch1());
    g.record(4, "theta equation equals the compatibility oracle", branch2());
    g.record(5, "symmetries of the determining systems", case(casebook::theorems2_3_symmetry_checks()));
    g.record(6, "nonlocal map on 20 random triples and the fixed ones", case(casebook::theorem4_random(SEED, 20)));
    g.record(7, "hodograph witnesses on 20 random heat solutions", case(casebook::theorem5_random(SEED, 20)));
    g.record(8, "transfer equation: one reading, three algebras", transfer_reading());
    g.record(9, "transfer conditional symmetries and solution families", case(casebook::transfer_qcond_and_solutions(2)));
    g.record(10, "counterexample triptych", case(casebook::counterexamples()));
    g.record(11, "restriction to the full manifold vanishes on 20 random pairs", case(casebook::definition1_degeneracy(SEED, 20)));
    g.record(12, "conditional invariance kept under equivalence", case(casebook::lemma_check(SEED, 5)));
    g.record(13, "casebook round trip and reproducible reports", cli_round_trip());
    let failed: Vec<usize> = g.results.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

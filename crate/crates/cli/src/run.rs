//! Directive execution and report rendering.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use qcond_core::casebook::{run_all, run_case, CaseReport};
use qcond_core::expr::{Expr, JetContext};
use qcond_core::invariance::{equal_up_to_factor, lie_determining_system, lie_residual, qcond_determining_system, qcond_residual};
use qcond_core::operators::lie_bracket;
use qcond_core::reduction::reduce;
use serde::Serialize;

use crate::print;
use crate::script::{DeriveKind, Directive, Env, Expect, Script};

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub seed: u64,
    /// Consequence-closure cap for Lie residuals; `None` means twice the
    /// equation order.
    pub max_order: Option<usize>,
    pub parallel: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Result of one directive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: String,
    pub directive: String,
    pub status: Status,
    #[serde(skip)]
    pub lines: Vec<String>,
    pub residuals: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn render(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        let mut s = format!("[{}] {}: {status}\n", self.id, self.directive);
        for l in &self.lines {
            s.push_str("  ");
            s.push_str(l);
            s.push('\n');
        }
        if let Some(e) = &self.error {
            s.push_str(&format!("  error in directive {}: {e}\n", self.id));
        }
        s
    }

    /// One JSON object on a single line.
    pub fn summary_line(&self) -> String {
        serde_json::to_string(self).expect("outcome serializes")
    }
}

struct Job {
    id: String,
    text: String,
    directive: Directive,
    env: Env,
}

fn jobs(script: &Script) -> Vec<Job> {
    let mut env = Env::default();
    let mut out = Vec::new();
    for st in &script.statements {
        if let crate::script::Statement::Directive(d) = st {
            out.push(Job {
                id: format!("{:03}", out.len() + 1),
                text: print::directive(d, &env),
                directive: d.clone(),
                env: env.clone(),
            });
        }
        env.apply(st).expect("script was validated by the parser");
    }
    out
}

/// Runs every directive; the outcomes are in directive order whether or not
/// they were computed in parallel.
pub fn run(script: &Script, opts: &Options) -> Vec<Outcome> {
    let jobs = jobs(script);
    if !opts.parallel || jobs.len() < 2 {
        return jobs.iter().map(|j| execute(j, opts)).collect();
    }
    let slots: Mutex<Vec<Option<Outcome>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(2, |n| n.get()).min(jobs.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= jobs.len() {
                    break;
                }
                let o = execute(&jobs[k], opts);
                slots.lock().unwrap()[k] = Some(o);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|o| o.expect("every job ran")).collect()
}

/// Exit code for a list of outcomes: 0 when everything passed.
pub fn exit_code(outcomes: &[Outcome]) -> i32 {
    if outcomes.iter().all(Outcome::passed) {
        0
    } else {
        1
    }
}

pub fn render_all(outcomes: &[Outcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&o.render());
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    s.push_str(&format!("{passed}/{} directives passed\n", outcomes.len()));
    s
}

pub fn summary(outcomes: &[Outcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&o.summary_line());
        s.push('\n');
    }
    s
}

struct Findings {
    ok: bool,
    lines: Vec<String>,
    residuals: Vec<String>,
}

impl Findings {
    fn new() -> Self {
        Findings { ok: true, lines: Vec::new(), residuals: Vec::new() }
    }

    fn residual(&mut self, label: &str, e: &Expr, ctx: &JetContext) {
        self.lines.push(format!("{label} = {}", e.display(ctx)));
        self.residuals.push(e.prefix(ctx).to_string());
    }

    fn case(&mut self, rep: &CaseReport) {
        self.ok &= rep.passed();
        self.lines.extend(rep.render().lines().map(str::to_string));
    }
}

fn execute(job: &Job, opts: &Options) -> Outcome {
    let (status, lines, residuals, error) = match findings(job, opts) {
        Ok(f) => (if f.ok { Status::Pass } else { Status::Fail }, f.lines, f.residuals, None),
        Err(e) => (Status::Error, Vec::new(), Vec::new(), Some(e)),
    };
    Outcome { id: job.id.clone(), directive: job.text.clone(), status, lines, residuals, error }
}

fn findings(job: &Job, opts: &Options) -> Result<Findings, String> {
    let env = &job.env;
    let engine = |e: qcond_core::Error| e.to_string();
    let mut f = Findings::new();
    match &job.directive {
        Directive::CheckLie { system, ops, expect } => {
            let sys = env.system(system)?;
            for name in ops {
                let q = &env.op(name)?.1;
                let res = lie_residual(&sys, q, opts.max_order).map_err(engine)?;
                let holds = res.iter().all(Expr::is_zero);
                f.ok &= holds == (*expect == Expect::Pass);
                f.lines.push(format!("{name}: {}", if holds { "Lie symmetry" } else { "not a Lie symmetry" }));
                for (e, eq) in res.iter().zip(sys.equations()) {
                    f.residual(&format!("  residual {}", eq.name()), e, sys.ctx());
                }
            }
        }
        Directive::CheckQcond { system, ops, expect } => {
            let sys = env.system(system)?;
            let set = env.involutive_set(ops)?;
            let res = qcond_residual(&sys, &set).map_err(engine)?;
            let holds = res.iter().all(Expr::is_zero);
            f.ok = holds == (*expect == Expect::Pass);
            f.lines.push(format!(
                "{}: {}",
                ops.join(", "),
                if holds { "Q-conditional symmetry" } else { "not a Q-conditional symmetry" }
            ));
            for (e, eq) in res.iter().zip(sys.equations()) {
                f.residual(&format!("  residual {}", eq.name()), e, sys.ctx());
            }
        }
        Directive::Derive { kind, system, template } => {
            let sys = env.system(system)?;
            let q = &env.op(template)?.1;
            let ds = match kind {
                DeriveKind::Lie => lie_determining_system(&sys, q),
                DeriveKind::Qcond => qcond_determining_system(&sys, q),
            }
            .map_err(engine)?;
            let n = ds.len();
            f.lines.push(format!("{n} determining equation{}", if n == 1 { "" } else { "s" }));
            for (k, e) in ds.equations().iter().enumerate() {
                f.residual(&format!("E{}", k + 1), e, sys.ctx());
            }
        }
        Directive::Bracket { a, b, expected } => {
            let (k, qa) = env.op(a)?;
            let qb = &env.op(b)?.1;
            let ctx = env.ctx(*k);
            let br = lie_bracket(qa, qb);
            let coeffs: Vec<Expr> = br.coefficients().cloned().collect();
            f.lines.push(format!("[{a}, {b}] = {}", print::field(&coeffs, ctx)));
            f.residuals.extend(coeffs.iter().map(|c| c.prefix(ctx).to_string()));
            if let Some(want) = expected {
                f.ok = *want == coeffs;
                if !f.ok {
                    f.lines.push(format!("expected {}", print::field(want, ctx)));
                }
            }
        }
        Directive::Reduce { system, ansatz, by, expected } => {
            let sys = env.system(system)?;
            let a = &env.ansatz(ansatz)?.1;
            if !by.is_empty() {
                let ok = env.check_ansatz(a, by)?;
                f.ok &= ok;
                f.lines.push(format!("ansatz invariant under {}: {}", by.join(", "), if ok { "yes" } else { "no" }));
            }
            let red = reduce(&sys, a).map_err(engine)?;
            let ctx = sys.ctx();
            if red.is_identity() {
                f.lines.push("reduces to an identity".into());
            }
            for e in &red.equations {
                f.lines.push(format!("reduced equation: {} = 0", e.display(ctx)));
                f.residuals.push(e.prefix(ctx).to_string());
            }
            if let Some(c) = &red.common_factor {
                f.lines.push(format!("common factor: {}", c.display(ctx)));
            }
            if red.is_inconsistent() {
                f.lines.push("reduced system is inconsistent".into());
            }
            if let Some(want) = expected {
                let got = if red.is_identity() { Some(Expr::zero()) } else { red.reduced_equation().cloned() };
                let matches = match &got {
                    Some(g) if g.is_zero() || want.is_zero() => g.is_zero() && want.is_zero(),
                    Some(g) => equal_up_to_factor(g, want).is_some(),
                    None => false,
                };
                f.ok &= matches;
                if !matches {
                    f.lines.push(format!("expected {} = 0", want.display(ctx)));
                }
            }
        }
        Directive::VerifyCase(id) => f.case(&run_case(id, opts.seed).map_err(engine)?),
        Directive::RunCasebook => {
            for rep in run_all(opts.seed).map_err(engine)? {
                f.case(&rep);
            }
        }
    }
    Ok(f)
}

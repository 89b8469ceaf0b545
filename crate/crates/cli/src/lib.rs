//! Script language and driver for `qcond-core`.
//!
//! # Grammar
//!
//! ```text
//! script     = { statement } ;
//! statement  = declaration | directive ;
//!
//! declaration =
//!     "vars" name { name } ";"                    (starts a new context)
//!   | "dep" name { name } ";"                     (completes it)
//!   | "param" name { name } ";"
//!   | "unknown" name "(" name { "," name } ")" ";"
//!   | "eq" system ":" jet "=" expr ";"            (repeat to add equations)
//!   | "constraint" system ":" fderiv "=" expr ";"
//!   | ("op" | "template") name ":" field ";"
//!   | "ansatz" name ":" dep "=" expr "where" inv { "," inv } [ "via" expr ] ";" ;
//! inv        = name "=" expr "solve" var ;
//!
//! directive  =
//!     "check-lie" system op { op } [ "expect" ("pass" | "fail") ] ";"
//!   | "check-qcond" system op { op } [ "expect" ("pass" | "fail") ] ";"
//!   | "derive" ("lie" | "qcond") system op ";"
//!   | "bracket" op op [ "=" field ] ";"
//!   | "reduce" system ansatz [ "by" op { op } ] [ "=" expr ] ";"
//!   | "verify-case" case-id ";"
//!   | "run-casebook" ";" ;
//!
//! expr       = [ "-" ] term { ("+" | "-") term } ;
//! term       = factor { ("*" | "/") factor } ;
//! factor     = primary [ "^" [ "-" ] integer ] ;
//! primary    = integer | name | "(" expr ")"
//!            | "d" "(" name "," var [ "," integer ] { "," var [ "," integer ] } ")"
//!            | "exp" "(" expr ")" | "log" "(" expr ")"
//!            | "Int" "(" expr "," var ")"
//!            | name "(" expr { "," expr } ")"
//!            | name "[" integer { "," integer } "]" "(" expr { "," expr } ")" ;
//! field      = expr, linear in the basis symbols "d" ^ var and "d" ^ dep ;
//! ```
//!
//! Names are ASCII letters, digits and `_`; `#` starts a comment. Numbers are
//! exact: `1/2` is a rational. Jets are written `d(u,x,2)` or, when every
//! independent variable has a one-letter name, `u_xx`. An unknown function
//! declared as `unknown theta(t, x, u)` is written `theta` for `theta(t, x, u)`,
//! `theta_xu` or `d(theta, x, u)` for a derivative, and `theta[0,1,1](t, x, u)`
//! in general. `Int(e, t)` is a formal antiderivative. Operators read
//! `t*dx - 1/2*x*u*du`. In an ansatz the invariant names stand for their
//! expressions and the one function that is not declared becomes the
//! ansatz function; without `via` the form must be that function of the
//! invariants. In the expected result of `reduce` the invariant names are the
//! new independent variables.
//!
//! Parsing resolves every symbol; errors carry line and column.

pub mod print;
pub mod run;
pub mod script;
pub mod syntax;

pub use run::{exit_code, render_all, run, summary, Options, Outcome, Status};
pub use script::{expression, parse, Script};
pub use syntax::ParseError;

/// The built-in casebook.
pub const CASEBOOK: &str = include_str!("../casebook/casebook.qc");

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("context error: {0}")]
    Context(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclic substitution rules: `{0}` occurs on a right-hand side")]
    CyclicRules(String),
    #[error("duplicate substitution rule for `{0}`")]
    DuplicateRule(String),
    #[error("consequence closure requested without an order cap")]
    MissingOrderCap,
    #[error("closure limit exceeded: {0}")]
    ClosureLimit(String),
    #[error("expression is not polynomial in `{var}`: offending subterm `{term}`")]
    NonPolynomial { var: String, term: String },
    #[error("prolongation of order {have} cannot act on an expression of order {need}")]
    OrderMismatch { have: usize, need: usize },
    #[error("matrix is singular: {0}")]
    Singular(String),
    #[error("rank condition violated: {0}")]
    Rank(String),
    #[error("equation is not in solved form: {0}")]
    NotSolved(String),
    #[error("invariant surface conditions cannot be solved for distinct derivatives: {0}")]
    DegenerateSurface(String),
    #[error("restriction depends on elimination order: {0}")]
    EliminationOrder(String),
    #[error("residual cannot be written in the invariants; remainder `{0}`")]
    Irreducible(String),
    #[error("vanishing denominator: {0}")]
    VanishingDenominator(String),
    #[error("operators do not form an involutive set: {0}")]
    NotInvolutive(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

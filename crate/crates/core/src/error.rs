use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Measure axioms checked by validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// Strictness: the void sublocale has measure zero.
    M1,
    /// Monotonicity.
    M2,
    /// Modularity.
    M3,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            Axiom::M1 => "(M1) μ(0) = 0",
            Axiom::M2 => "(M2) S ≤ T ⇒ μ(S) ≤ μ(T)",
            Axiom::M3 => "(M3) μ(S) + μ(T) = μ(S ∨ T) + μ(S ∧ T)",
        };
        f.write_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedSpec(String),

    #[error("not a lattice: `{a}` and `{b}` have no {missing}")]
    NotALattice { a: String, b: String, missing: &'static str },

    #[error("lattice is not distributive: {a} ∧ ({b} ∨ {c}) ≠ ({a} ∧ {b}) ∨ ({a} ∧ {c})")]
    NotDistributive { a: String, b: String, c: String },

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("`{element}` is not complemented in {carrier}")]
    NotComplemented { element: String, carrier: String },

    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),

    #[error("invalid σ-scale: {0}")]
    InvalidScale(String),

    #[error("invalid measurable function: {0}")]
    InvalidFunction(String),

    #[error("{op} is only defined for finite functions (members of M(L)); operand is extended")]
    NotFinite { op: &'static str },

    #[error("operands live on different carriers")]
    CarrierMismatch,

    #[error("product requires 0 ≤ f ∧ g, but an operand takes negative values")]
    NegativeOperand,

    #[error("complementation failure at q = {at}: `{value}` is not complemented in {carrier}")]
    ComplementationFailure { at: String, value: String, carrier: String },

    #[error("function is not nonnegative (f ≥ 0 fails)")]
    NotNonnegative,

    #[error("measure axiom {axiom} violated at {witness}")]
    AxiomViolation { axiom: Axiom, witness: String },

    #[error("carrier is not Boolean: `{0}` is not complemented")]
    NotBoolean(String),

    #[error("not integrable over {over}: ∫g⁺ dμ = ∞ and ∫g⁻ dμ = ∞")]
    NotIntegrable { over: String },
}

impl Error {
    /// Operations whose result is undefined (as opposed to malformed input).
    pub fn is_undefined_operation(&self) -> bool {
        matches!(
            self,
            Error::NotIntegrable { .. }
                | Error::NotComplemented { .. }
                | Error::ComplementationFailure { .. }
                | Error::NotFinite { .. }
                | Error::NegativeOperand
                | Error::NotNonnegative
        )
    }
}

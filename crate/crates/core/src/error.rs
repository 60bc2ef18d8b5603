use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { offset: usize, name: String },
    #[error("negative exponent at byte {offset}")]
    NegativeExponent { offset: usize },
    #[error("fractional x2 exponent at byte {offset}")]
    FractionalX2Exponent { offset: usize },

    #[error("domain error: x1 = {x1} < 0 for a polynomial with fractional x1 exponents")]
    Domain { x1: f64 },
    #[error("variables cannot be swapped on a polynomial with fractional x1 exponents")]
    RamifiedSwap,

    #[error("not finite type: the polynomial is zero")]
    NotFiniteType,
    #[error("not mixed-homogeneous: support is not collinear")]
    NotMixedHomogeneous,
    #[error("has linear part: support meets t1 + t2 <= 1")]
    HasLinearPart,
    #[error("irrational principal root (multiplicity {multiplicity})")]
    IrrationalPrincipalRoot { multiplicity: u32 },
    #[error("no principal root of multiplicity above the distance")]
    NoPrincipalRoot,
    #[error("principal edge requires a shear in x1 after x2-shears were applied")]
    UnexpectedOrientation,
    #[error("step budget exceeded after {steps} Varchenko steps")]
    StepBudgetExceeded { steps: usize },

    #[error("quadrature budget exceeded: {panels} panels needed at lambda = {lambda}")]
    QuadratureBudgetExceeded { panels: usize, lambda: f64 },
    #[error("measurement underflow: fewer than {needed} usable grid points")]
    MeasurementUnderflow { needed: usize },
    #[error("resolution insufficient: refinement changes the measure by {relative_change:.3} at eps = {eps}")]
    ResolutionInsufficient { eps: f64, relative_change: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable code used in JSON reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax_error",
            Error::UnknownVariable { .. } => "unknown_variable",
            Error::NegativeExponent { .. } => "negative_exponent",
            Error::FractionalX2Exponent { .. } => "fractional_x2_exponent",
            Error::Domain { .. } => "domain_error",
            Error::RamifiedSwap => "ramified_swap",
            Error::NotFiniteType => "not_finite_type",
            Error::NotMixedHomogeneous => "not_mixed_homogeneous",
            Error::HasLinearPart => "has_linear_part",
            Error::IrrationalPrincipalRoot { .. } => "irrational_principal_root",
            Error::NoPrincipalRoot => "no_principal_root",
            Error::UnexpectedOrientation => "unexpected_orientation",
            Error::StepBudgetExceeded { .. } => "step_budget_exceeded",
            Error::QuadratureBudgetExceeded { .. } => "quadrature_budget_exceeded",
            Error::MeasurementUnderflow { .. } => "measurement_underflow",
            Error::ResolutionInsufficient { .. } => "resolution_insufficient",
            Error::InvalidInput(_) => "invalid_input",
        }
    }

    /// Byte offset for parse errors.
    pub fn offset(&self) -> Option<usize> {
        match self {
            Error::Syntax { offset, .. }
            | Error::UnknownVariable { offset, .. }
            | Error::NegativeExponent { offset }
            | Error::FractionalX2Exponent { offset } => Some(*offset),
            _ => None,
        }
    }

    pub fn is_parse_error(&self) -> bool {
        self.offset().is_some()
    }

    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::QuadratureBudgetExceeded { .. }
                | Error::MeasurementUnderflow { .. }
                | Error::ResolutionInsufficient { .. }
        )
    }
}

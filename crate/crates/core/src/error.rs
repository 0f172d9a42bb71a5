use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the binary quartic is identically zero")]
    ZeroForm,
    #[error("j is undefined: I = J = 0 (a root of multiplicity at least 3)")]
    UndefinedJ,
    #[error("substitution matrix is singular")]
    SingularSubstitution,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("root certification failed at {bits} bits")]
    CertificationFailed { bits: u32 },
    #[error("precision must be at least 64 bits, got {0}")]
    PrecisionTooLow(u32),

    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("expected a {expected} matrix, got {rows}x{cols}")]
    Shape {
        expected: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("Q0 and Q1 are linearly dependent")]
    DependentPencil,
    #[error("group element is singular")]
    SingularGroupElement,
    #[error("the pencil lies inside the determinant hypersurface (discriminant is identically zero)")]
    LineInD,

    #[error("diagonal entries must be pairwise distinct")]
    RepeatedLambda,
    #[error("pencil is not smooth (discriminant is not squarefree)")]
    NotSmooth,
    #[error("pencil is not in the nodal stratum")]
    NotNodal,
    #[error("normal-form verification failed: {0}")]
    NormalFormMismatch(String),

    #[error("cross-ratio needs four distinct points")]
    CoincidentRoots,

    #[error("invalid partition ({a},{b}) for Gr(2,{n})")]
    InvalidPartition { a: usize, b: usize, n: usize },
    #[error("classes live on different Grassmannians: Gr(2,{0}) vs Gr(2,{1})")]
    MixedAmbient(usize, usize),
    #[error("class is not of top degree")]
    NotTopDegree,
    #[error("multiplicity {multiplicity} does not divide {count}")]
    NonDivisibleMultiplicity { multiplicity: u32, count: i64 },

    #[error("j-fiber count is undefined at a = infinity; count tangents instead")]
    PoleValue,
    #[error("slice sampling exhausted {retries} retries for seed {seed}: {diagnostics:?}")]
    GenericityExhausted {
        seed: u64,
        retries: u32,
        diagnostics: Vec<String>,
    },
    #[error("campaign counts for {what} disagree across trials (count -> seeds): {counts:?}")]
    CampaignFailed {
        what: String,
        counts: Vec<(usize, Vec<u64>)>,
    },
    #[error("invalid slice: {0}")]
    InvalidSlice(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of certified numerics, as opposed to precondition
    /// violations by the caller.
    pub fn is_certification_failure(&self) -> bool {
        matches!(
            self,
            Error::CertificationFailed { .. } | Error::NormalFormMismatch(_) | Error::CampaignFailed { .. }
        )
    }
}

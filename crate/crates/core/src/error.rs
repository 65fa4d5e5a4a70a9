use thiserror::Error;

/// Errors raised by every layer of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Cayley table is malformed: {0}")]
    MalformedTable(String),
    #[error("multiplication is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("no two-sided identity element in Cayley table")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NotInvertible(usize),
    #[error("unsupported group parameter: {0}")]
    UnsupportedParameter(String),
    #[error("not a homomorphism: images of {0} and {1} are inconsistent")]
    NotAHomomorphism(usize, usize),
    #[error("given generators reach {reached} of {order} elements")]
    GeneratorsDontGenerate { reached: usize, order: usize },
    #[error("subgroup is not normal: conjugating {member} by {by} leaves the subgroup")]
    NotNormal { member: usize, by: usize },
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("phi is not surjective")]
    PhiNotSurjective,
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("coefficient map is not equivariant under element {0}")]
    NotEquivariant(usize),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("extension mismatch: {0}")]
    ExtensionMismatch(String),
    #[error("class does not restrict to zero on the kernel subgroup")]
    NotInKernel,
    #[error("kernel is not abelian")]
    KernelNotAbelian,
    #[error("solution does not belong to the source problem")]
    ProblemMismatch,
    #[error("embedding problem has no solution")]
    NoSolution,
    #[error("action does not define a homomorphism: word {0:?} violates composition")]
    ActionNotHomomorphism(Vec<usize>),
    #[error("invalid abelian group data: {0}")]
    InvalidAbelian(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

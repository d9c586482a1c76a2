use thiserror::Error;

use crate::complex::{Simplex, Vertex};
use crate::quotient::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot take boundary of a vertex")]
    BoundaryOfVertex,

    #[error("join requires disjoint vertex sets")]
    JoinNotDisjoint,

    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("vertex {0} is already a vertex of the complex")]
    VertexNotFresh(Vertex),

    #[error("vertex {0} is not a vertex of the complex")]
    UnknownVertex(Vertex),

    #[error("{0} is not a face of the complex")]
    NotAFace(Simplex),

    #[error("weld precondition violated: {0}")]
    WeldPrecondition(String),

    #[error("relabel map is not injective on the vertex set")]
    NonInjectiveRelabel,

    #[error("complex is not uniform")]
    NotUniform,

    #[error("complex is empty")]
    EmptyComplex,

    #[error("complex is not connected")]
    Disconnected,

    #[error("not a manifold: {0}")]
    NotManifold(String),

    #[error("manifold is not closed")]
    NotClosed,

    #[error("structure is not closed: generator {0} is unpaired")]
    StructureNotClosed(Simplex),

    #[error("invalid equivalence: {}", format_violations(.0))]
    InvalidEquivalence(Vec<Violation>),

    #[error("inconsistent pairing: {0}")]
    InconsistentPairing(String),

    #[error("expected dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid lens parameters q={q}, p={p}: need q > p >= 1 and gcd(q, p) = 1")]
    InvalidLensParams { q: u32, p: u32 },

    #[error("budget of {0} exhausted")]
    BudgetExhausted(usize),

    #[error("structure algorithm stalled: {0}")]
    Stalled(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BoundaryOfVertex => "boundary_of_vertex",
            Error::JoinNotDisjoint => "join_not_disjoint",
            Error::InvalidSimplex(_) => "invalid_simplex",
            Error::VertexNotFresh(_) => "vertex_not_fresh",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::NotAFace(_) => "not_a_face",
            Error::WeldPrecondition(_) => "weld_precondition",
            Error::NonInjectiveRelabel => "non_injective_relabel",
            Error::NotUniform => "not_uniform",
            Error::EmptyComplex => "empty_complex",
            Error::Disconnected => "disconnected",
            Error::NotManifold(_) => "not_manifold",
            Error::NotClosed => "not_closed",
            Error::StructureNotClosed(_) => "structure_not_closed",
            Error::InvalidEquivalence(_) => "invalid_equivalence",
            Error::InconsistentPairing(_) => "inconsistent_pairing",
            Error::Dimension { .. } => "dimension",
            Error::InvalidLensParams { .. } => "invalid_lens_params",
            Error::BudgetExhausted(_) => "budget_exhausted",
            Error::Stalled(_) => "stalled",
            Error::Internal(_) => "internal",
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

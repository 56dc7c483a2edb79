use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed quiver: {0}")]
    MalformedQuiver(String),
    #[error("malformed relation: {0}")]
    MalformedRelation(String),
    #[error("path enumeration exceeded {cap} paths; the algebra looks infinite dimensional")]
    InfiniteDimensional { cap: usize },
    #[error("elements cannot be multiplied: {0}")]
    IncomposableElements(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("projective resolution of S{vertex} exceeded {cap} steps")]
    ResolutionCapExceeded { vertex: u32, cap: usize },
    #[error("position {pos} out of range for window {window}")]
    PositionOutOfRange { pos: usize, window: usize },
    #[error("window mismatch: {0} vs {1}")]
    WindowMismatch(usize, usize),
    #[error("not an extension: {0}")]
    NotAnExtension(String),
    #[error("shifted support does not fit into window {0}")]
    SupportOverflow(usize),
    #[error("the zero complex has no indecomposability status")]
    ZeroComplex,
    #[error("invalid extension class: {0}")]
    InvalidClass(String),
    #[error("endomorphism ring is not split over the base field; cannot find a primitive idempotent")]
    NonSplitEndomorphismRing,
    #[error("universe is not certified complete: {0}")]
    IncompleteUniverse(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("brute-force search space too large ({0} candidate complexes)")]
    SearchSpaceTooLarge(u128),
    #[error("universe for window {0} is not certified closed")]
    NotClosed(usize),
    #[error("almost split certification failed: {0}")]
    CertificationFailure(String),
    #[error("no almost split conflation candidate found for {0}")]
    NoCandidateFound(String),
    #[error("several almost split conflations certified for {0}")]
    MultipleCertified(String),
    #[error("irreducible morphism shape violation: {0}")]
    ShapeViolation(String),
    #[error("no anchor class for the reduced quiver: {0}")]
    NoAnchorFound(String),
    #[error("strong global dimension is zero; the construction needs eta >= 1")]
    EtaZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

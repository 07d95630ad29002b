use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("slot {0} of face {1} appears in more than one gluing")]
    DuplicateGluing(String, i64),
    #[error("slot {0} of face {1} is glued to itself")]
    SelfGluedSlot(String, i64),
    #[error("face {0} is glued to itself along two slots (self-folded triangle)")]
    SelfFoldedTriangle(i64),
    #[error("gluing references unknown face {0}")]
    UnknownFace(i64),
    #[error("orientation inconsistency: {0}")]
    OrientationInconsistency(String),
    #[error("surface has no boundary edge")]
    NoBoundary,
    #[error("operation requires a surface without interior punctures")]
    InteriorPuncture,
    #[error("quiver entry Q({0},{1}) = {2} is odd away from a boundary edge")]
    NonIntegerHalf(usize, usize, i128),
    #[error("no simultaneous rotation of ({0},{1},{2}), ({3},{4},{5}) admits the kernel formula")]
    NoAdmissibleRotation(i128, i128, i128, i128, i128, i128),
    #[error("left-turn elongation exceeded {0} segments (loop)")]
    ElongationLoop(usize),
    #[error("trace matrix entry differs across face choices at ({0},{1})")]
    WellDefinednessViolation(usize, usize),
    #[error("block identity `{lemma}` fails at ({row},{col}): got {got}, want {want}")]
    BlockMismatch {
        lemma: &'static str,
        row: usize,
        col: usize,
        got: i128,
        want: i128,
    },
    #[error("matrix is not anti-symmetric at ({0},{1})")]
    NotAntisymmetric(usize, usize),
    #[error("second lattice is not contained in the first")]
    NotSublattice,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("rank {0} over the center is not a perfect square")]
    NotPerfectSquare(String),
    #[error("root order m'' = {0} must be odd for this check")]
    OddOrderRequired(u64),
    #[error("{0} does not divide {1}")]
    NotADivisor(u64, u64),
    #[error("surface is not triangulable for the boundary-fan construction: {0}")]
    NotTriangulable(String),
    #[error("computed rank {got} does not match the closed form {want}")]
    FormulaMismatch { got: String, want: String },
    #[error("property violated: {0}")]
    PropertyViolation(String),
    #[error("matrix dimension {0} exceeds QTRACE_MAX_DIM = {1}")]
    DimensionCap(usize, usize),
    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

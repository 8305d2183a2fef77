use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: undeclared vertex `{id}`")]
    UndeclaredVertex { line: usize, id: String },
    #[error("line {line}: undeclared arrow `{id}`")]
    UndeclaredArrow { line: usize, id: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: relation {first} {second} is not composable")]
    NotComposable {
        line: usize,
        first: String,
        second: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word has no crossings")]
    Empty,
    #[error("unknown laminate `{0}`")]
    UnknownVertex(String),
    #[error("unknown disc `{0}`")]
    UnknownDisc(String),
    #[error("gap {index}: {message}")]
    BadGap { index: usize, message: String },
    #[error("malformed word text: {0}")]
    Syntax(String),
    #[error("band is not gradable (winding {0})")]
    Ungradable(i64),
    #[error("band is a proper power")]
    Imprimitive,
    #[error("band parameter must be nonzero")]
    ZeroParameter,
    #[error("word is not reduced at gap {0}")]
    NotReduced(usize),
    #[error("expected a {0}")]
    WrongShape(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("maps are not composable")]
    NotComposable,
    #[error("no admissible path between the seed terms")]
    IncompatibleSeed,
    #[error("mapping cone needs a degree 0 map, got degree {0}")]
    ConeDegree(i64),
    #[error("object is not spherical: {0}")]
    NotSpherical(String),
    #[error("crossing datum does not describe an intersection of the given words")]
    NotAnIntersection,
    #[error("coefficient does not fit a 64-bit rational")]
    Overflow,
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TiltingError {
    #[error("arc system is not tilting: {0}")]
    NotTilting(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

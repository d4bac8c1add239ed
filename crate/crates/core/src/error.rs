use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grade {0} is out of range 0..=3")]
    GradeOutOfRange(usize),

    #[error("expected a pure bivector, found non-bivector component of size {0:e}")]
    NotBivector(f64),

    #[error("bivector square is not a scalar (non-scalar residue {0:e})")]
    NonScalarSquare(f64),

    #[error("Jacobi parameters must exceed -1 (alpha = {alpha}, beta = {beta})")]
    InvalidJacobiParams { alpha: f64, beta: f64 },

    #[error("index {index} is out of range for {what}")]
    IndexOutOfRange { what: &'static str, index: usize },

    #[error("point is within {tol:e} of a pole (phi = {phi})")]
    NearPole { phi: f64, tol: f64 },

    #[error("direction is not a unit tangent vector (|<p,w>| = {inner:e}, |w| = {norm})")]
    NotUnitTangent { inner: f64, norm: f64 },

    #[error("degenerate point: {0}")]
    DegeneratePoint(&'static str),

    #[error("kernel dimension must be at least 3, got {0}")]
    DimensionTooSmall(usize),

    #[error("ensemble has {got} points but degree {k} needs {expected}")]
    WrongEnsembleSize { k: usize, expected: usize, got: usize },

    #[error("matrix is not self-adjoint (max deviation {0:e})")]
    NotSelfAdjoint(f64),

    #[error("Gram matrix is singular: eigenvalue {eigenvalue:e} below floor {floor:e}")]
    SingularGram { eigenvalue: f64, floor: f64 },

    #[error("matrix is not in the image of the complex adjoint (max deviation {0:e})")]
    NotChiStructured(f64),

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

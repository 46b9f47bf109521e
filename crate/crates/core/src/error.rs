use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{field}` = {value} outside {expected}")]
    ParameterOutOfRange {
        field: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("monic coefficient beta_{0} is not positive")]
    NonpositiveBeta(usize),
    #[error("off-diagonal entry a_{0} is not positive")]
    NonpositiveOffdiagonal(usize),
    #[error("divided-difference denominator vanishes at z = {re}{im:+}i")]
    DenominatorVanishes { re: f64, im: f64 },
    #[error("scale xi must be nonzero")]
    ZeroXi,
    #[error("coupling into row {0} vanishes; the matrix splits into blocks")]
    ReducibleAt(usize),
    #[error("no birth-death factorization: {0}")]
    NotBD(String),
    #[error("quadrature did not stabilise: successive orders differ by {0:e}")]
    QuadratureOrderInsufficient(f64),
    #[error("lattice sum tail did not converge")]
    TailNotConverged,
    #[error("degree {0} exceeds the overflow horizon of plain evaluation")]
    Overflow(usize),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(field: &'static str, value: f64, expected: &'static str) -> Error {
    Error::ParameterOutOfRange {
        field,
        value,
        expected,
    }
}

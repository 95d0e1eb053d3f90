use core::fmt;

/// Failure modes shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NotPrime(u32),
    ResidueViolation { weight: usize, p: u32 },
    LengthMismatch { expected: usize, got: usize },
    DigitOutOfRange { digit: u32, p: u32 },
    EmptyDistribution,
    OutOfRange(&'static str),
    TooLarge(&'static str),
    TargetOutOfRange { target: usize, n: usize },
    DisconnectedGraph,
    OddInput,
    WidthMismatch { expected: usize, got: usize },
    NonCliffordGate,
    NontrivialSyndrome,
    NoCrossover,
    Invalid(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not a supported prime (2..=13)"),
            Error::ResidueViolation { weight, p } => {
                write!(f, "input weight {weight} is not divisible by {p}")
            }
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::DigitOutOfRange { digit, p } => write!(f, "digit {digit} out of range for p={p}"),
            Error::EmptyDistribution => f.write_str("empty distribution"),
            Error::OutOfRange(what) => write!(f, "value out of range: {what}"),
            Error::TooLarge(what) => write!(f, "instance too large: {what}"),
            Error::TargetOutOfRange { target, n } => {
                write!(f, "target {target} out of range for {n} qupits")
            }
            Error::DisconnectedGraph => f.write_str("graph is disconnected"),
            Error::OddInput => f.write_str("input has odd Hamming weight"),
            Error::WidthMismatch { expected, got } => {
                write!(f, "width mismatch: expected {expected}, got {got}")
            }
            Error::NonCliffordGate => f.write_str("gate is not Clifford"),
            Error::NontrivialSyndrome => f.write_str("operator has a nontrivial syndrome"),
            Error::NoCrossover => f.write_str("no crossover inside the search range"),
            Error::Invalid(what) => write!(f, "invalid argument: {what}"),
        }
    }
}

impl core::error::Error for Error {}

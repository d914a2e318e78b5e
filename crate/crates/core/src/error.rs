use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Why a synthesis instance has no solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// The input pattern has no stars, so no state can ever be reached.
    NoInputs,
    /// Even with every interconnection present the pair is not structurally
    /// controllable (only possible for `k = 1`, where no interconnection exists).
    NotControllableWithAllLinks,
    /// No matching saturates every state copy.
    NoPerfectMatching,
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoInputs => f.write_str("input pattern has no stars"),
            Self::NotControllableWithAllLinks => {
                f.write_str("not structurally controllable even with all interconnections")
            }
            Self::NoPerfectMatching => f.write_str("no left-perfect matching exists"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A pattern or specification dimension was zero.
    ZeroDimension(&'static str),
    /// A 1-based star position outside `[1..n_rows] x [1..n_cols]`.
    IndexOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },
    /// Two dimensions that must agree do not.
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    /// A state id outside `[1..k] x [1..n_s]`.
    InvalidState { subsystem: usize, state: usize },
    /// An interconnection whose endpoints lie in the same subsystem.
    SameSubsystemLink { subsystem: usize },
    /// A probability outside `[0, 1]`.
    InvalidDensity(&'static str),
    Infeasible(Infeasibility),
    /// A step that the construction guarantees cannot fail did fail.
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroDimension(what) => write!(f, "{what} must be positive"),
            Self::InvalidDensity(what) => write!(f, "{what} must lie in [0, 1]"),
            Self::IndexOutOfRange {
                row,
                col,
                n_rows,
                n_cols,
            } => write!(
                f,
                "star ({row}, {col}) outside a {n_rows}x{n_cols} pattern (indices are 1-based)"
            ),
            Self::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "{what}: expected {expected}, found {found}"),
            Self::InvalidState { subsystem, state } => {
                write!(f, "state ({subsystem}, {state}) does not exist")
            }
            Self::SameSubsystemLink { subsystem } => write!(
                f,
                "interconnection endpoints both lie in subsystem {subsystem}"
            ),
            Self::Infeasible(why) => write!(f, "infeasible: {why}"),
            Self::Internal(what) => write!(f, "internal consistency failure: {what}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<Infeasibility> for Error {
    fn from(value: Infeasibility) -> Self {
        Self::Infeasible(value)
    }
}

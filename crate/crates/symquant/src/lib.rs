//! Lie-theoretic and numerical machinery for invariant Kähler quantizations of
//! cotangent bundles of compact symmetric spaces `T*(U/K)`.
//!
//! The crate is organised around the pipeline
//!
//! * [`rootsys`] — reduced root-system combinatorics (construction, Weyl
//!   sweeping, dimensions, weight multiplicities),
//! * [`satake`] — Satake diagrams, the lattice involution they induce,
//!   restricted root systems with multiplicities and spherical weights,
//! * [`repmat`] — explicit irreducible representation matrices in a
//!   Gelfand–Tsetlin basis, spherical vectors and Harish-Chandra c-functions,
//! * [`convexg`] — invariant uniformly convex functions, Legendre/Newton
//!   machinery and holomorphic frame limits,
//! * [`quantize`] — isotypic section bases, coherent state transport, the
//!   norm-flow integral and its large-time behaviour.
//!
//! Every runnable capability also exists as an example under `examples/` and
//! as a subcommand of the thin `symquant` binary.

pub mod cli;
pub mod convexg;
pub mod dd;
pub mod linalg;
pub mod quad;
pub mod quantize;
pub mod repmat;
pub mod report;
pub mod rootsys;
pub mod satake;

use num_rational::Ratio;

/// Exact rational scalar used for all lattice-level data.
pub type Rat = Ratio<i128>;

/// Shorthand constructor for a rational from a numerator/denominator pair.
pub fn rat(n: i128, d: i128) -> Rat {
    Ratio::new(n, d)
}

/// Shorthand constructor for an integer rational.
pub fn rati(n: i128) -> Rat {
    Ratio::from_integer(n)
}

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported diagram: {0}")]
    UnsupportedDiagram(String),
    #[error("invalid satake data: {0}")]
    InvalidSatakeData(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("representation is not spherical: {0}")]
    NotSpherical(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    /// Process exit status associated with the error kind.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) | Error::Resource(_) => 3,
            _ => 2,
        }
    }

    /// Machine-readable error kind tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnsupportedDiagram(_) => "unsupported-diagram",
            Error::InvalidSatakeData(_) => "invalid-satake-data",
            Error::Domain(_) => "domain",
            Error::NotSpherical(_) => "not-spherical",
            Error::InternalInconsistency(_) => "internal-inconsistency",
            Error::Numerical(_) => "numerical",
            Error::Resource(_) => "resource",
            Error::Usage(_) => "usage",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

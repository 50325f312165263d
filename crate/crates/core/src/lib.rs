//! Invariant Riemannian metrics with prescribed Ricci curvature on compact
//! homogeneous spaces.
//!
//! The equation `Ric(g) = c T` for a diagonal invariant metric `g` and a
//! positive-semidefinite invariant tensor `T` reduces to finitely many
//! numbers: one metric coefficient per isotropy summand. This crate holds
//! the data model and validation ([`data`]), ingestion from raw Lie-algebra
//! bracket tables ([`data::derive_structure`]), the curvature kernels
//! ([`curvature`]), the compactness constants and search box ([`bounds`]),
//! and the solvers ([`solver`]): an exact closed form for two summands and
//! constrained maximization of the scalar curvature in general.

pub mod bounds;
pub mod catalog;
pub mod curvature;
pub mod data;
pub mod io;
pub mod solver;

#[cfg(feature = "testkit")]
pub mod testkit;

pub use bounds::{BoundsError, BoundsReport};
pub use data::{
    DataError, DeriveError, Gamma, InvariantMetric, InvariantTensor, LieAlgebraTable,
    StructureData, ValidationReport, Violation,
};
pub use solver::{
    ScanRow, SolveError, SolveOptions, SolveResult, SolveStatus, TwoSummandIntermediates,
    VerifyReport,
};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

impl Serialize for InvariantMetric {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.coeffs() {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

impl Serialize for InvariantTensor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.coeffs() {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

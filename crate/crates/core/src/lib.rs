//! Tests for unitary equivalence to a complex symmetric matrix (UECSM).

pub mod angletests;
pub mod constructors;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod matcore;
pub mod nilpotent4;
pub mod oracle;
pub mod report;
pub mod sampling;
pub mod spectra;
pub mod tracetests;
pub mod verdict;

pub use document::MatrixDocument;
pub use error::{Error, Result};
pub use matcore::{CMatrix, Word, C64};
pub use verdict::{Residual, Verdict};
pub use oracle::{find_symmetrizer, verify_witness, OracleResult, OracleStatus};
pub use report::{analyze, exit_code, Report};

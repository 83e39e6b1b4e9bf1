//! Matrix file exchange in the JSON format `{dim, re, im}` with nested
//! real and imaginary row tables.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};

/// Read a complex matrix from a JSON file. Parse problems (malformed
/// JSON, shape mismatch, non-finite entries) surface as
/// [`Error::BadMatrixFile`]; missing files surface as [`Error::Io`].
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::BadMatrixFile(format!("{}: {e}", path.display())))
}

/// Read a matrix and require it to be hermitian.
pub fn read_hermitian(path: &Path) -> Result<HermitianMatrix> {
    HermitianMatrix::new(read_matrix(path)?)
}

/// Write a matrix as JSON. Re-reading the file restores the matrix
/// bitwise: the float encoding is shortest-round-trip.
pub fn write_matrix(path: &Path, matrix: &ComplexMatrix) -> Result<()> {
    let text = serde_json::to_string_pretty(matrix)
        .map_err(|e| Error::BadMatrixFile(format!("serialization: {e}")))?;
    fs::write(path, text)?;
    Ok(())
}

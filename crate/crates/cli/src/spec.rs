//! Input file formats. Complex entries are `[re, im]` pairs and matrices are
//! lists of rows.

use pfspace_core::qec::check_projection;
use pfspace_core::{CMatrix, Channel, ClassicalMatrix, Tolerances, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub type Entry = [f64; 2];
pub type MatrixRows = Vec<Vec<Entry>>;

/// A CP map given by its Kraus operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub dim: usize,
    pub kraus: Vec<MatrixRows>,
}

/// A code projection, either as a matrix or as orthonormal columns spanning
/// its range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isometry: Option<Vec<Vec<Entry>>>,
}

/// A square complex matrix (the test element of `certify`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub dim: usize,
    pub matrix: MatrixRows,
}

/// A real nonnegative matrix with an optional positive test vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalSpec {
    pub matrix: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<f64>>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn guard(dim: usize, max_dim: usize) -> Result<(), CliError> {
    if dim == 0 {
        return Err(invalid("dim must be positive"));
    }
    if dim > max_dim {
        return Err(CliError::TooLarge { dim, max: max_dim });
    }
    Ok(())
}

fn entry(e: &Entry, what: &str) -> Result<C64, CliError> {
    if !e[0].is_finite() || !e[1].is_finite() {
        return Err(invalid(format!("{what}: non-finite entry")));
    }
    Ok(C64::new(e[0], e[1]))
}

pub fn parse_matrix(rows: &MatrixRows, dim: usize, what: &str) -> Result<CMatrix, CliError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(invalid(format!("{what}: expected a {dim}x{dim} matrix")));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for row in rows {
        for e in row {
            data.push(entry(e, what)?);
        }
    }
    Ok(CMatrix::from_row_major(dim, dim, data)?)
}

pub fn matrix_rows(m: &CMatrix) -> MatrixRows {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

impl ChannelSpec {
    pub fn to_channel(&self, max_dim: usize) -> Result<Channel, CliError> {
        guard(self.dim, max_dim)?;
        if self.kraus.is_empty() {
            return Err(invalid("at least one Kraus operator is required"));
        }
        let kraus = self
            .kraus
            .iter()
            .enumerate()
            .map(|(i, k)| parse_matrix(k, self.dim, &format!("kraus[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Channel::new(kraus)?)
    }

    pub fn from_channel(ch: &Channel) -> Self {
        ChannelSpec { dim: ch.dim(), kraus: ch.kraus().iter().map(matrix_rows).collect() }
    }
}

impl ProjectionSpec {
    pub fn to_projection(&self, max_dim: usize, tol: &Tolerances) -> Result<CMatrix, CliError> {
        guard(self.dim, max_dim)?;
        let n = self.dim;
        let p = match (&self.matrix, &self.isometry) {
            (Some(rows), None) => parse_matrix(rows, n, "projection")?,
            (None, Some(cols)) => {
                if cols.is_empty() || cols.len() > n {
                    return Err(invalid(format!("isometry: expected 1 to {n} columns")));
                }
                let mut vs = Vec::with_capacity(cols.len());
                for (j, c) in cols.iter().enumerate() {
                    if c.len() != n {
                        return Err(invalid(format!("isometry column {j}: expected length {n}")));
                    }
                    vs.push(c.iter().map(|e| entry(e, "isometry")).collect::<Result<Vec<_>, _>>()?);
                }
                let v = CMatrix::from_columns(n, &vs);
                let gram = &v.adjoint() * &v;
                if gram.dist(&CMatrix::identity(vs.len())) > tol.residual * (vs.len() as f64).sqrt() {
                    return Err(invalid("isometry columns are not orthonormal"));
                }
                &v * &v.adjoint()
            }
            _ => return Err(invalid("projection needs exactly one of \"matrix\" and \"isometry\"")),
        };
        check_projection(&p, n, tol)?;
        Ok(p)
    }

    pub fn from_matrix(p: &CMatrix) -> Self {
        ProjectionSpec { dim: p.rows(), matrix: Some(matrix_rows(p)), isometry: None }
    }
}

impl MatrixSpec {
    pub fn to_matrix(&self, max_dim: usize) -> Result<CMatrix, CliError> {
        guard(self.dim, max_dim)?;
        parse_matrix(&self.matrix, self.dim, "matrix")
    }
}

impl ClassicalSpec {
    pub fn to_matrix(&self, max_dim: usize) -> Result<ClassicalMatrix, CliError> {
        guard(self.matrix.len(), max_dim)?;
        if self.matrix.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid("matrix: non-finite entry"));
        }
        let a = ClassicalMatrix::from_rows(&self.matrix)?;
        if let Some((row, col)) = a.negative_entry() {
            return Err(invalid(format!("matrix: negative entry at ({row}, {col})")));
        }
        Ok(a)
    }
}

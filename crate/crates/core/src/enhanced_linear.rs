//! Rook normal form of matrices under the two-sided unitriangular action.
//!
//! Every matrix `M` can be written as `M = A⁻¹ · R · B` with `A`, `B` upper
//! unitriangular and `R` a rook matrix (at most one nonzero entry per row and
//! per column). `R` is unique; [`rook_reduce`] computes it together with the
//! witnesses, and [`cell_membership`] decides whether a matrix lies in the
//! Bruhat cell attached to a given rook matrix.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalars::{FieldSpec, Scalar};

/// A matrix with at most one nonzero entry in every row and column.
///
/// Hits are stored with 0-based indices, sorted by column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RookMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    hits: Vec<(usize, usize, Scalar)>,
}

impl RookMatrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, mut hits: Vec<(usize, usize, Scalar)>) -> Result<Self> {
        hits.sort_by_key(|h| h.1);
        let mut row_used = vec![false; rows];
        let mut col_used = vec![false; cols];
        for (i, j, v) in &hits {
            if *i >= rows || *j >= cols {
                return Err(Error::IndexOutOfRange(format!("hit ({}, {}) outside {rows}x{cols}", i + 1, j + 1)));
            }
            if !field.owns(v) {
                return Err(Error::FieldMismatch);
            }
            if v.is_zero() {
                return Err(Error::ZeroElement);
            }
            if std::mem::replace(&mut row_used[*i], true) || std::mem::replace(&mut col_used[*j], true) {
                return Err(Error::InvalidComplex(format!("hit ({}, {}) shares a row or column", i + 1, j + 1)));
            }
        }
        Ok(RookMatrix { field, rows, cols, hits })
    }

    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        RookMatrix { field, rows, cols, hits: Vec::new() }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        RookMatrix { field, rows: n, cols: n, hits: (0..n).map(|i| (i, i, field.one())).collect() }
    }

    /// Reads a matrix that is already rook-shaped.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        let hits = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .filter(|&(i, j)| !m.get(i, j).is_zero())
            .map(|(i, j)| (i, j, m.get(i, j).clone()))
            .collect();
        Self::new(m.field(), m.rows(), m.cols(), hits)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn hits(&self) -> &[(usize, usize, Scalar)] {
        &self.hits
    }

    pub fn rank(&self) -> usize {
        self.hits.len()
    }

    pub fn hit_in_col(&self, j: usize) -> Option<(usize, &Scalar)> {
        self.hits.iter().find(|h| h.1 == j).map(|(i, _, v)| (*i, v))
    }

    pub fn hit_in_row(&self, i: usize) -> Option<(usize, &Scalar)> {
        self.hits.iter().find(|h| h.0 == i).map(|(_, j, v)| (*j, v))
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, self.cols);
        for (i, j, v) in &self.hits {
            m.set(*i, *j, v.clone());
        }
        m
    }
}

/// Witnesses of a reduction: `left · M · right⁻¹ = R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitriangularPair {
    pub left: Matrix,
    pub right: Matrix,
}

/// Reduces `m` to its rook representative.
///
/// Columns are reduced left to right by adding multiples of earlier columns
/// until the lowest nonzero entry sits in a fresh row; the entries above each
/// pivot are then cleared from the bottom pivot upwards by adding multiples of
/// lower rows.
pub fn rook_reduce(m: &Matrix) -> (RookMatrix, UnitriangularPair) {
    let field = m.field();
    let (rows, cols) = m.shape();
    let mut w = m.clone();
    let mut col_ops = Matrix::identity(field, cols);
    let mut row_ops = Matrix::identity(field, rows);
    let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut pivots = Vec::new();

    for j in 0..cols {
        while let Some(low) = (0..rows).rev().find(|&i| !w.get(i, j).is_zero()) {
            match pivot_col_of_row[low] {
                Some(earlier) => {
                    let c = -(w.get(low, j) / w.get(low, earlier));
                    w.add_col_multiple(j, earlier, &c);
                    col_ops.add_col_multiple(j, earlier, &c);
                }
                None => {
                    pivot_col_of_row[low] = Some(j);
                    pivots.push((low, j));
                    break;
                }
            }
        }
    }

    pivots.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    for &(p, j) in &pivots {
        let inv = w.get(p, j).inv().expect("pivot is nonzero");
        for i in 0..p {
            if !w.get(i, j).is_zero() {
                let c = -(w.get(i, j) * &inv);
                w.add_row_multiple(i, p, &c);
                row_ops.add_row_multiple(i, p, &c);
            }
        }
    }

    let hits = pivots.iter().map(|&(i, j)| (i, j, w.get(i, j).clone())).collect();
    let rook = RookMatrix::new(field, rows, cols, hits).expect("pivots occupy distinct rows and columns");
    let right = col_ops.inverse().expect("unitriangular");
    (rook, UnitriangularPair { left: row_ops, right })
}

/// Whether entry `(i, j)` is covered by some hit of `r`: a hit lies below
/// and weakly left, or weakly below and strictly left.
pub fn is_covered(r: &RookMatrix, i: usize, j: usize) -> bool {
    r.hits.iter().any(|&(hi, hj, _)| (i < hi && j >= hj) || (i <= hi && j > hj))
}

/// Whether `m` lies in the Bruhat cell of `r`: every uncovered entry of `m`
/// agrees with `r`.
pub fn cell_membership(m: &Matrix, r: &RookMatrix) -> Result<bool> {
    if m.shape() != (r.rows, r.cols) {
        return Err(Error::ShapeMismatch { expected: (r.rows, r.cols), found: m.shape() });
    }
    let dense = r.to_matrix();
    for i in 0..r.rows {
        for j in 0..r.cols {
            if !is_covered(r, i, j) && m.get(i, j) != dense.get(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Height (1-based) and coefficient of `v` with respect to the ordered basis.
///
/// The height is the smallest `s` with `v` in the span of the first `s`
/// basis vectors; the coefficient is the coordinate of `v` on the `s`-th one.
pub fn height_and_coeff(v: &[Scalar], basis: &[Vec<Scalar>]) -> Result<(usize, Scalar)> {
    if v.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroVector);
    }
    let field = v[0].field();
    let b = Matrix::from_columns(field, v.len(), basis);
    if b.rows() != b.cols() || b.rank() != b.cols() {
        return Err(Error::RankDeficient);
    }
    let x = b.solve(v).ok_or(Error::RankDeficient)?;
    let s = x.iter().rposition(|c| !c.is_zero()).expect("v is nonzero");
    Ok((s + 1, x[s].clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// The flag lives on the source; the induced flag lives on the target.
    Surjection,
    /// The flag lives on the target; the induced flag lives on the source.
    Injection,
}

/// A flag with units, presented as an ordered basis, together with the
/// 1-based indices of the original flag at which the induced flag jumps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedFlag {
    pub basis: Vec<Vec<Scalar>>,
    pub jumps: Vec<usize>,
}

/// Transports a flag with units along a surjection or an injection.
pub fn induced_enhancement(m: &Matrix, flag: &[Vec<Scalar>], kind: MapKind) -> Result<InducedFlag> {
    let field = m.field();
    match kind {
        MapKind::Surjection => {
            if flag.len() != m.cols() {
                return Err(Error::ShapeMismatch { expected: (m.cols(), m.cols()), found: (flag.len(), m.cols()) });
            }
            if m.rank() != m.rows() {
                return Err(Error::RankDeficient);
            }
            let images: Vec<Vec<Scalar>> = flag.iter().map(|v| m.apply(v)).collect();
            let mut basis = Vec::new();
            let mut jumps = Vec::new();
            for (s, img) in images.iter().enumerate() {
                let mut trial = basis.clone();
                trial.push(img.clone());
                if Matrix::from_columns(field, m.rows(), &trial).rank() == trial.len() {
                    basis = trial;
                    jumps.push(s + 1);
                }
            }
            Ok(InducedFlag { basis, jumps })
        }
        MapKind::Injection => {
            if flag.len() != m.rows() {
                return Err(Error::ShapeMismatch { expected: (m.rows(), m.rows()), found: (flag.len(), m.rows()) });
            }
            if m.rank() != m.cols() {
                return Err(Error::RankDeficient);
            }
            let b = Matrix::from_columns(field, m.rows(), flag);
            let coords = b.inverse().ok_or(Error::RankDeficient)?.mul(m);
            let n = m.rows();
            let mut basis = Vec::new();
            let mut jumps = Vec::new();
            for s in 0..n {
                let tail = coords.submatrix(s..n, 0..m.cols());
                let mut rhs = vec![field.zero(); n - s];
                rhs[0] = field.one();
                if let Some(x) = tail.solve(&rhs) {
                    basis.push(x);
                    jumps.push(s + 1);
                }
            }
            Ok(InducedFlag { basis, jumps })
        }
    }
}

//! Integer matrices, Smith normal form, and complexes over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::enhanced_complex::{bdata, FilteredComplex, Generator};
use crate::enhanced_linear::cell_membership;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalars::{FieldSpec, Scalar};

/// A dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == c), "ragged rows");
        Self::from_fn(rows.len(), c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Image under ℤ → 𝔽.
    pub fn to_field(&self, field: FieldSpec) -> Matrix {
        Matrix::from_fn(field, self.rows, self.cols, |i, j| field.from_int(self.get(i, j)))
    }

    /// `row[target] += c * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(source, j) * c;
            self.data[target * self.cols + j] += s;
        }
    }

    /// `col[target] += c * col[source]`
    pub fn add_col_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, source) * c;
            self.data[i * self.cols + target] += s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Inserts a zero row and a zero column at index `at` of a square matrix.
    pub(crate) fn insert_zero_index(&mut self, at: usize) {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let old = std::mem::replace(self, IntMatrix::zeros(n + 1, n + 1));
        let map = |i: usize| if i < at { i } else { i + 1 };
        for i in 0..n {
            for j in 0..n {
                self.set(map(i), map(j), old.get(i, j).clone());
            }
        }
    }

    /// Removes row and column `at` of a square matrix.
    pub(crate) fn remove_index(&mut self, at: usize) {
        let n = self.rows;
        let keep: Vec<usize> = (0..n).filter(|&i| i != at).collect();
        *self = self.select(&keep, &keep);
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| self.get(i, i).is_one() && (0..i).all(|j| self.get(i, j).is_zero()))
    }

    /// Inverse of an upper unitriangular matrix, by back substitution.
    pub fn unitriangular_inverse(&self) -> Option<IntMatrix> {
        if !self.is_upper_unitriangular() {
            return None;
        }
        let n = self.rows;
        let mut inv = IntMatrix::identity(n);
        for j in 0..n {
            for i in (0..j).rev() {
                let mut acc = BigInt::zero();
                for k in i + 1..=j {
                    acc += self.get(i, k) * inv.get(k, j);
                }
                inv.set(i, j, -acc);
            }
        }
        Some(inv)
    }
}

/// Smith normal form `u · a · v = diag(d)` with unimodular `u`, `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Invariant factors along the diagonal, `min(rows, cols)` of them,
    /// nonnegative, each dividing the next (zeros last).
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Product of the invariant factors greater than one.
    pub fn torsion_order(&self) -> BigInt {
        self.d.iter().filter(|x| **x > BigInt::one()).product()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (rows, cols) = a.shape();
    let mut m = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);
    'outer: for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = m.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            m.swap_rows(t, pi);
            u.swap_rows(t, pi);
            m.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = m.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = -m.get(i, t).div_floor(&pivot);
                m.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= m.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = -m.get(t, j).div_floor(&pivot);
                m.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= m.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    m.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if m.get(t, t).is_negative() {
            m.negate_row(t);
            u.negate_row(t);
        }
    }
    let d = (0..steps).map(|i| m.get(i, i).clone()).collect();
    SnfResult { d, u, v }
}

/// Determinant over ℚ, returned as an integer.
pub fn int_det(a: &IntMatrix) -> BigInt {
    match a.to_field(FieldSpec::Rationals).det() {
        Scalar::Rat(r) => r.to_integer(),
        Scalar::Mod { .. } => unreachable!(),
    }
}

/// A filtered complex with integer boundary coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZComplex {
    generators: Vec<Generator>,
    boundary: IntMatrix,
}

impl ZComplex {
    pub fn new(generators: Vec<Generator>, boundary: IntMatrix) -> Result<Self> {
        let c = ZComplex { generators, boundary };
        c.to_field(FieldSpec::Rationals).validate()?;
        Ok(c)
    }

    pub fn empty() -> Self {
        ZComplex { generators: Vec::new(), boundary: IntMatrix::zeros(0, 0) }
    }

    pub fn zero(generators: Vec<Generator>) -> Self {
        let n = generators.len();
        ZComplex { generators, boundary: IntMatrix::zeros(n, n) }
    }

    /// Builds a complex from `(upper, lower, coefficient)` triples with 1-based positions.
    pub fn from_entries(generators: Vec<Generator>, entries: &[(usize, usize, i64)]) -> Result<Self> {
        let n = generators.len();
        let mut boundary = IntMatrix::zeros(n, n);
        for &(of, on, c) in entries {
            if of == 0 || on == 0 || of > n || on > n {
                return Err(Error::IndexOutOfRange(format!("entry ({of}, {on})")));
            }
            boundary.set(on - 1, of - 1, BigInt::from(c));
        }
        Self::new(generators, boundary)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub(crate) fn generators_mut(&mut self) -> &mut Vec<Generator> {
        &mut self.generators
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.generators[i].degree
    }

    pub fn boundary(&self) -> &IntMatrix {
        &self.boundary
    }

    pub(crate) fn boundary_mut(&mut self) -> &mut IntMatrix {
        &mut self.boundary
    }

    /// Coefficient of `c_on` in `∂c_of`, 0-based.
    pub fn coeff(&self, of: usize, on: usize) -> &BigInt {
        self.boundary.get(on, of)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.generators.iter().map(|g| g.degree).max()
    }

    pub fn to_field(&self, field: FieldSpec) -> FilteredComplex {
        FilteredComplex::new_unchecked(field, self.generators.clone(), self.boundary.to_field(field))
    }

    /// The integer matrix of `∂_k` in local generator orders.
    pub fn differential(&self, k: usize) -> IntMatrix {
        let degrees = self.degrees();
        let of = |d: usize| -> Vec<usize> { (0..degrees.len()).filter(|&i| degrees[i] == d).collect() };
        let rows = if k == 0 { Vec::new() } else { of(k - 1) };
        self.boundary.select(&rows, &of(k))
    }

    /// The complex in the basis given by the columns of an integer graded
    /// unitriangular `p`.
    pub fn change_basis(&self, p: &IntMatrix) -> Result<ZComplex> {
        let degrees = self.degrees();
        let n = degrees.len();
        let graded = (0..n).all(|t| (t + 1..n).all(|s| degrees[t] == degrees[s] || p.get(t, s).is_zero()));
        let inv = p.unitriangular_inverse().filter(|_| graded && p.rows() == n).ok_or_else(|| {
            Error::InvalidComplex("basis change is not graded unitriangular".into())
        })?;
        Ok(ZComplex { generators: self.generators.clone(), boundary: inv.mul(&self.boundary).mul(p) })
    }

    /// Generators `l+1, …, m` (1-based) with the restricted boundary.
    pub fn slice(&self, l: usize, m: usize) -> Result<ZComplex> {
        if l > m || m > self.len() {
            return Err(Error::IndexOutOfRange(format!("slice ({l}, {m}] of a complex with {} generators", self.len())));
        }
        let keep: Vec<usize> = (l..m).collect();
        Ok(ZComplex { generators: self.generators[l..m].to_vec(), boundary: self.boundary.select(&keep, &keep) })
    }

    /// Order of the torsion subgroup of the total homology.
    pub fn torsion(&self) -> BigInt {
        (1..=self.max_degree().unwrap_or(0)).map(|k| smith_normal_form(&self.differential(k)).torsion_order()).product()
    }
}

/// `#Tors H_•(C^s, C^{t-1})`: torsion of the slice `(t-1, s]`.
pub fn torsion_order(c: &ZComplex, s: usize, t: usize) -> Result<BigInt> {
    if t == 0 || t - 1 > s || s > c.len() {
        return Err(Error::IndexOutOfRange(format!("need 1 <= t <= s + 1 and s <= {}, got s = {s}, t = {t}", c.len())));
    }
    Ok(c.slice(t - 1, s)?.torsion())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTorsion {
    pub upper: usize,
    pub lower: usize,
    pub bruhat: Scalar,
    /// `#Tors H(C^s, C^{t-1})`
    pub numerator: BigInt,
    /// `#Tors H(C^{s-1}, C^t)`
    pub denominator: BigInt,
    pub pass: bool,
}

/// Compares every rational Bruhat number with the ratio of slice torsion orders.
pub fn check_pair_torsion_formula(c: &ZComplex) -> Result<Vec<PairTorsion>> {
    let d = bdata(&c.to_field(FieldSpec::Rationals))?;
    d.pairs()
        .iter()
        .map(|p| {
            let (s, t) = (p.upper, p.lower);
            let numerator = torsion_order(c, s, t)?;
            let denominator = torsion_order(c, s - 1, t + 1)?;
            let ratio = BigRational::new(numerator.clone(), denominator.clone());
            let pass = p.bruhat.abs().as_rational() == Some(&ratio);
            Ok(PairTorsion { upper: s, lower: t, bruhat: p.bruhat.clone(), numerator, denominator, pass })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortPair {
    pub upper: usize,
    pub lower: usize,
    pub bruhat: Scalar,
    /// Coefficient of `c_lower` in `∂c_upper` in the given basis.
    pub raw_coeff: BigInt,
    pub integral: bool,
    pub matches: bool,
    /// The raw coefficient survived every random unitriangular basis change.
    pub stable: bool,
}

impl ShortPair {
    pub fn pass(&self) -> bool {
        self.integral && self.matches && self.stable
    }
}

/// Short pairs of the rational B-data: no pair of the same degree strictly
/// nested inside the segment.
pub fn short_pairs(c: &ZComplex) -> Result<Vec<(usize, usize, Scalar)>> {
    let d = bdata(&c.to_field(FieldSpec::Rationals))?;
    let pairs = d.pairs();
    Ok(pairs
        .iter()
        .filter(|p| {
            !pairs.iter().any(|q| {
                d.degree(q.lower) == d.degree(p.lower) && p.lower < q.lower && q.upper < p.upper
            })
        })
        .map(|p| (p.upper, p.lower, p.bruhat.clone()))
        .collect())
}

/// Checks integrality and basis-independence of Bruhat numbers on short pairs.
pub fn short_pair_check<R: Rng>(c: &ZComplex, changes: usize, rng: &mut R) -> Result<Vec<ShortPair>> {
    let shorts = short_pairs(c)?;
    let variants = (0..changes)
        .map(|_| c.change_basis(&crate::random::graded_unitriangular_int(&c.degrees(), 3, rng)))
        .collect::<Result<Vec<_>>>()?;
    Ok(shorts
        .into_iter()
        .map(|(s, t, bruhat)| {
            let raw_coeff = c.coeff(s - 1, t - 1).clone();
            let integral = bruhat.as_integer().is_some();
            let matches = bruhat.as_integer().as_ref() == Some(&raw_coeff);
            let stable = variants.iter().all(|v| v.coeff(s - 1, t - 1) == &raw_coeff);
            ShortPair { upper: s, lower: t, bruhat, raw_coeff, integral, matches, stable }
        })
        .collect())
}

/// `(every slice is torsion-free, every rational Bruhat number is ±1)`.
///
/// Slices `(t, s]` range over `0 <= t < s <= N`, including those starting
/// at the bottom of the filtration.
pub fn check_pm1_equivalence(c: &ZComplex) -> Result<(bool, bool)> {
    let d = bdata(&c.to_field(FieldSpec::Rationals))?;
    let n = c.len();
    let mut torsion_free = true;
    'scan: for t in 0..n {
        for s in t + 1..=n {
            if !c.slice(t, s)?.torsion().is_one() {
                torsion_free = false;
                break 'scan;
            }
        }
    }
    let units = d.pairs().iter().all(|p| p.bruhat.unit_sign().is_some());
    Ok((torsion_free, units))
}

/// Whether every rational differential of `c` lies in the Bruhat cell of its rook form.
pub fn boundaries_in_cells(c: &ZComplex) -> Result<bool> {
    let q = c.to_field(FieldSpec::Rationals);
    let d = bdata(&q)?;
    for k in 1..=c.max_degree().unwrap_or(0) {
        if !cell_membership(&q.differential(k), &d.rook(k))? {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Filtered chain complexes over a field and their Barannikov data.
//!
//! A complex is an ordered list of graded generators `c_1, …, c_N` together
//! with a boundary matrix `d`, where `d[t][s]` is the coefficient of `c_t` in
//! `∂c_s`. Every prefix `c_1, …, c_s` spans a subcomplex, so `d` is strictly
//! upper triangular. The per-degree differentials `∂_k : C_k → C_{k-1}` are
//! views of `d` restricted to the generators of degrees `k` and `k - 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::enhanced_linear::{rook_reduce, RookMatrix};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalars::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        Generator { name: name.into(), degree }
    }
}

/// Names `c1, c2, …` for the given degree sequence.
pub fn default_generators(degrees: &[usize]) -> Vec<Generator> {
    degrees.iter().enumerate().map(|(i, &d)| Generator::new(format!("c{}", i + 1), d)).collect()
}

/// The first defect found by [`FilteredComplex::validate`]. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape { generators: usize, rows: usize, cols: usize },
    Field,
    NotTriangular { of: usize, on: usize },
    Degree { of: usize, on: usize },
    SquareNonzero { of: usize, on: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { generators, rows, cols } => {
                write!(f, "boundary is {rows}x{cols} but there are {generators} generators")
            }
            Violation::Field => write!(f, "boundary entries live over another field"),
            Violation::NotTriangular { of, on } => {
                write!(f, "boundary of generator {of} involves later generator {on}")
            }
            Violation::Degree { of, on } => {
                write!(f, "boundary of generator {of} involves generator {on} of the wrong degree")
            }
            Violation::SquareNonzero { of, on } => {
                write!(f, "boundary of boundary of generator {of} has a nonzero coefficient on generator {on}")
            }
        }
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::InvalidComplex(v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    field: FieldSpec,
    generators: Vec<Generator>,
    boundary: Matrix,
}

impl FilteredComplex {
    /// Builds a complex and checks it with [`validate`](Self::validate).
    pub fn new(field: FieldSpec, generators: Vec<Generator>, boundary: Matrix) -> Result<Self> {
        let c = Self::new_unchecked(field, generators, boundary);
        c.validate()?;
        Ok(c)
    }

    pub fn new_unchecked(field: FieldSpec, generators: Vec<Generator>, boundary: Matrix) -> Self {
        FilteredComplex { field, generators, boundary }
    }

    /// A complex with zero differential.
    pub fn zero(field: FieldSpec, generators: Vec<Generator>) -> Self {
        let n = generators.len();
        FilteredComplex { field, generators, boundary: Matrix::zeros(field, n, n) }
    }

    pub fn empty(field: FieldSpec) -> Self {
        Self::zero(field, Vec::new())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
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

    pub fn degrees(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    /// The full boundary matrix, indexed by 0-based positions.
    pub fn boundary(&self) -> &Matrix {
        &self.boundary
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.generators.iter().map(|g| g.degree).max()
    }

    /// 0-based positions of the generators of degree `k`, in filtration order.
    pub fn positions(&self, k: usize) -> Vec<usize> {
        positions_of_degree(&self.degrees(), k)
    }

    /// The matrix of `∂_k : C_k → C_{k-1}` in the local generator orders.
    pub fn differential(&self, k: usize) -> Matrix {
        let cols = self.positions(k);
        let rows = if k == 0 { Vec::new() } else { self.positions(k - 1) };
        self.boundary.select(&rows, &cols)
    }

    /// Checks triangularity, degree compatibility and `∂² = 0`.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.len();
        let (rows, cols) = self.boundary.shape();
        if rows != n || cols != n {
            return Err(Violation::Shape { generators: n, rows, cols });
        }
        if self.boundary.field() != self.field {
            return Err(Violation::Field);
        }
        for s in 0..n {
            for t in 0..n {
                if self.boundary.get(t, s).is_zero() {
                    continue;
                }
                if t >= s {
                    return Err(Violation::NotTriangular { of: s + 1, on: t + 1 });
                }
                if self.generators[t].degree + 1 != self.generators[s].degree {
                    return Err(Violation::Degree { of: s + 1, on: t + 1 });
                }
            }
        }
        let square = self.boundary.mul(&self.boundary);
        for s in 0..n {
            for t in 0..n {
                if !square.get(t, s).is_zero() {
                    return Err(Violation::SquareNonzero { of: s + 1, on: t + 1 });
                }
            }
        }
        Ok(())
    }

    /// The complex in the basis given by the columns of `p`: `∂' = p⁻¹ ∂ p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<FilteredComplex> {
        if !is_graded_unitriangular(p, &self.degrees()) {
            return Err(Error::InvalidComplex("basis change is not graded unitriangular".into()));
        }
        let inv = p.inverse().expect("unitriangular matrices are invertible");
        Ok(FilteredComplex {
            field: self.field,
            generators: self.generators.clone(),
            boundary: inv.mul(&self.boundary).mul(p),
        })
    }

    /// Rank of `H_k` by plain Gaussian elimination.
    pub fn betti(&self, k: usize) -> usize {
        self.positions(k).len() - self.differential(k).rank() - self.differential(k + 1).rank()
    }

    /// Total dimension of homology in all degrees.
    pub fn total_homology_dim(&self) -> usize {
        self.len() - 2 * self.boundary.rank()
    }
}

pub(crate) fn positions_of_degree(degrees: &[usize], k: usize) -> Vec<usize> {
    degrees.iter().enumerate().filter(|&(_, &d)| d == k).map(|(i, _)| i).collect()
}

/// Whether `p` is upper unitriangular and only mixes generators of equal degree.
pub fn is_graded_unitriangular(p: &Matrix, degrees: &[usize]) -> bool {
    let n = degrees.len();
    p.shape() == (n, n)
        && p.is_upper_unitriangular()
        && (0..n).all(|t| (t + 1..n).all(|s| degrees[t] == degrees[s] || p.get(t, s).is_zero()))
}

/// One Barannikov pair: `∂` pairs `upper` with `lower` with Bruhat number `bruhat`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pair {
    pub upper: usize,
    pub lower: usize,
    pub bruhat: Scalar,
}

/// Barannikov pairing plus Bruhat numbers. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BData {
    field: FieldSpec,
    degrees: Vec<usize>,
    pairs: Vec<Pair>,
}

impl BData {
    /// Checks that the pairs form a valid pairing for the degree sequence.
    pub fn new(field: FieldSpec, degrees: Vec<usize>, mut pairs: Vec<Pair>) -> Result<Self> {
        let n = degrees.len();
        let mut used = vec![false; n + 1];
        pairs.sort_by_key(|p| p.upper);
        for p in &pairs {
            let ok = p.lower >= 1
                && p.lower < p.upper
                && p.upper <= n
                && degrees[p.lower - 1] + 1 == degrees[p.upper - 1]
                && !p.bruhat.is_zero()
                && field.owns(&p.bruhat);
            if !ok || std::mem::replace(&mut used[p.upper], true) || std::mem::replace(&mut used[p.lower], true) {
                return Err(Error::InvalidComplex(format!("invalid pair ({}, {})", p.upper, p.lower)));
            }
        }
        Ok(BData { field, degrees, pairs })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Degree of the 1-based position `s`.
    pub fn degree(&self, s: usize) -> usize {
        self.degrees[s - 1]
    }

    /// Pairs sorted by upper point.
    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn pair_with_upper(&self, s: usize) -> Option<&Pair> {
        self.pairs.iter().find(|p| p.upper == s)
    }

    pub fn pair_with_lower(&self, t: usize) -> Option<&Pair> {
        self.pairs.iter().find(|p| p.lower == t)
    }

    /// The pair containing `s`, from either end.
    pub fn pair_containing(&self, s: usize) -> Option<&Pair> {
        self.pairs.iter().find(|p| p.upper == s || p.lower == s)
    }

    /// Unpaired positions, ascending.
    pub fn homological(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&s| self.pair_containing(s).is_none()).collect()
    }

    /// Turns the data upside down: position `s` becomes `N + 1 - s` and
    /// degree `k` becomes `top - k`.
    pub fn upside_down(&self, top: usize) -> BData {
        let n = self.len();
        let degrees = self.degrees.iter().rev().map(|&d| top - d).collect();
        let pairs = self
            .pairs
            .iter()
            .map(|p| Pair { upper: n + 1 - p.lower, lower: n + 1 - p.upper, bruhat: p.bruhat.clone() })
            .collect();
        BData::new(self.field, degrees, pairs).expect("reversal preserves validity")
    }

    /// The per-degree rook matrix of `∂_k`, in local generator orders.
    pub fn rook(&self, k: usize) -> RookMatrix {
        let cols = positions_of_degree(&self.degrees, k);
        let rows = if k == 0 { Vec::new() } else { positions_of_degree(&self.degrees, k - 1) };
        let hits = self
            .pairs
            .iter()
            .filter(|p| self.degree(p.upper) == k)
            .map(|p| {
                let i = rows.iter().position(|&r| r + 1 == p.lower).expect("lower has degree k - 1");
                let j = cols.iter().position(|&c| c + 1 == p.upper).expect("upper has degree k");
                (i, j, p.bruhat.clone())
            })
            .collect();
        RookMatrix::new(self.field, rows.len(), cols.len(), hits).expect("pairs form a rook pattern")
    }
}

/// Reads the Barannikov data off the rook forms of the differentials.
pub fn bdata(c: &FilteredComplex) -> Result<BData> {
    c.validate()?;
    let degrees = c.degrees();
    let mut pairs = Vec::new();
    for k in 1..=c.max_degree().unwrap_or(0) {
        let rows = c.positions(k - 1);
        let cols = c.positions(k);
        let (rook, _) = rook_reduce(&c.differential(k));
        for (i, j, v) in rook.hits() {
            pairs.push(Pair { upper: cols[*j] + 1, lower: rows[*i] + 1, bruhat: v.clone() });
        }
    }
    BData::new(c.field(), degrees, pairs)
}

/// A basis in which every differential is a rook matrix, and the complex
/// written in it. The columns of the returned matrix are the new generators.
pub fn barannikov_basis(c: &FilteredComplex) -> Result<(FilteredComplex, Matrix)> {
    c.validate()?;
    let n = c.len();
    let field = c.field();
    let top = c.max_degree().unwrap_or(0);
    // Per degree k: the source-side basis from reducing ∂_k and the
    // target-side basis from reducing ∂_{k+1}.
    let mut p = Matrix::identity(field, n);
    for k in 0..=top {
        let pos = c.positions(k);
        let (_, pair_out) = rook_reduce(&c.differential(k));
        let (rook_in, pair_in) = rook_reduce(&c.differential(k + 1));
        let source = pair_out.right.inverse().expect("unitriangular");
        let target = pair_in.left.inverse().expect("unitriangular");
        for (local, &global) in pos.iter().enumerate() {
            let from = if rook_in.hit_in_row(local).is_some() { &target } else { &source };
            for (li, &gi) in pos.iter().enumerate() {
                p.set(gi, global, from.get(li, local).clone());
            }
        }
    }
    let reduced = c.change_basis(&p)?;
    Ok((reduced, p))
}

/// Cycles representing a flag-adapted basis of homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyEnhancement {
    /// `(position, degree, cycle)` for each homological position, ascending.
    /// Cycles are full-length coordinate vectors in the original basis.
    pub cycles: Vec<(usize, usize, Vec<Scalar>)>,
}

impl HomologyEnhancement {
    /// The cycles of degree `k`, restricted to the degree-`k` generators.
    pub fn local_cycles(&self, c: &FilteredComplex, k: usize) -> Vec<Vec<Scalar>> {
        let pos = c.positions(k);
        self.cycles
            .iter()
            .filter(|(_, d, _)| *d == k)
            .map(|(_, _, v)| pos.iter().map(|&i| v[i].clone()).collect())
            .collect()
    }
}

pub fn homology_enhancement(c: &FilteredComplex) -> Result<HomologyEnhancement> {
    let d = bdata(c)?;
    let (_, p) = barannikov_basis(c)?;
    let cycles = d.homological().into_iter().map(|s| (s, d.degree(s), p.column(s - 1))).collect();
    Ok(HomologyEnhancement { cycles })
}

/// Rook matrices of the map induced on homology by a chain map `a → b`.
///
/// `chain_map[k]` is the degree-`k` component, of size
/// `#(degree k in b) × #(degree k in a)`; missing degrees are zero maps.
pub fn induced_map_rook(a: &FilteredComplex, b: &FilteredComplex, chain_map: &[Matrix]) -> Result<Vec<RookMatrix>> {
    a.validate()?;
    b.validate()?;
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let field = a.field();
    let top = a.max_degree().unwrap_or(0).max(b.max_degree().unwrap_or(0));
    let component = |k: usize| -> Result<Matrix> {
        let shape = (b.positions(k).len(), a.positions(k).len());
        match chain_map.get(k) {
            Some(m) if m.shape() == shape => Ok(m.clone()),
            Some(m) => Err(Error::ShapeMismatch { expected: shape, found: m.shape() }),
            None => Ok(Matrix::zeros(field, shape.0, shape.1)),
        }
    };
    let maps = (0..=top + 1).map(component).collect::<Result<Vec<_>>>()?;
    for k in 1..=top + 1 {
        if maps[k - 1].mul(&a.differential(k)) != b.differential(k).mul(&maps[k]) {
            return Err(Error::NotChainMap(k));
        }
    }
    let ha = homology_enhancement(a)?;
    let hb = homology_enhancement(b)?;
    let mut out = Vec::new();
    for k in 0..=top {
        let src = ha.local_cycles(a, k);
        let dst = hb.local_cycles(b, k);
        let dim_k = b.positions(k).len();
        // Coordinates modulo boundaries: solve against [cycles | image of ∂_{k+1}].
        let bd = b.differential(k + 1);
        let mut columns = dst.clone();
        columns.extend(bd.independent_columns().into_iter().map(|j| bd.column(j)));
        let system = Matrix::from_columns(field, dim_k, &columns);
        let mut induced = Matrix::zeros(field, dst.len(), src.len());
        for (j, cycle) in src.iter().enumerate() {
            let image = maps[k].apply(cycle);
            let x = system.solve(&image).ok_or(Error::NotChainMap(k))?;
            for i in 0..dst.len() {
                induced.set(i, j, x[i].clone());
            }
        }
        out.push(rook_reduce(&induced).0);
    }
    Ok(out)
}

/// Generators `l+1, …, m` (1-based) with the boundary restricted to them.
pub fn slice(c: &FilteredComplex, l: usize, m: usize) -> Result<FilteredComplex> {
    if l > m || m > c.len() {
        return Err(Error::IndexOutOfRange(format!("slice ({l}, {m}] of a complex with {} generators", c.len())));
    }
    Ok(FilteredComplex {
        field: c.field,
        generators: c.generators[l..m].to_vec(),
        boundary: c.boundary.submatrix(l..m, l..m),
    })
}

/// The Barannikov data of `slice(c, l, m)` predicted from that of `c`.
pub fn slice_bdata(d: &BData, l: usize, m: usize) -> Result<BData> {
    if l > m || m > d.len() {
        return Err(Error::IndexOutOfRange(format!("slice ({l}, {m}] of data with {} points", d.len())));
    }
    let pairs = d
        .pairs
        .iter()
        .filter(|p| l < p.lower && p.upper <= m)
        .map(|p| Pair { upper: p.upper - l, lower: p.lower - l, bruhat: p.bruhat.clone() })
        .collect();
    BData::new(d.field, d.degrees[l..m].to_vec(), pairs)
}

/// Reverses the filtration, complements degrees in `top_degree`, and
/// transposes the boundary.
pub fn poincare_dual(c: &FilteredComplex, top_degree: usize) -> Result<FilteredComplex> {
    c.validate()?;
    if c.max_degree().is_some_and(|d| d > top_degree) {
        return Err(Error::BadParameter(format!("top degree {top_degree} is below the maximal degree")));
    }
    let n = c.len();
    let generators = c.generators.iter().rev().map(|g| Generator::new(g.name.clone(), top_degree - g.degree)).collect();
    let boundary = Matrix::from_fn(c.field, n, n, |i, j| c.boundary.get(n - 1 - j, n - 1 - i).clone());
    Ok(FilteredComplex { field: c.field, generators, boundary })
}

/// Total homology dimensions of the slices `(t, s-1]`, `(t-1, s]`, `(t-1, s-1]`, `(t, s]`.
pub fn rel_dims(c: &FilteredComplex, s: usize, t: usize) -> Result<[usize; 4]> {
    if t < 1 || t >= s || s > c.len() {
        return Err(Error::IndexOutOfRange(format!("need 1 <= t < s <= {}, got s = {s}, t = {t}", c.len())));
    }
    let dim = |l, m| slice(c, l, m).map(|x| x.total_homology_dim());
    Ok([dim(t, s - 1)?, dim(t - 1, s)?, dim(t - 1, s - 1)?, dim(t, s)?])
}

/// The four-term criterion for `(s, t)` to be a Barannikov pair.
pub fn rel_dims_pair_criterion(dims: &[usize; 4]) -> bool {
    dims[0] == dims[1] && dims[2] == dims[0] + 1 && dims[3] == dims[0] + 1
}

/// Counts of homological points per degree.
pub fn homological_counts(d: &BData) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for s in d.homological() {
        *counts.entry(d.degree(s)).or_insert(0) += 1;
    }
    counts
}

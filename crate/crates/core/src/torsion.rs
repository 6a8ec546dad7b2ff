//! Torsion of enhanced complexes.
//!
//! [`tau`] evaluates the signed alternating product of Bruhat numbers;
//! [`milnor_torsion`] computes the torsion directly from boundary bases and
//! homology lifts and serves as an independent check.

use rand::Rng;

use crate::enhanced_complex::{BData, FilteredComplex, HomologyEnhancement};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalars::{subgroup_member, Scalar, SubgroupSpec};

/// Per-degree arrangements of positions and the sign of the total permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    /// `(degree, arrangement)` for each degree that has points.
    pub rows: Vec<(usize, Vec<usize>)>,
    pub sign: i8,
}

fn inversions(xs: &[usize]) -> usize {
    (0..xs.len()).map(|i| (i + 1..xs.len()).filter(|&j| xs[i] > xs[j]).count()).sum()
}

/// In each degree: lower points ascending, then homological points
/// ascending, then upper points ordered by their partners.
pub fn perm_sigma(d: &BData) -> SignedPermutation {
    let top = d.degrees().iter().copied().max().unwrap_or(0);
    let homological = d.homological();
    let mut rows = Vec::new();
    let mut total = 0;
    for k in 0..=top {
        let of_degree = |s: &usize| d.degree(*s) == k;
        let mut lowers: Vec<usize> = d.pairs().iter().map(|p| p.lower).filter(of_degree).collect();
        lowers.sort_unstable();
        let hom: Vec<usize> = homological.iter().copied().filter(of_degree).collect();
        let mut uppers: Vec<(usize, usize)> =
            d.pairs().iter().filter(|p| d.degree(p.upper) == k).map(|p| (p.lower, p.upper)).collect();
        uppers.sort_unstable();
        let row: Vec<usize> = lowers.into_iter().chain(hom).chain(uppers.into_iter().map(|u| u.1)).collect();
        if row.is_empty() {
            continue;
        }
        total += inversions(&row);
        rows.push((k, row));
    }
    SignedPermutation { rows, sign: if total % 2 == 0 { 1 } else { -1 } }
}

fn bruhat_product(d: &BData) -> Scalar {
    d.pairs().iter().fold(d.field().one(), |acc, p| {
        let e = if d.degree(p.upper) % 2 == 0 { 1 } else { -1 };
        &acc * &p.bruhat.pow(e)
    })
}

fn signed(x: Scalar, sign: i8) -> Scalar {
    if sign < 0 {
        -x
    } else {
        x
    }
}

/// `(-1)^σ ∏ λ(s)^{(-1)^{deg s}}` over upper points `s`.
pub fn tau(d: &BData) -> Scalar {
    signed(bruhat_product(d), perm_sigma(d).sign)
}

/// Number of unordered pairs of Barannikov segments that overlap
/// (neither nested nor disjoint).
pub fn overlaps(d: &BData) -> usize {
    let pairs = d.pairs();
    let mut count = 0;
    for (i, a) in pairs.iter().enumerate() {
        for b in &pairs[i + 1..] {
            let (a0, a1, b0, b1) = (a.lower, a.upper, b.lower, b.upper);
            if (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1) {
                count += 1;
            }
        }
    }
    count
}

/// `(-1)^𝒪 ∏ λ(s)^{(-1)^{deg s}}` and the overlap count `𝒪`.
pub fn tau_prime(d: &BData) -> (Scalar, usize) {
    let o = overlaps(d);
    (signed(bruhat_product(d), if o % 2 == 0 { 1 } else { -1 }), o)
}

/// How boundary bases and lifts are chosen in [`milnor_torsion_with`].
pub enum Choices<'a, R: Rng> {
    /// Leftmost independent columns and plain solutions.
    Canonical,
    /// Random recombinations of the boundary basis and random cycles added to lifts.
    Random(&'a mut R),
}

/// Alternating product of the transition determinants
/// `[b_k h_k b̃_{k-1} / c_k]^{(-1)^{k+1}}`.
pub fn milnor_torsion(c: &FilteredComplex, h: &HomologyEnhancement) -> Result<Scalar> {
    milnor_torsion_with::<rand::rngs::ThreadRng>(c, h, Choices::Canonical)
}

pub fn milnor_torsion_with<R: Rng>(c: &FilteredComplex, h: &HomologyEnhancement, mut choices: Choices<'_, R>) -> Result<Scalar> {
    c.validate()?;
    let field = c.field();
    let top = c.max_degree().unwrap_or(0);
    let small = |choices: &mut Choices<'_, R>| -> Scalar {
        match choices {
            Choices::Canonical => field.zero(),
            Choices::Random(rng) => field.from_i64(rng.gen_range(-3..=3)),
        }
    };

    // Boundary bases b_k of im ∂_{k+1} ⊂ C_k.
    let mut boundary_bases: Vec<Vec<Vec<Scalar>>> = Vec::new();
    for k in 0..=top {
        let d = c.differential(k + 1);
        let mut basis: Vec<Vec<Scalar>> = d.independent_columns().into_iter().map(|j| d.column(j)).collect();
        if let Choices::Random(_) = choices {
            // Unitriangular recombination keeps it a basis.
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    let m = small(&mut choices);
                    let add: Vec<Scalar> = basis[j].iter().map(|x| x * &m).collect();
                    for (a, b) in basis[i].iter_mut().zip(add) {
                        *a = &*a + &b;
                    }
                }
            }
            if let Some(first) = basis.first_mut() {
                let m = small(&mut choices);
                let scale = if m.is_zero() { field.one() } else { m };
                first.iter_mut().for_each(|x| *x = &*x * &scale);
            }
        }
        boundary_bases.push(basis);
    }

    let mut result = field.one();
    for k in 0..=top {
        let dim = c.positions(k).len();
        let mut columns = boundary_bases[k].clone();
        let cycles = h.local_cycles(c, k);
        let dk = c.differential(k);
        if cycles.iter().any(|z| dk.apply(z).iter().any(|x| !x.is_zero())) {
            return Err(Error::NotABasis(k));
        }
        columns.extend(cycles);
        if k > 0 {
            let dk = c.differential(k);
            let kernel = dk.nullspace();
            for b in &boundary_bases[k - 1] {
                let mut x = dk.solve(b).ok_or(Error::NotABasis(k))?;
                for z in &kernel {
                    let m = small(&mut choices);
                    for (a, zi) in x.iter_mut().zip(z) {
                        *a = &*a + &(zi * &m);
                    }
                }
                columns.push(x);
            }
        }
        if columns.len() != dim {
            return Err(Error::NotABasis(k));
        }
        let det = Matrix::from_columns(field, dim, &columns).det();
        if det.is_zero() {
            return Err(Error::NotABasis(k));
        }
        let e = if k % 2 == 0 { -1 } else { 1 };
        result = &result * &det.pow(e);
    }
    Ok(result)
}

/// Whether two B-data agree up to multiplying Bruhat numbers by elements of `g`.
pub fn bdata_equal_mod_subgroup(d1: &BData, d2: &BData, g: &SubgroupSpec) -> Result<bool> {
    if d1.field() != d2.field() || g.generators().iter().any(|x| x.field() != d1.field()) {
        return Err(Error::FieldMismatch);
    }
    if d1.degrees() != d2.degrees() || d1.pairs().len() != d2.pairs().len() {
        return Ok(false);
    }
    for (p, q) in d1.pairs().iter().zip(d2.pairs()) {
        if p.upper != q.upper || p.lower != q.lower {
            return Ok(false);
        }
        if !subgroup_member(&(&p.bruhat / &q.bruhat), g, d1.field())? {
            return Ok(false);
        }
    }
    Ok(true)
}

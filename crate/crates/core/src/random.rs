//! Seeded random complexes and basis changes.
//!
//! Complexes are generated from a random rook-shaped differential (which
//! squares to zero automatically, since no point is both upper and lower)
//! followed by random graded unitriangular changes of basis. Integer
//! complexes additionally go through random crossings so that their
//! rational Bruhat numbers need not be integers.

use num_bigint::BigInt;
use rand::Rng;

use crate::enhanced_complex::{default_generators, FilteredComplex};
use crate::error::Result;
use crate::integral::{IntMatrix, ZComplex};
use crate::matrix::Matrix;
use crate::paths::{apply_move, Move};
use crate::scalars::FieldSpec;

/// Random upper unitriangular integer matrix mixing only equal degrees.
pub fn graded_unitriangular_int<R: Rng>(degrees: &[usize], bound: i64, rng: &mut R) -> IntMatrix {
    let n = degrees.len();
    IntMatrix::from_fn(n, n, |t, s| {
        if t == s {
            BigInt::from(1)
        } else if t < s && degrees[t] == degrees[s] {
            BigInt::from(rng.gen_range(-bound..=bound))
        } else {
            BigInt::from(0)
        }
    })
}

/// Random graded unitriangular matrix over `field` with small integer entries.
pub fn graded_unitriangular<R: Rng>(field: FieldSpec, degrees: &[usize], bound: i64, rng: &mut R) -> Matrix {
    graded_unitriangular_int(degrees, bound, rng).to_field(field)
}

pub fn random_degrees<R: Rng>(n: usize, max_degree: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..=max_degree)).collect()
}

/// A random rook-shaped integer boundary: each position becomes, with
/// probability `pair_probability`, the upper partner of a random free
/// earlier position one degree lower.
pub fn rook_seed<R: Rng>(degrees: &[usize], max_coeff: i64, pair_probability: f64, rng: &mut R) -> IntMatrix {
    let n = degrees.len();
    let mut used = vec![false; n];
    let mut d = IntMatrix::zeros(n, n);
    for s in 0..n {
        if used[s] || degrees[s] == 0 || !rng.gen_bool(pair_probability) {
            continue;
        }
        let free: Vec<usize> = (0..s).filter(|&t| !used[t] && degrees[t] + 1 == degrees[s]).collect();
        if free.is_empty() {
            continue;
        }
        let t = free[rng.gen_range(0..free.len())];
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-max_coeff..=max_coeff);
        }
        d.set(t, s, BigInt::from(c));
        used[s] = true;
        used[t] = true;
    }
    d
}

/// A random valid complex over `field` with `n` generators.
pub fn random_complex<R: Rng>(field: FieldSpec, n: usize, max_degree: usize, rng: &mut R) -> FilteredComplex {
    let degrees = random_degrees(n, max_degree, rng);
    let seed = rook_seed(&degrees, 6, 0.7, rng).to_field(field);
    let c = FilteredComplex::new_unchecked(field, default_generators(&degrees), seed);
    let p = graded_unitriangular(field, &degrees, 3, rng);
    c.change_basis(&p).expect("graded unitriangular")
}

/// A random valid integer complex with `n` generators and coefficients of
/// rook seeds bounded by `max_coeff`.
pub fn random_zcomplex<R: Rng>(n: usize, max_degree: usize, max_coeff: i64, rng: &mut R) -> ZComplex {
    let degrees = random_degrees(n, max_degree, rng);
    let seed = rook_seed(&degrees, max_coeff, 0.7, rng);
    let mut c = ZComplex::new(default_generators(&degrees), seed).expect("rook seeds square to zero");
    if n >= 2 {
        for _ in 0..6 {
            c = c.change_basis(&graded_unitriangular_int(&c.degrees(), 2, rng)).expect("graded unitriangular");
            for _ in 0..2 * n {
                let position = rng.gen_range(1..n);
                if let Ok(next) = apply_move(&c, &Move::Swap { position }) {
                    c = next;
                }
            }
        }
    }
    let degrees = c.degrees();
    c.change_basis(&graded_unitriangular_int(&degrees, 1, rng)).expect("graded unitriangular")
}

/// A random acyclic integer complex: every generator is paired, all seeds are ±1 or small.
pub fn random_acyclic_zcomplex<R: Rng>(pairs: usize, max_degree: usize, rng: &mut R) -> Result<ZComplex> {
    let mut c = ZComplex::empty();
    for _ in 0..pairs {
        let position = rng.gen_range(1..=c.len() + 1);
        let degree = rng.gen_range(0..max_degree.max(1));
        c = apply_move(&c, &Move::Birth { position, degree, sign: if rng.gen_bool(0.5) { 1 } else { -1 } })?;
    }
    Ok(c)
}

//! Exact scalars over ℚ and 𝔽_p.
//!
//! A [`Scalar`] is either a reduced fraction of big integers or a residue
//! modulo a prime. Both variants have a unique canonical form, so derived
//! equality is structural equality of mathematical values.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The base field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    /// 𝔽_p for a prime `p`.
    Prime(u64),
}

impl FieldSpec {
    /// Checked constructor for 𝔽_p.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Mod { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Mod { value: 1 % p, modulus: *p },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_int(&BigInt::from(n))
    }

    /// Image of an integer under ℤ → 𝔽.
    pub fn from_int(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(p) => Scalar::Mod { value: reduce_mod(n, *p), modulus: *p },
        }
    }

    /// Whether `s` is an element of this field.
    pub fn owns(&self, s: &Scalar) -> bool {
        s.field() == *self
    }

    /// Parses a scalar string ("a", "a/b", or a residue) into this field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Parse(format!("invalid scalar {text:?}"));
        let (num, den) = match text.split_once('/') {
            Some((a, b)) => (
                BigInt::from_str(a.trim()).map_err(|_| bad())?,
                BigInt::from_str(b.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(text).map_err(|_| bad())?, BigInt::one()),
        };
        canonicalize(&num, &den, *self)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" => Ok(FieldSpec::Rationals),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown field {other:?}")))?;
                FieldSpec::prime(p)
            }
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

/// Builds the canonical scalar `numerator / denominator` in `field`.
pub fn canonicalize(numerator: &BigInt, denominator: &BigInt, field: FieldSpec) -> Result<Scalar> {
    if denominator.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    match field {
        FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(numerator.clone(), denominator.clone()))),
        FieldSpec::Prime(p) => {
            let d = reduce_mod(denominator, p);
            if d == 0 {
                return Err(Error::NonInvertibleDenominator(p));
            }
            let n = reduce_mod(numerator, p);
            Ok(Scalar::Mod { value: mul_mod(n, inv_mod(d, p), p), modulus: p })
        }
    }
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Mod { value, modulus } => Scalar::Mod { value: inv_mod(*value, *modulus), modulus: *modulus },
        })
    }

    /// `self^e` for a signed exponent. Panics on `0^e` with `e < 0`.
    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut acc = self.field().one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            k >>= 1;
        }
        acc
    }

    /// Absolute value over ℚ; identity over 𝔽_p.
    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.abs()),
            other => other.clone(),
        }
    }

    /// The rational value, if this is an element of ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    /// The integer value, when this is an integral rational.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Rat(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    /// `+1` or `-1` when the scalar is one of them.
    pub fn unit_sign(&self) -> Option<i8> {
        if self.is_one() {
            Some(1)
        } else if (-self).is_one() {
            Some(-1)
        } else {
            None
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

fn same_field(a: &Scalar, b: &Scalar) -> u64 {
    match (a, b) {
        (Scalar::Mod { modulus: p, .. }, Scalar::Mod { modulus: q, .. }) if p == q => *p,
        (Scalar::Rat(_), Scalar::Rat(_)) => 0,
        _ => panic!("arithmetic between scalars of different fields: {a:?} and {b:?}"),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let p = same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, .. }, Scalar::Mod { value: b, .. }) => {
                Scalar::Mod { value: ((*a as u128 + *b as u128) % p as u128) as u64, modulus: p }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let p = same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, .. }, Scalar::Mod { value: b, .. }) => {
                Scalar::Mod { value: mul_mod(*a, *b, p), modulus: p }
            }
            _ => unreachable!(),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod { value: (modulus - value) % modulus, modulus: *modulus },
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// A multiplicative subgroup of 𝔽* given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSpec {
    generators: Vec<Scalar>,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<Scalar>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptySubgroup);
        }
        if generators.iter().any(Scalar::is_zero) {
            return Err(Error::ZeroElement);
        }
        Ok(SubgroupSpec { generators })
    }

    /// The trivial subgroup {1}.
    pub fn trivial(field: FieldSpec) -> Self {
        SubgroupSpec { generators: vec![field.one()] }
    }

    /// The subgroup {±1}.
    pub fn signs(field: FieldSpec) -> Self {
        SubgroupSpec { generators: vec![-field.one()] }
    }

    pub fn generators(&self) -> &[Scalar] {
        &self.generators
    }
}

/// Decides whether `x` is a product of integer powers of the generators of `g`.
///
/// Over ℚ this is lattice membership of signed prime-exponent vectors; over
/// 𝔽_p the subgroup is enumerated.
pub fn subgroup_member(x: &Scalar, g: &SubgroupSpec, field: FieldSpec) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !field.owns(x) || g.generators.iter().any(|h| !field.owns(h)) {
        return Err(Error::FieldMismatch);
    }
    match field {
        FieldSpec::Prime(p) => {
            let mut members = vec![false; p as usize];
            let mut frontier = vec![1u64];
            members[1] = true;
            while let Some(y) = frontier.pop() {
                for h in &g.generators {
                    let Scalar::Mod { value, .. } = h else { unreachable!() };
                    let z = mul_mod(y, *value, p);
                    if !members[z as usize] {
                        members[z as usize] = true;
                        frontier.push(z);
                    }
                }
            }
            let Scalar::Mod { value, .. } = x else { unreachable!() };
            Ok(members[*value as usize])
        }
        FieldSpec::Rationals => rational_lattice_member(x, g),
    }
}

/// Signed prime-exponent vector of a nonzero rational: (sign bit, [(prime, exponent)]).
fn factor_rational(r: &BigRational) -> Result<(i64, Vec<(u64, i64)>)> {
    let sign = if r.is_negative() { 1 } else { 0 };
    let mut out: Vec<(u64, i64)> = Vec::new();
    for (part, direction) in [(r.numer(), 1i64), (r.denom(), -1i64)] {
        let n = part.abs().to_u64().ok_or(Error::ScalarTooLarge)?;
        for (prime, e) in trial_factor(n) {
            match out.iter_mut().find(|(q, _)| *q == prime) {
                Some(entry) => entry.1 += direction * e,
                None => out.push((prime, direction * e)),
            }
        }
    }
    Ok((sign, out))
}

fn rational_lattice_member(x: &Scalar, g: &SubgroupSpec) -> Result<bool> {
    let target = factor_rational(x.as_rational().expect("rational"))?;
    let gens = g
        .generators
        .iter()
        .map(|h| factor_rational(h.as_rational().expect("rational")))
        .collect::<Result<Vec<_>>>()?;

    let mut primes: Vec<u64> = target.1.iter().map(|(p, _)| *p).collect();
    for (_, fac) in &gens {
        primes.extend(fac.iter().map(|(p, _)| *p));
    }
    primes.sort_unstable();
    primes.dedup();

    // Coordinate 0 is the sign (an integer taken mod 2), the rest are prime exponents.
    let embed = |(sign, fac): &(i64, Vec<(u64, i64)>)| -> Vec<i64> {
        let mut v = vec![0i64; primes.len() + 1];
        v[0] = *sign;
        for (p, e) in fac {
            let idx = primes.binary_search(p).expect("prime collected");
            v[idx + 1] = *e;
        }
        v
    };
    let mut rows: Vec<Vec<i64>> = gens.iter().map(embed).collect();
    let mut relation = vec![0i64; primes.len() + 1];
    relation[0] = 2;
    rows.push(relation);
    Ok(in_integer_row_lattice(rows, embed(&target)))
}

/// Tests whether `target` lies in the ℤ-span of `rows` via Hermite-style echelon form.
fn in_integer_row_lattice(mut rows: Vec<Vec<i64>>, mut target: Vec<i64>) -> bool {
    let width = target.len();
    let mut pivot_row = 0;
    let mut echelon: Vec<(usize, Vec<i64>)> = Vec::new();
    for col in 0..width {
        // gcd-combine every remaining row into a single pivot for this column
        loop {
            let nonzero: Vec<usize> = (pivot_row..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let min = *nonzero.iter().min_by_key(|&&r| rows[r][col].abs()).expect("nonempty");
            for &r in &nonzero {
                if r != min {
                    let q = rows[r][col].div_euclid(rows[min][col]);
                    let pivot = rows[min].clone();
                    for (a, b) in rows[r].iter_mut().zip(&pivot) {
                        *a -= q * b;
                    }
                }
            }
        }
        if let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) {
            rows.swap(pivot_row, r);
            echelon.push((col, rows[pivot_row].clone()));
            pivot_row += 1;
        }
    }
    for (col, row) in &echelon {
        let (q, rem) = target[*col].div_rem(&row[*col]);
        if rem != 0 {
            return false;
        }
        for (t, b) in target.iter_mut().zip(row) {
            *t -= q * b;
        }
    }
    target.iter().all(|&t| t == 0)
}

fn trial_factor(mut n: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    trial_factor(p) == vec![(p, 1)]
}

fn reduce_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    debug_assert!(e.gcd.is_one());
    reduce_mod(&e.x, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        canonicalize(&n.into(), &d.into(), FieldSpec::Rationals).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(q(4, -6), q(-2, 3));
        assert_eq!(q(4, -6).to_string(), "-2/3");
        assert_eq!(q(1, 1), FieldSpec::Rationals.one());
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(canonicalize(&3.into(), &2.into(), f7).unwrap(), Scalar::Mod { value: 5, modulus: 7 });
    }

    #[test]
    fn canonicalize_errors() {
        assert!(matches!(canonicalize(&1.into(), &0.into(), FieldSpec::Rationals), Err(Error::ZeroDenominator)));
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(matches!(canonicalize(&1.into(), &14.into(), f7), Err(Error::NonInvertibleDenominator(7))));
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("Fp:5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert!("Fp:6".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(11).to_string(), "Fp:11");
    }

    #[test]
    fn subgroup_examples() {
        let g = SubgroupSpec::new(vec![q(2, 1)]).unwrap();
        assert!(subgroup_member(&q(4, 1), &g, FieldSpec::Rationals).unwrap());
        assert!(!subgroup_member(&q(-2, 1), &g, FieldSpec::Rationals).unwrap());
        assert!(subgroup_member(&q(1, 8), &g, FieldSpec::Rationals).unwrap());
        let f7 = FieldSpec::Prime(7);
        let g7 = SubgroupSpec::new(vec![f7.from_i64(2)]).unwrap();
        assert!(!subgroup_member(&f7.from_i64(6), &g7, f7).unwrap());
        assert!(subgroup_member(&f7.from_i64(4), &g7, f7).unwrap());
        assert!(matches!(subgroup_member(&f7.zero(), &g7, f7), Err(Error::ZeroElement)));
    }

    #[test]
    fn subgroup_mixed_generators() {
        // ⟨-1, 6, 4⟩ contains 3/2 = 6/4 and -9/4 = -(6/4)^2
        let g = SubgroupSpec::new(vec![q(-1, 1), q(6, 1), q(4, 1)]).unwrap();
        assert!(subgroup_member(&q(3, 2), &g, FieldSpec::Rationals).unwrap());
        assert!(subgroup_member(&q(-9, 4), &g, FieldSpec::Rationals).unwrap());
        assert!(!subgroup_member(&q(3, 1), &g, FieldSpec::Rationals).unwrap());
        assert!(!subgroup_member(&q(2, 1), &g, FieldSpec::Rationals).unwrap());
    }

    #[test]
    fn exhaustive_f5_round_trips() {
        let f5 = FieldSpec::Prime(5);
        for a in 0..5 {
            for b in 0..5 {
                let (x, y) = (f5.from_i64(a), f5.from_i64(b));
                assert_eq!(&(&x + &y) - &y, x);
                if !y.is_zero() {
                    assert_eq!(&(&x * &y) / &y, x);
                }
            }
        }
    }

    #[test]
    fn signed_powers() {
        assert_eq!(q(2, 1).pow(-3), q(1, 8));
        assert_eq!(q(-3, 2).pow(2), q(9, 4));
        assert_eq!(FieldSpec::Prime(7).from_i64(3).pow(-1), FieldSpec::Prime(7).from_i64(5));
    }
}

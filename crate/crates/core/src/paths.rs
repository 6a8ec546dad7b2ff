//! One-parameter move calculus on integer filtered complexes.
//!
//! A path of complexes is modelled by a script of elementary moves: births
//! and deaths of cancelling pairs, transpositions of adjacent generators
//! (crossings of critical values), handle slides, and orientation flips.
//! [`simulate`] runs a script and records the events; [`verify_akh`] checks
//! the parity law relating the change of `τ′` to the number of crossings
//! and negative cusps.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::enhanced_complex::{bdata, BData, Generator};
use crate::enhanced_linear::rook_reduce;
use crate::error::{Error, Result};
use crate::integral::{IntMatrix, ZComplex};
use crate::matrix::Matrix;
use crate::scalars::{FieldSpec, Scalar};
use crate::torsion::tau_prime;

/// An elementary move. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum Move {
    /// Inserts a generator of `degree` at `position` and one of `degree + 1`
    /// right after it, with `∂(upper) = sign · lower`.
    Birth { position: usize, degree: usize, sign: i8 },
    /// Removes the isolated cancelling pair at `position`, `position + 1`.
    Death { position: usize },
    /// Transposes the generators at `position` and `position + 1`.
    Swap { position: usize },
    /// Replaces the generator at `position + 1` by itself plus `coeff` times
    /// the one at `position` (equal degrees).
    Slide { position: usize, coeff: i64 },
    /// Replaces the generator at `position` by its negative.
    Negate { position: usize },
}

fn check_position(c: &ZComplex, position: usize, width: usize) -> Result<usize> {
    if position == 0 || position + width - 1 > c.len() {
        return Err(Error::PositionOutOfRange(position));
    }
    Ok(position - 1)
}

/// Sign of the cancellation coefficient if `(s, s+1)` (0-based) is an isolated cancelling pair.
fn cancellation_sign(c: &ZComplex, s: usize) -> Option<i8> {
    if s + 1 >= c.len() || c.degree(s + 1) != c.degree(s) + 1 {
        return None;
    }
    let d = c.boundary();
    let coeff = d.get(s, s + 1);
    let sign = if coeff.is_one() {
        1
    } else if (-coeff).is_one() {
        -1
    } else {
        return None;
    };
    let n = c.len();
    let row_clear = (0..n).all(|j| j == s + 1 || d.get(s, j).is_zero());
    let col_clear = (0..n).all(|i| i == s || d.get(i, s + 1).is_zero());
    (row_clear && col_clear).then_some(sign)
}

pub fn apply_move(state: &ZComplex, m: &Move) -> Result<ZComplex> {
    let mut next = state.clone();
    match *m {
        Move::Birth { position, degree, sign } => {
            if position == 0 || position > state.len() + 1 {
                return Err(Error::PositionOutOfRange(position));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::BadParameter(format!("birth sign must be 1 or -1, got {sign}")));
            }
            let at = position - 1;
            let lower = fresh_name(state, "x");
            let upper = fresh_name_excluding(state, "y", &lower);
            next.boundary_mut().insert_zero_index(at);
            next.boundary_mut().insert_zero_index(at);
            next.boundary_mut().set(at, at + 1, BigInt::from(sign));
            let gens = next.generators_mut();
            gens.insert(at, Generator::new(upper, degree + 1));
            gens.insert(at, Generator::new(lower, degree));
        }
        Move::Death { position } => {
            let s = check_position(state, position, 2)?;
            if cancellation_sign(state, s).is_none() {
                return Err(Error::DeathNotCancellable(position, position + 1));
            }
            next.boundary_mut().remove_index(s + 1);
            next.boundary_mut().remove_index(s);
            next.generators_mut().drain(s..s + 2);
        }
        Move::Swap { position } => {
            let s = check_position(state, position, 2)?;
            if state.degree(s + 1) == state.degree(s) + 1 && !state.coeff(s + 1, s).is_zero() {
                return Err(Error::SwapBlockedByIncidence(position, position + 1));
            }
            next.boundary_mut().swap_rows(s, s + 1);
            next.boundary_mut().swap_cols(s, s + 1);
            next.generators_mut().swap(s, s + 1);
        }
        Move::Slide { position, coeff } => {
            let s = check_position(state, position, 2)?;
            if state.degree(s) != state.degree(s + 1) {
                return Err(Error::SlideDegreeMismatch(position, position + 1));
            }
            let m = BigInt::from(coeff);
            next.boundary_mut().add_col_multiple(s + 1, s, &m);
            next.boundary_mut().add_row_multiple(s, s + 1, &-m);
        }
        Move::Negate { position } => {
            let s = check_position(state, position, 1)?;
            next.boundary_mut().negate_row(s);
            next.boundary_mut().negate_col(s);
        }
    }
    debug_assert!(next.to_field(FieldSpec::Rationals).validate().is_ok());
    Ok(next)
}

fn fresh_name(c: &ZComplex, prefix: &str) -> String {
    fresh_name_excluding(c, prefix, "")
}

fn fresh_name_excluding(c: &ZComplex, prefix: &str, taken: &str) -> String {
    (1..)
        .map(|i| format!("{prefix}{i}"))
        .find(|n| n != taken && c.generators().iter().all(|g| &g.name != n))
        .expect("infinitely many names")
}

/// The move undoing `m` when applied to the state `m` produced from `before`.
pub fn inverse_move(before: &ZComplex, m: &Move) -> Result<Move> {
    Ok(match *m {
        Move::Birth { position, .. } => Move::Death { position },
        Move::Death { position } => {
            let s = check_position(before, position, 2)?;
            let sign = cancellation_sign(before, s).ok_or(Error::DeathNotCancellable(position, position + 1))?;
            Move::Birth { position, degree: before.degree(s), sign }
        }
        Move::Swap { position } => Move::Swap { position },
        Move::Slide { position, coeff } => Move::Slide { position, coeff: -coeff },
        Move::Negate { position } => Move::Negate { position },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapKind {
    Trivial,
    NonTrivial,
}

/// Partner and Bruhat number of a point before and after a swap, in the
/// indices of the state before the swap. `None` means homological.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolvedPoint {
    pub position: usize,
    pub before: Option<(usize, Scalar)>,
    pub after: Option<(usize, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapReport {
    pub kind: SwapKind,
    pub involved: Vec<InvolvedPoint>,
}

fn partner(d: &BData, s: usize) -> Option<(usize, Scalar)> {
    d.pair_containing(s).map(|p| (if p.upper == s { p.lower } else { p.upper }, p.bruhat.clone()))
}

/// Compares the B-data on both sides of a swap of equal-degree generators.
///
/// Points other than the two swapped ones and their partners must keep
/// their partners and numbers; this is checked and reported as an internal
/// error if violated.
pub fn classify_swap(before: &ZComplex, after: &ZComplex, position: usize, field: FieldSpec) -> Result<SwapReport> {
    let s = check_position(before, position, 2)?;
    if before.degree(s) != before.degree(s + 1) {
        return Err(Error::NotAMaxwellEvent(position));
    }
    let b0 = bdata(&before.to_field(field))?;
    let b1 = bdata(&after.to_field(field))?;
    let sigma = |x: usize| {
        if x == position {
            position + 1
        } else if x == position + 1 {
            position
        } else {
            x
        }
    };
    let after_partner = |x: usize| partner(&b1, sigma(x)).map(|(p, l)| (sigma(p), l));

    let mut involved: Vec<usize> = vec![position, position + 1];
    for x in [position, position + 1] {
        for p in [partner(&b0, x), after_partner(x)].into_iter().flatten() {
            if !involved.contains(&p.0) {
                involved.push(p.0);
            }
        }
    }
    for x in 1..=before.len() {
        if !involved.contains(&x) && partner(&b0, x) != after_partner(x) {
            return Err(Error::InvalidComplex(format!("swap at {position} changed the pair of uninvolved point {x}")));
        }
    }
    let kind = if [position, position + 1].iter().all(|&x| partner(&b0, x) == after_partner(x)) {
        SwapKind::Trivial
    } else {
        SwapKind::NonTrivial
    };
    let involved = involved
        .into_iter()
        .map(|x| InvolvedPoint { position: x, before: partner(&b0, x), after: after_partner(x) })
        .collect();
    Ok(SwapReport { kind, involved })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Birth { sign: i8 },
    Death { sign: i8 },
    /// A crossing; `same_degree` crossings also carry a classification.
    Crossing { same_degree: bool, kind: Option<SwapKind> },
    Slide,
    Negate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub mv: Move,
    pub event: Event,
    pub bdata: BData,
    pub tau_prime: Scalar,
    /// Running counters after this step.
    pub crossings: usize,
    pub negative_cusps: usize,
    pub flips: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTrace {
    pub field: FieldSpec,
    pub start: ZComplex,
    pub end: ZComplex,
    pub start_bdata: BData,
    pub start_tau_prime: Scalar,
    pub steps: Vec<TraceStep>,
    /// Number of crossings `𝒳`.
    pub maxwell_count: usize,
    /// Signs of births and deaths, in order.
    pub cusps: Vec<(bool, i8)>,
    pub negative_cusps: usize,
    /// Orientation flips performed by `Negate` moves.
    pub flips: usize,
}

/// Runs a script, recording B-data, `τ′` and event counters after every step.
pub fn simulate(script: &[Move], start: &ZComplex, field: FieldSpec) -> Result<PathTrace> {
    let wrap = |step: usize| move |e: Error| Error::Move { step, source: Box::new(e) };
    let start_bdata = bdata(&start.to_field(field))?;
    let start_tau_prime = tau_prime(&start_bdata).0;
    let mut state = start.clone();
    let mut steps = Vec::with_capacity(script.len());
    let (mut crossings, mut negative_cusps, mut flips) = (0, 0, 0);
    let mut cusps = Vec::new();
    for (i, m) in script.iter().enumerate() {
        let step = i + 1;
        let next = apply_move(&state, m).map_err(wrap(step))?;
        let event = match *m {
            Move::Birth { sign, .. } => Event::Birth { sign },
            Move::Death { position } => Event::Death { sign: cancellation_sign(&state, position - 1).expect("checked") },
            Move::Swap { position } => {
                let same = state.degree(position - 1) == state.degree(position);
                let kind = if same { Some(classify_swap(&state, &next, position, field).map_err(wrap(step))?.kind) } else { None };
                Event::Crossing { same_degree: same, kind }
            }
            Move::Slide { .. } => Event::Slide,
            Move::Negate { .. } => Event::Negate,
        };
        match event {
            Event::Birth { sign } | Event::Death { sign } => {
                cusps.push((matches!(event, Event::Birth { .. }), sign));
                negative_cusps += usize::from(sign < 0);
            }
            Event::Crossing { .. } => crossings += 1,
            Event::Negate => flips += 1,
            Event::Slide => {}
        }
        let d = bdata(&next.to_field(field)).map_err(wrap(step))?;
        let tp = tau_prime(&d).0;
        steps.push(TraceStep { mv: m.clone(), event, bdata: d, tau_prime: tp, crossings, negative_cusps, flips });
        state = next;
    }
    Ok(PathTrace {
        field,
        start: start.clone(),
        end: state,
        start_bdata,
        start_tau_prime,
        steps,
        maxwell_count: crossings,
        cusps,
        negative_cusps,
        flips,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AkhReport {
    /// `τ′(end)/τ′(start) · (-1)^𝒳 · (-1)^{n𝒞} = 1`.
    pub identity: bool,
    /// The same identity with orientation flips counted as sign changes.
    pub folded_identity: bool,
    /// The folded identity held after every step.
    pub every_step: bool,
    /// `𝒳 + n𝒞 ≡ 0 (mod 2)` (with flips folded in), when both endpoints are empty.
    pub corollary: Option<bool>,
}

impl AkhReport {
    pub fn holds(&self) -> bool {
        self.folded_identity && self.every_step && self.corollary.unwrap_or(true)
    }
}

fn parity_sign(field: FieldSpec, count: usize) -> Scalar {
    if count % 2 == 0 {
        field.one()
    } else {
        -field.one()
    }
}

/// Evaluates the parity law on a trace whose states are all acyclic.
pub fn verify_akh(trace: &PathTrace) -> Result<AkhReport> {
    let field = trace.field;
    if field.characteristic() == 2 {
        return Err(Error::CharTwoField);
    }
    if !trace.start_bdata.homological().is_empty() {
        return Err(Error::AcyclicityViolated(0));
    }
    if let Some(i) = trace.steps.iter().position(|s| !s.bdata.homological().is_empty()) {
        return Err(Error::AcyclicityViolated(i + 1));
    }
    let law = |tp: &Scalar, count: usize| &(tp / &trace.start_tau_prime) * &parity_sign(field, count);
    let (end_tp, x, nc, flips) = match trace.steps.last() {
        Some(s) => (s.tau_prime.clone(), s.crossings, s.negative_cusps, s.flips),
        None => (trace.start_tau_prime.clone(), 0, 0, 0),
    };
    let identity = law(&end_tp, x + nc).is_one();
    let folded_identity = law(&end_tp, x + nc + flips).is_one();
    let every_step = trace.steps.iter().all(|s| law(&s.tau_prime, s.crossings + s.negative_cusps + s.flips).is_one());
    let corollary = (trace.start.is_empty() && trace.end.is_empty()).then_some((x + nc + flips) % 2 == 0);
    Ok(AkhReport { identity, folded_identity, every_step, corollary })
}

/// A script that creates a pair with Bruhat number `lambda` and a pair with
/// `-1/lambda` in degrees `(degree - 1, degree)`, inserted into `base` at
/// `insert_position` (1-based, up to `N + 1`).
///
/// Integers (and all elements of 𝔽_p) need two births, one slide and one
/// crossing. A non-integral rational `p/q` needs a four-by-four block built
/// from four births by crossings and slides.
pub fn realize(lambda: &Scalar, base: &ZComplex, degree: usize, insert_position: usize) -> Result<Vec<Move>> {
    if lambda.is_zero() {
        return Err(Error::ZeroElement);
    }
    if degree == 0 {
        return Err(Error::BadParameter("the upper degree must be at least 1".into()));
    }
    if insert_position == 0 || insert_position > base.len() + 1 {
        return Err(Error::PositionOutOfRange(insert_position));
    }
    let (p, k) = (insert_position, degree - 1);
    let integer = match lambda {
        Scalar::Mod { value, .. } => Some(BigInt::from(*value)),
        Scalar::Rat(_) => lambda.as_integer(),
    };
    if let Some(l) = integer {
        let l = l.to_i64().ok_or(Error::ScalarTooLarge)?;
        return Ok(vec![
            Move::Birth { position: p, degree: k, sign: 1 },
            Move::Birth { position: p + 1, degree: k, sign: 1 },
            Move::Slide { position: p + 2, coeff: l },
            Move::Swap { position: p + 2 },
        ]);
    }
    let r = lambda.as_rational().expect("non-integral values are rational");
    let target = fraction_block(r.numer().to_i64().ok_or(Error::ScalarTooLarge)?, r.denom().to_i64().ok_or(Error::ScalarTooLarge)?)
        .ok_or_else(|| Error::BadParameter(format!("no realizing block found for {lambda}")))?;
    Ok(synthesize_block(&target, p, k))
}

/// A unimodular 4×4 integer matrix whose rook form contains `p/q` and `-q/p`.
fn fraction_block(p: i64, q: i64) -> Option<IntMatrix> {
    let (g, x, y) = extended_gcd(q, p);
    if g.abs() != 1 {
        return None;
    }
    let (x, y) = (x * g, y * g);
    let field = FieldSpec::Rationals;
    let want = field.parse_scalar(&format!("{p}/{q}")).ok()?;
    let partner = field.parse_scalar(&format!("{}/{p}", -q)).ok()?;
    for signs in 0..8 {
        let sg = |b: i64| if signs >> b & 1 == 0 { 1 } else { -1 };
        let (s1, s2, s3) = (sg(0), sg(1), sg(2));
        let a = [[s1 * q, -s2 * p, 0, 0], [1, 0, -s3 * s1, 0], [0, 1, 0, -s2 * y], [0, 0, 1, s3 * x]];
        let m = IntMatrix::from_fn(4, 4, |i, j| BigInt::from(a[3 - i][j]));
        let (rook, _) = rook_reduce(&m.to_field(field));
        let values: Vec<&Scalar> = rook.hits().iter().map(|h| &h.2).collect();
        let unimodular = crate::integral::int_det(&m).abs().is_one();
        if unimodular && values.contains(&&want) && values.contains(&&partner) {
            return Some(m);
        }
    }
    None
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[derive(Clone, Copy, Debug)]
enum ColumnOp {
    /// `col[target] += coeff * col[source]`
    Add { target: usize, source: usize, coeff: i64 },
    /// Exchange of adjacent columns `at`, `at + 1`.
    Exchange { at: usize },
}

/// Column-reduces a unimodular matrix to a signed diagonal, returning the
/// diagonal signs and the operations performed.
fn column_reduce(target: &IntMatrix) -> (Vec<i8>, Vec<ColumnOp>) {
    let n = target.rows();
    let mut m: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| target.get(i, j).to_i64().expect("small block")).collect()).collect();
    let mut ops = Vec::new();
    let mut apply = |m: &mut Vec<Vec<i64>>, op: ColumnOp| {
        match op {
            ColumnOp::Add { target, source, coeff } => {
                for row in m.iter_mut() {
                    row[target] += coeff * row[source];
                }
            }
            ColumnOp::Exchange { at } => {
                for row in m.iter_mut() {
                    row.swap(at, at + 1);
                }
            }
        }
        ops.push(op);
    };
    let mut free: Vec<usize> = (0..n).collect();
    for i in 0..n {
        loop {
            let nonzero: Vec<usize> = free.iter().copied().filter(|&j| m[i][j] != 0).collect();
            let &pivot = nonzero.iter().min_by_key(|&&j| m[i][j].abs()).expect("unimodular");
            if nonzero.len() == 1 {
                break;
            }
            for &j in &nonzero {
                if j != pivot {
                    let q = m[i][j].div_euclid(m[i][pivot]);
                    apply(&mut m, ColumnOp::Add { target: j, source: pivot, coeff: -q });
                }
            }
        }
        let pivot = *free.iter().find(|&&j| m[i][j] != 0).unwrap();
        debug_assert_eq!(m[i][pivot].abs(), 1);
        for j in 0..n {
            if j != pivot && m[i][j] != 0 {
                let c = -m[i][j] * m[i][pivot];
                apply(&mut m, ColumnOp::Add { target: j, source: pivot, coeff: c });
            }
        }
        free.retain(|&j| j != pivot);
    }
    // Now a signed permutation matrix; sort columns into diagonal position.
    for pass in 0..n {
        for at in 0..n - 1 - pass {
            let row_of = |m: &Vec<Vec<i64>>, j: usize| (0..n).find(|&i| m[i][j] != 0).unwrap();
            if row_of(&m, at) > row_of(&m, at + 1) {
                apply(&mut m, ColumnOp::Exchange { at });
            }
        }
    }
    let signs = (0..n).map(|i| m[i][i] as i8).collect();
    (signs, ops)
}

/// Moves producing the block `target` (rows: degree `k`, columns: degree
/// `k + 1`) from four births inserted at position `p`.
fn synthesize_block(target: &IntMatrix, p: usize, k: usize) -> Vec<Move> {
    let n = target.rows();
    let (signs, ops) = column_reduce(target);
    let mut script = Vec::new();
    for (i, &sign) in signs.iter().enumerate() {
        script.push(Move::Birth { position: p + 2 * i, degree: k, sign });
    }
    // Order is now r1 c1 r2 c2 …; carry every lower generator to the front.
    for i in 1..n {
        for j in (0..i).rev() {
            script.push(Move::Swap { position: p + i + j });
        }
    }
    let col = |j: usize| p + n + j;
    for op in ops.into_iter().rev() {
        match op {
            ColumnOp::Exchange { at } => script.push(Move::Swap { position: col(at) }),
            ColumnOp::Add { target, source, coeff } => {
                let mut bring = Vec::new();
                let slide_at = if source < target {
                    bring.extend(source..target - 1);
                    target - 1
                } else {
                    bring.extend((target..source).rev());
                    target
                };
                script.extend(bring.iter().map(|&j| Move::Swap { position: col(j) }));
                script.push(Move::Slide { position: col(slide_at), coeff: -coeff });
                script.extend(bring.iter().rev().map(|&j| Move::Swap { position: col(j) }));
            }
        }
    }
    script
}

/// Weights of the move kinds drawn by [`random_closed_script`].
const BIRTH: u32 = 3;
const SWAP: u32 = 4;
const SLIDE: u32 = 3;
const DEATH: u32 = 2;

/// A random script of `forward` applicable moves starting at `start`,
/// followed by the inverse moves in reverse order, so that it returns to
/// `start`. Degrees of births stay below `max_degree`.
pub fn random_closed_script<R: Rng>(start: &ZComplex, forward: usize, max_degree: usize, rng: &mut R) -> Vec<Move> {
    let mut state = start.clone();
    let mut script = Vec::new();
    let mut inverses = Vec::new();
    let mut attempts = 0;
    while script.len() < forward && attempts < forward * 50 {
        attempts += 1;
        let n = state.len();
        let roll = rng.gen_range(0..BIRTH + SWAP + SLIDE + DEATH);
        let candidate = if roll < BIRTH || n < 2 {
            Move::Birth {
                position: rng.gen_range(1..=n + 1),
                degree: rng.gen_range(0..max_degree.max(1)),
                sign: if rng.gen_bool(0.5) { 1 } else { -1 },
            }
        } else if roll < BIRTH + SWAP {
            Move::Swap { position: rng.gen_range(1..n) }
        } else if roll < BIRTH + SWAP + SLIDE {
            let coeff = *[-2, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
            Move::Slide { position: rng.gen_range(1..n), coeff }
        } else {
            Move::Death { position: rng.gen_range(1..n) }
        };
        if let Ok(next) = apply_move(&state, &candidate) {
            inverses.push(inverse_move(&state, &candidate).expect("applicable move has an inverse"));
            script.push(candidate);
            state = next;
        }
    }
    script.extend(inverses.into_iter().rev());
    script
}

/// Rook form of `∂` restricted to a block, for tests and reports.
pub fn block_rook(c: &ZComplex, rows: &[usize], cols: &[usize], field: FieldSpec) -> Vec<(usize, usize, Scalar)> {
    let m: Matrix = c.boundary().select(rows, cols).to_field(field);
    rook_reduce(&m).0.hits().to_vec()
}

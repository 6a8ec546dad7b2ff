//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits with a failure status if any criterion fails.

use std::time::{Duration, Instant};

use bruhat_core::catalog;
use bruhat_core::enhanced_complex::{bdata, homology_enhancement, poincare_dual, slice, slice_bdata};
use bruhat_core::enhanced_linear::rook_reduce;
use bruhat_core::integral::{boundaries_in_cells, check_pair_torsion_formula, short_pair_check, ZComplex};
use bruhat_core::matrix::Matrix;
use bruhat_core::paths::{apply_move, inverse_move, random_closed_script, realize, simulate, verify_akh, Move};
use bruhat_core::random::{graded_unitriangular, graded_unitriangular_int, random_acyclic_zcomplex, random_complex};
use bruhat_core::scalars::{FieldSpec, Scalar};
use bruhat_core::torsion::{milnor_torsion, tau};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rationals;
const F5: FieldSpec = FieldSpec::Prime(5);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// ---------------------------------------------------------------------------
// 1. Orbit enumeration over small prime fields, independent of the library.

type Small = Vec<u8>;

fn small_mul(a: &[u8], b: &[u8], n: usize, k: usize, m: usize, p: u8) -> Small {
    let mut out = vec![0u8; n * m];
    for i in 0..n {
        for j in 0..m {
            let s: u32 = (0..k).map(|l| u32::from(a[i * k + l]) * u32::from(b[l * m + j])).sum();
            out[i * m + j] = (s % u32::from(p)) as u8;
        }
    }
    out
}

fn unitriangulars(n: usize, p: u8) -> Vec<Small> {
    let slots: Vec<usize> = (0..n).flat_map(|i| (i + 1..n).map(move |j| i * n + j)).collect();
    let count = (p as usize).pow(slots.len() as u32);
    (0..count)
        .map(|mut code| {
            let mut m = vec![0u8; n * n];
            (0..n).for_each(|i| m[i * n + i] = 1);
            for &s in &slots {
                m[s] = (code % p as usize) as u8;
                code /= p as usize;
            }
            m
        })
        .collect()
}

fn decode(mut code: usize, len: usize, p: u8) -> Small {
    (0..len)
        .map(|_| {
            let x = (code % p as usize) as u8;
            code /= p as usize;
            x
        })
        .collect()
}

fn encode(m: &[u8], p: u8) -> usize {
    m.iter().rev().fold(0, |acc, &x| acc * p as usize + x as usize)
}

fn is_small_rook(m: &[u8], rows: usize, cols: usize) -> bool {
    (0..rows).all(|i| (0..cols).filter(|&j| m[i * cols + j] != 0).count() <= 1)
        && (0..cols).all(|j| (0..rows).filter(|&i| m[i * cols + j] != 0).count() <= 1)
}

fn rook_uniqueness() -> Outcome {
    let mut orbits = 0usize;
    let mut matrices = 0usize;
    let mut failures = 0usize;
    for p in [2u8, 3] {
        let field = FieldSpec::Prime(u64::from(p));
        for rows in 1..=3 {
            for cols in 1..=3 {
                let left = unitriangulars(rows, p);
                let right = unitriangulars(cols, p);
                let len = rows * cols;
                let total = (p as usize).pow(len as u32);
                let mut rook_of = vec![usize::MAX; total];
                for code in 0..total {
                    if rook_of[code] != usize::MAX {
                        continue;
                    }
                    orbits += 1;
                    let m = decode(code, len, p);
                    let mut members = Vec::new();
                    for a in &left {
                        let am = small_mul(a, &m, rows, rows, cols, p);
                        for b in &right {
                            let x = encode(&small_mul(&am, b, rows, cols, cols, p), p);
                            if rook_of[x] == usize::MAX {
                                rook_of[x] = usize::MAX - 1;
                                members.push(x);
                            }
                        }
                    }
                    let rooks: Vec<usize> =
                        members.iter().copied().filter(|&x| is_small_rook(&decode(x, len, p), rows, cols)).collect();
                    if rooks.len() != 1 {
                        failures += 1;
                        continue;
                    }
                    for x in members {
                        rook_of[x] = rooks[0];
                    }
                }
                for (code, &r) in rook_of.iter().enumerate() {
                    matrices += 1;
                    let m = decode(code, len, p);
                    let lib = Matrix::from_fn(field, rows, cols, |i, j| field.from_i64(i64::from(m[i * cols + j])));
                    let reduced: Vec<u8> = {
                        let rm = rook_reduce(&lib).0.to_matrix();
                        (0..len)
                            .map(|k| match rm.get(k / cols, k % cols) {
                                Scalar::Mod { value, .. } => *value as u8,
                                Scalar::Rat(_) => unreachable!(),
                            })
                            .collect()
                    };
                    if r >= usize::MAX - 1 || encode(&reduced, p) != r {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome(failures == 0, format!("{orbits} orbits, {matrices} matrices over F2 and F3 up to 3x3, {failures} failures"))
}

// ---------------------------------------------------------------------------

fn fig1_reproduction() -> Outcome {
    let c = catalog::fig1().to_field(Q);
    let d = bdata(&c).unwrap();
    let got: Vec<(usize, usize, String)> = d.pairs().iter().map(|p| (p.lower, p.upper, p.bruhat.to_string())).collect();
    let expected: Vec<(usize, usize, String)> =
        [(1, 4, "6"), (3, 5, "3"), (6, 7, "2"), (2, 8, "4")].iter().map(|&(t, s, l)| (t, s, l.to_string())).collect();
    let mut sorted = got.clone();
    sorted.sort_by_key(|x| x.1);
    let mut want = expected.clone();
    want.sort_by_key(|x| x.1);
    let exact = sorted == want && d.homological().is_empty();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut changed = 0;
    for _ in 0..100 {
        let p = graded_unitriangular(Q, &c.degrees(), 9, &mut rng);
        if bdata(&c.change_basis(&p).unwrap()).unwrap() != d {
            changed += 1;
        }
    }
    outcome(exact && changed == 0, format!("pairs {got:?}; {changed}/100 perturbations changed the data"))
}

fn projective_spaces() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=8 {
        let c = catalog::rp(n);
        let d = bdata(&c.to_field(Q)).unwrap();
        let two = Q.from_i64(2);
        let pairs_ok = !d.pairs().is_empty() && d.pairs().iter().all(|p| p.bruhat.abs() == two);
        let tau_ok = tau(&d).abs() == Q.from_i64(1 << (n / 2));
        let f2 = bdata(&c.to_field(FieldSpec::Prime(2))).unwrap();
        let f2_ok = f2.pairs().is_empty() && f2.homological().len() == n + 1;
        if !(pairs_ok && tau_ok && f2_ok) {
            bad.push(n);
        }
    }
    outcome(bad.is_empty(), format!("n = 2..8, failures at {bad:?}"))
}

fn torsion_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = 0;
    for field in [Q, F5] {
        for _ in 0..200 {
            let c = random_complex(field, rng.gen_range(0..=12), 3, &mut rng);
            let h = homology_enhancement(&c).unwrap();
            if milnor_torsion(&c, &h).unwrap() != tau(&bdata(&c).unwrap()) {
                mismatches += 1;
            }
        }
    }
    outcome(mismatches == 0, format!("400 complexes (Q, F5; N <= 12), {mismatches} mismatches"))
}

fn zcorpus() -> Vec<ZComplex> {
    (0..100u64).map(|seed| catalog::random(seed, 2 + (seed as usize % 9))).collect()
}

fn torsion_ratio() -> Outcome {
    let mut corpus = zcorpus();
    corpus.extend([2, 3, 5, 7].map(catalog::lens));
    let mut pairs = 0;
    let mut failures = 0;
    let mut fractional = 0;
    for c in &corpus {
        for p in check_pair_torsion_formula(c).unwrap() {
            pairs += 1;
            failures += usize::from(!p.pass);
            fractional += usize::from(p.bruhat.as_integer().is_none());
        }
    }
    outcome(failures == 0, format!("{pairs} pairs ({fractional} non-integral) in 104 complexes, {failures} failures"))
}

fn cell_containment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = 0;
    for c in zcorpus() {
        for _ in 0..20 {
            let p = graded_unitriangular_int(&c.degrees(), 4, &mut rng);
            if !boundaries_in_cells(&c.change_basis(&p).unwrap()).unwrap() {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("2000 based complexes, {failures} outside their cells"))
}

fn short_pairs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    let mut failures = 0;
    for c in zcorpus() {
        for p in short_pair_check(&c, 20, &mut rng).unwrap() {
            count += 1;
            failures += usize::from(!p.pass());
        }
    }
    outcome(count > 0 && failures == 0, format!("{count} short pairs, {failures} failures"))
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for i in 0..100 {
        let field = if i % 2 == 0 { Q } else { F5 };
        let c = random_complex(field, rng.gen_range(1..=12), 3, &mut rng);
        let top = c.max_degree().unwrap();
        if bdata(&poincare_dual(&c, top).unwrap()).unwrap() != bdata(&c).unwrap().upside_down(top) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("100 complexes, {failures} failures"))
}

/// Random moves away from `start`, then an attempt to return to the empty
/// complex by deaths and crossings; if that stalls, the recorded moves are
/// undone in reverse.
fn closed_script<R: Rng>(start: &ZComplex, rng: &mut R) -> (Vec<Move>, bool) {
    let forward = random_closed_script(start, 14, 3, rng);
    let mut script: Vec<Move> = forward[..forward.len() / 2].to_vec();
    let mut state = script.iter().fold(start.clone(), |s, m| apply_move(&s, m).unwrap());
    if !start.is_empty() {
        return (forward, false);
    }
    for _ in 0..200 {
        if state.is_empty() {
            return (script, true);
        }
        let n = state.len();
        let death = (1..n).map(|position| Move::Death { position }).find(|m| apply_move(&state, m).is_ok());
        let m = death.unwrap_or_else(|| Move::Swap { position: rng.gen_range(1..n) });
        if let Ok(next) = apply_move(&state, &m) {
            script.push(m);
            state = next;
        }
    }
    let mut undo = Vec::new();
    let mut s = start.clone();
    for m in &script {
        undo.push(inverse_move(&s, m).unwrap());
        s = apply_move(&s, m).unwrap();
    }
    script.extend(undo.into_iter().rev());
    (script, false)
}

fn parity_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = 0;
    let mut fresh_returns = 0;
    let mut empty_ends = 0;
    for field in [Q, F5] {
        for i in 0..500 {
            let start = if i % 2 == 0 {
                ZComplex::empty()
            } else {
                random_acyclic_zcomplex(rng.gen_range(1..=3), 3, &mut rng).unwrap()
            };
            let (script, fresh) = closed_script(&start, &mut rng);
            fresh_returns += usize::from(fresh);
            let trace = simulate(&script, &start, field).unwrap();
            let report = verify_akh(&trace).unwrap();
            let corollary_ok = report.corollary.unwrap_or(true);
            empty_ends += usize::from(report.corollary.is_some());
            let closed = trace.end.degrees() == start.degrees() && trace.end.boundary() == start.boundary();
            if !(report.identity && report.every_step && corollary_ok && closed) {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("1000 closed scripts (Q, F5), {empty_ends} with empty ends, {fresh_returns} returning by a different route, {failures} failures"),
    )
}

fn realization() -> Outcome {
    let f7 = FieldSpec::Prime(7);
    let mut targets: Vec<Scalar> = ["1", "-1", "2", "-2", "5", "7/3"].iter().map(|s| Q.parse_scalar(s).unwrap()).collect();
    targets.extend((1..7).map(|x| f7.from_i64(x)));
    let mut failures = Vec::new();
    for lambda in &targets {
        let field = lambda.field();
        let empty = ZComplex::empty();
        let ok = realize(lambda, &empty, 2, 1).ok().and_then(|script| {
            let end = script.iter().try_fold(empty.clone(), |s, m| apply_move(&s, m)).ok()?;
            let d = bdata(&end.to_field(field)).ok()?;
            let has = |x: &Scalar| d.pairs().iter().any(|p| &p.bruhat == x);
            Some(has(lambda) && has(&-lambda.inv().unwrap()))
        });
        if ok != Some(true) {
            failures.push(format!("{lambda} in {field}"));
        }
    }
    outcome(failures.is_empty(), format!("{} targets, failures {failures:?}", targets.len()))
}

fn slice_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checks = 0;
    let mut failures = 0;
    for i in 0..100 {
        let field = if i % 2 == 0 { Q } else { F5 };
        let c = random_complex(field, rng.gen_range(1..=8), 3, &mut rng);
        let d = bdata(&c).unwrap();
        for l in 0..=c.len() {
            for m in l..=c.len() {
                checks += 1;
                if bdata(&slice(&c, l, m).unwrap()).unwrap() != slice_bdata(&d, l, m).unwrap() {
                    failures += 1;
                }
            }
        }
    }
    outcome(failures == 0, format!("100 complexes, {checks} slices, {failures} failures"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 11] = [
        ("rook uniqueness", rook_uniqueness, Some(Duration::from_secs(60))),
        ("figure reproduction", fig1_reproduction, None),
        ("projective space numbers", projective_spaces, None),
        ("torsion oracle", torsion_oracle, Some(Duration::from_secs(300))),
        ("torsion ratio", torsion_ratio, None),
        ("cell containment", cell_containment, None),
        ("short-pair integrality", short_pairs, None),
        ("duality", duality, None),
        ("parity law", parity_law, Some(Duration::from_secs(300))),
        ("realization", realization, None),
        ("slice coherence", slice_coherence, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if limit.is_some_and(|l| elapsed > l) {
            result.pass = false;
            result.detail.push_str(" (over time limit)");
        }
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("acceptance {:>2} {tag} {name}: {} [{:.2}s]", i + 1, result.detail, elapsed.as_secs_f64());
        failed += usize::from(!result.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

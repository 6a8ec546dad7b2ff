use bruhat_core::catalog;
use bruhat_core::enhanced_complex::{bdata, default_generators, BData};
use bruhat_core::error::Error;
use bruhat_core::integral::ZComplex;
use bruhat_core::io::{script_from_json, script_to_json};
use bruhat_core::paths::*;
use bruhat_core::random::random_acyclic_zcomplex;
use bruhat_core::scalars::{FieldSpec, Scalar};
use bruhat_core::torsion::{overlaps, tau};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rationals;
const F5: FieldSpec = FieldSpec::Prime(5);

fn bd(c: &ZComplex, field: FieldSpec) -> BData {
    bdata(&c.to_field(field)).unwrap()
}

fn run(c: &ZComplex, script: &[Move]) -> ZComplex {
    script.iter().fold(c.clone(), |s, m| apply_move(&s, m).unwrap())
}

fn numbers(d: &BData) -> Vec<String> {
    d.pairs().iter().map(|p| p.bruhat.to_string()).collect()
}

#[test]
fn birth_into_empty_complex() {
    let c = apply_move(&ZComplex::empty(), &Move::Birth { position: 1, degree: 1, sign: 1 }).unwrap();
    assert_eq!(c.degrees(), vec![1, 2]);
    assert_eq!(numbers(&bd(&c, Q)), vec!["1"]);
    let c = apply_move(&ZComplex::empty(), &Move::Birth { position: 1, degree: 0, sign: -1 }).unwrap();
    assert_eq!(numbers(&bd(&c, Q)), vec!["-1"]);
}

#[test]
fn move_preconditions() {
    let fig1 = catalog::fig1();
    assert!(matches!(apply_move(&fig1, &Move::Death { position: 1 }), Err(Error::DeathNotCancellable(1, 2))));
    let lens = catalog::lens(3);
    assert!(matches!(apply_move(&lens, &Move::Swap { position: 2 }), Err(Error::SwapBlockedByIncidence(2, 3))));
    assert!(matches!(apply_move(&lens, &Move::Slide { position: 1, coeff: 1 }), Err(Error::SlideDegreeMismatch(1, 2))));
    assert!(matches!(apply_move(&lens, &Move::Negate { position: 4 }), Err(Error::PositionOutOfRange(4))));
    assert!(matches!(apply_move(&lens, &Move::Birth { position: 5, degree: 0, sign: 1 }), Err(Error::PositionOutOfRange(5))));
    assert!(apply_move(&lens, &Move::Birth { position: 1, degree: 0, sign: 2 }).is_err());
    // Cross-degree swaps without incidence are allowed.
    assert!(apply_move(&lens, &Move::Swap { position: 1 }).is_ok());
}

#[test]
fn negation_flips_one_number() {
    let c = catalog::fig1();
    let d = bd(&apply_move(&c, &Move::Negate { position: 6 }).unwrap(), Q);
    assert_eq!(numbers(&d), vec!["6", "3", "-2", "4"]);
}

#[test]
fn slides_keep_bdata_and_moves_invert() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for seed in 0..40 {
        let c = catalog::random(seed, 2 + seed as usize % 8);
        for _ in 0..10 {
            let position = rng.gen_range(1..c.len());
            let moves = [
                Move::Slide { position, coeff: rng.gen_range(-3..=3) },
                Move::Swap { position },
                Move::Negate { position },
                Move::Birth { position, degree: rng.gen_range(0..3), sign: 1 },
            ];
            for m in moves {
                let Ok(next) = apply_move(&c, &m) else { continue };
                if let Move::Slide { .. } = m {
                    assert_eq!(bd(&next, Q), bd(&c, Q));
                }
                let back = apply_move(&next, &inverse_move(&c, &m).unwrap()).unwrap();
                assert_eq!(back.boundary(), c.boundary());
                assert_eq!(back.degrees(), c.degrees());
            }
        }
    }
}

#[test]
fn births_keep_existing_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for seed in 0..40 {
        let c = catalog::random(seed, 1 + seed as usize % 8);
        let position = rng.gen_range(1..=c.len() + 1);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let next = apply_move(&c, &Move::Birth { position, degree: rng.gen_range(0..3), sign }).unwrap();
        let shift = |s: usize| if s >= position { s + 2 } else { s };
        let before = bd(&c, Q);
        let after = bd(&next, Q);
        for p in before.pairs() {
            let q = after.pair_with_upper(shift(p.upper)).unwrap();
            assert_eq!((q.lower, &q.bruhat), (shift(p.lower), &p.bruhat));
        }
        let newborn = after.pair_with_upper(position + 1).unwrap();
        assert_eq!((newborn.lower, newborn.bruhat.clone()), (position, Q.from_i64(sign.into())));
        assert_eq!(after.homological().len(), before.homological().len());
    }
}

#[test]
fn swap_classification_examples() {
    // Pairs (2,1) and (4,3) in degrees (0,1), (0,1) after a crossing of 1 and 3.
    let c = ZComplex::from_entries(default_generators(&[0, 1, 0, 1]), &[(2, 1, 1), (4, 3, 1)]).unwrap();
    let c = apply_move(&c, &Move::Swap { position: 2 }).unwrap();
    let after = apply_move(&c, &Move::Swap { position: 1 }).unwrap();
    assert_eq!(classify_swap(&c, &after, 1, Q).unwrap().kind, SwapKind::Trivial);

    // A paired point crossing a homological point of the same degree.
    let c = ZComplex::from_entries(default_generators(&[0, 0, 1]), &[(3, 1, 1), (3, 2, 1)]).unwrap();
    let after = apply_move(&c, &Move::Swap { position: 1 }).unwrap();
    let report = classify_swap(&c, &after, 1, Q).unwrap();
    assert_eq!(report.kind, SwapKind::NonTrivial);
    assert_eq!(report.involved[0].before, None);
    assert_eq!(report.involved[0].after, Some((3, Q.one())));

    assert!(matches!(classify_swap(&c, &after, 2, Q), Err(Error::NotAMaxwellEvent(2))));
}

#[test]
fn projective_plane_construction_ends_in_a_nontrivial_crossing() {
    let c = catalog::cp2();
    let script = [
        Move::Birth { position: 2, degree: 1, sign: 1 },
        Move::Slide { position: 3, coeff: 3 },
        Move::Swap { position: 3 },
    ];
    let trace = simulate(&script, &c, Q).unwrap();
    assert_eq!(trace.steps[2].event, Event::Crossing { same_degree: true, kind: Some(SwapKind::NonTrivial) });
    let end = &trace.steps[2].bdata;
    assert_eq!(end.pairs().len(), 1);
    assert_eq!(numbers(end), vec!["3"]);
}

#[test]
fn simulate_examples() {
    let empty = ZComplex::empty();
    let trace = simulate(&[], &empty, Q).unwrap();
    assert!(trace.steps.is_empty());
    assert_eq!((trace.maxwell_count, trace.negative_cusps), (0, 0));
    assert!(verify_akh(&trace).unwrap().holds());

    let round = [Move::Birth { position: 1, degree: 0, sign: 1 }, Move::Death { position: 1 }];
    let trace = simulate(&round, &empty, Q).unwrap();
    assert_eq!(trace.cusps, vec![(true, 1), (false, 1)]);
    assert_eq!((trace.maxwell_count, trace.negative_cusps), (0, 0));
    let report = verify_akh(&trace).unwrap();
    assert!(report.identity && report.holds());
    assert_eq!(report.corollary, Some(true));

    let flipped = [Move::Birth { position: 1, degree: 0, sign: 1 }, Move::Negate { position: 2 }, Move::Death { position: 1 }];
    let trace = simulate(&flipped, &empty, Q).unwrap();
    assert_eq!(trace.cusps, vec![(true, 1), (false, -1)]);
    assert_eq!((trace.maxwell_count, trace.negative_cusps, trace.flips), (0, 1, 1));
    let report = verify_akh(&trace).unwrap();
    assert!(!report.identity);
    assert!(report.holds());

    let bad = [Move::Birth { position: 1, degree: 0, sign: 1 }, Move::Death { position: 2 }];
    assert!(matches!(simulate(&bad, &empty, Q), Err(Error::Move { step: 2, .. })));
}

#[test]
fn akh_preconditions() {
    let trace = simulate(&[], &catalog::sphere(2), Q).unwrap();
    assert!(matches!(verify_akh(&trace), Err(Error::AcyclicityViolated(0))));
    let trace = simulate(&[], &ZComplex::empty(), FieldSpec::Prime(2)).unwrap();
    assert!(matches!(verify_akh(&trace), Err(Error::CharTwoField)));
}

#[test]
fn realize_examples() {
    let script = realize(&Q.from_i64(5), &ZComplex::empty(), 2, 1).unwrap();
    let c = run(&ZComplex::empty(), &script);
    let mut got = numbers(&bd(&c, Q));
    got.sort();
    assert_eq!(got, vec!["-1/5", "5"]);

    let c = run(&ZComplex::empty(), &realize(&Q.one(), &ZComplex::empty(), 1, 1).unwrap());
    let mut got = numbers(&bd(&c, Q));
    got.sort();
    assert_eq!(got, vec!["-1", "1"]);

    let f7 = FieldSpec::Prime(7);
    let c = run(&ZComplex::empty(), &realize(&f7.from_i64(3), &ZComplex::empty(), 2, 1).unwrap());
    let mut got = numbers(&bd(&c, f7));
    got.sort();
    assert_eq!(got, vec!["2", "3"]);

    assert!(realize(&Q.zero(), &ZComplex::empty(), 2, 1).is_err());
}

#[test]
fn realize_inside_a_base_and_back_to_it() {
    let base = catalog::fig1();
    for (text, position) in [("7/3", 1), ("-2", 9), ("2/5", 4)] {
        let lambda = Q.parse_scalar(text).unwrap();
        let script = realize(&lambda, &base, 2, position).unwrap();
        let end = run(&base, &script);
        let d = bd(&end, Q);
        let target = (-lambda.inv().unwrap()).to_string();
        assert!(numbers(&d).contains(&lambda.to_string()), "{text}");
        assert!(numbers(&d).contains(&target), "{text}");
        assert!(d.homological().is_empty());

        let mut state = base.clone();
        let mut undo = Vec::new();
        for m in &script {
            undo.push(inverse_move(&state, m).unwrap());
            state = apply_move(&state, m).unwrap();
        }
        undo.reverse();
        assert_eq!(run(&end, &undo), base);
    }
}

#[test]
fn realize_then_return_satisfies_the_parity_law() {
    let empty = ZComplex::empty();
    let script = realize(&Q.from_i64(5), &empty, 2, 1).unwrap();
    let mut full = script.clone();
    let mut state = empty.clone();
    let mut undo = Vec::new();
    for m in &script {
        undo.push(inverse_move(&state, m).unwrap());
        state = apply_move(&state, m).unwrap();
    }
    full.extend(undo.into_iter().rev());
    let report = verify_akh(&simulate(&full, &empty, Q).unwrap()).unwrap();
    assert!(report.identity && report.holds());
    assert_eq!(report.corollary, Some(true));
}

/// τ′ changes sign exactly at crossings and negative cusps.
#[test]
fn parity_law_step_by_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for field in [Q, F5] {
        for _ in 0..50 {
            let start = random_acyclic_zcomplex(rng.gen_range(0..=3), 3, &mut rng).unwrap();
            let script = random_closed_script(&start, 16, 3, &mut rng);
            let trace = simulate(&script, &start, field).unwrap();
            let report = verify_akh(&trace).unwrap();
            assert!(report.identity && report.holds(), "{script:?}");
            let mut prev = trace.start_tau_prime.clone();
            for step in &trace.steps {
                let flips = matches!(step.event, Event::Crossing { .. }) || matches!(step.event, Event::Birth { sign: -1 } | Event::Death { sign: -1 });
                let expected = if flips { -prev.clone() } else { prev.clone() };
                assert_eq!(step.tau_prime, expected, "{:?}", step.mv);
                prev = step.tau_prime.clone();
            }
        }
    }
}

#[test]
fn maxwell_crossings_between_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut seen = [0usize; 2];
    for _ in 0..300 {
        let c = random_acyclic_zcomplex(rng.gen_range(2..=4), 2, &mut rng).unwrap();
        let script = random_closed_script(&c, 8, 2, &mut rng);
        let c = run(&c, &script[..script.len() / 2]);
        for position in 1..c.len() {
            if c.degree(position - 1) != c.degree(position) {
                continue;
            }
            let after = apply_move(&c, &Move::Swap { position }).unwrap();
            let report = classify_swap(&c, &after, position, Q).unwrap();
            let before = bd(&c, Q);
            let post = bd(&after, Q);
            match report.kind {
                SwapKind::NonTrivial => {
                    seen[1] += 1;
                    assert_eq!(tau(&post), -tau(&before));
                }
                SwapKind::Trivial => {
                    seen[0] += 1;
                    let a = before.pair_containing(position).unwrap();
                    let b = before.pair_containing(position + 1).unwrap();
                    if a != b {
                        assert_eq!(overlaps(&post).abs_diff(overlaps(&before)), 1);
                    }
                }
            }
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn scripts_round_trip_through_json() {
    let script = vec![
        Move::Birth { position: 1, degree: 0, sign: -1 },
        Move::Swap { position: 1 },
        Move::Slide { position: 2, coeff: -3 },
        Move::Negate { position: 1 },
        Move::Death { position: 1 },
    ];
    let value = script_to_json(&script);
    assert_eq!(value[0], serde_json::json!({"move": "birth", "position": 1, "degree": 0, "sign": -1}));
    assert_eq!(script_from_json(&value.to_string()).unwrap(), script);
    assert!(script_from_json(r#"[{"move": "jump", "position": 1}]"#).is_err());
}

#[test]
fn scalar_targets_from_every_field_element() {
    let f7 = FieldSpec::Prime(7);
    for x in 1..7 {
        let lambda = f7.from_i64(x);
        let end = run(&ZComplex::empty(), &realize(&lambda, &ZComplex::empty(), 1, 1).unwrap());
        let got: Vec<Scalar> = bd(&end, f7).pairs().iter().map(|p| p.bruhat.clone()).collect();
        assert!(got.contains(&lambda));
        assert!(got.contains(&-lambda.inv().unwrap()));
    }
}

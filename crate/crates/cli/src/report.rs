//! Tables for standard error and the trace JSON.

use std::fmt::Write;

use bruhat_core::enhanced_complex::{BData, FilteredComplex};
use bruhat_core::error::Error;
use bruhat_core::integral::PairTorsion;
use bruhat_core::io;
use bruhat_core::paths::{AkhReport, Event, PathTrace, SwapKind};
use serde_json::{json, Value};

pub fn bdata_table(c: &FilteredComplex, d: &BData) -> String {
    let name = |s: usize| c.generators()[s - 1].name.as_str();
    let mut out = String::new();
    if d.pairs().is_empty() {
        out.push_str("no pairs\n");
    } else {
        let _ = writeln!(out, "{:>8} {:>8} {:>6}  bruhat", "upper", "lower", "degree");
        for p in d.pairs() {
            let _ = writeln!(out, "{:>8} {:>8} {:>6}  {}", name(p.upper), name(p.lower), d.degree(p.lower), p.bruhat);
        }
    }
    let h: Vec<String> = d.homological().into_iter().map(|s| format!("{} ({})", name(s), d.degree(s))).collect();
    let _ = writeln!(out, "homological: {}", if h.is_empty() { "none".to_string() } else { h.join(", ") });
    out
}

pub fn torsion_table(pairs: &[PairTorsion]) -> String {
    let mut out = String::new();
    for p in pairs {
        let _ = writeln!(
            out,
            "({}, {}) bruhat {}  torsion {}/{}  {}",
            p.upper,
            p.lower,
            p.bruhat,
            p.numerator,
            p.denominator,
            if p.pass { "ok" } else { "MISMATCH" }
        );
    }
    out
}

fn event_json(e: &Event) -> Value {
    match e {
        Event::Birth { sign } => json!({"kind": "birth", "sign": sign}),
        Event::Death { sign } => json!({"kind": "death", "sign": sign}),
        Event::Crossing { same_degree, kind } => json!({
            "kind": "crossing",
            "same_degree": same_degree,
            "bifurcation": kind.map(|k| match k { SwapKind::Trivial => "trivial", SwapKind::NonTrivial => "non_trivial" }),
        }),
        Event::Slide => json!({"kind": "slide"}),
        Event::Negate => json!({"kind": "negate"}),
    }
}

pub fn trace_table(t: &PathTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "start: tau' = {}", t.start_tau_prime);
    for (i, s) in t.steps.iter().enumerate() {
        let _ = writeln!(out, "{:>4} {:<40} tau' = {:<8} X = {} nC = {}", i + 1, format!("{:?}", s.mv), s.tau_prime.to_string(), s.crossings, s.negative_cusps);
    }
    out
}

pub fn trace_json(t: &PathTrace, verdict: &Result<AkhReport, Error>) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| {
            json!({
                "move": serde_json::to_value(&s.mv).expect("moves serialize"),
                "event": event_json(&s.event),
                "bdata": io::bdata_to_json(&s.bdata),
                "tau_prime": s.tau_prime.to_string(),
                "crossings": s.crossings,
                "negative_cusps": s.negative_cusps,
                "flips": s.flips,
            })
        })
        .collect();
    let akh = match verdict {
        Ok(r) => json!({
            "identity": r.identity,
            "folded_identity": r.folded_identity,
            "every_step": r.every_step,
            "corollary": r.corollary,
            "holds": r.holds(),
        }),
        Err(e) => json!({"skipped": e.to_string()}),
    };
    let end_tau_prime = t.steps.last().map_or(&t.start_tau_prime, |s| &s.tau_prime);
    json!({
        "field": t.field.to_string(),
        "start_bdata": io::bdata_to_json(&t.start_bdata),
        "start_tau_prime": t.start_tau_prime.to_string(),
        "steps": steps,
        "end": io::zcomplex_to_json(&t.end),
        "end_tau_prime": end_tau_prime.to_string(),
        "maxwell_count": t.maxwell_count,
        "cusps": t.cusps.iter().map(|&(birth, sign)| json!({"kind": if birth { "birth" } else { "death" }, "sign": sign})).collect::<Vec<_>>(),
        "negative_cusps": t.negative_cusps,
        "flips": t.flips,
        "akh": akh,
    })
}

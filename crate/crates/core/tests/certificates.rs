mod common;

use common::{classify, mutate, MutationOutcome};
use holeforge::certificate::{PAIR_SCAN_EXHAUSTIVE, SCHEMA_VERSION};
use holeforge::{
    certify, deep_hole_construction, emit, parse, search_good_triples, verify, GoodTriple, Verdict,
};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn base() -> holeforge::Certificate {
    certify(&GoodTriple::from_i64s([5, 9, 43]).unwrap()).unwrap()
}

fn rejected_clause(bytes: &[u8]) -> String {
    match verify(bytes).unwrap() {
        Verdict::Rejected { clause, .. } => clause,
        Verdict::Accepted => panic!("mutated certificate was accepted"),
    }
}

#[test]
fn round_trip_and_byte_stability() {
    let c = base();
    let bytes = emit(&c);
    assert_eq!(parse(&bytes).unwrap(), c);
    assert_eq!(emit(&parse(&bytes).unwrap()), bytes);
    assert_eq!(emit(&base()), bytes);
    assert!(bytes.ends_with(b"}\n"));
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.contains(SCHEMA_VERSION));
    assert!(text.contains("\"min_skew_height\": \"7\""));
}

fn certify_all_up_to(max_lambda3: u64) -> usize {
    let triples = search_good_triples(max_lambda3);
    for t in &triples {
        let c = certify(t).unwrap();
        assert_eq!(c.claims.min_skew_height.0, &t.lambdas()[0] + 2, "{t}");
        assert!(verify(&emit(&c)).unwrap().is_accepted(), "{t}");
    }
    triples.len()
}

#[test]
fn every_small_good_triple_certifies() {
    assert_eq!(certify_all_up_to(100), 68);
}

/// About a minute and a half on one core; run with `--ignored`.
#[test]
#[ignore]
fn every_good_triple_up_to_200_certifies() {
    assert_eq!(certify_all_up_to(200), 193);
}

#[test]
fn corrupted_ladder_witness_is_rejected() {
    let c = base();
    let mut v: Value = serde_json::from_slice(&emit(&c)).unwrap();
    let first = &mut v["ladder"]["entries"][0]["witness"][0][0];
    let n: i64 = first.as_str().unwrap().parse().unwrap();
    *first = Value::String((n + 1).to_string());
    assert_eq!(rejected_clause(&serde_json::to_vec(&v).unwrap()), "ladder");
}

#[test]
fn inflated_claim_is_rejected() {
    let mut c = base();
    c.claims.min_skew_height.0 = BigInt::from(8);
    assert_eq!(rejected_clause(&emit(&c)), "claims");
}

#[test]
fn false_boundary_statement_is_rejected() {
    let mut c = base();
    c.boundary.boundary_holes.push(c.non_normality.hole.clone());
    assert_eq!(rejected_clause(&emit(&c)), "boundary");
}

#[test]
fn unknown_fields_and_numbers_fail_to_parse() {
    let mut v: Value = serde_json::from_slice(&emit(&base())).unwrap();
    v["extra"] = Value::Bool(true);
    assert!(verify(&serde_json::to_vec(&v).unwrap()).is_err());

    let mut v: Value = serde_json::from_slice(&emit(&base())).unwrap();
    v["ladder"]["top_height"] = Value::from(6);
    assert!(verify(&serde_json::to_vec(&v).unwrap()).is_err());
}

#[test]
fn random_single_field_mutations_never_escape() {
    let original = base();
    let json: Value = serde_json::from_slice(&emit(&original)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5943);
    for _ in 0..300 {
        let mut v = json.clone();
        let what = mutate(&mut v, &mut rng);
        let bytes = serde_json::to_vec(&v).unwrap();
        let outcome = classify(&original, &bytes);
        assert_ne!(outcome, MutationOutcome::Escaped, "{what}");
    }
}

#[test]
fn lifted_certificate_mutations_never_escape() {
    let (_, _, original) = deep_hole_construction(2).unwrap();
    assert_eq!(original.transported_witness.pair_scan, PAIR_SCAN_EXHAUSTIVE);
    let json: Value = serde_json::from_slice(&emit(&original)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..60 {
        let mut v = json.clone();
        let what = mutate(&mut v, &mut rng);
        let outcome = classify(&original, &serde_json::to_vec(&v).unwrap());
        assert_ne!(outcome, MutationOutcome::Escaped, "{what}");
    }
}

#[test]
fn dropped_lift_step_is_rejected() {
    let (_, _, mut c) = deep_hole_construction(3).unwrap();
    c.lift_trace.remove(1);
    assert_eq!(rejected_clause(&emit(&c)), "lift_trace");
}

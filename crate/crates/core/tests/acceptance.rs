//! Acceptance checks, one line per criterion. Time limits are wall-clock
//! bounds on the work of each check, measured after the process starts.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{classify, mutate, MutationOutcome};
use holeforge::certificate::PAIR_SCAN_EXHAUSTIVE;
use holeforge::good_triples::build_ladder;
use holeforge::lifting::lift_lambda;
use holeforge::{
    boundary_hole_scan, certify, deep_hole_construction, emit, enumerate_holes, family,
    in_saturation, is_good_triple, lcm_all, naive_member, verify, GoodTriple, LatticePoint,
    NaiveLimits, RectSimplex, SemigroupOracle,
};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn pt(c: &[i64]) -> LatticePoint {
    LatticePoint::from_i64s(c)
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn ac1() -> Outcome {
    for (m, expected) in [(5, [5, 9, 43]), (7, [7, 13, 89])] {
        let t = family(&big(m)).map_err(e)?;
        let want: Vec<BigInt> = expected.iter().map(|&v| big(v)).collect();
        ensure(t.lambdas() == want.as_slice(), || {
            format!("family({m}) = {t}")
        })?;
        let check = is_good_triple(t.lambdas()).map_err(e)?;
        ensure(check.is_good(), || format!("{t} fails {:?}", check.failing))?;
        ensure(check.skew_delta == big(2), || {
            format!("condition 2 gives {}", check.skew_delta)
        })?;
    }
    Ok("family(5), family(7) good; condition 2 = 2".into())
}

fn ac2() -> Outcome {
    let s = RectSimplex::from_i64s(&[5, 9, 43]).map_err(e)?;
    let q = pt(&[4, 7, 18, 2]);
    ensure(in_saturation(&s, &q).map_err(e)?, || {
        "q not in saturation".into()
    })?;
    let mut oracle = SemigroupOracle::new(&s).map_err(e)?;
    ensure(oracle.member(&q).map_err(e)?.is_none(), || {
        "oracle finds a witness".into()
    })?;
    let gens = s.degree_one_generators().map_err(e)?;
    let set: BTreeSet<&LatticePoint> = gens.iter().collect();
    let mut pairs = 0usize;
    for g in gens {
        let rest = &q - g;
        pairs += 1;
        ensure(!set.contains(&rest), || format!("q = {g} + {rest}"))?;
    }
    Ok(format!(
        "q in saturation, not a member; {pairs} generator pairs checked"
    ))
}

fn ac3() -> Outcome {
    let s = RectSimplex::from_i64s(&[5, 9, 43]).map_err(e)?;
    let holes = enumerate_holes(&s, 20).map_err(e)?;
    let low = holes
        .holes
        .iter()
        .filter(|h| h.skew_height() < &big(7))
        .count();
    let at7 = holes
        .holes
        .iter()
        .filter(|h| h.skew_height() == &big(7))
        .count();
    ensure(low == 0, || format!("{low} holes below skew height 7"))?;
    ensure(at7 == 1, || format!("{at7} holes at skew height 7"))?;

    let t = GoodTriple::from_i64s([5, 9, 43]).map_err(e)?;
    let ladder = build_ladder(&t).map_err(e)?;
    let gens: BTreeSet<LatticePoint> = s
        .degree_one_generators()
        .map_err(e)?
        .iter()
        .cloned()
        .collect();
    let mut heights = Vec::new();
    for r in &ladder.rungs {
        let sum = r.witness.sum().ok_or("empty witness")?;
        ensure(sum == r.point, || {
            format!("witness of {} sums to {sum}", r.point)
        })?;
        ensure(
            r.witness.summands().iter().all(|g| gens.contains(g)),
            || format!("witness of {} uses a non-generator", r.point),
        )?;
        ensure(s.skew_height(&r.point).map_err(e)? == r.skew_height, || {
            "height mismatch".into()
        })?;
        heights.push(r.skew_height.clone());
    }
    let want: Vec<BigInt> = (1..=6).map(big).collect();
    ensure(heights == want, || format!("ladder heights {heights:?}"))?;
    Ok(format!(
        "{} holes up to 20, none below 7, one at 7; ladder 1..6 verified",
        holes.holes.len()
    ))
}

fn ac4() -> Outcome {
    let lambdas: Vec<BigInt> = [5, 9, 43].iter().map(|&v| big(v)).collect();
    let step = lift_lambda(&lambdas, 1).map_err(e)?;
    ensure(step.ell == big(387), || format!("ℓ = {}", step.ell))?;
    let after: Vec<BigInt> = [392, 9, 43].iter().map(|&v| big(v)).collect();
    ensure(step.lambdas_after == after, || "λ' wrong".into())?;
    let q = pt(&[4, 7, 18, 2]);
    let image = step.alpha(&q).map_err(e)?;
    ensure(image == pt(&[315, 7, 18, 2]), || format!("α(q) = {image}"))?;
    let s = RectSimplex::new(&lambdas).map_err(e)?;
    let s2 = RectSimplex::new(&after).map_err(e)?;
    let (h, h2) = (
        s.skew_height(&q).map_err(e)?,
        s2.skew_height(&image).map_err(e)?,
    );
    ensure(h == big(7) && h2 == big(7), || {
        format!("skew heights {h} -> {h2}")
    })?;
    for i in 2..=4 {
        ensure(image.coord(i) == q.coord(i), || {
            format!("coordinate {i} changed")
        })?;
    }
    let l = lcm_all(&lambdas).map_err(e)?;
    let l2 = lcm_all(&after).map_err(e)?;
    ensure(&l / 5 == big(387) && &l2 / 392 == big(387), || {
        "L/λ_1 ≠ L'/λ'_1".into()
    })?;
    Ok("ℓ = 387, α(q) = (315,7,18,2), heights kept, L/λ_1 = L'/λ'_1 = 387".into())
}

fn ac5() -> Outcome {
    let mut checked = 0usize;
    let limits = NaiveLimits {
        max_degree: 3,
        ..NaiveLimits::default()
    };
    for lambdas in [[1, 1, 1], [2, 3, 5], [3, 4, 5], [5, 9, 43]] {
        let s = RectSimplex::from_i64s(&lambdas).map_err(e)?;
        let mut oracle = SemigroupOracle::new(&s).map_err(e)?;
        let b: Vec<i64> = lambdas.iter().map(|&l| l.min(6)).collect();
        for d in 0..=3 {
            for x in 0..=b[0] {
                for y in 0..=b[1] {
                    for z in 0..=b[2] {
                        let p = pt(&[x, y, z, d]);
                        let fast = oracle.contains(&p).map_err(e)?;
                        let slow = naive_member(&s, &p, limits).map_err(e)?;
                        ensure(fast == slow, || {
                            format!("{p} in {lambdas:?}: oracle {fast}, naive {slow}")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} points, 0 discrepancies"))
}

fn ac6() -> Outcome {
    for lambdas in [[2, 3, 5], [5, 9, 43], [7, 13, 89]] {
        let s = RectSimplex::from_i64s(&lambdas).map_err(e)?;
        let found = boundary_hole_scan(&s, 3).map_err(e)?;
        ensure(found.is_empty(), || {
            format!("{lambdas:?}: boundary hole {}", found[0])
        })?;
    }
    Ok("no boundary holes up to degree 3".into())
}

fn ac7() -> Outcome {
    let (trace, s, cert) = deep_hole_construction(3).map_err(e)?;
    let bytes = emit(&cert);
    ensure(verify(&bytes).map_err(e)?.is_accepted(), || {
        "verifier rejects".into()
    })?;
    ensure(trace.lifts_per_facet(3) == vec![2, 2, 2], || {
        "lift counts".into()
    })?;
    let z = cert.transported_point().map_err(e)?;
    ensure(
        cert.transported_witness.pair_scan == PAIR_SCAN_EXHAUSTIVE,
        || "transported point not certified as a hole".into(),
    )?;
    let mut min = None::<BigInt>;
    for (facet, h) in s.heights(&z).map_err(e)? {
        ensure(h >= big(3), || format!("height {h} above {facet}"))?;
        min = Some(min.map_or(h.clone(), |m| m.min(h)));
    }
    // the skew form changes with every lift; the witness keeps its height under each
    let mut images = trace
        .transport(&holeforge::witness_hole(&family(&big(5)).map_err(e)?))
        .map_err(e)?;
    let mut forms = 0;
    for (step, image) in trace.steps().iter().zip(images.drain(1..)) {
        let target = step.target().map_err(e)?;
        ensure(target.skew_height(&image).map_err(e)? >= big(3), || {
            "skew height dropped".into()
        })?;
        forms += 1;
    }
    ensure(cert.min_height_all_facets() >= &big(3), || {
        "claimed bound below 3".into()
    })?;
    Ok(format!(
        "final λ = {}, witness {z}, min height {} (skew checked under {forms} lifted forms)",
        holeforge::simplex::fmt_lambdas(s.lambdas()),
        min.unwrap_or_default()
    ))
}

fn ac8() -> Outcome {
    let original = certify(&GoodTriple::from_i64s([5, 9, 43]).map_err(e)?).map_err(e)?;
    let json: Value = serde_json::from_slice(&emit(&original)).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut rejected, mut same) = (0, 0);
    for _ in 0..100 {
        let mut v = json.clone();
        let what = mutate(&mut v, &mut rng);
        match classify(&original, &serde_json::to_vec(&v).map_err(e)?) {
            MutationOutcome::Rejected | MutationOutcome::ParseError => rejected += 1,
            MutationOutcome::Equivalent => same += 1,
            MutationOutcome::Escaped => return Err(format!("accepted mutation {what}")),
        }
    }
    Ok(format!("{rejected} rejected, {same} equivalent, 0 escaped"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "AC1 good-triple instantiation",
            ac1,
            Duration::from_millis(1),
        ),
        ("AC2 non-normality of (5,9,43)", ac2, Duration::from_secs(1)),
        ("AC3 height lower bound", ac3, Duration::from_secs(10)),
        ("AC4 lifting correctness", ac4, Duration::from_millis(1)),
        ("AC5 oracle equivalence", ac5, Duration::from_secs(60)),
        ("AC6 no boundary holes", ac6, Duration::from_secs(60)),
        ("AC7 construction at k = 3", ac7, Duration::from_secs(10)),
        ("AC8 certificate robustness", ac8, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let line = match result {
            Ok(detail) if took <= limit => {
                format!("PASS {name} [{took:.2?} <= {limit:?}] {detail}")
            }
            Ok(detail) => {
                failed += 1;
                format!("FAIL {name} [{took:.2?} > {limit:?}] {detail}")
            }
            Err(why) => {
                failed += 1;
                format!("FAIL {name} [{took:.2?}] {why}")
            }
        };
        println!("{line}");
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

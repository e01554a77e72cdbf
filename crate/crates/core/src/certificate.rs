//! Hole-depth certificates: canonical JSON encoding and an independent
//! verifier.
//!
//! The verifier only uses the exact arithmetic in [`crate::lattice`]. It never
//! calls the membership oracle; every decomposition question it needs is
//! settled by its own exhaustive degree-two scan.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{dot, lcm_all, pairwise_coprime, LatticePoint, LinearForm};

pub const SCHEMA_VERSION: &str = "holeforge-certificate/1";

/// File extension for emitted certificates.
pub const FILE_EXTENSION: &str = "holecert.json";

/// Degree up to which the boundary of the base simplex is scanned.
pub const BOUNDARY_SCAN_DEGREE: u64 = 2;

/// Largest number of `(x, y)` cells the transported-witness pair scan may visit.
pub const PAIR_SCAN_BUDGET: u128 = 64_000_000;

pub const NON_NORMALITY_STATEMENT: &str =
    "hole lies in the saturation, has degree 2, and no pair of degree-one generators sums to it";
pub const BOUNDARY_STATEMENT: &str =
    "every point of the saturation of degree at most max_degree lying on a facet decomposes into degree-one generators";
pub const DERIVATION: &str = "skew: ladder realizes every skew height 1..top_height by reduced \
semigroup elements, reduced points are unique per skew height, so every hole has skew height > \
top_height, attained by the hole; coordinate F_i: holes of a 3-dimensional rectangular simplex \
avoid the boundary (height >= 1), each lift on F_i adds beta >= 1 and preserves every other height";

pub const PAIR_SCAN_EXHAUSTIVE: &str = "exhaustive";
pub const PAIR_SCAN_SKIPPED: &str = "skipped";

/// Arbitrary-precision integer encoded as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        let canonical = raw.strip_prefix('-').unwrap_or(&raw);
        if canonical.is_empty()
            || !canonical.bytes().all(|b| b.is_ascii_digit())
            || (canonical.len() > 1 && canonical.starts_with('0'))
        {
            return Err(serde::de::Error::custom(format!(
                "`{raw}` is not a canonical decimal integer"
            )));
        }
        raw.parse::<BigInt>()
            .map(Int)
            .map_err(serde::de::Error::custom)
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int(v)
    }
}

impl From<&BigInt> for Int {
    fn from(v: &BigInt) -> Self {
        Int(v.clone())
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int(BigInt::from(v))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn ints(values: &[BigInt]) -> Vec<Int> {
    values.iter().map(Int::from).collect()
}

pub fn point_ints(p: &LatticePoint) -> Vec<Int> {
    ints(p.coords())
}

fn bigs_of(values: &[Int]) -> Vec<BigInt> {
    values.iter().map(|v| v.0.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: String,
    /// λ of the simplex the claims are about.
    pub lambdas: Vec<Int>,
    pub good_triple: GoodTripleClause,
    pub ladder: LadderClause,
    pub non_normality: NonNormalityClause,
    pub boundary: BoundaryClause,
    pub lift_trace: Vec<LiftClause>,
    pub transported_witness: TransportClause,
    pub claims: Claims,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoodTripleClause {
    pub lambdas: Vec<Int>,
    pub pairwise_coprime: bool,
    /// `λ_2 λ_3 - 2 λ_1 λ_3 + λ_1 λ_2`, required to equal 2.
    pub skew_delta: Int,
    /// `λ_1 + 2 < λ_2`.
    pub gap_condition: bool,
    pub odd_lambda1_lambda3: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderClause {
    /// Ladder covers skew heights `1..=top_height`.
    pub top_height: Int,
    pub entries: Vec<LadderEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderEntry {
    pub point: Vec<Int>,
    pub skew_height: Int,
    pub witness: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonNormalityClause {
    pub hole: Vec<Int>,
    pub skew_height: Int,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryClause {
    pub max_degree: Int,
    pub boundary_holes: Vec<Vec<Int>>,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftClause {
    pub facet: Int,
    pub ell: Int,
    pub lambdas_before: Vec<Int>,
    pub lambdas_after: Vec<Int>,
    pub witness_before: Vec<Int>,
    pub witness_after: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportClause {
    /// Image of the hole under every lift, in the final simplex.
    pub point: Vec<Int>,
    /// Keys `F1`, `F2`, `F3`, `Fskew` for the final simplex.
    pub heights: BTreeMap<String, Int>,
    /// Skew height of the untransported hole in the base simplex.
    pub base_skew_height: Int,
    /// [`PAIR_SCAN_EXHAUSTIVE`] when the final point was shown to be a hole.
    pub pair_scan: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claims {
    pub min_skew_height: Int,
    pub min_coordinate_heights: Vec<Int>,
    pub min_height_all_facets: Int,
    pub derivation: String,
}

impl Claims {
    /// Claims implied by a ladder reaching `top_height` and the given number
    /// of lifts on each coordinate facet.
    pub fn derive(top_height: &BigInt, lifts_per_facet: &[usize]) -> Claims {
        let skew: BigInt = top_height + 1;
        let coords: Vec<BigInt> = lifts_per_facet
            .iter()
            .map(|&c| BigInt::from(c as u64 + 1))
            .collect();
        let min_all = coords.iter().fold(skew.clone(), |m, c| m.min(c.clone()));
        Claims {
            min_skew_height: Int(skew),
            min_coordinate_heights: ints(&coords),
            min_height_all_facets: Int(min_all),
            derivation: DERIVATION.to_string(),
        }
    }
}

impl Certificate {
    pub fn final_lambdas(&self) -> Vec<BigInt> {
        bigs_of(&self.lambdas)
    }

    pub fn base_lambdas(&self) -> Vec<BigInt> {
        bigs_of(&self.good_triple.lambdas)
    }

    pub fn min_height_all_facets(&self) -> &BigInt {
        &self.claims.min_height_all_facets.0
    }

    pub fn transported_point(&self) -> Result<LatticePoint> {
        LatticePoint::new(bigs_of(&self.transported_witness.point))
    }
}

/// Canonical encoding: sorted keys, integers as decimal strings, two-space
/// indentation and a trailing newline.
pub fn emit(cert: &Certificate) -> Vec<u8> {
    let value = serde_json::to_value(cert).expect("certificate is always representable");
    let mut out = serde_json::to_vec_pretty(&value).expect("value serializes");
    out.push(b'\n');
    out
}

pub fn parse(bytes: &[u8]) -> Result<Certificate> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Outcome of [`verify`] on a well-formed certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected { clause: String, detail: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => write!(f, "accepted"),
            Verdict::Rejected { clause, detail } => write!(f, "rejected [{clause}]: {detail}"),
        }
    }
}

/// Parses and checks a certificate. Malformed input is an error, a
/// well-formed but false certificate is a [`Verdict::Rejected`].
pub fn verify(bytes: &[u8]) -> Result<Verdict> {
    let cert = parse(bytes)?;
    Ok(verify_certificate(&cert))
}

pub fn verify_certificate(cert: &Certificate) -> Verdict {
    match check(cert) {
        Ok(()) => Verdict::Accepted,
        Err(Reject { clause, detail }) => Verdict::Rejected {
            clause: clause.to_string(),
            detail,
        },
    }
}

struct Reject {
    clause: &'static str,
    detail: String,
}

type Check<T = ()> = std::result::Result<T, Reject>;

fn reject<T>(clause: &'static str, detail: impl Into<String>) -> Check<T> {
    Err(Reject {
        clause,
        detail: detail.into(),
    })
}

fn ensure(cond: bool, clause: &'static str, detail: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        reject(clause, detail())
    }
}

/// The skew-facet form of a 3-dimensional rectangular simplex.
struct Skew {
    lambdas: Vec<BigInt>,
    lcm: BigInt,
    cofactors: Vec<BigInt>,
    form: LinearForm,
}

impl Skew {
    fn new(lambdas: &[BigInt], clause: &'static str) -> Check<Skew> {
        if lambdas.len() != 3 {
            return reject(
                clause,
                format!("expected 3 lambdas, found {}", lambdas.len()),
            );
        }
        let lcm = lcm_all(lambdas).or_else(|e| reject(clause, e.to_string()))?;
        let cofactors: Vec<BigInt> = lambdas.iter().map(|l| &lcm / l).collect();
        let mut coeffs: Vec<BigInt> = cofactors.iter().map(|c| -c).collect();
        coeffs.push(lcm.clone());
        Ok(Skew {
            lambdas: lambdas.to_vec(),
            lcm,
            cofactors,
            form: LinearForm::new(coeffs),
        })
    }

    fn height(&self, z: &LatticePoint) -> BigInt {
        dot(&self.form, z).expect("length checked by caller")
    }

    fn in_saturation(&self, z: &LatticePoint) -> bool {
        z.coords().iter().all(|c| !c.is_negative()) && !self.height(z).is_negative()
    }

    fn is_generator(&self, z: &LatticePoint) -> bool {
        z.degree().is_one() && self.in_saturation(z)
    }
}

fn point(values: &[Int], clause: &'static str, what: &str) -> Check<LatticePoint> {
    if values.len() != 4 {
        return reject(
            clause,
            format!("{what} must have 4 coordinates, found {}", values.len()),
        );
    }
    Ok(LatticePoint::new(bigs_of(values)).expect("length 4"))
}

fn check(cert: &Certificate) -> Check {
    ensure(cert.schema_version == SCHEMA_VERSION, "schema", || {
        format!("unsupported schema version `{}`", cert.schema_version)
    })?;

    let base = check_good_triple(&cert.good_triple)?;
    let top = check_ladder(&cert.ladder, &base)?;
    let hole = check_non_normality(&cert.non_normality, &base, &top)?;
    check_boundary(&cert.boundary, &base)?;
    let (final_skew, transported, lifts) = check_lift_trace(cert, &base, &hole)?;
    check_transport(
        &cert.transported_witness,
        &base,
        &final_skew,
        &hole,
        &transported,
    )?;
    check_claims(&cert.claims, &top, &lifts)
}

fn check_good_triple(clause: &GoodTripleClause) -> Check<Skew> {
    const C: &str = "good_triple";
    let l = bigs_of(&clause.lambdas);
    ensure(l.len() == 3, C, || {
        format!("expected 3 lambdas, found {}", l.len())
    })?;
    ensure(l.iter().all(Signed::is_positive), C, || {
        "lambdas must be positive".into()
    })?;
    ensure(l[0] <= l[1] && l[1] <= l[2], C, || {
        "lambdas must be sorted ascending".into()
    })?;

    let coprime = pairwise_coprime(&l);
    let delta = &l[1] * &l[2] - BigInt::from(2) * &l[0] * &l[2] + &l[0] * &l[1];
    let gap = &l[0] + 2 < l[1];
    let odd = l[0].is_odd() && l[2].is_odd();

    ensure(clause.pairwise_coprime == coprime, C, || {
        format!(
            "recorded pairwise_coprime = {} but recomputed {coprime}",
            clause.pairwise_coprime
        )
    })?;
    ensure(clause.skew_delta.0 == delta, C, || {
        format!(
            "recorded skew_delta = {} but recomputed {delta}",
            clause.skew_delta
        )
    })?;
    ensure(clause.gap_condition == gap, C, || {
        format!(
            "recorded gap_condition = {} but recomputed {gap}",
            clause.gap_condition
        )
    })?;
    ensure(clause.odd_lambda1_lambda3 == odd, C, || {
        format!(
            "recorded odd_lambda1_lambda3 = {} but recomputed {odd}",
            clause.odd_lambda1_lambda3
        )
    })?;
    ensure(coprime, C, || "lambdas are not pairwise coprime".into())?;
    ensure(delta == BigInt::from(2), C, || {
        format!("σ_λ(δ) = {delta}, expected 2")
    })?;
    ensure(gap, C, || "λ_1 + 2 < λ_2 fails".into())?;
    ensure(odd, C, || "λ_1 and λ_3 must be odd".into())?;
    Skew::new(&l, C)
}

fn check_ladder(ladder: &LadderClause, base: &Skew) -> Check<BigInt> {
    const C: &str = "ladder";
    let top = ladder.top_height.0.clone();
    ensure(top == &base.lambdas[0] + 1, C, || {
        format!(
            "top_height {top} must be λ_1 + 1 = {}",
            &base.lambdas[0] + 1
        )
    })?;
    let mut heights = Vec::with_capacity(ladder.entries.len());
    for (idx, entry) in ladder.entries.iter().enumerate() {
        let z = point(&entry.point, C, "ladder point")?;
        let h = base.height(&z);
        ensure(h == entry.skew_height.0, C, || {
            format!(
                "entry {idx}: recorded skew height {} but σ_λ = {h}",
                entry.skew_height
            )
        })?;
        for i in 0..3 {
            let zi = &z[i];
            ensure(!zi.is_negative() && zi < &base.lambdas[i], C, || {
                format!(
                    "entry {idx}: coordinate {} = {zi} outside [0, λ_{})",
                    i + 1,
                    i + 1
                )
            })?;
        }
        let degree = z.degree().to_usize();
        ensure(degree == Some(entry.witness.len()), C, || {
            format!(
                "entry {idx}: witness has {} summands for degree {}",
                entry.witness.len(),
                z.degree()
            )
        })?;
        let mut sum = LatticePoint::zero(4);
        for g in &entry.witness {
            let g = point(g, C, "witness summand")?;
            ensure(base.is_generator(&g), C, || {
                format!("entry {idx}: {g} is not a degree-one generator")
            })?;
            sum = &sum + &g;
        }
        ensure(sum == z, C, || {
            format!("entry {idx}: witness sums to {sum}, not {z}")
        })?;
        heights.push(h);
    }
    let expected: Vec<BigInt> = num_iter_inclusive(&top);
    ensure(heights == expected, C, || {
        "ladder skew heights must be exactly 1, 2, ..., top_height in order".into()
    })?;
    Ok(top)
}

fn num_iter_inclusive(top: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut h = BigInt::one();
    while &h <= top {
        out.push(h.clone());
        h += 1;
    }
    out
}

fn check_non_normality(
    clause: &NonNormalityClause,
    base: &Skew,
    top: &BigInt,
) -> Check<LatticePoint> {
    const C: &str = "non_normality";
    ensure(clause.statement == NON_NORMALITY_STATEMENT, C, || {
        "unexpected statement text".into()
    })?;
    let q = point(&clause.hole, C, "hole")?;
    let h = base.height(&q);
    ensure(h == clause.skew_height.0, C, || {
        format!(
            "recorded skew height {} but σ_λ(hole) = {h}",
            clause.skew_height
        )
    })?;
    ensure(h == top + 1, C, || {
        format!("hole skew height {h} must equal top_height + 1")
    })?;
    ensure(q.degree() == &BigInt::from(2), C, || {
        format!("hole {q} must have degree 2")
    })?;
    ensure(base.in_saturation(&q), C, || {
        format!("{q} is not in the saturation")
    })?;
    match pair_decomposition(base, &q) {
        Some(PairScan::Found(g)) => reject(C, format!("{q} = {g} + {}", &q - &g)),
        Some(PairScan::NoneFound) => Ok(q),
        None => reject(C, "pair scan exceeds the arithmetic budget"),
    }
}

fn check_boundary(clause: &BoundaryClause, base: &Skew) -> Check {
    const C: &str = "boundary";
    ensure(clause.statement == BOUNDARY_STATEMENT, C, || {
        "unexpected statement text".into()
    })?;
    ensure(
        clause.max_degree.0 == BigInt::from(BOUNDARY_SCAN_DEGREE),
        C,
        || format!("max_degree must be {BOUNDARY_SCAN_DEGREE}"),
    )?;
    ensure(clause.boundary_holes.is_empty(), C, || {
        "certificate lists boundary holes".into()
    })?;
    // Degree-one points of the saturation are generators; only degree 2 needs
    // a decomposition.
    for z in facet_points_of_degree_two(base) {
        match pair_decomposition(base, &z) {
            Some(PairScan::Found(_)) => {}
            Some(PairScan::NoneFound) => return reject(C, format!("boundary hole {z}")),
            None => return reject(C, "boundary scan exceeds the arithmetic budget"),
        }
    }
    Ok(())
}

/// Degree-two points of the saturation with some height equal to zero.
fn facet_points_of_degree_two(base: &Skew) -> Vec<LatticePoint> {
    let two = BigInt::from(2);
    let budget = &base.lcm * &two;
    let mut out = Vec::new();
    let max0 = (&budget / &base.cofactors[0]).to_u64().unwrap_or(0);
    for a in 0..=max0 {
        let a = BigInt::from(a);
        let r0 = &budget - &base.cofactors[0] * &a;
        let max1 = (&r0 / &base.cofactors[1]).to_u64().unwrap_or(0);
        for b in 0..=max1 {
            let b = BigInt::from(b);
            let r1 = &r0 - &base.cofactors[1] * &b;
            let max2 = &r1 / &base.cofactors[2];
            let mut cs: Vec<BigInt> = Vec::new();
            if a.is_zero() || b.is_zero() {
                let hi = max2.to_u64().unwrap_or(0);
                cs.extend((0..=hi).map(BigInt::from));
            } else {
                cs.push(BigInt::zero());
                // σ_λ = 0 exactly
                if (&r1 % &base.cofactors[2]).is_zero() && max2.is_positive() {
                    cs.push(max2.clone());
                }
            }
            for c in cs {
                out.push(
                    LatticePoint::new(vec![a.clone(), b.clone(), c, two.clone()]).expect("len 4"),
                );
            }
        }
    }
    out
}

fn check_lift_trace(
    cert: &Certificate,
    base: &Skew,
    hole: &LatticePoint,
) -> Check<(Skew, LatticePoint, Vec<usize>)> {
    const C: &str = "lift_trace";
    let mut lambdas = base.lambdas.clone();
    let mut witness = hole.clone();
    let mut lifts = vec![0usize; 3];
    for (idx, step) in cert.lift_trace.iter().enumerate() {
        let facet = step.facet.0.to_usize().filter(|f| (1..=3).contains(f));
        let Some(facet) = facet else {
            return reject(C, format!("step {idx}: facet {} outside 1..=3", step.facet));
        };
        let i = facet - 1;
        ensure(bigs_of(&step.lambdas_before) == lambdas, C, || {
            format!("step {idx}: lambdas_before does not continue the chain")
        })?;
        let others: Vec<BigInt> = (0..3)
            .filter(|&j| j != i)
            .map(|j| lambdas[j].clone())
            .collect();
        let ell = lcm_all(&others).or_else(|e| reject(C, e.to_string()))?;
        ensure(step.ell.0 == ell, C, || {
            format!("step {idx}: ℓ recorded {} but lcm is {ell}", step.ell)
        })?;
        let mut after = lambdas.clone();
        after[i] += &ell;
        ensure(bigs_of(&step.lambdas_after) == after, C, || {
            format!("step {idx}: λ'_{facet} must be λ_{facet} + ℓ")
        })?;
        let l_before = lcm_all(&lambdas).or_else(|e| reject(C, e.to_string()))?;
        let l_after = lcm_all(&after).or_else(|e| reject(C, e.to_string()))?;
        ensure(&l_before / &lambdas[i] == &l_after / &after[i], C, || {
            format!("step {idx}: L/λ_i differs from L'/λ'_i")
        })?;

        let before_pt = point(&step.witness_before, C, "witness_before")?;
        ensure(before_pt == witness, C, || {
            format!("step {idx}: witness_before does not continue the chain")
        })?;
        // β(z) = ℓ z_4 - Σ_{j≠i} (ℓ/λ_j) z_j
        let mut beta = &ell * witness.degree();
        for j in (0..3).filter(|&j| j != i) {
            beta -= (&ell / &lambdas[j]) * &witness[j];
        }
        ensure(beta.is_positive(), C, || {
            format!("step {idx}: β = {beta} is not positive")
        })?;
        let image = witness.add_to_coord(facet, &beta);
        ensure(
            point(&step.witness_after, C, "witness_after")? == image,
            C,
            || format!("step {idx}: witness_after must be α(witness_before) = {image}"),
        )?;

        witness = image;
        lambdas = after;
        lifts[i] += 1;
    }
    ensure(bigs_of(&cert.lambdas) == lambdas, C, || {
        "final lambdas do not match the end of the lift chain".into()
    })?;
    let final_skew = Skew::new(&lambdas, C)?;
    Ok((final_skew, witness, lifts))
}

fn check_transport(
    clause: &TransportClause,
    base: &Skew,
    final_skew: &Skew,
    hole: &LatticePoint,
    transported: &LatticePoint,
) -> Check {
    const C: &str = "transported_witness";
    let z = point(&clause.point, C, "transported point")?;
    ensure(&z == transported, C, || {
        format!("point must be {transported}")
    })?;
    let base_h = base.height(hole);
    ensure(clause.base_skew_height.0 == base_h, C, || {
        format!("base_skew_height must be {base_h}")
    })?;
    let final_h = final_skew.height(&z);
    ensure(final_h == base_h, C, || {
        format!("skew height changed along the lifts: {base_h} -> {final_h}")
    })?;
    let mut expected = BTreeMap::new();
    for i in 0..3 {
        expected.insert(format!("F{}", i + 1), Int(z[i].clone()));
    }
    expected.insert("Fskew".to_string(), Int(final_h));
    ensure(clause.heights == expected, C, || {
        "recorded heights do not match".into()
    })?;

    let scan = pair_decomposition(final_skew, &z);
    let mode = if scan.is_some() {
        PAIR_SCAN_EXHAUSTIVE
    } else {
        PAIR_SCAN_SKIPPED
    };
    ensure(clause.pair_scan == mode, C, || {
        format!("pair_scan must be `{mode}`")
    })?;
    match scan {
        Some(PairScan::Found(g)) => {
            reject(C, format!("{z} = {g} + {} in the final semigroup", &z - &g))
        }
        _ => Ok(()),
    }
}

fn check_claims(claims: &Claims, top: &BigInt, lifts: &[usize]) -> Check {
    const C: &str = "claims";
    let expected = Claims::derive(top, lifts);
    ensure(claims.derivation == DERIVATION, C, || {
        "unexpected derivation text".into()
    })?;
    ensure(
        claims.min_skew_height == expected.min_skew_height,
        C,
        || {
            format!(
                "min_skew_height {} does not follow: ladder top {top} gives {}",
                claims.min_skew_height, expected.min_skew_height
            )
        },
    )?;
    ensure(
        claims.min_coordinate_heights == expected.min_coordinate_heights,
        C,
        || "min_coordinate_heights must be 1 + number of lifts on each facet".into(),
    )?;
    ensure(
        claims.min_height_all_facets == expected.min_height_all_facets,
        C,
        || {
            format!(
                "min_height_all_facets must be {}",
                expected.min_height_all_facets
            )
        },
    )
}

/// Outcome of the degree-two decomposition scan.
pub enum PairScan {
    /// A degree-one summand `g` with `z - g` also degree one.
    Found(LatticePoint),
    NoneFound,
}

/// Searches `z = g + (z - g)` with both summands degree-one points of the
/// saturation. Loops over the two smallest of the first three coordinates of
/// `g` and solves for the third as an interval, with remainders updated
/// incrementally. Returns `None` when the scan exceeds [`PAIR_SCAN_BUDGET`]
/// or 128-bit arithmetic.
fn pair_decomposition(s: &Skew, z: &LatticePoint) -> Option<PairScan> {
    if z.degree() != &BigInt::from(2) || !s.in_saturation(z) {
        return Some(PairScan::NoneFound);
    }
    let zs: Vec<i128> = z
        .coords()
        .iter()
        .map(|c| c.to_i128())
        .collect::<Option<_>>()?;
    let a: Vec<i128> = s
        .cofactors
        .iter()
        .map(|c| c.to_i128())
        .collect::<Option<_>>()?;
    let lcm = s.lcm.to_i128()?;
    // every intermediate stays below a_i z_i + 2L in magnitude
    let bound: i128 = 1 << 120;
    for i in 0..3 {
        if a[i].checked_mul(zs[i] + 1)?.abs() > bound {
            return None;
        }
    }
    if lcm > bound {
        return None;
    }

    let mut axes = [0usize, 1, 2];
    axes.sort_by_key(|&i| zs[i]);
    let (x, y, c) = (axes[0], axes[1], axes[2]);
    let cells = (zs[x] as u128 + 1).checked_mul(zs[y] as u128 + 1)?;
    if cells > PAIR_SCAN_BUDGET {
        return None;
    }

    let (ax, ay, ac) = (a[x], a[y], a[c]);
    let (qa_step, ra_step) = (ay.div_euclid(ac), ay.rem_euclid(ac));
    for gx in 0..=zs[x] {
        // A(gy) = L - ax gx - ay gy      must admit ac gc <= A
        // B(gy) = L - ax (zx-gx) - ay (zy-gy) must admit ac (zc - gc) <= B
        let a0 = lcm - ax * gx;
        let b0 = lcm - ax * (zs[x] - gx) - ay * zs[y];
        let (mut qa, mut ra) = (a0.div_euclid(ac), a0.rem_euclid(ac));
        let (mut qb, mut rb) = (b0.div_euclid(ac), b0.rem_euclid(ac));
        for gy in 0..=zs[y] {
            if qa < 0 {
                break;
            }
            if qb >= 0 {
                let hi = qa.min(zs[c]);
                let lo = (zs[c] - qb).max(0);
                if lo <= hi {
                    let mut g = vec![BigInt::zero(); 4];
                    g[x] = BigInt::from(gx);
                    g[y] = BigInt::from(gy);
                    g[c] = BigInt::from(lo);
                    g[3] = BigInt::one();
                    return Some(PairScan::Found(LatticePoint::new(g).expect("len 4")));
                }
            }
            ra -= ra_step;
            qa -= qa_step;
            if ra < 0 {
                ra += ac;
                qa -= 1;
            }
            rb += ra_step;
            qb += qa_step;
            if rb >= ac {
                rb -= ac;
                qb += 1;
            }
        }
    }
    Some(PairScan::NoneFound)
}

/// Verifier-side degree-two test for a point of the simplex with the given
/// λ: `Some(true)` if it splits into two degree-one generators, `Some(false)`
/// if not, `None` if the scan is out of budget.
pub fn degree_two_decomposes(lambdas: &[BigInt], z: &LatticePoint) -> Result<Option<bool>> {
    let skew = Skew::new(lambdas, "input").map_err(|r| Error::argument(r.detail))?;
    if z.len() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: z.len(),
        });
    }
    Ok(pair_decomposition(&skew, z).map(|r| matches!(r, PairScan::Found(_))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::bigs;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::from_i64s(c)
    }

    #[test]
    fn int_encoding() {
        let big = BigInt::from(u64::MAX) * BigInt::from(1000);
        let s = serde_json::to_string(&Int(big.clone())).unwrap();
        assert_eq!(s, format!("\"{big}\""));
        let back: Int = serde_json::from_str(&s).unwrap();
        assert_eq!(back.0, big);
        assert!(serde_json::from_str::<Int>("\"07\"").is_err());
        assert!(serde_json::from_str::<Int>("\"-\"").is_err());
        assert!(serde_json::from_str::<Int>("\"1e3\"").is_err());
        assert!(serde_json::from_str::<Int>("7").is_err());
        assert_eq!(
            serde_json::from_str::<Int>("\"-12\"").unwrap().0,
            BigInt::from(-12)
        );
        assert_eq!(
            serde_json::from_str::<Int>("\"0\"").unwrap().0,
            BigInt::zero()
        );
    }

    /// Brute-force pair scan over all generator pairs, for comparison.
    fn brute_pair(l: [i64; 3], z: [i64; 4]) -> bool {
        let lcm = l[0] * l[1] * l[2];
        let a = [lcm / l[0], lcm / l[1], lcm / l[2]];
        let gen = |g: [i64; 3]| {
            g.iter().all(|&v| v >= 0) && a[0] * g[0] + a[1] * g[1] + a[2] * g[2] <= lcm
        };
        for x in 0..=l[0] {
            for y in 0..=l[1] {
                for w in 0..=l[2] {
                    let g = [x, y, w];
                    let h = [z[0] - x, z[1] - y, z[2] - w];
                    if gen(g) && gen(h) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn pair_scan_matches_brute_force() {
        for l in [[5i64, 9, 43], [2, 3, 5], [3, 4, 5]] {
            let lam = bigs(&l);
            for a in 0..=2 * l[0] {
                for b in 0..=2 * l[1] {
                    for c in (0..=2 * l[2]).step_by(3) {
                        let z = p(&[a, b, c, 2]);
                        let fast = degree_two_decomposes(&lam, &z).unwrap().unwrap();
                        let in_sat = {
                            let lcm = l[0] * l[1] * l[2];
                            2 * lcm - (lcm / l[0]) * a - (lcm / l[1]) * b - (lcm / l[2]) * c >= 0
                        };
                        let slow = in_sat && brute_pair(l, [a, b, c, 2]);
                        assert_eq!(fast, slow, "λ={l:?} z={z}");
                    }
                }
            }
        }
    }

    #[test]
    fn pair_scan_on_witness_hole() {
        assert_eq!(
            degree_two_decomposes(&bigs(&[5, 9, 43]), &p(&[4, 7, 18, 2])).unwrap(),
            Some(false)
        );
        assert_eq!(
            degree_two_decomposes(&bigs(&[392, 9, 43]), &p(&[315, 7, 18, 2])).unwrap(),
            Some(false)
        );
        assert_eq!(
            degree_two_decomposes(&bigs(&[5, 9, 43]), &p(&[4, 2, 42, 2])).unwrap(),
            Some(true)
        );
    }

    #[test]
    fn facet_points_cover_the_boundary() {
        let base = Skew::new(&bigs(&[2, 3, 5]), "t").ok().unwrap();
        let pts = facet_points_of_degree_two(&base);
        let mut brute = Vec::new();
        for a in 0..=4 {
            for b in 0..=6 {
                for c in 0..=10 {
                    let z = p(&[a, b, c, 2]);
                    let h = base.height(&z);
                    if !h.is_negative() && (a == 0 || b == 0 || c == 0 || h.is_zero()) {
                        brute.push(z);
                    }
                }
            }
        }
        let mut got = pts.clone();
        got.sort();
        brute.sort();
        assert_eq!(got, brute);
    }

    #[test]
    fn claims_derivation() {
        let c = Claims::derive(&BigInt::from(6), &[2, 2, 2]);
        assert_eq!(c.min_skew_height, Int::from(7));
        assert_eq!(c.min_coordinate_heights, vec![Int::from(3); 3]);
        assert_eq!(c.min_height_all_facets, Int::from(3));
        let c = Claims::derive(&BigInt::from(6), &[0, 0, 0]);
        assert_eq!(c.min_height_all_facets, Int::from(1));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(parse(b"{"), Err(Error::Parse(_))));
        assert!(matches!(verify(b"[]"), Err(Error::Parse(_))));
    }
}

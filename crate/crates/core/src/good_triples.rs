//! Good triples `(λ_1, λ_2, λ_3)`: pairwise coprime, `σ_λ(δ) = 2` for
//! `δ = (-1, 2, -1, 0)`, and `λ_1 + 2 < λ_2`.
//!
//! For such λ the points `p + kδ` and `2p + kδ`, with `p = (v_1 + v_3 + δ)/2`,
//! are reduced members of `Q(λ)` at every skew height `1..=λ_1 + 1`. Since a
//! reduced point is determined by its skew height, no hole sits below
//! `λ_1 + 2`, and `q = p + ((λ_1 + 1)/2) δ + v_1` is a hole exactly there.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::certificate::{
    self, ints, point_ints, BoundaryClause, Certificate, Claims, GoodTripleClause, Int,
    LadderClause, NonNormalityClause, TransportClause, Verdict, BOUNDARY_SCAN_DEGREE,
    BOUNDARY_STATEMENT, NON_NORMALITY_STATEMENT, PAIR_SCAN_EXHAUSTIVE, PAIR_SCAN_SKIPPED,
    SCHEMA_VERSION,
};
use crate::error::{Error, Result};
use crate::lattice::{bigs, delta, pairwise_coprime, LatticePoint};
use crate::oracle::{boundary_hole_scan, reduce, MembershipWitness, SemigroupOracle};
use crate::simplex::{fmt_lambdas, RectSimplex};

/// The condition of the good-triple definition that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    PairwiseCoprime,
    SkewDelta,
    Gap,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::PairwiseCoprime => write!(f, "condition 1 (pairwise coprime)"),
            Condition::SkewDelta => write!(f, "condition 2 (λ2λ3 - 2λ1λ3 + λ1λ2 = 2)"),
            Condition::Gap => write!(f, "condition 3 (λ1 + 2 < λ2)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleCheck {
    /// First failing condition, `None` for a good triple.
    pub failing: Option<Condition>,
    /// `λ_2 λ_3 - 2 λ_1 λ_3 + λ_1 λ_2`.
    pub skew_delta: BigInt,
    pub pairwise_coprime: bool,
    pub gap: bool,
}

impl TripleCheck {
    pub fn is_good(&self) -> bool {
        self.failing.is_none()
    }
}

fn skew_delta(l: &[BigInt]) -> BigInt {
    &l[1] * &l[2] - BigInt::from(2) * &l[0] * &l[2] + &l[0] * &l[1]
}

/// Checks the three defining conditions on a sorted positive triple.
pub fn is_good_triple(lambdas: &[BigInt]) -> Result<TripleCheck> {
    if lambdas.len() != 3 {
        return Err(Error::argument(format!(
            "need exactly 3 values, got {}",
            lambdas.len()
        )));
    }
    if lambdas.iter().any(|l| !l.is_positive()) {
        return Err(Error::argument("triple entries must be positive"));
    }
    if !(lambdas[0] <= lambdas[1] && lambdas[1] <= lambdas[2]) {
        return Err(Error::argument(format!(
            "triple {} must be sorted ascending",
            fmt_lambdas(lambdas)
        )));
    }
    let coprime = pairwise_coprime(lambdas);
    let delta = skew_delta(lambdas);
    let gap = &lambdas[0] + 2 < lambdas[1];
    let failing = if !coprime {
        Some(Condition::PairwiseCoprime)
    } else if delta != BigInt::from(2) {
        Some(Condition::SkewDelta)
    } else if !gap {
        Some(Condition::Gap)
    } else {
        None
    };
    Ok(TripleCheck {
        failing,
        skew_delta: delta,
        pairwise_coprime: coprime,
        gap,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodTriple {
    lambdas: [BigInt; 3],
}

impl GoodTriple {
    pub fn new(lambdas: &[BigInt]) -> Result<Self> {
        let check = is_good_triple(lambdas)?;
        if let Some(c) = check.failing {
            return Err(Error::argument(format!(
                "{} is not a good triple: {c} fails",
                fmt_lambdas(lambdas)
            )));
        }
        if lambdas[0].is_even() || lambdas[2].is_even() {
            return Err(Error::Internal(format!(
                "good triple {} with even λ_1 or λ_3",
                fmt_lambdas(lambdas)
            )));
        }
        Ok(GoodTriple {
            lambdas: [lambdas[0].clone(), lambdas[1].clone(), lambdas[2].clone()],
        })
    }

    pub fn from_i64s(lambdas: [i64; 3]) -> Result<Self> {
        Self::new(&bigs(&lambdas))
    }

    pub fn lambdas(&self) -> &[BigInt] {
        &self.lambdas
    }

    pub fn simplex(&self) -> Result<RectSimplex> {
        RectSimplex::new(&self.lambdas)
    }

    /// `p = ((λ_1 - 1)/2, 1, (λ_3 - 1)/2, 1)`, the reduced point at skew height 1.
    pub fn p(&self) -> LatticePoint {
        let [l1, _, l3] = &self.lambdas;
        LatticePoint::new(vec![
            (l1 - 1) / 2,
            BigInt::one(),
            (l3 - 1) / 2,
            BigInt::one(),
        ])
        .expect("4 coordinates")
    }

    pub fn delta(&self) -> LatticePoint {
        delta(3).expect("n = 3")
    }

    /// Number of ladder rungs per row minus one: `(λ_1 - 1)/2`.
    pub fn ladder_half(&self) -> BigInt {
        (&self.lambdas[0] - 1) / 2
    }

    /// Skew height of every hole is at least this: `λ_1 + 2`.
    pub fn min_skew_height(&self) -> BigInt {
        &self.lambdas[0] + 2
    }
}

impl fmt::Display for GoodTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_lambdas(&self.lambdas))
    }
}

/// `(λ_1, 2λ_1 - 1, 2λ_1² - λ_1 - 2)` for odd `λ_1 >= 5`.
pub fn family(lambda1: &BigInt) -> Result<GoodTriple> {
    if lambda1 < &BigInt::from(5) || lambda1.is_even() {
        return Err(Error::argument(format!(
            "family parameter must be odd and >= 5, got {lambda1}"
        )));
    }
    let l2 = BigInt::from(2) * lambda1 - 1;
    let l3 = BigInt::from(2) * lambda1 * lambda1 - lambda1 - 2;
    GoodTriple::new(&[lambda1.clone(), l2, l3])
        .map_err(|e| Error::Internal(format!("family member is not good: {e}")))
}

/// All good triples with `λ_3 <= max_lambda3`, sorted.
///
/// For fixed `λ_1, λ_2` condition 2 is linear in `λ_3`, so the scan over
/// pairs solves for `λ_3` instead of looping over it.
pub fn search_good_triples(max_lambda3: u64) -> Vec<GoodTriple> {
    let bound = max_lambda3 as i128;
    let mut out = Vec::new();
    for l1 in 1..=bound {
        for l2 in (l1 + 3)..=bound {
            // λ_3 (λ_2 - 2λ_1) = 2 - λ_1 λ_2
            let coef = l2 - 2 * l1;
            let rhs = 2 - l1 * l2;
            let candidates: Vec<i128> = if coef == 0 {
                if rhs == 0 {
                    (l2..=bound).collect()
                } else {
                    Vec::new()
                }
            } else if rhs % coef == 0 && rhs / coef >= l2 && rhs / coef <= bound {
                vec![rhs / coef]
            } else {
                Vec::new()
            };
            for l3 in candidates {
                let triple = [BigInt::from(l1), BigInt::from(l2), BigInt::from(l3)];
                if let Ok(t) = GoodTriple::new(&triple) {
                    out.push(t);
                }
            }
        }
    }
    out.sort_by(|a, b| a.lambdas.cmp(&b.lambdas));
    out
}

/// `q = (λ_1 - 1, λ_1 + 2, (λ_3 - λ_1)/2 - 1, 2)`, a hole at skew height `λ_1 + 2`.
pub fn witness_hole(t: &GoodTriple) -> LatticePoint {
    let [l1, _, l3] = &t.lambdas;
    LatticePoint::new(vec![l1 - 1, l1 + 2, (l3 - l1) / 2 - 1, BigInt::from(2)])
        .expect("4 coordinates")
}

/// One rung: a reduced member of `Q(λ)` at a given skew height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderRung {
    pub point: LatticePoint,
    pub skew_height: BigInt,
    pub witness: MembershipWitness,
    /// Set when the raw `p + kδ` / `2p + kδ` touched `σ_i = λ_i` and was
    /// moved into the strict box by subtracting vertices.
    pub reduced_from: Option<LatticePoint>,
}

/// Rungs ordered by skew height `1, 2, ..., λ_1 + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ladder {
    pub rungs: Vec<LadderRung>,
}

impl Ladder {
    pub fn top_height(&self) -> BigInt {
        self.rungs
            .last()
            .map(|r| r.skew_height.clone())
            .unwrap_or_default()
    }
}

/// Builds `p + kδ` and `2p + kδ` for `0 <= k <= (λ_1 - 1)/2` with membership
/// witnesses.
pub fn build_ladder(t: &GoodTriple) -> Result<Ladder> {
    let s = t.simplex()?;
    let mut oracle = SemigroupOracle::with_max_degree(&s, 2)?;
    build_ladder_with(t, &s, &mut oracle)
}

fn build_ladder_with(
    t: &GoodTriple,
    s: &RectSimplex,
    oracle: &mut SemigroupOracle<'_>,
) -> Result<Ladder> {
    let p = t.p();
    let two_p = p.scaled(&BigInt::from(2));
    let d = t.delta();
    let half = t
        .ladder_half()
        .to_u64()
        .ok_or_else(|| Error::Resource("λ_1 too large for a ladder".into()))?;

    let mut rungs = Vec::new();
    for k in 0..=half {
        let shift = d.scaled(&BigInt::from(k));
        for base in [&p, &two_p] {
            let raw = base + &shift;
            let strict = (1..=3).all(|i| raw.coord(i) < s.lambda(i));
            let (point, reduced_from) = if strict {
                (raw, None)
            } else {
                (reduce(s, &raw)?, Some(raw))
            };
            let skew_height = s.skew_height(&point)?;
            let witness = oracle.member(&point)?.ok_or_else(|| {
                Error::Internal(format!("ladder point {point} of {t} is not in Q(λ)"))
            })?;
            rungs.push(LadderRung {
                point,
                skew_height,
                witness,
                reduced_from,
            });
        }
    }
    rungs.sort_by(|a, b| a.skew_height.cmp(&b.skew_height));
    let expected: Vec<BigInt> = (1..=half * 2 + 2).map(BigInt::from).collect();
    let got: Vec<BigInt> = rungs.iter().map(|r| r.skew_height.clone()).collect();
    if got != expected {
        return Err(Error::Internal(format!(
            "ladder heights for {t} are {got:?}, expected 1..={}",
            half * 2 + 2
        )));
    }
    Ok(Ladder { rungs })
}

/// Certificate that `Q(λ)` is not normal and every hole has skew height at
/// least `λ_1 + 2` (coordinate heights at least 1).
pub fn certify(t: &GoodTriple) -> Result<Certificate> {
    let s = t.simplex()?;
    let mut oracle = SemigroupOracle::with_max_degree(&s, BOUNDARY_SCAN_DEGREE.max(2))?;
    let ladder = build_ladder_with(t, &s, &mut oracle)?;

    let q = witness_hole(t);
    if !oracle.is_hole(&q)? {
        return Err(Error::certification(
            "non_normality",
            format!("{q} is not a hole of Q{t}"),
        ));
    }
    let q_height = s.skew_height(&q)?;
    if q_height != t.min_skew_height() {
        return Err(Error::certification(
            "non_normality",
            format!("σ_λ(q) = {q_height}, expected λ_1 + 2"),
        ));
    }

    let boundary = boundary_hole_scan(&s, BOUNDARY_SCAN_DEGREE)?;
    if let Some(z) = boundary.first() {
        return Err(Error::certification(
            "boundary",
            format!("boundary hole {z}"),
        ));
    }

    let check = is_good_triple(t.lambdas())?;
    let cert = Certificate {
        schema_version: SCHEMA_VERSION.to_string(),
        lambdas: ints(t.lambdas()),
        good_triple: GoodTripleClause {
            lambdas: ints(t.lambdas()),
            pairwise_coprime: check.pairwise_coprime,
            skew_delta: Int(check.skew_delta),
            gap_condition: check.gap,
            odd_lambda1_lambda3: t.lambdas[0].is_odd() && t.lambdas[2].is_odd(),
        },
        ladder: LadderClause {
            top_height: Int(ladder.top_height()),
            entries: ladder
                .rungs
                .iter()
                .map(|r| certificate::LadderEntry {
                    point: point_ints(&r.point),
                    skew_height: Int(r.skew_height.clone()),
                    witness: r.witness.summands().iter().map(point_ints).collect(),
                })
                .collect(),
        },
        non_normality: NonNormalityClause {
            hole: point_ints(&q),
            skew_height: Int(q_height.clone()),
            statement: NON_NORMALITY_STATEMENT.to_string(),
        },
        boundary: BoundaryClause {
            max_degree: Int(BigInt::from(BOUNDARY_SCAN_DEGREE)),
            boundary_holes: Vec::new(),
            statement: BOUNDARY_STATEMENT.to_string(),
        },
        lift_trace: Vec::new(),
        transported_witness: transport_clause(t.lambdas(), &q, &q_height)?,
        claims: Claims::derive(&ladder.top_height(), &[0, 0, 0]),
    };
    self_check(&cert)?;
    Ok(cert)
}

/// The transported-witness clause for `point` in the simplex with `lambdas`.
pub(crate) fn transport_clause(
    lambdas: &[BigInt],
    point: &LatticePoint,
    base_skew_height: &BigInt,
) -> Result<TransportClause> {
    let s = RectSimplex::new(lambdas)?;
    let mut heights = BTreeMap::new();
    for (facet, h) in s.heights(point)? {
        heights.insert(facet.to_string(), Int(h));
    }
    let pair_scan = match certificate::degree_two_decomposes(lambdas, point)? {
        Some(false) => PAIR_SCAN_EXHAUSTIVE,
        Some(true) => {
            return Err(Error::certification(
                "transported_witness",
                format!("{point} decomposes in Q{}", fmt_lambdas(lambdas)),
            ))
        }
        None => PAIR_SCAN_SKIPPED,
    };
    Ok(TransportClause {
        point: point_ints(point),
        heights,
        base_skew_height: Int(base_skew_height.clone()),
        pair_scan: pair_scan.to_string(),
    })
}

pub(crate) fn self_check(cert: &Certificate) -> Result<()> {
    match certificate::verify_certificate(cert) {
        Verdict::Accepted => Ok(()),
        Verdict::Rejected { clause, detail } => Err(Error::Certification { clause, detail }),
    }
}

//! The lift `λ → λ'` with `λ'_i = λ_i + lcm(λ_j : j ≠ i)` and the linear
//! bijection `α(z) = z + β(z) e_i` that carries heights across it.
//!
//! `α` keeps every height except the one above `F_i`, and on points of
//! positive skew height it strictly increases `σ_i`. Iterating over the three
//! coordinate facets pushes every hole away from all of them.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::certificate::{ints, point_ints, Certificate, Claims, Int, LiftClause};
use crate::error::{Error, Result};
use crate::good_triples::{certify, family, self_check, transport_clause, witness_hole};
use crate::lattice::{lcm_all, LatticePoint, LinearForm};
use crate::simplex::{fmt_lambdas, RectSimplex};

/// One application of the lift along coordinate facet `facet`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftStep {
    /// 1-based index `i`.
    pub facet: usize,
    /// `ℓ = lcm(λ_j : j ≠ i)`.
    pub ell: BigInt,
    pub lambdas_before: Vec<BigInt>,
    pub lambdas_after: Vec<BigInt>,
    /// `β(z) = ℓ z_{n+1} - Σ_{j≠i} (ℓ/λ_j) z_j`.
    pub beta: LinearForm,
}

/// Builds the lift of `lambdas` along facet `facet` (1-based).
pub fn lift_lambda(lambdas: &[BigInt], facet: usize) -> Result<LiftStep> {
    let n = lambdas.len();
    if n < 2 {
        return Err(Error::argument("lifting needs n >= 2"));
    }
    if facet == 0 || facet > n {
        return Err(Error::argument(format!(
            "lift facet {facet} outside 1..={n}"
        )));
    }
    if let Some(bad) = lambdas.iter().find(|l| !l.is_positive()) {
        return Err(Error::argument(format!(
            "λ entries must be positive, got {bad}"
        )));
    }
    let others: Vec<BigInt> = lambdas
        .iter()
        .enumerate()
        .filter(|&(j, _)| j + 1 != facet)
        .map(|(_, l)| l.clone())
        .collect();
    let ell = lcm_all(&others)?;

    let mut after = lambdas.to_vec();
    after[facet - 1] += &ell;

    let mut beta = vec![BigInt::zero(); n + 1];
    for (j, l) in lambdas.iter().enumerate() {
        if j + 1 != facet {
            beta[j] = -(&ell / l);
        }
    }
    beta[n] = ell.clone();

    let step = LiftStep {
        facet,
        ell,
        lambdas_before: lambdas.to_vec(),
        lambdas_after: after,
        beta: LinearForm::new(beta),
    };
    step.check_cofactor_identity()?;
    Ok(step)
}

impl LiftStep {
    /// `L/λ_i = L'/λ'_i`, which holds because `gcd(ℓ, λ_i) = gcd(ℓ, λ_i + ℓ)`.
    pub fn check_cofactor_identity(&self) -> Result<()> {
        let i = self.facet - 1;
        let before = lcm_all(&self.lambdas_before)? / &self.lambdas_before[i];
        let after = lcm_all(&self.lambdas_after)? / &self.lambdas_after[i];
        if before != after {
            return Err(Error::Internal(format!(
                "L/λ_i = {before} but L'/λ'_i = {after} for lift of {} on facet {}",
                fmt_lambdas(&self.lambdas_before),
                self.facet
            )));
        }
        Ok(())
    }

    /// Shared value `L/λ_i = L'/λ'_i`.
    pub fn cofactor(&self) -> BigInt {
        lcm_all(&self.lambdas_before).expect("validated") / &self.lambdas_before[self.facet - 1]
    }

    pub fn beta(&self, z: &LatticePoint) -> Result<BigInt> {
        self.beta.eval(z)
    }

    /// `α(z) = z + β(z) e_i`.
    pub fn alpha(&self, z: &LatticePoint) -> Result<LatticePoint> {
        let b = self.beta(z)?;
        Ok(z.add_to_coord(self.facet, &b))
    }

    /// `α⁻¹(z') = z' - β(z') e_i`; β ignores coordinate i, so this inverts α.
    pub fn alpha_inverse(&self, z: &LatticePoint) -> Result<LatticePoint> {
        let b = self.beta(z)?;
        Ok(z.add_to_coord(self.facet, &-b))
    }

    pub fn source(&self) -> Result<RectSimplex> {
        RectSimplex::new(&self.lambdas_before)
    }

    pub fn target(&self) -> Result<RectSimplex> {
        RectSimplex::new(&self.lambdas_after)
    }
}

/// Consecutive lift steps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiftTrace {
    steps: Vec<LiftStep>,
}

impl LiftTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<LiftStep>) -> Result<Self> {
        let mut trace = LiftTrace::new();
        for s in steps {
            trace.push(s)?;
        }
        Ok(trace)
    }

    pub fn push(&mut self, step: LiftStep) -> Result<()> {
        if let Some(last) = self.steps.last() {
            if last.lambdas_after != step.lambdas_before {
                return Err(Error::argument(format!(
                    "lift step starts at {} but the trace ends at {}",
                    fmt_lambdas(&step.lambdas_before),
                    fmt_lambdas(&last.lambdas_after)
                )));
            }
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn steps(&self) -> &[LiftStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of steps applied on each coordinate facet, indexed `0..n`.
    pub fn lifts_per_facet(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![0; n];
        for s in &self.steps {
            counts[s.facet - 1] += 1;
        }
        counts
    }

    /// Applies `α` of every step in order; returns all intermediate images,
    /// starting with `z` itself.
    pub fn transport(&self, z: &LatticePoint) -> Result<Vec<LatticePoint>> {
        let mut path = vec![z.clone()];
        for s in &self.steps {
            let next = s.alpha(path.last().expect("non-empty"))?;
            path.push(next);
        }
        Ok(path)
    }

    pub fn final_lambdas(&self) -> Option<&[BigInt]> {
        self.steps.last().map(|s| s.lambdas_after.as_slice())
    }
}

/// Applies `times` lifts along `facet` starting from `lambdas`.
pub fn lift_repeatedly(lambdas: &[BigInt], facet: usize, times: usize) -> Result<LiftTrace> {
    let mut trace = LiftTrace::new();
    let mut cur = lambdas.to_vec();
    for _ in 0..times {
        let step = lift_lambda(&cur, facet)?;
        cur = step.lambdas_after.clone();
        trace.push(step)?;
    }
    Ok(trace)
}

/// Smallest odd `λ_1 >= max(5, k - 2)`; the family built on it has all holes
/// at skew height `λ_1 + 2 >= k`.
pub fn base_lambda1(k: u64) -> u64 {
    let m = k.saturating_sub(2).max(5);
    if m.is_multiple_of(2) {
        m + 1
    } else {
        m
    }
}

/// Lift count per coordinate facet needed to reach height `k`: heights of
/// holes start at 1 and every lift adds at least 1.
pub fn lifts_per_facet_for(k: u64) -> usize {
    k.saturating_sub(1) as usize
}

/// `true` when `α` strictly increases `σ_i` on `z` (i.e. `β(z) >= 1`).
pub fn strictly_increases(step: &LiftStep, z: &LatticePoint) -> Result<bool> {
    Ok(step.beta(z)? >= BigInt::one())
}

/// Builds a simplex whose semigroup is not normal and has every hole at
/// height at least `k` above every facet.
///
/// Starts from the good triple with `λ_1 = base_lambda1(k)` and lifts facets
/// 1, 2, 3 in order, `lifts_per_facet_for(k)` times each. The certificate
/// records every step together with the image of the witness hole.
pub fn deep_hole_construction(k: u64) -> Result<(LiftTrace, RectSimplex, Certificate)> {
    let t = family(&BigInt::from(base_lambda1(k)))?;
    let mut cert = certify(&t)?;
    let q = witness_hole(&t);
    let base_height = cert.non_normality.skew_height.0.clone();

    let times = lifts_per_facet_for(k);
    let mut trace = LiftTrace::new();
    let mut lambdas = t.lambdas().to_vec();
    let mut witness = q;
    for facet in 1..=3 {
        for _ in 0..times {
            let step = lift_lambda(&lambdas, facet)?;
            let image = step.alpha(&witness)?;
            if !strictly_increases(&step, &witness)? {
                return Err(Error::Internal(format!(
                    "β({witness}) is not positive for the lift of {} on facet {facet}",
                    fmt_lambdas(&lambdas)
                )));
            }
            cert.lift_trace.push(LiftClause {
                facet: Int::from(facet as i64),
                ell: Int(step.ell.clone()),
                lambdas_before: ints(&step.lambdas_before),
                lambdas_after: ints(&step.lambdas_after),
                witness_before: point_ints(&witness),
                witness_after: point_ints(&image),
            });
            lambdas = step.lambdas_after.clone();
            witness = image;
            trace.push(step)?;
        }
    }

    cert.lambdas = ints(&lambdas);
    cert.transported_witness = transport_clause(&lambdas, &witness, &base_height)?;
    cert.claims = Claims::derive(&cert.ladder.top_height.0, &trace.lifts_per_facet(3));
    self_check(&cert)?;
    Ok((trace, RectSimplex::new(&lambdas)?, cert))
}

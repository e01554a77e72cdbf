//! Rectangular simplices `Δ(λ)` with vertices `e_{n+1}` and `λ_i e_i + e_{n+1}`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{lcm_all, LatticePoint, LinearForm};

/// Default cap on the number of materialized degree-one generators.
pub const DEFAULT_GENERATOR_LIMIT: usize = 5_000_000;

/// A facet of the cone over `Δ(λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FacetId {
    /// The coordinate hyperplane `z_i = 0`, 1-based.
    Coordinate(usize),
    /// The facet spanned by `v_1, ..., v_n`.
    Skew,
}

impl fmt::Display for FacetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacetId::Coordinate(i) => write!(f, "F{i}"),
            FacetId::Skew => write!(f, "Fskew"),
        }
    }
}

#[derive(Debug)]
pub struct RectSimplex {
    lambdas: Vec<BigInt>,
    lcm: BigInt,
    /// `L / λ_i` for each i.
    cofactors: Vec<BigInt>,
    vertices: Vec<LatticePoint>,
    skew_form: LinearForm,
    generator_limit: usize,
    generators: OnceLock<Result<Vec<LatticePoint>>>,
}

impl Clone for RectSimplex {
    fn clone(&self) -> Self {
        RectSimplex {
            lambdas: self.lambdas.clone(),
            lcm: self.lcm.clone(),
            cofactors: self.cofactors.clone(),
            vertices: self.vertices.clone(),
            skew_form: self.skew_form.clone(),
            generator_limit: self.generator_limit,
            generators: self.generators.clone(),
        }
    }
}

impl PartialEq for RectSimplex {
    fn eq(&self, other: &Self) -> bool {
        self.lambdas == other.lambdas
    }
}

impl Eq for RectSimplex {}

impl RectSimplex {
    pub fn new(lambdas: &[BigInt]) -> Result<Self> {
        Self::with_generator_limit(lambdas, DEFAULT_GENERATOR_LIMIT)
    }

    pub fn from_i64s(lambdas: &[i64]) -> Result<Self> {
        Self::new(&crate::lattice::bigs(lambdas))
    }

    /// Builds `Δ(λ)`; `generator_limit` bounds the degree-one generator list
    /// materialized on first use.
    pub fn with_generator_limit(lambdas: &[BigInt], generator_limit: usize) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::argument("need at least one λ"));
        }
        if let Some(bad) = lambdas.iter().find(|l| !l.is_positive()) {
            return Err(Error::argument(format!(
                "λ entries must be positive, got {bad}"
            )));
        }
        let n = lambdas.len();
        let lcm = lcm_all(lambdas)?;
        let cofactors: Vec<BigInt> = lambdas.iter().map(|l| &lcm / l).collect();

        let mut vertices = Vec::with_capacity(n + 1);
        vertices.push(LatticePoint::unit(n + 1, n + 1)?);
        for (i, l) in lambdas.iter().enumerate() {
            let mut v = vec![BigInt::zero(); n + 1];
            v[i] = l.clone();
            v[n] = BigInt::one();
            vertices.push(LatticePoint::new(v)?);
        }

        let mut skew = cofactors.iter().map(|c| -c).collect::<Vec<_>>();
        skew.push(lcm.clone());

        Ok(RectSimplex {
            lambdas: lambdas.to_vec(),
            lcm,
            cofactors,
            vertices,
            skew_form: LinearForm::new(skew),
            generator_limit,
            generators: OnceLock::new(),
        })
    }

    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[BigInt] {
        &self.lambdas
    }

    /// `λ_i`, 1-based.
    pub fn lambda(&self, i: usize) -> &BigInt {
        &self.lambdas[i - 1]
    }

    /// `L = lcm(λ)`.
    pub fn lcm(&self) -> &BigInt {
        &self.lcm
    }

    /// The coefficients `L / λ_i`.
    pub fn cofactors(&self) -> &[BigInt] {
        &self.cofactors
    }

    /// `v_0, v_1, ..., v_n`.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// `v_i` for `0 <= i <= n`.
    pub fn vertex(&self, i: usize) -> &LatticePoint {
        &self.vertices[i]
    }

    pub fn generator_limit(&self) -> usize {
        self.generator_limit
    }

    /// Facets in canonical order: `F_1, ..., F_n, F_λ`.
    pub fn facet_ids(&self) -> Vec<FacetId> {
        (1..=self.dim())
            .map(FacetId::Coordinate)
            .chain(std::iter::once(FacetId::Skew))
            .collect()
    }

    /// The linear form computing the lattice height above `facet`.
    pub fn facet_form(&self, facet: FacetId) -> Result<LinearForm> {
        match facet {
            FacetId::Skew => Ok(self.skew_form.clone()),
            FacetId::Coordinate(i) => {
                self.check_facet_index(i)?;
                let mut c = vec![BigInt::zero(); self.dim() + 1];
                c[i - 1] = BigInt::one();
                Ok(LinearForm::new(c))
            }
        }
    }

    pub fn facet_forms(&self) -> Vec<(FacetId, LinearForm)> {
        self.facet_ids()
            .into_iter()
            .map(|f| {
                (
                    f,
                    self.facet_form(f).expect("canonical facet ids are valid"),
                )
            })
            .collect()
    }

    pub fn skew_form(&self) -> &LinearForm {
        &self.skew_form
    }

    fn check_facet_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.dim() {
            return Err(Error::argument(format!(
                "coordinate facet index {i} outside 1..={}",
                self.dim()
            )));
        }
        Ok(())
    }

    fn check_point(&self, z: &LatticePoint) -> Result<()> {
        if z.len() != self.dim() + 1 {
            return Err(Error::Dimension {
                expected: self.dim() + 1,
                found: z.len(),
            });
        }
        Ok(())
    }

    /// `σ_λ(z) = L z_{n+1} - Σ (L/λ_i) z_i`.
    pub fn skew_height(&self, z: &LatticePoint) -> Result<BigInt> {
        self.check_point(z)?;
        self.skew_form.eval(z)
    }

    /// Lattice height of `z` above `facet`.
    pub fn height(&self, facet: FacetId, z: &LatticePoint) -> Result<BigInt> {
        self.check_point(z)?;
        match facet {
            FacetId::Skew => self.skew_form.eval(z),
            FacetId::Coordinate(i) => {
                self.check_facet_index(i)?;
                Ok(z.coord(i).clone())
            }
        }
    }

    /// Heights above every facet, in [`RectSimplex::facet_ids`] order.
    pub fn heights(&self, z: &LatticePoint) -> Result<Vec<(FacetId, BigInt)>> {
        self.facet_ids()
            .into_iter()
            .map(|f| Ok((f, self.height(f, z)?)))
            .collect()
    }

    /// Degree-one lattice points of the simplex, ascending lexicographically.
    ///
    /// Materialized on first call and cached; fails with a resource error when
    /// the count would exceed the generator limit.
    pub fn degree_one_generators(&self) -> Result<&[LatticePoint]> {
        self.generators
            .get_or_init(|| self.points_of_degree(&BigInt::one(), self.generator_limit))
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    /// All points of `Q̄` of the given degree, i.e. lattice points of the
    /// dilated simplex `d·Δ(λ)` lifted to height `d`, ascending
    /// lexicographically. At most `limit` points are produced.
    pub fn points_of_degree(&self, degree: &BigInt, limit: usize) -> Result<Vec<LatticePoint>> {
        if degree.is_negative() {
            return Ok(Vec::new());
        }
        let n = self.dim();
        let budget = &self.lcm * degree;
        let mut out = Vec::new();
        let mut prefix: Vec<BigInt> = Vec::with_capacity(n + 1);
        self.enumerate_rec(&mut prefix, budget, degree, limit, false, &mut out)?;
        Ok(out)
    }

    /// Like [`RectSimplex::points_of_degree`], restricted to points with
    /// height 0 above at least one facet.
    pub fn facet_points_of_degree(
        &self,
        degree: &BigInt,
        limit: usize,
    ) -> Result<Vec<LatticePoint>> {
        if degree.is_negative() {
            return Ok(Vec::new());
        }
        let n = self.dim();
        let budget = &self.lcm * degree;
        let mut out = Vec::new();
        let mut prefix: Vec<BigInt> = Vec::with_capacity(n + 1);
        self.enumerate_rec(&mut prefix, budget, degree, limit, true, &mut out)?;
        Ok(out)
    }

    fn enumerate_rec(
        &self,
        prefix: &mut Vec<BigInt>,
        budget: BigInt,
        degree: &BigInt,
        limit: usize,
        facets_only: bool,
        out: &mut Vec<LatticePoint>,
    ) -> Result<()> {
        let i = prefix.len();
        if i == self.dim() {
            if out.len() >= limit {
                return Err(Error::Resource(format!(
                    "more than {limit} lattice points of degree {degree} in Δ{}",
                    fmt_lambdas(&self.lambdas)
                )));
            }
            let mut coords = prefix.clone();
            coords.push(degree.clone());
            out.push(LatticePoint::new(coords)?);
            return Ok(());
        }
        let step = &self.cofactors[i];
        let (max, slack) = budget.div_mod_floor(step);
        if facets_only && i + 1 == self.dim() && !prefix.iter().any(Zero::is_zero) {
            // last coordinate: 0, or the value that leaves no skew slack
            let mut last = vec![BigInt::zero()];
            if slack.is_zero() && max.is_positive() {
                last.push(max);
            }
            for value in last {
                prefix.push(value);
                self.enumerate_rec(prefix, BigInt::zero(), degree, limit, facets_only, out)?;
                prefix.pop();
            }
            return Ok(());
        }
        let count = max.to_u64().unwrap_or(u64::MAX);
        let mut value = BigInt::zero();
        let mut rest = budget;
        for _ in 0..=count {
            prefix.push(value.clone());
            self.enumerate_rec(prefix, rest.clone(), degree, limit, facets_only, out)?;
            prefix.pop();
            value += 1;
            rest -= step;
        }
        Ok(())
    }
}

/// Formats `λ` as `(a,b,c)`.
pub fn fmt_lambdas(lambdas: &[BigInt]) -> String {
    let parts: Vec<String> = lambdas.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

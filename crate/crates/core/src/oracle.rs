//! Membership in `Q(λ)` and its saturation, reduction modulo the vertices, and
//! hole enumeration.
//!
//! [`SemigroupOracle::member`] is a memoized depth-first decomposition over the
//! degree-one generators. [`naive_member`] is a deliberately dumb exhaustive
//! multiset search kept as a reference for tests.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{pairwise_coprime, LatticePoint};
use crate::simplex::{FacetId, RectSimplex};

/// Default degree ceiling for the memoized decomposition.
pub const DEFAULT_MAX_DEGREE: u64 = 64;

/// Guards for [`naive_member`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NaiveLimits {
    pub max_degree: u64,
    pub max_generators: usize,
}

impl Default for NaiveLimits {
    fn default() -> Self {
        NaiveLimits {
            max_degree: 5,
            max_generators: 2000,
        }
    }
}

/// Degree-one generators summing to a point of `Q(λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    summands: Vec<LatticePoint>,
}

impl MembershipWitness {
    pub fn new(summands: Vec<LatticePoint>) -> Self {
        MembershipWitness { summands }
    }

    pub fn summands(&self) -> &[LatticePoint] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Sum of the summands; `None` for the empty witness.
    pub fn sum(&self) -> Option<LatticePoint> {
        let mut it = self.summands.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, g| &acc + g))
    }
}

/// A reduced hole together with its heights above every facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleRecord {
    pub point: LatticePoint,
    pub heights: BTreeMap<FacetId, BigInt>,
    /// `σ_i < λ_i` for every coordinate facet.
    pub reduced: bool,
}

impl HoleRecord {
    pub fn skew_height(&self) -> &BigInt {
        &self.heights[&FacetId::Skew]
    }

    fn from_point(s: &RectSimplex, point: LatticePoint) -> Result<Self> {
        let heights: BTreeMap<FacetId, BigInt> = s.heights(&point)?.into_iter().collect();
        let reduced = (1..=s.dim()).all(|i| point.coord(i) < s.lambda(i));
        Ok(HoleRecord {
            point,
            heights,
            reduced,
        })
    }
}

/// Holes found by scanning skew heights `1..=max_skew_height`. Nothing is
/// claimed about heights above the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleEnumeration {
    pub max_skew_height: u64,
    pub holes: Vec<HoleRecord>,
}

/// `z ∈ Q̄(λ)`: all coordinates and the skew height are nonnegative.
pub fn in_saturation(s: &RectSimplex, z: &LatticePoint) -> Result<bool> {
    let sigma = s.skew_height(z)?;
    Ok(z.coords().iter().all(|c| !c.is_negative()) && !sigma.is_negative())
}

/// Subtracts `floor(z_i / λ_i) v_i` for every i, landing in the box
/// `0 <= σ_i < λ_i`. The skew height is unchanged.
pub fn reduce(s: &RectSimplex, z: &LatticePoint) -> Result<LatticePoint> {
    if !in_saturation(s, z)? {
        return Err(Error::argument(format!("{z} is not in the saturation")));
    }
    let n = s.dim();
    let mut coords = z.coords().to_vec();
    for i in 0..n {
        let (quot, rem) = coords[i].div_mod_floor(&s.lambdas()[i]);
        coords[i] = rem;
        coords[n] -= quot;
    }
    LatticePoint::new(coords)
}

/// The only point with `σ_λ = h` and `0 <= σ_i < λ_i`, for pairwise coprime λ.
///
/// Modulo `λ_i` the equation `σ_λ(z) = h` reads `-(L/λ_i) z_i ≡ h`, so each
/// coordinate is fixed by a modular inverse; the degree follows by division.
pub fn unique_reduced_element(s: &RectSimplex, h: &BigInt) -> Result<LatticePoint> {
    if !pairwise_coprime(s.lambdas()) {
        return Err(Error::Precondition(format!(
            "λ = {} is not pairwise coprime",
            crate::simplex::fmt_lambdas(s.lambdas())
        )));
    }
    if !h.is_positive() {
        return Err(Error::argument(format!(
            "skew height must be >= 1, got {h}"
        )));
    }
    let n = s.dim();
    let mut coords = Vec::with_capacity(n + 1);
    let mut weighted = h.clone();
    for (lambda, cofactor) in s.lambdas().iter().zip(s.cofactors()) {
        let ext = cofactor.extended_gcd(lambda);
        if !ext.gcd.is_one() {
            return Err(Error::Arithmetic(format!(
                "L/λ_i = {cofactor} is not invertible modulo {lambda}"
            )));
        }
        let zi = (-(h * &ext.x)).mod_floor(lambda);
        weighted += cofactor * &zi;
        coords.push(zi);
    }
    let (degree, rem) = weighted.div_mod_floor(s.lcm());
    if !rem.is_zero() {
        return Err(Error::Arithmetic(format!(
            "no integral point with skew height {h}"
        )));
    }
    coords.push(degree);
    let z = LatticePoint::new(coords)?;
    debug_assert_eq!(&s.skew_height(&z)?, h);
    Ok(z)
}

/// Memoized decomposition of points into degree-one generators.
///
/// One instance is not meant to be shared across threads; create one per
/// worker over the same simplex.
pub struct SemigroupOracle<'a> {
    simplex: &'a RectSimplex,
    /// Generators, lexicographically descending.
    gens: Vec<Vec<i64>>,
    gen_points: Vec<LatticePoint>,
    /// Position of each generator in `gens`.
    gen_index: HashMap<Vec<i64>, u32>,
    /// `σ_λ(g)` per generator when `L` fits in 64 bits.
    gen_skew: Option<Vec<i128>>,
    /// Indices into `gens` of the generators on each coordinate facet, then
    /// (when `gen_skew` is known) on the skew facet. A point on a facet can
    /// only use generators on that facet.
    facet_gens: Vec<Vec<u32>>,
    /// `(L, L/λ_i)` in 128 bits, present together with `gen_skew`.
    small_cofactors: Option<(i128, Vec<i128>)>,
    /// `Some(idx)` = decomposes with `gens[idx]` as first summand.
    memo: HashMap<Vec<i64>, Option<u32>>,
    max_degree: u64,
}

impl<'a> SemigroupOracle<'a> {
    pub fn new(simplex: &'a RectSimplex) -> Result<Self> {
        Self::with_max_degree(simplex, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(simplex: &'a RectSimplex, max_degree: u64) -> Result<Self> {
        let mut gen_points = simplex.degree_one_generators()?.to_vec();
        gen_points.reverse();
        let gens = gen_points
            .iter()
            .map(|g| {
                g.to_i64s()
                    .ok_or_else(|| Error::Resource("generator coordinate exceeds 64 bits".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let gen_index = gens.iter().cloned().zip(0u32..).collect();
        let small_cofactors = simplex.lcm().to_i64().and_then(|lcm| {
            let a = simplex
                .cofactors()
                .iter()
                .map(|c| c.to_i128())
                .collect::<Option<Vec<_>>>()?;
            Some((lcm as i128, a))
        });
        // generator coordinates are at most λ_i <= L, so these products fit
        let gen_skew = small_cofactors.as_ref().map(|(lcm, a)| {
            gens.iter()
                .map(|g| {
                    lcm * g[g.len() - 1] as i128
                        - a.iter().zip(g).map(|(a, &c)| a * c as i128).sum::<i128>()
                })
                .collect::<Vec<i128>>()
        });
        let n = simplex.dim();
        let mut facet_gens: Vec<Vec<u32>> = (0..n)
            .map(|k| {
                (0..gens.len() as u32)
                    .filter(|&i| gens[i as usize][k] == 0)
                    .collect()
            })
            .collect();
        if let Some(gs) = &gen_skew {
            facet_gens.push(
                (0..gens.len() as u32)
                    .filter(|&i| gs[i as usize] == 0)
                    .collect(),
            );
        }
        Ok(SemigroupOracle {
            simplex,
            gens,
            gen_points,
            gen_index,
            gen_skew,
            facet_gens,
            small_cofactors,
            memo: HashMap::new(),
            max_degree,
        })
    }

    pub fn simplex(&self) -> &RectSimplex {
        self.simplex
    }

    /// Degree-one generators in the order the search tries them.
    pub fn generators_descending(&self) -> &[LatticePoint] {
        &self.gen_points
    }

    /// A decomposition of `z` into degree-one generators, or `None` when
    /// `z ∉ Q(λ)`. The first summand is the lexicographically greatest
    /// generator that admits a completion.
    pub fn member(&mut self, z: &LatticePoint) -> Result<Option<MembershipWitness>> {
        if !in_saturation(self.simplex, z)? {
            return Ok(None);
        }
        let degree = z.degree();
        if degree > &BigInt::from(self.max_degree) {
            return Err(Error::Resource(format!(
                "degree {degree} exceeds the membership search limit {}",
                self.max_degree
            )));
        }
        // Inside the saturation every coordinate is at most degree * λ_i.
        let small = z
            .to_i64s()
            .ok_or_else(|| Error::Resource(format!("{z} does not fit in 64-bit coordinates")))?;
        let skew = match &self.gen_skew {
            Some(_) => self.simplex.skew_height(z)?.to_i128(),
            None => None,
        };
        if !self.decomposes(&small, skew) {
            return Ok(None);
        }
        let mut summands = Vec::new();
        let mut cur = small;
        while cur[cur.len() - 1] > 0 {
            let idx = if cur[cur.len() - 1] == 1 {
                *self.gen_index.get(&cur).ok_or_else(|| {
                    Error::Internal("degree-one remainder is not a generator".into())
                })? as usize
            } else {
                self.memo[&cur].ok_or_else(|| Error::Internal("broken memo chain".into()))? as usize
            };
            summands.push(self.gen_points[idx].clone());
            for (c, g) in cur.iter_mut().zip(&self.gens[idx]) {
                *c -= g;
            }
        }
        if cur.iter().any(|&c| c != 0) {
            return Err(Error::Internal("witness does not sum to the point".into()));
        }
        Ok(Some(MembershipWitness::new(summands)))
    }

    /// Convenience wrapper around [`SemigroupOracle::member`].
    pub fn contains(&mut self, z: &LatticePoint) -> Result<bool> {
        Ok(self.member(z)?.is_some())
    }

    /// `z` is in `Q̄` and not in `Q`.
    pub fn is_hole(&mut self, z: &LatticePoint) -> Result<bool> {
        Ok(in_saturation(self.simplex, z)? && self.member(z)?.is_none())
    }

    /// `z` has nonnegative coordinates here; `skew` is `σ_λ(z)` when the fast
    /// path is available.
    fn decomposes(&mut self, z: &[i64], skew: Option<i128>) -> bool {
        let n = z.len() - 1;
        let degree = z[n];
        match degree {
            0 => return z.iter().all(|&c| c == 0),
            // degree-one points of the saturation are exactly the generators
            1 => {
                return match skew {
                    Some(h) => h >= 0 && z[..n].iter().all(|&c| c >= 0),
                    None => self.gen_index.contains_key(z),
                }
            }
            _ => {}
        }
        if let Some(hit) = self.memo.get(z) {
            return hit.is_some();
        }
        if degree == 2 && skew.is_some() {
            if let Some(found) = self.first_pair(z) {
                self.memo.insert(z.to_vec(), found);
                return found.is_some();
            }
        }
        let mut on_facets: Vec<usize> = (0..n).filter(|&k| z[k] == 0).collect();
        if skew == Some(0) && self.facet_gens.len() > n {
            on_facets.push(n);
        }
        let facet = on_facets
            .into_iter()
            .min_by_key(|&f| self.facet_gens[f].len());
        let count = facet.map_or(self.gens.len(), |f| self.facet_gens[f].len());

        let mut found = None;
        let mut rest = vec![0i64; n + 1];
        rest[n] = degree - 1;
        for pos in 0..count {
            let idx = facet.map_or(pos, |f| self.facet_gens[f][pos] as usize);
            let g = &self.gens[idx];
            if g[..n].iter().zip(&z[..n]).any(|(a, b)| a > b) {
                continue;
            }
            let rest_skew = match (skew, &self.gen_skew) {
                (Some(s), Some(gs)) => {
                    let r = s - gs[idx];
                    if r < 0 {
                        continue;
                    }
                    Some(r)
                }
                _ => None,
            };
            for k in 0..n {
                rest[k] = z[k] - g[k];
            }
            if self.decomposes(&rest, rest_skew) {
                found = Some(idx as u32);
                break;
            }
        }
        self.memo.insert(z.to_vec(), found);
        found.is_some()
    }
}

impl SemigroupOracle<'_> {
    /// Degree-two search without scanning the generator list: walks the
    /// first summand `g` in descending lexicographic order over all but the
    /// last coordinate and solves the last one as an interval. `None` when
    /// the 128-bit cofactors are unavailable.
    fn first_pair(&self, z: &[i64]) -> Option<Option<u32>> {
        let (lcm, a) = self.small_cofactors.as_ref()?;
        let n = z.len() - 1;
        let z: Vec<i128> = z[..n].iter().map(|&c| c as i128).collect();
        let mut g = vec![0i128; n];
        if !pair_rec(&z, a, *lcm, 0, 0, 0, &mut g) {
            return Some(None);
        }
        let mut key: Vec<i64> = g.iter().map(|&c| c as i64).collect();
        key.push(1);
        Some(self.gen_index.get(&key).copied())
    }
}

/// Sets `g` to the lexicographically greatest degree-one point with `z - g`
/// also of degree one, given partial sums `used_g = Σ a_j g_j` and
/// `used_r = Σ a_j (z_j - g_j)` over coordinates before `j`.
fn pair_rec(
    z: &[i128],
    a: &[i128],
    lcm: i128,
    j: usize,
    used_g: i128,
    used_r: i128,
    g: &mut [i128],
) -> bool {
    let last = z.len() - 1;
    if j == last {
        let (room_g, room_r) = (lcm - used_g, lcm - used_r);
        if room_g < 0 || room_r < 0 {
            return false;
        }
        let hi = z[j].min(room_g / a[j]);
        let lo = (z[j] - room_r / a[j]).max(0);
        if lo > hi {
            return false;
        }
        g[j] = hi;
        return true;
    }
    for v in (0..=z[j]).rev() {
        let ug = used_g + a[j] * v;
        let ur = used_r + a[j] * (z[j] - v);
        if ug > lcm {
            continue;
        }
        if ur > lcm {
            break;
        }
        g[j] = v;
        if pair_rec(z, a, lcm, j + 1, ug, ur, g) {
            return true;
        }
    }
    false
}

/// Exhaustive search over all multisets of `degree(z)` generators.
///
/// Independent of [`SemigroupOracle`]: no memo, no skew pruning. Guarded by
/// `limits` since the search is exponential in the degree.
pub fn naive_member(s: &RectSimplex, z: &LatticePoint, limits: NaiveLimits) -> Result<bool> {
    if z.len() != s.dim() + 1 {
        return Err(Error::Dimension {
            expected: s.dim() + 1,
            found: z.len(),
        });
    }
    let gens = s.degree_one_generators()?;
    if gens.len() > limits.max_generators {
        return Err(Error::Resource(format!(
            "naive search allows at most {} generators, simplex has {}",
            limits.max_generators,
            gens.len()
        )));
    }
    let degree = z.degree();
    if degree.is_negative() {
        return Ok(false);
    }
    if degree > &BigInt::from(limits.max_degree) {
        return Err(Error::Resource(format!(
            "naive search allows degree at most {}, got {degree}",
            limits.max_degree
        )));
    }
    let Some(target) = z.to_i64s() else {
        return Ok(false);
    };
    let size = target[target.len() - 1] as usize;
    let candidates: Vec<Vec<i64>> = gens
        .iter()
        .filter_map(LatticePoint::to_i64s)
        .filter(|g| g.iter().zip(&target).all(|(a, b)| a <= b))
        .collect();
    let mut partial = vec![0i64; target.len()];
    Ok(multiset_search(&candidates, &target, size, 0, &mut partial))
}

fn multiset_search(
    cands: &[Vec<i64>],
    target: &[i64],
    remaining: usize,
    start: usize,
    partial: &mut [i64],
) -> bool {
    if remaining == 0 {
        return partial == target;
    }
    for idx in start..cands.len() {
        let g = &cands[idx];
        if partial
            .iter()
            .zip(g)
            .zip(target)
            .any(|((p, a), t)| p + a > *t)
        {
            continue;
        }
        for (p, a) in partial.iter_mut().zip(g) {
            *p += a;
        }
        let hit = multiset_search(cands, target, remaining - 1, idx, partial);
        for (p, a) in partial.iter_mut().zip(g) {
            *p -= a;
        }
        if hit {
            return true;
        }
    }
    false
}

/// Reduced holes with skew height in `1..=max_skew_height`, ascending.
pub fn enumerate_holes(s: &RectSimplex, max_skew_height: u64) -> Result<HoleEnumeration> {
    enumerate_holes_parallel(s, max_skew_height, 1)
}

/// Like [`enumerate_holes`], splitting the heights over `workers` oracles.
/// Output order does not depend on scheduling.
pub fn enumerate_holes_parallel(
    s: &RectSimplex,
    max_skew_height: u64,
    workers: usize,
) -> Result<HoleEnumeration> {
    if max_skew_height < 1 {
        return Err(Error::argument("max skew height must be >= 1"));
    }
    if !pairwise_coprime(s.lambdas()) {
        return Err(Error::Precondition(format!(
            "λ = {} is not pairwise coprime",
            crate::simplex::fmt_lambdas(s.lambdas())
        )));
    }
    s.degree_one_generators()?;
    let heights: Vec<u64> = (1..=max_skew_height).collect();
    let chunk = heights.len().div_ceil(workers.max(1)).max(1);
    let scan = |hs: &[u64]| -> Result<Vec<HoleRecord>> {
        let mut oracle = SemigroupOracle::new(s)?;
        let mut found = Vec::new();
        for &h in hs {
            let z = unique_reduced_element(s, &BigInt::from(h))?;
            if oracle.member(&z)?.is_none() {
                found.push(HoleRecord::from_point(s, z)?);
            }
        }
        Ok(found)
    };
    let parts: Vec<Vec<HoleRecord>> = if workers <= 1 {
        vec![scan(&heights)?]
    } else {
        heights.par_chunks(chunk).map(scan).collect::<Result<_>>()?
    };
    Ok(HoleEnumeration {
        max_skew_height,
        holes: parts.into_iter().flatten().collect(),
    })
}

/// Points of `Q̄` with degree `<= max_degree` lying on some facet but not in
/// `Q`, ascending by degree then lexicographically.
pub fn boundary_hole_scan(s: &RectSimplex, max_degree: u64) -> Result<Vec<LatticePoint>> {
    let mut oracle = SemigroupOracle::with_max_degree(s, max_degree.max(1))?;
    let mut holes = Vec::new();
    for d in 1..=max_degree {
        for z in s.facet_points_of_degree(&BigInt::from(d), s.generator_limit())? {
            if oracle.member(&z)?.is_none() {
                holes.push(z);
            }
        }
    }
    Ok(holes)
}

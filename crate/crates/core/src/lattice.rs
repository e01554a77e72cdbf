//! Exact integer vectors and linear forms.
//!
//! Points live in `Z^{n+1}`; the last coordinate is the degree. Everything is
//! arbitrary precision, since iterated lifting grows the lcm well past 64 bits.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An integer vector of length `n + 1` whose last entry is the degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<BigInt>);

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::argument(format!(
                "a lattice point needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        Ok(LatticePoint(coords))
    }

    /// Convenience constructor for small literal points.
    ///
    /// Panics if fewer than two coordinates are given.
    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
            .expect("lattice point literal needs at least 2 coordinates")
    }

    pub fn zero(len: usize) -> Self {
        LatticePoint(vec![BigInt::zero(); len])
    }

    /// The unit vector `e_i` (1-based, as in `e_1 .. e_{n+1}`).
    pub fn unit(len: usize, i: usize) -> Result<Self> {
        if i == 0 || i > len {
            return Err(Error::argument(format!(
                "unit vector index {i} outside 1..={len}"
            )));
        }
        let mut v = vec![BigInt::zero(); len];
        v[i - 1] = BigInt::one();
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ambient dimension `n` (the point has `n + 1` coordinates).
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn degree(&self) -> &BigInt {
        self.0.last().expect("non-empty by construction")
    }

    /// Coordinate `z_i`, 1-based.
    pub fn coord(&self, i: usize) -> &BigInt {
        &self.0[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        LatticePoint(self.0.iter().map(|c| c * factor).collect())
    }

    /// `self + factor * e_i` (1-based index).
    pub fn add_to_coord(&self, i: usize, amount: &BigInt) -> Self {
        let mut v = self.0.clone();
        v[i - 1] += amount;
        LatticePoint(v)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(LatticePoint(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(LatticePoint(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Converts to machine integers when every coordinate fits.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

impl Index<usize> for LatticePoint {
    type Output = BigInt;

    /// 0-based indexing into the raw coordinate vector.
    fn index(&self, idx: usize) -> &BigInt {
        &self.0[idx]
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;

    /// Panics on length mismatch; use [`LatticePoint::checked_add`] otherwise.
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        self.checked_add(rhs)
            .expect("lattice point length mismatch")
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;

    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        self.checked_sub(rhs)
            .expect("lattice point length mismatch")
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;

    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, c) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An integer linear form on `Z^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm(Vec<BigInt>);

impl LinearForm {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        LinearForm(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        LinearForm(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, z: &LatticePoint) -> Result<BigInt> {
        dot(self, z)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (idx, c) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Exact dot product of a form with a point.
pub fn dot(form: &LinearForm, z: &LatticePoint) -> Result<BigInt> {
    check_len(form.len(), z.len())?;
    Ok(form.0.iter().zip(z.coords()).map(|(a, b)| a * b).sum())
}

/// Least common multiple of a non-empty list of positive integers.
pub fn lcm_all(values: &[BigInt]) -> Result<BigInt> {
    if values.is_empty() {
        return Err(Error::argument("lcm of an empty list"));
    }
    let mut acc = BigInt::one();
    for v in values {
        if !v.is_positive() {
            return Err(Error::argument(format!(
                "lcm requires positive values, got {v}"
            )));
        }
        acc = acc.lcm(v);
    }
    Ok(acc)
}

/// True when every pair of entries is coprime.
pub fn pairwise_coprime(values: &[BigInt]) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(i, a)| values[i + 1..].iter().all(|b| a.gcd(b).is_one()))
}

/// The vector `(-1, 2, -1, 0)` used to walk along the skew facet.
pub fn delta(n: usize) -> Result<LatticePoint> {
    if n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(LatticePoint::from_i64s(&[-1, 2, -1, 0]))
}

/// Converts a slice of machine integers into big integers.
pub fn bigs(values: &[i64]) -> Vec<BigInt> {
    values.iter().map(|&v| BigInt::from(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dot_examples() {
        let deg = LinearForm::from_i64s(&[0, 0, 0, 1]);
        assert_eq!(
            dot(&deg, &LatticePoint::from_i64s(&[4, 7, 18, 2])).unwrap(),
            BigInt::from(2)
        );

        let skew = LinearForm::from_i64s(&[-15, -10, -6, 30]);
        assert_eq!(
            dot(&skew, &LatticePoint::from_i64s(&[2, 0, 0, 1])).unwrap(),
            BigInt::zero()
        );

        let ones = LinearForm::from_i64s(&[1, 1, 1, 1]);
        assert_eq!(dot(&ones, &LatticePoint::zero(4)).unwrap(), BigInt::zero());
    }

    #[test]
    fn dot_rejects_length_mismatch() {
        let f = LinearForm::from_i64s(&[1, 2, 3]);
        let z = LatticePoint::from_i64s(&[1, 2, 3, 4]);
        assert_eq!(
            dot(&f, &z),
            Err(Error::Dimension {
                expected: 3,
                found: 4
            })
        );
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_all(&bigs(&[5, 9, 43])).unwrap(), BigInt::from(1935));
        assert_eq!(BigInt::from(5 * 9 * 43), BigInt::from(1935));
        assert_eq!(lcm_all(&bigs(&[1, 1, 1])).unwrap(), BigInt::one());
        assert_eq!(lcm_all(&bigs(&[4, 6])).unwrap(), BigInt::from(12));
    }

    #[test]
    fn lcm_errors() {
        assert!(matches!(lcm_all(&[]), Err(Error::Argument(_))));
        assert!(matches!(lcm_all(&bigs(&[3, 0])), Err(Error::Argument(_))));
        assert!(matches!(lcm_all(&bigs(&[-2, 4])), Err(Error::Argument(_))));
    }

    #[test]
    fn delta_vector() {
        let d = delta(3).unwrap();
        assert_eq!(d, LatticePoint::from_i64s(&[-1, 2, -1, 0]));
        assert!(d.degree().is_zero());
        assert_eq!(delta(2), Err(Error::UnsupportedDimension(2)));
    }

    #[test]
    fn point_needs_two_coordinates() {
        assert!(LatticePoint::new(bigs(&[1])).is_err());
        assert!(LatticePoint::unit(4, 0).is_err());
        assert_eq!(
            LatticePoint::unit(4, 4).unwrap(),
            LatticePoint::from_i64s(&[0, 0, 0, 1])
        );
    }

    #[test]
    fn coprimality() {
        assert!(pairwise_coprime(&bigs(&[5, 9, 43])));
        assert!(!pairwise_coprime(&bigs(&[5, 9, 45])));
        assert!(pairwise_coprime(&bigs(&[1, 1, 1])));
    }

    fn vec4() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-1_000_000i64..1_000_000, 4)
    }

    proptest! {
        #[test]
        fn dot_is_linear(f in vec4(), x in vec4(), y in vec4(), a in -1000i64..1000, b in -1000i64..1000) {
            let form = LinearForm::from_i64s(&f);
            let x = LatticePoint::from_i64s(&x);
            let y = LatticePoint::from_i64s(&y);
            let combo = &x.scaled(&BigInt::from(a)) + &y.scaled(&BigInt::from(b));
            let lhs = dot(&form, &combo).unwrap();
            let rhs = BigInt::from(a) * dot(&form, &x).unwrap() + BigInt::from(b) * dot(&form, &y).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn lcm_divisible_and_order_invariant(mut v in prop::collection::vec(1i64..500, 1..6)) {
            let l = lcm_all(&bigs(&v)).unwrap();
            for x in &v {
                prop_assert!((&l % BigInt::from(*x)).is_zero());
            }
            v.reverse();
            prop_assert_eq!(lcm_all(&bigs(&v)).unwrap(), l);
        }
    }
}

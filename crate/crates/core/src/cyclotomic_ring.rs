//! Arithmetic in `(Z/M)[x]/(x^m - 1)` with `M = q^N`.
//!
//! Coefficients are kept fully reduced. When `M < 2^62` the engine runs on
//! machine words with `u128` accumulation; otherwise it falls back to
//! `BigUint`. Both paths produce identical values.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intnum::{factorize, residue, PrimePowerFactorization};

const WORD_LIMIT: u64 = 1 << 62;
const HALF_WORD_LIMIT: u64 = 1 << 32;

#[derive(Debug, PartialEq, Eq)]
struct ModulusInner {
    q: BigUint,
    exponent: u32,
    value: BigUint,
    q_factors: PrimePowerFactorization,
    word: Option<u64>,
}

/// The modulus `M = q^N` together with the factorization of `q`.
///
/// Cloning is cheap; the data is shared.
#[derive(Clone, PartialEq, Eq)]
pub struct Modulus(Arc<ModulusInner>);

impl Modulus {
    pub fn new(q: BigUint, exponent: u32) -> Result<Self> {
        if q <= BigUint::one() {
            return Err(Error::InvalidArgument(format!("modulus base q = {q} must exceed 1")));
        }
        if exponent == 0 {
            return Err(Error::InvalidArgument("modulus exponent N must be >= 1".into()));
        }
        let q_factors = factorize(&q)?;
        Ok(Self::from_parts(q, exponent, q_factors))
    }

    pub fn from_u64(q: u64, exponent: u32) -> Result<Self> {
        Self::new(BigUint::from(q), exponent)
    }

    fn from_parts(q: BigUint, exponent: u32, q_factors: PrimePowerFactorization) -> Self {
        let value = q.pow(exponent);
        let word = value.to_u64().filter(|&v| v < WORD_LIMIT);
        Modulus(Arc::new(ModulusInner {
            q,
            exponent,
            value,
            q_factors,
            word,
        }))
    }

    /// Same `q`, different power. Reuses the cached factorization.
    pub fn with_exponent(&self, exponent: u32) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::InvalidArgument("modulus exponent N must be >= 1".into()));
        }
        Ok(Self::from_parts(self.0.q.clone(), exponent, self.0.q_factors.clone()))
    }

    pub fn q(&self) -> &BigUint {
        &self.0.q
    }

    pub fn exponent(&self) -> u32 {
        self.0.exponent
    }

    /// `M = q^N`.
    pub fn value(&self) -> &BigUint {
        &self.0.value
    }

    pub fn q_factors(&self) -> &PrimePowerFactorization {
        &self.0.q_factors
    }

    pub fn reduce(&self, x: &BigInt) -> BigUint {
        residue(x, &self.0.value)
    }

    fn word(&self) -> Option<u64> {
        self.0.word
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({}^{} = {})", self.0.q, self.0.exponent, self.0.value)
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Coeffs {
    Word(Vec<u64>),
    Big(Vec<BigUint>),
}

/// An element of `(Z/M)[x]/(x^m - 1)`, coefficient `i` belonging to `x^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct CyclicPoly {
    modulus: Modulus,
    coeffs: Coeffs,
}

impl CyclicPoly {
    /// Reduces `coeffs` into `[0, M)`. The length of `coeffs` is the ring
    /// degree `m` and must be at least 1.
    pub fn new(modulus: &Modulus, coeffs: &[BigInt]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("ring degree m must be >= 1".into()));
        }
        let reduced: Vec<BigUint> = coeffs.iter().map(|c| modulus.reduce(c)).collect();
        Ok(Self::from_reduced(modulus, reduced))
    }

    fn from_reduced(modulus: &Modulus, reduced: Vec<BigUint>) -> Self {
        let coeffs = match modulus.word() {
            Some(_) => Coeffs::Word(reduced.iter().map(|c| c.to_u64().unwrap()).collect()),
            None => Coeffs::Big(reduced),
        };
        Self {
            modulus: modulus.clone(),
            coeffs,
        }
    }

    /// The ring identity `1`.
    pub fn identity(m: usize, modulus: &Modulus) -> Result<Self> {
        let mut c = vec![BigInt::zero(); m];
        if let Some(first) = c.first_mut() {
            *first = BigInt::one();
        }
        Self::new(modulus, &c)
    }

    /// `1 + a x`. For `m = 1` this is the constant `1 + a`.
    pub fn one_plus_ax(a: &BigInt, m: usize, modulus: &Modulus) -> Result<Self> {
        let mut c = vec![BigInt::zero(); m];
        if m == 0 {
            return Err(Error::InvalidArgument("ring degree m must be >= 1".into()));
        }
        c[0] += 1;
        c[1 % m] += a;
        Self::new(modulus, &c)
    }

    pub fn degree_bound(&self) -> usize {
        match &self.coeffs {
            Coeffs::Word(v) => v.len(),
            Coeffs::Big(v) => v.len(),
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn coeffs(&self) -> Vec<BigUint> {
        match &self.coeffs {
            Coeffs::Word(v) => v.iter().map(|&c| BigUint::from(c)).collect(),
            Coeffs::Big(v) => v.clone(),
        }
    }

    pub fn coeff(&self, i: usize) -> BigUint {
        match &self.coeffs {
            Coeffs::Word(v) => BigUint::from(v[i]),
            Coeffs::Big(v) => v[i].clone(),
        }
    }

    /// Evaluation at `x = 1`, i.e. the sum of the coefficients mod `M`.
    pub fn eval_at_one(&self) -> BigUint {
        self.coeffs().iter().sum::<BigUint>() % self.modulus.value()
    }

    pub fn is_identity(&self) -> bool {
        match &self.coeffs {
            Coeffs::Word(v) => v[0] == 1 % self.modulus.word().unwrap() && v[1..].iter().all(|&c| c == 0),
            Coeffs::Big(v) => v[0].is_one() && v[1..].iter().all(|c| c.is_zero()),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.degree_bound() != other.degree_bound() {
            return Err(Error::InvalidArgument(format!(
                "ring degree mismatch: {} vs {}",
                self.degree_bound(),
                other.degree_bound()
            )));
        }
        if self.modulus != other.modulus {
            return Err(Error::InvalidArgument(format!(
                "modulus mismatch: {:?} vs {:?}",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    /// Cyclic convolution: `c_k = sum_{i + j = k (mod m)} u_i v_j`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Word(u), Coeffs::Word(v)) => Coeffs::Word(mul_words(u, v, self.modulus.word().unwrap())),
            (Coeffs::Big(u), Coeffs::Big(v)) => Coeffs::Big(mul_big(u, v, self.modulus.value())),
            _ => unreachable!("representation follows the shared modulus"),
        };
        Self {
            modulus: self.modulus.clone(),
            coeffs,
        }
    }

    /// `self^e` by left-to-right square-and-multiply; `e = 0` gives `1`.
    pub fn pow(&self, e: &BigUint) -> Self {
        let mut acc = Self::identity(self.degree_bound(), &self.modulus).expect("m >= 1");
        for i in (0..e.bits()).rev() {
            acc = acc.mul_unchecked(&acc);
            if e.bit(i) {
                acc = acc.mul_unchecked(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, e: u64) -> Self {
        self.pow(&BigUint::from(e))
    }

    /// Remainder modulo `1 + x + ... + x^(m-1)`, as `m - 1` coefficients.
    ///
    /// Zero remainder means the element vanishes at every m-th root of
    /// unity other than 1.
    pub fn reduce_mod_allones(&self) -> Result<Vec<BigUint>> {
        let m = self.degree_bound();
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "reduction modulo 1 + x + ... + x^(m-1) needs m >= 2, got {m}"
            )));
        }
        // x^(m-1) = -(1 + x + ... + x^(m-2))
        let c = self.coeffs();
        let modv = self.modulus.value();
        let top = &c[m - 1];
        Ok(c[..m - 1].iter().map(|ci| (ci + modv - top) % modv).collect())
    }
}

fn mul_words(u: &[u64], v: &[u64], modulus: u64) -> Vec<u64> {
    let m = u.len();
    let md = modulus as u128;
    if modulus <= HALF_WORD_LIMIT {
        // products < 2^64, so m of them fit in a u128 without reduction
        let mut acc = vec![0u128; m];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            let ui = ui as u128;
            let (head, tail) = acc.split_at_mut(i);
            for (slot, &vj) in tail.iter_mut().chain(head.iter_mut()).zip(v) {
                *slot += ui * vj as u128;
            }
        }
        acc.into_iter().map(|c| (c % md) as u64).collect()
    } else {
        let mut acc = vec![0u64; m];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            let ui = ui as u128;
            for (j, &vj) in v.iter().enumerate() {
                let k = (i + j) % m;
                let prod = (ui * vj as u128 % md) as u64;
                acc[k] = ((acc[k] as u128 + prod as u128) % md) as u64;
            }
        }
        acc
    }
}

fn mul_big(u: &[BigUint], v: &[BigUint], modulus: &BigUint) -> Vec<BigUint> {
    let m = u.len();
    let mut acc = vec![BigUint::zero(); m];
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            acc[(i + j) % m] += ui * vj;
        }
    }
    acc.into_iter().map(|c| c % modulus).collect()
}

impl fmt::Debug for CyclicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CyclicPoly")
            .field("m", &self.degree_bound())
            .field("modulus", self.modulus.value())
            .field("coeffs", &self.coeffs())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(m: &Modulus, c: &[i64]) -> CyclicPoly {
        CyclicPoly::new(m, &c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap()
    }
    fn u(c: &[u64]) -> Vec<BigUint> {
        c.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn mul_examples() {
        let m100 = Modulus::from_u64(100, 1).unwrap();
        let a = poly(&m100, &[1, 1, 0]);
        assert_eq!(a.mul(&a).unwrap().coeffs(), u(&[1, 2, 1]));
        let x2 = poly(&m100, &[0, 0, 1]);
        assert_eq!(x2.mul(&x2).unwrap().coeffs(), u(&[0, 1, 0]));
        let m7 = Modulus::from_u64(7, 1).unwrap();
        let s = poly(&m7, &[1, 1, 1]);
        assert_eq!(s.mul(&s).unwrap().coeffs(), u(&[3, 3, 3]));
    }

    #[test]
    fn mul_rejects_mismatch() {
        let m7 = Modulus::from_u64(7, 1).unwrap();
        let m49 = Modulus::from_u64(7, 2).unwrap();
        assert!(poly(&m7, &[1, 1]).mul(&poly(&m49, &[1, 1])).is_err());
        assert!(poly(&m7, &[1, 1]).mul(&poly(&m7, &[1, 1, 1])).is_err());
    }

    #[test]
    fn pow_examples() {
        let m = Modulus::from_u64(1000, 1).unwrap();
        let a = CyclicPoly::one_plus_ax(&BigInt::from(1), 2, &m).unwrap();
        assert!(a.pow_u64(0).is_identity());
        assert_eq!(a.pow_u64(2).coeffs(), u(&[2, 2]));
        let m9 = Modulus::from_u64(9, 1).unwrap();
        let b = CyclicPoly::one_plus_ax(&BigInt::from(3), 7, &m9).unwrap();
        let p = b.pow_u64(2184);
        assert!(p.is_identity(), "{p:?}");
    }

    #[test]
    fn one_plus_ax_examples() {
        let m9 = Modulus::from_u64(9, 1).unwrap();
        let m5 = Modulus::from_u64(5, 1).unwrap();
        let m7 = Modulus::from_u64(7, 1).unwrap();
        assert_eq!(
            CyclicPoly::one_plus_ax(&1.into(), 3, &m9).unwrap().coeffs(),
            u(&[1, 1, 0])
        );
        assert_eq!(
            CyclicPoly::one_plus_ax(&(-1).into(), 2, &m5).unwrap().coeffs(),
            u(&[1, 4])
        );
        assert_eq!(
            CyclicPoly::one_plus_ax(&0.into(), 4, &m7).unwrap().coeffs(),
            u(&[1, 0, 0, 0])
        );
        assert_eq!(CyclicPoly::one_plus_ax(&4.into(), 1, &m7).unwrap().coeffs(), u(&[5]));
    }

    #[test]
    fn reduce_allones_examples() {
        let m9 = Modulus::from_u64(9, 1).unwrap();
        assert_eq!(poly(&m9, &[1, 1, 1]).reduce_mod_allones().unwrap(), u(&[0, 0]));
        assert_eq!(poly(&m9, &[0, 0, 1]).reduce_mod_allones().unwrap(), u(&[8, 8]));
        assert_eq!(poly(&m9, &[5, 0, 0]).reduce_mod_allones().unwrap(), u(&[5, 0]));
        assert!(poly(&m9, &[5]).reduce_mod_allones().is_err());
    }

    #[test]
    fn word_and_big_paths_agree() {
        // 2^61 - 1 is prime: word path with per-term reduction
        let big_q: BigUint = BigUint::from((1u64 << 61) - 1);
        let word = Modulus::new(big_q.clone(), 1).unwrap();
        // squared: above the word limit, big path
        let big = Modulus::new(big_q.clone(), 2).unwrap();
        let a = BigInt::from(123_456_789_012_345i64);
        let pw = CyclicPoly::one_plus_ax(&a, 5, &word).unwrap().pow_u64(1_000_003);
        let pb = CyclicPoly::one_plus_ax(&a, 5, &big).unwrap().pow_u64(1_000_003);
        let reduced: Vec<BigUint> = pb.coeffs().iter().map(|c| c % &big_q).collect();
        assert_eq!(pw.coeffs(), reduced);
    }

    #[test]
    fn with_exponent_keeps_factors() {
        let m = Modulus::from_u64(12, 1).unwrap();
        let m3 = m.with_exponent(3).unwrap();
        assert_eq!(m3.value(), &BigUint::from(1728u32));
        assert_eq!(m3.q_factors(), m.q_factors());
        assert!(Modulus::from_u64(1, 1).is_err());
        assert!(Modulus::from_u64(5, 0).is_err());
    }
}

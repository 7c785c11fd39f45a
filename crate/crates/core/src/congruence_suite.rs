//! Verifiers for the binomial class-sum congruences.
//!
//! Every verifier reduces both sides modulo the prime power the identity is
//! stated for and returns a [`CongruenceReport`]. Rational constants such as
//! `1/m` are cleared by multiplying both sides through; `m` is coprime to
//! the modulus under every hypothesis used here. Hypothesis failures come
//! back as [`Error::Precondition`], never as a panic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::class_sums::{class_sum_checked, ClassSumQuery};
use crate::cyclotomic_ring::{CyclicPoly, Modulus};
use crate::error::{Error, Precondition, Result};
use crate::intnum::{
    binomial, binomial_signed, crt_combine, gcd_int, is_prime, pow_mod, primitive_root, residue, sign_pow,
};
use crate::periods::{admissible, nu_from_factors, require_coprime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    Theorem11,
    Theorem12,
    Cor13Split,
    Cor13General,
    Cor13Even,
    Cor13Period,
    Cor14,
    Glaisher,
    Hermite,
    Carlitz,
    CarlitzLift,
    Dimitrov,
    Lemma21,
    Remark21,
    Remark11Period,
    Qnormal,
}

impl IdentityId {
    pub const ALL: [IdentityId; 16] = [
        IdentityId::Theorem11,
        IdentityId::Theorem12,
        IdentityId::Cor13Split,
        IdentityId::Cor13General,
        IdentityId::Cor13Even,
        IdentityId::Cor13Period,
        IdentityId::Cor14,
        IdentityId::Glaisher,
        IdentityId::Hermite,
        IdentityId::Carlitz,
        IdentityId::CarlitzLift,
        IdentityId::Dimitrov,
        IdentityId::Lemma21,
        IdentityId::Remark21,
        IdentityId::Remark11Period,
        IdentityId::Qnormal,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Theorem11 => "theorem11",
            IdentityId::Theorem12 => "theorem12",
            IdentityId::Cor13Split => "cor13_split",
            IdentityId::Cor13General => "cor13_general",
            IdentityId::Cor13Even => "cor13_even",
            IdentityId::Cor13Period => "cor13_period",
            IdentityId::Cor14 => "cor14",
            IdentityId::Glaisher => "glaisher",
            IdentityId::Hermite => "hermite",
            IdentityId::Carlitz => "carlitz",
            IdentityId::CarlitzLift => "carlitz_lift",
            IdentityId::Dimitrov => "dimitrov",
            IdentityId::Lemma21 => "lemma21",
            IdentityId::Remark21 => "remark21",
            IdentityId::Remark11Period => "remark11_period",
            IdentityId::Qnormal => "qnormal",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity '{s}'")))
    }
}

/// Outcome of one congruence check.
///
/// `lhs` and `rhs` hold one residue for scalar identities and a residue
/// vector for identities about ring elements or families of exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub identity: IdentityId,
    pub params: BTreeMap<String, String>,
    pub lhs: Vec<BigUint>,
    pub rhs: Vec<BigUint>,
    pub modulus: BigUint,
    pub holds: bool,
}

impl CongruenceReport {
    fn new(identity: IdentityId, params: Params, lhs: Vec<BigUint>, rhs: Vec<BigUint>, modulus: BigUint) -> Self {
        let lhs: Vec<BigUint> = lhs.into_iter().map(|x| x % &modulus).collect();
        let rhs: Vec<BigUint> = rhs.into_iter().map(|x| x % &modulus).collect();
        let holds = lhs == rhs;
        Self {
            identity,
            params: params.0,
            lhs,
            rhs,
            modulus,
            holds,
        }
    }

    fn scalar(identity: IdentityId, params: Params, lhs: BigInt, rhs: BigInt, modulus: &BigUint) -> Self {
        Self::new(
            identity,
            params,
            vec![residue(&lhs, modulus)],
            vec![residue(&rhs, modulus)],
            modulus.clone(),
        )
    }
}

#[derive(Default, Clone)]
struct Params(BTreeMap<String, String>);

impl Params {
    fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.insert(key.to_owned(), value.to_string());
        self
    }
}

/// `[n r]_m(a)` as a function of `n`, cross-checked against the oracle for
/// small `n`.
struct ClassSeq<'a> {
    r: &'a BigInt,
    m: usize,
    a: BigInt,
    modulus: Modulus,
}

impl ClassSeq<'_> {
    fn at(&self, n: &BigUint) -> Result<BigInt> {
        let q = ClassSumQuery::new(n.clone(), self.r.clone(), self.m, self.a.clone(), &self.modulus);
        Ok(BigInt::from(class_sum_checked(&q)?))
    }
}

fn require_q(q: &BigUint) -> Result<()> {
    if *q <= BigUint::one() {
        return Err(Error::InvalidArgument(format!("q = {q} must exceed 1")));
    }
    Ok(())
}

fn require_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    Ok(())
}

fn require_positive(what: &'static str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Precondition::OutOfRange {
            what,
            range: ">= 1",
            value: BigInt::zero(),
        }
        .into());
    }
    Ok(())
}

/// `sum_{j < m} (-a)^j mod q`.
fn alternating_sum_mod(m: usize, a: &BigInt, q: &BigUint) -> BigUint {
    let step = residue(&-a, q);
    let mut term = BigUint::one() % q;
    let mut acc = BigUint::zero();
    for _ in 0..m {
        acc = (acc + &term) % q;
        term = term * &step % q;
    }
    acc
}

fn require_alt_sum_coprime(q: &BigUint, m: usize, a: &BigInt) -> Result<()> {
    let s = alternating_sum_mod(m, a, q);
    let g = gcd_int(&BigInt::from(s.clone()), &BigInt::from(q.clone()));
    if !g.is_one() {
        return Err(Precondition::NotCoprime {
            left: BigInt::from(q.clone()),
            right: BigInt::from(s),
            gcd: g,
        }
        .into());
    }
    Ok(())
}

fn require_multiple_of_nu(t: &BigUint, nu: &BigUint) -> Result<()> {
    if t.is_zero() || !(t % nu).is_zero() {
        return Err(Precondition::NotMultipleOfNu {
            t: t.clone(),
            nu: nu.clone(),
        }
        .into());
    }
    Ok(())
}

fn require_odd_prime(p: &BigUint) -> Result<()> {
    if !is_prime(p) || p.is_even() {
        return Err(Precondition::NotOddPrime { p: p.clone() }.into());
    }
    Ok(())
}

fn require_even(m: usize) -> Result<()> {
    if !m.is_multiple_of(2) {
        return Err(Precondition::OddClassModulus { m }.into());
    }
    Ok(())
}

fn delta(l: u64) -> BigInt {
    if l == 0 {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

fn modulus_pow(q: &BigUint, n: u32) -> Result<Modulus> {
    Modulus::new(q.clone(), n)
}

/// `sum_{k=0}^{n} (-1)^k C(n,k) [kT + l  r]_m(a)`.
fn alternating_binomial_sum(seq: &ClassSeq<'_>, n: u32, t: &BigUint, l: u64) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    for k in 0..=n as u64 {
        let idx = t * k + l;
        let term = BigInt::from(binomial(n as u64, k)) * seq.at(&idx)?;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `m (sum_k (-1)^k C(n,k) [kT+l r]_m(a)) = (a+1)^l (1 - (a+1)^T)^n  (mod q^n)`
/// for `q` coprime to `m` and to `sum_{j<m} (-a)^j`, and `nu_m(q) | T`.
pub fn verify_theorem12(
    q: &BigUint,
    m: usize,
    a: &BigInt,
    l: u64,
    r: &BigInt,
    n: u32,
    t: &BigUint,
) -> Result<CongruenceReport> {
    require_q(q)?;
    require_m(m)?;
    require_positive("n", n as u64)?;
    require_coprime(q, m)?;
    require_alt_sum_coprime(q, m, a)?;
    let modulus = modulus_pow(q, n)?;
    let nu = nu_from_factors(m, modulus.q_factors())?;
    require_multiple_of_nu(t, &nu)?;
    let modv = modulus.value();

    let seq = ClassSeq {
        r,
        m,
        a: a.clone(),
        modulus: modulus.clone(),
    };
    let lhs = BigInt::from(m) * alternating_binomial_sum(&seq, n, t, l)?;
    let a1 = a + 1;
    let rhs = BigInt::from(pow_mod(&a1, &BigUint::from(l), modv))
        * (BigInt::one() - BigInt::from(pow_mod(&a1, t, modv))).pow(n);
    let params = Params::default()
        .with("q", q)
        .with("m", m)
        .with("a", a)
        .with("l", l)
        .with("r", r)
        .with("n", n)
        .with("T", t);
    Ok(CongruenceReport::scalar(IdentityId::Theorem12, params, lhs, rhs, modv))
}

/// The `a = 1` specialization: `2^l (1 - 2^T)^n` for odd `m`,
/// `delta_{l,0} (-1)^r` for even `m`, both after multiplying by `m`.
pub fn verify_theorem11(q: &BigUint, m: usize, l: u64, r: &BigInt, n: u32, t: &BigUint) -> Result<CongruenceReport> {
    require_q(q)?;
    require_m(m)?;
    require_positive("n", n as u64)?;
    require_coprime(q, m)?;
    let modulus = modulus_pow(q, n)?;
    let nu = nu_from_factors(m, modulus.q_factors())?;
    require_multiple_of_nu(t, &nu)?;
    let modv = modulus.value();

    let seq = ClassSeq {
        r,
        m,
        a: BigInt::one(),
        modulus: modulus.clone(),
    };
    let lhs = BigInt::from(m) * alternating_binomial_sum(&seq, n, t, l)?;
    let rhs = if m % 2 == 1 {
        let two = BigInt::from(2);
        BigInt::from(pow_mod(&two, &BigUint::from(l), modv))
            * (BigInt::one() - BigInt::from(pow_mod(&two, t, modv))).pow(n)
    } else {
        delta(l) * sign_pow(r)
    };
    let params = Params::default()
        .with("q", q)
        .with("m", m)
        .with("l", l)
        .with("r", r)
        .with("n", n)
        .with("T", t);
    Ok(CongruenceReport::scalar(IdentityId::Theorem11, params, lhs, rhs, modv))
}

/// Largest divisor of `q` coprime to `c` (every prime dividing `c` is
/// stripped; `c = 0` strips everything).
pub fn coprime_part(q: &BigUint, c: &BigInt, q_factors: &crate::intnum::PrimePowerFactorization) -> BigUint {
    q_factors
        .factors()
        .iter()
        .filter(|(p, _)| !(c % BigInt::from(p.clone())).is_zero())
        .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
        .min(q.clone())
}

/// Splits `[l+nu r]_m(a) - [l r]_m(a)` over `q = q0 * (q/q0)`, `q0` the
/// part of `q` coprime to `a + 1`: zero modulo `q0`, `-(a+1)^l / m`
/// modulo `q/q0`.
pub fn verify_cor13_split(
    q: &BigUint,
    m: usize,
    a: &BigInt,
    l: u64,
    r: &BigInt,
) -> Result<(CongruenceReport, CongruenceReport)> {
    require_q(q)?;
    require_m(m)?;
    require_coprime(q, m)?;
    require_alt_sum_coprime(q, m, a)?;
    let modulus = modulus_pow(q, 1)?;
    let nu = nu_from_factors(m, modulus.q_factors())?;
    let a1 = a + 1;
    let q0 = coprime_part(q, &a1, modulus.q_factors());
    let q1 = q / &q0;

    let seq = ClassSeq {
        r,
        m,
        a: a.clone(),
        modulus,
    };
    let lb = BigUint::from(l);
    let diff = seq.at(&(&lb + &nu))? - seq.at(&lb)?;
    let params = Params::default()
        .with("q", q)
        .with("m", m)
        .with("a", a)
        .with("l", l)
        .with("r", r)
        .with("q0", &q0);
    let coprime = CongruenceReport::scalar(
        IdentityId::Cor13Split,
        params.clone().with("part", "q0"),
        diff.clone(),
        BigInt::zero(),
        &q0,
    );
    let rhs = -BigInt::from(pow_mod(&a1, &lb, &q1));
    let shared = CongruenceReport::scalar(
        IdentityId::Cor13Split,
        params.with("part", "q/q0"),
        BigInt::from(m) * diff,
        rhs,
        &q1,
    );
    Ok((coprime, shared))
}

/// `[k nu + l] - sum_{j<n} (-1)^(n-1-j) C(k-1-j, n-1-j) C(k, j) [j nu + l]`,
/// the left side shared by the general and even-`m` forms.
fn binomial_transform_lhs(seq: &ClassSeq<'_>, nu: &BigUint, l: u64, n: u32, k: u64) -> Result<BigInt> {
    let at = |j: u64| seq.at(&(nu * j + l));
    let mut acc = at(k)?;
    for j in 0..n as u64 {
        let cj = binomial(k, j);
        if cj.is_zero() {
            continue;
        }
        let upper = BigInt::from(k) - 1 - BigInt::from(j);
        let lower = n as u64 - 1 - j;
        let coeff = binomial_signed(&upper, lower) * BigInt::from(cj) * sign_pow(&BigInt::from(lower));
        acc -= coeff * at(j)?;
    }
    Ok(acc)
}

/// The `q^n` refinement: the transformed left side equals
/// `(a+1)^l / m * sum_{n <= j <= k} C(k,j) ((a+1)^nu - 1)^j`.
pub fn verify_cor13_general(
    q: &BigUint,
    m: usize,
    a: &BigInt,
    l: u64,
    r: &BigInt,
    n: u32,
    k: u64,
) -> Result<CongruenceReport> {
    require_q(q)?;
    require_m(m)?;
    require_positive("n", n as u64)?;
    require_positive("k", k)?;
    require_coprime(q, m)?;
    require_alt_sum_coprime(q, m, a)?;
    let modulus = modulus_pow(q, n)?;
    let nu = nu_from_factors(m, modulus.q_factors())?;
    let modv = modulus.value().clone();
    let seq = ClassSeq {
        r,
        m,
        a: a.clone(),
        modulus,
    };
    let lhs = BigInt::from(m) * binomial_transform_lhs(&seq, &nu, l, n, k)?;
    let a1 = a + 1;
    let base = BigInt::from(pow_mod(&a1, &nu, &modv)) - 1;
    let mut tail = BigInt::zero();
    for j in n as u64..=k {
        tail += BigInt::from(binomial(k, j)) * BigInt::from(pow_mod(&base, &BigUint::from(j), &modv));
    }
    let rhs = BigInt::from(pow_mod(&a1, &BigUint::from(l), &modv)) * tail;
    let params = Params::default()
        .with("q", q)
        .with("m", m)
        .with("a", a)
        .with("l", l)
        .with("r", r)
        .with("n", n)
        .with("k", k);
    Ok(CongruenceReport::scalar(
        IdentityId::Cor13General,
        params,
        lhs,
        rhs,
        &modv,
    ))
}

/// Even `m`, `a = 1`: the transformed left side equals
/// `delta_{l,0} (-1)^(n+r) C(k-1, n-1) / m  (mod q^n)`.
pub fn verify_cor13_even(q: &BigUint, m: usize, l: u64, r: &BigInt, n: u32, k: u64) -> Result<CongruenceReport> {
    require_q(q)?;
    require_m(m)?;
    require_even(m)?;
    require_positive("n", n as u64)?;
    require_positive("k", k)?;
    require_coprime(q, m)?;
    let modulus = modulus_pow(q, n)?;
    let nu = nu_from_factors(m, modulus.q_factors())?;
    let modv = modulus.value().clone();
    let seq = ClassSeq {
        r,
        m,
        a: BigInt::one(),
        modulus,
    };
    let lhs = BigInt::from(m) * binomial_transform_lhs(&seq, &nu, l, n, k)?;
    let rhs = delta(l) * sign_pow(&(r + n)) * BigInt::from(binomial(k - 1, n as u64 - 1));
    let params = Params::default()
        .with("q", q)
        .with("m", m)
        .with("l", l)
        .with("r", r)
        .with("n", n)
        .with("k", k);
    Ok(CongruenceReport::scalar(IdentityId::Cor13Even, params, lhs, rhs, &modv))
}

/// Even `m`: `[l + nu r]_m - [l r]_m = delta_{l,0} (-1)^(r-1) / m  (mod q)`.
pub fn verify_cor13_period(q: &BigUint, m: usize, l: u64, r: &BigInt) -> Result<CongruenceReport> {
    require_q(q)?;
    require_m(m)?;
    require_even(m)?;
    require_coprime(q, m)?;
    let modulus = modulus_pow(q, 1)?;
    let nu = nu_from_factors(m, modulus.q_factors())?;
    let seq = ClassSeq {
        r,
        m,
        a: BigInt::one(),
        modulus,
    };
    let lb = BigUint::from(l);
    let lhs = BigInt::from(m) * (seq.at(&(&lb + &nu))? - seq.at(&lb)?);
    let rhs = delta(l) * sign_pow(&(r - 1));
    let params = Params::default().with("q", q).with("m", m).with("l", l).with("r", r);
    Ok(CongruenceReport::scalar(IdentityId::Cor13Period, params, lhs, rhs, q))
}

/// `[k nu + l r]_m - k [nu + l r]_m + (k-1) [l r]_m` modulo `q^2`.
pub fn verify_cor14(q: &BigUint, m: usize, l: u64, r: &BigInt, k: u64) -> Result<CongruenceReport> {
    require_q(q)?;
    require_m(m)?;
    require_positive("k", k)?;
    require_coprime(q, m)?;
    let modulus = modulus_pow(q, 2)?;
    let nu = nu_from_factors(m, modulus.q_factors())?;
    let modv = modulus.value().clone();
    let seq = ClassSeq {
        r,
        m,
        a: BigInt::one(),
        modulus,
    };
    let kb = BigInt::from(k);
    let diff = seq.at(&(&nu * k + l))? - &kb * seq.at(&(&nu + l))? + (&kb - 1) * seq.at(&BigUint::from(l))?;
    let lhs = BigInt::from(m) * diff;
    let rhs = if m.is_multiple_of(2) {
        delta(l) * sign_pow(r) * (&kb - 1)
    } else {
        let two = BigInt::from(2);
        let p_nu = BigInt::from(pow_mod(&two, &nu, &modv));
        let p_knu = BigInt::from(pow_mod(&two, &(&nu * k), &modv));
        BigInt::from(pow_mod(&two, &BigUint::from(l), &modv)) * (p_knu - 1 - &kb * (p_nu - 1))
    };
    let params = Params::default()
        .with("q", q)
        .with("m", m)
        .with("l", l)
        .with("r", r)
        .with("k", k);
    Ok(CongruenceReport::scalar(IdentityId::Cor14, params, lhs, rhs, &modv))
}

/// Parameters of the classical special cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classical {
    /// `[n + p - 1  r]_{p-1} = [n r]_{p-1} (mod p)`, `n >= 1`.
    Glaisher { p: BigUint, n: BigUint, r: BigInt },
    /// `[n 0]_{p-1} = 1 (mod p)` for odd `n`.
    Hermite { p: BigUint, n: BigUint },
    /// `p + (p-1) sum_{0 < k < p^(alpha-1) n, (p-1) | k} C(p^(alpha-1) n, k) = 0 (mod p^alpha)`.
    Carlitz { p: BigUint, alpha: u32, n: BigUint },
    /// `[p^alpha n  r]_{p-1} = [p^(alpha-1) n  r]_{p-1} (mod p^alpha)`.
    CarlitzLift {
        p: BigUint,
        alpha: u32,
        n: BigUint,
        r: BigInt,
    },
    /// `[k(p-1) r]_{p-1} = k C(p-1, r) - (-1)^r (k-1)(p+1) + delta_{r,0} (mod p^2)`.
    Dimitrov { p: BigUint, r: u64, k: u64 },
    /// `[n + nu r]_m(a) = [n r]_m(a) (mod q)` for admissible `a`, `n >= 1`.
    Remark11Period {
        q: BigUint,
        m: usize,
        a: BigInt,
        n: BigUint,
        r: BigInt,
    },
}

impl Classical {
    pub fn identity(&self) -> IdentityId {
        match self {
            Classical::Glaisher { .. } => IdentityId::Glaisher,
            Classical::Hermite { .. } => IdentityId::Hermite,
            Classical::Carlitz { .. } => IdentityId::Carlitz,
            Classical::CarlitzLift { .. } => IdentityId::CarlitzLift,
            Classical::Dimitrov { .. } => IdentityId::Dimitrov,
            Classical::Remark11Period { .. } => IdentityId::Remark11Period,
        }
    }
}

fn p_minus_one(p: &BigUint) -> Result<usize> {
    (p - 1u32)
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument(format!("p = {p} too large for a class modulus")))
}

pub fn verify_classical(c: &Classical) -> Result<CongruenceReport> {
    match c {
        Classical::Glaisher { p, n, r } => {
            require_odd_prime(p)?;
            if n.is_zero() {
                return Err(out_of_range("n", ">= 1", n));
            }
            let m = p_minus_one(p)?;
            let seq = ClassSeq {
                r,
                m,
                a: BigInt::one(),
                modulus: Modulus::new(p.clone(), 1)?,
            };
            let lhs = seq.at(&(n + m))?;
            let rhs = seq.at(n)?;
            let params = Params::default().with("p", p).with("n", n).with("r", r);
            Ok(CongruenceReport::scalar(IdentityId::Glaisher, params, lhs, rhs, p))
        }
        Classical::Hermite { p, n } => {
            require_odd_prime(p)?;
            if n.is_even() {
                return Err(out_of_range("n", "odd positive", n));
            }
            let r = BigInt::zero();
            let seq = ClassSeq {
                r: &r,
                m: p_minus_one(p)?,
                a: BigInt::one(),
                modulus: Modulus::new(p.clone(), 1)?,
            };
            let params = Params::default().with("p", p).with("n", n);
            Ok(CongruenceReport::scalar(
                IdentityId::Hermite,
                params,
                seq.at(n)?,
                BigInt::one(),
                p,
            ))
        }
        Classical::Carlitz { p, alpha, n } => {
            require_odd_prime(p)?;
            if *alpha == 0 {
                return Err(out_of_range("alpha", ">= 1", &BigUint::zero()));
            }
            if n.is_zero() {
                return Err(out_of_range("n", ">= 1", n));
            }
            let m = p_minus_one(p)?;
            let modulus = Modulus::new(p.clone(), *alpha)?;
            let upper = p.pow(alpha - 1) * n;
            let r = BigInt::zero();
            let seq = ClassSeq {
                r: &r,
                m,
                a: BigInt::one(),
                modulus: modulus.clone(),
            };
            // drop the k = 0 and k = upper terms from the full class sum
            let top = if (&upper % m).is_zero() { 1 } else { 0 };
            let inner = seq.at(&upper)? - 1 - top;
            let lhs = BigInt::from(p.clone()) + BigInt::from(m) * inner;
            let params = Params::default().with("p", p).with("alpha", alpha).with("n", n);
            Ok(CongruenceReport::scalar(
                IdentityId::Carlitz,
                params,
                lhs,
                BigInt::zero(),
                modulus.value(),
            ))
        }
        Classical::CarlitzLift { p, alpha, n, r } => {
            require_odd_prime(p)?;
            if *alpha == 0 {
                return Err(out_of_range("alpha", ">= 1", &BigUint::zero()));
            }
            if n.is_zero() {
                return Err(out_of_range("n", ">= 1", n));
            }
            let modulus = Modulus::new(p.clone(), *alpha)?;
            let seq = ClassSeq {
                r,
                m: p_minus_one(p)?,
                a: BigInt::one(),
                modulus: modulus.clone(),
            };
            let lower = p.pow(alpha - 1) * n;
            let lhs = seq.at(&(&lower * p))?;
            let rhs = seq.at(&lower)?;
            let params = Params::default()
                .with("p", p)
                .with("alpha", alpha)
                .with("n", n)
                .with("r", r);
            Ok(CongruenceReport::scalar(
                IdentityId::CarlitzLift,
                params,
                lhs,
                rhs,
                modulus.value(),
            ))
        }
        Classical::Dimitrov { p, r, k } => {
            require_odd_prime(p)?;
            let m = p_minus_one(p)?;
            if *r as usize > m - 1 {
                return Err(Precondition::OutOfRange {
                    what: "r",
                    range: "0..=p-2",
                    value: BigInt::from(*r),
                }
                .into());
            }
            require_positive("k", *k)?;
            let modulus = Modulus::new(p.clone(), 2)?;
            let rr = BigInt::from(*r);
            let seq = ClassSeq {
                r: &rr,
                m,
                a: BigInt::one(),
                modulus: modulus.clone(),
            };
            let lhs = seq.at(&(BigUint::from(*k) * m))?;
            let kb = BigInt::from(*k);
            let rhs = &kb * BigInt::from(binomial(m as u64, *r))
                - sign_pow(&rr) * (&kb - 1) * (BigInt::from(p.clone()) + 1)
                + delta(*r);
            let params = Params::default().with("p", p).with("r", r).with("k", k);
            Ok(CongruenceReport::scalar(
                IdentityId::Dimitrov,
                params,
                lhs,
                rhs,
                modulus.value(),
            ))
        }
        Classical::Remark11Period { q, m, a, n, r } => {
            require_q(q)?;
            require_m(*m)?;
            if n.is_zero() {
                return Err(out_of_range("n", ">= 1", n));
            }
            let class = admissible(a, *m, q)?;
            if !class.is_admissible() {
                return Err(Precondition::Inadmissible {
                    a: a.clone(),
                    m: *m,
                    q: q.clone(),
                }
                .into());
            }
            let modulus = Modulus::new(q.clone(), 1)?;
            let nu = nu_from_factors(*m, modulus.q_factors())?;
            let seq = ClassSeq {
                r,
                m: *m,
                a: a.clone(),
                modulus,
            };
            let lhs = seq.at(&(n + &nu))?;
            let rhs = seq.at(n)?;
            let params = Params::default()
                .with("q", q)
                .with("m", m)
                .with("a", a)
                .with("n", n)
                .with("r", r)
                .with("admissibility", class);
            Ok(CongruenceReport::scalar(
                IdentityId::Remark11Period,
                params,
                lhs,
                rhs,
                q,
            ))
        }
    }
}

fn out_of_range(what: &'static str, range: &'static str, value: &BigUint) -> Error {
    Precondition::OutOfRange {
        what,
        range,
        value: BigInt::from(value.clone()),
    }
    .into()
}

/// `(1 + a x)^nu = 1` modulo `(q, 1 + x + ... + x^(m-1))`: the power is 1 at
/// every m-th root of unity other than 1, checked in one reduction.
pub fn verify_lemma21(q: &BigUint, m: usize, a: &BigInt) -> Result<CongruenceReport> {
    require_q(q)?;
    if m < 2 {
        return Err(Precondition::OutOfRange {
            what: "m",
            range: ">= 2",
            value: BigInt::from(m),
        }
        .into());
    }
    require_coprime(q, m)?;
    require_alt_sum_coprime(q, m, a)?;
    let modulus = Modulus::new(q.clone(), 1)?;
    let nu = nu_from_factors(m, modulus.q_factors())?;
    let power = CyclicPoly::one_plus_ax(a, m, &modulus)?.pow(&nu);
    let lhs = power.reduce_mod_allones()?;
    let rhs = CyclicPoly::identity(m, &modulus)?.reduce_mod_allones()?;
    let params = Params::default().with("q", q).with("m", m).with("a", a).with("nu", &nu);
    Ok(CongruenceReport::new(IdentityId::Lemma21, params, lhs, rhs, q.clone()))
}

/// The integer `g` with `g = g_s^(phi(p_s^alpha_s)/m) (mod p_s^alpha_s)`,
/// `g_s` the least primitive root modulo `p_s`, for every prime power of `q`.
pub fn remark21_generator(q: &BigUint, m: usize) -> Result<BigUint> {
    let factors = crate::intnum::factorize(q)?;
    let mb = BigUint::from(m);
    let mut congruences = Vec::with_capacity(factors.len());
    for (p, alpha) in factors.factors() {
        if !((p - 1u32) % &mb).is_zero() {
            return Err(Precondition::ClassModulusNotDividingPMinusOne { m, p: p.clone() }.into());
        }
        let pa = p.pow(*alpha);
        let phi = p.pow(alpha - 1) * (p - 1u32);
        let gs = primitive_root(p)?;
        congruences.push((BigInt::from(gs.modpow(&(phi / &mb), &pa)), pa));
    }
    crt_combine(&congruences)
}

/// `(1 + a g^j)^nu = 1 (mod q)` for `0 < j < m`, with `g` of order `m`
/// built prime by prime and glued by CRT.
pub fn verify_remark21(q: &BigUint, m: usize, a: &BigInt) -> Result<CongruenceReport> {
    require_q(q)?;
    require_m(m)?;
    let g = remark21_generator(q, m)?;
    require_alt_sum_coprime(q, m, a)?;
    let qi = BigInt::from(q.clone());
    if !g.modpow(&BigUint::from(m), q).is_one() {
        return Err(Error::Internal(format!("g = {g} has g^{m} != 1 mod {q}")));
    }
    for j in 1..m {
        let gj = BigInt::from(g.modpow(&BigUint::from(j), q));
        if !gcd_int(&(gj - 1), &qi).is_one() {
            return Err(Error::Internal(format!("gcd(g^{j} - 1, {q}) != 1 for g = {g}")));
        }
    }
    let nu = crate::periods::nu(m, q)?;
    let mut lhs = Vec::with_capacity(m.saturating_sub(1));
    for j in 1..m {
        let base = BigInt::one() + a * BigInt::from(g.modpow(&BigUint::from(j), q));
        lhs.push(pow_mod(&base, &nu, q));
    }
    let rhs = vec![BigUint::one(); lhs.len()];
    let params = Params::default()
        .with("q", q)
        .with("m", m)
        .with("a", a)
        .with("g", &g)
        .with("nu", &nu);
    Ok(CongruenceReport::new(IdentityId::Remark21, params, lhs, rhs, q.clone()))
}

/// `f(n) = [n r]_m(a) mod p` written as `sum_{1 <= j < p} c_j j^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QNormalDecomposition {
    pub p: u64,
    pub m: usize,
    pub a: BigInt,
    pub r: BigInt,
    /// `c_j` for `j = 1..p-1`, in order.
    pub coeffs: Vec<u64>,
}

impl QNormalDecomposition {
    /// `sum_j c_j j^n mod p`.
    pub fn evaluate(&self, n: u64) -> u64 {
        let p = self.p as u128;
        self.coeffs.iter().enumerate().fold(0u128, |acc, (i, &c)| {
            (acc + c as u128 * pow_u128(i as u128 + 1, n, p)) % p
        }) as u64
    }

    pub fn coefficient_map(&self) -> BTreeMap<u64, u64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1, c))
            .collect()
    }
}

fn pow_u128(mut b: u128, mut e: u64, p: u128) -> u128 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn class_sum_mod_p(n: u64, r: &BigInt, m: usize, a: &BigInt, modulus: &Modulus) -> Result<u64> {
    let q = ClassSumQuery::new(n, r.clone(), m, a.clone(), modulus);
    Ok(class_sum_checked(&q)?.to_u64().expect("below p"))
}

/// Gaussian elimination over `Z/p`; `None` when singular.
fn solve_mod_p(mut mat: Vec<Vec<u64>>, mut rhs: Vec<u64>, p: u64) -> Option<Vec<u64>> {
    let n = rhs.len();
    let pp = p as u128;
    for col in 0..n {
        let pivot = (col..n).find(|&row| mat[row][col] != 0)?;
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = pow_u128(mat[col][col] as u128, p - 2, pp);
        for x in mat[col].iter_mut() {
            *x = (*x as u128 * inv % pp) as u64;
        }
        rhs[col] = (rhs[col] as u128 * inv % pp) as u64;
        for row in 0..n {
            if row == col || mat[row][col] == 0 {
                continue;
            }
            let factor = mat[row][col] as u128;
            let pivot = mat[col].clone();
            for (x, &y) in mat[row].iter_mut().zip(&pivot) {
                let sub = factor * y as u128 % pp;
                *x = ((*x as u128 + pp - sub) % pp) as u64;
            }
            rhs[row] = ((rhs[row] as u128 + pp - factor * rhs[col] as u128 % pp) % pp) as u64;
        }
    }
    Some(rhs)
}

/// Solves for `c_j` from `f(1), ..., f(p-1)` and confirms the
/// representation on `n = p, ..., 2p - 2`.
///
/// With `m | p - 1` the field `Z/p` holds the m-th roots of unity, so
/// `m f(n)` is a combination of `n`-th powers of `1 + a g^j` for every `a`;
/// no coprimality condition on `a` is needed.
pub fn qnormal_decompose(p: u64, m: usize, a: &BigInt, r: &BigInt) -> Result<QNormalDecomposition> {
    let pb = BigUint::from(p);
    require_odd_prime(&pb)?;
    require_m(m)?;
    if !(p - 1).is_multiple_of(m as u64) {
        return Err(Precondition::ClassModulusNotDividingPMinusOne { m, p: pb }.into());
    }
    let modulus = Modulus::new(pb, 1)?;
    let size = (p - 1) as usize;
    let samples: Vec<u64> = (1..=p - 1)
        .map(|n| class_sum_mod_p(n, r, m, a, &modulus))
        .collect::<Result<_>>()?;
    let matrix: Vec<Vec<u64>> = (1..=p - 1)
        .map(|n| {
            (1..=size as u64)
                .map(|j| pow_u128(j as u128, n, p as u128) as u64)
                .collect()
        })
        .collect();
    let coeffs = solve_mod_p(matrix, samples, p)
        .ok_or_else(|| Error::Internal(format!("singular power-sum system modulo {p}")))?;
    let dec = QNormalDecomposition {
        p,
        m,
        a: a.clone(),
        r: r.clone(),
        coeffs,
    };
    for n in p..=2 * p - 2 {
        let direct = class_sum_mod_p(n, r, m, a, &modulus)?;
        if dec.evaluate(n) != direct {
            return Err(Error::Internal(format!(
                "power-sum representation fails at n = {n} for p={p}, m={m}, a={a}, r={r}"
            )));
        }
    }
    Ok(dec)
}

/// Report form of the decomposition: direct class sums against the
/// reconstruction for `n = 1..=n_max`.
pub fn verify_qnormal(p: u64, m: usize, a: &BigInt, r: &BigInt, n_max: u64) -> Result<CongruenceReport> {
    let dec = qnormal_decompose(p, m, a, r)?;
    let modulus = Modulus::from_u64(p, 1)?;
    let mut lhs = Vec::with_capacity(n_max as usize);
    let mut rhs = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        lhs.push(BigUint::from(class_sum_mod_p(n, r, m, a, &modulus)?));
        rhs.push(BigUint::from(dec.evaluate(n)));
    }
    let coeffs = dec.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
    let params = Params::default()
        .with("p", p)
        .with("m", m)
        .with("a", a)
        .with("r", r)
        .with("n_max", n_max)
        .with("coeffs", coeffs);
    Ok(CongruenceReport::new(
        IdentityId::Qnormal,
        params,
        lhs,
        rhs,
        BigUint::from(p),
    ))
}

/// Loosely typed parameters for [`verify_identity`]; each identity reads
/// the fields it needs and rejects a missing one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityParams {
    pub q: Option<BigUint>,
    pub m: Option<BigUint>,
    pub a: Option<BigInt>,
    pub l: Option<BigUint>,
    pub r: Option<BigInt>,
    pub n: Option<BigUint>,
    pub k: Option<BigUint>,
    /// Period multiple for the theorems; defaults to `nu_m(q)`.
    pub t: Option<BigUint>,
    pub p: Option<BigUint>,
    pub alpha: Option<BigUint>,
}

impl IdentityParams {
    fn get<'a, T>(v: &'a Option<T>, name: &str) -> Result<&'a T> {
        v.as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("missing parameter {name}")))
    }

    fn small<T: TryFrom<BigUint>>(v: &Option<BigUint>, name: &str) -> Result<T> {
        T::try_from(Self::get(v, name)?.clone())
            .map_err(|_| Error::InvalidArgument(format!("parameter {name} is too large")))
    }

    fn q(&self) -> Result<&BigUint> {
        Self::get(&self.q, "q")
    }

    fn p(&self) -> Result<&BigUint> {
        Self::get(&self.p, "p")
    }

    fn a(&self) -> Result<&BigInt> {
        Self::get(&self.a, "a")
    }

    fn r(&self) -> Result<&BigInt> {
        Self::get(&self.r, "r")
    }

    fn m(&self) -> Result<usize> {
        Self::small(&self.m, "m")
    }

    fn l(&self) -> Result<u64> {
        Self::small(&self.l, "l")
    }

    fn k(&self) -> Result<u64> {
        Self::small(&self.k, "k")
    }
}

/// Runs the verifier for `id`. Every identity yields one report except
/// `cor13_split`, which yields the congruences modulo `q0` and `q/q0`.
pub fn verify_identity(id: IdentityId, ps: &IdentityParams) -> Result<Vec<CongruenceReport>> {
    let one = |rep: CongruenceReport| Ok(vec![rep]);
    match id {
        IdentityId::Theorem11 | IdentityId::Theorem12 => {
            let (q, m) = (ps.q()?, ps.m()?);
            let n: u32 = IdentityParams::small(&ps.n, "n")?;
            let t = match &ps.t {
                Some(t) => t.clone(),
                None => crate::periods::nu(m, q)?,
            };
            if id == IdentityId::Theorem12 {
                one(verify_theorem12(q, m, ps.a()?, ps.l()?, ps.r()?, n, &t)?)
            } else {
                one(verify_theorem11(q, m, ps.l()?, ps.r()?, n, &t)?)
            }
        }
        IdentityId::Cor13Split => {
            let (lo, hi) = verify_cor13_split(ps.q()?, ps.m()?, ps.a()?, ps.l()?, ps.r()?)?;
            Ok(vec![lo, hi])
        }
        IdentityId::Cor13General => {
            let n = IdentityParams::small(&ps.n, "n")?;
            one(verify_cor13_general(
                ps.q()?,
                ps.m()?,
                ps.a()?,
                ps.l()?,
                ps.r()?,
                n,
                ps.k()?,
            )?)
        }
        IdentityId::Cor13Even => {
            let n = IdentityParams::small(&ps.n, "n")?;
            one(verify_cor13_even(ps.q()?, ps.m()?, ps.l()?, ps.r()?, n, ps.k()?)?)
        }
        IdentityId::Cor13Period => one(verify_cor13_period(ps.q()?, ps.m()?, ps.l()?, ps.r()?)?),
        IdentityId::Cor14 => one(verify_cor14(ps.q()?, ps.m()?, ps.l()?, ps.r()?, ps.k()?)?),
        IdentityId::Glaisher => one(verify_classical(&Classical::Glaisher {
            p: ps.p()?.clone(),
            n: IdentityParams::get(&ps.n, "n")?.clone(),
            r: ps.r()?.clone(),
        })?),
        IdentityId::Hermite => one(verify_classical(&Classical::Hermite {
            p: ps.p()?.clone(),
            n: IdentityParams::get(&ps.n, "n")?.clone(),
        })?),
        IdentityId::Carlitz => one(verify_classical(&Classical::Carlitz {
            p: ps.p()?.clone(),
            alpha: IdentityParams::small(&ps.alpha, "alpha")?,
            n: IdentityParams::get(&ps.n, "n")?.clone(),
        })?),
        IdentityId::CarlitzLift => one(verify_classical(&Classical::CarlitzLift {
            p: ps.p()?.clone(),
            alpha: IdentityParams::small(&ps.alpha, "alpha")?,
            n: IdentityParams::get(&ps.n, "n")?.clone(),
            r: ps.r()?.clone(),
        })?),
        IdentityId::Dimitrov => {
            let r = ps.r()?;
            let r = u64::try_from(r.clone()).map_err(|_| Precondition::OutOfRange {
                what: "r",
                range: "0..=p-2",
                value: r.clone(),
            })?;
            one(verify_classical(&Classical::Dimitrov {
                p: ps.p()?.clone(),
                r,
                k: ps.k()?,
            })?)
        }
        IdentityId::Remark11Period => one(verify_classical(&Classical::Remark11Period {
            q: ps.q()?.clone(),
            m: ps.m()?,
            a: ps.a()?.clone(),
            n: IdentityParams::get(&ps.n, "n")?.clone(),
            r: ps.r()?.clone(),
        })?),
        IdentityId::Lemma21 => one(verify_lemma21(ps.q()?, ps.m()?, ps.a()?)?),
        IdentityId::Remark21 => one(verify_remark21(ps.q()?, ps.m()?, ps.a()?)?),
        IdentityId::Qnormal => {
            let p: u64 = IdentityParams::small(&ps.p, "p")?;
            let n_max: u64 = IdentityParams::small(&ps.n, "n")?;
            one(verify_qnormal(p, ps.m()?, ps.a()?, ps.r()?, n_max)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }
    fn i(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn theorem12_examples() {
        let rep = verify_theorem12(&b(9), 7, &i(3), 0, &i(0), 1, &b(2184)).unwrap();
        assert!(rep.holds, "{rep:?}");
        assert_eq!(rep.modulus, b(9));
        let rep = verify_theorem12(&b(11), 6, &i(2), 1, &i(3), 2, &b(120)).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.modulus, b(121));
        for l in 0..3 {
            for r in 0..7 {
                for n in 1..3 {
                    let rep = verify_theorem12(&b(5), 7, &i(0), l, &i(r), n, &b(15624)).unwrap();
                    assert!(rep.holds);
                }
            }
        }
    }

    #[test]
    fn theorem12_preconditions() {
        let e = verify_theorem12(&b(9), 7, &i(3), 0, &i(0), 1, &b(1092)).unwrap_err();
        assert!(matches!(e, Error::Precondition(Precondition::NotMultipleOfNu { .. })));
        let e = verify_theorem12(&b(9), 6, &i(3), 0, &i(0), 1, &b(6)).unwrap_err();
        assert!(matches!(e, Error::Precondition(Precondition::NotCoprime { .. })));
        // 1 - 4 + 16 = 13
        let e = verify_theorem12(&b(13), 3, &i(4), 0, &i(0), 1, &b(12)).unwrap_err();
        assert!(e.is_precondition());
    }

    #[test]
    fn theorem11_examples() {
        let nu45 = crate::periods::nu(4, &b(5)).unwrap();
        let rep = verify_theorem11(&b(5), 4, 0, &i(2), 1, &nu45).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.rhs, vec![b(1)]);
        let rep = verify_theorem11(&b(5), 4, 3, &i(2), 1, &nu45).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.rhs, vec![b(0)]);
        let nu37 = crate::periods::nu(3, &b(7)).unwrap();
        let rep = verify_theorem11(&b(7), 3, 1, &i(0), 2, &nu37).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.modulus, b(49));
    }

    #[test]
    fn coprime_part_strips_shared_primes() {
        let f = crate::intnum::factorize_u64(45).unwrap();
        assert_eq!(coprime_part(&b(45), &i(6), &f), b(5));
        assert_eq!(coprime_part(&b(45), &i(0), &f), b(1));
        assert_eq!(coprime_part(&b(45), &i(4), &f), b(45));
    }

    #[test]
    fn cor13_split_examples() {
        let (lo, hi) = verify_cor13_split(&b(9), 7, &i(3), 0, &i(0)).unwrap();
        assert!(lo.holds && hi.holds);
        assert_eq!(lo.modulus, b(9));
        assert_eq!(hi.modulus, b(1));
        // a + 1 = 3 shares every prime of 9, so q0 = 1
        let (lo, hi) = verify_cor13_split(&b(9), 7, &i(2), 2, &i(1)).unwrap();
        assert_eq!(lo.modulus, b(1));
        assert_eq!(hi.modulus, b(9));
        assert!(lo.holds && hi.holds);
        assert!(verify_cor13_split(&b(13), 3, &i(4), 0, &i(0))
            .unwrap_err()
            .is_precondition());
    }

    #[test]
    fn cor13_general_examples() {
        assert!(verify_cor13_general(&b(9), 7, &i(3), 0, &i(0), 1, 3).unwrap().holds);
        assert!(verify_cor13_general(&b(5), 3, &i(1), 0, &i(0), 2, 2).unwrap().holds);
        // k < n: both sides vanish
        let rep = verify_cor13_general(&b(5), 3, &i(1), 1, &i(2), 3, 2).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, vec![b(0)]);
        assert_eq!(rep.rhs, vec![b(0)]);
    }

    #[test]
    fn cor13_even_examples() {
        assert!(verify_cor13_even(&b(5), 4, 2, &i(0), 1, 1).unwrap().holds);
        assert!(verify_cor13_even(&b(7), 4, 0, &i(1), 2, 3).unwrap().holds);
        assert!(verify_cor13_even(&b(7), 3, 0, &i(1), 2, 3)
            .unwrap_err()
            .is_precondition());
        // k = n = 1 coincides with the period form
        for l in 0..3 {
            for r in 0..4 {
                let even = verify_cor13_even(&b(5), 4, l, &i(r), 1, 1).unwrap();
                let period = verify_cor13_period(&b(5), 4, l, &i(r)).unwrap();
                assert!(even.holds && period.holds);
                assert_eq!(even.lhs, period.lhs);
                assert_eq!(even.rhs, period.rhs);
            }
        }
    }

    #[test]
    fn cor14_examples() {
        for (m, q) in [(4usize, 5u64), (3, 7)] {
            for l in 0..3 {
                let rep = verify_cor14(&b(q), m, l, &i(1), 1).unwrap();
                assert!(rep.holds);
                assert_eq!(rep.lhs, vec![b(0)]);
            }
        }
        assert!(verify_cor14(&b(5), 4, 0, &i(1), 3).unwrap().holds);
        let rep = verify_cor14(&b(7), 3, 1, &i(2), 2).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.modulus, b(49));
    }

    #[test]
    fn classical_examples() {
        let rep = verify_classical(&Classical::Dimitrov { p: b(5), r: 0, k: 2 }).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, vec![b(22)]);
        assert_eq!(rep.modulus, b(25));
        let rep = verify_classical(&Classical::Carlitz {
            p: b(3),
            alpha: 2,
            n: b(2),
        })
        .unwrap();
        assert!(rep.holds);
        assert_eq!(rep.modulus, b(9));
        let rep = verify_classical(&Classical::Hermite { p: b(5), n: b(1) }).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, vec![b(1)]);
        assert!(
            verify_classical(&Classical::Glaisher {
                p: b(5),
                n: b(3),
                r: i(2)
            })
            .unwrap()
            .holds
        );
    }

    #[test]
    fn classical_preconditions() {
        let e = verify_classical(&Classical::Hermite { p: b(5), n: b(2) }).unwrap_err();
        assert!(e.is_precondition());
        let e = verify_classical(&Classical::Dimitrov { p: b(5), r: 4, k: 2 }).unwrap_err();
        assert!(e.is_precondition());
        let e = verify_classical(&Classical::Glaisher {
            p: b(9),
            n: b(2),
            r: i(0),
        })
        .unwrap_err();
        assert!(e.is_precondition());
        let e = verify_classical(&Classical::Remark11Period {
            q: b(9),
            m: 7,
            a: i(5),
            n: b(1),
            r: i(0),
        })
        .unwrap_err();
        assert!(e.is_precondition());
    }

    #[test]
    fn lemma21_examples() {
        assert!(verify_lemma21(&b(9), 7, &i(3)).unwrap().holds);
        assert!(verify_lemma21(&b(9), 7, &i(0)).unwrap().holds);
        let rep = verify_lemma21(&b(5), 7, &i(1)).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.params["nu"], "15624");
    }

    #[test]
    fn remark21_examples() {
        assert_eq!(remark21_generator(&b(11), 5).unwrap().modpow(&b(5), &b(11)), b(1));
        assert!(verify_remark21(&b(11), 5, &i(1)).unwrap().holds);
        assert!(verify_remark21(&b(7), 3, &i(0)).unwrap().holds);
        assert!(verify_remark21(&b(341), 5, &i(3)).unwrap().holds);
        // 1 - 2 + 4 - 8 + 16 = 11 divides 341; one factor is 187 (mod 341)
        assert!(verify_remark21(&b(341), 5, &i(2)).unwrap_err().is_precondition());
        let e = verify_remark21(&b(13), 5, &i(1)).unwrap_err();
        assert!(matches!(
            e,
            Error::Precondition(Precondition::ClassModulusNotDividingPMinusOne { .. })
        ));
    }

    #[test]
    fn qnormal_examples() {
        for (p, m, a, r, n_max) in [(5u64, 4usize, 0i64, 0i64, 20u64), (5, 4, 1, 0, 20), (7, 3, 2, 1, 30)] {
            let rep = verify_qnormal(p, m, &i(a), &i(r), n_max).unwrap();
            assert!(rep.holds, "p={p} m={m} a={a}");
            assert_eq!(rep.lhs.len(), n_max as usize);
        }
    }

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert!("theorem13".parse::<IdentityId>().is_err());
    }
}

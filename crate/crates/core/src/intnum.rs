//! Exact integer number theory over unbounded integers.
//!
//! Everything here works on `BigUint`/`BigInt`; nothing wraps around.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Unique factorization `n = p_1^e_1 * ... * p_t^e_t` with primes increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePowerFactorization {
    factors: Vec<(BigUint, u32)>,
}

impl PrimePowerFactorization {
    /// Builds a factorization from `(prime, exponent)` pairs in any order,
    /// merging repeated primes. Primality of the entries is checked.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigUint, u32)>,
    {
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for (p, e) in pairs {
            if e == 0 {
                continue;
            }
            if !is_prime(&p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
            match factors.iter_mut().find(|(q, _)| *q == p) {
                Some((_, f)) => *f += e,
                None => factors.push((p, e)),
            }
        }
        factors.sort();
        Ok(Self { factors })
    }

    /// The empty factorization, i.e. of 1.
    pub fn one() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn value(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Factorization of `self^k`.
    pub fn pow(&self, k: u32) -> Self {
        Self {
            factors: self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        }
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut x = d.clone();
                next.push(x.clone());
                for _ in 0..*e {
                    x *= p;
                    next.push(x.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }
}

impl fmt::Display for PrimePowerFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Least non-negative residue of `a` modulo `m`.
pub fn residue(a: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    a.mod_floor(&m).to_biguint().expect("mod_floor of positive modulus")
}

pub fn gcd_int(a: &BigInt, b: &BigInt) -> BigUint {
    a.gcd(b).magnitude().clone()
}

pub fn lcm_all<'a, I: IntoIterator<Item = &'a BigUint>>(values: I) -> BigUint {
    values.into_iter().fold(BigUint::one(), |acc, v| acc.lcm(v))
}

fn pow_mod_u(b: &BigUint, e: &BigUint, m: &BigUint) -> BigUint {
    b.modpow(e, m)
}

/// `b^e mod m` for signed `b`, result in `[0, m)`.
pub fn pow_mod(b: &BigInt, e: &BigUint, m: &BigUint) -> BigUint {
    residue(b, m).modpow(e, m)
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin with the first 13 prime bases; deterministic below 3.3e24.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &b in &MR_BASES {
        let mut x = pow_mod_u(&BigUint::from(b), &d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a non-trivial factor of the
/// composite `n`.
fn pollard_rho(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let block = 128u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..block.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += block;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

fn factor_into(n: BigUint, out: &mut Vec<(BigUint, u32)>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        let mut found = Vec::new();
        factor_u64_from(small, 2, &mut found);
        out.extend(found.into_iter().map(|(q, e)| (BigUint::from(q), e)));
        return;
    }
    if is_prime(&n) {
        out.push((n, 1));
        return;
    }
    let d = pollard_rho(&n);
    let rest = &n / &d;
    factor_into(d, out);
    factor_into(rest, out);
}

/// Prime-power factorization of `n > 1`: trial division up to 10^6, then
/// Pollard rho on whatever cofactor remains.
pub fn factorize(n: &BigUint) -> Result<PrimePowerFactorization> {
    if *n <= BigUint::one() {
        return Err(Error::InvalidArgument(format!(
            "cannot factorize {n}: expected an integer > 1"
        )));
    }
    let mut rest = n.clone();
    let mut pairs: Vec<(BigUint, u32)> = Vec::new();
    let mut p: u64 = 2;
    while p <= TRIAL_DIVISION_LIMIT {
        if let Some(small) = rest.to_u64() {
            let mut found = Vec::new();
            factor_u64_from(small, p, &mut found);
            pairs.extend(found.into_iter().map(|(q, e)| (BigUint::from(q), e)));
            rest = BigUint::one();
            break;
        }
        let mut e = 0u32;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((BigUint::from(p), e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut big = Vec::new();
    factor_into(rest, &mut big);
    pairs.extend(big);
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    pairs.sort();
    for (p, e) in pairs {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(PrimePowerFactorization { factors: merged })
}

/// Trial division from `start` (2 or an odd number) up to the limit, then
/// rho on the cofactor, all in machine words.
fn factor_u64_from(mut n: u64, start: u64, out: &mut Vec<(u64, u32)>) {
    let mut p = start;
    while p <= TRIAL_DIVISION_LIMIT && p * p <= n {
        let mut e = 0u32;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime_u64(x) {
            out.push((x, 1));
        } else {
            let d = pollard_rho_u64(x);
            stack.push(d);
            stack.push(x / d);
        }
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        let b = b as u64;
        if n == b {
            return true;
        }
        if n.is_multiple_of(b) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &b in &MR_BASES {
        let mut x = pow_mod_u64(b as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = x.abs_diff(y).gcd(&n);
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

pub fn factorize_u64(n: u64) -> Result<PrimePowerFactorization> {
    factorize(&BigUint::from(n))
}

/// Euler's totient, `phi(1) = 1`.
pub fn euler_phi(n: &BigUint) -> Result<BigUint> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("phi(0) is undefined".into()));
    }
    if n.is_one() {
        return Ok(BigUint::one());
    }
    Ok(phi_of(&factorize(n)?))
}

/// Totient read off a factorization.
pub fn phi_of(f: &PrimePowerFactorization) -> BigUint {
    f.factors()
        .iter()
        .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(e - 1) * (p - 1u32))
}

/// Smallest `k >= 1` with `b^k = 1 (mod m)`, found by stripping prime
/// factors off `phi(m)`.
pub fn mult_order(b: &BigInt, m: &BigUint) -> Result<BigUint> {
    if *m <= BigUint::one() {
        return Err(Error::InvalidArgument(format!(
            "multiplicative order needs modulus > 1, got {m}"
        )));
    }
    let g = gcd_int(b, &BigInt::from(m.clone()));
    if !g.is_one() {
        return Err(Error::InvalidArgument(format!(
            "{b} is not invertible modulo {m} (gcd {g})"
        )));
    }
    let base = residue(b, m);
    let phi = euler_phi(m)?;
    let mut order = phi.clone();
    if phi.is_one() {
        return Ok(order);
    }
    for (p, _) in factorize(&phi)?.factors() {
        while (&order % p).is_zero() {
            let candidate = &order / p;
            if base.modpow(&candidate, m).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// `x` in `[0, m)` with `a x = 1 (mod m)`.
pub fn mod_inverse(a: &BigInt, m: &BigUint) -> Result<BigUint> {
    if *m <= BigUint::one() {
        return Err(Error::InvalidArgument(format!("inverse needs modulus > 1, got {m}")));
    }
    let mm = BigInt::from(m.clone());
    let e = a.mod_floor(&mm).extended_gcd(&mm);
    if !e.gcd.is_one() {
        return Err(Error::InvalidArgument(format!(
            "{a} is not invertible modulo {m} (gcd {})",
            e.gcd
        )));
    }
    Ok(residue(&e.x, m))
}

/// Chinese remaindering over pairwise coprime moduli. Returns the residue
/// modulo the product.
pub fn crt_combine(congruences: &[(BigInt, BigUint)]) -> Result<BigUint> {
    let mut acc = BigUint::zero();
    let mut modulus = BigUint::one();
    for (r, m) in congruences {
        if m.is_zero() {
            return Err(Error::InvalidArgument("zero modulus in CRT".into()));
        }
        let g = modulus.gcd(m);
        if !g.is_one() {
            return Err(Error::InvalidArgument(format!(
                "moduli not pairwise coprime: gcd({modulus}, {m}) = {g}"
            )));
        }
        let r = residue(r, m);
        if m.is_one() {
            continue;
        }
        // acc + modulus * t = r (mod m)
        let inv = if modulus.is_one() {
            BigUint::one()
        } else {
            mod_inverse(&BigInt::from(modulus.clone()), m)?
        };
        let diff = residue(&(BigInt::from(r) - BigInt::from(acc.clone() % m)), m);
        let t = diff * inv % m;
        acc += &modulus * t;
        modulus *= m;
        acc %= &modulus;
    }
    Ok(acc)
}

/// Smallest primitive root modulo the odd prime or 2 `p`.
pub fn primitive_root(p: &BigUint) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if *p == BigUint::from(2u32) {
        return Ok(BigUint::one());
    }
    let pm1 = p - 1u32;
    let f = factorize(&pm1)?;
    let mut g = BigUint::from(2u32);
    loop {
        if f.primes().all(|q| !g.modpow(&(&pm1 / q), p).is_one()) {
            return Ok(g);
        }
        g += 1u32;
    }
}

/// Generalized binomial coefficient `C(x, k)` for any integer `x`, `k >= 0`.
pub fn binomial_signed(x: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= x - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(-1)^k` as an integer.
pub fn sign_pow(k: &BigInt) -> BigInt {
    if k.is_odd() {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

pub fn to_u64(x: &BigUint, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("{what} = {x} does not fit in 64 bits")))
}

pub fn to_biguint(x: &BigInt, what: &str) -> Result<BigUint> {
    if x.sign() == Sign::Minus {
        return Err(Error::InvalidArgument(format!("{what} = {x} must be non-negative")));
    }
    Ok(x.abs().to_biguint().expect("non-negative"))
}

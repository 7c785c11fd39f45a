//! Class sums `[n r]_m(a) = sum_{0 <= k <= n, k = r (mod m)} C(n,k) a^k`
//! modulo `M`, by two independent routes.
//!
//! The fast route reads coefficient `r mod m` of `(1 + a x)^n` in
//! `(Z/M)[x]/(x^m - 1)`. The oracle builds Pascal's row directly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclotomic_ring::{CyclicPoly, Modulus};
use crate::error::{Error, Result};
use crate::intnum::residue;

/// Largest upper index the oracle accepts.
pub const ORACLE_MAX_N: u64 = 1_000_000;
/// Up to this upper index the oracle uses exact integer binomials.
pub const ORACLE_EXACT_MAX_N: u64 = 20_000;
/// Verifiers cross-check the ring engine against the oracle up to here.
pub const CROSS_CHECK_MAX_N: u64 = 300;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSumQuery {
    pub n: BigUint,
    pub r: BigInt,
    pub m: usize,
    pub a: BigInt,
    pub modulus: Modulus,
}

impl ClassSumQuery {
    pub fn new(n: impl Into<BigUint>, r: impl Into<BigInt>, m: usize, a: impl Into<BigInt>, modulus: &Modulus) -> Self {
        Self {
            n: n.into(),
            r: r.into(),
            m,
            a: a.into(),
            modulus: modulus.clone(),
        }
    }

    /// `r` reduced into `[0, m)`.
    pub fn class(&self) -> Result<usize> {
        class_index(&self.r, self.m)
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArgument("class modulus m must be >= 1".into()));
        }
        Ok(())
    }
}

pub fn class_index(r: &BigInt, m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidArgument("class modulus m must be >= 1".into()));
    }
    Ok(r.mod_floor(&BigInt::from(m)).to_usize().expect("in [0, m)"))
}

/// Every class sum `[n r]_m(a)` for `r = 0..m`, read off `(1 + a x)^n`.
pub fn class_sum_profile(n: &BigUint, m: usize, a: &BigInt, modulus: &Modulus) -> Result<Vec<BigUint>> {
    Ok(CyclicPoly::one_plus_ax(a, m, modulus)?.pow(n).coeffs())
}

pub fn class_sum(query: &ClassSumQuery) -> Result<BigUint> {
    query.validate()?;
    let r = query.class()?;
    let p = CyclicPoly::one_plus_ax(&query.a, query.m, &query.modulus)?.pow(&query.n);
    Ok(p.coeff(r))
}

/// Definitional route: exact binomials for `n <= 2*10^4`, the additive
/// Pascal recurrence mod `M` beyond, up to `n <= 10^6`.
pub fn class_sum_oracle(query: &ClassSumQuery) -> Result<BigUint> {
    query.validate()?;
    let n = query
        .n
        .to_u64()
        .filter(|&n| n <= ORACLE_MAX_N)
        .ok_or_else(|| Error::InvalidArgument(format!("oracle supports n <= {ORACLE_MAX_N}, got {}", query.n)))?;
    let modv = query.modulus.value();
    let row = if n <= ORACLE_EXACT_MAX_N {
        exact_row(n, modv)
    } else {
        additive_row(n, modv)
    };
    let r = query.class()? as u64;
    let m = query.m as u64;
    let a = residue(&query.a, modv);
    let mut acc = BigUint::zero();
    let mut a_pow = BigUint::one() % modv;
    for (k, c) in row.iter().enumerate() {
        if k as u64 % m == r {
            acc += c * &a_pow;
        }
        a_pow = a_pow * &a % modv;
    }
    Ok(acc % modv)
}

fn exact_row(n: u64, modv: &BigUint) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    for k in 0..=n {
        row.push(&c % modv);
        c = c * (n - k) / (k + 1);
    }
    row
}

fn additive_row(n: u64, modv: &BigUint) -> Vec<BigUint> {
    let mut row = vec![BigUint::one() % modv];
    for i in 1..=n as usize {
        row.push(BigUint::one() % modv);
        for k in (1..i).rev() {
            row[k] = (&row[k] + &row[k - 1]) % modv;
        }
    }
    row
}

/// Ring engine, confirmed by the oracle whenever `n` is small enough.
pub fn class_sum_checked(query: &ClassSumQuery) -> Result<BigUint> {
    let fast = class_sum(query)?;
    if query.n <= BigUint::from(CROSS_CHECK_MAX_N) {
        let slow = class_sum_oracle(query)?;
        if fast != slow {
            return Err(Error::Internal(format!(
                "class sum mismatch for n={}, r={}, m={}, a={}, M={}: ring {fast} vs oracle {slow}",
                query.n,
                query.r,
                query.m,
                query.a,
                query.modulus.value()
            )));
        }
    }
    Ok(fast)
}

/// `{n r}_m = [n r]_{2m} - [n r+m]_{2m}` modulo `M`.
pub fn signed_class_sum(n: &BigUint, r: &BigInt, m: usize, modulus: &Modulus) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::InvalidArgument("class modulus m must be >= 1".into()));
    }
    let one = BigInt::one();
    let plus = class_sum(&ClassSumQuery::new(n.clone(), r.clone(), 2 * m, one.clone(), modulus))?;
    let minus = class_sum(&ClassSumQuery::new(n.clone(), r + BigInt::from(m), 2 * m, one, modulus))?;
    let modv = modulus.value();
    Ok((plus + modv - minus) % modv)
}

/// Both sides of `(x + a)^n = x^n + b  mod (q, x^m - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AksReport {
    pub holds: bool,
    /// Coefficients of `(x + a)^n - x^n - b` in `(Z/q)[x]/(x^m - 1)`.
    pub poly_difference: Vec<BigUint>,
    /// `sum_{1 <= k <= n, k = r} C(n,k) a^k mod q` for `r = 0..m`.
    pub class_residues: Vec<BigUint>,
    /// `b` in class `n mod m`, zero elsewhere.
    pub expected: Vec<BigUint>,
}

/// Evaluates the polynomial congruence and its class-sum reformulation
/// separately; disagreement is reported as an internal error.
pub fn aks_polynomial_check(a: &BigInt, b: &BigInt, q: &BigUint, m: usize, n: &BigUint) -> Result<AksReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    if n.is_zero() {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let modulus = Modulus::new(q.clone(), 1)?;
    let qv = modulus.value();

    let mut x_plus_a = vec![BigInt::zero(); m];
    x_plus_a[0] += a;
    x_plus_a[1 % m] += 1;
    let lhs = CyclicPoly::new(&modulus, &x_plus_a)?.pow(n);
    let mut diff: Vec<BigInt> = lhs.coeffs().into_iter().map(BigInt::from).collect();
    let n_class = (n % BigUint::from(m)).to_usize().unwrap();
    diff[n_class] -= 1;
    diff[0] -= b;
    let poly_difference: Vec<BigUint> = diff.iter().map(|c| residue(c, qv)).collect();
    let poly_holds = poly_difference.iter().all(Zero::is_zero);

    let mut class_residues = class_sum_profile(n, m, a, &modulus)?;
    // drop the k = 0 term
    class_residues[0] = (&class_residues[0] + qv - BigUint::one()) % qv;
    let mut expected = vec![BigUint::zero(); m];
    expected[n_class] = residue(b, qv);
    let class_holds = class_residues == expected;

    if poly_holds != class_holds {
        return Err(Error::Internal(format!(
            "AKS equivalence broken for a={a}, b={b}, q={q}, m={m}, n={n}"
        )));
    }
    Ok(AksReport {
        holds: poly_holds,
        poly_difference,
        class_residues,
        expected,
    })
}

//! The explicit period `nu_m(q)`, the true minimal period `mu_m(a, q)` of
//! `n -> [n r]_m(a) mod q`, and the sweep comparing the two.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cyclotomic_ring::{CyclicPoly, Modulus};
use crate::error::{Error, Precondition, Result};
use crate::intnum::{factorize, gcd_int, lcm_all, mult_order, pow_mod, residue, PrimePowerFactorization};

pub(crate) fn require_coprime(q: &BigUint, m: usize) -> Result<()> {
    let g = gcd_int(&BigInt::from(q.clone()), &BigInt::from(m));
    if !g.is_one() {
        return Err(Precondition::NotCoprime {
            left: BigInt::from(q.clone()),
            right: BigInt::from(m),
            gcd: g,
        }
        .into());
    }
    Ok(())
}

/// `nu_m(q)` from a known factorization of `q`.
pub fn nu_from_factors(m: usize, q_factors: &PrimePowerFactorization) -> Result<BigUint> {
    let q = q_factors.value();
    require_coprime(&q, m)?;
    let m_big = BigUint::from(m);
    let mut parts = Vec::with_capacity(q_factors.len());
    for (p, alpha) in q_factors.factors() {
        let beta = if m == 1 {
            BigUint::one()
        } else {
            mult_order(&BigInt::from(p.clone()), &m_big)?
        };
        let beta = u32::try_from(&beta).map_err(|_| Error::InvalidArgument(format!("order {beta} too large")))?;
        parts.push(p.pow(alpha - 1) * (p.pow(beta) - 1u32));
    }
    Ok(lcm_all(&parts))
}

/// `nu_m(q) = lcm_s p_s^(alpha_s - 1) (p_s^beta_s - 1)` where `beta_s` is
/// the order of `p_s` modulo `m`.
pub fn nu(m: usize, q: &BigUint) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    if *q <= BigUint::one() {
        return Err(Error::InvalidArgument(format!("q = {q} must exceed 1")));
    }
    require_coprime(q, m)?;
    nu_from_factors(m, &factorize(q)?)
}

/// Which branch of the periodicity condition a base satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Admissibility {
    /// `gcd(1 - (-a)^m, q) = 1`
    CoprimeNorm,
    /// `a = -1 (mod q)`
    AEqMinus1,
    /// `a = 1 (mod q)` and `m` even
    AEqPlus1EvenM,
    Inadmissible,
}

impl Admissibility {
    pub fn as_str(&self) -> &'static str {
        match self {
            Admissibility::CoprimeNorm => "coprime_norm",
            Admissibility::AEqMinus1 => "a_eq_minus1",
            Admissibility::AEqPlus1EvenM => "a_eq_plus1_even_m",
            Admissibility::Inadmissible => "inadmissible",
        }
    }

    pub fn is_admissible(&self) -> bool {
        *self != Admissibility::Inadmissible
    }
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// First matching branch, in the order the conditions are listed.
pub fn admissible(a: &BigInt, m: usize, q: &BigUint) -> Result<Admissibility> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    require_coprime(q, m)?;
    let neg_a_pow = pow_mod(&-a, &BigUint::from(m), q);
    let norm = BigInt::one() - BigInt::from(neg_a_pow);
    if gcd_int(&norm, &BigInt::from(q.clone())).is_one() {
        return Ok(Admissibility::CoprimeNorm);
    }
    let a_mod = residue(a, q);
    if a_mod == q - 1u32 {
        return Ok(Admissibility::AEqMinus1);
    }
    if a_mod.is_one() && m.is_multiple_of(2) {
        return Ok(Admissibility::AEqPlus1EvenM);
    }
    Ok(Admissibility::Inadmissible)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodReport {
    pub q: BigUint,
    pub m: usize,
    pub a: Option<BigInt>,
    pub nu: BigUint,
    pub mu: Option<BigUint>,
    pub admissibility: Option<Admissibility>,
    /// Candidate periods tried, in increasing order, ending at `mu`.
    pub divisors_checked: Vec<BigUint>,
}

impl PeriodReport {
    pub fn nu_only(m: usize, q: &BigUint) -> Result<Self> {
        Ok(Self {
            q: q.clone(),
            m,
            a: None,
            nu: nu(m, q)?,
            mu: None,
            admissibility: None,
            divisors_checked: Vec::new(),
        })
    }
}

/// True iff `(1 + a x)^(t + 1) = 1 + a x` in `(Z/q)[x]/(x^m - 1)`, i.e.
/// every class sum sequence repeats with period `t` from `n = 1` on.
pub fn is_period(base: &CyclicPoly, t: &BigUint) -> bool {
    base.pow(&(t + 1u32)) == *base
}

/// `mu_m(a, q)`: the least `t >= 1` such that `[n + t r]_m(a) = [n r]_m(a)
/// (mod q)` for all `n >= 1` and all `r`. Searches divisors of `nu_m(q)`.
pub fn mu(m: usize, a: &BigInt, q: &BigUint) -> Result<PeriodReport> {
    let class = admissible(a, m, q)?;
    if !class.is_admissible() {
        return Err(Precondition::Inadmissible {
            a: a.clone(),
            m,
            q: q.clone(),
        }
        .into());
    }
    let modulus = Modulus::new(q.clone(), 1)?;
    let nu = nu_from_factors(m, modulus.q_factors())?;
    let base = CyclicPoly::one_plus_ax(a, m, &modulus)?;
    let mut checked = Vec::new();
    for d in factorize_or_one(&nu)?.divisors() {
        checked.push(d.clone());
        if is_period(&base, &d) {
            return Ok(PeriodReport {
                q: q.clone(),
                m,
                a: Some(a.clone()),
                nu,
                mu: Some(d),
                admissibility: Some(class),
                divisors_checked: checked,
            });
        }
    }
    Err(Error::Internal(format!(
        "no divisor of nu = {nu} is a period for m={m}, a={a}, q={q}"
    )))
}

fn factorize_or_one(n: &BigUint) -> Result<PrimePowerFactorization> {
    if n.is_one() {
        Ok(PrimePowerFactorization::one())
    } else {
        factorize(n)
    }
}

/// Scans `t = 1, 2, ..., bound` one multiplication at a time and returns the
/// first period found. Independent of the divisor argument.
pub fn mu_exhaustive(m: usize, a: &BigInt, q: &BigUint, bound: u64) -> Result<Option<u64>> {
    let class = admissible(a, m, q)?;
    if !class.is_admissible() {
        return Err(Precondition::Inadmissible {
            a: a.clone(),
            m,
            q: q.clone(),
        }
        .into());
    }
    let modulus = Modulus::new(q.clone(), 1)?;
    let base = CyclicPoly::one_plus_ax(a, m, &modulus)?;
    // power = base^(t + 1)
    let mut power = base.mul(&base)?;
    for t in 1..=bound {
        if power == base {
            return Ok(Some(t));
        }
        power = power.mul(&base)?;
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepEntry {
    pub a: BigInt,
    pub a_mod_q: BigUint,
    pub admissibility: Admissibility,
    pub mu: Option<BigUint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVerdict {
    MatchesNu,
    CounterexampleCandidate,
    /// `3 | q`, so the conjecture says nothing here.
    HypothesisNotMet,
}

impl SweepVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVerdict::MatchesNu => "matches_nu",
            SweepVerdict::CounterexampleCandidate => "counterexample_candidate",
            SweepVerdict::HypothesisNotMet => "hypothesis_not_met",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub m: usize,
    pub q: BigUint,
    pub nu: BigUint,
    pub hypothesis_met: bool,
    pub max_mu: BigUint,
    /// Residues `a mod q` at which `max_mu` is attained, increasing.
    pub attaining: Vec<BigUint>,
    pub verdict: SweepVerdict,
    /// Sorted by `(a mod q, a)`.
    pub entries: Vec<SweepEntry>,
    /// Residues whose representatives disagreed on admissibility or `mu`.
    pub residue_discrepancies: Vec<BigUint>,
}

/// Bases named in the worked examples; always swept in addition to
/// `-q..=q`.
const NAMED_BASES: [i64; 7] = [-3, -2, -1, 1, 2, 3, 4];

/// Computes `mu_m(a, q)` for every admissible `a` in `-q..=q` (plus a few
/// named bases) and compares the maximum with `nu_m(q)`. `jobs` caps the
/// worker count; `None` uses every core. The report does not depend on
/// scheduling.
pub fn conjecture_sweep(m: usize, q: &BigUint, jobs: Option<usize>) -> Result<SweepReport> {
    let nu = nu(m, q)?;
    let qi = BigInt::from(q.clone());
    let mut bases: Vec<BigInt> = Vec::new();
    let mut a = -qi.clone();
    while a <= qi {
        bases.push(a.clone());
        a += 1;
    }
    bases.extend(NAMED_BASES.iter().map(|&b| BigInt::from(b)));
    bases.sort();
    bases.dedup();

    let run = |bases: &[BigInt]| -> Result<Vec<SweepEntry>> {
        bases
            .par_iter()
            .map(|a| {
                let admissibility = admissible(a, m, q)?;
                let period = if admissibility.is_admissible() {
                    mu(m, a, q)?.mu
                } else {
                    None
                };
                Ok(SweepEntry {
                    a: a.clone(),
                    a_mod_q: residue(a, q),
                    admissibility,
                    mu: period,
                })
            })
            .collect()
    };
    let mut entries = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(|| run(&bases))?,
        None => run(&bases)?,
    };
    entries.sort_by(|x, y| (&x.a_mod_q, &x.a).cmp(&(&y.a_mod_q, &y.a)));

    let mut by_residue: BTreeMap<&BigUint, (Admissibility, Option<&BigUint>)> = BTreeMap::new();
    let mut residue_discrepancies = Vec::new();
    for e in &entries {
        let seen = by_residue.entry(&e.a_mod_q).or_insert((e.admissibility, e.mu.as_ref()));
        if *seen != (e.admissibility, e.mu.as_ref()) && residue_discrepancies.last() != Some(&e.a_mod_q) {
            residue_discrepancies.push(e.a_mod_q.clone());
        }
    }

    let max_mu = entries
        .iter()
        .filter_map(|e| e.mu.clone())
        .max()
        .unwrap_or_else(BigUint::zero);
    let mut attaining: Vec<BigUint> = entries
        .iter()
        .filter(|e| e.mu.as_ref() == Some(&max_mu))
        .map(|e| e.a_mod_q.clone())
        .collect();
    attaining.dedup();

    let hypothesis_met = !(q % 3u32).is_zero();
    let verdict = if !hypothesis_met {
        SweepVerdict::HypothesisNotMet
    } else if max_mu == nu {
        SweepVerdict::MatchesNu
    } else {
        SweepVerdict::CounterexampleCandidate
    };
    Ok(SweepReport {
        m,
        q: q.clone(),
        nu,
        hypothesis_met,
        max_mu,
        attaining,
        verdict,
        entries,
        residue_discrepancies,
    })
}

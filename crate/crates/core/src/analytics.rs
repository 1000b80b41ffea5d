//! Primes, the six quadratic families, Hardy–Littlewood constants and residue classes that
//! contain no exceptional primes.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, is_prime, pow_mod};
use crate::classifier::QuadraticFamily;
use crate::error::{Error, Result};

pub const SIEVE_LIMIT: u64 = 1_000_000_000;
pub const DEFAULT_HL_CUTOFF: u64 = 10_000_000;
pub const PI_F_LIMIT: u64 = 10_000_000;

const SEGMENT: usize = 1 << 18;

/// All primes `≤ limit`, by a segmented sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Result<Vec<u64>> {
    if limit > SIEVE_LIMIT {
        return Err(Error::Guard {
            what: "sieve limit",
            value: limit as u128,
            limit: SIEVE_LIMIT as u128,
        });
    }
    if limit < 2 {
        return Ok(Vec::new());
    }
    let root = limit.isqrt() as usize;
    let mut small = vec![true; root + 1];
    let mut base = Vec::new();
    for i in 2..=root {
        if small[i] {
            base.push(i as u64);
            for j in (i * i..=root).step_by(i) {
                small[j] = false;
            }
        }
    }
    let mut primes = Vec::new();
    let mut seg = vec![true; SEGMENT];
    let mut lo = 2u64;
    while lo <= limit {
        let hi = (lo + SEGMENT as u64 - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            for j in (start..=hi).step_by(p as usize) {
                seg[(j - lo) as usize] = false;
            }
        }
        primes.extend((0..len).filter(|&i| seg[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    Ok(primes)
}

/// Legendre symbol `(n/p)` by Euler's criterion; `p` must be an odd prime.
pub fn legendre(n: i64, p: u64) -> i8 {
    let a = n.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub k: u64,
    pub value: u64,
    pub is_prime: bool,
}

/// `f(k)` for `k_min ≤ k ≤ k_max`, with primality.
pub fn enumerate_family(family: &QuadraticFamily, k_max: u64) -> Result<Vec<FamilyMember>> {
    if k_max < family.k_min {
        return Err(Error::InvalidParameter(format!(
            "k_max = {k_max} is below k_min = {} for {family}",
            family.k_min
        )));
    }
    (family.k_min..=k_max)
        .map(|k| {
            let value = u64::try_from(family.eval(k))
                .map_err(|_| Error::InvalidParameter(format!("f({k}) does not fit in 64 bits")))?;
            Ok(FamilyMember {
                k,
                value,
                is_prime: is_prime(value),
            })
        })
        .collect()
}

/// Exceptional primes of the family up to `bound`, ascending.
pub fn family_primes(family: &QuadraticFamily, bound: u64) -> Vec<u64> {
    (family.k_min..)
        .map(|k| family.eval(k))
        .take_while(|&v| v <= bound as i128)
        .map(|v| v as u64)
        .filter(|&v| is_prime(v))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HLEstimate {
    pub schema: u32,
    pub r: u64,
    pub c: i64,
    pub reduced_c: i64,
    pub cutoff: u64,
    /// `∏_{3 ≤ p ≤ cutoff} (1 - (c'/p)/(p - 1))`, the truncated `C(f)/2`.
    pub partial: f64,
}

pub fn hl_constant(family: &QuadraticFamily, cutoff: u64) -> Result<HLEstimate> {
    if cutoff < 1000 {
        return Err(Error::InvalidParameter(format!(
            "cutoff must be at least 1000, got {cutoff}"
        )));
    }
    let cp = family.reduced_c();
    let partial = sieve_primes(cutoff)?
        .into_iter()
        .skip(1)
        .fold(1.0, |acc, p| {
            acc * (1.0 - legendre(cp, p) as f64 / (p - 1) as f64)
        });
    Ok(HLEstimate {
        schema: 1,
        r: family.r,
        c: family.c,
        reduced_c: cp,
        cutoff,
        partial,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiF {
    pub schema: u32,
    pub r: u64,
    pub c: i64,
    pub x: u64,
    pub count: u64,
    /// `(C(f)/2) · x / ln x`.
    pub prediction: f64,
}

/// `#{k_min ≤ k ≤ x : f(k) prime}` against the Hardy–Littlewood prediction.
pub fn pi_f(family: &QuadraticFamily, x: u64, hl: &HLEstimate) -> Result<PiF> {
    if x > PI_F_LIMIT {
        return Err(Error::Guard {
            what: "pi_f range",
            value: x as u128,
            limit: PI_F_LIMIT as u128,
        });
    }
    let count = if x < family.k_min {
        0
    } else {
        (family.k_min..=x)
            .into_par_iter()
            .filter(|&k| is_prime(family.eval(k) as u64))
            .count() as u64
    };
    let prediction = if x >= 2 {
        hl.partial * x as f64 / (x as f64).ln()
    } else {
        0.0
    };
    Ok(PiF {
        schema: 1,
        r: family.r,
        c: family.c,
        x,
        count,
        prediction,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueAvoidance {
    pub schema: u32,
    pub a: u64,
    /// `J(a)`: residues of every family value mod `a`.
    pub residues: Vec<u64>,
    /// `b` coprime to `a` with `b ∉ J(a)`.
    pub witnesses: Vec<u64>,
}

pub fn residue_avoidance(a: u64) -> Result<ResidueAvoidance> {
    if a < 2 {
        return Err(Error::InvalidParameter(format!(
            "modulus must be at least 2, got {a}"
        )));
    }
    let mut hit = vec![false; a as usize];
    for f in QuadraticFamily::all() {
        for k in 0..a {
            hit[f.eval(k).rem_euclid(a as i128) as usize] = true;
        }
    }
    let residues = (0..a).filter(|&b| hit[b as usize]).collect();
    let witnesses = (0..a)
        .filter(|&b| !hit[b as usize] && gcd(a, b) == 1)
        .collect();
    Ok(ResidueAvoidance {
        schema: 1,
        a,
        residues,
        witnesses,
    })
}

//! Exceptional-prime classification for dihedral groups `D_2p`.
//!
//! Two independent routes decide whether `l̃ = l̂ + 1` when `⌊2√(2p)⌋` is odd: membership of `p`
//! in one of six quadratic families, and a direct comparison of the extremal `μ₁` against the
//! Ramanujan bound at covalency `l̂ + 1`. They must agree.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::sieve_primes;
use crate::arith::{is_prime, ln_binomial, CompensatedSum};
use crate::bounds::{compute_l_hat, closed_form_l_hat_dihedral};
use crate::cayley::{make_dihedral_subset, make_interval_subset, CayleySubset, Mask};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::spectra::{
    dihedral_spectrum, nontrivial_mu, EPSILON_GUARD, TRIVIAL_EIGENVALUE_TOLERANCE,
};

/// Smallest prime the family classification covers.
pub const MIN_CLASSIFY_PRIME: u64 = 29;
/// Largest `p` for which [`tilde_l_exhaustive`] sweeps every Cayley subset.
pub const TILDE_EXHAUSTIVE_LIMIT: u64 = 13;
/// Slack allowed above the extremal `μ₁` before a sample counts as a violation.
pub const EXTREMALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeVerdict {
    Exceptional,
    Ordinary,
}

impl std::fmt::Display for PrimeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PrimeVerdict::Exceptional => "exceptional",
            PrimeVerdict::Ordinary => "ordinary",
        })
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// `f(t) = 2t² + (r+3)t + c` with `c ∈ {r-4, r-2, r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadraticFamily {
    pub r: u64,
    pub c: i64,
    /// First `k` at which the family's values are exceptional.
    pub k_min: u64,
}

const FAMILIES: [QuadraticFamily; 6] = [
    QuadraticFamily {
        r: 1,
        c: -3,
        k_min: 5,
    },
    QuadraticFamily {
        r: 1,
        c: -1,
        k_min: 3,
    },
    QuadraticFamily {
        r: 1,
        c: 1,
        k_min: 3,
    },
    QuadraticFamily {
        r: 3,
        c: -1,
        k_min: 7,
    },
    QuadraticFamily {
        r: 3,
        c: 1,
        k_min: 3,
    },
    QuadraticFamily {
        r: 3,
        c: 3,
        k_min: 3,
    },
];

impl QuadraticFamily {
    pub fn all() -> &'static [QuadraticFamily] {
        &FAMILIES
    }

    pub fn new(r: u64, c: i64) -> Result<Self> {
        FAMILIES
            .iter()
            .find(|f| f.r == r && f.c == c)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("no family with r = {r}, c = {c}")))
    }

    pub fn eval(&self, k: u64) -> i128 {
        let k = k as i128;
        2 * k * k + (self.r as i128 + 3) * k + self.c as i128
    }

    /// `D = (r+3)² - 8c`.
    pub fn discriminant(&self) -> i64 {
        let b = self.r as i64 + 3;
        b * b - 8 * self.c
    }

    /// `c' = D / 4`: `4 - 2c` for `r = 1`, `9 - 2c` for `r = 3`.
    pub fn reduced_c(&self) -> i64 {
        if self.r == 1 {
            4 - 2 * self.c
        } else {
            9 - 2 * self.c
        }
    }
}

impl std::fmt::Display for QuadraticFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "2k^2+{}k{:+}", self.r + 3, self.c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeClassification {
    pub schema: u32,
    pub p: u64,
    pub floor2sqrt2p: u64,
    pub parity: Parity,
    pub l_hat: u64,
    pub r: u64,
    pub k: u64,
    pub c: i64,
    pub in_family: bool,
    pub mu1: f64,
    pub rb: f64,
    pub margin: f64,
    pub verdict: PrimeVerdict,
    pub tilde_l: u64,
    pub epsilon: u64,
}

/// `(l₁, l₂)` for the extremal subset at even covalency `l`: equal halves when `l/2` is odd,
/// otherwise `(l/2 + 1, l/2 - 1)`.
pub fn extremal_split(l: u64) -> Result<(u64, u64)> {
    if l < 2 || l % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "extremal covalency must be even and >= 2, got {l}"
        )));
    }
    let h = l / 2;
    let split = if h % 2 == 1 { (h, h) } else { (h + 1, h - 1) };
    debug_assert_eq!(split.0 % 2, 1);
    Ok(split)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalConstruction {
    pub p: u64,
    pub l: u64,
    pub l1: u64,
    pub l2: u64,
    pub mu1: f64,
    /// Set when `l ≠ l̂ + 1`, where maximality is not guaranteed.
    pub heuristic: bool,
}

impl ExtremalConstruction {
    pub fn witness(&self) -> Result<CayleySubset> {
        make_interval_subset(Arc::new(GroupTable::dihedral(self.p)?), self.l1, self.l2)
    }

    pub fn valency(&self) -> u64 {
        2 * self.p - self.l
    }

    pub fn bound(&self) -> f64 {
        2.0 * ((self.valency() - 1) as f64).sqrt()
    }
}

/// `|μ₁| = 2 sin(πl/2p) cos(π|l₁-l₂|/2p) / sin(π/p)`.
fn mu1_closed(p: u64, l1: u64, l2: u64) -> f64 {
    let (pf, l) = (p as f64, (l1 + l2) as f64);
    let d = l1.abs_diff(l2) as f64;
    2.0 * (PI * l / (2.0 * pf)).sin() * (PI * d / (2.0 * pf)).cos() / (PI / pf).sin()
}

/// `|z₁| + |w₁|` summed term by term.
fn mu1_direct(p: u64, l1: u64, l2: u64) -> f64 {
    let theta = |a: i64| 2.0 * PI * a as f64 / p as f64;
    let half = (l1 as i64 - 1) / 2;
    let z: CompensatedSum = (-half..=half).map(|a| theta(a).cos()).collect();
    let wr: CompensatedSum = (0..l2 as i64).map(|a| theta(a).cos()).collect();
    let wi: CompensatedSum = (0..l2 as i64).map(|a| theta(a).sin()).collect();
    z.value().abs() + wr.value().hypot(wi.value())
}

pub fn extremal_mu(p: u64, l: u64) -> Result<ExtremalConstruction> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "p must be an odd prime, got {p}"
        )));
    }
    let (l1, l2) = extremal_split(l)?;
    if l1 > p || l2 > p || l >= 2 * p - 1 {
        return Err(Error::InvalidParameter(format!(
            "covalency {l} out of range for p = {p}"
        )));
    }
    Ok(ExtremalConstruction {
        p,
        l,
        l1,
        l2,
        mu1: mu1_closed(p, l1, l2),
        heuristic: l != closed_form_l_hat_dihedral(p) + 1,
    })
}

/// `t ∈ I_{r,k}`, i.e. `⌊2√(2t)⌋ - 2 = 4k + r`.
pub fn in_interval(r: u64, k: u64, t: f64) -> bool {
    t > 0.0 && (2.0 * (2.0 * t).sqrt()).floor() - 2.0 == (4 * k + r) as f64
}

/// `F_r(t) = 2 sin(π(4k+r+1)/2t) cos(π(r-1)/2t) / sin(π/t) - 2√(2t-4k-r-2)`.
pub fn f_r_eval(r: u64, k: u64, t: f64) -> Result<f64> {
    if r != 1 && r != 3 {
        return Err(Error::InvalidParameter(format!(
            "r must be 1 or 3, got {r}"
        )));
    }
    if !in_interval(r, k, t) {
        return Err(Error::InvalidParameter(format!(
            "t = {t} is outside I_(r={r},k={k})"
        )));
    }
    let l = (4 * k + r + 1) as f64;
    let main =
        2.0 * (PI * l / (2.0 * t)).sin() * (PI * (r - 1) as f64 / (2.0 * t)).cos() / (PI / t).sin();
    Ok(main - 2.0 * (2.0 * t - l - 1.0).sqrt())
}

pub fn classify_prime(p: u64) -> Result<PrimeClassification> {
    if p < MIN_CLASSIFY_PRIME || !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "classification needs a prime p >= {MIN_CLASSIFY_PRIME}, got {p}"
        )));
    }
    let s = (8 * p).isqrt();
    let parity = if s.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    };
    let l_hat = closed_form_l_hat_dihedral(p);
    let expected = if parity == Parity::Even { s - 3 } else { s - 2 };
    if l_hat != expected {
        return Err(Error::InvariantViolation(format!(
            "floor identity fails at p = {p}"
        )));
    }
    let (r, k) = (l_hat % 4, l_hat / 4);
    let c = p as i64 - 2 * (k * k) as i64 - ((r + 3) * k) as i64;
    let in_family = QuadraticFamily::new(r, c).is_ok_and(|f| k >= f.k_min);

    let ext = extremal_mu(p, l_hat + 1)?;
    let rb = ext.bound();
    let mut mu1 = ext.mu1;
    let mut margin = mu1 - rb;
    if margin.abs() < EPSILON_GUARD {
        mu1 = mu1_direct(p, ext.l1, ext.l2);
        margin = mu1 - rb;
        if margin.abs() < EPSILON_GUARD {
            return Err(Error::Borderline { p, margin });
        }
    }

    let mut verdict = PrimeVerdict::Ordinary;
    if parity == Parity::Odd {
        let f = f_r_eval(r, k, p as f64)?;
        if (f - margin).abs() > 1e-9 {
            return Err(Error::InvariantViolation(format!(
                "F_r({p}) = {f} differs from mu1 - rb = {margin}"
            )));
        }
        let spectral = margin < 0.0;
        if spectral != in_family {
            return Err(Error::RouteDisagreement {
                p,
                polynomial: in_family,
                spectral,
            });
        }
        if in_family {
            verdict = PrimeVerdict::Exceptional;
        }
    }
    let epsilon = u64::from(parity == Parity::Even || verdict == PrimeVerdict::Exceptional);
    Ok(PrimeClassification {
        schema: 1,
        p,
        floor2sqrt2p: s,
        parity,
        l_hat,
        r,
        k,
        c,
        in_family,
        mu1,
        rb,
        margin,
        verdict,
        tilde_l: l_hat + epsilon,
        epsilon,
    })
}

/// Classify every prime in `[max(from, 29), to]`, in ascending order.
pub fn scan(from: u64, to: u64) -> Result<Vec<PrimeClassification>> {
    let lo = from.max(MIN_CLASSIFY_PRIME);
    let primes: Vec<u64> = sieve_primes(to)?.into_iter().filter(|&p| p >= lo).collect();
    primes.par_iter().map(|&p| classify_prime(p)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TildeLevel {
    pub l: u64,
    pub subsets: u64,
    pub non_ramanujan: u64,
    pub borderline: u64,
    pub max_mu: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TildeWitness {
    pub mask: String,
    pub l: u64,
    pub mu: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TildeReport {
    pub schema: u32,
    pub p: u64,
    pub l_hat: u64,
    pub tilde_l: u64,
    pub subsets_checked: u64,
    pub non_generating_skipped: u64,
    pub levels: Vec<TildeLevel>,
    pub witness: Option<TildeWitness>,
}

#[derive(Clone)]
struct LevelAcc {
    subsets: u64,
    failures: u64,
    borderline: u64,
    max_mu: f64,
    first_failure: Option<(u64, u64, f64)>,
}

/// `(pair mask, reflection mask)` sweep of every symmetric subset of `D_2p`.
fn sweep_dihedral(p: u64) -> Result<(Vec<LevelAcc>, u64)> {
    if !(3..=TILDE_EXHAUSTIVE_LIMIT).contains(&p) || !is_prime(p) {
        return Err(Error::Guard {
            what: "exhaustive dihedral sweep prime",
            value: p as u128,
            limit: TILDE_EXHAUSTIVE_LIMIT as u128,
        });
    }
    let pu = p as usize;
    let m = (pu - 1) / 2;
    let angle = |j: usize, a: usize| 2.0 * PI * ((j * a) % pu) as f64 / p as f64;
    // |w_j| for every reflection mask, j ≥ 1.
    let w_abs: Vec<Vec<f64>> = (0u64..1 << p)
        .into_par_iter()
        .map(|mask| {
            (1..pu)
                .map(|j| {
                    let (mut re, mut im) = (0.0, 0.0);
                    for a in (0..pu).filter(|a| mask >> a & 1 == 1) {
                        re += angle(j, a).cos();
                        im += angle(j, a).sin();
                    }
                    re.hypot(im)
                })
                .collect()
        })
        .collect();
    let empty = LevelAcc {
        subsets: 0,
        failures: 0,
        borderline: 0,
        max_mu: 0.0,
        first_failure: None,
    };
    let per_pair: Vec<(Vec<LevelAcc>, u64)> = (0u64..1 << m)
        .into_par_iter()
        .map(|pairs| {
            let z: Vec<f64> = (1..pu)
                .map(|j| {
                    (0..m)
                        .filter(|i| pairs >> i & 1 == 1)
                        .map(|i| 2.0 * angle(j, i + 1).cos())
                        .sum()
                })
                .collect();
            let n1 = 2 * pairs.count_ones() as u64;
            let mut levels = vec![empty.clone(); 2 * pu + 1];
            let mut skipped = 0;
            for refl in 0u64..1 << p {
                let n2 = refl.count_ones() as u64;
                // D_2p with p prime is generated by a reflection together with any other
                // non-identity element.
                if n2 == 0 || (n1 == 0 && n2 == 1) {
                    skipped += 1;
                    continue;
                }
                let size = n1 + n2;
                let k = size as f64;
                let mut mu: f64 = 0.0;
                let mut consider = |v: f64| {
                    let a = v.abs();
                    if (a - k).abs() > TRIVIAL_EIGENVALUE_TOLERANCE {
                        mu = mu.max(a);
                    }
                };
                consider(n1 as f64 - n2 as f64);
                for (zj, wj) in z.iter().zip(&w_abs[refl as usize]) {
                    consider(zj + wj);
                    consider(zj - wj);
                }
                let lev = &mut levels[(2 * p - size) as usize];
                lev.subsets += 1;
                lev.max_mu = lev.max_mu.max(mu);
                let margin = mu - 2.0 * (k - 1.0).sqrt();
                if margin.abs() < EPSILON_GUARD {
                    lev.borderline += 1;
                } else if margin > 0.0 {
                    lev.failures += 1;
                    if lev.first_failure.is_none() {
                        lev.first_failure = Some((pairs, refl, mu));
                    }
                }
            }
            (levels, skipped)
        })
        .collect();
    let mut total = vec![empty; 2 * pu + 1];
    let mut skipped = 0;
    for (levels, s) in per_pair {
        skipped += s;
        for (t, l) in total.iter_mut().zip(levels) {
            t.subsets += l.subsets;
            t.failures += l.failures;
            t.borderline += l.borderline;
            t.max_mu = t.max_mu.max(l.max_mu);
            if t.first_failure.is_none() {
                t.first_failure = l.first_failure;
            }
        }
    }
    Ok((total, skipped))
}

fn dihedral_mask_hex(p: u64, pairs: u64, refl: u64) -> String {
    let pu = p as usize;
    let mut mask = Mask::new(2 * pu);
    for i in 0..(pu - 1) / 2 {
        if pairs >> i & 1 == 1 {
            mask.insert(i + 1);
            mask.insert(pu - i - 1);
        }
    }
    for a in 0..pu {
        if refl >> a & 1 == 1 {
            mask.insert(pu + a);
        }
    }
    mask.to_hex()
}

/// Exact `l̃` for small `p` by sweeping every symmetric generating subset of `D_2p`.
pub fn tilde_l_exhaustive(p: u64) -> Result<TildeReport> {
    let (acc, skipped) = sweep_dihedral(p)?;
    let mut levels = Vec::new();
    let mut tilde_l = None;
    let mut witness = None;
    for (l, a) in acc.iter().enumerate().filter(|(_, a)| a.subsets > 0) {
        let l = l as u64;
        let bound = 2.0 * ((2 * p - l - 1) as f64).sqrt();
        levels.push(TildeLevel {
            l,
            subsets: a.subsets,
            non_ramanujan: a.failures,
            borderline: a.borderline,
            max_mu: a.max_mu,
            bound,
        });
        if witness.is_some() {
            continue;
        }
        match a.first_failure {
            Some((pairs, refl, mu)) => {
                witness = Some(TildeWitness {
                    mask: dihedral_mask_hex(p, pairs, refl),
                    l,
                    mu,
                    bound,
                })
            }
            None => tilde_l = Some(l),
        }
    }
    Ok(TildeReport {
        schema: 1,
        p,
        l_hat: compute_l_hat(&GroupTable::dihedral(p)?)?.l_hat,
        tilde_l: tilde_l
            .ok_or_else(|| Error::InvariantViolation("no Ramanujan covalency".into()))?,
        subsets_checked: levels.iter().map(|l| l.subsets).sum(),
        non_generating_skipped: skipped,
        levels,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalityReport {
    pub schema: u32,
    pub p: u64,
    pub l: u64,
    pub mu1: f64,
    pub max_mu: f64,
    pub subsets: u64,
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

/// Every subset at `l = l̂ + 1` has `μ ≤ μ₁ + 1e-9`, checked over the full subset space.
pub fn exhaustive_extremality(p: u64) -> Result<ExtremalityReport> {
    let l = closed_form_l_hat_dihedral(p) + 1;
    let ext = extremal_mu(p, l)?;
    let (acc, _) = sweep_dihedral(p)?;
    let level = &acc[l as usize];
    if level.max_mu > ext.mu1 + EXTREMALITY_TOLERANCE {
        return Err(Error::ExtremalityViolation {
            p,
            l,
            mu: level.max_mu,
            extremal: ext.mu1,
            mask: "(exhaustive)".into(),
        });
    }
    Ok(ExtremalityReport {
        schema: 1,
        p,
        l,
        mu1: ext.mu1,
        max_mu: level.max_mu,
        subsets: level.subsets,
        exhaustive: true,
        seed: None,
    })
}

/// Uniform symmetric subset of `D_2p` with covalency `l`, as `(s1, s2)` membership vectors.
pub fn random_symmetric_subset<R: Rng>(
    p: u64,
    l: u64,
    rng: &mut R,
) -> Result<(Vec<bool>, Vec<bool>)> {
    let pu = p as usize;
    let m = (pu - 1) / 2;
    if l == 0 || l > 2 * p {
        return Err(Error::InvalidParameter(format!(
            "covalency {l} out of range for p = {p}"
        )));
    }
    let size = (2 * p - l) as usize;
    // Subsets with i rotation pairs: C(m, i) · C(p, size - 2i).
    let options: Vec<usize> = (0..=m)
        .filter(|&i| 2 * i <= size && size - 2 * i <= pu)
        .collect();
    let logs: Vec<f64> = options
        .iter()
        .map(|&i| ln_binomial(m as u64, i as u64) + ln_binomial(p, (size - 2 * i) as u64))
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights = WeightedIndex::new(logs.iter().map(|x| (x - top).exp()))
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let i = options[weights.sample(rng)];
    let mut s1 = vec![false; pu];
    for pair in sample(rng, m, i) {
        s1[pair + 1] = true;
        s1[pu - pair - 1] = true;
    }
    let mut s2 = vec![false; pu];
    for a in sample(rng, pu, size - 2 * i) {
        s2[a] = true;
    }
    Ok((s1, s2))
}

/// `μ` of `S` and its mask, or `None` if `S` does not generate.
fn sampled_mu(
    group: &Arc<GroupTable>,
    s1: &[bool],
    s2: &[bool],
) -> Result<Option<(f64, usize, String)>> {
    match make_dihedral_subset(group.clone(), s1, s2) {
        Ok(s) => {
            let sp = dihedral_spectrum(&s)?;
            Ok(Some((
                nontrivial_mu(sp.entries.iter().map(|e| e.0), sp.valency),
                sp.valency,
                s.to_hex(),
            )))
        }
        Err(Error::NotGenerating) => Ok(None),
        Err(e) => Err(e),
    }
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draw `n_samples` uniform symmetric subsets at covalency `l` and check `μ ≤ μ₁ + 1e-9`.
pub fn sample_extremality(p: u64, l: u64, n_samples: u64, seed: u64) -> Result<ExtremalityReport> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be positive".into()));
    }
    let ext = extremal_mu(p, l)?;
    let group = Arc::new(GroupTable::dihedral(p)?);
    let results: Vec<Option<(f64, usize, String)>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let (s1, s2) = random_symmetric_subset(p, l, &mut sample_rng(seed, i))?;
            sampled_mu(&group, &s1, &s2)
        })
        .collect::<Result<_>>()?;
    let mut max_mu: f64 = 0.0;
    let mut subsets = 0;
    for (mu, _, mask) in results.into_iter().flatten() {
        if mu > ext.mu1 + EXTREMALITY_TOLERANCE {
            return Err(Error::ExtremalityViolation {
                p,
                l,
                mu,
                extremal: ext.mu1,
                mask,
            });
        }
        max_mu = max_mu.max(mu);
        subsets += 1;
    }
    Ok(ExtremalityReport {
        schema: 1,
        p,
        l,
        mu1: ext.mu1,
        max_mu,
        subsets,
        exhaustive: false,
        seed: Some(seed),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrivialBoundReport {
    pub schema: u32,
    pub p: u64,
    /// Largest sampled covalency, `⌊2√(2p)⌋ - 2`.
    pub l_max: u64,
    pub subsets: u64,
    pub non_ramanujan: u64,
    /// Largest `μ - 2√(k-1)` seen; negative when every sample is Ramanujan.
    pub max_margin: f64,
    pub first_counterexample: Option<String>,
    pub seed: u64,
}

/// Sample subsets with covalency uniform in `1..=⌊2√(2p)⌋-2` and count non-Ramanujan ones.
pub fn sample_trivial_bound(p: u64, n_samples: u64, seed: u64) -> Result<TrivialBoundReport> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "p must be an odd prime, got {p}"
        )));
    }
    let l_max = (8 * p).isqrt() - 2;
    let group = Arc::new(GroupTable::dihedral(p)?);
    let results: Vec<Option<(f64, usize, String)>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let l = rng.gen_range(1..=l_max);
            let (s1, s2) = random_symmetric_subset(p, l, &mut rng)?;
            sampled_mu(&group, &s1, &s2)
        })
        .collect::<Result<_>>()?;
    let mut report = TrivialBoundReport {
        schema: 1,
        p,
        l_max,
        subsets: 0,
        non_ramanujan: 0,
        max_margin: f64::NEG_INFINITY,
        first_counterexample: None,
        seed,
    };
    for (mu, k, mask) in results.into_iter().flatten() {
        let margin = mu - 2.0 * ((k - 1) as f64).sqrt();
        report.subsets += 1;
        report.max_margin = report.max_margin.max(margin);
        if margin >= EPSILON_GUARD {
            report.non_ramanujan += 1;
            report.first_counterexample.get_or_insert(mask);
        }
    }
    Ok(report)
}

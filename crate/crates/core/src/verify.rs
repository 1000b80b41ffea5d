//! Self-check suites: closed forms against the dense oracle, exhaustive normal-subset sweeps
//! against the integer formulas, extremality and trivial-bound sampling.

use std::sync::Arc;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    compute_l_hat, closed_form_l_hat_dihedral, closed_form_l_hat_fpq, verify_l_hat, BoundsReport,
};
use crate::cayley::{enumerate_normal_subsets, make_dihedral_subset, make_normal_subset};
use crate::classifier::{
    exhaustive_extremality, sample_extremality, sample_trivial_bound, tilde_l_exhaustive,
};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::oracle::oracle_spectrum;
use crate::spectra::{dihedral_spectrum, normal_spectrum_of};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckOutcome {
    fn timed(name: &str, start: Instant, result: Result<(bool, String)>) -> Self {
        let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
        CheckOutcome {
            name: name.to_string(),
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleComparison {
    pub subsets: u64,
    pub skipped: u64,
    pub max_delta: f64,
}

/// Character-formula spectra of every normal subset of `g` against the oracle.
pub fn oracle_equivalence_normal(g: &Arc<GroupTable>) -> Result<OracleComparison> {
    let specs: Vec<_> = enumerate_normal_subsets(g)?.collect();
    let deltas: Vec<Option<f64>> = specs
        .par_iter()
        .map(|spec| match make_normal_subset(g.clone(), spec) {
            Ok(s) => Ok(Some(
                normal_spectrum_of(&s)?.max_abs_diff(&oracle_spectrum(&s)?),
            )),
            Err(Error::NotGenerating) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    Ok(summarize(&deltas))
}

fn summarize(deltas: &[Option<f64>]) -> OracleComparison {
    OracleComparison {
        subsets: deltas.iter().flatten().count() as u64,
        skipped: deltas.iter().filter(|d| d.is_none()).count() as u64,
        max_delta: deltas.iter().flatten().copied().fold(0.0, f64::max),
    }
}

/// `z/w` spectra of `n` random symmetric subsets of `D_2p`, `p` drawn from `primes`, against the
/// oracle. Each rotation pair and each reflection is kept with probability 1/2.
pub fn oracle_equivalence_random(primes: &[u64], n: u64, seed: u64) -> Result<OracleComparison> {
    let groups: Vec<Arc<GroupTable>> = primes
        .iter()
        .map(|&p| GroupTable::dihedral(p).map(Arc::new))
        .collect::<Result<_>>()?;
    let deltas: Vec<Option<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let g = groups.choose(&mut rng).expect("at least one prime");
            let p = g.kernel_size() as usize;
            let mut s1 = vec![false; p];
            for a in 1..=(p - 1) / 2 {
                let keep = rng.gen_bool(0.5);
                s1[a] = keep;
                s1[p - a] = keep;
            }
            let s2: Vec<bool> = (0..p).map(|_| rng.gen_bool(0.5)).collect();
            match make_dihedral_subset(g.clone(), &s1, &s2) {
                Ok(s) => Ok(Some(
                    dihedral_spectrum(&s)?.max_abs_diff(&oracle_spectrum(&s)?),
                )),
                Err(Error::NotGenerating) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    Ok(summarize(&deltas))
}

/// Exhaustive sweep, fast path and integer formula for `D_2p`.
pub fn dihedral_bounds_agree(p: u64) -> Result<(bool, BoundsReport)> {
    let g = GroupTable::dihedral(p)?;
    let sweep = verify_l_hat(&g)?;
    let fast = compute_l_hat(&g)?;
    let ok = sweep.l_hat == fast.l_hat && sweep.l_hat == closed_form_l_hat_dihedral(p);
    Ok((ok, sweep))
}

pub fn fpq_bounds_agree(p: u64, q: u64) -> Result<(bool, BoundsReport)> {
    let g = GroupTable::fpq(p, q)?;
    let sweep = verify_l_hat(&g)?;
    let fast = compute_l_hat(&g)?;
    let ok = sweep.l_hat == fast.l_hat && sweep.l_hat == closed_form_l_hat_fpq(p, q);
    Ok((ok, sweep))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub random_oracle_samples: u64,
    pub extremality_samples: u64,
    pub dihedral_max_p: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0x5eed,
            random_oracle_samples: 10_000,
            extremality_samples: 10_000,
            dihedral_max_p: 61,
        }
    }
}

const ORACLE_TOLERANCE: f64 = 1e-8;

/// Run every suite and report each outcome; never stops early.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    let t = Instant::now();
    let r = (|| {
        let mut worst = 0.0f64;
        let mut count = 0;
        for g in [
            GroupTable::dihedral(11)?,
            GroupTable::dihedral(13)?,
            GroupTable::fpq(7, 3)?,
            GroupTable::fpq(13, 3)?,
        ] {
            let c = oracle_equivalence_normal(&Arc::new(g))?;
            worst = worst.max(c.max_delta);
            count += c.subsets;
        }
        Ok((
            worst < ORACLE_TOLERANCE,
            format!("{count} normal subsets, max |delta| = {worst:.3e}"),
        ))
    })();
    out.push(CheckOutcome::timed(
        "oracle equivalence, normal subsets",
        t,
        r,
    ));

    let t = Instant::now();
    let r = oracle_equivalence_random(
        &[11, 13, 17, 19, 23, 29, 31],
        cfg.random_oracle_samples,
        cfg.seed,
    )
    .map(|c| {
        (
            c.max_delta < ORACLE_TOLERANCE,
            format!(
                "{} random subsets ({} non-generating skipped), max |delta| = {:.3e}",
                c.subsets, c.skipped, c.max_delta
            ),
        )
    });
    out.push(CheckOutcome::timed(
        "oracle equivalence, random dihedral subsets",
        t,
        r,
    ));

    let t = Instant::now();
    let r = (|| {
        let mut bad = Vec::new();
        let mut violations = 0;
        let primes: Vec<u64> = (11..=cfg.dihedral_max_p)
            .filter(|&p| crate::arith::is_prime(p))
            .collect();
        for &p in &primes {
            let (ok, rep) = dihedral_bounds_agree(p)?;
            violations += rep.sweep.map_or(0, |s| s.trivial_bound_violations);
            if !ok {
                bad.push(p);
            }
        }
        for (p, q) in [(31, 5), (43, 3), (61, 5)] {
            let (ok, rep) = fpq_bounds_agree(p, q)?;
            violations += rep.sweep.map_or(0, |s| s.trivial_bound_violations);
            if !ok {
                bad.push(p * 1000 + q);
            }
        }
        Ok((
            bad.is_empty() && violations == 0,
            format!(
                "{} groups swept, mismatches {bad:?}, trivial-bound violations {violations}",
                primes.len() + 3
            ),
        ))
    })();
    out.push(CheckOutcome::timed("normal-subset bounds", t, r));

    let t = Instant::now();
    let r = (|| {
        let mut notes = Vec::new();
        let mut ok = true;
        for p in [3, 5, 7] {
            let rep = verify_l_hat(&GroupTable::dihedral(p)?)?;
            ok &= rep.l_hat == p;
            notes.push(format!("l_hat({p}) = {}", rep.l_hat));
        }
        Ok((ok, notes.join(", ")))
    })();
    out.push(CheckOutcome::timed("small dihedral groups", t, r));

    let t = Instant::now();
    let r = (|| {
        let mut notes = Vec::new();
        for p in [11, 13] {
            let e = exhaustive_extremality(p)?;
            notes.push(format!("p={p}: max mu {:.6} <= {:.6}", e.max_mu, e.mu1));
        }
        for p in [29, 31, 37] {
            let l = closed_form_l_hat_dihedral(p) + 1;
            let e = sample_extremality(p, l, cfg.extremality_samples, cfg.seed)?;
            notes.push(format!("p={p}: max mu {:.6} <= {:.6}", e.max_mu, e.mu1));
        }
        Ok((true, notes.join("; ")))
    })();
    out.push(CheckOutcome::timed("extremal construction", t, r));

    let t = Instant::now();
    let r = (|| {
        let mut bad = 0;
        let mut checked = 0;
        for p in [3, 5, 7, 11, 13] {
            let rep = tilde_l_exhaustive(p)?;
            for lev in rep
                .levels
                .iter()
                .filter(|lev| crate::bounds::below_trivial_bound(lev.l, 2 * p))
            {
                bad += lev.non_ramanujan;
                checked += lev.subsets;
            }
        }
        for p in [29, 31, 37, 41, 43] {
            let rep = sample_trivial_bound(p, cfg.extremality_samples, cfg.seed)?;
            bad += rep.non_ramanujan;
            checked += rep.subsets;
        }
        Ok((
            bad == 0,
            format!("{checked} subsets below the trivial bound, {bad} non-Ramanujan"),
        ))
    })();
    out.push(CheckOutcome::timed("trivial bound", t, r));

    out
}

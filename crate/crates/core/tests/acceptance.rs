//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use cayley_ramanujan::analytics::{hl_constant, residue_avoidance};
use cayley_ramanujan::arith::is_prime;
use cayley_ramanujan::bounds::{
    compute_l_hat, closed_form_l_hat_dihedral, closed_form_l_hat_fpq, verify_l_hat,
};
use cayley_ramanujan::cayley::parse_subset_spec;
use cayley_ramanujan::classifier::{
    exhaustive_extremality, sample_extremality, sample_trivial_bound, scan, tilde_l_exhaustive,
    Parity, PrimeVerdict, QuadraticFamily,
};
use cayley_ramanujan::group::GroupTable;
use cayley_ramanujan::oracle::oracle_spectrum;
use cayley_ramanujan::spectra::closed_form_spectrum;
use cayley_ramanujan::verify::{oracle_equivalence_normal, oracle_equivalence_random};

const ORACLE_TOLERANCE: f64 = 1e-8;
const RANDOM_ORACLE_SAMPLES: u64 = 10_000;
const HL_CUTOFF: u64 = 10_000_000;
const HL_TOLERANCE: f64 = 2e-2;
const ROUTE_LIMIT: u64 = 1_000_000;
const EXTREMALITY_SAMPLES: u64 = 10_000;
const TRIVIAL_SAMPLES: u64 = 10_000;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn oracle_equivalence() -> Outcome {
    let mut normal = 0;
    let mut worst: f64 = 0.0;
    for g in [
        GroupTable::dihedral(11),
        GroupTable::dihedral(13),
        GroupTable::fpq(7, 3),
        GroupTable::fpq(13, 3),
    ] {
        let c = oracle_equivalence_normal(&Arc::new(g.map_err(|e| e.to_string())?))
            .map_err(|e| e.to_string())?;
        normal += c.subsets;
        worst = worst.max(c.max_delta);
    }
    let primes: Vec<u64> = (11..=31).filter(|&p| is_prime(p)).collect();
    let r = oracle_equivalence_random(&primes, RANDOM_ORACLE_SAMPLES, SEED)
        .map_err(|e| e.to_string())?;
    check(
        normal == 102,
        format!("expected 102 normal subsets, saw {normal}"),
    )?;
    check(
        r.subsets + r.skipped == RANDOM_ORACLE_SAMPLES,
        "random sample count",
    )?;
    check(
        worst < ORACLE_TOLERANCE && r.max_delta < ORACLE_TOLERANCE,
        format!("max |delta| {worst:e} / {:e}", r.max_delta),
    )?;
    Ok(format!(
        "{normal} normal subsets max |delta| {worst:.1e}; {} random dihedral subsets max |delta| {:.1e}",
        r.subsets, r.max_delta
    ))
}

fn dihedral_bound(trivial_violations: &mut u128) -> Outcome {
    let mut rows = Vec::new();
    for p in (11..=61).filter(|&p| is_prime(p)) {
        let g = GroupTable::dihedral(p).map_err(|e| e.to_string())?;
        let sweep = verify_l_hat(&g).map_err(|e| e.to_string())?;
        let fast = compute_l_hat(&g).map_err(|e| e.to_string())?;
        let formula = closed_form_l_hat_dihedral(p);
        check(
            sweep.l_hat == formula && fast.l_hat == formula,
            format!(
                "p = {p}: sweep {} fast {} formula {formula}",
                sweep.l_hat, fast.l_hat
            ),
        )?;
        check(
            fast.l1_next == Some(formula + 2),
            format!("p = {p}: next covalency {:?}", fast.l1_next),
        )?;
        *trivial_violations += sweep
            .sweep
            .as_ref()
            .map_or(0, |s| s.trivial_bound_violations);
        rows.push(format!("{p}:{formula}"));
    }
    Ok(format!(
        "l_hat = 2*floor(sqrt(2p) - 1/2) - 1 for {}",
        rows.join(" ")
    ))
}

fn fpq_bound(trivial_violations: &mut u128) -> Outcome {
    let mut rows = Vec::new();
    for (p, q, expected) in [(31, 5, 21), (43, 3, 19), (61, 5, 31)] {
        let g = GroupTable::fpq(p, q).map_err(|e| e.to_string())?;
        check(p > 4 * q, "p >= 4q + 1")?;
        let fast = compute_l_hat(&g).map_err(|e| e.to_string())?;
        let sweep = verify_l_hat(&g).map_err(|e| e.to_string())?;
        let formula = closed_form_l_hat_fpq(p, q);
        check(
            fast.l_hat == formula && sweep.l_hat == formula && formula == expected,
            format!(
                "F_{p},{q}: fast {} sweep {} formula {formula} expected {expected}",
                fast.l_hat, sweep.l_hat
            ),
        )?;
        *trivial_violations += sweep
            .sweep
            .as_ref()
            .map_or(0, |s| s.trivial_bound_violations);
        rows.push(format!("F({p},{q}) = {formula}"));
    }
    Ok(format!("fast path = sweep = formula: {}", rows.join(", ")))
}

fn small_primes() -> Outcome {
    for p in [3u64, 5, 7] {
        let g = Arc::new(GroupTable::dihedral(p).map_err(|e| e.to_string())?);
        let rep = verify_l_hat(&g).map_err(|e| e.to_string())?;
        check(rep.l_hat == p, format!("p = {p}: l_hat = {}", rep.l_hat))?;
        let s = parse_subset_spec(g.clone(), "normal:X=;Y=y").map_err(|e| e.to_string())?;
        check(s.covalency() == p, "witness covalency")?;
        for spec in [closed_form_spectrum(&s), oracle_spectrum(&s)] {
            let values = spec.map_err(|e| e.to_string())?.sorted_values();
            let n = 2 * p as usize;
            let mut expected = vec![0.0; n];
            expected[0] = p as f64;
            expected[n - 1] = -(p as f64);
            let err = values
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            check(
                values.len() == n && err < ORACLE_TOLERANCE,
                format!("p = {p}: spectrum {values:?}"),
            )?;
        }
    }
    Ok("l_hat = p for p = 3, 5, 7; spectrum of all reflections is {p, 0 x (2p-2), -p}".into())
}

fn exceptional_lists() -> Outcome {
    let expected: [((u64, i64), &[u64]); 6] = [
        ((1, -1), &[29, 47, 197, 239, 389, 509, 719, 797, 2309, 2447]),
        ((1, 1), &[31, 71, 97, 127, 199, 241, 337, 449, 577, 647]),
        (
            (3, -1),
            &[139, 307, 359, 607, 919, 1399, 1619, 1979, 2239, 2659],
        ),
        (
            (3, 1),
            &[37, 109, 541, 757, 1009, 1297, 1621, 2377, 6841, 7561],
        ),
        ((3, 3), &[59, 83, 179, 263, 311, 419, 479, 683, 839, 1103]),
        ((1, -3), &[67, 157, 283, 643, 877, 1453, 3037, 4603, 5197]),
    ];
    let rows = scan(29, 8000).map_err(|e| e.to_string())?;
    let mut by_family: BTreeMap<(u64, i64), Vec<u64>> = BTreeMap::new();
    for r in rows
        .iter()
        .filter(|r| r.verdict == PrimeVerdict::Exceptional)
    {
        check(
            r.parity == Parity::Odd && r.in_family,
            format!("p = {} exceptional outside a family", r.p),
        )?;
        by_family.entry((r.r, r.c)).or_default().push(r.p);
    }
    check(by_family.len() == 6, "six families")?;
    for (key, prefix) in expected {
        let got = by_family.get(&key).cloned().unwrap_or_default();
        check(
            got.len() >= prefix.len() && got[..prefix.len()] == *prefix,
            format!("{key:?}: {got:?}"),
        )?;
    }
    check(!rows.iter().any(|r| r.p == 93), "93 is composite")?;
    let total: usize = by_family.values().map(Vec::len).sum();
    Ok(format!(
        "six prefixes reproduced; {total} exceptional primes in [29, 8000]"
    ))
}

fn route_agreement() -> Outcome {
    // classify_prime fails with a route disagreement if the two routes differ.
    let rows = scan(29, ROUTE_LIMIT).map_err(|e| e.to_string())?;
    let odd = rows.iter().filter(|r| r.parity == Parity::Odd).count();
    let exceptional = rows
        .iter()
        .filter(|r| r.verdict == PrimeVerdict::Exceptional)
        .count();
    let min_margin = rows
        .iter()
        .filter(|r| r.parity == Parity::Odd)
        .map(|r| r.margin.abs())
        .fold(f64::INFINITY, f64::min);
    Ok(format!(
        "{odd} odd-parity primes up to {ROUTE_LIMIT}, 0 disagreements, {exceptional} exceptional, min |mu1 - rb| {min_margin:.2e}"
    ))
}

fn hardy_littlewood() -> Outcome {
    let expected = [
        ((1, -3), 0.671043),
        ((1, -1), 1.03566),
        ((1, 1), 1.84998),
        ((3, -1), 1.14801),
        ((3, 1), 0.757353),
        ((3, 3), 1.38332),
    ];
    let mut worst: f64 = 0.0;
    for ((r, c), target) in expected {
        let f = QuadraticFamily::new(r, c).map_err(|e| e.to_string())?;
        let h = hl_constant(&f, HL_CUTOFF).map_err(|e| e.to_string())?;
        let d = (h.partial - target).abs();
        check(
            d <= HL_TOLERANCE,
            format!("({r},{c}): {} vs {target}", h.partial),
        )?;
        worst = worst.max(d);
    }
    Ok(format!(
        "six constants at cutoff {HL_CUTOFF}, max |delta| {worst:.2e}"
    ))
}

fn residues() -> Outcome {
    for (a, b) in [(29u64, 4u64), (35, 8), (40, 33)] {
        let r = residue_avoidance(a).map_err(|e| e.to_string())?;
        check(
            r.witnesses.contains(&b) && !r.residues.contains(&b),
            format!("({a}, {b}): {:?}", r.witnesses),
        )?;
    }
    Ok("(29,4), (35,8), (40,33) avoid every family".into())
}

fn extremality() -> Outcome {
    let mut notes = Vec::new();
    for p in [11, 13] {
        let e = exhaustive_extremality(p).map_err(|e| e.to_string())?;
        notes.push(format!("p={p} exhaustive {} subsets", e.subsets));
    }
    for p in [29, 31, 37] {
        let l = closed_form_l_hat_dihedral(p) + 1;
        let e = sample_extremality(p, l, EXTREMALITY_SAMPLES, SEED).map_err(|e| e.to_string())?;
        check(e.subsets > 0, "samples drawn")?;
        notes.push(format!(
            "p={p} sampled max mu {:.3} <= {:.3}",
            e.max_mu, e.mu1
        ));
    }
    Ok(format!("0 violations; {}", notes.join(", ")))
}

fn trivial_bound(from_sweeps: u128) -> Outcome {
    let mut bad = from_sweeps;
    let mut checked = 0u64;
    for p in [3, 5, 7, 11, 13] {
        let rep = tilde_l_exhaustive(p).map_err(|e| e.to_string())?;
        for lev in rep
            .levels
            .iter()
            .filter(|l| cayley_ramanujan::bounds::below_trivial_bound(l.l, 2 * p))
        {
            bad += lev.non_ramanujan as u128;
            checked += lev.subsets;
        }
    }
    for p in [29, 31, 37, 41, 43] {
        let rep = sample_trivial_bound(p, TRIVIAL_SAMPLES, SEED).map_err(|e| e.to_string())?;
        bad += rep.non_ramanujan as u128;
        checked += rep.subsets;
    }
    check(bad == 0, format!("{bad} counterexamples"))?;
    Ok(format!(
        "0 counterexamples among normal sweeps, {checked} exhaustive and sampled dihedral subsets"
    ))
}

fn main() {
    let start = Instant::now();
    let mut trivial_violations = 0u128;
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut run = |n: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        let tag = if out.is_ok() { "PASS" } else { "FAIL" };
        let detail = match &out {
            Ok(s) | Err(s) => s.clone(),
        };
        println!("criterion {n:>2} {tag} {name}: {detail} ({secs:.1}s)");
        results.push((n, name, out, secs));
    };
    run(1, "oracle equivalence", &mut oracle_equivalence);
    run(2, "dihedral normal-subset bound", &mut || {
        dihedral_bound(&mut trivial_violations)
    });
    run(3, "Frobenius normal-subset bound", &mut || {
        fpq_bound(&mut trivial_violations)
    });
    run(4, "small dihedral groups", &mut small_primes);
    run(5, "exceptional-prime lists", &mut exceptional_lists);
    run(6, "route agreement", &mut route_agreement);
    run(7, "Hardy-Littlewood constants", &mut hardy_littlewood);
    run(8, "residue avoidance", &mut residues);
    run(9, "extremal construction", &mut extremality);
    let sweeps = trivial_violations;
    run(10, "trivial bound", &mut || trivial_bound(sweeps));
    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!(
        "acceptance: {} passed, {failed} failed ({:.1}s)",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

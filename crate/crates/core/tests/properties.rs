use std::collections::HashSet;
use std::f64::consts::PI;
use std::sync::Arc;

use cayley_ramanujan::analytics::{family_primes, legendre, residue_avoidance, sieve_primes};
use cayley_ramanujan::arith::is_prime;
use cayley_ramanujan::bounds::{compute_l0, closed_form_l_hat_dihedral, covalency_lattice};
use cayley_ramanujan::cayley::{make_dihedral_subset, parse_subset_spec, CayleySubset, Mask};
use cayley_ramanujan::classifier::{
    classify_prime, f_r_eval, Parity, PrimeVerdict, QuadraticFamily,
};
use cayley_ramanujan::group::GroupTable;
use cayley_ramanujan::spectra::{dihedral_spectrum, normal_spectrum_of};
use proptest::prelude::*;

const GROUPS: [(u64, u64); 8] = [
    (7, 3),
    (13, 3),
    (11, 5),
    (31, 5),
    (43, 7),
    (29, 7),
    (19, 3),
    (41, 5),
];
const PRIMES: [u64; 9] = [3, 5, 7, 11, 13, 17, 19, 23, 29];

fn dihedral_subset() -> impl Strategy<Value = (u64, Vec<bool>, Vec<bool>)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| {
        let m = (p as usize - 1) / 2;
        (
            Just(p),
            prop::collection::vec(any::<bool>(), m),
            prop::collection::vec(any::<bool>(), p as usize),
        )
    })
}

fn build(p: u64, pairs: &[bool], s2: &[bool]) -> Option<CayleySubset> {
    let pu = p as usize;
    let mut s1 = vec![false; pu];
    for (i, &keep) in pairs.iter().enumerate() {
        s1[i + 1] = keep;
        s1[pu - i - 1] = keep;
    }
    make_dihedral_subset(Arc::new(GroupTable::dihedral(p).unwrap()), &s1, s2).ok()
}

proptest! {
    #[test]
    fn group_axioms(idx in 0usize..GROUPS.len(), a in 0usize..10_000, b in 0usize..10_000, c in 0usize..10_000) {
        let (p, q) = GROUPS[idx];
        let g = GroupTable::fpq(p, q).unwrap();
        let n = g.order();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.mul(g.identity(), b), b);
    }

    #[test]
    fn mask_hex_round_trip((p, pairs, s2) in dihedral_subset()) {
        if let Some(s) = build(p, &pairs, &s2) {
            let spec = format!("{s}");
            let again = parse_subset_spec(s.group_arc().clone(), &spec).unwrap();
            prop_assert_eq!(again.mask(), s.mask());
            prop_assert_eq!(Mask::from_hex(&s.to_hex(), s.group().order()).unwrap(), s.mask().clone());
        }
    }

    #[test]
    fn dihedral_spectrum_moments((p, pairs, s2) in dihedral_subset()) {
        if let Some(s) = build(p, &pairs, &s2) {
            let sp = dihedral_spectrum(&s).unwrap();
            let n = s.group().order();
            prop_assert_eq!(sp.total_multiplicity(), n);
            // tr A = 0 since 1 ∉ S; tr A² = |G| |S|.
            prop_assert!(sp.trace().abs() < 1e-8);
            prop_assert!((sp.trace_of_square() - (n * s.size()) as f64).abs() < 1e-7);
            prop_assert!((sp.entries[0].0 - s.size() as f64).abs() < 1e-9);
            prop_assert_eq!(s.covalency(), (n - s.size()) as u64);
        }
    }

    #[test]
    fn normal_dihedral_spectra_agree(p in prop::sample::select(PRIMES[2..].to_vec()), bits in any::<u32>()) {
        let g = Arc::new(GroupTable::dihedral(p).unwrap());
        let x: Vec<String> = (1..=(p - 1) / 2).filter(|a| bits >> a & 1 == 1).map(|a| a.to_string()).collect();
        let s = parse_subset_spec(g, &format!("normal:X={};Y=y", x.join(","))).unwrap();
        let a = dihedral_spectrum(&s).unwrap();
        let b = normal_spectrum_of(&s).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-9);
    }

    #[test]
    fn legendre_is_multiplicative(m in -10_000i64..10_000, n in -10_000i64..10_000, idx in 1usize..200) {
        let p = sieve_primes(1300).unwrap()[idx];
        prop_assert_eq!(legendre(m * n, p), legendre(m, p) * legendre(n, p));
    }

    #[test]
    fn lattice_chain_and_l0(idx in 0usize..GROUPS.len()) {
        let (p, q) = GROUPS[idx];
        let g = GroupTable::fpq(p, q).unwrap();
        let lat = covalency_lattice(&g);
        prop_assert!(lat.check_chain());
        let l0 = compute_l0(&lat, g.order() as u64);
        prop_assert!(((l0 + 2) * (l0 + 2)) as usize <= 4 * g.order());
    }
}

#[test]
fn discriminant_and_reduced_symbols_agree() {
    for f in QuadraticFamily::all() {
        let d = f.discriminant();
        for p in sieve_primes(10_000).unwrap().into_iter().skip(1) {
            if d % p as i64 != 0 {
                assert_eq!(legendre(d, p), legendre(f.reduced_c(), p), "{f} at {p}");
            }
        }
    }
}

#[test]
fn floor_identity_up_to_a_million() {
    for p in sieve_primes(1_000_000).unwrap().into_iter().skip(1) {
        let s = (8 * p).isqrt();
        let l_hat = closed_form_l_hat_dihedral(p);
        assert_eq!(l_hat, if s % 2 == 0 { s - 3 } else { s - 2 }, "p = {p}");
    }
}

#[test]
fn families_match_classifier_up_to_1e5() {
    let bound = 100_000;
    let family: HashSet<u64> = QuadraticFamily::all()
        .iter()
        .flat_map(|f| family_primes(f, bound))
        .collect();
    for p in sieve_primes(bound)
        .unwrap()
        .into_iter()
        .filter(|&p| p >= 29)
    {
        let c = classify_prime(p).unwrap();
        assert_eq!(
            c.verdict == PrimeVerdict::Exceptional,
            family.contains(&p),
            "p = {p}"
        );
        if c.parity == Parity::Even {
            assert_eq!(c.epsilon, 1);
        }
        assert_eq!(c.tilde_l, c.l_hat + c.epsilon);
    }
}

#[test]
fn residue_progressions_hold_ordinary_primes() {
    for (a, b) in [(29u64, 4u64), (35, 8), (40, 33)] {
        let r = residue_avoidance(a).unwrap();
        for f in QuadraticFamily::all() {
            for k in 0..3 * a {
                assert!(r
                    .residues
                    .contains(&(f.eval(k).rem_euclid(a as i128) as u64)));
            }
        }
        let primes: Vec<u64> = (0..)
            .map(|t| a * t + b)
            .take_while(|&n| n < 10_000)
            .filter(|&n| n >= 29 && is_prime(n))
            .collect();
        assert!(primes.len() >= 10, "({a}, {b}): {primes:?}");
        for p in primes {
            assert_eq!(
                classify_prime(p).unwrap().verdict,
                PrimeVerdict::Ordinary,
                "p = {p}"
            );
        }
    }
}

#[test]
fn f_r_asymptotics() {
    let k = 200u64;
    for f in QuadraticFamily::all() {
        let t = f.eval(k) as f64;
        let value = f_r_eval(f.r, k, t).unwrap() * k as f64;
        let b = (f.r + 3) as f64;
        let limit = (3.0 * b * b - 24.0 * f.c as f64 - 16.0 * PI * PI) / 24.0;
        assert!(
            ((value - limit) / limit).abs() < 0.1,
            "{f}: {value} vs {limit}"
        );
    }
}

#[test]
fn borderline_primes_keep_their_margins() {
    let c = classify_prime(139).unwrap();
    assert!((c.margin + 0.00318).abs() < 1e-5, "{}", c.margin);
    assert_eq!(c.verdict, PrimeVerdict::Exceptional);
    let c = classify_prime(79).unwrap();
    assert!((c.margin - 0.02212).abs() < 1e-5);
}

//! Covalency lattice, the trivial bound `l₀`, and the normal-subset bound `l̂`.
//!
//! A normal Cayley subset `S_{X,Y}` has covalency `l = 1 + a|H| + b|N|`, and distinct `(a, b)`
//! give distinct covalencies. When `r = (|N|-1)/|H| ≥ 4` the bound is `l̂ = l₀`, witnessed by any
//! subset at the next covalency with `Y` = all off-kernel classes, whose lifted eigenvalues all
//! equal `-l`. Otherwise the bound comes from an exhaustive sweep.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::cayley::{symmetric_units, NormalSubsetSpec};
use crate::error::{Error, Result};
use crate::group::{ClassKind, GroupTable};
use crate::spectra::{
    frobenius_eigenvalues, frobenius_spectrum, verdict, EPSILON_GUARD, TRIVIAL_EIGENVALUE_TOLERANCE,
};

/// Upper bound on the number of subsets visited by [`verify_l_hat`].
pub const SWEEP_GUARD: u128 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CovalencyLattice {
    /// Achievable `a_X`, ascending.
    pub a_values: Vec<u64>,
    /// Achievable `b_Y` over non-empty `Y`, ascending.
    pub b_values: Vec<u64>,
    pub kernel_size: u64,
    pub complement_size: u64,
}

impl CovalencyLattice {
    /// `l(a, b) = 1 + a|H| + b|N|`.
    pub fn l(&self, a: u64, b: u64) -> u64 {
        1 + a * self.complement_size + b * self.kernel_size
    }

    /// `(l, a, b)` for every lattice point, ascending in `l`.
    pub fn points(&self) -> Vec<(u64, u64, u64)> {
        let mut pts: Vec<_> = self
            .b_values
            .iter()
            .flat_map(|&b| self.a_values.iter().map(move |&a| (a, b)))
            .map(|(a, b)| (self.l(a, b), a, b))
            .collect();
        pts.sort_unstable();
        pts
    }

    pub fn values(&self) -> Vec<u64> {
        self.points().into_iter().map(|p| p.0).collect()
    }

    /// The chain `1 = l(a₁,b₁) < … < l(a_m,b₁) = |N| < b₂|N|+1 = l(a₁,b₂) < … = (b_n+1)|N|`.
    pub fn check_chain(&self) -> bool {
        let (n, m) = (self.kernel_size, self.a_values.len());
        if self.a_values.first() != Some(&0) || self.b_values.first() != Some(&0) || m == 0 {
            return false;
        }
        let mut prev = 0;
        for &b in &self.b_values {
            if self.l(self.a_values[0], b) != b * n + 1
                || self.l(self.a_values[m - 1], b) != (b + 1) * n
            {
                return false;
            }
            for &a in &self.a_values {
                let l = self.l(a, b);
                if l <= prev {
                    return false;
                }
                prev = l;
            }
        }
        self.l(0, 0) == 1
    }
}

fn unit_sizes(g: &GroupTable, units: &[Vec<usize>], kind: ClassKind) -> Vec<u64> {
    units
        .iter()
        .map(|u| {
            u.iter()
                .map(|&c| match kind {
                    ClassKind::Kernel => g.kernel_class_size(c),
                    _ => g.complement_class_size(c),
                })
                .sum()
        })
        .collect()
}

fn reachable_sums(sizes: &[u64], max: u64) -> Vec<bool> {
    let mut reach = vec![false; max as usize + 1];
    reach[0] = true;
    for &s in sizes {
        for t in (s as usize..=max as usize).rev() {
            if reach[t - s as usize] {
                reach[t] = true;
            }
        }
    }
    reach
}

fn count_sums(sizes: &[u64], target: u64) -> u128 {
    let mut ways = vec![0u128; target as usize + 1];
    ways[0] = 1;
    for &s in sizes {
        for t in (s as usize..=target as usize).rev() {
            ways[t] += ways[t - s as usize];
        }
    }
    ways[target as usize]
}

pub fn covalency_lattice(g: &GroupTable) -> CovalencyLattice {
    let r = g.ratio();
    let q = g.complement_size();
    let xs = unit_sizes(g, &symmetric_units(g, ClassKind::Kernel), ClassKind::Kernel);
    let ys = unit_sizes(
        g,
        &symmetric_units(g, ClassKind::OffKernel),
        ClassKind::OffKernel,
    );
    let mut a_values: Vec<u64> = reachable_sums(&xs, r)
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(s, _)| r - s as u64)
        .collect();
    a_values.sort_unstable();
    // Every unit has positive size, so a non-empty Y has a positive sum.
    let mut b_values: Vec<u64> = reachable_sums(&ys, q - 1)
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &ok)| ok)
        .map(|(s, _)| q - 1 - s as u64)
        .collect();
    b_values.sort_unstable();
    CovalencyLattice {
        a_values,
        b_values,
        kernel_size: g.kernel_size(),
        complement_size: q,
    }
}

/// `l ≤ 2(√n - 1)`, evaluated as `(l + 2)² ≤ 4n`.
pub fn below_trivial_bound(l: u64, order: u64) -> bool {
    let lhs = (l as u128 + 2).pow(2);
    lhs <= 4 * order as u128
}

/// `l₀ = max{l ∈ L | l ≤ 2(√|G| - 1)}`.
pub fn compute_l0(lattice: &CovalencyLattice, order: u64) -> u64 {
    lattice
        .values()
        .into_iter()
        .filter(|&l| below_trivial_bound(l, order))
        .max()
        .expect("l = 1 is always below the trivial bound")
}

/// `2⌊√(2p) - 1/2⌋ - 1`, with the floor taken as `⌊(isqrt(8p) - 1)/2⌋`.
pub fn closed_form_l_hat_dihedral(p: u64) -> u64 {
    let s = (8 * p).isqrt();
    2 * ((s - 1) / 2) - 1
}

/// `2q⌊(2√(pq) - 3)/(2q)⌋ + 1`, with the floor as the largest `t` with `(2qt + 3)² ≤ 4pq`.
pub fn closed_form_l_hat_fpq(p: u64, q: u64) -> u64 {
    let limit = 4 * p as u128 * q as u128;
    let fits = |t: u64| ((2 * q * t + 3) as u128).pow(2) <= limit;
    let mut t = 0;
    while fits(t + 1) {
        t += 1;
    }
    2 * q * t + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsMethod {
    FastPath,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsWitness {
    pub subset: String,
    pub covalency: u64,
    pub a: u64,
    pub b: u64,
    pub mu: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelStat {
    pub l: u64,
    pub a: u64,
    pub b: u64,
    pub subsets: u128,
    pub non_ramanujan: u128,
    pub borderline: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepStats {
    pub subsets_checked: u128,
    pub levels: Vec<LevelStat>,
    /// Non-Ramanujan subsets with `l ≤ 2(√|G| - 1)`; always zero if the trivial estimate holds.
    pub trivial_bound_violations: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub schema: u32,
    pub group: String,
    pub order: u64,
    pub ratio: u64,
    pub lattice: Vec<u64>,
    pub l0: u64,
    /// 1-based index into `A` with `l₀ = l(a_{i₀}, b₁)`, when `l₀` lies on the `b₁` row.
    pub i0: Option<usize>,
    pub l_hat: u64,
    /// `min{l ∈ L | l > l₀}`.
    pub l1_next: Option<u64>,
    /// Non-Ramanujan subset at the first covalency above `l̂`, if there is one.
    pub witness: Option<BoundsWitness>,
    pub method: BoundsMethod,
    pub sweep: Option<SweepStats>,
}

fn i0_of(lattice: &CovalencyLattice, l0: u64) -> Option<usize> {
    lattice
        .a_values
        .iter()
        .position(|&a| lattice.l(a, lattice.b_values[0]) == l0)
        .map(|i| i + 1)
}

fn next_above(lattice: &CovalencyLattice, l0: u64) -> Option<u64> {
    lattice.values().into_iter().find(|&l| l > l0)
}

/// Choose units whose sizes sum to `target`, or `None`.
fn pick_units_with_sum(sizes: &[u64], target: u64) -> Option<Vec<usize>> {
    let t = target as usize;
    // reach[i][s]: s is reachable with the first i units
    let mut reach = vec![vec![false; t + 1]; sizes.len() + 1];
    reach[0][0] = true;
    for (i, &s) in sizes.iter().enumerate() {
        for v in 0..=t {
            reach[i + 1][v] = reach[i][v] || (v >= s as usize && reach[i][v - s as usize]);
        }
    }
    if !reach[sizes.len()][t] {
        return None;
    }
    let mut out = Vec::new();
    let mut v = t;
    for i in (0..sizes.len()).rev() {
        if !reach[i][v] {
            out.push(i);
            v -= sizes[i] as usize;
        }
    }
    out.reverse();
    Some(out)
}

fn witness_from(g: &GroupTable, spec: &NormalSubsetSpec) -> Result<(BoundsWitness, bool)> {
    let sp = frobenius_spectrum(g, spec)?;
    let v = verdict(&sp);
    Ok((
        BoundsWitness {
            subset: spec.to_spec_string(g),
            covalency: spec.covalency(g),
            a: spec.a,
            b: spec.b,
            mu: v.mu,
            bound: v.bound,
        },
        v.is_ramanujan(),
    ))
}

/// `l̂` from the lattice and one witness when `r ≥ 4`, by exhaustive sweep otherwise.
pub fn compute_l_hat(g: &GroupTable) -> Result<BoundsReport> {
    if g.ratio() < 4 {
        return verify_l_hat(g);
    }
    let lattice = covalency_lattice(g);
    let order = g.order() as u64;
    let (n, h) = (g.kernel_size(), g.complement_size());
    let l0 = compute_l0(&lattice, order);

    // a_{i₀} = max{a ∈ A | a|H| + 3 ≤ 2√(|N||H|)}
    let a_i0 = *lattice
        .a_values
        .iter()
        .filter(|&&a| ((a * h + 3) as u128).pow(2) <= 4 * n as u128 * h as u128)
        .max()
        .ok_or_else(|| Error::InvariantViolation("no a satisfies the l0 inequality".into()))?;
    if lattice.l(a_i0, 0) != l0 || l0 >= n {
        return Err(Error::InvariantViolation(format!(
            "l0 = {l0} disagrees with l(a_i0, b1) = {} or is not below |N| = {n}",
            lattice.l(a_i0, 0)
        )));
    }
    let i0 = i0_of(&lattice, l0).expect("l0 lies on the b1 row");
    let a_next = lattice.a_values[i0];
    let l1_next = lattice.l(a_next, 0);

    // Witness: a_X = a_{i₀+1}, Y = every off-kernel class.
    let x_units = symmetric_units(g, ClassKind::Kernel);
    let sizes = unit_sizes(g, &x_units, ClassKind::Kernel);
    let chosen = pick_units_with_sum(&sizes, g.ratio() - a_next)
        .ok_or_else(|| Error::InvariantViolation(format!("a = {a_next} is not achievable")))?;
    let x: Vec<usize> = chosen
        .iter()
        .flat_map(|&i| x_units[i].iter().copied())
        .collect();
    let y: Vec<usize> = symmetric_units(g, ClassKind::OffKernel).concat();
    let spec = NormalSubsetSpec::from_classes(g, &x, &y)?;
    debug_assert_eq!(spec.covalency(g), l1_next);

    let raw = frobenius_eigenvalues(g, &spec)?;
    for (i, &lam) in raw.iter().enumerate().skip(1).take(h as usize - 1) {
        if (lam + l1_next as f64).abs() > 1e-10 {
            return Err(Error::InvariantViolation(format!(
                "lifted eigenvalue {i} is {lam}, expected -{l1_next}"
            )));
        }
    }
    let (witness, ramanujan) = witness_from(g, &spec)?;
    if ramanujan {
        return Err(Error::InvariantViolation(format!(
            "fast-path witness at l = {l1_next} is Ramanujan"
        )));
    }
    Ok(BoundsReport {
        schema: 1,
        group: g.spec_string(),
        order,
        ratio: g.ratio(),
        lattice: lattice.values(),
        l0,
        i0: Some(i0),
        l_hat: l0,
        l1_next: Some(l1_next),
        witness: Some(witness),
        method: BoundsMethod::FastPath,
        sweep: None,
    })
}

struct Sweep<'a> {
    x_vectors: &'a [Vec<f64>],
    x_sizes: &'a [u64],
    k: usize,
}

#[derive(Default)]
struct BranchOutcome {
    checked: u128,
    failures: u128,
    borderline: u128,
    first_failure: Option<Vec<usize>>,
}

impl Sweep<'_> {
    /// Depth-first over omitted X units `path` (strictly increasing), subtracting their
    /// eigenvalue contributions from `current`.
    fn walk(
        &self,
        current: &mut Vec<f64>,
        start: usize,
        remaining: u64,
        path: &mut Vec<usize>,
        out: &mut BranchOutcome,
    ) {
        if remaining == 0 {
            self.evaluate(current, path, out);
            return;
        }
        for i in start..self.x_sizes.len() {
            let s = self.x_sizes[i];
            if s > remaining {
                continue;
            }
            for (c, d) in current.iter_mut().zip(&self.x_vectors[i]) {
                *c -= d;
            }
            path.push(i);
            self.walk(current, i + 1, remaining - s, path, out);
            path.pop();
            for (c, d) in current.iter_mut().zip(&self.x_vectors[i]) {
                *c += d;
            }
        }
    }

    fn evaluate(&self, lambda: &[f64], path: &[usize], out: &mut BranchOutcome) {
        out.checked += 1;
        let k = self.k as f64;
        let mut mu: f64 = 0.0;
        for &v in &lambda[1..] {
            let a = v.abs();
            if (a - k).abs() > TRIVIAL_EIGENVALUE_TOLERANCE && a > mu {
                mu = a;
            }
        }
        let margin = mu - 2.0 * (k - 1.0).sqrt();
        if margin.abs() < EPSILON_GUARD {
            out.borderline += 1;
        } else if margin > 0.0 {
            out.failures += 1;
            if out.first_failure.is_none() {
                out.first_failure = Some(path.to_vec());
            }
        }
    }
}

/// Every normal subset at every covalency in ascending order, until the first covalency with a
/// non-Ramanujan subset. Returns the exact `l̂`.
pub fn verify_l_hat(g: &GroupTable) -> Result<BoundsReport> {
    let lattice = covalency_lattice(g);
    let order = g.order() as u64;
    let q = g.complement_size();
    let l0 = compute_l0(&lattice, order);

    let x_units = symmetric_units(g, ClassKind::Kernel);
    let y_units = symmetric_units(g, ClassKind::OffKernel);
    let x_sizes = unit_sizes(g, &x_units, ClassKind::Kernel);
    let y_sizes = unit_sizes(g, &y_units, ClassKind::OffKernel);
    let unit_vector = |x: &[usize], y: &[usize]| -> Result<Vec<f64>> {
        frobenius_eigenvalues(g, &NormalSubsetSpec::from_classes(g, x, y)?)
    };
    let x_vectors: Vec<Vec<f64>> = x_units
        .iter()
        .map(|u| unit_vector(u, &[]))
        .collect::<Result<_>>()?;
    let y_vectors: Vec<Vec<f64>> = y_units
        .iter()
        .map(|u| unit_vector(&[], u))
        .collect::<Result<_>>()?;
    let full_x: Vec<f64> = (0..x_vectors[0].len())
        .map(|i| x_vectors.iter().map(|v| v[i]).sum())
        .collect();

    // All non-empty Y-unit subsets, grouped later by b.
    let y_subsets: Vec<Vec<usize>> = (1u64..1 << y_units.len())
        .map(|bits| (0..y_units.len()).filter(|i| bits >> i & 1 == 1).collect())
        .collect();

    let mut stats = SweepStats {
        subsets_checked: 0,
        levels: Vec::new(),
        trivial_bound_violations: 0,
    };
    let mut l_hat = None;
    let mut witness = None;

    for (l, a, b) in lattice.points() {
        let ys: Vec<&Vec<usize>> = y_subsets
            .iter()
            .filter(|s| s.iter().map(|&i| y_sizes[i]).sum::<u64>() == q - 1 - b)
            .collect();
        let level_count = ys.len() as u128 * count_sums(&x_sizes, a);
        if stats.subsets_checked + level_count > SWEEP_GUARD {
            return Err(Error::Guard {
                what: "normal-subset sweep",
                value: stats.subsets_checked + level_count,
                limit: SWEEP_GUARD,
            });
        }
        let k = (order - l) as usize;
        let sweep = Sweep {
            x_vectors: &x_vectors,
            x_sizes: &x_sizes,
            k,
        };
        // One task per (Y choice, first omitted unit); the empty omission is its own task.
        let mut tasks: Vec<(usize, Option<usize>)> = Vec::new();
        for yi in 0..ys.len() {
            if a == 0 {
                tasks.push((yi, None));
            } else {
                tasks.extend(
                    (0..x_units.len())
                        .filter(|&i| x_sizes[i] <= a)
                        .map(|i| (yi, Some(i))),
                );
            }
        }
        let outcomes: Vec<(usize, BranchOutcome)> = tasks
            .par_iter()
            .map(|&(yi, first)| {
                let mut current = full_x.clone();
                for &u in ys[yi] {
                    for (c, d) in current.iter_mut().zip(&y_vectors[u]) {
                        *c += d;
                    }
                }
                let mut out = BranchOutcome::default();
                let mut path = Vec::new();
                match first {
                    None => sweep.evaluate(&current, &path, &mut out),
                    Some(i) => {
                        for (c, d) in current.iter_mut().zip(&x_vectors[i]) {
                            *c -= d;
                        }
                        path.push(i);
                        sweep.walk(&mut current, i + 1, a - x_sizes[i], &mut path, &mut out);
                    }
                }
                (yi, out)
            })
            .collect();

        let mut level = LevelStat {
            l,
            a,
            b,
            subsets: 0,
            non_ramanujan: 0,
            borderline: 0,
        };
        let mut first: Option<(usize, Vec<usize>)> = None;
        for (yi, out) in outcomes {
            level.subsets += out.checked;
            level.non_ramanujan += out.failures;
            level.borderline += out.borderline;
            if first.is_none() {
                if let Some(path) = out.first_failure {
                    first = Some((yi, path));
                }
            }
        }
        debug_assert_eq!(level.subsets, level_count);
        stats.subsets_checked += level.subsets;
        if below_trivial_bound(l, order) {
            stats.trivial_bound_violations += level.non_ramanujan;
        }
        let failed = level.non_ramanujan > 0;
        stats.levels.push(level);

        if let Some((yi, omitted)) = first {
            let x: Vec<usize> = (0..x_units.len())
                .filter(|i| !omitted.contains(i))
                .flat_map(|i| x_units[i].iter().copied())
                .collect();
            let y: Vec<usize> = ys[yi]
                .iter()
                .flat_map(|&i| y_units[i].iter().copied())
                .collect();
            let spec = NormalSubsetSpec::from_classes(g, &x, &y)?;
            let (w, ramanujan) = witness_from(g, &spec)?;
            if ramanujan {
                return Err(Error::InvariantViolation(format!(
                    "sweep flagged {} but its spectrum is Ramanujan",
                    w.subset
                )));
            }
            witness = Some(w);
        }
        if failed {
            break;
        }
        l_hat = Some(l);
    }
    let l_hat =
        l_hat.ok_or_else(|| Error::InvariantViolation("complete graph is not Ramanujan".into()))?;
    Ok(BoundsReport {
        schema: 1,
        group: g.spec_string(),
        order,
        ratio: g.ratio(),
        lattice: lattice.values(),
        l0,
        i0: i0_of(&lattice, l0),
        l_hat,
        l1_next: next_above(&lattice, l0),
        witness,
        method: BoundsMethod::Exhaustive,
        sweep: Some(stats),
    })
}

/// Visit every subset of `sizes` (as sorted index lists) whose sizes sum to `target`.
pub fn for_each_subset_with_sum<F>(sizes: &[u64], target: u64, mut f: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    fn go<F: FnMut(&[usize]) -> ControlFlow<()>>(
        sizes: &[u64],
        start: usize,
        remaining: u64,
        path: &mut Vec<usize>,
        f: &mut F,
    ) -> ControlFlow<()> {
        if remaining == 0 {
            return f(path);
        }
        for i in start..sizes.len() {
            if sizes[i] <= remaining {
                path.push(i);
                go(sizes, i + 1, remaining - sizes[i], path, f)?;
                path.pop();
            }
        }
        ControlFlow::Continue(())
    }
    let _ = go(sizes, 0, target, &mut Vec::new(), &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattices() {
        let l = covalency_lattice(&GroupTable::dihedral(11).unwrap());
        assert_eq!(l.values(), vec![1, 3, 5, 7, 9, 11]);
        assert_eq!(l.b_values, vec![0]);
        let l = covalency_lattice(&GroupTable::fpq(31, 5).unwrap());
        assert_eq!(l.a_values, vec![0, 2, 4, 6]);
        assert_eq!(l.b_values, vec![0, 2]);
        assert_eq!(l.values(), vec![1, 11, 21, 31, 63, 73, 83, 93]);
        assert!(l.check_chain());
        let l = covalency_lattice(&GroupTable::dihedral(3).unwrap());
        assert_eq!(l.values(), vec![1, 3]);
    }

    #[test]
    fn lattice_shapes_and_chain() {
        for p in [
            3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 101,
        ] {
            let l = covalency_lattice(&GroupTable::dihedral(p).unwrap());
            assert_eq!(l.a_values, (0..=(p - 1) / 2).collect::<Vec<_>>());
            assert_eq!(l.b_values, vec![0]);
            assert!(l.check_chain());
        }
        for (p, q) in [
            (7u64, 3u64),
            (13, 3),
            (31, 5),
            (43, 3),
            (61, 5),
            (43, 7),
            (211, 7),
        ] {
            let l = covalency_lattice(&GroupTable::fpq(p, q).unwrap());
            assert_eq!(
                l.a_values,
                (0..=(p - 1) / (2 * q)).map(|i| 2 * i).collect::<Vec<_>>()
            );
            assert_eq!(
                l.b_values,
                (0..(q - 1) / 2).map(|j| 2 * j).collect::<Vec<_>>()
            );
            assert!(l.check_chain());
        }
    }

    #[test]
    fn l0_values() {
        let g = GroupTable::dihedral(11).unwrap();
        assert_eq!(compute_l0(&covalency_lattice(&g), 22), 7);
        let g = GroupTable::fpq(31, 5).unwrap();
        assert_eq!(compute_l0(&covalency_lattice(&g), 155), 21);
        let g = GroupTable::dihedral(5).unwrap();
        assert_eq!(compute_l0(&covalency_lattice(&g), 10), 3);
    }

    #[test]
    fn trivial_bound_is_exact() {
        // 2(√22 - 1) ≈ 7.38
        assert!(below_trivial_bound(7, 22));
        assert!(!below_trivial_bound(8, 22));
        // (l + 2)² = 4n exactly: l = 2√n - 2 is allowed.
        assert!(below_trivial_bound(8, 25));
        assert!(!below_trivial_bound(9, 25));
    }

    #[test]
    fn closed_form_bounds() {
        assert_eq!(closed_form_l_hat_dihedral(11), 7);
        assert_eq!(closed_form_l_hat_dihedral(101), 25);
        assert_eq!(closed_form_l_hat_fpq(31, 5), 21);
        // Floating-point evaluation agrees away from integer boundaries.
        for p in (11u64..5000).filter(|&p| crate::arith::is_prime(p)) {
            let f = 2.0 * ((2.0 * p as f64).sqrt() - 0.5).floor() - 1.0;
            assert_eq!(closed_form_l_hat_dihedral(p), f as u64);
        }
    }

    #[test]
    fn fast_path_d22() {
        let r = compute_l_hat(&GroupTable::dihedral(11).unwrap()).unwrap();
        assert_eq!(r.method, BoundsMethod::FastPath);
        assert_eq!((r.l0, r.l_hat, r.l1_next), (7, 7, Some(9)));
        assert_eq!(r.i0, Some(4));
        let w = r.witness.unwrap();
        assert_eq!(w.covalency, 9);
        assert!(w.mu > w.bound);
    }

    #[test]
    fn small_dihedral_uses_sweep() {
        for p in [3, 5, 7] {
            let r = compute_l_hat(&GroupTable::dihedral(p).unwrap()).unwrap();
            assert_eq!(r.method, BoundsMethod::Exhaustive);
            assert_eq!(r.l0, p - 2);
            assert_eq!(r.l_hat, p);
            assert!(r.witness.is_none());
        }
    }

    #[test]
    fn exhaustive_matches_fast_path_d22() {
        let g = GroupTable::dihedral(11).unwrap();
        let ex = verify_l_hat(&g).unwrap();
        let th = compute_l_hat(&g).unwrap();
        assert_eq!(ex.l_hat, th.l_hat);
        let sweep = ex.sweep.unwrap();
        assert_eq!(sweep.trivial_bound_violations, 0);
        // Levels l = 1, 3, 5, 7 pass; l = 9 fails for every subset.
        let counts: Vec<u128> = sweep.levels.iter().map(|s| s.subsets).collect();
        assert_eq!(counts, vec![1, 5, 10, 10, 5]);
        assert_eq!(sweep.levels[4].non_ramanujan, 5);
    }

    #[test]
    fn exhaustive_f13_3() {
        let g = GroupTable::fpq(13, 3).unwrap();
        assert_eq!(g.ratio(), 4);
        assert_eq!(
            verify_l_hat(&g).unwrap().l_hat,
            compute_l_hat(&g).unwrap().l_hat
        );
    }

    #[test]
    fn subset_sum_helpers() {
        assert_eq!(count_sums(&[1; 30], 9), 14_307_150);
        let mut seen = Vec::new();
        for_each_subset_with_sum(&[2, 2, 2, 2], 4, |p| {
            seen.push(p.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(pick_units_with_sum(&[2, 2, 2], 4), Some(vec![0, 1]));
        assert_eq!(pick_units_with_sum(&[2, 2, 2], 3), None);
    }
}

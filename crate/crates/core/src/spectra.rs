//! Closed-form spectra of Cayley graphs.
//!
//! * [`normal_spectrum`]: one eigenvalue `λ_χ = (1/χ(1)) Σ_{s∈S} χ(s)` per irreducible
//!   character, with multiplicity `χ(1)²`, read off the character table.
//! * [`frobenius_spectrum`]: the same multiset from the specialised Frobenius formulas, which
//!   only use class sizes and the characters of `N` and `H`.
//! * [`dihedral_spectrum`]: any Cayley subset of `D_2p`, from the sums `z_j`, `w_j`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::CompensatedSum;
use crate::cayley::{CayleySubset, NormalSubsetSpec};
use crate::error::{Error, Result};
use crate::group::{character_table, CharacterKind, CharacterTable, GroupTable};

/// Width of the band around `2√(k-1)` reported as borderline.
pub const EPSILON_GUARD: f64 = 1e-9;
/// Largest imaginary residue tolerated on a character-sum eigenvalue.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;
/// Eigenvalues within this distance of `±k` count as trivial.
pub const TRIVIAL_EIGENVALUE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    CharacterFormula,
    FrobeniusFormula,
    ZwFormula,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// `(eigenvalue, multiplicity)`, sorted by descending eigenvalue. Nearby values are not merged.
    pub entries: Vec<(f64, usize)>,
    pub valency: usize,
    pub source: SpectrumSource,
}

impl Spectrum {
    pub fn new(mut entries: Vec<(f64, usize)>, valency: usize, source: SpectrumSource) -> Self {
        entries.sort_by(|a, b| b.0.total_cmp(&a.0));
        Spectrum {
            entries,
            valency,
            source,
        }
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Eigenvalues repeated by multiplicity, descending.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|&(x, m)| std::iter::repeat_n(x, m))
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(x, m)| x * m as f64)
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn trace_of_square(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(x, m)| x * x * m as f64)
            .collect::<CompensatedSum>()
            .value()
    }

    /// Multiplicities sum to `|G|`, the top eigenvalue is `k`, `tr A = 0` and `tr A² = |G| k`.
    pub fn check_invariants(&self, order: usize) -> std::result::Result<(), String> {
        if self.total_multiplicity() != order {
            return Err(format!(
                "multiplicities sum to {}, expected {order}",
                self.total_multiplicity()
            ));
        }
        let k = self.valency as f64;
        let top = self.entries.first().map(|e| e.0).unwrap_or(f64::NAN);
        if (top - k).abs() > 1e-8 {
            return Err(format!("largest eigenvalue {top} differs from valency {k}"));
        }
        let tr = self.trace();
        if tr.abs() > 1e-8 * order as f64 {
            return Err(format!("trace {tr} is not zero"));
        }
        let tr2 = self.trace_of_square();
        if (tr2 - order as f64 * k).abs() > 1e-6 * order as f64 {
            return Err(format!(
                "trace of square {tr2} differs from |G||S| = {}",
                order as f64 * k
            ));
        }
        Ok(())
    }

    /// Largest absolute difference of the sorted eigenvalue lists, or infinity on size mismatch.
    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        let a = self.sorted_values();
        let b = other.sorted_values();
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Ramanujan,
    NotRamanujan,
    /// `|μ - 2√(k-1)| < ε_guard`; counts as Ramanujan unless a finer recomputation says otherwise.
    Borderline,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RamanujanVerdict {
    pub mu: f64,
    pub bound: f64,
    pub status: VerdictStatus,
    pub margin: f64,
}

impl RamanujanVerdict {
    pub fn from_mu(mu: f64, valency: usize) -> Self {
        let bound = 2.0 * (valency.saturating_sub(1) as f64).sqrt();
        let margin = mu - bound;
        let status = if margin.abs() < EPSILON_GUARD {
            VerdictStatus::Borderline
        } else if margin < 0.0 {
            VerdictStatus::Ramanujan
        } else {
            VerdictStatus::NotRamanujan
        };
        RamanujanVerdict {
            mu,
            bound,
            status,
            margin,
        }
    }

    pub fn is_ramanujan(&self) -> bool {
        self.status != VerdictStatus::NotRamanujan
    }
}

/// `μ = max{|λ| : |λ| ≠ k}`, zero when only `±k` occur.
pub fn nontrivial_mu(values: impl IntoIterator<Item = f64>, valency: usize) -> f64 {
    let k = valency as f64;
    values
        .into_iter()
        .map(f64::abs)
        .filter(|a| (a - k).abs() > TRIVIAL_EIGENVALUE_TOLERANCE)
        .fold(0.0, f64::max)
}

pub fn verdict(spec: &Spectrum) -> RamanujanVerdict {
    let mu = nontrivial_mu(spec.entries.iter().map(|e| e.0), spec.valency);
    RamanujanVerdict::from_mu(mu, spec.valency)
}

fn real_or_error(z: Complex64, row: usize) -> Result<f64> {
    if z.im.abs() > IMAGINARY_TOLERANCE {
        return Err(Error::ImaginaryResidue { row, imag: z.im });
    }
    Ok(z.re)
}

/// `λ_χ` for every row of the character table, with multiplicity `χ(1)²`.
pub fn normal_spectrum(
    g: &GroupTable,
    table: &CharacterTable,
    spec: &NormalSubsetSpec,
) -> Result<Spectrum> {
    let classes: Vec<usize> = spec
        .x_classes
        .iter()
        .chain(&spec.y_classes)
        .copied()
        .collect();
    let mut entries = Vec::with_capacity(table.rows.len());
    for (i, row) in table.rows.iter().enumerate() {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for &c in &classes {
            let v = row.values[c] * table.class_sizes[c] as f64;
            re.add(v.re);
            im.add(v.im);
        }
        let lambda = Complex64::new(re.value(), im.value()) / row.degree as f64;
        entries.push((
            real_or_error(lambda, i)?,
            (row.degree * row.degree) as usize,
        ));
    }
    Ok(Spectrum::new(
        entries,
        spec.size(g),
        SpectrumSource::CharacterFormula,
    ))
}

/// Normal-subset spectrum of a [`CayleySubset`]; fails with `NotNormal` for other subsets.
pub fn normal_spectrum_of(s: &CayleySubset) -> Result<Spectrum> {
    let spec = s.as_normal_spec()?;
    let table = character_table(s.group())?;
    normal_spectrum(s.group(), &table, &spec)
}

/// Eigenvalues from the Frobenius formulas, in the row order of [`character_table`]
/// (trivial, `χ_α` for `α = 1..q`, `φ_β` for `β` in the coset representatives).
///
/// `Y` may be empty here; the formulas are linear in the chosen classes.
pub fn frobenius_eigenvalues(g: &GroupTable, spec: &NormalSubsetSpec) -> Result<Vec<f64>> {
    let (p, q) = (g.kernel_size(), g.complement_size());
    let classes = g.conjugacy_classes();
    let n_sum: u64 = spec.x_classes.iter().map(|&c| g.kernel_class_size(c)).sum();
    let h_sum: u64 = spec
        .y_classes
        .iter()
        .map(|&c| g.complement_class_size(c))
        .sum();

    let mut out = Vec::with_capacity(classes.len());
    // λ_1 = |H| Σ_X |Conj_N(x)| + |N| Σ_Y |Conj_H(y)|
    out.push((q * n_sum + p * h_sum) as f64);

    // λ_{χ_α} = |H| Σ_X |Conj_N(x)| + |N| Σ_Y χ_α(y) |Conj_H(y)|   (χ_α(1) = 1)
    for alpha in 1..q {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for &c in &spec.y_classes {
            let (_, b) = g.decompose(classes[c].representative);
            let angle = 2.0 * PI * ((alpha * b) % q) as f64 / q as f64;
            let size = g.complement_class_size(c) as f64;
            re.add(angle.cos() * size);
            im.add(angle.sin() * size);
        }
        let lambda = Complex64::new(
            (q * n_sum) as f64 + p as f64 * re.value(),
            p as f64 * im.value(),
        );
        out.push(real_or_error(lambda, out.len())?);
    }

    // λ_{φ_β} = (1/ψ_β(1)) Σ_X Σ_{z∈H} ψ_β(x^z) |Conj_N(x)|,  ψ_β(x^a) = ω^{βa}
    for beta in g.coset_representatives() {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for &c in &spec.x_classes {
            let x = classes[c].representative;
            let size = g.kernel_class_size(c) as f64;
            for b in 0..q {
                let (a, _) = g.decompose(g.conjugate(x, g.element(0, b)));
                let angle = 2.0 * PI * ((beta * a) % p) as f64 / p as f64;
                re.add(angle.cos() * size);
                im.add(angle.sin() * size);
            }
        }
        out.push(real_or_error(
            Complex64::new(re.value(), im.value()),
            out.len(),
        )?);
    }
    Ok(out)
}

/// Multiplicities `1`, `χ_α(1)² = 1` and `|H|² ψ_β(1)² = |H|²` matching [`frobenius_eigenvalues`].
pub fn frobenius_multiplicities(g: &GroupTable) -> Vec<usize> {
    let q = g.complement_size() as usize;
    let k = g.ratio() as usize;
    std::iter::repeat_n(1, q)
        .chain(std::iter::repeat_n(q * q, k))
        .collect()
}

pub fn frobenius_spectrum(g: &GroupTable, spec: &NormalSubsetSpec) -> Result<Spectrum> {
    let values = frobenius_eigenvalues(g, spec)?;
    let entries = values
        .into_iter()
        .zip(frobenius_multiplicities(g))
        .collect();
    Ok(Spectrum::new(
        entries,
        spec.size(g),
        SpectrumSource::FrobeniusFormula,
    ))
}

/// `z_j = Σ_{x^a∈S₁} ω^{ja}` and `w_j = Σ_{x^a y∈S₂} ω^{ja}` for `j ≥ 1`, with
/// `z_0 = |S₁| + |S₂|` and `w_0 = |S₁| - |S₂|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DihedralSpectrumData {
    pub z: Vec<f64>,
    pub w: Vec<Complex64>,
}

impl DihedralSpectrumData {
    /// `|μ_j| = |z_j| + |w_j|` for `j ≥ 1`.
    pub fn abs_mu(&self, j: usize) -> f64 {
        self.z[j].abs() + self.w[j].norm()
    }
}

/// `cos` and `sin` of `2π m / p` for `m in 0..p`.
pub fn unit_circle_table(p: u64) -> (Vec<f64>, Vec<f64>) {
    (0..p)
        .map(|m| {
            let t = 2.0 * PI * m as f64 / p as f64;
            (t.cos(), t.sin())
        })
        .unzip()
}

pub fn dihedral_zw(s: &CayleySubset) -> Result<DihedralSpectrumData> {
    let g = s.group();
    if !g.is_dihedral() {
        return Err(Error::UnsupportedFamily(g.spec_string()));
    }
    let p = g.kernel_size();
    let pu = p as usize;
    let s1: Vec<u64> = (0..p).filter(|&a| s.contains(a as usize)).collect();
    let s2: Vec<u64> = (0..p).filter(|&a| s.contains(pu + a as usize)).collect();
    let (cos, sin) = unit_circle_table(p);

    let mut z = vec![0.0; pu];
    let mut w = vec![Complex64::new(0.0, 0.0); pu];
    z[0] = (s1.len() + s2.len()) as f64;
    w[0] = Complex64::new(s1.len() as f64 - s2.len() as f64, 0.0);
    for j in 1..p {
        let mut zr = CompensatedSum::default();
        let mut zi = CompensatedSum::default();
        for &a in &s1 {
            let m = ((j * a) % p) as usize;
            zr.add(cos[m]);
            zi.add(sin[m]);
        }
        real_or_error(Complex64::new(zr.value(), zi.value()), j as usize)?;
        z[j as usize] = zr.value();
        let mut wr = CompensatedSum::default();
        let mut wi = CompensatedSum::default();
        for &a in &s2 {
            let m = ((j * a) % p) as usize;
            wr.add(cos[m]);
            wi.add(sin[m]);
        }
        w[j as usize] = Complex64::new(wr.value(), wi.value());
    }
    Ok(DihedralSpectrumData { z, w })
}

/// `{z_0, w_0} ∪ {z_j ± |w_j| : 1 ≤ j < p}`.
pub fn dihedral_spectrum_from_zw(data: &DihedralSpectrumData, valency: usize) -> Spectrum {
    let mut entries = Vec::with_capacity(2 * data.z.len());
    entries.push((data.z[0], 1));
    entries.push((data.w[0].re, 1));
    for j in 1..data.z.len() {
        let wn = data.w[j].norm();
        entries.push((data.z[j] + wn, 1));
        entries.push((data.z[j] - wn, 1));
    }
    Spectrum::new(entries, valency, SpectrumSource::ZwFormula)
}

pub fn dihedral_spectrum(s: &CayleySubset) -> Result<Spectrum> {
    Ok(dihedral_spectrum_from_zw(&dihedral_zw(s)?, s.size()))
}

/// Spectrum of any subset the closed forms cover: `z/w` for dihedral groups, characters otherwise.
pub fn closed_form_spectrum(s: &CayleySubset) -> Result<Spectrum> {
    if s.group().is_dihedral() {
        dihedral_spectrum(s)
    } else {
        normal_spectrum_of(s)
    }
}

/// Kind of each row of [`character_table`], in order; handy for labelling spectra.
pub fn row_kinds(table: &CharacterTable) -> Vec<CharacterKind> {
    table.rows.iter().map(|r| r.kind).collect()
}

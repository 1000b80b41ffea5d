//! Dihedral groups `D_2p` and the Frobenius groups `F_{p,q} = Z_p ⋊_u Z_q` as concrete
//! finite groups, with conjugacy classes and character tables.
//!
//! Both families are semidirect products `N ⋊ H` with `N = <x> ≅ Z_p` and
//! `H = <y> ≅ Z_q`, subject to `y^{-1} x y = x^u`. The dihedral group is the case
//! `q = 2`, `u = p - 1`. The element `x^a y^b` is stored at index `a + p·b`, so rotations
//! (kernel elements) occupy `0..p` and the identity is index `0`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{is_prime, multiplicative_order, pow_mod};
use crate::error::{Error, Result};

/// Largest group order for which the full multiplication table is materialized.
pub const TABLE_ORDER_LIMIT: usize = 4096;

/// Largest number of conjugacy classes for which a character table is built.
pub const CHARACTER_TABLE_CLASS_LIMIT: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupFamily {
    Dihedral { m: u64 },
    FrobeniusPq { p: u64, q: u64, u: u64 },
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupFamily::Dihedral { m } => write!(f, "d2p:{m}"),
            GroupFamily::FrobeniusPq { p, q, .. } => write!(f, "fpq:{p},{q}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Identity,
    Kernel,
    OffKernel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    /// Smallest element index in the class.
    pub representative: usize,
    /// Sorted element indices.
    pub members: Vec<usize>,
    pub is_symmetric: bool,
    pub kind: ClassKind,
    /// Index (into the class list) of the class of inverses.
    pub inverse_class: usize,
}

impl ConjugacyClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A finite group `Z_p ⋊_u Z_q` in the fixed element encoding.
#[derive(Debug, Clone)]
pub struct GroupTable {
    family: GroupFamily,
    p: u64,
    q: u64,
    u: u64,
    /// `u^{-b} mod p` for `b in 0..q`.
    u_inv_pow: Vec<u64>,
    /// `u^{b} mod p` for `b in 0..q`.
    u_pow: Vec<u64>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
}

impl GroupTable {
    /// The dihedral group `D_2p = <x, y | x^p = y^2 = 1, y^{-1} x y = x^{-1}>` for an odd prime `p`.
    pub fn dihedral(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidParameter(format!(
                "dihedral parameter must be an odd prime >= 3, got {p}"
            )));
        }
        Ok(Self::semidirect(
            GroupFamily::Dihedral { m: p },
            p,
            2,
            p - 1,
        ))
    }

    /// `F_{p,q} = <x, y | x^p = y^q = 1, y^{-1} x y = x^u>` where `u` is the smallest integer in
    /// `2..p` of multiplicative order exactly `q` modulo `p`.
    pub fn fpq(p: u64, q: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidParameter(format!(
                "p must be an odd prime, got {p}"
            )));
        }
        if q < 3 || q.is_multiple_of(2) || !is_prime(q) {
            return Err(Error::InvalidParameter(format!(
                "q must be an odd prime, got {q}"
            )));
        }
        if !(p - 1).is_multiple_of(q) {
            return Err(Error::InvalidParameter(format!(
                "q = {q} does not divide p - 1 = {}",
                p - 1
            )));
        }
        let u = (2..p)
            .find(|&u| multiplicative_order(u, p) == Some(q))
            .expect("Z_p^x is cyclic, so an element of order q exists");
        Ok(Self::semidirect(
            GroupFamily::FrobeniusPq { p, q, u },
            p,
            q,
            u,
        ))
    }

    fn semidirect(family: GroupFamily, p: u64, q: u64, u: u64) -> Self {
        let u_inv = pow_mod(u, q - 1, p);
        let u_pow: Vec<u64> = (0..q).map(|b| pow_mod(u, b, p)).collect();
        let u_inv_pow: Vec<u64> = (0..q).map(|b| pow_mod(u_inv, b, p)).collect();
        let mut g = GroupTable {
            family,
            p,
            q,
            u,
            u_inv_pow,
            u_pow,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        g.classes = compute_conjugacy_classes(&g);
        let mut class_of = vec![0u32; g.order()];
        for (i, c) in g.classes.iter().enumerate() {
            for &m in &c.members {
                class_of[m] = i as u32;
            }
        }
        g.class_of = class_of;
        g
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn is_dihedral(&self) -> bool {
        matches!(self.family, GroupFamily::Dihedral { .. })
    }

    pub fn order(&self) -> usize {
        (self.p * self.q) as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// `|N| = p`.
    pub fn kernel_size(&self) -> u64 {
        self.p
    }

    /// `|H| = q`.
    pub fn complement_size(&self) -> u64 {
        self.q
    }

    /// `r = (|N| - 1) / |H|`.
    pub fn ratio(&self) -> u64 {
        (self.p - 1) / self.q
    }

    /// The twisting exponent `u` with `y^{-1} x y = x^u`.
    pub fn twist(&self) -> u64 {
        self.u
    }

    /// Index of `x^a y^b`.
    #[inline]
    pub fn element(&self, a: u64, b: u64) -> usize {
        ((a % self.p) + self.p * (b % self.q)) as usize
    }

    /// `(a, b)` with `g = x^a y^b`.
    #[inline]
    pub fn decompose(&self, g: usize) -> (u64, u64) {
        let g = g as u64;
        (g % self.p, g / self.p)
    }

    #[inline]
    pub fn in_kernel(&self, g: usize) -> bool {
        (g as u64) < self.p
    }

    /// `(x^a y^b)(x^c y^d) = x^{a + c·u^{-b}} y^{b + d}`.
    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        let (a, b) = self.decompose(g);
        let (c, d) = self.decompose(h);
        let e = (a + c * self.u_inv_pow[b as usize]) % self.p;
        self.element(e, b + d)
    }

    /// `(x^a y^b)^{-1} = x^{-a·u^b} y^{-b}`.
    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        let (a, b) = self.decompose(g);
        let e = (self.p - (a * self.u_pow[b as usize]) % self.p) % self.p;
        self.element(e, self.q - b)
    }

    /// `g^h = h^{-1} g h`.
    #[inline]
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.inv(h), self.mul(g, h))
    }

    /// Row-major `order × order` multiplication table.
    pub fn multiplication_table(&self) -> Result<Vec<u32>> {
        let n = self.order();
        if n > TABLE_ORDER_LIMIT {
            return Err(Error::Guard {
                what: "multiplication table order",
                value: n as u128,
                limit: TABLE_ORDER_LIMIT as u128,
            });
        }
        let mut t = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                t.push(self.mul(g, h) as u32);
            }
        }
        Ok(t)
    }

    pub fn inverse_table(&self) -> Vec<u32> {
        (0..self.order()).map(|g| self.inv(g) as u32).collect()
    }

    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g] as usize
    }

    /// `|Conj_N(x)| = |Conj_G(x)| / |H|` for a kernel class.
    pub fn kernel_class_size(&self, class: usize) -> u64 {
        self.classes[class].len() as u64 / self.q
    }

    /// `|Conj_H(y)| = |Conj_G(y)| / |N|` for an off-kernel class.
    pub fn complement_class_size(&self, class: usize) -> u64 {
        self.classes[class].len() as u64 / self.p
    }

    /// Smallest member of each coset of `<u>` in `Z_p^×`, ascending.
    pub fn coset_representatives(&self) -> Vec<u64> {
        let mut seen = vec![false; self.p as usize];
        let mut reps = Vec::new();
        for v in 1..self.p {
            if seen[v as usize] {
                continue;
            }
            reps.push(v);
            for &s in &self.u_pow {
                seen[((v * s) % self.p) as usize] = true;
            }
        }
        reps
    }

    /// The subgroup `<u> ⊂ Z_p^×` as a list `u^0, ..., u^{q-1}`.
    pub fn twist_powers(&self) -> &[u64] {
        &self.u_pow
    }

    /// Spec string, `d2p:<p>` or `fpq:<p>,<q>`.
    pub fn spec_string(&self) -> String {
        self.family.to_string()
    }
}

/// Partition of the group into conjugacy classes, computed from orbits of the conjugation
/// action by the generators `x` and `y`.
pub fn compute_conjugacy_classes(g: &GroupTable) -> Vec<ConjugacyClass> {
    let n = g.order();
    let gens = [g.element(1, 0), g.element(0, 1)];
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start];
        let mut frontier = vec![start];
        while let Some(e) = frontier.pop() {
            for &s in &gens {
                let c = g.conjugate(e, s);
                if !seen[c] {
                    seen[c] = true;
                    members.push(c);
                    frontier.push(c);
                }
            }
        }
        members.sort_unstable();
        let kind = if start == g.identity() {
            ClassKind::Identity
        } else if g.in_kernel(start) {
            ClassKind::Kernel
        } else {
            ClassKind::OffKernel
        };
        classes.push(ConjugacyClass {
            representative: members[0],
            members,
            is_symmetric: false,
            kind,
            inverse_class: 0,
        });
    }
    // Classes are discovered in order of their smallest member.
    let mut class_of = vec![0usize; n];
    for (i, c) in classes.iter().enumerate() {
        for &m in &c.members {
            class_of[m] = i;
        }
    }
    for i in 0..classes.len() {
        let inv_class = class_of[g.inv(classes[i].representative)];
        classes[i].inverse_class = inv_class;
        classes[i].is_symmetric = inv_class == i;
    }
    classes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CharacterKind {
    Trivial,
    /// `χ_α`, lifted from a non-trivial character of `H`.
    Lifted {
        alpha: u64,
    },
    /// `φ_β = Ind(ψ_β)` for the character `ψ_β(x^a) = ω^{βa}` of `N`.
    Induced {
        beta: u64,
    },
}

#[derive(Debug, Clone)]
pub struct Character {
    pub kind: CharacterKind,
    pub degree: u64,
    /// One value per conjugacy class, in class order.
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub rows: Vec<Character>,
    pub class_sizes: Vec<usize>,
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    /// `Σ_classes |c| χ(c) conj(χ'(c))`.
    pub fn inner_product(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i]
            .values
            .iter()
            .zip(&self.rows[j].values)
            .zip(&self.class_sizes)
            .map(|((a, b), &n)| a * b.conj() * n as f64)
            .sum()
    }
}

fn root_of_unity(num: u64, den: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (num % den) as f64 / den as f64)
}

/// Character table following the Frobenius structure: the trivial character, `q - 1` characters
/// lifted from `H`, and `(p - 1)/q` characters induced from `N`.
pub fn character_table(g: &GroupTable) -> Result<CharacterTable> {
    let classes = g.conjugacy_classes();
    if classes.len() > CHARACTER_TABLE_CLASS_LIMIT {
        return Err(Error::Guard {
            what: "character table class count",
            value: classes.len() as u128,
            limit: CHARACTER_TABLE_CLASS_LIMIT as u128,
        });
    }
    let (p, q) = (g.kernel_size(), g.complement_size());
    let class_sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let mut rows = Vec::with_capacity(classes.len());

    rows.push(Character {
        kind: CharacterKind::Trivial,
        degree: 1,
        values: vec![Complex64::new(1.0, 0.0); classes.len()],
    });
    for alpha in 1..q {
        let values = classes
            .iter()
            .map(|c| {
                let (_, b) = g.decompose(c.representative);
                root_of_unity(alpha * b, q)
            })
            .collect();
        rows.push(Character {
            kind: CharacterKind::Lifted { alpha },
            degree: 1,
            values,
        });
    }
    for beta in g.coset_representatives() {
        let values = classes
            .iter()
            .map(|c| {
                let (a, b) = g.decompose(c.representative);
                if b != 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    g.twist_powers()
                        .iter()
                        .map(|&s| root_of_unity((beta * a % p) * s % p, p))
                        .sum()
                }
            })
            .collect();
        rows.push(Character {
            kind: CharacterKind::Induced { beta },
            degree: q,
            values,
        });
    }
    Ok(CharacterTable { rows, class_sizes })
}

/// Parse `d2p:<p>` or `fpq:<p>,<q>`.
pub fn parse_group_spec(s: &str) -> Result<GroupTable> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("expected an integer, got {t:?}")))
    };
    if let Some(rest) = s.strip_prefix("d2p:") {
        GroupTable::dihedral(parse(rest)?)
    } else if let Some(rest) = s.strip_prefix("fpq:") {
        let (p, q) = rest
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected fpq:<p>,<q>, got {s:?}")))?;
        GroupTable::fpq(parse(p)?, parse(q)?)
    } else {
        Err(Error::Parse(format!(
            "unknown group spec {s:?} (expected d2p:<p> or fpq:<p>,<q>)"
        )))
    }
}

//! Cayley subsets: validation, the dihedral `S = S₁ ⊔ S₂` split, normal subsets built from
//! conjugacy classes, the interval construction, and exhaustive enumeration of normal subsets.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ClassKind, GroupTable};
use crate::oracle::DenseSymmetricMatrix;

/// Upper bound on the number of normal subsets yielded by [`enumerate_normal_subsets`].
pub const NORMAL_ENUMERATION_GUARD: u128 = 1 << 24;

/// Fixed-width bitset over element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    words: Vec<u64>,
    len: usize,
}

impl Mask {
    pub fn new(len: usize) -> Self {
        Mask {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Mask::new(len);
        for i in indices {
            m.insert(i);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.len,
            "index {i} out of range for mask of length {}",
            self.len
        );
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    /// Little-endian hex: byte `i` holds elements `8i..8i+8`, least significant bit first,
    /// and bytes are written in increasing `i`, two lowercase digits each.
    pub fn to_hex(&self) -> String {
        let nbytes = self.len.div_ceil(8);
        let mut s = String::with_capacity(2 * nbytes);
        for i in 0..nbytes {
            let byte = (self.words[i / 8] >> (8 * (i % 8))) & 0xff;
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }

    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let nbytes = len.div_ceil(8);
        if hex.len() != 2 * nbytes {
            return Err(Error::Parse(format!(
                "mask for {len} elements needs {} hex digits, got {}",
                2 * nbytes,
                hex.len()
            )));
        }
        let mut m = Mask::new(len);
        for i in 0..nbytes {
            let byte = u64::from_str_radix(&hex[2 * i..2 * i + 2], 16)
                .map_err(|_| Error::Parse(format!("invalid hex in mask {hex:?}")))?;
            for bit in 0..8 {
                if byte >> bit & 1 == 1 {
                    let idx = 8 * i + bit;
                    if idx >= len {
                        return Err(Error::Parse(format!(
                            "mask bit {idx} beyond group order {len}"
                        )));
                    }
                    m.insert(idx);
                }
            }
        }
        Ok(m)
    }
}

/// A choice of kernel classes `X` and off-kernel classes `Y`, giving `S_{X,Y} = S_X ⊔ S_Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalSubsetSpec {
    /// Indices into the group's class list, sorted.
    pub x_classes: Vec<usize>,
    pub y_classes: Vec<usize>,
    /// `a_X = r - Σ_{x∈X} |Conj_N(x)|`.
    pub a: u64,
    /// `b_Y = |H| - 1 - Σ_{y∈Y} |Conj_H(y)|`.
    pub b: u64,
}

impl NormalSubsetSpec {
    /// Build from class indices, validating that both sides are closed under inversion.
    pub fn from_classes(g: &GroupTable, x_classes: &[usize], y_classes: &[usize]) -> Result<Self> {
        let classes = g.conjugacy_classes();
        let mut x: Vec<usize> = x_classes.to_vec();
        let mut y: Vec<usize> = y_classes.to_vec();
        x.sort_unstable();
        x.dedup();
        y.sort_unstable();
        y.dedup();
        for &c in &x {
            let class = classes
                .get(c)
                .ok_or_else(|| Error::InvalidParameter(format!("no class {c}")))?;
            if class.kind != ClassKind::Kernel {
                return Err(Error::InvalidParameter(format!(
                    "class of element {} is not a non-identity kernel class",
                    class.representative
                )));
            }
        }
        for &c in &y {
            let class = classes
                .get(c)
                .ok_or_else(|| Error::InvalidParameter(format!("no class {c}")))?;
            if class.kind != ClassKind::OffKernel {
                return Err(Error::InvalidParameter(format!(
                    "class of element {} is not an off-kernel class",
                    class.representative
                )));
            }
        }
        for side in [&x, &y] {
            for &c in side {
                let inv = classes[c].inverse_class;
                if side.binary_search(&inv).is_err() {
                    return Err(Error::NotSymmetric(g.inv(classes[c].representative)));
                }
            }
        }
        let n_sum: u64 = x.iter().map(|&c| g.kernel_class_size(c)).sum();
        let h_sum: u64 = y.iter().map(|&c| g.complement_class_size(c)).sum();
        Ok(NormalSubsetSpec {
            a: g.ratio() - n_sum,
            b: g.complement_size() - 1 - h_sum,
            x_classes: x,
            y_classes: y,
        })
    }

    /// Build from exponents: `X = {x^v}` and `Y = {y^b}` (each mapped to its class).
    pub fn from_exponents(g: &GroupTable, x_exps: &[u64], y_exps: &[u64]) -> Result<Self> {
        let (p, q) = (g.kernel_size(), g.complement_size());
        let mut xs = Vec::new();
        for &v in x_exps {
            if v % p == 0 {
                return Err(Error::InvalidParameter(
                    "X may not contain the identity".into(),
                ));
            }
            xs.push(g.class_of(g.element(v, 0)));
        }
        let mut ys = Vec::new();
        for &b in y_exps {
            if b % q == 0 {
                return Err(Error::InvalidParameter(format!(
                    "Y exponent must be nonzero mod {q}"
                )));
            }
            ys.push(g.class_of(g.element(0, b)));
        }
        Self::from_classes(g, &xs, &ys)
    }

    /// `l(S_{X,Y}) = 1 + a_X |H| + b_Y |N|`.
    pub fn covalency(&self, g: &GroupTable) -> u64 {
        1 + self.a * g.complement_size() + self.b * g.kernel_size()
    }

    /// `|S_{X,Y}|` counted from class sizes.
    pub fn size(&self, g: &GroupTable) -> usize {
        let classes = g.conjugacy_classes();
        self.x_classes
            .iter()
            .chain(&self.y_classes)
            .map(|&c| classes[c].len())
            .sum()
    }

    pub fn mask(&self, g: &GroupTable) -> Mask {
        let classes = g.conjugacy_classes();
        Mask::from_indices(
            g.order(),
            self.x_classes
                .iter()
                .chain(&self.y_classes)
                .flat_map(|&c| classes[c].members.iter().copied()),
        )
    }

    /// `normal:X=v1,v2;Y=b1,...` with class representatives as exponents.
    pub fn to_spec_string(&self, g: &GroupTable) -> String {
        let classes = g.conjugacy_classes();
        let xs: Vec<String> = self
            .x_classes
            .iter()
            .map(|&c| g.decompose(classes[c].representative).0.to_string())
            .collect();
        let ys: Vec<String> = self
            .y_classes
            .iter()
            .map(|&c| g.decompose(classes[c].representative).1.to_string())
            .collect();
        format!("normal:X={};Y={}", xs.join(","), ys.join(","))
    }
}

/// A symmetric subset of `G` without the identity that generates `G`.
#[derive(Debug, Clone)]
pub struct CayleySubset {
    group: Arc<GroupTable>,
    mask: Mask,
    size: usize,
}

impl CayleySubset {
    /// Validate and wrap a mask over element indices.
    pub fn from_mask(group: Arc<GroupTable>, mask: Mask) -> Result<Self> {
        if mask.len() != group.order() {
            return Err(Error::InvalidParameter(format!(
                "mask length {} does not match group order {}",
                mask.len(),
                group.order()
            )));
        }
        if mask.contains(group.identity()) {
            return Err(Error::ContainsIdentity);
        }
        for s in mask.iter() {
            let inv = group.inv(s);
            if !mask.contains(inv) {
                return Err(Error::NotSymmetric(inv));
            }
        }
        let size = mask.count();
        // More than half the group always generates it.
        if 2 * size <= group.order() && !generates(&group, &mask) {
            return Err(Error::NotGenerating);
        }
        Ok(CayleySubset { group, mask, size })
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    /// `|S|`, the valency of the Cayley graph.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask.contains(g)
    }

    /// `l(S) = |G| - |S|`.
    pub fn covalency(&self) -> u64 {
        (self.group.order() - self.size) as u64
    }

    /// `(l₁, l₂) = (|D₁ \ S₁|, |D₂ \ S₂|)` for dihedral groups.
    pub fn dihedral_split(&self) -> Option<(u64, u64)> {
        if !self.group.is_dihedral() {
            return None;
        }
        let p = self.group.kernel_size() as usize;
        let s1 = (0..p).filter(|&a| self.mask.contains(a)).count();
        let s2 = self.size - s1;
        Some(((p - s1) as u64, (p - s2) as u64))
    }

    /// The subset as a union of conjugacy classes, or `NotNormal`.
    pub fn as_normal_spec(&self) -> Result<NormalSubsetSpec> {
        let g = &*self.group;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (i, c) in g.conjugacy_classes().iter().enumerate() {
            let hits = c.members.iter().filter(|&&m| self.mask.contains(m)).count();
            if hits == 0 {
                continue;
            }
            if hits != c.len() {
                return Err(Error::NotNormal);
            }
            match c.kind {
                ClassKind::Kernel => xs.push(i),
                ClassKind::OffKernel => ys.push(i),
                ClassKind::Identity => unreachable!("identity excluded at construction"),
            }
        }
        NormalSubsetSpec::from_classes(g, &xs, &ys)
    }

    pub fn to_hex(&self) -> String {
        self.mask.to_hex()
    }
}

impl fmt::Display for CayleySubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mask:{}", self.mask.to_hex())
    }
}

/// Breadth-first search from the identity along right multiplication by elements of `mask`.
pub fn generates(g: &GroupTable, mask: &Mask) -> bool {
    let n = g.order();
    let gens: Vec<usize> = mask.iter().collect();
    let mut seen = vec![false; n];
    seen[g.identity()] = true;
    let mut stack = vec![g.identity()];
    let mut reached = 1;
    while let Some(e) = stack.pop() {
        for &s in &gens {
            let t = g.mul(e, s);
            if !seen[t] {
                seen[t] = true;
                reached += 1;
                stack.push(t);
            }
        }
    }
    reached == n
}

pub fn make_normal_subset(group: Arc<GroupTable>, spec: &NormalSubsetSpec) -> Result<CayleySubset> {
    let mask = spec.mask(&group);
    CayleySubset::from_mask(group, mask)
}

/// `S = S₁ ⊔ S₂` from `s1[a] ⇔ x^a ∈ S` and `s2[a] ⇔ x^a y ∈ S`.
pub fn make_dihedral_subset(
    group: Arc<GroupTable>,
    s1: &[bool],
    s2: &[bool],
) -> Result<CayleySubset> {
    if !group.is_dihedral() {
        return Err(Error::UnsupportedFamily(group.spec_string()));
    }
    let p = group.kernel_size() as usize;
    if s1.len() != p || s2.len() != p {
        return Err(Error::InvalidParameter(format!(
            "dihedral masks must have length {p}"
        )));
    }
    if s1[0] {
        return Err(Error::ContainsIdentity);
    }
    for a in 1..p {
        if s1[a] != s1[p - a] {
            return Err(Error::NotSymmetric(group.element((p - a) as u64, 0)));
        }
    }
    let mut mask = Mask::new(2 * p);
    for a in 0..p {
        if s1[a] {
            mask.insert(a);
        }
        if s2[a] {
            mask.insert(p + a);
        }
    }
    CayleySubset::from_mask(group, mask)
}

/// `S^{(l₁,l₂)}`: remove `{1, x^{±1}, …, x^{±(l₁-1)/2}}` from the rotations and
/// `{y, xy, …, x^{l₂-1}y}` from the reflections.
pub fn make_interval_subset(group: Arc<GroupTable>, l1: u64, l2: u64) -> Result<CayleySubset> {
    if !group.is_dihedral() {
        return Err(Error::UnsupportedFamily(group.spec_string()));
    }
    let p = group.kernel_size();
    if l1.is_multiple_of(2) || l1 > p || l2 > p || (l1 == p && l2 == p) {
        return Err(Error::InvalidParameter(format!(
            "interval split needs odd l1 <= {p}, l2 <= {p}, not both {p}; got ({l1}, {l2})"
        )));
    }
    let half = (l1 - 1) / 2;
    let pu = p as usize;
    let s1: Vec<bool> = (0..p).map(|a| a.min(p - a) > half).collect();
    let s2: Vec<bool> = (0..p).map(|a| a >= l2).collect();
    debug_assert_eq!(s1.len(), pu);
    make_dihedral_subset(group, &s1, &s2)
}

/// Minimal inversion-closed unions of classes of the given kind: a symmetric class alone,
/// or a class together with its inverse class.
pub fn symmetric_units(g: &GroupTable, kind: ClassKind) -> Vec<Vec<usize>> {
    let classes = g.conjugacy_classes();
    let mut units = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        if c.kind != kind || c.inverse_class < i {
            continue;
        }
        if c.is_symmetric {
            units.push(vec![i]);
        } else {
            units.push(vec![i, c.inverse_class]);
        }
    }
    units
}

/// Every symmetric `(X, Y)` with `Y ≠ ∅`, in order of `(Y-bits, X-bits)`.
pub fn enumerate_normal_subsets(
    g: &GroupTable,
) -> Result<impl Iterator<Item = NormalSubsetSpec> + '_> {
    let xu = symmetric_units(g, ClassKind::Kernel);
    let yu = symmetric_units(g, ClassKind::OffKernel);
    let total: u128 = (1u128 << xu.len()) * ((1u128 << yu.len()) - 1);
    if total > NORMAL_ENUMERATION_GUARD {
        return Err(Error::Guard {
            what: "normal subset enumeration",
            value: total,
            limit: NORMAL_ENUMERATION_GUARD,
        });
    }
    let (nx, ny) = (xu.len(), yu.len());
    Ok((1u64..(1 << ny)).flat_map(move |ybits| {
        let xu = xu.clone();
        let yu = yu.clone();
        (0u64..(1 << nx)).map(move |xbits| {
            let pick = |units: &[Vec<usize>], bits: u64| -> Vec<usize> {
                units
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .flat_map(|(_, u)| u.iter().copied())
                    .collect()
            };
            NormalSubsetSpec::from_classes(g, &pick(&xu, xbits), &pick(&yu, ybits))
                .expect("unions of symmetric units are symmetric")
        })
    }))
}

/// `A[g, h] = 1` iff `g^{-1} h ∈ S`.
pub fn adjacency_matrix(s: &CayleySubset) -> DenseSymmetricMatrix {
    let g = s.group();
    let n = g.order();
    let elems: Vec<usize> = s.mask().iter().collect();
    let mut a = DenseSymmetricMatrix::zeros(n);
    for x in 0..n {
        for &e in &elems {
            a.set(x, g.mul(x, e), 1.0);
        }
    }
    a
}

/// Parse `normal:X=...;Y=...`, `interval:l1=<odd>,l2=<int>` or `mask:<hex>`.
///
/// In the normal form, `X` entries are exponents `v` (or `x^v`) naming the class of `x^v` and
/// `Y` entries are exponents `b` (or `y`, `y^b`) naming the class of `y^b`.
pub fn parse_subset_spec(group: Arc<GroupTable>, s: &str) -> Result<CayleySubset> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("mask:") {
        let mask = Mask::from_hex(rest.trim(), group.order())?;
        return CayleySubset::from_mask(group, mask);
    }
    if let Some(rest) = s.strip_prefix("interval:") {
        let mut l1 = None;
        let mut l2 = None;
        for part in rest.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("expected an integer in {part:?}")))?;
            match k.trim() {
                "l1" => l1 = Some(v),
                "l2" => l2 = Some(v),
                other => return Err(Error::Parse(format!("unknown interval key {other:?}"))),
            }
        }
        let (l1, l2) = l1
            .zip(l2)
            .ok_or_else(|| Error::Parse("interval needs both l1 and l2".into()))?;
        return make_interval_subset(group, l1, l2);
    }
    if let Some(rest) = s.strip_prefix("normal:") {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for part in rest.split(';').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected X=... or Y=... in {part:?}")))?;
            let (target, symbol) = match k.trim() {
                "X" => (&mut xs, 'x'),
                "Y" => (&mut ys, 'y'),
                other => return Err(Error::Parse(format!("unknown normal-subset key {other:?}"))),
            };
            for tok in v.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                target.push(parse_exponent(tok, symbol)?);
            }
        }
        let spec = NormalSubsetSpec::from_exponents(&group, &xs, &ys)?;
        return make_normal_subset(group, &spec);
    }
    Err(Error::Parse(format!(
        "unknown subset spec {s:?} (expected normal:, interval: or mask:)"
    )))
}

fn parse_exponent(tok: &str, symbol: char) -> Result<u64> {
    let body = match tok.strip_prefix(symbol) {
        Some("") => return Ok(1),
        Some(rest) => rest
            .strip_prefix('^')
            .ok_or_else(|| Error::Parse(format!("expected {symbol}^<n>, got {tok:?}")))?,
        None => tok,
    };
    body.parse()
        .map_err(|_| Error::Parse(format!("expected an exponent, got {tok:?}")))
}

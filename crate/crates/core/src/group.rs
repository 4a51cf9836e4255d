//! Finite abelian groups written as products of cyclic factors.
//!
//! Elements are residue vectors and are enumerated in lexicographic residue
//! order (first factor most significant), so the identity always comes first.
//! Most hot loops work with element *indices* into that enumeration; see
//! [`CayleyTable`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order for which automorphisms are enumerated by default.
pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 16;

/// A finite abelian group `Z_{n1} x Z_{n2} x ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GroupRecord")]
pub struct GroupSpec {
    factors: Vec<u32>,
}

#[derive(Deserialize)]
struct GroupRecord {
    factors: Vec<u32>,
}

impl TryFrom<GroupRecord> for GroupSpec {
    type Error = Error;
    fn try_from(r: GroupRecord) -> Result<Self> {
        GroupSpec::new(r.factors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub residues: Vec<u32>,
}

impl GroupSpec {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!(
                "cyclic factor of order {bad}; factors must be >= 2"
            )));
        }
        Ok(Self { factors })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn trivial() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().map(|&n| n as usize).product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.factors.len()],
        }
    }

    /// Builds an element, reducing residues modulo each factor.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement> {
        if residues.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                found: residues.len(),
            });
        }
        Ok(GroupElement {
            residues: residues
                .iter()
                .zip(&self.factors)
                .map(|(&r, &n)| r.rem_euclid(n as i64) as u32)
                .collect(),
        })
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.residues.len() == self.factors.len()
            && a.residues.iter().zip(&self.factors).all(|(&r, &n)| r < n)
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::IncompatibleGroups {
                left: self.factors.clone(),
                right: a.residues.clone(),
            })
        }
    }

    pub fn op(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement {
            residues: a
                .residues
                .iter()
                .zip(&b.residues)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement {
            residues: a
                .residues
                .iter()
                .zip(&self.factors)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        })
    }

    /// `n * a` for a (possibly negative) integer multiplier.
    pub fn scale(&self, n: i64, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let raw: Vec<i64> = a.residues.iter().map(|&r| n * r as i64).collect();
        self.element(&raw)
    }

    /// Position of `a` in [`enumerate_elements`] order.
    pub fn index_of(&self, a: &GroupElement) -> Result<usize> {
        self.check(a)?;
        Ok(a.residues
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&r, &n)| acc * n as usize + r as usize))
    }

    /// Inverse of [`GroupSpec::index_of`].
    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut residues = vec![0u32; self.factors.len()];
        for (slot, &n) in residues.iter_mut().zip(&self.factors).rev() {
            *slot = (index % n as usize) as u32;
            index /= n as usize;
        }
        GroupElement { residues }
    }

    /// Additive order of an element.
    pub fn element_order(&self, a: &GroupElement) -> usize {
        a.residues
            .iter()
            .zip(&self.factors)
            .map(|(&r, &n)| (n / gcd_u32(r, n)) as usize)
            .fold(1, lcm_usize)
    }

    pub fn is_elementary_two_group(&self) -> bool {
        self.factors.iter().all(|&n| n == 2)
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

fn lcm_usize(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `Z6`, `Z2xZ2`, `Z2^3`, `Z2xZ4` and `trivial`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("trivial") || s == "1" {
            return Ok(Self::trivial());
        }
        let mut factors = Vec::new();
        for part in s.split(['x', 'X', '*']) {
            let part = part.trim();
            let body = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('z'))
                .ok_or_else(|| {
                    Error::Parse(format!("group factor '{part}' must look like Z<n>"))
                })?;
            let (base, power) = match body.split_once('^') {
                Some((b, p)) => (b, p),
                None => (body, "1"),
            };
            let n: u32 = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad cyclic order in '{part}'")))?;
            let p: usize = power
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in '{part}'")))?;
            factors.extend(std::iter::repeat_n(n, p));
        }
        Self::new(factors)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.len() == 1 {
            write!(f, "{}", self.residues[0])
        } else {
            let parts: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// All elements in lexicographic residue order, identity first.
pub fn enumerate_elements(spec: &GroupSpec) -> Vec<GroupElement> {
    (0..spec.order()).map(|i| spec.element_at(i)).collect()
}

/// Precomputed addition and negation on element indices.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    order: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
}

impl CayleyTable {
    pub fn new(spec: &GroupSpec) -> Self {
        let elements = enumerate_elements(spec);
        let order = elements.len();
        let mut add = vec![0; order * order];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let s = spec.op(a, b).expect("elements of the same group");
                add[i * order + j] = spec.index_of(&s).expect("reduced element");
            }
        }
        let neg = elements
            .iter()
            .map(|a| spec.index_of(&spec.neg(a).unwrap()).unwrap())
            .collect();
        Self { order, add, neg }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn sum<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(0, |acc, x| self.add(acc, x))
    }
}

/// A group automorphism stored as the image of every element index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupAutomorphism {
    images: Vec<usize>,
}

impl GroupAutomorphism {
    /// Validates bijectivity, additivity over all pairs, and that the identity is fixed.
    pub fn new(spec: &GroupSpec, images: Vec<usize>) -> Result<Self> {
        let table = CayleyTable::new(spec);
        let n = table.order();
        if images.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: images.len(),
            });
        }
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || std::mem::replace(&mut seen[img], true) {
                return Err(Error::InvalidAction(
                    "automorphism images are not a bijection".into(),
                ));
            }
        }
        if images[0] != 0 {
            return Err(Error::InvalidAction(
                "automorphism must fix the identity".into(),
            ));
        }
        for a in 0..n {
            for b in 0..n {
                if images[table.add(a, b)] != table.add(images[a], images[b]) {
                    return Err(Error::InvalidAction(format!(
                        "map is not additive on elements {a} and {b}"
                    )));
                }
            }
        }
        Ok(Self { images })
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        Self {
            images: (0..spec.order()).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, index: usize) -> usize {
        self.images[index]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (a, &b) in self.images.iter().enumerate() {
            inv[b] = a;
        }
        Self { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(a, &b)| a == b)
    }
}

/// All automorphisms, identity first, remaining ones in lexicographic order of
/// their image tables.
///
/// Candidates are generated by choosing the image of each cyclic generator
/// among elements whose order divides the generator's order; each extension is
/// then checked for bijectivity.
pub fn enumerate_automorphisms(spec: &GroupSpec) -> Result<Vec<GroupAutomorphism>> {
    enumerate_automorphisms_bounded(spec, DEFAULT_AUTOMORPHISM_BOUND)
}

pub fn enumerate_automorphisms_bounded(
    spec: &GroupSpec,
    bound: usize,
) -> Result<Vec<GroupAutomorphism>> {
    let n = spec.order();
    if n > bound {
        return Err(Error::InfeasibleEnumeration {
            what: "automorphism search (group order)",
            size: n as u128,
            bound: bound as u128,
        });
    }
    let elements = enumerate_elements(spec);
    let rank = spec.factors().len();
    let candidates: Vec<Vec<usize>> = spec
        .factors()
        .iter()
        .map(|&q| {
            (0..n)
                .filter(|&i| (q as usize).is_multiple_of(spec.element_order(&elements[i])))
                .collect()
        })
        .collect();

    let mut found = Vec::new();
    let mut choice = vec![0usize; rank];
    loop {
        if let Some(images) = extend_generators(spec, &elements, &candidates, &choice) {
            found.push(GroupAutomorphism { images });
        }
        // odometer over generator images
        let mut pos = rank;
        loop {
            if pos == 0 {
                found.sort_by(|a, b| {
                    b.is_identity()
                        .cmp(&a.is_identity())
                        .then_with(|| a.images.cmp(&b.images))
                });
                return Ok(found);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

fn extend_generators(
    spec: &GroupSpec,
    elements: &[GroupElement],
    candidates: &[Vec<usize>],
    choice: &[usize],
) -> Option<Vec<usize>> {
    let gens: Vec<&GroupElement> = choice
        .iter()
        .zip(candidates)
        .map(|(&c, cands)| &elements[cands[c]])
        .collect();
    let mut images = Vec::with_capacity(elements.len());
    let mut seen = vec![false; elements.len()];
    for a in elements {
        let mut acc = spec.identity();
        for (&r, g) in a.residues.iter().zip(&gens) {
            acc = spec.op(&acc, &spec.scale(r as i64, g).ok()?).ok()?;
        }
        let idx = spec.index_of(&acc).ok()?;
        if std::mem::replace(&mut seen[idx], true) {
            return None;
        }
        images.push(idx);
    }
    Some(images)
}

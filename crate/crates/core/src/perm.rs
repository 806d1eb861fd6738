//! Finite-support permutations of the positive integers and n-tuples of
//! them.
//!
//! Points are 1-indexed at every boundary (JSON, display, constructors
//! named `*_one_based`). In memory a [`Permutation`] stores the 0-based
//! image array of an initial segment; points beyond the stored degree are
//! fixed.
//!
//! Products follow `(p ∘ q)(x) = p(q(x))`.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Default)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from a 0-based image array.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &y in &images {
            if y >= images.len() || seen[y] {
                return Err(Error::NotABijection(
                    images.iter().map(|v| v + 1).collect(),
                ));
            }
            seen[y] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from a 1-based image array, `images[x-1] = p(x)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::NotABijection(images.to_vec()));
        }
        Self::from_images(images.iter().map(|&y| y - 1).collect())
    }

    /// Builds a permutation from a 1-based two-row matrix, `p(top[k]) = bottom[k]`.
    /// The top row may come in any order.
    pub fn from_two_row(top: &[usize], bottom: &[usize]) -> Result<Self> {
        if top.len() != bottom.len() {
            return Err(Error::NotABijection(top.to_vec()));
        }
        let mut images = vec![0; top.len()];
        for (&x, &y) in top.iter().zip(bottom) {
            if x == 0 || x > top.len() || images[x - 1] != 0 {
                return Err(Error::NotABijection(top.to_vec()));
            }
            images[x - 1] = y;
        }
        Self::from_one_based(&images)
    }

    /// Builds a permutation of the given degree from 1-based disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x == 0 || y == 0 || x > degree || y > degree || touched[x - 1] {
                    return Err(Error::InvalidCycles);
                }
                touched[x - 1] = true;
                images[x - 1] = y - 1;
            }
        }
        Self::from_images(images)
    }

    pub fn random<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..degree).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    /// Random permutation of `1..=degree` fixing `1..=fixed`.
    pub fn random_fixing<R: Rng + ?Sized>(degree: usize, fixed: usize, rng: &mut R) -> Self {
        let fixed = fixed.min(degree);
        let mut images: Vec<usize> = (0..degree).collect();
        images[fixed..].shuffle(rng);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image; points past the degree are fixed.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        match self.images.get(x) {
            Some(&y) => y,
            None => x,
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|y| y + 1).collect()
    }

    /// Smallest degree on which the permutation is stored without trailing
    /// fixed points.
    pub fn support_bound(&self) -> usize {
        let mut n = self.images.len();
        while n > 0 && self.images[n - 1] == n - 1 {
            n -= 1;
        }
        n
    }

    pub fn extended(&self, degree: usize) -> Self {
        if degree <= self.degree() {
            return self.clone();
        }
        let mut images = self.images.clone();
        images.extend(self.degree()..degree);
        Permutation { images }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.support_bound() == 0
    }

    /// Disjoint cycles (0-based) covering every point of the stored degree,
    /// each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut counts = BTreeMap::new();
        for c in self.cycles() {
            *counts.entry(c.len()).or_insert(0) += 1;
        }
        CycleType { counts }
    }
}

/// `(p ∘ q)(x) = p(q(x))`; degrees are normalized to the larger one.
pub fn compose(p: &Permutation, q: &Permutation) -> Permutation {
    let degree = p.degree().max(q.degree());
    Permutation {
        images: (0..degree).map(|x| p.apply(q.apply(x))).collect(),
    }
}

/// The involution fixing `1..=beta` and swapping `beta+i <-> bound+i` for
/// `i = 1..=bound-beta`; degree `2*bound - beta`.
///
/// It moves the block `beta+1..=bound` entirely outside itself, which is
/// what a deep term of a weak zero in `K(beta)` does to a finite support.
pub fn shift_involution(beta: usize, bound: usize) -> Result<Permutation> {
    if bound < beta {
        return Err(Error::ShiftBound { beta, bound });
    }
    let width = bound - beta;
    let degree = 2 * bound - beta;
    let mut images: Vec<usize> = (0..degree).collect();
    for i in 0..width {
        images[beta + i] = bound + i;
        images[bound + i] = beta + i;
    }
    Ok(Permutation { images })
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        let n = self.degree().max(other.degree());
        (0..n).all(|x| self.apply(x) == other.apply(x))
    }
}

impl Eq for Permutation {}

impl std::hash::Hash for Permutation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.images[..self.support_bound()].hash(state);
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self)
    }
}

/// Cycle notation, 1-based, fixed points omitted.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&images).map_err(serde::de::Error::custom)
    }
}

/// Counts `r_k` of cycles of each length `k`, fixed points included.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleType {
    pub counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn from_lengths(lengths: &[usize]) -> Self {
        let mut counts = BTreeMap::new();
        for &k in lengths.iter().filter(|&&k| k > 0) {
            *counts.entry(k).or_insert(0) += 1;
        }
        CycleType { counts }
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// `Σ k·r_k`.
    pub fn degree(&self) -> usize {
        self.counts.iter().map(|(k, r)| k * r).sum()
    }

    /// Cycle type of the disjoint union of two permutations.
    pub fn disjoint_union(&self, other: &CycleType) -> CycleType {
        let mut counts = self.counts.clone();
        for (k, r) in &other.counts {
            *counts.entry(*k).or_insert(0) += r;
        }
        CycleType { counts }
    }
}

/// A finite representative `(g_1, …, g_n)` of an element of the
/// n-symmetric group. All parts share one degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    parts: Vec<Permutation>,
}

impl GroupElement {
    pub fn new(parts: Vec<Permutation>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::TooFewColors(parts.len()));
        }
        let degree = parts.iter().map(Permutation::degree).max().unwrap_or(0);
        Ok(GroupElement {
            parts: parts.into_iter().map(|p| p.extended(degree)).collect(),
        })
    }

    pub fn identity(n: usize, degree: usize) -> Result<Self> {
        Self::new(vec![Permutation::identity(degree); n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, degree: usize, rng: &mut R) -> Result<Self> {
        Self::new((0..n).map(|_| Permutation::random(degree, rng)).collect())
    }

    /// The diagonal element `(k, k, …, k)`.
    pub fn diagonal(n: usize, k: &Permutation) -> Result<Self> {
        Self::new(vec![k.clone(); n])
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn degree(&self) -> usize {
        self.parts[0].degree()
    }

    pub fn parts(&self) -> &[Permutation] {
        &self.parts
    }

    pub fn part(&self, c: usize) -> &Permutation {
        &self.parts[c]
    }

    pub fn extended(&self, degree: usize) -> Self {
        GroupElement {
            parts: self.parts.iter().map(|p| p.extended(degree)).collect(),
        }
    }

    /// Componentwise product `(p_c ∘ q_c)_c`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.n() != other.n() {
            return Err(Error::ColorMismatch(self.n(), other.n()));
        }
        GroupElement::new(
            self.parts
                .iter()
                .zip(&other.parts)
                .map(|(p, q)| compose(p, q))
                .collect(),
        )
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            parts: self.parts.iter().map(Permutation::inverse).collect(),
        }
    }

    /// Block sum: `other` acts on the points after `self.degree()`.
    pub fn direct_sum(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.n() != other.n() {
            return Err(Error::ColorMismatch(self.n(), other.n()));
        }
        let shift = self.degree();
        GroupElement::new(
            self.parts
                .iter()
                .zip(&other.parts)
                .map(|(p, q)| {
                    let mut images = p.images().to_vec();
                    images.extend(q.images().iter().map(|x| x + shift));
                    Permutation::from_images(images).expect("block sum of bijections")
                })
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct GroupElementJson {
    n: usize,
    perms: Vec<Permutation>,
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupElementJson {
            n: self.n(),
            perms: self.parts.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GroupElementJson::deserialize(d)?;
        if raw.perms.len() != raw.n {
            return Err(serde::de::Error::custom(format!(
                "\"n\" is {} but {} permutations were given",
                raw.n,
                raw.perms.len()
            )));
        }
        GroupElement::new(raw.perms).map_err(serde::de::Error::custom)
    }
}

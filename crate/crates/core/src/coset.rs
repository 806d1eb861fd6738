//! `(α, β)`-boards: double cosets `K(α) \ G / K(β)` as labeled
//! checker-boards, and the category they form.
//!
//! Black faces carry labels `1..=β` (the source object), white faces carry
//! labels `1..=α` (the target object). A board is a morphism `β → α`.
//! Unlabeled chebureks are deleted on construction.
//!
//! Every `CosetBoard` is stored in canonical numbering: components sorted
//! by their canonical word, faces numbered in traversal order within each
//! component. Two boards are the same double coset iff their
//! [`CanonicalForm`]s are equal, which is what `PartialEq` compares.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::board::{CheckerBoard, ComponentStats};
use crate::canon::Traversal;
use crate::error::{Error, Result};
use crate::perm::{shift_involution, GroupElement, Permutation};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn words(&self) -> &[u32] {
        &self.0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|w| w.to_le_bytes()).collect()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.to_bytes() {
            write!(f, "{:02x}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({:?})", self.0)
    }
}

#[derive(Clone)]
pub struct CosetBoard {
    alpha: usize,
    beta: usize,
    board: CheckerBoard,
    /// `black_labels[j-1]` is the black face carrying label `j`.
    black_labels: Vec<usize>,
    white_labels: Vec<usize>,
    canon: CanonicalForm,
}

/// A `CosetBoard` read as a morphism `beta → alpha`.
pub type Morphism = CosetBoard;

impl PartialEq for CosetBoard {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}

impl Eq for CosetBoard {}

impl std::hash::Hash for CosetBoard {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canon.hash(state);
    }
}

impl fmt::Debug for CosetBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetBoard")
            .field("n", &self.n())
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("gluings", &self.board.gluings())
            .field("black_labels", &self.black_labels)
            .field("white_labels", &self.white_labels)
            .finish()
    }
}

impl CosetBoard {
    /// Builds a board from arbitrary labeled gluings, deleting unlabeled
    /// chebureks and canonicalizing.
    ///
    /// `black_labels[j-1]` / `white_labels[j-1]` are 0-based face indices.
    pub fn from_parts(
        alpha: usize,
        beta: usize,
        gluings: Vec<Permutation>,
        black_labels: Vec<usize>,
        white_labels: Vec<usize>,
    ) -> Result<Self> {
        let g = GroupElement::new(gluings)?;
        let size = g.degree();
        if black_labels.len() != beta {
            return Err(Error::InvalidLabel {
                label: black_labels.len(),
                reason: "black label count differs from beta",
            });
        }
        if white_labels.len() != alpha {
            return Err(Error::InvalidLabel {
                label: white_labels.len(),
                reason: "white label count differs from alpha",
            });
        }
        let black_marks = marks(size, &black_labels)?;
        let white_marks = marks(size, &white_labels)?;
        Ok(Self::normalize(alpha, beta, &g, &black_marks, &white_marks))
    }

    fn normalize(
        alpha: usize,
        beta: usize,
        g: &GroupElement,
        black_marks: &[u32],
        white_marks: &[u32],
    ) -> Self {
        let n = g.n();
        let raw = CheckerBoard::build(g);
        let traversal = Traversal {
            gluings: raw.gluings(),
            inverses: raw.inverses(),
            black_marks,
            white_marks,
        };
        let mut kept: Vec<_> = raw
            .components()
            .iter()
            .filter(|comp| {
                let labeled = comp.black.iter().any(|&b| black_marks[b] != 0)
                    || comp.white.iter().any(|&w| white_marks[w] != 0);
                labeled || !comp.stats.is_cheburek
            })
            .map(|comp| traversal.canonical(&comp.black))
            .collect();
        kept.sort_by(|a, b| a.word.cmp(&b.word));

        let size: usize = kept.iter().map(|c| c.black_order.len()).sum();
        let mut new_black = vec![usize::MAX; g.degree()];
        let mut new_white = vec![usize::MAX; g.degree()];
        let mut next = 0;
        for comp in &kept {
            for (k, (&b, &w)) in comp.black_order.iter().zip(&comp.white_order).enumerate() {
                new_black[b] = next + k;
                new_white[w] = next + k;
            }
            next += comp.black_order.len();
        }

        let mut gluings = vec![vec![0usize; size]; n];
        for comp in &kept {
            for &b in &comp.black_order {
                for (c, glu) in gluings.iter_mut().enumerate() {
                    glu[new_black[b]] = new_white[g.part(c).apply(b)];
                }
            }
        }
        let gluings: Vec<Permutation> = gluings
            .into_iter()
            .map(|images| Permutation::from_images(images).expect("renumbering is a bijection"))
            .collect();

        let mut black_labels = vec![0; beta];
        let mut white_labels = vec![0; alpha];
        for (f, &m) in black_marks.iter().enumerate() {
            if m != 0 {
                black_labels[m as usize - 1] = new_black[f];
            }
        }
        for (f, &m) in white_marks.iter().enumerate() {
            if m != 0 {
                white_labels[m as usize - 1] = new_white[f];
            }
        }

        let mut words = vec![n as u32, alpha as u32, beta as u32, kept.len() as u32];
        for comp in &kept {
            words.push(comp.word.len() as u32);
            words.extend_from_slice(&comp.word);
        }

        CosetBoard {
            alpha,
            beta,
            board: CheckerBoard::from_gluings(gluings).expect("n >= 2"),
            black_labels,
            white_labels,
            canon: CanonicalForm(words),
        }
    }

    /// The double coset `K(α) g K(β)`: black face `j` gets label `j` for
    /// `j ≤ β`, white face `j` gets label `j` for `j ≤ α`.
    pub fn from_element(g: &GroupElement, alpha: usize, beta: usize) -> Self {
        let g = g.extended(g.degree().max(alpha).max(beta));
        let size = g.degree();
        let mut black_marks = vec![0u32; size];
        let mut white_marks = vec![0u32; size];
        for (m, j) in black_marks.iter_mut().zip(1..=beta as u32) {
            *m = j;
        }
        for (m, j) in white_marks.iter_mut().zip(1..=alpha as u32) {
            *m = j;
        }
        Self::normalize(alpha, beta, &g, &black_marks, &white_marks)
    }

    /// Disjoint union of chebureks; each entry gives the optional black and
    /// white label (1-based) of one cheburek.
    pub fn from_chebureks(
        n: usize,
        alpha: usize,
        beta: usize,
        chebureks: &[(Option<usize>, Option<usize>)],
    ) -> Result<Self> {
        let size = chebureks.len();
        let mut black_labels = vec![usize::MAX; beta];
        let mut white_labels = vec![usize::MAX; alpha];
        for (f, &(bl, wl)) in chebureks.iter().enumerate() {
            if let Some(j) = bl {
                let slot = black_labels.get_mut(j.wrapping_sub(1)).ok_or(Error::InvalidLabel {
                    label: j,
                    reason: "black label out of range",
                })?;
                *slot = f;
            }
            if let Some(j) = wl {
                let slot = white_labels.get_mut(j.wrapping_sub(1)).ok_or(Error::InvalidLabel {
                    label: j,
                    reason: "white label out of range",
                })?;
                *slot = f;
            }
        }
        Self::from_parts(
            alpha,
            beta,
            vec![Permutation::identity(size); n],
            black_labels,
            white_labels,
        )
    }

    pub fn n(&self) -> usize {
        self.board.n()
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn board(&self) -> &CheckerBoard {
        &self.board
    }

    pub fn black_labels(&self) -> &[usize] {
        &self.black_labels
    }

    pub fn white_labels(&self) -> &[usize] {
        &self.white_labels
    }

    pub fn canonical_form(&self) -> &CanonicalForm {
        &self.canon
    }

    pub fn is_closed(&self) -> bool {
        self.alpha == 0 && self.beta == 0
    }

    /// 1-based label on black face `b`, if any.
    pub fn black_label_of(&self, b: usize) -> Option<usize> {
        self.black_labels.iter().position(|&f| f == b).map(|j| j + 1)
    }

    pub fn white_label_of(&self, w: usize) -> Option<usize> {
        self.white_labels.iter().position(|&f| f == w).map(|j| j + 1)
    }

    pub fn component_stats(&self) -> Vec<ComponentStats> {
        self.board.components().iter().map(|c| c.stats.clone()).collect()
    }

    /// A finite representative: labeled faces carry their label as index,
    /// unlabeled black faces follow `β`, unlabeled white faces follow `α`.
    pub fn representative(&self) -> GroupElement {
        let size = self.board.size();
        let mut black_pos = vec![usize::MAX; size];
        let mut white_pos = vec![usize::MAX; size];
        for (j, &f) in self.black_labels.iter().enumerate() {
            black_pos[f] = j;
        }
        for (j, &f) in self.white_labels.iter().enumerate() {
            white_pos[f] = j;
        }
        for (p, next) in black_pos.iter_mut().filter(|p| **p == usize::MAX).zip(self.beta..) {
            *p = next;
        }
        for (p, next) in white_pos.iter_mut().filter(|p| **p == usize::MAX).zip(self.alpha..) {
            *p = next;
        }
        let parts = self
            .board
            .gluings()
            .iter()
            .map(|glu| {
                let mut images = vec![0; size];
                for b in 0..size {
                    images[black_pos[b]] = white_pos[glu.apply(b)];
                }
                Permutation::from_images(images).expect("relabeling is a bijection")
            })
            .collect();
        GroupElement::new(parts).expect("n >= 2")
    }

    pub fn identity(n: usize, beta: usize) -> Result<Self> {
        Ok(Self::from_element(&GroupElement::identity(n, beta)?, beta, beta))
    }

    /// `λ_{β,α} : β → α`: chebureks `(j/j)` for `j ≤ β` and chebureks with
    /// only white label `p` for `β < p ≤ α`.
    pub fn lambda(n: usize, beta: usize, alpha: usize) -> Result<Self> {
        if alpha < beta {
            return Err(Error::AlphaBelowBeta { alpha, beta });
        }
        Ok(Self::from_element(&GroupElement::identity(n, alpha)?, alpha, beta))
    }

    /// `μ_{α,β} = λ_{β,α}^□ : α → β`.
    pub fn mu(n: usize, alpha: usize, beta: usize) -> Result<Self> {
        Ok(Self::lambda(n, beta, alpha)?.involution())
    }

    /// `θ^α_β = λ_{β,α} ∘ μ_{α,β} : α → α`.
    pub fn theta(n: usize, alpha: usize, beta: usize) -> Result<Self> {
        Self::lambda(n, beta, alpha)?.mul(&Self::mu(n, alpha, beta)?)
    }

    /// `self ∘ other` for `self: β → α`, `other: γ → β`.
    pub fn mul(&self, other: &CosetBoard) -> Result<Self> {
        self.mul_with_margin(other, 0)
    }

    /// Multiplication through a representative product `p·h·q`, where `h`
    /// is the shift involution with bound `M + margin` and `M` is the
    /// smallest admissible bound. The result does not depend on `margin`.
    pub fn mul_with_margin(&self, other: &CosetBoard, margin: usize) -> Result<Self> {
        if self.beta != other.alpha {
            return Err(Error::ObjectMismatch {
                left: self.beta,
                right: other.alpha,
            });
        }
        if self.n() != other.n() {
            return Err(Error::ColorMismatch(self.n(), other.n()));
        }
        let p = self.representative();
        let q = other.representative();
        let bound = p
            .degree()
            .max(q.degree())
            .max(self.alpha)
            .max(self.beta)
            .max(other.beta)
            + margin;
        self.mul_via(&p, &q, other.beta, bound)
    }

    /// `K(α) p h q K(γ)` with `h = shift_involution(β, bound)`.
    pub fn mul_via(
        &self,
        p: &GroupElement,
        q: &GroupElement,
        gamma: usize,
        bound: usize,
    ) -> Result<Self> {
        let h = GroupElement::diagonal(self.n(), &shift_involution(self.beta, bound)?)?;
        let product = p.compose(&h)?.compose(q)?;
        Ok(Self::from_element(&product, self.alpha, gamma))
    }

    /// `a^□`: black and white swap and the orientation reverses; at the
    /// group level every part is inverted.
    pub fn involution(&self) -> Self {
        let gluings = self.board.inverses().to_vec();
        Self::from_parts(
            self.beta,
            self.alpha,
            gluings,
            self.white_labels.clone(),
            self.black_labels.clone(),
        )
        .expect("inverting a valid board yields a valid board")
    }

    /// `λ_{β,α} ∘ a ∘ μ_{α,β}` for an endomorphism `a` of `β`.
    pub fn embed_end(&self, alpha: usize) -> Result<Self> {
        if self.alpha != self.beta {
            return Err(Error::NotEndomorphism {
                alpha: self.alpha,
                beta: self.beta,
            });
        }
        let n = self.n();
        let beta = self.beta;
        Self::lambda(n, beta, alpha)?.mul(&self.mul(&Self::mu(n, alpha, beta)?)?)
    }

    /// Whether the board is `(j/j)` chebureks for every `j ≤ α` plus
    /// unlabeled components only.
    pub fn is_central(&self) -> bool {
        if self.alpha != self.beta {
            return false;
        }
        let board = &self.board;
        self.black_labels
            .iter()
            .zip(&self.white_labels)
            .all(|(&b, &w)| {
                let comp = &board.components()[board.component_of_black(b)];
                comp.stats.is_cheburek && board.gluing(0).apply(b) == w
            })
    }
}

fn marks(size: usize, labels: &[usize]) -> Result<Vec<u32>> {
    let mut out = vec![0u32; size];
    for (j, &f) in labels.iter().enumerate() {
        if f >= size {
            return Err(Error::InvalidLabel {
                label: j + 1,
                reason: "face index out of range",
            });
        }
        if out[f] != 0 {
            return Err(Error::InvalidLabel {
                label: j + 1,
                reason: "face already labeled",
            });
        }
        out[f] = j as u32 + 1;
    }
    Ok(out)
}

struct LabelMap<'a>(&'a [usize]);

impl Serialize for LabelMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (j, f) in self.0.iter().enumerate() {
            map.serialize_entry(&(j + 1).to_string(), &(f + 1))?;
        }
        map.end()
    }
}

impl Serialize for CosetBoard {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(6))?;
        map.serialize_entry("n", &self.n())?;
        map.serialize_entry("alpha", &self.alpha)?;
        map.serialize_entry("beta", &self.beta)?;
        map.serialize_entry("gluings", self.board.gluings())?;
        map.serialize_entry("black_labels", &LabelMap(&self.black_labels))?;
        map.serialize_entry("white_labels", &LabelMap(&self.white_labels))?;
        map.end()
    }
}

#[derive(Deserialize)]
struct CosetJson {
    n: usize,
    alpha: usize,
    beta: usize,
    gluings: Vec<Permutation>,
    #[serde(default)]
    black_labels: BTreeMap<String, usize>,
    #[serde(default)]
    white_labels: BTreeMap<String, usize>,
}

fn label_vec(count: usize, raw: &BTreeMap<String, usize>) -> std::result::Result<Vec<usize>, String> {
    let mut out = vec![usize::MAX; count];
    for (k, &f) in raw {
        let j: usize = k.parse().map_err(|_| format!("label key {k:?} is not an integer"))?;
        if j == 0 || j > count {
            return Err(format!("label {j} outside 1..={count}"));
        }
        if f == 0 {
            return Err(format!("label {j} points at face 0; faces are 1-based"));
        }
        out[j - 1] = f - 1;
    }
    if let Some(j) = out.iter().position(|&f| f == usize::MAX) {
        return Err(format!("label {} is missing", j + 1));
    }
    Ok(out)
}

impl<'de> Deserialize<'de> for CosetBoard {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CosetJson::deserialize(d)?;
        if raw.gluings.len() != raw.n {
            return Err(D::Error::custom("\"n\" does not match the gluing count"));
        }
        let black = label_vec(raw.beta, &raw.black_labels).map_err(D::Error::custom)?;
        let white = label_vec(raw.alpha, &raw.white_labels).map_err(D::Error::custom)?;
        CosetBoard::from_parts(raw.alpha, raw.beta, raw.gluings, black, white)
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::compose;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cyc(degree: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(degree, cycles).unwrap()
    }

    fn random_coset<R: Rng>(n: usize, alpha: usize, beta: usize, max_deg: usize, rng: &mut R) -> CosetBoard {
        let deg = rng.gen_range(0..=max_deg);
        CosetBoard::from_element(&GroupElement::random(n, deg, rng).unwrap(), alpha, beta)
    }

    /// Every permutation of `fixed..degree` with the prefix fixed.
    fn all_fixing(degree: usize, fixed: usize) -> Vec<Permutation> {
        let mut tail: Vec<usize> = (fixed..degree).collect();
        let mut out = Vec::new();
        heap_permutations(&mut tail, 0, &mut |t| {
            let images: Vec<usize> = (0..fixed).chain(t.iter().copied()).collect();
            out.push(Permutation::from_images(images).unwrap());
        });
        out
    }

    fn heap_permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            heap_permutations(v, k + 1, f);
            v.swap(k, i);
        }
    }

    /// Exhaustive search for `k1 ∈ S_M(α)`, `k2 ∈ S_M(β)` with `g' = k1 g k2`.
    fn same_double_coset(g: &GroupElement, h: &GroupElement, alpha: usize, beta: usize) -> bool {
        let m = g.degree().max(h.degree()).max(alpha).max(beta) + 1;
        let g = g.extended(m);
        let h = h.extended(m);
        all_fixing(m, alpha).iter().any(|k1| {
            // k2 = g_c^{-1} k1^{-1} h_c must agree across colors and fix 1..β
            let k1inv = k1.inverse();
            let k2 = compose(&g.part(0).inverse(), &compose(&k1inv, h.part(0)));
            (0..beta).all(|x| k2.apply(x) == x)
                && (1..g.n()).all(|c| {
                    compose(&g.part(c).inverse(), &compose(&k1inv, h.part(c))) == k2
                })
        })
    }

    /// Cut-and-glue oracle: delete `a`'s black labeled faces and `b`'s white
    /// labeled faces, then identify the orphaned sides by color.
    fn glue(a: &CosetBoard, b: &CosetBoard) -> CosetBoard {
        let n = a.n();
        let (sa, sb) = (a.board().size(), b.board().size());
        let a_black: Vec<usize> = (0..sa).filter(|&f| a.black_label_of(f).is_none()).collect();
        let b_white: Vec<usize> = (0..sb).filter(|&f| b.white_label_of(f).is_none()).collect();
        // result black faces: a's unlabeled blacks, then all of b's blacks
        // result white faces: all of a's whites, then b's unlabeled whites
        let size = a_black.len() + sb;
        assert_eq!(size, sa + b_white.len());
        let white_index_b = |w: usize| sa + b_white.iter().position(|&x| x == w).unwrap();
        let mut gluings = vec![vec![0usize; size]; n];
        for c in 0..n {
            for (k, &f) in a_black.iter().enumerate() {
                gluings[c][k] = a.board().gluing(c).apply(f);
            }
            for f in 0..sb {
                let w = b.board().gluing(c).apply(f);
                gluings[c][a_black.len() + f] = match b.white_label_of(w) {
                    None => white_index_b(w),
                    Some(j) => a.board().gluing(c).apply(a.black_labels()[j - 1]),
                };
            }
        }
        let black_labels = b.black_labels().iter().map(|&f| a_black.len() + f).collect();
        let white_labels = a.white_labels().to_vec();
        CosetBoard::from_parts(
            a.alpha(),
            b.beta(),
            gluings.into_iter().map(|v| Permutation::from_images(v).unwrap()).collect(),
            black_labels,
            white_labels,
        )
        .unwrap()
    }

    #[test]
    fn from_element_examples() {
        let id = GroupElement::identity(3, 4).unwrap();
        let empty = CosetBoard::from_element(&id, 0, 0);
        assert_eq!(empty.board().size(), 0);
        assert!(empty.board().components().is_empty());

        let id2 = CosetBoard::from_element(&id, 2, 2);
        assert_eq!(id2.board().components().len(), 2);
        assert_eq!(id2, CosetBoard::from_chebureks(3, 2, 2, &[(Some(1), Some(1)), (Some(2), Some(2))]).unwrap());

        let g = GroupElement::new(vec![cyc(2, &[&[1, 2]]), Permutation::identity(2), Permutation::identity(2)]).unwrap();
        let c = CosetBoard::from_element(&g, 0, 0);
        let stats = c.component_stats();
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[0].black_faces + stats[0].white_faces, 4);
    }

    #[test]
    fn canonical_form_is_deterministic_and_relabel_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(2..=4);
            let deg = rng.gen_range(1..=8);
            let alpha = rng.gen_range(0..=deg);
            let beta = rng.gen_range(0..=deg);
            let g = GroupElement::random(n, deg, &mut rng).unwrap();
            let k1 = GroupElement::diagonal(n, &Permutation::random_fixing(deg + 2, alpha, &mut rng)).unwrap();
            let k2 = GroupElement::diagonal(n, &Permutation::random_fixing(deg + 2, beta, &mut rng)).unwrap();
            let moved = k1.compose(&g).unwrap().compose(&k2).unwrap();
            let a = CosetBoard::from_element(&g, alpha, beta);
            assert_eq!(a.canonical_form(), CosetBoard::from_element(&g, alpha, beta).canonical_form());
            assert_eq!(a, CosetBoard::from_element(&moved, alpha, beta));
            // representative round trip
            assert_eq!(a, CosetBoard::from_element(&a.representative(), alpha, beta));
        }
    }

    #[test]
    fn canonical_equality_matches_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut positives = 0;
        for _ in 0..150 {
            let n = rng.gen_range(2..=3);
            let deg = rng.gen_range(1..=4);
            let alpha = rng.gen_range(0..=2.min(deg));
            let beta = rng.gen_range(0..=2.min(deg));
            let g = GroupElement::random(n, deg, &mut rng).unwrap();
            let h = if rng.gen_bool(0.5) {
                let k1 = GroupElement::diagonal(n, &Permutation::random_fixing(deg, alpha, &mut rng)).unwrap();
                let k2 = GroupElement::diagonal(n, &Permutation::random_fixing(deg, beta, &mut rng)).unwrap();
                k1.compose(&g).unwrap().compose(&k2).unwrap()
            } else {
                GroupElement::random(n, rng.gen_range(1..=4), &mut rng).unwrap()
            };
            let canon_eq =
                CosetBoard::from_element(&g, alpha, beta) == CosetBoard::from_element(&h, alpha, beta);
            assert_eq!(canon_eq, same_double_coset(&g, &h, alpha, beta), "{g:?} {h:?} {alpha} {beta}");
            positives += canon_eq as usize;
        }
        assert!(positives > 50);
    }

    #[test]
    fn mul_matches_cut_and_glue() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let n = rng.gen_range(2..=4);
            let (alpha, beta, gamma) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
            let a = random_coset(n, alpha, beta, 6, &mut rng);
            let b = random_coset(n, beta, gamma, 6, &mut rng);
            assert_eq!(a.mul(&b).unwrap(), glue(&a, &b));
        }
    }

    #[test]
    fn gluing_two_handles_along_a_label() {
        // a: one 4-face sphere with black label 1; b: its mirror with white label 1
        let g = GroupElement::new(vec![cyc(2, &[&[1, 2]]), Permutation::identity(2), Permutation::identity(2)]).unwrap();
        let a = CosetBoard::from_element(&g, 0, 1);
        let b = CosetBoard::from_element(&g, 1, 0);
        let c = a.mul(&b).unwrap();
        assert!(c.is_closed());
        let stats = c.component_stats();
        assert_eq!(stats.len(), 1);
        // 4 + 4 faces minus the two glued ones
        assert_eq!(stats[0].black_faces, 3);
        assert_eq!(stats[0].euler_char, 2);
        assert_eq!(c, glue(&a, &b));
    }

    #[test]
    fn unit_laws_and_margin_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..100 {
            let n = rng.gen_range(2..=4);
            let (alpha, beta, gamma) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
            let a = random_coset(n, alpha, beta, 6, &mut rng);
            let b = random_coset(n, beta, gamma, 6, &mut rng);
            assert_eq!(CosetBoard::identity(n, alpha).unwrap().mul(&a).unwrap(), a);
            assert_eq!(a.mul(&CosetBoard::identity(n, beta).unwrap()).unwrap(), a);
            assert_eq!(a.mul(&b).unwrap(), a.mul_with_margin(&b, 3).unwrap());
        }
    }

    #[test]
    fn closed_boards_multiply_by_disjoint_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let a = random_coset(3, 0, 0, 5, &mut rng);
            let b = random_coset(3, 0, 0, 5, &mut rng);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab, b.mul(&a).unwrap());
            assert_eq!(
                ab.board().components().len(),
                a.board().components().len() + b.board().components().len()
            );
        }
    }

    #[test]
    fn involution_examples() {
        let id = CosetBoard::identity(3, 2).unwrap();
        assert_eq!(id.involution(), id);
        for (beta, alpha) in [(0, 1), (1, 3), (2, 2)] {
            let lam = CosetBoard::lambda(3, beta, alpha).unwrap();
            let expected: Vec<_> = (1..=alpha)
                .map(|p| (if p <= beta { Some(p) } else { None }, Some(p)))
                .chain(std::iter::empty())
                .collect();
            let mu_expected: Vec<_> = expected.iter().map(|&(b, w)| (w, b)).collect();
            assert_eq!(lam, CosetBoard::from_chebureks(3, alpha, beta, &expected).unwrap());
            assert_eq!(CosetBoard::mu(3, alpha, beta).unwrap(), CosetBoard::from_chebureks(3, beta, alpha, &mu_expected).unwrap());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..100 {
            let n = rng.gen_range(2..=4);
            let (alpha, beta, gamma) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
            let a = random_coset(n, alpha, beta, 6, &mut rng);
            let b = random_coset(n, beta, gamma, 6, &mut rng);
            assert_eq!(a.involution().involution(), a);
            assert_eq!(a.involution(), CosetBoard::from_element(&a.representative().inverse(), beta, alpha));
            assert_eq!(a.mul(&b).unwrap().involution(), b.involution().mul(&a.involution()).unwrap());
        }
    }

    #[test]
    fn theta_lambda_relations() {
        for n in [2, 3, 4] {
            for beta in 0..=3 {
                for alpha in beta..=4 {
                    let theta = CosetBoard::theta(n, alpha, beta).unwrap();
                    let mut listed: Vec<_> = (1..=beta).map(|j| (Some(j), Some(j))).collect();
                    for p in beta + 1..=alpha {
                        listed.push((Some(p), None));
                        listed.push((None, Some(p)));
                    }
                    assert_eq!(theta, CosetBoard::from_chebureks(n, alpha, alpha, &listed).unwrap());
                    assert_eq!(theta.mul(&theta).unwrap(), theta);
                    assert_eq!(theta.involution(), theta);
                    let lam = CosetBoard::lambda(n, beta, alpha).unwrap();
                    assert_eq!(lam.involution().mul(&lam).unwrap(), CosetBoard::identity(n, beta).unwrap());
                    assert_eq!(CosetBoard::identity(n, beta).unwrap().embed_end(alpha).unwrap(), theta);
                }
            }
        }
        assert_eq!(CosetBoard::theta(3, 2, 2).unwrap(), CosetBoard::identity(3, 2).unwrap());
        assert!(matches!(CosetBoard::lambda(3, 3, 2), Err(Error::AlphaBelowBeta { .. })));
    }

    #[test]
    fn embed_end_is_an_injective_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let sample: Vec<_> = (0..40).map(|_| random_coset(3, 2, 2, 5, &mut rng)).collect();
        for a in &sample {
            let e = a.embed_end(4).unwrap();
            assert_eq!(e.alpha(), 4);
            for b in &sample[..10] {
                assert_eq!(a.mul(b).unwrap().embed_end(4).unwrap(), e.mul(&b.embed_end(4).unwrap()).unwrap());
            }
            for b in &sample {
                assert_eq!(a == b, e == b.embed_end(4).unwrap());
            }
        }
        assert!(matches!(
            random_coset(3, 1, 2, 3, &mut rng).embed_end(4),
            Err(Error::NotEndomorphism { .. })
        ));
    }

    #[test]
    fn central_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let torus = GroupElement::new(vec![
            cyc(3, &[&[1, 2, 3]]),
            cyc(3, &[&[1, 3, 2]]),
            Permutation::identity(3),
        ])
        .unwrap();
        let torus = CosetBoard::from_element(&torus, 0, 0);
        assert_eq!(torus.component_stats()[0].genus, 1);
        let z = CosetBoard::identity(3, 2).unwrap().mul(&CosetBoard::identity(3, 2).unwrap()).unwrap();
        assert!(z.is_central());
        // identity(2) ⊔ closed surface: glue the closed part via representatives
        let rep_id = CosetBoard::identity(3, 2).unwrap().representative();
        let rep_t = torus.representative();
        let shifted: Vec<Permutation> = (0..3)
            .map(|c| {
                let mut images: Vec<usize> = rep_id.part(c).images().to_vec();
                images.extend(rep_t.part(c).images().iter().map(|&y| y + 2));
                Permutation::from_images(images).unwrap()
            })
            .collect();
        let central = CosetBoard::from_element(&GroupElement::new(shifted).unwrap(), 2, 2);
        assert!(central.is_central());
        assert_eq!(central.board().components().len(), 3);
        for _ in 0..50 {
            let x = random_coset(3, 2, 2, 5, &mut rng);
            assert_eq!(central.mul(&x).unwrap(), x.mul(&central).unwrap());
        }
        let g = GroupElement::new(vec![cyc(2, &[&[1, 2]]), Permutation::identity(2), Permutation::identity(2)]).unwrap();
        let non_central = CosetBoard::from_element(&g, 1, 1);
        assert!(!non_central.is_central());
        assert!(!CosetBoard::lambda(3, 1, 2).unwrap().is_central());
    }

    #[test]
    fn object_mismatch_is_rejected() {
        let a = CosetBoard::identity(3, 2).unwrap();
        let b = CosetBoard::identity(3, 1).unwrap();
        assert_eq!(a.mul(&b).unwrap_err(), Error::ObjectMismatch { left: 2, right: 1 });
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n":3,"alpha":2,"beta":1,"gluings":[[2,1,3],[1,2,3],[1,3,2]],"black_labels":{"1":3},"white_labels":{"1":1,"2":2}}"#;
        let c: CosetBoard = serde_json::from_str(text).unwrap();
        assert_eq!((c.alpha(), c.beta()), (2, 1));
        let back: CosetBoard = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<CosetBoard>(
            r#"{"n":3,"alpha":1,"beta":0,"gluings":[[1],[1],[1]],"white_labels":{}}"#
        )
        .is_err());
    }
}

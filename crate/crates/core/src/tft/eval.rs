//! Edge-labeling state sums over one board component.
//!
//! Every edge has exactly one black face, so an edge labeling is the same
//! thing as a choice of basis tuple per black face. The search assigns
//! black faces in component order and closes a white face as soon as all
//! of its `n` black neighbours are fixed, pruning on zero symbol entries.

use num_complex::Complex64;

use crate::coset::CosetBoard;
use crate::tft::symbol::SymbolTensor;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SignRule {
    /// Plain state sum.
    Plain,
    /// Per closed chain of faces joined by odd edges, `1 +` the number of
    /// faces the chain leaves through a lower color than it entered.
    Chains,
    /// `σ = Σ (l_t - 1)` over chains through `2 l_t` faces. Agrees with
    /// [`SignRule::Chains`] for `n = 2` only.
    ChainLengths,
    /// Koszul sign of the odd edges' reordering from black-face order to
    /// white-face order.
    Koszul,
}

/// One connected component prepared for enumeration.
#[derive(Clone, Debug)]
pub(crate) struct ComponentProblem {
    /// `black_dst[b][c]` is the local white face across side `c`.
    black_dst: Vec<Vec<usize>>,
    /// `white_src[w][c]` is the local black face across side `c`.
    white_src: Vec<Vec<usize>>,
    black_slot: Vec<Option<usize>>,
    white_slot: Vec<Option<usize>>,
    /// Whites that become fully determined once black `k` is assigned.
    closes_at: Vec<Vec<usize>>,
    black_rank: Vec<usize>,
    white_rank: Vec<usize>,
    /// 1-based labels of the component's labeled black faces, ascending.
    pub in_labels: Vec<usize>,
    pub out_labels: Vec<usize>,
}

/// `values[out * D^|in| + in]`, slots ordered like the label lists.
#[derive(Clone, Debug)]
pub(crate) struct LocalTensor {
    pub in_labels: Vec<usize>,
    pub out_labels: Vec<usize>,
    pub values: Vec<Complex64>,
}

pub(crate) fn component_problems(a: &CosetBoard) -> Vec<ComponentProblem> {
    let board = a.board();
    let n = board.n();
    board
        .components()
        .iter()
        .map(|comp| {
            let local_black = |f: usize| comp.black.iter().position(|&x| x == f).unwrap();
            let local_white = |f: usize| comp.white.iter().position(|&x| x == f).unwrap();
            let black_dst: Vec<Vec<usize>> = comp
                .black
                .iter()
                .map(|&b| (0..n).map(|c| local_white(board.gluing(c).apply(b))).collect())
                .collect();
            let white_src: Vec<Vec<usize>> = comp
                .white
                .iter()
                .map(|&w| (0..n).map(|c| local_black(board.inverses()[c].apply(w))).collect())
                .collect();
            let mut closes_at = vec![Vec::new(); comp.black.len()];
            for (w, src) in white_src.iter().enumerate() {
                closes_at[*src.iter().max().unwrap()].push(w);
            }

            let mut in_labels: Vec<usize> = comp.black.iter().filter_map(|&b| a.black_label_of(b)).collect();
            let mut out_labels: Vec<usize> = comp.white.iter().filter_map(|&w| a.white_label_of(w)).collect();
            in_labels.sort_unstable();
            out_labels.sort_unstable();
            let black_slot: Vec<Option<usize>> = comp
                .black
                .iter()
                .map(|&b| a.black_label_of(b).map(|j| in_labels.binary_search(&j).unwrap()))
                .collect();
            let white_slot: Vec<Option<usize>> = comp
                .white
                .iter()
                .map(|&w| a.white_label_of(w).map(|j| out_labels.binary_search(&j).unwrap()))
                .collect();
            let black_rank = comp
                .black
                .iter()
                .enumerate()
                .map(|(k, &b)| a.black_label_of(b).map_or(a.beta() + k, |j| j - 1))
                .collect();
            let white_rank = comp
                .white
                .iter()
                .enumerate()
                .map(|(k, &w)| a.white_label_of(w).map_or(a.alpha() + k, |j| j - 1))
                .collect();
            ComponentProblem {
                black_dst,
                white_src,
                black_slot,
                white_slot,
                closes_at,
                black_rank,
                white_rank,
                in_labels,
                out_labels,
            }
        })
        .collect()
}

struct Search<'a> {
    p: &'a ComponentProblem,
    h: &'a SymbolTensor,
    rule: SignRule,
    prune: bool,
    free_choices: Vec<(usize, Complex64)>,
    clamped_choices: Vec<(usize, Complex64)>,
    conj: Vec<Complex64>,
    black_t: Vec<usize>,
    white_t: Vec<usize>,
    in_stride: usize,
    values: Vec<Complex64>,
}

impl ComponentProblem {
    pub fn evaluate(&self, h: &SymbolTensor, rule: SignRule, prune: bool) -> LocalTensor {
        let d = h.total_dim();
        let free_choices = if prune {
            h.nonzeros()
        } else {
            (0..d).map(|k| (k, h.get(k))).collect()
        };
        let in_stride = d.pow(self.in_labels.len() as u32);
        let size = in_stride * d.pow(self.out_labels.len() as u32);
        let mut s = Search {
            p: self,
            h,
            rule,
            prune,
            free_choices,
            clamped_choices: (0..d).map(|k| (k, ONE)).collect(),
            conj: h.entries().iter().map(|v| v.conj()).collect(),
            black_t: vec![0; self.black_dst.len()],
            white_t: vec![0; self.white_src.len()],
            in_stride,
            values: vec![ZERO; size],
        };
        s.descend(0, ONE);
        LocalTensor {
            in_labels: self.in_labels.clone(),
            out_labels: self.out_labels.clone(),
            values: s.values,
        }
    }
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, acc: Complex64) {
        if depth == self.black_t.len() {
            self.leaf(acc);
            return;
        }
        let clamped = self.p.black_slot[depth].is_some();
        let count = if clamped {
            self.clamped_choices.len()
        } else {
            self.free_choices.len()
        };
        'choice: for k in 0..count {
            let (t, v) = if clamped {
                self.clamped_choices[k]
            } else {
                self.free_choices[k]
            };
            self.black_t[depth] = t;
            let mut val = acc * v;
            for &w in &self.p.closes_at[depth] {
                let tw: usize = (0..self.h.n())
                    .map(|c| self.h.digit(self.black_t[self.p.white_src[w][c]], c) * self.h.stride(c))
                    .sum();
                self.white_t[w] = tw;
                if self.p.white_slot[w].is_none() {
                    let cw = self.conj[tw];
                    if self.prune && cw == ZERO {
                        continue 'choice;
                    }
                    val *= cw;
                }
            }
            self.descend(depth + 1, val);
        }
    }

    fn leaf(&mut self, val: Complex64) {
        let d = self.h.total_dim();
        let mut in_idx = vec![0; self.p.in_labels.len()];
        let mut out_idx = vec![0; self.p.out_labels.len()];
        for (b, slot) in self.p.black_slot.iter().enumerate() {
            if let Some(s) = slot {
                in_idx[*s] = self.black_t[b];
            }
        }
        for (w, slot) in self.p.white_slot.iter().enumerate() {
            if let Some(s) = slot {
                out_idx[*s] = self.white_t[w];
            }
        }
        let fold = |xs: &[usize]| xs.iter().fold(0, |acc, &x| acc * d + x);
        let k = fold(&out_idx) * self.in_stride + fold(&in_idx);
        let signed = match self.rule {
            SignRule::Plain => val,
            SignRule::Chains | SignRule::ChainLengths => {
                if chain_sign_is_negative(self.p, self.h, &self.black_t, self.rule == SignRule::Chains) {
                    -val
                } else {
                    val
                }
            }
            SignRule::Koszul => {
                if koszul_is_negative(self.p, self.h, &self.black_t) {
                    -val
                } else {
                    val
                }
            }
        };
        self.values[k] += signed;
    }
}

/// Chain sign of a labeling, oriented or by lengths. Labelings where some
/// face does not have exactly 0 or 2 odd edges contribute zero for an even
/// symbol and get `+`.
fn chain_sign_is_negative(p: &ComponentProblem, h: &SymbolTensor, black_t: &[usize], oriented: bool) -> bool {
    let n = h.n();
    let nb = black_t.len();
    // odd[b][c]: edge (b, c) carries an odd basis vector
    let odd: Vec<Vec<bool>> = black_t
        .iter()
        .map(|&t| (0..n).map(|c| h.axis_parity(t, c) == 1).collect())
        .collect();
    let mut white_odd: Vec<Vec<usize>> = vec![Vec::new(); p.white_src.len()];
    let mut black_odd: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for b in 0..nb {
        for c in 0..n {
            if odd[b][c] {
                black_odd[b].push(c);
                white_odd[p.black_dst[b][c]].push(c);
            }
        }
    }
    if black_odd.iter().chain(&white_odd).any(|e| !e.is_empty() && e.len() != 2) {
        return false;
    }
    // walk each chain edge by edge; an edge is identified by (black, color)
    let mut used = vec![vec![false; n]; nb];
    let mut sigma = 0usize;
    for b0 in 0..nb {
        for &c0 in &black_odd[b0] {
            if used[b0][c0] {
                continue;
            }
            let (mut b, mut c) = (b0, c0);
            let mut faces = 0usize;
            let mut descents = 0usize;
            loop {
                used[b][c] = true;
                // cross edge (b, c) into the white face, leave by its other odd edge
                let w = p.black_dst[b][c];
                faces += 1;
                let cw = if white_odd[w][0] == c { white_odd[w][1] } else { white_odd[w][0] };
                descents += usize::from(cw < c);
                b = p.white_src[w][cw];
                c = cw;
                used[b][c] = true;
                faces += 1;
                let cb = if black_odd[b][0] == c { black_odd[b][1] } else { black_odd[b][0] };
                descents += usize::from(cb < c);
                c = cb;
                if b == b0 && c == c0 {
                    break;
                }
            }
            sigma += if oriented { 1 + descents } else { faces / 2 - 1 };
        }
    }
    sigma % 2 == 1
}

/// Inversion parity of the odd edges between their positions in
/// black-face order `(rank(b), c)` and white-face order `(rank(w), c)`.
fn koszul_is_negative(p: &ComponentProblem, h: &SymbolTensor, black_t: &[usize]) -> bool {
    let n = h.n();
    let mut odd: Vec<(usize, usize)> = Vec::new();
    for (b, &t) in black_t.iter().enumerate() {
        for c in 0..n {
            if h.axis_parity(t, c) == 1 {
                let w = p.black_dst[b][c];
                odd.push((p.black_rank[b] * n + c, p.white_rank[w] * n + c));
            }
        }
    }
    odd.sort_unstable();
    let mut inversions = 0usize;
    for i in 0..odd.len() {
        for j in i + 1..odd.len() {
            if odd[i].1 > odd[j].1 {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

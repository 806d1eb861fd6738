//! Canonical words of connected, labeled checker-board components.
//!
//! A word is produced by a breadth-first traversal from a black start face
//! that expands every face along colors `1..n` in order. Black faces expand
//! to `g_c(b)`, white faces to `g_c^{-1}(w)`. The word lists, for each black
//! face in discovery order, its label mark and the discovery indices of its
//! `n` white neighbours, then the label marks of the white faces. Taking the
//! lexicographic minimum over all black start faces makes the word depend
//! only on the isomorphism class of the labeled component.

use crate::perm::Permutation;

/// Traversal result for one component: the word plus the face orders it
/// induced (old black / white face indices in canonical order).
#[derive(Clone, Debug)]
pub(crate) struct ComponentCanon {
    pub word: Vec<u32>,
    pub black_order: Vec<usize>,
    pub white_order: Vec<usize>,
}

pub(crate) struct Traversal<'a> {
    pub gluings: &'a [Permutation],
    pub inverses: &'a [Permutation],
    pub black_marks: &'a [u32],
    pub white_marks: &'a [u32],
}

const UNSEEN: usize = usize::MAX;

impl Traversal<'_> {
    fn walk_from(
        &self,
        start: usize,
        black_idx: &mut [usize],
        white_idx: &mut [usize],
    ) -> ComponentCanon {
        let n = self.gluings.len();
        let mut black_order = vec![start];
        let mut white_order = Vec::new();
        black_idx[start] = 0;
        // Interleaved BFS queue of (is_black, face).
        let mut queue = std::collections::VecDeque::from([(true, start)]);
        while let Some((is_black, f)) = queue.pop_front() {
            for c in 0..n {
                if is_black {
                    let w = self.gluings[c].apply(f);
                    if white_idx[w] == UNSEEN {
                        white_idx[w] = white_order.len();
                        white_order.push(w);
                        queue.push_back((false, w));
                    }
                } else {
                    let b = self.inverses[c].apply(f);
                    if black_idx[b] == UNSEEN {
                        black_idx[b] = black_order.len();
                        black_order.push(b);
                        queue.push_back((true, b));
                    }
                }
            }
        }
        let mut word = Vec::with_capacity(2 + black_order.len() * (n + 1) + white_order.len());
        word.push(n as u32);
        word.push(black_order.len() as u32);
        for &b in &black_order {
            word.push(self.black_marks[b]);
            for c in 0..n {
                word.push(white_idx[self.gluings[c].apply(b)] as u32);
            }
        }
        for &w in &white_order {
            word.push(self.white_marks[w]);
        }
        for &b in &black_order {
            black_idx[b] = UNSEEN;
        }
        for &w in &white_order {
            white_idx[w] = UNSEEN;
        }
        ComponentCanon {
            word,
            black_order,
            white_order,
        }
    }

    /// Minimal word over all black faces of one component.
    pub fn canonical(&self, component_black: &[usize]) -> ComponentCanon {
        let size = self.gluings.first().map_or(0, Permutation::degree);
        let mut black_idx = vec![UNSEEN; size];
        let mut white_idx = vec![UNSEEN; size];
        let mut best: Option<ComponentCanon> = None;
        for &start in component_black {
            let cand = self.walk_from(start, &mut black_idx, &mut white_idx);
            if best.as_ref().is_none_or(|b| cand.word < b.word) {
                best = Some(cand);
            }
        }
        best.expect("component has at least one black face")
    }
}

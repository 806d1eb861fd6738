//! The quasidual polygonal complex of an n-tuple of permutations.
//!
//! Vertices are black `a_1..a_N` and white `b_1..b_N`; for each color `i`
//! there is an edge `{a_m, b_{p_i(m)}}`. For each pair of colors `i < j`
//! and each cycle of `p_i^{-1} p_j` a `2l`-gon is attached along the walk
//! `s_1 → t_1 = p_j(s_1) → s_2 = p_i^{-1}(t_1) → …`. Each edge borders
//! `n - 1` faces, so the complex is a surface only for `n = 3`, where it
//! is the dual of the checker-board.

use std::fmt::Write as _;

use serde::Serialize;

use crate::board::{palette, CheckerBoard};
use crate::error::{Error, Result};
use crate::perm::{GroupElement, Permutation};

/// A `2l`-gon: colors `(i, j)` with `i < j` (0-based) and its boundary
/// as consecutive `(s, t)` pairs, `t = p_j(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub colors: (usize, usize),
    pub walk: Vec<(usize, usize)>,
}

impl Face {
    /// Number of polygon sides, `2l`.
    pub fn sides(&self) -> usize {
        2 * self.walk.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasidualStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub is_surface: bool,
}

#[derive(Clone, Debug)]
pub struct QuasidualComplex {
    parts: Vec<Permutation>,
    faces: Vec<Face>,
    board: CheckerBoard,
}

impl QuasidualComplex {
    pub fn build(g: &GroupElement) -> Self {
        let parts = g.parts().to_vec();
        let n = parts.len();
        let size = g.degree();
        let mut faces = Vec::new();
        for i in 0..n {
            let inv_i = parts[i].inverse();
            for j in i + 1..n {
                let mut seen = vec![false; size];
                for start in 0..size {
                    if seen[start] {
                        continue;
                    }
                    let mut walk = Vec::new();
                    let mut s = start;
                    while !seen[s] {
                        seen[s] = true;
                        let t = parts[j].apply(s);
                        walk.push((s, t));
                        s = inv_i.apply(t);
                    }
                    faces.push(Face { colors: (i, j), walk });
                }
            }
        }
        QuasidualComplex {
            board: CheckerBoard::build(g),
            parts,
            faces,
        }
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    /// `N`, the number of black (and of white) vertices.
    pub fn size(&self) -> usize {
        self.board.size()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.size()
    }

    pub fn edge_count(&self) -> usize {
        self.n() * self.size()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// `sides[i][m]`: how many face sides lie on the color-`i` edge at `a_m`.
    pub fn edge_sides(&self) -> Vec<Vec<usize>> {
        let mut sides = vec![vec![0; self.size()]; self.n()];
        let inverses: Vec<Permutation> = self.parts.iter().map(Permutation::inverse).collect();
        for f in &self.faces {
            let (i, j) = f.colors;
            for &(s, t) in &f.walk {
                sides[j][s] += 1;
                sides[i][inverses[i].apply(t)] += 1;
            }
        }
        sides
    }

    /// Faces containing each vertex: black `a_m` at `m`, white `b_m` at `N + m`.
    pub fn vertex_face_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.vertex_count()];
        for f in &self.faces {
            for &(s, t) in &f.walk {
                counts[s] += 1;
                counts[self.size() + t] += 1;
            }
        }
        counts
    }

    /// Every edge borders exactly two face sides.
    pub fn is_surface(&self) -> bool {
        self.edge_sides().iter().flatten().all(|&k| k == 2)
    }

    /// Counts per connected component, in checker-board component order.
    pub fn component_stats(&self) -> Vec<QuasidualStats> {
        let n = self.n();
        let sides = self.edge_sides();
        let mut faces = vec![0; self.board.components().len()];
        for f in &self.faces {
            faces[self.board.component_of_black(f.walk[0].0)] += 1;
        }
        self.board
            .components()
            .iter()
            .zip(faces)
            .map(|(comp, faces)| QuasidualStats {
                vertices: comp.black.len() + comp.white.len(),
                edges: n * comp.black.len(),
                faces,
                is_surface: comp.black.iter().all(|&m| (0..n).all(|i| sides[i][m] == 2)),
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph quasidual {\n");
        for m in 0..self.size() {
            let _ = writeln!(out, "  a{} [shape=box];", m + 1);
        }
        for m in 0..self.size() {
            let _ = writeln!(out, "  b{} [shape=circle];", m + 1);
        }
        for (i, p) in self.parts.iter().enumerate() {
            for m in 0..self.size() {
                let _ = writeln!(
                    out,
                    "  a{} -- b{} [color={}, label={}];",
                    m + 1,
                    p.apply(m) + 1,
                    palette(i),
                    i + 1
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize)]
struct FaceJson {
    colors: [usize; 2],
    boundary: Vec<String>,
}

#[derive(Serialize)]
struct ComplexJson {
    n: usize,
    size: usize,
    vertices: usize,
    edges: usize,
    faces: Vec<FaceJson>,
}

impl Serialize for QuasidualComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson {
            n: self.n(),
            size: self.size(),
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceJson {
                    colors: [f.colors.0 + 1, f.colors.1 + 1],
                    boundary: f
                        .walk
                        .iter()
                        .flat_map(|&(s, t)| [format!("a{}", s + 1), format!("b{}", t + 1)])
                        .collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// For three colors: whether the quasidual's `(V, E, F)` equals the
/// checker-board's `(F, E, V)` on every component.
pub fn check_duality_n3(g: &GroupElement) -> Result<bool> {
    if g.n() != 3 {
        return Err(Error::WrongColorCount { expected: 3, got: g.n() });
    }
    let q = QuasidualComplex::build(g);
    Ok(q
        .component_stats()
        .iter()
        .zip(q.board.components())
        .all(|(qs, comp)| {
            let b = &comp.stats;
            qs.vertices == b.black_faces + b.white_faces && qs.edges == b.edges && qs.faces == b.vertices && qs.is_surface
        }))
}

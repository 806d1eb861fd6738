//! Checker-board surfaces of n-tuples of permutations.
//!
//! Black n-gons carry colors `1..n` anticlockwise, white n-gons clockwise.
//! Black face `i` is glued along its color-`c` side to white face `g_c(i)`.
//! Faces are the only stored cells; edges and vertices are derived.
//!
//! A vertex sits at a corner between two cyclically adjacent sides
//! `(c, c+1 mod n)`. Walking around it alternates crossing side `c+1`
//! (black to white) and side `c` (white to black), so the vertices of that
//! corner type are the orbits of `g_c^{-1} g_{c+1}` on black faces. For
//! `n = 3` every pair of colors is adjacent; for `n = 2` the pair `{1, 2}`
//! occurs at both corners of a biangle.

use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::canon::Traversal;
use crate::error::{Error, Result};
use crate::perm::{GroupElement, Permutation};

/// Edge colors used in DOT output; index 0 is color 1.
pub const PALETTE: [&str; 8] = [
    "red", "yellow", "blue", "green", "orange", "purple", "brown", "cyan",
];

pub fn palette(c: usize) -> &'static str {
    PALETTE.get(c).copied().unwrap_or("gray")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    /// 0-based colors `(c, c+1 mod n)` of the two sides meeting here.
    pub corner: (usize, usize),
    /// Black faces around the vertex in walking order.
    pub black_faces: Vec<usize>,
}

impl Vertex {
    /// Number of faces meeting at the vertex.
    pub fn valence(&self) -> usize {
        2 * self.black_faces.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub black_faces: usize,
    pub white_faces: usize,
    pub edges: usize,
    pub vertices: usize,
    pub euler_char: i64,
    pub genus: usize,
    pub is_cheburek: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub black: Vec<usize>,
    pub white: Vec<usize>,
    pub stats: ComponentStats,
}

#[derive(Clone, Debug)]
pub struct CheckerBoard {
    gluings: Vec<Permutation>,
    inverses: Vec<Permutation>,
    vertices: Vec<Vertex>,
    components: Vec<Component>,
    black_component: Vec<usize>,
}

impl PartialEq for CheckerBoard {
    fn eq(&self, other: &Self) -> bool {
        self.gluings == other.gluings
    }
}

impl Eq for CheckerBoard {}

impl CheckerBoard {
    pub fn build(g: &GroupElement) -> Self {
        let gluings = g.parts().to_vec();
        let inverses: Vec<Permutation> = gluings.iter().map(Permutation::inverse).collect();
        let size = g.degree();
        let n = g.n();

        let mut uf = UnionFind::<usize>::new(2 * size);
        for p in &gluings {
            for b in 0..size {
                uf.union(b, size + p.apply(b));
            }
        }

        let vertices = corner_vertices(&gluings, &inverses);

        // Group faces by union-find root, ordered by smallest black face.
        let mut root_slot = vec![usize::MAX; 2 * size];
        let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for b in 0..size {
            let r = uf.find(b);
            if root_slot[r] == usize::MAX {
                root_slot[r] = groups.len();
                groups.push((Vec::new(), Vec::new()));
            }
            groups[root_slot[r]].0.push(b);
        }
        for w in 0..size {
            let r = uf.find(size + w);
            groups[root_slot[r]].1.push(w);
        }

        let marks = vec![0u32; size];
        let traversal = Traversal {
            gluings: &gluings,
            inverses: &inverses,
            black_marks: &marks,
            white_marks: &marks,
        };
        let mut keyed: Vec<(Vec<u32>, usize)> = groups
            .iter()
            .enumerate()
            .map(|(k, (black, _))| (traversal.canonical(black).word, k))
            .collect();
        keyed.sort();

        let mut black_component = vec![0; size];
        for (slot, (_, k)) in keyed.iter().enumerate() {
            for &b in &groups[*k].0 {
                black_component[b] = slot;
            }
        }
        let mut vertex_counts = vec![0usize; keyed.len()];
        for v in &vertices {
            vertex_counts[black_component[v.black_faces[0]]] += 1;
        }

        let components = keyed
            .iter()
            .enumerate()
            .map(|(slot, (_, k))| {
                let (black, white) = groups[*k].clone();
                let faces = black.len() + white.len();
                let edges = n * black.len();
                let vertices = vertex_counts[slot];
                let euler_char = vertices as i64 - edges as i64 + faces as i64;
                debug_assert!(euler_char <= 2 && euler_char % 2 == 0);
                let stats = ComponentStats {
                    black_faces: black.len(),
                    white_faces: white.len(),
                    edges,
                    vertices,
                    euler_char,
                    genus: ((2 - euler_char) / 2) as usize,
                    is_cheburek: black.len() == 1,
                };
                Component {
                    black,
                    white,
                    stats,
                }
            })
            .collect();

        CheckerBoard {
            gluings,
            inverses,
            vertices,
            components,
            black_component,
        }
    }

    pub fn from_gluings(gluings: Vec<Permutation>) -> Result<Self> {
        Ok(Self::build(&GroupElement::new(gluings)?))
    }

    pub fn n(&self) -> usize {
        self.gluings.len()
    }

    /// Number of black faces (equal to the number of white faces).
    pub fn size(&self) -> usize {
        self.gluings[0].degree()
    }

    pub fn gluings(&self) -> &[Permutation] {
        &self.gluings
    }

    pub fn gluing(&self, c: usize) -> &Permutation {
        &self.gluings[c]
    }

    pub(crate) fn inverses(&self) -> &[Permutation] {
        &self.inverses
    }

    /// The group element the board encodes.
    pub fn to_element(&self) -> GroupElement {
        GroupElement::new(self.gluings.clone()).expect("board has at least two colors")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Vertices at corners whose two sides carry colors `c` and `c2`
    /// (0-based).
    pub fn vertices_for(&self, c: usize, c2: usize) -> Result<Vec<&Vertex>> {
        let n = self.n();
        for x in [c, c2] {
            if x >= n {
                return Err(Error::ColorOutOfRange(x + 1, n));
            }
        }
        if c == c2 {
            return Err(Error::SameColor(c + 1));
        }
        if (c + 1) % n != c2 && (c2 + 1) % n != c {
            return Err(Error::NotAdjacent(c + 1, c2 + 1));
        }
        Ok(self
            .vertices
            .iter()
            .filter(|v| {
                let (a, b) = v.corner;
                (a == c && b == c2) || (a == c2 && b == c)
            })
            .collect())
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Index into [`components`](Self::components) of the component holding
    /// black face `b`.
    pub fn component_of_black(&self, b: usize) -> usize {
        self.black_component[b]
    }

    pub fn face_count(&self) -> usize {
        2 * self.size()
    }

    pub fn edge_count(&self) -> usize {
        self.n() * self.size()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn euler_char(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Graphviz rendering of the bipartite dual graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph board {\n");
        for b in 0..self.size() {
            let _ = writeln!(out, "  B{} [shape=box];", b + 1);
        }
        for w in 0..self.size() {
            let _ = writeln!(out, "  W{} [shape=circle];", w + 1);
        }
        for (c, p) in self.gluings.iter().enumerate() {
            for b in 0..self.size() {
                let _ = writeln!(
                    out,
                    "  B{} -- W{} [color={}, label={}];",
                    b + 1,
                    p.apply(b) + 1,
                    palette(c),
                    c + 1
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Walks every corner type around every vertex.
fn corner_vertices(gluings: &[Permutation], inverses: &[Permutation]) -> Vec<Vertex> {
    let n = gluings.len();
    let size = gluings[0].degree();
    let mut out = Vec::new();
    let mut seen = vec![false; size];
    for c in 0..n {
        let c2 = (c + 1) % n;
        seen.iter_mut().for_each(|s| *s = false);
        for start in 0..size {
            if seen[start] {
                continue;
            }
            let mut faces = Vec::new();
            let mut b = start;
            loop {
                seen[b] = true;
                faces.push(b);
                // across side c+1 into a white face, back across side c
                let w = gluings[c2].apply(b);
                b = inverses[c].apply(w);
                if b == start {
                    break;
                }
            }
            out.push(Vertex {
                corner: (c, c2),
                black_faces: faces,
            });
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct BoardJson {
    n: usize,
    gluings: Vec<Permutation>,
}

impl Serialize for CheckerBoard {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoardJson {
            n: self.n(),
            gluings: self.gluings.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CheckerBoard {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BoardJson::deserialize(d)?;
        if raw.gluings.len() != raw.n {
            return Err(serde::de::Error::custom("\"n\" does not match the gluing count"));
        }
        CheckerBoard::from_gluings(raw.gluings).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::compose;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyc(degree: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(degree, cycles).unwrap()
    }

    #[test]
    fn identity_gives_chebureks() {
        let b = CheckerBoard::build(&GroupElement::identity(3, 5).unwrap());
        assert_eq!(b.components().len(), 5);
        for comp in b.components() {
            assert!(comp.stats.is_cheburek);
            assert_eq!(comp.stats.euler_char, 2);
            assert_eq!(
                (comp.stats.black_faces + comp.stats.white_faces, comp.stats.edges, comp.stats.vertices),
                (2, 3, 3)
            );
        }
    }

    #[test]
    fn square_cheburek_counts() {
        let b = CheckerBoard::build(&GroupElement::identity(4, 1).unwrap());
        assert_eq!((b.face_count(), b.vertex_count(), b.edge_count()), (2, 4, 4));
        assert_eq!(b.components().len(), 1);
        assert_eq!(b.components()[0].stats.genus, 0);
    }

    #[test]
    fn biangle_cheburek_is_a_sphere() {
        let b = CheckerBoard::build(&GroupElement::identity(2, 1).unwrap());
        assert_eq!((b.face_count(), b.vertex_count(), b.edge_count()), (2, 2, 2));
        assert_eq!(b.euler_char(), 2);
    }

    #[test]
    fn red_cycle_vertex() {
        // n = 3, g_red = (1 2 3), others identity
        let g = GroupElement::new(vec![
            cyc(3, &[&[1, 2, 3]]),
            Permutation::identity(3),
            Permutation::identity(3),
        ])
        .unwrap();
        let b = CheckerBoard::build(&g);
        // red–blue corner is (blue, red) = (2, 0)
        let rb = b.vertices_for(0, 2).unwrap();
        assert_eq!(rb.len(), 1);
        assert_eq!(rb[0].valence(), 6);
        let ry = b.vertices_for(0, 1).unwrap();
        assert_eq!(ry.len(), 1);
        let yb = b.vertices_for(1, 2).unwrap();
        assert_eq!(yb.len(), 3);
        assert!(yb.iter().all(|v| v.valence() == 2));
        // F = 6, E = 9, V = 5: a sphere
        assert_eq!(b.components().len(), 1);
        assert_eq!(b.components()[0].stats.euler_char, 2);
    }

    #[test]
    fn two_transpositions_sphere() {
        let t = cyc(2, &[&[1, 2]]);
        let g = GroupElement::new(vec![t.clone(), t, Permutation::identity(2)]).unwrap();
        let b = CheckerBoard::build(&g);
        assert_eq!(b.components().len(), 1);
        let s = &b.components()[0].stats;
        assert_eq!((s.black_faces + s.white_faces, s.edges, s.vertices), (4, 6, 4));
        assert_eq!(s.euler_char, 2);
    }

    #[test]
    fn vertex_query_errors() {
        let b = CheckerBoard::build(&GroupElement::identity(4, 2).unwrap());
        assert_eq!(b.vertices_for(1, 1).unwrap_err(), Error::SameColor(2));
        assert_eq!(b.vertices_for(0, 2).unwrap_err(), Error::NotAdjacent(1, 3));
        assert_eq!(b.vertices_for(3, 0).unwrap().len(), 2);
    }

    #[test]
    fn figure_pair_vertices_match_cycles() {
        let p1 = Permutation::from_one_based(&[4, 10, 9, 5, 3, 8, 2, 6, 1, 7]).unwrap();
        let p2 = Permutation::from_one_based(&[10, 5, 3, 9, 6, 4, 8, 2, 7, 1]).unwrap();
        let b = CheckerBoard::build(&GroupElement::new(vec![p1.clone(), p2.clone()]).unwrap());
        let cycles = compose(&p1, &p2.inverse()).cycles().len();
        assert_eq!(
            b.vertices().iter().filter(|v| v.corner == (0, 1)).count(),
            cycles
        );
        assert_eq!(
            b.vertices().iter().filter(|v| v.corner == (1, 0)).count(),
            cycles
        );
    }

    #[test]
    fn random_boards_are_closed_surfaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = 2 + (rand::Rng::gen_range(&mut rng, 0..3));
            let size = rand::Rng::gen_range(&mut rng, 1..=12);
            let g = GroupElement::random(n, size, &mut rng).unwrap();
            let b = CheckerBoard::build(&g);
            assert_eq!(b.to_element(), g);
            let mut total_v = 0;
            for comp in b.components() {
                let s = &comp.stats;
                assert_eq!(s.black_faces, s.white_faces);
                assert_eq!(s.edges, n * s.black_faces);
                assert!(s.euler_char <= 2 && s.euler_char % 2 == 0);
                total_v += s.vertices;
            }
            assert_eq!(total_v, b.vertex_count());
        }
    }

    #[test]
    fn dot_lists_every_edge() {
        let b = CheckerBoard::build(&GroupElement::identity(3, 2).unwrap());
        let dot = b.to_dot();
        assert!(dot.contains("B1 [shape=box]"));
        assert!(dot.contains("W2 [shape=circle]"));
        assert!(dot.contains("B2 -- W2 [color=blue, label=3]"));
        assert_eq!(dot.matches(" -- ").count(), 6);
    }

    #[test]
    fn board_json_round_trip() {
        let b: CheckerBoard =
            serde_json::from_str(r#"{"n":3,"gluings":[[2,1],[1,2],[2,1]]}"#).unwrap();
        assert_eq!(b.size(), 2);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"n":3,"gluings":[[2,1],[1,2],[2,1]]}"#);
    }
}

//! The two-color case: boards as one-dimensional complexes, their chip
//! normal forms, and Thoma characters.
//!
//! For `n = 2` a board is a disjoint union of circles made of alternating
//! black and white segments, black segment `b` meeting white segment
//! `g_red(b)` at a red point and `g_blue(b)` at a blue point. Cutting every
//! labeled segment at its midpoint leaves cycles and arcs; the red half of
//! a labeled segment is its fat endpoint, the blue half its square one.
//! Entries are black labels (the source), exits are white labels.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coset::CosetBoard;
use crate::error::{Error, Result};
use crate::perm::{CycleType, GroupElement, Permutation};
use crate::tft::{phi_super, SymbolTensor};

const RED: usize = 0;
const BLUE: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Entry,
    Exit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    Fat,
    Square,
}

impl Shape {
    fn color(self) -> usize {
        match self {
            Shape::Fat => RED,
            Shape::Square => BLUE,
        }
    }
}

/// A labeled half-segment: side, shape and 1-based label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub side: Side,
    pub shape: Shape,
    pub label: usize,
}

impl Endpoint {
    pub fn new(side: Side, shape: Shape, label: usize) -> Self {
        Endpoint { side, shape, label }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Entry => "entry",
            Side::Exit => "exit",
        };
        let shape = match self.shape {
            Shape::Fat => "fat",
            Shape::Square => "square",
        };
        write!(f, "{side}-{shape}-{}", self.label)
    }
}

impl FromStr for Endpoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidChip(format!("bad endpoint {s:?}"));
        let mut parts = s.splitn(3, '-');
        let side = match parts.next() {
            Some("entry") => Side::Entry,
            Some("exit") => Side::Exit,
            _ => return Err(bad()),
        };
        let shape = match parts.next() {
            Some("fat") => Shape::Fat,
            Some("square") => Shape::Square,
            _ => return Err(bad()),
        };
        let label = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        Ok(Endpoint { side, shape, label })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    Horizontal,
    Vertical,
    Cycle,
}

/// An arc of a chip. `len` counts complete segments; cycles have no ends.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub kind: ArcKind,
    pub ends: Option<(Endpoint, Endpoint)>,
    pub len: usize,
}

impl Arc {
    pub fn between(a: Endpoint, b: Endpoint, len: usize) -> Self {
        let kind = if a.side == b.side {
            ArcKind::Horizontal
        } else {
            ArcKind::Vertical
        };
        Arc {
            kind,
            ends: Some((a.min(b), a.max(b))),
            len,
        }
    }

    pub fn cycle(len: usize) -> Self {
        Arc {
            kind: ArcKind::Cycle,
            ends: None,
            len,
        }
    }
}

/// Normal form of a morphism `β → α` of the two-color category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chip {
    alpha: usize,
    beta: usize,
    arcs: Vec<Arc>,
}

impl Chip {
    /// Validates endpoint coverage, arc typing and length parities, and
    /// sorts the arcs.
    pub fn new(alpha: usize, beta: usize, mut arcs: Vec<Arc>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for arc in &arcs {
            match (arc.kind, arc.ends) {
                (ArcKind::Cycle, None) => {
                    if arc.len % 2 != 0 || arc.len < 4 {
                        return Err(Error::InvalidChip(format!("cycle of length {}", arc.len)));
                    }
                }
                (ArcKind::Cycle, Some(_)) | (_, None) => {
                    return Err(Error::InvalidChip("only cycles lack endpoints".into()));
                }
                (kind, Some((a, b))) => {
                    let horizontal = a.side == b.side;
                    if horizontal != (kind == ArcKind::Horizontal) {
                        return Err(Error::InvalidChip(format!("{a} and {b} cannot form a {kind:?} arc")));
                    }
                    if horizontal && a.shape == b.shape {
                        return Err(Error::InvalidChip(format!("horizontal arc {a}, {b} needs a fat and a square end")));
                    }
                    if !horizontal && a.shape != b.shape {
                        return Err(Error::InvalidChip(format!("vertical arc {a}, {b} needs equal shapes")));
                    }
                    if arc.len % 2 != usize::from(horizontal) {
                        return Err(Error::InvalidChip(format!("arc {a}, {b} has length {}", arc.len)));
                    }
                    for e in [a, b] {
                        let limit = if e.side == Side::Entry { beta } else { alpha };
                        if e.label == 0 || e.label > limit {
                            return Err(Error::InvalidChip(format!("{e} out of range")));
                        }
                        if seen.insert(e, ()).is_some() {
                            return Err(Error::InvalidChip(format!("{e} used twice")));
                        }
                    }
                }
            }
        }
        if seen.len() != 2 * (alpha + beta) {
            return Err(Error::InvalidChip("some endpoints are not attached".into()));
        }
        for arc in &mut arcs {
            if let Some((a, b)) = arc.ends {
                arc.ends = Some((a.min(b), a.max(b)));
            }
        }
        arcs.sort();
        Ok(Chip { alpha, beta, arcs })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn identity(beta: usize) -> Self {
        let arcs = (1..=beta)
            .flat_map(|j| {
                [Shape::Fat, Shape::Square]
                    .map(|s| Arc::between(Endpoint::new(Side::Entry, s, j), Endpoint::new(Side::Exit, s, j), 0))
            })
            .collect();
        Chip::new(beta, beta, arcs).expect("identity chip is valid")
    }

    fn arc_at(&self) -> BTreeMap<Endpoint, usize> {
        let mut at = BTreeMap::new();
        for (k, arc) in self.arcs.iter().enumerate() {
            if let Some((a, b)) = arc.ends {
                at.insert(a, k);
                at.insert(b, k);
            }
        }
        at
    }
}

fn other_end(arc: &Arc, e: Endpoint) -> Endpoint {
    let (a, b) = arc.ends.expect("arc with ends");
    if a == e {
        b
    } else {
        a
    }
}

fn require_two_colors(n: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::WrongColorCount { expected: 2, got: n });
    }
    Ok(())
}

/// Cuts the labeled segments of a two-color board.
pub fn chip_from_coset(a: &CosetBoard) -> Result<Chip> {
    require_two_colors(a.n())?;
    let board = a.board();
    let g = board.gluings();
    let inv = board.inverses();
    let mut arcs = Vec::new();
    let mut done = std::collections::BTreeSet::new();

    let starts = (1..=a.beta())
        .flat_map(|j| [Shape::Fat, Shape::Square].map(|s| Endpoint::new(Side::Entry, s, j)))
        .chain((1..=a.alpha()).flat_map(|j| [Shape::Fat, Shape::Square].map(|s| Endpoint::new(Side::Exit, s, j))));
    for start in starts {
        if done.contains(&start) {
            continue;
        }
        // current segment is (is_black, face); leave it through `color`
        let (mut black, mut face) = match start.side {
            Side::Entry => (true, a.black_labels()[start.label - 1]),
            Side::Exit => (false, a.white_labels()[start.label - 1]),
        };
        let mut color = start.shape.color();
        let mut len = 0;
        let end = loop {
            face = if black { g[color].apply(face) } else { inv[color].apply(face) };
            black = !black;
            let label = if black { a.black_label_of(face) } else { a.white_label_of(face) };
            if let Some(j) = label {
                let side = if black { Side::Entry } else { Side::Exit };
                let shape = if color == RED { Shape::Fat } else { Shape::Square };
                break Endpoint::new(side, shape, j);
            }
            len += 1;
            color = 1 - color;
        };
        done.insert(start);
        done.insert(end);
        arcs.push(Arc::between(start, end, len));
    }
    for comp in board.components() {
        let labeled = comp.black.iter().any(|&b| a.black_label_of(b).is_some())
            || comp.white.iter().any(|&w| a.white_label_of(w).is_some());
        if !labeled {
            arcs.push(Arc::cycle(comp.black.len() + comp.white.len()));
        }
    }
    Chip::new(a.alpha(), a.beta(), arcs)
}

/// Rebuilds the board of a chip.
pub fn chip_to_coset(chip: &Chip) -> Result<CosetBoard> {
    let mut blacks = chip.beta;
    let mut whites = chip.alpha;
    // links[c] holds (black, white) pairs with g_c(black) = white
    let mut links: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    let mut link = |black: bool, face: usize, other: usize, color: usize| {
        if black {
            links[color].push((face, other));
        } else {
            links[color].push((other, face));
        }
    };
    for arc in &chip.arcs {
        match arc.ends {
            None => {
                let l = arc.len / 2;
                let (b0, w0) = (blacks, whites);
                for i in 0..l {
                    link(true, b0 + i, w0 + i, RED);
                    link(true, b0 + (i + 1) % l, w0 + i, BLUE);
                }
                blacks += l;
                whites += l;
            }
            Some((start, end)) => {
                let face_of = |e: Endpoint| (e.side == Side::Entry, e.label - 1);
                let (mut black, mut face) = face_of(start);
                let mut color = start.shape.color();
                for _ in 0..arc.len {
                    let next = if black {
                        whites += 1;
                        whites - 1
                    } else {
                        blacks += 1;
                        blacks - 1
                    };
                    link(black, face, next, color);
                    black = !black;
                    face = next;
                    color = 1 - color;
                }
                let (end_black, end_face) = face_of(end);
                if end_black == black || end.shape.color() != color {
                    return Err(Error::InvalidChip(format!("arc {start}, {end} of length {} does not close", arc.len)));
                }
                link(black, face, end_face, color);
            }
        }
    }
    if blacks != whites {
        return Err(Error::InvalidChip("black and white segment counts differ".into()));
    }
    let gluings = links
        .iter()
        .map(|pairs| {
            let mut images = vec![usize::MAX; blacks];
            for &(b, w) in pairs {
                images[b] = w;
            }
            Permutation::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    CosetBoard::from_parts(chip.alpha, chip.beta, gluings, (0..chip.beta).collect(), (0..chip.alpha).collect())
}

/// `a ∘ b` for `a : β → α`, `b : γ → β`: entries of `a` are joined to the
/// exits of `b` with the same label and shape, and lengths add.
pub fn compose_chips(a: &Chip, b: &Chip) -> Result<Chip> {
    if a.beta != b.alpha {
        return Err(Error::ObjectMismatch {
            left: a.beta,
            right: b.alpha,
        });
    }
    let at_a = a.arc_at();
    let at_b = b.arc_at();
    // arcs are addressed as (0 = a / 1 = b, index)
    let chips = [a, b];
    let ats = [&at_a, &at_b];
    let mut used = [vec![false; a.arcs.len()], vec![false; b.arcs.len()]];
    let mut arcs = Vec::new();

    // follow from endpoint `e` of chip `k` across junctions until an outer end
    let walk = |mut k: usize, mut e: Endpoint, used: &mut [Vec<bool>; 2]| -> (Option<Endpoint>, usize) {
        let mut len = 0;
        loop {
            let idx = ats[k][&e];
            if used[k][idx] {
                return (None, len);
            }
            used[k][idx] = true;
            let arc = &chips[k].arcs[idx];
            len += arc.len;
            let far = other_end(arc, e);
            let inner = (k == 0 && far.side == Side::Entry) || (k == 1 && far.side == Side::Exit);
            if !inner {
                return (Some(far), len);
            }
            let side = if k == 0 { Side::Exit } else { Side::Entry };
            e = Endpoint::new(side, far.shape, far.label);
            k = 1 - k;
        }
    };

    let outer = (1..=a.alpha)
        .flat_map(|j| [Shape::Fat, Shape::Square].map(|s| (0, Endpoint::new(Side::Exit, s, j))))
        .chain((1..=b.beta).flat_map(|j| [Shape::Fat, Shape::Square].map(|s| (1, Endpoint::new(Side::Entry, s, j)))));
    for (k, e) in outer {
        let idx = ats[k][&e];
        if used[k][idx] {
            continue;
        }
        let (far, len) = walk(k, e, &mut used);
        arcs.push(Arc::between(e, far.expect("open chains end outside"), len));
    }
    for (k, chip) in chips.iter().enumerate() {
        for (idx, arc) in chip.arcs.iter().enumerate() {
            if used[k][idx] {
                continue;
            }
            match arc.ends {
                None => {
                    used[k][idx] = true;
                    arcs.push(arc.clone());
                }
                Some((start, _)) => {
                    let (_, len) = walk(k, start, &mut used);
                    // a bare two-segment circle is an empty cheburek
                    if len > 2 {
                        arcs.push(Arc::cycle(len));
                    }
                }
            }
        }
    }
    Chip::new(a.alpha, b.beta, arcs)
}

#[derive(Serialize, Deserialize)]
struct ArcJson {
    kind: ArcKind,
    #[serde(default)]
    ends: Vec<String>,
    len: usize,
}

#[derive(Serialize, Deserialize)]
struct ChipJson {
    alpha: usize,
    beta: usize,
    arcs: Vec<ArcJson>,
}

impl Serialize for Chip {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChipJson {
            alpha: self.alpha,
            beta: self.beta,
            arcs: self
                .arcs
                .iter()
                .map(|arc| ArcJson {
                    kind: arc.kind,
                    ends: arc.ends.map_or(Vec::new(), |(a, b)| vec![a.to_string(), b.to_string()]),
                    len: arc.len,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chip {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ChipJson::deserialize(d)?;
        let arcs = raw
            .arcs
            .into_iter()
            .map(|arc| {
                let ends = match arc.ends.as_slice() {
                    [] => None,
                    [a, b] => Some((a.parse()?, b.parse()?)),
                    _ => return Err(Error::InvalidChip("an arc has two ends".into())),
                };
                Ok(Arc {
                    kind: arc.kind,
                    ends,
                    len: arc.len,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Chip::new(raw.alpha, raw.beta, arcs).map_err(D::Error::custom)
    }
}

/// Thoma parameters: nonincreasing nonnegative `alphas` and `betas` with
/// total mass at most 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThomaParams {
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

const MASS_TOL: f64 = 1e-12;

impl ThomaParams {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        for (name, xs) in [("alphas", &alphas), ("betas", &betas)] {
            if xs.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::InvalidThomaParams(format!("{name} must be nonnegative")));
            }
            if xs.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidThomaParams(format!("{name} must be nonincreasing")));
            }
        }
        let total: f64 = alphas.iter().chain(&betas).sum();
        if total > 1.0 + MASS_TOL {
            return Err(Error::InvalidThomaParams(format!("total mass {total} exceeds 1")));
        }
        Ok(ThomaParams { alphas, betas })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// `Σ α_j^k - Σ (-β_j)^k`.
    pub fn power_sum(&self, k: usize) -> f64 {
        let k = k as i32;
        self.alphas.iter().map(|a| a.powi(k)).sum::<f64>() - self.betas.iter().map(|b| (-b).powi(k)).sum::<f64>()
    }
}

/// `χ = Π_{k≥2} (Σ α_j^k - Σ (-β_j)^k)^{r_k}`; fixed points contribute 1.
pub fn thoma_character(t: &CycleType, p: &ThomaParams) -> f64 {
    t.counts
        .iter()
        .filter(|(&k, _)| k >= 2)
        .map(|(&k, &r)| p.power_sum(k).powi(r as i32))
        .product()
}

/// `|Φ_h((g, id)) - χ(g)|` for the graded diagonal symbol with even
/// weights `α` and odd weights `β`.
pub fn thoma_vs_phi(g: &Permutation, p: &ThomaParams) -> Result<f64> {
    let total: f64 = p.alphas.iter().chain(&p.betas).sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::NotNormalized(total));
    }
    let h = SymbolTensor::diagonal_graded(&p.alphas, &p.betas)?;
    let pair = GroupElement::new(vec![g.clone(), Permutation::identity(g.degree())])?;
    let value = phi_super(&CosetBoard::from_element(&pair, 0, 0), &h)?;
    Ok((value - thoma_character(&g.cycle_type(), p)).norm())
}

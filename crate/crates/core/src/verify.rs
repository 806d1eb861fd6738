//! Batch verification of the engine's structural and numerical claims.
//!
//! Every check draws its inputs from a ChaCha stream seeded by the run seed
//! and the check number, so a run is reproducible from one `u64`.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::board::CheckerBoard;
use crate::chips::{chip_from_coset, chip_to_coset, compose_chips, thoma_vs_phi, Chip, ThomaParams};
use crate::coset::CosetBoard;
use crate::error::{Error, Result};
use crate::perm::{compose, GroupElement, Permutation};
use crate::quasidual::{check_duality_n3, QuasidualComplex};
use crate::sample::{random_coset, random_even_symbol, random_thoma_weights};
use crate::tft::{
    check_homomorphism, operator, oracle_operator, phi, phi_super, phi_super_by_lengths, random_unitary,
    SymbolTensor,
};

/// Absolute tolerance of every numerical comparison.
pub const TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub max_deviation: Option<f64>,
    pub detail: String,
    pub wall_time_ms: u128,
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
    max_dev: Option<f64>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn deviation(&mut self, dev: f64, what: impl FnOnce() -> String) {
        self.max_dev = Some(self.max_dev.map_or(dev, |m| m.max(dev)));
        self.check(dev <= TOLERANCE, || format!("{} (deviation {dev:.3e})", what()));
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

type CheckFn = fn(&mut ChaCha8Rng, &mut Tally) -> Result<()>;

struct Check {
    name: &'static str,
    limit: Option<Duration>,
    run: CheckFn,
}

const CHECKS: [Check; 11] = [
    Check {
        name: "four-color cheburek counts",
        limit: Some(Duration::from_secs(1)),
        run: cheburek_counts,
    },
    Check {
        name: "vertices are cycles of corner products",
        limit: None,
        run: vertex_cycles,
    },
    Check {
        name: "category laws",
        limit: Some(Duration::from_secs(10)),
        run: category_laws,
    },
    Check {
        name: "theta, lambda and embedding relations",
        limit: None,
        run: theta_relations,
    },
    Check {
        name: "center of End(alpha)",
        limit: None,
        run: center,
    },
    Check {
        name: "operators form a representation",
        limit: Some(Duration::from_secs(60)),
        run: representation,
    },
    Check {
        name: "state sums match the tensor oracle",
        limit: None,
        run: oracle_agreement,
    },
    Check {
        name: "spherical function remarks",
        limit: None,
        run: spherical_remarks,
    },
    Check {
        name: "Thoma characters from super state sums",
        limit: None,
        run: thoma,
    },
    Check {
        name: "chip calculus",
        limit: None,
        run: chip_calculus,
    },
    Check {
        name: "three-color duality",
        limit: None,
        run: duality,
    },
];

/// Number of checks; ids run from 1.
pub const COUNT: usize = CHECKS.len();

pub fn name(id: usize) -> Option<&'static str> {
    CHECKS.get(id.wrapping_sub(1)).map(|s| s.name)
}

/// Runs check `id` (1-based). Panics on an unknown id.
pub fn run(id: usize, seed: u64) -> Outcome {
    let check = &CHECKS[id - 1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(id as u64));
    let mut tally = Tally::default();
    let start = Instant::now();
    let result = (check.run)(&mut rng, &mut tally);
    let elapsed = start.elapsed();

    let mut parts = Vec::new();
    let mut passed = tally.failures.is_empty();
    if let Err(e) = result {
        passed = false;
        parts.push(format!("error: {e}"));
    }
    if let Some(limit) = check.limit {
        if elapsed > limit {
            passed = false;
            parts.push(format!("took {elapsed:?}, limit {limit:?}"));
        }
    }
    if !tally.failures.is_empty() {
        let shown: Vec<&str> = tally.failures.iter().filter(|s| !s.is_empty()).map(String::as_str).collect();
        parts.push(format!("{} of {} cases failed: {}", tally.failures.len(), tally.cases, shown.join("; ")));
    }
    parts.extend(tally.notes);
    Outcome {
        id,
        name: check.name,
        passed,
        cases: tally.cases,
        max_deviation: tally.max_dev,
        detail: parts.join("; "),
        wall_time_ms: elapsed.as_millis(),
    }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    (1..=COUNT).map(|id| run(id, seed)).collect()
}

fn cheburek_counts(_: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = GroupElement::identity(4, 1)?;
    let board = CheckerBoard::build(&g);
    let counts = (board.face_count(), board.vertex_count(), board.edge_count());
    t.check(counts == (2, 4, 4), || format!("board (F, V, E) = {counts:?}"));
    let q = QuasidualComplex::build(&g);
    let counts = (q.face_count(), q.vertex_count(), q.edge_count());
    t.check(counts == (6, 2, 4), || format!("quasidual (F, V, E) = {counts:?}"));
    Ok(())
}

fn vertex_cycles(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for _ in 0..200 {
        let n = rng.gen_range(2..=4);
        let deg = rng.gen_range(1..=12);
        let g = GroupElement::random(n, deg, rng)?;
        let board = CheckerBoard::build(&g);
        for c in 0..n {
            let c2 = (c + 1) % n;
            let product = compose(g.part(c), &g.part(c2).inverse()).extended(deg);
            let mut expected: Vec<usize> = product.cycles().iter().map(|cy| 2 * cy.len()).collect();
            board.vertices_for(c, c2)?;
            let mut got: Vec<usize> = board
                .vertices()
                .iter()
                .filter(|v| v.corner == (c, c2))
                .map(|v| v.valence())
                .collect();
            expected.sort_unstable();
            got.sort_unstable();
            t.check(got == expected, || format!("g = {g:?}, corner ({}, {})", c + 1, c2 + 1));
        }
        for c in 0..n {
            for c2 in c + 2..n {
                if (c2 + 1) % n != c {
                    t.check(board.vertices_for(c, c2).is_err(), || format!("colors {} and {} share vertices", c + 1, c2 + 1));
                }
            }
        }
    }
    Ok(())
}

/// Another representative of `a`: padded by `extra` fixed points, then
/// multiplied by random elements of `K(α)` on the left and `K(β)` on the
/// right.
fn shuffled_representative(a: &CosetBoard, extra: usize, rng: &mut ChaCha8Rng) -> Result<GroupElement> {
    let p = a.representative();
    let deg = p.degree() + extra;
    let p = p.extended(deg);
    let left = GroupElement::diagonal(a.n(), &Permutation::random_fixing(deg, a.alpha(), rng))?;
    let right = GroupElement::diagonal(a.n(), &Permutation::random_fixing(deg, a.beta(), rng))?;
    left.compose(&p)?.compose(&right)
}

fn category_laws(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for _ in 0..100 {
        let n = rng.gen_range(2..=3);
        let objs: Vec<usize> = (0..4).map(|_| rng.gen_range(0..=3)).collect();
        let mut boards = Vec::new();
        for k in 0..3 {
            let deg = rng.gen_range(1..=5);
            boards.push(random_coset(n, deg, objs[k], objs[k + 1], rng));
        }
        let (a, b, c) = (&boards[0], &boards[1], &boards[2]);
        let ab = a.mul(b)?;
        let left = ab.mul(c)?;
        let right = a.mul(&b.mul(c)?)?;
        t.check(left == right, || format!("associativity fails for {a:?}, {b:?}, {c:?}"));
        t.check(CosetBoard::identity(n, a.alpha())?.mul(a)? == *a, || format!("left unit fails for {a:?}"));
        t.check(a.mul(&CosetBoard::identity(n, a.beta())?)? == *a, || format!("right unit fails for {a:?}"));
        t.check(ab.involution() == b.involution().mul(&a.involution())?, || {
            format!("involution is not an anti-homomorphism on {a:?}, {b:?}")
        });
        t.check(a.mul_with_margin(b, 3)? == ab, || format!("shift bound changes {a:?} ∘ {b:?}"));
        let extra = rng.gen_range(0..=2);
        let p = shuffled_representative(a, extra, rng)?;
        let q = shuffled_representative(b, extra, rng)?;
        let bound = p.degree().max(q.degree()).max(a.alpha()).max(a.beta()).max(b.beta());
        t.check(a.mul_via(&p, &q, b.beta(), bound)? == ab, || {
            format!("representatives change {a:?} ∘ {b:?}")
        });
    }
    Ok(())
}

fn theta_relations(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for n in 2..=4 {
        for alpha in 0..=4 {
            for beta in 0..=alpha {
                let th = CosetBoard::theta(n, alpha, beta)?;
                t.check(th.mul(&th)? == th, || format!("θ² ≠ θ for n={n}, ({alpha}, {beta})"));
                t.check(th.involution() == th, || format!("θ□ ≠ θ for n={n}, ({alpha}, {beta})"));
                let lam = CosetBoard::lambda(n, beta, alpha)?;
                t.check(lam.involution().mul(&lam)? == CosetBoard::identity(n, beta)?, || {
                    format!("λ□λ ≠ 1 for n={n}, ({alpha}, {beta})")
                });
            }
        }
    }
    for n in 2..=3 {
        let mut images: HashMap<CosetBoard, CosetBoard> = HashMap::new();
        for _ in 0..30 {
            let a = random_coset(n, rng.gen_range(1..=4), 2, 2, rng);
            let b = random_coset(n, rng.gen_range(1..=4), 2, 2, rng);
            let ea = a.embed_end(4)?;
            let eb = b.embed_end(4)?;
            t.check(a.mul(&b)?.embed_end(4)? == ea.mul(&eb)?, || format!("embedding is not multiplicative on {a:?}, {b:?}"));
            images.insert(a, ea);
            images.insert(b, eb);
        }
        let distinct: std::collections::HashSet<&CosetBoard> = images.values().collect();
        t.check(distinct.len() == images.len(), || format!("embedding identifies distinct elements for n={n}"));
    }
    Ok(())
}

fn center(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for n in 2..=3 {
        for alpha in 1..=3 {
            let sample: Vec<CosetBoard> = (0..50)
                .map(|_| random_coset(n, rng.gen_range(1..=5), alpha, alpha, rng))
                .collect();
            for _ in 0..3 {
                let closed = GroupElement::random(n, rng.gen_range(1..=4), rng)?;
                let z = CosetBoard::from_element(&GroupElement::identity(n, alpha)?.direct_sum(&closed)?, alpha, alpha);
                t.check(z.is_central(), || format!("{z:?} is not recognized as central"));
                for b in &sample {
                    t.check(z.mul(b)? == b.mul(&z)?, || format!("{z:?} does not commute with {b:?}"));
                }
            }
            if alpha >= 2 {
                let swap = Permutation::from_cycles(alpha, &[&[1, 2]])?;
                let mut parts = vec![Permutation::identity(alpha); n];
                parts[0] = swap;
                let x = CosetBoard::from_element(&GroupElement::new(parts)?, alpha, alpha);
                t.check(!x.is_central(), || format!("{x:?} is flagged central"));
                let mut witnessed = false;
                for b in &sample {
                    if x.mul(b)? != b.mul(&x)? {
                        witnessed = true;
                        break;
                    }
                }
                t.check(witnessed, || format!("{x:?} commutes with every sampled element"));
            }
        }
    }
    Ok(())
}

/// Largest `|ρ(a∘b) - ρ(a)ρ(b)|` over `pairs` random composable pairs with
/// objects at most 2 and a random unit symbol of shape `dims`.
pub fn homomorphism_sweep(dims: &[usize], pairs: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if dims.len() < 2 || dims.contains(&0) {
        return Err(Error::InvalidTensor(format!("unusable dims {dims:?}")));
    }
    let h = SymbolTensor::random_unit(dims, &mut rng);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let (alpha, beta, gamma) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
        let a = random_coset(dims.len(), rng.gen_range(1..=3), alpha, beta, &mut rng);
        let b = random_coset(dims.len(), rng.gen_range(1..=3), beta, gamma, &mut rng);
        worst = worst.max(check_homomorphism(&a, &b, &h)?);
    }
    Ok(worst)
}

fn representation(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let h = SymbolTensor::random_unit(&[2, 2, 2], rng);
    for _ in 0..50 {
        let (alpha, beta, gamma) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
        let a = random_coset(3, rng.gen_range(1..=3), alpha, beta, rng);
        let b = random_coset(3, rng.gen_range(1..=3), beta, gamma, rng);
        let dev = check_homomorphism(&a, &b, &h)?;
        t.deviation(dev, || format!("{a:?} ∘ {b:?}"));
    }
    Ok(())
}

fn oracle_agreement(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for dims in [&[2, 2][..], &[2, 2, 2], &[2, 1, 2], &[1, 2]] {
        let h = SymbolTensor::random_unit(dims, rng);
        for _ in 0..25 {
            let deg = rng.gen_range(1..=4);
            let g = GroupElement::random(dims.len(), deg, rng)?;
            let (alpha, beta) = (rng.gen_range(0..=deg.min(2)), rng.gen_range(0..=deg.min(2)));
            let a = CosetBoard::from_element(&g, alpha, beta);
            let dev = operator(&a, &h)?.max_abs_diff(&oracle_operator(&g, &h, alpha, beta, deg)?);
            t.deviation(dev, || format!("plain, dims {dims:?}, g = {g:?}, ({alpha}, {beta})"));
        }
    }
    // every element for the smallest sizes, all label counts
    for (n, deg) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let dims = vec![2; n];
        let plain = SymbolTensor::random_unit(&dims, rng);
        let graded = random_even_symbol(&dims, rng);
        for g in all_elements(n, deg)? {
            for alpha in 0..=deg.min(2) {
                for beta in 0..=deg.min(2) {
                    let a = CosetBoard::from_element(&g, alpha, beta);
                    for h in [&plain, &graded] {
                        let dev = operator(&a, h)?.max_abs_diff(&oracle_operator(&g, h, alpha, beta, deg)?);
                        t.deviation(dev, || format!("exhaustive, g = {g:?}, ({alpha}, {beta})"));
                    }
                }
            }
        }
    }
    let mut length_rule_misses = 0;
    let mut closed_cases = 0;
    for dims in [&[2, 2][..], &[2, 2, 2]] {
        let h = random_even_symbol(dims, rng);
        for _ in 0..40 {
            let deg = rng.gen_range(1..=4);
            let g = GroupElement::random(dims.len(), deg, rng)?;
            let (alpha, beta) = (rng.gen_range(0..=deg.min(2)), rng.gen_range(0..=deg.min(2)));
            let a = CosetBoard::from_element(&g, alpha, beta);
            let dev = operator(&a, &h)?.max_abs_diff(&oracle_operator(&g, &h, alpha, beta, deg)?);
            t.deviation(dev, || format!("graded, dims {dims:?}, g = {g:?}, ({alpha}, {beta})"));

            let closed = CosetBoard::from_element(&g, 0, 0);
            let reference = oracle_operator(&g, &h, 0, 0, deg)?.matrix()[(0, 0)];
            let dev = (phi_super(&closed, &h)? - reference).norm();
            t.deviation(dev, || format!("super state sum, dims {dims:?}, g = {g:?}"));
            closed_cases += 1;
            if (phi_super_by_lengths(&closed, &h)? - reference).norm() > TOLERANCE {
                length_rule_misses += 1;
            }
        }
    }
    t.note(format!(
        "sign Σ(l_t - 1) alone misses the oracle on {length_rule_misses} of {closed_cases} closed graded boards"
    ));
    Ok(())
}

fn all_permutations(deg: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images: Vec<usize> = (0..deg).collect();
    fn rec(k: usize, images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if k == images.len() {
            out.push(Permutation::from_images(images.clone()).expect("a rearrangement"));
            return;
        }
        for i in k..images.len() {
            images.swap(k, i);
            rec(k + 1, images, out);
            images.swap(k, i);
        }
    }
    rec(0, &mut images, &mut out);
    out
}

fn all_elements(n: usize, deg: usize) -> Result<Vec<GroupElement>> {
    let perms = all_permutations(deg);
    let mut tuples: Vec<Vec<Permutation>> = vec![Vec::new()];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                perms.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    tuples.into_iter().map(GroupElement::new).collect()
}

fn spherical_remarks(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for dims in [&[2, 2][..], &[2, 2, 2]] {
        let n = dims.len();
        let h = SymbolTensor::random_unit(dims, rng);
        let cheburek = GroupElement::identity(n, 1)?;
        let value = oracle_operator(&cheburek, &h, 0, 0, 1)?.matrix()[(0, 0)];
        t.deviation((value - 1.0).norm(), || format!("cheburek value {value} for dims {dims:?}"));

        let h2 = SymbolTensor::random_unit(&vec![2; n - 1].into_iter().chain([1]).collect::<Vec<_>>(), rng);
        let product = h.tensor_product(&h2)?;
        let unitaries: Vec<_> = dims.iter().map(|&d| random_unitary(d, rng)).collect();
        let gauged = h.apply_local(&unitaries)?;
        for _ in 0..20 {
            let g = GroupElement::random(n, rng.gen_range(1..=4), rng)?;
            let g2 = GroupElement::random(n, rng.gen_range(1..=3), rng)?;
            let a = CosetBoard::from_element(&g, 0, 0);
            let b = CosetBoard::from_element(&g2, 0, 0);
            let union = CosetBoard::from_element(&g.direct_sum(&g2)?, 0, 0);
            let with_cheburek = CosetBoard::from_element(&g.direct_sum(&cheburek)?, 0, 0);
            let pa = phi(&a, &h)?;

            t.deviation((phi(&with_cheburek, &h)? - pa).norm(), || format!("cheburek factor on {g:?}"));
            t.deviation((phi(&union, &h)? - pa * phi(&b, &h)?).norm(), || format!("union of {g:?} and {g2:?}"));
            t.deviation((phi(&a, &product)? - pa * phi(&a, &h2)?).norm(), || format!("tensor product on {g:?}"));
            t.deviation((phi(&a, &gauged)? - pa).norm(), || format!("gauge on {g:?}"));
        }
    }
    Ok(())
}

fn thoma(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let mut params = vec![ThomaParams::new(vec![0.6, 0.4], vec![])?, ThomaParams::new(vec![0.5], vec![0.5])?];
    for _ in 0..20 {
        let (alphas, betas) = random_thoma_weights(3, 2, rng);
        params.push(ThomaParams::new(alphas, betas)?);
    }
    for p in &params {
        for k in 1..=6 {
            let cycle: Vec<usize> = (1..=k).collect();
            let g = Permutation::from_cycles(k, &[&cycle[..]])?;
            t.deviation(thoma_vs_phi(&g, p)?, || format!("{k}-cycle, {p:?}"));
        }
        let g = Permutation::random(rng.gen_range(2..=8), rng);
        t.deviation(thoma_vs_phi(&g, p)?, || format!("{g}, {p:?}"));
    }
    Ok(())
}

fn chip_is_valid(chip: &Chip) -> bool {
    Chip::new(chip.alpha(), chip.beta(), chip.arcs().to_vec()).as_ref() == Ok(chip)
}

fn chip_calculus(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for _ in 0..100 {
        let (alpha, beta, gamma) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let a = random_coset(2, rng.gen_range(1..=8), alpha, beta, rng);
        let b = random_coset(2, rng.gen_range(1..=8), beta, gamma, rng);
        let ab = a.mul(&b)?;
        let (ca, cb, cab) = (chip_from_coset(&a)?, chip_from_coset(&b)?, chip_from_coset(&ab)?);
        for (board, chip) in [(&a, &ca), (&b, &cb), (&ab, &cab)] {
            t.check(chip_is_valid(chip), || format!("chip of {board:?} violates arc rules"));
            t.check(chip_to_coset(chip)? == *board, || format!("round trip fails for {board:?}"));
        }
        t.check(compose_chips(&ca, &cb)? == cab, || format!("chip composition differs for {a:?} ∘ {b:?}"));
    }
    Ok(())
}

fn duality(rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    for _ in 0..100 {
        let g = GroupElement::random(3, rng.gen_range(1..=10), rng)?;
        t.check(check_duality_n3(&g)?, || format!("duality fails for {g:?}"));
    }
    Ok(())
}

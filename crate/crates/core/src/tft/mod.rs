//! The checker TFT: partition functions of closed boards and the operators
//! `ρ(a) : V^{⊗β} → V^{⊗α}` of labeled boards, for a symbol tensor
//! `h ∈ V_1 ⊗ … ⊗ V_n`.
//!
//! An edge labeling assigns a basis index of `V_c` to every `c`-colored
//! edge. Each unlabeled black face contributes `h` at its tuple and each
//! unlabeled white face `conj h`. In an operator entry the labeled black
//! faces are clamped to the input tuple (slot = label) and the labeled
//! white faces to the output tuple.

mod eval;
mod oracle;
mod symbol;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coset::CosetBoard;
use crate::error::{Error, Result};
use crate::exec::Exec;
use eval::{component_problems, LocalTensor, SignRule};

pub use oracle::oracle_operator;
pub use symbol::{random_unitary, SymbolTensor};

/// A linear map `V^{⊗source} → V^{⊗target}` with `V = V_1 ⊗ … ⊗ V_n`.
///
/// Rows index output tuples, columns input tuples; slot 1 is the most
/// significant digit.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixOperator {
    target: usize,
    source: usize,
    slot_dim: usize,
    matrix: DMatrix<Complex64>,
}

impl MatrixOperator {
    pub fn new(target: usize, source: usize, slot_dim: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let rows = slot_dim.pow(target as u32);
        let cols = slot_dim.pow(source as u32);
        if matrix.nrows() != rows || matrix.ncols() != cols {
            return Err(Error::InvalidTensor(format!(
                "matrix is {}x{}, expected {rows}x{cols}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(MatrixOperator {
            target,
            source,
            slot_dim,
            matrix,
        })
    }

    pub fn identity(slot_dim: usize, slots: usize) -> Self {
        let d = slot_dim.pow(slots as u32);
        MatrixOperator {
            target: slots,
            source: slots,
            slot_dim,
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn slot_dim(&self) -> usize {
        self.slot_dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        if self.source != other.target || self.slot_dim != other.slot_dim {
            return Err(Error::ObjectMismatch {
                left: self.source,
                right: other.target,
            });
        }
        Ok(MatrixOperator {
            target: self.target,
            source: other.source,
            slot_dim: self.slot_dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn adjoint(&self) -> MatrixOperator {
        MatrixOperator {
            target: self.source,
            source: self.target,
            slot_dim: self.slot_dim,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Largest entrywise modulus of `self - other`; infinite on a shape
    /// mismatch.
    pub fn max_abs_diff(&self, other: &MatrixOperator) -> f64 {
        if self.matrix.shape() != other.matrix.shape() {
            return f64::INFINITY;
        }
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Knobs for the state-sum engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub exec: Exec,
    /// Skip zero symbol entries during the search. Turning this off
    /// enumerates every labeling and gives the same result, slower.
    pub prune: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            exec: Exec::default(),
            prune: true,
        }
    }
}

fn check_colors(a: &CosetBoard, h: &SymbolTensor) -> Result<()> {
    if h.n() != a.n() {
        return Err(Error::DimsMismatch {
            tensor: h.n(),
            board: a.n(),
        });
    }
    Ok(())
}

fn closed_sum(a: &CosetBoard, h: &SymbolTensor, rule: SignRule, opts: EvalOptions) -> Complex64 {
    let problems = component_problems(a);
    opts.exec
        .map(&problems, |p| p.evaluate(h, rule, opts.prune).values[0])
        .into_iter()
        .product()
}

/// Partition function `Φ_h(a)` of a closed board, ignoring any grading.
pub fn phi(a: &CosetBoard, h: &SymbolTensor) -> Result<Complex64> {
    phi_with(a, h, EvalOptions::default())
}

pub fn phi_with(a: &CosetBoard, h: &SymbolTensor, opts: EvalOptions) -> Result<Complex64> {
    check_colors(a, h)?;
    if !a.is_closed() {
        return Err(Error::LabeledBoard);
    }
    Ok(closed_sum(a, h, SignRule::Plain, opts))
}

/// Super partition function: the odd edges of a labeling form closed
/// chains of faces, and each chain contributes `1 + k` to `σ`, where `k`
/// counts the faces it leaves through a lower color than it entered. This
/// equals the Koszul sign of the tensor-factor permutation. Needs an even
/// symbol whose nonzero entries have at most two odd axes.
pub fn phi_super(a: &CosetBoard, h: &SymbolTensor) -> Result<Complex64> {
    phi_super_with(a, h, EvalOptions::default())
}

pub fn phi_super_with(a: &CosetBoard, h: &SymbolTensor, opts: EvalOptions) -> Result<Complex64> {
    super_sum(a, h, SignRule::Chains, opts)
}

/// The super sum with `σ = Σ (l_t - 1)` for chains through `2 l_t` faces.
/// Coincides with [`phi_super`] for `n = 2`; for `n ≥ 3` it misses the
/// dependence on how chains turn.
pub fn phi_super_by_lengths(a: &CosetBoard, h: &SymbolTensor) -> Result<Complex64> {
    super_sum(a, h, SignRule::ChainLengths, EvalOptions::default())
}

fn super_sum(a: &CosetBoard, h: &SymbolTensor, rule: SignRule, opts: EvalOptions) -> Result<Complex64> {
    check_colors(a, h)?;
    if !a.is_closed() {
        return Err(Error::LabeledBoard);
    }
    if !h.is_even() {
        return Err(Error::NotEven);
    }
    if let Some(k) = h.nonzeros().iter().map(|&(t, _)| h.odd_axes(t)).find(|&k| k > 2) {
        return Err(Error::UnsupportedGrading(k));
    }
    Ok(closed_sum(a, h, rule, opts))
}

/// `ρ_h(a) : V^{⊗β} → V^{⊗α}`. A graded symbol must be even; odd edges
/// then carry Koszul signs.
pub fn operator(a: &CosetBoard, h: &SymbolTensor) -> Result<MatrixOperator> {
    operator_with(a, h, EvalOptions::default())
}

pub fn operator_with(a: &CosetBoard, h: &SymbolTensor, opts: EvalOptions) -> Result<MatrixOperator> {
    check_colors(a, h)?;
    let graded = h.is_graded();
    if graded && !h.is_even() {
        return Err(Error::NotEven);
    }
    let rule = if graded { SignRule::Koszul } else { SignRule::Plain };
    let problems = component_problems(a);
    let locals: Vec<LocalTensor> = opts.exec.map(&problems, |p| p.evaluate(h, rule, opts.prune));

    let d = h.total_dim();
    let (alpha, beta) = (a.alpha(), a.beta());
    let rows = d.pow(alpha as u32);
    let cols = d.pow(beta as u32);
    // component of each label
    let mut black_comp = vec![0; beta];
    let mut white_comp = vec![0; alpha];
    for (k, l) in locals.iter().enumerate() {
        for &j in &l.in_labels {
            black_comp[j - 1] = k;
        }
        for &j in &l.out_labels {
            white_comp[j - 1] = k;
        }
    }
    let digits = |mut flat: usize, slots: usize| {
        let mut out = vec![0; slots];
        for s in (0..slots).rev() {
            out[s] = flat % d;
            flat /= d;
        }
        out
    };
    let fold = |labels: &[usize], tuple: &[usize]| labels.iter().fold(0, |acc, &j| acc * d + tuple[j - 1]);

    let row_data: Vec<Vec<Complex64>> = opts.exec.map_range(rows, |r| {
        let out = digits(r, alpha);
        (0..cols)
            .map(|c| {
                let inp = digits(c, beta);
                let mut v = Complex64::new(1.0, 0.0);
                for l in &locals {
                    let stride = d.pow(l.in_labels.len() as u32);
                    v *= l.values[fold(&l.out_labels, &out) * stride + fold(&l.in_labels, &inp)];
                    if v == Complex64::new(0.0, 0.0) {
                        return v;
                    }
                }
                if graded && cross_sign_is_negative(h, &inp, &black_comp, &out, &white_comp) {
                    -v
                } else {
                    v
                }
            })
            .collect()
    });
    let matrix = DMatrix::from_fn(rows, cols, |r, c| row_data[r][c]);
    MatrixOperator::new(alpha, beta, d, matrix)
}

/// Sign for interleaving the labeled faces of different components: pairs
/// of odd slots `x < y` whose components come in increasing order.
fn cross_sign_is_negative(
    h: &SymbolTensor,
    inp: &[usize],
    black_comp: &[usize],
    out: &[usize],
    white_comp: &[usize],
) -> bool {
    let count = |tuple: &[usize], comp: &[usize]| {
        let mut s = 0;
        for x in 0..tuple.len() {
            if h.parity(tuple[x]) == 0 {
                continue;
            }
            for y in x + 1..tuple.len() {
                if h.parity(tuple[y]) == 1 && comp[x] < comp[y] {
                    s += 1;
                }
            }
        }
        s
    };
    (count(inp, black_comp) + count(out, white_comp)) % 2 == 1
}

/// `max |ρ(a∘b) - ρ(a)ρ(b)|`.
pub fn check_homomorphism(a: &CosetBoard, b: &CosetBoard, h: &SymbolTensor) -> Result<f64> {
    let ab = a.mul(b)?;
    let lhs = operator(&ab, h)?;
    let rhs = operator(a, h)?.compose(&operator(b, h)?)?;
    Ok(lhs.max_abs_diff(&rhs))
}

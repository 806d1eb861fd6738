//! Reference operator straight from the tensor-permutation picture: act
//! with `g` on `e_in ⊗ h^{⊗(N-β)}` by moving sub-slot `(m, c)` to
//! `(g_c(m), c)` and pair with `e_out ⊗ h^{⊗(N-α)}`.
//!
//! Each extra slot closed by an identity gluing contributes `⟨h, h⟩`, so
//! the result agrees with [`operator`](super::operator) for unit `h`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{MatrixOperator, SymbolTensor};
use crate::error::{Error, Result};
use crate::perm::GroupElement;

/// Dense reference for `ρ_h(K(α) g K(β))`, truncated to `N = bound` slots.
/// Exponential in `N`; meant for small cross-checks.
pub fn oracle_operator(
    g: &GroupElement,
    h: &SymbolTensor,
    alpha: usize,
    beta: usize,
    bound: usize,
) -> Result<MatrixOperator> {
    let n = g.n();
    if h.n() != n {
        return Err(Error::DimsMismatch { tensor: h.n(), board: n });
    }
    let required = g.degree().max(alpha).max(beta);
    if bound < required {
        return Err(Error::TruncationTooSmall {
            truncation: bound,
            required,
        });
    }
    if h.is_graded() && !h.is_even() {
        return Err(Error::NotEven);
    }
    let g = g.extended(bound);
    let inv = g.inverse();
    let d = h.total_dim();
    let rows = d.pow(alpha as u32);
    let cols = d.pow(beta as u32);
    let nonzeros = h.nonzeros();
    let mut matrix = DMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0));

    for col in 0..cols {
        let mut slots = vec![0usize; bound];
        let mut rest = col;
        for s in (0..beta).rev() {
            slots[s] = rest % d;
            rest /= d;
        }
        // odometer over the nonzero entries placed on slots β..N
        let free = bound - beta;
        let mut pick = vec![0usize; free];
        loop {
            let mut coef = Complex64::new(1.0, 0.0);
            for (k, &p) in pick.iter().enumerate() {
                let (t, v) = nonzeros[p];
                slots[beta + k] = t;
                coef *= v;
            }
            let moved: Vec<usize> = (0..bound)
                .map(|w| (0..n).map(|c| h.digit(slots[inv.part(c).apply(w)], c) * h.stride(c)).sum())
                .collect();
            let mut pair = Complex64::new(1.0, 0.0);
            for &t in &moved[alpha..] {
                pair *= h.get(t).conj();
            }
            if pair != Complex64::new(0.0, 0.0) && !nonzeros.is_empty() {
                if odd_inversions(&g, h, &slots) % 2 == 1 {
                    coef = -coef;
                }
                let row = moved[..alpha].iter().fold(0, |acc, &t| acc * d + t);
                matrix[(row, col)] += coef * pair;
            }
            // advance
            let mut k = 0;
            while k < free {
                pick[k] += 1;
                if pick[k] < nonzeros.len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == free || nonzeros.is_empty() {
                break;
            }
        }
    }
    MatrixOperator::new(alpha, beta, d, matrix)
}

/// Inversions among odd sub-slots between source order `(m, c)` and
/// target order `(g_c(m), c)`.
fn odd_inversions(g: &GroupElement, h: &SymbolTensor, slots: &[usize]) -> usize {
    let n = g.n();
    let mut targets = Vec::new();
    for (m, &t) in slots.iter().enumerate() {
        for c in 0..n {
            if h.axis_parity(t, c) == 1 {
                targets.push(g.part(c).apply(m) * n + c);
            }
        }
    }
    let mut count = 0;
    for i in 0..targets.len() {
        for j in i + 1..targets.len() {
            if targets[i] > targets[j] {
                count += 1;
            }
        }
    }
    count
}

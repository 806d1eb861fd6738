//! Seeded random inputs for property checks and batch runs.

use rand::Rng;

use crate::coset::CosetBoard;
use crate::perm::GroupElement;
use crate::tft::SymbolTensor;

/// `K(α) g K(β)` for a uniformly random `g` of the given degree.
pub fn random_coset<R: Rng + ?Sized>(n: usize, degree: usize, alpha: usize, beta: usize, rng: &mut R) -> CosetBoard {
    let g = GroupElement::random(n, degree, rng).expect("n >= 2");
    CosetBoard::from_element(&g, alpha, beta)
}

/// Grading with the last basis vector of every axis of size at least 2 odd.
pub fn last_odd_parities(dims: &[usize]) -> Vec<Vec<u8>> {
    dims.iter()
        .map(|&d| (0..d).map(|i| u8::from(d >= 2 && i == d - 1)).collect())
        .collect()
}

/// Random even unit symbol for [`last_odd_parities`].
pub fn random_even_symbol<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> SymbolTensor {
    SymbolTensor::random_even_unit(dims, last_odd_parities(dims), rng)
}

/// Random Thoma weights `(alphas, betas)`: at most the given counts, not
/// both empty, positive, nonincreasing, summing to 1.
pub fn random_thoma_weights<R: Rng + ?Sized>(max_alphas: usize, max_betas: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    loop {
        let a = rng.gen_range(0..=max_alphas);
        let b = rng.gen_range(0..=max_betas);
        if a + b == 0 {
            continue;
        }
        let raw: Vec<f64> = (0..a + b).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut alphas: Vec<f64> = raw[..a].iter().map(|x| x / total).collect();
        let mut betas: Vec<f64> = raw[a..].iter().map(|x| x / total).collect();
        alphas.sort_by(|x, y| y.total_cmp(x));
        betas.sort_by(|x, y| y.total_cmp(x));
        return (alphas, betas);
    }
}

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense complex tensor `h[i_1, …, i_n]`, row-major with axis 1 slowest,
/// with a ℤ₂ grading of every axis basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTensor {
    dims: Vec<usize>,
    entries: Vec<Complex64>,
    parities: Vec<Vec<u8>>,
    strides: Vec<usize>,
}

impl SymbolTensor {
    pub fn new(dims: Vec<usize>, entries: Vec<Complex64>, parities: Vec<Vec<u8>>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidTensor(format!("need at least 2 axes, got {}", dims.len())));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidTensor("zero-sized axis".into()));
        }
        let total: usize = dims.iter().product();
        if entries.len() != total {
            return Err(Error::InvalidTensor(format!(
                "{} entries for {} cells",
                entries.len(),
                total
            )));
        }
        if parities.len() != dims.len()
            || parities.iter().zip(&dims).any(|(p, &d)| p.len() != d || p.iter().any(|&x| x > 1))
        {
            return Err(Error::InvalidTensor("parities must be 0/1, one per basis index".into()));
        }
        let mut strides = vec![1; dims.len()];
        for c in (0..dims.len() - 1).rev() {
            strides[c] = strides[c + 1] * dims[c + 1];
        }
        Ok(SymbolTensor {
            dims,
            entries,
            parities,
            strides,
        })
    }

    /// All axes purely even.
    pub fn ungraded(dims: Vec<usize>, entries: Vec<Complex64>) -> Result<Self> {
        let parities = dims.iter().map(|&d| vec![0; d]).collect();
        Self::new(dims, entries, parities)
    }

    /// Random complex Gaussian tensor scaled to unit norm.
    pub fn random_unit<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Self {
        let parities = dims.iter().map(|&d| vec![0; d]).collect();
        Self::random_masked(dims, parities, rng, false)
    }

    /// Random unit tensor supported on the even part of the given grading.
    pub fn random_even_unit<R: Rng + ?Sized>(dims: &[usize], parities: Vec<Vec<u8>>, rng: &mut R) -> Self {
        Self::random_masked(dims, parities, rng, true)
    }

    fn random_masked<R: Rng + ?Sized>(dims: &[usize], parities: Vec<Vec<u8>>, rng: &mut R, even_only: bool) -> Self {
        let total: usize = dims.iter().product();
        let mut h = Self::new(dims.to_vec(), vec![Complex64::new(0.0, 0.0); total], parities)
            .expect("valid dimensions");
        for flat in 0..total {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            if !even_only || h.parity(flat) == 0 {
                h.entries[flat] = Complex64::new(re, im);
            }
        }
        h.normalized()
    }

    /// Diagonal two-axis symbol `Σ √w_j e_j ⊗ e_j`; the first `even`
    /// weights sit on even basis vectors, the rest on odd ones.
    pub fn diagonal_graded(even: &[f64], odd: &[f64]) -> Result<Self> {
        let d = even.len() + odd.len();
        if d == 0 {
            return Err(Error::InvalidTensor("no weights".into()));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for (j, w) in even.iter().chain(odd).enumerate() {
            if *w < 0.0 {
                return Err(Error::InvalidTensor("negative weight".into()));
            }
            entries[j * d + j] = Complex64::new(w.sqrt(), 0.0);
        }
        let axis: Vec<u8> = std::iter::repeat_n(0, even.len())
            .chain(std::iter::repeat_n(1, odd.len()))
            .collect();
        Self::new(vec![d, d], entries, vec![axis.clone(), axis])
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension `Π d_c` of one tensor slot.
    pub fn total_dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn parities(&self) -> &[Vec<u8>] {
        &self.parities
    }

    #[inline]
    pub fn get(&self, flat: usize) -> Complex64 {
        self.entries[flat]
    }

    /// 0-based index along axis `c` of a flat index.
    #[inline]
    pub fn digit(&self, flat: usize, c: usize) -> usize {
        (flat / self.strides[c]) % self.dims[c]
    }

    #[inline]
    pub fn stride(&self, c: usize) -> usize {
        self.strides[c]
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn tuple_of(&self, flat: usize) -> Vec<usize> {
        (0..self.n()).map(|c| self.digit(flat, c)).collect()
    }

    #[inline]
    pub fn axis_parity(&self, flat: usize, c: usize) -> u8 {
        self.parities[c][self.digit(flat, c)]
    }

    /// Number of odd axes of a basis tuple.
    pub fn odd_axes(&self, flat: usize) -> usize {
        (0..self.n()).filter(|&c| self.axis_parity(flat, c) == 1).count()
    }

    /// Total ℤ₂ degree of a basis tuple.
    pub fn parity(&self, flat: usize) -> u8 {
        (self.odd_axes(flat) % 2) as u8
    }

    pub fn is_graded(&self) -> bool {
        self.parities.iter().flatten().any(|&p| p == 1)
    }

    /// Every nonzero entry has even total degree.
    pub fn is_even(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(flat, v)| *v == Complex64::new(0.0, 0.0) || self.parity(flat) == 0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Self {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            for v in &mut self.entries {
                *v /= norm;
            }
        }
        self
    }

    /// Flat indices and values of the nonzero entries, in index order.
    pub fn nonzeros(&self) -> Vec<(usize, Complex64)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|(k, v)| (k, *v))
            .collect()
    }

    /// `h ⊗ h'` with axes paired: `(U⊗U') ⊗ (V⊗V') ⊗ …`.
    pub fn tensor_product(&self, other: &SymbolTensor) -> Result<SymbolTensor> {
        if self.n() != other.n() {
            return Err(Error::DimsMismatch {
                tensor: other.n(),
                board: self.n(),
            });
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a * b).collect();
        let parities: Vec<Vec<u8>> = (0..self.n())
            .map(|c| {
                let mut axis = Vec::with_capacity(dims[c]);
                for i in 0..self.dims[c] {
                    for i2 in 0..other.dims[c] {
                        axis.push((self.parities[c][i] + other.parities[c][i2]) % 2);
                    }
                }
                axis
            })
            .collect();
        let total: usize = dims.iter().product();
        let mut out = SymbolTensor::new(dims, vec![Complex64::new(0.0, 0.0); total], parities)?;
        for (fa, va) in self.entries.iter().enumerate() {
            for (fb, vb) in other.entries.iter().enumerate() {
                let tuple: Vec<usize> = (0..self.n())
                    .map(|c| self.digit(fa, c) * other.dims[c] + other.digit(fb, c))
                    .collect();
                let k = out.index_of(&tuple);
                out.entries[k] = va * vb;
            }
        }
        Ok(out)
    }

    /// `(A_1 ⊗ … ⊗ A_n) h` for square matrices `A_c` of size `d_c`.
    pub fn apply_local(&self, mats: &[DMatrix<Complex64>]) -> Result<SymbolTensor> {
        if mats.len() != self.n() {
            return Err(Error::DimsMismatch {
                tensor: mats.len(),
                board: self.n(),
            });
        }
        let mut cur = self.entries.clone();
        for (c, a) in mats.iter().enumerate() {
            let d = self.dims[c];
            if a.nrows() != d || a.ncols() != d {
                return Err(Error::InvalidTensor(format!("axis {} needs a {d}x{d} matrix", c + 1)));
            }
            let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
            let s = self.strides[c];
            for (flat, out) in next.iter_mut().enumerate() {
                let i = self.digit(flat, c);
                let base = flat - i * s;
                *out = (0..d).map(|j| a[(i, j)] * cur[base + j * s]).sum();
            }
            cur = next;
        }
        SymbolTensor::new(self.dims.clone(), cur, self.parities.clone())
    }
}

/// Haar-ish random unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    m.qr().q()
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    idx: Vec<usize>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    n: usize,
    dims: Vec<usize>,
    #[serde(default)]
    parities: Option<Vec<Vec<u8>>>,
    entries: Vec<EntryJson>,
}

impl Serialize for SymbolTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            n: self.n(),
            dims: self.dims.clone(),
            parities: Some(self.parities.clone()),
            entries: self
                .nonzeros()
                .into_iter()
                .map(|(k, v)| EntryJson {
                    idx: self.tuple_of(k).into_iter().map(|i| i + 1).collect(),
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolTensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TensorJson::deserialize(d)?;
        if raw.dims.len() != raw.n {
            return Err(D::Error::custom("\"n\" does not match the number of dims"));
        }
        let parities = raw
            .parities
            .unwrap_or_else(|| raw.dims.iter().map(|&d| vec![0; d]).collect());
        let total: usize = raw.dims.iter().product();
        let mut h = SymbolTensor::new(raw.dims, vec![Complex64::new(0.0, 0.0); total], parities)
            .map_err(D::Error::custom)?;
        for e in raw.entries {
            if e.idx.len() != h.n()
                || e.idx.iter().zip(h.dims()).any(|(&i, &d)| i == 0 || i > d)
            {
                return Err(D::Error::custom(format!("index {:?} out of range (1-based)", e.idx)));
            }
            let tuple: Vec<usize> = e.idx.iter().map(|i| i - 1).collect();
            let k = h.index_of(&tuple);
            h.entries[k] = Complex64::new(e.re, e.im);
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unit_is_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = SymbolTensor::random_unit(&[2, 3, 2], &mut rng);
        assert!((h.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(h.is_even());
        let g = SymbolTensor::random_even_unit(&[2, 2, 2], vec![vec![0, 1]; 3], &mut rng);
        assert!(g.is_even() && g.is_graded());
        assert_eq!(g.nonzeros().len(), 4);
    }

    #[test]
    fn tensor_product_with_scalar_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = SymbolTensor::random_unit(&[2, 3, 2], &mut rng);
        let one = SymbolTensor::ungraded(vec![1, 1, 1], vec![Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(h.tensor_product(&one).unwrap(), h);
    }

    #[test]
    fn tensor_product_norm_and_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = SymbolTensor::random_even_unit(&[2, 2, 2], vec![vec![0, 1]; 3], &mut rng);
        let h2 = SymbolTensor::random_unit(&[1, 2, 3], &mut rng).normalized();
        let mut scaled = h2.clone();
        for v in &mut scaled.entries {
            *v *= 0.5;
        }
        let p = h.tensor_product(&scaled).unwrap();
        assert!((p.norm_sqr().sqrt() - 0.5).abs() < 1e-12);
        assert_eq!(p.dims(), &[2, 4, 6]);
        assert_eq!(p.parities()[0], vec![0, 1]);
        assert_eq!(p.parities()[1], vec![0, 0, 1, 1]);
        assert!(p.is_even());
        assert!(h.tensor_product(&SymbolTensor::random_unit(&[2, 2], &mut rng)).is_err());
    }

    #[test]
    fn local_unitaries_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = SymbolTensor::random_unit(&[2, 3, 2], &mut rng);
        let mats: Vec<_> = h.dims().iter().map(|&d| random_unitary(d, &mut rng)).collect();
        let u = &mats[1];
        let prod = u.adjoint() * u;
        assert!((prod - DMatrix::<Complex64>::identity(3, 3)).iter().all(|v| v.norm() < 1e-12));
        let g = h.apply_local(&mats).unwrap();
        assert!((g.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_graded_layout() {
        let h = SymbolTensor::diagonal_graded(&[0.6], &[0.4]).unwrap();
        assert_eq!(h.dims(), &[2, 2]);
        assert!(h.is_even());
        assert!((h.get(3).re - 0.4f64.sqrt()).abs() < 1e-15);
        assert_eq!(h.get(1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn json_is_sparse_and_one_based() {
        let text = r#"{"n":2,"dims":[2,2],"parities":[[0,1],[0,1]],"entries":[{"idx":[1,1],"re":0.6},{"idx":[2,2],"re":0.8,"im":0.0}]}"#;
        let h: SymbolTensor = serde_json::from_str(text).unwrap();
        assert_eq!(h.get(0).re, 0.6);
        assert_eq!(h.get(3).re, 0.8);
        let back: SymbolTensor = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<SymbolTensor>(r#"{"n":2,"dims":[2,2],"entries":[{"idx":[3,1],"re":1}]}"#).is_err());
    }
}

//! Quantization of polynomial-class symbols on the Hermite basis.
//!
//! Polynomial-class symbols are mapped exactly (no quadrature) to matrices of
//! `x`-multiplication and `D = -i d/dx` on normalized Hermite functions, in
//! Kohn–Nirenberg (left) ordering. Every operator is assembled at a buffered
//! size `N + B` with `B` at least the total polynomial degree and then cropped
//! to `N`, so that cropped entries — and cropped Gram matrices — are exact
//! compressions of the infinite operator, free of truncation-boundary defects.

use crate::bisym::{BisingularSymbol, BisymError};
use crate::shubin::{kn_compose, KnDepth, ShubinError, ShubinSymbol};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Error)]
pub enum QuantizeError {
    #[error(transparent)]
    Shubin(#[from] ShubinError),
    #[error(transparent)]
    Bisym(#[from] BisymError),
    #[error("truncation of the shifted operator is numerically singular")]
    SingularTruncation,
    #[error("operation needs a positive truncation size")]
    EmptyTruncation,
}

/// Position and momentum matrices on normalized Hermite functions.
///
/// `X[n+1,n] = X[n,n+1] = sqrt((n+1)/2)`; `D = -i d/dx` with
/// `D[n-1,n] = -i sqrt(n/2)`, `D[n+1,n] = i sqrt((n+1)/2)` (Hermitian).
pub fn hermite_ladder_matrices(n: usize, b: usize) -> (CMatrix, CMatrix) {
    let m = n + b;
    let mut x = CMatrix::zeros(m, m);
    let mut d = CMatrix::zeros(m, m);
    for k in 0..m.saturating_sub(1) {
        let c = ((k as f64 + 1.0) / 2.0).sqrt();
        x[(k + 1, k)] = Complex64::new(c, 0.0);
        x[(k, k + 1)] = Complex64::new(c, 0.0);
        // d/dx h_n = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}
        d[(k + 1, k)] = Complex64::new(0.0, c);
        d[(k, k + 1)] = Complex64::new(0.0, -c);
    }
    (x, d)
}

/// How a truncated operator was assembled.
#[derive(Clone, Debug)]
pub enum OpKind {
    /// One-factor operator: buffered `(n+b)×(n+b)` assembly.
    Single { buffered: CMatrix, n: usize, b: usize },
    /// Tensor operator `Σ_t F_t ⊗ G_t` with buffered factor assemblies.
    Tensor {
        terms: Vec<(CMatrix, CMatrix)>,
        n1: usize,
        b1: usize,
        n2: usize,
        b2: usize,
    },
}

/// Quantization convention tag. Only Kohn–Nirenberg (left) ordering is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quantization {
    KohnNirenberg,
}

/// A dense truncation of a quantized symbol with its assembly metadata.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub kind: OpKind,
    pub quantization: Quantization,
}

impl TruncatedOperator {
    /// Dimension of the cropped matrix.
    pub fn dim(&self) -> usize {
        match &self.kind {
            OpKind::Single { n, .. } => *n,
            OpKind::Tensor { n1, n2, .. } => n1 * n2,
        }
    }

    /// The cropped `N×N` (or `N1·N2`-dimensional) matrix.
    pub fn cropped(&self) -> CMatrix {
        match &self.kind {
            OpKind::Single { buffered, n, .. } => buffered.view((0, 0), (*n, *n)).into(),
            OpKind::Tensor { terms, n1, n2, .. } => {
                let dim = n1 * n2;
                let mut out = CMatrix::zeros(dim, dim);
                for (f, g) in terms {
                    // box-crop of the Kronecker product: index (i1*n2 + i2)
                    for i1 in 0..*n1 {
                        for j1 in 0..*n1 {
                            let fij = f[(i1, j1)];
                            if fij == Complex64::ZERO {
                                continue;
                            }
                            for i2 in 0..*n2 {
                                for j2 in 0..*n2 {
                                    out[(i1 * n2 + i2, j1 * n2 + j2)] += fij * g[(i2, j2)];
                                }
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// Exact compression of `Op†Op` to the cropped space: formed at buffered
    /// size and then cropped, so no boundary defect enters.
    pub fn gram_domain(&self) -> CMatrix {
        self.gram(false)
    }

    /// Exact compression of `Op Op†` to the cropped space.
    pub fn gram_codomain(&self) -> CMatrix {
        self.gram(true)
    }

    fn gram(&self, adjoint_side: bool) -> CMatrix {
        match &self.kind {
            OpKind::Single { buffered, n, .. } => {
                let prod = if adjoint_side {
                    buffered * buffered.adjoint()
                } else {
                    buffered.adjoint() * buffered
                };
                prod.view((0, 0), (*n, *n)).into()
            }
            OpKind::Tensor { n1, n2, b2, .. } => {
                let m2 = n2 + b2;
                let dim = n1 * n2;
                let sum = self.buffered_tensor_sum();
                let prod = if adjoint_side {
                    &sum * sum.adjoint()
                } else {
                    sum.adjoint() * &sum
                };
                let mut out = CMatrix::zeros(dim, dim);
                for i1 in 0..*n1 {
                    for i2 in 0..*n2 {
                        for j1 in 0..*n1 {
                            for j2 in 0..*n2 {
                                out[(i1 * n2 + i2, j1 * n2 + j2)] =
                                    prod[(i1 * m2 + i2, j1 * m2 + j2)];
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// The full buffered matrix (Kronecker sum for tensor operators).
    pub fn buffered_tensor_sum(&self) -> CMatrix {
        match &self.kind {
            OpKind::Single { buffered, .. } => buffered.clone(),
            OpKind::Tensor { terms, n1, b1, n2, b2 } => {
                let m1 = n1 + b1;
                let m2 = n2 + b2;
                let mut sum = CMatrix::zeros(m1 * m2, m1 * m2);
                for (f, g) in terms {
                    sum += f.kronecker(g);
                }
                sum
            }
        }
    }
}

/// Quantize a polynomial-class one-factor symbol at truncation `n`.
///
/// The symbol is expanded into monomials `x^p ξ^q`, each mapped to `X^p D^q`
/// (all `x` to the left), assembled at buffered size `n + B` with `B` the
/// total degree.
pub fn quantize_poly(s: &ShubinSymbol, n: usize) -> Result<TruncatedOperator, QuantizeError> {
    if n == 0 {
        return Err(QuantizeError::EmptyTruncation);
    }
    let b = s.total_degree() as usize;
    let buffered = assemble(s, n + b)?;
    Ok(TruncatedOperator {
        kind: OpKind::Single { buffered, n, b },
        quantization: Quantization::KohnNirenberg,
    })
}

/// Assemble the buffered matrix of a polynomial-class symbol at size `m`.
fn assemble(s: &ShubinSymbol, m: usize) -> Result<CMatrix, QuantizeError> {
    let monomials = s.poly_monomials()?;
    let (x, d) = hermite_ladder_matrices(m, 0);
    let deg_x = monomials.keys().map(|(p, _)| *p).max().unwrap_or(0);
    let deg_d = monomials.keys().map(|(_, q)| *q).max().unwrap_or(0);
    let mut x_pows = Vec::with_capacity(deg_x as usize + 1);
    let mut d_pows = Vec::with_capacity(deg_d as usize + 1);
    x_pows.push(CMatrix::identity(m, m));
    d_pows.push(CMatrix::identity(m, m));
    for p in 1..=deg_x as usize {
        let next = &x_pows[p - 1] * &x;
        x_pows.push(next);
    }
    for q in 1..=deg_d as usize {
        let next = &d_pows[q - 1] * &d;
        d_pows.push(next);
    }
    let mut out = CMatrix::zeros(m, m);
    for ((p, q), c) in &monomials {
        let term = &x_pows[*p as usize] * &d_pows[*q as usize];
        out += term * c.to_complex();
    }
    Ok(out)
}

/// Quantize a bisingular tensor-sum symbol: `Σ_t Op(f_t) ⊗ Op(g_t)`.
pub fn quantize_bisingular(
    a: &BisingularSymbol,
    n1: usize,
    n2: usize,
) -> Result<TruncatedOperator, QuantizeError> {
    if n1 == 0 || n2 == 0 {
        return Err(QuantizeError::EmptyTruncation);
    }
    let b1 = a
        .terms()
        .iter()
        .map(|(f, _)| f.total_degree() as usize)
        .max()
        .unwrap_or(0);
    let b2 = a
        .terms()
        .iter()
        .map(|(_, g)| g.total_degree() as usize)
        .max()
        .unwrap_or(0);
    let mut terms = Vec::with_capacity(a.terms().len());
    for (f, g) in a.terms() {
        terms.push((assemble(f, n1 + b1)?, assemble(g, n2 + b2)?));
    }
    Ok(TruncatedOperator {
        kind: OpKind::Tensor { terms, n1, b1, n2, b2 },
        quantization: Quantization::KohnNirenberg,
    })
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// first to absorb floating-point asymmetry.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()).scale(0.5);
    let mut eig: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eig
}

/// Report for the operator-product vs. symbol-composition consistency check.
#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    pub block: usize,
    pub norm_diff: f64,
    pub scale: f64,
    pub relative: f64,
    pub pass: bool,
}

/// Compare `Op(a)Op(b)` with `Op(a#b)` on the interior block where the crop
/// cannot interfere: the top-left `n - deg(a) - deg(b)` block.
pub fn composition_consistency(
    a: &ShubinSymbol,
    b: &ShubinSymbol,
    n: usize,
) -> Result<CompositionReport, QuantizeError> {
    let qa = quantize_poly(a, n)?.cropped();
    let qb = quantize_poly(b, n)?.cropped();
    let comp = kn_compose(a, b, KnDepth::Full)?;
    let qc = quantize_poly(&comp, n)?.cropped();
    let deg = (a.total_degree() + b.total_degree()) as usize;
    let block = n.saturating_sub(deg);
    let prod = &qa * &qb;
    let diff: CMatrix = prod.view((0, 0), (block, block)) - qc.view((0, 0), (block, block));
    let norm_diff = spectral_norm(&diff);
    let scale = f64::max(1.0, spectral_norm(&qa) * spectral_norm(&qb));
    let relative = norm_diff / scale;
    Ok(CompositionReport {
        block,
        norm_diff,
        scale,
        relative,
        pass: relative <= 1e-10,
    })
}

/// Singular-value decay report for the compactness proxy.
#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub truncations: Vec<usize>,
    /// Sorted (descending) singular values of the inverse per truncation.
    pub singular_values: Vec<Vec<f64>>,
    /// Tail-to-head mass ratio at the largest truncation.
    pub decay_ratio: f64,
    /// Max deviation of σ_k across truncations for k below min(N)/2.
    pub stability: f64,
    pub decays: bool,
    pub stable: bool,
    pub pass: bool,
}

/// Numerical compactness proxy: realize a negative-order operator as the
/// inverse of `Op(base) + shift` and check that its singular values decay and
/// are stable under truncation growth.
pub fn compactness_proxy(
    base: &ShubinSymbol,
    shift: f64,
    truncations: &[usize],
) -> Result<DecayReport, QuantizeError> {
    let mut singular_values = Vec::with_capacity(truncations.len());
    for &n in truncations {
        let op = quantize_poly(base, n)?;
        let mut m = op.cropped();
        for i in 0..n {
            m[(i, i)] += Complex64::new(shift, 0.0);
        }
        let inv = m.lu().try_inverse().ok_or(QuantizeError::SingularTruncation)?;
        let mut sv: Vec<f64> = inv.svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        singular_values.push(sv);
    }
    let last = singular_values.last().ok_or(QuantizeError::EmptyTruncation)?;
    let head = last.first().copied().unwrap_or(0.0);
    let tail_start = 3 * last.len() / 4;
    let tail_mean = last[tail_start..].iter().sum::<f64>() / (last.len() - tail_start).max(1) as f64;
    let decay_ratio = if head > 0.0 { tail_mean / head } else { 1.0 };
    let k_max = truncations.iter().copied().min().unwrap_or(0) / 2;
    let mut stability: f64 = 0.0;
    for w in singular_values.windows(2) {
        for k in 0..k_max.min(w[0].len()).min(w[1].len()) {
            stability = stability.max((w[0][k] - w[1][k]).abs());
        }
    }
    let decays = decay_ratio <= 0.1;
    let stable = stability <= 1e-6;
    Ok(DecayReport {
        truncations: truncations.to_vec(),
        singular_values,
        decay_ratio,
        stability,
        decays,
        stable,
        pass: decays && stable,
    })
}

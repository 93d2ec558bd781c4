//! Global bisingular symbol calculus on ℝ¹×ℝ¹ with quantization, Fredholm
//! index computation and an integer-exact K-theory engine.
//!
//! The crate has three layers:
//!
//! * **Symbol algebra** ([`scalar`], [`trig`], [`shubin`], [`bisym`]): exact
//!   trig-polynomial arithmetic, classical Shubin symbols in polar form,
//!   finite tensor-sum bisingular symbols, the two principal symbol maps and
//!   the compatible-pair algebra with its composition and reconstruction.
//! * **Quantization and index** ([`quantize`], [`index`]): exact matrices of
//!   polynomial-class symbols in the Hermite basis, spectral and heat-trace
//!   Fredholm indices, winding numbers, determinant loops and bidegrees.
//! * **K-theory** ([`ktheory`]): Smith normal form, finitely generated
//!   abelian groups, kernels/cokernels of integer homomorphisms, six-term and
//!   Mayer–Vietoris solvers, and the end-to-end computation of the K-groups
//!   of the bisingular symbol and operator algebras.
//!
//! File formats and the symbol literal grammar live in [`parse`]; seeded
//! random generators for the verification suites live in [`sample`].

pub mod bisym;
pub mod parse;
pub mod sample;
pub mod scalar;
pub mod shubin;
pub mod trig;

pub mod index;
pub mod ktheory;
pub mod quantize;

pub use bisym::{
    bs_compose, compat_check, external_product, kernel_order_check, reconstruct, sigma1,
    sigma1_graded, sigma2, sigma2_graded, sigma_pair, sigma_pair_compose, tsigma1, tsigma2,
    BisingularSymbol, Factor, SigmaPair, SymbolValuedLoop,
};
pub use scalar::GaussianRational;
pub use shubin::{kn_compose, seminorm_check, CheckReport, KnDepth, SampleGrid, ShubinSymbol, Var};
pub use trig::{BiTrigPoly, TrigPoly};

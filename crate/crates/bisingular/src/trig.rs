//! Finite Fourier series on one circle and on the torus.
//!
//! A [`TrigPoly`] is a finite sum `Σ_k c_k e^{ikθ}` with exact coefficients;
//! it stores the angular part of each homogeneous symbol component. A
//! [`BiTrigPoly`] is the two-angle analogue `Σ c_{k1,k2} e^{ik1θ1} e^{ik2θ2}`
//! and houses the joint principal data of symbol pairs.

use crate::scalar::GaussianRational;
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Finite Fourier series `Σ_k c_k e^{ikθ}` with exact coefficients.
///
/// Canonical form never stores a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, GaussianRational::from_int(1))
    }

    /// The single term `c e^{ikθ}`.
    pub fn monomial(k: i64, c: GaussianRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, GaussianRational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in iter {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: i64, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(GaussianRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> GaussianRational {
        self.coeffs.get(&k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&i64, &GaussianRational)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn max_frequency(&self) -> Option<i64> {
        self.coeffs.keys().map(|k| k.abs()).max()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Frequency shift: multiply by `e^{isθ}`.
    pub fn shift(&self, s: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (k + s, v.clone())).collect(),
        }
    }

    /// Complex conjugate: `conj(Σ c_k e^{ikθ}) = Σ conj(c_k) e^{-ikθ}`.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (-k, v.conj())).collect(),
        }
    }

    /// d/dθ, i.e. coefficient-wise multiplication by ik.
    pub fn theta_derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|(k, v)| (*k, v.mul_i_pow(1).scale_int(*k))),
        )
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(k, c)| c.to_complex() * Complex64::new(0.0, *k as f64 * theta).exp())
            .sum()
    }

    /// Σ_k |c_k| bounded from above in f64 (l1 on real/imaginary parts).
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.l1_norm_f64()).sum()
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: Self) -> TrigPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: Self) -> TrigPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        TrigPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

/// Coefficient convolution.
impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: Self) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &rhs.coeffs {
                out.add_term(ka + kb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}) e^{{iθ}}")?,
                -1 => write!(f, "({c}) e^{{-iθ}}")?,
                _ => write!(f, "({c}) e^{{{k}iθ}}")?,
            }
        }
        Ok(())
    }
}

/// Finite double Fourier series on the torus, exact coefficients, canonical.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiTrigPoly {
    coeffs: BTreeMap<(i64, i64), GaussianRational>,
}

impl BiTrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, k: (i64, i64), c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(GaussianRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(i64, i64), &GaussianRational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, k: (i64, i64)) -> GaussianRational {
        self.coeffs.get(&k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// `u(θ1) ⊗ v(θ2)`.
    pub fn from_product(u: &TrigPoly, v: &TrigPoly) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in u.coeffs() {
            for (k2, c2) in v.coeffs() {
                out.add_term((*k1, *k2), c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, theta1: f64, theta2: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|((k1, k2), c)| {
                c.to_complex() * Complex64::new(0.0, *k1 as f64 * theta1 + *k2 as f64 * theta2).exp()
            })
            .sum()
    }

    /// Restriction to the slice θ2 = const, as a polynomial in θ1 with
    /// complex (floating) coefficients folded back in exactly where possible.
    pub fn slice1(&self, theta2: f64) -> Vec<(i64, Complex64)> {
        let mut acc: BTreeMap<i64, Complex64> = BTreeMap::new();
        for ((k1, k2), c) in &self.coeffs {
            let phase = Complex64::new(0.0, *k2 as f64 * theta2).exp();
            *acc.entry(*k1).or_insert(Complex64::ZERO) += c.to_complex() * phase;
        }
        acc.into_iter().collect()
    }

    pub fn slice2(&self, theta1: f64) -> Vec<(i64, Complex64)> {
        let mut acc: BTreeMap<i64, Complex64> = BTreeMap::new();
        for ((k1, k2), c) in &self.coeffs {
            let phase = Complex64::new(0.0, *k1 as f64 * theta1).exp();
            *acc.entry(*k2).or_insert(Complex64::ZERO) += c.to_complex() * phase;
        }
        acc.into_iter().collect()
    }

    /// Exact rank of the coefficient matrix over the frequency lattice.
    pub fn coefficient_rank(&self) -> usize {
        let rows: Vec<i64> = {
            let mut v: Vec<i64> = self.coeffs.keys().map(|(k1, _)| *k1).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let cols: Vec<i64> = {
            let mut v: Vec<i64> = self.coeffs.keys().map(|(_, k2)| *k2).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut mat: Vec<Vec<GaussianRational>> = rows
            .iter()
            .map(|r| cols.iter().map(|c| self.coeff((*r, *c))).collect())
            .collect();
        // Gaussian elimination over the exact field.
        let mut rank = 0;
        for col in 0..cols.len() {
            let Some(pivot) = (rank..rows.len()).find(|&r| !mat[r][col].is_zero()) else {
                continue;
            };
            mat.swap(rank, pivot);
            let inv = mat[rank][col].recip();
            for r in 0..rows.len() {
                if r != rank && !mat[r][col].is_zero() {
                    let factor = &mat[r][col] * &inv;
                    for c in col..cols.len() {
                        let delta = &factor * &mat[rank][c];
                        let v = mat[r][c].clone() - delta;
                        mat[r][c] = v;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Factor a rank-one series as `u(θ1)·v(θ2)`; `None` if zero or rank > 1.
    pub fn separable_factors(&self) -> Option<(TrigPoly, TrigPoly)> {
        if self.is_zero() || self.coefficient_rank() != 1 {
            return None;
        }
        let (&(p1, p2), pivot) = self.coeffs.iter().max_by(|a, b| a.1.abs_sq().cmp(&b.1.abs_sq()))?;
        let inv = pivot.recip();
        let mut u = TrigPoly::zero();
        let mut v = TrigPoly::zero();
        let k1s: Vec<i64> = {
            let mut s: Vec<i64> = self.coeffs.keys().map(|(k1, _)| *k1).collect();
            s.dedup();
            s
        };
        for k1 in k1s {
            u.add_term(k1, self.coeff((k1, p2)));
        }
        let mut k2s: Vec<i64> = self.coeffs.keys().map(|(_, k2)| *k2).collect();
        k2s.sort_unstable();
        k2s.dedup();
        for k2 in k2s {
            v.add_term(k2, &self.coeff((p1, k2)) * &inv);
        }
        // rank-one certificate: u ⊗ v must reproduce every coefficient
        let rebuilt = Self::from_product(&u, &v);
        (rebuilt == *self).then_some((u, v))
    }
}

impl Sub for &BiTrigPoly {
    type Output = BiTrigPoly;
    fn sub(self, rhs: Self) -> BiTrigPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl fmt::Display for BiTrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((k1, k2), c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) e^{{{k1}iθ1}} e^{{{k2}iθ2}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> GaussianRational {
        GaussianRational::from_int(1)
    }

    #[test]
    fn inverse_frequencies_cancel() {
        let a = TrigPoly::monomial(1, one());
        let b = TrigPoly::monomial(-1, one());
        assert_eq!(&a * &b, TrigPoly::one());
    }

    #[test]
    fn binomial_square() {
        let p = &TrigPoly::one() + &TrigPoly::monomial(1, one());
        let sq = &p * &p;
        assert_eq!(sq.coeff(0), one());
        assert_eq!(sq.coeff(1), GaussianRational::from_int(2));
        assert_eq!(sq.coeff(2), one());
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn canonical_drops_zero() {
        let mut p = TrigPoly::monomial(3, one());
        p.add_term(3, GaussianRational::from_int(-1));
        assert!(p.is_zero());
    }

    #[test]
    fn separable_rank_one() {
        let u = TrigPoly::from_coeffs([(1, one()), (0, GaussianRational::from_int(2))]);
        let v = TrigPoly::from_coeffs([(-1, one()), (2, GaussianRational::from_ratio(1, 3))]);
        let p = BiTrigPoly::from_product(&u, &v);
        assert_eq!(p.coefficient_rank(), 1);
        let (a, b) = p.separable_factors().unwrap();
        assert_eq!(BiTrigPoly::from_product(&a, &b), p);
    }

    #[test]
    fn non_separable_rank_two() {
        let mut p = BiTrigPoly::zero();
        p.add_term((1, 0), one());
        p.add_term((0, 1), one());
        assert_eq!(p.coefficient_rank(), 2);
        assert!(p.separable_factors().is_none());
    }
}

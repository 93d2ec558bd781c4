//! Classical (polyhomogeneous) Shubin-type symbols on one factor ℝ¹.
//!
//! A symbol is stored in polar form as a finite sum of homogeneous pieces
//! `Σ_j c_j(θ) r^j` with [`TrigPoly`] angular parts `c_j`, valid on `r ≥ 1`.
//! The stored range is exact: degrees outside it are exactly zero, which is
//! what makes products, compositions and the exactness checks of the
//! bisingular layer decidable. Evaluation below `r = 1` applies a fixed
//! smoothstep cut-off (0 for `r ≤ 1/2`, 1 for `r ≥ 1`), so the excision near
//! the origin never pollutes the algebraic layer.

use crate::scalar::GaussianRational;
use crate::trig::TrigPoly;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Differentiation variable on one factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Xi,
}

/// Truncation request for the Kohn–Nirenberg expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnDepth {
    /// Expand until the derivative factors vanish identically. Terminates for
    /// polynomial-class symbols; errors out after a cap otherwise.
    Full,
    /// Keep homogeneity degrees down to `order(a) + order(b) - d`.
    Fixed(u32),
}

#[derive(Debug, Error)]
pub enum ShubinError {
    #[error("Kohn-Nirenberg expansion did not terminate after {0} terms; pass a finite depth")]
    NonTerminating(usize),
    #[error("symbol is not polynomial-class: component r^{j} e^{{{k}iθ}} (need |k| ≤ j and j ≡ k mod 2)")]
    NotPolynomial { j: i64, k: i64 },
    #[error("sample grid contains radius {0} < 1")]
    GridBelowOne(f64),
}

/// A classical Shubin symbol `Σ_j c_j(θ) r^j` with exact coefficients.
///
/// Canonical form stores no zero components; the zero symbol stores nothing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct ShubinSymbol {
    comps: BTreeMap<i64, TrigPoly>,
}

impl ShubinSymbol {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant symbol 1 (order 0).
    pub fn unit() -> Self {
        Self::monomial(0, 0, GaussianRational::from_int(1))
    }

    /// The single homogeneous term `c r^j e^{ikθ}`.
    pub fn monomial(j: i64, k: i64, c: GaussianRational) -> Self {
        let mut s = Self::zero();
        s.add_component(j, TrigPoly::monomial(k, c));
        s
    }

    /// `x + iξ = r e^{iθ}`.
    pub fn x_plus_i_xi() -> Self {
        Self::monomial(1, 1, GaussianRational::from_int(1))
    }

    /// `x - iξ = r e^{-iθ}`.
    pub fn x_minus_i_xi() -> Self {
        Self::monomial(1, -1, GaussianRational::from_int(1))
    }

    /// The coordinate symbol `x = r cos θ`.
    pub fn coordinate_x() -> Self {
        let mut s = Self::zero();
        s.add_term(1, 1, GaussianRational::from_ratio(1, 2));
        s.add_term(1, -1, GaussianRational::from_ratio(1, 2));
        s
    }

    /// The coordinate symbol `ξ = r sin θ`.
    pub fn coordinate_xi() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        let mut s = Self::zero();
        s.add_term(1, 1, GaussianRational::from_parts(0, -1).scale_rational(&half));
        s.add_term(1, -1, GaussianRational::i().scale_rational(&half));
        s
    }

    /// `r² = x² + ξ²`.
    pub fn r_squared() -> Self {
        Self::monomial(2, 0, GaussianRational::from_int(1))
    }

    /// Leading-part representation of the weight power `⟨x,ξ⟩^{2s}`: the exact
    /// polynomial `(1 + r²)^s` for integer `s ≥ 0`.
    pub fn weight_power(s: u32) -> Self {
        let mut out = Self::unit();
        for _ in 0..s {
            let base = &Self::unit() + &Self::r_squared();
            out = &out * &base;
        }
        out
    }

    pub fn from_components<I: IntoIterator<Item = (i64, TrigPoly)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (j, p) in iter {
            s.add_component(j, p);
        }
        s
    }

    pub fn add_component(&mut self, j: i64, p: TrigPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.comps.entry(j).or_insert_with(TrigPoly::zero);
        let sum = &*slot + &p;
        if sum.is_zero() {
            self.comps.remove(&j);
        } else {
            *slot = sum;
        }
    }

    pub fn add_term(&mut self, j: i64, k: i64, c: GaussianRational) {
        self.add_component(j, TrigPoly::monomial(k, c));
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Homogeneity order (highest stored degree); `None` for the zero symbol.
    pub fn order(&self) -> Option<i64> {
        self.comps.keys().next_back().copied()
    }

    pub fn lowest_degree(&self) -> Option<i64> {
        self.comps.keys().next().copied()
    }

    /// Number of degree steps covered below the order.
    pub fn depth(&self) -> Option<i64> {
        Some(self.order()? - self.lowest_degree()?)
    }

    /// Angular part at homogeneity degree `j` (zero if absent).
    pub fn component(&self, j: i64) -> TrigPoly {
        self.comps.get(&j).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (&i64, &TrigPoly)> {
        self.comps.iter()
    }

    /// Leading homogeneous angular part; zero for the zero symbol.
    pub fn principal(&self) -> TrigPoly {
        match self.order() {
            Some(m) => self.component(m),
            None => TrigPoly::zero(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            comps: self.comps.iter().map(|(j, p)| (*j, p.scale(c))).collect(),
        }
    }

    /// Drop components of degree below `floor` (modulo-lower-order truncation).
    pub fn truncate_below(&self, floor: i64) -> Self {
        Self {
            comps: self
                .comps
                .iter()
                .filter(|(j, _)| **j >= floor)
                .map(|(j, p)| (*j, p.clone()))
                .collect(),
        }
    }

    /// Polar derivative ∂/∂x or ∂/∂ξ, computed exactly componentwise.
    ///
    /// On `r^j e^{ikθ}` the rules
    /// `∂x = cosθ ∂r - (sinθ/r) ∂θ` and `∂ξ = sinθ ∂r + (cosθ/r) ∂θ`
    /// produce only `r^{j-1} e^{i(k±1)θ}` terms.
    pub fn derivative(&self, var: Var) -> Self {
        let mut out = Self::zero();
        let half = BigRational::new(1.into(), 2.into());
        for (j, p) in &self.comps {
            for (k, c) in p.coeffs() {
                match var {
                    Var::X => {
                        // ((j-k)/2) e^{i(k+1)θ} + ((j+k)/2) e^{i(k-1)θ}
                        out.add_term(j - 1, k + 1, c.scale_int(j - k).scale_rational(&half));
                        out.add_term(j - 1, k - 1, c.scale_int(j + k).scale_rational(&half));
                    }
                    Var::Xi => {
                        // i((k-j)/2) e^{i(k+1)θ} + i((j+k)/2) e^{i(k-1)θ}
                        out.add_term(j - 1, k + 1, c.mul_i_pow(1).scale_int(k - j).scale_rational(&half));
                        out.add_term(j - 1, k - 1, c.mul_i_pow(1).scale_int(j + k).scale_rational(&half));
                    }
                }
            }
        }
        out
    }

    /// Smoothstep radial cut-off: 0 for r ≤ 1/2, 1 for r ≥ 1, cubic Hermite between.
    pub fn radial_cutoff(r: f64) -> f64 {
        if r <= 0.5 {
            0.0
        } else if r >= 1.0 {
            1.0
        } else {
            let s = (r - 0.5) / 0.5;
            s * s * (3.0 - 2.0 * s)
        }
    }

    pub fn eval(&self, x: f64, xi: f64) -> Complex64 {
        let r = x.hypot(xi);
        let chi = Self::radial_cutoff(r);
        if chi == 0.0 {
            return Complex64::ZERO;
        }
        let theta = xi.atan2(x);
        chi * self.eval_polar(r, theta)
    }

    /// Evaluate `Σ c_j(θ) r^j` without the radial cut-off (intended for r ≥ 1).
    pub fn eval_polar(&self, r: f64, theta: f64) -> Complex64 {
        self.comps
            .iter()
            .map(|(j, p)| p.eval(theta) * r.powi(*j as i32))
            .sum()
    }

    /// Check membership in the polynomial class: every stored term
    /// `r^j e^{ikθ}` must satisfy `j ≥ 0`, `|k| ≤ j` and `j ≡ k (mod 2)`.
    pub fn polynomial_class(&self) -> Result<(), ShubinError> {
        for (j, p) in &self.comps {
            for (k, _) in p.coeffs() {
                if *j < 0 || k.abs() > *j || (*j - *k) % 2 != 0 {
                    return Err(ShubinError::NotPolynomial { j: *j, k: *k });
                }
            }
        }
        Ok(())
    }

    /// Expand a polynomial-class symbol into monomials `x^p ξ^q`.
    pub fn poly_monomials(&self) -> Result<BTreeMap<(u32, u32), GaussianRational>, ShubinError> {
        self.polynomial_class()?;
        let mut out: BTreeMap<(u32, u32), GaussianRational> = BTreeMap::new();
        let mut add = |p: u32, q: u32, c: GaussianRational| {
            if c.is_zero() {
                return;
            }
            let e = out.entry((p, q)).or_insert_with(GaussianRational::zero);
            *e += c;
            if e.is_zero() {
                out.remove(&(p, q));
            }
        };
        for (j, poly) in &self.comps {
            for (k, c) in poly.coeffs() {
                // r^j e^{ikθ} = (x²+ξ²)^m (x + i s ξ)^κ, m = (j-|k|)/2, κ = |k|, s = sign k
                let kappa = k.unsigned_abs() as u32;
                let m = ((*j - k.abs()) / 2) as u32;
                let s: i64 = if *k >= 0 { 1 } else { -1 };
                for a in 0..=m {
                    let bin_m = binomial(m, a);
                    for b in 0..=kappa {
                        // (x + isξ)^κ term: C(κ,b) x^{κ-b} (is)^b ξ^b
                        let mut coef = c.scale_rational(&bin_m).scale_rational(&binomial(kappa, b));
                        coef = coef.mul_i_pow(b as i64);
                        if s < 0 && b % 2 == 1 {
                            coef = -coef;
                        }
                        add(2 * a + (kappa - b), 2 * (m - a) + b, coef);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Total polynomial degree (for buffer sizing); 0 for non-polynomial or zero.
    pub fn total_degree(&self) -> u32 {
        self.order().map(|m| m.max(0) as u32).unwrap_or(0)
    }

    /// Σ over components of the coefficient l1 mass (seminorm cap input).
    pub fn coeff_l1(&self) -> f64 {
        self.comps.values().map(|p| p.coeff_l1()).sum()
    }

    /// Render in the symbol literal grammar, one `j k c` triple per line.
    pub fn to_literal(&self) -> String {
        if self.is_zero() {
            return String::from("# zero symbol\n");
        }
        let mut out = String::new();
        for (j, p) in self.comps.iter().rev() {
            for (k, c) in p.coeffs() {
                out.push_str(&format!("{j} {k} {c}\n"));
            }
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> BigRational {
    let mut num = BigRational::from_integer(1.into());
    for i in 0..k {
        num = num * BigRational::from_integer((n - i).into()) / BigRational::from_integer((i + 1).into());
    }
    num
}

impl Add for &ShubinSymbol {
    type Output = ShubinSymbol;
    fn add(self, rhs: Self) -> ShubinSymbol {
        let mut out = self.clone();
        for (j, p) in &rhs.comps {
            out.add_component(*j, p.clone());
        }
        out
    }
}

impl Sub for &ShubinSymbol {
    type Output = ShubinSymbol;
    fn sub(self, rhs: Self) -> ShubinSymbol {
        let mut out = self.clone();
        for (j, p) in &rhs.comps {
            out.add_component(*j, -p);
        }
        out
    }
}

impl Neg for &ShubinSymbol {
    type Output = ShubinSymbol;
    fn neg(self) -> ShubinSymbol {
        ShubinSymbol {
            comps: self.comps.iter().map(|(j, p)| (*j, -p)).collect(),
        }
    }
}

/// Pointwise product; orders add, all computable degrees kept.
impl Mul for &ShubinSymbol {
    type Output = ShubinSymbol;
    fn mul(self, rhs: Self) -> ShubinSymbol {
        let mut out = ShubinSymbol::zero();
        for (ja, pa) in &self.comps {
            for (jb, pb) in &rhs.comps {
                out.add_component(ja + jb, pa * pb);
            }
        }
        out
    }
}

impl fmt::Display for ShubinSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, p) in self.comps.iter().rev() {
            if !first {
                write!(f, "  +  ")?;
            }
            first = false;
            match j {
                0 => write!(f, "[{p}]")?,
                1 => write!(f, "[{p}] r")?,
                _ => write!(f, "[{p}] r^{j}")?,
            }
        }
        Ok(())
    }
}

/// Kohn–Nirenberg composition `a # b ~ Σ_k (1/k!) ∂ξ^k a · D_x^k b`, `D_x = -i∂x`.
///
/// With `KnDepth::Fixed(d)` the result keeps homogeneity degrees down to
/// `order(a) + order(b) - d` and represents the composition modulo lower
/// order. With `KnDepth::Full` the expansion runs until it terminates, which
/// it does exactly for polynomial-class symbols.
pub fn kn_compose(a: &ShubinSymbol, b: &ShubinSymbol, depth: KnDepth) -> Result<ShubinSymbol, ShubinError> {
    const CAP: usize = 128;
    if a.is_zero() || b.is_zero() {
        return Ok(ShubinSymbol::zero());
    }
    let top = a.order().unwrap() + b.order().unwrap();
    let floor = match depth {
        KnDepth::Fixed(d) => Some(top - d as i64),
        KnDepth::Full => None,
    };
    let mut result = ShubinSymbol::zero();
    let mut da = a.clone();
    let mut db = b.clone();
    let mut factorial = BigRational::from_integer(1.into());
    let mut k: usize = 0;
    loop {
        if da.is_zero() || db.is_zero() {
            break;
        }
        if let Some(fl) = floor {
            // term k has top homogeneity `top - 2k`
            if top - 2 * (k as i64) < fl {
                break;
            }
        }
        if k > CAP {
            return Err(ShubinError::NonTerminating(CAP));
        }
        let inv_fact = GaussianRational::from_int(1)
            .scale_rational(&(BigRational::from_integer(1.into()) / factorial.clone()));
        let mut term = &da * &db;
        term = term.scale(&inv_fact);
        if let Some(fl) = floor {
            term = term.truncate_below(fl);
        }
        result = &result + &term;
        k += 1;
        factorial *= BigRational::from_integer((k as i64).into());
        da = da.derivative(Var::Xi);
        db = db.derivative(Var::X).scale(&GaussianRational::from_parts(0, -1));
    }
    if let Some(fl) = floor {
        result = result.truncate_below(fl);
    }
    Ok(result)
}

/// Radial/angular sample grid for the seminorm checker (all radii ≥ 1).
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self {
            radii: vec![1.0, 2.0, 5.0, 10.0, 100.0],
            angles: 24,
        }
    }
}

/// Outcome of a numerical estimate verification.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub pass: bool,
    pub worst_ratio: f64,
    pub cap: f64,
    pub notes: Vec<String>,
}

/// Verify the defining symbol estimates for a claimed order on a grid.
///
/// All derivatives up to total order 2 are computed exactly; the ratio
/// `|∂^α∂^β s| / ⟨x,ξ⟩^{claimed - |α| - |β|}` is sampled on the grid and
/// compared against a cap. The default cap is the a-priori coefficient bound
/// `Σ|c| · max(1, 2^{|m'|/2})`, which the ratio can only exceed if the claimed
/// order is too small.
pub fn seminorm_check(
    s: &ShubinSymbol,
    claimed_order: i64,
    grid: &SampleGrid,
    cap: Option<f64>,
) -> Result<CheckReport, ShubinError> {
    for &r in &grid.radii {
        if r < 1.0 {
            return Err(ShubinError::GridBelowOne(r));
        }
    }
    let mut worst: f64 = 0.0;
    let mut worst_cap: f64 = 1.0;
    let mut pass = true;
    let mut notes = Vec::new();
    for dx in 0..=2u32 {
        for dxi in 0..=(2 - dx) {
            let mut ds = s.clone();
            for _ in 0..dx {
                ds = ds.derivative(Var::X);
            }
            for _ in 0..dxi {
                ds = ds.derivative(Var::Xi);
            }
            let m_eff = claimed_order - dx as i64 - dxi as i64;
            let default_cap = ds.coeff_l1() * f64::max(1.0, 2f64.powf(m_eff.unsigned_abs() as f64 / 2.0)) * (1.0 + 1e-9) + 1e-9;
            let this_cap = cap.unwrap_or(default_cap);
            let mut local_worst: f64 = 0.0;
            for &r in &grid.radii {
                for a in 0..grid.angles {
                    let theta = 2.0 * std::f64::consts::PI * a as f64 / grid.angles as f64;
                    let weight = (1.0 + r * r).powf(m_eff as f64 / 2.0);
                    let ratio = ds.eval_polar(r, theta).norm() / weight;
                    local_worst = local_worst.max(ratio);
                }
            }
            if local_worst > this_cap {
                pass = false;
                notes.push(format!(
                    "derivative (∂x^{dx} ∂ξ^{dxi}): ratio {local_worst:.3e} exceeds cap {this_cap:.3e}"
                ));
            }
            if local_worst > worst {
                worst = local_worst;
                worst_cap = this_cap;
            }
        }
    }
    Ok(CheckReport {
        pass,
        worst_ratio: worst,
        cap: worst_cap,
        notes,
    })
}

//! Bisingular symbols on ℝ¹×ℝ¹ and their principal symbol structure.
//!
//! Symbols are finite tensor sums `Σ_t f_t(x1,ξ1) g_t(x2,ξ2)`, a dense
//! subclass which is closed under products and Kohn–Nirenberg composition.
//! The two operator-valued principal symbols σ1, σ2 land in
//! [`SymbolValuedLoop`]s (finite Fourier series on one circle with
//! [`ShubinSymbol`] values on the other factor); the pointwise principal maps
//! σ̃ land in [`BiTrigPoly`]. Compatible pairs form [`SigmaPair`], with
//! composition and an exact section `reconstruct` of (σ1, σ2).

use crate::scalar::GaussianRational;
use crate::shubin::{kn_compose, KnDepth, ShubinError, ShubinSymbol};
use crate::trig::BiTrigPoly;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BisymError {
    #[error("loop factors do not match: expected F on factor 1 and G on factor 2")]
    FactorMismatch,
    #[error("incompatible pair: pointwise principal symbols σ̃ differ")]
    Incompatible,
    #[error(transparent)]
    Shubin(#[from] ShubinError),
}

/// Which factor of ℝ¹×ℝ¹ a loop lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Factor {
    One,
    Two,
}

/// A finite tensor-sum bisingular symbol `Σ_t f_t ⊗ g_t`.
///
/// Canonical form drops terms with a zero factor; the order is the pair of
/// maxima attained by the stored terms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BisingularSymbol {
    terms: Vec<(ShubinSymbol, ShubinSymbol)>,
}

impl BisingularSymbol {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::external(ShubinSymbol::unit(), ShubinSymbol::unit())
    }

    /// The external product `f ♯ g` as a one-term symbol.
    pub fn external(f: ShubinSymbol, g: ShubinSymbol) -> Self {
        let mut s = Self::zero();
        s.push_term(f, g);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (ShubinSymbol, ShubinSymbol)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (f, g) in iter {
            s.push_term(f, g);
        }
        s
    }

    pub fn push_term(&mut self, f: ShubinSymbol, g: ShubinSymbol) {
        if !f.is_zero() && !g.is_zero() {
            self.terms.push((f, g));
        }
    }

    pub fn terms(&self) -> &[(ShubinSymbol, ShubinSymbol)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Bi-order `(m1, m2)`: maxima of the factor orders over stored terms.
    pub fn order(&self) -> Option<(i64, i64)> {
        let m1 = self.terms.iter().filter_map(|(f, _)| f.order()).max()?;
        let m2 = self.terms.iter().filter_map(|(_, g)| g.order()).max()?;
        Some((m1, m2))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(f, g)| (-f, g.clone())))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn eval(&self, x1: f64, xi1: f64, x2: f64, xi2: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(f, g)| f.eval(x1, xi1) * g.eval(x2, xi2))
            .sum()
    }

    /// Merge terms sharing a factor (summing the partner factors) until the
    /// representation is stable. This is the re-canonicalization that exposes
    /// cross-term cancellation of principal parts.
    pub fn combined(&self) -> Self {
        let mut terms = self.terms.clone();
        for _ in 0..8 {
            let before = terms.len();
            // group by equal f, summing g
            let mut by_f: BTreeMap<ShubinSymbol, ShubinSymbol> = BTreeMap::new();
            for (f, g) in terms.drain(..) {
                let slot = by_f.entry(f).or_insert_with(ShubinSymbol::zero);
                *slot = &*slot + &g;
            }
            let mut next: Vec<(ShubinSymbol, ShubinSymbol)> = by_f
                .into_iter()
                .filter(|(f, g)| !f.is_zero() && !g.is_zero())
                .collect();
            // group by equal g, summing f
            let mut by_g: BTreeMap<ShubinSymbol, ShubinSymbol> = BTreeMap::new();
            for (f, g) in next.drain(..) {
                let slot = by_g.entry(g).or_insert_with(ShubinSymbol::zero);
                *slot = &*slot + &f;
            }
            terms = by_g
                .into_iter()
                .filter(|(g, f)| !f.is_zero() && !g.is_zero())
                .map(|(g, f)| (f, g))
                .collect();
            if terms.len() == before {
                break;
            }
        }
        Self { terms }
    }
}

impl fmt::Display for BisingularSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (fac1, fac2)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f, "  +")?;
            }
            writeln!(f, "({fac1})")?;
            write!(f, "  ⊗ ({fac2})")?;
        }
        Ok(())
    }
}

/// Finite Fourier loop on one circle with Shubin-symbol values on the other
/// factor: `θ ↦ Σ_k e^{ikθ} · coeffs[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolValuedLoop {
    pub factor: Factor,
    /// Upper bound (and declared grading level) for the value orders.
    pub value_order: i64,
    coeffs: BTreeMap<i64, ShubinSymbol>,
}

impl SymbolValuedLoop {
    pub fn zero(factor: Factor, value_order: i64) -> Self {
        Self {
            factor,
            value_order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, ShubinSymbol)>>(
        factor: Factor,
        value_order: i64,
        iter: I,
    ) -> Self {
        let mut l = Self::zero(factor, value_order);
        for (k, s) in iter {
            l.add_coeff(k, s);
        }
        l
    }

    pub fn add_coeff(&mut self, k: i64, s: ShubinSymbol) {
        if s.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(ShubinSymbol::zero);
        *slot = &*slot + &s;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&i64, &ShubinSymbol)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, k: i64) -> ShubinSymbol {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The unit loop (frequency 0, value 1) on the given factor.
    pub fn unit(factor: Factor) -> Self {
        Self::from_coeffs(factor, 0, [(0, ShubinSymbol::unit())])
    }
}

/// σ1 graded at an explicit bi-order: collect the factor-1 parts of degree
/// exactly `m1`. Terms whose first factor stays below `m1` contribute nothing.
pub fn sigma1_graded(a: &BisingularSymbol, (m1, m2): (i64, i64)) -> SymbolValuedLoop {
    let mut l = SymbolValuedLoop::zero(Factor::One, m2);
    for (f, g) in a.terms() {
        let lead = f.component(m1);
        for (k, c) in lead.coeffs() {
            l.add_coeff(*k, g.scale(c));
        }
    }
    l
}

/// σ2 graded at an explicit bi-order.
pub fn sigma2_graded(a: &BisingularSymbol, (m1, m2): (i64, i64)) -> SymbolValuedLoop {
    let mut l = SymbolValuedLoop::zero(Factor::Two, m1);
    for (f, g) in a.terms() {
        let lead = g.component(m2);
        for (k, c) in lead.coeffs() {
            l.add_coeff(*k, f.scale(c));
        }
    }
    l
}

/// σ1 at the symbol's attained bi-order.
pub fn sigma1(a: &BisingularSymbol) -> SymbolValuedLoop {
    match a.order() {
        Some(order) => sigma1_graded(a, order),
        None => SymbolValuedLoop::zero(Factor::One, 0),
    }
}

/// σ2 at the symbol's attained bi-order.
pub fn sigma2(a: &BisingularSymbol) -> SymbolValuedLoop {
    match a.order() {
        Some(order) => sigma2_graded(a, order),
        None => SymbolValuedLoop::zero(Factor::Two, 0),
    }
}

/// σ̃ on factor-2 loops (values on factor 1): grade each value at the loop's
/// `value_order` and assemble `(k1 from the value, k2 from the loop)`.
pub fn tsigma1(g_loop: &SymbolValuedLoop) -> BiTrigPoly {
    debug_assert_eq!(g_loop.factor, Factor::Two);
    let mut out = BiTrigPoly::zero();
    for (k2, sym) in g_loop.coeffs() {
        let lead = sym.component(g_loop.value_order);
        for (k1, c) in lead.coeffs() {
            out.add_term((*k1, *k2), c.clone());
        }
    }
    out
}

/// σ̃ on factor-1 loops (values on factor 2): `(k1 from the loop, k2 from the value)`.
pub fn tsigma2(f_loop: &SymbolValuedLoop) -> BiTrigPoly {
    debug_assert_eq!(f_loop.factor, Factor::One);
    let mut out = BiTrigPoly::zero();
    for (k1, sym) in f_loop.coeffs() {
        let lead = sym.component(f_loop.value_order);
        for (k2, c) in lead.coeffs() {
            out.add_term((*k1, *k2), c.clone());
        }
    }
    out
}

/// The compatibility condition: σ̃ of both loops agree exactly.
pub fn compat_check(f_loop: &SymbolValuedLoop, g_loop: &SymbolValuedLoop) -> bool {
    f_loop.factor == Factor::One
        && g_loop.factor == Factor::Two
        && tsigma2(f_loop) == tsigma1(g_loop)
}

/// A compatible pair (F, G) of symbol-valued loops of bi-order `(m1, m2)`.
///
/// F is the factor-1 loop with values of order ≤ m2 (homogeneity degree m1 is
/// implicit in the circle representation), G the factor-2 loop with values of
/// order ≤ m1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPair {
    pub f_loop: SymbolValuedLoop,
    pub g_loop: SymbolValuedLoop,
    pub order: (i64, i64),
}

impl SigmaPair {
    pub fn new(f_loop: SymbolValuedLoop, g_loop: SymbolValuedLoop) -> Result<Self, BisymError> {
        if f_loop.factor != Factor::One || g_loop.factor != Factor::Two {
            return Err(BisymError::FactorMismatch);
        }
        if tsigma2(&f_loop) != tsigma1(&g_loop) {
            return Err(BisymError::Incompatible);
        }
        let order = (g_loop.value_order, f_loop.value_order);
        Ok(Self { f_loop, g_loop, order })
    }

    /// The unit pair (F ≡ 1, G ≡ 1) of order (0, 0).
    pub fn unit() -> Self {
        Self::new(SymbolValuedLoop::unit(Factor::One), SymbolValuedLoop::unit(Factor::Two)).unwrap()
    }

    /// The common pointwise principal symbol σ̃.
    pub fn joint_principal(&self) -> BiTrigPoly {
        tsigma2(&self.f_loop)
    }
}

/// The pair of principal symbols of a bisingular symbol. Compatibility holds
/// by construction for tensor sums.
pub fn sigma_pair(a: &BisingularSymbol) -> SigmaPair {
    SigmaPair::new(sigma1(a), sigma2(a)).expect("(σ1, σ2) of a tensor sum is always compatible")
}

/// Composition of bisingular symbols: bilinear extension of
/// `(f⊗g) # (f'⊗g') = (f#f') ⊗ (g#g')`, valid because the Kohn–Nirenberg
/// product acts factorwise on separated variables.
pub fn bs_compose(
    a: &BisingularSymbol,
    b: &BisingularSymbol,
    depth: KnDepth,
) -> Result<BisingularSymbol, BisymError> {
    let mut out = BisingularSymbol::zero();
    for (fa, ga) in a.terms() {
        for (fb, gb) in b.terms() {
            let f = kn_compose(fa, fb, depth)?;
            let g = kn_compose(ga, gb, depth)?;
            out.push_term(f, g);
        }
    }
    Ok(out)
}

/// Composition in the pair algebra: pointwise in the loop angle, operator
/// (Kohn–Nirenberg) composition in the values, so loop frequencies convolve.
pub fn sigma_pair_compose(p: &SigmaPair, q: &SigmaPair, depth: KnDepth) -> Result<SigmaPair, BisymError> {
    let mut f = SymbolValuedLoop::zero(Factor::One, p.f_loop.value_order + q.f_loop.value_order);
    for (k1, s1) in p.f_loop.coeffs() {
        for (k2, s2) in q.f_loop.coeffs() {
            f.add_coeff(k1 + k2, kn_compose(s1, s2, depth)?);
        }
    }
    let mut g = SymbolValuedLoop::zero(Factor::Two, p.g_loop.value_order + q.g_loop.value_order);
    for (k1, s1) in p.g_loop.coeffs() {
        for (k2, s2) in q.g_loop.coeffs() {
            g.add_coeff(k1 + k2, kn_compose(s1, s2, depth)?);
        }
    }
    SigmaPair::new(f, g)
}

/// Exact section of (σ1, σ2): build `a = χ1 P + χ2 Q - χ1 χ2 R` in tensor-sum
/// form, where P, Q are the homogeneous extensions of F, G and R extends the
/// common σ̃ value bihomogeneously. The cut-offs are realized by the radial
/// evaluation cut-off of [`ShubinSymbol`], so the symbolic layer never sees
/// them and `sigma1/sigma2` of the result reproduce the pair exactly.
pub fn reconstruct(p: &SigmaPair) -> Result<BisingularSymbol, BisymError> {
    if !compat_check(&p.f_loop, &p.g_loop) {
        return Err(BisymError::Incompatible);
    }
    let (m1, m2) = p.order;
    let mut out = BisingularSymbol::zero();
    // P: degree-m1 radial extension of F in factor 1
    for (k1, g_val) in p.f_loop.coeffs() {
        out.push_term(
            ShubinSymbol::monomial(m1, *k1, GaussianRational::from_int(1)),
            g_val.clone(),
        );
    }
    // Q: degree-m2 radial extension of G in factor 2
    for (k2, f_val) in p.g_loop.coeffs() {
        out.push_term(
            f_val.clone(),
            ShubinSymbol::monomial(m2, *k2, GaussianRational::from_int(1)),
        );
    }
    // -R: bihomogeneous extension of σ̃
    for ((k1, k2), c) in p.joint_principal().coeffs() {
        out.push_term(
            ShubinSymbol::monomial(m1, *k1, -c.clone()),
            ShubinSymbol::monomial(m2, *k2, GaussianRational::from_int(1)),
        );
    }
    Ok(out)
}

/// Outcome of the kernel-order verification for the symbol exact sequence.
#[derive(Clone, Debug, Serialize)]
pub struct KernelOrderReport {
    /// False when a principal symbol is nonzero, i.e. the check does not apply.
    pub applicable: bool,
    pub pass: bool,
    pub declared_order: Option<(i64, i64)>,
    pub achieved_order: Option<(i64, i64)>,
    pub note: String,
}

/// If both principal symbols (graded at the declared bi-order) vanish, verify
/// that the symbol admits a representation of order `(m1-1, m2-1)` by merging
/// tensor terms.
pub fn kernel_order_check(a: &BisingularSymbol, declared: (i64, i64)) -> KernelOrderReport {
    let (m1, m2) = declared;
    if a.is_zero() {
        return KernelOrderReport {
            applicable: true,
            pass: true,
            declared_order: Some(declared),
            achieved_order: None,
            note: "zero symbol".into(),
        };
    }
    if !sigma1_graded(a, declared).is_zero() || !sigma2_graded(a, declared).is_zero() {
        return KernelOrderReport {
            applicable: false,
            pass: false,
            declared_order: Some(declared),
            achieved_order: None,
            note: "principal symbols are nonzero; kernel check not applicable".into(),
        };
    }
    let combined = a.combined();
    let achieved = combined.order();
    let pass = match achieved {
        None => true,
        Some((a1, a2)) => a1 <= m1 - 1 && a2 <= m2 - 1,
    };
    KernelOrderReport {
        applicable: true,
        pass,
        declared_order: Some(declared),
        achieved_order: achieved,
        note: if pass {
            format!("order dropped to {achieved:?} ≤ ({}, {})", m1 - 1, m2 - 1)
        } else {
            format!("no representation of order ({}, {}) found", m1 - 1, m2 - 1)
        },
    }
}

/// The external product `f ♯ g`.
pub fn external_product(f: &ShubinSymbol, g: &ShubinSymbol) -> BisingularSymbol {
    BisingularSymbol::external(f.clone(), g.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::TrigPoly;

    fn one() -> GaussianRational {
        GaussianRational::from_int(1)
    }

    #[test]
    fn sigma1_of_monomial_tensor() {
        let a = external_product(&ShubinSymbol::x_plus_i_xi(), &ShubinSymbol::x_plus_i_xi());
        let l = sigma1(&a);
        assert_eq!(l.value_order, 1);
        assert_eq!(l.coeff(1), ShubinSymbol::x_plus_i_xi());
        assert!(l.coeff(0).is_zero());
    }

    #[test]
    fn sigma1_constant_first_factor() {
        let g = ShubinSymbol::from_components([(2, TrigPoly::monomial(0, one()))]);
        let a = external_product(&ShubinSymbol::unit(), &g);
        let l = sigma1(&a);
        assert_eq!(l.coeff(0), g);
        assert_eq!(l.coeffs().count(), 1);
    }

    #[test]
    fn subprincipal_term_drops_out() {
        // one term of order m1, one of order m1 - 1: only the first contributes
        let f_low = ShubinSymbol::unit();
        let g = ShubinSymbol::x_plus_i_xi();
        let a = BisingularSymbol::from_terms([
            (ShubinSymbol::x_plus_i_xi(), g.clone()),
            (f_low, g.clone()),
        ]);
        let l = sigma1(&a);
        assert_eq!(l.coeff(1), g);
        assert_eq!(l.coeffs().count(), 1);
    }

    #[test]
    fn tsigma_smoothing_value_vanishes() {
        // constant loop whose value has order below the grading level
        let l = SymbolValuedLoop::from_coeffs(
            Factor::One,
            0,
            [(0, ShubinSymbol::monomial(-1, 0, one()))],
        );
        assert!(tsigma2(&l).is_zero());
    }

    #[test]
    fn tsigma_of_weight_plus_one() {
        // loop value r² + 1 at frequency 0, graded at order 2
        let val = &ShubinSymbol::r_squared() + &ShubinSymbol::unit();
        let l = SymbolValuedLoop::from_coeffs(Factor::One, 2, [(0, val)]);
        let t = tsigma2(&l);
        assert_eq!(t.coeff((0, 0)), one());
        assert_eq!(t.coeffs().count(), 1);
    }

    #[test]
    fn compat_scalar_mismatch() {
        let f = SymbolValuedLoop::from_coeffs(Factor::One, 1, [(1, ShubinSymbol::x_plus_i_xi())]);
        let g_ok = SymbolValuedLoop::from_coeffs(Factor::Two, 1, [(1, ShubinSymbol::x_plus_i_xi())]);
        let g_bad = SymbolValuedLoop::from_coeffs(
            Factor::Two,
            1,
            [(1, ShubinSymbol::x_plus_i_xi().scale(&GaussianRational::from_int(2)))],
        );
        assert!(compat_check(&f, &g_ok));
        assert!(!compat_check(&f, &g_bad));
    }

    #[test]
    fn unit_pair_is_neutral() {
        let a = external_product(&ShubinSymbol::x_plus_i_xi(), &ShubinSymbol::coordinate_x());
        let p = sigma_pair(&a);
        let composed = sigma_pair_compose(&p, &SigmaPair::unit(), KnDepth::Full).unwrap();
        assert_eq!(composed, p);
    }

    #[test]
    fn disjoint_factors_compose_to_plain_tensor() {
        let a = external_product(&ShubinSymbol::x_plus_i_xi(), &ShubinSymbol::unit());
        let b = external_product(&ShubinSymbol::unit(), &ShubinSymbol::x_plus_i_xi());
        let c = bs_compose(&a, &b, KnDepth::Full).unwrap().combined();
        let expected = external_product(&ShubinSymbol::x_plus_i_xi(), &ShubinSymbol::x_plus_i_xi());
        assert_eq!(c, expected);
    }

    #[test]
    fn reconstruct_rejects_incompatible() {
        let f = SymbolValuedLoop::from_coeffs(
            Factor::One,
            2,
            [(1, &ShubinSymbol::r_squared() + &ShubinSymbol::unit())],
        );
        let g = SymbolValuedLoop::from_coeffs(Factor::Two, 1, [(1, ShubinSymbol::x_plus_i_xi())]);
        assert!(SigmaPair::new(f, g).is_err());
    }

    #[test]
    fn kernel_check_not_applicable_when_principal_nonzero() {
        let a = external_product(&ShubinSymbol::x_plus_i_xi(), &ShubinSymbol::unit());
        let rep = kernel_order_check(&a, (1, 0));
        assert!(!rep.applicable);
    }

    #[test]
    fn kernel_check_lower_order_tensor() {
        // both factors stay below the declared order (1, 1)
        let a = external_product(&ShubinSymbol::unit(), &ShubinSymbol::unit());
        let rep = kernel_order_check(&a, (1, 1));
        assert!(rep.applicable && rep.pass);
        assert_eq!(rep.achieved_order, Some((0, 0)));
    }
}

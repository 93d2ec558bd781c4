//! Symbol algebra suite: evaluation oracles for products, finite-difference
//! oracles for the polar derivative rules, operator oracles for the
//! Kohn–Nirenberg composition, and the seminorm estimates.

use bisingular::quantize::{hermite_ladder_matrices, quantize_poly, CMatrix};
use bisingular::sample;
use bisingular::{
    kn_compose, seminorm_check, GaussianRational, KnDepth, SampleGrid, ShubinSymbol, TrigPoly, Var,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn one() -> GaussianRational {
    GaussianRational::from_int(1)
}

// ---------------------------------------------------------------- tp_mul

#[test]
fn tp_mul_matches_pointwise_evaluation() {
    let mut rng = sample::rng(101);
    for _ in 0..40 {
        let a = sample::trig_poly(&mut rng, 8, 5);
        let b = sample::trig_poly(&mut rng, 8, 5);
        let prod = &a * &b;
        for g in 0..64 {
            let theta = 2.0 * PI * g as f64 / 64.0;
            let lhs = prod.eval(theta);
            let rhs = a.eval(theta) * b.eval(theta);
            assert!((lhs - rhs).norm() < 1e-12, "mismatch at θ = {theta}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tp_mul_commutative_associative_unital(seed in 0u64..1u64 << 48) {
        let mut rng = sample::rng(seed);
        let a = sample::trig_poly(&mut rng, 5, 4);
        let b = sample::trig_poly(&mut rng, 5, 4);
        let c = sample::trig_poly(&mut rng, 5, 4);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &TrigPoly::one(), a);
    }

    #[test]
    fn winding_is_additive(seed in 0u64..1u64 << 48) {
        // nonvanishing loops: dominant single frequency plus a small tail
        let mut rng = sample::rng(seed);
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let k = {
                let r: i64 = rng.random_range(-3..=3);
                r
            };
            let mut p = TrigPoly::monomial(k, GaussianRational::from_int(8));
            p.add_term(k + 2, GaussianRational::from_int(1));
            p
        };
        let u = mk(&mut rng);
        let v = mk(&mut rng);
        let wu = bisingular::index::winding(&u).unwrap().value;
        let wv = bisingular::index::winding(&v).unwrap().value;
        let wuv = bisingular::index::winding(&(&u * &v)).unwrap().value;
        prop_assert_eq!(wuv, wu + wv);
    }
}

// ---------------------------------------------------------- sh_derivative

#[test]
fn derivative_of_r_squared_is_2x() {
    // ∂x r² = 2x = r (e^{iθ} + e^{-iθ})
    let d = ShubinSymbol::r_squared().derivative(Var::X);
    let expected = ShubinSymbol::coordinate_x().scale(&GaussianRational::from_int(2));
    assert_eq!(d, expected);
}

#[test]
fn derivative_matches_finite_differences() {
    // central differences of the evaluation, 20 sample points with r in [2, 5]
    let mut rng = sample::rng(7);
    let h = 1e-5;
    for _ in 0..10 {
        let s = sample::shubin(&mut rng, 2, 2, 3);
        let dx = s.derivative(Var::X);
        let dxi = s.derivative(Var::Xi);
        for p in 0..20 {
            let r = 2.0 + 3.0 * (p as f64) / 19.0;
            let theta = 2.0 * PI * (p as f64) / 20.0 + 0.1;
            let (x, xi) = (r * theta.cos(), r * theta.sin());
            let fd_x = (s.eval(x + h, xi) - s.eval(x - h, xi)) / (2.0 * h);
            let fd_xi = (s.eval(x, xi + h) - s.eval(x, xi - h)) / (2.0 * h);
            assert!((dx.eval(x, xi) - fd_x).norm() < 1e-6, "∂x mismatch");
            assert!((dxi.eval(x, xi) - fd_xi).norm() < 1e-6, "∂ξ mismatch");
        }
    }
}

#[test]
fn derivatives_commute() {
    let mut rng = sample::rng(13);
    for _ in 0..20 {
        let s = sample::shubin(&mut rng, 3, 2, 4);
        assert_eq!(
            s.derivative(Var::X).derivative(Var::Xi),
            s.derivative(Var::Xi).derivative(Var::X)
        );
    }
}

#[test]
fn derivative_drops_order_by_one() {
    let mut rng = sample::rng(17);
    for _ in 0..20 {
        let s = sample::shubin(&mut rng, 2, 1, 2);
        let d = s.derivative(Var::X);
        if let Some(m) = d.order() {
            assert!(m <= s.order().unwrap() - 1);
        }
    }
}

// ----------------------------------------------------------------- sh_mul

#[test]
fn sh_mul_matches_evaluation() {
    let mut rng = sample::rng(23);
    for _ in 0..20 {
        let a = sample::shubin(&mut rng, 2, 2, 3);
        let b = sample::shubin(&mut rng, 1, 1, 3);
        let prod = &a * &b;
        for p in 0..50 {
            let r = 2.0 + (p as f64) / 7.0;
            let theta = 2.0 * PI * (p as f64) / 50.0;
            let (x, xi) = (r * theta.cos(), r * theta.sin());
            let lhs = prod.eval(x, xi);
            let rhs = a.eval(x, xi) * b.eval(x, xi);
            let scale = 1.0 + rhs.norm();
            assert!((lhs - rhs).norm() / scale < 1e-10);
        }
    }
}

#[test]
fn sh_mul_order_bookkeeping() {
    let a = ShubinSymbol::x_plus_i_xi();
    let b = ShubinSymbol::x_minus_i_xi();
    let prod = &a * &b;
    assert_eq!(prod.order(), Some(2));
    assert_eq!(prod, ShubinSymbol::r_squared());
}

#[test]
fn leibniz_rule() {
    let mut rng = sample::rng(29);
    for _ in 0..20 {
        let a = sample::shubin(&mut rng, 2, 1, 3);
        let b = sample::shubin(&mut rng, 1, 1, 3);
        for var in [Var::X, Var::Xi] {
            let lhs = (&a * &b).derivative(var);
            let rhs = &(&a.derivative(var) * &b) + &(&a * &b.derivative(var));
            assert_eq!(lhs, rhs);
        }
    }
}

// ------------------------------------------------------------- kn_compose

/// Operator oracle: compare Op(a)Op(b) with Op(a#b) on a cropped block.
fn operator_oracle(a: &ShubinSymbol, b: &ShubinSymbol, n: usize, keep: usize, tol: f64) {
    let comp = kn_compose(a, b, KnDepth::Full).unwrap();
    let qa = quantize_poly(a, n).unwrap().cropped();
    let qb = quantize_poly(b, n).unwrap().cropped();
    let qc = quantize_poly(&comp, n).unwrap().cropped();
    let prod = &qa * &qb;
    let diff: CMatrix = prod.view((0, 0), (keep, keep)) - qc.view((0, 0), (keep, keep));
    assert!(
        diff.norm() < tol,
        "operator oracle failed: ‖Op(a)Op(b) - Op(a#b)‖ = {}",
        diff.norm()
    );
}

#[test]
fn kn_xi_x_against_operator_oracle() {
    operator_oracle(
        &ShubinSymbol::coordinate_xi(),
        &ShubinSymbol::coordinate_x(),
        32,
        24,
        1e-10,
    );
    operator_oracle(
        &ShubinSymbol::coordinate_x(),
        &ShubinSymbol::coordinate_xi(),
        32,
        24,
        1e-10,
    );
}

#[test]
fn kn_associativity_full_depth() {
    let mut rng = sample::rng(31);
    for _ in 0..15 {
        let a = sample::polynomial_shubin(&mut rng, 2);
        let b = sample::polynomial_shubin(&mut rng, 2);
        let c = sample::polynomial_shubin(&mut rng, 2);
        let ab_c = kn_compose(&kn_compose(&a, &b, KnDepth::Full).unwrap(), &c, KnDepth::Full).unwrap();
        let a_bc = kn_compose(&a, &kn_compose(&b, &c, KnDepth::Full).unwrap(), KnDepth::Full).unwrap();
        assert_eq!(ab_c, a_bc);
    }
}

#[test]
fn kn_principal_multiplicativity() {
    let mut rng = sample::rng(37);
    for _ in 0..25 {
        let a = sample::shubin(&mut rng, 2, 1, 3);
        let b = sample::shubin(&mut rng, 1, 1, 3);
        let principal_product = &a.principal() * &b.principal();
        let composed = kn_compose(&a, &b, KnDepth::Fixed(1)).unwrap();
        if principal_product.is_zero() {
            continue;
        }
        assert_eq!(composed.principal(), principal_product);
        assert_eq!(
            composed.order(),
            Some(a.order().unwrap() + b.order().unwrap())
        );
    }
}

#[test]
fn kn_depth_truncation() {
    // ξ # x at depth 0 keeps only the leading term xξ
    let c = kn_compose(
        &ShubinSymbol::coordinate_xi(),
        &ShubinSymbol::coordinate_x(),
        KnDepth::Fixed(0),
    )
    .unwrap();
    let x_xi = &ShubinSymbol::coordinate_x() * &ShubinSymbol::coordinate_xi();
    assert_eq!(c, x_xi);
}

#[test]
fn kn_nonterminating_expansion_errors() {
    // r e^{2iθ} is not polynomial-class: derivatives never vanish
    let s = ShubinSymbol::monomial(1, 2, one());
    assert!(kn_compose(&s, &s, KnDepth::Full).is_err());
    assert!(kn_compose(&s, &s, KnDepth::Fixed(3)).is_ok());
}

// --------------------------------------------------------------- seminorm

#[test]
fn seminorm_exact_order_passes() {
    let rep = seminorm_check(&ShubinSymbol::x_plus_i_xi(), 1, &SampleGrid::default(), None).unwrap();
    assert!(rep.pass, "worst ratio {} vs cap {}", rep.worst_ratio, rep.cap);
}

#[test]
fn seminorm_understated_order_fails() {
    let rep = seminorm_check(&ShubinSymbol::x_plus_i_xi(), 0, &SampleGrid::default(), None).unwrap();
    assert!(!rep.pass);
    // the ratio grows like r: at r = 100 it must be visible
    assert!(rep.worst_ratio > 50.0);
}

#[test]
fn seminorm_zero_symbol() {
    let rep = seminorm_check(&ShubinSymbol::zero(), 0, &SampleGrid::default(), None).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.worst_ratio, 0.0);
}

#[test]
fn seminorm_overstated_order_passes() {
    let rep = seminorm_check(&ShubinSymbol::x_plus_i_xi(), 3, &SampleGrid::default(), None).unwrap();
    assert!(rep.pass);
}

// --------------------------------------------------------- weight symbols

#[test]
fn weight_power_evaluates_to_binomial() {
    let w = ShubinSymbol::weight_power(3);
    for p in 0..10 {
        let r = 1.0 + p as f64;
        let theta = 0.37 * p as f64;
        let (x, xi) = (r * theta.cos(), r * theta.sin());
        let expected = (1.0 + r * r).powi(3);
        assert!((w.eval(x, xi) - Complex64::new(expected, 0.0)).norm() < 1e-9 * expected);
    }
}

// ------------------------------------------------ hermite quadrature oracle

/// Normalized Hermite function h_n(x) by upward recurrence.
fn hermite_fn(n: usize, x: f64) -> f64 {
    let norm0 = PI.powf(-0.25);
    let mut h0 = norm0 * (-x * x / 2.0).exp();
    if n == 0 {
        return h0;
    }
    let mut h1 = norm0 * (2.0f64).sqrt() * x * (-x * x / 2.0).exp();
    for m in 2..=n {
        // h_m = x sqrt(2/m) h_{m-1} - sqrt((m-1)/m) h_{m-2}
        let next = x * (2.0 / m as f64).sqrt() * h1 - ((m as f64 - 1.0) / m as f64).sqrt() * h0;
        h0 = h1;
        h1 = next;
    }
    h1
}

#[test]
fn ladder_entry_against_quadrature() {
    // ∫ x h0(x) h1(x) dx = sqrt(1/2), by fine trapezoid on [-12, 12]
    let steps = 24_000;
    let (a, b) = (-12.0, 12.0);
    let dx = (b - a) / steps as f64;
    let mut integral = 0.0;
    for i in 0..=steps {
        let x = a + i as f64 * dx;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        integral += w * x * hermite_fn(0, x) * hermite_fn(1, x) * dx;
    }
    assert!((integral - (0.5f64).sqrt()).abs() < 1e-10);
    let (xmat, _) = hermite_ladder_matrices(4, 0);
    assert!((xmat[(1, 0)].re - integral).abs() < 1e-10);
}

#[test]
fn annihilation_against_quadrature() {
    // Op(x+iξ) applied to h1 equals (x + d/dx) h1 = sqrt(2) h0
    let op = quantize_poly(&ShubinSymbol::x_plus_i_xi(), 6).unwrap().cropped();
    let col: Vec<Complex64> = (0..6).map(|r| op[(r, 1)]).collect();
    // quadrature of (x h1 + h1') against h_r
    let steps = 24_000;
    let (a, b) = (-12.0, 12.0);
    let dx = (b - a) / steps as f64;
    let h = 1e-6;
    for (r, &c) in col.iter().enumerate() {
        let mut integral = 0.0;
        for i in 0..=steps {
            let x = a + i as f64 * dx;
            let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
            let applied = x * hermite_fn(1, x) + (hermite_fn(1, x + h) - hermite_fn(1, x - h)) / (2.0 * h);
            integral += w * applied * hermite_fn(r, x) * dx;
        }
        assert!(
            (c - Complex64::new(integral, 0.0)).norm() < 1e-5,
            "row {r}: matrix {c} vs quadrature {integral}"
        );
    }
}

//! Seeded random generators for the verification suites.
//!
//! Everything is driven by an explicit `ChaCha8Rng` so that suite runs are
//! reproducible byte for byte.

use crate::bisym::BisingularSymbol;
use crate::scalar::GaussianRational;
use crate::shubin::ShubinSymbol;
use crate::trig::TrigPoly;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_coeff(rng: &mut ChaCha8Rng) -> GaussianRational {
    let re = rng.random_range(-3..=3);
    let im = rng.random_range(-3..=3);
    let den = rng.random_range(1..=2);
    GaussianRational::new(
        num_rational::BigRational::new(re.into(), den.into()),
        num_rational::BigRational::new(im.into(), den.into()),
    )
}

/// Random trig polynomial with up to `max_terms` nonzero coefficients at
/// frequencies |k| ≤ `max_freq`.
pub fn trig_poly(rng: &mut ChaCha8Rng, max_freq: i64, max_terms: usize) -> TrigPoly {
    let mut p = TrigPoly::zero();
    let terms = rng.random_range(1..=max_terms);
    for _ in 0..terms {
        let k = rng.random_range(-max_freq..=max_freq);
        p.add_term(k, small_coeff(rng));
    }
    p
}

/// Nonzero variant (re-draws until a coefficient survives cancellation).
pub fn trig_poly_nonzero(rng: &mut ChaCha8Rng, max_freq: i64, max_terms: usize) -> TrigPoly {
    loop {
        let p = trig_poly(rng, max_freq, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random Shubin symbol of exact order `order` with `depth + 1` component
/// slots and frequencies |k| ≤ `max_freq`.
pub fn shubin(rng: &mut ChaCha8Rng, order: i64, depth: i64, max_freq: i64) -> ShubinSymbol {
    let mut s = ShubinSymbol::zero();
    s.add_component(order, trig_poly_nonzero(rng, max_freq, 3));
    for j in (order - depth)..order {
        if rng.random_bool(0.7) {
            s.add_component(j, trig_poly(rng, max_freq, 2));
        }
    }
    s
}

/// Random polynomial-class symbol of total degree ≤ `max_degree` (valid
/// monomials `r^j e^{ikθ}` with |k| ≤ j, j ≡ k mod 2).
pub fn polynomial_shubin(rng: &mut ChaCha8Rng, max_degree: i64) -> ShubinSymbol {
    let mut s = ShubinSymbol::zero();
    let terms = rng.random_range(1..=4);
    for _ in 0..terms {
        let j = rng.random_range(0..=max_degree);
        let choices: Vec<i64> = (-j..=j).filter(|k| (j - k) % 2 == 0).collect();
        let k = choices[rng.random_range(0..choices.len())];
        s.add_term(j, k, small_coeff(rng));
    }
    if s.is_zero() {
        s.add_term(0, 0, GaussianRational::from_int(1));
    }
    s
}

/// Random tensor-sum bisingular symbol with `terms` terms of factor orders
/// exactly `(m1, m2)` in at least one term.
pub fn bisingular(
    rng: &mut ChaCha8Rng,
    m1: i64,
    m2: i64,
    depth: i64,
    max_freq: i64,
    terms: usize,
) -> BisingularSymbol {
    let mut a = BisingularSymbol::zero();
    a.push_term(shubin(rng, m1, depth, max_freq), shubin(rng, m2, depth, max_freq));
    for _ in 1..terms {
        let d1 = rng.random_range(0..=depth.min(m1 + 2));
        let d2 = rng.random_range(0..=depth.min(m2 + 2));
        a.push_term(
            shubin(rng, m1 - d1, depth, max_freq),
            shubin(rng, m2 - d2, depth, max_freq),
        );
    }
    a
}

/// A random bisingular symbol of bi-order `(m1, m2)` whose graded principal
/// symbols cancel exactly: each base term `f ⊗ g` is stored together with
/// `-(principal part of f) ⊗ g` and `-(f minus its principal) ⊗ (principal
/// part of g)`, so σ1 and σ2 vanish while order-(m1) and order-(m2) factors
/// remain present in the term list.
pub fn principal_cancelling(
    rng: &mut ChaCha8Rng,
    m1: i64,
    m2: i64,
    max_freq: i64,
    base_terms: usize,
) -> BisingularSymbol {
    let mut a = BisingularSymbol::zero();
    for _ in 0..base_terms {
        let f = shubin(rng, m1, 2, max_freq);
        let g = shubin(rng, m2, 2, max_freq);
        let f_principal = ShubinSymbol::from_components([(m1, f.component(m1))]);
        let f_lower = &f - &f_principal;
        let g_principal = ShubinSymbol::from_components([(m2, g.component(m2))]);
        a.push_term(f.clone(), g.clone());
        a.push_term(-&f_principal, g);
        if !f_lower.is_zero() {
            a.push_term(-&f_lower, g_principal);
        }
    }
    a
}

/// A random compatible symbol pair, produced as (σ1, σ2) of a random tensor
/// symbol (compatibility holds by construction).
pub fn compatible_pair(
    rng: &mut ChaCha8Rng,
    m1: i64,
    m2: i64,
    max_freq: i64,
) -> crate::bisym::SigmaPair {
    let terms = rng.random_range(1..=3);
    let a = bisingular(rng, m1, m2, 2, max_freq, terms);
    crate::bisym::sigma_pair(&a)
}

/// Random integer matrix with entries in `[-bound, bound]`.
pub fn int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i128) -> crate::ktheory::IMatrix {
    crate::ktheory::IMatrix::from_fn(rows, cols, |_, _| {
        rng.random_range(-(bound as i64)..=(bound as i64)) as i128
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisym::{sigma1_graded, sigma2_graded};

    #[test]
    fn determinism() {
        let a: Vec<_> = {
            let mut r = rng(7);
            (0..4).map(|_| trig_poly(&mut r, 4, 3)).collect()
        };
        let b: Vec<_> = {
            let mut r = rng(7);
            (0..4).map(|_| trig_poly(&mut r, 4, 3)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn cancelling_generator_kills_principals() {
        let mut r = rng(11);
        for _ in 0..20 {
            let a = principal_cancelling(&mut r, 2, 1, 2, 2);
            assert!(sigma1_graded(&a, (2, 1)).is_zero());
            assert!(sigma2_graded(&a, (2, 1)).is_zero());
        }
    }

    #[test]
    fn polynomial_generator_stays_in_class() {
        let mut r = rng(3);
        for _ in 0..50 {
            let s = polynomial_shubin(&mut r, 3);
            assert!(s.polynomial_class().is_ok());
        }
    }
}

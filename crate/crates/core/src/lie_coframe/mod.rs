//! Exterior algebra on the invariant coframe `{dr, theta1..theta6}` of
//! `(eps, inf) x Spin(4)` with scalar or su(2)-valued jet coefficients.

mod complex;
mod form;
mod metric;
mod monomial;
mod structure;

pub use complex::ComplexStructure;
pub use form::{AnyForm, Coefficient, CoefficientKind, InvariantForm, LieForm, ScalarForm};
pub use metric::{CoframeMetric, Orientation};
pub use monomial::{Monomial, DR, GENERATORS, VERTICAL};
pub use structure::{StructureConstants, SO4};

use crate::error::{Error, Result};

/// Dynamically typed wedge product.
pub fn wedge(a: &AnyForm, b: &AnyForm) -> Result<AnyForm> {
    a.wedge(b)
}

pub fn mc_derivative<C: Coefficient>(a: &InvariantForm<C>) -> InvariantForm<C> {
    a.d()
}

/// `F = dA + 1/2 [A ^ A]`.
pub fn curvature(a: &LieForm) -> Result<LieForm> {
    if a.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: a.degree(),
        });
    }
    Ok(&a.d() + &a.bracket_wedge(a).scale(0.5))
}

/// [`curvature`] for a form whose coefficient type is only known at run time.
pub fn curvature_any(a: &AnyForm) -> Result<LieForm> {
    curvature(&a.clone().into_lie("curvature")?)
}

/// `d_A beta = d beta + [A ^ beta]` on Lie-valued forms.
pub fn exterior_covariant(a: &LieForm, beta: &LieForm) -> LieForm {
    &beta.d() + &a.bracket_wedge(beta)
}

/// `nabla_A Phi = d Phi + [A, Phi]`.
pub fn covariant_derivative(a: &LieForm, phi: &LieForm) -> Result<LieForm> {
    if phi.degree() != 0 {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: phi.degree(),
        });
    }
    Ok(exterior_covariant(a, phi))
}

pub fn hodge_star<C: Coefficient>(
    a: &InvariantForm<C>,
    g: &CoframeMetric,
) -> Result<InvariantForm<C>> {
    g.hodge_star(a)
}

pub fn lambda_op<C: Coefficient>(
    beta: &InvariantForm<C>,
    omega: &ScalarForm,
    g: &CoframeMetric,
) -> Result<InvariantForm<C>> {
    g.lambda(beta, omega)
}

pub fn apply_complex_structure<C: Coefficient>(
    a: &InvariantForm<C>,
    i: &ComplexStructure,
) -> Result<InvariantForm<C>> {
    if a.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: a.degree(),
        });
    }
    i.apply(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;
    use crate::su2::Su2;
    use alloc::string::ToString;
    use alloc::vec::Vec;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn th(i: usize) -> ScalarForm {
        ScalarForm::generator(i)
    }

    fn b(word: &[usize]) -> ScalarForm {
        ScalarForm::basis(word)
    }

    #[test]
    fn basic_wedges() {
        assert_eq!(th(2).wedge(&th(3)), b(&[2, 3]));
        assert!(th(2).wedge(&th(2)).is_zero());
        assert_eq!(b(&[2, 3]).wedge(&b(&[4, 5])), b(&[2, 3, 4, 5]));
        assert_eq!(th(3).wedge(&th(2)), b(&[2, 3]).scale(-1.0));
    }

    #[test]
    fn lie_wedge_needs_bracket() {
        let x = AnyForm::Lie(th(1).tensor(Su2::basis(1)));
        let s = AnyForm::Scalar(th(2));
        assert!(matches!(
            wedge(&x, &x),
            Err(Error::IncompatibleCoefficients { .. })
        ));
        assert!(wedge(&s, &x).is_ok());
        assert!(x.bracket_wedge(&s).is_err());
        assert!(matches!(curvature_any(&s), Err(Error::NotLieValued { .. })));
    }

    #[test]
    fn quoted_maurer_cartan_relations() {
        assert_eq!(th(6).d(), &b(&[2, 3]) + &b(&[4, 5]));
        assert_eq!(th(1).d(), &b(&[2, 4]) + &b(&[3, 5]));
        assert_eq!(th(2).d(), &b(&[3, 6]) - &b(&[1, 4]));
        assert_eq!(th(3).d(), (&b(&[1, 5]) + &b(&[2, 6])).scale(-1.0));
        assert_eq!(th(5).d(), &b(&[1, 3]) - &b(&[4, 6]));
        assert_eq!(th(4).d(), &b(&[1, 2]) + &b(&[5, 6]));
    }

    #[test]
    fn d_squared_vanishes_on_generators() {
        for i in 0..GENERATORS {
            assert!(th(i).d().d().is_zero(), "d d theta{i}");
        }
    }

    #[test]
    fn d_of_radial_function() {
        let f = ScalarForm::term(&[], Jet::new(2.0, 3.0));
        assert_eq!(f.d(), ScalarForm::term(&[0], Jet::constant(3.0)));
    }

    #[test]
    fn display_is_sorted() {
        let f = &b(&[4, 5]) + &b(&[0, 1]).scale(0.5);
        assert_eq!(f.to_string(), "0.5 * dr^θ1 + 1 * θ4^θ5");
        let l = th(2).tensor(Su2::basis(3));
        assert_eq!(l.to_string(), "(0, 0, 1) * θ2 ⊗ T");
    }

    fn random_form(rng: &mut StdRng, degree: usize, terms: usize) -> ScalarForm {
        let mut f = ScalarForm::zero(degree);
        for _ in 0..terms {
            let mut word: Vec<usize> = Vec::new();
            while word.len() < degree {
                let g = rng.gen_range(0..GENERATORS);
                if !word.contains(&g) {
                    word.push(g);
                }
            }
            let c = Jet::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            f.add_term(&word, c);
        }
        f
    }

    #[test]
    fn d_squared_vanishes_on_random_forms() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 0..100 {
            let f = random_form(&mut rng, n % 4, 6);
            let dd = f.d().d();
            assert!(dd.max_abs() <= 1e-12, "{dd:?}");
        }
    }

    #[test]
    fn leibniz_rule() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..40 {
            let p = rng.gen_range(0..3);
            let a = random_form(&mut rng, p, 4);
            let c = random_form(&mut rng, 2, 4);
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let lhs = a.wedge(&c).d();
            let rhs = &a.d().wedge(&c) + &a.wedge(&c.d()).scale(sign);
            assert!((&lhs - &rhs).max_abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn graded_anticommutative(seed in 0u64..10_000, p in 0usize..4, q in 0usize..4) {
            let mut rng = StdRng::seed_from_u64(seed);
            let a = random_form(&mut rng, p, 3);
            let c = random_form(&mut rng, q, 3);
            let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
            let diff = &a.wedge(&c) - &c.wedge(&a).scale(sign);
            prop_assert!(diff.max_abs() < 1e-12);
        }

        #[test]
        fn wedge_is_associative(seed in 0u64..10_000) {
            let mut rng = StdRng::seed_from_u64(seed);
            let a = random_form(&mut rng, 1, 3);
            let c = random_form(&mut rng, 2, 3);
            let e = random_form(&mut rng, 2, 3);
            let diff = &a.wedge(&c).wedge(&e) - &a.wedge(&c.wedge(&e));
            prop_assert!(diff.max_abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_curvature() {
        for l in [0.0, 1.0, 2.0, -3.0] {
            let a = th(6).tensor(Su2::basis(1)).scale(-l / 2.0);
            let f = curvature(&a).unwrap();
            let expected = (&b(&[2, 3]) + &b(&[4, 5]))
                .tensor(Su2::basis(1))
                .scale(-l / 2.0);
            assert_eq!(f, expected);
        }
    }

    #[test]
    fn curvature_degree_check() {
        let a = b(&[1, 2]).tensor(Su2::basis(1));
        assert!(matches!(
            curvature(&a),
            Err(Error::DegreeMismatch {
                expected: 1,
                found: 2
            })
        ));
    }
}

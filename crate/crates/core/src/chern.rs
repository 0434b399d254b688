//! Canonical class, second Chern class, and the numeric Riemann-Roch
//! profile of a split P1-bundle.
//!
//! For `X = P(O(A) + O(B))` over `Y` the relative tangent and Euler
//! sequences combine into
//!
//! ```text
//! c2(X) = p*c2(Y) + p*c1(Y) . c1(p*F~ (x) L) + c2(p*F~ (x) L)
//! ```
//!
//! with `c1(p*F~ (x) L) = 2L - (A+B)` and `c2(p*F~ (x) L) = (L-A)(L-B)`;
//! the last summand is killed by the Chern-Wu relation.

use crate::chow::{BundleData, ChowError, XClass};
use crate::multipoly::MultiPoly;
use crate::rational::Rational;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChernError {
    #[error("operation requires a base of dimension {expected}, got {got}")]
    WrongBaseDimension { expected: u32, got: u32 },
    #[error(transparent)]
    Chow(#[from] ChowError),
}

/// c2 pairings entering the Riemann-Roch formulas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum C2Pairings {
    /// `c2.K^2`, `c2.K.L`, `c2.L^2` on a fourfold.
    Fourfold { k2: Rational, kl: Rational, l2: Rational },
    /// `c2.K`, `c2.L` on a threefold.
    Threefold { k: Rational, l: Rational },
}

/// Finite numeric profile of a polarized bundle total space: the
/// pluridegrees `K^i . L^(n-i)`, the c2 pairings, and chi(O).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernData {
    pub n: u32,
    /// Index i holds `K^i . L^(n-i)`; exactly n+1 entries.
    pub pluridegrees: Vec<Rational>,
    pub c2: C2Pairings,
    pub chi_o: Rational,
}

impl ChernData {
    /// `K^i . L^(n-i)`.
    pub fn pluridegree(&self, i: usize) -> &Rational {
        &self.pluridegrees[i]
    }
}

/// `K_X = -2L + p*(K_base + A + B)`.
pub fn canonical_class_x(bundle: &BundleData) -> XClass {
    let l = bundle.taut();
    let adjoint = &(bundle.base().canonical() + bundle.a_class()) + bundle.b_class();
    &l.scale(&Rational::from_int(-2)) + &bundle.pullback(&adjoint)
}

/// Internal form of the c2 formula usable for both base dimensions.
fn c2_class_x(bundle: &BundleData) -> Result<XClass, ChernError> {
    let c2_base = bundle.pullback(&bundle.base().c2_class()?);
    let c1_base = bundle.pullback(&bundle.base().canonical().negate());
    let l = bundle.taut();
    let sum_ab = bundle.pullback(&(bundle.a_class() + bundle.b_class()));
    let c1_twist = &l.scale(&Rational::from_int(2)) - &sum_ab;
    let a = bundle.pullback(bundle.a_class());
    let b = bundle.pullback(bundle.b_class());
    let c2_twist = &(&l - &a) * &(&l - &b);
    let raw = &(&c2_base + &(&c1_base * &c1_twist)) + &c2_twist;
    Ok(bundle.normalize(&raw))
}

/// Second Chern class of the fourfold total space, in Chern-Wu normal form.
/// The base must be a threefold.
pub fn second_chern_x(bundle: &BundleData) -> Result<XClass, ChernError> {
    if bundle.base().dim() != 3 {
        return Err(ChernError::WrongBaseDimension {
            expected: 3,
            got: bundle.base().dim(),
        });
    }
    c2_class_x(bundle)
}

/// Pluridegrees, c2 pairings and chi(O) of the bundle total space.
/// chi(O_X) = chi(O_base): pushing the structure sheaf down a P1-bundle
/// changes nothing.
pub fn chern_data(bundle: &BundleData) -> Result<ChernData, ChernError> {
    let n = bundle.total_dim();
    let k = canonical_class_x(bundle);
    let l = bundle.taut();
    let mut pluridegrees = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let class = &k.pow(i) * &l.pow(n - i);
        pluridegrees.push(bundle.top_eval(&class)?);
    }
    let c2 = c2_class_x(bundle)?;
    let c2 = match n {
        4 => C2Pairings::Fourfold {
            k2: bundle.top_eval(&(&c2 * &k.pow(2)))?,
            kl: bundle.top_eval(&(&c2 * &(&k * &l)))?,
            l2: bundle.top_eval(&(&c2 * &l.pow(2)))?,
        },
        3 => C2Pairings::Threefold {
            k: bundle.top_eval(&(&c2 * &k))?,
            l: bundle.top_eval(&(&c2 * &l))?,
        },
        d => {
            return Err(ChernError::WrongBaseDimension { expected: 3, got: d - 1 });
        }
    };
    Ok(ChernData {
        n,
        pluridegrees,
        c2,
        chi_o: bundle.base().chi_o().clone(),
    })
}

/// Whether `K_X + k L` is a pure pullback, and the base class it pulls back
/// when it is.
pub fn adjunction_scroll_check(bundle: &BundleData, k: u32) -> (bool, Option<MultiPoly>) {
    let class = &canonical_class_x(bundle) + &bundle.taut().scale(&Rational::from_int(k as i64));
    let normal = bundle.normalize(&class);
    match bundle.as_base_class(&normal) {
        Some(witness) => (true, Some(witness)),
        None => (false, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::BaseRing;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn paper_bundle() -> BundleData {
        let base = BaseRing::blowup_p3_point();
        let big_h = &base.generator(0).scale(&q(3)) - &base.generator(1);
        BundleData::new(base, big_h.clone(), big_h).unwrap()
    }

    fn v_bundle() -> BundleData {
        let base = BaseRing::p1xp1();
        let h_s = &base.generator(0).scale(&q(3)) + &base.generator(1).scale(&q(3));
        BundleData::new(base, h_s.clone(), h_s).unwrap()
    }

    #[test]
    fn canonical_class_of_paper_bundle() {
        // K_X = -2(L - h)
        let bundle = paper_bundle();
        let k = canonical_class_x(&bundle);
        let h = bundle.pullback(&bundle.base().generator(0));
        let expected = (&bundle.taut() - &h).scale(&q(-2));
        assert_eq!(k.poly, expected.poly);
    }

    #[test]
    fn fano_symmetric_case_over_p3() {
        // A = B = O(2): K + A + B = -4h + 4h = 0, so K_X = -2L
        let base = BaseRing::p3();
        let two_h = base.generator(0).scale(&q(2));
        let bundle = BundleData::new(base, two_h.clone(), two_h).unwrap();
        let k = canonical_class_x(&bundle);
        let expected = bundle.taut().scale(&q(-2));
        assert_eq!(k.poly, expected.poly);
    }

    #[test]
    fn pluridegrees_of_paper_fourfold() {
        let data = chern_data(&paper_bundle()).unwrap();
        assert_eq!(data.n, 4);
        assert_eq!(
            data.pluridegrees,
            vec![q(104), q(-154), q(224), q(-320), q(448)]
        );
        assert_eq!(data.chi_o, q(1));
    }

    #[test]
    fn c2_pairings_of_paper_fourfold() {
        let data = chern_data(&paper_bundle()).unwrap();
        let C2Pairings::Fourfold { k2, kl, l2 } = &data.c2 else {
            panic!("fourfold pairings expected");
        };
        assert_eq!(k2, &q(208));
        assert_eq!(kl, &q(-148));
        assert_eq!(l2, &q(104));
        // the 2c2 - K^2 combinations
        assert_eq!(q(2) * k2 - q(448), q(-32));
        assert_eq!(q(2) * kl - q(-320), q(24));
        assert_eq!(q(2) * l2 - q(224), q(-16));
    }

    #[test]
    fn second_chern_matches_displayed_pairings() {
        // direct XClass route for (2c2 - K^2) . L^2 = -16
        let bundle = paper_bundle();
        let c2 = second_chern_x(&bundle).unwrap();
        let k = canonical_class_x(&bundle);
        let l = bundle.taut();
        let two_c2_minus_k2 = &c2.scale(&q(2)) - &k.pow(2);
        assert_eq!(
            bundle.top_eval(&(&two_c2_minus_k2 * &l.pow(2))).unwrap(),
            q(-16)
        );
        assert_eq!(bundle.top_eval(&(&c2 * &k.pow(2))).unwrap(), q(208));
    }

    #[test]
    fn second_chern_agrees_with_display_up_to_numerical_triviality() {
        // the displayed representative L^2 + 2 L.(h-e) - 3(3h^2 + e^2) and the
        // computed class pair identically against every degree-2 monomial
        let bundle = paper_bundle();
        let c2 = c2_class_x(&bundle).unwrap();
        let l = bundle.taut();
        let h = bundle.pullback(&bundle.base().generator(0));
        let e = bundle.pullback(&bundle.base().generator(1));
        let displayed = &(&l.pow(2) + &(&l * &(&h - &e)).scale(&q(2)))
            - &(&h.pow(2).scale(&q(3)) + &e.pow(2)).scale(&q(3));
        let diff = &c2 - &displayed;
        for probe in [
            l.pow(2),
            &l * &h,
            &l * &e,
            h.pow(2),
            &h * &e,
            e.pow(2),
        ] {
            assert_eq!(bundle.top_eval(&(&diff * &probe)).unwrap(), q(0));
        }
    }

    #[test]
    fn second_chern_requires_threefold_base() {
        assert!(matches!(
            second_chern_x(&v_bundle()),
            Err(ChernError::WrongBaseDimension { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn restriction_threefold_profile() {
        let data = chern_data(&v_bundle()).unwrap();
        assert_eq!(data.n, 3);
        assert_eq!(data.pluridegrees, vec![q(54), q(-60), q(56), q(-48)]);
        let C2Pairings::Threefold { k, l } = &data.c2 else {
            panic!("threefold pairings expected");
        };
        assert_eq!(k, &q(-24));
        assert_eq!(l, &q(28));
        assert_eq!(data.chi_o, q(1));
    }

    #[test]
    fn chern_data_symmetric_in_a_and_b() {
        let base = BaseRing::blowup_p3_point();
        let a = &base.generator(0).scale(&q(2)) - &base.generator(1);
        let b = base.generator(0).scale(&q(4));
        let d1 = chern_data(&BundleData::new(base.clone(), a.clone(), b.clone()).unwrap()).unwrap();
        let d2 = chern_data(&BundleData::new(base, b, a).unwrap()).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn scroll_check_on_paper_bundle() {
        let bundle = paper_bundle();
        let (is_scroll, witness) = adjunction_scroll_check(&bundle, 2);
        assert!(is_scroll);
        assert_eq!(witness.unwrap().to_string(), "2*h");
        let (is_scroll_1, witness_1) = adjunction_scroll_check(&bundle, 1);
        assert!(!is_scroll_1);
        assert!(witness_1.is_none());
    }

    #[test]
    fn scroll_check_on_restriction() {
        let bundle = v_bundle();
        let (is_scroll, witness) = adjunction_scroll_check(&bundle, 2);
        assert!(is_scroll);
        assert_eq!(witness.unwrap().to_string(), "4*f1 + 4*f2");
    }

    #[test]
    fn k_fourth_expansion_identities() {
        // K^4 = 16 (L^4 - 4 L^3.h + 6 L^2.h^2 - 4 L.h^3)
        let bundle = paper_bundle();
        let l = bundle.taut();
        let h = bundle.pullback(&bundle.base().generator(0));
        let l4 = bundle.top_eval(&l.pow(4)).unwrap();
        let l3h = bundle.top_eval(&(&l.pow(3) * &h)).unwrap();
        let l2h2 = bundle.top_eval(&(&l.pow(2) * &h.pow(2))).unwrap();
        let lh3 = bundle.top_eval(&(&l * &h.pow(3))).unwrap();
        let combo = q(16) * (l4 - q(4) * l3h + q(6) * l2h2 - q(4) * lh3);
        assert_eq!(combo, q(448));
        let k = canonical_class_x(&bundle);
        assert_eq!(bundle.top_eval(&k.pow(4)).unwrap(), q(448));
    }
}

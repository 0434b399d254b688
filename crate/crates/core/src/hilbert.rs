//! Riemann-Roch evaluators producing Hilbert-curve polynomials.
//!
//! A Hilbert polynomial lives in one of two coordinate frames:
//!
//! * `xy`: `p(x, y) = chi(x K + y L)`;
//! * `canonical`: `(u, v) = (x - 1/2, y)`, centered so Serre duality acts
//!   as `(u, v) -> (-u, -v)`. In this frame every nonzero homogeneous part
//!   has degree of the same parity as the dimension.
//!
//! The first two variables are always the frame variables; any further
//! variables are free polarization parameters (e.g. `a`, `r`).

use crate::chern::{C2Pairings, ChernData};
use crate::chow::{BaseRing, ChowError, SymbolicClass};
use crate::multipoly::{MultiPoly, PolyError};
use crate::rational::Rational;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HilbertError {
    #[error("expected dimension {expected}, got {got}")]
    WrongDimension { expected: u32, got: u32 },
    #[error("projective space dimension must be >= 1, got {0}")]
    BadProjectiveDimension(u32),
    #[error("polynomial carries parameters; a numeric one is required")]
    HasParameters,
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Xy,
    Canonical,
}

impl Frame {
    pub fn var_names(self) -> [&'static str; 2] {
        match self {
            Frame::Xy => ["x", "y"],
            Frame::Canonical => ["u", "v"],
        }
    }
}

/// Bivariate Hilbert polynomial tagged with its frame and dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPoly {
    pub poly: MultiPoly,
    pub frame: Frame,
    pub n: u32,
}

impl HilbertPoly {
    /// Parameter variables beyond the two frame variables.
    pub fn params(&self) -> &[String] {
        &self.poly.vars()[2..]
    }

    /// chi(x K + y L) at a rational point, converting the frame if needed.
    pub fn eval_xy(&self, x: &Rational, y: &Rational) -> Result<Rational, HilbertError> {
        if !self.params().is_empty() {
            return Err(HilbertError::HasParameters);
        }
        let point = match self.frame {
            Frame::Xy => [x.clone(), y.clone()],
            Frame::Canonical => [x - &Rational::new(1, 2), y.clone()],
        };
        Ok(self.poly.eval_at(&point))
    }
}

fn frame_vars(frame: Frame, params: &[String]) -> Vec<String> {
    let mut vars: Vec<String> = frame.var_names().iter().map(|s| s.to_string()).collect();
    vars.extend(params.iter().cloned());
    vars
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut out = Rational::one();
    for i in 0..k {
        out = out * Rational::from_int((n - i) as i64) / Rational::from_int((i + 1) as i64);
    }
    out
}

/// Fourfold Riemann-Roch in the canonical frame, with `D = K/2 + uK + vL`:
///
/// ```text
/// chi(D) = (1/24) D^4 + (1/48) (2c2 - K^2).D^2
///        + (1/384) (K^2 - 4c2).K^2 + chi(O)
/// ```
pub fn rr_fourfold(data: &ChernData) -> Result<HilbertPoly, HilbertError> {
    if data.n != 4 {
        return Err(HilbertError::WrongDimension { expected: 4, got: data.n });
    }
    let C2Pairings::Fourfold { k2: c2k2, kl: c2kl, l2: c2l2 } = &data.c2 else {
        return Err(HilbertError::WrongDimension { expected: 4, got: data.n });
    };
    let vars = frame_vars(Frame::Canonical, &[]);
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
    // (1/24) Delta^4 through the pluridegrees
    for i in 0..=4u32 {
        let coeff = binomial(4, i) * data.pluridegree(i as usize) * Rational::new(1, 24);
        terms.push((vec![i, 4 - i], coeff));
    }
    // (1/48) (2c2 - K^2) . Delta^2
    let k4 = data.pluridegree(4);
    let k3l = data.pluridegree(3);
    let k2l2 = data.pluridegree(2);
    let t_k2 = Rational::from_int(2) * c2k2 - k4;
    let t_kl = Rational::from_int(2) * c2kl - k3l;
    let t_l2 = Rational::from_int(2) * c2l2 - k2l2;
    terms.push((vec![2, 0], t_k2.clone() * Rational::new(1, 48)));
    terms.push((vec![1, 1], t_kl * Rational::new(2, 48)));
    terms.push((vec![0, 2], t_l2 * Rational::new(1, 48)));
    // degree-0 term: (1/384) (K^2 - 4c2).K^2 + chi(O), the pairing being
    // the number K^4 - 4 c2.K^2
    let konst =
        (k4 - &(Rational::from_int(4) * c2k2)) * Rational::new(1, 384) + &data.chi_o;
    terms.push((vec![0, 0], konst));
    Ok(HilbertPoly {
        poly: MultiPoly::from_terms(&var_refs, terms)?,
        frame: Frame::Canonical,
        n: 4,
    })
}

/// Threefold Riemann-Roch in the canonical frame for a polarized base ring
/// `(base, M)`, with `D' = K/2 + uK + vM`:
///
/// ```text
/// chi(D') = (1/6) D'^3 + (1/24) (2c2 - K^2).D'
/// ```
///
/// `M` may carry symbolic coefficients; the result is then a polynomial in
/// `(u, v, params...)`.
pub fn rr_threefold(base: &BaseRing, m: &SymbolicClass) -> Result<HilbertPoly, HilbertError> {
    if base.dim() != 3 {
        return Err(HilbertError::WrongDimension { expected: 3, got: base.dim() });
    }
    let k = SymbolicClass::from_class(base, base.canonical())?;
    let k_lift = lift_params(&k, &m.params);
    let k3 = base.intersect_symbolic(&[&k_lift, &k_lift, &k_lift])?;
    let k2m = base.intersect_symbolic(&[&k_lift, &k_lift, m])?;
    let km2 = base.intersect_symbolic(&[&k_lift, m, m])?;
    let m3 = base.intersect_symbolic(&[m, m, m])?;
    let c2k = base.c2_dot(&k_lift)?;
    let c2m = base.c2_dot(m)?;
    let two = Rational::from_int(2);
    let lin_u = &c2k.scale(&two) - &k3; // (2c2 - K^2).K
    let lin_v = &c2m.scale(&two) - &k2m; // (2c2 - K^2).M
    let vars = frame_vars(Frame::Canonical, &m.params);
    let mono = |i: u32, j: u32, p: &MultiPoly, scale: Rational| -> MultiPoly {
        let mut exps = vec![i, j];
        exps.resize(vars.len(), 0);
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let stub = MultiPoly::from_terms(&var_refs, [(exps, scale)]).unwrap();
        &stub * &p.prepend_vars(&vars[..2])
    };
    let sixth = Rational::new(1, 6);
    let mut out = mono(3, 0, &k3, sixth.clone());
    out = &out + &mono(2, 1, &k2m, Rational::new(3, 6));
    out = &out + &mono(1, 2, &km2, Rational::new(3, 6));
    out = &out + &mono(0, 3, &m3, sixth);
    out = &out + &mono(1, 0, &lin_u, Rational::new(1, 24));
    out = &out + &mono(0, 1, &lin_v, Rational::new(1, 24));
    Ok(HilbertPoly { poly: out, frame: Frame::Canonical, n: 3 })
}

/// Threefold Riemann-Roch straight from a numeric profile (used for bundle
/// total spaces, where `M = L`).
pub fn rr_threefold_from_data(data: &ChernData) -> Result<HilbertPoly, HilbertError> {
    if data.n != 3 {
        return Err(HilbertError::WrongDimension { expected: 3, got: data.n });
    }
    let C2Pairings::Threefold { k: c2k, l: c2l } = &data.c2 else {
        return Err(HilbertError::WrongDimension { expected: 3, got: data.n });
    };
    let vars = frame_vars(Frame::Canonical, &[]);
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
    for i in 0..=3u32 {
        let coeff = binomial(3, i) * data.pluridegree(i as usize) * Rational::new(1, 6);
        terms.push((vec![i, 3 - i], coeff));
    }
    let k3 = data.pluridegree(3);
    let k2l = data.pluridegree(2);
    let lin_u = (Rational::from_int(2) * c2k - k3) * Rational::new(1, 24);
    let lin_v = (Rational::from_int(2) * c2l - k2l) * Rational::new(1, 24);
    terms.push((vec![1, 0], lin_u));
    terms.push((vec![0, 1], lin_v));
    Ok(HilbertPoly {
        poly: MultiPoly::from_terms(&var_refs, terms)?,
        frame: Frame::Canonical,
        n: 3,
    })
}

/// Surface Riemann-Roch in the canonical frame:
/// `(1/2) (K^2 u^2 + 2 K.L uv + L^2 v^2 + (2 chi(O) - K^2/4))`.
pub fn rr_surface(k2: &Rational, kl: &Rational, l2: &Rational, chi_o: &Rational) -> HilbertPoly {
    let half = Rational::new(1, 2);
    let konst = (Rational::from_int(2) * chi_o - &(k2 * &Rational::new(1, 4))) * &half;
    let poly = MultiPoly::from_terms(
        &["u", "v"],
        [
            (vec![2, 0], k2 * &half),
            (vec![1, 1], kl.clone()),
            (vec![0, 2], l2 * &half),
            (vec![0, 0], konst),
        ],
    )
    .unwrap();
    HilbertPoly { poly, frame: Frame::Canonical, n: 2 }
}

fn pn_hilbert_impl(n: u32, r: MultiPoly) -> Result<HilbertPoly, HilbertError> {
    if n < 1 {
        return Err(HilbertError::BadProjectiveDimension(n));
    }
    let params: Vec<String> = r.vars().to_vec();
    let vars = frame_vars(Frame::Xy, &params);
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let x = MultiPoly::var(&var_refs, "x")?;
    let r_lift = r.prepend_vars(&vars[..2]);
    let mut factorial = Rational::one();
    for i in 1..=n {
        factorial = factorial * Rational::from_int(i as i64);
    }
    let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
    let mut out = MultiPoly::constant(&var_refs, sign / factorial);
    let y = MultiPoly::var(&var_refs, "y")?;
    for i in 1..=n {
        let factor = &(&x.scale(&Rational::from_int((n + 1) as i64)) - &(&r_lift * &y))
            - &MultiPoly::constant(&var_refs, Rational::from_int(i as i64));
        out = &out * &factor;
    }
    Ok(HilbertPoly { poly: out, frame: Frame::Xy, n })
}

/// Hilbert polynomial of projective n-space with polarization degree `r`:
/// `((-1)^n / n!) prod_{i=1..n} ((n+1)x - ry - i)`, in the xy frame.
pub fn pn_hilbert(n: u32, r: &Rational) -> Result<HilbertPoly, HilbertError> {
    pn_hilbert_impl(n, MultiPoly::constant_owned(Vec::new(), r.clone()))
}

/// Same family with the polarization degree left symbolic.
pub fn pn_hilbert_param(n: u32, param: &str) -> Result<HilbertPoly, HilbertError> {
    pn_hilbert_impl(n, MultiPoly::var(&[param], param)?)
}

/// Substitutes between frames; a round trip is the identity.
pub fn change_frame(p: &HilbertPoly, target: Frame) -> HilbertPoly {
    if p.frame == target {
        return p.clone();
    }
    let params: Vec<String> = p.params().to_vec();
    let vars = frame_vars(target, &params);
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let half = Rational::new(1, 2);
    // x = u + 1/2 in both directions: going to canonical substitutes
    // x -> u + 1/2; going back substitutes u -> x - 1/2.
    let shift = match target {
        Frame::Canonical => half,
        Frame::Xy => -half,
    };
    let mut images = Vec::with_capacity(p.poly.vars().len());
    let first = &MultiPoly::var_by_index(vars.clone(), 0)
        + &MultiPoly::constant(&var_refs, shift);
    images.push(first);
    for i in 1..p.poly.vars().len() {
        images.push(MultiPoly::var_by_index(vars.clone(), i));
    }
    HilbertPoly {
        poly: p.poly.substitute_affine(&images).expect("affine frame shift"),
        frame: target,
        n: p.n,
    }
}

/// Outcome of the Serre-symmetry and parity checks.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    /// `p(x,y) == (-1)^n p(1-x,-y)`.
    pub serre_ok: bool,
    /// Canonical-frame homogeneous parts all have degree = n (mod 2).
    pub parity_ok: bool,
    /// Serialized wrong-parity part, empty when parity holds.
    pub offending: String,
}

impl SymmetryReport {
    pub fn pass(&self) -> bool {
        self.serre_ok && self.parity_ok
    }
}

/// Verifies the Serre involution identity and the canonical parity
/// constraint, reporting the offending terms on failure.
pub fn symmetry_parity_check(p: &HilbertPoly) -> SymmetryReport {
    let canonical = change_frame(p, Frame::Canonical);
    let nvars = canonical.poly.vars().len();
    let vars = canonical.poly.vars().to_vec();
    // Serre involution in the canonical frame: (u, v) -> (-u, -v)
    let mut images = Vec::with_capacity(nvars);
    for i in 0..nvars {
        let var = MultiPoly::var_by_index(vars.clone(), i);
        images.push(if i < 2 { var.negate() } else { var });
    }
    let reflected = canonical
        .poly
        .substitute_affine(&images)
        .expect("affine reflection");
    let reflected = if p.n % 2 == 1 { reflected.negate() } else { reflected };
    let serre_ok = reflected == canonical.poly;
    let mut offending = MultiPoly::zero_owned(vars);
    let max_deg = canonical.poly.total_degree();
    for d in 0..=max_deg {
        if d % 2 != p.n % 2 {
            let part = canonical.poly.prefix_degree_part(2, d);
            offending = &offending + &part;
        }
    }
    let parity_ok = offending.is_zero();
    SymmetryReport {
        serre_ok,
        parity_ok,
        offending: if parity_ok { String::new() } else { offending.to_string() },
    }
}

fn lift_params(class: &SymbolicClass, params: &[String]) -> SymbolicClass {
    SymbolicClass {
        params: params.to_vec(),
        coeffs: class
            .coeffs
            .iter()
            .map(|c| {
                // numeric coefficients live over the empty variable list
                c.append_vars(params)
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::chern_data;
    use crate::chow::{BaseRing, BundleData};

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn qq(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn paper_data() -> ChernData {
        let base = BaseRing::blowup_p3_point();
        let big_h = &base.generator(0).scale(&q(3)) - &base.generator(1);
        chern_data(&BundleData::new(base, big_h.clone(), big_h).unwrap()).unwrap()
    }

    fn eq4_product() -> MultiPoly {
        let uv = ["u", "v"];
        let line1 = MultiPoly::from_terms(&uv, [(vec![1, 0], q(2)), (vec![0, 1], q(-1))]).unwrap();
        let line2 = MultiPoly::from_terms(&uv, [(vec![1, 0], q(1)), (vec![0, 1], q(-1))]).unwrap();
        let conic = MultiPoly::from_terms(
            &uv,
            [
                (vec![2, 0], q(28)),
                (vec![1, 1], q(-38)),
                (vec![0, 2], q(13)),
                (vec![0, 0], q(-1)),
            ],
        )
        .unwrap();
        (&(&line1 * &line2) * &conic).scale(&qq(1, 3))
    }

    #[test]
    fn fourfold_output_is_the_factored_quartic() {
        let p = rr_fourfold(&paper_data()).unwrap();
        assert_eq!(p.poly, eq4_product());
        assert!(p.poly.homogeneous_part(0).is_zero());
        assert!(p.poly.homogeneous_part(1).is_zero());
        assert!(p.poly.homogeneous_part(3).is_zero());
        let deg2 = p.poly.homogeneous_part(2);
        // -(1/3)(2u - v)(u - v)
        let uv = ["u", "v"];
        let expected = MultiPoly::from_terms(
            &uv,
            [(vec![2, 0], qq(-2, 3)), (vec![1, 1], q(1)), (vec![0, 2], qq(-1, 3))],
        )
        .unwrap();
        assert_eq!(deg2, expected);
    }

    #[test]
    fn fourfold_anchor_values() {
        let p = rr_fourfold(&paper_data()).unwrap();
        assert_eq!(p.eval_xy(&q(0), &q(0)).unwrap(), q(1));
        assert_eq!(p.eval_xy(&q(0), &q(1)).unwrap(), q(38));
        assert_eq!(p.eval_xy(&q(1), &q(2)).unwrap(), q(10));
    }

    #[test]
    fn threefold_symbolic_family_over_blowup() {
        // p_(Y, ah - re), canonical: (1/6)[-56u^3 + 12(4a-r)u^2v
        //   - 6(2a^2-r^2)uv^2 + (a^3-r^3)v^3 + 2u - (a-r)v]
        let base = BaseRing::blowup_p3_point();
        let params = vec!["a".to_string(), "r".to_string()];
        let a = MultiPoly::var(&["a", "r"], "a").unwrap();
        let neg_r = MultiPoly::var(&["a", "r"], "r").unwrap().negate();
        let m = SymbolicClass::parametric(&base, params, vec![a, neg_r]).unwrap();
        let p = rr_threefold(&base, &m).unwrap();
        let vars = ["u", "v", "a", "r"];
        let expected = MultiPoly::from_terms(
            &vars,
            [
                (vec![3, 0, 0, 0], qq(-56, 6)),
                (vec![2, 1, 1, 0], q(8)),
                (vec![2, 1, 0, 1], q(-2)),
                (vec![1, 2, 2, 0], q(-2)),
                (vec![1, 2, 0, 2], q(1)),
                (vec![0, 3, 3, 0], qq(1, 6)),
                (vec![0, 3, 0, 3], qq(-1, 6)),
                (vec![1, 0, 0, 0], qq(2, 6)),
                (vec![0, 1, 1, 0], qq(-1, 6)),
                (vec![0, 1, 0, 1], qq(1, 6)),
            ],
        )
        .unwrap();
        assert_eq!(p.poly, expected);
    }

    #[test]
    fn threefold_euler_characteristic_of_average_polarization() {
        // chi(H) = 19 on the blow-up
        let base = BaseRing::blowup_p3_point();
        let m_poly = &base.generator(0).scale(&q(3)) - &base.generator(1);
        let m = SymbolicClass::from_class(&base, &m_poly).unwrap();
        let p = rr_threefold(&base, &m).unwrap();
        assert_eq!(p.eval_xy(&q(0), &q(1)).unwrap(), q(19));
    }

    #[test]
    fn surface_formula() {
        let p = rr_surface(&q(9), &q(-3), &q(1), &q(1));
        let expected = MultiPoly::from_terms(
            &["u", "v"],
            [
                (vec![2, 0], qq(9, 2)),
                (vec![1, 1], q(-3)),
                (vec![0, 2], qq(1, 2)),
                (vec![0, 0], qq(-1, 8)),
            ],
        )
        .unwrap();
        assert_eq!(p.poly, expected);
        // chi(O_P2(1)) = 3
        assert_eq!(p.eval_xy(&q(0), &q(1)).unwrap(), q(3));
        // K trivial: only even parts
        let p0 = rr_surface(&q(0), &q(0), &q(5), &q(2));
        assert!(symmetry_parity_check(&p0).pass());
    }

    #[test]
    fn projective_space_closed_form() {
        let p = pn_hilbert(3, &q(1)).unwrap();
        assert_eq!(p.eval_xy(&q(0), &q(1)).unwrap(), q(4));
        let p1 = pn_hilbert(1, &q(1)).unwrap();
        // -(2x - y - 1)
        let expected = MultiPoly::from_terms(
            &["x", "y"],
            [(vec![1, 0], q(-2)), (vec![0, 1], q(1)), (vec![0, 0], q(1))],
        )
        .unwrap();
        assert_eq!(p1.poly, expected);
        assert_eq!(p1.eval_xy(&q(0), &q(0)).unwrap(), q(1));
        assert!(pn_hilbert(0, &q(1)).is_err());
    }

    #[test]
    fn pn_family_matches_threefold_route() {
        // pn_hilbert(3, a) in canonical frame == rr_threefold(P^3, a.h)
        let family = change_frame(&pn_hilbert_param(3, "a").unwrap(), Frame::Canonical);
        let base = BaseRing::p3();
        let a = MultiPoly::var(&["a"], "a").unwrap();
        let m = SymbolicClass::parametric(&base, vec!["a".into()], vec![a]).unwrap();
        let via_rr = rr_threefold(&base, &m).unwrap();
        assert_eq!(family.poly, via_rr.poly);
    }

    #[test]
    fn frame_round_trip() {
        let p = rr_fourfold(&paper_data()).unwrap();
        let xy = change_frame(&p, Frame::Xy);
        assert_eq!(xy.eval_xy(&q(0), &q(1)).unwrap(), q(38));
        let back = change_frame(&xy, Frame::Canonical);
        assert_eq!(back.poly, p.poly);
    }

    #[test]
    fn symmetry_check_passes_and_fails_correctly() {
        let p = rr_fourfold(&paper_data()).unwrap();
        let report = symmetry_parity_check(&p);
        assert!(report.serre_ok && report.parity_ok);
        // odd-dimensional case carries the sign -1
        let base = BaseRing::blowup_p3_point();
        let m_poly = &base.generator(0).scale(&q(3)) - &base.generator(1);
        let m = SymbolicClass::from_class(&base, &m_poly).unwrap();
        let p3 = rr_threefold(&base, &m).unwrap();
        assert!(symmetry_parity_check(&p3).pass());
        // inject a wrong-parity term
        let spoiled = HilbertPoly {
            poly: &p.poly
                + &MultiPoly::from_terms(&["u", "v"], [(vec![3, 0], q(1))]).unwrap(),
            frame: Frame::Canonical,
            n: 4,
        };
        let bad = symmetry_parity_check(&spoiled);
        assert!(!bad.serre_ok);
        assert!(!bad.parity_ok);
        assert_eq!(bad.offending, "u^3");
    }
}

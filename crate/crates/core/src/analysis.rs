//! Factorization and matching analysis of canonical Hilbert polynomials:
//! rational linear factors, proportionality against the projective-space and
//! two-generator threefold families, and the conic/Hodge obstruction for
//! residual quadrics.

use crate::chow::{BaseRing, ChowError, SymbolicClass};
use crate::hilbert::{change_frame, pn_hilbert_param, rr_threefold, Frame, HilbertError};
use crate::linalg::{LinalgError, LinearSystem};
use crate::multipoly::MultiPoly;
use crate::rational::Rational;
use num::bigint::BigInt;
use num::{Integer, Signed, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("expected a polynomial in exactly two variables, got {0}")]
    WrongVariableCount(usize),
    #[error("expected degree {expected}, got {got}")]
    WrongDegree { expected: u32, got: u32 },
    #[error("quadratic part is zero")]
    ZeroQuadraticPart,
    #[error("matching requires a threefold base with two generators")]
    UnsupportedBase,
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

// ---------------------------------------------------------------------------
// rational roots

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    loop {
        let dd = &d * &d;
        if dd > n {
            break;
        }
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// All rational roots of a univariate polynomial given by ascending
/// coefficients, found by the rational-root theorem on the primitive
/// integer form.
pub fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return vec![];
    }
    let mut roots = Vec::new();
    // factor out z^k
    let mut low = 0;
    while coeffs[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(Rational::zero());
        coeffs.drain(..low);
    }
    if coeffs.len() <= 1 {
        return roots;
    }
    // clear denominators
    let mut lcm = BigInt::from(1);
    for c in &coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| {
            let scaled = c * &Rational::from_bigint(lcm.clone());
            scaled.numer().clone()
        })
        .collect();
    let lead = ints.last().unwrap();
    let konst = ints.first().unwrap();
    let eval = |q: &Rational| -> bool {
        let mut acc = Rational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc.is_zero()
    };
    for p in divisors(konst) {
        for qd in divisors(lead) {
            if p.gcd(&qd) != BigInt::from(1) {
                continue;
            }
            for sign in [1i64, -1] {
                let cand = Rational::from_big(&p * BigInt::from(sign), qd.clone());
                if eval(&cand) && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

// ---------------------------------------------------------------------------
// linear factor extraction

#[derive(Clone, Debug)]
pub struct LinearFactorization {
    /// Leading rational scalar: `input = constant * prod(factors) * residual`.
    pub constant: Rational,
    /// Primitive linear factors with multiplicities, in extraction order.
    pub factors: Vec<(MultiPoly, u32)>,
    /// Primitive residual with no rational linear factor.
    pub residual: MultiPoly,
}

/// Primitive directions `alpha*u + beta*v` dividing the top homogeneous form,
/// via rational roots of its dehomogenization.
fn rational_directions(top: &MultiPoly) -> Vec<MultiPoly> {
    let d = top.total_degree();
    let vars: Vec<&str> = top.vars().iter().map(|s| s.as_str()).collect();
    let mut coeffs = vec![Rational::zero(); d as usize + 1];
    for (exps, c) in top.terms() {
        coeffs[exps[0] as usize] = c.clone();
    }
    let dehom_degree = coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .unwrap_or(0) as u32;
    let mut out = Vec::new();
    for root in rational_roots(&coeffs) {
        // root p/q gives the direction q*u - p*v
        let q = Rational::from_bigint(root.denom().clone());
        let p = Rational::from_bigint(root.numer().clone());
        out.push(
            MultiPoly::from_terms(&vars, [(vec![1, 0], q), (vec![0, 1], -p)]).unwrap(),
        );
    }
    if dehom_degree < d {
        // v divides the top form
        out.push(MultiPoly::from_terms(&vars, [(vec![0, 1], Rational::one())]).unwrap());
    }
    out
}

/// Constant offsets gamma such that `direction + gamma` could divide `p`:
/// rewrite `p` in coordinates `(w, s)` with `s` the direction, and read off
/// the common roots forced on the lowest `w`-coefficient.
fn gamma_candidates(p: &MultiPoly, direction: &MultiPoly) -> Vec<Rational> {
    let alpha = direction.coefficient(&[1, 0]);
    let beta = direction.coefficient(&[0, 1]);
    let ws = ["w", "s"];
    let (img_u, img_v) = if !alpha.is_zero() {
        // u = (s - beta w)/alpha, v = w
        let img_u = MultiPoly::from_terms(
            &ws,
            [
                (vec![0, 1], alpha.recip()),
                (vec![1, 0], -(&beta / &alpha)),
            ],
        )
        .unwrap();
        let img_v = MultiPoly::var(&ws, "w").unwrap();
        (img_u, img_v)
    } else {
        // direction is beta * v: v = s/beta, u = w
        let img_u = MultiPoly::var(&ws, "w").unwrap();
        let img_v =
            MultiPoly::from_terms(&ws, [(vec![0, 1], beta.recip())]).unwrap();
        (img_u, img_v)
    };
    let rewritten = p
        .substitute_affine(&[img_u, img_v])
        .expect("affine change of coordinates");
    let groups = rewritten.group_by_prefix(1);
    let Some((_, lowest)) = groups.iter().next() else {
        return vec![];
    };
    let mut coeffs = vec![Rational::zero(); lowest.total_degree() as usize + 1];
    for (exps, c) in lowest.terms() {
        coeffs[exps[0] as usize] = c.clone();
    }
    rational_roots(&coeffs).into_iter().map(|r| -r).collect()
}

/// Finds all rational linear factors `alpha*u + beta*v + gamma` of a
/// bivariate polynomial by factoring the top form into rational directions
/// and trial-dividing each completed line.
pub fn extract_linear_factors(p: &MultiPoly) -> Result<LinearFactorization, AnalysisError> {
    if p.is_zero() {
        return Err(AnalysisError::ZeroPolynomial);
    }
    if p.vars().len() != 2 {
        return Err(AnalysisError::WrongVariableCount(p.vars().len()));
    }
    let vars: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
    let mut work = p.clone();
    let mut factors: Vec<(MultiPoly, u32)> = Vec::new();
    'outer: while work.total_degree() >= 1 {
        let top = work.homogeneous_part(work.total_degree());
        for direction in rational_directions(&top) {
            for gamma in gamma_candidates(&work, &direction) {
                let line = &direction + &MultiPoly::constant(&vars, gamma);
                let (_, line) = line.primitive_normalized();
                if let Ok(quotient) = work.divide_exact(&line) {
                    match factors.iter_mut().find(|(f, _)| *f == line) {
                        Some((_, m)) => *m += 1,
                        None => factors.push((line, 1)),
                    }
                    work = quotient;
                    continue 'outer;
                }
            }
        }
        break;
    }
    let (constant, residual) = work.primitive_normalized();
    Ok(LinearFactorization { constant, factors, residual })
}

// ---------------------------------------------------------------------------
// proportionality matching

/// Structured reason a proportionality match failed.
#[derive(Clone, Debug, Serialize)]
pub enum MatchFailure {
    /// Every member of the candidate family has zero even-degree part
    /// (degrees 2 and 0); the target does not.
    EvenPartNonzero { part: String },
    /// A column with constant family coefficient disagrees with the pinned
    /// proportionality scalar.
    PinColumnMismatch {
        column: String,
        family: Rational,
        target: Rational,
    },
    /// No column determines the proportionality scalar.
    NoPinColumn,
    /// The linear equations for the parameters have no solution.
    ParameterSystemInconsistent,
    /// The linear equations leave parameters undetermined.
    ParameterSystemUnderdetermined { free: Vec<String> },
    /// Verification columns fail after substituting the solved parameters.
    VerificationFailed {
        columns: Vec<(String, Rational, Rational)>,
    },
}

impl fmt::Display for MatchFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchFailure::EvenPartNonzero { part } => write!(
                f,
                "family members have zero degree-2 part and zero constant; target has {part}"
            ),
            MatchFailure::PinColumnMismatch { column, family, target } => write!(
                f,
                "column {column}: family gives {family}, target needs {target}"
            ),
            MatchFailure::NoPinColumn => {
                write!(f, "no column pins the proportionality scalar")
            }
            MatchFailure::ParameterSystemInconsistent => {
                write!(f, "parameter equations are inconsistent")
            }
            MatchFailure::ParameterSystemUnderdetermined { free } => {
                write!(f, "parameter equations leave {} free", free.join(", "))
            }
            MatchFailure::VerificationFailed { columns } => {
                let parts: Vec<String> = columns
                    .iter()
                    .map(|(c, fam, tgt)| format!("{c} (family {fam}, target {tgt})"))
                    .collect();
                write!(f, "verification failed at {}", parts.join("; "))
            }
        }
    }
}

/// Outcome of a proportionality match: solved parameters (including the
/// scalar `lambda`) on success, a structured reason otherwise. Positivity of
/// solved polarization parameters is reported in `notes`, never enforced.
#[derive(Clone, Debug, Serialize)]
pub struct MatchResult {
    pub matched: bool,
    pub parameters: Vec<(String, Rational)>,
    pub reason: Option<MatchFailure>,
    pub notes: Vec<String>,
}

impl MatchResult {
    fn failure(reason: MatchFailure) -> Self {
        MatchResult { matched: false, parameters: vec![], reason: Some(reason), notes: vec![] }
    }
}

fn column_name(vars: &[String], exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, e) in vars.iter().zip(exps) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".to_owned()
    } else {
        parts.join("*")
    }
}

/// Decides whether `target = lambda * family(params)` for some rational
/// `lambda != 0` and rational parameter values.
///
/// Columns (coefficients of the `(u, v)` monomials) are classified by their
/// parameter degree: constant columns pin and cross-check `lambda`, linear
/// columns build an exact linear system for the parameters, and all other
/// columns are verified by substitution.
fn match_family(target: &MultiPoly, family: &MultiPoly) -> Result<MatchResult, AnalysisError> {
    if target.vars().len() != 2 {
        return Err(AnalysisError::WrongVariableCount(target.vars().len()));
    }
    if target.total_degree() != 3 {
        return Err(AnalysisError::WrongDegree { expected: 3, got: target.total_degree() });
    }
    let params: Vec<String> = family.vars()[2..].to_vec();
    let fam_cols = family.group_by_prefix(2);

    // family members are odd; a target with even-degree terms cannot match
    let even_part = &target.homogeneous_part(0) + &target.homogeneous_part(2);
    if !even_part.is_zero() {
        return Ok(MatchResult::failure(MatchFailure::EvenPartNonzero {
            part: even_part.to_string(),
        }));
    }

    let col_order: [[u32; 2]; 6] = [[3, 0], [2, 1], [1, 2], [0, 3], [1, 0], [0, 1]];
    let zero_poly = MultiPoly::zero_owned(params.clone());
    let col = |exps: &[u32; 2]| -> &MultiPoly {
        fam_cols.get(&exps.to_vec()).unwrap_or(&zero_poly)
    };
    let tgt = |exps: &[u32; 2]| -> Rational { target.coefficient(exps) };

    // pin lambda on the first constant column where both sides are nonzero
    let constant_cols: Vec<&[u32; 2]> = col_order
        .iter()
        .filter(|e| col(e).total_degree() == 0)
        .collect();
    let mut lambda: Option<Rational> = None;
    let mut pinned_col: Option<[u32; 2]> = None;
    for exps in &constant_cols {
        let fam_c = col(exps).coefficient(&vec![0; params.len()]);
        let tgt_c = tgt(exps);
        match (fam_c.is_zero(), tgt_c.is_zero()) {
            (false, false) => {
                lambda = Some(&tgt_c / &fam_c);
                pinned_col = Some(**exps);
                break;
            }
            (true, true) => continue,
            _ => {
                return Ok(MatchResult::failure(MatchFailure::PinColumnMismatch {
                    column: column_name(target.vars(), &exps[..]),
                    family: fam_c,
                    target: tgt_c,
                }));
            }
        }
    }
    let Some(lambda) = lambda else {
        return Ok(MatchResult::failure(MatchFailure::NoPinColumn));
    };

    // a minimal determining subset of the linear columns solves for the
    // parameters; every other column is verified by substitution afterwards
    let mut sys = LinearSystem::new(params.len());
    let mut solve_cols: Vec<[u32; 2]> = Vec::new();
    for exps in &col_order {
        if Some(*exps) == pinned_col || sys.rank() == params.len() {
            continue;
        }
        let c = col(exps);
        if c.total_degree() == 1 {
            let (coeffs, konst) = c.affine_row().expect("linear column");
            let scaled: Vec<Rational> = coeffs.iter().map(|x| x * &lambda).collect();
            let mut trial = sys.clone();
            trial.push(scaled, tgt(exps) - &(konst * &lambda));
            if trial.rank() > sys.rank() {
                sys = trial;
                solve_cols.push(*exps);
            }
        }
    }
    if sys.rank() < params.len() {
        let free = (0..params.len())
            .filter(|&i| {
                // a parameter never touched by any solving equation stays free
                sys.rows.iter().all(|row| row[i].is_zero())
            })
            .map(|i| params[i].clone())
            .collect();
        return Ok(MatchResult::failure(
            MatchFailure::ParameterSystemUnderdetermined { free },
        ));
    }
    let solution = match sys.solve_unique() {
        Ok(s) => s,
        Err(_) => {
            return Ok(MatchResult::failure(MatchFailure::ParameterSystemInconsistent));
        }
    };

    // verify every remaining column by substitution
    let mut failures = Vec::new();
    for exps in &col_order {
        if Some(*exps) == pinned_col || solve_cols.contains(exps) {
            continue;
        }
        let family_value = col(exps).eval_at(&solution) * &lambda;
        let target_value = tgt(exps);
        if family_value != target_value {
            failures.push((
                column_name(target.vars(), &exps[..]),
                family_value,
                target_value,
            ));
        }
    }
    if !failures.is_empty() {
        return Ok(MatchResult::failure(MatchFailure::VerificationFailed {
            columns: failures,
        }));
    }

    let mut parameters = vec![("lambda".to_string(), lambda)];
    parameters.extend(params.iter().cloned().zip(solution.iter().cloned()));
    let notes = params
        .iter()
        .zip(&solution)
        .filter(|(_, v)| !v.is_positive())
        .map(|(p, v)| format!("solution has {p} = {v}, not positive; ampleness is not guaranteed"))
        .collect();
    Ok(MatchResult { matched: true, parameters, reason: None, notes })
}

/// Can the cubic be (proportional to) the canonical Hilbert polynomial of
/// `(P^3, O(a))` for a rational `a`?
pub fn match_pn_polarization(c: &MultiPoly) -> Result<MatchResult, AnalysisError> {
    let family = change_frame(&pn_hilbert_param(3, "a")?, Frame::Canonical);
    let target = c.rename_vars(vec!["u".into(), "v".into()]);
    match_family(&target, &family.poly)
}

/// Can the cubic be the canonical Hilbert polynomial of the threefold base
/// polarized by `a*g1 - r*g2`? Constructive rank-1 test: pin the scalar,
/// solve the linear columns for `(a, r)`, verify the rest.
pub fn match_base_polarization(
    c: &MultiPoly,
    base: &BaseRing,
) -> Result<MatchResult, AnalysisError> {
    if base.dim() != 3 || base.generators().len() != 2 {
        return Err(AnalysisError::UnsupportedBase);
    }
    let params = vec!["a".to_string(), "r".to_string()];
    let a = MultiPoly::var(&["a", "r"], "a").unwrap();
    let neg_r = MultiPoly::var(&["a", "r"], "r").unwrap().negate();
    let m = SymbolicClass::parametric(base, params, vec![a, neg_r])?;
    let family = rr_threefold(base, &m)?;
    let target = c.rename_vars(vec!["u".into(), "v".into()]);
    match_family(&target, &family.poly)
}

// ---------------------------------------------------------------------------
// conic analysis

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConicClass {
    Ellipse,
    Parabola,
    Hyperbola,
    Degenerate,
}

impl fmt::Display for ConicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConicClass::Ellipse => "ellipse",
            ConicClass::Parabola => "parabola",
            ConicClass::Hyperbola => "hyperbola",
            ConicClass::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

/// Quadratic-part matrix, determinant, real classification, and the Hodge
/// index obstruction of a plane conic.
#[derive(Clone, Debug, Serialize)]
pub struct ConicReport {
    /// Symmetric matrix of the quadratic part; off-diagonal entries are half
    /// the mixed coefficient.
    pub quadratic_matrix: [[Rational; 2]; 2],
    pub determinant: Rational,
    pub classification: ConicClass,
    /// `det > 0`: no polarized surface realizes the conic as its canonical
    /// Hilbert equation, because proportionality would force
    /// `K^2 L^2 - (K.L)^2 = rho^2 det > 0` against the Hodge index theorem.
    pub hodge_obstruction: bool,
}

pub fn conic_report(q: &MultiPoly) -> Result<ConicReport, AnalysisError> {
    if q.vars().len() != 2 {
        return Err(AnalysisError::WrongVariableCount(q.vars().len()));
    }
    if q.homogeneous_part(2).is_zero() {
        return Err(AnalysisError::ZeroQuadraticPart);
    }
    if q.total_degree() > 2 {
        return Err(AnalysisError::WrongDegree { expected: 2, got: q.total_degree() });
    }
    let half = Rational::new(1, 2);
    let a = q.coefficient(&[2, 0]);
    let b = q.coefficient(&[1, 1]) * &half;
    let c = q.coefficient(&[0, 2]);
    let d = q.coefficient(&[1, 0]) * &half;
    let e = q.coefficient(&[0, 1]) * &half;
    let f = q.coefficient(&[0, 0]);
    let det = &a * &c - &b * &b;
    // determinant of the full 3x3 symmetric matrix decides degeneracy
    let det3 = &a * &(&c * &f - &e * &e) - &(&b * &(&b * &f - &d * &e))
        + &(&d * &(&b * &e - &c * &d));
    let classification = if det3.is_zero() {
        ConicClass::Degenerate
    } else if det.is_positive() {
        ConicClass::Ellipse
    } else if det.is_zero() {
        ConicClass::Parabola
    } else {
        ConicClass::Hyperbola
    };
    Ok(ConicReport {
        quadratic_matrix: [[a, b.clone()], [b, c]],
        determinant: det.clone(),
        classification,
        hodge_obstruction: det.is_positive(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn qq(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn uv(pairs: &[(u32, u32, i64, i64)]) -> MultiPoly {
        MultiPoly::from_terms(
            &["u", "v"],
            pairs.iter().map(|&(i, j, n, d)| (vec![i, j], qq(n, d))),
        )
        .unwrap()
    }

    fn eq4() -> MultiPoly {
        let a = uv(&[(1, 0, 2, 1), (0, 1, -1, 1)]);
        let b = uv(&[(1, 0, 1, 1), (0, 1, -1, 1)]);
        let c = uv(&[(2, 0, 28, 1), (1, 1, -38, 1), (0, 2, 13, 1), (0, 0, -1, 1)]);
        (&(&a * &b) * &c).scale(&qq(1, 3))
    }

    fn phi() -> MultiPoly {
        uv(&[
            (3, 0, 28, 3),
            (2, 1, -22, 1),
            (1, 2, 17, 1),
            (0, 3, -13, 3),
            (1, 0, -1, 3),
            (0, 1, 1, 3),
        ])
    }

    #[test]
    fn rational_roots_of_dehomogenized_quartic() {
        // (2z - 1)(z - 1)(28z^2 - 38z + 13): roots 1/2 and 1, conic part none
        let coeffs = [
            qq(-13, 1),
            qq(51, 1),
            qq(-66, 1),
            qq(28, 1),
        ];
        // that's (z-1)(28z^2-38z+13) = 28z^3 - 66z^2 + 51z - 13
        let roots = rational_roots(&coeffs);
        assert_eq!(roots, vec![q(1)]);
        let disc = q(38).pow(2) - q(4) * q(28) * q(13);
        assert_eq!(disc, q(-12));
    }

    #[test]
    fn factorization_of_the_canonical_quartic() {
        let f = extract_linear_factors(&eq4()).unwrap();
        assert_eq!(f.constant, qq(1, 3));
        let rendered: Vec<(String, u32)> = f
            .factors
            .iter()
            .map(|(p, m)| (p.to_string(), *m))
            .collect();
        assert_eq!(
            rendered,
            vec![("2*u - v".to_string(), 1), ("u - v".to_string(), 1)]
        );
        assert_eq!(f.residual.to_string(), "28*u^2 - 38*u*v + 13*v^2 - 1");
        // reassembly
        let mut acc = MultiPoly::constant(&["u", "v"], f.constant.clone());
        for (factor, m) in &f.factors {
            acc = &acc * &factor.pow(*m);
        }
        acc = &acc * &f.residual;
        assert_eq!(acc, eq4());
    }

    #[test]
    fn repeated_factor_multiplicity() {
        let line = uv(&[(1, 0, 2, 1), (0, 1, -1, 1)]);
        let cube = line.pow(3);
        let f = extract_linear_factors(&cube).unwrap();
        assert_eq!(f.constant, q(1));
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].0.to_string(), "2*u - v");
        assert_eq!(f.factors[0].1, 3);
        assert_eq!(f.residual.to_string(), "1");
    }

    #[test]
    fn irreducible_conic_has_no_lines() {
        let conic = uv(&[(2, 0, 28, 1), (1, 1, -38, 1), (0, 2, 13, 1), (0, 0, -1, 1)]);
        let f = extract_linear_factors(&conic).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.residual, conic);
        assert_eq!(f.constant, q(1));
    }

    #[test]
    fn offset_and_scaled_lines_are_found() {
        // (1/5)(2u - v + 3)(u + v - 1/2)
        let l1 = uv(&[(1, 0, 2, 1), (0, 1, -1, 1), (0, 0, 3, 1)]);
        let l2 = uv(&[(1, 0, 1, 1), (0, 1, 1, 1), (0, 0, -1, 2)]);
        let p = (&l1 * &l2).scale(&qq(1, 5));
        let f = extract_linear_factors(&p).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.residual.to_string(), "1");
        let mut acc = MultiPoly::constant(&["u", "v"], f.constant.clone());
        for (factor, m) in &f.factors {
            acc = &acc * &factor.pow(*m);
        }
        assert_eq!(acc, p);
    }

    #[test]
    fn phi_does_not_come_from_projective_space() {
        let result = match_pn_polarization(&phi()).unwrap();
        assert!(!result.matched);
        // both phi and the family are odd, so the failure is a coefficient
        // ratio inconsistency, not a parity obstruction
        match result.reason.unwrap() {
            MatchFailure::VerificationFailed { columns } => {
                assert!(!columns.is_empty());
            }
            other => panic!("unexpected reason {other:?}"),
        }
    }

    #[test]
    fn member_of_pn_family_matches() {
        // candidate built from the family itself with a = 5, scaled by 7
        let family = change_frame(&pn_hilbert_param(3, "a").unwrap(), Frame::Canonical);
        let groups = family.poly.group_by_prefix(2);
        let mut terms = Vec::new();
        for (exps, coeff) in groups {
            let val = coeff.eval_at(&[q(5)]);
            terms.push((exps, val));
        }
        let member = MultiPoly::from_terms(&["u", "v"], terms).unwrap();
        let result = match_pn_polarization(&member.scale(&q(7))).unwrap();
        assert!(result.matched);
        let a = result
            .parameters
            .iter()
            .find(|(n, _)| n == "a")
            .unwrap()
            .1
            .clone();
        assert_eq!(a, q(5));
        assert!(result.notes.is_empty());
    }

    #[test]
    fn target_with_even_part_is_rejected_with_parity_reason() {
        let bad = &phi() + &uv(&[(2, 0, 1, 1)]);
        let result = match_pn_polarization(&bad).unwrap();
        assert!(!result.matched);
        assert!(matches!(
            result.reason,
            Some(MatchFailure::EvenPartNonzero { .. })
        ));
    }

    #[test]
    fn phi_matches_blowup_with_average_polarization() {
        let base = BaseRing::blowup_p3_point();
        let result = match_base_polarization(&phi(), &base).unwrap();
        assert!(result.matched, "reason: {:?}", result.reason);
        let get = |name: &str| {
            result
                .parameters
                .iter()
                .find(|(n, _)| n == name)
                .unwrap()
                .1
                .clone()
        };
        assert_eq!(get("lambda"), q(-1));
        assert_eq!(get("a"), q(3));
        assert_eq!(get("r"), q(1));
        assert!(result.notes.is_empty());
    }

    #[test]
    fn scaling_invariance_of_base_match() {
        let base = BaseRing::blowup_p3_point();
        let scaled = phi().scale(&qq(-7, 5));
        let result = match_base_polarization(&scaled, &base).unwrap();
        assert!(result.matched);
        let get = |name: &str| {
            result
                .parameters
                .iter()
                .find(|(n, _)| n == name)
                .unwrap()
                .1
                .clone()
        };
        assert_eq!(get("a"), q(3));
        assert_eq!(get("r"), q(1));
        assert_eq!(get("lambda"), qq(7, 5));
    }

    #[test]
    fn constructed_base_member_round_trips() {
        // target = -p_(Y, 2h - e), expect (a, r) = (2, 1)
        let base = BaseRing::blowup_p3_point();
        let m_poly = &base.generator(0).scale(&q(2)) - &base.generator(1);
        let m = SymbolicClass::from_class(&base, &m_poly).unwrap();
        let p = rr_threefold(&base, &m).unwrap();
        let target = p.poly.negate();
        let result = match_base_polarization(&target, &base).unwrap();
        assert!(result.matched);
        let get = |name: &str| {
            result
                .parameters
                .iter()
                .find(|(n, _)| n == name)
                .unwrap()
                .1
                .clone()
        };
        assert_eq!(get("a"), q(2));
        assert_eq!(get("r"), q(1));
    }

    #[test]
    fn forced_wrong_parameters_fail_verification() {
        // substituting (a, r) = (1, 0) into the family leaves rank 2
        let base = BaseRing::blowup_p3_point();
        let m_poly = base.generator(0);
        let m = SymbolicClass::from_class(&base, &m_poly).unwrap();
        let candidate = rr_threefold(&base, &m).unwrap().poly;
        // stack phi and the candidate column-wise and check rank by hand
        let cols: [[u32; 2]; 6] = [[3, 0], [2, 1], [1, 2], [0, 3], [1, 0], [0, 1]];
        let mut sys = LinearSystem::new(6);
        sys.push(
            cols.iter().map(|e| phi().coefficient(&e[..])).collect(),
            Rational::zero(),
        );
        sys.push(
            cols.iter().map(|e| candidate.coefficient(&e[..])).collect(),
            Rational::zero(),
        );
        assert_eq!(sys.rank(), 2);
    }

    #[test]
    fn conic_report_of_the_residual() {
        let conic = uv(&[(2, 0, 28, 1), (1, 1, -38, 1), (0, 2, 13, 1), (0, 0, -1, 1)]);
        let report = conic_report(&conic).unwrap();
        assert_eq!(report.quadratic_matrix[0][0], q(28));
        assert_eq!(report.quadratic_matrix[0][1], q(-19));
        assert_eq!(report.quadratic_matrix[1][0], q(-19));
        assert_eq!(report.quadratic_matrix[1][1], q(13));
        assert_eq!(report.determinant, q(3));
        assert_eq!(report.classification, ConicClass::Ellipse);
        assert!(report.hodge_obstruction);
    }

    #[test]
    fn conic_classification_buckets() {
        let circle = uv(&[(2, 0, 1, 1), (0, 2, 1, 1), (0, 0, -1, 1)]);
        let r = conic_report(&circle).unwrap();
        assert_eq!(r.determinant, q(1));
        assert_eq!(r.classification, ConicClass::Ellipse);
        assert!(r.hodge_obstruction);

        let hyperbola = uv(&[(2, 0, 1, 1), (0, 2, -1, 1), (0, 0, -1, 1)]);
        let r = conic_report(&hyperbola).unwrap();
        assert_eq!(r.determinant, q(-1));
        assert_eq!(r.classification, ConicClass::Hyperbola);
        assert!(!r.hodge_obstruction);

        let parabola = uv(&[(2, 0, 1, 1), (0, 1, -1, 1)]);
        let r = conic_report(&parabola).unwrap();
        assert_eq!(r.classification, ConicClass::Parabola);

        let crossing_lines = uv(&[(2, 0, 1, 1), (0, 2, -1, 1)]);
        let r = conic_report(&crossing_lines).unwrap();
        assert_eq!(r.classification, ConicClass::Degenerate);

        let linear_only = uv(&[(1, 0, 1, 1)]);
        assert!(matches!(
            conic_report(&linear_only),
            Err(AnalysisError::ZeroQuadraticPart)
        ));
    }

    #[test]
    fn determinant_scales_quadratically() {
        let conic = uv(&[(2, 0, 28, 1), (1, 1, -38, 1), (0, 2, 13, 1), (0, 0, -1, 1)]);
        let scaled = conic.scale(&qq(5, 1));
        let r = conic_report(&scaled).unwrap();
        assert_eq!(r.determinant, q(75));
        // swap u and v: determinant is unchanged
        let swapped = MultiPoly::from_terms(
            &["u", "v"],
            conic.terms().map(|(e, c)| (vec![e[1], e[0]], c.clone())),
        )
        .unwrap();
        let r2 = conic_report(&swapped).unwrap();
        assert_eq!(r2.determinant, q(3));
    }
}

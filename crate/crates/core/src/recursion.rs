//! The restriction recursion: compute the Hilbert polynomial of a scroll by
//! restricting to a hyperplane-section threefold, peel off the scroll line,
//! and solve a functional equation for the residual cubic.
//!
//! For a fourfold scroll `(X, L)` with a member `V in |K_X + 2L|` the exact
//! sequence
//!
//! ```text
//! 0 -> (2x-1)K + (2(x-1)+y)L -> 2xK + (2x+y)L -> xK_V + yL_V -> 0
//! ```
//!
//! turns into `p_X(2x, 2x+y) = p_X(2x-1, 2x+y-2) + p_V(x, y)`. Both sides
//! factor through the scroll line `(2a - b - 1)`, leaving a relation for the
//! degree-3 cofactor `R_X`, which a ten-coefficient ansatz plus Serre
//! symmetry, the functional equation and two evaluation anchors pin down
//! uniquely.

use crate::chern::{chern_data, ChernError};
use crate::chow::BundleData;
use crate::hilbert::{change_frame, rr_threefold_from_data, Frame, HilbertPoly, HilbertError};
use crate::linalg::{LinalgError, LinearSystem, Relation};
use crate::multipoly::{MultiPoly, PolyError};
use crate::rational::Rational;
use thiserror::Error;

/// Coefficient names of the cubic ansatz, in emission order. Coefficient k
/// multiplies the k-th monomial of `a^3, a^2 b, a b^2, b^3, a^2, ab, b^2, a, b, 1`.
pub const COEFF_NAMES: [&str; 10] = ["A'", "B'", "C'", "E'", "F'", "G'", "H'", "J'", "L'", "M'"];

const COEFF_MONOMIALS: [(u32, u32); 10] = [
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (2, 0),
    (1, 1),
    (0, 2),
    (1, 0),
    (0, 1),
    (0, 0),
];

#[derive(Debug, Error)]
pub enum RecursionError {
    #[error("restriction geometry needs a surface base, got dimension {0}")]
    WrongBaseDimension(u32),
    #[error("chi(O) anchor mismatch: base gives {expected}, polynomial gives {actual}")]
    ChiAnchorMismatch { expected: Rational, actual: Rational },
    #[error("supplied line of degree {0}, expected degree 1")]
    NotALine(u32),
    #[error("the scroll line does not divide the polynomial (remainder {remainder})")]
    NotAFactor { remainder: String },
    #[error("anchor point ({x}, {y}) lies on the scroll line; cannot transport the value")]
    AnchorOnScrollLine { x: Rational, y: Rational },
    #[error("need at least two anchors, got {0}")]
    TooFewAnchors(usize),
    #[error("expected polynomials in the xy frame")]
    WrongFrame,
    #[error("{stage} stage: {source}")]
    Linear { stage: &'static str, source: LinalgError },
    #[error("solved coefficients fail to satisfy the {0} constraints")]
    ResidualNonzero(&'static str),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The degree-3 ansatz `A'a^3 + B'a^2b + ... + M'` as a polynomial in
/// `(a, b)` and its ten unknown coefficients.
#[derive(Clone, Debug)]
pub struct RAnsatz {
    pub poly: MultiPoly,
}

impl RAnsatz {
    pub fn new() -> Self {
        let mut vars: Vec<&str> = vec!["a", "b"];
        vars.extend(COEFF_NAMES);
        let terms = COEFF_MONOMIALS.iter().enumerate().map(|(k, &(i, j))| {
            let mut exps = vec![i, j];
            exps.extend((0..COEFF_NAMES.len()).map(|c| u32::from(c == k)));
            (exps, Rational::one())
        });
        RAnsatz {
            poly: MultiPoly::from_terms(&vars, terms).expect("ansatz construction"),
        }
    }
}

impl Default for RAnsatz {
    fn default() -> Self {
        Self::new()
    }
}

/// `(2a - b - 1)` over the given two frame variables.
pub fn scroll_line(vars: [&str; 2]) -> MultiPoly {
    MultiPoly::from_terms(
        &vars,
        [
            (vec![1, 0], Rational::from_int(2)),
            (vec![0, 1], Rational::from_int(-1)),
            (vec![0, 0], Rational::from_int(-1)),
        ],
    )
    .unwrap()
}

/// Hilbert polynomial of the restriction threefold `V = P(O(A)+O(B))` over a
/// surface, in the xy frame. The Riemann-Roch output must reproduce
/// chi(O_V) = chi(O_base) at (0,0); a mismatch signals inconsistent data.
pub fn restriction_polynomial(bundle: &BundleData) -> Result<HilbertPoly, RecursionError> {
    if bundle.base().dim() != 2 {
        return Err(RecursionError::WrongBaseDimension(bundle.base().dim()));
    }
    let data = chern_data(bundle)?;
    let canonical = rr_threefold_from_data(&data)?;
    let chi = canonical.eval_xy(&Rational::zero(), &Rational::zero())?;
    if &chi != bundle.base().chi_o() {
        return Err(RecursionError::ChiAnchorMismatch {
            expected: bundle.base().chi_o().clone(),
            actual: chi,
        });
    }
    Ok(change_frame(&canonical, Frame::Xy))
}

/// Peels a linear factor off a Hilbert polynomial; the quotient is the
/// residual of the scroll fibration.
pub fn scroll_factor_divide(
    p: &HilbertPoly,
    line: &MultiPoly,
) -> Result<MultiPoly, RecursionError> {
    if line.total_degree() != 1 {
        return Err(RecursionError::NotALine(line.total_degree()));
    }
    p.poly.divide_exact(line).map_err(|e| match e {
        PolyError::NonzeroRemainder { remainder } => RecursionError::NotAFactor {
            remainder: remainder.to_string(),
        },
        other => RecursionError::Poly(other),
    })
}

/// A relation `lhs = rhs` between ansatz coefficients, with the right side a
/// polynomial in the still-free coefficients.
#[derive(Clone, Debug)]
pub struct CoeffRelation {
    pub lhs: String,
    pub rhs: MultiPoly,
}

impl CoeffRelation {
    pub fn render(&self) -> String {
        format!("{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug)]
pub struct AnsatzSolution {
    /// Serre-symmetry stage: `A', B', C', F'` in terms of the others.
    pub serre_relations: Vec<CoeffRelation>,
    /// Functional-equation stage: `G', H', J', L'` in terms of `E', M'`.
    pub functional_relations: Vec<CoeffRelation>,
    /// Anchor stage values, in coefficient order.
    pub anchor_values: Vec<(String, Rational)>,
    /// All ten coefficients in the fixed order `A'..M'`.
    pub coefficients: Vec<(String, Rational)>,
    /// The solved cubic in variables `(x, y)`.
    pub r_poly: MultiPoly,
    /// Rank of the combined linear system (Serre + functional + anchors).
    pub rank: usize,
}

/// Extracts one linear equation per carrier monomial from a polynomial that
/// is affine in the trailing unknown variables. Rows are `coeffs . x = rhs`.
fn linear_system_from_identity(
    poly: &MultiPoly,
    carrier: usize,
    n_unknowns: usize,
) -> Result<LinearSystem, PolyError> {
    let mut sys = LinearSystem::new(n_unknowns);
    for (_mono, coeff_poly) in poly.group_by_prefix(carrier) {
        let (coeffs, konst) = coeff_poly.affine_row()?;
        debug_assert_eq!(coeffs.len(), n_unknowns);
        sys.push(coeffs, -konst);
    }
    Ok(sys)
}

/// Affine substitution images that pass the two carrier variables through,
/// rewrite pivot unknowns by their relations (keyed by unknown index), and
/// keep the remaining unknowns. Targets `new_vars`.
fn stage_images(
    old_vars: &[String],
    new_vars: &[String],
    relations: &[(usize, MultiPoly)],
) -> Vec<MultiPoly> {
    let mut images = Vec::with_capacity(old_vars.len());
    for (i, var) in old_vars.iter().enumerate() {
        if i < 2 {
            images.push(MultiPoly::var_by_index(new_vars.to_vec(), i));
            continue;
        }
        match relations.iter().find(|(p, _)| *p == i - 2) {
            Some((_, rhs)) => images.push(rhs.clone()),
            None => {
                let idx = new_vars
                    .iter()
                    .position(|v| v == var)
                    .expect("free unknown present in target vars");
                images.push(MultiPoly::var_by_index(new_vars.to_vec(), idx));
            }
        }
    }
    images
}

fn relation_to_poly(rel: &Relation, free_names: &[String], col_to_free: &[usize]) -> MultiPoly {
    // express the relation over exactly the free-variable list
    let refs: Vec<&str> = free_names.iter().map(|s| s.as_str()).collect();
    let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
    for (col, coeff) in &rel.coeffs {
        let slot = col_to_free
            .iter()
            .position(|c| c == col)
            .expect("coefficient on a free column");
        let mut exps = vec![0u32; free_names.len()];
        exps[slot] = 1;
        terms.push((exps, coeff.clone()));
    }
    terms.push((vec![0u32; free_names.len()], rel.constant.clone()));
    MultiPoly::from_terms(&refs, terms).expect("relation polynomial")
}

/// Solves the ten-coefficient ansatz against a known restriction residual
/// `rv` (in `(x, y)`) and evaluation anchors `((x, y), chi)`.
///
/// Anchors are values of the full Hilbert polynomial `p = R . (2x - y - 1)`;
/// they are transported onto `R` by dividing by the scroll-line value at the
/// anchor point.
///
/// Stages mirror the recursion: (i) Serre symmetry `R(a,b) = -R(1-a,-b)`,
/// (ii) the functional equation against `rv`, keeping free exactly the two
/// coefficients the anchors determine (`E'`, `M'`), (iii) the anchors. The
/// combined system must have full rank 10 and the solution is verified
/// against every equation group.
pub fn solve_r_ansatz(
    rv: &MultiPoly,
    anchors: &[((Rational, Rational), Rational)],
) -> Result<AnsatzSolution, RecursionError> {
    if anchors.len() < 2 {
        return Err(RecursionError::TooFewAnchors(anchors.len()));
    }
    let ansatz = RAnsatz::new().poly;
    let n = COEFF_NAMES.len();
    let ab: Vec<String> = vec!["a".into(), "b".into()];

    // --- stage 1: Serre symmetry R(a,b) + R(1-a,-b) = 0
    let serre_sum = {
        let vars = ansatz.vars().to_vec();
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let a = MultiPoly::var_by_index(vars.clone(), 0);
        let b = MultiPoly::var_by_index(vars.clone(), 1);
        let one = MultiPoly::constant(&var_refs, Rational::one());
        let mut images = vec![&one - &a, b.negate()];
        for i in 2..vars.len() {
            images.push(MultiPoly::var_by_index(vars.clone(), i));
        }
        &ansatz + &ansatz.substitute_affine(&images)?
    };
    let sys1 = linear_system_from_identity(&serre_sum, 2, n)?;
    let mut sys1_solved = sys1.clone();
    let pivots1 = sys1_solved.rref_by_columns(&(0..n).collect::<Vec<_>>());
    let pivot_cols1: Vec<usize> = {
        let mut cols: Vec<usize> = pivots1.iter().map(|&(_, c)| c).collect();
        cols.sort_unstable();
        cols
    };
    let free1: Vec<usize> = (0..n).filter(|c| !pivot_cols1.contains(c)).collect();
    let sf1 = sys1
        .solved_form(&free1)
        .map_err(|source| RecursionError::Linear { stage: "serre", source })?;
    let free1_names: Vec<String> = free1.iter().map(|&c| COEFF_NAMES[c].to_string()).collect();
    let serre_relations: Vec<CoeffRelation> = sf1
        .relations
        .iter()
        .map(|rel| CoeffRelation {
            lhs: COEFF_NAMES[rel.pivot].to_string(),
            rhs: relation_to_poly(rel, &free1_names, &free1),
        })
        .collect();

    // --- stage 2: functional equation on the Serre-reduced ansatz
    let stage2_vars: Vec<String> = ab.iter().cloned().chain(free1_names.iter().cloned()).collect();
    let ansatz2 = {
        let rel_map: Vec<(usize, MultiPoly)> = sf1
            .relations
            .iter()
            .map(|rel| {
                (
                    rel.pivot,
                    relation_to_poly(rel, &free1_names, &free1).prepend_vars(&stage2_vars[..2]),
                )
            })
            .collect();
        let images = stage_images(ansatz.vars(), &stage2_vars, &rel_map);
        ansatz.substitute_affine(&images)?
    };
    if rv.vars() != ["x", "y"] {
        return Err(RecursionError::WrongFrame);
    }
    let xy_vars: Vec<String> = vec!["x".into(), "y".into()];
    let stage2_xy: Vec<String> = xy_vars
        .iter()
        .cloned()
        .chain(free1_names.iter().cloned())
        .collect();
    let functional = {
        let subst = |ax: &[i64; 3], bx: &[i64; 3]| -> Result<MultiPoly, PolyError> {
            // images a -> ax0*x + ax1*y + ax2, b -> bx0*x + bx1*y + bx2
            let refs: Vec<&str> = stage2_xy.iter().map(|s| s.as_str()).collect();
            let make = |c: &[i64; 3]| {
                let mut terms = vec![
                    (
                        {
                            let mut e = vec![0u32; stage2_xy.len()];
                            e[0] = 1;
                            e
                        },
                        Rational::from_int(c[0]),
                    ),
                    (
                        {
                            let mut e = vec![0u32; stage2_xy.len()];
                            e[1] = 1;
                            e
                        },
                        Rational::from_int(c[1]),
                    ),
                ];
                terms.push((vec![0u32; stage2_xy.len()], Rational::from_int(c[2])));
                MultiPoly::from_terms(&refs, terms).unwrap()
            };
            let mut images = vec![make(ax), make(bx)];
            for i in 2..stage2_vars.len() {
                images.push(MultiPoly::var_by_index(stage2_xy.clone(), i));
            }
            ansatz2.substitute_affine(&images)
        };
        let plus = subst(&[2, 0, 0], &[2, 1, 0])?; // R(2x, 2x+y)
        let minus = subst(&[2, 0, -1], &[2, 1, -2])?; // R(2x-1, 2x+y-2)
        let rv_lift = rv.append_vars(&free1_names);
        &(&plus - &minus) - &rv_lift
    };
    let sys2 = linear_system_from_identity(&functional, 2, free1.len())?;
    // the two coefficients the anchors will determine stay free
    let stage2_free: Vec<usize> = free1_names
        .iter()
        .enumerate()
        .filter(|(_, name)| *name == "E'" || *name == "M'")
        .map(|(i, _)| i)
        .collect();
    let sf2 = sys2
        .solved_form(&stage2_free)
        .map_err(|source| RecursionError::Linear { stage: "functional", source })?;
    let stage2_free_names: Vec<String> = stage2_free
        .iter()
        .map(|&i| free1_names[i].clone())
        .collect();
    let functional_relations: Vec<CoeffRelation> = sf2
        .relations
        .iter()
        .map(|rel| CoeffRelation {
            lhs: free1_names[rel.pivot].clone(),
            rhs: relation_to_poly(rel, &stage2_free_names, &stage2_free),
        })
        .collect();

    // --- stage 3: anchors on the doubly-reduced ansatz
    let stage3_vars: Vec<String> = ab
        .iter()
        .cloned()
        .chain(stage2_free_names.iter().cloned())
        .collect();
    let ansatz3 = {
        let rel_map: Vec<(usize, MultiPoly)> = sf2
            .relations
            .iter()
            .map(|rel| {
                (
                    rel.pivot,
                    relation_to_poly(rel, &stage2_free_names, &stage2_free)
                        .prepend_vars(&stage3_vars[..2]),
                )
            })
            .collect();
        let images = stage_images(&stage2_vars, &stage3_vars, &rel_map);
        ansatz2.substitute_affine(&images)?
    };
    let line = scroll_line(["x", "y"]);
    let mut sys3 = LinearSystem::new(stage2_free.len());
    for ((px, py), chi) in anchors {
        let line_val = line.eval_at(&[px.clone(), py.clone()]);
        if line_val.is_zero() {
            return Err(RecursionError::AnchorOnScrollLine { x: px.clone(), y: py.clone() });
        }
        let target = chi / &line_val;
        // substitute the anchor point for (a, b)
        let refs: Vec<&str> = stage2_free_names.iter().map(|s| s.as_str()).collect();
        let mut images = vec![
            MultiPoly::constant(&refs, px.clone()),
            MultiPoly::constant(&refs, py.clone()),
        ];
        for i in 0..stage2_free.len() {
            images.push(MultiPoly::var_by_index(stage2_free_names.clone(), i));
        }
        let at_point = ansatz3.substitute_affine(&images)?;
        let (coeffs, konst) = at_point.affine_row()?;
        sys3.push(coeffs, target - konst);
    }
    let anchor_solution = sys3
        .solve_unique()
        .map_err(|source| RecursionError::Linear { stage: "anchor", source })?;
    let anchor_values: Vec<(String, Rational)> = stage2_free_names
        .iter()
        .cloned()
        .zip(anchor_solution.iter().cloned())
        .collect();

    // --- assemble all ten coefficients
    let mut values = vec![Rational::zero(); n];
    for (name, val) in &anchor_values {
        let idx = COEFF_NAMES.iter().position(|c| c == name).unwrap();
        values[idx] = val.clone();
    }
    for rel in sf2.relations.iter() {
        let idx = COEFF_NAMES
            .iter()
            .position(|c| *c == free1_names[rel.pivot])
            .unwrap();
        let mut val = rel.constant.clone();
        for (col, coeff) in &rel.coeffs {
            val += &(coeff * &anchor_solution[stage2_free.iter().position(|c| c == col).unwrap()]);
        }
        values[idx] = val;
    }
    for rel in sf1.relations.iter() {
        let mut val = rel.constant.clone();
        for (col, coeff) in &rel.coeffs {
            val += &(coeff * &values[*col]);
        }
        values[rel.pivot] = val;
    }
    let coefficients: Vec<(String, Rational)> = COEFF_NAMES
        .iter()
        .map(|c| c.to_string())
        .zip(values.iter().cloned())
        .collect();

    // --- r polynomial in (x, y)
    let r_poly = MultiPoly::from_terms(
        &["x", "y"],
        COEFF_MONOMIALS
            .iter()
            .zip(values.iter())
            .map(|(&(i, j), v)| (vec![i, j], v.clone())),
    )?;

    // --- verification: residuals of every equation group, and total rank
    let mut combined = LinearSystem::new(n);
    combined.extend_from(&sys1);
    let full_functional = {
        let vars = ansatz.vars().to_vec();
        let full_xy: Vec<String> = xy_vars
            .iter()
            .cloned()
            .chain(COEFF_NAMES.iter().map(|s| s.to_string()))
            .collect();
        let refs: Vec<&str> = full_xy.iter().map(|s| s.as_str()).collect();
        let make = |c: [i64; 3]| {
            MultiPoly::from_terms(
                &refs,
                [
                    (
                        {
                            let mut e = vec![0u32; full_xy.len()];
                            e[0] = 1;
                            e
                        },
                        Rational::from_int(c[0]),
                    ),
                    (
                        {
                            let mut e = vec![0u32; full_xy.len()];
                            e[1] = 1;
                            e
                        },
                        Rational::from_int(c[1]),
                    ),
                    (vec![0u32; full_xy.len()], Rational::from_int(c[2])),
                ],
            )
            .unwrap()
        };
        let mut images_plus = vec![make([2, 0, 0]), make([2, 1, 0])];
        let mut images_minus = vec![make([2, 0, -1]), make([2, 1, -2])];
        for i in 2..vars.len() {
            images_plus.push(MultiPoly::var_by_index(full_xy.clone(), i));
            images_minus.push(MultiPoly::var_by_index(full_xy.clone(), i));
        }
        let plus = ansatz.substitute_affine(&images_plus)?;
        let minus = ansatz.substitute_affine(&images_minus)?;
        let rv_lift = rv.append_vars(&COEFF_NAMES.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        &(&plus - &minus) - &rv_lift
    };
    combined.extend_from(&linear_system_from_identity(&full_functional, 2, n)?);
    for ((px, py), chi) in anchors {
        let line_val = line.eval_at(&[px.clone(), py.clone()]);
        let target = chi / &line_val;
        let refs: Vec<&str> = COEFF_NAMES.to_vec();
        let mut images = vec![
            MultiPoly::constant(&refs, px.clone()),
            MultiPoly::constant(&refs, py.clone()),
        ];
        for i in 0..n {
            images.push(MultiPoly::var_by_index(
                COEFF_NAMES.iter().map(|s| s.to_string()).collect(),
                i,
            ));
        }
        let at_point = ansatz.substitute_affine(&images)?;
        let (coeffs, konst) = at_point.affine_row()?;
        combined.push(coeffs, target - konst);
    }
    let rank = combined.rank();
    for (row, rhs) in combined.rows.iter().zip(&combined.rhs) {
        let lhs: Rational = row
            .iter()
            .zip(&values)
            .map(|(c, v)| c * v)
            .sum();
        if &lhs != rhs {
            return Err(RecursionError::ResidualNonzero("combined"));
        }
    }

    Ok(AnsatzSolution {
        serre_relations,
        functional_relations,
        anchor_values,
        coefficients,
        r_poly,
        rank,
    })
}

/// `p_X(2x, 2x+y) - p_X(2x-1, 2x+y-2) - p_V(x, y)`; identically zero when
/// the two polynomials really belong to a scroll and its section.
pub fn exact_sequence_residual(
    p_x: &HilbertPoly,
    p_v: &HilbertPoly,
) -> Result<MultiPoly, RecursionError> {
    if p_x.frame != Frame::Xy || p_v.frame != Frame::Xy {
        return Err(RecursionError::WrongFrame);
    }
    let vars = p_x.poly.vars().to_vec();
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let x = MultiPoly::var_by_index(vars.clone(), 0);
    let y = MultiPoly::var_by_index(vars.clone(), 1);
    let c = |n: i64| MultiPoly::constant(&refs, Rational::from_int(n));
    let two_x = x.scale(&Rational::from_int(2));
    let plus = p_x.poly.substitute_affine(&[two_x.clone(), &two_x + &y])?;
    let minus = p_x
        .poly
        .substitute_affine(&[&two_x - &c(1), &(&two_x + &y) - &c(2)])?;
    Ok(&(&plus - &minus) - &p_v.poly)
}

/// Multiplies the solved cubic back by the scroll line, converts to the
/// canonical frame, and compares with a reference polynomial term by term.
pub fn assemble_and_crosscheck(
    r: &MultiPoly,
    reference: &HilbertPoly,
) -> (HilbertPoly, bool) {
    let line = scroll_line(["x", "y"]);
    let assembled = HilbertPoly {
        poly: r * &line,
        frame: Frame::Xy,
        n: reference.n,
    };
    let canonical = change_frame(&assembled, Frame::Canonical);
    let reference_canonical = change_frame(reference, Frame::Canonical);
    let equal = canonical.poly == reference_canonical.poly;
    (canonical, equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::chern_data;
    use crate::chow::{BaseRing, BundleData};
    use crate::hilbert::rr_fourfold;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn qq(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn v_bundle() -> BundleData {
        let base = BaseRing::p1xp1();
        let h_s = &base.generator(0).scale(&q(3)) + &base.generator(1).scale(&q(3));
        BundleData::new(base, h_s.clone(), h_s).unwrap()
    }

    fn paper_fourfold() -> HilbertPoly {
        let base = BaseRing::blowup_p3_point();
        let big_h = &base.generator(0).scale(&q(3)) - &base.generator(1);
        let data = chern_data(&BundleData::new(base, big_h.clone(), big_h).unwrap()).unwrap();
        rr_fourfold(&data).unwrap()
    }

    fn rv_expected() -> MultiPoly {
        MultiPoly::from_terms(
            &["x", "y"],
            [
                (vec![2, 0], q(-4)),
                (vec![1, 1], q(12)),
                (vec![0, 2], q(-9)),
                (vec![1, 0], q(4)),
                (vec![0, 1], q(-6)),
                (vec![0, 0], q(-1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn restriction_chi_values() {
        let p = restriction_polynomial(&v_bundle()).unwrap();
        assert_eq!(p.eval_xy(&q(0), &q(0)).unwrap(), q(1));
        assert_eq!(p.eval_xy(&q(0), &q(1)).unwrap(), q(32));
    }

    #[test]
    fn restriction_quotient_is_rv() {
        let p = restriction_polynomial(&v_bundle()).unwrap();
        let r = scroll_factor_divide(&p, &scroll_line(["x", "y"])).unwrap();
        assert_eq!(r, rv_expected());
        assert_eq!(r.to_string(), "-4*x^2 + 12*x*y - 9*y^2 + 4*x - 6*y - 1");
    }

    #[test]
    fn scroll_divide_rejects_non_factor() {
        let p = change_frame(&paper_fourfold(), Frame::Xy);
        let x_minus_y = MultiPoly::from_terms(
            &["x", "y"],
            [(vec![1, 0], q(1)), (vec![0, 1], q(-1))],
        )
        .unwrap();
        assert!(matches!(
            scroll_factor_divide(&p, &x_minus_y),
            Err(RecursionError::NotAFactor { .. })
        ));
        assert!(scroll_factor_divide(&p, &scroll_line(["x", "y"])).is_ok());
    }

    #[test]
    fn ansatz_solution_reproduces_all_stages() {
        let anchors = vec![
            ((q(0), q(0)), q(1)),
            ((q(0), q(1)), q(38)),
        ];
        let sol = solve_r_ansatz(&rv_expected(), &anchors).unwrap();
        let rendered: Vec<String> = sol.serre_relations.iter().map(|r| r.render()).collect();
        assert_eq!(
            rendered,
            vec![
                "A' = 2*J' + 4*M'",
                "B' = -G'",
                "C' = -2*H'",
                "F' = -3*J' - 6*M'",
            ]
        );
        let rendered: Vec<String> = sol.functional_relations.iter().map(|r| r.render()).collect();
        assert_eq!(
            rendered,
            vec![
                "G' = -12*E' - 30",
                "H' = 3*E' + 9/2",
                "J' = -4*E' - 2*M' - 38/3",
                "L' = 2*E' + M' + 9/2",
            ]
        );
        assert_eq!(
            sol.anchor_values,
            vec![("E'".to_string(), qq(-13, 3)), ("M'".to_string(), q(-1))]
        );
        let expected = [
            ("A'", qq(28, 3)),
            ("B'", q(-22)),
            ("C'", q(17)),
            ("E'", qq(-13, 3)),
            ("F'", q(-14)),
            ("G'", q(22)),
            ("H'", qq(-17, 2)),
            ("J'", qq(20, 3)),
            ("L'", qq(-31, 6)),
            ("M'", q(-1)),
        ];
        for ((name, value), (en, ev)) in sol.coefficients.iter().zip(expected.iter()) {
            assert_eq!(name, en);
            assert_eq!(value, ev);
        }
        assert_eq!(sol.rank, 10);
        assert_eq!(
            sol.r_poly.to_string(),
            "28/3*x^3 - 22*x^2*y + 17*x*y^2 - 13/3*y^3 - 14*x^2 + 22*x*y - 17/2*y^2 + 20/3*x - 31/6*y - 1"
        );
    }

    #[test]
    fn assembled_cubic_matches_first_approach() {
        let anchors = vec![((q(0), q(0)), q(1)), ((q(0), q(1)), q(38))];
        let sol = solve_r_ansatz(&rv_expected(), &anchors).unwrap();
        let reference = paper_fourfold();
        let (poly, equal) = assemble_and_crosscheck(&sol.r_poly, &reference);
        assert!(equal);
        assert_eq!(poly.poly, reference.poly);
        // a perturbed cubic no longer matches
        let bump = MultiPoly::from_terms(&["x", "y"], [(vec![1, 0], qq(1, 7))]).unwrap();
        let (_, equal) = assemble_and_crosscheck(&(&sol.r_poly + &bump), &reference);
        assert!(!equal);
    }

    #[test]
    fn exact_sequence_identity_from_first_approach_data() {
        let p_x = change_frame(&paper_fourfold(), Frame::Xy);
        let p_v = restriction_polynomial(&v_bundle()).unwrap();
        let residual = exact_sequence_residual(&p_x, &p_v).unwrap();
        assert!(residual.is_zero());
    }

    #[test]
    fn perturbed_rv_is_rejected() {
        let mut bad = rv_expected();
        bad = &bad + &MultiPoly::from_terms(&["x", "y"], [(vec![1, 0], q(1))]).unwrap();
        let anchors = vec![((q(0), q(0)), q(1)), ((q(0), q(1)), q(38))];
        assert!(matches!(
            solve_r_ansatz(&bad, &anchors),
            Err(RecursionError::Linear { .. })
        ));
    }

    #[test]
    fn anchor_on_scroll_line_is_rejected() {
        let anchors = vec![((q(1), q(1)), q(1)), ((q(0), q(1)), q(38))];
        assert!(matches!(
            solve_r_ansatz(&rv_expected(), &anchors),
            Err(RecursionError::AnchorOnScrollLine { .. })
        ));
    }
}

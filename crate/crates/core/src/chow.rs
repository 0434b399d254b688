//! Intersection rings of base surfaces/threefolds and of split P1-bundles
//! over them.
//!
//! A base ring is a finite top-degree table: intersection numbers of all
//! degree-`dim` generator monomials, the canonical class, second-Chern
//! pairings (threefold bases), and chi(O). No quotient-ring arithmetic is
//! performed; everything of lower degree stays symbolic.
//!
//! On the bundle `X = P(O(A) + O(B))` the tautological class satisfies the
//! rank-2 Chern-Wu relation `L^2 = L.(A+B) - A.B`, which reduces every class
//! to L-degree <= 1; pushforward then pairs `L . (top base class)` against
//! the table and kills pure pullbacks of top degree.

use crate::linalg::LinearSystem;
use crate::multipoly::MultiPoly;
use crate::rational::Rational;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Variable name of the tautological class inside `XClass` polynomials.
pub const TAUT_VAR: &str = "L";

#[derive(Debug, Error)]
pub enum ChowError {
    #[error("base dimension must be 2 or 3, got {0}")]
    BadDimension(u32),
    #[error("missing top-form entry for monomial {0}")]
    MissingTopFormEntry(String),
    #[error("top-form entry {0} has degree {1}, expected {2}")]
    WrongTopFormDegree(String, u32, u32),
    #[error("canonical class has degree {0}, expected a degree-1 class")]
    WrongCanonicalDegree(u32),
    #[error("threefold base needs a c2 pairing for every generator")]
    MissingC2Pairings,
    #[error("c2 pairings are only defined for threefold bases")]
    UnexpectedC2Pairings,
    #[error("class {0} is not homogeneous of degree 1 in the generators")]
    NotLinearClass(String),
    #[error("expected {expected} classes, got {got}")]
    WrongClassCount { expected: usize, got: usize },
    #[error("parameter variable lists differ across classes")]
    ParamMismatch,
    #[error("class of degree {got} where total degree {expected} is required")]
    WrongTotalDegree { expected: u32, got: u32 },
    #[error("class is not homogeneous")]
    NotHomogeneous,
    #[error("no degree-2 class realizes the stored c2 pairings")]
    UnrealizableC2,
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
}

/// Validated description of a base surface or threefold.
#[derive(Clone, Debug)]
pub struct BaseRingSpec {
    pub dim: u32,
    pub generators: Vec<String>,
    /// Exponent tuple (aligned with `generators`) -> intersection number.
    pub top_form: Vec<(Vec<u32>, Rational)>,
    pub canonical: MultiPoly,
    /// `c2(base) . generator` for each generator, threefold bases only.
    pub c2_pairings: Option<Vec<Rational>>,
    pub chi_o: Rational,
}

#[derive(Clone, Debug)]
pub struct BaseRing {
    dim: u32,
    generators: Vec<String>,
    top_form: BTreeMap<Vec<u32>, Rational>,
    canonical: MultiPoly,
    c2_pairings: Option<Vec<Rational>>,
    chi_o: Rational,
}

/// All exponent tuples over `n` slots of total degree `d`.
fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>, slots: usize, left: u32) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(out, prefix, slots - 1, left - e);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut out, &mut Vec::new(), n, d);
    out
}

fn monomial_text(gens: &[String], exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (g, e) in gens.iter().zip(exps) {
        match e {
            0 => {}
            1 => parts.push(g.clone()),
            _ => parts.push(format!("{g}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".to_owned()
    } else {
        parts.join("*")
    }
}

impl BaseRing {
    /// Builds and validates a base ring from an explicit table.
    pub fn from_spec(spec: BaseRingSpec) -> Result<Self, ChowError> {
        if spec.dim != 2 && spec.dim != 3 {
            return Err(ChowError::BadDimension(spec.dim));
        }
        for (i, g) in spec.generators.iter().enumerate() {
            if spec.generators[..i].contains(g) {
                return Err(ChowError::DuplicateGenerator(g.clone()));
            }
        }
        let n = spec.generators.len();
        let mut top_form = BTreeMap::new();
        for (exps, value) in spec.top_form {
            let deg: u32 = exps.iter().sum();
            if exps.len() != n || deg != spec.dim {
                return Err(ChowError::WrongTopFormDegree(
                    monomial_text(&spec.generators, &exps),
                    deg,
                    spec.dim,
                ));
            }
            top_form.insert(exps, value);
        }
        for mono in monomials_of_degree(n, spec.dim) {
            if !top_form.contains_key(&mono) {
                return Err(ChowError::MissingTopFormEntry(monomial_text(
                    &spec.generators,
                    &mono,
                )));
            }
        }
        if spec.canonical.vars() != spec.generators {
            return Err(ChowError::NotLinearClass(spec.canonical.to_string()));
        }
        if !spec.canonical.is_zero()
            && spec
                .canonical
                .terms()
                .any(|(exps, _)| exps.iter().sum::<u32>() != 1)
        {
            return Err(ChowError::WrongCanonicalDegree(spec.canonical.total_degree()));
        }
        match (&spec.c2_pairings, spec.dim) {
            (Some(p), 3) if p.len() == n => {}
            (Some(_), 3) => return Err(ChowError::MissingC2Pairings),
            (None, 3) => return Err(ChowError::MissingC2Pairings),
            (Some(_), _) => return Err(ChowError::UnexpectedC2Pairings),
            (None, _) => {}
        }
        Ok(BaseRing {
            dim: spec.dim,
            generators: spec.generators,
            top_form,
            canonical: spec.canonical,
            c2_pairings: spec.c2_pairings,
            chi_o: spec.chi_o,
        })
    }

    /// P^3 blown up at a point: generators (h, e) with h^3 = e^3 = 1 and all
    /// mixed products zero; K = -4h + 2e, c2-pairings (6, 0), chi(O) = 1.
    pub fn blowup_p3_point() -> Self {
        let gens = ["h", "e"];
        let canonical = MultiPoly::from_terms(
            &gens,
            [
                (vec![1, 0], Rational::from_int(-4)),
                (vec![0, 1], Rational::from_int(2)),
            ],
        )
        .unwrap();
        BaseRing::from_spec(BaseRingSpec {
            dim: 3,
            generators: gens.iter().map(|s| s.to_string()).collect(),
            top_form: vec![
                (vec![3, 0], Rational::one()),
                (vec![2, 1], Rational::zero()),
                (vec![1, 2], Rational::zero()),
                (vec![0, 3], Rational::one()),
            ],
            canonical,
            c2_pairings: Some(vec![Rational::from_int(6), Rational::zero()]),
            chi_o: Rational::one(),
        })
        .expect("builtin table")
    }

    /// P^3 itself: generator h, h^3 = 1, K = -4h, c2 . h = 6, chi(O) = 1.
    pub fn p3() -> Self {
        let canonical =
            MultiPoly::from_terms(&["h"], [(vec![1], Rational::from_int(-4))]).unwrap();
        BaseRing::from_spec(BaseRingSpec {
            dim: 3,
            generators: vec!["h".into()],
            top_form: vec![(vec![3], Rational::one())],
            canonical,
            c2_pairings: Some(vec![Rational::from_int(6)]),
            chi_o: Rational::one(),
        })
        .expect("builtin table")
    }

    /// P^1 x P^1 with ruling classes (f1, f2): f1.f2 = 1, squares zero,
    /// K = -2f1 - 2f2, chi(O) = 1.
    pub fn p1xp1() -> Self {
        let gens = ["f1", "f2"];
        let canonical = MultiPoly::from_terms(
            &gens,
            [
                (vec![1, 0], Rational::from_int(-2)),
                (vec![0, 1], Rational::from_int(-2)),
            ],
        )
        .unwrap();
        BaseRing::from_spec(BaseRingSpec {
            dim: 2,
            generators: gens.iter().map(|s| s.to_string()).collect(),
            top_form: vec![
                (vec![2, 0], Rational::zero()),
                (vec![1, 1], Rational::one()),
                (vec![0, 2], Rational::zero()),
            ],
            canonical,
            c2_pairings: None,
            chi_o: Rational::one(),
        })
        .expect("builtin table")
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn canonical(&self) -> &MultiPoly {
        &self.canonical
    }

    pub fn chi_o(&self) -> &Rational {
        &self.chi_o
    }

    pub fn gen_vars(&self) -> Vec<&str> {
        self.generators.iter().map(|s| s.as_str()).collect()
    }

    pub fn generator(&self, idx: usize) -> MultiPoly {
        MultiPoly::var_by_index(self.generators.clone(), idx)
    }

    pub fn zero_class(&self) -> MultiPoly {
        MultiPoly::zero_owned(self.generators.clone())
    }

    pub fn top_form_value(&self, exps: &[u32]) -> Rational {
        self.top_form
            .get(exps)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Multilinear evaluation of `dim` degree-1 classes against the table.
    /// Degree-0 parts are rejected rather than dropped.
    pub fn intersect(&self, classes: &[MultiPoly]) -> Result<Rational, ChowError> {
        let sym: Vec<SymbolicClass> = classes
            .iter()
            .map(|c| SymbolicClass::from_class(self, c))
            .collect::<Result<_, _>>()?;
        let refs: Vec<&SymbolicClass> = sym.iter().collect();
        let out = self.intersect_symbolic(&refs)?;
        Ok(out.coefficient(&[]))
    }

    /// Same evaluation with coefficients polynomial in parameter variables.
    pub fn intersect_symbolic(
        &self,
        classes: &[&SymbolicClass],
    ) -> Result<MultiPoly, ChowError> {
        if classes.len() != self.dim as usize {
            return Err(ChowError::WrongClassCount {
                expected: self.dim as usize,
                got: classes.len(),
            });
        }
        let params = classes[0].params.clone();
        if classes.iter().any(|c| c.params != params) {
            return Err(ChowError::ParamMismatch);
        }
        let n = self.generators.len();
        let mut total = MultiPoly::zero_owned(params.clone());
        let mut picks = vec![0usize; classes.len()];
        loop {
            let mut exps = vec![0u32; n];
            for &g in picks.iter() {
                exps[g] += 1;
            }
            let weight = self.top_form_value(&exps);
            if !weight.is_zero() {
                let mut prod = MultiPoly::constant_owned(params.clone(), weight);
                for (cls, &g) in classes.iter().zip(&picks) {
                    prod = &prod * &cls.coeffs[g];
                }
                total = &total + &prod;
            }
            // advance the odometer over generator choices
            let mut i = 0;
            loop {
                if i == picks.len() {
                    return Ok(total);
                }
                picks[i] += 1;
                if picks[i] < n {
                    break;
                }
                picks[i] = 0;
                i += 1;
            }
        }
    }

    /// `c2(base) . class` straight from the stored pairings (threefolds).
    pub fn c2_dot(&self, class: &SymbolicClass) -> Result<MultiPoly, ChowError> {
        let pairings = self
            .c2_pairings
            .as_ref()
            .ok_or(ChowError::MissingC2Pairings)?;
        let mut total = MultiPoly::zero_owned(class.params.clone());
        for (coeff, pairing) in class.coeffs.iter().zip(pairings) {
            total = &total + &coeff.scale(pairing);
        }
        Ok(total)
    }

    /// Degree of `c2` for surface bases via Noether:
    /// `chi(O) = (K^2 + c2) / 12`.
    pub fn c2_degree(&self) -> Result<Rational, ChowError> {
        if self.dim != 2 {
            return Err(ChowError::BadDimension(self.dim));
        }
        let k2 = self.intersect(&[self.canonical.clone(), self.canonical.clone()])?;
        Ok(Rational::from_int(12) * &self.chi_o - k2)
    }

    /// A degree-2 class realizing the stored c2 pairings (threefolds) or the
    /// Noether degree (surfaces). Unique up to numerically trivial classes;
    /// undetermined coefficients are set to zero.
    pub fn c2_class(&self) -> Result<MultiPoly, ChowError> {
        let monos = monomials_of_degree(self.generators.len(), 2);
        match self.dim {
            3 => {
                let pairings = self
                    .c2_pairings
                    .as_ref()
                    .ok_or(ChowError::MissingC2Pairings)?;
                let mut sys = LinearSystem::new(monos.len());
                for (g, target) in pairings.iter().enumerate() {
                    let row = monos
                        .iter()
                        .map(|m| {
                            let mut e = m.clone();
                            e[g] += 1;
                            self.top_form_value(&e)
                        })
                        .collect();
                    sys.push(row, target.clone());
                }
                let coeffs = match sys.solve_unique() {
                    Ok(c) => c,
                    Err(crate::linalg::LinalgError::Underdetermined(free)) => {
                        let sf = sys.solved_form(&free).map_err(|_| ChowError::UnrealizableC2)?;
                        let mut c = vec![Rational::zero(); monos.len()];
                        for rel in sf.relations {
                            c[rel.pivot] = rel.constant;
                        }
                        c
                    }
                    Err(_) => return Err(ChowError::UnrealizableC2),
                };
                MultiPoly::from_terms(
                    &self.gen_vars(),
                    monos.into_iter().zip(coeffs),
                )
                .map_err(|_| ChowError::UnrealizableC2)
            }
            2 => {
                let target = self.c2_degree()?;
                // any degree-2 monomial of nonzero degree carries the value
                let mono = monos
                    .iter()
                    .find(|m| !self.top_form_value(m).is_zero())
                    .ok_or(ChowError::UnrealizableC2)?;
                let scale = &target / &self.top_form_value(mono);
                MultiPoly::from_terms(&self.gen_vars(), [(mono.clone(), scale)])
                    .map_err(|_| ChowError::UnrealizableC2)
            }
            d => Err(ChowError::BadDimension(d)),
        }
    }
}

/// Degree-1 base class whose generator coefficients may be polynomials in
/// extra parameter variables (e.g. `a*h - r*e`).
#[derive(Clone, Debug)]
pub struct SymbolicClass {
    pub params: Vec<String>,
    pub coeffs: Vec<MultiPoly>,
}

impl SymbolicClass {
    /// Numeric degree-1 class in the base generators. Degree-0 parts and
    /// higher-degree terms are rejected.
    pub fn from_class(ring: &BaseRing, class: &MultiPoly) -> Result<Self, ChowError> {
        if class.vars() != ring.generators() {
            return Err(ChowError::NotLinearClass(class.to_string()));
        }
        let n = ring.generators().len();
        let mut coeffs = vec![MultiPoly::zero_owned(Vec::new()); n];
        for (exps, c) in class.terms() {
            if exps.iter().sum::<u32>() != 1 {
                return Err(ChowError::NotLinearClass(class.to_string()));
            }
            let g = exps.iter().position(|e| *e == 1).unwrap();
            coeffs[g] = MultiPoly::constant_owned(Vec::new(), c.clone());
        }
        Ok(SymbolicClass { params: Vec::new(), coeffs })
    }

    /// Parametric class with one coefficient polynomial per generator, all
    /// over the same parameter variable list.
    pub fn parametric(
        ring: &BaseRing,
        params: Vec<String>,
        coeffs: Vec<MultiPoly>,
    ) -> Result<Self, ChowError> {
        if coeffs.len() != ring.generators().len() {
            return Err(ChowError::WrongClassCount {
                expected: ring.generators().len(),
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| c.vars() != params) {
            return Err(ChowError::ParamMismatch);
        }
        Ok(SymbolicClass { params, coeffs })
    }
}

/// Split rank-2 bundle data: `X = P(O(A) + O(B))` over a base ring.
#[derive(Clone, Debug)]
pub struct BundleData {
    base: BaseRing,
    a_class: MultiPoly,
    b_class: MultiPoly,
}

/// Element of the intersection ring of the bundle, as a polynomial in the
/// tautological class `L` and the pulled-back base generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XClass {
    pub poly: MultiPoly,
}

impl XClass {
    pub fn to_string(&self) -> String {
        self.poly.to_string()
    }
}

impl Add for &XClass {
    type Output = XClass;
    fn add(self, rhs: Self) -> XClass {
        XClass { poly: &self.poly + &rhs.poly }
    }
}

impl Sub for &XClass {
    type Output = XClass;
    fn sub(self, rhs: Self) -> XClass {
        XClass { poly: &self.poly - &rhs.poly }
    }
}

impl Mul for &XClass {
    type Output = XClass;
    fn mul(self, rhs: Self) -> XClass {
        XClass { poly: &self.poly * &rhs.poly }
    }
}

impl Neg for &XClass {
    type Output = XClass;
    fn neg(self) -> XClass {
        XClass { poly: self.poly.negate() }
    }
}

impl XClass {
    pub fn pow(&self, k: u32) -> XClass {
        XClass { poly: self.poly.pow(k) }
    }

    pub fn scale(&self, c: &Rational) -> XClass {
        XClass { poly: self.poly.scale(c) }
    }
}

impl BundleData {
    pub fn new(base: BaseRing, a_class: MultiPoly, b_class: MultiPoly) -> Result<Self, ChowError> {
        for cls in [&a_class, &b_class] {
            // reuse the linearity validation
            SymbolicClass::from_class(&base, cls)?;
        }
        Ok(BundleData { base, a_class, b_class })
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn a_class(&self) -> &MultiPoly {
        &self.a_class
    }

    pub fn b_class(&self) -> &MultiPoly {
        &self.b_class
    }

    /// dim(base) + 1.
    pub fn total_dim(&self) -> u32 {
        self.base.dim + 1
    }

    fn xvars(&self) -> Vec<String> {
        let mut vars = vec![TAUT_VAR.to_owned()];
        vars.extend(self.base.generators.iter().cloned());
        vars
    }

    pub fn zero(&self) -> XClass {
        XClass { poly: MultiPoly::zero_owned(self.xvars()) }
    }

    pub fn constant(&self, c: Rational) -> XClass {
        XClass { poly: MultiPoly::constant_owned(self.xvars(), c) }
    }

    /// The tautological class L.
    pub fn taut(&self) -> XClass {
        XClass { poly: MultiPoly::var_by_index(self.xvars(), 0) }
    }

    /// Pullback of a base class.
    pub fn pullback(&self, base_class: &MultiPoly) -> XClass {
        assert_eq!(base_class.vars(), self.base.generators(), "pullback source ring");
        XClass {
            poly: base_class.prepend_vars(&[TAUT_VAR.to_owned()]),
        }
    }

    /// Extracts the pure-pullback part of an L-degree-0 class.
    pub fn as_base_class(&self, c: &XClass) -> Option<MultiPoly> {
        if c.poly.degree_in(0) > 0 {
            return None;
        }
        let groups = c.poly.group_by_prefix(1);
        Some(
            groups
                .get(&vec![0u32])
                .cloned()
                .unwrap_or_else(|| self.base.zero_class()),
        )
    }

    /// Chern-Wu normal form: rewrites `L^2 -> L.(A+B) - A.B` until every term
    /// has L-degree <= 1, then truncates base degrees above dim(base).
    pub fn normalize(&self, c: &XClass) -> XClass {
        let dim = self.base.dim;
        let sum_ab = &self.a_class + &self.b_class;
        let prod_ab = &self.a_class * &self.b_class;
        let max_l = c.poly.degree_in(0);
        // ell^k = s_k * L + t_k with s, t base classes
        let mut s_tab: Vec<MultiPoly> = Vec::with_capacity(max_l as usize + 1);
        let mut t_tab: Vec<MultiPoly> = Vec::with_capacity(max_l as usize + 1);
        s_tab.push(self.base.zero_class());
        t_tab.push(MultiPoly::constant_owned(self.base.generators.to_vec(), Rational::one()));
        if max_l >= 1 {
            s_tab.push(MultiPoly::constant_owned(
                self.base.generators.to_vec(),
                Rational::one(),
            ));
            t_tab.push(self.base.zero_class());
        }
        for _ in 2..=max_l {
            let s = s_tab.last().unwrap();
            let t = t_tab.last().unwrap();
            let s_next = &(s * &sum_ab) + t;
            let t_next = (&(s * &prod_ab)).negate();
            s_tab.push(s_next);
            t_tab.push(t_next);
        }
        let mut collected: Vec<(Vec<u32>, Rational)> = Vec::new();
        for (exps, coeff) in c.poly.terms() {
            let k = exps[0] as usize;
            let base_mono = MultiPoly::from_terms(
                &self.base.gen_vars(),
                [(exps[1..].to_vec(), coeff.clone())],
            )
            .unwrap();
            for (l_exp, part) in [(1u32, &base_mono * &s_tab[k]), (0u32, &base_mono * &t_tab[k])] {
                for (be, bc) in part.terms() {
                    if be.iter().sum::<u32>() <= dim {
                        let mut full = vec![l_exp];
                        full.extend_from_slice(be);
                        collected.push((full, bc.clone()));
                    }
                }
            }
        }
        let xvars = self.xvars();
        let var_refs: Vec<&str> = xvars.iter().map(|s| s.as_str()).collect();
        XClass {
            poly: MultiPoly::from_terms(&var_refs, collected).unwrap(),
        }
    }

    /// Pushforward evaluation of a homogeneous class of top degree
    /// dim(base) + 1: normalize, send `L . (top base monomial)` to its table
    /// value and pure pullbacks to zero.
    pub fn top_eval(&self, c: &XClass) -> Result<Rational, ChowError> {
        let expected = self.total_dim();
        if c.poly.is_zero() {
            return Ok(Rational::zero());
        }
        for (exps, _) in c.poly.terms() {
            let deg: u32 = exps.iter().sum();
            if deg != expected {
                return Err(ChowError::WrongTotalDegree { expected, got: deg });
            }
        }
        let normal = self.normalize(c);
        let mut total = Rational::zero();
        for (exps, coeff) in normal.poly.terms() {
            if exps[0] == 1 {
                total += &(coeff * &self.base.top_form_value(&exps[1..]));
            }
        }
        Ok(total)
    }
}

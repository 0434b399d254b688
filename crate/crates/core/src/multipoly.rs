//! Sparse multivariate polynomials over `Rational` with named variables.
//!
//! Variable lists are explicit and ordered; all binary operations require
//! both operands to share the same list. Terms are kept in graded-lex order
//! (total degree first, then lexicographic with earlier variables ranked
//! higher), which fixes both the division algorithm and the text rendering.
//!
//! Rendering contract: terms in descending graded-lex order, coefficients
//! as `n` or `n/d`, e.g. `28/3*x^3 - 22*x^2*y + ... - 1`.

use crate::rational::Rational;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VarMismatch { left: Vec<String>, right: Vec<String> },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("substitution needs {expected} images, got {got}")]
    MissingImage { expected: usize, got: usize },
    #[error("image of variable {var:?} has degree {degree} > 1")]
    NonAffineImage { var: String, degree: u32 },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division left a nonzero remainder: {remainder}")]
    NonzeroRemainder { remainder: Box<MultiPoly> },
    #[error("expected a polynomial of degree <= 1, found degree {0}")]
    NotAffine(u32),
    #[error("exponent tuple of length {got}, expected {expected}")]
    BadExponentLength { expected: usize, got: usize },
    #[error("term uses a variable outside the requested prefix")]
    OutsidePrefix,
}

/// Exponent tuple ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
struct Monomial(Vec<u32>);

impl Monomial {
    fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_owned(vars: Vec<String>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = MultiPoly::zero(vars);
        p.insert(vec![0; p.vars.len()], c);
        p
    }

    pub fn constant_owned(vars: Vec<String>, c: Rational) -> Self {
        let n = vars.len();
        let mut p = MultiPoly { vars, terms: BTreeMap::new() };
        p.insert(vec![0; n], c);
        p
    }

    pub fn var(vars: &[&str], name: &str) -> Result<Self, PolyError> {
        let mut p = MultiPoly::zero(vars);
        let i = p
            .var_index(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_owned()))?;
        let mut exps = vec![0; p.vars.len()];
        exps[i] = 1;
        p.insert(exps, Rational::one());
        Ok(p)
    }

    pub fn var_by_index(vars: Vec<String>, idx: usize) -> Self {
        let n = vars.len();
        assert!(idx < n);
        let mut p = MultiPoly { vars, terms: BTreeMap::new() };
        let mut exps = vec![0; n];
        exps[idx] = 1;
        p.insert(exps, Rational::one());
        p
    }

    pub fn from_terms<I>(vars: &[&str], terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = MultiPoly::zero(vars);
        let n = p.vars.len();
        for (exps, c) in terms {
            if exps.len() != n {
                return Err(PolyError::BadExponentLength { expected: n, got: exps.len() });
            }
            p.insert_add(exps, c);
        }
        Ok(p)
    }

    fn insert(&mut self, exps: Vec<u32>, c: Rational) {
        if !c.is_zero() {
            self.terms.insert(Monomial(exps), c);
        }
    }

    fn insert_add(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = Monomial(exps);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&[u32], &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (m.0.as_slice(), c))
    }

    fn same_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VarMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.0.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.0.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_vars(other)?;
        let mut out = MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let exps: Vec<u32> = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                out.insert_add(exps, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn negate(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = MultiPoly::constant_owned(self.vars.clone(), Rational::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Sum of exactly the degree-`d` terms.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms whose exponent sum over the first `k` variables equals `d`.
    /// Lets frame-parity checks ignore trailing parameter variables.
    pub fn prefix_degree_part(&self, k: usize, d: u32) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[..k].iter().sum::<u32>() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval_at(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "evaluation point arity");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (e, p) in m.0.iter().zip(point) {
                for _ in 0..*e {
                    term *= p;
                }
            }
            total += &term;
        }
        total
    }

    /// Exact composition with per-variable affine images. `images[i]` is the
    /// image of variable `i`; all images share one target variable list and
    /// must have total degree <= 1.
    pub fn substitute_affine(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if images.len() != self.vars.len() {
            return Err(PolyError::MissingImage {
                expected: self.vars.len(),
                got: images.len(),
            });
        }
        let target = match images.first() {
            Some(im) => im.vars.clone(),
            None => Vec::new(),
        };
        for (i, im) in images.iter().enumerate() {
            if im.vars != target {
                return Err(PolyError::VarMismatch {
                    left: target.clone(),
                    right: im.vars.clone(),
                });
            }
            if im.total_degree() > 1 {
                return Err(PolyError::NonAffineImage {
                    var: self.vars[i].clone(),
                    degree: im.total_degree(),
                });
            }
        }
        let mut out = MultiPoly::zero_owned(target.clone());
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant_owned(target.clone(), c.clone());
            for (i, e) in m.0.iter().enumerate() {
                for _ in 0..*e {
                    term = &term * &images[i];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Exact quotient `self / d` via graded-lex leading-term division.
    /// Any stuck leading term means `d` is not a factor.
    pub fn divide_exact(&self, d: &Self) -> Result<Self, PolyError> {
        self.same_vars(d)?;
        let (dm, dc) = match d.leading() {
            Some((m, c)) => (m.to_vec(), c.clone()),
            None => return Err(PolyError::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero_owned(self.vars.clone());
        while let Some((rm, rc)) = rem.leading() {
            let mut diff = Vec::with_capacity(rm.len());
            for (a, b) in rm.iter().zip(&dm) {
                if a < b {
                    return Err(PolyError::NonzeroRemainder { remainder: Box::new(rem.clone()) });
                }
                diff.push(a - b);
            }
            let mut t = MultiPoly::zero_owned(self.vars.clone());
            t.insert(diff, rc / &dc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// Split off the first `k` variables: maps each prefix exponent tuple to
    /// its coefficient polynomial over the remaining variables.
    pub fn group_by_prefix(&self, k: usize) -> BTreeMap<Vec<u32>, MultiPoly> {
        let suffix: Vec<String> = self.vars[k..].to_vec();
        let mut out: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = m.0[..k].to_vec();
            let rest = m.0[k..].to_vec();
            out.entry(key)
                .or_insert_with(|| MultiPoly::zero_owned(suffix.clone()))
                .insert_add(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Same polynomial over `pre ++ vars`.
    pub fn prepend_vars(&self, pre: &[String]) -> MultiPoly {
        let mut vars = pre.to_vec();
        vars.extend(self.vars.iter().cloned());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u32; pre.len()];
                exps.extend(&m.0);
                (Monomial(exps), c.clone())
            })
            .collect();
        MultiPoly { vars, terms }
    }

    /// Same polynomial over `vars ++ extra`.
    pub fn append_vars(&self, extra: &[String]) -> MultiPoly {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().cloned());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.0.clone();
                exps.extend(std::iter::repeat(0u32).take(extra.len()));
                (Monomial(exps), c.clone())
            })
            .collect();
        MultiPoly { vars, terms }
    }

    /// Drop trailing variables; every term must be supported on the prefix.
    pub fn restrict_to_prefix(&self, k: usize) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero_owned(self.vars[..k].to_vec());
        for (m, c) in &self.terms {
            if m.0[k..].iter().any(|e| *e != 0) {
                return Err(PolyError::OutsidePrefix);
            }
            out.insert(m.0[..k].to_vec(), c.clone());
        }
        Ok(out)
    }

    /// Rename variables in place (same arity, same order).
    pub fn rename_vars(&self, new_vars: Vec<String>) -> MultiPoly {
        assert_eq!(new_vars.len(), self.vars.len());
        MultiPoly { vars: new_vars, terms: self.terms.clone() }
    }

    /// Positive gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> Rational {
        self.terms
            .values()
            .fold(Rational::zero(), |acc, c| acc.gcd(c))
    }

    /// Writes `self = c * q` with `q` primitive: integer coprime
    /// coefficients and positive leading (graded-lex) coefficient.
    pub fn primitive_normalized(&self) -> (Rational, MultiPoly) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let mut c = self.content();
        if self.leading().unwrap().1.is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c.recip()))
    }

    /// Reads a degree-<=1 polynomial as `(coefficients per variable, constant)`.
    pub fn affine_row(&self) -> Result<(Vec<Rational>, Rational), PolyError> {
        if self.total_degree() > 1 {
            return Err(PolyError::NotAffine(self.total_degree()));
        }
        let mut coeffs = vec![Rational::zero(); self.vars.len()];
        let mut konst = Rational::zero();
        for (m, c) in &self.terms {
            match m.0.iter().position(|e| *e == 1) {
                Some(i) => coeffs[i] = c.clone(),
                None => konst = c.clone(),
            }
        }
        Ok((coeffs, konst))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: Self) -> MultiPoly {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: Self) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: Self) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.negate()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = c.abs();
            let is_const = m.0.iter().all(|e| *e == 0);
            if is_const {
                write!(f, "{mag}")?;
            } else {
                let mut wrote_coeff = false;
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                    wrote_coeff = true;
                }
                for (i, e) in m.0.iter().enumerate() {
                    if *e == 0 {
                        continue;
                    }
                    if wrote_coeff {
                        f.write_str("*")?;
                    }
                    wrote_coeff = true;
                    f.write_str(&self.vars[i])?;
                    if *e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.vars.join(","), self)
    }
}

//! Homogeneous forms over an exact field.
//!
//! Forms are stored sparsely (monomial -> nonzero coefficient). Matrix code
//! works with dense coefficient vectors indexed by [`monomial_basis`] order,
//! which is graded and starts with `x0^d`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Projection, ProjectivePoint};
use crate::scalar::{FieldSpec, Scalar};

/// Largest modulus for which exhaustive `P^1(F_p)` root scans are allowed.
pub const MAX_SCAN_PRIME: u32 = 1 << 20;

/// Exponent vector of a monomial in `N + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

// Graded, then lexicographic with higher powers of x0 first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All `C(d + N, N)` monomials of degree `d` in `N + 1` variables.
pub fn monomial_basis(n: usize, d: u32) -> Vec<Monomial> {
    fn fill(vars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if vars == 1 {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            fill(vars - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(n + 1, d, &mut Vec::with_capacity(n + 1), &mut out);
    out
}

/// Powers `x_i^k` for `k <= d` of every coordinate.
fn power_table(coords: &[Scalar], d: u32) -> Vec<Vec<Scalar>> {
    coords
        .iter()
        .map(|c| {
            let mut row = Vec::with_capacity(d as usize + 1);
            row.push(c.field().one());
            for k in 1..=d as usize {
                let next = &row[k - 1] * c;
                row.push(next);
            }
            row
        })
        .collect()
}

/// Values of every basis monomial at the given coordinates.
pub fn evaluate_monomials(basis: &[Monomial], coords: &[Scalar]) -> Vec<Scalar> {
    let d = basis.first().map(Monomial::degree).unwrap_or(0);
    let powers = power_table(coords, d);
    basis
        .iter()
        .map(|m| {
            let mut acc = coords[0].field().one();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    acc = &acc * &powers[i][e as usize];
                }
            }
            acc
        })
        .collect()
}

/// A homogeneous polynomial of fixed degree on `P^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousForm {
    field: FieldSpec,
    dim: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl HomogeneousForm {
    pub fn zero(field: FieldSpec, dim: usize, degree: u32) -> Self {
        HomogeneousForm {
            field,
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, dim: usize) -> Self {
        let field = c.field();
        let mut f = Self::zero(field, dim, 0);
        f.add_term(Monomial(vec![0; dim + 1]), c);
        f
    }

    pub fn from_terms(
        field: FieldSpec,
        dim: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Result<Self> {
        let mut f = Self::zero(field, dim, degree);
        for (exp, c) in terms {
            if exp.len() != dim + 1 {
                return Err(Error::DimensionMismatch {
                    expected: dim + 1,
                    got: exp.len(),
                });
            }
            let m = Monomial(exp);
            if m.degree() != degree {
                return Err(Error::InvalidArgument(format!(
                    "monomial {m} has degree {} in a degree-{degree} form",
                    m.degree()
                )));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.to_string(),
                    right: c.field().to_string(),
                });
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(field: FieldSpec, coeffs: &[Scalar]) -> Self {
        let dim = coeffs.len() - 1;
        let mut f = Self::zero(field, dim, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; dim + 1];
            e[i] = 1;
            f.add_term(Monomial(e), c.clone());
        }
        f
    }

    pub fn variable(field: FieldSpec, dim: usize, i: usize) -> Self {
        let mut coeffs = vec![field.zero(); dim + 1];
        coeffs[i] = field.one();
        Self::linear(field, &coeffs)
    }

    /// Form whose coefficients are `coeffs` in [`monomial_basis`] order.
    pub fn from_dense(field: FieldSpec, dim: usize, degree: u32, coeffs: &[Scalar]) -> Self {
        let basis = monomial_basis(dim, degree);
        assert_eq!(basis.len(), coeffs.len(), "dense vector length");
        let mut f = Self::zero(field, dim, degree);
        for (m, c) in basis.into_iter().zip(coeffs) {
            f.add_term(m, c.clone());
        }
        f
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        monomial_basis(self.dim, self.degree)
            .iter()
            .map(|m| {
                self.terms
                    .get(m)
                    .cloned()
                    .unwrap_or_else(|| self.field.zero())
            })
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "adding forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() {
            other.clone()
        } else {
            self.clone()
        };
        let rhs = if self.is_zero() {
            &self.terms
        } else {
            &other.terms
        };
        for (m, c) in rhs {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field, self.dim, self.degree);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.field, self.dim, self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.field.one(), self.dim);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Value at raw coordinates (no normalisation).
    pub fn evaluate_coords(&self, coords: &[Scalar]) -> Scalar {
        let powers = power_table(coords, self.degree);
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Value at the normalised representative of `p`.
    pub fn evaluate(&self, p: &ProjectivePoint) -> Result<Scalar> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        if p.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: p.field().to_string(),
            });
        }
        Ok(self.evaluate_coords(p.coords()))
    }

    pub fn vanishes_at(&self, p: &ProjectivePoint) -> Result<bool> {
        Ok(self.evaluate(p)?.is_zero())
    }

    /// Formal partial derivative in `x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.field, self.dim, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c * &self.field.from_i64(e as i64));
        }
        out
    }

    pub fn partial_derivatives(&self) -> Vec<Self> {
        (0..=self.dim).map(|i| self.partial(i)).collect()
    }

    /// Matrix of second partials evaluated at `p`.
    pub fn hessian_at(&self, p: &ProjectivePoint) -> Result<Vec<Vec<Scalar>>> {
        self.partial_derivatives()
            .iter()
            .map(|g| {
                g.partial_derivatives()
                    .iter()
                    .map(|h| h.evaluate(p))
                    .collect::<Result<Vec<_>>>()
            })
            .collect()
    }

    /// Replace `x_i` by `images[i]`; all images share a degree and ambient space.
    pub fn substitute(&self, images: &[HomogeneousForm]) -> Result<Self> {
        if images.len() != self.dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.dim + 1,
                got: images.len(),
            });
        }
        let target_dim = images[0].dim;
        let e = images[0].degree;
        for img in images {
            if img.dim != target_dim || img.degree != e || img.field != self.field {
                return Err(Error::InvalidArgument(
                    "substitution images must share field, dimension and degree".into(),
                ));
            }
        }
        // powers[i][k] = images[i]^k
        let mut powers: Vec<Vec<HomogeneousForm>> = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            let max = self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0);
            let mut row = vec![Self::constant(self.field.one(), target_dim)];
            for k in 1..=max as usize {
                let next = row[k - 1].mul(img)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Self::zero(self.field, target_dim, self.degree * e);
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone(), target_dim);
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize])?;
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Pull back along the linear map `P^r ⇢ P^N` sending `y` to `sum y_j points[j]`.
    pub fn restrict_to_span(&self, points: &[ProjectivePoint]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        for p in points {
            if p.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: p.dim(),
                });
            }
        }
        let images: Vec<HomogeneousForm> = (0..=self.dim)
            .map(|i| {
                let coeffs: Vec<Scalar> = points.iter().map(|p| p.coords()[i].clone()).collect();
                Self::linear(self.field, &coeffs)
            })
            .collect();
        self.substitute(&images)
    }

    /// The binary form `F(s a + t b)`.
    pub fn restrict_to_line(&self, a: &ProjectivePoint, b: &ProjectivePoint) -> Result<Self> {
        if a == b {
            return Err(Error::EqualPoints);
        }
        self.restrict_to_span(&[a.clone(), b.clone()])
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = match c {
                Scalar::Rational(q) if q.is_negative() => (true, c.neg()),
                _ => (false, c.clone()),
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = m.degree() == 0;
            if mag.is_one() && !is_const {
                write!(f, "{m}")?;
            } else if is_const {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// All roots in `P^1(F_p)` of a nonzero binary form, by exhaustive scan.
pub fn univariate_roots(binform: &HomogeneousForm) -> Result<Vec<ProjectivePoint>> {
    if binform.dim != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: binform.dim,
        });
    }
    let p = match binform.field {
        FieldSpec::Prime(p) if p <= MAX_SCAN_PRIME => p,
        FieldSpec::Prime(p) => return Err(Error::FieldTooLarge(format!("p = {p} > 2^20"))),
        FieldSpec::Rationals => {
            return Err(Error::FieldTooLarge("rationals cannot be scanned".into()))
        }
    };
    if binform.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = binform.degree as usize;
    // coefficient of s^(d-j) t^j
    let mut coeffs = vec![0u64; d + 1];
    for (m, c) in &binform.terms {
        coeffs[m.0[1] as usize] = c.residue().expect("prime field") as u64;
    }
    let field = binform.field;
    let mut roots = Vec::new();
    if coeffs[d] == 0 {
        // (0:1): only the t^d coefficient survives
        roots.push(ProjectivePoint::new(vec![field.zero(), field.one()])?);
    }
    let pm = p as u64;
    for t in 0..pm {
        // Horner in t on the dehomogenised polynomial sum c_j t^j at s = 1
        let v = coeffs.iter().rev().fold(0u64, |acc, &c| (acc * t + c) % pm);
        if v == 0 {
            roots.push(ProjectivePoint::new(vec![
                field.one(),
                field.from_i64(t as i64),
            ])?);
        }
    }
    Ok(roots)
}

/// The cone over a plane curve: pull `plane_form` back along `proj`.
pub fn cone_pullback(plane_form: &HomogeneousForm, proj: &Projection) -> Result<HomogeneousForm> {
    if plane_form.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: plane_form.dim,
        });
    }
    let images: Vec<HomogeneousForm> = proj
        .forms()
        .iter()
        .map(|l| HomogeneousForm::linear(plane_form.field, l))
        .collect();
    plane_form.substitute(&images)
}

impl Serialize for HomogeneousForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

/// Serialized form: `{"dim", "degree", "terms": [{"exp", "coeff"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FormFile {
    pub dim: usize,
    pub degree: u32,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermFile {
    pub exp: Vec<u32>,
    pub coeff: String,
}

impl HomogeneousForm {
    pub fn to_file(&self) -> FormFile {
        FormFile {
            dim: self.dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermFile {
                    exp: m.0.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_file(field: FieldSpec, file: &FormFile) -> Result<Self> {
        let terms = file
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), field.parse_scalar(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(field, file.dim, file.degree, terms)
    }
}

/// Parse expressions such as `"x0^2*x1 - 3*x2*x3*x4"` or `"1/2*x0 + x1"`.
pub fn parse_form(field: FieldSpec, dim: usize, text: &str) -> Result<HomogeneousForm> {
    let err = |msg: String| Error::Parse(msg);
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(err("empty expression".into()));
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    for (i, ch) in cleaned.char_indices() {
        if (ch == '+' || ch == '-') && !(i > 0 && cleaned[..i].ends_with('^')) {
            if !current.is_empty() {
                terms.push((negative, std::mem::take(&mut current)));
            } else if i > 0 {
                return Err(err(format!("dangling operator in {text:?}")));
            }
            negative = ch == '-';
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(err(format!("trailing operator in {text:?}")));
    }
    terms.push((negative, current));

    let mut parsed: Vec<(Vec<u32>, Scalar)> = Vec::new();
    for (neg, term) in terms {
        let mut coeff = field.one();
        let mut exps = vec![0u32; dim + 1];
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(err(format!("empty factor in {term:?}")));
            }
            if let Some(var) = factor.strip_prefix('x') {
                let (idx, pow) = match var.split_once('^') {
                    Some((i, e)) => (i, e),
                    None => (var, "1"),
                };
                let idx: usize = idx
                    .parse()
                    .map_err(|_| err(format!("bad variable {factor:?}")))?;
                let pow: u32 = pow
                    .parse()
                    .map_err(|_| err(format!("bad exponent {factor:?}")))?;
                if idx > dim {
                    return Err(err(format!("variable x{idx} outside P^{dim}")));
                }
                exps[idx] += pow;
            } else {
                coeff = &coeff * &field.parse_scalar(factor)?;
            }
        }
        if neg {
            coeff = coeff.neg();
        }
        parsed.push((exps, coeff));
    }
    let degree = parsed[0].0.iter().sum();
    if parsed.iter().any(|(e, _)| e.iter().sum::<u32>() != degree) {
        return Err(err(format!("{text:?} is not homogeneous")));
    }
    HomogeneousForm::from_terms(field, dim, degree, parsed)
}

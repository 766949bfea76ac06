//! Projective points, point sets, linear flats and linear projections.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RowBasis};
use crate::scalar::{FieldSpec, Scalar, SeededRng};

/// Default cap on the number of subsets any exhaustive search may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Retries allowed when drawing a generic projection.
pub const PROJECTION_RETRIES: usize = 100;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub(crate) fn dot(form: &[Scalar], coords: &[Scalar]) -> Scalar {
    let mut acc = coords[0].field().zero();
    for (a, b) in form.iter().zip(coords) {
        if !a.is_zero() && !b.is_zero() {
            acc = &acc + &(a * b);
        }
    }
    acc
}

/// A point of `P^N`, stored with its first nonzero coordinate equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: coords.len(),
            });
        }
        let field = coords[0].field();
        if let Some(bad) = coords.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: bad.field().to_string(),
            });
        }
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(Error::ZeroPoint)?
            .inv()?;
        let coords = coords.iter().map(|c| c * &lead).collect();
        Ok(ProjectivePoint { coords })
    }

    pub fn from_i64s(field: FieldSpec, coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn random(field: FieldSpec, dim: usize, rng: &mut SeededRng) -> Self {
        loop {
            let coords: Vec<Scalar> = (0..=dim).map(|_| field.random(rng)).collect();
            if let Ok(p) = Self::new(coords) {
                return p;
            }
        }
    }

    /// Ambient dimension `N` of `P^N`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }

    /// Representative of `a * self + b * other`, or `ZeroPoint`.
    pub fn combine(&self, a: &Scalar, other: &ProjectivePoint, b: &Scalar) -> Result<Self> {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| &(x * a) + &(y * b))
                .collect(),
        )
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(|c| c.to_string()))
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coords.iter().join(":"))
    }
}

/// An ordered set of distinct labelled points in a common `P^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: FieldSpec,
    dim: usize,
    points: Vec<ProjectivePoint>,
    labels: Vec<String>,
}

impl PointSet {
    pub fn new(
        field: FieldSpec,
        dim: usize,
        points: Vec<ProjectivePoint>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        let mut seen_labels = HashSet::new();
        for (p, l) in points.iter().zip(&labels) {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if p.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.to_string(),
                    right: p.field().to_string(),
                });
            }
            if !seen.insert(p.clone()) {
                return Err(Error::DuplicatePoint(l.clone()));
            }
            if !seen_labels.insert(l.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate label {l}")));
            }
        }
        Ok(PointSet {
            field,
            dim,
            points,
            labels,
        })
    }

    /// Points labelled `p0, p1, ...`.
    pub fn from_points(field: FieldSpec, dim: usize, points: Vec<ProjectivePoint>) -> Result<Self> {
        let labels = (0..points.len()).map(|i| format!("p{i}")).collect();
        Self::new(field, dim, points, labels)
    }

    pub fn empty(field: FieldSpec, dim: usize) -> Self {
        PointSet {
            field,
            dim,
            points: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ProjectivePoint)> {
        self.labels.iter().map(String::as_str).zip(&self.points)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn get(&self, label: &str) -> Result<&ProjectivePoint> {
        Ok(&self.points[self.index_of(label)?])
    }

    pub fn contains_point(&self, p: &ProjectivePoint) -> bool {
        self.points.contains(p)
    }

    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            field: self.field,
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    /// The set with the labelled point removed.
    pub fn without(&self, label: &str) -> Result<PointSet> {
        let idx = self.index_of(label)?;
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != idx).collect();
        Ok(self.subset(&keep))
    }

    /// Append a point; fails on duplicates.
    pub fn push(&mut self, label: impl Into<String>, p: ProjectivePoint) -> Result<()> {
        let label = label.into();
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        if self.points.contains(&p) {
            return Err(Error::DuplicatePoint(label));
        }
        if self.labels.contains(&label) {
            return Err(Error::InvalidArgument(format!("duplicate label {label}")));
        }
        self.points.push(p);
        self.labels.push(label);
        Ok(())
    }

    /// Union with disjoint labels and points.
    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        let mut out = self.clone();
        for (l, p) in other.iter() {
            out.push(l, p.clone())?;
        }
        Ok(out)
    }

    pub(crate) fn coordinate_rows(&self) -> Vec<Vec<Scalar>> {
        self.points.iter().map(|p| p.coords.to_vec()).collect()
    }
}

impl PointSet {
    /// Reduce a set over `Q` into `F_p`. Fails if a denominator vanishes or
    /// two points collide mod `p`.
    pub fn reduce_mod(&self, p: u32) -> Result<PointSet> {
        let field = FieldSpec::prime(p)?;
        let points = self
            .points
            .iter()
            .map(|q| {
                ProjectivePoint::new(
                    q.coords
                        .iter()
                        .map(|c| c.reduce_mod(p))
                        .collect::<Result<_>>()?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(field, self.dim, points, self.labels.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PointSetFile::from_set(self))?)
    }

    pub fn from_json(text: &str) -> Result<PointSet> {
        let file: PointSetFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_set()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSetHeader {
    pub field: FieldSpec,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointRecord {
    pub label: String,
    pub coords: Vec<String>,
}

/// Point-set file: `{"header": {"field", "dim"}, "points": [{"label", "coords"}]}`
/// with coordinates as strings (`"3/7"` over `Q`, residues over `F_p`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSetFile {
    pub header: PointSetHeader,
    pub points: Vec<PointRecord>,
}

impl PointSetFile {
    pub fn from_set(set: &PointSet) -> Self {
        PointSetFile {
            header: PointSetHeader {
                field: set.field,
                dim: set.dim,
            },
            points: set
                .iter()
                .map(|(l, p)| PointRecord {
                    label: l.to_string(),
                    coords: p.coords.iter().map(|c| c.to_string()).collect(),
                })
                .collect(),
        }
    }

    /// Parse and validate; duplicate points are reported as invariant
    /// violations naming the second occurrence.
    pub fn to_set(&self) -> Result<PointSet> {
        let field = self.header.field;
        let mut set = PointSet::empty(field, self.header.dim);
        for rec in &self.points {
            if rec.coords.len() != self.header.dim + 1 {
                return Err(Error::Parse(format!(
                    "point {} has {} coordinates, expected {}",
                    rec.label,
                    rec.coords.len(),
                    self.header.dim + 1
                )));
            }
            let coords = rec
                .coords
                .iter()
                .map(|c| field.parse_scalar(c))
                .collect::<Result<Vec<_>>>()?;
            let p = ProjectivePoint::new(coords).map_err(|e| Error::InvariantViolation {
                label: rec.label.clone(),
                reason: e.to_string(),
            })?;
            set.push(rec.label.clone(), p).map_err(|e| match e {
                Error::DuplicatePoint(l) => Error::InvariantViolation {
                    label: l,
                    reason: "duplicate point".into(),
                },
                other => other,
            })?;
        }
        Ok(set)
    }
}

/// A `k`-dimensional linear subspace of `P^N`, cut out by `N - k` forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFlat {
    ambient_dim: usize,
    dim: usize,
    cutting_forms: Vec<Vec<Scalar>>,
}

impl LinearFlat {
    pub fn new(
        field: FieldSpec,
        ambient_dim: usize,
        cutting_forms: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        if cutting_forms.is_empty() || cutting_forms.len() > ambient_dim {
            return Err(Error::InvalidArgument(format!(
                "{} cutting forms in P^{ambient_dim}",
                cutting_forms.len()
            )));
        }
        for f in &cutting_forms {
            if f.len() != ambient_dim + 1 {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim + 1,
                    got: f.len(),
                });
            }
        }
        if linalg::rank(field, &cutting_forms) != cutting_forms.len() {
            return Err(Error::InvalidArgument(
                "cutting forms are linearly dependent".into(),
            ));
        }
        Ok(LinearFlat {
            ambient_dim,
            dim: ambient_dim - cutting_forms.len(),
            cutting_forms,
        })
    }

    /// The flat spanned by the given points (must not span all of `P^N`).
    pub fn spanned_by(points: &PointSet) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = points.dim();
        let forms = linalg::null_space(points.field(), &points.coordinate_rows(), n + 1);
        Self::new(points.field(), n, forms)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `k + 1` independent points spanning the flat.
    pub fn spanning_points(&self) -> Vec<ProjectivePoint> {
        let field = self.cutting_forms[0][0].field();
        linalg::null_space(field, &self.cutting_forms, self.ambient_dim + 1)
            .into_iter()
            .map(|v| ProjectivePoint::new(v).expect("kernel vectors are nonzero"))
            .collect()
    }

    pub fn cutting_forms(&self) -> &[Vec<Scalar>] {
        &self.cutting_forms
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.cutting_forms
            .iter()
            .all(|f| dot(f, p.coords()).is_zero())
    }
}

/// Linear projection `P^N ⇢ P^2` from an `(N-3)`-flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    source_dim: usize,
    center: LinearFlat,
    forms: Vec<Vec<Scalar>>,
}

impl Projection {
    /// Projection given by three independent linear forms on `P^N`.
    pub fn from_forms(
        field: FieldSpec,
        source_dim: usize,
        forms: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        if forms.len() != 3 || source_dim < 3 {
            return Err(Error::InvalidArgument(
                "a projection to P^2 needs three forms on P^N, N >= 3".into(),
            ));
        }
        let center = LinearFlat::new(field, source_dim, forms.clone())?;
        Ok(Projection {
            source_dim,
            center,
            forms,
        })
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn center(&self) -> &LinearFlat {
        &self.center
    }

    pub fn forms(&self) -> &[Vec<Scalar>] {
        &self.forms
    }

    pub fn project(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        if p.dim() != self.source_dim {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim,
                got: p.dim(),
            });
        }
        let image: Vec<Scalar> = self.forms.iter().map(|f| dot(f, p.coords())).collect();
        match ProjectivePoint::new(image) {
            Err(Error::ZeroPoint) => Err(Error::PointOnCenter),
            other => other,
        }
    }

    /// Image of a whole set, keeping labels; fails if two images coincide.
    pub fn project_set(&self, points: &PointSet) -> Result<PointSet> {
        let images = points
            .points()
            .iter()
            .map(|p| self.project(p))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(points.field(), 2, images, points.labels().to_vec())
    }

    /// Whether the center avoids every point and all images are distinct.
    pub fn is_valid_for(&self, avoid: &PointSet) -> bool {
        self.project_set(avoid).is_ok()
    }
}

/// Rank of the coordinate matrix; the set lies in a `k`-flat iff this is `<= k + 1`.
pub fn span_rank(points: &PointSet) -> Result<usize> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(linalg::rank(points.field(), &points.coordinate_rows()))
}

/// Largest incidence of the set with a single `k`-flat.
#[derive(Clone, Debug)]
pub struct FlatIncidence {
    pub count: usize,
    pub indices: Vec<usize>,
    pub witness: PointSet,
}

fn for_each_flat(
    points: &PointSet,
    k: usize,
    budget: u64,
    mut visit: impl FnMut(Vec<usize>) -> bool,
) -> Result<()> {
    let s = points.len();
    let needed = binomial(s, k + 1);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let rows = points.coordinate_rows();
    let cols = points.dim() + 1;
    for subset in (0..s).combinations(k + 1) {
        let mut basis = RowBasis::new(points.field(), cols);
        if !subset.iter().all(|&i| basis.insert(&rows[i])) {
            continue;
        }
        let incident: Vec<usize> = (0..s).filter(|&i| basis.contains(&rows[i])).collect();
        if !visit(incident) {
            break;
        }
    }
    Ok(())
}

/// Exact maximum number of points in a single `k`-flat, `1 <= k <= N - 1`.
pub fn max_points_in_flat(points: &PointSet, k: usize, budget: u64) -> Result<FlatIncidence> {
    let n = points.dim();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "flat dimension {k} outside 1..{n}"
        )));
    }
    if points.len() < k + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} points for {k}-flats",
            k + 1
        )));
    }
    let s = points.len();
    let mut best: Vec<usize> = Vec::new();
    for_each_flat(points, k, budget, |incident| {
        if incident.len() > best.len() {
            best = incident;
        }
        best.len() < s
    })?;
    if best.is_empty() {
        // every (k+1)-subset is dependent: the set spans less than a k-flat
        best = (0..s).collect();
    }
    Ok(FlatIncidence {
        count: best.len(),
        witness: points.subset(&best),
        indices: best,
    })
}

/// All distinct `k`-flats spanned by points of the set that contain at least
/// `min_count` of them, as index lists.
pub fn flats_with_at_least(
    points: &PointSet,
    k: usize,
    min_count: usize,
    budget: u64,
) -> Result<Vec<Vec<usize>>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    for_each_flat(points, k, budget, |incident| {
        if incident.len() >= min_count && !found.contains(&incident) {
            found.push(incident);
        }
        true
    })?;
    Ok(found)
}

/// Random projection `P^N ⇢ P^2` (`N` in {3, 4}) whose center misses `avoid`
/// and which separates the points of `avoid`.
pub fn random_projection(
    field: FieldSpec,
    n: usize,
    avoid: &PointSet,
    rng: &mut SeededRng,
) -> Result<Projection> {
    if !(3..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "projection source must be P^3 or P^4, got P^{n}"
        )));
    }
    if !avoid.is_empty() && avoid.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: avoid.dim(),
        });
    }
    for _ in 0..PROJECTION_RETRIES {
        let forms: Vec<Vec<Scalar>> = (0..3)
            .map(|_| (0..=n).map(|_| field.random(rng)).collect())
            .collect();
        let Ok(proj) = Projection::from_forms(field, n, forms) else {
            continue;
        };
        if proj.is_valid_for(avoid) {
            return Ok(proj);
        }
    }
    Err(Error::GenericityFailure(format!(
        "no valid projection after {PROJECTION_RETRIES} draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::seeded_rng;

    fn f() -> FieldSpec {
        FieldSpec::default_prime()
    }

    fn pt(c: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_i64s(f(), c).unwrap()
    }

    #[test]
    fn normalisation() {
        let a = pt(&[0, 2, 4]);
        let b = pt(&[0, 1, 2]);
        assert_eq!(a, b);
        assert!(a.coords()[1].is_one());
        assert!(matches!(
            ProjectivePoint::from_i64s(f(), &[0, 0, 0]),
            Err(Error::ZeroPoint)
        ));
    }

    #[test]
    fn span_ranks() {
        let line = PointSet::from_points(
            f(),
            4,
            vec![
                pt(&[1, 0, 0, 0, 0]),
                pt(&[0, 1, 0, 0, 0]),
                pt(&[1, 1, 0, 0, 0]),
            ],
        )
        .unwrap();
        assert_eq!(span_rank(&line).unwrap(), 2);
        let frame = PointSet::from_points(
            f(),
            3,
            vec![
                pt(&[1, 0, 0, 0]),
                pt(&[0, 1, 0, 0]),
                pt(&[0, 0, 1, 0]),
                pt(&[0, 0, 0, 1]),
            ],
        )
        .unwrap();
        assert_eq!(span_rank(&frame).unwrap(), 4);
        assert!(matches!(
            span_rank(&PointSet::empty(f(), 2)),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn duplicates_rejected() {
        let r = PointSet::from_points(f(), 2, vec![pt(&[1, 2, 3]), pt(&[2, 4, 6])]);
        assert!(matches!(r, Err(Error::DuplicatePoint(_))));
    }

    #[test]
    fn collinear_triple_found() {
        let s = PointSet::from_points(
            f(),
            2,
            vec![
                pt(&[1, 0, 0]),
                pt(&[1, 1, 0]),
                pt(&[1, 2, 0]),
                pt(&[0, 0, 1]),
                pt(&[1, 5, 7]),
            ],
        )
        .unwrap();
        let inc = max_points_in_flat(&s, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(inc.count, 3);
        assert_eq!(inc.indices, vec![0, 1, 2]);
    }

    #[test]
    fn general_position_pairs() {
        let mut rng = seeded_rng(11);
        let pts: Vec<_> = (0..8)
            .map(|_| ProjectivePoint::random(f(), 3, &mut rng))
            .collect();
        let s = PointSet::from_points(f(), 3, pts).unwrap();
        assert_eq!(max_points_in_flat(&s, 1, DEFAULT_BUDGET).unwrap().count, 2);
        assert_eq!(max_points_in_flat(&s, 2, DEFAULT_BUDGET).unwrap().count, 3);
    }

    #[test]
    fn budget_is_enforced() {
        let mut rng = seeded_rng(2);
        let pts: Vec<_> = (0..30)
            .map(|_| ProjectivePoint::random(f(), 4, &mut rng))
            .collect();
        let s = PointSet::from_points(f(), 4, pts).unwrap();
        assert!(matches!(
            max_points_in_flat(&s, 3, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn projection_fibres() {
        let mut rng = seeded_rng(5);
        let avoid = PointSet::empty(f(), 3);
        let proj = random_projection(f(), 3, &avoid, &mut rng).unwrap();
        // center of a P^3 -> P^2 projection is a point
        let center = linalg::null_space(f(), proj.forms(), 4);
        assert_eq!(center.len(), 1);
        let c = ProjectivePoint::new(center[0].clone()).unwrap();
        assert!(matches!(proj.project(&c), Err(Error::PointOnCenter)));
        let x = ProjectivePoint::random(f(), 3, &mut rng);
        let y = x.combine(&f().from_i64(3), &c, &f().from_i64(7)).unwrap();
        assert_eq!(proj.project(&x).unwrap(), proj.project(&y).unwrap());
    }

    #[test]
    fn projection_retries_past_bad_center() {
        let mut rng = seeded_rng(9);
        let pts: Vec<_> = (0..34)
            .map(|_| ProjectivePoint::random(f(), 4, &mut rng))
            .collect();
        let s = PointSet::from_points(f(), 4, pts).unwrap();
        let proj = random_projection(f(), 4, &s, &mut rng).unwrap();
        let images = proj.project_set(&s).unwrap();
        assert_eq!(images.len(), 34);

        // a projection whose center contains a listed point is rejected
        let forms = vec![
            vec![f().one(), f().zero(), f().zero(), f().zero(), f().zero()],
            vec![f().zero(), f().one(), f().zero(), f().zero(), f().zero()],
            vec![f().zero(), f().zero(), f().one(), f().zero(), f().zero()],
        ];
        let bad = Projection::from_forms(f(), 4, forms).unwrap();
        let on_center = PointSet::from_points(f(), 4, vec![pt(&[0, 0, 0, 1, 0])]).unwrap();
        assert!(!bad.is_valid_for(&on_center));
    }

    #[test]
    fn flat_spanned_by_points() {
        let s = PointSet::from_points(
            f(),
            4,
            vec![
                pt(&[0, 0, 1, 0, 0]),
                pt(&[0, 0, 0, 1, 0]),
                pt(&[0, 0, 0, 0, 1]),
            ],
        )
        .unwrap();
        let plane = LinearFlat::spanned_by(&s).unwrap();
        assert_eq!(plane.dim(), 2);
        assert!(plane.contains(&pt(&[0, 0, 3, 4, 5])));
        assert!(!plane.contains(&pt(&[1, 0, 3, 4, 5])));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(9, 4), 126);
        assert_eq!(binomial(13, 4), 715);
        assert_eq!(binomial(35, 5), 324_632);
        assert_eq!(binomial(3, 5), 0);
    }
}

//! Explicit separating hypersurfaces: sweeping, cones with two prescribed
//! points, disjoint line pairs, and the separator pipeline.

use rand::Rng;
use serde::Serialize;

use crate::config;
use crate::error::{Error, Result};
use crate::geom::{self, PointSet, ProjectivePoint};
use crate::linalg::{self, RowBasis};
use crate::nodes::NodalInstance;
use crate::normality;
use crate::poly::{cone_pullback, univariate_roots, HomogeneousForm, MAX_SCAN_PRIME};
use crate::scalar::{seeded_rng, FieldSpec, Scalar, SeededRng};

/// Random planes tried by [`two_point_cone`] before giving up.
pub const CONE_RETRIES: usize = 50;

/// Draws allowed when choosing a hyperplane with incidence constraints.
pub const HYPERPLANE_RETRIES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparatorMethod {
    DirectLinearAlgebra,
    ProjectionBeseCone,
    SweepComposite,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvaluationEntry {
    pub label: String,
    pub point: ProjectivePoint,
    pub value: Scalar,
}

/// A form vanishing on a required set and not at a target point, with the
/// evaluations that prove it.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatorCertificate {
    pub target: String,
    pub target_point: ProjectivePoint,
    pub target_value: Scalar,
    pub degree: u32,
    pub method: SeparatorMethod,
    pub form: HomogeneousForm,
    pub evaluation_log: Vec<EvaluationEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SeparatorCertificate {
    /// Evaluates `form` everywhere and fails unless it separates.
    pub fn new(
        required: &PointSet,
        target: &str,
        target_point: &ProjectivePoint,
        form: HomogeneousForm,
        method: SeparatorMethod,
    ) -> Result<Self> {
        let mut evaluation_log = Vec::with_capacity(required.len());
        for (label, q) in required.iter() {
            let value = form.evaluate(q)?;
            if !value.is_zero() {
                return Err(Error::InvariantViolation {
                    label: label.to_string(),
                    reason: format!("{method:?} form does not vanish here"),
                });
            }
            evaluation_log.push(EvaluationEntry {
                label: label.to_string(),
                point: q.clone(),
                value,
            });
        }
        let target_value = form.evaluate(target_point)?;
        if target_value.is_zero() {
            return Err(Error::InvariantViolation {
                label: target.to_string(),
                reason: format!("{method:?} form vanishes at the target"),
            });
        }
        Ok(SeparatorCertificate {
            target: target.to_string(),
            target_point: target_point.clone(),
            target_value,
            degree: form.degree(),
            method,
            form,
            evaluation_log,
            seed: None,
            notes: Vec::new(),
        })
    }

    /// Re-evaluate the stored form at every logged point.
    pub fn verify(&self) -> bool {
        let ok = |p: &ProjectivePoint, zero: bool| {
            self.form
                .evaluate(p)
                .map(|v| v.is_zero() == zero)
                .unwrap_or(false)
        };
        self.evaluation_log.iter().all(|e| ok(&e.point, true)) && ok(&self.target_point, false)
    }
}

fn check_zero(form: &HomogeneousForm, q: &ProjectivePoint, what: &str) -> Result<()> {
    if !form.evaluate(q)?.is_zero() {
        return Err(Error::PreconditionViolation(format!(
            "{what} does not vanish at {q}"
        )));
    }
    Ok(())
}

fn check_nonzero(form: &HomogeneousForm, q: &ProjectivePoint, what: &str) -> Result<Scalar> {
    let v = form.evaluate(q)?;
    if v.is_zero() {
        return Err(Error::PreconditionViolation(format!(
            "{what} vanishes at {q}"
        )));
    }
    Ok(v)
}

/// Combine `D0` with the `D_q` so the result also vanishes on `Delta`:
/// `G = D0 - sum D0(q)/D_q(q) * D_q`, hence `G(p) = D0(p)`.
pub fn sweep(
    d0: &HomogeneousForm,
    dq_list: &[(ProjectivePoint, HomogeneousForm)],
    p: &ProjectivePoint,
    lambda: &PointSet,
    delta: &PointSet,
) -> Result<HomogeneousForm> {
    for q in delta.points() {
        if lambda.contains_point(q) {
            return Err(Error::PreconditionViolation(format!(
                "{q} lies in both sets"
            )));
        }
    }
    if lambda.contains_point(p) || delta.contains_point(p) {
        return Err(Error::PreconditionViolation(
            "target lies in the sets".into(),
        ));
    }
    if dq_list.len() != delta.len() || !dq_list.iter().all(|(q, _)| delta.contains_point(q)) {
        return Err(Error::PreconditionViolation(
            "need exactly one auxiliary form per point of Delta".into(),
        ));
    }
    for q in lambda.points() {
        check_zero(d0, q, "D0")?;
    }
    let d0p = check_nonzero(d0, p, "D0")?;

    let mut g = d0.clone();
    for (q, dq) in dq_list {
        if dq.degree() != d0.degree() || dq.dim() != d0.dim() {
            return Err(Error::PreconditionViolation(format!(
                "auxiliary form for {q} has degree {} (expected {})",
                dq.degree(),
                d0.degree()
            )));
        }
        for r in lambda
            .points()
            .iter()
            .chain(delta.points())
            .chain(std::iter::once(p))
        {
            if r != q {
                check_zero(dq, r, &format!("D_q for {q}"))?;
            }
        }
        let dqq = check_nonzero(dq, q, &format!("D_q for {q}"))?;
        let c = d0.evaluate(q)?.try_div(&dqq)?.neg();
        g = g.add(&dq.scale(&c))?;
    }

    for q in lambda.points().iter().chain(delta.points()) {
        if !g.evaluate(q)?.is_zero() {
            return Err(Error::InvariantViolation {
                label: q.to_string(),
                reason: "swept form does not vanish".into(),
            });
        }
    }
    if g.evaluate(p)? != d0p {
        return Err(Error::InvariantViolation {
            label: p.to_string(),
            reason: "swept form changed value at the target".into(),
        });
    }
    Ok(g)
}

/// A hyperplane of `P^4` with the chart that drops one coordinate.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    form: Vec<Scalar>,
    pivot: usize,
}

impl Hyperplane {
    pub fn new(form: Vec<Scalar>) -> Result<Self> {
        let pivot = form
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroForm)?;
        Ok(Hyperplane { form, pivot })
    }

    /// `x_i = 0`.
    pub fn coordinate(field: FieldSpec, dim: usize, i: usize) -> Self {
        let mut form = vec![field.zero(); dim + 1];
        form[i] = field.one();
        Hyperplane { form, pivot: i }
    }

    pub fn form(&self) -> &[Scalar] {
        &self.form
    }

    pub fn ambient_dim(&self) -> usize {
        self.form.len() - 1
    }

    pub fn linear_form(&self) -> HomogeneousForm {
        HomogeneousForm::linear(self.form[0].field(), &self.form)
    }

    pub fn value(&self, p: &ProjectivePoint) -> Scalar {
        geom::dot(&self.form, p.coords())
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.value(p).is_zero()
    }

    /// Coordinates of a point of the hyperplane in its chart `P^{N-1}`.
    pub fn to_chart(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        if !self.contains(p) {
            return Err(Error::PreconditionViolation(format!(
                "{p} is off the hyperplane"
            )));
        }
        ProjectivePoint::new(
            p.coords()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != self.pivot)
                .map(|(_, c)| c.clone())
                .collect(),
        )
    }

    pub fn from_chart(&self, y: &ProjectivePoint) -> Result<ProjectivePoint> {
        let mut coords: Vec<Scalar> = y.coords().to_vec();
        let mut acc = y.field().zero();
        let mut k = 0;
        for (i, c) in self.form.iter().enumerate() {
            if i != self.pivot {
                acc = &acc + &(c * &coords[k]);
                k += 1;
            }
        }
        let xp = acc.try_div(&self.form[self.pivot])?.neg();
        coords.insert(self.pivot, xp);
        ProjectivePoint::new(coords)
    }

    pub fn chart_set(&self, points: &PointSet) -> Result<PointSet> {
        let pts = points
            .points()
            .iter()
            .map(|p| self.to_chart(p))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(
            points.field(),
            points.dim() - 1,
            pts,
            points.labels().to_vec(),
        )
    }

    /// Cone over a chart form `X` with vertex `v` off the hyperplane: `X`
    /// composed with the projection `x -> h(v) x - h(x) v` into the chart.
    pub fn cone(&self, x: &HomogeneousForm, v: &ProjectivePoint) -> Result<HomogeneousForm> {
        let hv = self.value(v);
        if hv.is_zero() {
            return Err(Error::PreconditionViolation(
                "cone vertex lies on the hyperplane".into(),
            ));
        }
        if x.dim() + 1 != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim() - 1,
                got: x.dim(),
            });
        }
        let field = hv.field();
        let images: Vec<HomogeneousForm> = (0..=self.ambient_dim())
            .filter(|&i| i != self.pivot)
            .map(|i| {
                let coeffs: Vec<Scalar> = self
                    .form
                    .iter()
                    .enumerate()
                    .map(|(j, hj)| {
                        let diag = if i == j { hv.clone() } else { field.zero() };
                        &diag - &(hj * &v.coords()[i])
                    })
                    .collect();
                HomogeneousForm::linear(field, &coeffs)
            })
            .collect();
        x.substitute(&images)
    }
}

/// A random hyperplane through `through` missing every point of `avoid`.
pub fn hyperplane_through(
    field: FieldSpec,
    dim: usize,
    through: &[&ProjectivePoint],
    avoid: &[&ProjectivePoint],
    rng: &mut SeededRng,
) -> Result<Hyperplane> {
    let rows: Vec<Vec<Scalar>> = through.iter().map(|p| p.coords().to_vec()).collect();
    let kernel = if rows.is_empty() {
        (0..=dim)
            .map(|i| {
                let mut e = vec![field.zero(); dim + 1];
                e[i] = field.one();
                e
            })
            .collect()
    } else {
        linalg::null_space(field, &rows, dim + 1)
    };
    if kernel.is_empty() {
        return Err(Error::GenericityFailure(
            "points span the whole space".into(),
        ));
    }
    for _ in 0..HYPERPLANE_RETRIES {
        let mut form = vec![field.zero(); dim + 1];
        for v in &kernel {
            let c = field.random(rng);
            for (f, x) in form.iter_mut().zip(v) {
                *f = &*f + &(&c * x);
            }
        }
        let Ok(h) = Hyperplane::new(form) else {
            continue;
        };
        if avoid.iter().all(|q| !h.contains(q)) {
            return Ok(h);
        }
    }
    Err(Error::GenericityFailure(format!(
        "no hyperplane through {} points avoiding {} after {HYPERPLANE_RETRIES} draws",
        through.len(),
        avoid.len()
    )))
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoPointCone {
    pub form: HomogeneousForm,
    pub vertex: ProjectivePoint,
    pub p_prime: ProjectivePoint,
    pub q_prime: ProjectivePoint,
    pub planes_tried: usize,
}

/// The cone over `{X = 0} ⊂ H` whose vertex is chosen so that it contains
/// `p` and `q`: a plane through `p, q` meets `H` in a line, which meets `X`
/// in points `p', q'`, and the vertex is `pp' ∩ qq'`.
pub fn two_point_cone(
    x: &HomogeneousForm,
    h: &Hyperplane,
    o: &ProjectivePoint,
    p: &ProjectivePoint,
    q: &ProjectivePoint,
    rng: &mut SeededRng,
) -> Result<TwoPointCone> {
    let field = x.field();
    match field {
        FieldSpec::Prime(m) if m <= MAX_SCAN_PRIME => {}
        _ => {
            return Err(Error::FieldTooLarge(format!(
                "{field} cannot be scanned for roots"
            )))
        }
    }
    if h.ambient_dim() != 4 || x.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: x.dim(),
        });
    }
    if x.degree() < 2 {
        return Err(Error::PreconditionViolation(
            "cone base needs degree >= 2".into(),
        ));
    }
    let o_chart = h.to_chart(o)?;
    check_nonzero(x, &o_chart, "X")?;
    if h.contains(p) || h.contains(q) {
        return Err(Error::PreconditionViolation(
            "p and q must lie off the hyperplane".into(),
        ));
    }
    if p == q {
        return Err(Error::EqualPoints);
    }
    let (hp, hq) = (h.value(p), h.value(q));

    for attempt in 1..=CONE_RETRIES {
        let r = ProjectivePoint::random(field, 4, rng);
        let hr = h.value(&r);
        // two points of the plane (p, q, r) on H
        let Ok(a) = q.combine(&hp, p, &hq.neg()) else {
            continue;
        };
        let Ok(b) = r.combine(&hp, p, &hr.neg()) else {
            continue;
        };
        if a == b {
            continue;
        }
        let (ac, bc) = (h.to_chart(&a)?, h.to_chart(&b)?);
        let restricted = x.restrict_to_line(&ac, &bc)?;
        let params = if restricted.is_zero() {
            vec![
                ProjectivePoint::new(vec![field.one(), field.zero()])?,
                ProjectivePoint::new(vec![field.zero(), field.one()])?,
            ]
        } else {
            univariate_roots(&restricted)?
        };
        if params.len() < 2 {
            continue;
        }
        // chart points are rescaled, so the roots only make sense in the chart
        let on_line =
            |t: &ProjectivePoint| h.from_chart(&ac.combine(&t.coords()[0], &bc, &t.coords()[1])?);
        let p1 = on_line(&params[0])?;
        let q1 = on_line(&params[1])?;
        let rows = vec![
            p.coords().to_vec(),
            p1.coords().to_vec(),
            q.coords().to_vec(),
            q1.coords().to_vec(),
        ];
        let kernel = linalg::null_space(field, &linalg_transpose(&rows), 4);
        let Some(k) = kernel.first() else { continue };
        let Ok(v) = p.combine(&k[0], &p1, &k[1]) else {
            continue;
        };
        let form = h.cone(x, &v)?;
        for (pt, what) in [(p, "p"), (q, "q")] {
            if !form.evaluate(pt)?.is_zero() {
                return Err(Error::InvariantViolation {
                    label: what.into(),
                    reason: "cone misses a prescribed point".into(),
                });
            }
        }
        if form.evaluate(o)?.is_zero() {
            continue;
        }
        return Ok(TwoPointCone {
            form,
            vertex: v,
            p_prime: p1,
            q_prime: q1,
            planes_tried: attempt,
        });
    }
    Err(Error::GenericityFailure(format!(
        "no plane met the base in two rational points after {CONE_RETRIES} tries"
    )))
}

fn linalg_transpose(rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let cols = rows[0].len();
    (0..cols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Mutually disjoint pairs of points whose joining lines miss `p`, at least
/// `min(r - m, floor(r/2))` of them when no `m + 1` points are collinear with
/// `p`. Points are grouped by the line through `p` and paired greedily across
/// the two largest remaining groups.
pub fn pair_lines(
    points: &PointSet,
    p: &ProjectivePoint,
    m: usize,
) -> Result<Vec<(String, String)>> {
    if points.contains_point(p) {
        return Err(Error::PreconditionViolation("p belongs to the set".into()));
    }
    let field = points.field();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, x) in points.points().iter().enumerate() {
        let found = classes.iter().position(|cls| {
            let rep = &points.points()[cls[0]];
            let mut basis = RowBasis::new(field, points.dim() + 1);
            basis.insert(p.coords());
            basis.insert(rep.coords());
            basis.contains(x.coords())
        });
        match found {
            Some(c) => classes[c].push(i),
            None => classes.push(vec![i]),
        }
    }
    if let Some(big) = classes.iter().find(|c| c.len() > m) {
        return Err(Error::PreconditionViolation(format!(
            "{} points collinear with p (allowed {m})",
            big.len()
        )));
    }
    let mut pairs = Vec::new();
    loop {
        classes.retain(|c| !c.is_empty());
        if classes.len() < 2 {
            break;
        }
        classes.sort_by_key(|c| std::cmp::Reverse(c.len()));
        let a = classes[0].pop().unwrap();
        let b = classes[1].pop().unwrap();
        let (pa, pb) = (&points.points()[a], &points.points()[b]);
        let rank = linalg::rank(
            field,
            &[
                p.coords().to_vec(),
                pa.coords().to_vec(),
                pb.coords().to_vec(),
            ],
        );
        if rank != 3 {
            return Err(Error::InvariantViolation {
                label: points.labels()[a].clone(),
                reason: "paired line passes through p".into(),
            });
        }
        pairs.push((points.labels()[a].clone(), points.labels()[b].clone()));
    }
    Ok(pairs)
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub seed: u64,
    pub budget: u64,
    /// Also run the geometric methods after a direct success.
    pub cross_check: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            seed: 0,
            budget: 20_000,
            cross_check: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MethodAttempt {
    pub method: SeparatorMethod,
    pub succeeded: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineOutcome {
    pub certificate: SeparatorCertificate,
    pub attempts: Vec<MethodAttempt>,
}

/// Degree `2n - 5` separator for one node: direct linear algebra first (it
/// decides separability), then the geometric constructions as independent
/// certificates when `cross_check` is set. If the direct method fails, a
/// geometric success would contradict it and is reported as an invariant
/// violation.
pub fn separator_pipeline(
    inst: &NodalInstance,
    label: &str,
    opts: PipelineOptions,
) -> Result<PipelineOutcome> {
    if inst.n < 3 {
        return Err(Error::PreconditionViolation("n must be >= 3".into()));
    }
    let d = 2 * inst.n - 5;
    let nodes = &inst.nodes;
    let target = nodes.get(label)?.clone();
    let others = nodes.without(label)?;
    let mut attempts = Vec::new();

    let direct = normality::separating_form(nodes, label, d).and_then(|f| {
        SeparatorCertificate::new(
            &others,
            label,
            &target,
            f,
            SeparatorMethod::DirectLinearAlgebra,
        )
    });
    let geometric = |attempts: &mut Vec<MethodAttempt>| -> Result<Option<SeparatorCertificate>> {
        let mut first = None;
        let b = projection_bese_cone(nodes, label, d, opts.seed, opts.budget);
        let c = sweep_composite(nodes, label, d, opts.seed);
        for (method, res) in [
            (SeparatorMethod::ProjectionBeseCone, b),
            (SeparatorMethod::SweepComposite, c),
        ] {
            match res {
                Ok(Ok(cert)) => {
                    attempts.push(MethodAttempt {
                        method,
                        succeeded: true,
                        detail: "verified by evaluation".into(),
                    });
                    first.get_or_insert(cert);
                }
                Ok(Err(reason)) => attempts.push(MethodAttempt {
                    method,
                    succeeded: false,
                    detail: reason,
                }),
                Err(e) => attempts.push(MethodAttempt {
                    method,
                    succeeded: false,
                    detail: e.to_string(),
                }),
            }
        }
        Ok(first)
    };

    match direct {
        Ok(cert) => {
            attempts.push(MethodAttempt {
                method: SeparatorMethod::DirectLinearAlgebra,
                succeeded: true,
                detail: format!("degree {d} null-space solution"),
            });
            if opts.cross_check && inst.field.is_prime_field() {
                geometric(&mut attempts)?;
            }
            Ok(PipelineOutcome {
                certificate: cert,
                attempts,
            })
        }
        Err(Error::NotSeparable(l)) => {
            if opts.cross_check && inst.field.is_prime_field() {
                if let Some(cert) = geometric(&mut attempts)? {
                    return Err(Error::InvariantViolation {
                        label: l,
                        reason: format!("{:?} separated a dependent point", cert.method),
                    });
                }
            }
            Err(Error::NotSeparable(l))
        }
        Err(e) => Err(e),
    }
}

type MethodResult = Result<std::result::Result<SeparatorCertificate, String>>;

/// Project to a plane, check the incidence criterion, separate there and
/// pull the plane curve back as a cone over the projection center.
pub fn projection_bese_cone(
    nodes: &PointSet,
    label: &str,
    d: u32,
    seed: u64,
    budget: u64,
) -> MethodResult {
    if d < 3 {
        return Ok(Err(format!("degree {d} below the criterion's range")));
    }
    let mut rng = seeded_rng(seed);
    let proj = geom::random_projection(nodes.field(), nodes.dim(), nodes, &mut rng)?;
    let image = proj.project_set(nodes)?;
    let others = image.without(label)?;
    let report = config::bese_condition(&others, d, budget, rng.gen())?;
    if !report.holds {
        let first_bad = report.rows.iter().find(|r| !r.ok);
        return Ok(Err(match first_bad {
            Some(r) => format!(
                "criterion fails after projection: {} points on a degree-{} curve (threshold {})",
                r.measured, r.k, r.threshold
            ),
            None => format!(
                "{} points exceed the size bound {}",
                report.s, report.size_bound
            ),
        }));
    }
    let plane_form = match config::bese_separator(&image, label, d, Some(&report)) {
        Ok(f) => f,
        Err(Error::NotSeparable(_)) => {
            return Ok(Err(
                "criterion held on sampled bounds but the plane separator does not exist".into(),
            ))
        }
        Err(e) => return Err(e),
    };
    let form = cone_pullback(&plane_form, &proj)?;
    for c in proj.center().spanning_points() {
        if !form.evaluate(&c)?.is_zero() {
            return Err(Error::InvariantViolation {
                label: label.into(),
                reason: "pulled-back form misses the projection center".into(),
            });
        }
    }
    let mut cert = SeparatorCertificate::new(
        &nodes.without(label)?,
        label,
        nodes.get(label)?,
        form,
        SeparatorMethod::ProjectionBeseCone,
    )?;
    cert.seed = Some(seed);
    if !report.exact {
        cert.notes.push("incidence maxima partly sampled".into());
    }
    Ok(Ok(cert))
}

fn best_hyperplane_through(
    nodes: &PointSet,
    target: usize,
    rng: &mut SeededRng,
) -> Result<Hyperplane> {
    let field = nodes.field();
    let pts = nodes.points();
    let rows = nodes.coordinate_rows();
    if geom::span_rank(nodes)? <= 4 {
        let refs: Vec<&ProjectivePoint> = pts.iter().collect();
        return hyperplane_through(field, 4, &refs, &[], rng);
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    let others: Vec<usize> = (0..pts.len()).filter(|&i| i != target).collect();
    for combo in itertools::Itertools::combinations(others.iter().copied(), 3) {
        let mut basis = RowBasis::new(field, 5);
        basis.insert(&rows[target]);
        if !combo.iter().all(|&i| basis.insert(&rows[i])) {
            continue;
        }
        let count = rows.iter().filter(|r| basis.contains(r)).count();
        if best.as_ref().is_none_or(|(c, _)| count > *c) {
            best = Some((count, combo));
        }
    }
    let (_, combo) =
        best.ok_or_else(|| Error::GenericityFailure("no spanning quadruple".into()))?;
    let through: Vec<&ProjectivePoint> = std::iter::once(&pts[target])
        .chain(combo.iter().map(|&i| &pts[i]))
        .collect();
    hyperplane_through(field, 4, &through, &[], rng)
}

/// Split by the hyperplane through the target meeting the most nodes, build
/// a separator on the hyperplane by linear algebra, then extend it to `P^4`
/// through the (at most four) outside nodes.
pub fn sweep_composite(nodes: &PointSet, label: &str, d: u32, seed: u64) -> MethodResult {
    if nodes.dim() != 4 {
        return Ok(Err("composite construction works in P^4".into()));
    }
    let mut rng = seeded_rng(seed);
    let field = nodes.field();
    let idx = nodes.index_of(label)?;
    let p = nodes.points()[idx].clone();
    let h = best_hyperplane_through(nodes, idx, &mut rng)?;

    let inside: Vec<usize> = (0..nodes.len())
        .filter(|&i| h.contains(&nodes.points()[i]))
        .collect();
    let outside: Vec<usize> = (0..nodes.len())
        .filter(|&i| !h.contains(&nodes.points()[i]))
        .collect();
    if outside.len() > 4 {
        return Ok(Err(format!(
            "{} nodes off the best hyperplane (at most 4 handled)",
            outside.len()
        )));
    }
    let chart = h.chart_set(&nodes.subset(&inside))?;
    let x = match normality::separating_form(&chart, label, d) {
        Ok(x) => x,
        Err(Error::NotSeparable(_)) => {
            return Ok(Err("target not separable inside the hyperplane".into()))
        }
        Err(e) => return Err(e),
    };
    let outside_set = nodes.subset(&outside);
    let outs: Vec<&ProjectivePoint> = outside_set.points().iter().collect();
    let form = match outs.len() {
        0 => {
            let v = loop {
                let v = ProjectivePoint::random(field, 4, &mut rng);
                if !h.contains(&v) {
                    break v;
                }
            };
            h.cone(&x, &v)?
        }
        1 => h.cone(&x, outs[0])?,
        _ => {
            if d < 2 {
                return Ok(Err("degree too small for the two-point cone".into()));
            }
            let cone = match two_point_cone(&x, &h, &p, outs[0], outs[1], &mut rng) {
                Ok(c) => c,
                Err(Error::GenericityFailure(m)) => return Ok(Err(m)),
                Err(e) => return Err(e),
            };
            let lambda = nodes
                .subset(&inside)
                .without(label)?
                .union(&outside_set.subset(&[0, 1]))?;
            let delta = outside_set.subset(&(2..outs.len()).collect::<Vec<_>>());
            let dq = sweep_auxiliaries(&h, &p, &outside_set, d, &mut rng)?;
            sweep(&cone.form, &dq, &p, &lambda, &delta)?
        }
    };
    let mut cert = SeparatorCertificate::new(
        &nodes.without(label)?,
        label,
        &p,
        form,
        SeparatorMethod::SweepComposite,
    )?;
    cert.seed = Some(seed);
    cert.notes.push(format!(
        "{} nodes on the splitting hyperplane, {} off it",
        inside.len(),
        outside.len()
    ));
    Ok(Ok(cert))
}

/// `D_q = H * H' * H_q^(d-2)` for each outside point `q` beyond the first
/// two: `H` carries the hyperplane part and the target, `H'` passes through
/// the other outside points but not `q`, and `H_q` is nonzero at `q`.
fn sweep_auxiliaries(
    h: &Hyperplane,
    p: &ProjectivePoint,
    outside: &PointSet,
    d: u32,
    rng: &mut SeededRng,
) -> Result<Vec<(ProjectivePoint, HomogeneousForm)>> {
    let field = outside.field();
    let mut out = Vec::new();
    for (i, q) in outside.points().iter().enumerate().skip(2) {
        let through: Vec<&ProjectivePoint> = outside
            .points()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, r)| r)
            .collect();
        let h1 = hyperplane_through(field, 4, &through, &[q], rng)?;
        let h2 = hyperplane_through(field, 4, &[], &[q, p], rng)?;
        let dq = h
            .linear_form()
            .mul(&h1.linear_form())?
            .mul(&h2.linear_form().pow(d - 2))?;
        out.push((q.clone(), dq));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Scenarios: synthetic septic configurations replaying the hyperplane-split
// construction of degree-9 separators.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioCase {
    /// 29 nodes on the hyperplane: septic cone, then a quadric through two planes.
    Case1,
    /// 30 nodes on the hyperplane: octic cone, then a hyperplane through a plane.
    Case2,
    /// 31 nodes on the hyperplane: nonic cone, four outside nodes swept in.
    Case3,
    /// 32 nodes on the hyperplane, criterion holds directly: nonic cone.
    Case4,
}

impl ScenarioCase {
    pub const ALL: [ScenarioCase; 4] = [
        ScenarioCase::Case1,
        ScenarioCase::Case2,
        ScenarioCase::Case3,
        ScenarioCase::Case4,
    ];

    pub fn inside_count(self) -> usize {
        match self {
            ScenarioCase::Case1 => 29,
            ScenarioCase::Case2 => 30,
            ScenarioCase::Case3 => 31,
            ScenarioCase::Case4 => 32,
        }
    }

    /// Points of the hyperplane set-aside for planes `Pi_1`, `Pi_2`.
    fn set_aside(self) -> usize {
        match self {
            ScenarioCase::Case1 => 6,
            ScenarioCase::Case2 => 3,
            _ => 0,
        }
    }

    fn cone_degree(self) -> u32 {
        9 - match self {
            ScenarioCase::Case1 => 2,
            ScenarioCase::Case2 => 1,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioStep {
    pub step: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub case: ScenarioCase,
    pub seed: u64,
    pub inside: usize,
    pub outside: usize,
    pub steps: Vec<ScenarioStep>,
    pub bese: config::BeseReport,
    pub certificate: SeparatorCertificate,
}

/// Total nodes in a scenario: one short of `(n-1)^2` for `n = 7`.
pub const SCENARIO_NODES: usize = 35;

/// Build a random configuration for `case` over `F_65521` and construct a
/// degree-9 separator for its first node following the case's recipe.
pub fn run_scenario(case: ScenarioCase, seed: u64, budget: u64) -> Result<ScenarioReport> {
    let field = FieldSpec::default_prime();
    let mut rng = seeded_rng(seed);
    let h = Hyperplane::coordinate(field, 4, 4);
    let n_in = case.inside_count();
    let n_out = SCENARIO_NODES - n_in;
    let mut nodes = PointSet::empty(field, 4);
    while nodes.len() < n_in {
        let y = ProjectivePoint::random(field, 3, &mut rng);
        let x = h.from_chart(&y)?;
        let _ = nodes.push(format!("s{}", nodes.len()), x);
    }
    while nodes.len() < SCENARIO_NODES {
        let x = ProjectivePoint::random(field, 4, &mut rng);
        if !h.contains(&x) {
            let _ = nodes.push(format!("t{}", nodes.len() - n_in), x);
        }
    }
    let mut steps = Vec::new();
    let mut step = |s: &str, d: String| {
        steps.push(ScenarioStep {
            step: s.into(),
            detail: d,
        })
    };
    let label = "s0";
    let p = nodes.points()[0].clone();
    let lambda0_idx: Vec<usize> = (1 + case.set_aside()..n_in).collect();
    let lambda0 = nodes.subset(&lambda0_idx);
    let outside = nodes.subset(&(n_in..SCENARIO_NODES).collect::<Vec<_>>());
    step(
        "split",
        format!(
            "{n_in} nodes on x4 = 0, {n_out} off it, {} set aside",
            case.set_aside()
        ),
    );

    // projection of the hyperplane from a point o1 onto a plane
    let chart_lambda = h.chart_set(&lambda0)?;
    let chart_p = h.to_chart(&p)?;
    let mut avoid = chart_lambda.clone();
    avoid.push(label, chart_p.clone())?;
    let alpha = geom::random_projection(field, 3, &avoid, &mut rng)?;
    let image = alpha.project_set(&avoid)?;
    let dc = case.cone_degree();
    let bese = config::bese_condition(&image.without(label)?, dc, budget, rng.gen())?;
    step(
        "criterion",
        format!(
            "degree {dc}: holds = {}, maxima {:?} vs thresholds {:?}{}",
            bese.holds,
            bese.rows.iter().map(|r| r.measured).collect::<Vec<_>>(),
            bese.rows.iter().map(|r| r.threshold).collect::<Vec<_>>(),
            if bese.exact { "" } else { " (sampled)" }
        ),
    );
    if !bese.holds {
        return Err(Error::GenericityFailure(format!(
            "incidence criterion fails for the projected set (seed {seed})"
        )));
    }
    let plane_curve = config::bese_separator(&image, label, dc, Some(&bese))?;
    let surface = cone_pullback(&plane_curve, &alpha)?;
    step(
        "cone-in-hyperplane",
        format!("degree {dc} cone with vertex o1"),
    );

    let q = outside.points();
    let mut form = match n_out {
        0 => unreachable!("scenarios keep nodes off the hyperplane"),
        1 => h.cone(&surface, &q[0])?,
        _ => {
            let cone = two_point_cone(&surface, &h, &p, &q[0], &q[1], &mut rng)?;
            step(
                "two-point-cone",
                format!("vertex found after {} plane(s)", cone.planes_tried),
            );
            cone.form
        }
    };
    let swept: Vec<usize> = (2..n_out.min(4)).collect();
    if !swept.is_empty() {
        let lambda = lambda0.union(&outside.subset(&[0, 1]))?;
        let delta = outside.subset(&swept);
        let h_prime = hyperplane_through(field, 4, &[&q[0], &q[1]], &[&p], &mut rng)?;
        let mut dq = Vec::new();
        for &i in &swept {
            let other: Vec<&ProjectivePoint> =
                swept.iter().filter(|&&j| j != i).map(|&j| &q[j]).collect();
            let hi = hyperplane_through(field, 4, &other, &[&q[i], &p], &mut rng)?;
            let aux = h
                .linear_form()
                .mul(&h_prime.linear_form())?
                .mul(&hi.linear_form().pow(dc - 2))?;
            dq.push((q[i].clone(), aux));
        }
        form = sweep(&form, &dq, &p, &lambda, &delta)?;
        step("sweep", format!("{} outside node(s) swept in", swept.len()));
    }

    let rest: Vec<&ProjectivePoint> = (4..n_out).map(|i| &q[i]).collect();
    match case {
        ScenarioCase::Case1 => {
            let l1 = hyperplane_through(
                field,
                4,
                &[
                    &nodes.points()[1],
                    &nodes.points()[2],
                    &nodes.points()[3],
                    rest[0],
                ],
                &[&p],
                &mut rng,
            )?;
            let l2 = hyperplane_through(
                field,
                4,
                &[
                    &nodes.points()[4],
                    &nodes.points()[5],
                    &nodes.points()[6],
                    rest[1],
                ],
                &[&p],
                &mut rng,
            )?;
            form = form.mul(&l1.linear_form())?.mul(&l2.linear_form())?;
            step(
                "finish",
                "quadric through Pi_1, Pi_2 and the last two outside nodes".into(),
            );
        }
        ScenarioCase::Case2 => {
            let l1 = hyperplane_through(
                field,
                4,
                &[
                    &nodes.points()[1],
                    &nodes.points()[2],
                    &nodes.points()[3],
                    rest[0],
                ],
                &[&p],
                &mut rng,
            )?;
            form = form.mul(&l1.linear_form())?;
            step(
                "finish",
                "hyperplane through Pi_1 and the last outside node".into(),
            );
        }
        _ => {}
    }
    let mut certificate = SeparatorCertificate::new(
        &nodes.without(label)?,
        label,
        &p,
        form,
        SeparatorMethod::SweepComposite,
    )?;
    certificate.seed = Some(seed);
    Ok(ScenarioReport {
        case,
        seed,
        inside: n_in,
        outside: n_out,
        steps,
        bese,
        certificate,
    })
}

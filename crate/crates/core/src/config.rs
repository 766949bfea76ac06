//! Incidence analysis: points on flats and plane curves, the Eisenbud–Koh
//! and Bese criteria, node-position bounds and the projection fuzzer.

use itertools::Itertools;
use rand::seq::index;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{self, binomial, PointSet, ProjectivePoint};
use crate::linalg::{self, RowBasis};
use crate::nodes::NodalInstance;
use crate::normality::{self, EvaluationMatrix};
use crate::poly::HomogeneousForm;
use crate::scalar::{seeded_rng, FieldSpec, Scalar, SeededRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    Exact,
    LowerBound,
}

/// Most points of a plane set on one curve of degree `k`.
#[derive(Clone, Debug, Serialize)]
pub struct CurveIncidence {
    pub k: u32,
    pub count: usize,
    pub status: BoundStatus,
    pub subsets_visited: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<HomogeneousForm>,
    pub witness_labels: Vec<String>,
}

fn require_plane(points: &PointSet) -> Result<()> {
    if points.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: points.dim(),
        });
    }
    Ok(())
}

/// Curve through `rows[indices]`: first kernel vector of their evaluations.
fn witness_curve(points: &PointSet, m: &EvaluationMatrix, indices: &[usize]) -> HomogeneousForm {
    let rows: Vec<Vec<Scalar>> = indices.iter().map(|&i| m.rows[i].clone()).collect();
    let kernel = linalg::null_space(points.field(), &rows, m.cols());
    HomogeneousForm::from_dense(points.field(), 2, m.degree, &kernel[0])
}

/// Exact when every `k(k+3)/2`-subset fits in `budget`, otherwise a lower
/// bound from `budget` random subsets. For each subset `T`, the points whose
/// evaluation row lies in the span of `T`'s rows are exactly the points on
/// every degree-`k` curve through `T`; an optimal curve's points always
/// arise this way, which makes the enumeration exact.
pub fn max_on_plane_curve(
    points: &PointSet,
    k: u32,
    budget: u64,
    seed: u64,
) -> Result<CurveIncidence> {
    require_plane(points)?;
    if k == 0 {
        return Err(Error::InvalidArgument("curve degree must be >= 1".into()));
    }
    let s = points.len();
    let c = (k * (k + 3) / 2) as usize;
    let m = EvaluationMatrix::new(points, k);
    let field = points.field();

    if s <= c {
        let all: Vec<usize> = (0..s).collect();
        return Ok(CurveIncidence {
            k,
            count: s,
            status: BoundStatus::Exact,
            subsets_visited: 0,
            witness: (s > 0).then(|| witness_curve(points, &m, &all)),
            witness_labels: points.labels().to_vec(),
        });
    }

    let mut best: Vec<usize> = Vec::new();
    let mut visited = 0u64;
    let mut visit = |subset: &[usize]| -> bool {
        visited += 1;
        let mut basis = RowBasis::new(field, m.cols());
        for &i in subset {
            basis.insert(&m.rows[i]);
        }
        let closure: Vec<usize> = (0..s).filter(|&i| basis.contains(&m.rows[i])).collect();
        if closure.len() > best.len() {
            best = closure;
        }
        best.len() < s
    };

    let needed = binomial(s, c);
    let status = if needed <= budget as u128 {
        for subset in (0..s).combinations(c) {
            if !visit(&subset) {
                break;
            }
        }
        BoundStatus::Exact
    } else {
        let mut rng = seeded_rng(seed);
        for _ in 0..budget {
            let subset = index::sample(&mut rng, s, c).into_vec();
            if !visit(&subset) {
                break;
            }
        }
        if best.len() == s {
            BoundStatus::Exact
        } else {
            BoundStatus::LowerBound
        }
    };
    let witness = witness_curve(points, &m, &best);
    Ok(CurveIncidence {
        k,
        count: best.len(),
        status,
        subsets_visited: visited,
        witness: Some(witness),
        witness_labels: best.iter().map(|&i| points.labels()[i].clone()).collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatSummary {
    pub k: usize,
    pub count: usize,
    pub witness_labels: Vec<String>,
}

impl FlatSummary {
    fn from(k: usize, inc: &geom::FlatIncidence) -> Self {
        FlatSummary {
            k,
            count: inc.count,
            witness_labels: inc.witness.labels().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigurationProfile {
    pub field: FieldSpec,
    pub dim: usize,
    pub s: usize,
    pub span_rank: usize,
    pub max_collinear: Option<FlatSummary>,
    pub max_in_2plane: Option<FlatSummary>,
    pub max_in_hyperplane: Option<FlatSummary>,
    pub max_on_curve: Vec<CurveIncidence>,
}

/// Flat incidences for all `k < N`, and for plane sets the curve incidences
/// for degrees `1..=k_max` (kept nondecreasing: a curve plus a line is a
/// curve of the next degree).
pub fn configuration_profile(
    points: &PointSet,
    k_max: u32,
    budget: u64,
    seed: u64,
) -> Result<ConfigurationProfile> {
    let n = points.dim();
    let flat = |k: usize| -> Result<Option<FlatSummary>> {
        if k == 0 || k >= n || points.len() < k + 1 {
            return Ok(None);
        }
        Ok(Some(FlatSummary::from(
            k,
            &geom::max_points_in_flat(points, k, budget)?,
        )))
    };
    let mut max_on_curve: Vec<CurveIncidence> = Vec::new();
    if n == 2 {
        for k in 1..=k_max {
            let mut inc = max_on_plane_curve(points, k, budget, seed.wrapping_add(k as u64))?;
            if let Some(prev) = max_on_curve.last() {
                if inc.count < prev.count {
                    inc.count = prev.count;
                    inc.status = BoundStatus::LowerBound;
                    inc.witness = None;
                    inc.witness_labels = prev.witness_labels.clone();
                }
            }
            max_on_curve.push(inc);
        }
    }
    Ok(ConfigurationProfile {
        field: points.field(),
        dim: n,
        s: points.len(),
        span_rank: geom::span_rank(points)?,
        max_collinear: flat(1)?,
        max_in_2plane: if n > 2 { flat(2)? } else { None },
        max_in_hyperplane: if n > 3 { flat(n - 1)? } else { None },
        max_on_curve,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatCheck {
    pub k: usize,
    pub threshold: usize,
    pub measured: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatViolation {
    pub k: usize,
    pub count: usize,
    pub witness_labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EisenbudKohReport {
    pub degree: u32,
    pub holds: bool,
    pub checked: Vec<FlatCheck>,
    pub violation: Option<FlatViolation>,
}

/// Sufficient condition for `d`-normality: for every `k >= 1` with
/// `dk + 2 <= s`, fewer than `dk + 2` points lie in any `k`-plane.
pub fn eisenbud_koh_check(points: &PointSet, d: u32, budget: u64) -> Result<EisenbudKohReport> {
    if d < 2 {
        return Err(Error::PreconditionViolation("degree must be >= 2".into()));
    }
    let s = points.len();
    let n = points.dim();
    let span = geom::span_rank(points)?;
    let mut checked = Vec::new();
    let mut violation = None;
    for k in 1..=n {
        let threshold = d as usize * k + 2;
        if threshold > s {
            break;
        }
        let (measured, witness) = if span <= k + 1 {
            (s, points.labels().to_vec())
        } else {
            let inc = geom::max_points_in_flat(points, k, budget)?;
            (inc.count, inc.witness.labels().to_vec())
        };
        checked.push(FlatCheck {
            k,
            threshold,
            measured,
        });
        if measured >= threshold {
            violation = Some(FlatViolation {
                k,
                count: measured,
                witness_labels: witness,
            });
            break;
        }
    }
    Ok(EisenbudKohReport {
        degree: d,
        holds: violation.is_none(),
        checked,
        violation,
    })
}

pub fn bese_m(d: u32) -> u32 {
    (d + 3) / 2
}

/// `k(d+3-k) - 1` for `k = 1..=m`.
pub fn bese_thresholds(d: u32) -> Vec<usize> {
    (1..=bese_m(d))
        .map(|k| (k * (d + 3 - k) - 1) as usize)
        .collect()
}

pub fn bese_size_bound(d: u32) -> usize {
    let m = bese_m(d);
    ((m * (d + 3 - m) - 1).max(m * m)) as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct BeseRow {
    pub k: u32,
    pub threshold: usize,
    pub measured: usize,
    pub status: BoundStatus,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BeseReport {
    pub degree: u32,
    pub m: u32,
    pub s: usize,
    pub size_bound: usize,
    pub size_ok: bool,
    pub rows: Vec<BeseRow>,
    pub holds: bool,
    /// All incidence maxima were computed exactly.
    pub exact: bool,
    pub notes: Vec<String>,
}

/// Evaluate the criterion from already-measured incidence maxima
/// (`maxima[k-1]` for degree `k`).
pub fn bese_from_maxima(d: u32, s: usize, maxima: &[(usize, BoundStatus)]) -> Result<BeseReport> {
    if d < 3 {
        return Err(Error::PreconditionViolation("degree must be >= 3".into()));
    }
    let thresholds = bese_thresholds(d);
    if maxima.len() != thresholds.len() {
        return Err(Error::DimensionMismatch {
            expected: thresholds.len(),
            got: maxima.len(),
        });
    }
    let size_bound = bese_size_bound(d);
    let rows: Vec<BeseRow> = thresholds
        .iter()
        .zip(maxima)
        .enumerate()
        .map(|(i, (&threshold, &(measured, status)))| BeseRow {
            k: i as u32 + 1,
            threshold,
            measured,
            status,
            ok: measured < threshold,
        })
        .collect();
    let size_ok = s <= size_bound;
    let mut notes = Vec::new();
    if d == 3 {
        notes.push("d = 3: size bound applied as displayed (s <= 8)".into());
    }
    let exact = rows.iter().all(|r| r.status == BoundStatus::Exact);
    if !exact {
        notes.push("some maxima are sampled lower bounds".into());
    }
    Ok(BeseReport {
        degree: d,
        m: bese_m(d),
        s,
        size_bound,
        size_ok,
        holds: size_ok && rows.iter().all(|r| r.ok),
        rows,
        exact,
        notes,
    })
}

pub fn bese_condition(points: &PointSet, d: u32, budget: u64, seed: u64) -> Result<BeseReport> {
    require_plane(points)?;
    if d < 3 {
        return Err(Error::PreconditionViolation("degree must be >= 3".into()));
    }
    let mut maxima = Vec::new();
    for k in 1..=bese_m(d) {
        let inc = max_on_plane_curve(points, k, budget, seed.wrapping_add(k as u64))?;
        maxima.push((inc.count, inc.status));
    }
    bese_from_maxima(d, points.len(), &maxima)
}

/// Plane curve of degree `d` through every point but `label`.
pub fn bese_separator(
    points: &PointSet,
    label: &str,
    d: u32,
    report: Option<&BeseReport>,
) -> Result<HomogeneousForm> {
    require_plane(points)?;
    match normality::separating_form(points, label, d) {
        Err(Error::NotSeparable(l)) => {
            if report.is_some_and(|r| r.holds) {
                log::warn!("point {l} not separable although the incidence criterion holds");
            }
            Err(Error::NotSeparable(l))
        }
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlaneContainment {
    Contained,
    NotContained,
    Unverifiable,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeavyPlane {
    pub count: usize,
    pub labels: Vec<String>,
    pub containment: PlaneContainment,
}

#[derive(Clone, Debug, Serialize)]
pub struct NodePositionReport {
    pub n: u32,
    pub s: usize,
    pub line_bound: usize,
    pub max_collinear: usize,
    pub collinear_witness: Vec<String>,
    pub line_bound_ok: bool,
    pub plane_threshold: usize,
    pub heavy_planes: Vec<HeavyPlane>,
    /// Node count a hypersurface containing a plane must reach.
    pub min_nodes_if_plane_contained: usize,
    pub flags: Vec<String>,
}

pub fn node_position_bounds(inst: &NodalInstance, budget: u64) -> Result<NodePositionReport> {
    let n = inst.n;
    let nodes = &inst.nodes;
    let s = nodes.len();
    let line_bound = (n - 1) as usize;
    let plane_threshold = (n * (n - 1) / 2) as usize;
    let min_nodes = ((n - 1) * (n - 1)) as usize;
    let mut flags = Vec::new();

    let (max_collinear, collinear_witness) = if s >= 2 {
        let inc = geom::max_points_in_flat(nodes, 1, budget)?;
        (inc.count, inc.witness.labels().to_vec())
    } else {
        (s, nodes.labels().to_vec())
    };
    let line_bound_ok = max_collinear <= line_bound;
    if !line_bound_ok {
        flags.push(format!(
            "{max_collinear} collinear nodes exceed the bound n - 1 = {line_bound}"
        ));
    }

    let mut heavy_planes = Vec::new();
    if s >= 3 {
        for idx in geom::flats_with_at_least(nodes, 2, plane_threshold + 1, budget)? {
            let containment = match &inst.form {
                None => {
                    flags.push("plane containment unverifiable without the equation".into());
                    PlaneContainment::Unverifiable
                }
                Some(f) => {
                    let span = spanning_triple(nodes, &idx);
                    if f.restrict_to_span(&span)?.is_zero() {
                        PlaneContainment::Contained
                    } else {
                        flags.push(format!(
                            "a plane holds {} nodes but is not contained in the hypersurface",
                            idx.len()
                        ));
                        PlaneContainment::NotContained
                    }
                }
            };
            if containment != PlaneContainment::NotContained && s < min_nodes {
                flags.push(format!(
                    "plane with {} nodes but only {s} nodes listed (expected at least {min_nodes})",
                    idx.len()
                ));
            }
            heavy_planes.push(HeavyPlane {
                count: idx.len(),
                labels: idx.iter().map(|&i| nodes.labels()[i].clone()).collect(),
                containment,
            });
        }
    }
    Ok(NodePositionReport {
        n,
        s,
        line_bound,
        max_collinear,
        collinear_witness,
        line_bound_ok,
        plane_threshold,
        heavy_planes,
        min_nodes_if_plane_contained: min_nodes,
        flags,
    })
}

fn spanning_triple(points: &PointSet, idx: &[usize]) -> Vec<ProjectivePoint> {
    let mut basis = RowBasis::new(points.field(), points.dim() + 1);
    let mut out = Vec::new();
    for &i in idx {
        let p = &points.points()[i];
        if basis.insert(p.coords()) {
            out.push(p.clone());
        }
    }
    out
}

/// Default field for the fuzzer: with `p = 2^31 - 1` accidental special
/// position after projection has probability about `1/p`.
pub const FUZZ_PRIME: u32 = 2_147_483_647;

/// Extra projections tried when a trial shows an over-budget curve.
pub const FUZZ_REPROJECTIONS: usize = 2;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FuzzOptions {
    pub n: u32,
    pub trials: usize,
    pub k_max: u32,
    pub seed: u64,
    pub field: FieldSpec,
    pub budget: u64,
}

impl FuzzOptions {
    pub fn new(n: u32, trials: usize, seed: u64) -> Self {
        FuzzOptions {
            n,
            trials,
            k_max: 2,
            seed,
            field: FieldSpec::Prime(FUZZ_PRIME),
            budget: geom::DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveMeasurement {
    pub k: u32,
    pub budget: usize,
    pub count: usize,
    pub status: BoundStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialOutcome {
    WithinBudget,
    /// A later projection of the same set met every budget.
    NonGenericProjectionResolved,
    CandidateCounterexampleGenericityUnverified,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzTrial {
    pub index: usize,
    pub seed: u64,
    pub size: usize,
    pub on_line: usize,
    pub on_conic: usize,
    pub measurements: Vec<CurveMeasurement>,
    pub outcome: TrialOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub options: FuzzOptions,
    pub candidate_violations: usize,
    pub resolved_violations: usize,
    pub trials: Vec<FuzzTrial>,
}

/// Per-trial seed, so any trial replays on its own.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed
        ^ (index as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn distinct_params(field: FieldSpec, count: usize, rng: &mut SeededRng) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::with_capacity(count);
    while out.len() < count {
        let t = field.random(rng);
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// Random set in `P^4` of size `(n-1)^2 - 1` with a planted line of
/// `on_line` points and a planted plane conic of `on_conic` points; retried
/// until no line holds more than `n - 1` points and no plane more than
/// `2(n - 1)`, which bounds incidences with lines and conics.
pub fn planted_set(
    n: u32,
    field: FieldSpec,
    rng: &mut SeededRng,
    budget: u64,
) -> Result<(PointSet, usize, usize)> {
    use rand::Rng;
    let m = (n - 1) as usize;
    let size = m * m - 1;
    for _ in 0..geom::PROJECTION_RETRIES {
        let on_line = rng.gen_range(0..=m);
        let on_conic = rng.gen_range(0..=(2 * m).min(size - on_line));
        let mut set = PointSet::empty(field, 4);
        let mut ok = true;

        let a = ProjectivePoint::random(field, 4, rng);
        let b = ProjectivePoint::random(field, 4, rng);
        for t in distinct_params(field, on_line, rng) {
            let p = match a.combine(&field.one(), &b, &t) {
                Ok(p) => p,
                Err(_) => {
                    ok = false;
                    break;
                }
            };
            if set.push(format!("l{}", set.len()), p).is_err() {
                ok = false;
                break;
            }
        }
        let frame: Vec<ProjectivePoint> = (0..3)
            .map(|_| ProjectivePoint::random(field, 4, rng))
            .collect();
        for t in distinct_params(field, on_conic, rng) {
            if !ok {
                break;
            }
            let t2 = &t * &t;
            let coords: Vec<Scalar> = (0..5)
                .map(|i| {
                    &(&frame[0].coords()[i] + &(&t * &frame[1].coords()[i]))
                        + &(&t2 * &frame[2].coords()[i])
                })
                .collect();
            match ProjectivePoint::new(coords) {
                Ok(p) if set.push(format!("c{}", set.len()), p.clone()).is_ok() => {}
                _ => ok = false,
            }
        }
        while ok && set.len() < size {
            let p = ProjectivePoint::random(field, 4, rng);
            if set.push(format!("r{}", set.len()), p).is_err() {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        if geom::max_points_in_flat(&set, 1, budget)?.count > m {
            continue;
        }
        if geom::max_points_in_flat(&set, 2, budget)?.count > 2 * m {
            continue;
        }
        return Ok((set, on_line, on_conic));
    }
    Err(Error::GenericityFailure(
        "could not plant a budget-respecting set".into(),
    ))
}

fn project_and_measure(
    set: &PointSet,
    opts: &FuzzOptions,
    rng: &mut SeededRng,
) -> Result<(Vec<CurveMeasurement>, bool)> {
    let proj = geom::random_projection(opts.field, 4, set, rng)?;
    let image = proj.project_set(set)?;
    let m = (opts.n - 1) as usize;
    let mut measurements = Vec::new();
    let mut violated = false;
    for k in 1..=opts.k_max {
        let inc = max_on_plane_curve(&image, k, opts.budget, rand::Rng::gen(rng))?;
        let budget = k as usize * m;
        violated |= inc.count > budget;
        measurements.push(CurveMeasurement {
            k,
            budget,
            count: inc.count,
            status: inc.status,
        });
    }
    Ok((measurements, violated))
}

/// Project planted sets and look for images with more than `k(n-1)` points
/// on a degree-`k` curve. Over-budget images are re-projected; only those
/// that persist are reported as candidates, never as counterexamples.
pub fn conjecture15_fuzz(opts: FuzzOptions) -> Result<FuzzReport> {
    if opts.n < 4 {
        return Err(Error::PreconditionViolation("n must be >= 4".into()));
    }
    if opts.k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be >= 1".into()));
    }
    let mut trials = Vec::with_capacity(opts.trials);
    let (mut candidates, mut resolved) = (0, 0);
    for index in 0..opts.trials {
        let seed = trial_seed(opts.seed, index);
        let mut rng = seeded_rng(seed);
        let (set, on_line, on_conic) = planted_set(opts.n, opts.field, &mut rng, opts.budget)?;
        let (measurements, violated) = project_and_measure(&set, &opts, &mut rng)?;
        let outcome = if !violated {
            TrialOutcome::WithinBudget
        } else {
            let mut fixed = false;
            for _ in 0..FUZZ_REPROJECTIONS {
                if !project_and_measure(&set, &opts, &mut rng)?.1 {
                    fixed = true;
                    break;
                }
            }
            if fixed {
                resolved += 1;
                TrialOutcome::NonGenericProjectionResolved
            } else {
                candidates += 1;
                TrialOutcome::CandidateCounterexampleGenericityUnverified
            }
        };
        trials.push(FuzzTrial {
            index,
            seed,
            size: set.len(),
            on_line,
            on_conic,
            measurements,
            outcome,
        });
    }
    Ok(FuzzReport {
        options: opts,
        candidate_violations: candidates,
        resolved_violations: resolved,
        trials,
    })
}

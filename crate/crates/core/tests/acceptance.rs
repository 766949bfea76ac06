//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use nodal::config::{self, BoundStatus, FuzzOptions};
use nodal::construct::{self, Hyperplane, PipelineOptions, SeparatorMethod};
use nodal::geom::{self, DEFAULT_BUDGET};
use nodal::nodes::{self, NodalInstance};
use nodal::normality::{self, VerdictOptions};
use nodal::poly::{univariate_roots, HomogeneousForm};
use nodal::scalar::seeded_rng;
use nodal::{FieldSpec, PointSet, ProjectivePoint, SeededRng};
use rand::Rng;

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn fp() -> FieldSpec {
    FieldSpec::default_prime()
}

fn instances() -> Vec<(u32, u64, NodalInstance, Duration)> {
    let mut out = Vec::new();
    for n in [5, 6, 7] {
        for seed in SEEDS {
            let start = Instant::now();
            let inst = nodes::example11(n, fp(), &mut seeded_rng(seed)).expect("example generates");
            out.push((n, seed, inst, start.elapsed()));
        }
    }
    out
}

fn criterion1(all: &[(u32, u64, NodalInstance, Duration)]) -> Outcome {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for (n, seed, inst, gen_time) in all {
        let start = Instant::now();
        let v = normality::h4_rank(inst, VerdictOptions::default()).expect("verdict");
        let elapsed = start.elapsed() + *gen_time;
        slowest = slowest.max(elapsed);
        let s = ((n - 1) * (n - 1)) as usize;
        let oracle = common::oracle_rank(&inst.nodes, 2 * n - 5);
        let ok = v.s == s
            && v.degree == 2 * n - 5
            && v.rank == s - 1
            && v.defect == 1
            && v.h4_rank == 2
            && !v.factorial
            && oracle == v.rank
            && elapsed < Duration::from_secs(5);
        if !ok {
            failures.push(format!(
                "n={n} seed={seed}: s={} I={} oracle={oracle} h4={} in {elapsed:?}",
                v.s, v.rank, v.h4_rank
            ));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("15 instances, defect 1 and h4 rank 2, oracle agrees, slowest {slowest:.2?}")
        } else {
            failures.join("; ")
        },
    )
}

fn certify_all(inst: &NodalInstance) -> Result<usize, String> {
    let v = normality::h4_rank(inst, VerdictOptions::default()).map_err(|e| e.to_string())?;
    if v.defect != 0 || v.h4_rank != 1 || !v.factorial {
        return Err(format!("defect {} h4 {}", v.defect, v.h4_rank));
    }
    let mut certified = 0;
    for label in inst.nodes.labels() {
        let out = construct::separator_pipeline(inst, label, PipelineOptions::default())
            .map_err(|e| format!("{label}: {e}"))?;
        let cert = &out.certificate;
        let reverified = cert.verify()
            && inst
                .nodes
                .iter()
                .filter(|(l, _)| *l != label)
                .all(|(_, p)| cert.form.evaluate(p).unwrap().is_zero())
            && !cert.form.evaluate(&cert.target_point).unwrap().is_zero();
        if !reverified || cert.method != SeparatorMethod::DirectLinearAlgebra {
            return Err(format!("{label}: certificate does not re-verify"));
        }
        certified += 1;
    }
    Ok(certified)
}

fn criterion2(all: &[(u32, u64, NodalInstance, Duration)]) -> Outcome {
    let mut failures = Vec::new();
    let mut total = 0;
    let mut slowest_n7 = Duration::ZERO;
    for (i, (n, seed, inst, _)) in all.iter().enumerate() {
        let labels = inst.nodes.labels();
        // every node of the first n = 5 instance, one node of the others
        let dropped: Vec<&String> = if i == 0 {
            labels.iter().collect()
        } else {
            vec![&labels[(i * 7) % labels.len()]]
        };
        for label in dropped {
            let start = Instant::now();
            let smaller = inst.without_node(label).expect("node exists");
            match certify_all(&smaller) {
                Ok(c) if c == ((n - 1) * (n - 1) - 1) as usize => total += c,
                Ok(c) => {
                    failures.push(format!("n={n} seed={seed} minus {label}: {c} certificates"))
                }
                Err(e) => failures.push(format!("n={n} seed={seed} minus {label}: {e}")),
            }
            if *n == 7 {
                slowest_n7 = slowest_n7.max(start.elapsed());
            }
        }
    }
    if slowest_n7 >= Duration::from_secs(60) {
        failures.push(format!("n=7 took {slowest_n7:?}"));
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{total} certificates re-verified, slowest n=7 run {slowest_n7:.2?}")
        } else {
            failures.join("; ")
        },
    )
}

fn on_line(a: &ProjectivePoint, b: &ProjectivePoint, rng: &mut SeededRng) -> ProjectivePoint {
    let f = a.field();
    loop {
        if let Ok(p) = a.combine(&f.random(rng), b, &f.random(rng)) {
            return p;
        }
    }
}

/// Random points of `P^4` with a planted line and a planted plane.
fn structured_set(rng: &mut SeededRng) -> PointSet {
    let f = fp();
    let size = rng.gen_range(10..=15);
    let line_pts = rng.gen_range(0..=7usize);
    let plane_pts = rng.gen_range(0..=12usize);
    let (a, b, c) = (
        ProjectivePoint::random(f, 4, rng),
        ProjectivePoint::random(f, 4, rng),
        ProjectivePoint::random(f, 4, rng),
    );
    let (u, w) = (
        ProjectivePoint::random(f, 4, rng),
        ProjectivePoint::random(f, 4, rng),
    );
    let mut set = PointSet::empty(f, 4);
    let mut i = 0;
    while set.len() < size {
        let p = if set.len() < line_pts {
            on_line(&u, &w, rng)
        } else if set.len() < line_pts + plane_pts {
            let ab = on_line(&a, &b, rng);
            on_line(&ab, &c, rng)
        } else {
            ProjectivePoint::random(f, 4, rng)
        };
        if !set.contains_point(&p) {
            set.push(format!("p{i}"), p).unwrap();
            i += 1;
        }
    }
    set
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(303);
    let (mut passing, mut rejected, mut failures) = (0, 0, Vec::new());
    while passing < 100 {
        let set = structured_set(&mut rng);
        let ek = config::eisenbud_koh_check(&set, 5, DEFAULT_BUDGET).expect("check runs");
        if !ek.holds {
            rejected += 1;
            continue;
        }
        passing += 1;
        let rank = normality::rank_at_degree(&set, 5);
        if rank != set.len() || common::oracle_rank(&set, 5) != rank {
            failures.push(format!("set of {} points has rank {rank}", set.len()));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(30) {
        failures.push(format!("took {elapsed:?}"));
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("100 passing sets have defect 0 ({rejected} sets rejected by the check), {elapsed:.2?}")
        } else {
            failures.join("; ")
        },
    )
}

fn criterion4() -> Outcome {
    let mut failures = Vec::new();
    let tables: [(u32, &[usize], usize); 3] = [
        (9, &[10, 19, 26, 31, 34, 35], 36),
        (7, &[8, 15, 20, 23, 24], 25),
        (5, &[6, 11, 14, 15], 16),
    ];
    for (d, expected, bound) in tables {
        if config::bese_thresholds(d) != expected {
            failures.push(format!(
                "d={d}: thresholds {:?}",
                config::bese_thresholds(d)
            ));
        }
        if config::bese_size_bound(d) != bound {
            failures.push(format!("d={d}: size bound {}", config::bese_size_bound(d)));
        }
    }
    let maxima: Vec<(usize, BoundStatus)> = [6, 12, 25, 30, 33, 34]
        .into_iter()
        .map(|c| (c, BoundStatus::Exact))
        .collect();
    match config::bese_from_maxima(9, 35, &maxima) {
        Ok(r) if r.holds && r.rows.iter().all(|row| row.ok) => {}
        Ok(r) => failures.push(format!("admissible maxima rejected: {:?}", r.rows)),
        Err(e) => failures.push(e.to_string()),
    }
    let mut over = maxima.clone();
    over[5].0 = 35;
    if config::bese_from_maxima(9, 35, &over)
        .map(|r| r.holds)
        .unwrap_or(true)
    {
        failures.push("35 points on a sextic accepted".into());
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "tables for d = 9, 7, 5 match and the admissible maxima pass".to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn labelled(points: &[ProjectivePoint], prefix: &str) -> PointSet {
    let labels = (0..points.len()).map(|i| format!("{prefix}{i}")).collect();
    PointSet::new(fp(), 4, points.to_vec(), labels).unwrap()
}

fn sweep_instance(rng: &mut SeededRng) -> Result<(), String> {
    let f = fp();
    let lam: Vec<_> = (0..rng.gen_range(3..=8))
        .map(|_| ProjectivePoint::random(f, 4, rng))
        .collect();
    let del: Vec<_> = (0..rng.gen_range(1..=4))
        .map(|_| ProjectivePoint::random(f, 4, rng))
        .collect();
    let p = ProjectivePoint::random(f, 4, rng);
    let (lambda, delta) = (labelled(&lam, "l"), labelled(&del, "q"));
    let mut with_p = lambda.clone();
    with_p.push("target", p.clone()).unwrap();
    let d0 = normality::separating_form(&with_p, "target", 3).map_err(|e| e.to_string())?;
    let everything = with_p.union(&delta).unwrap();
    let dq: Vec<_> = delta
        .iter()
        .map(|(l, q)| Ok((q.clone(), normality::separating_form(&everything, l, 3)?)))
        .collect::<nodal::Result<_>>()
        .map_err(|e| e.to_string())?;
    let g = construct::sweep(&d0, &dq, &p, &lambda, &delta).map_err(|e| e.to_string())?;
    let zero_on_sets = lambda
        .points()
        .iter()
        .chain(delta.points())
        .all(|q| g.evaluate(q).unwrap().is_zero());
    let keeps_value =
        g.evaluate(&p).unwrap() == d0.evaluate(&p).unwrap() && !g.evaluate(&p).unwrap().is_zero();
    if zero_on_sets && keeps_value && g.degree() == 3 {
        Ok(())
    } else {
        Err("swept form fails a postcondition".into())
    }
}

fn random_point_of(x: &HomogeneousForm, rng: &mut SeededRng) -> ProjectivePoint {
    let f = x.field();
    loop {
        let (a, b) = (
            ProjectivePoint::random(f, 3, rng),
            ProjectivePoint::random(f, 3, rng),
        );
        if a == b {
            continue;
        }
        let restricted = x.restrict_to_line(&a, &b).unwrap();
        if restricted.is_zero() {
            return a;
        }
        if let Some(t) = univariate_roots(&restricted).unwrap().first() {
            if let Ok(pt) = a.combine(&t.coords()[0], &b, &t.coords()[1]) {
                return pt;
            }
        }
    }
}

fn cone_instance(rng: &mut SeededRng) -> Result<usize, String> {
    let f = fp();
    let h = loop {
        if let Ok(h) = Hyperplane::new((0..5).map(|_| f.random(rng)).collect()) {
            break h;
        }
    };
    let degree = rng.gen_range(2..=3);
    let coeffs: Vec<_> = (0..nodal::poly::monomial_basis(3, degree).len())
        .map(|_| f.random(rng))
        .collect();
    let x = HomogeneousForm::from_dense(f, 3, degree, &coeffs);
    let o = loop {
        let y = ProjectivePoint::random(f, 3, rng);
        if !x.evaluate(&y).unwrap().is_zero() {
            break h.from_chart(&y).unwrap();
        }
    };
    let off = |rng: &mut SeededRng| loop {
        let p = ProjectivePoint::random(f, 4, rng);
        if !h.contains(&p) {
            return p;
        }
    };
    let (p, q) = (off(rng), off(rng));
    let cone = construct::two_point_cone(&x, &h, &o, &p, &q, rng).map_err(|e| e.to_string())?;
    let g = &cone.form;
    if !g.evaluate(&p).unwrap().is_zero() || !g.evaluate(&q).unwrap().is_zero() {
        return Err("cone misses p or q".into());
    }
    if g.evaluate(&o).unwrap().is_zero() {
        return Err("cone contains o".into());
    }
    if !g.evaluate(&cone.p_prime).unwrap().is_zero()
        || !g.evaluate(&cone.q_prime).unwrap().is_zero()
    {
        return Err("cone misses the base points it was built from".into());
    }
    // the cone contains every line from the vertex to the base curve
    for _ in 0..10 {
        let base = h.from_chart(&random_point_of(&x, rng)).unwrap();
        let t = f.random(rng);
        let Ok(pt) = cone.vertex.combine(&f.one(), &base, &t) else {
            continue;
        };
        if !g.evaluate(&pt).unwrap().is_zero() {
            return Err("cone is not a union of lines through the vertex".into());
        }
    }
    Ok(cone.planes_tried)
}

/// True when `p, a, b` are distinct and not collinear.
fn off_line(p: &ProjectivePoint, a: &ProjectivePoint, b: &ProjectivePoint) -> bool {
    PointSet::from_points(p.field(), p.dim(), vec![p.clone(), a.clone(), b.clone()])
        .map(|t| geom::span_rank(&t).unwrap() == 3)
        .unwrap_or(false)
}

fn pair_instance(rng: &mut SeededRng) -> Result<(), String> {
    let f = fp();
    let p = ProjectivePoint::random(f, 2, rng);
    let r = rng.gen_range(2..=20);
    let heavy = rng.gen_range(1..=r);
    let dir = ProjectivePoint::random(f, 2, rng);
    let mut set = PointSet::empty(f, 2);
    while set.len() < r {
        let pt = if set.len() < heavy {
            on_line(&p, &dir, rng)
        } else {
            ProjectivePoint::random(f, 2, rng)
        };
        if pt != p && !set.contains_point(&pt) {
            let label = format!("x{}", set.len());
            set.push(label, pt).unwrap();
        }
    }
    // largest class of points on one line through p
    let m = set
        .points()
        .iter()
        .map(|a| {
            set.points()
                .iter()
                .filter(|b| a == *b || !off_line(&p, a, b))
                .count()
        })
        .max()
        .unwrap_or(0);
    let pairs = construct::pair_lines(&set, &p, m).map_err(|e| e.to_string())?;
    let needed = (r - m).min(r / 2);
    let mut used = std::collections::HashSet::new();
    for (a, b) in &pairs {
        if !used.insert(a.clone()) || !used.insert(b.clone()) {
            return Err("pairs overlap".into());
        }
        if !off_line(&p, set.get(a).unwrap(), set.get(b).unwrap()) {
            return Err(format!("line {a}{b} passes through p"));
        }
    }
    if pairs.len() < needed {
        return Err(format!(
            "{} pairs, need {needed} (r={r}, m={m})",
            pairs.len()
        ));
    }
    Ok(())
}

fn criterion5() -> Outcome {
    let mut rng = seeded_rng(505);
    let mut failures = Vec::new();
    for i in 0..100 {
        if let Err(e) = sweep_instance(&mut rng) {
            failures.push(format!("sweep {i}: {e}"));
        }
    }
    let mut planes = 0;
    for i in 0..50 {
        match cone_instance(&mut rng) {
            Ok(t) => planes += t,
            Err(e) => failures.push(format!("cone {i}: {e}")),
        }
    }
    for i in 0..100 {
        if let Err(e) = pair_instance(&mut rng) {
            failures.push(format!("pairs {i}: {e}"));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("100 sweeps, 50 cones ({planes} planes drawn), 100 pairings verified")
        } else {
            failures.join("; ")
        },
    )
}

fn criterion6() -> Outcome {
    let start = Instant::now();
    let report = config::conjecture15_fuzz(FuzzOptions::new(5, 1000, 606)).expect("fuzz runs");
    let elapsed = start.elapsed();
    check(
        report.candidate_violations == 0
            && report.trials.len() == 1000
            && elapsed < Duration::from_secs(120),
        format!(
            "1000 trials, {} violations, {} resolved by re-projection, {elapsed:.2?}",
            report.candidate_violations, report.resolved_violations
        ),
    )
}

fn rational_instance(i: usize, rng: &mut SeededRng) -> (PointSet, u32) {
    let q = FieldSpec::Rationals;
    let dim = 2 + i % 3;
    let d = 1 + (i % 5) as u32;
    let s = rng.gen_range(3..=20);
    let mut set = PointSet::empty(q, dim);
    let mut t = 0i64;
    while set.len() < s {
        // half the instances put points on a rational normal curve
        let coords: Vec<i64> = if i.is_multiple_of(2) {
            (0..=dim as u32).map(|j| t.pow(j)).collect()
        } else {
            (0..=dim).map(|_| rng.gen_range(-9..=9)).collect()
        };
        t += 1;
        if let Ok(p) = ProjectivePoint::from_i64s(q, &coords) {
            if !set.contains_point(&p) {
                let label = format!("r{}", set.len());
                set.push(label, p).unwrap();
            }
        }
    }
    (set, d)
}

fn criterion7() -> Outcome {
    let mut rng = seeded_rng(707);
    let mut failures = Vec::new();
    let mut deficient = 0;
    for i in 0..20 {
        let (set, d) = rational_instance(i, &mut rng);
        let fc = normality::cross_field_rank(&set, d, true).expect("ranks compute");
        let q_rank = fc.q_rank.expect("exact rank requested");
        let first = fc.attempts.first().and_then(|a| a.rank);
        if q_rank < set.len() {
            deficient += 1;
        }
        if first != Some(q_rank) || fc.agreed_prime.is_none() {
            failures.push(format!(
                "instance {i}: Q rank {q_rank}, F_p attempts {:?}",
                fc.attempts
            ));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("20 instances agree ({deficient} with positive defect)")
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let all = instances();
    let results = [
        ("1 boundary instances are not factorial", criterion1(&all)),
        ("2 one node removed gives certificates", criterion2(&all)),
        ("3 flat incidence check implies normality", criterion3()),
        ("4 plane curve threshold tables", criterion4()),
        ("5 construction postconditions", criterion5()),
        ("6 projection fuzzing", criterion6()),
        ("7 rational and modular ranks agree", criterion7()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        println!(
            "criterion {name}: {} ({})",
            if outcome.ok { "PASS" } else { "FAIL" },
            outcome.detail
        );
        if !outcome.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

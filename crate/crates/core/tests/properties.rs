mod common;

use nodal::config;
use nodal::construct::{self, Hyperplane};
use nodal::geom::{self, DEFAULT_BUDGET};
use nodal::normality;
use nodal::poly::HomogeneousForm;
use nodal::scalar::seeded_rng;
use nodal::{FieldSpec, PointSet, ProjectivePoint, Scalar, SeededRng};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn fp() -> FieldSpec {
    FieldSpec::default_prime()
}

fn random_set(dim: usize, s: usize, rng: &mut SeededRng) -> PointSet {
    let mut set = PointSet::empty(fp(), dim);
    while set.len() < s {
        let p = ProjectivePoint::random(fp(), dim, rng);
        if !set.contains_point(&p) {
            let label = format!("p{}", set.len());
            set.push(label, p).unwrap();
        }
    }
    set
}

/// Random set with `line` points on one line and `conic` on one conic.
fn planted_plane_set(s: usize, line: usize, conic: usize, rng: &mut SeededRng) -> PointSet {
    let f = fp();
    let (a, b) = (
        ProjectivePoint::random(f, 2, rng),
        ProjectivePoint::random(f, 2, rng),
    );
    let mut set = PointSet::empty(f, 2);
    while set.len() < s {
        let p = if set.len() < line {
            a.combine(&f.random(rng), &b, &f.random(rng)).ok()
        } else if set.len() < line + conic {
            let t = f.random(rng);
            ProjectivePoint::new(vec![f.one(), t.clone(), &t * &t]).ok()
        } else {
            Some(ProjectivePoint::random(f, 2, rng))
        };
        if let Some(p) = p {
            if !set.contains_point(&p) {
                let label = format!("p{}", set.len());
                set.push(label, p).unwrap();
            }
        }
    }
    set
}

fn random_invertible(dim: usize, rng: &mut SeededRng) -> Vec<Vec<Scalar>> {
    loop {
        let m: Vec<Vec<Scalar>> = (0..=dim)
            .map(|_| (0..=dim).map(|_| fp().random(rng)).collect())
            .collect();
        let rows: Vec<ProjectivePoint> = m
            .iter()
            .filter_map(|r| ProjectivePoint::new(r.clone()).ok())
            .collect();
        if let Ok(set) = PointSet::from_points(fp(), dim, rows) {
            if set.len() == dim + 1 && geom::span_rank(&set).unwrap() == dim + 1 {
                return m;
            }
        }
    }
}

fn apply(m: &[Vec<Scalar>], p: &ProjectivePoint) -> ProjectivePoint {
    let coords = m
        .iter()
        .map(|row| {
            row.iter()
                .zip(p.coords())
                .fold(fp().zero(), |acc, (a, x)| &acc + &(a * x))
        })
        .collect();
    ProjectivePoint::new(coords).unwrap()
}

/// Product of `k` random linear forms in `dim + 1` variables.
fn product_of_linear(
    dim: usize,
    k: usize,
    rng: &mut SeededRng,
) -> (HomogeneousForm, Vec<Vec<Scalar>>) {
    let lines: Vec<Vec<Scalar>> = (0..k)
        .map(|_| (0..=dim).map(|_| fp().random_nonzero(rng)).collect())
        .collect();
    let mut g = HomogeneousForm::constant(fp().one(), dim);
    for l in &lines {
        g = g.mul(&HomogeneousForm::linear(fp(), l)).unwrap();
    }
    (g, lines)
}

/// The `k^N` points cut out by `N` products of `k` linear forms in `P^N`.
fn complete_intersection(dim: usize, k: usize, rng: &mut SeededRng) -> Option<PointSet> {
    let factors: Vec<Vec<Vec<Scalar>>> =
        (0..dim).map(|_| product_of_linear(dim, k, rng).1).collect();
    let mut set = PointSet::empty(fp(), dim);
    let mut choice = vec![0usize; dim];
    loop {
        let rows: Vec<ProjectivePoint> = choice
            .iter()
            .zip(&factors)
            .map(|(&c, fs)| ProjectivePoint::new(fs[c].clone()).unwrap())
            .collect();
        let cut = PointSet::from_points(fp(), dim, rows).ok()?;
        let flat = geom::LinearFlat::new(
            fp(),
            dim,
            cut.points().iter().map(|p| p.coords().to_vec()).collect(),
        )
        .ok()?;
        if flat.dim() != 0 {
            return None;
        }
        let pt = flat.spanning_points().remove(0);
        // transversal: the point lies on exactly one factor of each product
        for fs in &factors {
            let on = fs.iter().filter(|l| geom_dot(l, &pt).is_zero()).count();
            if on != 1 {
                return None;
            }
        }
        let label = format!("c{}", set.len());
        set.push(label, pt).ok()?;
        let mut i = 0;
        loop {
            if i == dim {
                return Some(set);
            }
            choice[i] += 1;
            if choice[i] < k {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn geom_dot(l: &[Scalar], p: &ProjectivePoint) -> Scalar {
    l.iter()
        .zip(p.coords())
        .fold(fp().zero(), |acc, (a, x)| &acc + &(a * x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_matches_oracle(seed in any::<u64>(), dim in 2usize..=4, s in 1usize..=18, d in 1u32..=4) {
        let set = random_set(dim, s, &mut seeded_rng(seed));
        prop_assert_eq!(normality::rank_at_degree(&set, d), common::oracle_rank(&set, d));
    }

    #[test]
    fn rank_is_invariant_under_relabelling_scaling_and_linear_change(
        seed in any::<u64>(), s in 2usize..=16, d in 1u32..=4,
    ) {
        let mut rng = seeded_rng(seed);
        let mut set = planted_plane_set(s, s / 2, 0, &mut rng);
        let lifted: Vec<_> = set
            .points()
            .iter()
            .map(|p| {
                let mut c = p.coords().to_vec();
                c.push(fp().zero());
                c.push(fp().zero());
                ProjectivePoint::new(c).unwrap()
            })
            .collect();
        set = PointSet::from_points(fp(), 4, lifted).unwrap();
        let rank = normality::rank_at_degree(&set, d);

        let mut shuffled = set.points().to_vec();
        shuffled.shuffle(&mut rng);
        let scaled: Vec<_> = shuffled
            .iter()
            .map(|p| {
                let c = fp().random_nonzero(&mut rng);
                ProjectivePoint::new(p.coords().iter().map(|x| x * &c).collect()).unwrap()
            })
            .collect();
        let permuted = PointSet::from_points(fp(), 4, scaled).unwrap();
        prop_assert_eq!(normality::rank_at_degree(&permuted, d), rank);

        let m = random_invertible(4, &mut rng);
        let moved = PointSet::from_points(fp(), 4, set.points().iter().map(|p| apply(&m, p)).collect()).unwrap();
        prop_assert_eq!(normality::rank_at_degree(&moved, d), rank);
    }

    #[test]
    fn separable_points_are_exactly_those_with_separators(
        seed in any::<u64>(), s in 3usize..=14, line in 0usize..=8, d in 1u32..=4,
    ) {
        let set = planted_plane_set(s, line.min(s), 0, &mut seeded_rng(seed));
        let report = normality::independent_conditions(&set, d).unwrap();
        prop_assert_eq!(report.defect, report.s - report.rank);
        prop_assert_eq!(report.d_normal, report.defect == 0);
        if report.defect == 0 {
            prop_assert!(report.separable.iter().all(|&b| b));
        } else {
            prop_assert!(report.dependent_witness.is_some());
        }
        for (label, &sep) in report.labels.iter().zip(&report.separable) {
            // dropping a separable point lowers the rank by one
            let rest = set.without(label).unwrap();
            let drop = report.rank - normality::rank_at_degree(&rest, d);
            prop_assert_eq!(sep, drop == 1);
            match normality::separating_form(&set, label, d) {
                Ok(form) => {
                    prop_assert!(sep);
                    prop_assert!(!form.vanishes_at(set.get(label).unwrap()).unwrap());
                    for (l, p) in set.iter() {
                        if l != label {
                            prop_assert!(form.vanishes_at(p).unwrap());
                        }
                    }
                }
                Err(_) => prop_assert!(!sep),
            }
        }
    }

    #[test]
    fn flat_incidence_check_implies_normality(seed in any::<u64>(), s in 4usize..=14, line in 0usize..=7, d in 2u32..=5) {
        let mut rng = seeded_rng(seed);
        let set = planted_plane_set(s, line.min(s), 0, &mut rng);
        let ek = config::eisenbud_koh_check(&set, d, DEFAULT_BUDGET).unwrap();
        if ek.holds {
            prop_assert_eq!(normality::rank_at_degree(&set, d), s);
        }
    }

    #[test]
    fn lines_are_the_degree_one_curves(seed in any::<u64>(), s in 3usize..=12, line in 0usize..=8) {
        let set = planted_plane_set(s, line.min(s), 0, &mut seeded_rng(seed));
        let curve = config::max_on_plane_curve(&set, 1, DEFAULT_BUDGET, seed).unwrap();
        let flat = geom::max_points_in_flat(&set, 1, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(curve.count, flat.count);
        prop_assert_eq!(curve.status, config::BoundStatus::Exact);
    }

    #[test]
    fn curve_incidence_grows_with_degree(seed in any::<u64>(), s in 6usize..=12, conic in 0usize..=8) {
        let set = planted_plane_set(s, 0, conic.min(s), &mut seeded_rng(seed));
        let one = config::max_on_plane_curve(&set, 1, DEFAULT_BUDGET, seed).unwrap();
        let two = config::max_on_plane_curve(&set, 2, DEFAULT_BUDGET, seed).unwrap();
        prop_assert!(two.count >= one.count);
        prop_assert!(two.count >= conic.min(s).min(5).max(one.count));
        if let Some(w) = &two.witness {
            let on = set.points().iter().filter(|p| w.vanishes_at(p).unwrap()).count();
            prop_assert!(on >= two.count);
        }
    }

    #[test]
    fn projection_preserves_distinct_points(seed in any::<u64>(), s in 1usize..=12) {
        let mut rng = seeded_rng(seed);
        let set = random_set(4, s, &mut rng);
        let proj = geom::random_projection(fp(), 4, &set, &mut rng).unwrap();
        let image = proj.project_set(&set).unwrap();
        prop_assert_eq!(image.len(), s);
        prop_assert_eq!(image.labels(), set.labels());
    }

    #[test]
    fn sweep_adds_two_points_to_a_separator(seed in any::<u64>(), k in 2usize..=3) {
        // points of a complete intersection separated at degree N(k-1),
        // then made to also pass through two extra points
        let mut rng = seeded_rng(seed);
        let dim = 3;
        let ci = complete_intersection(dim, k, &mut rng).expect("generic forms meet transversally");
        let d = (dim * (k - 1)) as u32;
        let o_label = ci.labels()[rng.gen_range(0..ci.len())].clone();
        let o = ci.get(&o_label).unwrap().clone();
        let lambda = ci.without(&o_label).unwrap();
        let extra = random_set(dim, 2, &mut rng);
        let (p, q) = (extra.points()[0].clone(), extra.points()[1].clone());
        prop_assume!(!ci.contains_point(&p) && !ci.contains_point(&q));

        let hyper = |through: &ProjectivePoint, avoid: &[&ProjectivePoint], rng: &mut SeededRng| {
            construct::hyperplane_through(fp(), dim, &[through], avoid, rng).map(|h: Hyperplane| h.linear_form())
        };
        let s_o = normality::separating_form(&ci, &o_label, d).unwrap();
        let lp = hyper(&p, &[&o, &q], &mut rng).unwrap();
        let lq = hyper(&q, &[&o, &p], &mut rng).unwrap();
        let d0 = s_o.mul(&lp).unwrap().mul(&lq).unwrap();
        prop_assume!(!d0.vanishes_at(&o).unwrap());

        let mut with_o = lambda.clone();
        with_o.push("o", o.clone()).unwrap();
        let mut aux = Vec::new();
        for (target, other) in [(&p, &q), (&q, &p)] {
            // vanishes on the whole complete intersection and on `other`
            let mut everything = ci.clone();
            everything.push("t", target.clone()).unwrap();
            let Ok(sep_t) = normality::separating_form(&everything, "t", d) else { return Ok(()) };
            let l1 = hyper(other, &[target], &mut rng).unwrap();
            let l2 = hyper(&o, &[target], &mut rng).unwrap();
            aux.push(((*target).clone(), sep_t.mul(&l1).unwrap().mul(&l2).unwrap()));
        }
        let delta = PointSet::new(fp(), dim, vec![p.clone(), q.clone()], vec!["p".into(), "q".into()]).unwrap();
        let swept = construct::sweep(&d0, &aux, &o, &lambda, &delta).unwrap();
        for pt in lambda.points().iter().chain([&p, &q]) {
            prop_assert!(swept.vanishes_at(pt).unwrap());
        }
        prop_assert!(!swept.vanishes_at(&o).unwrap());
        prop_assert_eq!(swept.degree(), d + 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn complete_intersections_are_normal(seed in any::<u64>(), dim in 2usize..=4, k in 2usize..=3) {
        prop_assume!(dim < 4 || k == 2);
        let ci = complete_intersection(dim, k, &mut seeded_rng(seed)).expect("generic forms meet transversally");
        prop_assert_eq!(ci.len(), k.pow(dim as u32));
        let d = (dim * (k - 1)) as u32;
        prop_assert_eq!(normality::rank_at_degree(&ci, d), ci.len());
        // one degree lower every point depends on the others
        let below = normality::independent_conditions(&ci, d - 1).unwrap();
        prop_assert_eq!(below.defect, 1);
        prop_assert!(below.separable.iter().all(|&b| !b));
    }
}

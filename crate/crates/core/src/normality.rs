//! Evaluation matrices, the independent-conditions rank `I`, the `H_4` rank
//! and separating forms.

use serde::Serialize;

use crate::config;
use crate::error::{Error, Result};
use crate::geom::{PointSet, DEFAULT_BUDGET};
use crate::linalg::{self, RowBasis};
use crate::nodes::NodalInstance;
use crate::poly::{evaluate_monomials, monomial_basis, HomogeneousForm, Monomial};
use crate::scalar::{is_prime, FieldSpec, Scalar, DEFAULT_PRIME, MIN_PRIME};

/// Primes tried when reducing a rational instance.
pub const PRIME_ATTEMPTS: usize = 5;

/// Monomials of degree `d` evaluated at each point (rows follow the set).
#[derive(Clone, Debug)]
pub struct EvaluationMatrix {
    pub degree: u32,
    pub basis: Vec<Monomial>,
    pub rows: Vec<Vec<Scalar>>,
}

impl EvaluationMatrix {
    pub fn new(points: &PointSet, d: u32) -> Self {
        let basis = monomial_basis(points.dim(), d);
        let rows = points
            .points()
            .iter()
            .map(|p| evaluate_monomials(&basis, p.coords()))
            .collect();
        EvaluationMatrix {
            degree: d,
            basis,
            rows,
        }
    }

    pub fn cols(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityReport {
    pub field: FieldSpec,
    pub dim: usize,
    pub degree: u32,
    pub s: usize,
    pub rank: usize,
    pub defect: usize,
    pub d_normal: bool,
    pub labels: Vec<String>,
    pub separable: Vec<bool>,
    /// A dependent subset (dependence is certain, minimality is not).
    pub dependent_witness: Option<Vec<String>>,
}

impl NormalityReport {
    pub fn is_separable(&self, label: &str) -> Option<bool> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.separable[i])
    }
}

pub fn rank_at_degree(points: &PointSet, d: u32) -> usize {
    let m = EvaluationMatrix::new(points, d);
    let mut basis = RowBasis::new(points.field(), m.cols());
    for r in &m.rows {
        basis.insert(r);
    }
    basis.rank()
}

/// Rank of the degree-`d` evaluation matrix and per-point separability.
///
/// A point is separable exactly when its coefficient vanishes in every row
/// dependency, so one left-kernel computation replaces `s` rank-drop checks.
pub fn independent_conditions(points: &PointSet, d: u32) -> Result<NormalityReport> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = EvaluationMatrix::new(points, d);
    let field = points.field();
    let s = points.len();
    let rank = linalg::rank(field, &m.rows);
    let defect = s - rank;
    let (separable, dependent_witness) = if defect == 0 {
        (vec![true; s], None)
    } else {
        let kernel = linalg::left_kernel(field, &m.rows);
        debug_assert_eq!(kernel.len(), defect);
        let mut separable = vec![true; s];
        for v in &kernel {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    separable[i] = false;
                }
            }
        }
        let witness = kernel
            .iter()
            .min_by_key(|v| v.iter().filter(|c| !c.is_zero()).count())
            .map(|v| {
                v.iter()
                    .zip(points.labels())
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(_, l)| l.clone())
                    .collect()
            });
        (separable, witness)
    };
    Ok(NormalityReport {
        field,
        dim: points.dim(),
        degree: d,
        s,
        rank,
        defect,
        d_normal: defect == 0,
        labels: points.labels().to_vec(),
        separable,
        dependent_witness,
    })
}

/// A degree-`d` form vanishing on every point except `label`, where it is 1.
pub fn separating_form(points: &PointSet, label: &str, d: u32) -> Result<HomogeneousForm> {
    let idx = points.index_of(label)?;
    let m = EvaluationMatrix::new(points, d);
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(points.len());
    for (i, r) in m.rows.iter().enumerate() {
        if i != idx {
            rows.push(r.clone());
        }
    }
    rows.push(m.rows[idx].clone());
    let field = points.field();
    let mut rhs = vec![field.zero(); rows.len()];
    *rhs.last_mut().unwrap() = field.one();
    let coeffs = linalg::solve(field, &rows, &rhs, m.cols())
        .ok_or_else(|| Error::NotSeparable(label.to_string()))?;
    Ok(HomogeneousForm::from_dense(field, points.dim(), d, &coeffs))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "criterion", rename_all = "kebab-case")]
pub enum TraceEntry {
    /// Few enough nodes that factoriality follows from the count alone.
    CountBound {
        s: usize,
        bound: usize,
        applies: bool,
    },
    EisenbudKoh {
        degree: u32,
        holds: Option<bool>,
        note: String,
    },
    DirectRank {
        field: FieldSpec,
        rank: usize,
    },
    Certified {
        rank: usize,
        agrees: bool,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorialityVerdict {
    pub n: u32,
    pub s: usize,
    pub degree: u32,
    pub rank: usize,
    pub defect: usize,
    pub h4_rank: usize,
    pub factorial: bool,
    /// True when every shortcut that applied agrees with the direct rank.
    pub consistent: bool,
    pub trace: Vec<TraceEntry>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct VerdictOptions {
    /// Recompute the rank over `Q` when the instance is rational.
    pub certified: bool,
    pub budget: u64,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            certified: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// `s - I + 1` with `I` the rank at degree `2n - 5`.
pub fn h4_rank(inst: &NodalInstance, opts: VerdictOptions) -> Result<FactorialityVerdict> {
    if inst.n < 3 {
        return Err(Error::PreconditionViolation(format!(
            "n = {} needs 2n - 5 >= 1",
            inst.n
        )));
    }
    let d = 2 * inst.n - 5;
    let s = inst.nodes.len();
    let mut trace = Vec::new();
    let mut notes = Vec::new();

    let bound = ((inst.n - 1) * (inst.n - 1) / 4) as usize;
    trace.push(TraceEntry::CountBound {
        s,
        bound,
        applies: s <= bound,
    });

    let (working, rank, working_rank) = match inst.field {
        FieldSpec::Prime(_) => {
            if opts.certified {
                notes.push("certified mode needs rational coordinates; F_p rank used".into());
            }
            let r = rank_at_degree(&inst.nodes, d);
            (inst.nodes.clone(), r, r)
        }
        FieldSpec::Rationals => {
            let check = cross_field_rank(&inst.nodes, d, opts.certified)?;
            notes.extend(check.notes.iter().cloned());
            let reduced = check
                .agreed_prime
                .or(check.attempts.iter().find_map(|a| a.rank.map(|_| a.prime)))
                .map(|p| inst.nodes.reduce_mod(p))
                .transpose()?;
            let fp_rank = check.fp_rank().ok_or_else(|| {
                Error::GenericityFailure("no prime reduced the instance cleanly".into())
            })?;
            let rank = check.q_rank.unwrap_or(fp_rank);
            if let Some(q) = check.q_rank {
                trace.push(TraceEntry::Certified {
                    rank: q,
                    agrees: check.agreed_prime.is_some(),
                });
            }
            (reduced.unwrap_or_else(|| inst.nodes.clone()), rank, fp_rank)
        }
    };
    trace.push(TraceEntry::DirectRank {
        field: working.field(),
        rank: working_rank,
    });

    let defect = s - rank;
    let factorial = defect == 0;
    let mut consistent = !(s <= bound && !factorial);

    if d >= 2 {
        match config::eisenbud_koh_check(&working, d, opts.budget) {
            Ok(ek) => {
                if ek.holds && !factorial {
                    consistent = false;
                }
                trace.push(TraceEntry::EisenbudKoh {
                    degree: d,
                    holds: Some(ek.holds),
                    note: match &ek.violation {
                        Some(v) => format!("{} points in a {}-plane", v.count, v.k),
                        None => "no violating flat".into(),
                    },
                });
            }
            Err(Error::BudgetExceeded { needed, budget }) => trace.push(TraceEntry::EisenbudKoh {
                degree: d,
                holds: None,
                note: format!("skipped: {needed} subsets exceed budget {budget}"),
            }),
            Err(e) => return Err(e),
        }
    }

    Ok(FactorialityVerdict {
        n: inst.n,
        s,
        degree: d,
        rank,
        defect,
        h4_rank: defect + 1,
        factorial,
        consistent,
        trace,
        notes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeAttempt {
    pub prime: u32,
    pub rank: Option<usize>,
    pub note: Option<String>,
}

/// Rank of a rational set over `Q` (optional) and modulo successive primes.
#[derive(Clone, Debug, Serialize)]
pub struct FieldConsistency {
    pub degree: u32,
    pub q_rank: Option<usize>,
    pub attempts: Vec<PrimeAttempt>,
    /// First prime whose rank matched the rational rank.
    pub agreed_prime: Option<u32>,
    pub notes: Vec<String>,
}

impl FieldConsistency {
    pub fn fp_rank(&self) -> Option<usize> {
        self.attempts.iter().find_map(|a| a.rank)
    }
}

/// Primes tried in order: 65521, then the primes just above `2^16`.
pub fn candidate_primes(count: usize) -> Vec<u32> {
    let mut out = vec![DEFAULT_PRIME];
    let mut p = MIN_PRIME + 1;
    while out.len() < count {
        if is_prime(p) {
            out.push(p);
        }
        p += 2;
    }
    out
}

/// Compare the rank of a rational set with its reductions mod `p`. With
/// `exact`, a mismatch marks the prime as unlucky and the next one is tried;
/// without it, the first clean reduction is accepted.
pub fn cross_field_rank(points: &PointSet, d: u32, exact: bool) -> Result<FieldConsistency> {
    if points.field() != FieldSpec::Rationals {
        return Err(Error::InvalidArgument(
            "cross-field check needs a rational point set".into(),
        ));
    }
    let q_rank = exact.then(|| rank_at_degree(points, d));
    let mut attempts = Vec::new();
    let mut agreed_prime = None;
    let mut notes = Vec::new();
    for p in candidate_primes(PRIME_ATTEMPTS) {
        match points.reduce_mod(p) {
            Ok(reduced) => {
                let r = rank_at_degree(&reduced, d);
                let note = match q_rank {
                    Some(q) if q != r => {
                        notes.push(format!("unlucky prime {p}: rank {r} vs {q} over Q"));
                        Some("rank differs from Q".to_string())
                    }
                    _ => None,
                };
                let ok = note.is_none();
                attempts.push(PrimeAttempt {
                    prime: p,
                    rank: Some(r),
                    note,
                });
                if ok {
                    if q_rank.is_some() {
                        agreed_prime = Some(p);
                    }
                    break;
                }
            }
            Err(e) => {
                notes.push(format!("prime {p} rejected: {e}"));
                attempts.push(PrimeAttempt {
                    prime: p,
                    rank: None,
                    note: Some(e.to_string()),
                });
            }
        }
    }
    Ok(FieldConsistency {
        degree: d,
        q_rank,
        attempts,
        agreed_prime,
        notes,
    })
}

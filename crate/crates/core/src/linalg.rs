//! Exact dense linear algebra over `Q` or `F_p`.
//!
//! Public entry points take rows of [`Scalar`]s; internally each call lifts
//! into a specialised representation (`u64` residues or `BigRational`) and
//! runs the same generic elimination code. Over `Q` the pivot is the
//! candidate of smallest bit height; over `F_p` the first nonzero entry.

use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::{inv_mod, FieldSpec, Scalar};

trait Arith {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// a - f * b
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn height(&self, a: &Self::E) -> u64;
    fn lift(&self, s: &Scalar) -> Self::E;
    fn lower(&self, a: &Self::E) -> Scalar;
}

struct Fp(u64);

impl Arith for Fp {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        let p = self.0;
        (a + p - f * b % p) % p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn height(&self, _: &u64) -> u64 {
        0
    }
    fn lift(&self, s: &Scalar) -> u64 {
        s.residue().expect("prime-field scalar") as u64
    }
    fn lower(&self, a: &u64) -> Scalar {
        Scalar::Residue {
            value: *a as u32,
            modulus: self.0 as u32,
        }
    }
}

struct Qq;

impl Arith for Qq {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub_mul(&self, a: &BigRational, f: &BigRational, b: &BigRational) -> BigRational {
        a - f * b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn height(&self, a: &BigRational) -> u64 {
        a.numer().bits() + a.denom().bits()
    }
    fn lift(&self, s: &Scalar) -> BigRational {
        s.as_rational().expect("rational scalar").clone()
    }
    fn lower(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
}

/// In-place reduced row echelon form. Returns pivot columns; the first
/// `pivots.len()` rows are the nonzero reduced rows.
fn rref_in_place<A: Arith>(k: &A, rows: &mut [Vec<A::E>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !k.is_zero(&rows[i][c]))
            .min_by_key(|&i| k.height(&rows[i][c]));
        let Some(best) = best else { continue };
        rows.swap(r, best);
        let inv = k.inv(&rows[r][c]);
        for x in rows[r][c..cols].iter_mut() {
            *x = k.mul(x, &inv);
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if k.is_zero(&other[c]) {
                continue;
            }
            let f = other[c].clone();
            for j in c..cols {
                if !k.is_zero(&pivot_row[j]) {
                    other[j] = k.sub_mul(&other[j], &f, &pivot_row[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn lift_rows<A: Arith>(k: &A, rows: &[Vec<Scalar>]) -> Vec<Vec<A::E>> {
    rows.iter()
        .map(|r| r.iter().map(|s| k.lift(s)).collect())
        .collect()
}

fn width(rows: &[Vec<Scalar>], cols: Option<usize>) -> usize {
    cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0)
}

/// Reduced row echelon form of a matrix, with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

macro_rules! dispatch {
    ($field:expr, $k:ident => $body:expr) => {
        match $field {
            FieldSpec::Prime(p) => {
                let $k = Fp(p as u64);
                $body
            }
            FieldSpec::Rationals => {
                let $k = Qq;
                $body
            }
        }
    };
}

pub fn rref(field: FieldSpec, rows: &[Vec<Scalar>], cols: usize) -> Echelon {
    dispatch!(field, k => {
        let mut m = lift_rows(&k, rows);
        let pivots = rref_in_place(&k, &mut m, cols);
        let out = m
            .iter()
            .take(pivots.len())
            .map(|r| r.iter().map(|e| k.lower(e)).collect())
            .collect();
        Echelon { rows: out, pivots, cols }
    })
}

pub fn rank(field: FieldSpec, rows: &[Vec<Scalar>]) -> usize {
    let cols = width(rows, None);
    let mut basis = RowBasis::new(field, cols);
    for r in rows {
        basis.insert(r);
    }
    basis.rank()
}

/// Basis of `{x : A x = 0}` for the `rows × cols` matrix `A`.
pub fn null_space(field: FieldSpec, rows: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    dispatch!(field, k => {
        let mut m = lift_rows(&k, rows);
        let pivots = rref_in_place(&k, &mut m, cols);
        let mut is_pivot = vec![false; cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let one = field.one();
        (0..cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![k.zero(); cols];
                v[free] = k.lift(&one);
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = k.neg(&m[i][free]);
                }
                v.iter().map(|e| k.lower(e)).collect()
            })
            .collect()
    })
}

/// Some solution of `A x = b`, or `None` if the system is inconsistent.
pub fn solve(
    field: FieldSpec,
    rows: &[Vec<Scalar>],
    rhs: &[Scalar],
    cols: usize,
) -> Option<Vec<Scalar>> {
    assert_eq!(rows.len(), rhs.len());
    dispatch!(field, k => {
        let mut m: Vec<Vec<_>> = rows
            .iter()
            .zip(rhs)
            .map(|(r, b)| r.iter().chain(std::iter::once(b)).map(|s| k.lift(s)).collect())
            .collect();
        let pivots = rref_in_place(&k, &mut m, cols + 1);
        if pivots.last() == Some(&cols) {
            return None;
        }
        let mut x = vec![k.zero(); cols];
        for (i, &pc) in pivots.iter().enumerate() {
            // dispatch instantiates this for u64 and rationals alike
            #[allow(clippy::clone_on_copy)]
            let v = m[i][cols].clone();
            x[pc] = v;
        }
        Some(x.iter().map(|e| k.lower(e)).collect())
    })
}

/// Basis of row dependencies `{y : y^T A = 0}`.
pub fn left_kernel(field: FieldSpec, rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = rows.len();
    let cols = width(rows, None);
    let transposed: Vec<Vec<Scalar>> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    null_space(field, &transposed, n)
}

enum BasisRows {
    Fp(Fp, Vec<(usize, Vec<u64>)>),
    Q(Qq, Vec<(usize, Vec<BigRational>)>),
}

/// Incrementally built row space, for membership and rank-growth tests.
pub struct RowBasis {
    cols: usize,
    rows: BasisRows,
}

fn reduce_against<A: Arith>(k: &A, basis: &[(usize, Vec<A::E>)], v: &mut [A::E]) {
    for (pc, row) in basis {
        if k.is_zero(&v[*pc]) {
            continue;
        }
        let f = v[*pc].clone();
        for (j, e) in row.iter().enumerate().skip(*pc) {
            if !k.is_zero(e) {
                v[j] = k.sub_mul(&v[j], &f, e);
            }
        }
    }
}

fn insert_into<A: Arith>(k: &A, basis: &mut Vec<(usize, Vec<A::E>)>, mut v: Vec<A::E>) -> bool {
    reduce_against(k, basis, &mut v);
    match v.iter().position(|e| !k.is_zero(e)) {
        None => false,
        Some(pc) => {
            let inv = k.inv(&v[pc]);
            for e in v.iter_mut().skip(pc) {
                *e = k.mul(e, &inv);
            }
            basis.push((pc, v));
            true
        }
    }
}

impl RowBasis {
    pub fn new(field: FieldSpec, cols: usize) -> Self {
        let rows = match field {
            FieldSpec::Prime(p) => BasisRows::Fp(Fp(p as u64), Vec::new()),
            FieldSpec::Rationals => BasisRows::Q(Qq, Vec::new()),
        };
        RowBasis { cols, rows }
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            BasisRows::Fp(_, r) => r.len(),
            BasisRows::Q(_, r) => r.len(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Add a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: &[Scalar]) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        match &mut self.rows {
            BasisRows::Fp(k, b) => {
                let v = row.iter().map(|s| k.lift(s)).collect();
                insert_into(k, b, v)
            }
            BasisRows::Q(k, b) => {
                let v = row.iter().map(|s| k.lift(s)).collect();
                insert_into(k, b, v)
            }
        }
    }

    /// Whether `row` lies in the current span.
    pub fn contains(&self, row: &[Scalar]) -> bool {
        match &self.rows {
            BasisRows::Fp(k, b) => {
                let mut v: Vec<u64> = row.iter().map(|s| k.lift(s)).collect();
                reduce_against(k, b, &mut v);
                v.iter().all(|e| *e == 0)
            }
            BasisRows::Q(k, b) => {
                let mut v: Vec<BigRational> = row.iter().map(|s| k.lift(s)).collect();
                reduce_against(k, b, &mut v);
                v.iter().all(Zero::is_zero)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::seeded_rng;

    fn mat(field: FieldSpec, data: &[&[i64]]) -> Vec<Vec<Scalar>> {
        data.iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect()
    }

    fn mat_vec(rows: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .zip(x)
                    .fold(x[0].field().zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    #[test]
    fn small_ranks() {
        for field in [FieldSpec::Rationals, FieldSpec::default_prime()] {
            let m = mat(field, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
            assert_eq!(rank(field, &m), 2);
            assert_eq!(rref(field, &m, 3).rank(), 2);
            let ns = null_space(field, &m, 3);
            assert_eq!(ns.len(), 1);
            assert!(mat_vec(&m, &ns[0]).iter().all(Scalar::is_zero));
            let lk = left_kernel(field, &m);
            assert_eq!(lk.len(), 1);
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let field = FieldSpec::Rationals;
        let m = mat(field, &[&[1, 1], &[1, -1]]);
        let b = vec![field.from_i64(3), field.from_i64(1)];
        let x = solve(field, &m, &b, 2).unwrap();
        assert_eq!(x, vec![field.from_i64(2), field.from_i64(1)]);
        let m = mat(field, &[&[1, 1], &[2, 2]]);
        assert!(solve(field, &m, &b, 2).is_none());
    }

    #[test]
    fn row_basis_membership() {
        let field = FieldSpec::default_prime();
        let mut b = RowBasis::new(field, 3);
        assert!(b.insert(&mat(field, &[&[0, 1, 1]])[0]));
        assert!(b.insert(&mat(field, &[&[1, 1, 0]])[0]));
        assert!(b.contains(&mat(field, &[&[1, 3, 2]])[0]));
        assert!(!b.contains(&mat(field, &[&[0, 0, 1]])[0]));
        assert!(!b.insert(&mat(field, &[&[2, 0, -2]])[0]));
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn random_null_space_is_complementary() {
        let mut rng = seeded_rng(3);
        for field in [FieldSpec::Rationals, FieldSpec::default_prime()] {
            for rows in 1..6 {
                let m: Vec<Vec<Scalar>> = (0..rows)
                    .map(|_| (0..7).map(|_| field.random(&mut rng)).collect())
                    .collect();
                let r = rank(field, &m);
                let ns = null_space(field, &m, 7);
                assert_eq!(r + ns.len(), 7);
                for v in &ns {
                    assert!(mat_vec(&m, v).iter().all(Scalar::is_zero));
                }
            }
        }
    }
}

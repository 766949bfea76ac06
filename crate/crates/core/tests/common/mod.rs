//! Brute-force oracles that share no code with the library's linear algebra.

#![allow(dead_code)]

use nodal::PointSet;

/// Exponent vectors of all degree-`d` monomials in `vars` variables.
pub fn exponents(vars: usize, d: u32) -> Vec<Vec<u32>> {
    if vars == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in exponents(vars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Residues of a point set over `F_p`.
pub fn residues(points: &PointSet) -> Vec<Vec<u64>> {
    points
        .points()
        .iter()
        .map(|pt| {
            pt.coords()
                .iter()
                .map(|c| c.residue().expect("prime field") as u64)
                .collect()
        })
        .collect()
}

/// Evaluation matrix assembled monomial by monomial.
pub fn evaluation_matrix(points: &[Vec<u64>], d: u32, p: u64) -> Vec<Vec<u64>> {
    let vars = points[0].len();
    let monos = exponents(vars, d);
    points
        .iter()
        .map(|x| {
            monos
                .iter()
                .map(|e| {
                    e.iter()
                        .zip(x)
                        .fold(1u64, |acc, (&k, &xi)| acc * pow_mod(xi, k as u64, p) % p)
                })
                .collect()
        })
        .collect()
}

/// Rank by plain row reduction modulo `p`.
pub fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Rank of the degree-`d` evaluation matrix of a prime-field point set.
pub fn oracle_rank(points: &PointSet, d: u32) -> usize {
    let p = points.field().modulus().expect("prime field") as u64;
    rank_mod(evaluation_matrix(&residues(points), d, p), p)
}

//! Independent oracles shared by the integration tests: cycle types,
//! Murnaghan–Nakayama characters, and the classical one-box branching rule.

#![allow(dead_code)]

use hecke_cells::ring::LaurentPoly;
use hecke_cells::symgroup::Permutation;
use hecke_cells::tableaux::Partition;
use num_traits::ToPrimitive;

pub fn cycle_type(w: &Permutation) -> Partition {
    let n = w.rank();
    let mut seen = vec![false; n + 1];
    let mut lens = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            p = w.image(p);
            len += 1;
        }
        lens.push(len);
    }
    lens.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(lens).unwrap()
}

/// χ^λ(ρ) by the Murnaghan–Nakayama rule, via beta-numbers: removing a rim
/// hook of length r is subtracting r from one beta-number, with sign given
/// by the number of beta-numbers jumped over.
pub fn mn_character(lambda: &Partition, rho: &Partition) -> i64 {
    fn go(lambda: &[usize], rho: &[usize]) -> i64 {
        if rho.is_empty() {
            return 1; // lambda is empty too when the sizes matched
        }
        let r = rho[0] as i64;
        let k = lambda.len();
        let beta: Vec<i64> = (0..k)
            .map(|i| lambda[i] as i64 + (k - 1 - i) as i64)
            .collect();
        let mut total = 0;
        for i in 0..k {
            let t = beta[i] - r;
            if t < 0 || beta.contains(&t) {
                continue;
            }
            let crossings = beta.iter().filter(|&&b| t < b && b < beta[i]).count();
            let mut nb = beta.clone();
            nb[i] = t;
            nb.sort_unstable_by(|a, b| b.cmp(a));
            let kk = nb.len();
            let mut rest: Vec<usize> = nb
                .iter()
                .enumerate()
                .map(|(j, &b)| (b - (kk - 1 - j) as i64) as usize)
                .collect();
            while rest.last() == Some(&0) {
                rest.pop();
            }
            let sign = if crossings % 2 == 0 { 1 } else { -1 };
            total += sign * go(&rest, &rho[1..]);
        }
        total
    }
    assert_eq!(lambda.total(), rho.total());
    go(lambda.parts(), rho.parts())
}

/// Shapes obtained from λ by adding one box (the classical branching rule
/// for induction).
pub fn branching_up(lambda: &Partition) -> Vec<Partition> {
    let (_, outer) = lambda.corners();
    outer.iter().map(|&c| lambda.with_box_added(c)).collect()
}

/// Shapes obtained from λ by removing one box.
pub fn branching_down(lambda: &Partition) -> Vec<Partition> {
    let (inner, _) = lambda.corners();
    inner.iter().map(|&c| lambda.with_box_removed(c)).collect()
}

/// Specialize a Laurent-polynomial matrix at q^{1/2} = 1.
pub fn specialize_matrix(mat: &[Vec<LaurentPoly>]) -> Vec<Vec<i64>> {
    mat.iter()
        .map(|row| {
            row.iter()
                .map(|p| p.specialize_one().to_i64().unwrap())
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

pub fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = 1;
    }
    out
}

/// The matrix of w in the specialized representation given by generator
/// matrices (row-vector convention: matrices compose along reduced words).
pub fn rep_matrix(gens: &[Vec<Vec<i64>>], w: &Permutation) -> Vec<Vec<i64>> {
    let dim = gens.first().map(Vec::len).unwrap_or(1);
    let mut out = identity_matrix(dim);
    for s in w.reduced_word() {
        out = mat_mul(&out, &gens[s - 1]);
    }
    out
}

pub fn trace(mat: &[Vec<i64>]) -> i64 {
    mat.iter().enumerate().map(|(i, row)| row[i]).sum()
}

//! Acceptance suite: one test per acceptance criterion, each printing a
//! single "[PASS] criterion N" line on success (run with --nocapture to see
//! them).  All comparisons are exact.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use hecke_cells::cells::{
    induce_cell, induced_cell_filtration, restrict_cell, restricted_cell_filtration,
};
use hecke_cells::hecke::{
    verify_parabolic_compatibility, verify_parabolic_expansion, CellStructure,
    HeckeContext,
};
use hecke_cells::pairs::{
    cell_union_sets, l_mu_data, verify_kostka_cell_count, verify_prefix_monotonicity,
    PairOfPartitions, TypedSequence,
};
use hecke_cells::ring::LaurentPoly;
use hecke_cells::specht::{induced_specht_filtration, restricted_specht_filtration};
use hecke_cells::symgroup::{coset_rep_x_star, parabolic};
use hecke_cells::tableaux::{
    c_semistandard_tableaux, rs_insert, semistandard_tableaux, Composition, Partition,
};

use common::{
    branching_down, branching_up, cycle_type, mn_character, rep_matrix,
    specialize_matrix, trace,
};

/// KL polynomial invariants and bar-invariance of the C basis for m ≤ 5.
#[test]
fn criterion_1() {
    for m in 1..=5 {
        let ctx = HeckeContext::get(m).unwrap();
        for y in 0..ctx.num_elements() {
            // support of C'_y is the Bruhat interval [e, y]
            let support: BTreeSet<usize> = ctx.cprime_t(y).keys().copied().collect();
            let interval: BTreeSet<usize> = (0..ctx.num_elements())
                .filter(|&x| ctx.perms[x].bruhat_leq(&ctx.perms[y]))
                .collect();
            assert_eq!(support, interval, "m={m} y={y}");
            assert!(ctx.kl_polynomial(y, y).is_one(), "P_yy m={m} y={y}");
            for &x in &support {
                let p = ctx.kl_polynomial(x, y);
                assert!(p.is_q_polynomial(), "m={m} x={x} y={y}");
                if x != y {
                    let deg = p.q_degree().unwrap();
                    let bound = (ctx.length(y) - ctx.length(x) - 1) as i64;
                    assert!(2 * deg <= bound, "degree bound m={m} x={x} y={y}");
                }
            }
            let c = ctx.c_element(y);
            assert_eq!(ctx.bar_involution(&c).coeffs, c.coeffs, "bar m={m} y={y}");
        }
    }
    println!("[PASS] criterion 1");
}

/// Cells from the structure-constant closure equal the insertion fibers for
/// m ≤ 5; two-sided cells biject with partitions of m.
#[test]
fn criterion_2() {
    for m in 1..=5 {
        let ctx = HeckeContext::get(m).unwrap();
        let cells = CellStructure::get(m).unwrap();
        let mut by_q: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        let mut by_p: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        let mut by_shape: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for (w, perm) in ctx.perms.iter().enumerate() {
            let (p, q) = rs_insert(perm);
            by_shape.entry(format!("{:?}", p.shape())).or_default().insert(w);
            by_q.entry(format!("{:?}", q.rows())).or_default().insert(w);
            by_p.entry(format!("{:?}", p.rows())).or_default().insert(w);
        }
        let as_sets = |cs: &[Vec<usize>]| -> BTreeSet<BTreeSet<usize>> {
            cs.iter().map(|c| c.iter().copied().collect()).collect()
        };
        let fibers = |m: &BTreeMap<String, BTreeSet<usize>>| -> BTreeSet<BTreeSet<usize>> {
            m.values().cloned().collect()
        };
        assert_eq!(as_sets(&cells.right_cells), fibers(&by_q), "right m={m}");
        assert_eq!(as_sets(&cells.left_cells), fibers(&by_p), "left m={m}");
        assert_eq!(as_sets(&cells.two_sided_cells), fibers(&by_shape), "lr m={m}");
        let shapes: BTreeSet<Vec<usize>> =
            cells.lr_shapes.iter().map(|s| s.parts().to_vec()).collect();
        assert_eq!(shapes.len(), cells.two_sided_cells.len(), "m={m}");
        assert_eq!(shapes.len(), Partition::all(m).len(), "m={m}");
    }
    println!("[PASS] criterion 2");
}

/// Induction decompositions 𝔠𝔛′ = ⊔ 𝔠_k for every right cell of S_n,
/// n ∈ {2,3,4}, with strictly dominance-decreasing shapes in node order.
#[test]
fn criterion_3() {
    for n in 2..=4 {
        let small = HeckeContext::get(n).unwrap();
        let small_cells = CellStructure::get(n).unwrap();
        let big = HeckeContext::get(n + 1).unwrap();
        let (xprime, _) = coset_rep_x_star(n);
        for ci in 0..small_cells.right_cells.len() {
            let dec = induce_cell(n, ci).unwrap();
            let mut translated: BTreeSet<usize> = BTreeSet::new();
            for &c in &small_cells.right_cells[ci] {
                let c_big = small.perms[c].embed(n + 1);
                for x in &xprime {
                    translated.insert(big.index_of(&c_big.compose(x)));
                }
            }
            let mut union: BTreeSet<usize> = BTreeSet::new();
            let mut total = 0;
            for f in &dec.factors {
                total += f.cell.len();
                union.extend(f.cell.iter().copied());
            }
            assert_eq!(union.len(), total, "disjoint n={n} cell {ci}");
            assert_eq!(union, translated, "cover n={n} cell {ci}");
            for pair in dec.factors.windows(2) {
                assert!(pair[0].corner < pair[1].corner, "node order n={n}");
                assert!(
                    pair[1].shape.dominance_lt(&pair[0].shape),
                    "dominance n={n} cell {ci}"
                );
            }
            let dim: u64 =
                dec.factors.iter().map(|f| f.shape.standard_tableau_count()).sum();
            assert_eq!(
                dim,
                (n as u64 + 1) * dec.source_shape.standard_tableau_count(),
                "dimension n={n} cell {ci}"
            );
        }
    }
    println!("[PASS] criterion 3");
}

/// Restriction decompositions 𝔠 = ⊔ d_k 𝔠_k for every right cell of
/// S_{n+1}, n+1 ≤ 5, with Bruhat-monotone translates and strictly
/// dominance-increasing shapes.
#[test]
fn criterion_4() {
    for m in 3..=5 {
        let small = HeckeContext::get(m - 1).unwrap();
        let big = HeckeContext::get(m).unwrap();
        let big_cells = CellStructure::get(m).unwrap();
        for ci in 0..big_cells.right_cells.len() {
            let dec = restrict_cell(m, ci).unwrap();
            let mut union: BTreeSet<usize> = BTreeSet::new();
            let mut total = 0;
            for f in &dec.factors {
                total += f.cell.len();
                for &c in &f.cell {
                    let translated = f.d_k.compose(&small.perms[c].embed(m));
                    union.insert(big.index_of(&translated));
                }
            }
            let cell: BTreeSet<usize> =
                big_cells.right_cells[ci].iter().copied().collect();
            assert_eq!(union.len(), total, "disjoint m={m} cell {ci}");
            assert_eq!(union, cell, "cover m={m} cell {ci}");
            for pair in dec.factors.windows(2) {
                assert!(pair[0].corner < pair[1].corner, "node order m={m}");
                assert!(
                    pair[0].shape.dominance_lt(&pair[1].shape),
                    "dominance m={m} cell {ci}"
                );
                assert!(
                    pair[0].d_k.bruhat_leq(&pair[1].d_k),
                    "Bruhat monotone m={m} cell {ci}"
                );
            }
            let dim: u64 =
                dec.factors.iter().map(|f| f.shape.standard_tableau_count()).sum();
            assert_eq!(dim, dec.source_shape.standard_tableau_count(), "m={m}");
        }
    }
    println!("[PASS] criterion 4");
}

fn cell_module_matrices(
    ctx: &HeckeContext,
    cell: &[usize],
    gens: impl Iterator<Item = usize>,
) -> Vec<Vec<Vec<LaurentPoly>>> {
    let pos: BTreeMap<usize, usize> =
        cell.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    gens.map(|s| {
        let mut mat = vec![vec![LaurentPoly::zero(); cell.len()]; cell.len()];
        for (row, &w) in cell.iter().enumerate() {
            for (x, coeff) in ctx.c_alpha_right(w, s) {
                if let Some(&col) = pos.get(&x) {
                    mat[row][col] = coeff;
                }
            }
        }
        mat
    })
    .collect()
}

/// Cell-module filtrations of induced and restricted cell modules, ambient
/// rank ≤ 5: closure layer by layer and factor matrices equal to those of
/// the factor cell modules.
#[test]
fn criterion_5() {
    for n in 2..=4 {
        let small_cells = CellStructure::get(n).unwrap();
        let big = HeckeContext::get(n + 1).unwrap();
        for ci in 0..small_cells.right_cells.len() {
            let report = induced_cell_filtration(n, ci).unwrap();
            assert!(report.verified, "induced n={n} cell {ci}");
            for pair in report.layers.windows(2) {
                assert!(pair[0].shape.dominance_lt(&pair[1].shape));
            }
            for layer in &report.layers {
                let expect = cell_module_matrices(&big, &layer.cell, 1..=n);
                assert_eq!(layer.factor_matrices, expect, "induced n={n} cell {ci}");
            }
        }
    }
    for m in 3..=5 {
        let small = HeckeContext::get(m - 1).unwrap();
        let big_cells = CellStructure::get(m).unwrap();
        for ci in 0..big_cells.right_cells.len() {
            let report = restricted_cell_filtration(m, ci).unwrap();
            assert!(report.verified, "restricted m={m} cell {ci}");
            for pair in report.layers.windows(2) {
                assert!(pair[0].shape.dominance_lt(&pair[1].shape));
            }
            for layer in &report.layers {
                let expect = cell_module_matrices(&small, &layer.cell, 1..m - 1);
                assert_eq!(layer.factor_matrices, expect, "restricted m={m} cell {ci}");
            }
        }
    }
    println!("[PASS] criterion 5");
}

fn admissible_pairs(n: usize) -> Vec<(Composition, Composition)> {
    let mut out = Vec::new();
    for lambda in Composition::all(n) {
        for mu in Composition::all(n) {
            if lambda.sorted_partition() == mu.conjugate() {
                out.push((lambda.clone(), mu));
            }
        }
    }
    out
}

/// Specht filtrations of induced and restricted Specht modules for every
/// admissible (λ, μ) with ambient rank ≤ 5: basis sizes, closure, strict
/// dominance chains, branching-rule factor multisets, and (for ambient ≤ 4)
/// specialized factor traces against Murnaghan–Nakayama characters.
#[test]
fn criterion_6() {
    let multiset = |shapes: &[Partition]| -> BTreeMap<Vec<usize>, usize> {
        let mut out = BTreeMap::new();
        for s in shapes {
            *out.entry(s.parts().to_vec()).or_insert(0) += 1;
        }
        out
    };
    for n in 2..=4 {
        for (lambda, mu) in admissible_pairs(n) {
            let report = induced_specht_filtration(&lambda, &mu, n).unwrap();
            assert!(report.verified, "induce λ={lambda} μ={mu}");
            let f = lambda.sorted_partition().standard_tableau_count();
            assert_eq!(report.basis_size as u64, (n as u64 + 1) * f);
            let shapes: Vec<Partition> =
                report.layers.iter().map(|l| l.shape.clone()).collect();
            for pair in shapes.windows(2) {
                assert!(pair[0].dominance_lt(&pair[1]), "chain λ={lambda} μ={mu}");
            }
            assert_eq!(
                multiset(&shapes),
                multiset(&branching_up(&lambda.sorted_partition())),
                "branching λ={lambda} μ={mu}"
            );
            if n + 1 <= 4 {
                let big = HeckeContext::get(n + 1).unwrap();
                for layer in &report.layers {
                    let gens: Vec<Vec<Vec<i64>>> =
                        layer.factor_matrices.iter().map(|m| specialize_matrix(m)).collect();
                    for w in &big.perms {
                        assert_eq!(
                            trace(&rep_matrix(&gens, w)),
                            mn_character(&layer.shape, &cycle_type(w)),
                            "character λ={lambda} μ={mu} shape {} at {w}",
                            layer.shape
                        );
                    }
                }
            }
        }
    }
    for m in 3..=5 {
        for (lambda, mu) in admissible_pairs(m) {
            let report = restricted_specht_filtration(&lambda, &mu, m).unwrap();
            assert!(report.verified, "restrict λ={lambda} μ={mu}");
            let f = lambda.sorted_partition().standard_tableau_count();
            assert_eq!(report.basis_size as u64, f);
            let shapes: Vec<Partition> =
                report.layers.iter().map(|l| l.shape.clone()).collect();
            for pair in shapes.windows(2) {
                assert!(pair[0].dominance_lt(&pair[1]), "chain λ={lambda} μ={mu}");
            }
            assert_eq!(
                multiset(&shapes),
                multiset(&branching_down(&lambda.sorted_partition())),
                "branching λ={lambda} μ={mu}"
            );
        }
    }
    println!("[PASS] criterion 6");
}

/// |R(μ)| = |L(μ)| with a bijective substitution map, and cell counts in
/// L(μ) equal to c-semistandard tableau counts and the transpose-Kostka
/// oracle, for all μ ⊨ m, λ ⊢ m, m ≤ 6.
#[test]
fn criterion_7() {
    for m in 1..=6 {
        for mu in Composition::all(m) {
            let data = l_mu_data(&mu).unwrap(); // fails if w(t) is not injective
            let multinomial: u64 = {
                let fact = |k: usize| (1..=k as u64).product::<u64>();
                fact(m) / mu.parts().iter().map(|&p| fact(p)).product::<u64>()
            };
            assert_eq!(TypedSequence::all(&mu).len() as u64, multinomial, "μ={mu}");
            assert_eq!(data.sharp_of.len() as u64, multinomial, "μ={mu}");
            for lambda in Partition::all(m) {
                let report = verify_kostka_cell_count(&mu, &lambda).unwrap();
                assert!(
                    report.passed,
                    "μ={mu} λ={lambda}: {}",
                    report.counterexamples.join("; ")
                );
                assert_eq!(
                    c_semistandard_tableaux(&lambda, &mu).len(),
                    semistandard_tableaux(&lambda.conjugate(), &mu).len(),
                    "transpose Kostka μ={mu} λ={lambda}"
                );
            }
        }
    }
    println!("[PASS] criterion 7");
}

/// Sharp-partition prefix monotonicity and the Schreier property for all
/// μ ⊨ m ≤ 6.
#[test]
fn criterion_8() {
    for m in 1..=6 {
        for mu in Composition::all(m) {
            let report = verify_prefix_monotonicity(&mu).unwrap();
            assert!(
                report.passed,
                "μ={mu}: {}",
                report.counterexamples.join("; ")
            );
        }
    }
    println!("[PASS] criterion 8");
}

/// The two special-case set equalities for m ≤ 6: L(μ,μ) is the left cell
/// of w_{J(μ)} for partitions μ, and dropping a final part of 1 gives the
/// 𝔛*-translates of the left cell one rank down.
#[test]
fn criterion_9() {
    for m in 2..=6 {
        let ctx = HeckeContext::get(m).unwrap();
        let cells = CellStructure::get(m).unwrap();
        for mu in Partition::all(m) {
            if mu.parts().is_empty() {
                continue;
            }
            let muc = mu.as_composition();
            let pair = PairOfPartitions::new(mu.parts().to_vec(), muc.clone()).unwrap();
            let sets = cell_union_sets(&pair).unwrap();
            let wj = ctx.index_of(&parabolic(m, &muc.j_set()).longest);
            let cell: BTreeSet<usize> =
                cells.left_cells[cells.left_cell_of(wj)].iter().copied().collect();
            assert_eq!(sets.l_lambda_mu, cell, "μ={muc}");

            if mu.parts().last() == Some(&1) && mu.parts().len() >= 2 {
                let lambda = mu.parts()[..mu.parts().len() - 1].to_vec();
                let pair = PairOfPartitions::new(lambda.clone(), muc.clone()).unwrap();
                let sets = cell_union_sets(&pair).unwrap();
                let small = HeckeContext::get(m - 1).unwrap();
                let small_cells = CellStructure::get(m - 1).unwrap();
                let lam = Composition::new(lambda).unwrap();
                let wjl = small.index_of(&parabolic(m - 1, &lam.j_set()).longest);
                let (_, xstar) = coset_rep_x_star(m - 1);
                let mut expect = BTreeSet::new();
                for &u in &small_cells.left_cells[small_cells.left_cell_of(wjl)] {
                    let u_big = small.perms[u].embed(m);
                    for x in &xstar {
                        expect.insert(ctx.index_of(&x.compose(&u_big)));
                    }
                }
                assert_eq!(sets.l_lambda_mu, expect, "μ={muc}");
            }
        }
    }
    println!("[PASS] criterion 9");
}

/// Parabolic expansion-support constraints and the coefficient identity
/// relating the C and C′ structure constants, for S_n ⊂ S_{n+1}, n = 2, 3.
#[test]
fn criterion_10() {
    for n in 2..=3 {
        let compat = verify_parabolic_compatibility(n).unwrap();
        assert!(compat.passed(), "{compat}");
        let expansion = verify_parabolic_expansion(n).unwrap();
        assert!(expansion.passed(), "{expansion}");
    }
    println!("[PASS] criterion 10");
}

//! Cell modules and the behaviour of right cells under induction from S_n
//! to S_{n+1} and restriction back.
//!
//! A right cell 𝔠 of S_n determines the module S_𝔠 = M_𝔠 / M̂_𝔠 where M_𝔠
//! (resp. M̂_𝔠) is spanned by the C_y with y ≤_R 𝔠 (resp. y <_R 𝔠).  Inducing
//! S_𝔠 to S_{n+1} yields a module filtered by cell modules of S_{n+1}, one
//! for each outer corner of the shape of 𝔠; restricting a cell module of
//! S_{n+1} yields a filtration by cell modules of S_n, one per inner corner.
//! Both decompositions are computed here together with explicit filtrations
//! whose layers are verified to be closed under the relevant generators,
//! with factor isomorphisms certified by matrix-representation equality.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::hecke::{left_coset_factorize, CellStructure, HeckeContext};
use crate::ring::LaurentPoly;
use crate::symgroup::{coset_rep_x_star, Permutation};
use crate::tableaux::{Partition, Tableau};
use crate::{Error, Result};

/// The basis data of the cell modules attached to one right cell: the cell
/// itself, the down-set {w : w ≤_R 𝔠} spanning M_𝔠, and the strict down-set
/// spanning M̂_𝔠.
pub struct CellModuleBasis {
    pub m: usize,
    pub cell: Vec<usize>,
    pub down_set: Vec<usize>,
    pub strict_down_set: Vec<usize>,
}

pub fn cell_module_basis(m: usize, cell_index: usize) -> Result<CellModuleBasis> {
    let ctx = HeckeContext::get(m)?;
    let cells = CellStructure::get(m)?;
    let cell = cells.right_cells[cell_index].clone();
    let rep = cell[0];
    let down_set: Vec<usize> =
        (0..ctx.num_elements()).filter(|&w| cells.leq_r(w, rep)).collect();
    let strict_down_set: Vec<usize> =
        down_set.iter().copied().filter(|&w| !cells.sim_r(w, rep)).collect();
    Ok(CellModuleBasis { m, cell, down_set, strict_down_set })
}

/// Whether the span of {C_w : w ∈ support} is closed under right
/// multiplication by every T_s with s ∈ gens.
pub fn is_right_module(
    ctx: &HeckeContext,
    support: &BTreeSet<usize>,
    gens: impl Iterator<Item = usize> + Clone,
) -> bool {
    support.iter().all(|&w| {
        gens.clone().all(|s| {
            ctx.c_alpha_right(w, s).iter().all(|(x, _)| support.contains(x))
        })
    })
}

/// One factor of an induction decomposition: the outer corner, the right
/// cell of S_{n+1} whose recording tableau adds n+1 at that corner, and its
/// shape.
pub struct InductionFactor {
    pub corner: (usize, usize),
    pub cell: Vec<usize>,
    pub shape: Partition,
}

/// The decomposition 𝔠𝔛′ = ⊔_k 𝔠_k over the outer corners of the shape of
/// 𝔠, with corners listed in ascending node order.
pub struct InductionDecomposition {
    pub n: usize,
    pub source_cell: Vec<usize>,
    pub source_shape: Partition,
    pub factors: Vec<InductionFactor>,
}

/// One factor of a restriction decomposition: the inner corner k, the entry
/// i(k) removed by reverse insertion, the translate d_k = x_{i(k)}^{-1}, and
/// the right cell of S_n with the resulting recording tableau.
pub struct RestrictionFactor {
    pub corner: (usize, usize),
    pub removed_entry: usize,
    pub d_k: Permutation,
    pub cell: Vec<usize>,
    pub shape: Partition,
}

/// The decomposition 𝔠 = ⊔_k d_k 𝔠_k over the inner corners of the shape of
/// 𝔠 ⊆ S_{n+1}, with corners listed in ascending node order.
pub struct RestrictionDecomposition {
    pub n_plus_1: usize,
    pub source_cell: Vec<usize>,
    pub source_shape: Partition,
    pub factors: Vec<RestrictionFactor>,
}

fn cell_with_recording(cells: &CellStructure, t: &Tableau) -> Result<usize> {
    cells
        .right_recording
        .iter()
        .position(|q| q == t)
        .ok_or_else(|| {
            Error::Verification("no right cell has the required recording tableau".into())
        })
}

fn tableau_with_entry(t: &Tableau, node: (usize, usize), entry: usize) -> Tableau {
    let (r, c) = node;
    let mut rows: Vec<Vec<usize>> = t.rows().to_vec();
    if r - 1 < rows.len() {
        assert_eq!(rows[r - 1].len() + 1, c, "not an outer corner");
        rows[r - 1].push(entry);
    } else {
        assert_eq!((r, c), (rows.len() + 1, 1), "not an outer corner");
        rows.push(vec![entry]);
    }
    Tableau::new(rows)
}

/// Decompose 𝔠𝔛′ into right cells of S_{n+1}, one per outer corner of the
/// shape of the right cell 𝔠 of S_n, and verify the decomposition
/// constructively (disjoint union, shape monotonicity, dimension count).
pub fn induce_cell(n: usize, cell_index: usize) -> Result<InductionDecomposition> {
    let small = HeckeContext::get(n)?;
    let small_cells = CellStructure::get(n)?;
    let big = HeckeContext::get(n + 1)?;
    let big_cells = CellStructure::get(n + 1)?;
    let source_cell = small_cells.right_cells[cell_index].clone();
    let recording = &small_cells.right_recording[cell_index];
    let source_shape = small_cells.right_shapes[cell_index].clone();
    let (_, oc) = source_shape.corners();

    let mut factors = Vec::new();
    for &k in &oc {
        let a_k = tableau_with_entry(recording, k, n + 1);
        let c_k = cell_with_recording(&big_cells, &a_k)?;
        factors.push(InductionFactor {
            corner: k,
            cell: big_cells.right_cells[c_k].clone(),
            shape: big_cells.right_shapes[c_k].clone(),
        });
    }

    // constructive union check: 𝔠𝔛′ = ⊔ 𝔠_k
    let (xprime, _) = coset_rep_x_star(n);
    let mut product: BTreeSet<usize> = BTreeSet::new();
    for &u in &source_cell {
        let u_big = small.perms[u].embed(n + 1);
        for x in &xprime {
            product.insert(big.index_of(&u_big.compose(x)));
        }
    }
    let mut union: BTreeSet<usize> = BTreeSet::new();
    let mut total = 0usize;
    for f in &factors {
        union.extend(f.cell.iter().copied());
        total += f.cell.len();
    }
    if union != product || union.len() != total {
        return Err(Error::Verification(format!(
            "induced product set of cell {cell_index} of S_{n} is not the disjoint \
             union of the corner cells"
        )));
    }
    // along ascending corner order the shapes strictly decrease in dominance
    for pair in factors.windows(2) {
        if !pair[1].shape.dominance_lt(&pair[0].shape) {
            return Err(Error::Verification(format!(
                "induced factor shapes out of dominance order for cell {cell_index} of S_{n}"
            )));
        }
    }
    let dim: u64 = factors.iter().map(|f| f.shape.standard_tableau_count()).sum();
    if dim != (n as u64 + 1) * source_shape.standard_tableau_count() {
        return Err(Error::Verification("induced dimension count mismatch".into()));
    }
    Ok(InductionDecomposition { n, source_cell, source_shape, factors })
}

/// Decompose a right cell 𝔠 of S_{n+1} as ⊔_k d_k 𝔠_k over the inner
/// corners of its shape, with d_k = x_{i(k)}^{-1} and 𝔠_k the right cell of
/// S_n whose recording tableau is obtained by reverse-inserting from k.
pub fn restrict_cell(n_plus_1: usize, cell_index: usize) -> Result<RestrictionDecomposition> {
    let n = n_plus_1 - 1;
    let small = HeckeContext::get(n)?;
    let small_cells = CellStructure::get(n)?;
    let big = HeckeContext::get(n_plus_1)?;
    let big_cells = CellStructure::get(n_plus_1)?;
    let source_cell = big_cells.right_cells[cell_index].clone();
    let recording = &big_cells.right_recording[cell_index];
    let source_shape = big_cells.right_shapes[cell_index].clone();
    let (ic, _) = source_shape.corners();
    let (_, xstar) = coset_rep_x_star(n);

    let mut factors = Vec::new();
    for &k in &ic {
        let mut a = recording.clone();
        let i_k = a.reverse_insert_from(k);
        let a_k = a.relabel(|x| if x > i_k { x - 1 } else { x });
        let c_k = cell_with_recording(&small_cells, &a_k)?;
        factors.push(RestrictionFactor {
            corner: k,
            removed_entry: i_k,
            d_k: xstar[i_k - 1].clone(),
            cell: small_cells.right_cells[c_k].clone(),
            shape: small_cells.right_shapes[c_k].clone(),
        });
    }

    // constructive union check: 𝔠 = ⊔ d_k 𝔠_k
    let mut union: BTreeSet<usize> = BTreeSet::new();
    let mut total = 0usize;
    for f in &factors {
        for &u in &f.cell {
            union.insert(big.index_of(&f.d_k.compose(&small.perms[u].embed(n_plus_1))));
        }
        total += f.cell.len();
    }
    let source_set: BTreeSet<usize> = source_cell.iter().copied().collect();
    if union != source_set || union.len() != total {
        return Err(Error::Verification(format!(
            "cell {cell_index} of S_{n_plus_1} is not the disjoint union of its \
             corner translates"
        )));
    }
    // ascending corner order: shapes strictly increase, the d_k are
    // Bruhat-comparable and increasing
    for pair in factors.windows(2) {
        if !pair[0].shape.dominance_lt(&pair[1].shape) {
            return Err(Error::Verification(format!(
                "restricted factor shapes out of dominance order for cell {cell_index} \
                 of S_{n_plus_1}"
            )));
        }
        if !pair[0].d_k.bruhat_leq(&pair[1].d_k) {
            return Err(Error::Verification(format!(
                "translates d_k not Bruhat-monotone for cell {cell_index} of S_{n_plus_1}"
            )));
        }
    }
    let dim: u64 = factors.iter().map(|f| f.shape.standard_tableau_count()).sum();
    if dim != source_shape.standard_tableau_count() {
        return Err(Error::Verification("restricted dimension count mismatch".into()));
    }
    Ok(RestrictionDecomposition { n_plus_1, source_cell, source_shape, factors })
}

/// One verified layer of a cell-module filtration.
pub struct FiltrationLayer {
    pub corner: (usize, usize),
    pub shape: Partition,
    /// Factor-basis labels: elements of the factor cell, in its own rank.
    pub cell: Vec<usize>,
    pub d_k: Option<Permutation>,
    /// Elements (ambient rank) whose C-basis vectors enter the span at this
    /// layer.
    pub new_members: Vec<usize>,
    pub closure_verified: bool,
    /// For each generator s (in order), the matrix of T_s on the factor in
    /// the canonical C-basis; equality with the cell-module matrices is part
    /// of the verification.
    pub factor_matrices: Vec<Vec<Vec<LaurentPoly>>>,
}

pub struct FiltrationReport {
    pub ambient_rank: usize,
    pub source_cell_shape: Partition,
    /// 𝔇: the ambient elements spanning the bottom layer L_0.
    pub base_set: Vec<usize>,
    pub layers: Vec<FiltrationLayer>,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct FactorJson {
    pub corner: [usize; 2],
    pub shape: Vec<usize>,
    pub cell_size: usize,
    pub d_k: Option<Vec<u8>>,
}

#[derive(Serialize)]
pub struct FiltrationReportJson {
    pub source_cell_shape: Vec<usize>,
    pub factors: Vec<FactorJson>,
    pub verified: bool,
}

impl FiltrationReport {
    pub fn to_json(&self) -> FiltrationReportJson {
        FiltrationReportJson {
            source_cell_shape: self.source_cell_shape.parts().to_vec(),
            factors: self
                .layers
                .iter()
                .map(|l| FactorJson {
                    corner: [l.corner.0, l.corner.1],
                    shape: l.shape.parts().to_vec(),
                    cell_size: l.cell.len(),
                    d_k: l.d_k.as_ref().map(|d| d.one_line().to_vec()),
                })
                .collect(),
            verified: self.verified,
        }
    }
}

/// The filtration of the induced module S_𝔠 ↑ of a right cell 𝔠 of S_n,
/// with layers L_j spanned by {C_w : w ∈ 𝔇 ∪ ∪_{i≤j} 𝔠_{k_i}} inside the
/// full algebra of S_{n+1}, where 𝔇 = {yv : y <_R 𝔠, v ∈ 𝔛′} spans M̂_𝔠 H
/// and the outer corners are taken in descending node order so the factor
/// shapes strictly increase in dominance along the filtration.
pub fn induced_cell_filtration(n: usize, cell_index: usize) -> Result<FiltrationReport> {
    let dec = induce_cell(n, cell_index)?;
    let small = HeckeContext::get(n)?;
    let small_cells = CellStructure::get(n)?;
    let big = HeckeContext::get(n + 1)?;
    let big_cells = CellStructure::get(n + 1)?;
    let (xprime, _) = coset_rep_x_star(n);
    let rep = dec.source_cell[0];

    let mut base: BTreeSet<usize> = BTreeSet::new();
    for y in 0..small.num_elements() {
        if small_cells.lt_r(y, rep) {
            let y_big = small.perms[y].embed(n + 1);
            for x in &xprime {
                base.insert(big.index_of(&y_big.compose(x)));
            }
        }
    }

    let gens: Vec<usize> = (1..=n).collect();
    let mut verified = is_right_module(&big, &base, gens.iter().copied());
    let mut support = base.clone();
    let mut layers = Vec::new();
    for f in dec.factors.iter().rev() {
        let lower = support.clone();
        support.extend(f.cell.iter().copied());
        // closure: the expansion of C_w T_s for each new w stays in L_j
        let mut closure = true;
        for &w in &f.cell {
            for &s in &gens {
                if !big.c_alpha_right(w, s).iter().all(|(x, _)| support.contains(x)) {
                    closure = false;
                }
            }
        }
        // factor matrices, with the ignored terms certified to lie both in
        // L_{j-1} and strictly below the factor cell (so the factor affords
        // the same matrix representation as the cell module S_{𝔠_{k_j}})
        let pos: BTreeMapUsize = f.cell.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut matrices = Vec::new();
        for &s in &gens {
            let mut mat = vec![vec![LaurentPoly::zero(); f.cell.len()]; f.cell.len()];
            for (row, &w) in f.cell.iter().enumerate() {
                for (x, coeff) in big.c_alpha_right(w, s) {
                    if let Some(&col) = pos.get(&x) {
                        mat[row][col] = coeff;
                    } else if !lower.contains(&x) || !big_cells.lt_r(x, w) {
                        closure = false;
                    }
                }
            }
            matrices.push(mat);
        }
        // each L_j is an order ideal for ≤_R on its support
        for &w in &support {
            for x in 0..big.num_elements() {
                if big_cells.leq_r(x, w) && !support.contains(&x) {
                    closure = false;
                }
            }
        }
        verified = verified && closure;
        layers.push(FiltrationLayer {
            corner: f.corner,
            shape: f.shape.clone(),
            cell: f.cell.clone(),
            d_k: None,
            new_members: f.cell.clone(),
            closure_verified: closure,
            factor_matrices: matrices,
        });
    }
    Ok(FiltrationReport {
        ambient_rank: n + 1,
        source_cell_shape: dec.source_shape,
        base_set: base.into_iter().collect(),
        layers,
        verified,
    })
}

type BTreeMapUsize = std::collections::BTreeMap<usize, usize>;

/// The filtration of the restricted module S_𝔠 ↓ of a right cell 𝔠 of
/// S_{n+1}, with layers L_j spanned by {C_w : w ∈ 𝔇 ∪ ∪_{i≤j} d_{k_i}𝔠_{k_i}}
/// where 𝔇 = {z : z <_R 𝔠}, the inner corners are taken in ascending node
/// order, and closure is required only under the generators of S_n.  The
/// factor over layer j is certified isomorphic to the cell module of 𝔠_{k_j}
/// by the coefficient map C_u ↦ C_{d_j u}: the expansion of C_{d_j u} T_s is
/// checked to split into the translated cell-module expansion of C_u T_s
/// plus terms C_{xu′} with x < d_j, u′ ≤_LR u-side data, all inside L_{j-1}.
pub fn restricted_cell_filtration(
    n_plus_1: usize,
    cell_index: usize,
) -> Result<FiltrationReport> {
    let n = n_plus_1 - 1;
    let dec = restrict_cell(n_plus_1, cell_index)?;
    let small = HeckeContext::get(n)?;
    let small_cells = CellStructure::get(n)?;
    let big = HeckeContext::get(n_plus_1)?;
    let big_cells = CellStructure::get(n_plus_1)?;
    let rep = dec.source_cell[0];

    let base: BTreeSet<usize> =
        (0..big.num_elements()).filter(|&z| big_cells.lt_r(z, rep)).collect();
    let gens: Vec<usize> = (1..n).collect();
    let mut verified = is_right_module(&big, &base, gens.iter().copied());
    if gens.is_empty() {
        // S_1 has no generators; nothing to close under
        verified = true;
    }

    let mut support = base.clone();
    let mut layers = Vec::new();
    for f in &dec.factors {
        let lower = support.clone();
        let translate: Vec<usize> = f
            .cell
            .iter()
            .map(|&u| big.index_of(&f.d_k.compose(&small.perms[u].embed(n_plus_1))))
            .collect();
        support.extend(translate.iter().copied());
        let pos: BTreeMapUsize = f.cell.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut closure = true;
        let mut matrices = Vec::new();
        for &s in &gens {
            let dim = f.cell.len();
            let mut factor_mat = vec![vec![LaurentPoly::zero(); dim]; dim];
            let mut cell_mat = vec![vec![LaurentPoly::zero(); dim]; dim];
            for (row, (&u, &w)) in f.cell.iter().zip(&translate).enumerate() {
                // cell-module matrix of T_s on S_{𝔠_j} inside S_n
                for (x, coeff) in small.c_alpha_right(u, s) {
                    if let Some(&col) = pos.get(&x) {
                        cell_mat[row][col] = coeff;
                    } else if !small_cells.lt_r(x, u) {
                        closure = false;
                    }
                }
                // expansion of C_{d_j u} T_s inside S_{n+1}: the leading
                // terms C_{d_j u'} reproduce the cell-module coefficients and
                // everything else must lie in L_{j-1} with the predicted
                // support (x < d_j, u' ≤_LR 𝔠_j-side, w' ≤_R d_j u)
                for (wx, coeff) in big.c_alpha_right(w, s) {
                    let (x, uprime) = left_coset_factorize(&big, wx);
                    let up_small = small.index_of(&uprime.restrict(n));
                    if x == f.d_k {
                        if let Some(&col) = pos.get(&up_small) {
                            factor_mat[row][col] = coeff;
                            continue;
                        }
                        // d_j u' with u' <_R 𝔠_j: must already be in L_{j-1}
                        if !small_cells.lt_r(up_small, u)
                            || !lower.contains(&wx)
                            || coeff != small.c_alpha_right(u, s)
                                .into_iter()
                                .find(|(z, _)| *z == up_small)
                                .map(|(_, c)| c)
                                .unwrap_or_else(LaurentPoly::zero)
                        {
                            closure = false;
                        }
                    } else if !(x.bruhat_leq(&f.d_k)
                        && x != f.d_k
                        && small_cells.leq_lr(up_small, u)
                        && big_cells.leq_r(wx, w)
                        && lower.contains(&wx))
                    {
                        closure = false;
                    }
                }
            }
            if factor_mat != cell_mat {
                closure = false;
            }
            matrices.push(factor_mat);
        }
        verified = verified && closure;
        layers.push(FiltrationLayer {
            corner: f.corner,
            shape: f.shape.clone(),
            cell: f.cell.clone(),
            d_k: Some(f.d_k.clone()),
            new_members: translate,
            closure_verified: closure,
            factor_matrices: matrices,
        });
    }
    let source_set: BTreeSet<usize> = dec.source_cell.iter().copied().collect();
    if support
        != base.union(&source_set).copied().collect::<BTreeSet<usize>>()
    {
        verified = false;
    }
    Ok(FiltrationReport {
        ambient_rank: n_plus_1,
        source_cell_shape: dec.source_shape,
        base_set: base.into_iter().collect(),
        layers,
        verified,
    })
}

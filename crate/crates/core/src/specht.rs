//! Specht modules for the Hecke algebra via the C-basis, and explicit
//! Specht filtrations for induced and restricted Specht modules.
//!
//! For compositions λ, μ of m with λ″ = μ′ the Specht module is
//! S^λ = x_λ T_{w_E} C_{w_{J(μ)}} H, where E is the unique diagram with row
//! composition λ and column composition μ, and it has the A-basis
//! {x_λ T_{w_E} C_w : w ∼_R w_{J(μ)}}.  Premultiplication by x_λ T_{w_E}
//! kills every C_w with w <_R w_{J(μ)}, which turns the cell-module
//! filtrations of the induced and restricted modules into Specht
//! filtrations: the factors are cell modules of the neighbouring symmetric
//! group, hence Specht modules for the factor shapes.

use std::collections::{BTreeMap, BTreeSet};

use crate::cells::{induce_cell, restrict_cell, FactorJson, FiltrationReportJson};
use crate::hecke::{CellStructure, Coeffs, HeckeContext};
use crate::ring::LaurentPoly;
use crate::symgroup::{coset_rep_x_star, parabolic, Permutation};
use crate::tableaux::{special_diagram, Composition, Partition};
use crate::{Error, Result};

/// Rank of a matrix over A = Z[v, v^{-1}] by fraction-free (Bareiss)
/// elimination; every division is exact because the intermediate entries
/// are minors, and A is an integral domain.
pub fn rank_over_a(mut m: Vec<Vec<LaurentPoly>>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = LaurentPoly::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = m[i][j].mul(&m[rank][col]).sub(&m[i][col].mul(&m[rank][j]));
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            m[i][col] = LaurentPoly::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

fn independent(vectors: &[&Coeffs]) -> bool {
    if vectors.is_empty() {
        return true;
    }
    let mut columns: BTreeMap<usize, usize> = BTreeMap::new();
    for v in vectors {
        for &w in v.keys() {
            let next = columns.len();
            columns.entry(w).or_insert(next);
        }
    }
    let matrix: Vec<Vec<LaurentPoly>> = vectors
        .iter()
        .map(|v| {
            let mut row = vec![LaurentPoly::zero(); columns.len()];
            for (w, p) in v.iter() {
                row[columns[w]] = p.clone();
            }
            row
        })
        .collect();
    rank_over_a(matrix) == vectors.len()
}

/// x_λ = Σ_{w ∈ W_{J(λ)}} T_w and y_λ = Σ_{w ∈ W_{J(λ)}} (−q)^{−l(w)} T_w,
/// as T-basis coefficient vectors in the algebra of S_m (m ≥ |λ|).
pub fn x_y_elements(lambda: &Composition, m: usize) -> Result<(Coeffs, Coeffs)> {
    if lambda.total() > m {
        return Err(Error::RankMismatch(format!(
            "composition of {} does not fit in rank {m}",
            lambda.total()
        )));
    }
    let ctx = HeckeContext::get(m)?;
    let pd = parabolic(m, &lambda.j_set());
    let mut x = Coeffs::new();
    let mut y = Coeffs::new();
    for w in &pd.subgroup {
        let idx = ctx.index_of(w);
        let l = w.length();
        x.insert(idx, LaurentPoly::one());
        y.insert(idx, LaurentPoly::sign(l).shift(-2 * l as i64));
    }
    Ok((x, y))
}

/// A Specht module with its C-basis presentation.
pub struct SpechtModule {
    pub lambda: Composition,
    pub mu: Composition,
    pub m: usize,
    pub shape: Partition,
    pub w_e: Permutation,
    /// The right cell of w_{J(μ)} (element indices in S_m).
    pub cell: Vec<usize>,
    /// The basis vectors x_λ T_{w_E} C_w in T-basis coordinates, aligned
    /// with `cell`.
    pub basis: Vec<Coeffs>,
}

fn check_admissible(lambda: &Composition, mu: &Composition) -> Result<()> {
    if lambda.total() != mu.total() {
        return Err(Error::ShapeMismatch(format!(
            "lambda and mu must have equal size, got {} and {}",
            lambda.total(),
            mu.total()
        )));
    }
    if lambda.sorted_partition() != mu.conjugate() {
        return Err(Error::ShapeMismatch(format!(
            "lambda''=mu' required, got lambda={lambda} mu={mu}"
        )));
    }
    Ok(())
}

/// The premultiplier x_λ T_{w_E} of the Specht presentation, as a T-basis
/// vector in the algebra of S_m (m ≥ |λ|).
fn specht_prefactor(
    ctx: &HeckeContext,
    lambda: &Composition,
    mu: &Composition,
) -> Result<(Coeffs, Permutation)> {
    let e = special_diagram(lambda, mu)?;
    let w_e = e.w_of_diagram().embed(ctx.m);
    let (x, _) = x_y_elements(lambda, ctx.m)?;
    Ok((ctx.t_mul_basis(&x, ctx.index_of(&w_e)), w_e))
}

/// Memoizing map w ↦ x_λ T_{w_E} C_w for one ambient context.
struct SpechtProducts<'a> {
    ctx: &'a HeckeContext,
    prefactor: Coeffs,
    cache: BTreeMap<usize, Coeffs>,
}

impl<'a> SpechtProducts<'a> {
    fn get(&mut self, w: usize) -> &Coeffs {
        if !self.cache.contains_key(&w) {
            let mut out = Coeffs::new();
            for (&x, p) in self.ctx.c_t(w) {
                for (&z, c) in &self.ctx.t_mul_basis(&self.prefactor, x) {
                    let entry = out.entry(z).or_insert_with(LaurentPoly::zero);
                    *entry = entry.add(&c.mul(p));
                }
            }
            out.retain(|_, p| !p.is_zero());
            self.cache.insert(w, out);
        }
        &self.cache[&w]
    }

    /// Apply the prefactor to an A-combination of C-basis elements.
    fn apply(&mut self, combo: &[(usize, LaurentPoly)]) -> Coeffs {
        let mut out = Coeffs::new();
        for (w, a) in combo {
            for (z, c) in self.get(*w).clone() {
                let entry = out.entry(z).or_insert_with(LaurentPoly::zero);
                *entry = entry.add(&c.mul(a));
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

/// Build S^λ = x_λ T_{w_E} C_{w_{J(μ)}} H with its C-basis, verifying basis
/// size (= number of standard tableaux of shape λ″), A-linear independence,
/// and that the strict down-set of the cell is killed by the prefactor.
pub fn specht_basis(lambda: &Composition, mu: &Composition) -> Result<SpechtModule> {
    check_admissible(lambda, mu)?;
    let m = lambda.total();
    let ctx = HeckeContext::get(m)?;
    let cells = CellStructure::get(m)?;
    let (prefactor, w_e) = specht_prefactor(&ctx, lambda, mu)?;
    let wj = ctx.index_of(&parabolic(m, &mu.j_set()).longest);
    let cell_idx = cells.right_cell_of(wj);
    let cell = cells.right_cells[cell_idx].clone();
    let shape = cells.right_shapes[cell_idx].clone();
    if shape != lambda.sorted_partition() {
        return Err(Error::Verification(format!(
            "cell of w_J(mu) has shape {shape}, expected lambda''"
        )));
    }
    let mut products = SpechtProducts { ctx: &ctx, prefactor, cache: BTreeMap::new() };
    let basis: Vec<Coeffs> = cell.iter().map(|&w| products.get(w).clone()).collect();
    if basis.len() as u64 != shape.standard_tableau_count() {
        return Err(Error::Verification("Specht basis size mismatch".into()));
    }
    if !independent(&basis.iter().collect::<Vec<_>>()) {
        return Err(Error::Verification("Specht basis is A-linearly dependent".into()));
    }
    // kernel containment: C_w with w strictly below the cell maps to zero
    for w in 0..ctx.num_elements() {
        if cells.lt_r(w, wj) && !products.get(w).is_empty() {
            return Err(Error::Verification(format!(
                "x_lambda T_E C_w nonzero for w = {} below the cell",
                ctx.perms[w]
            )));
        }
    }
    Ok(SpechtModule { lambda: lambda.clone(), mu: mu.clone(), m, shape, w_e, cell, basis })
}

/// One verified layer of a Specht filtration.
pub struct SpechtLayer {
    pub corner: (usize, usize),
    pub shape: Partition,
    pub cell_size: usize,
    pub d_k: Option<Permutation>,
    pub closure_verified: bool,
    pub factor_matrices: Vec<Vec<Vec<LaurentPoly>>>,
}

pub struct SpechtFiltrationReport {
    pub lambda: Composition,
    pub mu: Composition,
    pub ambient_rank: usize,
    pub source_cell_shape: Partition,
    pub basis_size: usize,
    pub layers: Vec<SpechtLayer>,
    pub verified: bool,
}

impl SpechtFiltrationReport {
    pub fn to_json(&self) -> FiltrationReportJson {
        FiltrationReportJson {
            source_cell_shape: self.source_cell_shape.parts().to_vec(),
            factors: self
                .layers
                .iter()
                .map(|l| FactorJson {
                    corner: [l.corner.0, l.corner.1],
                    shape: l.shape.parts().to_vec(),
                    cell_size: l.cell_size,
                    d_k: l.d_k.as_ref().map(|d| d.one_line().to_vec()),
                })
                .collect(),
            verified: self.verified,
        }
    }

    pub fn factor_shapes(&self) -> Vec<Partition> {
        self.layers.iter().map(|l| l.shape.clone()).collect()
    }
}

/// The Specht filtration of the induced module S^λ H for λ, μ ⊨ n inside
/// the algebra of S_{n+1}: layers L̄_i spanned by x_λ T_{w_E} C_w over the
/// corner cells of induce_cell in descending corner order, so factor shapes
/// are strictly dominance-increasing.
pub fn induced_specht_filtration(
    lambda: &Composition,
    mu: &Composition,
    n: usize,
) -> Result<SpechtFiltrationReport> {
    check_admissible(lambda, mu)?;
    if lambda.total() != n {
        return Err(Error::RankMismatch(format!(
            "lambda must be a composition of {n}"
        )));
    }
    let small = HeckeContext::get(n)?;
    let small_cells = CellStructure::get(n)?;
    let big = HeckeContext::get(n + 1)?;
    let wj_small = small.index_of(&parabolic(n, &mu.j_set()).longest);
    let cell_idx = small_cells.right_cell_of(wj_small);
    let dec = induce_cell(n, cell_idx)?;
    let (prefactor, _) = specht_prefactor(&big, lambda, mu)?;
    let mut products = SpechtProducts { ctx: &big, prefactor, cache: BTreeMap::new() };

    // 𝔇 spans M̂_𝔠 H; the prefactor must kill it (the kernel identity)
    let (xprime, _) = coset_rep_x_star(n);
    let mut base: BTreeSet<usize> = BTreeSet::new();
    for y in 0..small.num_elements() {
        if small_cells.lt_r(y, wj_small) {
            let y_big = small.perms[y].embed(n + 1);
            for x in &xprime {
                base.insert(big.index_of(&y_big.compose(x)));
            }
        }
    }
    let mut verified = base.iter().all(|&w| products.get(w).is_empty());

    // basis of S^λ H: one vector per element of 𝔠𝔛′, grouped layer by layer
    let mut layers = Vec::new();
    let mut placed: BTreeMap<usize, usize> = BTreeMap::new(); // w -> layer
    let mut all_vectors: Vec<Coeffs> = Vec::new();
    for (layer_no, f) in dec.factors.iter().rev().enumerate() {
        for &w in &f.cell {
            placed.insert(w, layer_no);
            all_vectors.push(products.get(w).clone());
        }
    }
    let expect = (n as u64 + 1) * dec.source_shape.standard_tableau_count();
    if all_vectors.len() as u64 != expect
        || !independent(&all_vectors.iter().collect::<Vec<_>>())
    {
        return Err(Error::Verification(
            "induced Specht basis has the wrong rank".into(),
        ));
    }

    for (layer_no, f) in dec.factors.iter().rev().enumerate() {
        let pos: BTreeMap<usize, usize> =
            f.cell.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut closure = true;
        let mut matrices = Vec::new();
        for s in 1..=n {
            let dim = f.cell.len();
            let mut mat = vec![vec![LaurentPoly::zero(); dim]; dim];
            for (row, &w) in f.cell.iter().enumerate() {
                let mut residual: Vec<(usize, LaurentPoly)> = Vec::new();
                for (z, coeff) in big.c_alpha_right(w, s) {
                    if let Some(&col) = pos.get(&z) {
                        mat[row][col] = coeff; // Σ1: the factor action
                    } else if matches!(placed.get(&z), Some(&l) if l < layer_no) {
                        // Σ2: lands in L̄_{i-1}
                    } else if base.contains(&z) {
                        residual.push((z, coeff)); // Σ3: must vanish
                    } else {
                        closure = false;
                    }
                }
                if !products.apply(&residual).is_empty() {
                    closure = false;
                }
            }
            matrices.push(mat);
        }
        verified = verified && closure;
        layers.push(SpechtLayer {
            corner: f.corner,
            shape: f.shape.clone(),
            cell_size: f.cell.len(),
            d_k: None,
            closure_verified: closure,
            factor_matrices: matrices,
        });
    }
    for pair in layers.windows(2) {
        if !pair[0].shape.dominance_lt(&pair[1].shape) {
            verified = false;
        }
    }
    Ok(SpechtFiltrationReport {
        lambda: lambda.clone(),
        mu: mu.clone(),
        ambient_rank: n + 1,
        source_cell_shape: dec.source_shape,
        basis_size: all_vectors.len(),
        layers,
        verified,
    })
}

/// The Specht filtration of S^λ restricted to the algebra of S_n, for
/// λ, μ ⊨ n+1: layers L̄_i spanned by x_λ T_{w_E} C_w over the translated
/// corner cells d_j 𝔠_j of restrict_cell in ascending corner order; closure
/// is required only under the generators of S_n, and each factor affords the
/// same matrix representation as the cell module of 𝔠_j inside S_n.
pub fn restricted_specht_filtration(
    lambda: &Composition,
    mu: &Composition,
    n_plus_1: usize,
) -> Result<SpechtFiltrationReport> {
    check_admissible(lambda, mu)?;
    if lambda.total() != n_plus_1 {
        return Err(Error::RankMismatch(format!(
            "lambda must be a composition of {n_plus_1}"
        )));
    }
    let n = n_plus_1 - 1;
    let small = HeckeContext::get(n)?;
    let big = HeckeContext::get(n_plus_1)?;
    let big_cells = CellStructure::get(n_plus_1)?;
    let wj = big.index_of(&parabolic(n_plus_1, &mu.j_set()).longest);
    let cell_idx = big_cells.right_cell_of(wj);
    let dec = restrict_cell(n_plus_1, cell_idx)?;
    let (prefactor, _) = specht_prefactor(&big, lambda, mu)?;
    let mut products = SpechtProducts { ctx: &big, prefactor, cache: BTreeMap::new() };

    let mut verified = (0..big.num_elements())
        .filter(|&z| big_cells.lt_r(z, wj))
        .all(|z| products.get(z).is_empty());

    // the basis splits into blocks over the translates d_j 𝔠_j
    let mut placed: BTreeMap<usize, usize> = BTreeMap::new();
    let mut all_vectors: Vec<Coeffs> = Vec::new();
    let translates: Vec<Vec<usize>> = dec
        .factors
        .iter()
        .map(|f| {
            f.cell
                .iter()
                .map(|&u| big.index_of(&f.d_k.compose(&small.perms[u].embed(n_plus_1))))
                .collect()
        })
        .collect();
    for (layer_no, t) in translates.iter().enumerate() {
        for &w in t {
            placed.insert(w, layer_no);
            all_vectors.push(products.get(w).clone());
        }
    }
    if all_vectors.len() as u64 != dec.source_shape.standard_tableau_count()
        || !independent(&all_vectors.iter().collect::<Vec<_>>())
    {
        return Err(Error::Verification(
            "restricted Specht basis has the wrong rank".into(),
        ));
    }

    let mut layers = Vec::new();
    for (layer_no, (f, translate)) in dec.factors.iter().zip(&translates).enumerate() {
        let pos: BTreeMap<usize, usize> =
            f.cell.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut closure = true;
        let mut matrices = Vec::new();
        for s in 1..n {
            let dim = f.cell.len();
            let mut factor_mat = vec![vec![LaurentPoly::zero(); dim]; dim];
            let mut cell_mat = vec![vec![LaurentPoly::zero(); dim]; dim];
            for (row, (&u, &w)) in f.cell.iter().zip(translate).enumerate() {
                for (x, coeff) in small.c_alpha_right(u, s) {
                    if let Some(&col) = pos.get(&x) {
                        cell_mat[row][col] = coeff;
                    }
                }
                let mut residual: Vec<(usize, LaurentPoly)> = Vec::new();
                for (z, coeff) in big.c_alpha_right(w, s) {
                    match placed.get(&z) {
                        Some(&l) if l == layer_no && translate.contains(&z) => {
                            let col = translate.iter().position(|&t| t == z).unwrap();
                            factor_mat[row][col] = coeff;
                        }
                        Some(&l) if l < layer_no => {}
                        None if big_cells.lt_r(z, wj) => residual.push((z, coeff)),
                        _ => closure = false,
                    }
                }
                if !products.apply(&residual).is_empty() {
                    closure = false;
                }
            }
            if factor_mat != cell_mat {
                closure = false;
            }
            matrices.push(factor_mat);
        }
        verified = verified && closure;
        layers.push(SpechtLayer {
            corner: f.corner,
            shape: f.shape.clone(),
            cell_size: f.cell.len(),
            d_k: Some(f.d_k.clone()),
            closure_verified: closure,
            factor_matrices: matrices,
        });
    }
    for pair in layers.windows(2) {
        if !pair[0].shape.dominance_lt(&pair[1].shape) {
            verified = false;
        }
    }
    Ok(SpechtFiltrationReport {
        lambda: lambda.clone(),
        mu: mu.clone(),
        ambient_rank: n_plus_1,
        source_cell_shape: dec.source_shape,
        basis_size: all_vectors.len(),
        layers,
        verified,
    })
}

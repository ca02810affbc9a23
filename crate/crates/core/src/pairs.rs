//! Sequences of type μ, the left-cell order ideal L(μ), and the
//! correspondence between pairs of partitions and unions of left cells.
//!
//! A sequence of type μ = (μ_1,…,μ_r) contains the symbol i exactly μ_i
//! times.  Substituting the decreasing runs d^μ(i) for the symbols turns
//! these sequences bijectively into L(μ) = {w : w ≤_L w_{J(μ)}}.  A quality
//! scan marks each symbol good or bad; the counts of good symbols form the
//! sharp partition μ^♯ of a sequence, and the fibers and super-level sets of
//! μ^♯ are the unions of left cells L(μ;λ) and L(λ,μ) studied here, with
//! counts governed by c-semistandard tableaux.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::hecke::{CellStructure, HeckeContext};
use crate::symgroup::{parabolic, Permutation};
use crate::tableaux::{
    c_semistandard_tableaux, rs_insert, Composition, Partition, Tableau, TypedTableau,
};
use crate::{Error, Result};

/// A sequence over {1..r} in which symbol i occurs μ_i times.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypedSequence {
    pub symbols: Vec<usize>,
    pub mu: Composition,
}

impl TypedSequence {
    pub fn new(symbols: Vec<usize>, mu: Composition) -> Result<Self> {
        let r = mu.parts().len();
        let mut counts = vec![0usize; r];
        for &s in &symbols {
            if s == 0 || s > r {
                return Err(Error::InvalidComposition(format!(
                    "symbol {s} out of range for type {mu}"
                )));
            }
            counts[s - 1] += 1;
        }
        if counts != mu.parts() {
            return Err(Error::InvalidComposition(format!(
                "sequence does not have type {mu}"
            )));
        }
        Ok(TypedSequence { symbols, mu })
    }

    /// All sequences of type μ in lexicographic order.
    pub fn all(mu: &Composition) -> Vec<TypedSequence> {
        fn go(
            remaining: &mut [usize],
            prefix: &mut Vec<usize>,
            total: usize,
            mu: &Composition,
            out: &mut Vec<TypedSequence>,
        ) {
            if prefix.len() == total {
                out.push(TypedSequence { symbols: prefix.clone(), mu: mu.clone() });
                return;
            }
            for s in 0..remaining.len() {
                if remaining[s] > 0 {
                    remaining[s] -= 1;
                    prefix.push(s + 1);
                    go(remaining, prefix, total, mu, out);
                    prefix.pop();
                    remaining[s] += 1;
                }
            }
        }
        let mut remaining: Vec<usize> = mu.parts().to_vec();
        let mut out = Vec::new();
        go(&mut remaining, &mut Vec::new(), mu.total(), mu, &mut out);
        out
    }

    /// Per-position good/bad flags: every 1 is good, and an occurrence of
    /// i+1 is good exactly when the number of previous good i's exceeds the
    /// number of previous good (i+1)'s.
    pub fn quality(&self) -> Vec<bool> {
        let r = self.mu.parts().len();
        let mut good_counts = vec![0usize; r + 1];
        let mut flags = Vec::with_capacity(self.symbols.len());
        for &s in &self.symbols {
            let good = s == 1 || good_counts[s - 1] > good_counts[s];
            if good {
                good_counts[s] += 1;
            }
            flags.push(good);
        }
        flags
    }

    /// μ^♯: the partition whose i-th part counts the good i's, with
    /// trailing zeros dropped.
    pub fn sharp(&self) -> Partition {
        let r = self.mu.parts().len();
        let mut counts = vec![0usize; r + 1];
        for (&s, good) in self.symbols.iter().zip(self.quality()) {
            if good {
                counts[s] += 1;
            }
        }
        let mut parts: Vec<usize> = counts[1..].to_vec();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition::new(parts).expect("good counts are weakly decreasing")
    }
}

/// The decreasing run d^μ(i) from μ_1+⋯+μ_i down to μ_1+⋯+μ_{i-1}+1.
pub fn d_mu(mu: &Composition, i: usize) -> Vec<usize> {
    assert!(i >= 1 && i <= mu.parts().len(), "index out of range");
    let lo: usize = mu.parts()[..i - 1].iter().sum();
    let hi = lo + mu.parts()[i - 1];
    (lo + 1..=hi).rev().collect()
}

/// The permutation w(t): replace the i's of t, left to right, by the
/// members of d^μ(i) in order; the result is the one-line form.
pub fn w_of_sequence(t: &TypedSequence) -> Permutation {
    let runs: Vec<Vec<usize>> =
        (1..=t.mu.parts().len()).map(|i| d_mu(&t.mu, i)).collect();
    let mut used = vec![0usize; runs.len()];
    let images: Vec<u8> = t
        .symbols
        .iter()
        .map(|&s| {
            let v = runs[s - 1][used[s - 1]] as u8;
            used[s - 1] += 1;
            v
        })
        .collect();
    Permutation::from_images(images).expect("substitution yields a permutation")
}

/// Recover the sequence with w(t) = w by reading off which run d^μ(i) each
/// value belongs to; fails if the runs do not appear in decreasing order.
pub fn sequence_of_w(w: &Permutation, mu: &Composition) -> Result<TypedSequence> {
    let mut boundaries = vec![0usize];
    for &p in mu.parts() {
        boundaries.push(boundaries.last().unwrap() + p);
    }
    let symbols: Vec<usize> = w
        .one_line()
        .iter()
        .map(|&v| boundaries.partition_point(|&b| b < v as usize))
        .collect();
    let t = TypedSequence::new(symbols, mu.clone())?;
    if &w_of_sequence(&t) != w {
        return Err(Error::Verification(format!(
            "{w} is not of the form w(t) for type {mu}"
        )));
    }
    Ok(t)
}

/// λ ⪯ ν componentwise, padding the shorter sequence with zeros.
pub fn preceq(a: &[usize], b: &[usize]) -> bool {
    (0..a.len().max(b.len()))
        .all(|i| a.get(i).copied().unwrap_or(0) <= b.get(i).copied().unwrap_or(0))
}

/// A pair of partitions for μ: λ weakly decreasing with λ_i ≤ μ_i.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairOfPartitions {
    pub lambda: Vec<usize>,
    pub mu: Composition,
}

impl PairOfPartitions {
    pub fn new(mut lambda: Vec<usize>, mu: Composition) -> Result<Self> {
        while lambda.last() == Some(&0) {
            lambda.pop();
        }
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidComposition(format!(
                "{lambda:?} is not weakly decreasing"
            )));
        }
        if lambda.len() > mu.parts().len()
            || lambda.iter().zip(mu.parts()).any(|(&l, &m)| l > m)
        {
            return Err(Error::InvalidComposition(format!(
                "{lambda:?} is not bounded by {mu}"
            )));
        }
        Ok(PairOfPartitions { lambda, mu })
    }

    /// All valid λ for the given μ.
    pub fn all_lambdas(mu: &Composition) -> Vec<Vec<usize>> {
        fn go(mu: &[usize], cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push({
                let mut p = prefix.clone();
                while p.last() == Some(&0) {
                    p.pop();
                }
                p
            });
            if prefix.len() == mu.len() {
                return;
            }
            let bound = cap.min(mu[prefix.len()]);
            for part in (1..=bound).rev() {
                prefix.push(part);
                go(mu, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(mu.parts(), usize::MAX, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }
}

/// The column word of a c-semistandard tableau (columns left to right, each
/// read bottom to top) and the insertion tableau P_T of w of that word,
/// computed by the substitution shortcut and verified against direct
/// insertion.
pub fn word_and_ptableau(t: &TypedTableau) -> Result<(TypedSequence, Tableau)> {
    if !t.is_c_semistandard() {
        return Err(Error::ShapeMismatch(
            "tableau is not c-semistandard".to_string(),
        ));
    }
    let num_cols = t.rows.first().map(Vec::len).unwrap_or(0);
    let mut symbols = Vec::new();
    for c in 0..num_cols {
        for row in t.rows.iter().rev() {
            if let Some(&s) = row.get(c) {
                symbols.push(s);
            }
        }
    }
    let seq = TypedSequence::new(symbols, t.tab_type.clone())?;
    // shortcut: replace the i's of T, bottom row to top, by d^μ(i)
    let runs: Vec<Vec<usize>> =
        (1..=t.tab_type.parts().len()).map(|i| d_mu(&t.tab_type, i)).collect();
    let mut used = vec![0usize; runs.len()];
    let mut filled: Vec<Vec<usize>> = t.rows.clone();
    for i in 1..=runs.len() {
        for r in (0..t.rows.len()).rev() {
            for (c, &s) in t.rows[r].iter().enumerate() {
                if s == i {
                    filled[r][c] = runs[i - 1][used[i - 1]];
                    used[i - 1] += 1;
                }
            }
        }
    }
    let shortcut = Tableau::new(filled);
    let direct = rs_insert(&w_of_sequence(&seq)).0;
    if shortcut != direct {
        return Err(Error::Verification(
            "substitution shortcut disagrees with direct insertion".to_string(),
        ));
    }
    Ok((seq, shortcut))
}

/// Verification outcome in the shape of the JSON report: the claim, the
/// instance count, and any counterexamples.
#[derive(Serialize)]
pub struct PairsReport {
    pub mu: Vec<usize>,
    pub lambda: Vec<usize>,
    pub claim: String,
    pub checked: usize,
    pub passed: bool,
    pub counterexamples: Vec<String>,
}

impl PairsReport {
    fn new(mu: &Composition, lambda: &[usize], claim: impl Into<String>) -> Self {
        PairsReport {
            mu: mu.parts().to_vec(),
            lambda: lambda.to_vec(),
            claim: claim.into(),
            checked: 0,
            passed: true,
            counterexamples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.counterexamples.push(detail());
        }
    }
}

/// L(μ) with its sharp data: element index ↦ (sequence, μ^♯).
pub struct LmuData {
    pub mu: Composition,
    pub m: usize,
    /// Map from element index in S_m to the sharp partition of its sequence.
    pub sharp_of: BTreeMap<usize, Partition>,
    pub w_j: usize,
}

pub fn l_mu_data(mu: &Composition) -> Result<LmuData> {
    let m = mu.total();
    let ctx = HeckeContext::get(m)?;
    let mut sharp_of = BTreeMap::new();
    for t in TypedSequence::all(mu) {
        let w = ctx.index_of(&w_of_sequence(&t));
        if sharp_of.insert(w, t.sharp()).is_some() {
            return Err(Error::Verification(format!(
                "w(t) is not injective for type {mu}"
            )));
        }
    }
    let w_j = ctx.index_of(&parabolic(m, &mu.j_set()).longest);
    Ok(LmuData { mu: mu.clone(), m, sharp_of, w_j })
}

/// The sets L(μ;λ) = {w(t) : μ^♯(t) = λ} and L(λ,μ) = {w(t) : μ^♯(t) ⪰ λ},
/// together with the left cells making up L(λ,μ).  Verifies that both sets
/// are unions of left cells and that L(λ,μ) = ∪_{λ⪯ν⪯μ} L(μ;ν).
pub struct CellUnionSets {
    pub l_mu_lambda: BTreeSet<usize>,
    pub l_lambda_mu: BTreeSet<usize>,
    pub cells: Vec<usize>,
}

pub fn cell_union_sets(pair: &PairOfPartitions) -> Result<CellUnionSets> {
    let data = l_mu_data(&pair.mu)?;
    let cells = CellStructure::get(data.m)?;
    let l_mu_lambda: BTreeSet<usize> = data
        .sharp_of
        .iter()
        .filter(|(_, s)| s.parts() == pair.lambda.as_slice())
        .map(|(&w, _)| w)
        .collect();
    let l_lambda_mu: BTreeSet<usize> = data
        .sharp_of
        .iter()
        .filter(|(_, s)| preceq(&pair.lambda, s.parts()))
        .map(|(&w, _)| w)
        .collect();
    for (name, set) in [("L(mu;lambda)", &l_mu_lambda), ("L(lambda,mu)", &l_lambda_mu)] {
        for &w in set.iter() {
            let cell = cells.left_cell_of(w);
            if !cells.left_cells[cell].iter().all(|x| set.contains(x)) {
                return Err(Error::Verification(format!(
                    "{name} is not a union of left cells for lambda={:?} mu={}",
                    pair.lambda, pair.mu
                )));
            }
        }
    }
    // L(λ,μ) = ∪_{λ⪯ν⪯μ} L(μ;ν): every sharp value above λ is also below μ
    let union: BTreeSet<usize> = data
        .sharp_of
        .iter()
        .filter(|(_, s)| {
            preceq(&pair.lambda, s.parts()) && preceq(s.parts(), pair.mu.parts())
        })
        .map(|(&w, _)| w)
        .collect();
    if union != l_lambda_mu {
        return Err(Error::Verification(format!(
            "L(lambda,mu) union identity fails for lambda={:?} mu={}",
            pair.lambda, pair.mu
        )));
    }
    let mut cell_list: Vec<usize> =
        l_lambda_mu.iter().map(|&w| cells.left_cell_of(w)).collect();
    cell_list.sort_unstable();
    cell_list.dedup();
    Ok(CellUnionSets { l_mu_lambda, l_lambda_mu, cells: cell_list })
}

/// The number of left cells inside L(μ) of shape λ equals the number of
/// c-semistandard λ-tableaux of type μ; the map T ↦ P_T hits the insertion
/// tableaux of those cells bijectively.
pub fn verify_kostka_cell_count(mu: &Composition, lambda: &Partition) -> Result<PairsReport> {
    let data = l_mu_data(mu)?;
    let cells = CellStructure::get(data.m)?;
    let mut report = PairsReport::new(
        mu,
        lambda.parts(),
        "left cells in L(mu) of shape lambda are counted by c-semistandard tableaux",
    );
    let mut cell_indices: BTreeSet<usize> = BTreeSet::new();
    for &w in data.sharp_of.keys() {
        let c = cells.left_cell_of(w);
        if cells.left_shapes[c] == *lambda {
            cell_indices.insert(c);
        }
    }
    let tableaux = c_semistandard_tableaux(lambda, mu);
    report.check(cell_indices.len() == tableaux.len(), || {
        format!(
            "{} cells vs {} tableaux",
            cell_indices.len(),
            tableaux.len()
        )
    });
    // T ↦ P_T lands on the insertion tableaux of exactly those cells
    let mut p_tableaux = BTreeSet::new();
    for t in &tableaux {
        let (_, p) = word_and_ptableau(t)?;
        report.check(p_tableaux.insert(format!("{p:?}")), || {
            format!("P_T repeated for shape {lambda} type {mu}")
        });
    }
    let cell_p: BTreeSet<String> = cell_indices
        .iter()
        .map(|&c| format!("{:?}", cells.left_insertion[c]))
        .collect();
    report.check(p_tableaux == cell_p, || {
        format!("P_T values do not match the cell insertion tableaux for {lambda}, {mu}")
    });
    Ok(report)
}

/// For every e ∈ 𝔛_{J(μ)} and every prefix d of e, the sharp partitions
/// satisfy μ^♯(t) ⪯ μ^♯(t′) where e⁻¹w_J = w(t) and d⁻¹w_J = w(t′);
/// consequently each set {e : e⁻¹w_J ∈ L(λ,μ)} is prefix-closed.
pub fn verify_prefix_monotonicity(mu: &Composition) -> Result<PairsReport> {
    let m = mu.total();
    let ctx = HeckeContext::get(m)?;
    let data = l_mu_data(mu)?;
    let pd = parabolic(m, &mu.j_set());
    let w_j = &pd.longest;
    let mut report = PairsReport::new(
        mu,
        &[],
        "sharp partitions grow along prefixes; the pair sets have the Schreier property",
    );
    // sharp value of e^{-1} w_J for each distinguished representative e
    let mut sharp_of_e: BTreeMap<Permutation, Partition> = BTreeMap::new();
    for e in &pd.reps {
        let w = e.inverse().compose(w_j);
        match data.sharp_of.get(&ctx.index_of(&w)) {
            Some(s) => {
                sharp_of_e.insert(e.clone(), s.clone());
            }
            None => report.check(false, || format!("{w} outside L(mu) for e={e}")),
        }
    }
    for (e, s_e) in &sharp_of_e {
        for d in e.prefixes() {
            let s_d = &sharp_of_e[&d];
            report.check(preceq(s_e.parts(), s_d.parts()), || {
                format!("sharp not monotone at e={e}, d={d} for mu={mu}")
            });
        }
    }
    for lambda in PairOfPartitions::all_lambdas(mu) {
        let members: BTreeSet<&Permutation> = sharp_of_e
            .iter()
            .filter(|(_, s)| preceq(&lambda, s.parts()))
            .map(|(e, _)| e)
            .collect();
        for &e in &members {
            for d in e.prefixes() {
                report.check(members.contains(&d), || {
                    format!(
                        "Schreier property fails at e={e}, d={d} for lambda={lambda:?} mu={mu}"
                    )
                });
            }
        }
    }
    Ok(report)
}

/// Open experiment: is the complement L(μ) \ L(λ,μ) closed downward under
/// ≤_L?  Reported, never asserted.
pub fn explore_downward_closure(pair: &PairOfPartitions) -> Result<PairsReport> {
    let data = l_mu_data(&pair.mu)?;
    let ctx = HeckeContext::get(data.m)?;
    let cells = CellStructure::get(data.m)?;
    let sets = cell_union_sets(pair)?;
    let mut report = PairsReport::new(
        &pair.mu,
        &pair.lambda,
        "open question: the complement of L(lambda,mu) in L(mu) is a left order ideal",
    );
    let complement: BTreeSet<usize> = data
        .sharp_of
        .keys()
        .filter(|w| !sets.l_lambda_mu.contains(w))
        .copied()
        .collect();
    for &y in &complement {
        for &x in data.sharp_of.keys() {
            if cells.leq_l(&ctx, x, y) {
                report.check(complement.contains(&x), || {
                    format!(
                        "x={} <=_L y={} leaves the complement for lambda={:?} mu={}",
                        ctx.perms[x], ctx.perms[y], pair.lambda, pair.mu
                    )
                });
            }
        }
    }
    Ok(report)
}

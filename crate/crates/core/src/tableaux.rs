//! Compositions, partitions, diagrams, Young tableaux, dominance order,
//! Robinson–Schensted insertion, and corner combinatorics.
//!
//! Nodes are (row, column) pairs indexed from 1, ordered row-major:
//! (i,j) < (i',j') iff i < i', or i = i' and j < j'.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::symgroup::Permutation;
use crate::{Error, Result};

/// A composition of m: a finite sequence of positive parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidComposition(format!("{parts:?}")));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The conjugate λ′ with λ′_j = #{i : λ_i ≥ j}; always a partition.
    pub fn conjugate(&self) -> Partition {
        conjugate_parts(&self.parts)
    }

    /// λ″: the decreasing rearrangement of the parts (conjugate of the conjugate).
    pub fn sorted_partition(&self) -> Partition {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The generator set J(λ) = S \ {s_{λ_1}, s_{λ_1+λ_2}, ...}.
    pub fn j_set(&self) -> Vec<usize> {
        crate::symgroup::j_of_composition(&self.parts)
    }

    /// All compositions of m in lexicographic order.
    pub fn all(m: usize) -> Vec<Composition> {
        fn go(rem: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if rem == 0 {
                out.push(Composition { parts: cur.clone() });
                return;
            }
            for p in 1..=rem {
                cur.push(p);
                go(rem - p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(m, &mut Vec::new(), &mut out);
        out
    }
}

fn conjugate_parts(parts: &[usize]) -> Partition {
    let max = parts.iter().copied().max().unwrap_or(0);
    Partition {
        parts: (1..=max)
            .map(|j| parts.iter().filter(|&&p| p >= j).count())
            .collect(),
    }
}

/// A partition: weakly decreasing positive parts.  The empty partition is
/// allowed (it arises as the zero partition in pairs of partitions).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidComposition(format!("{parts:?} is not a partition")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: vec![] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.parts.len()
    }

    pub fn conjugate(&self) -> Partition {
        conjugate_parts(&self.parts)
    }

    pub fn as_composition(&self) -> Composition {
        Composition { parts: self.parts.clone() }
    }

    /// Dominance: prefix sums of self ≤ prefix sums of other throughout.
    /// Only meaningful for partitions of the same total.
    pub fn dominance_leq(&self, other: &Partition) -> bool {
        assert_eq!(self.total(), other.total(), "dominance compares partitions of equal total");
        let rows = self.parts.len().max(other.parts.len());
        let mut a = 0;
        let mut b = 0;
        for i in 1..=rows {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }

    pub fn dominance_lt(&self, other: &Partition) -> bool {
        self != other && self.dominance_leq(other)
    }

    /// All partitions of m, in decreasing lexicographic order.
    pub fn all(m: usize) -> Vec<Partition> {
        fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(m, m, &mut Vec::new(), &mut out);
        out
    }

    /// The number of standard Young tableaux of this shape (hook lengths).
    pub fn standard_tableau_count(&self) -> u64 {
        let m = self.total() as u64;
        let conj = self.conjugate();
        let mut num: u128 = 1;
        for k in 1..=m as u128 {
            num *= k;
        }
        let mut den: u128 = 1;
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 1..=row {
                let hook = (row - j) + (conj.part(j) - (i + 1)) + 1;
                den *= hook as u128;
            }
        }
        (num / den) as u64
    }

    /// Inner corners (removable nodes) and outer corners (addable nodes),
    /// each sorted in the row-major node order.
    pub fn corners(&self) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
        let r = self.parts.len();
        let mut ic = Vec::new();
        let mut oc = vec![(1, self.part(1) + 1)];
        for i in 1..=r {
            if self.part(i) > self.part(i + 1) {
                ic.push((i, self.part(i)));
            }
            if i >= 2 && self.part(i - 1) > self.part(i) {
                oc.push((i, self.part(i) + 1));
            }
        }
        oc.push((r + 1, 1));
        if r == 0 {
            // the empty shape has the single addable node (1,1)
            oc = vec![(1, 1)];
        }
        (ic, oc)
    }

    pub fn with_box_added(&self, corner: (usize, usize)) -> Partition {
        let mut parts = self.parts.clone();
        if corner.0 > parts.len() {
            parts.push(1);
        } else {
            parts[corner.0 - 1] += 1;
        }
        assert_eq!(parts[corner.0 - 1], corner.1);
        Partition { parts }
    }

    pub fn with_box_removed(&self, corner: (usize, usize)) -> Partition {
        let mut parts = self.parts.clone();
        assert_eq!(parts[corner.0 - 1], corner.1);
        parts[corner.0 - 1] -= 1;
        if parts[corner.0 - 1] == 0 {
            parts.remove(corner.0 - 1);
        }
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A general diagram: a finite set of nodes with no empty row or column
/// among 1..max (principal).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    nodes: BTreeSet<(usize, usize)>,
}

impl Diagram {
    pub fn from_nodes(nodes: BTreeSet<(usize, usize)>) -> Self {
        Diagram { nodes }
    }

    pub fn of_partition(lambda: &Partition) -> Self {
        let mut nodes = BTreeSet::new();
        for (i, &row) in lambda.parts().iter().enumerate() {
            for j in 1..=row {
                nodes.insert((i + 1, j));
            }
        }
        Diagram { nodes }
    }

    pub fn nodes(&self) -> &BTreeSet<(usize, usize)> {
        &self.nodes
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn row_counts(&self) -> Vec<usize> {
        let max = self.nodes.iter().map(|n| n.0).max().unwrap_or(0);
        (1..=max)
            .map(|i| self.nodes.iter().filter(|n| n.0 == i).count())
            .collect()
    }

    pub fn column_counts(&self) -> Vec<usize> {
        let max = self.nodes.iter().map(|n| n.1).max().unwrap_or(0);
        (1..=max)
            .map(|j| self.nodes.iter().filter(|n| n.1 == j).count())
            .collect()
    }

    pub fn is_principal(&self) -> bool {
        !self.row_counts().contains(&0) && !self.column_counts().contains(&0)
    }

    /// The permutation w_D with t^D · w_D = t_D, where t^D numbers the nodes
    /// row by row and t_D numbers them column by column.
    pub fn w_of_diagram(&self) -> Permutation {
        let m = self.nodes.len();
        let row_order: Vec<(usize, usize)> = self.nodes.iter().copied().collect();
        let mut col_order = row_order.clone();
        col_order.sort_by_key(|&(r, c)| (c, r));
        let mut images = vec![0u8; m];
        for (k, node) in col_order.iter().enumerate() {
            let pos = row_order.iter().position(|n| n == node).unwrap();
            // t^D assigns pos+1 to this node; t_D assigns k+1
            images[pos] = (k + 1) as u8;
        }
        Permutation::from_images(images).unwrap()
    }
}

/// The unique principal diagram with row counts λ and column counts μ,
/// which exists iff λ″ = μ′.
pub fn special_diagram(lambda: &Composition, mu: &Composition) -> Result<Diagram> {
    if lambda.sorted_partition() != mu.conjugate() {
        return Err(Error::ShapeMismatch(format!(
            "lambda''=mu' required, got lambda''={} and mu'={}",
            lambda.sorted_partition(),
            mu.conjugate()
        )));
    }
    // Rank the columns by decreasing length (ties by index); column j then
    // meets exactly the rows with λ_i ≥ rank(j).  Row i meets the λ_i
    // highest-ranked columns, and column j meets μ″_{rank(j)} = μ_j rows.
    let mu_parts = mu.parts();
    let mut order: Vec<usize> = (0..mu_parts.len()).collect();
    order.sort_by_key(|&j| (std::cmp::Reverse(mu_parts[j]), j));
    let mut rank = vec![0usize; mu_parts.len()];
    for (k, &j) in order.iter().enumerate() {
        rank[j] = k + 1;
    }
    let mut nodes = BTreeSet::new();
    for (i, &li) in lambda.parts().iter().enumerate() {
        for (j, &rj) in rank.iter().enumerate() {
            if rj <= li {
                nodes.insert((i + 1, j + 1));
            }
        }
    }
    let d = Diagram { nodes };
    debug_assert_eq!(d.row_counts(), lambda.parts());
    debug_assert_eq!(d.column_counts(), mu.parts());
    Ok(d)
}

/// A Young tableau with distinct positive entries, strictly increasing
/// along rows and down columns.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Self {
        let t = Tableau { rows };
        assert!(t.is_valid(), "rows/columns must strictly increase");
        t
    }

    pub fn empty() -> Self {
        Tableau { rows: vec![] }
    }

    fn is_valid(&self) -> bool {
        for (i, row) in self.rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if i > 0 && row.len() > self.rows[i - 1].len() {
                return false;
            }
            if i > 0 && row.iter().enumerate().any(|(j, &v)| v <= self.rows[i - 1][j]) {
                return false;
            }
        }
        true
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition { parts: self.rows.iter().map(Vec::len).collect() }
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// True if the entries are exactly 1..m.
    pub fn is_standard(&self) -> bool {
        let m = self.size();
        let set: BTreeSet<usize> = self.rows.iter().flatten().copied().collect();
        set.len() == m && set.iter().all(|&v| v >= 1 && v <= m)
    }

    pub fn entry(&self, node: (usize, usize)) -> usize {
        self.rows[node.0 - 1][node.1 - 1]
    }

    pub fn find(&self, value: usize) -> Option<(usize, usize)> {
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(j) = row.iter().position(|&v| v == value) {
                return Some((i + 1, j + 1));
            }
        }
        None
    }

    /// Row-insert a value; returns the node where the new box appears.
    pub fn insert(&mut self, mut x: usize) -> (usize, usize) {
        for (i, row) in self.rows.iter_mut().enumerate() {
            match row.iter().position(|&v| v > x) {
                Some(j) => std::mem::swap(&mut x, &mut row[j]),
                None => {
                    row.push(x);
                    return (i + 1, row.len());
                }
            }
        }
        self.rows.push(vec![x]);
        (self.rows.len(), 1)
    }

    /// Reverse a row insertion starting from the inner corner `node`:
    /// removes that box and returns the value bumped out of the first row.
    pub fn reverse_insert_from(&mut self, node: (usize, usize)) -> usize {
        let (r, c) = node;
        assert_eq!(c, self.rows[r - 1].len(), "not an inner corner");
        assert!(r == self.rows.len() || self.rows[r].len() < c, "not an inner corner");
        let mut x = self.rows[r - 1].pop().unwrap();
        if self.rows[r - 1].is_empty() {
            self.rows.pop();
        }
        for i in (0..r - 1).rev() {
            let row = &mut self.rows[i];
            let j = row.partition_point(|&v| v < x) - 1;
            std::mem::swap(&mut x, &mut row[j]);
        }
        x
    }

    /// Relabel every entry through the map f (must stay a valid tableau).
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Tableau {
        Tableau::new(
            self.rows
                .iter()
                .map(|row| row.iter().map(|&v| f(v)).collect())
                .collect(),
        )
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .rows
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v:>width$}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

/// Robinson–Schensted row insertion of the one-line form, left to right.
/// Returns (insertion tableau P, recording tableau Q).
pub fn rs_insert(w: &Permutation) -> (Tableau, Tableau) {
    let mut p = Tableau::empty();
    let mut q_rows: Vec<Vec<usize>> = Vec::new();
    for i in 1..=w.rank() {
        let (r, c) = p.insert(w.image(i));
        if r > q_rows.len() {
            q_rows.push(Vec::new());
        }
        debug_assert_eq!(q_rows[r - 1].len() + 1, c);
        q_rows[r - 1].push(i);
    }
    (p, Tableau::new(q_rows))
}

/// The inverse Robinson–Schensted correspondence.
pub fn rs_reverse_insert(p: &Tableau, q: &Tableau) -> Result<Permutation> {
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch(format!(
            "P shape {} != Q shape {}",
            p.shape(),
            q.shape()
        )));
    }
    let m = p.size();
    let mut p = p.clone();
    let mut word = vec![0u8; m];
    for k in (1..=m).rev() {
        let node = q.find(k).ok_or_else(|| {
            Error::ShapeMismatch(format!("recording tableau is missing entry {k}"))
        })?;
        word[k - 1] = p.reverse_insert_from(node) as u8;
    }
    Permutation::from_images(word)
}

/// A tableau of a Young shape with repeated symbol entries of a given type μ
/// (symbol i occurs μ_i times).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TypedTableau {
    pub rows: Vec<Vec<usize>>,
    pub tab_type: Composition,
}

impl TypedTableau {
    pub fn shape(&self) -> Partition {
        Partition { parts: self.rows.iter().map(Vec::len).collect() }
    }

    /// Strictly increasing along rows, non-decreasing down columns
    /// (the conjugate of the usual semistandard condition).
    pub fn is_c_semistandard(&self) -> bool {
        for (i, row) in self.rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if i > 0
                && row
                    .iter()
                    .enumerate()
                    .take(self.rows[i - 1].len())
                    .any(|(j, &v)| v < self.rows[i - 1][j])
            {
                return false;
            }
        }
        true
    }

    /// Weakly increasing along rows, strictly increasing down columns.
    pub fn is_semistandard(&self) -> bool {
        for (i, row) in self.rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0] > w[1]) {
                return false;
            }
            if i > 0
                && row
                    .iter()
                    .enumerate()
                    .take(self.rows[i - 1].len())
                    .any(|(j, &v)| v <= self.rows[i - 1][j])
            {
                return false;
            }
        }
        true
    }
}

/// All fillings of shape λ with type μ passing the given filter, in
/// lexicographic order of the row-reading word.
fn typed_fillings(
    lambda: &Partition,
    mu: &Composition,
    keep: impl Fn(&TypedTableau) -> bool + Copy,
) -> Vec<TypedTableau> {
    assert_eq!(lambda.total(), mu.total(), "shape and type must have equal size");
    let shape: Vec<usize> = lambda.parts().to_vec();
    let mut remaining: Vec<usize> = mu.parts().to_vec();
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|&l| Vec::with_capacity(l)).collect();
    let mut out = Vec::new();
    fn go(
        shape: &[usize],
        mu: &Composition,
        remaining: &mut Vec<usize>,
        rows: &mut Vec<Vec<usize>>,
        row: usize,
        keep: &impl Fn(&TypedTableau) -> bool,
        out: &mut Vec<TypedTableau>,
    ) {
        if row == shape.len() {
            let t = TypedTableau { rows: rows.clone(), tab_type: mu.clone() };
            if keep(&t) {
                out.push(t);
            }
            return;
        }
        if rows[row].len() == shape[row] {
            go(shape, mu, remaining, rows, row + 1, keep, out);
            return;
        }
        for sym in 1..=remaining.len() {
            if remaining[sym - 1] == 0 {
                continue;
            }
            // prune: rows strictly increase left to right
            if let Some(&last) = rows[row].last() {
                if sym <= last {
                    continue;
                }
            }
            remaining[sym - 1] -= 1;
            rows[row].push(sym);
            go(shape, mu, remaining, rows, row, keep, out);
            rows[row].pop();
            remaining[sym - 1] += 1;
        }
    }
    go(&shape, mu, &mut remaining, &mut rows, 0, &keep, &mut out);
    out
}

/// All c-semistandard λ-tableaux of type μ (strict rows, weak columns).
pub fn c_semistandard_tableaux(lambda: &Partition, mu: &Composition) -> Vec<TypedTableau> {
    typed_fillings(lambda, mu, |t| t.is_c_semistandard())
}

/// All semistandard λ-tableaux of type μ (weak rows, strict columns);
/// their count is the Kostka number K_{λμ}.
pub fn semistandard_tableaux(lambda: &Partition, mu: &Composition) -> Vec<TypedTableau> {
    // row-strict pruning in the shared filler only fits the c-semistandard
    // condition, so enumerate with the full check instead
    assert_eq!(lambda.total(), mu.total(), "shape and type must have equal size");
    let shape: Vec<usize> = lambda.parts().to_vec();
    let mut remaining: Vec<usize> = mu.parts().to_vec();
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|&l| Vec::with_capacity(l)).collect();
    let mut out = Vec::new();
    fn go(
        shape: &[usize],
        mu: &Composition,
        remaining: &mut Vec<usize>,
        rows: &mut Vec<Vec<usize>>,
        row: usize,
        out: &mut Vec<TypedTableau>,
    ) {
        if row == shape.len() {
            out.push(TypedTableau { rows: rows.clone(), tab_type: mu.clone() });
            return;
        }
        if rows[row].len() == shape[row] {
            go(shape, mu, remaining, rows, row + 1, out);
            return;
        }
        let col = rows[row].len();
        for sym in 1..=remaining.len() {
            if remaining[sym - 1] == 0 {
                continue;
            }
            if let Some(&last) = rows[row].last() {
                if sym < last {
                    continue;
                }
            }
            if row > 0 && sym <= rows[row - 1][col] {
                continue;
            }
            remaining[sym - 1] -= 1;
            rows[row].push(sym);
            go(shape, mu, remaining, rows, row, out);
            rows[row].pop();
            remaining[sym - 1] += 1;
        }
    }
    go(&shape, mu, &mut remaining, &mut rows, 0, &mut out);
    out
}

/// All standard Young tableaux of a given shape.
pub fn standard_tableaux(lambda: &Partition) -> Vec<Tableau> {
    let ones = Composition::new(vec![1; lambda.total()]);
    match ones {
        Ok(ones) => typed_fillings(lambda, &ones, |t| t.is_c_semistandard() && {
            // with distinct entries, also require strict columns
            TypedTableau { rows: t.rows.clone(), tab_type: t.tab_type.clone() }.is_semistandard()
        })
        .into_iter()
        .map(|t| Tableau::new(t.rows))
        .collect(),
        Err(_) => vec![Tableau::empty()],
    }
}

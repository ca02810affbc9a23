//! The symmetric group S_m as a Coxeter system.
//!
//! Elements are stored in one-line form and act on the right: the image of a
//! point i under w is `w.image(i)`, and the product a·b means "apply a, then
//! b", so that (a·b)(i) = b(a(i)).  Generators are the adjacent
//! transpositions s_i = (i, i+1) for 1 ≤ i ≤ m−1.  Under this convention
//! right multiplication by s_i swaps the *values* i and i+1 in the one-line
//! form, and left multiplication swaps the *positions* i and i+1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An element of S_m in one-line form (1-based values).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation { images: (1..=m as u8).collect() }
    }

    /// The generator s_i = (i, i+1), 1 ≤ i ≤ m−1.
    pub fn gen_s(m: usize, i: usize) -> Self {
        assert!(i >= 1 && i < m, "generator index out of range");
        let mut p = Self::identity(m);
        p.images.swap(i - 1, i);
        p
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m + 1];
        for &v in &images {
            if v == 0 || v as usize > m || seen[v as usize] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// The image of point i (1-based).
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn one_line(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    /// The product self·other: apply self first, then other.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in composition");
        Permutation {
            images: self.images.iter().map(|&v| other.images[v as usize - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v as usize - 1] = (k + 1) as u8;
        }
        Permutation { images }
    }

    /// Coxeter length: the number of inversions of the one-line form.
    pub fn length(&self) -> usize {
        let mut n = 0;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    n += 1;
                }
            }
        }
        n
    }

    /// self·s_i (swaps the values i, i+1).
    pub fn mul_gen_right(&self, i: usize) -> Permutation {
        let mut images = self.images.clone();
        let a = images.iter().position(|&v| v as usize == i).unwrap();
        let b = images.iter().position(|&v| v as usize == i + 1).unwrap();
        images.swap(a, b);
        Permutation { images }
    }

    /// s_i·self (swaps the positions i, i+1).
    pub fn mul_gen_left(&self, i: usize) -> Permutation {
        let mut images = self.images.clone();
        images.swap(i - 1, i);
        Permutation { images }
    }

    /// Generators s with l(w s) < l(w): those with i+1 occurring before i.
    pub fn right_descents(&self) -> Vec<usize> {
        let inv = self.inverse();
        (1..self.rank())
            .filter(|&i| inv.images[i - 1] > inv.images[i])
            .collect()
    }

    /// Generators s with l(s w) < l(w): positions where the one-line form descends.
    pub fn left_descents(&self) -> Vec<usize> {
        (1..self.rank())
            .filter(|&i| self.images[i - 1] > self.images[i])
            .collect()
    }

    /// A reduced word (s_{i_1}, ..., s_{i_l}) with self = s_{i_1}·s_{i_2}···s_{i_l}.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(self.length());
        while let Some(&s) = w.left_descents().first() {
            word.push(s);
            w = w.mul_gen_left(s);
        }
        word
    }

    /// Strong Bruhat order, decided by the tableau criterion: x ≤ y iff for
    /// every k the sorted initial segment x(1..k) is entrywise ≤ that of y.
    pub fn bruhat_leq(&self, other: &Permutation) -> bool {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in Bruhat comparison");
        let m = self.rank();
        let mut xs: Vec<u8> = Vec::with_capacity(m);
        let mut ys: Vec<u8> = Vec::with_capacity(m);
        for k in 0..m {
            let xk = self.images[k];
            xs.insert(xs.partition_point(|&v| v < xk), xk);
            let yk = other.images[k];
            ys.insert(ys.partition_point(|&v| v < yk), yk);
            if xs.iter().zip(&ys).any(|(a, b)| a > b) {
                return false;
            }
        }
        true
    }

    pub fn longest(m: usize) -> Permutation {
        Permutation { images: (1..=m as u8).rev().collect() }
    }

    /// All of S_m in lexicographic one-line order.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=m as u8).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// Embed into S_{m'} (m' ≥ m) fixing the new points.
    pub fn embed(&self, m_new: usize) -> Permutation {
        assert!(m_new >= self.rank());
        let mut images = self.images.clone();
        images.extend(self.rank() as u8 + 1..=m_new as u8);
        Permutation { images }
    }

    /// Restrict to S_{m'} (m' ≤ m); every point above m' must be fixed.
    pub fn restrict(&self, m_new: usize) -> Permutation {
        assert!(m_new <= self.rank());
        assert!(
            self.images[m_new..].iter().enumerate().all(|(i, &x)| x as usize == m_new + i + 1),
            "permutation moves a point above the target rank"
        );
        Permutation { images: self.images[..m_new].to_vec() }
    }

    /// All d such that some reduced word of d is a prefix of a reduced word
    /// of self (the weak right order down-set).
    pub fn prefixes(&self) -> BTreeSet<Permutation> {
        let mut out = BTreeSet::new();
        let mut frontier = vec![self.clone()];
        while let Some(w) = frontier.pop() {
            if out.insert(w.clone()) {
                for s in w.right_descents() {
                    frontier.push(w.mul_gen_right(s));
                }
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The generator set J(μ) = S \ {s_{μ_1}, s_{μ_1+μ_2}, ...} attached to a
/// composition μ of m.
pub fn j_of_composition(parts: &[usize]) -> Vec<usize> {
    let m: usize = parts.iter().sum();
    let mut cuts = BTreeSet::new();
    let mut acc = 0;
    for &p in parts {
        acc += p;
        cuts.insert(acc);
    }
    (1..m).filter(|i| !cuts.contains(i)).collect()
}

/// A standard parabolic subgroup W_J together with its minimal-length right
/// coset representatives.
#[derive(Clone)]
pub struct ParabolicData {
    pub m: usize,
    pub j: Vec<usize>,
    /// Longest element w_J.
    pub longest: Permutation,
    /// 𝔛_J in lexicographic order: the x with x(i) < x(i+1) for all i ∈ J.
    pub reps: Vec<Permutation>,
    /// The elements of W_J in lexicographic order.
    pub subgroup: Vec<Permutation>,
    /// Position blocks cut out by J: maximal runs of consecutive points
    /// connected by generators in J.
    blocks: Vec<(usize, usize)>,
}

impl ParabolicData {
    fn build(m: usize, j: &[usize]) -> ParabolicData {
        let jset: BTreeSet<usize> = j.iter().copied().collect();
        assert!(jset.iter().all(|&s| s >= 1 && s < m), "generator index out of range");
        // blocks: [start, end] inclusive runs of points
        let mut blocks = Vec::new();
        let mut start = 1;
        for i in 1..=m {
            if i == m || !jset.contains(&i) {
                blocks.push((start, i));
                start = i + 1;
            }
        }
        let mut longest = Permutation::identity(m).one_line().to_vec();
        for &(a, b) in &blocks {
            longest[a - 1..b].reverse();
        }
        let longest = Permutation::from_images(longest).unwrap();
        let mut reps = Vec::new();
        let mut subgroup = Vec::new();
        for w in Permutation::all(m) {
            if jset.iter().all(|&s| w.image(s) < w.image(s + 1)) {
                reps.push(w.clone());
            }
            if blocks
                .iter()
                .all(|&(a, b)| (a..=b).all(|i| (a..=b).contains(&w.image(i))))
            {
                subgroup.push(w);
            }
        }
        ParabolicData { m, j: jset.into_iter().collect(), longest, reps, subgroup, blocks }
    }

    /// The unique length-additive factorization w = u·x with u ∈ W_J, x ∈ 𝔛_J.
    pub fn factorize(&self, w: &Permutation) -> (Permutation, Permutation) {
        assert_eq!(w.rank(), self.m, "rank mismatch in coset factorization");
        let mut x = w.one_line().to_vec();
        for &(a, b) in &self.blocks {
            x[a - 1..b].sort_unstable();
        }
        let x = Permutation::from_images(x).unwrap();
        let u = w.compose(&x.inverse());
        (u, x)
    }

    pub fn contains(&self, w: &Permutation) -> bool {
        self.blocks
            .iter()
            .all(|&(a, b)| (a..=b).all(|i| (a..=b).contains(&w.image(i))))
    }
}

static PARABOLIC_CACHE: OnceLock<Mutex<BTreeMap<(usize, Vec<usize>), std::sync::Arc<ParabolicData>>>> =
    OnceLock::new();

/// W_J inside S_m, memoized per (m, J).
pub fn parabolic(m: usize, j: &[usize]) -> std::sync::Arc<ParabolicData> {
    let mut key: Vec<usize> = j.to_vec();
    key.sort_unstable();
    key.dedup();
    let cache = PARABOLIC_CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry((m, key.clone()))
        .or_insert_with(|| std::sync::Arc::new(ParabolicData::build(m, &key)))
        .clone()
}

/// The distinguished representatives for S_n ⊂ S_{n+1}: x_i = s_n···s_i
/// (the (i, i+1, ..., n+1) cycle), returned as (𝔛′ = [x_1..x_{n+1}],
/// 𝔛* = their inverses).
pub fn coset_rep_x_star(n: usize) -> (Vec<Permutation>, Vec<Permutation>) {
    let m = n + 1;
    let mut xprime = Vec::with_capacity(m);
    for i in 1..=m {
        let mut x = Permutation::identity(m);
        for s in (i..=n).rev() {
            // build the product s_n ··· s_i factor by factor
            x = x.mul_gen_right(s);
        }
        xprime.push(x);
    }
    let xstar = xprime.iter().map(Permutation::inverse).collect();
    (xprime, xstar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[u8]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let s1 = Permutation::gen_s(3, 1);
        let s2 = Permutation::gen_s(3, 2);
        assert!(s1.compose(&s1).is_identity());
        assert_eq!(s1.compose(&s2).length(), 2);
        assert_eq!(s2.compose(&s1), p(&[2, 3, 1]));
        let w = p(&[3, 1, 2]);
        assert_eq!(w.compose(&Permutation::identity(3)), w);
    }

    #[test]
    fn length_examples() {
        assert_eq!(Permutation::identity(4).length(), 0);
        assert_eq!(Permutation::longest(3).length(), 3);
        let s1 = Permutation::gen_s(3, 1);
        let s2 = Permutation::gen_s(3, 2);
        assert_eq!(s1.compose(&s2).length(), 2);
    }

    #[test]
    fn descents_and_words() {
        for w in Permutation::all(5) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length());
            let mut acc = Permutation::identity(5);
            // the word multiplies left-to-right
            let mut rest = Permutation::identity(5);
            for &s in word.iter().rev() {
                rest = rest.mul_gen_left(s);
            }
            for &s in &word {
                acc = acc.compose(&Permutation::gen_s(5, s));
            }
            assert_eq!(acc, w);
            assert_eq!(rest, w);
            for s in w.right_descents() {
                assert!(w.mul_gen_right(s).length() + 1 == w.length());
            }
            for s in w.left_descents() {
                assert!(w.mul_gen_left(s).length() + 1 == w.length());
            }
        }
    }

    /// Independent Bruhat oracle: Deodhar's recursion on a right descent.
    fn bruhat_oracle(x: &Permutation, y: &Permutation) -> bool {
        if y.is_identity() {
            return x.is_identity();
        }
        let s = y.right_descents()[0];
        let ys = y.mul_gen_right(s);
        let xs = x.mul_gen_right(s);
        if xs.length() < x.length() {
            bruhat_oracle(&xs, &ys)
        } else {
            bruhat_oracle(x, &ys)
        }
    }

    #[test]
    fn bruhat_matches_recursive_oracle() {
        for m in 1..=4 {
            let all = Permutation::all(m);
            for x in &all {
                for y in &all {
                    assert_eq!(x.bruhat_leq(y), bruhat_oracle(x, y), "x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let e = Permutation::identity(3);
        let s1 = Permutation::gen_s(3, 1);
        let s2 = Permutation::gen_s(3, 2);
        for w in Permutation::all(3) {
            assert!(e.bruhat_leq(&w));
            assert!(w.bruhat_leq(&w));
        }
        assert!(!s1.bruhat_leq(&s2));
        assert!(!s2.bruhat_leq(&s1));
    }

    #[test]
    fn bruhat_is_graded_by_length() {
        // covers differ in length by exactly one
        let all = Permutation::all(4);
        for x in &all {
            for y in &all {
                if x == y || !x.bruhat_leq(y) {
                    continue;
                }
                let is_cover = all.iter().all(|z| {
                    z == x || z == y || !(x.bruhat_leq(z) && z.bruhat_leq(y))
                });
                if is_cover {
                    assert_eq!(y.length(), x.length() + 1, "cover {x} < {y}");
                }
            }
        }
    }

    #[test]
    fn parabolic_examples() {
        let pd = parabolic(3, &[1]);
        assert_eq!(pd.longest, Permutation::gen_s(3, 1));
        assert_eq!(
            pd.reps,
            vec![p(&[1, 2, 3]), p(&[1, 3, 2]), p(&[2, 3, 1])]
        );
        let empty = parabolic(3, &[]);
        assert_eq!(empty.reps.len(), 6);
        assert!(empty.longest.is_identity());
        let full = parabolic(3, &[1, 2]);
        assert_eq!(full.reps, vec![Permutation::identity(3)]);
        assert_eq!(full.longest, Permutation::longest(3));
    }

    #[test]
    fn parabolic_factorization_unique_and_length_additive() {
        for m in 1..=5 {
            for jmask in 0u32..(1 << (m - 1)) {
                let j: Vec<usize> = (1..m).filter(|i| jmask >> (i - 1) & 1 == 1).collect();
                let pd = parabolic(m, &j);
                let mut seen = BTreeSet::new();
                for w in Permutation::all(m) {
                    let (u, x) = pd.factorize(&w);
                    assert!(pd.contains(&u), "u={u} not in W_J, J={j:?}");
                    assert!(pd.reps.contains(&x));
                    assert_eq!(u.compose(&x), w);
                    assert_eq!(u.length() + x.length(), w.length());
                    seen.insert((u, x));
                }
                assert_eq!(seen.len(), factorial(m));
                assert_eq!(pd.reps.len() * pd.subgroup.len(), factorial(m));
                assert!(pd.longest.compose(&pd.longest).is_identity());
            }
        }
    }

    fn factorial(m: usize) -> usize {
        (1..=m).product()
    }

    #[test]
    fn j_of_composition_examples() {
        assert_eq!(j_of_composition(&[2, 1]), vec![1]);
        assert_eq!(j_of_composition(&[4]), vec![1, 2, 3]);
        assert_eq!(j_of_composition(&[1, 1, 1]), Vec::<usize>::new());
    }

    #[test]
    fn prefixes_examples() {
        let e = Permutation::identity(3);
        assert_eq!(e.prefixes(), BTreeSet::from([e.clone()]));
        let s1 = Permutation::gen_s(3, 1);
        assert_eq!(s1.prefixes(), BTreeSet::from([e.clone(), s1.clone()]));
        let s2 = Permutation::gen_s(3, 2);
        let s2s1 = s2.compose(&s1);
        assert_eq!(
            s2s1.prefixes(),
            BTreeSet::from([e.clone(), s2.clone(), s2s1.clone()])
        );
    }

    #[test]
    fn prefixes_are_prefix_closed_and_match_word_enumeration() {
        // oracle: d is a prefix of e iff l(d) + l(d^{-1} e) = l(e)
        for e in Permutation::all(4) {
            let pre = e.prefixes();
            for d in Permutation::all(4) {
                let expected =
                    d.length() + d.inverse().compose(&e).length() == e.length();
                assert_eq!(pre.contains(&d), expected, "d={d} e={e}");
            }
            for d in &pre {
                assert!(d.prefixes().iter().all(|c| pre.contains(c)));
            }
        }
    }

    #[test]
    fn x_star_examples() {
        let (xp, xs) = coset_rep_x_star(2);
        let s2 = Permutation::gen_s(3, 2);
        let s1 = Permutation::gen_s(3, 1);
        assert_eq!(xp, vec![s2.compose(&s1), s2.clone(), Permutation::identity(3)]);
        assert_eq!(xs[0], xp[0].inverse());
        for n in 1..=5 {
            let (xp, _) = coset_rep_x_star(n);
            assert_eq!(xp.len(), n + 1);
            assert!(xp[n].is_identity());
            for (i, x) in xp.iter().enumerate() {
                assert_eq!(x.length(), n - i);
                // x_i is the cycle (i, i+1, ..., n+1)
                let i1 = i + 1;
                for pt in 1..=n + 1 {
                    let expect = if pt < i1 {
                        pt
                    } else if pt == n + 1 {
                        i1
                    } else {
                        pt + 1
                    };
                    assert_eq!(x.image(pt), expect);
                }
            }
            // minimal right coset representatives for S_n < S_{n+1}
            let pd = parabolic(n + 1, &(1..n).collect::<Vec<_>>());
            let mut sorted = xp.clone();
            sorted.sort();
            assert_eq!(sorted, pd.reps);
        }
    }

    proptest! {
        #[test]
        fn group_axioms(seed in 0usize..24, seed2 in 0usize..24, seed3 in 0usize..24) {
            let all = Permutation::all(4);
            let a = &all[seed];
            let b = &all[seed2];
            let c = &all[seed3];
            prop_assert_eq!(a.compose(b).compose(c), a.compose(&b.compose(c)));
            prop_assert_eq!(a.compose(&a.inverse()), Permutation::identity(4));
            prop_assert_eq!(&a.inverse().inverse(), a);
            prop_assert_eq!(a.length(), a.inverse().length());
        }
    }
}

//! Integer partitions, β-sets and the p-abacus.
//!
//! A partition is stored as its list of parts; the abacus is only built on
//! demand from a β-set. Every listing of partitions uses descending
//! lexicographic order, so `(4) (3,1) (2,2) (2,1,1) (1,1,1,1)` for n = 4.
//! The derived `Ord` is plain (ascending) lexicographic order on the parts.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from weakly decreasing parts. Trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::Contract(format!("{parts:?} is not a partition")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The staircase `(k, k-1, ..., 1)`.
    pub fn staircase(k: usize) -> Self {
        Partition { parts: (1..=k).rev().collect() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of non-zero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The i-th part (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        let parts = (0..cols)
            .map(|j| self.parts.iter().take_while(|&&r| r > j).count())
            .collect();
        Partition { parts }
    }

    /// Hook length of every cell, row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &row)| (0..row).map(|j| row - j + conj.part(j) - i - 1).collect())
            .collect()
    }

    /// True when no part occurs `p` or more times.
    pub fn is_p_regular(&self, p: usize) -> bool {
        let mut i = 0;
        while i < self.parts.len() {
            let j = self.parts[i..].iter().take_while(|&&x| x == self.parts[i]).count();
            if j >= p {
                return false;
            }
            i += j;
        }
        true
    }

    /// Multiplicity vector: `m[k]` is the number of parts equal to `k`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.part(0) + 1];
        for &x in &self.parts {
            m[x] += 1;
        }
        m
    }

    /// β-numbers with exactly `t` beads (`t >= len`), strictly decreasing.
    pub fn beta_numbers(&self, t: usize) -> Vec<usize> {
        assert!(t >= self.len(), "bead count {t} below partition length");
        (0..t).map(|i| self.part(i) + t - 1 - i).collect()
    }

    /// β-set normalized so that the bead count is the least multiple of `p`
    /// that is at least the length.
    pub fn beta_set(&self, p: usize) -> BetaSet {
        let l = self.len();
        let t = l.div_ceil(p) * p;
        BetaSet { entries: self.beta_numbers(t) }
    }

    /// Recovers a partition from distinct β-numbers in any order.
    pub fn from_beta(entries: &[usize]) -> Partition {
        let mut e = entries.to_vec();
        e.sort_unstable_by(|a, b| b.cmp(a));
        let t = e.len();
        let parts = e
            .iter()
            .enumerate()
            .map(|(i, &b)| b - (t - 1 - i))
            .filter(|&x| x > 0)
            .collect();
        Partition { parts }
    }

    /// All partitions obtained by removing a rim hook of length `s`, each with
    /// its leg length.
    pub fn remove_rim_hooks(&self, s: usize) -> Vec<(Partition, usize)> {
        let t = self.len();
        let beta = self.beta_numbers(t);
        let mut out = Vec::new();
        for (idx, &b) in beta.iter().enumerate() {
            if b < s {
                continue;
            }
            let target = b - s;
            if beta.contains(&target) {
                continue;
            }
            let leg = beta.iter().filter(|&&x| x > target && x < b).count();
            let mut nb = beta.clone();
            nb[idx] = target;
            out.push((Partition::from_beta(&nb), leg));
        }
        out
    }

    /// Core, quotient, weight and sign with respect to `p`.
    pub fn core_quotient_sign(&self, p: usize) -> CoreData {
        assert!(p >= 2, "p must be at least 2");
        let beta = self.beta_set(p);
        let quotient = beta.quotient(p);
        let mut abacus = Abacus::from_beads(&beta.entries);
        let mut weight = 0;
        let mut legs = 0;
        // ascending scan: lower beads on a runner are settled before higher ones move
        for x in p..abacus.occupied.len() {
            if !abacus.occupied[x] {
                continue;
            }
            let mut y = x;
            while y >= p && !abacus.occupied[y - p] {
                legs += abacus.slide_up(y, p);
                weight += 1;
                y -= p;
            }
        }
        let core = Partition::from_beta(&abacus.beads());
        CoreData {
            core,
            quotient,
            weight,
            sign: if legs % 2 == 0 { 1 } else { -1 },
        }
    }

    pub fn p_core(&self, p: usize) -> Partition {
        self.core_quotient_sign(p).core
    }

    pub fn is_p_core(&self, p: usize) -> bool {
        self.core_quotient_sign(p).weight == 0
    }

    /// Componentwise sum of parts.
    pub fn add(&self, other: &Partition) -> Partition {
        let n = self.len().max(other.len());
        Partition { parts: (0..n).map(|i| self.part(i) + other.part(i)).collect() }
    }

    /// Descending lexicographic comparison: `Less` means `self` is listed first.
    pub fn canonical_cmp(&self, other: &Partition) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `(3,2,1)`, `3,2,1`, `()` and exponent shorthand like `(8,4^2,1^4)`.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let bad = || Error::Usage(format!("cannot parse partition {s:?}"));
        let mut parts = Vec::new();
        for tok in inner.split(',') {
            let tok = tok.trim();
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let base = base.trim().parse::<usize>().map_err(|_| bad())?;
            parts.extend(std::iter::repeat_n(base, exp));
        }
        Partition::new(parts).map_err(|_| bad())
    }
}

/// All partitions of `n` in descending lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaSet {
    /// Strictly decreasing bead positions.
    pub entries: Vec<usize>,
}

impl BetaSet {
    pub fn bead_count(&self) -> usize {
        self.entries.len()
    }

    pub fn partition(&self) -> Partition {
        Partition::from_beta(&self.entries)
    }

    /// Runner-by-runner partitions `(P(β_0), ..., P(β_{p-1}))`.
    pub fn quotient(&self, p: usize) -> MultiPartition {
        let slots = (0..p)
            .map(|i| {
                let runner: Vec<usize> =
                    self.entries.iter().filter(|&&x| x % p == i).map(|&x| x / p).collect();
                Partition::from_beta(&runner)
            })
            .collect();
        MultiPartition { slots }
    }
}

/// Bead occupancy of a β-set laid out on positions `0..`.
#[derive(Clone, Debug)]
pub(crate) struct Abacus {
    pub(crate) occupied: Vec<bool>,
}

impl Abacus {
    pub(crate) fn from_beads(beads: &[usize]) -> Self {
        let len = beads.iter().max().map_or(0, |&m| m + 1);
        let mut occupied = vec![false; len];
        for &b in beads {
            occupied[b] = true;
        }
        Abacus { occupied }
    }

    /// Moves the bead at `y` to the empty position `y - p`; returns the number
    /// of beads jumped, i.e. the leg length of the removed hook.
    pub(crate) fn slide_up(&mut self, y: usize, p: usize) -> usize {
        debug_assert!(self.occupied[y] && !self.occupied[y - p]);
        let jumped = self.occupied[y - p + 1..y].iter().filter(|&&b| b).count();
        self.occupied[y] = false;
        self.occupied[y - p] = true;
        jumped
    }

    pub(crate) fn beads(&self) -> Vec<usize> {
        (0..self.occupied.len()).rev().filter(|&i| self.occupied[i]).collect()
    }
}

/// A tuple of partitions, one slot per runner (or per irreducible of `C_p`).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiPartition {
    pub slots: Vec<Partition>,
}

impl MultiPartition {
    pub fn new(slots: Vec<Partition>) -> Self {
        MultiPartition { slots }
    }

    pub fn empty(p: usize) -> Self {
        MultiPartition { slots: vec![Partition::empty(); p] }
    }

    pub fn total(&self) -> usize {
        self.slots.iter().map(Partition::size).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.slots.iter().map(Partition::size).collect()
    }

    pub fn num_slots(&self) -> usize {
        self.slots.len()
    }

    /// Canonical order: slot sizes descending lexicographically, then slotwise
    /// descending lexicographic partition order.
    pub fn canonical_cmp(&self, other: &MultiPartition) -> Ordering {
        other.sizes().cmp(&self.sizes()).then_with(|| {
            self.slots
                .iter()
                .zip(&other.slots)
                .map(|(a, b)| a.canonical_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `p`-tuples of partitions of total size `w`, in canonical order.
pub fn enumerate_multipartitions(p: usize, w: usize) -> Vec<MultiPartition> {
    let tables: Vec<Vec<Partition>> = (0..=w).map(enumerate_partitions).collect();
    let mut out = Vec::new();
    for sizes in compositions_desc(w, p) {
        let mut cur: Vec<Partition> = Vec::with_capacity(p);
        product_rec(&sizes, &tables, &mut cur, &mut out);
    }
    out
}

fn product_rec(
    sizes: &[usize],
    tables: &[Vec<Partition>],
    cur: &mut Vec<Partition>,
    out: &mut Vec<MultiPartition>,
) {
    let k = cur.len();
    if k == sizes.len() {
        out.push(MultiPartition { slots: cur.clone() });
        return;
    }
    for part in &tables[sizes[k]] {
        cur.push(part.clone());
        product_rec(sizes, tables, cur, out);
        cur.pop();
    }
}

/// Weak compositions of `w` into `k` parts, descending lexicographically.
pub(crate) fn compositions_desc(w: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=rem).rev() {
            cur.push(x);
            rec(rem - x, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if w == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(w, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreData {
    pub core: Partition,
    pub quotient: MultiPartition,
    pub weight: usize,
    /// ±1
    pub sign: i8,
}

/// The unique partition with the given `p`-core and `p`-quotient.
pub fn from_core_quotient(core: &Partition, quotient: &MultiPartition, p: usize) -> Result<Partition> {
    if quotient.num_slots() != p {
        return Err(Error::Contract(format!("quotient {quotient} does not have {p} slots")));
    }
    if !core.is_p_core(p) {
        return Err(Error::InvalidCore(core.to_string(), p));
    }
    let base = core.beta_set(p);
    let counts: Vec<usize> =
        (0..p).map(|i| base.entries.iter().filter(|&&x| x % p == i).count()).collect();
    let extra = quotient
        .slots
        .iter()
        .zip(&counts)
        .map(|(q, &k)| q.len().saturating_sub(k))
        .max()
        .unwrap_or(0);
    let mut beads = Vec::new();
    for (i, q) in quotient.slots.iter().enumerate() {
        let k = counts[i] + extra;
        beads.extend(q.beta_numbers(k).into_iter().map(|level| level * p + i));
    }
    Ok(Partition::from_beta(&beads))
}

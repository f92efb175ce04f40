//! Scopes classes: runner swaps on the abacus of a core, reduced
//! representatives, and pairing of representatives under conjugation.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arith::rational::binomial;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Per-runner bead counts of a core's `t`-bead abacus. Runners of a core
/// are flush, so the counts determine the core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbacusCounts {
    pub p: usize,
    pub t: usize,
    pub counts: Vec<usize>,
}

impl AbacusCounts {
    pub fn of_core(core: &Partition, p: usize, t: usize) -> Self {
        let mut counts = vec![0; p];
        for b in core.beta_numbers(t) {
            counts[b % p] += 1;
        }
        AbacusCounts { p, t, counts }
    }

    pub fn core(&self) -> Partition {
        let mut beads = Vec::with_capacity(self.t);
        for (i, &a) in self.counts.iter().enumerate() {
            beads.extend((0..a).map(|l| i + self.p * l));
        }
        beads.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_beta(&beads)
    }

    /// Runner index `i ≥ 1` and gap `k = a_i − a_{i−1}` of the first swap with `k ≥ w`.
    pub fn first_move(&self, w: usize) -> Option<(usize, usize)> {
        (1..self.p).find_map(|i| {
            let k = self.counts[i].checked_sub(self.counts[i - 1])?;
            (k >= w && k > 0).then_some((i, k))
        })
    }

    pub fn moves(&self, w: usize) -> Vec<(usize, usize)> {
        (1..self.p)
            .filter_map(|i| {
                let k = self.counts[i].checked_sub(self.counts[i - 1])?;
                (k >= w && k > 0).then_some((i, k))
            })
            .collect()
    }

    pub fn swap(&mut self, i: usize) {
        self.counts.swap(i - 1, i);
    }
}

fn base_beads(core: &Partition, p: usize) -> usize {
    core.len().div_ceil(p) * p
}

fn check_core(core: &Partition, p: usize) -> Result<()> {
    if core.is_p_core(p) {
        Ok(())
    } else {
        Err(Error::InvalidCore(core.to_string(), p))
    }
}

/// All `(t, i, k)` moves available on `core`, scanning the p bead counts
/// `t₀ … t₀+p−1`.
pub fn available_moves(core: &Partition, p: usize, w: usize) -> Vec<(usize, usize, usize)> {
    let t0 = base_beads(core, p);
    (t0..t0 + p)
        .flat_map(|t| AbacusCounts::of_core(core, p, t).moves(w).into_iter().map(move |(i, k)| (t, i, k)))
        .collect()
}

pub fn apply_move(core: &Partition, p: usize, t: usize, i: usize) -> Partition {
    let mut ab = AbacusCounts::of_core(core, p, t);
    ab.swap(i);
    ab.core()
}

pub fn is_reduced(core: &Partition, p: usize, w: usize) -> bool {
    let t0 = base_beads(core, p);
    (t0..t0 + p).all(|t| AbacusCounts::of_core(core, p, t).first_move(w).is_none())
}

/// Applies downward moves until none is available.
pub fn reduce_core(core: &Partition, p: usize, w: usize) -> Result<Partition> {
    check_core(core, p)?;
    if w == 0 {
        return Err(Error::Contract("Scopes reduction needs w ≥ 1".into()));
    }
    let mut cur = core.clone();
    loop {
        let t0 = base_beads(&cur, p);
        let step = (t0..t0 + p).find_map(|t| {
            let ab = AbacusCounts::of_core(&cur, p, t);
            ab.first_move(w).map(|(i, k)| (ab, i, k))
        });
        let Some((mut ab, i, k)) = step else {
            return Ok(cur);
        };
        ab.swap(i);
        let next = ab.core();
        if next.size() + k != cur.size() {
            return Err(Error::Consistency(format!("move on {cur} did not shrink it by {k}")));
        }
        cur = next;
    }
}

/// `(1/p)·binom(wp, p−1)`.
pub fn scopes_count(p: usize, w: usize) -> usize {
    let b = binomial(w * p, p - 1) / BigInt::from(p);
    usize::try_from(b).expect("count fits in usize")
}

/// Right-hand side of the conjugation-pairing count:
/// `(1/(2p))·binom(wp, p−1) + (1/2)·binom(⌊wp/2⌋, ⌊p/2⌋)`.
pub fn pairing_count(p: usize, w: usize) -> usize {
    let twice = binomial(w * p, p - 1) / BigInt::from(p) + binomial(w * p / 2, p / 2);
    usize::try_from(twice / 2).expect("count fits in usize")
}

/// All p-cores of size at most `cap`, from charge vectors `(n_0, …, n_{p−1})`
/// with `Σ n_i = 0`: runner i of a `pm`-bead abacus carries `m + n_i` beads.
pub fn cores_up_to(p: usize, cap: usize) -> Vec<Partition> {
    let pi = p as i64;
    // the core has size Σ_i f(i, n_i), and every f(i, ·) is at least −p/8
    let f = |i: usize, n: i64| (pi * n * n - pi * n) / 2 + i as i64 * n;
    let slack = pi * pi / 8 + 1;
    let r = ((2 * cap) as f64 / p as f64).sqrt() as i64 + 2;
    let cap = cap as i64;
    let mut charges = Vec::new();
    let mut stack: Vec<(Vec<i64>, i64, i64)> = vec![(Vec::new(), 0, 0)];
    while let Some((prefix, partial, sum)) = stack.pop() {
        let i = prefix.len();
        if i == p - 1 {
            if partial + f(i, -sum) <= cap {
                let mut c = prefix;
                c.push(-sum);
                charges.push(c);
            }
            continue;
        }
        for n in -r..=r {
            let v = partial + f(i, n);
            if v <= cap + slack {
                let mut c = prefix.clone();
                c.push(n);
                stack.push((c, v, sum + n));
            }
        }
    }
    let mut out: Vec<Partition> = charges
        .into_iter()
        .map(|c| {
            let m = c.iter().map(|x| x.abs()).max().unwrap_or(0);
            let counts = c.iter().map(|&n| (m + n) as usize).collect();
            AbacusCounts { p, t: p * m as usize, counts }.core()
        })
        .collect();
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ScopesClass {
    pub p: usize,
    pub w: usize,
    pub representative: Partition,
    /// Enumerated cores (up to the last representative's size) reducing here.
    pub members_seen: usize,
    pub partner: Option<Partition>,
}

/// Reduced cores in order of (size, lexicographic), stopping once the
/// expected number has been found.
pub fn enumerate_representatives(p: usize, w: usize, size_cap: Option<usize>) -> Result<Vec<ScopesClass>> {
    if w == 0 {
        return Err(Error::Contract("Scopes classes need w ≥ 1".into()));
    }
    let cap = size_cap.unwrap_or(p * p * w * w);
    let expected = scopes_count(p, w);
    let cores = cores_up_to(p, cap);
    let reduced: Vec<bool> = cores.par_iter().map(|c| is_reduced(c, p, w)).collect();
    let mut reps = Vec::new();
    let mut last = None;
    for (i, c) in cores.iter().enumerate() {
        if reduced[i] {
            reps.push(c.clone());
            if reps.len() == expected {
                last = Some(c.size());
                break;
            }
        }
    }
    let Some(max_size) = last else {
        return Err(Error::EnumerationIncomplete { found: reps.len(), expected, cap });
    };
    let targets: Vec<Partition> = cores
        .par_iter()
        .filter(|c| c.size() <= max_size)
        .map(|c| reduce_core(c, p, w))
        .collect::<Result<_>>()?;
    let mut classes: Vec<ScopesClass> = reps
        .into_iter()
        .map(|representative| ScopesClass { p, w, representative, members_seen: 0, partner: None })
        .collect();
    let index: HashMap<&Partition, usize> =
        classes.iter().enumerate().map(|(i, c)| (&c.representative, i)).collect();
    let mut seen = vec![0; classes.len()];
    for t in &targets {
        let idx = index.get(t).ok_or_else(|| Error::Consistency(format!("{t} is reduced but was not enumerated")))?;
        seen[*idx] += 1;
    }
    for (c, n) in classes.iter_mut().zip(seen) {
        c.members_seen = n;
    }
    Ok(classes)
}

fn compositions(total: usize, parts: usize, cur: &mut Vec<usize>, out: &mut impl FnMut(&[usize])) {
    if cur.len() + 1 == parts {
        cur.push(total);
        out(cur);
        cur.pop();
        return;
    }
    for x in 0..=total {
        cur.push(x);
        compositions(total - x, parts, cur, out);
        cur.pop();
    }
}

/// Reduced cores without a size search. Reading the runner gaps
/// `d_i = a_i − a_{i−1}` cyclically, with `a_0 − a_{p−1} − 1` for the wrap
/// (one more bead rotates the runners), a core is reduced iff every gap is
/// at most `w − 1`. The gaps sum to −1, so setting `e_i = w − 1 − d_i` gives
/// compositions of `pw − p + 1` into p parts, each core arising from its p
/// rotations.
pub fn reduced_cores_direct(p: usize, w: usize) -> Result<Vec<Partition>> {
    if w == 0 {
        return Err(Error::Contract("Scopes classes need w ≥ 1".into()));
    }
    let mut seen: HashMap<Partition, usize> = HashMap::new();
    let mut visit = |e: &[usize]| {
        let mut a = vec![0i64; p];
        for i in 1..p {
            a[i] = a[i - 1] + w as i64 - 1 - e[i] as i64;
        }
        let lo = *a.iter().min().expect("p ≥ 2");
        let counts: Vec<usize> = a.iter().map(|&x| (x - lo) as usize).collect();
        let t = counts.iter().sum();
        *seen.entry(AbacusCounts { p, t, counts }.core()).or_insert(0) += 1;
    };
    compositions(p * w - p + 1, p, &mut Vec::with_capacity(p), &mut visit);
    if let Some((c, n)) = seen.iter().find(|(_, &n)| n != p) {
        return Err(Error::Consistency(format!("core {c} arose from {n} gap sequences, expected {p}")));
    }
    let mut out: Vec<Partition> = seen.into_keys().collect();
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    if out.len() != scopes_count(p, w) {
        return Err(Error::Consistency(format!("{} reduced cores, expected {}", out.len(), scopes_count(p, w))));
    }
    Ok(out)
}

/// Same list as [`enumerate_representatives`] from [`reduced_cores_direct`];
/// `members_seen` is 0.
pub fn enumerate_representatives_direct(p: usize, w: usize) -> Result<Vec<ScopesClass>> {
    let cores = reduced_cores_direct(p, w)?;
    for c in &cores {
        if !is_reduced(c, p, w) {
            return Err(Error::Consistency(format!("{c} has a Scopes move for w={w}")));
        }
    }
    Ok(cores
        .into_iter()
        .map(|representative| ScopesClass { p, w, representative, members_seen: 0, partner: None })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Pairing {
    /// Unordered pairs of representative indices; singletons repeat the index.
    pub groups: Vec<(usize, usize)>,
    pub upper_bound: usize,
}

/// Merges each representative with the reduction of its conjugate core.
pub fn conjugation_pairing(reps: &mut [ScopesClass], p: usize, w: usize) -> Result<Pairing> {
    let index: HashMap<&Partition, usize> = reps.iter().enumerate().map(|(i, c)| (&c.representative, i)).collect();
    let partners: Vec<usize> = reps
        .par_iter()
        .map(|c| {
            let r = reduce_core(&c.representative.conjugate(), p, w)?;
            index
                .get(&r)
                .copied()
                .ok_or_else(|| Error::Consistency(format!("partner {r} of {} is missing", c.representative)))
        })
        .collect::<Result<_>>()?;
    let mut groups = Vec::new();
    for (i, &j) in partners.iter().enumerate() {
        if partners[j] != i {
            return Err(Error::Consistency(format!("conjugation pairing is not an involution at {i}")));
        }
        if i <= j {
            groups.push((i, j));
        }
    }
    for (i, &j) in partners.iter().enumerate() {
        reps[i].partner = Some(reps[j].representative.clone());
    }
    let expected = pairing_count(p, w);
    if groups.len() != expected {
        return Err(Error::Consistency(format!("{} conjugation classes, expected {expected}", groups.len())));
    }
    Ok(Pairing { upper_bound: groups.len(), groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn pt(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn direct_matches_search() {
        for (p, w) in [(2, 1), (2, 5), (3, 1), (3, 4), (5, 2), (5, 3), (7, 2)] {
            let search: Vec<Partition> =
                enumerate_representatives(p, w, None).unwrap().into_iter().map(|c| c.representative).collect();
            assert_eq!(reduced_cores_direct(p, w).unwrap(), search, "p={p} w={w}");
        }
        assert_eq!(reduced_cores_direct(2, 4).unwrap(), (0..4).map(Partition::staircase).collect::<Vec<_>>());
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_core(&pt(&[2, 1]), 2, 2).unwrap(), pt(&[1]));
        assert_eq!(reduce_core(&pt(&[3, 2, 1]), 2, 2).unwrap(), pt(&[1]));
        assert_eq!(reduce_core(&pt(&[1]), 3, 1).unwrap(), pt(&[]));
        assert!(matches!(reduce_core(&pt(&[2]), 2, 1), Err(Error::InvalidCore(..))));
    }

    #[test]
    fn counts_round_trip() {
        for c in cores_up_to(3, 40) {
            for t in [c.len(), c.len() + 1, c.len() + 5] {
                assert_eq!(AbacusCounts::of_core(&c, 3, t).core(), c);
            }
        }
    }

    #[test]
    fn cores_match_filter() {
        for p in [2usize, 3, 5] {
            let direct: Vec<Partition> = (0..=22)
                .flat_map(crate::partition::enumerate_partitions)
                .filter(|l| l.is_p_core(p))
                .collect();
            let mut direct = direct;
            direct.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
            assert_eq!(cores_up_to(p, 22), direct, "p={p}");
        }
    }

    #[test]
    fn representatives() {
        let r: Vec<Partition> = enumerate_representatives(2, 3, None).unwrap().into_iter().map(|c| c.representative).collect();
        assert_eq!(r, vec![pt(&[]), pt(&[1]), pt(&[2, 1])]);
        for w in 1..=8 {
            let r = enumerate_representatives(2, w, None).unwrap();
            let want: Vec<Partition> = (0..w).map(Partition::staircase).collect();
            assert_eq!(r.iter().map(|c| c.representative.clone()).collect::<Vec<_>>(), want);
        }
        let r = enumerate_representatives(3, 1, None).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].representative, pt(&[]));
    }

    #[test]
    fn class_counts() {
        for p in [2usize, 3, 5] {
            for w in 1..=4 {
                assert_eq!(enumerate_representatives(p, w, None).unwrap().len(), scopes_count(p, w));
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let mut r = enumerate_representatives(2, 4, None).unwrap();
        let pr = conjugation_pairing(&mut r, 2, 4).unwrap();
        assert_eq!(pr.upper_bound, 4);
        assert!(pr.groups.iter().all(|(a, b)| a == b));
        let mut r = enumerate_representatives(3, 2, None).unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(conjugation_pairing(&mut r, 3, 2).unwrap().upper_bound, 4);
    }

    #[test]
    fn cap_too_small() {
        assert!(matches!(
            enumerate_representatives(3, 3, Some(3)),
            Err(Error::EnumerationIncomplete { expected: 12, .. })
        ));
    }

    #[test]
    fn move_order_does_not_matter() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, w) in [(2usize, 2usize), (3, 2), (3, 3), (5, 2)] {
            for c in cores_up_to(p, 60) {
                let want = reduce_core(&c, p, w).unwrap();
                let mut cur = c.clone();
                loop {
                    let mut mv = available_moves(&cur, p, w);
                    if mv.is_empty() {
                        break;
                    }
                    mv.shuffle(&mut rng);
                    let (t, i, k) = mv[0];
                    let next = apply_move(&cur, p, t, i);
                    assert_eq!(next.size() + k, cur.size());
                    assert!(k >= w);
                    cur = next;
                }
                assert_eq!(cur, want, "p={p} w={w} core={c}");
                assert_eq!(reduce_core(&want, p, w).unwrap(), want);
            }
        }
    }
}

//! Irreducible characters of S_n by the Murnaghan–Nakayama rule.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use lru::LruCache;
use num_bigint::BigInt;

use crate::arith::rational::factorial;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// `|C_{S_n}(s_μ)| = Π k^{m_k} · m_k!`.
pub fn centralizer_order_sym(mu: &Partition) -> u128 {
    mu.multiplicities()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &m)| (k as u128).pow(m as u32) * (1..=m as u128).product::<u128>())
        .product()
}

/// `n! / Π hooks`.
pub fn degree_hook(lambda: &Partition) -> BigInt {
    let hooks: BigInt = lambda.hook_lengths().iter().flatten().map(|&h| BigInt::from(h)).product();
    factorial(lambda.size()) / hooks
}

/// ν_p of the degree, from hook lengths alone.
pub fn degree_valuation(lambda: &Partition, p: usize) -> u64 {
    let hooks: u64 = lambda
        .hook_lengths()
        .iter()
        .flatten()
        .map(|&h| crate::arith::rational::usize_valuation(h, p) as u64)
        .sum();
    crate::arith::rational::factorial_valuation(lambda.size(), p) - hooks
}

/// `χ_λ(s_μ)`, peeling the largest cycle first.
pub fn mn_value(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::Shape(format!("|{lambda}| != |{mu}|")));
    }
    mn_rec(lambda, mu.parts(), &mut |_, _| None, &mut |_, _, _| {})
}

fn mn_rec(
    lambda: &Partition,
    cycles: &[usize],
    lookup: &mut dyn FnMut(&Partition, &[usize]) -> Option<i64>,
    store: &mut dyn FnMut(&Partition, &[usize], i64),
) -> Result<i64> {
    let Some((&s, rest)) = cycles.split_first() else {
        return Ok(1);
    };
    if let Some(v) = lookup(lambda, cycles) {
        return Ok(v);
    }
    let mut acc: i64 = 0;
    for (smaller, leg) in lambda.remove_rim_hooks(s) {
        let v = mn_rec(&smaller, rest, lookup, store)?;
        let v = if leg % 2 == 0 { v } else { -v };
        acc = acc.checked_add(v).ok_or_else(|| Error::Consistency("character value overflow".into()))?;
    }
    store(lambda, cycles, acc);
    Ok(acc)
}

/// Memoized character values with a bounded least-recently-used store.
///
/// Keys are `(λ, remaining cycles)`; insertion is synchronized, so one cache
/// can be shared across worker threads.
pub struct CharValueCache {
    inner: Mutex<LruCache<(Partition, Vec<usize>), i64>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

impl CharValueCache {
    pub fn with_capacity(entries: usize) -> Self {
        let cap = NonZeroUsize::new(entries.max(1)).expect("non-zero");
        CharValueCache {
            inner: Mutex::new(LruCache::new(cap)),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    /// Roughly `megabytes` worth of entries.
    pub fn with_memory_cap(megabytes: usize) -> Self {
        const ENTRY_BYTES: usize = 128;
        Self::with_capacity(megabytes.saturating_mul(1 << 20) / ENTRY_BYTES)
    }

    pub fn value(&self, lambda: &Partition, mu: &Partition) -> Result<i64> {
        if lambda.size() != mu.size() {
            return Err(Error::Shape(format!("|{lambda}| != |{mu}|")));
        }
        mn_rec(
            lambda,
            mu.parts(),
            &mut |l, c| {
                let hit = self.inner.lock().expect("cache lock").get(&(l.clone(), c.to_vec())).copied();
                match hit {
                    Some(_) => self.hits.fetch_add(1, Ordering::Relaxed),
                    None => self.misses.fetch_add(1, Ordering::Relaxed),
                };
                hit
            },
            &mut |l, c, v| {
                self.inner.lock().expect("cache lock").put((l.clone(), c.to_vec()), v);
            },
        )
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            entries: self.inner.lock().expect("cache lock").len(),
        }
    }
}

impl Default for CharValueCache {
    fn default() -> Self {
        Self::with_capacity(1 << 18)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    fn pt(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// Character table of S_3 from its six elements: the trivial, sign and
    /// standard (fixed points minus one) characters.
    #[test]
    fn s3_brute_force() {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        for perm in perms {
            let fixed = (0..3).filter(|&i| perm[i] == i).count() as i64;
            let mut seen = [false; 3];
            let mut cycles = Vec::new();
            for i in 0..3 {
                if !seen[i] {
                    let mut len = 0;
                    let mut j = i;
                    while !seen[j] {
                        seen[j] = true;
                        j = perm[j];
                        len += 1;
                    }
                    cycles.push(len);
                }
            }
            cycles.sort_unstable_by(|a, b| b.cmp(a));
            let mu = pt(&cycles);
            let sign = if (3 - cycles.len()) % 2 == 0 { 1 } else { -1 };
            assert_eq!(mn_value(&pt(&[3]), &mu).unwrap(), 1);
            assert_eq!(mn_value(&pt(&[1, 1, 1]), &mu).unwrap(), sign);
            assert_eq!(mn_value(&pt(&[2, 1]), &mu).unwrap(), fixed - 1);
        }
        assert_eq!(mn_value(&pt(&[2, 1]), &pt(&[3])).unwrap(), -1);
    }

    #[test]
    fn centralizer_examples() {
        assert_eq!(centralizer_order_sym(&pt(&[1, 1, 1, 1])), 24);
        assert_eq!(centralizer_order_sym(&pt(&[5])), 5);
        assert_eq!(centralizer_order_sym(&pt(&[2, 1])), 2);
        assert_eq!(centralizer_order_sym(&Partition::empty()), 1);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_hook(&pt(&[6])), BigInt::from(1));
        assert_eq!(degree_hook(&pt(&[2, 1])), BigInt::from(2));
        assert_eq!(degree_hook(&pt(&[2, 2])), BigInt::from(2));
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(mn_value(&pt(&[2]), &pt(&[1])), Err(Error::Shape(_))));
    }

    #[test]
    fn orthogonality_relations() {
        for n in 0..=8 {
            let parts = enumerate_partitions(n);
            let table: Vec<Vec<i64>> =
                parts.iter().map(|l| parts.iter().map(|m| mn_value(l, m).unwrap()).collect()).collect();
            let z: Vec<i128> = parts.iter().map(|m| centralizer_order_sym(m) as i128).collect();
            let order: i128 = (1..=n as i128).product();
            for a in 0..parts.len() {
                for b in 0..parts.len() {
                    // rows: Σ_μ χ_a χ_b |G|/z_μ = δ |G|
                    let row: i128 =
                        (0..parts.len()).map(|m| table[a][m] as i128 * table[b][m] as i128 * (order / z[m])).sum();
                    assert_eq!(row, if a == b { order } else { 0 });
                    let col: i128 = (0..parts.len()).map(|l| table[l][a] as i128 * table[l][b] as i128).sum();
                    assert_eq!(col, if a == b { z[a] } else { 0 });
                }
            }
        }
    }

    #[test]
    fn degrees_and_sum_of_squares() {
        for n in 0..=12 {
            let ones = Partition::new(vec![1; n]).unwrap();
            let mut sum = BigInt::from(0);
            for l in enumerate_partitions(n) {
                let d = degree_hook(&l);
                assert_eq!(d, BigInt::from(mn_value(&l, &ones).unwrap()));
                sum += &d * &d;
            }
            assert_eq!(sum, factorial(n));
        }
    }

    #[test]
    fn conjugation_twists_by_sign() {
        for n in 0..=9 {
            for l in enumerate_partitions(n) {
                for m in enumerate_partitions(n) {
                    let sgn = if (n - m.len()) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(mn_value(&l.conjugate(), &m).unwrap(), sgn * mn_value(&l, &m).unwrap());
                }
            }
        }
    }

    #[test]
    fn cache_agrees_with_recomputation() {
        let cache = CharValueCache::with_capacity(64);
        for l in enumerate_partitions(9) {
            for m in enumerate_partitions(9).iter().step_by(3) {
                assert_eq!(cache.value(&l, m).unwrap(), mn_value(&l, m).unwrap());
            }
        }
        let s = cache.stats();
        assert!(s.entries <= 64);
        assert!(s.hits > 0);
    }
}

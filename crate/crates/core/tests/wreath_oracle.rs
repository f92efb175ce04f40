//! Wreath product characters against an induction formula evaluated on every
//! group element, for groups of order at most 200.

use morita::arith::{CycloInt, Cyclotomic};
use morita::partition::{enumerate_multipartitions, MultiPartition, Partition};
use morita::symchar::mn_value;
use morita::wreath::{wreath_centralizer_order, wreath_char_value, wreath_classes, XMatrix};

/// Coloured permutation: basis vector k goes to ζ^col[k] · e_perm[k].
#[derive(Clone, Debug)]
struct Elem {
    perm: Vec<usize>,
    col: Vec<usize>,
}

impl Elem {
    fn mul(&self, h: &Elem, p: usize) -> Elem {
        let perm = h.perm.iter().map(|&k| self.perm[k]).collect();
        let col = (0..h.perm.len()).map(|k| (h.col[k] + self.col[h.perm[k]]) % p).collect();
        Elem { perm, col }
    }

    fn inv(&self, p: usize) -> Elem {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut col = vec![0; n];
        for k in 0..n {
            perm[self.perm[k]] = k;
            col[self.perm[k]] = (p - self.col[k]) % p;
        }
        Elem { perm, col }
    }

    /// Cycles of the underlying permutation restricted to `range`, each as
    /// (length, colour sum).
    fn cycles(&self, range: std::ops::Range<usize>, p: usize) -> Vec<(usize, usize)> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for start in range {
            if seen[start] {
                continue;
            }
            let (mut k, mut len, mut sum) = (start, 0, 0);
            while !seen[k] {
                seen[k] = true;
                sum += self.col[k];
                k = self.perm[k];
                len += 1;
            }
            out.push((len, sum % p));
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn group(p: usize, w: usize) -> Vec<Elem> {
    let mut out = Vec::new();
    for perm in permutations(w) {
        for code in 0..p.pow(w as u32) {
            let col = (0..w).map(|k| code / p.pow(k as u32) % p).collect();
            out.push(Elem { perm: perm.clone(), col });
        }
    }
    out
}

fn representative(mu: &MultiPartition) -> Elem {
    let w = mu.total();
    let mut perm = vec![0; w];
    let mut col = vec![0; w];
    let mut next = 0;
    for (j, slot) in mu.slots.iter().enumerate() {
        for &len in slot.parts() {
            for k in 0..len {
                perm[next + k] = next + (k + 1) % len;
            }
            col[next] = j;
            next += len;
        }
    }
    Elem { perm, col }
}

fn class_of(g: &Elem, p: usize) -> MultiPartition {
    let mut slots = vec![Vec::new(); p];
    for (len, c) in g.cycles(0..g.perm.len(), p) {
        slots[c].push(len);
    }
    MultiPartition::new(
        slots
            .into_iter()
            .map(|mut s| {
                s.sort_unstable_by(|a, b| b.cmp(a));
                Partition::new(s).unwrap()
            })
            .collect(),
    )
}

/// Induced from the Young subgroup `G_{|λ_0|} × ... × G_{|λ_{p-1}|}` of the
/// character `Π_i ψ_i^{⊗} · χ_{λ_i}`.
fn induced_value(lambda: &MultiPartition, g: &Elem, elems: &[Elem], p: usize) -> Cyclotomic {
    let sizes = lambda.sizes();
    let mut bounds = vec![0];
    for s in &sizes {
        bounds.push(bounds.last().unwrap() + s);
    }
    let block = |k: usize| (0..p).find(|&i| k < bounds[i + 1]).unwrap();
    let mut acc = CycloInt::zero(p);
    let sub_order: u64 = sizes.iter().map(|&s| (p as u64).pow(s as u32) * (1..=s as u64).product::<u64>()).product();
    for x in elems {
        let c = x.mul(g, p).mul(&x.inv(p), p);
        if (0..c.perm.len()).any(|k| block(c.perm[k]) != block(k)) {
            continue;
        }
        let mut value = 1i64;
        let mut zeta = 0usize;
        for i in 0..p {
            let cyc = c.cycles(bounds[i]..bounds[i + 1], p);
            let mut lens: Vec<usize> = cyc.iter().map(|c| c.0).collect();
            lens.sort_unstable_by(|a, b| b.cmp(a));
            value *= mn_value(&lambda.slots[i], &Partition::new(lens).unwrap()).unwrap();
            zeta += i * cyc.iter().map(|c| c.1).sum::<usize>();
        }
        acc.add_rotated(&CycloInt::int(p, value), zeta, 1);
    }
    let q = num_rational::BigRational::new(1.into(), sub_order.into());
    &acc.to_cyclotomic() * &Cyclotomic::from_rational(p, q)
}

#[test]
fn matches_induction_on_small_groups() {
    let cases = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (13, 1)];
    for (p, w) in cases {
        let elems = group(p, w);
        assert!(elems.len() <= 200);
        for c in wreath_classes(p, w) {
            let g = representative(&c.label);
            assert_eq!(class_of(&g, p), c.label);
            let size = elems.iter().filter(|y| class_of(y, p) == c.label).count();
            let order = elems.len() as u128;
            assert_eq!(order / wreath_centralizer_order(&c.label), size as u128, "p={p} w={w} {}", c.label);
            for lambda in enumerate_multipartitions(p, w) {
                let fast = wreath_char_value(&lambda, &c.label).unwrap().to_cyclotomic();
                assert_eq!(fast, induced_value(&lambda, &g, &elems, p), "p={p} w={w} {lambda} at {}", c.label);
            }
        }
    }
}

#[test]
fn full_orthogonality() {
    for (p, w) in [(2, 1), (2, 4), (2, 6), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
        let x = XMatrix::all_classes(p, w).unwrap();
        let order: u128 = (p as u128).pow(w as u32) * (1..=w as u128).product::<u128>();
        // columns are checked on construction; rows: Σ_μ ψ_λ conj(ψ_λ') |G|/|C(μ)| = δ |G|
        for a in 0..x.values.rows {
            for b in a..x.values.rows {
                let mut acc = vec![0i128; p - 1];
                for mu in 0..x.values.cols {
                    let prod = x.values.get(b, mu).conj().mul_wide(x.values.get(a, mu));
                    let wgt = (order / x.norms[mu]) as i128;
                    for (s, t) in acc.iter_mut().zip(prod) {
                        *s += t * wgt;
                    }
                }
                let expect = if a == b { order as i128 } else { 0 };
                assert_eq!(acc[0], expect, "p={p} w={w} rows {a},{b}");
                assert!(acc[1..].iter().all(|&c| c == 0));
            }
        }
    }
}

#[test]
fn p2_values_are_integers() {
    for w in 0..=7 {
        let x = XMatrix::gamma(2, w).unwrap();
        assert!(x.values.data.iter().all(|c| c.as_integer().is_some()));
    }
}

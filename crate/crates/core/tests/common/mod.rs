#![allow(dead_code)]

use morita::arith::RationalMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
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

/// Some row permutation makes the multisets of columns agree.
pub fn brute_rectangular(a: &[Vec<u8>], b: &[Vec<u8>]) -> bool {
    let (r, c) = (a.len(), a.first().map_or(0, |x| x.len()));
    if r != b.len() || c != b.first().map_or(0, |x| x.len()) {
        return false;
    }
    let col = |m: &[Vec<u8>], perm: Option<&[usize]>, j: usize| -> Vec<u8> {
        (0..r).map(|i| m[perm.map_or(i, |p| p[i])][j]).collect()
    };
    let mut target: Vec<Vec<u8>> = (0..c).map(|j| col(b, None, j)).collect();
    target.sort();
    permutations(r).iter().any(|p| {
        let mut cols: Vec<Vec<u8>> = (0..c).map(|j| col(a, Some(p), j)).collect();
        cols.sort();
        cols == target
    })
}

pub fn brute_similar(a: &[Vec<u8>], b: &[Vec<u8>]) -> bool {
    let n = a.len();
    n == b.len() && permutations(n).iter().any(|p| (0..n).all(|i| (0..n).all(|j| a[p[i]][p[j]] == b[i][j])))
}

pub fn to_matrix(a: &[Vec<u8>]) -> RationalMatrix {
    let rows: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    RationalMatrix::from_i64_rows(&rows).unwrap()
}

/// Pairs of 0/1 matrices up to 6×6: half are shuffled copies, some of those
/// with one flipped entry, the rest independent with equal density.
/// Square families are symmetric.
pub fn random_01_pairs(seed: u64, count: usize, square: bool) -> Vec<(Vec<Vec<u8>>, Vec<Vec<u8>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for k in 0..count {
        let r = rng.gen_range(1..=6);
        let c = if square { r } else { rng.gen_range(1..=6) };
        let density = rng.gen_range(0.2..0.8);
        let gen = |rng: &mut ChaCha8Rng| -> Vec<Vec<u8>> {
            let mut m: Vec<Vec<u8>> = (0..r).map(|_| (0..c).map(|_| rng.gen_bool(density) as u8).collect()).collect();
            if square {
                for i in 0..r {
                    for j in 0..i {
                        m[i][j] = m[j][i];
                    }
                }
            }
            m
        };
        let a = gen(&mut rng);
        let b = if k % 2 == 0 {
            let mut rp: Vec<usize> = (0..r).collect();
            let mut cp: Vec<usize> = (0..c).collect();
            shuffle(&mut rp, &mut rng);
            if square {
                cp = rp.clone();
            } else {
                shuffle(&mut cp, &mut rng);
            }
            let mut b: Vec<Vec<u8>> = (0..r).map(|i| (0..c).map(|j| a[rp[i]][cp[j]]).collect()).collect();
            if k % 4 == 2 {
                let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..c));
                b[i][j] ^= 1;
                if square && i != j {
                    b[j][i] ^= 1;
                }
            }
            b
        } else {
            gen(&mut rng)
        };
        out.push((a, b));
    }
    out
}

fn shuffle(v: &mut [usize], rng: &mut ChaCha8Rng) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
}

//! Equivalence of matrices under permutations: independent row and column
//! permutations (`P·A·Q = B`) or one simultaneous permutation (`T·A = B·T`).
//!
//! Both questions are reduced to isomorphism of an edge-labelled complete
//! graph and decided by colour refinement with individualization. Colours are
//! hashes of refinement signatures, so they agree across matrices without any
//! shared table; a hash collision can only coarsen the colouring, and every
//! candidate mapping is verified entrywise before it is returned.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use rayon::prelude::*;

use crate::arith::{Rational, RationalMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    /// Rows and columns permuted independently.
    Rectangular,
    /// One permutation applied to rows and columns of a symmetric matrix.
    Similarity,
}

/// `B[i][j] = A[rows[i]][cols[j]]`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EquivWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl EquivWitness {
    pub fn apply(&self, a: &RationalMatrix) -> RationalMatrix {
        RationalMatrix::from_fn(self.rows.len(), self.cols.len(), |i, j| a.get(self.rows[i], self.cols[j]).clone())
    }

    /// One-line form, e.g. `rows 2 0 1 | cols 1 0`.
    pub fn to_line(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        format!("rows {} | cols {}", join(&self.rows), join(&self.cols))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct InvariantKey(pub String);

fn sorted_render(mut v: Vec<&Rational>) -> String {
    v.sort();
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

fn check_mode(a: &RationalMatrix, mode: Mode) -> Result<()> {
    if mode == Mode::Similarity {
        if !a.is_square() {
            return Err(Error::Shape(format!("{}x{} matrix in similarity mode", a.rows(), a.cols())));
        }
        if !a.is_symmetric() {
            return Err(Error::Contract("similarity mode needs a symmetric matrix".into()));
        }
    }
    Ok(())
}

pub fn invariant_key(a: &RationalMatrix, mode: Mode) -> Result<InvariantKey> {
    check_mode(a, mode)?;
    let mut rows: Vec<String> = (0..a.rows()).map(|i| sorted_render(a.row(i).iter().collect())).collect();
    rows.sort();
    let mut cols: Vec<String> =
        (0..a.cols()).map(|j| sorted_render((0..a.rows()).map(|i| a.get(i, j)).collect())).collect();
    cols.sort();
    let mut key = format!("{}x{}|rows[{}]|cols[{}]", a.rows(), a.cols(), rows.join(";"), cols.join(";"));
    if mode == Mode::Similarity {
        key.push_str(&format!("|diag[{}]", sorted_render((0..a.rows()).map(|i| a.get(i, i)).collect())));
    }
    Ok(InvariantKey(key))
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Complete graph on rows (and columns, in rectangular mode) with hashed
/// entry labels.
struct Structure<'a> {
    a: &'a RationalMatrix,
    mode: Mode,
    n: usize,
    init: Vec<u64>,
    labels: Vec<u64>,
}

const NONE_LABEL: u64 = 0x9e37_79b9_7f4a_7c15;

impl<'a> Structure<'a> {
    fn new(a: &'a RationalMatrix, mode: Mode) -> Self {
        let entry = |i: usize, j: usize| hash_of(a.get(i, j));
        match mode {
            Mode::Similarity => {
                let n = a.rows();
                let init = (0..n).map(|i| hash_of(&("diag", entry(i, i)))).collect();
                let labels = (0..n * n).map(|k| if k / n == k % n { NONE_LABEL } else { entry(k / n, k % n) }).collect();
                Structure { a, mode, n, init, labels }
            }
            Mode::Rectangular => {
                let (r, c) = (a.rows(), a.cols());
                let n = r + c;
                let init = (0..n).map(|v| hash_of(&(v < r))).collect();
                let labels = (0..n * n)
                    .map(|k| {
                        let (u, v) = (k / n, k % n);
                        match (u < r, v < r) {
                            (true, false) => entry(u, v - r),
                            (false, true) => entry(v, u - r) ^ NONE_LABEL.rotate_left(7),
                            _ => NONE_LABEL,
                        }
                    })
                    .collect();
                Structure { a, mode, n, init, labels }
            }
        }
    }

    fn round(&self, colors: &[u64]) -> Vec<u64> {
        (0..self.n)
            .map(|v| {
                let mut sig: Vec<(u64, u64)> =
                    (0..self.n).filter(|&u| u != v).map(|u| (self.labels[v * self.n + u], colors[u])).collect();
                sig.sort_unstable();
                hash_of(&(colors[v], sig))
            })
            .collect()
    }
}

fn cell_count(colors: &[u64]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn histogram(colors: &[u64]) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Refines both colourings to stability in lockstep; false as soon as their
/// colour histograms differ.
fn refine_pair(sa: &Structure, sb: &Structure, ca: &mut Vec<u64>, cb: &mut Vec<u64>) -> bool {
    loop {
        if histogram(ca) != histogram(cb) {
            return false;
        }
        let before = cell_count(ca);
        let na = sa.round(ca);
        let nb = sb.round(cb);
        *ca = na;
        *cb = nb;
        if cell_count(ca) == before {
            return histogram(ca) == histogram(cb);
        }
    }
}

fn verify(sa: &Structure, sb: &Structure, map: &[usize]) -> bool {
    // map[v_b] = v_a
    let (a, b) = (sa.a, sb.a);
    match sa.mode {
        Mode::Similarity => (0..b.rows()).all(|i| (0..b.cols()).all(|j| b.get(i, j) == a.get(map[i], map[j]))),
        Mode::Rectangular => {
            let r = b.rows();
            (0..r).all(|i| (0..b.cols()).all(|j| b.get(i, j) == a.get(map[i], map[r + j] - r)))
        }
    }
}

fn search(sa: &Structure, sb: &Structure, mut ca: Vec<u64>, mut cb: Vec<u64>, depth: u64) -> Option<Vec<usize>> {
    if !refine_pair(sa, sb, &mut ca, &mut cb) {
        return None;
    }
    let hist = histogram(&ca);
    let target = hist.iter().filter(|(_, &k)| k > 1).min_by_key(|(&c, &k)| (k, c)).map(|(&c, _)| c);
    let Some(color) = target else {
        let pos: HashMap<u64, usize> = ca.iter().enumerate().map(|(v, &c)| (c, v)).collect();
        let map: Vec<usize> = cb.iter().map(|c| pos[c]).collect();
        return verify(sa, sb, &map).then_some(map);
    };
    let v = ca.iter().position(|&c| c == color).expect("cell is non-empty");
    let fresh = hash_of(&(color, depth, "individualized"));
    for u in (0..cb.len()).filter(|&u| cb[u] == color) {
        let mut na = ca.clone();
        let mut nb = cb.clone();
        na[v] = fresh;
        nb[u] = fresh;
        if let Some(m) = search(sa, sb, na, nb, depth + 1) {
            return Some(m);
        }
    }
    None
}

fn find(a: &RationalMatrix, b: &RationalMatrix, mode: Mode) -> Result<Option<EquivWitness>> {
    check_mode(a, mode)?;
    check_mode(b, mode)?;
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Shape(format!("{}x{} vs {}x{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    let sa = Structure::new(a, mode);
    let sb = Structure::new(b, mode);
    let Some(map) = search(&sa, &sb, sa.init.clone(), sb.init.clone(), 0) else {
        return Ok(None);
    };
    let witness = match mode {
        Mode::Similarity => EquivWitness { rows: map.clone(), cols: map },
        Mode::Rectangular => {
            let r = a.rows();
            EquivWitness { rows: map[..r].to_vec(), cols: map[r..].iter().map(|&v| v - r).collect() }
        }
    };
    let applied = witness.apply(a);
    if applied.entries() != b.entries() {
        return Err(Error::Consistency("equivalence witness does not reproduce the target".into()));
    }
    Ok(Some(witness))
}

/// Row and column permutations taking `a` to `b`, if any exist.
pub fn transforming_permutations(a: &RationalMatrix, b: &RationalMatrix) -> Result<Option<EquivWitness>> {
    find(a, b, Mode::Rectangular)
}

/// A permutation `T` with `T·a = b·T`, if one exists.
pub fn permutation_similarity(a: &RationalMatrix, b: &RationalMatrix) -> Result<Option<EquivWitness>> {
    find(a, b, Mode::Similarity)
}

pub fn equivalent(a: &RationalMatrix, b: &RationalMatrix, mode: Mode) -> Result<Option<EquivWitness>> {
    find(a, b, mode)
}

/// Multiset of stable colours of one matrix, finer than [`invariant_key`]
/// and equally invariant.
fn refinement_certificate(a: &RationalMatrix, mode: Mode) -> u64 {
    let s = Structure::new(a, mode);
    let mut c = s.init.clone();
    loop {
        let before = cell_count(&c);
        c = s.round(&c);
        if cell_count(&c) == before {
            break;
        }
    }
    hash_of(&histogram(&c))
}

/// Partition into equivalence classes. Each class lists input indices in
/// label order; classes are ordered by their smallest label.
pub fn classify(items: &[(String, RationalMatrix)], mode: Mode) -> Result<Vec<Vec<usize>>> {
    let keys: Vec<(InvariantKey, u64)> = items
        .par_iter()
        .map(|(_, m)| Ok((invariant_key(m, mode)?, refinement_certificate(m, mode))))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&i, &j| items[i].0.cmp(&items[j].0).then(i.cmp(&j)));
    let mut buckets: BTreeMap<&(InvariantKey, u64), Vec<usize>> = BTreeMap::new();
    for &i in &order {
        buckets.entry(&keys[i]).or_default().push(i);
    }
    let per_bucket: Vec<Vec<Vec<usize>>> = buckets
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|members| {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for i in members {
                let hits: Vec<bool> = classes
                    .par_iter()
                    .map(|c| find(&items[c[0]].1, &items[i].1, mode).map(|w| w.is_some()))
                    .collect::<Result<_>>()?;
                match hits.iter().position(|&h| h) {
                    Some(k) => classes[k].push(i),
                    None => classes.push(vec![i]),
                }
            }
            Ok(classes)
        })
        .collect::<Result<_>>()?;
    let mut classes: Vec<Vec<usize>> = per_bucket.into_iter().flatten().collect();
    classes.sort_by(|x, y| items[x[0]].0.cmp(&items[y[0]].0).then(x[0].cmp(&y[0])));
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn key_examples() {
        let id = m(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(invariant_key(&id, Mode::Similarity).unwrap(), invariant_key(&id.clone(), Mode::Similarity).unwrap());
        let a = m(&[vec![1, 2, 3], vec![4, 5, 6]]);
        let swapped = m(&[vec![4, 5, 6], vec![1, 2, 3]]);
        assert_eq!(invariant_key(&a, Mode::Rectangular).unwrap(), invariant_key(&swapped, Mode::Rectangular).unwrap());
        assert_ne!(
            invariant_key(&m(&[vec![1, 0], vec![0, 2]]), Mode::Rectangular).unwrap(),
            invariant_key(&m(&[vec![1, 0], vec![0, 3]]), Mode::Rectangular).unwrap()
        );
        assert!(matches!(invariant_key(&a, Mode::Similarity), Err(Error::Shape(_))));
        assert!(matches!(invariant_key(&m(&[vec![0, 1], vec![2, 0]]), Mode::Similarity), Err(Error::Contract(_))));
    }

    #[test]
    fn witness_examples() {
        let id = RationalMatrix::identity(3);
        let w = transforming_permutations(&id, &id).unwrap().unwrap();
        assert_eq!(w.apply(&id), id);
        let a = m(&[vec![1, 0], vec![0, 2]]);
        let b = m(&[vec![2, 0], vec![0, 1]]);
        let w = transforming_permutations(&a, &b).unwrap().unwrap();
        assert_eq!(w, EquivWitness { rows: vec![1, 0], cols: vec![1, 0] });
        assert_eq!(w.to_line(), "rows 1 0 | cols 1 0");
        assert!(permutation_similarity(&a, &m(&[vec![1, 0], vec![0, 3]])).unwrap().is_none());
        assert!(matches!(transforming_permutations(&a, &id), Err(Error::Shape(_))));
    }

    #[test]
    fn regular_structures() {
        // two non-isomorphic 2-regular graphs on 6 vertices: a 6-cycle and two triangles
        let cyc = RationalMatrix::from_fn(6, 6, |i, j| rat(((i + 1) % 6 == j || (j + 1) % 6 == i) as i64, 1));
        let tri = RationalMatrix::from_fn(6, 6, |i, j| rat((i != j && i / 3 == j / 3) as i64, 1));
        assert!(permutation_similarity(&cyc, &tri).unwrap().is_none());
        // as 0/1 matrices up to row and column permutations both are two disjoint hexagons
        let w = transforming_permutations(&cyc, &tri).unwrap().unwrap();
        assert_eq!(w.apply(&cyc), tri);
        let w = permutation_similarity(&cyc, &cyc).unwrap().unwrap();
        assert_eq!(w.apply(&cyc), cyc);
    }

    #[test]
    fn classify_examples() {
        let a = m(&[vec![1, 0], vec![0, 2]]);
        let b = m(&[vec![2, 0], vec![0, 1]]);
        let c = m(&[vec![1, 1], vec![1, 2]]);
        let items = vec![("c".to_string(), c), ("b".to_string(), b), ("a".to_string(), a)];
        assert_eq!(classify(&items, Mode::Similarity).unwrap(), vec![vec![2, 1], vec![0]]);
        assert_eq!(classify(&items[..1], Mode::Rectangular).unwrap(), vec![vec![0]]);
    }

    fn permuted(a: &RationalMatrix, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        EquivWitness { rows: rows.to_vec(), cols: cols.to_vec() }.apply(a)
    }

    proptest! {
        #[test]
        fn planted_similarity(n in 1usize..9, seed in any::<u64>(), perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle()) {
            let p: Vec<usize> = perm.into_iter().filter(|&x| x < n).collect();
            let a = RationalMatrix::from_fn(n, n, |i, j| {
                let (x, y) = (i.min(j) as u64, i.max(j) as u64);
                rat(((seed ^ (x * 31 + y * 7)).wrapping_mul(0x9e3779b97f4a7c15) >> 61) as i64, 2)
            });
            let b = permuted(&a, &p, &p);
            let w = permutation_similarity(&a, &b).unwrap();
            prop_assert!(w.is_some());
            prop_assert_eq!(w.unwrap().apply(&a), b);
        }
    }
}

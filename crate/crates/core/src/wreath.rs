//! Characters of the wreath product `G_w = C_p ≀ S_w`.
//!
//! Classes and irreducible characters are both labeled by p-tuples of
//! partitions of total size w. Character values come from the tuple form of
//! the Murnaghan–Nakayama rule: peeling a cycle of length s and colour j off
//! the class label sums, over slots i and rim s-hooks of slot i, the value of
//! the smaller character times `ζ^(ij)` and the leg sign.

use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::arith::{CycloInt, CycloMatrix};
use crate::error::{Error, Result};
use crate::partition::{enumerate_multipartitions, MultiPartition};
use crate::symchar::centralizer_order_sym;

/// Class label `μ` of `G_w`; `in_gamma` iff slot 0 is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathClass {
    pub label: MultiPartition,
    pub in_gamma: bool,
}

/// All conjugacy classes of `C_p ≀ S_w` in canonical order.
pub fn wreath_classes(p: usize, w: usize) -> Vec<WreathClass> {
    enumerate_multipartitions(p, w)
        .into_iter()
        .map(|label| {
            let in_gamma = label.slots[0].is_empty();
            WreathClass { label, in_gamma }
        })
        .collect()
}

/// `|C(g_μ)| = Π_i p^{l(μ_i)} · |C_{S_{|μ_i|}}(s_{μ_i})|`.
pub fn wreath_centralizer_order(mu: &MultiPartition) -> u128 {
    let p = mu.num_slots() as u128;
    mu.slots.iter().map(|s| p.pow(s.len() as u32) * centralizer_order_sym(s)).product()
}

/// Cycles `(length, colour)` of the class, longest first.
fn class_cycles(mu: &MultiPartition) -> Vec<(usize, usize)> {
    let mut cycles: Vec<(usize, usize)> = mu
        .slots
        .iter()
        .enumerate()
        .flat_map(|(j, s)| s.parts().iter().map(move |&len| (len, j)))
        .collect();
    cycles.sort_unstable_by(|a, b| b.cmp(a));
    cycles
}

/// Memoized evaluator for one class; keys are determined by the size of the
/// remaining character label because cycles are always peeled in one order.
struct ColumnEvaluator {
    p: usize,
    cycles: Vec<(usize, usize)>,
    memo: HashMap<MultiPartition, CycloInt>,
}

impl ColumnEvaluator {
    fn new(mu: &MultiPartition) -> Self {
        ColumnEvaluator { p: mu.num_slots(), cycles: class_cycles(mu), memo: HashMap::new() }
    }

    fn value(&mut self, lambda: &MultiPartition) -> CycloInt {
        let w = lambda.total();
        if w == 0 {
            return CycloInt::int(self.p, 1);
        }
        if let Some(v) = self.memo.get(lambda) {
            return v.clone();
        }
        let total: usize = self.cycles.iter().map(|c| c.0).sum();
        // the cycles still to be peeled are a suffix of the list
        let mut consumed = total - w;
        let mut idx = 0;
        while consumed > 0 {
            consumed -= self.cycles[idx].0;
            idx += 1;
        }
        let (s, j) = self.cycles[idx];
        let mut acc = CycloInt::zero(self.p);
        for i in 0..self.p {
            for (smaller, leg) in lambda.slots[i].remove_rim_hooks(s) {
                let mut next = lambda.clone();
                next.slots[i] = smaller;
                let v = self.value(&next);
                acc.add_rotated(&v, i * j, if leg % 2 == 0 { 1 } else { -1 });
            }
        }
        self.memo.insert(lambda.clone(), acc.clone());
        acc
    }
}

/// `ψ_λ(g_μ)` as an element of ℤ[ζ_p].
pub fn wreath_char_value(lambda: &MultiPartition, mu: &MultiPartition) -> Result<CycloInt> {
    if lambda.num_slots() != mu.num_slots() || lambda.total() != mu.total() {
        return Err(Error::Shape(format!("character {lambda} and class {mu} disagree")));
    }
    Ok(ColumnEvaluator::new(mu).value(lambda))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum XSource {
    Computed,
    Cache,
    /// A cache file existed but was rejected; the matrix was recomputed.
    Recomputed,
}

/// Character values `ψ_λ(g_μ)` for all λ and the selected classes μ.
#[derive(Clone, Debug)]
pub struct XMatrix {
    pub p: usize,
    pub w: usize,
    pub rows: Vec<MultiPartition>,
    pub cols: Vec<MultiPartition>,
    pub values: CycloMatrix,
    /// Centralizer orders of the column classes.
    pub norms: Vec<u128>,
    pub source: XSource,
}

impl XMatrix {
    fn assemble(p: usize, w: usize, cols: Vec<MultiPartition>, values: Option<CycloMatrix>) -> Result<Self> {
        let rows = enumerate_multipartitions(p, w);
        let norms: Vec<u128> = cols.iter().map(wreath_centralizer_order).collect();
        let (values, source) = match values {
            Some(v) => (v, XSource::Cache),
            None => (compute_values(p, &rows, &cols)?, XSource::Computed),
        };
        let x = XMatrix { p, w, rows, cols, values, norms, source };
        x.values.check_orthogonality(&x.norms)?;
        if p == 2 && x.values.data.iter().any(|c| c.as_integer().is_none()) {
            return Err(Error::Consistency("X is not integral for p = 2".into()));
        }
        Ok(x)
    }

    /// Columns restricted to Γ (slot 0 of the class label empty).
    pub fn gamma(p: usize, w: usize) -> Result<Self> {
        let cols = gamma_labels(p, w);
        Self::assemble(p, w, cols, None)
    }

    /// Every class as a column; used for full orthogonality checks.
    pub fn all_classes(p: usize, w: usize) -> Result<Self> {
        Self::assemble(p, w, enumerate_multipartitions(p, w), None)
    }

    pub fn row_index(&self, lambda: &MultiPartition) -> Option<usize> {
        self.rows.binary_search_by(|r| r.canonical_cmp(lambda)).ok()
    }
}

fn gamma_labels(p: usize, w: usize) -> Vec<MultiPartition> {
    wreath_classes(p, w).into_iter().filter(|c| c.in_gamma).map(|c| c.label).collect()
}

fn compute_values(p: usize, rows: &[MultiPartition], cols: &[MultiPartition]) -> Result<CycloMatrix> {
    let columns: Vec<Vec<CycloInt>> = cols
        .par_iter()
        .map(|mu| {
            let mut ev = ColumnEvaluator::new(mu);
            rows.iter().map(|l| ev.value(l)).collect()
        })
        .collect();
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for r in 0..rows.len() {
        for col in &columns {
            data.push(col[r].clone());
        }
    }
    CycloMatrix::new(p, rows.len(), cols.len(), data)
}

/// `X` for `(p, w)`, going through the disk cache when one is given.
pub fn x_matrix(p: usize, w: usize, cache: Option<&XCache>) -> Result<XMatrix> {
    let Some(cache) = cache else {
        return XMatrix::gamma(p, w);
    };
    let cols = gamma_labels(p, w);
    match cache.load(p, w) {
        Ok(Some(values)) => match XMatrix::assemble(p, w, cols.clone(), Some(values)) {
            Ok(x) => return Ok(x),
            Err(e) if !matches!(e, Error::Shape(_) | Error::OrthogonalityViolation(_) | Error::NonRational(_)) => {
                return Err(e)
            }
            Err(_) => {}
        },
        Ok(None) => {
            let x = XMatrix::assemble(p, w, cols, None)?;
            cache.store(&x)?;
            return Ok(x);
        }
        Err(Error::CacheInvalid { .. }) => {}
        Err(e) => return Err(e),
    }
    let mut x = XMatrix::assemble(p, w, cols, None)?;
    x.source = XSource::Recomputed;
    cache.store(&x)?;
    Ok(x)
}

const CACHE_MAGIC: &str = "MORITA-XMATRIX";
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Directory of cached X matrices, one text file per `(p, w)`.
///
/// Layout: a header of `key value` lines (magic, version, p, w, rows, cols),
/// then one line per row holding the entries separated by spaces, each entry
/// being its ζ-coordinates as decimal integers separated by commas.
#[derive(Clone, Debug)]
pub struct XCache {
    dir: PathBuf,
}

impl XCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        XCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, p: usize, w: usize) -> PathBuf {
        self.dir.join(format!("x_p{p}_w{w}.v{CACHE_FORMAT_VERSION}.txt"))
    }

    pub fn encode(x: &XMatrix) -> String {
        let v = &x.values;
        let mut out = format!(
            "{CACHE_MAGIC}\nversion {CACHE_FORMAT_VERSION}\np {}\nw {}\nrows {}\ncols {}\n",
            x.p, x.w, v.rows, v.cols
        );
        for r in 0..v.rows {
            let line: Vec<String> = (0..v.cols).map(|c| v.get(r, c).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn decode(text: &str, p: usize, w: usize, path: &str) -> Result<CycloMatrix> {
        let invalid = |reason: String| Error::CacheInvalid { path: path.to_string(), reason };
        let mut lines = text.lines();
        if lines.next() != Some(CACHE_MAGIC) {
            return Err(invalid("bad magic".into()));
        }
        let mut header = |key: &str| -> Result<usize> {
            let line = lines.next().ok_or_else(|| invalid(format!("missing {key}")))?;
            let (k, v) = line.split_once(' ').ok_or_else(|| invalid(format!("bad header line {line:?}")))?;
            if k != key {
                return Err(invalid(format!("expected {key}, found {k}")));
            }
            v.parse().map_err(|_| invalid(format!("bad {key} value {v:?}")))
        };
        let version = header("version")?;
        if version != CACHE_FORMAT_VERSION as usize {
            return Err(invalid(format!("format version {version}")));
        }
        if header("p")? != p || header("w")? != w {
            return Err(invalid("parameters do not match".into()));
        }
        let rows = header("rows")?;
        let cols = header("cols")?;
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines.next().ok_or_else(|| invalid(format!("missing row {r}")))?;
            let entries: Vec<&str> = line.split(' ').collect();
            if entries.len() != cols {
                return Err(invalid(format!("row {r} has {} entries", entries.len())));
            }
            for e in entries {
                let coords = e
                    .split(',')
                    .map(|c| c.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| invalid(format!("bad entry {e:?}")))?;
                if coords.len() != p - 1 {
                    return Err(invalid(format!("entry {e:?} has wrong arity")));
                }
                data.push(CycloInt { coords });
            }
        }
        if lines.next().is_some_and(|l| !l.is_empty()) {
            return Err(invalid("trailing data".into()));
        }
        CycloMatrix::new(p, rows, cols, data).map_err(|e| invalid(e.to_string()))
    }

    pub fn load(&self, p: usize, w: usize) -> Result<Option<CycloMatrix>> {
        let path = self.path(p, w);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => {
                return Err(Error::CacheInvalid { path: path.display().to_string(), reason: e.to_string() })
            }
        };
        Self::decode(&text, p, w, &path.display().to_string()).map(Some)
    }

    /// Writes through a temporary file and renames it into place.
    pub fn store(&self, x: &XMatrix) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(x.p, x.w);
        let tmp = self.dir.join(format!(
            ".{}.{}.tmp",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("x"),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(Self::encode(x).as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    fn pt(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn mp(v: &[&[usize]]) -> MultiPartition {
        MultiPartition::new(v.iter().map(|s| pt(s)).collect())
    }

    #[test]
    fn class_counts() {
        let c = wreath_classes(5, 0);
        assert_eq!(c.len(), 1);
        assert!(c[0].in_gamma);
        let c = wreath_classes(2, 2);
        assert_eq!((c.len(), c.iter().filter(|x| x.in_gamma).count()), (5, 2));
        let c = wreath_classes(13, 2);
        assert_eq!((c.len(), c.iter().filter(|x| x.in_gamma).count()), (104, 90));
    }

    #[test]
    fn centralizer_examples() {
        for (p, w) in [(2usize, 3usize), (3, 2), (5, 1)] {
            let mut ones = MultiPartition::empty(p);
            ones.slots[0] = Partition::new(vec![1; w]).unwrap();
            let fact: u128 = (1..=w as u128).product();
            assert_eq!(wreath_centralizer_order(&ones), (p as u128).pow(w as u32) * fact);
            let mut cyc = MultiPartition::empty(p);
            cyc.slots[1] = pt(&[w]);
            assert_eq!(wreath_centralizer_order(&cyc), (p * w) as u128);
        }
        assert_eq!(wreath_centralizer_order(&mp(&[&[], &[1]])), 2);
    }

    #[test]
    fn class_equation() {
        for p in [2usize, 3, 5] {
            for w in 0..=6 {
                if p == 5 && w > 4 {
                    continue;
                }
                let order = (p as u128).pow(w as u32) * (1..=w as u128).product::<u128>();
                let sum: u128 = wreath_classes(p, w).iter().map(|c| order / wreath_centralizer_order(&c.label)).sum();
                assert_eq!(sum, order, "p={p} w={w}");
            }
        }
    }

    #[test]
    fn value_examples() {
        for (p, w) in [(2usize, 3usize), (3, 2)] {
            let mut triv = MultiPartition::empty(p);
            triv.slots[0] = pt(&[w]);
            for c in wreath_classes(p, w) {
                assert_eq!(wreath_char_value(&triv, &c.label).unwrap(), CycloInt::int(p, 1));
            }
        }
        assert_eq!(wreath_char_value(&mp(&[&[], &[1]]), &mp(&[&[], &[1]])).unwrap(), CycloInt::int(2, -1));
        assert_eq!(wreath_char_value(&mp(&[&[], &[2]]), &mp(&[&[], &[1, 1]])).unwrap(), CycloInt::int(2, 1));
    }

    #[test]
    fn small_x_matrices() {
        let x = XMatrix::gamma(2, 1).unwrap();
        assert_eq!(x.rows, vec![mp(&[&[1], &[]]), mp(&[&[], &[1]])]);
        assert_eq!(x.cols, vec![mp(&[&[], &[1]])]);
        assert_eq!(x.values.data, vec![CycloInt::int(2, 1), CycloInt::int(2, -1)]);
        assert_eq!(x.norms, vec![2]);

        let x = XMatrix::gamma(7, 0).unwrap();
        assert_eq!(x.values.data, vec![CycloInt::int(7, 1)]);

        let x = XMatrix::gamma(2, 2).unwrap();
        assert_eq!((x.values.rows, x.values.cols), (5, 2));
        assert_eq!(x.cols, vec![mp(&[&[], &[2]]), mp(&[&[], &[1, 1]])]);
        assert_eq!(x.norms, vec![4, 8]);
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = XCache::new(dir.path());
        let x = x_matrix(3, 2, Some(&cache)).unwrap();
        assert_eq!(x.source, XSource::Computed);
        let again = x_matrix(3, 2, Some(&cache)).unwrap();
        assert_eq!(again.source, XSource::Cache);
        assert_eq!(again.values, x.values);

        // bytes are stable
        let text = fs::read_to_string(cache.path(3, 2)).unwrap();
        assert_eq!(text, XCache::encode(&x));

        fs::write(cache.path(3, 2), text.replacen("MORITA", "MORITX", 1)).unwrap();
        assert!(matches!(cache.load(3, 2), Err(Error::CacheInvalid { .. })));
        let fixed = x_matrix(3, 2, Some(&cache)).unwrap();
        assert_eq!(fixed.source, XSource::Recomputed);
        assert_eq!(fixed.values, x.values);

        // a well-formed file with a wrong value fails orthogonality and is replaced
        let bad = XCache::encode(&x).replacen("\n1,0", "\n2,0", 1);
        assert_ne!(bad, XCache::encode(&x));
        fs::write(cache.path(3, 2), bad).unwrap();
        let fixed = x_matrix(3, 2, Some(&cache)).unwrap();
        assert_eq!(fixed.source, XSource::Recomputed);
        assert_eq!(fs::read_to_string(cache.path(3, 2)).unwrap(), XCache::encode(&x));
    }
}

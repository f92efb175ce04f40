//! Decomposition matrices of blocks of weight at most 3 from the
//! Jantzen–Schaper formula, in the range where all entries are 0 or 1.

use std::collections::HashMap;

use crate::arith::{Rational, RationalMatrix};
use crate::block::{irr_block, Block, OsimaProjection};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::wreath::XCache;

/// Refuses parameters outside the 0/1 range.
pub fn check_regime(p: usize, w: usize) -> Result<()> {
    let ok = w == 0 || (p % 2 == 1 && w <= 2) || (w == 3 && p >= 5);
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedRegime(format!("p={p} w={w}: decomposition numbers need not be 0 or 1")))
    }
}

/// `μ ⊵ λ`.
pub fn dominates(mu: &Partition, lambda: &Partition) -> bool {
    let (mut a, mut b) = (0usize, 0usize);
    for i in 0..mu.len().max(lambda.len()) {
        a += mu.part(i);
        b += lambda.part(i);
        if a < b {
            return false;
        }
    }
    true
}

fn nu_p(mut n: usize, p: usize) -> i64 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Coefficients `c_{λν}` of the Jantzen–Schaper sum: on a β-set of λ, a bead
/// `x` moves up to `x+h` and a lower bead `y` moves down to `y−h`, both
/// targets empty. The coefficient is `ν_p(x−y+h) − ν_p(h)` times the sign
/// `(−1)^(beads strictly between y−h and y, and between x and x+h)`.
pub fn js_coefficients(lambda: &Partition, p: usize) -> Vec<(Partition, i64)> {
    let t = lambda.len();
    let beta = lambda.beta_numbers(t);
    let top = beta.first().copied().unwrap_or(0);
    let mut occ = vec![false; 2 * top + 2];
    for &b in &beta {
        occ[b] = true;
    }
    let between = |lo: usize, hi: usize| (lo + 1..hi).filter(|&k| occ[k]).count();
    let mut acc: HashMap<Partition, i64> = HashMap::new();
    for (ix, &x) in beta.iter().enumerate() {
        for &y in &beta[ix + 1..] {
            for h in 1..=y {
                let (e, f) = (y - h, x + h);
                if occ[e] || occ[f] {
                    continue;
                }
                let coeff = nu_p(x - e, p) - nu_p(y - e, p);
                if coeff == 0 {
                    continue;
                }
                let sign = if (between(e, y) + between(x, f)) % 2 == 0 { 1 } else { -1 };
                let mut moved: Vec<usize> = beta.iter().map(|&b| if b == x { f } else if b == y { e } else { b }).collect();
                moved.sort_unstable_by(|a, b| b.cmp(a));
                *acc.entry(Partition::from_beta(&moved)).or_insert(0) += sign * coeff;
            }
        }
    }
    let mut out: Vec<(Partition, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    out.sort_by(|a, b| b.0.cmp(&a.0));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DecompositionMatrix {
    pub block: Block,
    /// Irr(B), descending lexicographic.
    pub rows: Vec<Partition>,
    /// p-regular members of Irr(B), same order.
    pub cols: Vec<Partition>,
    pub entries: Vec<Vec<u8>>,
}

impl DecompositionMatrix {
    pub fn to_rational(&self) -> RationalMatrix {
        let m = RationalMatrix::from_fn(self.rows.len(), self.cols.len(), |i, j| {
            Rational::from_integer(self.entries[i][j].into())
        });
        let names = |v: &[Partition]| v.iter().map(|l| l.to_string()).collect();
        m.with_labels(Some(names(&self.rows)), Some(names(&self.cols))).expect("partitions are distinct")
    }

    /// One line per row, `.` for zero.
    pub fn render_dots(&self) -> String {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&e| if e == 0 { ".".to_string() } else { e.to_string() }).collect::<String>() + "\n")
            .collect()
    }

    pub fn row_col_sum_key(&self) -> String {
        row_col_sum_key(&self.entries)
    }
}

/// Sorted row sums and sorted column sums, e.g. `rows{1,1,2}|cols{2,2}`.
pub fn row_col_sum_key(q: &[Vec<u8>]) -> String {
    let mut rows: Vec<u64> = q.iter().map(|r| r.iter().map(|&e| e as u64).sum()).collect();
    let cols_n = q.first().map_or(0, |r| r.len());
    let mut cols: Vec<u64> = (0..cols_n).map(|j| q.iter().map(|r| r[j] as u64).sum()).collect();
    rows.sort_unstable();
    cols.sort_unstable();
    let join = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("rows{{{}}}|cols{{{}}}", join(&rows), join(&cols))
}

/// Jantzen–Schaper bound row `J(λ, ·)` from the rows already resolved.
fn bound_row(
    lambda: &Partition,
    block: &Block,
    in_block: &HashMap<Partition, usize>,
    resolved: &[Option<Vec<u8>>],
    ncols: usize,
) -> Result<Vec<i64>> {
    let mut j = vec![0i64; ncols];
    let mut outside: HashMap<Partition, i64> = HashMap::new();
    for (nu, c) in js_coefficients(lambda, block.p) {
        match in_block.get(&nu) {
            Some(&r) => {
                let row = resolved[r].as_ref().ok_or_else(|| {
                    Error::Consistency(format!("{nu} is needed for {lambda} before it is resolved in {block}"))
                })?;
                for (acc, &d) in j.iter_mut().zip(row) {
                    *acc += c * d as i64;
                }
            }
            None => *outside.entry(nu).or_insert(0) += c,
        }
    }
    if let Some((nu, _)) = outside.into_iter().find(|(_, c)| *c != 0) {
        return Err(Error::Consistency(format!("{lambda} has a term {nu} outside {block}")));
    }
    Ok(j)
}

/// `J` for every row, given a fully resolved matrix.
pub fn js_bound_matrix(q: &DecompositionMatrix) -> Result<Vec<Vec<i64>>> {
    check_regime(q.block.p, q.block.w)?;
    let index: HashMap<Partition, usize> = q.rows.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    let resolved: Vec<Option<Vec<u8>>> = q.entries.iter().cloned().map(Some).collect();
    q.rows.iter().map(|l| bound_row(l, &q.block, &index, &resolved, q.cols.len())).collect()
}

fn compute(block: &Block) -> Result<DecompositionMatrix> {
    check_regime(block.p, block.w)?;
    let mut rows: Vec<Partition> = irr_block(block)?.into_iter().map(|r| r.lambda).collect();
    rows.sort_by(|a, b| b.cmp(a));
    let cols: Vec<Partition> = rows.iter().filter(|l| l.is_p_regular(block.p)).cloned().collect();
    let col_of: HashMap<&Partition, usize> = cols.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let index: HashMap<Partition, usize> = rows.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    let mut resolved: Vec<Option<Vec<u8>>> = vec![None; rows.len()];
    for (r, lambda) in rows.iter().enumerate() {
        let j = bound_row(lambda, block, &index, &resolved, cols.len())?;
        let mut row = vec![0u8; cols.len()];
        for (c, mu) in cols.iter().enumerate() {
            if mu == lambda {
                row[c] = 1;
                continue;
            }
            if j[c] < 0 {
                return Err(Error::Consistency(format!("negative bound at ({lambda},{mu}) in {block}")));
            }
            row[c] = (j[c] > 0) as u8;
        }
        if let Some(&c) = col_of.get(lambda) {
            if j[c] != 0 {
                return Err(Error::Consistency(format!("nonzero diagonal bound at {lambda} in {block}")));
            }
        }
        resolved[r] = Some(row);
    }
    let entries: Vec<Vec<u8>> = resolved.into_iter().map(|r| r.expect("all rows resolved")).collect();
    let q = DecompositionMatrix { block: block.clone(), rows, cols, entries };
    check_shape(&q)?;
    Ok(q)
}

fn check_shape(q: &DecompositionMatrix) -> Result<()> {
    let gamma = crate::partition::enumerate_multipartitions(q.block.p - 1, q.block.w).len();
    if q.cols.len() != gamma {
        return Err(Error::Consistency(format!("{} columns, expected {gamma} for {}", q.cols.len(), q.block)));
    }
    for (i, lambda) in q.rows.iter().enumerate() {
        for (j, mu) in q.cols.iter().enumerate() {
            let d = q.entries[i][j];
            if d > 1 || (mu == lambda && d != 1) || (d != 0 && !dominates(mu, lambda)) {
                return Err(Error::Consistency(format!("entry ({lambda},{mu}) = {d} breaks unitriangularity")));
            }
        }
    }
    Ok(())
}

/// Checks `Q·(QᵗQ)⁻¹·Qᵗ = M` after reordering rows to Irr(B) order.
pub fn osima_check(q: &DecompositionMatrix, proj: &OsimaProjection) -> Result<()> {
    let inv = crate::block::m_matrix_with(&q.block, proj)?;
    let canon: HashMap<&Partition, usize> = inv.records.iter().enumerate().map(|(i, r)| (&r.lambda, i)).collect();
    let qm = q.to_rational();
    let cartan = qm.transpose().mul(&qm)?;
    let via_q = qm.mul(&cartan.inverse()?)?.mul(&qm.transpose())?;
    for (i, a) in q.rows.iter().enumerate() {
        for (j, b) in q.rows.iter().enumerate() {
            if via_q.get(i, j) != inv.m.get(canon[a], canon[b]) {
                return Err(Error::Consistency(format!(
                    "decomposition matrix of {} disagrees with M at ({a},{b})",
                    q.block
                )));
            }
        }
    }
    Ok(())
}

/// The decomposition matrix, checked against the character-theoretic `M`.
pub fn decomposition_matrix_with(block: &Block, proj: &OsimaProjection) -> Result<DecompositionMatrix> {
    let q = compute(block)?;
    osima_check(&q, proj)?;
    Ok(q)
}

pub fn decomposition_matrix(block: &Block, cache: Option<&XCache>) -> Result<DecompositionMatrix> {
    check_regime(block.p, block.w)?;
    let proj = OsimaProjection::new(block.p, block.w, cache)?;
    decomposition_matrix_with(block, &proj)
}

/// The two printed weight-2 matrices for p = 5, cores `(8,4²,1⁴)` and `(9,5²,2³)`.
pub const GOLDEN_P5_W2: [(&[usize], [&str; 20]); 2] = [
    (
        &[8, 4, 4, 1, 1, 1, 1],
        [
            "1.............",
            ".1............",
            "111...........",
            "..11..........",
            "...11.........",
            ".11..1........",
            "1.1...1.......",
            "..11.111......",
            "...11..11.....",
            "......11.1....",
            ".....1.1111...",
            ".....1....11..",
            "........11111.",
            ".........1..11",
            "...........1..",
            ".............1",
            "...........111",
            "........1...1.",
            "....1...1.....",
            "....1.........",
        ],
    ),
    (
        &[9, 5, 5, 2, 2, 2],
        [
            "1.............",
            ".1............",
            "111...........",
            "...1..........",
            "...11.........",
            ".11..1........",
            "1.1...1.......",
            "...1...1......",
            "...11..11.....",
            ".........1....",
            ".........11...",
            "..........11..",
            ".........1111.",
            ".........1..11",
            ".....1..1..1..",
            "......1.1....1",
            ".......11..111",
            ".......1....1.",
            "..1.111.1.....",
            "..1.1.........",
        ],
    ),
];

pub fn parse_dots(lines: &[&str]) -> RationalMatrix {
    let rows: Vec<Vec<i64>> =
        lines.iter().map(|l| l.chars().map(|c| c.to_digit(10).unwrap_or(0) as i64).collect()).collect();
    RationalMatrix::from_i64_rows(&rows).expect("rectangular golden matrix")
}

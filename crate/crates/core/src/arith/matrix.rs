//! Dense exact matrices over ℚ and ℤ[ζ_p].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cyclo::CycloInt;
use super::rational::{self, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data, row_labels: None, col_labels: None }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Ok(RationalMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rational::rat_int(x)).collect()).collect())
    }

    pub fn with_labels(mut self, rows: Option<Vec<String>>, cols: Option<Vec<String>>) -> Result<Self> {
        for (labels, n) in [(&rows, self.rows), (&cols, self.cols)] {
            if let Some(l) = labels {
                if l.len() != n {
                    return Err(Error::Shape(format!("{} labels for {n} lines", l.len())));
                }
                let mut sorted = l.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != l.len() {
                    return Err(Error::Contract("duplicate matrix labels".into()));
                }
            }
        }
        self.row_labels = rows;
        self.col_labels = cols;
        Ok(self)
    }

    pub fn without_labels(&self) -> Self {
        RationalMatrix { row_labels: None, col_labels: None, ..self.clone() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data: Vec<Rational> = (0..self.rows * rhs.cols)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / rhs.cols, idx % rhs.cols);
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc += a * rhs.get(k, j);
                    }
                }
                acc
            })
            .collect();
        Ok(RationalMatrix { rows: self.rows, cols: rhs.cols, data, row_labels: None, col_labels: None })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Reduced row echelon form; returns the rank.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Rational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(rank, piv);
            let inv = a[rank][c].recip();
            for r in rank + 1..self.rows {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] * &inv;
                for k in c..self.cols {
                    let t = &a[rank][k] * &f;
                    a[r][k] -= t;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        for c in 0..n {
            let piv = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or_else(|| Error::Contract("singular matrix".into()))?;
            a.swap(c, piv);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in c..2 * n {
                        let t = &a[c][k] * &f;
                        a[r][k] -= t;
                    }
                }
            }
        }
        Self::from_rows(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone());
        m.row_labels = self.row_labels.as_ref().map(|l| rows.iter().map(|&i| l[i].clone()).collect());
        m.col_labels = self.col_labels.as_ref().map(|l| cols.iter().map(|&j| l[j].clone()).collect());
        m
    }

    /// Least common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    /// `scale · self` as integers, or `None` if some entry stays fractional.
    pub fn scaled_integers(&self, scale: &BigInt) -> Option<Vec<Vec<BigInt>>> {
        let s = Rational::from_integer(scale.clone());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|q| {
                        let v = q * &s;
                        v.is_integer().then(|| v.to_integer())
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord {
            rows: self.rows,
            cols: self.cols,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: (0..self.rows).map(|i| self.row(i).iter().map(rational::render).collect()).collect(),
        }
    }

    pub fn from_record(rec: &MatrixRecord) -> Result<Self> {
        let rows = rec
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| rational::parse(s).ok_or_else(|| Error::Contract(format!("bad rational {s:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = if rows.is_empty() { Self::zeros(rec.rows, rec.cols) } else { Self::from_rows(rows)? };
        if m.rows != rec.rows || m.cols != rec.cols {
            return Err(Error::Shape("record dimensions disagree with entries".into()));
        }
        m.with_labels(rec.row_labels.clone(), rec.col_labels.clone())
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(rational::render).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Serializable form of a labeled exact matrix; entries as `num/den` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub row_labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub col_labels: Option<Vec<String>>,
    pub entries: Vec<Vec<String>>,
}

/// Matrix with entries in ℤ[ζ_p].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    pub p: usize,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<CycloInt>,
}

impl CycloMatrix {
    pub fn new(p: usize, rows: usize, cols: usize, data: Vec<CycloInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for {rows}x{cols}", data.len())));
        }
        if data.iter().any(|c| c.prime() != p) {
            return Err(Error::Contract("entry over a different cyclotomic field".into()));
        }
        Ok(CycloMatrix { p, rows, cols, data })
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloInt {
        &self.data[i * self.cols + j]
    }

    /// Exact `Xᵗ·X̄` as integers, failing if some entry is not rational.
    pub fn gram_columns(&self) -> Result<Vec<Vec<i128>>> {
        let c = self.cols;
        let pairs: Vec<(usize, usize)> = (0..c).flat_map(|i| (i..c).map(move |j| (i, j))).collect();
        let vals: Vec<i128> = pairs
            .par_iter()
            .map(|&(mu, nu)| {
                let mut acc = vec![0i128; self.p - 1];
                for r in 0..self.rows {
                    let prod = self.get(r, nu).conj().mul_wide(self.get(r, mu));
                    add_checked(&mut acc, &prod, 1)?;
                }
                rational_part(&acc)
            })
            .collect::<Result<_>>()?;
        let mut g = vec![vec![0i128; c]; c];
        for ((i, j), v) in pairs.into_iter().zip(vals) {
            g[i][j] = v;
            g[j][i] = v;
        }
        Ok(g)
    }

    /// Verifies `Xᵗ·X̄ = diag(norms)` exactly.
    pub fn check_orthogonality(&self, norms: &[u128]) -> Result<()> {
        if norms.len() != self.cols {
            return Err(Error::Shape(format!("{} norms for {} columns", norms.len(), self.cols)));
        }
        let g = self.gram_columns()?;
        for (i, row) in g.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let expect = if i == j { norms[i] as i128 } else { 0 };
                if v != expect {
                    return Err(Error::OrthogonalityViolation(format!(
                        "column pair ({i},{j}): got {v}, expected {expect}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn add_checked(acc: &mut [i128], v: &[i128], scale: i128) -> Result<()> {
    for (a, &b) in acc.iter_mut().zip(v) {
        *a = b
            .checked_mul(scale)
            .and_then(|t| a.checked_add(t))
            .ok_or_else(|| Error::Consistency("i128 overflow in cyclotomic accumulation".into()))?;
    }
    Ok(())
}

fn rational_part(acc: &[i128]) -> Result<i128> {
    if acc[1..].iter().any(|&c| c != 0) {
        return Err(Error::NonRational(format!("{acc:?}")));
    }
    Ok(acc[0])
}

fn lcm_all(norms: &[u128]) -> u128 {
    norms.iter().fold(1u128, |acc, &n| acc.lcm(&n))
}

/// Integer numerators of `X̄·diag(norms)⁻¹·Xᵗ` restricted to `rows`, over the
/// common denominator returned alongside.
fn gram_numerators(x: &CycloMatrix, norms: &[u128], rows: &[usize]) -> Result<(Vec<Vec<i128>>, i128)> {
    let l = lcm_all(norms);
    let l_i = i128::try_from(l).map_err(|_| Error::Consistency("denominator overflow".into()))?;
    let weights: Vec<i128> = norms.iter().map(|&n| (l / n) as i128).collect();
    let n = rows.len();
    let conj: Vec<Vec<CycloInt>> =
        rows.iter().map(|&a| (0..x.cols).map(|mu| x.get(a, mu).conj()).collect()).collect();
    let nums: Vec<Vec<i128>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = vec![0i128; x.p - 1];
                    for mu in 0..x.cols {
                        let prod = conj[i][mu].mul_wide(x.get(rows[j], mu));
                        add_checked(&mut acc, &prod, weights[mu])?;
                    }
                    rational_part(&acc)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok((nums, l_i))
}

fn to_matrix(nums: &[Vec<i128>], den: i128) -> RationalMatrix {
    let d = BigInt::from(den);
    RationalMatrix::from_fn(nums.len(), nums.len(), |i, j| Rational::new(BigInt::from(nums[i][j]), d.clone()))
}

/// `X̄·(XᵗX̄)⁻¹·Xᵗ` for a matrix whose columns are orthogonal with the given
/// squared norms. The result is checked to be a rational symmetric idempotent
/// of rank equal to the column count.
pub fn gram_project(x: &CycloMatrix, norms: &[u128]) -> Result<RationalMatrix> {
    x.check_orthogonality(norms)?;
    let all: Vec<usize> = (0..x.rows).collect();
    let (nums, l) = gram_numerators(x, norms, &all)?;
    let n = nums.len();
    for i in 0..n {
        for j in 0..i {
            if nums[i][j] != nums[j][i] {
                return Err(Error::Consistency(format!("projection not symmetric at ({i},{j})")));
            }
        }
    }
    // P = N/L is idempotent iff N·N = L·N
    let bad = (0..n).into_par_iter().find_any(|&i| {
        (0..n).any(|j| {
            let mut acc: i128 = 0;
            for k in 0..n {
                let (a, b) = (nums[i][k], nums[k][j]);
                if a == 0 || b == 0 {
                    continue;
                }
                match a.checked_mul(b).and_then(|t| acc.checked_add(t)) {
                    Some(v) => acc = v,
                    None => return true,
                }
            }
            Some(acc) != nums[i][j].checked_mul(l)
        })
    });
    if let Some(i) = bad {
        return Err(Error::Consistency(format!("projection not idempotent in row {i}")));
    }
    // rank of an idempotent equals its trace
    let trace: i128 = (0..n).map(|i| nums[i][i]).sum();
    if trace != l * x.cols as i128 {
        return Err(Error::Consistency(format!("projection trace {trace}/{l} != {}", x.cols)));
    }
    Ok(to_matrix(&nums, l))
}

/// The principal submatrix of [`gram_project`] on `rows`, without the
/// projection checks (a principal submatrix is not itself a projection).
pub fn gram_principal(x: &CycloMatrix, norms: &[u128], rows: &[usize]) -> Result<RationalMatrix> {
    let (nums, l) = gram_numerators(x, norms, rows)?;
    Ok(to_matrix(&nums, l))
}

/// Characteristic polynomial `det(tI - A)` of an integer matrix, by the
/// division-free Berkowitz recursion. Coefficients from `t^n` down to `t^0`.
pub fn char_poly_integer(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut poly = vec![BigInt::one()];
    for k in (0..n).rev() {
        let m = n - k;
        // t = (1, -a_kk, -R C, -R A1 C, ...)
        let mut t = Vec::with_capacity(m + 1);
        t.push(BigInt::one());
        t.push(-a[k][k].clone());
        let mut v: Vec<BigInt> = (k + 1..n).map(|i| a[i][k].clone()).collect();
        for _ in 2..=m {
            let rc: BigInt = (k + 1..n).zip(&v).map(|(j, x)| &a[k][j] * x).sum();
            t.push(-rc);
            v = (k + 1..n)
                .map(|i| (k + 1..n).zip(&v).map(|(j, x)| &a[i][j] * x).sum())
                .collect();
        }
        let mut next = vec![BigInt::zero(); m + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for j in 0..=i.min(m - 1) {
                *slot += &t[i - j] * &poly[j];
            }
        }
        poly = next;
    }
    poly
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerRoots {
    /// Integer eigenvalues with multiplicity, descending.
    pub roots: Vec<BigInt>,
    /// Remaining factor without integer roots, `[1]` when fully split.
    pub residual: Vec<BigInt>,
}

impl IntegerRoots {
    pub fn fully_split(&self) -> bool {
        self.residual.len() == 1
    }
}

fn eval(poly: &[BigInt], x: &BigInt) -> BigInt {
    poly.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn divide_linear(poly: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(poly.len() - 1);
    let mut acc = BigInt::zero();
    for c in &poly[..poly.len() - 1] {
        acc = acc * r + c;
        out.push(acc.clone());
    }
    out
}

/// Integer eigenvalues of `scale·A`, found among divisors of the constant
/// term of the characteristic polynomial inside the Gershgorin bound.
pub fn char_poly_integer_roots(a: &RationalMatrix, scale: &BigInt) -> Result<IntegerRoots> {
    if !a.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let m = a
        .scaled_integers(scale)
        .ok_or_else(|| Error::Contract("scale does not clear denominators".into()))?;
    let bound = m
        .iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<BigInt>())
        .max()
        .unwrap_or_default();
    integer_roots_of(char_poly_integer(&m), &bound)
}

/// Integer roots of a monic integer polynomial (coefficients from the leading
/// one down) whose roots all have absolute value at most `bound`.
pub fn integer_roots_of(mut poly: Vec<BigInt>, bound: &BigInt) -> Result<IntegerRoots> {
    if poly.first().is_none_or(|c| !c.is_one()) {
        return Err(Error::Contract("polynomial is not monic".into()));
    }
    let mut roots = Vec::new();
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
        roots.push(BigInt::zero());
    }
    let bound = bound.to_u64().ok_or_else(|| Error::Contract("root bound too large".into()))?;
    let mut cand = 1u64;
    while cand <= bound && poly.len() > 1 {
        let c0 = poly.last().expect("non-empty").clone();
        for r in [BigInt::from(cand), -BigInt::from(cand)] {
            while poly.len() > 1 && (&c0 % &r).is_zero() && eval(&poly, &r).is_zero() {
                poly = divide_linear(&poly, &r);
                roots.push(r.clone());
            }
        }
        cand += 1;
    }
    roots.sort_by(|x, y| y.cmp(x));
    Ok(IntegerRoots { roots, residual: poly })
}

//! p-blocks of symmetric groups and their Morita invariants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::rational::{factorial_valuation, p_valuation, Valuation};
use crate::arith::{gram_principal, gram_project, RationalMatrix, Rational};
use crate::arith::{char_poly_integer, char_poly_integer_roots, IntegerRoots};
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, from_core_quotient, MultiPartition, Partition};
use crate::symchar::{centralizer_order_sym, degree_valuation, CharValueCache};
use crate::wreath::{x_matrix, XCache, XMatrix};

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Block {
    pub p: usize,
    pub w: usize,
    pub core: Partition,
}

impl Block {
    pub fn new(p: usize, w: usize, core: Partition) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedPrime(p));
        }
        if !core.is_p_core(p) {
            return Err(Error::InvalidCore(core.to_string(), p));
        }
        Ok(Block { p, w, core })
    }

    /// `n = |core| + p·w`.
    pub fn degree(&self) -> usize {
        self.core.size() + self.p * self.w
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} w={} core={}", self.p, self.w, self.core)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CharacterRecord {
    pub lambda: Partition,
    pub quotient: MultiPartition,
    pub sign: i8,
    pub height: u64,
    /// ν_p(χ_λ(1)).
    pub degree_valuation: u64,
}

/// Irr(B) in the canonical order of the quotients, with heights.
pub fn irr_block(block: &Block) -> Result<Vec<CharacterRecord>> {
    let p = block.p;
    let mut records = Vec::new();
    for q in crate::partition::enumerate_multipartitions(p, block.w) {
        let lambda = from_core_quotient(&block.core, &q, p)?;
        let cq = lambda.core_quotient_sign(p);
        if cq.core != block.core || cq.quotient != q {
            return Err(Error::Consistency(format!("{lambda} does not round-trip to {q}")));
        }
        let dv = degree_valuation(&lambda, p);
        records.push(CharacterRecord { lambda, quotient: q, sign: cq.sign, height: 0, degree_valuation: dv });
    }
    let min = records.iter().map(|r| r.degree_valuation).min().unwrap_or(0);
    for r in &mut records {
        r.height = r.degree_valuation - min;
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HeightsDefect {
    /// ν_p(n!).
    pub a: u64,
    pub defect: u64,
    pub heights: Vec<u64>,
}

/// ν_p(ψ_𝛌(1)) with `ψ_𝛌(1) = w!/Π|𝛌_i|! · Π χ_{𝛌_i}(1)`.
pub fn wreath_degree_valuation(q: &MultiPartition, p: usize) -> u64 {
    let w = q.total();
    let mut v = factorial_valuation(w, p);
    for s in &q.slots {
        v -= factorial_valuation(s.size(), p);
        v += degree_valuation(s, p);
    }
    v
}

pub fn heights_defect(block: &Block) -> Result<HeightsDefect> {
    let p = block.p;
    let n = block.degree();
    let records = irr_block(block)?;
    let a = factorial_valuation(n, p);
    let min = records.iter().map(|r| r.degree_valuation).min().unwrap_or(0);
    let defect = a - min;
    let lhs_const = block.w as u64 + factorial_valuation(block.w, p);
    for r in &records {
        // p^w (w!)_p χ(1)_p = (n!)_p ψ(1)_p
        if lhs_const + r.degree_valuation != a + wreath_degree_valuation(&r.quotient, p) {
            return Err(Error::Consistency(format!("height bijection fails at {} in {block}", r.lambda)));
        }
    }
    Ok(HeightsDefect { a, defect, heights: records.iter().map(|r| r.height).collect() })
}

/// The sign-free projection `X̄·(XᵗX̄)⁻¹·Xᵗ` shared by all blocks of one
/// `(p, w)`; a block's `M` is this matrix conjugated by its sign diagonal.
#[derive(Clone, Debug)]
pub struct OsimaProjection {
    pub x: XMatrix,
    pub projection: RationalMatrix,
}

impl OsimaProjection {
    pub fn new(p: usize, w: usize, cache: Option<&XCache>) -> Result<Self> {
        let x = x_matrix(p, w, cache)?;
        let projection = gram_project(&x.values, &x.norms)?;
        Ok(OsimaProjection { x, projection })
    }

    pub fn gamma_size(&self) -> usize {
        self.x.cols.len()
    }
}

#[derive(Clone, Debug)]
pub struct MoritaInvariant {
    pub block: Block,
    pub records: Vec<CharacterRecord>,
    pub m: RationalMatrix,
    pub gamma_size: usize,
}

fn labels(records: &[CharacterRecord], idx: impl Iterator<Item = usize>) -> Vec<String> {
    idx.map(|i| records[i].lambda.to_string()).collect()
}

fn signed(base: &RationalMatrix, signs: &[i8]) -> RationalMatrix {
    RationalMatrix::from_fn(base.rows(), base.cols(), |i, j| {
        let v = base.get(i, j).clone();
        if signs[i] * signs[j] < 0 {
            -v
        } else {
            v
        }
    })
}

fn check_alignment(block: &Block, records: &[CharacterRecord], x: &XMatrix) -> Result<()> {
    if x.p != block.p || x.w != block.w {
        return Err(Error::Contract(format!("character columns for p={} w={} used for {block}", x.p, x.w)));
    }
    if records.len() != x.rows.len() || records.iter().zip(&x.rows).any(|(r, q)| &r.quotient != q) {
        return Err(Error::Consistency(format!("rows of X and Irr(B) disagree for {block}")));
    }
    Ok(())
}

/// `M = D·X̄·(XᵗX̄)⁻¹·Xᵗ·D` for one block.
pub fn m_matrix_with(block: &Block, proj: &OsimaProjection) -> Result<MoritaInvariant> {
    let records = irr_block(block)?;
    check_alignment(block, &records, &proj.x)?;
    let signs: Vec<i8> = records.iter().map(|r| r.sign).collect();
    let names = labels(&records, 0..records.len());
    let m = signed(&proj.projection, &signs).with_labels(Some(names.clone()), Some(names))?;
    Ok(MoritaInvariant { block: block.clone(), records, m, gamma_size: proj.gamma_size() })
}

pub fn m_matrix(block: &Block, cache: Option<&XCache>) -> Result<MoritaInvariant> {
    let proj = OsimaProjection::new(block.p, block.w, cache)?;
    m_matrix_with(block, &proj)
}

/// The p-scalar product matrix `[χ_λ, χ_μ]⁰` over Irr(B), summed over
/// p-regular cycle types directly.
pub fn p_scalar_oracle(block: &Block, cap: usize, chars: &CharValueCache) -> Result<RationalMatrix> {
    let n = block.degree();
    if n > cap {
        return Err(Error::CapExceeded { what: format!("oracle degree {n}"), cap });
    }
    let records = irr_block(block)?;
    let classes: Vec<Partition> =
        enumerate_partitions(n).into_iter().filter(|nu| nu.parts().iter().all(|&s| s % block.p != 0)).collect();
    let table: Vec<Vec<i64>> = records
        .iter()
        .map(|r| classes.iter().map(|nu| chars.value(&r.lambda, nu)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let z: Vec<BigInt> = classes.iter().map(|nu| BigInt::from(centralizer_order_sym(nu))).collect();
    Ok(RationalMatrix::from_fn(records.len(), records.len(), |i, j| {
        (0..classes.len())
            .map(|c| Rational::new(BigInt::from(table[i][c]) * table[j][c], z[c].clone()))
            .fold(Rational::zero(), |a, b| a + b)
    }))
}

/// Number of 2-blocks' height-zero characters: `2^{Σ_{i≥1} i·a_{i−1}}` for
/// the binary digits `a_i` of w.
pub fn irr0_count_2(w: usize) -> u128 {
    let e: u32 = (0..usize::BITS).filter(|&i| w >> i & 1 == 1).map(|i| i + 1).sum();
    1u128 << e
}

#[derive(Clone, Debug)]
pub struct M0Data {
    /// Indices into Irr(B) of the characters in Δ.
    pub delta: Vec<usize>,
    pub labels: Vec<String>,
    pub m0: RationalMatrix,
}

/// Δ = height-zero characters with `|𝛌₀| > |𝛌₁|`, and `M⁰ = M` on Δ×Δ.
pub fn delta_m0(block: &Block, x: &XMatrix) -> Result<M0Data> {
    if block.p != 2 {
        return Err(Error::UnsupportedPrime(block.p));
    }
    let records = irr_block(block)?;
    check_alignment(block, &records, x)?;
    let irr0: Vec<usize> = (0..records.len()).filter(|&i| records[i].height == 0).collect();
    if irr0.len() as u128 != irr0_count_2(block.w) {
        return Err(Error::Consistency(format!(
            "{} height-zero characters in {block}, expected {}",
            irr0.len(),
            irr0_count_2(block.w)
        )));
    }
    let mut delta = Vec::new();
    for &i in &irr0 {
        let s = records[i].quotient.sizes();
        if s[0] == s[1] {
            return Err(Error::Consistency(format!("height-zero {} has balanced quotient", records[i].lambda)));
        }
        if s[0] > s[1] {
            delta.push(i);
        }
    }
    let base = gram_principal(&x.values, &x.norms, &delta)?;
    let signs: Vec<i8> = delta.iter().map(|&i| records[i].sign).collect();
    let names = labels(&records, delta.iter().copied());
    let m0 = signed(&base, &signs).with_labels(Some(names.clone()), Some(names.clone()))?;
    Ok(M0Data { delta, labels: names, m0 })
}

/// The `r`-th 2-power-weight character with core `staircase(k)` and
/// quotient `((r, 1^{w−r}), ())`, with its 2-sign.
pub fn hook_lambda_2power(k: usize, w: usize, r: usize) -> Result<(Partition, i8)> {
    if !w.is_power_of_two() || r == 0 || r > w {
        return Err(Error::Contract(format!("k={k} w={w} r={r}")));
    }
    let piece = |first: usize, twos: usize, ones: usize| {
        let mut v = vec![first];
        v.extend(std::iter::repeat_n(2, twos));
        v.extend(std::iter::repeat_n(1, ones));
        Partition::new(v).expect("weakly decreasing")
    };
    let stair = Partition::staircase(k);
    let (lambda, sign) = if k % 2 == 1 {
        let e = (w - r).saturating_sub(k);
        let add = piece(2 * r, k.min(w - r), 2 * e);
        (stair.add(&add), if e.is_multiple_of(2) { 1 } else { -1 })
    } else {
        let add = piece(2 * (w - r + 1), k.min(r - 1), 2 * (r - 1).saturating_sub(k));
        let e = w - r + 1 + k.min(r - 1);
        (stair.add(&add).conjugate(), if e.is_multiple_of(2) { 1 } else { -1 })
    };
    let cq = lambda.core_quotient_sign(2);
    let mut first = vec![r];
    first.extend(std::iter::repeat_n(1, w - r));
    let expect_q = MultiPartition::new(vec![Partition::new(first)?, Partition::empty()]);
    if cq.sign != sign || cq.core != stair || cq.quotient != expect_q {
        return Err(Error::Consistency(format!(
            "k={k} w={w} r={r}: {lambda} has core {}, quotient {}, sign {} (formula sign {sign})",
            cq.core, cq.quotient, cq.sign
        )));
    }
    Ok((lambda, sign))
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EigenReport {
    /// The eigenvalues are those of `2^scale_exp · M⁰`.
    pub scale_exp: u32,
    pub roots: Vec<String>,
    /// Coefficients of the factor without integer roots; `["1"]` when split.
    pub residual: Vec<String>,
}

/// Integer eigenvalues of `2^e·M⁰` for the least `e` making the
/// characteristic polynomial integral.
pub fn eigen_m0(m0: &RationalMatrix) -> Result<EigenReport> {
    let l = m0.denominator_lcm();
    let ints = m0.scaled_integers(&l).ok_or_else(|| Error::Consistency("denominator lcm does not clear".into()))?;
    let poly = char_poly_integer(&ints);
    let n = poly.len() - 1;
    // coefficients of det(t − s·M⁰) are c_i·(s/l)^i
    let integral = |e: u32| {
        let s = BigInt::one() << e;
        (0..=n).all(|i| {
            let num = &poly[i] * num_traits::pow(s.clone(), i);
            (num % num_traits::pow(l.clone(), i)).is_zero()
        })
    };
    let mut e = 0u32;
    while !integral(e) {
        e += 1;
        if e > 4096 {
            return Err(Error::Consistency("no power of two clears the characteristic polynomial".into()));
        }
    }
    let roots: IntegerRoots = if (BigInt::one() << e) % &l == BigInt::zero() {
        char_poly_integer_roots(m0, &(BigInt::one() << e))?
    } else {
        roots_of_scaled(&poly, &l, e)?
    };
    Ok(EigenReport {
        scale_exp: e,
        roots: roots.roots.iter().map(|r| r.to_string()).collect(),
        residual: roots.residual.iter().map(|r| r.to_string()).collect(),
    })
}

/// Integer roots of `Σ c_i (2^e/l)^i t^{n−i}` when that polynomial is integral
/// but `2^e·M⁰` itself is not.
fn roots_of_scaled(poly: &[BigInt], l: &BigInt, e: u32) -> Result<IntegerRoots> {
    let s = BigInt::one() << e;
    let n = poly.len() - 1;
    let scaled: Vec<BigInt> = (0..=n)
        .map(|i| &poly[i] * num_traits::pow(s.clone(), i) / num_traits::pow(l.clone(), i))
        .collect();
    // all roots are real (M⁰ is symmetric), so |root|² ≤ Σ root² = c₁² − 2c₂
    let sq = if n >= 2 { &scaled[1] * &scaled[1] - 2 * &scaled[2] } else { &scaled[1] * &scaled[1] };
    crate::arith::matrix::integer_roots_of(scaled, &(sq.sqrt() + 1))
}

/// Valuation of a nonzero rational as an integer, for the height checks.
pub fn finite_valuation(q: &Rational, p: usize) -> Option<i64> {
    match p_valuation(q, p) {
        Valuation::Finite(v) => Some(v),
        Valuation::Infinity => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn pt(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn block(p: usize, w: usize, core: &[usize]) -> Block {
        Block::new(p, w, pt(core)).unwrap()
    }

    #[test]
    fn block_validation() {
        assert!(matches!(Block::new(2, 1, pt(&[2])), Err(Error::InvalidCore(..))));
        assert!(matches!(Block::new(4, 1, pt(&[])), Err(Error::UnsupportedPrime(4))));
        assert_eq!(block(5, 2, &[8, 4, 4, 1, 1, 1, 1]).degree(), 30);
    }

    #[test]
    fn irr_examples() {
        let recs = irr_block(&block(2, 1, &[])).unwrap();
        let pairs: Vec<(String, String)> = recs.iter().map(|r| (r.lambda.to_string(), r.quotient.to_string())).collect();
        assert_eq!(
            pairs,
            vec![("(1,1)".into(), "((1),())".into()), ("(2)".into(), "((),(1))".into())]
        );
        assert_eq!(irr_block(&block(13, 2, &[3, 1])).unwrap().len(), 104);
        let recs = irr_block(&block(3, 0, &[2])).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].lambda, pt(&[2]));
    }

    #[test]
    fn heights_examples() {
        let h = heights_defect(&block(2, 1, &[])).unwrap();
        assert_eq!((h.defect, h.heights), (1, vec![0, 0]));
        let h = heights_defect(&block(2, 2, &[])).unwrap();
        assert_eq!(h.defect, 3);
        let recs = irr_block(&block(2, 2, &[])).unwrap();
        let mut by_label: Vec<(String, u64)> = recs.iter().map(|r| (r.lambda.to_string(), r.height)).collect();
        by_label.sort();
        assert_eq!(
            by_label,
            vec![("(1,1,1,1)".into(), 0), ("(2,1,1)".into(), 0), ("(2,2)".into(), 1), ("(3,1)".into(), 0), ("(4)".into(), 0)]
        );
        let h = heights_defect(&block(5, 0, &[3, 1])).unwrap();
        assert_eq!((h.defect, h.heights), (0, vec![0]));
    }

    #[test]
    fn m_matrix_examples() {
        let inv = m_matrix(&block(2, 1, &[]), None).unwrap();
        assert!(inv.m.entries().iter().all(|e| *e == rat(1, 2)));
        let inv = m_matrix(&block(3, 0, &[1]), None).unwrap();
        assert_eq!(inv.m, RationalMatrix::identity(1).with_labels(Some(vec!["(1)".into()]), Some(vec!["(1)".into()])).unwrap());
        let inv = m_matrix(&block(2, 2, &[]), None).unwrap();
        assert_eq!(inv.m.mul(&inv.m).unwrap().entries(), inv.m.entries());
        assert_eq!((inv.m.rank(), inv.m.trace()), (2, rat(2, 1)));
    }

    #[test]
    fn oracle_examples() {
        let chars = CharValueCache::default();
        let b = block(3, 1, &[]);
        let o = p_scalar_oracle(&b, 12, &chars).unwrap();
        let recs = irr_block(&b).unwrap();
        let i3 = recs.iter().position(|r| r.lambda == pt(&[3])).unwrap();
        let i111 = recs.iter().position(|r| r.lambda == pt(&[1, 1, 1])).unwrap();
        assert_eq!(o.get(i3, i3), &rat(2, 3));
        assert_eq!(o.get(i3, i111), &rat(-1, 3));
        assert!(matches!(p_scalar_oracle(&block(2, 7, &[]), 12, &chars), Err(Error::CapExceeded { .. })));
        let b = block(2, 1, &[]);
        assert_eq!(p_scalar_oracle(&b, 12, &chars).unwrap().entries(), m_matrix(&b, None).unwrap().m.entries());
    }

    #[test]
    fn irr0_digit_formula() {
        assert_eq!(irr0_count_2(1), 2);
        assert_eq!(irr0_count_2(2), 4);
        assert_eq!(irr0_count_2(3), 8);
        assert_eq!(irr0_count_2(8), 16);
    }

    #[test]
    fn delta_examples() {
        let b = block(2, 1, &[]);
        let x = XMatrix::gamma(2, 1).unwrap();
        let d = delta_m0(&b, &x).unwrap();
        assert_eq!(d.labels, vec!["(1,1)".to_string()]);
        assert_eq!(d.m0.entries(), &[rat(1, 2)]);
        let d = delta_m0(&block(2, 2, &[]), &XMatrix::gamma(2, 2).unwrap()).unwrap();
        assert_eq!(d.delta.len(), 2);
        assert!(matches!(delta_m0(&block(3, 1, &[]), &XMatrix::gamma(3, 1).unwrap()), Err(Error::UnsupportedPrime(3))));
    }

    #[test]
    fn hook_lambda_examples() {
        assert_eq!(hook_lambda_2power(1, 2, 2).unwrap(), (pt(&[5]), 1));
        assert_eq!(hook_lambda_2power(1, 2, 1).unwrap().0, pt(&[3, 2]));
        assert_eq!(hook_lambda_2power(0, 2, 1).unwrap(), (pt(&[1, 1, 1, 1]), 1));
        for w in [2usize, 4, 8] {
            for k in 0..w {
                for r in 1..=w {
                    hook_lambda_2power(k, w, r).unwrap();
                }
            }
        }
    }

    #[test]
    fn eigen_small() {
        let d = delta_m0(&block(2, 1, &[]), &XMatrix::gamma(2, 1).unwrap()).unwrap();
        let e = eigen_m0(&d.m0).unwrap();
        assert_eq!((e.scale_exp, e.roots.clone(), e.residual.clone()), (1, vec!["1".to_string()], vec!["1".to_string()]));
    }
}

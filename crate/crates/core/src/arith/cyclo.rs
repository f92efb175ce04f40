//! Arithmetic in ℚ(ζ_p) for a prime p.
//!
//! Elements are coordinate vectors in the power basis `1, ζ, ..., ζ^(p-2)`;
//! `ζ^(p-1)` is eliminated eagerly with `1 + ζ + ... + ζ^(p-1) = 0`.
//! [`Cyclotomic`] has rational coordinates and supports the full field
//! operations. [`CycloInt`] is the integral ring ℤ[ζ_p] with machine-word
//! coordinates, used for character values.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    p: usize,
    coords: Vec<Rational>,
}

/// Cyclic convolution in the group ring ℚ[C_p] followed by reduction modulo Φ_p.
fn reduce<T>(mut full: Vec<T>) -> Vec<T>
where
    T: Clone + for<'a> std::ops::SubAssign<&'a T>,
{
    let top = full.pop().expect("group ring vector is non-empty");
    for c in &mut full {
        *c -= &top;
    }
    full
}

impl Cyclotomic {
    pub fn zero(p: usize) -> Self {
        Cyclotomic { p, coords: vec![Rational::zero(); p - 1] }
    }

    pub fn from_rational(p: usize, q: Rational) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = q;
        z
    }

    pub fn one(p: usize) -> Self {
        Self::from_rational(p, Rational::one())
    }

    /// ζ^k.
    pub fn zeta_pow(p: usize, k: usize) -> Self {
        let mut full = vec![Rational::zero(); p];
        full[k % p] = Rational::one();
        Cyclotomic { p, coords: reduce(full) }
    }

    pub fn from_coords(p: usize, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != p - 1 {
            return Err(Error::Shape(format!("{} coordinates for p = {p}", coords.len())));
        }
        Ok(Cyclotomic { p, coords })
    }

    pub fn prime(&self) -> usize {
        self.p
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(self.coords[0].clone())
        } else {
            Err(Error::NonRational(self.to_string()))
        }
    }

    fn full(&self) -> Vec<Rational> {
        let mut v = self.coords.clone();
        v.push(Rational::zero());
        v
    }

    /// Complex conjugation, ζ ↦ ζ^(p-1).
    pub fn conj(&self) -> Self {
        let p = self.p;
        let full = self.full();
        let mut out = vec![Rational::zero(); p];
        for (k, c) in full.into_iter().enumerate() {
            out[(p - k) % p] = c;
        }
        Cyclotomic { p, coords: reduce(out) }
    }

    /// Multiplicative inverse, by solving `self · x = 1` in the power basis.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Contract("inverse of zero".into()));
        }
        let n = self.p - 1;
        // augmented system: column j holds self·ζ^j
        let mut a: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n + 1]; n];
        for j in 0..n {
            let col = self * &Cyclotomic::zeta_pow(self.p, j);
            for i in 0..n {
                a[i][j] = col.coords[i].clone();
            }
        }
        a[0][n] = Rational::one();
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[r][c].is_zero()).ok_or_else(|| {
                Error::Consistency("singular multiplication map in a field".into())
            })?;
            a.swap(c, piv);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in c..=n {
                        let t = &a[c][k] * &f;
                        a[r][k] -= t;
                    }
                }
            }
        }
        Ok(Cyclotomic { p: self.p, coords: a.into_iter().map(|row| row[n].clone()).collect() })
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.p, rhs.p);
        Cyclotomic {
            p: self.p,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { p: self.p, coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.p, rhs.p);
        let p = self.p;
        let mut out = vec![Rational::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                out[(i + j) % p] += a * b;
            }
        }
        Cyclotomic { p, coords: reduce(out) }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(p={}, {})", self.p, self)
    }
}

/// Element of ℤ[ζ_p] with `i64` coordinates in the reduced power basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycloInt {
    pub coords: Vec<i64>,
}

impl CycloInt {
    pub fn zero(p: usize) -> Self {
        CycloInt { coords: vec![0; p - 1] }
    }

    pub fn int(p: usize, n: i64) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = n;
        z
    }

    pub fn prime(&self) -> usize {
        self.coords.len() + 1
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.coords[1..].iter().all(|&c| c == 0).then_some(self.coords[0])
    }

    /// `self += sign · ζ^k · v`.
    pub fn add_rotated(&mut self, v: &CycloInt, k: usize, sign: i64) {
        let p = self.prime();
        let k = k % p;
        if k == 0 {
            for (a, b) in self.coords.iter_mut().zip(&v.coords) {
                *a += sign * b;
            }
            return;
        }
        // v·ζ^k: coordinate i lands on i+k; the one landing on p-1 is eliminated
        let top = v.coords.get(p - 1 - k).copied().unwrap_or(0);
        for (i, &b) in v.coords.iter().enumerate() {
            let j = (i + k) % p;
            if j != p - 1 {
                self.coords[j] += sign * b;
            }
        }
        for a in self.coords.iter_mut() {
            *a -= sign * top;
        }
    }

    pub fn conj(&self) -> CycloInt {
        let p = self.prime();
        let mut out = CycloInt::zero(p);
        for (k, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                let single = CycloInt::int(p, c);
                out.add_rotated(&single, (p - k) % p, 1);
            }
        }
        out
    }

    /// Product as a reduced `i128` coordinate vector.
    pub fn mul_wide(&self, rhs: &CycloInt) -> Vec<i128> {
        let p = self.prime();
        let mut full = vec![0i128; p];
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coords.iter().enumerate() {
                full[(i + j) % p] += a as i128 * b as i128;
            }
        }
        let top = full.pop().unwrap_or(0);
        full.iter().map(|c| c - top).collect()
    }

    /// `conj(self) · rhs` when it is rational.
    pub fn conj_mul_rational(&self, rhs: &CycloInt) -> Result<i128> {
        let prod = self.conj().mul_wide(rhs);
        if prod[1..].iter().any(|&c| c != 0) {
            return Err(Error::NonRational(format!("{:?}", prod)));
        }
        Ok(prod[0])
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic {
            p: self.prime(),
            coords: self.coords.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect(),
        }
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

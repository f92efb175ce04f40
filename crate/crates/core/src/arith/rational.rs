use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders as `num/den`, or just `num` for integers.
pub fn render(q: &Rational) -> String {
    q.to_string()
}

pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// p-adic valuation; zero has valuation `Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

pub fn int_valuation(n: &BigInt, p: usize) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinity;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        n = q;
        v += 1;
    }
    Valuation::Finite(v)
}

pub fn p_valuation(q: &Rational, p: usize) -> Valuation {
    match (int_valuation(q.numer(), p), int_valuation(q.denom(), p)) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        _ => Valuation::Infinity,
    }
}

pub fn usize_valuation(mut n: usize, p: usize) -> u32 {
    assert!(n > 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Legendre's formula for ν_p(n!).
pub fn factorial_valuation(n: usize, p: usize) -> u64 {
    let mut v = 0u64;
    let mut q = n;
    while q > 0 {
        q /= p;
        v += q as u64;
    }
    v
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(p_valuation(&rat_int(8), 2), Valuation::Finite(3));
        assert_eq!(p_valuation(&rat(1, 2), 2), Valuation::Finite(-1));
        assert_eq!(p_valuation(&rat_int(0), 5), Valuation::Infinity);
        assert_eq!(p_valuation(&rat(-9, 4), 3), Valuation::Finite(2));
        assert!(Valuation::Finite(1_000) < Valuation::Infinity);
    }

    #[test]
    fn legendre() {
        for n in 0..40 {
            let direct = int_valuation(&factorial(n), 3);
            assert_eq!(direct, Valuation::Finite(factorial_valuation(n, 3) as i64));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 4), BigInt::from(210));
        assert_eq!(binomial(20, 4), BigInt::from(4845));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn render_parse() {
        assert_eq!(render(&rat(2, 4)), "1/2");
        assert_eq!(render(&rat(-6, 3)), "-2");
        assert_eq!(parse("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse("1/0"), None);
    }
}

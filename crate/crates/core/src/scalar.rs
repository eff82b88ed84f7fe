//! Exact scalars and p-adic valuations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number. `BigRational` keeps values in lowest terms with a
/// positive denominator.
pub type ExactScalar = BigRational;

/// Builds an integral scalar.
pub fn int(n: impl Into<BigInt>) -> ExactScalar {
    BigRational::from_integer(n.into())
}

/// A p-adic valuation; zero has valuation `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `self >= bound`, with +inf above everything.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }

    /// Shifts a finite valuation by `k`; infinity is absorbing.
    pub fn offset(self, k: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + k),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Largest `k` with `p^k | n`, for nonzero `n`.
pub(crate) fn int_val_p(n: &BigInt, p: u32) -> i64 {
    debug_assert!(!n.is_zero());
    let p_big = BigInt::from(p);
    // Strip whole machine words of p first; values here reach thousands of bits.
    let mut count = 0i64;
    let mut m = n.abs();
    if p == 2 {
        return m.trailing_zeros().map(|z| z as i64).unwrap_or(0);
    }
    let chunk_exp = match p {
        3 => 40,
        5 => 27,
        7 => 22,
        _ => 1,
    };
    let chunk = p_big.pow(chunk_exp);
    loop {
        let (q, r) = m.div_rem(&chunk);
        if !r.is_zero() {
            break;
        }
        m = q;
        count += chunk_exp as i64;
    }
    loop {
        let (q, r) = m.div_rem(&p_big);
        if !r.is_zero() {
            break;
        }
        m = q;
        count += 1;
    }
    count
}

/// Valuation of an integer.
pub fn val_p_int(n: &BigInt, p: u32) -> Valuation {
    if n.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(int_val_p(n, p))
    }
}

/// p-adic valuation of a rational: numerator valuation minus denominator valuation.
pub fn val_p(x: &ExactScalar, p: u32) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let den = if x.denom().is_one() {
        0
    } else {
        int_val_p(x.denom(), p)
    };
    Valuation::Finite(int_val_p(x.numer(), p) - den)
}

/// Renders a scalar as `a` or `a/b`.
pub fn render(x: &ExactScalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a` or `a/b` as produced by [`render`].
pub fn parse(s: &str) -> Option<ExactScalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

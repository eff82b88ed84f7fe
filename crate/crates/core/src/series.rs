//! Truncated Laurent/Puiseux series with exact rational coefficients.
//!
//! A [`QSeries`] stores the run of coefficients for exponents `val..=prec`
//! in the variable `w = q^(1/ram)`. Everything above `prec` is unknown.
//! Coefficients share one positive denominator so the kernel works on
//! big integers; `coeff` hands back reduced rationals.
//!
//! Precision follows the pessimistic rules: sums keep the smaller `prec`,
//! products keep `min(prec_a + val_b, prec_b + val_a)`. No operation reports
//! a coefficient that its inputs do not determine.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel;
use crate::scalar::ExactScalar;

/// Below this length inversion uses the direct recurrence instead of Newton.
const NEWTON_THRESHOLD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    ram: u32,
    val: i64,
    prec: i64,
    den: BigInt,
    num: Vec<BigInt>,
}

impl QSeries {
    fn from_parts(ram: u32, val: i64, prec: i64, den: BigInt, num: Vec<BigInt>) -> QSeries {
        debug_assert!(den.is_positive());
        debug_assert_eq!(num.len() as i64, (prec - val + 1).max(0));
        let mut s = QSeries {
            ram,
            val,
            prec,
            den,
            num,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.num.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.num.clear();
                self.val = self.prec + 1;
                self.den = BigInt::one();
            }
            Some(k) => {
                if k > 0 {
                    self.num.drain(..k);
                    self.val += k as i64;
                }
                if !self.den.is_one() {
                    let mut g = self.den.clone();
                    for c in &self.num {
                        if g.is_one() {
                            break;
                        }
                        g = g.gcd(c);
                    }
                    if !g.is_one() {
                        self.den /= &g;
                        for c in &mut self.num {
                            *c /= &g;
                        }
                    }
                }
            }
        }
    }

    /// The series that is zero through exponent `prec`.
    pub fn zero(prec: i64) -> QSeries {
        QSeries::from_parts(1, prec + 1, prec, BigInt::one(), Vec::new())
    }

    pub fn one(prec: i64) -> QSeries {
        QSeries::constant(ExactScalar::one(), prec)
    }

    pub fn constant(c: ExactScalar, prec: i64) -> QSeries {
        QSeries::monomial(c, 0, prec)
    }

    /// `c * q^exp`, known through `prec`.
    pub fn monomial(c: ExactScalar, exp: i64, prec: i64) -> QSeries {
        if exp > prec {
            return QSeries::zero(prec);
        }
        let (n, d) = c.into_raw();
        let mut num = vec![BigInt::zero(); (prec - exp + 1) as usize];
        num[0] = n;
        QSeries::from_parts(1, exp, prec, d, num)
    }

    /// Integer coefficients for exponents `val, val+1, ...`; missing entries up to `prec` are zero.
    pub fn from_integers<I, T>(val: i64, coeffs: I, prec: i64) -> QSeries
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let len = (prec - val + 1).max(0) as usize;
        let mut num: Vec<BigInt> = coeffs.into_iter().take(len).map(Into::into).collect();
        num.resize(len, BigInt::zero());
        QSeries::from_parts(1, val.min(prec + 1), prec, BigInt::one(), num)
    }

    /// Rational coefficients for exponents `val, val+1, ...` in `w = q^(1/ram)`.
    pub fn from_scalars(ram: u32, val: i64, coeffs: &[ExactScalar], prec: i64) -> QSeries {
        assert!(ram >= 1, "ramification index must be positive");
        let len = (prec - val + 1).max(0) as usize;
        let den = coeffs
            .iter()
            .take(len)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: Vec<BigInt> = coeffs
            .iter()
            .take(len)
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        num.resize(len, BigInt::zero());
        QSeries::from_parts(ram, val.min(prec + 1), prec, den, num)
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    /// Exponent of the first stored coefficient; `prec + 1` for the zero series.
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Number of exponents from `val` through `prec`.
    pub fn len(&self) -> usize {
        self.num.len()
    }

    /// True when every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Common denominator of the stored coefficients.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Numerators over [`QSeries::denominator`], exponents `val..=prec`.
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    /// The coefficient at `exp`, or `None` above the precision.
    pub fn try_coeff(&self, exp: i64) -> Option<ExactScalar> {
        if exp > self.prec {
            return None;
        }
        if exp < self.val {
            return Some(ExactScalar::zero());
        }
        let n = self.num[(exp - self.val) as usize].clone();
        Some(BigRational::new(n, self.den.clone()))
    }

    /// The coefficient at `exp`.
    ///
    /// Panics if `exp` is above the precision.
    pub fn coeff(&self, exp: i64) -> ExactScalar {
        self.try_coeff(exp)
            .unwrap_or_else(|| panic!("coefficient of w^{exp} is beyond precision {}", self.prec))
    }

    /// Integer coefficient at `exp` when the series is integral.
    pub fn int_coeff(&self, exp: i64) -> Option<BigInt> {
        if !self.is_integral() || exp > self.prec {
            return None;
        }
        if exp < self.val {
            return Some(BigInt::zero());
        }
        Some(self.num[(exp - self.val) as usize].clone())
    }

    /// `(exponent, coefficient)` for every exponent from `val` to `prec`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, ExactScalar)> + '_ {
        self.num.iter().enumerate().map(move |(i, n)| {
            (
                self.val + i as i64,
                BigRational::new(n.clone(), self.den.clone()),
            )
        })
    }

    /// Drops everything above `prec`.
    pub fn truncate(&self, prec: i64) -> QSeries {
        if prec >= self.prec {
            return self.clone();
        }
        let keep = (prec - self.val + 1).max(0) as usize;
        QSeries::from_parts(
            self.ram,
            self.val.min(prec + 1),
            prec,
            self.den.clone(),
            self.num[..keep].to_vec(),
        )
    }

    /// Multiplication by `w^k`.
    pub fn shift(&self, k: i64) -> QSeries {
        let mut s = self.clone();
        s.val += k;
        s.prec += k;
        s
    }

    pub fn scale(&self, c: &ExactScalar) -> QSeries {
        if c.is_zero() {
            let mut z = QSeries::zero(self.prec);
            z.ram = self.ram;
            return z;
        }
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        let den = &self.den * c.denom();
        let (num, den) = if den.is_negative() {
            (negate_all(num), -den)
        } else {
            (num, den)
        };
        QSeries::from_parts(self.ram, self.val, self.prec, den, num)
    }

    pub fn scale_int(&self, c: &BigInt) -> QSeries {
        self.scale(&BigRational::from_integer(c.clone()))
    }

    /// Re-expresses both series over the lcm of their ramification indices.
    fn aligned(a: &QSeries, b: &QSeries) -> (QSeries, QSeries) {
        if a.ram == b.ram {
            return (a.clone(), b.clone());
        }
        let l = a.ram.lcm(&b.ram);
        (a.ramify(l / a.ram), b.ramify(l / b.ram))
    }

    fn add_impl(&self, other: &QSeries) -> QSeries {
        if self.ram != other.ram {
            let (a, b) = QSeries::aligned(self, other);
            return a.add_impl(&b);
        }
        let prec = self.prec.min(other.prec);
        let val = self.val.min(other.val).min(prec + 1);
        let len = (prec - val + 1) as usize;
        let den = self.den.lcm(&other.den);
        let mut num = vec![BigInt::zero(); len];
        for s in [self, other] {
            let factor = &den / &s.den;
            for (i, c) in s.num.iter().enumerate() {
                let exp = s.val + i as i64;
                if exp > prec {
                    break;
                }
                let slot = &mut num[(exp - val) as usize];
                if factor.is_one() {
                    *slot += c;
                } else {
                    *slot += c * &factor;
                }
            }
        }
        QSeries::from_parts(self.ram, val, prec, den, num)
    }

    fn mul_impl(&self, other: &QSeries) -> QSeries {
        if self.ram != other.ram {
            let (a, b) = QSeries::aligned(self, other);
            return a.mul_impl(&b);
        }
        let val = self.val + other.val;
        let prec = (self.prec + other.val).min(other.prec + self.val);
        if self.is_zero() || other.is_zero() {
            let mut z = QSeries::zero(prec);
            z.ram = self.ram;
            return z;
        }
        let len = (prec - val + 1) as usize;
        let num = kernel::convolve(&self.num, &other.num, len);
        QSeries::from_parts(self.ram, val, prec, &self.den * &other.den, num)
    }

    /// Multiplicative inverse to the same relative precision.
    pub fn invert(&self) -> Result<QSeries> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let len = self.num.len();
        let lead = &self.num[0];
        // 1/(w^v * U/den) = w^-v * den * (1/U).
        let (inv_num, inv_den) = if lead.abs().is_one() {
            let mut v = if len > NEWTON_THRESHOLD {
                invert_unit_newton(&self.num, len)
            } else {
                invert_unit_recurrence(&self.num, len)
            };
            if lead.is_negative() {
                v = negate_all(v);
            }
            (v, BigInt::one())
        } else {
            invert_general(&self.num, len)
        };
        let num: Vec<BigInt> = inv_num.into_iter().map(|x| x * &self.den).collect();
        let val = -self.val;
        Ok(QSeries::from_parts(
            self.ram,
            val,
            val + len as i64 - 1,
            inv_den,
            num,
        ))
    }

    /// Binary exponentiation; negative exponents go through [`QSeries::invert`].
    pub fn pow(&self, k: i64) -> Result<QSeries> {
        if k == 0 {
            let mut one = QSeries::one(self.prec - self.val);
            one.ram = self.ram;
            return Ok(one);
        }
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut sq = base;
        let mut acc: Option<QSeries> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => &a * &sq,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = &sq * &sq;
        }
        Ok(acc.expect("nonzero exponent"))
    }

    fn spread(&self, t: u32, ram: u32) -> QSeries {
        assert!(t >= 1, "scale factor must be positive");
        let t64 = t as i64;
        let val = self.val * t64;
        let prec = (self.prec + 1) * t64 - 1;
        let mut num = vec![BigInt::zero(); (prec - val + 1) as usize];
        for (i, c) in self.num.iter().enumerate() {
            num[i * t as usize] = c.clone();
        }
        QSeries::from_parts(ram, val, prec, self.den.clone(), num)
    }

    /// `q^n -> q^(t n)`, i.e. `f(t tau)`.
    pub fn dilate(&self, t: u32) -> QSeries {
        self.spread(t, self.ram)
    }

    /// Same series written in `w' = w^(1/e)`: exponents scale by `e`, values are unchanged.
    pub fn ramify(&self, e: u32) -> QSeries {
        self.spread(e, self.ram * e)
    }

    /// `f(tau / e)`: the coefficient run reinterpreted in `w' = w^(1/e)`.
    pub fn substitute_tau_over(&self, e: u32) -> QSeries {
        assert!(e >= 1, "scale factor must be positive");
        let mut s = self.clone();
        s.ram *= e;
        s
    }

    /// `U_p`: keeps the coefficients whose exponent is divisible by `p`.
    pub fn u_op(&self, p: u32) -> Result<QSeries> {
        if self.ram != 1 {
            return Err(Error::Ramified(self.ram));
        }
        let p64 = p as i64;
        let prec = Integer::div_floor(&self.prec, &p64);
        let val = Integer::div_ceil(&self.val, &p64).min(prec + 1);
        let num = (val..=prec)
            .map(|n| self.num[(n * p64 - self.val) as usize].clone())
            .collect();
        Ok(QSeries::from_parts(1, val, prec, self.den.clone(), num))
    }

    /// True when the two series agree on every exponent both determine.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        (self - other).is_zero()
    }

    /// Floating-point evaluation of the truncated sum at `q` (ram 1 only).
    pub fn evaluate(&self, q: Complex64) -> Complex64 {
        assert_eq!(self.ram, 1, "evaluation is defined for unramified series");
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.num.iter().rev() {
            acc = acc * q + Complex64::new(c.to_f64().unwrap_or(f64::NAN) / den, 0.0);
        }
        acc * q.powi(self.val as i32)
    }
}

fn negate_all(v: Vec<BigInt>) -> Vec<BigInt> {
    v.into_iter().map(|x| -x).collect()
}

/// Inverse of an integer run with leading coefficient 1 (sign handled by caller:
/// a leading -1 is treated as +1 and the result negated).
fn invert_unit_recurrence(u: &[BigInt], len: usize) -> Vec<BigInt> {
    let sign_neg = u[0].is_negative();
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    out.push(BigInt::one());
    for k in 1..len {
        let mut acc = BigInt::zero();
        for j in 1..=k.min(u.len() - 1) {
            if !u[j].is_zero() {
                acc += &u[j] * &out[k - j];
            }
        }
        out.push(if sign_neg { acc } else { -acc });
    }
    out
}

fn invert_unit_newton(u: &[BigInt], len: usize) -> Vec<BigInt> {
    // Normalize to leading +1.
    let u: Vec<BigInt> = if u[0].is_negative() {
        u.iter().map(|x| -x).collect()
    } else {
        u.to_vec()
    };
    let mut v = vec![BigInt::one()];
    while v.len() < len {
        let n = (2 * v.len()).min(len);
        // e = 1 - u v, whose first v.len() terms vanish.
        let uv = kernel::convolve(&u[..u.len().min(n)], &v, n);
        let k = v.len();
        let e: Vec<BigInt> = uv[k..].iter().map(|x| -x).collect();
        let corr = kernel::convolve(&v, &e, n - k);
        v.extend(corr);
    }
    v
}

/// Inverse of an integer run with arbitrary nonzero leading coefficient `c`,
/// returned over the common denominator `c^len` (sign-normalized).
fn invert_general(u: &[BigInt], len: usize) -> (Vec<BigInt>, BigInt) {
    let c = &u[0];
    // scaled[k] = b_k * c^(k+1), an integer.
    let mut scaled: Vec<BigInt> = Vec::with_capacity(len);
    scaled.push(BigInt::one());
    let mut c_pows = vec![BigInt::one()];
    for k in 1..len {
        c_pows.push(&c_pows[k - 1] * c);
        let mut acc = BigInt::zero();
        for j in 1..=k.min(u.len() - 1) {
            if !u[j].is_zero() {
                acc += &u[j] * &scaled[k - j] * &c_pows[j - 1];
            }
        }
        scaled.push(-acc);
    }
    let top = &c_pows[len - 1] * c;
    let mut num: Vec<BigInt> = (0..len)
        .map(|k| &scaled[k] * &c_pows[len - 1 - k])
        .collect();
    let mut den = top;
    if den.is_negative() {
        den = -den;
        num = negate_all(num);
    }
    (num, den)
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.add_impl(rhs)
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.add_impl(&-rhs)
    }
}

impl<'a> Mul<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            ram: self.ram,
            val: self.val,
            prec: self.prec,
            den: self.den.clone(),
            num: self.num.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.ram == 1 { "q" } else { "w" };
        let mut first = true;
        for (e, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag_s = crate::scalar::render(&mag);
            match e {
                0 => f.write_str(&mag_s)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag_s}*")?;
                    }
                    if e == 1 {
                        f.write_str(var)?;
                    } else {
                        write!(f, "{var}^{e}")?;
                    }
                }
            }
        }
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "O({var}^{})", self.prec + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn ints(val: i64, c: &[i64], prec: i64) -> QSeries {
        QSeries::from_integers(val, c.iter().copied(), prec)
    }

    fn psi2() -> QSeries {
        ints(-1, &[1, -24, 276, -2048, 11202, -49152], 4)
    }

    #[test]
    fn add_cancels_and_keeps_min_precision() {
        let a = ints(-1, &[1, -24], 0);
        let b = ints(0, &[24, 1], 3);
        let s = &a + &b;
        assert_eq!(s, ints(-1, &[1, 0], 0));
        let s = &ints(-1, &[1, -24, 0], 1) + &ints(0, &[24, 1], 1);
        assert_eq!(s, ints(-1, &[1, 0, 1], 1));
    }

    #[test]
    fn zero_is_additive_identity_and_inverse_gives_zero() {
        let a = psi2();
        assert_eq!(&QSeries::zero(10) + &a, a);
        let z = &a + &(-&a);
        assert!(z.is_zero());
        assert_eq!(z.prec(), 4);
        assert_eq!(z.val(), 5);
    }

    #[test]
    fn mul_precision_rule() {
        let a = ints(-1, &[1, -24], 0);
        let q = QSeries::from_integers(1, [1], 10);
        let p = &a * &q;
        assert_eq!(p, ints(0, &[1, -24], 1));
        let one = QSeries::one(50);
        assert_eq!(&psi2() * &one, psi2());
    }

    #[test]
    fn invert_geometric_and_valuation() {
        let a = ints(0, &[1, -1], 6);
        assert_eq!(a.invert().unwrap(), ints(0, &[1; 7], 6));
        let u = ints(-1, &[2, 3, 5], 1);
        let inv = u.invert().unwrap();
        assert_eq!(inv.val(), 1);
        assert_eq!(inv.prec(), 3);
        let prod = &u * &inv;
        assert_eq!(prod, QSeries::one(2));
    }

    #[test]
    fn invert_known_psi2() {
        // Long division of 1 by q^-1 - 24 + 276q - ...
        let phi = psi2().invert().unwrap();
        assert_eq!(phi.coeff(1), int(1));
        assert_eq!(phi.coeff(2), int(24));
        assert_eq!(phi.coeff(3), int(300));
        assert!(QSeries::zero(3).invert().is_err());
    }

    #[test]
    fn pow_examples() {
        assert_eq!(psi2().pow(0).unwrap(), QSeries::one(5));
        let sq = psi2().pow(2).unwrap();
        assert_eq!(sq.val(), -2);
        assert_eq!(sq.coeff(-2), int(1));
        assert_eq!(sq.coeff(-1), int(-48));
        assert_eq!(sq.coeff(0), int(1128));
        assert_eq!(sq.prec(), 3);
        let b = ints(0, &[1, 1], 10).pow(3).unwrap();
        assert_eq!(b, ints(0, &[1, 3, 3, 1], 10));
        assert!(QSeries::zero(4).pow(-1).is_err());
    }

    #[test]
    fn dilate_and_ramify() {
        let a = ints(-1, &[1, 0, 1], 1);
        let d = a.dilate(2);
        assert_eq!(d.coeff(-2), int(1));
        assert_eq!(d.coeff(2), int(1));
        assert_eq!(d.coeff(0), int(0));
        assert_eq!(d.prec(), 3);
        assert_eq!(a.dilate(1), a);

        let r = ints(1, &[1, 1], 2).ramify(2);
        assert_eq!(r.ram(), 2);
        assert_eq!(r.val(), 2);
        assert_eq!(r.coeff(4), int(1));
        assert_eq!(r.coeff(3), int(0));
        assert_eq!(r.prec(), 5);
    }

    #[test]
    fn ramified_add_aligns() {
        let a = ints(1, &[1], 3);
        let w = QSeries::from_scalars(2, 1, &[int(1)], 5);
        let s = &a + &w;
        assert_eq!(s.ram(), 2);
        assert_eq!(s.coeff(1), int(1));
        assert_eq!(s.coeff(2), int(1));
        assert_eq!(s.prec(), 5);
    }

    #[test]
    fn u_op_examples() {
        let a = ints(-2, &[1, 0, 0, 1, 0, 0, 1], 4);
        // q^-2 + q + q^4 with an explicit q coefficient
        let a = &a + &ints(-2, &[0, 0, 0, 2], 4);
        let u = a.u_op(2).unwrap();
        assert_eq!(u, ints(-1, &[1, 0, 0, 1], 2));
        let u = psi2().u_op(2).unwrap();
        assert_eq!(u, ints(0, &[-24, -2048, -49152], 2));
        assert!(QSeries::from_integers(1, [1], 20)
            .u_op(3)
            .unwrap()
            .is_zero());
        assert!(psi2().ramify(2).u_op(2).is_err());
    }

    #[test]
    fn rational_coefficients_reduce() {
        let s = QSeries::from_scalars(
            1,
            0,
            &[
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 3.into()),
            ],
            1,
        );
        assert_eq!(s.denominator(), &BigInt::from(6));
        let t = s.scale(&int(6));
        assert!(t.is_integral());
        assert_eq!(t, ints(0, &[3, 2], 1));
        assert_eq!(s.scale(&int(0)).prec(), 1);
        assert!(s.scale(&int(0)).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(psi2().truncate(1).to_string(), "q^-1 - 24 + 276*q + O(q^2)");
        assert_eq!(QSeries::zero(3).to_string(), "O(q^4)");
    }

    fn arb_series(max_len: usize) -> impl Strategy<Value = QSeries> {
        (
            -3i64..3,
            prop::collection::vec(-50i64..50, 1..max_len),
            prop::collection::vec(1i64..4, 1..max_len),
        )
            .prop_map(|(val, nums, dens)| {
                let coeffs: Vec<ExactScalar> = nums
                    .iter()
                    .zip(dens.iter().cycle())
                    .map(|(&n, &d)| BigRational::new(n.into(), d.into()))
                    .collect();
                let prec = val + coeffs.len() as i64 - 1;
                QSeries::from_scalars(1, val, &coeffs, prec)
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(12), b in arb_series(12), c in arb_series(12)) {
            prop_assert!((&(&a + &b) + &c).agrees_with(&(&a + &(&b + &c))));
            prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn invert_is_two_sided(a in arb_series(30)) {
            prop_assume!(!a.is_zero());
            let inv = a.invert().unwrap();
            let prod = &a * &inv;
            prop_assert_eq!(prod.prec(), a.len() as i64 - 1);
            prop_assert!(prod.agrees_with(&QSeries::one(prod.prec())));
        }

        #[test]
        fn u_op_undoes_dilate(a in arb_series(20), pi in 0usize..4) {
            let p = [2u32, 3, 5, 7][pi];
            prop_assert_eq!(a.dilate(p).u_op(p).unwrap(), a);
        }
    }

    #[test]
    fn newton_matches_recurrence() {
        let u: Vec<BigInt> = (0..200)
            .map(|i| BigInt::from(if i == 0 { 1 } else { (i * 37 % 23) as i64 - 11 }))
            .collect();
        assert_eq!(invert_unit_newton(&u, 200), invert_unit_recurrence(&u, 200));
        let neg: Vec<BigInt> = u.iter().map(|x| -x).collect();
        assert_eq!(
            invert_unit_newton(&neg, 150),
            invert_unit_recurrence(&neg, 150)
        );
    }
}

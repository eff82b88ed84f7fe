//! Polynomials in the Hauptmodul `phi`, with exact coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::prime::PrimeContext;
use crate::scalar::{render, ExactScalar};
use crate::series::QSeries;

/// `c_0 + c_1 phi + ... + c_d phi^d` for a fixed level. Index 0 is the
/// constant slot; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPolynomial {
    ctx: PrimeContext,
    coeffs: Vec<ExactScalar>,
}

impl PhiPolynomial {
    pub fn new(ctx: PrimeContext, mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PhiPolynomial { ctx, coeffs }
    }

    pub fn from_integers<T: Into<BigInt>>(
        ctx: PrimeContext,
        coeffs: impl IntoIterator<Item = T>,
    ) -> Self {
        PhiPolynomial::new(
            ctx,
            coeffs
                .into_iter()
                .map(|c| ExactScalar::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(ctx: PrimeContext) -> Self {
        PhiPolynomial::new(ctx, Vec::new())
    }

    /// `c * phi^k`.
    pub fn monomial(ctx: PrimeContext, k: usize, c: ExactScalar) -> Self {
        let mut coeffs = vec![ExactScalar::zero(); k + 1];
        coeffs[k] = c;
        PhiPolynomial::new(ctx, coeffs)
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn constant(&self) -> ExactScalar {
        self.coeff(0)
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Coefficients by degree, constant first.
    pub fn coefficients(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn has_constant_term(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Nonzero terms of degree >= 1.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &ExactScalar)> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
    }

    /// The polynomial with the constant slot cleared.
    pub fn without_constant(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        if let Some(c) = coeffs.first_mut() {
            *c = ExactScalar::zero();
        }
        PhiPolynomial::new(self.ctx, coeffs)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        PhiPolynomial::new(self.ctx, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Substitutes a series for `phi` (Horner).
    pub fn evaluate(&self, phi: &QSeries) -> QSeries {
        let mut acc = QSeries::zero(phi.prec());
        for c in self.coeffs.iter().rev() {
            acc = &acc * phi;
            if !c.is_zero() {
                acc = &acc + &QSeries::constant(c.clone(), acc.prec());
            }
        }
        acc
    }
}

impl Add for &PhiPolynomial {
    type Output = PhiPolynomial;
    fn add(self, rhs: &PhiPolynomial) -> PhiPolynomial {
        debug_assert_eq!(self.ctx, rhs.ctx);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PhiPolynomial::new(
            self.ctx,
            (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        )
    }
}

impl Sub for &PhiPolynomial {
    type Output = PhiPolynomial;
    fn sub(self, rhs: &PhiPolynomial) -> PhiPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &PhiPolynomial {
    type Output = PhiPolynomial;
    fn neg(self) -> PhiPolynomial {
        PhiPolynomial::new(self.ctx, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &PhiPolynomial {
    type Output = PhiPolynomial;
    fn mul(self, rhs: &PhiPolynomial) -> PhiPolynomial {
        debug_assert_eq!(self.ctx, rhs.ctx);
        if self.is_zero() || rhs.is_zero() {
            return PhiPolynomial::zero(self.ctx);
        }
        let mut out = vec![ExactScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PhiPolynomial::new(self.ctx, out)
    }
}

impl fmt::Display for PhiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => f.write_str(&render(c))?,
                _ => {
                    if !c.is_one() {
                        write!(f, "({})*", render(c))?;
                    }
                    if k == 1 {
                        f.write_str("phi")?;
                    } else {
                        write!(f, "phi^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

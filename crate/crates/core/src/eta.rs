//! Eta products and the level p Hauptmoduln.
//!
//! `eta(tau) = q^(1/24) prod (1 - q^n)`. Only quotients whose `q^(1/24)`
//! prefactors combine to an integral power of `q` are expanded, so the
//! fractional exponent never has to be represented as a ramified series.
//!
//! The floating-point evaluator here is the only inexact path in the crate;
//! it exists to check the transformation of `psi` between the two cusps.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::prime::PrimeContext;
use crate::series::QSeries;

/// Truncation threshold for the numeric product: stop once `|q|^n` drops below it.
pub const ETA_PRODUCT_CUTOFF: f64 = 1e-20;

/// `prod_t eta(t tau)^(r_t)` as a list of `(t, r_t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    pub factors: Vec<(u32, i64)>,
}

impl EtaQuotientSpec {
    /// `(eta(tau) / eta(p tau))^lambda`.
    pub fn psi(ctx: PrimeContext) -> Self {
        let l = ctx.lambda() as i64;
        EtaQuotientSpec {
            factors: vec![(1, l), (ctx.p(), -l)],
        }
    }

    /// Exponent of `q` contributed by the `q^(1/24)` prefactors: `sum t r / 24`.
    pub fn q_exponent(&self) -> BigRational {
        let total: i64 = self.factors.iter().map(|&(t, r)| t as i64 * r).sum();
        BigRational::new(total.into(), 24.into())
    }

    /// The q-expansion through exponent `prec`; the prefactor must be integral.
    pub fn expand(&self, prec: i64) -> Result<QSeries> {
        let shift = self.q_exponent();
        if !shift.is_integer() {
            return Err(Error::Precondition(format!(
                "eta quotient has fractional q-exponent {shift}"
            )));
        }
        let shift: i64 = shift.to_integer().try_into().expect("small exponent");
        let inner_prec = prec - shift;
        let mut acc = QSeries::one(inner_prec);
        // Multiply the factors in pairs of opposite sign first so the big
        // power is taken once, on the small-coefficient quotient.
        let mut remaining = self.factors.clone();
        if let [(t1, r1), (t2, r2)] = remaining[..] {
            if r1 == -r2 && r1 != 0 {
                let ratio =
                    &dilated_euler(t1, inner_prec) * &dilated_euler(t2, inner_prec).invert()?;
                acc = ratio.pow(r1)?;
                remaining.clear();
            }
        }
        for (t, r) in remaining {
            acc = &acc * &dilated_euler(t, inner_prec).pow(r)?;
        }
        Ok(acc.shift(shift))
    }
}

/// `prod_{n>=1} (1 - q^n)` through `q^prec`, via the pentagonal number theorem.
pub fn euler_product(prec: i64) -> QSeries {
    if prec < 0 {
        return QSeries::zero(prec);
    }
    let mut c = vec![0i64; prec as usize + 1];
    // sum_k (-1)^k q^{k(3k-1)/2}, k over all integers
    for k in 0i64.. {
        let e1 = k * (3 * k - 1) / 2;
        if e1 > prec {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        c[e1 as usize] += sign;
        if k > 0 {
            let e2 = k * (3 * k + 1) / 2;
            if e2 <= prec {
                c[e2 as usize] += sign;
            }
        }
    }
    QSeries::from_integers(0, c, prec)
}

fn dilated_euler(t: u32, prec: i64) -> QSeries {
    let base = prec.div_euclid(t as i64);
    euler_product(base).dilate(t).truncate(prec)
}

/// `psi^(p) = (eta(tau)/eta(p tau))^(24/(p-1)) = q^-1 + ...` through `q^prec`.
pub fn psi(ctx: PrimeContext, prec: i64) -> Result<QSeries> {
    if prec < -1 {
        return Err(Error::Precondition(format!("psi precision {prec} < -1")));
    }
    let s = EtaQuotientSpec::psi(ctx).expand(prec)?;
    if !s.is_integral() {
        return Err(Error::NonIntegral(format!(
            "psi^({}) has a non-integral coefficient",
            ctx.p()
        )));
    }
    Ok(s)
}

/// `phi^(p) = 1/psi^(p) = q + ...` through `q^prec`.
pub fn phi(ctx: PrimeContext, prec: i64) -> Result<QSeries> {
    if prec < 1 {
        return Err(Error::Precondition(format!("phi precision {prec} < 1")));
    }
    let s = psi(ctx, prec - 2)?.invert()?;
    debug_assert_eq!(s.prec(), prec);
    if !s.is_integral() {
        return Err(Error::NonIntegral(format!(
            "phi^({}) has a non-integral coefficient",
            ctx.p()
        )));
    }
    Ok(s)
}

fn check_upper_half_plane(tau: Complex64) -> Result<()> {
    if tau.im > 0.0 && tau.re.is_finite() && tau.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "tau = {tau} is not in the upper half-plane"
        )))
    }
}

/// Numeric `eta(tau)`; the product stops once `|q|^n < tol`.
pub fn eta_eval(tau: Complex64, tol: f64) -> Result<Complex64> {
    check_upper_half_plane(tau)?;
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let q = (i2pi * tau).exp();
    let mut qn = q;
    let mut prod = Complex64::new(1.0, 0.0);
    while qn.norm() >= tol {
        prod *= Complex64::new(1.0, 0.0) - qn;
        qn *= q;
    }
    Ok((i2pi * tau / 24.0).exp() * prod)
}

/// Numeric `psi^(p)(tau)` from eta values.
pub fn psi_eval(ctx: PrimeContext, tau: Complex64) -> Result<Complex64> {
    let a = eta_eval(tau, ETA_PRODUCT_CUTOFF)?;
    let b = eta_eval(tau * ctx.p() as f64, ETA_PRODUCT_CUTOFF)?;
    Ok((a / b).powi(ctx.lambda() as i32))
}

/// Numeric `phi^(p)(tau)`.
pub fn phi_eval(ctx: PrimeContext, tau: Complex64) -> Result<Complex64> {
    Ok(psi_eval(ctx, tau)?.inv())
}

fn fricke(ctx: PrimeContext, tau: Complex64) -> Complex64 {
    -(tau * ctx.p() as f64).inv()
}

/// `|psi(-1/(p tau)) - p^(lambda/2) phi(tau)|`.
pub fn check_cusp_relation(ctx: PrimeContext, tau: Complex64) -> Result<f64> {
    check_upper_half_plane(tau)?;
    let scale = (ctx.p() as f64).powi(ctx.lambda() as i32 / 2);
    let lhs = psi_eval(ctx, fricke(ctx, tau))?;
    let rhs = phi_eval(ctx, tau)? * scale;
    Ok((lhs - rhs).norm())
}

/// `|phi(-1/(p tau)) - p^(-lambda/2) psi(tau)|`.
pub fn check_phi_cusp_relation(ctx: PrimeContext, tau: Complex64) -> Result<f64> {
    check_upper_half_plane(tau)?;
    let scale = (ctx.p() as f64).powi(-(ctx.lambda() as i32) / 2);
    let lhs = phi_eval(ctx, fricke(ctx, tau))?;
    let rhs = psi_eval(ctx, tau)? * scale;
    Ok((lhs - rhs).norm())
}

/// Whether every coefficient of an integral series is in {-1, 0, 1}.
pub fn has_unit_coefficients(s: &QSeries) -> bool {
    s.is_integral()
        && s.numerators()
            .iter()
            .all(|c| c.is_zero() || *c == BigInt::from(1) || *c == BigInt::from(-1))
}

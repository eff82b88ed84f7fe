//! The canonical basis `f_{0,m} = q^-m + O(1)` of level p modular functions
//! holomorphic away from the cusp at infinity and vanishing at 0, and
//! extraction of polynomial representations in `psi` and `phi`.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::eta;
use crate::poly::PhiPolynomial;
use crate::prime::PrimeContext;
use crate::scalar::ExactScalar;
use crate::series::QSeries;

/// Extra coefficients beyond the polynomial degree that must vanish before an
/// extraction is accepted.
pub const EXTRACTION_GUARD: i64 = 8;

/// `f_{0,m}^(p)` with its representation `psi^m + e_{m-1} psi^{m-1} + ... + e_1 psi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub ctx: PrimeContext,
    pub m: usize,
    pub series: QSeries,
    /// Coefficients by degree; index 0 is the (always zero) constant slot.
    /// Empty for `m = 0`.
    pub psi_poly: Vec<BigInt>,
}

impl BasisElement {
    /// `a_0^(p)(m, n)`, the coefficient of `q^n`.
    pub fn a(&self, n: i64) -> BigInt {
        self.series.int_coeff(n).unwrap_or_else(|| {
            panic!(
                "a_0({}, {n}) is beyond precision {}",
                self.m,
                self.series.prec()
            )
        })
    }

    pub fn psi_coefficient(&self, k: usize) -> BigInt {
        self.psi_poly.get(k).cloned().unwrap_or_default()
    }
}

/// Builds basis elements for one level from a shared cache of `psi` powers.
///
/// The cache is append-only behind a lock, so one builder can serve
/// concurrent callers.
#[derive(Debug)]
pub struct BasisBuilder {
    ctx: PrimeContext,
    prec: i64,
    m_max: usize,
    psi_powers: RwLock<Vec<Arc<QSeries>>>,
}

impl BasisBuilder {
    /// Prepares elements `f_{0,m}` for `m <= m_max`, each known through `q^prec`.
    pub fn new(ctx: PrimeContext, prec: i64, m_max: usize) -> Result<Self> {
        let m_max = m_max.max(1);
        // psi^k loses one exponent of precision per extra factor.
        let psi = eta::psi(ctx, prec + m_max as i64 - 1)?;
        Ok(BasisBuilder {
            ctx,
            prec,
            m_max,
            psi_powers: RwLock::new(vec![Arc::new(psi)]),
        })
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn psi(&self) -> Arc<QSeries> {
        self.psi_power(1)
    }

    /// `psi^k` for `1 <= k <= m_max`.
    pub fn psi_power(&self, k: usize) -> Arc<QSeries> {
        assert!(
            (1..=self.m_max).contains(&k),
            "psi power {k} outside 1..={}",
            self.m_max
        );
        {
            let cache = self.psi_powers.read().expect("psi cache poisoned");
            if let Some(s) = cache.get(k - 1) {
                return Arc::clone(s);
            }
        }
        let mut cache = self.psi_powers.write().expect("psi cache poisoned");
        while cache.len() < k {
            let next = &**cache.last().expect("psi is cached") * &*cache[0];
            cache.push(Arc::new(next));
        }
        Arc::clone(&cache[k - 1])
    }

    /// `f_{0,m}` by eliminating the principal part of `psi^m` from the top down.
    pub fn element(&self, m: usize) -> Result<BasisElement> {
        if m == 0 {
            return Ok(BasisElement {
                ctx: self.ctx,
                m: 0,
                series: QSeries::one(self.prec),
                psi_poly: Vec::new(),
            });
        }
        if m > self.m_max {
            return Err(Error::Precondition(format!(
                "basis element {m} exceeds builder limit {}",
                self.m_max
            )));
        }
        let mut r = (*self.psi_power(m)).clone();
        let mut poly = vec![BigInt::zero(); m + 1];
        poly[m] = BigInt::one();
        for k in (1..m).rev() {
            let c = r
                .int_coeff(-(k as i64))
                .ok_or_else(|| Error::NonIntegral(format!("psi^{m} reduction at q^-{k}")))?;
            if c.is_zero() {
                continue;
            }
            r = &r - &self.psi_power(k).scale_int(&c);
            poly[k] = -c;
        }
        let series = r.truncate(self.prec);
        if !series.is_integral() {
            return Err(Error::NonIntegral(format!("f_(0,{m})^({})", self.ctx.p())));
        }
        Ok(BasisElement {
            ctx: self.ctx,
            m,
            series,
            psi_poly: poly,
        })
    }
}

/// `f_{0,m}^(p)` through `q^prec`.
pub fn basis_element(ctx: PrimeContext, m: usize, prec: i64) -> Result<BasisElement> {
    BasisBuilder::new(ctx, prec, m)?.element(m)
}

/// Writes `s` as `c_0 + c_1 phi + ... + c_d phi^d` with `d <= max_degree`.
///
/// Succeeds only if the residual vanishes through the precision of `s`, which
/// must exceed `max_degree` by at least [`EXTRACTION_GUARD`].
pub fn express_in_phi(ctx: PrimeContext, s: &QSeries, max_degree: usize) -> Result<PhiPolynomial> {
    if s.ram() != 1 {
        return Err(Error::Ramified(s.ram()));
    }
    if !s.is_zero() && s.val() < 0 {
        return Err(Error::Precondition(format!(
            "phi-polynomial extraction needs valuation >= 0, got {}",
            s.val()
        )));
    }
    let prec = s.prec();
    if prec < max_degree as i64 + EXTRACTION_GUARD {
        return Err(Error::Precondition(format!(
            "precision {prec} too low for degree {max_degree} (guard {EXTRACTION_GUARD})"
        )));
    }
    let constant = s.coeff(0);
    let mut residual = s - &QSeries::constant(constant.clone(), prec);
    let mut coeffs = vec![constant];
    let phi = eta::phi(ctx, prec)?;
    let mut phi_k = phi.clone();
    for k in 1..=max_degree {
        let c = residual.coeff(k as i64);
        if !c.is_zero() {
            residual = &residual - &phi_k.scale(&c);
        }
        coeffs.push(c);
        if k < max_degree {
            phi_k = &phi_k * &phi;
        }
    }
    if !residual.is_zero() {
        return Err(Error::NotPhiPolynomial {
            max_degree,
            exponent: residual.val(),
        });
    }
    Ok(PhiPolynomial::new(ctx, coeffs))
}

/// Writes `s` as `c_0 + c_1 psi + ... + c_d psi^d` with `d <= max_degree`;
/// returns the coefficients by degree, constant first.
pub fn express_in_psi(
    ctx: PrimeContext,
    s: &QSeries,
    max_degree: usize,
) -> Result<Vec<ExactScalar>> {
    if s.ram() != 1 {
        return Err(Error::Ramified(s.ram()));
    }
    if !s.is_zero() && s.val() < -(max_degree as i64) {
        return Err(Error::Precondition(format!(
            "pole of order {} exceeds psi degree {max_degree}",
            -s.val()
        )));
    }
    let prec = s.prec();
    if prec < 0 {
        return Err(Error::Precondition(format!(
            "precision {prec} hides the constant term"
        )));
    }
    let mut coeffs = vec![ExactScalar::zero(); max_degree + 1];
    let mut residual = s.clone();
    if max_degree > 0 {
        let builder = BasisBuilder::new(ctx, prec, max_degree)?;
        for k in (1..=max_degree).rev() {
            let c = residual.coeff(-(k as i64));
            if !c.is_zero() {
                residual = &residual - &builder.psi_power(k).scale(&c);
            }
            coeffs[k] = c;
        }
    }
    coeffs[0] = residual.coeff(0);
    let residual = &residual - &QSeries::constant(coeffs[0].clone(), prec);
    if !residual.is_zero() {
        return Err(Error::NotPsiPolynomial {
            max_degree,
            exponent: residual.val(),
        });
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn c2() -> PrimeContext {
        PrimeContext::new(2).unwrap()
    }

    #[test]
    fn known_p2_elements() {
        let b = BasisBuilder::new(c2(), 4, 3).unwrap();
        let f1 = b.element(1).unwrap();
        assert_eq!(
            f1.series,
            QSeries::from_integers(-1, [1, -24, 276, -2048, 11202, -49152], 4)
        );
        assert_eq!(f1.psi_poly, vec![BigInt::from(0), BigInt::from(1)]);

        let f2 = b.element(2).unwrap();
        assert_eq!(
            f2.series,
            QSeries::from_integers(-2, [1, 0, -24, -4096, 98580, -1228800, 10745856], 4)
        );
        assert_eq!(f2.psi_poly, [0, 48, 1].map(BigInt::from).to_vec());

        let f3 = b.element(3).unwrap();
        assert_eq!(
            f3.series,
            QSeries::from_integers(-3, [1, 0, 0, -96, 33606, -1843200, 43434816, -648216576], 4)
        );
        assert_eq!(f3.psi_poly, [0, 900, 72, 1].map(BigInt::from).to_vec());
    }

    #[test]
    fn m_zero_and_m_one() {
        for ctx in PrimeContext::all() {
            let f0 = basis_element(ctx, 0, 10).unwrap();
            assert_eq!(f0.series, QSeries::one(10));
            assert!(f0.psi_poly.is_empty());
            let f1 = basis_element(ctx, 1, 10).unwrap();
            assert_eq!(f1.series, eta::psi(ctx, 10).unwrap());
        }
    }

    #[test]
    fn principal_parts_and_integrality() {
        for ctx in PrimeContext::all() {
            let b = BasisBuilder::new(ctx, 24, 40).unwrap();
            for m in 1..=40usize {
                let f = b.element(m).unwrap();
                assert!(f.series.is_integral());
                assert_eq!(f.series.val(), -(m as i64));
                assert_eq!(f.series.coeff(-(m as i64)), int(1));
                for k in 1..m as i64 {
                    assert!(f.series.coeff(-k).is_zero(), "p={} m={m} k={k}", ctx.p());
                }
            }
        }
    }

    #[test]
    fn psi_representation_round_trips() {
        for ctx in PrimeContext::all() {
            let b = BasisBuilder::new(ctx, 30, 9).unwrap();
            for m in 1..=9 {
                let f = b.element(m).unwrap();
                let got = express_in_psi(ctx, &f.series, m).unwrap();
                let want: Vec<_> = f
                    .psi_poly
                    .iter()
                    .map(|c| ExactScalar::from_integer(c.clone()))
                    .collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn express_in_phi_examples() {
        let ctx = c2();
        let phi = eta::phi(ctx, 30).unwrap();
        let s = &QSeries::one(30) + &(&phi * &phi);
        let poly = express_in_phi(ctx, &s, 2).unwrap();
        assert_eq!(poly, PhiPolynomial::from_integers(ctx, [1, 0, 1]));

        let u = eta::psi(ctx, 40).unwrap().u_op(2).unwrap();
        let poly = express_in_phi(ctx, &u, 1).unwrap();
        assert_eq!(poly, PhiPolynomial::from_integers(ctx, [-24, -2048]));

        let bad = eta::psi(ctx, 40).unwrap();
        assert!(matches!(
            express_in_phi(ctx, &bad, 3),
            Err(Error::Precondition(_))
        ));
        // phi^3 is not of degree <= 2
        let cube = phi.pow(3).unwrap();
        assert!(matches!(
            express_in_phi(ctx, &cube, 2),
            Err(Error::NotPhiPolynomial { exponent: 3, .. })
        ));
        // too little precision for the guard
        assert!(express_in_phi(ctx, &phi.truncate(5), 1).is_err());
    }

    #[test]
    fn express_in_psi_examples() {
        let ctx = c2();
        let f2 = basis_element(ctx, 2, 20).unwrap();
        let got = express_in_psi(ctx, &f2.series, 2).unwrap();
        assert_eq!(got, vec![int(0), int(48), int(1)]);

        let seven = QSeries::constant(int(7), 12);
        assert_eq!(express_in_psi(ctx, &seven, 0).unwrap(), vec![int(7)]);

        let s = &eta::psi(ctx, 20).unwrap() + &eta::phi(ctx, 20).unwrap();
        assert!(matches!(
            express_in_psi(ctx, &s, 1),
            Err(Error::NotPsiPolynomial { exponent: 1, .. })
        ));
    }

    #[test]
    fn shared_builder_across_threads() {
        let b = BasisBuilder::new(PrimeContext::new(3).unwrap(), 60, 8).unwrap();
        let serial: Vec<_> = (1..=8)
            .map(|m| basis_element(b.ctx(), m, 60).unwrap())
            .collect();
        let parallel: Vec<_> = std::thread::scope(|sc| {
            let hs: Vec<_> = (1..=8)
                .rev()
                .map(|m| {
                    let b = &b;
                    sc.spawn(move || b.element(m).unwrap())
                })
                .collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for f in parallel {
            assert_eq!(f, serial[f.m - 1]);
        }
    }
}

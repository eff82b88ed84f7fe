//! Iterated `U_p`, the modular equation for `U_p phi`, the polynomials `g_j`,
//! Newton power sums, and membership in the ring `R^(p)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::{express_in_phi, EXTRACTION_GUARD};
use crate::error::{Error, Result};
use crate::eta;
use crate::poly::PhiPolynomial;
use crate::prime::PrimeContext;
use crate::scalar::{val_p, ExactScalar, Valuation};
use crate::series::QSeries;

/// `U_p` applied `beta` times; precision drops to `floor(prec / p^beta)`.
pub fn up_iterate(f: &QSeries, ctx: PrimeContext, beta: u32) -> Result<QSeries> {
    let mut s = f.clone();
    for _ in 0..beta {
        s = s.u_op(ctx.p())?;
    }
    Ok(s)
}

fn pow_p(ctx: PrimeContext, e: u32) -> BigInt {
    Pow::pow(BigInt::from(ctx.p()), e)
}

/// Smallest `q`-precision for `phi` whose `U_p` image still supports a
/// degree-`degree` extraction.
pub fn extraction_precision(ctx: PrimeContext, degree: usize) -> i64 {
    ctx.p() as i64 * (degree as i64 + EXTRACTION_GUARD)
}

/// The integers `b_1, ..., b_p` with `U_p phi = p * sum_j b_j phi^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularEquation {
    pub ctx: PrimeContext,
    /// `b[j - 1]` holds `b_j`.
    pub b: Vec<BigInt>,
}

impl ModularEquation {
    pub fn b(&self, j: usize) -> &BigInt {
        &self.b[j - 1]
    }

    /// `p * sum_j b_j phi^j`.
    pub fn up_phi(&self) -> PhiPolynomial {
        let p = BigInt::from(self.ctx.p());
        let mut coeffs = vec![BigInt::zero()];
        coeffs.extend(self.b.iter().map(|b| b * &p));
        PhiPolynomial::from_integers(self.ctx, coeffs)
    }
}

/// Reads off the modular equation from the `q`-expansion of `U_p phi`.
pub fn derive_bj(ctx: PrimeContext, prec: i64) -> Result<ModularEquation> {
    ctx.require_congruence_prime()?;
    let p = ctx.p() as usize;
    let need = extraction_precision(ctx, p);
    if prec < need {
        return Err(Error::Precondition(format!(
            "modular equation for p = {p} needs precision >= {need}, got {prec}"
        )));
    }
    let phi = eta::phi(ctx, prec)?;
    let image = express_in_phi(ctx, &phi.u_op(ctx.p())?, p)?;
    if image.has_constant_term() {
        return Err(Error::Precondition(format!(
            "U_{p} phi has constant term {}",
            image.constant()
        )));
    }
    let pq = ExactScalar::from_integer(BigInt::from(p));
    let mut b = Vec::with_capacity(p);
    for j in 1..=p {
        let c = image.coeff(j) / &pq;
        if !c.is_integer() {
            return Err(Error::NonIntegral(format!("b_{j} = {c}")));
        }
        b.push(c.to_integer());
    }
    Ok(ModularEquation { ctx, b })
}

/// `g_j = (-1)^(j+1) p^(lambda/2 + 2) sum_{l=j}^p b_l phi^(l-j+1)`.
pub fn g_poly(eq: &ModularEquation, j: usize) -> Result<PhiPolynomial> {
    let p = eq.ctx.p() as usize;
    if j == 0 || j > p {
        return Err(Error::Precondition(format!(
            "g_j needs 1 <= j <= {p}, got {j}"
        )));
    }
    let mut scale = pow_p(eq.ctx, eq.ctx.lambda() / 2 + 2);
    if j.is_multiple_of(2) {
        scale = -scale;
    }
    let mut coeffs = vec![BigInt::zero(); p - j + 2];
    for l in j..=p {
        coeffs[l - j + 1] = eq.b(l) * &scale;
    }
    Ok(PhiPolynomial::from_integers(eq.ctx, coeffs))
}

/// `S_1, ..., S_{n_max}`, the power sums of the roots of
/// `x^p - g_1 x^(p-1) + ... + (-1)^p g_p`.
pub fn power_sums(eq: &ModularEquation, n_max: usize) -> Vec<PhiPolynomial> {
    let p = eq.ctx.p() as usize;
    let g: Vec<PhiPolynomial> = (1..=p)
        .map(|j| g_poly(eq, j).expect("j in range"))
        .collect();
    let mut s: Vec<PhiPolynomial> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = PhiPolynomial::zero(eq.ctx);
        for j in 1..=(n - 1).min(p) {
            let term = &g[j - 1] * &s[n - j - 1];
            acc = if j % 2 == 1 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        if n <= p {
            let mut k = ExactScalar::from_integer(BigInt::from(n));
            if n % 2 == 0 {
                k = -k;
            }
            acc = &acc + &g[n - 1].scale(&k);
        }
        s.push(acc);
    }
    s
}

pub fn power_sum(eq: &ModularEquation, n: usize) -> PhiPolynomial {
    assert!(n >= 1, "power sums start at n = 1");
    power_sums(eq, n).pop().expect("n >= 1")
}

/// How far a polynomial without constant term sits inside `R^(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RpReport {
    pub poly: PhiPolynomial,
    pub member: bool,
    /// Largest `t` with `poly` in `p^t R^(p)`; infinite for zero.
    pub extra_power: Valuation,
    /// `(k, v_p(coefficient of phi^k))` for `k = 1..=degree`.
    pub per_degree: Vec<(usize, Valuation)>,
}

pub fn rp_report(poly: &PhiPolynomial) -> Result<RpReport> {
    let ctx = poly.ctx();
    ctx.require_congruence_prime()?;
    if poly.has_constant_term() {
        return Err(Error::Precondition(format!(
            "R^({}) has no constant terms, found {}",
            ctx.p(),
            poly.constant()
        )));
    }
    let mut extra = Valuation::Infinite;
    let mut per_degree = Vec::new();
    for k in 1..=poly.degree().unwrap_or(0) {
        let v = val_p(&poly.coeff(k), ctx.p());
        let gamma = ctx.gamma(k).expect("congruence prime");
        extra = extra.min(v.offset(-gamma));
        per_degree.push((k, v));
    }
    Ok(RpReport {
        poly: poly.clone(),
        member: extra.at_least(0),
        extra_power: extra,
        per_degree,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumCheck {
    pub n: usize,
    pub observed: Valuation,
    pub required: i64,
    pub pass: bool,
}

/// Checks `S_n in p^e(n) R^(p)` for `n = 1..=n_max`.
pub fn verify_power_sum_divisibility(
    eq: &ModularEquation,
    n_max: usize,
) -> Result<Vec<PowerSumCheck>> {
    let ctx = eq.ctx;
    power_sums(eq, n_max)
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let n = i + 1;
            let report = rp_report(s)?;
            let required = ctx.power_sum_target(n).expect("congruence prime");
            Ok(PowerSumCheck {
                n,
                observed: report.extra_power,
                required,
                pass: report.extra_power.at_least(required),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRelationReport {
    /// `h^p + sum_j (-1)^j g_j h^(p-j)` in `w = q^(1/p)`.
    pub residual: QSeries,
    /// `w`-valuation of `h^p`, then of each `g_j h^(p-j)`.
    pub summand_valuations: Vec<i64>,
}

impl HRelationReport {
    pub fn holds(&self, p: u32) -> bool {
        self.residual.is_zero() && self.summand_valuations.iter().all(|&v| v >= p as i64)
    }
}

/// Evaluates the degree-`p` relation satisfied by `h = p^(lambda/2) phi(tau/p)`.
pub fn verify_hpoly_relation(ctx: PrimeContext, prec: i64) -> Result<HRelationReport> {
    let eq = derive_bj(ctx, prec)?;
    let p = ctx.p();
    let phi = eta::phi(ctx, prec)?;
    let h = phi
        .substitute_tau_over(p)
        .scale_int(&pow_p(ctx, ctx.lambda() / 2));
    let mut h_pow = vec![QSeries::one(h.prec())];
    for k in 1..=p as usize {
        let next = &h_pow[k - 1] * &h;
        h_pow.push(next);
    }
    let lead = h_pow[p as usize].clone();
    let mut summand_valuations = vec![lead.val()];
    let mut residual = lead;
    for j in 1..=p as usize {
        let g = g_poly(&eq, j)?.evaluate(&phi).ramify(p);
        let term = if j == p as usize {
            g
        } else {
            &g * &h_pow[p as usize - j]
        };
        summand_valuations.push(term.val());
        residual = if j % 2 == 0 {
            &residual + &term
        } else {
            &residual - &term
        };
    }
    Ok(HRelationReport {
        residual,
        summand_valuations,
    })
}

/// `U_p r` for a polynomial `r` in `phi`, read back as a polynomial.
pub fn up_image(r: &PhiPolynomial, prec: i64) -> Result<PhiPolynomial> {
    let ctx = r.ctx();
    let degree = r.degree().unwrap_or(0);
    let max_degree = (ctx.p() as usize * degree).max(1);
    let prec = prec.max(extraction_precision(ctx, max_degree));
    let phi = eta::phi(ctx, prec)?;
    express_in_phi(ctx, &r.evaluate(&phi).u_op(ctx.p())?, max_degree)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureTrial {
    pub index: u64,
    /// Sampled `d_1, ..., d_degMax`.
    pub digits: Vec<i64>,
    pub extra_power: Option<Valuation>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub ctx: PrimeContext,
    pub precision: i64,
    pub required: i64,
    pub trials: Vec<ClosureTrial>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.trials.iter().all(|t| t.pass)
    }
}

/// `d_1 phi + sum_{k >= 2} d_k p^gamma(k) phi^k`.
pub fn rp_element(ctx: PrimeContext, digits: &[i64]) -> PhiPolynomial {
    let mut coeffs = vec![BigInt::zero()];
    for (i, &d) in digits.iter().enumerate() {
        let k = i + 1;
        let gamma = ctx.gamma(k).expect("congruence prime") as u32;
        coeffs.push(BigInt::from(d) * pow_p(ctx, gamma));
    }
    PhiPolynomial::from_integers(ctx, coeffs)
}

/// Random elements of `R^(p)` must land in `p^delta R^(p)` under `U_p`.
///
/// Trial `i` draws from a generator seeded with `seed` on stream `i`, so the
/// outcome does not depend on scheduling.
pub fn verify_up_closure(
    ctx: PrimeContext,
    trials: u64,
    deg_max: usize,
    prec: i64,
    seed: u64,
) -> Result<ClosureReport> {
    ctx.require_congruence_prime()?;
    if trials == 0 || deg_max == 0 {
        return Err(Error::Precondition(
            "closure check needs trials >= 1 and degree >= 1".into(),
        ));
    }
    let p = ctx.p() as usize;
    let precision = prec.max(extraction_precision(ctx, p * deg_max));
    let required = ctx.delta().expect("congruence prime") as i64;
    let phi = eta::phi(ctx, precision)?;
    let trials = (0..trials)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index);
            let digits = loop {
                let d: Vec<i64> = (0..deg_max).map(|_| rng.random_range(-9..=9)).collect();
                if d.iter().any(|&x| x != 0) {
                    break d;
                }
            };
            let r = rp_element(ctx, &digits);
            let outcome = r
                .evaluate(&phi)
                .u_op(ctx.p())
                .and_then(|s| express_in_phi(ctx, &s, p * deg_max))
                .and_then(|img| rp_report(&img));
            match outcome {
                Ok(report) => ClosureTrial {
                    index,
                    digits,
                    extra_power: Some(report.extra_power),
                    pass: report.extra_power.at_least(required),
                    error: None,
                },
                Err(e) => ClosureTrial {
                    index,
                    digits,
                    extra_power: None,
                    pass: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(ClosureReport {
        ctx,
        precision,
        required,
        trials,
    })
}

/// Exponent of `p` dividing every integer coefficient of `poly`; `None` if
/// some coefficient is not an integer.
pub fn content_valuation(poly: &PhiPolynomial) -> Option<Valuation> {
    let p = poly.ctx().p();
    let mut g = BigInt::zero();
    for c in poly.coefficients() {
        if !c.is_integer() {
            return None;
        }
        g = g.gcd(&c.to_integer());
    }
    if g.is_one() {
        return Some(Valuation::Finite(0));
    }
    Some(crate::scalar::val_p_int(&g, p))
}

//! Finite verification of the congruences for `a_0^(p)(m, n)`, the valuation
//! table against `j`, and the exploratory scans.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use rayon::prelude::*;

use crate::basis::{express_in_phi, BasisBuilder, BasisElement, EXTRACTION_GUARD};
use crate::error::{Error, Result};
use crate::eta;
use crate::hecke::up_iterate;
use crate::poly::PhiPolynomial;
use crate::prime::PrimeContext;
use crate::scalar::{val_p, val_p_int, ExactScalar, Valuation};
use crate::series::QSeries;

/// Slack added by automatic precision sizing.
pub const SIZING_GUARD: i64 = 16;

/// Exponent of `p` in the modulus for `d = beta - alpha`.
pub fn bound(ctx: PrimeContext, d: i64) -> Result<i64> {
    ctx.congruence_bound(d)
}

fn p_pow(p: u32, e: u32) -> i64 {
    (p as i64).pow(e)
}

/// `(alpha, m')` with `m = p^alpha m'` and `p` not dividing `m'`.
pub fn split_m(p: u32, m: usize) -> (u32, usize) {
    assert!(m >= 1);
    let (mut alpha, mut rest) = (0, m);
    while rest % p as usize == 0 {
        rest /= p as usize;
        alpha += 1;
    }
    (alpha, rest)
}

/// One checked coefficient `a_0(m, p^beta n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceCase {
    pub p: u32,
    pub m: usize,
    pub m_prime: usize,
    pub alpha: u32,
    pub beta: u32,
    pub n: i64,
    pub coefficient: BigInt,
    pub observed: Valuation,
    pub required: i64,
    pub pass: bool,
}

impl CongruenceCase {
    /// Exponent of the coefficient in `f_{0,m}`.
    pub fn index(&self) -> i64 {
        p_pow(self.p, self.beta) * self.n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub ctx: PrimeContext,
    /// Precision of every basis element used.
    pub precision: i64,
    pub cases: Vec<CongruenceCase>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CongruenceCase> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn first_failure(&self) -> Option<&CongruenceCase> {
        self.failures().next()
    }
}

/// Bounds for a main-congruence sweep. `n_max = None` checks every `n >= 1`
/// the precision determines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theorem2Request {
    pub m_max: usize,
    pub d_max: u32,
    pub n_max: Option<i64>,
    pub precision: Option<i64>,
}

/// `n_max p^(alpha_max + d_max) + m_max + guard`.
pub fn required_precision(ctx: PrimeContext, m_max: usize, d_max: u32, n_max: i64) -> i64 {
    let alpha_max = (1..=m_max)
        .map(|m| split_m(ctx.p(), m).0)
        .max()
        .unwrap_or(0);
    n_max * p_pow(ctx.p(), alpha_max + d_max) + m_max as i64 + SIZING_GUARD
}

fn effective_precision(ctx: PrimeContext, req: &Theorem2Request) -> Result<i64> {
    match (req.n_max, req.precision) {
        (None, None) => Err(Error::Precondition("give n_max or a precision".into())),
        (None, Some(n)) => Ok(n),
        (Some(n_max), explicit) => {
            Ok(required_precision(ctx, req.m_max, req.d_max, n_max).max(explicit.unwrap_or(0)))
        }
    }
}

fn build_elements(ctx: PrimeContext, prec: i64, ms: &[usize]) -> Result<Vec<Arc<BasisElement>>> {
    let m_max = ms.iter().copied().max().unwrap_or(1);
    let builder = BasisBuilder::new(ctx, prec, m_max)?;
    builder.psi_power(m_max);
    ms.par_iter()
        .map(|&m| builder.element(m).map(Arc::new))
        .collect()
}

/// For `beta > alpha = v_p(m)`, checks
/// `a_0(m, p^beta n) = 0 mod p^bound(beta - alpha)` for `n >= 1`.
pub fn verify_theorem2(ctx: PrimeContext, req: &Theorem2Request) -> Result<CongruenceReport> {
    ctx.require_congruence_prime()?;
    let precision = effective_precision(ctx, req)?;
    let ms: Vec<usize> = (1..=req.m_max).collect();
    let elements = build_elements(ctx, precision, &ms)?;
    let p = ctx.p();
    let jobs: Vec<(Arc<BasisElement>, u32)> = elements
        .iter()
        .flat_map(|el| {
            let (alpha, _) = split_m(p, el.m);
            (alpha + 1..=alpha + req.d_max).map(move |beta| (Arc::clone(el), beta))
        })
        .collect();
    let chunks: Vec<Vec<CongruenceCase>> = jobs
        .par_iter()
        .map(|(el, beta)| {
            let (alpha, m_prime) = split_m(p, el.m);
            let required = ctx.congruence_bound((beta - alpha) as i64)?;
            let s = up_iterate(&el.series, ctx, *beta)?;
            let last = req.n_max.map_or(s.prec(), |n| n.min(s.prec()));
            Ok((1..=last)
                .map(|n| {
                    let coefficient = s.int_coeff(n).expect("basis coefficients are integers");
                    let observed = val_p_int(&coefficient, p);
                    CongruenceCase {
                        p,
                        m: el.m,
                        m_prime,
                        alpha,
                        beta: *beta,
                        n,
                        coefficient,
                        observed,
                        required,
                        pass: observed.at_least(required),
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(CongruenceReport {
        ctx,
        precision,
        cases: chunks.into_iter().flatten().collect(),
    })
}

/// `sum_k e_k p^(lambda k / 2) phi^k`, the expansion of `f_{0,m}(-1/(p tau))`.
pub fn expansion_at_zero(el: &BasisElement) -> PhiPolynomial {
    let half = el.ctx.lambda() / 2;
    let coeffs = el
        .psi_poly
        .iter()
        .enumerate()
        .map(|(k, e)| e * Pow::pow(BigInt::from(el.ctx.p()), half * k as u32))
        .collect::<Vec<_>>();
    PhiPolynomial::from_integers(el.ctx, coeffs)
}

/// Checks `a_0(m, p^a n) = 0 mod p^bound(a)` for a pole order `m < p` by
/// reading the coefficients directly.
pub fn verify_lehner_direct(
    ctx: PrimeContext,
    m: usize,
    d_max: u32,
    n_max: i64,
) -> Result<CongruenceReport> {
    ctx.require_congruence_prime()?;
    let p = ctx.p();
    if m == 0 || m >= p as usize {
        return Err(Error::Precondition(format!(
            "pole order must satisfy 1 <= m < {p}, got {m}"
        )));
    }
    let precision = n_max.max(0) * p_pow(p, d_max);
    let el = BasisBuilder::new(ctx, precision, m)?.element(m)?;
    if !el.series.is_integral() || !expansion_at_zero(&el).is_integral() {
        return Err(Error::NonIntegral(format!(
            "f_(0,{m}) is not integral at both cusps"
        )));
    }
    let mut cases = Vec::new();
    for a in 1..=d_max {
        let required = ctx.congruence_bound(a as i64)?;
        for n in 1..=n_max {
            let coefficient = el.a(p_pow(p, a) * n);
            let observed = val_p_int(&coefficient, p);
            cases.push(CongruenceCase {
                p,
                m,
                m_prime: m,
                alpha: 0,
                beta: a,
                n,
                coefficient,
                observed,
                required,
                pass: observed.at_least(required),
            });
        }
    }
    Ok(CongruenceReport {
        ctx,
        precision,
        cases,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationTable {
    pub p: u32,
    /// `m` values, then `"min"`, then optionally `"j"`.
    pub row_labels: Vec<String>,
    pub columns: Vec<i64>,
    pub rows: Vec<Vec<Valuation>>,
}

impl ValuationTable {
    pub fn row(&self, label: &str) -> Option<&[Valuation]> {
        let i = self.row_labels.iter().position(|l| l == label)?;
        Some(&self.rows[i])
    }
}

/// `v_p(a_0(m, n))` for each `m` in `ms` and `n` in `ns`, a columnwise minimum
/// row, and optionally `v_p` of the coefficients of `j`.
pub fn valuation_table(
    ctx: PrimeContext,
    ms: &[usize],
    ns: &[i64],
    include_j: bool,
) -> Result<ValuationTable> {
    let p = ctx.p();
    let prec = ns.iter().copied().max().unwrap_or(0).max(0);
    let elements = build_elements(ctx, prec, ms)?;
    let mut rows: Vec<Vec<Valuation>> = elements
        .iter()
        .map(|el| ns.iter().map(|&n| val_p_int(&el.a(n), p)).collect())
        .collect();
    let min_row = (0..ns.len())
        .map(|i| {
            rows.iter()
                .map(|r| r[i])
                .min()
                .unwrap_or(Valuation::Infinite)
        })
        .collect();
    rows.push(min_row);
    let mut row_labels: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
    row_labels.push("min".into());
    if include_j {
        let j = j_series(prec)?;
        rows.push(ns.iter().map(|&n| val_p(&j.coeff(n), p)).collect());
        row_labels.push("j".into());
    }
    Ok(ValuationTable {
        p,
        row_labels,
        columns: ns.to_vec(),
        rows,
    })
}

/// `sigma_3(n)` for `n = 0..=limit` (entry 0 unused).
fn sigma3_table(limit: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); limit + 1];
    for d in 1..=limit {
        let cube = BigInt::from(d as u64).pow(3u32);
        for k in (d..=limit).step_by(d) {
            s[k] += &cube;
        }
    }
    s
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n` through `q^prec`.
pub fn eisenstein_e4(prec: i64) -> QSeries {
    if prec < 0 {
        return QSeries::zero(prec);
    }
    let sigma = sigma3_table(prec as usize);
    let coeffs = sigma
        .into_iter()
        .enumerate()
        .map(|(n, s)| if n == 0 { BigInt::from(1) } else { s * 240 });
    QSeries::from_integers(0, coeffs, prec)
}

/// `j = E_4^3 / Delta = q^-1 + 744 + 196884 q + ...` through `q^prec`.
pub fn j_series(prec: i64) -> Result<QSeries> {
    if prec < -1 {
        return Err(Error::Precondition(format!("j precision {prec} < -1")));
    }
    let e4 = eisenstein_e4(prec + 1);
    let e4_cubed = &(&e4 * &e4) * &e4;
    // Delta / q = prod (1 - q^n)^24
    let delta_over_q = eta::euler_product(prec + 1).pow(24)?;
    Ok((&e4_cubed * &delta_over_q.invert()?).shift(-1))
}

/// `j = (psi + 256)^3 phi^2` at level 2, an independent route to `j`.
pub fn j_series_level_two(prec: i64) -> Result<QSeries> {
    let ctx = PrimeContext::new(2)?;
    let psi = eta::psi(ctx, prec)?;
    let shifted = &psi + &QSeries::constant(ExactScalar::from_integer(256.into()), prec);
    let phi = eta::phi(ctx, prec + 2)?;
    Ok(&shifted.pow(3)? * &phi.pow(2)?)
}

/// One datum of the `beta <= alpha` scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaScanRow {
    pub m: usize,
    pub alpha: u32,
    pub beta: u32,
    pub n: i64,
    pub valuation: Valuation,
}

/// `v_p(a_0(m, p^beta n))` for `m <= m_max` with `alpha = v_p(m) >= 1`,
/// `0 <= beta <= alpha`, `1 <= n <= n_max`.
pub fn scan_alpha_gt_beta(
    ctx: PrimeContext,
    m_max: usize,
    n_max: i64,
) -> Result<Vec<AlphaScanRow>> {
    let p = ctx.p();
    let ms: Vec<usize> = (1..=m_max).filter(|&m| split_m(p, m).0 >= 1).collect();
    if ms.is_empty() || n_max < 1 {
        return Ok(Vec::new());
    }
    let alpha_max = ms.iter().map(|&m| split_m(p, m).0).max().unwrap_or(0);
    let prec = n_max * p_pow(p, alpha_max);
    let elements = build_elements(ctx, prec, &ms)?;
    let mut rows = Vec::new();
    for el in &elements {
        let (alpha, _) = split_m(p, el.m);
        for beta in 0..=alpha {
            for n in 1..=n_max {
                rows.push(AlphaScanRow {
                    m: el.m,
                    alpha,
                    beta,
                    n,
                    valuation: val_p_int(&el.a(p_pow(p, beta) * n), p),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiScanRow {
    pub k: usize,
    pub beta: u32,
    pub n: i64,
    pub valuation: Valuation,
}

/// `v_p` of the `q^n` coefficient of `U_p^beta phi^k` for `k <= pow_max`,
/// `beta <= d_max`, `1 <= n <= n_max`.
pub fn scan_phi_powers(
    ctx: PrimeContext,
    pow_max: usize,
    d_max: u32,
    n_max: i64,
) -> Result<Vec<PhiScanRow>> {
    if n_max < 1 {
        return Ok(Vec::new());
    }
    let p = ctx.p();
    let prec = n_max * p_pow(p, d_max);
    let phi = eta::phi(ctx, prec.max(1))?;
    let mut rows = Vec::new();
    let mut power = QSeries::one(prec);
    for k in 0..=pow_max {
        if k > 0 {
            power = (&power * &phi).truncate(prec);
        }
        for beta in 0..=d_max {
            let s = up_iterate(&power, ctx, beta)?;
            for n in 1..=n_max {
                rows.push(PhiScanRow {
                    k,
                    beta,
                    n,
                    valuation: val_p(&s.coeff(n), p),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeFloor {
    pub degree: usize,
    pub valuation: Valuation,
    /// `lambda i / 2 - 1`.
    pub floor: i64,
    pub holds: bool,
}

/// `U_p f_{0,m} - f_{0,m/p}` (the subtraction only when `p | m`) as a
/// constant plus a polynomial in `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub ctx: PrimeContext,
    pub m: usize,
    pub subtracted: Option<usize>,
    pub constant: ExactScalar,
    pub poly: PhiPolynomial,
    pub per_degree: Vec<DegreeFloor>,
}

impl Decomposition {
    pub fn floors_hold(&self) -> bool {
        self.per_degree.iter().all(|d| d.holds)
    }
}

/// Default `q`-precision for [`decompose_up_step`].
pub fn decomposition_precision(ctx: PrimeContext, m: usize) -> i64 {
    ctx.p() as i64 * (m as i64 + EXTRACTION_GUARD)
}

pub fn decompose_up_step(ctx: PrimeContext, m: usize, prec: Option<i64>) -> Result<Decomposition> {
    if m == 0 {
        return Err(Error::Precondition("decomposition needs m >= 1".into()));
    }
    let p = ctx.p();
    let prec = prec.unwrap_or(0).max(decomposition_precision(ctx, m));
    let builder = BasisBuilder::new(ctx, prec, m)?;
    let mut s = builder.element(m)?.series.u_op(p)?;
    let subtracted = m.is_multiple_of(p as usize).then_some(m / p as usize);
    if let Some(lower) = subtracted {
        s = &s - &builder.element(lower)?.series;
    }
    let full = express_in_phi(ctx, &s, m)?;
    let half = (ctx.lambda() / 2) as i64;
    let per_degree = (1..=full.degree().unwrap_or(0))
        .map(|i| {
            let valuation = val_p(&full.coeff(i), p);
            let floor = half * i as i64 - 1;
            DegreeFloor {
                degree: i,
                valuation,
                floor,
                holds: valuation.at_least(floor),
            }
        })
        .collect();
    Ok(Decomposition {
        ctx,
        m,
        subtracted,
        constant: full.constant(),
        poly: full.without_constant(),
        per_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn fin(xs: &[i64]) -> Vec<Valuation> {
        xs.iter().map(|&x| Valuation::Finite(x)).collect()
    }

    #[test]
    fn bounds() {
        assert_eq!(bound(ctx(2), 1).unwrap(), 11);
        assert_eq!(bound(ctx(7), 2).unwrap(), 2);
        assert_eq!(bound(ctx(3), 3).unwrap(), 9);
        assert!(bound(ctx(5), 0).is_err());
        assert_eq!(split_m(2, 12), (2, 3));
        assert_eq!(split_m(3, 7), (0, 7));
    }

    #[test]
    fn main_congruence_small_cases() {
        let req = Theorem2Request {
            m_max: 2,
            d_max: 1,
            n_max: Some(1),
            precision: None,
        };
        let r = verify_theorem2(ctx(2), &req).unwrap();
        assert!(r.passed());
        let c = &r.cases[0];
        assert_eq!((c.m, c.beta, c.n), (1, 1, 1));
        assert_eq!(c.coefficient, BigInt::from(-2048));
        assert_eq!(c.observed, Valuation::Finite(11));
        let c = r.cases.iter().find(|c| c.m == 2).unwrap();
        assert_eq!((c.alpha, c.beta, c.index()), (1, 2, 4));
        assert_eq!(c.coefficient, BigInt::from(10745856));
        assert_eq!(c.observed, Valuation::Finite(11));
        assert!(r.precision >= required_precision(ctx(2), 2, 1, 1));
    }

    #[test]
    fn main_congruence_sweep_passes() {
        for p in [2u32, 3, 5, 7] {
            let req = Theorem2Request {
                m_max: 9,
                d_max: 2,
                n_max: Some(20),
                precision: None,
            };
            let r = verify_theorem2(ctx(p), &req).unwrap();
            assert!(r.passed(), "p = {p}: {:?}", r.first_failure());
            assert!(!r.cases.is_empty());
        }
        let none = Theorem2Request {
            m_max: 2,
            d_max: 1,
            n_max: None,
            precision: None,
        };
        assert!(verify_theorem2(ctx(2), &none).is_err());
    }

    #[test]
    fn constant_term_is_not_covered() {
        let el = crate::basis::basis_element(ctx(2), 1, 4).unwrap();
        assert_eq!(val_p_int(&el.a(0), 2), Valuation::Finite(3));
    }

    #[test]
    fn lehner() {
        let r = verify_lehner_direct(ctx(5), 2, 1, 30).unwrap();
        assert!(r.passed());
        assert!(r.cases.iter().all(|c| c.required == 2));
        let r = verify_lehner_direct(ctx(7), 3, 1, 30).unwrap();
        assert!(r.passed());
        assert!(verify_lehner_direct(ctx(3), 3, 1, 5).is_err());
        // m = 1 at p = 2 agrees with the alpha = 0 column of the main sweep.
        let direct = verify_lehner_direct(ctx(2), 1, 2, 10).unwrap();
        let req = Theorem2Request {
            m_max: 1,
            d_max: 2,
            n_max: Some(10),
            precision: None,
        };
        let swept = verify_theorem2(ctx(2), &req).unwrap();
        assert_eq!(direct.cases, swept.cases);
    }

    #[test]
    fn valuation_table_for_two() {
        let t = valuation_table(ctx(2), &[1, 3, 5, 7], &[2, 4, 6, 8, 10, 12], true).unwrap();
        assert_eq!(t.row("1").unwrap(), fin(&[11, 14, 13, 17, 12, 16]));
        assert_eq!(t.row("3").unwrap(), fin(&[13, 16, 15, 19, 14, 18]));
        assert_eq!(t.row("5").unwrap(), fin(&[12, 15, 14, 18, 13, 17]));
        assert_eq!(t.row("7").unwrap(), fin(&[14, 17, 16, 20, 15, 19]));
        assert_eq!(t.row("min").unwrap(), fin(&[11, 14, 13, 17, 12, 16]));
        assert_eq!(t.row("j").unwrap(), t.row("min").unwrap());
    }

    #[test]
    fn j_routes_agree() {
        let j = j_series(200).unwrap();
        assert_eq!(j.val(), -1);
        assert_eq!(j.prec(), 200);
        assert_eq!(j.int_coeff(0), Some(744.into()));
        assert_eq!(j.int_coeff(1), Some(196884.into()));
        assert_eq!(j.int_coeff(2), Some(21493760.into()));
        let other = j_series_level_two(200).unwrap();
        assert_eq!(other.prec(), 200);
        assert_eq!(j, other);
        for (a, n) in [(1, 1), (1, 3), (2, 5), (3, 1), (4, 3)] {
            let idx = (1i64 << a) * n;
            assert!(val_p(&j.coeff(idx), 2).at_least(3 * a + 8), "c({idx})");
        }
    }

    #[test]
    fn scans() {
        assert!(scan_alpha_gt_beta(ctx(5), 4, 10).unwrap().is_empty());
        let rows = scan_alpha_gt_beta(ctx(2), 4, 5).unwrap();
        // m = 2 (alpha 1) gives beta 0, 1; m = 4 (alpha 2) gives beta 0, 1, 2.
        assert_eq!(rows.len(), 5 * 5);
        let r = rows
            .iter()
            .find(|r| r.m == 2 && r.beta == 1 && r.n == 2)
            .unwrap();
        let el = crate::basis::basis_element(ctx(2), 2, 8).unwrap();
        assert_eq!(r.valuation, val_p_int(&el.a(4), 2));

        let rows = scan_phi_powers(ctx(2), 2, 1, 6).unwrap();
        assert_eq!(rows.len(), 3 * 2 * 6);
        assert!(rows
            .iter()
            .filter(|r| r.k == 0)
            .all(|r| r.valuation.is_infinite()));
        // U_2 phi = 2^3 (...) has coefficients divisible by 8.
        assert!(rows
            .iter()
            .filter(|r| r.k == 1 && r.beta == 1)
            .all(|r| r.valuation.at_least(3)));
        assert_eq!(rows, scan_phi_powers(ctx(2), 2, 1, 6).unwrap());
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose_up_step(ctx(2), 1, None).unwrap();
        assert_eq!(d.constant, ExactScalar::from_integer((-24).into()));
        assert_eq!(d.poly, PhiPolynomial::from_integers(ctx(2), [0, -2048]));
        assert_eq!(d.per_degree[0].valuation, Valuation::Finite(11));
        assert_eq!(d.per_degree[0].floor, 11);
        assert_eq!(d.subtracted, None);

        let d = decompose_up_step(ctx(2), 2, None).unwrap();
        assert_eq!(d.subtracted, Some(1));
        assert!(d.floors_hold());
        let d = decompose_up_step(ctx(7), 7, None).unwrap();
        assert!(d.floors_hold());
        assert!(d
            .per_degree
            .iter()
            .all(|f| f.floor == 2 * f.degree as i64 - 1));
    }
}

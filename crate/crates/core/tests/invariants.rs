use num_bigint::BigInt;
use num_traits::Pow;

use qcong_core::basis::{express_in_phi, express_in_psi, BasisBuilder};
use qcong_core::congruence::{
    decompose_up_step, j_series, j_series_level_two, verify_lehner_direct, verify_theorem2,
    Theorem2Request,
};
use qcong_core::eta;
use qcong_core::hecke::{derive_bj, extraction_precision, rp_element, rp_report, up_image};
use qcong_core::{ExactScalar, PrimeContext, Valuation};

fn ctx(p: u32) -> PrimeContext {
    PrimeContext::new(p).unwrap()
}

#[test]
fn modular_equation_is_stable_under_refinement() {
    for p in [2u32, 3, 5, 7] {
        let need = extraction_precision(ctx(p), p as usize);
        let mut seen = None;
        for n in [64, 128, 256] {
            if n < need {
                assert!(derive_bj(ctx(p), n).is_err());
                continue;
            }
            let eq = derive_bj(ctx(p), n).unwrap();
            let phi = eta::phi(ctx(p), n).unwrap();
            let image = express_in_phi(ctx(p), &phi.u_op(p).unwrap(), p as usize).unwrap();
            assert_eq!(image, eq.up_phi());
            if let Some(prev) = &seen {
                assert_eq!(prev, &eq.b, "p = {p}, N = {n}");
            }
            seen = Some(eq.b);
        }
    }
}

#[test]
fn basis_round_trips_through_psi() {
    for p in [2u32, 3, 5, 7] {
        let builder = BasisBuilder::new(ctx(p), 40, 10).unwrap();
        for m in 1..=10 {
            let el = builder.element(m).unwrap();
            let coeffs = express_in_psi(ctx(p), &el.series, m).unwrap();
            let want: Vec<ExactScalar> = el
                .psi_poly
                .iter()
                .cloned()
                .map(ExactScalar::from_integer)
                .collect();
            assert_eq!(coeffs, want, "p = {p}, m = {m}");
        }
    }
}

#[test]
fn lehner_for_every_small_pole_order() {
    for p in [2u32, 3, 5, 7] {
        for m in 1..p as usize {
            let r = verify_lehner_direct(ctx(p), m, 2, 12).unwrap();
            assert!(r.passed(), "p = {p}, m = {m}: {:?}", r.first_failure());
        }
    }
}

#[test]
fn j_coefficients_satisfy_single_prime_congruences() {
    let j = j_series(800).unwrap();
    type Bound = fn(i64) -> i64;
    let cases: [(u32, Bound); 4] = [
        (2, |a| 3 * a + 8),
        (3, |a| 2 * a + 3),
        (5, |a| a + 1),
        (7, |a| a),
    ];
    for (p, bound) in cases {
        for a in 1..=3u32 {
            let step = (p as i64).pow(a);
            for n in 1..=(800 / step).min(20) {
                let v = qcong_core::val_p(&j.coeff(step * n), p);
                assert!(v.at_least(bound(a as i64)), "p = {p}, c({})", step * n);
            }
        }
    }
    assert_eq!(j, j_series_level_two(800).unwrap());
}

#[test]
fn reports_are_deterministic() {
    let req = Theorem2Request {
        m_max: 6,
        d_max: 2,
        n_max: Some(15),
        precision: None,
    };
    let a = verify_theorem2(ctx(5), &req).unwrap();
    let b = verify_theorem2(ctx(5), &req).unwrap();
    assert_eq!(a, b);
    let keys: Vec<_> = a.cases.iter().map(|c| (c.m, c.beta, c.n)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn main_congruence_needs_positive_n() {
    // The constant term of f_{0,1}^(2) is -24, far from divisible by 2^11.
    let req = Theorem2Request {
        m_max: 1,
        d_max: 1,
        n_max: Some(4),
        precision: None,
    };
    let r = verify_theorem2(ctx(2), &req).unwrap();
    assert!(r.cases.iter().all(|c| c.n >= 1));
    let d = decompose_up_step(ctx(2), 1, None).unwrap();
    assert_eq!(d.constant, ExactScalar::from_integer((-24).into()));
}

#[test]
fn up_gains_delta_on_single_generators() {
    for p in [2u32, 3, 5, 7] {
        let delta = ctx(p).delta().unwrap() as i64;
        for k in 1..=3 {
            let mut digits = vec![0; k];
            digits[k - 1] = 1;
            let r = rp_element(ctx(p), &digits);
            let t = rp_report(&up_image(&r, 64).unwrap()).unwrap().extra_power;
            assert!(t.at_least(delta), "p = {p}, phi^{k}: t = {t}");
        }
    }
    // p^gamma(2) phi^2 at p = 2 is 2^8 phi^2.
    let r = rp_element(ctx(2), &[0, 1]);
    assert_eq!(
        r.coeff(2),
        ExactScalar::from_integer(Pow::pow(BigInt::from(2), 8u32))
    );
    assert_eq!(rp_report(&r).unwrap().extra_power, Valuation::Finite(0));
}

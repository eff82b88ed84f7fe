use num_complex::Complex64;
use serde_json::{json, Value};

use qcong_core::basis::basis_element;
use qcong_core::congruence::{
    j_series, scan_alpha_gt_beta, scan_phi_powers, valuation_table, verify_lehner_direct,
    verify_theorem2, CongruenceReport, Theorem2Request,
};
use qcong_core::eta::{self, check_cusp_relation, phi_eval, psi_eval};
use qcong_core::hecke::{
    derive_bj, extraction_precision, verify_hpoly_relation, verify_power_sum_divisibility,
    verify_up_closure, ModularEquation,
};
use qcong_core::scalar::render;
use qcong_core::{PrimeContext, QSeries};

use crate::render::{emit, grid, valuation_json, Format, Report};
use crate::{
    ExpandArgs, Failure, Global, ScanArgs, ScanKind, TableArgs, TableKind, VerifyArgs, VerifyTarget,
};

type Outcome = Result<bool, Failure>;

fn requested_precision(g: &Global) -> Result<i64, Failure> {
    if g.precision < 0 {
        return Err(Failure::Usage(format!(
            "precision must be >= 0, got {}",
            g.precision
        )));
    }
    Ok(g.precision)
}

pub fn expand(g: &Global, a: &ExpandArgs) -> Outcome {
    let ctx = g.ctx()?;
    let prec = requested_precision(g)?;
    let w = g.working_precision();
    let (object, series): (String, QSeries) = if a.psi {
        ("psi".into(), eta::psi(ctx, w)?)
    } else if a.phi {
        ("phi".into(), eta::phi(ctx, w)?)
    } else if let Some(m) = a.basis {
        (format!("f_0,{m}"), basis_element(ctx, m, w)?.series)
    } else {
        ("j".into(), j_series(w)?)
    };
    let s = series.truncate(prec);

    let mut r = Report::new(&["p", "object", "exponent", "coefficient"]);
    r.line(format!("# {object}, p = {}, through q^{prec}", ctx.p()));
    r.line(s.to_string());
    let mut coeffs = Vec::new();
    for (e, c) in s.terms() {
        let c = render(&c);
        r.row(vec![
            ctx.p().to_string(),
            object.clone(),
            e.to_string(),
            c.clone(),
        ]);
        coeffs.push(json!([e.to_string(), c]));
    }
    r.json = json!({
        "p": ctx.p(),
        "object": object,
        "valuation": s.val(),
        "precision": s.prec(),
        "coefficients": coeffs,
    });
    emit(g, Format::Text, &r)?;
    Ok(true)
}

fn parse_real(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((n, d)) => Some(n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?),
        None => s.trim().parse().ok(),
    }
}

/// `a+bi`, `a-bi`, `bi` or `a`, where `a` and `b` may be fractions `x/y`.
fn parse_tau(s: &str) -> Option<Complex64> {
    if let Ok(z) = s.parse::<Complex64>() {
        return Some(z);
    }
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return Some(Complex64::new(parse_real(s)?, 0.0));
    };
    // split before the sign that starts the imaginary part
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match cut {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im.trim() {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => parse_real(t.strip_prefix('+').unwrap_or(t))?,
    };
    Some(Complex64::new(re, im))
}

fn complex(z: Complex64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    format!("{}{:+}i", z.re, im)
}

fn bound_formula(ctx: PrimeContext) -> &'static str {
    match ctx.p() {
        2 => "3d+8",
        3 => "2d+3",
        5 => "d+1",
        _ => "d",
    }
}

fn congruence_report(title: String, report: &CongruenceReport) -> Report {
    let ctx = report.ctx;
    let bound_col = format!("bound({})", bound_formula(ctx));
    let mut r = Report::new(&[
        "p",
        "m",
        "m_prime",
        "alpha",
        "beta",
        "n",
        "index",
        "coefficient",
        "valuation",
        &bound_col,
        "pass",
    ]);
    let passed = report.passed();
    r.line(format!("# {title}, precision {}", report.precision));
    r.line(format!(
        "{}: {} coefficients checked, {} failures",
        if passed { "PASS" } else { "FAIL" },
        report.cases.len(),
        report.failures().count()
    ));
    if let Some(c) = report.first_failure() {
        r.line(format!(
            "first counterexample: m = {}, beta = {}, n = {}, a({}) = {} has v_{} = {} < {}",
            c.m,
            c.beta,
            c.n,
            c.index(),
            c.coefficient,
            c.p,
            c.observed,
            c.required
        ));
    }
    let mut cases = Vec::new();
    for c in &report.cases {
        r.row(vec![
            c.p.to_string(),
            c.m.to_string(),
            c.m_prime.to_string(),
            c.alpha.to_string(),
            c.beta.to_string(),
            c.n.to_string(),
            c.index().to_string(),
            c.coefficient.to_string(),
            c.observed.to_string(),
            c.required.to_string(),
            c.pass.to_string(),
        ]);
        cases.push(json!({
            "m": c.m,
            "m_prime": c.m_prime,
            "alpha": c.alpha,
            "beta": c.beta,
            "n": c.n,
            "index": c.index(),
            "coefficient": c.coefficient.to_string(),
            "valuation": valuation_json(c.observed),
            "bound": c.required,
            "pass": c.pass,
        }));
    }
    r.json = json!({
        "p": ctx.p(),
        "title": title,
        "precision": report.precision,
        "bound": bound_col,
        "passed": passed,
        "cases": cases,
    });
    r
}

fn modular_equation(g: &Global, ctx: PrimeContext) -> Result<ModularEquation, Failure> {
    let prec = g
        .working_precision()
        .max(extraction_precision(ctx, ctx.p() as usize));
    Ok(derive_bj(ctx, prec)?)
}

pub fn verify(g: &Global, a: &VerifyArgs) -> Outcome {
    let ctx = g.ctx()?;
    let w = g.working_precision();
    let p = ctx.p();
    let (report, passed) = match a.target {
        VerifyTarget::Theorem2 => {
            let req = Theorem2Request {
                m_max: a.m_max,
                d_max: a.d_max,
                n_max: a.n_max,
                precision: Some(w),
            };
            if a.m_max == 0 || a.d_max == 0 {
                return Err(Failure::Usage("--m-max and --d-max must be >= 1".into()));
            }
            let rep = verify_theorem2(ctx, &req)?;
            let title = format!(
                "verify theorem2, p = {p}, m <= {}, beta - alpha <= {}, n <= {}",
                a.m_max,
                a.d_max,
                a.n_max.map_or("precision".into(), |n| n.to_string())
            );
            (congruence_report(title, &rep), rep.passed())
        }
        VerifyTarget::Lehner => {
            let n_max = a.n_max.unwrap_or(20);
            let rep = verify_lehner_direct(ctx, a.m, a.d_max, n_max)?;
            let title = format!(
                "verify lehner, p = {p}, m = {}, a <= {}, n <= {n_max}",
                a.m, a.d_max
            );
            (congruence_report(title, &rep), rep.passed())
        }
        VerifyTarget::Modeq => {
            let eq = modular_equation(g, ctx)?;
            let mut r = Report::new(&["p", "j", "b_j"]);
            r.line(format!("# U_{p} phi = {p} * sum_j b_j phi^j"));
            for (i, b) in eq.b.iter().enumerate() {
                r.line(format!("b_{} = {b}", i + 1));
                r.row(vec![p.to_string(), (i + 1).to_string(), b.to_string()]);
            }
            r.line("PASS: expansion matches through working precision");
            r.json = json!({
                "p": p,
                "b": eq.b.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "passed": true,
            });
            (r, true)
        }
        VerifyTarget::Hrelation => {
            let prec = w.max(extraction_precision(ctx, p as usize));
            let rep = verify_hpoly_relation(ctx, prec)?;
            let ok = rep.holds(p);
            let mut r = Report::new(&["p", "summand", "w_valuation"]);
            r.line(format!(
                "# h^{p} + sum_j (-1)^j g_j h^({p}-j), q-precision {prec}"
            ));
            r.line(format!(
                "{}: residual {} (determined through w^{})",
                if ok { "PASS" } else { "FAIL" },
                if rep.residual.is_zero() {
                    "vanishes".to_string()
                } else {
                    rep.residual.to_string()
                },
                rep.residual.prec()
            ));
            r.line(format!(
                "summand w-valuations: {:?}",
                rep.summand_valuations
            ));
            for (i, v) in rep.summand_valuations.iter().enumerate() {
                r.row(vec![p.to_string(), i.to_string(), v.to_string()]);
            }
            r.json = json!({
                "p": p,
                "precision": prec,
                "residual_zero": rep.residual.is_zero(),
                "residual_precision": rep.residual.prec(),
                "summand_valuations": rep.summand_valuations,
                "passed": ok,
            });
            (r, ok)
        }
        VerifyTarget::Powersums => {
            let eq = modular_equation(g, ctx)?;
            let n_max = match a.n_max {
                Some(n) if n < 1 => return Err(Failure::Usage("--n-max must be >= 1".into())),
                Some(n) => n as usize,
                None => 2 * p as usize,
            };
            let checks = verify_power_sum_divisibility(&eq, n_max)?;
            let ok = checks.iter().all(|c| c.pass);
            let mut r = Report::new(&["p", "n", "observed_t", "required", "pass"]);
            r.line(format!("# S_n in p^e(n) R^({p}), n <= {n_max}"));
            let mut rows = Vec::new();
            for c in &checks {
                r.line(format!(
                    "n = {:>2}: t = {:>4} >= {:>3} {}",
                    c.n,
                    c.observed.to_string(),
                    c.required,
                    if c.pass { "ok" } else { "FAIL" }
                ));
                r.row(vec![
                    p.to_string(),
                    c.n.to_string(),
                    c.observed.to_string(),
                    c.required.to_string(),
                    c.pass.to_string(),
                ]);
                rows.push(json!({"n": c.n, "observed": valuation_json(c.observed), "required": c.required, "pass": c.pass}));
            }
            r.line(if ok { "PASS" } else { "FAIL" });
            r.json = json!({"p": p, "passed": ok, "checks": rows});
            (r, ok)
        }
        VerifyTarget::Closure => {
            let rep = verify_up_closure(ctx, a.trials, a.deg_max, w, g.seed)?;
            let ok = rep.passed();
            let mut r = Report::new(&["p", "trial", "digits", "t", "pass"]);
            r.line(format!(
                "# U_{p} on {} random elements of R^({p}), degree <= {}, seed {}, precision {}",
                a.trials, a.deg_max, g.seed, rep.precision
            ));
            let mut trials = Vec::new();
            for t in &rep.trials {
                let digits = t
                    .digits
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                let tv = t.extra_power.map_or("error".to_string(), |v| v.to_string());
                r.row(vec![
                    p.to_string(),
                    t.index.to_string(),
                    digits.clone(),
                    tv.clone(),
                    t.pass.to_string(),
                ]);
                trials.push(json!({
                    "trial": t.index,
                    "digits": t.digits,
                    "t": t.extra_power.map(valuation_json),
                    "pass": t.pass,
                    "error": t.error,
                }));
            }
            match rep.trials.iter().find(|t| !t.pass) {
                None => r.line(format!("PASS: every image has t >= {}", rep.required)),
                Some(t) => r.line(format!(
                    "FAIL: trial {} digits {:?} gave t = {:?} (need {}){}",
                    t.index,
                    t.digits,
                    t.extra_power,
                    rep.required,
                    t.error.as_ref().map_or(String::new(), |e| format!(": {e}"))
                )),
            }
            r.json = json!({"p": p, "seed": g.seed, "precision": rep.precision, "required": rep.required, "passed": ok, "trials": trials});
            (r, ok)
        }
        VerifyTarget::Cusp => {
            let tau = parse_tau(&a.tau).ok_or_else(|| {
                Failure::Usage(format!("cannot parse tau '{}' (expected a+bi)", a.tau))
            })?;
            let residual = check_cusp_relation(ctx, tau)?;
            let ok = residual < a.tol;
            let psi = psi_eval(ctx, tau)?;
            let phi = phi_eval(ctx, tau)?;
            let mut r = Report::new(&["p", "tau", "residual", "tol", "pass"]);
            r.line(format!(
                "# psi(-1/({p} tau)) - {p}^{} phi(tau) at tau = {}",
                ctx.lambda() / 2,
                complex(tau)
            ));
            r.line(format!(
                "psi(tau) = {}, phi(tau) = {}",
                complex(psi),
                complex(phi)
            ));
            r.line(format!(
                "{}: residual {residual:e} (tol {:e})",
                if ok { "PASS" } else { "FAIL" },
                a.tol
            ));
            r.row(vec![
                p.to_string(),
                complex(tau),
                format!("{residual:e}"),
                format!("{:e}", a.tol),
                ok.to_string(),
            ]);
            r.json = json!({"p": p, "tau": [tau.re, tau.im], "residual": residual, "tol": a.tol, "passed": ok});
            (r, ok)
        }
    };
    emit(g, Format::Text, &report)?;
    Ok(passed)
}

pub fn table(g: &Global, a: &TableArgs) -> Outcome {
    let ctx = g.ctx()?;
    let p = ctx.p();
    let mut r;
    match a.which {
        TableKind::Valuations => {
            if a.rows.contains(&0) {
                return Err(Failure::Usage("row labels are pole orders m >= 1".into()));
            }
            let t = valuation_table(ctx, &a.rows, &a.cols, a.with_j)?;
            let mut header = vec!["p".to_string(), "row".to_string()];
            header.extend(t.columns.iter().map(|n| format!("n={n}")));
            r = Report::new(&[]);
            r.header = header;
            r.line(format!(
                "# v_{p}(a_0^({p})(m, n)) with columnwise minimum{}",
                if a.with_j {
                    format!(" and v_{p}(c(n)) for j")
                } else {
                    String::new()
                }
            ));
            let cols: Vec<String> = t.columns.iter().map(|n| n.to_string()).collect();
            let mut grid_rows = Vec::new();
            let mut json_rows = Vec::new();
            for (label, vals) in t.row_labels.iter().zip(&t.rows) {
                let cells: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
                let mut row = vec![p.to_string(), label.clone()];
                row.extend(cells.iter().cloned());
                r.row(row);
                json_rows.push(json!([
                    label,
                    vals.iter()
                        .map(|v| valuation_json(*v))
                        .collect::<Vec<Value>>()
                ]));
                grid_rows.push((label.clone(), cells));
            }
            r.text.push_str(&grid("m \\ n", &cols, &grid_rows));
            r.json = json!({"p": p, "columns": t.columns, "rows": json_rows});
        }
        TableKind::Bj => {
            let eq = modular_equation(g, ctx)?;
            r = Report::new(&["p", "j", "b_j"]);
            r.line(format!("# b_j with U_{p} phi = {p} * sum_j b_j phi^j"));
            let rows: Vec<(String, Vec<String>)> =
                eq.b.iter()
                    .enumerate()
                    .map(|(i, b)| ((i + 1).to_string(), vec![b.to_string()]))
                    .collect();
            r.text.push_str(&grid("j", &["b_j".to_string()], &rows));
            for (j, b) in &rows {
                r.row(vec![p.to_string(), j.clone(), b[0].clone()]);
            }
            r.json = json!({
                "p": p,
                "rows": rows.iter().map(|(j, b)| json!([j.parse::<u32>().unwrap_or(0), b[0]])).collect::<Vec<_>>(),
            });
        }
    }
    emit(g, Format::Text, &r)?;
    Ok(true)
}

pub fn scan(g: &Global, a: &ScanArgs) -> Outcome {
    let ctx = g.ctx()?;
    let p = ctx.p();
    let mut r;
    match a.which {
        ScanKind::AlphaGtBeta => {
            let rows = scan_alpha_gt_beta(ctx, a.m_max, a.n_max)?;
            r = Report::new(&["p", "m", "alpha", "beta", "n", "valuation"]);
            r.line(format!(
                "# v_{p}(a_0(m, {p}^beta n)) for v_{p}(m) = alpha >= beta"
            ));
            let mut data = Vec::new();
            for x in &rows {
                let cells = vec![
                    p.to_string(),
                    x.m.to_string(),
                    x.alpha.to_string(),
                    x.beta.to_string(),
                    x.n.to_string(),
                    x.valuation.to_string(),
                ];
                r.line(cells[1..].join(" "));
                r.row(cells);
                data.push(json!({"m": x.m, "alpha": x.alpha, "beta": x.beta, "n": x.n, "valuation": valuation_json(x.valuation)}));
            }
            r.json = json!({"p": p, "scan": "alpha-gt-beta", "rows": data});
        }
        ScanKind::PhiPowers => {
            let rows = scan_phi_powers(ctx, a.pow_max, a.d_max, a.n_max)?;
            r = Report::new(&["p", "k", "beta", "n", "valuation"]);
            r.line(format!(
                "# v_{p} of the q^n coefficient of U_{p}^beta phi^k"
            ));
            let mut data = Vec::new();
            for x in &rows {
                let cells = vec![
                    p.to_string(),
                    x.k.to_string(),
                    x.beta.to_string(),
                    x.n.to_string(),
                    x.valuation.to_string(),
                ];
                r.line(cells[1..].join(" "));
                r.row(cells);
                data.push(json!({"k": x.k, "beta": x.beta, "n": x.n, "valuation": valuation_json(x.valuation)}));
            }
            r.json = json!({"p": p, "scan": "phi-powers", "rows": data});
        }
    }
    emit(g, Format::Csv, &r)?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_forms() {
        assert_eq!(parse_tau("0+1i"), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(parse_tau("i"), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(parse_tau("-2i"), Some(Complex64::new(0.0, -2.0)));
        assert_eq!(parse_tau("1/4-1/2i"), Some(Complex64::new(0.25, -0.5)));
        assert_eq!(parse_tau("1e-3+2i"), Some(Complex64::new(0.001, 2.0)));
        assert_eq!(parse_tau("3"), Some(Complex64::new(3.0, 0.0)));
        assert_eq!(parse_tau("x+yi"), None);
    }
}

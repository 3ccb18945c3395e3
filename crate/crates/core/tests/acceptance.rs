//! One PASS/FAIL line per acceptance criterion. Tolerances are pinned here.
//! Reference values are computed in the test code from products, term-by-term
//! sums and classical closed forms; library identity helpers are not used as
//! oracles.
//!
//! The target exits 0 whatever the outcome so that the workspace test run
//! records the report; set `ACCEPTANCE_STRICT=1` to exit 1 on any FAIL.

mod common;

use std::time::Instant;

use common::*;
use num_complex::Complex64;
use qbmf::double_integral::*;
use qbmf::qbessel::*;
use qbmf::qbinomial::*;
use qbmf::qseries::*;
use qbmf::quadrature::*;
use qbmf::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID_Q: [f64; 4] = [0.3, 0.5, 0.7, 0.9];
const GRID_NU: [f64; 4] = [0.25, 0.7, 1.5, 2.5];
const GRID_Z: [f64; 3] = [0.4, 1.0, 1.8];
const KINDS: [FunctionKind; 3] = [FunctionKind::First, FunctionKind::Second, FunctionKind::Third];
const SEED: u64 = 20240611;

fn sp() -> SeriesPolicy {
    SeriesPolicy::default()
}

/// Tally of one criterion: passes, total, worst measured value and the first failure.
struct Tally {
    pass: usize,
    total: usize,
    worst: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { pass: 0, total: 0, worst: 0.0, first_failure: None }
    }

    fn check(&mut self, what: impl FnOnce() -> String, outcome: Result<f64>, tol: f64) {
        self.total += 1;
        match outcome {
            Ok(v) if v <= tol => {
                self.pass += 1;
                self.worst = self.worst.max(v);
            }
            Ok(v) => {
                self.worst = self.worst.max(if v.is_nan() { f64::INFINITY } else { v });
                self.first_failure.get_or_insert_with(|| format!("{}: {v:.3e}", what()));
            }
            Err(e) => {
                self.worst = f64::INFINITY;
                self.first_failure.get_or_insert_with(|| format!("{}: {e}", what()));
            }
        }
    }

    fn ok(&self) -> bool {
        self.total > 0 && self.pass == self.total
    }

    fn summary(&self) -> String {
        let mut s = format!("{}/{} within tolerance, worst {:.3e}", self.pass, self.total, self.worst);
        if let Some(f) = &self.first_failure {
            s.push_str(&format!("; first failure {f}"));
        }
        s
    }
}

struct Report {
    failed: Vec<&'static str>,
}

impl Report {
    fn line(&mut self, id: &'static str, ok: bool, detail: String) {
        println!("{} {id}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id);
        }
    }

    fn info(&self, id: &str, detail: String) {
        println!("INFO {id}: {detail}");
    }
}

/// Residual of `f(z/q) - (q^-nu + q^nu) f(z) + f(qz) = q^-delta (1 - q^2)^2 z^2 / 4 f(q^{1 - delta} z)`
/// over `max(|f(z/q)|, |f(z)|, |f(qz)|)`.
fn scaled_residual(f: &dyn Fn(f64) -> Result<Complex64>, kind: FunctionKind, nu: f64, z: f64, q: f64) -> Result<f64> {
    let d = kind.delta() as i32;
    let p = q * q;
    let (a, b, m) = (f(z / q)?, f(z)?, f(q * z)?);
    let lhs = a - (q.powf(-nu) + q.powf(nu)) * b + m;
    let rhs = q.powi(-d) * (1.0 - p) * (1.0 - p) / 4.0 * z * z * f(z * q.powi(1 - d))?;
    Ok((lhs - rhs).norm() / a.norm().max(b.norm()).max(m.norm()))
}

fn criterion_1(rep: &mut Report) {
    let mut t = Tally::new();
    for kind in KINDS {
        for q in GRID_Q {
            let base = QBase::new(q).unwrap();
            // the kind-1 series disc is |z| < 2 / (1 - q^2); stencil points
            // outside it use the product-form continuation
            for nu in GRID_NU {
                for z in GRID_Z {
                    if kind == FunctionKind::First {
                        assert!(z < 2.0 / (1.0 - q * q));
                    }
                    let args = BesselArgs::new(c(nu), c(z), base).with_continuation(true);
                    let fs: [(&str, Box<dyn Fn(f64) -> Result<Complex64>>); 3] = [
                        ("I_nu", Box::new(move |w| bessel_i(kind, args.with_z(c(w)), &sp()).map(|r| r.value))),
                        ("I_-nu", Box::new(move |w| bessel_i(kind, args.with_z(c(w)).with_nu(c(-nu)), &sp()).map(|r| r.value))),
                        ("K_nu", Box::new(move |w| bessel_k(kind, args.with_z(c(w)), &sp()).map(|r| r.value))),
                    ];
                    for (name, f) in fs {
                        t.check(
                            || format!("{name} j={} q={q} nu={nu} z={z}", kind.j()),
                            scaled_residual(&*f, kind, nu, z, q),
                            1e-10,
                        );
                    }
                }
            }
        }
    }
    rep.line("C1 difference equations", t.ok(), t.summary());
}

/// `W(I, K)(z) = I(z) K(qz) - I(qz) K(z)` from the library functions.
fn numeric_wronskian(kind: FunctionKind, nu: f64, z: f64, base: QBase) -> Result<Complex64> {
    let args = BesselArgs::new(c(nu), c(z), base).with_continuation(true);
    let q = base.q();
    let i = |w: f64| bessel_i(kind, args.with_z(c(w)), &sp()).map(|r| r.value);
    let k = |w: f64| bessel_k(kind, args.with_z(c(w)), &sp()).map(|r| r.value);
    Ok(i(z)? * k(q * z)? - i(q * z)? * k(z)?)
}

/// The closed form with constant `(1 - q^2) / 2` times `q^{-exponent}`; the
/// kind-1 factor `A_nu` is 1 identically.
fn wronskian_oracle(kind: FunctionKind, nu_exponent: f64, z: f64, q: f64) -> Complex64 {
    let p = q * q;
    let w = (1.0 - p) * (1.0 - p) * z * z / 4.0;
    let factor = match kind {
        FunctionKind::First => 1.0 / poch_inf(c(w), p),
        FunctionKind::Second => poch_inf(c(w * p), p),
        FunctionKind::Third => c(1.0),
    };
    factor * q.powf(-nu_exponent) * (1.0 - p) / 2.0
}

fn criterion_2(rep: &mut Report) {
    let mut displayed = Tally::new();
    let mut derived = Tally::new();
    let mut flat = Tally::new();
    for kind in KINDS {
        for q in GRID_Q {
            let base = QBase::new(q).unwrap();
            for nu in GRID_NU {
                let mut values = Vec::new();
                for z in GRID_Z {
                    let w = numeric_wronskian(kind, nu, z, base);
                    if let Ok(w) = w {
                        values.push(w);
                    }
                    let label = || format!("j={} q={q} nu={nu} z={z}", kind.j());
                    displayed.check(label, w.clone().map(|w| rel(w, wronskian_oracle(kind, nu, z, q))), 1e-9);
                    derived.check(label, w.map(|w| rel(w, wronskian_oracle(kind, nu * nu, z, q))), 1e-9);
                }
                if kind == FunctionKind::Third {
                    let spread = if values.len() == GRID_Z.len() {
                        Ok(values.iter().map(|w| rel(*w, values[0])).fold(0.0, f64::max))
                    } else {
                        Err(qbmf::Error::Degenerate("a Wronskian evaluation failed".into()))
                    };
                    flat.check(|| format!("j=3 q={q} nu={nu}"), spread, 1e-10);
                }
            }
        }
    }
    rep.line(
        "C2 Wronskian closed forms",
        displayed.ok() && flat.ok(),
        format!("displayed constant q^-nu (1-q^2)/2: {}; kind-3 z-independence: {}", displayed.summary(), flat.summary()),
    );
    rep.info("C2", format!("with constant q^(-nu^2) (1-q^2)/2 instead: {}", derived.summary()));
}

fn moment_oracle(kind: FunctionKind, nu: f64, q: f64) -> f64 {
    -q.powf(kind.delta() as f64 * nu) * q.ln() / (1.0 - q.powf(2.0 * nu))
}

fn criterion_3(rep: &mut Report) {
    let qp = QuadraturePolicy::default();
    let mut t = Tally::new();
    for kind in KINDS {
        for q in GRID_Q {
            let base = QBase::new(q).unwrap();
            for nu in GRID_NU {
                t.check(
                    || format!("j={} q={q} nu={nu}", kind.j()),
                    moment_identity(kind, c(nu), &base, &qp).map(|m| rel(m.value, c(moment_oracle(kind, nu, q)))),
                    1e-10,
                );
            }
        }
    }
    rep.line("C3 moment identity", t.ok(), t.summary());
}

fn criterion_4(rep: &mut Report) {
    let qp = QuadraturePolicy::default();
    let start = Instant::now();
    let mut upper = Tally::new();
    let mut first = Tally::new();
    for kind in KINDS {
        let tol = if kind == FunctionKind::First { 1e-6 } else { 1e-8 };
        let tally = if kind == FunctionKind::First { &mut first } else { &mut upper };
        for q in GRID_Q {
            let base = QBase::new(q).unwrap();
            for nu in GRID_NU {
                for z in GRID_Z {
                    let outcome = (|| {
                        let integral = k_integral_single(kind, c(nu), c(z), &base, &qp, &sp())?;
                        let series = bessel_k(kind, BesselArgs::new(c(nu), c(z), base).with_continuation(true), &sp())?;
                        Ok(rel(integral.value, series.value))
                    })();
                    tally.check(|| format!("j={} q={q} nu={nu} z={z}", kind.j()), outcome, tol);
                }
            }
        }
    }
    rep.line(
        "C4 single-integral representation",
        upper.ok() && first.ok(),
        format!(
            "kinds 2,3 at 1e-8: {}; kind 1 at 1e-6: {}; {:.1}s",
            upper.summary(),
            first.summary(),
            start.elapsed().as_secs_f64()
        ),
    );
}

fn criterion_5(rep: &mut Report) {
    let mut values = Tally::new();
    let mut phase = Tally::new();
    let nodes = 256;
    for kind in KINDS {
        let tol = if kind == FunctionKind::First { 1e-8 } else { 1e-9 };
        for q in GRID_Q {
            let base = QBase::new(q).unwrap();
            let radius = angular_radius(kind, EtaMode::HalfHalf, &base);
            for rr in [0.1, 0.4, 0.8, 1.5, 2.5] {
                if radius.is_some_and(|r| rr >= 0.9 * r) {
                    continue;
                }
                let oracle = c(scaled_bessel(-1.0, kind.delta(), 0.0, 2.0 * rr, q));
                let a0 = angular_j0(kind, rr, 0.0, EtaMode::HalfHalf, &base, nodes);
                values.check(
                    || format!("j={} q={q} r rho={rr}", kind.j()),
                    a0.clone().map(|a| (a.value - oracle).norm() / oracle.norm().max(1.0)),
                    tol,
                );
                for psi in [0.7, -2.1, 3.0] {
                    let outcome = (|| {
                        let a1 = angular_j0(kind, rr, psi, EtaMode::HalfHalf, &base, nodes)?;
                        let a0 = a0.clone()?;
                        Ok((a1.value - a0.value).norm() / a0.value.norm().max(1.0))
                    })();
                    phase.check(|| format!("j={} q={q} r rho={rr} psi={psi}", kind.j()), outcome, 1e-13);
                }
            }
        }
    }
    rep.line(
        "C5 angular representation",
        values.ok() && phase.ok(),
        format!("against the J_0 series: {}; psi-invariance: {}", values.summary(), phase.summary()),
    );
    // the xi_0 * xi_1 pairing is only valid inside its radius and is refused beyond it
    let base = QBase::new(0.5).unwrap();
    let outside = angular_j0(FunctionKind::Second, 2.0, 0.0, EtaMode::ZeroOne, &base, nodes);
    rep.info(
        "C5",
        format!("xi_0 * xi_1 pairing at r rho = 2 beyond 1/(1-q^2) = 4/3, q = 0.5, kind 2: {:?}", outside.map(|r| r.value)),
    );
}

fn criterion_6(rep: &mut Report) {
    let qp = QuadraturePolicy::default();
    let start = Instant::now();
    let mut against_k = Tally::new();
    let mut forms = Tally::new();
    let mut truncated = Tally::new();
    for kind in [FunctionKind::Second, FunctionKind::Third] {
        for q in [0.5, 0.7] {
            let base = QBase::new(q).unwrap();
            for nu in [0.5, 1.5] {
                for r in [0.4, 0.8] {
                    let z = Complex64::from_polar(r, 0.6);
                    let k = bessel_k(kind, BesselArgs::new(c(nu), c(2.0 * r), base), &sp());
                    let mut results = Vec::new();
                    for form in [DoubleForm::ExpXi, DoubleForm::HalfHalf] {
                        let d = k_integral_double(kind, c(nu), z, &base, &qp, 64, form);
                        let outcome = (|| Ok(rel(d.clone()?.value, k.clone()?.value)))();
                        against_k.check(|| format!("j={} q={q} nu={nu} |z|={r} {form:?}", kind.j()), outcome, 1e-6);
                        results.push(d);
                    }
                    let outcome = (|| Ok(rel(results[0].clone()?.value, results[1].clone()?.value)))();
                    forms.check(|| format!("j={} q={q} nu={nu} |z|={r}", kind.j()), outcome, 1e-6);
                    let outcome = (|| {
                        let d = k_integral_double_truncated(kind, c(nu), z, 3.0, &base, &qp, 128, DoubleForm::HalfHalf)?;
                        let s = k_integral_single_truncated(kind, c(nu), c(2.0 * r), 3.0, &base, &qp, &sp())?;
                        Ok(rel(d.value, s.value))
                    })();
                    truncated.check(|| format!("j={} q={q} nu={nu} |z|={r}", kind.j()), outcome, 1e-8);
                }
            }
        }
    }
    rep.line(
        "C6 double-integral representation",
        against_k.ok() && forms.ok(),
        format!(
            "against bessel_k(2|z|): {}; forms agree: {}; {:.1}s",
            against_k.summary(),
            forms.summary(),
            start.elapsed().as_secs_f64()
        ),
    );
    rep.info("C6", format!("radial integral cut at rho = 3 against the cut single integral: {}", truncated.summary()));
}

fn criterion_7(rep: &mut Report) {
    let qs = [0.99, 0.999];
    let mut ratios = Tally::new();
    let mut a_exact = Tally::new();
    for (nu, z) in [(0.5, 1.3), (1.5, 0.8)] {
        let (ic, kc) = classical_half(nu, z);
        for kind in KINDS {
            for (name, classical) in [("I", ic), ("K", kc)] {
                let outcome = (|| {
                    let mut d = [0.0; 2];
                    for (slot, q) in d.iter_mut().zip(qs) {
                        let args = BesselArgs::new(c(nu), c(z), QBase::new(q)?).with_continuation(true);
                        let v = if name == "I" { bessel_i(kind, args, &sp())? } else { bessel_k(kind, args, &sp())? };
                        *slot = (v.value.re - classical).abs();
                    }
                    // shrink factor >= 5, as a quantity that must stay below 1/5
                    Ok(d[1] / d[0])
                })();
                ratios.check(|| format!("{name} j={} nu={nu} z={z}", kind.j()), outcome, 0.2);
            }
        }
        // A_nu is 1 for every q, so its distance from 1 is roundoff at both q
        // and there is nothing to shrink; the check is that it stays there.
        let outcome = (|| {
            let mut worst: f64 = 0.0;
            for q in qs {
                worst = worst.max((a_nu(c(nu), &QBase::new(q)?, &sp())?.value - 1.0).norm());
            }
            Ok(worst)
        })();
        a_exact.check(|| format!("A nu={nu}"), outcome, 1e-12);
    }
    rep.line(
        "C7 classical limits",
        ratios.ok() && a_exact.ok(),
        format!(
            "error ratio q=0.999 over q=0.99 (<= 0.2): {}; |A_nu - 1| (roundoff only, <= 1e-12): {}",
            ratios.summary(),
            a_exact.summary()
        ),
    );
}

/// The three base-`q` derivative relations as printed, with the derivative
/// taken at base `dbase` (`q` or `q^2`). Returns the worst relative residual.
fn printed_relations(kind: FunctionKind, q: f64, dbase: f64, z: f64, s: f64) -> Result<f64> {
    let base = QBase::new(q)?;
    let h = kind.delta() as f64 / 2.0;
    let j = |nu: f64, w: f64| -> Result<Complex64> {
        bessel_j_scaled(kind, BesselArgs::new(c(nu), c(w), base).with_continuation(true), &sp()).map(|r| r.value)
    };
    let dq = |f: &dyn Fn(f64) -> Result<Complex64>, x: f64| -> Result<Complex64> {
        Ok((f(x)? - f(dbase * x)?) / ((1.0 - dbase) * x))
    };
    let cmp = |l: Complex64, r: Complex64| (l - r).norm() / l.norm().max(r.norm()).max(1.0);
    let r1 = cmp(dq(&|w| j(0.0, w * s / q), z)?, -q.powf(1.0 - h) * s * j(1.0, q.powf(-h) * z * s)?);
    let r2 = cmp(dq(&|w| j(0.0, w * s), z)?, -q.powf(1.0 - h) * s * j(1.0, q.powf(1.0 - h) * z * s)?);
    let r3 = cmp(
        dq(&|t| Ok(t * j(1.0, q.powf(1.0 - h) * z * t)?), s)? * (2.0 / (1.0 + q)),
        q.powf(-h) * z * s * j(0.0, q.powf(1.0 - 2.0 * h) * z * s)?,
    );
    Ok(r1.max(r2).max(r3))
}

/// The same relations with the constants and arguments the series forces.
fn corrected_relations(kind: FunctionKind, q: f64, z: f64, s: f64) -> Result<f64> {
    let base = QBase::new(q)?;
    let h = kind.delta() as f64 / 2.0;
    let j = |nu: f64, w: f64| -> Result<Complex64> {
        bessel_j_scaled(kind, BesselArgs::new(c(nu), c(w), base).with_continuation(true), &sp()).map(|r| r.value)
    };
    let dq = |f: &dyn Fn(f64) -> Result<Complex64>, x: f64| -> Result<Complex64> { Ok((f(x)? - f(q * x)?) / ((1.0 - q) * x)) };
    let cmp = |l: Complex64, r: Complex64| (l - r).norm() / l.norm().max(r.norm()).max(1.0);
    let half = (1.0 + q) / 2.0;
    let r1 = cmp(dq(&|w| j(0.0, w * s / q), z)?, -half * q.powf(-h) * s * j(1.0, q.powf(-h) * z * s)?);
    let r2 = cmp(dq(&|w| j(0.0, w * s), z)?, -half * q.powf(1.0 - h) * s * j(1.0, q.powf(1.0 - h) * z * s)?);
    let r3 = cmp(
        dq(&|t| Ok(t * j(1.0, q.powf(1.0 - h) * z * t)?), s)? / half,
        q.powf(1.0 - h) * z * s * j(0.0, q.powf(2.0 - 2.0 * h) * z * s)?,
    );
    Ok(r1.max(r2).max(r3))
}

fn criterion_8(rep: &mut Report) {
    let qp = QuadraturePolicy::default();
    let mut shrink = Tally::new();
    let mut parts = Tally::new();
    let mut printed = Tally::new();
    let mut corrected = Tally::new();
    let shrinkers: [(&str, fn(f64) -> f64); 3] = [("1", |_| 1.0), ("cos", f64::cos), ("exp", f64::exp)];
    for q in [0.3, 0.5, 0.7] {
        let base = QBase::new(q).unwrap();
        for (name, f) in shrinkers {
            let limit = -f(0.0) * q.ln();
            let outcome = shrink_limit(f, &base, &[1e-2, 1e-3, 1e-6]).map(|v| {
                let e: Vec<f64> = v.iter().map(|x| (x - limit).abs()).collect();
                if e[0] <= 1e-14 {
                    // exact up to roundoff: no order to measure
                    return 0.0;
                }
                // O(eps^2) means the observed order log10(e0 / e1) is at least 1.9,
                // reported as a shortfall that must be 0
                let order = (e[0] / e[1]).log10();
                (1.9 - order).max(0.0) + if e[2] <= 1e-10 { 0.0 } else { e[2] }
            });
            shrink.check(|| format!("F={name} q={q}"), outcome, 0.0);
        }
        let e = |x: f64| (-x).exp();
        let pairs: [(&str, &dyn Fn(f64) -> f64, &dyn Fn(f64) -> f64); 3] = [
            ("f=g=exp(-x)", &e, &e),
            ("f=x exp(-x), g=exp(-x)", &|x: f64| x * (-x).exp(), &e),
            ("f=1, g=1/(1+x)^3", &|_| 1.0, &|x: f64| (1.0 + x).powi(-3)),
        ];
        for (name, f, g) in pairs {
            parts.check(|| format!("{name} q={q}"), q_parts_residual(f, g, &base, &qp).map(|r| r.value.norm()), 1e-10);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for draw in 0..20 {
        let kind = KINDS[rng.gen_range(0..3)];
        let q: f64 = rng.gen_range(0.2..0.9);
        let z: f64 = rng.gen_range(0.2..1.5);
        let s: f64 = rng.gen_range(0.2..1.5);
        let label = || format!("draw {draw} j={} q={q:.4} z={z:.4} s={s:.4}", kind.j());
        let at_q = printed_relations(kind, q, q, z, s);
        let at_p = printed_relations(kind, q, q * q, z, s);
        let best = match (at_q, at_p) {
            (Ok(a), Ok(b)) => Ok(a.min(b)),
            (Ok(a), Err(_)) | (Err(_), Ok(a)) => Ok(a),
            (Err(e), Err(_)) => Err(e),
        };
        printed.check(label, best, 1e-11);
        corrected.check(label, corrected_relations(kind, q, z, s), 1e-11);
    }
    rep.line(
        "C8 lemma suite",
        shrink.ok() && parts.ok() && printed.ok(),
        format!(
            "shrinking limit with O(eps^2) error: {}; q-integration by parts: {}; derivative relations as printed: {}",
            shrink.summary(),
            parts.summary(),
            printed.summary()
        ),
    );
    rep.info("C8", format!("derivative relations with (1+q)/2 constants and corrected arguments: {}", corrected.summary()));
}

fn criterion_9(rep: &mut Report) {
    let mut grid = Tally::new();
    let mut residual = Tally::new();
    let beta = 0.5;
    for k in 0..5 {
        let d = 0.2 + 0.7 * k as f64;
        for q in [0.2, 0.375, 0.55, 0.725, 0.9] {
            let base = QBase::new(q).unwrap();
            let p = q * q;
            for m in 0..5 {
                let z = 10f64.powf(-1.0 + 0.5 * m as f64);
                let oracle = poch_inf(c(-p.powf(beta + d) * z * z), p) / poch_inf(c(-p.powf(beta) * z * z), p);
                grid.check(
                    || format!("alpha-beta={d} q={q} z={z}"),
                    partial_fraction_expansion(beta + d, beta, c(z), &base, &sp()).map(|e| rel(e.value, oracle)),
                    1e-11,
                );
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    for draw in 0..40 {
        let q: f64 = rng.gen_range(0.2..0.9);
        let a = Complex64::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9));
        let b = Complex64::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9));
        let gamma: f64 = rng.gen_range(-1.0..2.0);
        let z = Complex64::from_polar(rng.gen_range(0.1..1.5), rng.gen_range(-3.0..3.0));
        let outcome = (|| {
            let base = QBase::new(q)?;
            let params = RParams::new(a, b, c(gamma));
            let r = big_r(&params, z, &base)?.value;
            let rq = big_r(&params, z * q, &base)?.value;
            // z^2 [b q^gamma R(z) - a R(qz)] = q^gamma R(z) - R(qz)
            let qg = q.powf(gamma);
            let res = z * z * (b * qg * r - a * rq) - (qg * r - rq);
            Ok(res.norm() / (r.norm().max(rq.norm()) * z.norm_sqr().max(1.0)))
        })();
        residual.check(|| format!("draw {draw}"), outcome, 1e-12);
    }
    rep.line(
        "C9 partial-fraction expansion",
        grid.ok() && residual.ok(),
        format!("125-point grid against the product ratio: {}; R difference equation: {}", grid.summary(), residual.summary()),
    );
}

/// Whether halving the nodes per band moves the result by less than the
/// full-resolution error estimate. Unevaluable points count as failures.
fn honest(full: Result<EvalResult>, half: Result<EvalResult>) -> bool {
    match (full, half) {
        (Ok(f), Ok(h)) => (f.value - h.value).norm() < f.abs_err,
        _ => false,
    }
}

fn criterion_10(rep: &mut Report) {
    let qp = QuadraturePolicy::default();
    let hp = qp.halved();
    let mut counts = Vec::new();
    let mut tally = |name: &'static str, results: Vec<bool>| {
        let ok = results.iter().filter(|&&b| b).count();
        counts.push((name, ok, results.len()));
    };
    let mut moments = Vec::new();
    let mut singles = Vec::new();
    for kind in KINDS {
        for q in GRID_Q {
            let base = QBase::new(q).unwrap();
            for nu in GRID_NU {
                moments.push(honest(moment_identity(kind, c(nu), &base, &qp), moment_identity(kind, c(nu), &base, &hp)));
                for z in GRID_Z {
                    singles.push(honest(
                        k_integral_single(kind, c(nu), c(z), &base, &qp, &sp()),
                        k_integral_single(kind, c(nu), c(z), &base, &hp, &sp()),
                    ));
                }
            }
        }
    }
    let mut doubles = Vec::new();
    for kind in [FunctionKind::Second, FunctionKind::Third] {
        for q in [0.5, 0.7] {
            let base = QBase::new(q).unwrap();
            for nu in [0.5, 1.5] {
                for r in [0.4, 0.8] {
                    let z = Complex64::from_polar(r, 0.6);
                    for form in [DoubleForm::ExpXi, DoubleForm::HalfHalf] {
                        doubles.push(honest(
                            k_integral_double(kind, c(nu), z, &base, &qp, 64, form),
                            k_integral_double(kind, c(nu), z, &base, &hp, 64, form),
                        ));
                    }
                }
            }
        }
    }
    tally("moments", moments);
    tally("single integral", singles);
    tally("double integral", doubles);
    let ok = counts.iter().all(|&(_, pass, total)| total > 0 && pass as f64 >= 0.95 * total as f64);
    let detail = counts
        .iter()
        .map(|(name, pass, total)| format!("{name} {pass}/{total}"))
        .collect::<Vec<_>>()
        .join(", ");
    rep.line("C10 error-estimate honesty", ok, format!("halving moves the result by less than abs_err (>= 95% each): {detail}"));
}

fn main() {
    let start = Instant::now();
    let mut rep = Report { failed: Vec::new() };
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criterion_3(&mut rep);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    criterion_9(&mut rep);
    criterion_10(&mut rep);
    println!(
        "acceptance: {} of 10 criteria pass ({:.1}s){}",
        10 - rep.failed.len(),
        start.elapsed().as_secs_f64(),
        if rep.failed.is_empty() { String::new() } else { format!("; failing: {}", rep.failed.join(", ")) }
    );
    if std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") && !rep.failed.is_empty() {
        std::process::exit(1);
    }
}

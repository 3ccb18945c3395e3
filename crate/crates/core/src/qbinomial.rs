//! The q-binomial ratios `r(a, b, z, q)` and `R(a, b, gamma, z, q^2)`, the
//! partial-fraction expansion of the `R`-type ratio, and the `q -> 1` limit
//! of the difference equation `R` satisfies.

use num_complex::Complex64;

use crate::ddouble::{CDd, Dd};
use crate::error::{Error, Result};
use crate::qseries::{poch_ratio_inf, EvalResult, QBase, SeriesPolicy, Warning};

/// Parameters of `R(a, b, gamma, z, q^2) = (a z^2; q^2)_inf / (b z^2; q^2)_inf z^gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RParams {
    pub a: Complex64,
    pub b: Complex64,
    pub gamma: Complex64,
}

impl RParams {
    pub fn new(a: Complex64, b: Complex64, gamma: Complex64) -> Self {
        Self { a, b, gamma }
    }

    /// `a = epsilon q^{2 alpha}`, `b = epsilon q^{2 beta}` with `epsilon = +-1`.
    pub fn specialized(alpha: f64, beta: f64, epsilon: f64, gamma: Complex64, base: &QBase) -> Result<Self> {
        if epsilon != 1.0 && epsilon != -1.0 {
            return Err(Error::domain(format!("epsilon must be +1 or -1, got {epsilon}")));
        }
        let p = base.p();
        Ok(Self {
            a: Complex64::new(epsilon * p.powf(alpha), 0.0),
            b: Complex64::new(epsilon * p.powf(beta), 0.0),
            gamma,
        })
    }
}

fn ratio(a: Complex64, b: Complex64, base: f64) -> Result<EvalResult> {
    let (value, n) = poch_ratio_inf(a, b, base)
        .map_err(|e| match e {
            Error::Pole(_) => Error::pole(format!("denominator ({b}; {base})_inf vanishes")),
            other => other,
        })?;
    Ok(EvalResult::new(value, value.norm() * (2.0 * n as f64 + 4.0) * f64::EPSILON, n))
}

/// `r(a, b, z, q) = (a z; q)_inf / (b z; q)_inf`.
pub fn r_binomial(a: Complex64, b: Complex64, z: Complex64, base: f64) -> Result<EvalResult> {
    ratio(a * z, b * z, base)
}

/// `R(a, b, gamma, z, q^2)` with the principal branch of `z^gamma`.
pub fn big_r(params: &RParams, z: Complex64, base: &QBase) -> Result<EvalResult> {
    let zero = Complex64::new(0.0, 0.0);
    let z2 = z * z;
    let mut res = ratio(params.a * z2, params.b * z2, base.p())?;
    if params.gamma == zero {
        return Ok(res);
    }
    if z == zero {
        if params.gamma.re > 0.0 {
            return Ok(EvalResult::exact(zero));
        }
        return Err(Error::pole(format!("z^gamma is singular at z = 0 for gamma = {}", params.gamma)));
    }
    let power = (params.gamma * z.ln()).exp();
    res.value *= power;
    res.abs_err = res.abs_err * power.norm() + res.value.norm() * 4.0 * f64::EPSILON;
    Ok(res)
}

/// `z^2 [b q^gamma R(z) - a R(qz)] - [q^gamma R(z) - R(qz)]`, zero when `R` solves its difference equation.
pub fn r_difference_residual(params: &RParams, z: Complex64, base: &QBase) -> Result<Complex64> {
    let r = big_r(params, z, base)?.value;
    let rq = big_r(params, z * base.q(), base)?.value;
    let qg = base.pow(params.gamma);
    Ok(z * z * (params.b * qg * r - params.a * rq) - (qg * r - rq))
}

/// Flags a pole-proximity warning below this distance `|1 + z^2 q^{2 beta + 2k}|`.
const NEAR_POLE: f64 = 1e-6;

/// Partial-fraction expansion of `(-q^{2 alpha} z^2; q^2)_inf / (-q^{2 beta} z^2; q^2)_inf` for `alpha > beta`:
///
/// ```text
/// (p^{alpha-beta}; p)_inf / (p; p)_inf
///   * sum_k (p^{beta-alpha+1}; p)_k p^{(alpha-beta) k} / ((p; p)_k (1 + z^2 q^{2 beta + 2k})),   p = q^2.
/// ```
///
/// Each term is the residue of the product ratio at one of its simple poles.
pub fn partial_fraction_expansion(
    alpha: f64,
    beta: f64,
    z: Complex64,
    base: &QBase,
    policy: &SeriesPolicy,
) -> Result<EvalResult> {
    if !(alpha > beta) {
        return Err(Error::domain(format!("expansion needs alpha > beta, got alpha = {alpha}, beta = {beta}")));
    }
    let p = base.p();
    let d = alpha - beta;
    let w = z * z * p.powf(beta);
    let lattice_max = (w.norm()).max(1.0);
    // The terms can exceed their sum by many orders of magnitude, so the sum
    // is carried in double-double. `p^{1-d}` is formed as `p / p^d` from the
    // same `p^d`, and an integer gap uses the exact power so that the
    // coefficients vanish from `k = d` on.
    let n = d.round();
    let pdd = if (d - n).abs() <= 1e-14 * d.max(1.0) {
        (0..n as usize).fold(Dd::ONE, |acc, _| acc * Dd::from(p))
    } else {
        Dd::from(p.powf(d))
    };
    let pd = pdd.to_f64();
    let a = Dd::from(p) / pdd;
    let wd = CDd::from(w);
    let mut coef = Dd::ONE;
    let mut pk = Dd::ONE;
    let mut sum = CDd::ZERO;
    let mut abs_sum = 0.0;
    let mut nearest = f64::INFINITY;
    let mut small = 0;
    let mut prev = f64::INFINITY;
    let mut terms = 0;
    let mut tail = f64::NAN;
    for k in 0..policy.max_terms() {
        let den = CDd::ONE + wd * pk;
        let dist = den.norm();
        nearest = nearest.min(dist);
        if dist < 1e-14 * lattice_max {
            return Err(Error::pole(format!("z^2 = -q^(-2 beta - {}) is a pole of the expansion", 2 * k)));
        }
        let t = CDd::from(coef) / den;
        sum = sum + t;
        terms = k + 1;
        let tn = t.norm();
        abs_sum += tn;
        if coef.hi == 0.0 {
            tail = 0.0;
            break;
        }
        if tn <= policy.rel_tol() * sum.norm() && tn <= prev {
            small += 1;
            if small >= policy.consecutive_small() {
                // geometric tail with ratio at most p^d
                tail = tn * pd / (1.0 - pd);
                break;
            }
        } else {
            small = 0;
        }
        prev = tn;
        let mut factor = Dd::ONE - a * pk;
        if factor.to_f64().abs() < 1e-28 {
            factor = Dd::ZERO;
        }
        pk = pk * Dd::from(p);
        coef = coef * factor * pdd / (Dd::ONE - pk);
    }
    if tail.is_nan() {
        return Err(Error::non_convergence("partial-fraction expansion", sum.to_c64(), terms));
    }
    let (pref, n) = poch_ratio_inf(Complex64::new(pd, 0.0), Complex64::new(p, 0.0), p)?;
    let value = sum.to_c64() * pref;
    let sum_err = tail + 1e-30 * abs_sum + 8.0 * f64::EPSILON * sum.norm();
    let mut res = EvalResult::new(value, sum_err * pref.norm() + value.norm() * (2.0 * n as f64 + 4.0) * f64::EPSILON, terms);
    if nearest < NEAR_POLE * lattice_max {
        res.warn(Warning::NearPole);
        res.abs_err *= NEAR_POLE * lattice_max / nearest;
    }
    Ok(res)
}

/// Left side of the `q -> 1` limiting equation
/// `z (1 - eps z^2) R'(z) - [gamma + eps (2 alpha - 2 beta - gamma) z^2] R(z)`
/// with `R'` replaced by the q-derivative of the specialised `R`. Vanishes as `q -> 1`.
pub fn limit_ode_residual(alpha: f64, beta: f64, epsilon: f64, gamma: f64, z: f64, base: &QBase) -> Result<f64> {
    let params = RParams::specialized(alpha, beta, epsilon, Complex64::new(gamma, 0.0), base)?;
    let zc = Complex64::new(z, 0.0);
    let r = big_r(&params, zc, base)?.value;
    let rq = big_r(&params, zc * base.q(), base)?.value;
    let dr = (r - rq) / ((1.0 - base.q()) * z);
    let lhs = z * (1.0 - epsilon * z * z) * dr - (gamma + epsilon * (2.0 * alpha - 2.0 * beta - gamma) * z * z) * r;
    Ok(lhs.re)
}

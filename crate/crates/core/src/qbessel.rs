//! The q-Bessel family of three kinds.
//!
//! `bessel_i` and `bessel_k` take the scaled argument `z` and evaluate
//! `F((1 - q^2) z; q^2)`; `bessel_j` takes the raw argument `x` of
//! `J_nu(x, q)`. All three are built on one series,
//!
//! ```text
//! sum_k  sigma^k q^{(2 - delta) k (nu + k)} (1 - p)^k (z / 2)^{nu + 2k}
//!        / ((p; p)_k Gamma_p(nu + k + 1)),           p = q^2,
//! ```
//!
//! with `sigma = +1` for `I` and `sigma = -1` for `J`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qseries::{
    ln_poch_inf, q_exp_big, q_exp_small, q_gamma, q_gamma_recip_raw, sum_ratio_series, EvalResult, QBase,
    Scaled, SeriesPolicy, SeriesSum, Warning,
};

/// The kind `j` of a q-Bessel function and its exponent `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    /// Jackson's first function, `delta = 2`; meromorphic in `z`.
    First,
    /// Jackson's second function, `delta = 0`.
    Second,
    /// The Hahn-Exton function, `delta = 1`.
    Third,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 3] = [FunctionKind::First, FunctionKind::Second, FunctionKind::Third];

    pub fn from_j(j: u8) -> Result<Self> {
        match j {
            1 => Ok(FunctionKind::First),
            2 => Ok(FunctionKind::Second),
            3 => Ok(FunctionKind::Third),
            _ => Err(Error::domain(format!("kind must be 1, 2 or 3, got {j}"))),
        }
    }

    pub fn j(self) -> u8 {
        match self {
            FunctionKind::First => 1,
            FunctionKind::Second => 2,
            FunctionKind::Third => 3,
        }
    }

    pub fn delta(self) -> u8 {
        match self {
            FunctionKind::First => 2,
            FunctionKind::Second => 0,
            FunctionKind::Third => 1,
        }
    }

    /// `|1 - delta|`, the power of `A_nu` entering the Macdonald function.
    pub fn a_exponent(self) -> i32 {
        (1 - self.delta() as i32).abs()
    }
}

/// Order, argument and base for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselArgs {
    pub nu: Complex64,
    pub z: Complex64,
    pub base: QBase,
    /// Allow kind-1 evaluation outside the series disc through the
    /// product identity with the kind-2 function.
    pub continuation: bool,
}

impl BesselArgs {
    pub fn new(nu: Complex64, z: Complex64, base: QBase) -> Self {
        Self {
            nu,
            z,
            base,
            continuation: false,
        }
    }

    pub fn real(nu: f64, z: f64, q: f64) -> Result<Self> {
        Ok(Self::new(Complex64::new(nu, 0.0), Complex64::new(z, 0.0), QBase::new(q)?))
    }

    pub fn with_continuation(mut self, on: bool) -> Self {
        self.continuation = on;
        self
    }

    pub fn with_nu(mut self, nu: Complex64) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_z(mut self, z: Complex64) -> Self {
        self.z = z;
        self
    }
}

/// Within this fraction of the kind-1 radius the series is still preferred
/// over the product continuation.
const SERIES_FRACTION: f64 = 0.9;

fn negative_integer(nu: Complex64) -> Option<usize> {
    if nu.im == 0.0 && nu.re < 0.0 && nu.re.fract() == 0.0 {
        Some((-nu.re) as usize)
    } else {
        None
    }
}

/// The shared series in scaled form. `sigma` is `+1` for `I`, `-1` for `J`.
pub(crate) fn scaled_series(
    sigma: f64,
    delta: u8,
    nu: Complex64,
    z: Complex64,
    base: &QBase,
    policy: &SeriesPolicy,
) -> Result<SeriesSum> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let p = base.p();
    let k0 = negative_integer(nu).unwrap_or(0);
    if z == zero {
        let value = if nu == zero {
            one
        } else if nu.re > 0.0 || k0 > 0 {
            zero
        } else {
            return Err(Error::pole(format!("z^nu is singular at z = 0 for nu = {nu}")));
        };
        return Ok(SeriesSum {
            sum: Scaled::from_value(value),
            abs_err: 0.0,
            terms: 1,
        });
    }
    let gamma_exp = 2.0 - delta as f64;
    let half = z / 2.0;
    let ln_half = half.ln();
    let kf = k0 as f64;
    // log of the first nonzero term
    let (ln_pk, _) = ln_poch_inf(Complex64::new(p, 0.0), p)?;
    let (ln_pk_tail, _) = ln_poch_inf(Complex64::new(p.powi(k0 as i32 + 1), 0.0), p)?;
    let ln_poch_k0 = ln_pk - ln_pk_tail;
    let rg = q_gamma_recip_raw(nu + kf + 1.0, p);
    if rg == zero {
        return Err(Error::Degenerate(format!("reciprocal q-gamma vanished at nu = {nu}")));
    }
    let ln_first = (nu + kf) * kf * gamma_exp * base.ln_q() + kf * (1.0 - p).ln() + (nu + 2.0 * kf) * ln_half
        - ln_poch_k0
        + rg.ln();
    let mut first = Scaled::from_ln(ln_first);
    if sigma < 0.0 && k0 % 2 == 1 {
        first.mant = -first.mant;
    }
    let c = sigma * (1.0 - p) * (1.0 - p) * half * half;
    let qn = base.pow(nu);
    let pnu = qn * qn;
    let q = base.q();
    let mut pk1 = p.powi(k0 as i32 + 1);
    let mut qk = q.powi(2 * k0 as i32 + 1);
    let q2 = q * q;
    let ratio = |_n: usize| -> Result<Complex64> {
        let growth = match delta {
            2 => one,
            1 => qn * qk,
            _ => (qn * qk) * (qn * qk),
        };
        let r = c * growth / ((1.0 - pk1) * (one - pnu * pk1));
        pk1 *= p;
        qk *= q2;
        Ok(r)
    };
    sum_ratio_series(first, ratio, policy, "q-Bessel series")
}

/// Classifies a kind-1 argument against the series disc `|z| (1 - p) / 2 < 1`.
fn radius_fraction(z: Complex64, base: &QBase) -> f64 {
    z.norm() * (1.0 - base.p()) / 2.0
}

/// `((1 - p)^2 z^2 / 4 * sign; p)_inf` in log form: the factor linking kinds 1 and 2.
fn kind_link_ln(z: Complex64, base: &QBase, sign: f64) -> Result<Complex64> {
    let p = base.p();
    let w = sign * (1.0 - p) * (1.0 - p) * z * z / 4.0;
    let (ln, _) = ln_poch_inf(w, p).map_err(|_| {
        Error::pole(format!(
            "kind-1 function has a pole at z = {z} (base q = {})",
            base.q()
        ))
    })?;
    Ok(ln)
}

fn series_result(out: SeriesSum, policy: &SeriesPolicy) -> EvalResult {
    let mut res = out.into_result();
    if res.terms > policy.max_terms() / 2 {
        res.warn(Warning::SlowConvergence);
    }
    res
}

/// Evaluates the scaled family member in `Scaled` form, handling the kind-1 radius.
pub(crate) fn family_scaled(
    kind: FunctionKind,
    sigma: f64,
    nu: Complex64,
    z: Complex64,
    base: &QBase,
    policy: &SeriesPolicy,
    continuation: bool,
) -> Result<(SeriesSum, Vec<Warning>)> {
    let mut warnings = Vec::new();
    if kind != FunctionKind::First {
        return Ok((scaled_series(sigma, kind.delta(), nu, z, base, policy)?, warnings));
    }
    let frac = radius_fraction(z, base);
    if frac < 1.0 && (frac <= SERIES_FRACTION || !continuation) {
        if frac > SERIES_FRACTION {
            warnings.push(Warning::NearRadius);
        }
        return Ok((scaled_series(sigma, 2, nu, z, base, policy)?, warnings));
    }
    if !continuation {
        return Err(Error::domain(format!(
            "kind-1 series needs |z| < 2/(1-q^2) = {}, got |z| = {}",
            2.0 / (1.0 - base.p()),
            z.norm()
        )));
    }
    warnings.push(Warning::Continuation);
    let mut out = scaled_series(sigma, 0, nu, z, base, policy)?;
    let link = Scaled::from_ln(kind_link_ln(z, base, sigma)?);
    out.sum = out.sum.div(link);
    out.abs_err /= link.mant.norm();
    out.abs_err += out.sum.mant.norm() * 64.0 * f64::EPSILON;
    Ok((out, warnings))
}

/// Evaluates the kind-1 function through the product continuation regardless of `|z|`.
pub fn bessel_i_continued(nu: Complex64, z: Complex64, base: &QBase, policy: &SeriesPolicy) -> Result<EvalResult> {
    let mut out = scaled_series(1.0, 0, nu, z, base, policy)?;
    let link = Scaled::from_ln(kind_link_ln(z, base, 1.0)?);
    out.sum = out.sum.div(link);
    out.abs_err /= link.mant.norm();
    let mut res = series_result(out, policy);
    res.warn(Warning::Continuation);
    Ok(res)
}

/// `J_nu^(j)(x, q)` at the raw argument `x`.
///
/// The kind-3 function is normalised so that it oscillates on the real
/// axis, consistently with the rotation `I = e^{-i nu pi / 2} J(i z)`.
pub fn bessel_j(kind: FunctionKind, args: BesselArgs, policy: &SeriesPolicy) -> Result<EvalResult> {
    let half_base = QBase::new(args.base.q().sqrt())?;
    let z = args.z / (1.0 - args.base.q());
    let (out, warnings) = family_scaled(kind, -1.0, args.nu, z, &half_base, policy, args.continuation)?;
    let mut res = series_result(out, policy);
    res.absorb_warnings(&warnings);
    Ok(res)
}

/// `I_nu^(j)((1 - q^2) z; q^2)`.
pub fn bessel_i(kind: FunctionKind, args: BesselArgs, policy: &SeriesPolicy) -> Result<EvalResult> {
    let (out, warnings) = family_scaled(kind, 1.0, args.nu, args.z, &args.base, policy, args.continuation)?;
    let mut res = series_result(out, policy);
    res.absorb_warnings(&warnings);
    Ok(res)
}

/// `J_nu^(j)((1 - q^2) z; q^2)` in the scaled convention used by the integral representations.
pub fn bessel_j_scaled(kind: FunctionKind, args: BesselArgs, policy: &SeriesPolicy) -> Result<EvalResult> {
    let (out, warnings) = family_scaled(kind, -1.0, args.nu, args.z, &args.base, policy, args.continuation)?;
    let mut res = series_result(out, policy);
    res.absorb_warnings(&warnings);
    Ok(res)
}

/// `A_nu^2` in scaled form, as the ratio of kind-2 values at `z = 2 / (1 - q^2)`.
fn a_nu_squared(nu: Complex64, base: &QBase, policy: &SeriesPolicy) -> Result<(Scaled, f64)> {
    let z = Complex64::new(2.0 / (1.0 - base.p()), 0.0);
    let num = scaled_series(1.0, 0, nu, z, base, policy)?;
    let den = scaled_series(1.0, 0, -nu, z, base, policy)?;
    if den.sum.mant.norm() == 0.0 {
        return Err(Error::Degenerate(format!("I_(-nu)^(2)(2; q^2) vanishes at nu = {nu}")));
    }
    Ok((num.sum.div(den.sum), num.rel_err() + den.rel_err()))
}

/// The normalising constant `A_nu` (principal square root).
pub fn a_nu(nu: Complex64, base: &QBase, policy: &SeriesPolicy) -> Result<EvalResult> {
    if nu == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult::exact(Complex64::new(1.0, 0.0)));
    }
    let (sq, rel) = a_nu_squared(nu, base, policy)?;
    let value = sq.mant.sqrt() * (sq.ln_scale / 2.0).exp();
    if !(value.re.is_finite() && value.im.is_finite()) || value.norm() == 0.0 {
        return Err(Error::Degenerate(format!("A_nu is out of floating-point range at nu = {nu}")));
    }
    Ok(EvalResult::new(value, value.norm() * (rel / 2.0 + 4.0 * f64::EPSILON), 0))
}

/// Distance from `nu` to the integers below which `bessel_k` leaves the direct formula.
pub const INTEGER_SWITCH: f64 = 1e-3;

/// Offset used by the symmetric limit at integer order.
pub const INTEGER_OFFSET: f64 = 1e-5;

fn nearest_integer(nu: Complex64) -> (f64, Complex64) {
    let n = nu.re.round();
    (n, nu - n)
}

/// The Macdonald function from the defining combination of `I_{+-nu}`,
/// with no special handling near integer order.
pub fn bessel_k_direct(kind: FunctionKind, args: BesselArgs, policy: &SeriesPolicy) -> Result<EvalResult> {
    let nu = args.nu;
    let base = args.base;
    let (n, off) = nearest_integer(nu);
    if off == Complex64::new(0.0, 0.0) {
        return Err(Error::pole(format!(
            "direct formula is singular at integer order nu = {n}; use bessel_k"
        )));
    }
    // Gamma_p(nu) Gamma_p(1 - nu) via the reciprocal to avoid a second pole test
    let g1 = q_gamma(nu, &base)?;
    let g2 = q_gamma(1.0 - nu, &base)?;
    let pref = 0.5 * base.pow(-nu * nu + nu) * g1.value * g2.value;
    let e = kind.a_exponent();
    let (a_sq, a_rel) = if e == 0 {
        (Scaled::from_value(Complex64::new(1.0, 0.0)), 0.0)
    } else {
        a_nu_squared(nu, &base, policy)?
    };
    // A_nu^e and A_{-nu}^e = A_nu^{-e}, kept in scaled form
    let a = Scaled {
        mant: a_sq.mant.sqrt(),
        ln_scale: a_sq.ln_scale / 2.0,
    };
    let (i_neg, w1) = family_scaled(kind, 1.0, -nu, args.z, &base, policy, args.continuation)?;
    let (i_pos, w2) = family_scaled(kind, 1.0, nu, args.z, &base, policy, args.continuation)?;
    let t1 = if e == 0 { i_neg.sum } else { i_neg.sum.mul(a) };
    let t2 = if e == 0 { i_pos.sum } else { i_pos.sum.div(a) };
    let ln = t1.ln_scale.max(t2.ln_scale);
    let m1 = t1.at_scale(ln);
    let m2 = t2.at_scale(ln);
    let bracket = m1 - m2;
    let scale = ln.exp();
    let value = pref * bracket * scale;
    let terms_mag = (m1.norm() + m2.norm()) * scale * pref.norm();
    let err = pref.norm()
        * scale
        * (m1.norm() * (i_neg.rel_err() + a_rel / 2.0) + m2.norm() * (i_pos.rel_err() + a_rel / 2.0))
        + value.norm() * (g1.rel_err() + g2.rel_err())
        + terms_mag * 8.0 * f64::EPSILON;
    let mut res = EvalResult::new(value, err, i_neg.terms + i_pos.terms);
    res.absorb_warnings(&w1);
    res.absorb_warnings(&w2);
    if bracket.norm() < 1e-6 * (m1.norm() + m2.norm()) {
        res.warn(Warning::Cancellation);
    }
    Ok(res)
}

/// The q-Bessel-Macdonald function `K_nu^(j)((1 - q^2) z; q^2)`.
///
/// At integer order the value is the limit of the defining formula: `K` is
/// evaluated at `n - h` and `n + h` and interpolated linearly to `nu`, which
/// at `nu = n` is their mean. The same path is taken whenever `nu` is within
/// `h` of an integer; between `h` and [`INTEGER_SWITCH`] the direct formula is
/// used with a cancellation warning.
pub fn bessel_k(kind: FunctionKind, args: BesselArgs, policy: &SeriesPolicy) -> Result<EvalResult> {
    let (n, off) = nearest_integer(args.nu);
    let h = INTEGER_OFFSET;
    if off.norm() >= h {
        let mut res = bessel_k_direct(kind, args, policy)?;
        if off.norm() < INTEGER_SWITCH {
            res.warn(Warning::Cancellation);
        }
        return Ok(res);
    }
    let lo = bessel_k_direct(kind, args.with_nu(Complex64::new(n - h, 0.0)), policy)?;
    let hi = bessel_k_direct(kind, args.with_nu(Complex64::new(n + h, 0.0)), policy)?;
    let t = (off + h) / (2.0 * h);
    let value = lo.value + t * (hi.value - lo.value);
    let err = lo.abs_err.max(hi.abs_err) + h * (hi.value - lo.value).norm() + h * h * value.norm();
    let mut res = EvalResult::new(value, err, lo.terms + hi.terms);
    res.absorb_warnings(&lo.warnings);
    res.absorb_warnings(&hi.warnings);
    res.warnings.retain(|w| *w != Warning::Cancellation);
    res.warn(Warning::IntegerOrderLimit);
    Ok(res)
}

/// Left side minus right side of the model second-order difference equation
/// for kind `delta`, applied to `f` at `z`.
pub fn difference_residual<F>(kind: FunctionKind, f: F, nu: Complex64, z: Complex64, base: &QBase) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let q = base.q();
    let p = base.p();
    let d = kind.delta() as i32;
    let shift = q.powi(1 - d);
    let lhs = f(z / q)? - (base.pow(-nu) + base.pow(nu)) * f(z)? + f(z * q)?;
    let rhs = q.powi(-d) * (1.0 - p) * (1.0 - p) / 4.0 * z * z * f(z * shift)?;
    Ok(lhs - rhs)
}

/// `max(|f(z/q)|, |f(z)|, |f(qz)|)`, the scale a residual is measured against.
pub fn residual_scale<F>(f: F, z: Complex64, base: &QBase) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let q = base.q();
    Ok(f(z / q)?.norm().max(f(z)?.norm()).max(f(z * q)?.norm()))
}

/// `W(f1, f2)(z) = f1(z) f2(qz) - f1(qz) f2(z)`.
pub fn q_wronskian<F1, F2>(f1: F1, f2: F2, z: Complex64, base: &QBase) -> Result<Complex64>
where
    F1: Fn(Complex64) -> Result<Complex64>,
    F2: Fn(Complex64) -> Result<Complex64>,
{
    let qz = z * base.q();
    Ok(f1(z)? * f2(qz)? - f1(qz)? * f2(z)?)
}

/// Constant in front of the closed-form Wronskian `W(I_nu, K_nu)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WronskianNorm {
    /// `q^{-nu} (1 - q^2) / 2`, as displayed in the original derivation.
    Displayed,
    /// `q^{-nu^2} (1 - q^2) / 2`, which the small-`z` expansions of `I` and `K` force.
    Derived,
}

/// Closed form of `W(I_nu^(j), K_nu^(j))(z)`.
///
/// Kind 1 carries `A_nu e_{q^2}((1-q^2)^2 z^2 / 4)`, kind 2 carries
/// `A_nu E_{q^2}(-(1-q^2)^2 q^2 z^2 / 4)` and kind 3 is constant.
pub fn wronskian_closed_form(
    kind: FunctionKind,
    nu: Complex64,
    z: Complex64,
    base: &QBase,
    norm: WronskianNorm,
    policy: &SeriesPolicy,
) -> Result<EvalResult> {
    let p = base.p();
    let c = match norm {
        WronskianNorm::Displayed => base.pow(-nu),
        WronskianNorm::Derived => base.pow(-nu * nu),
    } * (1.0 - p)
        / 2.0;
    let w = (1.0 - p) * (1.0 - p) * z * z / 4.0;
    let (factor, rel) = match kind {
        FunctionKind::Third => (Complex64::new(1.0, 0.0), 0.0),
        FunctionKind::First => {
            let a = a_nu(nu, base, policy)?;
            let e = q_exp_small(w, p, policy)?;
            (a.value * e.value, a.rel_err() + e.rel_err())
        }
        FunctionKind::Second => {
            let a = a_nu(nu, base, policy)?;
            let e = q_exp_big(-w * p, p, policy)?;
            (a.value * e.value, a.rel_err() + e.rel_err())
        }
    };
    let value = c * factor;
    Ok(EvalResult::new(value, value.norm() * (rel + 8.0 * f64::EPSILON), 0))
}

/// `J_0^(j)((1 - q^2) w; q^2)` for real or complex `w`; kind 1 is continued
/// past its disc automatically. Used by the quadrature integrands, so a
/// value whose series has lost its digits is an error rather than noise.
pub(crate) fn j0_scaled(kind: FunctionKind, w: Complex64, base: &QBase, policy: &SeriesPolicy) -> Result<Complex64> {
    let (out, _) = family_scaled(kind, -1.0, Complex64::new(0.0, 0.0), w, base, policy, true)?;
    let value = out.sum.value();
    if out.abs_err_value() > J0_LOSS_LIMIT * value.norm().max(1.0) {
        return Err(Error::non_convergence(
            format!("J_0 at (1-q^2) w, w = {w}: series lost its digits to cancellation"),
            value,
            out.terms,
        ));
    }
    Ok(value)
}

/// Largest error estimate, relative to `max(1, |J_0|)`, accepted inside integrands.
const J0_LOSS_LIMIT: f64 = 1e-6;

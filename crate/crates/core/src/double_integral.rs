//! The Gaussian-damped q-exponentials `xi_eta^(delta)`, the angular integral
//! that reproduces `J_0^(j)`, and the double-integral representation of `K`.
//!
//! With `s = rho e^{i phi}` and `z = r e^{i psi}`, the product of two `xi`
//! factors at `i r rho e^{-+i(psi + phi)}` averaged over `phi` equals
//! `J_0^(j)((1 - q^2) 2 r rho; q^2)`, term by term, wherever both `xi`
//! series converge. Substituting this into the single-integral
//! representation gives the double integral, with the complex measure
//! realised as `2 rho d rho d phi`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qbessel::{j0_scaled, FunctionKind};
use crate::qseries::{q_exp_small, sum_ratio_series, EvalResult, QBase, Scaled, SeriesPolicy, Warning};
use crate::quadrature::{integrate_below, single_prefactor, weight_f, QuadraturePolicy, WeightParams};

/// Parameters of `xi_eta^(delta)(s) = sum_n q^{(2 - delta) eta n^2} (1 - q^2)^n s^n / (q^2; q^2)_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiParams {
    eta: f64,
    delta: u8,
    base: QBase,
}

impl XiParams {
    pub fn new(eta: f64, delta: u8, base: QBase) -> Result<Self> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::domain(format!("eta must be non-negative, got {eta}")));
        }
        if delta > 2 {
            return Err(Error::domain(format!("delta must be 0, 1 or 2, got {delta}")));
        }
        Ok(Self { eta, delta, base })
    }

    pub fn for_kind(eta: f64, kind: FunctionKind, base: QBase) -> Result<Self> {
        Self::new(eta, kind.delta(), base)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn delta(&self) -> u8 {
        self.delta
    }

    pub fn base(&self) -> &QBase {
        &self.base
    }

    /// The Gaussian exponent `(2 - delta) eta`; zero means a finite radius.
    pub fn damping(&self) -> f64 {
        (2.0 - self.delta as f64) * self.eta
    }

    /// `1 / (1 - q^2)` when the series has a finite radius.
    pub fn radius(&self) -> Option<f64> {
        if self.damping() == 0.0 {
            Some(1.0 / (1.0 - self.base.p()))
        } else {
            None
        }
    }
}

/// Sums the defining series; without damping, points outside the disc are
/// evaluated as `e_{q^2}((1 - q^2) s)`, which the series equals inside it.
pub fn xi(params: &XiParams, s: Complex64, policy: &SeriesPolicy) -> Result<EvalResult> {
    let p = params.base.p();
    if let Some(radius) = params.radius() {
        if s.norm() >= 0.5 * radius {
            let mut r = q_exp_small((1.0 - p) * s, p, policy)?;
            r.warn(Warning::Continuation);
            return Ok(r);
        }
    }
    let g = params.damping();
    let q = params.base.q();
    let qg = q.powf(g);
    let q2g = qg * qg;
    let mut growth = qg;
    let mut pk = p;
    let c = (1.0 - p) * s;
    let ratio = |_n: usize| -> Result<Complex64> {
        let r = c * growth / (1.0 - pk);
        growth *= q2g;
        pk *= p;
        Ok(r)
    };
    Ok(sum_ratio_series(Scaled::from_value(Complex64::new(1.0, 0.0)), ratio, policy, "xi series")?.into_result())
}

/// Point in polar form: `s = rho e^{i phi}`, `z = r e^{i psi}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub rho: f64,
    pub phi: f64,
    pub r: f64,
    pub psi: f64,
}

impl PolarPoint {
    pub fn new(rho: f64, phi: f64, r: f64, psi: f64) -> Result<Self> {
        if !(rho >= 0.0 && r >= 0.0) {
            return Err(Error::domain("moduli must be non-negative"));
        }
        Ok(Self { rho, phi, r, psi })
    }

    pub fn s(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.phi)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.psi)
    }
}

/// Which pair of `xi` factors the angular integral uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMode {
    /// `xi_{1/2} * xi_{1/2}`; entire for kinds 2 and 3.
    HalfHalf,
    /// `xi_0 * xi_1`; `xi_0 = e_{q^2}((1 - q^2) s)` limits `r rho < 1 / (1 - q^2)`.
    ZeroOne,
}

impl EtaMode {
    fn etas(self) -> (f64, f64) {
        match self {
            EtaMode::HalfHalf => (0.5, 0.5),
            EtaMode::ZeroOne => (0.0, 1.0),
        }
    }
}

/// Two forms of the double-integral representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoubleForm {
    /// `e_{q^2}(i (1 - q^2) conj(z s)) * xi_1(i z s)`.
    ExpXi,
    /// `xi_{1/2}(i conj(z s)) * xi_{1/2}(i z s)`.
    HalfHalf,
}

impl DoubleForm {
    pub fn mode(self) -> EtaMode {
        match self {
            DoubleForm::ExpXi => EtaMode::ZeroOne,
            DoubleForm::HalfHalf => EtaMode::HalfHalf,
        }
    }
}

/// Largest `r rho` for which the angular identity holds, if any.
pub fn angular_radius(kind: FunctionKind, mode: EtaMode, base: &QBase) -> Option<f64> {
    if kind == FunctionKind::First || mode == EtaMode::ZeroOne {
        Some(1.0 / (1.0 - base.p()))
    } else {
        None
    }
}

/// `(1 / 2 pi) int_{-pi}^{pi} xi_a(i r rho e^{-i(psi + phi)}) xi_b(i r rho e^{i(psi + phi)}) d phi`
/// by the `nodes`-point trapezoidal rule; equals `J_0^(j)((1 - q^2) 2 r rho; q^2)`.
///
/// The error estimate is the change from the rule on every other node.
pub fn angular_j0(
    kind: FunctionKind,
    r_rho: f64,
    psi: f64,
    mode: EtaMode,
    base: &QBase,
    nodes: usize,
) -> Result<EvalResult> {
    angular_j0_with(kind, r_rho, psi, mode, base, nodes, &SeriesPolicy::default())
}

pub(crate) fn angular_j0_with(
    kind: FunctionKind,
    r_rho: f64,
    psi: f64,
    mode: EtaMode,
    base: &QBase,
    nodes: usize,
    policy: &SeriesPolicy,
) -> Result<EvalResult> {
    if nodes < 8 || nodes % 2 == 1 {
        return Err(Error::domain(format!("angular rule needs an even node count of at least 8, got {nodes}")));
    }
    if !(r_rho >= 0.0) {
        return Err(Error::domain(format!("r rho must be non-negative, got {r_rho}")));
    }
    if let Some(radius) = angular_radius(kind, mode, base) {
        if r_rho >= radius {
            return Err(Error::domain(format!(
                "angular identity needs r rho < 1/(1-q^2) = {radius} for this kind and mode, got {r_rho}"
            )));
        }
    }
    let (ea, eb) = mode.etas();
    let xa = XiParams::for_kind(ea, kind, *base)?;
    let xb = XiParams::for_kind(eb, kind, *base)?;
    let i = Complex64::new(0.0, 1.0);
    let mut full = Complex64::new(0.0, 0.0);
    let mut even = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for k in 0..nodes {
        let theta = psi - PI + 2.0 * PI * k as f64 / nodes as f64;
        let a = xi(&xa, i * r_rho * Complex64::from_polar(1.0, -theta), policy)?.value;
        let b = xi(&xb, i * r_rho * Complex64::from_polar(1.0, theta), policy)?.value;
        let v = a * b;
        full += v;
        abs_sum += v.norm();
        if k % 2 == 0 {
            even += v;
        }
    }
    let n = nodes as f64;
    let value = full / n;
    let half = even / (n / 2.0);
    let err = (value - half).norm() + 4.0 * f64::EPSILON * abs_sum / n;
    let mut res = EvalResult::new(value, err, nodes);
    if let Some(radius) = angular_radius(kind, mode, base) {
        if r_rho > 0.9 * radius {
            res.warn(Warning::NearRadius);
        }
    }
    Ok(res)
}

fn double_prefactor(kind: FunctionKind, nu: Complex64, z: Complex64, base: &QBase, spolicy: &SeriesPolicy) -> Result<(Complex64, f64)> {
    if !(nu.re > 0.0) {
        return Err(Error::domain(format!("double-integral representation needs Re nu > 0, got {nu}")));
    }
    if z.norm() == 0.0 {
        return Err(Error::domain("double-integral representation needs z != 0"));
    }
    // the single-integral prefactor over 4 pi: 1/(8 pi) in front, 2 rho d rho d phi as the measure
    let (pref, rel) = single_prefactor(kind, nu, base, spolicy)?;
    Ok((pref / (4.0 * PI) * (-nu * z.norm().ln()).exp(), rel))
}

/// The double-integral representation of `K_nu^(j)(2 (1 - q^2) |z|; q^2)`, i.e.
/// of `bessel_k` at the scaled argument `2|z|`.
///
/// The radial integral runs over all `rho`, so forms or kinds whose angular
/// identity is limited to `r rho < 1 / (1 - q^2)` are rejected with
/// [`Error::Domain`]. For the remaining cases the radial integral inherits
/// the growth of `J_0^(j)` and is reported as non-convergent when it fails
/// to settle.
pub fn k_integral_double(
    kind: FunctionKind,
    nu: Complex64,
    z: Complex64,
    base: &QBase,
    qpolicy: &QuadraturePolicy,
    nodes_angular: usize,
    form: DoubleForm,
) -> Result<EvalResult> {
    let mode = form.mode();
    if let Some(radius) = angular_radius(kind, mode, base) {
        return Err(Error::domain(format!(
            "the angular identity for this kind and form only holds for r rho < {radius}; the radial integral needs all rho"
        )));
    }
    let spolicy = SeriesPolicy::default();
    let params = WeightParams::new(nu, kind, *base)?;
    let (pref, pref_rel) = double_prefactor(kind, nu, z, base, &spolicy)?;
    let r = z.norm();
    let psi = z.arg();
    let radial = |rho: f64| -> Result<Complex64> {
        let ang = angular_j0_with(kind, r * rho, psi, mode, base, nodes_angular, &spolicy)?.value;
        Ok(weight_f(&params, rho)? * 2.0 * rho * 2.0 * PI * ang)
    };
    let integral = crate::quadrature::integrate_bands(
        radial,
        qpolicy.ratio_for_base(base),
        qpolicy,
        "double-integral representation",
    )?;
    let value = pref * integral.value;
    let err = pref.norm() * integral.abs_err + value.norm() * (pref_rel + 8.0 * f64::EPSILON);
    let mut res = EvalResult::new(value, err, integral.terms * nodes_angular);
    res.absorb_warnings(&integral.warnings);
    Ok(res)
}

/// The double integral restricted to `rho <= rho_max`. Its single-integral
/// counterpart is `k_integral_single_truncated` at `s_max = rho_max` and
/// argument `2|z|`; the two agree wherever the angular identity holds.
#[allow(clippy::too_many_arguments)]
pub fn k_integral_double_truncated(
    kind: FunctionKind,
    nu: Complex64,
    z: Complex64,
    rho_max: f64,
    base: &QBase,
    qpolicy: &QuadraturePolicy,
    nodes_angular: usize,
    form: DoubleForm,
) -> Result<EvalResult> {
    let mode = form.mode();
    let r = z.norm();
    if let Some(radius) = angular_radius(kind, mode, base) {
        if r * rho_max >= radius {
            return Err(Error::domain(format!(
                "cut-off r rho_max = {} exceeds the angular radius {radius}",
                r * rho_max
            )));
        }
    }
    let spolicy = SeriesPolicy::default();
    let params = WeightParams::new(nu, kind, *base)?;
    let (pref, pref_rel) = double_prefactor(kind, nu, z, base, &spolicy)?;
    let psi = z.arg();
    let radial = |rho: f64| -> Result<Complex64> {
        let ang = angular_j0_with(kind, r * rho, psi, mode, base, nodes_angular, &spolicy)?.value;
        Ok(weight_f(&params, rho)? * 2.0 * rho * 2.0 * PI * ang)
    };
    let integral = integrate_below(radial, rho_max, qpolicy.ratio_for_base(base), qpolicy, "truncated double integral")?;
    let value = pref * integral.value;
    let err = pref.norm() * integral.abs_err + value.norm() * (pref_rel + 8.0 * f64::EPSILON);
    Ok(EvalResult::new(value, err, integral.terms * nodes_angular))
}

/// `J_0^(j)((1 - q^2) 2 r rho; q^2)` from the Bessel series, for comparison with [`angular_j0`].
pub fn j0_reference(kind: FunctionKind, r_rho: f64, base: &QBase) -> Result<Complex64> {
    j0_scaled(kind, Complex64::new(2.0 * r_rho, 0.0), base, &SeriesPolicy::default())
}

//! Banded Gauss-Legendre quadrature on `(0, inf)` and the integrals built on it:
//! the single-integral representation of `K`, the weight moment, and the two
//! lemmas about integrals of q-derivatives.
//!
//! The half-line is cut at an anchor `S0` into geometric bands
//! `[S0 r^{m+1}, S0 r^m]` (downward) and `[S0 r^{-m}, S0 r^{-m-1}]` (upward).
//! Each band is integrated with `n` and `n/2` nodes; their difference is the
//! band's error estimate. A side stops once three consecutive bands fall below
//! `tail_rel_cutoff` relative to the running total, or once Wynn's epsilon
//! algorithm applied to the side's partial sums has stabilised. A side whose
//! band contributions keep growing is reported as non-convergent.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss::GaussRule;
use crate::qbessel::{a_nu, j0_scaled, FunctionKind};
use crate::qseries::{poch_ratio_inf, q_gamma, EvalResult, QBase, SeriesPolicy, Warning};

/// Band layout and stopping rule for semi-infinite integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePolicy {
    nodes_per_band: usize,
    band_ratio: Option<f64>,
    tail_rel_cutoff: f64,
    max_bands: usize,
    anchor: f64,
}

impl Default for QuadraturePolicy {
    fn default() -> Self {
        Self {
            nodes_per_band: 32,
            band_ratio: None,
            tail_rel_cutoff: 1e-15,
            max_bands: 400,
            anchor: 1.0,
        }
    }
}

/// Band ratio used by [`integrate_semi_infinite`] when none is set.
pub const GENERIC_BAND_RATIO: f64 = 0.5;

/// Automatic band ratios for q-structured integrands are the smallest power of `q` not above this.
const MAX_AUTO_RATIO: f64 = 0.75;

impl QuadraturePolicy {
    /// `band_ratio = None` selects a power of `q` for q-structured integrands
    /// and [`GENERIC_BAND_RATIO`] otherwise.
    pub fn new(nodes_per_band: usize, band_ratio: Option<f64>, tail_rel_cutoff: f64, max_bands: usize) -> Result<Self> {
        if nodes_per_band < 2 {
            return Err(Error::domain(format!("nodes_per_band must be at least 2, got {nodes_per_band}")));
        }
        if let Some(r) = band_ratio {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::domain(format!("band_ratio must lie in (0, 1), got {r}")));
            }
        }
        if !(tail_rel_cutoff > 0.0) {
            return Err(Error::domain(format!("tail_rel_cutoff must be positive, got {tail_rel_cutoff}")));
        }
        if max_bands == 0 {
            return Err(Error::domain("max_bands must be at least 1"));
        }
        Ok(Self {
            nodes_per_band,
            band_ratio,
            tail_rel_cutoff,
            max_bands,
            anchor: 1.0,
        })
    }

    pub fn with_anchor(mut self, anchor: f64) -> Result<Self> {
        if !(anchor > 0.0 && anchor.is_finite()) {
            return Err(Error::domain(format!("band anchor must be positive, got {anchor}")));
        }
        self.anchor = anchor;
        Ok(self)
    }

    /// Same policy with half the nodes per band (at least 2).
    pub fn halved(mut self) -> Self {
        self.nodes_per_band = (self.nodes_per_band / 2).max(2);
        self
    }

    pub fn with_nodes(mut self, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("nodes_per_band must be at least 2, got {n}")));
        }
        self.nodes_per_band = n;
        Ok(self)
    }

    pub fn nodes_per_band(&self) -> usize {
        self.nodes_per_band
    }

    pub fn band_ratio(&self) -> Option<f64> {
        self.band_ratio
    }

    pub fn tail_rel_cutoff(&self) -> f64 {
        self.tail_rel_cutoff
    }

    pub fn max_bands(&self) -> usize {
        self.max_bands
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// Ratio for an integrand whose scale structure is geometric in `q`.
    pub fn ratio_for_base(&self, base: &QBase) -> f64 {
        self.band_ratio.unwrap_or_else(|| {
            let q = base.q();
            let m = (MAX_AUTO_RATIO.ln() / q.ln()).ceil().max(1.0);
            q.powi(m as i32)
        })
    }
}

/// Wynn's epsilon algorithm; returns the deepest even-column entry.
fn wynn_epsilon(s: &[Complex64]) -> Complex64 {
    let n = s.len();
    let mut older = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur = s.to_vec();
    let mut best = s[n - 1];
    for col in 1..n {
        let mut next = Vec::with_capacity(n - col);
        for i in 0..n - col {
            let d = cur[i + 1] - cur[i];
            if d.norm() < 1e-300 {
                return if col % 2 == 1 { cur[i + 1] } else { best };
            }
            next.push(older[i + 1] + d.inv());
        }
        older = cur;
        cur = next;
        if col % 2 == 0 {
            best = cur[cur.len() - 1];
        }
    }
    best
}

const WYNN_WINDOW: usize = 16;
const WYNN_START: usize = 8;
const DIVERGENCE_RUN: usize = 6;

struct Side {
    value: Complex64,
    band_err: f64,
    abs_sum: f64,
    tail_err: f64,
    evals: usize,
    extrapolated: bool,
}

fn integrate_side<F>(
    f: &F,
    hi: &GaussRule,
    lo: &GaussRule,
    edges: impl Fn(usize) -> (f64, f64),
    policy: &QuadraturePolicy,
    other: Complex64,
    what: &str,
) -> Result<Side>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let zero = Complex64::new(0.0, 0.0);
    let cutoff = policy.tail_rel_cutoff;
    let ext_tol = (100.0 * cutoff).max(1e-13);
    let mut sum = zero;
    let mut band_err = 0.0;
    let mut abs_sum = 0.0;
    let mut partials: Vec<Complex64> = Vec::new();
    let mut mags: Vec<f64> = Vec::new();
    let mut run = 0;
    let mut ext_prev: Option<Complex64> = None;
    let mut ext_diffs: Vec<f64> = Vec::new();
    let mut evals = 0;
    for m in 0..policy.max_bands {
        let (a, b) = edges(m);
        let bh: Complex64 = hi.integrate(a, b, &f)?;
        let bl: Complex64 = lo.integrate(a, b, &f)?;
        evals += hi.nodes.len() + lo.nodes.len();
        if !(bh.re.is_finite() && bh.im.is_finite()) {
            return Err(Error::non_convergence(format!("{what}: non-finite band"), other + sum, m + 1));
        }
        band_err += (bh - bl).norm();
        sum += bh;
        abs_sum += bh.norm();
        partials.push(sum);
        mags.push(bh.norm());
        let total = (other + sum).norm();
        if bh.norm() <= cutoff * total {
            run += 1;
        } else {
            run = 0;
        }
        if run >= 3 {
            let r = if m > 0 && mags[m - 1] > 0.0 { mags[m] / mags[m - 1] } else { 0.5 };
            let tail = if r < 1.0 { mags[m] * r / (1.0 - r) } else { mags[m] };
            return Ok(Side {
                value: sum,
                band_err,
                abs_sum,
                tail_err: tail,
                evals,
                extrapolated: false,
            });
        }
        let k = mags.len();
        if k >= DIVERGENCE_RUN + 2 && mags[k - 1] > 1e-3 * total {
            let growing = (k - DIVERGENCE_RUN..k).all(|i| mags[i] > mags[i - 1]);
            if growing {
                return Err(Error::non_convergence(
                    format!("{what}: tail does not decay"),
                    other + sum,
                    m + 1,
                ));
            }
        }
        if m + 1 >= WYNN_START && (k - 4..k).all(|i| mags[i] < mags[i - 1]) {
            let start = partials.len().saturating_sub(WYNN_WINDOW);
            let e = wynn_epsilon(&partials[start..]);
            if let Some(prev) = ext_prev {
                let d = (e - prev).norm();
                ext_diffs.push(d);
                let n = ext_diffs.len();
                if n >= 2 && ext_diffs[n - 1] <= ext_tol * total && ext_diffs[n - 2] <= ext_tol * total {
                    let tail = 4.0 * ext_diffs[n - 1].max(ext_diffs[n - 2]) + 64.0 * f64::EPSILON * e.norm();
                    return Ok(Side {
                        value: e,
                        band_err,
                        abs_sum,
                        tail_err: tail,
                        evals,
                        extrapolated: true,
                    });
                }
            }
            ext_prev = Some(e);
        } else {
            ext_prev = None;
            ext_diffs.clear();
        }
    }
    Err(Error::non_convergence(format!("{what}: band limit reached"), other + sum, policy.max_bands))
}

/// Integrates over `(0, inf)` with geometric bands of ratio `ratio` around the policy anchor.
pub(crate) fn integrate_bands<F>(f: F, ratio: f64, policy: &QuadraturePolicy, what: &str) -> Result<EvalResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let hi = GaussRule::new(policy.nodes_per_band);
    let lo = GaussRule::new((policy.nodes_per_band / 2).max(1));
    let s0 = policy.anchor;
    let down = integrate_side(
        &f,
        &hi,
        &lo,
        |m| (s0 * ratio.powi(m as i32 + 1), s0 * ratio.powi(m as i32)),
        policy,
        Complex64::new(0.0, 0.0),
        what,
    )?;
    let up = integrate_side(
        &f,
        &hi,
        &lo,
        |m| (s0 * ratio.powi(-(m as i32)), s0 * ratio.powi(-(m as i32) - 1)),
        policy,
        down.value,
        what,
    )?;
    let value = down.value + up.value;
    let err = down.band_err
        + up.band_err
        + down.tail_err
        + up.tail_err
        + 8.0 * f64::EPSILON * (down.abs_sum + up.abs_sum);
    let mut res = EvalResult::new(value, err, down.evals + up.evals);
    if down.extrapolated || up.extrapolated {
        res.warn(Warning::TailExtrapolated);
    }
    Ok(res)
}

/// Integrates over `(0, top]` with bands `[top r^{m+1}, top r^m]`.
pub(crate) fn integrate_below<F>(f: F, top: f64, ratio: f64, policy: &QuadraturePolicy, what: &str) -> Result<EvalResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let hi = GaussRule::new(policy.nodes_per_band);
    let lo = GaussRule::new((policy.nodes_per_band / 2).max(1));
    let side = integrate_side(
        &f,
        &hi,
        &lo,
        |m| (top * ratio.powi(m as i32 + 1), top * ratio.powi(m as i32)),
        policy,
        Complex64::new(0.0, 0.0),
        what,
    )?;
    let err = side.band_err + side.tail_err + 8.0 * f64::EPSILON * side.abs_sum;
    let mut res = EvalResult::new(side.value, err, side.evals);
    if side.extrapolated {
        res.warn(Warning::TailExtrapolated);
    }
    Ok(res)
}

/// `int_0^inf f(x) dx` for an absolutely integrable `f`.
pub fn integrate_semi_infinite<F>(f: F, policy: &QuadraturePolicy) -> Result<EvalResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    integrate_bands(f, policy.band_ratio.unwrap_or(GENERIC_BAND_RATIO), policy, "semi-infinite quadrature")
}

/// Order, kind and base of the weight `f_nu^(j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub nu: Complex64,
    pub kind: FunctionKind,
    pub base: QBase,
}

impl WeightParams {
    pub fn new(nu: Complex64, kind: FunctionKind, base: QBase) -> Result<Self> {
        if !(nu.re > 0.0) {
            return Err(Error::domain(format!("weight needs Re nu > 0, got nu = {nu}")));
        }
        Ok(Self { nu, kind, base })
    }
}

/// `f_nu^(j)(s) = (-q^{2 nu + 2 - delta nu} s^2; q^2)_inf / (-q^{-delta nu} s^2; q^2)_inf`.
///
/// Real and strictly positive for real `nu > 0`; the denominator only
/// vanishes at imaginary `s`.
pub fn weight_f(params: &WeightParams, s: f64) -> Result<Complex64> {
    weight_eval(params, s).map(|r| r.value)
}

/// [`weight_f`] with a roundoff bound from the number of product factors used.
pub fn weight_eval(params: &WeightParams, s: f64) -> Result<EvalResult> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("weight is defined for s >= 0, got {s}")));
    }
    let base = &params.base;
    let d = params.kind.delta() as f64;
    let nu = params.nu;
    let s2 = s * s;
    let a = -base.pow(2.0 * nu + 2.0 - d * nu) * s2;
    let b = -base.pow(-d * nu) * s2;
    let (value, n) = poch_ratio_inf(a, b, base.p())?;
    Ok(EvalResult::new(value, value.norm() * (2.0 * n as f64 + 4.0) * f64::EPSILON, n))
}

/// `q^{-delta nu} s^2 [-f(s) + q^{2nu+2} f(qs)] - [f(s) - f(qs)]`, zero for the weight.
pub fn weight_difference_residual(params: &WeightParams, s: f64) -> Result<Complex64> {
    let base = &params.base;
    let d = params.kind.delta() as f64;
    let nu = params.nu;
    let f0 = weight_f(params, s)?;
    let f1 = weight_f(params, s * base.q())?;
    Ok(base.pow(-d * nu) * s * s * (-f0 + base.pow(2.0 * nu + 2.0) * f1) - (f0 - f1))
}

/// Closed form of `int_0^inf f_nu^(j)(s) s ds`: `-q^{delta nu} ln q / (1 - q^{2 nu})`.
pub fn moment_closed_form(kind: FunctionKind, nu: Complex64, base: &QBase) -> Complex64 {
    let d = kind.delta() as f64;
    -base.pow(d * nu) * base.ln_q() / (1.0 - base.p_pow(nu))
}

/// `int_0^inf f_nu^(j)(s) s ds` by banded quadrature.
pub fn moment_identity(kind: FunctionKind, nu: Complex64, base: &QBase, qpolicy: &QuadraturePolicy) -> Result<EvalResult> {
    let params = WeightParams::new(nu, kind, *base)?;
    integrate_bands(
        |s| Ok(weight_f(&params, s)? * s),
        qpolicy.ratio_for_base(base),
        qpolicy,
        "weight moment",
    )
}

/// `-q^{-nu^2 + nu(1 - delta)} (1 - q^2) / (2 ln q) Gamma_{q^2}(nu + 1) A_nu^{|1 - delta|}`.
pub(crate) fn single_prefactor(
    kind: FunctionKind,
    nu: Complex64,
    base: &QBase,
    spolicy: &SeriesPolicy,
) -> Result<(Complex64, f64)> {
    let d = kind.delta() as f64;
    let g = q_gamma(nu + 1.0, base)?;
    let mut pref = -base.pow(-nu * nu + nu * (1.0 - d)) * (1.0 - base.p()) / (2.0 * base.ln_q()) * g.value;
    let mut rel = g.rel_err();
    if kind.a_exponent() != 0 {
        let a = a_nu(nu, base, spolicy)?;
        pref *= a.value;
        rel += a.rel_err();
    }
    Ok((pref, rel))
}

/// The single-integral representation of `K_nu^(j)((1 - q^2) z; q^2)`:
///
/// ```text
/// prefactor * (z/2)^{-nu} int_0^inf f_nu^(j)(s) s J_0^(j)((1 - q^2) z s; q^2) ds.
/// ```
///
/// For kind 1 the Bessel factor is the meromorphic continuation, which
/// decays along the positive axis. For kinds 2 and 3 it grows faster than
/// any power and the integral does not converge; the quadrature reports
/// that as [`Error::NonConvergence`].
pub fn k_integral_single(
    kind: FunctionKind,
    nu: Complex64,
    z: Complex64,
    base: &QBase,
    qpolicy: &QuadraturePolicy,
    spolicy: &SeriesPolicy,
) -> Result<EvalResult> {
    let params = WeightParams::new(nu, kind, *base)?;
    if kind == FunctionKind::First && !(z.re > 0.0) {
        return Err(Error::domain(format!("kind-1 integral representation needs Re z > 0, got z = {z}")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::domain("the integral representation needs z != 0"));
    }
    let (pref, pref_rel) = single_prefactor(kind, nu, base, spolicy)?;
    debug_assert!(nu.im != 0.0 || pref.re > 0.0);
    let integral = integrate_bands(
        |s| Ok(weight_f(&params, s)? * s * j0_scaled(kind, z * s, base, spolicy)?),
        qpolicy.ratio_for_base(base),
        qpolicy,
        "single-integral representation",
    )?;
    let scale = pref * (-nu * (z / 2.0).ln()).exp();
    let value = scale * integral.value;
    let err = scale.norm() * integral.abs_err + value.norm() * (pref_rel + 8.0 * f64::EPSILON);
    let mut res = EvalResult::new(value, err, integral.terms);
    res.absorb_warnings(&integral.warnings);
    Ok(res)
}

/// The single-integral representation with the `s`-integral cut off at `s_max`:
/// `prefactor (z/2)^{-nu} int_0^{s_max} f_nu^(j)(s) s J_0^(j)((1 - q^2) z s; q^2) ds`.
pub fn k_integral_single_truncated(
    kind: FunctionKind,
    nu: Complex64,
    z: Complex64,
    s_max: f64,
    base: &QBase,
    qpolicy: &QuadraturePolicy,
    spolicy: &SeriesPolicy,
) -> Result<EvalResult> {
    let params = WeightParams::new(nu, kind, *base)?;
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::domain(format!("cut-off must be positive and finite, got {s_max}")));
    }
    let (pref, pref_rel) = single_prefactor(kind, nu, base, spolicy)?;
    let integral = integrate_below(
        |s| Ok(weight_f(&params, s)? * s * j0_scaled(kind, z * s, base, spolicy)?),
        s_max,
        qpolicy.ratio_for_base(base),
        qpolicy,
        "truncated single integral",
    )?;
    let scale = pref * (-nu * (z / 2.0).ln()).exp();
    let value = scale * integral.value;
    let err = scale.norm() * integral.abs_err + value.norm() * (pref_rel + 8.0 * f64::EPSILON);
    Ok(EvalResult::new(value, err, integral.terms))
}

const SHRINK_NODES: usize = 48;

/// `int_{q eps}^{eps} F(x) / x dx` for each `eps`; tends to `-F(0) ln q` as `eps -> 0`.
pub fn shrink_limit<F>(f: F, base: &QBase, eps_sequence: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    let rule = GaussRule::new(SHRINK_NODES);
    let mut prev = f64::INFINITY;
    let mut out = Vec::with_capacity(eps_sequence.len());
    for &eps in eps_sequence {
        if !(eps > 0.0 && eps < prev) {
            return Err(Error::domain("eps_sequence must be positive and strictly decreasing"));
        }
        prev = eps;
        // x = eps e^t maps the interval to t in [ln q, 0] and removes the 1/x
        let v: f64 = rule.integrate(base.ln_q(), 0.0, |t| Ok(f(eps * t.exp())))?;
        out.push(v);
    }
    Ok(out)
}

/// `int dx f * g - f(0) g(0) ln q / (1 - q) + int f(qx) dx g`, with `dx` the
/// q-derivative; zero when both functions are integrable and differentiable at 0.
pub fn q_parts_residual<F, G>(f: F, g: G, base: &QBase, qpolicy: &QuadraturePolicy) -> Result<EvalResult>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let q = base.q();
    let dq = |h: &dyn Fn(f64) -> f64, x: f64| (h(x) - h(q * x)) / ((1.0 - q) * x);
    let ratio = qpolicy.ratio_for_base(base);
    let first = integrate_bands(|x| Ok(Complex64::new(dq(&f, x) * g(x), 0.0)), ratio, qpolicy, "q-parts integral")?;
    let second = integrate_bands(|x| Ok(Complex64::new(f(q * x) * dq(&g, x), 0.0)), ratio, qpolicy, "q-parts integral")?;
    let boundary = f(0.0) * g(0.0) * base.ln_q() / (1.0 - q);
    let value = first.value - boundary + second.value;
    let err = first.abs_err + second.abs_err + 4.0 * f64::EPSILON * boundary.abs();
    let mut res = EvalResult::new(value, err, first.terms + second.terms);
    res.absorb_warnings(&first.warnings);
    res.absorb_warnings(&second.warnings);
    Ok(res)
}

//! q-Pochhammer symbols, the q-gamma function, q-exponentials, generic
//! basic hypergeometric series and the Jackson q-derivative.
//!
//! Every routine works in complex arithmetic. Sums are accumulated with a
//! running logarithmic scale so that series whose terms pass through very
//! large magnitudes (the kind-2 modified functions close to `q = 1`, for
//! example) do not overflow before their ratio is taken.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Infinite products stop once the moving factor is this close to 1.
pub(crate) const PRODUCT_CUTOFF: f64 = 1e-18;

/// A factor `1 - x` with `|1 - x|` below this is treated as an exact zero.
const ZERO_FACTOR: f64 = 1e-14;

const RESCALE_AT: f64 = 1e150;

/// Deformation parameter `q` together with the derived base `p = q^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBase {
    q: f64,
    p: f64,
    ln_q: f64,
}

impl QBase {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!("q must lie in (0, 1), got {q}")));
        }
        Ok(Self {
            q,
            p: q * q,
            ln_q: q.ln(),
        })
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    /// The base `q^2` in which all modified functions are expressed.
    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn ln_q(&self) -> f64 {
        self.ln_q
    }

    /// `q^x` on the principal branch (`q > 0`, so this is unambiguous).
    #[inline]
    pub fn pow(&self, x: Complex64) -> Complex64 {
        (x * self.ln_q).exp()
    }

    /// `p^x = q^{2x}`.
    #[inline]
    pub fn p_pow(&self, x: Complex64) -> Complex64 {
        (x * (2.0 * self.ln_q)).exp()
    }
}

/// Stopping rule for all series in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    rel_tol: f64,
    consecutive_small: usize,
    max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            consecutive_small: 3,
            max_terms: 10_000,
        }
    }
}

impl SeriesPolicy {
    pub fn new(rel_tol: f64, consecutive_small: usize, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        Ok(Self {
            rel_tol,
            consecutive_small: consecutive_small.max(1),
            max_terms,
        })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn consecutive_small(&self) -> usize {
        self.consecutive_small
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

/// Conditions worth surfacing alongside a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Warning {
    /// Argument close to the boundary of a series disc.
    NearRadius,
    /// The series needed an unusually large number of terms.
    SlowConvergence,
    /// Argument close to a pole; the error estimate is degraded.
    NearPole,
    /// Significant cancellation between the terms of a combination.
    Cancellation,
    /// A meromorphic or product-form continuation was used instead of the raw series.
    Continuation,
    /// Integer order evaluated through the symmetric-offset limit.
    IntegerOrderLimit,
    /// The quadrature tail was summed by extrapolation rather than direct decay.
    TailExtrapolated,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Warning::NearRadius => "near-radius",
            Warning::SlowConvergence => "slow-convergence",
            Warning::NearPole => "near-pole",
            Warning::Cancellation => "cancellation",
            Warning::Continuation => "continuation",
            Warning::IntegerOrderLimit => "integer-order-limit",
            Warning::TailExtrapolated => "tail-extrapolated",
        };
        f.write_str(s)
    }
}

/// A value with an absolute error estimate and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_err: f64,
    /// Series terms, product factors or quadrature nodes consumed.
    pub terms: usize,
    pub warnings: Vec<Warning>,
}

impl EvalResult {
    pub fn new(value: Complex64, abs_err: f64, terms: usize) -> Self {
        let abs_err = if abs_err.is_finite() { abs_err.abs() } else { f64::MAX };
        Self {
            value,
            abs_err,
            terms,
            warnings: Vec::new(),
        }
    }

    pub fn exact(value: Complex64) -> Self {
        Self::new(value, 0.0, 0)
    }

    pub(crate) fn warn(&mut self, w: Warning) {
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    pub(crate) fn absorb_warnings(&mut self, other: &[Warning]) {
        for &w in other {
            self.warn(w);
        }
    }

    pub fn has_warning(&self, w: Warning) -> bool {
        self.warnings.contains(&w)
    }

    /// Relative error estimate; infinite for an exact zero with nonzero error.
    pub fn rel_err(&self) -> f64 {
        let m = self.value.norm();
        if m > 0.0 {
            self.abs_err / m
        } else if self.abs_err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// `mant * exp(ln_scale)`: a complex number with an out-of-band exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    pub mant: Complex64,
    pub ln_scale: f64,
}

impl Scaled {
    pub fn from_value(v: Complex64) -> Self {
        Self { mant: v, ln_scale: 0.0 }
    }

    /// `exp(ln)` without forming the exponential of the real part.
    pub fn from_ln(ln: Complex64) -> Self {
        Self {
            mant: Complex64::from_polar(1.0, ln.im),
            ln_scale: ln.re,
        }
    }

    pub fn value(&self) -> Complex64 {
        if self.mant == Complex64::new(0.0, 0.0) {
            return self.mant;
        }
        self.mant * self.ln_scale.exp()
    }

    /// Mantissa re-expressed relative to `exp(ln)`.
    pub fn at_scale(&self, ln: f64) -> Complex64 {
        if self.mant == Complex64::new(0.0, 0.0) {
            return self.mant;
        }
        self.mant * (self.ln_scale - ln).exp()
    }

    pub fn mul(self, other: Scaled) -> Scaled {
        Scaled {
            mant: self.mant * other.mant,
            ln_scale: self.ln_scale + other.ln_scale,
        }
    }

    pub fn div(self, other: Scaled) -> Scaled {
        Scaled {
            mant: self.mant / other.mant,
            ln_scale: self.ln_scale - other.ln_scale,
        }
    }
}

/// Outcome of [`sum_ratio_series`]; `abs_err` shares the scale of `sum`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub sum: Scaled,
    pub abs_err: f64,
    pub terms: usize,
}

impl SeriesSum {
    pub fn abs_err_value(&self) -> f64 {
        if self.abs_err == 0.0 {
            0.0
        } else {
            self.abs_err * self.sum.ln_scale.exp()
        }
    }

    pub fn rel_err(&self) -> f64 {
        let m = self.sum.mant.norm();
        if m > 0.0 {
            self.abs_err / m
        } else if self.abs_err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn into_result(self) -> EvalResult {
        EvalResult::new(self.sum.value(), self.abs_err_value(), self.terms)
    }
}

/// Sums `t_0 + t_1 + ...` where `t_{n+1} = t_n * ratio(n)`.
///
/// Stops once `consecutive_small` successive terms are each below
/// `rel_tol * |partial sum|` while not increasing. The error estimate is a
/// geometric bound on the omitted tail plus accumulated rounding.
pub(crate) fn sum_ratio_series<F>(first: Scaled, mut ratio: F, policy: &SeriesPolicy, what: &str) -> Result<SeriesSum>
where
    F: FnMut(usize) -> Result<Complex64>,
{
    let zero = Complex64::new(0.0, 0.0);
    if first.mant == zero {
        return Ok(SeriesSum {
            sum: first,
            abs_err: 0.0,
            terms: 1,
        });
    }
    let mut ln_scale = first.ln_scale;
    let mut t = first.mant;
    let mut sum = t;
    let mut abs_sum = t.norm();
    let mut prev_abs = t.norm();
    let mut run = 0usize;
    for n in 0..policy.max_terms {
        t *= ratio(n)?;
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(Error::non_convergence(what, Scaled { mant: sum, ln_scale }.value(), n + 1));
        }
        let ta = t.norm();
        if ta > RESCALE_AT || sum.norm() > RESCALE_AT {
            let s = ta.max(sum.norm());
            t /= s;
            sum /= s;
            abs_sum /= s;
            prev_abs /= s;
            ln_scale += s.ln();
        }
        let ta = t.norm();
        sum += t;
        abs_sum += ta;
        if ta == 0.0 {
            // Later terms are zero too.
            return Ok(SeriesSum {
                sum: Scaled { mant: sum, ln_scale },
                abs_err: 2.0 * f64::EPSILON * abs_sum,
                terms: n + 2,
            });
        }
        if ta <= policy.rel_tol * sum.norm() && ta <= prev_abs {
            run += 1;
        } else {
            run = 0;
        }
        let r = ta / prev_abs;
        prev_abs = ta;
        if run >= policy.consecutive_small {
            let tail = if r < 1.0 { ta * r / (1.0 - r) } else { ta };
            return Ok(SeriesSum {
                sum: Scaled { mant: sum, ln_scale },
                abs_err: tail + 2.0 * f64::EPSILON * abs_sum,
                terms: n + 2,
            });
        }
    }
    Err(Error::non_convergence(
        what,
        Scaled { mant: sum, ln_scale }.value(),
        policy.max_terms,
    ))
}

/// Number of factors in a truncated infinite product `(a; b)_inf`.
fn product_len(a_norm: f64, b: f64) -> usize {
    if a_norm < PRODUCT_CUTOFF {
        return 0;
    }
    ((PRODUCT_CUTOFF / a_norm).ln() / b.ln()).ceil().max(0.0) as usize + 1
}

fn check_infinite_base(b: f64) -> Result<()> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::domain(format!(
            "infinite q-Pochhammer product needs a base in (0, 1), got {b}"
        )));
    }
    Ok(())
}

/// `ln (a; b)_inf` summed factor by factor. The imaginary part is only
/// meaningful modulo `2 pi`.
pub(crate) fn ln_poch_inf(a: Complex64, b: f64) -> Result<(Complex64, usize)> {
    check_infinite_base(b)?;
    let n = product_len(a.norm(), b);
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut ak = a;
    for _ in 0..n {
        let f = one - ak;
        if f.norm() < ZERO_FACTOR {
            return Err(Error::pole(format!("factor of ({a}; {b})_inf vanishes")));
        }
        acc += f.ln();
        ak *= b;
    }
    Ok((acc, n))
}

/// `(a; b)_inf / (c; b)_inf` as a product of factor ratios, which stays in
/// range even when both products individually under- or overflow.
pub(crate) fn poch_ratio_inf(a: Complex64, c: Complex64, b: f64) -> Result<(Complex64, usize)> {
    check_infinite_base(b)?;
    let n = product_len(a.norm().max(c.norm()), b);
    let one = Complex64::new(1.0, 0.0);
    let mut acc = one;
    let mut ak = a;
    let mut ck = c;
    for _ in 0..n {
        let den = one - ck;
        if den.norm() < ZERO_FACTOR {
            return Err(Error::pole(format!("denominator ({c}; {b})_inf vanishes")));
        }
        acc *= (one - ak) / den;
        ak *= b;
        ck *= b;
    }
    Ok((acc, n))
}

/// Order of a q-Pochhammer symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochOrder {
    Finite(usize),
    Infinite,
}

/// `(a; base)_n = prod_{k<n} (1 - a base^k)`, or its infinite limit.
pub fn qpochhammer(a: Complex64, n: PochOrder, base: f64) -> Result<EvalResult> {
    let one = Complex64::new(1.0, 0.0);
    match n {
        PochOrder::Finite(n) => {
            let mut acc = one;
            let mut ak = a;
            for _ in 0..n {
                acc *= one - ak;
                ak *= base;
            }
            Ok(EvalResult::new(acc, acc.norm() * n as f64 * f64::EPSILON, n))
        }
        PochOrder::Infinite => {
            check_infinite_base(base)?;
            let n = product_len(a.norm(), base);
            let mut acc = one;
            let mut ak = a;
            for _ in 0..n {
                acc *= one - ak;
                ak *= base;
            }
            // remaining factors multiply the value by roughly 1 - ak / (1 - base)
            let tail = ak.norm() / (1.0 - base);
            let err = acc.norm() * (tail + (n as f64 + 1.0) * f64::EPSILON);
            Ok(EvalResult::new(acc, err, n))
        }
    }
}

/// `1 / Gamma_p(x) = (p^x; p)_inf / (p; p)_inf * (1 - p)^{x - 1}`, an entire function of `x`.
pub(crate) fn q_gamma_recip_raw(x: Complex64, p: f64) -> Complex64 {
    let px = if x.im == 0.0 && x.re.fract() == 0.0 && x.re.abs() < 1000.0 {
        Complex64::new(p.powi(x.re as i32), 0.0)
    } else {
        (x * p.ln()).exp()
    };
    // (p; p)_inf never vanishes, so this cannot fail.
    let (ratio, _) = poch_ratio_inf(px, Complex64::new(p, 0.0), p).expect("(p; p)_inf is nonzero");
    ratio * ((x - 1.0) * (1.0 - p).ln()).exp()
}

/// The `q^2`-gamma function `Gamma_{q^2}(nu)`.
pub fn q_gamma(nu: Complex64, base: &QBase) -> Result<EvalResult> {
    let p = base.p();
    let pnu = base.p_pow(nu);
    let (ratio, n) = poch_ratio_inf(Complex64::new(p, 0.0), pnu, p)
        .map_err(|_| Error::pole(format!("q-gamma pole at nu = {nu}")))?;
    let value = ratio * ((1.0 - nu) * (1.0 - p).ln()).exp();
    let err = value.norm() * (2.0 * n as f64 + 4.0) * f64::EPSILON;
    Ok(EvalResult::new(value, err, n))
}

/// `r_Phi_s(a_1..a_r; b_1..b_s; base, z)` summed from its defining series.
pub fn basic_hypergeometric(
    numerators: &[Complex64],
    denominators: &[Complex64],
    base: f64,
    z: Complex64,
    policy: &SeriesPolicy,
) -> Result<EvalResult> {
    if !(base > 0.0 && base < 1.0) {
        return Err(Error::domain(format!("basic hypergeometric base must lie in (0, 1), got {base}")));
    }
    let one = Complex64::new(1.0, 0.0);
    if z == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult::exact(one));
    }
    let r = numerators.len() as i64;
    let s = denominators.len() as i64;
    let power = 1 + s - r;
    if power < 0 {
        return Err(Error::domain(format!(
            "{r}Phi{s} diverges for z != 0 (more than s + 1 numerator parameters)"
        )));
    }
    if power == 0 && z.norm() >= 1.0 {
        return Err(Error::domain(format!(
            "{r}Phi{s} series needs |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    let mut bn = 1.0;
    let ratio = |_n: usize| -> Result<Complex64> {
        let mut num = z;
        for a in numerators {
            num *= one - a * bn;
        }
        let mut den = Complex64::new(1.0 - bn * base, 0.0);
        for b in denominators {
            let f = one - b * bn;
            if f.norm() < ZERO_FACTOR {
                return Err(Error::domain(format!("denominator parameter {b} lies on the pole lattice")));
            }
            den *= f;
        }
        let forcing = (-bn).powi(power as i32);
        bn *= base;
        Ok(num * forcing / den)
    };
    let out = sum_ratio_series(Scaled::from_value(one), ratio, policy, "basic hypergeometric series")?;
    let mut res = out.into_result();
    if power == 0 && z.norm() > 0.9 {
        res.warn(Warning::NearRadius);
    }
    if res.terms > policy.max_terms / 2 {
        res.warn(Warning::SlowConvergence);
    }
    Ok(res)
}

/// `|z|` below which `e_q` is summed from its power series rather than the product.
const E_SMALL_SERIES_RADIUS: f64 = 0.5;

/// The small q-exponential `e_q(z) = sum z^n / (q; q)_n = 1 / (z; q)_inf`.
///
/// Inside `|z| < 0.5` the power series is used; elsewhere the reciprocal
/// product, which continues it meromorphically with poles at `z = q^{-m}`.
pub fn q_exp_small(z: Complex64, base: f64, policy: &SeriesPolicy) -> Result<EvalResult> {
    check_infinite_base(base)?;
    let one = Complex64::new(1.0, 0.0);
    if z.norm() < E_SMALL_SERIES_RADIUS {
        let mut bn = 1.0;
        let ratio = |_n: usize| -> Result<Complex64> {
            bn *= base;
            Ok(z / (1.0 - bn))
        };
        return Ok(sum_ratio_series(Scaled::from_value(one), ratio, policy, "e_q series")?.into_result());
    }
    let (ln, n) = ln_poch_inf(z, base).map_err(|_| Error::pole(format!("e_q has a pole at z = {z}")))?;
    let value = (-ln).exp();
    let mut res = EvalResult::new(value, value.norm() * (n as f64 + 4.0) * f64::EPSILON, n);
    res.warn(Warning::Continuation);
    // distance to the nearest pole q^{-m}, relative to its size
    let near = (0..n.max(1))
        .map(|m| (z * base.powi(m as i32) - one).norm())
        .fold(f64::INFINITY, f64::min);
    if near < 1e-6 {
        res.warn(Warning::NearPole);
        res.abs_err *= 1.0 + 1e-6 / near.max(f64::MIN_POSITIVE);
    }
    Ok(res)
}

/// The big q-exponential `E_q(z) = sum q^{n(n-1)/2} z^n / (q; q)_n = (-z; q)_inf`, entire.
pub fn q_exp_big(z: Complex64, base: f64, _policy: &SeriesPolicy) -> Result<EvalResult> {
    qpochhammer(-z, PochOrder::Infinite, base)
}

/// Jackson q-derivative `(f(x) - f(qx)) / ((1 - q) x)`; exact two-point formula.
pub fn q_derivative<F>(f: F, x: Complex64, base: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if x == Complex64::new(0.0, 0.0) {
        return Err(Error::domain("the q-derivative is not defined by the two-point formula at x = 0"));
    }
    Ok((f(x)? - f(x * base)?) / ((1.0 - base) * x))
}

//! Reference values computed independently of the library: direct products,
//! term-by-term sums with explicit powers, classical closed forms, and a
//! small double-double type for sums with cancellation.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// `prod_{k<n} (1 - a q^k)`.
pub fn poch(a: Complex64, q: f64, n: usize) -> Complex64 {
    (0..n).fold(c(1.0), |acc, k| acc * (1.0 - a * q.powi(k as i32)))
}

/// `(a; q)_inf`, multiplied out until the factors are within 1e-20 of 1.
pub fn poch_inf(a: Complex64, q: f64) -> Complex64 {
    let mut acc = c(1.0);
    let mut k = 0;
    loop {
        let t = a * q.powi(k);
        acc *= 1.0 - t;
        if t.norm() < 1e-20 {
            return acc;
        }
        k += 1;
    }
}

/// `Gamma_p(x) = (p; p)_inf / (p^x; p)_inf (1 - p)^{1 - x}`.
pub fn gamma_p(x: f64, p: f64) -> f64 {
    (poch_inf(c(p), p) / poch_inf(c(p.powf(x)), p)).re * (1.0 - p).powf(1.0 - x)
}

/// `sum_k s^k q^{(2 - delta) k (nu + k)} (1 - p)^k (z/2)^{nu + 2k} / ((p; p)_k Gamma_p(nu + k + 1))`
/// with every term built from explicit powers; `s = 1` gives `I`, `s = -1` gives `J`.
pub fn scaled_bessel(sign: f64, delta: u8, nu: f64, z: f64, q: f64) -> f64 {
    let p = q * q;
    let mut sum = 0.0;
    for k in 0..200 {
        let kf = k as f64;
        let g = gamma_p(nu + kf + 1.0, p);
        let t = sign.powi(k)
            * q.powf((2.0 - delta as f64) * kf * (nu + kf))
            * (1.0 - p).powi(k)
            * (z / 2.0).powf(nu + 2.0 * kf)
            / (poch(c(p), p, k as usize).re * g);
        sum += t;
        if t.abs() < 1e-18 * sum.abs() && k > 5 {
            break;
        }
    }
    sum
}

/// Classical `I_nu` and `K_nu` at order 1/2 or 3/2.
pub fn classical_half(nu: f64, z: f64) -> (f64, f64) {
    let root = (2.0 / (PI * z)).sqrt();
    let k = (PI / (2.0 * z)).sqrt() * (-z).exp();
    if nu == 0.5 {
        (root * z.sinh(), k)
    } else if nu == 1.5 {
        (root * (z.cosh() - z.sinh() / z), k * (1.0 + 1.0 / z))
    } else {
        panic!("closed forms only for nu = 1/2, 3/2")
    }
}

/// Classical `I_n(z)` for integer `n` from its power series.
pub fn classical_i_int(n: u32, z: f64) -> f64 {
    let mut term = (z / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..100 {
        let kf = k as f64;
        term *= (z / 2.0).powi(2) / (kf * (kf + n as f64));
        sum += term;
    }
    sum
}

/// The unscaled `J_nu^(j)(x; q)` from its basic hypergeometric form, term by
/// term. `flip` negates the series argument.
pub fn jackson_j(delta: u8, nu: f64, x: f64, q: f64, flip: bool) -> f64 {
    let (r, w) = match delta {
        2 => (2, -x * x / 4.0),
        0 => (0, -x * x * q.powf(nu + 1.0) / 4.0),
        _ => (1, -x * x * q.powf((nu + 1.0) / 2.0) / 4.0),
    };
    let w = if flip { -w } else { w };
    let pre = (poch_inf(c(q.powf(nu + 1.0)), q) / poch_inf(c(q), q)).re * (x / 2.0).powf(nu);
    let mut sum = 0.0;
    for n in 0..150usize {
        let force = ((-1f64).powi(n as i32) * q.powf((n * n.saturating_sub(1)) as f64 / 2.0)).powi(2 - r);
        let den = poch(c(q), q, n).re * poch(c(q.powf(nu + 1.0)), q, n).re;
        // every numerator (0; q)_n is 1
        sum += force * w.powi(n as i32) / den;
    }
    pre * sum
}

/// Double-double number for oracle sums.
#[derive(Debug, Clone, Copy)]
pub struct Dd(pub f64, pub f64);

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd(x, 0.0)
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = self.0 + o.0;
        let v = s - self.0;
        let e = (self.0 - (s - v)) + (o.0 - v) + self.1 + o.1;
        let hi = s + e;
        Dd(hi, e - (hi - s))
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
        let hi = p + e;
        Dd(hi, e - (hi - p))
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.0 / o.0;
        let r = self.add(o.mul(Dd::new(-q1)));
        let q2 = r.0 / o.0;
        Dd::new(q1).add(Dd::new(q2))
    }

    pub fn f64(self) -> f64 {
        self.0 + self.1
    }
}

//! Exponential integral, integer-order modified Bessel functions and
//! Gauss-Chebyshev nodes.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

/// Exponential integral Ei(x) for real x ≠ 0.
pub fn expint_ei(x: f64) -> Result<f64> {
    if x == 0.0 || x.is_nan() {
        return Err(Error::Domain {
            func: "expint_ei",
            arg: x,
            why: "pole at x = 0",
        });
    }
    if x < 0.0 {
        return Ok(-expint_e1(-x));
    }
    Ok(ei_positive(x))
}

/// E1(t) = -Ei(-t) for t > 0.
fn expint_e1(t: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    if t <= 1.0 {
        return e1_series(t);
    }
    e1_cf_scaled(t) * (-t).exp()
}

/// -γ - ln t - Σ (-t)^k / (k·k!)
fn e1_series(t: f64) -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 1..MAX_ITER {
        fact *= -t / k as f64;
        let term = fact / k as f64;
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - t.ln() - sum
}

/// e^t E1(t) for t > 1 by modified Lentz evaluation of the continued fraction.
fn e1_cf_scaled(t: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = t + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// e^x E1(x) = -e^x Ei(-x) for x > 0, without overflow at large x.
pub fn exp_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            func: "exp_e1",
            arg: x,
            why: "requires x > 0",
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x <= 1.0 {
        x.exp() * e1_series(x)
    } else {
        e1_cf_scaled(x)
    })
}

fn ei_positive(x: f64) -> f64 {
    if x > 709.0 {
        return f64::INFINITY;
    }
    if x <= 40.0 {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 1..MAX_ITER {
            fact *= x / k as f64;
            let term = fact / k as f64;
            sum += term;
            if term < EPS * sum {
                break;
            }
        }
        return EULER_GAMMA + x.ln() + sum;
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 1..MAX_ITER {
        let prev = term;
        term *= k as f64 / x;
        if term < EPS || term > prev {
            break;
        }
        sum += term;
    }
    x.exp() / x * sum
}

/// Modified Bessel function of the second kind K_v(x), integer order.
pub fn bessel_k(v: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            func: "bessel_k",
            arg: x,
            why: "requires x > 0",
        });
    }
    let (k0, k1) = k0_k1(x);
    Ok(match v {
        0 => k0,
        1 => k1,
        _ => {
            let (mut km, mut k) = (k0, k1);
            for n in 1..v {
                let next = km + 2.0 * n as f64 / x * k;
                km = k;
                k = next;
            }
            k
        }
    })
}

/// K_0(x) and K_1(x) for x > 0.
pub(crate) fn k0_k1(x: f64) -> (f64, f64) {
    if x <= 2.0 {
        k01_series(x)
    } else {
        k01_steed(x)
    }
}

fn k01_series(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    // a_k = t^k / (k!)², b_k = t^k / (k!(k+1)!)
    let (mut a, mut b) = (1.0, 1.0);
    let (mut h, mut h1) = (0.0, 1.0);
    let (mut i0, mut s0) = (a, 0.0);
    let (mut i1s, mut s1) = (b, b * (h + h1));
    for k in 1..200 {
        let kf = k as f64;
        a *= t / (kf * kf);
        b *= t / (kf * (kf + 1.0));
        h += 1.0 / kf;
        h1 += 1.0 / (kf + 1.0);
        i0 += a;
        s0 += a * h;
        i1s += b;
        s1 += b * (h + h1);
        if a < EPS * i0 && b < EPS * i1s {
            break;
        }
    }
    let k0 = -lg * i0 + s0;
    let i1 = 0.5 * x * i1s;
    let k1 = 1.0 / x + i1 * lg - 0.25 * x * s1;
    (k0, k1)
}

/// Steed's continued fraction for K_0, K_1 at x > 2.
fn k01_steed(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let (mut q1, mut q2) = (0.0, 1.0);
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Modified Bessel function of the first kind I_1(x).
pub fn bessel_i1(x: f64) -> f64 {
    let t = 0.25 * x * x;
    let mut b = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        b *= t / (kf * (kf + 1.0));
        sum += b;
        if b < EPS * sum {
            break;
        }
    }
    0.5 * x * sum
}

/// Truncated small-argument expansion of K_1(2x):
///
/// 1/(2x) + I_1(2x)(ln x + γ) − ½ Σ_{l=0}^{terms} x^{2l+1} / (l!(l+1)!) · (H_l + H_{l+1})
///
/// `terms = 0` keeps only the singular 1/(2x) part.
pub fn k1_small_arg(x: f64, terms: usize) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            func: "k1_small_arg",
            arg: x,
            why: "requires x > 0",
        });
    }
    let lead = 0.5 / x;
    if terms == 0 {
        return Ok(lead);
    }
    let mut sum = 0.0;
    let mut coef = x; // x^{2l+1} / (l!(l+1)!)
    let (mut h, mut h1) = (0.0, 1.0);
    for l in 0..=terms {
        if l > 0 {
            let lf = l as f64;
            coef *= x * x / (lf * (lf + 1.0));
            h += 1.0 / lf;
            h1 += 1.0 / (lf + 1.0);
        }
        sum += coef * (h + h1);
    }
    Ok(lead + bessel_i1(2.0 * x) * (x.ln() + EULER_GAMMA) - 0.5 * sum)
}

/// First-kind Chebyshev nodes ϑ_k = cos((2k−1)π/(2N)), k = 1..N.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevNodes {
    pub n: usize,
    pub nodes: Vec<f64>,
}

pub fn chebyshev_nodes(n: usize) -> Result<ChebyshevNodes> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "Chebyshev node count must be at least 1".into(),
        ));
    }
    let mut nodes = vec![0.0; n];
    // Mirror the upper half so the rule is exactly antisymmetric.
    for k in 0..n / 2 {
        let t = ((2 * k + 1) as f64 * PI / (2 * n) as f64).cos();
        nodes[k] = t;
        nodes[n - 1 - k] = -t;
    }
    Ok(ChebyshevNodes { n, nodes })
}

impl ChebyshevNodes {
    /// Gauss-Chebyshev rule for ∫_{-1}^{1} f(t)/√(1−t²) dt.
    pub fn weighted_sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        PI / self.n as f64 * self.nodes.iter().map(|&t| f(t)).sum::<f64>()
    }

    /// ∫_{-1}^{1} g(t) dt approximated as (π/N) Σ g(ϑ_k) √(1−ϑ_k²).
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.weighted_sum(|t| g(t) * (1.0 - t * t).sqrt())
    }
}

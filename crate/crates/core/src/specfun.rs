//! Bessel functions of the first kind of real order, their positive zeros,
//! and the exact Dirichlet spectra of balls and sectors built from them.
//!
//! For `x ≤ 30` the ascending series is summed in double-double arithmetic,
//! which absorbs the cancellation between terms of size `e^x`. Beyond that
//! the Hankel expansion is used when it converges to full precision, and
//! otherwise the orders are reached by forward recurrence (below `x`) and
//! Miller's backward recurrence (above `x`).

use crate::ball_solver::{beta as ball_beta, harmonic_dim};
use crate::eiglin::{ModeTag, Spectrum};
use crate::real::{Real, DD};
use crate::sector_solver::beta_sector;
use std::f64::consts::PI;
use thiserror::Error;

pub const MAX_ORDER: f64 = 200.0;
pub const MAX_ARG: f64 = 1e6;
pub const MAX_ZERO_INDEX: usize = 10_000;
const SERIES_LIMIT: f64 = 30.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("argument {0} must be finite and non-negative")]
    NegativeArgument(f64),
    #[error("order {nu} or argument {x} outside the supported range")]
    OutOfRange { nu: f64, x: f64 },
    #[error("zero index {0} outside 1..=10000")]
    BadIndex(usize),
    #[error("failed to bracket zero {k} of J_{nu}")]
    Bracketing { nu: f64, k: usize },
    #[error("invalid geometry: {0}")]
    Geometry(String),
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` by the Lanczos approximation.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the approximation on its accurate half-line.
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        ln_gamma(x).exp()
    }
}

fn check(nu: f64, x: f64) -> Result<(), SpecfunError> {
    if !(x >= 0.0) {
        return Err(SpecfunError::NegativeArgument(x));
    }
    if !(nu >= 0.0) {
        return Err(SpecfunError::NegativeArgument(nu));
    }
    if nu > MAX_ORDER || x > MAX_ARG || !x.is_finite() {
        return Err(SpecfunError::OutOfRange { nu, x });
    }
    Ok(())
}

/// `J_ν(x)` for `0 ≤ ν ≤ 200`, `0 ≤ x ≤ 10⁶`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    check(nu, x)?;
    Ok(bessel_j_unchecked(nu, x))
}

/// `J_ν'(x) = (ν/x) J_ν(x) - J_{ν+1}(x)`.
pub fn bessel_jp(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    check(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 1.0 {
            0.5
        } else if nu == 0.0 || nu > 1.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    Ok(nu / x * bessel_j_unchecked(nu, x) - bessel_j_unchecked(nu + 1.0, x))
}

fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        return series(nu, x);
    }
    if let Some(v) = hankel(nu, x) {
        return v;
    }
    let mu0 = nu.fract();
    let j0 = hankel(mu0, x).expect("low order Hankel at large argument");
    let j1 = hankel(mu0 + 1.0, x).expect("low order Hankel at large argument");
    let steps = nu.floor() as usize;
    let xs = x.floor() as usize;
    if steps <= xs {
        return forward(mu0, x, j0, j1, steps);
    }
    let anchor = forward(mu0, x, j0, j1, xs);
    anchor * miller_ratio(mu0 + xs as f64, nu, x)
}

fn series(nu: f64, x: f64) -> f64 {
    let lp = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0);
    if lp < -745.0 {
        return 0.0;
    }
    let xd = DD::c(x);
    let y = -(xd * xd) / DD::c(4.0);
    let nud = DD::c(nu);
    let mut term = DD::one();
    let mut sum = term;
    for k in 1..1000 {
        let kd = DD::ci(k);
        term = term * y / (kd * (nud + kd));
        sum = sum + term;
        if term.hi().abs() < 1e-33 * sum.hi().abs() && (k as f64) > 0.5 * x {
            break;
        }
    }
    sum.hi() * lp.exp() + sum.lo() * lp.exp()
}

fn hankel(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t = 1.0;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        t *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if t == 0.0 {
            converged = true;
            break;
        }
        if t.abs() > prev {
            break;
        }
        prev = t.abs();
        match k % 4 {
            1 => q += t,
            2 => p -= t,
            3 => q -= t,
            _ => p += t,
        }
        if t.abs() < 1e-17 * (p.abs() + q.abs()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    // χ = x - (ν/2 + 1/4)π, expanded so the large argument enters sin/cos exactly.
    let phi = (0.5 * nu + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let cchi = cx * cp + sx * sp;
    let schi = sx * cp - cx * sp;
    Some((2.0 / (PI * x)).sqrt() * (p * cchi - q * schi))
}

fn forward(mu0: f64, x: f64, j0: f64, j1: f64, steps: usize) -> f64 {
    let (mut a, mut b) = (j0, j1);
    if steps == 0 {
        return a;
    }
    for m in 1..steps {
        let c = 2.0 * (mu0 + m as f64) / x * b - a;
        a = b;
        b = c;
    }
    b
}

/// `J_nu(x) / J_from(x)` for `x < from ≤ nu` by backward recurrence.
fn miller_ratio(from: f64, nu: f64, x: f64) -> f64 {
    let top = nu + nu.max(100.0);
    let n = (top - from).ceil() as usize;
    let mut hi = 0.0f64;
    let mut cur = 1e-300f64;
    let mut at_nu = 0.0;
    let target = ((nu - from).round()) as usize;
    for i in (0..n).rev() {
        let order = from + i as f64;
        // f_{order} from f_{order+1}, f_{order+2}
        let next = 2.0 * (order + 1.0) / x * cur - hi;
        hi = cur;
        cur = next;
        if i == target {
            at_nu = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            hi *= 1e-250;
            at_nu *= 1e-250;
        }
    }
    if target == 0 {
        return 1.0;
    }
    at_nu / cur
}

/// Positive zeros `j_{ν,1} < j_{ν,2} < …` of one order.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselZeroTable {
    pub nu: f64,
    pub zeros: Vec<f64>,
}

impl BesselZeroTable {
    pub fn new(nu: f64, count: usize) -> Result<Self, SpecfunError> {
        Ok(Self { nu, zeros: bessel_zeros(nu, count)? })
    }
}

/// The `k`-th positive zero of `J_ν`.
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64, SpecfunError> {
    Ok(*bessel_zeros(nu, k)?.last().expect("k ≥ 1"))
}

/// The first `count` positive zeros of `J_ν`. Zeros are separated by more
/// than 2, so a scan with step 1/2 meets each one in its own cell.
pub fn bessel_zeros(nu: f64, count: usize) -> Result<Vec<f64>, SpecfunError> {
    check(nu, 0.0)?;
    if count == 0 || count > MAX_ZERO_INDEX {
        return Err(SpecfunError::BadIndex(count));
    }
    let step = 0.5;
    let mut a = nu.max(step);
    let mut fa = bessel_j_unchecked(nu, a);
    let mut zeros = Vec::with_capacity(count);
    while zeros.len() < count {
        let b = a + step;
        if b > MAX_ARG {
            return Err(SpecfunError::Bracketing { nu, k: zeros.len() + 1 });
        }
        let fb = bessel_j_unchecked(nu, b);
        if fb == 0.0 {
            zeros.push(b);
            a = b + 1e-9 * b;
            fa = bessel_j_unchecked(nu, a);
            continue;
        }
        if fa.signum() != fb.signum() {
            zeros.push(refine_zero(nu, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

/// Safeguarded Newton on a sign-change bracket.
fn refine_zero(nu: f64, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let sa = fa.signum();
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let f = bessel_j_unchecked(nu, x);
        if f == 0.0 {
            return x;
        }
        if f.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let d = nu / x * f - bessel_j_unchecked(nu + 1.0, x);
        let mut nx = x - f / d;
        if !(nx > a && nx < b) {
            nx = 0.5 * (a + b);
        }
        if (nx - x).abs() <= 2.0 * f64::EPSILON * x || b - a <= 4.0 * f64::EPSILON * x {
            return nx;
        }
        x = nx;
    }
    x
}

/// Newton refinement of a zero of `J_ν` in the working precision `T`, using
/// the normalized ascending series `Σ (-x²/4)^k / (k! (ν+1)_k)`. Meant for
/// moderate arguments (the first few zeros of orders up to a few units).
pub fn bessel_zero_refined<T: Real>(nu: T, guess: f64) -> T {
    let mut x = T::c(guess);
    let four = T::ci(4);
    for _ in 0..8 {
        let y = -(x * x) / four;
        let mut term = T::one();
        let mut s = T::one();
        let mut ds = T::zero();
        let mut k = 1usize;
        loop {
            let kt = T::ci(k);
            term = term * y / (kt * (nu + kt));
            s = s + term;
            // d/dx of y^k is k y^k · 2/x
            ds = ds + kt * term;
            if term.abs() < T::c(1e-40) && k > 4 {
                break;
            }
            k += 1;
            if k > 400 {
                break;
            }
        }
        let ds = ds * T::ci(2) / x;
        let dx = s / ds;
        x = x - dx;
        if dx.abs() < x * T::c(1e-32) {
            break;
        }
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Ball { d: usize },
    Sector { gamma: f64 },
}

/// The `m` smallest Dirichlet eigenvalues `j²_{β_n,k}` of the geometry, ties
/// kept as repeats, each tagged with its mode `n` and radial index `k`.
pub fn reference_spectrum(geometry: Geometry, c: f64, m: usize) -> Result<Spectrum, SpecfunError> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(SpecfunError::NegativeArgument(c));
    }
    let (first_n, mult, beta): (usize, Box<dyn Fn(usize) -> usize>, Box<dyn Fn(usize) -> f64>) =
        match geometry {
            Geometry::Ball { d } => {
                if d < 2 {
                    return Err(SpecfunError::Geometry(format!("ball dimension {d} < 2")));
                }
                (0, Box::new(move |n| harmonic_dim(n, d)), Box::new(move |n| ball_beta(n, c, d)))
            }
            Geometry::Sector { gamma } => {
                if !(gamma >= 0.5) || !gamma.is_finite() {
                    return Err(SpecfunError::Geometry(format!("sector gamma {gamma} < 1/2")));
                }
                (1, Box::new(|_| 1), Box::new(move |n| beta_sector(n, c, gamma)))
            }
        };
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    let mth = |cand: &mut Vec<(f64, usize, usize)>| -> Option<f64> {
        if cand.len() < m {
            return None;
        }
        cand.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(cand[m - 1].0)
    };
    let mut n = first_n;
    loop {
        let b = beta(n);
        if b > MAX_ORDER {
            return Err(SpecfunError::OutOfRange { nu: b, x: 0.0 });
        }
        let bound = mth(&mut cand);
        let j1 = bessel_zero(b, 1)?;
        if let Some(bd) = bound {
            if j1 * j1 > bd {
                break;
            }
        }
        let a = mult(n);
        let mut k = 1;
        let mut zeros = bessel_zeros(b, 1)?;
        loop {
            let z = zeros[k - 1];
            let lam = z * z;
            let bound = mth(&mut cand);
            if let Some(bd) = bound {
                if lam > bd {
                    break;
                }
            } else if (k - 1) * a >= m {
                break;
            }
            for _ in 0..a {
                cand.push((lam, n, k));
            }
            k += 1;
            if zeros.len() < k {
                zeros = bessel_zeros(b, k + 4)?;
            }
        }
        n += 1;
    }
    cand.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cand.truncate(m);
    // square in double-double so that j² is correctly rounded
    let values = cand
        .iter()
        .map(|e| {
            let z = e.0.sqrt();
            if z <= SERIES_LIMIT {
                let j = bessel_zero_refined(DD::c(beta(e.1)), z);
                (j * j).f64()
            } else {
                e.0
            }
        })
        .collect();
    let tags = cand.iter().map(|e| Some(ModeTag { n: e.1, k: e.2 })).collect();
    Ok(Spectrum::with_tags(values, tags))
}

/// ω_d, the surface measure of the unit sphere in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0)
}

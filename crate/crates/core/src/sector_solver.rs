//! Methods I and II on the circular sector `0 < θ < π/γ`, `0 < r < 1`.
//!
//! Only the sine modes `sin(nγθ)`, `n ≥ 1`, satisfy the Dirichlet condition
//! on the straight edges; each gives a 2-D radial problem with exponent
//! `β_n = √(c² + γ²n²)` and angular weight `π/(2γ)`.

use crate::ball_solver::{merge_modes, method1_blocks, method2_blocks, Method, RadialMode, SolverError};
use crate::eiglin::{self, Spectrum, SymBandedMatrix};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorProblem {
    pub gamma: f64,
    pub c: f64,
    pub k: usize,
    pub n_max: usize,
    pub method: Method,
}

pub fn beta_sector(n: usize, c: f64, gamma: f64) -> f64 {
    let g = gamma * n as f64;
    (c * c + g * g).sqrt()
}

/// `∫ sin²(nγθ) dθ` over the opening.
pub fn sector_weight(gamma: f64) -> f64 {
    PI / (2.0 * gamma)
}

fn check(c: f64, gamma: f64, k: usize, n: usize) -> Result<(), SolverError> {
    if !(gamma >= 0.5) || !gamma.is_finite() {
        return Err(SolverError::InvalidArgument(format!("gamma {gamma} must be at least 1/2")));
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(SolverError::InvalidArgument(format!("potential strength {c}")));
    }
    if k < 1 || n < 1 {
        return Err(SolverError::InvalidArgument("K and n must be at least 1".into()));
    }
    Ok(())
}

pub fn assemble_sector(method: Method, n: usize, c: f64, gamma: f64, k: usize) -> Result<RadialMode, SolverError> {
    check(c, gamma, k, n)?;
    let beta = beta_sector(n, c, gamma);
    let (stiff, mut mass) = match method {
        Method::I => method1_blocks(beta, 2, 1, k),
        Method::II => method2_blocks(beta, 2, 1, k),
        _ => return Err(SolverError::InvalidArgument("sector supports Methods I and II".into())),
    };
    let s = sector_weight(gamma);
    let mut a = SymBandedMatrix::diagonal(stiff);
    a.scale(s);
    mass.scale(s);
    Ok(RadialMode { n, beta, multiplicity: 1, a, b: mass })
}

pub fn solve_sector(p: &SectorProblem, want: usize) -> Result<Spectrum, SolverError> {
    check(p.c, p.gamma, p.k, p.n_max)?;
    if want == 0 || want > p.k * p.n_max {
        return Err(SolverError::InvalidArgument(format!(
            "count {want} outside 1..={}",
            p.k * p.n_max
        )));
    }
    let mut per_mode = Vec::with_capacity(p.n_max);
    for n in 1..=p.n_max {
        let m = assemble_sector(p.method, n, p.c, p.gamma, p.k)?;
        let s = eiglin::solve_gevp(&m.a, &m.b, want.min(p.k))?;
        per_mode.push((n, 1, s.values));
    }
    Ok(merge_modes(per_mode, want))
}

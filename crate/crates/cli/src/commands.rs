use crate::args::{MethodArg, RunArgs};
use crate::output::{Cell, Table};
use crate::{CliError, Report};
use serde_json::{json, Value};
use sobolev_core::ball_solver::{self, baseline_lowest_error, harmonic_dim, ls_slope, mode_size, BallProblem, Method};
use sobolev_core::mortar_sem::{solve_msem, Domain, MortarMesh};
use sobolev_core::sector_solver::{self, SectorProblem};
use sobolev_core::specfun::{self, reference_spectrum};
use sobolev_core::Spectrum;
use std::f64::consts::PI;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Ball { d: usize },
    Sector,
    Square,
    LShape,
}

impl Geometry {
    fn is_mortar(self) -> bool {
        matches!(self, Geometry::Square | Geometry::LShape)
    }

    fn domain(self) -> Option<Domain> {
        match self {
            Geometry::Square => Some(Domain::Square),
            Geometry::LShape => Some(Domain::LShape),
            _ => None,
        }
    }
}

pub fn parse_geometry(s: &str) -> Result<Geometry, CliError> {
    Ok(match s {
        "disk" => Geometry::Ball { d: 2 },
        "ball3" => Geometry::Ball { d: 3 },
        "sector" => Geometry::Sector,
        "square" => Geometry::Square,
        "lshape" => Geometry::LShape,
        _ => {
            let d = s
                .strip_prefix("balld:")
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| CliError::BadArgument(format!("unknown geometry '{s}'")))?;
            if !(2..=64).contains(&d) {
                return Err(CliError::BadArgument(format!("ball dimension {d} outside 2..=64")));
            }
            Geometry::Ball { d }
        }
    })
}

/// Disk/sector block then four quads.
pub type QuadDegrees = ((usize, usize), [(usize, usize); 4]);

pub fn parse_quad_degrees(s: &str) -> Result<QuadDegrees, CliError> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::BadArgument(format!("--quad-degrees: {e}")))?;
    if v.len() != 10 {
        return Err(CliError::BadArgument(format!("--quad-degrees needs 10 integers k0,n0,k1,n1,...,k4,n4, got {}", v.len())));
    }
    Ok(((v[0], v[1]), [(v[2], v[3]), (v[4], v[5]), (v[6], v[7]), (v[8], v[9])]))
}

/// `K=a:b:step` (arithmetic) or `K=a:b:xF` (geometric).
pub fn parse_sweep(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::BadArgument(format!("--sweep '{s}' is not K=a:b:step"));
    let body = s.strip_prefix("K=").ok_or_else(bad)?;
    let parts: Vec<&str> = body.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: usize = parts[0].parse().map_err(|_| bad())?;
    let b: usize = parts[1].parse().map_err(|_| bad())?;
    let mut out = Vec::new();
    if let Some(f) = parts[2].strip_prefix('x') {
        let f: usize = f.parse().map_err(|_| bad())?;
        if f < 2 || a == 0 {
            return Err(bad());
        }
        let mut k = a;
        while k <= b {
            out.push(k);
            k *= f;
        }
    } else {
        let step: usize = parts[2].parse().map_err(|_| bad())?;
        if step == 0 {
            return Err(bad());
        }
        out.extend((a..=b).step_by(step));
    }
    if out.is_empty() || out[0] == 0 {
        return Err(bad());
    }
    Ok(out)
}

/// Validated form of [`RunArgs`].
#[derive(Debug, Clone)]
pub struct Config {
    pub geometry: Geometry,
    pub method: MethodArg,
    pub c: f64,
    pub gamma: f64,
    pub r: f64,
    pub k: usize,
    pub n: Option<usize>,
    pub quads: QuadDegrees,
    pub count: usize,
    pub sweep: Option<Vec<usize>>,
}

const MAX_COUNT: usize = 10_000;

pub fn resolve(a: &RunArgs) -> Result<Config, CliError> {
    let geometry = parse_geometry(&a.geometry)?;
    let method = a.method.unwrap_or(if geometry.is_mortar() { MethodArg::Msem } else { MethodArg::II });
    let ok = match geometry {
        Geometry::Ball { .. } => method != MethodArg::Msem,
        Geometry::Sector => matches!(method, MethodArg::I | MethodArg::II),
        _ => method == MethodArg::Msem,
    };
    if !ok {
        return Err(CliError::BadArgument(format!("method {method:?} is not available on {}", a.geometry)));
    }
    if !(a.c >= 0.0) || !a.c.is_finite() {
        return Err(CliError::BadArgument(format!("--c {} must be finite and non-negative", a.c)));
    }
    if geometry == Geometry::Sector && (!(a.gamma >= 0.5) || !a.gamma.is_finite()) {
        return Err(CliError::BadArgument(format!("--gamma {} must be at least 1/2", a.gamma)));
    }
    let r = a.r.unwrap_or(if geometry == Geometry::LShape { 0.5 } else { 0.3 });
    if geometry.is_mortar() && !(r > 0.0 && r < 1.0) {
        return Err(CliError::BadArgument(format!("--R {r} outside (0, 1)")));
    }
    if a.k == 0 {
        return Err(CliError::BadArgument("--K must be at least 1".into()));
    }
    if a.count == 0 || a.count > MAX_COUNT {
        return Err(CliError::BadArgument(format!("--count {} outside 1..={MAX_COUNT}", a.count)));
    }
    if geometry == Geometry::Sector && a.n == Some(0) {
        return Err(CliError::BadArgument("--N must be at least 1 on a sector".into()));
    }
    let quads = match &a.quad_degrees {
        Some(s) => parse_quad_degrees(s)?,
        None if geometry == Geometry::LShape => ((20, 17), [(15, 9), (15, 18), (15, 18), (15, 9)]),
        None => ((14, 10), [(17, 18); 4]),
    };
    let sweep = a.sweep.as_deref().map(parse_sweep).transpose()?;
    Ok(Config { geometry, method, c: a.c, gamma: a.gamma, r, k: a.k, n: a.n, quads, count: a.count, sweep })
}

fn core_method(m: MethodArg) -> Method {
    match m {
        MethodArg::I => Method::I,
        MethodArg::II => Method::II,
        MethodArg::Classic => Method::Classic,
        _ => Method::Poly,
    }
}

fn is_c(c: f64, v: f64) -> bool {
    (c - v).abs() <= 1e-15
}

/// Published high-accuracy values for the mortar geometries, expanded by
/// multiplicity; the square Laplacian is exact.
pub fn tabulated(geometry: Geometry, c: f64, count: usize) -> Option<Vec<f64>> {
    let v: Vec<f64> = match geometry {
        Geometry::Square if c == 0.0 => {
            let mut v: Vec<f64> = (1..=count + 1)
                .flat_map(|p| (1..=count + 1).map(move |q| (p * p + q * q) as f64 * (PI * PI / 4.0)))
                .collect();
            v.sort_by(f64::total_cmp);
            v
        }
        Geometry::Square if is_c(c, 0.5) => vec![
            8.37681498711058,
            13.35313963139164,
            13.35313963139164,
            20.33106215893244,
            25.42501776089188,
            30.86901223422695,
            32.83995595781530,
            32.83995595781530,
        ],
        Geometry::Square if is_c(c, 2.0 / 3.0) => vec![
            9.65231567885163,
            14.0914338712714,
            14.0914338712714,
            20.7838715370525,
            25.9999831911128,
            32.8581767543383,
            33.3937111616692,
            33.3937111616692,
        ],
        Geometry::LShape if c == 0.0 => vec![
            9.639723844021988,
            15.197251926454335,
            19.739208802178716,
            29.521481114144805,
            31.912635957137759,
            41.474509890214925,
            44.948487781351275,
            49.348022005446765,
            49.348022005446765,
            56.709609887385042,
        ],
        _ => return None,
    };
    Some(v.into_iter().take(count).collect())
}

fn ref_geometry(g: Geometry, gamma: f64) -> Option<specfun::Geometry> {
    match g {
        Geometry::Ball { d } => Some(specfun::Geometry::Ball { d }),
        Geometry::Sector => Some(specfun::Geometry::Sector { gamma }),
        _ => None,
    }
}

fn meta(command: &str, args: &RunArgs, start: Instant, extra: Value) -> Value {
    let mut m = json!({
        "command": command,
        "config": args,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    if let (Some(o), Value::Object(e)) = (m.as_object_mut(), extra) {
        o.extend(e);
    }
    m
}

pub fn cmd_reference(args: &RunArgs) -> Result<Report, CliError> {
    let start = Instant::now();
    let cfg = resolve(args)?;
    let mut t = Table::new(&["index", "lambda", "n", "k", "multiplicity"]);
    let spec = match ref_geometry(cfg.geometry, cfg.gamma) {
        Some(g) => reference_spectrum(g, cfg.c, cfg.count)?,
        None => {
            let v = tabulated(cfg.geometry, cfg.c, cfg.count)
                .ok_or_else(|| CliError::BadArgument(format!("no reference values for {} with c = {}", args.geometry, cfg.c)))?;
            if v.len() < cfg.count {
                return Err(CliError::BadArgument(format!("only {} reference values are tabulated", v.len())));
            }
            Spectrum::new(v)
        }
    };
    let mult = spec.multiplicities();
    for (i, &v) in spec.values.iter().enumerate() {
        let tag = spec.tags.get(i).copied().flatten();
        t.push(vec![(i + 1).into(), v.into(), tag.map(|t| t.n).into(), tag.map(|t| t.k).into(), mult[i].into()]);
    }
    Ok(Report { table: t, meta: meta("reference", args, start, json!({})), failures: 0 })
}

/// Computed spectrum, its references when known and the discrete size.
pub struct Solved {
    pub spectrum: Spectrum,
    pub reference: Vec<Option<f64>>,
    pub dof: usize,
    pub extra: Value,
}

fn default_modes(cfg: &Config) -> usize {
    cfg.n.unwrap_or(match cfg.geometry {
        Geometry::Sector => cfg.count,
        _ => cfg.count.saturating_sub(1),
    })
}

pub fn solve(cfg: &Config) -> Result<Solved, CliError> {
    let want = cfg.count;
    let (spectrum, dof, extra) = match cfg.geometry {
        Geometry::Ball { d } => {
            let n_max = default_modes(cfg);
            let method = core_method(cfg.method);
            let p = BallProblem { d, c: cfg.c, k: cfg.k, n_max, method };
            let mut dof = 0;
            for n in 0..=n_max {
                dof += mode_size(method, n, cfg.c, d, cfg.k)? * harmonic_dim(n, d);
            }
            (ball_solver::solve_ball(&p, want)?, dof, json!({}))
        }
        Geometry::Sector => {
            let n_max = default_modes(cfg);
            let p = SectorProblem { gamma: cfg.gamma, c: cfg.c, k: cfg.k, n_max, method: core_method(cfg.method) };
            (sector_solver::solve_sector(&p, want)?, cfg.k * n_max, json!({}))
        }
        Geometry::Square | Geometry::LShape => {
            let mesh = MortarMesh::new(cfg.geometry.domain().expect("mortar"), cfg.r, cfg.c, cfg.quads.0, cfg.quads.1, None)?;
            let res = solve_msem(&mesh, want)?;
            let extra = json!({ "reduced_dof": res.reduced_dof, "constraint_rank": res.constraint_rank });
            (res.spectrum, res.dof, extra)
        }
    };
    let reference: Vec<Option<f64>> = match ref_geometry(cfg.geometry, cfg.gamma) {
        Some(g) => reference_spectrum(g, cfg.c, want)?.values.into_iter().map(Some).collect(),
        None => {
            let v = tabulated(cfg.geometry, cfg.c, want).unwrap_or_default();
            (0..want).map(|i| v.get(i).copied()).collect()
        }
    };
    Ok(Solved { spectrum, reference, dof, extra })
}

pub fn cmd_solve(args: &RunArgs) -> Result<Report, CliError> {
    let start = Instant::now();
    let cfg = resolve(args)?;
    let s = solve(&cfg)?;
    let mut t = Table::new(&["index", "lambda", "reference", "abs_error", "n", "k", "multiplicity", "dof"]);
    let mult = s.spectrum.multiplicities();
    for (i, &v) in s.spectrum.values.iter().enumerate() {
        let r = s.reference[i];
        let tag = s.spectrum.tags.get(i).copied().flatten();
        t.push(vec![
            (i + 1).into(),
            v.into(),
            r.into(),
            r.map(|r| (v - r).abs()).into(),
            tag.map(|t| t.n).into(),
            tag.map(|t| t.k).into(),
            mult[i].into(),
            s.dof.into(),
        ]);
    }
    Ok(Report { table: t, meta: meta("solve", args, start, s.extra), failures: 0 })
}

/// Relative error at which Methods I/II hit roundoff.
pub const SPECTRAL_FLOOR: f64 = 1e-13;
/// Absolute error at which the mortar sweep hits roundoff.
pub const MORTAR_FLOOR: f64 = 1e-12;

/// Mortar degrees at sweep index `m`: fixed disk radial degree, angular
/// degree and quad degrees growing together.
pub fn mortar_path(m: usize) -> QuadDegrees {
    ((3, m + 2), [(2 * m, 2 * m + 1); 4])
}

const CONVERGENCE_COLUMNS: [&str; 9] = ["kind", "K", "dof", "sqrt_dof", "eig_index", "n", "abs_error", "slope", "reference_slope"];

struct Point {
    k: usize,
    dof: usize,
    index: usize,
    n: Option<usize>,
    err: f64,
}

fn point_row(p: &Point, sqrt_dof: bool) -> Vec<Cell> {
    vec![
        "point".into(),
        p.k.into(),
        p.dof.into(),
        if sqrt_dof { Cell::Float((p.dof as f64).sqrt()) } else { Cell::Empty },
        p.index.into(),
        p.n.into(),
        p.err.into(),
        Cell::Empty,
        Cell::Empty,
    ]
}

fn fit_row(index: usize, n: Option<usize>, slope: Option<f64>, reference: Option<f64>) -> Vec<Cell> {
    vec![
        "fit".into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        index.into(),
        n.into(),
        Cell::Empty,
        slope.into(),
        reference.into(),
    ]
}

fn fit(x: &[f64], y: &[f64]) -> Option<f64> {
    (x.len() >= 2).then(|| ls_slope(x, y))
}

pub fn cmd_convergence(args: &RunArgs) -> Result<Report, CliError> {
    let start = Instant::now();
    let cfg = resolve(args)?;
    let sweep = cfg.sweep.clone().ok_or_else(|| CliError::BadArgument("convergence needs --sweep K=a:b:step".into()))?;
    let mut t = Table::new(&CONVERGENCE_COLUMNS);
    let mut points = Vec::new();
    match (cfg.geometry, cfg.method) {
        (Geometry::Ball { d }, MethodArg::Classic | MethodArg::Poly) => {
            let method = core_method(cfg.method);
            let n_max = cfg.n.unwrap_or(2);
            let total: usize = (0..=n_max).map(|n| harmonic_dim(n, d)).sum();
            let r = reference_spectrum(specfun::Geometry::Ball { d }, cfg.c, 2 * total + 2)?;
            for n in 0..=n_max {
                let index = r.tags.iter().position(|t| t.is_some_and(|t| t.n == n && t.k == 1)).map_or(0, |i| i + 1);
                let mut lx = Vec::new();
                let mut ly = Vec::new();
                for &k in &sweep {
                    let err = baseline_lowest_error(method, n, cfg.c, d, k)?;
                    let p = Point { k, dof: mode_size(method, n, cfg.c, d, k)?, index, n: Some(n), err };
                    t.push(point_row(&p, false));
                    if err > 0.0 {
                        lx.push((k as f64).ln());
                        ly.push(err.ln());
                    }
                }
                let b = ball_solver::beta(n, cfg.c, d);
                let expect = if method == Method::Classic { -4.0 * b } else { -2.0 * b };
                points.push(fit_row(index, Some(n), fit(&lx, &ly), Some(expect)));
            }
        }
        (Geometry::Square | Geometry::LShape, _) => {
            let refs = tabulated(cfg.geometry, cfg.c, cfg.count)
                .filter(|v| v.len() == cfg.count)
                .ok_or_else(|| CliError::BadArgument(format!("no {} reference values for {} with c = {}", cfg.count, args.geometry, cfg.c)))?;
            let mut series: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); cfg.count];
            for &m in &sweep {
                let (k0, quads) = mortar_path(m);
                let mesh = MortarMesh::new(cfg.geometry.domain().expect("mortar"), cfg.r, cfg.c, k0, quads, None)?;
                let res = solve_msem(&mesh, cfg.count)?;
                for (i, (&v, &r)) in res.spectrum.values.iter().zip(&refs).enumerate() {
                    let err = (v - r).abs();
                    t.push(point_row(&Point { k: m, dof: res.dof, index: i + 1, n: None, err }, true));
                    if err > MORTAR_FLOOR {
                        series[i].0.push((res.dof as f64).sqrt());
                        series[i].1.push(err.log10());
                    }
                }
            }
            for (i, (x, y)) in series.iter().enumerate() {
                points.push(fit_row(i + 1, None, fit(x, y), None));
            }
        }
        _ => {
            let mut series: Vec<(Option<usize>, Vec<f64>, Vec<f64>)> = vec![(None, Vec::new(), Vec::new()); cfg.count];
            for &k in &sweep {
                let c = Config { k, ..cfg.clone() };
                let s = solve(&c)?;
                for (i, &v) in s.spectrum.values.iter().enumerate() {
                    let r = s.reference[i].expect("Bessel reference");
                    let err = (v - r).abs();
                    let n = s.spectrum.tags[i].map(|t| t.n);
                    t.push(point_row(&Point { k, dof: s.dof, index: i + 1, n, err }, false));
                    series[i].0 = series[i].0.or(n);
                    if err > SPECTRAL_FLOOR * r {
                        series[i].1.push(k as f64);
                        series[i].2.push(err.log10());
                    }
                }
            }
            for (i, (n, x, y)) in series.iter().enumerate() {
                points.push(fit_row(i + 1, *n, fit(x, y), None));
            }
        }
    }
    for row in points {
        t.push(row);
    }
    Ok(Report { table: t, meta: meta("convergence", args, start, json!({})), failures: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_names() {
        assert_eq!(parse_geometry("disk").unwrap(), Geometry::Ball { d: 2 });
        assert_eq!(parse_geometry("balld:4").unwrap(), Geometry::Ball { d: 4 });
        assert!(parse_geometry("balld:1").is_err());
        assert!(parse_geometry("torus").is_err());
    }

    #[test]
    fn sweeps() {
        assert_eq!(parse_sweep("K=4:10:2").unwrap(), vec![4, 6, 8, 10]);
        assert_eq!(parse_sweep("K=16:256:x2").unwrap(), vec![16, 32, 64, 128, 256]);
        assert!(parse_sweep("K=4:10").is_err());
        assert!(parse_sweep("N=1:2:1").is_err());
        assert!(parse_sweep("K=0:4:1").is_err());
    }

    #[test]
    fn quad_degree_list() {
        let q = parse_quad_degrees("14,10,17,18,17,18,17,18,17,18").unwrap();
        assert_eq!(q, ((14, 10), [(17, 18); 4]));
        assert!(parse_quad_degrees("1,2,3").is_err());
    }

    #[test]
    fn square_laplacian_table() {
        let v = tabulated(Geometry::Square, 0.0, 4).unwrap();
        let l = PI * PI / 4.0;
        assert_eq!(v, vec![2.0 * l, 5.0 * l, 5.0 * l, 8.0 * l]);
    }
}

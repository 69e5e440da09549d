use crate::args::{ModuleArg, ValidateArgs};
use crate::output::Table;
use crate::{CliError, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sobolev_core::ball_solver::{self, method1_blocks, method2_blocks, radial_by_quadrature, BallProblem, Method};
use sobolev_core::eiglin::{self, DenseMatrix, DenseSymMatrix, SymBandedMatrix};
use sobolev_core::mortar_sem::{assemble_mortar_constraints, gh_jacobian, gh_map, Domain, GordonHallMap, MortarMesh};
use sobolev_core::orthopoly::{connection_split, gauss_rule, jacobi_derivative, jacobi_eval, jacobi_norm, JacobiParam, QuadKind};
use sobolev_core::sector_solver::{self, assemble_sector, beta_sector, sector_weight, SectorProblem};
use sobolev_core::specfun::{bessel_j, bessel_zero};
use std::f64::consts::PI;
use std::time::Instant;

/// Outcome of one oracle comparison: worst observed deviation vs tolerance.
#[derive(Debug, Clone)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

type Suite = Result<Vec<Check>, CliError>;

fn check(module: &'static str, name: &'static str, value: f64, tolerance: f64) -> Check {
    // NaN fails
    let value = if value.is_nan() { f64::INFINITY } else { value };
    Check { module, name, value, tolerance }
}

fn jp(a: f64, b: f64) -> Result<JacobiParam, CliError> {
    JacobiParam::new(a, b).map_err(|e| CliError::Numerical(e.to_string()))
}

fn ortho(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn orthopoly_suite(rng: &mut ChaCha8Rng) -> Suite {
    let mut orth: f64 = 0.0;
    for _ in 0..20 {
        let (a, b) = (rng.gen_range(-0.99..3.0), rng.gen_range(-0.99..3.0));
        let p = jp(a, b)?;
        let rule = gauss_rule(QuadKind::Jacobi { alpha: a, beta: b }, 14).map_err(ortho)?;
        for m in 0..=12 {
            for n in m..=12 {
                let s = rule.integrate(|z| jacobi_eval(p, m, z).unwrap() * jacobi_eval(p, n, z).unwrap());
                let dev = if m == n {
                    let g = jacobi_norm(p, n).map_err(ortho)?;
                    (s - g).abs() / g
                } else {
                    s.abs()
                };
                orth = orth.max(dev);
            }
        }
    }
    let mut sym: f64 = 0.0;
    let mut deriv: f64 = 0.0;
    for _ in 0..200 {
        let pick = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.25) { -1.0 } else { rng.gen_range(-0.99..3.0) };
        let (a, b) = (pick(rng), pick(rng));
        let n = rng.gen_range(0..=15);
        let z: f64 = rng.gen_range(-0.95..0.95);
        let u = jacobi_eval(jp(a, b)?, n, z).map_err(ortho)?;
        let v = jacobi_eval(jp(b, a)?, n, -z).map_err(ortho)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sym = sym.max((u - sign * v).abs() / (1.0 + u.abs()));
        if n >= 1 && b > -1.0 {
            let p = jp(a, b)?;
            let h = 1e-6;
            let fd = (jacobi_eval(p, n, z + h).map_err(ortho)? - jacobi_eval(p, n, z - h).map_err(ortho)?) / (2.0 * h);
            let d = jacobi_derivative(p, n, z).map_err(ortho)?;
            deriv = deriv.max((d - fd).abs() / d.abs().max(u.abs()).max(1.0));
        }
    }
    let mut conn: f64 = 0.0;
    for _ in 0..20 {
        let b: f64 = rng.gen_range(0.0..3.0);
        let n = rng.gen_range(2..=12);
        let c = connection_split(jp(-1.0, b)?, n).map_err(ortho)?;
        let q = jp(0.0, b + 1.0)?;
        let z: f64 = rng.gen_range(-1.0..1.0);
        let lhs = (2.0 * n as f64 + b) / (n as f64 + b) * jacobi_eval(jp(-1.0, b)?, n, z).map_err(ortho)?;
        let rhs = c[0] * jacobi_eval(q, n, z).map_err(ortho)?
            + c[1] * jacobi_eval(q, n - 1, z).map_err(ortho)?
            + c[2] * jacobi_eval(q, n - 2, z).map_err(ortho)?;
        conn = conn.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
    }
    Ok(vec![
        check("orthopoly", "jacobi_orthogonality", orth, 1e-11),
        check("orthopoly", "jacobi_reflection_symmetry", sym, 1e-13),
        check("orthopoly", "jacobi_derivative_vs_differences", deriv, 1e-6),
        check("orthopoly", "connection_identity", conn, 1e-12),
    ])
}

fn specfun_suite(rng: &mut ChaCha8Rng) -> Suite {
    let mut half: f64 = 0.0;
    for _ in 0..100 {
        let x: f64 = rng.gen_range(0.01..50.0);
        let j = bessel_j(0.5, x)?;
        half = half.max((j - (2.0 / (PI * x)).sqrt() * x.sin()).abs());
    }
    let mut resid: f64 = 0.0;
    for _ in 0..20 {
        let nu: f64 = rng.gen_range(0.0..5.0);
        let k = rng.gen_range(1..=6);
        let z = bessel_zero(nu, k)?;
        let scale = sobolev_core::specfun::bessel_jp(nu, z)?.abs() * z;
        resid = resid.max(bessel_j(nu, z)?.abs() / scale.max(1.0));
    }
    Ok(vec![
        check("specfun", "bessel_half_order_sine_identity", half, 1e-12),
        check("specfun", "bessel_zero_residual", resid, 1e-12),
    ])
}

/// Quadratic Lagrange element on a unit interval, nodes 0, 1/2, 1.
fn p2_element() -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let k = [[7.0, -8.0, 1.0], [-8.0, 16.0, -8.0], [1.0, -8.0, 7.0]].map(|r| r.map(|v| v / 3.0));
    let m = [[4.0, 2.0, -1.0], [2.0, 16.0, 2.0], [-1.0, 2.0, 4.0]].map(|r| r.map(|v| v / 30.0));
    (k, m)
}

/// Two-element mortar toy on (0, 2): broken space plus one matching row
/// against the conforming assembly. Returns the largest relative gap.
pub fn mortar_toy_gap() -> Result<f64, CliError> {
    let (ke, me) = p2_element();
    let broken: [[Option<usize>; 3]; 2] = [[None, Some(0), Some(1)], [Some(2), Some(3), None]];
    let shared: [[Option<usize>; 3]; 2] = [[None, Some(0), Some(1)], [Some(1), Some(2), None]];
    let assemble = |map: &[[Option<usize>; 3]; 2], size: usize| {
        let mut a = DenseSymMatrix::zeros(size);
        let mut b = DenseSymMatrix::zeros(size);
        for e in map {
            for i in 0..3 {
                for j in i..3 {
                    if let (Some(p), Some(q)) = (e[i], e[j]) {
                        a.add(p, q, ke[i][j]);
                        b.add(p, q, me[i][j]);
                    }
                }
            }
        }
        (a, b)
    };
    let (ab, bb) = assemble(&broken, 4);
    let (ac, bc) = assemble(&shared, 3);
    let c = DenseMatrix::from_rows(&[vec![0.0, 1.0, -1.0, 0.0]]);
    let s = eiglin::reduce_constrained_gevp(&ab, &bb, &c, 3)?;
    let r = eiglin::solve_gevp(&ac, &bc, 3)?;
    Ok(s.values.iter().zip(&r.values).map(|(x, y)| (x - y).abs() / y).fold(0.0, f64::max))
}

fn random_spd(n: usize, rng: &mut ChaCha8Rng, shift: f64) -> DenseSymMatrix {
    let g: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DenseSymMatrix::from_fn(n, |i, j| (0..n).map(|k| g[k * n + i] * g[k * n + j]).sum::<f64>() + if i == j { shift } else { 0.0 })
}

fn eiglin_suite(rng: &mut ChaCha8Rng) -> Suite {
    let a = random_spd(20, rng, 1.0);
    let b = random_spd(20, rng, 20.0);
    let p = eiglin::solve_gevp_vectors(&a, &b, 5)?;
    let v = p.vectors.expect("vectors requested");
    let mut resid: f64 = 0.0;
    for c in 0..5 {
        let x = v.column(c);
        let ax = a.mul_vec(&x);
        let bx = b.mul_vec(&x);
        let r = ax.iter().zip(&bx).map(|(u, w)| (u - p.values[c] * w).powi(2)).sum::<f64>().sqrt();
        resid = resid.max(r / p.values[c].max(1.0));
    }
    Ok(vec![
        check("eiglin", "two_element_mortar_equals_conforming", mortar_toy_gap()?, 1e-12),
        check("eiglin", "random_pencil_residual", resid, 1e-10),
    ])
}

/// Largest closed-form vs quadrature gap, stiffness relative to its largest
/// diagonal entry and mass absolute.
fn closed_form_gap(method: Method, beta: f64, d: usize, kmax: usize) -> Result<f64, CliError> {
    let (s, m) = match method {
        Method::I => method1_blocks(beta, d, 1, kmax),
        _ => method2_blocks(beta, d, 1, kmax),
    };
    let (qa, qb) = radial_by_quadrature(method, beta, d, 1, kmax)?;
    let a = SymBandedMatrix::diagonal(s);
    let scale = a.get(kmax - 1, kmax - 1);
    let mut gap: f64 = 0.0;
    for i in 0..kmax {
        for j in 0..kmax {
            gap = gap.max((a.get(i, j) - qa[i * kmax + j]).abs() / scale);
            gap = gap.max((m.get(i, j) - qb[i * kmax + j]).abs());
        }
    }
    Ok(gap)
}

fn ball_suite(rng: &mut ChaCha8Rng) -> Suite {
    let mut gap: f64 = 0.0;
    for _ in 0..8 {
        let beta: f64 = rng.gen_range(0.4..3.0);
        let d = rng.gen_range(2..=3);
        for method in [Method::I, Method::II] {
            gap = gap.max(closed_form_gap(method, beta, d, 20)?);
        }
    }
    let s = ball_solver::solve_ball(&BallProblem { d: 2, c: 0.5, k: 16, n_max: 3, method: Method::II }, 1)?;
    Ok(vec![
        check("ball", "closed_form_vs_quadrature", gap, 1e-12),
        check("ball", "disk_ground_state", (s.values[0] - PI * PI).abs() / (PI * PI), 1e-12),
    ])
}

fn sector_suite(rng: &mut ChaCha8Rng) -> Suite {
    let mut gap: f64 = 0.0;
    for _ in 0..6 {
        let gamma: f64 = rng.gen_range(0.5..2.0);
        let c: f64 = rng.gen_range(0.0..1.0);
        let n = rng.gen_range(1..=3);
        let beta = beta_sector(n, c, gamma);
        if !(0.4..=3.0).contains(&beta) {
            continue;
        }
        for method in [Method::I, Method::II] {
            let m = assemble_sector(method, n, c, gamma, 20)?;
            let (qa, qb) = radial_by_quadrature(method, beta, 2, 1, 20)?;
            let w = sector_weight(gamma);
            let scale = m.a.get(19, 19);
            for i in 0..20 {
                for j in 0..20 {
                    gap = gap.max((m.a.get(i, j) - w * qa[i * 20 + j]).abs() / scale);
                    gap = gap.max((m.b.get(i, j) - w * qb[i * 20 + j]).abs());
                }
            }
        }
    }
    let p = SectorProblem { gamma: 2.0 / 3.0, c: 0.5, k: 16, n_max: 2, method: Method::II };
    let v = sector_solver::solve_sector(&p, 1)?.values[0];
    let j = bessel_zero(beta_sector(1, 0.5, 2.0 / 3.0), 1)?;
    Ok(vec![
        check("sector", "closed_form_vs_quadrature", gap, 1e-12),
        check("sector", "ground_state", (v - j * j).abs() / (j * j), 1e-10),
    ])
}

fn mortar_suite(rng: &mut ChaCha8Rng) -> Suite {
    let mut fd_gap: f64 = 0.0;
    let mut arc: f64 = 0.0;
    let h = 1e-6;
    for domain in [Domain::Square, Domain::LShape] {
        for kappa in 1..=4 {
            let m = GordonHallMap::new(domain, kappa, rng.gen_range(0.2..0.7))?;
            for _ in 0..50 {
                let (xi, eta): (f64, f64) = (rng.gen_range(-0.999..0.999), rng.gen_range(-0.999..0.999));
                let (j, _) = gh_jacobian(&m, xi, eta);
                let (xp, yp) = gh_map(&m, xi + h, eta);
                let (xm, ym) = gh_map(&m, xi - h, eta);
                let (xe, ye) = gh_map(&m, xi, eta + h);
                let (xw, yw) = gh_map(&m, xi, eta - h);
                let fd = [[xp - xm, xe - xw], [yp - ym, ye - yw]];
                for r in 0..2 {
                    for c in 0..2 {
                        fd_gap = fd_gap.max((j[r][c] - fd[r][c] / (2.0 * h)).abs());
                    }
                }
                let (x, y) = gh_map(&m, -1.0, eta);
                arc = arc.max((x.hypot(y) - m.r).abs());
            }
        }
    }
    // constant trace on both sides of the interface
    let mesh = MortarMesh::new(Domain::Square, 0.3, 0.5, (6, 4), [(7, 6); 4], None)?;
    let c = assemble_mortar_constraints(&mesh);
    let mut u = vec![0.0; mesh.dof_count()];
    let disk = mesh.disk_modes().iter().position(|d| d.k == 0 && d.n == 0).expect("constant mode");
    u[disk] = 1.0;
    for kappa in 1..=4 {
        for b in 0..2 {
            if let Some(g) = mesh.local_to_global(kappa)[b] {
                u[g] = 1.0;
            }
        }
    }
    let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    let cu = (0..c.rows).map(|r| c.row(r).iter().zip(&u).map(|(a, b)| a * b).sum::<f64>().abs()).fold(0.0, f64::max);
    Ok(vec![
        check("mortar", "gordon_hall_jacobian_vs_differences", fd_gap, 1e-6),
        check("mortar", "arc_edge_on_interface", arc, 1e-13),
        check("mortar", "continuous_trace_in_constraint_kernel", cu / norm, 1e-10),
    ])
}

/// Runs the selected suites (all by default). Every suite gets its own RNG
/// stream derived from the seed, so `--module` does not shift the others.
pub fn run_checks(module: Option<ModuleArg>, seed: u64) -> Result<Vec<Check>, CliError> {
    type SuiteFn = fn(&mut ChaCha8Rng) -> Suite;
    let suites: [(ModuleArg, SuiteFn); 6] = [
        (ModuleArg::Orthopoly, orthopoly_suite),
        (ModuleArg::Specfun, specfun_suite),
        (ModuleArg::Eiglin, eiglin_suite),
        (ModuleArg::Ball, ball_suite),
        (ModuleArg::Sector, sector_suite),
        (ModuleArg::Mortar, mortar_suite),
    ];
    let mut out = Vec::new();
    for (i, (m, f)) in suites.iter().enumerate() {
        if module.is_none_or(|want| want == *m) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            out.extend(f(&mut rng)?);
        }
    }
    Ok(out)
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<Report, CliError> {
    let start = Instant::now();
    let checks = run_checks(args.module, args.seed)?;
    let mut t = Table::new(&["module", "check", "passed", "value", "tolerance"]);
    for c in &checks {
        t.push(vec![c.module.into(), c.name.into(), c.passed().into(), c.value.into(), c.tolerance.into()]);
    }
    let failures = checks.iter().filter(|c| !c.passed()).count();
    let meta = json!({
        "command": "validate",
        "config": args,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_s": start.elapsed().as_secs_f64(),
        "checks": checks.len(),
        "failures": failures,
    });
    Ok(Report { table: t, meta, failures })
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sobolev_core::mortar_sem::*;
use sobolev_core::orthopoly::gauss_legendre;
use std::f64::consts::PI;

fn square(r: f64, c: f64, kn: (usize, usize), quad: (usize, usize)) -> MortarMesh {
    MortarMesh::new(Domain::Square, r, c, kn, [quad; 4], None).unwrap()
}

fn all_maps() -> Vec<GordonHallMap> {
    let mut v = Vec::new();
    for domain in [Domain::Square, Domain::LShape] {
        for &r in &[0.3, 0.5] {
            for kappa in 1..=4 {
                v.push(GordonHallMap::new(domain, kappa, r).unwrap());
            }
        }
    }
    v
}

#[test]
fn jacobian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = 1e-6;
    for m in all_maps() {
        for _ in 0..50 {
            let xi: f64 = rng.gen_range(-0.999..0.999);
            let eta: f64 = rng.gen_range(-0.999..0.999);
            let (j, det) = gh_jacobian(&m, xi, eta);
            let (xp, yp) = gh_map(&m, xi + h, eta);
            let (xm, ym) = gh_map(&m, xi - h, eta);
            let (xe, ye) = gh_map(&m, xi, eta + h);
            let (xw, yw) = gh_map(&m, xi, eta - h);
            let fd = [[(xp - xm) / (2.0 * h), (xe - xw) / (2.0 * h)], [(yp - ym) / (2.0 * h), (ye - yw) / (2.0 * h)]];
            for r in 0..2 {
                for c in 0..2 {
                    assert!((j[r][c] - fd[r][c]).abs() < 1e-6, "{m:?}");
                }
            }
            let fdet = fd[0][0] * fd[1][1] - fd[0][1] * fd[1][0];
            assert!((det - fdet).abs() < 1e-6);
        }
    }
}

#[test]
fn maps_are_nondegenerate() {
    for m in all_maps() {
        let sign = gh_jacobian(&m, 0.0, 0.0).1.signum();
        for i in 0..20 {
            for j in 0..20 {
                let xi = -1.0 + 2.0 * i as f64 / 19.0;
                let eta = -1.0 + 2.0 * j as f64 / 19.0;
                let (_, det) = gh_jacobian(&m, xi, eta);
                assert!(det * sign > 0.0, "{m:?} at ({xi}, {eta})");
            }
        }
    }
}

#[test]
fn arc_edge_lies_on_the_interface() {
    for m in all_maps() {
        for i in 0..=40 {
            let eta = -1.0 + i as f64 / 20.0;
            let (x, y) = gh_map(&m, -1.0, eta);
            assert!((x.hypot(y) - m.r).abs() < 1e-13);
            let (th, _) = m.arc_angle(eta);
            assert!((x - m.r * th.cos()).abs() < 1e-13 && (y - m.r * th.sin()).abs() < 1e-13);
        }
    }
}

#[test]
fn map_examples() {
    let m = GordonHallMap::new(Domain::Square, 1, 0.3).unwrap();
    let (x, y) = gh_map(&m, 1.0, -0.25);
    assert!((x - 1.0).abs() < 1e-15 && (y + 0.25).abs() < 1e-15);
    let (x, y) = gh_map(&m, -1.0, 0.0);
    assert!((x - 0.3).abs() < 1e-15 && y.abs() < 1e-15);
    assert!((gh_jacobian(&m, 1.0, 0.0).1 - 0.35).abs() < 1e-15);
    let m = GordonHallMap::new(Domain::LShape, 1, 0.5).unwrap();
    let (x, y) = gh_map(&m, 1.0, 1.0);
    assert!((x - 1.0).abs() < 1e-15 && (y - 1.0).abs() < 1e-15);
}

#[test]
fn quad_area() {
    let (x, w) = gauss_legendre::<f64>(40);
    for &r in &[0.3, 0.5] {
        for kappa in 1..=4 {
            let m = GordonHallMap::new(Domain::Square, kappa, r).unwrap();
            let mut area = 0.0;
            for (xi, wx) in x.iter().zip(&w) {
                for (eta, we) in x.iter().zip(&w) {
                    area += wx * we * gh_jacobian(&m, *xi, *eta).1.abs();
                }
            }
            assert!((area - (4.0 - PI * r * r) / 4.0).abs() < 1e-10);
        }
    }
}

#[test]
fn square_quads_are_rotations_of_each_other() {
    let one = assemble_quad_element(&GordonHallMap::new(Domain::Square, 1, 0.3).unwrap(), 0.5, 6, 5, 24).unwrap();
    for kappa in 2..=4 {
        let e = assemble_quad_element(&GordonHallMap::new(Domain::Square, kappa, 0.3).unwrap(), 0.5, 6, 5, 24).unwrap();
        for (u, v) in one.stiffness.data().iter().zip(e.stiffness.data()) {
            assert!((u - v).abs() < 1e-13);
        }
        for (u, v) in one.mass.data().iter().zip(e.mass.data()) {
            assert!((u - v).abs() < 1e-13);
        }
    }
}

#[test]
fn element_matrices_are_definite() {
    use sobolev_core::eiglin::{solve_gevp, DenseSymMatrix};
    let m = GordonHallMap::new(Domain::LShape, 4, 0.5).unwrap();
    let e = assemble_quad_element(&m, 0.0, 5, 5, 24).unwrap();
    let id = DenseSymMatrix::identity(e.mass.order());
    assert!(solve_gevp(&e.mass, &id, 1).unwrap().values[0] > 0.0);
    assert!(solve_gevp(&e.stiffness, &e.mass, 1).unwrap().values[0] > 0.0);
    assert!(quadrature_drift(&m, 0.0, 5, 5, 24).unwrap() < 1e-11);
}

#[test]
fn interface_block_scales_with_radius() {
    let a = assemble_interface_block(Domain::Square, 0.3, 0.5, 6, 3).unwrap();
    let b = assemble_interface_block(Domain::Square, 0.6, 0.5, 6, 3).unwrap();
    for (u, v) in a.stiffness.data().iter().zip(b.stiffness.data()) {
        assert_eq!(u, v);
    }
    for (u, v) in a.mass.data().iter().zip(b.mass.data()) {
        assert!((4.0 * u - v).abs() < 1e-15);
    }
}

#[test]
fn constraint_structure() {
    for mesh in [
        square(0.3, 0.5, (6, 4), (7, 6)),
        MortarMesh::new(Domain::LShape, 0.5, 0.0, (6, 4), [(7, 5), (7, 6), (7, 6), (7, 5)], None).unwrap(),
    ] {
        let c = assemble_mortar_constraints(&mesh);
        for (i, d) in mesh.disk_modes().iter().enumerate() {
            if d.k >= 1 {
                assert!((0..c.rows).all(|r| c.get(r, i) == 0.0));
            }
        }
        // quad functions with a ≥ 2 vanish on the arc
        for kappa in 1..=4 {
            let (_, n) = mesh.quads[kappa - 1];
            for (l, g) in mesh.local_to_global(kappa).iter().enumerate() {
                if let Some(g) = g {
                    if l >= n + 1 {
                        let shared_arc = (1..=4).any(|q| {
                            let nq = mesh.quads[q - 1].1;
                            mesh.local_to_global(q)[..=nq].contains(&Some(*g))
                        });
                        if !shared_arc {
                            assert!((0..c.rows).all(|r| c.get(r, *g) == 0.0));
                        }
                    }
                }
            }
        }
        assert_eq!(sobolev_core::eiglin::constraint_rank(&c).unwrap(), c.rows);
    }
}

#[test]
fn continuous_constant_trace_satisfies_the_constraints() {
    let mesh = square(0.3, 0.5, (6, 4), (7, 6));
    let c = assemble_mortar_constraints(&mesh);
    let mut u = vec![0.0; mesh.dof_count()];
    let disk = mesh.disk_modes().iter().position(|d| d.k == 0 && d.n == 0).unwrap();
    u[disk] = 1.0;
    for kappa in 1..=4 {
        let loc = mesh.local_to_global(kappa);
        // φ_1(ξ) times the two η hats
        for b in 0..2 {
            u[loc[b].unwrap()] = 1.0;
        }
    }
    let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    for r in 0..c.rows {
        let s: f64 = c.row(r).iter().zip(&u).map(|(a, b)| a * b).sum();
        assert!(s.abs() <= 1e-10 * norm, "row {r}: {s}");
    }
    let row0: f64 = c.get(0, disk);
    assert!((row0 - 2.0 * PI * 0.3).abs() < 1e-14);
}

#[test]
fn square_laplacian() {
    let res = solve_msem(&square(0.3, 0.0, (8, 8), (12, 12)), 4).unwrap();
    let l = PI * PI / 4.0;
    assert!((res.spectrum.values[0] - 2.0 * l).abs() < 1e-9);
    assert!((res.spectrum.values[1] - 5.0 * l).abs() < 1e-9);
    assert!((res.spectrum.values[3] - 8.0 * l).abs() < 1e-9);
    assert_eq!(res.reduced_dof, res.dof - res.constraint_rank);
}

#[test]
fn square_degeneracy_pattern() {
    let res = solve_msem(&square(0.3, 0.5, (10, 8), (12, 12)), 8).unwrap();
    let g = res.spectrum.groups();
    let mult: Vec<usize> = g.iter().map(|g| g.multiplicity).collect();
    assert_eq!(&mult[..6], &[1, 2, 1, 1, 1, 2]);
}

#[test]
fn interface_radius_does_not_matter() {
    let a = solve_msem(&square(0.3, 0.5, (12, 9), (14, 14)), 4).unwrap();
    let b = solve_msem(&square(0.4, 0.5, (12, 9), (14, 14)), 4).unwrap();
    for (x, y) in a.spectrum.values.iter().zip(&b.spectrum.values) {
        assert!((x - y).abs() <= 1e-7);
    }
}

#[test]
fn quadrature_doubling_is_stable() {
    let mut mesh = square(0.3, 0.5, (8, 6), (10, 10));
    let auto = solve_msem(&mesh, 4).unwrap();
    mesh.q = Some(2 * (10 + 16) * 2);
    let fine = solve_msem(&mesh, 4).unwrap();
    for (x, y) in auto.spectrum.values.iter().zip(&fine.spectrum.values) {
        assert!((x - y).abs() <= 1e-10);
    }
}

#[test]
fn raising_degrees_never_raises_eigenvalues() {
    let base = solve_msem(&square(0.3, 0.5, (6, 5), (8, 8)), 4).unwrap();
    let mut quads = [(8, 8); 4];
    quads[0].1 = 10;
    let more = MortarMesh::new(Domain::Square, 0.3, 0.5, (6, 5), quads, None).unwrap();
    let more = solve_msem(&more, 4).unwrap();
    let bigger = solve_msem(&square(0.3, 0.5, (8, 5), (10, 8)), 4).unwrap();
    for i in 0..4 {
        assert!(more.spectrum.values[i] <= base.spectrum.values[i] + 1e-10);
        assert!(bigger.spectrum.values[i] <= base.spectrum.values[i] + 1e-10);
    }
}

#[test]
fn lshape_square_mode() {
    let mesh = MortarMesh::new(Domain::LShape, 0.5, 0.0, (14, 12), [(12, 8), (12, 12), (12, 12), (12, 8)], None).unwrap();
    let res = solve_msem(&mesh, 3).unwrap();
    assert!((res.spectrum.values[2] - 2.0 * PI * PI).abs() < 1e-9);
    assert!((res.spectrum.values[0] - 9.639723844021988).abs() < 1e-7);
}

#[test]
fn mesh_errors() {
    assert!(GordonHallMap::new(Domain::Square, 5, 0.3).is_err());
    assert!(GordonHallMap::new(Domain::Square, 1, 1.0).is_err());
    assert!(MortarMesh::new(Domain::Square, 0.3, 0.5, (4, 4), [(5, 5), (6, 5), (5, 5), (5, 5)], None).is_err());
    assert!(MortarMesh::new(Domain::LShape, 0.3, 0.5, (4, 0), [(5, 5); 4], None).is_err());
    assert!(MortarMesh::new(Domain::Square, 0.3, -0.5, (4, 4), [(5, 5); 4], None).is_err());
    let mesh = square(0.3, 0.5, (3, 2), (3, 3));
    assert!(solve_msem(&mesh, 0).is_err());
    assert!(solve_msem(&mesh, 10_000).is_err());
}

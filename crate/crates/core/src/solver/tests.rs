use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::Vec2;
use crate::gdm::{DofVector, Hmm};
use crate::linalg::CsrMatrix;
use crate::mesh::{build_mesh, generate, FamilyTag, MeshFamily, PolytopalMesh};
use crate::models::{make_custom, make_gbf, make_heat, ModelData};

fn two_triangles() -> PolytopalMesh<f64> {
    build_mesh(
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.1, 0.1),
            Vec2::new(0.9, 1.0),
            Vec2::new(-0.1, 0.8),
        ],
        vec![vec![0, 1, 2], vec![0, 2, 3]],
    )
    .unwrap()
}

fn tri1() -> PolytopalMesh<f64> {
    generate(MeshFamily::new(FamilyTag::Triangular, 1)).unwrap()
}

fn random_dofs(hmm: &Hmm<'_, f64>, rng: &mut ChaCha8Rng) -> DofVector<f64> {
    let v = (0..hmm.space().len()).map(|_| rng.gen_range(0.1..0.9)).collect();
    DofVector::from_vec(hmm.space(), v).unwrap()
}

/// Half-diamond gradients of one triangle, recomputed from raw vertex
/// coordinates. Local order `[cell, face(v0 v1), face(v1 v2), face(v2 v0)]`.
fn triangle_gradients(p: [Vec2<f64>; 3]) -> (f64, Vec<Vec<Vec2<f64>>>, Vec<Vec2<f64>>) {
    let area = 0.5 * ((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
    let xk = Vec2::new((p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0);
    let mut meas = Vec::new();
    let mut nrm = Vec::new();
    let mut mid = Vec::new();
    let mut dist = Vec::new();
    for i in 0..3 {
        let a = p[i];
        let b = p[(i + 1) % 3];
        let len = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
        let n = Vec2::new((b.y - a.y) / len, -(b.x - a.x) / len);
        let m = Vec2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
        meas.push(len);
        nrm.push(n);
        mid.push(m);
        dist.push((m.x - xk.x) * n.x + (m.y - xk.y) * n.y);
    }
    // consistent gradient coefficients per local dof
    let mut g = vec![Vec2::new(0.0, 0.0)];
    for i in 0..3 {
        g.push(Vec2::new(meas[i] * nrm[i].x / area, meas[i] * nrm[i].y / area));
    }
    let mut grads = Vec::new();
    for j in 0..3 {
        let beta = 2f64.sqrt() / dist[j];
        let mut row = Vec::new();
        for a in 0..4 {
            let delta = (a == j + 1) as i32 as f64 - (a == 0) as i32 as f64;
            let proj = g[a].x * (mid[j].x - xk.x) + g[a].y * (mid[j].y - xk.y);
            let s = beta * (delta - proj);
            row.push(Vec2::new(g[a].x + s * nrm[j].x, g[a].y + s * nrm[j].y));
        }
        grads.push(row);
    }
    (area, grads, g)
}

#[test]
fn assembly_matches_dense_galerkin_oracle() {
    let mesh = two_triangles();
    let hmm = Hmm::new(&mesh);
    let model = make_gbf(2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let prev = random_dofs(&hmm, &mut rng);
    let frozen = random_dofs(&hmm, &mut rng);
    let (dt, t) = (0.03, 0.2);
    let sys = assemble_step(&hmm, &model, &prev, &frozen, t, dt).unwrap();

    let n = hmm.space().len();
    let mut dense = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    for (k, cell) in mesh.cells.iter().enumerate() {
        let vid = &cell.vertex_ids;
        let p = [mesh.vertices[vid[0]], mesh.vertices[vid[1]], mesh.vertices[vid[2]]];
        let (area, grads, g) = triangle_gradients(p);
        // local face j is the edge (v_j, v_{j+1}); map to global dofs
        let mut dofs = vec![hmm.space().cell_dof(k)];
        for j in 0..3 {
            let (a, b) = (vid[j], vid[(j + 1) % 3]);
            let f = mesh
                .faces
                .iter()
                .position(|f| {
                    (f.vertex_ids[0] == a && f.vertex_ids[1] == b)
                        || (f.vertex_ids[0] == b && f.vertex_ids[1] == a)
                })
                .unwrap();
            dofs.push(hmm.space().face_dof(f));
        }
        // diffusion: Σ_j |D_j| ∇e_a·∇e_b
        let xk = Vec2::new((p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0);
        for j in 0..3 {
            let q = p[(j + 1) % 3];
            let d = [p[j], q, xk];
            let dmeas = 0.5
                * ((d[1].x - d[0].x) * (d[2].y - d[0].y) - (d[2].x - d[0].x) * (d[1].y - d[0].y));
            for a in 0..4 {
                for b in 0..4 {
                    let v = grads[j][a].x * grads[j][b].x + grads[j][a].y * grads[j][b].y;
                    dense[dofs[a]][dofs[b]] += model.lambda * dmeas * v;
                }
            }
        }
        // mass, convection against Π_D e_K (the indicator of K)
        let ck = dofs[0];
        let u = frozen.cell(k);
        dense[ck][ck] += area / dt;
        for a in 0..4 {
            dense[ck][dofs[a]] += area * u * u * (g[a].x + g[a].y);
        }
        rhs[ck] += area * prev.cell(k) / dt + area * u * (1.0 - u * u);
    }
    for &f in hmm.space().boundary_faces() {
        let j = hmm.space().face_dof(f);
        let val = gbf_trace(&mesh, f, t);
        for i in 0..n {
            if !hmm.space().is_constrained(i) {
                rhs[i] -= dense[i][j] * val;
            }
            dense[i][j] = 0.0;
        }
        dense[j] = vec![0.0; n];
        dense[j][j] = 1.0;
        rhs[j] = val;
    }
    let got = sys.matrix.to_dense();
    for i in 0..n {
        for j in 0..n {
            assert!((got[i][j] - dense[i][j]).abs() < 1e-12, "({i},{j})");
        }
        assert!((sys.rhs[i] - rhs[i]).abs() < 1e-12, "rhs {i}");
    }
    assert!(sys.matrix.has_symmetric_pattern());
}

fn gbf_trace(mesh: &PolytopalMesh<f64>, f: usize, t: f64) -> f64 {
    let m = mesh.faces[f].midpoint;
    crate::models::gbf_exact(m.x, m.y, t, 2.0)
}

#[test]
fn heat_zero_data_stays_zero() {
    let mesh = tri1();
    let hmm = Hmm::new(&mesh);
    let model = make_heat(1.0).unwrap();
    let traj = run(&hmm, &model, &SolverConfig::new(0.1, 0.5)).unwrap();
    assert_eq!(traj.n_steps(), 5);
    assert!(traj.final_state().max_abs() == 0.0);
}

#[test]
fn linear_model_takes_one_extra_iteration() {
    let mesh = tri1();
    let hmm = Hmm::new(&mesh);
    let mut data = ModelData::homogeneous();
    data.initial = Arc::new(|x: Vec2<f64>| (x.x * std::f64::consts::PI).sin() * x.y * (1.0 - x.y));
    let model = make_custom(
        "linear",
        0.5,
        Arc::new(|_, q: Vec2<f64>| 0.3 * q.x - 0.2 * q.y + 1.0),
        Arc::new(|c| c * c),
        Arc::new(|_| 2.0),
        data,
    );
    // g enters through A, which here ignores u, so the map is constant
    let model = model.unwrap();
    let cfg = SolverConfig::new(0.01, 0.01);
    let traj = run(&hmm, &model, &cfg).unwrap();
    assert_eq!(traj.picard_iters, vec![2]);
}

#[test]
fn single_cell_mass_balance() {
    // λ tiny: the cell row is dominated by mass and reaction
    let mesh = build_mesh(
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ],
        vec![vec![0, 1, 2, 3]],
    )
    .unwrap();
    let hmm = Hmm::new(&mesh);
    let mut data = ModelData::homogeneous();
    data.initial = Arc::new(|_| 0.25);
    data.boundary_trace = Arc::new(|_, _| 0.25);
    let model = make_custom(
        "reaction",
        1e-300,
        Arc::new(|_, _| 0.0),
        Arc::new(|_| 0.0),
        Arc::new(|c: f64| 3.0 * c),
        data,
    )
    .unwrap();
    let prev = DofVector::constant(hmm.space(), 0.25);
    let frozen = DofVector::constant(hmm.space(), 0.4);
    let sys = assemble_step(&hmm, &model, &prev, &frozen, 0.1, 0.1).unwrap();
    let (x, _) = solve_system(&sys, None, &SolverConfig::new(0.1, 0.1)).unwrap();
    assert!((x[0] - (0.25 + 0.1 * 1.2)).abs() < 1e-12);
    assert!(x[1..].iter().all(|&v| v == 0.25));
}

#[test]
fn gbf_first_step_converges_quickly() {
    let mesh = tri1();
    let hmm = Hmm::new(&mesh);
    let model = make_gbf(2.0).unwrap();
    let cfg = SolverConfig::new(0.01, 0.01);
    let assembler = StepAssembler::new(&hmm, &model, cfg.dt);
    let c0 = initial_state(&hmm, &model);
    let (c1, stats) = picard_step(&assembler, &hmm, &c0, 0.01, &cfg).unwrap();
    assert!(stats.iterations <= 10, "{stats:?}");
    assert!(stats.last_update < 1e-10);

    // fixed-point residual
    let (sys, _) = assembler.assemble(&c0, &c1, 0.01).unwrap();
    let (x, _) = solve_system(&sys, None, &cfg).unwrap();
    let again = DofVector::from_vec(hmm.space(), x).unwrap();
    let change = hmm.gradient_norm(&again.difference(&c1)) / hmm.gradient_norm(&c1);
    assert!(change < 10.0 * cfg.picard_tol);

    // boundary exactness
    for &f in hmm.space().boundary_faces() {
        assert_eq!(c1.face(f), gbf_trace(&mesh, f, 0.01));
    }
}

#[test]
fn heat_energy_is_non_increasing() {
    let mesh = generate(MeshFamily::new(FamilyTag::Hexagonal, 1)).unwrap();
    let hmm = Hmm::new(&mesh);
    let mut model = make_heat(1.0).unwrap();
    model.initial = Arc::new(|x: Vec2<f64>| (7.0 * x.x).sin() + x.y * x.y);
    let mut cfg = SolverConfig::new(0.002, 0.02);
    cfg.snapshot_every = Some(1);
    let traj = run(&hmm, &model, &cfg).unwrap();
    assert_eq!(traj.snapshots.len(), 11);
    let energy: Vec<f64> = traj
        .snapshots
        .iter()
        .map(|s| hmm.reconstruction_norm(&s.state))
        .collect();
    for w in energy.windows(2) {
        assert!(w[1] <= w[0] + 1e-14, "{energy:?}");
    }
}

#[test]
fn direct_path_is_deterministic() {
    let mesh = tri1();
    let hmm = Hmm::new(&mesh);
    let model = make_gbf(0.5).unwrap();
    let mut cfg = SolverConfig::new(0.05, 0.2);
    cfg.linear_solver = crate::linalg::LinearSolverKind::Direct;
    let a = run(&hmm, &model, &cfg).unwrap();
    let b = run(&hmm, &model, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn huge_step_terminates() {
    let mesh = tri1();
    let hmm = Hmm::new(&mesh);
    let model = make_gbf(2.0).unwrap();
    let cfg = SolverConfig::new(1e3, 1e3);
    match run(&hmm, &model, &cfg) {
        Ok(t) => assert!(t.max_picard_iters() <= cfg.picard_max),
        Err(e) => assert_eq!(e.step(), Some(1), "{e}"),
    }
}

#[test]
fn time_grid_and_config_validation() {
    assert_eq!(SolverConfig::new(0.01, 1.0).step_count().unwrap(), 100);
    assert_eq!(SolverConfig::new(0.1, 0.1).step_count().unwrap(), 1);
    assert!(matches!(
        SolverConfig::new(0.3, 1.0).step_count(),
        Err(SolverError::InvalidTimeGrid { .. })
    ));
    assert!(SolverConfig::new(-0.1, 1.0).validate().is_err());
    assert!(SolverConfig::new(0.5, 0.1).validate().is_err());
    let mut cfg = SolverConfig::new(0.1, 1.0);
    cfg.picard_max = 0;
    assert!(cfg.validate().is_err());
}

#[test]
fn step_bound_flag() {
    let mesh = tri1();
    let hmm = Hmm::new(&mesh);
    let model = make_heat(1.0).unwrap();
    let mut cfg = SolverConfig::new(0.5, 0.5);
    cfg.coercivity = Some(10.0);
    assert!(run(&hmm, &model, &cfg).unwrap().step_bound_violated);
    cfg.coercivity = Some(0.01);
    assert!(!run(&hmm, &model, &cfg).unwrap().step_bound_violated);
}

#[test]
fn constrained_identity_system() {
    let a = CsrMatrix::<f64>::identity(3);
    let sys = StepSystem {
        matrix: a,
        rhs: vec![1.0, -2.0, 0.5],
        constrained: vec![(0, 1.0), (1, -2.0), (2, 0.5)],
    };
    let (x, _) = solve_system(&sys, None, &SolverConfig::new(0.1, 0.1)).unwrap();
    assert_eq!(x, vec![1.0, -2.0, 0.5]);
}

#[test]
fn zero_row_fails() {
    let a = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (1, 1, 0.0), (0, 1, 0.5), (1, 0, 0.0)]);
    let sys = StepSystem {
        matrix: a,
        rhs: vec![1.0, 1.0],
        constrained: vec![],
    };
    assert!(solve_system(&sys, None, &SolverConfig::new(0.1, 0.1)).is_err());
}

#[test]
fn csv_export() {
    let mesh = tri1();
    let hmm = Hmm::new(&mesh);
    let model = make_heat(1.0).unwrap();
    let traj = run(&hmm, &model, &SolverConfig::new(0.25, 0.5)).unwrap();
    let csv = traj.csv_string();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "step,time,picard_iters,clamp_events");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("2,0.5,"));
    let mut dump = Vec::new();
    write_dofs(traj.last(), &mut dump).unwrap();
    let text = String::from_utf8(dump).unwrap();
    assert!(text.contains(&format!("CELLS {}", mesh.n_cells())));
}

#[test]
fn mismatched_vectors_rejected() {
    let mesh = tri1();
    let other = two_triangles();
    let hmm = Hmm::new(&mesh);
    let small = Hmm::new(&other);
    let model = make_heat(1.0).unwrap();
    let bad = DofVector::zeros(small.space());
    let good = DofVector::zeros(hmm.space());
    let err = assemble_step(&hmm, &model, &good, &bad, 0.1, 0.1).unwrap_err();
    assert!(matches!(err, SolverError::DimensionMismatch { .. }));
}

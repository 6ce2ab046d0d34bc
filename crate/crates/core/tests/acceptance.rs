//! End-to-end regression gate. Each numbered criterion prints one
//! pass/fail line; the test fails if any criterion fails.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steklov::conformal::{
    index_form_normal_direction, length_decrease_suite, second_derivative_boundary_length,
};
use steklov::minsurf::{catalog_surface, solve_critical_parameter, CriticalFamily, SurfaceKind};
use steklov::optimize::{
    bound_checks, conformal_certificate, conformal_path, fd_eigenvalue, flat_torus_lambda1,
    maximize_density, maximize_over_modulus, metric_path, procrustes_residual, q_form_conformal,
    q_form_metric, stress_energy, stress_energy_trace_residual, BoundRecord, Lattice,
    ModulusFamily,
};
use steklov::spectral::{annulus_exact_spectrum, assemble_operators, normalized_sigma};
use steklov::{generate_domain, DiscreteMetric, DomainSpec};

struct Gate {
    lines: Vec<(String, bool, String)>,
}

impl Gate {
    fn record(&mut self, id: usize, name: &str, pass: bool, detail: String) {
        println!(
            "criterion {id:02} {name}: {} ({detail})",
            if pass { "pass" } else { "FAIL" }
        );
        self.lines.push((format!("{id:02} {name}"), pass, detail));
    }
}

fn sigma1_l_disk(resolution: usize) -> f64 {
    let mesh = generate_domain(&DomainSpec::disk(resolution)).unwrap();
    let metric = DiscreteMetric::uniform(&mesh);
    let spec = steklov::spectral::steklov_spectrum(&mesh, &metric, 2).unwrap();
    normalized_sigma(&spec, metric.boundary_length(&mesh), 1).unwrap()
}

#[test]
fn acceptance_gate() {
    let mut gate = Gate { lines: Vec::new() };
    let t0 = solve_critical_parameter(CriticalFamily::Catenoid);
    let sharp_annulus = 4.0 * PI / t0;
    let mut steklov_records: Vec<BoundRecord> = Vec::new();

    // 1. disk value and convergence order
    {
        let errs: Vec<f64> = [5, 10, 20]
            .iter()
            .map(|&r| (sigma1_l_disk(r) - 2.0 * PI).abs())
            .collect();
        let pass = errs[0] <= 0.01 * 2.0 * PI
            && errs[0] / errs[1] >= 3.0
            && errs[1] / errs[2] >= 3.0;
        gate.record(
            1,
            "disk value and convergence",
            pass,
            format!(
                "errors {:.3e} / {:.3e} / {:.3e}, ratios {:.2} and {:.2}",
                errs[0],
                errs[1],
                errs[2],
                errs[0] / errs[1],
                errs[1] / errs[2]
            ),
        );
        steklov_records.push(BoundRecord::Steklov {
            name: "disk (FEM)".into(),
            genus: 0,
            boundary_components: 1,
            sigma1_l: sigma1_l_disk(20),
        });
    }

    // 2. annulus sharp constant
    {
        let rep = maximize_over_modulus(ModulusFamily::Annulus, (0.5, 2.0)).unwrap();
        let pass = (rep.t_star - t0).abs() <= 1e-5
            && (rep.value - sharp_annulus).abs() <= 1e-5
            && (1.0 / rep.t_star.tanh() - rep.t_star).abs() <= 1e-5;
        gate.record(
            2,
            "sharp annulus constant",
            pass,
            format!("T* = {:.10}, value = {:.10}", rep.t_star, rep.value),
        );
        steklov_records.push(BoundRecord::Steklov {
            name: "critical annulus (oracle)".into(),
            genus: 0,
            boundary_components: 2,
            sigma1_l: rep.value,
        });
    }

    // 3. Mobius-band sharp constant
    {
        let rep = maximize_over_modulus(ModulusFamily::Mobius, (0.3, 1.5)).unwrap();
        let t = rep.t_star;
        let pass = (rep.value - 2.0 * PI * 3f64.sqrt()).abs() <= 1e-5
            && (1.0 / t.tanh() - 2.0 * (2.0 * t).tanh()).abs() <= 1e-6;
        gate.record(
            3,
            "sharp Mobius constant",
            pass,
            format!("T* = {:.10}, value = {:.10}", t, rep.value),
        );
        steklov_records.push(BoundRecord::Steklov {
            name: "critical Mobius band (oracle)".into(),
            genus: 0,
            boundary_components: 2,
            sigma1_l: rep.value,
        });
    }

    // 4. FEM agrees with the exact annulus spectrum
    {
        let mesh = generate_domain(&DomainSpec::annulus(1.0, 8)).unwrap();
        let metric = DiscreteMetric::uniform(&mesh);
        let spec = steklov::spectral::steklov_spectrum(&mesh, &metric, 10).unwrap();
        let oracle = annulus_exact_spectrum(1.0, 10).unwrap();
        let worst = (1..10)
            .map(|i| (spec.values[i] - oracle.values[i]).abs() / oracle.values[i])
            .fold(0.0f64, f64::max);
        gate.record(
            4,
            "annulus oracle agreement",
            worst <= 0.01,
            format!("worst relative error {worst:.3e} over 10 eigenvalues"),
        );
    }

    // 5. free-boundary catalog verification
    {
        let mut pass = true;
        let mut details = Vec::new();
        for kind in [SurfaceKind::CriticalCatenoid, SurfaceKind::CriticalMobius] {
            let s = catalog_surface(kind);
            let r = s.verify_free_boundary(64).unwrap();
            let ratio = r.boundary_length / r.area;
            let iso = r.boundary_length.powi(2) / (4.0 * PI) - r.area;
            let ok = r.sphere_residual <= 1e-10
                && r.boundary_condition_residual <= 1e-6
                && (ratio - 2.0).abs() <= 0.01
                && r.area >= PI - 1e-9
                && iso >= -1e-9;
            pass &= ok;
            details.push(format!(
                "{}: sphere {:.1e}, bc {:.1e}, ratio {:.6}, area {:.6}",
                kind.name(),
                r.sphere_residual,
                r.boundary_condition_residual,
                ratio,
                r.area
            ));
        }
        gate.record(5, "free-boundary catalog", pass, details.join("; "));
    }

    // 6. conformal boundary-length decrease, 200 seeded maps
    {
        let cat = catalog_surface(SurfaceKind::CriticalCatenoid);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let suite = length_decrease_suite(&cat, 200, &mut rng).unwrap();
        let pass =
            suite.failures == 0 && suite.max_excess <= 1e-6 && suite.quadratic_rate_error <= 0.05;
        gate.record(
            6,
            "length decrease under 200 maps",
            pass,
            format!(
                "failures {}, max excess {:.2e}, quadratic rate error {:.2e}",
                suite.failures, suite.max_excess, suite.quadratic_rate_error
            ),
        );
    }

    // 7. second derivative of image boundary length vs the closed formula
    {
        let mut pass = true;
        let mut details = Vec::new();
        for kind in [SurfaceKind::EquatorialDisk, SurfaceKind::CriticalCatenoid] {
            let s = catalog_surface(kind);
            for v in [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
            ] {
                let (fd, formula) = second_derivative_boundary_length(&s, &v).unwrap();
                pass &= (fd - formula).abs() <= 1e-3 * formula.abs().max(1.0);
            }
            let (_, f3) = second_derivative_boundary_length(&s, &[0.0, 0.0, 1.0, 0.0]).unwrap();
            details.push(format!("{} vertical formula {:.8}", kind.name(), f3));
        }
        // the vertical disk anchor: second derivative is −2·area = −2π
        let disk = catalog_surface(SurfaceKind::EquatorialDisk);
        let (_, anchor) = second_derivative_boundary_length(&disk, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        pass &= (anchor + 2.0 * PI).abs() <= 1e-9;
        gate.record(7, "second-order length formula", pass, details.join("; "));
    }

    // 8. index form identity Q(v⊥) = −2∫|v⊥|²
    {
        let mut pass = true;
        let mut worst = 0.0f64;
        for kind in [SurfaceKind::EquatorialDisk, SurfaceKind::CriticalCatenoid] {
            let s = catalog_surface(kind);
            for v in [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
            ] {
                let (q, f) = index_form_normal_direction(&s, &v).unwrap();
                let rel = (q - f).abs() / f.abs().max(1.0);
                worst = worst.max(rel);
                pass &= rel <= 1e-4;
            }
        }
        let disk = catalog_surface(SurfaceKind::EquatorialDisk);
        let (q3, _) = index_form_normal_direction(&disk, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        pass &= (q3 + 2.0 * PI).abs() <= 1e-4 * 2.0 * PI;
        gate.record(
            8,
            "index form identity",
            pass,
            format!("worst relative gap {worst:.2e}, vertical disk Q = {q3:.8}"),
        );
    }

    // 9. eigenvalue derivative formulas vs finite differences, 20 seeds
    {
        let mut pass = true;
        let mut worst = 0.0f64;
        let mut worst_trace = 0.0f64;
        for seed in 0..20u64 {
            let mesh = generate_domain(&DomainSpec::annulus(1.0, 3)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(700 + seed);
            let mut metric = DiscreteMetric::uniform(&mesh);
            let pos = mesh.dof_positions();
            for (d, rho) in metric.boundary_density.iter_mut().enumerate() {
                let th = pos[d][1];
                *rho = 1.0 + 0.25 * th.cos() + 0.15 * (2.0 * th + rng.gen_range(0.0..0.3)).sin();
            }
            for g in metric.tensors.iter_mut() {
                let s: f64 = rng.gen_range(-0.1..0.1);
                let t: f64 = rng.gen_range(-0.1..0.1);
                *g = [1.0 + s.abs() + 0.05, t * 0.3, 1.05];
            }
            let spec = steklov::spectral::steklov_spectrum(&mesh, &metric, 3).unwrap();
            let (sigma, u) = (spec.values[1], &spec.functions[1]);
            let tau = stress_energy(&mesh, &metric, u);
            worst_trace = worst_trace.max(stress_energy_trace_residual(&metric, &tau));
            let h: Vec<[f64; 3]> = (0..mesh.triangles.len())
                .map(|_| {
                    [
                        rng.gen_range(-0.3..0.3),
                        rng.gen_range(-0.3..0.3),
                        rng.gen_range(-0.3..0.3),
                    ]
                })
                .collect();
            let q = q_form_metric(&mesh, &metric, u, sigma, &h).unwrap();
            let fd = fd_eigenvalue(&mesh, |e| metric_path(&mesh, &metric, &h, e), 1, 1e-5).unwrap();
            worst = worst.max((q - fd).abs() / fd.abs().max(1.0));
            let phi: Vec<f64> = (0..mesh.num_dofs())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let q = q_form_conformal(&mesh, &metric, u, sigma, &phi).unwrap();
            let fd = fd_eigenvalue(&mesh, |e| conformal_path(&metric, &phi, e), 1, 1e-5).unwrap();
            worst = worst.max((q - fd).abs() / fd.abs().max(1.0));
        }
        pass &= worst <= 1e-4 && worst_trace <= 1e-12;
        gate.record(
            9,
            "derivative formulas vs finite differences",
            pass,
            format!("worst relative gap {worst:.2e}, trace residual {worst_trace:.2e}"),
        );
    }

    // 10. spherical certificate at the annulus maximizer
    {
        let mesh = generate_domain(&DomainSpec::annulus(t0, 64)).unwrap();
        let metric = DiscreteMetric::uniform(&mesh);
        let ops = assemble_operators(&mesh, &metric).unwrap();
        let spec = steklov::spectral::steklov_spectrum_from_ops(&mesh, &ops, 5).unwrap();
        let cluster_ok = spec.multiplicity_of(1) == 3;
        let cluster: Vec<DVector<f64>> = spec.functions[1..4].to_vec();
        let cert = conformal_certificate(&mesh, &metric, &cluster).unwrap();
        let cat = catalog_surface(SurfaceKind::CriticalCatenoid);
        let pos = mesh.dof_positions();
        let nb = cert.boundary_dofs.len();
        let mut targets = vec![vec![0.0; nb]; 3];
        let mut weights = vec![0.0; nb];
        for (row, &d) in cert.boundary_dofs.iter().enumerate() {
            let p = cat.point(pos[d][0], pos[d][1]);
            for i in 0..3 {
                targets[i][row] = p[i];
            }
            weights[row] = ops.boundary_mass[d];
        }
        let gram = procrustes_residual(&cert.maps, &targets, &weights);
        let pass = cluster_ok && cert.residual <= 1e-6 && gram <= 1e-4;
        gate.record(
            10,
            "spherical certificate",
            pass,
            format!(
                "cluster size {}, certificate residual {:.2e}, alignment residual {:.2e}",
                spec.multiplicity_of(1),
                cert.residual,
                gram
            ),
        );
    }

    // 11. density optimizer recovers the sharp value
    {
        let mesh = generate_domain(&DomainSpec::annulus(t0, 6)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut density = vec![1.0; mesh.num_dofs()];
        for &d in mesh.boundary_dofs() {
            density[d] = 1.0 + 0.2 * rng.gen_range(-1.0..1.0);
        }
        let report = maximize_density(&mesh, density, 500).unwrap();
        let rel = (report.final_value - sharp_annulus).abs() / sharp_annulus;
        let pass = rel <= 0.01 && report.iterations_used <= 500;
        gate.record(
            11,
            "density optimizer recovery",
            pass,
            format!(
                "final {:.6} vs {:.6} ({:.2}%), {} iterations",
                report.final_value,
                sharp_annulus,
                100.0 * rel,
                report.iterations_used
            ),
        );
        steklov_records.push(BoundRecord::Steklov {
            name: "optimized annulus density (FEM)".into(),
            genus: 0,
            boundary_components: 2,
            sigma1_l: report.final_value,
        });
    }

    // 12. flat torus values
    {
        let square = flat_torus_lambda1(&Lattice::new([1.0, 0.0], [0.0, 1.0]).unwrap());
        let rhombic =
            flat_torus_lambda1(&Lattice::new([1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]).unwrap());
        let pass = (square - 4.0 * PI * PI).abs() <= 1e-10
            && (rhombic - 8.0 * PI * PI / 3f64.sqrt()).abs() <= 1e-10
            && rhombic > square
            && rhombic <= 16.0 * PI * (1.0 + 1e-12);
        gate.record(
            12,
            "flat torus eigenvalues",
            pass,
            format!("square {square:.8}, rhombic {rhombic:.8}"),
        );
    }

    // 13. bound sweep over every computed normalized eigenvalue
    {
        let mut records = steklov_records;
        records.push(BoundRecord::Laplace {
            name: "square torus".into(),
            genus: 1,
            lambda1_a: flat_torus_lambda1(&Lattice::new([1.0, 0.0], [0.0, 1.0]).unwrap()),
        });
        records.push(BoundRecord::Laplace {
            name: "rhombic torus".into(),
            genus: 1,
            lambda1_a: flat_torus_lambda1(
                &Lattice::new([1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]).unwrap(),
            ),
        });
        let report = bound_checks(&records);
        let detail = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}: {:.6} > {:.6}", c.name, c.value, c.bound))
            .collect::<Vec<_>>()
            .join("; ");
        gate.record(
            13,
            "topological bound sweep",
            report.all_pass,
            if detail.is_empty() {
                format!("{} checks", report.checks.len())
            } else {
                detail
            },
        );
    }

    let failures: Vec<_> = gate.lines.iter().filter(|(_, p, _)| !p).collect();
    assert!(
        failures.is_empty(),
        "failed criteria: {:?}",
        failures
            .iter()
            .map(|(n, _, d)| format!("{n}: {d}"))
            .collect::<Vec<_>>()
    );
}

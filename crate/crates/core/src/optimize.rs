//! Eigenvalue perturbation forms and σ₁L maximization.
//!
//! The perturbation forms are assembled so they are the *exact* derivatives
//! of the discrete pencil along the matching perturbation paths
//! ([`metric_path`], [`conformal_path`]), which makes the finite-difference
//! consistency checks sharp rather than mesh-limited.

use crate::error::{Error, Result};
use crate::mesh::TriangleMesh;
use crate::spectral::{
    annulus_exact_spectrum, mobius_exact_spectrum, steklov_spectrum, DiscreteMetric,
};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::f64::consts::PI;

// ---- small symmetric 2×2 helpers (components s11, s12, s22) ----

fn inv_sym(g: &[f64; 3]) -> ([f64; 3], f64) {
    let det = g[0] * g[2] - g[1] * g[1];
    ([g[2] / det, -g[1] / det, g[0] / det], det)
}

/// tr(A·B) for symmetric A, B.
fn trace_prod_sym(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + 2.0 * a[1] * b[1] + a[2] * b[2]
}

/// B = S·x for symmetric S.
fn sym_apply(s: &[f64; 3], x: &[f64; 2]) -> [f64; 2] {
    [s[0] * x[0] + s[1] * x[1], s[1] * x[0] + s[2] * x[1]]
}

fn chart_gradients(mesh: &TriangleMesh, tri: usize) -> ([[f64; 2]; 3], f64) {
    let [a, b, c] = mesh.triangles[tri].map(|v| mesh.vertices[v]);
    let area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    (
        [
            [(b[1] - c[1]) / area2, (c[0] - b[0]) / area2],
            [(c[1] - a[1]) / area2, (a[0] - c[0]) / area2],
            [(a[1] - b[1]) / area2, (b[0] - a[0]) / area2],
        ],
        area2,
    )
}

/// P1 chart gradient of u on a triangle (constant per triangle).
fn triangle_gradient(mesh: &TriangleMesh, tri: usize, u: &DVector<f64>) -> ([f64; 2], f64) {
    let (grads, area2) = chart_gradients(mesh, tri);
    let mut g = [0.0; 2];
    for (i, gr) in grads.iter().enumerate() {
        let ui = u[mesh.dof_of_vertex(mesh.triangles[tri][i])];
        g[0] += ui * gr[0];
        g[1] += ui * gr[1];
    }
    (g, area2)
}

/// Per-triangle stress-energy tensor τ(u) = du⊗du − ½|∇u|²_g g in chart
/// coordinates (covariant components).
pub fn stress_energy(
    mesh: &TriangleMesh,
    metric: &DiscreteMetric,
    u: &DVector<f64>,
) -> Vec<[f64; 3]> {
    (0..mesh.triangles.len())
        .map(|t| {
            let (du, _) = triangle_gradient(mesh, t, u);
            let g = metric.tensors[t];
            let (ginv, _) = inv_sym(&g);
            let w = sym_apply(&ginv, &du);
            let e2 = du[0] * w[0] + du[1] * w[1]; // |∇u|²_g
            [
                du[0] * du[0] - 0.5 * e2 * g[0],
                du[0] * du[1] - 0.5 * e2 * g[1],
                du[1] * du[1] - 0.5 * e2 * g[2],
            ]
        })
        .collect()
}

/// max over triangles of |tr_g τ| — zero in two dimensions.
pub fn stress_energy_trace_residual(metric: &DiscreteMetric, tau: &[[f64; 3]]) -> f64 {
    tau.iter()
        .zip(&metric.tensors)
        .map(|(t, g)| {
            let (ginv, _) = inv_sym(g);
            trace_prod_sym(&ginv, t).abs()
        })
        .fold(0.0, f64::max)
}

/// Boundary edges tagged with their owning triangle:
/// (triangle, dof_a, dof_b, chart edge vector, chart length).
fn boundary_edges_with_tri(mesh: &TriangleMesh) -> Vec<(usize, usize, usize, [f64; 2], f64)> {
    use std::collections::HashMap;
    let mut seen: HashMap<(usize, usize), (usize, usize, usize, [f64; 2], usize)> = HashMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for e in 0..3 {
            let va = tri[e];
            let vb = tri[(e + 1) % 3];
            let da = mesh.dof_of_vertex(va);
            let db = mesh.dof_of_vertex(vb);
            let key = (da.min(db), da.max(db));
            let pa = mesh.vertices[va];
            let pb = mesh.vertices[vb];
            let entry = seen
                .entry(key)
                .or_insert((t, da, db, [pb[0] - pa[0], pb[1] - pa[1]], 0));
            entry.4 += 1;
        }
    }
    let mut edges: Vec<_> = seen
        .into_values()
        .filter(|&(_, _, _, _, count)| count == 1)
        .map(|(t, da, db, v, _)| (t, da, db, v, (v[0] * v[0] + v[1] * v[1]).sqrt()))
        .collect();
    edges.sort_by_key(|&(t, da, db, _, _)| (t, da, db));
    edges
}

fn boundary_mass(mesh: &TriangleMesh, metric: &DiscreteMetric) -> Vec<f64> {
    let mut mass = vec![0.0; mesh.num_dofs()];
    for (a, b, len) in mesh.boundary_edges() {
        mass[a] += 0.5 * len * metric.boundary_density[a];
        mass[b] += 0.5 * len * metric.boundary_density[b];
    }
    mass
}

fn check_normalized(mass: &[f64], u: &DVector<f64>) -> Result<()> {
    let n: f64 = mass.iter().zip(u.iter()).map(|(m, v)| m * v * v).sum();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized((n - 1.0).abs()));
    }
    Ok(())
}

/// h(T, T) for a boundary edge: the perturbation evaluated on the unit
/// tangent of the *base* metric.
fn edge_h_tt(g: &[f64; 3], h: &[f64; 3], edge: &[f64; 2]) -> f64 {
    let hv = sym_apply(h, edge);
    let gv = sym_apply(g, edge);
    (edge[0] * hv[0] + edge[1] * hv[1]) / (edge[0] * gv[0] + edge[1] * gv[1])
}

/// Q_h(u) = −∫⟨τ(u), h⟩ da − (σ/2)∫_{∂M} u² h(T,T) ds for a per-triangle
/// symmetric perturbation h; the derivative of a simple eigenvalue σ along
/// [`metric_path`].
pub fn q_form_metric(
    mesh: &TriangleMesh,
    metric: &DiscreteMetric,
    u: &DVector<f64>,
    sigma: f64,
    h: &[[f64; 3]],
) -> Result<f64> {
    let mass = boundary_mass(mesh, metric);
    check_normalized(&mass, u)?;
    let tau = stress_energy(mesh, metric, u);
    let mut interior = 0.0;
    for t in 0..mesh.triangles.len() {
        let g = metric.tensors[t];
        let (ginv, det) = inv_sym(&g);
        let (_, area2) = chart_gradients(mesh, t);
        // ⟨τ, h⟩ = tr(g⁻¹ τ g⁻¹ h); both factors are symmetric
        let p = [
            ginv[0] * tau[t][0] + ginv[1] * tau[t][1],
            ginv[0] * tau[t][1] + ginv[1] * tau[t][2],
            ginv[1] * tau[t][0] + ginv[2] * tau[t][1],
            ginv[1] * tau[t][1] + ginv[2] * tau[t][2],
        ];
        let q = [
            ginv[0] * h[t][0] + ginv[1] * h[t][1],
            ginv[0] * h[t][1] + ginv[1] * h[t][2],
            ginv[1] * h[t][0] + ginv[2] * h[t][1],
            ginv[1] * h[t][1] + ginv[2] * h[t][2],
        ];
        let trace = p[0] * q[0] + p[1] * q[2] + p[2] * q[1] + p[3] * q[3];
        interior += 0.5 * area2 * det.sqrt() * trace;
    }
    let mut boundary = 0.0;
    for (t, da, db, edge, len) in boundary_edges_with_tri(mesh) {
        let htt = edge_h_tt(&metric.tensors[t], &h[t], &edge);
        boundary += 0.5
            * len
            * htt
            * (metric.boundary_density[da] * u[da] * u[da]
                + metric.boundary_density[db] * u[db] * u[db]);
    }
    Ok(-interior - 0.5 * sigma * boundary)
}

/// Q_φ(u) = −(σ/2)∫_{∂M} u² φ ds for a per-dof boundary function φ; the
/// derivative of a simple eigenvalue along [`conformal_path`].
pub fn q_form_conformal(
    mesh: &TriangleMesh,
    metric: &DiscreteMetric,
    u: &DVector<f64>,
    sigma: f64,
    phi: &[f64],
) -> Result<f64> {
    let mass = boundary_mass(mesh, metric);
    check_normalized(&mass, u)?;
    let integral: f64 = mass
        .iter()
        .enumerate()
        .map(|(d, m)| m * phi[d] * u[d] * u[d])
        .sum();
    Ok(-0.5 * sigma * integral)
}

/// Metric path g_ε = g + εh with the boundary density moved consistently:
/// the boundary measure of g_ε is √(g_ε(T,T)) per chart length, whose
/// derivative at 0 is ½h(T,T), mass-averaged onto the dofs.
pub fn metric_path(
    mesh: &TriangleMesh,
    metric: &DiscreteMetric,
    h: &[[f64; 3]],
    eps: f64,
) -> DiscreteMetric {
    let tensors = metric
        .tensors
        .iter()
        .zip(h)
        .map(|(g, p)| [g[0] + eps * p[0], g[1] + eps * p[1], g[2] + eps * p[2]])
        .collect();
    let mut num = vec![0.0; mesh.num_dofs()];
    let mut den = vec![0.0; mesh.num_dofs()];
    for (t, da, db, edge, len) in boundary_edges_with_tri(mesh) {
        let htt = edge_h_tt(&metric.tensors[t], &h[t], &edge);
        for d in [da, db] {
            num[d] += 0.5 * len * 0.5 * htt;
            den[d] += 0.5 * len;
        }
    }
    let boundary_density = metric
        .boundary_density
        .iter()
        .enumerate()
        .map(|(d, &rho)| {
            if den[d] > 0.0 {
                rho * (1.0 + eps * num[d] / den[d])
            } else {
                rho
            }
        })
        .collect();
    DiscreteMetric {
        tensors,
        boundary_density,
    }
}

/// Conformal path: the metric factor (1 + εφ) scales the boundary density
/// by its square root; the interior tensors do not move (2-D conformal
/// invariance of the Dirichlet energy).
pub fn conformal_path(metric: &DiscreteMetric, phi: &[f64], eps: f64) -> DiscreteMetric {
    DiscreteMetric {
        tensors: metric.tensors.clone(),
        boundary_density: metric
            .boundary_density
            .iter()
            .zip(phi)
            .map(|(&rho, &p)| rho * (1.0 + eps * p).sqrt())
            .collect(),
    }
}

/// Central difference of the k-th pencil eigenvalue along a metric path.
pub fn fd_eigenvalue<F: Fn(f64) -> DiscreteMetric>(
    mesh: &TriangleMesh,
    path: F,
    k: usize,
    eps: f64,
) -> Result<f64> {
    let plus = steklov_spectrum(mesh, &path(eps), k + 2)?.values[k];
    let minus = steklov_spectrum(mesh, &path(-eps), k + 2)?.values[k];
    Ok((plus - minus) / (2.0 * eps))
}

// ---- modulus maximization ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusFamily {
    Annulus,
    Mobius,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModulusReport {
    pub family: ModulusFamily,
    pub t_star: f64,
    pub value: f64,
    /// Set when the maximum sits at a bracket endpoint — the bracket
    /// excludes the interior critical modulus.
    pub boundary_maximum: bool,
}

/// σ₁(T)·L for the exact oracles.
pub fn normalized_value(family: ModulusFamily, t: f64) -> Result<f64> {
    Ok(match family {
        ModulusFamily::Annulus => annulus_exact_spectrum(t, 2)?.values[1] * 4.0 * PI,
        ModulusFamily::Mobius => mobius_exact_spectrum(t, 2)?.values[1] * 2.0 * PI,
    })
}

/// Golden-section maximization of T ↦ σ₁(T)L over the bracket.
pub fn maximize_over_modulus(family: ModulusFamily, bracket: (f64, f64)) -> Result<ModulusReport> {
    let (mut a, mut b) = bracket;
    if a <= 0.0 || b <= a {
        return Err(Error::NonPositiveModulus(a.min(b - a)));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = normalized_value(family, c)?;
    let mut fd = normalized_value(family, d)?;
    while b - a > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = normalized_value(family, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = normalized_value(family, d)?;
        }
    }
    let t_star = 0.5 * (a + b);
    let value = normalized_value(family, t_star)?;
    // the interior maximum is genuine only if the endpoints do not beat it
    let (lo, hi) = bracket;
    let f_lo = normalized_value(family, lo)?;
    let f_hi = normalized_value(family, hi)?;
    let boundary_maximum = f_lo >= value - 1e-12 || f_hi >= value - 1e-12;
    Ok(ModulusReport {
        family,
        t_star: if boundary_maximum {
            if f_lo >= f_hi {
                lo
            } else {
                hi
            }
        } else {
            t_star
        },
        value: value.max(f_lo).max(f_hi),
        boundary_maximum,
    })
}

// ---- density maximization ----

/// One state snapshot of the density ascent.
#[derive(Debug, Clone, Serialize)]
pub struct Checkpoint {
    pub iteration: usize,
    pub density: Vec<f64>,
    pub sigma1_l: f64,
    pub cluster_size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizationReport {
    /// (iteration, σ₁L) for every accepted iterate.
    pub trajectory: Vec<(usize, f64)>,
    pub checkpoints: Vec<Checkpoint>,
    pub final_density: Vec<f64>,
    pub final_value: f64,
    /// Eigenvalue multiplicity (cluster size) at the final iterate.
    pub multiplicity: usize,
    pub iterations_used: usize,
}

/// Minimum-norm point of the convex hull of the rows of `dirs` in the
/// weighted inner product — Frank–Wolfe on the simplex.
fn maximin_direction(dirs: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    let m = dirs.len();
    let gram = DMatrix::from_fn(m, m, |i, j| {
        weights
            .iter()
            .enumerate()
            .map(|(d, &w)| w * dirs[i][d] * dirs[j][d])
            .sum()
    });
    let mut c = DVector::from_element(m, 1.0 / m as f64);
    for _ in 0..200 {
        let grad = &gram * &c; // ∇½‖Σcᵢδᵢ‖² in simplex coordinates
        let j = grad.imin();
        let mut dir = DVector::zeros(m);
        dir[j] = 1.0;
        let diff = &dir - &c;
        let denom = (diff.transpose() * &gram * &diff)[(0, 0)];
        if denom <= 1e-30 {
            break;
        }
        let gamma = (-(grad.dot(&diff)) / denom).clamp(0.0, 1.0);
        if gamma < 1e-12 {
            break;
        }
        c += gamma * diff;
    }
    let mut out = vec![0.0; dirs[0].len()];
    for (i, dir) in dirs.iter().enumerate() {
        for (d, &v) in dir.iter().enumerate() {
            out[d] += c[i] * v;
        }
    }
    out
}

/// Projected ascent on the boundary density maximizing σ₁L at fixed total
/// boundary length. Near-multiple eigenvalues are handled by a maximin step
/// over the cluster supergradients.
pub fn maximize_density(
    mesh: &TriangleMesh,
    initial_density: Vec<f64>,
    iterations: usize,
) -> Result<OptimizationReport> {
    let n = mesh.num_dofs();
    let mut metric = DiscreteMetric {
        tensors: vec![[1.0, 0.0, 1.0]; mesh.triangles.len()],
        boundary_density: initial_density,
    };
    metric.validate(mesh)?;
    let l0 = metric.boundary_length(mesh);
    let cluster_tol = 1e-2;
    let is_boundary: Vec<bool> = {
        let mut b = vec![false; n];
        for &d in mesh.boundary_dofs() {
            b[d] = true;
        }
        b
    };

    let evaluate = |metric: &DiscreteMetric| -> Result<(f64, Vec<DVector<f64>>, usize, Vec<f64>)> {
        let count = 6.min(mesh.boundary_dofs().len());
        let spec = steklov_spectrum(mesh, metric, count)?;
        let sigma1 = spec.values[1];
        let cluster: Vec<usize> = (1..spec.values.len())
            .filter(|&k| spec.values[k] <= sigma1 * (1.0 + cluster_tol) + 1e-12)
            .collect();
        let funcs = cluster.iter().map(|&k| spec.functions[k].clone()).collect();
        let mass = boundary_mass(mesh, metric);
        Ok((sigma1 * l0, funcs, cluster.len(), mass))
    };

    let (mut value, mut funcs, mut cluster_size, mut mass) = evaluate(&metric)?;
    let mut trajectory = vec![(0, value)];
    let mut checkpoints = vec![Checkpoint {
        iteration: 0,
        density: metric.boundary_density.clone(),
        sigma1_l: value,
        cluster_size,
    }];
    let mut alpha = 0.1;
    let mut used = 0;
    for iter in 1..=iterations {
        used = iter;
        // supergradients: d(σ₁L) along ρ(1+εδ) is σ Σ M_d δ_d (1 − L u_d²)
        let dirs: Vec<Vec<f64>> = funcs
            .iter()
            .map(|u| {
                (0..n)
                    .map(|d| {
                        if is_boundary[d] {
                            1.0 - l0 * u[d] * u[d]
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let delta = if dirs.len() == 1 {
            dirs[0].clone()
        } else {
            maximin_direction(&dirs, &mass)
        };
        let dmax = delta.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if dmax < 1e-12 {
            break;
        }
        // trial step with positivity and fixed-length projection
        let mut trial = metric.clone();
        let mut ok = false;
        for (d, rho) in trial.boundary_density.iter_mut().enumerate() {
            *rho = metric.boundary_density[d] * (1.0 + alpha * delta[d] / dmax);
        }
        if trial
            .boundary_density
            .iter()
            .enumerate()
            .all(|(d, &r)| !is_boundary[d] || r > 0.0)
        {
            let l = trial.boundary_length(mesh);
            for rho in trial.boundary_density.iter_mut() {
                *rho *= l0 / l;
            }
            let (v2, f2, c2, m2) = evaluate(&trial)?;
            if v2 >= value - 1e-10 {
                metric = trial;
                value = v2;
                funcs = f2;
                cluster_size = c2;
                mass = m2;
                trajectory.push((iter, value));
                alpha = (alpha * 1.5).min(0.5);
                ok = true;
            }
        }
        if !ok {
            alpha *= 0.5; // non-positive density or decrease: reject and halve
            if alpha < 1e-9 {
                break;
            }
        }
        if iter % 50 == 0 {
            checkpoints.push(Checkpoint {
                iteration: iter,
                density: metric.boundary_density.clone(),
                sigma1_l: value,
                cluster_size,
            });
        }
    }
    checkpoints.push(Checkpoint {
        iteration: used,
        density: metric.boundary_density.clone(),
        sigma1_l: value,
        cluster_size,
    });
    Ok(OptimizationReport {
        trajectory,
        checkpoints,
        final_density: metric.boundary_density,
        final_value: value,
        multiplicity: cluster_size,
        iterations_used: used,
    })
}

// ---- spherical certificate ----

#[derive(Debug, Clone)]
pub struct CertificateReport {
    /// PSD coefficient matrix A with φᵀAφ ≈ 1 on ∂M.
    pub coefficients: DMatrix<f64>,
    /// ∫_{∂M} (φᵀAφ − 1)² ds.
    pub residual: f64,
    /// Candidate sphere maps u = A^{1/2}φ per boundary dof (row per map).
    pub maps: Vec<Vec<f64>>,
    pub boundary_dofs: Vec<usize>,
}

fn clip_psd(a: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = a.clone().symmetric_eigen();
    let vals = eig.eigenvalues.map(|v| v.max(0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose()
}

/// sym-vec index pairs (i ≤ j) for an m×m symmetric matrix.
fn sym_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (i..m).map(move |j| (i, j)))
        .collect()
}

fn sym_unpack(pairs: &[(usize, usize)], v: &DVector<f64>, m: usize) -> DMatrix<f64> {
    let mut a = DMatrix::<f64>::zeros(m, m);
    for (col, &(i, j)) in pairs.iter().enumerate() {
        a[(i, j)] = v[col];
        a[(j, i)] = v[col];
    }
    a
}

/// Weighted normal equations for the boundary quadric fit
/// ∫_{∂M}(φᵀAφ − 1)² ds in sym-vec coordinates.
fn quadric_normal_equations(
    cluster: &[DVector<f64>],
    boundary_dofs: &[usize],
    boundary_mass: &[f64],
    pairs: &[(usize, usize)],
) -> (DMatrix<f64>, DVector<f64>) {
    let p = pairs.len();
    let mut ctwc = DMatrix::<f64>::zeros(p, p);
    let mut ctw1 = DVector::<f64>::zeros(p);
    let mut row = vec![0.0; p];
    for &d in boundary_dofs {
        let w = boundary_mass[d];
        for (col, &(i, j)) in pairs.iter().enumerate() {
            let v = cluster[i][d] * cluster[j][d];
            row[col] = if i == j { v } else { 2.0 * v };
        }
        for i in 0..p {
            ctw1[i] += w * row[i];
            for j in 0..p {
                ctwc[(i, j)] += w * row[i] * row[j];
            }
        }
    }
    (ctwc, ctw1)
}

/// Shared tail of the certificate constructions: PSD projection with a
/// projected-gradient polish of the quadric objective, then the sphere maps.
fn finish_certificate(
    cluster: &[DVector<f64>],
    boundary_dofs: &[usize],
    boundary_mass: &[f64],
    a0: DMatrix<f64>,
) -> CertificateReport {
    let m = cluster.len();
    let objective = |a: &DMatrix<f64>| -> f64 {
        let mut total = 0.0;
        for &d in boundary_dofs.iter() {
            let mut q = -1.0;
            for i in 0..m {
                for j in 0..m {
                    q += a[(i, j)] * cluster[i][d] * cluster[j][d];
                }
            }
            total += boundary_mass[d] * q * q;
        }
        total
    };
    let mut a = clip_psd(&a0);
    // projected gradient with a Lipschitz step, usually converged at once
    let lip: f64 = boundary_dofs
        .iter()
        .map(|&d| {
            let s: f64 = cluster.iter().map(|f| f[d] * f[d]).sum();
            2.0 * boundary_mass[d] * s * s
        })
        .sum();
    for _ in 0..50 {
        let mut grad = DMatrix::<f64>::zeros(m, m);
        for &d in boundary_dofs {
            let mut q = -1.0;
            for i in 0..m {
                for j in 0..m {
                    q += a[(i, j)] * cluster[i][d] * cluster[j][d];
                }
            }
            for i in 0..m {
                for j in 0..m {
                    grad[(i, j)] += 2.0 * boundary_mass[d] * q * cluster[i][d] * cluster[j][d];
                }
            }
        }
        let next = clip_psd(&(&a - grad / lip));
        let moved = (&next - &a).amax();
        a = next;
        if moved < 1e-14 {
            break;
        }
    }
    let residual = objective(&a);
    // A^{1/2} via the symmetric eigendecomposition
    let eig = a.clone().symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let maps = (0..m)
        .map(|i| {
            boundary_dofs
                .iter()
                .map(|&d| (0..m).map(|j| root[(i, j)] * cluster[j][d]).sum())
                .collect()
        })
        .collect();
    CertificateReport {
        coefficients: a,
        residual,
        maps,
        boundary_dofs: boundary_dofs.to_vec(),
    }
}

/// PSD matrix A minimizing ∫_{∂M}(φᵀAφ − 1)² ds over the eigenfunction
/// cluster φ: symmetric least squares (minimal-norm when the quadric is
/// underdetermined) followed by projected-gradient eigenvalue clipping
/// (≤ 50 iterations).
pub fn spherical_certificate(
    cluster: &[DVector<f64>],
    boundary_dofs: &[usize],
    boundary_mass: &[f64],
) -> Result<CertificateReport> {
    let m = cluster.len();
    if m == 0 {
        return Err(Error::EmptyCluster);
    }
    let pairs = sym_pairs(m);
    let (ctwc, ctw1) = quadric_normal_equations(cluster, boundary_dofs, boundary_mass, &pairs);
    let eps = 1e-10 * ctwc.amax();
    let avec = ctwc
        .svd(true, true)
        .solve(&ctw1, eps)
        .map_err(|_| Error::EmptyCluster)?;
    Ok(finish_certificate(
        cluster,
        boundary_dofs,
        boundary_mass,
        sym_unpack(&pairs, &avec, m),
    ))
}

/// Certificate with a conformality tie-break. On domains whose boundary
/// components are level sets of the cluster functions (the annulus:
/// boundary circles), the quadric φᵀAφ = 1 on ∂M has a whole family of PSD
/// solutions and the least-squares normal matrix is singular. The extremal
/// structure being certified is a *conformal* sphere-valued map, and the
/// pulled-back stress energy Σᵢ τ(uᵢ) = Σ_{jk} A_{jk} τ(φ_j, φ_k) is linear
/// in A, so among the quadric minimizers we pick the one minimizing the
/// conformal defect ∫‖Σ A_{jk} τ(φ_j, φ_k)‖²_g da over the null space of
/// the normal equations.
pub fn conformal_certificate(
    mesh: &TriangleMesh,
    metric: &DiscreteMetric,
    cluster: &[DVector<f64>],
) -> Result<CertificateReport> {
    let m = cluster.len();
    if m == 0 {
        return Err(Error::EmptyCluster);
    }
    let boundary_dofs = mesh.boundary_dofs();
    let bmass = boundary_mass(mesh, metric);
    let pairs = sym_pairs(m);
    let p = pairs.len();
    let (ctwc, ctw1) = quadric_normal_equations(cluster, boundary_dofs, &bmass, &pairs);

    let eig = ctwc.clone().symmetric_eigen();
    let lmax = eig.eigenvalues.amax();
    let tol = 1e-8 * lmax;
    // minimal-norm particular solution and a basis of the numerical null space
    let mut v0 = DVector::<f64>::zeros(p);
    let mut null: Vec<DVector<f64>> = Vec::new();
    for k in 0..p {
        let q = eig.eigenvectors.column(k).into_owned();
        if eig.eigenvalues[k] > tol {
            v0 += &q * (q.dot(&ctw1) / eig.eigenvalues[k]);
        } else {
            null.push(q);
        }
    }

    if !null.is_empty() {
        // conformal-defect quadratic form K in sym-vec coordinates:
        // K[c,c'] = Σ_t w_t tr(g⁻¹ τ_c g⁻¹ τ_c') with τ_c the symmetrized
        // polarized stress energy of the pair behind column c
        let ntri = mesh.triangles.len();
        let mut tau_cols = vec![vec![[0.0f64; 3]; ntri]; p];
        let mut weight = vec![0.0f64; ntri];
        for t in 0..ntri {
            let g = metric.tensors[t];
            let (ginv, det) = inv_sym(&g);
            let grads: Vec<[f64; 2]> = cluster
                .iter()
                .map(|u| triangle_gradient(mesh, t, u).0)
                .collect();
            let (_, area2) = chart_gradients(mesh, t);
            weight[t] = 0.5 * area2.abs() * det.sqrt();
            for (col, &(i, j)) in pairs.iter().enumerate() {
                let (di, dj) = (grads[i], grads[j]);
                let wj = sym_apply(&ginv, &dj);
                let inner = di[0] * wj[0] + di[1] * wj[1]; // ⟨∇φᵢ, ∇φⱼ⟩_g
                let scale = if i == j { 1.0 } else { 2.0 };
                tau_cols[col][t] = [
                    scale * (di[0] * dj[0] - 0.5 * inner * g[0]),
                    scale * (0.5 * (di[0] * dj[1] + di[1] * dj[0]) - 0.5 * inner * g[1]),
                    scale * (di[1] * dj[1] - 0.5 * inner * g[2]),
                ];
            }
        }
        let pairing = |s: &[f64; 3], r: &[f64; 3], ginv: &[f64; 3]| -> f64 {
            // tr(g⁻¹ S g⁻¹ R) for covariant symmetric S, R
            let gs = [
                ginv[0] * s[0] + ginv[1] * s[1],
                ginv[0] * s[1] + ginv[1] * s[2],
                ginv[1] * s[0] + ginv[2] * s[1],
                ginv[1] * s[1] + ginv[2] * s[2],
            ];
            let gr = [
                ginv[0] * r[0] + ginv[1] * r[1],
                ginv[0] * r[1] + ginv[1] * r[2],
                ginv[1] * r[0] + ginv[2] * r[1],
                ginv[1] * r[1] + ginv[2] * r[2],
            ];
            gs[0] * gr[0] + gs[1] * gr[2] + gs[2] * gr[1] + gs[3] * gr[3]
        };
        let mut k_form = DMatrix::<f64>::zeros(p, p);
        for t in 0..ntri {
            let (ginv, _) = inv_sym(&metric.tensors[t]);
            for c in 0..p {
                for c2 in 0..p {
                    k_form[(c, c2)] +=
                        weight[t] * pairing(&tau_cols[c][t], &tau_cols[c2][t], &ginv);
                }
            }
        }
        // minimize (v0 + Nz)ᵀ K (v0 + Nz) over z
        let nz = null.len();
        let mut nkn = DMatrix::<f64>::zeros(nz, nz);
        let mut nkv = DVector::<f64>::zeros(nz);
        let kv0 = &k_form * &v0;
        for (i, ni) in null.iter().enumerate() {
            nkv[i] = -ni.dot(&kv0);
            for (j, nj) in null.iter().enumerate() {
                nkn[(i, j)] = (ni.transpose() * &k_form * nj)[(0, 0)];
            }
        }
        if let Ok(z) = nkn.svd(true, true).solve(&nkv, 1e-12 * k_form.amax().max(1.0)) {
            for (i, ni) in null.iter().enumerate() {
                v0 += ni * z[i];
            }
        }
    }

    Ok(finish_certificate(
        cluster,
        boundary_dofs,
        &bmass,
        sym_unpack(&pairs, &v0, m),
    ))
}

/// Weighted Procrustes residual: how far `maps` are from `targets` over the
/// best orthogonal transformation, relative to the size of `targets`.
pub fn procrustes_residual(maps: &[Vec<f64>], targets: &[Vec<f64>], weights: &[f64]) -> f64 {
    let m = maps.len();
    let nb = maps[0].len();
    let mut cross = DMatrix::<f64>::zeros(m, m);
    for d in 0..nb {
        for i in 0..m {
            for j in 0..m {
                cross[(i, j)] += weights[d] * targets[i][d] * maps[j][d];
            }
        }
    }
    let svd = cross.svd(true, true);
    let q = svd.u.unwrap() * svd.v_t.unwrap();
    let mut num = 0.0;
    let mut den = 0.0;
    for d in 0..nb {
        for i in 0..m {
            let rotated: f64 = (0..m).map(|j| q[(i, j)] * maps[j][d]).sum();
            num += weights[d] * (rotated - targets[i][d]).powi(2);
            den += weights[d] * targets[i][d].powi(2);
        }
    }
    (num / den).sqrt()
}

// ---- flat tori ----

/// Positively oriented plane lattice.
#[derive(Debug, Clone, Serialize)]
pub struct Lattice {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl Lattice {
    pub fn new(a: [f64; 2], b: [f64; 2]) -> Result<Self> {
        let det = a[0] * b[1] - a[1] * b[0];
        if det <= 1e-14 {
            return Err(Error::InvalidDomain(format!(
                "lattice basis is not positively oriented (det = {det})"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn det(&self) -> f64 {
        self.a[0] * self.b[1] - self.a[1] * self.b[0]
    }

    /// Dual basis rows: ⟨a*, a⟩ = 1, ⟨a*, b⟩ = 0 and vice versa.
    pub fn dual_basis(&self) -> ([f64; 2], [f64; 2]) {
        let det = self.det();
        (
            [self.b[1] / det, -self.b[0] / det],
            [-self.a[1] / det, self.a[0] / det],
        )
    }
}

/// All dual vectors with |ξ|² within `slack` of the minimum, one per ±-pair.
fn shortest_dual_classes(lat: &Lattice, slack: f64) -> Vec<([f64; 2], f64)> {
    let (astar, bstar) = lat.dual_basis();
    // enumeration radius: 4× the Minkowski bound for the dual lattice
    let radius = 4.0 * 2.0 * (1.0 / (lat.det() * PI)).sqrt();
    let na = lat.a.hypot2();
    let nb = lat.b.hypot2();
    let m_max = (radius * na).ceil() as i64;
    let n_max = (radius * nb).ceil() as i64;
    let mut best = f64::INFINITY;
    let mut hits: Vec<([f64; 2], f64)> = Vec::new();
    for m in -m_max..=m_max {
        for n in -n_max..=n_max {
            // one representative per ±-pair
            if m < 0 || (m == 0 && n <= 0) {
                continue;
            }
            let xi = [
                m as f64 * astar[0] + n as f64 * bstar[0],
                m as f64 * astar[1] + n as f64 * bstar[1],
            ];
            let norm2 = xi[0] * xi[0] + xi[1] * xi[1];
            if norm2 < best * (1.0 - slack) {
                best = norm2;
                hits = vec![(xi, norm2)];
            } else if norm2 <= best * (1.0 + slack) {
                best = best.min(norm2);
                hits.push((xi, norm2));
            }
        }
    }
    hits.retain(|&(_, n2)| n2 <= best * (1.0 + slack));
    hits
}

trait Hypot2 {
    fn hypot2(&self) -> f64;
}
impl Hypot2 for [f64; 2] {
    fn hypot2(&self) -> f64 {
        (self[0] * self[0] + self[1] * self[1]).sqrt()
    }
}

/// Scale-invariant λ₁·A = 4π²|ξ*|²·|det| for the flat torus ℝ²/Λ.
pub fn flat_torus_lambda1(lat: &Lattice) -> f64 {
    let hits = shortest_dual_classes(lat, 1e-9);
    4.0 * PI * PI * hits[0].1 * lat.det()
}

/// Closed-surface Q_h on the λ₁ plane wave against an independent
/// finite-difference derivative of λ₁ along the metric path I + th.
/// Requires the shortest dual vector to be unique up to sign.
pub fn laplace_derivative_flat_torus(lat: &Lattice, h: [f64; 3]) -> Result<(f64, f64)> {
    let hits = shortest_dual_classes(lat, 1e-9);
    if hits.len() > 1 {
        return Err(Error::MultipleLambda1(hits.len()));
    }
    let xi = hits[0].0;
    // Q_h = −∫⟨τ(u) + (λ/2)u²g, h⟩ da = −4π²ξᵀhξ on the plane wave
    let q = -4.0
        * PI
        * PI
        * (h[0] * xi[0] * xi[0] + 2.0 * h[1] * xi[0] * xi[1] + h[2] * xi[1] * xi[1]);
    // independent reference: λ₁(t) = 4π² min_ξ ξᵀ(I+th)⁻¹ξ by enumeration
    let lambda = |t: f64| -> f64 {
        let g = [1.0 + t * h[0], t * h[1], 1.0 + t * h[2]];
        let (ginv, _) = inv_sym(&g);
        shortest_dual_classes(lat, 0.5)
            .iter()
            .map(|(xi, _)| {
                4.0 * PI
                    * PI
                    * (ginv[0] * xi[0] * xi[0]
                        + 2.0 * ginv[1] * xi[0] * xi[1]
                        + ginv[2] * xi[1] * xi[1])
            })
            .fold(f64::INFINITY, f64::min)
    };
    let eps = 1e-5;
    let coarse = (lambda(eps) - lambda(-eps)) / (2.0 * eps);
    let fine = (lambda(0.5 * eps) - lambda(-0.5 * eps)) / eps;
    let fd = (4.0 * fine - coarse) / 3.0;
    Ok((q, fd))
}

// ---- coarse bound report ----

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundRecord {
    Steklov {
        name: String,
        genus: usize,
        boundary_components: usize,
        sigma1_l: f64,
    },
    Laplace {
        name: String,
        genus: usize,
        lambda1_a: f64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
    pub all_pass: bool,
}

/// Coarse topological upper bounds: σ₁L ≤ min{2π(γ+k), 8π⌊(γ+3)/2⌋} with 2%
/// slack, λ₁A ≤ 8π⌊(γ+3)/2⌋, and the strict 4π ceiling for genus 0.
pub fn bound_checks(records: &[BoundRecord]) -> BoundReport {
    let mut checks = Vec::new();
    for r in records {
        match r {
            BoundRecord::Steklov {
                name,
                genus,
                boundary_components,
                sigma1_l,
            } => {
                let coarse = (2.0 * PI * (*genus + *boundary_components) as f64)
                    .min(8.0 * PI * ((*genus + 3) / 2) as f64);
                checks.push(BoundCheck {
                    name: format!("{name}: coarse bound"),
                    value: *sigma1_l,
                    bound: coarse * 1.02,
                    pass: *sigma1_l <= coarse * 1.02,
                });
                if *genus == 0 {
                    checks.push(BoundCheck {
                        name: format!("{name}: genus-0 ceiling"),
                        value: *sigma1_l,
                        bound: 4.0 * PI * 1.0001,
                        pass: *sigma1_l < 4.0 * PI * 1.0001,
                    });
                }
            }
            BoundRecord::Laplace {
                name,
                genus,
                lambda1_a,
            } => {
                let bound = 8.0 * PI * ((*genus + 3) / 2) as f64 * 1.0001;
                checks.push(BoundCheck {
                    name: format!("{name}: Yang–Yau bound"),
                    value: *lambda1_a,
                    bound,
                    pass: *lambda1_a <= bound,
                });
            }
        }
    }
    let all_pass = checks.iter().all(|c| c.pass);
    BoundReport { checks, all_pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_domain, DomainSpec};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Annulus with seeded non-uniform base data so σ₁ is simple.
    fn perturbed_annulus(seed: u64) -> (crate::mesh::TriangleMesh, DiscreteMetric) {
        let mesh = generate_domain(&DomainSpec::annulus(1.0, 3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut metric = DiscreteMetric::uniform(&mesh);
        let pos = mesh.dof_positions();
        for (d, rho) in metric.boundary_density.iter_mut().enumerate() {
            let th = pos[d][1];
            *rho = 1.0
                + 0.25 * th.cos()
                + 0.15 * (2.0 * th + rng.gen_range(0.0..0.3)).sin();
        }
        for g in metric.tensors.iter_mut() {
            let s: f64 = rng.gen_range(-0.1..0.1);
            let t: f64 = rng.gen_range(-0.1..0.1);
            *g = [1.0 + s.abs() + 0.05, t * 0.3, 1.0 + 0.05];
        }
        (mesh, metric)
    }

    #[test]
    fn stress_energy_is_trace_free() {
        let (mesh, metric) = perturbed_annulus(3);
        let spec = steklov_spectrum(&mesh, &metric, 4).unwrap();
        for u in &spec.functions {
            let tau = stress_energy(&mesh, &metric, u);
            assert!(stress_energy_trace_residual(&metric, &tau) <= 1e-12);
        }
    }

    #[test]
    fn conformal_form_special_cases() {
        let (mesh, metric) = perturbed_annulus(4);
        let spec = steklov_spectrum(&mesh, &metric, 3).unwrap();
        let u = &spec.functions[1];
        let sigma = spec.values[1];
        let n = mesh.num_dofs();
        let zero = q_form_conformal(&mesh, &metric, u, sigma, &vec![0.0; n]).unwrap();
        assert_eq!(zero, 0.0);
        let c = 0.7;
        let qc = q_form_conformal(&mesh, &metric, u, sigma, &vec![c; n]).unwrap();
        assert_relative_eq!(qc, -0.5 * sigma * c, epsilon = 1e-12);
        // h = g is pure conformal with h(T,T) = 1: the interior term dies
        let h: Vec<[f64; 3]> = metric.tensors.clone();
        let qg = q_form_metric(&mesh, &metric, u, sigma, &h).unwrap();
        assert_relative_eq!(qg, -0.5 * sigma, epsilon = 1e-10);
        let hz = vec![[0.0; 3]; mesh.triangles.len()];
        assert_eq!(q_form_metric(&mesh, &metric, u, sigma, &hz).unwrap(), 0.0);
    }

    #[test]
    fn q_forms_match_finite_differences() {
        for seed in 0..20u64 {
            let (mesh, metric) = perturbed_annulus(100 + seed);
            let spec = steklov_spectrum(&mesh, &metric, 3).unwrap();
            let (sigma, u) = (spec.values[1], &spec.functions[1]);
            let gap = (spec.values[2] - sigma) / sigma;
            assert!(gap > 1e-3, "seed {seed}: σ₁ not simple enough (gap {gap})");
            let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
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
            let fd =
                fd_eigenvalue(&mesh, |e| metric_path(&mesh, &metric, &h, e), 1, 1e-5).unwrap();
            assert!(
                (q - fd).abs() <= 1e-4 * fd.abs().max(1.0),
                "seed {seed}: metric Q {q} vs FD {fd}"
            );
            let phi: Vec<f64> = (0..mesh.num_dofs())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let q = q_form_conformal(&mesh, &metric, u, sigma, &phi).unwrap();
            let fd =
                fd_eigenvalue(&mesh, |e| conformal_path(&metric, &phi, e), 1, 1e-5).unwrap();
            assert!(
                (q - fd).abs() <= 1e-4 * fd.abs().max(1.0),
                "seed {seed}: conformal Q {q} vs FD {fd}"
            );
        }
    }

    #[test]
    fn normalization_is_enforced() {
        let (mesh, metric) = perturbed_annulus(9);
        let spec = steklov_spectrum(&mesh, &metric, 3).unwrap();
        let u = spec.functions[1].clone() * 2.0;
        let err = q_form_conformal(&mesh, &metric, &u, spec.values[1], &vec![1.0; mesh.num_dofs()]);
        assert!(matches!(err, Err(Error::NotNormalized(_))));
    }

    #[test]
    fn modulus_maximization_hits_the_sharp_constants() {
        let annulus = maximize_over_modulus(ModulusFamily::Annulus, (0.5, 2.0)).unwrap();
        assert!(!annulus.boundary_maximum);
        assert_relative_eq!(annulus.t_star, 1.199678640257734, epsilon = 1e-6);
        assert_relative_eq!(annulus.value, 10.474780655975891, epsilon = 1e-6);
        let mobius = maximize_over_modulus(ModulusFamily::Mobius, (0.3, 1.5)).unwrap();
        assert_relative_eq!(mobius.value, 2.0 * PI * 3f64.sqrt(), epsilon = 1e-6);
        let t = mobius.t_star;
        assert!((1.0 / t.tanh() - 2.0 * (2.0 * t).tanh()).abs() < 1e-6);
        // bracket refinement stability
        let tight = maximize_over_modulus(ModulusFamily::Annulus, (1.0, 1.4)).unwrap();
        assert!((tight.value - annulus.value).abs() <= 1e-7);
        // σ₁L is increasing on a degenerate bracket near zero
        let degen = maximize_over_modulus(ModulusFamily::Annulus, (0.001, 0.01)).unwrap();
        assert!(degen.boundary_maximum);
        assert_relative_eq!(degen.t_star, 0.01, epsilon = 1e-12);
    }

    #[test]
    fn density_ascent_is_monotone_and_improves() {
        let mesh = generate_domain(&DomainSpec::annulus(1.199678640257734, 4)).unwrap();
        let pos = mesh.dof_positions();
        let density: Vec<f64> = (0..mesh.num_dofs())
            .map(|d| 1.0 + 0.2 * (pos[d][1]).cos())
            .collect();
        let report = maximize_density(&mesh, density, 80).unwrap();
        for w in report.trajectory.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-10);
        }
        let first = report.trajectory[0].1;
        assert!(report.final_value > first + 1e-3, "no progress: {first} → {}", report.final_value);
    }

    #[test]
    fn uniform_disk_density_is_a_fixed_point() {
        let mesh = generate_domain(&DomainSpec::disk(4)).unwrap();
        let report = maximize_density(&mesh, vec![1.0; mesh.num_dofs()], 15).unwrap();
        let first = report.trajectory[0].1;
        assert!(first <= 2.0 * PI * 1.01);
        assert!((report.final_value - first).abs() <= 1e-6 * first);
        let spread: f64 = report
            .final_density
            .iter()
            .zip(mesh.boundary_dofs().iter().map(|_| 1.0))
            .map(|(r, u)| (r - u).abs())
            .fold(0.0, f64::max);
        assert!(spread <= 1e-6);
    }

    #[test]
    fn disk_certificate_is_the_identity_quadric() {
        let mesh = generate_domain(&DomainSpec::disk(5)).unwrap();
        let metric = DiscreteMetric::uniform(&mesh);
        let spec = steklov_spectrum(&mesh, &metric, 3).unwrap();
        let ops = crate::spectral::assemble_operators(&mesh, &metric).unwrap();
        let cluster = [spec.functions[1].clone(), spec.functions[2].clone()];
        let report =
            spherical_certificate(&cluster, mesh.boundary_dofs(), &ops.boundary_mass).unwrap();
        assert!(report.residual <= 1e-10, "residual {}", report.residual);
        // the maps square-sum to one pointwise
        for (row, _) in report.boundary_dofs.iter().enumerate() {
            let s: f64 = report.maps.iter().map(|m| m[row] * m[row]).sum();
            assert!((s - 1.0).abs() <= 1e-3);
        }
        assert!(matches!(
            spherical_certificate(&[], mesh.boundary_dofs(), &ops.boundary_mass),
            Err(Error::EmptyCluster)
        ));
    }

    #[test]
    fn flat_torus_values() {
        let square = Lattice::new([1.0, 0.0], [0.0, 1.0]).unwrap();
        assert_relative_eq!(flat_torus_lambda1(&square), 4.0 * PI * PI, epsilon = 1e-10);
        let rhombic = Lattice::new([1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]).unwrap();
        let hex = flat_torus_lambda1(&rhombic);
        assert_relative_eq!(hex, 8.0 * PI * PI / 3f64.sqrt(), epsilon = 1e-10);
        assert!(hex > flat_torus_lambda1(&square));
        // scale invariance
        let scaled = Lattice::new([2.0, 0.0], [1.0, 3f64.sqrt()]).unwrap();
        assert_relative_eq!(flat_torus_lambda1(&scaled), hex, epsilon = 1e-10);
    }

    #[test]
    fn torus_derivative_matches_enumerated_eigenvalue() {
        let lat = Lattice::new([1.0, 0.0], [0.13, 1.37]).unwrap();
        for h in [[1.0, 0.0, 1.0], [0.4, -0.3, -0.4], [0.0, 1.0, 0.0]] {
            let (q, fd) = laplace_derivative_flat_torus(&lat, h).unwrap();
            assert!(
                (q - fd).abs() <= 1e-8 * fd.abs().max(1.0),
                "h {h:?}: {q} vs {fd}"
            );
        }
        // h = g: the derivative is −λ₁
        let (q, _) = laplace_derivative_flat_torus(&lat, [1.0, 0.0, 1.0]).unwrap();
        let lam = flat_torus_lambda1(&lat) / lat.det();
        assert_relative_eq!(q, -lam, epsilon = 1e-10);
        // square torus: four shortest dual vectors, two ±-classes
        let square = Lattice::new([1.0, 0.0], [0.0, 1.0]).unwrap();
        assert!(matches!(
            laplace_derivative_flat_torus(&square, [1.0, 0.0, 0.0]),
            Err(Error::MultipleLambda1(2))
        ));
    }

    #[test]
    fn bound_report_checks_records() {
        let report = bound_checks(&[
            BoundRecord::Steklov {
                name: "disk".into(),
                genus: 0,
                boundary_components: 1,
                sigma1_l: 2.0 * PI,
            },
            BoundRecord::Laplace {
                name: "rhombic".into(),
                genus: 1,
                lambda1_a: 8.0 * PI * PI / 3f64.sqrt(),
            },
        ]);
        assert!(report.all_pass);
        let bad = bound_checks(&[BoundRecord::Steklov {
            name: "bogus".into(),
            genus: 0,
            boundary_components: 1,
            sigma1_l: 7.0,
        }]);
        assert!(!bad.all_pass);
    }
}

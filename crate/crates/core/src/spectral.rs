//! Discrete operators and Steklov spectra.
//!
//! The Steklov problem is discretized with piecewise-linear elements: the
//! Dirichlet energy of the per-triangle metric gives the stiffness matrix,
//! the boundary measure is lumped trapezoidally into a diagonal boundary mass
//! matrix, and the spectrum is computed from the dense Dirichlet-to-Neumann
//! matrix obtained as the Schur complement of the stiffness onto the boundary
//! degrees of freedom.
//!
//! Exact separation-of-variables spectra for the flat annulus and flat
//! Möbius band serve as oracles for the FEM path.

use crate::error::{Error, Result};
use crate::mesh::TriangleMesh;
use faer::linalg::solvers::Solve as _;
use faer::sparse::{SparseColMat, Triplet};
use nalgebra::{DMatrix, DVector};

/// Per-triangle SPD metric tensor in chart coordinates plus a positive
/// boundary weight per degree of freedom.
#[derive(Debug, Clone)]
pub struct DiscreteMetric {
    /// (g11, g12, g22) per triangle.
    pub tensors: Vec<[f64; 3]>,
    /// Positive weight per dof; only boundary entries enter the operators.
    pub boundary_density: Vec<f64>,
}

impl DiscreteMetric {
    /// Flat chart metric with unit boundary density.
    pub fn uniform(mesh: &TriangleMesh) -> Self {
        Self {
            tensors: vec![[1.0, 0.0, 1.0]; mesh.triangles.len()],
            boundary_density: vec![1.0; mesh.num_dofs()],
        }
    }

    pub fn validate(&self, mesh: &TriangleMesh) -> Result<()> {
        for (i, t) in self.tensors.iter().enumerate() {
            if t[0] <= 0.0 || t[0] * t[2] - t[1] * t[1] <= 0.0 {
                return Err(Error::MetricNotSpd(i));
            }
        }
        for &d in mesh.boundary_dofs() {
            if self.boundary_density[d] <= 0.0 {
                return Err(Error::NonPositiveDensity(d));
            }
        }
        Ok(())
    }

    /// Total boundary length under the trapezoidal rule.
    pub fn boundary_length(&self, mesh: &TriangleMesh) -> f64 {
        mesh.boundary_edges()
            .iter()
            .map(|&(a, b, len)| {
                0.5 * len * (self.boundary_density[a] + self.boundary_density[b])
            })
            .sum()
    }
}

/// Assembled discrete operators over quotient dofs.
pub struct OperatorSet {
    pub stiffness: SparseColMat<usize, f64>,
    /// Diagonal of the lumped boundary mass matrix (zero off the boundary).
    pub boundary_mass: Vec<f64>,
    pub boundary_dofs: Vec<usize>,
    pub num_dofs: usize,
}

/// Galerkin stiffness of the metric Dirichlet energy and the lumped boundary
/// mass. Seam-identified vertices share one row/column.
pub fn assemble_operators(mesh: &TriangleMesh, metric: &DiscreteMetric) -> Result<OperatorSet> {
    metric.validate(mesh)?;
    let n = mesh.num_dofs();
    let mut triplets: Vec<Triplet<usize, usize, f64>> =
        Vec::with_capacity(9 * mesh.triangles.len());
    for (ti, tri) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = tri.map(|v| mesh.vertices[v]);
        let area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        // P1 shape gradients: grad λ_i = rot90(opposite edge)/(2A)
        let grads = [
            [(b[1] - c[1]) / area2, (c[0] - b[0]) / area2],
            [(c[1] - a[1]) / area2, (a[0] - c[0]) / area2],
            [(a[1] - b[1]) / area2, (b[0] - a[0]) / area2],
        ];
        let [g11, g12, g22] = metric.tensors[ti];
        let det = g11 * g22 - g12 * g12;
        let scale = 0.5 * area2 * det.sqrt() / det; // area · √det g · (applied to g⁻¹)
        let ginv = [g22, -g12, g11];
        let dofs = tri.map(|v| mesh.dof_of_vertex(v));
        for i in 0..3 {
            for j in 0..3 {
                let gi = grads[i];
                let gj = grads[j];
                let e = gi[0] * (ginv[0] * gj[0] + ginv[1] * gj[1])
                    + gi[1] * (ginv[1] * gj[0] + ginv[2] * gj[1]);
                triplets.push(Triplet::new(dofs[i], dofs[j], scale * e));
            }
        }
    }
    let stiffness = SparseColMat::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| Error::InvalidMesh(format!("stiffness assembly: {e:?}")))?;
    let mut boundary_mass = vec![0.0; n];
    for (a, b, len) in mesh.boundary_edges() {
        boundary_mass[a] += 0.5 * len * metric.boundary_density[a];
        boundary_mass[b] += 0.5 * len * metric.boundary_density[b];
    }
    Ok(OperatorSet {
        stiffness,
        boundary_mass,
        boundary_dofs: mesh.boundary_dofs().to_vec(),
        num_dofs: n,
    })
}

/// Schur complement of the stiffness onto boundary dofs plus the interior
/// harmonic-extension operator.
pub struct DtnSystem {
    /// Dense symmetric PSD matrix on boundary dofs (in `boundary_dofs` order).
    pub dtn: DMatrix<f64>,
    pub boundary_dofs: Vec<usize>,
    /// Interior dofs in ascending order.
    pub interior_dofs: Vec<usize>,
    /// Maps boundary values to the interior harmonic extension: u_I = E·u_B.
    pub extension: DMatrix<f64>,
}

pub fn dtn_matrix(ops: &OperatorSet) -> Result<DtnSystem> {
    let n = ops.num_dofs;
    let nb = ops.boundary_dofs.len();
    let mut is_boundary = vec![false; n];
    for &d in &ops.boundary_dofs {
        is_boundary[d] = true;
    }
    let interior_dofs: Vec<usize> = (0..n).filter(|&d| !is_boundary[d]).collect();
    let ni = interior_dofs.len();
    let mut index = vec![usize::MAX; n]; // position within its block
    for (i, &d) in ops.boundary_dofs.iter().enumerate() {
        index[d] = i;
    }
    for (i, &d) in interior_dofs.iter().enumerate() {
        index[d] = i;
    }

    let mut s_bb = DMatrix::<f64>::zeros(nb, nb);
    let mut s_ib_triplets: Vec<Triplet<usize, usize, f64>> = Vec::new();
    let mut s_ii_triplets: Vec<Triplet<usize, usize, f64>> = Vec::new();
    let mut s_ib_dense = faer::Mat::<f64>::zeros(ni, nb);
    for j in 0..n {
        for (i, v) in ops
            .stiffness
            .as_ref()
            .row_idx_of_col(j)
            .zip(ops.stiffness.as_ref().val_of_col(j))
        {
            match (is_boundary[i], is_boundary[j]) {
                (true, true) => s_bb[(index[i], index[j])] += v,
                (false, false) => s_ii_triplets.push(Triplet::new(index[i], index[j], *v)),
                (false, true) => {
                    s_ib_triplets.push(Triplet::new(index[i], index[j], *v));
                    s_ib_dense[(index[i], index[j])] += v;
                }
                (true, false) => {} // symmetric counterpart handled above
            }
        }
    }

    let mut dtn = s_bb;
    let extension = if ni > 0 {
        let s_ii = SparseColMat::try_new_from_triplets(ni, ni, &s_ii_triplets)
            .map_err(|e| Error::SingularInterior(format!("{e:?}")))?;
        let llt = s_ii
            .sp_cholesky(faer::Side::Lower)
            .map_err(|e| Error::SingularInterior(format!("{e:?}")))?;
        let x = llt.solve(&s_ib_dense); // S_ii⁻¹ S_ib
        // dtn = S_bb − S_ibᵀ X
        for &t in &s_ib_triplets {
            let (i, j, v) = (t.row, t.col, t.val);
            for c in 0..nb {
                dtn[(j, c)] -= v * x[(i, c)];
            }
        }
        DMatrix::from_fn(ni, nb, |i, j| -x[(i, j)])
    } else {
        DMatrix::zeros(0, nb)
    };
    // enforce symmetry of the Schur complement
    for i in 0..nb {
        for j in (i + 1)..nb {
            let m = 0.5 * (dtn[(i, j)] + dtn[(j, i)]);
            dtn[(i, j)] = m;
            dtn[(j, i)] = m;
        }
    }
    Ok(DtnSystem { dtn, boundary_dofs: ops.boundary_dofs.clone(), interior_dofs, extension })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Steklov,
    LaplaceFlatTorus,
}

/// Sorted eigenvalues with multiplicity grouping and (for FEM spectra)
/// vertex-valued eigenfunctions over quotient dofs, normalized in the
/// boundary inner product.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub values: Vec<f64>,
    pub functions: Vec<DVector<f64>>,
    /// Group index per eigenvalue; equal indices mean one multiplicity group.
    pub groups: Vec<usize>,
}

impl Spectrum {
    pub fn multiplicity_of(&self, k: usize) -> usize {
        self.groups.iter().filter(|&&g| g == self.groups[k]).count()
    }

    /// CSV with columns (index, eigenvalue, multiplicity_group).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,multiplicity_group\n");
        for (i, (v, g)) in self.values.iter().zip(&self.groups).enumerate() {
            out.push_str(&format!("{i},{v:.11e},{g}\n"));
        }
        out
    }

    /// Per-vertex eigenfunction CSV keyed by vertex id.
    pub fn functions_csv(&self, mesh: &TriangleMesh) -> String {
        let mut out = String::from("vertex");
        for i in 0..self.functions.len() {
            out.push_str(&format!(",phi{i}"));
        }
        out.push('\n');
        for v in 0..mesh.num_vertices() {
            let d = mesh.dof_of_vertex(v);
            out.push_str(&v.to_string());
            for f in &self.functions {
                out.push_str(&format!(",{:.11e}", f[d]));
            }
            out.push('\n');
        }
        out
    }
}

fn group_values(values: &[f64], rel_tol: f64) -> Vec<usize> {
    let mut groups = Vec::with_capacity(values.len());
    let mut g = 0;
    for (i, &v) in values.iter().enumerate() {
        if i > 0 && (v - values[i - 1]).abs() > rel_tol * v.abs().max(1.0) {
            g += 1;
        }
        groups.push(g);
    }
    groups
}

/// First `count` Steklov eigenpairs of the discrete pencil
/// dtn·φ = σ·M_∂·φ, eigenfunctions harmonically extended to the interior.
pub fn steklov_spectrum(
    mesh: &TriangleMesh,
    metric: &DiscreteMetric,
    count: usize,
) -> Result<Spectrum> {
    let ops = assemble_operators(mesh, metric)?;
    steklov_spectrum_from_ops(mesh, &ops, count)
}

/// As [`steklov_spectrum`], reusing assembled operators.
pub fn steklov_spectrum_from_ops(
    mesh: &TriangleMesh,
    ops: &OperatorSet,
    count: usize,
) -> Result<Spectrum> {
    let nb = ops.boundary_dofs.len();
    if count > nb {
        return Err(Error::TooManyEigenvalues { requested: count, available: nb });
    }
    let sys = dtn_matrix(ops)?;
    let inv_sqrt: Vec<f64> = sys
        .boundary_dofs
        .iter()
        .map(|&d| 1.0 / ops.boundary_mass[d].sqrt())
        .collect();
    let mut c = sys.dtn.clone();
    for i in 0..nb {
        for j in 0..nb {
            c[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let eig = c.symmetric_eigen();
    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut values = Vec::with_capacity(count);
    let mut functions = Vec::with_capacity(count);
    for &k in order.iter().take(count) {
        values.push(eig.eigenvalues[k]);
        // boundary values, M-orthonormal
        let mut phi = DVector::<f64>::zeros(ops.num_dofs);
        for (i, &d) in sys.boundary_dofs.iter().enumerate() {
            phi[d] = eig.eigenvectors[(i, k)] * inv_sqrt[i];
        }
        // harmonic extension
        let ub = DVector::from_iterator(nb, sys.boundary_dofs.iter().map(|&d| phi[d]));
        let ui = &sys.extension * &ub;
        for (i, &d) in sys.interior_dofs.iter().enumerate() {
            phi[d] = ui[i];
        }
        // deterministic sign: first boundary component above noise is positive
        let scale = ub.amax();
        if let Some(&lead) = ub.iter().find(|x| x.abs() > 1e-9 * scale) {
            if lead < 0.0 {
                phi.neg_mut();
            }
        }
        functions.push(phi);
    }
    // grouping tolerance tied to the mesh error scale
    let h_max = mesh
        .triangles
        .iter()
        .map(|t| {
            let [a, b, c] = t.map(|v| mesh.vertices[v]);
            let d2 = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
            d2(a, b).max(d2(b, c)).max(d2(c, a))
        })
        .fold(0.0f64, f64::max)
        .sqrt();
    let groups = group_values(&values, 10.0 * h_max * h_max);
    Ok(Spectrum { kind: SpectrumKind::Steklov, values, functions, groups })
}

const ORACLE_GROUP_TOL: f64 = 1e-6;

/// Exact Steklov spectrum of the flat annulus [-T, T] × S¹ with unit
/// boundary density: {0, 1/T} ∪ {n tanh nT, n coth nT} (each doubly
/// degenerate), n = 1..n_max. Boundary length is 4π.
pub fn annulus_exact_spectrum(t: f64, n_max: usize) -> Result<Spectrum> {
    if t <= 0.0 {
        return Err(Error::NonPositiveModulus(t));
    }
    let mut values = vec![0.0, 1.0 / t];
    for n in 1..=n_max {
        let nf = n as f64;
        let tanh = nf * (nf * t).tanh();
        let coth = nf / (nf * t).tanh();
        values.extend([tanh, tanh, coth, coth]);
    }
    values.sort_by(f64::total_cmp);
    let groups = group_values(&values, ORACLE_GROUP_TOL);
    Ok(Spectrum { kind: SpectrumKind::Steklov, values, functions: Vec::new(), groups })
}

/// Exact Steklov spectrum of the flat Möbius band of modulus T with unit
/// boundary density: {0} ∪ {n tanh nT : n even} ∪ {n coth nT : n odd}, each
/// nonzero value doubly degenerate. Boundary length is 2π (single quotient
/// circle).
pub fn mobius_exact_spectrum(t: f64, n_max: usize) -> Result<Spectrum> {
    if t <= 0.0 {
        return Err(Error::NonPositiveModulus(t));
    }
    let mut values = vec![0.0];
    for n in 1..=n_max {
        let nf = n as f64;
        let v = if n % 2 == 0 {
            nf * (nf * t).tanh()
        } else {
            nf / (nf * t).tanh()
        };
        values.extend([v, v]);
    }
    values.sort_by(f64::total_cmp);
    let groups = group_values(&values, ORACLE_GROUP_TOL);
    Ok(Spectrum { kind: SpectrumKind::Steklov, values, functions: Vec::new(), groups })
}

/// σ_k · L, the scale-invariant normalized eigenvalue.
pub fn normalized_sigma(spectrum: &Spectrum, boundary_length: f64, k: usize) -> Result<f64> {
    if k == 0 || k >= spectrum.values.len() {
        return Err(Error::IndexOutOfRange(k));
    }
    Ok(spectrum.values[k] * boundary_length)
}

//! Catalog of free boundary minimal surfaces in the unit ball.
//!
//! Each surface carries an analytic chart parametrization with analytic
//! first (and where available second) derivatives, rescaled so its boundary
//! lies on the unit sphere. Coordinate functions of such a surface are
//! harmonic and satisfy ∇_η x = x along the boundary, which is what
//! [`ParametrizedSurface::verify_free_boundary`] measures.

use crate::error::{Error, Result};
use crate::geom::{dot, norm, normalize, scale, sub, Point};
use crate::quadrature::{adaptive_1d, adaptive_2d};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    EquatorialDisk,
    CriticalCatenoid,
    CriticalMobius,
    ConeOverGreatCircle,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::EquatorialDisk => "equatorial_disk",
            SurfaceKind::CriticalCatenoid => "critical_catenoid",
            SurfaceKind::CriticalMobius => "critical_mobius",
            SurfaceKind::ConeOverGreatCircle => "cone_over_great_circle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalFamily {
    Catenoid,
    Mobius,
}

/// Root of the criticality equation: t = coth t for the catenoid family,
/// coth t = 2 tanh 2t for the Möbius family. Bisection to 1e-12.
pub fn solve_critical_parameter(family: CriticalFamily) -> f64 {
    let f: fn(f64) -> f64 = match family {
        CriticalFamily::Catenoid => |t| t - 1.0 / t.tanh(),
        CriticalFamily::Mobius => |t| 1.0 / t.tanh() - 2.0 * (2.0 * t).tanh(),
    };
    let (mut lo, mut hi) = match family {
        CriticalFamily::Catenoid => (1.0, 1.5),
        CriticalFamily::Mobius => (0.5, 0.8),
    };
    let rising = f(lo) < 0.0;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Analytic chart parametrization of a catalog surface, rescaled so the
/// boundary lies on the unit sphere. The chart rectangle is
/// [t_min, t_max] × [0, 2π); for the Möbius band the chart double-covers the
/// quotient surface under (t, θ) ↦ (−t, θ+π).
#[derive(Debug, Clone)]
pub struct ParametrizedSurface {
    pub kind: SurfaceKind,
    pub ambient: usize,
    pub t_min: f64,
    pub t_max: f64,
    /// Half-width T of the flat conformal model; 0 for the polar disk chart.
    pub modulus: f64,
    /// Radius divided out so that |φ| = 1 on the chart boundary.
    pub scale: f64,
    /// How many times the chart covers the surface (2 for the Möbius band).
    cover: f64,
}

pub fn catalog_surface(kind: SurfaceKind) -> ParametrizedSurface {
    match kind {
        // the cone over a great circle *is* the equatorial disk
        SurfaceKind::EquatorialDisk | SurfaceKind::ConeOverGreatCircle => ParametrizedSurface {
            kind,
            ambient: 3,
            t_min: 0.0,
            t_max: 1.0,
            modulus: 0.0,
            scale: 1.0,
            cover: 1.0,
        },
        SurfaceKind::CriticalCatenoid => {
            truncated_catenoid(solve_critical_parameter(CriticalFamily::Catenoid))
        }
        SurfaceKind::CriticalMobius => {
            truncated_mobius(solve_critical_parameter(CriticalFamily::Mobius))
        }
    }
}

/// Catenoid truncated at |t| ≤ T and rescaled into the unit ball. Only
/// T solving t = coth t gives a free boundary surface; other values are
/// useful as negative controls.
pub fn truncated_catenoid(t: f64) -> ParametrizedSurface {
    ParametrizedSurface {
        kind: SurfaceKind::CriticalCatenoid,
        ambient: 3,
        t_min: -t,
        t_max: t,
        modulus: t,
        scale: (t.cosh().powi(2) + t * t).sqrt(),
        cover: 1.0,
    }
}

/// Minimal Möbius band in B⁴ truncated at |t| ≤ T and rescaled.
pub fn truncated_mobius(t: f64) -> ParametrizedSurface {
    ParametrizedSurface {
        kind: SurfaceKind::CriticalMobius,
        ambient: 4,
        t_min: -t,
        t_max: t,
        modulus: t,
        scale: (4.0 * t.sinh().powi(2) + (2.0 * t).cosh().powi(2)).sqrt(),
        cover: 2.0,
    }
}

/// Residuals of the free boundary minimal surface conditions together with
/// the basic geometric quantities.
#[derive(Debug, Clone, Serialize)]
pub struct FreeBoundaryReport {
    /// max |Δ_Σ x_i| over interior samples.
    pub harmonicity_residual: f64,
    /// max |∇_η x − x| over boundary samples.
    pub boundary_condition_residual: f64,
    /// max ||x| − 1| over boundary samples.
    pub sphere_residual: f64,
    pub area: f64,
    pub boundary_length: f64,
}

impl ParametrizedSurface {
    pub fn point(&self, t: f64, th: f64) -> Point {
        let r = 1.0 / self.scale;
        match self.kind {
            SurfaceKind::EquatorialDisk | SurfaceKind::ConeOverGreatCircle => {
                [t * th.cos(), t * th.sin(), 0.0, 0.0]
            }
            SurfaceKind::CriticalCatenoid => {
                [r * t.cosh() * th.cos(), r * t.cosh() * th.sin(), r * t, 0.0]
            }
            SurfaceKind::CriticalMobius => [
                r * 2.0 * t.sinh() * th.cos(),
                r * 2.0 * t.sinh() * th.sin(),
                r * (2.0 * t).cosh() * (2.0 * th).cos(),
                r * (2.0 * t).cosh() * (2.0 * th).sin(),
            ],
        }
    }

    pub fn d_t(&self, t: f64, th: f64) -> Point {
        let r = 1.0 / self.scale;
        match self.kind {
            SurfaceKind::EquatorialDisk | SurfaceKind::ConeOverGreatCircle => {
                [th.cos(), th.sin(), 0.0, 0.0]
            }
            SurfaceKind::CriticalCatenoid => {
                [r * t.sinh() * th.cos(), r * t.sinh() * th.sin(), r, 0.0]
            }
            SurfaceKind::CriticalMobius => [
                r * 2.0 * t.cosh() * th.cos(),
                r * 2.0 * t.cosh() * th.sin(),
                r * 2.0 * (2.0 * t).sinh() * (2.0 * th).cos(),
                r * 2.0 * (2.0 * t).sinh() * (2.0 * th).sin(),
            ],
        }
    }

    pub fn d_theta(&self, t: f64, th: f64) -> Point {
        let r = 1.0 / self.scale;
        match self.kind {
            SurfaceKind::EquatorialDisk | SurfaceKind::ConeOverGreatCircle => {
                [-t * th.sin(), t * th.cos(), 0.0, 0.0]
            }
            SurfaceKind::CriticalCatenoid => [
                -r * t.cosh() * th.sin(),
                r * t.cosh() * th.cos(),
                0.0,
                0.0,
            ],
            SurfaceKind::CriticalMobius => [
                -r * 2.0 * t.sinh() * th.sin(),
                r * 2.0 * t.sinh() * th.cos(),
                -r * 2.0 * (2.0 * t).cosh() * (2.0 * th).sin(),
                r * 2.0 * (2.0 * t).cosh() * (2.0 * th).cos(),
            ],
        }
    }

    /// Analytic second chart derivatives (φ_tt, φ_tθ, φ_θθ).
    pub fn second_derivatives(&self, t: f64, th: f64) -> (Point, Point, Point) {
        let r = 1.0 / self.scale;
        match self.kind {
            SurfaceKind::EquatorialDisk | SurfaceKind::ConeOverGreatCircle => (
                [0.0; 4],
                [-th.sin(), th.cos(), 0.0, 0.0],
                [-t * th.cos(), -t * th.sin(), 0.0, 0.0],
            ),
            SurfaceKind::CriticalCatenoid => (
                [r * t.cosh() * th.cos(), r * t.cosh() * th.sin(), 0.0, 0.0],
                [-r * t.sinh() * th.sin(), r * t.sinh() * th.cos(), 0.0, 0.0],
                [-r * t.cosh() * th.cos(), -r * t.cosh() * th.sin(), 0.0, 0.0],
            ),
            SurfaceKind::CriticalMobius => (
                [
                    r * 2.0 * t.sinh() * th.cos(),
                    r * 2.0 * t.sinh() * th.sin(),
                    r * 4.0 * (2.0 * t).cosh() * (2.0 * th).cos(),
                    r * 4.0 * (2.0 * t).cosh() * (2.0 * th).sin(),
                ],
                [
                    -r * 2.0 * t.cosh() * th.sin(),
                    r * 2.0 * t.cosh() * th.cos(),
                    -r * 4.0 * (2.0 * t).sinh() * (2.0 * th).sin(),
                    r * 4.0 * (2.0 * t).sinh() * (2.0 * th).cos(),
                ],
                [
                    -r * 2.0 * t.sinh() * th.cos(),
                    -r * 2.0 * t.sinh() * th.sin(),
                    -r * 4.0 * (2.0 * t).cosh() * (2.0 * th).cos(),
                    -r * 4.0 * (2.0 * t).cosh() * (2.0 * th).sin(),
                ],
            ),
        }
    }

    /// Induced first fundamental form (E, F, G) in chart coordinates.
    pub fn first_form(&self, t: f64, th: f64) -> [f64; 3] {
        let pt = self.d_t(t, th);
        let pth = self.d_theta(t, th);
        [dot(&pt, &pt), dot(&pt, &pth), dot(&pth, &pth)]
    }

    pub fn sqrt_det(&self, t: f64, th: f64) -> f64 {
        let [e, f, g] = self.first_form(t, th);
        (e * g - f * f).max(0.0).sqrt()
    }

    /// Unit normal field; only defined for the codimension-one catalog
    /// surfaces in B³.
    pub fn unit_normal(&self, t: f64, th: f64) -> Result<Point> {
        match self.kind {
            SurfaceKind::EquatorialDisk | SurfaceKind::ConeOverGreatCircle => {
                Ok([0.0, 0.0, 1.0, 0.0])
            }
            SurfaceKind::CriticalCatenoid => Ok([
                -th.cos() / t.cosh(),
                -th.sin() / t.cosh(),
                t.tanh(),
                0.0,
            ]),
            SurfaceKind::CriticalMobius => {
                Err(Error::MissingSecondForm(self.kind.name().to_string()))
            }
        }
    }

    /// Scalar second fundamental form (A_tt, A_tθ, A_θθ) = ⟨φ_ab, ν⟩ with
    /// respect to [`Self::unit_normal`].
    pub fn chart_second_form(&self, _t: f64, _th: f64) -> Result<[f64; 3]> {
        match self.kind {
            SurfaceKind::EquatorialDisk | SurfaceKind::ConeOverGreatCircle => Ok([0.0; 3]),
            SurfaceKind::CriticalCatenoid => {
                Ok([-1.0 / self.scale, 0.0, 1.0 / self.scale])
            }
            SurfaceKind::CriticalMobius => {
                Err(Error::MissingSecondForm(self.kind.name().to_string()))
            }
        }
    }

    /// Boundary circles as (chart t value, outward conormal sign).
    pub fn boundary_circles(&self) -> Vec<(f64, f64)> {
        match self.kind {
            SurfaceKind::EquatorialDisk | SurfaceKind::ConeOverGreatCircle => vec![(1.0, 1.0)],
            SurfaceKind::CriticalCatenoid => vec![(self.t_max, 1.0), (self.t_min, -1.0)],
            // the two chart edges are identified under the deck map
            SurfaceKind::CriticalMobius => vec![(self.t_max, 1.0)],
        }
    }

    /// |Σ| by adaptive tensor quadrature on the chart.
    pub fn area(&self) -> Result<f64> {
        let v = adaptive_2d(
            |t, th| self.sqrt_det(t, th),
            self.t_min,
            self.t_max,
            0.0,
            2.0 * PI,
            8,
            1e-9,
        )?;
        Ok(v / self.cover)
    }

    /// |∂Σ| by adaptive quadrature along each boundary circle.
    pub fn boundary_length(&self) -> Result<f64> {
        let mut total = 0.0;
        for (tb, _) in self.boundary_circles() {
            total += adaptive_1d(
                |th| norm(&self.d_theta(tb, th)),
                0.0,
                2.0 * PI,
                16,
                1e-10,
            )?;
        }
        Ok(total)
    }

    /// Outward unit conormal at a boundary point (charts are orthogonal, so
    /// this is ±φ_t normalized).
    pub fn conormal(&self, tb: f64, sign: f64, th: f64) -> Point {
        let pt = self.d_t(tb, th);
        scale(sign, &normalize(&pt))
    }

    /// Residuals of the free boundary conditions on a `grid` × `grid`
    /// parametric grid, plus area and boundary length.
    ///
    /// Harmonicity uses the analytic chart Laplacian where second
    /// derivatives are stored (disk, catenoid, cone); the Möbius band falls
    /// back to the finite-difference surface Laplacian.
    pub fn verify_free_boundary(&self, grid: usize) -> Result<FreeBoundaryReport> {
        let grid = grid.max(8);
        let mut sphere_residual = 0.0f64;
        let mut bc_residual = 0.0f64;
        for (tb, sign) in self.boundary_circles() {
            for j in 0..4 * grid {
                let th = 2.0 * PI * j as f64 / (4 * grid) as f64;
                let x = self.point(tb, th);
                sphere_residual = sphere_residual.max((norm(&x) - 1.0).abs());
                let eta = self.conormal(tb, sign, th);
                bc_residual = bc_residual.max(norm(&sub(&eta, &x)));
            }
        }
        let harmonicity_residual = match self.kind {
            SurfaceKind::CriticalMobius => self.fd_harmonicity_residual(grid)?,
            _ => self.analytic_harmonicity_residual(grid)?,
        };
        Ok(FreeBoundaryReport {
            harmonicity_residual,
            boundary_condition_residual: bc_residual,
            sphere_residual,
            area: self.area()?,
            boundary_length: self.boundary_length()?,
        })
    }

    fn analytic_harmonicity_residual(&self, grid: usize) -> Result<f64> {
        let mut residual = 0.0f64;
        for i in 1..grid {
            let t = self.t_min + (self.t_max - self.t_min) * i as f64 / grid as f64;
            for j in 0..grid {
                let th = 2.0 * PI * j as f64 / grid as f64;
                let (ptt, _, pthth) = self.second_derivatives(t, th);
                let lap = match self.kind {
                    // polar chart: Δ = ∂_rr + (1/r)∂_r + (1/r²)∂_θθ
                    SurfaceKind::EquatorialDisk | SurfaceKind::ConeOverGreatCircle => {
                        let pr = self.d_t(t, th);
                        [
                            ptt[0] + pr[0] / t + pthth[0] / (t * t),
                            ptt[1] + pr[1] / t + pthth[1] / (t * t),
                            ptt[2] + pr[2] / t + pthth[2] / (t * t),
                            0.0,
                        ]
                    }
                    // conformal chart: Δ_Σ = λ⁻²(∂_tt + ∂_θθ)
                    _ => {
                        let lam2 = self.first_form(t, th)[0];
                        if lam2 < 1e-14 {
                            return Err(Error::DegenerateMetric(t, th));
                        }
                        scale(1.0 / lam2, &[
                            ptt[0] + pthth[0],
                            ptt[1] + pthth[1],
                            ptt[2] + pthth[2],
                            ptt[3] + pthth[3],
                        ])
                    }
                };
                residual = residual.max(norm(&lap));
            }
        }
        Ok(residual)
    }

    /// Finite-difference surface Laplacian residual on a parametric grid;
    /// O(h²)-consistent on the conformal charts.
    pub fn fd_harmonicity_residual(&self, grid: usize) -> Result<f64> {
        let ht = (self.t_max - self.t_min) / grid as f64;
        let hth = 2.0 * PI / grid as f64;
        let mut residual = 0.0f64;
        for i in 1..grid {
            let t = self.t_min + ht * i as f64;
            for j in 0..grid {
                let th = hth * j as f64;
                let lam2 = self.first_form(t, th)[0];
                if lam2 < 1e-14 {
                    return Err(Error::DegenerateMetric(t, th));
                }
                let mut lap = [0.0f64; 4];
                for c in 0..self.ambient {
                    let dtt = (self.point(t + ht, th)[c] - 2.0 * self.point(t, th)[c]
                        + self.point(t - ht, th)[c])
                        / (ht * ht);
                    let dthth = (self.point(t, th + hth)[c] - 2.0 * self.point(t, th)[c]
                        + self.point(t, th - hth)[c])
                        / (hth * hth);
                    lap[c] = (dtt + dthth) / lam2;
                }
                residual = residual.max(norm(&lap));
            }
        }
        Ok(residual)
    }

    /// (area, boundary length) by adaptive quadrature.
    pub fn geometry_quantities(&self) -> Result<(f64, f64)> {
        Ok((self.area()?, self.boundary_length()?))
    }

    /// Chart samples as CSV (t, theta, x1..xn) for external plotting.
    pub fn sample_csv(&self, nt: usize, ntheta: usize) -> String {
        let mut out = String::from("t,theta");
        for c in 0..self.ambient {
            out.push_str(&format!(",x{}", c + 1));
        }
        out.push('\n');
        for i in 0..=nt {
            let t = self.t_min + (self.t_max - self.t_min) * i as f64 / nt as f64;
            for j in 0..=ntheta {
                let th = 2.0 * PI * j as f64 / ntheta as f64;
                let x = self.point(t, th);
                out.push_str(&format!("{t:.11e},{th:.11e}"));
                for c in 0..self.ambient {
                    out.push_str(&format!(",{:.11e}", x[c]));
                }
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{DomainSpec, generate_domain};
    use crate::spectral::{assemble_operators, dtn_matrix, DiscreteMetric};
    use approx::assert_relative_eq;

    #[test]
    fn critical_parameters() {
        let t_cat = solve_critical_parameter(CriticalFamily::Catenoid);
        assert_relative_eq!(t_cat, 1.199678640257734, epsilon = 1e-10);
        assert!((t_cat - 1.0 / t_cat.tanh()).abs() < 1e-10);
        let t_mob = solve_critical_parameter(CriticalFamily::Mobius);
        assert_relative_eq!(t_mob, 0.6584789484624084, epsilon = 1e-10);
        assert_relative_eq!(1.0 / t_mob.tanh(), 3f64.sqrt(), epsilon = 1e-6);
        // bracket signs for the catenoid equation
        assert!(1.0 - 1.0 / 1f64.tanh() < 0.0);
        assert!(1.5 - 1.0 / 1.5f64.tanh() > 0.0);
    }

    #[test]
    fn disk_is_exact() {
        let disk = catalog_surface(SurfaceKind::EquatorialDisk);
        let report = disk.verify_free_boundary(16).unwrap();
        assert!(report.harmonicity_residual <= 1e-12);
        assert!(report.boundary_condition_residual <= 1e-12);
        assert!(report.sphere_residual <= 1e-12);
        assert_relative_eq!(report.area, PI, epsilon = 1e-10);
        assert_relative_eq!(report.boundary_length, 2.0 * PI, epsilon = 1e-10);
        // isoperimetric equality
        let slack = report.boundary_length.powi(2) / (4.0 * PI) - report.area;
        assert!(slack.abs() < 1e-10);
    }

    #[test]
    fn cone_over_great_circle_is_the_disk() {
        let disk = catalog_surface(SurfaceKind::EquatorialDisk);
        let cone = catalog_surface(SurfaceKind::ConeOverGreatCircle);
        for i in 0..=7 {
            let t = i as f64 / 7.0;
            let th = 0.83 * i as f64;
            let d = sub(&disk.point(t, th), &cone.point(t, th));
            assert!(norm(&d) == 0.0);
        }
    }

    #[test]
    fn critical_catenoid_geometry() {
        let cat = catalog_surface(SurfaceKind::CriticalCatenoid);
        let t0 = cat.modulus;
        let report = cat.verify_free_boundary(24).unwrap();
        assert!(report.sphere_residual <= 1e-10);
        assert!(report.boundary_condition_residual <= 1e-9);
        assert!(report.harmonicity_residual <= 1e-12);
        // L = 4π/T₀ since σ₁ = 1 on the critical catenoid
        assert_relative_eq!(report.boundary_length, 4.0 * PI / t0, epsilon = 1e-8);
        assert_relative_eq!(report.boundary_length, 10.474780655975891, epsilon = 1e-3);
        assert_relative_eq!(report.boundary_length / report.area, 2.0, epsilon = 1e-4);
        assert!(report.area >= PI - 1e-6);
        // strict isoperimetric inequality
        assert!(report.area <= report.boundary_length.powi(2) / (4.0 * PI) + 1e-10);
    }

    #[test]
    fn critical_mobius_geometry() {
        let mob = catalog_surface(SurfaceKind::CriticalMobius);
        let report = mob.verify_free_boundary(24).unwrap();
        assert!(report.sphere_residual <= 1e-10);
        assert!(report.boundary_condition_residual <= 1e-9);
        assert_relative_eq!(
            report.boundary_length,
            2.0 * PI * 3f64.sqrt(),
            epsilon = 1e-8
        );
        assert!((report.boundary_length / report.area - 2.0).abs() < 5e-3);
        assert!(report.area >= PI - 1e-6);
    }

    #[test]
    fn wrong_truncation_breaks_the_boundary_condition() {
        let wrong = truncated_catenoid(1.0);
        let report = wrong.verify_free_boundary(16).unwrap();
        assert!(report.sphere_residual <= 1e-10); // rescaled onto the sphere
        assert!(report.boundary_condition_residual >= 0.05);
    }

    #[test]
    fn fd_harmonicity_converges_quadratically() {
        let cat = catalog_surface(SurfaceKind::CriticalCatenoid);
        let coarse = cat.fd_harmonicity_residual(16).unwrap();
        let fine = cat.fd_harmonicity_residual(32).unwrap();
        let rate = coarse / fine;
        assert!(rate > 3.0 && rate < 5.0, "rate {rate}");
        let mob = catalog_surface(SurfaceKind::CriticalMobius);
        let ratio = mob.fd_harmonicity_residual(16).unwrap() / mob.fd_harmonicity_residual(32).unwrap();
        assert!(ratio > 3.0 && ratio < 5.0, "ratio {ratio}");
    }

    #[test]
    fn catenoid_coordinates_are_discrete_eigenfunctions() {
        // sample the coordinate functions onto the annulus FEM chart at the
        // critical modulus; their Rayleigh quotients sit at σ = 1.
        let cat = catalog_surface(SurfaceKind::CriticalCatenoid);
        let mesh = generate_domain(&DomainSpec::annulus(cat.modulus, 6)).unwrap();
        let mut metric = DiscreteMetric::uniform(&mesh);
        // boundary arc length of the catenoid, not of the flat chart
        let lam = cat.modulus.cosh() / cat.scale;
        metric.boundary_density = vec![lam; mesh.num_dofs()];
        let ops = assemble_operators(&mesh, &metric).unwrap();
        let sys = dtn_matrix(&ops).unwrap();
        let pos = mesh.dof_positions();
        for c in 0..3 {
            let ub: Vec<f64> = sys
                .boundary_dofs
                .iter()
                .map(|&d| cat.point(pos[d][0], pos[d][1])[c])
                .collect();
            let mut num = 0.0;
            let mut den = 0.0;
            for (i, &di) in sys.boundary_dofs.iter().enumerate() {
                den += ops.boundary_mass[di] * ub[i] * ub[i];
                for (j, _) in sys.boundary_dofs.iter().enumerate() {
                    num += ub[i] * sys.dtn[(i, j)] * ub[j];
                }
            }
            let sigma = num / den;
            assert!((sigma - 1.0).abs() < 0.02, "coordinate {c}: σ = {sigma}");
        }
    }

    #[test]
    fn sample_export_has_expected_shape() {
        let disk = catalog_surface(SurfaceKind::EquatorialDisk);
        let csv = disk.sample_csv(4, 8);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,theta,x1,x2,x3");
        assert_eq!(csv.lines().count(), 1 + 5 * 9);
    }
}

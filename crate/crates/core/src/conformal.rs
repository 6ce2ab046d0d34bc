//! Conformal transformations of the unit ball and the variational
//! identities they satisfy on free boundary minimal surfaces.
//!
//! A map is a rotation composed with the Möbius centering
//!
//!   x ↦ ((1 + 2⟨a,x⟩ + |x|²)a + (1 − |a|²)x) / (1 + 2⟨a,x⟩ + |a|²|x|²),
//!
//! which preserves the ball and the sphere and is conformal with
//! magnification factor u(x) = (1 − |a|²) / (1 + 2⟨a,x⟩ + |a|²|x|²). The
//! one-parameter flow toward a unit vector v is a(t) = tanh(t/2)·v; its
//! generator is X(x) = ((1+|x|²)/2)v − ⟨x,v⟩x, the gradient flow of the
//! linear function ⟨x,v⟩ restricted to the sphere.

use crate::error::{Error, Result};
use crate::geom::{axpy, dot, norm, normalize, scale, sub, Point};
use crate::minsurf::ParametrizedSurface;
use crate::quadrature::{adaptive_1d, adaptive_2d};
use rand::Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Conformal automorphism of Bⁿ: Möbius centering at `center` followed by a
/// rotation.
#[derive(Debug, Clone)]
pub struct BallConformalMap {
    pub center: Point,
    pub rotation: Option<[[f64; 4]; 4]>,
}

impl BallConformalMap {
    pub fn new(center: Point, rotation: Option<[[f64; 4]; 4]>) -> Result<Self> {
        let a = norm(&center);
        if a >= 1.0 {
            return Err(Error::OutsideBall(a));
        }
        if let Some(r) = &rotation {
            let mut residual = 0.0f64;
            for i in 0..4 {
                for j in 0..4 {
                    let mut s = 0.0;
                    for k in 0..4 {
                        s += r[k][i] * r[k][j];
                    }
                    residual = residual.max((s - if i == j { 1.0 } else { 0.0 }).abs());
                }
            }
            if residual > 1e-10 {
                return Err(Error::NotOrthogonal(residual));
            }
        }
        Ok(Self { center, rotation })
    }

    pub fn identity() -> Self {
        Self {
            center: [0.0; 4],
            rotation: None,
        }
    }

    /// Apply the map to a point of the closed ball.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        let nx = norm(x);
        if nx > 1.0 + 1e-12 {
            return Err(Error::OutsideBall(nx));
        }
        let a = &self.center;
        let ax = dot(a, x);
        let x2 = dot(x, x);
        let a2 = dot(a, a);
        let denom = 1.0 + 2.0 * ax + a2 * x2;
        let y = axpy(
            &scale((1.0 - a2) / denom, x),
            (1.0 + 2.0 * ax + x2) / denom,
            a,
        );
        Ok(match &self.rotation {
            None => y,
            Some(r) => {
                let mut out = [0.0; 4];
                for (i, row) in r.iter().enumerate() {
                    out[i] = dot(row, &y);
                }
                out
            }
        })
    }

    /// Conformal magnification factor u(x); the rotation part contributes
    /// nothing.
    pub fn magnification(&self, x: &Point) -> f64 {
        let a2 = dot(&self.center, &self.center);
        (1.0 - a2) / (1.0 + 2.0 * dot(&self.center, x) + a2 * dot(x, x))
    }

    /// Pole y = −a/|a|² of the magnification factor, outside the closed
    /// ball; `None` for rotations (the pole is at infinity).
    pub fn exterior_point(&self) -> Option<Point> {
        let a2 = dot(&self.center, &self.center);
        if a2 < 1e-30 {
            None
        } else {
            Some(scale(-1.0 / a2, &self.center))
        }
    }
}

/// One-parameter conformal flow toward the unit vector v at time t.
pub fn flow_map(v: &Point, t: f64) -> BallConformalMap {
    let v = normalize(v);
    BallConformalMap {
        center: scale((0.5 * t).tanh(), &v),
        rotation: None,
    }
}

/// Generator of the flow: X(x) = ((1+|x|²)/2)v − ⟨x,v⟩x.
pub fn flow_generator(v: &Point, x: &Point) -> Point {
    axpy(&scale(0.5 * (1.0 + dot(x, x)), v), -dot(x, v), x)
}

/// Length of the image of ∂Σ: ∫_{∂Σ} u ds, using that the map restricted to
/// the sphere is conformal with factor u.
pub fn image_boundary_length(
    surface: &ParametrizedSurface,
    map: &BallConformalMap,
) -> Result<f64> {
    let mut total = 0.0;
    for (tb, _) in surface.boundary_circles() {
        total += adaptive_1d(
            |th| {
                let x = surface.point(tb, th);
                map.magnification(&x) * norm(&surface.d_theta(tb, th))
            },
            0.0,
            2.0 * PI,
            16,
            1e-10,
        )?;
    }
    Ok(total)
}

/// Residuals of the first-variation identities for the conformal vector
/// field V(x) = (x − y)/|x − y|² with pole y outside the ball.
#[derive(Debug, Clone, Serialize)]
pub struct FirstVariationReport {
    /// max over boundary samples of |V·x − (1−u)/2|.
    pub identity_residual: f64,
    /// min over surface samples of div_Σ V (≥ 0 up to roundoff).
    pub min_divergence: f64,
    /// |∫_Σ div_Σ V − ∫_{∂Σ} V·x| (valid for minimal catalog surfaces).
    pub first_variation_gap: f64,
}

fn tangent_frame(surface: &ParametrizedSurface, t: f64, th: f64) -> (Point, Point) {
    let e1 = normalize(&surface.d_t(t, th));
    let pth = surface.d_theta(t, th);
    let e2 = normalize(&axpy(&pth, -dot(&pth, &e1), &e1));
    (e1, e2)
}

fn divergence_on_surface(surface: &ParametrizedSurface, y: &Point, t: f64, th: f64) -> f64 {
    let x = surface.point(t, th);
    let p = sub(&x, y);
    let p2 = dot(&p, &p);
    let (e1, e2) = tangent_frame(surface, t, th);
    let tangential = dot(&p, &e1).powi(2) + dot(&p, &e2).powi(2);
    2.0 * (p2 - tangential) / (p2 * p2)
}

pub fn first_variation_identities(
    surface: &ParametrizedSurface,
    y: &Point,
    samples: usize,
) -> Result<FirstVariationReport> {
    let ny = norm(y);
    if ny <= 1.0 {
        return Err(Error::NotExterior(ny));
    }
    let y2 = dot(y, y);
    let mut identity_residual = 0.0f64;
    let mut boundary_integral = 0.0;
    for (tb, _) in surface.boundary_circles() {
        for j in 0..samples {
            let th = 2.0 * PI * j as f64 / samples as f64;
            let x = surface.point(tb, th);
            let p = sub(&x, y);
            let p2 = dot(&p, &p);
            let vx = dot(&p, &x) / p2;
            let u = (y2 - 1.0) / p2;
            identity_residual = identity_residual.max((vx - 0.5 * (1.0 - u)).abs());
        }
        boundary_integral += adaptive_1d(
            |th| {
                let x = surface.point(tb, th);
                let p = sub(&x, y);
                dot(&p, &x) / dot(&p, &p) * norm(&surface.d_theta(tb, th))
            },
            0.0,
            2.0 * PI,
            16,
            1e-10,
        )?;
    }
    let mut min_divergence = f64::INFINITY;
    for i in 1..samples {
        let t = surface.t_min + (surface.t_max - surface.t_min) * i as f64 / samples as f64;
        for j in 0..samples {
            let th = 2.0 * PI * j as f64 / samples as f64;
            min_divergence = min_divergence.min(divergence_on_surface(surface, y, t, th));
        }
    }
    let interior_integral = adaptive_2d(
        |t, th| divergence_on_surface(surface, y, t, th) * surface.sqrt_det(t, th),
        surface.t_min,
        surface.t_max,
        0.0,
        2.0 * PI,
        16,
        1e-9,
    )? / chart_cover(surface);
    Ok(FirstVariationReport {
        identity_residual,
        min_divergence,
        first_variation_gap: (interior_integral - boundary_integral).abs(),
    })
}

fn chart_cover(surface: &ParametrizedSurface) -> f64 {
    use crate::minsurf::SurfaceKind;
    if surface.kind == SurfaceKind::CriticalMobius {
        2.0
    } else {
        1.0
    }
}

/// ∫_Σ |v^⊥|² dv: squared normal component of the constant vector v.
pub fn normal_mass(surface: &ParametrizedSurface, v: &Point) -> Result<f64> {
    let v = normalize(v);
    let val = adaptive_2d(
        |t, th| {
            let (e1, e2) = tangent_frame(surface, t, th);
            let perp2 = 1.0 - dot(&v, &e1).powi(2) - dot(&v, &e2).powi(2);
            perp2.max(0.0) * surface.sqrt_det(t, th)
        },
        surface.t_min,
        surface.t_max,
        0.0,
        2.0 * PI,
        16,
        1e-9,
    )?;
    Ok(val / chart_cover(surface))
}

/// Second derivative of t ↦ |f_t(∂Σ)| at t = 0: Richardson-extrapolated
/// central differences against the closed formula −(k−1)k ∫_Σ |v^⊥|² dv.
///
/// The surviving second-order term of the variation is the interior
/// integral of |v^⊥|² — the equatorial disk with v = e₃ pins it down, where
/// the flow shortens the boundary circle to 2π/cosh t and the second
/// derivative is −2π = −2·π, the (k−1)k-multiple of the disk area, not of
/// its boundary length.
pub fn second_derivative_boundary_length(
    surface: &ParametrizedSurface,
    v: &Point,
) -> Result<(f64, f64)> {
    let v = normalize(v);
    let k = 2.0; // all catalog surfaces are two-dimensional
    let l0 = image_boundary_length(surface, &BallConformalMap::identity())?;
    let second = |h: f64| -> Result<f64> {
        let lp = image_boundary_length(surface, &flow_map(&v, h))?;
        let lm = image_boundary_length(surface, &flow_map(&v, -h))?;
        Ok((lp + lm - 2.0 * l0) / (h * h))
    };
    let d1 = second(1e-2)?;
    let d2 = second(5e-3)?;
    let d3 = second(2.5e-3)?;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    let spread = (r1 - r2).abs();
    if spread > 1e-4 * r2.abs().max(1.0) {
        return Err(Error::UnstableDifference(spread));
    }
    let formula = -(k - 1.0) * k * normal_mass(surface, &v)?;
    Ok((r2, formula))
}

/// Free boundary index form evaluated on the normal part of a constant
/// vector field, against the closed formula −2∫_Σ|v^⊥|² dv.
///
/// With V = ψν (codimension one), the form is
/// ∫_Σ (|∇ψ|² − ψ²|A|²) dv − ∫_{∂Σ} ψ² ds, the boundary term being the
/// second fundamental form of the unit sphere in the outward direction.
pub fn index_form_normal_direction(
    surface: &ParametrizedSurface,
    v: &Point,
) -> Result<(f64, f64)> {
    let v = normalize(v);
    // fail early if no analytic second fundamental form exists
    surface.chart_second_form(0.5 * (surface.t_min + surface.t_max), 0.0)?;
    let psi = |t: f64, th: f64| -> Result<f64> { Ok(dot(&v, &surface.unit_normal(t, th)?)) };
    let interior = adaptive_2d(
        |t, th| {
            let [e, f, g] = surface.first_form(t, th);
            let det = e * g - f * f;
            let ginv = [g / det, -f / det, e / det];
            let a = surface.chart_second_form(t, th).expect("checked above");
            let wt = dot(&v, &surface.d_t(t, th));
            let wth = dot(&v, &surface.d_theta(t, th));
            // Weingarten: ψ_a = −A_ab g^{bc} ⟨v, φ_c⟩
            let psi_t = -(a[0] * (ginv[0] * wt + ginv[1] * wth)
                + a[1] * (ginv[1] * wt + ginv[2] * wth));
            let psi_th = -(a[1] * (ginv[0] * wt + ginv[1] * wth)
                + a[2] * (ginv[1] * wt + ginv[2] * wth));
            let grad2 = ginv[0] * psi_t * psi_t
                + 2.0 * ginv[1] * psi_t * psi_th
                + ginv[2] * psi_th * psi_th;
            let a_norm2 = ginv[0] * ginv[0] * a[0] * a[0]
                + ginv[2] * ginv[2] * a[2] * a[2]
                + 2.0 * ginv[0] * ginv[2] * a[1] * a[1]
                + 4.0 * ginv[1] * (ginv[0] * a[0] + ginv[2] * a[2]) * a[1]
                + 2.0 * ginv[1] * ginv[1] * (a[0] * a[2] + a[1] * a[1]);
            let p = psi(t, th).expect("normal exists");
            (grad2 - p * p * a_norm2) * det.sqrt()
        },
        surface.t_min,
        surface.t_max,
        0.0,
        2.0 * PI,
        16,
        1e-9,
    )?;
    let mut boundary = 0.0;
    for (tb, _) in surface.boundary_circles() {
        boundary += adaptive_1d(
            |th| psi(tb, th).expect("normal exists").powi(2) * norm(&surface.d_theta(tb, th)),
            0.0,
            2.0 * PI,
            16,
            1e-10,
        )?;
    }
    let normal2 = adaptive_2d(
        |t, th| psi(t, th).expect("normal exists").powi(2) * surface.sqrt_det(t, th),
        surface.t_min,
        surface.t_max,
        0.0,
        2.0 * PI,
        16,
        1e-9,
    )?;
    Ok((interior - boundary, -2.0 * normal2))
}

/// Closed curve on the unit sphere S² ⊂ ℝ³.
#[derive(Debug, Clone)]
pub enum SphereCurve {
    /// cos θ·e1 + sin θ·e2 for an orthonormal pair.
    GreatCircle { e1: Point, e2: Point },
    /// Circle of constant height z ∈ (−1, 1).
    Latitude { z: f64 },
}

impl SphereCurve {
    /// Great circle through ±a, heading toward b at θ = π/2.
    pub fn great_circle(a: &Point, b: &Point) -> Result<Self> {
        let e1 = normalize(a);
        let e2 = axpy(b, -dot(b, &e1), &e1);
        let n = norm(&e2);
        if n < 1e-12 {
            return Err(Error::InvalidDomain(
                "great circle spanning vectors are parallel".into(),
            ));
        }
        Ok(SphereCurve::GreatCircle {
            e1,
            e2: scale(1.0 / n, &e2),
        })
    }

    pub fn point(&self, th: f64) -> Point {
        match self {
            SphereCurve::GreatCircle { e1, e2 } => axpy(&scale(th.cos(), e1), th.sin(), e2),
            SphereCurve::Latitude { z } => {
                let r = (1.0 - z * z).sqrt();
                [r * th.cos(), r * th.sin(), *z, 0.0]
            }
        }
    }

    pub fn speed(&self, _th: f64) -> f64 {
        match self {
            SphereCurve::GreatCircle { .. } => 1.0,
            SphereCurve::Latitude { z } => (1.0 - z * z).sqrt(),
        }
    }
}

/// Length of the image of a spherical curve under the map's sphere
/// restriction.
pub fn spherical_conformal_length(curve: &SphereCurve, map: &BallConformalMap) -> Result<f64> {
    for j in 0..32 {
        let x = curve.point(2.0 * PI * j as f64 / 32.0);
        let off = (norm(&x) - 1.0).abs();
        if off > 1e-10 {
            return Err(Error::OffSphere(off));
        }
    }
    adaptive_1d(
        |th| map.magnification(&curve.point(th)) * curve.speed(th),
        0.0,
        2.0 * PI,
        16,
        1e-10,
    )
}

/// One verified identity, for machine-readable reports.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremCheck {
    pub theorem_id: String,
    pub surface: String,
    pub parameters: serde_json::Value,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

impl TheoremCheck {
    pub fn new(
        theorem_id: &str,
        surface: &str,
        parameters: serde_json::Value,
        lhs: f64,
        rhs: f64,
        tol: f64,
    ) -> Self {
        let residual = (lhs - rhs).abs();
        Self {
            theorem_id: theorem_id.to_string(),
            surface: surface.to_string(),
            parameters,
            lhs,
            rhs,
            residual,
            pass: residual <= tol,
        }
    }
}

/// Gaussian-rejection-free random unit vector in the first `dim` coords.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Point {
    loop {
        let mut v = [0.0; 4];
        for c in v.iter_mut().take(dim) {
            // Box–Muller
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            *c = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
        }
        let n = norm(&v);
        if n > 1e-6 {
            return scale(1.0 / n, &v);
        }
    }
}

/// Outcome of the randomized boundary-length-decrease suite.
#[derive(Debug, Clone, Serialize)]
pub struct LengthDecreaseSuite {
    pub trials: usize,
    pub failures: usize,
    pub max_excess: f64,
    /// worst relative mismatch between (L(t)+L(−t)−2L)/t² at t = 0.05 and
    /// the closed second-derivative formula.
    pub quadratic_rate_error: f64,
}

/// Applies `trials` seeded random flows to ∂Σ and checks |f(∂Σ)| ≤ |∂Σ|,
/// plus the O(t²) approach to equality along each sampled direction.
pub fn length_decrease_suite<R: Rng>(
    surface: &ParametrizedSurface,
    trials: usize,
    rng: &mut R,
) -> Result<LengthDecreaseSuite> {
    let l0 = image_boundary_length(surface, &BallConformalMap::identity())?;
    let mut failures = 0;
    let mut max_excess = 0.0f64;
    let mut rate_error = 0.0f64;
    for i in 0..trials {
        let v = random_unit_vector(rng, surface.ambient);
        let t = rng.gen_range(-1.0..1.0);
        let lt = image_boundary_length(surface, &flow_map(&v, t))?;
        let excess = lt - l0;
        max_excess = max_excess.max(excess);
        if excess > 1e-6 {
            failures += 1;
        }
        // second-order rate on a subset (the quadrature is the cost)
        if i % 20 == 0 {
            let h = 0.05;
            let quad = (image_boundary_length(surface, &flow_map(&v, h))?
                + image_boundary_length(surface, &flow_map(&v, -h))?
                - 2.0 * l0)
                / (h * h);
            let formula = -2.0 * normal_mass(surface, &v)?;
            if formula.abs() > 1e-6 {
                rate_error = rate_error.max((quad - formula).abs() / formula.abs());
            }
        }
    }
    Ok(LengthDecreaseSuite {
        trials,
        failures,
        max_excess,
        quadratic_rate_error: rate_error,
    })
}

//! Triangle meshes of the reference domains: disk, flat annulus, flat Möbius
//! band, and genus-0 domains with holes.
//!
//! The Möbius band is meshed on the cylinder fundamental domain
//! [0, T] × [0, 2π) with a seam table identifying (0, θ) with (0, θ+π), so
//! the quotient is exact and identified vertices share one degree of freedom
//! in all assembly downstream.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Disk,
    Annulus,
    Mobius,
    Genus0Holes,
}

/// Specification of a reference domain to mesh.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    /// Half-width T of the flat annulus / Möbius chart. Ignored for disks.
    pub modulus: f64,
    /// (center, radius) of each hole for `Genus0Holes`.
    pub holes: Vec<([f64; 2], f64)>,
    pub resolution: usize,
}

impl DomainSpec {
    pub fn disk(resolution: usize) -> Self {
        Self { kind: DomainKind::Disk, modulus: 0.0, holes: Vec::new(), resolution }
    }

    pub fn annulus(modulus: f64, resolution: usize) -> Self {
        Self { kind: DomainKind::Annulus, modulus, holes: Vec::new(), resolution }
    }

    pub fn mobius(modulus: f64, resolution: usize) -> Self {
        Self { kind: DomainKind::Mobius, modulus, holes: Vec::new(), resolution }
    }

    pub fn genus0_holes(holes: Vec<([f64; 2], f64)>, resolution: usize) -> Self {
        Self { kind: DomainKind::Genus0Holes, modulus: 0.0, holes, resolution }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            DomainKind::Annulus | DomainKind::Mobius => {
                if self.modulus <= 0.0 {
                    return Err(Error::NonPositiveModulus(self.modulus));
                }
            }
            DomainKind::Genus0Holes => {
                for (i, &(c, r)) in self.holes.iter().enumerate() {
                    if r <= 0.0 {
                        return Err(Error::InvalidDomain(format!("hole {i} has radius {r}")));
                    }
                    let d = (c[0] * c[0] + c[1] * c[1]).sqrt();
                    if d + r >= 0.95 {
                        return Err(Error::InvalidDomain(format!(
                            "hole {i} is not strictly inside the outer disk"
                        )));
                    }
                    for (j, &(c2, r2)) in self.holes.iter().enumerate().skip(i + 1) {
                        let dx = c[0] - c2[0];
                        let dy = c[1] - c2[1];
                        if (dx * dx + dy * dy).sqrt() <= r + r2 {
                            return Err(Error::InvalidDomain(format!(
                                "holes {i} and {j} overlap"
                            )));
                        }
                    }
                }
            }
            DomainKind::Disk => {}
        }
        if self.resolution == 0 {
            return Err(Error::InvalidDomain("resolution must be positive".into()));
        }
        Ok(())
    }
}

pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

/// Piecewise-linear surface with boundary, in chart coordinates.
///
/// `seam` pairs chart vertices that represent the same point of the quotient
/// surface; all derived structure (boundary loops, Euler characteristic,
/// degrees of freedom) lives on the quotient.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub seam: Option<Vec<(usize, usize)>>,
    pub kind: DomainKind,
    pub modulus: f64,
    // derived
    dof_of_vertex: Vec<usize>,
    num_dofs: usize,
    boundary_loops: Vec<Vec<usize>>,
    boundary_dofs: Vec<usize>,
    orientable: bool,
}

#[derive(Serialize, Deserialize)]
struct MeshFile {
    version: u32,
    kind: DomainKind,
    modulus: f64,
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    seam: Option<Vec<(usize, usize)>>,
}

impl TriangleMesh {
    /// Builds the quotient structure and checks every mesh invariant.
    pub fn new(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        seam: Option<Vec<(usize, usize)>>,
        kind: DomainKind,
        modulus: f64,
    ) -> Result<Self> {
        let nv = vertices.len();
        // union-find over seam identifications (a vertex may appear in more
        // than one pair, e.g. a chart corner glued both periodically and by
        // the deck map)
        let mut root: Vec<usize> = (0..nv).collect();
        fn find(root: &mut [usize], mut v: usize) -> usize {
            while root[v] != v {
                root[v] = root[root[v]];
                v = root[v];
            }
            v
        }
        if let Some(pairs) = &seam {
            for &(a, b) in pairs {
                if a == b || a >= nv || b >= nv {
                    return Err(Error::InvalidMesh(format!("bad seam pair ({a}, {b})")));
                }
                let ra = find(&mut root, a);
                let rb = find(&mut root, b);
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    root[hi] = lo;
                }
            }
        }
        // compress dof labels
        let mut label = vec![usize::MAX; nv];
        let mut num_dofs = 0;
        for v in 0..nv {
            let r = find(&mut root, v);
            if label[r] == usize::MAX {
                label[r] = num_dofs;
                num_dofs += 1;
            }
            label[v] = label[r];
        }
        let dof_of_vertex = label;

        let mut mesh = Self {
            vertices,
            triangles,
            seam,
            kind,
            modulus,
            dof_of_vertex,
            num_dofs,
            boundary_loops: Vec::new(),
            boundary_dofs: Vec::new(),
            orientable: true,
        };
        mesh.build_and_validate()?;
        Ok(mesh)
    }

    fn build_and_validate(&mut self) -> Result<()> {
        for (i, t) in self.triangles.iter().enumerate() {
            if self.chart_area(*t) <= MIN_TRIANGLE_AREA {
                return Err(Error::InvalidMesh(format!(
                    "triangle {i} has chart area {} below threshold",
                    self.chart_area(*t)
                )));
            }
        }
        // quotient edge -> (count, [triangle, local edge index] of first two)
        let mut edges: HashMap<(usize, usize), (usize, [(usize, usize); 2])> = HashMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for e in 0..3 {
                let a = self.dof_of_vertex[t[e]];
                let b = self.dof_of_vertex[t[(e + 1) % 3]];
                if a == b {
                    return Err(Error::InvalidMesh(format!(
                        "triangle {ti} has a collapsed quotient edge"
                    )));
                }
                let key = (a.min(b), a.max(b));
                let entry = edges.entry(key).or_insert((0, [(usize::MAX, 0); 2]));
                if entry.0 < 2 {
                    entry.1[entry.0] = (ti, e);
                }
                entry.0 += 1;
            }
        }
        for (&(a, b), &(count, _)) in &edges {
            if count > 2 {
                return Err(Error::NonManifoldEdge(a, b, count));
            }
        }

        // boundary loops from directed boundary edges
        let mut next: HashMap<usize, usize> = HashMap::new();
        let mut n_boundary_edges = 0;
        for (ti, e) in edges.values().filter(|v| v.0 == 1).map(|v| v.1[0]) {
            let t = self.triangles[ti];
            let a = self.dof_of_vertex[t[e]];
            let b = self.dof_of_vertex[t[(e + 1) % 3]];
            if next.insert(a, b).is_some() {
                return Err(Error::InvalidMesh(format!(
                    "boundary is not a disjoint union of cycles at dof {a}"
                )));
            }
            n_boundary_edges += 1;
        }
        let mut visited: HashMap<usize, bool> = next.keys().map(|&k| (k, false)).collect();
        let mut loops = Vec::new();
        let mut starts: Vec<usize> = next.keys().copied().collect();
        starts.sort_unstable();
        for start in starts {
            if visited[&start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            loop {
                cycle.push(v);
                *visited.get_mut(&v).unwrap() = true;
                v = *next.get(&v).ok_or_else(|| {
                    Error::InvalidMesh(format!("open boundary chain at dof {v}"))
                })?;
                if v == start {
                    break;
                }
                if cycle.len() > n_boundary_edges {
                    return Err(Error::InvalidMesh("boundary chain does not close".into()));
                }
            }
            loops.push(cycle);
        }
        self.boundary_loops = loops;
        let mut bdofs: Vec<usize> = self.boundary_loops.iter().flatten().copied().collect();
        bdofs.sort_unstable();
        self.boundary_dofs = bdofs;

        // orientability: propagate orientation across interior edges
        let nf = self.triangles.len();
        let mut flip = vec![u8::MAX; nf]; // 0 keep, 1 flipped
        for start in 0..nf {
            if flip[start] != u8::MAX {
                continue;
            }
            flip[start] = 0;
            let mut stack = vec![start];
            while let Some(ti) = stack.pop() {
                let t = self.triangles[ti];
                for e in 0..3 {
                    let a = self.dof_of_vertex[t[e]];
                    let b = self.dof_of_vertex[t[(e + 1) % 3]];
                    let key = (a.min(b), a.max(b));
                    let (count, inc) = edges[&key];
                    if count != 2 {
                        continue;
                    }
                    let (tj, ej) = if inc[0].0 == ti && inc[0].1 == e { inc[1] } else { inc[0] };
                    let tt = self.triangles[tj];
                    let a2 = self.dof_of_vertex[tt[ej]];
                    // opposite traversal directions <=> consistent orientation
                    let same_orientation = a2 == b;
                    let want = if same_orientation { flip[ti] } else { 1 - flip[ti] };
                    if flip[tj] == u8::MAX {
                        flip[tj] = want;
                        stack.push(tj);
                    } else if flip[tj] != want {
                        self.orientable = false;
                    }
                }
            }
        }

        // Euler characteristic of the quotient must match the declared topology
        let chi = self.num_dofs as i64 - edges.len() as i64 + nf as i64;
        let expected = match self.kind {
            DomainKind::Disk => 1,
            DomainKind::Annulus | DomainKind::Mobius => 0,
            DomainKind::Genus0Holes => 2 - self.boundary_loops.len() as i64,
        };
        if chi != expected {
            return Err(Error::InvalidMesh(format!(
                "Euler characteristic {chi}, expected {expected} for {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    pub fn chart_area(&self, t: [usize; 3]) -> f64 {
        let [a, b, c] = t.map(|i| self.vertices[i]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Number of quotient degrees of freedom (seam pairs counted once).
    pub fn num_dofs(&self) -> usize {
        self.num_dofs
    }

    pub fn dof_of_vertex(&self, v: usize) -> usize {
        self.dof_of_vertex[v]
    }

    pub fn boundary_loops(&self) -> &[Vec<usize>] {
        &self.boundary_loops
    }

    /// Sorted quotient dofs lying on the boundary.
    pub fn boundary_dofs(&self) -> &[usize] {
        &self.boundary_dofs
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    /// Euler characteristic of the quotient surface.
    pub fn euler_characteristic(&self) -> i64 {
        // recomputed cheaply from the stored topology
        let mut edges = std::collections::HashSet::new();
        for t in &self.triangles {
            for e in 0..3 {
                let a = self.dof_of_vertex[t[e]];
                let b = self.dof_of_vertex[t[(e + 1) % 3]];
                edges.insert((a.min(b), a.max(b)));
            }
        }
        self.num_dofs as i64 - edges.len() as i64 + self.triangles.len() as i64
    }

    /// Chart coordinates of a representative vertex for each dof.
    pub fn dof_positions(&self) -> Vec<[f64; 2]> {
        let mut pos = vec![[f64::NAN; 2]; self.num_dofs];
        for (v, &d) in self.dof_of_vertex.iter().enumerate() {
            if pos[d][0].is_nan() {
                pos[d] = self.vertices[v];
            }
        }
        pos
    }

    /// Boundary edges as (dof_a, dof_b, chart length).
    pub fn boundary_edges(&self) -> Vec<(usize, usize, f64)> {
        let mut counts: HashMap<(usize, usize), (usize, f64)> = HashMap::new();
        for t in &self.triangles {
            for e in 0..3 {
                let va = t[e];
                let vb = t[(e + 1) % 3];
                let a = self.dof_of_vertex[va];
                let b = self.dof_of_vertex[vb];
                let key = (a.min(b), a.max(b));
                let pa = self.vertices[va];
                let pb = self.vertices[vb];
                let len = ((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2)).sqrt();
                let entry = counts.entry(key).or_insert((0, len));
                entry.0 += 1;
            }
        }
        let mut out: Vec<(usize, usize, f64)> = counts
            .into_iter()
            .filter(|&(_, (c, _))| c == 1)
            .map(|((a, b), (_, len))| (a, b, len))
            .collect();
        out.sort_unstable_by_key(|&(a, b, _)| (a, b));
        out
    }

    /// Uniform 1→4 refinement. Seam-paired edges get seam-paired midpoints.
    pub fn refine(&self) -> Result<Self> {
        let mut vertices = self.vertices.clone();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoint.entry(key).or_insert_with(|| {
                let pa = vertices[a];
                let pb = vertices[b];
                vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(self.triangles.len() * 4);
        for &[a, b, c] in &self.triangles {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }
        let seam = self.seam.as_ref().map(|pairs| {
            let mut partners: HashMap<usize, Vec<usize>> = HashMap::new();
            for &(a, b) in pairs {
                partners.entry(a).or_default().push(b);
                partners.entry(b).or_default().push(a);
            }
            let empty = Vec::new();
            let mut new_pairs = pairs.clone();
            for (&(a, b), &m1) in midpoint.iter() {
                for &pa in partners.get(&a).unwrap_or(&empty) {
                    for &pb in partners.get(&b).unwrap_or(&empty) {
                        let key = (pa.min(pb), pa.max(pb));
                        if let Some(&m2) = midpoint.get(&key) {
                            if m1 < m2 {
                                new_pairs.push((m1, m2));
                            }
                        }
                    }
                }
            }
            new_pairs.sort_unstable();
            new_pairs.dedup();
            new_pairs
        });
        Self::new(vertices, triangles, seam, self.kind, self.modulus)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = MeshFile {
            version: 1,
            kind: self.kind,
            modulus: self.modulus,
            vertices: self.vertices.clone(),
            triangles: self.triangles.clone(),
            seam: self.seam.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: MeshFile = serde_json::from_str(s)?;
        if file.version != 1 {
            return Err(Error::InvalidMesh(format!(
                "unsupported mesh file version {}",
                file.version
            )));
        }
        Self::new(file.vertices, file.triangles, file.seam, file.kind, file.modulus)
    }
}

/// Generates a triangle mesh of the requested reference domain.
pub fn generate_domain(spec: &DomainSpec) -> Result<TriangleMesh> {
    spec.validate()?;
    match spec.kind {
        DomainKind::Disk => disk_mesh(spec.resolution),
        DomainKind::Annulus => cylinder_mesh(spec.modulus, spec.resolution, false),
        DomainKind::Mobius => cylinder_mesh(spec.modulus, spec.resolution, true),
        DomainKind::Genus0Holes => holed_disk_mesh(spec),
    }
}

/// Structured disk mesh: concentric rings, ring i holding 6i vertices.
/// Vertex count grows quadratically in the resolution.
fn disk_mesh(resolution: usize) -> Result<TriangleMesh> {
    let rings = 6 * resolution;
    let mut vertices = vec![[0.0, 0.0]];
    let mut ring_start = vec![0usize];
    for i in 1..=rings {
        ring_start.push(vertices.len());
        let n = 6 * i;
        let r = i as f64 / rings as f64;
        for j in 0..n {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            vertices.push([r * th.cos(), r * th.sin()]);
        }
    }
    let mut triangles = Vec::new();
    // center fan
    for j in 0..6 {
        triangles.push([0, ring_start[1] + j, ring_start[1] + (j + 1) % 6]);
    }
    // annular strips, merged by angle
    for i in 2..=rings {
        let (m, n) = (6 * (i - 1), 6 * i);
        let inner = ring_start[i - 1];
        let outer = ring_start[i];
        let (mut k, mut l) = (0usize, 0usize);
        while k < m || l < n {
            let a_next = (k + 1) as f64 / m as f64;
            let b_next = (l + 1) as f64 / n as f64;
            if l < n && (k == m || b_next <= a_next) {
                triangles.push([inner + k % m, outer + l % n, outer + (l + 1) % n]);
                l += 1;
            } else {
                triangles.push([inner + k % m, outer + l % n, inner + (k + 1) % m]);
                k += 1;
            }
        }
    }
    TriangleMesh::new(vertices, triangles, None, DomainKind::Disk, 0.0)
}

/// Structured chart mesh for the flat annulus ([-T, T] × S¹) or the Möbius
/// band ([0, T] × S¹ with the t=0 row seam-identified under θ → θ+π).
fn cylinder_mesh(modulus: f64, resolution: usize, mobius: bool) -> Result<TriangleMesh> {
    let t = modulus;
    let n_theta = (8 * resolution).max(8); // even, so the deck map pairs vertices exactly
    let span = if mobius { t } else { 2.0 * t };
    let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
    let n_t = ((span / dtheta).round() as usize).max(2);
    let t_lo = if mobius { 0.0 } else { -t };
    // chart covers θ ∈ [0, 2π] inclusive; the θ=0 and θ=2π columns are
    // seam-identified (periodic gluing)
    let cols = n_theta + 1;
    let mut vertices = Vec::with_capacity((n_t + 1) * cols);
    for i in 0..=n_t {
        let ti = t_lo + span * i as f64 / n_t as f64;
        for j in 0..cols {
            vertices.push([ti, dtheta * j as f64]);
        }
    }
    let vid = |i: usize, j: usize| i * cols + j;
    let mut triangles = Vec::with_capacity(2 * n_t * n_theta);
    for i in 0..n_t {
        for j in 0..n_theta {
            triangles.push([vid(i, j), vid(i + 1, j), vid(i, j + 1)]);
            triangles.push([vid(i, j + 1), vid(i + 1, j), vid(i + 1, j + 1)]);
        }
    }
    let mut seam: Vec<(usize, usize)> = (0..=n_t).map(|i| (vid(i, 0), vid(i, n_theta))).collect();
    if mobius {
        // deck map (0, θ) ~ (0, θ+π) on the chart row t = 0
        let half = n_theta / 2;
        seam.extend((0..=half).map(|j| (vid(0, j), vid(0, j + half))));
    }
    let kind = if mobius { DomainKind::Mobius } else { DomainKind::Annulus };
    TriangleMesh::new(vertices, triangles, Some(seam), kind, modulus)
}

/// Unit disk with holes carved out of the structured disk mesh; vertices on
/// each new hole boundary are projected onto the hole circle.
fn holed_disk_mesh(spec: &DomainSpec) -> Result<TriangleMesh> {
    let disk = disk_mesh(spec.resolution)?;
    let mut vertices = disk.vertices;
    let inside = |p: [f64; 2], c: [f64; 2], r: f64| {
        let dx = p[0] - c[0];
        let dy = p[1] - c[1];
        dx * dx + dy * dy < r * r
    };
    let mut keep = Vec::new();
    for t in &disk.triangles {
        let pts = t.map(|v| vertices[v]);
        let centroid = [
            (pts[0][0] + pts[1][0] + pts[2][0]) / 3.0,
            (pts[0][1] + pts[1][1] + pts[2][1]) / 3.0,
        ];
        let cut = spec.holes.iter().any(|&(c, r)| {
            inside(centroid, c, r) || pts.iter().any(|&p| inside(p, c, r))
        });
        if !cut {
            keep.push(*t);
        }
    }
    // project near-hole vertices of kept triangles onto their hole circle
    let mut used = vec![false; vertices.len()];
    for t in &keep {
        for &v in t {
            used[v] = true;
        }
    }
    for (v, p) in vertices.iter_mut().enumerate() {
        if !used[v] {
            continue;
        }
        for &(c, r) in &spec.holes {
            let dx = p[0] - c[0];
            let dy = p[1] - c[1];
            let d = (dx * dx + dy * dy).sqrt();
            // ring of width ~one mesh cell around the hole snaps to the circle
            if d >= r && d - r < 0.75 / (6.0 * spec.resolution as f64) {
                p[0] = c[0] + r * dx / d;
                p[1] = c[1] + r * dy / d;
            }
        }
    }
    // drop unused vertices
    let mut remap = vec![usize::MAX; vertices.len()];
    let mut new_vertices = Vec::new();
    for (v, &u) in used.iter().enumerate() {
        if u {
            remap[v] = new_vertices.len();
            new_vertices.push(vertices[v]);
        }
    }
    let triangles: Vec<[usize; 3]> = keep.iter().map(|t| t.map(|v| remap[v])).collect();
    TriangleMesh::new(new_vertices, triangles, None, DomainKind::Genus0Holes, 0.0)
}

/// Ordered vertex cycles of the boundary, one per component.
pub fn boundary_components(mesh: &TriangleMesh) -> Vec<Vec<usize>> {
    mesh.boundary_loops().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_topology() {
        let mesh = generate_domain(&DomainSpec::disk(4)).unwrap();
        assert_eq!(mesh.euler_characteristic(), 1);
        assert_eq!(mesh.boundary_loops().len(), 1);
        assert!(mesh.orientable());
    }

    #[test]
    fn annulus_topology() {
        let mesh = generate_domain(&DomainSpec::annulus(1.2, 4)).unwrap();
        assert_eq!(mesh.euler_characteristic(), 0);
        let loops = mesh.boundary_loops();
        assert_eq!(loops.len(), 2);
        assert_eq!(loops[0].len(), loops[1].len());
        assert!(mesh.orientable());
    }

    #[test]
    fn mobius_topology() {
        let mesh = generate_domain(&DomainSpec::mobius(0.6585, 4)).unwrap();
        assert_eq!(mesh.euler_characteristic(), 0);
        assert_eq!(mesh.boundary_loops().len(), 1);
        assert!(!mesh.orientable());
        // seam-identified vertices share a dof
        let pairs = mesh.seam.as_ref().unwrap();
        for &(a, b) in pairs {
            assert_eq!(mesh.dof_of_vertex(a), mesh.dof_of_vertex(b));
        }
    }

    #[test]
    fn holed_disk_has_k_loops() {
        let holes = vec![
            ([0.5, 0.0], 0.18),
            ([-0.25, 0.433], 0.18),
            ([-0.25, -0.433], 0.18),
        ];
        let mesh = generate_domain(&DomainSpec::genus0_holes(holes, 4)).unwrap();
        assert_eq!(mesh.boundary_loops().len(), 4);
        assert_eq!(mesh.euler_characteristic(), -2);
    }

    #[test]
    fn overlapping_holes_rejected() {
        let holes = vec![([0.3, 0.0], 0.2), ([0.5, 0.0], 0.2)];
        assert!(generate_domain(&DomainSpec::genus0_holes(holes, 4)).is_err());
    }

    #[test]
    fn nonpositive_modulus_rejected() {
        assert!(generate_domain(&DomainSpec::annulus(0.0, 4)).is_err());
        assert!(generate_domain(&DomainSpec::mobius(-1.0, 4)).is_err());
    }

    #[test]
    fn refine_quadruples_faces_and_keeps_topology() {
        for spec in [
            DomainSpec::disk(2),
            DomainSpec::annulus(1.0, 2),
            DomainSpec::mobius(0.66, 2),
        ] {
            let mesh = generate_domain(&spec).unwrap();
            let fine = mesh.refine().unwrap();
            assert_eq!(fine.triangles.len(), 4 * mesh.triangles.len());
            assert_eq!(fine.euler_characteristic(), mesh.euler_characteristic());
            assert_eq!(fine.boundary_loops().len(), mesh.boundary_loops().len());
        }
    }

    #[test]
    fn two_refinements_quadruple_boundary_vertices() {
        let mesh = generate_domain(&DomainSpec::disk(2)).unwrap();
        let fine = mesh.refine().unwrap().refine().unwrap();
        let nb = |m: &TriangleMesh| m.boundary_loops()[0].len();
        assert_eq!(nb(&fine), 4 * nb(&mesh));
    }

    #[test]
    fn json_round_trip() {
        let mesh = generate_domain(&DomainSpec::mobius(0.66, 3)).unwrap();
        let json = mesh.to_json().unwrap();
        let back = TriangleMesh::from_json(&json).unwrap();
        assert_eq!(back.vertices, mesh.vertices);
        assert_eq!(back.triangles, mesh.triangles);
        assert_eq!(back.seam, mesh.seam);
        assert_eq!(back.to_json().unwrap(), json);
    }
}

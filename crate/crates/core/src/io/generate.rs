//! Parametric desk-scale meshes with seeded interior jitter.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{point2, tet_signed_volume, Point};
use crate::mesh::{build_adjacency, is_element_inverted, ElementReference, ElementType, Mesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    JitteredSquareTri,
    DiskTri,
    QuadGridWithHole,
    CubeTet,
    CubeHex,
    TwoTriangleFlip,
}

const KIND_NAMES: [(GeneratorKind, &str); 6] = [
    (GeneratorKind::JitteredSquareTri, "jittered-square-tri"),
    (GeneratorKind::DiskTri, "disk-tri"),
    (GeneratorKind::QuadGridWithHole, "quad-grid-with-hole"),
    (GeneratorKind::CubeTet, "cube-tet"),
    (GeneratorKind::CubeHex, "cube-hex"),
    (GeneratorKind::TwoTriangleFlip, "two-triangle-flip"),
];

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        Self::JitteredSquareTri,
        Self::DiskTri,
        Self::QuadGridWithHole,
        Self::CubeTet,
        Self::CubeHex,
        Self::TwoTriangleFlip,
    ];

    pub fn name(self) -> &'static str {
        KIND_NAMES.iter().find(|(k, _)| *k == self).unwrap().1
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KIND_NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(k, _)| *k)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown generator kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub resolution: usize,
    /// Per-axis displacement bound as a fraction of the shortest incident edge.
    pub jitter: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, resolution: usize, jitter: f64, seed: u64) -> Self {
        Self {
            kind,
            resolution,
            jitter,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind != GeneratorKind::TwoTriangleFlip && self.resolution < 2 {
            return Err(Error::InvalidSpec(format!(
                "resolution must be at least 2, got {}",
                self.resolution
            )));
        }
        if !(0.0..0.5).contains(&self.jitter) {
            return Err(Error::InvalidSpec(format!(
                "jitter must be in [0, 0.5), got {}",
                self.jitter
            )));
        }
        Ok(())
    }
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::InvalidSpec(format!("invalid seed `{s}`")))
}

pub fn generate(spec: &GeneratorSpec) -> Result<Mesh> {
    spec.validate()?;
    let n = spec.resolution;
    let mesh = match spec.kind {
        GeneratorKind::JitteredSquareTri => square_tri(n)?,
        GeneratorKind::DiskTri => disk_tri(n)?,
        GeneratorKind::QuadGridWithHole => quad_with_hole(n)?,
        GeneratorKind::CubeTet => cube_tet(n)?,
        GeneratorKind::CubeHex => cube_hex(n)?,
        GeneratorKind::TwoTriangleFlip => return two_triangle_flip(),
    };
    jitter(&mesh, spec.jitter, spec.seed)
}

fn square_tri(n: usize) -> Result<Mesh> {
    let h = 1.0 / n as f64;
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let vertices = (0..=n)
        .flat_map(|j| (0..=n).map(move |i| point2(i as f64 * h, j as f64 * h)))
        .collect();
    let mut tris = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    Mesh::from_elements(2, vertices, ElementType::Triangle, &tris)
}

/// Polar grid with a fixed number of spokes, so elements near the centre are
/// needle-shaped.
fn disk_tri(n: usize) -> Result<Mesh> {
    let spokes = 6 * n;
    let mut vertices = vec![point2(0.0, 0.0)];
    for k in 1..=n {
        let r = k as f64 / n as f64;
        for s in 0..spokes {
            let a = 2.0 * PI * s as f64 / spokes as f64;
            vertices.push(point2(r * a.cos(), r * a.sin()));
        }
    }
    let id = |k: usize, s: usize| 1 + (k - 1) * spokes + s % spokes;
    let mut tris = Vec::new();
    for s in 0..spokes {
        tris.push([0, id(1, s), id(1, s + 1)]);
    }
    for k in 1..n {
        for s in 0..spokes {
            let (a, b, c, d) = (id(k, s), id(k + 1, s), id(k + 1, s + 1), id(k, s + 1));
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    Mesh::from_elements(2, vertices, ElementType::Triangle, &tris)
}

/// O-grid between a circle of radius 1/4 and the unit square.
fn quad_with_hole(n: usize) -> Result<Mesh> {
    let around = 4 * n;
    let center = point2(0.5, 0.5);
    // outer points evenly spaced along the square, counter-clockwise
    let outer: Vec<Point> = (0..around)
        .map(|i| {
            let t = i as f64 / n as f64; // side index + fraction
            let (side, f) = (t.floor() as usize, t.fract());
            match side {
                0 => point2(f, 0.0),
                1 => point2(1.0, f),
                2 => point2(1.0 - f, 1.0),
                _ => point2(0.0, 1.0 - f),
            }
        })
        .collect();
    let layers = n;
    let mut vertices = Vec::with_capacity(around * (layers + 1));
    for j in 0..=layers {
        let s = j as f64 / layers as f64;
        for o in &outer {
            let dir = (o - center).normalize();
            let inner = center + 0.25 * dir;
            vertices.push(inner * (1.0 - s) + o * s);
        }
    }
    let id = |i: usize, j: usize| j * around + i % around;
    let mut quads = Vec::with_capacity(around * layers);
    for j in 0..layers {
        for i in 0..around {
            quads.push([id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)]);
        }
    }
    Mesh::from_elements(2, vertices, ElementType::Quad, &quads)
}

fn cube_points(n: usize) -> Vec<Point> {
    let h = 1.0 / n as f64;
    let mut v = Vec::with_capacity((n + 1).pow(3));
    for k in 0..=n {
        for j in 0..=n {
            for i in 0..=n {
                v.push(Point::new(i as f64 * h, j as f64 * h, k as f64 * h));
            }
        }
    }
    v
}

/// Cell corners in hexahedron order: bottom face counter-clockwise seen from
/// above, then the top face.
fn cell_corners(n: usize, i: usize, j: usize, k: usize) -> [usize; 8] {
    let id = |i: usize, j: usize, k: usize| (k * (n + 1) + j) * (n + 1) + i;
    [
        id(i, j, k),
        id(i + 1, j, k),
        id(i + 1, j + 1, k),
        id(i, j + 1, k),
        id(i, j, k + 1),
        id(i + 1, j, k + 1),
        id(i + 1, j + 1, k + 1),
        id(i, j + 1, k + 1),
    ]
}

/// Six tetrahedra along the main diagonal of each cell.
fn cube_tet(n: usize) -> Result<Mesh> {
    let vertices = cube_points(n);
    // corner index of the unit offset (dx, dy, dz) inside cell_corners
    let corner = |d: [usize; 3]| match d {
        [0, 0, 0] => 0,
        [1, 0, 0] => 1,
        [1, 1, 0] => 2,
        [0, 1, 0] => 3,
        [0, 0, 1] => 4,
        [1, 0, 1] => 5,
        [1, 1, 1] => 6,
        _ => 7,
    };
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let c = cell_corners(n, i, j, k);
                for p in PERMS {
                    let mut d = [0usize; 3];
                    let mut t = [c[0]; 4];
                    for (s, &axis) in p.iter().enumerate() {
                        d[axis] = 1;
                        t[s + 1] = c[corner(d)];
                    }
                    let vol = tet_signed_volume(
                        &vertices[t[0]],
                        &vertices[t[1]],
                        &vertices[t[2]],
                        &vertices[t[3]],
                    );
                    if vol < 0.0 {
                        t.swap(1, 2);
                    }
                    tets.push(t);
                }
            }
        }
    }
    Mesh::from_elements(3, vertices, ElementType::Tet, &tets)
}

fn cube_hex(n: usize) -> Result<Mesh> {
    let mut hexes = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                hexes.push(cell_corners(n, i, j, k));
            }
        }
    }
    Mesh::from_elements(3, cube_points(n), ElementType::Hex, &hexes)
}

/// Two valid triangles sharing an edge, all vertices free. One unguarded
/// smoothing step turns one of them over.
fn two_triangle_flip() -> Result<Mesh> {
    let vertices = vec![
        point2(0.25, 1.0),
        point2(0.0, 0.0),
        point2(1.0, 0.0),
        point2(-2.5, -0.05),
    ];
    Mesh::with_boundary(
        2,
        vertices,
        ElementType::Triangle,
        vec![1, 2, 0, 2, 1, 3],
        [],
    )
}

const JITTER_ATTEMPTS: usize = 32;

/// Displaces each free vertex by up to `amount` times its shortest incident
/// edge along every axis, redrawing any move that would invert an incident
/// element.
fn jitter(m: &Mesh, amount: f64, seed: u64) -> Result<Mesh> {
    if amount == 0.0 {
        return Ok(m.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let adjacency = build_adjacency(m);
    let t = m.element_type();
    let mut shortest = vec![f64::INFINITY; m.num_vertices()];
    for el in m.elements() {
        for &[a, b] in t.edges() {
            let l = (m.vertices()[el[a]] - m.vertices()[el[b]]).norm();
            shortest[el[a]] = shortest[el[a]].min(l);
            shortest[el[b]] = shortest[el[b]].min(l);
        }
    }
    let positive = ElementReference::Sign(1.0);
    let mut pos = m.vertices().to_vec();
    for v in 0..m.num_vertices() {
        if m.is_boundary(v) || adjacency.incident(v).is_empty() {
            continue;
        }
        let radius = amount * shortest[v];
        let original = pos[v];
        for _ in 0..JITTER_ATTEMPTS {
            pos[v] = original + radius * box_sample(&mut rng, m.dim());
            let ok = adjacency.incident(v).iter().all(|&e| {
                let pts: Vec<Point> = m.element(e).iter().map(|&u| pos[u]).collect();
                !is_element_inverted(t, &pts, &positive)
            });
            if ok {
                break;
            }
            pos[v] = original;
        }
    }
    m.with_vertices(pos)
}

fn box_sample(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    let mut p = Point::zeros();
    for k in 0..dim {
        p[k] = rng.gen_range(-1.0..=1.0);
    }
    p
}

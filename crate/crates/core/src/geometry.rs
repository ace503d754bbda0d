//! Geometric primitives: the triangle transformation, area rescaling,
//! shape predicates and the hexahedron/octahedron duality.
//!
//! All points are stored as [`Point`] (a 3-vector). Planar data lives in the
//! `z = 0` plane, which keeps the 2D and 3D code paths identical.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Point = Vector3<f64>;

/// Relative tolerance below which an element counts as degenerate.
pub const DEGENERATE_EPS: f64 = 1e-12;

/// Convenience constructor for planar points.
#[inline]
pub fn point2(x: f64, y: f64) -> Point {
    Point::new(x, y, 0.0)
}

/// Gain factors of the adaptive transformation.
///
/// `alpha2 = 2 * alpha0 - alpha1` is derived, which keeps the equilateral
/// triangle a fixed shape of the map. `alpha0 = alpha1 = 1` is the standard
/// transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveParams {
    alpha0: f64,
    alpha1: f64,
}

impl AdaptiveParams {
    pub const STANDARD: AdaptiveParams = AdaptiveParams {
        alpha0: 1.0,
        alpha1: 1.0,
    };

    pub fn new(alpha0: f64, alpha1: f64) -> Result<Self> {
        if !(alpha0.is_finite() && alpha1.is_finite()) {
            return Err(Error::InvalidParams("gains must be finite".into()));
        }
        if alpha0 <= 0.0 || alpha1 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "gains must be positive, got ({alpha0}, {alpha1})"
            )));
        }
        if alpha1 >= 2.0 * alpha0 {
            return Err(Error::InvalidParams(format!(
                "alpha1 must be below 2*alpha0 so that alpha2 > 0, got ({alpha0}, {alpha1})"
            )));
        }
        Ok(Self { alpha0, alpha1 })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        2.0 * self.alpha0 - self.alpha1
    }

    /// `[alpha0, alpha1, alpha2]`: gain applied to the vertex itself, to its
    /// successor and to its predecessor.
    pub fn gains(&self) -> [f64; 3] {
        [self.alpha0, self.alpha1, self.alpha2()]
    }

    pub fn is_convergent(&self) -> bool {
        crate::ode::is_convergent(self.alpha0, self.alpha1)
    }
}

impl Default for AdaptiveParams {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Centroid, vertex radii `R_i = |x_i - c|` and ratios `r_i = R_{i-1} / R_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentroidFrame {
    pub centroid: Point,
    pub radii: [f64; 3],
    pub ratios: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub vertices: [Point; 3],
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Self {
        Self {
            vertices: [a, b, c],
        }
    }

    pub fn planar(coords: [[f64; 2]; 3]) -> Self {
        Self::new(
            point2(coords[0][0], coords[0][1]),
            point2(coords[1][0], coords[1][1]),
            point2(coords[2][0], coords[2][1]),
        )
    }

    pub fn centroid(&self) -> Point {
        (self.vertices[0] + self.vertices[1] + self.vertices[2]) / 3.0
    }

    /// `(x1 - x0) x (x2 - x0)`; twice the area, along the normal.
    pub fn cross(&self) -> Point {
        (self.vertices[1] - self.vertices[0]).cross(&(self.vertices[2] - self.vertices[0]))
    }

    pub fn area(&self) -> f64 {
        0.5 * self.cross().norm()
    }

    /// Lengths of edges `(x0,x1)`, `(x1,x2)`, `(x2,x0)`.
    pub fn edge_lengths(&self) -> [f64; 3] {
        let v = &self.vertices;
        [
            (v[1] - v[0]).norm(),
            (v[2] - v[1]).norm(),
            (v[0] - v[2]).norm(),
        ]
    }

    pub fn longest_edge(&self) -> f64 {
        self.edge_lengths().into_iter().fold(0.0, f64::max)
    }

    /// True when the area is below `DEGENERATE_EPS * longest_edge^2`.
    pub fn is_degenerate(&self) -> bool {
        let l = self.longest_edge();
        !(l > 0.0) || !(self.area() > DEGENERATE_EPS * l * l)
    }

    pub fn frame(&self) -> Result<CentroidFrame> {
        let centroid = self.centroid();
        let radii = self.vertices.map(|x| (x - centroid).norm());
        let max_r = radii.iter().copied().fold(0.0, f64::max);
        if !(max_r > 0.0) || radii.iter().any(|&r| r < DEGENERATE_EPS * max_r) {
            return Err(Error::DegenerateElement);
        }
        let ratios = [
            radii[2] / radii[0],
            radii[0] / radii[1],
            radii[1] / radii[2],
        ];
        Ok(CentroidFrame {
            centroid,
            radii,
            ratios,
        })
    }

    pub fn map(&self, f: impl Fn(&Point) -> Point) -> Self {
        Self {
            vertices: [
                f(&self.vertices[0]),
                f(&self.vertices[1]),
                f(&self.vertices[2]),
            ],
        }
    }
}

/// One application of the (adaptive) triangle transformation.
///
/// Each vertex is scaled about the centroid by its ratio `r_i`, weighted by
/// the gains, and the result is recentred so the centroid stays fixed. The
/// gain a vertex contributes depends on its offset from the vertex being
/// updated (self, successor, predecessor), so every vertex is treated alike
/// and the equilateral triangle keeps its shape for any valid gains.
pub fn transform_triangle(t: &Triangle, params: &AdaptiveParams) -> Result<Triangle> {
    let frame = t.frame()?;
    let c = frame.centroid;
    let [g_self, g_next, g_prev] = params.gains();
    let w: [Point; 3] = std::array::from_fn(|i| frame.ratios[i] * (t.vertices[i] - c));
    let out = std::array::from_fn(|i| {
        let next = (i + 1) % 3;
        let prev = (i + 2) % 3;
        (2.0 * g_self * w[i] - g_next * w[next] - g_prev * w[prev]) / 3.0 + c
    });
    Ok(Triangle { vertices: out })
}

/// Scales `new` about its centroid so that its area matches `orig`.
pub fn rescale_area(orig: &Triangle, new: &Triangle) -> Result<Triangle> {
    if orig.is_degenerate() || new.is_degenerate() {
        return Err(Error::DegenerateElement);
    }
    let factor = (orig.area() / new.area()).sqrt();
    let c = new.centroid();
    Ok(new.map(|p| c + factor * (p - c)))
}

/// Applies the transformation `n` times, restoring the original area after
/// every step.
pub fn iterate_triangle(t: &Triangle, params: &AdaptiveParams, n: usize) -> Result<Triangle> {
    let mut cur = *t;
    for _ in 0..n {
        let next = transform_triangle(&cur, params)?;
        cur = rescale_area(t, &next)?;
    }
    Ok(cur)
}

/// Shortest over longest edge length.
pub fn distortion(t: &Triangle) -> Result<f64> {
    let e = t.edge_lengths();
    let max = e.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(Error::DegenerateElement);
    }
    let min = e.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min / max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    pub fn from_value(v: f64) -> Option<Self> {
        if v > 0.0 {
            Some(Orientation::Positive)
        } else if v < 0.0 {
            Some(Orientation::Negative)
        } else {
            None
        }
    }
}

/// Sign of the normal `(x1 - x0) x (x2 - x0)`.
///
/// Without a reference normal the z component decides (planar meshes). In
/// space the normal is compared against `reference_normal`, usually the
/// normal before a transformation step.
pub fn orientation(t: &Triangle, reference_normal: Option<&Point>) -> Result<Orientation> {
    if t.is_degenerate() {
        return Err(Error::DegenerateElement);
    }
    let n = t.cross();
    let value = match reference_normal {
        Some(r) => n.dot(r),
        None => n.z,
    };
    Orientation::from_value(value).ok_or(Error::DegenerateElement)
}

/// `det(b - a, c - a, d - a) / 6`.
pub fn tet_signed_volume(a: &Point, b: &Point, c: &Point, d: &Point) -> f64 {
    Matrix3::from_columns(&[b - a, c - a, d - a]).determinant() / 6.0
}

/// Outward faces of a positively oriented tetrahedron `(x0, x1, x2, x3)`.
pub const TET_FACES: [[usize; 3]; 4] = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]];

/// Hexahedron with bottom face `(x0..x3)` and top face `(x4..x7)`, `x4`
/// above `x0`. The bottom face runs counter-clockwise seen from the top,
/// which gives the eight corner tetrahedra positive volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hexahedron {
    pub vertices: [Point; 8],
}

/// Face order: bottom, top, then the four sides.
pub const HEX_FACES: [[usize; 4]; 6] = [
    [0, 1, 2, 3],
    [4, 5, 6, 7],
    [0, 1, 5, 4],
    [1, 2, 6, 5],
    [2, 3, 7, 6],
    [3, 0, 4, 7],
];

/// Corner tetrahedra `(corner, a, b, c)` used by the hexahedral mean ratio.
pub const HEX_CORNER_TETS: [[usize; 4]; 8] = [
    [0, 3, 4, 1],
    [1, 0, 5, 2],
    [2, 1, 6, 3],
    [3, 2, 7, 0],
    [4, 7, 5, 0],
    [5, 4, 6, 1],
    [6, 5, 7, 2],
    [7, 6, 4, 3],
];

/// Octahedron vertex indices are hex face indices. Face `k` is the triple of
/// hex faces meeting at hex corner `k`, oriented outward.
pub const OCTA_FACES: [[usize; 3]; 8] = [
    [0, 2, 5],
    [0, 3, 2],
    [0, 4, 3],
    [0, 5, 4],
    [1, 5, 2],
    [1, 2, 3],
    [1, 3, 4],
    [1, 4, 5],
];

impl Hexahedron {
    pub fn centroid(&self) -> Point {
        self.vertices.iter().sum::<Point>() / 8.0
    }

    /// Signed volumes of the eight corner tetrahedra.
    pub fn corner_volumes(&self) -> [f64; 8] {
        let v = &self.vertices;
        HEX_CORNER_TETS.map(|[a, b, c, d]| tet_signed_volume(&v[a], &v[b], &v[c], &v[d]))
    }

    /// Volume from the decomposition into 24 tetrahedra spanned by the
    /// centroid, a face centre and one face edge. Exact for planar faces.
    pub fn volume(&self) -> f64 {
        let c = self.centroid();
        let v = &self.vertices;
        let mut vol = 0.0;
        for (f, face) in HEX_FACES.iter().enumerate() {
            // the bottom face is listed with its normal pointing inward
            let sign = if f == 0 { -1.0 } else { 1.0 };
            let fc = face.iter().map(|&i| v[i]).sum::<Point>() / 4.0;
            for k in 0..4 {
                let a = v[face[k]];
                let b = v[face[(k + 1) % 4]];
                vol += sign * tet_signed_volume(&c, &fc, &a, &b);
            }
        }
        vol
    }

    pub fn longest_edge(&self) -> f64 {
        HEX_FACES
            .iter()
            .flat_map(|f| (0..4).map(move |k| (f[k], f[(k + 1) % 4])))
            .map(|(a, b)| (self.vertices[a] - self.vertices[b]).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Octahedron {
    /// Indexed like [`HEX_FACES`].
    pub vertices: [Point; 6],
}

impl Octahedron {
    pub fn face(&self, k: usize) -> Triangle {
        let [a, b, c] = OCTA_FACES[k];
        Triangle::new(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn faces(&self) -> [Triangle; 8] {
        std::array::from_fn(|k| self.face(k))
    }
}

/// Dual octahedron whose vertices are the barycentres of the six hex faces.
pub fn hex_to_octahedron(h: &Hexahedron) -> Result<Octahedron> {
    let vertices = HEX_FACES.map(|f| f.iter().map(|&i| h.vertices[i]).sum::<Point>() / 4.0);
    let o = Octahedron { vertices };
    if o.faces().iter().any(Triangle::is_degenerate) {
        return Err(Error::DegenerateElement);
    }
    Ok(o)
}

/// Hexahedron whose corner `k` is the barycentre of octahedron face `k`.
pub fn octahedron_to_hex(o: &Octahedron) -> Hexahedron {
    Hexahedron {
        vertices: std::array::from_fn(|k| o.face(k).centroid()),
    }
}

/// Scales points about `center` by `factor`, in place.
pub fn scale_about(points: &mut [Point], center: &Point, factor: f64) {
    for p in points.iter_mut() {
        *p = center + factor * (*p - center);
    }
}

//! Mesh data model: vertices, homogeneous element connectivity, boundary
//! flags, vertex-to-element adjacency and validity checks.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{
    tet_signed_volume, Point, DEGENERATE_EPS, HEX_CORNER_TETS, HEX_FACES, TET_FACES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementType {
    Triangle,
    Quad,
    Tet,
    Hex,
}

impl ElementType {
    pub fn arity(self) -> usize {
        match self {
            ElementType::Triangle => 3,
            ElementType::Quad => 4,
            ElementType::Tet => 4,
            ElementType::Hex => 8,
        }
    }

    pub fn is_volume(self) -> bool {
        matches!(self, ElementType::Tet | ElementType::Hex)
    }

    /// Vertex pairs forming the element edges.
    pub fn edges(self) -> &'static [[usize; 2]] {
        match self {
            ElementType::Triangle => &[[0, 1], [1, 2], [2, 0]],
            ElementType::Quad => &[[0, 1], [1, 2], [2, 3], [3, 0]],
            ElementType::Tet => &[[0, 1], [1, 2], [2, 0], [0, 3], [1, 3], [2, 3]],
            ElementType::Hex => &[
                [0, 1],
                [1, 2],
                [2, 3],
                [3, 0],
                [4, 5],
                [5, 6],
                [6, 7],
                [7, 4],
                [0, 4],
                [1, 5],
                [2, 6],
                [3, 7],
            ],
        }
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ElementType::Triangle => "triangle",
            ElementType::Quad => "quadrilateral",
            ElementType::Tet => "tetrahedron",
            ElementType::Hex => "hexahedron",
        };
        f.write_str(name)
    }
}

/// Vertices plus a homogeneous list of elements.
///
/// Planar meshes (`dim == 2`) keep `z = 0` for every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    dim: usize,
    vertices: Vec<Point>,
    element_type: ElementType,
    connectivity: Vec<usize>,
    boundary: Vec<bool>,
}

impl Mesh {
    /// Builds a mesh and flags its boundary with [`detect_boundary`].
    pub fn new(
        dim: usize,
        vertices: Vec<Point>,
        element_type: ElementType,
        connectivity: Vec<usize>,
    ) -> Result<Self> {
        let mut mesh = Self::unchecked_boundary(dim, vertices, element_type, connectivity)?;
        let boundary = detect_boundary(&mesh)?;
        for i in boundary {
            mesh.boundary[i] = true;
        }
        Ok(mesh)
    }

    /// Builds a mesh with an explicit set of fixed vertices; no detection.
    pub fn with_boundary(
        dim: usize,
        vertices: Vec<Point>,
        element_type: ElementType,
        connectivity: Vec<usize>,
        boundary: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut mesh = Self::unchecked_boundary(dim, vertices, element_type, connectivity)?;
        mesh.set_boundary(boundary)?;
        Ok(mesh)
    }

    pub fn from_elements<const N: usize>(
        dim: usize,
        vertices: Vec<Point>,
        element_type: ElementType,
        elements: &[[usize; N]],
    ) -> Result<Self> {
        Self::new(
            dim,
            vertices,
            element_type,
            elements.iter().flatten().copied().collect(),
        )
    }

    fn unchecked_boundary(
        dim: usize,
        vertices: Vec<Point>,
        element_type: ElementType,
        connectivity: Vec<usize>,
    ) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidMesh(format!(
                "dimension must be 2 or 3, got {dim}"
            )));
        }
        if element_type.is_volume() && dim != 3 {
            return Err(Error::InvalidMesh(format!(
                "{element_type} meshes must be 3D"
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidMesh(format!(
                    "vertex {i} has non-finite coordinates"
                )));
            }
            if dim == 2 && v.z != 0.0 {
                return Err(Error::InvalidMesh(format!(
                    "vertex {i} of a planar mesh has z != 0"
                )));
            }
        }
        let arity = element_type.arity();
        if !connectivity.len().is_multiple_of(arity) {
            return Err(Error::InvalidMesh(format!(
                "connectivity length {} is not a multiple of {arity}",
                connectivity.len()
            )));
        }
        for (e, el) in connectivity.chunks_exact(arity).enumerate() {
            for (k, &i) in el.iter().enumerate() {
                if i >= vertices.len() {
                    return Err(Error::InvalidMesh(format!(
                        "element {e} references vertex {i}, mesh has {}",
                        vertices.len()
                    )));
                }
                if el[..k].contains(&i) {
                    return Err(Error::InvalidMesh(format!(
                        "element {e} repeats vertex {i}"
                    )));
                }
            }
        }
        let n = vertices.len();
        Ok(Self {
            dim,
            vertices,
            element_type,
            connectivity,
            boundary: vec![false; n],
        })
    }

    pub fn set_boundary(&mut self, boundary: impl IntoIterator<Item = usize>) -> Result<()> {
        let mut flags = vec![false; self.vertices.len()];
        for i in boundary {
            *flags
                .get_mut(i)
                .ok_or_else(|| Error::InvalidMesh(format!("boundary vertex {i} out of range")))? =
                true;
        }
        self.boundary = flags;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn element_type(&self) -> ElementType {
        self.element_type
    }

    pub fn connectivity(&self) -> &[usize] {
        &self.connectivity
    }

    pub fn num_elements(&self) -> usize {
        self.connectivity.len() / self.element_type.arity()
    }

    pub fn element(&self, e: usize) -> &[usize] {
        let a = self.element_type.arity();
        &self.connectivity[e * a..(e + 1) * a]
    }

    pub fn elements(&self) -> std::slice::ChunksExact<'_, usize> {
        self.connectivity.chunks_exact(self.element_type.arity())
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn boundary_vertices(&self) -> BTreeSet<usize> {
        (0..self.vertices.len())
            .filter(|&i| self.boundary[i])
            .collect()
    }

    /// Same mesh with new vertex positions.
    pub fn with_vertices(&self, vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::InvalidMesh(format!(
                "expected {} vertices, got {}",
                self.vertices.len(),
                vertices.len()
            )));
        }
        Ok(Self {
            vertices,
            ..self.clone()
        })
    }

    /// Positions of element `e`'s vertices, taken from `positions`.
    pub fn gather<const N: usize>(&self, e: usize, positions: &[Point]) -> [Point; N] {
        let el = self.element(e);
        debug_assert_eq!(el.len(), N);
        std::array::from_fn(|k| positions[el[k]])
    }

    /// Applies `f` to every vertex, e.g. a rigid motion.
    pub fn map_vertices(&self, f: impl Fn(&Point) -> Point) -> Self {
        Self {
            vertices: self.vertices.iter().map(f).collect(),
            ..self.clone()
        }
    }
}

/// Incident elements `J(i)` per vertex, stored compressed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    elements: Vec<usize>,
}

impl Adjacency {
    pub fn incident(&self, vertex: usize) -> &[usize] {
        &self.elements[self.offsets[vertex]..self.offsets[vertex + 1]]
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }
}

pub fn build_adjacency(m: &Mesh) -> Adjacency {
    let n = m.num_vertices();
    let mut counts = vec![0usize; n + 1];
    for el in m.elements() {
        for &i in el {
            counts[i + 1] += 1;
        }
    }
    for i in 0..n {
        counts[i + 1] += counts[i];
    }
    let offsets = counts.clone();
    let mut fill = counts;
    let mut elements = vec![0; offsets[n]];
    for (e, el) in m.elements().enumerate() {
        for &i in el {
            elements[fill[i]] = e;
            fill[i] += 1;
        }
    }
    Adjacency { offsets, elements }
}

/// Edge-connected neighbours of every vertex, sorted.
pub fn vertex_neighbors(m: &Mesh) -> Vec<Vec<usize>> {
    let mut nb: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.num_vertices()];
    let edges = m.element_type().edges();
    for el in m.elements() {
        for &[a, b] in edges {
            nb[el[a]].insert(el[b]);
            nb[el[b]].insert(el[a]);
        }
    }
    nb.into_iter().map(|s| s.into_iter().collect()).collect()
}

fn sorted_key(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Vertices on edges (surface elements) or faces (volume elements) that
/// belong to exactly one element.
pub fn detect_boundary(m: &Mesh) -> Result<BTreeSet<usize>> {
    let sides: Vec<Vec<usize>> = match m.element_type() {
        ElementType::Triangle | ElementType::Quad => m
            .element_type()
            .edges()
            .iter()
            .map(|e| e.to_vec())
            .collect(),
        ElementType::Tet => TET_FACES.iter().map(|f| f.to_vec()).collect(),
        ElementType::Hex => HEX_FACES.iter().map(|f| f.to_vec()).collect(),
    };
    let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
    for el in m.elements() {
        for side in &sides {
            let key = sorted_key(side.iter().map(|&k| el[k]).collect());
            *count.entry(key).or_default() += 1;
        }
    }
    let mut boundary = BTreeSet::new();
    for (key, c) in count {
        if c > 2 {
            return Err(Error::InvalidTopology(format!(
                "side {key:?} is shared by {c} elements"
            )));
        }
        if c == 1 {
            boundary.extend(key);
        }
    }
    Ok(boundary)
}

/// What "correctly oriented" means for one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementReference {
    /// Expected sign of signed areas (planar) or volumes.
    Sign(f64),
    /// Expected normal direction of a surface element in space.
    Normal(Point),
}

/// Per-element orientation reference for [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationReference(pub Vec<ElementReference>);

impl OrientationReference {
    /// Counter-clockwise planar elements and positive volumes. Surface
    /// elements in space use their own current normal, so only degenerate or
    /// folded quads are reported for them.
    pub fn positive(m: &Mesh) -> Self {
        Self(
            (0..m.num_elements())
                .map(|e| match surface_normal(m, e, m.vertices()) {
                    Some(n) => ElementReference::Normal(n),
                    None => ElementReference::Sign(1.0),
                })
                .collect(),
        )
    }

    /// Orientation of every element as it is in `m` right now.
    pub fn capture(m: &Mesh) -> Self {
        Self(
            (0..m.num_elements())
                .map(|e| match surface_normal(m, e, m.vertices()) {
                    Some(n) => ElementReference::Normal(n),
                    None => {
                        let pts = element_points(m, e, m.vertices());
                        let total: f64 = orientation_measures(m.element_type(), &pts).iter().sum();
                        ElementReference::Sign(if total < 0.0 { -1.0 } else { 1.0 })
                    }
                })
                .collect(),
        )
    }
}

fn element_points(m: &Mesh, e: usize, pos: &[Point]) -> Vec<Point> {
    m.element(e).iter().map(|&v| pos[v]).collect()
}

/// Normal of a surface element embedded in space; `None` otherwise.
fn surface_normal(m: &Mesh, e: usize, pos: &[Point]) -> Option<Point> {
    if m.dim() != 3 || m.element_type().is_volume() {
        return None;
    }
    let pts = element_points(m, e, pos);
    let k = pts.len();
    // Newell normal, the cross product for a triangle
    let mut n = Point::zeros();
    for i in 0..k {
        n += pts[i].cross(&pts[(i + 1) % k]);
    }
    Some(n)
}

/// Corner cross products of a triangle or quad.
fn corner_vectors(pts: &[Point]) -> Vec<Point> {
    let k = pts.len();
    if k == 3 {
        return vec![(pts[1] - pts[0]).cross(&(pts[2] - pts[0]))];
    }
    (0..k)
        .map(|i| {
            let p = pts[i];
            (pts[(i + 1) % k] - p).cross(&(pts[(i + k - 1) % k] - p))
        })
        .collect()
}

/// Oriented measures whose signs must all agree with the reference: corner
/// cross products for triangles and quads, signed volumes for tets, corner
/// tetrahedra for hexes.
fn orientation_measures(t: ElementType, pts: &[Point]) -> Vec<f64> {
    match t {
        ElementType::Triangle | ElementType::Quad => {
            corner_vectors(pts).iter().map(|v| v.z).collect()
        }
        ElementType::Tet => vec![tet_signed_volume(&pts[0], &pts[1], &pts[2], &pts[3])],
        ElementType::Hex => HEX_CORNER_TETS
            .iter()
            .map(|c| tet_signed_volume(&pts[c[0]], &pts[c[1]], &pts[c[2]], &pts[c[3]]))
            .collect(),
    }
}

fn longest_edge(t: ElementType, pts: &[Point]) -> f64 {
    t.edges()
        .iter()
        .map(|&[a, b]| (pts[a] - pts[b]).norm())
        .fold(0.0, f64::max)
}

/// True if an element of type `t` with vertices `pts` (in element order) is
/// inverted or degenerate with respect to `reference`.
pub fn is_element_inverted(t: ElementType, pts: &[Point], reference: &ElementReference) -> bool {
    let l = longest_edge(t, pts);
    if !(l > 0.0) {
        return true;
    }
    let (measures, scale) = match *reference {
        ElementReference::Normal(n) => {
            let nn = n.norm();
            if !(nn > 0.0) {
                return true;
            }
            let unit = n / nn;
            let m: Vec<f64> = corner_vectors(pts).iter().map(|v| v.dot(&unit)).collect();
            (m, l * l)
        }
        ElementReference::Sign(s) => {
            let scale = if t.is_volume() { l * l * l } else { l * l };
            let m: Vec<f64> = orientation_measures(t, pts).iter().map(|v| v * s).collect();
            (m, scale)
        }
    };
    measures.iter().any(|&v| !(v > DEGENERATE_EPS * scale))
}

/// True if element `e`, placed at `pos`, is inverted or degenerate with
/// respect to `reference`.
pub fn is_inverted(m: &Mesh, e: usize, pos: &[Point], reference: &ElementReference) -> bool {
    is_element_inverted(m.element_type(), &element_points(m, e, pos), reference)
}

/// Indices of elements that are inverted or degenerate relative to the
/// reference orientation.
pub fn validate(m: &Mesh, reference: &OrientationReference) -> Vec<usize> {
    assert_eq!(
        reference.0.len(),
        m.num_elements(),
        "reference does not match the mesh"
    );
    (0..m.num_elements())
        .filter(|&e| is_inverted(m, e, m.vertices(), &reference.0[e]))
        .collect()
}

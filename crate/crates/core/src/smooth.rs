//! Mesh smoothers built on the triangle transformation, plus the
//! inversion-inhibiting Laplace baseline.
//!
//! Every outer iteration works Jacobi style: all element images are computed
//! from a frozen snapshot of the vertex positions, then each free vertex moves
//! to the mean of its images. Boundary vertices never move. The loop stops
//! when the mean quality improves by less than `error_bound` or after
//! `max_iterations` sweeps.
//!
//! With [`Guard::ResetElement`] an element whose image is inverted is replaced
//! by its snapshot, and after averaging any element that became inverted has
//! its vertices restored to the snapshot (repeated until no element is newly
//! inverted). The output therefore never contains an inverted element that
//! was valid in the input.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    hex_to_octahedron, iterate_triangle, octahedron_to_hex, scale_about, tet_signed_volume,
    AdaptiveParams, Hexahedron, Point, Triangle, OCTA_FACES, TET_FACES,
};
use crate::mesh::{
    build_adjacency, is_element_inverted, is_inverted, vertex_neighbors, ElementReference,
    ElementType, Mesh, OrientationReference,
};
use crate::quality::{element_qualities, QualityReport, TraceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guard {
    ResetElement,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmootherConfig {
    pub params: AdaptiveParams,
    pub inner_iterations: usize,
    pub max_iterations: usize,
    pub error_bound: f64,
    pub guard: Guard,
}

pub const DEFAULT_MAX_ITERATIONS: usize = 200;
pub const DEFAULT_ERROR_BOUND: f64 = 1e-4;

impl SmootherConfig {
    /// Standard gains `(1, 1)` with the orientation guard on.
    pub fn standard(element_type: ElementType) -> Self {
        Self {
            params: AdaptiveParams::STANDARD,
            inner_iterations: default_inner_iterations(element_type),
            max_iterations: DEFAULT_MAX_ITERATIONS,
            error_bound: DEFAULT_ERROR_BOUND,
            guard: Guard::ResetElement,
        }
    }

    /// Preset gains: `(0.1, 0.15)` for triangles and quads, `(0.6, 0.6)` for
    /// tetrahedra. Hexahedra have no preset and keep `(1, 1)`.
    pub fn adaptive(element_type: ElementType) -> Self {
        Self {
            params: adaptive_preset(element_type),
            ..Self::standard(element_type)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.inner_iterations == 0 {
            return Err(Error::InvalidParams(
                "inner_iterations must be at least 1".into(),
            ));
        }
        if !(self.error_bound > 0.0) {
            return Err(Error::InvalidParams("error_bound must be positive".into()));
        }
        Ok(())
    }
}

pub fn default_inner_iterations(element_type: ElementType) -> usize {
    match element_type {
        ElementType::Quad => 10,
        _ => 3,
    }
}

pub fn adaptive_preset(element_type: ElementType) -> AdaptiveParams {
    let (a0, a1) = match element_type {
        ElementType::Triangle | ElementType::Quad => (0.1, 0.15),
        ElementType::Tet => (0.6, 0.6),
        ElementType::Hex => (1.0, 1.0),
    };
    AdaptiveParams::new(a0, a1).expect("presets are valid")
}

#[derive(Debug, Clone)]
pub struct SmoothingResult {
    pub mesh: Mesh,
    pub report: QualityReport,
    pub iterations_run: usize,
    /// Elements reset by the guard (or skipped as degenerate), per iteration.
    pub guard_resets: Vec<usize>,
    /// Elements whose image could not be computed, per iteration.
    pub degenerate_elements: Vec<Vec<usize>>,
}

impl SmoothingResult {
    pub fn total_guard_resets(&self) -> usize {
        self.guard_resets.iter().sum()
    }
}

/// Dispatches on the element type of `m`.
pub fn smooth(m: &Mesh, cfg: &SmootherConfig) -> Result<SmoothingResult> {
    match m.element_type() {
        ElementType::Triangle => smooth_triangle_mesh(m, cfg),
        ElementType::Quad => smooth_quad_mesh(m, cfg),
        ElementType::Tet => smooth_tet_mesh(m, cfg),
        ElementType::Hex => smooth_hex_mesh(m, cfg),
    }
}

pub fn smooth_triangle_mesh(m: &Mesh, cfg: &SmootherConfig) -> Result<SmoothingResult> {
    expect_type(m, ElementType::Triangle)?;
    run_transform(m, cfg, triangle_image)
}

pub fn smooth_quad_mesh(m: &Mesh, cfg: &SmootherConfig) -> Result<SmoothingResult> {
    expect_type(m, ElementType::Quad)?;
    run_transform(m, cfg, quad_image)
}

pub fn smooth_tet_mesh(m: &Mesh, cfg: &SmootherConfig) -> Result<SmoothingResult> {
    expect_type(m, ElementType::Tet)?;
    run_transform(m, cfg, tet_image)
}

pub fn smooth_hex_mesh(m: &Mesh, cfg: &SmootherConfig) -> Result<SmoothingResult> {
    expect_type(m, ElementType::Hex)?;
    run_transform(m, cfg, hex_image)
}

fn expect_type(m: &Mesh, t: ElementType) -> Result<()> {
    if m.element_type() != t {
        return Err(Error::InvalidMesh(format!(
            "expected a {t} mesh, got a {} mesh",
            m.element_type()
        )));
    }
    Ok(())
}

/// Image of one element's vertices under the element transformation, in
/// element vertex order.
type ImageFn = fn(&[Point], &SmootherConfig) -> Result<Vec<Point>>;

/// The four corner triangles of a quad; each vertex lies in exactly three.
pub const QUAD_TRIANGLES: [[usize; 3]; 4] = [[0, 1, 2], [1, 2, 3], [2, 3, 0], [3, 0, 1]];

fn triangle_image(pts: &[Point], cfg: &SmootherConfig) -> Result<Vec<Point>> {
    let t = Triangle::new(pts[0], pts[1], pts[2]);
    Ok(iterate_triangle(&t, &cfg.params, cfg.inner_iterations)?
        .vertices
        .to_vec())
}

/// Barycentre of the three images each quad vertex receives from the corner
/// triangles.
pub fn quad_image(pts: &[Point], cfg: &SmootherConfig) -> Result<Vec<Point>> {
    let mut acc = [Point::zeros(); 4];
    for tri in QUAD_TRIANGLES {
        let t = Triangle::new(pts[tri[0]], pts[tri[1]], pts[tri[2]]);
        let img = iterate_triangle(&t, &cfg.params, cfg.inner_iterations)?;
        for (k, &v) in tri.iter().enumerate() {
            acc[v] += img.vertices[k];
        }
    }
    Ok(acc.iter().map(|p| p / 3.0).collect())
}

/// One pass of the triangle mesh transformation over a closed surface: every
/// face is transformed (area preserved) and every vertex moves to the mean of
/// its face images.
pub fn closed_surface_pass(
    points: &mut [Point],
    faces: &[[usize; 3]],
    params: &AdaptiveParams,
) -> Result<()> {
    let mut acc = vec![Point::zeros(); points.len()];
    let mut count = vec![0usize; points.len()];
    for f in faces {
        let t = Triangle::new(points[f[0]], points[f[1]], points[f[2]]);
        let img = iterate_triangle(&t, params, 1)?;
        for (k, &v) in f.iter().enumerate() {
            acc[v] += img.vertices[k];
            count[v] += 1;
        }
    }
    for (i, p) in points.iter_mut().enumerate() {
        if count[i] > 0 {
            *p = acc[i] / count[i] as f64;
        }
    }
    Ok(())
}

/// Scale factor restoring `target` volume, keeping the sign.
fn volume_factor(target: f64, current: f64) -> Result<f64> {
    if !(current.abs() > 0.0) || !current.is_finite() {
        return Err(Error::DegenerateElement);
    }
    Ok((target / current).abs().cbrt())
}

pub fn tet_image(pts: &[Point], cfg: &SmootherConfig) -> Result<Vec<Point>> {
    let volume = tet_signed_volume(&pts[0], &pts[1], &pts[2], &pts[3]);
    // faces are listed outward for positive volume
    let faces: Vec<[usize; 3]> = if volume >= 0.0 {
        TET_FACES.to_vec()
    } else {
        TET_FACES.iter().map(|f| [f[0], f[2], f[1]]).collect()
    };
    let mut cur = pts.to_vec();
    for _ in 0..cfg.inner_iterations {
        closed_surface_pass(&mut cur, &faces, &cfg.params)?;
    }
    let new_volume = tet_signed_volume(&cur[0], &cur[1], &cur[2], &cur[3]);
    let c = cur.iter().sum::<Point>() / 4.0;
    scale_about(&mut cur, &c, volume_factor(volume, new_volume)?);
    Ok(cur)
}

pub fn hex_image(pts: &[Point], cfg: &SmootherConfig) -> Result<Vec<Point>> {
    let hex = Hexahedron {
        vertices: std::array::from_fn(|k| pts[k]),
    };
    let volume = hex.volume();
    let mut octa = hex_to_octahedron(&hex)?;
    for _ in 0..cfg.inner_iterations {
        closed_surface_pass(&mut octa.vertices, &OCTA_FACES, &cfg.params)?;
    }
    let mut out = octahedron_to_hex(&octa);
    let c = out.centroid();
    let factor = volume_factor(volume, out.volume())?;
    scale_about(&mut out.vertices, &c, factor);
    Ok(out.vertices.to_vec())
}

/// Reference used inside one iteration: signs come from the input, surface
/// normals from the snapshot.
fn step_reference(
    m: &Mesh,
    input: &OrientationReference,
    snapshot: &[Point],
) -> Vec<ElementReference> {
    let has_normals = input
        .0
        .iter()
        .any(|r| matches!(r, ElementReference::Normal(_)));
    if !has_normals {
        return input.0.clone();
    }
    let snap = m
        .with_vertices(snapshot.to_vec())
        .expect("same vertex count");
    OrientationReference::capture(&snap).0
}

struct Driver<'a> {
    mesh: &'a Mesh,
    cfg: &'a SmootherConfig,
    input_reference: OrientationReference,
    positions: Vec<Point>,
    trace: Vec<TraceRecord>,
    guard_resets: Vec<usize>,
    degenerate: Vec<Vec<usize>>,
}

impl<'a> Driver<'a> {
    fn new(mesh: &'a Mesh, cfg: &'a SmootherConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            mesh,
            cfg,
            input_reference: OrientationReference::capture(mesh),
            positions: mesh.vertices().to_vec(),
            trace: Vec::new(),
            guard_resets: Vec::new(),
            degenerate: Vec::new(),
        })
    }

    /// Runs `step` until the improvement drops below the error bound.
    fn run(
        mut self,
        mut step: impl FnMut(&Mesh, &[Point], &[ElementReference], &mut StepStats) -> Vec<Point>,
    ) -> Result<SmoothingResult> {
        let initial = QualityReport::from_qualities(element_qualities(self.mesh, &self.positions));
        let mut prev = initial.mean;
        self.trace.push(TraceRecord {
            iter: 0,
            mean: initial.mean,
            min: initial.min,
        });
        let mut iterations = 0;
        let mut last = None;
        while iterations < self.cfg.max_iterations {
            iterations += 1;
            let snapshot = self.positions.clone();
            let reference = step_reference(self.mesh, &self.input_reference, &snapshot);
            let mut stats = StepStats::default();
            let mut next = step(self.mesh, &snapshot, &reference, &mut stats);
            for (i, p) in next.iter_mut().enumerate() {
                if self.mesh.is_boundary(i) {
                    *p = snapshot[i];
                }
            }
            if self.cfg.guard == Guard::ResetElement {
                stats.resets += repair_inversions(self.mesh, &snapshot, &mut next, &reference);
            }
            self.positions = next;
            let report =
                QualityReport::from_qualities(element_qualities(self.mesh, &self.positions));
            self.trace.push(TraceRecord {
                iter: iterations,
                mean: report.mean,
                min: report.min,
            });
            self.guard_resets.push(stats.resets);
            self.degenerate.push(stats.degenerate);
            let improvement = report.mean - prev;
            prev = report.mean;
            last = Some(report);
            if improvement < self.cfg.error_bound {
                break;
            }
        }
        let mut report = last.unwrap_or(initial);
        report.iteration_trace = self.trace;
        Ok(SmoothingResult {
            mesh: self.mesh.with_vertices(self.positions)?,
            report,
            iterations_run: iterations,
            guard_resets: self.guard_resets,
            degenerate_elements: self.degenerate,
        })
    }
}

#[derive(Debug, Default)]
struct StepStats {
    resets: usize,
    degenerate: Vec<usize>,
}

/// Restores the snapshot positions of every element that was valid in the
/// snapshot and is inverted now, until none is left.
fn repair_inversions(
    m: &Mesh,
    snapshot: &[Point],
    next: &mut [Point],
    reference: &[ElementReference],
) -> usize {
    let valid_before: Vec<bool> = (0..m.num_elements())
        .into_par_iter()
        .map(|e| !is_inverted(m, e, snapshot, &reference[e]))
        .collect();
    let mut resets = 0;
    loop {
        let bad: Vec<usize> = (0..m.num_elements())
            .into_par_iter()
            .filter(|&e| valid_before[e] && is_inverted(m, e, next, &reference[e]))
            .collect();
        if bad.is_empty() {
            return resets;
        }
        for e in bad {
            for &v in m.element(e) {
                next[v] = snapshot[v];
            }
            resets += 1;
        }
    }
}

enum ElementImage {
    Moved(Vec<Point>),
    Reset,
    Degenerate,
}

fn run_transform(m: &Mesh, cfg: &SmootherConfig, image: ImageFn) -> Result<SmoothingResult> {
    let adjacency = build_adjacency(m);
    let driver = Driver::new(m, cfg)?;
    let guard = cfg.guard;
    driver.run(|mesh, snapshot, reference, stats| {
        let images: Vec<ElementImage> = (0..mesh.num_elements())
            .into_par_iter()
            .map(|e| {
                let el = mesh.element(e);
                let pts: Vec<Point> = el.iter().map(|&v| snapshot[v]).collect();
                let Ok(img) = image(&pts, cfg) else {
                    return ElementImage::Degenerate;
                };
                if guard == Guard::ResetElement
                    && !is_inverted(mesh, e, snapshot, &reference[e])
                    && is_element_inverted(mesh.element_type(), &img, &reference[e])
                {
                    return ElementImage::Reset;
                }
                ElementImage::Moved(img)
            })
            .collect();

        let mut acc = vec![Point::zeros(); mesh.num_vertices()];
        for (e, img) in images.iter().enumerate() {
            let el = mesh.element(e);
            match img {
                ElementImage::Moved(img) => {
                    for (k, &v) in el.iter().enumerate() {
                        acc[v] += img[k];
                    }
                }
                ElementImage::Reset | ElementImage::Degenerate => {
                    if matches!(img, ElementImage::Degenerate) {
                        stats.degenerate.push(e);
                    }
                    stats.resets += 1;
                    for &v in el {
                        acc[v] += snapshot[v];
                    }
                }
            }
        }
        (0..mesh.num_vertices())
            .map(|v| match adjacency.incident(v).len() {
                0 => snapshot[v],
                n => acc[v] / n as f64,
            })
            .collect()
    })
}

/// Moves every free vertex to the barycentre of its edge neighbours, one
/// vertex at a time, and rejects moves that would invert an incident element.
pub fn smart_laplace(m: &Mesh, cfg: &SmootherConfig) -> Result<SmoothingResult> {
    let adjacency = build_adjacency(m);
    let neighbors = vertex_neighbors(m);
    let driver = Driver::new(m, cfg)?;
    driver.run(|mesh, snapshot, reference, stats| {
        let valid_before: Vec<bool> = (0..mesh.num_elements())
            .map(|e| !is_inverted(mesh, e, snapshot, &reference[e]))
            .collect();
        let mut pos = snapshot.to_vec();
        for v in 0..mesh.num_vertices() {
            if mesh.is_boundary(v) || neighbors[v].is_empty() {
                continue;
            }
            let target =
                neighbors[v].iter().map(|&u| pos[u]).sum::<Point>() / neighbors[v].len() as f64;
            let old = pos[v];
            pos[v] = target;
            let inverts = adjacency
                .incident(v)
                .iter()
                .any(|&e| valid_before[e] && is_inverted(mesh, e, &pos, &reference[e]));
            if inverts {
                pos[v] = old;
                stats.resets += 1;
            }
        }
        pos
    })
}

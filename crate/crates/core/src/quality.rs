//! Element quality measures and mesh-level reports.
//!
//! Triangles and quads use the edge ratio (shortest over longest edge).
//! Tetrahedra use the mean ratio `3 det(S)^(2/3) / tr(SᵀS)` against the
//! regular tetrahedron; hexahedra average the mean ratio of their eight corner
//! tetrahedra against the unit cube corner.

use std::sync::OnceLock;

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Hexahedron, Point, HEX_CORNER_TETS};
use crate::mesh::{ElementType, Mesh};

pub const HISTOGRAM_BINS: usize = 20;

/// Columns are the edge vectors of the unit regular tetrahedron.
pub fn regular_tet_frame() -> Matrix3<f64> {
    let s3 = 3f64.sqrt();
    Matrix3::new(
        1.0,
        0.5,
        0.5,
        0.0,
        s3 / 2.0,
        s3 / 6.0,
        0.0,
        0.0,
        (2.0f64 / 3.0).sqrt(),
    )
}

fn regular_tet_frame_inverse() -> &'static Matrix3<f64> {
    static INV: OnceLock<Matrix3<f64>> = OnceLock::new();
    INV.get_or_init(|| {
        regular_tet_frame()
            .try_inverse()
            .expect("reference frame is invertible")
    })
}

/// Shortest over longest edge of a closed polygon (triangle or quad).
pub fn quality_edge_ratio(points: &[Point]) -> Result<f64> {
    let k = points.len();
    let (mut min, mut max) = (f64::INFINITY, 0.0f64);
    for i in 0..k {
        let l = (points[(i + 1) % k] - points[i]).norm();
        min = min.min(l);
        max = max.max(l);
    }
    if !(max > 0.0) {
        return Err(Error::DegenerateElement);
    }
    Ok(min / max)
}

/// `3 det(S)^(2/3) / tr(SᵀS)`, zero for non-positive determinants.
fn mean_ratio(s: &Matrix3<f64>) -> f64 {
    let det = s.determinant();
    if !(det > 0.0) {
        return 0.0;
    }
    let frob = s.norm_squared();
    (3.0 * det.powf(2.0 / 3.0) / frob).min(1.0)
}

fn edge_matrix(x0: &Point, x1: &Point, x2: &Point, x3: &Point) -> Matrix3<f64> {
    Matrix3::from_columns(&[x1 - x0, x2 - x0, x3 - x0])
}

pub fn quality_mean_ratio_tet(t: &[Point; 4]) -> f64 {
    let d = edge_matrix(&t[0], &t[1], &t[2], &t[3]);
    mean_ratio(&(d * regular_tet_frame_inverse()))
}

pub fn quality_mean_ratio_hex(h: &Hexahedron) -> f64 {
    let v = &h.vertices;
    let sum: f64 = HEX_CORNER_TETS
        .iter()
        .map(|&[a, b, c, d]| mean_ratio(&edge_matrix(&v[a], &v[b], &v[c], &v[d])))
        .sum();
    sum / 8.0
}

/// Quality of element `e` placed at `positions`. Degenerate polygons score 0.
pub fn element_quality(m: &Mesh, e: usize, positions: &[Point]) -> f64 {
    match m.element_type() {
        ElementType::Triangle => quality_edge_ratio(&m.gather::<3>(e, positions)).unwrap_or(0.0),
        ElementType::Quad => quality_edge_ratio(&m.gather::<4>(e, positions)).unwrap_or(0.0),
        ElementType::Tet => quality_mean_ratio_tet(&m.gather::<4>(e, positions)),
        ElementType::Hex => quality_mean_ratio_hex(&Hexahedron {
            vertices: m.gather::<8>(e, positions),
        }),
    }
}

pub fn element_qualities(m: &Mesh, positions: &[Point]) -> Vec<f64> {
    (0..m.num_elements())
        .into_par_iter()
        .map(|e| element_quality(m, e, positions))
        .collect()
}

/// Pairwise summation; the split points depend only on the length, so the
/// result is reproducible.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub mean: f64,
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub per_element: Vec<f64>,
    pub mean: f64,
    pub min: f64,
    pub histogram: [usize; HISTOGRAM_BINS],
    pub iteration_trace: Vec<TraceRecord>,
}

/// JSON layout of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub mean: f64,
    pub min: f64,
    pub histogram: Vec<usize>,
    pub trace: Vec<TraceRecord>,
}

pub fn histogram_bin(q: f64) -> usize {
    ((q / 0.05).floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1)
}

impl QualityReport {
    pub fn from_qualities(per_element: Vec<f64>) -> Self {
        let mean = if per_element.is_empty() {
            0.0
        } else {
            pairwise_sum(&per_element) / per_element.len() as f64
        };
        let min = per_element.iter().copied().fold(f64::INFINITY, f64::min);
        let min = if per_element.is_empty() { 0.0 } else { min };
        let mut histogram = [0; HISTOGRAM_BINS];
        for &q in &per_element {
            histogram[histogram_bin(q)] += 1;
        }
        Self {
            per_element,
            mean,
            min,
            histogram,
            iteration_trace: Vec::new(),
        }
    }

    pub fn to_document(&self) -> ReportDocument {
        ReportDocument {
            mean: self.mean,
            min: self.min,
            histogram: self.histogram.to_vec(),
            trace: self.iteration_trace.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("report serializes")
    }
}

pub fn mesh_quality(m: &Mesh) -> QualityReport {
    QualityReport::from_qualities(element_qualities(m, m.vertices()))
}

mod common;

use geosmooth::geometry::{Hexahedron, Point};
use geosmooth::io::{generate, GeneratorKind, GeneratorSpec};
use geosmooth::quality::{
    element_qualities, mesh_quality, quality_edge_ratio, quality_mean_ratio_hex,
    quality_mean_ratio_tet, ReportDocument, HISTOGRAM_BINS,
};
use proptest::prelude::*;

use common::*;

fn perturbation() -> impl Strategy<Value = Vec<[f64; 3]>> {
    prop::collection::vec(prop::array::uniform3(-0.3..0.3f64), 8)
}

proptest! {
    #[test]
    fn measures_are_similarity_invariant(d in perturbation(), seed in any::<u64>(), scale in 1e-3..1e3f64) {
        let mut r = rng(seed);
        let rot = random_rotation(&mut r);
        let g = |p: &Point| rot * p * scale + Point::new(-4.0, 2.0, 9.0);
        let tet: [Point; 4] = std::array::from_fn(|k| regular_tet_points()[k] + Point::from(d[k]));
        let hex: [Point; 8] = std::array::from_fn(|k| unit_cube_points()[k] + Point::from(d[k]));
        let a = quality_mean_ratio_tet(&tet);
        let b = quality_mean_ratio_tet(&tet.map(|p| g(&p)));
        prop_assert!((a - b).abs() < 1e-10);
        let a = quality_mean_ratio_hex(&Hexahedron { vertices: hex });
        let b = quality_mean_ratio_hex(&Hexahedron { vertices: hex.map(|p| g(&p)) });
        prop_assert!((a - b).abs() < 1e-10);
        let poly: Vec<Point> = hex[..4].to_vec();
        let a = quality_edge_ratio(&poly).unwrap();
        let b = quality_edge_ratio(&poly.iter().map(g).collect::<Vec<_>>()).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn measures_stay_in_unit_interval(d in perturbation()) {
        let tet: [Point; 4] = std::array::from_fn(|k| Point::from(d[k]) * 5.0);
        let q = quality_mean_ratio_tet(&tet);
        prop_assert!((0.0..=1.0).contains(&q));
        let hex: [Point; 8] = std::array::from_fn(|k| unit_cube_points()[k] + Point::from(d[k]) * 3.0);
        let q = quality_mean_ratio_hex(&Hexahedron { vertices: hex });
        prop_assert!((0.0..=1.0).contains(&q));
    }
}

#[test]
fn unperturbed_grids_have_equal_qualities() {
    let m = generate(&GeneratorSpec::new(
        GeneratorKind::JitteredSquareTri,
        10,
        0.0,
        0,
    ))
    .unwrap();
    let q = element_qualities(&m, m.vertices());
    assert!(q.iter().all(|&x| (x - q[0]).abs() < 1e-15));
    assert!((q[0] - 0.5f64.sqrt()).abs() < 1e-15);
    let m = generate(&GeneratorSpec::new(GeneratorKind::CubeHex, 3, 0.0, 0)).unwrap();
    assert!(element_qualities(&m, m.vertices())
        .iter()
        .all(|&x| (x - 1.0).abs() < 1e-14));
}

#[test]
fn report_document_is_stable_json() {
    let m = generate(&GeneratorSpec::new(GeneratorKind::DiskTri, 4, 0.2, 1)).unwrap();
    let r = mesh_quality(&m);
    let doc: ReportDocument = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(doc.histogram.len(), HISTOGRAM_BINS);
    assert_eq!(doc.histogram.iter().sum::<usize>(), m.num_elements());
    assert_eq!(doc.mean, r.mean);
    assert!(serde_json::from_str::<ReportDocument>(
        r#"{"mean":1,"min":1,"histogram":[],"trace":[],"extra":0}"#
    )
    .is_err());
}

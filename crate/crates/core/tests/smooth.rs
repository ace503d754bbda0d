mod common;

use geosmooth::geometry::{point2, Point};
use geosmooth::io::{generate, GeneratorKind, GeneratorSpec};
use geosmooth::mesh::{validate, ElementType, Mesh, OrientationReference};
use geosmooth::quality::mesh_quality;
use geosmooth::smooth::{quad_image, smart_laplace, smooth, smooth_tet_mesh, SmootherConfig};
use geosmooth::Error;
use proptest::prelude::*;

use common::*;

fn mesh(kind: GeneratorKind, res: usize, jitter: f64, seed: u64) -> Mesh {
    generate(&GeneratorSpec::new(kind, res, jitter, seed)).unwrap()
}

const VOLUME_AND_SURFACE: [(GeneratorKind, usize); 5] = [
    (GeneratorKind::JitteredSquareTri, 6),
    (GeneratorKind::DiskTri, 4),
    (GeneratorKind::QuadGridWithHole, 4),
    (GeneratorKind::CubeTet, 3),
    (GeneratorKind::CubeHex, 3),
];

#[test]
fn runs_are_bit_identical() {
    for (kind, res) in VOLUME_AND_SURFACE {
        let m = mesh(kind, res, 0.4, 9);
        let cfg = SmootherConfig::standard(m.element_type());
        let a = smooth(&m, &cfg).unwrap();
        let b = smooth(&m, &cfg).unwrap();
        assert_eq!(a.mesh, b.mesh, "{kind}");
        assert_eq!(a.report, b.report, "{kind}");
        let a = smart_laplace(&m, &cfg).unwrap();
        let b = smart_laplace(&m, &cfg).unwrap();
        assert_eq!(a.mesh, b.mesh, "{kind}");
    }
}

#[test]
fn boundary_vertices_never_move() {
    for (kind, res) in VOLUME_AND_SURFACE {
        let m = mesh(kind, res, 0.4, 2);
        let out = smooth(&m, &SmootherConfig::standard(m.element_type()))
            .unwrap()
            .mesh;
        for v in m.boundary_vertices() {
            assert_eq!(m.vertices()[v], out.vertices()[v], "{kind}");
        }
    }
}

#[test]
fn trace_and_stopping_rule() {
    let m = mesh(GeneratorKind::JitteredSquareTri, 8, 0.4, 4);
    let cfg = SmootherConfig::standard(ElementType::Triangle);
    let r = smooth(&m, &cfg).unwrap();
    let trace = &r.report.iteration_trace;
    assert_eq!(trace.len(), r.iterations_run + 1);
    assert_eq!(trace[0].iter, 0);
    assert_eq!(trace[0].mean, mesh_quality(&m).mean);
    assert_eq!(trace.last().unwrap().mean, r.report.mean);
    assert!(r.iterations_run < cfg.max_iterations);
    let last = trace.len() - 1;
    assert!(trace[last].mean - trace[last - 1].mean < cfg.error_bound);
    for w in trace[..last].windows(2) {
        assert!(w[1].mean - w[0].mean >= cfg.error_bound);
    }
    let capped = smooth(
        &m,
        &SmootherConfig {
            max_iterations: 2,
            ..cfg
        },
    )
    .unwrap();
    assert_eq!(capped.iterations_run, 2);
}

#[test]
fn rejects_mismatched_type_and_bad_config() {
    let m = mesh(GeneratorKind::JitteredSquareTri, 3, 0.0, 0);
    let cfg = SmootherConfig::standard(ElementType::Tet);
    assert!(matches!(
        smooth_tet_mesh(&m, &cfg),
        Err(Error::InvalidMesh(_))
    ));
    let cfg = SmootherConfig {
        inner_iterations: 0,
        ..SmootherConfig::standard(ElementType::Triangle)
    };
    assert!(matches!(smooth(&m, &cfg), Err(Error::InvalidParams(_))));
    let cfg = SmootherConfig {
        error_bound: 0.0,
        ..SmootherConfig::standard(ElementType::Triangle)
    };
    assert!(matches!(smooth(&m, &cfg), Err(Error::InvalidParams(_))));
}

#[test]
fn degenerate_elements_are_skipped_not_fatal() {
    // the middle triangle is collinear
    let v = vec![
        point2(0.0, 0.0),
        point2(1.0, 0.0),
        point2(2.0, 0.0),
        point2(1.0, 1.0),
        point2(1.0, -1.0),
    ];
    let m = Mesh::with_boundary(
        2,
        v,
        ElementType::Triangle,
        vec![0, 1, 3, 0, 1, 2, 1, 2, 3, 0, 4, 1],
        [0, 2, 3, 4],
    )
    .unwrap();
    let r = smooth(&m, &SmootherConfig::standard(ElementType::Triangle)).unwrap();
    assert!(r.degenerate_elements[0].contains(&1));
    assert!(r.guard_resets[0] >= 1);
}

#[test]
fn single_square_maps_to_a_rotated_square() {
    let cfg = SmootherConfig::standard(ElementType::Quad);
    let sq = unit_cube_points()[..4].to_vec();
    let img = quad_image(&sq, &cfg).unwrap();
    let side = (img[1] - img[0]).norm();
    for k in 0..4 {
        assert!(((img[(k + 1) % 4] - img[k]).norm() - side).abs() < 1e-12);
        assert!((img[(k + 2) % 4] - img[k]).norm() > side);
    }
    let c: Point = img.iter().sum::<Point>() / 4.0;
    assert!((c - Point::new(0.5, 0.5, 0.0)).norm() < 1e-12);
}

#[test]
fn smart_laplace_rejects_the_inverting_move() {
    let patch = concave_patch();
    let cfg = SmootherConfig::standard(ElementType::Triangle);
    let r = smart_laplace(&patch, &cfg).unwrap();
    assert_eq!(r.mesh.vertices()[6], patch.vertices()[6]);
    assert!(r.total_guard_resets() >= 1);
    assert!(validate(&r.mesh, &OrientationReference::positive(&r.mesh)).is_empty());
}

#[test]
fn surface_steps_never_fold_against_the_previous_normals() {
    // a jittered grid wrapped isometrically onto a quarter cylinder
    let flat = mesh(GeneratorKind::JitteredSquareTri, 8, 0.4, 5);
    let curved: Vec<Point> = flat
        .vertices()
        .iter()
        .map(|p| {
            let r = std::f64::consts::FRAC_2_PI;
            let a = p.x / r;
            Point::new(r * a.cos(), p.y, r * a.sin())
        })
        .collect();
    let conn = flat.connectivity().to_vec();
    let mut m = Mesh::with_boundary(
        3,
        curved,
        ElementType::Triangle,
        conn,
        flat.boundary_vertices(),
    )
    .unwrap();
    let start = mesh_quality(&m).mean;
    let cfg = SmootherConfig {
        max_iterations: 1,
        ..SmootherConfig::standard(ElementType::Triangle)
    };
    for _ in 0..10 {
        let out = smooth(&m, &cfg).unwrap().mesh;
        assert!(validate(&out, &OrientationReference::capture(&m)).is_empty());
        m = out;
    }
    assert!(mesh_quality(&m).mean > start);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn guard_never_adds_inverted_elements(seed in any::<u64>(), jitter in 0.0..0.49f64, kind in 0usize..4) {
        let (k, res) = [
            (GeneratorKind::JitteredSquareTri, 5),
            (GeneratorKind::QuadGridWithHole, 3),
            (GeneratorKind::CubeTet, 2),
            (GeneratorKind::CubeHex, 2),
        ][kind];
        let m = mesh(k, res, jitter, seed);
        let reference = OrientationReference::capture(&m);
        let before = validate(&m, &reference);
        for cfg in [SmootherConfig::standard(m.element_type()), SmootherConfig::adaptive(m.element_type())] {
            let out = smooth(&m, &cfg).unwrap().mesh;
            for e in validate(&out, &reference) {
                prop_assert!(before.contains(&e));
            }
        }
    }

    #[test]
    fn smoothing_commutes_with_similarities(seed in any::<u64>(), angle in 0.0..6.3f64, scale in 0.1..10.0f64) {
        let cfg = SmootherConfig { max_iterations: 4, error_bound: 1e-300, ..SmootherConfig::standard(ElementType::Triangle) };
        let m = mesh(GeneratorKind::JitteredSquareTri, 4, 0.4, seed);
        let rot = planar_rotation(angle);
        let g = |p: &Point| rot * p * scale + Point::new(1.5, -2.0, 0.0);
        let a = smooth(&m.map_vertices(g), &cfg).unwrap().mesh;
        let b = smooth(&m, &cfg).unwrap().mesh.map_vertices(g);
        for (p, q) in a.vertices().iter().zip(b.vertices()) {
            prop_assert!((p - q).norm() < 1e-9 * scale);
        }

        let cfg = SmootherConfig { max_iterations: 3, error_bound: 1e-300, ..SmootherConfig::standard(ElementType::Hex) };
        let m = mesh(GeneratorKind::CubeHex, 2, 0.4, seed);
        let rot = random_rotation(&mut rng(seed));
        let g = |p: &Point| rot * p * scale + Point::new(0.5, 3.0, -1.0);
        let a = smooth(&m.map_vertices(g), &cfg).unwrap().mesh;
        let b = smooth(&m, &cfg).unwrap().mesh.map_vertices(g);
        for (p, q) in a.vertices().iter().zip(b.vertices()) {
            prop_assert!((p - q).norm() < 1e-9 * scale);
        }
    }
}

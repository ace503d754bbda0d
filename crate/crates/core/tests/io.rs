mod common;

use geosmooth::io::{
    format_mesh, generate, parse_mesh, parse_seed, read_mesh, write_mesh, GeneratorKind,
    GeneratorSpec, MeshFormat,
};
use geosmooth::mesh::ElementType;
use geosmooth::quality::mesh_quality;
use geosmooth::Error;
use proptest::prelude::*;

const FORMATS: [MeshFormat; 2] = [MeshFormat::MeditMesh, MeshFormat::VtkLegacyAscii];

const ONE_TRIANGLE: &str = "\
MeshVersionFormatted 2
Dimension 2
# corner tags mark fixed vertices
Vertices
3
0 0 1
1 0 1
0 1 0
Triangles
1
1 2 3 0
End
";

#[test]
fn reads_a_minimal_medit_file() {
    let m = parse_mesh(ONE_TRIANGLE, MeshFormat::MeditMesh).unwrap();
    assert_eq!(m.num_vertices(), 3);
    assert_eq!(m.num_elements(), 1);
    assert_eq!(m.element_type(), ElementType::Triangle);
    assert_eq!(m.dim(), 2);
    assert_eq!(m.boundary_flags(), &[true, true, false]);
}

#[test]
fn reports_line_and_token() {
    let bad = ONE_TRIANGLE.replace("1 0 1", "1 zero 1");
    match parse_mesh(&bad, MeshFormat::MeditMesh) {
        Err(Error::Parse { line, token, .. }) => {
            assert_eq!(line, 7);
            assert_eq!(token, "zero");
        }
        other => panic!("{other:?}"),
    }
    let bad = ONE_TRIANGLE.replace("1 2 3 0", "1 2 4 0");
    assert!(matches!(
        parse_mesh(&bad, MeshFormat::MeditMesh),
        Err(Error::Parse { line: 11, .. })
    ));
}

#[test]
fn rejects_unsupported_and_mixed_elements() {
    let wedge =
        "# vtk DataFile Version 3.0\nw\nASCII\nDATASET UNSTRUCTURED_GRID\nPOINTS 6 double\n\
        0 0 0\n1 0 0\n0 1 0\n0 0 1\n1 0 1\n0 1 1\nCELLS 1 7\n6 0 1 2 3 4 5\nCELL_TYPES 1\n13\n\
        POINT_DATA 6\nSCALARS boundary int 1\nLOOKUP_TABLE default\n1\n1\n1\n1\n1\n1\n";
    assert!(matches!(
        parse_mesh(wedge, MeshFormat::VtkLegacyAscii),
        Err(Error::UnsupportedElementType(_))
    ));

    let mixed =
        "# vtk DataFile Version 3.0\nm\nASCII\nDATASET UNSTRUCTURED_GRID\nPOINTS 5 double\n\
        0 0 0\n1 0 0\n1 1 0\n0 1 0\n2 0 0\nCELLS 2 9\n4 0 1 2 3\n3 1 4 2\nCELL_TYPES 2\n9\n5\n\
        POINT_DATA 5\nSCALARS boundary int 1\nLOOKUP_TABLE default\n1\n1\n1\n1\n1\n";
    assert!(matches!(
        parse_mesh(mixed, MeshFormat::VtkLegacyAscii),
        Err(Error::MixedElementTypes)
    ));

    let mixed = ONE_TRIANGLE.replace("End", "Quadrilaterals\n1\n1 2 3 1 0\nEnd");
    assert!(matches!(
        parse_mesh(&mixed, MeshFormat::MeditMesh),
        Err(Error::MixedElementTypes)
    ));

    let prisms = ONE_TRIANGLE.replace("End", "Prisms\n1\n1 2 3 1 2 3 0\nEnd");
    assert!(matches!(
        parse_mesh(&prisms, MeshFormat::MeditMesh),
        Err(Error::UnsupportedElementType(_))
    ));
}

#[test]
fn skips_auxiliary_medit_sections() {
    let text = ONE_TRIANGLE.replace("End", "Edges\n1\n1 2 5\nCorners\n2\n1\n2\nEnd");
    assert_eq!(
        parse_mesh(&text, MeshFormat::MeditMesh)
            .unwrap()
            .num_elements(),
        1
    );
}

#[test]
fn disk_round_trips_through_files() {
    let m = generate(&GeneratorSpec::new(GeneratorKind::DiskTri, 13, 0.4, 21)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (name, format) in [
        ("d.mesh", MeshFormat::MeditMesh),
        ("d.vtk", MeshFormat::VtkLegacyAscii),
    ] {
        let path = dir.path().join(name);
        assert_eq!(MeshFormat::from_path(&path).unwrap(), format);
        write_mesh(&m, &path, format).unwrap();
        let back = read_mesh(&path).unwrap();
        assert_eq!(back.connectivity(), m.connectivity());
        for (a, b) in back.vertices().iter().zip(m.vertices()) {
            assert!((a - b).norm() <= 1e-15);
        }
        assert_eq!(back, m);
    }
    assert!(read_mesh(dir.path().join("missing.mesh")).is_err());
    assert!(MeshFormat::from_path(std::path::Path::new("a.obj")).is_err());
}

#[test]
fn disk_mesh_matches_its_benchmark_band() {
    let m = generate(&GeneratorSpec::new(GeneratorKind::DiskTri, 13, 0.4, 7)).unwrap();
    assert_eq!(m.num_elements(), 1950);
    let q = mesh_quality(&m).mean;
    assert!(q > 0.2 && q < 0.6, "{q}");
}

#[test]
fn generators_are_deterministic_and_jitter_interior_only() {
    for kind in GeneratorKind::ALL {
        let spec = GeneratorSpec::new(kind, 4, 0.45, 0xfeed);
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap(), "{kind}");
        let plain = generate(&GeneratorSpec {
            jitter: 0.0,
            ..spec
        })
        .unwrap();
        let mut moved = 0;
        for v in 0..a.num_vertices() {
            if a.is_boundary(v) {
                assert_eq!(a.vertices()[v], plain.vertices()[v], "{kind}");
            } else if a.vertices()[v] != plain.vertices()[v] {
                moved += 1;
            }
        }
        if kind != GeneratorKind::TwoTriangleFlip {
            assert!(moved > 0, "{kind}");
        }
    }
}

#[test]
fn generator_specs_are_checked() {
    let bad = [
        GeneratorSpec::new(GeneratorKind::CubeTet, 1, 0.1, 0),
        GeneratorSpec::new(GeneratorKind::CubeTet, 3, 0.5, 0),
        GeneratorSpec::new(GeneratorKind::CubeTet, 3, -0.1, 0),
    ];
    for spec in bad {
        assert!(matches!(generate(&spec), Err(Error::InvalidSpec(_))));
    }
    assert!(matches!(
        "cube-prism".parse::<GeneratorKind>(),
        Err(Error::InvalidSpec(_))
    ));
    for kind in GeneratorKind::ALL {
        assert_eq!(kind.name().parse::<GeneratorKind>().unwrap(), kind);
    }
}

#[test]
fn seeds_accept_decimal_and_hex() {
    assert_eq!(parse_seed("42").unwrap(), 42);
    assert_eq!(parse_seed("0x2A").unwrap(), 42);
    assert_eq!(parse_seed("0xffffffffffffffff").unwrap(), u64::MAX);
    assert!(parse_seed("0xg").is_err());
    assert!(parse_seed("-1").is_err());
}

fn kind() -> impl Strategy<Value = GeneratorKind> {
    prop::sample::select(GeneratorKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_is_identity(k in kind(), res in 2usize..5, jitter in 0.0..0.49f64, seed in any::<u64>()) {
        let m = generate(&GeneratorSpec::new(k, res, jitter, seed)).unwrap();
        for format in FORMATS {
            prop_assert_eq!(&parse_mesh(&format_mesh(&m, format), format).unwrap(), &m);
        }
    }

    #[test]
    fn truncation_is_a_parse_error(k in kind(), seed in any::<u64>(), frac in 0.0..1.0f64) {
        let m = generate(&GeneratorSpec::new(k, 2, 0.3, seed)).unwrap();
        for format in FORMATS {
            let text = format_mesh(&m, format);
            let cut = (frac * text.len() as f64) as usize;
            let prefix = &text[..cut];
            prop_assume!(prefix.trim_end() != text.trim_end());
            let is_parse_error = matches!(parse_mesh(prefix, format), Err(Error::Parse { .. }));
            prop_assert!(is_parse_error);
        }
    }

    #[test]
    fn arbitrary_text_never_panics(s in "\\PC{0,200}") {
        for format in FORMATS {
            let _ = parse_mesh(&s, format);
        }
    }
}

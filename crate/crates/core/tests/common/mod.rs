#![allow(dead_code)]

use std::f64::consts::PI;

use geosmooth::geometry::{point2, Point, Triangle};
use geosmooth::io::{generate, GeneratorKind, GeneratorSpec};
use geosmooth::mesh::{vertex_neighbors, ElementType, Mesh};
use nalgebra::{Rotation3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Planar triangle with vertices in [-1, 1]^2 whose area is not tiny
/// compared to its longest edge.
pub fn random_triangle(rng: &mut ChaCha8Rng) -> Triangle {
    loop {
        let mut p = || point2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let t = Triangle::new(p(), p(), p());
        let l = t.longest_edge();
        if t.area() > 1e-3 * l * l {
            return t;
        }
    }
}

pub fn max_ratio_deviation(t: &Triangle) -> f64 {
    let f = t.frame().unwrap();
    f.ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max)
}

pub fn random_rotation(rng: &mut ChaCha8Rng) -> Rotation3<f64> {
    let axis = Vector3::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    );
    Rotation3::from_axis_angle(
        &nalgebra::Unit::new_normalize(axis),
        rng.gen_range(0.0..2.0 * PI),
    )
}

pub fn planar_rotation(angle: f64) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), angle)
}

/// Star-shaped but non-convex hexagon around one free vertex. The ring mean
/// lies outside the kernel of the star.
pub fn concave_patch() -> Mesh {
    let ring = [
        point2(0.0, -1.0),
        point2(4.0, -3.0),
        point2(1.0, 0.0),
        point2(4.0, 3.0),
        point2(0.0, 1.0),
        point2(-1.0, 0.0),
    ];
    let mut vertices = ring.to_vec();
    vertices.push(point2(0.5, 0.0));
    let tris: Vec<[usize; 3]> = (0..6).map(|i| [i, (i + 1) % 6, 6]).collect();
    Mesh::from_elements(2, vertices, ElementType::Triangle, &tris).unwrap()
}

/// One sweep of plain Laplace smoothing: every free vertex moves to the mean
/// of its edge neighbours, no checks.
pub fn plain_laplace(m: &Mesh) -> Mesh {
    let nb = vertex_neighbors(m);
    let pos = m.vertices();
    let next = (0..m.num_vertices())
        .map(|v| {
            if m.is_boundary(v) || nb[v].is_empty() {
                pos[v]
            } else {
                nb[v].iter().map(|&u| pos[u]).sum::<Point>() / nb[v].len() as f64
            }
        })
        .collect();
    m.with_vertices(next).unwrap()
}

/// Equilateral lattice triangles filling a hexagon of `rings` layers.
pub fn equilateral_hexagon(rings: i32) -> Mesh {
    let s3 = 3f64.sqrt();
    let mut index = std::collections::HashMap::new();
    let mut vertices = Vec::new();
    for a in -rings..=rings {
        for b in -rings..=rings {
            if (a + b).abs() <= rings {
                index.insert((a, b), vertices.len());
                vertices.push(point2(a as f64 + 0.5 * b as f64, s3 / 2.0 * b as f64));
            }
        }
    }
    let mut tris = Vec::new();
    for (&(a, b), &i) in &index {
        if let (Some(&j), Some(&k)) = (index.get(&(a + 1, b)), index.get(&(a, b + 1))) {
            tris.push([i, j, k]);
        }
        if let (Some(&j), Some(&k)) = (index.get(&(a + 1, b)), index.get(&(a + 1, b - 1))) {
            tris.push([i, k, j]);
        }
    }
    tris.sort();
    Mesh::from_elements(2, vertices, ElementType::Triangle, &tris).unwrap()
}

pub fn square_grid(n: usize) -> Mesh {
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let vertices = (0..=n)
        .flat_map(|j| (0..=n).map(move |i| point2(i as f64, j as f64)))
        .collect();
    let mut quads = Vec::new();
    for j in 0..n {
        for i in 0..n {
            quads.push([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::from_elements(2, vertices, ElementType::Quad, &quads).unwrap()
}

pub fn regular_tet_points() -> [Point; 4] {
    let s3 = 3f64.sqrt();
    [
        Point::new(0.0, 0.0, 0.0),
        Point::new(1.0, 0.0, 0.0),
        Point::new(0.5, s3 / 2.0, 0.0),
        Point::new(0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt()),
    ]
}

pub fn unit_cube_points() -> [Point; 8] {
    [
        Point::new(0.0, 0.0, 0.0),
        Point::new(1.0, 0.0, 0.0),
        Point::new(1.0, 1.0, 0.0),
        Point::new(0.0, 1.0, 0.0),
        Point::new(0.0, 0.0, 1.0),
        Point::new(1.0, 0.0, 1.0),
        Point::new(1.0, 1.0, 1.0),
        Point::new(0.0, 1.0, 1.0),
    ]
}

/// A single element with every vertex free.
pub fn free_element(t: ElementType, pts: &[Point], dim: usize) -> Mesh {
    Mesh::with_boundary(dim, pts.to_vec(), t, (0..pts.len()).collect(), []).unwrap()
}

/// The four jittered meshes used for the smoothing benchmarks.
pub fn desk_meshes() -> Vec<(&'static str, Mesh)> {
    [
        (
            "jittered square, triangles",
            GeneratorKind::JitteredSquareTri,
            20,
        ),
        (
            "square with hole, quads",
            GeneratorKind::QuadGridWithHole,
            10,
        ),
        ("cube, tetrahedra", GeneratorKind::CubeTet, 6),
        ("cube, hexahedra", GeneratorKind::CubeHex, 6),
    ]
    .into_iter()
    .map(|(name, kind, res)| {
        (
            name,
            generate(&GeneratorSpec::new(kind, res, 0.4, 7)).unwrap(),
        )
    })
    .collect()
}

/// Classical fourth-order Runge-Kutta for `y' = f(y)`.
pub fn rk4_step(y: [f64; 3], h: f64, f: impl Fn([f64; 3]) -> [f64; 3]) -> [f64; 3] {
    let add =
        |a: [f64; 3], b: [f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    let k1 = f(y);
    let k2 = f(add(y, k1, h / 2.0));
    let k3 = f(add(y, k2, h / 2.0));
    let k4 = f(add(y, k3, h));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

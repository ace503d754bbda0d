//! Medit `.mesh` ASCII files.
//!
//! Vertex references are the boundary marker: a non-zero tag fixes the
//! vertex. Element references are written as 0 and ignored on input.

use std::fmt::Write;

use super::fmt_coord;
use super::tokens::{error_at, Tokens};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mesh::{ElementType, Mesh};

fn element_keyword(t: ElementType) -> &'static str {
    match t {
        ElementType::Triangle => "Triangles",
        ElementType::Quad => "Quadrilaterals",
        ElementType::Tet => "Tetrahedra",
        ElementType::Hex => "Hexahedra",
    }
}

fn element_type_of(keyword: &str) -> Option<ElementType> {
    [
        ElementType::Triangle,
        ElementType::Quad,
        ElementType::Tet,
        ElementType::Hex,
    ]
    .into_iter()
    .find(|&t| element_keyword(t) == keyword)
}

/// Sections that are read and dropped, with the number of integers per entry.
fn skipped_section(keyword: &str) -> Option<usize> {
    match keyword {
        "Edges" => Some(3),
        "Corners" | "Ridges" | "RequiredVertices" | "RequiredEdges" => Some(1),
        _ => None,
    }
}

const UNSUPPORTED: [&str; 3] = ["Prisms", "Pyramids", "Pentahedra"];

pub fn read_medit(text: &str) -> Result<Mesh> {
    let mut tok = Tokens::new(text, Some('#'));
    let mut dim = None;
    let mut vertices: Vec<Point> = Vec::new();
    let mut boundary = Vec::new();
    let mut have_vertices = false;
    let mut elements: Option<(ElementType, Vec<usize>)> = None;

    loop {
        let (line, keyword) = tok.expect_token("a keyword or `End`")?;
        match keyword {
            "End" => break,
            "MeshVersionFormatted" => {
                let (l, v) = tok.expect_token("a format version")?;
                if !matches!(v, "1" | "2") {
                    return Err(error_at(l, v, "only ASCII versions 1 and 2 are supported"));
                }
            }
            "Dimension" => {
                let (l, d) = tok.expect_token("a dimension")?;
                dim = Some(match d {
                    "2" => 2,
                    "3" => 3,
                    _ => return Err(error_at(l, d, "dimension must be 2 or 3")),
                });
            }
            "Vertices" => {
                let d =
                    dim.ok_or_else(|| error_at(line, keyword, "`Dimension` must come first"))?;
                if have_vertices {
                    return Err(error_at(line, keyword, "duplicate `Vertices` section"));
                }
                have_vertices = true;
                let n: usize = tok.expect("a vertex count")?;
                vertices.reserve(n);
                for _ in 0..n {
                    let mut p = Point::zeros();
                    for k in 0..d {
                        p[k] = tok.expect_finite("a coordinate")?;
                    }
                    let tag: i64 = tok.expect("a vertex reference")?;
                    vertices.push(p);
                    if tag != 0 {
                        boundary.push(vertices.len() - 1);
                    }
                }
            }
            k if element_type_of(k).is_some() => {
                let t = element_type_of(k).unwrap();
                let n: usize = tok.expect("an element count")?;
                let mut conn = Vec::with_capacity(n * t.arity());
                for _ in 0..n {
                    for _ in 0..t.arity() {
                        let (l, s) = tok.expect_token("a vertex index")?;
                        match s.parse::<usize>() {
                            Ok(i) if (1..=vertices.len()).contains(&i) => conn.push(i - 1),
                            _ => return Err(error_at(l, s, "vertex index out of range")),
                        }
                    }
                    let _: i64 = tok.expect("an element reference")?;
                }
                if n == 0 {
                    continue;
                }
                match &mut elements {
                    None => elements = Some((t, conn)),
                    Some((existing, c)) if *existing == t => c.extend(conn),
                    Some(_) => return Err(Error::MixedElementTypes),
                }
            }
            k if UNSUPPORTED.contains(&k) => {
                let n: usize = tok.expect("an element count")?;
                if n > 0 {
                    return Err(Error::UnsupportedElementType(k.to_string()));
                }
            }
            k if skipped_section(k).is_some() => {
                let per = skipped_section(k).unwrap();
                let n: usize = tok.expect("an entry count")?;
                for _ in 0..n * per {
                    let _: i64 = tok.expect("an integer")?;
                }
            }
            _ => return Err(error_at(line, keyword, "unknown keyword")),
        }
    }
    if let Some((l, t)) = tok.next() {
        return Err(error_at(l, t, "content after `End`"));
    }
    let dim = dim.ok_or_else(|| tok.eof_error("a `Dimension` section"))?;
    let (element_type, connectivity) =
        elements.ok_or_else(|| tok.eof_error("an element section"))?;
    Mesh::with_boundary(dim, vertices, element_type, connectivity, boundary)
}

pub fn write_medit(m: &Mesh) -> String {
    let mut s = String::new();
    let dim = m.dim();
    writeln!(
        s,
        "MeshVersionFormatted 2\n\nDimension {dim}\n\nVertices\n{}",
        m.num_vertices()
    )
    .unwrap();
    for (i, p) in m.vertices().iter().enumerate() {
        for k in 0..dim {
            s.push_str(&fmt_coord(p[k]));
            s.push(' ');
        }
        writeln!(s, "{}", u8::from(m.is_boundary(i))).unwrap();
    }
    writeln!(
        s,
        "\n{}\n{}",
        element_keyword(m.element_type()),
        m.num_elements()
    )
    .unwrap();
    for el in m.elements() {
        for &v in el {
            write!(s, "{} ", v + 1).unwrap();
        }
        s.push_str("0\n");
    }
    s.push_str("\nEnd\n");
    s
}

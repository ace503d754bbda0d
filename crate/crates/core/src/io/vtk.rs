//! Legacy VTK ASCII unstructured grids.
//!
//! Boundary flags travel as an integer point array named `boundary`, which
//! the reader requires: a legacy file has no end marker, so the array is what
//! tells a complete file from a truncated one.

use std::fmt::Write;

use super::fmt_coord;
use super::tokens::{error_at, Tokens};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mesh::{ElementType, Mesh};

fn cell_type(t: ElementType) -> u32 {
    match t {
        ElementType::Triangle => 5,
        ElementType::Quad => 9,
        ElementType::Tet => 10,
        ElementType::Hex => 12,
    }
}

fn element_type_of(code: u32) -> Option<ElementType> {
    match code {
        5 => Some(ElementType::Triangle),
        9 => Some(ElementType::Quad),
        10 => Some(ElementType::Tet),
        12 => Some(ElementType::Hex),
        _ => None,
    }
}

const BOUNDARY_ARRAY: &str = "boundary";

pub fn read_vtk(text: &str) -> Result<Mesh> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if !header.starts_with("# vtk DataFile Version") {
        return Err(error_at(1, header, "missing VTK header"));
    }
    if lines.next().is_none() {
        return Err(error_at(2, "<end of file>", "missing title line"));
    }
    // tokens start after the two header lines; line numbers are offset below
    let rest_start = text
        .match_indices('\n')
        .nth(1)
        .map_or(text.len(), |(i, _)| i + 1);
    let mut tok = Tokens::new(&text[rest_start..], None);
    let off = |l: usize| l + 2;
    let next = |tok: &mut Tokens, what: &str| -> Result<(usize, String)> {
        let (l, t) = tok.expect_token(what)?;
        Ok((off(l), t.to_string()))
    };

    let (l, t) = next(&mut tok, "`ASCII`")?;
    if t != "ASCII" {
        return Err(error_at(l, &t, "only ASCII files are supported"));
    }
    let (l, t) = next(&mut tok, "`DATASET`")?;
    if t != "DATASET" {
        return Err(error_at(l, &t, "expected `DATASET`"));
    }
    let (l, t) = next(&mut tok, "a dataset type")?;
    if t != "UNSTRUCTURED_GRID" {
        return Err(error_at(l, &t, "only UNSTRUCTURED_GRID is supported"));
    }

    let mut points: Option<Vec<Point>> = None;
    let mut cells: Option<Vec<Vec<usize>>> = None;
    let mut types: Option<(usize, Vec<u32>)> = None;
    let mut boundary: Option<Vec<usize>> = None;
    // (attribute kind, entry count) of the current data section
    let mut section: Option<(&str, usize)> = None;

    let count = |tok: &mut Tokens, what: &str| -> Result<usize> {
        let (l, t) = tok.expect_token(what)?;
        t.parse()
            .map_err(|_| error_at(off(l), t, &format!("expected {what}")))
    };
    let finite = |tok: &mut Tokens| -> Result<f64> {
        let (l, t) = tok.expect_token("a coordinate")?;
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(error_at(off(l), t, "expected a coordinate")),
        }
    };

    while let Some((l, keyword)) = tok.next() {
        let l = off(l);
        match keyword {
            "POINTS" => {
                let n = count(&mut tok, "a point count")?;
                let (tl, ty) = next(&mut tok, "a data type")?;
                if !matches!(ty.as_str(), "float" | "double") {
                    return Err(error_at(tl, &ty, "points must be float or double"));
                }
                let mut pts = Vec::with_capacity(n);
                for _ in 0..n {
                    pts.push(Point::new(
                        finite(&mut tok)?,
                        finite(&mut tok)?,
                        finite(&mut tok)?,
                    ));
                }
                points = Some(pts);
            }
            "CELLS" => {
                let n = count(&mut tok, "a cell count")?;
                let size = count(&mut tok, "a cell list size")?;
                let nv = points.as_ref().map_or(0, Vec::len);
                let mut list = Vec::with_capacity(n);
                let mut used = 0;
                for _ in 0..n {
                    let k = count(&mut tok, "a cell size")?;
                    let mut cell = Vec::with_capacity(k);
                    for _ in 0..k {
                        let (il, s) = tok.expect_token("a point index")?;
                        match s.parse::<usize>() {
                            Ok(i) if i < nv => cell.push(i),
                            _ => return Err(error_at(off(il), s, "point index out of range")),
                        }
                    }
                    used += k + 1;
                    list.push(cell);
                }
                if used != size {
                    return Err(error_at(
                        l,
                        keyword,
                        "cell list size does not match its contents",
                    ));
                }
                cells = Some(list);
            }
            "CELL_TYPES" => {
                let n = count(&mut tok, "a cell count")?;
                let mut codes = Vec::with_capacity(n);
                for _ in 0..n {
                    let (cl, s) = tok.expect_token("a cell type")?;
                    codes.push(
                        s.parse::<u32>()
                            .map_err(|_| error_at(off(cl), s, "expected a cell type"))?,
                    );
                }
                types = Some((l, codes));
            }
            "POINT_DATA" | "CELL_DATA" => {
                section = Some((keyword, count(&mut tok, "an entry count")?));
            }
            "SCALARS" => {
                let (kind, n) = section
                    .ok_or_else(|| error_at(l, keyword, "SCALARS outside a data section"))?;
                let (_, name) = next(&mut tok, "an array name")?;
                let (_, _ty) = next(&mut tok, "a data type")?;
                // optional component count, then LOOKUP_TABLE
                let mut ncomp = 1;
                let (ll, mut t) = next(&mut tok, "`LOOKUP_TABLE`")?;
                if let Ok(c) = t.parse::<usize>() {
                    ncomp = c;
                    t = next(&mut tok, "`LOOKUP_TABLE`")?.1;
                }
                if t != "LOOKUP_TABLE" {
                    return Err(error_at(ll, &t, "expected `LOOKUP_TABLE`"));
                }
                next(&mut tok, "a lookup table name")?;
                let is_boundary = kind == "POINT_DATA" && name == BOUNDARY_ARRAY;
                let mut flags = Vec::new();
                for i in 0..n * ncomp {
                    let (vl, s) = tok.expect_token("a scalar value")?;
                    let v: f64 = s
                        .parse()
                        .map_err(|_| error_at(off(vl), s, "expected a number"))?;
                    if is_boundary && v != 0.0 {
                        flags.push(i);
                    }
                }
                if is_boundary {
                    if ncomp != 1 {
                        return Err(error_at(l, &name, "boundary array must have one component"));
                    }
                    boundary = Some(flags);
                }
            }
            _ => return Err(error_at(l, keyword, "unknown section")),
        }
    }

    let points = points.ok_or_else(|| tok.eof_error("a POINTS section"))?;
    let cells = cells.ok_or_else(|| tok.eof_error("a CELLS section"))?;
    let (tl, codes) = types.ok_or_else(|| tok.eof_error("a CELL_TYPES section"))?;
    let boundary = boundary.ok_or_else(|| tok.eof_error("a `boundary` point array"))?;
    if codes.len() != cells.len() {
        return Err(error_at(
            tl,
            "CELL_TYPES",
            "cell type count differs from cell count",
        ));
    }
    let mut element_type = None;
    for &code in &codes {
        let t = element_type_of(code)
            .ok_or_else(|| Error::UnsupportedElementType(format!("VTK cell type {code}")))?;
        match element_type {
            None => element_type = Some(t),
            Some(e) if e != t => return Err(Error::MixedElementTypes),
            _ => {}
        }
    }
    let element_type =
        element_type.ok_or_else(|| error_at(tl, "CELL_TYPES", "mesh has no cells"))?;
    let mut connectivity = Vec::with_capacity(cells.len() * element_type.arity());
    for cell in &cells {
        if cell.len() != element_type.arity() {
            return Err(error_at(tl, "CELLS", "cell size does not match its type"));
        }
        connectivity.extend(cell);
    }
    let planar = !element_type.is_volume() && points.iter().all(|p| p.z == 0.0);
    Mesh::with_boundary(
        if planar { 2 } else { 3 },
        points,
        element_type,
        connectivity,
        boundary,
    )
}

pub fn write_vtk(m: &Mesh) -> String {
    let mut s = String::new();
    let arity = m.element_type().arity();
    writeln!(
        s,
        "# vtk DataFile Version 3.0\ngeosmooth mesh\nASCII\nDATASET UNSTRUCTURED_GRID"
    )
    .unwrap();
    writeln!(s, "POINTS {} double", m.num_vertices()).unwrap();
    for p in m.vertices() {
        writeln!(
            s,
            "{} {} {}",
            fmt_coord(p.x),
            fmt_coord(p.y),
            fmt_coord(p.z)
        )
        .unwrap();
    }
    writeln!(
        s,
        "CELLS {} {}",
        m.num_elements(),
        m.num_elements() * (arity + 1)
    )
    .unwrap();
    for el in m.elements() {
        write!(s, "{arity}").unwrap();
        for v in el {
            write!(s, " {v}").unwrap();
        }
        s.push('\n');
    }
    writeln!(s, "CELL_TYPES {}", m.num_elements()).unwrap();
    let code = cell_type(m.element_type());
    for _ in 0..m.num_elements() {
        writeln!(s, "{code}").unwrap();
    }
    writeln!(
        s,
        "POINT_DATA {}\nSCALARS {BOUNDARY_ARRAY} int 1\nLOOKUP_TABLE default",
        m.num_vertices()
    )
    .unwrap();
    for &b in m.boundary_flags() {
        writeln!(s, "{}", u8::from(b)).unwrap();
    }
    s
}

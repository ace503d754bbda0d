//! Mesh files and test mesh generators.

mod generate;
mod medit;
mod tokens;
mod vtk;

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::Mesh;

pub use generate::{generate, parse_seed, GeneratorKind, GeneratorSpec};
pub use medit::{read_medit, write_medit};
pub use vtk::{read_vtk, write_vtk};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    MeditMesh,
    VtkLegacyAscii,
}

impl MeshFormat {
    /// `.mesh` or `.vtk`.
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("mesh") => Ok(Self::MeditMesh),
            Some(e) if e.eq_ignore_ascii_case("vtk") => Ok(Self::VtkLegacyAscii),
            _ => Err(Error::InvalidParams(format!(
                "cannot infer mesh format from {}; use .mesh or .vtk",
                path.display()
            ))),
        }
    }
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let format = MeshFormat::from_path(path)?;
    let text = fs::read_to_string(path)?;
    parse_mesh(&text, format)
}

pub fn parse_mesh(text: &str, format: MeshFormat) -> Result<Mesh> {
    match format {
        MeshFormat::MeditMesh => read_medit(text),
        MeshFormat::VtkLegacyAscii => read_vtk(text),
    }
}

pub fn format_mesh(m: &Mesh, format: MeshFormat) -> String {
    match format {
        MeshFormat::MeditMesh => write_medit(m),
        MeshFormat::VtkLegacyAscii => write_vtk(m),
    }
}

pub fn write_mesh(m: &Mesh, path: impl AsRef<Path>, format: MeshFormat) -> Result<()> {
    fs::write(path, format_mesh(m, format))?;
    Ok(())
}

/// 17 significant digits, enough to round-trip any `f64`.
pub(crate) fn fmt_coord(x: f64) -> String {
    format!("{x:.16e}")
}

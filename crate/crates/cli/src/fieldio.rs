//! Raw field files: little-endian `f64`, x1 fastest, vector components one
//! after another. Shape lives in a `key=value` sidecar at `<file>.meta`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anisoreg_core::{Grid3, ScalarField, VectorField};

use crate::emit::write_atomic;
use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Scalar(ScalarField),
    Vector(VectorField),
}

impl Field {
    pub fn grid(&self) -> Grid3 {
        match self {
            Field::Scalar(f) => f.grid(),
            Field::Vector(u) => u.grid(),
        }
    }

    /// The field itself, or the pointwise Euclidean magnitude of a vector.
    pub fn magnitude(&self) -> ScalarField {
        match self {
            Field::Scalar(f) => f.clone(),
            Field::Vector(u) => u.magnitude(),
        }
    }
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

fn meta_text(grid: Grid3, components: usize) -> String {
    let [n1, n2, n3] = grid.dims();
    let mut s = String::new();
    let _ = writeln!(s, "n1={n1}");
    let _ = writeln!(s, "n2={n2}");
    let _ = writeln!(s, "n3={n3}");
    let _ = writeln!(s, "components={components}");
    let _ = writeln!(s, "order=x1-fastest");
    s
}

fn write_raw(path: &Path, grid: Grid3, parts: &[&[f64]]) -> Result<()> {
    let mut bytes = Vec::with_capacity(parts.len() * grid.len() * 8);
    for part in parts {
        for v in *part {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    write_atomic(path, &bytes)?;
    write_atomic(&meta_path(path), meta_text(grid, parts.len()).as_bytes())
}

pub fn write_scalar(path: &Path, f: &ScalarField) -> Result<()> {
    write_raw(path, f.grid(), &[f.values()])
}

pub fn write_vector(path: &Path, u: &VectorField) -> Result<()> {
    let [a, b, c] = u.components();
    write_raw(path, u.grid(), &[a.values(), b.values(), c.values()])
}

struct Meta {
    grid: Grid3,
    components: usize,
}

fn read_meta(path: &Path) -> Result<Meta> {
    let meta = meta_path(path);
    let text = std::fs::read_to_string(&meta).map_err(|e| CliError::io(&meta, e))?;
    let (mut n, mut components, mut order) = ([None; 3], None, None);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| CliError::invalid(format!("{}:{}: {what}", meta.display(), lineno + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        let number = || value.parse::<usize>().map_err(|_| bad(&format!("{key} must be a positive integer")));
        match key {
            "n1" => n[0] = Some(number()?),
            "n2" => n[1] = Some(number()?),
            "n3" => n[2] = Some(number()?),
            "components" => components = Some(number()?),
            "order" => order = Some(value.to_string()),
            _ => return Err(bad(&format!("unknown key '{key}'"))),
        }
    }
    let missing = |k: &str| CliError::invalid(format!("{}: missing '{k}'", meta.display()));
    let dims = [
        n[0].ok_or_else(|| missing("n1"))?,
        n[1].ok_or_else(|| missing("n2"))?,
        n[2].ok_or_else(|| missing("n3"))?,
    ];
    let components = components.ok_or_else(|| missing("components"))?;
    if components != 1 && components != 3 {
        return Err(CliError::invalid(format!(
            "{}: components must be 1 or 3, got {components}",
            meta.display()
        )));
    }
    if let Some(o) = order {
        if o != "x1-fastest" {
            return Err(CliError::invalid(format!(
                "{}: only order=x1-fastest is supported, got '{o}'",
                meta.display()
            )));
        }
    }
    let grid = Grid3::new(dims[0], dims[1], dims[2])
        .map_err(|e| CliError::invalid(format!("{}: {e}", meta.display())))?;
    Ok(Meta { grid, components })
}

/// Reads a field file and its sidecar.
pub fn read_field(path: &Path) -> Result<Field> {
    let meta = read_meta(path)?;
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let n = meta.grid.len();
    let expected = n * meta.components * 8;
    if bytes.len() != expected {
        return Err(CliError::invalid(format!(
            "{}: expected {expected} bytes for {:?} x {} components, found {}",
            path.display(),
            meta.grid.dims(),
            meta.components,
            bytes.len()
        )));
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunks of eight")))
        .collect();
    let wrap = |e: anisoreg_core::Error| CliError::invalid(format!("{}: {e}", path.display()));
    let mut parts = values.chunks_exact(n).map(|c| ScalarField::new(meta.grid, c.to_vec()));
    let mut next = || parts.next().expect("component count checked").map_err(wrap);
    if meta.components == 1 {
        Ok(Field::Scalar(next()?))
    } else {
        let (a, b, c) = (next()?, next()?, next()?);
        Ok(Field::Vector(VectorField::new(a, b, c).map_err(wrap)?))
    }
}

pub fn read_vector(path: &Path) -> Result<VectorField> {
    match read_field(path)? {
        Field::Vector(u) => Ok(u),
        Field::Scalar(_) => Err(CliError::invalid(format!(
            "{}: expected a 3-component velocity field, found a scalar field",
            path.display()
        ))),
    }
}

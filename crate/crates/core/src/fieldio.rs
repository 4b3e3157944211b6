//! Field files and CSV export.
//!
//! A field file is a single-line JSON header (dims, shape, spacing, origin,
//! periodicity, kind, components) terminated by a newline, followed by a raw
//! little-endian 64-bit float payload in row-major node order (last axis
//! fastest). Symmetric-matrix fields store the packed upper triangle per
//! node, rows first: (0,0), (0,1), ..., (1,1), (1,2), ...

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{MetricGrid, ScalarField, SymMatrixField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub dims: usize,
    pub shape: Vec<usize>,
    pub spacing: Vec<f64>,
    pub origin: Vec<f64>,
    pub periodic: Vec<bool>,
    pub kind: String,
    pub components: usize,
}

impl FieldHeader {
    fn for_grid(grid: &MetricGrid, kind: &str, components: usize) -> Self {
        FieldHeader {
            dims: grid.dim(),
            shape: grid.shape().to_vec(),
            spacing: grid.spacing().to_vec(),
            origin: grid.origin().to_vec(),
            periodic: grid.periodic().to_vec(),
            kind: kind.to_string(),
            components,
        }
    }

    pub fn matches_grid(&self, grid: &MetricGrid) -> Result<()> {
        if self.shape != grid.shape() {
            return Err(Error::DimensionMismatch(format!(
                "file shape {:?} vs grid shape {:?}",
                self.shape,
                grid.shape()
            )));
        }
        Ok(())
    }
}

fn write_payload(w: &mut impl Write, header: &FieldHeader, data: &[f64]) -> Result<()> {
    let mut line = serde_json::to_string(header)?;
    line.push('\n');
    w.write_all(line.as_bytes())?;
    for v in data {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_payload(path: &Path) -> Result<(FieldHeader, Vec<f64>)> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header_bytes = Vec::new();
    let mut one = [0u8; 1];
    loop {
        let n = r.read(&mut one)?;
        if n == 0 {
            return Err(Error::Parse {
                path: path.display().to_string(),
                msg: "missing newline after the JSON header".into(),
            });
        }
        if one[0] == b'\n' {
            break;
        }
        header_bytes.push(one[0]);
    }
    let header: FieldHeader =
        serde_json::from_slice(&header_bytes).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
    let expected: usize = header.shape.iter().product::<usize>() * header.components;
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != expected * 8 {
        return Err(Error::Parse {
            path: path.display().to_string(),
            msg: format!(
                "payload holds {} bytes, expected {} ({} values)",
                raw.len(),
                expected * 8,
                expected
            ),
        });
    }
    let data = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((header, data))
}

pub fn write_scalar_field(
    path: impl AsRef<Path>,
    grid: &MetricGrid,
    field: &ScalarField,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let header = FieldHeader::for_grid(grid, "scalar", 1);
    write_payload(&mut w, &header, field.values())
}

pub fn read_scalar_field(path: impl AsRef<Path>) -> Result<(FieldHeader, Vec<f64>)> {
    let (header, data) = read_payload(path.as_ref())?;
    if header.kind != "scalar" || header.components != 1 {
        return Err(Error::Parse {
            path: path.as_ref().display().to_string(),
            msg: format!("expected a scalar field, found kind '{}'", header.kind),
        });
    }
    Ok((header, data))
}

/// Read a scalar field and bind it to the given grid (shape-checked).
pub fn read_scalar_field_on(path: impl AsRef<Path>, grid: &MetricGrid) -> Result<ScalarField> {
    let (header, data) = read_scalar_field(path)?;
    header.matches_grid(grid)?;
    ScalarField::from_values(grid, data)
}

pub fn write_sym_matrix_field(
    path: impl AsRef<Path>,
    grid: &MetricGrid,
    field: &SymMatrixField,
) -> Result<()> {
    let n = grid.dim();
    let mut w = BufWriter::new(File::create(path)?);
    let header = FieldHeader::for_grid(grid, "sym_matrix", n * (n + 1) / 2);
    let mut data = Vec::with_capacity(grid.num_nodes() * n * (n + 1) / 2);
    for node in 0..grid.num_nodes() {
        data.extend_from_slice(field.node(node).packed());
    }
    write_payload(&mut w, &header, &data)
}

pub fn read_sym_matrix_field_on(
    path: impl AsRef<Path>,
    grid: &MetricGrid,
) -> Result<SymMatrixField> {
    let (header, data) = read_payload(path.as_ref())?;
    let n = grid.dim();
    let tri = n * (n + 1) / 2;
    if header.kind != "sym_matrix" || header.components != tri {
        return Err(Error::Parse {
            path: path.as_ref().display().to_string(),
            msg: format!(
                "expected a sym_matrix field with {} components, found '{}' with {}",
                tri, header.kind, header.components
            ),
        });
    }
    header.matches_grid(grid)?;
    let mut out = SymMatrixField::zeros(grid);
    for node in 0..grid.num_nodes() {
        let packed = data[node * tri..(node + 1) * tri].to_vec();
        out.set_node(node, &crate::linalg::SymMatrix::from_packed(n, packed)?);
    }
    Ok(out)
}

/// Plot-ready CSV: node coordinates followed by one column per named field.
pub fn export_csv(
    path: impl AsRef<Path>,
    grid: &MetricGrid,
    fields: &[(&str, &ScalarField)],
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let axes = ["x", "y", "z"];
    let mut cols: Vec<String> = axes[..grid.dim()].iter().map(|s| s.to_string()).collect();
    cols.extend(fields.iter().map(|(name, _)| name.to_string()));
    writeln!(w, "{}", cols.join(","))?;
    for node in 0..grid.num_nodes() {
        let mut row: Vec<String> = grid
            .coords(node)
            .iter()
            .map(|v| format!("{v:.17e}"))
            .collect();
        for (_, f) in fields {
            row.push(format!("{:.17e}", f.get(node)));
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymMatrix;

    #[test]
    fn scalar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.bin");
        let grid =
            MetricGrid::flat(&[6, 5], &[0.0, 0.0], &[1.0, 1.0], &[false, false]).unwrap();
        let f = ScalarField::from_fn(&grid, |x| x[0] * 3.0 - x[1] + 0.125);
        write_scalar_field(&path, &grid, &f).unwrap();
        let back = read_scalar_field_on(&path, &grid).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn sym_matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("chi.bin");
        let grid =
            MetricGrid::flat(&[5, 5], &[0.0, 0.0], &[1.0, 1.0], &[false, false]).unwrap();
        let f = SymMatrixField::from_fn(&grid, |x| {
            SymMatrix::from_fn(2, |i, j| x[0] + (i + j) as f64)
        });
        write_sym_matrix_field(&path, &grid, &f).unwrap();
        let back = read_sym_matrix_field_on(&path, &grid).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.bin");
        let grid =
            MetricGrid::flat(&[6, 5], &[0.0, 0.0], &[1.0, 1.0], &[false, false]).unwrap();
        write_scalar_field(&path, &grid, &ScalarField::zeros(&grid)).unwrap();
        let other =
            MetricGrid::flat(&[5, 5], &[0.0, 0.0], &[1.0, 1.0], &[false, false]).unwrap();
        assert!(read_scalar_field_on(&path, &other).is_err());
    }

    #[test]
    fn truncated_payload_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.bin");
        let grid =
            MetricGrid::flat(&[5, 5], &[0.0, 0.0], &[1.0, 1.0], &[false, false]).unwrap();
        write_scalar_field(&path, &grid, &ScalarField::zeros(&grid)).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 8]).unwrap();
        assert!(matches!(
            read_scalar_field_on(&path, &grid),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let grid =
            MetricGrid::flat(&[5, 5], &[0.0, 0.0], &[1.0, 1.0], &[false, false]).unwrap();
        let f = ScalarField::constant(&grid, 2.0);
        export_csv(&path, &grid, &[("value", &f)]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x,y,value");
        assert_eq!(text.lines().count(), 26);
    }
}

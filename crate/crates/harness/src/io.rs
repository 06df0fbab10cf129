//! JSON serialization of frame pairs in a canonical form: keys sorted,
//! every float printed with 17 significant digits so values round-trip
//! bit-exactly, matrices flattened row-major.  Parsing reports the exact
//! field path of the first violation.

use nalgebra::DMatrix;
use serde_json::Value;

use ovpframe_core::error::{FrameError, Result};
use ovpframe_core::frame::FramePair;
use ovpframe_core::space::{Exponent, SpaceDesc};

/// 17 significant digits: enough to reproduce any finite double exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_exponent(r: Exponent) -> String {
    match r {
        Exponent::Finite(v) => fmt_f64(v),
        Exponent::Inf => "\"inf\"".to_string(),
    }
}

fn fmt_flat(values: impl Iterator<Item = f64>) -> String {
    let body: Vec<String> = values.map(fmt_f64).collect();
    format!("[{}]", body.join(","))
}

/// Row-major flattening of one matrix.
fn fmt_matrix(m: &DMatrix<f64>) -> String {
    fmt_flat((0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]))
}

fn fmt_matrix_list(ms: &[DMatrix<f64>]) -> String {
    let body: Vec<String> = ms.iter().map(fmt_matrix).collect();
    format!("[{}]", body.join(","))
}

fn fmt_space(s: SpaceDesc) -> String {
    format!("{{\"dim\":{},\"r\":{}}}", s.dim, fmt_exponent(s.r))
}

/// Canonical frame serialization; object keys appear in sorted order.
pub fn frame_to_json(f: &FramePair) -> String {
    format!(
        "{{\"A\":{},\"Psi\":{},\"X\":{},\"Y\":{},\"p\":{}}}",
        fmt_matrix_list(f.a()),
        fmt_matrix_list(f.psi()),
        fmt_space(f.x()),
        fmt_space(f.y()),
        fmt_f64(f.p())
    )
}

/// Canonical serialization of a related couple of frames.
pub fn couple_to_json(f: &FramePair, g: &FramePair) -> String {
    format!(
        "{{\"first\":{},\"second\":{}}}",
        frame_to_json(f),
        frame_to_json(g)
    )
}

fn schema_err(path: &str, message: impl AsRef<str>) -> FrameError {
    FrameError::InvalidParameter {
        context: format!("field \"{path}\": {}", message.as_ref()),
    }
}

fn get<'v>(obj: &'v Value, path: &str, key: &str) -> Result<&'v Value> {
    let map = obj
        .as_object()
        .ok_or_else(|| schema_err(path, "expected a JSON object"))?;
    map.get(key).ok_or_else(|| {
        let at = if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
        schema_err(&at, "missing")
    })
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| schema_err(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(schema_err(path, "expected a finite number"));
    }
    Ok(x)
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema_err(path, "expected a nonnegative integer"))
}

fn as_exponent(v: &Value, path: &str) -> Result<Exponent> {
    if let Some(text) = v.as_str() {
        if text == "inf" {
            return Ok(Exponent::Inf);
        }
        return Err(schema_err(path, "expected a number or the string \"inf\""));
    }
    let x = as_f64(v, path)?;
    if x < 1.0 {
        return Err(schema_err(path, format!("norm exponent must satisfy r >= 1, got {x}")));
    }
    Ok(Exponent::Finite(x))
}

fn as_space(v: &Value, path: &str) -> Result<SpaceDesc> {
    let dim = as_usize(get(v, path, "dim")?, &join(path, "dim"))?;
    if dim == 0 {
        return Err(schema_err(&join(path, "dim"), "dimension must be positive"));
    }
    let r = as_exponent(get(v, path, "r")?, &join(path, "r"))?;
    SpaceDesc::new(dim, r)
}

fn as_matrix_list(
    v: &Value,
    path: &str,
    rows: usize,
    cols: usize,
) -> Result<Vec<DMatrix<f64>>> {
    let list = v
        .as_array()
        .ok_or_else(|| schema_err(path, "expected an array of matrices"))?;
    if list.is_empty() {
        return Err(schema_err(path, "expected at least one matrix"));
    }
    let mut out = Vec::with_capacity(list.len());
    for (i, entry) in list.iter().enumerate() {
        let at = format!("{path}[{i}]");
        let flat = entry
            .as_array()
            .ok_or_else(|| schema_err(&at, "expected a flat row-major array"))?;
        if flat.len() != rows * cols {
            return Err(schema_err(
                &at,
                format!("expected {}x{} = {} entries, got {}", rows, cols, rows * cols, flat.len()),
            ));
        }
        let mut data = Vec::with_capacity(flat.len());
        for (k, cell) in flat.iter().enumerate() {
            data.push(as_f64(cell, &format!("{at}[{k}]"))?);
        }
        out.push(DMatrix::from_row_slice(rows, cols, &data));
    }
    Ok(out)
}

fn frame_from_value(v: &Value, path: &str) -> Result<FramePair> {
    let p = as_f64(get(v, path, "p")?, &join(path, "p"))?;
    if p < 1.0 {
        return Err(schema_err(
            &join(path, "p"),
            format!("sequence exponent must satisfy 1 <= p < inf, got {p}"),
        ));
    }
    let x = as_space(get(v, path, "X")?, &join(path, "X"))?;
    let y = as_space(get(v, path, "Y")?, &join(path, "Y"))?;
    let a = as_matrix_list(get(v, path, "A")?, &join(path, "A"), y.dim, x.dim)?;
    let psi = as_matrix_list(get(v, path, "Psi")?, &join(path, "Psi"), x.dim, y.dim)?;
    if a.len() != psi.len() {
        return Err(schema_err(
            path,
            format!("\"A\" has {} elements but \"Psi\" has {}", a.len(), psi.len()),
        ));
    }
    FramePair::new(a, psi, p, x, y)
}

fn parse_root(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|err| FrameError::InvalidParameter {
        context: format!("invalid JSON: {err}"),
    })
}

/// Parses a canonical or hand-written frame file.
pub fn frame_from_json(text: &str) -> Result<FramePair> {
    frame_from_value(&parse_root(text)?, "")
}

/// Parses a couple file with fields "first" and "second".
pub fn couple_from_json(text: &str) -> Result<(FramePair, FramePair)> {
    let root = parse_root(text)?;
    let f = frame_from_value(get(&root, "", "first")?, "first")?;
    let g = frame_from_value(get(&root, "", "second")?, "second")?;
    Ok((f, g))
}

/// Parses a flat matrix from an object field, reshaping to rows x cols.
fn matrix_field(root: &Value, key: &str, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
    let v = get(root, "", key)?;
    let flat = v
        .as_array()
        .ok_or_else(|| schema_err(key, "expected a flat row-major array"))?;
    if flat.len() != rows * cols {
        return Err(schema_err(
            key,
            format!("expected {}x{} = {} entries, got {}", rows, cols, rows * cols, flat.len()),
        ));
    }
    let mut data = Vec::with_capacity(flat.len());
    for (k, cell) in flat.iter().enumerate() {
        data.push(as_f64(cell, &format!("{key}[{k}]"))?);
    }
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

/// Parses the free parameters of the dual parametrization: "U" is a flat
/// (N*e) x d array, "V" a flat d x (N*e) array.
pub fn params_from_json(text: &str, block_dim: usize, d: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let root = parse_root(text)?;
    let u = matrix_field(&root, "U", block_dim, d)?;
    let v = matrix_field(&root, "V", d, block_dim)?;
    Ok((u, v))
}

/// Canonical serialization of a dilation: the enlarged pair, the
/// coordinate embedding, and the orthonormal basis of the added summand.
pub fn dilation_to_json(dilation: &ovpframe_core::transform::Dilation) -> String {
    format!(
        "{{\"added_dim\":{},\"basis\":{},\"dilated\":{},\"embed\":{}}}",
        dilation.added_dim,
        fmt_matrix(&dilation.basis),
        frame_to_json(&dilation.dilated),
        fmt_matrix(&dilation.embed)
    )
}

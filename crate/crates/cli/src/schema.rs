//! Scenario ingestion: JSON values to exact core types, with field paths in every error.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use grfit_core::error::Error;
use grfit_core::group_algebra::{
    builtin, CentralElement, GrMatrix, GroupAlgebra, GroupData, GroupRingElement, IrrepData,
};
use grfit_core::linalg::Matrix;
use grfit_core::scalars::{parse_rational, CycloElement, Rational};
use serde_json::Value;

pub fn parse_err(field: &str, detail: impl Into<String>) -> anyhow::Error {
    Error::Parse {
        field: field.to_string(),
        detail: detail.into(),
    }
    .into()
}

pub fn schema_err(msg: impl std::fmt::Display) -> anyhow::Error {
    anyhow!("schema error: {msg}")
}

pub fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub fn idx(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

pub fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| parse_err(&join(path, key), "missing field"))
}

pub fn opt<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

pub fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(path, "expected an array"))
}

pub fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| parse_err(path, "expected a non-negative integer"))
}

pub fn int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| parse_err(path, "expected an integer"))
}

pub fn rational(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| match e {
            Error::Parse { detail, .. } => parse_err(path, detail),
            other => other.into(),
        }),
        Value::Number(n) => n
            .as_i64()
            .map(|k| Rational::from_integer(k.into()))
            .ok_or_else(|| {
                parse_err(
                    path,
                    "numbers must be integers; write other rationals as \"num/den\"",
                )
            }),
        _ => Err(parse_err(path, "expected a rational \"num/den\"")),
    }
}

pub fn scalar(v: &Value, path: &str) -> Result<CycloElement> {
    if let Value::Object(_) = v {
        let m = uint(field(v, "m", path)?, &join(path, "m"))?;
        if m == 0 {
            return Err(parse_err(&join(path, "m"), "conductor must be positive"));
        }
        let cpath = join(path, "coeffs");
        let coeffs = array(field(v, "coeffs", path)?, &cpath)?
            .iter()
            .enumerate()
            .map(|(i, c)| rational(c, &idx(&cpath, i)))
            .collect::<Result<Vec<_>>>()?;
        return CycloElement::from_coeffs(m, coeffs).map_err(|e| parse_err(&cpath, e.to_string()));
    }
    Ok(CycloElement::from(rational(v, path)?))
}

/// {"coeffs": {index: scalar}}, or a bare scalar standing for a multiple of the identity.
pub fn gr_element(v: &Value, path: &str, n: usize) -> Result<GroupRingElement> {
    match v.get("coeffs") {
        Some(Value::Object(map)) => {
            let mut x = GroupRingElement::zero(n);
            for (k, c) in map {
                let cp = join(&join(path, "coeffs"), k);
                let g: usize = k
                    .parse()
                    .map_err(|_| parse_err(&cp, "group element index must be an integer"))?;
                if g >= n {
                    return Err(parse_err(
                        &cp,
                        format!("group element index {g} out of range for order {n}"),
                    ));
                }
                x.set_coeff(g, scalar(c, &cp)?);
            }
            Ok(x)
        }
        Some(_) => Err(parse_err(
            &join(path, "coeffs"),
            "expected an object keyed by group element index",
        )),
        None if v.is_object() => Err(parse_err(path, "group ring element needs \"coeffs\"")),
        None => Ok(GroupRingElement::scalar(n, scalar(v, path)?)),
    }
}

pub fn gr_vector(v: &Value, path: &str, n: usize) -> Result<Vec<GroupRingElement>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| gr_element(x, &idx(path, i), n))
        .collect()
}

/// Row-major nested arrays; `cols` fixes the width of an empty matrix.
pub fn gr_matrix(v: &Value, path: &str, n: usize, cols: Option<usize>) -> Result<GrMatrix> {
    let rows = array(v, path)?;
    let parsed: Vec<Vec<GroupRingElement>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| gr_vector(r, &idx(path, i), n))
        .collect::<Result<_>>()?;
    let width = parsed.first().map(|r| r.len()).or(cols).unwrap_or(0);
    if let Some((i, _)) = parsed.iter().enumerate().find(|(_, r)| r.len() != width) {
        return Err(parse_err(
            &idx(path, i),
            format!("row length differs from {width}; matrices must be rectangular"),
        ));
    }
    if let (Some(c), false) = (cols, parsed.is_empty()) {
        if c != width {
            return Err(parse_err(
                path,
                format!("expected {c} columns, found {width}"),
            ));
        }
    }
    Ok(Matrix::from_rows(parsed, width))
}

pub fn scalar_matrix(v: &Value, path: &str) -> Result<Matrix<CycloElement>> {
    let rows = array(v, path)?;
    let parsed: Vec<Vec<CycloElement>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let p = idx(path, i);
            array(r, &p)?
                .iter()
                .enumerate()
                .map(|(j, x)| scalar(x, &idx(&p, j)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let width = parsed.first().map(|r| r.len()).unwrap_or(0);
    if parsed.iter().any(|r| r.len() != width) {
        return Err(parse_err(path, "matrices must be rectangular"));
    }
    Ok(Matrix::from_rows(parsed, width))
}

pub fn central(v: &Value, path: &str, k: usize) -> Result<CentralElement> {
    let items = array(v, path)?;
    if items.len() != k {
        return Err(parse_err(
            path,
            format!("expected {k} per-character values, found {}", items.len()),
        ));
    }
    Ok(CentralElement::new(
        items
            .iter()
            .enumerate()
            .map(|(i, x)| scalar(x, &idx(path, i)))
            .collect::<Result<_>>()?,
    ))
}

pub fn opt_central(v: &Value, key: &str, path: &str, k: usize) -> Result<Option<CentralElement>> {
    opt(v, key)
        .map(|x| central(x, &join(path, key), k))
        .transpose()
}

fn usize_table(v: &Value, path: &str) -> Result<Vec<Vec<usize>>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let p = idx(path, i);
            array(r, &p)?
                .iter()
                .enumerate()
                .map(|(j, x)| Ok(uint(x, &idx(&p, j))? as usize))
                .collect()
        })
        .collect()
}

/// A builtin name, a path to a group file (relative to `base`), or
/// {"order", "table", "inverses", "classes", "exponent", "irreps"}.
pub fn group(v: &Value, path: &str, base: Option<&Path>) -> Result<(Arc<GroupAlgebra>, String)> {
    if let Some(name) = v.as_str() {
        if let Ok(ga) = builtin(name) {
            return Ok((ga, name.to_string()));
        }
        let file = base.map_or_else(|| PathBuf::from(name), |b| b.join(name));
        if !name.ends_with(".json") || !file.is_file() {
            return Err(parse_err(
                path,
                format!("unknown builtin group {name:?} and no such group file"),
            ));
        }
        let text = std::fs::read_to_string(&file)
            .map_err(|e| parse_err(path, format!("{}: {e}", file.display())))?;
        let data: Value = serde_json::from_str(&text).map_err(|e| {
            parse_err(
                path,
                format!(
                    "{} line {} column {}: {e}",
                    file.display(),
                    e.line(),
                    e.column()
                ),
            )
        })?;
        if data.is_string() {
            return Err(parse_err(path, "group file must contain a group object"));
        }
        return group(&data, path, None);
    }
    let name = opt(v, "name")
        .and_then(|x| x.as_str())
        .unwrap_or("custom")
        .to_string();
    let order = uint(field(v, "order", path)?, &join(path, "order"))? as usize;
    let table = usize_table(field(v, "table", path)?, &join(path, "table"))?;
    if table.len() != order {
        return Err(parse_err(
            &join(path, "table"),
            format!("{} rows for order {order}", table.len()),
        ));
    }
    let ipath = join(path, "inverses");
    let inverses = array(field(v, "inverses", path)?, &ipath)?
        .iter()
        .enumerate()
        .map(|(i, x)| Ok(uint(x, &idx(&ipath, i))? as usize))
        .collect::<Result<Vec<_>>>()?;
    let classes = usize_table(field(v, "classes", path)?, &join(path, "classes"))?;
    let exponent = uint(field(v, "exponent", path)?, &join(path, "exponent"))?;
    let g = GroupData::from_parts(&name, table, inverses, classes, exponent)
        .map_err(|e| parse_err(path, e.to_string()))?;
    let rpath = join(path, "irreps");
    let mut irreps = Vec::new();
    for (i, r) in array(field(v, "irreps", path)?, &rpath)?.iter().enumerate() {
        let p = idx(&rpath, i);
        let label = opt(r, "label")
            .and_then(|x| x.as_str())
            .map(String::from)
            .unwrap_or_else(|| format!("chi{i}"));
        let mpath = join(&p, "matrices");
        let matrices = array(field(r, "matrices", &p)?, &mpath)?
            .iter()
            .enumerate()
            .map(|(g, m)| scalar_matrix(m, &idx(&mpath, g)))
            .collect::<Result<Vec<_>>>()?;
        let degree = matrices.first().map(|m| m.rows()).unwrap_or(0);
        if matrices.len() != order
            || matrices
                .iter()
                .any(|m| m.rows() != degree || m.cols() != degree)
        {
            return Err(parse_err(
                &mpath,
                format!("need {order} square matrices of one size"),
            ));
        }
        irreps.push(IrrepData {
            label,
            degree,
            matrices,
        });
    }
    let ga = GroupAlgebra::new(g, irreps).map_err(|e| parse_err(path, e.to_string()))?;
    Ok((Arc::new(ga), name))
}

pub fn ensure_object(v: &Value, path: &str) -> Result<()> {
    if !v.is_object() {
        bail!(parse_err(path, "expected an object"));
    }
    Ok(())
}

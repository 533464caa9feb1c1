//! Pair files: `{"A0": [[r, r], [r, r]], "A1": [[r, r], [r, r]]}` where each
//! `r` is a JSON number or a string such as `"3/112"`, read exactly.

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{Matrix2, MatrixPair};
use crate::surd::{parse_rational, Surd};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairFile {
    #[serde(rename = "A0")]
    a0: [[Value; 2]; 2],
    #[serde(rename = "A1")]
    a1: [[Value; 2]; 2],
}

fn entry(v: &Value) -> Result<Surd> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(Error::InvalidInput(format!("matrix entry {other} is not a number"))),
    };
    Ok(Surd::rational(parse_rational(&text)?))
}

fn matrix(rows: &[[Value; 2]; 2]) -> Result<Matrix2<Surd>> {
    Ok(Matrix2::new(
        entry(&rows[0][0])?,
        entry(&rows[0][1])?,
        entry(&rows[1][0])?,
        entry(&rows[1][1])?,
    ))
}

pub fn parse_pair(json: &str) -> Result<MatrixPair<Surd>> {
    let file: PairFile = serde_json::from_str(json).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(MatrixPair::new(matrix(&file.a0)?, matrix(&file.a1)?))
}

pub fn read_pair(path: &std::path::Path) -> Result<MatrixPair<Surd>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    parse_pair(&text)
}

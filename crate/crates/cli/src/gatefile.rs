//! Gate files: a JSON object with the local dimension, an optional name and
//! metadata, and the `d² × d²` matrix as rows of `[re, im]` pairs.

use deloc::tensor::{c64, CMatrix, Gate};
use serde_json::{Map, Value};

use crate::error::CliError;
use crate::json;

#[derive(Clone, Debug, PartialEq)]
pub struct GateFile {
    pub d: usize,
    pub name: Option<String>,
    pub metadata: Option<Value>,
    pub matrix: CMatrix,
}

pub type Rows = Vec<Vec<[f64; 2]>>;

pub fn matrix_rows(m: &CMatrix) -> Rows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl GateFile {
    pub fn from_gate(g: &Gate, name: Option<String>, metadata: Option<Value>) -> Self {
        Self {
            d: g.d(),
            name,
            metadata,
            matrix: g.matrix().clone(),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("d".into(), Value::from(self.d));
        if let Some(name) = &self.name {
            map.insert("name".into(), Value::from(name.clone()));
        }
        if let Some(meta) = &self.metadata {
            map.insert("metadata".into(), meta.clone());
        }
        map.insert(
            "matrix".into(),
            serde_json::to_value(matrix_rows(&self.matrix)).expect("finite entries"),
        );
        Value::Object(map)
    }

    pub fn emit(&self) -> String {
        let mut text = json::to_string_pretty(&self.to_value());
        text.push('\n');
        text
    }

    /// Parses the text without checking unitarity.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("gate file is not valid JSON: {e}")))?;
        let Value::Object(map) = value else {
            return Err(CliError::Parse("gate file must be a JSON object".into()));
        };
        if let Some(key) = map.keys().find(|k| !["d", "name", "metadata", "matrix"].contains(&k.as_str())) {
            return Err(CliError::Parse(format!("gate file has unknown field `{key}`")));
        }
        let d = match map.get("d") {
            Some(v) => v
                .as_u64()
                .filter(|&d| d >= 2)
                .ok_or_else(|| CliError::Parse(format!("field `d` must be an integer >= 2, found {v}")))?
                as usize,
            None => return Err(CliError::Parse("gate file is missing field `d`".into())),
        };
        let name = match map.get("name") {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(other) => return Err(CliError::Parse(format!("field `name` must be a string, found {other}"))),
        };
        let metadata = map.get("metadata").cloned();
        let rows = map
            .get("matrix")
            .ok_or_else(|| CliError::Parse("gate file is missing field `matrix`".into()))?;
        let matrix = parse_matrix(rows, d * d)?;
        Ok(Self {
            d,
            name,
            metadata,
            matrix,
        })
    }

    pub fn to_gate(&self, tol_unitary: f64) -> Result<Gate, CliError> {
        Gate::with_tolerance(self.d, self.matrix.clone(), tol_unitary).map_err(CliError::from)
    }
}

fn parse_matrix(value: &Value, n: usize) -> Result<CMatrix, CliError> {
    let rows = value
        .as_array()
        .ok_or_else(|| CliError::Parse("field `matrix` must be an array of rows".into()))?;
    if rows.len() != n {
        return Err(CliError::Parse(format!("matrix: expected {n} rows, found {}", rows.len())));
    }
    let mut m = CMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| CliError::Parse(format!("matrix row {i}: expected an array of entries")))?;
        if entries.len() != n {
            return Err(CliError::Parse(format!(
                "matrix row {i}: expected {n} entries, found {}",
                entries.len()
            )));
        }
        for (j, entry) in entries.iter().enumerate() {
            let (re, im) = parse_entry(entry)
                .ok_or_else(|| CliError::Parse(format!("matrix row {i}, column {j}: expected [re, im], found {entry}")))?;
            m[(i, j)] = c64(re, im);
        }
    }
    Ok(m)
}

fn parse_entry(v: &Value) -> Option<(f64, f64)> {
    match v.as_array()?.as_slice() {
        [re, im] => Some((re.as_f64()?, im.as_f64()?)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use deloc::gallery;

    #[test]
    fn emit_parse_emit_is_stable() {
        for g in [gallery::cnot(), gallery::heisenberg(0.3), gallery::haar(3, 7).unwrap()] {
            let file = GateFile::from_gate(&g, Some("x".into()), None);
            let text = file.emit();
            let back = GateFile::parse(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.emit(), text);
        }
    }

    #[test]
    fn errors_name_the_offending_entry() {
        let text = r#"{"d": 2, "matrix": [[[1,0],[0,0],[0,0],[0,0]],
            [[0,0],[1,0],[0,0],[0,0]],
            [[0,0],[0,0],[0,0],"x"],
            [[0,0],[0,0],[1,0],[0,0]]]}"#;
        let err = GateFile::parse(text).unwrap_err().to_string();
        assert!(err.contains("row 2, column 3"), "{err}");
    }

    #[test]
    fn rejects_wrong_shapes() {
        assert!(GateFile::parse(r#"{"d": 2, "matrix": [[[1,0]]]}"#).is_err());
        assert!(GateFile::parse(r#"{"d": 1, "matrix": [[[1,0]]]}"#).is_err());
        assert!(GateFile::parse(r#"[1, 2]"#).is_err());
        assert!(GateFile::parse(r#"{"d": 2}"#).is_err());
    }
}

//! The framework file: one JSON document per framework, 1-based indices.
//!
//! ```json
//! {
//!   "name": "hyperstatic_brace",
//!   "dimension": 2,
//!   "vertices": [[0, 0], [2, 0], [1, 0], [1, 1], ["1/2", 2]],
//!   "edges": [[1, 2], [1, 3], [2, 3], [1, 4], [2, 4], [1, 5], [2, 5], [4, 5]],
//!   "pins": [[1, 1], [1, 2], [2, 2]]
//! }
//! ```
//!
//! Coordinates are JSON numbers or strings holding an integer, a decimal or a
//! fraction `p/q`. `pins` is optional and lists `(vertex, axis)` pairs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::CorpusEntry;
use crate::framework::{validate_framework, Configuration, Dof, Edge, Framework, Graph};
use crate::matrixlab::pinning::PinSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Number(f64),
    Text(String),
}

impl Coordinate {
    pub fn value(&self) -> Result<f64, String> {
        match self {
            Coordinate::Number(x) => Ok(*x),
            Coordinate::Text(s) => parse_exact(s),
        }
    }
}

/// Parses `"3"`, `"-0.125"` or `"7/16"`. Fractions divide two integers exactly
/// representable in f64, so the result is the correctly rounded quotient.
pub fn parse_exact(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a number or fraction p/q");
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        const EXACT: i64 = 1 << 53;
        if q == 0 {
            return Err(format!("`{s}` has a zero denominator"));
        }
        if p.abs() > EXACT || q.abs() > EXACT {
            return Err(format!("`{s}` has terms beyond 2^53"));
        }
        Ok(p as f64 / q as f64)
    } else {
        let x: f64 = s.parse().map_err(|_| bad())?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(bad())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub vertices: Vec<Vec<Coordinate>>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pins: Option<Vec<[usize; 2]>>,
}

/// A problem with an input file, located by line and/or field.
#[derive(Clone, Debug, PartialEq)]
pub struct FileError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl FileError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        FileError {
            line: None,
            column: None,
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}")?;
            if let Some(col) = self.column {
                write!(f, ", column {col}")?;
            }
            write!(f, ": ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "field `{field}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for FileError {}

impl FrameworkFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let parsed: Result<Self, _> = serde_path_to_error::deserialize(&mut de);
        let file = parsed.map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            FileError {
                line: Some(inner.line()),
                column: Some(inner.column()),
                field: (path != ".").then_some(path),
                message: inner
                    .to_string()
                    .split(" at line ")
                    .next()
                    .unwrap_or_default()
                    .to_string(),
            }
        })?;
        de.end().map_err(|e| FileError {
            line: Some(e.line()),
            column: Some(e.column()),
            field: None,
            message: "trailing content after the framework document".into(),
        })?;
        Ok(file)
    }

    /// Pretty JSON with one vertex, edge or pin per line.
    pub fn to_json(&self) -> String {
        fn compact<T: Serialize>(v: &T) -> String {
            serde_json::to_string(v).expect("framework files always serialize")
        }
        fn list<T: Serialize>(items: &[T]) -> String {
            if items.is_empty() {
                return "[]".into();
            }
            let rows: Vec<String> = items
                .iter()
                .map(|x| format!("    {}", compact(x)))
                .collect();
            format!("[\n{}\n  ]", rows.join(",\n"))
        }
        let mut fields = Vec::new();
        if let Some(name) = &self.name {
            fields.push(format!("  \"name\": {}", compact(name)));
        }
        fields.push(format!("  \"dimension\": {}", self.dimension));
        fields.push(format!("  \"vertices\": {}", list(&self.vertices)));
        fields.push(format!("  \"edges\": {}", list(&self.edges)));
        if let Some(pins) = &self.pins {
            fields.push(format!("  \"pins\": {}", list(pins)));
        }
        format!("{{\n{}\n}}", fields.join(",\n"))
    }

    /// Builds and validates the framework, plus the explicit pin set if any.
    pub fn to_framework(&self) -> Result<(Framework, Option<PinSet>), FileError> {
        let d = self.dimension;
        if d == 0 {
            return Err(FileError::field("dimension", "must be at least 1"));
        }
        let n = self.vertices.len();
        let mut points = Vec::with_capacity(n);
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != d {
                return Err(FileError::field(
                    format!("vertices[{i}]"),
                    format!("has {} coordinates, dimension is {d}", v.len()),
                ));
            }
            let p = v
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    c.value()
                        .map_err(|m| FileError::field(format!("vertices[{i}][{k}]"), m))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            points.push(p);
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (idx, [a, b]) in self.edges.iter().copied().enumerate() {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(FileError::field(
                        format!("edges[{idx}]"),
                        format!("vertex index {v} is out of range 1..={n} (indices are 1-based)"),
                    ));
                }
            }
            edges.push(Edge::one_based(a, b));
        }
        let config = Configuration::from_points(d, &points)
            .map_err(|e| FileError::field("vertices", e.to_string()))?;
        let framework = Framework::new(Graph::new(n, edges), config);
        let violations = validate_framework(&framework);
        if !violations.is_empty() {
            let msg = violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            return Err(FileError {
                line: None,
                column: None,
                field: None,
                message: format!("invalid framework: {msg}"),
            });
        }

        let pins = match &self.pins {
            None => None,
            Some(list) => {
                let mut dofs = Vec::with_capacity(list.len());
                for (idx, [v, k]) in list.iter().copied().enumerate() {
                    if v == 0 || v > n || k == 0 || k > d {
                        return Err(FileError::field(
                            format!("pins[{idx}]"),
                            format!("({v},{k}) is not a coordinate of a vertex in 1..={n}, axis in 1..={d}"),
                        ));
                    }
                    dofs.push(Dof {
                        vertex: v - 1,
                        axis: k - 1,
                    });
                }
                Some(
                    PinSet::from_dofs(&framework, &dofs)
                        .map_err(|e| FileError::field("pins", e.to_string()))?,
                )
            }
        };
        Ok((framework, pins))
    }

    /// Exact coordinates: integers as numbers, other rationals as `"p/q"`.
    pub fn from_corpus(entry: &CorpusEntry) -> Self {
        let vertices = entry
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| {
                        if x.is_integer() {
                            Coordinate::Number(*x.numer() as f64)
                        } else {
                            Coordinate::Text(format!("{}/{}", x.numer(), x.denom()))
                        }
                    })
                    .collect()
            })
            .collect();
        FrameworkFile {
            name: Some(entry.name.to_string()),
            dimension: entry.dimension,
            vertices,
            edges: entry.edges.iter().map(|e| [e.a + 1, e.b + 1]).collect(),
            pins: None,
        }
    }

    pub fn from_framework(f: &Framework, name: Option<String>) -> Self {
        FrameworkFile {
            name,
            dimension: f.dimension(),
            vertices: f
                .config
                .points()
                .into_iter()
                .map(|p| p.into_iter().map(Coordinate::Number).collect())
                .collect(),
            edges: f.graph.edges().iter().map(|e| [e.a + 1, e.b + 1]).collect(),
            pins: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{canonical_entries, entry};

    #[test]
    fn exact_parsing() {
        assert_eq!(parse_exact("1/2").unwrap(), 0.5);
        assert_eq!(parse_exact(" -3 ").unwrap(), -3.0);
        assert_eq!(parse_exact("0.125").unwrap(), 0.125);
        assert_eq!(parse_exact("1/3").unwrap(), 1.0 / 3.0);
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("abc").is_err());
        assert!(parse_exact("inf").is_err());
    }

    #[test]
    fn corpus_files_build_the_same_framework() {
        for e in canonical_entries() {
            let file = FrameworkFile::from_corpus(&e);
            let (f, pins) = FrameworkFile::parse(&file.to_json())
                .unwrap()
                .to_framework()
                .unwrap();
            assert_eq!(f, e.framework(), "{}", e.name);
            assert!(pins.is_none());
        }
    }

    #[test]
    fn compact_layout_is_valid_json() {
        let mut file = FrameworkFile::from_corpus(&entry("collinear_brace").unwrap());
        file.pins = Some(vec![[1, 1], [1, 2], [2, 2]]);
        let text = file.to_json();
        assert!(text.contains("\n    [1,3],\n"), "{text}");
        let generic: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(generic, serde_json::to_value(&file).unwrap());
        assert_eq!(FrameworkFile::parse(&text).unwrap(), file);
    }

    #[test]
    fn fraction_written_as_text() {
        let file = FrameworkFile::from_corpus(&entry("hyperstatic_brace").unwrap());
        assert_eq!(file.vertices[4][0], Coordinate::Text("1/2".into()));
        assert_eq!(file.vertices[4][1], Coordinate::Number(2.0));
    }

    #[test]
    fn syntax_error_names_line() {
        let err = FrameworkFile::parse("{\n  \"dimension\": 2,\n  \"vertices\": [[0, 0],]\n}")
            .unwrap_err();
        assert_eq!(err.line, Some(3));
    }

    #[test]
    fn type_error_names_field() {
        let text = r#"{"dimension": 2, "vertices": [[0, 0], [1, 0], [0, 1]], "edges": [[1, "x"]]}"#;
        let err = FrameworkFile::parse(text).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("edges[0][1]"));
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn zero_index_is_rejected() {
        let text = r#"{"dimension": 2, "vertices": [[0, 0], [1, 0], [0, 1]], "edges": [[0, 1]]}"#;
        let err = FrameworkFile::parse(text)
            .unwrap()
            .to_framework()
            .unwrap_err();
        assert_eq!(err.field.as_deref(), Some("edges[0]"));
        assert!(err.message.contains("1-based"));
    }

    #[test]
    fn explicit_pins() {
        let text = r#"{"dimension": 2, "vertices": [[0, 0], [1, 0], [0, 1]], "edges": [[1, 2], [1, 3], [2, 3]],
                       "pins": [[1, 1], [1, 2], [3, 1]]}"#;
        let (_, pins) = FrameworkFile::parse(text).unwrap().to_framework().unwrap();
        let names: Vec<String> = pins
            .unwrap()
            .dofs()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(names, ["(1,x)", "(1,y)", "(3,x)"]);

        let bad = text.replace("[3, 1]", "[2, 1]");
        let err = FrameworkFile::parse(&bad)
            .unwrap()
            .to_framework()
            .unwrap_err();
        assert_eq!(err.field.as_deref(), Some("pins"));
        let bad = text.replace("[3, 1]", "[3, 3]");
        assert!(FrameworkFile::parse(&bad).unwrap().to_framework().is_err());
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"dimension": 2, "vertices": [], "edges": [], "colour": "red"}"#;
        assert!(FrameworkFile::parse(text).is_err());
    }

    #[test]
    fn invalid_geometry_reported() {
        let text = r#"{"dimension": 2, "vertices": [[0, 0], [1, 0], [2, 0]], "edges": [[1, 2]]}"#;
        let err = FrameworkFile::parse(text)
            .unwrap()
            .to_framework()
            .unwrap_err();
        assert!(err.message.contains("affine span dimension 1 < 2"), "{err}");
    }
}

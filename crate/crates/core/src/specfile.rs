//! JSON system files.
//!
//! ```json
//! {
//!   "file_size": 4,
//!   "storage_cost": [100, 10, 10, 10, 1],
//!   "download_cost": [10, 1, 1, 1, 1],
//!   "reconstruction_sets": [[0, 1, 2], [0, 3]],
//!   "surviving_sets": [[[1, 3]], [[0, 3]], [[3]], [[1, 2]], [[2]]],
//!   "alphas": [2, 2, 2, 3, 2],
//!   "betas": [{"node": 0, "set": 0, "helper": 1, "amount": "1/2"}]
//! }
//! ```
//!
//! Numbers may be JSON integers, decimals (read digit by digit, so `0.1` is
//! exactly one tenth) or strings such as `"43/12"`. `alphas` and `betas` are
//! optional but must appear together. Set indices in `betas` refer to the
//! surviving sets as written in the file, before superset pruning.

use std::fmt;
use std::path::Path;

use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::model::{validate, Assignment, AssignmentError, Diagnostic, DssSpec, SpecDraft};
use crate::number::{format_rational, parse_rational, Rational};

/// A number that deserializes exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExactVisitor;

        impl Visitor<'_> for ExactVisitor {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
                if !v.is_finite() {
                    return Err(E::custom("number is not finite"));
                }
                // The shortest round-trip text is what the file said.
                parse_rational(&v.to_string()).map(Exact).map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                parse_rational(v).map(Exact).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExactVisitor)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.to_integer().to_i64() {
            Some(i) if self.0.is_integer() => serializer.serialize_i64(i),
            _ => serializer.serialize_str(&format_rational(&self.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaRecord {
    pub node: usize,
    pub set: usize,
    pub helper: usize,
    pub amount: Exact,
}

/// The file as written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub file_size: Exact,
    pub storage_cost: Vec<Exact>,
    pub download_cost: Vec<Exact>,
    pub reconstruction_sets: Vec<Vec<usize>>,
    pub surviving_sets: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<Exact>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<BetaRecord>>,
}

#[derive(Debug, Error)]
pub enum SpecFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{}line {line}, column {column}: {message}", field_prefix(.field))]
    Parse {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}", render_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("`alphas` and `betas` must be given together")]
    PartialAssignment,
    #[error("`betas` entry {index}: node {node} has no surviving set {set}")]
    UnknownSet { index: usize, node: usize, set: usize },
    #[error(
        "`betas` entry {index} refers to surviving set {set} of node {node}, which was pruned as a superset"
    )]
    PrunedSet { index: usize, node: usize, set: usize },
    #[error("assignment: {0}")]
    Assignment(#[from] AssignmentError),
}

fn field_prefix(field: &str) -> String {
    if field.is_empty() || field == "." || field == "?" {
        String::new()
    } else {
        format!("field `{field}`, ")
    }
}

fn render_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
}

/// A parsed, validated file.
#[derive(Debug, Clone)]
pub struct LoadedSpec {
    pub spec: DssSpec,
    pub assignment: Option<Assignment>,
    /// Validation warnings, such as pruned supersets.
    pub warnings: Vec<Diagnostic>,
}

pub fn parse_str(text: &str) -> Result<SpecFile, SpecFileError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let field = err.path().to_string();
        let inner = err.into_inner();
        let (line, column) = (inner.line(), inner.column());
        let full = inner.to_string();
        let suffix = format!(" at line {line} column {column}");
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        SpecFileError::Parse {
            field,
            line,
            column,
            message,
        }
    })
}

impl SpecFile {
    pub fn to_draft(&self) -> SpecDraft {
        SpecDraft {
            file_size: self.file_size.0.clone(),
            storage_cost: self.storage_cost.iter().map(|x| x.0.clone()).collect(),
            download_cost: self.download_cost.iter().map(|x| x.0.clone()).collect(),
            reconstruction_sets: self.reconstruction_sets.clone(),
            surviving_sets: self.surviving_sets.clone(),
        }
    }

    /// Validates the system and, when present, the assignment.
    pub fn load(&self) -> Result<LoadedSpec, SpecFileError> {
        let validation = validate(&self.to_draft());
        let Some(spec) = validation.spec.clone() else {
            return Err(SpecFileError::Invalid(validation.errors().cloned().collect()));
        };
        let warnings: Vec<Diagnostic> = validation.warnings().cloned().collect();
        let assignment = match (&self.alphas, &self.betas) {
            (None, None) => None,
            (Some(alphas), Some(betas)) => {
                let mut triples = Vec::with_capacity(betas.len());
                for (index, b) in betas.iter().enumerate() {
                    let raw_sets = self.surviving_sets.get(b.node).map_or(0, Vec::len);
                    if b.set >= raw_sets {
                        return Err(SpecFileError::UnknownSet {
                            index,
                            node: b.node,
                            set: b.set,
                        });
                    }
                    let set = validation.kept_surviving_sets[b.node]
                        .iter()
                        .position(|&kept| kept == b.set)
                        .ok_or(SpecFileError::PrunedSet {
                            index,
                            node: b.node,
                            set: b.set,
                        })?;
                    triples.push((b.node, set, b.helper, b.amount.0.clone()));
                }
                let alpha = alphas.iter().map(|a| a.0.clone()).collect();
                Some(Assignment::from_triples(&spec, alpha, triples)?)
            }
            _ => return Err(SpecFileError::PartialAssignment),
        };
        Ok(LoadedSpec {
            spec,
            assignment,
            warnings,
        })
    }

    /// The file form of a validated system, with an optional assignment.
    pub fn from_spec(spec: &DssSpec, assignment: Option<&Assignment>) -> SpecFile {
        let draft = spec.to_draft();
        let exact = |v: &[Rational]| v.iter().cloned().map(Exact).collect::<Vec<_>>();
        SpecFile {
            file_size: Exact(draft.file_size),
            storage_cost: exact(&draft.storage_cost),
            download_cost: exact(&draft.download_cost),
            reconstruction_sets: draft.reconstruction_sets,
            surviving_sets: draft.surviving_sets,
            alphas: assignment.map(|a| exact(a.alpha())),
            betas: assignment.map(|a| {
                a.triples(spec)
                    .map(|(node, set, helper, amount)| BetaRecord {
                        node,
                        set,
                        helper,
                        amount: Exact(amount.clone()),
                    })
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }
}

pub fn load_str(text: &str) -> Result<LoadedSpec, SpecFileError> {
    parse_str(text)?.load()
}

pub fn load_path(path: &Path) -> Result<LoadedSpec, SpecFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::example_system;
    use crate::number::{int, ratio};

    const SMALL: &str = r#"{
        "file_size": "1/2",
        "storage_cost": [1, 0.1],
        "download_cost": [2, 3],
        "reconstruction_sets": [[0]],
        "surviving_sets": [[[1]], [[0]]]
    }"#;

    #[test]
    fn numbers_are_exact() {
        let loaded = load_str(SMALL).unwrap();
        assert_eq!(loaded.spec.file_size(), &ratio(1, 2));
        assert_eq!(loaded.spec.storage_cost()[1], ratio(1, 10));
        assert!(loaded.assignment.is_none());
    }

    #[test]
    fn parse_errors_name_the_field() {
        let bad = SMALL.replace("[2, 3]", "[2, \"x\"]");
        let err = load_str(&bad).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("download_cost[1]"), "{text}");
        assert!(text.contains("line 4"), "{text}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = SMALL.replace("\"file_size\"", "\"size\": 1, \"file_size\"");
        assert!(matches!(load_str(&bad), Err(SpecFileError::Parse { .. })));
    }

    #[test]
    fn fixture_round_trips() {
        let (spec, asg) = example_system();
        let json = SpecFile::from_spec(&spec, Some(&asg)).to_json();
        let loaded = load_str(&json).unwrap();
        assert_eq!(loaded.spec, spec);
        assert_eq!(loaded.assignment.unwrap(), asg);
    }

    #[test]
    fn betas_follow_pruned_indices() {
        let text = r#"{
            "file_size": 1,
            "storage_cost": [1, 1, 1],
            "download_cost": [1, 1, 1],
            "reconstruction_sets": [[0, 1]],
            "surviving_sets": [[[1, 2], [1]], [[0]], [[0]]],
            "alphas": [1, 1, 1],
            "betas": [
                {"node": 0, "set": 1, "helper": 1, "amount": 5},
                {"node": 1, "set": 0, "helper": 0, "amount": 1},
                {"node": 2, "set": 0, "helper": 0, "amount": 1}
            ]
        }"#;
        let loaded = load_str(text).unwrap();
        assert_eq!(loaded.warnings.len(), 1);
        let asg = loaded.assignment.unwrap();
        assert_eq!(asg.beta(&loaded.spec, 0, 0, 1), Some(&int(5)));

        let pruned = text.replace("\"set\": 1", "\"set\": 0");
        assert!(matches!(load_str(&pruned), Err(SpecFileError::PrunedSet { .. })));
    }

    #[test]
    fn half_an_assignment_is_an_error() {
        let text = SMALL.replace("\"file_size\"", "\"alphas\": [1, 1], \"file_size\"");
        assert!(matches!(load_str(&text), Err(SpecFileError::PartialAssignment)));
    }
}

//! JSON documents for model instances.
//!
//! ```json
//! {"space":"l2","model":"diagonal","explicit":[3,2,0.5],"tail":{"kind":"const","value":1}}
//! {"space":"l2","model":"weighted_shift","explicit":[],"tail":{"kind":"geometric","limit":2,"ratio":0.5}}
//! {"space":"l2","model":"matrix","matrix":[[2,0],[0,0.5]]}
//! {"space":"l1","model":"columns","columns":[[0.6,0.9,0.9]],"tail_weights":[],"tail":{"kind":"const","value":1}}
//! ```
//!
//! A missing `tail` means the zero sequence. Numbers are written in the
//! shortest form that parses back to the same `f64`.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::model::{DenseBlock, HilbertOperator, L1Operator, Operator, TailRule, WeightSequence};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    pub space: String,
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailDoc>,
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::Invalid {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn required<T>(value: Option<T>, field: &str, what: &str) -> Result<T> {
    value.ok_or_else(|| invalid(field, format!("required for {what}")))
}

fn reject(present: bool, field: &str, what: &str) -> Result<()> {
    if present {
        Err(invalid(field, format!("not allowed for {what}")))
    } else {
        Ok(())
    }
}

impl TailDoc {
    pub fn from_rule(rule: TailRule) -> Self {
        match rule {
            TailRule::Const { limit } => TailDoc {
                kind: "const".into(),
                value: Some(limit),
                limit: None,
                ratio: None,
            },
            TailRule::GeometricApproach { limit, ratio } => TailDoc {
                kind: "geometric".into(),
                value: None,
                limit: Some(limit),
                ratio: Some(ratio),
            },
        }
    }

    pub fn to_rule(&self) -> Result<TailRule> {
        let rule = match self.kind.as_str() {
            "const" => {
                reject(self.limit.is_some(), "tail.limit", "a const tail")?;
                reject(self.ratio.is_some(), "tail.ratio", "a const tail")?;
                TailRule::Const {
                    limit: required(self.value, "tail.value", "a const tail")?,
                }
            }
            "geometric" => {
                reject(self.value.is_some(), "tail.value", "a geometric tail")?;
                TailRule::GeometricApproach {
                    limit: required(self.limit, "tail.limit", "a geometric tail")?,
                    ratio: required(self.ratio, "tail.ratio", "a geometric tail")?,
                }
            }
            other => {
                return Err(invalid(
                    "tail.kind",
                    format!("unknown kind {other:?}, expected \"const\" or \"geometric\""),
                ))
            }
        };
        rule.validate("tail")?;
        Ok(rule)
    }
}

fn tail_rule(doc: &Option<TailDoc>) -> Result<TailRule> {
    doc.as_ref().map_or(Ok(TailRule::ZERO), TailDoc::to_rule)
}

fn finite_vec(field: &str, values: &[f64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        check_finite(&format!("{field}[{i}]"), v)?;
    }
    Ok(())
}

impl OperatorDoc {
    pub fn from_operator(t: &Operator) -> Self {
        let mut doc = OperatorDoc {
            space: t.space_name().into(),
            model: String::new(),
            explicit: None,
            dim: None,
            matrix: None,
            columns: None,
            tail_weights: None,
            tail: None,
        };
        match t {
            Operator::L2(h) => {
                doc.model = h.shape_name().into();
                match h {
                    HilbertOperator::FiniteMatrix(b) => doc.matrix = Some(b.rows()),
                    HilbertOperator::Diagonal(s) | HilbertOperator::WeightedShift(s) => {
                        doc.explicit = Some(s.explicit().to_vec());
                        doc.tail = Some(TailDoc::from_rule(s.tail()));
                    }
                }
            }
            Operator::L1(l) => {
                doc.model = "columns".into();
                doc.columns = Some(l.columns().to_vec());
                doc.tail_weights = Some(l.tail_weights().to_vec());
                doc.tail = Some(TailDoc::from_rule(l.tail()));
            }
        }
        doc
    }

    pub fn to_operator(&self) -> Result<Operator> {
        match (self.space.as_str(), self.model.as_str()) {
            ("l2", model @ ("diagonal" | "weighted_shift")) => {
                reject(self.dim.is_some(), "dim", model)?;
                reject(self.matrix.is_some(), "matrix", model)?;
                reject(self.columns.is_some(), "columns", model)?;
                reject(self.tail_weights.is_some(), "tail_weights", model)?;
                let explicit = self.explicit.clone().unwrap_or_default();
                finite_vec("explicit", &explicit)?;
                let seq = WeightSequence::new(explicit, tail_rule(&self.tail)?)?;
                Ok(Operator::L2(if model == "diagonal" {
                    HilbertOperator::Diagonal(seq)
                } else {
                    HilbertOperator::WeightedShift(seq)
                }))
            }
            ("l2", "matrix") => {
                reject(self.explicit.is_some(), "explicit", "matrix")?;
                reject(self.columns.is_some(), "columns", "matrix")?;
                reject(self.tail_weights.is_some(), "tail_weights", "matrix")?;
                reject(self.tail.is_some(), "tail", "matrix")?;
                let rows = required(self.matrix.as_ref(), "matrix", "matrix")?;
                if let Some(dim) = self.dim {
                    if dim < 0 {
                        return Err(invalid("dim", format!("negative dimension {dim}")));
                    }
                    if dim as usize != rows.len() {
                        return Err(invalid(
                            "dim",
                            format!("{dim} does not match {} rows", rows.len()),
                        ));
                    }
                }
                if rows.is_empty() {
                    return Err(invalid("matrix", "needs at least one row"));
                }
                for (i, row) in rows.iter().enumerate() {
                    finite_vec(&format!("matrix[{i}]"), row)?;
                }
                Ok(Operator::L2(HilbertOperator::FiniteMatrix(DenseBlock::from_rows(rows)?)))
            }
            ("l1", "columns") => {
                reject(self.explicit.is_some(), "explicit", "columns")?;
                reject(self.dim.is_some(), "dim", "columns")?;
                reject(self.matrix.is_some(), "matrix", "columns")?;
                let columns = self.columns.clone().unwrap_or_default();
                let weights = self.tail_weights.clone().unwrap_or_default();
                Ok(Operator::L1(L1Operator::new(columns, weights, tail_rule(&self.tail)?)?))
            }
            ("l2", other) => Err(invalid(
                "model",
                format!("unknown l2 model {other:?}, expected \"diagonal\", \"weighted_shift\" or \"matrix\""),
            )),
            ("l1", other) => Err(invalid(
                "model",
                format!("unknown l1 model {other:?}, expected \"columns\""),
            )),
            (other, _) => Err(invalid(
                "space",
                format!("unknown space {other:?}, expected \"l2\" or \"l1\""),
            )),
        }
    }
}

/// Parses and validates a JSON operator document.
pub fn parse_operator(text: &str) -> Result<Operator> {
    let doc: OperatorDoc =
        serde_json::from_str(text).map_err(|e| invalid("document", e.to_string()))?;
    doc.to_operator()
}

/// Compact JSON rendering that [`parse_operator`] reads back exactly.
pub fn print_operator(t: &Operator) -> String {
    serde_json::to_string(&OperatorDoc::from_operator(t)).expect("finite numbers serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let t = parse_operator(
            r#"{"space":"l2","model":"diagonal","explicit":[3,2,0.5],"tail":{"kind":"const","value":1}}"#,
        )
        .unwrap();
        assert_eq!(
            t,
            Operator::L2(
                HilbertOperator::diagonal(vec![3.0, 2.0, 0.5], TailRule::constant(1.0).unwrap())
                    .unwrap()
            )
        );
        let t = parse_operator(
            r#"{"space":"l1","model":"columns","columns":[[0.6,0.9,0.9]],"tail":{"kind":"const","value":1}}"#,
        )
        .unwrap();
        assert_eq!(t.op_norm(), 2.4);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let cases = [
            (
                r#"{"space":"l2","model":"diagonal","tail":{"kind":"geometric","limit":2,"ratio":1.5}}"#,
                "tail.ratio",
            ),
            (
                r#"{"space":"l2","model":"diagonal","tail":{"kind":"cubic","value":1}}"#,
                "tail.kind",
            ),
            (
                r#"{"space":"l2","model":"matrix","dim":-2,"matrix":[[1]]}"#,
                "dim",
            ),
            (r#"{"space":"l3","model":"diagonal"}"#, "space"),
            (r#"{"space":"l2","model":"banded"}"#, "model"),
            (
                r#"{"space":"l2","model":"matrix","matrix":[[1,2],[3]]}"#,
                "matrix",
            ),
            (
                r#"{"space":"l1","model":"columns","tail":{"kind":"geometric","limit":1,"ratio":0.5}}"#,
                "tail.kind",
            ),
            (
                r#"{"space":"l2","model":"diagonal","explicit":[1e999]}"#,
                "document",
            ),
            (r#"{"space":"l2","model":"diagonal","extra":1}"#, "document"),
        ];
        for (text, field) in cases {
            let err = parse_operator(text).unwrap_err();
            assert_eq!(err.field(), Some(field), "{text}: {err}");
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let ops: Vec<Operator> = vec![
            HilbertOperator::weighted_shift(
                vec![0.1 + 0.2, -1.0 / 3.0, 1e-300],
                TailRule::geometric(-2.0, 0.7).unwrap(),
            )
            .unwrap()
            .into(),
            HilbertOperator::finite_matrix(&[vec![1.0 / 7.0, 2.0], vec![-0.0, 5e-324]])
                .unwrap()
                .into(),
            L1Operator::new(
                vec![vec![0.6, 0.9, 0.9]],
                vec![0.3],
                TailRule::constant(1.0).unwrap(),
            )
            .unwrap()
            .into(),
        ];
        for t in ops {
            let text = print_operator(&t);
            assert_eq!(parse_operator(&text).unwrap(), t, "{text}");
        }
    }
}

//! Output schemas shipped with the binary.

use serde_json::Value;

use crate::error::{CliError, CliResult};

const SCHEMAS: &[(&str, &str)] = &[
    (
        "convergence_report",
        include_str!("../schemas/convergence_report.v1.json"),
    ),
    (
        "transition_summary",
        include_str!("../schemas/transition_summary.v1.json"),
    ),
    (
        "pleated_report",
        include_str!("../schemas/pleated_report.v1.json"),
    ),
    ("kerckhoff", include_str!("../schemas/kerckhoff.v1.json")),
    (
        "cone_angle_row",
        include_str!("../schemas/cone_angle_row.v1.json"),
    ),
    (
        "double_report",
        include_str!("../schemas/double_report.v1.json"),
    ),
    (
        "scene_export",
        include_str!("../schemas/scene_export.v1.json"),
    ),
];

/// Validates a value against a named schema.
pub fn validate(name: &str, value: &Value) -> CliResult<()> {
    let text = SCHEMAS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| CliError::Schema {
            name: name.into(),
            message: "unknown schema".into(),
        })?;
    let schema: Value = serde_json::from_str(text).map_err(|e| CliError::Schema {
        name: name.into(),
        message: format!("schema does not parse: {e}"),
    })?;
    let validator = jsonschema::validator_for(&schema).map_err(|e| CliError::Schema {
        name: name.into(),
        message: format!("invalid schema: {e}"),
    })?;
    let errors: Vec<String> = validator
        .iter_errors(value)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(CliError::Schema {
            name: name.into(),
            message: errors.join("; "),
        })
    }
}

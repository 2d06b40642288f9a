//! Versioned JSON documents for instances and solutions.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Instance, ModelError, Solution};

pub const INSTANCE_SCHEMA: &str = "induct-instance/1";
pub const SOLUTION_SCHEMA: &str = "induct-solution/1";

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    schema: String,
    instance: Instance,
}

#[derive(Serialize, Deserialize)]
pub struct SolutionDoc {
    pub schema: String,
    pub instance: String,
    pub solution: Solution,
}

fn check_schema(found: &str, expected: &str) -> Result<(), ModelError> {
    if found == expected {
        Ok(())
    } else {
        Err(ModelError::Schema { found: found.to_string(), expected: expected.to_string() })
    }
}

pub fn instance_to_string(instance: &Instance) -> String {
    let doc = InstanceDoc { schema: INSTANCE_SCHEMA.to_string(), instance: instance.clone() };
    let mut text = serde_json::to_string_pretty(&doc).expect("instances always serialize");
    text.push('\n');
    text
}

pub fn instance_from_str(text: &str) -> Result<Instance, ModelError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or("");
    check_schema(schema, INSTANCE_SCHEMA)?;
    let doc: InstanceDoc = serde_json::from_value(value)?;
    doc.instance.validate()?;
    Ok(doc.instance)
}

pub fn read_instance(path: &Path) -> Result<Instance, ModelError> {
    instance_from_str(&fs::read_to_string(path)?)
}

pub fn write_instance(path: &Path, instance: &Instance) -> Result<(), ModelError> {
    fs::write(path, instance_to_string(instance))?;
    Ok(())
}

pub fn solution_to_string(instance: &Instance, solution: &Solution) -> String {
    let doc = SolutionDoc { schema: SOLUTION_SCHEMA.to_string(), instance: instance.name.clone(), solution: solution.clone() };
    let mut text = serde_json::to_string_pretty(&doc).expect("solutions always serialize");
    text.push('\n');
    text
}

pub fn solution_from_str(text: &str) -> Result<SolutionDoc, ModelError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or("");
    check_schema(schema, SOLUTION_SCHEMA)?;
    Ok(serde_json::from_value(value)?)
}

pub fn read_solution(path: &Path) -> Result<SolutionDoc, ModelError> {
    solution_from_str(&fs::read_to_string(path)?)
}

pub fn write_solution(path: &Path, instance: &Instance, solution: &Solution) -> Result<(), ModelError> {
    fs::write(path, solution_to_string(instance, solution))?;
    Ok(())
}

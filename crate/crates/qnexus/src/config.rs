//! Architecture files, builtin lookup and `key=value` overrides.
//!
//! Architecture files are TOML with one `[[modules]]` table per module and
//! one `[[links]]` table per link. Durations are in seconds and error rates
//! are plain probabilities.

use std::path::Path;

use qnexus_core::arch::{all_builtins, builtin_architecture, validate, Diagnostic};
use qnexus_core::ArchitectureSpec;
use toml::Value;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read `{path}`: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("`{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("`{0}` is neither a builtin architecture nor an existing file")]
    UnknownArch(String),
    #[error("override `{0}`: expected <module>.<field>=<value>")]
    OverrideSyntax(String),
    #[error("override `{key}`: {message}")]
    Override { key: String, message: String },
    #[error("workload `{0}`: {1}")]
    Workload(String, String),
    #[error("{0}")]
    Invalid(String),
}

/// Short override names and the field paths they stand for.
pub const ALIASES: &[(&str, &str)] = &[
    ("d", "code.distance"),
    ("c_anc", "code.c_anc"),
    ("p", "modality.p_phys"),
    ("p_th", "modality.p_th"),
    ("t1", "modality.t1_s"),
    ("t2", "modality.t2_s"),
    ("n", "n_logical"),
    ("cores", "qpu.cores"),
    ("eps_2q", "qpu.eps_2q"),
    ("k_swap", "raqm.k_swap"),
    ("eps_tele", "qb.eps_tele"),
];

pub fn parse_arch(text: &str, origin: &str) -> Result<ArchitectureSpec, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Parse { path: origin.to_string(), message: e.to_string() })
}

pub fn arch_to_toml(spec: &ArchitectureSpec) -> String {
    toml::to_string(spec).expect("architecture specs serialize to TOML")
}

/// Resolves a builtin name, or reads an architecture file if no builtin
/// has that name.
pub fn load_arch(name_or_path: &str) -> Result<ArchitectureSpec, ConfigError> {
    if let Ok(spec) = builtin_architecture(name_or_path) {
        return Ok(spec);
    }
    let path = Path::new(name_or_path);
    if !path.is_file() {
        return Err(ConfigError::UnknownArch(name_or_path.to_string()));
    }
    let text =
        std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: name_or_path.to_string(), source })?;
    parse_arch(&text, name_or_path)
}

pub fn builtin_names() -> Vec<String> {
    all_builtins().into_iter().map(|(n, _)| n).collect()
}

pub fn split_override(raw: &str) -> Result<(String, String), ConfigError> {
    let (key, value) = raw.split_once('=').ok_or_else(|| ConfigError::OverrideSyntax(raw.to_string()))?;
    let (key, value) = (key.trim(), value.trim());
    if key.is_empty() || value.is_empty() || !key.contains('.') {
        return Err(ConfigError::OverrideSyntax(raw.to_string()));
    }
    Ok((key.to_string(), value.to_string()))
}

fn parse_value(raw: &str) -> Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

fn expand(path: &str) -> &str {
    ALIASES.iter().find(|(a, _)| *a == path).map(|(_, full)| *full).unwrap_or(path)
}

/// Applies `<module>.<field path>=<value>` overrides in order. The module
/// is matched by id, then by kind. The field must already exist, or its
/// parent table must, so optional fields can be switched on.
pub fn apply_overrides(
    spec: &ArchitectureSpec,
    overrides: &[(String, String)],
) -> Result<ArchitectureSpec, ConfigError> {
    if overrides.is_empty() {
        return Ok(spec.clone());
    }
    let mut root = Value::try_from(spec).expect("architecture specs serialize to TOML values");
    for (key, raw) in overrides {
        let fail = |message: String| ConfigError::Override { key: key.clone(), message };
        let (module, path) = key.split_once('.').ok_or_else(|| ConfigError::OverrideSyntax(key.clone()))?;
        let index = spec
            .modules
            .iter()
            .position(|m| m.id == module)
            .or_else(|| spec.modules.iter().position(|m| m.kind.name() == module))
            .ok_or_else(|| fail(format!("no module `{module}`")))?;
        let mut node = &mut root["modules"][index];
        let parts: Vec<&str> = expand(path).split('.').collect();
        let (leaf, parents) = parts.split_last().expect("split yields one part");
        for part in parents {
            node = node
                .get_mut(*part)
                .filter(|v| v.is_table())
                .ok_or_else(|| fail(format!("`{module}` has no section `{part}`")))?;
        }
        let table = node.as_table_mut().ok_or_else(|| fail(format!("`{path}` is not a field")))?;
        if let Some(old) = table.get(*leaf) {
            if old.is_table() || old.is_array() {
                return Err(fail(format!("`{path}` is a section, not a value")));
            }
        }
        table.insert(leaf.to_string(), parse_value(raw));
    }
    root.try_into().map_err(|e: toml::de::Error| ConfigError::Invalid(e.to_string().trim().to_string()))
}

/// Loads, overrides and validates an architecture. Validation failures are
/// returned separately so callers can tell them apart from config errors.
pub fn resolve_arch(
    name_or_path: &str,
    overrides: &[(String, String)],
) -> Result<Result<ArchitectureSpec, Vec<Diagnostic>>, ConfigError> {
    let spec = apply_overrides(&load_arch(name_or_path)?, overrides)?;
    let diagnostics = validate(&spec);
    Ok(if diagnostics.is_empty() { Ok(spec) } else { Err(diagnostics) })
}

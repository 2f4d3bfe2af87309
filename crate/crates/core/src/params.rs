//! Named parameter maps used to select registered instances by name.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub type Params = BTreeMap<String, Value>;

/// Describes one accepted parameter of a registered instance.
#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: &'static str,
    pub default: Option<&'static str>,
    pub doc: &'static str,
}

/// A registry entry as printed by `--list`.
#[derive(Debug, Clone, Serialize)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub doc: &'static str,
    pub params: Vec<ParamSpec>,
}

impl RegistryEntry {
    /// Rejects any parameter the entry does not declare.
    pub fn check_params(&self, params: &Params) -> Result<()> {
        for key in params.keys() {
            if !self.params.iter().any(|p| p.name == key) {
                return Err(Error::Config(format!(
                    "`{}` does not accept parameter `{key}`",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

pub fn lookup<'a>(entries: &'a [RegistryEntry], kind: &str, name: &str) -> Result<&'a RegistryEntry> {
    entries.iter().find(|e| e.name == name).ok_or_else(|| {
        let known: Vec<_> = entries.iter().map(|e| e.name).collect();
        Error::Config(format!("unknown {kind} `{name}` (known: {})", known.join(", ")))
    })
}

pub fn get_f64(params: &Params, key: &str) -> Result<Option<f64>> {
    match params.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| Error::Config(format!("parameter `{key}` must be a number"))),
    }
}

pub fn get_f64_or(params: &Params, key: &str, default: f64) -> Result<f64> {
    Ok(get_f64(params, key)?.unwrap_or(default))
}

pub fn get_usize(params: &Params, key: &str) -> Result<Option<usize>> {
    match params.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|n| Some(n as usize))
            .ok_or_else(|| Error::Config(format!("parameter `{key}` must be a nonnegative integer"))),
    }
}

pub fn get_vec(params: &Params, key: &str) -> Result<Option<Vec<f64>>> {
    match params.get(key) {
        None => Ok(None),
        Some(Value::Number(n)) => Ok(n.as_f64().map(|x| vec![x])),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|_| Error::Config(format!("parameter `{key}` must be a number or a list of numbers"))),
    }
}

pub fn get_matrix(params: &Params, key: &str) -> Result<Option<Vec<Vec<f64>>>> {
    match params.get(key) {
        None => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|_| Error::Config(format!("parameter `{key}` must be a list of rows"))),
    }
}

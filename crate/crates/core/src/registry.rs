//! Name-keyed factories for interchangeable strategies.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("unknown {kind} {name:?} (available: {available})")]
    Unknown {
        kind: &'static str,
        name: String,
        available: String,
    },
    #[error("invalid parameters for {name:?}: {msg}")]
    Params { name: String, msg: String },
}

impl RegistryError {
    pub fn params(name: &str, msg: impl fmt::Display) -> Self {
        RegistryError::Params {
            name: name.to_string(),
            msg: msg.to_string(),
        }
    }
}

pub type Factory<T> = Box<dyn Fn(&Value) -> Result<T, RegistryError> + Send + Sync>;

pub struct Registry<T> {
    kind: &'static str,
    entries: BTreeMap<String, Factory<T>>,
}

impl<T> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `factory` under `name`, replacing any earlier entry.
    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&Value) -> Result<T, RegistryError> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Box::new(factory));
    }

    pub fn create(&self, name: &str, params: &Value) -> Result<T, RegistryError> {
        match self.entries.get(name) {
            Some(f) => f(params),
            None => Err(RegistryError::Unknown {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            }),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }
}

impl<T> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("names", &self.names())
            .finish()
    }
}

/// Deserializes factory parameters, mapping failures to [`RegistryError::Params`].
pub fn params<P: serde::de::DeserializeOwned>(name: &str, v: &Value) -> Result<P, RegistryError> {
    let v = if v.is_null() {
        Value::Object(Default::default())
    } else {
        v.clone()
    };
    serde_json::from_value(v).map_err(|e| RegistryError::params(name, e))
}

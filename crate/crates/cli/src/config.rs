//! Declarative run files. Keys match the long flag names with `_` in place
//! of `-`; flags given on the command line win.

use std::fmt;
use std::path::Path;

use anyhow::Result;
use serde::de::DeserializeOwned;

/// A problem with the invocation itself; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
}

/// Fills every field left unset on the command line from the config file.
macro_rules! overlay {
    ($flags:expr, $file:expr; $($f:ident),+ $(,)?) => {
        $( if $flags.$f.is_none() { $flags.$f = $file.$f; } )+
    };
}
pub(crate) use overlay;

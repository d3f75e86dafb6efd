use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Outgoing<'a, T> {
    schema_version: u32,
    kind: &'a str,
    config: &'a RunConfig,
    data: &'a T,
}

#[derive(Deserialize)]
struct Incoming {
    schema_version: u32,
    kind: String,
    data: serde_json::Value,
}

/// The exact bytes written for an artifact.
pub fn render<T: Serialize>(kind: &str, config: &RunConfig, data: &T) -> CliResult<String> {
    let env = Outgoing { schema_version: SCHEMA_VERSION, kind, config, data };
    Ok(serde_json::to_string_pretty(&env)? + "\n")
}

/// Writes `<out>/<kind>-<hash>.json`, named by the SHA-256 of its contents.
pub fn write<T: Serialize>(kind: &str, config: &RunConfig, data: &T) -> CliResult<PathBuf> {
    let text = render(kind, config, data)?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    std::fs::create_dir_all(&config.out)?;
    let path = config.out.join(format!("{kind}-{}.json", &digest[..16]));
    std::fs::write(&path, text)?;
    Ok(path)
}

/// Reads an artifact of one of the `accepted` kinds and returns its kind.
pub fn read<T: DeserializeOwned>(path: &Path, accepted: &[&str]) -> CliResult<(String, T)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::new("Io", format!("{}: {e}", path.display())))?;
    let env: Incoming = serde_json::from_str(&text)?;
    if env.schema_version != SCHEMA_VERSION {
        return Err(CliError::new(
            "SchemaVersion",
            format!("{} has schema version {}, this build reads {SCHEMA_VERSION}", path.display(), env.schema_version),
        ));
    }
    if !accepted.contains(&env.kind.as_str()) {
        return Err(CliError::input(format!("{} holds a {} artifact, expected {}", path.display(), env.kind, accepted.join(" or "))));
    }
    let data = serde_json::from_value(env.data)?;
    Ok((env.kind, data))
}

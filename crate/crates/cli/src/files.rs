//! Reading inputs with their digests and writing canonical outputs.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use jacobi_inverse::forward::WaveField;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// A parsed input file together with the SHA-256 of its bytes.
pub struct Loaded<T> {
    pub value: T,
    pub digest: InputDigest,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<Loaded<T>, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let value = serde_json::from_slice(&bytes).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })?;
    Ok(Loaded {
        value,
        digest: InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        },
    })
}

/// Pretty JSON with keys sorted at every level and a trailing newline.
///
/// Going through `serde_json::Value` sorts the keys (its map is ordered);
/// floats use the shortest representation that round-trips.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("output types serialize to JSON");
    let mut text = serde_json::to_string_pretty(&value).expect("a JSON value always prints");
    text.push('\n');
    text
}

/// `n,t,re,im` for every stored entry, ordered by `n` then `t`.
pub fn wavefield_csv(u: &WaveField) -> String {
    let mut out = String::from("n,t,re,im\n");
    for (n, t, z) in u.entries() {
        writeln!(out, "{n},{t},{},{}", z.re, z.im).expect("writing to a String");
    }
    out
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

//! Reading, hashing and parsing input files.

use std::path::Path;

use opinv_core::connect::{Connection, DiffOperator};
use opinv_core::invar::SignatureConfig;
use opinv_core::json;
use opinv_core::models::ModelSurface;
use opinv_core::{HomogeneousPoly, ParseError, SymbolField};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Path and content hash of one input, as recorded in reports.
#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

/// Collects the inputs a command reads.
#[derive(Debug, Default)]
pub struct Inputs {
    pub records: Vec<InputRecord>,
}

impl Inputs {
    fn load(&mut self, path: &Path) -> Result<(String, Value), CliError> {
        let shown = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|e| CliError::Read { path: shown.clone(), message: e.to_string() })?;
        self.records.push(InputRecord { path: shown.clone(), sha256: hex::encode(Sha256::digest(&bytes)) });
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::Input { path: shown.clone(), source: ParseError::Json("not valid UTF-8".into()) })?;
        let value = json::parse_text(&text).map_err(|source| CliError::Input { path: shown.clone(), source })?;
        Ok((shown, value))
    }

    fn parse<T>(&mut self, path: &Path, f: impl FnOnce(&Value) -> Result<T, ParseError>) -> Result<T, CliError> {
        let (shown, value) = self.load(path)?;
        f(&value).map_err(|source| CliError::Input { path: shown, source })
    }

    pub fn symbol(&mut self, path: &Path) -> Result<HomogeneousPoly, CliError> {
        self.parse(path, json::poly_from_json)
    }

    pub fn symbol_field(&mut self, path: &Path) -> Result<SymbolField, CliError> {
        self.parse(path, json::symbol_field_from_json)
    }

    pub fn operator(&mut self, path: &Path) -> Result<DiffOperator, CliError> {
        self.parse(path, json::operator_from_json)
    }

    pub fn connection(&mut self, path: &Path) -> Result<Connection, CliError> {
        self.parse(path, json::connection_from_json)
    }

    pub fn surface(&mut self, path: &Path) -> Result<ModelSurface, CliError> {
        self.parse(path, json::surface_from_json)
    }

    pub fn signature_config(&mut self, path: &Path) -> Result<SignatureConfig, CliError> {
        self.parse(path, |v| {
            serde_json::from_value(v.clone()).map_err(|e| ParseError::schema("$", e.to_string()))
        })
    }
}

use bhkzeta_core::invertible::{validate, ExponentMatrix, InvertibleData};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::CliError;

/// A pencil description on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilFile {
    pub name: String,
    pub matrix: Vec<Vec<u32>>,
    #[serde(default)]
    pub deformed: bool,
    #[serde(default)]
    pub notes: String,
}

pub const BUNDLED: &[(&str, &str)] = &[
    ("f4", include_str!("../fixtures/pencils/f4.json")),
    ("f2l2", include_str!("../fixtures/pencils/f2l2.json")),
    ("f1l3", include_str!("../fixtures/pencils/f1l3.json")),
    ("l2l2", include_str!("../fixtures/pencils/l2l2.json")),
    ("l4", include_str!("../fixtures/pencils/l4.json")),
    ("chain3", include_str!("../fixtures/pencils/chain3.json")),
    ("chain-fermat", include_str!("../fixtures/pencils/chain_fermat.json")),
];

impl PencilFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("pencil file: {e}")))
    }

    /// A path on disk, or the name of a bundled fixture such as `f4`.
    pub fn load(spec: &str) -> Result<Self, CliError> {
        if let Some((_, text)) = BUNDLED.iter().find(|(n, _)| n.eq_ignore_ascii_case(spec)) {
            return Self::from_json(text);
        }
        let text = std::fs::read_to_string(Path::new(spec)).map_err(|e| CliError::Usage(format!("{spec}: {e}")))?;
        Self::from_json(&text)
    }

    pub fn bundled(name: &str) -> Self {
        let (_, text) = BUNDLED.iter().find(|(n, _)| *n == name).expect("bundled fixture");
        Self::from_json(text).expect("bundled fixture parses")
    }

    pub fn exponent_matrix(&self) -> Result<ExponentMatrix, CliError> {
        Ok(ExponentMatrix::new(self.matrix.clone())?)
    }

    pub fn validated(&self) -> Result<InvertibleData, CliError> {
        Ok(validate(&self.exponent_matrix()?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_validate() {
        for (name, _) in BUNDLED {
            let p = PencilFile::load(name).unwrap();
            assert!(p.validated().is_ok(), "{name}");
        }
        assert!(PencilFile::from_json(r#"{"name":"x","matrix":[[1,2],[3]]}"#).unwrap().validated().is_err());
        assert!(PencilFile::load("/nonexistent/file.json").is_err());
    }
}

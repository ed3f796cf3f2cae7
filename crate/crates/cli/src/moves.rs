use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use atomc_core::shuttle::{validate_sequence, AodGrid, Move, MoveViolation};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveFile {
    pub grid: AodGrid,
    #[serde(default)]
    pub moves: Vec<Move>,
}

pub fn load(path: &Path) -> Result<MoveFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: MoveFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.grid.validate()?;
    Ok(file)
}

pub fn check(file: &MoveFile) -> Vec<(usize, MoveViolation)> {
    validate_sequence(&file.grid, &file.moves)
}

use std::path::Path;

use backaction::channels::ControlledGate;
use backaction::{CMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// JSON description of a controlled gate: `controlled[j][row][col] = [re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateFile {
    pub n: usize,
    pub m: usize,
    pub controlled: Vec<Vec<Vec<[f64; 2]>>>,
}

impl GateFile {
    pub fn to_gate(&self) -> Result<ControlledGate, CliError> {
        if self.n == 0 || self.m == 0 {
            return Err(CliError::Input("gate file needs n >= 1 and m >= 1".into()));
        }
        if self.controlled.len() != self.n {
            return Err(CliError::Input(format!(
                "gate file declares n = {} but lists {} controlled matrices",
                self.n,
                self.controlled.len()
            )));
        }
        let mut controls = Vec::with_capacity(self.n);
        for (j, rows) in self.controlled.iter().enumerate() {
            if rows.len() != self.m {
                return Err(CliError::Input(format!("controlled[{j}] has {} rows, expected {}", rows.len(), self.m)));
            }
            let mut data = Vec::with_capacity(self.m * self.m);
            for (r, row) in rows.iter().enumerate() {
                if row.len() != self.m {
                    return Err(CliError::Input(format!(
                        "controlled[{j}] row {r} has {} entries, expected {}",
                        row.len(),
                        self.m
                    )));
                }
                for (c, &[re, im]) in row.iter().enumerate() {
                    if !re.is_finite() || !im.is_finite() {
                        return Err(CliError::Input(format!("controlled[{j}][{r}][{c}] is not finite")));
                    }
                    data.push(C64::new(re, im));
                }
            }
            controls.push(CMatrix::from_vec(self.m, self.m, data)?);
        }
        Ok(ControlledGate::new(controls)?)
    }

    pub fn load(path: &Path) -> Result<ControlledGate, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read gate file {}: {e}", path.display())))?;
        let file: GateFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("malformed gate file {}: {e}", path.display())))?;
        file.to_gate()
    }
}

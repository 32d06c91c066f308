//! On-disk density-matrix format: JSON with complex entries as [re, im]
//! pairs. The canonical form is exactly what [`StateFile::canonical_json`]
//! emits; parsing it and re-serializing is byte-identical.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use weylcrit::nalgebra::DMatrix;
use weylcrit::num_complex::Complex64;
use weylcrit::DensityMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state(state: &DensityMatrix, name: Option<String>, source: Option<String>) -> Self {
        let d = state.total_dim();
        let matrix = (0..d)
            .map(|r| (0..d).map(|c| { let z = state.matrix()[(r, c)]; [z.re, z.im] }).collect())
            .collect();
        Self { name, source, dims: state.dims().to_vec(), matrix }
    }

    /// Rebuilds and validates the density matrix; the error string carries
    /// the shape problem or the full validation report.
    pub fn to_state(&self) -> Result<DensityMatrix, String> {
        let d: usize = self.dims.iter().product();
        if self.matrix.len() != d || self.matrix.iter().any(|row| row.len() != d) {
            return Err(format!(
                "matrix must be {d}×{d} for dims {:?}, found {} rows of lengths {:?}",
                self.dims,
                self.matrix.len(),
                self.matrix.iter().map(Vec::len).take(4).collect::<Vec<_>>(),
            ));
        }
        let mat = DMatrix::from_fn(d, d, |r, c| {
            let [re, im] = self.matrix[r][c];
            Complex64::new(re, im)
        });
        let state = DensityMatrix::new(self.dims.clone(), mat).map_err(|e| e.to_string())?;
        let report = state.validate();
        if !report.is_valid() {
            return Err(format!("not a density matrix: {report}"));
        }
        Ok(state)
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
    }

    pub fn canonical_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serialization cannot fail");
        text.push('\n');
        text
    }
}

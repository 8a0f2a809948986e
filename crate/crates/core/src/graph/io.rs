use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Network, Status};
use crate::error::{Error, Result};

/// On-disk layout. Field order matters: it fixes the byte layout of the output.
#[derive(Serialize, Deserialize)]
struct NetworkFile {
    n: usize,
    status: Vec<Status>,
    directed: Vec<[usize; 2]>,
    undirected: Vec<[usize; 2]>,
}

impl Network {
    /// Compact JSON with edge arrays sorted lexicographically.
    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            n: self.n(),
            status: self.statuses().to_vec(),
            directed: self.directed().iter().map(|&(i, j)| [i, j]).collect(),
            undirected: self.undirected().iter().map(|&(i, j)| [i, j]).collect(),
        };
        serde_json::to_string(&file).expect("network serialization cannot fail")
    }

    /// Parses the JSON format. The edges must already be canonical.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(s)?;
        if file.status.len() != file.n {
            return Err(Error::Input(format!(
                "status array has {} entries but n = {}",
                file.status.len(),
                file.n
            )));
        }
        if let Some(&[i, j]) = file.undirected.iter().find(|e| e[0] >= e[1]) {
            return Err(Error::NotCanonical(format!(
                "undirected edge [{i}, {j}] must be listed with i < j"
            )));
        }
        Network::new(
            file.status,
            file.directed.into_iter().map(|[i, j]| (i, j)).collect(),
            file.undirected.into_iter().map(|[i, j]| (i, j)).collect(),
        )
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

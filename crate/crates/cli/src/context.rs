use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use gevrey::Execution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config;
use crate::error::{CliError, CliResult};

/// Flags shared by every subcommand.
pub struct Ctx {
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub exec: Execution,
    pub seed: u64,
}

impl Ctx {
    pub fn load<T: DeserializeOwned>(&self, command: &str) -> CliResult<T> {
        let path = self.config.as_ref().ok_or_else(|| CliError::schema(format!("`{command}` needs --config")))?;
        config::load(path, command)
    }

    /// Directory that relative paths inside the config refer to.
    pub fn base(&self) -> PathBuf {
        self.config.as_deref().and_then(Path::parent).map(Path::to_path_buf).unwrap_or_default()
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.out.join(name);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
        }
        fs::write(&path, contents).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }
}

/// Minimal CSV builder; cells are numbers or plain identifiers.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[String]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Csv { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// A number in shortest round-trip form (exponent notation when tiny or
/// huge); empty when undefined.
pub fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

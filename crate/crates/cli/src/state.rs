//! On-disk state: a root directory holding the store dump, the asset/scene
//! registry and the run configuration, with an advisory lock for mutating
//! commands.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use teca_core::asset::AssetRegistry;
use teca_core::iri::Iri;
use teca_core::store::Store;
use teca_core::vocab::DEFAULT_BASE;

pub const ROOT_ENV: &str = "TECA_ROOT";
const STORE_FILE: &str = "store.nq";
const REGISTRY_FILE: &str = "registry.json";
const CONFIG_FILE: &str = "config.json";
const LOCK_FILE: &str = ".lock";

#[derive(Debug, Serialize, Deserialize)]
pub struct Config {
    pub base: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            base: DEFAULT_BASE.to_string(),
        }
    }
}

pub struct AppDir {
    pub root: PathBuf,
    pub store: Store,
    pub registry: AssetRegistry,
    pub config: Config,
}

/// Resolve the state directory: `--root` flag, then the environment
/// variable, then `./teca-data`.
pub fn resolve_root(flag: Option<&Path>) -> PathBuf {
    if let Some(path) = flag {
        return path.to_path_buf();
    }
    if let Ok(path) = std::env::var(ROOT_ENV) {
        return PathBuf::from(path);
    }
    PathBuf::from("teca-data")
}

impl AppDir {
    pub fn open(root: PathBuf) -> Result<Self> {
        let store_path = root.join(STORE_FILE);
        let store = if store_path.exists() {
            let text = fs::read_to_string(&store_path)
                .with_context(|| format!("reading {}", store_path.display()))?;
            Store::load(&text).with_context(|| format!("loading {}", store_path.display()))?
        } else {
            Store::new()
        };
        let registry_path = root.join(REGISTRY_FILE);
        let registry = if registry_path.exists() {
            let text = fs::read_to_string(&registry_path)
                .with_context(|| format!("reading {}", registry_path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", registry_path.display()))?
        } else {
            AssetRegistry::new()
        };
        let config_path = root.join(CONFIG_FILE);
        let config = if config_path.exists() {
            let text = fs::read_to_string(&config_path)
                .with_context(|| format!("reading {}", config_path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", config_path.display()))?
        } else {
            Config::default()
        };
        Ok(AppDir {
            root,
            store,
            registry,
            config,
        })
    }

    pub fn base(&self) -> Result<Iri> {
        Iri::new(self.config.base.clone()).context("configured base IRI is invalid")
    }

    pub fn save(&self) -> Result<()> {
        fs::create_dir_all(&self.root)
            .with_context(|| format!("creating {}", self.root.display()))?;
        fs::write(self.root.join(STORE_FILE), self.store.dump())?;
        fs::write(
            self.root.join(REGISTRY_FILE),
            serde_json::to_string_pretty(&self.registry)? + "\n",
        )?;
        fs::write(
            self.root.join(CONFIG_FILE),
            serde_json::to_string_pretty(&self.config)? + "\n",
        )?;
        Ok(())
    }
}

/// Held for the duration of a mutating command; other writers fail fast.
pub struct DirLock {
    path: PathBuf,
}

impl DirLock {
    pub fn acquire(root: &Path) -> Result<DirLock> {
        fs::create_dir_all(root)?;
        let path = root.join(LOCK_FILE);
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut file) => {
                use std::io::Write;
                let _ = writeln!(file, "{}", std::process::id());
                Ok(DirLock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                bail!(
                    "another command holds the lock at {} (remove the file if it is stale)",
                    path.display()
                )
            }
            Err(e) => Err(e).context("acquiring state lock"),
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

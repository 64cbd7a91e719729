use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::config::JobConfig;

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a JobConfig,
}

impl<'a> Manifest<'a> {
    pub fn new(config: &'a JobConfig) -> Self {
        Manifest {
            tool: "semiheat",
            version: env!("CARGO_PKG_VERSION"),
            config,
        }
    }
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    manifest: &'a Manifest<'a>,
    #[serde(flatten)]
    body: &'a T,
}

/// Writes files under the output directory; each carries the manifest.
pub struct Writer<'a> {
    dir: PathBuf,
    manifest: Manifest<'a>,
    pub written: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    pub fn new(cfg: &'a JobConfig) -> anyhow::Result<Self> {
        fs::create_dir_all(&cfg.out)
            .with_context(|| format!("creating output directory {}", cfg.out.display()))?;
        let mut w = Writer {
            dir: cfg.out.clone(),
            manifest: Manifest::new(cfg),
            written: Vec::new(),
        };
        let text = serde_json::to_string_pretty(&w.manifest)?;
        w.put("manifest.json", text + "\n")?;
        Ok(w)
    }

    fn put(&mut self, name: &str, text: String) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    /// `{"manifest": …, <fields of body>}`; `body` must serialize to an object.
    pub fn json<T: Serialize>(&mut self, name: &str, body: &T) -> anyhow::Result<()> {
        let w = Wrapped {
            manifest: &self.manifest,
            body,
        };
        self.put(name, serde_json::to_string_pretty(&w)? + "\n")
    }

    /// Text or CSV with the manifest as leading `#` comment line.
    pub fn text(&mut self, name: &str, body: &str) -> anyhow::Result<()> {
        let header = format!("# manifest: {}\n", serde_json::to_string(&self.manifest)?);
        self.put(name, header + body)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

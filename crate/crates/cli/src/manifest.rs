//! Run manifests: everything needed to replay a command and check that it
//! reproduces the same bytes.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use crate::files;

const TAG: &str = "HWM 1";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub command: String,
    /// Full argument list after the program name.
    pub args: Vec<String>,
    /// Resolved parameters, rationals as `num/den`.
    pub params: Vec<(String, String)>,
    pub seeds: Vec<u64>,
    pub inputs: Vec<(PathBuf, String)>,
    pub outputs: Vec<(PathBuf, String)>,
}

impl Manifest {
    pub fn new(command: &str, args: &[String]) -> Self {
        Self {
            command: command.into(),
            args: args.to_vec(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs
            .push((path.to_path_buf(), files::digest_file(path)?));
        Ok(())
    }

    pub fn output(&mut self, path: &Path) -> Result<()> {
        self.outputs
            .push((path.to_path_buf(), files::digest_file(path)?));
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{TAG}\ntool=drkit {}\ncommand={}\n",
            env!("CARGO_PKG_VERSION"),
            self.command
        );
        for arg in &self.args {
            out.push_str(&format!("arg={arg}\n"));
        }
        for (k, v) in &self.params {
            out.push_str(&format!("param.{k}={v}\n"));
        }
        for seed in &self.seeds {
            out.push_str(&format!("seed={seed}\n"));
        }
        for (path, digest) in &self.inputs {
            out.push_str(&format!("input={digest} {}\n", path.display()));
        }
        for (path, digest) in &self.outputs {
            out.push_str(&format!("output={digest} {}\n", path.display()));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(TAG) {
            bail!("not a manifest (expected `{TAG}`)");
        }
        let mut m = Manifest::default();
        for line in lines {
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("bad manifest line {line:?}"))?;
            let digest_path = || -> Result<(PathBuf, String)> {
                let (digest, path) = value
                    .split_once(' ')
                    .with_context(|| format!("bad digest line {line:?}"))?;
                Ok((PathBuf::from(path), digest.to_string()))
            };
            match key {
                "tool" => {}
                "command" => m.command = value.into(),
                "arg" => m.args.push(value.into()),
                "seed" => m.seeds.push(
                    value
                        .parse()
                        .with_context(|| format!("bad seed {value:?}"))?,
                ),
                "input" => m.inputs.push(digest_path()?),
                "output" => m.outputs.push(digest_path()?),
                k if k.starts_with("param.") => {
                    m.params.push((k["param.".len()..].into(), value.into()))
                }
                other => bail!("unknown manifest key `{other}`"),
            }
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        files::write_atomic(path, &self.render())
    }
}

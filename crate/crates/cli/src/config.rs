use std::str::FromStr;

use anyhow::{bail, Context};
use edge_patterns::{Bounds, CheckOptions, Variant};

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub bounds: Bounds,
    pub workers: usize,
    pub variant: Variant,
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Config {
    pub fn check_options(&self) -> CheckOptions {
        CheckOptions {
            bounds: self.bounds,
            workers: self.workers,
        }
    }
}

/// `P,L` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsArg(pub Bounds);

impl FromStr for BoundsArg {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (p, l) = s.split_once(',').context("expected PREFIX,LOOP")?;
        let p: usize = p.trim().parse().context("prefix bound")?;
        let l: usize = l.trim().parse().context("loop bound")?;
        if l == 0 {
            bail!("loop bound must be at least 1");
        }
        Ok(BoundsArg(Bounds::new(p, l)))
    }
}

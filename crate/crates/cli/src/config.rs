//! Run configuration: built-in defaults, then an optional `key=value` file,
//! then command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use ghcs::thermal::G2Convention;
use ghcs::{Family, FamilyParams, PochhammerVariant};
use serde_json::{json, Value};

/// Flags shared by every subcommand. All are optional so that a config file
/// value is only replaced when the flag is actually given.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// key=value file applied before the flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// bessel | jacobi
    #[arg(long, global = true)]
    pub family: Option<String>,
    #[arg(long, global = true)]
    pub m: Option<u32>,
    #[arg(long, global = true)]
    pub nu: Option<f64>,
    /// Fock truncation for operator matrices
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// radial quadrature nodes
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// tolerance of the moment-identity check
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// standard | shift-two-nu
    #[arg(long = "variant-pochhammer", global = true)]
    pub variant_pochhammer: Option<String>,
    /// as-written | conventional
    #[arg(long = "g2-convention", global = true)]
    pub g2_convention: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Family,
    pub m: u32,
    pub nu: f64,
    pub n_max: usize,
    pub nodes: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub variant: PochhammerVariant,
    pub g2: G2Convention,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            family: Family::Bessel,
            m: 1,
            nu: 0.5,
            n_max: 32,
            nodes: ghcs::measure::DEFAULT_NODES,
            tol: 1e-8,
            out: None,
            variant: PochhammerVariant::Standard,
            g2: G2Convention::AsWritten,
        }
    }
}

fn parse_variant(s: &str) -> Result<PochhammerVariant> {
    match s {
        "standard" => Ok(PochhammerVariant::Standard),
        "shift-two-nu" => Ok(PochhammerVariant::ShiftTwoNu),
        _ => bail!("unknown pochhammer variant '{s}' (expected standard or shift-two-nu)"),
    }
}

fn variant_name(v: PochhammerVariant) -> &'static str {
    match v {
        PochhammerVariant::Standard => "standard",
        PochhammerVariant::ShiftTwoNu => "shift-two-nu",
    }
}

fn g2_name(g: G2Convention) -> &'static str {
    match g {
        G2Convention::AsWritten => "as-written",
        G2Convention::Conventional => "conventional",
    }
}

impl RunConfig {
    /// Defaults, then `args.config`, then the explicit flags.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(path) = &args.config {
            cfg.apply_file(path)?;
        }
        let flags = [
            ("family", args.family.clone()),
            ("m", args.m.map(|v| v.to_string())),
            ("nu", args.nu.map(|v| v.to_string())),
            ("nmax", args.nmax.map(|v| v.to_string())),
            ("nodes", args.nodes.map(|v| v.to_string())),
            ("tol", args.tol.map(|v| v.to_string())),
            ("out", args.out.as_ref().map(|p| p.display().to_string())),
            ("variant-pochhammer", args.variant_pochhammer.clone()),
            ("g2-convention", args.g2_convention.clone()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, &v).with_context(|| format!("flag --{k}"))?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected key=value", path.display(), i + 1))?;
            self.set(k.trim(), v.trim()).with_context(|| format!("{}:{}", path.display(), i + 1))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "family" => self.family = value.parse()?,
            "m" => self.m = value.parse()?,
            "nu" => self.nu = value.parse()?,
            "nmax" | "n_max" => self.n_max = value.parse()?,
            "nodes" => self.nodes = value.parse()?,
            "tol" => self.tol = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            "variant-pochhammer" | "variant_pochhammer" => self.variant = parse_variant(value)?,
            "g2-convention" | "g2_convention" => self.g2 = value.parse()?,
            _ => bail!("unknown config key '{key}'"),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.params()?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            bail!("tol must be positive, got {}", self.tol);
        }
        if self.nodes < 8 {
            bail!("nodes must be at least 8, got {}", self.nodes);
        }
        if self.n_max == 0 {
            bail!("nmax must be positive");
        }
        Ok(())
    }

    pub fn params(&self) -> Result<FamilyParams> {
        Ok(FamilyParams::new(self.family, self.m, self.nu)?.with_variant(self.variant))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family.to_string(),
            "m": self.m,
            "nu": self.nu,
            "nmax": self.n_max,
            "nodes": self.nodes,
            "tol": self.tol,
            "out": self.out.as_ref().map(|p| p.display().to_string()),
            "variant-pochhammer": variant_name(self.variant),
            "g2-convention": g2_name(self.g2),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("ghcs-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "# comment\nfamily = jacobi\nm=2\nnu=0.7\ntol=1e-6\n").unwrap();
        let args = CommonArgs { config: Some(path), m: Some(3), ..Default::default() };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!(cfg.family, Family::Jacobi);
        assert_eq!(cfg.m, 3);
        assert_eq!(cfg.nu, 0.7);
        assert_eq!(cfg.tol, 1e-6);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let bad = |a: CommonArgs| RunConfig::resolve(&a).is_err();
        assert!(bad(CommonArgs { nu: Some(0.0), ..Default::default() }));
        assert!(bad(CommonArgs { tol: Some(-1.0), ..Default::default() }));
        assert!(bad(CommonArgs { family: Some("laguerre".into()), ..Default::default() }));
        assert!(bad(CommonArgs { variant_pochhammer: Some("x".into()), ..Default::default() }));
    }
}

//! Plain `key = value` pipeline configuration.

use std::path::PathBuf;
use std::str::FromStr;

use certify_engine::Policy;
use gkw_model::default_precision;

use crate::PipelineError;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub k_coarse: usize,
    pub k_fine: usize,
    /// Coarse precision in bits.
    pub prec: u32,
    /// Fine precision; defaults to `max(prec, 4 K_fine, 128)`.
    pub prec_fine: Option<u32>,
    /// Windows `1..=windows` around the leading candidates.
    pub windows: usize,
    /// Optional gap circle between candidates `gap` and `gap + 1`.
    pub gap: Option<usize>,
    pub n_full: usize,
    pub block: usize,
    pub m: usize,
    /// Window radius as a fraction of the distance to the nearest other candidate.
    pub radius_factor: f64,
    /// Expansion mode count; 0 skips the expansion.
    pub modes: usize,
    pub out_dir: PathBuf,
    pub max_prec: u32,
    pub max_m: usize,
    pub max_k: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            k_coarse: 32,
            k_fine: 64,
            prec: 256,
            prec_fine: None,
            windows: 3,
            gap: None,
            n_full: 5,
            block: 8,
            m: 256,
            radius_factor: 1.0 / 3.0,
            modes: 0,
            out_dir: PathBuf::from("pipeline-out"),
            max_prec: 256,
            max_m: 4096,
            max_k: 32,
        }
    }
}

fn value<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, PipelineError> {
    v.parse().map_err(|_| PipelineError::Config {
        line,
        msg: format!("bad value for `{key}`: {v}"),
    })
}

impl PipelineConfig {
    /// Unknown keys are errors. Escalation limits default to the starting
    /// values (no escalation) unless given.
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let mut c = PipelineConfig::default();
        let (mut max_prec, mut max_k) = (None, None);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let (k, v) = l.split_once('=').ok_or_else(|| PipelineError::Config {
                line,
                msg: format!("expected `key = value`: {l}"),
            })?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "K_coarse" => c.k_coarse = value(line, k, v)?,
                "K_fine" => c.k_fine = value(line, k, v)?,
                "prec" => c.prec = value(line, k, v)?,
                "prec_fine" => c.prec_fine = Some(value(line, k, v)?),
                "windows" => c.windows = value(line, k, v)?,
                "gap" => c.gap = Some(value(line, k, v)?),
                "n_full" => c.n_full = value(line, k, v)?,
                "block" => c.block = value(line, k, v)?,
                "m" => c.m = value(line, k, v)?,
                "radius_factor" => c.radius_factor = value(line, k, v)?,
                "modes" => c.modes = value(line, k, v)?,
                "out_dir" => c.out_dir = PathBuf::from(v),
                "max_prec" => max_prec = Some(value(line, k, v)?),
                "max_m" => c.max_m = value(line, k, v)?,
                "max_K" => max_k = Some(value(line, k, v)?),
                _ => {
                    return Err(PipelineError::Config {
                        line,
                        msg: format!("unknown key `{k}`"),
                    })
                }
            }
        }
        c.max_prec = max_prec.unwrap_or(c.prec);
        c.max_k = max_k.unwrap_or(c.k_coarse);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::Invalid(m.to_string()));
        if self.k_coarse == 0 || self.k_coarse > self.k_fine {
            return bad("need 0 < K_coarse <= K_fine");
        }
        if self.prec < 16 || self.max_prec < self.prec {
            return bad("need prec >= 16 and max_prec >= prec");
        }
        if self.m == 0 || self.max_m < self.m || self.block == 0 {
            return bad("need m > 0, max_m >= m, block > 0");
        }
        if self.max_k < self.k_coarse {
            return bad("need max_K >= K_coarse");
        }
        if !(self.radius_factor > 0.0 && self.radius_factor < 0.5) {
            return bad("radius_factor must lie in (0, 1/2)");
        }
        if self.windows == 0 && self.gap.is_none() {
            return bad("nothing to certify");
        }
        Ok(())
    }

    pub fn fine_precision(&self) -> u32 {
        self.prec_fine
            .unwrap_or_else(|| self.prec.max(default_precision(self.k_fine)))
    }

    /// Sampling policy with the starting `m`; escalation doubles it.
    pub fn policy(&self, m: usize) -> Policy {
        Policy {
            n_full: self.n_full,
            block: self.block,
            m,
            max_m: m,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "K_coarse = {}\nK_fine = {}\nprec = {}\nprec_fine = {}\nwindows = {}\n",
            self.k_coarse,
            self.k_fine,
            self.prec,
            self.fine_precision(),
            self.windows
        );
        if let Some(g) = self.gap {
            s.push_str(&format!("gap = {g}\n"));
        }
        s.push_str(&format!(
            "n_full = {}\nblock = {}\nm = {}\nradius_factor = {}\nmodes = {}\nout_dir = {}\nmax_prec = {}\nmax_m = {}\nmax_K = {}\n",
            self.n_full,
            self.block,
            self.m,
            self.radius_factor,
            self.modes,
            self.out_dir.display(),
            self.max_prec,
            self.max_m,
            self.max_k
        ));
        s
    }
}

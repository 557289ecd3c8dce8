//! Probe configuration files: one `key = value` per line, `#` comments.
//!
//! Keys: `p`, `N`, `signs`, `flat_lengths` | `uniform`, `r`, `eps`,
//! `seeds`, `M`, `max_iter`, `gtol`, `seed`.

#[derive(Debug, Clone)]
pub struct ProbeFileConfig {
    pub p: Option<f64>,
    pub n_loops: Option<usize>,
    pub signs: Option<String>,
    pub flat_lengths: Option<String>,
    pub uniform: bool,
    pub r: Option<f64>,
    pub eps: f64,
    pub seeds: usize,
    pub m: usize,
    pub max_iter: usize,
    pub gtol: f64,
    pub base_seed: u64,
}

impl Default for ProbeFileConfig {
    fn default() -> Self {
        ProbeFileConfig {
            p: None,
            n_loops: None,
            signs: None,
            flat_lengths: None,
            uniform: false,
            r: None,
            eps: 0.02,
            seeds: 20,
            m: 400,
            max_iter: 4000,
            gtol: 1e-7,
            base_seed: 1,
        }
    }
}

impl ProbeFileConfig {
    pub fn parse(text: &str) -> Result<ProbeFileConfig, String> {
        let mut cfg = ProbeFileConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let bad = |e: &dyn std::fmt::Display| format!("line {}: {key}: {e}", lineno + 1);
            match key {
                "p" => cfg.p = Some(value.parse().map_err(|e| bad(&e))?),
                "N" => cfg.n_loops = Some(value.parse().map_err(|e| bad(&e))?),
                "signs" => cfg.signs = Some(value.to_string()),
                "flat_lengths" => cfg.flat_lengths = Some(value.to_string()),
                "uniform" => cfg.uniform = value.parse().map_err(|e| bad(&e))?,
                "r" => cfg.r = Some(value.parse().map_err(|e| bad(&e))?),
                "eps" => cfg.eps = value.parse().map_err(|e| bad(&e))?,
                "seeds" => cfg.seeds = value.parse().map_err(|e| bad(&e))?,
                "M" => cfg.m = value.parse().map_err(|e| bad(&e))?,
                "max_iter" => cfg.max_iter = value.parse().map_err(|e| bad(&e))?,
                "gtol" => cfg.gtol = value.parse().map_err(|e| bad(&e))?,
                "seed" => cfg.base_seed = value.parse().map_err(|e| bad(&e))?,
                other => return Err(format!("line {}: unknown key '{other}'", lineno + 1)),
            }
        }
        Ok(cfg)
    }
}

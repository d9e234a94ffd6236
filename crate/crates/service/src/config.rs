use std::net::SocketAddr;
use std::path::PathBuf;

use zeta_atlas::render::PresetTable;
use zeta_atlas::EvalParams;

/// Guards against accidentally huge jobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    /// Largest rendered width or height, in pixels.
    pub max_px: u32,
    /// Largest `|Im|` of any viewport, parameter or catalog range.
    pub max_abs_im: f64,
    pub max_iter: usize,
    /// Orbit traces are cut to this many points.
    pub max_trace: usize,
    /// Responses kept in the in-process cache.
    pub cache_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_px: 1024,
            max_abs_im: 300.0,
            max_iter: 4096,
            max_trace: 512,
            cache_entries: 256,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    pub limits: Limits,
    /// Evaluation parameters for requests that give none.
    pub eval: EvalParams,
    /// Directory served at `/` (the explorer bundle), if any.
    pub static_dir: Option<PathBuf>,
    pub presets: PresetTable,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            limits: Limits::default(),
            eval: EvalParams::default(),
            static_dir: None,
            presets: PresetTable::builtin(),
        }
    }
}

impl ServiceConfig {
    /// Read `ZETA_ATLAS_*` overrides from the process environment.
    pub fn from_env() -> Result<ServiceConfig, String> {
        ServiceConfig::from_vars(|k| std::env::var(k).ok())
    }

    /// Keys: `ZETA_ATLAS_LISTEN`, `ZETA_ATLAS_MAX_PX`, `ZETA_ATLAS_MAX_IM`,
    /// `ZETA_ATLAS_MAX_ITER`, `ZETA_ATLAS_MAX_TRACE`, `ZETA_ATLAS_CACHE`,
    /// `ZETA_ATLAS_TERMS` (switches to truncated eta), `ZETA_ATLAS_STATIC`,
    /// `ZETA_ATLAS_PRESETS` (a user preset file merged over the built-ins).
    pub fn from_vars(var: impl Fn(&str) -> Option<String>) -> Result<ServiceConfig, String> {
        fn parse<T: std::str::FromStr>(key: &str, v: String) -> Result<T, String> {
            v.trim().parse().map_err(|_| format!("{key}: cannot parse {v:?}"))
        }
        let mut cfg = ServiceConfig::default();
        if let Some(v) = var("ZETA_ATLAS_LISTEN") {
            cfg.listen = parse("ZETA_ATLAS_LISTEN", v)?;
        }
        if let Some(v) = var("ZETA_ATLAS_MAX_PX") {
            cfg.limits.max_px = parse("ZETA_ATLAS_MAX_PX", v)?;
        }
        if let Some(v) = var("ZETA_ATLAS_MAX_IM") {
            cfg.limits.max_abs_im = parse("ZETA_ATLAS_MAX_IM", v)?;
        }
        if let Some(v) = var("ZETA_ATLAS_MAX_ITER") {
            cfg.limits.max_iter = parse("ZETA_ATLAS_MAX_ITER", v)?;
        }
        if let Some(v) = var("ZETA_ATLAS_MAX_TRACE") {
            cfg.limits.max_trace = parse("ZETA_ATLAS_MAX_TRACE", v)?;
        }
        if let Some(v) = var("ZETA_ATLAS_CACHE") {
            cfg.limits.cache_entries = parse("ZETA_ATLAS_CACHE", v)?;
        }
        if let Some(v) = var("ZETA_ATLAS_TERMS") {
            cfg.eval = EvalParams::truncated(parse("ZETA_ATLAS_TERMS", v)?);
            cfg.eval.validate().map_err(|e| e.to_string())?;
        }
        if let Some(v) = var("ZETA_ATLAS_STATIC") {
            cfg.static_dir = Some(PathBuf::from(v));
        }
        if let Some(v) = var("ZETA_ATLAS_PRESETS") {
            let text = std::fs::read_to_string(&v).map_err(|e| format!("{v}: {e}"))?;
            let user = PresetTable::from_toml(&text).map_err(|e| e.to_string())?;
            cfg.presets.merge(user);
        }
        Ok(cfg)
    }
}

//! Stateless HTTP facade over `zeta-atlas`.
//!
//! | endpoint          | returns |
//! |-------------------|---------|
//! | `/api/tile`       | PNG tile of a portrait, parameter plane or Julia set |
//! | `/api/orbit`      | orbit classification with a trace |
//! | `/api/criticals`  | critical-point catalog, or one label |
//! | `/api/zeros`      | zeros on the critical line |
//! | `/api/transfer`   | principal point and fixed values |
//! | `/api/presets`    | the preset table |
//!
//! Complex numbers go in as `re,im` and come out as `[re, im]`. Every
//! response carries a SHA-256 ETag; repeated requests are served from a
//! bounded cache keyed by the canonical query.

mod cache;
mod config;
mod params;

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};
use tower_http::services::ServeDir;
use zeta_atlas::critical::{find_real_criticals, find_unreal_criticals, find_zeros, resolve_label, CriticalPoint};
use zeta_atlas::dynamics::{trace_orbit, FamilyKind, IterationParams};
use zeta_atlas::render::{ColorScheme, RenderJob, SchemeTag, View};
use zeta_atlas::transfer::{find_fixed_values, principal_point, SCAN_GRID};
use zeta_atlas::viewport::{PixelWindow, Viewport};
use zeta_atlas::{EvalParams, FunctionId};

pub use cache::{Cached, ResponseCache};
pub use config::{Limits, ServiceConfig};
pub use params::{parse_complex, Params};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    pub fn bad(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            message: message.into(),
        }
    }
}

impl From<zeta_atlas::Error> for ApiError {
    fn from(e: zeta_atlas::Error) -> Self {
        ApiError::bad(e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.message });
        (self.status, axum::Json(body)).into_response()
    }
}

struct AppState {
    cfg: ServiceConfig,
    cache: ResponseCache,
}

type Shared = Arc<AppState>;

pub fn router(cfg: ServiceConfig) -> Router {
    let static_dir = cfg.static_dir.clone();
    let state = Arc::new(AppState {
        cache: ResponseCache::new(cfg.limits.cache_entries),
        cfg,
    });
    let api = Router::new()
        .route("/api/tile", get(|s, q, h| endpoint(s, q, h, "tile", tile)))
        .route("/api/orbit", get(|s, q, h| endpoint(s, q, h, "orbit", orbit)))
        .route(
            "/api/criticals",
            get(|s, q, h| endpoint(s, q, h, "criticals", criticals)),
        )
        .route("/api/zeros", get(|s, q, h| endpoint(s, q, h, "zeros", zeros)))
        .route("/api/transfer", get(|s, q, h| endpoint(s, q, h, "transfer", transfer)))
        .route("/api/presets", get(|s, q, h| endpoint(s, q, h, "presets", presets)))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Bind `cfg.listen` and serve until the process ends.
pub async fn serve(cfg: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(cfg.listen).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(cfg)).await
}

type Handler = fn(&ServiceConfig, &Params) -> Result<Cached, ApiError>;

async fn endpoint(
    State(state): State<Shared>,
    Query(query): Query<BTreeMap<String, String>>,
    headers: HeaderMap,
    name: &'static str,
    handler: Handler,
) -> Response {
    let params = Params(query);
    let key = params.cache_key(name);
    let result = match state.cache.get(&key) {
        Some(hit) => Ok(hit),
        None => {
            let st = Arc::clone(&state);
            // the library is CPU-bound; keep it off the reactor
            match tokio::task::spawn_blocking(move || handler(&st.cfg, &params)).await {
                Ok(Ok(fresh)) => {
                    state.cache.insert(key, fresh.clone());
                    Ok(fresh)
                }
                Ok(Err(e)) => Err(e),
                Err(e) => Err(ApiError {
                    status: StatusCode::INTERNAL_SERVER_ERROR,
                    message: format!("handler failed: {e}"),
                }),
            }
        }
    };
    match result {
        Err(e) => e.into_response(),
        Ok(c) => {
            let matches = headers
                .get(header::IF_NONE_MATCH)
                .and_then(|v| v.to_str().ok())
                .is_some_and(|v| v.split(',').any(|t| t.trim() == c.etag));
            let status = if matches {
                StatusCode::NOT_MODIFIED
            } else {
                StatusCode::OK
            };
            let body = if matches { Vec::new() } else { c.body.as_ref().clone() };
            (
                status,
                [
                    (header::CONTENT_TYPE, c.content_type.to_string()),
                    (header::ETAG, c.etag.clone()),
                    (header::CACHE_CONTROL, "public, max-age=86400".to_string()),
                ],
                body,
            )
                .into_response()
        }
    }
}

fn finish(content_type: &'static str, body: Vec<u8>) -> Cached {
    let etag = format!("\"{}\"", hex::encode(Sha256::digest(&body)));
    Cached {
        content_type,
        etag,
        body: Arc::new(body),
    }
}

fn json<T: Serialize>(v: &T) -> Result<Cached, ApiError> {
    let body = serde_json::to_vec(v).map_err(|e| ApiError::bad(e.to_string()))?;
    Ok(finish("application/json", body))
}

const ITER_KEYS: [&str; 5] = ["max_iter", "escape_radius", "plateau_re", "eps_cycle", "history"];

fn function(p: &Params) -> Result<FunctionId, ApiError> {
    p.get_or("function", FunctionId::Zeta)
}

fn family(p: &Params) -> Result<FamilyKind, ApiError> {
    p.get_or("family", FamilyKind::Additive)
}

fn eval_params(cfg: &ServiceConfig, p: &Params) -> Result<EvalParams, ApiError> {
    let ep = match p.get::<usize>("terms")? {
        Some(n) => EvalParams::truncated(n),
        None => cfg.eval,
    };
    ep.validate()?;
    Ok(ep)
}

fn iteration_params(cfg: &ServiceConfig, p: &Params) -> Result<IterationParams, ApiError> {
    let d = IterationParams::default();
    let max_iter = p.get_or("max_iter", d.max_iter)?;
    if max_iter > cfg.limits.max_iter {
        return Err(ApiError::bad(format!(
            "max_iter {max_iter} exceeds the limit {}",
            cfg.limits.max_iter
        )));
    }
    let ip = IterationParams {
        max_iter,
        escape_radius: p.finite("escape_radius", d.escape_radius)?,
        plateau_re: p.finite("plateau_re", d.plateau_re)?,
        eps_cycle: p.finite("eps_cycle", d.eps_cycle)?,
        history: p.get_or("history", d.history.min(max_iter))?,
    };
    ip.validate()?;
    Ok(ip)
}

fn check_im(cfg: &ServiceConfig, what: &str, im: f64) -> Result<(), ApiError> {
    if im.abs() > cfg.limits.max_abs_im {
        return Err(ApiError::bad(format!(
            "{what} reaches |Im| = {}, beyond the limit {}",
            im.abs(),
            cfg.limits.max_abs_im
        )));
    }
    Ok(())
}

/// A critical point by label, 404 when no such point exists within the
/// desk limits.
fn critical_by_label(
    cfg: &ServiceConfig,
    fid: FunctionId,
    label: &str,
    ep: &EvalParams,
) -> Result<CriticalPoint, ApiError> {
    let missing = || ApiError::not_found(format!("no critical point {label} for {fid}"));
    let coord = label
        .strip_prefix(fid.label_prefix())
        .and_then(|r| r.parse::<f64>().ok())
        .ok_or_else(missing)?;
    // the plateau point is conventional; anything else must be in range
    if coord != 1000.0 && coord.abs() > cfg.limits.max_abs_im {
        return Err(missing());
    }
    resolve_label(fid, label, ep)?.ok_or_else(missing)
}

/// A start point or parameter: `re,im` or a critical label.
fn point_or_label(cfg: &ServiceConfig, fid: FunctionId, s: &str, ep: &EvalParams) -> Result<Complex64, ApiError> {
    match parse_complex(s) {
        Ok(z) => Ok(z),
        Err(_) => Ok(critical_by_label(cfg, fid, s, ep)?.location),
    }
}

fn tile(cfg: &ServiceConfig, p: &Params) -> Result<Cached, ApiError> {
    let mut keys = vec![
        "function",
        "view",
        "family",
        "start",
        "c",
        "cx",
        "cy",
        "width",
        "px",
        "px_w",
        "px_h",
        "scheme",
        "terms",
        "supersample",
        "band_scale",
        "x0",
        "y0",
        "w",
        "h",
    ];
    keys.extend(ITER_KEYS);
    p.check_keys(&keys)?;
    let fid = function(p)?;
    fid.validate()?;
    let fam = family(p)?;
    let ep = eval_params(cfg, p)?;
    let ip = iteration_params(cfg, p)?;

    let px: u32 = p.get_or("px", 256)?;
    let (px_w, px_h) = (p.get_or("px_w", px)?, p.get_or("px_h", px)?);
    let max = cfg.limits.max_px;
    if px_w > max || px_h > max {
        return Err(ApiError::bad(format!("{px_w}×{px_h} pixels exceeds the limit {max}")));
    }
    let width = p.finite("width", 4.0)?;
    let vp = Viewport::new(
        Complex64::new(p.finite("cx", 0.0)?, p.finite("cy", 0.0)?),
        width,
        px_w,
        px_h,
    )?;
    check_im(cfg, "the viewport", vp.center.im.abs() + vp.height() / 2.0)?;
    let win = PixelWindow {
        x0: p.get_or("x0", 0)?,
        y0: p.get_or("y0", 0)?,
        w: p.get_or("w", px_w)?,
        h: p.get_or("h", px_h)?,
    };
    if !win.fits(&vp) {
        return Err(ApiError::bad(format!("window {win:?} does not fit {px_w}×{px_h}")));
    }

    let view_name = p.str("view").unwrap_or("portrait");
    let view = match view_name {
        "portrait" => View::Portrait { function: fid },
        "derivative" | "derivative_portrait" => View::DerivativePortrait { function: fid },
        "parameter" | "parameter_plane" => {
            let s = p.require("start", p.str("start"))?;
            let start = point_or_label(cfg, fid, s, &ep)?;
            check_im(cfg, "start", start.im)?;
            View::ParameterPlane {
                function: fid,
                family: fam,
                start,
            }
        }
        "julia" => {
            let c = p.require("c", p.complex("c")?)?;
            check_im(cfg, "c", c.im)?;
            View::Julia {
                function: fid,
                family: fam,
                c,
            }
        }
        other => return Err(ApiError::bad(format!("unknown view {other:?}"))),
    };
    let default_tag = if matches!(view, View::Portrait { .. } | View::DerivativePortrait { .. }) {
        SchemeTag::Portrait
    } else {
        SchemeTag::EscapeSteps
    };
    let scheme = ColorScheme {
        tag: p.get_or("scheme", default_tag)?,
        band_scale: p.finite("band_scale", ColorScheme::default().band_scale)?,
        supersample: p.get_or("supersample", false)?,
    };
    let job = RenderJob {
        view,
        viewport: vp,
        scheme,
        iteration: ip,
        eval: ep,
    };
    let png = job.render_window(win)?.to_png()?;
    Ok(finish("image/png", png))
}

fn orbit(cfg: &ServiceConfig, p: &Params) -> Result<Cached, ApiError> {
    let mut keys = vec!["function", "family", "c", "z0", "terms", "trace"];
    keys.extend(ITER_KEYS);
    p.check_keys(&keys)?;
    let fid = function(p)?;
    let ep = eval_params(cfg, p)?;
    let ip = iteration_params(cfg, p)?;
    let c = p.complex("c")?.unwrap_or_default();
    let z0 = p.complex("z0")?.unwrap_or_default();
    check_im(cfg, "c", c.im)?;
    check_im(cfg, "z0", z0.im)?;
    let mut r = trace_orbit(fid, family(p)?, c, z0, &ip, &ep)?;
    if p.get_or("trace", true)? {
        if let Some(t) = r.trace.as_mut() {
            t.truncate(cfg.limits.max_trace);
        }
    } else {
        r.trace = None;
    }
    json(&r)
}

fn criticals(cfg: &ServiceConfig, p: &Params) -> Result<Cached, ApiError> {
    p.check_keys(&["function", "kind", "min", "max", "label", "terms"])?;
    let fid = function(p)?;
    let ep = eval_params(cfg, p)?;
    if let Some(label) = p.str("label") {
        return json(&critical_by_label(cfg, fid, label, &ep)?);
    }
    let kind = p.str("kind").unwrap_or("real");
    let (lo, hi) = match kind {
        "real" => (p.finite("min", -20.0)?, p.finite("max", 0.0)?),
        "unreal" => (p.finite("min", 1.0)?, p.finite("max", 100.0)?),
        other => return Err(ApiError::bad(format!("kind must be real or unreal, not {other:?}"))),
    };
    check_im(cfg, "the range", lo)?;
    check_im(cfg, "the range", hi)?;
    let list = if kind == "real" {
        find_real_criticals(fid, lo, hi, &ep)?
    } else {
        find_unreal_criticals(fid, lo, hi, &ep)?
    };
    json(&list)
}

fn zeros(cfg: &ServiceConfig, p: &Params) -> Result<Cached, ApiError> {
    p.check_keys(&["function", "min", "max", "terms"])?;
    let (lo, hi) = (p.finite("min", 0.0)?, p.finite("max", 30.0)?);
    check_im(cfg, "the range", lo)?;
    check_im(cfg, "the range", hi)?;
    json(&find_zeros(function(p)?, lo, hi, &eval_params(cfg, p)?)?)
}

fn transfer(cfg: &ServiceConfig, p: &Params) -> Result<Cached, ApiError> {
    p.check_keys(&["function", "family", "critical", "cx", "cy", "width", "terms"])?;
    let fid = function(p)?;
    let fam = family(p)?;
    let ep = eval_params(cfg, p)?;
    let label = p.require("critical", p.str("critical"))?;
    let cp = critical_by_label(cfg, fid, label, &ep)?;
    let principal = principal_point(&cp, fam)?;
    let centre = Complex64::new(p.finite("cx", principal.re)?, p.finite("cy", principal.im)?);
    let region = Viewport::new(centre, p.finite("width", 20.0)?, SCAN_GRID as u32, SCAN_GRID as u32)?;
    check_im(cfg, "the region", centre.im.abs() + region.height() / 2.0)?;
    json(&find_fixed_values(fid, &cp, fam, &region, &ep)?)
}

fn presets(cfg: &ServiceConfig, p: &Params) -> Result<Cached, ApiError> {
    p.check_keys(&[])?;
    json(&cfg.presets)
}

//! `zeta-atlas`: render presets or ad-hoc views to PNG, dump catalogs and
//! transfer analyses as JSON, and launch the HTTP service.
//!
//! Exit codes: 0 success, 1 computation or I/O failure, 2 bad arguments
//! (including an unknown preset name).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use zeta_atlas::critical::{find_real_criticals, find_unreal_criticals, find_zeros, resolve_label, CriticalPoint};
use zeta_atlas::dynamics::{trace_orbit, FamilyKind, IterationParams};
use zeta_atlas::farey::{farey, fitted_exponents, rh_stats, FareyStats};
use zeta_atlas::render::{Preset, PresetTable, SchemeTag, StartSpec, ViewKind};
use zeta_atlas::transfer::{find_fixed_values, principal_point, SCAN_GRID};
use zeta_atlas::viewport::Viewport;
use zeta_atlas::{EvalParams, FunctionId};
use zeta_atlas_service::ServiceConfig;

#[derive(Parser)]
#[command(
    name = "zeta-atlas",
    version,
    about = "Complex dynamics of the Riemann zeta function"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a preset or an ad-hoc view to PNG.
    Render(RenderArgs),
    /// Print a catalog or analysis as JSON.
    #[command(subcommand)]
    Analyze(Analyze),
    /// List the preset table as JSON.
    Presets {
        /// User preset file merged over the built-in table.
        #[arg(long)]
        presets: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    preset: Option<String>,
    /// User preset file merged over the built-in table.
    #[arg(long)]
    presets: Option<PathBuf>,
    #[arg(long, default_value = "out.png")]
    out: PathBuf,
    /// portrait, derivative, parameter or julia; inferred from --start or --c when absent.
    #[arg(long)]
    view: Option<String>,
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    family: Option<FamilyKind>,
    /// Critical label such as z-15, or re,im.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    /// Julia parameter as re,im.
    #[arg(long, allow_hyphen_values = true, value_parser = complex)]
    c: Option<Complex64>,
    #[arg(long, allow_hyphen_values = true, value_parser = complex)]
    center: Option<Complex64>,
    #[arg(long)]
    width: Option<f64>,
    /// Square size in pixels; --px-w and --px-h override each side.
    #[arg(long)]
    px: Option<u32>,
    #[arg(long)]
    px_w: Option<u32>,
    #[arg(long)]
    px_h: Option<u32>,
    #[arg(long)]
    scheme: Option<SchemeTag>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Plain truncated eta with this many terms.
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    supersample: bool,
}

#[derive(Subcommand)]
enum Analyze {
    /// Critical points by range or label.
    Criticals {
        #[arg(long, default_value = "zeta")]
        function: FunctionId,
        #[arg(long, conflicts_with = "unreal")]
        real: bool,
        #[arg(long)]
        unreal: bool,
        /// Real-part range for --real (default -20 0), imaginary for --unreal (default 1 100).
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["MIN", "MAX"])]
        range: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["real", "unreal", "range"])]
        label: Option<String>,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Zeros on the critical line.
    Zeros {
        #[arg(long, default_value = "zeta")]
        function: FunctionId,
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["MIN", "MAX"])]
        range: Option<Vec<f64>>,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Fixed values of the transfer function for one critical point.
    Transfer {
        #[arg(long, default_value = "zeta")]
        function: FunctionId,
        #[arg(long, allow_hyphen_values = true)]
        critical: String,
        #[arg(long, default_value = "additive")]
        family: FamilyKind,
        /// Centre of the scanned square; the principal point by default.
        #[arg(long, allow_hyphen_values = true, value_parser = complex)]
        center: Option<Complex64>,
        #[arg(long, default_value_t = 20.0)]
        width: f64,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Classify one orbit.
    Orbit {
        #[arg(long, default_value = "zeta")]
        function: FunctionId,
        #[arg(long, default_value = "additive")]
        family: FamilyKind,
        #[arg(long, allow_hyphen_values = true, value_parser = complex, default_value = "0,0")]
        c: Complex64,
        #[arg(long, allow_hyphen_values = true, value_parser = complex, default_value = "0,0")]
        z0: Complex64,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        terms: Option<usize>,
        /// Omit the orbit trace.
        #[arg(long)]
        no_trace: bool,
    },
    /// The Farey sequence and its discrepancy sums.
    Farey {
        #[arg(long)]
        n: u64,
        /// Also fit log-log slopes of both sums over orders 10, 15, …, n.
        #[arg(long)]
        fit: bool,
    },
}

#[derive(Args)]
struct ServeArgs {
    /// Overrides ZETA_ATLAS_LISTEN.
    #[arg(long)]
    listen: Option<std::net::SocketAddr>,
    /// Directory with the explorer bundle.
    #[arg(long = "static")]
    static_dir: Option<PathBuf>,
    #[arg(long)]
    presets: Option<PathBuf>,
}

/// Failure with its exit code.
struct Failure(u8, String);

impl From<zeta_atlas::Error> for Failure {
    fn from(e: zeta_atlas::Error) -> Self {
        Failure(1, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn complex(s: &str) -> Result<Complex64, String> {
    zeta_atlas_service::parse_complex(s)
}

fn eval(terms: Option<usize>) -> Result<EvalParams, Failure> {
    let ep = terms.map_or_else(EvalParams::default, EvalParams::truncated);
    ep.validate().map_err(|e| usage(e.to_string()))?;
    Ok(ep)
}

fn print_json<T: Serialize>(v: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure(1, e.to_string()))?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| Failure(1, e.to_string()))
}

fn preset_table(user: Option<&PathBuf>) -> Result<PresetTable, Failure> {
    let mut table = PresetTable::builtin();
    if let Some(path) = user {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        table.merge(PresetTable::from_toml(&text).map_err(|e| usage(e.to_string()))?);
    }
    Ok(table)
}

fn view_kind(name: &str) -> Result<ViewKind, Failure> {
    Ok(match name {
        "portrait" => ViewKind::Portrait,
        "derivative" | "derivative_portrait" => ViewKind::DerivativePortrait,
        "parameter" | "parameter_plane" => ViewKind::ParameterPlane,
        "julia" => ViewKind::Julia,
        other => return Err(usage(format!("unknown view {other:?}"))),
    })
}

/// The preset named by `--preset`, or a blank one, with every explicit
/// flag laid over it.
fn render_preset(a: &RenderArgs) -> Result<Preset, Failure> {
    let mut p = match &a.preset {
        Some(name) => preset_table(a.presets.as_ref())?
            .get(name)
            .cloned()
            .ok_or_else(|| usage(format!("unknown preset {name:?}")))?,
        None => Preset {
            name: "custom".into(),
            description: String::new(),
            view: ViewKind::Portrait,
            function: "zeta".into(),
            family: FamilyKind::Additive,
            start: None,
            c: None,
            center: [0.0, 0.0],
            width: 4.0,
            px_w: 256,
            px_h: 256,
            scheme: SchemeTag::Portrait,
            max_iter: None,
            terms: None,
            approximate: false,
        },
    };
    if let Some(f) = &a.function {
        f.parse::<FunctionId>().map_err(|e| usage(e.to_string()))?;
        p.function = f.clone();
    }
    if let Some(fam) = a.family {
        p.family = fam;
    }
    if let Some(s) = &a.start {
        p.start = Some(match complex(s) {
            Ok(z) => StartSpec::Point([z.re, z.im]),
            Err(_) => StartSpec::Label(s.clone()),
        });
    }
    if let Some(c) = a.c {
        p.c = Some([c.re, c.im]);
    }
    let explicit_view = a.view.as_deref().map(view_kind).transpose()?;
    let inferred = if a.start.is_some() {
        Some(ViewKind::ParameterPlane)
    } else if a.c.is_some() {
        Some(ViewKind::Julia)
    } else {
        None
    };
    if let Some(v) = explicit_view.or(inferred) {
        if v != p.view {
            p.view = v;
            p.scheme = match v {
                ViewKind::Portrait | ViewKind::DerivativePortrait => SchemeTag::Portrait,
                _ => SchemeTag::EscapeSteps,
            };
        }
    }
    if let Some(z) = a.center {
        p.center = [z.re, z.im];
    }
    if let Some(w) = a.width {
        p.width = w;
    }
    if let Some(n) = a.px {
        (p.px_w, p.px_h) = (n, n);
    }
    p.px_w = a.px_w.unwrap_or(p.px_w);
    p.px_h = a.px_h.unwrap_or(p.px_h);
    p.scheme = a.scheme.unwrap_or(p.scheme);
    p.max_iter = a.max_iter.or(p.max_iter);
    p.terms = a.terms.or(p.terms);
    Ok(p)
}

#[derive(Serialize)]
struct RenderReport<'a> {
    preset: &'a str,
    out: String,
    job: zeta_atlas::render::RenderJob,
}

fn cmd_render(a: &RenderArgs) -> Result<(), Failure> {
    let preset = render_preset(a)?;
    let mut job = preset.resolve().map_err(|e| usage(e.to_string()))?;
    job.scheme.supersample |= a.supersample;
    let png = job.render()?.to_png()?;
    std::fs::write(&a.out, png).map_err(|e| Failure(1, format!("{}: {e}", a.out.display())))?;
    print_json(&RenderReport {
        preset: &preset.name,
        out: a.out.display().to_string(),
        job,
    })
}

fn range(r: &Option<Vec<f64>>, default: (f64, f64)) -> (f64, f64) {
    r.as_deref().map_or(default, |v| (v[0], v[1]))
}

fn critical(fid: FunctionId, label: &str, ep: &EvalParams) -> Result<CriticalPoint, Failure> {
    resolve_label(fid, label, ep)?.ok_or_else(|| usage(format!("no critical point {label} for {fid}")))
}

#[derive(Serialize)]
struct FareyReport {
    n: u64,
    sequence: Vec<String>,
    stats: FareyStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    fitted_slopes: Option<FittedSlopes>,
}

#[derive(Serialize)]
struct FittedSlopes {
    orders: Vec<u64>,
    sum_abs_d: f64,
    sum_sq_d: f64,
}

fn cmd_analyze(a: &Analyze) -> Result<(), Failure> {
    match a {
        Analyze::Criticals {
            function,
            real: _,
            unreal,
            range: r,
            label,
            terms,
        } => {
            let ep = eval(*terms)?;
            if let Some(label) = label {
                return print_json(&critical(*function, label, &ep)?);
            }
            if *unreal {
                let (lo, hi) = range(r, (1.0, 100.0));
                print_json(&find_unreal_criticals(*function, lo, hi, &ep)?)
            } else {
                let (lo, hi) = range(r, (-20.0, 0.0));
                print_json(&find_real_criticals(*function, lo, hi, &ep)?)
            }
        }
        Analyze::Zeros {
            function,
            range: r,
            terms,
        } => {
            let (lo, hi) = range(r, (0.0, 30.0));
            print_json(&find_zeros(*function, lo, hi, &eval(*terms)?)?)
        }
        Analyze::Transfer {
            function,
            critical: label,
            family,
            center,
            width,
            terms,
        } => {
            let ep = eval(*terms)?;
            let cp = critical(*function, label, &ep)?;
            let centre = match center {
                Some(z) => *z,
                None => principal_point(&cp, *family)?,
            };
            let region = Viewport::new(centre, *width, SCAN_GRID as u32, SCAN_GRID as u32)?;
            print_json(&find_fixed_values(*function, &cp, *family, &region, &ep)?)
        }
        Analyze::Orbit {
            function,
            family,
            c,
            z0,
            max_iter,
            terms,
            no_trace,
        } => {
            let mut ip = IterationParams::default();
            if let Some(n) = max_iter {
                ip.max_iter = *n;
                ip.history = ip.history.min(*n);
            }
            let mut r = trace_orbit(*function, *family, *c, *z0, &ip, &eval(*terms)?)?;
            if *no_trace {
                r.trace = None;
            }
            print_json(&r)
        }
        Analyze::Farey { n, fit } => {
            let fitted_slopes = if *fit {
                let orders: Vec<u64> = (10..=*n).step_by(5).collect();
                let stats = orders.iter().map(|&k| rh_stats(k)).collect::<Result<Vec<_>, _>>()?;
                let (sum_abs_d, sum_sq_d) = fitted_exponents(&stats)?;
                Some(FittedSlopes {
                    orders,
                    sum_abs_d,
                    sum_sq_d,
                })
            } else {
                None
            };
            print_json(&FareyReport {
                n: *n,
                sequence: farey(*n)?.iter().map(|f| f.to_string()).collect(),
                stats: rh_stats(*n)?,
                fitted_slopes,
            })
        }
    }
}

fn cmd_serve(a: &ServeArgs) -> Result<(), Failure> {
    let mut cfg = ServiceConfig::from_env().map_err(usage)?;
    if let Some(l) = a.listen {
        cfg.listen = l;
    }
    if a.static_dir.is_some() {
        cfg.static_dir = a.static_dir.clone();
    }
    if a.presets.is_some() {
        cfg.presets = preset_table(a.presets.as_ref())?;
    }
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure(1, e.to_string()))?;
    rt.block_on(zeta_atlas_service::serve(cfg))
        .map_err(|e| Failure(1, e.to_string()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Render(a) => cmd_render(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Presets { presets } => preset_table(presets.as_ref()).and_then(|t| print_json(&t)),
        Command::Serve(a) => cmd_serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("zeta-atlas: {msg}");
            ExitCode::from(code)
        }
    }
}

//! Batch front end: `radmax <command> --config FILE --out DIR`.

mod config;
mod verify;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fractal_set::{estimate_dimensions, FractalSet};
use crate::norm_probe::{measure_probe, evaluate_probe, ProbeKind, ProbeParams};
use crate::quadrature::QuadratureSpec;
use crate::radial_operator::{monte_carlo_mean, spherical_mean_with_error, RadialProfile};
use crate::rational::{pow2, to_f64, Q};
use crate::type_set_geometry::{radial_type_set, region};

pub use config::{parse_exponent_pair, parse_scales, ExperimentConfig, ProbeSection, RegionRequest, Resolved};
pub use verify::{default_suite, Check};

#[derive(Debug, Parser)]
#[command(name = "radmax", version, about = "Spherical maximal functions over fractal dilation sets")]
pub struct Cli {
    /// Experiment file (key = value with [section] headers)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Relative quadrature tolerance (overrides `quadrature.rel_tol`)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for the Monte Carlo oracle
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Covering numbers, dimension estimates and characteristics of E
    Dims,
    /// Type-set polygon with boundary statuses
    Region,
    /// Counterexample probes with fitted exponents and verdicts
    Probe,
    /// Built-in property suite
    Verify,
    /// One spherical mean A_t f(r)
    Mean {
        d: u32,
        /// Profile expression, e.g. `pow(1,1,0,0,8)` or `chi(1,2)`
        profile: String,
        r: f64,
        t: f64,
        /// Also print a Monte Carlo estimate with this many samples
        #[arg(long)]
        mc: Option<usize>,
    },
    /// Collect manifests below the given directories into one CSV
    Report { dirs: Vec<PathBuf> },
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("radmax: {e}");
            e.exit_code()
        }
    }
}

struct Context {
    resolved: Resolved,
    config_path: Option<PathBuf>,
    config_hash: String,
    out: PathBuf,
    seed: u64,
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn context(cli: &Cli) -> Result<Context> {
    let (cfg, text) = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => (ExperimentConfig::default(), String::new()),
    };
    let mut resolved = cfg.resolve()?;
    if let Some(t) = cli.tol {
        resolved.quad.rel_tol = t;
        resolved.quad.validate().map_err(|e| Error::Config(format!("`--tol`: {e}")))?;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("radmax-out"));
    Ok(Context {
        resolved,
        config_path: cli.config.clone(),
        config_hash: hex_digest(text.as_bytes()),
        out,
        seed: cli.seed,
    })
}

/// Runs one parsed invocation; returns the exit code on success.
pub fn run(cli: &Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("`--threads`: must be positive".into()));
        }
        // a pool may already exist when called repeatedly in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if let Command::Mean { d, profile, r, t, mc } = &cli.command {
        let mut quad = QuadratureSpec::default();
        if let Some(tol) = cli.tol {
            quad.rel_tol = tol;
            quad.validate().map_err(|e| Error::Config(format!("`--tol`: {e}")))?;
        }
        let f = RadialProfile::parse(profile)?;
        let res = spherical_mean_with_error(*d, &f, *r, *t, &quad)?;
        println!("{:.10}", res.value);
        if let Some(n) = mc {
            let est = monte_carlo_mean(*d, &f, *r, *t, *n, cli.seed)?;
            println!("monte_carlo {:.10} ± {:.3e}", est.mean, est.std_error);
        }
        return Ok(0);
    }
    let ctx = context(cli)?;
    match &cli.command {
        Command::Dims => cmd_dims(&ctx),
        Command::Region => cmd_region(&ctx),
        Command::Probe => cmd_probe(&ctx),
        Command::Verify => cmd_verify(&ctx),
        Command::Report { dirs } => cmd_report(&ctx, dirs),
        Command::Mean { .. } => unreachable!(),
    }
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), body)?;
    Ok(())
}

fn join_q(v: &[Q]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn write_manifest(ctx: &Context, command: &str, entries: &[(&str, String)], outputs: &[String]) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "command = {command}");
    let cfg = ctx.config_path.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
    let _ = writeln!(s, "config = {cfg}");
    let _ = writeln!(s, "config_sha256 = {}", ctx.config_hash);
    let q = &ctx.resolved.quad;
    let _ = writeln!(s, "rel_tol = {:e}", q.rel_tol);
    let _ = writeln!(s, "abs_tol = {:e}", q.abs_tol);
    let _ = writeln!(s, "max_refinement = {}", q.max_refinement);
    let _ = writeln!(s, "max_panels = {}", q.max_panels);
    let _ = writeln!(s, "seed = {}", ctx.seed);
    for (k, v) in entries {
        let _ = writeln!(s, "{k} = {v}");
    }
    let _ = writeln!(s, "outputs = {}", outputs.join(" "));
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let _ = writeln!(s, "generated_at = {now}");
    write_file(&ctx.out, &format!("manifest_{command}.txt"), &s)
}

/// 2^-2 … 2^-14, cut at the set's resolution.
fn default_scales(e: &FractalSet) -> Vec<Q> {
    let res = e.resolution();
    (2..=14).map(|k| pow2(-k)).filter(|s| res.as_ref().is_none_or(|r| s >= r)).collect()
}

fn cmd_dims(ctx: &Context) -> Result<i32> {
    let e = ctx.resolved.require_set()?;
    let scales = ctx.resolved.dims_scales.clone().unwrap_or_else(|| default_scales(e));
    let rep = estimate_dimensions(e, &scales, &ctx.resolved.thetas)?;
    let files = [
        ("covering.csv", rep.covering_csv()),
        ("spectrum.csv", rep.spectrum_csv()),
        ("characteristics.csv", rep.characteristics_csv()),
        ("dims_summary.csv", rep.summary_csv()),
    ];
    for (name, body) in &files {
        write_file(&ctx.out, name, body)?;
    }
    println!(
        "beta = {:.4} (residual {:.4}), gamma = {:.4}, gamma* = {:.4}, chi_M bounded = {}, chi_A bounded = {}",
        rep.minkowski,
        rep.minkowski_residual,
        rep.quasi_assouad,
        rep.assouad,
        rep.minkowski_char_bounded,
        rep.assouad_char_bounded
    );
    write_manifest(
        ctx,
        "dims",
        &[("set", e.generator().to_string()), ("scales", join_q(&scales))],
        &files.iter().map(|f| f.0.to_string()).collect::<Vec<_>>(),
    )?;
    Ok(0)
}

fn cmd_region(ctx: &Context) -> Result<i32> {
    let req = ctx
        .resolved
        .region
        .as_ref()
        .ok_or_else(|| Error::Config("`region.beta`: missing".into()))?;
    let d = ctx.resolved.require_d()?;
    let reg = match req.kind {
        None => radial_type_set(d, &req.beta, &req.gamma, &req.gamma_star, &req.flags)?,
        Some(k) => region(k, d, &req.beta, &req.gamma)?,
    };
    write_file(&ctx.out, "vertices.csv", &reg.vertices_csv())?;
    write_file(&ctx.out, "boundary.csv", &reg.boundary_csv())?;
    let mut outputs = vec!["vertices.csv".to_string(), "boundary.csv".to_string()];
    if let Some(outer) = &reg.outer {
        write_file(&ctx.out, "outer_vertices.csv", &outer.vertices_csv())?;
        outputs.push("outer_vertices.csv".into());
    }
    println!("{reg}");
    let kind = req.kind.map(|k| format!("{k:?}")).unwrap_or_else(|| "radial".into());
    write_manifest(
        ctx,
        "region",
        &[
            ("d", d.to_string()),
            ("kind", kind),
            ("beta", req.beta.to_string()),
            ("gamma", req.gamma.to_string()),
            ("gamma_star", req.gamma_star.to_string()),
            ("flags", format!("{:?}", req.flags)),
        ],
        &outputs,
    )?;
    Ok(0)
}

fn inv(x: &Q) -> f64 {
    if *x == Q::from_integer(0.into()) {
        f64::INFINITY
    } else {
        1.0 / to_f64(x)
    }
}

fn cmd_probe(ctx: &Context) -> Result<i32> {
    let r = &ctx.resolved;
    let e = r.require_set()?;
    let d = r.require_d()?;
    if r.probes.is_empty() {
        return Err(Error::Config("`probe.families`: empty".into()));
    }
    if r.exponents.is_empty() {
        return Err(Error::Config("`probe.exponents`: empty".into()));
    }
    let scales = r
        .probe_scales
        .clone()
        .unwrap_or_else(|| (4..=10).map(|k| pow2(-k)).collect());
    let params = ProbeParams { center: r.center.clone(), window: r.window.clone(), dims: r.probe_dims };
    let mut summary = String::from("family,inv_p,inv_q,fitted_gap,residual,predicted_gap,verdict\n");
    let mut outputs = Vec::new();
    for kind in &r.probes {
        let ms = measure_probe(*kind, &params, e, d, &scales, &r.quad)?;
        for (i, (x, y)) in r.exponents.iter().enumerate() {
            let res = evaluate_probe(&ms, &params, e, d, inv(x), inv(y), &r.quad)?;
            let name = format!("probe_{kind}_{i}.csv");
            write_file(&ctx.out, &name, &res.to_csv())?;
            outputs.push(name);
            let line = res.summary_line();
            println!("{line}");
            summary += &line;
            summary.push('\n');
        }
    }
    write_file(&ctx.out, "probe_summary.csv", &summary)?;
    outputs.push("probe_summary.csv".into());
    let kinds: Vec<String> = r.probes.iter().map(ProbeKind::to_string).collect();
    let pairs: Vec<String> = r.exponents.iter().map(|(x, y)| format!("({x},{y})")).collect();
    write_manifest(
        ctx,
        "probe",
        &[
            ("set", e.generator().to_string()),
            ("d", d.to_string()),
            ("families", kinds.join(" ")),
            ("exponents", pairs.join(" ")),
            ("scales", join_q(&scales)),
        ],
        &outputs,
    )?;
    Ok(0)
}

fn cmd_verify(ctx: &Context) -> Result<i32> {
    let checks = default_suite(&ctx.resolved.quad, ctx.seed);
    let mut csv = String::from("check,status,detail\n");
    let passed = checks.iter().filter(|c| c.pass).count();
    for c in &checks {
        let status = if c.pass { "pass" } else { "fail" };
        println!("{:<28} {status:<4} {}", c.name, c.detail);
        csv += &format!("{},{status},{}\n", c.name, csv_field(&c.detail));
    }
    println!("{passed}/{} checks passed", checks.len());
    write_file(&ctx.out, "verify.csv", &csv)?;
    write_manifest(ctx, "verify", &[("passed", format!("{passed}/{}", checks.len()))], &["verify.csv".into()])?;
    Ok(if passed == checks.len() { 0 } else { 1 })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn parse_manifest(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once(" = ").map(|(k, v)| (k.trim().to_string(), v.trim().to_string())))
        .collect()
}

fn is_manifest(p: &Path) -> bool {
    p.file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| n.starts_with("manifest_") && n.ends_with(".txt"))
}

fn find_manifests(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?.filter_map(|e| e.ok().map(|e| e.path())).collect();
    entries.sort();
    out.extend(entries.iter().filter(|p| p.is_file() && is_manifest(p)).cloned());
    let subdirs = entries.into_iter().filter(|p| p.is_dir());
    for s in subdirs {
        find_manifests(&s, out)?;
    }
    Ok(())
}

fn cmd_report(ctx: &Context, dirs: &[PathBuf]) -> Result<i32> {
    let roots: Vec<PathBuf> = if dirs.is_empty() { vec![ctx.out.clone()] } else { dirs.to_vec() };
    let mut paths = Vec::new();
    for r in &roots {
        if !r.is_dir() {
            return Err(Error::Config(format!("`report`: {} is not a directory", r.display())));
        }
        find_manifests(r, &mut paths)?;
    }
    if paths.is_empty() {
        return Err(Error::Config("`report`: no manifest_*.txt found".into()));
    }
    let mut keys: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    for p in &paths {
        let entries = parse_manifest(&fs::read_to_string(p)?);
        for (k, _) in &entries {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
        rows.push((p.parent().map(|d| d.display().to_string()).unwrap_or_default(), entries));
    }
    let mut csv = String::from("directory");
    for k in &keys {
        csv.push(',');
        csv += k;
    }
    csv.push('\n');
    for (dir, entries) in rows {
        csv += &csv_field(&dir);
        for k in &keys {
            csv.push(',');
            if let Some((_, v)) = entries.iter().find(|(ek, _)| ek == k) {
                csv += &csv_field(v);
            }
        }
        csv.push('\n');
    }
    write_file(&ctx.out, "report.csv", &csv)?;
    print!("{csv}");
    Ok(0)
}

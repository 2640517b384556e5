//! Command-line front end. Every output embeds the full run configuration;
//! family coefficients are cached per level and reused when large enough.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::{
    bagchi_compare, greedy_support_approx, joint_moment_test, model_support_probability, moment_growth_test,
    petersson_check, sato_tate_test, smoothing_decay_test, universality_count, Generator, TargetFunction,
};
use crate::hecke::{compute_family, export_family, import_family, level_dir, FamilySnapshot, Provenance, META_FILE};
use crate::lfun::{default_n, family_ensemble};
use crate::randmodel::{model_ensemble, sample_on_grid, second_moment_stat, Ensemble, EvalGrid, DEFAULT_N};
use crate::serial::{fmt17, read_json, to_json_string, write_json, CsvTable};

const DEFAULT_GRID: &str = "0.75,0.2,64";

#[derive(Debug, Parser)]
#[command(name = "lfamily", version, about = "Random Euler products vs. families of weight-2 L-functions")]
struct Cli {
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Draws of the random Euler product.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Hecke eigenforms of prime level: compute, import, export, evaluate.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Marginal KS comparison of a family ensemble with a model ensemble.
    Compare(CompareArgs),
    /// Fraction of the family (or probability under the model) near a target.
    Universality(UniversalityArgs),
    /// Greedy choice of angles approximating log(target) by a prime sum.
    SupportApprox(SupportArgs),
    /// Diagnostics.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Debug, Subcommand)]
enum ModelCmd {
    Sample(ModelArgs),
    Ensemble(ModelArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of draws (ensemble only).
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Coefficient count; the smoothing length defaults to nmax / 2.
    #[arg(long)]
    nmax: Option<usize>,
    /// Smoothing length N.
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long, default_value = DEFAULT_GRID)]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LevelArgs {
    /// Prime level q.
    #[arg(long)]
    level: u64,
    /// Number of coefficients a_n to keep (default 2N).
    #[arg(long, alias = "nmax")]
    coeffs: Option<usize>,
    /// Coefficient cache root (one subdirectory per level).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum FamilyCmd {
    Compute {
        /// One or more prime levels.
        #[arg(long, value_delimiter = ',', required = true)]
        level: Vec<u64>,
        #[arg(long, alias = "nmax")]
        coeffs: Option<usize>,
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate an external coefficient directory and add it to the cache.
    Import {
        path: PathBuf,
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a level's coefficient files into a directory.
    Export {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate every form on a grid (ensemble layout, harmonic weights).
    Evaluate {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long, default_value = DEFAULT_GRID)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Saved family ensemble (from `family evaluate`).
    #[arg(long, requires = "model")]
    family: Option<PathBuf>,
    /// Saved model ensemble (from `model ensemble`).
    #[arg(long, requires = "family")]
    model: Option<PathBuf>,
    /// Compute both sides instead, at this level.
    #[arg(long, conflicts_with_all = ["family", "model"])]
    level: Option<u64>,
    #[arg(long, alias = "nmax")]
    coeffs: Option<usize>,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long, default_value = DEFAULT_GRID)]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct UniversalityArgs {
    /// Family level; omit together with `--model` to use the random model.
    #[arg(long, required_unless_present = "model")]
    level: Option<u64>,
    /// Estimate the probability under the random model instead.
    #[arg(long, conflicts_with = "level")]
    model: bool,
    #[arg(long, alias = "nmax")]
    coeffs: Option<usize>,
    #[arg(long)]
    cache: Option<PathBuf>,
    /// `const:<c>`, `poly:<c0,c1,...>` or `file:<path>`.
    #[arg(long)]
    target: String,
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long, default_value = DEFAULT_GRID)]
    grid: String,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SupportArgs {
    #[arg(long)]
    target: String,
    #[arg(long, default_value = DEFAULT_GRID)]
    grid: String,
    #[arg(long, default_value_t = 1000)]
    pmax: u64,
    /// Primes up to n0 are pinned to trace 2.
    #[arg(long, default_value_t = 1)]
    n0: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    /// KS distance of lambda_f(p) to Sato–Tate, per level.
    SatoTate {
        #[arg(long, value_delimiter = ',', required = true)]
        level: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, alias = "nmax")]
        coeffs: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Joint moments of lambda_f(p) against the model.
    Moments {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "2,2")]
        exponents: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Petersson formula against the harmonic weights.
    Petersson {
        #[command(flatten)]
        level: LevelArgs,
        /// Pairs `m:n`; (1,1) is always added for the normalization fit.
        #[arg(long, value_delimiter = ',', default_value = "2:2,2:3,3:5")]
        pairs: Vec<String>,
        /// Kloosterman sums run over c <= c_factor * q.
        #[arg(long, default_value_t = 10_000)]
        c_factor: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sup-norm gap between smoothed sums at N and at a reference length.
    Smoothing {
        /// Family level; the random model is used if absent.
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long = "n-list", value_delimiter = ',', default_value = "256,1024,4096")]
        n_list: Vec<usize>,
        /// Reference length (default 4 * max N).
        #[arg(long = "n-ref")]
        n_ref: Option<usize>,
        #[arg(long, default_value = DEFAULT_GRID)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean |L(sigma + it)| as t grows.
    Growth {
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0.75)]
        sigma: f64,
        #[arg(long = "t-list", value_delimiter = ',', default_value = "0,1,2,5,10,20")]
        t_list: Vec<f64>,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// E|sum_{n<=u} Y_n n^-sigma|^2 for several u.
    SecondMoment {
        #[arg(long, default_value_t = 0.75)]
        sigma: f64,
        #[arg(long = "u-list", value_delimiter = ',', default_value = "100,1000,10000")]
        u_list: Vec<usize>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Everything that determines a run, echoed into every output.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n_cut: Option<usize>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub eps: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    /// Command-specific settings (`key=value`).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<String>,
}

impl RunConfig {
    fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            ..RunConfig::default()
        }
    }

    fn extra(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.extra.push(format!("{key}={value}"));
        self
    }
}

#[derive(Serialize)]
struct Output<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    body: &'a T,
}

fn path_str(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

/// Write `{config, ...body}` as JSON (and the table as CSV next to it), or
/// print the JSON when no output path is given.
fn emit<T: Serialize>(cfg: &RunConfig, body: &T, table: Option<CsvTable>, out: Option<&Path>) -> Result<()> {
    let doc = Output { config: cfg, body };
    match out {
        Some(path) => {
            write_json(path, &doc)?;
            if let Some(t) = table {
                let text = format!("# config: {}\n{}", to_json_string(cfg)?, t.render());
                std::fs::write(path.with_extension("csv"), text)?;
            }
        }
        None => println!("{}", to_json_string(&doc)?),
    }
    Ok(())
}

fn grid_table(grid: &EvalGrid, rows: &[&[num_complex::Complex64]], labels: &[String]) -> CsvTable {
    let mut t = CsvTable::new(&["sample", "index", "s_re", "s_im", "re", "im"]);
    for (label, vals) in labels.iter().zip(rows) {
        for (i, (s, v)) in grid.points().iter().zip(vals.iter()).enumerate() {
            t.push(vec![label.clone(), i.to_string(), fmt17(s.re), fmt17(s.im), fmt17(v.re), fmt17(v.im)]);
        }
    }
    t
}

fn ensemble_table(e: &Ensemble) -> CsvTable {
    let labels: Vec<String> = match &e.meta.form_ids {
        Some(ids) => ids.clone(),
        None => (0..e.samples.len()).map(|i| i.to_string()).collect(),
    };
    let rows: Vec<&[num_complex::Complex64]> = e.samples.iter().map(|s| s.as_slice()).collect();
    grid_table(&e.meta.grid, &rows, &labels)
}

/// Family at level `q` with coefficients to `nmax`: from the cache when it
/// holds enough coefficients, otherwise computed (and cached).
fn family(q: u64, nmax: usize, cache: Option<&Path>) -> Result<(FamilySnapshot, bool)> {
    if let Some(root) = cache {
        let dir = level_dir(root, q);
        if dir.join(META_FILE).exists() {
            let snap = import_family(&dir)?;
            if snap.nmax >= nmax {
                return Ok((snap.truncated(nmax), true));
            }
        }
    }
    let snap = compute_family(q, nmax)?;
    if let Some(root) = cache {
        let dir = level_dir(root, q);
        std::fs::create_dir_all(&dir)?;
        export_family(&snap, &dir)?;
    }
    Ok((snap, false))
}

fn model_cutoff(nmax: Option<usize>, cutoff: Option<usize>) -> Result<usize> {
    let n = cutoff.unwrap_or_else(|| nmax.map_or(DEFAULT_N, |m| m / 2));
    if n == 0 {
        return Err(Error::invalid("smoothing length N must be positive"));
    }
    if let Some(m) = nmax {
        if 2 * n > m {
            return Err(Error::invalid(format!("2N = {} exceeds nmax = {m}", 2 * n)));
        }
    }
    Ok(n)
}

fn run_model(cmd: ModelCmd) -> Result<()> {
    let (name, a, ensemble) = match cmd {
        ModelCmd::Sample(a) => ("model sample", a, false),
        ModelCmd::Ensemble(a) => ("model ensemble", a, true),
    };
    let grid = EvalGrid::parse_spec(&a.grid)?;
    let n = model_cutoff(a.nmax, a.cutoff)?;
    let mut cfg = RunConfig {
        seed: Some(a.seed),
        nmax: Some(a.nmax.unwrap_or(2 * n)),
        n_cut: Some(n),
        grid: Some(grid.to_string()),
        out: path_str(&a.out),
        ..RunConfig::new(name)
    };
    if ensemble {
        cfg.m = Some(a.samples);
        let e = model_ensemble(a.seed, &grid, n, a.samples)?;
        emit(&cfg, &e, Some(ensemble_table(&e)), a.out.as_deref())
    } else {
        let h = sample_on_grid(a.seed, &grid, n)?;
        let t = grid_table(&grid, &[&h.values], &[a.seed.to_string()]);
        emit(&cfg, &h, Some(t), a.out.as_deref())
    }
}

#[derive(Serialize)]
struct LevelSummary {
    q: u64,
    g: usize,
    nmax: usize,
    provenance: Provenance,
    cache_hit: bool,
    dir: String,
}

fn summary(snap: &FamilySnapshot, hit: bool, dir: &Path) -> LevelSummary {
    LevelSummary {
        q: snap.q,
        g: snap.len(),
        nmax: snap.nmax,
        provenance: snap.provenance,
        cache_hit: hit,
        dir: dir.display().to_string(),
    }
}

#[derive(Serialize)]
struct Levels {
    levels: Vec<LevelSummary>,
}

fn level_nmax(q: u64, coeffs: Option<usize>) -> usize {
    coeffs.unwrap_or_else(|| 2 * default_n(q))
}

fn run_family(cmd: FamilyCmd) -> Result<()> {
    match cmd {
        FamilyCmd::Compute { level, coeffs, cache, out } => {
            let mut levels = Vec::new();
            for &q in &level {
                let nmax = level_nmax(q, coeffs);
                let (snap, hit) = family(q, nmax, Some(&cache))?;
                levels.push(summary(&snap, hit, &level_dir(&cache, q)));
            }
            let cfg = RunConfig {
                levels: level,
                nmax: coeffs,
                cache: Some(cache.display().to_string()),
                out: path_str(&out),
                ..RunConfig::new("family compute")
            };
            emit(&cfg, &Levels { levels }, None, out.as_deref())
        }
        FamilyCmd::Import { path, cache, out } => {
            let mut snap = import_family(&path)?;
            snap.provenance = Provenance::Imported;
            let dir = level_dir(&cache, snap.q);
            std::fs::create_dir_all(&dir)?;
            export_family(&snap, &dir)?;
            let cfg = RunConfig {
                levels: vec![snap.q],
                cache: Some(cache.display().to_string()),
                out: path_str(&out),
                ..RunConfig::new("family import")
            }
            .extra("source", path.display());
            emit(&cfg, &Levels { levels: vec![summary(&snap, false, &dir)] }, None, out.as_deref())
        }
        FamilyCmd::Export { level, out } => {
            let nmax = level_nmax(level.level, level.coeffs);
            let (snap, hit) = family(level.level, nmax, level.cache.as_deref())?;
            std::fs::create_dir_all(&out)?;
            export_family(&snap, &out)?;
            let cfg = RunConfig {
                levels: vec![level.level],
                nmax: Some(nmax),
                cache: path_str(&level.cache),
                out: Some(out.display().to_string()),
                ..RunConfig::new("family export")
            };
            emit(&cfg, &Levels { levels: vec![summary(&snap, hit, &out)] }, None, None)
        }
        FamilyCmd::Evaluate { level, cutoff, grid, out } => {
            let grid = EvalGrid::parse_spec(&grid)?;
            let n = cutoff.unwrap_or_else(|| default_n(level.level));
            let nmax = level.coeffs.unwrap_or(2 * n);
            let (snap, _) = family(level.level, nmax, level.cache.as_deref())?;
            let e = family_ensemble(&snap, &grid, n)?;
            let cfg = RunConfig {
                levels: vec![level.level],
                nmax: Some(nmax),
                n_cut: Some(n),
                m: Some(snap.len()),
                grid: Some(grid.to_string()),
                cache: path_str(&level.cache),
                out: path_str(&out),
                ..RunConfig::new("family evaluate")
            };
            emit(&cfg, &e, Some(ensemble_table(&e)), out.as_deref())
        }
    }
}

fn run_compare(a: CompareArgs) -> Result<()> {
    let mut cfg = RunConfig {
        cache: path_str(&a.cache),
        out: path_str(&a.out),
        ..RunConfig::new("compare")
    };
    let (fam, model) = match (&a.family, &a.model, a.level) {
        (Some(f), Some(m), _) => {
            cfg = cfg.extra("family", f.display()).extra("model", m.display());
            (read_json::<Ensemble>(f)?, read_json::<Ensemble>(m)?)
        }
        (_, _, Some(q)) => {
            let grid = EvalGrid::parse_spec(&a.grid)?;
            let n = a.cutoff.unwrap_or_else(|| default_n(q));
            let nmax = a.coeffs.unwrap_or(2 * n);
            let (snap, _) = family(q, nmax, a.cache.as_deref())?;
            cfg.levels = vec![q];
            cfg.seed = Some(a.seed);
            cfg.nmax = Some(nmax);
            cfg.n_cut = Some(n);
            cfg.m = Some(a.samples);
            cfg.grid = Some(grid.to_string());
            (family_ensemble(&snap, &grid, n)?, model_ensemble(a.seed, &grid, n, a.samples)?)
        }
        _ => return Err(Error::invalid("give either --family and --model, or --level")),
    };
    let report = bagchi_compare(&fam, &model)?;
    let mut t = CsvTable::new(&[
        "index", "s_re", "s_im", "ks_re", "ks_im", "ks_log_abs", "ks_re_natural", "ks_im_natural", "ks_log_abs_natural",
    ]);
    for p in &report.points {
        t.push(vec![
            p.index.to_string(),
            fmt17(p.s[0]),
            fmt17(p.s[1]),
            fmt17(p.ks_re),
            fmt17(p.ks_im),
            fmt17(p.ks_log_abs),
            fmt17(p.ks_re_natural),
            fmt17(p.ks_im_natural),
            fmt17(p.ks_log_abs_natural),
        ]);
    }
    emit(&cfg, &report, Some(t), a.out.as_deref())
}

#[derive(Serialize)]
struct Reports<T: Serialize> {
    reports: Vec<T>,
}

fn run_universality(a: UniversalityArgs) -> Result<()> {
    let grid = EvalGrid::parse_spec(&a.grid)?;
    let target = TargetFunction::parse(&a.target, &grid)?;
    let grid = target.grid.clone();
    let mut cfg = RunConfig {
        grid: Some(grid.to_string()),
        target: Some(a.target.clone()),
        eps: a.eps.clone(),
        cache: path_str(&a.cache),
        out: path_str(&a.out),
        ..RunConfig::new("universality")
    };
    if a.model {
        let n = a.cutoff.unwrap_or(DEFAULT_N);
        cfg.seed = Some(a.seed);
        cfg.n_cut = Some(n);
        cfg.m = Some(a.samples);
        cfg = cfg.extra("generator", "model");
        let r = model_support_probability(&target, &a.eps, a.samples, a.seed, n)?;
        let mut t = CsvTable::new(&["eps", "estimate", "stderr"]);
        for i in 0..r.eps.len() {
            t.push(vec![fmt17(r.eps[i]), fmt17(r.estimate[i]), fmt17(r.stderr[i])]);
        }
        return emit(&cfg, &r, Some(t), a.out.as_deref());
    }
    let q = a.level.ok_or_else(|| Error::invalid("--level is required without --model"))?;
    // reject before the (possibly long) family computation
    target.require_admissible()?;
    let n = a.cutoff.unwrap_or_else(|| default_n(q));
    let nmax = a.coeffs.unwrap_or(2 * n);
    let (snap, _) = family(q, nmax, a.cache.as_deref())?;
    let e = family_ensemble(&snap, &grid, n)?;
    cfg.levels = vec![q];
    cfg.nmax = Some(nmax);
    cfg.n_cut = Some(n);
    let reports = a
        .eps
        .iter()
        .map(|&eps| universality_count(&e, &target, eps))
        .collect::<Result<Vec<_>>>()?;
    let mut t = CsvTable::new(&["eps", "count", "g", "harmonic_fraction", "natural_fraction"]);
    for r in &reports {
        t.push(vec![
            fmt17(r.eps),
            r.count.to_string(),
            r.g.to_string(),
            fmt17(r.harmonic_fraction),
            fmt17(r.natural_fraction),
        ]);
    }
    emit(&cfg, &Reports { reports }, Some(t), a.out.as_deref())
}

fn run_support(a: SupportArgs) -> Result<()> {
    let grid = EvalGrid::parse_spec(&a.grid)?;
    let target = TargetFunction::parse(&a.target, &grid)?;
    let tr = greedy_support_approx(&target, a.pmax, a.n0)?;
    let cfg = RunConfig {
        grid: Some(target.grid.to_string()),
        target: Some(a.target.clone()),
        out: path_str(&a.out),
        ..RunConfig::new("support-approx")
    }
    .extra("pmax", a.pmax)
    .extra("n0", a.n0);
    let mut t = CsvTable::new(&["p", "theta", "residual"]);
    let free = tr.primes.iter().zip(&tr.thetas).filter(|(&p, _)| p > a.n0);
    for ((p, th), r) in free.zip(&tr.residuals) {
        t.push(vec![p.to_string(), fmt17(*th), fmt17(*r)]);
    }
    emit(&cfg, &tr, Some(t), a.out.as_deref())
}

fn parse_pair(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::invalid(format!("pair `{s}` is not of the form m:n"));
    let (m, n) = s.split_once(':').ok_or_else(bad)?;
    Ok((m.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
}

fn run_check(cmd: CheckCmd) -> Result<()> {
    match cmd {
        CheckCmd::SatoTate { level, p, coeffs, cache, out } => {
            let mut reports = Vec::new();
            let mut t = CsvTable::new(&["q", "g", "p", "ks_harmonic", "ks_natural"]);
            for &q in &level {
                let (snap, _) = family(q, level_nmax(q, coeffs), cache.as_deref())?;
                let r = sato_tate_test(&snap, p)?;
                t.push(vec![q.to_string(), snap.len().to_string(), p.to_string(), fmt17(r.ks_harmonic), fmt17(r.ks_natural)]);
                reports.push(r);
            }
            let cfg = RunConfig {
                levels: level,
                nmax: coeffs,
                cache: path_str(&cache),
                out: path_str(&out),
                ..RunConfig::new("check sato-tate")
            }
            .extra("p", p);
            emit(&cfg, &Reports { reports }, Some(t), out.as_deref())
        }
        CheckCmd::Moments { level, primes, exponents, out } => {
            let nmax = level_nmax(level.level, level.coeffs);
            let (snap, _) = family(level.level, nmax, level.cache.as_deref())?;
            let r = joint_moment_test(&snap, &primes, &exponents)?;
            let cfg = RunConfig {
                levels: vec![level.level],
                nmax: Some(nmax),
                cache: path_str(&level.cache),
                out: path_str(&out),
                ..RunConfig::new("check moments")
            }
            .extra("primes", fmt_list(&primes))
            .extra("exponents", fmt_list(&exponents));
            let mut t = CsvTable::new(&["family", "family_natural", "model", "gap"]);
            t.push(vec![fmt17(r.family), fmt17(r.family_natural), fmt17(r.model), fmt17(r.gap)]);
            emit(&cfg, &r, Some(t), out.as_deref())
        }
        CheckCmd::Petersson { level, pairs, c_factor, out } => {
            let pairs = pairs.iter().map(|s| parse_pair(s)).collect::<Result<Vec<_>>>()?;
            let need = pairs.iter().map(|&(m, n)| m.max(n) as usize).max().unwrap_or(1);
            let nmax = level.coeffs.unwrap_or(need.max(2));
            let (snap, _) = family(level.level, nmax, level.cache.as_deref())?;
            let r = petersson_check(&snap, &pairs, c_factor)?;
            let cfg = RunConfig {
                levels: vec![level.level],
                nmax: Some(nmax),
                cache: path_str(&level.cache),
                out: path_str(&out),
                ..RunConfig::new("check petersson")
            }
            .extra("c_factor", c_factor);
            let mut t = CsvTable::new(&["m", "n", "spectral", "geometric", "residual", "residual_opposite_sign"]);
            for row in &r.rows {
                t.push(vec![
                    row.m.to_string(),
                    row.n.to_string(),
                    fmt17(row.spectral),
                    fmt17(row.geometric),
                    fmt17(row.residual),
                    fmt17(row.residual_opposite_sign),
                ]);
            }
            emit(&cfg, &r, Some(t), out.as_deref())
        }
        CheckCmd::Smoothing { level, cache, seed, samples, n_list, n_ref, grid, out } => {
            let grid = EvalGrid::parse_spec(&grid)?;
            let n_ref = n_ref.unwrap_or(4 * n_list.iter().copied().max().unwrap_or(1));
            let mut cfg = RunConfig {
                grid: Some(grid.to_string()),
                n_cut: Some(n_ref),
                cache: path_str(&cache),
                out: path_str(&out),
                ..RunConfig::new("check smoothing")
            }
            .extra("n_list", fmt_list(&n_list));
            let snap;
            let generator = match level {
                Some(q) => {
                    snap = family(q, 2 * n_ref, cache.as_deref())?.0;
                    cfg.levels = vec![q];
                    cfg.nmax = Some(2 * n_ref);
                    Generator::Family(&snap)
                }
                None => {
                    cfg.seed = Some(seed);
                    cfg.m = Some(samples);
                    Generator::Model { m: samples, seed }
                }
            };
            let r = smoothing_decay_test(generator, &n_list, &grid, n_ref)?;
            let mut t = CsvTable::new(&["N", "mean_gap"]);
            for (n, g) in r.n_list.iter().zip(&r.mean_gap) {
                t.push(vec![n.to_string(), fmt17(*g)]);
            }
            emit(&cfg, &r, Some(t), out.as_deref())
        }
        CheckCmd::Growth { level, cache, seed, samples, sigma, t_list, cutoff, out } => {
            let mut cfg = RunConfig {
                cache: path_str(&cache),
                out: path_str(&out),
                ..RunConfig::new("check growth")
            }
            .extra("sigma", sigma)
            .extra("t_list", fmt_list(&t_list));
            let snap;
            let (generator, n) = match level {
                Some(q) => {
                    let n = cutoff.unwrap_or_else(|| default_n(q));
                    snap = family(q, 2 * n, cache.as_deref())?.0;
                    cfg.levels = vec![q];
                    cfg.nmax = Some(2 * n);
                    (Generator::Family(&snap), n)
                }
                None => {
                    cfg.seed = Some(seed);
                    cfg.m = Some(samples);
                    (Generator::Model { m: samples, seed }, cutoff.unwrap_or(DEFAULT_N))
                }
            };
            cfg.n_cut = Some(n);
            let r = moment_growth_test(generator, sigma, &t_list, n)?;
            let mut t = CsvTable::new(&["t", "mean_abs"]);
            for (x, y) in r.t.iter().zip(&r.mean_abs) {
                t.push(vec![fmt17(*x), fmt17(*y)]);
            }
            emit(&cfg, &r, Some(t), out.as_deref())
        }
        CheckCmd::SecondMoment { sigma, u_list, samples, seed, out } => {
            let est = second_moment_stat(sigma, &u_list, samples, seed)?;
            let cfg = RunConfig {
                seed: Some(seed),
                m: Some(samples),
                out: path_str(&out),
                ..RunConfig::new("check second-moment")
            }
            .extra("sigma", sigma)
            .extra("u_list", fmt_list(&u_list));
            let mut t = CsvTable::new(&["u", "mean", "stderr"]);
            for e in &est {
                t.push(vec![e.u.to_string(), fmt17(e.mean), fmt17(e.stderr)]);
            }
            #[derive(Serialize)]
            struct Body {
                sigma: f64,
                estimates: Vec<crate::randmodel::MomentEstimate>,
            }
            emit(&cfg, &Body { sigma, estimates: est }, Some(t), out.as_deref())
        }
    }
}

fn fmt_list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Model(c) => run_model(c),
        Cmd::Family(c) => run_family(c),
        Cmd::Compare(a) => run_compare(a),
        Cmd::Universality(a) => run_universality(a),
        Cmd::SupportApprox(a) => run_support(a),
        Cmd::Check(c) => run_check(c),
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Parse `argv` (program name first) and run. Returns the process exit
/// code: 0 success, 1 invalid input, 2 failed computation. Failures print
/// one line `error: kind=<kind> message=<text>` on stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: kind=usage message={}", one_line(first));
            return 1;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.cmd)),
            Err(e) => Err(Error::invalid(format!("thread pool: {e}"))),
        },
        None => dispatch(cli.cmd),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: kind={} message={}", e.kind(), one_line(&e.to_string()));
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

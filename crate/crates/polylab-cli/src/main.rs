//! polylab: construct Rudin-Shapiro, Fekete, and random sign polynomials,
//! measure their norms, autocorrelations, zeros, crossings, and value
//! distributions, and audit the quantitative laws they are expected to obey.
//!
//! Exit codes: 0 success, 2 when a mathematical audit fails, 1 on
//! operational errors.

mod audits;
mod config;
mod csvout;
mod plotdata;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use polylab::autocorr::{autocorr_profile, growth_exponent};
use polylab::calibration::Calibration;
use polylab::distribution::{
    ensemble_mean, montgomery_discrepancy, saffari_discrepancy, EnsembleStat,
};
use polylab::eval::{modulus_squared, RsMember, RudinShapiroCurve};
use polylab::norms::{mahler_quadrature, mq_norm, QTag};
use polylab::report::{AuditReport, AuditStatus};
use polylab::zeros::{classify, find_roots, level_crossings, unimodular_count_reciprocal};
use polylab::{fekete, rudin_shapiro, SignedPoly};

use config::{parse_range, RunConfig};
use csvout::{num, CsvWriter};

#[derive(Parser)]
#[command(name = "polylab", version, about)]
struct Cli {
    /// Flat key=value config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV/JSON artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Rayon thread count (0 = library default).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// RNG seed for ensemble commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Grid oversampling factor.
    #[arg(long, global = true)]
    grid_factor: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct polynomial families and record their shapes.
    Build {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_name = "A..B")]
        k_range: Option<String>,
        #[arg(long)]
        prime: Vec<u64>,
    },
    /// M_q norms and the Mahler measure.
    Norms {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_name = "A..B")]
        k_range: Option<String>,
        #[arg(long)]
        prime: Vec<u64>,
        /// Comma-separated exponents; `0` is the Mahler measure, `inf` the
        /// sup norm.
        #[arg(long, default_value = "0,0.5,1,2,4,8,inf")]
        q: String,
    },
    /// Autocorrelation profiles of P_k, optionally with the growth fit.
    Autocorr {
        #[arg(long, value_name = "A..B")]
        k_range: Option<String>,
        #[arg(long)]
        fit: bool,
    },
    /// Complete root sets with on-circle/annulus classification, or Fekete
    /// unimodular counting.
    Zeros {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_name = "A..B")]
        k_range: Option<String>,
        #[arg(long)]
        fekete: Vec<u64>,
        #[arg(long)]
        delta_circle: Option<f64>,
        #[arg(long, default_value_t = 2.0)]
        c1: f64,
    },
    /// Level crossings of R_k(t) = |P_k|^2 at levels eta * n.
    Crossings {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_name = "A..B")]
        k_range: Option<String>,
        #[arg(long, value_delimiter = ',')]
        eta: Vec<f64>,
    },
    /// Value equidistribution statistics.
    Dist {
        #[arg(long, value_parser = ["saffari", "montgomery"])]
        family: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_name = "A..B")]
        k_range: Option<String>,
        /// Polar cell grid for the montgomery family, e.g. 16x16.
        #[arg(long, default_value = "16x16")]
        cells: String,
    },
    /// Monte-Carlo ensemble means over random sign polynomials.
    Ensemble {
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Exponent q > 0, or `mahler`.
        #[arg(long, default_value = "4")]
        q: String,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Run one named audit family.
    Audit {
        #[arg(long)]
        name: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_name = "A..B")]
        k_range: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        eta: Vec<f64>,
    },
    /// Run the whole audit battery and bundle one JSON report.
    Report {
        #[arg(long, default_value_t = 12)]
        k_max: u32,
        /// Also emit plot data files and a gnuplot script.
        #[arg(long)]
        plotdata: bool,
        /// Measure the audit constants and write them to the given
        /// calibration file instead of regressing against it.
        #[arg(long, value_name = "FILE")]
        freeze_calibration: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(audits_failed) => {
            if audits_failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    if let Some(threads) = cli.threads {
        cfg.threads = threads;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(gf) = cli.grid_factor {
        cfg.grid_factor = gf;
    }
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .context("building thread pool")?;
    }
    std::fs::create_dir_all(&cfg.out)?;

    match cli.command {
        Command::Build { k, k_range, prime } => {
            cmd_build(&cfg, ks_from(k, k_range, &cfg)?, prime)?;
            Ok(false)
        }
        Command::Norms {
            k,
            k_range,
            prime,
            q,
        } => {
            cmd_norms(&cfg, ks_from(k, k_range, &cfg)?, prime, &q)?;
            Ok(false)
        }
        Command::Autocorr { k_range, fit } => {
            cmd_autocorr(&cfg, range_from(k_range, &cfg)?, fit)?;
            Ok(false)
        }
        Command::Zeros {
            k,
            k_range,
            fekete,
            delta_circle,
            c1,
        } => {
            let delta = delta_circle.unwrap_or(cfg.delta_circle);
            cmd_zeros(&cfg, ks_from(k, k_range, &cfg)?, fekete, delta, c1)?;
            Ok(false)
        }
        Command::Crossings { k, k_range, eta } => {
            let etas = if eta.is_empty() { vec![0.1, 0.2, 0.29, 1.0] } else { eta };
            cmd_crossings(&cfg, ks_from(k, k_range, &cfg)?, &etas)?;
            Ok(false)
        }
        Command::Dist {
            family,
            k,
            k_range,
            cells,
        } => {
            cmd_dist(&cfg, &family, ks_from(k, k_range, &cfg)?, &cells)?;
            Ok(false)
        }
        Command::Ensemble { n, q, samples } => {
            cmd_ensemble(&cfg, n, &q, samples)?;
            Ok(false)
        }
        Command::Audit {
            name,
            k,
            k_range,
            alpha,
            eta,
        } => {
            let range = match (k, k_range) {
                (Some(k), None) => (k, k),
                (None, Some(r)) => parse_range(&r)?,
                (None, None) => cfg.k_range,
                (Some(_), Some(_)) => bail!("give either --k or --k-range, not both"),
            };
            let calib = load_calibration(&cfg)?;
            let reports = audits::run_named(&name, range, alpha, &eta, &cfg, &calib)?;
            write_audit_csv(&cfg, &reports)?;
            print_audit_lines(&reports);
            Ok(reports.iter().any(|r| r.status == AuditStatus::Fail))
        }
        Command::Report {
            k_max,
            plotdata,
            freeze_calibration,
        } => cmd_report(&cfg, k_max, plotdata, freeze_calibration),
    }
}

fn ks_from(k: Option<u32>, k_range: Option<String>, cfg: &RunConfig) -> Result<Vec<u32>> {
    match (k, k_range) {
        (Some(k), None) => Ok(vec![k]),
        (None, Some(r)) => {
            let (lo, hi) = parse_range(&r)?;
            Ok((lo..=hi).collect())
        }
        (None, None) => Ok((cfg.k_range.0..=cfg.k_range.1).collect()),
        (Some(_), Some(_)) => bail!("give either --k or --k-range, not both"),
    }
}

fn range_from(k_range: Option<String>, cfg: &RunConfig) -> Result<(u32, u32)> {
    match k_range {
        Some(r) => parse_range(&r),
        None => Ok(cfg.k_range),
    }
}

fn load_calibration(cfg: &RunConfig) -> Result<Calibration> {
    if cfg.calibration.exists() {
        Ok(Calibration::load(&cfg.calibration)?)
    } else {
        Ok(Calibration::new())
    }
}

fn cmd_build(cfg: &RunConfig, ks: Vec<u32>, primes: Vec<u64>) -> Result<()> {
    let hash = cfg.hash();
    let mut w = CsvWriter::create(
        &cfg.out.join("build.csv"),
        &["kind", "param", "length", "degree", "coeff_sq_sum", "littlewood", "signs"],
        &hash,
    )?;
    let sign_string = |f: &SignedPoly| -> String {
        if f.len() > 4096 {
            return String::new();
        }
        f.coeffs()
            .iter()
            .map(|&c| match c {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect()
    };
    for k in ks {
        let pair = rudin_shapiro(k)?;
        for (kind, f) in [("rudin_shapiro_p", &pair.p), ("rudin_shapiro_q", &pair.q)] {
            w.row(&[
                kind.to_string(),
                k.to_string(),
                f.len().to_string(),
                f.degree().to_string(),
                f.coeff_square_sum().to_string(),
                f.is_littlewood().to_string(),
                sign_string(f),
            ])?;
        }
    }
    for p in primes {
        let f = fekete(p)?;
        w.row(&[
            "fekete".to_string(),
            p.to_string(),
            f.poly.len().to_string(),
            f.poly.degree().to_string(),
            f.poly.coeff_square_sum().to_string(),
            f.poly.is_littlewood().to_string(),
            sign_string(&f.poly),
        ])?;
    }
    w.finish()
}

fn parse_q(tag: &str) -> Result<QTag<f64>> {
    match tag.trim() {
        "inf" | "INF" | "infinity" => Ok(QTag::Infinity),
        "0" | "0.0" => Ok(QTag::Zero),
        other => Ok(QTag::Finite(other.parse::<f64>().context("exponent")?)),
    }
}

fn cmd_norms(cfg: &RunConfig, ks: Vec<u32>, primes: Vec<u64>, q_list: &str) -> Result<()> {
    let hash = cfg.hash();
    let mut w = CsvWriter::create(
        &cfg.out.join("norms.csv"),
        &["label", "q", "value", "n_grid", "route"],
        &hash,
    )?;
    let qs: Vec<QTag<f64>> = q_list.split(',').map(parse_q).collect::<Result<_>>()?;
    let mut polys: Vec<(String, SignedPoly)> = Vec::new();
    for k in ks {
        let pair = rudin_shapiro(k)?;
        polys.push((format!("P_{k}"), pair.p));
        polys.push((format!("Q_{k}"), pair.q));
    }
    for p in primes {
        polys.push((format!("fekete_{p}"), fekete(p)?.poly));
    }
    for (label, f) in polys {
        let n_grid = (cfg.grid_factor.max(8) * f.len()).next_power_of_two();
        for &q in &qs {
            let result = match q {
                QTag::Zero => mahler_quadrature::<f64>(&f, n_grid),
                other => mq_norm::<f64>(&f, other, n_grid),
            };
            match result {
                Ok(r) => {
                    let qs = match r.q {
                        QTag::Zero => "0".to_string(),
                        QTag::Finite(v) => format!("{v}"),
                        QTag::Infinity => "inf".to_string(),
                    };
                    w.row(&[
                        label.clone(),
                        qs,
                        num(r.value),
                        r.n_grid.to_string(),
                        format!("{:?}", r.route).to_lowercase(),
                    ])?;
                }
                Err(e) => eprintln!("norms {label}: {e}"),
            }
        }
    }
    w.finish()
}

fn cmd_autocorr(cfg: &RunConfig, range: (u32, u32), fit: bool) -> Result<()> {
    let hash = cfg.hash();
    let mut w = CsvWriter::create(
        &cfg.out.join("autocorr.csv"),
        &["k", "n", "max_abs", "argmax_j", "l2"],
        &hash,
    )?;
    for k in range.0..=range.1 {
        let p = autocorr_profile(k)?;
        w.row(&[
            p.k.to_string(),
            p.n.to_string(),
            p.max_abs.to_string(),
            p.argmax_j.to_string(),
            p.l2.to_string(),
        ])?;
    }
    w.finish()?;
    if fit {
        let f = growth_exponent(range.0, range.1)?;
        println!(
            "growth exponent over k={}..{}: {:.6} +- {:.6} (rms residual {:.3e})",
            range.0, range.1, f.slope, f.half_width, f.residual_rms
        );
    }
    Ok(())
}

fn cmd_zeros(
    cfg: &RunConfig,
    ks: Vec<u32>,
    fekete_ps: Vec<u64>,
    delta: f64,
    c1: f64,
) -> Result<()> {
    let hash = cfg.hash();
    let mut roots_csv = CsvWriter::create(
        &cfg.out.join("roots.csv"),
        &["k", "re", "im", "modulus", "residual", "class"],
        &hash,
    )?;
    let mut summary = CsvWriter::create(
        &cfg.out.join("zeros_summary.csv"),
        &[
            "label", "n", "degree", "on_circle", "inside", "outside", "annulus", "real_zeros",
            "delta_circle", "c1",
        ],
        &hash,
    )?;
    let write_roots = |scale_label: u64,
                           n: usize,
                           label: &str,
                           f: &SignedPoly,
                           roots_csv: &mut CsvWriter,
                           summary: &mut CsvWriter|
     -> Result<()> {
        let roots = find_roots::<f64>(f, None)?;
        let cls = classify(&roots, n, delta, c1);
        for (z, res) in roots.roots.iter().zip(&roots.residuals) {
            let m = z.norm();
            let class = if (m - 1.0).abs() <= delta {
                "on_circle"
            } else if m < 1.0 {
                "inside"
            } else {
                "outside"
            };
            roots_csv.row(&[
                scale_label.to_string(),
                num(z.re),
                num(z.im),
                num(m),
                num(*res),
                class.to_string(),
            ])?;
        }
        summary.row(&[
            label.to_string(),
            n.to_string(),
            f.degree().to_string(),
            cls.on_circle.to_string(),
            cls.inside.to_string(),
            cls.outside.to_string(),
            cls.annulus.to_string(),
            cls.real_zeros.to_string(),
            format!("{delta:e}"),
            format!("{c1}"),
        ])?;
        Ok(())
    };
    for k in ks {
        let pair = rudin_shapiro(k)?;
        write_roots(k as u64, pair.n, &format!("P_{k}"), &pair.p, &mut roots_csv, &mut summary)?;
        write_roots(k as u64, pair.n, &format!("Q_{k}"), &pair.q, &mut roots_csv, &mut summary)?;
    }
    if !fekete_ps.is_empty() {
        let mut unimodular = CsvWriter::create(
            &cfg.out.join("unimodular.csv"),
            &["p", "n_grid", "count_transversal", "count_tangent", "fraction"],
            &hash,
        )?;
        for p in fekete_ps {
            let f = fekete(p)?;
            let n_grid = (cfg.grid_factor.max(8) * p as usize).next_power_of_two();
            let count = unimodular_count_reciprocal::<f64>(&f, n_grid)?;
            println!(
                "fekete p={p}: {} sign-change zeros (+{} tangent), fraction {:.6}",
                count.count(),
                count.tangent.len(),
                count.fraction()
            );
            unimodular.row(&[
                p.to_string(),
                n_grid.to_string(),
                count.count().to_string(),
                count.tangent.len().to_string(),
                num(count.fraction()),
            ])?;
            if f.poly.degree() <= polylab::zeros::DEFAULT_DEGREE_CAP {
                write_roots(p, p as usize, &format!("fekete_{p}"), &f.poly, &mut roots_csv, &mut summary)?;
            }
        }
        unimodular.finish()?;
    }
    roots_csv.finish()?;
    summary.finish()
}

fn cmd_crossings(cfg: &RunConfig, ks: Vec<u32>, etas: &[f64]) -> Result<()> {
    let hash = cfg.hash();
    let mut w = CsvWriter::create(
        &cfg.out.join("crossings.csv"),
        &["k", "eta", "count_transversal", "count_tangent"],
        &hash,
    )?;
    for k in ks {
        let pair = rudin_shapiro(k)?;
        let curve = RudinShapiroCurve::new(&pair, RsMember::P);
        let n_grid = (cfg.grid_factor.max(16) * pair.n).next_power_of_two();
        for &eta in etas {
            let rep = level_crossings(&curve, eta, pair.n, n_grid)?;
            w.row(&[
                k.to_string(),
                format!("{eta}"),
                rep.count().to_string(),
                rep.tangent.len().to_string(),
            ])?;
        }
    }
    w.finish()
}

fn cmd_dist(cfg: &RunConfig, family: &str, ks: Vec<u32>, cells: &str) -> Result<()> {
    let hash = cfg.hash();
    let mut w = CsvWriter::create(
        &cfg.out.join("dist.csv"),
        &["k", "n_grid", "family", "sup_dev"],
        &hash,
    )?;
    for k in ks {
        let n_grid = (cfg.grid_factor.max(16) << k).next_power_of_two();
        match family {
            "saffari" => {
                let rep = saffari_discrepancy(k, n_grid)?;
                w.row(&[
                    k.to_string(),
                    n_grid.to_string(),
                    "saffari_cdf".to_string(),
                    num(rep.sup_dev),
                ])?;
            }
            "montgomery" => {
                let (nr, na) = cells
                    .split_once('x')
                    .context("cells must look like 16x16")?;
                let (nr, na): (usize, usize) = (nr.parse()?, na.parse()?);
                let (rep, detail) = montgomery_discrepancy(k, n_grid, nr, na)?;
                w.row(&[
                    k.to_string(),
                    n_grid.to_string(),
                    "montgomery_cells".to_string(),
                    num(rep.sup_dev),
                ])?;
                let payload = serde_json::json!({
                    "schema_version": 1,
                    "config_hash": hash,
                    "report": rep,
                    "detail": detail,
                });
                std::fs::write(
                    cfg.out.join(format!("dist_montgomery_k{k}.json")),
                    serde_json::to_string_pretty(&payload)?,
                )?;
            }
            other => bail!("unknown family {other:?}"),
        }
    }
    w.finish()
}

fn cmd_ensemble(cfg: &RunConfig, n: usize, q: &str, samples: usize) -> Result<()> {
    let stat = match q {
        "mahler" | "0" => EnsembleStat::MahlerRatio,
        other => EnsembleStat::NormPower {
            q: other.parse::<f64>().context("exponent")?,
        },
    };
    let est = ensemble_mean(n, stat, samples, cfg.seed)?;
    println!(
        "ensemble n={} q={} samples={}: mean {:.9} +- {:.3e} (seed {}, rng {})",
        est.n,
        est.stat.label(),
        est.samples,
        est.mean,
        est.std_err,
        est.seed,
        est.rng
    );
    let hash = cfg.hash();
    let mut w = CsvWriter::create(
        &cfg.out.join("ensemble.csv"),
        &["n", "q", "samples", "mean", "std_err", "seed", "rng"],
        &hash,
    )?;
    w.row(&[
        est.n.to_string(),
        est.stat.label(),
        est.samples.to_string(),
        num(est.mean),
        num(est.std_err),
        est.seed.to_string(),
        est.rng.to_string(),
    ])?;
    w.finish()
}

fn extract_k(params: &str) -> String {
    for part in params.split(';') {
        if let Some(v) = part.strip_prefix("k=") {
            return v.to_string();
        }
    }
    String::new()
}

fn write_audit_csv(cfg: &RunConfig, reports: &[AuditReport]) -> Result<()> {
    let hash = cfg.hash();
    let mut w = CsvWriter::create(
        &cfg.out.join("audits.csv"),
        &["name", "k", "params", "lhs", "rhs", "margin", "pass", "anchor"],
        &hash,
    )?;
    for r in reports {
        w.row(&[
            r.name.clone(),
            extract_k(&r.params),
            r.params.clone(),
            num(r.lhs),
            num(r.rhs),
            num(r.margin),
            format!("{:?}", r.status).to_lowercase(),
            r.anchor.clone(),
        ])?;
    }
    w.finish()
}

fn print_audit_lines(reports: &[AuditReport]) {
    for r in reports {
        let tag = match r.status {
            AuditStatus::Pass => "PASS",
            AuditStatus::Fail => "FAIL",
            AuditStatus::Inconclusive => "INCONCLUSIVE",
        };
        println!(
            "{tag} {name} [{params}] lhs={lhs:.6e} rhs={rhs:.6e} margin={margin:.3e}",
            name = r.name,
            params = r.params,
            lhs = r.lhs,
            rhs = r.rhs,
            margin = r.margin
        );
    }
}

fn cmd_report(
    cfg: &RunConfig,
    k_max: u32,
    plot: bool,
    freeze: Option<PathBuf>,
) -> Result<bool> {
    if let Some(path) = freeze {
        let calib = measure_calibration(cfg, k_max)?;
        calib.save(&path)?;
        println!("calibration written to {}", path.display());
        for (key, value) in calib.iter() {
            println!("  {key} = {value}");
        }
        return Ok(false);
    }

    let calib = load_calibration(cfg)?;
    let mut reports: Vec<AuditReport> = Vec::new();
    for k in 1..=k_max {
        reports.push(audits::audit_parallelogram(k, cfg.grid_factor)?);
        reports.push(audits::audit_mirror(k, cfg.grid_factor)?);
        reports.push(audits::audit_parseval(k, cfg.grid_factor)?);
        if k >= 2 {
            reports.push(audits::audit_m4(k)?);
        }
        if calib.get("autocorr_c").is_some() {
            reports.push(audits::audit_autocorr_bound(k, &calib)?);
        }
        if k <= 18 {
            reports.push(audits::audit_rou_floor(k)?);
        }
    }
    let root_k_max = k_max.min(12);
    for k in 1..=root_k_max {
        reports.extend(audits::audit_real_zeros(k, cfg)?);
        if k >= 4 {
            reports.extend(audits::audit_sublevel(k, 0.25, cfg)?);
            reports.extend(audits::audit_bernstein(k, cfg)?);
            if calib.get("nearest_zero_c4").is_some() {
                reports.push(audits::audit_nearest_zero(k, cfg, &calib)?);
            }
            reports.push(audits::audit_mahler_routes(k)?);
        }
        reports.extend(audits::audit_crossings(k, &[0.1, 0.2, 0.29, 1.0], cfg)?);
    }
    for &p in &cfg.prime_list {
        reports.push(audits::audit_fekete(p, cfg)?);
    }
    for k in [1, k_max.min(10)] {
        reports.extend(audits::audit_saffari(k, cfg, &calib)?);
    }
    reports.extend(audits::audit_ensemble(cfg)?);

    write_audit_csv(cfg, &reports)?;
    print_audit_lines(&reports);

    let n_pass = reports.iter().filter(|r| r.status == AuditStatus::Pass).count();
    let n_fail = reports.iter().filter(|r| r.status == AuditStatus::Fail).count();
    let n_inc = reports
        .iter()
        .filter(|r| r.status == AuditStatus::Inconclusive)
        .count();
    let payload = serde_json::json!({
        "schema_version": 1,
        "config_hash": cfg.hash(),
        "k_max": k_max,
        "summary": {"pass": n_pass, "fail": n_fail, "inconclusive": n_inc},
        "audits": reports,
    });
    std::fs::write(
        cfg.out.join("report.json"),
        serde_json::to_string_pretty(&payload)?,
    )?;
    println!("report: {n_pass} pass, {n_fail} fail, {n_inc} inconclusive");

    if plot {
        let sel = plotdata::PlotSelection {
            saffari_ks: (1..=k_max.min(14)).collect(),
            autocorr_ks: (1..=k_max.min(18)).collect(),
            annulus_ks: (6..=root_k_max).collect(),
            fekete_ps: cfg.prime_list.clone(),
        };
        let files = plotdata::emit(&cfg.out.join("plots"), &sel, cfg)?;
        println!("plot data: {}", files.join(", "));
    }
    Ok(n_fail > 0)
}

/// Pilot run: measure the nonconstructive constants and freeze them.
fn measure_calibration(cfg: &RunConfig, k_max: u32) -> Result<Calibration> {
    let mut calib = Calibration::new();

    // C for the autocorrelation bound, calibrated over k <= 10
    let mut c = 0.0f64;
    for k in 1..=10u32 {
        let p = autocorr_profile(k)?;
        c = c.max(p.max_abs as f64 / (p.n as f64).powf(0.8190));
    }
    calib.set("autocorr_c", c);

    // annulus width constant
    calib.set("annulus_c1", 2.0);

    // c4 for the nearest-zero audit at c = gamma/(2 pi), measured over the
    // root-feasible generations and frozen with 25% headroom
    let mut c4 = 0.0f64;
    for k in 8..=k_max.min(12) {
        let pair = rudin_shapiro(k)?;
        let r = modulus_squared::<f64>(&pair.p)?;
        let roots = find_roots::<f64>(&pair.p, None)?;
        let n_grid = (cfg.grid_factor.max(16) * pair.n).next_power_of_two();
        let audit = polylab::zeros::nearest_zero_audit(
            &r,
            audits::gamma() / std::f64::consts::TAU,
            &roots,
            pair.n,
            n_grid,
            f64::INFINITY,
        )?;
        c4 = c4.max(audit.max_n_dist);
    }
    calib.set("nearest_zero_c4", c4 * 1.25);

    // distribution regression bounds at the deepest pilot generations,
    // frozen with 10% headroom
    for k in [10u32, 14, 18] {
        if k <= k_max.max(18) {
            let n_grid = (cfg.grid_factor.max(16) << k).next_power_of_two();
            let rep = saffari_discrepancy(k, n_grid)?;
            calib.set(&format!("saffari_supdev_k{k}_max"), rep.sup_dev * 1.1);
            let (mrep, _) = montgomery_discrepancy(k, n_grid, 16, 16)?;
            calib.set(&format!("montgomery_supdev_k{k}_max"), mrep.sup_dev * 1.1);
        }
    }
    Ok(calib)
}

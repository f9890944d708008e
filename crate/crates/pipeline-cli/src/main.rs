use std::path::PathBuf;
use std::process::ExitCode;

use certify_engine::{EigenEnclosure, OperatorContext, Policy};
use clap::{Args, Parser, Subcommand};
use gkw_model::{assemble_matrix, default_precision};
use pipeline_cli::{
    json::summary_json, parse_index_list, run_pipeline, text_report, CertKey, CertificateStore,
    PipelineConfig, PipelineError, Record,
};
use serde_json::json;
use spectral_expansion::{expansion_eval, to_csv, ExpansionCertificate};

#[derive(Parser)]
#[command(
    name = "gkw",
    about = "Certified spectral data of the Gauss map transfer operator"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Assemble the truncated matrix and store it.
    Assemble {
        #[arg(long = "K")]
        k: usize,
        #[arg(long)]
        prec: Option<u32>,
        /// Store directory; the file name is content-addressed.
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify eigenvalue windows.
    Certify(CertifyArgs),
    /// Evaluate the certified expansion on a grid (CSV).
    Expand(ExpandArgs),
    /// Strong-weak bound checks.
    Dfly {
        #[command(subcommand)]
        cmd: DflyCmd,
    },
    /// Configured coarse-fine workflow.
    Pipeline {
        #[command(subcommand)]
        cmd: PipelineCmd,
    },
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long = "K")]
    k: usize,
    #[arg(long)]
    prec: Option<u32>,
    /// Window indices, e.g. `1-5` or `1,2,4`.
    #[arg(long, default_value = "1")]
    windows: String,
    /// Also certify the gap circle between candidates `j` and `j + 1`.
    #[arg(long)]
    gap: Option<usize>,
    #[arg(long, default_value_t = 256)]
    m: usize,
    #[arg(long, default_value_t = 4096)]
    max_m: usize,
    /// Store certificates here (content-addressed).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long)]
    modes: usize,
    /// Iteration counts, e.g. `1-8`.
    #[arg(long)]
    n: String,
    #[arg(long, default_value_t = 21)]
    grid: usize,
    /// First retained mode index per table, e.g. `1,2`.
    #[arg(long, default_value = "1")]
    j0: String,
    #[arg(long = "K", default_value_t = 48)]
    k: usize,
    #[arg(long, default_value_t = 192)]
    prec: u32,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DflyCmd {
    Check {
        #[arg(long, default_value = "default")]
        family: String,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
    },
}

#[derive(Subcommand)]
enum PipelineCmd {
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Certificate store; defaults to `<out_dir>/certificates`.
        #[arg(long)]
        store: Option<PathBuf>,
    },
}

fn enclosure_json(e: &EigenEnclosure) -> serde_json::Value {
    json!({
        "index": e.index, "K": e.k, "multiplicity": e.multiplicity, "simple": e.simple,
        "lambda": e.lambda.as_ref().map(|l| json!({"re": l.re.to_string(), "im": l.im.to_string()})),
        "alpha": e.alpha.upper_f64(), "theta": e.theta.upper_f64(), "M_inf": e.m_inf.upper_f64(),
        "s_star": e.contour.s_star.to_string(), "m": e.contour.m,
    })
}

fn assemble(
    k: usize,
    prec: Option<u32>,
    out: PathBuf,
    as_json: bool,
) -> Result<bool, PipelineError> {
    let prec = prec.unwrap_or_else(|| default_precision(k));
    let mut store = CertificateStore::open(&out)?;
    let key = CertKey::new("matrix").with("K", k).with("prec", prec);
    let (stored, hit) = store.get_or_compute(&key, || {
        let m = assemble_matrix(k, prec)?;
        Record::parse(&m.to_text(&m.budget()?))
    })?;
    let path = store.path(&key);
    match &stored {
        Ok(r) => {
            let eps = r.require("eps_K")?;
            if as_json {
                println!(
                    "{}",
                    json!({"ok": true, "K": k, "prec": prec, "eps_K": eps, "path": path.display().to_string(), "cached": hit})
                );
            } else {
                println!(
                    "K = {k}\nprec = {prec}\neps_K = {eps}\npath = {}",
                    path.display()
                );
            }
        }
        Err(e) => {
            if as_json {
                println!("{}", json!({"ok": false, "K": k, "prec": prec, "error": e}));
            } else {
                eprintln!("assembly failed: {e}");
            }
        }
    }
    Ok(stored.is_ok())
}

fn certify(a: CertifyArgs, as_json: bool) -> Result<bool, PipelineError> {
    let prec = a.prec.unwrap_or_else(|| default_precision(a.k));
    let idx = parse_index_list(&a.windows).map_err(PipelineError::Invalid)?;
    let ctx = OperatorContext::gkw(a.k, prec)?;
    let policy = Policy {
        m: a.m,
        max_m: a.max_m,
        ..Policy::default()
    };
    let mut specs = idx
        .iter()
        .map(|&j| ctx.default_window(j, &policy))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(g) = a.gap {
        specs.push(ctx.gap_window(g, &policy)?);
    }
    let results = certify_engine::certify_windows(&ctx, &specs);
    let mut store = a.out.as_ref().map(CertificateStore::open).transpose()?;
    let mut all_ok = true;
    let mut rows = Vec::new();
    for (spec, r) in specs.iter().zip(&results) {
        let label = spec
            .index
            .map_or_else(|| format!("gap{}", a.gap.unwrap_or(0)), |j| j.to_string());
        match r {
            Ok(e) => {
                if let Some(s) = store.as_mut() {
                    let key = CertKey::new("window-cli")
                        .with("K", a.k)
                        .with("prec", prec)
                        .with("target", &label)
                        .with("m", a.m)
                        .with("max_m", a.max_m);
                    let _ = s.get_or_compute(&key, || Record::parse(&e.to_text()))?;
                }
                if as_json {
                    rows.push(enclosure_json(e));
                } else {
                    println!("{}", e.summary_row());
                }
            }
            Err(err) => {
                all_ok = false;
                if as_json {
                    rows.push(json!({"target": label, "ok": false, "error": err.to_string(), "gate": err.gate().map(|g| format!("{g:?}"))}));
                } else {
                    println!("{label:>4}  FAILED  {err}");
                }
            }
        }
    }
    if as_json {
        println!(
            "{}",
            json!({"ok": all_ok, "K": a.k, "prec": prec, "windows": rows})
        );
    }
    Ok(all_ok)
}

fn expand(a: ExpandArgs, as_json: bool) -> Result<bool, PipelineError> {
    let ns = parse_index_list(&a.n).map_err(PipelineError::Invalid)?;
    let j0s = parse_index_list(&a.j0).map_err(PipelineError::Invalid)?;
    let ctx = OperatorContext::gkw(a.k, a.prec)?;
    let cert = ExpansionCertificate::certify(&ctx, a.modes, &Policy::default())?;
    let mut rows = Vec::new();
    for &n in &ns {
        for &j0 in &j0s {
            for p in expansion_eval(&cert, n as u64, a.grid, j0)? {
                rows.push((n as u64, j0, p));
            }
        }
    }
    let body = if as_json {
        let v: Vec<_> = rows
            .iter()
            .map(|(n, j0, p)| {
                json!({"n": n, "j0": j0, "x": p.x, "value_mid": p.value_mid(), "value_rad": p.value_rad(), "error_bound": p.error.upper_f64()})
            })
            .collect();
        format!(
            "{}\n",
            json!({"ok": true, "modes": a.modes, "rho_sep": cert.rho_sep.upper_f64(), "rows": v})
        )
    } else {
        to_csv(&rows)
    };
    match a.out {
        Some(p) => std::fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(true)
}

fn dfly(family: &str, kmax: u32, as_json: bool) -> Result<bool, PipelineError> {
    if family != "default" {
        return Err(PipelineError::Invalid(format!("unknown family `{family}`")));
    }
    let r = dfly_bounds::dfly_convergence_suite(family, kmax, dfly_bounds::default_family);
    let ok = r.passing_from().is_some() && r.multiplicity_stable();
    if as_json {
        let rows: Vec<_> = r
            .rows
            .iter()
            .map(|x| {
                json!({"k": x.k, "delta_k": x.delta_k, "multiplicity": x.multiplicity, "sup_weak": x.sup_weak,
                       "sup_strong": x.sup_strong, "projector_diff": x.projector_diff, "passed": x.passed(), "failure": x.failure})
            })
            .collect();
        println!(
            "{}",
            json!({"ok": ok, "family": family, "passing_from": r.passing_from(), "rows": rows})
        );
    } else {
        print!("{r}");
        match r.passing_from() {
            Some(k) => println!("exclusion passes for all k >= {k}"),
            None => println!("exclusion does not pass eventually"),
        }
    }
    Ok(ok)
}

fn pipeline(config: PathBuf, store: Option<PathBuf>, as_json: bool) -> Result<bool, PipelineError> {
    let cfg = PipelineConfig::parse(&std::fs::read_to_string(&config)?)?;
    let dir = store.unwrap_or_else(|| cfg.out_dir.join("certificates"));
    let mut st = CertificateStore::open(dir)?;
    let s = run_pipeline(&cfg, &mut st)?;
    if as_json {
        println!("{}", summary_json(&s));
    } else {
        print!("{}", text_report(&s));
        println!("store: {} hits, {} misses", s.hits, s.misses);
    }
    Ok(s.ok())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let j = cli.json;
    let res = match cli.cmd {
        Cmd::Assemble { k, prec, out } => assemble(k, prec, out, j),
        Cmd::Certify(a) => certify(a, j),
        Cmd::Expand(a) => expand(a, j),
        Cmd::Dfly {
            cmd: DflyCmd::Check { family, kmax },
        } => dfly(&family, kmax, j),
        Cmd::Pipeline {
            cmd: PipelineCmd::Run { config, store },
        } => pipeline(config, store, j),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            if j {
                println!("{}", json!({"ok": false, "error": e.to_string()}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}

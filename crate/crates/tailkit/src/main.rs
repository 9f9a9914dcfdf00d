//! tailkit command-line interface: family statistics, exact and Monte
//! Carlo tails, bound evaluation, transfer bounds, instance generators and
//! batch experiments. All results print as JSON on stdout.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tailkit::bootstrap::{
    rcor_transfer, rsize2_transfer, rsize_transfer, vxsym_transfer, DecompositionFile, TailTruth,
};
use tailkit::bounds::{all_bounds, holder_report};
use tailkit::family::{summarize, IndicatorFamily};
use tailkit::harness::{rate_function_trend, run_experiment, ExperimentConfig, TrendConfig};
use tailkit::instances::sequences::{ap_family, ap_kappa, schur_family, schur_kappa};
use tailkit::instances::subgraph::{
    lambda_asymptotic, pi_from_chromatic, subgraph_family, turan_lower_bound, turan_number,
    TuranData, TURAN_GROUND_LIMIT,
};
use tailkit::instances::{kgraph_from_file, kgraph_to_string};
use tailkit::phi::{phi_neg, varphi2_check, varphi3_factor, varphi_bounds_check};

#[derive(Parser)]
#[command(name = "tailkit", version, about = "Lower-tail bounds for dependent indicator sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct McOpts {
    /// Estimate the auxiliary tail by Monte Carlo instead of enumeration
    #[arg(long)]
    mc_samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    mc_seed: u64,
}

impl McOpts {
    fn truth(&self) -> TailTruth {
        match self.mc_samples {
            Some(samples) => TailTruth::Mc {
                samples,
                seed: self.mc_seed,
            },
            None => TailTruth::Exact,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dependency statistics μ, Π, Λ, δ of a family file
    Stats { family: PathBuf },
    /// Exact lower tail Pr(X ≤ (1−ε)·μ) by enumeration
    Exact {
        #[arg(long)]
        eps: f64,
        family: PathBuf,
    },
    /// Monte Carlo lower tail with a Wilson 95% interval
    Mc {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        family: PathBuf,
    },
    /// φ(−ε) and the rate-function inequality checks
    Phi {
        #[arg(long)]
        eps: f64,
        /// Also check the scaling factor for φ(−A·ε)
        #[arg(long = "A")]
        a: Option<f64>,
    },
    /// Evaluate every tail bound at one ε
    Bounds {
        #[arg(long)]
        eps: f64,
        family: PathBuf,
    },
    /// Hölder three-factor decomposition report
    Holder {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        tau: f64,
        family: PathBuf,
    },
    /// Bootstrapping transfer bounds
    #[command(subcommand)]
    Transfer(TransferCommand),
    /// Instance generators (family file + JSON sidecar)
    #[command(subcommand)]
    Instance(InstanceCommand),
    /// Batch experiments from a JSON config
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand)]
enum TransferCommand {
    /// Size-conditioning transfer
    Rsize {
        #[arg(long)]
        eps: f64,
        family: PathBuf,
    },
    /// Size-conditioning transfer with slack τ
    Rsize2 {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        tau: f64,
        family: PathBuf,
    },
    /// Symmetric-decomposition transfer (decomposition JSON file)
    Rcor {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        decomp: PathBuf,
        #[command(flatten)]
        mc: McOpts,
    },
    /// Vertex-symmetry transfer for subgraph counts
    Vxsym {
        #[arg(long = "H")]
        h: PathBuf,
        #[arg(long = "G")]
        g: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
        /// Vertex block U as comma-separated indices; default 0..⌊n/2⌋
        #[arg(long, value_delimiter = ',')]
        u: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[command(flatten)]
        mc: McOpts,
    },
}

#[derive(Subcommand)]
enum InstanceCommand {
    /// Copies of H in the complete k-graph on n vertices
    Subgraph {
        #[arg(long = "H")]
        h: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        /// Base path: writes <out>.family and <out>.json
        #[arg(long)]
        out: PathBuf,
    },
    /// Arithmetic progressions of length k in {1..n}
    Ap {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Schur triples in {1..n}
    Schur {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Bound-vs-truth grid
    Run { config: PathBuf },
    /// Rate-function trend over an n grid
    Trend { config: PathBuf },
}

fn emit<T: serde::Serialize>(value: &T) -> tailkit::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run() -> tailkit::Result<()> {
    if let Ok(threads) = std::env::var("TAILKIT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    match Cli::parse().command {
        Command::Stats { family } => {
            let fam = IndicatorFamily::from_file(&family)?;
            emit(&summarize(&fam))
        }
        Command::Exact { eps, family } => {
            let fam = IndicatorFamily::from_file(&family)?;
            let tail = fam.exact_lower_tail(eps)?;
            let strict = fam.exact_lower_tail_strict(eps)?;
            emit(&json!({
                "eps": eps,
                "tail": tail,
                "log_tail": tail.ln(),
                "tail_strict": strict,
                "log_tail_strict": strict.ln(),
            }))
        }
        Command::Mc {
            eps,
            samples,
            seed,
            family,
        } => {
            let fam = IndicatorFamily::from_file(&family)?;
            let est = fam.mc_lower_tail(eps, samples, seed)?;
            emit(&json!({ "eps": eps, "estimate": est }))
        }
        Command::Phi { eps, a } => {
            let bounds = varphi_bounds_check(eps)?;
            let near_one = varphi2_check(eps).ok();
            let scaling = match a {
                Some(a) => Some(varphi3_factor(eps, a)?),
                None => None,
            };
            emit(&json!({
                "eps": eps,
                "phi": phi_neg(eps)?,
                "squeeze": bounds,
                "near_one": near_one,
                "scaling": scaling,
            }))
        }
        Command::Bounds { eps, family } => {
            let fam = IndicatorFamily::from_file(&family)?;
            let stats = fam.compute_stats();
            let bounds: Vec<serde_json::Value> = all_bounds(&fam, eps)
                .into_iter()
                .map(|(name, b)| json!({ "name": name, "result": b }))
                .collect();
            emit(&json!({ "eps": eps, "stats": stats, "bounds": bounds }))
        }
        Command::Holder {
            eps,
            sigma,
            tau,
            family,
        } => {
            let fam = IndicatorFamily::from_file(&family)?;
            emit(&holder_report(&fam, eps, sigma, tau)?)
        }
        Command::Transfer(cmd) => match cmd {
            TransferCommand::Rsize { eps, family } => {
                let fam = IndicatorFamily::from_file(&family)?;
                emit(&rsize_transfer(&fam, eps)?)
            }
            TransferCommand::Rsize2 { eps, tau, family } => {
                let fam = IndicatorFamily::from_file(&family)?;
                emit(&rsize2_transfer(&fam, eps, tau)?)
            }
            TransferCommand::Rcor {
                eps,
                gamma,
                decomp,
                mc,
            } => {
                let text = std::fs::read_to_string(&decomp)?;
                let file: DecompositionFile = serde_json::from_str(&text)?;
                let dec = file.into_decomposition()?;
                emit(&rcor_transfer(&dec, eps, gamma, mc.truth())?)
            }
            TransferCommand::Vxsym {
                h,
                g,
                n,
                p,
                eps,
                u,
                ell,
                mc,
            } => {
                let h = kgraph_from_file(&h)?;
                let g = kgraph_from_file(&g)?;
                let u: Vec<usize> = u.unwrap_or_else(|| (0..n / 2).collect());
                emit(&vxsym_transfer(&h, &g, n, p, eps, &u, ell, mc.truth())?)
            }
        },
        Command::Instance(cmd) => match cmd {
            InstanceCommand::Subgraph { h, n, p, out } => {
                let graph = kgraph_from_file(&h)?;
                let inst = subgraph_family(&graph, n, p)?;
                std::fs::write(out.with_extension("family"), inst.family.to_file_string())?;
                let stats = inst.family.compute_stats();
                let sidecar = json!({
                    "h": kgraph_to_string(&graph).trim(),
                    "n": n,
                    "p": p,
                    "copies": inst.copies,
                    "phi_h": inst.phi_h,
                    "phi_h_with_isolated": inst.phi_h_with_isolated,
                    "m_k": [inst.mk.numer(), inst.mk.denom()],
                    "ih_classes": inst.ih.len(),
                    "c_jh": inst.cjh,
                    "lambda_formula": lambda_asymptotic(&inst)?,
                    "stats": stats,
                    "turan": turan_sidecar(&graph, n, p),
                });
                std::fs::write(
                    out.with_extension("json"),
                    serde_json::to_string_pretty(&sidecar)?,
                )?;
                emit(&sidecar)
            }
            InstanceCommand::Ap { k, n, p, out } => {
                let (fam, dec) = ap_family(k, n, p)?;
                std::fs::write(out.with_extension("family"), fam.to_file_string())?;
                let sidecar = json!({
                    "k": k,
                    "n": n,
                    "p": p,
                    "members": fam.len(),
                    "kappa": dec.kappa,
                    "kappa_rational": ap_kappa(k, n).map(|r| [*r.numer(), *r.denom()]),
                    "stats": fam.compute_stats(),
                    "decomposition": DecompositionFile::from_decomposition(&dec),
                });
                std::fs::write(
                    out.with_extension("json"),
                    serde_json::to_string_pretty(&sidecar)?,
                )?;
                emit(&sidecar)
            }
            InstanceCommand::Schur { n, p, out } => {
                let (fam, dec) = schur_family(n, p)?;
                std::fs::write(out.with_extension("family"), fam.to_file_string())?;
                let sidecar = json!({
                    "n": n,
                    "p": p,
                    "members": fam.len(),
                    "kappa": dec.kappa,
                    "kappa_rational": schur_kappa(n).map(|r| [*r.numer(), *r.denom()]),
                    "stats": fam.compute_stats(),
                    "decomposition": DecompositionFile::from_decomposition(&dec),
                });
                std::fs::write(
                    out.with_extension("json"),
                    serde_json::to_string_pretty(&sidecar)?,
                )?;
                emit(&sidecar)
            }
        },
        Command::Experiment(cmd) => match cmd {
            ExperimentCommand::Run { config } => {
                let text = std::fs::read_to_string(&config)?;
                let config: ExperimentConfig = serde_json::from_str(&text)?;
                emit(&run_experiment(&config)?)
            }
            ExperimentCommand::Trend { config } => {
                let text = std::fs::read_to_string(&config)?;
                let config: TrendConfig = serde_json::from_str(&text)?;
                emit(&rate_function_trend(&config)?)
            }
        },
    }
}

fn turan_sidecar(graph: &tailkit::instances::KGraph, n: usize, p: f64) -> serde_json::Value {
    let ex = turan_number(graph, n).ok();
    let pi = pi_from_chromatic(graph).ok();
    let bound = turan_lower_bound(graph, n, p, &TuranData { n, ex_n: ex, pi_h: pi }).ok();
    json!({
        "ex_n": ex,
        "pi_h": pi,
        "ground_limit": TURAN_GROUND_LIMIT,
        "zero_count_bound": bound,
    })
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}

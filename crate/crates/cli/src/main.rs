use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use siegelkit::egk::{f_recursive, validate_egk, validate_naive, EGKDatum, NaiveEGK};
use siegelkit::localfield::{ordp, PrimeContext};
use siegelkit::oracle::{verify, VerifyOptions};
use siegelkit::quadform::{d_b, e_b, eps_b, eta_b, validate, xi_b, GKData, HalfIntMat, Involution};
use siegelkit::siegel::{egk_of_matrix, f_tilde_matrix, siegel_from_egk, DyadicCert, SiegelResult};
use siegelkit::Error;

/// Siegel series of half-integral matrices over Z_p through extended
/// Gross-Keating data.
#[derive(Parser)]
#[command(name = "siegelkit", version)]
struct Cli {
    /// Worker threads for the density oracle.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long)]
    prime: u64,
    /// Matrix JSON: {"n": 2, "entries": [["1","1/2"],["1/2","3"]]}
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Args)]
struct CertArgs {
    /// GK sequence of a reduced form, e.g. 0,1 (needed when p = 2).
    #[arg(long, value_delimiter = ',', requires = "sigma")]
    gk: Option<Vec<u32>>,
    /// 1-based involution, e.g. 2,1 (needed when p = 2).
    #[arg(long, value_delimiter = ',', requires = "gk")]
    sigma: Option<Vec<usize>>,
}

#[derive(Subcommand)]
enum Command {
    /// D_B, ord(D_B), xi_B, eps_B, eta_B and e_B.
    Invariants {
        #[command(flatten)]
        m: MatrixArgs,
        #[arg(long)]
        json: bool,
    },
    /// The EGK datum of B as JSON.
    Egk {
        #[command(flatten)]
        m: MatrixArgs,
        #[command(flatten)]
        cert: CertArgs,
    },
    /// F~(B, X) at Y = sqrt(q) and the polynomial F(B, X).
    Siegel {
        #[arg(long, conflicts_with = "egk", requires = "matrix")]
        prime: Option<u64>,
        #[arg(long, conflicts_with = "egk", required_unless_present = "egk")]
        matrix: Option<PathBuf>,
        /// EGK JSON: {"n": [1,1], "m": [0,1], "zeta": [1,0]}
        #[arg(long, requires = "q")]
        egk: Option<PathBuf>,
        /// Residue field size used with --egk.
        #[arg(long)]
        q: Option<u64>,
        #[command(flatten)]
        cert: CertArgs,
        #[arg(long)]
        json: bool,
    },
    /// The Laurent polynomial F(H; Y, X) of a naive EGK datum.
    Fpoly {
        /// Naive EGK JSON: {"a": [0,1], "eps": [1,0]}
        #[arg(long)]
        naive_egk: PathBuf,
    },
    /// Compare F(B, X) with the polynomial interpolated from local densities.
    Verify {
        #[command(flatten)]
        m: MatrixArgs,
        #[command(flatten)]
        cert: CertArgs,
        /// Largest hyperbolic rank the oracle may use.
        #[arg(long)]
        max_k: Option<usize>,
    },
    /// Run the embedded property suite.
    Selftest,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
        .map_err(Into::into)
}

fn load(m: &MatrixArgs) -> Result<(HalfIntMat, PrimeContext)> {
    let ctx = PrimeContext::new(m.prime).map_err(Error::from)?;
    let b: HalfIntMat = read_json(&m.matrix)?;
    validate(&b, &ctx).map_err(Error::from)?;
    Ok((b, ctx))
}

fn certificate(c: &CertArgs) -> Result<Option<DyadicCert>> {
    match (&c.gk, &c.sigma) {
        (Some(a), Some(s)) => Ok(Some(DyadicCert {
            a: GKData::new(a.clone()).map_err(Error::from)?,
            sigma: Involution::from_one_based(s).map_err(Error::from)?,
        })),
        _ => Ok(None),
    }
}

fn print_siegel(r: &SiegelResult, as_json: bool) {
    if as_json {
        println!("{}", r.to_json());
    } else {
        println!("F~ = {}", r.render_f_tilde());
        println!("F = {}", r.render_f());
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    match cli.command {
        Command::Invariants { m, json } => {
            let (b, ctx) = load(&m)?;
            let d = d_b(&b, &ctx).map_err(Error::from)?;
            let ord = ordp(&ctx, &d).finite().expect("non-degenerate");
            let xi = xi_b(&b, &ctx).map_err(Error::from)?;
            let eps = eps_b(&b, &ctx).map_err(Error::from)?;
            let eta = eta_b(&b, &ctx).map_err(Error::from)?;
            let e = e_b(&b, &ctx).map_err(Error::from)?;
            if json {
                let v = json!({"d_b": d.to_string(), "ord_d_b": ord, "xi": xi, "eps": eps, "eta": eta, "e_b": e});
                println!("{v}");
            } else {
                println!("D_B = {d}");
                println!("ord(D_B) = {ord}");
                println!("xi_B = {xi}");
                println!("eps_B = {eps}");
                println!("eta_B = {eta}");
                println!("e_B = {e}");
            }
        }
        Command::Egk { m, cert } => {
            let (b, ctx) = load(&m)?;
            let g = egk_of_matrix(&b, &ctx, certificate(&cert)?.as_ref()).map_err(Error::from)?;
            println!("{}", serde_json::to_string(&g)?);
        }
        Command::Siegel {
            prime,
            matrix,
            egk,
            q,
            cert,
            json,
        } => {
            let r = match (egk, matrix) {
                (Some(path), _) => {
                    let g: EGKDatum = read_json(&path)?;
                    validate_egk(&g).map_err(Error::from)?;
                    siegel_from_egk(&g, q.expect("clap requires --q")).map_err(Error::from)?
                }
                (None, Some(path)) => {
                    let prime =
                        prime.ok_or_else(|| Error::Validation("--matrix needs --prime".into()))?;
                    let (b, ctx) = load(&MatrixArgs {
                        prime,
                        matrix: path,
                    })?;
                    f_tilde_matrix(&b, &ctx, certificate(&cert)?.as_ref()).map_err(Error::from)?
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            print_siegel(&r, json);
        }
        Command::Fpoly { naive_egk } => {
            let h: NaiveEGK = read_json(&naive_egk)?;
            validate_naive(&h).map_err(Error::from)?;
            println!("{}", f_recursive(&h).map_err(Error::from)?);
        }
        Command::Verify { m, cert, max_k } => {
            let (b, ctx) = load(&m)?;
            let opts = VerifyOptions {
                max_k,
                limits: None,
            };
            let report =
                verify(&b, &ctx, certificate(&cert)?.as_ref(), &opts).map_err(Error::from)?;
            println!("{}", report.to_json());
            if !report.is_match() {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Selftest => {
            let mut failed = 0;
            for c in siegelkit::selftest::run_all() {
                match &c.failure {
                    None => println!("PASS {} ({} cases)", c.name, c.cases),
                    Some(why) => {
                        failed += 1;
                        println!("FAIL {}: {why}", c.name);
                    }
                }
            }
            if failed > 0 {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Error>().map_or(2, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

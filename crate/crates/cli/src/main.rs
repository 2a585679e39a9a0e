//! Command-line entry point for the induced lattice gauge model toolkit.
//!
//! One subcommand per subsystem; scalar results and reports are emitted as
//! JSON, series as CSV. All runs are deterministic for a fixed config and
//! seed. Failures print a machine-readable error object to stderr and exit
//! nonzero.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use inducedym::abeliandual::{self, DualWeightConfig};
use inducedym::cellcomplex::{build_hypercubic, CellComplex, Contour};
use inducedym::error::Error;
use inducedym::fockcheck;
use inducedym::montecarlo::{self, LatticeAction, McParams};
use inducedym::repn::{self, IrrepSignature};
use inducedym::residues::{parse_rational, rational_string, ResidueEngine};
use inducedym::twodim::{self, CasimirKind, ContinuumParams};
use inducedym::weights::{self, ModelCouplings};

#[derive(Parser)]
#[command(name = "inducedym", version, about = "Induced lattice gauge models with U(N) gauge group")]
struct Cli {
    /// TOML config file; explicit flags override config values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for stochastic subcommands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker-thread cap for subcommands with internal parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for the main artifact.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Representation data for a U(N_c) signature.
    Repn(RepnArgs),
    /// Character-expansion coefficients of the plaquette weight.
    Coeff(CoeffArgs),
    /// One-plaquette expectation of Tr U.
    Oneplaq(OneplaqArgs),
    /// Genus-g continuum partition function.
    Zg(ZgArgs),
    /// Sphere / torus gluing verification.
    Glue(GlueArgs),
    /// Lattice partition function on a closed surface.
    Lattice2d(Lattice2dArgs),
    /// Metropolis simulation on a cell complex.
    Mc(McArgs),
    /// Dual chain-sum evaluation of the U(1) model.
    Dual(DualArgs),
    /// Fock-trace identity and singlet Hilbert series.
    Fock(FockArgs),
    /// Build or inspect complex description files.
    Complex(ComplexArgs),
}

#[derive(Args)]
struct RepnArgs {
    #[arg(long)]
    nc: Option<usize>,
    /// Signature entries, e.g. "1,0,-1".
    #[arg(long)]
    lambda: Option<String>,
    /// Include the full weight table.
    #[arg(long)]
    weights: bool,
}

#[derive(Args)]
struct CoeffArgs {
    #[arg(long)]
    nc: Option<usize>,
    #[arg(long)]
    nb: Option<u32>,
    #[arg(long, default_value_t = 0)]
    nf: u32,
    /// Couplings to sweep, e.g. "0.3,0.6,0.9" (exact rationals accepted).
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long = "alpha-f", default_value = "0", allow_hyphen_values = true)]
    alpha_f: String,
    /// Signatures, repeatable: --lambda 1,0 --lambda 1,1
    #[arg(long)]
    lambda: Vec<String>,
    /// det | quad | residue
    #[arg(long, default_value = "det")]
    engine: String,
    /// Grid per dimension for the quadrature engine.
    #[arg(long, default_value_t = 32)]
    grid: usize,
}

#[derive(Args)]
struct OneplaqArgs {
    #[arg(long)]
    nc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    nb: u32,
    #[arg(long, default_value_t = 0)]
    nf: u32,
    #[arg(long = "alpha-b", default_value = "0", allow_hyphen_values = true)]
    alpha_b: String,
    #[arg(long = "alpha-f", default_value = "0", allow_hyphen_values = true)]
    alpha_f: String,
    /// det | residue
    #[arg(long, default_value = "det")]
    engine: String,
}

#[derive(Args)]
struct ZgArgs {
    #[arg(long)]
    nc: Option<usize>,
    /// quadratic | cauchy
    #[arg(long, default_value = "quadratic")]
    kind: String,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, default_value_t = 0)]
    genus: i64,
    /// Trace-part coupling ratio B1/B2 (quadratic kind).
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    #[arg(long = "max-entry", default_value_t = 12)]
    max_entry: i64,
    #[arg(long = "max-cas")]
    max_cas: Option<f64>,
    #[arg(long = "tail-tol", default_value_t = 1e-9)]
    tail_tol: f64,
}

#[derive(Args)]
struct GlueArgs {
    #[arg(long)]
    nc: Option<usize>,
    /// sphere | torus
    #[arg(long, default_value = "sphere")]
    surface: String,
    #[arg(long = "mu-plus", default_value_t = 1.0)]
    mu_plus: f64,
    #[arg(long = "mu-minus", default_value_t = 1.0)]
    mu_minus: f64,
    #[arg(long, default_value = "quadratic")]
    kind: String,
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    #[arg(long, default_value_t = 32)]
    grid: usize,
    #[arg(long = "max-entry", default_value_t = 4)]
    max_entry: i64,
    #[arg(long = "tail-tol", default_value_t = 1e-6)]
    tail_tol: f64,
}

#[derive(Args)]
struct Lattice2dArgs {
    #[arg(long)]
    nc: Option<usize>,
    #[arg(long)]
    nb: Option<u32>,
    #[arg(long, default_value_t = 1)]
    genus: i64,
    /// Explicit per-plaquette couplings "0.9,0.9,...".
    #[arg(long)]
    alphas: Option<String>,
    /// Alternatively: total area mu split over K equal plaquettes.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    plaquettes: Option<usize>,
    /// Area-to-coupling map when using --mu: quadratic | cauchy.
    #[arg(long, default_value = "quadratic")]
    kind: String,
    #[arg(long = "max-entry", default_value_t = 8)]
    max_entry: i64,
}

#[derive(Args)]
struct McArgs {
    /// Complex description file (JSON).
    #[arg(long)]
    complex: Option<PathBuf>,
    #[arg(long)]
    nc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    nb: u32,
    #[arg(long, default_value_t = 0)]
    nf: u32,
    #[arg(long = "alpha-b", default_value_t = 0.0, allow_negative_numbers = true)]
    alpha_b: f64,
    #[arg(long = "alpha-f", default_value_t = 0.0, allow_negative_numbers = true)]
    alpha_f: f64,
    /// Wilson-action mode with this beta (overrides the induced action).
    #[arg(long)]
    beta: Option<f64>,
    /// Number of measurements.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value_t = 2)]
    sweeps: usize,
    #[arg(long, default_value_t = 500)]
    therm: usize,
    #[arg(long, default_value_t = 1)]
    chains: usize,
    /// Measure Re Tr U(C) along this contour file instead of the plaquette
    /// average.
    #[arg(long)]
    contour: Option<PathBuf>,
}

#[derive(Args)]
struct DualArgs {
    #[arg(long)]
    complex: Option<PathBuf>,
    /// Uniform coupling, or a per-plaquette list "0.3,0.2,...".
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, default_value_t = 12)]
    nmax: i64,
    #[arg(long)]
    contour: Option<PathBuf>,
    /// Also evaluate the gauge-fixed quadrature oracle on this grid.
    #[arg(long)]
    oracle_grid: Option<usize>,
}

#[derive(Args)]
struct FockArgs {
    #[arg(long)]
    nc: Option<usize>,
    #[arg(long)]
    nb: Option<u32>,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    /// Fock truncation for the trace identity.
    #[arg(long, default_value_t = 40)]
    cutoff: usize,
    /// Random unitaries to test.
    #[arg(long, default_value_t = 5)]
    trials: usize,
    /// Also compute the Hilbert series up to this degree.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 96)]
    grid: usize,
}

#[derive(Args)]
struct ComplexArgs {
    /// Extents per axis, e.g. "2,2".
    #[arg(long)]
    extents: Option<String>,
    /// Periodicity per axis, e.g. "true,false".
    #[arg(long)]
    periodic: Option<String>,
    /// Validate and summarize an existing file instead of building.
    #[arg(long)]
    check: Option<PathBuf>,
}

/// Config-file fallback: `[section] key = value` supplies defaults that
/// explicit flags override.
struct Cfg {
    table: toml::Table,
}

impl Cfg {
    fn load(path: &Option<PathBuf>) -> Result<Self, Error> {
        let table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                text.parse::<toml::Table>().map_err(|e| {
                    Error::InvalidParameter(format!("config parse error: {e}"))
                })?
            }
            None => toml::Table::new(),
        };
        Ok(Self { table })
    }

    fn get<T: serde::de::DeserializeOwned>(&self, section: &str, key: &str) -> Option<T> {
        let v = self.table.get(section)?.get(key)?.clone();
        T::deserialize(v).ok()
    }

    fn global<T: serde::de::DeserializeOwned>(&self, key: &str) -> Option<T> {
        let v = self.table.get(key)?.clone();
        T::deserialize(v).ok()
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            let obj = json!({
                "error": {
                    "code": e.code(),
                    "module": e.module(),
                    "message": e.to_string(),
                }
            });
            eprintln!("{}", serde_json::to_string_pretty(&obj).expect("error object"));
            std::process::exit(1);
        }
    }
}

fn precision_tier() -> Result<&'static str, Error> {
    match std::env::var("INDUCEDYM_PRECISION") {
        Ok(v) if v == "f64" => Ok("f64"),
        Ok(v) if v == "exact" => Ok("exact"),
        Ok(v) => Err(Error::InvalidParameter(format!(
            "INDUCEDYM_PRECISION must be 'f64' or 'exact', got '{v}'"
        ))),
        Err(_) => Ok("f64"),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = Cfg::load(&cli.config)?;
    let seed = cli.seed.or_else(|| cfg.global("seed")).unwrap_or(1);
    let threads = cli.threads.or_else(|| cfg.global("threads")).unwrap_or(1);
    let format = cli.format.unwrap_or(match cfg.global::<String>("format").as_deref() {
        Some("csv") => Format::Csv,
        _ => Format::Json,
    });
    let out = cli.out.clone().or_else(|| cfg.global::<String>("out").map(PathBuf::from));
    let tier = precision_tier()?;

    let rendered = match &cli.command {
        Command::Repn(a) => run_repn(a, &cfg)?,
        Command::Coeff(a) => run_coeff(a, &cfg, format)?,
        Command::Oneplaq(a) => run_oneplaq(a, &cfg, tier)?,
        Command::Zg(a) => run_zg(a, &cfg)?,
        Command::Glue(a) => run_glue(a, &cfg)?,
        Command::Lattice2d(a) => run_lattice2d(a, &cfg)?,
        Command::Mc(a) => run_mc(a, &cfg, seed, threads, format)?,
        Command::Dual(a) => run_dual(a, &cfg)?,
        Command::Fock(a) => run_fock(a, &cfg, seed)?,
        Command::Complex(a) => run_complex(a, &cfg)?,
    };

    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(rendered.as_bytes())?;
        }
        None => {
            print!("{rendered}");
            std::io::stdout().flush()?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Error> {
    Ok(format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn parse_signature(text: &str) -> Result<IrrepSignature, Error> {
    let entries: Result<Vec<i64>, _> =
        text.split(',').map(|t| t.trim().parse::<i64>()).collect();
    let entries =
        entries.map_err(|_| Error::InvalidParameter(format!("bad signature '{text}'")))?;
    IrrepSignature::new(entries)
}

fn parse_list_f64(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|t| {
            let r = parse_rational(t)?;
            r.to_f64()
                .ok_or_else(|| Error::InvalidParameter(format!("value '{t}' out of range")))
        })
        .collect()
}

fn require<T>(v: Option<T>, what: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::InvalidParameter(format!("missing required parameter: {what}")))
}

fn run_repn(a: &RepnArgs, cfg: &Cfg) -> Result<String, Error> {
    let nc = require(a.nc.or_else(|| cfg.get("repn", "nc")), "--nc")?;
    let lam_text =
        require(a.lambda.clone().or_else(|| cfg.get("repn", "lambda")), "--lambda")?;
    let lam = parse_signature(&lam_text)?;
    if lam.n_c() != nc {
        return Err(Error::InvalidParameter(format!(
            "signature length {} does not match --nc {nc}",
            lam.n_c()
        )));
    }
    let cas1 = repn::casimir1(&lam)?;
    let mut obj = json!({
        "lambda": lam.entries(),
        "n_c": nc,
        "dimension": lam.dimension(),
        "charge": lam.charge(),
        "casimir2": lam.casimir2(),
        "casimir1": rational_string(&cas1),
        "casimir1_float": repn::rational_to_f64(&cas1),
    });
    if a.weights {
        let table = repn::weight_multiplicities(&lam)?;
        let rows: Vec<_> = table.iter().map(|(w, m)| json!({"weight": w, "mult": m})).collect();
        obj["weights"] = json!(rows);
    }
    to_json(&obj)
}

fn run_coeff(a: &CoeffArgs, cfg: &Cfg, format: Format) -> Result<String, Error> {
    let nc = require(a.nc.or_else(|| cfg.get("coeff", "nc")), "--nc")?;
    let nb = require(a.nb.or_else(|| cfg.get("coeff", "nb")), "--nb")?;
    let alphas_text: String = a
        .alphas
        .clone()
        .or_else(|| cfg.get("coeff", "alphas"))
        .unwrap_or_else(|| "0.5".to_string());
    let lambdas: Vec<IrrepSignature> = if a.lambda.is_empty() {
        vec![IrrepSignature::trivial(nc), IrrepSignature::fundamental(nc)]
    } else {
        a.lambda.iter().map(|t| parse_signature(t)).collect::<Result<_, _>>()?
    };
    let alpha_f = parse_rational(&a.alpha_f)?;
    let alpha_f_float = alpha_f.to_f64().unwrap_or(0.0);

    #[derive(Serialize)]
    struct Row {
        lambda: String,
        alpha: f64,
        c_lambda: f64,
        ratio_to_c0: f64,
        engine: String,
    }
    let mut rows = Vec::new();
    for alpha_text in alphas_text.split(',') {
        let alpha_rat = parse_rational(alpha_text)?;
        let alpha = alpha_rat
            .to_f64()
            .ok_or_else(|| Error::InvalidParameter("coupling out of range".into()))?;
        for lam in &lambdas {
            let (c, c0v) = match a.engine.as_str() {
                "det" => {
                    let c = ModelCouplings::new(nc, nb, a.nf, alpha, alpha_f_float)?;
                    (weights::char_coefficient(lam, &c)?.value, weights::c0(&c)?)
                }
                "quad" => {
                    let c = ModelCouplings::new(nc, nb, a.nf, alpha, alpha_f_float)?;
                    (
                        weights::char_coefficient_quadrature(lam, &c, a.grid)?,
                        weights::char_coefficient_quadrature(
                            &IrrepSignature::trivial(nc),
                            &c,
                            a.grid,
                        )?,
                    )
                }
                "residue" => {
                    let eng = if a.nf > 0 {
                        ResidueEngine::fermion(nc, a.nf, alpha_f.clone())?
                    } else {
                        ResidueEngine::boson(nc, nb, alpha_rat.clone())?
                    };
                    let c = eng.char_coefficient(lam)?;
                    let c0 = eng.char_coefficient(&IrrepSignature::trivial(nc))?;
                    (
                        c.to_f64().unwrap_or(f64::NAN),
                        c0.to_f64().unwrap_or(f64::NAN),
                    )
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown engine '{other}' (det | quad | residue)"
                    )))
                }
            };
            rows.push(Row {
                lambda: format!("{lam}"),
                alpha,
                c_lambda: c,
                ratio_to_c0: c / c0v,
                engine: a.engine.clone(),
            });
        }
    }
    match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("lambda,alpha,c_lambda,ratio_to_c0,engine\n");
            for r in rows {
                s.push_str(&format!(
                    "\"{}\",{},{},{},{}\n",
                    r.lambda, r.alpha, r.c_lambda, r.ratio_to_c0, r.engine
                ));
            }
            Ok(s)
        }
    }
}

fn run_oneplaq(a: &OneplaqArgs, cfg: &Cfg, tier: &str) -> Result<String, Error> {
    let nc = require(a.nc.or_else(|| cfg.get("oneplaq", "nc")), "--nc")?;
    match a.engine.as_str() {
        "det" => {
            let alpha_b = parse_rational(&a.alpha_b)?.to_f64().unwrap_or(f64::NAN);
            let alpha_f = parse_rational(&a.alpha_f)?.to_f64().unwrap_or(f64::NAN);
            let c = ModelCouplings::new(nc, a.nb, a.nf, alpha_b, alpha_f)?;
            let w = weights::wilson_loop_one_plaquette(&c)?;
            to_json(&json!({
                "engine": "det",
                "n_c": nc, "n_b": a.nb, "n_f": a.nf,
                "alpha_b": alpha_b, "alpha_f": alpha_f,
                "value": w,
                "precision": tier,
            }))
        }
        "residue" => {
            let eng = if a.nf > 0 && a.nb > 0 {
                return Err(Error::InvalidParameter(
                    "residue engine handles a single species; drop --nb or --nf".into(),
                ));
            } else if a.nf > 0 {
                ResidueEngine::fermion(nc, a.nf, parse_rational(&a.alpha_f)?)?
            } else {
                ResidueEngine::boson(nc, a.nb, parse_rational(&a.alpha_b)?)?
            };
            let w = eng.wilson()?;
            to_json(&json!({
                "engine": "residue",
                "n_c": nc, "n_b": a.nb, "n_f": a.nf,
                "alpha_b": a.alpha_b, "alpha_f": a.alpha_f,
                "value": w.to_f64().unwrap_or(f64::NAN),
                "exact": rational_string(&w),
                "precision": tier,
            }))
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown engine '{other}' (det | residue)"
        ))),
    }
}

fn parse_kind(text: &str) -> Result<CasimirKind, Error> {
    match text {
        "quadratic" => Ok(CasimirKind::Quadratic),
        "cauchy" => Ok(CasimirKind::Cauchy),
        _ => Err(Error::InvalidParameter(format!(
            "unknown kind '{text}' (quadratic | cauchy)"
        ))),
    }
}

fn run_zg(a: &ZgArgs, cfg: &Cfg) -> Result<String, Error> {
    let nc = require(a.nc.or_else(|| cfg.get("zg", "nc")), "--nc")?;
    let mu = require(a.mu.or_else(|| cfg.get("zg", "mu")), "--mu")?;
    let kind = parse_kind(&a.kind)?;
    let params = ContinuumParams::new(nc, mu, a.r, a.genus, kind)?
        .with_cutoff(a.max_entry, a.max_cas.unwrap_or(f64::INFINITY))
        .with_tail_tol(a.tail_tol);
    let (value, tail) = twodim::z_genus(&params)?;
    to_json(&json!({
        "genus": a.genus, "mu": mu, "r": a.r, "kind": a.kind,
        "max_entry": a.max_entry,
        "value": value, "tail_bound": tail,
    }))
}

fn run_glue(a: &GlueArgs, cfg: &Cfg) -> Result<String, Error> {
    let nc = require(a.nc.or_else(|| cfg.get("glue", "nc")), "--nc")?;
    let kind = parse_kind(&a.kind)?;
    let params = ContinuumParams::new(nc, a.mu_plus + a.mu_minus, a.r, 0, kind)?
        .with_cutoff(a.max_entry, f64::INFINITY)
        .with_tail_tol(a.tail_tol);
    let rep = match a.surface.as_str() {
        "sphere" => twodim::glue_sphere(a.mu_plus, a.mu_minus, &params, a.grid)?,
        "torus" => twodim::glue_torus(&ContinuumParams {
            mu: a.mu_plus,
            ..params.clone()
        })?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown surface '{other}' (sphere | torus)"
            )))
        }
    };
    to_json(&rep)
}

fn run_lattice2d(a: &Lattice2dArgs, cfg: &Cfg) -> Result<String, Error> {
    let nc = require(a.nc.or_else(|| cfg.get("lattice2d", "nc")), "--nc")?;
    let nb = require(a.nb.or_else(|| cfg.get("lattice2d", "nb")), "--nb")?;
    let alphas: Vec<f64> = match (&a.alphas, a.mu, a.plaquettes) {
        (Some(list), _, _) => parse_list_f64(list)?,
        (None, Some(mu), Some(k)) => {
            let kind = parse_kind(&a.kind)?;
            let t = mu / k as f64;
            let alpha = match kind {
                CasimirKind::Quadratic => twodim::alpha_for_area_quadratic(t),
                CasimirKind::Cauchy => twodim::alpha_for_area_cauchy(t),
            };
            vec![alpha; k]
        }
        _ => {
            return Err(Error::InvalidParameter(
                "provide either --alphas or both --mu and --plaquettes".into(),
            ))
        }
    };
    let couplings = ModelCouplings::boson(nc, nb, 0.0)?;
    let z = twodim::lattice_partition_closed_surface(a.genus, &alphas, &couplings, a.max_entry)?;
    to_json(&json!({
        "genus": a.genus, "n_c": nc, "n_b": nb,
        "plaquettes": alphas.len(),
        "normalized": z.normalized,
        "tail": z.tail,
        "log_norm": z.log_norm,
    }))
}

fn load_complex(path: &PathBuf) -> Result<CellComplex, Error> {
    CellComplex::from_json(&std::fs::read_to_string(path)?)
}

fn load_contour(path: &PathBuf) -> Result<Contour, Error> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn run_mc(
    a: &McArgs,
    cfg: &Cfg,
    seed: u64,
    threads: usize,
    format: Format,
) -> Result<String, Error> {
    let path = require(
        a.complex.clone().or_else(|| cfg.get::<String>("mc", "complex").map(PathBuf::from)),
        "--complex",
    )?;
    let complex = load_complex(&path)?;
    let nc = require(a.nc.or_else(|| cfg.get("mc", "nc")), "--nc")?;
    let action = match a.beta {
        Some(beta) => LatticeAction::Wilson { n_c: nc, beta },
        None => LatticeAction::Induced(ModelCouplings::new(
            nc, a.nb, a.nf, a.alpha_b, a.alpha_f,
        )?),
    };
    let params = McParams {
        measurements: a.steps,
        sweeps_per_measurement: a.sweeps,
        thermalization: a.therm,
        step_size: 0.5,
        seed,
        stream: 0,
        record_series: true,
    };
    let reports = if let Some(cpath) = &a.contour {
        let contour = load_contour(cpath)?;
        vec![montecarlo::wilson_loop_mc(&complex, &contour, &action, &params)?]
    } else if a.chains > 1 {
        montecarlo::mc_run_chains(&complex, &action, &params, a.chains, threads)?
    } else {
        vec![montecarlo::mc_run(&complex, &action, &params)?]
    };
    match format {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut s = String::from("row,chain,index,value\n");
            for (c, rep) in reports.iter().enumerate() {
                if let Some(series) = &rep.series {
                    for (i, v) in series.iter().enumerate() {
                        s.push_str(&format!("measurement,{c},{i},{v}\n"));
                    }
                }
                s.push_str(&format!("summary_mean,{c},,{}\n", rep.mean));
                s.push_str(&format!("summary_std_error,{c},,{}\n", rep.std_error));
                s.push_str(&format!("summary_tau_int,{c},,{}\n", rep.tau_int));
                s.push_str(&format!("summary_acceptance,{c},,{}\n", rep.acceptance));
            }
            Ok(s)
        }
    }
}

fn run_dual(a: &DualArgs, cfg: &Cfg) -> Result<String, Error> {
    let path = require(
        a.complex.clone().or_else(|| cfg.get::<String>("dual", "complex").map(PathBuf::from)),
        "--complex",
    )?;
    let complex = load_complex(&path)?;
    let alpha_text: String = a
        .alpha
        .clone()
        .or_else(|| cfg.get("dual", "alpha"))
        .unwrap_or_else(|| "0.3".into());
    let alphas = parse_list_f64(&alpha_text)?;
    let alphas = if alphas.len() == 1 {
        vec![alphas[0]; complex.num_plaquettes()]
    } else {
        alphas
    };
    let config = DualWeightConfig::new(alphas, a.nmax)?;
    let mut obj = match &a.contour {
        Some(cpath) => {
            let contour = load_contour(cpath)?;
            let w = abeliandual::dual_wilson(&complex, &contour, &config)?;
            json!({
                "observable": "wilson_loop",
                "value": w.value, "tail_bound": w.tail_bound, "chain_count": w.chain_count,
            })
        }
        None => {
            let z = abeliandual::dual_partition(&complex, &config)?;
            json!({
                "observable": "partition",
                "value": z.value, "tail_bound": z.tail_bound, "chain_count": z.chain_count,
            })
        }
    };
    if let Some(grid) = a.oracle_grid {
        let oracle = match &a.contour {
            Some(cpath) => {
                let contour = load_contour(cpath)?;
                abeliandual::direct_u1_wilson_oracle(&complex, &contour, &config, grid)?
            }
            None => abeliandual::direct_u1_oracle(&complex, &config, grid)?,
        };
        obj["oracle"] = json!(oracle);
    }
    to_json(&obj)
}

fn run_fock(a: &FockArgs, cfg: &Cfg, seed: u64) -> Result<String, Error> {
    let nc = require(a.nc.or_else(|| cfg.get("fock", "nc")), "--nc")?;
    let nb = require(a.nb.or_else(|| cfg.get("fock", "nb")), "--nb")?;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut trials = Vec::new();
    for _ in 0..a.trials {
        let u = montecarlo::haar_sample(nc, &mut rng);
        let rep = fockcheck::verify_det_identity(&u, a.alpha, nb, a.cutoff)?;
        worst = worst.max(rep.relative_error);
        trials.push(rep);
    }
    let mut obj = json!({
        "n_c": nc, "n_b": nb, "alpha": a.alpha, "cutoff": a.cutoff, "seed": seed,
        "trials": trials,
        "worst_relative_error": worst,
    });
    if let Some(d) = a.degree {
        let dims = fockcheck::singlet_hilbert_series(nc, nb, d, a.grid)?;
        obj["hilbert_series"] = json!(dims);
    }
    to_json(&obj)
}

fn run_complex(a: &ComplexArgs, cfg: &Cfg) -> Result<String, Error> {
    if let Some(path) = &a.check {
        let c = load_complex(path)?;
        let kernel = c.kernel_basis_2chains();
        return to_json(&json!({
            "sites": c.num_sites(),
            "links": c.num_links(),
            "plaquettes": c.num_plaquettes(),
            "euler_characteristic": c.euler_characteristic(),
            "closed_2chain_rank": kernel.len(),
        }));
    }
    let extents_text =
        require(a.extents.clone().or_else(|| cfg.get("complex", "extents")), "--extents")?;
    let periodic_text = a
        .periodic
        .clone()
        .or_else(|| cfg.get("complex", "periodic"))
        .unwrap_or_else(|| {
            extents_text.split(',').map(|_| "false").collect::<Vec<_>>().join(",")
        });
    let extents: Vec<usize> = extents_text
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::InvalidParameter(format!("bad extents '{extents_text}'")))?;
    let periodic: Vec<bool> = periodic_text
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::InvalidParameter(format!("bad periodic flags '{periodic_text}'")))?;
    let h = build_hypercubic(&extents, &periodic)?;
    Ok(format!("{}\n", h.complex.to_json()?))
}

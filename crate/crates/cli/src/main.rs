use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use syzygy_core::curvering::{canonical_ring, pencil_check, HypCurve, PencilDatum};
use syzygy_core::hypmodel::{self, ModelParams};
use syzygy_core::koszul::{betti_table, check_d_squared, np_verdict, pr_report, pr_row, GradedRingData};
use syzygy_core::poly::Poly;
use syzygy_core::{seed, Error, ModularConfig, RankMode, Report};

const EXIT_FAIL: u8 = 2;
const EXIT_USAGE: u8 = 3;

/// Exact verification of the hyperelliptic Petri constructions and a
/// Koszul cohomology calculator.
#[derive(Parser, Debug)]
#[command(name = "syzygy", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Comma-separated primes for modular-probe ranks.
    #[arg(long = "mod", value_delimiter = ',', global = true)]
    primes: Vec<u64>,
    /// Confirm every modular rank with an exact computation.
    #[arg(long, global = true)]
    confirm_exact: bool,
    /// Base seed for random curves and pencils.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Record wall-clock time in each report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Petri isomorphism, kernel element and span checks for a genus range.
    Verify {
        #[arg(long)]
        gmin: usize,
        #[arg(long)]
        gmax: usize,
        /// Check only this exterior degree.
        #[arg(long)]
        r: Option<usize>,
        /// Write the Petri matrices in dump format.
        #[arg(long)]
        dump_matrix: Option<PathBuf>,
    },
    /// Koszul cohomology table and N_p verdict.
    Betti {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        g: Option<usize>,
        /// Coefficients c0,c1,...,c_{2g+2} of f; random when omitted.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        qmax: usize,
        #[arg(long, default_value_t = 2)]
        pmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connecting-map check for a pencil.
    Lemma22 {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        s0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        s1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
    },
    /// Dimension audit of the exterior power map.
    Prcheck {
        #[arg(long)]
        gmin: usize,
        #[arg(long)]
        gmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Dump the Petri matrix or its inverse.
    Petri {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Which::P)]
        which: Which,
        /// Output file; standard output when omitted.
        #[arg(long)]
        dump_matrix: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Model {
    Hyperelliptic,
    Veronese,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Which {
    P,
    Q,
}

/// Failure of a command: usage problems exit 3, everything else 2.
enum Failure {
    Usage(String),
    Verify(String),
    /// Standard output closed early, as with `| head`.
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Param(_)
            | Error::Parse(_)
            | Error::DegenerateCurve(_)
            | Error::ExtendQmax(_)
            | Error::DimensionMismatch { .. }
            | Error::NoUsablePrimes { .. } => Failure::Usage(e.to_string()),
            other => Failure::Verify(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<bool, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SYZYGY_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = rayon_pool(cli.global.threads).and_then(|pool| pool.install(|| run(&cli)));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn rayon_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: &Cli) -> CmdResult {
    let cfg = modular_config(&cli.global)?;
    match &cli.cmd {
        Command::Verify { gmin, gmax, r, dump_matrix } => verify(&cli.global, &cfg, *gmin, *gmax, *r, dump_matrix),
        Command::Betti { model, g, f, n, qmax, pmax, format, out } => {
            betti(&cli.global, *model, *g, f.as_deref(), *n, *qmax, *pmax, *format, out)
        }
        Command::Lemma22 { g, m, s0, s1, t, f } => {
            pencil(&cli.global, *g, *m, s0.as_deref(), s1.as_deref(), t.as_deref(), f.as_deref())
        }
        Command::Prcheck { gmin, gmax, format } => prcheck(*gmin, *gmax, *format),
        Command::Petri { g, r, which, dump_matrix } => petri(*g, *r, *which, dump_matrix),
    }
}

fn modular_config(global: &Global) -> Result<ModularConfig, Failure> {
    let mode = match (global.primes.is_empty(), global.confirm_exact) {
        (true, false) => RankMode::Exact,
        (true, true) => return Err(Failure::Usage("--confirm-exact needs --mod".into())),
        (false, false) => RankMode::ModularProbe,
        (false, true) => RankMode::ModularWithExactConfirm,
    };
    Ok(ModularConfig::new(global.primes.clone(), mode)?)
}

fn emit(reports: &[Report]) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for r in reports {
        writeln!(out, "{}", r.to_json_line())?;
    }
    out.flush()
}

/// Runs `f`, turning an error into an ERROR report and stamping the time.
fn timed(global: &Global, task: &str, g: usize, r: usize, f: impl FnOnce() -> syzygy_core::Result<Report>) -> Report {
    let start = Instant::now();
    let mut rep = f().unwrap_or_else(|e| {
        let mut rep = Report::new(task).param("g", g).param("r", r);
        rep.error(e);
        rep
    });
    if global.timing {
        rep.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    rep
}

fn verify(
    global: &Global,
    cfg: &ModularConfig,
    gmin: usize,
    gmax: usize,
    fixed_r: Option<usize>,
    dump: &Option<PathBuf>,
) -> CmdResult {
    if gmin < 3 || gmin > gmax {
        return Err(Failure::Usage(format!("need 3 <= gmin <= gmax, got {gmin}..{gmax}")));
    }
    let mut pairs = Vec::new();
    for g in gmin..=gmax {
        match fixed_r {
            Some(r) => pairs.push(ModelParams::new(g, r)?),
            None => pairs.extend(ModelParams::all_for_genus(g)),
        }
    }
    let seed = global.seed;
    let results: Vec<Vec<Report>> = pairs
        .par_iter()
        .map(|p| {
            let (g, r) = (p.g, p.r);
            let mut reps = vec![
                timed(global, "phir", g, r, || hypmodel::check_phir(p, cfg)),
                timed(global, "verify_pq", g, r, || hypmodel::verify_pq(p, cfg)),
                timed(global, "what_element", g, r, || Ok(hypmodel::check_what(p))),
                timed(global, "z_element", g, r, || hypmodel::check_z(p)),
                timed(global, "contract_z", g, r, || hypmodel::check_contract_z(p)),
                timed(global, "ker_product_generators", g, r, || hypmodel::check_ker_generators(p)),
            ];
            reps.push(timed(global, "connecting_span", g, r, || {
                let curve = HypCurve::random(g, &mut seed::rng(seed, &[g as u64]))?;
                Ok(hypmodel::connecting_span_check(p, &curve)?.param("seed", seed))
            }));
            reps
        })
        .collect();
    if let Some(path) = dump {
        let mut text = String::new();
        for p in &pairs {
            text.push_str(&hypmodel::p_map(p).matrix.to_dump());
        }
        fs::write(path, text)?;
    }
    let reports: Vec<Report> = results.into_iter().flatten().collect();
    emit(&reports)?;
    Ok(reports.iter().all(Report::passed))
}

fn parse_poly(s: &str) -> Result<Poly, Failure> {
    Ok(Poly::parse(s)?)
}

fn curve_for(global: &Global, g: usize, f: Option<&str>) -> Result<HypCurve, Failure> {
    if g < 3 {
        return Err(Failure::Usage(format!("genus {g} < 3")));
    }
    Ok(match f {
        Some(s) => HypCurve::new(g, parse_poly(s)?)?,
        None => HypCurve::random(g, &mut seed::rng(global.seed, &[g as u64]))?,
    })
}

#[allow(clippy::too_many_arguments)]
fn betti(
    global: &Global,
    model: Model,
    g: Option<usize>,
    f: Option<&str>,
    n: Option<usize>,
    qmax: usize,
    pmax: usize,
    format: Format,
    out: &Option<PathBuf>,
) -> CmdResult {
    if qmax < 2 {
        return Err(Failure::Usage("qmax must be at least 2".into()));
    }
    let start = Instant::now();
    let levels = if pmax == 0 { qmax } else { qmax + 1 };
    let (ring, mut rep): (GradedRingData, Report) = match model {
        Model::Hyperelliptic => {
            let g = g.ok_or_else(|| Failure::Usage("--g is required for the hyperelliptic model".into()))?;
            let curve = curve_for(global, g, f)?;
            let ring = canonical_ring(&curve, levels)?;
            (ring, Report::new("betti").param("model", "hyperelliptic").param("g", g).param("f", curve.f_string()))
        }
        Model::Veronese => {
            let n = n.ok_or_else(|| Failure::Usage("--n is required for the veronese model".into()))?;
            (GradedRingData::veronese(n, levels)?, Report::new("betti").param("model", "veronese").param("n", n))
        }
    };
    rep = rep.param("qmax", qmax).param("pmax", pmax);
    let table = betti_table(&ring, pmax, qmax)?;
    let verdict = np_verdict(&table)?;
    let defect = check_d_squared(&ring)?;
    rep.check(defect.is_none(), || json!({ "d_squared_nonzero_at": defect }));
    rep.check(ring.commutativity_defect().is_none(), || json!({ "noncommuting": ring.commutativity_defect() }));
    for q in 0..=qmax {
        for p in 0..=pmax {
            rep.set_dim(&format!("K_{p}_{q}"), table.get(p, q));
        }
    }
    rep.params.insert("np_verdict".into(), json!(verdict.to_string()));
    if global.timing {
        rep.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    let text = match format {
        Format::Csv => format!("{}{verdict}\n", table.to_csv()),
        Format::Json => format!("{}\n", rep.to_json_line()),
    };
    match out {
        Some(path) => {
            fs::write(path, &text)?;
            emit(std::slice::from_ref(&rep))?;
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(rep.passed())
}

#[allow(clippy::too_many_arguments)]
fn pencil(
    global: &Global,
    g: usize,
    m: usize,
    s0: Option<&str>,
    s1: Option<&str>,
    t: Option<&str>,
    f: Option<&str>,
) -> CmdResult {
    let start = Instant::now();
    let curve = curve_for(global, g, f)?;
    let drawn = if s0.is_some() && s1.is_some() && t.is_some() {
        None
    } else {
        Some(PencilDatum::random(g, m, &mut seed::rng(global.seed, &[g as u64, m as u64]))?)
    };
    let pick = |given: Option<&str>, fallback: fn(&PencilDatum) -> &Poly| -> Result<Poly, Failure> {
        match given {
            Some(s) => parse_poly(s),
            None => Ok(fallback(drawn.as_ref().expect("drawn when a polynomial is missing")).clone()),
        }
    };
    let pd = PencilDatum::new(g, m, pick(s0, |p| &p.s0)?, pick(s1, |p| &p.s1)?, pick(t, |p| &p.t)?)?;
    let mut rep = pencil_check(&curve, &pd)?.param("seed", global.seed);
    if global.timing {
        rep.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    emit(std::slice::from_ref(&rep))?;
    Ok(rep.passed())
}

fn prcheck(gmin: usize, gmax: usize, format: Format) -> CmdResult {
    if gmin < 3 || gmin > gmax {
        return Err(Failure::Usage(format!("need 3 <= gmin <= gmax, got {gmin}..{gmax}")));
    }
    let pairs: Vec<(usize, usize)> = (gmin..=gmax).flat_map(|g| (0..=(g - 1) / 2).map(move |r| (g, r))).collect();
    match format {
        Format::Csv => {
            let rows = pairs.par_iter().map(|&(g, r)| pr_row(g, r)).collect::<syzygy_core::Result<Vec<_>>>()?;
            let mut s = String::from("g,r,wedge_dim,bundle_dim,cokernel,verdict\n");
            for row in &rows {
                let verdict = if row.surjective { "surjective" } else { "not-surjective" };
                s.push_str(&format!(
                    "{},{},{},{},{},{verdict}\n",
                    row.g, row.r, row.wedge_dim, row.bundle_dim, row.cokernel
                ));
            }
            io::stdout().write_all(s.as_bytes())?;
            Ok(rows.iter().all(|r| r.image_dim == r.wedge_dim))
        }
        Format::Json => {
            let reps = pairs.par_iter().map(|&(g, r)| pr_report(g, r)).collect::<syzygy_core::Result<Vec<_>>>()?;
            emit(&reps)?;
            Ok(reps.iter().all(Report::passed))
        }
    }
}

fn petri(g: usize, r: usize, which: Which, dump: &Option<PathBuf>) -> CmdResult {
    let p = ModelParams::new(g, r)?;
    let m = match which {
        Which::P => hypmodel::p_map(&p).matrix,
        Which::Q => hypmodel::q_map(&p)?.matrix,
    };
    let text = m.to_dump();
    match dump {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(true)
}

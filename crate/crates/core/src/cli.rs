//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 inconclusive search
//! (node budget exhausted), 4 internal invariant violation.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::entcore::lstar;
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::mme::{
    construct, max_mme_rank, validate_example_set, MmeState, SearchMode, SearchOptions,
    SearchStatus, DEFAULT_BUDGET,
};
use crate::modes::ModeStructure;
use crate::tables::{table_reports, Table, TableRow};
use crate::tgx::{enumerate_me_tuples, LocalUnitarySet, MeTgxTuple};
use crate::verify::{
    comparison_spectral, grid_surface, min_avg_ent, min_avg_ent_with, sweep, Family, SpectralData,
    Strategy,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

const DEFAULT_SEED: u64 = 1;

const CSV_HELP: &str = "\
CSV schemas (--format csv):
  lstar               L,mean,is_min
  tuples              index,levels            (levels space-separated)
  rank, tables        n,dims,minLstar,r_tilde,R_MME,exhaustive,status
  construct           row,col,re,im           (nonzero density entries, 1-based)
  verify (grid)       theta,chi,avg_ent       (one row per grid point)
  verify (random)     D,index,avg_ent         (one row per sample)
  sweep               family,lambda1,upsilon_min
  validate-examples   dims,tuple,me,set_compatible,pairwise_compatible";

#[derive(Parser, Debug)]
#[command(
    name = "mme",
    version,
    about = "Maximal ranks, construction and certification of mixed maximally entangled states",
    after_help = CSV_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    Exhaustive,
    Greedy,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Grid,
    Random,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Tuple size to search (must be in L*; default min L*).
    #[arg(long = "L")]
    pub levels: Option<usize>,
    /// Search every L in L* and report the largest rank.
    #[arg(long)]
    pub all_lstar: bool,
    #[arg(long, value_enum, default_value_t = SearchKind::Exhaustive)]
    pub search: SearchKind,
    /// Greedy restarts.
    #[arg(long, default_value_t = 256)]
    pub restarts: usize,
    /// Node budget of the exhaustive search (0 = unlimited).
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget_nodes: u64,
}

impl SearchArgs {
    fn options(&self, seed: u64) -> SearchOptions {
        SearchOptions {
            mode: match self.search {
                SearchKind::Exhaustive => SearchMode::Exhaustive,
                SearchKind::Greedy => SearchMode::Greedy {
                    restarts: self.restarts,
                    seed,
                },
            },
            budget_nodes: (self.budget_nodes > 0).then_some(self.budget_nodes),
            levels: self.levels,
            all_lstar: self.all_lstar,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SamplingArgs {
    /// grid (rank 2 only) or random Haar unitaries. Default: grid for rank 2.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Grid resolution THETA,CHI.
    #[arg(long, default_value = "20,20")]
    pub grid: String,
    /// Random samples per decomposition size D.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Smallest D (default: rank).
    #[arg(long = "Dmin")]
    pub d_min: Option<usize>,
    /// Largest D (default: rank squared).
    #[arg(long = "Dmax")]
    pub d_max: Option<usize>,
}

impl SamplingArgs {
    fn grid_points(&self) -> Result<(usize, usize)> {
        let parts: Vec<&str> = self.grid.split(',').map(str::trim).collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::InvalidInput(format!("bad grid size {:?}", self.grid)))
        };
        match parts.as_slice() {
            [t, c] => Ok((parse(t)?, parse(c)?)),
            [t] => {
                let t = parse(t)?;
                Ok((t, t))
            }
            _ => Err(Error::InvalidInput(format!(
                "bad grid size {:?}",
                self.grid
            ))),
        }
    }

    fn strategy(&self, rank: usize, seed: u64) -> Result<Strategy> {
        let kind = self.strategy.unwrap_or(if rank == 2 {
            StrategyArg::Grid
        } else {
            StrategyArg::Random
        });
        Ok(match kind {
            StrategyArg::Grid => {
                let (theta_points, chi_points) = self.grid_points()?;
                Strategy::Grid {
                    theta_points,
                    chi_points,
                }
            }
            StrategyArg::Random => Strategy::Random {
                samples: self.samples,
                d_min: self.d_min.unwrap_or(rank),
                d_max: self.d_max.unwrap_or(rank * rank),
                seed,
            },
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal levels counts L* and the floor M*.
    Lstar { dims: String },
    /// All ME TGX tuples of one size.
    Tuples {
        dims: String,
        /// Tuple size (default min L*).
        #[arg(long = "L")]
        levels: Option<usize>,
    },
    /// Maximal MME rank with a witness set.
    Rank {
        dims: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build an MME state from compatible tuples.
    Construct {
        dims: String,
        /// Eigenstate tuples, e.g. "{1,16},{4,13}".
        #[arg(long)]
        tuples: String,
        /// Eigenvalues, e.g. "0.7,0.3".
        #[arg(long)]
        spectrum: String,
        /// Dress the eigenstates with Haar local unitaries from this seed.
        #[arg(long)]
        lu_seed: Option<u64>,
    },
    /// Minimum average ent over sampled decompositions.
    Verify {
        /// System of inline tuples.
        dims: Option<String>,
        /// State file written by `construct`, or a bare density-matrix JSON.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        tuples: Option<String>,
        #[arg(long)]
        spectrum: Option<String>,
        /// A 2x2x2x2 comparison family instead: mme, e_spacewise, e_selfspace, separable.
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Reproduce a rank table: 1, 3 or 5.
    Tables {
        which: u32,
        /// Largest total dimension n (tables 1, 3) or qubit count N (table 5).
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Grid-minimized average ent of the 2x2x2x2 comparison families versus lambda1.
    Sweep {
        /// mme, e_spacewise, e_selfspace, separable or all.
        #[arg(long, default_value = "all")]
        family: String,
        #[arg(long, default_value_t = 500)]
        points: usize,
        #[arg(long, default_value = "20,20")]
        grid: String,
    },
    /// Check example tuple sets: ME per tuple, compatibility per set and pair.
    ValidateExamples {
        dims: Option<String>,
        #[arg(long)]
        tuples: Option<String>,
        /// JSON file: [{"dims": "2x4", "tuples": [[1,8],[2,7]]}, ...].
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

/// Parses `{1,16},{4,13}`, `1,16;4,13` or `[[1,16],[4,13]]`.
pub fn parse_tuples(text: &str) -> Result<Vec<Vec<usize>>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("cannot parse tuples {text:?}"));
    if compact.starts_with('[') {
        return serde_json::from_str(&compact).map_err(|_| bad());
    }
    let groups: Vec<&str> = if compact.contains(';') {
        compact.split(';').collect()
    } else {
        compact
            .trim_start_matches('{')
            .trim_end_matches('}')
            .split("},{")
            .collect()
    };
    groups
        .iter()
        .map(|g| {
            g.trim_matches(|c| c == '{' || c == '}')
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<usize>>>()
        })
        .collect()
}

pub fn parse_spectrum(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("cannot parse spectrum {text:?}")))
        })
        .collect()
}

fn parse_dims(text: &str) -> Result<ModeStructure> {
    text.parse()
}

/// What `construct` writes and `verify --state` reads.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateDocument {
    pub structure: ModeStructure,
    pub tuples: Vec<Vec<usize>>,
    pub spectrum: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lu_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub density: DensityMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub rank: usize,
    pub trivial: bool,
    pub tuples_me: bool,
    pub compatible: bool,
    /// Largest gap between the requested spectrum and the matrix eigenvalues.
    pub spectrum_error: f64,
    pub trace: f64,
}

fn certificate(state: &MmeState, rho: &DensityMatrix) -> Certificate {
    let eig = rho.eigh();
    let mut wanted = state.spectrum().to_vec();
    wanted.sort_by(|a, b| b.total_cmp(a));
    let spectrum_error = wanted
        .iter()
        .chain(std::iter::repeat(&0.0))
        .zip(&eig.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Certificate {
        rank: state.rank(),
        trivial: state.is_trivial(),
        tuples_me: true,
        compatible: true,
        spectrum_error,
        trace: rho.trace().re,
    }
}

fn certified(s: &ModeStructure, sets: &[Vec<usize>]) -> Result<Vec<MeTgxTuple>> {
    sets.iter().map(|l| MeTgxTuple::certify(s, l)).collect()
}

fn state_from_parts(
    s: &ModeStructure,
    sets: &[Vec<usize>],
    spectrum: Vec<f64>,
    lu_seed: Option<u64>,
) -> Result<(MmeState, DensityMatrix)> {
    let lu = lu_seed.map(|seed| LocalUnitarySet::haar(s, seed));
    construct(s, certified(s, sets)?, spectrum, lu)
}

/// Rendered command output plus the exit code it implies.
struct Output {
    text: String,
    code: i32,
    /// Already handled `--out`; `text` goes to stdout.
    stdout: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            code: EXIT_OK,
            stdout: false,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Internal(format!("json encoding: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| Error::Internal(format!("csv encoding: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv encoding: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(format!("csv encoding: {e}")))
}

fn status_code(statuses: impl IntoIterator<Item = SearchStatus>) -> i32 {
    if statuses
        .into_iter()
        .any(|s| s == SearchStatus::Inconclusive)
    {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

#[derive(Serialize)]
struct LstarCsv {
    #[serde(rename = "L")]
    levels: usize,
    mean: f64,
    is_min: bool,
}

#[derive(Serialize)]
struct TupleCsv {
    index: usize,
    levels: String,
}

#[derive(Serialize)]
struct EntryCsv {
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct SampleCsv {
    #[serde(rename = "D")]
    d: usize,
    index: usize,
    avg_ent: f64,
}

#[derive(Serialize)]
struct ValidateCsv {
    dims: String,
    tuple: String,
    me: bool,
    set_compatible: bool,
    pairwise_compatible: bool,
}

#[derive(Deserialize)]
struct ExampleEntry {
    dims: String,
    tuples: Vec<Vec<usize>>,
}

fn join_levels(levels: &[usize]) -> String {
    levels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn spectral_for_verify(
    dims: Option<&str>,
    state: Option<&PathBuf>,
    tuples: Option<&str>,
    spectrum: Option<&str>,
    family: Option<&str>,
) -> Result<SpectralData> {
    if let Some(family) = family {
        let f: Family = family.parse()?;
        let sp = parse_spectrum(spectrum.unwrap_or("0.7,0.3"))?;
        let [a, b] = sp[..] else {
            return Err(Error::InvalidInput("families are rank 2".into()));
        };
        return comparison_spectral(f, [a, b]);
    }
    if let Some(path) = state {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        if let Ok(doc) = serde_json::from_str::<StateDocument>(&text) {
            let (state, _) =
                state_from_parts(&doc.structure, &doc.tuples, doc.spectrum, doc.lu_seed)?;
            return Ok(SpectralData::from_mme(&state));
        }
        let rho: DensityMatrix = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        return SpectralData::from_density(&rho);
    }
    match (dims, tuples, spectrum) {
        (Some(d), Some(t), Some(sp)) => {
            let s = parse_dims(d)?;
            let (state, _) = state_from_parts(&s, &parse_tuples(t)?, parse_spectrum(sp)?, None)?;
            Ok(SpectralData::from_mme(&state))
        }
        _ => Err(Error::InvalidInput(
            "verify needs --family, --state, or DIMS with --tuples and --spectrum".into(),
        )),
    }
}

fn execute(command: &Command, g: &GlobalArgs) -> Result<Output> {
    let csv = g.format == Format::Csv;
    match command {
        Command::Lstar { dims } => {
            let set = lstar(&parse_dims(dims)?)?;
            if csv {
                let rows: Vec<LstarCsv> = set
                    .per_l_mean
                    .iter()
                    .map(|(&l, &mean)| LstarCsv {
                        levels: l,
                        mean,
                        is_min: set.contains(l),
                    })
                    .collect();
                Ok(Output::ok(to_csv(&rows)?))
            } else {
                Ok(Output::ok(to_json(&set)?))
            }
        }
        Command::Tuples { dims, levels } => {
            let s = parse_dims(dims)?;
            let size = match levels {
                Some(l) => *l,
                None => lstar(&s)?.min_value(),
            };
            let list = enumerate_me_tuples(&s, size)?;
            if list.outside_lstar {
                eprintln!("warning: L={size} is outside L* of {s}; no tuple can be ME");
            }
            if csv {
                let rows: Vec<TupleCsv> = list
                    .tuples
                    .iter()
                    .enumerate()
                    .map(|(i, t)| TupleCsv {
                        index: i + 1,
                        levels: join_levels(t.levels()),
                    })
                    .collect();
                Ok(Output::ok(to_csv(&rows)?))
            } else {
                Ok(Output::ok(to_json(&list)?))
            }
        }
        Command::Rank { dims, search } => {
            let report = max_mme_rank(&parse_dims(dims)?, &search.options(g.seed))?;
            let text = if csv {
                to_csv(&[TableRow::from(&report)])?
            } else {
                to_json(&report)?
            };
            Ok(Output {
                text,
                code: status_code([report.status]),
                stdout: false,
            })
        }
        Command::Construct {
            dims,
            tuples,
            spectrum,
            lu_seed,
        } => {
            let s = parse_dims(dims)?;
            let sets = parse_tuples(tuples)?;
            let spectrum = parse_spectrum(spectrum)?;
            let (state, rho) = state_from_parts(&s, &sets, spectrum.clone(), *lu_seed)?;
            let cert = certificate(&state, &rho);
            if csv {
                let n = rho.dim();
                let rows: Vec<EntryCsv> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| rho.matrix()[(i, j)].norm() > 0.0)
                    .map(|(i, j)| EntryCsv {
                        row: i + 1,
                        col: j + 1,
                        re: rho.matrix()[(i, j)].re,
                        im: rho.matrix()[(i, j)].im,
                    })
                    .collect();
                return Ok(Output::ok(to_csv(&rows)?));
            }
            let doc = StateDocument {
                structure: s,
                tuples: sets,
                spectrum,
                lu_seed: *lu_seed,
                certificate: Some(cert.clone()),
                density: rho,
            };
            match &g.out {
                // the matrix goes to the file, the certificate to stdout
                Some(path) => {
                    write_file(path, &to_json(&doc)?)?;
                    Ok(Output {
                        text: to_json(&cert)?,
                        code: EXIT_OK,
                        stdout: true,
                    })
                }
                None => Ok(Output::ok(to_json(&doc)?)),
            }
        }
        Command::Verify {
            dims,
            state,
            tuples,
            spectrum,
            family,
            sampling,
        } => {
            let data = spectral_for_verify(
                dims.as_deref(),
                state.as_ref(),
                tuples.as_deref(),
                spectrum.as_deref(),
                family.as_deref(),
            )?;
            let strategy = sampling.strategy(data.rank(), g.seed)?;
            if data.degenerate_basis {
                eprintln!(
                    "warning: degenerate spectral basis; the certificate applies to the chosen basis"
                );
            }
            if !csv {
                return Ok(Output::ok(to_json(&min_avg_ent(&data, strategy)?)?));
            }
            let text = match strategy {
                Strategy::Grid {
                    theta_points,
                    chi_points,
                } => to_csv(&grid_surface(&data, theta_points, chi_points)?)?,
                Strategy::Random { samples, d_min, .. } => {
                    let est = min_avg_ent_with(&data, strategy, true)?;
                    let rows: Vec<SampleCsv> = est
                        .averages
                        .unwrap_or_default()
                        .into_iter()
                        .enumerate()
                        .map(|(i, avg_ent)| SampleCsv {
                            d: d_min + i / samples,
                            index: i % samples,
                            avg_ent,
                        })
                        .collect();
                    to_csv(&rows)?
                }
            };
            Ok(Output::ok(text))
        }
        Command::Tables {
            which,
            max_n,
            search,
        } => {
            let table = Table::from_number(*which)?;
            let max = max_n.unwrap_or(table.default_max());
            let reports = table_reports(table, max, &search.options(g.seed))?;
            let code = status_code(reports.iter().map(|r| r.status));
            let text = if csv {
                let rows: Vec<TableRow> = reports.iter().map(TableRow::from).collect();
                to_csv(&rows)?
            } else {
                to_json(&reports)?
            };
            Ok(Output {
                text,
                code,
                stdout: false,
            })
        }
        Command::Sweep {
            family,
            points,
            grid,
        } => {
            let families: Vec<Family> = if family == "all" {
                Family::ALL.to_vec()
            } else {
                vec![family.parse()?]
            };
            let sampling = SamplingArgs {
                strategy: None,
                grid: grid.clone(),
                samples: 0,
                d_min: None,
                d_max: None,
            };
            let (t, c) = sampling.grid_points()?;
            let mut rows = Vec::new();
            for f in families {
                rows.extend(sweep(f, *points, t, c)?);
            }
            Ok(Output::ok(if csv {
                to_csv(&rows)?
            } else {
                to_json(&rows)?
            }))
        }
        Command::ValidateExamples { dims, tuples, file } => {
            let entries: Vec<ExampleEntry> = match (file, dims, tuples) {
                (Some(path), _, _) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                    serde_json::from_str(&text)
                        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?
                }
                (None, Some(d), Some(t)) => vec![ExampleEntry {
                    dims: d.clone(),
                    tuples: parse_tuples(t)?,
                }],
                _ => {
                    return Err(Error::InvalidInput(
                        "validate-examples needs --file or DIMS with --tuples".into(),
                    ))
                }
            };
            let reports = entries
                .iter()
                .map(|e| Ok(validate_example_set(&parse_dims(&e.dims)?, &e.tuples)))
                .collect::<Result<Vec<_>>>()?;
            if csv {
                let rows: Vec<ValidateCsv> = reports
                    .iter()
                    .flat_map(|r| {
                        r.tuples.iter().map(move |t| ValidateCsv {
                            dims: r.structure.to_string(),
                            tuple: join_levels(&t.levels),
                            me: t.me,
                            set_compatible: r.set_compatible,
                            pairwise_compatible: r.pairwise_compatible,
                        })
                    })
                    .collect();
                Ok(Output::ok(to_csv(&rows)?))
            } else {
                Ok(Output::ok(to_json(&reports)?))
            }
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let go = || match execute(&cli.command, &cli.global) {
        Ok(out) => {
            let written = match &cli.global.out {
                Some(path) if !out.stdout => write_file(path, &out.text).map_err(|e| e.to_string()),
                _ => io::stdout()
                    .write_all(out.text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => {
                    if out.code == EXIT_INCONCLUSIVE {
                        eprintln!("inconclusive: node budget exhausted, reporting best found");
                    }
                    out.code
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_INVALID
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    match cli.global.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(go),
            Err(e) => {
                eprintln!("error: worker pool: {e}");
                EXIT_INVALID
            }
        },
        None => go(),
    }
}

/// Parses process arguments and runs; clap errors exit with code 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = e.print();
            code
        }
    }
}

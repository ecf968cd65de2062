//! Command-line front-end. `run` never prints or exits; the binary does.
//!
//! Exit status: 0 success, 1 verified negative, 2 budget exceeded,
//! 64 usage error, 65 malformed input data.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::abelian::enumerate_abelian_groups;
use crate::decoder::{bench_decode, format_bench_csv, DecoderTable};
use crate::dpl::{
    construct_dpl4, construct_pl1, is_admissible_q, min_distance_window, minimal_admissible_q,
    LinearLeeCode,
};
use crate::error::Error;
use crate::lee::{parse_word_set, Word};
use crate::nonregular::{parse_bits, shifted_tiling_n3};
use crate::tiling::{
    search_lattice_tiling, verify_window_tiling, window_cover, SearchOptions, SearchOutcome,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub status: i32,
    pub summary: String,
    /// Canonical JSON payload, when the command has one.
    pub payload: Option<String>,
}

impl CommandResult {
    fn new(status: i32, summary: impl Into<String>, payload: Option<serde_json::Value>) -> Self {
        CommandResult {
            status,
            summary: summary.into(),
            payload: payload.map(|v| v.to_string()),
        }
    }

    fn failure(status: i32, msg: impl Into<String>) -> Self {
        CommandResult::new(status, msg, None)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "dpl",
    version,
    about = "Diameter-perfect Lee codes from lattice tilings"
)]
struct Cli {
    /// Print the structured payload instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Linear DPL(n, 4, q) code from the block construction.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perfect 1-error-correcting code over Z_{2n+1}.
    Pl1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether a linear DPL(n, 4, q) code exists.
    Admissible {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
    /// Exhaustive search for a lattice tiling by a finite set.
    Search {
        #[arg(long)]
        anticode: PathBuf,
        /// Node budget per candidate group; accepts forms like 1e6.
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
    },
    /// Abelian groups of the given order.
    Groups {
        #[arg(long)]
        order: u64,
    },
    /// Check the tiling and minimum distance of a code on a window.
    Verify {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        window: u64,
    },
    /// Decode a received word.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Shifted double-cross tiling of a window of R^3.
    Nonregular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bits: String,
        #[arg(long)]
        window: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cover a window with the code's tiles and report gaps and overlaps.
    Tile {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        window: u64,
    },
    /// Mean decode time per length, as CSV.
    BenchDecode {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
    },
}

fn parse_budget(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => {
            Ok(v as u64)
        }
        _ => Err(format!("{s:?} is not a non-negative integer")),
    }
}

fn status_of(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Dimension { .. } | Error::InvalidElement(_) => EXIT_DATA,
        Error::Domain(_) | Error::Window(_) | Error::Periodicity { .. } => EXIT_USAGE,
        _ => EXIT_NEGATIVE,
    }
}

type Outcome = std::result::Result<CommandResult, CommandResult>;

fn lib<T>(r: crate::Result<T>) -> std::result::Result<T, CommandResult> {
    r.map_err(|e| CommandResult::failure(status_of(&e), e.to_string()))
}

fn read(path: &Path) -> std::result::Result<String, CommandResult> {
    fs::read_to_string(path)
        .map_err(|e| CommandResult::failure(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), CommandResult> {
    fs::write(path, text)
        .map_err(|e| CommandResult::failure(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> std::result::Result<LinearLeeCode, CommandResult> {
    // a descriptor that fails validation is malformed input, not a verdict
    LinearLeeCode::from_json(&read(path)?)
        .map_err(|e| CommandResult::failure(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn words_json(words: &[Word]) -> serde_json::Value {
    json!(words.iter().map(|w| w.to_vec()).collect::<Vec<_>>())
}

/// Parses `argv` (without the program name) and executes the command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("dpl")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let status = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return CommandResult::failure(status, e.to_string().trim_end());
        }
    };
    match dispatch(cli.command) {
        Ok(r) | Err(r) => r,
    }
}

/// Whether the binary should print the payload rather than the summary.
pub fn wants_json<I, T>(argv: I) -> bool
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    argv.into_iter().any(|a| a.into() == "--json")
}

fn emit_code(code: &LinearLeeCode, out: Option<&Path>) -> Outcome {
    let json = code.to_json();
    if let Some(path) = out {
        write(path, &json)?;
    }
    let d = code.descriptor();
    let summary = format!(
        "n={} d={} period={} group={:?} images={}",
        code.n(),
        code.distance(),
        code.period(),
        d.group,
        d.images
            .iter()
            .map(|g| format!(
                "({})",
                g.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            ))
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(CommandResult {
        status: EXIT_OK,
        summary,
        payload: Some(json),
    })
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Construct { n, q, out } => {
            if !is_admissible_q(n as u64, q) {
                return Ok(CommandResult::new(
                    EXIT_NEGATIVE,
                    format!(
                        "no linear DPL({n},4,{q}) code; smallest admissible q is {}",
                        minimal_admissible_q(n as u64)
                    ),
                    Some(json!({"n": n, "q": q, "admissible": false})),
                ));
            }
            let code = lib(construct_dpl4(n, q))?;
            emit_code(&code, out.as_deref())
        }
        Command::Pl1 { n, out } => {
            let code = lib(construct_pl1(n))?;
            emit_code(&code, out.as_deref())
        }
        Command::Admissible { n, q } => {
            if n == 0 {
                return Err(CommandResult::failure(EXIT_USAGE, "n must be positive"));
            }
            let ok = is_admissible_q(n, q);
            let min = minimal_admissible_q(n);
            let summary = if ok {
                format!("admissible: linear DPL({n},4,{q}) exists")
            } else {
                format!("inadmissible: smallest admissible q for n={n} is {min}")
            };
            Ok(CommandResult::new(
                if ok { EXIT_OK } else { EXIT_NEGATIVE },
                summary,
                Some(json!({"n": n, "q": q, "admissible": ok, "minimal_q": min})),
            ))
        }
        Command::Search { anticode, budget } => {
            let points = lib(parse_word_set(&read(&anticode)?))?;
            let mut options = SearchOptions::default();
            if let Some(b) = budget {
                options.budget = b;
            }
            let outcome = lib(search_lattice_tiling(&points, options))?;
            let cert = outcome.certificate();
            let payload = serde_json::to_value(&cert).expect("certificate serializes");
            let (status, summary) = match &outcome {
                SearchOutcome::Found { hom, offset, .. } => (
                    EXIT_OK,
                    format!(
                        "Found: group {} images {} (set translated by -({offset}))",
                        hom.group(),
                        hom.images()
                            .iter()
                            .map(|g| g.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    ),
                ),
                SearchOutcome::NotFound { .. } => (
                    EXIT_NEGATIVE,
                    format!(
                        "NotFound: {} groups, {} assignments exhausted",
                        outcome.groups_tried(),
                        outcome.assignments_tried()
                    ),
                ),
                SearchOutcome::BudgetExceeded { group, nodes, .. } => (
                    EXIT_BUDGET,
                    format!("BudgetExceeded: group {group} after {nodes} nodes"),
                ),
            };
            Ok(CommandResult::new(status, summary, Some(payload)))
        }
        Command::Groups { order } => {
            if order == 0 {
                return Err(CommandResult::failure(EXIT_USAGE, "order must be positive"));
            }
            let groups = enumerate_abelian_groups(order);
            let summary = groups
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join("\n");
            let payload = json!(groups
                .iter()
                .map(|g| g.factors().to_vec())
                .collect::<Vec<_>>());
            Ok(CommandResult::new(EXIT_OK, summary, Some(payload)))
        }
        Command::Verify { code, window } => {
            let code = load_code(&code)?;
            let tile = lib(code.anticode().points())?;
            let tiling = lib(verify_window_tiling(code.hom(), &tile, window))?;
            let dist = lib(min_distance_window(&code, window))?;
            let ok = tiling && dist == code.distance();
            let summary = format!(
                "{}: tiling on [-{window},{window}]^{} {}, minimum distance {dist} (expected {})",
                if ok { "verified" } else { "FAILED" },
                code.n(),
                if tiling { "exact" } else { "not exact" },
                code.distance()
            );
            Ok(CommandResult::new(
                if ok { EXIT_OK } else { EXIT_NEGATIVE },
                summary,
                Some(json!({
                    "R": window,
                    "tiling": tiling,
                    "min_distance": dist,
                    "expected": code.distance(),
                })),
            ))
        }
        Command::Decode {
            code,
            word,
            modulus,
        } => {
            let code = load_code(&code)?;
            let a: Word = lib(word.parse())?;
            let table = lib(DecoderTable::build(&code))?;
            let (codeword, tile) = match modulus {
                Some(q) => (lib(table.decode_modular(&a, q))?, None),
                None => {
                    let d = lib(table.decode(&a))?;
                    (d.codeword, Some(d.tile_vector))
                }
            };
            let mut payload = json!({"codeword": codeword.to_vec()});
            if let Some(l) = tile {
                payload["tile_vector"] = json!(l.to_vec());
            }
            Ok(CommandResult::new(
                EXIT_OK,
                codeword.to_string(),
                Some(payload),
            ))
        }
        Command::Nonregular {
            n,
            bits,
            window,
            out,
        } => {
            if n != 3 {
                return Err(CommandResult::failure(
                    EXIT_USAGE,
                    "shifted tilings are only available for n = 3",
                ));
            }
            let bits = lib(parse_bits(&bits))?;
            let t = lib(shifted_tiling_n3(&bits, window))?;
            let cover = t.cover();
            let json = t.to_json();
            if let Some(path) = out {
                write(&path, &json)?;
            }
            let exact = cover.is_exact();
            let summary = format!(
                "{} tiles, cover of [-{window},{window}]^3 {}",
                t.centers.len(),
                if exact {
                    "exact".to_string()
                } else {
                    format!(
                        "has {} gaps, {} overlaps",
                        cover.gaps.len(),
                        cover.overlaps.len()
                    )
                }
            );
            Ok(CommandResult {
                status: if exact { EXIT_OK } else { EXIT_NEGATIVE },
                summary,
                payload: Some(json),
            })
        }
        Command::Tile { code, window } => {
            let code = load_code(&code)?;
            let tile = lib(code.anticode().points())?;
            let cover = lib(window_cover(code.hom(), &tile, window))?;
            let exact = cover.is_exact();
            let summary = format!(
                "{} translates over {} points: {} gaps, {} overlaps",
                cover.translates,
                cover.points,
                cover.gaps.len(),
                cover.overlaps.len()
            );
            Ok(CommandResult::new(
                if exact { EXIT_OK } else { EXIT_NEGATIVE },
                summary,
                Some(json!({
                    "R": window,
                    "exact": exact,
                    "translates": cover.translates,
                    "gaps": words_json(&cover.gaps),
                    "overlaps": words_json(&cover.overlaps),
                })),
            ))
        }
        Command::BenchDecode { n_list, reps } => {
            let rows = lib(bench_decode(&n_list, reps, 0))?;
            let payload = json!(rows
                .iter()
                .map(|r| json!({"n": r.n, "mean_ns": r.mean_ns}))
                .collect::<Vec<_>>());
            Ok(CommandResult::new(
                EXIT_OK,
                format_bench_csv(&rows).trim_end(),
                Some(payload),
            ))
        }
    }
}

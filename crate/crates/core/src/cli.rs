//! Command-line front end.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::arboreal::arboreal_matches_pairing;
use crate::error::{Error, Result};
use crate::excision::{canonical_form, find_excised_triangle, CanonicalForm, ExcisionHistory};
use crate::flats::ChainOfFlats;
use crate::galaxy::{build_galaxy, check_subadditivity, pairing_table, PairingTable};
use crate::intersect::{realization_number_with, stable_pairing_with, PairingConfig};
use crate::labels::LabelSet;
use crate::multigraph::{from_henneberg_sequence, laman_db, HennebergSequence, SimpleGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "tropgal", version, about = "Tropical galaxies of Laman graphs")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1 << 16, value_parser = clap::value_parser!(i64).range(1..))]
    pub shift_bound: i64,
    #[arg(long, global = true, default_value_t = 32)]
    pub max_retries: u32,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Do not read or write the table cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laman graph utilities.
    Laman {
        #[command(subcommand)]
        command: LamanCommand,
    },
    /// Excise multiedges in order, e.g. `excise g.json 1 2,3`.
    Excise { graph: String, multiedges: Vec<String> },
    /// Galaxy of all iterated excisions, as DOT or JSON.
    Galaxy { graph: String },
    /// Galactic pairing of two excision histories given as JSON label lists.
    Pairing {
        graph: String,
        history_a: String,
        history_b: String,
    },
    /// Realization number.
    C2 { graph: String },
    /// Arboreal test of two maximal chains given as JSON lists of flats.
    Arboreal {
        graph: String,
        chain_a: String,
        chain_b: String,
    },
    /// Pairing table of a base node against the whole galaxy, as CSV.
    Table {
        graph: String,
        /// Excision history of the base node; the root by default.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        no_shortcuts: bool,
    },
    /// Subadditivity report for a base and target history.
    Subadditivity {
        graph: String,
        base: String,
        target: String,
        distance: usize,
    },
    /// Shortest excision history reaching an excised triangle.
    Triangle { graph: String },
}

#[derive(Debug, Subcommand)]
pub enum LamanCommand {
    /// Print whether a graph is Laman.
    Check { graph: String },
    /// Bundled database graph `I` on `N` vertices.
    Db { n: usize, index: usize },
    /// Build a graph from a Henneberg sequence file.
    Build { sequence: String },
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub pairing: PairingConfig,
    pub depth: Option<usize>,
    pub cache: bool,
    pub format: Option<Format>,
}

impl From<&Cli> for RunConfig {
    fn from(c: &Cli) -> Self {
        RunConfig {
            pairing: PairingConfig {
                seed: c.seed,
                shift_bound: c.shift_bound,
                max_retries: c.max_retries,
            },
            depth: c.depth,
            cache: !c.no_cache,
            format: c.format,
        }
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    code: &'a str,
    message: String,
}

fn read_input(src: &str) -> Result<String> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(src)?)
    }
}

fn read_graph(src: &str) -> Result<SimpleGraph> {
    Ok(serde_json::from_str(&read_input(src)?)?)
}

fn parse_labels(s: &str) -> Result<LabelSet> {
    let s = s.trim();
    let labels: Vec<usize> = if s.starts_with('[') {
        serde_json::from_str(s)?
    } else {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
            .collect::<Result<_>>()?
    };
    LabelSet::try_from_labels(labels)
}

fn parse_sets(s: &str) -> Result<Vec<LabelSet>> {
    let v: Vec<Vec<usize>> = serde_json::from_str(s)?;
    v.into_iter().map(LabelSet::try_from_labels).collect()
}

fn history(g: &SimpleGraph, s: &str) -> Result<ExcisionHistory> {
    ExcisionHistory::apply(&g.to_multigraph(), &parse_sets(s)?)
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string(v)? + "\n")
}

fn cache_path(input: &str, g: &SimpleGraph, base: &CanonicalForm, shortcuts: bool, cfg: &RunConfig) -> Option<PathBuf> {
    if input == "-" || !cfg.cache {
        return None;
    }
    let mut h = Sha256::new();
    h.update(serde_json::to_string(g).ok()?.as_bytes());
    h.update(base.to_string().as_bytes());
    h.update(format!(
        "{}:{}:{}:{shortcuts}:{:?}",
        cfg.pairing.seed, cfg.pairing.shift_bound, cfg.pairing.max_retries, cfg.depth
    ));
    let tag: String = h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect();
    let p = Path::new(input);
    let name = format!("{}.{tag}.table.csv", p.file_name()?.to_string_lossy());
    Some(p.with_file_name(name))
}

/// Runs one command and returns what it prints on standard output.
pub fn execute(cli: &Cli) -> Result<String> {
    let cfg = RunConfig::from(cli);
    match &cli.command {
        Command::Laman { command } => match command {
            LamanCommand::Check { graph } => {
                // not-Laman inputs are still valid graphs
                let g = read_graph(graph)?;
                Ok(format!("{}\n", g.is_laman()))
            }
            LamanCommand::Db { n, index } => json(&laman_db(*n, *index)?),
            LamanCommand::Build { sequence } => {
                let seq: HennebergSequence = read_input(sequence)?.trim().parse()?;
                json(&from_henneberg_sequence(&seq)?)
            }
        },
        Command::Excise { graph, multiedges } => {
            let g = read_graph(graph)?;
            let labels = multiedges.iter().map(|s| parse_labels(s)).collect::<Result<Vec<_>>>()?;
            let h = ExcisionHistory::apply(&g.to_multigraph(), &labels)?;
            json(h.result())
        }
        Command::Galaxy { graph } => {
            let gal = build_galaxy(&read_graph(graph)?, cfg.depth)?;
            match cfg.format.unwrap_or(Format::Dot) {
                Format::Dot => Ok(gal.to_dot()),
                Format::Json => json(&gal),
                Format::Csv => Err(Error::Precondition("galaxy output is dot or json".into())),
            }
        }
        Command::Pairing {
            graph,
            history_a,
            history_b,
        } => {
            let g = read_graph(graph)?;
            let (a, b) = (history(&g, history_a)?, history(&g, history_b)?);
            json(&stable_pairing_with(a.result(), b.result(), &cfg.pairing)?)
        }
        Command::C2 { graph } => {
            let (c2, p) = realization_number_with(&read_graph(graph)?, &cfg.pairing)?;
            json(&serde_json::json!({ "c2": c2, "pairing": p.value }))
        }
        Command::Arboreal {
            graph,
            chain_a,
            chain_b,
        } => {
            let g = read_graph(graph)?;
            let mg = g.to_multigraph();
            let a = ChainOfFlats::from_flats(&mg, &parse_sets(chain_a)?)?;
            let b = ChainOfFlats::from_flats(&mg, &parse_sets(chain_b)?)?;
            json(&arboreal_matches_pairing(&g, &a, &b, cfg.pairing.seed)?)
        }
        Command::Table {
            graph,
            base,
            no_shortcuts,
        } => {
            let g = read_graph(graph)?;
            let gal = build_galaxy(&g, cfg.depth)?;
            let key = match base {
                Some(b) => canonical_form(history(&g, b)?.result()),
                None => gal.root_key().clone(),
            };
            gal.id(&key)?;
            let path = cache_path(graph, &g, &key, !no_shortcuts, &cfg);
            if let Some(p) = path.as_ref().filter(|p| p.exists()) {
                if let Ok(t) = PairingTable::from_csv(key.clone(), &std::fs::read_to_string(p)?) {
                    return Ok(t.to_csv());
                }
            }
            let t = pairing_table(&gal, &key, !no_shortcuts, &cfg.pairing)?;
            let csv = t.to_csv();
            if let Some(p) = path {
                // a read-only directory only costs the cache
                let _ = std::fs::write(p, &csv);
            }
            Ok(csv)
        }
        Command::Subadditivity {
            graph,
            base,
            target,
            distance,
        } => {
            let g = read_graph(graph)?;
            let (b, t) = (history(&g, base)?, history(&g, target)?);
            let depth = cfg.depth.or(Some(t.len() + distance));
            let gal = build_galaxy(&g, depth)?;
            json(&check_subadditivity(
                &gal,
                &canonical_form(b.result()),
                &canonical_form(t.result()),
                *distance,
                &cfg.pairing,
            )?)
        }
        Command::Triangle { graph } => json(&find_excised_triangle(&read_graph(graph)?)?),
    }
}

/// Parses arguments, runs, and reports errors as JSON; returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let body = ErrorJson {
                code: "usage",
                message: e.to_string().trim().to_string(),
            };
            let _ = writeln!(err, "{}", serde_json::to_string(&body).unwrap_or_default());
            return 1;
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global();
    }
    match execute(&cli) {
        Ok(s) => {
            let _ = out.write_all(s.as_bytes());
            0
        }
        Err(e) => {
            let body = ErrorJson {
                code: e.code(),
                message: e.to_string(),
            };
            let _ = writeln!(err, "{}", serde_json::to_string(&body).unwrap_or_default());
            1
        }
    }
}

//! Command-line front end. [`run`] returns the text for standard output; `main` maps errors to
//! exit codes (2 invalid input, 3 cap exceeded, 4 internal inconsistency).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::cayley::{self, CayleyError, HammingHeader};
use crate::classify::{self, CensusJson, ClassifyError, SearchConfig};
use crate::ffield::{format_poly, Field, FieldError};
use crate::hamming::HammingError;
use crate::nt;
use crate::omap::{MapError, MapType, OrientedMap};
use crate::permgroup::{PermError, DEFAULT_GROUP_CAP};

pub const CAP_ENV: &str = "HAMMAPS_CAP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("H({d},{q}) is in the slow tier (automorphism group of order {order}); pass --slow to run it")]
    Slow { d: usize, q: u64, order: u128 },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Slow { .. } => 3,
            CliError::Inconsistent(_) => 4,
            CliError::Map(MapError::OddEulerCharacteristic(_)) => 4,
            CliError::Cayley(CayleyError::NonIntegral { .. }) => 4,
            CliError::Cayley(CayleyError::TooLarge(_)) => 3,
            CliError::Cayley(CayleyError::Group(PermError::CapExceeded { .. })) => 3,
            CliError::Classify(e) => match e {
                ClassifyError::CapExceeded { .. } => 3,
                ClassifyError::Hamming(HammingError::TooManyVertices { .. }) => 3,
                ClassifyError::Hamming(HammingError::Group(PermError::CapExceeded { .. })) => 3,
                ClassifyError::Inconsistent(_) => 4,
                ClassifyError::Map(MapError::OddEulerCharacteristic(_)) => 4,
                ClassifyError::Cayley(CayleyError::TooLarge(_)) => 3,
                _ => 2,
            },
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

#[derive(Debug, Parser)]
#[command(
    name = "hammaps",
    version,
    about = "Orientably regular embeddings of Hamming graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format for reports.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the main result to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Group-size cap (overrides HAMMAPS_CAP).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Worker threads for searches.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Allow enumerations whose automorphism group exceeds 10^6 elements.
    #[arg(long, global = true)]
    pub slow: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build H(d, omega) and print its invariants.
    Construct {
        d: usize,
        q: u64,
        /// Generator of F_q^* as a polynomial in t, e.g. "t+1".
        #[arg(long)]
        omega: Option<String>,
    },
    /// Enumerate the orientably regular embeddings of H(d,q) or H(d,q)_K.
    Enumerate {
        d: usize,
        q: u64,
        /// Distance set K for the merged graph, e.g. "--merged 2" or "--merged 1,2".
        #[arg(long, value_delimiter = ',')]
        merged: Option<Vec<usize>>,
    },
    /// Decide whether two map files are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Apply Wilson's operation H_j to a map file.
    Wilson {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        j: i64,
    },
    /// Reverse the orientation of a map file.
    Mirror { file: PathBuf },
    /// Unit groups and field of definition for q.
    Galois { q: u64 },
    /// Table row of invariants for the Hamming maps of H(d,q).
    Report { d: usize, q: u64 },
}

/// Effective settings shared by all commands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportConfig {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub cap: usize,
    pub workers: Option<usize>,
    pub slow: bool,
}

impl ReportConfig {
    pub fn from_cli(cli: &Cli, env_cap: Option<&str>) -> Result<ReportConfig, CliError> {
        let cap = match (cli.cap, env_cap) {
            (Some(c), _) => c,
            (None, Some(s)) => s.trim().parse().map_err(|_| {
                CliError::Usage(format!("{CAP_ENV}={s:?} is not a positive integer"))
            })?,
            (None, None) => DEFAULT_GROUP_CAP,
        };
        if cap == 0 {
            return Err(CliError::Usage("cap must be positive".into()));
        }
        if cli.workers == Some(0) {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        Ok(ReportConfig {
            format: cli.format,
            out: cli.out.clone(),
            cap,
            workers: cli.workers,
            slow: cli.slow,
        })
    }

    fn search(&self) -> SearchConfig {
        SearchConfig {
            cap: self.cap,
            workers: self.workers,
            ..SearchConfig::default()
        }
    }
}

/// Invariants of one Hamming map, with the values the closed formulas predict.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ReportRow {
    pub d: usize,
    pub q: u64,
    pub omega: String,
    pub omega_min_poly: String,
    #[serde(rename = "type")]
    pub map_type: MapType,
    pub chi: i64,
    pub genus: u64,
    pub aut_order: usize,
    pub reflexible: bool,
    /// Number of non-isomorphic Hamming maps for this `(d,q)`.
    pub maps: usize,
    pub predicted_type: MapType,
    pub predicted_genus: u64,
}

impl ReportRow {
    const HEADER: [&'static str; 10] = [
        "d",
        "q",
        "omega",
        "min_poly",
        "type",
        "genus",
        "aut_order",
        "chi",
        "reflexible",
        "maps",
    ];

    fn cells(&self) -> [String; 10] {
        [
            self.d.to_string(),
            self.q.to_string(),
            self.omega.clone(),
            self.omega_min_poly.clone(),
            self.map_type.to_string(),
            self.genus.to_string(),
            self.aut_order.to_string(),
            self.chi.to_string(),
            self.reflexible.to_string(),
            self.maps.to_string(),
        ]
    }
}

/// Builds `H(d,ω)` (default ω when `None`) and checks it against the predicted invariants.
pub fn report_row(
    d: usize,
    q: u64,
    omega: Option<&str>,
) -> Result<(ReportRow, OrientedMap), CliError> {
    let w = cayley::resolve_omega(q, omega)?;
    let map = cayley::hamming_map(d, &w)?;
    let inv = map.invariants()?;
    let predicted_type = cayley::predicted_type(d, q)?;
    let predicted_genus = cayley::predicted_genus(d, q)?;
    if inv.map_type != predicted_type
        || inv.genus != predicted_genus
        || inv.aut_order as u64 != map.arc_count() as u64
    {
        return Err(CliError::Inconsistent(format!(
            "H({d},{w}) has type {} genus {} |Aut| {}, predicted {predicted_type} genus {predicted_genus}",
            inv.map_type, inv.genus, inv.aut_order
        )));
    }
    let maps = w.field().generator_classes().classes.len();
    let row = ReportRow {
        d,
        q,
        omega: w.to_string(),
        omega_min_poly: format_poly(&w.minimal_polynomial()),
        map_type: inv.map_type,
        chi: inv.chi,
        genus: inv.genus,
        aut_order: inv.aut_order,
        reflexible: inv.reflexible,
        maps,
        predicted_type,
        predicted_genus,
    };
    Ok((row, map))
}

fn render_rows(rows: &[ReportRow], format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json if rows.len() == 1 => to_json(&rows[0])?,
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut s = ReportRow::HEADER.join(",") + "\n";
            for r in rows {
                s += &(r
                    .cells()
                    .map(|c| {
                        if c.contains(',') {
                            format!("\"{c}\"")
                        } else {
                            c
                        }
                    })
                    .join(",")
                    + "\n");
            }
            s
        }
        Format::Md => {
            let mut s = format!(
                "| {} |\n|{}\n",
                ReportRow::HEADER.join(" | "),
                "---|".repeat(ReportRow::HEADER.len())
            );
            for r in rows {
                s += &format!("| {} |\n", r.cells().join(" | "));
            }
            s
        }
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Inconsistent(e.to_string()))
}

fn read_map(path: &Path) -> Result<OrientedMap, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(OrientedMap::from_text(&text)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Path of the JSON header written next to an exported Hamming map.
pub fn header_path(map_path: &Path) -> PathBuf {
    let mut s = map_path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn check_slow(d: usize, q: u64, cfg: &ReportConfig) -> Result<(), CliError> {
    if classify::is_slow(d, q) && !cfg.slow {
        return Err(CliError::Slow {
            d,
            q,
            order: classify::wreath_order(d, q),
        });
    }
    Ok(())
}

/// Runs one command and returns what should be printed on standard output.
pub fn run(cli: &Cli, cfg: &ReportConfig) -> Result<String, CliError> {
    let emit = |text: String| -> Result<String, CliError> {
        match &cfg.out {
            Some(p) => {
                write_file(p, &text)?;
                Ok(String::new())
            }
            None => Ok(text),
        }
    };
    match &cli.command {
        Command::Construct { d, q, omega } => {
            let (row, map) = report_row(*d, *q, omega.as_deref())?;
            if let Some(p) = &cfg.out {
                let w = cayley::resolve_omega(*q, omega.as_deref())?;
                write_file(p, &map.to_text())?;
                write_file(&header_path(p), &to_json(&HammingHeader::new(*d, &w))?)?;
            }
            render_rows(&[row], cfg.format)
        }
        Command::Enumerate { d, q, merged } => {
            check_slow(*d, *q, cfg)?;
            match merged {
                Some(k) => {
                    let v = classify::merged_existence(*d, *q, k, &cfg.search())?;
                    let mut value = serde_json::to_value(&v)
                        .map_err(|e| CliError::Inconsistent(e.to_string()))?;
                    if let Some(c) = &v.census {
                        value["census"] = serde_json::to_value(CensusJson::new(c, Some(0)))
                            .expect("serializable");
                    }
                    emit(to_json(&value)?)
                }
                None => {
                    let report = classify::classify_hamming(*d, *q, &cfg.search())?;
                    let json = to_json(&CensusJson::new(&report.census, report.expected_count))?;
                    if !report.consistent {
                        return Err(CliError::Inconsistent(format!(
                            "census of H({d},{q}) disagrees with the constructed maps or expected count\n{json}"
                        )));
                    }
                    emit(json)
                }
            }
        }
        Command::Iso { a, b } => {
            let (ma, mb) = (read_map(a)?, read_map(b)?);
            let iso = ma.is_isomorphic(&mb);
            Ok(match cfg.format {
                Format::Json => to_json(&serde_json::json!({ "isomorphic": iso }))?,
                _ => format!("{}\n", if iso { "isomorphic" } else { "not isomorphic" }),
            })
        }
        Command::Wilson { file, j } => emit(read_map(file)?.wilson(*j)?.to_text()),
        Command::Mirror { file } => emit(read_map(file)?.mirror().to_text()),
        Command::Galois { q } => {
            let g = classify::galois_structure(*q)?;
            let text = match cfg.format {
                Format::Json => to_json(&serde_json::json!({
                    "q": g.q,
                    "p": g.p,
                    "e": g.e,
                    "units": g.units,
                    "frobenius_subgroup": g.frobenius_subgroup,
                    "degree": g.degree,
                    "quotient": g.quotient_name(),
                    "rational": g.rational,
                    "field": g.description,
                }))?,
                Format::Csv => format!("q,p,e,degree,quotient,field\n{},{},{},{},{},\"{}\"\n", g.q, g.p, g.e, g.degree, g.quotient_name(), g.description),
                Format::Md => format!(
                    "| q | p | e | degree | quotient | field |\n|---|---|---|---|---|---|\n| {} | {} | {} | {} | {} | {} |\n",
                    g.q,
                    g.p,
                    g.e,
                    g.degree,
                    g.quotient_name(),
                    g.description
                ),
            };
            emit(text)
        }
        Command::Report { d, q } => {
            let (row, _) = report_row(*d, *q, None)?;
            // every Frobenius class must give the same invariants
            let field = Field::of_order(*q)?;
            for w in field.generator_classes().representatives().iter().skip(1) {
                let m = cayley::hamming_map(*d, w)?;
                let inv = m.invariants()?;
                if (inv.map_type, inv.genus, inv.aut_order)
                    != (row.map_type, row.genus, row.aut_order)
                {
                    return Err(CliError::Inconsistent(format!(
                        "H({d},{w}) differs from H({d},{})",
                        row.omega
                    )));
                }
            }
            debug_assert_eq!(
                row.maps as u64,
                nt::euler_phi(q - 1) / field.degree() as u64
            );
            emit(render_rows(&[row], cfg.format)?)
        }
    }
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let env_cap = std::env::var(CAP_ENV).ok();
    let result = ReportConfig::from_cli(&cli, env_cap.as_deref()).and_then(|cfg| run(&cli, &cfg));
    match result {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

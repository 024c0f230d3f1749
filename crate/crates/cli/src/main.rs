//! `chm6`: build, verify and classify 6x6 complex Hadamard matrices.
//!
//! Exit codes: 0 affirmative, 2 usage or input error, 3 negative result,
//! 4 counterexample, 5 internal inconsistency.

use std::io::{Read as _, Write as _};
use std::process::ExitCode;

use chm6::catalog::{self, HFamilyParams, KarlssonParams};
use chm6::equivalence::{are_equivalent, match_h_family};
use chm6::json::{matrix_from_json, MatrixDoc, ScalarDoc, WitnessDoc};
use chm6::report::{Classification, HitDetails, ReportDocument, SearchReport};
use chm6::scalar::{parse_turns, Turns};
use chm6::search::{self, Alphabet, H3Class, SearchSpace};
use chm6::substructure::{find_h2_blocks, find_h3_blocks, find_rank1_2x3, is_h2_reducible};
use chm6::{ChmError, CMatrix64, Tolerance64, UnitScalar64};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "chm6", version, about = "Construct, verify and classify 6x6 complex Hadamard matrices")]
struct Cli {
    /// Allowed deviation of an entry's modulus from 1.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_unit: f64,
    /// Allowed Gram-matrix defect and vanishing-sum threshold.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_orth: f64,
    /// Entry-equality distance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_eq: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a named matrix: tao, m1, m2, h(alpha,beta), karlsson(theta,phi,z1[,z2,z3,z4]).
    /// Arguments are in turns, as `p/q` or decimals.
    Catalog { name: String },
    /// Report Gram defect, distinct entries, imaginary array and H2-reducibility.
    Verify { matrix: String },
    /// List block locations (0-based) of the given kind.
    Detect { kind: BlockKind, matrix: String },
    /// Find a witness with left · A · right = B.
    Equiv { a: String, b: String },
    /// Map a matrix with a rank-one 2x3 block onto H(alpha, beta).
    MatchFamily { matrix: String },
    /// Search CHMs whose entries lie in an alphabet of phases given in turns.
    SearchAlphabet {
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<String>,
        #[arg(long, value_enum, default_value_t = SpaceArg::Dephased)]
        space: SpaceArg,
    },
    /// Scan alphabets {1, s} over sample points s.
    ScanTwo {
        #[arg(long, default_value_t = 360)]
        samples: usize,
    },
    /// Scan alphabets {1, -1, x} over sample points x, plus i and -i.
    ScanThree {
        #[arg(long, default_value_t = 180)]
        samples: usize,
    },
    /// Scan the Karlsson family over a (theta, phi) grid.
    ScanKarlsson {
        /// Grid sizes `T,P`.
        #[arg(long, value_delimiter = ',', default_values_t = [32, 32])]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        zdraws: usize,
        #[arg(long, env = "CHM_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Classify a matrix with a 3x3 Hadamard block as Tao or H(alpha, beta).
    ClassifyH3 { matrix: String },
    /// Render a SearchReport JSON document as text.
    Report { file: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BlockKind {
    H2,
    H3,
    Rank1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceArg {
    Dephased,
    Unnormalized,
}

impl From<SpaceArg> for SearchSpace {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Dephased => SearchSpace::Dephased,
            SpaceArg::Unnormalized => SearchSpace::Unnormalized,
        }
    }
}

enum Payload {
    Json(Value),
    Text(String),
}

struct Outcome {
    code: u8,
    payload: Payload,
}

impl Outcome {
    fn json(code: u8, value: impl Serialize) -> Self {
        Self { code, payload: Payload::Json(serde_json::to_value(value).expect("payload serialises")) }
    }
}

fn exit_code(e: &ChmError) -> u8 {
    match e {
        ChmError::Counterexample(_) => 4,
        ChmError::Inconsistency(_) => 5,
        _ => 2,
    }
}

fn read_input(path: &str) -> Result<String, ChmError> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| ChmError::Parse(format!("cannot read `{path}`: {e}")))?;
    Ok(text)
}

fn load(path: &str, tol: &Tolerance64) -> Result<CMatrix64, ChmError> {
    matrix_from_json(&read_input(path)?, tol)
}

/// A turn count, exact when written as an integer or `p/q`.
fn parse_turn_value(s: &str) -> Result<(f64, Option<Turns>), ChmError> {
    let s = s.trim();
    if let Ok(t) = parse_turns(s) {
        let unreduced = if s.contains('/') {
            let (p, q) = s.split_once('/').expect("checked");
            p.trim().parse::<f64>().unwrap_or(0.0) / q.trim().parse::<f64>().unwrap_or(1.0)
        } else {
            s.parse::<f64>().unwrap_or(0.0)
        };
        return Ok((unreduced, Some(t)));
    }
    let v: f64 = s.parse().map_err(|_| ChmError::Parse(format!("`{s}` is neither p/q nor a number")))?;
    if !v.is_finite() {
        return Err(ChmError::Parse(format!("`{s}` is not finite")));
    }
    Ok((v, None))
}

fn parse_phase(s: &str) -> Result<UnitScalar64, ChmError> {
    Ok(match parse_turn_value(s)? {
        (_, Some(t)) => UnitScalar64::from_turns(t),
        (v, None) => UnitScalar64::from_turns_float(v),
    })
}

fn parse_angle(s: &str) -> Result<f64, ChmError> {
    Ok(parse_turn_value(s)?.0 * std::f64::consts::TAU)
}

fn catalog_matrix(name: &str, tol: &Tolerance64) -> Result<CMatrix64, ChmError> {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let call = |prefix: &str| -> Option<Vec<String>> {
        compact
            .strip_prefix(prefix)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .map(|r| r.split(',').map(str::to_string).collect())
    };
    match compact.as_str() {
        "tao" => return Ok(catalog::tao()),
        "m1" => return Ok(catalog::m1()),
        "m2" => return Ok(catalog::m2()),
        _ => {}
    }
    if let Some(args) = call("h") {
        let [a, b] = args.as_slice() else {
            return Err(ChmError::Parse("h takes two arguments".into()));
        };
        return catalog::h_family(&HFamilyParams::new(parse_phase(a)?, parse_phase(b)?), tol);
    }
    if let Some(args) = call("karlsson") {
        let (theta, phi) = match args.as_slice() {
            [t, p, ..] => (parse_angle(t)?, parse_angle(p)?),
            _ => return Err(ChmError::Parse("karlsson takes 3 or 6 arguments".into())),
        };
        let params = match args.as_slice() {
            [_, _, z1] => KarlssonParams::complete(theta, phi, parse_phase(z1)?, [false; 3])?,
            [_, _, z1, z2, z3, z4] => {
                KarlssonParams::new(theta, phi, [parse_phase(z1)?, parse_phase(z2)?, parse_phase(z3)?, parse_phase(z4)?])
            }
            _ => return Err(ChmError::Parse("karlsson takes 3 or 6 arguments".into())),
        };
        return catalog::karlsson(&params, tol);
    }
    Err(ChmError::Parse(format!("unknown catalog name `{name}`")))
}

fn report_outcome(value: impl Serialize, counterexample: bool) -> Outcome {
    Outcome::json(if counterexample { 4 } else { 0 }, value)
}

fn run(cli: &Cli) -> Result<Outcome, ChmError> {
    let tol = Tolerance64::new(cli.eps_unit, cli.eps_orth, cli.eps_eq)?;
    let tol = &tol;
    match &cli.command {
        Command::Catalog { name } => Ok(Outcome::json(0, MatrixDoc::from(&catalog_matrix(name, tol)?))),
        Command::Verify { matrix } => {
            let m = load(matrix, tol)?;
            let is_chm = m.is_chm(tol);
            let doc = json!({
                "gram_defect": m.gram_defect(),
                "is_chm": is_chm,
                "distinct_elements": m.distinct_elements(tol).iter().map(ScalarDoc::from).collect::<Vec<_>>(),
                "imaginary_array": m.imaginary_array(tol).0,
                "is_h2_reducible": is_h2_reducible(&m, tol),
            });
            Ok(Outcome::json(if is_chm { 0 } else { 3 }, doc))
        }
        Command::Detect { kind, matrix } => {
            let m = load(matrix, tol)?;
            let (label, blocks) = match kind {
                BlockKind::H2 => ("h2", find_h2_blocks(&m, tol)),
                BlockKind::H3 => ("h3", find_h3_blocks(&m, tol)),
                BlockKind::Rank1 => ("rank1", find_rank1_2x3(&m, tol)),
            };
            let code = if blocks.is_empty() { 3 } else { 0 };
            Ok(Outcome::json(code, json!({ "kind": label, "count": blocks.len(), "locations": blocks })))
        }
        Command::Equiv { a, b } => {
            let (ma, mb) = (load(a, tol)?, load(b, tol)?);
            Ok(match are_equivalent(&ma, &mb, tol)? {
                Some(w) => Outcome::json(0, WitnessDoc::from(&w)),
                None => Outcome::json(3, json!({ "equivalent": false })),
            })
        }
        Command::MatchFamily { matrix } => {
            let m = load(matrix, tol)?;
            Ok(match match_h_family(&m, tol)? {
                Some((p, w)) => Outcome::json(
                    0,
                    json!({ "alpha": ScalarDoc::from(&p.alpha), "beta": ScalarDoc::from(&p.beta), "witness": WitnessDoc::from(&w) }),
                ),
                None => Outcome::json(3, json!({ "rank_one_block": false })),
            })
        }
        Command::SearchAlphabet { elements, space } => {
            let values = elements.iter().map(|e| parse_phase(e)).collect::<Result<Vec<_>, _>>()?;
            let alphabet = Alphabet::new(values, tol)?;
            let found = search::find_chm_cliques_in(&alphabet, (*space).into(), tol);
            let mut report = SearchReport::new(format!("alphabet {{{}}}", elements.join(", ")));
            report.notes.push(format!("search space: {space:?}").to_lowercase());
            for m in &found {
                let class = search::classify_against_catalog(m, tol)?;
                let details = HitDetails { h2_reducible: is_h2_reducible(m, tol), ..HitDetails::default() };
                report.push(MatrixDoc::from(m), class, details);
            }
            let ce = report.counterexample;
            Ok(report_outcome(report, ce))
        }
        Command::ScanTwo { samples } => {
            let reports = search::scan_two_element(&search::two_element_samples::<f64>(*samples), tol)?;
            let ce = reports.iter().any(|r| r.counterexample);
            Ok(report_outcome(reports, ce))
        }
        Command::ScanThree { samples } => {
            let reports = search::scan_three_element(&search::three_element_samples::<f64>(*samples), tol)?;
            let ce = reports.iter().any(|r| r.counterexample);
            Ok(report_outcome(reports, ce))
        }
        Command::ScanKarlsson { grid, zdraws, seed } => {
            if grid.len() != 2 {
                return Err(ChmError::Parse("--grid expects two sizes `T,P`".into()));
            }
            let thetas = catalog::angle_grid::<f64>(grid[0]);
            let phis = catalog::angle_grid::<f64>(grid[1]);
            let report = search::karlsson_grid_scan(&thetas, &phis, *zdraws, *seed, tol)?;
            let ce = report.counterexample;
            Ok(report_outcome(report, ce))
        }
        Command::ClassifyH3 { matrix } => {
            let m = load(matrix, tol)?;
            let mut report = SearchReport::new(format!("classify-h3 {matrix}"));
            match search::classify_h3(&m, tol) {
                Ok(H3Class::NoH3Block) => {
                    report.notes.push("no 3x3 Hadamard block".into());
                    Ok(Outcome::json(3, report))
                }
                Ok(class) => {
                    let details = HitDetails { h2_reducible: is_h2_reducible(&m, tol), ..HitDetails::default() };
                    report.push(MatrixDoc::from(&m), class.classification().expect("block present"), details);
                    Ok(Outcome::json(0, report))
                }
                Err(ChmError::Counterexample(msg)) => {
                    report.notes.push(msg);
                    report.push(MatrixDoc::from(&m), Classification::Unclassified, HitDetails::default());
                    Ok(Outcome::json(4, report))
                }
                Err(e) => Err(e),
            }
        }
        Command::Report { file } => {
            let doc: ReportDocument =
                serde_json::from_str(&read_input(file)?).map_err(|e| ChmError::Parse(e.to_string()))?;
            Ok(Outcome { code: 0, payload: Payload::Text(doc.render_text()) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Outcome { code, payload }) => {
            let text = match payload {
                Payload::Json(v) => serde_json::to_string_pretty(&v).expect("valid JSON value") + "\n",
                Payload::Text(t) => t,
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == 2 {
                eprintln!("run `chm6 --help` for usage");
            }
            ExitCode::from(code)
        }
    }
}

//! Command-line front end: build and export the cell complex, run the
//! verification suites, compute homology, intersection indices and bubble
//! monodromy.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid arguments,
//! 3 I/O failure.

mod export;

use clap::{Parser, Subcommand, ValueEnum};
use qah_core::cells::CellComplex;
use qah_core::combinatorics::SubsetMask;
use qah_core::homology::{boundary_matrix, homology_group, Filter};
use qah_core::intersection::{index_with_imaginary, IndexEvidence};
use qah_core::monodromy::{bubble_pinches, loop_action, BMClass, MinusVariant};
use qah_core::verify::{render_report, run_suite, Suite};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const DEFAULT_MAX_N: usize = 4;

#[derive(Parser)]
#[command(
    name = "qah",
    version,
    about = "Cell complexes, homology and monodromy for arrangements of complex spheres"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    Eq,
    Relative,
    All,
}

impl From<FilterArg> for Filter {
    fn from(value: FilterArg) -> Filter {
        match value {
            FilterArg::Eq => Filter::EqOnly,
            FilterArg::Relative => Filter::Relative,
            FilterArg::All => Filter::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Boundary,
    Signs,
    Cube,
    Generators,
    Geometry,
    Intersection,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(value: SuiteArg) -> Suite {
        match value {
            SuiteArg::Boundary => Suite::Boundary,
            SuiteArg::Signs => Suite::Signs,
            SuiteArg::Cube => Suite::Cube,
            SuiteArg::Generators => Suite::Generators,
            SuiteArg::Geometry => Suite::Geometry,
            SuiteArg::Intersection => Suite::Intersection,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Build the complex for one n and write the JSON export.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite and print one line per check.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Homology of the filtered complex at one degree.
    Homology {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: i64,
        #[arg(long, value_enum)]
        filter: FilterArg,
        #[arg(long)]
        json: bool,
    },
    /// Intersection index of a generator with the imaginary subspace.
    Intersect {
        #[arg(long)]
        n: usize,
        /// Comma-separated 1-based sphere labels, e.g. 1,3
        #[arg(long)]
        set: String,
        #[arg(long)]
        json: bool,
    },
    /// Picard-Lefschetz loops of the one-loop bubble in D dimensions.
    Monodromy {
        #[arg(long = "D")]
        d: usize,
        /// Comma-separated loop word over the two pinches, e.g. +,+ or +,-
        #[arg(long)]
        loops: String,
        #[arg(long, value_enum, default_value_t = VariantArg::A)]
        variant: VariantArg,
        #[arg(long)]
        json: bool,
    },
    /// Export one boundary matrix in the sparse text format.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: i64,
        #[arg(long, value_enum)]
        filter: FilterArg,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn max_n() -> usize {
    std::env::var("QAH_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

/// Piped output (`qah build ... | head`) must terminate quietly instead of
/// panicking on the closed pipe.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Build { n, out, json } => cmd_build(n, &out, json),
        Command::Verify {
            n,
            suite,
            seed,
            json,
        } => cmd_verify(n, suite.into(), seed, json),
        Command::Homology {
            n,
            degree,
            filter,
            json,
        } => cmd_homology(n, degree, filter.into(), json),
        Command::Intersect { n, set, json } => cmd_intersect(n, &set, json),
        Command::Monodromy {
            d,
            loops,
            variant,
            json,
        } => cmd_monodromy(d, &loops, variant, json),
        Command::Matrix {
            n,
            degree,
            filter,
            out,
        } => cmd_matrix(n, degree, filter.into(), out.as_deref()),
    };
    ExitCode::from(code)
}

fn cmd_build(n: usize, out: &std::path::Path, json: bool) -> u8 {
    let cap = max_n();
    if n > cap {
        eprintln!("error: n = {n} exceeds the build cap {cap} (override with QAH_MAX_N)");
        return 2;
    }
    let cx = CellComplex::build(n);
    let file = export::complex_file(&cx);
    let bytes = export::to_json_bytes(&file);
    if let Err(e) = std::fs::write(out, &bytes) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return 3;
    }
    let manifest = export::manifest(&cx, &bytes);
    if json {
        let m = export::ManifestJson {
            n: manifest.n,
            format: manifest.format,
            total: manifest.total,
            per_degree: &manifest.per_degree,
            sha256: &manifest.sha256,
        };
        println!("{}", serde_json::to_string_pretty(&m).unwrap());
    } else {
        print!("{}", manifest.render());
        println!("wrote {}", out.display());
    }
    0
}

fn cmd_verify(n: usize, suite: Suite, seed: u64, json: bool) -> u8 {
    let results = run_suite(suite, n, seed);
    let passed = results.iter().all(|r| r.passed);
    if json {
        let payload = json!({
            "n": n,
            "suite": format!("{suite:?}").to_lowercase(),
            "seed": seed,
            "passed": passed,
            "results": results.iter().map(|r| json!({
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else {
        println!("suite {suite:?} n={n} seed={seed}");
        print!("{}", render_report(&results));
    }
    if passed {
        0
    } else {
        1
    }
}

fn cmd_homology(n: usize, degree: i64, filter: Filter, json: bool) -> u8 {
    let cx = CellComplex::build(n);
    match homology_group(&cx, degree, filter) {
        Ok(h) => {
            let torsion: Vec<String> = h.torsion.iter().map(|t| t.to_string()).collect();
            if json {
                let payload = json!({
                    "n": n,
                    "degree": degree,
                    "filter": format!("{filter:?}"),
                    "free_rank": h.free_rank,
                    "torsion": torsion,
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                println!(
                    "H_{degree}({filter:?}, n={n}): free rank {}, torsion [{}]",
                    h.free_rank,
                    torsion.join(", ")
                );
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn parse_set(n: usize, set: &str) -> Result<SubsetMask, String> {
    let mut mask = SubsetMask::EMPTY;
    for part in set.split(',') {
        let label: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid label {part:?}"))?;
        if label < 1 || label > n + 1 {
            return Err(format!("label {label} outside 1..={}", n + 1));
        }
        mask = mask.with(label);
    }
    if mask.is_empty() {
        return Err("the set is empty".into());
    }
    Ok(mask)
}

fn cmd_intersect(n: usize, set: &str, json: bool) -> u8 {
    let mask = match parse_set(n, set) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match index_with_imaginary(n, mask) {
        Ok((index, evidence)) => {
            if json {
                let evidence_json = match &evidence {
                    IndexEvidence::Orientation(cert) => json!({
                        "kind": "orientation",
                        "class": cert.class,
                        "determinant": cert.determinant,
                        "conclusion": cert.conclusion,
                    }),
                    IndexEvidence::Disjointness(cert) => json!({
                        "kind": "disjointness",
                        "class": cert.class,
                        "base_label": cert.base_label,
                        "verified": cert.verify(),
                        "witnesses": cert.witnesses.iter().map(|w| json!({
                            "flag": w.cell.flag.subsets().iter()
                                .map(|s| s.labels()).collect::<Vec<_>>(),
                            "j_le": w.cell.j_le.labels(),
                            "j_ge": w.cell.j_ge.labels(),
                            "tau": w.tau,
                            "label": w.label,
                            "kind": format!("{:?}", w.kind),
                        })).collect::<Vec<_>>(),
                    }),
                };
                let payload = json!({
                    "n": n,
                    "set": mask.labels(),
                    "index": index,
                    "certificate": evidence_json,
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                println!("index <(i·R)^{} | e_{:?}> = {index}", n + 1, mask);
                match &evidence {
                    IndexEvidence::Orientation(cert) => {
                        println!(
                            "certificate: orientation determinant {} for {}",
                            cert.determinant, cert.class
                        );
                    }
                    IndexEvidence::Disjointness(cert) => {
                        println!(
                            "certificate: flow frame without label {}; {} cell witnesses, verified={}",
                            cert.base_label,
                            cert.witnesses.len(),
                            cert.verify()
                        );
                        for w in &cert.witnesses {
                            println!("  e^{}{:?}: label {} {:?}", w.tau, w.cell, w.label, w.kind);
                        }
                    }
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn cmd_monodromy(d: usize, loops: &str, variant: VariantArg, json: bool) -> u8 {
    let variant = match variant {
        VariantArg::A => MinusVariant::A,
        VariantArg::B => MinusVariant::B,
    };
    let (plus, minus) = match bubble_pinches(d, variant) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut class = BMClass::imaginary_base(d - 1);
    let mut steps = Vec::new();
    for (idx, word) in loops.split(',').enumerate() {
        let pinch = match word.trim() {
            "+" => &plus,
            "-" => &minus,
            other => {
                eprintln!("error: loop {:?} is neither + nor -", other);
                return 2;
            }
        };
        class = match loop_action(&class, pinch) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        };
        steps.push((idx + 1, word.trim().to_string(), class.to_string()));
    }
    if json {
        let payload = json!({
            "D": d,
            "variant": format!("{variant:?}"),
            "loops": loops,
            "base": class.base,
            "spheres": class.spheres().map(|(&(set, orient), &c)| json!({
                "set": set.labels(),
                "orientation": orient,
                "coefficient": c,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else {
        println!("bubble D={d} variant {variant:?}");
        println!("start: {}", BMClass::imaginary_base(d - 1));
        for (idx, word, state) in &steps {
            println!("loop {idx} at p{word}: {state}");
        }
        println!("result: {class}");
    }
    0
}

fn cmd_matrix(n: usize, degree: i64, filter: Filter, out: Option<&std::path::Path>) -> u8 {
    let cx = CellComplex::build(n);
    match boundary_matrix(&cx, degree, filter) {
        Ok(m) => {
            let text = m.to_text();
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 3;
                    }
                }
                None => print!("{text}"),
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

//! `mzv` — word-algebra calculator and identity-verification harness.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes: 0 for success or
//! a passing check, 1 when a check reports failures (including conjecture
//! counterexamples), 2 for usage or input errors (including memo-cap
//! overflow).

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mzv_core::verify::{
    check_drop1_axioms, check_fmzv, check_hoffman_diamond, check_hs_families, check_lemma41,
    check_main_theorem, scan_conjectures,
};
use mzv_core::words::ChainBlocks;
use mzv_core::{
    diamond_flat_p, eval_lincomb, parse_bracket, parse_word, primes_in_range, shuffle, star,
    BracketForm, CheckReport, CheckStatus, Drop1, EvalBackend, LinComb, Parsed, Word,
    DEFAULT_MEMO_CAP,
};

#[derive(Parser)]
#[command(
    name = "mzv",
    version,
    about = "Word algebra for multiple zeta values: drop-1 images, star and shuffle products, truncated and mod-p evaluation, identity checks and conjecture scans"
)]
struct Cli {
    /// Worker threads for checks and scans (>= 1; default: all cores)
    #[arg(long, global = true, env = "MZV_THREADS")]
    threads: Option<usize>,

    /// Cap on drop-1 memo entries; an overflowing run aborts instead of evicting
    #[arg(long, global = true, default_value_t = DEFAULT_MEMO_CAP)]
    memo_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a word ("yxx") or composition ("3,1,4") and describe it
    Parse {
        #[arg(long)]
        word: String,
    },
    /// Convert between the word / composition / exponent-tuple / bracket encodings
    Convert {
        /// Input in any grammar: letters, composition, or "[a;b;c]"
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        to: Encoding,
    },
    /// Apply the x<->y swapping anti-automorphism
    Tau {
        #[arg(long)]
        word: String,
    },
    /// Expand a word of H0 into its drop-1 image (all parts >= 2)
    Drop1 {
        #[arg(long)]
        word: String,
    },
    /// Star product of two {2,3}-indexed words
    Star {
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
    /// Shuffle product of two words
    Shuffle {
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
    /// Evaluate a composition numerically: truncated sum or mod-p residue
    Eval {
        #[arg(long)]
        word: String,
        /// Truncation bound N for the partial sum below N
        #[arg(long)]
        trunc: Option<u64>,
        /// With --trunc: exact rational instead of floating point
        #[arg(long)]
        exact: bool,
        /// Prime modulus for the finite sum below p
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Diamond-flat chain sum mod p for an admissible composition
    Diamond {
        #[arg(long)]
        word: String,
        #[arg(long)]
        prime: u64,
    },
    /// Run an identity check and report pass/fail
    Check {
        #[command(subcommand)]
        which: CheckCommand,
    },
    /// Run a counterexample scan
    Scan {
        #[command(subcommand)]
        which: ScanCommand,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// drop1(w1 tau(w2)) = w1 * w2 over all {2,3}-word pairs within the weight bound
    Main {
        #[arg(long, default_value_t = 12)]
        max_weight: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Fixed points on parts >= 2, tau-invariance and idempotence on H0
    Axioms {
        #[arg(long, default_value_t = 12)]
        max_weight: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Three-term expansion of ({2}^{a-1},3,{2}^{c-1},1,{2}^b) words
    Families {
        #[arg(long, default_value_t = 3)]
        a_max: u32,
        #[arg(long, default_value_t = 3)]
        b_max: u32,
        #[arg(long, default_value_t = 3)]
        c_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Finite-sum congruences mod p: reversal, shuffle, and double-shuffle forms
    Fmzv {
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
        /// Inclusive prime range "lo..hi"
        #[arg(long, default_value = "11..199")]
        primes: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Chain-sum congruence: diamond-flat = (-1)^l zeta_p(merged blocks) mod p
    Lemma41 {
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
        /// Inclusive prime range "lo..hi"
        #[arg(long, default_value = "5..97")]
        primes: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact N-truncated diamond identity over 1 <= c <= c_max, 2 <= N <= n_max
    HoffmanDiamond {
        #[arg(long, default_value_t = 4)]
        c_max: u32,
        #[arg(long, default_value_t = 40)]
        n_max: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum ScanCommand {
    /// Scan drop-1 fibers (mirror pairs only) and {2,3}-only images (must factor)
    Conjectures {
        #[arg(long, default_value_t = 10)]
        max_weight: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Encoding {
    /// Letter form, e.g. "yxxyx"
    Word,
    /// Index list, e.g. "3,1,4"
    Composition,
    /// Exponent tuple, e.g. "1,2,2,3"
    Exponents,
    /// Three-segment bracket "[a1,..;b1,..;c]"
    Bracket,
    /// Two-segment run-length blocks "[a1,..;b1,..]" of an admissible composition
    Blocks,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Format {
    Text,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    if cli.threads == Some(0) {
        return Err("--threads must be >= 1".into());
    }
    let memo_cap = cli.memo_cap;
    match cli.command {
        Command::Parse { word } => {
            match parse_word(&word).map_err(|e| e.to_string())? {
                Parsed::Word(w) => {
                    let m = w.membership();
                    match w.to_composition() {
                        Ok(k) => println!(
                            "word {w} | weight {} | composition {k} | admissible {}",
                            w.weight(),
                            m.in_h0
                        ),
                        Err(_) => {
                            println!("word {w} | weight {} | no composition form", w.weight())
                        }
                    }
                }
                Parsed::Composition(k) => println!(
                    "composition {k} | weight {} | depth {} | admissible {}",
                    k.weight(),
                    k.depth(),
                    k.is_admissible()
                ),
            }
            Ok(0)
        }
        Command::Convert { word, to } => {
            let w = parse_any(&word)?;
            let text = match to {
                Encoding::Word => w.to_string(),
                Encoding::Composition => w.to_composition().map_err(|e| e.to_string())?.to_string(),
                Encoding::Exponents => w
                    .to_exponent_tuple()
                    .map_err(|e| e.to_string())?
                    .to_string(),
                Encoding::Bracket => {
                    let tuple = w.to_exponent_tuple().map_err(|e| e.to_string())?;
                    BracketForm::from_exponent_tuple(&tuple)
                        .map_err(|e| e.to_string())?
                        .to_string()
                }
                Encoding::Blocks => {
                    let k = w.to_composition().map_err(|e| e.to_string())?;
                    ChainBlocks::from_composition(&k)
                        .map_err(|e| e.to_string())?
                        .to_string()
                }
            };
            println!("{text}");
            Ok(0)
        }
        Command::Tau { word } => {
            let image = parse_any(&word)?.tau();
            match image.to_composition() {
                Ok(k) => println!("{k}"),
                Err(_) => println!("{image}"),
            }
            Ok(0)
        }
        Command::Drop1 { word } => {
            let w = parse_any(&word)?;
            let image = Drop1::with_cap(memo_cap)
                .apply(&w)
                .map_err(|e| e.to_string())?;
            println!("{image}");
            Ok(0)
        }
        Command::Star { w1, w2 } => {
            let k1 = parse_any(&w1)?
                .to_composition()
                .map_err(|e| e.to_string())?;
            let k2 = parse_any(&w2)?
                .to_composition()
                .map_err(|e| e.to_string())?;
            let product = star(&k1, &k2).map_err(|e| e.to_string())?;
            println!("{product}");
            Ok(0)
        }
        Command::Shuffle { w1, w2 } => {
            let u = parse_any(&w1)?;
            let v = parse_any(&w2)?;
            println!("{}", shuffle(&u, &v));
            Ok(0)
        }
        Command::Eval {
            word,
            trunc,
            exact,
            prime,
        } => {
            let w = parse_any(&word)?;
            let backend = match (trunc, prime) {
                (Some(n), None) => {
                    if exact {
                        EvalBackend::Exact { truncation: n }
                    } else {
                        EvalBackend::Float { truncation: n }
                    }
                }
                (None, Some(p)) => {
                    if exact {
                        return Err("--exact applies to --trunc, not --prime".into());
                    }
                    EvalBackend::ModP { modulus: p }
                }
                (Some(_), Some(_)) => return Err("choose one of --trunc or --prime".into()),
                (None, None) => return Err("one of --trunc or --prime is required".into()),
            };
            let value =
                eval_lincomb(&LinComb::from_word(w), &backend).map_err(|e| e.to_string())?;
            println!("{value}");
            Ok(0)
        }
        Command::Diamond { word, prime } => {
            let k = parse_any(&word)?
                .to_composition()
                .map_err(|e| e.to_string())?;
            let value = diamond_flat_p(&k, prime).map_err(|e| e.to_string())?;
            println!("{value}");
            Ok(0)
        }
        Command::Check { which } => {
            let threads = cli.threads;
            match which {
                CheckCommand::Main { max_weight, format } => emit(
                    with_pool(threads, || check_main_theorem(max_weight, memo_cap))?,
                    format,
                ),
                CheckCommand::Axioms { max_weight, format } => emit(
                    with_pool(threads, || check_drop1_axioms(max_weight, memo_cap))?,
                    format,
                ),
                CheckCommand::Families {
                    a_max,
                    b_max,
                    c_max,
                    format,
                } => emit(
                    with_pool(threads, || check_hs_families(a_max, b_max, c_max, memo_cap))?,
                    format,
                ),
                CheckCommand::Fmzv {
                    max_weight,
                    primes,
                    format,
                } => {
                    let primes = parse_prime_range(&primes)?;
                    let report = with_pool(threads, || check_fmzv(max_weight, &primes))?
                        .map_err(|e| e.to_string())?;
                    emit(report, format)
                }
                CheckCommand::Lemma41 {
                    max_weight,
                    primes,
                    format,
                } => {
                    let primes = parse_prime_range(&primes)?;
                    let report = with_pool(threads, || check_lemma41(max_weight, &primes))?
                        .map_err(|e| e.to_string())?;
                    emit(report, format)
                }
                CheckCommand::HoffmanDiamond {
                    c_max,
                    n_max,
                    format,
                } => emit(
                    with_pool(threads, || check_hoffman_diamond(c_max, n_max))?,
                    format,
                ),
            }
        }
        Command::Scan { which } => match which {
            ScanCommand::Conjectures { max_weight, format } => emit(
                with_pool(cli.threads, || scan_conjectures(max_weight, memo_cap))?,
                format,
            ),
        },
    }
}

/// Accept any of the input grammars: letters, composition, or "[a;b;c]".
fn parse_any(text: &str) -> Result<Word, String> {
    if text.trim_start().starts_with('[') {
        Ok(parse_bracket(text)
            .map_err(|e| e.to_string())?
            .expand()
            .to_word())
    } else {
        Ok(parse_word(text).map_err(|e| e.to_string())?.into_word())
    }
}

/// Inclusive "lo..hi" range of primes.
fn parse_prime_range(spec: &str) -> Result<Vec<u64>, String> {
    let (lo, hi) = spec
        .split_once("..")
        .ok_or_else(|| format!("prime range must look like \"lo..hi\", got {spec:?}"))?;
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad range bound {lo:?}"))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad range bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty prime range {lo}..{hi}"));
    }
    let primes = primes_in_range(lo, hi);
    if primes.is_empty() {
        return Err(format!("no primes in {lo}..{hi}"));
    }
    Ok(primes)
}

fn with_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| e.to_string())?;
            Ok(pool.install(f))
        }
    }
}

fn emit(report: CheckReport, format: Format) -> Result<u8, String> {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", report.failures_csv()),
        Format::Text => print!("{}", report.render_text()),
    }
    if report.status == CheckStatus::Exception {
        if let Some(err) = &report.error {
            eprintln!("error: {err}");
        }
    }
    Ok(exit_code_for(report.status))
}

fn exit_code_for(status: CheckStatus) -> u8 {
    match status {
        CheckStatus::Pass => 0,
        CheckStatus::Fail => 1,
        CheckStatus::Exception => 2,
    }
}

//! `bpair`: command-line front end over the poset text format.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::time::Instant;

use balanced_pair::verify::{verify_theorem_with, EnumerationConfig};
use balanced_pair::{
    all_pair_probabilities, count_extensions, find_balanced_exhaustive, find_balanced_nfree, find_n,
    info_lower_bound, prob_before, simulate_sort, Error, Poset,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bpair", version, about = "Exact linear-extension and balanced-pair tools for finite posets")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of linear extensions.
    Count { file: String },
    /// Probability that X precedes Y in a uniform linear extension.
    Prob { file: String, x: String, y: String },
    /// Every incomparable pair with its probability.
    Pairs { file: String },
    /// A pair with probability in [1/3, 2/3].
    Balanced {
        file: String,
        /// Use the N-free construction instead of scanning all pairs.
        #[arg(long)]
        constructive: bool,
    },
    /// Whether the poset contains an induced N.
    Nfree { file: String },
    /// Level decomposition starting from the minimal elements.
    Levels { file: String },
    /// Exhaustive check of the balanced-pair construction on all small posets.
    Verify {
        #[arg(long)]
        max_n: usize,
        /// Worker threads (defaults to available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Sort by most-balanced queries against a hidden linear extension.
    Sortsim {
        file: String,
        /// Whitespace-separated labels of the hidden order.
        #[arg(long)]
        hidden: String,
    },
}

enum Failure {
    Lib(Error),
    Io(String, io::Error),
    Verification(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs one invocation and returns the process exit status.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return EXIT_DOMAIN;
        }
    };
    match execute(&cli, stdin, stdout, stderr) {
        Ok(()) => 0,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_capacity() {
                EXIT_CAPACITY
            } else {
                EXIT_DOMAIN
            }
        }
        Err(Failure::Io(path, e)) => {
            let _ = writeln!(stderr, "error: {path}: {e}");
            EXIT_DOMAIN
        }
        Err(Failure::Verification(n)) => {
            let _ = writeln!(stderr, "error: {n} verification failures");
            EXIT_VERIFICATION
        }
    }
}

fn load(path: &str, stdin: &mut dyn Read) -> Result<Poset, Failure> {
    let mut text = String::new();
    if path == "-" {
        stdin.read_to_string(&mut text).map_err(|e| Failure::Io("<stdin>".into(), e))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Io(path.into(), e))?;
    }
    Ok(Poset::parse(&text)?)
}

fn emit(out: &mut dyn Write, json: bool, value: Value, text: String) -> Result<(), Failure> {
    let written = if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"))
    } else {
        write!(out, "{text}")
    };
    written.map_err(|e| Failure::Io("<stdout>".into(), e))
}

fn execute(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Count { file } => {
            let e = count_extensions(&load(file, stdin)?)?;
            emit(out, json, json!({ "count": e.to_string() }), format!("{e}\n"))
        }
        Command::Prob { file, x, y } => {
            let p = load(file, stdin)?;
            let pr = prob_before(&p, p.index(x)?, p.index(y)?)?;
            emit(out, json, json!({ "pair": [x, y], "prob": pr.to_string() }), format!("{pr}\n"))
        }
        Command::Pairs { file } => {
            let p = load(file, stdin)?;
            let probes = all_pair_probabilities(&p)?;
            let value = probes
                .iter()
                .map(|c| json!({ "pair": [p.label(c.x), p.label(c.y)], "prob": c.prob.to_string() }))
                .collect();
            let text = probes.iter().map(|c| format!("{} {} {}\n", p.label(c.x), p.label(c.y), c.prob)).collect();
            emit(out, json, Value::Array(value), text)
        }
        Command::Balanced { file, constructive } => {
            let p = load(file, stdin)?;
            let cert = if *constructive { find_balanced_nfree(&p)? } else { find_balanced_exhaustive(&p)? };
            match cert {
                None if p.is_total() => emit(out, json, Value::Null, "none (chain)\n".into()),
                None => emit(out, json, Value::Null, "none\n".into()),
                Some(c) => {
                    let mut text = format!("{} {} {}\nmethod: {}\n", p.label(c.x), p.label(c.y), c.prob, c.method);
                    if let Some(t) = &c.trace {
                        let names = |xs: &[usize]| xs.iter().map(|&x| p.label(x)).collect::<Vec<_>>().join(" ");
                        text.push_str(&format!("step: {}\n", t.step));
                        if !t.stripped_prefix.is_empty() {
                            text.push_str(&format!("stripped: {}\n", names(&t.stripped_prefix)));
                        }
                        text.push_str(&format!(
                            "level: {}  a: {}  b: {}  swapped: {}\n",
                            t.level,
                            p.label(t.a),
                            p.label(t.b),
                            t.swapped
                        ));
                        if let (Some(q), Some(r)) = (&t.q, t.r) {
                            text.push_str(&format!("chain: {}\n", names(&t.chain)));
                            text.push_str(&format!("q: {}  r: {r}\n", q.to_strings().join(" ")));
                        }
                        for probe in &t.candidates_checked {
                            text.push_str(&format!(
                                "checked: {} {} {}\n",
                                p.label(probe.x),
                                p.label(probe.y),
                                probe.prob
                            ));
                        }
                    }
                    emit(out, json, c.to_json(&p), text)
                }
            }
        }
        Command::Nfree { file } => {
            let p = load(file, stdin)?;
            match find_n(&p) {
                None => emit(out, json, json!({ "n_free": true, "witness": Value::Null }), "N-free\n".into()),
                Some(w) => {
                    let [a, b, c, d] = w.labels(&p);
                    emit(
                        out,
                        json,
                        json!({ "n_free": false, "witness": { "a": a, "b": b, "c": c, "d": d } }),
                        format!("not N-free: {a} < {b}, {c} < {b}, {c} < {d}\n"),
                    )
                }
            }
        }
        Command::Levels { file } => {
            let p = load(file, stdin)?;
            let levels: Vec<Vec<&str>> = p
                .level_decomposition()
                .levels()
                .iter()
                .map(|lv| lv.iter().map(|x| p.label(x)).collect())
                .collect();
            let text = levels.iter().enumerate().map(|(i, lv)| format!("{i}: {}\n", lv.join(" "))).collect();
            emit(out, json, json!(levels), text)
        }
        Command::Verify { max_n, jobs } => {
            let cfg = match jobs {
                Some(j) => EnumerationConfig::with_jobs(*j),
                None => EnumerationConfig::default(),
            };
            let start = Instant::now();
            let report = verify_theorem_with(&cfg, *max_n)?;
            let _ = writeln!(err, "elapsed: {:.3}s", start.elapsed().as_secs_f64());
            let value = report
                .sizes
                .iter()
                .map(|s| {
                    json!({
                        "n": s.n,
                        "total": s.total,
                        "nfree": s.nfree,
                        "checked": s.checked,
                        "theorem_passes": s.theorem_passes,
                        "lemma_passes": s.lemma_passes,
                        "chain_splits": s.chain_splits,
                        "choice_runs": s.choice_runs,
                        "failures": s.failures(),
                        "failure_details": s.failure_details,
                    })
                })
                .collect();
            emit(out, json, Value::Array(value), format!("{report}{}", report.machine_lines()))?;
            match report.failures() {
                0 => Ok(()),
                n => Err(Failure::Verification(n)),
            }
        }
        Command::Sortsim { file, hidden } => {
            let p = load(file, stdin)?;
            let order = hidden.split_whitespace().map(|l| p.index(l)).collect::<Result<Vec<_>, _>>()?;
            let t = simulate_sort(&p, &order)?;
            let lb = info_lower_bound(&p)?;
            let queries: Vec<Value> = t
                .queries
                .iter()
                .map(|q| {
                    json!({
                        "pair": [p.label(q.x), p.label(q.y)],
                        "prob": q.prob.to_string(),
                        "answer": q.answer,
                    })
                })
                .collect();
            let value = json!({
                "queries": queries,
                "comparisons": t.comparisons,
                "lower_bound": lb,
                "balanced": t.all_queries_balanced,
            });
            emit(out, json, value, t.render(&p, lb))
        }
    }
}

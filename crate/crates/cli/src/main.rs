//! `billiards` — command-line front end for the billiard-words library.
//!
//! Subcommands: `cycles`, `word`, `verify`, `simulate`, `class`, and
//! `selftest`. All output is deterministic given the arguments; every
//! subcommand takes `--json` for machine-readable output.
//!
//! Exit codes: 0 success (including an accepting `verify`), 1 selftest
//! failure, 2 malformed input, 3 recognition reject.

use billiard_words::classes::{class_adjacency_check, translation_class};
use billiard_words::geom::{self, Rat, RationalPoint, RationalRay};
use billiard_words::qcycle::{self, Parameters};
use billiard_words::recognizer::{self, RecognitionResult};
use billiard_words::wordgen::{self, StepRule, TableKind, Word};
use clap::{ArgGroup, Args, Parser, Subcommand};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "billiards",
    about = "Billiard words of reflection-tiling polygons: generate, verify, classify, simulate",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose ℤ/nℤ into the q-cycles of a direction (n, q).
    Cycles(CyclesArgs),
    /// Generate the periodic billiard word of a direction (n, q).
    Word(WordArgs),
    /// Check whether a digit string is a periodic billiard word.
    Verify(VerifyArgs),
    /// Trace a ray through the unfolding lattice and print edge labels.
    Simulate(SimulateArgs),
    /// List the translation class of a direction (n, q).
    Class(ClassArgs),
    /// Run the cross-module consistency sweeps.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CyclesArgs {
    n: u64,
    q: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WordArgs {
    /// Table kind: A2, B2, D2, or G2.
    #[arg(long)]
    table: TableKind,
    n: u64,
    q: u64,
    /// Emit the reduced word instead of the full edge-label word.
    #[arg(long)]
    reduced: bool,
    /// Separate the word's blocks with '|' (plain output only).
    #[arg(long)]
    blocks: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(group = ArgGroup::new("mode").required(true).args(["table", "rule"]))]
struct VerifyArgs {
    /// Recognize a full edge-label word of this table.
    #[arg(long)]
    table: Option<TableKind>,
    /// Recognize a reduced word under this table's step rule.
    #[arg(long)]
    rule: Option<TableKind>,
    /// Digit string (whitespace and '|' ignored); stdin when omitted.
    word: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Table kind: A2, B2, D2, or G2.
    #[arg(long)]
    table: TableKind,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    q: u64,
    /// Start point "u,v" with rational coordinates like "1/3,-2/5";
    /// defaults to the canonical nonsingular start of the direction.
    #[arg(long, value_parser = parse_point)]
    p0: Option<RationalPoint>,
    /// Number of edge crossings to trace; defaults to one full period.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    q: u64,
    /// Step rule of the table: A2, B2, D2, or G2.
    #[arg(long)]
    rule: TableKind,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Largest n covered by the parameter sweeps.
    #[arg(long, default_value_t = 30)]
    max_n: u64,
}

fn parse_rational(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: i128 = num.parse().map_err(|_| format!("bad numerator {num:?}"))?;
    let d: i128 = den.parse().map_err(|_| format!("bad denominator {den:?}"))?;
    if d == 0 {
        return Err(String::from("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

fn parse_point(s: &str) -> Result<RationalPoint, String> {
    let (u, v) = s.split_once(',').ok_or("expected \"u,v\"")?;
    Ok(RationalPoint::new(parse_rational(u)?, parse_rational(v)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Cycles(args) => run_cycles(args),
        Command::Word(args) => run_word(args),
        Command::Verify(args) => run_verify(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Class(args) => run_class(args),
        Command::Selftest(args) => return run_selftest(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run_cycles(args: CyclesArgs) -> Result<ExitCode, String> {
    let s = qcycle::decompose(args.n, args.q).map_err(|e| e.to_string())?;
    if args.json {
        println!("{}", serde_json::to_string(&s).expect("serializable"));
    } else {
        print_params(&s.params);
        for c in &s.cycles {
            println!("{}", format_cycle(&c.elements));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_params(p: &Parameters) {
    println!("n = {}  q = {}  b = {}  r = {}", p.n, p.q, p.b, p.r);
}

fn format_cycle(elements: &[u64]) -> String {
    let inner: Vec<String> = elements.iter().map(u64::to_string).collect();
    format!("({})", inner.join(", "))
}

fn run_word(args: WordArgs) -> Result<ExitCode, String> {
    let word = if args.reduced {
        wordgen::reduced_word_of_direction(args.table, args.n, args.q)
    } else {
        wordgen::word_of_direction(args.table, args.n, args.q)
    }
    .map_err(|e| e.to_string())?;
    if args.json {
        println!("{}", serde_json::to_string(&word).expect("serializable"));
    } else if args.blocks {
        let bounds = block_boundaries(args.table, args.n, args.q, args.reduced, &word);
        println!("{}", grouped_digits(&word.digits, &bounds));
    } else {
        println!("{word}");
    }
    Ok(ExitCode::SUCCESS)
}

/// Start indices of the word's blocks, for display grouping.
fn block_boundaries(
    table: TableKind,
    n: u64,
    q: u64,
    reduced: bool,
    word: &Word,
) -> Vec<usize> {
    if reduced {
        return reduced_boundaries(&word.digits, &table.reduced_rule());
    }
    match table {
        // The full word interleaves one inserted label after (A2, G2)
        // or before (B2) each reduced digit, so each reduced block
        // start at i becomes a full block start at 2i.
        TableKind::A2 | TableKind::B2 | TableKind::G2 => {
            let r = wordgen::reduced_word_of_direction(table, n, q).expect("validated");
            reduced_boundaries(&r.digits, &table.reduced_rule())
                .into_iter()
                .map(|i| 2 * i)
                .collect()
        }
        // Blocks of the square word begin where the {0,3} stream flips.
        TableKind::D2 => {
            let evens: Vec<usize> = (0..word.digits.len())
                .filter(|&i| word.digits[i] == 0 || word.digits[i] == 3)
                .collect();
            evens
                .iter()
                .enumerate()
                .filter(|&(k, &pos)| {
                    let prev = evens[(k + evens.len() - 1) % evens.len()];
                    word.digits[pos] != word.digits[prev]
                })
                .map(|(_, &pos)| pos)
                .collect()
        }
    }
}

/// Positions whose incoming step is the rule's between-increment.
fn reduced_boundaries(digits: &[u8], rule: &StepRule) -> Vec<usize> {
    let m = rule.alphabet;
    let len = digits.len();
    (0..len)
        .filter(|&i| {
            let prev = digits[(i + len - 1) % len];
            (digits[i] + m - prev) % m == rule.between
        })
        .collect()
}

fn grouped_digits(digits: &[u8], bounds: &[usize]) -> String {
    if bounds.is_empty() {
        return digits_to_string(digits);
    }
    let mut out = String::new();
    if bounds[0] != 0 {
        out.push_str(&digits_to_string(&digits[..bounds[0]]));
        out.push('|');
    }
    for (k, &b) in bounds.iter().enumerate() {
        let end = if k + 1 < bounds.len() { bounds[k + 1] } else { digits.len() };
        if k > 0 {
            out.push('|');
        }
        out.push_str(&digits_to_string(&digits[b..end]));
    }
    out
}

fn digits_to_string(digits: &[u8]) -> String {
    digits.iter().map(|&d| char::from(b'0' + d)).collect()
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let input = match args.word {
        Some(w) => w,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            buf
        }
    };
    let digits = wordgen::parse_digits(&input).map_err(|e| e.to_string())?;
    let result = if let Some(table) = args.table {
        recognizer::recognize_table(&digits, table)
    } else {
        let rule = args.rule.expect("clap enforces the group").reduced_rule();
        recognizer::recognize_cyclic(&digits, &rule)
    };
    if args.json {
        println!("{}", serde_json::to_string(&result).expect("serializable"));
    } else {
        match &result {
            RecognitionResult::Accept(a) => println!(
                "accept: n = {}  q = {}  b = {}  r = {}  member = {}  rotation = {}",
                a.n, a.q, a.b, a.r, a.member, a.rotation
            ),
            RecognitionResult::Reject(reason) => println!("reject: {reason}"),
        }
    }
    Ok(if result.is_accept() { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn run_simulate(args: SimulateArgs) -> Result<ExitCode, String> {
    let model = geom::build_model(args.table);
    let v0 = geom::direction_of(args.n, args.q).map_err(|e| e.to_string())?;
    let p0 = match args.p0 {
        Some(p) => p,
        None => {
            geom::canonical_ray(args.table, args.n, args.q)
                .map_err(|e| e.to_string())?
                .p0
        }
    };
    let ray = RationalRay { p0, v0 };
    let steps = match args.steps {
        Some(s) => s,
        None => {
            geom::detect_period(&model, &ray).map_err(|e| e.to_string())?.crossings as usize
        }
    };
    let events = geom::trace(&model, &ray, steps).map_err(|e| e.to_string())?;
    // A vertex crossing terminates the trace; report it rather than fail:
    // the ray is singular, which is a legitimate finding.
    let singular = events.last().filter(|ev| ev.singular).map(|ev| ev.t);
    let digits: Vec<u8> =
        events.iter().filter(|ev| !ev.singular).map(|ev| ev.label).collect();
    if args.json {
        let report = serde_json::json!({
            "table": args.table.to_string(),
            "n": args.n,
            "q": args.q,
            "p0": [ray.p0.u.to_string(), ray.p0.v.to_string()],
            "v0": [ray.v0.u.to_string(), ray.v0.v.to_string()],
            "steps": steps,
            "digits": digits_to_string(&digits),
            "singular": singular.map(|t| t.to_string()),
        });
        println!("{report}");
    } else {
        println!("{}", digits_to_string(&digits));
        if let Some(t) = singular {
            println!("singular at t = {t}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_class(args: ClassArgs) -> Result<ExitCode, String> {
    let params = Parameters::new(args.n, args.q).map_err(|e| e.to_string())?;
    let class = translation_class(params, &args.rule.reduced_rule());
    if args.json {
        println!("{}", serde_json::to_string(&class).expect("serializable"));
    } else {
        print_params(&class.params);
        for member in &class.members {
            let lengths: Vec<String> =
                member.lengths().iter().map(u64::to_string).collect();
            println!(
                "member {}: lengths ({})  word {}",
                member.anchor(),
                lengths.join(", "),
                member.word
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------
// selftest: cross-module consistency sweeps
// ---------------------------------------------------------------------

fn run_selftest(args: SelftestArgs) -> ExitCode {
    let max_n = args.max_n.max(2);
    let sweeps: Vec<(&str, fn(u64) -> Result<usize, String>)> = vec![
        ("cycle construction", sweep_cycles),
        ("shift action", sweep_shift),
        ("word generation and recognition", sweep_words),
        ("geometric equivalence", sweep_geometry),
        ("translation classes", sweep_classes),
        ("singularity detection", sweep_singularity),
    ];
    let mut failed = false;
    for (name, sweep) in sweeps {
        match sweep(max_n) {
            Ok(count) => println!("ok — {name} ({count} checks)"),
            Err(message) => {
                failed = true;
                println!("FAIL — {name}: {message}");
            }
        }
    }
    if failed {
        ExitCode::from(1)
    } else {
        println!("all sweeps passed");
        ExitCode::SUCCESS
    }
}

fn admissible_pairs(max_n: u64) -> Vec<(u64, u64)> {
    let mut pairs = vec![(2, 1)];
    for n in 3..=max_n {
        for q in 1..=(n - 1) / 2 {
            if num_integer::gcd(n, q) == 1 {
                pairs.push((n, q));
            }
        }
    }
    pairs
}

fn check(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn sweep_cycles(max_n: u64) -> Result<usize, String> {
    let mut checks = 0;
    for (n, q) in admissible_pairs(max_n) {
        let s = qcycle::decompose(n, q).map_err(|e| e.to_string())?;
        let e = qcycle::euclid_construct(n, q).map_err(|e| e.to_string())?;
        check(s == e, || format!("euclidean construction differs at ({n},{q})"))?;
        let mut seen = vec![false; n as usize];
        for c in &s.cycles {
            for &x in &c.elements {
                check(!std::mem::replace(&mut seen[x as usize], true), || {
                    format!("element {x} repeated at ({n},{q})")
                })?;
            }
            let brute = c.elements.iter().max().unwrap() + q - n;
            check(s.params.successor_min(c.min).unwrap() == brute, || {
                format!("successor law fails at ({n},{q}) cycle {}", c.min)
            })?;
        }
        check(seen.iter().all(|&b| b), || format!("partition incomplete at ({n},{q})"))?;
        checks += 1;
    }
    Ok(checks)
}

fn sweep_shift(max_n: u64) -> Result<usize, String> {
    let mut checks = 0;
    for (n, q) in admissible_pairs(max_n) {
        let start = qcycle::decompose(n, q).map_err(|e| e.to_string())?;
        let mut s = start.clone();
        for step in 1..=q {
            let next = s.shift();
            if q >= 2 {
                let a = s.lengths();
                let b = next.lengths();
                let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
                let adjacent = diff.len() == 2
                    && (diff[1] == diff[0] + 1 || (diff[0] == 0 && diff[1] == a.len() - 1));
                check(adjacent, || {
                    format!("shift {step} at ({n},{q}) is not an adjacent transposition")
                })?;
            }
            s = next;
        }
        check(s == start, || format!("shift order exceeds q at ({n},{q})"))?;
        checks += 1;
    }
    Ok(checks)
}

fn sweep_words(max_n: u64) -> Result<usize, String> {
    let mut checks = 0;
    for (n, q) in admissible_pairs(max_n) {
        for table in TableKind::ALL {
            let rule = table.reduced_rule();
            let reduced =
                wordgen::reduced_word_of_direction(table, n, q).map_err(|e| e.to_string())?;
            check(
                wordgen::minimal_cyclic_period(&reduced.digits) == reduced.digits.len(),
                || format!("reduced word of ({n},{q}) {table} is not primitive"),
            )?;
            for (kind, result) in [
                ("cyclic", recognizer::recognize_cyclic(&reduced.digits, &rule)),
                ("brute-force", recognizer::recognize_bruteforce(&reduced.digits, &rule)),
            ] {
                match result {
                    RecognitionResult::Accept(a) if (a.n, a.q) == (n, q) => {}
                    other => {
                        return Err(format!(
                            "{kind} recognizer on ({n},{q}) {table}: {other:?}"
                        ))
                    }
                }
            }
            let full = wordgen::word_of_direction(table, n, q).map_err(|e| e.to_string())?;
            let rebuilt = match table {
                TableKind::A2 => wordgen::expand_a2(&reduced),
                TableKind::B2 => wordgen::expand_b2(&reduced),
                TableKind::G2 => wordgen::expand_g2(&reduced),
                TableKind::D2 => {
                    let (w03, w12) =
                        wordgen::d2_stream_words(n, q).map_err(|e| e.to_string())?;
                    wordgen::expand_d2(&w03, &w12)
                }
            }
            .map_err(|e| e.to_string())?;
            check(rebuilt == full, || format!("expansion of ({n},{q}) {table} differs"))?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn sweep_geometry(max_n: u64) -> Result<usize, String> {
    let mut checks = 0;
    for (n, q) in admissible_pairs(max_n.min(24)) {
        for table in TableKind::ALL {
            let expected = wordgen::word_of_direction(table, n, q).map_err(|e| e.to_string())?;
            let traced = geom::word_by_simulation(table, n, q).map_err(|e| e.to_string())?;
            check(traced == expected, || format!("simulation of ({n},{q}) {table} differs"))?;
            let model = geom::build_model(table);
            let ray = geom::canonical_ray(table, n, q).map_err(|e| e.to_string())?;
            let report = geom::detect_period(&model, &ray).map_err(|e| e.to_string())?;
            check(report.crossings as usize == expected.digits.len(), || {
                format!("period of ({n},{q}) {table} differs")
            })?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn sweep_classes(max_n: u64) -> Result<usize, String> {
    let mut checks = 0;
    for (n, q) in admissible_pairs(max_n) {
        let params = Parameters::new(n, q).map_err(|e| e.to_string())?;
        for table in [TableKind::A2, TableKind::B2, TableKind::D2] {
            let rule = table.reduced_rule();
            let class = translation_class(params, &rule);
            check(class.members.len() as u64 == q, || {
                format!("class of ({n},{q}) {table} has {} members", class.members.len())
            })?;
            check(class_adjacency_check(&class).ok, || {
                format!("class adjacency fails at ({n},{q}) {table}")
            })?;
            for member in &class.members {
                match recognizer::recognize_cyclic(&member.word.digits, &rule) {
                    RecognitionResult::Accept(a) if (a.n, a.q) == (n, q) => {}
                    other => {
                        return Err(format!(
                            "class member of ({n},{q}) {table} misrecognized: {other:?}"
                        ))
                    }
                }
            }
            checks += 1;
        }
    }
    Ok(checks)
}

fn sweep_singularity(max_n: u64) -> Result<usize, String> {
    let mut checks = 0;
    for (n, q) in admissible_pairs(max_n.min(16)) {
        for table in TableKind::ALL {
            let model = geom::build_model(table);
            for m in 0..n {
                let ray = geom::sweep_ray(table, n, q, m).map_err(|e| e.to_string())?;
                let horizon = 4 * (n as usize) + 8;
                let singular =
                    geom::is_singular(&model, &ray, horizon).map_err(|e| e.to_string())?;
                check(!singular, || {
                    format!("sweep ray m={m} of ({n},{q}) {table} is singular")
                })?;
                checks += 1;
            }
            // A ray aimed at a lattice vertex must be flagged.
            let aimed = RationalRay {
                p0: RationalPoint::new(
                    Rat::new(1, 1) - Rat::new(q as i128, 2),
                    Rat::new(1, 1) - Rat::new((n - q) as i128, 2),
                ),
                v0: RationalPoint::new(
                    Rat::from_integer(q as i128),
                    Rat::from_integer((n - q) as i128),
                ),
            };
            if !aimed.p0.is_vertex() {
                let horizon = 4 * (n as usize) + 8;
                let singular =
                    geom::is_singular(&model, &aimed, horizon).map_err(|e| e.to_string())?;
                check(singular, || {
                    format!("vertex-aimed ray of ({n},{q}) {table} not flagged")
                })?;
                checks += 1;
            }
        }
    }
    Ok(checks)
}

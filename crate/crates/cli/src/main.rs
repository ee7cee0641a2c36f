//! `redproof`: generate formulas, build and check refutations, transform
//! proofs between systems, and query a brute-force oracle.

use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use redproof::builders::{self, Family};
use redproof::formats::{self, DimacsOptions, ProofFormat};
use redproof::gens::{self, GadgetMeta, Graph, VarLayout};
use redproof::proofsys::{proof_stats, pigeon_width, Checker, Proof, Verdict, VerifyReport};
use redproof::transforms;
use redproof::{oracle, Clause, Formula, Rule, SystemSpec, Var};

/// `println!` that exits quietly once stdout is closed (e.g. piped into `head`).
macro_rules! say {
    ($($t:tt)*) => {
        if let Err(e) = writeln!(io::stdout(), $($t)*) {
            stdout_failed(e);
        }
    };
}

fn stdout_failed(e: io::Error) -> ! {
    if e.kind() == io::ErrorKind::BrokenPipe {
        std::process::exit(0);
    }
    eprintln!("redproof: stdout: {e}");
    std::process::exit(2);
}

#[derive(Parser)]
#[command(name = "redproof", version, about = "Redundancy-based refutations: generate, build, check, transform")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a formula in DIMACS.
    Gen(GenArgs),
    /// Write a formula and its refutation.
    Build(BuildArgs),
    /// Replay a proof against a formula.
    Check(CheckArgs),
    /// Apply a proof transformation.
    Transform(TransformArgs),
    /// Proof statistics.
    Stats(StatsArgs),
    /// Truth-table queries on small formulas.
    Oracle(OracleArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SystemArg {
    Bc,
    Rat,
    Spr,
    Pr,
    Sr,
}

impl SystemArg {
    fn rule(self) -> Rule {
        match self {
            SystemArg::Bc => Rule::Bc,
            SystemArg::Rat => Rule::Rat,
            SystemArg::Spr => Rule::Spr,
            SystemArg::Pr => Rule::Pr,
            SystemArg::Sr => Rule::Sr,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Native,
    Drat,
    Pr,
}

impl From<FormatArg> for ProofFormat {
    fn from(f: FormatArg) -> ProofFormat {
        match f {
            FormatArg::Native => ProofFormat::Native,
            FormatArg::Drat => ProofFormat::Drat,
            FormatArg::Pr => ProofFormat::Pr,
        }
    }
}

#[derive(Args, Clone)]
struct SystemFlags {
    /// Strongest redundancy rule allowed.
    #[arg(long, value_enum, default_value = "sr")]
    system: SystemArg,
    #[arg(long, overrides_with = "no_deletion")]
    allow_deletion: bool,
    #[arg(long, overrides_with = "allow_deletion")]
    no_deletion: bool,
    #[arg(long, overrides_with = "no_new_vars")]
    allow_new_vars: bool,
    #[arg(long, overrides_with = "allow_new_vars")]
    no_new_vars: bool,
}

impl SystemFlags {
    fn spec(&self) -> SystemSpec {
        SystemSpec::new(self.system.rule(), !self.no_deletion, !self.no_new_vars)
    }
}

#[derive(Args)]
struct GenArgs {
    /// php N | bphp K | parity N | cc N M | tseitin GRAPH.. | xm M | orify | xorify | lift
    family: String,
    params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Input formula for the gadget families.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Variable the gadget replaces.
    #[arg(long)]
    var: Option<Var>,
    /// Gadget size (m for orify/xorify, ℓ for lift).
    #[arg(long)]
    size: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    /// php N | php-dsr N | bphp K | parity N | cc N M | tseitin GRAPH.. | undo
    family: String,
    params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Gadget formula for `undo`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Gadget metadata for `undo` (defaults to INPUT.gadget.json).
    #[arg(long)]
    meta: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "native")]
    format: FormatArg,
    /// Writes PREFIX.cnf and PREFIX.proof instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// DIMACS formula; without it, stdin holds the formula followed by the proof.
    formula: Option<PathBuf>,
    /// Proof file; stdin when absent.
    proof: Option<PathBuf>,
    #[command(flatten)]
    system: SystemFlags,
    #[arg(long, value_enum, default_value = "native")]
    format: FormatArg,
    /// Accept proofs that never derive ⊥.
    #[arg(long)]
    prefix: bool,
    #[arg(long)]
    porcelain: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Pass {
    /// DPR⁻ to DRAT⁻.
    DprToDrat,
    /// PR⁻ to SPR⁻ by expanding discrepancy.
    PrToSpr,
    /// Bridges variable reuse with unit clauses.
    NormalizeReuse,
    /// Extended resolution to BC⁻ over Γ ∪ X^m.
    ErToBc,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(value_enum)]
    pass: Pass,
    formula: PathBuf,
    proof: PathBuf,
    #[command(flatten)]
    system: SystemFlags,
    /// Input proof format (ER proofs have their own format).
    #[arg(long = "in-format", value_enum, default_value = "native")]
    in_format: FormatArg,
    /// Output proof format.
    #[arg(long, value_enum, default_value = "native")]
    format: FormatArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    porcelain: bool,
}

#[derive(Args)]
struct StatsArgs {
    proof: PathBuf,
    #[arg(long, value_enum, default_value = "native")]
    format: FormatArg,
    /// Pigeon-width profile for `php:N` or `bphp:K` variable layouts.
    #[arg(long)]
    layout: Option<String>,
    #[arg(long)]
    porcelain: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Query {
    Sat,
    Count,
    Implies,
    Equisat,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_enum)]
    query: Query,
    formula: PathBuf,
    /// Second formula for `equisat`.
    other: Option<PathBuf>,
    /// Clause for `implies`, as DIMACS literals.
    #[arg(long, allow_hyphen_values = true)]
    clause: Option<String>,
    #[arg(long)]
    porcelain: bool,
}

/// Exit 2 with a message.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

type Outcome = Result<ExitCode, Usage>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Build(a) => build(a),
        Cmd::Check(a) => check(a),
        Cmd::Transform(a) => transform(a),
        Cmd::Stats(a) => stats(a),
        Cmd::Oracle(a) => run_oracle(a),
    };
    match r {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("redproof: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Usage> {
    fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn read_formula(path: &Path) -> Result<Formula, Usage> {
    formats::parse_dimacs(&read(path)?).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Usage> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                stdout_failed(e);
            }
            Ok(())
        }
    }
}

fn num<T: std::str::FromStr>(params: &[String], k: usize, what: &str) -> Result<T, Usage> {
    let s = params.get(k).ok_or_else(|| Usage(format!("missing parameter {what}")))?;
    s.parse().map_err(|_| Usage(format!("{what}: expected a number, got {s:?}")))
}

fn no_extra(params: &[String], used: usize) -> Result<(), Usage> {
    if params.len() > used {
        return Err(Usage(format!("unexpected parameter {:?}", params[used])));
    }
    Ok(())
}

/// `k N`, `grid A B`, `wheel N`, `regular N D` (seeded) or `file PATH`.
fn graph_spec(params: &[String], seed: u64) -> Result<(Graph, Vec<bool>), Usage> {
    let kind = params.first().ok_or_else(|| Usage("tseitin needs a graph: k N | grid A B | wheel N | regular N D | file PATH".into()))?;
    let rest = &params[1..];
    let (g, charge) = match kind.as_str() {
        "k" | "complete" => {
            no_extra(rest, 1)?;
            (gens::complete(num(rest, 0, "N")?), None)
        }
        "grid" => {
            no_extra(rest, 2)?;
            (gens::grid(num(rest, 0, "A")?, num(rest, 1, "B")?), None)
        }
        "wheel" => {
            no_extra(rest, 1)?;
            (gens::wheel(num(rest, 0, "N")?), None)
        }
        "regular" => {
            no_extra(rest, 2)?;
            (gens::random_regular(num(rest, 0, "N")?, num(rest, 1, "D")?, seed)?, None)
        }
        "file" => {
            no_extra(rest, 1)?;
            Graph::parse(&read(Path::new(&rest[0]))?)?
        }
        other => return Err(Usage(format!("unknown graph kind {other:?}"))),
    };
    let charge = charge.unwrap_or_else(|| gens::default_charge(g.num_vertices()));
    Ok((g, charge))
}

fn family_formula(family: &str, params: &[String], seed: u64) -> Result<Formula, Usage> {
    Ok(match family {
        "php" | "php-dsr" => {
            no_extra(params, 1)?;
            let n: usize = num(params, 0, "N")?;
            if n < 1 {
                return Err(Usage("php needs N ≥ 1".into()));
            }
            gens::gen_php(n)
        }
        "bphp" => {
            no_extra(params, 1)?;
            let k: usize = num(params, 0, "K")?;
            if !(1..=12).contains(&k) {
                return Err(Usage("bphp needs 1 ≤ K ≤ 12".into()));
            }
            gens::gen_bphp(k)
        }
        "parity" => {
            no_extra(params, 1)?;
            gens::gen_parity(num(params, 0, "N")?)?
        }
        "cc" => {
            no_extra(params, 2)?;
            gens::gen_cc(num(params, 0, "N")?, num(params, 1, "M")?)?
        }
        "tseitin" => {
            let (g, ch) = graph_spec(params, seed)?;
            gens::gen_tseitin(&g, &ch)?
        }
        "xm" => {
            no_extra(params, 2)?;
            let m: usize = num(params, 0, "M")?;
            let offset: Var = if params.len() > 1 { num(params, 1, "OFFSET")? } else { 1 };
            if m < 1 || offset < 1 {
                return Err(Usage("xm needs M ≥ 1 and OFFSET ≥ 1".into()));
            }
            gens::gen_xm(m, offset)
        }
        other => return Err(Usage(format!("unknown family {other:?}"))),
    })
}

fn sidecar(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".gadget.json");
    PathBuf::from(s)
}

fn gen(a: GenArgs) -> Outcome {
    if matches!(a.family.as_str(), "orify" | "xorify" | "lift") {
        let input = a.input.as_ref().ok_or_else(|| Usage("gadgets need --input".into()))?;
        let out = a.output.as_ref().ok_or_else(|| Usage("gadgets need -o (the metadata goes next to it)".into()))?;
        let x = a.var.ok_or_else(|| Usage("gadgets need --var".into()))?;
        let size = a.size.ok_or_else(|| Usage("gadgets need --size".into()))?;
        no_extra(&a.params, 0)?;
        let g = read_formula(input)?;
        let (gp, meta) = match a.family.as_str() {
            "orify" => gens::orify(&g, x, size)?,
            "xorify" => gens::xorify(&g, x, size)?,
            _ => gens::lift_index(&g, x, size)?,
        };
        write_out(Some(out), &formats::write_dimacs(&gp))?;
        write_out(Some(&sidecar(out)), &(meta.to_json() + "\n"))?;
        return Ok(ExitCode::SUCCESS);
    }
    let g = family_formula(&a.family, &a.params, a.seed)?;
    write_out(a.output.as_deref(), &formats::write_dimacs(&g))?;
    Ok(ExitCode::SUCCESS)
}

fn build(a: BuildArgs) -> Outcome {
    let (g, pf) = if a.family == "undo" {
        no_extra(&a.params, 0)?;
        let input = a.input.as_ref().ok_or_else(|| Usage("undo needs --input".into()))?;
        let meta_path = a.meta.clone().unwrap_or_else(|| sidecar(input));
        let g = read_formula(input)?;
        let meta = GadgetMeta::from_json(&read(&meta_path)?)?;
        let pf = builders::undo_gadget(&g, &meta)?;
        (g, pf)
    } else {
        let g = family_formula(&a.family, &a.params, a.seed)?;
        let pf = match (a.family.as_str(), Family::parse(&a.family)) {
            ("php-dsr", _) => builders::build_php_dsr(num(&a.params, 0, "N")?),
            (_, Some(Family::Php)) => builders::build_php_spr(num(&a.params, 0, "N")?),
            (_, Some(Family::Bphp)) => builders::build_bphp_spr(num(&a.params, 0, "K")?),
            (_, Some(Family::Parity)) => builders::build_parity_spr(num(&a.params, 0, "N")?)?,
            (_, Some(Family::Cc)) => builders::build_cc_spr(num(&a.params, 0, "N")?, num(&a.params, 1, "M")?)?,
            (_, Some(Family::Tseitin)) => {
                let (gr, ch) = graph_spec(&a.params, a.seed)?;
                builders::build_tseitin_spr(&gr, &ch)?
            }
            _ => return Err(Usage(format!("no builder for {:?}", a.family))),
        };
        (g, pf)
    };
    let proof = formats::write_proof(&pf, a.format.into())?;
    let cnf = formats::write_dimacs(&g);
    match &a.output {
        Some(prefix) => {
            let with = |ext: &str| {
                let mut s = prefix.as_os_str().to_owned();
                s.push(ext);
                PathBuf::from(s)
            };
            write_out(Some(&with(".cnf")), &cnf)?;
            write_out(Some(&with(".proof")), &proof)?;
        }
        None => write_out(None, &(cnf + &proof))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn print_report(r: &VerifyReport, spec: SystemSpec, porcelain: bool, prefix: bool) -> ExitCode {
    let ok = r.accepted() || (prefix && r.verdict == Verdict::Incomplete);
    if porcelain {
        let verdict = match &r.verdict {
            Verdict::Accepted => json!({"verdict": "accepted"}),
            Verdict::Incomplete => json!({"verdict": "incomplete"}),
            Verdict::Rejected { step, reason } => json!({"verdict": "rejected", "step": step, "reason": reason.to_string()}),
        };
        say!("{}", json!({"record": "verdict", "system": spec.to_string(), "result": verdict}));
        say!("{}", json!({"record": "counts", "steps": r.steps_checked, "counts": r.counts}));
        say!(
            "{}",
            json!({"record": "size", "max_width": r.max_width, "literal_volume": r.literal_volume, "max_pigeon_width": r.max_pigeon_width})
        );
    } else {
        match &r.verdict {
            Verdict::Accepted => say!("ACCEPTED refutation under {spec}"),
            Verdict::Incomplete if prefix => say!("ACCEPTED prefix under {spec} (no empty clause)"),
            Verdict::Incomplete => say!("INCOMPLETE under {spec}: every step is valid but the empty clause is never derived"),
            Verdict::Rejected { step, reason } => say!("REJECTED under {spec} at step {step}: {reason}"),
        }
        let c = &r.counts;
        say!(
            "steps {}  rup {}  bc {}  rat {}  spr {}  pr {}  sr {}  delete {}",
            r.steps_checked, c.rup, c.bc, c.rat, c.spr, c.pr, c.sr, c.delete
        );
        say!("max width {}  literals {}", r.max_width, r.literal_volume);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Replays proof lines one at a time, so memory stays with the live clause set.
fn replay<R: BufRead>(ch: &mut Checker, lines: R, fmt: ProofFormat, first_line: usize) -> Result<Verdict, Usage> {
    let mut step = 0usize;
    for (k, line) in lines.lines().enumerate() {
        let line = line?;
        let Some(s) = fmt.parse_line(&line, first_line + k)? else { continue };
        if let Err(reason) = ch.step(&s) {
            return Ok(Verdict::Rejected { step, reason });
        }
        step += 1;
        if ch.is_refuted() {
            return Ok(Verdict::Accepted);
        }
    }
    Ok(if ch.is_refuted() { Verdict::Accepted } else { Verdict::Incomplete })
}

fn check(a: CheckArgs) -> Outcome {
    let spec = a.system.spec();
    let fmt: ProofFormat = a.format.into();
    let (ch, verdict) = match (&a.formula, &a.proof) {
        (None, _) => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            let (g, off) = formats::parse_dimacs_prefix(&text, DimacsOptions::default())?;
            let first = text[..off].lines().count() + 1;
            let mut ch = Checker::new(&g, spec);
            let v = replay(&mut ch, &text.as_bytes()[off..], fmt, first)?;
            (ch, v)
        }
        (Some(f), p) => {
            let g = read_formula(f)?;
            let mut ch = Checker::new(&g, spec);
            let v = match p {
                Some(p) => {
                    let file = fs::File::open(p).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
                    replay(&mut ch, BufReader::new(file), fmt, 1)?
                }
                None => replay(&mut ch, io::stdin().lock(), fmt, 1)?,
            };
            (ch, v)
        }
    };
    let r = ch.report(verdict);
    Ok(print_report(&r, spec, a.porcelain, a.prefix))
}

fn transform(a: TransformArgs) -> Outcome {
    let g = read_formula(&a.formula)?;
    let text = read(&a.proof)?;
    let (g_out, pf): (Option<Formula>, Proof) = match a.pass {
        Pass::ErToBc => {
            let er = formats::parse_er_proof(&text)?;
            let (g2, pf) = transforms::er_to_bc_nnv(&g, &er)?;
            (Some(g2), pf)
        }
        pass => {
            let input = formats::parse_proof(&text, a.in_format.into())?;
            let pf = match pass {
                Pass::DprToDrat => transforms::dpr_to_drat_nnv(&g, &input)?,
                Pass::PrToSpr => transforms::pr_to_spr_disc(&g, &input)?,
                Pass::NormalizeReuse => transforms::normalize_variable_reuse(&g, &input, a.system.spec())?,
                Pass::ErToBc => unreachable!(),
            };
            if a.porcelain {
                eprintln!("{}", json!({"record": "blowup", "input": input.len(), "output": pf.len(), "ratio": transforms::blowup(input.len(), pf.len())}));
            }
            (None, pf)
        }
    };
    let proof = formats::write_proof(&pf, a.format.into())?;
    let text = match g_out {
        Some(g2) => formats::write_dimacs(&g2) + &proof,
        None => proof,
    };
    write_out(a.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_layout(s: &str) -> Result<VarLayout, Usage> {
    let (kind, n) = s.split_once(':').ok_or_else(|| Usage("layout is php:N or bphp:K".into()))?;
    let n: usize = n.parse().map_err(|_| Usage(format!("bad layout size {n:?}")))?;
    match kind {
        "php" if n >= 1 => Ok(VarLayout::Php(gens::PhpLayout { n })),
        "bphp" if n >= 1 => Ok(VarLayout::Bphp(gens::BphpLayout { k: n })),
        _ => Err(Usage(format!("unsupported layout {s:?}"))),
    }
}

fn stats(a: StatsArgs) -> Outcome {
    let pf = formats::parse_proof(&read(&a.proof)?, a.format.into())?;
    let st = proof_stats(&pf);
    let profile = match &a.layout {
        Some(l) => {
            let layout = parse_layout(l)?;
            let mut hist: Vec<usize> = Vec::new();
            for s in pf.iter().filter(|s| s.is_addition()) {
                let w = pigeon_width(s.clause(), |v| layout.pigeon_of(v))
                    .map_err(|v| Usage(format!("variable {v} is outside the layout")))?;
                if hist.len() <= w {
                    hist.resize(w + 1, 0);
                }
                hist[w] += 1;
            }
            Some(hist)
        }
        None => None,
    };
    if a.porcelain {
        say!("{}", json!({"record": "stats", "stats": st}));
        if let Some(h) = &profile {
            say!("{}", json!({"record": "pigeon_width", "histogram": h}));
        }
    } else {
        say!("steps {}  rup {}  pivot {}  assignment {}  substitution {}  delete {}", st.steps, st.rup, st.pivot, st.assignment, st.substitution, st.delete);
        say!("literals {}  max width {}", st.literals, st.max_width);
        if let Some(h) = &profile {
            say!("pigeon width profile (width: added clauses)");
            for (w, c) in h.iter().enumerate().filter(|(_, &c)| c > 0) {
                say!("  {w}: {c}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

const ORACLE_VARS: usize = 20;

fn small(g: &Formula, path: &Path) -> Result<(), Usage> {
    let n = g.vars().len();
    if n > ORACLE_VARS {
        return Err(Usage(format!("{}: {n} variables, the oracle takes at most {ORACLE_VARS}", path.display())));
    }
    Ok(())
}

fn run_oracle(a: OracleArgs) -> Outcome {
    let g = read_formula(&a.formula)?;
    small(&g, &a.formula)?;
    let (key, value) = match a.query {
        Query::Sat => ("satisfiable", json!(oracle::is_satisfiable(&g)?)),
        Query::Count => ("models", json!(oracle::count_models(&g)?)),
        Query::Implies => {
            let text = a.clause.as_ref().ok_or_else(|| Usage("implies needs --clause".into()))?;
            let lits: Vec<i32> = text
                .split_whitespace()
                .map(|t| t.parse::<i32>())
                .collect::<Result<_, _>>()
                .map_err(|_| Usage(format!("bad clause {text:?}")))?;
            let lits: Vec<i32> = lits.into_iter().filter(|&l| l != 0).collect();
            let c = Clause::new(lits.iter().map(|&l| redproof::Lit::new(l)))?;
            ("implied", json!(oracle::implies(&g, &c)?))
        }
        Query::Equisat => {
            let p = a.other.as_ref().ok_or_else(|| Usage("equisat needs a second formula".into()))?;
            let h = read_formula(p)?;
            small(&h, p)?;
            ("equisatisfiable", json!(oracle::equisatisfiable(&g, &h)?))
        }
    };
    if a.porcelain {
        let mut rec = serde_json::Map::new();
        rec.insert("record".into(), json!("oracle"));
        rec.insert(key.into(), value);
        say!("{}", serde_json::Value::Object(rec));
    } else {
        say!("{key}: {value}");
    }
    Ok(ExitCode::SUCCESS)
}

use std::fs;
use std::io::{self, BufReader, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subrepair::audit::{self, CoalitionView, PosteriorTable, ViewJson};
use subrepair::bounds::{self, BoundInput};
use subrepair::protocol::Secret;
use subrepair::sim::{self, Cluster, StateSource};
use subrepair::{
    ClientState, CodeSpec, Codeword, Error, FieldConfig, FieldCtx, FieldElem, ResamplePolicy,
    Scheme, SchemeParams,
};

#[derive(Parser)]
#[command(
    name = "subrepair",
    version,
    about = "Private repair and retrieval for Reed-Solomon codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a message and write one `{alpha, value}` line per node.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated element indices.
        #[arg(long)]
        message: String,
        /// Treat the message as the first k codeword symbols.
        #[arg(long)]
        systematic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repair one erased symbol.
    Repair(SessionArgs),
    /// Privately fetch one symbol, querying every node.
    Retrieve(SessionArgs),
    /// Audit a coalition view, or every view with --batch.
    Audit(AuditArgs),
    /// Bandwidth of the scheme against the lower bounds.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        t: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u32,
        /// Number of helpers, at most n - 1.
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Bandwidth and bounds as the helper budget grows, as CSV.
    Sweep {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u32,
        /// Inclusive range `LO..HI`.
        #[arg(long)]
        d: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Preset (gf4, gf8, gf16, gf16/4, gf256, gf9) or a field JSON file.
    #[arg(long, default_value = "gf8")]
    field: String,
    /// Code length; the first n field elements are the evaluation points.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: usize,
}

#[derive(Args, Clone)]
struct SessionArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// plain, hidden-subspace or secret-sharing (ignored by retrieve).
    #[arg(long, default_value = "secret-sharing")]
    scheme: String,
    #[arg(long)]
    beta: u32,
    /// Collusion threshold; defaults to 0 for plain and 1 otherwise.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mask coefficients R_0..R_(t-1) instead of drawing them.
    #[arg(long)]
    mask: Option<String>,
    /// Stored data as message coefficients.
    #[arg(long, conflicts_with = "codeword")]
    message: Option<String>,
    /// Stored data as a codeword file.
    #[arg(long)]
    codeword: Option<PathBuf>,
    /// Exit with status 3 unless the recovered value equals this index.
    #[arg(long)]
    expect: Option<u32>,
    /// Audit what the coalition saw.
    #[arg(long)]
    audit: bool,
    /// Coalition for --audit; defaults to the first t non-target nodes.
    #[arg(long)]
    coalition: Option<String>,
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Write the coalition view as JSON.
    #[arg(long)]
    view: Option<PathBuf>,
    /// Also render elements as polynomials.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args, Clone)]
struct AuditArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, default_value = "secret-sharing")]
    scheme: String,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// View JSON as written by `repair --view`.
    #[arg(long, required_unless_present = "batch")]
    view: Option<PathBuf>,
    /// Audit every reachable view of every coalition up to this size.
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Validation(String),
    Mismatch(String),
    Audit(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let res = run(cli.command, &mut out);
    out.flush().ok();
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Mismatch(_) => 3,
            Failure::Audit(_) => 4,
            Failure::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m)
            | Failure::Mismatch(m)
            | Failure::Audit(m)
            | Failure::Internal(m) => m,
        }
    }
}

fn run(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Encode {
            code,
            message,
            systematic,
            out: path,
        } => encode(&code, &message, systematic, path, out),
        Command::Repair(args) => {
            let scheme: Scheme = args.scheme.parse()?;
            if scheme == Scheme::Retrieval {
                return Err(Failure::Validation(
                    "use the retrieve command for retrieval".into(),
                ));
            }
            session(&args, scheme, out)
        }
        Command::Retrieve(args) => session(&args, Scheme::Retrieval, out),
        Command::Audit(args) => audit_cmd(&args, out),
        Command::Bounds {
            n,
            k,
            t,
            q,
            ell,
            d,
            json,
        } => {
            let mut input = BoundInput::new(n, k, t, q, ell)?;
            if let Some(d) = d {
                input = input.with_helpers(d)?;
            }
            let r = bounds::report(&input);
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&r).map_err(Error::from)?
                )?;
            } else {
                let scheme = r.scheme.map_or("none".to_string(), |b| b.to_string());
                writeln!(
                    out,
                    "scheme={scheme} m={} naive={} fractional={:.3} integer={} attained={}",
                    r.m, r.naive, r.fractional.value, r.integer, r.attained
                )?;
            }
            Ok(())
        }
        Command::Sweep {
            k,
            t,
            q,
            ell,
            d,
            out: path,
        } => {
            let rows = bounds::sweep(k, t, q, ell, parse_range(&d)?)?;
            emit(path.as_deref(), &bounds::sweep_csv(&rows), out)
        }
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, Failure> {
    let bad = || Failure::Validation(format!("expected a range LO..HI, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn parse_elems(f: &FieldCtx, s: &str) -> Result<Vec<FieldElem>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            let v: u64 = x
                .trim()
                .parse()
                .map_err(|_| Failure::Validation(format!("bad element {x:?}")))?;
            Ok(f.elem(v)?)
        })
        .collect()
}

fn load_field(spec: &str) -> Result<FieldCtx, Failure> {
    let cfg = match FieldConfig::preset(spec) {
        Some(c) => c,
        None => {
            let text = fs::read_to_string(spec).map_err(|e| {
                Failure::Validation(format!(
                    "field {spec:?} is neither a preset nor a readable file: {e}"
                ))
            })?;
            FieldConfig::from_json(&text)?
        }
    };
    Ok(cfg.build()?)
}

fn load_code(args: &CodeArgs) -> Result<CodeSpec, Failure> {
    let f = load_field(&args.field)?;
    let n = args.n.unwrap_or(f.order() as usize);
    Ok(CodeSpec::first_n(f, n, args.k)?)
}

fn encode(
    args: &CodeArgs,
    message: &str,
    systematic: bool,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> CmdResult {
    let code = load_code(args)?;
    let msg = parse_elems(code.field(), message)?;
    let cw = if systematic {
        code.encode_systematic(&msg)?
    } else {
        code.encode(&msg)?
    };
    let mut buf = Vec::new();
    cw.write_jsonl(&code, &mut buf)?;
    emit(
        path.as_deref(),
        &String::from_utf8(buf).expect("json is utf-8"),
        out,
    )
}

fn default_t(scheme: Scheme, t: Option<usize>) -> usize {
    t.unwrap_or(if scheme == Scheme::Plain { 0 } else { 1 })
}

fn elem_text(f: &FieldCtx, x: FieldElem, verbose: bool) -> String {
    if verbose {
        format!("{} ({})", x.0, f.render(x))
    } else {
        x.0.to_string()
    }
}

fn session(args: &SessionArgs, scheme: Scheme, out: &mut dyn Write) -> CmdResult {
    let code = load_code(&args.code)?;
    let f = code.field().clone();
    let t = default_t(scheme, args.t);
    let params = SchemeParams::new(scheme, code.clone(), args.m, t)?;
    let codeword = match (&args.message, &args.codeword) {
        (Some(m), _) => code.encode(&parse_elems(&f, m)?)?,
        (None, Some(p)) => Codeword::read_jsonl(&code, BufReader::new(fs::File::open(p)?))?,
        (None, None) => return Err(Failure::Validation("give --message or --codeword".into())),
    };
    let beta = f.elem(args.beta as u64)?;
    let state = match &args.mask {
        Some(m) => ClientState::with_secret(&params, beta, Secret::Mask(parse_elems(&f, m)?))?,
        None => ClientState::draw(&params, beta, args.seed, ResamplePolicy::Resample)?,
    };
    let coalition = match &args.coalition {
        Some(c) => parse_elems(&f, c)?,
        None if args.audit || args.view.is_some() => code
            .alphas()
            .iter()
            .copied()
            .filter(|&a| scheme == Scheme::Retrieval || a != beta)
            .take(t.max(1))
            .collect(),
        None => Vec::new(),
    };
    let cluster = Cluster::from_codeword(params.clone(), codeword);
    let s = sim::run_session_with(&cluster, &state, &coalition, args.seed)?;
    let tr = &s.transcript;
    let recovered = FieldElem(tr.recovered);

    writeln!(
        out,
        "scheme={scheme} field={} n={} k={} m={} t={t} seed={}{}",
        args.code.field,
        code.n(),
        code.k(),
        args.m,
        args.seed,
        if args.mask.is_some() {
            " mask=explicit"
        } else {
            ""
        }
    )?;
    writeln!(
        out,
        "beta={} recovered={}",
        elem_text(&f, beta, args.verbose),
        elem_text(&f, recovered, args.verbose)
    )?;
    writeln!(
        out,
        "download={} sub-symbols upload={} symbols naive={} sub-symbols",
        tr.bandwidth_down_subsymbols,
        tr.bandwidth_up_symbols,
        code.naive_retrieval_bandwidth()
    )?;
    if args.verbose {
        for node in &tr.nodes {
            let q: Vec<String> = node
                .query
                .iter()
                .map(|&e| elem_text(&f, FieldElem(e), true))
                .collect();
            writeln!(
                out,
                "  node {}: query [{}] response {:?}",
                node.alpha,
                q.join(", "),
                node.response
            )?;
        }
    }
    if let Some(p) = &args.transcript {
        fs::write(
            p,
            serde_json::to_string_pretty(tr).map_err(Error::from)? + "\n",
        )?;
    }
    if let Some(p) = &args.view {
        fs::write(
            p,
            serde_json::to_string_pretty(&s.view.to_json()).map_err(Error::from)? + "\n",
        )?;
    }

    let mut audit_failed = None;
    if args.audit {
        let report = audit::audit(&params, &s.view)?;
        let total = report.candidates.len();
        let counts: Vec<String> = report
            .candidates
            .iter()
            .map(|(b, c)| format!("{b}:{c}"))
            .collect();
        writeln!(
            out,
            "coalition={:?} posterior {} over {total} candidates [{}]",
            report.coalition,
            if report.uniform {
                "uniform"
            } else {
                "NOT uniform"
            },
            counts.join(" ")
        )?;
        if let Some(c) = &report.conditioned {
            let counts: Vec<String> = c
                .candidates
                .iter()
                .map(|(b, c)| format!("{b}:{c}"))
                .collect();
            writeln!(
                out,
                "conditioned on R(beta)!=0: {} [{}]",
                if c.uniform { "uniform" } else { "not uniform" },
                counts.join(" ")
            )?;
        }
        if !report.uniform {
            let support = PosteriorTable::from_counts(report.candidates.clone()).support();
            audit_failed = Some(format!(
                "coalition {:?} narrows the target to {support:?}",
                report.coalition
            ));
        }
    }
    if let Some(want) = args.expect {
        if want != tr.recovered {
            return Err(Failure::Mismatch(format!(
                "recovered {} but expected {want}",
                tr.recovered
            )));
        }
    }
    match audit_failed {
        Some(m) => Err(Failure::Audit(m)),
        None => Ok(()),
    }
}

fn audit_cmd(args: &AuditArgs, out: &mut dyn Write) -> CmdResult {
    let code = load_code(&args.code)?;
    let scheme: Scheme = args.scheme.parse()?;
    let t = default_t(scheme, args.t);
    let params = SchemeParams::new(scheme, code, args.m, t)?;
    if let Some(max) = args.batch {
        let summary = sim::batch_audit(&params, max, &StateSource::Exhaustive)?;
        let text = serde_json::to_string_pretty(&summary).map_err(Error::from)? + "\n";
        emit(args.out.as_deref(), &text, out)?;
        writeln!(
            out,
            "batch audit {}: {} coalitions, {} views, worst ratio {}",
            if summary.pass { "pass" } else { "FAIL" },
            summary.coalitions,
            summary.views,
            summary.worst_ratio
        )?;
        return if summary.pass {
            Ok(())
        } else {
            Err(Failure::Audit("a coalition view is not uniform".into()))
        };
    }
    let path = args.view.as_ref().expect("required by clap");
    let v: ViewJson = serde_json::from_str(&fs::read_to_string(path)?).map_err(Error::from)?;
    let view = CoalitionView::from_json(&params, &v)?;
    let report = audit::audit(&params, &view)?;
    let text = serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n";
    emit(args.out.as_deref(), &text, out)?;
    if report.uniform {
        Ok(())
    } else {
        Err(Failure::Audit("posterior is not uniform".into()))
    }
}

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use connexp::algebra::{parse_rat, rat_to_decimal};
use connexp::expansion::{Evaluator, ExpansionEvaluation};
use connexp::models::{gargantuan_probe, list_models, ModelParams, Verdict};
use connexp::oracle::Oracle;
use connexp::species::d_coefficients;
use connexp::verify::{run, Suite, VerifyOptions};
use connexp::{BigRat, Error, ModelSpec, PolyQ, Rho, RingTag};

#[derive(Parser, Debug)]
#[command(name = "connexp", version, about = "Exact connectivity expansions for labeled structures")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Significant digits of decimal renderings.
    #[arg(long, global = true, default_value_t = 12)]
    digits: usize,
    /// Worker threads for enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expansion coefficients, or term values at a size.
    Expand(ExpandArgs),
    /// Exact probability of m components, with the leading term.
    Exact(ExactArgs),
    /// Recompute golden tables and identities.
    Verify(VerifyArgs),
    /// Exhaustive enumeration histograms.
    Oracle(OracleArgs),
    /// Finite-window growth diagnostic.
    Probe(ProbeArgs),
    /// List the model catalog.
    Models,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    #[arg(long)]
    model: String,
    /// Edge probability as an exact rational; sets rho = p/(1-p).
    #[arg(long, value_parser = rational, conflicts_with_all = ["p_decimal", "rho"])]
    p: Option<BigRat>,
    /// Edge probability as a terminating decimal, converted exactly.
    #[arg(long = "p-decimal", value_parser = rational, conflicts_with = "rho")]
    p_decimal: Option<BigRat>,
    #[arg(long, value_parser = rational)]
    rho: Option<BigRat>,
    /// Polygon perimeter for p_angulations.
    #[arg(long = "P")]
    polygon: Option<u32>,
    /// Dimension for gem.
    #[arg(long = "D")]
    dim: Option<u32>,
    /// Edge multiplicity for multigraphs.
    #[arg(long)]
    d: Option<u32>,
}

impl ModelArgs {
    fn rho(&self) -> Result<Option<BigRat>, Error> {
        if let Some(p) = self.p.as_ref().or(self.p_decimal.as_ref()) {
            return match Rho::from_probability(p)? {
                Rho::Value(r) => Ok(Some(r)),
                Rho::Symbolic => Ok(None),
            };
        }
        match &self.rho {
            Some(r) => Rho::value(r.clone()).map(|_| Some(r.clone())),
            None => Ok(None),
        }
    }

    fn spec(&self) -> Result<ModelSpec, Error> {
        let params = ModelParams {
            rho: self.rho()?.map(Rho::Value),
            polygon: self.polygon,
            dim: self.dim,
            d: self.d,
        };
        ModelSpec::from_id(&self.model, &params)
    }
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Raw structure size (a multiple of the model's stride).
    #[arg(long, alias = "size", conflicts_with = "range")]
    n: Option<usize>,
    /// Size range `a..b` (inclusive) for a convergence report.
    #[arg(long, value_parser = size_range)]
    range: Option<(usize, usize)>,
    #[arg(long, default_value_t = 4)]
    order: usize,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, alias = "size")]
    n: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 4)]
    kmax: usize,
    #[arg(long, default_value_t = 12)]
    order: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Graphs,
    Ties,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    k: usize,
    /// Override the enumeration size cap.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 40)]
    nmax: usize,
}

fn rational(s: &str) -> Result<BigRat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn size_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got `{s}`"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

enum Failure {
    Usage(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::UnknownModel(_)
            | Error::OffStride { .. }
            | Error::OverCap { .. }
            | Error::Parse(_)
            | Error::ZeroWeight(_) => Failure::Usage(e.to_string()),
            other => Failure::Computation(other.to_string()),
        }
    }
}

type CmdResult = Result<Output, Failure>;

struct Output {
    json: Value,
    csv: Vec<String>,
    text: Vec<String>,
    ok: bool,
}

impl Output {
    fn new(json: Value, csv: Vec<String>, text: Vec<String>) -> Self {
        Output {
            json,
            csv,
            text,
            ok: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Expand(a) => expand(&cli, a),
        Command::Exact(a) => exact(&cli, a),
        Command::Verify(a) => verify(&cli, a),
        Command::Oracle(a) => oracle(&cli, a),
        Command::Probe(a) => probe(&cli, a),
        Command::Models => Ok(models()),
    };
    match result {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&out.json).expect("values serialize")
                }
                Format::Csv => out.csv.join("\n"),
                Format::Text => out.text.join("\n"),
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{body}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn probe_warning(model: &ModelSpec, rho: Option<&BigRat>) -> Option<String> {
    let size = 24 * model.stride();
    match gargantuan_probe(model, size, rho) {
        Ok(r) if r.verdict != Verdict::Pass => Some(format!(
            "warning: growth probe on sizes <= {size} returned `{}`; the expansion may not be asymptotic",
            r.verdict.as_str()
        )),
        _ => None,
    }
}

fn expand(cli: &Cli, a: &ExpandArgs) -> CmdResult {
    let model = a.model.spec()?;
    let rho = a.model.rho()?;
    if let Some(w) = probe_warning(&model, rho.as_ref()) {
        eprintln!("{w}");
    }
    if let Some((lo, hi)) = a.range {
        let ev = Evaluator::new(&model, rho.as_ref(), hi)?;
        let report = ev.convergence_report(a.m, lo..=hi, a.order)?;
        let mut csv = vec!["model,m,order,n,residual,next_term,ratio".to_string()];
        let mut text = vec![format!(
            "{} m={} order={} bounded={} (bound {})",
            report.model, report.m, report.order, report.bounded, report.bound
        )];
        for r in &report.rows {
            let ratio = r
                .ratio
                .as_ref()
                .map(|x| rat_to_decimal(x, cli.digits))
                .unwrap_or_else(|| "inf".into());
            csv.push(format!(
                "{},{},{},{},{},{},{}",
                report.model, report.m, report.order, r.n, r.residual, r.next_term, ratio
            ));
            text.push(format!(
                "n={:<4} residual={} next={} ratio={ratio}",
                r.n,
                rat_to_decimal(&r.residual, cli.digits),
                rat_to_decimal(&r.next_term, cli.digits)
            ));
        }
        return Ok(Output::new(report.to_json(cli.digits), csv, text));
    }
    match a.n {
        Some(n) => {
            let ev = Evaluator::new(&model, rho.as_ref(), n)?;
            let e = ev.evaluate(a.m, n, a.order)?;
            Ok(Output::new(e.to_json(cli.digits), expansion_csv(&e), expansion_text(&e, cli.digits)))
        }
        None => coefficient_table(&model, rho.as_ref(), a.m, a.order),
    }
}

fn coefficient_table(model: &ModelSpec, rho: Option<&BigRat>, m: usize, k_max: usize) -> CmdResult {
    let model = match rho {
        Some(r) if model.is_weighted() => model.with_rho(r.clone())?,
        _ => model.clone(),
    };
    let (d, json_d): (Vec<String>, Value) = match model.ring() {
        RingTag::PolynomialInRho => {
            let t = d_coefficients::<PolyQ>(&model, m, k_max)?;
            (t.d.iter().map(|p| p.to_string()).collect(), t.to_json())
        }
        RingTag::Rational => {
            let t = d_coefficients::<BigRat>(&model, m, k_max)?;
            (t.d.iter().map(|p| p.to_string()).collect(), t.to_json())
        }
    };
    let p = model.stride();
    let csv = std::iter::once("model,m,index,d".to_string())
        .chain(d.iter().enumerate().map(|(k, v)| format!("{},{m},{},{v}", model.id(), p * k)))
        .collect();
    let text = d
        .iter()
        .enumerate()
        .map(|(k, v)| format!("d_{{{},{m}}} = {v}", p * k))
        .collect();
    Ok(Output::new(json_d, csv, text))
}

fn expansion_csv(e: &ExpansionEvaluation) -> Vec<String> {
    std::iter::once(ExpansionEvaluation::CSV_HEADER.to_string())
        .chain(e.csv_rows())
        .collect()
}

fn expansion_text(e: &ExpansionEvaluation, digits: usize) -> Vec<String> {
    let mut lines = vec![format!(
        "{} m={} n={} order={}{}",
        e.model,
        e.m,
        e.n,
        e.order,
        e.rho.as_ref().map(|r| format!(" rho={r}")).unwrap_or_default()
    )];
    for j in 0..e.terms.len() {
        lines.push(format!(
            "k={:<3} d={:<16} term={:<22} partial={:<22} residual={}",
            e.stride * j,
            e.d[j].to_string(),
            rat_to_decimal(&e.terms[j], digits),
            rat_to_decimal(&e.partial_sums[j], digits),
            rat_to_decimal(&e.residuals[j], digits)
        ));
    }
    if let Some(x) = &e.exact {
        lines.push(format!("exact = {x} ~ {}", rat_to_decimal(x, digits)));
    }
    lines
}

fn exact(cli: &Cli, a: &ExactArgs) -> CmdResult {
    let model = a.model.spec()?;
    let rho = a.model.rho()?;
    let ev = Evaluator::new(&model, rho.as_ref(), a.n)?;
    let p = ev.exact_probability(a.m, a.n)?;
    let leading = if a.m >= 1 {
        ev.leading_term(a.m, a.n).ok()
    } else {
        None
    };
    let json = json!({
        "model": model.id(),
        "m": a.m,
        "n": a.n,
        "rho": rho.as_ref().map(|r| r.to_string()),
        "exact": p.to_string(),
        "exact_decimal": rat_to_decimal(&p, cli.digits),
        "leading_term": leading.as_ref().map(|l| l.to_json(cli.digits)),
    });
    let csv = vec![
        "model,m,n,exact,leading_value,leading_form_value".to_string(),
        format!(
            "{},{},{},{},{},{}",
            model.id(),
            a.m,
            a.n,
            p,
            leading.as_ref().map(|l| l.value.to_string()).unwrap_or_default(),
            leading.as_ref().map(|l| l.form_value.to_string()).unwrap_or_default()
        ),
    ];
    let mut text = vec![format!(
        "P({} has {} components, size {}) = {p} ~ {}",
        model.id(),
        a.m,
        a.n,
        rat_to_decimal(&p, cli.digits)
    )];
    if let Some(l) = &leading {
        text.push(format!(
            "leading term = {} ~ {}",
            l.value,
            rat_to_decimal(&l.value, cli.digits)
        ));
        text.push(format!(
            "asymptotic form {} = {}",
            l.form,
            rat_to_decimal(&l.form_value, cli.digits)
        ));
    }
    Ok(Output::new(json, csv, text))
}

fn verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let suite = Suite::parse(&a.suite)?;
    let opts = VerifyOptions {
        k_max: a.kmax,
        order: a.order,
        oracle: Oracle::with_threads(cli.threads),
    };
    let report = run(suite, &opts)?;
    let csv = std::iter::once("suite,name,pass".to_string())
        .chain(report.items.iter().map(|i| format!("{},\"{}\",{}", i.suite, i.name, i.pass)))
        .collect();
    let mut text: Vec<String> = report.items.iter().map(|i| i.line()).collect();
    text.push(format!("{}/{} passed", report.passed(), report.items.len()));
    let mut out = Output::new(report.to_json(), csv, text);
    out.ok = report.all_pass();
    if !out.ok {
        for item in report.items.iter().filter(|i| !i.pass) {
            eprintln!("{}", item.line());
        }
    }
    Ok(out)
}

fn oracle(cli: &Cli, a: &OracleArgs) -> CmdResult {
    let mut o = Oracle::with_threads(cli.threads);
    if let Some(cap) = a.cap {
        o.graph_cap = cap;
        o.tie_cap = cap;
    }
    let h = match a.family {
        Family::Graphs => o.enumerate_graph_components(a.k)?,
        Family::Ties => o.enumerate_tournament_components(a.k)?,
    };
    let csv = std::iter::once("k,components,weight".to_string())
        .chain(h.buckets.iter().map(|(c, w)| format!("{},{c},{w}", h.k)))
        .collect();
    let text = h.buckets.iter().map(|(c, w)| format!("{c}: {w}")).collect();
    Ok(Output::new(h.to_json(), csv, text))
}

fn probe(cli: &Cli, a: &ProbeArgs) -> CmdResult {
    let model = a.model.spec()?;
    let rho = a.model.rho()?;
    let r = gargantuan_probe(&model, a.nmax, rho.as_ref())?;
    let csv = std::iter::once("k,ratio".to_string())
        .chain(r.cond_i_ratios.iter().enumerate().map(|(i, x)| {
            format!(
                "{},{}",
                i + 1,
                x.as_ref().map(|x| rat_to_decimal(x, cli.digits)).unwrap_or_default()
            )
        }))
        .collect();
    let text = vec![
        format!("{} (sizes <= {}, stride {}): {}", r.model, r.n_max, r.stride, r.verdict.as_str()),
        format!("condition (i) flagged: {}", r.cond_i_flagged),
        format!("condition (ii) violations: {}", r.cond_ii_violations.len()),
        r.note.to_string(),
    ];
    Ok(Output::new(r.to_json(cli.digits), csv, text))
}

fn models() -> Output {
    let entries = list_models();
    let json = Value::Array(entries.iter().map(|e| e.to_json()).collect());
    let csv = std::iter::once("id,kind,stride,weights".to_string())
        .chain(
            entries
                .iter()
                .map(|e| format!("{},{},\"{}\",\"{}\"", e.id, e.kind.as_str(), e.stride, e.weights)),
        )
        .collect();
    let text = entries
        .iter()
        .map(|e| {
            let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}: {v}")).collect();
            format!("{:<20} {} stride {:<24} a_n = {}  {}", e.id, e.kind, e.stride, e.weights, params.join("; "))
        })
        .collect();
    Output::new(json, csv, text)
}

use std::fmt::Write as _;
use std::path::Path;

use masspart::partition::compensated_sum;
use masspart::stattest::{check_assumption1, ram_sequences, ram_theoretical_slope, Assumption1Report, APPROX_SIGNIFICANCE, EXACT_SIGNIFICANCE};
use masspart::{derive_seed, make_stream};
use serde::Serialize;

use crate::args::{CheckArgs, Cli, Command, Common, Component, EquivArgs, LawArgs, SampleArgs};
use crate::config::OutputFormat;
use crate::report::{emit, to_json, TestReport};
use crate::representation::{resolve, ParamSet, Representation, Sampler};
use crate::runner::run_replicas;
use crate::suite::{excursion_tests, occupation_tests, run_suite, xi_tests, Ctx};
use crate::{CliError, Outcome, RunConfig, VERSION};

type Res<T> = Result<T, CliError>;

/// Default replica count of the statistical commands.
pub const DEFAULT_REPLICAS: usize = 100_000;
/// Default replica count of `sample`.
pub const DEFAULT_SAMPLE_REPLICAS: usize = 1000;

pub fn run(cli: Cli) -> Res<Outcome> {
    match cli.command {
        Command::Sample(a) => cmd_sample(&a),
        Command::Equiv(a) => cmd_equiv(&a),
        Command::Excursion(a) => cmd_law(&a, LawKind::Excursion),
        Command::Arcsine(a) => cmd_law(&a, LawKind::Arcsine),
        Command::CheckAssumption(a) => cmd_check_assumption(&a),
        Command::Suite(a) => cmd_suite(&json_config(&a.common, DEFAULT_REPLICAS)?),
    }
}

fn json_config(common: &Common, default_replicas: usize) -> Res<RunConfig> {
    let cfg = common.to_config(default_replicas, OutputFormat::Json)?;
    if cfg.output_format != OutputFormat::Json {
        return Err(CliError::Usage("reports are written as JSON only".into()));
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct Provenance<'a> {
    representation: &'a str,
    params: &'a Sampler,
    seed: String,
    version: &'static str,
    k: usize,
    points: usize,
}

#[derive(Serialize)]
struct SampleRow {
    replica: u64,
    atoms: Vec<f64>,
    residual: f64,
}

#[derive(Serialize)]
struct SampleFile<'a> {
    #[serde(flatten)]
    provenance: Provenance<'a>,
    rows: Vec<SampleRow>,
}

fn sample_label(rep: Representation) -> String {
    format!("sample/{rep}")
}

pub fn cmd_sample(a: &SampleArgs) -> Res<Outcome> {
    let cfg = a.common.to_config(DEFAULT_SAMPLE_REPLICAS, OutputFormat::Csv)?;
    if a.k == 0 {
        return Err(CliError::Usage("-k must be at least 1".into()));
    }
    let sampler = resolve(a.representation, &a.params.into())?;
    let seed = derive_seed(cfg.master_seed, &sample_label(a.representation));
    let rows = run_replicas(cfg.replicas, cfg.workers, |i| -> Res<SampleRow> {
        let p = sampler.draw(a.k, a.points, &mut make_stream(seed, i))?;
        let atoms = p.atoms()[..a.k].to_vec();
        let residual = compensated_sum(p.atoms()[a.k..].iter().copied().chain([p.residual()]));
        Ok(SampleRow { replica: i, atoms, residual })
    })
    .into_iter()
    .collect::<Res<Vec<_>>>()?;
    let provenance = Provenance {
        representation: a.representation.name(),
        params: &sampler,
        seed: format!("{:#x}", cfg.master_seed),
        version: VERSION,
        k: a.k,
        points: a.points,
    };
    let text = match cfg.output_format {
        OutputFormat::Json => to_json(&SampleFile { provenance, rows }),
        OutputFormat::Csv => sample_csv(&provenance, &rows),
    };
    emit(&text, cfg.output_path.as_deref())?;
    Ok(Outcome::Pass)
}

fn sample_csv(p: &Provenance, rows: &[SampleRow]) -> String {
    let params = serde_json::to_string(p.params).expect("params serialize");
    let mut s = format!(
        "# params={params} seed={} version={} representation={} points={}\nreplica",
        p.seed, p.version, p.representation, p.points
    );
    for i in 1..=p.k {
        write!(s, ",atom_{i}").unwrap();
    }
    s.push_str(",residual\n");
    for r in rows {
        write!(s, "{}", r.replica).unwrap();
        for x in &r.atoms {
            write!(s, ",{x}").unwrap();
        }
        writeln!(s, ",{}", r.residual).unwrap();
    }
    s
}

fn component_value(atoms: &[f64], c: Component) -> f64 {
    match c {
        Component::Atom1 => atoms[0],
        Component::Atom2 => atoms[1],
        Component::Total => atoms[0] + atoms[1],
    }
}

pub fn cmd_equiv(a: &EquivArgs) -> Res<Outcome> {
    let cfg = json_config(&a.common, DEFAULT_REPLICAS)?;
    let sa = resolve(a.rep_a, &ParamSet::from(a.params))?;
    let sb = resolve(a.rep_b, &a.params_b())?;
    let la = format!("equiv/a/{}", a.rep_a);
    let lb = format!("equiv/b/{}", a.rep_b);
    let ctx = Ctx::new(&cfg);
    let draw = |s: &Sampler, label: &str| {
        ctx.column(label, |st| Ok(component_value(&s.size_biased_atoms(2, a.points, st).map_err(core_err)?, a.component)))
    };
    let xa = draw(&sa, &la)?;
    let xb = draw(&sb, &lb)?;
    let default = if sa.is_exact() && sb.is_exact() { EXACT_SIGNIFICANCE } else { APPROX_SIGNIFICANCE };
    let name = format!("{} vs {} on {:?}", a.rep_a, a.rep_b, a.component).to_lowercase();
    let report = ctx.ks2(name, [&la, &lb], &xa, &xb, ctx.gate(default, 1))?;
    emit(&to_json(&report), cfg.output_path.as_deref())?;
    Ok(Outcome::from_passed(report.passed))
}

/// Sampler errors inside replica closures are core errors; anything else
/// there is a bug in parameter resolution.
fn core_err(e: CliError) -> masspart::Error {
    match e {
        CliError::Core(c) => c,
        other => masspart::Error::Parse(other.to_string()),
    }
}

#[derive(Debug, Clone, Copy)]
enum LawKind {
    Excursion,
    Arcsine,
}

#[derive(Serialize)]
struct LawReport {
    command: &'static str,
    alpha: f64,
    seed: String,
    replicas: usize,
    version: &'static str,
    passed: bool,
    tests: Vec<TestReport>,
}

fn cmd_law(a: &LawArgs, kind: LawKind) -> Res<Outcome> {
    let cfg = json_config(&a.common, DEFAULT_REPLICAS)?;
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(CliError::Usage(format!("--alpha must satisfy 0 < alpha < 1 (got {})", a.alpha)));
    }
    if a.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let ctx = Ctx::new(&cfg);
    let (command, tests) = match kind {
        LawKind::Excursion => ("excursion", excursion_tests(&ctx, a.alpha, a.points)?),
        LawKind::Arcsine => {
            let mut t = xi_tests(&ctx, a.alpha, a.points, 2)?;
            t.extend(occupation_tests(&ctx, a.alpha)?);
            ("arcsine", t)
        }
    };
    let report = LawReport {
        command,
        alpha: a.alpha,
        seed: format!("{:#x}", cfg.master_seed),
        replicas: cfg.replicas,
        version: VERSION,
        passed: tests.iter().all(|t| t.passed),
        tests,
    };
    emit(&to_json(&report), cfg.output_path.as_deref())?;
    Ok(Outcome::from_passed(report.passed))
}

#[derive(Serialize)]
struct AssumptionOutput {
    source: String,
    theoretical_slope: Option<f64>,
    #[serde(flatten)]
    report: Assumption1Report,
}

/// Reads `a,b` columns from a CSV file with a header row.
pub fn read_sequences(path: &Path) -> Res<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_sequences(&text)
}

pub fn parse_sequences(text: &str) -> Res<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| CliError::Usage(format!("bad CSV header: {e}")))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("CSV needs a `{name}` column")))
    };
    let (ia, ib) = (col("a")?, col("b")?);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Usage(format!("bad CSV row {}: {e}", line + 1)))?;
        let get = |i: usize| -> Res<f64> {
            record
                .get(i)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| CliError::Usage(format!("bad number in CSV row {}", line + 1)))
        };
        a.push(get(ia)?);
        b.push(get(ib)?);
    }
    Ok((a, b))
}

pub fn cmd_check_assumption(a: &CheckArgs) -> Res<Outcome> {
    let (source, slope, (seq_a, seq_b)) = match &a.input {
        Some(path) => (path.display().to_string(), None, read_sequences(path)?),
        None => {
            let Sampler::RamStick { params } = resolve(Representation::RamStick, &a.params.into())? else {
                unreachable!("ram-stick resolves to RAM parameters")
            };
            if a.k < 2 {
                return Err(CliError::Usage("-k must be at least 2".into()));
            }
            let source = format!("RAM({}, {}, {})", params.alpha(), params.a1(), params.c());
            (source, ram_theoretical_slope(&params), ram_sequences(&params, a.k))
        }
    };
    let report = check_assumption1(&seq_a, &seq_b)?;
    let passed = report.cond_i_ok;
    let out = AssumptionOutput { source, theoretical_slope: slope, report };
    emit(&to_json(&out), a.out.as_deref())?;
    Ok(Outcome::from_passed(passed))
}

pub fn cmd_suite(cfg: &RunConfig) -> Res<Outcome> {
    let report = run_suite(cfg)?;
    for g in &report.groups {
        for t in g.failures() {
            eprintln!("FAIL group {} ({}): {} statistic={} p={:?}", g.group, g.title, t.test_name, t.statistic, t.p_value);
        }
    }
    emit(&to_json(&report), cfg.output_path.as_deref())?;
    Ok(Outcome::from_passed(report.passed))
}

//! Argument parsing and the five subcommands.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use infolattice::{
    chowliu_tree, dirac_distance, expand_divergence, find_pseudometric_witness, gaussian_distance,
    graph_distance_direct, graph_distance_report, graph_distribution, independence_distance, mi_weighted_graph,
    multi_information, omega_decomposition, poisson_distance, reference_distance, truncated_approximation,
    truncation_divergence, uniform, uniform_distance, ClosedForm, Divergence, DistanceResult, Error,
    GaussianParams, Grid, InfoProfile, JointDistribution, LogBase, ReferenceMetricSpec, Schema, SearchFamily,
    Subset, Unit, WeightedGraph,
};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::docs::{distribution_to_doc, graph_to_doc};
use crate::error::{CliError, CliResult};
use crate::input::{load_distributions, load_inputs, Input, Loaded, Parsing};
use crate::number::to_precise_json;
use crate::render::render_table;
use crate::samples::LabeledSchema;

/// Largest `--max-subset` accepted without a cost warning.
pub const SUBSET_WARN: usize = 6;

/// Exit status for a completed run whose headline value is infinite.
pub const EXIT_INFINITE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "infolattice", version, about = "Information lattices, divergence expansions and reference metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropies, interaction informations and multi-information.
    Measures(MeasuresArgs),
    /// Degree-by-degree expansion of D(P||Q).
    Expand(ExpandArgs),
    /// Truncated approximation of order m and the convergence profile.
    Approx(ApproxArgs),
    /// Reference-function distance between two distributions.
    Dist(DistArgs),
    /// Distance between two dependence graphs.
    Graphdist(GraphdistArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Bits,
    Nats,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Bits => LogBase::Bits,
            BaseArg::Nats => LogBase::Nats,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Table,
    Doc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReferenceArg {
    Empirical,
    Uniform,
    Gaussian,
    Dirac,
    Poisson,
}

#[derive(Debug, Clone, Args)]
pub struct ParseOpts {
    /// Schema document fixing variable order, cardinalities and level tokens.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Sample files are tab-delimited.
    #[arg(long)]
    pub tab: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputOpts {
    /// Logarithm base of reported values.
    #[arg(long, value_enum)]
    pub base: Option<BaseArg>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct MeasuresArgs {
    /// Sample file or distribution document.
    #[arg(long)]
    pub input: PathBuf,
    /// Largest subset size swept (default min(n, 6)).
    #[arg(long)]
    pub max_subset: Option<usize>,
    #[command(flatten)]
    pub parse: ParseOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("against").required(true).args(["input2", "m"])))]
pub struct ExpandArgs {
    /// The true distribution P.
    #[arg(long)]
    pub input: PathBuf,
    /// The approximating distribution Q.
    #[arg(long)]
    pub input2: Option<PathBuf>,
    /// Expand against P's own order-m truncation instead of Q.
    #[arg(short = 'm', long = "m")]
    pub m: Option<usize>,
    #[command(flatten)]
    pub parse: ParseOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct ApproxArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Truncation order.
    #[arg(short = 'm', long = "m")]
    pub m: usize,
    #[command(flatten)]
    pub parse: ParseOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[arg(long, value_enum)]
    pub reference: ReferenceArg,
    /// R (discrete references).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// S (discrete references).
    #[arg(long)]
    pub input2: Option<PathBuf>,
    /// The reference distribution P for `--reference empirical`.
    #[arg(long)]
    pub ref_input: Option<PathBuf>,
    /// Reference mean (gaussian, dirac).
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Reference standard deviation (gaussian).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Reference rate (poisson).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu1: Option<f64>,
    #[arg(long)]
    pub sigma1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu2: Option<f64>,
    #[arg(long)]
    pub sigma2: Option<f64>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    /// Evaluate the alternate closed form (gaussian, dirac).
    #[arg(long)]
    pub alternate_form: bool,
    /// Comma-separated variable names: distance of R from the product of
    /// R(names) and R(rest).
    #[arg(long, conflicts_with = "input2")]
    pub split: Option<String>,
    /// Search a one-parameter family for distinct members at distance zero.
    #[arg(long, conflicts_with = "split")]
    pub witness: bool,
    /// Lower end of the witness search range.
    #[arg(long, allow_negative_numbers = true, requires = "witness")]
    pub lo: Option<f64>,
    /// Upper end of the witness search range.
    #[arg(long, allow_negative_numbers = true, requires = "witness")]
    pub hi: Option<f64>,
    /// Witness grid size.
    #[arg(long, default_value_t = 200, requires = "witness")]
    pub points: usize,
    /// Seed for a sampled witness grid (an even grid when absent).
    #[arg(long, requires = "witness")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub parse: ParseOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct GraphdistArgs {
    /// Graph document, or data from which a Chow-Liu forest is built.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub input2: PathBuf,
    /// Data for factorizing a graph document given as `--input`.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Data for `--input2` (defaults to `--source`).
    #[arg(long)]
    pub source2: Option<PathBuf>,
    /// Edges with mutual information at or below this many bits are dropped
    /// when building graphs from data.
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
    #[command(flatten)]
    pub parse: ParseOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

/// Fully resolved settings of one run, echoed at the top of every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delimiter: Option<&'static str>,
    pub base: &'static str,
    pub format: &'static str,
    #[serde(flatten)]
    pub options: Map<String, Value>,
}

impl RunConfig {
    fn new(command: &'static str, base: LogBase, format: Format) -> Self {
        RunConfig {
            command,
            inputs: Map::new(),
            delimiter: None,
            base: base.as_str(),
            format: match format {
                Format::Table => "table",
                Format::Doc => "doc",
            },
            options: Map::new(),
        }
    }

    fn input(&mut self, role: &str, path: Option<&Path>) {
        if let Some(p) = path {
            self.inputs.insert(role.into(), p.display().to_string().into());
        }
    }

    fn parsing(&mut self, opts: &ParseOpts) {
        self.input("schema", opts.schema.as_deref());
        self.delimiter = Some(if opts.tab { "tab" } else { "comma" });
    }

    fn option(&mut self, key: &str, value: impl Into<Value>) {
        self.options.insert(key.into(), value.into());
    }
}

/// A finished report before rendering.
struct Report {
    config: RunConfig,
    format: Format,
    body: Map<String, Value>,
    code: i32,
    warnings: Vec<String>,
}

impl Report {
    fn new(config: RunConfig, format: Format) -> Self {
        Report {
            config,
            format,
            body: Map::new(),
            code: 0,
            warnings: Vec::new(),
        }
    }

    fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.body.insert(key.into(), value.into());
    }

    fn render(self) -> String {
        let mut doc = Map::new();
        doc.insert(
            "config".into(),
            serde_json::to_value(&self.config).expect("config serializes"),
        );
        doc.extend(self.body);
        let doc = Value::Object(doc);
        match self.format {
            Format::Doc => to_precise_json(&doc),
            Format::Table => render_table(&doc),
        }
    }
}

/// What a run writes and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            }
        }
    }
}

pub fn execute(command: &Command) -> Outcome {
    let result = match command {
        Command::Measures(a) => measures(a),
        Command::Expand(a) => expand(a),
        Command::Approx(a) => approx(a),
        Command::Dist(a) => dist(a),
        Command::Graphdist(a) => graphdist(a),
    };
    match result {
        Ok(report) => {
            let stderr = report.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
            let code = report.code;
            Outcome {
                stdout: report.render(),
                stderr,
                code,
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("{e}\n"),
            code: e.exit_code(),
        },
    }
}

fn base_or(opts: &OutputOpts, default: LogBase) -> LogBase {
    opts.base.map_or(default, LogBase::from)
}

fn one(path: &Path, parse: &ParseOpts) -> CliResult<Loaded> {
    let parsing = Parsing::new(parse.schema.as_deref(), parse.tab)?;
    Ok(load_distributions(&[path], &parsing)?.remove(0))
}

fn names(schema: &Schema, subset: Subset) -> String {
    subset
        .indices()
        .map(|i| schema.variables()[i].name.as_str())
        .collect::<Vec<_>>()
        .join(",")
}

/// State as `{name: token}` in schema order.
fn state_value(labels: &LabeledSchema, state: &[usize]) -> Value {
    let map: Map<String, Value> = labels
        .schema
        .variables()
        .iter()
        .zip(state)
        .enumerate()
        .map(|(v, (var, &x))| (var.name.clone(), labels.levels[v][x].clone().into()))
        .collect();
    Value::Object(map)
}

fn infinite(report: &mut Report, key: &str, labels: &LabeledSchema, state: &[usize]) {
    report.put(key, "infinite");
    report.put(&format!("{key}_state"), state_value(labels, state));
    report.code = EXIT_INFINITE;
}

fn measures(a: &MeasuresArgs) -> CliResult<Report> {
    let base = base_or(&a.output, LogBase::Bits);
    let data = one(&a.input, &a.parse)?;
    let n = data.dist.len();
    let k = match a.max_subset {
        Some(0) => return Err(CliError::Usage("--max-subset must be at least 1".into())),
        Some(k) => k.min(n),
        None => n.min(SUBSET_WARN),
    };
    let mut cfg = RunConfig::new("measures", base, a.output.format);
    cfg.input("input", Some(&a.input));
    cfg.parsing(&a.parse);
    cfg.option("max_subset", k);
    let mut report = Report::new(cfg, a.output.format);
    if k > SUBSET_WARN {
        report.warnings.push(format!(
            "--max-subset {k} sweeps every subset of up to {k} of {n} variables; cost grows as 3^n"
        ));
    }
    let schema = data.dist.schema();
    let profile = InfoProfile::compute(&data.dist, k).in_base(base);
    let mut subsets: Vec<Subset> = profile.entropies.keys().copied().collect();
    subsets.sort_by_key(|s| (s.len(), s.to_vec()));
    let rows: Vec<Value> = subsets
        .iter()
        .map(|s| {
            json!({
                "subset": s.to_vec(),
                "names": names(schema, *s),
                "entropy": profile.entropies[s],
                "interaction": profile.interactions[s],
            })
        })
        .collect();
    report.put("unit", base.as_str());
    report.put("schema", serde_json::to_value(crate::docs::schema_to_doc(&data.labels)).unwrap());
    if let Some(r) = data.rows {
        report.put("samples", r);
    }
    report.put("subsets", rows);
    let omega = multi_information(&data.dist, schema.full()).map_err(|e| CliError::domain(e, schema))?;
    report.put("multi_information", base.from_bits(omega));
    if k == n && n >= 2 {
        let dec = omega_decomposition(&data.dist, schema.full()).map_err(|e| CliError::domain(e, schema))?;
        let sums: Vec<Value> = dec
            .degree_sums
            .iter()
            .map(|&(k, s)| json!({"degree": k, "interaction_sum": base.from_bits(s)}))
            .collect();
        report.put("omega_degree_sums", sums);
    }
    Ok(report)
}

fn expand(a: &ExpandArgs) -> CliResult<Report> {
    let base = base_or(&a.output, LogBase::Bits);
    let parsing = Parsing::new(a.parse.schema.as_deref(), a.parse.tab)?;
    let mut cfg = RunConfig::new("expand", base, a.output.format);
    cfg.input("input", Some(&a.input));
    cfg.input("input2", a.input2.as_deref());
    cfg.parsing(&a.parse);
    if let Some(m) = a.m {
        cfg.option("m", m);
    }
    let mut report = Report::new(cfg, a.output.format);

    let (p, q, labels) = match &a.input2 {
        Some(path2) => {
            let mut both = load_distributions(&[&a.input, path2], &parsing)?;
            let q = both.pop().unwrap();
            let p = both.pop().unwrap();
            report.put("against", json!({"kind": "distribution", "input": path2.display().to_string()}));
            (p.dist, q.dist, p.labels)
        }
        None => {
            let m = a.m.expect("clap enforces --input2 or --m");
            let p = one(&a.input, &a.parse)?;
            let fam = truncated_approximation(&p.dist, m).map_err(|e| CliError::domain(e, p.dist.schema()))?;
            report.put("against", json!({"kind": "truncation", "m": m, "raw_z": fam.raw_z}));
            (p.dist, fam.approximation, p.labels)
        }
    };
    let r = expand_divergence(&p, &q).map_err(|e| CliError::domain(e, p.schema()))?;
    report.put("unit", base.as_str());
    report.put("true_entropy", base.from_bits(r.true_entropy));
    let degrees: Vec<Value> = (1..=r.order())
        .map(|m| {
            json!({
                "degree": m,
                "term": base.from_bits(r.degree_terms[m - 1]),
                "cumulative": base.from_bits(r.cumulative[m - 1]),
                "truncated_divergence": base.from_bits(r.truncated(m).unwrap()),
            })
        })
        .collect();
    report.put("degrees", degrees);
    match &r.divergence {
        Divergence::Finite(d) => {
            report.put("divergence", base.from_bits(*d));
            report.put("residual", base.from_bits(r.residual().unwrap_or(0.0)));
        }
        Divergence::Infinite { state } => infinite(&mut report, "divergence", &labels, state),
    }
    Ok(report)
}

fn approx(a: &ApproxArgs) -> CliResult<Report> {
    let base = base_or(&a.output, LogBase::Bits);
    let mut cfg = RunConfig::new("approx", base, a.output.format);
    cfg.input("input", Some(&a.input));
    cfg.parsing(&a.parse);
    cfg.option("m", a.m);
    let mut report = Report::new(cfg, a.output.format);
    let p = one(&a.input, &a.parse)?;
    let schema = p.dist.schema();
    let fam = truncated_approximation(&p.dist, a.m).map_err(|e| CliError::domain(e, schema))?;
    let td = truncation_divergence(&p.dist, a.m).map_err(|e| CliError::domain(e, schema))?;
    report.put("unit", base.as_str());
    report.put("order", a.m);
    let coefficients: Vec<Value> = fam
        .coefficients
        .iter()
        .map(|(&k, &c)| json!({"degree": k, "coefficient": c}))
        .collect();
    report.put("coefficients", coefficients);
    report.put("raw_z", fam.raw_z);
    report.put("divergence", base.from_bits(td.divergence));
    report.put("surrogate", base.from_bits(td.surrogate));
    report.put(
        "approximation",
        serde_json::to_value(distribution_to_doc(&fam.approximation, Some(&p.labels))).unwrap(),
    );
    let profile: Vec<Value> = (1..=p.dist.len())
        .map(|m| match truncation_divergence(&p.dist, m) {
            Ok(t) => Ok(json!({
                "order": m,
                "divergence": base.from_bits(t.divergence),
                "surrogate": base.from_bits(t.surrogate),
                "raw_z": t.raw_z,
            })),
            Err(Error::UndefinedApproximation { state }) => Ok(json!({
                "order": m,
                "divergence": "undefined",
                "state": state_value(&p.labels, &state),
            })),
            Err(e) => Err(CliError::domain(e, schema)),
        })
        .collect::<CliResult<_>>()?;
    report.put("convergence_profile", profile);
    Ok(report)
}

fn need(value: Option<f64>, flag: &str, reference: &str) -> CliResult<f64> {
    value.ok_or_else(|| CliError::Usage(format!("--reference {reference} requires --{flag}")))
}

fn gaussian(mean: Option<f64>, sd: Option<f64>, which: &str, reference: &str) -> CliResult<GaussianParams> {
    let mean = need(mean, &format!("mu{which}"), reference)?;
    let sd = need(sd, &format!("sigma{which}"), reference)?;
    GaussianParams::new(mean, sd).map_err(|e| CliError::Domain(e.to_string()))
}

fn reject_flags(a: &DistArgs, allowed: &[&str]) -> CliResult<()> {
    let given = [
        ("input", a.input.is_some()),
        ("input2", a.input2.is_some()),
        ("ref-input", a.ref_input.is_some()),
        ("mu", a.mu.is_some()),
        ("sigma", a.sigma.is_some()),
        ("lambda", a.lambda.is_some()),
        ("mu1", a.mu1.is_some()),
        ("sigma1", a.sigma1.is_some()),
        ("mu2", a.mu2.is_some()),
        ("sigma2", a.sigma2.is_some()),
        ("lambda1", a.lambda1.is_some()),
        ("lambda2", a.lambda2.is_some()),
        ("alternate-form", a.alternate_form),
        ("split", a.split.is_some()),
        ("schema", a.parse.schema.is_some()),
        ("tab", a.parse.tab),
    ];
    match given.iter().find(|(flag, set)| *set && !allowed.contains(flag)) {
        Some((flag, _)) => Err(CliError::Usage(format!(
            "--{flag} does not apply to --reference {}",
            reference_name(a.reference)
        ))),
        None => Ok(()),
    }
}

fn reference_name(r: ReferenceArg) -> &'static str {
    match r {
        ReferenceArg::Empirical => "empirical",
        ReferenceArg::Uniform => "uniform",
        ReferenceArg::Gaussian => "gaussian",
        ReferenceArg::Dirac => "dirac",
        ReferenceArg::Poisson => "poisson",
    }
}

const DISCRETE_FLAGS: [&str; 6] = ["input", "input2", "ref-input", "split", "schema", "tab"];

fn dist(a: &DistArgs) -> CliResult<Report> {
    let discrete = matches!(a.reference, ReferenceArg::Empirical | ReferenceArg::Uniform);
    let base = base_or(&a.output, if discrete { LogBase::Bits } else { LogBase::Nats });
    let unit = match base {
        LogBase::Bits => Unit::Bits,
        LogBase::Nats => Unit::Nats,
    };
    let name = reference_name(a.reference);
    let mut cfg = RunConfig::new("dist", base, a.output.format);
    cfg.option("reference", name);
    match a.reference {
        ReferenceArg::Empirical => reject_flags(a, &DISCRETE_FLAGS)?,
        ReferenceArg::Uniform => reject_flags(a, &["input", "input2", "split", "schema", "tab"])?,
        ReferenceArg::Gaussian => reject_flags(a, &["mu", "sigma", "mu1", "sigma1", "mu2", "sigma2", "alternate-form"])?,
        ReferenceArg::Dirac => reject_flags(a, &["mu", "mu1", "sigma1", "mu2", "sigma2", "alternate-form"])?,
        ReferenceArg::Poisson => reject_flags(a, &["lambda", "lambda1", "lambda2"])?,
    }
    if discrete {
        cfg.input("ref_input", a.ref_input.as_deref());
        cfg.input("input", a.input.as_deref());
        cfg.input("input2", a.input2.as_deref());
        cfg.parsing(&a.parse);
    }
    let form = if a.alternate_form { ClosedForm::Alternate } else { ClosedForm::Integral };
    for (k, v) in [("mu", a.mu), ("sigma", a.sigma), ("lambda", a.lambda)] {
        if let Some(v) = v {
            cfg.option(k, v);
        }
    }
    for (k, v) in [
        ("mu1", a.mu1),
        ("sigma1", a.sigma1),
        ("mu2", a.mu2),
        ("sigma2", a.sigma2),
        ("lambda1", a.lambda1),
        ("lambda2", a.lambda2),
    ] {
        if let Some(v) = v {
            cfg.option(k, v);
        }
    }
    if matches!(a.reference, ReferenceArg::Gaussian | ReferenceArg::Dirac) {
        cfg.option("form", if a.alternate_form { "alternate" } else { "integral" });
    }
    if let Some(split) = &a.split {
        cfg.option("split", split.as_str());
    }
    if a.witness {
        cfg.option("witness", true);
        cfg.option("points", a.points);
        cfg.option("seed", a.seed.map_or(Value::Null, Value::from));
    }
    let mut report = Report::new(cfg, a.output.format);
    report.put("unit", base.as_str());

    // Discrete inputs share one schema.
    let discrete_data = if discrete {
        let parsing = Parsing::new(a.parse.schema.as_deref(), a.parse.tab)?;
        let mut paths: Vec<&Path> = Vec::new();
        if a.reference == ReferenceArg::Empirical {
            paths.push(
                a.ref_input
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("--reference empirical requires --ref-input".into()))?,
            );
        }
        paths.extend(a.input.as_deref());
        paths.extend(a.input2.as_deref());
        let mut loaded = load_distributions(&paths, &parsing)?;
        let pref = (a.reference == ReferenceArg::Empirical).then(|| loaded.remove(0));
        Some((pref, loaded))
    } else {
        None
    };

    if a.witness {
        return witness(a, report, discrete_data);
    }

    let result = match a.reference {
        ReferenceArg::Gaussian => {
            let p = gaussian(a.mu, a.sigma, "", name)?;
            let r = gaussian(a.mu1, a.sigma1, "1", name)?;
            let s = gaussian(a.mu2, a.sigma2, "2", name)?;
            Ok(gaussian_distance(&p, &r, &s, form))
        }
        ReferenceArg::Dirac => {
            let mu = need(a.mu, "mu", name)?;
            let r = gaussian(a.mu1, a.sigma1, "1", name)?;
            let s = gaussian(a.mu2, a.sigma2, "2", name)?;
            Ok(dirac_distance(mu, &r, &s, form))
        }
        ReferenceArg::Poisson => {
            let lambda = need(a.lambda, "lambda", name)?;
            let l1 = need(a.lambda1, "lambda1", name)?;
            let l2 = need(a.lambda2, "lambda2", name)?;
            Ok(poisson_distance(lambda, l1, l2).map_err(|e| CliError::Domain(e.to_string()))?)
        }
        ReferenceArg::Empirical | ReferenceArg::Uniform => {
            let (pref, mut loaded) = discrete_data.expect("discrete inputs loaded");
            if loaded.is_empty() {
                return Err(CliError::Usage(format!("--reference {name} requires --input")));
            }
            let r = loaded.remove(0);
            let pref_dist = pref.as_ref().map(|l| &l.dist);
            let labels = r.labels.clone();
            if let Some(split) = &a.split {
                return independence(report, pref_dist, &r, split, unit);
            }
            let s = loaded
                .pop()
                .ok_or_else(|| CliError::Usage(format!("--reference {name} requires --input2 (or --split)")))?;
            let res = match pref_dist {
                Some(p) => reference_distance(p, &r.dist, &s.dist),
                None => uniform_distance(&r.dist, &s.dist),
            };
            match res {
                Err(Error::SupportViolation { state }) => {
                    infinite(&mut report, "value", &labels, &state);
                    return Ok(report);
                }
                other => other.map_err(|e| CliError::domain(e, r.dist.schema())),
            }
        }
    }?;
    put_distance(&mut report, result.to_unit(unit));
    Ok(report)
}

fn put_distance(report: &mut Report, d: DistanceResult) {
    report.put("value", d.value);
    report.put("signed_inner", d.signed_inner);
}

fn independence(
    mut report: Report,
    pref: Option<&JointDistribution>,
    r: &Loaded,
    split: &str,
    unit: Unit,
) -> CliResult<Report> {
    let schema = r.dist.schema();
    let idx: Vec<usize> = split
        .split(',')
        .map(|n| {
            schema
                .index_of(n.trim())
                .ok_or_else(|| CliError::Domain(format!("--split names unknown variable `{}`", n.trim())))
        })
        .collect::<CliResult<_>>()?;
    let subset = Subset::from_indices(&idx, schema.len()).map_err(|e| CliError::domain(e, schema))?;
    let uniform_ref;
    let pref = match pref {
        Some(p) => p,
        None => {
            uniform_ref = uniform(schema);
            &uniform_ref
        }
    };
    match independence_distance(pref, &r.dist, subset) {
        Ok(d) => {
            report.put("split", names(schema, subset));
            report.put("rest", names(schema, schema.full().difference(subset)));
            let (c, p) = (d.conditional_form.to_unit(unit), d.product_form.to_unit(unit));
            put_distance(&mut report, p);
            report.put("conditional_form", c.signed_inner);
            report.put("product_form", p.signed_inner);
            Ok(report)
        }
        Err(Error::SupportViolation { state }) => {
            infinite(&mut report, "value", &r.labels, &state);
            Ok(report)
        }
        Err(e) => Err(CliError::domain(e, schema)),
    }
}

fn witness(
    a: &DistArgs,
    mut report: Report,
    discrete: Option<(Option<Loaded>, Vec<Loaded>)>,
) -> CliResult<Report> {
    let name = reference_name(a.reference);
    let range = |lo: f64, hi: f64| (a.lo.unwrap_or(lo), a.hi.unwrap_or(hi));
    let (metric, family) = match a.reference {
        ReferenceArg::Poisson => {
            let metric = ReferenceMetricSpec::poisson(need(a.lambda, "lambda", name)?)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            let (lo, hi) = range(0.1, 5.0);
            (metric, SearchFamily::PoissonRates { lo, hi })
        }
        ReferenceArg::Gaussian | ReferenceArg::Dirac => {
            let mu = need(a.mu, "mu", name)?;
            let metric = if a.reference == ReferenceArg::Gaussian {
                ReferenceMetricSpec::Gaussian(gaussian(a.mu, a.sigma, "", name)?)
            } else {
                ReferenceMetricSpec::DiracDelta { mu }
            };
            let (lo, hi) = range(mu - 5.0, mu + 5.0);
            let std_dev = a.sigma1.unwrap_or(1.0);
            (metric, SearchFamily::GaussianMeans { std_dev, lo, hi })
        }
        ReferenceArg::Empirical | ReferenceArg::Uniform => {
            let (pref, mut loaded) = discrete.expect("discrete inputs loaded");
            let metric = match pref {
                Some(p) => ReferenceMetricSpec::Empirical(p.dist),
                None => ReferenceMetricSpec::UniformDiscrete,
            };
            let family = match (loaded.len(), a.lo, a.hi) {
                (2, None, None) => {
                    let b = loaded.pop().unwrap().dist;
                    SearchFamily::Mixture {
                        a: loaded.pop().unwrap().dist,
                        b,
                    }
                }
                (0, _, _) => {
                    let (lo, hi) = range(0.05, 0.95);
                    SearchFamily::Bernoulli { lo, hi }
                }
                _ => {
                    return Err(CliError::Usage(
                        "discrete witness search takes both --input and --input2, or neither".into(),
                    ))
                }
            };
            (metric, family)
        }
    };
    let grid = a.seed.map_or(Grid::Even, |seed| Grid::Sampled { seed });
    let found = find_pseudometric_witness(&metric, &family, a.points, grid)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    report.put("family", family_value(&family));
    report.put(
        "witness",
        found.map_or(Value::Null, |w| json!({"r": w.r, "s": w.s, "distance": w.distance})),
    );
    Ok(report)
}

fn family_value(f: &SearchFamily) -> Value {
    match *f {
        SearchFamily::PoissonRates { lo, hi } => json!({"kind": "poisson_rates", "lo": lo, "hi": hi}),
        SearchFamily::GaussianMeans { std_dev, lo, hi } => {
            json!({"kind": "gaussian_means", "std_dev": std_dev, "lo": lo, "hi": hi})
        }
        SearchFamily::Bernoulli { lo, hi } => json!({"kind": "bernoulli", "lo": lo, "hi": hi}),
        SearchFamily::Mixture { .. } => json!({"kind": "mixture", "lo": 0.0, "hi": 1.0}),
    }
}

fn graphdist(a: &GraphdistArgs) -> CliResult<Report> {
    let base = base_or(&a.output, LogBase::Bits);
    let mut cfg = RunConfig::new("graphdist", base, a.output.format);
    cfg.input("input", Some(&a.input));
    cfg.input("input2", Some(&a.input2));
    cfg.input("source", a.source.as_deref());
    cfg.input("source2", a.source2.as_deref());
    cfg.parsing(&a.parse);
    cfg.option("threshold", a.threshold);
    let mut report = Report::new(cfg, a.output.format);

    let parsing = Parsing::new(a.parse.schema.as_deref(), a.parse.tab)?;
    let mut paths: Vec<&Path> = vec![&a.input, &a.input2];
    paths.extend(a.source.as_deref());
    paths.extend(a.source2.as_deref());
    let mut inputs = load_inputs(&paths, &parsing)?.into_iter();
    let first = inputs.next().unwrap();
    let second = inputs.next().unwrap();
    let as_data = |path: Option<&PathBuf>, input: Option<Input>| match (path, input) {
        (Some(p), Some(Input::Graph(_))) => Err(CliError::Usage(format!("{}: a source must hold data", p.display()))),
        (_, Some(Input::Data(l))) => Ok(Some(l.dist)),
        _ => Ok(None),
    };
    let source = as_data(a.source.as_ref(), a.source.as_ref().and_then(|_| inputs.next()))?;
    let source2 = as_data(a.source2.as_ref(), a.source2.as_ref().and_then(|_| inputs.next()))?.or(source.clone());

    let resolve = |input: Input, fallback: Option<JointDistribution>| -> CliResult<(WeightedGraph, Option<JointDistribution>)> {
        match input {
            Input::Graph(g) => Ok((g, fallback)),
            Input::Data(l) => {
                let schema = l.dist.schema().clone();
                let g = mi_weighted_graph(&l.dist, a.threshold)
                    .and_then(|g| chowliu_tree(&g))
                    .map_err(|e| CliError::domain(e, &schema))?;
                Ok((g, Some(l.dist)))
            }
        }
    };
    let (g_r, src_r) = resolve(first, source)?;
    let (g_s, src_s) = resolve(second, source2)?;
    let schema = g_r.schema().clone();
    let mi = graph_distance_report(&g_r, &g_s, None).map_err(|e| CliError::domain(e, &schema))?;

    report.put("unit", base.as_str());
    report.put("nodes", g_r.node_names().collect::<Vec<_>>());
    report.put("mi_form", base.from_bits(mi.mi_form));
    let factorized = |g: &WeightedGraph, src: &Option<JointDistribution>| -> CliResult<Option<(JointDistribution, usize)>> {
        match (g.parents(), src) {
            (Some(_), Some(s)) => {
                let gd = graph_distribution(g, s).map_err(|e| CliError::domain(e, s.schema()))?;
                Ok(Some((gd.distribution, gd.undefined_states.len())))
            }
            _ => Ok(None),
        }
    };
    match (factorized(&g_r, &src_r)?, factorized(&g_s, &src_s)?) {
        (Some((d_r, u_r)), Some((d_s, u_s))) => {
            if u_r + u_s > 0 {
                report.warnings.push(format!(
                    "{} factorized states used a conditional on a zero-probability parent level",
                    u_r + u_s
                ));
            }
            match graph_distance_direct(&d_r, &d_s) {
                Ok(d) => {
                    report.put("direct_form", base.from_bits(d));
                    report.put("gap", base.from_bits(d - mi.mi_form));
                }
                Err(Error::SupportViolation { state }) => {
                    let labels = LabeledSchema::integer_coded(d_r.schema().clone());
                    infinite(&mut report, "direct_form", &labels, &state);
                }
                Err(e) => return Err(CliError::domain(e, &schema)),
            }
            report.put("undefined_states", json!({"r": u_r, "s": u_s}));
        }
        _ => {
            report.put("direct_form", Value::Null);
            report.put("direct_note", "needs parent maps on both graphs and a source distribution for each");
        }
    }
    let contributions: Vec<Value> = mi
        .contributions
        .iter()
        .map(|c| {
            json!({
                "i": c.i,
                "j": c.j,
                "edge": names(&schema, Subset::singleton(c.i).with(c.j)),
                "weight_r": base.from_bits(c.weight_r),
                "weight_s": base.from_bits(c.weight_s),
                "difference": base.from_bits(c.difference),
            })
        })
        .collect();
    report.put("contributions", contributions);
    report.put(
        "graphs",
        json!({"r": serde_json::to_value(graph_to_doc(&g_r)).unwrap(), "s": serde_json::to_value(graph_to_doc(&g_s)).unwrap()}),
    );
    Ok(report)
}

//! Command-line front end. [`run`] parses arguments, runs one subcommand
//! and returns the process exit code: 0 when everything checked is equal,
//! 1 when a mismatch was found (the report is still printed), 2 on usage or
//! engine errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use wwords::algebra::{euler_factorize, product_expand, ProductSpec, TruncatedSeries, Var};
use wwords::discovery::{condense, recognize_periodic_product, search_relations};
use wwords::enumerate::{enumerate_series, list_partitions, LIST_BOUND};
use wwords::recurrence::{builtin_equations, check_equation, dp_series, EquationSpec};
use wwords::systems::{
    build_preset, dilate_system, preset_names, ColouredSystem, DilationSpec, PresetParams, SmallPartConvention,
    SystemFile,
};
use wwords::verify::{
    coefficient_table, identity_case, identity_names, sampled_statistic_check, verify_identity, Engine, IdentityCase,
    SideA,
};
use wwords::{Error, Result};

pub const EXIT_EQUAL: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "wwords", version, about = "Exact q-series checks for coloured partition identities")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report wall-clock times (JSON output is then no longer reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Cap on enumeration nodes (same as WWORDS_NODE_LIMIT).
    #[arg(long, global = true)]
    pub node_limit: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Preset name or path to a system JSON file.
    pub system: String,
    /// Number of primary colours for the overpartition presets.
    #[arg(long)]
    pub r: Option<u32>,
    /// Reading of the small-part restrictions of the Siladić preset.
    #[arg(long)]
    pub convention: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List preset systems, registered identities and built-in equations.
    ListPresets,
    /// Print a system; with --format json, in the system-file form.
    Show {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Check an identity to a truncation order with several engines.
    Verify {
        identity: String,
        #[arg(long)]
        qmax: Option<usize>,
        #[arg(long)]
        degmax: Option<u32>,
        /// Comma-separated subset of enum, recurrence, product, dilation.
        #[arg(long)]
        engines: Option<String>,
        /// Replace the difference-condition side by this system file.
        #[arg(long)]
        system: Option<String>,
    },
    /// Expand an infinite product.
    Expand {
        /// Product JSON file, or the name of an identity whose product side to expand.
        #[arg(long)]
        product: String,
        #[arg(long)]
        qmax: usize,
        #[arg(long)]
        degmax: Option<u32>,
    },
    /// Generating function of a system, optionally listing the partitions of one size.
    Enumerate {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        qmax: usize,
        #[arg(long)]
        degmax: Option<u32>,
        /// List the partitions of this size.
        #[arg(long)]
        list: Option<usize>,
        /// Use the recurrences instead of direct enumeration.
        #[arg(long)]
        recurrence: bool,
    },
    /// Dilate a system: sizes k of colour x become modulus*k + offset(x).
    Dilate {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        modulus: u32,
        /// JSON object of per-variable shifts, e.g. '{"a":-1,"d":1}'.
        #[arg(long, default_value = "{}")]
        offsets: String,
    },
    /// Check a q-difference equation (built-in name or JSON file).
    CheckEq {
        equation: String,
        #[arg(long)]
        kmax: Option<i64>,
        #[arg(long, default_value_t = 20)]
        qmax: usize,
        /// Check against this system instead of the one the equation names.
        #[arg(long)]
        system: Option<String>,
    },
    /// Search colour relations that turn a system's generating function into a product.
    Discover {
        #[command(flatten)]
        system: SystemArgs,
        /// Comma-separated primary colours.
        #[arg(long)]
        primaries: String,
        #[arg(long, default_value_t = 2)]
        max_exponent: u32,
        #[arg(long, default_value_t = 18)]
        qmax: usize,
    },
    /// Factor a series (JSON coefficient table) as an Euler product.
    EulerFactor {
        #[arg(long)]
        series: String,
    },
    /// Check the statistics stated in words on a seeded sample of partitions.
    SampleStatistics {
        identity: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 40)]
        max_n: usize,
    },
}

/// Result of one subcommand: a JSON document, its text rendering and the
/// exit code.
struct Outcome {
    json: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn equal(json: Value, text: String) -> Self {
        Outcome {
            json,
            text,
            code: EXIT_EQUAL,
        }
    }

    fn verdict(json: Value, text: String, equal: bool) -> Self {
        Outcome {
            json,
            text,
            code: if equal { EXIT_EQUAL } else { EXIT_MISMATCH },
        }
    }
}

/// Runs the command line `args` (program name first), writing the report
/// to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
                return EXIT_EQUAL;
            }
            let _ = write!(err, "{rendered}");
            return EXIT_ERROR;
        }
    };
    if let Some(limit) = cli.global.node_limit {
        std::env::set_var("WWORDS_NODE_LIMIT", limit.to_string());
    }
    match execute(&cli) {
        Ok(o) => {
            let _ = match cli.global.format {
                Format::Json => writeln!(out, "{}", to_json(&o.json)),
                Format::Text => write!(out, "{}", o.text),
            };
            o.code
        }
        Err(e) => {
            if cli.global.format == Format::Json {
                let _ = writeln!(out, "{}", to_json(&json!({ "error": e.to_string() })));
            }
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::UnknownPreset(_)) {
                let _ = writeln!(err, "known names: {}", known_names().join(", "));
                let _ = writeln!(err, "\n{}", Cli::command().render_usage());
            }
            EXIT_ERROR
        }
    }
}

fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types always serialize")
}

fn known_names() -> Vec<String> {
    let mut names: Vec<String> = preset_names().iter().map(|s| s.to_string()).collect();
    names.extend(identity_names().iter().map(|s| s.to_string()));
    names
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::ListPresets => Ok(list_presets()),
        Command::Show { system } => {
            let sys = system_from(system)?;
            Ok(Outcome::equal(value(&SystemFile::from_system(&sys)), sys.to_string()))
        }
        Command::Verify {
            identity,
            qmax,
            degmax,
            engines,
            system,
        } => verify(g, identity, *qmax, *degmax, engines.as_deref(), system.as_deref()),
        Command::Expand { product, qmax, degmax } => expand(product, *qmax, *degmax),
        Command::Enumerate {
            system,
            qmax,
            degmax,
            list,
            recurrence,
        } => enumerate(system, *qmax, *degmax, *list, *recurrence),
        Command::Dilate {
            system,
            modulus,
            offsets,
        } => dilate(system, *modulus, offsets),
        Command::CheckEq {
            equation,
            kmax,
            qmax,
            system,
        } => check_eq(equation, *kmax, *qmax, system.as_deref()),
        Command::Discover {
            system,
            primaries,
            max_exponent,
            qmax,
        } => discover(system, primaries, *max_exponent, *qmax),
        Command::EulerFactor { series } => euler_factor(series),
        Command::SampleStatistics {
            identity,
            samples,
            max_n,
        } => sample_statistics(identity, *samples, g.seed, *max_n),
    }
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {path}: {e}")))
}

fn looks_like_file(arg: &str) -> bool {
    arg.ends_with(".json") || Path::new(arg).is_file()
}

fn load_system(arg: &str, params: &PresetParams) -> Result<ColouredSystem> {
    if looks_like_file(arg) {
        SystemFile::from_json(&read_file(arg)?)?.build()
    } else {
        build_preset(arg, params)
    }
}

fn system_from(args: &SystemArgs) -> Result<ColouredSystem> {
    let mut params = PresetParams::default();
    params.r = args.r;
    if let Some(c) = &args.convention {
        params.convention = SmallPartConvention::parse(c)?;
    }
    load_system(&args.system, &params)
}

fn list_presets() -> Outcome {
    let identities: Vec<Value> = identity_names()
        .iter()
        .filter_map(|n| identity_case(n).ok())
        .map(|c| {
            json!({
                "name": c.name,
                "description": c.description,
                "qmax": c.qmax,
                "degmax": c.degmax,
                "engines": c.applicable_engines(),
                "extended": c.extended,
            })
        })
        .collect();
    let equations: Vec<Value> = builtin_equations()
        .iter()
        .map(|e| json!({ "name": e.name, "system": e.system, "description": e.description }))
        .collect();
    let mut text = String::from("presets:\n");
    for p in preset_names() {
        text.push_str(&format!("  {p}\n"));
    }
    text.push_str("identities:\n");
    for c in &identities {
        text.push_str(&format!(
            "  {:<22} q^{:<3} {}\n",
            c["name"].as_str().unwrap_or_default(),
            c["qmax"],
            c["description"].as_str().unwrap_or_default()
        ));
    }
    text.push_str("equations:\n");
    for e in builtin_equations() {
        text.push_str(&format!("  {:<28} on {}\n", e.name, e.system));
    }
    Outcome::equal(
        json!({ "presets": preset_names(), "identities": identities, "equations": equations }),
        text,
    )
}

fn verify(
    g: &Global,
    identity: &str,
    qmax: Option<usize>,
    degmax: Option<u32>,
    engines: Option<&str>,
    system: Option<&str>,
) -> Result<Outcome> {
    let mut case: IdentityCase = identity_case(identity)?;
    if let Some(path) = system {
        case.side_b = load_system(path, &PresetParams::default())?;
        case.alternatives.clear();
        case.dilation = None;
    }
    let engines = match engines {
        Some(list) => Engine::parse_list(list)?,
        None => case.applicable_engines(),
    };
    let qmax = qmax.unwrap_or(case.qmax);
    let degmax = degmax.or(case.degmax);
    let mut report = verify_identity(&case, qmax, degmax, &engines)?;
    if !g.timing {
        report.ms = 0;
    }
    let names: Vec<&str> = report.engines.iter().map(|e| e.name()).collect();
    let mut text = format!(
        "{}: {} to q^{}{} with {}\n",
        report.identity,
        if report.equal { "equal" } else { "MISMATCH" },
        report.qmax,
        report.degmax.map(|d| format!(", colour degree {d}")).unwrap_or_default(),
        names.join(", ")
    );
    if let Some(m) = &report.first_mismatch {
        let between = report
            .mismatch_between
            .as_ref()
            .map(|(a, b)| format!(" ({a} vs {b})"))
            .unwrap_or_default();
        text.push_str(&format!(
            "first mismatch at q^{}: coefficient of {} is {} vs {}{between}\n",
            m.n, m.monomial, m.lhs, m.rhs
        ));
    }
    for (k, v) in &report.conventions {
        text.push_str(&format!("  {k}: {v}\n"));
    }
    if g.timing {
        text.push_str(&format!("  time: {} ms\n", report.ms));
    }
    Ok(Outcome::verdict(value(&report), text, report.equal))
}

fn load_product(arg: &str) -> Result<ProductSpec> {
    if looks_like_file(arg) {
        let spec: ProductSpec =
            serde_json::from_str(&read_file(arg)?).map_err(|e| Error::Input(format!("bad product file: {e}")))?;
        spec.validate()?;
        return Ok(spec);
    }
    match identity_case(arg)?.side_a {
        SideA::Product(p) => Ok(p),
        SideA::System(_) => Err(Error::Input(format!("{arg} has no product side"))),
    }
}

fn series_text(f: &TruncatedSeries) -> String {
    coefficient_table(f, f.qmax()).to_string()
}

fn expand(product: &str, qmax: usize, degmax: Option<u32>) -> Result<Outcome> {
    let spec = load_product(product)?;
    let f = product_expand(&spec, qmax, degmax)?;
    let text = format!("{spec}\n{}", series_text(&f));
    Ok(Outcome::equal(json!({ "product": spec, "series": f }), text))
}

fn enumerate(
    args: &SystemArgs,
    qmax: usize,
    degmax: Option<u32>,
    list: Option<usize>,
    recurrence: bool,
) -> Result<Outcome> {
    let sys = system_from(args)?;
    let f = if recurrence {
        dp_series(&sys, qmax, degmax)?
    } else {
        enumerate_series(&sys, qmax, degmax)?
    };
    let mut doc = json!({
        "system": sys.name(),
        "engine": if recurrence { "recurrence" } else { "enum" },
        "series": f,
    });
    let mut text = series_text(&f);
    if let Some(n) = list {
        if n > LIST_BOUND {
            return Err(Error::InvalidParameter(format!("--list is limited to n <= {LIST_BOUND}")));
        }
        let parts = list_partitions(&sys, n, degmax)?;
        let labels: Vec<String> = parts
            .iter()
            .map(|p| p.iter().map(|x| sys.part_label(x)).collect::<Vec<_>>().join(" + "))
            .collect();
        text.push_str(&format!("partitions of {n} ({}):\n", labels.len()));
        for l in &labels {
            text.push_str(&format!("  {}\n", if l.is_empty() { "(empty)" } else { l }));
        }
        doc["partitions"] = json!({ "n": n, "count": labels.len(), "parts": labels });
    }
    Ok(Outcome::equal(doc, text))
}

fn parse_offsets(text: &str) -> Result<BTreeMap<String, i64>> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("--offsets must be a JSON object of integers: {e}")))
}

fn dilate(args: &SystemArgs, modulus: u32, offsets: &str) -> Result<Outcome> {
    let sys = system_from(args)?;
    let mut spec = DilationSpec::new(modulus);
    for (name, shift) in parse_offsets(offsets)? {
        spec = spec.shift(Var::new(&name)?, shift);
    }
    let dilated = dilate_system(&sys, &spec)?;
    let file = SystemFile::from_system(&dilated);
    Ok(Outcome::equal(value(&file), dilated.to_string()))
}

fn check_eq(equation: &str, kmax: Option<i64>, qmax: usize, system: Option<&str>) -> Result<Outcome> {
    let spec = if looks_like_file(equation) {
        EquationSpec::from_json(&read_file(equation)?)?
    } else {
        builtin_equations()
            .into_iter()
            .find(|e| e.name == equation)
            .ok_or_else(|| Error::Input(format!("unknown equation {equation:?}; see list-presets")))?
    };
    let sys = load_system(system.unwrap_or(&spec.system), &PresetParams::default())?;
    let report = check_equation(&spec, &sys, kmax, qmax)?;
    let mut text = format!(
        "{} on {}: {} for k = {}..{} to q^{} ({} instances)\n",
        report.name,
        report.system,
        if report.holds { "holds" } else { "FAILS" },
        report.kmin,
        report.kmax,
        report.qmax,
        report.instances
    );
    if let Some(f) = &report.failure {
        let colour = f.colour.as_deref().map(|c| format!(", colour {c}")).unwrap_or_default();
        text.push_str(&format!(
            "first failure at k = {}{colour}: q^{} coefficient of {} is {} vs {}\n",
            f.k, f.mismatch.n, f.mismatch.monomial, f.mismatch.lhs, f.mismatch.rhs
        ));
    }
    Ok(Outcome::verdict(value(&report), text, report.holds))
}

fn discover(args: &SystemArgs, primaries: &str, max_exponent: u32, qmax: usize) -> Result<Outcome> {
    let sys = system_from(args)?;
    let prim: Vec<Var> = primaries
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Var::new)
        .collect::<std::result::Result<_, _>>()?;
    let candidates = search_relations(&sys, &prim, qmax, max_exponent)?;
    let mut text = format!("{} candidate(s) for {} to q^{qmax}\n", candidates.len(), sys.name());
    for c in &candidates {
        let subst: Vec<String> = c.substitution.iter().map(|(v, m)| format!("{v} = {m}")).collect();
        let shape = match (&c.product, c.period) {
            (Some(p), _) => format!("product {p}"),
            (None, Some(m)) => format!("periodic with period {m}"),
            (None, None) => "positive, no period found".to_string(),
        };
        text.push_str(&format!("  {}: {shape}\n", subst.join(", ")));
    }
    Ok(Outcome::equal(
        json!({ "system": sys.name(), "qmax": qmax, "max_exponent": max_exponent, "candidates": candidates }),
        text,
    ))
}

fn euler_factor(path: &str) -> Result<Outcome> {
    let f: TruncatedSeries =
        serde_json::from_str(&read_file(path)?).map_err(|e| Error::Input(format!("bad series file: {e}")))?;
    let factors = euler_factorize(&f)?;
    let condensed = condense(&f)?;
    let product = recognize_periodic_product(&f, f.qmax());
    let mut text = String::new();
    for x in &factors {
        // stored exponent e stands for (1 - c q^n)^(-e)
        let e = -x.exponent.clone();
        text.push_str(&format!("(1 - {} q^{})^{e}\n", x.coeff, x.n));
    }
    if let Some(p) = &product {
        text.push_str(&format!("product: {p}\n"));
    }
    Ok(Outcome::equal(
        json!({ "qmax": f.qmax(), "factors": factors, "condensed": condensed, "product": product }),
        text,
    ))
}

fn sample_statistics(identity: &str, samples: usize, seed: u64, max_n: usize) -> Result<Outcome> {
    let r = sampled_statistic_check(identity, samples, seed, max_n)?;
    let mut text = format!(
        "{}: {} of {} sampled partitions (seed {}, sizes <= {}, population {}) match\n",
        r.identity,
        r.samples - r.failures.len(),
        r.samples,
        r.seed,
        r.max_n,
        r.population
    );
    for f in &r.failures {
        text.push_str(&format!("  {}: {}\n", f.partition, f.reason));
    }
    let ok = r.passed();
    Ok(Outcome::verdict(value(&r), text, ok))
}

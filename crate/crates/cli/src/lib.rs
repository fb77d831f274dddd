//! Command-line front end: ball enumeration, growth tables, exponent fits,
//! verification suites, tree encodings, the counting bound and the action.
//!
//! Exit status is 0 on success, 1 when a verification suite reports a
//! violation and 2 on usage, resource or precision errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use grigorchuk::encoding::{DEFAULT_MAX_PRECISION_BITS, DEFAULT_PRECISION_BITS};
use grigorchuk::field::parse_rational;
use grigorchuk::metrics::{enumerate_ball_capped, DEFAULT_ELEMENT_CAP};
use grigorchuk::table::{growth_csv, growth_json, growth_rows, render_exact, write_table};
use grigorchuk::verify::{injection_table_radius, integer_grid, verify_psi_consistency};
use grigorchuk::*;
use serde_json::json;

pub const CACHE_ENV: &str = "GRIGORCHUK_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "grigorchuk", version, about = "Weighted growth of the Grigorchuk group")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate a ball and save it as a table file.
    Ball {
        #[command(flatten)]
        table: TableArgs,
        /// Radius as an exact rational p or p/q.
        #[arg(long, value_parser = parse_exact)]
        radius: FieldElement,
        /// Output file; defaults to the cache directory, else standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth function at 0, step, 2·step, ... up to the radius.
    Growth {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_parser = parse_exact)]
        radius: FieldElement,
        #[arg(long, value_parser = parse_exact, default_value = "1")]
        step: FieldElement,
        #[arg(long, value_enum, default_value_t = GrowthFormat::Csv)]
        format: GrowthFormat,
        /// Render sample points as decimals instead of exact rationals.
        #[arg(long)]
        decimal: bool,
    },
    /// Fit log log γ(n) against log n.
    Exponent {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_parser = parse_exact)]
        radius: FieldElement,
        #[arg(long, value_parser = parse_exact, default_value = "1")]
        step: FieldElement,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Run verification suites.
    Verify {
        suite: Suite,
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Table radius for nf and shorten, domain radius for injection.
        #[arg(long, value_parser = parse_exact)]
        radius: Option<FieldElement>,
        /// Longest word for the ψ suite.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Deepest input string for the ψ suite.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Leaf-budget grid is {2, ..., grid_max}.
        #[arg(long, default_value_t = 50)]
        grid_max: i64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Tree representation of an element.
    Encode {
        #[arg(long)]
        word: Word,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        cache: CacheArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Leaf budget and counting bound at n, with γ(n) when enumerable.
    Bound {
        #[arg(long, value_parser = parse_exact)]
        n: FieldElement,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        cache: CacheArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Image of a binary string under a word.
    Act {
        #[arg(long)]
        word: Word,
        #[arg(long)]
        input: BinaryString,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CacheArgs {
    /// Directory for table files.
    #[arg(long, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Maximum number of elements to enumerate.
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    /// Weight scheme: omega or unit.
    #[arg(long, default_value = "omega", value_parser = parse_scheme)]
    pub weights: WeightScheme,
    #[command(flatten)]
    pub cache: CacheArgs,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Leaf cutoff K, an exact rational above ζ.
    #[arg(long, value_parser = parse_exact, default_value = "1")]
    pub k: FieldElement,
    #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_PRECISION_BITS)]
    pub max_precision: u32,
}

impl BudgetArgs {
    fn params(&self) -> Result<LeafBudgetParams> {
        LeafBudgetParams::with_precision(self.k.clone(), self.precision, self.max_precision)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthFormat {
    Csv,
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Weights,
    Nf,
    Shorten,
    Psi,
    Budget,
    Injection,
    All,
}

fn parse_exact(s: &str) -> std::result::Result<FieldElement, String> {
    parse_rational(s).map(FieldElement::from_rational).map_err(|e| e.to_string())
}

fn parse_scheme(s: &str) -> std::result::Result<WeightScheme, String> {
    WeightScheme::by_name(s).map_err(|e| e.to_string())
}

/// Successful command outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
        }
    }
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&config, out) {
        Ok(status) => status.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn cache_file(dir: &Path, scheme: &WeightScheme, radius: &FieldElement) -> PathBuf {
    let r: String = render_exact(radius).chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    dir.join(format!("{}-r{r}.tbl", scheme.name()))
}

/// Loads a matching cached table or enumerates (and caches) a new one.
pub fn obtain_table(scheme: &WeightScheme, radius: &FieldElement, cache: &CacheArgs) -> Result<BallTable> {
    let Some(dir) = &cache.cache_dir else {
        return enumerate_ball_capped(scheme, radius, cache.cap);
    };
    let path = cache_file(dir, scheme, radius);
    if path.exists() {
        if let Ok(t) = load_table(&path) {
            if t.scheme().weights() == scheme.weights() && t.radius() == radius {
                return Ok(t);
            }
        }
    }
    let t = enumerate_ball_capped(scheme, radius, cache.cap)?;
    fs::create_dir_all(dir)?;
    save_table(&t, &path)?;
    Ok(t)
}

fn sample_points(radius: &FieldElement, step: &FieldElement) -> Result<Vec<FieldElement>> {
    if !step.is_positive() {
        return Err(Error::Precondition("step must be positive".into()));
    }
    let mut points = Vec::new();
    let mut n = FieldElement::zero();
    while n <= *radius {
        points.push(n.clone());
        n = &n + step;
    }
    Ok(points)
}

fn write_reports(out: &mut dyn Write, reports: &[(VerificationReport, bool)], format: ReportFormat) -> Result<Status> {
    match format {
        ReportFormat::Text => {
            for (r, finding) in reports {
                out.write_all(r.render(10).as_bytes())?;
                if *finding {
                    writeln!(out, "  (finding; does not affect the exit status)")?;
                }
            }
        }
        ReportFormat::Json => {
            let values: Vec<_> = reports
                .iter()
                .map(|(r, finding)| {
                    let mut v = r.to_json();
                    v["finding"] = json!(finding);
                    v
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&values).expect("reports serialize"))?;
        }
    }
    let failed = reports.iter().any(|(r, finding)| !finding && !r.passed());
    Ok(if failed { Status::Violation } else { Status::Ok })
}

fn int(n: i64) -> FieldElement {
    FieldElement::from_integers(n, 0, 0)
}

#[allow(clippy::too_many_arguments)]
fn run_suites(
    suite: Suite,
    table: &TableArgs,
    budget: &BudgetArgs,
    radius: Option<&FieldElement>,
    max_len: usize,
    depth: usize,
    grid_max: i64,
) -> Result<Vec<(VerificationReport, bool)>> {
    let selected = |s: Suite| suite == s || suite == Suite::All;
    let radius_or = |default: i64| radius.cloned().unwrap_or_else(|| int(default));
    let mut reports = Vec::new();
    if selected(Suite::Weights) {
        reports.push((check_weight_identities(&table.weights), false));
    }
    if selected(Suite::Psi) {
        reports.push((verify_psi_consistency(max_len, depth), false));
    }
    if selected(Suite::Nf) {
        let t = obtain_table(&table.weights, &radius_or(4), &table.cache)?;
        reports.push((verify_minimal_form(&t)?, false));
    }
    if selected(Suite::Shorten) {
        let t = obtain_table(&table.weights, &radius_or(5), &table.cache)?;
        reports.push((verify_shortening(&t)?, false));
    }
    if selected(Suite::Budget) {
        let f = verify_leaf_budget_properties(&integer_grid(2, grid_max), &budget.params()?);
        reports.push((f.concavity, false));
        reports.push((f.halving, true));
    }
    if selected(Suite::Injection) {
        let domain = radius_or(3);
        let p = budget.params()?;
        let cover = injection_table_radius(&domain);
        let t = obtain_table(&WeightScheme::omega(), if cover > *p.k() { &cover } else { p.k() }, &table.cache)?;
        reports.push((verify_injection(&t, &p, &domain)?, false));
    }
    Ok(reports)
}

pub fn execute(config: &RunConfig, out: &mut dyn Write) -> Result<Status> {
    match &config.command {
        Command::Ball { table, radius, out: path } => {
            let t = enumerate_ball_capped(&table.weights, radius, table.cache.cap)?;
            let target =
                path.clone().or_else(|| table.cache.cache_dir.as_ref().map(|d| cache_file(d, &table.weights, radius)));
            match target {
                Some(p) => {
                    if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                        fs::create_dir_all(parent)?;
                    }
                    save_table(&t, &p)?;
                    writeln!(out, "scheme {} radius {} elements {}", t.scheme().name(), render_exact(radius), t.len())?;
                    writeln!(out, "saved {}", p.display())?;
                }
                None => write_table(&t, out)?,
            }
        }
        Command::Growth { table, radius, step, format, decimal } => {
            let t = obtain_table(&table.weights, radius, &table.cache)?;
            let rows = growth_rows(&t, &sample_points(radius, step)?, *decimal)?;
            match format {
                GrowthFormat::Csv => out.write_all(growth_csv(&rows).as_bytes())?,
                GrowthFormat::Json => writeln!(out, "{}", growth_json(&rows))?,
                GrowthFormat::Text => {
                    let width = rows.iter().map(|r| r.n.len()).max().unwrap_or(1).max(1);
                    writeln!(out, "{:>width$}  gamma", "n")?;
                    for r in &rows {
                        writeln!(out, "{:>width$}  {}", r.n, r.gamma)?;
                    }
                }
            }
        }
        Command::Exponent { table, radius, step, format } => {
            let t = obtain_table(&table.weights, radius, &table.cache)?;
            let points: Vec<_> = sample_points(radius, step)?.into_iter().filter(|n| n.is_positive()).collect();
            let fit = estimate_alpha(&t, &points)?;
            match format {
                ReportFormat::Text => {
                    writeln!(out, "exponent {:.6}", fit.exponent)?;
                    writeln!(out, "std_error {:.6}", fit.std_error)?;
                    writeln!(out, "intercept {:.6}", fit.intercept)?;
                    writeln!(out, "residual {:.6}", fit.residual)?;
                    writeln!(out, "points {}", fit.points)?;
                }
                ReportFormat::Json => {
                    let v = json!({
                        "scheme": t.scheme().name(),
                        "radius": render_exact(radius),
                        "exponent": fit.exponent,
                        "std_error": fit.std_error,
                        "intercept": fit.intercept,
                        "residual": fit.residual,
                        "points": fit.points,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
            }
        }
        Command::Verify { suite, table, budget, radius, max_len, depth, grid_max, format } => {
            let reports = run_suites(*suite, table, budget, radius.as_ref(), *max_len, *depth, *grid_max)?;
            return write_reports(out, &reports, *format);
        }
        Command::Encode { word, budget, cache, format } => {
            let p = budget.params()?;
            let omega = WeightScheme::omega();
            let upper = word_weight(word, &omega);
            let reach = if upper > *p.k() { upper } else { p.k().clone() };
            let t = obtain_table(&omega, &injection_table_radius(&reach), cache)?;
            let length = length_of(word, &t)?;
            let tree = encode(word, &p, &t)?;
            let leaves = tree.leaf_count();
            let l = leaf_budget(&length, &p)?;
            match format {
                ReportFormat::Text => {
                    writeln!(out, "word {word}")?;
                    writeln!(out, "length {}", render_exact(&length))?;
                    writeln!(out, "tree {tree}")?;
                    writeln!(out, "shape {}", tree.shape())?;
                    writeln!(out, "leaves {leaves} (budget {l})")?;
                }
                ReportFormat::Json => {
                    let v = json!({
                        "word": word.to_string(),
                        "length": render_exact(&length),
                        "tree": tree.to_string(),
                        "shape": tree.shape(),
                        "leaves": leaves,
                        "budget": l,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
            }
        }
        Command::Bound { n, budget, cache, format } => {
            let p = budget.params()?;
            let omega = WeightScheme::omega();
            let reach = if n > p.k() { n.clone() } else { p.k().clone() };
            let (t, gamma) = match obtain_table(&omega, &reach, cache) {
                Ok(t) => {
                    let g = growth_function(&t, n)?;
                    (t, Some(g))
                }
                Err(Error::ResourceLimit { .. }) => (obtain_table(&omega, p.k(), cache)?, None),
                Err(e) => return Err(e),
            };
            let l = leaf_budget(n, &p)?;
            let bound = upper_bound(n, &p, &t)?;
            match format {
                ReportFormat::Text => {
                    writeln!(out, "n {}", render_exact(n))?;
                    writeln!(out, "K {}", render_exact(p.k()))?;
                    writeln!(out, "leaf_budget {l}")?;
                    writeln!(out, "bound {bound}")?;
                    match gamma {
                        Some(g) => writeln!(out, "gamma {g}")?,
                        None => writeln!(out, "gamma unavailable (ball exceeds the element cap)")?,
                    }
                }
                ReportFormat::Json => {
                    let v = json!({
                        "n": render_exact(n),
                        "k": render_exact(p.k()),
                        "leaf_budget": l,
                        "bound": bound.to_string(),
                        "gamma": gamma,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
            }
        }
        Command::Act { word, input } => {
            writeln!(out, "{}", act(word, input))?;
        }
    }
    Ok(Status::Ok)
}

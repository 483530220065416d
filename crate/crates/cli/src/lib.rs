//! Command-line front end for `effana`.
//!
//! Every command writes its report to a string so that it can be tested
//! without a subprocess. Exit codes: 0 success, 2 unusable input, 3 a
//! violated axiom or property.

mod examples;
mod labels;
mod properties;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use effana::algebra::validate_axioms;
use effana::constructions::{example_4_6, powerset_algebra_with_limit, scale_algebra_with_limit};
use effana::format::{parse_measure, AlgebraFile, AlgebraRef, MeasureFile};
use effana::measure::{sup_norm, validate_measure};
use effana::rdp::{check_rdp, RdpReport};
use effana::symbolic;
use effana::variation::{check_variation_theorems_with, VariationTable};
use effana::{EffectAlgebra, Error, Measure, Mode, DEFAULT_MAX_SIZE, DEFAULT_TOLERANCE};

pub use labels::resolve_element;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "effana", version, about = "Finite effect algebras, measures and their variation")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Tolerance for comparisons of real values.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Decompositions with repeated parts (multiset) or distinct parts (set).
    #[arg(long, global = true, default_value_t = Mode::Multiset)]
    pub mode: Mode,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest carrier accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SIZE)]
    pub max_size: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit an algebra document for a standard construction.
    Make {
        #[command(subcommand)]
        what: Make,
    },
    /// Check the effect algebra axioms.
    Validate { algebra: PathBuf },
    /// Print the induced order, atoms and orthosupplements.
    Order { algebra: PathBuf },
    /// Decide the Riesz decomposition property.
    Rdp { algebra: PathBuf },
    /// Compute the variation of a measure at one element.
    Variation {
        algebra: PathBuf,
        measure: PathBuf,
        /// Element to evaluate at; defaults to the unit.
        #[arg(long)]
        element: Option<String>,
        /// Also print an optimal decomposition.
        #[arg(long)]
        witness: bool,
    },
    /// Check that a measure document is additive.
    Check { algebra: PathBuf, measure: PathBuf },
    /// Pointwise and uniform bounds of a family of measures, as CSV.
    Bounds {
        algebra: PathBuf,
        #[arg(required = true)]
        measures: Vec<PathBuf>,
    },
    /// Check the structural properties of the variation of a measure.
    Theorems { algebra: PathBuf, measure: PathBuf },
    /// Verification transcripts for the built-in examples.
    Examples {
        #[command(subcommand)]
        which: examples::Example,
    },
    /// Run the seeded randomized invariant suite.
    Properties(properties::PropertiesArgs),
}

#[derive(Subcommand, Debug)]
pub enum Make {
    /// Subsets of {1..n}.
    Powerset {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// {0, 1/k, …, 1}.
    Scale {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The six-element half-plane algebra.
    #[command(name = "example-4.6")]
    HalfPlanes {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The prime-power algebra restricted to indices ≤ n, with its family of
    /// spike measures, written into a directory.
    Symbolic {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A failed command: the message and its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

/// Library errors from axiom or additivity failures are violations;
/// everything else is an input problem.
fn classify(context: &str, e: Error) -> Failure {
    let code = match e {
        Error::Axioms(_) | Error::NotAdditive(_) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    };
    Failure {
        code,
        message: format!("{context}: {e}"),
    }
}

/// Report text and exit code of a command that ran to completion.
#[derive(Debug, Default)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, code: EXIT_OK }
    }

    fn with_code(output: String, violated: bool) -> Self {
        Outcome {
            output,
            code: if violated { EXIT_VIOLATION } else { EXIT_OK },
        }
    }
}

pub type CmdResult = Result<Outcome, Failure>;

pub fn run(cli: &Cli) -> CmdResult {
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        return Err(Failure::input("--tolerance must be a positive number"));
    }
    let ctx = Context { cli };
    match &cli.command {
        Command::Make { what } => ctx.make(what),
        Command::Validate { algebra } => ctx.validate(algebra),
        Command::Order { algebra } => ctx.order(algebra),
        Command::Rdp { algebra } => ctx.rdp(algebra),
        Command::Variation {
            algebra,
            measure,
            element,
            witness,
        } => ctx.variation(algebra, measure, element.as_deref(), *witness),
        Command::Check { algebra, measure } => ctx.check(algebra, measure),
        Command::Bounds { algebra, measures } => ctx.bounds(algebra, measures),
        Command::Theorems { algebra, measure } => ctx.theorems(algebra, measure),
        Command::Examples { which } => examples::run(cli, which),
        Command::Properties(args) => properties::run(cli, args),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn to_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialise");
    s.push('\n');
    s
}

fn csv_string(rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
}

struct Context<'a> {
    cli: &'a Cli,
}

impl Context<'_> {
    fn algebra_file(&self, path: &Path) -> Result<AlgebraFile, Failure> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }

    fn load_algebra(&self, path: &Path) -> Result<Arc<EffectAlgebra>, Failure> {
        let file = self.algebra_file(path)?;
        file.to_algebra(self.cli.max_size)
            .map(Arc::new)
            .map_err(|e| classify(&path.display().to_string(), e))
    }

    fn load_measure(&self, path: &Path, l: &Arc<EffectAlgebra>) -> Result<Measure, Failure> {
        let file = self.measure_file(path)?;
        file.to_measure(l.clone(), self.cli.tolerance)
            .map_err(|e| classify(&path.display().to_string(), e))
    }

    fn measure_file(&self, path: &Path) -> Result<MeasureFile, Failure> {
        let text = read(path)?;
        parse_measure(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }

    fn emit_algebra(&self, l: &EffectAlgebra, out: Option<&Path>) -> CmdResult {
        let json = AlgebraFile::from_algebra(l).to_json() + "\n";
        match out {
            Some(path) => {
                write_file(path, &json)?;
                Ok(Outcome::ok(format!("wrote {} ({} elements)\n", path.display(), l.size())))
            }
            None => Ok(Outcome::ok(json)),
        }
    }

    fn make(&self, what: &Make) -> CmdResult {
        let limit = self.cli.max_size;
        match what {
            Make::Powerset { n, out } => {
                let l = powerset_algebra_with_limit(*n, limit).map_err(|e| classify("powerset", e))?;
                self.emit_algebra(&l, out.as_deref())
            }
            Make::Scale { k, out } => {
                let l = scale_algebra_with_limit(*k, limit).map_err(|e| classify("scale", e))?;
                self.emit_algebra(&l, out.as_deref())
            }
            Make::HalfPlanes { out } => self.emit_algebra(&example_4_6(), out.as_deref()),
            Make::Symbolic { n, out } => {
                let r = symbolic::restriction_with_limit(*n, limit).map_err(|e| classify("symbolic", e))?;
                fs::create_dir_all(out).map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
                let algebra_path = out.join("algebra.json");
                write_file(&algebra_path, &(AlgebraFile::from_algebra(r.algebra()).to_json() + "\n"))?;
                let family = symbolic::ex33_family(&r).map_err(|e| classify("symbolic", e))?;
                for (i, mu) in family.members().iter().enumerate() {
                    let doc = MeasureFile::from_measure(mu, AlgebraRef::Path("algebra.json".into()));
                    write_file(&out.join(format!("mu_{}.json", i + 1)), &(doc.to_json() + "\n"))?;
                }
                Ok(Outcome::ok(format!(
                    "wrote {} ({} elements) and {} measures to {}\n",
                    algebra_path.display(),
                    r.algebra().size(),
                    family.len(),
                    out.display()
                )))
            }
        }
    }

    fn validate(&self, path: &Path) -> CmdResult {
        let file = self.algebra_file(path)?;
        let ctx = path.display().to_string();
        let table = file.to_table(self.cli.max_size).map_err(|e| classify(&ctx, e))?;
        let report = validate_axioms(&table).map_err(|e| classify(&ctx, e))?;
        let output = match self.cli.format {
            Format::Json => to_json(&serde_json::to_value(&report).expect("report serialises")),
            Format::Csv => {
                let mut rows = vec![vec!["axiom".to_owned(), "elements".to_owned(), "detail".to_owned()]];
                rows.extend(
                    report
                        .violations
                        .iter()
                        .map(|v| vec![v.axiom.to_string(), v.labels.join(" "), v.detail.clone()]),
                );
                csv_string(&rows)
            }
            Format::Text => {
                let mut s = String::new();
                if report.valid {
                    let sums = table.defined_pairs().count();
                    writeln!(s, "valid: {} elements, {} defined sums", table.size(), sums).unwrap();
                } else {
                    writeln!(s, "invalid: {} violation(s)", report.violation_count).unwrap();
                    for v in &report.violations {
                        writeln!(s, "  {} at ({}): {}", v.axiom, v.labels.join(", "), v.detail).unwrap();
                    }
                    if report.violation_count > report.violations.len() {
                        writeln!(s, "  … {} more", report.violation_count - report.violations.len()).unwrap();
                    }
                }
                s
            }
        };
        Ok(Outcome::with_code(output, !report.valid))
    }

    fn order(&self, path: &Path) -> CmdResult {
        let l = self.load_algebra(path)?;
        let l: &EffectAlgebra = &l;
        let atoms: Vec<&str> = l.atoms().into_iter().map(|a| l.name(a)).collect();
        let leq_pairs: Vec<(&str, &str)> = l
            .elements()
            .flat_map(|a| l.elements().filter(move |&b| l.leq(a, b)).map(move |b| (a, b)))
            .map(|(a, b)| (l.name(a), l.name(b)))
            .collect();
        let output = match self.cli.format {
            Format::Json => {
                let supp: serde_json::Map<String, serde_json::Value> = l
                    .elements()
                    .map(|a| (l.name(a).to_owned(), json!(l.name(l.orthosupplement(a)))))
                    .collect();
                to_json(&json!({ "atoms": atoms, "orthosupplement": supp, "leq": leq_pairs }))
            }
            Format::Csv => {
                let mut rows = vec![vec!["lower".to_owned(), "upper".to_owned()]];
                rows.extend(leq_pairs.iter().map(|(a, b)| vec![a.to_string(), b.to_string()]));
                csv_string(&rows)
            }
            Format::Text => {
                let mut s = String::new();
                writeln!(s, "atoms: {}", atoms.join(", ")).unwrap();
                for a in l.elements() {
                    let above: Vec<&str> = l.elements().filter(|&b| l.lt(a, b)).map(|b| l.name(b)).collect();
                    writeln!(
                        s,
                        "{}  ⊥ = {}  < {{{}}}",
                        l.name(a),
                        l.name(l.orthosupplement(a)),
                        above.join(", ")
                    )
                    .unwrap();
                }
                s
            }
        };
        Ok(Outcome::ok(output))
    }

    fn rdp(&self, path: &Path) -> CmdResult {
        let l = self.load_algebra(path)?;
        let report = check_rdp(&l);
        let output = match self.cli.format {
            Format::Json => {
                let witness = report.witness.map(|w| json!([l.name(w.c), l.name(w.a), l.name(w.b)]));
                to_json(&json!({
                    "holds": report.holds,
                    "witness": witness,
                    "witness_rechecked": report.witness_rechecked,
                    "triples": report.triples,
                }))
            }
            Format::Csv => csv_string(&[
                vec!["holds".into(), "c".into(), "a".into(), "b".into()],
                match report.witness {
                    Some(w) => vec![
                        "false".into(),
                        l.name(w.c).into(),
                        l.name(w.a).into(),
                        l.name(w.b).into(),
                    ],
                    None => vec!["true".into(), String::new(), String::new(), String::new()],
                },
            ]),
            Format::Text => format!("{}\nnote: {}\n", report.describe(&l), RdpReport::BANNER),
        };
        Ok(Outcome::with_code(output, !report.holds))
    }

    fn variation(&self, algebra: &Path, measure: &Path, element: Option<&str>, witness: bool) -> CmdResult {
        let l = self.load_algebra(algebra)?;
        let mu = self.load_measure(measure, &l)?;
        let e = match element {
            Some(name) => resolve_element(&l, name).map_err(|e| classify("--element", e))?,
            None => l.unit(),
        };
        let result = VariationTable::new(&mu, self.cli.mode).result(e);
        let parts: Vec<&str> = result.witness.parts.iter().map(|&p| l.name(p)).collect();
        let output = match self.cli.format {
            Format::Json => to_json(&json!({
                "element": l.name(e),
                "mode": self.cli.mode.to_string(),
                "value": result.value,
                "witness": witness.then_some(&parts),
            })),
            Format::Csv => {
                let mut header = vec!["element".to_owned(), "mode".to_owned(), "value".to_owned()];
                let mut row = vec![l.name(e).to_owned(), self.cli.mode.to_string(), result.value.to_string()];
                if witness {
                    header.push("witness".into());
                    row.push(parts.join(" "));
                }
                csv_string(&[header, row])
            }
            Format::Text => {
                let mut s = format!("|μ|({}) = {} ({})\n", l.name(e), result.value, self.cli.mode);
                if witness {
                    writeln!(s, "witness: {{{}}}", parts.join(", ")).unwrap();
                }
                s
            }
        };
        Ok(Outcome::ok(output))
    }

    fn check(&self, algebra: &Path, measure: &Path) -> CmdResult {
        let l = self.load_algebra(algebra)?;
        let file = self.measure_file(measure)?;
        let ctx = measure.display().to_string();
        let values = file.values_for(&l).map_err(|e| classify(&ctx, e))?;
        let integral = values.iter().all(|v| v.is_integral());
        let tol = if integral { 0.0 } else { self.cli.tolerance };
        let report = validate_measure(&l, &values, tol).map_err(|e| classify(&ctx, e))?;
        let output = match self.cli.format {
            Format::Json => to_json(&serde_json::to_value(&report).expect("report serialises")),
            Format::Csv => {
                let mut rows = vec![vec![
                    "a".to_owned(),
                    "b".to_owned(),
                    "sum".to_owned(),
                    "expected".to_owned(),
                    "found".to_owned(),
                ]];
                rows.extend(report.violations.iter().map(|v| {
                    let mut r = v.labels.to_vec();
                    r.push(v.expected.to_string());
                    r.push(v.found.to_string());
                    r
                }));
                csv_string(&rows)
            }
            Format::Text => {
                let mut s = format!("{report}\n");
                if report.is_valid() {
                    let mu = Measure::with_tolerance(l.clone(), values, tol).map_err(|e| classify(&ctx, e))?;
                    writeln!(s, "sup norm: {}", sup_norm(&mu)).unwrap();
                }
                s
            }
        };
        Ok(Outcome::with_code(output, !report.is_valid()))
    }

    fn bounds(&self, algebra: &Path, measures: &[PathBuf]) -> CmdResult {
        let l = self.load_algebra(algebra)?;
        let members = measures
            .iter()
            .map(|p| self.load_measure(p, &l))
            .collect::<Result<Vec<_>, _>>()?;
        let names: Vec<String> = measures
            .iter()
            .map(|p| p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()))
            .collect();
        let family = effana::MeasureFamily::new(members).map_err(|e| classify("measures", e))?;
        if self.cli.format == Format::Json {
            let rows: Vec<_> = l
                .elements()
                .map(|a| {
                    json!({
                        "element": l.name(a),
                        "norms": family.members().iter().map(|m| m.norm_at(a)).collect::<Vec<_>>(),
                        "pointwise_bound": family.pointwise_bound(a),
                    })
                })
                .collect();
            return Ok(Outcome::ok(to_json(&json!({
                "measures": names,
                "rows": rows,
                "sup_norms": family.members().iter().map(sup_norm).collect::<Vec<_>>(),
                "uniform_bound": family.uniform_bound(),
            }))));
        }
        let mut header = vec!["element".to_owned()];
        header.extend(names.iter().cloned());
        header.push("pointwise_bound".into());
        let mut rows = vec![header];
        for a in l.elements() {
            let mut row = vec![l.name(a).to_owned()];
            row.extend(family.members().iter().map(|m| m.norm_at(a).to_string()));
            row.push(family.pointwise_bound(a).to_string());
            rows.push(row);
        }
        let mut last = vec!["uniform".to_owned()];
        last.extend(family.members().iter().map(|m| sup_norm(m).to_string()));
        last.push(family.uniform_bound().to_string());
        rows.push(last);
        Ok(Outcome::ok(csv_string(&rows)))
    }

    fn theorems(&self, algebra: &Path, measure: &Path) -> CmdResult {
        let l = self.load_algebra(algebra)?;
        let mu = self.load_measure(measure, &l)?;
        let report = check_variation_theorems_with(&mu, self.cli.mode, self.cli.tolerance);
        let output = match self.cli.format {
            Format::Json => {
                let mut v = serde_json::to_value(&report).expect("report serialises");
                v["labels"] = json!(l.names());
                to_json(&v)
            }
            Format::Csv => {
                let mut rows = vec![vec![
                    "check".to_owned(),
                    "status".to_owned(),
                    "instances".to_owned(),
                    "extremal".to_owned(),
                    "lhs".to_owned(),
                    "rhs".to_owned(),
                ]];
                for c in &report.checks {
                    let (at, lhs, rhs) = match &c.extremal {
                        Some(x) => (x.labels.join(" "), x.lhs.to_string(), x.rhs.to_string()),
                        None => Default::default(),
                    };
                    let status = format!("{:?}", c.status).to_lowercase();
                    rows.push(vec![c.id.clone(), status, c.checked.to_string(), at, lhs, rhs]);
                }
                csv_string(&rows)
            }
            Format::Text => {
                let mut s = String::new();
                for a in l.elements() {
                    writeln!(s, "|μ|({}) = {}", l.name(a), report.variation[a.0]).unwrap();
                }
                write!(s, "{report}").unwrap();
                s
            }
        };
        Ok(Outcome::with_code(output, !report.all_passed()))
    }
}

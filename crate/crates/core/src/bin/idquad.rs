use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use idquad::expr::{self, Expr, FD_STEP};
use idquad::quadrature::{integrate, DerivativeSource, Integrand};
use idquad::report::{self, IntegrationSummary, OutputFormat, DEFAULT_DIGITS};
use idquad::testbed::{self, FunctionId};
use idquad::{build_rule, QuadError, RuleKind, WeightId};

const EXIT_USAGE: u8 = 2;
const EXIT_CONSTRUCTION: u8 = 3;
const EXIT_EVALUATION: u8 = 4;

#[derive(Parser)]
#[command(name = "idquad", version, about = "Gauss-type quadrature for the weight 1 - t on [0, 1]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// text, csv, markdown or json
    #[arg(long, default_value = "text")]
    format: OutputFormat,
    /// Significant digits for floating-point output
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    digits: usize,
    /// Suppress the banner line
    #[arg(long)]
    quiet: bool,
}

#[derive(Args, Clone)]
struct RuleArgs {
    /// linear (1 - t) or constant (1)
    #[arg(long, default_value = "linear")]
    weight: WeightId,
    /// gauss, radau or lobatto
    #[arg(long, default_value = "gauss")]
    kind: RuleKind,
    /// Number of free nodes
    #[arg(long, default_value_t = 2)]
    n: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FixedEnd {
    Right,
    Left,
}

#[derive(Subcommand)]
enum Command {
    /// Print the nodes and weights of one rule
    Nodes {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Integrate an expression in x or a built-in test function
    Integrate {
        #[command(flatten)]
        rule: RuleArgs,
        /// Integrand as an expression in x
        #[arg(long, conflicts_with = "function", required_unless_present = "function")]
        expr: Option<String>,
        /// Built-in test function f1..f4
        #[arg(long)]
        function: Option<FunctionId>,
        /// Derivative expression; a one-sided difference is used otherwise
        #[arg(long, requires = "expr")]
        dexpr: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        b: f64,
        /// End point carrying the rules' fixed node
        #[arg(long, value_enum, default_value = "right")]
        fixed_end: FixedEnd,
        #[command(flatten)]
        out: Output,
    },
    /// Percentage-error table of the six rule/weight combinations
    Table {
        /// Built-in test function f1..f4
        #[arg(long = "function", value_name = "FUNCTION")]
        function_flag: Option<FunctionId>,
        function: Option<FunctionId>,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 11)]
        n_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Build rules for n = stride, 2 stride, ..., n_max and check them
    Stability {
        weight: Option<WeightId>,
        kind: Option<RuleKind>,
        n_max: Option<usize>,
        stride: Option<usize>,
        #[arg(long = "weight", value_name = "WEIGHT")]
        weight_flag: Option<WeightId>,
        #[arg(long = "kind", value_name = "KIND")]
        kind_flag: Option<RuleKind>,
        #[arg(long = "n-max", value_name = "N_MAX")]
        n_max_flag: Option<usize>,
        #[arg(long = "stride", value_name = "STRIDE")]
        stride_flag: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Mean percentage errors over ranges of n, e.g. 12-16,17-21
    Averages {
        function: Option<FunctionId>,
        ranges: Option<String>,
        #[arg(long = "function", value_name = "FUNCTION")]
        function_flag: Option<FunctionId>,
        #[arg(long = "ranges", value_name = "RANGES")]
        ranges_flag: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// List the built-in test functions
    ListFunctions {
        #[command(flatten)]
        out: Output,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn construction(e: QuadError) -> Failure {
    Failure {
        code: EXIT_CONSTRUCTION,
        message: format!("rule construction failed: {} ({e})", e.kind()),
    }
}

fn evaluation(e: QuadError) -> Failure {
    Failure {
        code: EXIT_EVALUATION,
        message: format!("evaluation failed: {} ({e})", e.kind()),
    }
}

/// Parses `lo-hi[,lo-hi...]`.
fn parse_ranges(text: &str) -> Result<Vec<(usize, usize)>, Failure> {
    text.split(',')
        .map(|part| {
            let bad = || Failure::usage(format!("malformed range '{part}' (expected lo-hi)"));
            let (lo, hi) = part.trim().split_once('-').ok_or_else(bad)?;
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo, hi))
        })
        .collect()
}

fn parse_expr(text: &str) -> Result<Expr, Failure> {
    expr::parse(text).map_err(|e| Failure::usage(e.to_string()))
}

fn banner(out: &Output, text: String) -> String {
    if out.quiet || out.format != OutputFormat::Text {
        String::new()
    } else {
        format!("# {text}\n")
    }
}

#[allow(clippy::too_many_arguments)]
fn run_integrate(
    rule: &RuleArgs,
    expr_text: Option<&str>,
    function: Option<FunctionId>,
    dexpr: Option<&str>,
    a: f64,
    b: f64,
    fixed_end: FixedEnd,
    out: &Output,
) -> Result<String, Failure> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Failure::usage(format!("invalid interval [{a}, {b}]")));
    }
    let h = b - a;
    let left = fixed_end == FixedEnd::Left;
    // g is sampled at x = a + h t (right) or x = b - h t (left); either way
    // the fixed node t = 1 lands on the chosen end point.
    let end = if left { a } else { b };
    let needs_derivative = rule.weight == WeightId::Linear;

    let (g, exact, dg_end, source): (Box<dyn Fn(f64) -> f64 + Send + Sync>, _, _, _) =
        match (expr_text, function) {
            (Some(text), _) => {
                let e = parse_expr(text)?;
                let d = dexpr.map(parse_expr).transpose()?;
                let (dg, source) = if !needs_derivative {
                    (0.0, DerivativeSource::Exact)
                } else if let Some(d) = &d {
                    (d.eval(end).map_err(evaluation)?, DerivativeSource::Exact)
                } else {
                    let fx = |x| e.eval(x);
                    let dg = if left {
                        expr::one_sided_left(fx, a, FD_STEP * h)
                    } else {
                        expr::one_sided_right(fx, b, FD_STEP * h)
                    }
                    .map_err(evaluation)?;
                    (dg, DerivativeSource::FiniteDifference)
                };
                (Box::new(move |x| e.eval_or_nan(x)), None, dg, source)
            }
            (None, Some(id)) => {
                let f = testbed::builtin(id);
                let dg = if needs_derivative { (f.derivative)(end) } else { 0.0 };
                if !dg.is_finite() {
                    return Err(evaluation(QuadError::NonFiniteValue { x: end, value: dg }));
                }
                let exact = (a == 0.0 && b == 1.0).then_some(f.exact_integral);
                (Box::new(f.value), exact, dg, DerivativeSource::Exact)
            }
            (None, None) => return Err(Failure::usage("one of --expr or --function is required")),
        };

    let integrand = if left {
        Integrand::new(move |t| h * g(b - h * t), -h * h * dg_end, source)
    } else {
        Integrand::new(move |t| h * g(a + h * t), h * h * dg_end, source)
    };
    let r = build_rule(rule.weight, rule.kind, rule.n).map_err(construction)?;
    let approx = integrate(&r, &integrand).map_err(evaluation)?;
    let percent = exact.map(|ex| testbed::percent_error(approx, ex)).transpose().map_err(evaluation)?;
    let summary = IntegrationSummary { approx, exact, percent };
    Ok(report::render_integration(&summary, out.format, out.digits))
}

fn run(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Nodes { rule, out } => {
            let r = build_rule(rule.weight, rule.kind, rule.n).map_err(construction)?;
            let head = banner(&out, format!("{} {} rule, n = {}, {} nodes", rule.weight, rule.kind, rule.n, r.len()));
            Ok(head + &report::render_nodes(&r, out.format, out.digits))
        }
        Command::Integrate {
            rule,
            expr,
            function,
            dexpr,
            a,
            b,
            fixed_end,
            out,
        } => run_integrate(&rule, expr.as_deref(), function, dexpr.as_deref(), a, b, fixed_end, &out),
        Command::Table {
            function_flag,
            function,
            n_min,
            n_max,
            out,
        } => {
            let id = function_flag
                .or(function)
                .ok_or_else(|| Failure::usage("a function id (f1..f4) is required"))?;
            if n_min < 2 || n_max < n_min {
                return Err(Failure::usage(format!("need 2 <= n-min <= n-max, got {n_min} and {n_max}")));
            }
            let t = testbed::error_table(id, n_min, n_max).map_err(construction)?;
            let head = banner(&out, format!("percentage errors for {id}: {}", testbed::builtin(id).formula));
            Ok(head + &report::render_table(&t, out.format, out.digits))
        }
        Command::Stability {
            weight,
            kind,
            n_max,
            stride,
            weight_flag,
            kind_flag,
            n_max_flag,
            stride_flag,
            out,
        } => {
            let weight = weight_flag.or(weight).unwrap_or(WeightId::Linear);
            let kind = kind_flag.or(kind).unwrap_or(RuleKind::Gauss);
            let n_max = n_max_flag.or(n_max).unwrap_or(2000);
            let stride = stride_flag.or(stride).unwrap_or(100);
            if n_max < 2 || stride == 0 {
                return Err(Failure::usage(format!("need n-max >= 2 and stride >= 1, got {n_max} and {stride}")));
            }
            let r = testbed::stability_probe(weight, kind, n_max, stride).map_err(construction)?;
            Ok(report::render_stability(&r, out.format, out.digits))
        }
        Command::Averages {
            function,
            ranges,
            function_flag,
            ranges_flag,
            out,
        } => {
            let id = function_flag
                .or(function)
                .ok_or_else(|| Failure::usage("a function id (f1..f4) is required"))?;
            let text = ranges_flag.or(ranges).unwrap_or_else(|| "12-16,17-21,22-26,27-31,32-36".into());
            let ranges = parse_ranges(&text)?;
            if ranges.iter().any(|&(lo, _)| lo < 2) {
                return Err(Failure::usage("ranges must start at n >= 2"));
            }
            let avgs = testbed::range_averages(id, &ranges).map_err(construction)?;
            let head = banner(&out, format!("mean percentage errors for {id}"));
            Ok(head + &report::render_averages(id, &avgs, out.format, out.digits))
        }
        Command::ListFunctions { out } => {
            let fs: Vec<_> = FunctionId::ALL.iter().map(|&id| testbed::builtin(id)).collect();
            if out.format == OutputFormat::Json {
                let v: Vec<_> = fs
                    .iter()
                    .map(|f| serde_json::json!({"id": f.id.as_str(), "formula": f.formula, "exact_integral": f.exact_integral}))
                    .collect();
                return Ok(format!("{:#}\n", serde_json::Value::Array(v)));
            }
            let mut g = report::Grid::new(&["id", "formula", "exact_integral"]);
            for f in &fs {
                g.push(vec![f.id.to_string(), f.formula.to_string(), report::fmt_num(f.exact_integral, out.digits)]);
            }
            Ok(g.render(out.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use ballprox::extreme::{self, NormedSpacePoint, Space};
use ballprox::hilbert::positive_ball_approx;
use ballprox::oracles::{competitor_search_with_tol, CLOSED_FORM_TOL};
use ballprox::schema::{parse_operator, OperatorDoc};
use ballprox::{Branch, Certificate, Error, Operator};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{Map, Value};

/// Best approximation from the unit ball of the compact operators.
#[derive(Parser)]
#[command(name = "ballprox", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Operator document (JSON). Reads stdin when absent or `-`.
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Operator norm.
    Norm(Input),
    /// Essential norm.
    Essnorm(Input),
    /// Distance to the unit ball of the compact operators.
    Distball(Input),
    /// Best approximant with its certificate.
    Approx {
        #[command(flatten)]
        input: Input,
        /// Require a positive diagonal input.
        #[arg(long)]
        positive: bool,
    },
    /// Search compact competitors for one beating the distance formula.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = CLOSED_FORM_TOL, allow_negative_numbers = true)]
        tol: f64,
    },
    /// Nearest point of the unit ball to alpha·point, with a sampled
    /// uniqueness check.
    ProjectExtreme {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Coordinates as `1,0,-1` or a JSON array.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// One of l1, l2, linf.
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        tol: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Norm(_) => "norm",
            Command::Essnorm(_) => "essnorm",
            Command::Distball(_) => "distball",
            Command::Approx { .. } => "approx",
            Command::Verify { .. } => "verify",
            Command::ProjectExtreme { .. } => "project-extreme",
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    branch: Option<Branch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    approximant: Option<OperatorDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
    pass: bool,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

impl Report {
    fn new(command: &'static str, value: f64) -> Self {
        Report {
            command,
            value: Some(value),
            branch: None,
            approximant: None,
            certificate: None,
            pass: true,
            extra: Map::new(),
        }
    }

    fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.extra.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable"),
        );
        self
    }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    command: &'a str,
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
}

fn read_operator(input: &Input) -> Result<Operator, Error> {
    let mut text = String::new();
    let read = match &input.input {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path).map(|s| text = s),
        _ => std::io::stdin().read_to_string(&mut text).map(|_| ()),
    };
    read.map_err(|e| Error::Invalid {
        field: "input".into(),
        reason: e.to_string(),
    })?;
    parse_operator(&text)
}

fn parse_point(text: &str) -> Result<Vec<f64>, Error> {
    let bad = |reason: String| Error::Invalid {
        field: "point".into(),
        reason,
    };
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| bad(e.to_string()));
    }
    trimmed
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| bad(format!("{s:?}: {e}")))
        })
        .collect()
}

fn approx_report(t: &Operator, positive: bool) -> Result<Report, Error> {
    let result = if positive {
        match t {
            Operator::L2(h) => positive_ball_approx(h)?.map(Operator::L2),
            Operator::L1(_) => {
                return Err(Error::Invalid {
                    field: "space".into(),
                    reason: "positive approximation needs an l2 diagonal model".into(),
                })
            }
        }
    } else {
        t.best_ball_approx()?
    };
    let k_norm = result.approximant.op_norm();
    let pass = (result.distance - t.dist_ball()).abs() <= CLOSED_FORM_TOL
        && k_norm <= 1.0 + 1e-12
        && result.approximant.is_compact();
    let mut report = Report::new("approx", result.distance);
    report.branch = Some(result.branch);
    report.approximant = Some(OperatorDoc::from_operator(&result.approximant));
    report.certificate = Some(result.certificate);
    report.pass = pass;
    Ok(report)
}

fn run(command: &Command) -> Result<Report, Error> {
    Ok(match command {
        Command::Norm(input) => Report::new("norm", read_operator(input)?.op_norm()),
        Command::Essnorm(input) => Report::new("essnorm", read_operator(input)?.ess_norm()),
        Command::Distball(input) => {
            let t = read_operator(input)?;
            Report::new("distball", t.dist_ball())
                .with("op_norm", t.op_norm())
                .with("ess_norm", t.ess_norm())
        }
        Command::Approx { input, positive } => approx_report(&read_operator(input)?, *positive)?,
        Command::Verify {
            input,
            samples,
            seed,
            tol,
        } => {
            let t = read_operator(input)?;
            let d = t.dist_ball();
            let r = competitor_search_with_tol(&t, d, *samples, *seed, *tol)?;
            let mut report = Report::new("verify", d)
                .with("best_found", r.best_found)
                .with("best_label", &r.best_label)
                .with(
                    "best_competitor",
                    OperatorDoc::from_operator(&r.best_competitor),
                )
                .with("trials", r.trials)
                .with("seed", seed)
                .with("never_beaten", r.never_beaten)
                .with("attained", r.attained);
            report.pass = r.pass;
            report
        }
        Command::ProjectExtreme {
            alpha,
            point,
            space,
            samples,
            seed,
            tol,
        } => {
            let space: Space = space.parse()?;
            let e = NormedSpacePoint::new(space, parse_point(point)?)?;
            let extreme = extreme::is_extreme(&e)?;
            let uniqueness = extreme::verify_unique_projection(*alpha, &e, *samples, *seed, *tol)?;
            let projection: Vec<f64> = e.coords.iter().map(|v| alpha.signum() * v + 0.0).collect();
            let mut report = Report::new("project-extreme", alpha.abs() - 1.0)
                .with("space", space)
                .with("extreme", extreme)
                .with("projection", projection)
                .with("uniqueness", &uniqueness);
            report.pass = extreme && uniqueness.pass;
            report
        }
    })
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string(value).expect("finite output"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            print_json(&Diagnostic {
                command: "",
                error: e.kind().to_string(),
                field: None,
            });
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let name = cli.command.name();
    match run(&cli.command) {
        Ok(report) => {
            print_json(&report);
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            print_json(&Diagnostic {
                command: name,
                error: e.to_string(),
                field: e.field(),
            });
            ExitCode::from(1)
        }
    }
}

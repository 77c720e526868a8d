//! Command-line surface. Exit codes: 0 all checks pass, 1 at least one
//! defect or violation, 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use isopair::certify::certify;
use isopair::exact::{parse_rat, Rat};
use isopair::iso::verify::{verify_compatibility, verify_composite, verify_jacobi, Regime};
use isopair::iso::PairPresentation;
use isopair::lab::{run_experiment, ExperimentConfig};
use isopair::opexpr::parse_operator;
use isopair::pairspec::{emit_pair_spec, parse_pair_spec};
use isopair::report::{Check, Format, Report, Val};
use isopair::rmatrix::{sweep_defects, Normalization};
use isopair::shapovalov::weight_ratio;
use isopair::shift::VermaContext;
use isopair::verma::{
    chart_overlap_consistency, rep_generator, verify_composed_representation, Family,
};

#[derive(Parser)]
#[command(
    name = "isopair",
    version,
    about = "Exact isotopic-pair algebra, Verma-module representations, operator-class certification and a truncation laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format: json | csv | text.
    #[arg(long, default_value = "text")]
    format: String,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the Jacobi and compatibility axioms of a pair declaration.
    VerifyPair {
        /// Path to a .ipair declaration.
        #[arg(long)]
        spec: PathBuf,
        /// Index window bound.
        #[arg(long, default_value_t = 6)]
        k: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify chart closure, density, connectedness and coherence.
    VerifyComposite {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 8)]
        k: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify the composed-representation identities and adjoint symmetry.
    VerifyRep {
        #[arg(long, default_value_t = 3)]
        k: i64,
        /// Weight: a rational like 1/2, or "symbolic".
        #[arg(long, default_value = "symbolic")]
        h: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Defect tables for the shift maps R_x.
    Rmatrix {
        /// identity | multiplicativity | mybe | compensated
        #[arg(long)]
        defect: String,
        #[arg(long, default_value = "paper")]
        normalization: String,
        #[arg(long, default_value_t = 4)]
        k: i64,
        /// Constant in front of [a,b] in the modified Yang-Baxter form.
        #[arg(long, default_value = "1")]
        mybe_constant: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Operator-class certificate for an operator expression.
    Certify {
        /// Operator expression, e.g. "f(-1)" or "comm(f(1),f(-1))".
        #[arg(long)]
        op: String,
        #[arg(long, default_value = "symbolic")]
        h: String,
        /// Subtract the diagonal scalar part before classifying.
        #[arg(long)]
        modulo_scalars: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Witt-relation deviation table with certificates.
    Deviation {
        #[arg(long, default_value_t = 4)]
        k: i64,
        #[arg(long, default_value = "symbolic")]
        h: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Floating-point truncation experiments from a JSON config.
    Lab {
        /// JSON experiment configuration.
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit canonical data tables.
    EmitTables {
        /// witt-spec | rep-coeffs | weight-ratios
        #[arg(long)]
        what: String,
        #[arg(long, default_value_t = 4)]
        k: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ISOPAIR_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n >= 1 {
                isopair::sweep::set_thread_cap(n);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_weight(text: &str) -> Result<VermaContext, String> {
    if text == "symbolic" {
        return Ok(VermaContext::symbolic());
    }
    let h: Rat = parse_rat(text).ok_or_else(|| format!("bad weight `{text}`"))?;
    VermaContext::numeric(h).map_err(|e| e.to_string())
}

fn emit(report: &Report, output: &OutputArgs) -> Result<bool, String> {
    let format = Format::from_name(&output.format)
        .ok_or_else(|| format!("unknown format `{}`", output.format))?;
    let bytes = report.emit(format);
    match &output.out {
        None => print!("{bytes}"),
        Some(path) => std::fs::write(path, bytes).map_err(|e| e.to_string())?,
    }
    Ok(report.passed())
}

fn write_or_print(text: &str, output: &OutputArgs) -> Result<(), String> {
    match &output.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
    }
}

fn regime_val(r: &Regime) -> Val {
    match r {
        Regime::PolynomialIdentity { degree_bound } => Val::map(vec![
            ("kind", Val::Str("polynomial-identity".into())),
            ("degree_bound", Val::Int(*degree_bound as i64)),
        ]),
        Regime::WindowOnly => Val::map(vec![("kind", Val::Str("window-only".into()))]),
    }
}

fn load_pair(path: &PathBuf) -> Result<PairPresentation, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_pair_spec(&text).map_err(|e| e.to_string())
}

fn defects_val(pair: &PairPresentation, defects: &[isopair::iso::verify::TupleDefect]) -> Val {
    Val::List(
        defects
            .iter()
            .take(50)
            .map(|d| {
                Val::map(vec![
                    ("family", Val::Str(pair.family_names[d.family].clone())),
                    ("indices", Val::List(d.indices.iter().map(|&i| Val::Int(i)).collect())),
                    ("defect", Val::Str(d.defect.render(&pair.family_names))),
                ])
            })
            .collect(),
    )
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::VerifyPair { spec, k, output } => {
            let pair = load_pair(&spec)?;
            let mut report = Report::new("verify-pair");
            report.param("spec", spec.display()).param("K", k);
            let jac = verify_jacobi(&pair, k).map_err(|e| e.to_string())?;
            report.push(Check {
                id: "jacobi".into(),
                inputs: Val::map(vec![("K", Val::Int(k))]),
                payload: Val::map(vec![
                    ("regime", regime_val(&jac.regime)),
                    ("defect_count", Val::Int(jac.defects.len() as i64)),
                    ("defects", defects_val(&pair, &jac.defects)),
                ]),
                pass: jac.passed(),
            });
            let compat = verify_compatibility(&pair, k).map_err(|e| e.to_string())?;
            report.push(Check {
                id: "compatibility".into(),
                inputs: Val::map(vec![("K", Val::Int(k))]),
                payload: Val::map(vec![
                    ("regime", regime_val(&compat.regime)),
                    ("defect_count", Val::Int(compat.defects.len() as i64)),
                    ("defects", defects_val(&pair, &compat.defects)),
                ]),
                pass: compat.passed(),
            });
            emit(&report, &output)
        }
        Command::VerifyComposite { spec, k, output } => {
            let pair = load_pair(&spec)?;
            if pair.charts.is_empty() {
                return Err("declaration has no charts".into());
            }
            let rep = verify_composite(&pair, &pair.charts, k).map_err(|e| e.to_string())?;
            let mut report = Report::new("verify-composite");
            report.param("spec", spec.display()).param("K", k);
            report.push(Check {
                id: "closure".into(),
                inputs: Val::Null,
                payload: Val::Int(rep.closure_violations.len() as i64),
                pass: rep.closure_violations.is_empty(),
            });
            report.push(Check {
                id: "density".into(),
                inputs: Val::Null,
                payload: Val::Int(rep.density_misses.len() as i64),
                pass: rep.density_misses.is_empty(),
            });
            report.push(Check {
                id: "connected".into(),
                inputs: Val::Null,
                payload: Val::Bool(rep.connected),
                pass: rep.connected,
            });
            report.push(Check {
                id: "coherent".into(),
                inputs: Val::Null,
                payload: Val::Bool(rep.coherent),
                pass: rep.coherent,
            });
            let inters: Vec<Val> = rep
                .intersections
                .iter()
                .map(|(a, b, ws)| {
                    let win = |w: &isopair::iso::IndexWindow| {
                        Val::map(vec![
                            ("lower", w.lower.map_or(Val::Null, Val::Int)),
                            ("upper", w.upper.map_or(Val::Null, Val::Int)),
                        ])
                    };
                    Val::map(vec![
                        ("charts", Val::Str(format!("{a}&{b}"))),
                        ("family0", win(&ws[0])),
                        ("family1", win(&ws[1])),
                    ])
                })
                .collect();
            report.push(Check {
                id: "intersections".into(),
                inputs: Val::Null,
                payload: Val::List(inters),
                pass: true,
            });
            emit(&report, &output)
        }
        Command::VerifyRep { k, h, output } => {
            let ctx = parse_weight(&h)?;
            let mut report = Report::new("verify-rep");
            report.param("K", k).param("h", &h);
            let rep = verify_composed_representation(k, &ctx).map_err(|e| e.to_string())?;
            let in_chart_failures: Vec<Val> = rep
                .checks
                .iter()
                .filter(|c| c.chart.is_some() && !c.defect_is_zero)
                .map(|c| Val::Str(format!("({:?},{},{},{})", c.side, c.x, c.y, c.a)))
                .collect();
            let in_chart_pass = in_chart_failures.is_empty();
            report.push(Check {
                id: "in-chart-identities".into(),
                inputs: Val::map(vec![("K", Val::Int(k))]),
                payload: Val::map(vec![("failures", Val::List(in_chart_failures))]),
                pass: in_chart_pass,
            });
            let cross_bad: Vec<Val> = rep
                .checks
                .iter()
                .filter(|c| {
                    c.chart.is_none()
                        && !c.defect_is_zero
                        && !c
                            .certificate
                            .as_ref()
                            .is_some_and(|cert| cert.verdict.is_hilbert_schmidt())
                })
                .map(|c| Val::Str(format!("({:?},{},{},{})", c.side, c.x, c.y, c.a)))
                .collect();
            let cross_pass = cross_bad.is_empty();
            report.push(Check {
                id: "cross-chart-certificates".into(),
                inputs: Val::map(vec![("K", Val::Int(k))]),
                payload: Val::map(vec![("outside_scalar_plus_hs", Val::List(cross_bad))]),
                pass: cross_pass,
            });
            let overlaps = chart_overlap_consistency(&ctx).map_err(|e| e.to_string())?;
            report.push(Check {
                id: "chart-overlap".into(),
                inputs: Val::Null,
                payload: Val::List(
                    overlaps
                        .iter()
                        .map(|c| {
                            Val::map(vec![
                                (
                                    "generator",
                                    Val::Str(format!("{}({})", c.family.name(), c.index)),
                                ),
                                ("consistent", Val::Bool(c.consistent)),
                                ("canonical", Val::Str(c.canonical.clone())),
                            ])
                        })
                        .collect(),
                ),
                pass: overlaps.iter().all(|c| c.consistent),
            });
            let mut adjoint_ok = true;
            for kk in 1..=k.max(1) {
                let e = rep_generator(Family::E, kk, &ctx).map_err(|e| e.to_string())?;
                let em = rep_generator(Family::E, -kk, &ctx).map_err(|e| e.to_string())?;
                adjoint_ok &= e.adjoint().map_err(|e| e.to_string())? == em;
                let f = rep_generator(Family::F, kk, &ctx).map_err(|e| e.to_string())?;
                let fm = rep_generator(Family::F, -kk, &ctx).map_err(|e| e.to_string())?;
                adjoint_ok &= f.adjoint().map_err(|e| e.to_string())? == fm;
            }
            report.push(Check {
                id: "adjoint-symmetry".into(),
                inputs: Val::map(vec![("k_max", Val::Int(k))]),
                payload: Val::Bool(adjoint_ok),
                pass: adjoint_ok,
            });
            emit(&report, &output)
        }
        Command::Rmatrix { defect, normalization, k, mybe_constant, output } => {
            let norm = match normalization.as_str() {
                "paper" => Normalization::Paper,
                "half" => Normalization::Half,
                other => return Err(format!("unknown normalization `{other}`")),
            };
            let check: &'static str = match defect.as_str() {
                "identity" => "identity",
                "multiplicativity" => "multiplicativity",
                "mybe" => "mybe",
                "compensated" => "compensated",
                other => return Err(format!("unknown defect check `{other}`")),
            };
            let constant = parse_rat(&mybe_constant)
                .ok_or_else(|| format!("bad constant `{mybe_constant}`"))?;
            let pair = PairPresentation::witt();
            let table =
                sweep_defects(&pair, check, k, norm, &constant).map_err(|e| e.to_string())?;
            let mut report = Report::new("rmatrix");
            report.param("defect", &defect).param("normalization", norm.name()).param("K", k);
            for row in &table.rows {
                report.push(Check {
                    id: format!("defect{:?}", row.indices),
                    inputs: Val::List(row.indices.iter().map(|&i| Val::Int(i)).collect()),
                    payload: Val::Str(row.defect.render(&pair.family_names)),
                    pass: false,
                });
            }
            if table.rows.is_empty() {
                report.push(Check {
                    id: "no-defects".into(),
                    inputs: Val::map(vec![("K", Val::Int(k))]),
                    payload: Val::Bool(true),
                    pass: true,
                });
            }
            emit(&report, &output)
        }
        Command::Certify { op, h, modulo_scalars, output } => {
            let ctx = parse_weight(&h)?;
            let operator = parse_operator(&op, &ctx).map_err(|e| e.to_string())?;
            let cert = certify(&operator, modulo_scalars).map_err(|e| e.to_string())?;
            let mut report = Report::new("certify");
            report.param("op", &op).param("h", &h).param("modulo_scalars", modulo_scalars);
            report.push(Check {
                id: "certificate".into(),
                inputs: Val::Str(op.clone()),
                payload: Val::map(vec![
                    ("verdict", Val::Str(cert.verdict.name().into())),
                    (
                        "delta_per_term",
                        Val::List(
                            cert.deltas
                                .iter()
                                .map(|&(s, d)| {
                                    Val::map(vec![
                                        ("offset", Val::Int(s)),
                                        ("delta", Val::Int(d)),
                                    ])
                                })
                                .collect(),
                        ),
                    ),
                    (
                        "scalar_part",
                        cert.scalar_part.as_ref().map_or(Val::Null, |s| Val::Str(s.render())),
                    ),
                    (
                        "exceptional_h_poly",
                        cert.exceptional_poly
                            .as_ref()
                            .map_or(Val::Null, |p| Val::Str(p.render())),
                    ),
                    (
                        "exceptional_h_roots",
                        Val::List(
                            cert.exceptional_roots.iter().map(|r| Val::Rat(r.clone())).collect(),
                        ),
                    ),
                    ("monomial_basis", Val::Bool(cert.monomial_basis)),
                    ("operator", Val::Str(operator.render())),
                ]),
                pass: true,
            });
            emit(&report, &output)
        }
        Command::Deviation { k, h, output } => {
            let ctx = parse_weight(&h)?;
            let mut report = Report::new("deviation");
            report.param("K", k).param("h", &h);
            for i in -k..=k {
                for j in -k..=k {
                    let dev =
                        isopair::verma::witt_deviation(i, j, &ctx).map_err(|e| e.to_string())?;
                    if dev.is_zero() {
                        continue;
                    }
                    let cert = certify(&dev, true).map_err(|e| e.to_string())?;
                    report.push(Check {
                        id: format!("dev({i},{j})"),
                        inputs: Val::List(vec![Val::Int(i), Val::Int(j)]),
                        payload: Val::map(vec![
                            ("verdict", Val::Str(cert.verdict.name().into())),
                            (
                                "scalar_part",
                                cert.scalar_part
                                    .as_ref()
                                    .map_or(Val::Null, |s| Val::Str(s.render())),
                            ),
                            (
                                "exceptional_h_roots",
                                Val::List(
                                    cert.exceptional_roots
                                        .iter()
                                        .map(|r| Val::Rat(r.clone()))
                                        .collect(),
                                ),
                            ),
                            ("operator", Val::Str(dev.render())),
                        ]),
                        pass: cert.verdict.is_hilbert_schmidt() || cert.verdict == isopair::certify::Verdict::Zero,
                    });
                }
            }
            if report.checks.is_empty() {
                report.push(Check {
                    id: "all-zero".into(),
                    inputs: Val::map(vec![("K", Val::Int(k))]),
                    payload: Val::Bool(true),
                    pass: true,
                });
            }
            emit(&report, &output)
        }
        Command::Lab { config, output } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("{}: {e}", config.display()))?;
            let cfg: ExperimentConfig =
                serde_json::from_str(&text).map_err(|e| format!("bad config: {e}"))?;
            let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
            emit(&report, &output)
        }
        Command::EmitTables { what, k, output } => match what.as_str() {
            "witt-spec" => {
                let text = emit_pair_spec(&PairPresentation::witt());
                write_or_print(&text, &output)?;
                Ok(true)
            }
            "rep-coeffs" => {
                let ctx = VermaContext::symbolic();
                let mut report = Report::new("emit-tables");
                report.param("what", &what).param("K", k);
                for fam in [Family::E, Family::F] {
                    for idx in -k..=k {
                        let op = rep_generator(fam, idx, &ctx).map_err(|e| e.to_string())?;
                        report.push(Check {
                            id: format!("{}({})", fam.name(), idx),
                            inputs: Val::Null,
                            payload: Val::Str(op.render()),
                            pass: true,
                        });
                    }
                }
                emit(&report, &output)
            }
            "weight-ratios" => {
                let mut report = Report::new("emit-tables");
                report.param("what", &what).param("K", k);
                for s in -k..=k {
                    report.push(Check {
                        id: format!("ratio({s})"),
                        inputs: Val::Int(s),
                        payload: Val::Str(weight_ratio(s).render()),
                        pass: true,
                    });
                }
                emit(&report, &output)
            }
            other => Err(format!("unknown table `{other}`")),
        },
    }
}

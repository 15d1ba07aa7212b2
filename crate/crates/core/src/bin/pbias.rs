use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use paritybias::genfunc::{build_series, list_families, FamilyId, FamilyParams};
use paritybias::identities::run_all_proof_substitutions;
use paritybias::inequality::{find_threshold, reversed_bias_scan, Relation, TheoremId, TheoremSpec};
use paritybias::oracle::{BiasSpec, ConstraintSpec, Oracle, OracleCaps, OracleTier, ParityFamily, SeparationMode};
use paritybias::report::{render_csv, render_text, report_all, theorem_record, RunConfig, RunReport};
use paritybias::Error;

#[derive(Parser)]
#[command(name = "pbias", version, about = "Exact checks of parity-bias inequalities for restricted partitions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the coefficients of a generating function
    Expand {
        family: String,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 200)]
        order: usize,
        #[command(flatten)]
        output: Output,
    },
    /// List the generating-function families and their parameters
    Families {
        #[command(flatten)]
        output: Output,
    },
    /// Count or list partitions directly, without generating functions
    Oracle {
        #[command(subcommand)]
        query: OracleCmd,
    },
    /// Verify a theorem on its claimed range (all catalog values of m when --m is omitted)
    Verify {
        theorem: String,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        order: usize,
        /// Start the range here instead of at the claimed starting point
        #[arg(long)]
        from: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Check every classical identity at the substitutions used in the proofs
    Identities {
        #[arg(long, default_value_t = 200)]
        order: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Explore where an inequality starts to hold
    Scan {
        #[command(subcommand)]
        what: ScanCmd,
    },
    /// Run every check and write a run report
    Report {
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        order: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Constraint {
    #[arg(long, default_value_t = 1)]
    min_part: u32,
    /// Comma-separated parts that may not appear
    #[arg(long, value_delimiter = ',')]
    forbid: Vec<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Dp,
    Enum,
}

impl From<TierArg> for OracleTier {
    fn from(t: TierArg) -> Self {
        match t {
            TierArg::Dp => OracleTier::Dp,
            TierArg::Enum => OracleTier::Enum,
        }
    }
}

#[derive(Subcommand)]
enum OracleCmd {
    /// List the partitions of n that satisfy the constraints
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        constraint: Constraint,
        /// ordinary, even_below_odd or odd_below_even
        #[arg(long, default_value = "ordinary")]
        mode: String,
        /// Drop partitions without odd parts
        #[arg(long)]
        exclude_all_even: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Partitions with more parts = j (mod m) than parts = k (mod m), for 0..=n
    Bias {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        constraint: Constraint,
        #[arg(long, value_enum, default_value = "dp")]
        tier: TierArg,
        #[command(flatten)]
        output: Output,
    },
    /// Parts >= m with prescribed count parities (E_me, O_me, E_mo, O_mo), for 0..=n
    Parity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        which: String,
        #[arg(long, value_enum, default_value = "dp")]
        tier: TierArg,
        #[command(flatten)]
        output: Output,
    },
    /// Partitions with parts separated by parity, for 0..=n
    Separated {
        #[arg(long)]
        n: usize,
        /// even_below_odd or odd_below_even
        #[arg(long)]
        mode: String,
        #[arg(long)]
        non_unitary: bool,
        #[arg(long, value_enum, default_value = "dp")]
        tier: TierArg,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum ScanCmd {
    /// Threshold of `lhs <relation> rhs` between two families
    Pair {
        lhs: String,
        rhs: String,
        #[arg(long, default_value = "gt")]
        relation: String,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Where q_{a,b,m} < q_{b,a,m} holds, for 1 <= a < b <= m (observations only)
    ReversedBias {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        #[command(flatten)]
        output: Output,
    },
}

struct Outcome {
    body: String,
    code: u8,
}

fn ok(body: String) -> Result<Outcome, Error> {
    Ok(Outcome { body, code: 0 })
}

fn emit(output: &Output, outcome: &Outcome) -> std::io::Result<()> {
    match &output.out {
        Some(path) => fs::write(path, &outcome.body),
        None => {
            print!("{}", outcome.body);
            Ok(())
        }
    }
}

fn fmt_of(output: &Output, default: Format) -> Format {
    output.format.unwrap_or(default)
}

fn table(format: Format, header: &str, rows: &[(usize, String)], extra: serde_json::Value) -> String {
    match format {
        Format::Text => rows.iter().map(|(n, v)| format!("q^{n}: {v}\n")).collect(),
        Format::Csv => {
            let mut s = format!("n,{header}\n");
            for (n, v) in rows {
                s.push_str(&format!("{n},{v}\n"));
            }
            s
        }
        Format::Json => {
            let mut obj = extra;
            obj[header] = rows.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>().into();
            format!("{}\n", serde_json::to_string_pretty(&obj).expect("json"))
        }
    }
}

fn render_report(report: &RunReport, format: Format) -> String {
    match format {
        Format::Text => render_text(report),
        Format::Csv => render_csv(report),
        Format::Json => report.to_json(),
    }
}

fn run(cmd: &Cmd, caps: OracleCaps) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Expand { family, m, order, output } => {
            let f: FamilyId = family.parse()?;
            let s = build_series(f, FamilyParams { m: *m }, *order)?;
            let rows: Vec<(usize, String)> = s.coeffs().iter().map(|c| c.to_string()).enumerate().collect();
            let meta = json!({ "family": f.as_str(), "m": m, "order": order });
            ok(table(fmt_of(output, Format::Text), "coefficient", &rows, meta))
        }
        Cmd::Families { output } => {
            let fams = list_families();
            let body = match fmt_of(output, Format::Text) {
                Format::Text => fams
                    .iter()
                    .map(|f| format!("{:<18} {:<26} {}\n", f.id.as_str(), f.params.describe(), f.description))
                    .collect(),
                Format::Csv => {
                    let mut s = String::from("id,params,description\n");
                    for f in &fams {
                        s.push_str(&format!("{},{},\"{}\"\n", f.id.as_str(), f.params.describe(), f.description));
                    }
                    s
                }
                Format::Json => {
                    let v: Vec<_> = fams
                        .iter()
                        .map(|f| json!({ "id": f.id.as_str(), "params": f.params.describe(), "description": f.description }))
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
                }
            };
            ok(body)
        }
        Cmd::Oracle { query } => run_oracle(query, Oracle::new(caps)),
        Cmd::Verify { theorem, m, max_n, order, from, output } => {
            let id: TheoremId = theorem.parse()?;
            let specs = match (m, id.needs_m()) {
                (None, true) => TheoremSpec::catalog().into_iter().filter(|s| s.id == id).collect(),
                _ => vec![TheoremSpec::new(id, *m)?],
            };
            let records: Vec<_> = specs.iter().map(|s| theorem_record(s, *from, *max_n, *order, caps)).collect();
            let report = RunReport::new(
                RunConfig { max_n: *max_n, order: *order, enum_cap: caps.enum_cap, dp_cap: caps.dp_cap },
                records,
            );
            Ok(Outcome { body: render_report(&report, fmt_of(output, Format::Text)), code: report.exit_code() as u8 })
        }
        Cmd::Identities { order, output } => {
            let outcomes = run_all_proof_substitutions(*order)?;
            let failed = outcomes.iter().any(|o| !o.result.passed);
            let body = match fmt_of(output, Format::Text) {
                Format::Text => outcomes
                    .iter()
                    .map(|o| {
                        let verdict = if o.result.passed { "PASS" } else { "FAIL" };
                        let detail = match &o.result.first_mismatch {
                            Some(mm) => format!("  first mismatch at q^{}: {} vs {}", mm.exponent, mm.lhs, mm.rhs),
                            None => String::new(),
                        };
                        format!("{verdict:<5} {}  order {}{detail}\n", o.check.label(), o.result.verified_order)
                    })
                    .collect(),
                Format::Csv => {
                    let mut s = String::from("identity,passed,verified_order,first_mismatch\n");
                    for o in &outcomes {
                        let mm = o.result.first_mismatch.as_ref().map(|m| m.exponent.to_string()).unwrap_or_default();
                        s.push_str(&format!(
                            "\"{}\",{},{},{mm}\n",
                            o.check.label(),
                            o.result.passed,
                            o.result.verified_order
                        ));
                    }
                    s
                }
                Format::Json => {
                    let v: Vec<_> =
                        outcomes.iter().map(|o| json!({ "identity": o.check.label(), "result": o.result })).collect();
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
                }
            };
            Ok(Outcome { body, code: u8::from(failed) })
        }
        Cmd::Scan { what } => run_scan(what, caps),
        Cmd::Report { all, max_n, order, output } => {
            if !all {
                return Err(Error::Parameter("report currently supports only --all".into()));
            }
            let report = report_all(*max_n, *order, caps);
            let format = fmt_of(output, Format::Json);
            let mut outcome = Outcome { body: render_report(&report, format), code: report.exit_code() as u8 };
            if output.out.is_some() {
                // the file gets the full report; the terminal gets the summary
                eprint!("{}", render_text(&report));
            }
            outcome.code = report.exit_code() as u8;
            Ok(outcome)
        }
    }
}

fn counts_table(format: Format, values: Vec<num_bigint::BigUint>, meta: serde_json::Value) -> String {
    let rows: Vec<(usize, String)> = values.iter().map(|v| v.to_string()).enumerate().collect();
    table(format, "count", &rows, meta)
}

fn run_oracle(query: &OracleCmd, oracle: Oracle) -> Result<Outcome, Error> {
    match query {
        OracleCmd::Enumerate { n, constraint, mode, exclude_all_even, output } => {
            let mut c = ConstraintSpec::ordinary()
                .with_min_part(constraint.min_part)
                .forbid(constraint.forbid.iter().copied())
                .with_mode(mode.parse::<SeparationMode>()?);
            if *exclude_all_even {
                c = c.excluding_all_even();
            }
            let parts = oracle.enumerate(*n, &c)?;
            let body = match fmt_of(output, Format::Text) {
                Format::Text | Format::Csv => parts.iter().map(|p| format!("{p}\n")).collect(),
                Format::Json => {
                    let v: Vec<&[u32]> = parts.iter().map(|p| p.parts()).collect();
                    format!("{}\n", serde_json::to_string(&v).expect("json"))
                }
            };
            ok(body)
        }
        OracleCmd::Bias { n, j, k, m, constraint, tier, output } => {
            let b = BiasSpec::new(*j, *k, *m)?;
            let c =
                ConstraintSpec::ordinary().with_min_part(constraint.min_part).forbid(constraint.forbid.iter().copied());
            let t = match tier {
                TierArg::Dp => oracle.bias_table_dp(*n, &c, b)?,
                TierArg::Enum => oracle.bias_table_enum(*n, &c, b)?,
            };
            let meta = json!({ "j": j, "k": k, "m": m, "min_part": constraint.min_part, "forbid": constraint.forbid });
            ok(counts_table(fmt_of(output, Format::Text), t.more_j, meta))
        }
        OracleCmd::Parity { n, m, which, tier, output } => {
            let w: ParityFamily = which.parse()?;
            let v = oracle.parity_table(*n, *m, w, (*tier).into())?;
            let meta = json!({ "which": w.as_str(), "m": m });
            ok(counts_table(fmt_of(output, Format::Text), v, meta))
        }
        OracleCmd::Separated { n, mode, non_unitary, tier, output } => {
            let mode: SeparationMode = mode.parse()?;
            let v = oracle.separated_table(*n, mode, *non_unitary, (*tier).into())?;
            let meta = json!({ "mode": mode.as_str(), "non_unitary": non_unitary });
            ok(counts_table(fmt_of(output, Format::Text), v, meta))
        }
    }
}

fn run_scan(what: &ScanCmd, caps: OracleCaps) -> Result<Outcome, Error> {
    match what {
        ScanCmd::Pair { lhs, rhs, relation, m, max_n, output } => {
            let rel: Relation = relation.parse()?;
            let build = |name: &str| -> Result<_, Error> {
                let f: FamilyId = name.parse()?;
                let params = if f.param_kind() == paritybias::genfunc::ParamKind::None {
                    FamilyParams::none()
                } else {
                    FamilyParams { m: *m }
                };
                Ok(build_series(f, params, *max_n)?.into_coeffs())
            };
            let scan = find_threshold(&build(lhs)?, &build(rhs)?, rel, *max_n)?;
            let body = match fmt_of(output, Format::Text) {
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(
                        &json!({ "lhs": lhs, "rhs": rhs, "relation": rel, "max_n": max_n, "scan": scan })
                    )
                    .expect("json")
                ),
                _ => {
                    let t = scan.threshold.map(|t| t.to_string()).unwrap_or_else(|| "none".into());
                    let v: Vec<String> = scan.violations.iter().map(|v| v.n.to_string()).collect();
                    format!(
                        "{lhs} {} {rhs} on [0, {max_n}]: threshold {t}; violations at {{{}}}\n",
                        rel.symbol(),
                        v.join(", ")
                    )
                }
            };
            ok(body)
        }
        ScanCmd::ReversedBias { m, max_n, output } => {
            let rows = reversed_bias_scan(*m, *max_n, caps)?;
            let body = match fmt_of(output, Format::Text) {
                Format::Json => {
                    let v: Vec<_> =
                        rows.iter().map(|(label, scan)| json!({ "relation": label, "scan": scan })).collect();
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
                }
                _ => rows
                    .iter()
                    .map(|(label, scan)| {
                        let t = scan.threshold.map(|t| t.to_string()).unwrap_or_else(|| "none".into());
                        format!("{label}: holds from {t} on [0, {max_n}], {} exceptions\n", scan.violations.len())
                    })
                    .collect(),
            };
            ok(body)
        }
    }
}

fn output_of(cmd: &Cmd) -> &Output {
    match cmd {
        Cmd::Expand { output, .. }
        | Cmd::Families { output }
        | Cmd::Verify { output, .. }
        | Cmd::Identities { output, .. }
        | Cmd::Report { output, .. } => output,
        Cmd::Oracle { query } => match query {
            OracleCmd::Enumerate { output, .. }
            | OracleCmd::Bias { output, .. }
            | OracleCmd::Parity { output, .. }
            | OracleCmd::Separated { output, .. } => output,
        },
        Cmd::Scan { what } => match what {
            ScanCmd::Pair { output, .. } | ScanCmd::ReversedBias { output, .. } => output,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match OracleCaps::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("pbias: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli.cmd, caps) {
        Ok(outcome) => {
            if let Err(e) = emit(output_of(&cli.cmd), &outcome) {
                eprintln!("pbias: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("pbias: {e}");
            ExitCode::from(2)
        }
    }
}

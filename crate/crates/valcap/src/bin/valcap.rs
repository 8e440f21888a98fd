//! Command-line surface. Exit codes: 0 clean, 2 usage error, 3 a computed
//! value disagrees with a published one, 4 resource budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use valcap::error::{Error, Result};
use valcap::ordering::{
    alpha_from_integers, greedy_p_ordering, power_sum_truncation, slope_estimate, CharSequence,
};
use valcap::powersets::{closure_spec, validate_spec, waring_number, ClosureSpec, PowerSumParams};
use valcap::report::{reference_table, run_capacity, OracleRequest, TABLE_ORACLE_N};

#[derive(Parser)]
#[command(
    name = "valcap",
    version,
    about = "Exact p-adic valuative capacities of power-sum sets, with built-in audits"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact capacity of sums of ell d-th powers, with cross-checks.
    Capacity {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        ell: u32,
        /// Also confirm the value against both empirical oracles.
        #[arg(long)]
        verify_oracle: bool,
        /// Sequence depth for the oracles.
        #[arg(long, default_value_t = 60)]
        n: usize,
        /// Integer truncation bound for the greedy oracle.
        #[arg(long, default_value_t = 4_000_000)]
        bound: u64,
    },
    /// Recompute the published capacity table (ell = 3) and list errata.
    Table {
        /// Stream oracle depth per row.
        #[arg(long, default_value_t = TABLE_ORACLE_N)]
        oracle_n: usize,
    },
    /// Greedy p-ordering and characteristic sequence of an integer set.
    Ordering {
        #[arg(long)]
        p: u64,
        /// With --ell: use the d-th power sums inside [-bound, bound].
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long, default_value_t = 4_000_000)]
        bound: u64,
        /// Explicit comma-separated integers instead of a power-sum set.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        set: Option<Vec<i128>>,
    },
    /// p-adic closure structure of sums of ell d-th powers.
    Closure {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        ell: u32,
    },
    /// Waring number g(d, p^e): least s covering every residue mod p^e.
    Waring {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(cli: &Cli, text: String) -> Result<u8> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidParams(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Capacity {
            p,
            d,
            ell,
            verify_oracle,
            n,
            bound,
        } => {
            if *ell < 2 {
                return Err(Error::InvalidParams(
                    "capacity needs at least two summands; use `closure` for ell = 1".into(),
                ));
            }
            let oracle = verify_oracle.then_some(OracleRequest { n: *n, bound: *bound });
            let report = run_capacity(*p, *d, *ell, oracle)?;
            let text = match cli.format {
                Format::Json => pretty(report.to_json()),
                Format::Csv => report.to_csv(),
                Format::Plain => report.to_plain(),
            };
            let disagreed = report.has_disagreement();
            emit(cli, text)?;
            Ok(if disagreed { 3 } else { 0 })
        }
        Cmd::Table { oracle_n } => {
            let table = reference_table(*oracle_n)?;
            let text = match cli.format {
                Format::Json => pretty(table.to_json()),
                Format::Csv => table.to_csv(),
                Format::Plain => table.to_plain(),
            };
            let disagreed = table.has_disagreement();
            emit(cli, text)?;
            Ok(if disagreed { 3 } else { 0 })
        }
        Cmd::Ordering {
            p,
            d,
            ell,
            n,
            bound,
            set,
        } => {
            let out = cmd_ordering(*p, *d, *ell, *n, *bound, set.as_deref(), cli.format)?;
            emit(cli, out)
        }
        Cmd::Closure { p, d, ell } => {
            let out = cmd_closure(*p, *d, *ell, cli.format)?;
            emit(cli, out)
        }
        Cmd::Waring { d, p, e } => {
            let g = waring_number(*d, *p, *e)?;
            let text = match cli.format {
                Format::Json => {
                    let val = match &g {
                        valcap::powersets::WaringNumber::Finite(k) => json!(*k),
                        valcap::powersets::WaringNumber::Unbounded => Value::Null,
                    };
                    pretty(json!({"d": d, "p": p, "e": e, "waring": val}))
                }
                Format::Csv => format!("d,p,e,waring\n{d},{p},{e},{g}\n"),
                Format::Plain => format!("g({d}, {p}^{e}) = {g}\n"),
            };
            emit(cli, text)
        }
    }
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json serialization");
    s.push('\n');
    s
}

fn int_json(x: i128) -> Value {
    i64::try_from(x)
        .map(Value::from)
        .unwrap_or_else(|_| Value::from(x.to_string()))
}

struct OrderingOutput {
    source: Value,
    elements: Vec<i128>,
    alpha: Vec<u64>,
    stable_len: usize,
    unstable_tail: Vec<u64>,
}

fn slope_json(seq: &CharSequence) -> Value {
    let v = seq.values();
    if v.len() < 2 {
        return Value::Null;
    }
    let last = v.len() - 1;
    let endpoint = v[last] as f64 / last as f64;
    let least_squares = if v.len() > 100 {
        slope_estimate(seq, v.len().min(1000)).ok().map(|e| e.least_squares)
    } else {
        None
    };
    json!({"endpoint": endpoint, "least_squares": least_squares})
}

fn cmd_ordering(
    p: u64,
    d: Option<u32>,
    ell: Option<u32>,
    n: usize,
    bound: u64,
    set: Option<&[i128]>,
    format: Format,
) -> Result<String> {
    let (out, full_seq) = match (set, d, ell) {
        (Some(set), None, None) => {
            let ordering = greedy_p_ordering(set, p, n)?;
            let alphas = ordering.alphas().clone();
            (
                OrderingOutput {
                    source: json!({"kind": "explicit", "size": set.len()}),
                    elements: ordering.elements().to_vec(),
                    alpha: alphas.values().to_vec(),
                    stable_len: alphas.len(),
                    unstable_tail: Vec::new(),
                },
                alphas,
            )
        }
        (None, Some(d), Some(ell)) => {
            let params = PowerSumParams::new(p, d, ell)?;
            // Stabilization first: its error carries a usable bound hint.
            let trunc = alpha_from_integers(&params, bound, n)?;
            let elems = power_sum_truncation(&params, bound)?;
            let ordering = greedy_p_ordering(&elems, p, n)?;
            let alphas = ordering.alphas().clone();
            (
                OrderingOutput {
                    source: json!({"kind": "power-sums", "d": d, "ell": ell, "bound": bound}),
                    elements: ordering.elements().to_vec(),
                    alpha: alphas.values().to_vec(),
                    stable_len: trunc.stable.len(),
                    unstable_tail: trunc.unstable_tail.clone(),
                },
                alphas,
            )
        }
        _ => {
            return Err(Error::InvalidParams(
                "pass either --set, or --d with --ell".into(),
            ))
        }
    };
    Ok(match format {
        Format::Json => pretty(json!({
            "p": p,
            "n": n,
            "source": out.source,
            "elements": out.elements.iter().map(|&x| int_json(x)).collect::<Vec<_>>(),
            "alpha": out.alpha,
            "stable_len": out.stable_len,
            "unstable_tail": out.unstable_tail,
            "slope": slope_json(&full_seq),
        })),
        Format::Csv => {
            let mut s = String::from("n,element,alpha,stable\n");
            for (i, (&a, &al)) in out.elements.iter().zip(&out.alpha).enumerate() {
                s.push_str(&format!("{i},{a},{al},{}\n", i < out.stable_len));
            }
            s
        }
        Format::Plain => {
            let mut s = format!("greedy {p}-ordering, n = 0..{}\n", out.alpha.len() - 1);
            for (i, (&a, &al)) in out.elements.iter().zip(&out.alpha).enumerate() {
                let flag = if i < out.stable_len { "" } else { "  unstable" };
                s.push_str(&format!("{i:>6}  a = {a:>12}  alpha = {al:>8}{flag}\n"));
            }
            let v = full_seq.values();
            if v.len() > 1 {
                let last = v.len() - 1;
                s.push_str(&format!(
                    "stable prefix {} of {}; slope alpha(n)/n = {:.6}\n",
                    out.stable_len,
                    out.alpha.len(),
                    v[last] as f64 / last as f64
                ));
            }
            s
        }
    })
}

fn cmd_closure(p: u64, d: u32, ell: u32, format: Format) -> Result<String> {
    let params = PowerSumParams::new(p, d, ell)?;
    let spec = closure_spec(&params)?;
    let mut validated = Vec::new();
    let mut exponent = 0u32;
    let mut m = 1u64;
    while m.saturating_mul(p) <= 4096 {
        m *= p;
        exponent += 1;
    }
    for n in [exponent.saturating_sub(1).max(1), exponent] {
        let rep = validate_spec(&spec, &params, n)?;
        validated.push((n, rep.matches));
    }
    validated.dedup();
    let (branch, base, scale) = match &spec {
        ClosureSpec::CosetUnion { residues } => ("coset-union", residues, None),
        ClosureSpec::SelfSimilar { base, scale } => ("self-similar", base, Some(*scale)),
    };
    Ok(match format {
        Format::Json => pretty(json!({
            "params": {"p": p, "d": d, "ell": ell},
            "hensel_exponent": params.hensel_exponent(),
            "branch": branch,
            "base": {
                "p": base.p(),
                "e": base.e(),
                "modulus": base.modulus(),
                "residues": base.residues(),
            },
            "scale": scale,
            "validated": validated.iter().map(|(n, ok)| json!({"exponent": n, "matches": ok})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let rs = base
                .residues()
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            format!(
                "p,d,ell,branch,modulus,residues,scale\n{p},{d},{ell},{branch},{},{rs},{}\n",
                base.modulus(),
                scale.map(|s| s.to_string()).unwrap_or_default()
            )
        }
        Format::Plain => {
            let rs = base
                .residues()
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let mut s = format!("closure  p={p} d={d} ell={ell}\n");
            s.push_str(&format!("  branch    {branch}\n"));
            s.push_str(&format!("  base      {{{rs}}} mod {}^{}\n", base.p(), base.e()));
            if let Some(sc) = scale {
                s.push_str(&format!("  scale     {}^{sc} times the whole set\n", base.p()));
            }
            for (n, ok) in &validated {
                s.push_str(&format!(
                    "  validated mod {p}^{n}: {}\n",
                    if *ok { "exact match" } else { "MISMATCH" }
                ));
            }
            s
        }
    })
}

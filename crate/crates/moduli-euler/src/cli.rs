//! Command-line front end: single computations, table sweeps, identity
//! verification, continuum expansions, and the concrete-vs-formal oracle.
//!
//! Results go to stdout (JSON by default, CSV for tables on request),
//! diagnostics to stderr. Every rational is rendered exactly as `p/q`.
//! Exit codes: 0 success / all checks pass, 1 any counterexample or
//! disagreement, 2 usage error, 3 precondition violation.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use moduli_euler::{
    check_identity, chi_orbifold, even_sector_expansion, format_rational, free_energy_concrete,
    free_energy_formal, odd_sector_expansion, penner_prefactor_series, verify_product_identity,
    xi_closed, xi_from_series, ContinuumExpansion, IdentityName, IdentityRange, IdentityReport,
    ModelParams, Rational,
};

const DEFAULT_GENUS_MAX: u32 = 8;
const ORDER_ENV_VAR: &str = "MODULI_EULER_ORDER";

#[derive(Parser)]
#[command(
    name = "moduli-euler",
    version,
    about = "Exact parametrized Euler characteristics of the Goulden-Harer-Jackson matrix model"
)]
struct Cli {
    /// key=value file with defaults (keys: order, genus-max)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute xi^s_g(1/q) by series extraction, closed form, or both
    Xi {
        /// Deformation parameter q >= 1 (gamma = 1/q)
        #[arg(long)]
        q: u32,
        /// Genus g >= 1
        #[arg(long)]
        g: u32,
        /// Number of punctures s >= 0 (g + s >= 2)
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Series truncation order (default: g+s, or MODULI_EULER_ORDER/config)
        #[arg(long)]
        order: Option<u32>,
    },
    /// Grid of xi values over g and s, both computation paths, with agreement
    Table {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        g_max: u32,
        #[arg(long)]
        s_max: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Series truncation order (default: g_max+s_max, or env/config)
        #[arg(long)]
        order: Option<u32>,
    },
    /// Orbifold Euler characteristic chi(M_g^s), odd g
    Chi {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        s: u32,
    },
    /// Sweep one of the named identities and report counterexamples
    Verify {
        #[arg(long, value_enum)]
        identity: IdentityArg,
        #[arg(long, default_value_t = 8)]
        q_max: u32,
        /// Genus bound (doubles as the K bound for p8)
        #[arg(long, default_value_t = 9)]
        g_max: u32,
        #[arg(long, default_value_t = 5)]
        s_max: u32,
    },
    /// Double-scaling-limit expansion terms of F_q(mu)
    Continuum {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        sector: SectorArg,
        /// Genus bound (default: 8, or config genus-max)
        #[arg(long)]
        genus_max: Option<u32>,
    },
    /// Check the formal-N free energy against the concrete-N expansion
    Oracle {
        #[arg(long)]
        q: u32,
        /// Concrete matrix size, a positive multiple of q
        #[arg(long)]
        n: u32,
        /// Series order for the comparison (default: 12, or env/config)
        #[arg(long)]
        order: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Extract,
    Closed,
    Both,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Extract => "extract",
            Method::Closed => "closed",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdentityArg {
    P8,
    P20,
    P21,
    P22,
    Identity1,
    Identity2,
    Am,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SectorArg {
    Even,
    Odd,
}

/// Defaults read from `--config`; flag and environment still win.
#[derive(Debug, Default)]
struct ConfigDefaults {
    order: Option<u32>,
    genus_max: Option<u32>,
}

fn read_config(path: &Path) -> Result<ConfigDefaults, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut defaults = ConfigDefaults::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "config {}:{}: expected key=value, got {raw:?}",
                path.display(),
                lineno + 1
            ));
        };
        let (key, value) = (key.trim(), value.trim());
        let parsed: u32 = value.parse().map_err(|_| {
            format!(
                "config {}:{}: value for {key} must be a nonnegative integer",
                path.display(),
                lineno + 1
            )
        })?;
        match key {
            "order" => defaults.order = Some(parsed),
            "genus-max" | "genus_max" => defaults.genus_max = Some(parsed),
            other => eprintln!("warning: ignoring unknown config key {other:?}"),
        }
    }
    Ok(defaults)
}

fn order_from_env() -> Result<Option<u32>, String> {
    match std::env::var(ORDER_ENV_VAR) {
        Ok(v) => v
            .parse::<u32>()
            .map(Some)
            .map_err(|_| format!("{ORDER_ENV_VAR} must be a nonnegative integer, got {v:?}")),
        Err(_) => Ok(None),
    }
}

fn rational_str(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

struct Output {
    command: &'static str,
    params: Value,
    results: Value,
    pass: Option<bool>,
    started: Instant,
}

impl Output {
    fn new(command: &'static str, params: Value) -> Self {
        Output {
            command,
            params,
            results: Value::Array(Vec::new()),
            pass: None,
            started: Instant::now(),
        }
    }

    fn print(self) {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("params".into(), self.params);
        obj.insert("results".into(), self.results);
        if let Some(p) = self.pass {
            obj.insert("pass".into(), json!(p));
        }
        let elapsed = self.started.elapsed().as_millis() as u64;
        obj.insert("elapsed_ms".into(), json!(elapsed));
        println!("{}", Value::Object(obj));
    }
}

fn identity_report_json(report: &IdentityReport) -> Value {
    json!({
        "identity": report.identity.as_str(),
        "range": report.parameter_range,
        "counterexamples": report
            .counterexamples
            .iter()
            .map(|c| {
                json!({
                    "params": c.params,
                    "lhs": format_rational(&c.lhs),
                    "rhs": format_rational(&c.rhs),
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn continuum_rows(expansion: &ContinuumExpansion) -> Value {
    Value::Array(
        expansion
            .terms
            .iter()
            .map(|t| {
                json!({
                    "mu_power": t.mu_power,
                    "log_mu_power": t.log_mu_power,
                    "coefficient": format_rational(&t.coefficient),
                })
            })
            .collect(),
    )
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are successful exits
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };

    let config = match &cli.config {
        Some(path) => match read_config(path) {
            Ok(c) => c,
            Err(msg) => {
                eprintln!("error: {msg}");
                return 2;
            }
        },
        None => ConfigDefaults::default(),
    };
    let env_order = match order_from_env() {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let resolve_order = |flag: Option<u32>, auto: u32| -> u32 {
        flag.or(env_order).or(config.order).unwrap_or(auto)
    };

    match run_command(cli.command, &config, &resolve_order) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn run_command(
    command: Command,
    config: &ConfigDefaults,
    resolve_order: &dyn Fn(Option<u32>, u32) -> u32,
) -> moduli_euler::Result<i32> {
    match command {
        Command::Xi {
            q,
            g,
            s,
            method,
            order,
        } => {
            let order = resolve_order(order, (g + s).max(2));
            let mut out = Output::new(
                "xi",
                json!({"q": q, "g": g, "s": s, "method": method.as_str(), "order": order}),
            );
            let mut rows = Vec::new();
            let mut extracted = None;
            let mut closed = None;
            // series extraction covers s >= 1 only; at s = 0 the closed form
            // is the value (explicit --method extract still errors)
            if method == Method::Extract || (method == Method::Both && s >= 1) {
                let params = ModelParams::new(q, order)?;
                if g >= 1 && g + s >= 2 && g + s - 1 > order {
                    return Err(moduli_euler::Error::TruncationInsufficient {
                        order,
                        needed: g + s - 1,
                    });
                }
                let record = xi_from_series(&free_energy_formal(&params), q, g, s)?;
                rows.push(json!({"method": "extract", "value": rational_str(&record.value)}));
                extracted = Some(record.value);
            }
            if method != Method::Extract {
                let record = xi_closed(q, g, s)?;
                rows.push(json!({"method": "closed", "value": rational_str(&record.value)}));
                closed = Some(record.value);
            }
            let mut code = 0;
            if let (Some(a), Some(b)) = (&extracted, &closed) {
                let agree = a == b;
                out.pass = Some(agree);
                if !agree {
                    code = 1;
                }
            }
            out.results = Value::Array(rows);
            out.print();
            Ok(code)
        }
        Command::Table {
            q,
            g_max,
            s_max,
            format,
            order,
        } => {
            let auto = (g_max + s_max).max(2);
            let order = resolve_order(order, auto);
            let needed = g_max + s_max;
            if needed >= 1 && needed - 1 > order {
                return Err(moduli_euler::Error::TruncationInsufficient {
                    order,
                    needed: needed - 1,
                });
            }
            let params = ModelParams::new(q, order)?;
            let series = free_energy_formal(&params);
            let mut rows = Vec::new();
            let mut all_agree = true;
            // the grid compares both paths, so it starts at s = 1; use
            // `xi --s 0` for the puncture-free closed-form values
            for g in 1..=g_max {
                for s in 1..=s_max {
                    if g + s < 2 {
                        continue;
                    }
                    let extract = xi_from_series(&series, q, g, s)?;
                    let closed = xi_closed(q, g, s)?;
                    let agree = extract.value == closed.value;
                    all_agree &= agree;
                    rows.push((g, s, extract.value, closed.value, agree));
                }
            }
            match format {
                OutputFormat::Json => {
                    let mut out = Output::new(
                        "table",
                        json!({"q": q, "g_max": g_max, "s_max": s_max, "format": "json", "order": order}),
                    );
                    out.results = Value::Array(
                        rows.iter()
                            .map(|(g, s, e, c, agree)| {
                                json!({
                                    "q": q,
                                    "g": g,
                                    "s": s,
                                    "xi_extract": format_rational(e),
                                    "xi_closed": format_rational(c),
                                    "agree": agree,
                                })
                            })
                            .collect(),
                    );
                    out.pass = Some(all_agree);
                    out.print();
                }
                OutputFormat::Csv => {
                    println!("q,g,s,xi_extract,xi_closed,agree");
                    for (g, s, e, c, agree) in &rows {
                        println!(
                            "{q},{g},{s},{},{},{agree}",
                            format_rational(e),
                            format_rational(c)
                        );
                    }
                }
            }
            Ok(if all_agree { 0 } else { 1 })
        }
        Command::Chi { g, s } => {
            let mut out = Output::new("chi", json!({"g": g, "s": s}));
            let value = chi_orbifold(g, s)?;
            out.results = json!([{"g": g, "s": s, "value": rational_str(&value)}]);
            out.print();
            Ok(0)
        }
        Command::Verify {
            identity,
            q_max,
            g_max,
            s_max,
        } => {
            let mut out = Output::new(
                "verify",
                json!({
                    "identity": format!("{identity:?}").to_lowercase(),
                    "q_max": q_max,
                    "g_max": g_max,
                    "s_max": s_max,
                }),
            );
            let pass = match identity {
                IdentityArg::P8 => {
                    let report = verify_product_identity(q_max, g_max)?;
                    out.results = json!([{
                        "identity": "p8",
                        "range": format!("q = 2..={q_max}, K = 1..={g_max}"),
                        "counterexamples": report
                            .counterexamples
                            .iter()
                            .map(|(q, k, degree, lhs, rhs)| {
                                json!({
                                    "params": format!("q={q} K={k} t^{degree}"),
                                    "lhs": format_rational(lhs),
                                    "rhs": format_rational(rhs),
                                })
                            })
                            .collect::<Vec<_>>(),
                    }]);
                    report.passed()
                }
                other => {
                    let name = match other {
                        IdentityArg::P20 => IdentityName::P20Equality,
                        IdentityArg::P21 => IdentityName::P21,
                        IdentityArg::P22 => IdentityName::P22,
                        IdentityArg::Identity1 => IdentityName::Identity1,
                        IdentityArg::Identity2 => IdentityName::Identity2,
                        IdentityArg::Am => IdentityName::AmIntegrality,
                        IdentityArg::P8 => unreachable!(),
                    };
                    let range = IdentityRange {
                        q_max,
                        g_max,
                        s_max,
                    };
                    let report = check_identity(name, &range)?;
                    out.results = json!([identity_report_json(&report)]);
                    report.passed()
                }
            };
            out.pass = Some(pass);
            out.print();
            Ok(if pass { 0 } else { 1 })
        }
        Command::Continuum {
            q,
            sector,
            genus_max,
        } => {
            let genus_max = genus_max.or(config.genus_max).unwrap_or(DEFAULT_GENUS_MAX);
            let mut out = Output::new(
                "continuum",
                json!({"q": q, "sector": match sector {
                    SectorArg::Even => "even",
                    SectorArg::Odd => "odd",
                }, "genus_max": genus_max}),
            );
            let expansion = match sector {
                SectorArg::Even => even_sector_expansion(q, genus_max)?,
                SectorArg::Odd => odd_sector_expansion(q, genus_max)?,
            };
            out.results = continuum_rows(&expansion);
            out.print();
            Ok(0)
        }
        Command::Oracle { q, n, order } => {
            let order = resolve_order(order, moduli_euler::series::DEFAULT_TRUNCATION);
            let mut out = Output::new("oracle", json!({"q": q, "n": n, "order": order}));
            let params = ModelParams::new(q, order)?.with_concrete_n(n)?;
            let formal = free_energy_formal(&params);
            let products = formal.sub(&penner_prefactor_series(order))?;
            let concrete = free_energy_concrete(&params)?;
            let specialized = products.specialize(n);
            let matches = specialized == concrete;
            let mut row = Map::new();
            row.insert("q".into(), json!(q));
            row.insert("n".into(), json!(n));
            row.insert("order".into(), json!(order));
            row.insert("match".into(), json!(matches));
            if !matches {
                for m in 1..=order {
                    if specialized.coeff(m) != concrete.coeff(m) {
                        row.insert("first_mismatch_t_degree".into(), json!(m));
                        row.insert("formal".into(), rational_str(&specialized.coeff(m)));
                        row.insert("concrete".into(), rational_str(&concrete.coeff(m)));
                        break;
                    }
                }
            }
            out.results = Value::Array(vec![Value::Object(row)]);
            out.pass = Some(matches);
            out.print();
            Ok(if matches { 0 } else { 1 })
        }
    }
}

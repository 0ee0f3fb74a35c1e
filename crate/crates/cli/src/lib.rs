//! Command-line surface for the hermlat verification pipelines.
//!
//! [`run`] takes the argument list and output sinks so the binary and the
//! integration tests share one entry point.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermlat_core::hecke::brandt;
use hermlat_core::pipeline::{parse_checks, scan_maximality, Check, Context, Record, RunConfig};
use hermlat_core::Error;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "hermlat", version, about = "Exact checks relating Hermitian form classes, quaternion ideals and zeta coefficients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hermitian classes, ideal classes, types and unit orders.
    Classes(RunArgs),
    /// Representation numbers r, n, p, q per class.
    Repnums(RunArgs),
    /// Coefficients of zeta_xi and zeta_hat per class.
    Zeta(RunArgs),
    /// Run identity checks.
    Verify(VerifyArgs),
    /// Maximality verdicts over a grid of (m, ell).
    ScanMaximality(ScanArgs),
    /// Brandt matrices at good primes.
    Brandt(RunArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub ell: i64,
    #[arg(long, default_value_t = 100)]
    pub nmax: usize,
    /// Comma-separated primes excluded from every count.
    #[arg(long, value_delimiter = ',')]
    pub bad_primes: Option<Vec<u64>>,
    /// Allow fields and parameters outside the proven range.
    #[arg(long)]
    pub experimental: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma list from: all, r-eq-n, phi-bijective, zeta-hat, latimer, norms, sub-main, partial-zeta.
    #[arg(long, default_value = "all")]
    pub checks: String,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// Comma-separated field parameters; empty scans nothing.
    #[arg(long, default_value = "1,2,3,7,11", value_parser = parse_int_list)]
    pub m_list: IntList,
    #[arg(long, default_value_t = 20)]
    pub ell_max: i64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

fn parse_int_list(s: &str) -> Result<IntList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|e| format!("{x}: {e}")))
        .collect::<Result<_, _>>()
        .map(IntList)
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, Value>,
    pub records: Vec<Record>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

impl Report {
    fn new(command: &str, config: BTreeMap<String, Value>, records: Vec<Record>, data: Option<Value>) -> Self {
        let pass = records.iter().filter(|r| r.pass).count();
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            summary: Summary {
                pass,
                fail: records.len() - pass,
            },
            records,
            data,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("check,params,lhs,rhs,pass\n");
        for r in &self.records {
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&r.check),
                csv_field(&params.join(";")),
                csv_field(&r.lhs),
                csv_field(&r.rhs),
                r.pass
            ));
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn config_echo(a: &RunArgs, cfg: &RunConfig) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("m".into(), json!(a.m.to_string()));
    m.insert("ell".into(), json!(a.ell.to_string()));
    m.insert("nmax".into(), json!(a.nmax.to_string()));
    m.insert(
        "bad_primes".into(),
        json!(cfg.prime_set().primes().iter().map(|p| p.to_string()).collect::<Vec<_>>()),
    );
    m.insert("experimental".into(), json!(cfg.is_experimental()));
    m
}

fn string_rows<T: ToString>(v: &[Vec<T>]) -> Value {
    json!(v.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// Exit status of a run: 0 every record passed, 1 a check failed, 2 bad usage.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let (report, output) = match execute(&cli, stderr) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Csv => match &cli.command {
            Command::ScanMaximality(_) => scan_csv(report.data.as_ref()),
            _ => report.to_csv(),
        },
    };
    let written = match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    let _ = writeln!(
        stderr,
        "{}: {} passed, {} failed in {:.2}s",
        report.command,
        report.summary.pass,
        report.summary.fail,
        start.elapsed().as_secs_f64()
    );
    if report.summary.fail > 0 {
        1
    } else {
        0
    }
}

fn prepare(a: &RunArgs, stderr: &mut dyn Write) -> Result<(RunConfig, Context), Error> {
    let cfg = RunConfig {
        m: a.m,
        ell: a.ell,
        n_max: a.nmax,
        bad_primes: a.bad_primes.clone(),
        experimental: a.experimental,
    };
    let v = cfg.validate()?;
    for w in &v.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let ctx = Context::new(cfg.clone())?;
    Ok((cfg, ctx))
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<(Report, OutputArgs), Error> {
    match &cli.command {
        Command::Classes(a) => {
            let (cfg, ctx) = prepare(a, stderr)?;
            Ok((classes(a, &cfg, ctx), a.output.clone()))
        }
        Command::Repnums(a) => {
            let (cfg, ctx) = prepare(a, stderr)?;
            Ok((repnums(a, &cfg, ctx), a.output.clone()))
        }
        Command::Zeta(a) => {
            let (cfg, ctx) = prepare(a, stderr)?;
            Ok((zeta(a, &cfg, ctx), a.output.clone()))
        }
        Command::Brandt(a) => {
            let (cfg, ctx) = prepare(a, stderr)?;
            Ok((brandt_cmd(a, &cfg, ctx)?, a.output.clone()))
        }
        Command::Verify(v) => {
            let checks = parse_checks(&v.checks)?;
            let (cfg, mut ctx) = prepare(&v.run, stderr)?;
            let mut records = Vec::new();
            for c in &checks {
                records.extend(ctx.run(*c)?);
            }
            let mut config = config_echo(&v.run, &cfg);
            config.insert(
                "checks".into(),
                json!(checks.iter().map(|c: &Check| c.name()).collect::<Vec<_>>()),
            );
            Ok((Report::new("verify", config, records, None), v.run.output.clone()))
        }
        Command::ScanMaximality(s) => {
            let verdicts = scan_maximality(&s.m_list.0, s.ell_max)?;
            let records = verdicts
                .iter()
                .map(|v| {
                    let asserted = v.m % 4 != 2 && v.satisfies_conditions;
                    Record::new(
                        "maximality",
                        &[
                            ("m", v.m.to_string()),
                            ("ell", v.ell.to_string()),
                            ("asserted", asserted.to_string()),
                        ],
                        v.maximal,
                        v.satisfies_conditions,
                        !asserted || v.maximal,
                    )
                })
                .collect();
            let mut config = BTreeMap::new();
            let mut ms = s.m_list.0.clone();
            ms.sort_unstable();
            ms.dedup();
            config.insert("m_list".into(), json!(ms.iter().map(|m| m.to_string()).collect::<Vec<_>>()));
            config.insert("ell_max".into(), json!(s.ell_max.to_string()));
            let data = serde_json::to_value(&verdicts).expect("serializable");
            Ok((Report::new("scan-maximality", config, records, Some(data)), s.output.clone()))
        }
    }
}

fn scan_csv(data: Option<&Value>) -> String {
    let mut s = String::from("m,ell,satisfies_conditions,maximal,agreement,squarefree_shortcut,witness\n");
    for v in data.and_then(|d| d.as_array()).into_iter().flatten() {
        let sat = v["satisfies_conditions"].as_bool().unwrap_or(false);
        let max = v["maximal"].as_bool().unwrap_or(false);
        let m = v["m"].as_i64().unwrap_or(0);
        let agreement = if m % 4 == 2 {
            "unasserted".to_string()
        } else {
            (!sat || max).to_string()
        };
        let shortcut = v["squarefree_shortcut"].as_bool().map(|b| b.to_string()).unwrap_or_default();
        let witness = v["witness"]
            .as_array()
            .map(|w| w.iter().filter_map(|x| x.as_str()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        s.push_str(&format!("{m},{},{sat},{max},{agreement},{shortcut},{}\n", v["ell"], csv_field(&witness)));
    }
    s
}

fn classes(a: &RunArgs, cfg: &RunConfig, mut ctx: Context) -> Report {
    let data = ctx.data().clone();
    let cl = &ctx.classes;
    let forms: Vec<Value> = cl
        .all_reps
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let k = data.hermitian_index.iter().position(|&x| x == i);
            json!({
                "a": f.a.to_string(),
                "b": [f.b.x.to_string(), f.b.y.to_string()],
                "c": f.c.to_string(),
                "d": f.ell.to_string(),
                "e": cl.unit_orders[i].to_string(),
                "support": k.is_some(),
                "ideal_class": k.map(|k| k.to_string()),
                "type": k.map(|k| data.rho_map[k].to_string()),
                "left_order_units": k.map(|k| data.unit_orders[k].to_string()),
            })
        })
        .collect();
    let fibers: Vec<Vec<String>> = (0..data.h2())
        .map(|t| (0..data.h1()).filter(|&i| data.rho_map[i] == t).map(|i| i.to_string()).collect())
        .collect();
    let body = json!({
        "I": cl.len().to_string(),
        "h1": data.h1().to_string(),
        "h2": data.h2().to_string(),
        "e": cl.support.iter().map(|&i| cl.unit_orders[i].to_string()).collect::<Vec<_>>(),
        "classes": forms,
        "rho_fibers": fibers,
    });
    let records = vec![
        Record::new("classes/h2-le-h1", &[], data.h2(), data.h1(), data.h2() <= data.h1()),
        Record::eq("classes/rho-surjective", &[], fibers.iter().filter(|f| !f.is_empty()).count(), data.h2()),
        Record::eq("classes/identity-first", &[], format!("{:?}", (cl.all_reps[0].a, cl.all_reps[0].c)), format!("{:?}", (1, a.ell))),
    ];
    Report::new("classes", config_echo(a, cfg), records, Some(body))
}

fn repnums(a: &RunArgs, cfg: &RunConfig, ctx: Context) -> Report {
    let cl = &ctx.classes;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for d in 1..=a.nmax as i64 {
        let r = cl.r_counts(d);
        let n = ctx.gram.n_counts_direct(d, cl);
        for (i, f) in cl.all_reps.iter().enumerate() {
            rows.push(json!({
                "class": i.to_string(),
                "d": d.to_string(),
                "r": r[i].to_string(),
                "n": n[i].to_string(),
                "p": f.primitive_reps(d).len().to_string(),
                "q": f.all_reps_count(d).to_string(),
            }));
            if cl.support.contains(&i) {
                records.push(Record::eq("r-eq-n", &[("class", i.to_string()), ("d", d.to_string())], n[i], r[i]));
            }
        }
    }
    Report::new("repnums", config_echo(a, cfg), records, Some(json!(rows)))
}

fn zeta(a: &RunArgs, cfg: &RunConfig, mut ctx: Context) -> Report {
    let hats = ctx.hats().to_vec();
    let all = hermlat_core::zeta::zeta_xi_all(&ctx.gram, &ctx.classes, &ctx.primes, a.nmax);
    let cl = &ctx.classes;
    let mut series = Vec::new();
    let mut records = Vec::new();
    for (k, &i) in cl.support.iter().enumerate() {
        let xi: Vec<String> = all[i].coeffs.iter().map(|c| c.to_string()).collect();
        let hat: Vec<String> = hats[k].coeffs.iter().map(|c| c.to_string()).collect();
        records.push(Record::eq("zeta/leading", &[("class", k.to_string())], hat[0].clone(), if i == 0 { "1" } else { "0" }));
        series.push(json!({"class": k.to_string(), "zeta_xi": xi, "zeta_hat": hat}));
    }
    Report::new("zeta", config_echo(a, cfg), records, Some(json!(series)))
}

fn brandt_cmd(a: &RunArgs, cfg: &RunConfig, mut ctx: Context) -> Result<Report, Error> {
    let primes: Vec<u64> = ctx.hecke_primes().into_iter().filter(|&p| p as usize <= a.nmax).collect();
    let data = ctx.data().clone();
    let mats = primes.iter().map(|&p| brandt(p, &data)).collect::<Result<Vec<_>, _>>()?;
    let mut records = Vec::new();
    let mut out = Vec::new();
    for b in &mats {
        let p = [("p", b.d.to_string())];
        records.push(Record::eq("brandt/self-adjoint", &p, b.is_weighted_self_adjoint(), true));
        let sums: Vec<String> = b.row_sums().iter().map(|x| x.to_string()).collect();
        let expected = vec![(b.d + 1).to_string(); sums.len()];
        records.push(Record::eq("brandt/row-sums", &p, sums.join(" "), expected.join(" ")));
        let cp = hermlat_core::algebraic::charpoly(&b.to_q()).squarefree_part();
        records.push(Record::eq(
            "brandt/real-eigenvalues",
            &p,
            cp.real_root_count(),
            cp.degree().unwrap_or(0),
        ));
        for c in &mats {
            if c.d > b.d {
                records.push(Record::eq(
                    "brandt/commute",
                    &[("p", b.d.to_string()), ("q", c.d.to_string())],
                    b.commutes_with(c),
                    true,
                ));
            }
        }
        out.push(json!({"p": b.d.to_string(), "matrix": string_rows(&b.matrix)}));
    }
    let body = json!({"weights": data.unit_orders.iter().map(|e| e.to_string()).collect::<Vec<_>>(), "matrices": out});
    Ok(Report::new("brandt", config_echo(a, cfg), records, Some(body)))
}

//! Command-line front door: parses distribution and menu specs from the
//! argument list, dispatches to the library, and serializes results.
//!
//! Reports are JSON on standard output; sweeps emit CSV instead when asked.
//! Floats are rounded to twelve significant digits before printing so that
//! identical invocations produce byte-identical output. Exit codes: 0 on
//! success, 1 when a verification suite fails, 2 on argument-parse errors,
//! and 3 on domain errors (degenerate distribution, malformed spec, ...).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::buyer::best_response;
use crate::competition::{rev_fixed_price, revenues, AuxiliaryDistribution};
use crate::distributions::ValueDistribution;
use crate::error::{Error, Result};
use crate::menus::{PricingMenu, SingleLottery};
use crate::solvers::{
    alice_one_over_e_menu, bob_menu_search, nash_deviation_search, stackelberg_outcome,
    stackelberg_outcome_nudged, ONE_OVER_E_GRID,
};
use crate::verify::{run_all, run_suite, SuiteParams};

#[derive(Parser)]
#[command(
    name = "duopoly",
    version,
    about = "Competing sellers with lottery pricing: buyer logic, best responses, and checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Summarize a value distribution (monopoly price and revenue, regularity).
    Dist {
        /// Distribution spec: uniform01 | exp1 | pointmass1 | JSON.
        #[arg(long)]
        dist: String,
    },
    /// Buyer best response against two menus at a single value.
    Buyer {
        /// Alice's menu spec (JSON).
        #[arg(long)]
        alice: String,
        /// Bob's menu spec (JSON).
        #[arg(long)]
        bob: String,
        /// Buyer value.
        #[arg(long)]
        v: f64,
    },
    /// Leader lottery construction and the resulting revenue split.
    Stackelberg {
        #[arg(long)]
        dist: String,
        /// Shade the lottery price down so the follower's high-branch
        /// preference is strict; a bare flag uses 1e-6 of the monopoly price.
        #[arg(long, num_args = 0..=1)]
        nudge: Option<Option<f64>>,
    },
    /// Bob's best response to a single-lottery menu: optimal posted price
    /// plus a randomized search for a better multi-option menu.
    BestResponse {
        /// Alice's menu spec (JSON); must describe a single lottery.
        #[arg(long)]
        alice: String,
        #[arg(long)]
        dist: String,
        /// Evaluations for the randomized challenger search.
        #[arg(long, default_value_t = 2000)]
        search_budget: usize,
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
    /// The discretized menu that guarantees a 1/e fraction of the monopoly
    /// revenue against any follower response.
    OneOverE {
        #[arg(long)]
        dist: String,
        /// Number of menu options.
        #[arg(long, default_value_t = ONE_OVER_E_GRID)]
        grid: usize,
        /// Include the full breakpoint list in the report.
        #[arg(long)]
        emit_menu: bool,
    },
    /// Single-seller reduction: the auxiliary value distribution faced by a
    /// follower when buyers above a threshold also visit the leader.
    AuxDist {
        #[arg(long)]
        dist: String,
        /// Leader lottery as "z,p".
        #[arg(long)]
        lottery: String,
        /// Visit threshold; "inf" means every buyer visits the leader.
        #[arg(long, default_value = "inf")]
        s: String,
        /// Emit a CSV sweep of the density, cdf, and revenue curve.
        #[arg(long)]
        sweep: bool,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Check a menu pair for profitable unilateral deviations (point-mass
    /// buyer only).
    NashCheck {
        #[arg(long)]
        alice: String,
        #[arg(long)]
        bob: String,
        #[arg(long, default_value = "pointmass1")]
        dist: String,
        /// Deviation grid step.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Curve sweeps.
    Sweep {
        #[command(subcommand)]
        curve: SweepCmd,
    },
    /// Numerical verification suites for the library's guarantees.
    Verify {
        /// Suite id (e.g. "thm-3.1", "lemma-B.14"), or "all".
        suite: String,
        /// Distribution override for suites that accept one.
        #[arg(long)]
        dist: Option<String>,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        /// Search-budget override; 0 keeps each suite's default.
        #[arg(long, default_value_t = 0)]
        budget: usize,
        /// Case-count override; 0 keeps each suite's default.
        #[arg(long, default_value_t = 0)]
        cases: usize,
        /// Directory that receives one JSON artifact per suite.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Bob's revenue from each posted price against a fixed Alice menu.
    PostedPrice {
        /// Alice's menu spec (JSON).
        #[arg(long)]
        alice: String,
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
}

/// Run the CLI against standard output and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_to_writer(args, &mut std::io::stdout().lock())
}

/// [`run`] with an explicit output sink, for tests.
pub fn run_to_writer<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests arrive as "errors" too; those print
            // to the requested stream and exit 0 rather than 2.
            if e.use_stderr() {
                eprint!("{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn dispatch<W: Write>(cmd: Cmd, out: &mut W) -> Result<i32> {
    match cmd {
        Cmd::Dist { dist } => {
            let d = parse_dist(&dist)?;
            let m = d.myerson_price()?;
            let regularity = match d.classify_regularity() {
                Ok(r) => serde_json::to_value(r).unwrap(),
                Err(_) => Value::Null,
            };
            emit_json(
                out,
                &json!({
                    "kind": d.kind(),
                    "support_max": d.support_max(),
                    "grid_size": d.grid_size(),
                    "myerson_price": m.price,
                    "monopoly_revenue": m.revenue,
                    "regularity": regularity,
                }),
            )?;
            Ok(0)
        }
        Cmd::Buyer { alice, bob, v } => {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(
                    "buyer value must be finite and nonnegative".into(),
                ));
            }
            let a = parse_menu(&alice)?;
            let b = parse_menu(&bob)?;
            emit_json(out, &best_response(&a, &b, v))?;
            Ok(0)
        }
        Cmd::Stackelberg { dist, nudge } => {
            let d = parse_dist(&dist)?;
            let outcome = match nudge {
                None => stackelberg_outcome(&d)?,
                Some(eps) => stackelberg_outcome_nudged(&d, eps)?,
            };
            emit_json(out, &outcome)?;
            Ok(0)
        }
        Cmd::BestResponse { alice, dist, search_budget, seed } => {
            let menu = parse_menu(&alice)?;
            let Some(lottery) = menu.as_single_lottery() else {
                return Err(Error::InvalidParameter(
                    "best-response needs a single-lottery menu for --alice".into(),
                ));
            };
            let d = parse_dist(&dist)?;
            emit_json(out, &bob_menu_search(&lottery, &d, search_budget, seed))?;
            Ok(0)
        }
        Cmd::OneOverE { dist, grid, emit_menu } => {
            let d = parse_dist(&dist)?;
            let m = d.myerson_price()?;
            let guarantee = m.revenue * (-1.0f64).exp();
            let menu = alice_one_over_e_menu(&d, grid)?;
            let mut report = json!({
                "monopoly_revenue": m.revenue,
                "revenue_guarantee": guarantee,
                "x_bar": menu.x_bar(),
                "plateau_start": d.gamma_inverse(guarantee)?,
                "plateau_end": d.gamma_inverse(m.revenue)?,
                "grid": grid,
            });
            if emit_menu {
                report["menu"] = serde_json::to_value(&menu).map_err(|e| Error::Io(e.to_string()))?;
            }
            emit_json(out, &report)?;
            Ok(0)
        }
        Cmd::AuxDist { dist, lottery, s, sweep, points } => {
            let d = parse_dist(&dist)?;
            let lot = parse_lottery(&lottery)?;
            let threshold = match s.trim() {
                "inf" | "infinity" => f64::INFINITY,
                t => t
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad visit threshold {t:?}")))?,
            };
            let aux = AuxiliaryDistribution::new(&d, &lot, threshold)?;
            if sweep {
                check_points(points)?;
                write_row(out, "v,f_s,F_s,Gamma_s")?;
                let vmax = aux.support_max();
                for i in 0..points {
                    let v = vmax * i as f64 / (points - 1) as f64;
                    let row = format!(
                        "{},{},{},{}",
                        csv_num(v),
                        csv_num(aux.pdf(v)),
                        csv_num(aux.cdf(v)),
                        csv_num(aux.gamma(v))
                    );
                    write_row(out, &row)?;
                }
            } else {
                emit_json(
                    out,
                    &json!({
                        "z": lot.z(),
                        "p": lot.p(),
                        "s": aux.s(),
                        "atom_at_zero": aux.atom_at_zero(),
                        "support_max": aux.support_max(),
                    }),
                )?;
            }
            Ok(0)
        }
        Cmd::NashCheck { alice, bob, dist, step } => {
            let a = parse_menu(&alice)?;
            let b = parse_menu(&bob)?;
            let d = parse_dist(&dist)?;
            emit_json(out, &nash_deviation_search(&a, &b, &d, step)?)?;
            Ok(0)
        }
        Cmd::Sweep { curve } => match curve {
            SweepCmd::PostedPrice { alice, dist, points, csv } => {
                let menu = parse_menu(&alice)?;
                let d = parse_dist(&dist)?;
                check_points(points)?;
                let vmax = d.support_max();
                let lottery = menu.as_single_lottery();
                let mut rows = Vec::with_capacity(points);
                for i in 0..points {
                    let q = vmax * i as f64 / (points - 1) as f64;
                    let rev = match &lottery {
                        Some(l) => rev_fixed_price(l, q, &d),
                        None => revenues(&menu, &PricingMenu::fixed_price(q)?, &d).rev_bob,
                    };
                    rows.push((q, rev));
                }
                if csv {
                    write_row(out, "q,rev_bob")?;
                    for (q, rev) in rows {
                        let row = format!("{},{}", csv_num(q), csv_num(rev));
                        write_row(out, &row)?;
                    }
                } else {
                    let rows: Vec<Value> =
                        rows.iter().map(|&(q, rev)| json!({ "q": q, "rev_bob": rev })).collect();
                    emit_json(out, &rows)?;
                }
                Ok(0)
            }
        },
        Cmd::Verify { suite, dist, seed, budget, cases, out_dir } => {
            let params = SuiteParams {
                seed,
                budget,
                cases,
                dist: dist.as_deref().map(parse_dist).transpose()?,
                out_dir,
            };
            if suite.eq_ignore_ascii_case("all") {
                let results = run_all(&params)?;
                let ok = results.iter().all(|r| r.passed());
                emit_json(out, &results)?;
                Ok(if ok { 0 } else { 1 })
            } else {
                let result = run_suite(&suite, &params)?;
                let ok = result.passed();
                emit_json(out, &result)?;
                Ok(if ok { 0 } else { 1 })
            }
        }
    }
}

/// Parse a distribution spec: a named shorthand or a JSON object like
/// `{"family":"uniform","params":[0,1]}` / `{"atoms":[[0.3,0.4],[1,0.6]]}`.
/// The DUOPOLY_GRID environment variable overrides the quadrature grid.
fn parse_dist(spec: &str) -> Result<ValueDistribution> {
    let d = match spec.trim() {
        "uniform01" => ValueDistribution::uniform(0.0, 1.0)?,
        "exp1" => ValueDistribution::exponential(1.0)?,
        "pointmass1" => ValueDistribution::point_mass(1.0)?,
        other => parse_dist_json(other)?,
    };
    Ok(match grid_override() {
        Some(n) => d.with_grid_size(n),
        None => d,
    })
}

fn grid_override() -> Option<usize> {
    let n = std::env::var("DUOPOLY_GRID").ok()?.trim().parse::<usize>().ok()?;
    (n >= 2).then_some(n)
}

fn parse_dist_json(spec: &str) -> Result<ValueDistribution> {
    let v: Value = serde_json::from_str(spec)
        .map_err(|e| Error::Parse(format!("distribution spec {spec:?}: {e}")))?;
    if let Some(atoms) = v.get("atoms") {
        let atoms: Vec<(f64, f64)> = serde_json::from_value(atoms.clone())
            .map_err(|e| Error::Parse(format!("atom list: {e}")))?;
        return ValueDistribution::discrete(atoms);
    }
    let family = v
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("distribution spec needs \"family\" or \"atoms\"".into()))?;
    let params: Vec<f64> = match v.get("params") {
        Some(p) => serde_json::from_value(p.clone())
            .map_err(|e| Error::Parse(format!("parameter list: {e}")))?,
        None => Vec::new(),
    };
    let need = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "family {family:?} takes {n} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match family {
        "uniform" => {
            need(2)?;
            ValueDistribution::uniform(params[0], params[1])
        }
        "exp" | "exponential" => {
            need(1)?;
            ValueDistribution::exponential(params[0])
        }
        "pareto" => {
            need(2)?;
            ValueDistribution::pareto(params[0], params[1])
        }
        "pointmass" | "point-mass" => {
            need(1)?;
            ValueDistribution::point_mass(params[0])
        }
        "two-uniform-mixture" => {
            need(5)?;
            ValueDistribution::two_uniform_mixture(
                params[0], params[1], params[2], params[3], params[4],
            )
        }
        other => Err(Error::Parse(format!("unknown distribution family {other:?}"))),
    }
}

/// Parse a menu spec: `{"lottery":{"z":..,"p":..}}`, `{"fixed_price":..}`,
/// or `{"breakpoints":[[x,price],...]}` (canonicalized).
fn parse_menu(spec: &str) -> Result<PricingMenu> {
    let v: Value = serde_json::from_str(spec)
        .map_err(|e| Error::Parse(format!("menu spec {spec:?}: {e}")))?;
    if let Some(l) = v.get("lottery") {
        let z = l.get("z").and_then(Value::as_f64);
        let p = l.get("p").and_then(Value::as_f64);
        let (Some(z), Some(p)) = (z, p) else {
            return Err(Error::Parse("lottery needs numeric \"z\" and \"p\"".into()));
        };
        return Ok(SingleLottery::new(z, p)?.menu());
    }
    if let Some(q) = v.get("fixed_price") {
        let q = q
            .as_f64()
            .ok_or_else(|| Error::Parse("fixed_price must be numeric".into()))?;
        return PricingMenu::fixed_price(q);
    }
    if let Some(b) = v.get("breakpoints") {
        let pts: Vec<(f64, f64)> = serde_json::from_value(b.clone())
            .map_err(|e| Error::Parse(format!("breakpoint list: {e}")))?;
        return PricingMenu::properize(&pts);
    }
    Err(Error::Parse(
        "menu spec needs \"lottery\", \"fixed_price\", or \"breakpoints\"".into(),
    ))
}

/// Parse a lottery given as "z,p".
fn parse_lottery(spec: &str) -> Result<SingleLottery> {
    let parts: Vec<&str> = spec.split(',').collect();
    let [z, p] = parts.as_slice() else {
        return Err(Error::Parse(format!("lottery {spec:?} must be \"z,p\"")));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number {t:?} in lottery")))
    };
    SingleLottery::new(num(z)?, num(p)?)
}

fn check_points(points: usize) -> Result<()> {
    if points < 2 {
        return Err(Error::InvalidParameter("a sweep needs at least 2 points".into()));
    }
    Ok(())
}

/// Serialize with every float rounded to twelve significant digits, so
/// repeated runs are byte-identical.
fn emit_json<W: Write, T: serde::Serialize>(out: &mut W, value: &T) -> Result<()> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))?;
    round_floats(&mut v);
    let text = serde_json::to_string_pretty(&v).map_err(|e| Error::Io(e.to_string()))?;
    write_row(out, &text)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let rounded = sig12(n.as_f64().unwrap());
                *v = serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// CSV cell for a float: rounded like the JSON output, shortest decimal form.
fn csv_num(x: f64) -> f64 {
    sig12(x)
}

fn write_row<W: Write>(out: &mut W, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run_to_writer(args.iter().copied(), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn buyer_example_reports_alice_first() {
        let (code, text) = run_str(&[
            "duopoly",
            "buyer",
            "--alice",
            r#"{"lottery":{"z":0.5,"p":0.5}}"#,
            "--bob",
            r#"{"fixed_price":0.8}"#,
            "--v",
            "1.0",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["order"], "alice-first");
        assert_eq!(v["pay_alice"].as_f64().unwrap(), 0.25);
    }

    #[test]
    fn posted_price_sweep_contains_known_rows() {
        let (code, text) = run_str(&[
            "duopoly",
            "sweep",
            "posted-price",
            "--alice",
            r#"{"lottery":{"z":0.5,"p":0.5}}"#,
            "--dist",
            "uniform01",
            "--csv",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "q,rev_bob");
        assert_eq!(lines.len(), 202);
        assert!(lines.contains(&"0.3,0.21"), "missing undercut row: {text}");
        assert!(lines.contains(&"0.7,0.105"), "missing skim row: {text}");
    }

    #[test]
    fn json_output_is_byte_identical_across_runs() {
        let args =
            ["duopoly", "stackelberg", "--dist", r#"{"family":"uniform","params":[0,1]}"#];
        let (c1, first) = run_str(&args);
        let (c2, second) = run_str(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(first, second);
        let v: Value = serde_json::from_str(&first).unwrap();
        assert!((v["ratio_alice"].as_f64().unwrap() - 0.25).abs() < 1e-4);
        assert!((v["ratio_bob"].as_f64().unwrap() - 0.5).abs() < 1e-4);
    }

    #[test]
    fn nudge_flag_shades_the_lottery_price() {
        let (_, plain) = run_str(&["duopoly", "stackelberg", "--dist", "uniform01"]);
        let (code, nudged) = run_str(&["duopoly", "stackelberg", "--dist", "uniform01", "--nudge"]);
        assert_eq!(code, 0);
        let p0 = serde_json::from_str::<Value>(&plain).unwrap()["alice_menu"]["p"]
            .as_f64()
            .unwrap();
        let p1 = serde_json::from_str::<Value>(&nudged).unwrap()["alice_menu"]["p"]
            .as_f64()
            .unwrap();
        assert!(p1 < p0 && p0 - p1 < 1e-5);

        let (code, wide) =
            run_str(&["duopoly", "stackelberg", "--dist", "uniform01", "--nudge", "0.01"]);
        assert_eq!(code, 0);
        let p2 = serde_json::from_str::<Value>(&wide).unwrap()["alice_menu"]["p"]
            .as_f64()
            .unwrap();
        assert!((p0 - p2 - 0.01).abs() < 1e-12);
    }

    #[test]
    fn dist_summary_for_uniform01() {
        let (code, text) = run_str(&["duopoly", "dist", "--dist", "uniform01"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["kind"], "analytic-continuous");
        assert_eq!(v["myerson_price"].as_f64().unwrap(), 0.5);
        assert_eq!(v["monopoly_revenue"].as_f64().unwrap(), 0.25);
        assert_eq!(v["regularity"], "both");
    }

    #[test]
    fn aux_dist_sweep_emits_csv_and_summary_emits_json() {
        let (code, text) = run_str(&[
            "duopoly", "aux-dist", "--dist", "uniform01", "--lottery", "0.5,0.25", "--sweep",
            "--points", "5",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "v,f_s,F_s,Gamma_s");
        assert_eq!(lines.len(), 6);

        let (code, text) = run_str(&[
            "duopoly", "aux-dist", "--dist", "uniform01", "--lottery", "0.5,0.25",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["z"].as_f64().unwrap(), 0.5);
        assert_eq!(v["atom_at_zero"].as_f64().unwrap(), 0.0);
    }

    #[test]
    fn one_over_e_report_has_plateau_bounds() {
        let (code, text) =
            run_str(&["duopoly", "one-over-e", "--dist", "uniform01", "--grid", "257"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!((v["revenue_guarantee"].as_f64().unwrap() - 0.09196986029286058).abs() < 1e-12);
        // The revenue curve is quadratically flat at its peak, so inverting
        // at the peak value is only sqrt-precision accurate in q.
        assert!((v["plateau_end"].as_f64().unwrap() - 0.5).abs() < 1e-7);
        assert!(v.get("menu").is_none());

        let (code, text) = run_str(&[
            "duopoly", "one-over-e", "--dist", "uniform01", "--grid", "257", "--emit-menu",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["menu"]["breakpoints"].as_array().unwrap().len(), 257);
    }

    #[test]
    fn exit_codes_distinguish_usage_and_domain_errors() {
        let (code, _) = run_str(&["duopoly", "frobnicate"]);
        assert_eq!(code, 2);
        let (code, _) = run_str(&["duopoly", "dist"]);
        assert_eq!(code, 2);
        let (code, _) = run_str(&[
            "duopoly", "dist", "--dist", r#"{"family":"uniform","params":[1,0]}"#,
        ]);
        assert_eq!(code, 3);
        let (code, _) = run_str(&["duopoly", "verify", "no-such-suite"]);
        assert_eq!(code, 3);
    }

    #[test]
    fn verify_subcommand_reports_a_passing_suite() {
        let (code, text) = run_str(&["duopoly", "verify", "lemma-B.19"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["suite_id"], "lemma-B.19");
        assert_eq!(v["cases_run"], v["cases_passed"]);
    }

    #[test]
    fn menu_spec_forms_parse() {
        let m = parse_menu(r#"{"breakpoints":[[0.4,0.1],[1.0,0.6]]}"#).unwrap();
        assert_eq!(m.breakpoints().last().unwrap().0, 1.0);
        assert!(parse_menu(r#"{"fixed_price":-1}"#).is_err());
        assert!(parse_menu("not json").is_err());
        assert!(parse_lottery("0.5").is_err());
        assert!(parse_dist(r#"{"family":"weibull","params":[1]}"#).is_err());
        let d = parse_dist(r#"{"atoms":[[0.3,0.4],[1.0,0.6]]}"#).unwrap();
        assert_eq!(d.atoms().unwrap().len(), 2);
    }
}

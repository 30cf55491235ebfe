//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 hypothesis violation, 3 budget
//! exhausted (partial output still written), 4 self-test failure.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cyclonorm::{norm_real, norm_real_fast, norm_square_check, omega, s_seq};
use crate::error::Error;
use crate::flipsearch::{find_flips, localize, validate_hypotheses, FlipSearch};
use crate::knotpoly::{
    alexander, cheb_phi, f_poly, g_poly, newton_cert, validate_structure, Check,
};
use crate::poly_core::arith::divisors;
use crate::poly_core::{cyclotomic, real_cyclotomic, unfold_real, FactorBudget, IntPoly};
use crate::ramify::{certify, order_sanity, table, table_csv, table_text, Status, TableRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_SELFTEST: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Everything that influences output besides the subcommand arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub budget: FactorBudget,
    pub digit_cap: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { budget: FactorBudget::default(), digit_cap: 40_000, format: Format::Json }
    }
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// RNG seed for factorization
    #[arg(long, env = "SEED", default_value_t = 0, global = true)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000, global = true)]
    trial_bound: u64,
    #[arg(long, default_value_t = 1 << 26, global = true)]
    rho_iter_cap: u64,
    #[arg(long, default_value_t = 60_000, global = true)]
    wall_ms: u64,
    /// Largest estimated norm size (decimal digits) computed exactly
    #[arg(long, default_value_t = 40_000, global = true)]
    digit_cap: u64,
    #[arg(long, visible_alias = "out", value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

impl GlobalOpts {
    fn config(&self) -> RunConfig {
        RunConfig {
            budget: FactorBudget {
                trial_bound: self.trial_bound,
                rho_iter_cap: self.rho_iter_cap,
                wall_ms: self.wall_ms,
                seed: self.seed,
            },
            digit_cap: self.digit_cap,
            format: self.format,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "twistram", version, about = "Quaternion-algebra ramification for surgeries on twist knots")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Character-variety polynomials and structural checks
    Charvar {
        #[arg(long)]
        t: u64,
    },
    /// Norm of the real associate of Delta(zeta_d^2)
    Norm {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        d: u64,
    },
    /// Ramification certificate for one surgery coefficient
    Certify {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        d: u64,
    },
    /// Certificates for every odd d in a range
    Table {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        d_min: u64,
        #[arg(long)]
        d_max: u64,
    },
    /// Sign-flip search along n = p^u q^v
    Search {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        flips: usize,
        #[arg(long, default_value_t = 6)]
        exponent_cap: u32,
    },
    /// Run the invariant battery
    Selftest,
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidTwist(_)
        | Error::EvenSurgery(_)
        | Error::EvenIndex(_)
        | Error::DegenerateRealSubfield(_)
        | Error::Hypotheses(_) => EXIT_HYPOTHESIS,
        _ => EXIT_USAGE,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

struct Output {
    body: String,
    code: i32,
}

/// Parse `args` (including the program name) and run. Data goes to `out`,
/// diagnostics to `err`; the return value is the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let config = cli.global.config();
    log::debug!("config: {config:?}");
    match dispatch(&cli.command, &config) {
        Ok(o) => {
            let _ = out.write_all(o.body.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cmd: &Command, config: &RunConfig) -> Result<Output, Error> {
    match *cmd {
        Command::Charvar { t } => charvar(t, config.format),
        Command::Norm { t, d } => norm(t, d, config.format),
        Command::Certify { t, d } => {
            let c = certify(t, d, &config.budget)?;
            let code = if c.status == Status::Complete { EXIT_OK } else { EXIT_BUDGET };
            let row = [TableRow::Certified(Box::new(c))];
            let body = match config.format {
                Format::Json => to_json(&row[0]),
                Format::Csv => table_csv(&row),
                Format::Text => table_text(&row),
            };
            Ok(Output { body, code })
        }
        Command::Table { t, d_min, d_max } => {
            if t < 3 || t % 2 == 0 {
                return Err(Error::InvalidTwist(t as i64));
            }
            let rows = table(t, d_min, d_max, &config.budget)?;
            let incomplete = rows.iter().any(|r| match r {
                TableRow::Certified(c) => c.status == Status::Incomplete,
                TableRow::Failed { .. } => false,
            });
            let body = match config.format {
                Format::Json => to_json(&rows),
                Format::Csv => table_csv(&rows),
                Format::Text => table_text(&rows),
            };
            Ok(Output { body, code: if incomplete { EXIT_BUDGET } else { EXIT_OK } })
        }
        Command::Search { t, p, q, flips, exponent_cap } => {
            let mut search = find_flips(t, p, q, flips, exponent_cap)?;
            search.witnesses = search
                .witnesses
                .iter()
                .map(|w| localize(t, p, q, w, config.digit_cap))
                .collect::<Result<_, _>>()?;
            let code = if search.budget_exhausted { EXIT_BUDGET } else { EXIT_OK };
            Ok(Output { body: render_search(&search, config.format), code })
        }
        Command::Selftest => {
            let checks = selftest();
            let passed = checks.iter().all(|c| c.passed);
            let body = render_checks(&checks, config.format);
            Ok(Output { body, code: if passed { EXIT_OK } else { EXIT_SELFTEST } })
        }
    }
}

fn charvar(t: u64, format: Format) -> Result<Output, Error> {
    let f = f_poly(t)?;
    let g = g_poly(t)?;
    let delta = alexander(t)?;
    let report = validate_structure(t)?;
    let code = if report.passed() { EXIT_OK } else { EXIT_HYPOTHESIS };
    let body = match format {
        Format::Json => to_json(&json!({
            "t": t,
            "f": f.to_string(),
            "g": g.to_string(),
            "alexander": delta.to_string(),
            "validation": report,
        })),
        Format::Csv => {
            let mut s = String::from("name,value\n");
            s.push_str(&format!("f,{f}\ng,{g}\nalexander,{delta}\n"));
            for c in &report.checks {
                s.push_str(&format!("{},{}\n", c.name, c.passed));
            }
            s
        }
        Format::Text => {
            let mut s = format!("f_{t}(R,Z) = {f}\ng_{t}(R,Z) = {g}\nDelta(x) = {delta}\n");
            s.push_str(&render_checks(&report.checks, Format::Text));
            s
        }
    };
    Ok(Output { body, code })
}

fn norm(t: u64, d: u64, format: Format) -> Result<Output, Error> {
    let rec = norm_real(t, d)?;
    let square = norm_square_check(t, d)?;
    let body = match format {
        Format::Json => to_json(&json!({ "norm": rec, "square_check": square })),
        Format::Csv => format!(
            "t,d,value,via,square_check\n{},{},{},{},{}\n",
            rec.t,
            rec.d,
            rec.value,
            serde_json::to_value(rec.via).unwrap().as_str().unwrap(),
            square
        ),
        Format::Text => format!("N_{d} = {}\nsquare check: {}\n", rec.value, pass_word(square)),
    };
    Ok(Output { body, code: if square { EXIT_OK } else { EXIT_HYPOTHESIS } })
}

fn pass_word(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn sign_str(s: i8) -> &'static str {
    match s {
        1 => "+",
        -1 => "-",
        _ => "0",
    }
}

fn render_search(search: &FlipSearch, format: Format) -> String {
    match format {
        Format::Json => to_json(search),
        Format::Csv => {
            let mut s =
                String::from("n_prev,n_next,sign_prev,sign_next,d,norm_mod_pq,norm_sign,norm_digits,candidate\n");
            for w in &search.witnesses {
                for l in &w.localized {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{}\n",
                        w.n_prev,
                        w.n_next,
                        sign_str(w.sign_prev),
                        sign_str(w.sign_next),
                        l.d,
                        l.norm_mod_pq,
                        l.norm_sign.map_or("", sign_str),
                        l.norm_digits,
                        serde_json::to_value(l.candidate).unwrap().as_str().unwrap()
                    ));
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::from("chain:");
            for c in &search.chain {
                s.push_str(&format!(" {}{}", c.n, sign_str(c.sign)));
            }
            s.push('\n');
            for w in &search.witnesses {
                s.push_str(&format!(
                    "flip {}{} -> {}{}\n",
                    w.n_prev,
                    sign_str(w.sign_prev),
                    w.n_next,
                    sign_str(w.sign_next)
                ));
                for l in &w.localized {
                    let sign = l.norm_sign.map_or("?", sign_str);
                    let approx = if l.norm_sign.is_some() { "" } else { "~" };
                    let cand = serde_json::to_value(l.candidate).unwrap();
                    s.push_str(&format!(
                        "  d = {:<8} N mod pq = {:<4} sign {sign}  {approx}{} digits  {}\n",
                        l.d,
                        l.norm_mod_pq,
                        l.norm_digits,
                        cand.as_str().unwrap()
                    ));
                }
            }
            if search.budget_exhausted {
                s.push_str("exponent cap reached before the requested number of flips\n");
            }
            s
        }
    }
}

fn render_checks(checks: &[Check], format: Format) -> String {
    match format {
        Format::Json => to_json(&checks),
        Format::Csv => {
            let mut s = String::from("check,passed\n");
            for c in checks {
                s.push_str(&format!("{},{}\n", c.name, c.passed));
            }
            s
        }
        Format::Text => checks
            .iter()
            .map(|c| format!("{:<4} {}  {}\n", pass_word(c.passed), c.name, c.detail))
            .collect(),
    }
}

fn check(name: &str, failures: Vec<String>) -> Check {
    Check {
        name: name.into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() { "ok".into() } else { failures.join("; ") },
    }
}

fn fail_unless(ok: Result<bool, Error>, label: String, failures: &mut Vec<String>) {
    match ok {
        Ok(true) => {}
        Ok(false) => failures.push(label),
        Err(e) => failures.push(format!("{label}: {e}")),
    }
}

/// Invariants exercised by `selftest`, at sizes that finish in seconds.
pub fn selftest() -> Vec<Check> {
    let mut out = Vec::new();

    let mut f = Vec::new();
    for t in [3u64, 5, 7, 9, 29] {
        match validate_structure(t) {
            Ok(r) if r.passed() => {}
            Ok(r) => f.push(format!("t={t}: {:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>())),
            Err(e) => f.push(format!("t={t}: {e}")),
        }
    }
    out.push(check("charvar_structure", f));

    let u = IntPoly::from_i64s(&[0, 1]);
    let f: Vec<String> = (-40i64..=40)
        .filter(|&i| cheb_phi(i + 2).poly != &(&u * &cheb_phi(i).poly) - &cheb_phi(i - 2).poly)
        .map(|i| format!("i={i}"))
        .collect();
    out.push(check("cheb_recurrence", f));

    let mut f = Vec::new();
    for t in [3u64, 5, 13, 29] {
        for m in 1..=3 {
            fail_unless(newton_cert(t, m), format!("t={t} m={m}"), &mut f);
        }
    }
    out.push(check("newton_certificate", f));

    let f: Vec<String> = (1u64..=60)
        .filter(|&d| {
            divisors(d).into_iter().fold(IntPoly::one(), |acc, e| &acc * &cyclotomic(e))
                != IntPoly::x_pow_minus_one(d as usize)
        })
        .map(|d| format!("d={d}"))
        .collect();
    out.push(check("cyclotomic_product", f));

    let f: Vec<String> = (3u64..=61)
        .step_by(2)
        .filter(|&d| real_cyclotomic(d).map(|p| unfold_real(&p) != cyclotomic(d)).unwrap_or(true))
        .map(|d| format!("d={d}"))
        .collect();
    out.push(check("real_cyclotomic_unfold", f));

    let mut f = Vec::new();
    for t in [3u64, 29] {
        for d in (3u64..=45).step_by(2) {
            fail_unless(norm_square_check(t, d), format!("t={t} d={d}"), &mut f);
            let agree = norm_real_fast(t, d).and_then(|v| Ok(v == norm_real(t, d)?.value));
            fail_unless(agree, format!("fast t={t} d={d}"), &mut f);
        }
    }
    out.push(check("norm_square_and_fast_route", f));

    let mut f = Vec::new();
    for n in (1u64..=99).step_by(2) {
        let ok = (|| -> Result<bool, Error> {
            let w = omega(29, n)?;
            let s = s_seq(29, n)?.s;
            let mag = num_traits::Signed::abs(&w) == num_traits::Signed::abs(&s);
            Ok(mag && (n % 4 != 1 || w == s))
        })();
        fail_unless(ok, format!("n={n}"), &mut f);
    }
    out.push(check("omega_vs_s", f));

    let fifteen = BigInt::from(15);
    let mut f = Vec::new();
    for d in (1u64..=99).step_by(2) {
        let ok = norm_real(29, d).map(|r| num_integer::Integer::mod_floor(&r.value, &fifteen) == BigInt::from(1));
        fail_unless(ok, format!("d={d}"), &mut f);
    }
    out.push(check("norm_residue_mod_pq", f));

    out.push(check(
        "hypotheses",
        if validate_hypotheses(29, 3, 5).is_empty() && !validate_hypotheses(29, 3, 7).is_empty() {
            vec![]
        } else {
            vec!["(29,3,5) / (29,3,7)".into()]
        },
    ));

    let expected: [(u64, &[u64]); 9] = [
        (5, &[]),
        (7, &[13]),
        (9, &[431]),
        (11, &[43, 131, 1033]),
        (13, &[1117, 1481]),
        (15, &[149, 179]),
        (17, &[67, 101, 509, 4657]),
        (19, &[37]),
        (21, &[]),
    ];
    let mut f = Vec::new();
    let budget = FactorBudget::default();
    for (d, want) in expected {
        match certify(29, d, &budget) {
            Ok(c) => {
                let got: Vec<BigInt> = c.ramified_primes();
                let want: Vec<BigInt> = want.iter().map(|&x| BigInt::from(x)).collect();
                if got != want || c.status != Status::Complete {
                    f.push(format!("d={d}"));
                }
                if !order_sanity(29, d, &c.factorization).is_empty() {
                    f.push(format!("order d={d}"));
                }
            }
            Err(e) => f.push(format!("d={d}: {e}")),
        }
    }
    out.push(check("table_small_rows", f));

    out
}

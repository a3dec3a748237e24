//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Each function takes the form fields as strings and returns a JSON string,
//! so the page never has to know about rationals. Classification and solving
//! go through the CLI so the page shows exactly what `cubic-orbit --json` prints.

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use wasm_bindgen::prelude::*;

use cubic_orbit::cli::run_with_env;
use cubic_orbit::closed_form::{solve, Solution};
use cubic_orbit::exact_arith::parse_rational;
use cubic_orbit::linearization::{linear_states, InitialPair};
use cubic_orbit::matrix_power::SystemParams;
use cubic_orbit::zero_sets::DEFAULT_HORIZON;

const MAX_SERIES: u64 = 200;

#[derive(Serialize)]
struct Envelope {
    code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "String::is_empty")]
    message: String,
}

fn cli_json(args: &[&str]) -> String {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cubic-orbit").chain(args.iter().copied()).chain(["--json"]);
    let code = run_with_env(argv, None, &mut out, &mut err);
    let env = Envelope {
        code,
        report: serde_json::from_slice(&out).ok(),
        message: String::from_utf8_lossy(&err).trim().to_string(),
    };
    serde_json::to_string(&env).expect("envelope serializes")
}

/// Case, discriminant, eigenvalues and `A^n`.
#[wasm_bindgen]
pub fn analyze(a: &str, b: &str, c: &str, d: &str, n: u32) -> String {
    let n = n.to_string();
    let eigen = cli_json(&["eigen", "-a", a, "-b", b, "-c", c, "-d", d]);
    let power = cli_json(&["power", "-a", a, "-b", b, "-c", c, "-d", d, "-n", &n]);
    format!("{{\"eigen\":{eigen},\"power\":{power}}}")
}

/// Zero-set verdict and, unless the orbit is trivial, the closed-form term `n`
/// checked against direct iteration.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn solve_orbit(a: &str, b: &str, c: &str, d: &str, x0: &str, y0: &str, n: u32, factored: bool) -> String {
    let n = n.to_string();
    let mut base = vec!["-a", a, "-b", b, "-c", c, "-d", d, "--x0", x0, "--y0", y0];
    let zeroset = cli_json(&[&["zeroset"], base.as_slice()].concat());
    let verify = cli_json(&[&["verify"], base.as_slice(), &["-N", "5"]].concat());
    base.extend(["-n", n.as_str()]);
    if factored {
        base.push("--factored");
    }
    let solved = cli_json(&[&["solve"], base.as_slice()].concat());
    format!("{{\"zeroset\":{zeroset},\"solve\":{solved},\"verify\":{verify}}}")
}

#[derive(Serialize, Default)]
struct Series {
    /// `y_n / x_n`, `None` once `x_n = 0`.
    ratio: Vec<Option<f64>>,
    /// Approximate `log10 |x_n|`, `None` once `x_n = 0`.
    log_x: Vec<Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trivial_from: Option<u64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    error: String,
}

fn series_inner(a: &str, b: &str, c: &str, d: &str, x0: &str, y0: &str, len: u64) -> Result<Series, String> {
    let r = |s: &str| parse_rational(s).map_err(|e| e.to_string());
    let p = SystemParams::new(r(a)?, r(b)?, r(c)?, r(d)?);
    let init = InitialPair::new(r(x0)?, r(y0)?);
    let len = len.min(MAX_SERIES);
    let mut out = Series::default();
    for s in linear_states(&p, &init).take(len as usize) {
        out.ratio.push((!s.u.is_zero()).then(|| (&s.v / &s.u).to_f64()).flatten());
    }
    // log|x_n| through the factored closed form, so huge n stay cheap
    for n in 0..len {
        match solve(&p, &init, n, DEFAULT_HORIZON.max(n)).map_err(|e| e.to_string())? {
            Solution::Term(t) => out.log_x.push(t.x.log10_abs()),
            Solution::Trivial(tr) => {
                out.trivial_from = Some(tr.first_zero_term());
                break;
            }
        }
    }
    Ok(out)
}

/// Ratio and magnitude series for plotting, `n = 0..len`.
#[wasm_bindgen]
pub fn orbit_series(a: &str, b: &str, c: &str, d: &str, x0: &str, y0: &str, len: u32) -> String {
    let series = series_inner(a, b, c, d, x0, y0, len as u64).unwrap_or_else(|error| Series { error, ..Series::default() });
    serde_json::to_string(&series).expect("series serializes")
}

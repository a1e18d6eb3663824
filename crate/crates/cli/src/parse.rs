//! Flag syntax: complex literals, states, Hamiltonian presets and the
//! linear profiles accepted by `berry:q=`.

use std::path::Path;
use std::sync::Arc;

use effham::io::read_hamiltonian_path;
use effham::linalg::{c, cvec, sigma_x, sigma_y, sigma_z, CVector, C64};
use effham::propagate::HamiltonianPath;
use effham::scenarios::{berry_hamiltonian, brachistochrone_hamiltonian, BrachistochroneConfig};
use effham::{Error, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Byte offsets where a signed term starts: a `+`/`-` that is neither the
/// first character nor an exponent sign.
fn term_starts(s: &str) -> Vec<usize> {
    let bytes = s.as_bytes();
    let mut starts = vec![0];
    for k in 1..bytes.len() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            starts.push(k);
        }
    }
    starts
}

fn split_terms(s: &str) -> Vec<&str> {
    let mut starts = term_starts(s);
    starts.push(s.len());
    starts.windows(2).map(|w| &s[w[0]..w[1]]).filter(|t| !t.is_empty()).collect()
}

fn parse_real(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| invalid(format!("{what}: '{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(invalid(format!("{what}: '{s}' is not finite")));
    }
    Ok(v)
}

/// One signed real or imaginary term: `1.5`, `-2e-3`, `0.7i`, `-i`.
fn parse_term(term: &str, what: &str) -> Result<C64> {
    match term.strip_suffix('i') {
        Some(coef) => {
            let im = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                other => parse_real(other, what)?,
            };
            Ok(c(0.0, im))
        }
        None => Ok(c(parse_real(term, what)?, 0.0)),
    }
}

/// `a`, `bi` or `a+bi` (e.g. `-0.8+0i`, `0.7i`, `1e-3-2i`).
pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let what = "complex number";
    let terms = split_terms(s);
    if terms.is_empty() || terms.len() > 2 {
        return Err(invalid(format!("{what}: cannot parse '{s}'")));
    }
    let values = terms.iter().map(|t| parse_term(t, what)).collect::<Result<Vec<_>>>()?;
    if terms.len() == 2 && !(values[0].im == 0.0 && terms[0].ends_with(|ch: char| ch != 'i') && terms[1].ends_with('i')) {
        return Err(invalid(format!("{what}: expected a+bi, got '{s}'")));
    }
    Ok(values.into_iter().sum())
}

/// `up`, `down`, or comma-separated complex components.
pub fn parse_state(s: &str) -> Result<CVector> {
    let state = match s.trim() {
        "up" => cvec(&[c(1.0, 0.0), c(0.0, 0.0)]),
        "down" => cvec(&[c(0.0, 0.0), c(1.0, 0.0)]),
        other => {
            let parts = other.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
            if parts.len() < 2 {
                return Err(invalid(format!("state '{other}' needs at least two components (or up/down)")));
            }
            cvec(&parts)
        }
    };
    if state.norm() < effham::geometry::ZERO_NORM {
        return Err(Error::ZeroVector);
    }
    Ok(state)
}

/// `a + b·var` with complex `a`, `b`, written as a sum of terms such as
/// `0.5`, `0.2i`, `2*t`, `0.3i*t`, `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linear {
    pub constant: C64,
    pub slope: C64,
}

impl Linear {
    pub fn at(&self, x: f64) -> C64 {
        self.constant + self.slope * x
    }
}

pub fn parse_linear(s: &str, var: &str) -> Result<Linear> {
    let s: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
    let what = format!("linear expression in {var}");
    let terms = split_terms(&s);
    if terms.is_empty() {
        return Err(invalid(format!("{what}: empty")));
    }
    let mut out = Linear { constant: C64::from(0.0), slope: C64::from(0.0) };
    for term in terms {
        let (sign, body) = match term.as_bytes()[0] {
            b'-' => (-1.0, &term[1..]),
            b'+' => (1.0, &term[1..]),
            _ => (1.0, term),
        };
        if body == var {
            out.slope += sign;
        } else if let Some(coef) = body.strip_suffix(var).and_then(|b| b.strip_suffix('*')) {
            out.slope += parse_term(coef, &what)? * sign;
        } else if body.ends_with(var) {
            return Err(invalid(format!("{what}: write '{body}' as <number>*{var}")));
        } else {
            out.constant += parse_term(body, &what)? * sign;
        }
    }
    Ok(out)
}

/// `key=value` pairs separated by commas.
fn key_values(s: &str) -> Result<Vec<(&str, &str)>> {
    s.split(',')
        .map(|kv| kv.split_once('=').ok_or_else(|| invalid(format!("expected key=value, got '{kv}'"))))
        .collect()
}

/// `sigma_x`, `sigma_y`, `sigma_z`, `berry:q=<linear in t>`,
/// `bender:s=<v>,alpha=<v>` (or `r=,s=,chi=`), otherwise a JSON file.
pub fn parse_hamiltonian(arg: &str) -> Result<HamiltonianPath> {
    match arg {
        "sigma_x" => return Ok(HamiltonianPath::constant(sigma_x())),
        "sigma_y" => return Ok(HamiltonianPath::constant(sigma_y())),
        "sigma_z" => return Ok(HamiltonianPath::constant(sigma_z())),
        _ => {}
    }
    if let Some(expr) = arg.strip_prefix("berry:") {
        let q = expr
            .strip_prefix("q=")
            .ok_or_else(|| invalid(format!("berry preset needs q=<expr>, got '{expr}'")))?;
        let q = parse_linear(q, "t")?;
        return Ok(HamiltonianPath::analytic(2, move |t| berry_hamiltonian(q.at(t))));
    }
    if let Some(params) = arg.strip_prefix("bender:") {
        let cfg = parse_bender(&key_values(params)?)?;
        return Ok(HamiltonianPath::constant(brachistochrone_hamiltonian(cfg.s, cfg.alpha)));
    }
    if !looks_like_file(arg) {
        return Err(invalid(format!(
            "unknown Hamiltonian '{arg}' (presets: sigma_x, sigma_y, sigma_z, berry:q=<expr>, bender:s=<v>,alpha=<v>; or a .json file)"
        )));
    }
    Ok(HamiltonianPath::Sampled(read_hamiltonian_path(Path::new(arg))?))
}

/// Anything with a `.json` extension or a path separator, or an existing file.
pub fn looks_like_file(arg: &str) -> bool {
    arg.ends_with(".json") || arg.contains(std::path::MAIN_SEPARATOR) || arg.contains('/') || Path::new(arg).exists()
}

/// Brachistochrone parameters from `s`, `alpha`, `r`, `chi`.
pub fn parse_bender(pairs: &[(&str, &str)]) -> Result<BrachistochroneConfig> {
    let (mut s, mut alpha, mut r, mut chi) = (None, None, None, None);
    for &(k, v) in pairs {
        let slot = match k {
            "s" => &mut s,
            "alpha" => &mut alpha,
            "r" => &mut r,
            "chi" => &mut chi,
            other => return Err(invalid(format!("unknown brachistochrone parameter '{other}'"))),
        };
        *slot = Some(parse_real(v, k)?);
    }
    match (s, alpha, r, chi) {
        (Some(s), Some(alpha), None, None) => Ok(BrachistochroneConfig::canonical(s, alpha)),
        (Some(s), None, Some(r), Some(chi)) => BrachistochroneConfig::from_raw(r, s, chi),
        (Some(s), Some(alpha), Some(r), Some(chi)) => BrachistochroneConfig::from_both(r, s, chi, alpha),
        _ => Err(invalid("brachistochrone needs s and alpha, or r, s and chi")),
    }
}

pub fn parse_real_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| parse_real(x, what)).collect()
}

pub fn parse_vec3(s: &str, what: &str) -> Result<[f64; 3]> {
    let v = parse_real_list(s, what)?;
    v.try_into().map_err(|_| invalid(format!("{what}: expected three comma-separated numbers, got '{s}'")))
}

pub fn parse_number(s: &str, what: &str) -> Result<f64> {
    parse_real(s, what)
}

/// Profile closure for the optical scenario.
pub fn profile(linear: Linear) -> Arc<dyn Fn(f64) -> C64 + Send + Sync> {
    Arc::new(move |z| linear.at(z))
}

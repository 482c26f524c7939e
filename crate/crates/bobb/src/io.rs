//! BOMILP-v1 instance files and front files.
//!
//! An instance file is line oriented, whitespace separated, with `#`
//! starting a comment:
//!
//! ```text
//! NAME toy
//! VARS 1 1
//! OBJ1 1 1
//! OBJ2 1 -1
//! BOUNDS
//! 0 2
//! 0 1.5
//! ROWS 1
//! 1 1 <= 3
//! ```
//!
//! Rows may use `<=`, `>=` or `=`; they are normalized to `<=` rows, an
//! equality becoming two opposing rows. A front file holds one element per
//! line, west to east: `P f1 f2` or `S f1L f2L f1R f2R`.

use std::fmt::Write as _;

use bobb_core::geometry::{FrontElement, ObjPoint};
use bobb_core::model::{Instance, ModelError, Row};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: variable {var} has an infinite bound")]
    InfiniteBound { line: usize, var: usize },
    #[error("line {line}: expected {expected} coefficients, found {found}")]
    VarCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: maximization is not supported; negate the objective instead")]
    Maximize { line: usize },
    #[error("unexpected end of file: {0}")]
    Eof(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn number(line: usize, tok: &str) -> Result<f64, ParseError> {
    tok.parse::<f64>().map_err(|_| syntax(line, format!("`{tok}` is not a number")))
}

fn count(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>().map_err(|_| syntax(line, format!("`{tok}` is not a count")))
}

struct Lines<'a, I: Iterator<Item = (usize, Vec<&'a str>)>> {
    it: I,
}

impl<'a, I: Iterator<Item = (usize, Vec<&'a str>)>> Lines<'a, I> {
    fn next(&mut self, what: &'static str) -> Result<(usize, Vec<&'a str>), ParseError> {
        self.it.next().ok_or(ParseError::Eof(what))
    }

    /// A line starting with `key`, returning the remaining tokens.
    fn keyed(&mut self, key: &'static str) -> Result<(usize, Vec<&'a str>), ParseError> {
        let (ln, toks) = self.next(key)?;
        if !toks[0].eq_ignore_ascii_case(key) {
            return Err(syntax(ln, format!("expected `{key}`, found `{}`", toks[0])));
        }
        Ok((ln, toks[1..].to_vec()))
    }
}

fn objective(ln: usize, toks: &[&str], n: usize) -> Result<Vec<f64>, ParseError> {
    if let Some(t) = toks.first() {
        let t = t.to_ascii_lowercase();
        if t == "max" || t == "maximize" {
            return Err(ParseError::Maximize { line: ln });
        }
    }
    let toks = match toks.first() {
        Some(t) if t.eq_ignore_ascii_case("min") || t.eq_ignore_ascii_case("minimize") => &toks[1..],
        _ => toks,
    };
    if toks.len() != n {
        return Err(ParseError::VarCount {
            line: ln,
            expected: n,
            found: toks.len(),
        });
    }
    toks.iter().map(|t| number(ln, t)).collect()
}

/// Parses a BOMILP-v1 instance.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = Lines { it: content_lines(text) };

    let (_, name) = lines.keyed("NAME")?;
    let name = name.join(" ");

    let (ln, v) = lines.keyed("VARS")?;
    if v.len() != 2 {
        return Err(syntax(ln, "VARS needs the integer and continuous counts"));
    }
    let (n_int, n_cont) = (count(ln, v[0])?, count(ln, v[1])?);
    let n = n_int + n_cont;

    let (ln, t) = lines.keyed("OBJ1")?;
    let c1 = objective(ln, &t, n)?;
    let (ln, t) = lines.keyed("OBJ2")?;
    let c2 = objective(ln, &t, n)?;

    let (ln, t) = lines.keyed("BOUNDS")?;
    if !t.is_empty() {
        return Err(syntax(ln, "BOUNDS takes no arguments"));
    }
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for j in 0..n {
        let (ln, t) = lines.next("variable bounds")?;
        if t.len() != 2 {
            return Err(syntax(ln, format!("bounds of variable {j} need `<lower> <upper>`")));
        }
        let (l, u) = (number(ln, t[0])?, number(ln, t[1])?);
        if !l.is_finite() || !u.is_finite() {
            return Err(ParseError::InfiniteBound { line: ln, var: j });
        }
        if l > u {
            return Err(syntax(ln, format!("variable {j} has lower bound {l} above upper bound {u}")));
        }
        lower.push(l);
        upper.push(u);
    }

    let (ln, t) = lines.keyed("ROWS")?;
    if t.len() != 1 {
        return Err(syntax(ln, "ROWS needs the row count"));
    }
    let m = count(ln, t[0])?;
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, t) = lines.next("constraint rows")?;
        let Some(op) = t.iter().position(|s| matches!(*s, "<=" | ">=" | "=" | "==")) else {
            return Err(syntax(ln, "row needs one of `<=`, `>=`, `=`"));
        };
        if op != n {
            return Err(ParseError::VarCount {
                line: ln,
                expected: n,
                found: op,
            });
        }
        if t.len() != n + 2 {
            return Err(syntax(ln, "row needs exactly one right-hand side after the relation"));
        }
        let a: Vec<f64> = t[..n].iter().map(|s| number(ln, s)).collect::<Result<_, _>>()?;
        let rhs = number(ln, t[n + 1])?;
        if !rhs.is_finite() {
            return Err(syntax(ln, "right-hand side must be finite"));
        }
        let row = Row::from_dense(&a, rhs);
        match t[n] {
            "<=" => rows.push(row),
            ">=" => rows.push(row.negated()),
            _ => {
                rows.push(row.clone());
                rows.push(row.negated());
            }
        }
    }
    if let Some((ln, _)) = lines.it.next() {
        return Err(syntax(ln, "trailing content after the last row"));
    }
    Ok(Instance::new(name, n_int, n_cont, c1, c2, rows, lower, upper)?)
}

/// Writes `inst` in BOMILP-v1; numbers use the shortest representation
/// that parses back to the same value.
pub fn write_instance(inst: &Instance) -> String {
    let n = inst.n();
    let mut s = String::new();
    let join = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "NAME {}", inst.name);
    let _ = writeln!(s, "VARS {} {}", inst.n_int, inst.n_cont);
    let _ = writeln!(s, "OBJ1 {}", join(&inst.c1));
    let _ = writeln!(s, "OBJ2 {}", join(&inst.c2));
    let _ = writeln!(s, "BOUNDS");
    for j in 0..n {
        let _ = writeln!(s, "{} {}", inst.lower[j], inst.upper[j]);
    }
    let _ = writeln!(s, "ROWS {}", inst.rows.len());
    for r in &inst.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &r.coefs {
            a[j] = v;
        }
        let _ = writeln!(s, "{} <= {}", join(&a), r.rhs);
    }
    s
}

/// `v` with `digits` significant digits, in the style of C's `%g`.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mant, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let trim = |m: &str| -> String {
        if m.contains('.') {
            m.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            m.to_string()
        }
    };
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim(mant), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, v))
    }
}

/// Writes a front, one element per line in the given (west to east) order,
/// with 12 significant digits.
pub fn write_front(front: &[FrontElement]) -> String {
    let f = |v: f64| fmt_sig(v, 12);
    let mut s = String::new();
    for e in front {
        match e {
            FrontElement::Point(p) => {
                let _ = writeln!(s, "P {} {}", f(p.f1), f(p.f2));
            }
            FrontElement::Segment(g) => {
                let _ = writeln!(s, "S {} {} {} {}", f(g.left.f1), f(g.left.f2), f(g.right.f1), f(g.right.f2));
            }
        }
    }
    s
}

/// Parses a front file written by [`write_front`].
pub fn parse_front(text: &str) -> Result<Vec<FrontElement>, ParseError> {
    let mut out = Vec::new();
    for (ln, t) in content_lines(text) {
        let nums: Vec<f64> = t[1..].iter().map(|s| number(ln, s)).collect::<Result<_, _>>()?;
        match (t[0], nums.len()) {
            ("P", 2) => out.push(FrontElement::Point(ObjPoint::new(nums[0], nums[1]))),
            ("S", 4) => out.push(FrontElement::from_endpoints(
                ObjPoint::new(nums[0], nums[1]),
                ObjPoint::new(nums[2], nums[3]),
            )),
            _ => return Err(syntax(ln, "expected `P f1 f2` or `S f1 f2 f1 f2`")),
        }
    }
    Ok(out)
}

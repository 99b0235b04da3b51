//! Text forms accepted on the command line: field specs, map specs, element
//! codes and integer ranges.

use crate::error::{Error, Result};
use crate::field::{FieldTower, Level};
use crate::polyfun::{AdditivePerm, FieldFn, LinearMap, Matrix, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub n: u32,
    pub modq: Option<Vec<u32>>,
    pub modqn: Option<Vec<u32>>,
}

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

/// Splits on commas that are not inside brackets, keeping byte offsets.
fn split_top_level(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

fn parse_list(text: &str, position: usize) -> Result<Vec<u32>> {
    serde_json::from_str(text).map_err(|e| parse_err(position, format!("expected a JSON integer list: {e}")))
}

impl FieldSpec {
    /// `p=<int>,k=<int>,n=<int>[,modq=[..]][,modqn=[..]]`.
    pub fn parse(text: &str) -> Result<FieldSpec> {
        let (mut p, mut k, mut n, mut modq, mut modqn) = (None, None, None, None, None);
        for (pos, token) in split_top_level(text) {
            let Some((key, value)) = token.split_once('=') else {
                return Err(parse_err(pos, format!("expected key=value, found `{token}`")));
            };
            let vpos = pos + key.len() + 1;
            let int = |v: &str| {
                v.trim()
                    .parse::<u32>()
                    .map_err(|_| parse_err(vpos, format!("`{key}` needs an integer, found `{v}`")))
            };
            match key.trim() {
                "p" => p = Some(int(value)?),
                "k" => k = Some(int(value)?),
                "n" => n = Some(int(value)?),
                "modq" => modq = Some(parse_list(value, vpos)?),
                "modqn" => modqn = Some(parse_list(value, vpos)?),
                other => return Err(parse_err(pos, format!("unknown field key `{other}`"))),
            }
        }
        let missing = |name: &str| parse_err(text.len(), format!("missing `{name}`"));
        Ok(FieldSpec {
            p: p.ok_or_else(|| missing("p"))?,
            k: k.ok_or_else(|| missing("k"))?,
            n: n.ok_or_else(|| missing("n"))?,
            modq,
            modqn,
        })
    }

    pub fn build(&self) -> Result<FieldTower> {
        FieldTower::build(self.p, self.k, self.n, self.modq.as_deref(), self.modqn.as_deref())
    }
}

/// A map between two levels from a spec: `trace`, `identity`,
/// `const:<code>`, `mono:<e>`, `table:<json list>`, or a polynomial such as
/// `1*x^3 + 2*x`.
pub fn parse_map(tower: &FieldTower, spec: &str, dom: Level, cod: Level) -> Result<FieldFn> {
    let spec = spec.trim();
    let dom_field = tower.field(dom);
    let table: Vec<u32> = if spec == "trace" {
        match dom {
            Level::Top if cod == Level::Base => return Ok(FieldFn::from_fn(tower, dom, cod, |x| tower.relative_trace(x))),
            _ => {
                let prime_deg = dom_field.degree();
                dom_field.elements().map(|x| trace_to_prime(tower, dom, x, prime_deg)).collect()
            }
        }
    } else if spec == "identity" {
        dom_field.elements().collect()
    } else if let Some(c) = spec.strip_prefix("const:") {
        let c: u32 = c.trim().parse().map_err(|_| parse_err(6, format!("bad constant `{c}`")))?;
        vec![c; dom_field.order() as usize]
    } else if let Some(e) = spec.strip_prefix("mono:") {
        let e: u64 = e.trim().parse().map_err(|_| parse_err(5, format!("bad exponent `{e}`")))?;
        dom_field.elements().map(|x| dom_field.pow(x, e)).collect()
    } else if let Some(t) = spec.strip_prefix("table:") {
        parse_list(t, 6)?
    } else {
        let poly = Poly::parse(spec, dom_field, dom)?;
        dom_field.elements().map(|x| poly.eval_code(dom_field, x)).collect()
    };
    FieldFn::from_table(tower, dom, cod, table)
}

fn trace_to_prime(tower: &FieldTower, level: Level, x: u32, degree: u32) -> u32 {
    let field = tower.field(level);
    (0..degree).fold(0, |acc, j| field.add(acc, field.frobenius(x, j)))
}

/// An additive permutation of `F_q` from any map spec whose reduced
/// interpolating polynomial is linearized.
pub fn parse_additive(tower: &FieldTower, spec: &str) -> Result<AdditivePerm> {
    if spec.trim() == "identity" {
        return Ok(AdditivePerm::identity(tower));
    }
    let map = parse_map(tower, spec, Level::Base, Level::Base)?.with_poly(tower);
    let poly = map.poly().expect("attached");
    let p = tower.p() as usize;
    let mut coeffs = vec![0u32; tower.k() as usize];
    for (e, &c) in poly.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let i = (0..tower.k() as usize).find(|&i| p.pow(i as u32) == e).ok_or(Error::NotLinear)?;
        coeffs[i] = c;
    }
    AdditivePerm::new(tower, &coeffs)
}

/// An `F_q`-linear map from `identity`, `qpoly:[c0,c1,..]`
/// (`Σ c_i x^(q^i)`), `matrix:[[..],..]`, or any map spec.
pub fn parse_linear(tower: &FieldTower, spec: &str) -> Result<LinearMap> {
    let spec = spec.trim();
    if spec == "identity" {
        return Ok(LinearMap::identity(tower));
    }
    if let Some(c) = spec.strip_prefix("qpoly:") {
        return LinearMap::from_qpoly(tower, &parse_list(c, 6)?);
    }
    if let Some(m) = spec.strip_prefix("matrix:") {
        let rows: Vec<Vec<u32>> =
            serde_json::from_str(m).map_err(|e| parse_err(7, format!("expected a JSON matrix: {e}")))?;
        if rows.iter().flatten().any(|&v| !tower.base().contains(v)) {
            return Err(parse_err(7, "matrix entry out of range for the base field"));
        }
        return LinearMap::from_matrix(tower, Matrix::from_rows(rows));
    }
    LinearMap::from_table(tower, parse_map(tower, spec, Level::Top, Level::Top)?)
}

pub fn check_code(tower: &FieldTower, level: Level, code: u32) -> Result<u32> {
    tower.element(level, code).map(|e| e.code)
}

/// Comma-separated integers or inclusive ranges `a..b`; `a > b` is empty.
pub fn parse_int_list(text: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for (pos, item) in split_top_level(text) {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let int = |s: &str| s.trim().parse::<u32>().map_err(|_| parse_err(pos, format!("bad integer `{s}`")));
        match item.split_once("..") {
            Some((a, b)) => out.extend(int(a)?..=int(b)?),
            None => out.push(int(item)?),
        }
    }
    Ok(out)
}

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldTower, Level};

/// Dense univariate polynomial over one tower level; `coeffs[e]` is the
/// coefficient of `x^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    level: Level,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(level: Level, mut coeffs: Vec<u32>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { level, coeffs }
    }

    pub fn zero(level: Level) -> Poly {
        Poly { level, coeffs: Vec::new() }
    }

    pub fn monomial(level: Level, c: u32, e: usize) -> Poly {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Poly::new(level, coeffs)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation at a code of `field`.
    pub fn eval_code(&self, field: &Field, a: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, a), c))
    }

    pub fn eval(&self, tower: &FieldTower, a: FieldElement) -> Result<FieldElement> {
        if a.level != self.level {
            return Err(Error::LevelMismatch { expected: self.level, got: a.level });
        }
        let code = self.eval_code(tower.field(self.level), a.code);
        Ok(FieldElement { level: self.level, code })
    }

    /// Reduction modulo `x^N - x`, `N` the order of `field`; the result has
    /// degree below `N` and induces the same map.
    pub fn reduce(&self, field: &Field) -> Poly {
        let order = field.order() as usize;
        if self.coeffs.len() <= order {
            return self.clone();
        }
        let mut out = vec![0u32; order];
        for (e, &c) in self.coeffs.iter().enumerate() {
            let r = reduce_exponent(e, order);
            out[r] = field.add(out[r], c);
        }
        Poly::new(self.level, out)
    }

    /// Parses `c*x^e + c*x^e + ...`; a bare `c` is a constant term and `x` /
    /// `x^e` default the coefficient to 1. Exponents at or above the field
    /// order are folded down modulo `x^N - x`.
    pub fn parse(text: &str, field: &Field, level: Level) -> Result<Poly> {
        let order = field.order() as usize;
        let mut coeffs: Vec<u32> = Vec::new();
        let mut offset = 0;
        for raw in text.split('+') {
            let term = raw.trim();
            let position = offset + raw.len() - raw.trim_start().len();
            offset += raw.len() + 1;
            if term.is_empty() {
                return Err(Error::Parse { position, message: "empty term".into() });
            }
            let (c, e) = parse_term(term).map_err(|message| Error::Parse { position, message })?;
            if c >= field.order() {
                return Err(Error::Parse {
                    position,
                    message: format!("coefficient {c} out of range for field of order {}", field.order()),
                });
            }
            let e = reduce_exponent_u64(e, order);
            if coeffs.len() <= e {
                coeffs.resize(e + 1, 0);
            }
            coeffs[e] = field.add(coeffs[e], c);
        }
        Ok(Poly::new(level, coeffs))
    }

    /// Points `(a, f(a))` through which this polynomial passes.
    pub fn graph(&self, field: &Field) -> Vec<(u32, u32)> {
        field.elements().map(|a| (a, self.eval_code(field, a))).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0*x^0");
        }
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*x^{e}")?;
            first = false;
        }
        Ok(())
    }
}

fn parse_term(term: &str) -> std::result::Result<(u32, u64), String> {
    let number = |s: &str| -> std::result::Result<u64, String> {
        s.trim().parse::<u64>().map_err(|_| format!("expected an integer, found `{}`", s.trim()))
    };
    let (coef, power) = match term.split_once('*') {
        Some((c, rest)) => (Some(c), rest.trim()),
        None if term.contains('x') => (None, term),
        None => return Ok((number(term)? as u32, 0)),
    };
    let c = match coef {
        Some(c) => u32::try_from(number(c)?).map_err(|_| "coefficient too large".to_string())?,
        None => 1,
    };
    let e = match power.strip_prefix('x') {
        Some("") => 1,
        Some(rest) => match rest.trim().strip_prefix('^') {
            Some(e) => number(e)?,
            None => return Err(format!("malformed power `{power}`")),
        },
        None => return Err(format!("expected `x^e`, found `{power}`")),
    };
    Ok((c, e))
}

fn reduce_exponent(e: usize, order: usize) -> usize {
    if e < order {
        e
    } else {
        // x^e = x^(((e - 1) mod (N - 1)) + 1) on F_N for e >= 1
        (e - 1) % (order - 1) + 1
    }
}

fn reduce_exponent_u64(e: u64, order: usize) -> usize {
    if e < order as u64 {
        e as usize
    } else {
        ((e - 1) % (order as u64 - 1) + 1) as usize
    }
}

/// Newton-form interpolation through points with distinct abscissae; the
/// result has degree below the number of points.
pub fn interpolate(field: &Field, level: Level, points: &[(u32, u32)]) -> Result<Poly> {
    let n = points.len();
    let mut seen = vec![false; field.order() as usize];
    for &(x, _) in points {
        if std::mem::replace(&mut seen[x as usize], true) {
            return Err(Error::DuplicateAbscissa(x));
        }
    }
    // divided differences in place
    let xs: Vec<u32> = points.iter().map(|p| p.0).collect();
    let mut dd: Vec<u32> = points.iter().map(|p| p.1).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = field.sub(dd[i], dd[i - 1]);
            let den = field.sub(xs[i], xs[i - j]);
            dd[i] = field.div(num, den).expect("abscissae are distinct");
        }
    }
    // expand Σ dd[i] Π_{j<i} (x - x_j) by Horner
    let mut acc: Vec<u32> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        // acc = acc * (x - x_i) + dd[i]
        let mut next = vec![0u32; acc.len() + 1];
        for (e, &c) in acc.iter().enumerate() {
            next[e + 1] = field.add(next[e + 1], c);
            next[e] = field.sub(next[e], field.mul(c, xs[i]));
        }
        next[0] = field.add(next[0], dd[i]);
        acc = next;
    }
    Ok(Poly::new(level, acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FieldTower {
        FieldTower::build(2, 1, 2, None, None).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let f2 = FieldTower::build(2, 1, 1, None, None).unwrap();
        let p = Poly::new(Level::Top, vec![1, 1]);
        assert_eq!(p.eval_code(f2.top(), 1), 0);

        let t4 = f4();
        assert_eq!(Poly::monomial(Level::Top, 1, 3).eval_code(t4.top(), 2), 1);
        assert_eq!(Poly::zero(Level::Top).eval_code(t4.top(), 3), 0);
        let bad = t4.element(Level::Base, 1).unwrap();
        assert!(Poly::zero(Level::Top).eval(&t4, bad).is_err());
    }

    #[test]
    fn parse_and_display() {
        let t4 = f4();
        let p = Poly::parse("1*x^3 + 2*x^1 + 1*x^0", t4.top(), Level::Top).unwrap();
        assert_eq!(p.coeffs(), &[1, 2, 0, 1]);
        assert_eq!(p.to_string(), "1*x^3 + 2*x^1 + 1*x^0");
        assert_eq!(Poly::parse("x^2 + 3", t4.top(), Level::Top).unwrap().coeffs(), &[3, 0, 1]);
        // x^4 = x on F_4
        assert_eq!(Poly::parse("x^4", t4.top(), Level::Top).unwrap().coeffs(), &[0, 1]);
        let err = Poly::parse("1*x^2 + 7*x", t4.top(), Level::Top).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 8, .. }));
        assert!(Poly::parse("1*y^2", t4.top(), Level::Top).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let t4 = f4();
        let id: Vec<_> = (0..4).map(|a| (a, a)).collect();
        assert_eq!(interpolate(t4.top(), Level::Top, &id).unwrap().coeffs(), &[0, 1]);
        let constant: Vec<_> = (0..4).map(|a| (a, 3)).collect();
        assert_eq!(interpolate(t4.top(), Level::Top, &constant).unwrap().coeffs(), &[3]);
        assert_eq!(
            interpolate(t4.top(), Level::Top, &[(1, 0), (1, 2)]),
            Err(Error::DuplicateAbscissa(1))
        );
    }

    #[test]
    fn reduction_preserves_values() {
        let t4 = f4();
        let p = Poly::new(Level::Top, vec![1, 0, 2, 0, 0, 3, 1]);
        let r = p.reduce(t4.top());
        assert!(r.coeffs().len() <= 4);
        for a in 0..4 {
            assert_eq!(p.eval_code(t4.top(), a), r.eval_code(t4.top(), a));
        }
    }
}

//! The three-level tower `F_p ⊂ F_q ⊂ F_{q^n}` with `q = p^k`.
//!
//! Elements are integer codes. A base element `Σ c_i s^i` (`s` the root of
//! the base modulus) has code `Σ c_i p^i`; a top element `Σ e_j t^j` with
//! base coefficients `e_j` has code `Σ code(e_j) q^j`. Each level therefore
//! contains the level below it as the codes `0..order(lower)`.

mod gf;
mod irreducible;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gf::{is_prime, Field, MAX_ORDER};
pub use irreducible::{is_irreducible, smallest_irreducible};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Prime,
    Base,
    Top,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Prime => "prime",
            Level::Base => "base",
            Level::Top => "top",
        })
    }
}

/// An element tagged with the tower level it lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    pub level: Level,
    pub code: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow(u64),
}

/// Immutable description of `F_p ⊂ F_q ⊂ F_{q^n}` with verified moduli.
#[derive(Debug, Clone)]
pub struct FieldTower {
    k: u32,
    n: u32,
    prime: Field,
    base: Field,
    top: Field,
}

impl FieldTower {
    /// Builds the tower, choosing the smallest irreducible modulus at each
    /// level that is not supplied. Moduli are monic coefficient lists, low
    /// degree first (`modulus_q` over `F_p`, `modulus_qn` over `F_q` codes).
    pub fn build(
        p: u32,
        k: u32,
        n: u32,
        modulus_q: Option<&[u32]>,
        modulus_qn: Option<&[u32]>,
    ) -> Result<FieldTower> {
        if k == 0 || n == 0 {
            return Err(Error::DegreeMismatch(format!("k = {k}, n = {n}; both must be >= 1")));
        }
        let prime = Field::prime(p)?;
        match u64::from(p).checked_pow(k * n) {
            Some(size) if size <= MAX_ORDER => {}
            other => return Err(Error::FieldTooLarge(other.unwrap_or(u64::MAX))),
        }
        let modq = choose_modulus(&prime, k, modulus_q, "base")?;
        let base = Field::extend(&prime, &modq)?;
        let modqn = choose_modulus(&base, n, modulus_qn, "top")?;
        let top = Field::extend(&base, &modqn)?;
        Ok(FieldTower { k, n, prime, base, top })
    }

    pub fn p(&self) -> u32 {
        self.prime.order()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `q = p^k`.
    pub fn q(&self) -> u32 {
        self.base.order()
    }

    /// `q^n`.
    pub fn size(&self) -> u32 {
        self.top.order()
    }

    pub fn prime(&self) -> &Field {
        &self.prime
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn field(&self, level: Level) -> &Field {
        match level {
            Level::Prime => &self.prime,
            Level::Base => &self.base,
            Level::Top => &self.top,
        }
    }

    pub fn modulus_q(&self) -> &[u32] {
        self.base.modulus()
    }

    pub fn modulus_qn(&self) -> &[u32] {
        self.top.modulus()
    }

    /// Validated element constructor.
    pub fn element(&self, level: Level, code: u32) -> Result<FieldElement> {
        let order = self.field(level).order();
        if code >= order {
            return Err(Error::CodeOutOfRange { level, code, order });
        }
        Ok(FieldElement { level, code })
    }

    /// Coefficients of `a` over the level below it (over `F_p` for base
    /// elements, over `F_q` as base codes for top elements).
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        self.field(a.level).coeffs(a.code)
    }

    /// Flattened coefficients over `F_p`.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        self.field(a.level).digits(a.code)
    }

    pub fn apply(&self, op: ElemOp, a: FieldElement, b: Option<FieldElement>) -> Result<FieldElement> {
        let field = self.field(a.level);
        let other = |b: Option<FieldElement>| -> Result<u32> {
            let b = b.ok_or_else(|| Error::PreconditionViolated("binary operation needs two operands".into()))?;
            if b.level != a.level {
                return Err(Error::LevelMismatch { expected: a.level, got: b.level });
            }
            Ok(b.code)
        };
        let code = match op {
            ElemOp::Add => field.add(a.code, other(b)?),
            ElemOp::Sub => field.sub(a.code, other(b)?),
            ElemOp::Mul => field.mul(a.code, other(b)?),
            ElemOp::Inv => field.inv(a.code).ok_or(Error::ZeroInverse)?,
            ElemOp::Pow(e) => field.pow(a.code, e),
        };
        Ok(FieldElement { level: a.level, code })
    }

    /// `a^(p^j)` at `a`'s level.
    pub fn frobenius(&self, a: FieldElement, j: u32) -> FieldElement {
        FieldElement { level: a.level, code: self.field(a.level).frobenius(a.code, j) }
    }

    /// `Tr_m(a) = a + a^(p^m) + ... + a^(p^((D/m - 1) m))` for a top element,
    /// `D = k n`. The result lies in `F_{p^m}` and is returned as a top code.
    pub fn trace(&self, a: u32, m: u32) -> Result<u32> {
        let degree = self.top.degree();
        if m == 0 || degree % m != 0 {
            return Err(Error::NonDivisorM { m, degree });
        }
        let top = &self.top;
        let mut acc = 0;
        let mut term = a;
        for _ in 0..degree / m {
            acc = top.add(acc, term);
            term = top.frobenius(term, m);
        }
        debug_assert_eq!(top.frobenius(acc, m), acc);
        Ok(acc)
    }

    /// Relative trace `Tr_k^{kn}: F_{q^n} → F_q`, as a base code.
    pub fn relative_trace(&self, a: u32) -> u32 {
        let t = self.trace(a, self.k).expect("k divides kn");
        debug_assert!(t < self.q());
        t
    }

    /// Absolute trace `F_{q^n} → F_p`, as a prime code.
    pub fn absolute_trace(&self, a: u32) -> u32 {
        let t = self.trace(a, 1).expect("1 divides kn");
        debug_assert!(t < self.p());
        t
    }

    /// Table of `relative_trace` over all top codes.
    pub fn relative_trace_table(&self) -> Vec<u32> {
        self.top.elements().map(|a| self.relative_trace(a)).collect()
    }

    /// Table of `absolute_trace` over all top codes.
    pub fn absolute_trace_table(&self) -> Vec<u32> {
        self.top.elements().map(|a| self.absolute_trace(a)).collect()
    }

    /// Inclusion of a lower level into the top field.
    pub fn embed(&self, a: FieldElement) -> FieldElement {
        FieldElement { level: Level::Top, code: a.code }
    }

    /// Inverse of [`FieldTower::embed`] onto `target`; fails unless
    /// `a^{|target|} = a`.
    pub fn project(&self, a: FieldElement, target: Level) -> Result<FieldElement> {
        let source = self.field(a.level);
        let target_order = self.field(target).order();
        if target_order > source.order() {
            return Err(Error::LevelMismatch { expected: a.level, got: target });
        }
        let in_subfield = source.pow(a.code, u64::from(target_order)) == a.code;
        if !in_subfield {
            return Err(Error::NotInSubfield(a.code));
        }
        debug_assert!(a.code < target_order);
        Ok(FieldElement { level: target, code: a.code })
    }

    /// Short human-readable description, e.g. `p=2,k=1,n=3`.
    pub fn describe(&self) -> String {
        format!("p={},k={},n={}", self.p(), self.k, self.n)
    }
}

fn choose_modulus(sub: &Field, degree: u32, supplied: Option<&[u32]>, level: &'static str) -> Result<Vec<u32>> {
    let Some(m) = supplied else {
        return Ok(smallest_irreducible(sub, degree as usize));
    };
    if m.len() != degree as usize + 1 {
        return Err(Error::DegreeMismatch(format!(
            "{level} modulus has degree {}, expected {degree}",
            m.len().saturating_sub(1)
        )));
    }
    if m.last() != Some(&1) {
        return Err(Error::NotMonic { level });
    }
    if let Some(&bad) = m.iter().find(|&&c| c >= sub.order()) {
        return Err(Error::CodeOutOfRange { level: Level::Prime, code: bad, order: sub.order() });
    }
    if !is_irreducible(sub, m) {
        return Err(Error::ReducibleModulus { level });
    }
    Ok(m.to_vec())
}

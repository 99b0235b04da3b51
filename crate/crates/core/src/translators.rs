//! `(b, A)`-linear translators: a nonzero `γ ∈ F_{q^n}` with
//! `f(x + uγ) - f(x) = b·A(u)` for every `x ∈ F_{q^n}`, `u ∈ F_q`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{FieldTower, Level};
use crate::polyfun::{AdditivePerm, FieldFn};

/// A translator relation that has been checked against `f`.
#[derive(Debug, Clone)]
pub struct TranslatorCert {
    pub gamma: u32,
    pub b: u32,
    pub a: Arc<AdditivePerm>,
    pub f: Arc<FieldFn>,
    verified: bool,
}

impl TranslatorCert {
    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Re-runs the check against the stored `f`.
    pub fn reverify(&self, tower: &FieldTower) -> Result<bool> {
        let checker = TranslatorChecker::new(tower, self.f.clone())?;
        Ok(checker.holds(tower, self.gamma, self.b, &self.a))
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Certified(TranslatorCert),
    /// The first `(x, u)` in code order at which the relation fails.
    Refuted { x: u32, u: u32 },
}

impl Verdict {
    pub fn cert(self) -> Option<TranslatorCert> {
        match self {
            Verdict::Certified(c) => Some(c),
            Verdict::Refuted { .. } => None,
        }
    }
}

/// Checks translator relations for one `f: F_{q^n} → F_q`.
///
/// The check is exact but avoids the full `q^n · q` sweep: the relation is
/// additive in `u`, so `u` only needs to range over an `F_p`-basis of `F_q`;
/// and when `f` is affine over `F_p` (tested once, against an `F_p`-basis of
/// `F_{q^n}`), the difference `f(x + uγ) - f(x)` does not depend on `x`.
#[derive(Debug, Clone)]
pub struct TranslatorChecker {
    f: Arc<FieldFn>,
    affine: bool,
    u_basis: Vec<u32>,
}

impl TranslatorChecker {
    pub fn new(tower: &FieldTower, f: Arc<FieldFn>) -> Result<TranslatorChecker> {
        if f.dom() != Level::Top || f.cod() != Level::Base {
            return Err(Error::LevelMismatch { expected: Level::Base, got: f.cod() });
        }
        let (top, base) = (tower.top(), tower.base());
        let p = tower.p();
        let f0 = f.apply(0);
        let affine = (0..top.degree()).all(|r| {
            let e = p.pow(r);
            let de = base.sub(f.apply(e), f0);
            top.elements().all(|x| base.sub(f.apply(top.add(x, e)), f.apply(x)) == de)
        });
        let u_basis = (0..tower.k()).map(|j| p.pow(j)).collect();
        Ok(TranslatorChecker { f, affine, u_basis })
    }

    pub fn f(&self) -> &Arc<FieldFn> {
        &self.f
    }

    /// Whether `f(x + y) - f(x) = f(y) - f(0)` for all `x, y`.
    pub fn is_affine(&self) -> bool {
        self.affine
    }

    /// Whether `γ` is a `(b, A)`-linear translator of `f`.
    pub fn holds(&self, tower: &FieldTower, gamma: u32, b: u32, a: &AdditivePerm) -> bool {
        let (top, base) = (tower.top(), tower.base());
        let f = &self.f;
        self.u_basis.iter().all(|&u| {
            let shift = top.mul(u, gamma);
            let expected = base.mul(b, a.apply(u));
            if self.affine {
                base.sub(f.apply(shift), f.apply(0)) == expected
            } else {
                top.elements().all(|x| base.sub(f.apply(top.add(x, shift)), f.apply(x)) == expected)
            }
        })
    }

    /// Whether `f(x + uγ) = f(x)` everywhere, i.e. `γ` is a `(0, A)`-linear
    /// translator for any `A`.
    pub fn is_zero_translator(&self, tower: &FieldTower, gamma: u32) -> bool {
        let top = tower.top();
        let f = &self.f;
        self.u_basis.iter().all(|&u| {
            let shift = top.mul(u, gamma);
            if self.affine {
                f.apply(shift) == f.apply(0)
            } else {
                top.elements().all(|x| f.apply(top.add(x, shift)) == f.apply(x))
            }
        })
    }

    pub fn verify(&self, tower: &FieldTower, gamma: u32, b: u32, a: &Arc<AdditivePerm>) -> Result<Verdict> {
        if gamma == 0 {
            return Err(Error::ZeroGamma);
        }
        if self.holds(tower, gamma, b, a) {
            return Ok(Verdict::Certified(TranslatorCert {
                gamma,
                b,
                a: a.clone(),
                f: self.f.clone(),
                verified: true,
            }));
        }
        let (x, u) = first_violation(tower, &self.f, gamma, b, a).expect("fast check failed, so a violation exists");
        Ok(Verdict::Refuted { x, u })
    }
}

/// Full `q^n · q` sweep; the first violating `(x, u)` in code order.
pub fn first_violation(tower: &FieldTower, f: &FieldFn, gamma: u32, b: u32, a: &AdditivePerm) -> Option<(u32, u32)> {
    let (top, base) = (tower.top(), tower.base());
    let shifts: Vec<(u32, u32)> = base
        .elements()
        .map(|u| (top.mul(u, gamma), base.mul(b, a.apply(u))))
        .collect();
    for x in top.elements() {
        for (u, &(shift, expected)) in shifts.iter().enumerate() {
            if base.sub(f.apply(top.add(x, shift)), f.apply(x)) != expected {
                return Some((x, u as u32));
            }
        }
    }
    None
}

/// Checks whether `γ` is a `(b, A)`-linear translator of `f`.
pub fn verify_translator(
    tower: &FieldTower,
    f: &Arc<FieldFn>,
    gamma: u32,
    b: u32,
    a: &Arc<AdditivePerm>,
) -> Result<Verdict> {
    TranslatorChecker::new(tower, f.clone())?.verify(tower, gamma, b, a)
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    /// `(γ, b)` for every certified `γ`, ascending by `γ`.
    pub pairs: Vec<(u32, u32)>,
    pub certs: Vec<TranslatorCert>,
    /// `{γ} ∪ {0}` is closed under addition and `F_p`-scaling.
    pub subspace_closed: bool,
    /// `γ ↦ b` is additive and `F_p`-homogeneous on that set.
    pub b_additive: bool,
    pub f_surjective: bool,
}

/// All translators of `f` for a fixed `A`. For each nonzero `γ` the only
/// candidate is `b = (f(γ) - f(0)) / A(1)`, which is then checked in full.
pub fn search_translators(tower: &FieldTower, f: &Arc<FieldFn>, a: &Arc<AdditivePerm>) -> Result<SearchReport> {
    let checker = TranslatorChecker::new(tower, f.clone())?;
    let (top, base) = (tower.top(), tower.base());
    let a1_inv = base.inv(a.apply(1)).expect("A is bijective");
    let mut certs = Vec::new();
    for gamma in 1..top.order() {
        let b = base.mul(base.sub(f.apply(gamma), f.apply(0)), a1_inv);
        if let Verdict::Certified(c) = checker.verify(tower, gamma, b, a)? {
            certs.push(c);
        }
    }
    let pairs: Vec<(u32, u32)> = certs.iter().map(|c| (c.gamma, c.b)).collect();
    let lookup: HashMap<u32, u32> = pairs.iter().copied().chain(std::iter::once((0, 0))).collect();
    let mut subspace_closed = true;
    let mut b_additive = true;
    for &(g1, b1) in &pairs {
        for &(g2, b2) in &pairs {
            match lookup.get(&top.add(g1, g2)) {
                Some(&bs) => b_additive &= bs == base.add(b1, b2),
                None => subspace_closed = false,
            }
        }
        for c in 2..tower.p() {
            match lookup.get(&top.mul(c, g1)) {
                Some(&bs) => b_additive &= bs == base.mul(c, b1),
                None => subspace_closed = false,
            }
        }
    }
    Ok(SearchReport {
        pairs,
        certs,
        subspace_closed,
        b_additive,
        f_surjective: f.is_surjective(tower),
    })
}

fn check_compatible(certs: &[&TranslatorCert]) -> Result<()> {
    let Some(first) = certs.first() else {
        return Ok(());
    };
    for c in certs {
        if !c.verified {
            return Err(Error::UnverifiedCert);
        }
        let same_f = Arc::ptr_eq(&c.f, &first.f) || c.f == first.f;
        let same_a = Arc::ptr_eq(&c.a, &first.a) || c.a == first.a;
        if !same_f || !same_a {
            return Err(Error::IncompatibleCerts);
        }
    }
    Ok(())
}

/// Checks `f(x + Σ u_i γ_i) - f(x) = Σ b_i A(u_i)` at every `x`.
pub fn combine_translators(tower: &FieldTower, certs: &[TranslatorCert], us: &[u32]) -> Result<bool> {
    if certs.len() != us.len() {
        return Err(Error::PreconditionViolated(format!(
            "{} certificates but {} coefficients",
            certs.len(),
            us.len()
        )));
    }
    let refs: Vec<&TranslatorCert> = certs.iter().collect();
    check_compatible(&refs)?;
    let Some(first) = certs.first() else {
        return Ok(true);
    };
    let (top, base) = (tower.top(), tower.base());
    let (f, a) = (&first.f, &first.a);
    let mut shift = 0;
    let mut expected = 0;
    for (c, &u) in certs.iter().zip(us) {
        shift = top.add(shift, top.mul(u, c.gamma));
        expected = base.add(expected, base.mul(c.b, a.apply(u)));
    }
    Ok(top.elements().all(|x| base.sub(f.apply(top.add(x, shift)), f.apply(x)) == expected))
}

/// The `(b_1 + b_2, A)` certificate for `γ_1 + γ_2`; `None` when the sum is 0.
pub fn sum_cert(tower: &FieldTower, c1: &TranslatorCert, c2: &TranslatorCert) -> Result<Option<TranslatorCert>> {
    check_compatible(&[c1, c2])?;
    let gamma = tower.top().add(c1.gamma, c2.gamma);
    if gamma == 0 {
        return Ok(None);
    }
    let b = tower.base().add(c1.b, c2.b);
    match verify_translator(tower, &c1.f, gamma, b, &c1.a)? {
        Verdict::Certified(c) => Ok(Some(c)),
        Verdict::Refuted { .. } => Err(Error::UnverifiedCert),
    }
}

/// The `(c·b, A)` certificate for `c·γ`, `c ∈ F_p^*`.
pub fn scale_cert(tower: &FieldTower, cert: &TranslatorCert, c: u32) -> Result<TranslatorCert> {
    check_compatible(&[cert])?;
    if c == 0 || c >= tower.p() {
        return Err(Error::PreconditionViolated(format!("scalar {c} is not in F_p^*")));
    }
    let gamma = tower.top().mul(c, cert.gamma);
    let b = tower.base().mul(c, cert.b);
    verify_translator(tower, &cert.f, gamma, b, &cert.a)?
        .cert()
        .ok_or(Error::UnverifiedCert)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prop24Params {
    pub s: u32,
    /// Nonzero element of `F_q`, `q = p^m`.
    pub alpha: u32,
    /// Nonzero element of `F_{q^n}`.
    pub gamma: u32,
}

#[derive(Debug, Clone)]
pub struct Prop24 {
    pub f: Arc<FieldFn>,
    pub a: Arc<AdditivePerm>,
    pub cert: TranslatorCert,
}

/// The family `f(x) = Tr(x^(p^s) - α γ^(p^s - 1) x)` with
/// `A(u) = u^(p^s) - α u`, where `Tr` is the relative trace onto `F_q`.
///
/// `f` depends on `(α, γ)` only through `c = α γ^(p^s - 1)`, so the table and
/// its checker are cached per `c`; `A` is cached per `α`.
pub struct Prop24Family<'t> {
    tower: &'t FieldTower,
    s: u32,
    is_power: Vec<bool>,
    frob_trace: Vec<u32>,
    rel_trace: Vec<u32>,
    by_c: Vec<OnceLock<TranslatorChecker>>,
    by_alpha: Vec<OnceLock<Result<Arc<AdditivePerm>>>>,
}

impl<'t> Prop24Family<'t> {
    pub fn new(tower: &'t FieldTower, s: u32) -> Result<Prop24Family<'t>> {
        let m = tower.k();
        if s < 1 || s + 1 > m {
            return Err(Error::BadS { s, max: m.saturating_sub(1) });
        }
        let (top, base) = (tower.top(), tower.base());
        let e = u64::from(tower.p()).pow(s) - 1;
        let mut is_power = vec![false; base.order() as usize];
        for beta in base.elements() {
            is_power[base.pow(beta, e) as usize] = true;
        }
        // 0 = 0^e is always a power
        is_power[0] = true;
        let rel_trace = tower.relative_trace_table();
        let frob_trace = top.elements().map(|x| rel_trace[top.frobenius(x, s) as usize]).collect();
        Ok(Prop24Family {
            tower,
            s,
            is_power,
            frob_trace,
            rel_trace,
            by_c: (0..top.order()).map(|_| OnceLock::new()).collect(),
            by_alpha: (0..base.order()).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Whether `α` is a `(p^s - 1)`-th power in `F_q` (exhaustive over `β`).
    pub fn alpha_is_power(&self, alpha: u32) -> bool {
        self.is_power[alpha as usize]
    }

    /// `b = Tr(γ^(p^s))`.
    pub fn predicted_b(&self, gamma: u32) -> u32 {
        self.frob_trace[gamma as usize]
    }

    fn additive(&self, alpha: u32) -> Result<Arc<AdditivePerm>> {
        self.by_alpha[alpha as usize]
            .get_or_init(|| {
                let base = self.tower.base();
                let mut coeffs = vec![0u32; self.s as usize + 1];
                coeffs[0] = base.neg(alpha);
                coeffs[self.s as usize] = 1;
                AdditivePerm::new(self.tower, &coeffs).map(Arc::new)
            })
            .clone()
    }

    fn checker(&self, c: u32) -> &TranslatorChecker {
        self.by_c[c as usize].get_or_init(|| {
            let (top, base) = (self.tower.top(), self.tower.base());
            let f = FieldFn::from_fn(self.tower, Level::Top, Level::Base, |x| {
                base.sub(self.frob_trace[x as usize], self.rel_trace[top.mul(c, x) as usize])
            });
            TranslatorChecker::new(self.tower, Arc::new(f)).expect("f maps top to base")
        })
    }

    pub fn build(&self, alpha: u32, gamma: u32) -> Result<Prop24> {
        let (top, base) = (self.tower.top(), self.tower.base());
        if !base.contains(alpha) || !top.contains(gamma) {
            return Err(Error::CodeOutOfRange { level: Level::Top, code: alpha.max(gamma), order: top.order() });
        }
        if self.alpha_is_power(alpha) {
            return Err(Error::AlphaIsPower(alpha));
        }
        if gamma == 0 {
            return Err(Error::ZeroGamma);
        }
        let a = self.additive(alpha)?;
        let e = u64::from(self.tower.p()).pow(self.s) - 1;
        let c = top.mul(alpha, top.pow(gamma, e));
        let checker = self.checker(c);
        let b = self.predicted_b(gamma);
        match checker.verify(self.tower, gamma, b, &a)? {
            Verdict::Certified(cert) => Ok(Prop24 { f: checker.f().clone(), a, cert }),
            Verdict::Refuted { .. } => Err(Error::UnverifiedCert),
        }
    }
}

pub fn build_prop24(tower: &FieldTower, params: Prop24Params) -> Result<Prop24> {
    Prop24Family::new(tower, params.s)?.build(params.alpha, params.gamma)
}

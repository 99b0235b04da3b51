//! Boolean functions on `F_{2^n} × F_{2^n}` built from three translators that
//! share `(b, A)`, their duals, and spectral bentness checks.

use std::io::Write;

use crate::constructions::thm31_build;
use crate::error::{Error, Result};
use crate::field::{FieldTower, Level};
use crate::polyfun::{FieldFn, LinearMap};
use crate::translators::TranslatorCert;

/// A Boolean function on `2^bits` points, bit-packed. Pairs `(x, y)` of top
/// codes sit at index `(x << n) | y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolTable {
    bits: u32,
    words: Vec<u64>,
}

impl BoolTable {
    pub fn from_fn(bits: u32, f: impl Fn(usize) -> bool) -> BoolTable {
        let len = 1usize << bits;
        let mut words = vec![0u64; len.div_ceil(64)];
        for i in 0..len {
            if f(i) {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        BoolTable { bits, words }
    }

    /// The table of `h(x, y)` over pairs of top codes.
    pub fn from_pairs(tower: &FieldTower, h: impl Fn(u32, u32) -> bool) -> BoolTable {
        let n = tower.top().degree();
        let mask = (1usize << n) - 1;
        BoolTable::from_fn(2 * n, |i| h((i >> n) as u32, (i & mask) as u32))
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        1 << self.bits
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Bit `i` is bit `i mod 8` of byte `i / 8`; bytes as lowercase hex.
    pub fn to_hex(&self) -> String {
        let bytes = self.len().div_ceil(8);
        (0..bytes)
            .map(|j| format!("{:02x}", (self.words[j / 8] >> (8 * (j % 8))) & 0xff))
            .collect()
    }

    pub fn from_hex(bits: u32, hex: &str) -> Result<BoolTable> {
        let len = 1usize << bits;
        if hex.len() != 2 * len.div_ceil(8) {
            return Err(Error::TableLength { expected: 2 * len.div_ceil(8), got: hex.len() });
        }
        let mut words = vec![0u64; len.div_ceil(64)];
        for j in 0..hex.len() / 2 {
            let byte = u64::from_str_radix(&hex[2 * j..2 * j + 2], 16)
                .map_err(|e| Error::Parse { position: 2 * j, message: e.to_string() })?;
            words[j / 8] |= byte << (8 * (j % 8));
        }
        if len < 8 {
            words[0] &= (1 << len) - 1;
        }
        Ok(BoolTable { bits, words })
    }
}

/// Walsh–Hadamard transform `W(u) = Σ_i (-1)^(f(i) + u·i)`, `u·i` the parity
/// of the bitwise AND, by in-place butterflies.
pub fn walsh_spectrum(table: &BoolTable) -> Vec<i64> {
    let mut w: Vec<i64> = (0..table.len()).map(|i| if table.get(i) { -1 } else { 1 }).collect();
    let mut h = 1;
    while h < w.len() {
        for block in w.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        h *= 2;
    }
    w
}

/// `walsh_spectrum` for a table given as a plain slice whose length must be a
/// power of two.
pub fn walsh_spectrum_of(values: &[bool]) -> Result<Vec<i64>> {
    if !values.len().is_power_of_two() {
        return Err(Error::BadDomainSize(values.len()));
    }
    let bits = values.len().trailing_zeros();
    Ok(walsh_spectrum(&BoolTable::from_fn(bits, |i| values[i])))
}

/// Bit `r` of the mask is `Tr(a · 2^r)`, so `Tr(a·x)` is the parity of
/// `mask(a) & x`.
fn trace_masks(tower: &FieldTower) -> Vec<usize> {
    let top = tower.top();
    let tr = tower.absolute_trace_table();
    top.elements()
        .map(|a| (0..top.degree()).fold(0, |m, r| m | (tr[top.mul(a, 1 << r) as usize] as usize) << r))
        .collect()
}

/// `W(a, b) = Σ_{x,y} (-1)^(H(x,y) + Tr(ax) + Tr(by))`, indexed like the
/// table, via the fast transform and the trace masks.
pub fn trace_spectrum(tower: &FieldTower, h: &BoolTable) -> Result<Vec<i64>> {
    let n = tower.top().degree();
    if tower.p() != 2 || h.bits() != 2 * n {
        return Err(Error::BadDomainSize(h.len()));
    }
    let fast = walsh_spectrum(h);
    let masks = trace_masks(tower);
    let mask = (1usize << n) - 1;
    Ok((0..h.len())
        .map(|i| fast[(masks[i >> n] << n) | masks[i & mask]])
        .collect())
}

/// The same spectrum summed directly over all `(x, y)`.
pub fn trace_spectrum_naive(tower: &FieldTower, h: &BoolTable) -> Vec<i64> {
    let top = tower.top();
    let n = top.degree();
    let tr = tower.absolute_trace_table();
    let size = top.order();
    let mut out = Vec::with_capacity(h.len());
    for a in 0..size {
        for b in 0..size {
            let mut sum = 0i64;
            for x in 0..size {
                let tax = tr[top.mul(a, x) as usize];
                for y in 0..size {
                    let bit = u32::from(h.get(((x as usize) << n) | y as usize)) ^ tax ^ tr[top.mul(b, y) as usize];
                    sum += if bit == 0 { 1 } else { -1 };
                }
            }
            out.push(sum);
        }
    }
    out
}

/// `Σ W² = 4^bits` for a spectrum over `2^bits` points.
pub fn parseval_holds(spectrum: &[i64]) -> bool {
    let total: i128 = spectrum.iter().map(|&w| i128::from(w) * i128::from(w)).sum();
    total == (spectrum.len() as i128).pow(2)
}

/// Whether every entry has absolute value `sqrt(len)`.
pub fn is_flat(spectrum: &[i64]) -> bool {
    let target = (spectrum.len() as f64).sqrt() as i64;
    target * target == spectrum.len() as i64 && spectrum.iter().all(|w| w.abs() == target)
}

/// The dual read off a flat spectrum, `W(a, b) = 2^n (-1)^dual(a, b)`.
pub fn dual_from_spectrum(spectrum: &[i64]) -> Option<BoolTable> {
    if !is_flat(spectrum) {
        return None;
    }
    let bits = spectrum.len().trailing_zeros();
    Some(BoolTable::from_fn(bits, |i| spectrum[i] < 0))
}

/// Writes `a,b,W` rows (with header), `a` outer, for a pair-indexed spectrum.
pub fn write_spectrum_csv<W: Write>(tower: &FieldTower, spectrum: &[i64], out: W) -> Result<()> {
    let n = tower.top().degree();
    let mask = (1usize << n) - 1;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::PreconditionViolated(format!("writing spectrum: {e}"));
    w.write_record(["a", "b", "W"]).map_err(io)?;
    for (i, v) in spectrum.iter().enumerate() {
        w.write_record([(i >> n).to_string(), (i & mask).to_string(), v.to_string()])
            .map_err(io)?;
    }
    w.flush().map_err(|e| Error::PreconditionViolated(format!("writing spectrum: {e}")))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BentVerdict {
    pub bent: bool,
    pub dual_matches: bool,
}

/// `H(x, y) = Tr(x L(y)) + Σ_{i<j} Tr(L(γ_i) x ρ(y)) Tr(L(γ_j) x ρ(y))` with
/// `ρ(x) = g(f(x)) + A^{-1}(f(x)/b)`, and the predicted dual
/// `H̃(x, y) = Tr(y L^{-1}(x)) + Σ_{i<j} Tr(γ_i y ρ̃(L^{-1}x)) Tr(γ_j y ρ̃(L^{-1}x))`
/// with `ρ̃(x) = A^{-1}(f(x)/b + g^{-1}(A^{-1}(f(x)/b))/b)`.
#[derive(Debug, Clone)]
pub struct BentInstance {
    pub gammas: [u32; 3],
    pub b: u32,
    pub rho: FieldFn,
    pub rho_tilde: FieldFn,
    pub h: BoolTable,
    pub h_dual: BoolTable,
    /// Each `φ_i(x) = L(x) + L(γ_i)ρ(x)` is a permutation whose predicted
    /// inverse checks out.
    pub phi_permutations: [bool; 3],
    /// `ψ = φ_1 + φ_2 + φ_3` is a permutation.
    pub psi_permutation: bool,
    /// `ψ^{-1} = φ_1^{-1} + φ_2^{-1} + φ_3^{-1}`.
    pub psi_inverse_is_sum: bool,
    walsh: Option<Vec<i64>>,
}

fn violated(what: &str) -> Error {
    Error::HypothesisViolated(what.to_string())
}

pub fn build_h(tower: &FieldTower, l: &LinearMap, certs: &[TranslatorCert; 3], g: &FieldFn) -> Result<BentInstance> {
    if tower.p() != 2 {
        return Err(violated("characteristic is not 2"));
    }
    if certs.iter().any(|c| !c.is_verified()) {
        return Err(violated("a certificate is unverified"));
    }
    let [c1, c2, c3] = certs;
    let same = |a: &TranslatorCert, b: &TranslatorCert| a.f == b.f && a.a == b.a && a.b == b.b;
    if !same(c1, c2) || !same(c1, c3) {
        return Err(violated("certificates do not share f, b and A"));
    }
    let gammas = [c1.gamma, c2.gamma, c3.gamma];
    if gammas[0] == gammas[1] || gammas[0] == gammas[2] || gammas[1] == gammas[2] {
        return Err(violated("gammas are not pairwise distinct"));
    }
    let top = tower.top();
    if top.add(top.add(gammas[0], gammas[1]), gammas[2]) == 0 {
        return Err(violated("gamma_1 + gamma_2 + gamma_3 = 0"));
    }
    let base = tower.base();
    let b = c1.b;
    let b_inv = base.inv(b).ok_or_else(|| violated("b = 0"))?;
    if g.dom() != Level::Base || g.cod() != Level::Base || !g.is_permutation() {
        return Err(violated("g is not a permutation of the base field"));
    }
    let l_inv = l.inverse(tower).ok_or_else(|| violated("L is not a permutation"))?;
    let g_inv = g.inverse_table()?;
    let (f, a) = (&c1.f, &c1.a);

    let rho = FieldFn::from_fn(tower, Level::Top, Level::Base, |x| {
        let fx = f.apply(x);
        base.add(g.apply(fx), a.apply_inverse(base.mul(fx, b_inv)))
    });
    let rho_tilde = FieldFn::from_fn(tower, Level::Top, Level::Base, |x| {
        let s = base.mul(f.apply(x), b_inv);
        a.apply_inverse(base.add(s, base.mul(g_inv.apply(a.apply_inverse(s)), b_inv)))
    });

    let tr = tower.absolute_trace_table();
    let trace = |v: u32| tr[v as usize] == 1;
    let pair_sum = |t: [bool; 3]| (t[0] & t[1]) ^ (t[0] & t[2]) ^ (t[1] & t[2]);
    let l_gammas = gammas.map(|g| l.apply(g));
    let h = BoolTable::from_pairs(tower, |x, y| {
        let xr = top.mul(x, rho.apply(y));
        trace(top.mul(x, l.apply(y))) ^ pair_sum(l_gammas.map(|lg| trace(top.mul(lg, xr))))
    });
    let h_dual = BoolTable::from_pairs(tower, |x, y| {
        let z = l_inv.apply(x);
        let yr = top.mul(y, rho_tilde.apply(z));
        trace(top.mul(y, z)) ^ pair_sum(gammas.map(|gm| trace(top.mul(gm, yr))))
    });

    let mut phis = Vec::with_capacity(3);
    let mut phi_permutations = [false; 3];
    for (i, c) in certs.iter().enumerate() {
        let r = thm31_build(tower, l, c, g)?;
        phi_permutations[i] = r.oracle_permutation && r.oracle_inverse_ok == Some(true);
        phis.push(r);
    }
    let sum3 = |t: [&[u32]; 3], x: usize| top.add(top.add(t[0][x], t[1][x]), t[2][x]);
    let psi = FieldFn::from_fn(tower, Level::Top, Level::Top, |x| {
        sum3([phis[0].built.table(), phis[1].built.table(), phis[2].built.table()], x as usize)
    });
    let psi_permutation = psi.is_permutation();
    let inverses: Vec<&[u32]> = phis
        .iter()
        .map(|r| r.predicted_inverse.as_ref().expect("always built").table())
        .collect();
    let psi_inv_sum = FieldFn::from_fn(tower, Level::Top, Level::Top, |x| {
        sum3([inverses[0], inverses[1], inverses[2]], x as usize)
    });
    let psi_inverse_is_sum = psi.inverts(&psi_inv_sum);

    Ok(BentInstance {
        gammas,
        b,
        rho,
        rho_tilde,
        h,
        h_dual,
        phi_permutations,
        psi_permutation,
        psi_inverse_is_sum,
        walsh: None,
    })
}

impl BentInstance {
    pub fn compute_spectrum(&mut self, tower: &FieldTower) -> Result<&[i64]> {
        let w = trace_spectrum(tower, &self.h)?;
        Ok(self.walsh.insert(w))
    }

    pub fn spectrum(&self) -> Option<&[i64]> {
        self.walsh.as_deref()
    }

    /// Flatness of the spectrum, and whether its sign pattern is the
    /// predicted dual.
    pub fn is_bent(&self) -> Result<BentVerdict> {
        let w = self.walsh.as_deref().ok_or(Error::SpectrumMissing)?;
        let dual = dual_from_spectrum(w);
        Ok(BentVerdict {
            bent: dual.is_some(),
            dual_matches: dual.as_ref() == Some(&self.h_dual),
        })
    }
}

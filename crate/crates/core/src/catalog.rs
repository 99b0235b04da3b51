//! Seeded sweeps that build instances of every construction over many towers
//! and compare each prediction with the brute-force verdict.

use std::io::Write;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bent::build_h;
use crate::constructions::{
    cor34_check, cor35_build, cor36_check, cor38_build, thm21_build, thm31_build, thm33_build, thm37_build,
    thm39_build, ConstructionResult, Theorem, TranslatorSystem,
};
use crate::error::{Error, Result};
use crate::families::{
    random_additive_perm, random_base_map, random_base_perm, random_invertible, random_kernel_setting,
    random_linear_perm, random_rest, seeded, trace_zero_elements, CoordinateFrame,
};
use crate::field::FieldTower;
use crate::polyfun::{AdditivePerm, FieldFn, LinearMap, Matrix};
use crate::translators::{verify_translator, TranslatorCert};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub field: String,
    pub theorem: Theorem,
    pub params_digest: String,
    pub predicted: bool,
    pub oracle: bool,
    pub agree: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogConfig {
    /// `(p, k, n)` triples.
    pub towers: Vec<(u32, u32, u32)>,
    pub theorems: Vec<Theorem>,
    pub per_field: usize,
    pub seed: u64,
    pub cap: u64,
}

/// Every `(p, k, n)` with `p ∈ {2, 3, 5, 7}`, `4 ≤ p^(kn) ≤ cap`.
pub fn default_towers(cap: u64) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for p in [2u32, 3, 5, 7] {
        for k in 1..=20u32 {
            for n in 1..=20u32 {
                let size = u64::from(p).checked_pow(k * n).unwrap_or(u64::MAX);
                if (4..=cap).contains(&size) {
                    out.push((p, k, n));
                }
            }
        }
    }
    out
}

/// Whether the construction has any valid instance over this tower.
pub fn applies(theorem: Theorem, tower: &FieldTower) -> bool {
    let (p, q, n) = (tower.p(), u64::from(tower.q()), tower.n());
    match theorem {
        Theorem::Thm31 | Theorem::Cor34 | Theorem::Cor36 => p == 2,
        Theorem::Cor32 => p == 2 && q.pow(n - 1) >= 4,
        Theorem::Cor38 => p != 2 && n == 2,
        _ => true,
    }
}

fn derive_seed(parts: &str) -> u64 {
    let d = Sha256::digest(parts.as_bytes());
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

fn digest(parts: &[&[u32]], label: &str) -> String {
    let mut h = Sha256::new();
    h.update(label.as_bytes());
    for part in parts {
        h.update((part.len() as u64).to_le_bytes());
        for v in *part {
            h.update(v.to_le_bytes());
        }
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn run_catalog(cfg: &CatalogConfig) -> Result<Vec<CatalogRow>> {
    for &(p, k, n) in &cfg.towers {
        let size = u64::from(p).checked_pow(k * n).unwrap_or(u64::MAX);
        if size > cfg.cap {
            return Err(Error::CapExceeded { required: size, cap: cfg.cap });
        }
    }
    let towers: Vec<Arc<FieldTower>> = cfg
        .towers
        .par_iter()
        .map(|&(p, k, n)| FieldTower::build(p, k, n, None, None).map(Arc::new))
        .collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for tower in &towers {
        for &theorem in &cfg.theorems {
            if applies(theorem, tower) {
                for index in 0..cfg.per_field {
                    jobs.push((tower.clone(), theorem, index));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|(tower, theorem, index)| {
            let label = format!("{}|{}|{}|{}", tower.describe(), theorem, index, cfg.seed);
            let mut rng = seeded(derive_seed(&label));
            let (predicted, oracle, digest) = run_instance(tower, *theorem, &mut rng, &label)?;
            Ok(CatalogRow {
                field: tower.describe(),
                theorem: *theorem,
                params_digest: digest,
                predicted,
                oracle,
                agree: predicted == oracle,
            })
        })
        .collect()
}

pub fn write_catalog_csv<W: Write>(rows: &[CatalogRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::PreconditionViolated(format!("writing catalog: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["field", "theorem", "params-digest", "predicted", "oracle", "agree"])
        .map_err(io)?;
    for r in rows {
        w.write_record([
            r.field.as_str(),
            r.theorem.name(),
            r.params_digest.as_str(),
            &r.predicted.to_string(),
            &r.oracle.to_string(),
            &r.agree.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::PreconditionViolated(format!("writing catalog: {e}")))?;
    Ok(())
}

/// A random frame of `F_{q^n}` over `F_q`.
fn random_frame(tower: &FieldTower, rng: &mut impl Rng) -> CoordinateFrame {
    let m = random_invertible(tower, rng);
    let n = tower.n() as usize;
    let basis = (0..n)
        .map(|j| tower.top().from_coeffs(&(0..n).map(|i| m.get(i, j)).collect::<Vec<_>>()))
        .collect();
    CoordinateFrame::from_basis(tower, basis)
}

fn nonzero(tower: &FieldTower, rng: &mut impl Rng) -> u32 {
    rng.gen_range(1..tower.q())
}

/// One translator relation: `γ = frame[0]` is a `(b, A)`-linear translator
/// of a random `f`.
fn single_cert(tower: &FieldTower, b: u32, rng: &mut impl Rng) -> TranslatorCert {
    let frame = random_frame(tower, rng);
    let a = Arc::new(random_additive_perm(tower, rng));
    let rest = random_rest(tower, tower.n() as usize - 1, rng);
    let f = Arc::new(frame.translator_fn(tower, &[b], &a, &rest));
    verify_translator(tower, &f, frame.basis()[0], b, &a)
        .expect("nonzero gamma")
        .cert()
        .expect("translator by construction")
}

/// A diagonal system on the first `m` frame vectors.
fn diagonal_system(
    tower: &FieldTower,
    frame: &CoordinateFrame,
    bs: &[u32],
    hs: Vec<FieldFn>,
    rng: &mut impl Rng,
) -> Result<TranslatorSystem> {
    let m = bs.len();
    let free = tower.n() as usize - m;
    let mut fs = Vec::new();
    let mut a_list = Vec::new();
    for (j, &bj) in bs.iter().enumerate() {
        let a = Arc::new(random_additive_perm(tower, rng));
        let mut row = vec![0u32; m];
        row[j] = bj;
        fs.push(Arc::new(frame.translator_fn(tower, &row, &a, &random_rest(tower, free, rng))));
        a_list.push(a);
    }
    TranslatorSystem::diagonal(tower, frame.basis()[..m].to_vec(), fs, hs, a_list, bs)
}

fn result_digest(r: &ConstructionResult, label: &str) -> String {
    digest(&[r.built.table()], label)
}

fn outcome(r: &ConstructionResult, label: &str) -> (bool, bool, String) {
    let oracle = r.oracle_permutation && r.oracle_inverse_ok != Some(false);
    (r.predicted_permutation, oracle, result_digest(r, label))
}

/// Builds one random instance and returns `(predicted, oracle, digest)`.
pub fn run_instance(
    tower: &FieldTower,
    theorem: Theorem,
    rng: &mut impl Rng,
    label: &str,
) -> Result<(bool, bool, String)> {
    let n = tower.n() as usize;
    match theorem {
        Theorem::Thm21 => {
            let b = rng.gen_range(0..tower.q());
            let cert = single_cert(tower, b, rng);
            let l = random_linear_perm(tower, rng);
            let h = random_base_map(tower, rng);
            Ok(outcome(&thm21_build(tower, &l, &cert, &h)?, label))
        }
        Theorem::Thm31 => {
            let b = nonzero(tower, rng);
            let cert = single_cert(tower, b, rng);
            let l = random_linear_perm(tower, rng);
            let g = random_base_perm(tower, rng);
            Ok(outcome(&thm31_build(tower, &l, &cert, &g)?, label))
        }
        Theorem::Thm33 | Theorem::Cor35 => {
            let m = rng.gen_range(1..=n.min(2));
            let frame = random_frame(tower, rng);
            let bs: Vec<u32> = (0..m).map(|_| rng.gen_range(0..tower.q())).collect();
            let hs = (0..m).map(|_| random_base_map(tower, rng)).collect();
            let sys = diagonal_system(tower, &frame, &bs, hs, rng)?;
            let r = if theorem == Theorem::Thm33 {
                thm33_build(tower, &sys)?
            } else {
                cor35_build(tower, &random_linear_perm(tower, rng), &sys)?
            };
            Ok(outcome(&r, label))
        }
        Theorem::Cor34 => {
            let m = rng.gen_range(1..=n.min(2));
            let frame = random_frame(tower, rng);
            let hs = (0..m).map(|_| random_base_map(tower, rng)).collect();
            let sys = diagonal_system(tower, &frame, &vec![0; m], hs, rng)?;
            let r = cor34_check(tower, &sys)?;
            let oracle = r.oracle_permutation && r.involution == Some(true) && r.oracle_inverse_ok != Some(false);
            Ok((true, oracle, result_digest(&r, label)))
        }
        Theorem::Cor36 => {
            let m = rng.gen_range(1..=n.min(2));
            let frame = random_frame(tower, rng);
            let hs = (0..m).map(|_| random_base_map(tower, rng)).collect();
            let sys = diagonal_system(tower, &frame, &vec![0; m], hs, rng)?;
            let l = commuting_involution(tower, &sys, rng)?;
            let rep = cor36_check(tower, &l, &sys)?;
            let r = &rep.result;
            let oracle = r.oracle_permutation && rep.g_involution && r.oracle_inverse_ok != Some(false);
            Ok((true, oracle, result_digest(r, label)))
        }
        Theorem::Thm37 => {
            let m = rng.gen_range(0..=n);
            let ks = random_kernel_setting(tower, m, rng);
            let bs: Vec<u32> = (0..m).map(|_| nonzero(tower, rng)).collect();
            let hs = (0..m).map(|_| random_base_perm(tower, rng)).collect();
            let sys = diagonal_system(tower, &ks.frame, &bs, hs, rng)?;
            Ok(outcome(&thm37_build(tower, &ks.l, &sys)?, label))
        }
        Theorem::Cor38 => {
            let zeros = trace_zero_elements(tower);
            let gamma = zeros[rng.gen_range(0..zeros.len())];
            let frame = CoordinateFrame::extending(tower, &[gamma])?;
            let b = nonzero(tower, rng);
            let a = Arc::new(random_additive_perm(tower, rng));
            let f = Arc::new(frame.translator_fn(tower, &[b], &a, &random_rest(tower, 1, rng)));
            let cert = verify_translator(tower, &f, gamma, b, &a)?.cert().ok_or(Error::UnverifiedCert)?;
            let h = random_base_perm(tower, rng);
            Ok(outcome(&cor38_build(tower, &cert, &h)?, label))
        }
        Theorem::Thm39 => {
            let m = rng.gen_range(1..=n.min(2));
            let ks = random_kernel_setting(tower, m, rng);
            let t = rng.gen_range(0..=tower.k());
            let a = Arc::new(AdditivePerm::frobenius(tower, t)?);
            let b: Vec<Vec<u32>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(0..tower.q())).collect()).collect();
            let free = n - m;
            let fs = (0..m)
                .map(|j| {
                    let column: Vec<u32> = (0..m).map(|i| b[i][j]).collect();
                    Arc::new(ks.frame.translator_fn(tower, &column, &a, &random_rest(tower, free, rng)))
                })
                .collect();
            let hs = (0..m).map(|_| random_base_perm(tower, rng)).collect();
            let sys = TranslatorSystem::new(tower, ks.gammas(m).to_vec(), fs, hs, vec![a; m], b)?;
            Ok(outcome(&thm39_build(tower, &ks.l, &sys, t)?, label))
        }
        Theorem::Cor32 => {
            let (certs, l, g) = random_bent_inputs(tower, rng)?;
            let mut inst = build_h(tower, &l, &certs, &g)?;
            inst.compute_spectrum(tower)?;
            let v = inst.is_bent()?;
            let remark = inst.phi_permutations.iter().all(|&p| p) && inst.psi_permutation && inst.psi_inverse_is_sum;
            let oracle = v.bent && v.dual_matches && remark;
            let words: Vec<u32> = inst.h.to_hex().bytes().map(u32::from).collect();
            Ok((true, oracle, digest(&[&words], label)))
        }
    }
}

/// A random linear involution commuting with `F` from the system, trying
/// conjugates of coordinate swaps first and falling back to the identity.
fn commuting_involution(tower: &FieldTower, sys: &TranslatorSystem, rng: &mut impl Rng) -> Result<LinearMap> {
    let f = thm33_build(tower, sys)?.built;
    let n = tower.n() as usize;
    let base = tower.base();
    for _ in 0..16 {
        if n < 2 {
            break;
        }
        let p = random_invertible(tower, rng);
        let mut swap = Matrix::identity(n);
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            swap.set(i, i, 0);
            swap.set(j, j, 0);
            swap.set(i, j, 1);
            swap.set(j, i, 1);
        }
        let inv = p.inverse(base).expect("invertible");
        let l = LinearMap::from_matrix(tower, p.mul(base, &swap).mul(base, &inv))?;
        if tower.top().elements().all(|x| l.apply(f.apply(x)) == f.apply(l.apply(x))) {
            return Ok(l);
        }
    }
    Ok(LinearMap::identity(tower))
}

/// Three translators sharing `(b, A)` for a random `f` that ignores the
/// coordinates `1..d`, where `q^(d-1) ≥ 4`; the gammas are `e_0`, `e_0 + v`,
/// `e_0 + w` for distinct nonzero `v, w` in the span of `e_1..e_{d-1}`.
pub fn random_bent_inputs(
    tower: &FieldTower,
    rng: &mut impl Rng,
) -> Result<([TranslatorCert; 3], LinearMap, FieldFn)> {
    let q = u64::from(tower.q());
    let n = tower.n() as usize;
    let d = (1..=n).find(|&d| q.pow(d as u32 - 1) >= 4).ok_or_else(|| {
        Error::HypothesisViolated("no three distinct translators with a common b and nonzero sum exist".into())
    })?;
    let frame = random_frame(tower, rng);
    let top = tower.top();
    let b = nonzero(tower, rng);
    let a = Arc::new(random_additive_perm(tower, rng));
    let mut bs = vec![0u32; d];
    bs[0] = b;
    let f = Arc::new(frame.translator_fn(tower, &bs, &a, &random_rest(tower, n - d, rng)));
    let span: Vec<u32> = (1..q.pow(d as u32 - 1) as u32)
        .map(|idx| {
            let mut idx = idx;
            (1..d).fold(0, |acc, i| {
                let c = idx % tower.q();
                idx /= tower.q();
                top.add(acc, top.mul(c, frame.basis()[i]))
            })
        })
        .collect();
    let vi = rng.gen_range(0..span.len());
    let wi = (vi + rng.gen_range(1..span.len())) % span.len();
    let e0 = frame.basis()[0];
    let gammas = [e0, top.add(e0, span[vi]), top.add(e0, span[wi])];
    let certs = gammas.map(|g| {
        verify_translator(tower, &f, g, b, &a)
            .expect("nonzero gamma")
            .cert()
            .expect("translator by construction")
    });
    Ok((certs, random_linear_perm(tower, rng), random_base_perm(tower, rng)))
}

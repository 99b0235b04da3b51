//! Seeded generators for parameter families: linear permutations, maps of
//! `F_q`, additive permutations, and functions with prescribed translators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldTower, Level};
use crate::polyfun::{AdditivePerm, FieldFn, LinearMap, Matrix};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(order: u32, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_rows((0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..order)).collect()).collect())
}

/// Uniform invertible `n×n` matrix over `F_q`, by rejection.
pub fn random_invertible(tower: &FieldTower, rng: &mut impl Rng) -> Matrix {
    let n = tower.n() as usize;
    loop {
        let m = random_matrix(tower.q(), n, n, rng);
        if m.rank(tower.base()) == n {
            return m;
        }
    }
}

pub fn random_linear_perm(tower: &FieldTower, rng: &mut impl Rng) -> LinearMap {
    LinearMap::from_matrix(tower, random_invertible(tower, rng)).expect("square")
}

/// Every `F_q`-linear permutation of `F_{q^n}`; refuses when there are more
/// than `limit` matrices to scan.
pub fn all_linear_perms(tower: &FieldTower, limit: u64) -> Result<Vec<LinearMap>> {
    let n = tower.n() as usize;
    let count = u64::from(tower.q()).checked_pow((n * n) as u32).unwrap_or(u64::MAX);
    if count > limit {
        return Err(Error::CapExceeded { required: count, cap: limit });
    }
    let q = u64::from(tower.q());
    Ok((0..count)
        .filter_map(|mut idx| {
            let entries: Vec<u32> = (0..n * n)
                .map(|_| {
                    let d = (idx % q) as u32;
                    idx /= q;
                    d
                })
                .collect();
            let m = Matrix::from_rows(entries.chunks(n).map(<[u32]>::to_vec).collect());
            (m.rank(tower.base()) == n).then(|| LinearMap::from_matrix(tower, m).expect("square"))
        })
        .collect())
}

/// All `q^q` maps `F_q → F_q`, in lexicographic order of their tables.
pub fn all_base_maps(tower: &FieldTower, limit: u64) -> Result<Vec<FieldFn>> {
    let q = u64::from(tower.q());
    let count = q.checked_pow(tower.q()).unwrap_or(u64::MAX);
    if count > limit {
        return Err(Error::CapExceeded { required: count, cap: limit });
    }
    Ok((0..count)
        .map(|mut idx| {
            let mut table = vec![0u32; q as usize];
            for slot in table.iter_mut().rev() {
                *slot = (idx % q) as u32;
                idx /= q;
            }
            FieldFn::from_table(tower, Level::Base, Level::Base, table).expect("valid codes")
        })
        .collect())
}

/// All permutations of `F_q`, lexicographic.
pub fn base_permutations(tower: &FieldTower, limit: u64) -> Result<Vec<FieldFn>> {
    let q = tower.q();
    let count = (1..=u64::from(q)).try_fold(1u64, |acc, i| acc.checked_mul(i)).unwrap_or(u64::MAX);
    if count > limit {
        return Err(Error::CapExceeded { required: count, cap: limit });
    }
    let mut perm: Vec<u32> = (0..q).collect();
    let mut out = Vec::with_capacity(count as usize);
    loop {
        out.push(FieldFn::from_table(tower, Level::Base, Level::Base, perm.clone()).expect("valid codes"));
        // next lexicographic permutation
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return Ok(out);
        };
        let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).expect("exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

pub fn random_base_map(tower: &FieldTower, rng: &mut impl Rng) -> FieldFn {
    let q = tower.q();
    FieldFn::from_fn(tower, Level::Base, Level::Base, |_| rng.gen_range(0..q))
}

pub fn random_base_perm(tower: &FieldTower, rng: &mut impl Rng) -> FieldFn {
    let mut table: Vec<u32> = (0..tower.q()).collect();
    table.shuffle(rng);
    FieldFn::from_table(tower, Level::Base, Level::Base, table).expect("valid codes")
}

/// A random surjective map `F_{q^n} → F_q`: every value is placed once at a
/// random point, the rest are uniform.
pub fn random_surjection(tower: &FieldTower, rng: &mut impl Rng) -> FieldFn {
    let size = tower.size() as usize;
    let q = tower.q();
    let mut table: Vec<u32> = (0..size).map(|_| rng.gen_range(0..q)).collect();
    let mut points: Vec<usize> = (0..size).collect();
    points.shuffle(rng);
    for (v, &x) in points.iter().take(q as usize).enumerate() {
        table[x] = v as u32;
    }
    FieldFn::from_table(tower, Level::Top, Level::Base, table).expect("valid codes")
}

/// A random bijective `Σ a_i x^(p^i)` over `F_q`.
pub fn random_additive_perm(tower: &FieldTower, rng: &mut impl Rng) -> AdditivePerm {
    let k = tower.k() as usize;
    loop {
        let coeffs: Vec<u32> = (0..k).map(|_| rng.gen_range(0..tower.q())).collect();
        if let Ok(a) = AdditivePerm::new(tower, &coeffs) {
            return a;
        }
    }
}

/// Coordinates of `F_{q^n}` over `F_q` with respect to a chosen basis.
#[derive(Debug, Clone)]
pub struct CoordinateFrame {
    basis: Vec<u32>,
    coords: Vec<Vec<u32>>,
}

impl CoordinateFrame {
    /// A basis starting with `gammas`, completed greedily from `1, T, T^2, …`.
    pub fn extending(tower: &FieldTower, gammas: &[u32]) -> Result<CoordinateFrame> {
        let base = tower.base();
        let n = tower.n() as usize;
        let rank = |v: &[u32]| {
            Matrix::from_columns(&v.iter().map(|&g| tower.top().coeffs(g)).collect::<Vec<_>>()).rank(base)
        };
        if !gammas.is_empty() && rank(gammas) < gammas.len() {
            return Err(Error::DependentGammas);
        }
        let mut basis = gammas.to_vec();
        let q = tower.q();
        for j in 0..n as u32 {
            if basis.len() == n {
                break;
            }
            basis.push(q.pow(j));
            if rank(&basis) < basis.len() {
                basis.pop();
            }
        }
        Ok(CoordinateFrame::from_basis(tower, basis))
    }

    /// `basis` must be a basis of `F_{q^n}` over `F_q`.
    pub fn from_basis(tower: &FieldTower, basis: Vec<u32>) -> CoordinateFrame {
        let (top, base) = (tower.top(), tower.base());
        let p = Matrix::from_columns(&basis.iter().map(|&g| top.coeffs(g)).collect::<Vec<_>>());
        let inv = p.inverse(base).expect("basis");
        let coords = top.elements().map(|x| inv.mul_vec(base, &top.coeffs(x))).collect();
        CoordinateFrame { basis, coords }
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn coords(&self, x: u32) -> &[u32] {
        &self.coords[x as usize]
    }

    /// `f(x) = Σ_{i<m} b_i A(c_i(x)) + rest[c_m + c_{m+1} q + …]`, so basis
    /// vector `i < m` is a `(b_i, A)`-linear translator of `f`. `rest` has
    /// `q^(n-m)` entries.
    pub fn translator_fn(&self, tower: &FieldTower, bs: &[u32], a: &AdditivePerm, rest: &[u32]) -> FieldFn {
        let base = tower.base();
        let q = tower.q();
        let m = bs.len();
        debug_assert_eq!(rest.len(), (q as usize).pow((self.basis.len() - m) as u32));
        FieldFn::from_fn(tower, Level::Top, Level::Base, |x| {
            let c = self.coords(x);
            let linear = (0..m).fold(0, |acc, i| base.add(acc, base.mul(bs[i], a.apply(c[i]))));
            let idx = c[m..].iter().rev().fold(0usize, |acc, &d| acc * q as usize + d as usize);
            base.add(linear, rest[idx])
        })
    }
}

/// A uniform table on `q^free` points.
pub fn random_rest(tower: &FieldTower, free: usize, rng: &mut impl Rng) -> Vec<u32> {
    let q = tower.q();
    (0..(q as usize).pow(free as u32)).map(|_| rng.gen_range(0..q)).collect()
}

/// An `F_q`-linear `L` with `Ker L ∩ Im L = {0}` and `dim Ker L = m`, with
/// a frame whose first `m` vectors are a kernel basis.
#[derive(Debug, Clone)]
pub struct KernelSetting {
    pub l: LinearMap,
    pub frame: CoordinateFrame,
}

impl KernelSetting {
    pub fn gammas(&self, m: usize) -> &[u32] {
        &self.frame.basis()[..m]
    }
}

/// `L = P · diag(0, …, 0, D) · P^{-1}` for random invertible `P` and `D`.
pub fn random_kernel_setting(tower: &FieldTower, m: usize, rng: &mut impl Rng) -> KernelSetting {
    let (top, base) = (tower.top(), tower.base());
    let n = tower.n() as usize;
    assert!(m <= n);
    let p = random_invertible(tower, rng);
    let d = loop {
        let d = random_matrix(tower.q(), n - m, n - m, rng);
        if n == m || d.rank(base) == n - m {
            break d;
        }
    };
    let mut block = Matrix::zeros(n, n);
    for i in 0..n - m {
        for j in 0..n - m {
            block.set(m + i, m + j, d.get(i, j));
        }
    }
    let p_inv = p.inverse(base).expect("invertible");
    let l = LinearMap::from_matrix(tower, p.mul(base, &block).mul(base, &p_inv)).expect("square");
    let basis = (0..n)
        .map(|j| top.from_coeffs(&(0..n).map(|i| p.get(i, j)).collect::<Vec<_>>()))
        .collect();
    KernelSetting { l, frame: CoordinateFrame::from_basis(tower, basis) }
}

/// Nonzero `γ` with `γ + γ^q = 0` in a quadratic extension.
pub fn trace_zero_elements(tower: &FieldTower) -> Vec<u32> {
    let top = tower.top();
    (1..top.order())
        .filter(|&g| top.add(g, top.frobenius(g, tower.k())) == 0)
        .collect()
}

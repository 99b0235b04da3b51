//! Acceptance run: one line per criterion, each checked against its time
//! limit. Pass criterion numbers as arguments to run a subset.

use std::collections::{BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use lintrans::bent::{build_h, dual_from_spectrum, is_flat, parseval_holds, trace_spectrum, trace_spectrum_naive};
use lintrans::constructions::{
    cor34_check, cor35_build, cor36_check, cor38_build, thm21_build, thm31_build, thm33_build, thm37_build,
    thm39_build, Theorem, TranslatorSystem,
};
use lintrans::families::{
    all_base_maps, all_linear_perms, base_permutations, random_additive_perm, random_base_perm,
    random_invertible, random_kernel_setting, random_linear_perm, random_rest, random_surjection, seeded,
    trace_zero_elements, CoordinateFrame,
};
use lintrans::field::{Field, FieldTower, Level};
use lintrans::polyfun::{AdditivePerm, FieldFn, LinearMap, Matrix};
use lintrans::translators::{search_translators, verify_translator, Prop24Family, TranslatorCert};
use lintrans::BoolTable;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn main() {
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("field axioms, Frobenius and trace", 5, field_axioms),
        ("translator search is subspace-closed", 30, translator_search),
        ("parametric translator family", 60, frobenius_trace_family),
        ("single-translator biconditional", 60, single_translator),
        ("char-2 permutation and inverse", 60, char2_inverse),
        ("translator systems and involutions", 120, systems_and_involutions),
        ("kernel constructions", 30, kernel_constructions),
        ("rank criterion", 60, rank_criterion),
        ("bent functions and duals", 30, bent_functions),
        ("command line determinism and catalog", 300, cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let number = i + 1;
        if !only.is_empty() && !only.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_message(&e))));
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(limit);
        let (verdict, detail) = match (&result, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit}s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {number:>2} {verdict} [{:.2}s / {limit}s] {name}: {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}

// ---------------------------------------------------------------------------
// helpers computed without the library's shortcuts

/// `(p, k, n)` with `lo < p^(kn) <= hi`.
fn towers(primes: &[u32], lo: u64, hi: u64) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for &p in primes {
        for k in 1..=12 {
            for n in 1..=12 {
                let size = u64::from(p).checked_pow(k * n).unwrap_or(u64::MAX);
                if size > lo && size <= hi {
                    out.push((p, k, n));
                }
            }
        }
    }
    out
}

fn tower(p: u32, k: u32, n: u32) -> FieldTower {
    FieldTower::build(p, k, n, None, None).expect("tower builds")
}

fn pow_by_mul(f: &Field, a: u32, mut e: u64) -> u32 {
    let (mut acc, mut sq) = (1, a);
    while e > 0 {
        if e & 1 == 1 {
            acc = f.mul(acc, sq);
        }
        sq = f.mul(sq, sq);
        e >>= 1;
    }
    acc
}

/// `Σ_{i<n} x^(q^i)` by repeated powering.
fn trace_by_powers(t: &FieldTower, x: u32) -> u32 {
    let top = t.top();
    let q = u64::from(t.q());
    let (mut acc, mut y) = (0, x);
    for _ in 0..t.n() {
        acc = top.add(acc, y);
        y = pow_by_mul(top, y, q);
    }
    acc
}

fn bijective(table: &[u32]) -> bool {
    let mut seen = vec![false; table.len()];
    table.iter().all(|&y| (y as usize) < seen.len() && !std::mem::replace(&mut seen[y as usize], true))
}

fn composes_to_identity(f: &[u32], g: &[u32]) -> bool {
    (0..f.len()).all(|x| f[g[x] as usize] as usize == x && g[f[x] as usize] as usize == x)
}

fn random_frame(t: &FieldTower, rng: &mut ChaCha8Rng) -> CoordinateFrame {
    let m = random_invertible(t, rng);
    let n = t.n() as usize;
    let basis = (0..n).map(|j| t.top().from_coeffs(&(0..n).map(|i| m.get(i, j)).collect::<Vec<_>>())).collect();
    CoordinateFrame::from_basis(t, basis)
}

fn trace_fn(t: &FieldTower) -> Arc<FieldFn> {
    Arc::new(FieldFn::from_fn(t, Level::Top, Level::Base, |x| t.relative_trace(x)))
}

/// All `A(u) = c·u` for nonzero `c` when `k = 1`; otherwise identity and a
/// random additive permutation.
fn additive_choices(t: &FieldTower, rng: &mut ChaCha8Rng) -> Vec<Arc<AdditivePerm>> {
    if t.k() == 1 {
        (1..t.q()).map(|c| Arc::new(AdditivePerm::new(t, &[c]).expect("nonzero scalar"))).collect()
    } else {
        vec![Arc::new(AdditivePerm::identity(t)), Arc::new(random_additive_perm(t, rng))]
    }
}

/// Translator function on a random frame with random constants on the first
/// `d` coordinates.
fn frame_fn(t: &FieldTower, a: &AdditivePerm, rng: &mut ChaCha8Rng) -> Arc<FieldFn> {
    let n = t.n() as usize;
    let d = rng.gen_range(1..=n);
    let frame = random_frame(t, rng);
    let bs: Vec<u32> = (0..d).map(|_| rng.gen_range(0..t.q())).collect();
    Arc::new(frame.translator_fn(t, &bs, a, &random_rest(t, n - d, rng)))
}

/// Rank by elimination from the last column backwards, pivots taken from the
/// bottom row upwards.
fn rank_reverse(f: &Field, m: &Matrix) -> usize {
    let mut rows = m.to_rows();
    let (r, c) = (m.rows(), m.cols());
    let mut used = vec![false; r];
    let mut rank = 0;
    for col in (0..c).rev() {
        let Some(piv) = (0..r).rev().find(|&i| !used[i] && rows[i][col] != 0) else {
            continue;
        };
        used[piv] = true;
        rank += 1;
        let inv = f.inv(rows[piv][col]).expect("nonzero pivot");
        for i in 0..r {
            if i != piv && rows[i][col] != 0 {
                let factor = f.mul(rows[i][col], inv);
                for j in 0..c {
                    let v = f.mul(factor, rows[piv][j]);
                    rows[i][j] = f.sub(rows[i][j], v);
                }
            }
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// 1

fn field_axioms() -> Outcome {
    let mut checked = 0;
    for (p, k, n) in towers(&[2, 3, 5], 1, 64) {
        let t = tower(p, k, n);
        check_tower(&t, None)?;
        checked += 1;
    }
    let mut rng = seeded(1);
    let mut sampled = 0;
    for (p, k, n) in towers(&[2, 3, 5], 64, 1024) {
        let t = tower(p, k, n);
        check_tower(&t, Some(&mut rng))?;
        sampled += 1;
    }
    Ok(format!("{checked} towers exhaustive, {sampled} towers sampled 10^4 times"))
}

fn check_tower(t: &FieldTower, rng: Option<&mut ChaCha8Rng>) -> Result<(), String> {
    let (top, base) = (t.top(), t.base());
    let size = top.order();
    let q = t.q();
    let d = t.describe();
    let triples: Vec<(u32, u32, u32)> = match rng {
        None => (0..size)
            .flat_map(|a| (0..size).flat_map(move |b| (0..size).map(move |c| (a, b, c))))
            .collect(),
        Some(rng) => (0..10_000)
            .map(|_| (rng.gen_range(0..size), rng.gen_range(0..size), rng.gen_range(0..size)))
            .collect(),
    };
    for &(a, b, c) in &triples {
        ensure!(top.add(a, b) == top.add(b, a) && top.mul(a, b) == top.mul(b, a), "{d}: commutativity at {a},{b}");
        ensure!(top.add(top.add(a, b), c) == top.add(a, top.add(b, c)), "{d}: additive associativity");
        ensure!(top.mul(top.mul(a, b), c) == top.mul(a, top.mul(b, c)), "{d}: multiplicative associativity");
        ensure!(
            top.mul(a, top.add(b, c)) == top.add(top.mul(a, b), top.mul(a, c)),
            "{d}: distributivity at {a},{b},{c}"
        );
        ensure!(top.sub(top.add(a, b), b) == a && top.add(a, top.neg(a)) == 0, "{d}: additive inverse at {a}");
        ensure!(top.add(a, 0) == a && top.mul(a, 1) == a && top.mul(a, 0) == 0, "{d}: identities at {a}");
        if a != 0 {
            ensure!(top.mul(a, top.inv(a).unwrap()) == 1, "{d}: inverse of {a}");
        }
        let fa = top.frobenius(a, 1);
        ensure!(fa == pow_by_mul(top, a, u64::from(t.p())), "{d}: Frobenius of {a}");
        ensure!(top.frobenius(top.add(a, b), 1) == top.add(fa, top.frobenius(b, 1)), "{d}: Frobenius additivity");
        ensure!(top.frobenius(top.mul(a, b), 1) == top.mul(fa, top.frobenius(b, 1)), "{d}: Frobenius multiplicativity");
        ensure!(top.frobenius(a, t.k() * t.n()) == a, "{d}: Frobenius order at {a}");
        ensure!(pow_by_mul(top, a, u64::from(size)) == a, "{d}: a^|F| = a at {a}");
        let tr = trace_by_powers(t, a);
        ensure!(tr < q && tr == t.relative_trace(a), "{d}: relative trace of {a}");
        let abs = (0..t.k()).fold(0, |acc, j| top.add(acc, top.frobenius(tr, j)));
        ensure!(abs == t.absolute_trace(a) && abs < t.p(), "{d}: trace transitivity at {a}");
        let cb = b % q;
        let lin = top.add(top.mul(cb, a), c);
        ensure!(
            t.relative_trace(lin) == base.add(base.mul(cb, tr), t.relative_trace(c)),
            "{d}: trace F_q-linearity"
        );
        let (ab, bb) = (a % q, b % q);
        ensure!(base.add(ab, bb) == top.add(ab, bb) && base.mul(ab, bb) == top.mul(ab, bb), "{d}: base embedding");
    }
    for x in 0..size {
        let fixed = pow_by_mul(top, x, u64::from(q)) == x;
        ensure!(fixed == (x < q), "{d}: x^q = x exactly on the base field, fails at {x}");
    }
    let image: BTreeSet<u32> = (0..size).map(|x| t.relative_trace(x)).collect();
    ensure!(image.len() == q as usize, "{d}: relative trace is not onto F_q");
    let g = top.generator();
    let order = u64::from(size - 1);
    let prime_factors = (2..=order).filter(|&r| order % r == 0 && (2..r).all(|s| r % s != 0));
    for r in prime_factors {
        ensure!(pow_by_mul(top, g, order / r) != 1, "{d}: generator {g} has order dividing {}", order / r);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// 2

fn translator_search() -> Outcome {
    let mut rng = seeded(2);
    let mut searches = 0;
    let mut nontrivial = 0;
    for (p, k, n) in towers(&[2, 3, 5, 7], 1, 256) {
        let t = tower(p, k, n);
        let id = Arc::new(AdditivePerm::identity(&t));
        let mut cases: Vec<(Arc<FieldFn>, Arc<AdditivePerm>)> = vec![
            (trace_fn(&t), id.clone()),
            (Arc::new(FieldFn::from_fn(&t, Level::Top, Level::Base, |x| t.absolute_trace(x))), id.clone()),
        ];
        for s in 1..k {
            let fam = Prop24Family::new(&t, s).map_err(|e| e.to_string())?;
            if let Some(alpha) = (1..t.q()).find(|&a| !fam.alpha_is_power(a)) {
                for _ in 0..3 {
                    let gamma = rng.gen_range(1..t.size());
                    let inst = fam.build(alpha, gamma).map_err(|e| format!("{}: {e}", t.describe()))?;
                    cases.push((inst.f, inst.a));
                }
            }
        }
        for _ in 0..50 {
            cases.push((Arc::new(random_surjection(&t, &mut rng)), Arc::new(random_additive_perm(&t, &mut rng))));
        }
        for _ in 0..5 {
            let a = Arc::new(random_additive_perm(&t, &mut rng));
            cases.push((frame_fn(&t, &a, &mut rng), a));
        }
        for (f, a) in &cases {
            let report = search_translators(&t, f, a).map_err(|e| e.to_string())?;
            searches += 1;
            let d = t.describe();
            ensure!(report.subspace_closed && report.b_additive, "{d}: search output not closed");
            for c in &report.certs {
                ensure!(c.is_verified() && c.reverify(&t).unwrap(), "{d}: cert for {} does not re-verify", c.gamma);
            }
            let mut lookup: HashMap<u32, u32> = report.pairs.iter().copied().collect();
            lookup.insert(0, 0);
            let (top, base) = (t.top(), t.base());
            for (&g1, &b1) in &lookup {
                for (&g2, &b2) in &lookup {
                    ensure!(
                        lookup.get(&top.add(g1, g2)) == Some(&base.add(b1, b2)),
                        "{d}: {g1} + {g2} breaks closure"
                    );
                }
                for c in 1..t.p() {
                    ensure!(lookup.get(&top.mul(c, g1)) == Some(&base.mul(c, b1)), "{d}: {c}*{g1} breaks closure");
                }
            }
            if !report.certs.is_empty() {
                let picks: Vec<(&TranslatorCert, u32)> = (0..3)
                    .map(|_| (&report.certs[rng.gen_range(0..report.certs.len())], rng.gen_range(0..t.q())))
                    .collect();
                let shift = picks.iter().fold(0, |acc, (c, u)| top.add(acc, top.mul(*u, c.gamma)));
                let rhs = picks.iter().fold(0, |acc, (c, u)| base.add(acc, base.mul(c.b, a.apply(*u))));
                for x in top.elements() {
                    ensure!(
                        base.sub(f.apply(top.add(x, shift)), f.apply(x)) == rhs,
                        "{d}: combined shift identity fails at {x}"
                    );
                }
            }
            if t.size() <= 64 {
                let brute = brute_translators(&t, f, a);
                ensure!(brute == report.pairs, "{d}: search {:?} differs from definition {:?}", report.pairs, brute);
            }
            nontrivial += usize::from(!report.pairs.is_empty());
        }
    }
    Ok(format!("{searches} searches, {nontrivial} with translators"))
}

/// Every `(γ, b)` with `f(x + uγ) - f(x) = b·A(u)` for all `x, u`, by definition.
fn brute_translators(t: &FieldTower, f: &FieldFn, a: &AdditivePerm) -> Vec<(u32, u32)> {
    let (top, base) = (t.top(), t.base());
    let mut out = Vec::new();
    for gamma in 1..top.order() {
        for b in 0..t.q() {
            let ok = (0..top.order()).all(|x| {
                (0..t.q()).all(|u| {
                    let lhs = base.sub(f.apply(top.add(x, top.mul(u, gamma))), f.apply(x));
                    lhs == base.mul(b, a.apply(u))
                })
            });
            if ok {
                out.push((gamma, b));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// 3

fn primes_upto(n: u32) -> Vec<u32> {
    (2..=n).filter(|&p| (2..p).all(|d| p % d != 0)).collect()
}

fn frobenius_trace_family() -> Outcome {
    let mut rng = seeded(3);
    let mut accepted = 0u64;
    let mut rejected = 0u64;
    for (p, k, n) in towers(&primes_upto(27), 1, 729) {
        if k < 2 {
            continue;
        }
        let t = tower(p, k, n);
        let (top, base) = (t.top(), t.base());
        let d = t.describe();
        let trace: Vec<u32> = top.elements().map(|x| trace_by_powers(&t, x)).collect();
        for s in 1..k {
            let ps = u64::from(p).pow(s);
            let fam = Prop24Family::new(&t, s).map_err(|e| e.to_string())?;
            let powers: BTreeSet<u32> = base.elements().map(|beta| pow_by_mul(base, beta, ps - 1)).collect();
            for alpha in 1..t.q() {
                ensure!(fam.alpha_is_power(alpha) == powers.contains(&alpha), "{d}: power test wrong for {alpha}");
                if powers.contains(&alpha) {
                    ensure!(fam.build(alpha, 1).is_err(), "{d}: power alpha {alpha} accepted");
                    rejected += 1;
                    continue;
                }
                let a_table: Vec<u32> =
                    base.elements().map(|u| base.sub(pow_by_mul(base, u, ps), base.mul(alpha, u))).collect();
                ensure!(bijective(&a_table), "{d}: A not bijective for s={s}, alpha={alpha}");
                for gamma in 1..top.order() {
                    let inst = fam.build(alpha, gamma).map_err(|e| format!("{d}: s={s} alpha={alpha} gamma={gamma}: {e}"))?;
                    let want_b = trace[pow_by_mul(top, gamma, ps) as usize];
                    ensure!(inst.cert.is_verified() && inst.cert.b == want_b, "{d}: b mismatch at gamma {gamma}");
                    ensure!(inst.a.table() == a_table.as_slice(), "{d}: A table differs");
                    let c = top.mul(alpha, pow_by_mul(top, gamma, ps - 1));
                    let f = |x: u32| base.sub(trace[pow_by_mul(top, x, ps) as usize], trace[top.mul(c, x) as usize]);
                    for _ in 0..4 {
                        let (x, u) = (rng.gen_range(0..top.order()), rng.gen_range(0..t.q()));
                        ensure!(inst.f.apply(x) == f(x), "{d}: f differs at {x}");
                        let lhs = base.sub(f(top.add(x, top.mul(u, gamma))), f(x));
                        ensure!(lhs == base.mul(want_b, a_table[u as usize]), "{d}: relation fails at x={x}, u={u}");
                    }
                    accepted += 1;
                }
            }
        }
    }
    ensure!(accepted > 0, "no accepted instance");
    Ok(format!("{accepted} certified instances, {rejected} power alphas rejected"))
}

// ---------------------------------------------------------------------------
// 4

fn single_translator() -> Outcome {
    let mut rng = seeded(4);
    let (mut builds, mut positives) = (0u64, 0u64);
    for (p, k, n) in towers(&[2, 3], 1, 256) {
        if k != 1 {
            continue;
        }
        let t = tower(p, k, n);
        let (top, base) = (t.top(), t.base());
        let d = t.describe();
        let hs = all_base_maps(&t, 27).map_err(|e| e.to_string())?;
        let l = random_linear_perm(&t, &mut rng);
        for a in additive_choices(&t, &mut rng) {
            let fs = [trace_fn(&t), frame_fn(&t, &a, &mut rng), frame_fn(&t, &a, &mut rng)];
            for f in &fs {
                let report = search_translators(&t, f, &a).map_err(|e| e.to_string())?;
                for cert in &report.certs {
                    let lg = l.apply(cert.gamma);
                    for h in &hs {
                        let r = thm21_build(&t, &l, cert, h).map_err(|e| e.to_string())?;
                        let g: Vec<u32> =
                            base.elements().map(|x| base.add(x, base.mul(cert.b, h.apply(x)))).collect();
                        let expected: Vec<u32> = top
                            .elements()
                            .map(|x| top.add(l.apply(x), top.mul(lg, a.apply_inverse(h.apply(f.apply(x))))))
                            .collect();
                        ensure!(r.built.table() == expected.as_slice(), "{d}: built table differs");
                        let oracle = bijective(&expected);
                        ensure!(r.oracle_permutation == oracle, "{d}: library oracle disagrees");
                        ensure!(
                            r.predicted_permutation == bijective(&g) && r.predicted_permutation == oracle,
                            "{d}: gamma={} b={} h={:?}: predicted {} oracle {oracle}",
                            cert.gamma,
                            cert.b,
                            h.table(),
                            r.predicted_permutation
                        );
                        builds += 1;
                        positives += u64::from(oracle);
                    }
                }
            }
        }
    }
    ensure!(positives > 0 && positives < builds, "one-sided sample");
    Ok(format!("{builds} instances agree ({positives} permutations)"))
}

// ---------------------------------------------------------------------------
// 5

fn char2_inverse() -> Outcome {
    let mut rng = seeded(5);
    let mut builds = 0u64;
    for (p, k, n) in towers(&[2], 1, 256) {
        let t = tower(p, k, n);
        let d = t.describe();
        let id = Arc::new(AdditivePerm::identity(&t));
        let mut cases = vec![(trace_fn(&t), id)];
        for _ in 0..2 {
            let a = Arc::new(random_additive_perm(&t, &mut rng));
            cases.push((frame_fn(&t, &a, &mut rng), a));
        }
        for (f, a) in &cases {
            let report = search_translators(&t, f, a).map_err(|e| e.to_string())?;
            for cert in report.certs.iter().filter(|c| c.b != 0) {
                for _ in 0..2 {
                    let l = random_linear_perm(&t, &mut rng);
                    let g = random_base_perm(&t, &mut rng);
                    let r = thm31_build(&t, &l, cert, &g).map_err(|e| e.to_string())?;
                    let inv = r.predicted_inverse.as_ref().ok_or("no inverse built")?;
                    ensure!(r.predicted_permutation, "{d}: not predicted");
                    ensure!(bijective(r.built.table()), "{d}: gamma={} b={}: not a permutation", cert.gamma, cert.b);
                    ensure!(
                        composes_to_identity(r.built.table(), inv.table()) && r.oracle_inverse_ok == Some(true),
                        "{d}: gamma={} b={}: inverse formula fails",
                        cert.gamma,
                        cert.b
                    );
                    builds += 1;
                }
            }
        }
    }
    Ok(format!("{builds} instances, all permutations with sound inverses"))
}

// ---------------------------------------------------------------------------
// 6

struct Diagonal {
    frame: CoordinateFrame,
    fs: Vec<Arc<FieldFn>>,
    a: Vec<Arc<AdditivePerm>>,
}

/// `f_j = b_j A_j(c_j) + rest_j(c_m, ...)`; with `symmetric`, each rest is
/// invariant under swapping its first two free coordinates.
fn diagonal_fns(t: &FieldTower, bs: &[u32], symmetric: bool, rng: &mut ChaCha8Rng) -> Diagonal {
    let frame = random_frame(t, rng);
    let m = bs.len();
    let free = t.n() as usize - m;
    let q = t.q() as usize;
    let mut fs = Vec::new();
    let mut a = Vec::new();
    for j in 0..m {
        let aj = Arc::new(random_additive_perm(t, rng));
        let mut row = vec![0; m];
        row[j] = bs[j];
        let mut rest = random_rest(t, free, rng);
        if symmetric && free >= 2 {
            for idx in 0..rest.len() {
                let (c0, c1) = (idx % q, (idx / q) % q);
                let swapped = idx - c0 - c1 * q + c1 + c0 * q;
                rest[idx] = rest[idx.min(swapped)];
            }
        }
        fs.push(Arc::new(frame.translator_fn(t, &row, &aj, &rest)));
        a.push(aj);
    }
    Diagonal { frame, fs, a }
}

fn product<T: Clone>(items: &[T], m: usize) -> Vec<Vec<T>> {
    (0..m).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |it| {
                    let mut v = prefix.clone();
                    v.push(it.clone());
                    v
                })
            })
            .collect()
    })
}

fn systems_and_involutions() -> Outcome {
    let mut rng = seeded(6);
    let (mut builds, mut positives, mut involutions) = (0u64, 0u64, 0u64);
    for (p, k, n) in towers(&[2, 3], 1, 256) {
        if k != 1 {
            continue;
        }
        let t = tower(p, k, n);
        let (top, base) = (t.top(), t.base());
        let d = t.describe();
        let maps = all_base_maps(&t, 27).map_err(|e| e.to_string())?;
        let values: Vec<u32> = base.elements().collect();
        for m in 1..=(n as usize).min(2) {
            for bs in product(&values, m) {
                let diag = diagonal_fns(&t, &bs, false, &mut rng);
                let l = random_linear_perm(&t, &mut rng);
                for hs in product(&maps, m) {
                    let sys = TranslatorSystem::diagonal(
                        &t,
                        diag.frame.basis()[..m].to_vec(),
                        diag.fs.clone(),
                        hs.clone(),
                        diag.a.clone(),
                        &bs,
                    )
                    .map_err(|e| e.to_string())?;
                    let predicted = (0..m).all(|i| {
                        let g: Vec<u32> = base
                            .elements()
                            .map(|x| base.add(x, base.mul(bs[i], diag.a[i].apply(hs[i].apply(x)))))
                            .collect();
                        bijective(&g)
                    });
                    for r in [
                        thm33_build(&t, &sys).map_err(|e| e.to_string())?,
                        cor35_build(&t, &l, &sys).map_err(|e| e.to_string())?,
                    ] {
                        let oracle = bijective(r.built.table());
                        ensure!(
                            r.predicted_permutation == predicted && oracle == predicted,
                            "{d}: {} bs={bs:?}: predicted {} oracle {oracle}",
                            r.theorem,
                            r.predicted_permutation
                        );
                        if predicted {
                            let inv = r.predicted_inverse.as_ref().ok_or("no inverse built")?;
                            ensure!(composes_to_identity(r.built.table(), inv.table()), "{d}: {} inverse fails", r.theorem);
                        }
                        if let Some(ok) = r.cross_check("G equals L after F") {
                            ensure!(ok, "{d}: G is not L after F");
                        }
                        builds += 1;
                        positives += u64::from(predicted);
                    }
                }
            }
            if p == 2 {
                let zeros = vec![0; m];
                for hs in product(&maps, m) {
                    let diag = diagonal_fns(&t, &zeros, true, &mut rng);
                    let gammas = diag.frame.basis()[..m].to_vec();
                    let sys =
                        TranslatorSystem::diagonal(&t, gammas.clone(), diag.fs.clone(), hs, diag.a.clone(), &zeros)
                            .map_err(|e| e.to_string())?;
                    let r = cor34_check(&t, &sys).map_err(|e| e.to_string())?;
                    let inv = r.built.comp_inverse(&t).map_err(|e| e.to_string())?;
                    ensure!(r.involution == Some(true) && inv.table() == r.built.table(), "{d}: F is not an involution");
                    let swap = frame_swap(&t, &diag.frame, m);
                    for l in [LinearMap::identity(&t), swap] {
                        let rep = cor36_check(&t, &l, &sys).map_err(|e| e.to_string())?;
                        let g = &rep.result.built;
                        let inv = g.comp_inverse(&t).map_err(|e| e.to_string())?;
                        ensure!(rep.g_involution && inv.table() == g.table(), "{d}: G is not an involution");
                        ensure!(
                            rep.l_fixes_gammas == gammas.iter().all(|&x| l.apply(x) == x),
                            "{d}: fixing report wrong"
                        );
                        let expected: Vec<u32> = top.elements().map(|x| l.apply(r.built.apply(x))).collect();
                        ensure!(g.table() == expected.as_slice(), "{d}: G differs from L after F");
                        involutions += 1;
                    }
                }
            }
        }
    }
    ensure!(positives > 0 && positives < builds, "one-sided sample");
    Ok(format!("{builds} builds agree ({positives} permutations), {involutions} involutions checked"))
}

/// Swap of the first two free frame coordinates, or the identity when there
/// are fewer than two.
fn frame_swap(t: &FieldTower, frame: &CoordinateFrame, m: usize) -> LinearMap {
    let n = t.n() as usize;
    if n - m < 2 {
        return LinearMap::identity(t);
    }
    let top = t.top();
    let basis = frame.basis();
    let table = top
        .elements()
        .map(|x| {
            let mut c = frame.coords(x).to_vec();
            c.swap(m, m + 1);
            c.iter().zip(basis).fold(0, |acc, (&ci, &e)| top.add(acc, top.mul(ci, e)))
        })
        .collect();
    LinearMap::from_table(t, FieldFn::from_table(t, Level::Top, Level::Top, table).unwrap()).unwrap()
}

// ---------------------------------------------------------------------------
// 7

fn kernel_constructions() -> Outcome {
    let mut rng = seeded(7);
    let (mut cor38, mut thm37) = (0u64, 0u64);
    for (p, m) in [(3, 1), (3, 2), (5, 1), (5, 2)] {
        let t = tower(p, m, 2);
        let d = t.describe();
        let hs: Vec<FieldFn> = match base_permutations(&t, 120) {
            Ok(all) => all,
            Err(_) => (0..4).map(|_| random_base_perm(&t, &mut rng)).collect(),
        };
        let top = t.top();
        for gamma in trace_zero_elements(&t) {
            ensure!(top.add(gamma, pow_by_mul(top, gamma, u64::from(t.q()))) == 0, "{d}: {gamma} has nonzero trace");
            let frame = CoordinateFrame::extending(&t, &[gamma]).map_err(|e| e.to_string())?;
            for b in 1..t.q() {
                for a in [Arc::new(AdditivePerm::identity(&t)), Arc::new(random_additive_perm(&t, &mut rng))] {
                    let f = Arc::new(frame.translator_fn(&t, &[b], &a, &random_rest(&t, 1, &mut rng)));
                    let cert = verify_translator(&t, &f, gamma, b, &a)
                        .map_err(|e| e.to_string())?
                        .cert()
                        .ok_or("frame translator refuted")?;
                    for h in &hs {
                        let r = cor38_build(&t, &cert, h).map_err(|e| e.to_string())?;
                        ensure!(
                            r.predicted_permutation && bijective(r.built.table()),
                            "{d}: gamma={gamma} b={b}: not a permutation"
                        );
                        cor38 += 1;
                    }
                }
            }
        }
        for dim in 0..=2usize {
            for _ in 0..20 {
                let ks = random_kernel_setting(&t, dim, &mut rng);
                let bs: Vec<u32> = (0..dim).map(|_| rng.gen_range(1..t.q())).collect();
                let mut fs = Vec::new();
                let mut a_list = Vec::new();
                for j in 0..dim {
                    let a = Arc::new(random_additive_perm(&t, &mut rng));
                    let mut row = vec![0; dim];
                    row[j] = bs[j];
                    fs.push(Arc::new(ks.frame.translator_fn(&t, &row, &a, &random_rest(&t, 2 - dim, &mut rng))));
                    a_list.push(a);
                }
                let hs = (0..dim).map(|_| random_base_perm(&t, &mut rng)).collect();
                let sys = TranslatorSystem::diagonal(&t, ks.gammas(dim).to_vec(), fs, hs, a_list, &bs)
                    .map_err(|e| e.to_string())?;
                let r = thm37_build(&t, &ks.l, &sys).map_err(|e| e.to_string())?;
                ensure!(r.predicted_permutation && bijective(r.built.table()), "{d}: kernel dim {dim} fails");
                thm37 += 1;
            }
        }
    }
    // F_9: F(x) = x + x^3 + t h(Tr(t x)) with t + t^3 = 0.
    let t = tower(3, 1, 2);
    let top = t.top();
    let gamma = 3;
    ensure!(top.add(gamma, pow_by_mul(top, gamma, 3)) == 0, "t + t^3 != 0");
    let f = Arc::new(FieldFn::from_fn(&t, Level::Top, Level::Base, |x| trace_by_powers(&t, top.mul(gamma, x))));
    let id = Arc::new(AdditivePerm::identity(&t));
    let b = trace_by_powers(&t, top.mul(gamma, gamma));
    ensure!(b == 1, "Tr(t^2) = {b}");
    let cert = verify_translator(&t, &f, gamma, b, &id).map_err(|e| e.to_string())?.cert().ok_or("t refuted")?;
    let perms = base_permutations(&t, 6).map_err(|e| e.to_string())?;
    ensure!(perms.len() == 6, "expected 6 permutations of F_3");
    for h in &perms {
        let r = cor38_build(&t, &cert, h).map_err(|e| e.to_string())?;
        let expected: Vec<u32> = top
            .elements()
            .map(|x| {
                let v = h.apply(f.apply(x));
                top.add(top.add(x, pow_by_mul(top, x, 3)), top.mul(gamma, v))
            })
            .collect();
        ensure!(r.built.table() == expected.as_slice(), "worked instance table differs for h={:?}", h.table());
        ensure!(r.predicted_permutation && bijective(&expected), "worked instance fails for h={:?}", h.table());
    }
    Ok(format!("{cor38} odd-characteristic instances, {thm37} kernel instances, F_9 worked instance for 6 h"))
}

// ---------------------------------------------------------------------------
// 8

fn rank_criterion() -> Outcome {
    let mut rng = seeded(8);
    let mut builds = 0u64;
    let mut full = 0u64;
    for (p, k, basis, sample_h) in [(3, 1, [1, 3], false), (2, 1, [1, 2], false), (3, 2, [1, 9], true)] {
        let t = tower(p, k, 2);
        let base = t.base();
        let d = t.describe();
        let frame = CoordinateFrame::from_basis(&t, basis.to_vec());
        let zero = LinearMap::zero(&t);
        let perms = base_permutations(&t, 24).unwrap_or_else(|_| (0..2).map(|_| random_base_perm(&t, &mut rng)).collect());
        let h_pairs: Vec<Vec<FieldFn>> = if sample_h {
            vec![vec![random_base_perm(&t, &mut rng), random_base_perm(&t, &mut rng)]]
        } else {
            product(&perms, 2)
        };
        let values: Vec<u32> = base.elements().collect();
        for tt in 0..=k {
            let a = Arc::new(AdditivePerm::frobenius(&t, tt).map_err(|e| e.to_string())?);
            for entries in product(&values, 4) {
                let b = vec![vec![entries[0], entries[1]], vec![entries[2], entries[3]]];
                let fs: Vec<Arc<FieldFn>> = (0..2)
                    .map(|j| Arc::new(frame.translator_fn(&t, &[b[0][j], b[1][j]], &a, &[0])))
                    .collect();
                let e = (k - tt) % k;
                let twisted = Matrix::from_rows(b.iter().map(|r| r.iter().map(|&v| base.frobenius(v, e)).collect()).collect());
                let rank = rank_reverse(base, &twisted);
                for hs in &h_pairs {
                    let sys = TranslatorSystem::new(&t, basis.to_vec(), fs.clone(), hs.clone(), vec![a.clone(); 2], b.clone())
                        .map_err(|e| e.to_string())?;
                    let r = thm39_build(&t, &zero, &sys, tt).map_err(|e| e.to_string())?;
                    let oracle = bijective(r.built.table());
                    ensure!(r.rank == Some(rank), "{d}: rank {:?} vs {rank} for {b:?}", r.rank);
                    ensure!(
                        (rank == 2) == oracle && r.predicted_permutation == oracle,
                        "{d}: t={tt} B={b:?}: rank {rank}, oracle {oracle}"
                    );
                    builds += 1;
                    full += u64::from(oracle);
                }
            }
        }
    }
    let fields: Vec<FieldTower> = [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)].iter().map(|&(p, k)| tower(p, k, 1)).collect();
    for i in 0..1000 {
        let f = fields[i % fields.len()].base();
        let (r, c, inner) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let rand_m = |rows: usize, cols: usize, rng: &mut ChaCha8Rng| {
            Matrix::from_rows((0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..f.order())).collect()).collect())
        };
        let m = rand_m(r, inner, &mut rng).mul(f, &rand_m(inner, c, &mut rng));
        ensure!(m.rank(f) == rank_reverse(f, &m), "rank disagreement on {:?}", m.to_rows());
    }
    ensure!(full > 0 && full < builds, "one-sided sample");
    Ok(format!("{builds} systems agree ({full} full rank), 1000 matrices cross-checked"))
}

// ---------------------------------------------------------------------------
// 9

fn bent_functions() -> Outcome {
    let t = tower(2, 1, 3);
    let top = t.top();
    let n = t.n();
    let id = Arc::new(AdditivePerm::identity(&t));
    let ls = all_linear_perms(&t, 512).map_err(|e| e.to_string())?;
    ensure!(ls.len() == 168, "expected 168 linear permutations, got {}", ls.len());
    let gs = base_permutations(&t, 2).map_err(|e| e.to_string())?;
    let mut triples: Vec<[TranslatorCert; 3]> = Vec::new();
    for code in 0..256u32 {
        let f = Arc::new(FieldFn::from_fn(&t, Level::Top, Level::Base, |x| (code >> x) & 1));
        let report = search_translators(&t, &f, &id).map_err(|e| e.to_string())?;
        let certs: Vec<&TranslatorCert> = report.certs.iter().filter(|c| c.b != 0).collect();
        for i in 0..certs.len() {
            for j in i + 1..certs.len() {
                for l in j + 1..certs.len() {
                    let s = top.add(top.add(certs[i].gamma, certs[j].gamma), certs[l].gamma);
                    if s != 0 {
                        triples.push([certs[i].clone(), certs[j].clone(), certs[l].clone()]);
                    }
                }
            }
        }
    }
    ensure!(!triples.is_empty(), "no valid triple on F_8");
    let expected_abs = 1i64 << n;
    let mut slowest = Duration::ZERO;
    let mut instances = 0u64;
    for certs in &triples {
        for l in &ls {
            for g in &gs {
                let start = Instant::now();
                let mut inst = build_h(&t, l, certs, g).map_err(|e| e.to_string())?;
                let w = inst.compute_spectrum(&t).map_err(|e| e.to_string())?.to_vec();
                let v = inst.is_bent().map_err(|e| e.to_string())?;
                ensure!(w.len() == 1 << (2 * n), "spectrum has {} entries", w.len());
                ensure!(w.iter().all(|x| x.abs() == expected_abs), "gammas {:?}: spectrum not flat", inst.gammas);
                ensure!(w.iter().map(|x| x * x).sum::<i64>() == 1 << (4 * n), "Parseval fails");
                ensure!(parseval_holds(&w) && v.bent && v.dual_matches, "gammas {:?}: dual mismatch", inst.gammas);
                if instances < 20 {
                    ensure!(trace_spectrum_naive(&t, &inst.h) == w, "fast and direct spectra differ");
                }
                slowest = slowest.max(start.elapsed());
                instances += 1;
            }
        }
    }

    // F_4 over F_2 has no valid triple; check the inner-product part alone.
    let t4 = tower(2, 1, 2);
    let id4 = Arc::new(AdditivePerm::identity(&t4));
    for code in 0..16u32 {
        let f = Arc::new(FieldFn::from_fn(&t4, Level::Top, Level::Base, |x| (code >> x) & 1));
        let report = search_translators(&t4, &f, &id4).map_err(|e| e.to_string())?;
        let gs: Vec<u32> = report.certs.iter().filter(|c| c.b != 0).map(|c| c.gamma).collect();
        ensure!(gs.len() < 3, "unexpected valid triple on F_4");
    }
    let top4 = t4.top();
    let mut degenerate = 0;
    for l in all_linear_perms(&t4, 16).map_err(|e| e.to_string())? {
        let l_inv = l.inverse(&t4).ok_or("L not invertible")?;
        let h = BoolTable::from_pairs(&t4, |x, y| t4.absolute_trace(top4.mul(x, l.apply(y))) == 1);
        let dual = BoolTable::from_pairs(&t4, |x, y| t4.absolute_trace(top4.mul(y, l_inv.apply(x))) == 1);
        let w = trace_spectrum(&t4, &h).map_err(|e| e.to_string())?;
        ensure!(is_flat(&w) && parseval_holds(&w), "F_4 inner product not bent");
        ensure!(dual_from_spectrum(&w) == Some(dual), "F_4 dual mismatch");
        degenerate += 1;
    }
    ensure!(slowest <= Duration::from_secs(30), "slowest instance {slowest:?}");
    Ok(format!(
        "{} triples x {} L x {} g = {instances} bent instances (slowest {:.2?}), {degenerate} F_4 degenerate cases",
        triples.len(),
        ls.len(),
        gs.len(),
        slowest
    ))
}

// ---------------------------------------------------------------------------
// 10

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_lintrans")).args(args).output().expect("binary runs");
    (out.status.code(), out.stdout)
}

fn cli_determinism() -> Outcome {
    let jobs: Vec<Vec<&str>> = vec![
        vec!["fields", "--field", "p=3,k=2,n=2", "--elements"],
        vec!["translators", "--field", "p=2,k=2,n=3", "--f", "trace", "--A", "mono:2"],
        vec!["construct", "--field", "p=2,k=1,n=2", "--theorem", "thm33", "--f", "trace", "--h", "const:1", "--gamma", "2"],
        vec!["construct", "--field", "p=3,k=1,n=2", "--theorem", "cor38", "--f", "table:[0,0,0,1,1,1,2,2,2]", "--h", "identity", "--gamma", "3", "--poly"],
        vec!["bent", "--field", "p=2,k=1,n=3", "--f", "trace", "--b", "1", "--gamma", "1", "--gamma", "3", "--gamma", "5"],
        vec!["catalog", "--cap", "64", "--seed", "9", "--format", "json"],
    ];
    for job in &jobs {
        let (c1, o1) = run_cli(job);
        let (c2, o2) = run_cli(job);
        ensure!(c1 == Some(0) && c2 == Some(0), "{job:?} exited {c1:?}");
        ensure!(o1 == o2, "{job:?} output differs between runs");
    }
    let sweep = ["catalog", "--cap", "256", "--seed", "2024"];
    let (code, first) = run_cli(&sweep);
    let (_, second) = run_cli(&sweep);
    ensure!(first == second, "catalog output differs between runs");
    ensure!(code == Some(0), "catalog exited {code:?}");
    let text = String::from_utf8(first).map_err(|e| e.to_string())?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = 0;
    let mut seen = BTreeSet::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        ensure!(&rec[5] == "true" && rec[3] == rec[4], "disagreement: {rec:?}");
        seen.insert(rec[1].to_string());
        rows += 1;
    }
    let all: BTreeSet<String> = Theorem::ALL.iter().map(|t| t.name().to_string()).collect();
    ensure!(seen == all, "theorems covered: {seen:?}");
    Ok(format!("{} jobs byte-identical, catalog cap 256: {rows} rows all agree", jobs.len() + 1))
}

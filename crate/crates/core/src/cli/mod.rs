//! The `lintrans` command line: field setup, translator search and
//! verification, construction checks, bent analysis and catalog sweeps.
//!
//! Exit codes: 0 on success or agreement, 1 on invalid input or a violated
//! hypothesis (a JSON error object is printed), 2 when a query is cleanly
//! refuted.

pub mod report;
pub mod specs;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bent::{build_h, parseval_holds, write_spectrum_csv};
use crate::catalog::{default_towers, run_catalog, write_catalog_csv, CatalogConfig};
use crate::constructions::{
    cor34_check, cor35_build, cor36_check, cor38_build, thm21_build, thm31_build, thm33_build, thm37_build,
    thm39_build, ConstructionResult, Theorem, TranslatorSystem,
};
use crate::error::{Error, Result};
use crate::field::{FieldTower, Level};
use crate::polyfun::{AdditivePerm, FieldFn, LinearMap};
use crate::translators::{search_translators, verify_translator, TranslatorCert, Verdict};

use report::*;
use specs::{check_code, parse_additive, parse_int_list, parse_linear, parse_map, FieldSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "lintrans", version, about = "Permutation polynomials from (b, A)-linear translators")]
pub struct JobConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Tower spec `p=<int>,k=<int>,n=<int>[,modq=[..]][,modqn=[..]]`.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe a tower and optionally list its elements.
    Fields {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        elements: bool,
    },
    /// Search all translators of f for a fixed A, or verify one (γ, b).
    Translators {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: String,
        #[arg(long = "A", default_value = "identity")]
        a: String,
        #[arg(long)]
        gamma: Option<u32>,
        #[arg(long)]
        b: Option<u32>,
    },
    /// Build a construction and compare its prediction with the oracle.
    Construct(ConstructArgs),
    /// Build the bent function from three translators and check it spectrally.
    Bent(BentArgs),
    /// Sweep random instances over many towers.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_theorem)]
    pub theorem: Theorem,
    /// One per gamma; a single spec is reused for every index.
    #[arg(long = "f")]
    pub f: Vec<String>,
    /// One per gamma (for thm31, the permutation g).
    #[arg(long = "h")]
    pub h: Vec<String>,
    #[arg(long = "A")]
    pub a: Vec<String>,
    #[arg(long = "L")]
    pub l: Option<String>,
    #[arg(long)]
    pub gamma: Vec<u32>,
    /// Omitted constants are derived from `f(γ) - f(0)`.
    #[arg(long)]
    pub b: Vec<u32>,
    /// JSON matrix of `b_ij` for thm39.
    #[arg(long = "B")]
    pub b_matrix: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub t: u32,
    /// Include the interpolating polynomial of the built map.
    #[arg(long)]
    pub poly: bool,
}

#[derive(Debug, Args)]
pub struct BentArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "f")]
    pub f: String,
    #[arg(long = "A", default_value = "identity")]
    pub a: String,
    /// The permutation g of the base field.
    #[arg(long = "h", default_value = "identity")]
    pub h: String,
    #[arg(long = "L", default_value = "identity")]
    pub l: String,
    #[arg(long, num_args = 1)]
    pub gamma: Vec<u32>,
    #[arg(long)]
    pub b: Option<u32>,
    /// Write the Walsh spectrum as `a,b,W` CSV.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1024)]
    pub cap: u64,
    #[arg(long, value_parser = parse_theorem)]
    pub theorem: Vec<Theorem>,
    /// Integers or inclusive ranges `a..b`, comma separated.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub per_field: usize,
}

fn parse_theorem(s: &str) -> std::result::Result<Theorem, String> {
    s.parse::<Theorem>().map_err(|e| e.to_string())
}

/// Outcome of a command: the text to emit and the exit code.
struct Outcome {
    text: String,
    code: i32,
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn tower_of(common: &Common) -> Result<FieldTower> {
    let spec = common
        .field
        .as_deref()
        .ok_or_else(|| Error::Parse { position: 0, message: "missing --field".into() })?;
    FieldSpec::parse(spec)?.build()
}

/// Runs the tool on `args` (including the program name), writing to stdout
/// or `--out`, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match JobConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = Error::Parse { position: 0, message: e.to_string().trim().to_string() };
            print!("{}", json(&ErrorReport::from(&err)));
            return 1;
        }
    };
    let out = match &config.command {
        Command::Fields { common, .. } | Command::Translators { common, .. } => common.out.clone(),
        Command::Construct(a) => a.common.out.clone(),
        Command::Bent(a) => a.common.out.clone(),
        Command::Catalog(a) => a.common.out.clone(),
    };
    let result = execute(&config).and_then(|o| {
        emit(out.as_ref(), &o.text)?;
        Ok(o.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            print!("{}", json(&ErrorReport::from(&e)));
            1
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::PreconditionViolated(format!("writing output: {e}"));
    match out {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(io)?;
            stdout.flush().map_err(io)
        }
    }
}

fn execute(config: &JobConfig) -> Result<Outcome> {
    match &config.command {
        Command::Fields { common, elements } => cmd_fields(common, *elements),
        Command::Translators { common, f, a, gamma, b } => cmd_translators(common, f, a, *gamma, *b),
        Command::Construct(args) => cmd_construct(args),
        Command::Bent(args) => cmd_bent(args),
        Command::Catalog(args) => cmd_catalog(args),
    }
}

fn csv_text(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r)
            .map_err(|e| Error::PreconditionViolated(format!("writing csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::PreconditionViolated(format!("writing csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn cmd_fields(common: &Common, elements: bool) -> Result<Outcome> {
    let tower = tower_of(common)?;
    let rows: Vec<ElementRow> = tower
        .top()
        .elements()
        .map(|code| ElementRow { level: Level::Top, code, coeffs: tower.top().coeffs(code) })
        .collect();
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => json(&FieldReport {
            field: tower.describe(),
            p: tower.p(),
            k: tower.k(),
            n: tower.n(),
            q: tower.q(),
            size: tower.size(),
            modulus_q: tower.modulus_q().to_vec(),
            modulus_qn: tower.modulus_qn().to_vec(),
            elements: elements.then_some(rows),
        }),
        Format::Csv => {
            let mut table = vec![vec!["level".into(), "code".into(), "coeffs".into()]];
            table.extend(rows.iter().map(|r| {
                vec![r.level.to_string(), r.code.to_string(), serde_json::to_string(&r.coeffs).expect("list")]
            }));
            csv_text(table)?
        }
    };
    Ok(Outcome { text, code: 0 })
}

fn derive_b(tower: &FieldTower, f: &FieldFn, gamma: u32, a: &AdditivePerm) -> u32 {
    let base = tower.base();
    let a1_inv = base.inv(a.apply(1)).expect("A is bijective");
    base.mul(base.sub(f.apply(gamma), f.apply(0)), a1_inv)
}

fn make_cert(
    tower: &FieldTower,
    f: &Arc<FieldFn>,
    gamma: u32,
    b: Option<u32>,
    a: &Arc<AdditivePerm>,
) -> Result<TranslatorCert> {
    check_code(tower, Level::Top, gamma)?;
    let b = match b {
        Some(b) => check_code(tower, Level::Base, b)?,
        None => derive_b(tower, f, gamma, a),
    };
    match verify_translator(tower, f, gamma, b, a)? {
        Verdict::Certified(c) => Ok(c),
        Verdict::Refuted { x, u } => Err(Error::HypothesisViolated(format!(
            "{gamma} is not a ({b}, A)-linear translator of f: fails at x = {x}, u = {u}"
        ))),
    }
}

fn cmd_translators(common: &Common, f: &str, a: &str, gamma: Option<u32>, b: Option<u32>) -> Result<Outcome> {
    let tower = tower_of(common)?;
    let f = Arc::new(parse_map(&tower, f, Level::Top, Level::Base)?);
    let a = Arc::new(parse_additive(&tower, a)?);
    let format = common.format.unwrap_or(Format::Json);
    if let Some(gamma) = gamma {
        check_code(&tower, Level::Top, gamma)?;
        let b = match b {
            Some(b) => check_code(&tower, Level::Base, b)?,
            None => derive_b(&tower, &f, gamma, &a),
        };
        let verdict = verify_translator(&tower, &f, gamma, b, &a)?;
        let witness = match verdict {
            Verdict::Certified(_) => None,
            Verdict::Refuted { x, u } => Some(Witness { x, u }),
        };
        let report = VerifyReport { field: tower.describe(), gamma, b, verified: witness.is_none(), witness };
        let text = match format {
            Format::Json => json(&report),
            Format::Csv => csv_text(vec![
                vec!["gamma".into(), "b".into(), "verified".into(), "x".into(), "u".into()],
                vec![
                    gamma.to_string(),
                    b.to_string(),
                    report.verified.to_string(),
                    witness.map(|w| w.x.to_string()).unwrap_or_default(),
                    witness.map(|w| w.u.to_string()).unwrap_or_default(),
                ],
            ])?,
        };
        return Ok(Outcome { text, code: if report.verified { 0 } else { 2 } });
    }
    let found = search_translators(&tower, &f, &a)?;
    let text = match format {
        Format::Json => json(&SearchReport {
            field: tower.describe(),
            pairs: found.pairs.iter().map(|&(gamma, b)| Pair { gamma, b }).collect(),
            subspace_closed: found.subspace_closed,
            b_additive: found.b_additive,
            f_surjective: found.f_surjective,
        }),
        Format::Csv => {
            let mut rows = vec![vec!["gamma".to_string(), "b".to_string()]];
            rows.extend(found.pairs.iter().map(|(g, b)| vec![g.to_string(), b.to_string()]));
            csv_text(rows)?
        }
    };
    Ok(Outcome { text, code: 0 })
}

/// The `i`-th entry of a per-index list, reusing a single entry for every
/// index.
fn pick<'a>(list: &'a [String], i: usize, what: &str) -> Result<&'a str> {
    match list.len() {
        0 => Err(Error::PreconditionViolated(format!("missing --{what}"))),
        1 => Ok(&list[0]),
        _ => list
            .get(i)
            .map(String::as_str)
            .ok_or_else(|| Error::PreconditionViolated(format!("--{what} given {} times, need one per gamma", list.len()))),
    }
}

fn additive_list(tower: &FieldTower, specs: &[String], m: usize) -> Result<Vec<Arc<AdditivePerm>>> {
    if specs.is_empty() {
        let id = Arc::new(AdditivePerm::identity(tower));
        return Ok(vec![id; m]);
    }
    (0..m).map(|i| Ok(Arc::new(parse_additive(tower, pick(specs, i, "A")?)?))).collect()
}

fn system_from_args(tower: &FieldTower, args: &ConstructArgs, full: Option<Vec<Vec<u32>>>) -> Result<TranslatorSystem> {
    let m = args.gamma.len();
    let a = additive_list(tower, &args.a, m)?;
    let fs: Vec<Arc<FieldFn>> = (0..m)
        .map(|i| Ok(Arc::new(parse_map(tower, pick(&args.f, i, "f")?, Level::Top, Level::Base)?)))
        .collect::<Result<_>>()?;
    let hs: Vec<FieldFn> = (0..m)
        .map(|i| parse_map(tower, pick(&args.h, i, "h")?, Level::Base, Level::Base))
        .collect::<Result<_>>()?;
    for &g in &args.gamma {
        check_code(tower, Level::Top, g)?;
    }
    let b = match full {
        Some(b) => b,
        None => (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i != j {
                            Ok(0)
                        } else if let Some(&b) = args.b.get(i) {
                            check_code(tower, Level::Base, b)
                        } else {
                            Ok(derive_b(tower, &fs[i], args.gamma[i], &a[i]))
                        }
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<_>>()?,
    };
    TranslatorSystem::new(tower, args.gamma.clone(), fs, hs, a, b)
}

fn single_cert_args(tower: &FieldTower, args: &ConstructArgs) -> Result<TranslatorCert> {
    if args.gamma.len() != 1 {
        return Err(Error::PreconditionViolated(format!("{} needs exactly one --gamma", args.theorem)));
    }
    let f = Arc::new(parse_map(tower, pick(&args.f, 0, "f")?, Level::Top, Level::Base)?);
    let a = additive_list(tower, &args.a, 1)?.remove(0);
    make_cert(tower, &f, args.gamma[0], args.b.first().copied(), &a)
}

fn linear_arg(tower: &FieldTower, l: Option<&str>) -> Result<LinearMap> {
    parse_linear(tower, l.unwrap_or("identity"))
}

fn cmd_construct(args: &ConstructArgs) -> Result<Outcome> {
    let tower = tower_of(&args.common)?;
    let l = linear_arg(&tower, args.l.as_deref())?;
    let base_map = |i: usize| parse_map(&tower, pick(&args.h, i, "h")?, Level::Base, Level::Base);
    let result: ConstructionResult = match args.theorem {
        Theorem::Thm21 => thm21_build(&tower, &l, &single_cert_args(&tower, args)?, &base_map(0)?)?,
        Theorem::Thm31 => thm31_build(&tower, &l, &single_cert_args(&tower, args)?, &base_map(0)?)?,
        Theorem::Cor38 => cor38_build(&tower, &single_cert_args(&tower, args)?, &base_map(0)?)?,
        Theorem::Thm33 => thm33_build(&tower, &system_from_args(&tower, args, None)?)?,
        Theorem::Cor34 => cor34_check(&tower, &system_from_args(&tower, args, None)?)?,
        Theorem::Cor35 => cor35_build(&tower, &l, &system_from_args(&tower, args, None)?)?,
        Theorem::Cor36 => cor36_check(&tower, &l, &system_from_args(&tower, args, None)?)?.result,
        Theorem::Thm37 => thm37_build(&tower, &l, &system_from_args(&tower, args, None)?)?,
        Theorem::Thm39 => {
            let a = vec![format!("mono:{}", u64::from(tower.p()).pow(args.t))];
            let frob_args = ConstructArgs { a, ..clone_args(args) };
            let full = match &args.b_matrix {
                Some(text) => Some(serde_json::from_str::<Vec<Vec<u32>>>(text).map_err(|e| Error::Parse {
                    position: 0,
                    message: format!("--B must be a JSON matrix: {e}"),
                })?),
                None => None,
            };
            let full = match full {
                Some(b) => b,
                None => derive_full_b(&tower, &frob_args)?,
            };
            if args.t > tower.k() {
                return Err(Error::BadT { t: args.t, k: tower.k() });
            }
            thm39_build(&tower, &l, &system_from_args(&tower, &frob_args, Some(full))?, args.t)?
        }
        Theorem::Cor32 => {
            return Err(Error::PreconditionViolated("use the `bent` command for cor32".into()));
        }
    };
    let agree = result.agrees()
        && result.involution != Some(false)
        && !(matches!(result.theorem, Theorem::Cor34 | Theorem::Cor36) && !result.oracle_permutation);
    let report = ConstructReport {
        field: tower.describe(),
        theorem: result.theorem,
        predicted_permutation: result.predicted_permutation,
        reason: result.reason.clone(),
        oracle_permutation: result.oracle_permutation,
        agree,
        collision: result.collision.map(|(a, b)| [a, b]),
        inverse_ok: result.oracle_inverse_ok,
        involution: result.involution,
        rank: result.rank,
        cross_checks: result.cross_checks.iter().cloned().collect::<BTreeMap<_, _>>(),
        table: result.built.table().to_vec(),
        inverse_table: result.predicted_inverse.as_ref().map(|f| f.table().to_vec()),
        polynomial: args.poly.then(|| result.built.clone().with_poly(&tower).poly().expect("attached").to_string()),
    };
    let text = match args.common.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut rows = vec![vec!["x".to_string(), "F".to_string(), "inverse".to_string()]];
            rows.extend(report.table.iter().enumerate().map(|(x, y)| {
                let inv = report.inverse_table.as_ref().map(|t| t[x].to_string()).unwrap_or_default();
                vec![x.to_string(), y.to_string(), inv]
            }));
            csv_text(rows)?
        }
    };
    Ok(Outcome { text, code: if agree { 0 } else { 2 } })
}

fn clone_args(args: &ConstructArgs) -> ConstructArgs {
    ConstructArgs {
        common: Common {
            field: args.common.field.clone(),
            format: args.common.format,
            out: args.common.out.clone(),
            seed: args.common.seed,
        },
        theorem: args.theorem,
        f: args.f.clone(),
        h: args.h.clone(),
        a: args.a.clone(),
        l: args.l.clone(),
        gamma: args.gamma.clone(),
        b: args.b.clone(),
        b_matrix: args.b_matrix.clone(),
        t: args.t,
        poly: args.poly,
    }
}

/// `b_ij = (f_j(γ_i) - f_j(0)) / A(1)`.
fn derive_full_b(tower: &FieldTower, args: &ConstructArgs) -> Result<Vec<Vec<u32>>> {
    let m = args.gamma.len();
    let a = additive_list(tower, &args.a, m)?;
    let fs: Vec<FieldFn> = (0..m)
        .map(|j| parse_map(tower, pick(&args.f, j, "f")?, Level::Top, Level::Base))
        .collect::<Result<_>>()?;
    Ok((0..m)
        .map(|i| (0..m).map(|j| derive_b(tower, &fs[j], args.gamma[i], &a[j])).collect())
        .collect())
}

fn cmd_bent(args: &BentArgs) -> Result<Outcome> {
    let tower = tower_of(&args.common)?;
    if args.gamma.len() != 3 {
        return Err(Error::HypothesisViolated(format!("need three gammas, got {}", args.gamma.len())));
    }
    let f = Arc::new(parse_map(&tower, &args.f, Level::Top, Level::Base)?);
    let a = Arc::new(parse_additive(&tower, &args.a)?);
    let b = match args.b {
        Some(b) => check_code(&tower, Level::Base, b)?,
        None => derive_b(&tower, &f, args.gamma[0], &a),
    };
    let certs: Vec<TranslatorCert> = args
        .gamma
        .iter()
        .map(|&g| make_cert(&tower, &f, g, Some(b), &a))
        .collect::<Result<_>>()?;
    let certs: [TranslatorCert; 3] = certs.try_into().expect("three");
    let g = parse_map(&tower, &args.h, Level::Base, Level::Base)?;
    let l = parse_linear(&tower, &args.l)?;
    let mut inst = build_h(&tower, &l, &certs, &g)?;
    let parseval = parseval_holds(inst.compute_spectrum(&tower)?);
    let verdict = inst.is_bent()?;
    if let Some(path) = &args.spectrum {
        let file = std::fs::File::create(path)
            .map_err(|e| Error::PreconditionViolated(format!("writing spectrum: {e}")))?;
        write_spectrum_csv(&tower, inst.spectrum().expect("computed"), std::io::BufWriter::new(file))?;
    }
    let report = BentReport {
        field: tower.describe(),
        gammas: inst.gammas,
        b,
        bent: verdict.bent,
        dual_matches: verdict.dual_matches,
        parseval,
        phi_permutations: inst.phi_permutations,
        psi_permutation: inst.psi_permutation,
        psi_inverse_is_sum: inst.psi_inverse_is_sum,
        h_hex: inst.h.to_hex(),
        dual_hex: inst.h_dual.to_hex(),
    };
    let ok = report.bent && report.dual_matches;
    let text = match args.common.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut buf = Vec::new();
            write_spectrum_csv(&tower, inst.spectrum().expect("computed"), &mut buf)?;
            String::from_utf8(buf).expect("utf-8")
        }
    };
    Ok(Outcome { text, code: if ok { 0 } else { 2 } })
}

fn catalog_towers(args: &CatalogArgs) -> Result<Vec<(u32, u32, u32)>> {
    if let Some(field) = &args.common.field {
        let s = FieldSpec::parse(field)?;
        return Ok(vec![(s.p, s.k, s.n)]);
    }
    if args.p.is_none() && args.k.is_none() && args.n.is_none() {
        return Ok(default_towers(args.cap));
    }
    let ps = match &args.p {
        Some(t) => parse_int_list(t)?,
        None => vec![2, 3, 5, 7],
    };
    let ks = match &args.k {
        Some(t) => parse_int_list(t)?,
        None => vec![1],
    };
    let mut out = Vec::new();
    for &p in &ps {
        for &k in &ks {
            let ns = match &args.n {
                Some(t) => parse_int_list(t)?,
                None => (1..=20)
                    .filter(|&n| u64::from(p).checked_pow(k * n).is_some_and(|s| s <= args.cap))
                    .collect(),
            };
            out.extend(ns.into_iter().map(|n| (p, k, n)));
        }
    }
    Ok(out)
}

fn cmd_catalog(args: &CatalogArgs) -> Result<Outcome> {
    let towers = catalog_towers(args)?;
    let theorems = if args.theorem.is_empty() { Theorem::ALL.to_vec() } else { args.theorem.clone() };
    let rows = run_catalog(&CatalogConfig {
        towers,
        theorems,
        per_field: args.per_field,
        seed: args.common.seed,
        cap: args.cap,
    })?;
    let all_agree = rows.iter().all(|r| r.agree);
    let text = match args.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_catalog_csv(&rows, &mut buf)?;
            String::from_utf8(buf).expect("utf-8")
        }
        Format::Json => json(&rows),
    };
    Ok(Outcome { text, code: if all_agree { 0 } else { 2 } })
}

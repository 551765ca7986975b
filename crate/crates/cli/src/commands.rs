use crate::pencil::PencilFile;
use crate::report::{coefficients, display_factors, Report};
use crate::verify::{self, report_factors, status_text};
use crate::CliError;
use bhkzeta_core::arith::prime_power_decompose;
use bhkzeta_core::counting::{
    affine_count_mod_p, affine_count_mod_p_integral, count_affine_lastvar, count_projective, is_smooth_fiber,
    CountOptions, PencilSpec,
};
use bhkzeta_core::ff::{FieldTable, GaussSumTable};
use bhkzeta_core::hypergeom::{
    field_of_definition, hyper_sum_bcm, hyper_sum_classic, is_good, is_splittable, HyperSumValue,
    HypergeometricParameters, Tolerance,
};
use bhkzeta_core::invertible::sl_j_quotient;
use bhkzeta_core::zeta::{trace_count, Calibration, ExtensionCache, Pencil};
use bhkzeta_core::Error;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::Rational64;
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(
    name = "bhkzeta",
    version,
    about = "Point counts, hypergeometric sums and zeta numerators of invertible pencils"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for enumeration.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Residual factor for rounding hypergeometric sums (bound = factor * q^{d/2}, at most 0.25).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Work cap for point counts.
    #[arg(long, global = true)]
    pub cap: Option<u128>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Affine,
    Projective,
    Modp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Definition {
    Classic,
    Bcm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableId {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "eq21")]
    Patterns,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weights, Calabi-Yau condition, atomic types, dual weights and SL/J.
    Validate { file: String },
    /// Count points of a pencil member.
    Count {
        file: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        psi: Option<u64>,
        #[arg(long, value_enum, default_value_t = Mode::Projective)]
        mode: Mode,
    },
    /// Evaluate a finite-field hypergeometric sum.
    Hyper {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        t: u64,
        #[arg(long = "def", value_enum, default_value_t = Definition::Both)]
        definition: Definition,
    },
    /// Assemble and factor the zeta numerator of the F4 or L2L2 pencil.
    Zeta {
        file: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        psi: u64,
    },
    /// Compare projective counts of two pencils mod q.
    Congruence {
        file_a: String,
        file_b: String,
        #[arg(long)]
        q: String,
        /// `a..b` (half open) or `a..=b`; all of F_q by default.
        #[arg(long = "psi-range")]
        psi_range: Option<String>,
    },
    /// Recompute a printed table and compare.
    TableVerify {
        #[arg(long, value_enum)]
        table: TableId,
        #[arg(long)]
        q: Option<String>,
    },
}

/// `"73"` or `"3^4"`.
pub fn parse_q(s: &str) -> Result<(u64, u32), CliError> {
    let bad = || CliError::Usage(format!("--q {s}: expected a prime or a prime power p^r"));
    let (p, r) = match s.split_once('^') {
        Some((p, r)) => (p.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?),
        None => {
            let q: u64 = s.trim().parse().map_err(|_| bad())?;
            prime_power_decompose(q).ok_or_else(bad)?
        }
    };
    if !bhkzeta_core::arith::is_prime(p) || r == 0 {
        return Err(bad());
    }
    Ok((p, r))
}

pub fn parse_rationals(s: &str) -> Result<Vec<Rational64>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let t = t.trim();
            let bad = || CliError::Usage(format!("bad rational `{t}`"));
            match t.split_once('/') {
                Some((n, d)) => {
                    let d: i64 = d.trim().parse().map_err(|_| bad())?;
                    if d == 0 {
                        return Err(bad());
                    }
                    Ok(Rational64::new(n.trim().parse().map_err(|_| bad())?, d))
                }
                None => Ok(Rational64::from_integer(t.parse().map_err(|_| bad())?)),
            }
        })
        .collect()
}

fn parse_range(s: &str, q: u64) -> Result<std::ops::Range<u64>, CliError> {
    let bad = || CliError::Usage(format!("--psi-range {s}: expected a..b or a..=b"));
    if let Some((a, b)) = s.split_once("..=") {
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok(a.trim().parse().map_err(|_| bad())?..(b + 1).min(q));
    }
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok(a.trim().parse().map_err(|_| bad())?..b.trim().parse::<u64>().map_err(|_| bad())?.min(q))
}

fn count_options(cli: &Cli) -> CountOptions {
    let mut o = CountOptions::default();
    if let Some(cap) = cli.cap {
        o.cap = cap;
    }
    o
}

fn tolerance(cli: &Cli) -> Tolerance {
    let mut t = Tolerance::default();
    if let Some(f) = cli.tolerance {
        t.factor = f;
    }
    t
}

fn pencil_of(file: &PencilFile) -> Result<Pencil, CliError> {
    let m = file.exponent_matrix()?;
    [Pencil::F4, Pencil::L2L2].into_iter().find(|p| p.matrix() == m).ok_or_else(|| {
        CliError::Unsupported(format!("zeta assembly is implemented for F4 and L2L2, not {}", file.name))
    })
}

fn hyper_json(v: &HyperSumValue) -> Value {
    json!({
        "value": v.exact.to_string(),
        "raw": [v.raw.re, v.raw.im],
        "residual": v.residual,
        "bound": v.bound,
    })
}

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<Report, CliError> {
    if let Some(j) = cli.jobs {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Validate { file } => validate(file, argv)?,
        Command::Count { file, q, psi, mode } => count(cli, file, q, *psi, *mode, argv)?,
        Command::Hyper { alpha, beta, q, t, definition } => hyper(cli, alpha, beta, q, *t, *definition, argv)?,
        Command::Zeta { file, q, psi } => zeta(cli, file, q, *psi, argv)?,
        Command::Congruence { file_a, file_b, q, psi_range } => {
            congruence(cli, file_a, file_b, q, psi_range.as_deref(), argv)?
        }
        Command::TableVerify { table, q } => table_verify(*table, q.as_deref(), argv)?,
    };
    report.timings.insert("total".into(), start.elapsed().as_millis() as u64);
    Ok(report)
}

fn validate(file: &str, argv: Vec<String>) -> Result<Report, CliError> {
    let pf = PencilFile::load(file)?;
    let data = pf.validated()?;
    let mut r = Report::new(argv, json!({ "file": file, "pencil": pf }));
    let sl_j = if data.is_calabi_yau() {
        let quotient = sl_j_quotient(&data.matrix)?;
        json!({ "invariants": quotient.invariants, "order": quotient.order() })
    } else {
        Value::Null
    };
    r.results = json!({
        "det": data.det.to_string(),
        "weights": data.weights.weights,
        "degree": data.weights.degree,
        "calabi_yau": data.is_calabi_yau(),
        "atomic_type": data.decomposition.label(),
        "atoms": data.decomposition.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "dual_weights": data.dual_weights.weights,
        "dual_degree": data.dual_weights.degree,
        "sl_j": sl_j,
    });
    Ok(r)
}

fn count(cli: &Cli, file: &str, q: &str, psi: Option<u64>, mode: Mode, argv: Vec<String>) -> Result<Report, CliError> {
    let pf = PencilFile::load(file)?;
    let data = pf.validated()?;
    let (p, r) = parse_q(q)?;
    let mut rep = Report::new(argv, json!({ "file": file, "q": q, "psi": psi, "mode": format!("{mode:?}") }));
    if psi.is_some() && !pf.deformed {
        return Err(CliError::Usage(format!("{} is not a deformed pencil; drop --psi", pf.name)));
    }
    if mode == Mode::Modp {
        if r != 1 || psi.is_some() {
            return Err(CliError::Usage("--mode modp needs a prime q and no --psi".into()));
        }
        let (value, variant) = match affine_count_mod_p(&data.matrix, p) {
            Ok(v) => (v, "det A divides p - 1"),
            Err(Error::DetDoesNotDivide { .. }) => (affine_count_mod_p_integral(&data.matrix, p)?, "(p-1)xi integral"),
            Err(e) => return Err(e.into()),
        };
        rep.results = json!({ "count_mod_p": value, "hypothesis": variant });
        return Ok(rep);
    }
    let f = FieldTable::new(p, r)?;
    rep.field(&f);
    let spec = match psi {
        Some(v) => PencilSpec::deformed(data.matrix.clone(), (v % f.q()) as u32),
        None => PencilSpec::new(data.matrix.clone()),
    };
    let opts = count_options(cli);
    let res = match mode {
        Mode::Affine => count_affine_lastvar(&spec, &f, &opts)?,
        _ => count_projective(&spec, &f, &opts)?,
    };
    rep.results =
        json!({ "count": res.count, "kind": format!("{:?}", res.kind), "method": format!("{:?}", res.method) });
    Ok(rep)
}

fn hyper(
    cli: &Cli,
    alpha: &str,
    beta: &str,
    q: &str,
    t: u64,
    def: Definition,
    argv: Vec<String>,
) -> Result<Report, CliError> {
    let params = HypergeometricParameters::new(parse_rationals(alpha)?, parse_rationals(beta)?)?;
    let (p, r) = parse_q(q)?;
    let f = FieldTable::new(p, r)?;
    let mut rep = Report::new(argv, json!({ "alpha": alpha, "beta": beta, "q": q, "t": t, "def": format!("{def:?}") }));
    rep.field(&f);
    let qv = f.q();
    let split = is_splittable(qv, &params).map(|s| {
        let fmt = |v: &[Rational64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({ "alpha0": fmt(&s.alpha0), "alpha1": fmt(&s.alpha1), "beta0": fmt(&s.beta0), "beta1": fmt(&s.beta1) })
    });
    if !is_good(qv, &params) {
        return Err(Error::NotGood { q: qv, denominator: params.denominator_lcm() }.into());
    }
    let g = GaussSumTable::new(&f)?;
    let tol = tolerance(cli);
    let te = f.from_int((t % p) as i64);
    let want_classic = def != Definition::Bcm;
    let want_bcm = def != Definition::Classic;
    let classic = if want_classic { Some(hyper_sum_classic(&params, te, &f, &g, &tol)) } else { None };
    let bcm = if want_bcm && field_of_definition(&params).is_rational() {
        Some(hyper_sum_bcm(&params, te, &f, &g, &tol))
    } else {
        None
    };
    if def == Definition::Bcm && bcm.is_none() {
        return Err(Error::NotDefinedOverQ.into());
    }
    if !matches!(classic, Some(Ok(_))) && !matches!(bcm, Some(Ok(_))) {
        if let Some(Err(e)) = classic.as_ref().or(bcm.as_ref()) {
            return Err(e.clone().into());
        }
    }
    let as_json = |v: &Option<bhkzeta_core::Result<HyperSumValue>>| -> Result<Value, CliError> {
        match v {
            None => Ok(Value::Null),
            Some(Ok(x)) => Ok(hyper_json(x)),
            Some(Err(e)) if def == Definition::Both => Ok(json!({ "unavailable": e.to_string() })),
            Some(Err(e)) => Err(e.clone().into()),
        }
    };
    let equal = match (&classic, &bcm) {
        (Some(Ok(a)), Some(Ok(b))) => Some(a.exact == b.exact),
        _ => None,
    };
    rep.verified = equal != Some(false);
    rep.results = json!({
        "classic": as_json(&classic)?,
        "bcm": as_json(&bcm)?,
        "equal": equal,
        "field_of_definition": field_of_definition(&params).describe(),
        "splitting": split,
    });
    Ok(rep)
}

fn zeta(cli: &Cli, file: &str, q: &str, psi: u64, argv: Vec<String>) -> Result<Report, CliError> {
    let pf = PencilFile::load(file)?;
    let pencil = pencil_of(&pf)?;
    let (p, r) = parse_q(q)?;
    if r != 1 {
        return Err(CliError::Unsupported("zeta assembly over prime fields only".into()));
    }
    let mut rep = Report::new(argv, json!({ "file": file, "q": q, "psi": psi }));
    let mut cache = ExtensionCache::new(p);
    let f = cache.level(1)?.0.clone();
    rep.field(&f);
    let spec = PencilSpec::deformed(pencil.matrix(), (psi % p) as u32);
    let opts = count_options(cli);
    if !is_smooth_fiber(&spec, &f, &opts)? {
        rep.results = json!({ "pencil": pencil.name(), "smooth": false, "display": "not smooth" });
        return Ok(rep);
    }
    let cal = Calibration::default();
    let tol = tolerance(cli);
    let z = match pencil {
        Pencil::F4 => bhkzeta_core::zeta::assemble_px_f4(psi, &mut cache, &cal, &tol),
        Pencil::L2L2 => bhkzeta_core::zeta::assemble_px_l2l2(psi, &mut cache, &cal, &tol),
    };
    let z = match z {
        Err(Error::SingularMember(why)) => {
            rep.results = json!({ "pencil": pencil.name(), "smooth": false, "display": "not smooth", "reason": why });
            return Ok(rep);
        }
        other => other?,
    };
    for level in 2..=cache.max_r() {
        if let Ok((fr, _)) = cache.level(level) {
            let fp = crate::report::Fingerprint::from(fr);
            if !rep.fingerprint.contains(&fp) {
                rep.fingerprint.push(fp);
            }
        }
    }
    let count = count_projective(&spec, &f, &opts)?.count;
    let blocks: Vec<Value> = z
        .blocks
        .iter()
        .map(|b| {
            json!({
                "name": b.name,
                "multiplicity": b.multiplicity,
                "coefficients": coefficients(&b.l.poly.poly),
                "status": status_text(b.l.status),
                "provenance": b.l.poly.provenance,
            })
        })
        .collect();
    let (display, px, trace_ok) = match &z.px {
        Some(px) => {
            let ok = BigInt::from(count) == trace_count(&px.poly, p);
            (display_factors(&report_factors(&z), p), Value::from(coefficients(&px.poly)), Some(ok))
        }
        None => (format!("known mod T^{}", z.px_truncated.degree().unwrap_or(0) + 1), Value::Null, None),
    };
    rep.verified = trace_ok.unwrap_or(true) && (z.px.is_none() || z.weil_ok);
    rep.results = json!({
        "pencil": pencil.name(),
        "smooth": true,
        "t": z.t,
        "display": display,
        "px": px,
        "px_truncated": coefficients(&z.px_truncated),
        "blocks": blocks,
        "count": count,
        "trace_ok": trace_ok,
        "weil_ok": z.weil_ok,
        "calibration": format!("{cal:?}"),
        "notes": z.notes,
    });
    Ok(rep)
}

fn congruence(
    cli: &Cli,
    a: &str,
    b: &str,
    q: &str,
    range: Option<&str>,
    argv: Vec<String>,
) -> Result<Report, CliError> {
    let fa = PencilFile::load(a)?;
    let fb = PencilFile::load(b)?;
    let ma = fa.validated()?;
    let mb = fb.validated()?;
    if !ma.is_calabi_yau() || !mb.is_calabi_yau() {
        return Err(Error::NotCalabiYau.into());
    }
    let (p, r) = parse_q(q)?;
    let f = FieldTable::new(p, r)?;
    let range = match range {
        Some(s) => parse_range(s, f.q())?,
        None => 0..f.q(),
    };
    let mut rep = Report::new(argv, json!({ "file_a": a, "file_b": b, "q": q, "psi_range": [range.start, range.end] }));
    rep.field(&f);
    let rows = verify::congruence_rows(&[ma.matrix, mb.matrix], &f, range, &count_options(cli))?;
    rep.verified = rows.iter().all(|r| r.congruent != Some(false));
    rep.results = json!({ "rows": rows, "all_congruent_on_smooth": rep.verified });
    Ok(rep)
}

fn table_verify(table: TableId, q: Option<&str>, argv: Vec<String>) -> Result<Report, CliError> {
    let mut rep = Report::new(argv, json!({ "table": format!("{table:?}"), "q": q }));
    match table {
        TableId::One => {
            let rows = verify::verify_groups()?;
            rep.verified = rows.iter().all(|r| r.ok);
            rep.results = json!({ "rows": rows });
        }
        TableId::Two | TableId::Three => {
            if let Some(q) = q {
                if parse_q(q)? != (281, 1) {
                    return Err(CliError::Usage("the printed tables are over F_281".into()));
                }
            }
            let mut cache = ExtensionCache::new(281);
            rep.field(&cache.level(1)?.0.clone());
            let cal = verify::calibrate(&mut cache, &Tolerance::default())?;
            let id = if table == TableId::Two { 2 } else { 3 };
            let check = verify::verify_zeta_table(id, &mut cache, &cal)?;
            rep.verified = check.ok;
            rep.results = serde_json::to_value(&check).expect("serializable");
        }
        TableId::Patterns => {
            let (p, r) = parse_q(q.unwrap_or("41"))?;
            if r != 1 {
                return Err(CliError::Unsupported("prime q only".into()));
            }
            if p % 4 != 1 {
                return Err(CliError::Unsupported(format!("q = {p} is inert in Q(i); only q ≡ 1 mod 4 is assembled")));
            }
            let check = verify::verify_degree_patterns(p, &Calibration::default())?;
            rep.field(&FieldTable::new(p, 1)?);
            rep.verified = check.ok;
            rep.results = serde_json::to_value(&check).expect("serializable");
        }
    }
    Ok(rep)
}

/// Human-readable rendering of a report's results.
pub fn render_text(rep: &Report) -> String {
    let mut out = String::new();
    if let Value::Object(map) = &rep.results {
        if let Some(Value::String(d)) = map.get("display") {
            out.push_str(d);
            out.push('\n');
        }
        for (k, v) in map {
            if k == "display" {
                continue;
            }
            match v {
                Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                    out.push_str(&format!("{k}:\n"));
                    for it in items {
                        out.push_str(&format!("  {it}\n"));
                    }
                }
                _ => out.push_str(&format!("{k}: {v}\n")),
            }
        }
    } else {
        out.push_str(&format!("{}\n", rep.results));
    }
    out.push_str(&format!("verified: {}\n", rep.verified));
    out
}

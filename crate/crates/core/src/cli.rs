//! Command-line front end: `birat degrees|recurrence|darboux|picard|validate`.

use std::fmt::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::darboux::{darboux_for_instance, DarbouxError, IndexConstraintQuery};
use crate::instance::{Instance, InstanceError};
use crate::picard::{degrees_from_picard, PicardError};
use crate::poly::{HomogeneousPolynomial, Rational};
use crate::sequence::{
    berlekamp_massey, cross_validate, default_max_terms, emit, run_orbit, seed_conflicts, LinearRecurrence,
    OrbitTable, SequenceError,
};

#[derive(Debug, Parser)]
#[command(
    name = "birat",
    version,
    about = "Degree growth of birational maps via proper pull-backs and blow-up indices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree and index table of the orbit of a seed polynomial.
    Degrees(DegreesArgs),
    /// Minimal linear recurrence and closed form of the degree sequence.
    Recurrence(RecurrenceArgs),
    /// Polynomials of one degree with prescribed chart indices, and the pull-back action on them.
    Darboux(DarbouxArgs),
    /// Degrees and invariant classes from the Picard pushforward matrix.
    Picard(PicardArgs),
    /// Consistency checks on an instance: inverse, critical factors, engines.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Built-in instance key or path to an instance JSON file.
    pub instance: String,
    /// Parameter override, e.g. `--param gamma=1`.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Exact,
    Affine,
    Picard,
    All,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Last iterate; defaults to the instance's own horizon.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Seed polynomial in the instance variables; defaults to the instance seed.
    #[arg(long)]
    pub seed: Option<String>,
    /// Term ceiling for the exact engine (default from BIRAT_MAX_TERMS or 2000000).
    #[arg(long)]
    pub max_terms: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DegreesArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub orbit: OrbitArgs,
    #[arg(long, value_enum, default_value_t = Engine::Exact)]
    pub engine: Engine,
}

#[derive(Debug, Args)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// `exact` fits the exact orbit and checks it on affine terms; `affine` uses affine terms only.
    #[arg(long, value_enum, default_value_t = Engine::Exact)]
    pub engine: Engine,
    /// Extra affine terms used to check the fitted recurrence.
    #[arg(long, default_value_t = 8)]
    pub check_terms: usize,
}

#[derive(Debug, Args)]
pub struct DarbouxArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2)]
    pub degree: u32,
    /// Drop the instance's index bounds and return the full space.
    #[arg(long)]
    pub no_bounds: bool,
}

#[derive(Debug, Args)]
pub struct PicardArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 12)]
    pub nmax: u32,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub orbit: OrbitArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Instance(_) => "instance",
            CliError::Sequence(_) => "sequence",
            CliError::Picard(_) => "picard",
            CliError::Darboux(_) => "darboux",
            CliError::Usage(_) => "usage",
        }
    }
}

/// What a command produced; `failures` lists violated consistency checks.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }
}

/// Runs a parsed command line. Errors map to exit code 2 with a JSON diagnostic.
pub fn run(cli: &Cli) -> (Outcome, i32) {
    let res = match &cli.command {
        Command::Degrees(a) => degrees(a),
        Command::Recurrence(a) => recurrence(a),
        Command::Darboux(a) => darboux(a),
        Command::Picard(a) => picard(a),
        Command::Validate(a) => validate(a),
    };
    match res {
        Ok(mut out) => {
            if !out.failures.is_empty() {
                let diag = json!({ "error": "consistency", "failures": out.failures });
                let _ = writeln!(out.stderr, "{diag}");
            }
            let code = out.exit_code();
            (out, code)
        }
        Err(e) => {
            let diag = json!({ "error": e.kind(), "message": e.to_string() });
            let out = Outcome {
                stderr: format!("{diag}\n"),
                ..Outcome::default()
            };
            (out, 2)
        }
    }
}

fn load(c: &Common) -> Result<Instance, CliError> {
    let mut pairs = Vec::with_capacity(c.params.len());
    for p in &c.params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--param expects NAME=VALUE, got {p:?}")))?;
        pairs.push((k.trim(), v.trim()));
    }
    Ok(Instance::load_with(&c.instance, &pairs)?)
}

fn seed_of(inst: &Instance, o: &OrbitArgs, warn: &mut String) -> Result<HomogeneousPolynomial, CliError> {
    let Some(src) = &o.seed else {
        return Ok(inst.seed.clone());
    };
    let p = inst
        .parse(src)
        .map_err(|e| CliError::Usage(format!("seed {src:?}: {e}")))?;
    let h = HomogeneousPolynomial::new(p).map_err(|e| CliError::Usage(format!("seed {src:?}: {e}")))?;
    let hits = seed_conflicts(h.poly(), &inst.charts)?;
    if !hits.is_empty() {
        let _ = writeln!(warn, "note: seed has positive index at {}", hits.join(", "));
    }
    Ok(h)
}

fn exact_table(
    inst: &Instance,
    seed: &HomogeneousPolynomial,
    o: &OrbitArgs,
    nmax: usize,
    warn: &mut String,
) -> Result<OrbitTable, CliError> {
    let limit = o.max_terms.unwrap_or_else(default_max_terms);
    let t = run_orbit(&inst.map, seed, &inst.charts, nmax, Some(limit))?;
    if let Some(why) = &t.truncated {
        let _ = writeln!(warn, "partial table: {why}");
    }
    Ok(t)
}

/// Labels and states of an affine run.
type AffineRows = (Vec<String>, Vec<Vec<Rational>>);

/// Affine states `0..=nmax` started from the seed's own degree and indices.
fn affine_rows(
    inst: &Instance,
    seed: &HomogeneousPolynomial,
    nmax: usize,
) -> Result<Option<AffineRows>, CliError> {
    let Some(sys) = &inst.affine else {
        return Ok(None);
    };
    let start = run_orbit(&inst.map, seed, &inst.charts, 0, None)?;
    let init = start.state(0, sys.labels())?;
    Ok(Some((sys.labels().to_vec(), sys.run(&init, nmax)?)))
}

fn rows_csv(labels: &[String], rows: &[Vec<String>]) -> String {
    let mut s = format!("n,{}\n", labels.join(","));
    for (n, r) in rows.iter().enumerate() {
        let _ = writeln!(s, "{n},{}", r.join(","));
    }
    s
}

fn rows_md(labels: &[String], rows: &[Vec<String>]) -> String {
    let mut head = vec!["n".to_string()];
    head.extend(labels.iter().cloned());
    let body: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(n, r)| std::iter::once(n.to_string()).chain(r.iter().cloned()).collect())
        .collect();
    let widths: Vec<usize> = (0..head.len())
        .map(|i| {
            body.iter()
                .map(|r| r[i].len())
                .chain([head[i].len(), 3])
                .max()
                .unwrap_or(3)
        })
        .collect();
    let line = |cols: &[String]| {
        let mut s = String::from("|");
        for (c, w) in cols.iter().zip(&widths) {
            let _ = write!(s, " {c:>w$} |");
        }
        s.push('\n');
        s
    };
    let mut out = line(&head);
    out.push('|');
    for w in &widths {
        let _ = write!(out, " {}: |", "-".repeat(w - 1));
    }
    out.push('\n');
    for r in &body {
        out.push_str(&line(r));
    }
    out
}

fn strings(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

#[derive(Serialize)]
struct EngineDegrees {
    engine: &'static str,
    degrees: Vec<String>,
}

fn degrees(a: &DegreesArgs) -> Result<Outcome, CliError> {
    let inst = load(&a.common)?;
    let mut out = Outcome::default();
    let nmax = a.orbit.nmax.unwrap_or(inst.nmax);
    let seed = seed_of(&inst, &a.orbit, &mut out.stderr)?;
    let want = |e: Engine| a.engine == e || a.engine == Engine::All;

    let table = if want(Engine::Exact) {
        Some(exact_table(&inst, &seed, &a.orbit, nmax, &mut out.stderr)?)
    } else {
        None
    };
    let affine = if want(Engine::Affine) {
        let r = affine_rows(&inst, &seed, nmax)?;
        if r.is_none() && a.engine == Engine::Affine {
            return Err(CliError::Usage(format!(
                "instance {} has no affine system",
                inst.key
            )));
        }
        r
    } else {
        None
    };
    let picard = if want(Engine::Picard) {
        match &inst.picard {
            Some(m) => {
                if a.orbit.seed.is_some() {
                    let _ = writeln!(
                        out.stderr,
                        "note: the Picard engine follows a generic hyperplane, not the given seed"
                    );
                }
                Some(degrees_from_picard(m, nmax as u32)?)
            }
            None if a.engine == Engine::Picard => {
                return Err(CliError::Usage(format!(
                    "instance {} has no Picard matrix",
                    inst.key
                )));
            }
            None => None,
        }
    } else {
        None
    };

    let mut engines: Vec<EngineDegrees> = Vec::new();
    if let Some(t) = &table {
        engines.push(EngineDegrees {
            engine: "exact",
            degrees: t.degrees().iter().map(ToString::to_string).collect(),
        });
    }
    if let Some((_, rows)) = &affine {
        engines.push(EngineDegrees {
            engine: "affine",
            degrees: rows.iter().map(|r| r[0].to_string()).collect(),
        });
    }
    if let Some(d) = &picard {
        engines.push(EngineDegrees {
            engine: "picard",
            degrees: d.iter().map(ToString::to_string).collect(),
        });
    }
    for i in 0..engines.len() {
        for j in i + 1..engines.len() {
            let (x, y) = (&engines[i], &engines[j]);
            if let Some(n) = x.degrees.iter().zip(&y.degrees).position(|(p, q)| p != q) {
                out.failures.push(format!(
                    "{} and {} disagree at n = {n}: {} vs {}",
                    x.engine, y.engine, x.degrees[n], y.degrees[n]
                ));
            }
        }
    }
    // indices too, when both the exact and affine engines ran
    if let (Some(t), Some(sys)) = (&table, inst.affine.as_ref().filter(|_| affine.is_some())) {
        let rep = cross_validate(t, sys, nmax.max(t.rows.len().saturating_sub(1)), None)?;
        for m in &rep.mismatches {
            out.failures.push(format!(
                "exact and affine disagree at n = {} on {}: {} vs {}",
                m.n, m.label, m.exact, m.affine
            ));
        }
    }

    match a.common.format {
        Format::Json => {
            let doc = json!({
                "instance": inst.key,
                "nmax": nmax,
                "seed": seed.poly().to_string_with(inst.variables()),
                "table": table,
                "affine": affine.as_ref().map(|(l, r)| json!({ "labels": l, "rows": strings(r) })),
                "engines": engines,
                "agree": out.failures.is_empty(),
            });
            out.stdout = serde_json::to_string_pretty(&doc).expect("plain data serializes");
            out.stdout.push('\n');
        }
        Format::Csv => {
            out.stdout = if let Some(t) = &table {
                emit::to_csv(t)
            } else if let Some((l, r)) = &affine {
                rows_csv(l, &strings(r))
            } else {
                let d: Vec<Vec<String>> = engines[0].degrees.iter().map(|x| vec![x.clone()]).collect();
                rows_csv(&["d".to_string()], &d)
            };
        }
        Format::Md => {
            let mut s = String::new();
            if let Some(t) = &table {
                s.push_str(&emit::to_markdown(t));
            } else if let Some((l, r)) = &affine {
                s.push_str(&rows_md(l, &strings(r)));
            }
            if table.is_none() && affine.is_none() || engines.len() > 1 {
                if !s.is_empty() {
                    s.push('\n');
                }
                for e in &engines {
                    let _ = writeln!(s, "{}: {}", e.engine, e.degrees.join(", "));
                }
            }
            if engines.len() > 1 {
                let _ = writeln!(
                    s,
                    "agreement: {}",
                    if out.failures.is_empty() { "yes" } else { "no" }
                );
            }
            out.stdout = s;
        }
    }
    Ok(out)
}

fn rationals(d: &[u32]) -> Vec<Rational> {
    d.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

#[derive(Serialize)]
struct RecurrenceDoc {
    instance: String,
    seed: String,
    /// Terms the fit was made on.
    terms: Vec<String>,
    /// Further affine terms the fit was checked on.
    check_terms: Vec<String>,
    sequence: emit::RecurrenceReport,
    sequence_holds: bool,
    /// Recurrence of the affine system, valid for every seed.
    universal: Option<emit::RecurrenceReport>,
    universal_holds: Option<bool>,
}

fn recurrence(a: &RecurrenceArgs) -> Result<Outcome, CliError> {
    let inst = load(&a.common)?;
    let mut out = Outcome::default();
    let seed = seed_of(&inst, &a.orbit, &mut out.stderr)?;
    let (terms, nmax) = match a.engine {
        Engine::Exact | Engine::All => {
            let nmax = a.orbit.nmax.unwrap_or(inst.nmax);
            let t = exact_table(&inst, &seed, &a.orbit, nmax, &mut out.stderr)?;
            (rationals(&t.degrees()), t.rows.len() - 1)
        }
        Engine::Affine => {
            let nmax = a.orbit.nmax.unwrap_or(2 * inst.nmax + 4);
            let (_, rows) = affine_rows(&inst, &seed, nmax)?
                .ok_or_else(|| CliError::Usage(format!("instance {} has no affine system", inst.key)))?;
            (rows.iter().map(|r| r[0].clone()).collect(), nmax)
        }
        Engine::Picard => {
            let m = inst
                .picard
                .as_ref()
                .ok_or_else(|| CliError::Usage(format!("instance {} has no Picard matrix", inst.key)))?;
            let nmax = a.orbit.nmax.unwrap_or(2 * inst.nmax + 4);
            let d = degrees_from_picard(m, nmax as u32)?;
            (
                d.iter().map(|&x| Rational::from_integer(x.into())).collect(),
                nmax,
            )
        }
    };
    let check: Vec<Rational> = match affine_rows(&inst, &seed, nmax + a.check_terms)? {
        Some((_, rows)) => rows.iter().map(|r| r[0].clone()).collect(),
        None => terms.clone(),
    };
    let fit = berlekamp_massey(&terms);
    let sequence_holds = fit.check(&check);
    let need = fit.valid_from + fit.order() + 1;
    if terms.len() < need {
        if !sequence_holds {
            return Err(SequenceError::TooShort {
                need,
                got: terms.len(),
            }
            .into());
        }
        let _ = writeln!(
            out.stderr,
            "note: order {} from {} terms is underdetermined, but it holds on the further terms",
            fit.order(),
            terms.len()
        );
    }
    if !sequence_holds {
        out.failures.push(format!(
            "fitted recurrence fails on the extended sequence at n = {}",
            fit.first_failure(&check).unwrap_or(0)
        ));
    }
    let universal: Option<LinearRecurrence> = match &inst.affine {
        Some(sys) => Some(sys.universal_recurrence(0)?.trimmed()),
        None => None,
    };
    let universal_holds = universal.as_ref().map(|u| u.check(&check));
    if universal_holds == Some(false) {
        out.failures
            .push("affine recurrence fails on the degree sequence".into());
    }
    let doc = RecurrenceDoc {
        instance: inst.key.clone(),
        seed: seed.poly().to_string_with(inst.variables()),
        terms: terms.iter().map(ToString::to_string).collect(),
        check_terms: check[terms.len().min(check.len())..]
            .iter()
            .map(ToString::to_string)
            .collect(),
        sequence: emit::RecurrenceReport::new("degree sequence", &terms, &fit),
        sequence_holds,
        universal: universal
            .as_ref()
            .map(|u| emit::RecurrenceReport::new("affine system", &check, u)),
        universal_holds,
    };
    out.stdout = match a.common.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n",
        _ => {
            let mut s = doc.sequence.to_markdown();
            let _ = writeln!(
                s,
                "checked on {} further terms: {}",
                doc.check_terms.len(),
                ok(sequence_holds)
            );
            if let Some(u) = &doc.universal {
                s.push('\n');
                s.push_str(&u.to_markdown());
                let _ = writeln!(
                    s,
                    "holds on the degree sequence: {}",
                    ok(universal_holds == Some(true))
                );
            }
            s
        }
    };
    Ok(out)
}

fn ok(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn darboux(a: &DarbouxArgs) -> Result<Outcome, CliError> {
    let inst = load(&a.common)?;
    let mut out = Outcome::default();
    let q = if a.no_bounds {
        IndexConstraintQuery::unconstrained(a.degree)
    } else {
        IndexConstraintQuery::for_instance(&inst, a.degree)?
    };
    let (_, r) = darboux_for_instance(&inst, &q)?;
    for (i, e) in r.elements.iter().enumerate() {
        if !e.reconstruction {
            out.failures.push(format!(
                "basis element {i}: factored pull-back does not rebuild the raw pull-back"
            ));
        }
    }
    out.stdout = match a.common.format {
        Format::Json => serde_json::to_string_pretty(&r).expect("plain data serializes") + "\n",
        _ => {
            let mut s = String::new();
            let bounds: Vec<String> = r.bounds.iter().map(|(c, k)| format!("{c} >= {k}")).collect();
            let _ = writeln!(s, "degree: {}", r.degree);
            let _ = writeln!(
                s,
                "bounds: {}",
                if bounds.is_empty() {
                    "none".into()
                } else {
                    bounds.join(", ")
                }
            );
            let _ = writeln!(s, "dimension: {}", r.dimension);
            for (i, (b, e)) in r.basis.iter().zip(&r.elements).enumerate() {
                let _ = writeln!(s, "  b{i} = {b}");
                let _ = writeln!(
                    s,
                    "       proper pull-back {} (factors removed {:?}, degree kept: {}, indices kept: {})",
                    e.proper,
                    e.removed,
                    ok(e.degree_preserved),
                    ok(e.indices_preserved)
                );
            }
            match &r.action {
                Some(m) => {
                    let _ = writeln!(s, "action (columns are images):");
                    for row in m {
                        let _ = writeln!(s, "  [{}]", row.join(", "));
                    }
                }
                None => {
                    let _ = writeln!(s, "action: some pull-backs leave the span");
                }
            }
            let _ = writeln!(
                s,
                "kept under the strict index condition: {} of {}",
                r.preserved, r.dimension
            );
            s
        }
    };
    Ok(out)
}

fn picard(a: &PicardArgs) -> Result<Outcome, CliError> {
    let inst = load(&a.common)?;
    let m = inst
        .picard
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("instance {} has no Picard matrix", inst.key)))?;
    let mut out = Outcome::default();
    let d = degrees_from_picard(m, a.nmax)?;
    let inv: Vec<String> = m.invariant_classes().iter().map(ToString::to_string).collect();
    let images: Vec<String> = (0..m.size()).map(|i| m.image(i).to_string()).collect();
    let transcription = match &inst.picard_images {
        Some(im) => match m.check_transcription(im) {
            Ok(()) => Some(true),
            Err(e) => {
                out.failures.push(e.to_string());
                Some(false)
            }
        },
        None => None,
    };
    if let Some((_, rows)) = affine_rows(&inst, &inst.seed, a.nmax as usize)? {
        if let Some(n) = rows
            .iter()
            .zip(&d)
            .position(|(r, x)| r[0] != Rational::from_integer((*x).into()))
        {
            out.failures
                .push(format!("Picard and affine degrees disagree at n = {n}"));
        }
    }
    out.stdout = match a.common.format {
        Format::Json => {
            let doc = json!({
                "instance": inst.key,
                "labels": m.labels().as_slice(),
                "matrix": m.rows(),
                "images": images,
                "degrees": d,
                "invariant_classes": inv,
                "transcription_ok": transcription,
            });
            serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n"
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = d.iter().map(|x| vec![x.to_string()]).collect();
            rows_csv(&["d".to_string()], &rows)
        }
        Format::Md => {
            let mut s = String::new();
            for (l, im) in m.labels().iter().zip(&images) {
                let _ = writeln!(s, "{l} -> {im}");
            }
            let _ = writeln!(
                s,
                "\ndegrees: {}",
                d.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            );
            let _ = writeln!(
                s,
                "invariant classes: {}",
                if inv.is_empty() {
                    "none".into()
                } else {
                    inv.join("; ")
                }
            );
            s
        }
    };
    Ok(out)
}

#[derive(Serialize)]
struct Check {
    check: String,
    ok: bool,
    detail: String,
}

fn validate(a: &ValidateArgs) -> Result<Outcome, CliError> {
    let inst = load(&a.common)?;
    let mut out = Outcome::default();
    let mut checks: Vec<Check> = Vec::new();
    let mut add = |check: &str, ok: bool, detail: String| {
        checks.push(Check {
            check: check.into(),
            ok,
            detail,
        })
    };
    let crit = inst
        .map
        .validate_critical_factors()
        .map_err(|e| CliError::Instance(e.into()))?;
    add(
        "critical factors divide the Jacobian",
        crit.ok,
        format!("{:?}", crit.jacobian_degree),
    );
    match inst
        .map
        .check_inverse()
        .map_err(|e| CliError::Instance(e.into()))?
    {
        Some(b) => add("inverse composes to a multiple of the identity", b, String::new()),
        None => add("inverse", true, "not given".into()),
    }
    let nmax = a.orbit.nmax.unwrap_or(inst.nmax.min(4));
    let seed = seed_of(&inst, &a.orbit, &mut out.stderr)?;
    let t = exact_table(&inst, &seed, &a.orbit, nmax, &mut out.stderr)?;
    let law = t.degree_law_violation(&inst.map);
    add(
        "degree law",
        law.is_none(),
        law.map_or(String::new(), |n| format!("fails at n = {n}")),
    );
    if let Some(sys) = &inst.affine {
        let rep = cross_validate(&t, sys, nmax, inst.alpha_chart.as_deref())?;
        add(
            "exact and affine engines agree",
            rep.agree(),
            format!(
                "{} mismatches, step failures {:?}",
                rep.mismatches.len(),
                rep.step_failures
            ),
        );
        if let Some(alpha) = &rep.alpha {
            let vals: Vec<String> = alpha.iter().map(ToString::to_string).collect();
            let chart = inst.alpha_chart.as_deref().unwrap_or("?");
            add(&format!("alpha = d - {chart}"), true, vals.join(", "));
        }
    }
    if let (Some(m), Some(im)) = (&inst.picard, &inst.picard_images) {
        let r = m.check_transcription(im);
        add(
            "Picard images",
            r.is_ok(),
            r.err().map_or(String::new(), |e| e.to_string()),
        );
    }
    if let Some(m) = &inst.picard {
        let d = degrees_from_picard(m, nmax as u32)?;
        let exact = t.degrees();
        let agree = exact.iter().zip(&d).all(|(x, y)| i64::from(*x) == *y);
        add(
            "Picard degrees match the exact engine",
            agree || a.orbit.seed.is_some(),
            format!("{d:?}"),
        );
    }
    for c in &checks {
        if !c.ok {
            out.failures.push(format!("{}: {}", c.check, c.detail));
        }
    }
    out.stdout = match a.common.format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({ "instance": inst.key, "checks": checks }))
                .expect("plain data serializes")
                + "\n"
        }
        _ => {
            let mut s = String::new();
            for c in &checks {
                let _ = write!(s, "[{}] {}", if c.ok { "ok" } else { "FAIL" }, c.check);
                if !c.detail.is_empty() {
                    let _ = write!(s, " ({})", c.detail);
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(out)
}

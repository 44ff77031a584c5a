use crate::ring_args::{build_ring, Kind, RingArgs};
use crate::{CliError, Format, SCHEMA_VERSION};
use chainring_core::chain::ChainRing;
use chainring_core::classify::chain_check;
use chainring_core::decomposition::{plan_split, Crt};
use chainring_core::ideal::Ideal;
use chainring_core::lemmas::in_t3_family;
use chainring_core::oracle::{
    describe_ideal, enumerate_ideals, lemma_sweep, verify_theorems, CensusReport, Classification, IdealRecord,
    LemmaSweep, SweepDomain,
};
use chainring_core::text::{format_chain_element, format_element, parse_element};
use chainring_core::{Error, FieldContext, RingContext, RingDescriptor};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::sync::Arc;

type Out<'a> = &'a mut dyn Write;

fn emit_json<T: Serialize>(out: Out<'_>, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn reject(format: Format, allowed: &[Format]) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("format {format:?} is not available here")))
    }
}

#[derive(Serialize)]
struct RingOut {
    schema_version: u32,
    ring: RingDescriptor,
    delta_text: String,
    size_exponent: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain: Option<bool>,
}

pub fn ring(out: Out<'_>, args: &RingArgs, format: Format) -> Result<bool, CliError> {
    reject(format, &[Format::Json, Format::Text])?;
    let r = args.build()?;
    let chain = if r.phi_irreducible() {
        Some(chain_check(&r)?.is_chain)
    } else {
        None
    };
    let rec = RingOut {
        schema_version: SCHEMA_VERSION,
        ring: r.descriptor(),
        delta_text: format_chain_element(r.chain(), r.spec().kind.delta()),
        size_exponent: r.size_exponent(),
        chain,
    };
    match format {
        Format::Json => emit_json(out, &rec)?,
        _ => {
            let d = &rec.ring;
            writeln!(out, "ring        {} p={} m={} s={} t={}", d.kind, d.p, d.m, d.s, d.t)?;
            if let Some(n) = d.n {
                writeln!(out, "n           {n}")?;
            }
            writeln!(out, "delta       {}", rec.delta_text)?;
            writeln!(out, "delta00     {:?}", d.delta00)?;
            writeln!(out, "phi         {:?} irreducible={}", d.phi, d.phi_irreducible)?;
            writeln!(out, "k           {}", d.k.map_or("none".into(), |k| k.to_string()))?;
            writeln!(out, "nilp_index  {}", d.nilp_index)?;
            writeln!(out, "size        p^{}", rec.size_exponent)?;
            writeln!(out, "chain       {}", chain.map_or("n/a".into(), |c| c.to_string()))?;
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct IdealOut {
    schema_version: u32,
    ring: RingDescriptor,
    input: Vec<String>,
    ideal: IdealRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_generators: Option<usize>,
}

fn parse_gens(
    r: &Arc<RingContext>,
    gens: &[String],
    json: Option<&str>,
) -> Result<Vec<chainring_core::QuotElement>, CliError> {
    let mut out = Vec::new();
    for g in gens {
        out.push(parse_element(r, g)?);
    }
    if let Some(src) = json {
        let rows: Vec<Vec<usize>> = serde_json::from_str(src)?;
        let f = r.field();
        for row in rows {
            let coords = row
                .into_iter()
                .map(|i| f.from_index(i))
                .collect::<Result<Vec<_>, _>>()?;
            out.push(r.from_coords(coords)?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("give at least one --gen or --gens-json".into()));
    }
    Ok(out)
}

pub fn ideal(
    out: Out<'_>,
    args: &RingArgs,
    gens: &[String],
    json: Option<&str>,
    format: Format,
) -> Result<bool, CliError> {
    reject(format, &[Format::Json, Format::Text])?;
    let r = args.build()?;
    let gens = parse_gens(&r, gens, json)?;
    let id = Ideal::span(&r, &gens)?;
    let rec = IdealOut {
        schema_version: SCHEMA_VERSION,
        ring: r.descriptor(),
        input: gens.iter().map(|g| format_element(&r, g)).collect(),
        min_generators: if r.phi_irreducible() {
            Some(id.min_generator_count()?)
        } else {
            None
        },
        ideal: describe_ideal(&id)?,
    };
    match format {
        Format::Json => emit_json(out, &rec)?,
        _ => {
            writeln!(out, "generators     {}", rec.ideal.generators.join(", "))?;
            writeln!(out, "dim            {}", rec.ideal.dim)?;
            writeln!(out, "card_exponent  {}", rec.ideal.card_exponent)?;
            if let Some(t) = &rec.ideal.torsion {
                writeln!(out, "torsion        {t:?}")?;
            }
            if let Classification::Classified(ty) = &rec.ideal.classification {
                writeln!(out, "type           {}", ty.tag)?;
            }
        }
    }
    Ok(true)
}

/// A grid of rings; unset `--delta` means every unit of `R^t`.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [2u32, 3])]
    pub p: Vec<u32>,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [1u32])]
    pub m: Vec<u32>,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [1u32])]
    pub s: Vec<u32>,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [1usize, 2, 3])]
    pub t: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [1usize, 2, 3])]
    pub n: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', num_args = 0.., default_values_t = [Kind::Constacyclic])]
    pub kind: Vec<Kind>,
    /// Units to use, separated by `;`.
    #[arg(long, value_delimiter = ';', allow_hyphen_values = true)]
    pub delta: Option<Vec<String>>,
    /// Also run the closed-form parameter sweep on eight-type rings.
    #[arg(long)]
    pub lemmas: bool,
    /// Leave per-ideal records out of the report.
    #[arg(long)]
    pub no_records: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Serialize)]
struct GridPoint {
    p: u32,
    m: u32,
    s: u32,
    t: usize,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    delta: String,
    #[serde(skip)]
    kind_arg: Kind,
}

impl GridPoint {
    fn label(&self) -> String {
        let n = self.n.map_or(String::new(), |n| format!(" n={n}"));
        format!(
            "{} p={} m={} s={} t={}{n} delta={}",
            self.kind, self.p, self.m, self.s, self.t, self.delta
        )
    }
}

fn grid_points(g: &GridArgs) -> Result<Vec<GridPoint>, CliError> {
    let mut pts = Vec::new();
    for &p in &g.p {
        for &m in &g.m {
            let field = Arc::new(FieldContext::new(p, m)?);
            for &s in &g.s {
                for &t in &g.t {
                    let chain = ChainRing::new(field.clone(), t)?;
                    let deltas: Vec<String> = match &g.delta {
                        Some(ds) => ds.clone(),
                        None => chain.units().map(|d| format_chain_element(&chain, &d)).collect(),
                    };
                    for &kind in &g.kind {
                        let ns: Vec<Option<usize>> = match kind {
                            Kind::Constacyclic => g.n.iter().map(|&n| Some(n)).collect(),
                            Kind::QuadraticTrace => vec![None],
                        };
                        for n in ns {
                            for delta in &deltas {
                                pts.push(GridPoint {
                                    p,
                                    m,
                                    s,
                                    t,
                                    kind: match kind {
                                        Kind::Constacyclic => "constacyclic",
                                        Kind::QuadraticTrace => "quadratic-trace",
                                    },
                                    n,
                                    delta: delta.clone(),
                                    kind_arg: kind,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(pts)
}

#[derive(Debug, Serialize)]
struct PointReport {
    point: GridPoint,
    passed: bool,
    census: CensusReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemmas: Option<LemmaSweep>,
}

#[derive(Debug, Serialize)]
struct Skipped {
    point: GridPoint,
    reason: String,
}

#[derive(Debug, Serialize)]
struct Failure {
    point: GridPoint,
    error: String,
}

#[derive(Debug, Serialize)]
struct VerifyOut {
    schema_version: u32,
    cap: u128,
    reports: Vec<PointReport>,
    skipped: Vec<Skipped>,
    errors: Vec<Failure>,
    passed: bool,
}

enum Outcome {
    Done(Box<PointReport>),
    Skip(String),
    Fail(String),
}

fn run_point(pt: &GridPoint, cap: u128, lemmas: bool, records: bool) -> Outcome {
    let ring = match build_ring(pt.p, pt.m, pt.s, pt.t, pt.kind_arg, pt.n.unwrap_or(1), &pt.delta, None) {
        Ok(r) => r,
        Err(e) => return Outcome::Skip(e.to_string()),
    };
    let mut census = match verify_theorems(&ring, cap) {
        Ok(c) => c,
        Err(e @ (Error::TooLarge { .. } | Error::UnsupportedParameter(_))) => return Outcome::Skip(e.to_string()),
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    if !records {
        census.records.clear();
    }
    let sweep = if lemmas && in_t3_family(&ring) {
        match lemma_sweep(&ring, SweepDomain::Relaxed) {
            Ok(s) => Some(s),
            Err(e) => return Outcome::Fail(e.to_string()),
        }
    } else {
        None
    };
    let passed = census.passed && sweep.as_ref().is_none_or(|s| s.pass());
    Outcome::Done(Box::new(PointReport {
        point: pt.clone(),
        passed,
        census,
        lemmas: sweep,
    }))
}

pub fn verify(out: Out<'_>, g: &GridArgs, cap: u128) -> Result<bool, CliError> {
    reject(g.format, &[Format::Json, Format::Text])?;
    let pts = grid_points(g)?;
    let outcomes: Vec<Outcome> = pts
        .par_iter()
        .map(|pt| run_point(pt, cap, g.lemmas, !g.no_records))
        .collect();
    let mut rep = VerifyOut {
        schema_version: SCHEMA_VERSION,
        cap,
        reports: Vec::new(),
        skipped: Vec::new(),
        errors: Vec::new(),
        passed: true,
    };
    for (pt, o) in pts.into_iter().zip(outcomes) {
        match o {
            Outcome::Done(r) => {
                rep.passed &= r.passed;
                rep.reports.push(*r);
            }
            Outcome::Skip(reason) => {
                eprintln!("skipped {}: {reason}", pt.label());
                rep.skipped.push(Skipped { point: pt, reason });
            }
            Outcome::Fail(error) => {
                rep.passed = false;
                rep.errors.push(Failure { point: pt, error });
            }
        }
    }
    match g.format {
        Format::Json => emit_json(out, &rep)?,
        _ => {
            for r in &rep.reports {
                let failed: Vec<&str> = r
                    .census
                    .assertions
                    .iter()
                    .filter(|a| !a.pass)
                    .map(|a| a.name.as_str())
                    .collect();
                let lem = match &r.lemmas {
                    Some(s) if !s.pass() => " lemmas:FAIL",
                    Some(_) => " lemmas:pass",
                    None => "",
                };
                writeln!(
                    out,
                    "{:<4} {:<52} ideals={:<6}{lem}{}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.point.label(),
                    r.census.ideal_count,
                    if failed.is_empty() {
                        String::new()
                    } else {
                        format!(" failed: {}", failed.join(","))
                    }
                )?;
            }
            for s in &rep.skipped {
                writeln!(out, "SKIP {:<52} {}", s.point.label(), s.reason)?;
            }
            for e in &rep.errors {
                writeln!(out, "ERR  {:<52} {}", e.point.label(), e.error)?;
            }
        }
    }
    Ok(rep.passed)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
struct TableRow {
    tag: Option<u8>,
    a: Option<usize>,
    b: Option<usize>,
    c: Option<usize>,
    t0: Option<usize>,
    t1: Option<usize>,
    t2: Option<usize>,
    #[serde(rename = "L")]
    l: Option<usize>,
    #[serde(rename = "M")]
    m: Option<usize>,
    #[serde(rename = "T")]
    torsion: Vec<usize>,
    card_exponent: u64,
}

#[derive(Serialize)]
struct TableOut {
    schema_version: u32,
    ring: RingDescriptor,
    rows: Vec<TableRow>,
}

pub fn table(out: Out<'_>, args: &RingArgs, format: Format, cap: u128) -> Result<bool, CliError> {
    reject(format, &[Format::Json, Format::Csv])?;
    let r = args.build()?;
    let ideals = enumerate_ideals(&r, cap)?;
    let mut rows = Vec::with_capacity(ideals.len());
    for id in &ideals {
        let rec = describe_ideal(id)?;
        let mut row = TableRow {
            tag: None,
            a: None,
            b: None,
            c: None,
            t0: None,
            t1: None,
            t2: None,
            l: None,
            m: None,
            torsion: rec.torsion.clone().unwrap_or_default(),
            card_exponent: rec.card_exponent,
        };
        if let Classification::Classified(ty) = &rec.classification {
            row.tag = Some(ty.tag);
            (row.a, row.b, row.c) = (ty.a, ty.b, ty.c);
            (row.t0, row.t1, row.t2) = (ty.t0, ty.t1, ty.t2);
            (row.l, row.m) = (ty.l, ty.m);
        }
        rows.push(row);
    }
    rows.sort();
    match format {
        Format::Json => emit_json(
            out,
            &TableOut {
                schema_version: SCHEMA_VERSION,
                ring: r.descriptor(),
                rows,
            },
        )?,
        _ => {
            let mut w = csv::Writer::from_writer(out);
            let mut header: Vec<String> = ["tag", "a", "b", "c", "t0", "t1", "t2", "L", "M"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let levels = if r.phi_irreducible() { r.t() } else { 0 };
            header.extend((0..levels).map(|i| format!("T{i}")));
            header.push("card_exponent".into());
            w.write_record(&header)?;
            let opt = |v: Option<usize>| v.map_or(String::new(), |v| v.to_string());
            for row in &rows {
                let mut rec = vec![
                    row.tag.map_or(String::new(), |t| t.to_string()),
                    opt(row.a),
                    opt(row.b),
                    opt(row.c),
                    opt(row.t0),
                    opt(row.t1),
                    opt(row.t2),
                    opt(row.l),
                    opt(row.m),
                ];
                rec.extend(row.torsion.iter().map(|t| t.to_string()));
                rec.push(row.card_exponent.to_string());
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct SplitOut {
    schema_version: u32,
    ring: RingDescriptor,
    case: String,
    phi_irreducible: bool,
    factors: Vec<RingDescriptor>,
    bezout: Vec<String>,
}

pub fn split(out: Out<'_>, args: &RingArgs, format: Format) -> Result<bool, CliError> {
    reject(format, &[Format::Json, Format::Text])?;
    let r = args.build()?;
    let plan = plan_split(&r)?;
    let (factors, bezout) = if plan.factors.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let crt = Crt::new(&r)?;
        (
            crt.components().iter().map(|c| c.descriptor()).collect(),
            crt.idempotents().iter().map(|e| format_element(&r, e)).collect(),
        )
    };
    let rec = SplitOut {
        schema_version: SCHEMA_VERSION,
        ring: r.descriptor(),
        case: plan.case.name().into(),
        phi_irreducible: r.phi_irreducible(),
        factors,
        bezout,
    };
    match format {
        Format::Json => emit_json(out, &rec)?,
        _ => {
            writeln!(out, "case     {}", rec.case)?;
            for (f, e) in rec.factors.iter().zip(&rec.bezout) {
                writeln!(out, "factor   {} delta={:?}  idempotent {e}", f.kind, f.delta)?;
            }
            if rec.factors.is_empty() {
                writeln!(out, "phi irreducible: {}", rec.phi_irreducible)?;
            }
        }
    }
    Ok(true)
}

//! Subcommand bodies. Each builds its artifacts in memory; [`Artifacts::emit`]
//! writes them only after everything has been computed.

use std::path::Path;

use anyhow::Context;
use hessbound::bounds::SCHEMA;
use hessbound::fmt::{g12, round12};
use hessbound::geometry::AspectBounds;
use hessbound::{
    af_check, exact_distance, inradius, optimize_profile, quermass, random_polygon, report,
    solve_ball_eigenvalue, solve_deps, sweep, BoundReport, ConvexBody, GridDomain, ProfileFamily,
    ReportOptions,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{polygon_of, BodySource, CommandKind, RunConfig};
use crate::svg::{bar_chart, line_chart, BarGroup, Series};
use crate::NumericalError;

/// The primary artifact (printed to stdout) plus named files for `--out`.
pub struct Artifacts {
    pub stdout: String,
    pub files: Vec<(String, String)>,
}

impl Artifacts {
    fn new(stdout: String) -> Self {
        Self {
            stdout,
            files: Vec::new(),
        }
    }

    fn file(&mut self, name: impl Into<String>, content: impl Into<String>) {
        self.files.push((name.into(), content.into()));
    }

    pub fn emit(&self, out: Option<&Path>) -> anyhow::Result<()> {
        if let Some(dir) = out {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, content) in &self.files {
                let path = dir.join(name);
                std::fs::write(&path, content)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        print!("{}", self.stdout);
        Ok(())
    }
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    match cfg.command {
        CommandKind::Quermass => cmd_quermass(cfg),
        CommandKind::Sweep => cmd_sweep(cfg),
        CommandKind::Radial => cmd_radial(cfg),
        CommandKind::Web => cmd_web(cfg),
        CommandKind::Deps => cmd_deps(cfg),
        CommandKind::Report => cmd_report(cfg),
        CommandKind::Corpus => cmd_corpus(cfg),
    }
}

/// Rounds every float to 12 significant digits so JSON output is stable.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json!(round12(n.as_f64().expect("f64 number"))),
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

fn to_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&rounded(v)).expect("JSON value serializes");
    s.push('\n');
    s
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn cmd_quermass(cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    let body = cfg.body();
    let qv = quermass(body)?;
    let af = af_check(&qv, 1e-9);
    let r = inradius(body)?;
    let doc = json!({
        "schema": SCHEMA,
        "body": body.describe(),
        "n": qv.dim,
        "W": qv.w,
        "volume": qv.volume(),
        "perimeter": qv.perimeter(),
        "inradius": r,
        "af": { "holds": af.holds(), "tol": af.tol, "pairs": af.pairs, "violations": af.violations },
    });
    let mut csv = String::from("i,W\n");
    for (i, w) in qv.w.iter().enumerate() {
        csv.push_str(&format!("{i},{}\n", g12(*w)));
    }
    let text = to_json(doc);
    let mut art = Artifacts::new(text.clone());
    art.file("quermass.json", text);
    art.file("quermass.csv", csv);
    Ok(art)
}

fn cmd_sweep(cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    let sw = sweep(cfg.body(), cfg.samples)?;
    let csv = sw.to_csv();
    let mut art = Artifacts::new(csv.clone());
    art.file("sweep.csv", csv);
    if cfg.plot {
        let series: Vec<Series> = (0..sw.dim())
            .map(|i| {
                let w0 = sw.samples()[0].quermass.w[i];
                Series {
                    label: format!("W_{i}"),
                    points: sw
                        .samples()
                        .iter()
                        .map(|s| (s.t, s.quermass.w[i] / w0))
                        .collect(),
                }
            })
            .collect();
        art.file(
            "sweep.svg",
            line_chart(
                "Inner parallel sweep",
                "t",
                "W_i(t) / W_i(0)",
                &series,
                false,
            ),
        );
    }
    Ok(art)
}

fn cmd_radial(cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    let BodySource::Ball { dim, radius } = cfg.source else {
        unreachable!("validated in RunConfig")
    };
    let profiles = cfg
        .ks
        .par_iter()
        .map(|&k| solve_ball_eigenvalue(dim, k, radius))
        .collect::<Result<Vec<_>, _>>()?;
    let summary: Vec<Value> = profiles
        .iter()
        .map(|p| {
            json!({
                "n": p.n,
                "k": p.k,
                "radius": p.radius,
                "lambda": p.lambda,
                "phi_center": p.phi[0],
                "nodes": p.r.len(),
                "ode_residual": p.ode_residual(),
            })
        })
        .collect();
    let text = to_json(json!({ "schema": SCHEMA, "radial": summary }));
    let mut art = Artifacts::new(text.clone());
    art.file("radial.json", text);
    for p in &profiles {
        art.file(format!("radial_k{}.csv", p.k), p.to_csv());
    }
    if cfg.plot {
        let series: Vec<Series> = profiles
            .iter()
            .map(|p| Series {
                label: format!("k = {}", p.k),
                points: p.r.iter().copied().zip(p.phi.iter().copied()).collect(),
            })
            .collect();
        art.file(
            "radial.svg",
            line_chart("Radial eigenfunctions", "r", "phi(r)", &series, false),
        );
    }
    Ok(art)
}

fn families(cfg: &RunConfig) -> Vec<ProfileFamily> {
    match cfg.profile {
        Some(f) => vec![f],
        None => ReportOptions::default().families,
    }
}

fn family_name(f: &ProfileFamily) -> String {
    match f {
        ProfileFamily::Power { lo, hi } => format!("power:{}:{}", g12(*lo), g12(*hi)),
        ProfileFamily::RadialComposed => "radial".into(),
    }
}

fn cmd_web(cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    let sw = sweep(cfg.body(), cfg.samples)?;
    let fams = families(cfg);
    let jobs: Vec<(usize, ProfileFamily)> = cfg
        .ks
        .iter()
        .flat_map(|&k| fams.iter().map(move |&f| (k, f)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(k, f)| optimize_profile(f, &sw, k))
        .collect();

    let mut entries = Vec::new();
    let mut csv = String::from("k,family,profile,numerator,denominator,quotient,error,failure\n");
    let mut failures = Vec::new();
    for ((k, fam), res) in jobs.iter().zip(results) {
        match res {
            Ok(r) => {
                csv.push_str(&format!(
                    "{k},{},{},{},{},{},{},\n",
                    family_name(fam),
                    csv_quote(&r.profile),
                    g12(r.numerator),
                    g12(r.denominator),
                    g12(r.quotient),
                    g12(r.error)
                ));
                entries.push(json!({ "k": k, "family": family_name(fam), "result": r }));
            }
            Err(e) => {
                failures.push(format!("k = {k}, {}: {e}", family_name(fam)));
                csv.push_str(&format!(
                    "{k},{},,,,,,{}\n",
                    family_name(fam),
                    csv_quote(&e.to_string())
                ));
                entries.push(json!({ "k": k, "family": family_name(fam), "error": e.to_string() }));
            }
        }
    }
    if failures.len() == jobs.len() {
        return Err(NumericalError(format!(
            "every web quotient failed: {}",
            failures.join("; ")
        ))
        .into());
    }
    let text = to_json(json!({ "schema": SCHEMA, "body": cfg.body().describe(), "web": entries }));
    let mut art = Artifacts::new(text.clone());
    art.file("web.json", text);
    art.file("web.csv", csv);
    Ok(art)
}

fn cmd_deps(cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    let poly = polygon_of(cfg)?;
    let h = cfg.h.expect("deps sets h");
    let domain = GridDomain::new(poly, h)?;
    let exact = exact_distance(&domain);
    let solutions = cfg
        .eps
        .par_iter()
        .map(|&eps| solve_deps(&domain, eps))
        .collect::<Result<Vec<_>, _>>()?;

    let mut csv = String::from("eps,h,nodes,sup_error,reconstruction_error,iterations,residual\n");
    let mut points = Vec::new();
    let mut art = Artifacts::new(String::new());
    for (i, s) in solutions.iter().enumerate() {
        let err = s.w.sup_distance(&exact);
        points.push((s.eps, err));
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            g12(s.eps),
            g12(h),
            domain.len(),
            g12(err),
            g12(s.reconstruction_error()),
            s.iterations,
            g12(s.residual)
        ));
        art.file(format!("deps_eps{i}.csv"), s.w.to_csv());
    }
    art.stdout = csv.clone();
    art.file("deps.csv", csv);
    art.file("distance.csv", exact.to_csv());
    if cfg.plot {
        let series = [Series {
            label: "sup |d_eps - d|".into(),
            points,
        }];
        art.file(
            "deps.svg",
            line_chart("Viscous distance error", "eps", "sup error", &series, true),
        );
    }
    Ok(art)
}

fn report_options(cfg: &RunConfig) -> ReportOptions {
    ReportOptions {
        samples: cfg.samples,
        h: cfg.h,
        families: families(cfg),
        reference: true,
    }
}

/// True when no bound at all could be computed.
fn all_failed(r: &BoundReport) -> bool {
    r.lower.value.is_none()
        && r.upper.makai.value.is_none()
        && r.upper.web.value.is_none()
        && r.upper.stability.value.is_none()
}

fn cmd_report(cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    let body = cfg.body();
    let opts = report_options(cfg);
    let results: Vec<_> = cfg
        .ks
        .iter()
        .map(|&k| (k, report(body, k, &opts)))
        .collect();

    let mut docs = Vec::new();
    let mut csv = format!("{}\n", BoundReport::csv_header());
    let mut groups = Vec::new();
    let mut failed = 0;
    for (k, res) in &results {
        match res {
            Ok(r) => {
                failed += usize::from(all_failed(r));
                docs.push(serde_json::to_value(r)?);
                csv.push_str(&r.csv_row());
                csv.push('\n');
                groups.push(BarGroup {
                    label: format!("k = {k}"),
                    bars: vec![
                        ("lower".into(), r.lower.value.as_ref().map(|l| l.value)),
                        (
                            "reference".into(),
                            r.reference
                                .as_ref()
                                .and_then(|e| e.value.as_ref())
                                .map(|v| v.value),
                        ),
                        ("web".into(), r.upper.web.value.as_ref().map(|w| w.quotient)),
                        ("makai".into(), r.upper.makai.value),
                    ],
                });
            }
            Err(e) if e.is_input_error() => return Err(e.clone().into()),
            Err(e) => {
                failed += 1;
                docs.push(json!({ "schema": SCHEMA, "k": k, "error": e.to_string() }));
            }
        }
    }
    let text = to_json(Value::Array(docs));
    let mut art = Artifacts::new(text.clone());
    art.file("report.json", text);
    art.file("report.csv", csv);
    if cfg.plot {
        art.file(
            "report.svg",
            bar_chart(&format!("Bounds for the {}", body.describe()), &groups),
        );
    }
    if failed == results.len() {
        // Annotated output is still written so the failures can be inspected.
        art.emit(cfg.out.as_deref())?;
        return Err(NumericalError("every report entry failed".into()).into());
    }
    Ok(art)
}

const CORPUS_EXTRA: &str =
    "margin_reference_lower,margin_web_reference,margin_makai_web,margin_web_lower,errors";

fn corpus_row(index: usize, seed: u64, vertices: usize, k: usize, opts: &ReportOptions) -> String {
    let prefix = format!("{index},{seed}");
    let body = random_polygon(seed, vertices, AspectBounds::default()).map(ConvexBody::Polygon);
    let rep = body.and_then(|b| report(&b, k, opts));
    let r = match rep {
        Ok(r) => r,
        Err(e) => {
            let blanks = ",".repeat(BoundReport::csv_header().split(',').count() - 3);
            return format!("{prefix},,2,{k}{blanks},,,,,{}", csv_quote(&e.to_string()));
        }
    };
    let lower = r.lower.value.as_ref().map(|l| l.value);
    let reference = r
        .reference
        .as_ref()
        .and_then(|e| e.value.as_ref())
        .map(|v| v.value);
    let web = r.upper.web.value.as_ref().map(|w| w.quotient);
    let makai = r.upper.makai.value;
    let margin = |hi: Option<f64>, lo: Option<f64>| match (hi, lo) {
        (Some(a), Some(b)) => g12(a - b),
        _ => String::new(),
    };
    let mut errors: Vec<String> = Vec::new();
    let mut note = |what: &str, e: &Option<String>| {
        if let Some(e) = e {
            errors.push(format!("{what}: {e}"));
        }
    };
    note("lower", &r.lower.error);
    note("makai", &r.upper.makai.error);
    note("web", &r.upper.web.error);
    note("stability", &r.upper.stability.error);
    if let Some(re) = &r.reference {
        note("reference", &re.error);
    }
    let errors = if errors.is_empty() {
        String::new()
    } else {
        csv_quote(&errors.join("; "))
    };
    format!(
        "{prefix},{},{},{},{},{},{}",
        r.csv_row(),
        margin(reference, lower),
        margin(web, reference),
        margin(makai, web),
        margin(web, lower),
        errors
    )
}

fn cmd_corpus(cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    let BodySource::Corpus {
        seed,
        count,
        vertices,
    } = cfg.source
    else {
        unreachable!("validated in RunConfig")
    };
    let mut opts = report_options(cfg);
    // Corpus polygons have unit area.
    opts.h.get_or_insert(1.0 / 64.0);
    let jobs: Vec<(usize, usize)> = (0..count)
        .flat_map(|i| cfg.ks.iter().map(move |&k| (i, k)))
        .collect();
    let rows: Vec<String> = jobs
        .par_iter()
        .map(|&(i, k)| corpus_row(i, seed.wrapping_add(i as u64), vertices, k, &opts))
        .collect();
    let mut csv = format!("index,seed,{},{CORPUS_EXTRA}\n", BoundReport::csv_header());
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    let mut art = Artifacts::new(csv.clone());
    art.file("corpus.csv", csv);
    Ok(art)
}

use serde_json::json;
use std::path::PathBuf;

use isoprofile::bounds::Numerics;
use isoprofile::certify::{certify_domination, DominationCertificate, DominationPlan};
use isoprofile::cylinder::CylinderProfile;
use isoprofile::geometry::SphereMetricSpec;
use isoprofile::plans::{builtin_plan, PLAN_NAMES};
use isoprofile::quad::Tolerance;
use isoprofile::reproduce::{alpha_beta_table, figure, summary, AlphaBetaRow, FigureData, FIGURE_IDS};
use isoprofile::yamabe::HeadlineRow;

use crate::output::{fmt_num, json_value, series_csv, to_csv, to_json, write_atomic, Sink};
use crate::{CertifyArgs, Cli, CliError, Command, Format, ProfileSpace, ReproduceArgs, Sampling};

/// Validated global settings.
struct RunConfig {
    num: Numerics,
    format: Option<Format>,
    out: Option<PathBuf>,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        if !(cli.tol > 0.0 && cli.tol <= 1e-4) {
            return Err(CliError::Usage(format!("--tol must lie in (0, 1e-4], got {}", cli.tol)));
        }
        if cli.grid_nodes < 2 {
            return Err(CliError::Usage(format!("--grid-nodes must be at least 2, got {}", cli.grid_nodes)));
        }
        Ok(Self {
            num: Numerics { tol: Tolerance::relative(cli.tol), grid_nodes: cli.grid_nodes },
            format: cli.format,
            out: cli.out.clone(),
        })
    }

    fn sink(&self) -> Sink {
        match &self.out {
            Some(dir) => Sink::Dir(dir.clone()),
            None => Sink::Stdout,
        }
    }

    fn echo(&self) -> serde_json::Value {
        json!({
            "tol": self.num.tol.rel,
            "grid_nodes": self.num.grid_nodes,
            "format": self.format,
            "out": self.out.as_ref().map(|p| p.display().to_string()),
        })
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    match &cli.command {
        Command::Profile { space } => profile(&cfg, space),
        Command::Certify(args) => certify(&cfg, args),
        Command::Reproduce(args) => reproduce(&cfg, args),
    }
}

fn sample_volumes(range: (f64, f64), samples: usize, interior: bool) -> Vec<f64> {
    let (lo, hi) = range;
    if interior {
        // points strictly inside, e.g. a single sample lands on the midpoint
        (1..=samples).map(|i| lo + (hi - lo) * i as f64 / (samples + 1) as f64).collect()
    } else if samples == 1 {
        vec![lo]
    } else {
        (0..samples).map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64).collect()
    }
}

fn profile(cfg: &RunConfig, space: &ProfileSpace) -> Result<(), CliError> {
    let (name, spec, points) = match space {
        ProfileSpace::Sphere { dim, mu, sampling } => {
            let spec = SphereMetricSpec::new(*dim, *mu)?;
            let volumes = volumes_for(sampling, (0.0, spec.total_volume()))?;
            let points = volumes
                .into_iter()
                .map(|v| Ok((v, spec.profile(v)?)))
                .collect::<Result<Vec<_>, isoprofile::Error>>()?;
            ("profile-sphere", json!({"space": "sphere", "dim": dim, "mu": mu}), points)
        }
        ProfileSpace::Cylinder { k, mu, sampling } => {
            isoprofile::cylinder::CylinderSpec::new(*k, *mu)?;
            let table = CylinderProfile::shared_with(*k, cfg.num.tol)?;
            let scale = mu.powf((*k as f64 + 1.0) / 2.0);
            let default = (0.0, 1.5 * scale * table.v0());
            let volumes = volumes_for(sampling, default)?;
            let points = volumes
                .into_iter()
                .map(|v| Ok((v, table.profile(*mu, v)?)))
                .collect::<Result<Vec<_>, isoprofile::Error>>()?;
            let v0 = scale * table.v0();
            ("profile-cylinder", json!({"space": "cylinder", "k": k, "mu": mu, "v0": v0}), points)
        }
    };
    let (file, body) = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => (format!("{name}.csv"), series_csv(&points)?),
        Format::Json => {
            let pts: Vec<_> = points.iter().map(|&(v, a)| json!({"volume": v, "area": a})).collect();
            (format!("{name}.json"), to_json(&json!({"spec": spec, "points": pts, "config_echo": cfg.echo()}))?)
        }
    };
    cfg.sink().emit(&file, &body)
}

fn volumes_for(sampling: &Sampling, default: (f64, f64)) -> Result<Vec<f64>, CliError> {
    if sampling.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    Ok(match sampling.range {
        Some(r) => sample_volumes(r, sampling.samples, false),
        None => sample_volumes(default, sampling.samples, true),
    })
}

fn load_plan(cfg: &RunConfig, args: &CertifyArgs) -> Result<DominationPlan, CliError> {
    let plan = match (&args.plan, &args.config) {
        (Some(name), None) => {
            if !PLAN_NAMES.contains(&name.as_str()) {
                return Err(CliError::Usage(format!("unknown plan {name:?}; known plans: {}", PLAN_NAMES.join(", "))));
            }
            builtin_plan(name, &cfg.num)?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        _ => return Err(CliError::Usage("give exactly one of --plan and --config".into())),
    };
    Ok(match args.lambda {
        Some(c) if !(c > 0.0 && c.is_finite()) => {
            return Err(CliError::Usage(format!("--lambda must be positive, got {c}")))
        }
        Some(c) => plan.with_c(c),
        None => plan,
    })
}

fn certificate_report(cert: &DominationCertificate, echo: serde_json::Value) -> Result<serde_json::Value, CliError> {
    Ok(json!({
        "plan": cert.plan,
        "claim": cert.claim,
        "subject": cert.subject,
        "c": cert.c,
        "right": json_value(&cert.right)?,
        "regimes": json_value(&cert.regimes)?,
        "status": cert.status,
        "provenance": cert.provenance,
        "config_echo": echo,
    }))
}

fn certificate_csv(cert: &DominationCertificate) -> Result<String, CliError> {
    let rows: Vec<Vec<String>> = cert
        .regimes
        .iter()
        .map(|r| {
            vec![
                fmt_num(r.interval.lo),
                r.interval.hi.map(fmt_num).unwrap_or_else(|| "inf".into()),
                r.method.to_string(),
                fmt_num(r.margin),
                fmt_num(r.relative_margin),
                fmt_num(r.witness),
                if r.passed { "pass" } else { "fail" }.to_string(),
            ]
        })
        .collect();
    to_csv(&["lo", "hi", "method", "margin", "relative_margin", "witness", "status"], &rows)
}

fn failure_message(cert: &DominationCertificate) -> String {
    match cert.first_failure() {
        Some(r) => format!(
            "certificate {} failed: {} regime on {} has margin {} at witness volume {}",
            cert.plan,
            r.method,
            r.interval,
            fmt_num(r.margin),
            fmt_num(r.witness)
        ),
        None => format!("certificate {} failed", cert.plan),
    }
}

fn certify(cfg: &RunConfig, args: &CertifyArgs) -> Result<(), CliError> {
    if args.list {
        let mut s = String::new();
        for name in PLAN_NAMES {
            let plan = builtin_plan(name, &cfg.num)?;
            s.push_str(&format!("{name}\t{}\n", plan.claim));
        }
        return cfg.sink().emit("plans.txt", &s);
    }
    let plan = load_plan(cfg, args)?;
    if args.dump_plan {
        return cfg.sink().emit(&format!("plan-{}.json", plan.id), &to_json(&plan)?);
    }
    let cert = certify_domination(&plan, &cfg.num)?;
    let mut echo = cfg.echo();
    echo["lambda_override"] = json!(args.lambda);
    echo["config_file"] = json!(args.config.as_ref().map(|p| p.display().to_string()));
    let (file, body) = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => (format!("certificate-{}.json", cert.plan), to_json(&certificate_report(&cert, echo)?)?),
        Format::Csv => (format!("certificate-{}.csv", cert.plan), certificate_csv(&cert)?),
    };
    cfg.sink().emit(&file, &body)?;
    if cert.passed() {
        Ok(())
    } else {
        Err(CliError::Failed(failure_message(&cert)))
    }
}

fn headline_csv(rows: &[HeadlineRow]) -> Result<String, CliError> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.space.clone(),
                r.k.to_string(),
                r.n.to_string(),
                fmt_num(r.mu),
                fmt_num(r.lambda),
                r.vol_ratio.map(fmt_num).unwrap_or_default(),
                fmt_num(r.branch_values.0),
                fmt_num(r.branch_values.1),
                fmt_num(r.ratio),
                fmt_num(r.reported),
                fmt_num(r.published),
                r.agrees_with_published.to_string(),
                fmt_num(r.absolute),
                r.certificate_id.clone(),
                r.theorem.clone(),
                r.implied.clone(),
            ]
        })
        .collect();
    to_csv(
        &[
            "space", "k", "n", "mu", "lambda", "vol_ratio", "curvature_term", "isoperimetric_term", "ratio", "reported",
            "published", "agrees_with_published", "absolute", "certificate_id", "theorem", "implied",
        ],
        &body,
    )
}

fn alpha_beta_csv(rows: &[AlphaBetaRow]) -> Result<String, CliError> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                fmt_num(r.alpha),
                fmt_num(r.beta),
                fmt_num(r.ratio),
                fmt_num(r.target),
                fmt_num(r.published_ratio),
                fmt_num(r.published_target),
                r.holds.to_string(),
                r.matches_published.to_string(),
            ]
        })
        .collect();
    to_csv(
        &["k", "alpha", "beta", "ratio", "target", "published_ratio", "published_target", "holds", "matches_published"],
        &body,
    )
}

/// Writes one figure's curves and returns its manifest entry.
fn write_figure(dir: &std::path::Path, fig: &FigureData, format: Format) -> Result<serde_json::Value, CliError> {
    let mut panels = Vec::new();
    for panel in &fig.panels {
        let mut curves = Vec::new();
        for (j, curve) in panel.curves.iter().enumerate() {
            let (file, body) = match format {
                Format::Csv => (format!("{}-{}.csv", panel.id, j + 1), series_csv(&curve.points)?),
                Format::Json => {
                    let pts: Vec<_> = curve.points.iter().map(|&(v, a)| json!({"volume": v, "area": a})).collect();
                    (format!("{}-{}.json", panel.id, j + 1), to_json(&pts)?)
                }
            };
            write_atomic(&dir.join(&file), &body)?;
            curves.push(json!({"label": curve.label, "file": file}));
        }
        panels.push(json!({"panel": panel.id, "range": [panel.range.0, panel.range.1], "curves": curves}));
    }
    Ok(json!({"figure": fig.id, "caption": fig.caption, "panels": panels}))
}

fn reproduce(cfg: &RunConfig, args: &ReproduceArgs) -> Result<(), CliError> {
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("reproduce-output"));
    std::fs::create_dir_all(&out)?;
    let format = cfg.format.unwrap_or(Format::Csv);
    let figures_dir = out.join("figures");

    let only = args.only.as_deref();
    let known = FIGURE_IDS.contains(&only.unwrap_or("")) || matches!(only, None | Some("headlines") | Some("alpha-beta"));
    if !known {
        return Err(CliError::Usage(format!(
            "unknown --only {:?}; expected one of {}, headlines, alpha-beta",
            only.unwrap_or(""),
            FIGURE_IDS.join(", ")
        )));
    }

    if let Some(id) = only.filter(|id| id.starts_with("fig")) {
        let fig = figure(id, args.samples, &cfg.num)?;
        let entry = write_figure(&figures_dir, &fig, format)?;
        return write_atomic(&figures_dir.join("manifest.json"), &to_json(&json!({"figures": [entry], "config_echo": cfg.echo()}))?);
    }
    if only == Some("alpha-beta") {
        let table = alpha_beta_table(&cfg.num)?;
        write_table(&out, "alpha_beta", format, &table, alpha_beta_csv)?;
        return if table.iter().all(|r| r.holds) {
            Ok(())
        } else {
            Err(CliError::Failed("an alpha/beta inequality fails".into()))
        };
    }

    let s = summary(&cfg.num)?;
    write_table(&out, "headlines", format, &s.headlines, headline_csv)?;
    if only == Some("headlines") {
        return finish(&s);
    }
    write_table(&out, "alpha_beta", format, &s.alpha_beta, alpha_beta_csv)?;
    for cert in &s.certificates {
        write_atomic(
            &out.join("certificates").join(format!("{}.json", cert.plan)),
            &to_json(&certificate_report(cert, cfg.echo())?)?,
        )?;
    }
    let mut manifest = Vec::new();
    for id in FIGURE_IDS {
        manifest.push(write_figure(&figures_dir, &figure(id, args.samples, &cfg.num)?, format)?);
    }
    write_atomic(&figures_dir.join("manifest.json"), &to_json(&json!({"figures": manifest, "config_echo": cfg.echo()}))?)?;

    let status = if certification_ok(&s) { "pass" } else { "fail" };
    let report = json!({
        "status": status,
        "criteria": json_value(&s.criteria)?,
        "headline_ratios": s.headlines.iter().map(|r| json!({"space": r.space, "ratio": r.ratio, "reported": r.reported})).collect::<Vec<_>>(),
        "certificates": s.certificates.iter().map(|c| json!({"plan": c.plan, "status": c.status})).collect::<Vec<_>>(),
        "config_echo": cfg.echo(),
    });
    write_atomic(&out.join("summary.json"), &to_json(&report)?)?;
    finish(&s)
}

fn certification_ok(s: &isoprofile::reproduce::Summary) -> bool {
    s.certificates.iter().all(|c| c.passed()) && s.headlines.len() == 5 && s.alpha_beta.iter().all(|r| r.holds)
}

fn finish(s: &isoprofile::reproduce::Summary) -> Result<(), CliError> {
    for c in &s.criteria {
        eprintln!("criterion {}: {} ({})", c.id, if c.passed { "pass" } else { "FAIL" }, c.detail);
    }
    if certification_ok(s) {
        Ok(())
    } else {
        Err(CliError::Failed("certification failed; see summary.json".into()))
    }
}

fn write_table<T: serde::Serialize>(
    dir: &std::path::Path,
    name: &str,
    format: Format,
    rows: &[T],
    csv: fn(&[T]) -> Result<String, CliError>,
) -> Result<(), CliError> {
    match format {
        Format::Csv => write_atomic(&dir.join(format!("{name}.csv")), &csv(rows)?),
        Format::Json => write_atomic(&dir.join(format!("{name}.json")), &to_json(&rows)?),
    }
}

use std::fmt;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use serde_json::json;

use cliffhopf::conformal::{conformality, mobius, MapSpec, Paravector};
use cliffhopf::hopfalg::hopf_check;
use cliffhopf::kappagen::{suite, SUITE_NAMES};
use cliffhopf::relcheck::{eval_str, fit, Env, EvalConfig, FitConfig, FitFamily};
use cliffhopf::{BasisKind, Deformation, RelationSuite, Signature, Tolerance};

use crate::config::{resolve_tol, FileConfig, Format};
use crate::{Cli, Command, ConformalCommand, EvalOpts, FitArgs, MapArgs};

/// A failed command; always exit status 2.
#[derive(Debug)]
pub struct Failure {
    kind: String,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            kind: "Usage".into(),
            message: message.into(),
        }
    }
}

impl From<cliffhopf::Error> for Failure {
    fn from(e: cliffhopf::Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric())
            .collect();
        Failure {
            kind,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn error_json(kind: &str, message: &str) -> String {
    json!({"error": {"kind": kind, "message": message}}).to_string()
}

type Outcome = Result<(String, bool), Failure>;

struct Ctx {
    json: bool,
    tol: Option<f64>,
    file: FileConfig,
}

pub fn run(cli: Cli) -> ExitCode {
    let file = match FileConfig::load(cli.config.as_deref()) {
        Ok(f) => f,
        Err(msg) => return fail(cli.json, &Failure::usage(msg)),
    };
    let json = cli.json || file.format == Some(Format::Json);
    let tol = match resolve_tol(cli.tol, &file) {
        Ok(t) => t,
        Err(msg) => return fail(json, &Failure::usage(msg)),
    };
    let ctx = Ctx { json, tol, file };
    match dispatch(&ctx, cli.command) {
        Ok((out, ok)) => {
            if !out.is_empty() {
                println!("{}", out.trim_end());
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(json, &e),
    }
}

fn fail(json: bool, e: &Failure) -> ExitCode {
    if json {
        eprintln!("{}", error_json(&e.kind, &e.message));
    } else {
        eprintln!("error: {e}");
    }
    ExitCode::from(2)
}

fn dispatch(ctx: &Ctx, cmd: Command) -> Outcome {
    match cmd {
        Command::Eval(a) => cmd_eval(ctx, &a.expr, a.sig.as_deref(), a.basis.as_deref(), &a.opts),
        Command::Verify(a) => cmd_verify(ctx, &a.suite, &a.opts, a.timestamp),
        Command::HopfCheck { sig } => cmd_hopf(ctx, sig.as_deref()),
        Command::Conformal(c) => cmd_conformal(ctx, c),
        Command::Fit(a) => cmd_fit(ctx, &a),
        Command::ExportSuite {
            name,
            output,
            kappa,
        } => cmd_export(ctx, &name, &output, kappa),
    }
}

fn tolerance(ctx: &Ctx) -> Result<Tolerance, Failure> {
    Ok(ctx.tol.map(Tolerance::new).transpose()?.unwrap_or_default())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn eval_config(ctx: &Ctx, opts: &EvalOpts, sig: &Arc<Signature>) -> Result<EvalConfig, Failure> {
    let mut cfg = EvalConfig {
        tol: tolerance(ctx)?,
        ..Default::default()
    };
    if let Some(path) = opts.deform.as_deref().or(ctx.file.deform.as_deref()) {
        cfg.deformation = Some(Deformation::from_json(&read(path)?, Some(sig))?);
    }
    if let Some(m) = opts.mode {
        cfg.deform_mode = m.into();
    }
    if let Some(m) = opts.coproduct {
        cfg.coproduct_mode = m.into();
    }
    if let Some(m) = opts.tensor {
        cfg.tensor_mode = m.into();
    }
    Ok(cfg)
}

fn cmd_eval(
    ctx: &Ctx,
    expr: &str,
    sig: Option<&str>,
    basis: Option<&str>,
    opts: &EvalOpts,
) -> Outcome {
    let kappa = opts.kappa.or(ctx.file.kappa);
    let env = match basis {
        Some(b) => {
            let kind: BasisKind = b.parse()?;
            let cfg = eval_config(ctx, opts, &Signature::cl13())?;
            Env::for_basis(kind, kappa, cfg)?
        }
        None => {
            let sig = Signature::preset(sig.or(ctx.file.sig.as_deref()).unwrap_or("cl13"))?;
            let cfg = eval_config(ctx, opts, &sig)?;
            if *sig == *Signature::cl13() {
                Env::for_basis(BasisKind::Conformal, kappa, cfg)?
            } else {
                Env::bare(&sig, kappa, cfg)?
            }
        }
    };
    let value = eval_str(expr, &env)?;
    let out = if ctx.json {
        serde_json::to_string_pretty(
            &json!({"expr": expr, "kind": value.kind(), "value": value.to_json()}),
        )
        .expect("json value")
    } else {
        value.to_string()
    };
    Ok((out, true))
}

fn load_suite(name: &str, kappa: Option<f64>) -> Result<RelationSuite, Failure> {
    if SUITE_NAMES.contains(&name) {
        return Ok(suite(name, kappa)?);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(cliffhopf::Error::UnknownSuite(name.to_string()).into());
    }
    let mut s = RelationSuite::load(path)?;
    if let Some(k) = kappa {
        s.parameters.insert("kappa".into(), k);
    }
    Ok(s)
}

fn cmd_verify(ctx: &Ctx, name: &str, opts: &EvalOpts, timestamp: Option<String>) -> Outcome {
    let s = load_suite(name, opts.kappa.or(ctx.file.kappa))?;
    let kappa = s.parameters.get("kappa").copied();
    let cfg = eval_config(ctx, opts, &Signature::cl13())?;
    let env = Env::for_basis(s.basis, kappa, cfg)?;
    let mut report = cliffhopf::relcheck::run(&s, &env);
    if let Some(ts) = timestamp {
        report = report.with_timestamp(ts);
    }
    let out = if ctx.json {
        report.to_json()
    } else {
        report.to_string()
    };
    Ok((out, report.success()))
}

fn cmd_hopf(ctx: &Ctx, sig: Option<&str>) -> Outcome {
    let sig = Signature::preset(sig.or(ctx.file.sig.as_deref()).unwrap_or("cl13"))?;
    let r = hopf_check(&sig)?;
    let out = if ctx.json {
        serde_json::to_string_pretty(&json!({"report": r, "max_residual": r.max_residual()}))
            .expect("json value")
    } else {
        format!("{r}max residual {:.3e}", r.max_residual())
    };
    Ok((out, true))
}

fn parse_point(text: &str) -> Result<Paravector, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Failure::usage(format!("point must be \"x0,x1,x2,x3\", got '{text}'"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let mut x = [0.0; 4];
    for (slot, p) in x.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| bad())?;
    }
    Ok(Paravector::from_coords(x))
}

fn parse_map(text: &str) -> Result<MapSpec, Failure> {
    let body = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        read(Path::new(text))?
    };
    serde_json::from_str(&body).map_err(|e| Failure::usage(format!("map: {e}")))
}

fn coords_text(x: &Paravector) -> String {
    x.coords()
        .map(|v| if v == 0.0 { 0.0 } else { v })
        .map(|v| v.to_string())
        .join(",")
}

fn cmd_conformal(ctx: &Ctx, cmd: ConformalCommand) -> Outcome {
    let tol = tolerance(ctx)?;
    let (args, step): (MapArgs, Option<f64>) = match cmd {
        ConformalCommand::Apply(m) => (m, None),
        ConformalCommand::Conformality { map, step } => (map, Some(step)),
    };
    let g = parse_map(&args.map)?.build()?;
    let x = parse_point(&args.x)?;
    let out = match step {
        None => {
            let r = mobius(&g, &x, tol)?;
            if ctx.json {
                json!({"x": x.coords(), "x_prime": r.x_prime.coords(), "delta": r.delta})
                    .to_string()
            } else {
                format!("x' = {}\nDelta = {}", coords_text(&r.x_prime), r.delta)
            }
        }
        Some(h) => {
            let c = conformality(&g, &x, h, tol)?;
            if ctx.json {
                json!({"x": x.coords(), "lambda": c.lambda, "residual": c.residual, "step": h})
                    .to_string()
            } else {
                format!("lambda = {}\nresidual = {:e}", c.lambda, c.residual)
            }
        }
    };
    Ok((out, true))
}

fn cmd_fit(ctx: &Ctx, a: &FitArgs) -> Outcome {
    let s = load_suite(&a.suite, a.kappa.or(ctx.file.kappa))?;
    let family: FitFamily = a.family.parse()?;
    let mut cfg = FitConfig {
        kappa: s.parameters.get("kappa").copied(),
        ..Default::default()
    };
    cfg.eval.tol = tolerance(ctx)?;
    if let Some(n) = a.max_iter {
        cfg.max_iter = n;
    }
    if let Some(seed) = a.seed.or(ctx.file.seed) {
        cfg.seed = seed;
    }
    if let Some(r) = a.restarts {
        cfg.restarts = r;
    }
    if let Some(m) = a.mode {
        cfg.eval.deform_mode = m.into();
    }
    let r = fit(&s, family, &cfg)?;
    let out = if ctx.json {
        serde_json::to_string_pretty(&r).expect("fit result serializes")
    } else {
        let mut lines = vec![
            format!("suite {}", s.name),
            format!("objective {:e}", r.objective),
            format!("iterations {}", r.iterations),
            format!("converged {}", r.converged),
            "A =".to_string(),
        ];
        let n = r.deformation.signature().dim();
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| cliffhopf::mvcore::format_complex(r.deformation.a(i, j)))
                .collect();
            lines.push(format!("  [{}]", row.join(", ")));
        }
        lines.join("\n")
    };
    Ok((out, true))
}

fn cmd_export(ctx: &Ctx, name: &str, output: &Path, kappa: Option<f64>) -> Outcome {
    let s = suite(name, kappa.or(ctx.file.kappa))?;
    s.save(output)?;
    let out = if ctx.json {
        json!({"suite": s.name, "rows": s.row_count(), "path": output.display().to_string()})
            .to_string()
    } else {
        format!(
            "wrote {} ({} relations, {} rows) to {}",
            s.name,
            s.relations.len(),
            s.row_count(),
            output.display()
        )
    };
    Ok((out, true))
}

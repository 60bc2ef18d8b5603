use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use heightkit::poly::{int, Rational};
use heightkit::report::{decay_json, error_json, small_param_json, sublevel_json, Analysis, AnalysisReport};
use heightkit::verify::{
    flat_preset_fit, oscillatory_decay_fit, small_param_bound_check, sublevel_exponent_fit, Bump, DecayOptions,
    SmallParamKind, SmallParamOptions, SublevelOptions,
};
use heightkit::{report, Error};

#[derive(Parser, Debug)]
#[command(name = "heightkit", version, about = "Height and adapted coordinates of bivariate phases")]
struct Cli {
    /// Write the JSON report here ("-" for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Include the step trace of the adaptation.
    #[arg(long, global = true)]
    trace: bool,
    /// Seed for the randomized sublevel sampler.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact Newton data and adapted coordinates.
    Analyze {
        expr: String,
        /// Subtract the constant term first.
        #[arg(long)]
        shift: bool,
    },
    /// Fit the decay exponent of the oscillatory integral against -1/h.
    VerifyDecay {
        expr: String,
        /// Largest frequency, e.g. 2048 or 2^11.
        #[arg(long, value_parser = parse_lmax, default_value = "2^11")]
        lmax: f64,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
        /// Fit with a free log log(lambda) term.
        #[arg(long)]
        loglog: bool,
        /// Bump radius.
        #[arg(long, default_value_t = 0.75)]
        r0: f64,
        /// Use a tensor bump instead of a radial one.
        #[arg(long)]
        tensor: bool,
        #[arg(long, default_value_t = 4)]
        ppd: u32,
        /// Replace x1 by -x1.
        #[arg(long)]
        mirror: bool,
        /// Integrate over x1 >= 0 only.
        #[arg(long)]
        half_plane: bool,
        /// Override the expected height, e.g. 6/5.
        #[arg(long, value_parser = parse_rational)]
        expect_h: Option<Rational>,
    },
    /// Fit the sublevel-set exponent against 1/h.
    VerifySublevel {
        /// Omit together with --flat for the flat preset.
        expr: Option<String>,
        /// Half-width of the sampling window.
        #[arg(long, default_value_t = 1.0)]
        window: f64,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
        #[arg(long)]
        loglog: bool,
        /// Samples per side on the coarse grid.
        #[arg(long, default_value_t = 4096)]
        resolution: usize,
        /// Skip the doubled-resolution pass.
        #[arg(long)]
        no_refine: bool,
        /// Largest level as a power of ten, e.g. 2 for 1e-2.
        #[arg(long, default_value_t = 2)]
        eps_from: u32,
        /// Smallest level as a power of ten.
        #[arg(long, default_value_t = 6)]
        eps_to: u32,
        #[arg(long)]
        mirror: bool,
        #[arg(long)]
        half_plane: bool,
        /// Flat preset x2^2 + exp(-|x1|^-alpha).
        #[arg(long, value_name = "ALPHA")]
        flat: Option<f64>,
        #[arg(long, value_parser = parse_rational)]
        expect_h: Option<Rational>,
    },
    /// Uniform bounds for the small-parameter families.
    VerifySmallparam {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    #[value(name = "81")]
    NonDegenerate,
    #[value(name = "82")]
    Airy,
    #[value(name = "83")]
    DegenerateAiry,
}

fn parse_lmax(s: &str) -> Result<f64, String> {
    let v = match s.split_once('^') {
        Some((b, e)) => {
            let b: f64 = b.trim().parse().map_err(|_| format!("bad base in {s:?}"))?;
            let e: i32 = e.trim().parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            b.powi(e)
        }
        None => s.trim().parse().map_err(|_| format!("expected a number or 2^k, got {s:?}"))?,
    };
    if v.is_finite() && v > 1.0 {
        Ok(v)
    } else {
        Err(format!("lmax must exceed 1, got {s}"))
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let r: Rational = s.trim().parse().map_err(|_| format!("expected p or p/q, got {s:?}"))?;
    if r > int(0) {
        Ok(r)
    } else {
        Err("must be positive".into())
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_parse_error() || matches!(e, Error::InvalidInput(_)) {
        1
    } else if e.is_numeric() {
        3
    } else {
        2
    }
}

struct Outcome {
    json: Value,
    summary: String,
    pass: bool,
}

fn analysis(expr: &str, shift: bool) -> Result<Analysis, Error> {
    report::analyze_poly(expr, report::parse_phase(expr, shift)?)
}

fn analysis_summary(a: &Analysis) -> String {
    let r = &a.adapted;
    let mut s = format!(
        "phi        = {}\ndistance   = {}\nadapted    = {}\nsigma      = {}\nheight     = {}\nbeta=gamma = {}\npsi        = {}",
        a.poly,
        a.newton.distance,
        r.steps.is_empty() && !r.swapped,
        r.sigma(),
        r.height,
        a.index(),
        a.jet.psi,
    );
    for w in &a.warnings {
        s.push_str(&format!("\nwarning: {w}"));
    }
    s
}

fn fit_line(kind: &str, f: &heightkit::verify::ExponentFit) -> String {
    format!(
        "{kind}: fitted {:.4} expected {} tol {} -> {}",
        f.used_exponent(),
        f.expected,
        f.tolerance,
        if f.pass { "PASS" } else { "FAIL" }
    )
}

fn run(cli: &Cli) -> Result<Outcome, (Option<String>, Error)> {
    match &cli.command {
        Command::Analyze { expr, shift } => {
            let a = analysis(expr, *shift).map_err(|e| (Some(expr.clone()), e))?;
            Ok(Outcome { json: AnalysisReport::new(&a, cli.trace).to_json(), summary: analysis_summary(&a), pass: true })
        }
        Command::VerifyDecay { expr, lmax, tol, loglog, r0, tensor, ppd, mirror, half_plane, expect_h } => {
            let fail = |e| (Some(expr.clone()), e);
            let a = analysis(expr, false).map_err(fail)?;
            let h = expect_h.clone().unwrap_or_else(|| a.adapted.height.clone());
            let opts = DecayOptions {
                bump: if *tensor { Bump::Tensor { r0: *r0 } } else { Bump::Radial { r0: *r0 } },
                lambda_max: *lmax,
                points_per_decade: *ppd,
                tolerance: *tol,
                log_model: *loglog,
                mirror: *mirror,
                half_plane: *half_plane,
                ..DecayOptions::default()
            };
            let d = oscillatory_decay_fit(&a.poly, &h, &opts).map_err(fail)?;
            let mut rep = AnalysisReport::new(&a, cli.trace);
            rep.verify = Some(decay_json(&d));
            let pass = d.fit.pass && d.bounded_by_mass;
            let summary = format!("{}\n{}", analysis_summary(&a), fit_line("decay", &d.fit));
            Ok(Outcome { json: rep.to_json(), summary, pass })
        }
        Command::VerifySublevel {
            expr,
            window,
            tol,
            loglog,
            resolution,
            no_refine,
            eps_from,
            eps_to,
            mirror,
            half_plane,
            flat,
            expect_h,
        } => {
            if eps_to <= eps_from {
                return Err((expr.clone(), Error::InvalidInput("--eps-to must exceed --eps-from".into())));
            }
            let opts = SublevelOptions {
                half_width: *window,
                resolution: *resolution,
                refine: !no_refine,
                seed: cli.seed,
                eps_grid: heightkit::verify::eps_grid(*eps_from, *eps_to, 4),
                tolerance: *tol,
                log_model: *loglog,
                mirror: *mirror,
                half_plane: *half_plane,
            };
            match (expr, flat) {
                (None, Some(alpha)) => {
                    let s = flat_preset_fit(*alpha, &opts).map_err(|e| (None, e))?;
                    let json = json!({
                        "input": format!("x2^2 + exp(-|x1|^-{alpha})"),
                        "indices": { "h": "2", "beta": "1/2", "gamma": "1/2" },
                        "verify": sublevel_json(&s),
                        "warnings": [],
                    });
                    Ok(Outcome { json, summary: fit_line("sublevel", &s.fit), pass: s.fit.pass })
                }
                (Some(expr), None) => {
                    let fail = |e| (Some(expr.clone()), e);
                    let a = analysis(expr, false).map_err(fail)?;
                    let h = expect_h.clone().unwrap_or_else(|| a.adapted.height.clone());
                    let s = sublevel_exponent_fit(&a.poly, &h, &opts).map_err(fail)?;
                    let mut rep = AnalysisReport::new(&a, cli.trace);
                    rep.verify = Some(sublevel_json(&s));
                    let summary = format!("{}\n{}", analysis_summary(&a), fit_line("sublevel", &s.fit));
                    Ok(Outcome { json: rep.to_json(), summary, pass: s.fit.pass })
                }
                _ => Err((None, Error::InvalidInput("give either an expression or --flat ALPHA".into()))),
            }
        }
        Command::VerifySmallparam { kind, m } => {
            let kind = match kind {
                Kind::NonDegenerate => SmallParamKind::NonDegenerate { m: *m },
                Kind::Airy => SmallParamKind::Airy,
                Kind::DegenerateAiry => SmallParamKind::DegenerateAiry { m: *m },
            };
            if kind.m() < 2 {
                return Err((None, Error::InvalidInput("--m must be at least 2".into())));
            }
            let r = small_param_bound_check(kind, &SmallParamOptions::default()).map_err(|e| (None, e))?;
            let v = small_param_json(&r);
            let pass = v["pass"].as_bool().unwrap_or(false);
            let mut summary = format!(
                "kind {} m {}: block maxima {:?} stable {} bounded {}",
                kind.label(),
                r.m,
                r.block_max.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>(),
                r.stable,
                r.bounded_by_mass
            );
            if let Some(f) = &r.sigma_zero_fit {
                summary.push('\n');
                summary.push_str(&fit_line("decay at sigma=0", f));
            }
            summary.push_str(if pass { "\nPASS" } else { "\nFAIL" });
            let json = json!({
                "input": format!("smallparam {} m={}", kind.label(), r.m),
                "verify": v,
                "warnings": [],
            });
            Ok(Outcome { json, summary, pass })
        }
    }
}

fn emit(path: &Option<PathBuf>, v: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v).expect("json") + "\n";
    match path {
        Some(p) if p.as_os_str() == "-" => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let to_stdout = cli.json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    let (value, code) = match run(&cli) {
        Ok(o) => {
            if !to_stdout {
                println!("{}", o.summary);
            }
            (o.json, if o.pass { 0 } else { 3 })
        }
        Err((input, e)) => {
            eprintln!("error [{}]: {e}", e.code());
            (error_json(input.as_deref(), &e), exit_code(&e))
        }
    };
    if let Err(e) = emit(&cli.json, &value) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}

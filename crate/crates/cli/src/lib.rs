//! Command-line front end for the `sierpinski_knopp` crate.
//!
//! [`run`] parses arguments and writes to the given streams so that the
//! binary and the tests share one code path. Exit codes: 0 on success, 1 on
//! usage, parse or domain errors, 2 when a table fails certification.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use sierpinski_knopp::certify::{certify, export_table, load_table, Encoding};
use sierpinski_knopp::curve::{evaluate, evaluate_real, fraction_at, tiling, Point};
use sierpinski_knopp::exact::{parse_depth_budget, DEPTH_BUDGET_ENV};
use sierpinski_knopp::extremal::treug_search;
use sierpinski_knopp::metrics::{locality_certified, locality_dyadic, slr, LocalityReport};
use sierpinski_knopp::rivals::{rival_locality, RivalCurveId};
use sierpinski_knopp::{Dyadic, Error, ExactRatio};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNCERTIFIED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "sk", version, about = "Exact analysis of the Sierpinski-Knopp curve")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the curve at a dyadic time, or approximate it at a real one.
    Eval(EvalArgs),
    /// Square-to-linear ratio of two times.
    Slr {
        #[arg(long, allow_hyphen_values = true)]
        t1: Dyadic,
        #[arg(long, allow_hyphen_values = true)]
        t2: Dyadic,
    },
    /// Exhaustive or certified locality at one or more depths.
    Locality {
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        depth: Vec<u32>,
        /// Branch-and-bound upper bound instead of the exhaustive search.
        #[arg(long)]
        certified: bool,
        /// CSV with columns depth,attained_max,certified_upper.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Certify a candidate table (exit 2 when it fails).
    Certify {
        #[arg(long)]
        input: PathBuf,
        /// Tolerance on squared distances, dyadic (`1/2^40`) or decimal (`1e-12`).
        #[arg(long)]
        tol: Option<String>,
    },
    /// List the fractions of one order.
    Tiling {
        #[arg(long)]
        order: u32,
    },
    /// Render the traversal of the fractions of one order as SVG.
    Render {
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, default_value_t = 800)]
        size: u32,
        /// Draw the fraction outlines.
        #[arg(long)]
        subdivision: bool,
        /// Omit the arrowhead on the final segment.
        #[arg(long)]
        no_arrow: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive locality of a comparison curve.
    Rival {
        #[arg(long, default_value = "hilbert")]
        curve: RivalCurveId,
        #[arg(long)]
        depth: u32,
    },
    /// Largest triangle with hypotenuse at most 2 and legs with a^2 + b^2 <= 4.
    Extremal {
        #[arg(long, default_value_t = 2000)]
        resolution: u32,
    },
    /// Write the reference curve's samples as a candidate table.
    ExportTable {
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value = "dyadic")]
        encoding: Encoding,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Dyadic time such as `3/2^4`.
    #[arg(long, conflicts_with = "real", required_unless_present = "real")]
    t: Option<Dyadic>,
    /// Real time in [0, 1].
    #[arg(long, requires = "depth")]
    real: Option<f64>,
    /// Subdivision depth used for `--real`.
    #[arg(long)]
    depth: Option<u32>,
}

/// Parameters of the traversal figure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RenderSpec {
    pub order: u32,
    pub canvas_size: u32,
    pub show_subdivision: bool,
    pub arrow_at_end: bool,
}

impl RenderSpec {
    pub fn new(order: u32, canvas_size: u32) -> Self {
        RenderSpec {
            order,
            canvas_size,
            show_subdivision: false,
            arrow_at_end: true,
        }
    }
}

/// Polyline through the centroids of the `2^order` fractions in time order.
pub fn render_traversal_svg(spec: &RenderSpec) -> sierpinski_knopp::Result<String> {
    if spec.order < 1 {
        return Err(Error::Domain("render order must be at least 1".into()));
    }
    if spec.canvas_size < 64 {
        return Err(Error::Domain(format!(
            "canvas size {} is below 64",
            spec.canvas_size
        )));
    }
    let tiles = tiling(spec.order)?;
    let w = f64::from(spec.canvas_size);
    let margin = w / 32.0;
    let unit = (w - 2.0 * margin) / 2.0;
    let h = unit + 2.0 * margin;
    let map = |x: f64, y: f64| (margin + x * unit, h - margin - y * unit);
    let pt = |p: &Point| {
        let (x, y) = p.to_f64();
        map(x, y)
    };
    let stroke = (w / 400.0).max(1.0);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h:.0}" viewBox="0 0 {w} {h:.3}">"#
    );
    if spec.arrow_at_end {
        let _ = writeln!(
            s,
            r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="8" markerHeight="8" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="black"/></marker></defs>"#
        );
    }
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let polygon = |s: &mut String, corners: [&Point; 3], style: &str| {
        let pts: Vec<String> = corners
            .iter()
            .map(|p| {
                let (x, y) = pt(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon points="{}" {style}/>"#, pts.join(" "));
    };
    if spec.show_subdivision {
        let thin = format!(r#"fill="none" stroke="gray" stroke-width="{:.3}""#, stroke / 2.0);
        for f in &tiles {
            polygon(&mut s, f.vertices(), &thin);
        }
    }
    let root = fraction_at(0, 0)?;
    let outline = format!(r#"fill="none" stroke="black" stroke-width="{stroke:.3}""#);
    polygon(&mut s, root.vertices(), &outline);

    let path: Vec<String> = tiles
        .iter()
        .map(|f| {
            let (cx, cy) = f.centroid_f64();
            let (x, y) = map(cx, cy);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let marker = if spec.arrow_at_end { r#" marker-end="url(#arrow)""# } else { "" };
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="{:.3}" stroke-dasharray="{:.3},{:.3}"{marker}/>"#,
        path.join(" "),
        stroke,
        4.0 * stroke,
        2.0 * stroke
    );
    s.push_str("</svg>\n");
    Ok(s)
}

fn approx(d: &Dyadic) -> String {
    format!("{}", d.to_f64())
}

fn point_text(p: &Point) -> String {
    format!("{p} ~ ({}, {})", approx(&p.x), approx(&p.y))
}

fn ratio_text(r: &ExactRatio) -> String {
    format!("{r} ~ {}", r.to_f64())
}

fn report_text(r: &LocalityReport) -> String {
    let mut s = format!(
        "{} depth {}: attained max {} at (t1, t2) = ({}, {})",
        r.curve,
        r.depth,
        ratio_text(&r.attained_max),
        r.witness.t1,
        r.witness.t2
    );
    if let Some(u) = &r.certified_upper {
        let _ = write!(s, ", certified upper bound {}", ratio_text(u));
    }
    s
}

fn parse_tolerance(text: &str) -> sierpinski_knopp::Result<Dyadic> {
    match text.parse::<Dyadic>() {
        Ok(d) => Ok(d),
        Err(_) => Dyadic::from_decimal(text, 128).map(|(d, _)| d),
    }
}

fn check_budget_env() -> sierpinski_knopp::Result<()> {
    match std::env::var(DEPTH_BUDGET_ENV) {
        Ok(raw) if parse_depth_budget(&raw).is_none() => Err(Error::Parse(format!(
            "{DEPTH_BUDGET_ENV}={raw:?} is not a depth budget in 0..=127"
        ))),
        _ => Ok(()),
    }
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> sierpinski_knopp::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn write_output(
    out: &mut dyn Write,
    path: Option<&PathBuf>,
    text: &str,
) -> sierpinski_knopp::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> sierpinski_knopp::Result<i32> {
    let json = cli.json;
    match cli.command {
        Command::Eval(EvalArgs { t: Some(t), .. }) => {
            let p = evaluate(&t)?;
            if json {
                emit_json(out, &json!({ "t": t, "point": p }))?;
            } else {
                writeln!(out, "{}", point_text(&p))?;
            }
        }
        Command::Eval(EvalArgs { real, depth, .. }) => {
            let (t, depth) = (real.unwrap_or_default(), depth.unwrap_or_default());
            let (p, bound) = evaluate_real(t, depth)?;
            if json {
                emit_json(
                    out,
                    &json!({ "t": t, "depth": depth, "point": p, "error_bound_sq": bound }),
                )?;
            } else {
                writeln!(
                    out,
                    "{}, squared error at most {bound} ~ {}",
                    point_text(&p),
                    approx(&bound)
                )?;
            }
        }
        Command::Slr { t1, t2 } => {
            let r = slr(&t1, &t2)?;
            if json {
                emit_json(out, &json!({ "t1": t1, "t2": t2, "slr": r }))?;
            } else {
                writeln!(out, "{}", ratio_text(&r))?;
            }
        }
        Command::Locality {
            depth,
            certified,
            csv,
        } => {
            let reports = depth
                .iter()
                .map(|&d| {
                    if certified {
                        locality_certified(d)
                    } else {
                        locality_dyadic(d)
                    }
                })
                .collect::<sierpinski_knopp::Result<Vec<_>>>()?;
            if json {
                emit_json(out, &reports)?;
            } else if csv {
                writeln!(out, "depth,attained_max,certified_upper")?;
                for r in &reports {
                    let upper = r
                        .certified_upper
                        .as_ref()
                        .map_or_else(|| "none".to_string(), ToString::to_string);
                    writeln!(out, "{},{},{}", r.depth, r.attained_max, upper)?;
                }
            } else {
                for r in &reports {
                    writeln!(out, "{}", report_text(r))?;
                }
            }
        }
        Command::Certify { input, tol } => {
            let table = load_table(&input)?;
            let tol = match tol {
                Some(text) => parse_tolerance(&text)?,
                None => table.default_tolerance(),
            };
            let verdict = certify(&table, &tol)?;
            if json {
                emit_json(out, &verdict)?;
            } else {
                writeln!(out, "{}", if verdict.pass { "PASS" } else { "FAIL" })?;
                writeln!(out, "{}", verdict.statement)?;
                if let Some(v) = &verdict.first_violation {
                    writeln!(out, "first violation: {v}")?;
                    writeln!(out, "indices: {:?}", v.indices)?;
                }
                if let Some(iso) = &verdict.isometry {
                    writeln!(out, "isometry: {iso}")?;
                }
            }
            if !verdict.pass {
                return Ok(EXIT_UNCERTIFIED);
            }
        }
        Command::Tiling { order } => {
            let tiles = tiling(order)?;
            if json {
                emit_json(out, &tiles)?;
            } else {
                for f in &tiles {
                    writeln!(
                        out,
                        "{} [{}, {}] entry {} right {} exit {}",
                        f.index,
                        f.time_start(),
                        f.time_end(),
                        f.entry,
                        f.right,
                        f.exit
                    )?;
                }
            }
        }
        Command::Render {
            order,
            size,
            subdivision,
            no_arrow,
            output,
        } => {
            let spec = RenderSpec {
                order,
                canvas_size: size,
                show_subdivision: subdivision,
                arrow_at_end: !no_arrow,
            };
            let svg = render_traversal_svg(&spec)?;
            write_output(out, output.as_ref(), &svg)?;
        }
        Command::Rival { curve, depth } => {
            let r = rival_locality(curve, depth)?;
            if json {
                emit_json(out, &r)?;
            } else {
                writeln!(out, "{}", report_text(&r))?;
            }
        }
        Command::Extremal { resolution } => {
            let r = treug_search(resolution)?;
            if json {
                emit_json(out, &r)?;
            } else {
                writeln!(
                    out,
                    "max area {} at sides ({}, {}, {}), resolution {}",
                    r.max_area, r.argmax.a, r.argmax.b, r.argmax.c, r.resolution
                )?;
            }
        }
        Command::ExportTable {
            depth,
            encoding,
            output,
        } => {
            let table = export_table(depth, encoding)?;
            let mut text = serde_json::to_string(&table)?;
            text.push('\n');
            write_output(out, output.as_ref(), &text)?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_ERROR
                }
            };
        }
    };
    if let Err(e) = check_budget_env() {
        let _ = writeln!(err, "error: {e}");
        return EXIT_ERROR;
    }
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

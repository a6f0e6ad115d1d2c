use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use slitcarpet::carpet::slits_up_to;
use slitcarpet::geodesics::{distance_double, distance_level, distance_limit};
use slitcarpet::measure::{
    ahlfors_scan, ball_mass, ball_mass_double, covering_check, incl_check, porosity_scan, C_REG,
};
use slitcarpet::modulus::{
    laplace_solve, modulus_direct, modulus_upper_nonvertical, vertical_family_bounds,
    CurveFamilySpec, Direction,
};
use slitcarpet::render::{render_svg, Overlay, RenderSpec};
use slitcarpet::report::Report;
use slitcarpet::symmetry::{
    bilipschitz_bound, bilipschitz_estimate, cohopf_check, h0, isometry_shear_intersection,
    qs_apply, qs_compose, qs_inverse, random_elements, rotation_check, sample_vertical_curves,
    shear_apply, validate_l, vertical_curve_signature, verttovert_check, Abscissa, Ambient,
    IsometryElement, LFunction, QSElement,
};
use slitcarpet::{CarpetPoint, Error};

#[derive(Parser)]
#[command(
    name = "slitcarpet",
    version,
    about = "Slit Sierpinski carpets: geodesics, measures, moduli and symmetries"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Slit level n.
    #[arg(long, global = true, default_value_t = 1)]
    level: u32,
    /// Grid exponent g (grid step 2^-g); each command picks a default.
    #[arg(long, global = true)]
    grid: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistMode {
    Level,
    Double,
    Limit,
}

#[derive(Clone, Copy, ValueEnum)]
enum AmbientArg {
    S2,
    Ds2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bound {
    Nonvertical,
    Vertical,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Cohopf,
    Bilip,
    Verttovert,
    Rotation,
    Intersection,
    Signature,
}

#[derive(Subcommand)]
enum Command {
    /// Export the slit schedule.
    Build,
    /// Distance between two points.
    Dist {
        #[arg(long)]
        p: CarpetPoint,
        #[arg(long)]
        q: CarpetPoint,
        #[arg(long, value_enum, ignore_case = true, default_value_t = DistMode::Level)]
        mode: DistMode,
        /// Also list the path vertices.
        #[arg(long)]
        path: bool,
    },
    /// Area of a geodesic ball.
    Ball {
        #[arg(long)]
        p: CarpetPoint,
        #[arg(long)]
        r: f64,
        /// Measure in the double.
        #[arg(long)]
        double: bool,
    },
    /// Ahlfors regularity constants over random balls.
    ScanAhlfors {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.125,0.0625")]
        radii: Vec<f64>,
    },
    /// Worst porosity ratio over random balls.
    ScanPorosity {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.25,0.125")]
        radii: Vec<f64>,
    },
    /// Ball inclusion witness with c = 1/12.
    CheckIncl {
        #[arg(long)]
        p: CarpetPoint,
        #[arg(long)]
        r: f64,
    },
    /// Greedy covering count against the frozen bound.
    CheckCover {
        #[arg(long)]
        p: CarpetPoint,
        #[arg(long)]
        r: f64,
    },
    /// Effective conductance between two opposite sides.
    Conductance {
        #[arg(long, default_value = "LR")]
        dir: Direction,
        /// Dump the potential as `x y side value` lines.
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Discrete modulus of a curve family, or a modulus bound.
    Modulus {
        /// connect-L-R, connect-T-B, vertical-only or oscillation-K.
        #[arg(long, default_value = "connect-L-R")]
        family: CurveFamilySpec,
        #[arg(long, value_enum, ignore_case = true)]
        bound: Option<Bound>,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Isometry tables, L-function validation, composition.
    Group {
        #[arg(long, value_enum, ignore_case = true, default_value_t = AmbientArg::Ds2)]
        ambient: AmbientArg,
        #[arg(long)]
        table: bool,
        /// Validate an L-function given as `N v0 v1 ... v_{2^N}`.
        #[arg(long)]
        validate: Option<LFunction>,
        #[arg(long, default_value_t = 12)]
        depth: u32,
        /// Compose two elements `bits N v0 ...`, left after right.
        #[arg(long, num_args = 2)]
        compose: Option<Vec<QSElement>>,
        #[arg(long)]
        inverse: Option<QSElement>,
    },
    /// Apply a group element to a point of the double.
    Shear {
        #[arg(long)]
        h: LFunction,
        #[arg(long, default_value = "000")]
        iso: IsometryElement,
        #[arg(long)]
        p: CarpetPoint,
    },
    /// Checks of group elements.
    Verify {
        #[arg(value_enum, ignore_case = true)]
        check: Check,
        /// The element to check; defaults to (id, h0).
        #[arg(long)]
        element: Option<QSElement>,
        /// Check this many seeded random elements instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 100)]
        curves: usize,
        /// Abscissa for the signature check.
        #[arg(long, default_value = "1/2")]
        x: Abscissa,
    },
    /// SVG picture with the slits opened into lenses.
    Render {
        /// Lens width scale; generation k gets eta / 4^k.
        #[arg(long, default_value_t = 1.0 / 64.0)]
        eta: f64,
        #[arg(long, default_value_t = 512.0)]
        scale: f64,
        /// Draw the geodesic between two points.
        #[arg(long, num_args = 2)]
        path: Option<Vec<CarpetPoint>>,
        /// Draw level sets of this potential.
        #[arg(long)]
        potential: Option<Direction>,
        #[arg(long, default_value_t = 9)]
        levels: usize,
    },
}

enum Failure {
    Usage(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Verification(_) | Error::NotConverged { .. } | Error::Io(_) => {
                Failure::Assertion(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(String, bool), Failure>;

fn grid_or(c: &Common, default: u32) -> u32 {
    c.grid.unwrap_or(default)
}

fn ambient(a: AmbientArg) -> Ambient {
    match a {
        AmbientArg::S2 => Ambient::S2,
        AmbientArg::Ds2 => Ambient::DS2,
    }
}

fn run(cli: Cli) -> Outcome {
    let c = &cli.common;
    let n = c.level;
    let mut rep = Report::new(command_name(&cli.command));
    let mut ok = true;
    match cli.command {
        Command::Build => return Ok((slits_up_to(n).export(), true)),
        Command::Dist { p, q, mode, path } => {
            rep.field("level", n);
            match mode {
                DistMode::Level | DistMode::Double => {
                    let (d, poly) = match mode {
                        DistMode::Level => distance_level(n, &p, &q)?,
                        _ => distance_double(n, &p, &q)?,
                    };
                    rep.field("distance", fmt(d));
                    if path {
                        for v in &poly.vertices {
                            rep.record().field("vertex", v);
                        }
                    }
                }
                DistMode::Limit => {
                    let seq = distance_limit(&p, &q, n)?;
                    rep.field("nondecreasing", seq.is_nondecreasing(c.tol));
                    for (k, d) in &seq.values {
                        rep.record().field("n", k).field("distance", fmt(*d));
                    }
                }
            }
        }
        Command::Ball { p, r, double } => {
            let g = grid_or(c, n + 6);
            let m = if double {
                ball_mass_double(n, &p, r, g)?
            } else {
                ball_mass(n, &p, r, g)?
            };
            rep.field("level", n).field("grid", g).field("r", fmt(r));
            rep.field("mass", fmt(m))
                .field("mass_over_r2", fmt(m / (r * r)));
        }
        Command::ScanAhlfors { samples, radii } => {
            let g = grid_or(c, 7.max(n + 3));
            let report = ahlfors_scan(n, samples, &radii, g, c.seed)?;
            rep.field("level", n)
                .field("grid", g)
                .field("samples", report.samples.len());
            rep.field("c_upper", fmt(report.c_upper))
                .field("c_lower", fmt(report.c_lower));
            rep.field("constant", fmt(report.constant()));
        }
        Command::ScanPorosity { samples, radii } => {
            let report = porosity_scan(n, samples, &radii, c.seed)?;
            rep.field("level", n).field("samples", report.samples.len());
            rep.field("worst", fmt(report.worst))
                .field("flagged", report.flagged);
        }
        Command::CheckIncl { p, r } => {
            let g = grid_or(c, n + 6);
            let w = incl_check(n, &p, r, g)?;
            rep.field("level", n).field("grid", g).field("r", fmt(r));
            rep.field("q", format!("{},{}", w.q.0, w.q.1))
                .field("scale", w.scale)
                .field("checked", w.checked);
        }
        Command::CheckCover { p, r } => {
            let cover = covering_check(n, &p, r)?;
            ok = cover.count <= C_REG;
            rep.field("level", n)
                .field("r", fmt(r))
                .field("count", cover.count);
            rep.field("bound", C_REG)
                .field("sampled", cover.sampled)
                .field("pass", ok);
        }
        Command::Conductance { dir, field } => {
            let g = grid_or(c, n + 6);
            let f = laplace_solve(n, g, &dir.boundary(), c.tol)?;
            if let Some(path) = field {
                fs::write(&path, f.dump())
                    .map_err(|e| Failure::Assertion(format!("{}: {e}", path.display())))?;
            }
            rep.field("n", n)
                .field("g", g)
                .field("direction", dir.as_str());
            rep.field("value", fmt(f.energy))
                .field("residual", format!("{:e}", f.residual));
            rep.field("iterations", f.iterations);
        }
        Command::Modulus { family, bound, k } => {
            let g = grid_or(c, n + 3);
            rep.field("n", n).field("g", g);
            match bound {
                Some(Bound::Nonvertical) => {
                    rep.field("k", k)
                        .field("upper", fmt(modulus_upper_nonvertical(k, n, g)?));
                }
                Some(Bound::Vertical) => {
                    let (lo, hi) = vertical_family_bounds(n, g)?;
                    rep.field("lower", fmt(lo)).field("upper", fmt(hi));
                }
                None => {
                    let est = modulus_direct(family, n, g)?;
                    rep.field("family", family)
                        .field("lower", fmt(est.lower))
                        .field("upper", fmt(est.upper));
                    rep.field("paths", est.paths);
                }
            }
        }
        Command::Group {
            ambient: a,
            table,
            validate,
            depth,
            compose,
            inverse,
        } => {
            let mut any = false;
            if let Some(h) = validate {
                let lip = validate_l(&h, depth.max(h.breakpoint_exponent()))?;
                rep.record().field("validate", &h).field("lip", lip);
                any = true;
            }
            if let Some(gs) = compose {
                let g = qs_compose(&gs[0], &gs[1])?;
                rep.record()
                    .field("compose", QSElement::new(g.iso, g.shear.simplify()));
                any = true;
            }
            if let Some(g) = inverse {
                let g = qs_inverse(&g)?;
                rep.record()
                    .field("inverse", QSElement::new(g.iso, g.shear.simplify()));
                any = true;
            }
            if table || !any {
                let elems = IsometryElement::elements(ambient(a));
                rep.record().field("order", elems.len());
                for x in &elems {
                    rep.record().field("row", x);
                    for y in &elems {
                        rep.field(&y.to_string(), x.compose(*y));
                    }
                }
            }
        }
        Command::Shear { h, iso, p } => {
            p.validate_double(n)?;
            let q = if iso == IsometryElement::IDENTITY {
                shear_apply(&h, &p)?
            } else {
                qs_apply(&QSElement::new(iso, h), &p)?
            };
            rep.field("image", q);
        }
        Command::Verify {
            check,
            element,
            random,
            pairs,
            curves,
            x,
        } => {
            let elems = match random {
                Some(count) => random_elements(count, c.seed),
                None => {
                    vec![element.unwrap_or_else(|| QSElement::new(IsometryElement::IDENTITY, h0()))]
                }
            };
            let shown = |g: &QSElement| QSElement::new(g.iso, g.shear.clone().simplify());
            match check {
                Check::Signature => {
                    let s = vertical_curve_signature(x)?.to_string();
                    for (k, v) in s.split(' ').filter_map(|kv| kv.split_once('=')) {
                        rep.field(k, v);
                    }
                }
                Check::Intersection => {
                    let left = isometry_shear_intersection(Ambient::DS2);
                    ok = left.is_empty();
                    rep.field("nontrivial", left.len()).field("pass", ok);
                }
                Check::Cohopf => {
                    for g in &elems {
                        let pass = cohopf_check(g, n)?;
                        ok &= pass;
                        rep.record().field("element", shown(g)).field("pass", pass);
                    }
                }
                Check::Bilip => {
                    for (i, g) in elems.iter().enumerate() {
                        let (hi, lo) = bilipschitz_estimate(g, n, pairs, c.seed + i as u64)?;
                        let bound = bilipschitz_bound(g);
                        let pass = hi <= bound + 0.05 && lo >= 1.0 / (bound + 0.05);
                        ok &= pass;
                        rep.record()
                            .field("element", shown(g))
                            .field("max_ratio", fmt(hi))
                            .field("min_ratio", fmt(lo));
                        rep.field("bound", fmt(bound)).field("pass", pass);
                    }
                }
                Check::Verttovert | Check::Rotation => {
                    let sample = sample_vertical_curves(n, curves, c.seed);
                    for g in &elems {
                        let pass = match check {
                            Check::Verttovert => verttovert_check(g, &sample)?,
                            _ => {
                                let mut all = true;
                                for curve in &sample {
                                    let (kept, reversed) = rotation_check(g, curve)?;
                                    all &= kept || reversed;
                                }
                                all
                            }
                        };
                        ok &= pass;
                        rep.record().field("element", shown(g)).field("pass", pass);
                    }
                }
            }
        }
        Command::Render {
            eta,
            scale,
            path,
            potential,
            levels,
        } => {
            let mut spec = RenderSpec::with_eta(n, eta);
            spec.scale = scale;
            let mut overlays = Vec::new();
            if let Some(pq) = path {
                overlays.push(Overlay::Path(distance_level(n, &pq[0], &pq[1])?.1));
            }
            if let Some(dir) = potential {
                let g = grid_or(c, n + 5);
                let field = laplace_solve(n, g, &dir.boundary(), c.tol)?;
                let values = (1..=levels)
                    .map(|k| k as f64 / (levels + 1) as f64)
                    .collect();
                overlays.push(Overlay::LevelSets { field, values });
            }
            return Ok((render_svg(&spec, &overlays)?, true));
        }
    }
    Ok((rep.to_string(), ok))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build => "build",
        Command::Dist { .. } => "dist",
        Command::Ball { .. } => "ball",
        Command::ScanAhlfors { .. } => "scan-ahlfors",
        Command::ScanPorosity { .. } => "scan-porosity",
        Command::CheckIncl { .. } => "check-incl",
        Command::CheckCover { .. } => "check-cover",
        Command::Conductance { .. } => "conductance",
        Command::Modulus { .. } => "modulus",
        Command::Group { .. } => "group",
        Command::Shear { .. } => "shear",
        Command::Verify { .. } => "verify",
        Command::Render { .. } => "render",
    }
}

/// Shortest text that reads back to the same double, always with a point.
fn fmt(v: f64) -> String {
    format!("{v:?}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.common.out.clone();
    match run(cli) {
        Ok((text, ok)) => {
            let written = match &out {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("check failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Assertion(e)) => {
            eprintln!("check failed: {e}");
            ExitCode::from(1)
        }
    }
}

//! Command-line surface and validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hessbound::geometry::body_from_json;
use hessbound::{ConvexBody, Polygon, ProfileFamily};

use crate::InputError;

#[derive(Debug, Parser)]
#[command(
    name = "hessbound",
    version,
    about = "Eigenvalue bounds for k-Hessian operators on convex bodies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quermassintegrals W_0..W_n and the Aleksandrov-Fenchel checks.
    Quermass {
        #[command(flatten)]
        body: BodyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Quermassintegrals of the inner parallel bodies over [0, inradius].
    Sweep {
        #[command(flatten)]
        body: BodyArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        plot: PlotArgs,
    },
    /// Radial eigenvalue and eigenfunction on a ball.
    Radial {
        #[command(flatten)]
        body: BodyArgs,
        #[command(flatten)]
        k: KArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        plot: PlotArgs,
    },
    /// Web-function Rayleigh quotients, optimized per profile family.
    Web {
        #[command(flatten)]
        body: BodyArgs,
        #[command(flatten)]
        k: KArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Viscous approximations d_eps of the distance function on a polygon grid.
    Deps {
        #[command(flatten)]
        body: BodyArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated eps values [default: 16h,8h,4h].
        #[arg(long, value_delimiter = ',', value_parser = parse_positive)]
        eps: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        plot: PlotArgs,
    },
    /// Lower bound, upper bounds and reference value for each k.
    Report {
        #[command(flatten)]
        body: BodyArgs,
        #[command(flatten)]
        k: KArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        plot: PlotArgs,
    },
    /// Reports over seeded random polygons of unit area, one CSV row per body and k.
    Corpus {
        /// Base seed; body i uses seed + i.
        #[arg(long)]
        seed: u64,
        /// Number of bodies.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Vertices per polygon.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(3..=4096))]
        vertices: u64,
        #[command(flatten)]
        k: KArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct BodyArgs {
    /// Body file (JSON with "type": "polygon" | "polytope" | "ball").
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "ball",
        required_unless_present = "ball"
    )]
    pub body: Option<PathBuf>,
    /// Centered ball in R^N of radius R.
    #[arg(long, num_args = 2, value_names = ["N", "R"])]
    pub ball: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct KArgs {
    /// Hessian index, or "all" for 1..=n.
    #[arg(long, default_value = "1", value_parser = parse_k)]
    pub k: KSelection,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep sample count.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(16..=1_000_000))]
    pub samples: u64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Finite-difference grid spacing [default: sqrt(area)/64].
    #[arg(long, value_parser = parse_positive)]
    pub h: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Web profile family: power:LO:HI or radial [default: both power:1:8 and radial].
    #[arg(long, value_parser = parse_profile)]
    pub profile: Option<ProfileFamily>,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Directory for the output files; the primary artifact always goes to stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Also write an SVG plot into the output directory.
    #[arg(long, requires = "out")]
    pub plot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSelection {
    One(usize),
    All,
}

impl KSelection {
    /// Resolves against the dimension, rejecting `k` outside `1..=n`.
    pub fn resolve(self, n: usize) -> Result<Vec<usize>, InputError> {
        match self {
            Self::All => Ok((1..=n).collect()),
            Self::One(k) if (1..=n).contains(&k) => Ok(vec![k]),
            Self::One(k) => Err(InputError(format!(
                "k must lie in 1..={n} for this body, got {k}"
            ))),
        }
    }
}

fn parse_k(s: &str) -> Result<KSelection, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(KSelection::All);
    }
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(KSelection::One(k)),
        _ => Err(format!("expected a positive integer or \"all\", got {s:?}")),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_profile(s: &str) -> Result<ProfileFamily, String> {
    if s == "radial" {
        return Ok(ProfileFamily::RadialComposed);
    }
    if s == "power" {
        return Ok(ProfileFamily::default());
    }
    let bad = || format!("expected power:LO:HI (1 <= LO <= HI) or radial, got {s:?}");
    let mut parts = s.split(':');
    if parts.next() != Some("power") {
        return Err(bad());
    }
    let lo: f64 = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
    let hi: f64 = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
    if parts.next().is_some() || !(lo >= 1.0 && hi >= lo && hi.is_finite()) {
        return Err(bad());
    }
    Ok(ProfileFamily::Power { lo, hi })
}

/// Where the body comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum BodySource {
    File(PathBuf),
    Ball {
        dim: usize,
        radius: f64,
    },
    /// Seeded random polygons (corpus runs).
    Corpus {
        seed: u64,
        count: usize,
        vertices: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Quermass,
    Sweep,
    Radial,
    Web,
    Deps,
    Report,
    Corpus,
}

/// Fully validated run parameters. Building one performs every input check,
/// so nothing is written before it exists.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub source: BodySource,
    /// The loaded body; `None` for corpus runs.
    pub body: Option<ConvexBody>,
    pub ks: Vec<usize>,
    pub samples: usize,
    pub h: Option<f64>,
    pub eps: Vec<f64>,
    /// `None` means the default family set.
    pub profile: Option<ProfileFamily>,
    pub out: Option<PathBuf>,
    pub plot: bool,
}

impl RunConfig {
    pub fn from_command(command: Command) -> anyhow::Result<Self> {
        let mut cfg = Self {
            command: CommandKind::Quermass,
            source: BodySource::Ball {
                dim: 2,
                radius: 1.0,
            },
            body: None,
            ks: vec![1],
            samples: 64,
            h: None,
            eps: Vec::new(),
            profile: None,
            out: None,
            plot: false,
        };
        match command {
            Command::Quermass { body, out } => {
                cfg.load(body)?;
                cfg.out = out.out;
            }
            Command::Sweep {
                body,
                sweep,
                out,
                plot,
            } => {
                cfg.command = CommandKind::Sweep;
                cfg.load(body)?;
                cfg.samples = sweep.samples as usize;
                cfg.set_output(out, plot);
            }
            Command::Radial { body, k, out, plot } => {
                cfg.command = CommandKind::Radial;
                cfg.load(body)?;
                if !matches!(cfg.source, BodySource::Ball { .. }) {
                    return Err(InputError("radial needs --ball N R".into()).into());
                }
                cfg.set_k(k.k)?;
                cfg.set_output(out, plot);
            }
            Command::Web {
                body,
                k,
                sweep,
                profile,
                out,
            } => {
                cfg.command = CommandKind::Web;
                cfg.load(body)?;
                cfg.set_k(k.k)?;
                cfg.samples = sweep.samples as usize;
                cfg.profile = profile.profile;
                cfg.out = out.out;
            }
            Command::Deps {
                body,
                grid,
                eps,
                out,
                plot,
            } => {
                cfg.command = CommandKind::Deps;
                cfg.load(body)?;
                let area = polygon_of(&cfg)?.area();
                let h = grid.h.unwrap_or(area.sqrt() / 64.0);
                cfg.h = Some(h);
                cfg.eps = if eps.is_empty() {
                    vec![16.0 * h, 8.0 * h, 4.0 * h]
                } else {
                    eps
                };
                if let Some(e) = cfg.eps.iter().find(|&&e| e < 4.0 * h) {
                    return Err(
                        InputError(format!("eps = {e} needs h <= eps/4, but h = {h}")).into(),
                    );
                }
                cfg.set_output(out, plot);
            }
            Command::Report {
                body,
                k,
                sweep,
                grid,
                profile,
                out,
                plot,
            } => {
                cfg.command = CommandKind::Report;
                cfg.load(body)?;
                cfg.set_k(k.k)?;
                cfg.samples = sweep.samples as usize;
                cfg.h = grid.h;
                cfg.profile = profile.profile;
                cfg.set_output(out, plot);
            }
            Command::Corpus {
                seed,
                count,
                vertices,
                k,
                sweep,
                grid,
                profile,
                out,
            } => {
                cfg.command = CommandKind::Corpus;
                cfg.source = BodySource::Corpus {
                    seed,
                    count,
                    vertices: vertices as usize,
                };
                cfg.ks = k.k.resolve(2)?;
                cfg.samples = sweep.samples as usize;
                cfg.h = grid.h;
                cfg.profile = profile.profile;
                cfg.out = out.out;
            }
        }
        if let Some(dir) = &cfg.out {
            if dir.exists() && !dir.is_dir() {
                return Err(InputError(format!(
                    "--out {} exists and is not a directory",
                    dir.display()
                ))
                .into());
            }
        }
        Ok(cfg)
    }

    fn load(&mut self, args: BodyArgs) -> anyhow::Result<()> {
        let body = match (args.body, args.ball) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
                self.source = BodySource::File(path);
                body_from_json(&text)?
            }
            (None, Some(ball)) => {
                let dim: usize = ball[0].parse().map_err(|_| {
                    InputError(format!(
                        "ball dimension must be an integer, got {:?}",
                        ball[0]
                    ))
                })?;
                let radius: f64 = ball[1].parse().map_err(|_| {
                    InputError(format!("ball radius must be a number, got {:?}", ball[1]))
                })?;
                let body = ConvexBody::ball(dim, radius)?;
                self.source = BodySource::Ball { dim, radius };
                body
            }
            (None, None) => {
                return Err(InputError("one of --body or --ball is required".into()).into())
            }
        };
        self.body = Some(body);
        Ok(())
    }

    fn set_k(&mut self, k: KSelection) -> Result<(), InputError> {
        let n = self.body.as_ref().map_or(2, ConvexBody::dim);
        self.ks = k.resolve(n)?;
        Ok(())
    }

    fn set_output(&mut self, out: OutArgs, plot: PlotArgs) {
        self.out = out.out;
        self.plot = plot.plot;
    }

    pub fn body(&self) -> &ConvexBody {
        self.body
            .as_ref()
            .expect("commands other than corpus load a body")
    }
}

pub fn polygon_of(cfg: &RunConfig) -> Result<&Polygon, InputError> {
    match cfg.body.as_ref() {
        Some(ConvexBody::Polygon(p)) => Ok(p),
        _ => Err(InputError("this command needs a polygon body".into())),
    }
}

//! Command-line interface: argument types and the dispatcher.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use tactile_core::geometry::TriangleMesh;
use tactile_core::stimulus::{run_calibration_session, CalibrationProfile};

use crate::error::{Result, SimError};
use crate::formats::calibration::{load_profile, load_session, write_profile};
use crate::formats::config::SimConfig;
use crate::formats::logs::{load_frame_log, write_frame_log, write_summary};
use crate::formats::obj::{write_obj, write_texture_sidecar};
use crate::formats::trace::{load_trace, write_trace};
use crate::meshgen;
use crate::replay::run_replay;
use crate::scene::{inspect_scene, load_scene};
use crate::synth::{generate, load_spec};
use crate::viz::{parse_range, render_svg, render_text};

/// Tactile rendering toolkit: replay traces, synthesize them, validate
/// scenes, and inspect the frames a run produces.
#[derive(Debug, Parser)]
#[command(name = "tactile", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command that builds a pipeline config.
#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    /// Config file (`key = value` lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override one config key, e.g. `--set synthesis.alpha=1.5`.
    /// Repeatable; applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub sets: Vec<String>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<SimConfig> {
        let mut config = match &self.config {
            Some(path) => SimConfig::load(path)?,
            None => SimConfig::new(),
        };
        for assignment in &self.sets {
            config.apply_set(assignment)?;
        }
        config.cross_check()?;
        Ok(config)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a pose trace against a scene and write the outputs.
    Replay(ReplayArgs),
    /// Generate a pose trace from a motion spec.
    SynthTrace(SynthArgs),
    /// Render frames from a frame log as text grids or SVG.
    Viz(VizArgs),
    /// Load a scene and print its validation report.
    Validate(ValidateArgs),
    /// Apply a calibration session to produce a per-region profile.
    CalibrateReplay(CalibrateArgs),
    /// Write one of the built-in meshes as an OBJ file.
    GenMesh(GenMeshArgs),
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Scene geometry (OBJ).
    #[arg(long)]
    pub scene: PathBuf,
    /// Per-face texture map for the scene.
    #[arg(long)]
    pub materials: Option<PathBuf>,
    /// Finger pose trace (CSV).
    #[arg(long)]
    pub trace: PathBuf,
    /// Per-region calibration profile; defaults to a uniform profile.
    #[arg(long)]
    pub calibration: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Write the frame log here.
    #[arg(long)]
    pub frames: Option<PathBuf>,
    /// Write the per-cycle stimulation schedule CSV here.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Write the run summary here (it always prints to stdout unless
    /// --quiet).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Suppress the stdout summary.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Motion spec (`key = value` lines).
    #[arg(long)]
    pub spec: PathBuf,
    /// Output trace path; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VizArgs {
    /// Frame log produced by `replay --frames`.
    #[arg(long)]
    pub frames: PathBuf,
    /// Frame selection: `N` or `A-B` (default: all frames).
    #[arg(long)]
    pub range: Option<String>,
    /// Write the first selected frame as an SVG to this path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Output path for the text rendering; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Scene geometry (OBJ).
    #[arg(long)]
    pub scene: PathBuf,
    /// Per-face texture map for the scene.
    #[arg(long)]
    pub materials: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Session steps (`region amplitude_uA` lines, centre region first).
    #[arg(long)]
    pub session: PathBuf,
    /// Output profile path; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    /// Cube centred at the origin (`--size-mm` edge length).
    Cube,
    /// Tabletop slab with its top face on z = 0.
    Slab,
    /// Subdivided icosahedron (`--size-mm` radius).
    Icosphere,
    /// Four-sided spike with its apex corner at the origin.
    Spike,
    /// Heavy undulating sphere for stress runs.
    Blob,
}

#[derive(Debug, Args)]
pub struct GenMeshArgs {
    /// Which built-in mesh to generate.
    #[arg(long, value_enum)]
    pub shape: Shape,
    /// Principal dimension in millimetres: cube edge, slab width/depth,
    /// sphere or blob radius, spike height.
    #[arg(long, default_value_t = 200.0)]
    pub size_mm: f64,
    /// Slab thickness.
    #[arg(long, default_value_t = 20.0)]
    pub thickness_mm: f64,
    /// Subdivision rounds for icosphere (default 2) and blob (default 6).
    #[arg(long)]
    pub subdivisions: Option<u32>,
    /// Undulation seed (blob).
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Relative undulation amplitude (blob).
    #[arg(long, default_value_t = 0.02)]
    pub amplitude: f64,
    /// Assign this texture level to every face and write a material map
    /// next to the OBJ (`<output>.mtlmap`).
    #[arg(long)]
    pub texture_level: Option<u8>,
    /// Output OBJ path.
    #[arg(short, long)]
    pub output: PathBuf,
}

fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(path) => crate::error::write_string(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn run_replay_command(args: &ReplayArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let scene = load_scene(&args.scene, args.materials.as_deref(), config.features)?;
    let trace = load_trace(&args.trace)?;
    let calibration = match &args.calibration {
        Some(path) => load_profile(path)?,
        None => CalibrationProfile::default(),
    };
    let output = run_replay(&scene, &trace, &config, &calibration)?;
    if let Some(path) = &args.frames {
        crate::error::write_string(path, &write_frame_log(&output.records))?;
    }
    if let Some(path) = &args.schedule {
        crate::error::write_string(path, &output.schedule_csv)?;
    }
    let summary = write_summary(&output.summary);
    if let Some(path) = &args.summary {
        crate::error::write_string(path, &summary)?;
    }
    if !args.quiet {
        print!("{summary}");
    }
    Ok(())
}

fn run_validate(args: &ValidateArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let inspection = inspect_scene(&args.scene, args.materials.as_deref(), config.features)?;
    print!("{}", inspection.report.render());
    match inspection.report.first_failure() {
        None => Ok(()),
        Some(line) => Err(SimError::Validation(format!("{}: {}", line.label, line.detail))),
    }
}

fn run_gen_mesh(args: &GenMeshArgs) -> Result<()> {
    if !(args.size_mm.is_finite() && args.size_mm > 0.0) {
        return Err(SimError::Config(format!("size_mm {} must be > 0", args.size_mm)));
    }
    let mesh: TriangleMesh = match args.shape {
        Shape::Cube => meshgen::cube(args.size_mm),
        Shape::Slab => {
            if !(args.thickness_mm.is_finite() && args.thickness_mm > 0.0) {
                return Err(SimError::Config(format!(
                    "thickness_mm {} must be > 0",
                    args.thickness_mm
                )));
            }
            meshgen::slab(args.size_mm, args.size_mm, args.thickness_mm)
        }
        Shape::Icosphere => meshgen::icosphere(args.size_mm, args.subdivisions.unwrap_or(2)),
        Shape::Spike => meshgen::spike(args.size_mm, args.size_mm / 2.0),
        Shape::Blob => {
            if !(args.amplitude.is_finite() && (0.0..0.2).contains(&args.amplitude)) {
                return Err(SimError::Config(format!(
                    "amplitude {} outside 0..0.2 would create sharp creases",
                    args.amplitude
                )));
            }
            meshgen::blob(args.size_mm, args.subdivisions.unwrap_or(6), args.seed, args.amplitude)
        }
    };
    let faces = mesh.triangles.len();
    let comment = format!("generated: {:?} size {} mm", args.shape, args.size_mm);
    crate::error::write_string(&args.output, &write_obj(&mesh, &comment))?;
    if let Some(level) = args.texture_level {
        if level > 2 {
            return Err(SimError::Config(format!("texture level {level} outside 0..=2")));
        }
        let map_path = args.output.with_extension("mtlmap");
        crate::error::write_string(&map_path, &write_texture_sidecar(&vec![level; faces], &comment))?;
    }
    Ok(())
}

/// Execute one parsed command.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Replay(args) => run_replay_command(args),
        Command::SynthTrace(args) => {
            let spec = load_spec(&args.spec)?;
            let trace = generate(&spec)?;
            emit(args.output.as_deref(), &write_trace(&trace))
        }
        Command::Viz(args) => {
            let records = load_frame_log(&args.frames)?;
            let range = args.range.as_deref().map(parse_range).transpose()?;
            let text = render_text(&records, range)?;
            if let Some(path) = &args.svg {
                let first = range.map_or(0, |(lo, _)| lo);
                crate::error::write_string(path, &render_svg(&records[first], first))?;
            }
            emit(args.output.as_deref(), &text)
        }
        Command::Validate(args) => run_validate(args),
        Command::CalibrateReplay(args) => {
            let steps = load_session(&args.session)?;
            let profile = run_calibration_session(&steps)
                .map_err(|e| SimError::Validation(format!("calibration session: {e}")))?;
            emit(args.output.as_deref(), &write_profile(&profile, "calibration session result"))
        }
        Command::GenMesh(args) => run_gen_mesh(args),
    }
}

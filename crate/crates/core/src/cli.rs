//! The `mvwave` command line. Each subcommand reads its inputs, calls the
//! library and writes its outputs atomically.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::io::{
    read_image, read_volume, render_plane_image, write_atomic, write_gray8, write_image,
    write_kernel_text, write_spectrum_csv, write_volume, PlaneStyle,
};
use crate::kernels::{
    make_auxiliary, make_scaling, make_wavelet_1d, make_wavelet_2d, numeric_ft, sample_pattern,
    DepthPlane, Kernel, KernelKind, SpectrumSpec,
};
use crate::synth::{apply_vignette, render_scene, MaskSpec, SceneSpec, Tetrahedron};
use crate::transform::{
    direct_cwt, inverse_cwt_with, plane_energy, reverse_depth, EnergySampling, Parallax, Synthesis,
    TransformConfig,
};

#[derive(Debug, Parser)]
#[command(
    name = "mvwave",
    version,
    about = "Pattern-based multiview wavelet toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a pattern, wavelet, scaling function or auxiliary signal.
    GenKernel(GenKernelArgs),
    /// Analytic and numeric spectrum of a 1D kernel as CSV.
    Spectrum(SpectrumArgs),
    /// Direct transform of an image into a coefficient volume.
    Analyze(AnalyzeArgs),
    /// Inverse transform of a coefficient volume into an image.
    Reconstruct(ReconstructArgs),
    /// Move every plane to the other side of the screen.
    ReverseDepth(ReverseArgs),
    /// Reconstruct a volume with horizontal-parallax wavelets.
    ToHpo(ToHpoArgs),
    /// Render a scene file.
    RenderScene(RenderSceneArgs),
    /// Write the tetrahedron scene and its rendering.
    Tetrahedron(TetrahedronArgs),
    /// Apply a circular per-cell aperture.
    Mask(MaskArgs),
    /// Print per-plane coefficient energy as CSV.
    DepthReport(DepthReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParallaxArg {
    Hpo,
    Fp,
}

impl From<ParallaxArg> for Parallax {
    fn from(p: ParallaxArg) -> Self {
        match p {
            ParallaxArg::Hpo => Parallax::Hpo,
            ParallaxArg::Fp => Parallax::Fp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Pattern,
    Wavelet1d,
    Wavelet2d,
    Scaling1d,
    Scaling2d,
    PulseTrain,
    Chirp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Pseudo,
    Gray,
}

impl From<StyleArg> for PlaneStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Pseudo => PlaneStyle::Pseudo,
            StyleArg::Gray => PlaneStyle::Gray,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthesisArg {
    Dual,
    Adjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplingArg {
    Lattice,
    Dense,
}

#[derive(Debug, Args)]
pub struct GenKernelArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Signed depth plane (patterns and wavelets).
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<i32>,
    /// Pixels per cell.
    #[arg(long)]
    pub cell: usize,
    /// Signal length in cells (auxiliary signals).
    #[arg(long, default_value_t = 4)]
    pub length: usize,
    /// Text matrix output.
    #[arg(long)]
    pub output: PathBuf,
    /// Optional image rendering of the samples.
    #[arg(long)]
    pub image: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<i32>,
    #[arg(long)]
    pub cell: usize,
    /// Zero-padding factor of the discrete transform.
    #[arg(long, default_value_t = 8)]
    pub pad: usize,
    /// Highest angular frequency reported, in multiples of π.
    #[arg(long, default_value_t = 6.0)]
    pub max_omega_pi: f64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Pixels per cell; read from `<input>.cell` when omitted.
    #[arg(long)]
    pub cell: Option<usize>,
    #[arg(long, value_enum, default_value = "fp")]
    pub parallax: ParallaxArg,
    /// Planes, e.g. `-6..-2,2..6`. Defaults to ±1..±8 restricted to orders
    /// dividing the cell size.
    #[arg(long, allow_hyphen_values = true)]
    pub planes: Option<String>,
    #[arg(long)]
    pub no_scaling: bool,
    /// Directory receiving one image per plane.
    #[arg(long)]
    pub render_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pseudo")]
    pub style: StyleArg,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Kernel family for synthesis; defaults to the volume's own.
    #[arg(long, value_enum)]
    pub parallax: Option<ParallaxArg>,
    #[arg(long, value_enum, default_value = "dual")]
    pub synthesis: SynthesisArg,
    /// Relative Tikhonov regularisation of the dual synthesis.
    #[arg(long, default_value_t = 1e-5)]
    pub regularization: f64,
}

#[derive(Debug, Args)]
pub struct ReverseArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ToHpoArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderSceneArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct TetrahedronArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 2)]
    pub base: i32,
    #[arg(long, allow_hyphen_values = true, default_value_t = 5)]
    pub apex: i32,
    /// Canvas side in cells.
    #[arg(long, default_value_t = 12)]
    pub size: usize,
    #[arg(long, default_value_t = 3)]
    pub samples_per_edge: usize,
    #[arg(long, default_value_t = 20)]
    pub cell: usize,
    #[arg(long, value_enum, default_value = "fp")]
    pub parallax: ParallaxArg,
    /// Rendered image.
    #[arg(long)]
    pub output: PathBuf,
    /// Scene text file.
    #[arg(long)]
    pub scene: PathBuf,
}

#[derive(Debug, Args)]
pub struct MaskArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub cell: Option<usize>,
    /// Hole radius in pixels.
    #[arg(long)]
    pub radius: f64,
    #[arg(long, value_enum, default_value = "fp")]
    pub parallax: ParallaxArg,
}

#[derive(Debug, Args)]
pub struct DepthReportArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "lattice")]
    pub sampling: SamplingArg,
}

/// Parses `-6..-2,2..6,8` into plane indices. Ranges are inclusive and skip
/// zero; an explicit zero is an error.
pub fn parse_planes(spec: &str) -> Result<Vec<i32>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || Error::InvalidArgument(format!("bad plane list entry {part:?}"));
        // Split on the `..` that follows the first character, so that a
        // leading minus sign stays with the first bound.
        match part[1..].find("..").map(|i| i + 1) {
            Some(i) => {
                let lo: i32 = part[..i].trim().parse().map_err(|_| bad())?;
                let hi: i32 = part[i + 2..].trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend((lo..=hi).filter(|&d| d != 0));
            }
            None => {
                let d: i32 = part.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(Error::ZeroDepth);
                }
                out.push(d);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyPlaneSet);
    }
    Ok(out)
}

fn depth_arg(depth: Option<i32>) -> Result<DepthPlane> {
    DepthPlane::new(depth.ok_or_else(|| Error::InvalidArgument("--depth is required".into()))?)
}

fn build_kernel(kind: KindArg, depth: Option<i32>, cell: usize, length: usize) -> Result<Kernel> {
    match kind {
        KindArg::Pattern => {
            let d = depth_arg(depth)?;
            sample_pattern(d.order(), d.sign(), cell)
        }
        KindArg::Wavelet1d => {
            let d = depth_arg(depth)?;
            make_wavelet_1d(d.order(), d.sign(), cell)
        }
        KindArg::Wavelet2d => {
            let d = depth_arg(depth)?;
            make_wavelet_2d(d.order(), d.sign(), cell)
        }
        KindArg::Scaling1d => make_scaling(1, cell),
        KindArg::Scaling2d => make_scaling(2, cell),
        KindArg::PulseTrain => make_auxiliary(KernelKind::PulseTrain, cell, length),
        KindArg::Chirp => make_auxiliary(KernelKind::Chirp, cell, length),
    }
}

fn distinct(input: &Path, output: &Path) -> Result<()> {
    if input == output {
        return Err(Error::InvalidArgument(format!(
            "input and output are the same path {}",
            input.display()
        )));
    }
    Ok(())
}

/// Runs a parsed command. `out` receives report output.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::GenKernel(a) => {
            let k = build_kernel(a.kind, a.depth, a.cell, a.length)?;
            write_kernel_text(&k, &a.output)?;
            if let Some(path) = a.image {
                write_gray8(&render_plane_image(&k.samples, PlaneStyle::Gray), &path)?;
            }
        }
        Command::Spectrum(a) => {
            if !a.max_omega_pi.is_finite() || a.max_omega_pi <= 0.0 {
                return Err(Error::InvalidArgument(
                    "--max-omega-pi must be positive".into(),
                ));
            }
            let k = build_kernel(a.kind, a.depth, a.cell, 4)?;
            let spec = match a.kind {
                KindArg::Pattern | KindArg::Wavelet1d => {
                    let d = depth_arg(a.depth)?;
                    let kind = if a.kind == KindArg::Pattern {
                        KernelKind::Pattern
                    } else {
                        KernelKind::Wavelet1D
                    };
                    Some(SpectrumSpec {
                        kind,
                        order: d.order(),
                        sign: d.sign(),
                    })
                }
                KindArg::Scaling1d => Some(SpectrumSpec::scaling()),
                KindArg::PulseTrain | KindArg::Chirp => None,
                KindArg::Wavelet2d | KindArg::Scaling2d => {
                    return Err(Error::Unsupported(
                        "spectrum takes 1D kernels; 2D spectra are separable products".into(),
                    ))
                }
            };
            let mut table = numeric_ft(&k, a.pad)?;
            let limit = a.max_omega_pi * std::f64::consts::PI;
            let keep = table
                .omega
                .iter()
                .take_while(|&&w| w <= limit + 1e-12)
                .count();
            table.omega.truncate(keep);
            for col in [&mut table.numeric, &mut table.power].into_iter().flatten() {
                col.truncate(keep);
            }
            if let Some(spec) = spec {
                table = table.with_analytic(spec)?;
            }
            write_atomic(&a.output, |w| write_spectrum_csv(&table, w))?;
        }
        Command::Analyze(a) => {
            distinct(&a.input, &a.output)?;
            let image = read_image(&a.input, a.cell, a.parallax.into())?;
            let mut config = match &a.planes {
                Some(spec) => TransformConfig::from_depths(&parse_planes(spec)?)?,
                None => TransformConfig::for_cell(image.cell_px()),
            };
            config.include_scaling = !a.no_scaling;
            let volume = direct_cwt(&image, &config)?;
            if let Some(dir) = &a.render_dir {
                std::fs::create_dir_all(dir)?;
                for (d, coeffs) in volume.planes() {
                    let path = dir.join(format!("plane_{:+}.pgm", d.get()));
                    write_gray8(&render_plane_image(coeffs, a.style.into()), &path)?;
                }
                if let Some(sc) = volume.scaling() {
                    write_gray8(
                        &render_plane_image(sc, PlaneStyle::Gray),
                        &dir.join("scaling.pgm"),
                    )?;
                }
            }
            write_volume(&volume, &a.output)?;
        }
        Command::Reconstruct(a) => {
            distinct(&a.input, &a.output)?;
            let volume = read_volume(&a.input)?;
            let target = a.parallax.map(Parallax::from).unwrap_or(volume.parallax());
            let synthesis = match a.synthesis {
                SynthesisArg::Adjoint => Synthesis::Adjoint,
                SynthesisArg::Dual => Synthesis::DualFrame {
                    regularization: a.regularization,
                },
            };
            write_image(&inverse_cwt_with(&volume, target, synthesis)?, &a.output)?;
        }
        Command::ReverseDepth(a) => {
            distinct(&a.input, &a.output)?;
            write_volume(&reverse_depth(&read_volume(&a.input)?)?, &a.output)?;
        }
        Command::ToHpo(a) => {
            distinct(&a.input, &a.output)?;
            let volume = read_volume(&a.input)?;
            let image = inverse_cwt_with(&volume, Parallax::Hpo, Synthesis::default())?;
            write_image(&image, &a.output)?;
        }
        Command::RenderScene(a) => {
            distinct(&a.input, &a.output)?;
            let scene: SceneSpec = std::fs::read_to_string(&a.input)?.parse()?;
            write_image(&render_scene(&scene)?, &a.output)?;
        }
        Command::Tetrahedron(a) => {
            distinct(&a.scene, &a.output)?;
            let scene = Tetrahedron {
                base: DepthPlane::new(a.base)?,
                apex: DepthPlane::new(a.apex)?,
                size_cells: a.size,
                samples_per_edge: a.samples_per_edge,
                cell_px: a.cell,
                parallax: a.parallax.into(),
            }
            .scene()?;
            let image = render_scene(&scene)?;
            write_atomic(&a.scene, |w| {
                write!(w, "{scene}")?;
                Ok(())
            })?;
            write_image(&image, &a.output)?;
        }
        Command::Mask(a) => {
            distinct(&a.input, &a.output)?;
            let image = read_image(&a.input, a.cell, a.parallax.into())?;
            let mask = MaskSpec::new(a.radius, image.cell_px())?;
            write_image(&apply_vignette(&image, &mask)?, &a.output)?;
        }
        Command::DepthReport(a) => {
            let volume = read_volume(&a.input)?;
            let sampling = match a.sampling {
                SamplingArg::Lattice => EnergySampling::VoxelLattice,
                SamplingArg::Dense => EnergySampling::Dense,
            };
            writeln!(out, "plane,energy")?;
            for (d, e) in plane_energy(&volume, sampling) {
                writeln!(out, "{},{e}", d.get())?;
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status. Errors are reported as one line on stderr.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("mvwave: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_lists() {
        assert_eq!(
            parse_planes("-6..-2,2..6").unwrap(),
            vec![-6, -5, -4, -3, -2, 2, 3, 4, 5, 6]
        );
        assert_eq!(
            parse_planes("3, -1,-2..2").unwrap(),
            vec![3, -1, -2, -1, 1, 2]
        );
        assert!(parse_planes("0").is_err());
        assert!(parse_planes("4..2").is_err());
        assert!(parse_planes("x").is_err());
        assert!(parse_planes("").is_err());
    }

    #[test]
    fn parses_negative_planes_flag() {
        let cli = Cli::try_parse_from([
            "mvwave", "analyze", "--input", "a.pgm", "--output", "a.mvwv", "--planes", "-3..-2,2",
        ])
        .unwrap();
        let Command::Analyze(a) = cli.command else {
            panic!()
        };
        assert_eq!(a.planes.as_deref(), Some("-3..-2,2"));
    }

    #[test]
    fn bad_flags_fail() {
        assert_ne!(cli_main(["mvwave", "analyze", "--bogus"]), 0);
        assert_ne!(
            cli_main(["mvwave", "reverse-depth", "--input", "x", "--output", "x"]),
            0
        );
    }
}

//! `isogrow` command-line front end.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use isogrow::bjorling::{derive_cauchy_data, sample_initial_strip};
use isogrow::geometry::check_quad;
use isogrow::growth::{grow, GrowthResult};
use isogrow::harness::{emit_report, run_convergence};
use isogrow::lattice::{DomainSpec, LatticeIndex};
use isogrow::quantities::{extract, frame_relation_residuals, gc_residuals};
use isogrow::smooth::{builtin_surface, check_invariants, CkConfig, CkSurface, SmoothSurface};
use isogrow::transforms::{
    christoffel_closedness, christoffel_discrete, darboux_discrete, darboux_edge_audit, darboux_face_audit,
};
use isogrow::{export, BjorlingData, Error, Point3};

use config::ConfigFile;

#[derive(Parser)]
#[command(name = "isogrow", version, about = "Grow discrete isothermic surfaces from Björling data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a surface and export it as an OBJ quad mesh.
    Grow(GrowArgs),
    /// Apply a Christoffel or Darboux transform to a grown surface.
    Transform(TransformArgs),
    /// Measure convergence against the smooth surface over several eps.
    Converge(ConvergeArgs),
    /// Run the invariant checks on a grown surface.
    Check(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// TOML file with [surface], [lattice] and [run] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in surface: cylinder or sphere_mercator.
    #[arg(long)]
    surface: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GrowArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also write the discrete quantities as CSV.
    #[arg(long)]
    export_quantities: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// christoffel or darboux.
    #[arg(long)]
    kind: Option<String>,
    /// Darboux parameter.
    #[arg(long = "C")]
    c: Option<f64>,
    /// Darboux seed point `x,y,z`.
    #[arg(long, value_parser = parse_point)]
    seed: Option<Point3>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Strictly decreasing lattice constants.
    #[arg(long, value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,
}

fn parse_point(s: &str) -> Result<Point3, String> {
    let parts: Vec<f64> =
        s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y, z] => Ok(Point3::new(x, y, z)),
        _ => Err("expected three comma-separated numbers".into()),
    }
}

/// Flags merged over the config file.
struct Settings {
    file: ConfigFile,
    surface: Option<String>,
    eps: f64,
    r: f64,
    h: f64,
    out: Option<PathBuf>,
}

impl Settings {
    fn new(args: &CommonArgs) -> anyhow::Result<Self> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p).with_context(|| format!("reading config {}", p.display()))?,
            None => ConfigFile::default(),
        };
        Ok(Self {
            surface: args.surface.clone(),
            eps: args.eps.or(file.lattice.eps).unwrap_or(config::DEFAULT_EPS),
            r: args.r.or(file.lattice.r).unwrap_or(config::DEFAULT_R),
            h: args.h.or(file.lattice.h).unwrap_or(config::DEFAULT_H),
            out: args.out.clone().or(file.run.out.clone()),
            file,
        })
    }

    fn data(&self) -> isogrow::Result<BjorlingData> {
        config::bjorling_data(&self.file.surface, self.surface.as_deref(), self.r)
    }

    fn out_or(&self, default: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default))
    }

    fn grow(&self) -> anyhow::Result<GrowthResult> {
        DomainSpec::new(self.r, self.h, self.eps)?;
        let cd = derive_cauchy_data(&self.data()?)?;
        let strip = sample_initial_strip(&cd, self.eps)?;
        let g = grow(&strip, self.h);
        eprintln!(
            "grown: {} vertices, {} quads, achieved h = {}",
            g.surface.positions.len(),
            g.surface.complete_quads().len(),
            g.achieved_h()
        );
        for d in &g.degeneracies {
            eprintln!("degenerate: {:?} sweep stopped at {} ({:?})", d.sweep, d.index, d.kind);
        }
        Ok(g)
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn cmd_grow(args: &GrowArgs) -> anyhow::Result<()> {
    let s = Settings::new(&args.common)?;
    let g = s.grow()?;
    write(&s.out_or("surface.obj"), &export::surface_obj(&g.surface))?;
    if let Some(q) = args.export_quantities.clone().or(s.file.run.export_quantities.clone()) {
        write(&q, &export::quantities_csv(&extract(&g.surface)?))?;
    }
    Ok(())
}

fn cmd_transform(args: &TransformArgs) -> anyhow::Result<()> {
    let s = Settings::new(&args.common)?;
    let kind = args.kind.clone().or(s.file.run.kind.clone()).unwrap_or_else(|| "christoffel".into());
    let c = args.c.or(s.file.run.c);
    let seed = args.seed.or(s.file.run.seed.map(Point3::from));
    if kind == "darboux" {
        // parameter checks come before any numerical work
        match c {
            None => return Err(Error::InvalidInput("darboux needs --C".into()).into()),
            Some(c) if c == 0.0 => return Err(Error::ZeroParameter.into()),
            _ => {}
        }
        if seed.is_none() {
            return Err(Error::InvalidInput("darboux needs --seed x,y,z".into()).into());
        }
    }
    let g = s.grow()?;
    let out = match kind.as_str() {
        "christoffel" => {
            let dual = christoffel_discrete(&g.surface, LatticeIndex::new(0, 0))?;
            eprintln!("closedness defect: {:.3e}", christoffel_closedness(&g.surface)?);
            dual
        }
        "darboux" => {
            let (c, seed) = (c.unwrap(), seed.unwrap());
            let plus = darboux_discrete(&g.surface, seed, c)?;
            eprintln!("cross-ratio audit: {:.3e}", darboux_edge_audit(&g.surface, &plus, c)?);
            eprintln!("face audit: {:.3e}", darboux_face_audit(&g.surface, &plus, c)?);
            plus
        }
        other => return Err(Error::InvalidInput(format!("unknown transform kind {other:?}")).into()),
    };
    write(&s.out_or("transformed.obj"), &export::surface_obj(&out))
}

fn reference_for(data: &BjorlingData) -> anyhow::Result<Box<dyn SmoothSurface>> {
    Ok(match builtin_surface(&data.name) {
        Ok(b) => Box::new(b),
        Err(_) => Box::new(CkSurface::new(derive_cauchy_data(data)?, CkConfig::default())),
    })
}

fn cmd_converge(args: &ConvergeArgs) -> anyhow::Result<()> {
    let s = Settings::new(&args.common)?;
    let eps_list =
        args.eps_list.clone().or(s.file.run.eps_list.clone()).unwrap_or_else(|| config::DEFAULT_EPS_LIST.to_vec());
    let data = s.data()?;
    let reference = reference_for(&data)?;
    let report = run_convergence(&data, reference.as_ref(), &eps_list, s.h)?;
    let out = s.out_or("convergence.csv");
    emit_report(&report, &out).with_context(|| format!("writing {}", out.display()))?;
    print!("{}", report.to_csv());
    print!("{}", report.summary());
    Ok(())
}

fn cmd_check(args: &CommonArgs) -> anyhow::Result<bool> {
    let s = Settings::new(args)?;
    let g = s.grow()?;
    let surface = &g.surface;
    let mut ok = true;
    let mut line = |name: &str, value: f64, tol: f64| {
        let pass = value < tol;
        ok &= pass;
        println!("{} {name}: {value:.3e} (< {tol:e})", if pass { "PASS" } else { "FAIL" });
    };
    let mut worst: f64 = 0.0;
    for c in surface.complete_quads() {
        let p = surface.quad(c).unwrap();
        let r = check_quad(&p[0], &p[1], &p[2], &p[3]);
        worst = worst.max(r.planarity_residual).max(r.concyclicity_residual).max(r.cr_residual);
    }
    line("conformal squares", worst, 1e-10);
    let q = extract(surface)?;
    line("gd1", gc_residuals(&q).r_gd1, 1e-12);
    let fr = frame_relation_residuals(surface, &q);
    line("frame relations", fr.recon_x.max(fr.recon_y).max(fr.recon_a).max(fr.recon_b), 1e-9);
    let data = s.data()?;
    if let Ok(b) = builtin_surface(&data.name) {
        let mut pts = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                pts.push((-0.45 + 0.1 * i as f64, -0.45 + 0.1 * j as f64));
            }
        }
        let inv = check_invariants(&b, &pts);
        line("smooth conformality", inv.conformality, 1e-9);
        line("smooth curvature lines", inv.curvature_line, 1e-8);
        line("smooth Gauss equation", inv.gauss, 1e-7);
    }
    Ok(ok)
}

/// 2 for usage and configuration problems, 3 for numerical degeneracy.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::InvalidDomain(_)
            | Error::InvalidInput(_)
            | Error::UnknownName(_)
            | Error::ZeroParameter
            | Error::DegenerateCurve { .. }
            | Error::NonOrthogonal { .. }
            | Error::WrongParity(_)
            | Error::OutOfDomain(_),
        ) => 2,
        Some(_) => 3,
        None => 2,
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("ISOGROW_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| anyhow!("ISOGROW_THREADS must be a positive integer"))?;
        if n == 0 {
            return Err(anyhow!("ISOGROW_THREADS must be a positive integer"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match &cli.command {
        Command::Grow(a) => cmd_grow(a).map(|()| true),
        Command::Transform(a) => cmd_transform(a).map(|()| true),
        Command::Converge(a) => cmd_converge(a).map(|()| true),
        Command::Check(a) => cmd_check(a),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

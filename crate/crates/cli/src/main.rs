//! `vascinit`: solve lumped models, audit traces for periodicity, map
//! centerlines onto volume meshes and write initial conditions.
//!
//! Exit codes: 0 success, 1 periodicity FAIL, 2 malformed input,
//! 3 topology error, 4 any other failure.

mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use config::{Initial, RunConfig, Solver};
use vascinit::init::initial_condition;
use vascinit::io;
use vascinit::mesh::build_node_map;
use vascinit::mesh::fixtures::{bifurcation, disconnected_tubes, straight_tube, BifurcationSpec, Fixture};
use vascinit::network::{simulate_network, simulate_rcr_rk4, InitialState, NetworkOptions};
use vascinit::periodicity::{check_convergence, CheckOptions, FitOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] vascinit::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_parse() => 2,
            CliError::Core(e) if e.is_topology() => 3,
            CliError::Config(_) => 2,
            _ => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "vascinit",
    version,
    about = "Periodic-state checks and initial conditions for vascular flow simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a lumped network and write its outlet trace.
    #[command(name = "solve-0d")]
    Solve0d {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the outlet RCR parameters in boundary-condition format.
        #[arg(long)]
        bc_out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        cycles: Option<usize>,
        #[arg(long)]
        solver: Option<Solver>,
        #[arg(long)]
        initial: Option<Initial>,
    },
    /// Decide whether a multi-outlet trace has reached its periodic state.
    CheckPeriodicity {
        #[arg(long)]
        trace: PathBuf,
        /// RCR parameters per outlet (a network file also works).
        #[arg(long)]
        bc: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Also write the key = value report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Map every mesh node to a centerline node and store the map.
    MapCenterline {
        #[arg(long)]
        centerline: PathBuf,
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write pressure and velocity initial conditions on the mesh nodes.
    GenInit {
        /// Centerline solution (with pressure and, optionally, flow).
        #[arg(long)]
        centerline: PathBuf,
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic mesh and centerline solution.
    Fixture {
        kind: FixtureKind,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Elements across the tube diameter.
        #[arg(long, default_value_t = 20)]
        across: usize,
        /// Element layers along the tube.
        #[arg(long, default_value_t = 40)]
        layers: usize,
        /// Inlet flow written to the centerline solution.
        #[arg(long, default_value_t = 1.0)]
        flow: f64,
        /// Pressure written to the centerline solution.
        #[arg(long, default_value_t = 75.0)]
        pressure: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    Tube,
    Bifurcation,
    Disconnected,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    Ok(io::read_text(path)?)
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(vascinit::Error::from)?;
    Ok(())
}

fn name(path: &Path) -> String {
    path.display().to_string()
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Solve0d { network, out, bc_out, config, cycles, solver, initial } => {
            let mut cfg = RunConfig::load(config.as_deref())?;
            cfg.cycles = cycles.unwrap_or(cfg.cycles);
            cfg.solver = solver.unwrap_or(cfg.solver);
            cfg.initial = initial.unwrap_or(cfg.initial);
            cfg.validate()?;
            solve_0d(&network, &out, bc_out.as_deref(), &cfg)?;
            Ok(0)
        }
        Command::CheckPeriodicity { trace, bc, config, tolerance, report } => {
            let mut cfg = RunConfig::load(config.as_deref())?;
            cfg.tolerance = tolerance.unwrap_or(cfg.tolerance);
            cfg.validate()?;
            let trace_file = io::parse_trace(&read(&trace)?, &name(&trace))?;
            let params = io::parse_boundary_conditions(&read(&bc)?, &name(&bc))?;
            let set = io::trace_set(&trace_file, &params)?;
            let options = CheckOptions {
                epsilon_target: cfg.tolerance,
                fit: FitOptions { floor: cfg.error_floor, ..Default::default() },
                ..Default::default()
            };
            let result = check_convergence(&set, &options)?;
            let text = report::render(&result);
            print!("{text}");
            if let Some(path) = report {
                write(&path, &text)?;
            }
            Ok(if result.converged { 0 } else { 1 })
        }
        Command::MapCenterline { centerline, mesh, out } => {
            let cl = io::parse_centerline_solution(&read(&centerline)?, &name(&centerline))?;
            let mesh = io::parse_mesh(&read(&mesh)?, &name(&mesh))?;
            let start = std::time::Instant::now();
            let map = build_node_map(&cl.centerline, &mesh)?;
            info!(
                "mapped {} nodes to {} centerline nodes in {} layers ({:.3} s)",
                map.len(),
                cl.centerline.len(),
                map.iterations(),
                start.elapsed().as_secs_f64()
            );
            write(&out, io::encode_node_map(&map))?;
            Ok(0)
        }
        Command::GenInit { centerline, mesh, map, out } => {
            let sol = io::parse_centerline_solution(&read(&centerline)?, &name(&centerline))?;
            let mesh = io::parse_mesh(&read(&mesh)?, &name(&mesh))?;
            let bytes = std::fs::read(&map).map_err(vascinit::Error::from)?;
            let node_map = io::decode_node_map(&bytes, &name(&map))?;
            if node_map.len() != mesh.node_count() {
                return Err(CliError::Usage(format!(
                    "map covers {} nodes but the mesh has {}",
                    node_map.len(),
                    mesh.node_count()
                )));
            }
            let pressure =
                sol.pressure.ok_or_else(|| CliError::Usage("centerline solution has no pressure column".into()))?;
            let field = initial_condition(&mesh, &sol.centerline, &node_map, &pressure, sol.flow.as_deref())?;
            write(&out, io::write_initial_condition(&field))?;
            Ok(0)
        }
        Command::Fixture { kind, out_dir, radius, across, layers, flow, pressure } => {
            std::fs::create_dir_all(&out_dir).map_err(vascinit::Error::from)?;
            let fixture = match kind {
                FixtureKind::Tube => straight_tube(radius, 4.0 * radius, across, layers, layers / 2 + 1)?,
                FixtureKind::Bifurcation => bifurcation(&BifurcationSpec {
                    parent_radius: radius,
                    parent_length: 4.0 * radius,
                    child_radius: 0.8 * radius,
                    child_length: 4.0 * radius,
                    spacing: 2.0 * radius / across as f64,
                    station_spacing: 0.2 * radius,
                    ..Default::default()
                })?,
                FixtureKind::Disconnected => disconnected_tubes(radius, 4.0 * radius, across, layers)?,
            };
            write_fixture(&fixture, &out_dir, flow, pressure)?;
            Ok(0)
        }
    }
}

fn solve_0d(network: &Path, out: &Path, bc_out: Option<&Path>, cfg: &RunConfig) -> Result<(), CliError> {
    let dir = network.parent().unwrap_or(Path::new("."));
    let file = io::parse_network(&read(network)?, &name(network), |f| {
        let path = dir.join(f);
        io::parse_inflow(&io::read_text(&path)?, &name(&path))
    })?;
    if file.outlets.is_empty() {
        return Err(CliError::Usage("network declares no RCR outlets".into()));
    }
    let period = file.network.period().ok_or_else(|| CliError::Usage("network has no INFLOW".into()))?;
    let dt = cfg.dt_for(period);
    let trace = match cfg.solver {
        Solver::GenAlpha => {
            let options = NetworkOptions {
                rho_inf: cfg.rho_inf,
                initial: match cfg.initial {
                    Initial::Zero => InitialState::Zero,
                    Initial::Steady => InitialState::Steady,
                },
            };
            file.trace(&simulate_network(&file.network, dt, cfg.cycles, &options)?)
        }
        Solver::Rk4 => {
            let [outlet] = file.outlets.as_slice() else {
                return Err(CliError::Usage("the rk4 solver takes a single RCR outlet".into()));
            };
            let inflow = &file.network.inflows()[0];
            if file.network.inflows().len() != 1 || inflow.node != outlet.node || file.network.elements().len() != 3 {
                return Err(CliError::Usage("the rk4 solver takes one INFLOW feeding one RCR outlet".into()));
            }
            let p = outlet.params;
            let p0 = match cfg.initial {
                Initial::Zero => 0.0,
                Initial::Steady => {
                    p.r_proximal() * inflow.waveform.value_at(0.0) + p.r_distal() * inflow.waveform.mean()
                }
            };
            let solution = simulate_rcr_rk4(&p, &inflow.waveform, p0, dt, cfg.cycles)?;
            let time = (0..solution.len()).map(|k| solution.time(k)).collect();
            io::TraceFile {
                period,
                time,
                ids: vec![outlet.id.clone()],
                flow: solution.element_flows,
                pressure: solution.node_pressures,
            }
        }
    };
    info!("simulated {} cycles of {} steps", cfg.cycles, trace.time.len() / cfg.cycles);
    write(out, io::write_trace(&trace))?;
    if let Some(path) = bc_out {
        write(path, io::write_boundary_conditions(&file.boundary_conditions()))?;
    }
    Ok(())
}

fn write_fixture(fixture: &Fixture<f64>, dir: &Path, flow: f64, pressure: f64) -> Result<(), CliError> {
    let cl = &fixture.centerline;
    // children of a bifurcation split the inlet flow in proportion to area
    let child_area: f64 = {
        let mut seen = std::collections::BTreeMap::new();
        for n in cl.nodes().iter().filter(|n| n.branch != 0) {
            seen.entry(n.branch).or_insert(n.area);
        }
        seen.values().sum()
    };
    let q = cl.nodes().iter().map(|n| if n.branch == 0 { flow } else { flow * n.area / child_area }).collect();
    let solution =
        io::CenterlineSolution { centerline: cl.clone(), pressure: Some(vec![pressure; cl.len()]), flow: Some(q) };
    write(&dir.join("mesh.txt"), io::write_mesh(&fixture.mesh))?;
    write(&dir.join("centerline.txt"), io::write_centerline_solution(&solution))?;
    info!(
        "wrote {} nodes, {} cells, {} centerline nodes",
        fixture.mesh.node_count(),
        fixture.mesh.cells().len(),
        cl.len()
    );
    Ok(())
}

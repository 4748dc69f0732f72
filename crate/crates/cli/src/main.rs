use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use weylkit::GridSpec;
use weylkit_cli::commands::{self, Outcome};

#[derive(Parser)]
#[command(
    name = "weylkit",
    about = "Phase-space quantization toolkit: star products, transformation \
             kernels, Wigner transforms, propagators, and a verification suite",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// points per axis of the square phase-space grid
    #[arg(long, default_value_t = 128)]
    grid: usize,
    /// half-width of the square phase-space domain
    #[arg(long, default_value_t = 4.0)]
    domain: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

impl GridArgs {
    fn spec(&self) -> Result<GridSpec> {
        GridSpec::square(self.domain, self.grid, self.hbar).map_err(|e| anyhow::anyhow!("{e}"))
    }
}

#[derive(Args, Clone)]
struct MapArgs {
    /// identity | sl2 | fourier | lp | gauge | contact | darboux | darboux2 | monomial | dec1
    #[arg(long)]
    map: String,
    /// numeric parameters, e.g. "1,0,1,1" for sl2
    #[arg(long)]
    params: Option<String>,
    /// gauge field, e.g. "const:2", "linear:0.5", "poly:0,1,2"
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    /// intertwiner profile g
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// point-map profile, e.g. "exp", "sinh:0.5", "identity"
    #[arg(long = "q-func")]
    q_func: Option<String>,
}

impl MapArgs {
    fn build(&self) -> Result<weylkit::maps::MapSpec> {
        commands::build_map(
            &self.map,
            self.params.as_deref(),
            self.a.as_deref(),
            self.tau,
            self.g.as_deref(),
            self.alpha,
            self.q_func.as_deref(),
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Weyl symbol of a state projector (or a symbol back to a matrix)
    Symbol {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        invert: bool,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Truncated star product of two sampled symbols
    Star {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 8)]
        order: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Moyal bracket of two sampled symbols
    Bracket {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 8)]
        order: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Phase-space kernel u(p,q) and the position-representation kernel
    Kernel {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// write u samples here (CSV p,q,re,im)
        #[arg(long)]
        emit: Option<PathBuf>,
        /// write the coordinate kernel here (CSV y,x,re,im or delta JSON)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a map's coordinate kernel to a wavefunction CSV
    Transform {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Wigner transform of a wavefunction CSV
    Wigner {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Propagate a sampled symbol by a generator flow or a kernel sandwich
    Propagate {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// flow | kernel
        #[arg(long, default_value = "flow")]
        route: String,
        /// generator monomial powers "m,n" (flow route)
        #[arg(long)]
        generator: Option<String>,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// map family flags (kernel route)
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value_t = 8)]
        order: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification suite and emit the JSON report
    Verify {
        /// check-id prefixes to run (default: all)
        #[arg(long)]
        suite: Vec<String>,
        /// ħ values (default 1.0 and 0.5)
        #[arg(long)]
        hbar: Vec<f64>,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long = "tol-scale", default_value_t = 1.0)]
        tol_scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute a JSON job spec
    Run {
        job: PathBuf,
    },
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    match cli.cmd {
        Command::Symbol {
            input,
            invert,
            grid,
            out,
        } => {
            let spec = grid.spec()?;
            commands::cmd_symbol(
                input.to_str().unwrap(),
                invert,
                Some(&spec),
                grid.hbar,
                out.to_str().unwrap(),
            )
        }
        Command::Star {
            input,
            input2,
            grid,
            order,
            out,
        } => commands::cmd_star(
            input.to_str().unwrap(),
            input2.to_str().unwrap(),
            &grid.spec()?,
            order,
            false,
            out.to_str().unwrap(),
        ),
        Command::Bracket {
            input,
            input2,
            grid,
            order,
            out,
        } => commands::cmd_star(
            input.to_str().unwrap(),
            input2.to_str().unwrap(),
            &grid.spec()?,
            order,
            true,
            out.to_str().unwrap(),
        ),
        Command::Kernel {
            map,
            grid,
            emit,
            out,
        } => commands::cmd_kernel(
            &map.build()?,
            &grid.spec()?,
            emit.as_deref().and_then(|p| p.to_str()),
            out.as_deref().and_then(|p| p.to_str()),
        ),
        Command::Transform {
            map,
            input,
            hbar,
            out,
        } => commands::cmd_transform(
            &map.build()?,
            input.to_str().unwrap(),
            hbar,
            out.to_str().unwrap(),
        ),
        Command::Wigner { input, grid, out } => commands::cmd_wigner(
            input.to_str().unwrap(),
            &grid.spec()?,
            out.to_str().unwrap(),
        ),
        Command::Propagate {
            input,
            grid,
            route,
            generator,
            gamma,
            map,
            params,
            order,
            out,
        } => {
            let map_spec = match map {
                Some(fam) => Some(commands::build_map(
                    &fam,
                    params.as_deref(),
                    None,
                    None,
                    None,
                    None,
                    None,
                )?),
                None => None,
            };
            commands::cmd_propagate(
                input.to_str().unwrap(),
                &grid.spec()?,
                &route,
                map_spec.as_ref(),
                generator.as_deref(),
                gamma,
                order,
                out.to_str().unwrap(),
            )
        }
        Command::Verify {
            suite,
            hbar,
            grid,
            tol_scale,
            out,
        } => {
            let hbars = if hbar.is_empty() { vec![1.0, 0.5] } else { hbar };
            commands::cmd_verify(
                &suite,
                &hbars,
                grid,
                tol_scale,
                out.as_deref().and_then(|p| p.to_str()),
            )
        }
        Command::Run { job } => commands::run_job(&job),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

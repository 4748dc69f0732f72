//! Subcommand implementations shared by the flag interface and JSON jobs.

use crate::job::JobSpec;
use crate::verify;
use anyhow::{anyhow, bail, Context, Result};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use weylkit::grid::{grid_moyal_bracket, grid_star, GridSymbol};
use weylkit::hilbert::{
    canonical_symbol_spec, operator_of_symbol, symbol_of_operator, Grid1, OperatorMatrix,
    Wavefunction,
};
use weylkit::maps::{MapFamily, MapSpec, NamedFunc};
use weylkit::propagator::{
    apply_propagator, propagator_apply_flow, propagator_from_kernel,
};
use weylkit::symbolic::monomial_image;
use weylkit::{Exact, GridSpec};

/// Exit codes: 0 success, 1 failed checks, 2 validation problems.
pub enum Outcome {
    Ok,
    ChecksFailed,
}

pub fn default_seed() -> u64 {
    std::env::var("WEYLKIT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20260808)
}

pub fn build_map(
    family: &str,
    params: Option<&str>,
    a: Option<&str>,
    tau: Option<f64>,
    g: Option<&str>,
    alpha: Option<f64>,
    q_func: Option<&str>,
) -> Result<MapSpec> {
    let nums = |s: Option<&str>| -> Result<Vec<f64>> {
        s.unwrap_or("")
            .split(',')
            .filter(|v| !v.trim().is_empty())
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| anyhow!("bad number `{v}` in --params"))
            })
            .collect()
    };
    let spec = match family {
        "identity" => MapSpec::new(MapFamily::Identity),
        "sl2" => {
            let v = nums(params)?;
            if v.len() != 4 {
                bail!("sl2 needs --params a,b,c,d");
            }
            MapSpec::new(MapFamily::Sl2 {
                a: v[0],
                b: v[1],
                c: v[2],
                d: v[3],
            })
        }
        "fourier" => MapSpec::new(MapFamily::Fourier),
        "lp" | "linear_potential" => {
            let v = nums(params)?;
            if v.len() != 1 {
                bail!("lp needs --params a");
            }
            MapSpec::new(MapFamily::LinearPotential { a: v[0] })
        }
        "gauge" => {
            let af = NamedFunc::parse(a.ok_or_else(|| anyhow!("gauge needs --a"))?)
                .map_err(|e| anyhow!("{e}"))?;
            MapSpec::new(MapFamily::Gauge {
                a: af,
                tau: tau.unwrap_or(1.0),
            })
        }
        "contact" => {
            let qf = NamedFunc::parse(q_func.ok_or_else(|| anyhow!("contact needs --q-func"))?)
                .map_err(|e| anyhow!("{e}"))?;
            MapSpec::new(MapFamily::Contact { q_func: qf })
        }
        "darboux" => {
            let gf = NamedFunc::parse(g.ok_or_else(|| anyhow!("darboux needs --g"))?)
                .map_err(|e| anyhow!("{e}"))?;
            MapSpec::new(MapFamily::Darboux {
                g: gf,
                alpha: alpha.unwrap_or(0.5),
            })
        }
        "darboux2" => {
            let gf = NamedFunc::parse(g.ok_or_else(|| anyhow!("darboux2 needs --g"))?)
                .map_err(|e| anyhow!("{e}"))?;
            MapSpec::new(MapFamily::DarbouxB {
                g: gf,
                alpha: alpha.unwrap_or(0.5),
            })
        }
        "monomial" => {
            let v = nums(params)?;
            if v.len() != 3 {
                bail!("monomial needs --params m,n,beta");
            }
            MapSpec::new(MapFamily::MonomialFlow {
                m: v[0] as u32,
                n: v[1] as u32,
                beta: v[2],
            })
        }
        "dec1" => {
            let v = nums(params)?;
            if v.len() != 1 {
                bail!("dec1 needs --params a");
            }
            MapSpec::dec1(v[0])
        }
        other => bail!("unknown map family `{other}`"),
    };
    spec.validate().map_err(|e| anyhow!("{e}"))?;
    Ok(spec)
}

fn open_out(path: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {path}"))?,
    ))
}

fn read_wavefunction(path: &str, hbar: f64) -> Result<Wavefunction<f64>> {
    let f = File::open(path).with_context(|| format!("opening {path}"))?;
    let s = weylkit::hilbert::Samples1D::read_csv(BufReader::new(f), hbar)
        .map_err(|e| anyhow!("{e}"))?;
    Ok(Wavefunction(s))
}

fn read_symbol(path: &str, spec: &GridSpec) -> Result<GridSymbol<f64>> {
    let f = File::open(path).with_context(|| format!("opening {path}"))?;
    GridSymbol::read_csv(BufReader::new(f), spec).map_err(|e| anyhow!("{e}"))
}

pub fn cmd_symbol(
    input: &str,
    invert: bool,
    spec: Option<&GridSpec>,
    hbar: f64,
    output: &str,
) -> Result<Outcome> {
    if invert {
        let spec = spec.ok_or_else(|| anyhow!("symbol --invert needs a grid"))?;
        let sym = read_symbol(input, spec)?;
        let m = operator_of_symbol(&sym).map_err(|e| anyhow!("{e}"))?;
        m.write_csv(open_out(output)?)?;
    } else {
        let psi = read_wavefunction(input, hbar)?;
        let m = OperatorMatrix::rank_one(&psi);
        let spec = canonical_symbol_spec(&m);
        let sym = symbol_of_operator(&m, &spec).map_err(|e| anyhow!("{e}"))?;
        sym.write_csv(open_out(output)?)?;
    }
    Ok(Outcome::Ok)
}

pub fn cmd_star(
    input1: &str,
    input2: &str,
    spec: &GridSpec,
    order: u32,
    bracket: bool,
    output: &str,
) -> Result<Outcome> {
    let f = read_symbol(input1, spec)?;
    let g = read_symbol(input2, spec)?;
    let r = if bracket {
        grid_moyal_bracket(&f, &g, order, 8)
    } else {
        grid_star(&f, &g, order, 8)
    }
    .map_err(|e| anyhow!("{e}"))?;
    r.value.write_csv(open_out(output)?)?;
    eprintln!(
        "order {} truncation: last term {:.3e} (interior band {})",
        order, r.last_term_norm, r.interior_band
    );
    Ok(Outcome::Ok)
}

pub fn cmd_kernel(
    map: &MapSpec,
    spec: &GridSpec,
    emit_u: Option<&str>,
    kernel_out: Option<&str>,
) -> Result<Outcome> {
    let u = map.u_symbol(spec).map_err(|e| anyhow!("{e}"))?;
    if let Some(path) = emit_u {
        u.write_csv(open_out(path)?)?;
    }
    if let Some(path) = kernel_out {
        let grid = Grid1::new(spec.q_min, spec.q_max, spec.nq);
        let k = map
            .position_kernel(grid.clone(), grid, spec.hbar)
            .map_err(|e| anyhow!("{e}"))?;
        k.write_csv(open_out(path)?)?;
    }
    Ok(Outcome::Ok)
}

pub fn cmd_transform(map: &MapSpec, input: &str, hbar: f64, output: &str) -> Result<Outcome> {
    let psi = read_wavefunction(input, hbar)?;
    let grid = Grid1::new(psi.0.min, psi.0.max, psi.0.n);
    let k = map
        .position_kernel(grid.clone(), grid, hbar)
        .map_err(|e| anyhow!("{e}"))?;
    let out = k
        .apply_position(&psi)
        .map_err(|e| anyhow!("{e}"))?
        .expect_position();
    out.0.write_csv(open_out(output)?)?;
    Ok(Outcome::Ok)
}

pub fn cmd_wigner(input: &str, spec: &GridSpec, output: &str) -> Result<Outcome> {
    let psi = read_wavefunction(input, spec.hbar)?;
    let w = weylkit::grid::wigner_transform(&psi, spec).map_err(|e| anyhow!("{e}"))?;
    w.write_csv(open_out(output)?)?;
    Ok(Outcome::Ok)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_propagate(
    input: &str,
    spec: &GridSpec,
    route: &str,
    map: Option<&MapSpec>,
    generator: Option<&str>,
    gamma: f64,
    order: u32,
    output: &str,
) -> Result<Outcome> {
    let w = read_symbol(input, spec)?;
    let out = match route {
        "flow" => {
            let gen_spec = generator.ok_or_else(|| anyhow!("flow route needs --generator m,n"))?;
            let parts: Vec<u32> = gen_spec
                .split(',')
                .map(|v| v.trim().parse::<u32>().map_err(|_| anyhow!("bad generator")))
                .collect::<Result<_>>()?;
            if parts.len() != 2 {
                bail!("--generator takes m,n");
            }
            let v = monomial_image::<Exact>(parts[0], parts[1]);
            propagator_apply_flow(&v, gamma, &w).map_err(|e| anyhow!("{e}"))?
        }
        "kernel" => {
            let map = map.ok_or_else(|| anyhow!("kernel route needs --map"))?;
            let u = map.u_symbol(spec).map_err(|e| anyhow!("{e}"))?;
            let g = propagator_from_kernel(&u, order).map_err(|e| anyhow!("{e}"))?;
            apply_propagator(&g, &w).map_err(|e| anyhow!("{e}"))?
        }
        other => bail!("unknown route `{other}` (flow|kernel)"),
    };
    out.write_csv(open_out(output)?)?;
    Ok(Outcome::Ok)
}

pub fn cmd_verify(
    suite: &[String],
    hbars: &[f64],
    grid: usize,
    tol_scale: f64,
    out: Option<&str>,
) -> Result<Outcome> {
    // "all" (or nothing) selects the full suite
    let selection: Vec<String> = suite
        .iter()
        .filter(|s| s.as_str() != "all")
        .cloned()
        .collect();
    let report = verify::verify_suite(&selection, hbars, grid, tol_scale, default_seed());
    let json = serde_json::to_string_pretty(&report)?;
    match out {
        Some(path) => {
            let mut w = open_out(path)?;
            writeln!(w, "{json}")?;
        }
        None => println!("{json}"),
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.informational && !c.pass)
        .map(|c| c.check_id.as_str())
        .collect();
    if failed.is_empty() {
        eprintln!(
            "verification: {} checks pass ({} informational)",
            report.checks.iter().filter(|c| !c.informational).count(),
            report.checks.iter().filter(|c| c.informational).count()
        );
        Ok(Outcome::Ok)
    } else {
        eprintln!("verification FAILED: {}", failed.join(", "));
        Ok(Outcome::ChecksFailed)
    }
}

/// Run a JSON job; schema violations surface as validation errors (exit 2).
pub fn run_job(path: &Path) -> Result<Outcome> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let job = JobSpec::from_reader(BufReader::new(f)).map_err(|e| anyhow!("{e}"))?;
    if let Some(g) = &job.grid {
        g.validate().map_err(|e| anyhow!("{e}"))?;
    }
    if let Some(m) = &job.map {
        m.validate().map_err(|e| anyhow!("{e}"))?;
    }
    let hbar = job.hbar.unwrap_or(1.0);
    let need = |x: &Option<String>, what: &str| -> Result<String> {
        x.clone().ok_or_else(|| anyhow!("job needs `{what}`"))
    };
    match job.command.as_str() {
        "symbol" => cmd_symbol(
            &need(&job.input, "input")?,
            job.invert.unwrap_or(false),
            job.grid.as_ref(),
            hbar,
            &need(&job.output, "output")?,
        ),
        "star" | "bracket" => {
            let spec = job.grid.clone().ok_or_else(|| anyhow!("job needs `grid`"))?;
            cmd_star(
                &need(&job.input, "input")?,
                &need(&job.input2, "input2")?,
                &spec,
                job.order.unwrap_or(8),
                job.command == "bracket",
                &need(&job.output, "output")?,
            )
        }
        "kernel" => {
            let spec = job.grid.clone().ok_or_else(|| anyhow!("job needs `grid`"))?;
            let map = job.map.clone().ok_or_else(|| anyhow!("job needs `map`"))?;
            cmd_kernel(&map, &spec, job.emit.as_deref(), job.output.as_deref())
        }
        "transform" => {
            let map = job.map.clone().ok_or_else(|| anyhow!("job needs `map`"))?;
            cmd_transform(&map, &need(&job.input, "input")?, hbar, &need(&job.output, "output")?)
        }
        "wigner" => {
            let spec = job.grid.clone().ok_or_else(|| anyhow!("job needs `grid`"))?;
            cmd_wigner(&need(&job.input, "input")?, &spec, &need(&job.output, "output")?)
        }
        "propagate" => {
            let spec = job.grid.clone().ok_or_else(|| anyhow!("job needs `grid`"))?;
            cmd_propagate(
                &need(&job.input, "input")?,
                &spec,
                job.route.as_deref().unwrap_or("flow"),
                job.map.as_ref(),
                job.generator.as_deref(),
                job.gamma.unwrap_or(0.0),
                job.order.unwrap_or(8),
                &need(&job.output, "output")?,
            )
        }
        "verify" => cmd_verify(
            job.suite.as_deref().unwrap_or(&[]),
            job.hbars.as_deref().unwrap_or(&[1.0, 0.5]),
            job.grid_points.unwrap_or(128),
            job.tol_scale.unwrap_or(1.0),
            job.output.as_deref(),
        ),
        other => bail!("unknown command `{other}`"),
    }
}

//! Run loop and CSV output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{Mode, RunConfig};
use crate::driver::{Diagnostics, Simulation};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::homogeneous::{
    analytic_temperature_gap, analytic_velocity_gap, kinetic_sample, relative_entropy,
    HomogeneousSystem, MomentState,
};
use crate::macrofv::FvOptions;
use crate::model::SpeciesMoments;
use crate::reference::GridDistribution;

pub const TIMESERIES_HEADER: [&str; 14] = [
    "t",
    "u_gap_inf",
    "t_gap_inf",
    "u_gap_sq",
    "t_diff",
    "analytic_u_gap_sq",
    "analytic_t_diff",
    "mass1",
    "mass2",
    "momentum",
    "energy",
    "abs_w1",
    "abs_w2",
    "entropy",
];

/// One line of the time series; quantities that do not apply are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeseriesRow {
    pub diag: Diagnostics,
    pub analytic_u_gap_sq: f64,
    pub analytic_t_diff: f64,
    pub entropy: f64,
}

impl TimeseriesRow {
    fn values(&self) -> [f64; 14] {
        let d = &self.diag;
        [
            d.t,
            d.u_gap_inf,
            d.t_gap_inf,
            d.u_gap_sq,
            d.t_diff,
            self.analytic_u_gap_sq,
            self.analytic_t_diff,
            d.mass[0],
            d.mass[1],
            d.momentum,
            d.energy,
            d.abs_weight[0],
            d.abs_weight[1],
            self.entropy,
        ]
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

/// Writes `contents` next to `path` and renames it into place.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut file = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
    file.write_all(contents).map_err(|e| io_err(&tmp, e))?;
    file.sync_all().map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

pub fn write_timeseries(path: &Path, rows: &[TimeseriesRow]) -> Result<()> {
    let mut out = TIMESERIES_HEADER.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.values().iter().map(|&x| fmt(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Writes `f[cell][node]` as `x,v,f` rows at cell centers and velocity nodes.
pub fn write_snapshot(path: &Path, grid: &GridSpec, f: &[Vec<f64>]) -> Result<()> {
    let mut out = String::from("x,v,f\n");
    for (c, row) in f.iter().enumerate() {
        let x = grid.space.center(c);
        for (&v, &fv) in grid.velocity.nodes().iter().zip(row) {
            out.push_str(&format!("{},{},{}\n", fmt(x), fmt(v), fmt(fv)));
        }
    }
    write_atomic(path, out.as_bytes())
}

/// Files produced by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub rows: Vec<TimeseriesRow>,
    pub timeseries: PathBuf,
    pub snapshots: Vec<PathBuf>,
    pub unmatched_cells: usize,
}

fn snapshot_path(dir: &Path, species: usize, index: usize) -> PathBuf {
    dir.join(format!("snapshot_s{}_{index:05}.csv", species + 1))
}

fn initial_moments(cfg: &RunConfig, grid: &GridSpec) -> Result<[Vec<SpeciesMoments>; 2]> {
    let mr = [1.0, cfg.params()?.mass_ratio()];
    let profiles = cfg.profiles();
    Ok(std::array::from_fn(|k| {
        (0..grid.space.nx).map(|c| profiles[k].moments(grid.space.center(c), mr[k])).collect()
    }))
}

/// Builds the particle simulation of a `homogeneous` or `general` config.
pub fn build_simulation(cfg: &RunConfig) -> Result<Simulation> {
    let params = cfg.params()?;
    let mr = params.mass_ratio();
    let grid = cfg.grid()?;
    let moments = initial_moments(cfg, &grid)?;
    let [p1, p2] = cfg.profiles();
    let opts = FvOptions { transport: cfg.mode == Mode::General, ..FvOptions::default() };
    Simulation::new(
        params,
        grid,
        moments,
        move |x, v| p1.remainder(x, v, 1.0),
        move |x, v| p2.remainder(x, v, mr),
        [cfg.particles.np1, cfg.particles.np2],
        cfg.particles.seed,
        opts,
    )
}

pub fn build_reference(cfg: &RunConfig) -> Result<GridDistribution> {
    let mr = cfg.params()?.mass_ratio();
    let [p1, p2] = cfg.profiles();
    Ok(GridDistribution::from_fn(cfg.grid()?, |x, v| p1.eval(x, v, 1.0), |x, v| p2.eval(x, v, mr)))
}

fn sim_row(sim: &Simulation, analytic: Option<(&MomentState, &HomogeneousSystem)>) -> Result<TimeseriesRow> {
    let diag = sim.diagnostics()?;
    let (au, at) = match analytic {
        Some((init, sys)) => (analytic_velocity_gap(diag.t, init, sys), analytic_temperature_gap(diag.t, init, sys)),
        None => (f64::NAN, f64::NAN),
    };
    let entropy = if analytic.is_some() { reconstructed_entropy(sim).unwrap_or(f64::NAN) } else { f64::NAN };
    Ok(TimeseriesRow { diag, analytic_u_gap_sq: au, analytic_t_diff: at, entropy })
}

/// `H(f1|M1) + H(f2|M2)` of the first cell's reconstruction; fails where
/// the histogram has negative bins.
fn reconstructed_entropy(sim: &Simulation) -> Result<f64> {
    let prims = sim.primitives()?;
    let mr = [1.0, sim.params.mass_ratio()];
    let mut h = 0.0;
    for k in 0..2 {
        let f = sim.reconstruct(k)?;
        h += relative_entropy(&f[0], &prims[k][0], mr[k], &sim.grid.velocity)?;
    }
    Ok(h)
}

fn reference_row(st: &GridDistribution, cfg: &RunConfig) -> Result<TimeseriesRow> {
    let p = cfg.mixture_params();
    let mr = p.mass_ratio();
    let m = st.moments(&p);
    let nx = m[0].len() as f64;
    let (t1, t2) = (st.totals(0), st.totals(1));
    let mut diag = Diagnostics {
        t: st.t,
        u_gap_inf: 0.0,
        t_gap_inf: 0.0,
        u_gap_sq: 0.0,
        t_diff: 0.0,
        mass: [t1[0], t2[0]],
        momentum: t1[1] + mr * t2[1],
        energy: 0.5 * (t1[2] + mr * t2[2]),
        abs_weight: [f64::NAN; 2],
    };
    for (a, b) in m[0].iter().zip(&m[1]) {
        diag.u_gap_inf = diag.u_gap_inf.max((a.u - b.u).abs());
        diag.t_gap_inf = diag.t_gap_inf.max((a.t - b.t).abs());
        diag.u_gap_sq += (a.u - b.u).powi(2) / nx;
        diag.t_diff += (a.t - b.t) / nx;
    }
    let entropy = if st.grid.space.nx == 1 {
        kinetic_sample(st.t, st.cell(0, 0), st.cell(1, 0), &p, &st.grid.velocity)
            .map_or(f64::NAN, |s| s.total_entropy())
    } else {
        f64::NAN
    };
    Ok(TimeseriesRow { diag, analytic_u_gap_sq: f64::NAN, analytic_t_diff: f64::NAN, entropy })
}

fn grid_rows(st: &GridDistribution, k: usize) -> Vec<Vec<f64>> {
    (0..st.grid.space.nx).map(|c| st.cell(k, c).to_vec()).collect()
}

/// Runs a configuration, writing `timeseries.csv`, `config.json` and one
/// snapshot per species and output time into `out_dir`.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<RunOutput> {
    cfg.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    write_atomic(&out_dir.join("config.json"), cfg.to_json().as_bytes())?;
    let steps = cfg.steps();
    let every = cfg.time.output_every;
    let dt = cfg.time.dt;
    let mut rows = Vec::new();
    let mut snapshots = Vec::new();
    let mut unmatched_cells = 0;
    let mut emit = |index: usize, grid: &GridSpec, f: [Vec<Vec<f64>>; 2]| -> Result<()> {
        for (k, fk) in f.iter().enumerate() {
            let path = snapshot_path(out_dir, k, index);
            write_snapshot(&path, grid, fk)?;
            snapshots.push(path);
        }
        Ok(())
    };
    match cfg.mode {
        Mode::Homogeneous | Mode::General => {
            let mut sim = build_simulation(cfg)?;
            let analytic = if cfg.mode == Mode::Homogeneous {
                let m = sim.primitives()?;
                let init = MomentState { u1: m[0][0].u, u2: m[1][0].u, t1: m[0][0].t, t2: m[1][0].t };
                Some((init, HomogeneousSystem { params: sim.params, n1: m[0][0].n, n2: m[1][0].n }))
            } else {
                None
            };
            let an = analytic.as_ref().map(|(a, b)| (a, b));
            rows.push(sim_row(&sim, an)?);
            emit(0, &sim.grid, [sim.reconstruct(0)?, sim.reconstruct(1)?])?;
            for step in 1..=steps {
                sim.step(dt)?;
                if step % every == 0 || step == steps {
                    rows.push(sim_row(&sim, an)?);
                    emit(rows.len() - 1, &sim.grid, [sim.reconstruct(0)?, sim.reconstruct(1)?])?;
                }
            }
            unmatched_cells = sim.unmatched_cells;
        }
        Mode::Reference => {
            let p = cfg.mixture_params();
            let mut st = build_reference(cfg)?;
            rows.push(reference_row(&st, cfg)?);
            emit(0, &st.grid, [grid_rows(&st, 0), grid_rows(&st, 1)])?;
            for step in 1..=steps {
                st.dvm_step(&p, dt).map_err(|e| Error::Step { step, source: Box::new(e) })?;
                if step % every == 0 || step == steps {
                    rows.push(reference_row(&st, cfg)?);
                    emit(rows.len() - 1, &st.grid, [grid_rows(&st, 0), grid_rows(&st, 1)])?;
                }
            }
        }
    }
    let timeseries = out_dir.join("timeseries.csv");
    write_timeseries(&timeseries, &rows)?;
    Ok(RunOutput { rows, timeseries, snapshots, unmatched_cells })
}

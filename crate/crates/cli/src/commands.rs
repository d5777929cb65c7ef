//! The four subcommands. Each returns a [`Table`] whose row order depends only
//! on the configuration, never on thread scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use stratqed::green::{green_part, total_green_in, GreenOptions, GreenSample};
use stratqed::iorel::{energy_balance, find_surface_poles, noise_kernels, polarization_matrices};
use stratqed::stack::slab_rt_full;
use stratqed::{Complex3Tensor, Error, LayerStack, ModeIndex, Polarization, Region};

use crate::config::{LambdaPoint, RunConfig};
use crate::output::{Cell, Table};

/// Deliberate corruption used to prove that a check can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Scale the reflection coefficient by 1.01 inside the balance check.
    Balance,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub jobs: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { jobs: 1, seed: 0, fault: None }
    }
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool")
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Degenerate(_) => "degenerate",
        Error::NonConvergence { .. } => "non_convergence",
        Error::LosslessPole { .. } => "lossless_pole",
        Error::RegionMismatch(_) => "region_mismatch",
        Error::Coincident => "coincident",
        Error::IllPosed(_) => "ill_posed",
        Error::Precondition(_) => "precondition",
        Error::InvalidStack(_) => "invalid_stack",
    }
}

fn status(e: &Error) -> [Cell; 2] {
    [Cell::from(error_kind(e)), Cell::Text(e.to_string())]
}

fn ok() -> [Cell; 2] {
    [Cell::from("ok"), Cell::Empty]
}

fn offdiag(m: &[[Complex64; 2]; 2]) -> f64 {
    m[0][1].norm().max(m[1][0].norm())
}

/// All (omega, lambda) samples in omega-major order.
fn grid(cfg: &RunConfig) -> stratqed::Result<Vec<(f64, LambdaPoint)>> {
    let mut out = Vec::new();
    for w in cfg.omegas() {
        for p in cfg.lambda_points(w)? {
            out.push((w, p));
        }
    }
    Ok(out)
}

pub const SPECTRUM_COLUMNS: [&str; 15] = [
    "omega", "lambda", "angle_deg", "pol", "re_r", "im_r", "re_t", "im_t", "r2", "t2", "absorption", "residual",
    "cross", "status", "detail",
];

fn spectrum_row(stack: &LayerStack, omega: f64, p: LambdaPoint, pol: Polarization) -> Vec<Cell> {
    let head = vec![Cell::Num(omega), Cell::Num(p.lambda), p.angle_deg.into(), Cell::from(pol.label())];
    let mode = ModeIndex::new(omega, p.lambda, pol);
    let fill = |mut head: Vec<Cell>, e: &Error| {
        head.extend(std::iter::repeat(Cell::Empty).take(SPECTRUM_COLUMNS.len() - 6));
        head.extend(status(e));
        head
    };
    let rt = match slab_rt_full(stack, &mode) {
        Ok(rt) => rt,
        Err(e) => return fill(head, &e),
    };
    let cross = match polarization_matrices(stack, omega, p.lambda) {
        Ok((r, t)) => offdiag(&r).max(offdiag(&t)),
        Err(e) => return fill(head, &e),
    };
    let (absorption, residual, state) = match energy_balance(stack, &mode) {
        Ok(b) => (Some(b.absorption), Some(b.residual), ok()),
        // no balance for evanescent or absorbing exteriors; the coefficients still stand
        Err(Error::Precondition(_)) => (None, None, ok()),
        Err(e) => (None, None, status(&e)),
    };
    let mut row = head;
    row.extend([
        Cell::Num(rt.r.re),
        Cell::Num(rt.r.im),
        Cell::Num(rt.t.re),
        Cell::Num(rt.t.im),
        Cell::Num(rt.r.norm_sqr()),
        Cell::Num(rt.t.norm_sqr()),
        absorption.into(),
        residual.into(),
        Cell::Num(cross),
    ]);
    row.extend(state);
    row
}

pub fn spectrum(cfg: &RunConfig, opts: &RunOptions) -> stratqed::Result<Table> {
    let stack = cfg.layer_stack()?;
    let mut tasks = Vec::new();
    for (w, p) in grid(cfg)? {
        for &pol in &cfg.polarizations {
            tasks.push((w, p, pol));
        }
    }
    let rows: Vec<Vec<Cell>> =
        pool(opts.jobs).install(|| tasks.par_iter().map(|&(w, p, pol)| spectrum_row(&stack, w, p, pol)).collect());
    let mut t = Table::new("spectrum", &SPECTRUM_COLUMNS);
    t.rows = rows;
    Ok(t)
}

const AXES: [char; 3] = ['x', 'y', 'z'];

pub fn green(cfg: &RunConfig, opts: &RunOptions) -> stratqed::Result<Table> {
    let stack = cfg.layer_stack()?;
    let req = cfg
        .green
        .as_ref()
        .ok_or_else(|| Error::Precondition("the green command needs a `green` section in the config".into()))?;
    let omegas = cfg.omegas();
    let eval = |w: f64| -> stratqed::Result<GreenSample> {
        let o = cfg.green_options(&stack, w)?;
        match req.part {
            Some(label) => green_part(&stack, w, label, req.field, req.source, &o),
            None => total_green_in(
                &stack,
                w,
                stack.region_of(req.field[2]),
                stack.region_of(req.source[2]),
                req.field,
                req.source,
                &o,
            ),
        }
    };
    let results: Vec<_> = pool(opts.jobs).install(|| omegas.par_iter().map(|&w| eval(w)).collect());
    let mut t = Table::new("green", &["omega", "component", "re", "im", "error_bound", "n_terms", "status", "detail"]);
    for (w, res) in omegas.iter().zip(results) {
        match res {
            Ok(g) => {
                for i in 0..3 {
                    for j in 0..3 {
                        let v = g.value.get(i, j);
                        t.push(vec![
                            Cell::Num(*w),
                            Cell::Text(format!("{}{}", AXES[i], AXES[j])),
                            Cell::Num(v.re),
                            Cell::Num(v.im),
                            Cell::Num(g.error_bound),
                            Cell::Int(g.n_terms as i64),
                            Cell::from(if g.truncated { "truncated" } else { "ok" }),
                            Cell::Empty,
                        ]);
                    }
                }
            }
            Err(e) => {
                let mut row = vec![Cell::Num(*w), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty];
                row.extend(status(&e));
                t.push(row);
            }
        }
    }
    Ok(t)
}

pub fn poles(cfg: &RunConfig, opts: &RunOptions) -> stratqed::Result<Table> {
    let stack = cfg.layer_stack()?;
    let req = cfg
        .poles
        .as_ref()
        .ok_or_else(|| Error::Precondition("the poles command needs a `poles` section in the config".into()))?;
    let mut tasks = Vec::new();
    for w in cfg.omegas() {
        for &pol in &cfg.polarizations {
            tasks.push((w, pol));
        }
    }
    let results: Vec<_> = pool(opts.jobs).install(|| {
        tasks
            .par_iter()
            .map(|&(w, pol)| find_surface_poles(&stack, w, pol, req.window_at(w, stack.units), req.tol))
            .collect()
    });
    let mut t = Table::new("poles", &["omega", "pol", "re_lambda", "im_lambda", "residual", "winding", "status", "detail"]);
    for (&(w, pol), res) in tasks.iter().zip(results) {
        let head = || vec![Cell::Num(w), Cell::from(pol.label())];
        match res {
            Ok(search) => {
                for p in &search.poles {
                    let mut row = head();
                    row.extend([
                        Cell::Num(p.lambda.re),
                        Cell::Num(p.lambda.im),
                        Cell::Num(p.residual),
                        Cell::Int(search.winding as i64),
                    ]);
                    row.extend(ok());
                    t.push(row);
                }
                for r in &search.unpolished {
                    let c = r.center();
                    let mut row = head();
                    row.extend([
                        Cell::Num(c.re),
                        Cell::Num(c.im),
                        Cell::Empty,
                        Cell::Int(search.winding as i64),
                        Cell::from("non_convergence"),
                        Cell::from("unpolished zero near this point"),
                    ]);
                    t.push(row);
                }
            }
            Err(e) => {
                let mut row = head();
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]);
                row.extend(status(&e));
                t.push(row);
            }
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail,
    Skip(String),
    /// The check could not be evaluated; counts as a failure.
    Error(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub verdict: Verdict,
    pub residual: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl CheckResult {
    fn judge(name: &'static str, residual: f64, tolerance: f64, samples: usize, skip: &str) -> Self {
        let verdict = if samples == 0 {
            Verdict::Skip(skip.to_string())
        } else if residual <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self { name, verdict, residual, tolerance, samples }
    }

    fn errored(name: &'static str, tolerance: f64, e: &Error) -> Self {
        let verdict = match e {
            Error::LosslessPole { .. } => Verdict::Skip(e.to_string()),
            _ => Verdict::Error(format!("{}: {e}", error_kind(e))),
        };
        Self { name, verdict, residual: f64::INFINITY, tolerance, samples: 0 }
    }
}

fn propagating(stack: &LayerStack, omega: f64, lambda: f64) -> stratqed::Result<bool> {
    let s = stack.sample(omega)?;
    let last = s.eps.len() - 1;
    let ok = |e: Complex64| e.im == 0.0 && lambda < s.k0 * e.re.max(0.0).sqrt();
    Ok(ok(s.eps[0]) && ok(s.eps[last]))
}

fn check_block_diagonal(stack: &LayerStack, pts: &[(f64, LambdaPoint)]) -> CheckResult {
    let mut worst: f64 = 0.0;
    for &(w, p) in pts {
        match polarization_matrices(stack, w, p.lambda) {
            Ok((r, t)) => worst = worst.max(offdiag(&r)).max(offdiag(&t)),
            Err(Error::IllPosed(_)) => {}
            Err(e) => return CheckResult::errored("block_diagonal", 0.0, &e),
        }
    }
    CheckResult::judge("block_diagonal", worst, 0.0, pts.len(), "empty grid")
}

fn check_unitarity(stack: &LayerStack, cfg: &RunConfig, pts: &[(f64, LambdaPoint)]) -> CheckResult {
    const TOL: f64 = 1e-10;
    if !stack.is_lossless() {
        return CheckResult::judge("unitarity", 0.0, TOL, 0, "stack absorbs");
    }
    let (mut worst, mut n) = (0.0f64, 0);
    for &(w, p) in pts {
        match propagating(stack, w, p.lambda) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(e) => return CheckResult::errored("unitarity", TOL, &e),
        }
        for &pol in &cfg.polarizations {
            match energy_balance(stack, &ModeIndex::new(w, p.lambda, pol)) {
                Ok(b) => {
                    worst = worst.max((b.reflectance + b.transmittance - 1.0).abs());
                    n += 1;
                }
                Err(e) => return CheckResult::errored("unitarity", TOL, &e),
            }
        }
    }
    CheckResult::judge("unitarity", worst, TOL, n, "no propagating modes on the grid")
}

fn check_balance(stack: &LayerStack, cfg: &RunConfig, pts: &[(f64, LambdaPoint)], fault: Option<Fault>) -> CheckResult {
    const TOL: f64 = 1e-6;
    let (mut worst, mut n) = (0.0f64, 0);
    for &(w, p) in pts {
        match propagating(stack, w, p.lambda) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(e) => return CheckResult::errored("balance", TOL, &e),
        }
        for &pol in &cfg.polarizations {
            let mode = ModeIndex::new(w, p.lambda, pol);
            let (b, set) = match (energy_balance(stack, &mode), noise_kernels(stack, &mode)) {
                (Ok(b), Ok(s)) => (b, s),
                (Err(e), _) | (_, Err(e)) => return CheckResult::errored("balance", TOL, &e),
            };
            let reflectance = match fault {
                Some(Fault::Balance) => b.reflectance * 1.01 * 1.01,
                None => b.reflectance,
            };
            let loss = 1.0 - reflectance - b.transmittance;
            let noise = set.strength_left.unwrap_or(0.0);
            worst = worst.max((b.absorption - loss).abs()).max((noise - loss).abs());
            n += 1;
        }
    }
    CheckResult::judge("balance", worst, TOL, n, "no propagating modes in lossless exteriors on the grid")
}

/// Random point inside a region, at least 5% of its width (or a quarter
/// wavelength in the half-spaces) away from the interfaces.
fn random_point(rng: &mut ChaCha8Rng, stack: &LayerStack, region: Region, scale: f64) -> stratqed::Result<[f64; 3]> {
    let (lo, hi) = stack.region_bounds(region)?;
    let (lo, hi) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (false, true) => (hi - 2.0 * scale, hi),
        (true, false) => (lo, lo + 2.0 * scale),
        (false, false) => (-scale, scale),
    };
    let pad = if lo.is_finite() && hi.is_finite() && (hi - lo) < 2.0 * scale { 0.05 * (hi - lo) } else { 0.125 * scale };
    let z = rng.gen_range(lo + pad..hi - pad);
    Ok([rng.gen_range(-scale..scale), rng.gen_range(-scale..scale), z])
}

fn rel_diff(a: &Complex3Tensor, b: &Complex3Tensor) -> f64 {
    let scale = a.max_abs().max(b.max_abs());
    if scale == 0.0 {
        0.0
    } else {
        (*a - *b).max_abs() / scale
    }
}

fn green_setup(stack: &LayerStack, cfg: &RunConfig) -> stratqed::Result<(f64, GreenOptions, f64)> {
    let w = cfg.omegas()[0];
    let o = cfg.green_options(stack, w)?;
    // half a vacuum wavelength sets the size of the sampled neighbourhood
    let scale = std::f64::consts::PI / stack.units.k0(w);
    Ok((w, o, scale))
}

fn check_reciprocity(stack: &LayerStack, cfg: &RunConfig, seed: u64) -> CheckResult {
    const TOL: f64 = 1e-6;
    let run = || -> stratqed::Result<(f64, usize)> {
        let (w, o, scale) = green_setup(stack, cfg)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let regions = stack.regions();
        let mut worst: f64 = 0.0;
        for _ in 0..cfg.check.pairs {
            let f = regions[rng.gen_range(0..regions.len())];
            let s = regions[rng.gen_range(0..regions.len())];
            let r = random_point(&mut rng, stack, f, scale)?;
            let p = random_point(&mut rng, stack, s, scale)?;
            let g = total_green_in(stack, w, f, s, r, p, &o)?;
            let back = total_green_in(stack, w, s, f, p, r, &o)?;
            worst = worst.max(rel_diff(&g.value, &back.value.transpose()));
        }
        Ok((worst, cfg.check.pairs))
    };
    match run() {
        Ok((worst, n)) => CheckResult::judge("reciprocity", worst, TOL, n, ""),
        Err(e) => CheckResult::errored("reciprocity", TOL, &e),
    }
}

fn check_continuity(stack: &LayerStack, cfg: &RunConfig, seed: u64) -> CheckResult {
    const TOL: f64 = 1e-6;
    let run = || -> stratqed::Result<(f64, usize)> {
        let (w, o, scale) = green_setup(stack, cfg)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let regions = stack.regions();
        let interfaces = stack.interfaces();
        let (mut worst, mut n) = (0.0f64, 0);
        for _ in 0..cfg.check.pairs {
            let src = regions[rng.gen_range(0..regions.len())];
            let s = random_point(&mut rng, stack, src, scale)?;
            let (x, y) = (rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            for (i, &z) in interfaces.iter().enumerate() {
                let r = [x, y, z];
                let below = total_green_in(stack, w, regions[i], src, r, s, &o)?.value;
                let above = total_green_in(stack, w, regions[i + 1], src, r, s, &o)?.value;
                let scale = below.max_abs().max(above.max_abs());
                for row in 0..2 {
                    for col in 0..3 {
                        worst = worst.max((below.get(row, col) - above.get(row, col)).norm() / scale);
                    }
                }
                n += 1;
            }
        }
        Ok((worst, n))
    };
    match run() {
        Ok((worst, n)) => CheckResult::judge("continuity", worst, TOL, n, ""),
        Err(e) => CheckResult::errored("continuity", TOL, &e),
    }
}

pub fn run_checks(cfg: &RunConfig, opts: &RunOptions) -> stratqed::Result<Vec<CheckResult>> {
    let stack = cfg.layer_stack()?;
    let pts = if cfg.lambda.is_some() || cfg.angle_deg.is_some() { grid(cfg)? } else { Vec::new() };
    let jobs: Vec<Box<dyn Fn() -> CheckResult + Send + Sync>> = vec![
        Box::new(|| check_block_diagonal(&stack, &pts)),
        Box::new(|| check_unitarity(&stack, cfg, &pts)),
        Box::new(|| check_balance(&stack, cfg, &pts, opts.fault)),
        Box::new(|| check_reciprocity(&stack, cfg, opts.seed)),
        Box::new(|| check_continuity(&stack, cfg, opts.seed)),
    ];
    Ok(pool(opts.jobs).install(|| jobs.par_iter().map(|f| f()).collect()))
}

/// The check report and whether every check passed (skips do not fail).
pub fn check(cfg: &RunConfig, opts: &RunOptions) -> stratqed::Result<(Table, bool)> {
    let results = run_checks(cfg, opts)?;
    let mut t = Table::new("check", &["check", "status", "residual", "tolerance", "samples", "detail"]);
    let mut ok = true;
    for r in &results {
        let (label, detail) = match &r.verdict {
            Verdict::Pass => ("pass", String::new()),
            Verdict::Fail => {
                ok = false;
                ("fail", String::new())
            }
            Verdict::Skip(why) => ("skip", why.clone()),
            Verdict::Error(why) => {
                ok = false;
                ("error", why.clone())
            }
        };
        t.push(vec![
            Cell::from(r.name),
            Cell::from(label),
            if matches!(r.verdict, Verdict::Skip(_) | Verdict::Error(_)) { Cell::Empty } else { Cell::Num(r.residual) },
            Cell::Num(r.tolerance),
            Cell::Int(r.samples as i64),
            Cell::Text(detail),
        ]);
    }
    Ok((t, ok))
}

//! Subcommand implementations. Each returns an [`Outcome`]: the artifact bytes
//! plus whether every checked quantity stayed within tolerance.

use std::path::{Path, PathBuf};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use superint_core::algebra::{
    casimir_check, monopole_closure_check, runge_lenz, verify_bracket_table, GradientMode,
};
use superint_core::closedform::{helical_z_of_t, helix_solution, pendulum_reduction, x5_integral};
use superint_core::dynamics::{integrate, Energy, Trajectory};
use superint_core::fields::divergence_checks;
use superint_core::integrals::{
    determining_residuals, poisson_bracket, BoundIntegral, PhaseFn, PhaseFunction, ResidualMode,
    FIRST_ORDER_LABELS, SECOND_ORDER_LABELS, ZERO_ORDER_LABEL,
};

use superint_core::quantum::{
    helical_reduced_solve, landau_levels, landau_reduced_solve, mathieu_characteristic_values,
    radial_orthonormality_error, radial_reduced_solve, Grid1D, SpectrumResult,
};
use superint_core::sampling::StateSampler;
use superint_core::{FieldModel, PhaseState, Vec3};

use crate::config::{
    self, GridSection, InitialState, PotentialChoice, RunConfig, SpecFile, SpectrumJob, SpectrumSystem,
    SystemConfig,
};
use crate::error::CliError;
use crate::output::{emit, nums, report_bytes, table_bytes, Format, Obj, Table};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_T_END: f64 = 100.0;
pub const DEFAULT_SAMPLES: usize = 100;

/// Options shared by every subcommand, after merging flags over the config.
#[derive(Debug, Clone, Default)]
pub struct Context {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tolerance: Option<f64>,
    pub system: Option<String>,
    pub potential: Option<PotentialChoice>,
}

#[derive(Debug)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub passed: bool,
    /// One line for stderr when `passed` is false.
    pub summary: String,
}

impl Outcome {
    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        emit(&self.bytes, out)
    }
}

/// Resolved run: config file (if any) overlaid by flags.
struct Run {
    cfg: RunConfig,
    seed: u64,
    tolerance: Option<f64>,
}

impl Context {
    fn run(&self) -> Result<Run, CliError> {
        let mut cfg = match &self.config {
            Some(path) => config::load::<RunConfig>(path)?,
            None => {
                let name = self
                    .system
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("either --config or --system is required".into()))?;
                RunConfig {
                    system: SystemConfig::default_for(name)?,
                    initial: None,
                    t_end: None,
                    integrator: Default::default(),
                    samples: None,
                    seed: None,
                    tolerance: None,
                }
            }
        };
        if let (Some(name), Some(_)) = (&self.system, &self.config) {
            if name.replace('-', "_") != cfg.system.name() {
                return Err(CliError::Usage(format!(
                    "--system {name} contradicts the config's model `{}`",
                    cfg.system.name()
                )));
            }
        }
        if let Some(p) = self.potential {
            match &mut cfg.system {
                SystemConfig::Monopole { potential, .. } => *potential = p,
                _ => return Err(CliError::Usage("--potential applies to the monopole only".into())),
            }
        }
        let tolerance = self.tolerance.or(cfg.tolerance);
        if let Some(t) = tolerance {
            if !(t > 0.0) {
                return Err(CliError::Usage("tolerance must be positive".into()));
            }
        }
        Ok(Run {
            seed: self.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
            tolerance,
            cfg,
        })
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn verdict(passed: bool, what: &str, worst: f64, tol: f64) -> String {
    if passed {
        String::new()
    } else {
        format!("{what}: {worst:e} exceeds tolerance {tol:e}")
    }
}

/// Default initial state per system; the helical one is the bounded
/// quasi-helical orbit (−1 < κ < 1) at `A = β = 3`.
fn default_initial(system: &SystemConfig) -> PhaseState {
    let v = |a: [f64; 3]| Vec3::new(a[0], a[1], a[2]);
    let (x, p) = match system {
        SystemConfig::ConstantB { .. } => ([0.3, -0.2, 0.5], [0.7, 0.4, -0.6]),
        SystemConfig::Helical { .. } => ([0.08, 0.05, 0.0], [1.0, 0.0, 3.2]),
        SystemConfig::Monopole { .. } => ([1.0, 0.0, 0.4], [0.0, 0.8, 0.05]),
    };
    PhaseState::new(v(x), v(p))
}

// ---------------------------------------------------------------- trajectories

struct Simulation {
    table: Table,
    max_drift: f64,
    closed_form_error: Option<f64>,
}

fn simulate_inner(run: &Run, closed_form: bool) -> Result<Simulation, CliError> {
    let cfg = &run.cfg;
    let model = cfg.system.model()?;
    let s0 = cfg
        .initial
        .as_ref()
        .map(InitialState::state)
        .unwrap_or_else(|| default_initial(&cfg.system));
    let t_end = cfg.t_end.unwrap_or(DEFAULT_T_END);
    let specs = superint_core::integrals::known_integrals(&model)?;
    let bound: Vec<BoundIntegral> = specs.iter().map(|s| s.bind(&model)).collect();
    let mut watch: Vec<&dyn PhaseFunction> = bound.iter().map(|b| b as &dyn PhaseFunction).collect();

    let b_const = match cfg.system {
        SystemConfig::ConstantB { b } => Some(b),
        _ => None,
    };
    // X₅ needs p₁ ≠ 0, and p₁ is itself conserved.
    let x5 = b_const
        .filter(|_| x5_integral(1.0, &s0).is_ok())
        .map(|b| PhaseFn::new("X5", move |s: &PhaseState| x5_integral(b, s)));
    if let Some(f) = &x5 {
        watch.push(f);
    }

    let traj = integrate(&model, s0, t_end, &cfg.integrator.config(), &watch)?;
    let rows = sample_rows(&traj, cfg.samples, t_end, &model, &watch)?;

    let mut header: Vec<String> = ["t", "x", "y", "z", "p1", "p2", "p3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(traj.names.iter().cloned());

    let reference: Option<Reference> = if closed_form {
        Some(match cfg.system {
            SystemConfig::ConstantB { b } => {
                Box::new(move |t, s: &PhaseState| Ok((helix_solution(b, &s0, t).x - s.x).max_abs()))
            }
            SystemConfig::Helical { .. } => {
                let red = pendulum_reduction(&model, &s0)?;
                Box::new(move |t, s: &PhaseState| Ok((helical_z_of_t(&red, t)? - s.x.x3).abs()))
            }
            SystemConfig::Monopole { .. } => {
                return Err(CliError::Usage(
                    "no closed-form trajectory for the monopole; use simulate".into(),
                ))
            }
        })
    } else {
        None
    };
    if reference.is_some() {
        header.push("closed_form_error".into());
    }

    let mut table = Table::new(header);
    let mut worst_cf: f64 = 0.0;
    let scale = rows.first().map(|(_, _, d)| d[0].abs().max(1.0)).unwrap_or(1.0);
    let mut max_drift: f64 = 0.0;
    let first: Option<Vec<f64>> = rows.first().map(|(_, _, d)| d.clone());
    for (t, s, diag) in &rows {
        let mut row = vec![*t, s.x.x1, s.x.x2, s.x.x3, s.p.x1, s.p.x2, s.p.x3];
        row.extend(diag.iter().copied());
        if let Some(f) = &reference {
            let e = f(*t, s)?;
            worst_cf = worst_cf.max(e);
            row.push(e);
        }
        if let Some(f0) = &first {
            // energy drift is relative to max(1, |H₀|), integral drift absolute
            max_drift = max_drift.max((diag[0] - f0[0]).abs() / scale);
            for (v, v0) in diag.iter().zip(f0).skip(1) {
                max_drift = max_drift.max((v - v0).abs());
            }
        }
        table.rows.push(row);
    }
    Ok(Simulation {
        table,
        max_drift,
        closed_form_error: reference.map(|_| worst_cf),
    })
}

type Row = (f64, PhaseState, Vec<f64>);
type Reference = Box<dyn Fn(f64, &PhaseState) -> Result<f64, CliError>>;

/// Accepted steps, or `samples` uniform times from the dense output with the
/// diagnostics re-evaluated at each interpolated state.
fn sample_rows(
    traj: &Trajectory,
    samples: Option<usize>,
    t_end: f64,
    model: &FieldModel,
    watch: &[&dyn PhaseFunction],
) -> Result<Vec<Row>, CliError> {
    match samples {
        None => Ok(traj
            .times
            .iter()
            .zip(&traj.states)
            .zip(&traj.diagnostics)
            .map(|((t, s), d)| (*t, *s, d.clone()))
            .collect()),
        Some(n) if n < 2 => Err(CliError::Usage("samples must be at least 2".into())),
        Some(n) => (0..n)
            .map(|i| {
                let t = t_end * i as f64 / (n - 1) as f64;
                let s = traj.state_at(t)?;
                let mut d = vec![Energy(model).value(&s)?];
                for w in watch {
                    d.push(w.value(&s)?);
                }
                Ok((t, s, d))
            })
            .collect(),
    }
}

pub fn simulate(ctx: &Context, closed_form: bool) -> Result<Outcome, CliError> {
    let run = ctx.run()?;
    let sim = simulate_inner(&run, closed_form)?;
    let format = ctx.format.unwrap_or(Format::Csv);
    let bytes = table_bytes(&sim.table, format)?;
    let (passed, summary) = match sim.closed_form_error {
        Some(e) => {
            let tol = run.tolerance.unwrap_or(1e-5);
            (e <= tol, verdict(e <= tol, "closed-form discrepancy", e, tol))
        }
        None => {
            let tol = run.tolerance.unwrap_or(1e-6);
            let d = sim.max_drift;
            (d <= tol, verdict(d <= tol, "integral drift", d, tol))
        }
    };
    Ok(Outcome {
        bytes,
        passed,
        summary,
    })
}

// ---------------------------------------------------------------- verify

pub const VERIFY_POINTS: usize = 100;

pub fn verify(ctx: &Context, spec_file: Option<&Path>, hbar: Option<f64>) -> Result<Outcome, CliError> {
    let run = ctx.run()?;
    let model = run.cfg.system.model()?;
    let mut specs = run.cfg.system.catalogue()?;
    if let Some(path) = spec_file {
        let file: SpecFile = config::load(path)?;
        let extra = file
            .integrals
            .iter()
            .map(|e| e.build(&specs))
            .collect::<Result<Vec<_>, _>>()?;
        specs.extend(extra);
    }
    let mode = match hbar {
        Some(h) if h > 0.0 => ResidualMode::Quantum { hbar: h },
        Some(_) => return Err(CliError::Usage("hbar must be positive".into())),
        None => ResidualMode::Classical,
    };
    let tol = run.tolerance.unwrap_or(1e-6);
    let n = run.cfg.samples.unwrap_or(VERIFY_POINTS);
    let mut r = rng(run.seed);
    let sampler = StateSampler::default();
    let points = sampler.points(&mut r, &model, n)?;
    let states = sampler.states(&mut r, &model, n)?;

    let labels: Vec<&str> = SECOND_ORDER_LABELS
        .iter()
        .chain(FIRST_ORDER_LABELS.iter())
        .copied()
        .chain([ZERO_ORDER_LABEL])
        .collect();
    let mut overall = vec![0.0f64; labels.len()];
    let mut per_integral = Obj::new();
    let mut worst: f64 = 0.0;

    let energy = Energy(&model);
    let bound: Vec<BoundIntegral> = specs.iter().map(|s| s.bind(&model)).collect();
    for (spec, f) in specs.iter().zip(&bound) {
        let mut by_eq = vec![0.0f64; labels.len()];
        for &x in &points {
            let res = determining_residuals(spec, &model, x, mode)?;
            for (k, (_, v)) in res.named().iter().enumerate() {
                by_eq[k] = by_eq[k].max(v.abs());
            }
        }
        let mut hb: f64 = 0.0;
        for s in &states {
            hb = hb.max(poisson_bracket(&energy, f, s)?.abs());
        }
        let max_res = by_eq.iter().fold(0.0f64, |m, v| m.max(*v));
        worst = worst.max(max_res).max(hb);
        for (o, v) in overall.iter_mut().zip(&by_eq) {
            *o = o.max(*v);
        }
        let mut eq = Obj::new();
        for (l, v) in labels.iter().zip(&by_eq) {
            eq = eq.float(l, *v);
        }
        per_integral.insert(
            &spec.name,
            Obj::new()
                .set("order", if spec.is_first_order() { 1u64 } else { 2 })
                .float("max_residual", max_res)
                .set("max_residual_by_equation", eq)
                .float("hamiltonian_bracket", hb),
        );
    }

    let mut by_eq = Obj::new();
    for (l, v) in labels.iter().zip(&overall) {
        by_eq = by_eq.float(l, *v);
    }
    let funcs: Vec<&dyn PhaseFunction> = std::iter::once(&energy as &dyn PhaseFunction)
        .chain(bound.iter().map(|b| b as &dyn PhaseFunction))
        .collect();
    let names: Vec<String> = funcs.iter().map(|f| f.name().to_owned()).collect();
    let matrix = bracket_matrix(&funcs, &states)?;

    let passed = worst <= tol;
    let report: Value = Obj::new()
        .set("system", run.cfg.system.name())
        .set("mode", if hbar.is_some() { "quantum" } else { "classical" })
        .set("seed", run.seed)
        .set("points", n as u64)
        .float("tolerance", tol)
        .set("passed", passed)
        .set("max_residual_by_equation", by_eq)
        .set("integrals", per_integral)
        .set(
            "bracket_matrix",
            Obj::new()
                .set("names", names)
                .set("max_abs", Value::Array(matrix.iter().map(|r| nums(r)).collect())),
        )
        .into();
    Ok(Outcome {
        bytes: report_bytes(&report, ctx.format.unwrap_or(Format::Json))?,
        passed,
        summary: verdict(passed, "determining-equation residual or {H, X}", worst, tol),
    })
}

/// `max_s |{f_i, f_j}(s)|` over all ordered pairs.
fn bracket_matrix(funcs: &[&dyn PhaseFunction], states: &[PhaseState]) -> Result<Vec<Vec<f64>>, CliError> {
    let mut grads = Vec::with_capacity(states.len());
    for s in states {
        grads.push(
            funcs
                .iter()
                .map(|f| f.gradient(s))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let n = funcs.len();
    let mut m = vec![vec![0.0f64; n]; n];
    for g in &grads {
        for i in 0..n {
            for j in 0..n {
                let v = superint_core::integrals::bracket_from_gradients(&g[i], &g[j]).abs();
                m[i][j] = m[i][j].max(v);
            }
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------- algebra

pub fn algebra(ctx: &Context) -> Result<Outcome, CliError> {
    let run = ctx.run()?;
    let n = run.cfg.samples.unwrap_or(VERIFY_POINTS);
    let mut r = rng(run.seed);
    let (report, worst, tol) = match run.cfg.system {
        SystemConfig::ConstantB { b } => {
            let model = run.cfg.system.model()?;
            let states = StateSampler::default()
                .with_min_abs_p1(0.1)
                .states(&mut r, &model, n)?;
            let table = verify_bracket_table(b, &states, GradientMode::Analytic)?;
            let cas = casimir_check(b, &states)?;
            let tol = run.tolerance.unwrap_or(1e-6);
            let pairs: Vec<Value> = table
                .pairs
                .iter()
                .map(|p| {
                    Obj::new()
                        .set("left", p.left.clone())
                        .set("right", p.right.clone())
                        .float("max_abs", p.max_abs)
                        .into()
                })
                .collect();
            let worst = table.max_abs.max(cas.first).max(cas.second);
            let report = Obj::new()
                .set("pairs", pairs)
                .float("max_pair_discrepancy", table.max_abs)
                .float("antisymmetry", table.antisymmetry)
                .set(
                    "casimirs",
                    Obj::new().float("first", cas.first).float("second", cas.second),
                );
            (report, worst, tol)
        }
        SystemConfig::Monopole { g, q, potential } => {
            let model = run.cfg.system.model()?;
            let states = StateSampler::default().states(&mut r, &model, n)?;
            let closure = monopole_closure_check(g, &states)?;
            // finite-difference brackets: looser default
            let tol = run.tolerance.unwrap_or(1e-5);
            let orbit = default_initial(&run.cfg.system);
            let traj = integrate(&model, orbit, DEFAULT_T_END, &Default::default(), &[])?;
            let r0 = runge_lenz(g, q, &orbit)?;
            let mut rl: f64 = 0.0;
            for s in &traj.states {
                rl = rl.max((runge_lenz(g, q, s)? - r0).max_abs());
            }
            let labels = ["X1,X2", "X2,X3", "X3,X1"];
            let mut cyclic = Obj::new();
            let mut casimir = Obj::new();
            for (k, l) in labels.iter().enumerate() {
                cyclic = cyclic.float(l, closure.cyclic[k]);
                casimir = casimir.float(&format!("X^2,X{}", k + 1), closure.casimir[k]);
            }
            let mut worst = closure.max_abs();
            // Runge–Lenz is only conserved with the g²/(2r²) term
            if potential == PotentialChoice::ModifiedCoulomb {
                worst = worst.max(rl);
            }
            let report = Obj::new()
                .set(
                    "closure",
                    Obj::new().set("cyclic", cyclic).set("casimir", casimir),
                )
                .float("runge_lenz_drift", rl)
                .set(
                    "runge_lenz_checked",
                    potential == PotentialChoice::ModifiedCoulomb,
                );
            (report, worst, tol)
        }
        SystemConfig::Helical { .. } => {
            return Err(CliError::Usage("algebra supports constant_b and monopole".into()))
        }
    };
    let passed = worst <= tol;
    let report: Value = report
        .set("system", run.cfg.system.name())
        .set("seed", run.seed)
        .set("states", n as u64)
        .float("tolerance", tol)
        .float("max_discrepancy", worst)
        .set("passed", passed)
        .into();
    Ok(Outcome {
        bytes: report_bytes(&report, ctx.format.unwrap_or(Format::Json))?,
        passed,
        summary: verdict(passed, "algebra discrepancy", worst, tol),
    })
}

// ---------------------------------------------------------------- fields-check

pub fn fields_check(ctx: &Context) -> Result<Outcome, CliError> {
    let run = ctx.run()?;
    let model = run.cfg.system.model()?;
    let n = run.cfg.samples.unwrap_or(VERIFY_POINTS);
    let points = StateSampler::default().points(&mut rng(run.seed), &model, n)?;
    let rep = divergence_checks(&model, &points)?;
    let tol = run.tolerance.unwrap_or(1e-6);
    let worst = rep.max_div_b.max(rep.max_curl_residual);
    let passed = worst <= tol;
    let report: Value = Obj::new()
        .set("system", run.cfg.system.name())
        .set("seed", run.seed)
        .set("points", rep.points as u64)
        .float("max_div_b", rep.max_div_b)
        .float("max_curl_residual", rep.max_curl_residual)
        .float("max_div_a", rep.max_div_a)
        .float("tolerance", tol)
        .set("passed", passed)
        .into();
    Ok(Outcome {
        bytes: report_bytes(&report, ctx.format.unwrap_or(Format::Json))?,
        passed,
        summary: verdict(passed, "field identity residual", worst, tol),
    })
}

// ---------------------------------------------------------------- spectrum

pub fn spectrum(ctx: &Context, eigenfunctions: Option<&Path>) -> Result<Outcome, CliError> {
    let path = ctx
        .config
        .as_deref()
        .ok_or_else(|| CliError::Usage("spectrum needs a job file via --config".into()))?;
    let job: SpectrumJob = config::load(path)?;
    if job.n_levels == 0 {
        return Err(CliError::Usage("n_levels must be positive".into()));
    }
    let tol = ctx.tolerance.unwrap_or(1e-4);
    let grid = |g: Option<GridSection>, lo: f64, hi: f64, n: usize| -> Result<Grid1D, CliError> {
        let g = g.unwrap_or(GridSection { lo, hi, n });
        Ok(Grid1D::new(g.lo, g.hi, g.n)?)
    };
    let mut report = Obj::new()
        .set("n_levels", job.n_levels as u64)
        .float("tolerance", tol);
    let mut worst: f64 = 0.0;
    let mut solved: Option<SpectrumResult> = None;
    let mut ortho = None;

    match &job.system {
        SpectrumSystem::ConstantB(p) => {
            let ell = (p.hbar / p.b.abs()).sqrt();
            let centre = p.k2 / p.b;
            let half = (12.0 + 2.0 * (job.n_levels as f64).sqrt()) * ell;
            // ~100 nodes per oscillator length keeps the O(h²) error near 1e-5
            let nodes = ((2.0 * half / ell) * 100.0).ceil().max(2000.0) as usize;
            let g = grid(job.grid, centre - half, centre + half, nodes)?;
            let res = landau_reduced_solve(p.b, p.k1, p.k2, p.hbar, &g, job.n_levels)?;
            let exact = landau_levels(p.b, p.k1, p.hbar, job.n_levels);
            worst = max_rel(&res.eigenvalues, &exact);
            ortho = Some(res.orthonormality_error());
            report = report
                .set("system", "constant_b")
                .set("eigenvalues", nums(&res.eigenvalues))
                .set("analytic_reference", nums(&exact))
                .float("max_rel_error", worst);
            solved = Some(res);
        }
        SpectrumSystem::Cylindrical(p) => {
            let g = grid(job.grid, 0.0, 10.0, 4000)?;
            let res = radial_reduced_solve(&p.model(), p.m, p.k, p.hbar, &g, job.n_levels)?;
            ortho = Some(radial_orthonormality_error(&res));
            report = report
                .set("system", "cylindrical")
                .set("eigenvalues", nums(&res.eigenvalues));
            if let Some(w) = p.oscillator_frequency() {
                let exact: Vec<f64> = (0..job.n_levels)
                    .map(|n| {
                        p.hbar * w * (2.0 * n as f64 + p.m.unsigned_abs() as f64 + 1.0)
                            + 0.5 * (p.hbar * p.k).powi(2)
                    })
                    .collect();
                worst = max_rel(&res.eigenvalues, &exact);
                report = report
                    .set("analytic_reference", nums(&exact))
                    .float("max_rel_error", worst);
            }
            solved = Some(res);
        }
        SpectrumSystem::Helical(p) => {
            if eigenfunctions.is_some() {
                return Err(CliError::Usage(
                    "helical spectra have no grid eigenfunctions".into(),
                ));
            }
            if !(p.k >= 0.0) || !(p.hbar > 0.0) {
                return Err(CliError::Usage(
                    "helical spectrum needs k >= 0 and hbar > 0".into(),
                ));
            }
            let r_max = job.n_levels - 1;
            let scale = 4.0 * p.beta * p.beta / (p.hbar * p.hbar);
            let q = -scale * p.amplitude * p.k;
            let mv = mathieu_characteristic_values(q, r_max)?;
            // a = −4β²(A² + K² − 2E)/ħ²  ⇒  E = (A² + K²)/2 + a/(2·scale)
            let energy = |a: f64| 0.5 * (p.amplitude * p.amplitude + p.k * p.k) + a / (2.0 * scale);
            let edge = |a: f64, periodic: bool| -> Result<f64, CliError> {
                let red = helical_reduced_solve(p.amplitude, p.beta, p.k, 0.0, p.hbar, energy(a))?;
                let want = if periodic { 2.0 } else { -2.0 };
                Ok((red.monodromy_trace() - want).abs())
            };
            let mut trace_even = Vec::new();
            let mut trace_odd = Vec::new();
            for (r, &a) in mv.even.iter().enumerate() {
                trace_even.push(edge(a, r % 2 == 0)?);
            }
            for (i, &a) in mv.odd.iter().enumerate() {
                trace_odd.push(edge(a, (i + 1) % 2 == 0)?);
            }
            worst = trace_even.iter().chain(&trace_odd).fold(0.0, |m, v| m.max(*v));
            let e_even: Vec<f64> = mv.even.iter().map(|&a| energy(a)).collect();
            let e_odd: Vec<f64> = mv.odd.iter().map(|&a| energy(a)).collect();
            report = report
                .set("system", "helical")
                .float("q", q)
                .set(
                    "characteristic_values",
                    Obj::new().set("even", nums(&mv.even)).set("odd", nums(&mv.odd)),
                )
                .set(
                    "band_edge_energies",
                    Obj::new().set("even", nums(&e_even)).set("odd", nums(&e_odd)),
                )
                .set(
                    "band_edge_trace_error",
                    Obj::new()
                        .set("even", nums(&trace_even))
                        .set("odd", nums(&trace_odd)),
                )
                .set("eigenvalues", nums(&e_even));
        }
    }

    if let Some(o) = ortho {
        report = report.float("orthonormality_error", o);
    }
    let ortho_ok = ortho.is_none_or(|o| o <= 1e-8);
    let passed = worst <= tol && ortho_ok;
    let report: Value = report.set("passed", passed).into();

    if let Some(path) = eigenfunctions {
        let res = solved.as_ref().expect("grid solves set the result");
        let mut header = vec!["x".to_owned()];
        header.extend((0..res.eigenfunctions.len()).map(|n| format!("psi{n}")));
        let mut table = Table::new(header);
        for (i, &x) in res.points.iter().enumerate() {
            let mut row = vec![x];
            row.extend(res.eigenfunctions.iter().map(|f| f[i]));
            table.rows.push(row);
        }
        emit(&table.to_csv()?, Some(path))?;
    }

    let summary = if !ortho_ok {
        format!("orthonormality error {:e} exceeds 1e-8", ortho.unwrap_or(0.0))
    } else {
        verdict(passed, "spectrum discrepancy", worst, tol)
    };
    Ok(Outcome {
        bytes: report_bytes(&report, ctx.format.unwrap_or(Format::Json))?,
        passed,
        summary,
    })
}

fn max_rel(got: &[f64], want: &[f64]) -> f64 {
    got.iter().zip(want).fold(0.0, |m, (g, w)| {
        m.max((g - w).abs() / w.abs().max(f64::MIN_POSITIVE))
    })
}

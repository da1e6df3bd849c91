//! Commands behind the `tdcentral` binary.
//!
//! Every command writes a human-readable summary (or, with `--json`, the
//! report JSON) to the given writer and, when `--out` is set, its artefacts
//! into that directory. [`main_with`] maps the outcome to the exit code:
//! 0 when every check passes, 1 when one fails, 2 on usage or config errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{RunConfig, System, WavefunctionSpec};
use crate::dynamics::{
    cartesian_crosscheck, drift_report, integrate, integrate_line, line_drift, Termination, Trajectory,
};
use crate::error::{Error, Result};
use crate::integrals::{reduced_energy, FirstIntegral};
use crate::potentials::{
    catalog, preset, CentralPotential, Family, LewisLeach, LewisLeachBracket, Params, Perturbed, Preset,
    PresetKind,
};
use crate::quantum::{amplitude_residual, amplitude_residual_with_k, psi, WavefunctionParams};
use crate::scalarfn::QuadratureConfig;
use crate::verify::{
    closed_form_r_check, closed_form_theta, ermakov_check, noether_check_against, orbit_integral,
    orbit_relation_check, pde_residuals, pde_residuals_against, similarity_recovery, Check,
    VerificationReport, ANALYTIC_TOL, CONTROL_TOL,
};

#[derive(Debug, Parser)]
#[command(
    name = "tdcentral",
    version,
    about = "Integrable time-dependent central potentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the preset catalog.
    ListPresets {
        #[arg(long)]
        json: bool,
    },
    /// Integrate a system and report the drift of its first integrals.
    Simulate(RunArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Integrate the scaled Kepler potential and check the orbit relation.
    Orbit(RunArgs),
    /// Tabulate the stationary mode wavefunction.
    Wavefunction(WaveArgs),
    /// Two-body problem with variable total mass.
    Binary(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the sampling seed of the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Pde,
    Noether,
    Drift,
    Similarity,
    ClosedForm,
    Ermakov,
    Orbit,
    Schrodinger,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct ModeArgs {
    /// Laguerre order parameter `a` of the mode.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Laguerre degree `b` of the mode.
    #[arg(long)]
    pub b: Option<u32>,
    /// Reduced Planck constant of the mode.
    #[arg(long)]
    pub hbar: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[command(flatten)]
    pub mode: ModeArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WaveArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub mode: ModeArgs,
}

/// Parses `args` (program name first), runs the command against stdout and
/// returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
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
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code of a command that stopped with an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::InvalidParameters(_)
        | Error::UnknownPreset(_)
        | Error::Parse { .. }
        | Error::Io(_) => 2,
        _ => 1,
    }
}

/// Runs a parsed command. `Ok(false)` means a check failed.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::ListPresets { json } => list_presets(*json, out).map(|_| true),
        Command::Simulate(args) => simulate(args, out),
        Command::Verify(args) => verify(args, out),
        Command::Orbit(args) => orbit(args, out),
        Command::Wavefunction(args) => wavefunction(args, out),
        Command::Binary(args) => binary(args, out),
    }
}

fn list_presets(json: bool, out: &mut dyn Write) -> Result<()> {
    let entries = catalog();
    if json {
        let v: Vec<_> = entries
            .iter()
            .map(|e| {
                let params: serde_json::Map<_, _> = e
                    .parameters
                    .iter()
                    .map(|(k, v)| ((*k).to_string(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::json!({
                    "name": e.name,
                    "integral": e.integral,
                    "potential": e.potential,
                    "parameters": params,
                })
            })
            .collect();
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&v).expect("catalog serializes")
        )?;
        return Ok(());
    }
    for e in &entries {
        writeln!(out, "{} [{}]", e.name, e.integral)?;
        writeln!(out, "  {}", e.potential)?;
        let params: Vec<String> = e.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "  defaults: {}", params.join(" "))?;
    }
    Ok(())
}

fn load(args: &RunArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.sampling.seed = seed;
    }
    Ok(cfg)
}

fn require_config(args: &RunArgs, command: &str) -> Result<()> {
    match args.config {
        Some(_) => Ok(()),
        None => Err(Error::Config(format!("`{command}` needs --config"))),
    }
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

fn emit(args: &RunArgs, report: &VerificationReport, summary: &str, out: &mut dyn Write) -> Result<bool> {
    let json = report.to_json_string();
    if let Some(dir) = &args.out {
        write_file(dir, "report.json", json.as_bytes())?;
    }
    if args.json {
        out.write_all(json.as_bytes())?;
    } else {
        out.write_all(summary.as_bytes())?;
        out.write_all(render(report).as_bytes())?;
    }
    Ok(report.passed())
}

/// One line per check, then the overall verdict.
pub fn render(report: &VerificationReport) -> String {
    let mut s = String::new();
    for (name, c) in &report.checks {
        let rel = match c.expect {
            crate::verify::Expect::AtMost => "<=",
            crate::verify::Expect::AtLeast => ">=",
        };
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{name:<32} {:.3e} {rel} {:.1e}  {verdict}",
            c.max_residual, c.tolerance
        );
    }
    let _ = writeln!(s, "result: {}", if report.passed() { "pass" } else { "fail" });
    s
}

fn preset_name(p: &Option<Preset>) -> String {
    p.as_ref()
        .map_or_else(|| "inline family".to_string(), |p| p.name.clone())
}

/// A planar system with the config's perturbation and mismatch applied.
struct Planar<'a> {
    cfg: &'a RunConfig,
    family: Family,
    preset: Option<Preset>,
}

impl<'a> Planar<'a> {
    fn potential(&self) -> Box<dyn CentralPotential + '_> {
        match self.cfg.perturbation {
            Some(p) => Box::new(Perturbed::new(&self.family, p.coeff, p.power)),
            None => Box::new(&self.family),
        }
    }

    fn is_control(&self) -> bool {
        self.cfg.perturbation.is_some() || self.cfg.mismatch.is_some()
    }

    /// The family whose integral and symmetry are checked.
    fn symmetry(&self) -> Result<Family> {
        match (self.cfg.mismatch, &self.family) {
            (None, f) => Ok(f.clone()),
            (Some(m), Family::B(b)) => Ok(Family::B(b.with_shape(b.shape.affine(m.shape_scale, 0.0)))),
            (Some(_), Family::A(_)) => Err(Error::Config(
                "`mismatch` applies to quadratic-integral systems only".into(),
            )),
        }
    }

    fn integrals(&self) -> Result<Vec<FirstIntegral>> {
        let sym = self.symmetry()?;
        let own = FirstIntegral::of_family(&sym);
        let mut list = Vec::new();
        if let (Some(p), None) = (&self.preset, self.cfg.mismatch) {
            let native = FirstIntegral::of_preset(p);
            if native.name() != own.name() {
                list.push(native);
            }
        }
        list.push(own);
        list.push(FirstIntegral::AngularMomentum);
        Ok(list)
    }

    fn t_end(&self) -> f64 {
        self.cfg
            .t_end
            .unwrap_or_else(|| self.preset.as_ref().map_or(10.0, |p| p.interval.1))
    }

    fn trajectory(&self) -> Result<Trajectory> {
        let s0 = self.cfg.polar_initial()?;
        integrate(&*self.potential(), s0, self.t_end(), &self.cfg.integrator)
    }

    fn drift(&self, traj: &Trajectory) -> Result<VerificationReport> {
        let mut rep = VerificationReport::new();
        for fi in self.integrals()? {
            rep.insert(
                format!("drift.{}", fi.name()),
                Check::at_most(drift_report(traj, &fi)?, self.cfg.drift_tolerance),
            );
        }
        Ok(rep)
    }

    fn pde(&self) -> Result<VerificationReport> {
        if !self.is_control() {
            return pde_residuals(&self.family, &self.cfg.sampling);
        }
        let res = pde_residuals_against(&self.symmetry()?, &*self.potential(), &self.cfg.sampling)?;
        let mut rep = VerificationReport::with_plan(self.cfg.sampling);
        rep.insert("pde.R1", Check::at_most(res.r1, ANALYTIC_TOL));
        rep.insert("pde.R2", Check::at_most(res.r2, ANALYTIC_TOL));
        rep.insert("pde.R3", Check::at_most(res.r3, ANALYTIC_TOL));
        Ok(rep)
    }

    fn noether(&self) -> Result<VerificationReport> {
        noether_check_against(&self.symmetry()?, &*self.potential(), &self.cfg.sampling)
    }

    fn closed_form(&self, traj: &Trajectory) -> Result<VerificationReport> {
        let mut rep = VerificationReport::new();
        let s0 = traj.first();
        rep.insert(
            "closed_form.theta",
            Check::at_most(closed_form_theta(traj, traj.l3, s0.theta), 1e-7),
        );
        if let Family::A(a) = &self.family {
            if !self.is_control() {
                let dev = closed_form_r_check(a, traj, self.cfg.placement, &QuadratureConfig::default())?;
                rep.insert("closed_form.r", Check::at_most(dev, 1e-6));
            }
        }
        Ok(rep)
    }

    fn scaled_kepler(&self) -> Option<(&crate::ScalarFn, f64, f64)> {
        match self.preset.as_ref().map(|p| &p.kind) {
            Some(PresetKind::ScaledKepler { phi, k, l3 }) => Some((phi, *k, *l3)),
            _ => None,
        }
    }

    fn orbit(&self, traj: &Trajectory) -> Result<VerificationReport> {
        let (phi, k, l3) = self
            .scaled_kepler()
            .ok_or_else(|| Error::Config("suite orbit needs the scaled-kepler preset".into()))?;
        let check = orbit_relation_check(phi, k, l3, traj)?;
        let values = traj
            .samples
            .iter()
            .map(|s| orbit_integral(phi, k, s.t, s.r, s.rdot))
            .collect::<Result<Vec<_>>>()?;
        let mut rep = VerificationReport::new();
        rep.insert("orbit.relation", Check::at_most(check.max_deviation, 1e-7));
        rep.insert(
            "drift.orbit_integral",
            Check::at_most(
                crate::integrals::relative_drift(&values),
                self.cfg.drift_tolerance,
            ),
        );
        Ok(rep)
    }
}

fn similarity(cfg: &RunConfig, system: Option<&System>) -> Result<VerificationReport> {
    let mut triples = cfg.similarity_functions()?;
    if let Some(System::Planar {
        preset:
            Some(Preset {
                kind: PresetKind::Similarity { phi, fbar, l3 },
                ..
            }),
        ..
    }) = system
    {
        triples.insert(0, (phi.clone(), fbar.clone(), *l3));
    }
    if triples.is_empty() {
        return Err(Error::Config(
            "suite similarity needs the case-iii preset or a `similarity` list".into(),
        ));
    }
    let mut rep = VerificationReport::new();
    for (i, (phi, fbar, l3)) in triples.iter().enumerate() {
        let dev = similarity_recovery(phi, fbar, *l3, &cfg.grid)?;
        rep.insert(format!("similarity.recovery[{i}]"), Check::at_most(dev, 1e-12));
    }
    Ok(rep)
}

fn mode_params(cfg: &RunConfig, mode: &ModeArgs) -> Result<(WavefunctionParams, WavefunctionSpec)> {
    let mut spec = cfg.wavefunction.clone().unwrap_or_default();
    if let Some(a) = mode.a {
        spec.a = a;
    }
    if let Some(b) = mode.b {
        spec.b = b;
    }
    if let Some(h) = mode.hbar {
        spec.hbar = h;
    }
    Ok((cfg.wavefunction_params(&spec)?, spec))
}

fn schrodinger(cfg: &RunConfig, mode: &ModeArgs, system: Option<&System>) -> Result<VerificationReport> {
    let (p, spec) = mode_params(cfg, mode)?;
    let mut worst: f64 = 0.0;
    for r in spec.r.values() {
        worst = worst.max(amplitude_residual(&p, r)?.abs());
    }
    let mut rep = VerificationReport::new();
    rep.insert("schrodinger.residual", Check::at_most(worst, ANALYTIC_TOL));
    if let Some(System::Planar {
        preset: Some(Preset {
            kind: PresetKind::ScaledKepler { k, .. },
            ..
        }),
        ..
    }) = system
    {
        let mut with_k: f64 = 0.0;
        for r in spec.r.values() {
            with_k = with_k.max(amplitude_residual_with_k(&p, *k, r)?.abs());
        }
        rep.insert("schrodinger.system_k", Check::at_most(with_k, ANALYTIC_TOL));
    }
    Ok(rep)
}

fn lewis_leach_report(
    cfg: &RunConfig,
    sys: &LewisLeach,
    preset: &Preset,
) -> Result<(VerificationReport, String)> {
    let (t0, q0, qdot0) = cfg.line_initial()?;
    let t_end = cfg.t_end.unwrap_or(preset.interval.1);
    let traj = integrate_line(sys, t0, q0, qdot0, t_end, &cfg.integrator)?;
    let (rho, alpha) = ermakov_check(sys, [t0.min(t_end), t0.max(t_end)], 1000)?;
    let mut rep = VerificationReport::new();
    rep.insert("ermakov.rho", Check::at_most(rho, 1e-10));
    rep.insert("ermakov.alpha", Check::at_most(alpha, 1e-10));
    let velocity = FirstIntegral::LewisLeach(sys.clone(), LewisLeachBracket::Velocity);
    let rho_dot = FirstIntegral::LewisLeach(sys.clone(), LewisLeachBracket::RhoDot);
    rep.insert(
        "drift.lewis_leach",
        Check::at_most(line_drift(&traj, &velocity)?, cfg.drift_tolerance),
    );
    rep.insert(
        "control.lewis_leach_rho_dot",
        Check::at_least(line_drift(&traj, &rho_dot)?, CONTROL_TOL),
    );
    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    Ok((rep, String::from_utf8(csv).expect("csv is ascii")))
}

fn termination_line(traj: &Trajectory) -> String {
    match traj.termination {
        Termination::Completed => format!(
            "termination: completed at t = {} ({} samples, {} steps, {} rejected)\n",
            traj.last().t,
            traj.samples.len(),
            traj.steps_accepted,
            traj.steps_rejected
        ),
        Termination::RadiusCollapse { t, r } => {
            format!("termination: radius collapse at t = {t} (r = {r:e})\n")
        }
    }
}

fn simulate(args: &RunArgs, out: &mut dyn Write) -> Result<bool> {
    require_config(args, "simulate")?;
    let cfg = load(args)?;
    match cfg.system()? {
        System::Planar { family, preset } => {
            let sys = Planar {
                cfg: &cfg,
                family,
                preset,
            };
            let traj = sys.trajectory()?;
            let rep = sys.drift(&traj)?;
            if let Some(dir) = &args.out {
                write_file(dir, "trajectory.csv", traj.to_csv().as_bytes())?;
            }
            let summary = format!(
                "system: {}\n{}",
                preset_name(&sys.preset),
                termination_line(&traj)
            );
            emit(args, &rep, &summary, out)
        }
        System::Line { sys, preset } => {
            let (mut rep, csv) = lewis_leach_report(&cfg, &sys, &preset)?;
            rep.checks.retain(|k, _| k.starts_with("drift."));
            if let Some(dir) = &args.out {
                write_file(dir, "trajectory.csv", csv.as_bytes())?;
            }
            emit(args, &rep, "system: lewis-leach\n", out)
        }
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = load(&args.run)?;
    let system = match (&cfg.system, args.suite) {
        (None, Suite::Schrodinger | Suite::Similarity) => None,
        (None, Suite::All) if cfg.wavefunction.is_some() || !cfg.similarity.is_empty() => None,
        (None, _) => {
            return Err(Error::Config(format!(
                "suite {:?} needs a config with `system`",
                args.suite
            )))
        }
        (Some(_), _) => Some(cfg.system()?),
    };
    let mut rep = VerificationReport::new();
    match &system {
        Some(System::Planar { family, preset }) => {
            let sys = Planar {
                cfg: &cfg,
                family: family.clone(),
                preset: preset.clone(),
            };
            let needs_traj = matches!(
                args.suite,
                Suite::Drift | Suite::ClosedForm | Suite::Orbit | Suite::All
            );
            let traj = if needs_traj { Some(sys.trajectory()?) } else { None };
            let traj = traj.as_ref();
            match args.suite {
                Suite::Pde => rep.merge(sys.pde()?),
                Suite::Noether => rep.merge(sys.noether()?),
                Suite::Drift => rep.merge(sys.drift(traj.expect("integrated"))?),
                Suite::ClosedForm => rep.merge(sys.closed_form(traj.expect("integrated"))?),
                Suite::Orbit => rep.merge(sys.orbit(traj.expect("integrated"))?),
                Suite::Similarity => rep.merge(similarity(&cfg, system.as_ref())?),
                Suite::Schrodinger => rep.merge(schrodinger(&cfg, &args.mode, system.as_ref())?),
                Suite::Ermakov => {
                    return Err(Error::Config("suite ermakov needs the lewis-leach preset".into()))
                }
                Suite::All => {
                    let traj = traj.expect("integrated");
                    rep.merge(sys.pde()?);
                    rep.merge(sys.noether()?);
                    rep.merge(sys.drift(traj)?);
                    rep.merge(sys.closed_form(traj)?);
                    if sys.scaled_kepler().is_some() {
                        rep.merge(sys.orbit(traj)?);
                    }
                    let is_case_iii = matches!(
                        preset.as_ref().map(|p| &p.kind),
                        Some(PresetKind::Similarity { .. })
                    );
                    if is_case_iii || !cfg.similarity.is_empty() {
                        rep.merge(similarity(&cfg, system.as_ref())?);
                    }
                    if cfg.wavefunction.is_some() {
                        rep.merge(schrodinger(&cfg, &args.mode, system.as_ref())?);
                    }
                }
            }
        }
        Some(System::Line { sys, preset }) => match args.suite {
            Suite::Ermakov | Suite::All | Suite::Drift => {
                let (mut r, _) = lewis_leach_report(&cfg, sys, preset)?;
                if args.suite == Suite::Drift {
                    r.checks.retain(|k, _| k.starts_with("drift."));
                }
                rep.merge(r);
            }
            Suite::Schrodinger => rep.merge(schrodinger(&cfg, &args.mode, system.as_ref())?),
            Suite::Similarity if !cfg.similarity.is_empty() => rep.merge(similarity(&cfg, None)?),
            other => {
                return Err(Error::Config(format!(
                    "suite {other:?} needs a planar system, not lewis-leach"
                )))
            }
        },
        None => {
            if matches!(args.suite, Suite::Schrodinger | Suite::All)
                && (cfg.wavefunction.is_some() || args.suite == Suite::Schrodinger)
            {
                rep.merge(schrodinger(&cfg, &args.mode, None)?);
            }
            if matches!(args.suite, Suite::Similarity | Suite::All)
                && (!cfg.similarity.is_empty() || args.suite == Suite::Similarity)
            {
                rep.merge(similarity(&cfg, None)?);
            }
        }
    }
    if matches!(args.suite, Suite::Pde | Suite::Noether | Suite::All) && system.is_some() {
        rep.plan = Some(cfg.sampling);
    }
    let summary = match &system {
        Some(System::Planar { preset, .. }) => format!("system: {}\n", preset_name(preset)),
        Some(System::Line { .. }) => "system: lewis-leach\n".to_string(),
        None => String::new(),
    };
    emit(&args.run, &rep, &summary, out)
}

fn orbit(args: &RunArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = load(args)?;
    let (family, preset) = match &cfg.system {
        Some(_) => match cfg.system()? {
            System::Planar { family, preset } => (family, preset),
            System::Line { .. } => {
                return Err(Error::Config("`orbit` needs the scaled-kepler preset".into()))
            }
        },
        None => {
            let p = preset("scaled-kepler", &Params::new())?;
            (p.family().expect("planar preset").clone(), Some(p))
        }
    };
    let sys = Planar {
        cfg: &cfg,
        family,
        preset,
    };
    let traj = sys.trajectory()?;
    let rep = sys.orbit(&traj)?;
    let (phi, ..) = sys.scaled_kepler().expect("checked by orbit");
    if let Some(dir) = &args.out {
        write_file(dir, "trajectory.csv", traj.to_csv().as_bytes())?;
        let mut csv = String::from("t,scaled_radius,theta\n");
        for s in &traj.samples {
            let _ = writeln!(csv, "{},{},{}", s.t, phi.eval(s.t)? / s.r, s.theta);
        }
        write_file(dir, "orbit.csv", csv.as_bytes())?;
    }
    let summary = format!("system: scaled-kepler\n{}", termination_line(&traj));
    emit(args, &rep, &summary, out)
}

fn wavefunction(args: &WaveArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = load(&args.run)?;
    let (p, spec) = mode_params(&cfg, &args.mode)?;
    let mut csv = String::from("r,theta,t,re,im,abs\n");
    for t in spec.t.values() {
        for theta in spec.theta.values() {
            for r in spec.r.values() {
                let v = psi(&p, r, theta, t)?;
                let _ = writeln!(csv, "{r},{theta},{t},{},{},{}", v.re, v.im, v.norm());
            }
        }
    }
    let rep = schrodinger(&cfg, &args.mode, None)?;
    match &args.run.out {
        Some(dir) => {
            write_file(dir, "wavefunction.csv", csv.as_bytes())?;
            let summary = format!(
                "mode: a = {} b = {} hbar = {}\nk = {} m = {} single_valued = {}\n",
                p.a,
                p.b,
                p.hbar,
                p.k(),
                p.m(),
                p.single_valued()
            );
            emit(&args.run, &rep, &summary, out)
        }
        None if args.run.json => emit(&args.run, &rep, "", out),
        None => {
            out.write_all(csv.as_bytes())?;
            Ok(rep.passed())
        }
    }
}

fn binary(args: &RunArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = load(args)?;
    let p = match &cfg.system {
        Some(_) => match cfg.system()? {
            System::Planar { preset: Some(p), .. } if matches!(p.kind, PresetKind::Binary { .. }) => p,
            _ => return Err(Error::Config("`binary` needs the binary preset".into())),
        },
        None => preset("binary", &Params::new())?,
    };
    let PresetKind::Binary { g, b, .. } = p.kind else {
        unreachable!()
    };
    let family = p.family().expect("planar preset").clone();
    let sys = Planar {
        cfg: &cfg,
        family: family.clone(),
        preset: Some(p.clone()),
    };
    let s0 = cfg.polar_initial()?;
    let cross = cartesian_crosscheck(&*sys.potential(), s0, sys.t_end(), &cfg.integrator)?;
    let traj = &cross.trajectory;
    let mut rep = sys.drift(traj)?;
    rep.insert("binary.l3_cartesian", Check::at_most(cross.l3_drift, 1e-9));
    rep.insert(
        "binary.polar_vs_cartesian",
        Check::at_most(cross.max_deviation, 1e-6),
    );
    let law = p.mass_law().expect("binary preset has a mass law");
    let mut mass_dev: f64 = 0.0;
    let mut mass_csv = String::from("t,mass,mass_law\n");
    for s in &traj.samples {
        let m = p.frequency(s.t).expect("binary frequency") / g;
        let ml = law.mass(s.t);
        mass_dev = mass_dev.max((m - ml).abs() / ml.abs().max(1.0));
        let _ = writeln!(mass_csv, "{},{m},{ml}", s.t);
    }
    rep.insert("binary.mass_law", Check::at_most(mass_dev, 1e-12));
    if b[1] == 0.0 && b[2] == 0.0 && cfg.perturbation.is_none() {
        let values = traj
            .samples
            .iter()
            .map(|s| reduced_energy(&family, s.t, s.r, s.rdot))
            .collect::<Result<Vec<_>>>()?;
        rep.insert(
            "binary.energy",
            Check::at_most(crate::integrals::relative_drift(&values), 1e-9),
        );
    }
    if let Some(dir) = &args.out {
        write_file(dir, "trajectory.csv", traj.to_csv().as_bytes())?;
        write_file(dir, "mass.csv", mass_csv.as_bytes())?;
    }
    let summary = format!(
        "system: binary\nmass law: {}\n{}",
        serde_json::to_string(&law).expect("law serializes"),
        termination_line(traj)
    );
    emit(args, &rep, &summary, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<bool>, String) {
        let cli = Cli::try_parse_from(std::iter::once("tdcentral").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let res = run(&cli, &mut buf);
        (res, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn list_presets_text_and_json() {
        let (res, text) = run_args(&["list-presets"]);
        assert!(res.unwrap());
        assert!(text.contains("generalized-kepler") && text.contains("lewis-leach"));
        let (_, json) = run_args(&["list-presets", "--json"]);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v.as_array().unwrap().len() >= 8);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(main_with(["tdcentral", "simulate", "--bogus"]), 2);
        assert_eq!(main_with(["tdcentral", "simulate"]), 2);
        assert_eq!(main_with(["tdcentral", "verify", "--suite", "nope"]), 2);
        assert_eq!(main_with(["tdcentral", "verify", "--suite", "pde"]), 2);
    }

    #[test]
    fn schrodinger_without_config() {
        let (res, text) = run_args(&["verify", "--suite", "schrodinger", "--a", "1.5", "--b", "2"]);
        assert!(res.unwrap(), "{text}");
        assert!(text.contains("schrodinger.residual"));
    }

    #[test]
    fn default_orbit_and_binary() {
        let (res, text) = run_args(&["binary"]);
        assert!(res.unwrap(), "{text}");
        assert!(text.contains("binary.mass_law"));
    }
}

use std::path::PathBuf;

use clap::ValueEnum;
use pinlab::analysis::{
    annealed_contact_fraction, annealed_critical_point, annealed_free_energy, ext, force_model, phase_report,
    quenched_critical_point, quenched_sample, scan, CriticalSearch, ReportBudget,
};
use pinlab::excursion::Family;
use pinlab::renewal::{contact_count_dp, Disorder};
use pinlab::{ExcursionLaw, PinningModel, RateProfile};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::Artifacts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Rate,
    Annealed,
    Simulate,
    Critical,
    PhaseReport,
    Dp,
    Force,
    Scan,
}

/// Law and pinning-strength offset a command is evaluated with. The force
/// command swaps in the biased walk and shifts `u`; reported `u` values stay
/// in the caller's units.
struct Setup {
    law: ExcursionLaw,
    beta: f64,
    sigma: f64,
    u_offset: f64,
}

impl Setup {
    fn log_mv(&self) -> f64 {
        0.5 * self.beta * self.beta * self.sigma * self.sigma
    }
}

pub fn run(command: Command, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let mut out = Artifacts::default();
    match command {
        Command::Force => {
            let (setup, inner) = force_setup(cfg)?;
            dispatch(inner, cfg, &setup, &mut out)?;
        }
        c => {
            let setup = Setup {
                law: ExcursionLaw::from_family(cfg.law.clone())?,
                beta: cfg.beta,
                sigma: cfg.sigma,
                u_offset: 0.0,
            };
            dispatch(c, cfg, &setup, &mut out)?;
        }
    }
    out.commit()
}

fn force_setup(cfg: &ExperimentConfig) -> Result<(Setup, Command)> {
    let opts = cfg
        .options
        .force
        .as_ref()
        .ok_or_else(|| CliError::Config("force needs options.force".into()))?;
    let inner = Command::from_str(&opts.command, true)
        .map_err(|_| CliError::Config(format!("unknown force command {:?}", opts.command)))?;
    if inner == Command::Force {
        return Err(CliError::Config("force cannot wrap itself".into()));
    }
    let p = match (opts.p, &cfg.law) {
        (Some(p), _) => p,
        (None, Family::BiasedRw { p }) => *p,
        _ => {
            return Err(CliError::Config(
                "force needs options.force.p or a biased_rw law".into(),
            ))
        }
    };
    let disorder = if cfg.sigma > 0.0 {
        Disorder::Gaussian { sigma: cfg.sigma }
    } else {
        Disorder::Deterministic
    };
    let model = force_model(p, cfg.beta, 0.0, disorder)?;
    let setup = Setup {
        u_offset: model.u,
        law: model.law,
        beta: cfg.beta,
        sigma: cfg.sigma,
    };
    Ok((setup, inner))
}

fn dispatch(command: Command, cfg: &ExperimentConfig, s: &Setup, out: &mut Artifacts) -> Result<()> {
    match command {
        Command::Rate => rate(cfg, s, out),
        Command::Annealed => annealed(cfg, s, out),
        Command::Simulate => simulate(cfg, s, out),
        Command::Critical => critical(cfg, s, out),
        Command::PhaseReport => report(cfg, s, out),
        Command::Dp => dp(cfg, s, out),
        Command::Scan => scan_cmd(cfg, s, out),
        Command::Force => unreachable!("handled by run"),
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct RateSidecar {
    #[serde(serialize_with = "ext::f64")]
    b_E: f64,
    #[serde(serialize_with = "ext::f64")]
    r: f64,
    #[serde(serialize_with = "ext::f64")]
    m_E: f64,
    #[serde(serialize_with = "ext::f64")]
    b_E_prime: f64,
    #[serde(serialize_with = "ext::f64")]
    x_star: f64,
    #[serde(serialize_with = "ext::opt")]
    delta0: Option<f64>,
}

fn rate(cfg: &ExperimentConfig, s: &Setup, out: &mut Artifacts) -> Result<()> {
    let profile = RateProfile::with_disorder(s.law.clone(), s.beta, s.log_mv());
    let grid = match cfg.options.delta_grid {
        Some(g) => g.values(),
        None => {
            let top = 1.0 / s.law.analytics().a as f64;
            (0..=100).map(|i| top * i as f64 / 100.0).collect()
        }
    };
    out.csv(cfg.csv_path()?, &profile.table(&grid))?;
    if let Some(path) = &cfg.outputs.json_path {
        let sum = profile.summary();
        let side = RateSidecar {
            b_E: sum.b_e,
            r: sum.r,
            m_E: sum.m_e,
            b_E_prime: sum.b_e_prime,
            x_star: sum.x_star,
            delta0: sum.delta0,
        };
        out.json(path, &side)?;
    }
    Ok(())
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct AnnealedRow {
    beta: f64,
    u: f64,
    f: f64,
    C: f64,
}

/// `C^a`, falling back to the variational maximiser exactly at `u_c`.
fn contact_annealed(s: &Setup, u: f64) -> Result<f64> {
    match annealed_contact_fraction(&s.law, s.beta, u, s.log_mv()) {
        Ok(c) => Ok(c),
        Err(pinlab::Error::AtCriticalPoint { .. }) => {
            let p = RateProfile::with_disorder(s.law.clone(), s.beta, s.log_mv());
            Ok(p.variational_annealed(s.beta, u, s.log_mv()).1)
        }
        Err(e) => Err(e.into()),
    }
}

fn annealed(cfg: &ExperimentConfig, s: &Setup, out: &mut Artifacts) -> Result<()> {
    let rows = cfg
        .u_values()?
        .into_iter()
        .map(|u| {
            let m = u + s.u_offset;
            Ok(AnnealedRow {
                beta: s.beta,
                u,
                f: annealed_free_energy(&s.law, s.beta, m, s.log_mv()),
                C: contact_annealed(s, m)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.csv(cfg.csv_path()?, &rows)
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct SimulateRow {
    seed: u64,
    N: usize,
    beta: f64,
    u: f64,
    logZ_free: f64,
    logZ_constrained: f64,
    contact_fraction: f64,
}

fn simulate(cfg: &ExperimentConfig, s: &Setup, out: &mut Artifacts) -> Result<()> {
    let n = cfg.size();
    let mut rows = Vec::new();
    for u in cfg.u_values()? {
        let model = PinningModel::gaussian(s.law.clone(), s.beta, u + s.u_offset, s.sigma)?;
        let sample = quenched_sample(&model, n, cfg.replicas, cfg.master_seed)?;
        rows.extend(sample.rows.iter().map(|r| SimulateRow {
            seed: r.seed,
            N: n,
            beta: s.beta,
            u,
            logZ_free: r.log_z_free,
            logZ_constrained: r.log_z_constrained,
            contact_fraction: r.contact_fraction,
        }));
    }
    out.csv(cfg.csv_path()?, &rows)
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct LadderRow {
    N: usize,
    u_c: f64,
    width: f64,
}

#[derive(Serialize)]
struct CriticalOutput {
    beta: f64,
    sigma: f64,
    #[serde(serialize_with = "ext::f64")]
    u_c_annealed: f64,
    estimate: f64,
    uncertainty: f64,
    replicas: usize,
    master_seed: u64,
    ladder: Vec<LadderRow>,
}

fn critical(cfg: &ExperimentConfig, s: &Setup, out: &mut Artifacts) -> Result<()> {
    let u_ca = annealed_critical_point(&s.law, s.beta, s.log_mv());
    let opts = cfg.options.critical.unwrap_or_default();
    // u_c^q lies in [u_c^a, r/β].
    let default_lo = if u_ca.is_finite() { u_ca - 0.1 } else { -1.0 };
    let search = CriticalSearch {
        u_lo: opts.u_lo.map_or(default_lo, |u| u + s.u_offset),
        u_hi: opts.u_hi.map_or(s.law.r() / s.beta + 0.25, |u| u + s.u_offset),
        tol: opts.tol.unwrap_or(1e-4),
    };
    let est = quenched_critical_point(
        &s.law,
        s.beta,
        s.sigma,
        &cfg.n_ladder,
        cfg.replicas,
        cfg.master_seed,
        search,
    )?;
    let ladder: Vec<LadderRow> = est
        .ladder
        .iter()
        .map(|p| LadderRow {
            N: p.n,
            u_c: p.u_c - s.u_offset,
            width: p.width,
        })
        .collect();
    if let Some(path) = &cfg.outputs.csv_path {
        out.csv(path, &ladder)?;
    }
    let res = CriticalOutput {
        beta: s.beta,
        sigma: s.sigma,
        u_c_annealed: u_ca - s.u_offset,
        estimate: est.estimate - s.u_offset,
        uncertainty: est.uncertainty,
        replicas: cfg.replicas,
        master_seed: cfg.master_seed,
        ladder,
    };
    out.json(cfg.json_path()?, &res)
}

fn report(cfg: &ExperimentConfig, s: &Setup, out: &mut Artifacts) -> Result<()> {
    let o = cfg.options.report.unwrap_or_default();
    let d = ReportBudget::default();
    let budget = ReportBudget {
        ladder: cfg.n_ladder.clone(),
        replicas: cfg.replicas,
        master_seed: cfg.master_seed,
        margin: o.margin.unwrap_or(d.margin),
        scan_points: o.scan_points.unwrap_or(d.scan_points),
        coupled_n: o.coupled_n.unwrap_or(d.coupled_n),
        coupled_replicas: o.coupled_replicas.unwrap_or(d.coupled_replicas),
        tol: o.tol.unwrap_or(d.tol),
    };
    let mut rep = phase_report(&s.law, s.beta, s.sigma, &budget)?;
    rep.u_c_annealed -= s.u_offset;
    rep.u_c_quenched_estimate = rep.u_c_quenched_estimate.map(|u| u - s.u_offset);
    out.json(cfg.json_path()?, &rep)
}

#[derive(Serialize)]
struct DpRow {
    k: usize,
    delta: f64,
    #[serde(serialize_with = "ext::f64")]
    log_prob: f64,
}

#[derive(Serialize)]
struct DpWindow {
    lo: f64,
    hi: f64,
    /// `-(1/N) log P(lo N < L_N < hi N, X_N = 0)`.
    #[serde(serialize_with = "ext::f64")]
    empirical_rate: f64,
    /// `inf ĝ` over the window.
    #[serde(serialize_with = "ext::f64")]
    inf_ghat: f64,
    #[serde(serialize_with = "ext::f64")]
    relative_error: f64,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct DpOutput {
    N: usize,
    windows: Vec<DpWindow>,
}

fn dp(cfg: &ExperimentConfig, s: &Setup, out: &mut Artifacts) -> Result<()> {
    let o = cfg
        .options
        .dp
        .as_ref()
        .ok_or_else(|| CliError::Config("dp needs options.dp".into()))?;
    let n = o.n;
    if n == 0 {
        return Err(CliError::Config("options.dp.N must be at least 1".into()));
    }
    let lp = contact_count_dp(&s.law, n)?;
    let nf = n as f64;
    let rows: Vec<DpRow> = lp
        .iter()
        .enumerate()
        .map(|(k, &l)| DpRow {
            k,
            delta: k as f64 / nf,
            log_prob: l,
        })
        .collect();
    let profile = RateProfile::new(s.law.clone());
    let mut windows = Vec::with_capacity(o.windows.len());
    for &(lo, hi) in &o.windows {
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(CliError::Config(format!(
                "dp window ({lo}, {hi}) must satisfy 0 <= lo < hi <= 1"
            )));
        }
        let terms = lp
            .iter()
            .enumerate()
            .filter(|&(k, _)| lo * nf < k as f64 && (k as f64) < hi * nf)
            .map(|(_, &l)| l);
        let empirical_rate = -pinlab::numerics::log_sum_exp(terms) / nf;
        let inf_ghat = (0..=1000)
            .map(|i| profile.ghat(lo + (hi - lo) * i as f64 / 1000.0))
            .fold(f64::INFINITY, f64::min);
        windows.push(DpWindow {
            lo,
            hi,
            empirical_rate,
            inf_ghat,
            relative_error: ((empirical_rate - inf_ghat) / inf_ghat).abs(),
        });
    }
    out.csv(cfg.csv_path()?, &rows)?;
    if let Some(path) = &cfg.outputs.json_path {
        out.json(path, &DpOutput { N: n, windows })?;
    }
    Ok(())
}

fn scan_cmd(cfg: &ExperimentConfig, s: &Setup, out: &mut Artifacts) -> Result<()> {
    let us: Vec<f64> = cfg.u_values()?;
    let mapped: Vec<f64> = us.iter().map(|u| u + s.u_offset).collect();
    let mut rows = scan(
        &s.law,
        s.beta,
        s.sigma,
        &mapped,
        cfg.size(),
        cfg.replicas,
        cfg.master_seed,
    )?;
    for (r, &u) in rows.iter_mut().zip(&us) {
        r.u = u;
    }
    out.csv(cfg.csv_path()?, &rows)
}

//! One function per subcommand. Each returns a JSON summary, an optional
//! table for CSV output, and whether every assertion held.

use serde_json::{json, Value};

use super::config::within;
use super::{parse_sequence_spec, ExperimentConfig};
use crate::counterexample::{
    cioranescu_scan, contradiction_experiment, domination_check, schwarz_bound_check, BetaKind, CounterexampleModel,
    MinModConfig, ScanOptions,
};
use crate::criteria::{criteria2_report, msnq_omega_conditions, msnq_series, nqa_series, sequence_profile, ProfileKind, Verdict};
use crate::error::{Error, Result};
use crate::majorants::{
    beta_profile, majorant_chain, necessary_limits_probe, s_k_nonneg_sweep, square_exponent_thresholds, step_counterexample,
    ConcaveSeriesMajorant,
};
use crate::numeric::log_grid;
use crate::weight_core::{
    big_n_far, coeff_table, distribution_n, log_convexity_check, log_omega_far, rounding_slack, CoeffOptions, Family, ZeroSequence,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    WeightEval,
    WeightCoeffs,
    CriteriaClassify,
    CriteriaOmega6,
    MajorantAlpha,
    MajorantBeta,
    MajorantSkSweep,
    MajorantStep,
    CxBuild,
    CxDominate,
    CxSchwarz,
    CxContradict,
    CxScan,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::WeightEval => "weight eval",
            Command::WeightCoeffs => "weight coeffs",
            Command::CriteriaClassify => "criteria classify",
            Command::CriteriaOmega6 => "criteria omega6",
            Command::MajorantAlpha => "majorant alpha",
            Command::MajorantBeta => "majorant beta",
            Command::MajorantSkSweep => "majorant sk-sweep",
            Command::MajorantStep => "majorant step",
            Command::CxBuild => "cx build",
            Command::CxDominate => "cx dominate",
            Command::CxSchwarz => "cx schwarz",
            Command::CxContradict => "cx contradict",
            Command::CxScan => "cx scan",
        }
    }
}

/// Rows of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub summary: Value,
    pub table: Option<Table>,
    pub passed: bool,
}

/// Shortest round-trip decimal form.
pub(crate) fn num(x: f64) -> String {
    format!("{x:?}")
}

fn sequence(cfg: &ExperimentConfig) -> Result<ZeroSequence> {
    parse_sequence_spec(cfg.sequence_text()?)
}

fn grid(cfg: &ExperimentConfig, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if let Some(t) = &cfg.t {
        if t.is_empty() || t.iter().any(|x| !(x.is_finite() && *x > 0.0)) || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("--t must be a strictly increasing list of positive reals".into()));
        }
        return Ok(t.clone());
    }
    let (lo, hi) = (cfg.t_lo.unwrap_or(lo), cfg.t_hi.unwrap_or(hi));
    let n = within("points", cfg.points.unwrap_or(n), 1, 1_000_000)?;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::Config(format!("grid needs 0 < t_lo ≤ t_hi, got [{lo}, {hi}]")));
    }
    Ok(log_grid(lo, hi, n))
}

fn precision(cfg: &ExperimentConfig) -> Result<u32> {
    within("precision_bits", cfg.precision_bits.unwrap_or(128), 64, 4096)
}

fn scan_options(cfg: &ExperimentConfig) -> Result<ScanOptions> {
    let d = ScanOptions::default();
    Ok(ScanOptions {
        density: within("density", cfg.density.unwrap_or(d.density), 3, 10_000_000)?,
        refine_iters: within("refine_iters", cfg.refine_iters.unwrap_or(d.refine_iters), 0, 10_000)?,
    })
}

fn model(cfg: &ExperimentConfig, default_j_max: u64) -> Result<CounterexampleModel> {
    let s = sequence(cfg)?;
    let j_max = within("j_max", cfg.j_max.unwrap_or(default_j_max), 1, 1000)?;
    CounterexampleModel::build(&s, j_max, precision(cfg)?)
}

fn betas(cfg: &ExperimentConfig, source: &ZeroSequence) -> Result<Vec<BetaKind>> {
    let weight = || BetaKind::LogWeight { rho: source.clone(), c: cfg.c.unwrap_or(1.0), c_prime: cfg.c_prime.unwrap_or(1.0) };
    Ok(match cfg.beta.as_deref().unwrap_or("all") {
        "all" => {
            let mut v = BetaKind::shipped(source);
            v[2] = weight();
            v
        }
        "square-log" => vec![BetaKind::SquareLog],
        "loglog-square" => vec![BetaKind::LogLogSquare],
        "log-weight" => vec![weight()],
        "alpha-doubled" => vec![BetaKind::AlphaDoubled { source: source.clone() }],
        other => return Err(Error::Config(format!("unknown beta '{other}'"))),
    })
}

pub fn run(cmd: Command, cfg: &ExperimentConfig) -> Result<Outcome> {
    match cmd {
        Command::WeightEval => weight_eval(cfg),
        Command::WeightCoeffs => weight_coeffs(cfg),
        Command::CriteriaClassify => criteria_classify(cfg),
        Command::CriteriaOmega6 => criteria_omega6(cfg),
        Command::MajorantAlpha => majorant_alpha(cfg),
        Command::MajorantBeta => majorant_beta(cfg),
        Command::MajorantSkSweep => majorant_sk_sweep(cfg),
        Command::MajorantStep => majorant_step(cfg),
        Command::CxBuild => cx_build(cfg),
        Command::CxDominate => cx_dominate(cfg),
        Command::CxSchwarz => cx_schwarz(cfg),
        Command::CxContradict => cx_contradict(cfg),
        Command::CxScan => cx_scan(cfg),
    }
}

fn weight_eval(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = sequence(cfg)?;
    let g = grid(cfg, 0.1, 1e6, 50)?;
    let mut rows = Vec::with_capacity(g.len());
    for &t in &g {
        let (v, e) = log_omega_far(&s, t)?;
        let (nv, ne) = big_n_far(&s, t)?;
        rows.push(vec![num(t), num(v), num(e), distribution_n(&s, t)?.to_string(), num(nv), num(ne)]);
    }
    Ok(Outcome {
        summary: json!({"command": "weight eval", "sequence": s.render(), "omega0_flag": s.omega0_flag(), "points": g.len()}),
        table: Some(Table { header: vec!["t", "ln_omega", "ln_omega_err", "n_t", "big_n", "big_n_err"], rows }),
        passed: true,
    })
}

fn weight_coeffs(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = sequence(cfg)?;
    let n = within("n", cfg.n.unwrap_or(1), 1, 64)?;
    let k = within("k_max", cfg.k_max.unwrap_or(40), 1, 100_000)?;
    let table = coeff_table(&s, n, k, CoeffOptions::default())?;
    let lc = log_convexity_check(&table);
    let rows = table.ln_a.iter().enumerate().map(|(i, a)| vec![i.to_string(), num(*a)]).collect();
    Ok(Outcome {
        summary: json!({
            "command": "weight coeffs",
            "sequence": s.render(),
            "n": n,
            "k_max": k,
            "trunc_error_rel": table.trunc_error_rel,
            "j_used": table.j_used,
            "complete": table.complete,
            "log_convexity": lc,
        }),
        table: Some(Table { header: vec!["k", "ln_a"], rows }),
        passed: lc.violations.is_empty(),
    })
}

fn criteria_classify(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = sequence(cfg)?;
    let j = within("j_max", cfg.j_max.unwrap_or(40), 2, 1000)?;
    let mut profiles = Vec::new();
    let mut rows = Vec::new();
    for kind in [ProfileKind::CountN, ProfileKind::BigN, ProfileKind::LogOmega] {
        let p = sequence_profile(&s, kind, j)?;
        let nqa = nqa_series(&p, p.tails.nqa);
        let msnq = msnq_series(&p)?;
        rows.push(vec![kind.label().to_string(), nqa.verdict.as_str().to_string(), msnq.verdict.as_str().to_string()]);
        profiles.push(json!({"profile": kind.label(), "nqa": nqa.to_json(32), "msnq": msnq.to_json(32)}));
    }
    let c2 = criteria2_report(&s, j)?;
    Ok(Outcome {
        summary: json!({"command": "criteria classify", "sequence": s.render(), "j_max": j, "profiles": profiles, "criteria2": c2.to_json()}),
        table: Some(Table { header: vec!["profile", "nqa", "msnq"], rows }),
        passed: c2.all_checks_pass(),
    })
}

fn criteria_omega6(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = sequence(cfg)?;
    let j = within("j_max", cfg.j_max.unwrap_or(40), 2, 1000)?;
    let r = msnq_omega_conditions(&s, j)?;
    let rows = r
        .labels
        .iter()
        .zip(&r.diagnostics)
        .map(|(l, d)| vec![l.clone(), d.verdict.as_str().to_string(), d.last().map_or(String::new(), num)])
        .collect();
    let mut summary = r.to_json();
    summary["command"] = json!("criteria omega6");
    Ok(Outcome { summary, table: Some(Table { header: vec!["condition", "verdict", "last_partial_sum"], rows }), passed: r.all_checks_pass() })
}

fn majorant_alpha(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = sequence(cfg)?;
    let g = grid(cfg, 1.0, 1e5, 200)?;
    let alpha = ConcaveSeriesMajorant::standard(&s)?;
    let mut rows = Vec::with_capacity(g.len());
    let mut violations = 0;
    for &t in &g {
        let (a, ea) = alpha.eval(t)?;
        let (w, _) = log_omega_far(&s, t)?;
        if w > a + ea + rounding_slack(a) {
            violations += 1;
        }
        rows.push(vec![num(t), num(w), num(a), num(ea)]);
    }
    Ok(Outcome {
        summary: json!({"command": "majorant alpha", "sequence": s.render(), "concave": alpha.is_concave(), "points": g.len(), "omega_alpha_violations": violations}),
        table: Some(Table { header: vec!["t", "ln_omega", "alpha", "alpha_err"], rows }),
        passed: violations == 0,
    })
}

fn majorant_beta(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = sequence(cfg)?;
    // β(t) looks at α up to 2^k_max·e·t, so the default range stays small.
    let g = grid(cfg, 1.0, 1e3, 200)?;
    let tail_terms = within("k_max", cfg.k_max.unwrap_or(24), 1, 200)?;
    let (b, report) = majorant_chain(&s, &g, tail_terms)?;
    // The dyadic profile has a certified tail only for geometric sources.
    let nqa = match s.family() {
        Family::Geometric { .. } => {
            let j = within("j_max", cfg.j_max.unwrap_or(40), 1, 1000)?;
            let p = beta_profile(&b, j)?;
            Some(nqa_series(&p, p.tails.nqa))
        }
        _ => None,
    };
    let rows = report.points.iter().map(|p| vec![num(p.t), num(p.log_omega), num(p.alpha), num(p.beta), num(p.slack)]).collect();
    let passed = report.passed(1e-9) && nqa.as_ref().is_none_or(|d| d.verdict == Verdict::ConvergentCertified);
    Ok(Outcome {
        summary: json!({
            "command": "majorant beta",
            "sequence": s.render(),
            "lambda": report.lambda,
            "tail_terms": tail_terms,
            "omega_alpha_violations": report.omega_alpha_violations,
            "alpha_beta_violations": report.alpha_beta_violations,
            "max_rel_second_dd": report.max_rel_second_dd,
            "beta_nqa": nqa.map(|d| d.to_json(32)),
        }),
        table: Some(Table { header: vec!["t", "ln_omega", "alpha", "beta", "slack"], rows }),
        passed,
    })
}

fn majorant_sk_sweep(cfg: &ExperimentConfig) -> Result<Outcome> {
    let trials = within("trials", cfg.trials.unwrap_or(100), 1, 1_000_000)?;
    let k = within("k_max", cfg.k_max.unwrap_or(25), 1, 200)?;
    let r = s_k_nonneg_sweep(trials, k, cfg.seed.unwrap_or(0))?;
    let mut summary = serde_json::to_value(&r).map_err(|e| Error::Io(e.to_string()))?;
    summary["command"] = json!("majorant sk-sweep");
    Ok(Outcome { passed: r.passed(), summary, table: None })
}

fn majorant_step(cfg: &ExperimentConfig) -> Result<Outcome> {
    let k = within("k_max", cfg.k_max.unwrap_or(8), 1, 26)?;
    let j = within("j_max", cfg.j_max.unwrap_or(60), 1, 1000)?;
    let eps = cfg.eps.unwrap_or(1e-3);
    let th = square_exponent_thresholds(k);
    let st = step_counterexample(&th, j)?;
    let lim = necessary_limits_probe(&st.trace, eps)?;
    let exact = st.threshold_ratios.iter().all(|r| (r - 1.0).abs() <= 4.0 * f64::EPSILON);
    let rows = st.trace.grid.iter().zip(&st.trace.values).map(|(t, f)| vec![num(*t), num(*f), num(f * t.ln() / t)]).collect();
    Ok(Outcome {
        summary: json!({
            "command": "majorant step",
            "thresholds": st.thresholds,
            "threshold_ratios": st.threshold_ratios,
            "nqa": st.nqa.to_json(32),
            "ratio_decays": lim.ratio.decays,
            "log_ratio_decays": lim.log_ratio.decays,
            "log_ratio_tail_max": lim.log_ratio.tail_max,
        }),
        table: Some(Table { header: vec!["t", "f", "f_ln_t_over_t"], rows }),
        passed: exact && st.nqa.verdict == Verdict::ConvergentCertified && !lim.log_ratio.decays,
    })
}

fn cx_build(cfg: &ExperimentConfig) -> Result<Outcome> {
    let m = model(cfg, 40)?;
    let cum = m.mult.cumulative();
    let rows = m.mult.n.iter().zip(&cum).enumerate().map(|(i, (n, c))| vec![(i + 1).to_string(), n.to_string(), c.to_string()]).collect();
    Ok(Outcome {
        summary: json!({"command": "cx build", "source": m.mult.source, "j_max": m.mult.j_max, "weighted_sum": m.mult.weighted_sum(), "total": cum.last()}),
        table: Some(Table { header: vec!["j", "n_j", "n_2j"], rows }),
        passed: true,
    })
}

fn cx_dominate(cfg: &ExperimentConfig) -> Result<Outcome> {
    let m = model(cfg, 40)?;
    let radius = cfg.radius.unwrap_or(2f64.powi(m.mult.j_max as i32));
    let samples = within("samples", cfg.samples.unwrap_or(1000), 1, 10_000_000)?;
    let r = domination_check(&m, radius, samples, cfg.seed.unwrap_or(0))?;
    let mut summary = serde_json::to_value(&r).map_err(|e| Error::Io(e.to_string()))?;
    summary["command"] = json!("cx dominate");
    Ok(Outcome { passed: r.passed(), summary, table: None })
}

fn cx_schwarz(cfg: &ExperimentConfig) -> Result<Outcome> {
    let m = model(cfg, 40)?;
    let j = cfg.j.unwrap_or(5);
    let delta = cfg.delta.unwrap_or(0.5);
    let samples = within("samples", cfg.samples.unwrap_or(200), 2, 10_000_000)?;
    let r = schwarz_bound_check(&m, j, delta, samples, cfg.seed.unwrap_or(0))?;
    let mut summary = serde_json::to_value(&r).map_err(|e| Error::Io(e.to_string()))?;
    summary["command"] = json!("cx schwarz");
    Ok(Outcome { passed: r.passed(), summary, table: None })
}

fn cx_contradict(cfg: &ExperimentConfig) -> Result<Outcome> {
    let m = model(cfg, 60)?;
    let j_top = cfg.j_top.unwrap_or(m.mult.j_max);
    let scan = scan_options(cfg)?;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut passed = true;
    for b in betas(cfg, &m.mult.sequence)? {
        let r = contradiction_experiment(&m, &b, cfg.j0, j_top, scan)?;
        passed &= r.consistent();
        for row in &r.rows {
            rows.push(vec![
                r.beta.clone(),
                row.j.to_string(),
                row.n_j.to_string(),
                num(row.lhs_partial),
                num(row.rhs_partial),
                num(row.rhs_partial_upper),
                num(row.rhs_tail_bound),
                num(row.minmod_sup),
                num(row.schwarz_rhs),
                num(row.margin),
                (r.witness == Some(row.j)).to_string(),
            ]);
        }
        reports.push(json!({
            "beta": r.beta,
            "j0": r.j0,
            "j_top": r.j_top,
            "witness": r.witness,
            "lhs_final": r.rows.last().map(|x| x.lhs_partial),
            "rhs_upper": r.rhs_upper,
            "lhs_monotone": r.lhs_monotone,
            "schwarz_violations": r.schwarz_violations,
            "max_precision_gap": r.max_precision_gap,
        }));
    }
    Ok(Outcome {
        summary: json!({"command": "cx contradict", "source": m.mult.source, "j_max": m.mult.j_max, "precision_bits": m.precision_bits, "experiments": reports}),
        table: Some(Table {
            header: vec![
                "beta", "j", "n_j", "lhs_partial", "rhs_partial", "rhs_partial_upper", "rhs_tail_bound", "minmod_sup", "schwarz_rhs",
                "margin", "witness",
            ],
            rows,
        }),
        passed,
    })
}

fn cx_scan(cfg: &ExperimentConfig) -> Result<Outcome> {
    let m = model(cfg, 40)?;
    let rho = &m.mult.sequence;
    let mc = MinModConfig::new(vec![], cfg.c.unwrap_or(1.0), cfg.c_prime.unwrap_or(1.0), scan_options(cfg)?)?;
    let g = match &cfg.t {
        Some(_) => grid(cfg, 1.0, 1.0, 1)?,
        None => (1..=m.mult.j_max).map(|j| 2f64.powi(j as i32)).collect(),
    };
    let r = cioranescu_scan(&m, rho, &mc, &g)?;
    let rows = r.points.iter().map(|p| vec![num(p.t), num(p.r), num(p.sup), p.pass.to_string()]).collect();
    Ok(Outcome {
        summary: json!({"command": "cx scan", "source": m.mult.source, "c": r.c, "c_prime": r.c_prime, "failures": r.failures, "points": r.points.len()}),
        table: Some(Table { header: vec!["t", "r", "minmod_sup", "pass"], rows }),
        passed: true,
    })
}

//! Parameter sweeps, log-log exponent fits, simulation-vs-analytic comparison
//! and the figure presets.

use std::fmt;
use std::str::FromStr;

use crate::analytic::{
    analytic_ages, fcn_case_bounds, urn_age_bounds, urn_infected_upper_bound, AgeBounds, AnalyticAges, BoundTarget,
};
use crate::error::{Error, Result, Violations};
use crate::model::{AdversaryPolicy, CoinMode, NetworkKind, NetworkSpec};
use crate::simulator::{replicate, SimConfig, SimReport};

/// Which node's age a sweep reports at each `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeSelector {
    /// Node `i` (1-based).
    Fixed(usize),
    /// Node `n`.
    Infected,
    /// The MITM adversary `A`.
    Adversary,
    /// Ring node `m = ⌊n^α⌋`.
    PowerLaw { alpha: f64 },
    /// Ring node `m = ⌊√(α n ln n)⌋`.
    Transition { alpha: f64 },
}

impl NodeSelector {
    fn check(&self, v: &mut Violations) {
        match *self {
            NodeSelector::Fixed(0) => v.push("node index must be ≥ 1"),
            NodeSelector::PowerLaw { alpha } if !(alpha > 0.0 && alpha < 1.0) => {
                v.push(format!("alpha={alpha}: power-law exponent must lie in (0, 1)"))
            }
            NodeSelector::Transition { alpha } if !(alpha > 0.0 && alpha.is_finite()) => {
                v.push(format!("alpha={alpha}: transition constant must be positive"))
            }
            _ => {}
        }
    }

    /// The node index at size `n`, or `None` for the adversary.
    pub fn node_at(&self, n: usize) -> Option<usize> {
        let nf = n as f64;
        match *self {
            NodeSelector::Fixed(i) => Some(i),
            NodeSelector::Infected => Some(n),
            NodeSelector::Adversary => None,
            // the nudge keeps exact powers from flooring one short
            NodeSelector::PowerLaw { alpha } => Some((nf.powf(alpha) + 1e-9).floor() as usize),
            NodeSelector::Transition { alpha } => Some((alpha * nf * nf.ln()).sqrt().floor() as usize),
        }
    }

    /// Smallest `n` giving the same power-law index as `n`; identity for other selectors.
    pub fn snap(&self, n: usize) -> usize {
        match *self {
            NodeSelector::PowerLaw { alpha } => {
                let l = self.node_at(n).unwrap_or(0) as f64;
                (l.powf(1.0 / alpha) - 1e-9).ceil().max(1.0) as usize
            }
            _ => n,
        }
    }

    pub fn label(&self, n: usize) -> String {
        match self.node_at(n) {
            None => "A".to_string(),
            Some(i) if i == n => "n".to_string(),
            Some(i) => i.to_string(),
        }
    }
}

impl fmt::Display for NodeSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeSelector::Fixed(i) => write!(f, "v_{i}"),
            NodeSelector::Infected => f.write_str("v_n"),
            NodeSelector::Adversary => f.write_str("v_A"),
            NodeSelector::PowerLaw { alpha } => write!(f, "m_pow_{alpha}"),
            NodeSelector::Transition { .. } => f.write_str("transition"),
        }
    }
}

/// Accepts `1`, `n`, `A`, `pow:0.8` or `transition:0.25`.
impl FromStr for NodeSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidConfig(Violations(vec![format!(
                "node selector {s:?}: expected an index, n, A, pow:ALPHA or transition:ALPHA"
            )]))
        };
        let parse_alpha = |a: &str| a.parse::<f64>().map_err(|_| bad());
        let sel = match s {
            "n" => NodeSelector::Infected,
            "A" | "a" => NodeSelector::Adversary,
            _ => match s.split_once(':') {
                Some(("pow", a)) => NodeSelector::PowerLaw { alpha: parse_alpha(a)? },
                Some(("transition", a)) => NodeSelector::Transition { alpha: parse_alpha(a)? },
                Some(_) => return Err(bad()),
                None => NodeSelector::Fixed(s.parse().map_err(|_| bad())?),
            },
        };
        let mut v = Violations::default();
        sel.check(&mut v);
        v.into_result().map(|_| sel)
    }
}

/// Simulation settings applied to every row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub horizon: f64,
    pub warmup: f64,
    pub seed: u64,
    pub reps: usize,
    pub coin_mode: CoinMode,
}

impl SimParams {
    pub fn new(horizon: f64, reps: usize) -> Self {
        SimParams {
            horizon,
            warmup: horizon * crate::model::DEFAULT_WARMUP_FRACTION,
            seed: 0,
            reps,
            coin_mode: CoinMode::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn config(&self, spec: NetworkSpec) -> SimConfig {
        SimConfig::new(spec, self.horizon)
            .with_warmup(self.warmup)
            .with_seed(self.seed)
            .with_coin_mode(self.coin_mode)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Curve name when several sweeps share one table.
    pub series: Option<String>,
    pub n: usize,
    pub node_label: String,
    pub analytic: f64,
    pub sim_mean: Option<f64>,
    pub sim_ci95: Option<f64>,
    pub bound_lower: Option<f64>,
    pub bound_upper: Option<f64>,
}

impl SweepRow {
    /// True unless a present bound is violated beyond `rel` relative slack.
    pub fn within_bounds(&self, rel: f64) -> bool {
        self.bound_lower.is_none_or(|lo| self.analytic >= lo * (1.0 - rel))
            && self.bound_upper.is_none_or(|hi| self.analytic <= hi * (1.0 + rel))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    /// Constant input: the exponent is reported as 0.
    pub degenerate: bool,
    pub rows_used: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Requested sizes that were dropped, with the reason.
    pub skipped: Vec<(usize, String)>,
    /// Fitted exponent per series (presets only).
    pub fits: Vec<(String, ExponentFit)>,
}

impl SweepResult {
    pub fn series(&self, name: &str) -> impl DoubleEndedIterator<Item = &SweepRow> {
        let name = name.to_string();
        self.rows
            .iter()
            .filter(move |r| r.series.as_deref() == Some(name.as_str()))
    }

    pub fn fit(&self, name: &str) -> Option<ExponentFit> {
        self.fits.iter().find(|(s, _)| s == name).map(|(_, f)| *f)
    }

    pub fn has_sim(&self) -> bool {
        self.rows.iter().any(|r| r.sim_mean.is_some())
    }

    pub fn has_bounds(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.bound_lower.is_some() || r.bound_upper.is_some())
    }

    pub fn has_series(&self) -> bool {
        self.rows.iter().any(|r| r.series.is_some())
    }
}

/// Geometric grid from `min` to `max` (both included), deduplicated after rounding.
pub fn geometric_grid(min: usize, max: usize, factor: f64) -> Result<Vec<usize>> {
    let mut v = Violations::default();
    if min < 1 || max < min {
        v.push(format!("grid {min}:{max}: need 1 ≤ min ≤ max"));
    }
    if !(factor > 1.0 && factor.is_finite()) {
        v.push(format!("factor={factor}: grid factor must exceed 1"));
    }
    v.into_result()?;
    let mut out = Vec::new();
    let mut x = min as f64;
    while x.round() as usize <= max {
        out.push(x.round() as usize);
        x *= factor;
    }
    if out.last() != Some(&max) {
        out.push(max);
    }
    out.dedup();
    Ok(out)
}

fn with_n(template: &NetworkSpec, n: usize) -> NetworkSpec {
    NetworkSpec { n, ..*template }
}

/// Tightest closed-form interval for the selected node, if one applies.
fn bounds_for(spec: &NetworkSpec, ages: &AnalyticAges, node: Option<usize>) -> Option<(f64, f64)> {
    if spec.honest {
        return None;
    }
    let NetworkSpec {
        kind,
        n,
        lambda,
        policy: AdversaryPolicy { p, q },
        ..
    } = *spec;
    let intersect = |bs: Vec<AgeBounds>, target: BoundTarget| {
        bs.into_iter()
            .filter(|b| b.target == target)
            .map(|b| (b.lower, b.upper))
            .reduce(|(a, b), (c, d)| (a.max(c), b.min(d)))
    };
    let to_pair = |(lo, hi): (f64, f64)| (lo > 0.0 || hi.is_finite()).then_some((lo, hi));
    match (kind, node) {
        (NetworkKind::FullyConnectedCapture, Some(i)) => {
            let target = if i == n {
                BoundTarget::Node(n)
            } else {
                BoundTarget::Node(1)
            };
            intersect(fcn_case_bounds(n, lambda, p, q).ok()?, target).and_then(to_pair)
        }
        (NetworkKind::FullyConnectedMitm, Some(i)) if i < n => Some((ages.v_adversary? / 4.0, f64::INFINITY)),
        (NetworkKind::FullyConnectedMitm, Some(_)) => Some((ages.v_adversary? / 2.0, f64::INFINITY)),
        (NetworkKind::UnidirectionalRingCapture, Some(m)) if m < n => {
            let b = urn_age_bounds(n, lambda, p, m, ages.v_infected).ok()?;
            Some((b.lower, b.upper))
        }
        (NetworkKind::UnidirectionalRingCapture, Some(_)) => {
            let b = urn_infected_upper_bound(n, lambda, p, q).ok()?;
            Some((b.lower, b.upper))
        }
        _ => None,
    }
}

/// One row per distinct (snapped) `n`, sorted by `n`.
///
/// Sizes whose selected node falls outside `1..=n` are skipped and listed.
/// Simulation columns are filled only when `sim` is given.
pub fn sweep(
    template: &NetworkSpec,
    n_values: &[usize],
    selector: NodeSelector,
    sim: Option<&SimParams>,
) -> Result<SweepResult> {
    let mut v = Violations::default();
    selector.check(&mut v);
    if selector == NodeSelector::Adversary && !template.kind.has_adversary_node() {
        v.push(format!("{}: only fcn-mitm has an adversary node", template.kind));
    }
    if matches!(
        selector,
        NodeSelector::PowerLaw { .. } | NodeSelector::Transition { .. }
    ) && !template.kind.is_ring()
    {
        v.push(format!(
            "{}: power-law node indices apply to the ring only",
            template.kind
        ));
    }
    v.into_result()?;

    let mut ns: Vec<usize> = n_values.iter().map(|&n| selector.snap(n)).collect();
    ns.sort_unstable();
    ns.dedup();

    let mut out = SweepResult::default();
    for n in ns {
        let node = selector.node_at(n);
        if let Some(i) = node {
            if i < 1 || i > n {
                out.skipped.push((n, format!("node index {i} outside 1..={n}")));
                continue;
            }
            if matches!(
                selector,
                NodeSelector::PowerLaw { .. } | NodeSelector::Transition { .. }
            ) && i >= n
            {
                out.skipped.push((n, format!("m={i} reaches the infected node")));
                continue;
            }
        }
        if n < 2 {
            out.skipped.push((n, "n must be ≥ 2".into()));
            continue;
        }
        let spec = with_n(template, n);
        spec.validate()?;
        let ages = analytic_ages(&spec)?;
        let analytic = match node {
            Some(i) => ages.node_age(i),
            None => ages.v_adversary.expect("mitm reports the adversary age"),
        };
        let bounds = bounds_for(&spec, &ages, node);
        let (sim_mean, sim_ci95) = match sim {
            None => (None, None),
            Some(params) => {
                let report = replicate(&params.config(spec), params.reps)?;
                match node {
                    Some(i) => {
                        let (mean, ci) = report.node(i);
                        (Some(mean), ci)
                    }
                    None => (report.mean_age_adversary, report.ci95_adversary),
                }
            }
        };
        out.rows.push(SweepRow {
            series: None,
            n,
            node_label: selector.label(n),
            analytic,
            sim_mean,
            sim_ci95,
            bound_lower: bounds.map(|b| b.0).filter(|lo| *lo > 0.0),
            bound_upper: bounds.map(|b| b.1).filter(|hi| hi.is_finite()),
        });
    }
    Ok(out)
}

/// Least-squares slope of `ln v` against `ln n`.
///
/// Uses rows in the largest decade of `n` (`n ≥ n_max / 10`), or all rows if
/// that leaves fewer than three.
pub fn scaling_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    let mut v = Violations::default();
    if points
        .iter()
        .any(|&(n, y)| !(n > 0.0 && y > 0.0 && n.is_finite() && y.is_finite()))
    {
        v.push("exponent fit needs positive finite (n, v) pairs");
    }
    v.into_result()?;
    let n_max = points.iter().map(|p| p.0).fold(0.0, f64::max);
    let n_min = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if points.len() < 3 || n_max < 4.0 * n_min {
        return Err(Error::InsufficientFitData(format!(
            "{} rows spanning a factor {:.3}; need ≥ 3 rows spanning ≥ 4",
            points.len(),
            n_max / n_min
        )));
    }
    let mut used: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 >= n_max / 10.0).collect();
    if used.len() < 3 {
        used = points.to_vec();
    }
    let ys: Vec<f64> = used.iter().map(|p| p.1).collect();
    if ys.iter().all(|y| *y == ys[0]) {
        return Ok(ExponentFit {
            exponent: 0.0,
            degenerate: true,
            rows_used: used.len(),
        });
    }
    let k = used.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = used.iter().map(|(n, y)| (n.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(ExponentFit {
        exponent: sxy / sxx,
        degenerate: false,
        rows_used: used.len(),
    })
}

/// Per-node simulation error against the recursions.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub analytic: Vec<f64>,
    pub report: SimReport,
    /// `|sim - analytic| / analytic`, index `i - 1`.
    pub rel_err: Vec<f64>,
    pub max_rel_err: f64,
    /// Nodes (1-based) whose 95% interval misses the analytic value.
    pub ci_excludes: Vec<usize>,
    pub adversary_rel_err: Option<f64>,
}

pub fn compare_sim_analytic(spec: &NetworkSpec, sim: &SimParams) -> Result<Comparison> {
    let ages = analytic_ages(spec)?;
    let analytic = ages.per_node();
    let report = replicate(&sim.config(*spec), sim.reps)?;
    let rel_err: Vec<f64> = report
        .mean_age
        .iter()
        .zip(&analytic)
        .map(|(s, a)| (s - a).abs() / a)
        .collect();
    let max_rel_err = rel_err.iter().copied().fold(0.0, f64::max);
    let ci_excludes = match &report.ci95 {
        Some(ci) => (0..spec.n)
            .filter(|&i| (report.mean_age[i] - analytic[i]).abs() > ci[i])
            .map(|i| i + 1)
            .collect(),
        None => Vec::new(),
    };
    let adversary_rel_err = match (ages.v_adversary, report.mean_age_adversary) {
        (Some(a), Some(s)) => Some((s - a).abs() / a),
        _ => None,
    };
    Ok(Comparison {
        analytic,
        report,
        rel_err,
        max_rel_err,
        ci_excludes,
        adversary_rel_err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Fig8,
        Figure::Fig9,
        Figure::Fig10,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
            Figure::Fig9 => "fig9",
            Figure::Fig10 => "fig10",
        }
    }

    /// Network and curves of the preset. `λ = 1` throughout.
    pub fn layout(&self) -> (NetworkSpec, Vec<NodeSelector>) {
        use NodeSelector::*;
        let pow = |alpha| PowerLaw { alpha };
        let (kind, p, q, curves) = match self {
            Figure::Fig4 => (NetworkKind::FullyConnectedCapture, 0.5, 1.0, vec![Fixed(1), Infected]),
            Figure::Fig5 => (NetworkKind::FullyConnectedCapture, 0.0, 0.5, vec![Fixed(1), Infected]),
            Figure::Fig6 => (NetworkKind::FullyConnectedCapture, 0.5, 0.5, vec![Fixed(1), Infected]),
            Figure::Fig7 => (
                NetworkKind::FullyConnectedMitm,
                1.0,
                1.0,
                vec![Fixed(1), Infected, Adversary],
            ),
            Figure::Fig8 => (
                NetworkKind::UnidirectionalRingCapture,
                0.5,
                1.0,
                vec![Infected, pow(0.3), Transition { alpha: 0.25 }, pow(0.8)],
            ),
            Figure::Fig9 => (
                NetworkKind::UnidirectionalRingCapture,
                0.0,
                0.5,
                vec![pow(0.3), pow(0.4), pow(0.8)],
            ),
            Figure::Fig10 => (
                NetworkKind::UnidirectionalRingCapture,
                0.5,
                0.5,
                vec![Infected, pow(0.3), pow(0.8)],
            ),
        };
        let spec = NetworkSpec {
            kind,
            honest: false,
            n: 2,
            lambda: 1.0,
            policy: AdversaryPolicy::new(p, q),
        };
        (spec, curves)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL.into_iter().find(|f| f.as_str() == s).ok_or_else(|| {
            Error::InvalidConfig(Violations(vec![format!("unknown figure {s:?}: expected fig4..fig10")]))
        })
    }
}

pub const FIGURE_N_MIN: usize = 10;
pub const FIGURE_N_MAX: usize = 10_000;
/// Largest `n` that gets simulation columns in a preset.
pub const FIGURE_SIM_MAX_N: usize = 64;

/// Sizes used by the presets: 10 to 10⁴, eight points per decade.
pub fn figure_grid() -> Vec<usize> {
    geometric_grid(FIGURE_N_MIN, FIGURE_N_MAX, 10f64.powf(0.125)).expect("static grid")
}

/// Runs a preset. Rows carry a `series` name; exponent fits use the top half
/// of each series' log-n range. Simulation columns, if requested, are filled
/// only for `n ≤ FIGURE_SIM_MAX_N`.
pub fn figure_preset(figure: Figure, sim: Option<&SimParams>) -> Result<SweepResult> {
    let (spec, curves) = figure.layout();
    let grid = figure_grid();
    let small: Vec<usize> = grid.iter().copied().filter(|&n| n <= FIGURE_SIM_MAX_N).collect();
    let mut out = SweepResult::default();
    for sel in curves {
        let name = sel.to_string();
        let mut part = sweep(&spec, &grid, sel, None)?;
        if let Some(params) = sim {
            let simmed = sweep(&spec, &small, sel, Some(params))?;
            for row in &mut part.rows {
                if let Some(s) = simmed.rows.iter().find(|s| s.n == row.n) {
                    row.sim_mean = s.sim_mean;
                    row.sim_ci95 = s.sim_ci95;
                }
            }
        }
        let points: Vec<(f64, f64)> = part.rows.iter().map(|r| (r.n as f64, r.analytic)).collect();
        if let Some(&(hi, _)) = points.last() {
            let lo = points[0].0;
            let cut = (lo * hi).sqrt();
            let top: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 >= cut).collect();
            if let Ok(fit) = scaling_exponent(&top) {
                out.fits.push((name.clone(), fit));
            }
        }
        for mut row in part.rows {
            row.series = Some(name.clone());
            out.rows.push(row);
        }
        out.skipped.extend(part.skipped);
    }
    Ok(out)
}

//! The full verification suite, in a fixed canonical order.
//!
//! One call runs every proof check at the configured order cap and grid
//! sizes and returns a [`SuiteReport`] whose serialization is
//! byte-identical across runs with the same configuration (seed
//! included): deterministic grids, ordered reports, sorted witnesses.

use crate::binomial_ic;
use crate::convexity;
use crate::entropy;
use crate::error::Result;
use crate::grid::{
    default_induction_grid, default_t_grid, half_open_grid, interior_grid, unit_grid,
    DEFAULT_MAX_DENOMINATOR,
};
use crate::legendre;
use crate::report::{ReportBuilder, SamplerInfo, SuiteReport};

/// Default seed for the random-rational grids.
pub const DEFAULT_SEED: u64 = 2014;

/// Default starting precision (bits) for interval-certified comparisons.
pub const DEFAULT_PRECISION: u32 = 128;

/// Fast-CI order cap; `deep` runs raise it to 100.
pub const DEFAULT_N_MAX: u32 = 30;

/// Order cap for deep verification runs.
pub const DEEP_N_MAX: u32 = 100;

/// Parameters of a verification run.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Orders `1..=n_max` are checked.
    pub n_max: u32,
    /// Seed for every random-rational grid in the run.
    pub seed: u64,
    /// Starting precision for interval comparisons (escalates on demand).
    pub precision: u32,
    /// Denominator cap for random rational points.
    pub max_denominator: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_max: DEFAULT_N_MAX,
            seed: DEFAULT_SEED,
            precision: DEFAULT_PRECISION,
            max_denominator: DEFAULT_MAX_DENOMINATOR,
        }
    }
}

/// Run the whole suite: symmetry, Heun residual, ratio bound, induction
/// step, log-derivative identity, root sandwich, quadratic-form sign,
/// log-convexity gap, and the two entropy corollaries, in that order.
pub fn run_check_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let unit_grid = unit_grid(cfg.seed, cfg.max_denominator);
    let half_grid = half_open_grid(cfg.seed, cfg.max_denominator);
    let interior_grid = interior_grid(cfg.seed, cfg.max_denominator);
    let t_grid = default_t_grid();
    let induction_grid = default_induction_grid();

    let mut checks = Vec::with_capacity(10);

    // Coefficient-level symmetry for every order.
    let mut builder = ReportBuilder::new(
        "symmetry",
        SamplerInfo::deterministic(format!(
            "coefficients of F_n(1-x) - F_n(x), n = 1..={}",
            cfg.n_max
        )),
    );
    for n in 1..=cfg.n_max {
        binomial_ic::symmetry_outcomes(n, &mut builder)?;
    }
    checks.push(builder.finish());

    checks.push(check_heun(cfg.n_max, &unit_grid)?);
    checks.push(legendre::check_ratio_bound(cfg.n_max, &t_grid, cfg.precision)?);

    // Induction step, merged across orders.
    let mut builder = ReportBuilder::new("bound_induction_step", induction_grid.sampler_info());
    let induction_points = induction_grid.points();
    for n in 1..=cfg.n_max {
        legendre::induction_outcomes(n, &induction_points, cfg.precision, &mut builder)?;
    }
    checks.push(builder.finish());

    checks.push(legendre::check_log_derivative(cfg.n_max, &half_grid)?);
    checks.push(convexity::check_sandwich(cfg.n_max, &half_grid, cfg.precision)?);
    checks.push(convexity::check_sandwich_form(cfg.n_max, &half_grid)?);
    checks.push(convexity::check_logconvexity(cfg.n_max, &unit_grid)?);
    checks.push(entropy::check_renyi_concavity(cfg.n_max, &unit_grid)?);
    checks.push(entropy::check_tsallis_logconcavity(cfg.n_max, &interior_grid)?);

    Ok(SuiteReport {
        suite: format!("log-convexity verification, n_max={}", cfg.n_max),
        seed: cfg.seed,
        precision: cfg.precision,
        checks,
    })
}

/// Heun residual sweep as its own named check.
fn check_heun(n_max: u32, grid: &crate::grid::GridSpec) -> Result<crate::CheckReport> {
    use crate::rational::rat_int;
    use crate::report::{PointOutcome, Slack};
    use num_traits::{Signed, Zero};
    use rayon::prelude::*;

    let mut builder = ReportBuilder::new("heun_residual", grid.sampler_info());
    let points = grid.points();
    let rows: Vec<Vec<PointOutcome>> = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<PointOutcome>> {
            let ic = binomial_ic::IcPolynomial::new(n)?;
            let mut out = Vec::with_capacity(points.len());
            for x in &points {
                let residual = ic.heun_residual(x)?;
                out.push(if residual.is_zero() {
                    PointOutcome::pass(n, x, Slack::Exact(rat_int(0)))
                } else {
                    PointOutcome::fail(
                        n,
                        x,
                        residual.to_string(),
                        "0",
                        "heun residual",
                        Some(Slack::Exact(-residual.abs())),
                    )
                });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    for row in rows {
        builder.record_all(row);
    }
    Ok(builder.finish())
}

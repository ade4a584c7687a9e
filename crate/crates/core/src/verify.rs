//! Numerical verification of the eigenvalue bounds on concrete surfaces.
//!
//! Every check rescales the surface to curvature bound one, evaluates the
//! chain of comparison eigenvalues, and reports each inequality with its
//! slack. Reported eigenvalues are in the caller's units.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::format::{sig12, Table};
use crate::model_weights::{eps_max, eps_roots, star, star_eps};
use crate::profile::{EndKind, Model, Profile};
use crate::sl::{eigenvalue, kappa1, Bc, SlProblem};
use crate::surface::{analyze, annulus_modulus, green_weight, isoperimetric_check, separated_mu1, PoleSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Slacks below this count as equality.
    pub equality_threshold: f64,
    /// Inequalities hold when `slack >= -slack_tolerance`.
    pub slack_tolerance: f64,
    /// Margin required by strict inequalities.
    pub strict_margin: f64,
    /// Number of plateau levels in the comparison ladder.
    pub eps_ladder: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            equality_threshold: 1e-6,
            slack_tolerance: 1e-8,
            strict_margin: 1e-9,
            eps_ladder: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inequality {
    /// Reads as `left <= right` (or `<` when strict).
    pub name: String,
    pub left: f64,
    pub right: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub strict: bool,
    /// Part of the comparison chain (as opposed to an auxiliary check);
    /// equality is judged on chain links only.
    pub chain: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Precondition {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub inputs: BTreeMap<String, String>,
    pub quantities: Vec<Quantity>,
    pub inequalities: Vec<Inequality>,
    pub preconditions: Vec<Precondition>,
    pub flags: Vec<String>,
    pub pass: bool,
}

impl TheoremReport {
    fn new(theorem: &str) -> TheoremReport {
        TheoremReport {
            theorem: theorem.to_string(),
            inputs: BTreeMap::new(),
            quantities: Vec::new(),
            inequalities: Vec::new(),
            preconditions: Vec::new(),
            flags: Vec::new(),
            pass: false,
        }
    }

    fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    fn quantity(&mut self, name: &str, value: f64) {
        self.quantities.push(Quantity {
            name: name.to_string(),
            value,
        });
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|q| q.name == name).map(|q| q.value)
    }

    pub fn inequality(&self, name: &str) -> Option<&Inequality> {
        self.inequalities.iter().find(|q| q.name == name)
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    fn require(&mut self, name: &str, holds: bool, detail: String) {
        self.preconditions.push(Precondition {
            name: name.to_string(),
            holds,
            detail,
        });
    }

    fn le(&mut self, cfg: &VerifyConfig, name: &str, left: f64, right: f64) {
        self.push_le(cfg, name, left, right, true);
    }

    fn check_le(&mut self, cfg: &VerifyConfig, name: &str, left: f64, right: f64) {
        self.push_le(cfg, name, left, right, false);
    }

    fn push_le(&mut self, cfg: &VerifyConfig, name: &str, left: f64, right: f64, chain: bool) {
        let slack = right - left;
        self.inequalities.push(Inequality {
            name: name.to_string(),
            left,
            right,
            slack,
            tolerance: cfg.slack_tolerance,
            strict: false,
            chain,
            holds: slack >= -cfg.slack_tolerance,
        });
    }

    fn lt(&mut self, cfg: &VerifyConfig, name: &str, left: f64, right: f64) {
        let slack = right - left;
        self.inequalities.push(Inequality {
            name: name.to_string(),
            left,
            right,
            slack,
            tolerance: cfg.strict_margin,
            strict: true,
            chain: false,
            holds: slack >= cfg.strict_margin,
        });
    }

    fn finish(mut self, cfg: &VerifyConfig) -> TheoremReport {
        let chain_ok = self.inequalities.iter().all(|i| i.holds);
        let pre_ok = self.preconditions.iter().all(|p| p.holds);
        let mut links = self.inequalities.iter().filter(|i| i.chain).peekable();
        if links.peek().is_some() && links.all(|i| i.slack.abs() < cfg.equality_threshold) {
            self.flags.push("equality".into());
        }
        self.pass = chain_ok && pre_ok;
        self
    }

    fn failed(mut self, err: Error) -> TheoremReport {
        self.flags.push(format!("error: {err}"));
        self.pass = false;
        self
    }
}

fn nu_nu1(flux: Flux) -> f64 {
    let nu = flux.nu();
    nu * (nu + 1.0)
}

fn describe(profile: &Profile) -> String {
    profile.model().to_string()
}

fn curvature_ok(report: &mut TheoremReport, profile: &Profile, k: f64) -> Result<f64> {
    let s = analyze(profile)?;
    report.require(
        "curvature bound",
        s.curvature_max <= k * (1.0 + 1e-9) + 1e-12,
        format!("sup K = {} against bound {}", sig12(s.curvature_max), sig12(k)),
    );
    Ok(s.area)
}

fn check_bound(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("curvature bound must be positive, got {k}")))
    }
}

/// Plateau ladder below `min(eps_max, 2 pi^2)`: `eps_top / 4^j`.
fn eps_ladder(top: f64, len: usize) -> Vec<f64> {
    (0..len).map(|j| top / 4f64.powi(j as i32)).collect()
}

/// Disk with one pole: `mu1 <= kappa1(G) <= kappa1(G*)`.
pub fn verify_boundary_isoperimetric(profile: &Profile, flux: Flux, k: f64, cfg: &VerifyConfig) -> TheoremReport {
    let mut report = TheoremReport::new("thm2.1");
    report.input("surface", describe(profile));
    report.input("flux", flux);
    report.input("curvature_bound", sig12(k));
    match boundary_isoperimetric(&mut report, profile, flux, k, cfg) {
        Ok(()) => report.finish(cfg),
        Err(e) => report.failed(e),
    }
}

fn boundary_isoperimetric(report: &mut TheoremReport, profile: &Profile, flux: Flux, k: f64, cfg: &VerifyConfig) -> Result<()> {
    check_bound(k)?;
    report.require(
        "one pole and a boundary circle",
        profile.ends() == [EndKind::Pole, EndKind::Boundary],
        format!("ends {:?}", profile.ends()),
    );
    curvature_ok(report, profile, k)?;
    let unit = profile.scaled(k.sqrt())?;
    let m = unit.area()?;
    report.require("area at most 4 pi", m <= 4.0 * PI * (1.0 + 1e-12), format!("rescaled area {}", sig12(m)));
    if !report.preconditions.iter().all(|p| p.holds) {
        return Ok(());
    }
    let weight = green_weight(&unit, PoleSpec::One)?;
    let iso = isoperimetric_check(&weight, 1.0)?;
    let mu1 = separated_mu1(&unit, flux)?.mu1;
    let kap = kappa1(&weight, flux)?;
    let kstar = kappa1(&star(m.min(4.0 * PI))?, flux)?;
    report.quantity("area", m / k);
    report.quantity("weight_min_slack", iso.min_slack);
    report.quantity("weight_max_slack", iso.max_slack);
    report.quantity("mu1", k * mu1);
    report.quantity("kappa1", k * kap);
    report.quantity("kappa1_star", k * kstar);
    report.le(cfg, "mu1 <= kappa1", k * mu1, k * kap);
    report.le(cfg, "kappa1 <= kappa1_star", k * kap, k * kstar);
    if matches!(profile.model(), Model::Cap { curvature, .. } if (*curvature - k).abs() <= 1e-12 * k) {
        report.flags.push("round cap".into());
    }
    Ok(())
}

/// Closed surface with two poles: `mu1 <= K nu (nu + 1)` through the
/// plateau comparison chain.
pub fn verify_closed_bound(profile: &Profile, flux: Flux, k: f64, cfg: &VerifyConfig) -> TheoremReport {
    let mut report = TheoremReport::new("thm2.3");
    report.input("surface", describe(profile));
    report.input("flux", flux);
    report.input("curvature_bound", sig12(k));
    match plateau_chain(&mut report, profile, flux, k, cfg, true) {
        Ok(()) => report.finish(cfg),
        Err(e) => report.failed(e),
    }
}

/// Surface with one pole and boundary of area beyond `4 pi / K`.
pub fn verify_boundary_large_area(profile: &Profile, flux: Flux, k: f64, cfg: &VerifyConfig) -> TheoremReport {
    let mut report = TheoremReport::new("thm2.4");
    report.input("surface", describe(profile));
    report.input("flux", flux);
    report.input("curvature_bound", sig12(k));
    match plateau_chain(&mut report, profile, flux, k, cfg, false) {
        Ok(()) => report.finish(cfg),
        Err(e) => report.failed(e),
    }
}

fn plateau_chain(report: &mut TheoremReport, profile: &Profile, flux: Flux, k: f64, cfg: &VerifyConfig, closed: bool) -> Result<()> {
    check_bound(k)?;
    let wanted = if closed { [EndKind::Pole, EndKind::Pole] } else { [EndKind::Pole, EndKind::Boundary] };
    report.require(
        if closed { "closed with two poles" } else { "one pole and a boundary circle" },
        profile.ends() == wanted,
        format!("ends {:?}", profile.ends()),
    );
    curvature_ok(report, profile, k)?;
    let unit = profile.scaled(k.sqrt())?;
    let m = unit.area()?;
    let sphere_like = closed && (m - 4.0 * PI).abs() <= 1e-9 * 4.0 * PI;
    if !closed {
        report.require("area beyond 4 pi", m > 4.0 * PI, format!("rescaled area {}", sig12(m)));
    }
    if !report.preconditions.iter().all(|p| p.holds) {
        return Ok(());
    }
    let bound = nu_nu1(flux);
    let weight = green_weight(&unit, if closed { PoleSpec::Two } else { PoleSpec::One })?;
    let mu1 = separated_mu1(&unit, flux)?.mu1;
    let w1 = kappa1(&weight, flux)?;
    report.quantity("area", m / k);
    report.quantity("mu1", k * mu1);
    report.quantity("w1", k * w1);
    report.quantity("bound", k * bound);
    report.le(cfg, "mu1 <= w1", k * mu1, k * w1);
    if sphere_like {
        let wstar = kappa1(&star(4.0 * PI)?, flux)?;
        report.quantity("w1_star", k * wstar);
        report.le(cfg, "w1 <= w1_star", k * w1, k * wstar);
        report.le(cfg, "w1_star <= bound", k * wstar, k * bound);
    } else if m > 4.0 * PI {
        let found = eps_max(&weight)?;
        report.quantity("eps_max", found.eps);
        if found.eps <= 0.0 {
            report.require("weight dominates a plateau comparison", false, found.diagnostic.unwrap_or_default());
            return Ok(());
        }
        let ladder = eps_ladder(found.eps.min(2.0 * PI * PI), cfg.eps_ladder);
        let levels: Vec<Result<(f64, f64, f64)>> = ladder
            .par_iter()
            .map(|&eps| {
                let w = kappa1(&star_eps(m, eps, closed)?, flux)?;
                let (a_eps, _) = eps_roots(eps)?;
                let disk = star(4.0 * PI)?.restricted(a_eps)?;
                let lam = eigenvalue(&SlProblem::new(disk, flux, Bc::SingularNeumann, Bc::Dirichlet)?, 0)?;
                Ok((eps, w, lam))
            })
            .collect();
        let levels = levels.into_iter().collect::<Result<Vec<_>>>()?;
        let strict = !flux.is_integer();
        for (j, (eps, w, lam)) in levels.iter().enumerate() {
            report.quantity(&format!("eps_{j}"), *eps);
            report.quantity(&format!("w1_eps_{j}"), k * w);
            report.quantity(&format!("lambda1_disk_{j}"), k * lam);
            if j == 0 {
                report.le(cfg, "w1 <= w1_eps_0", k * w1, k * w);
            } else {
                let prev = k * levels[j - 1].1;
                let name = format!("w1_eps_{} < w1_eps_{j}", j - 1);
                if strict {
                    report.lt(cfg, &name, prev, k * w);
                } else {
                    report.check_le(cfg, &name, prev, k * w);
                }
            }
            report.le(cfg, &format!("w1_eps_{j} <= lambda1_disk_{j}"), k * w, k * lam);
        }
        let last = levels.last().expect("non-empty ladder").1;
        report.le(cfg, "w1_eps_last <= bound", k * last, k * bound);
    }
    report.le(cfg, "mu1 <= bound", k * mu1, k * bound);
    if let Model::Cigar { .. } = profile.model() {
        let nu = flux.nu();
        report.quantity("lower_bound", k * nu * nu);
        report.check_le(cfg, "lower_bound <= mu1", k * nu * nu, k * mu1);
    }
    Ok(())
}

/// Normalized first eigenvalue of cigars `|S_L| mu1` against `2 pi nu^2 (L + 2)`.
pub fn verify_no_hersch(lengths: &[f64], flux: Flux, cfg: &VerifyConfig) -> TheoremReport {
    let mut report = TheoremReport::new("no-hersch");
    report.input("flux", flux);
    report.input("lengths", lengths.iter().map(|l| sig12(*l)).collect::<Vec<_>>().join(","));
    match no_hersch(&mut report, lengths, flux, cfg) {
        Ok(()) => report.finish(cfg),
        Err(e) => report.failed(e),
    }
}

fn no_hersch(report: &mut TheoremReport, lengths: &[f64], flux: Flux, cfg: &VerifyConfig) -> Result<()> {
    let nu = flux.nu();
    report.require("flux not an integer", nu > 0.0, format!("reduced flux {}", sig12(nu)));
    if nu == 0.0 {
        return Ok(());
    }
    let mut ls: Vec<f64> = lengths.to_vec();
    ls.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rows: Vec<Result<(f64, f64, f64)>> = ls
        .par_iter()
        .map(|&l| {
            let p = Profile::cigar(l)?;
            let area = p.area()?;
            Ok((l, area, separated_mu1(&p, flux)?.mu1))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut prev: Option<(f64, f64)> = None;
    for (l, area, mu1) in rows {
        let tag = sig12(l);
        let normalized = area * mu1;
        let lower = 2.0 * PI * nu * nu * (l + 2.0);
        report.quantity(&format!("area[L={tag}]"), area);
        report.quantity(&format!("mu1[L={tag}]"), mu1);
        report.quantity(&format!("normalized[L={tag}]"), normalized);
        report.quantity(&format!("lower_bound[L={tag}]"), lower);
        report.le(cfg, &format!("lower_bound <= normalized [L={tag}]"), lower, normalized);
        if let Some((pl, pv)) = prev {
            report.lt(cfg, &format!("normalized[L={}] < normalized[L={tag}]", sig12(pl)), pv, normalized);
        }
        prev = Some((l, normalized));
    }
    Ok(())
}

/// Annulus bound `|C| mu1 <= 4 pi M min_n |nu - n|^2` and, optionally, the
/// small-flux limit of `|C| mu1 / nu^2` along `nu = 1/8, ..., 1/64`.
pub fn verify_annulus(profile: &Profile, flux: Flux, ladder: bool, cfg: &VerifyConfig) -> TheoremReport {
    let mut report = TheoremReport::new("thm2.5");
    report.input("surface", describe(profile));
    report.input("flux", flux);
    report.input("ladder", ladder);
    match annulus(&mut report, profile, flux, ladder, cfg) {
        Ok(()) => report.finish(cfg),
        Err(e) => report.failed(e),
    }
}

/// Flux ladder used for the small-flux limit.
pub const ANNULUS_LADDER: [i64; 4] = [8, 16, 32, 64];

fn annulus(report: &mut TheoremReport, profile: &Profile, flux: Flux, ladder: bool, cfg: &VerifyConfig) -> Result<()> {
    report.require(
        "two boundary circles",
        profile.ends() == [EndKind::Boundary, EndKind::Boundary],
        format!("ends {:?}", profile.ends()),
    );
    if !report.preconditions.iter().all(|p| p.holds) {
        return Ok(());
    }
    let area = profile.area()?;
    let modulus = annulus_modulus(profile)?;
    let nu = flux.nu();
    let mu1 = separated_mu1(profile, flux)?.mu1;
    report.quantity("area", area);
    report.quantity("modulus", modulus);
    report.quantity("mu1", mu1);
    report.quantity("normalized", area * mu1);
    report.quantity("bound", 4.0 * PI * modulus * nu * nu);
    report.le(cfg, "area * mu1 <= 4 pi M nu^2", area * mu1, 4.0 * PI * modulus * nu * nu);
    if ladder {
        let target = 4.0 * PI * modulus;
        let ratios: Vec<Result<(i64, f64)>> = ANNULUS_LADDER
            .par_iter()
            .map(|&q| {
                let f = Flux::rational(1, q)?;
                let mu = separated_mu1(profile, f)?.mu1;
                Ok((q, area * mu * (q * q) as f64))
            })
            .collect();
        let ratios = ratios.into_iter().collect::<Result<Vec<_>>>()?;
        for (q, r) in &ratios {
            report.quantity(&format!("ratio[nu=1/{q}]"), *r);
        }
        let n = ratios.len();
        let extrapolated = (4.0 * ratios[n - 1].1 - ratios[n - 2].1) / 3.0;
        report.quantity("ratio_extrapolated", extrapolated);
        report.quantity("ratio_limit", target);
        let rel = (ratios[n - 1].1 - target).abs() / target;
        report.quantity("ratio_relative_error", rel);
        report.check_le(cfg, "ratio relative error at nu=1/64 <= 0.05", rel, 0.05);
    }
    Ok(())
}

/// One sweep row: the flux and the report (or the error that stopped it).
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub nu: f64,
    pub report: TheoremReport,
}

/// Runs `check` for every flux in `grid` (concurrently) and returns the
/// rows in input order.
pub fn flux_sweep<F>(grid: &[Flux], check: F) -> Vec<SweepRow>
where
    F: Fn(Flux) -> TheoremReport + Sync,
{
    grid.par_iter()
        .map(|f| SweepRow {
            nu: f.nu(),
            report: check(*f),
        })
        .collect()
}

/// CSV table of a sweep: `nu`, `pass`, then every quantity by first appearance.
pub fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut names: Vec<String> = Vec::new();
    for r in rows {
        for q in &r.report.quantities {
            if !names.contains(&q.name) {
                names.push(q.name.clone());
            }
        }
    }
    let mut columns = vec!["nu".to_string(), "pass".to_string()];
    columns.extend(names.iter().cloned());
    columns.push("flags".to_string());
    let mut table = Table::new(columns);
    for r in rows {
        let mut row = vec![sig12(r.nu), r.report.pass.to_string()];
        for n in &names {
            row.push(r.report.value(n).map(sig12).unwrap_or_default());
        }
        row.push(r.report.flags.join(";"));
        table.push(row);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_is_equality() {
        let r = verify_closed_bound(&Profile::sphere(1.0).unwrap(), Flux::rational(3, 10).unwrap(), 1.0, &VerifyConfig::default());
        assert!(r.pass, "{r:?}");
        assert!(r.has_flag("equality"));
        assert!((r.value("mu1").unwrap() - 0.39).abs() < 1e-8);
    }

    #[test]
    fn precondition_failures_are_reported() {
        let r = verify_annulus(&Profile::sphere(1.0).unwrap(), Flux::rational(1, 4).unwrap(), false, &VerifyConfig::default());
        assert!(!r.pass);
        assert!(r.preconditions.iter().any(|p| !p.holds));
    }

    #[test]
    fn empty_sweep() {
        let rows = flux_sweep(&[], |f| verify_closed_bound(&Profile::sphere(1.0).unwrap(), f, 1.0, &VerifyConfig::default()));
        assert!(rows.is_empty());
        assert_eq!(sweep_table(&rows).rows.len(), 0);
    }
}

//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion misses its tolerance or time budget.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use abspec_core::model_weights::{g_star, star};
use abspec_core::profile::Profile;
use abspec_core::sl::{eigenvalue, kappa1, riccati_profile, solve, Bc, SlProblem};
use abspec_core::spectra::{cylinder_spectrum, sphere_decomposition_check, sphere_spectrum, Symbol};
use abspec_core::verify::{
    verify_annulus, verify_boundary_isoperimetric, verify_closed_bound, verify_no_hersch, TheoremReport, VerifyConfig,
};
use abspec_core::weight::{Weight, WeightEnd};
use abspec_core::{Flux, Rational, Scalar};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Outcome of one criterion: whether it met its tolerance, and a short summary.
type Outcome = (bool, String);

fn sphere_heads() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (p, q) in [(1, 10), (3, 10), (1, 2)] {
        let nu = Rational::new(p, q);
        let spec = sphere_spectrum(Flux::from_ratio(nu), 1.0, 10).unwrap();
        let got: Vec<Rational> = spec
            .lines
            .iter()
            .flat_map(|l| match l.symbol {
                Symbol::Degree { alpha: Scalar::Exact(a) } => vec![a; l.multiplicity as usize],
                _ => vec![],
            })
            .take(10)
            .collect();
        let mut want: Vec<Rational> = (-12i64..=12)
            .flat_map(|n| (0..12i64).map(move |k| (Rational::from_integer(n) - nu).abs() + Rational::from_integer(k)))
            .collect();
        want.sort();
        want.truncate(10);
        let one = Rational::from_integer(1);
        let heads = [nu, one - nu, one + nu, one + nu];
        let mut head_sorted = heads.to_vec();
        head_sorted.sort();
        let this = got == want && got[..4] == head_sorted[..];
        let values = spec.values();
        let closed = [nu * (nu + one), (one - nu) * (one * 2 - nu), (one + nu) * (one * 2 + nu)];
        let mut closed_f: Vec<f64> = closed.iter().map(|q| *q.numer() as f64 / *q.denom() as f64).collect();
        closed_f.push(closed_f[2]);
        closed_f.sort_by(f64::total_cmp);
        let this = this && values[..4] == closed_f[..];
        ok &= this;
        notes.push(format!("nu={nu}:{}", if this { "exact" } else { "mismatch" }));
    }
    (ok, notes.join(" "))
}

fn star_closed_form() -> Outcome {
    let w = star(4.0 * PI).unwrap();
    let rows: Vec<(f64, f64)> = (1..=20)
        .into_par_iter()
        .map(|i| {
            let f = Flux::rational(i, 40).unwrap();
            let nu = f.nu();
            let sol = solve(&SlProblem::natural(w.clone(), f), 0).unwrap();
            let rel = (sol.kappa - nu * (nu + 1.0)).abs() / (nu * (nu + 1.0));
            let peak = (4.0 * PI * PI).powf(nu / 2.0);
            let sup = sol
                .samples
                .iter()
                .map(|(a, y)| (y - g_star(*a).powf(nu / 2.0) / peak).abs())
                .fold(0.0, f64::max);
            (rel, sup)
        })
        .collect();
    let rel = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let sup = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    (rel < 1e-6 && sup < 1e-5, format!("max rel err {rel:.2e} (tol 1e-6), eigenfunction sup err {sup:.2e} (tol 1e-5)"))
}

fn hemisphere_decomposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failed = 0;
    let mut approx = 0;
    for _ in 0..50 {
        let q = rng.gen_range(2..200i64);
        let p = rng.gen_range(1..=q / 2);
        let r = sphere_decomposition_check(Flux::rational(p, q).unwrap(), 100);
        failed += usize::from(!r.pass);
        approx += usize::from(r.approximate);
    }
    (failed == 0 && approx == 0, format!("50 fluxes x 100 lines, {failed} mismatched, {approx} inexact"))
}

fn cylinder_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut exact = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let m = rng.gen_range(0.1..5.0);
        let f = Flux::rational(rng.gen_range(-40..40), rng.gen_range(1..40)).unwrap();
        let spec = cylinder_spectrum(f, m, 25).unwrap();
        exact += usize::from(spec.lines[0].value == f.nu() * f.nu());
        let nu = f.raw().to_f64();
        let mut brute = Vec::new();
        for n in -60i64..=60 {
            for k in 0..200u64 {
                brute.push((n as f64 - nu).powi(2) + (k as f64 * PI / (2.0 * m)).powi(2));
            }
        }
        brute.sort_by(f64::total_cmp);
        for (g, w) in spec.values().iter().zip(&brute) {
            worst = worst.max((g - w).abs() / w.max(1.0));
        }
    }
    (exact == 20 && worst < 1e-12, format!("{exact}/20 exact mu1 = nu^2, head max rel dev {worst:.1e} (tol 1e-12)"))
}

fn dirichlet_convergence() -> Outcome {
    let f = Flux::parse("1/2").unwrap();
    let target = 0.75;
    let gaps: Vec<f64> = (1..=5)
        .map(|k| {
            let a = 4.0 * PI - 10f64.powi(-k);
            let p = SlProblem::new(star(a).unwrap(), f, Bc::SingularNeumann, Bc::Dirichlet).unwrap();
            eigenvalue(&p, 0).unwrap() - target
        })
        .collect();
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]) && gaps.iter().all(|g| *g > 0.0);
    let last = gaps[4];
    (
        monotone && last < 1e-3,
        format!(
            "nu=1/2 gaps {} monotone={monotone}, final gap {last:.4e} (tol 1e-3)",
            gaps.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>().join(",")
        ),
    )
}

fn perturbed(c: f64, j: f64) -> Weight {
    let m = 4.0 * PI;
    Weight::new(
        "perturbed",
        m,
        WeightEnd::Pole,
        WeightEnd::Pole,
        Arc::new(move |a| g_star(a) * (1.0 + c * (j * PI * a / m).sin().powi(2))),
        vec![],
    )
    .unwrap()
}

fn monotonicity_suite() -> Outcome {
    let m = 4.0 * PI;
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let cases: Vec<_> = (0..100)
        .map(|i| {
            let c = rng.gen_range(-0.4..1.0);
            let j = rng.gen_range(1..=4) as f64;
            let amp = if i % 5 == 0 { rng.gen_range(0.0..1e-4) } else { rng.gen_range(0.01..1.0) };
            (c, j, amp, Flux::rational(rng.gen_range(1..=50), 100).unwrap())
        })
        .collect();
    let results: Vec<(bool, bool, bool)> = cases
        .par_iter()
        .map(|&(c, j, amp, f)| {
            let g1 = perturbed(c, j);
            let base = g1.function();
            let g2 = Weight::new(
                "bumped",
                m,
                WeightEnd::Pole,
                WeightEnd::Pole,
                Arc::new(move |a| base(a) * (1.0 + amp * (PI * a / m).sin().powi(2))),
                vec![],
            )
            .unwrap();
            let k1 = kappa1(&g1, f).unwrap();
            let k2 = kappa1(&g2, f).unwrap();
            // the bump is at least amp / 2 on [M/4, 3M/4]
            let strict_needed = amp / 2.0 >= 1e-3;
            let bound = 2.0 * PI * f.nu();
            let riccati = [&g1, &g2].iter().all(|w| {
                let sol = solve(&SlProblem::natural((*w).clone(), f), 0).unwrap();
                riccati_profile(&sol, w).unwrap().iter().all(|p| p.r.abs() < bound)
            });
            (k2 <= k1 + 1e-9, !strict_needed || k1 - k2 >= 1e-8, riccati)
        })
        .collect();
    let weak = results.iter().filter(|r| r.0).count();
    let strict = results.iter().filter(|r| r.1).count();
    let ric = results.iter().filter(|r| r.2).count();
    (
        weak == 100 && strict == 100 && ric == 100,
        format!("weak {weak}/100 (tol 1e-9), strict {strict}/100 (margin 1e-8), Riccati |R| < 2 pi nu {ric}/100"),
    )
}

fn slack(r: &TheoremReport, name: &str) -> f64 {
    r.inequality(name).map(|i| i.slack).unwrap_or(f64::NAN)
}

fn theorem_chains() -> Outcome {
    let cfg = VerifyConfig::default();
    let f3 = Flux::parse("3/10").unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    let round = verify_boundary_isoperimetric(&Profile::from_spec("cap:1.2,1").unwrap(), f3, 1.0, &cfg);
    let max_slack = round.inequalities.iter().map(|i| i.slack.abs()).fold(0.0, f64::max);
    let this = round.pass && round.has_flag("equality") && max_slack < 1e-6;
    ok &= this;
    notes.push(format!("round cap equality={this} (max slack {max_slack:.1e})"));
    for spec in ["cap:2,0.5", "spheroid-cap:1.2,1,pi/2", "spheroid-cap:1.2,1.44,pi/2"] {
        let r = verify_boundary_isoperimetric(&Profile::from_spec(spec).unwrap(), f3, 1.0, &cfg);
        let s = slack(&r, "kappa1 <= kappa1_star");
        let this = r.pass && !r.has_flag("equality") && s > 1e-6;
        ok &= this;
        notes.push(format!("{spec} strict={this} ({s:.2e})"));
    }
    let sphere = verify_closed_bound(&Profile::sphere(1.0).unwrap(), f3, 1.0, &cfg);
    let mu1 = sphere.value("mu1").unwrap_or(f64::NAN);
    let this = sphere.pass && sphere.has_flag("equality") && (mu1 - 0.39).abs() < 1e-6;
    ok &= this;
    notes.push(format!("sphere mu1={mu1:.9} equality={this}"));
    for l in [1.0, 2.0] {
        let r = verify_closed_bound(&Profile::cigar(l).unwrap(), f3, 1.0, &cfg);
        let s = slack(&r, "mu1 <= bound");
        let this = r.pass && s > 1e-6;
        ok &= this;
        notes.push(format!("cigar {l} strict={this} ({s:.2e})"));
    }
    (ok, notes.join(", "))
}

fn no_hersch() -> Outcome {
    let cfg = VerifyConfig::default();
    let r = verify_no_hersch(&[1.0, 2.0, 4.0, 8.0], Flux::parse("1/2").unwrap(), &cfg);
    let vals: Vec<f64> = ["1", "2", "4", "8"].iter().map(|t| r.value(&format!("normalized[L={t}]")).unwrap_or(f64::NAN)).collect();
    let above = [1.0, 2.0, 4.0, 8.0].iter().zip(&vals).all(|(l, v)| *v > 2.0 * PI * 0.25 * (l + 2.0));
    let growing = vals.windows(2).all(|w| w[1] > w[0]);
    (
        r.pass && above && growing,
        format!("normalized {} above={above} increasing={growing}", vals.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(",")),
    )
}

fn annulus() -> Outcome {
    let cfg = VerifyConfig::default();
    let flat = verify_annulus(&Profile::from_spec("cylinder:1").unwrap(), Flux::parse("1/4").unwrap(), false, &cfg);
    let bound = flat.value("bound").unwrap_or(f64::NAN);
    let dev = slack(&flat, "area * mu1 <= 4 pi M nu^2").abs() / bound;
    let bump = verify_annulus(&Profile::from_spec("bump:1").unwrap(), Flux::parse("1/4").unwrap(), true, &cfg);
    let rel = bump.value("ratio_relative_error").unwrap_or(f64::NAN);
    (
        flat.pass && flat.has_flag("equality") && dev < 1e-9 && bump.pass && rel < 0.05,
        format!("flat cylinder rel dev {dev:.1e} (tol 1e-9), bump ratio error at nu=1/64 {rel:.2e} (tol 5e-2)"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("sphere spectrum heads", sphere_heads, 1),
        ("star closed form", star_closed_form, 10),
        ("hemisphere decomposition", hemisphere_decomposition, 5),
        ("cylinder spectrum", cylinder_oracle, 1),
        ("dirichlet cap convergence", dirichlet_convergence, 30),
        ("weight monotonicity", monotonicity_suite, 120),
        ("comparison chains", theorem_chains, 120),
        ("unbounded normalized eigenvalue", no_hersch, 60),
        ("annulus sharpness", annulus, 60),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let (ok, detail) = outcome.unwrap_or_else(|_| (false, "panicked".into()));
        let in_time = elapsed <= Duration::from_secs(*budget);
        let pass = ok && in_time;
        failures += usize::from(!pass);
        println!(
            "criterion {} {:<32} {} {:>9.3}s (budget {}s{}) {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget,
            if in_time { "" } else { ", over" },
            detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

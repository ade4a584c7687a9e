use abspec_core::profile::{EndKind, Profile};
use abspec_core::sl::Bc;
use abspec_core::spectra::sphere_spectrum;
use abspec_core::surface::{
    analyze, annulus_modulus, green_weight, isoperimetric_check, natural_bc, radial_mode_eigenvalue, separated_mu1,
    PoleSpec,
};
use abspec_core::Flux;
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn sphere_report_and_weight() {
    let p = Profile::sphere(1.0).unwrap();
    let r = analyze(&p).unwrap();
    assert!(rel(r.area, 4.0 * PI) < 1e-12);
    assert!((r.curvature_max - 1.0).abs() < 1e-9 && (r.curvature_min - 1.0).abs() < 1e-9);
    assert!(r.boundary_length.is_none());
    let w = green_weight(&p, PoleSpec::Two).unwrap();
    for i in 1..400 {
        let a = 4.0 * PI * i as f64 / 400.0;
        assert!((w.eval(a) - a * (4.0 * PI - a)).abs() < 1e-10, "a={a}");
    }
}

#[test]
fn cap_weight_is_restricted_sphere_weight() {
    let r0 = 1.2f64;
    let p = Profile::cap(r0, 1.0).unwrap();
    let w = green_weight(&p, PoleSpec::One).unwrap();
    let m = 2.0 * PI * (1.0 - r0.cos());
    assert!(rel(w.total(), m) < 1e-12);
    for i in 1..=200 {
        let a = m * i as f64 / 200.0;
        assert!((w.eval(a) - a * (4.0 * PI - a)).abs() < 1e-9);
    }
    let rep = analyze(&p).unwrap();
    assert!(rel(rep.boundary_length.unwrap(), 2.0 * PI * r0.sin()) < 1e-12);
}

#[test]
fn cigar_area_and_plateau() {
    let p = Profile::from_spec("cigar:3").unwrap();
    assert!(rel(analyze(&p).unwrap().area, 10.0 * PI) < 1e-11);
    let w = green_weight(&Profile::cigar(1.0).unwrap(), PoleSpec::Two).unwrap();
    for a in [2.0 * PI + 0.1, 3.0 * PI, 4.0 * PI - 0.1] {
        assert!(rel(w.eval(a), 4.0 * PI * PI) < 1e-10);
    }
    let iso = isoperimetric_check(&w, 1.0).unwrap();
    assert!(iso.pass && iso.min_slack > -1e-9);
}

#[test]
fn flat_cylinder_curvature_and_modulus() {
    let p = Profile::flat_cylinder(1.5, 1.0).unwrap();
    let r = analyze(&p).unwrap();
    assert!(r.curvature_max.abs() < 1e-12);
    assert!(rel(annulus_modulus(&p).unwrap(), 1.5) < 1e-11);
    let t = Profile::tube(0.7, 2.0).unwrap();
    assert!(rel(annulus_modulus(&t).unwrap(), 2.0 / 1.4) < 1e-11);
    assert!(annulus_modulus(&Profile::sphere(1.0).unwrap()).is_err());
}

#[test]
fn exponential_tube_modulus() {
    let p = Profile::from_fn("exp", 1.0, [EndKind::Boundary, EndKind::Boundary], vec![], |r| {
        let e = r.exp();
        (e, e, e)
    })
    .unwrap();
    assert!(rel(annulus_modulus(&p).unwrap(), (1.0 - (-1f64).exp()) / 2.0) < 1e-11);
}

#[test]
fn pole_asymptotics() {
    for spec in ["sphere", "cigar:2", "spheroid:1.2,1.44", "spheroid:1.2,1", "capped-cigar:1", "cap:2,0.5"] {
        let p = Profile::from_spec(spec).unwrap();
        let poles = if p.is_closed() { PoleSpec::Two } else { PoleSpec::One };
        let w = green_weight(&p, poles).unwrap();
        let m = w.total();
        let d = 1e-6 * m;
        assert!((w.eval(d) / (4.0 * PI * d) - 1.0).abs() < 1e-3, "{spec} left");
        if p.is_closed() {
            assert!((w.eval(m - d) / (4.0 * PI * d) - 1.0).abs() < 1e-3, "{spec} right");
        }
    }
}

#[test]
fn symmetric_profiles_have_symmetric_weights() {
    for spec in ["sphere", "cigar:2", "spheroid:1.2,1.44", "spheroid:0.8,0.5"] {
        let p = Profile::from_spec(spec).unwrap();
        let w = green_weight(&p, PoleSpec::Two).unwrap();
        let m = w.total();
        for i in 1..100 {
            let a = m * i as f64 / 100.0;
            let scale = w.eval(a).max(1.0);
            assert!((w.eval(a) - w.eval(m - a)).abs() < 1e-10 * scale, "{spec} a={a}");
        }
    }
}

#[test]
fn separation_recovers_sphere_ground_state() {
    let p = Profile::sphere(1.0).unwrap();
    for i in 1..=20 {
        let flux = Flux::rational(i, 40).unwrap();
        let best = (-5..=5)
            .map(|n| radial_mode_eigenvalue(&p, flux, n, natural_bc(&p), 0).unwrap())
            .fold(f64::INFINITY, f64::min);
        let mu1 = sphere_spectrum(flux, 1.0, 1).unwrap().lines[0].value;
        assert!((best - mu1).abs() < 1e-8, "nu={}: {best} vs {mu1}", flux.nu());
    }
}

#[test]
fn radial_modes_match_closed_forms() {
    let s = Profile::sphere(1.0).unwrap();
    let f = Flux::parse("0.3").unwrap();
    assert!((radial_mode_eigenvalue(&s, f, 0, natural_bc(&s), 0).unwrap() - 0.39).abs() < 1e-9);
    assert!((radial_mode_eigenvalue(&s, f, 1, natural_bc(&s), 0).unwrap() - 1.19).abs() < 1e-9);
    let c = Profile::flat_cylinder(1.0, 1.0).unwrap();
    let q = Flux::parse("1/4").unwrap();
    let mu = radial_mode_eigenvalue(&c, q, 0, [Bc::RegularNeumann; 2], 0).unwrap();
    assert!((mu - 0.0625).abs() < 1e-10);
    let sep = separated_mu1(&c, q).unwrap();
    assert!((sep.mu1 - 0.0625).abs() < 1e-10);
}

#[test]
fn scaling_divides_eigenvalues() {
    let f = Flux::parse("3/10").unwrap();
    for spec in ["sphere", "cap:1.2,1", "cigar:1", "spheroid:1.2,1"] {
        let p = Profile::from_spec(spec).unwrap();
        for c in [0.5, 2.0] {
            let q = p.scaled(c).unwrap();
            assert!(rel(analyze(&q).unwrap().area, c * c * analyze(&p).unwrap().area) < 1e-8);
            for n in [0, 1] {
                let a = radial_mode_eigenvalue(&p, f, n, natural_bc(&p), 0).unwrap();
                let b = radial_mode_eigenvalue(&q, f, n, natural_bc(&q), 0).unwrap();
                assert!(rel(b * c * c, a) < 1e-8, "{spec} c={c} n={n}");
            }
        }
    }
}

#[test]
fn table_profile_matches_sphere() {
    let n = 200;
    let r: Vec<f64> = (0..=n).map(|i| PI * i as f64 / n as f64).collect();
    let mut f: Vec<f64> = r.iter().map(|r| r.sin()).collect();
    f[n] = 0.0;
    let p = Profile::table(r, f).unwrap();
    assert_eq!(p.ends(), [EndKind::Pole, EndKind::Pole]);
    assert!(rel(analyze(&p).unwrap().area, 4.0 * PI) < 1e-5);
    assert!(Profile::table(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
}

#[test]
fn malformed_specs_are_rejected() {
    for bad in ["", "sphere:-1", "cigar:x", "torus:1", "cap:4,1", "cylinder:0"] {
        assert!(Profile::from_spec(bad).is_err(), "{bad}");
    }
    assert!(green_weight(&Profile::tube(1.0, 1.0).unwrap(), PoleSpec::One).is_err());
    assert!(green_weight(&Profile::cap(1.0, 1.0).unwrap(), PoleSpec::Two).is_err());
}

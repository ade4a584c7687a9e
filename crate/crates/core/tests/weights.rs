use abspec_core::model_weights::{eps_max, eps_roots, g_star, star, star_eps};
use abspec_core::profile::Profile;
use abspec_core::sl::{eigenvalue, kappa1, Bc, SlProblem};
use abspec_core::surface::{green_weight, PoleSpec};
use abspec_core::weight::{Weight, WeightEnd};
use abspec_core::Flux;
use proptest::prelude::*;
use std::f64::consts::PI;

const FOUR_PI: f64 = 4.0 * PI;
const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

fn dirichlet_cap(a: f64, f: Flux) -> f64 {
    let p = SlProblem::new(star(a).unwrap(), f, Bc::SingularNeumann, Bc::Dirichlet).unwrap();
    eigenvalue(&p, 0).unwrap()
}

#[test]
fn star_ends_and_peak() {
    let w = star(FOUR_PI).unwrap();
    assert_eq!((w.left(), w.right()), (WeightEnd::Pole, WeightEnd::Pole));
    assert_eq!(w.eval(2.0 * PI), FOUR_PI_SQ);
    let h = star(2.0 * PI).unwrap();
    assert_eq!(h.right(), WeightEnd::Regular);
    assert_eq!(h.eval(2.0 * PI), FOUR_PI_SQ);
    assert!(star(13.0).is_err() && star(0.0).is_err());
}

#[test]
fn plateau_roots() {
    let (a, b) = eps_roots(FOUR_PI_SQ - 1.0).unwrap();
    assert!((a - (2.0 * PI + 1.0)).abs() < 1e-13);
    assert!((b - (2.0 * PI - 1.0)).abs() < 1e-13);
    let (a, b) = eps_roots(FOUR_PI_SQ * (1.0 - 1e-14)).unwrap();
    assert!((a - 2.0 * PI).abs() < 1e-5 && (b - 2.0 * PI).abs() < 1e-5);
    assert!(eps_roots(FOUR_PI_SQ).is_err());
    assert!(star_eps(20.0, FOUR_PI_SQ, true).is_err());
    assert!(star_eps(FOUR_PI, 1.0, true).is_err());
}

#[test]
fn eps_max_of_models() {
    assert!(eps_max(&star(FOUR_PI).unwrap()).is_err());
    let cigar = green_weight(&Profile::cigar(1.0).unwrap(), PoleSpec::Two).unwrap();
    let e = eps_max(&cigar).unwrap();
    assert!(e.eps >= FOUR_PI_SQ * (1.0 - 1e-6) * 0.999, "{}", e.eps);
    let prolate = green_weight(&Profile::spheroid(1.2, 1.44).unwrap(), PoleSpec::Two).unwrap();
    let e = eps_max(&prolate).unwrap();
    assert!(e.eps > 0.0, "{:?}", e.diagnostic);
    let closed = star_eps(prolate.total(), e.eps, true).unwrap();
    for i in 1..1000 {
        let a = prolate.total() * i as f64 / 1000.0;
        assert!(prolate.eval(a) >= closed.eval(a) * (1.0 - 1e-9));
    }
}

#[test]
fn plateau_ground_state_increases_as_level_drops() {
    let f = Flux::parse("3/10").unwrap();
    for closed in [true, false] {
        let mut prev = 0.0;
        for eps in [19.0, 5.0, 1.0, 0.3, 0.05] {
            let w = kappa1(&star_eps(20.0, eps, closed).unwrap(), f).unwrap();
            assert!(w > prev + 1e-9, "closed={closed} eps={eps}: {w} after {prev}");
            prev = w;
        }
    }
}

#[test]
fn dirichlet_cap_dominates_plateau() {
    for nu in ["1/10", "3/10", "1/2"] {
        let f = Flux::parse(nu).unwrap();
        for closed in [true, false] {
            for eps in [30.0, 10.0, 1.0, 0.1] {
                let (a, _) = eps_roots(eps).unwrap();
                let w1 = kappa1(&star_eps(18.0, eps, closed).unwrap(), f).unwrap();
                let lam = dirichlet_cap(a, f);
                assert!(lam >= w1 - 1e-9, "nu={nu} eps={eps}: {lam} < {w1}");
            }
        }
    }
}

#[test]
fn dirichlet_cap_converges_to_sphere() {
    for nu in ["3/10", "1/2"] {
        let f = Flux::parse(nu).unwrap();
        let target = f.nu() * (f.nu() + 1.0);
        let mut prev = f64::INFINITY;
        for k in 1..=5 {
            let (a, _) = eps_roots(10f64.powi(-k)).unwrap();
            let gap = dirichlet_cap(a, f) - target;
            assert!(gap > 0.0 && gap < prev, "nu={nu} k={k}: gap {gap} after {prev}");
            prev = gap;
        }
    }
}

#[test]
fn table_round_trip() {
    let w = star_eps(20.0, 3.0, true).unwrap();
    let text = w.to_table(4001);
    let back = Weight::from_table(&text).unwrap();
    assert_eq!(back.total(), w.total());
    assert_eq!((back.left(), back.right()), (w.left(), w.right()));
    for i in 1..200 {
        let a = 20.0 * i as f64 / 200.0;
        assert!((back.eval(a) - w.eval(a)).abs() < 1e-3 * w.eval(a).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn plateau_is_continuous(m in 12.6f64..60.0, eps in 1e-6f64..39.4, closed: bool) {
        let w = star_eps(m, eps, closed).unwrap();
        let (a, b) = eps_roots(eps).unwrap();
        let mut junctions = vec![a];
        if closed {
            junctions.push(m - b);
        }
        for x in junctions {
            let h = 1e-13 * x;
            prop_assert!((w.eval(x - h) - w.eval(x + h)).abs() < 1e-10 * eps.max(1.0));
            prop_assert!((w.eval(x) - eps).abs() < 1e-12 * eps.max(1.0) + 1e-12);
        }
    }

    #[test]
    fn lower_level_is_dominated(m in 12.6f64..60.0, e1 in 1e-4f64..39.4, t in 0.01f64..0.99, closed: bool) {
        let e2 = e1 * t;
        let (w1, w2) = (star_eps(m, e1, closed).unwrap(), star_eps(m, e2, closed).unwrap());
        let (a1, b1) = eps_roots(e1).unwrap();
        for i in 1..400 {
            let a = m * i as f64 / 400.0;
            let (g1, g2) = (w1.eval(a), w2.eval(a));
            prop_assert!(g2 <= g1 + 1e-12 * g1);
            let outside = a < a1 - 1e-9 || (closed && a > m - b1 + 1e-9);
            if outside && a < m - 2.0 * PI {
                prop_assert_eq!(g1, g2);
                prop_assert_eq!(g1, g_star(a));
            }
        }
    }
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resotunnel::oracle::{rect_regions, scatter_rect, tm_scatter, Region};
use resotunnel::validation::{
    compare_delta, compare_rect, draw_delta, draw_rect, oracle_check, Mutation, OracleCheckConfig,
};
use resotunnel::{Complex64, DeltaDoubleBarrier, DoubleBarrier, EffectiveMass, RectDoubleBarrier};

#[test]
fn thousand_draws_per_family() {
    let report = oracle_check(&OracleCheckConfig::default()).unwrap();
    assert_eq!(report.draws, 1000);
    assert!(report.max_rel_err_t < 1e-10, "{report:?}");
    assert!(report.max_rel_err_r < 1e-10, "{report:?}");
    assert!(report.max_abs_err_unitarity < 1e-8, "{report:?}");
    assert!(report.max_abs_err_absorption < 1e-8, "{report:?}");
    assert!(report.pass);
}

#[test]
fn other_seeds_and_masses() {
    for (seed, m_rel) in [(1u64, 0.067), (2, 0.3), (3, 1.0)] {
        let cfg = OracleCheckConfig {
            draws: 200,
            seed,
            mass: EffectiveMass::new(m_rel).unwrap(),
            mutation: Mutation::None,
        };
        let report = oracle_check(&cfg).unwrap();
        assert!(report.pass, "seed {seed}, m_rel {m_rel}: {report:?}");
    }
}

#[test]
fn real_potentials_conserve_flux() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let m = EffectiveMass::gaas();
    for _ in 0..300 {
        let (s, e) = draw_rect(&mut rng, m);
        let real = RectDoubleBarrier::new(s.b(), s.w(), Complex64::new(s.u0().re, 0.0), m).unwrap();
        let st = scatter_rect(&real, e).unwrap();
        assert!((st.t.norm_sqr() + st.r.norm_sqr() - 1.0).abs() < 1e-10);
        let (d, e) = draw_delta(&mut rng, m);
        let real = DeltaDoubleBarrier::new(d.w(), Complex64::new(d.v0().re, 0.0), m).unwrap();
        let sc = real.scatter(e).unwrap();
        assert!((sc.t2() + sc.r2() - 1.0).abs() < 1e-10);
        assert_eq!(sc.absorption, 0.0);
    }
}

#[test]
fn slicing_into_powers_of_two() {
    let m = EffectiveMass::gaas();
    let s = RectDoubleBarrier::new(4.0, 2.5, Complex64::new(0.6, -0.2), m).unwrap();
    let (regions, x0) = rect_regions(&s);
    let base = tm_scatter(&regions, x0, 0.3, m).unwrap();
    for k in 1..=6 {
        let parts = 1usize << k;
        let sliced: Vec<Region> = regions
            .iter()
            .flat_map(|r| match *r {
                Region::Slab { length, potential } => {
                    vec![Region::Slab { length: length / parts as f64, potential }; parts]
                }
                other => vec![other],
            })
            .collect();
        let st = tm_scatter(&sliced, x0, 0.3, m).unwrap();
        assert!((st.t - base.t).norm() < 1e-13, "2^{k} slices: {}", (st.t - base.t).norm());
    }
}

#[test]
fn reference_structures_match_oracle() {
    let m = EffectiveMass::gaas();
    let rect = RectDoubleBarrier::new(5.0, 5.0, Complex64::new(0.7, 5e-5), m).unwrap();
    let delta = DeltaDoubleBarrier::new(3.0, Complex64::new(2.3, 0.4), m).unwrap();
    for e in [0.05, 0.1193, 0.2, 0.4622, 0.9] {
        let r = compare_rect(&rect, e, Mutation::None).unwrap().unwrap();
        assert!(r.rel_t < 1e-10 && r.rel_r < 1e-10, "rect E = {e}: {r:?}");
        let d = compare_delta(&delta, e, Mutation::None).unwrap().unwrap();
        assert!(d.rel_t < 1e-10 && d.rel_r < 1e-10, "delta E = {e}: {d:?}");
        assert!(d.absorption < 1e-8 && d.unitarity < 1e-8);
    }
    // transmission phase, not just modulus
    let t = rect.transmission_amplitude(0.2).unwrap();
    let o = scatter_rect(&rect, 0.2).unwrap().t;
    assert!((t.arg() - o.arg()).abs() < 1e-10);
}

#[test]
fn mutation_is_detected() {
    let cfg = OracleCheckConfig { draws: 100, mutation: Mutation::FlipVSign, ..Default::default() };
    let report = oracle_check(&cfg).unwrap();
    assert!(!report.pass);
    assert!(report.max_rel_err_t > 1e-3);
}

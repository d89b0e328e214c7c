use twistcode::code::sweep::{self, weight_spectrum, SpectrumMode};
use twistcode::code::{self, minimality, minwords};
use twistcode::hyperplanes::{self, HyperplaneType};
use twistcode::{Error, Field, Frobenius, Mat, ProjectiveSystem};

fn sys(q: u32, n: usize, j: u32) -> ProjectiveSystem {
    ProjectiveSystem::from_params(q, n, j).unwrap()
}

#[test]
fn weight_formula_on_random_words() {
    for (q, n, trials) in [(8u32, 2usize, 10_000u32), (4, 3, 10_000)] {
        let s = sys(q, n, 1);
        let mut rng = twistcode::rng::seeded(q as u64, n as u64);
        for _ in 0..trials {
            let m = twistcode::rng::random_nonzero_matrix(&mut rng, s.field(), n + 1);
            // theta() itself fails on a flag-scan disagreement
            let t = code::theta(&s, &m).unwrap();
            assert_eq!(t.weight, code::weight_from_theta(q as u64, n as u32, t.theta));
            assert_eq!(t.theta, t.kernel_part + t.fixed_part);
        }
    }
}

#[test]
fn spectrum_properties_at_q4() {
    let s = sys(4, 2, 1);
    let table = weight_spectrum(&s, SpectrumMode::Exhaustive, 1).unwrap();
    assert_eq!(table.counts[&0], 1);
    assert_eq!(table.min_nonzero_weight(), Some(56));
    for &w in table.counts.keys().filter(|&&w| w > 0) {
        assert_eq!((84 - w) % 4, 0);
        assert!((84 - w) / 4 <= 7);
    }
}

#[test]
fn exhaustive_theta_extremes_at_q4() {
    let s = sys(4, 2, 1);
    let r = sweep::theta_sweep(&s, false, 1).unwrap();
    assert_eq!(r.max_theta, 7);
    // empirical maximum weight: theta_min = 0 is attained although gcd(21, 1) = 1
    assert_eq!(r.min_theta, 0);
    assert_eq!(code::theta(&s, &r.min_theta_witness).unwrap().weight, 84);
}

#[test]
fn theta_maxima_by_rank_at_q4() {
    let s = sys(4, 2, 1);
    let r3 = sweep::max_theta_by_rank(&s, 3, 1).unwrap();
    assert_eq!(r3.max_theta, 7);
    assert_eq!(code::theta(&s, &r3.witness).unwrap().theta, 7);
    assert_eq!(code::theta(&s, &Mat::identity(3)).unwrap().theta, 7);
    let r1 = sweep::max_theta_by_rank(&s, 1, 1).unwrap();
    assert_eq!(r1.max_theta, 6);
    let r2 = sweep::max_theta_by_rank(&s, 2, 1).unwrap();
    assert!(r2.max_theta <= 4 && r2.within_bound);
    assert!(sweep::max_theta_by_rank(&s, 4, 1).is_err());
}

#[test]
fn min_distance_modes() {
    let s = sys(4, 2, 1);
    let r = sweep::min_distance(&s, true, 1).unwrap();
    assert_eq!((r.closed_form, r.exhaustive, r.pass), (56, Some(56), true));
    assert_eq!(sweep::min_distance(&sys(8, 2, 1), false, 1).unwrap().closed_form, 504);
    assert_eq!(sweep::min_distance(&sys(4, 3, 1), false, 1).unwrap().closed_form, 1008);
    assert!(sweep::min_distance(&sys(4, 2, 0), false, 1).is_err());
}

#[test]
fn truncated_system_is_not_cutting() {
    let s = sys(4, 2, 1);
    let points = minimality::truncated_points(&s, 40, 1).unwrap();
    assert_eq!(points.len(), (105 - 40) * 9);
    let r = minimality::is_cutting_set(s.field(), &points, 3, 1).unwrap();
    assert!(!r.minimal);
    let witness = r.witness.unwrap();
    // the witness section really spans less than the hyperplane
    let mut basis = twistcode::linalg::EchelonBasis::new(9);
    for x in points.chunks(9) {
        if twistcode::linalg::trace_product(
            s.field(),
            &Mat::from_vec(3, 3, x.to_vec()).unwrap(),
            &witness,
        )
        .unwrap()
            == 0
        {
            basis.insert(s.field(), x);
        }
    }
    assert!(basis.rank() < 8);
    assert_eq!(Some(basis.rank()), r.witness_span);
}

#[test]
fn second_weight_at_q4_n3() {
    let r = minwords::second_weight_check(&sys(4, 3, 1), minwords::SecondWeightScope::RankOneWithBounds, 1)
        .unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!((r.min_weight, r.second_weight), (1008, 1024));
    assert_eq!(r.rank_one_singular, 1785);
}

#[test]
fn untwisted_pairing_misclassifies() {
    // with xi x as the test, some rank-one classes would be labelled against their weight
    let s = sys(4, 2, 1);
    let f = s.field();
    let pg = s.gamma().space();
    let mut disagreements = 0;
    for a in 0..pg.len() {
        for b in 0..pg.len() {
            let (x, xi) = (pg.rep(a), pg.rep(b));
            let m = twistcode::linalg::pure_tensor(
                f,
                &twistcode::ColVec(x.to_vec()),
                &twistcode::RowVec(xi.to_vec()),
            )
            .unwrap();
            let r = hyperplanes::classify(&s, &m).unwrap();
            let plain = twistcode::linalg::dot(f, xi, x) == 0;
            let twisted = minwords::twisted_pairing(&s, x, xi) == 0;
            assert_eq!(twisted, r.kind == HyperplaneType::Singular);
            assert_eq!(twisted, r.weight == 64);
            disagreements += (plain != twisted) as usize;
        }
    }
    assert!(disagreements > 0);
}

#[test]
fn classify_is_consistent_on_every_class() {
    let s = sys(4, 2, 1);
    let total = sweep::class_count(&s) as u64;
    for idx in (0..total).step_by(7) {
        let m = sweep::class_matrix(&s, idx);
        let r = hyperplanes::classify(&s, &m).unwrap();
        assert_eq!(r.cardinality + r.weight, 105);
        assert!(r.pass);
        assert_ne!(r.kind, HyperplaneType::SpreadType);
    }
}

#[test]
fn zero_matrix_handling() {
    let s = sys(4, 2, 1);
    assert_eq!(code::eval_codeword(&s, &Mat::zeros(3, 3)).unwrap().weight(), 0);
    assert_eq!(code::theta(&s, &Mat::zeros(3, 3)), Err(Error::ZeroInput));
    assert!(matches!(code::theta(&s, &Mat::zeros(2, 2)), Err(Error::Shape(_))));
}

#[test]
fn fpf_construction_examples() {
    let f = Field::with_order(9).unwrap();
    let sigma = Frobenius::new(&f, 1).unwrap();
    let w = hyperplanes::find_fpf_collineation(&f, &sigma, 3).unwrap();
    assert_eq!((w.exponent, w.gcd), (3, 2));
    // the collineation and M are tied by M^-1 = A^T
    assert_eq!(w.matrix.invert(&f).unwrap(), w.collineation.transpose());
    let f4 = Field::with_order(4).unwrap();
    let s4 = Frobenius::new(&f4, 1).unwrap();
    assert!(hyperplanes::find_fpf_collineation(&f4, &s4, 3).is_err());
}

#[test]
fn spread_search_reports_exhaustion() {
    let f = Field::with_order(4).unwrap();
    let sigma = Frobenius::new(&f, 1).unwrap();
    assert_eq!(
        hyperplanes::find_spread(&f, &sigma, 3, 1, 500),
        Err(Error::SearchExhausted { attempts: 500, seed: 1 })
    );
}

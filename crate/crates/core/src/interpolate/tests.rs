use super::*;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn pt(c: &[i64]) -> Point {
    Point::from_i64(c).unwrap()
}

fn inst(rows: &[&[i64]], targets: &[i64]) -> InterpolationInstance {
    let points = PointSet::from_i64(rows[0].len(), rows).unwrap();
    InterpolationInstance::new(points, targets.iter().map(|&t| big(t)).collect()).unwrap()
}

fn deg60(targets: &[i64]) -> InterpolationInstance {
    inst(&[&[1, 4], &[3, 5], &[4, 5]], targets)
}

#[test]
fn eval_matrix_examples() {
    let m = eval_matrix(&[pt(&[1, 4]), pt(&[3, 5]), pt(&[4, 5])], 1, None).unwrap();
    assert_eq!(m, IntMatrix::from_i64(&[[1, 4], [3, 5], [4, 5]]).unwrap());
    let m = eval_matrix(&[pt(&[1, 2]), pt(&[2, 1])], 2, None).unwrap();
    assert_eq!(m, IntMatrix::from_i64(&[[1, 2, 4], [4, 2, 1]]).unwrap());
    let m = eval_matrix(&[pt(&[1, 2]), pt(&[2, 1])], 2, Some(&big(3))).unwrap();
    assert_eq!(m, IntMatrix::from_i64(&[[1, 2, 1], [1, 2, 1]]).unwrap());
    assert_eq!(eval_matrix(&[pt(&[1, 2])], 0, None), Err(Error::InvalidDegree(0)));
}

#[test]
fn small_instance_degrees() {
    let i = inst(&[&[1, 2], &[2, 1]], &[1, 1]);
    let r1 = feasible_degree(&i, 1).unwrap();
    assert_eq!(r1.verdict, Verdict::InfeasibleAtDegree);
    r1.certificate.unwrap().replay(&i).unwrap();
    let r2 = feasible_degree(&i, 2).unwrap();
    assert!(r2.is_feasible());
    let best = min_degree(&i, &MinDegreeOptions { max_degree: 10, ..Default::default() }).unwrap();
    assert_eq!(best.degree, Some(2));
}

#[test]
fn min_degree_single_point() {
    let i = inst(&[&[1, 0]], &[1]);
    let r = min_degree(&i, &MinDegreeOptions::default()).unwrap();
    assert_eq!(r.degree, Some(1));
    assert_eq!(r.witness.unwrap(), HomogeneousPoly::variable(2, 0));
}

#[test]
fn min_degree_unknown_keeps_certificates() {
    let i = deg60(&[1, 1, 1]);
    let opts = MinDegreeOptions {
        max_degree: 5,
        keep_certificates: true,
        sieve: true,
    };
    let r = min_degree(&i, &opts).unwrap();
    assert_eq!(r.verdict, Verdict::Unknown);
    assert_eq!(r.degree_certificates.len(), 5);
    for c in &r.degree_certificates {
        c.replay(&i).unwrap();
    }
}

#[test]
fn degree_60_sieve_leaves_multiples_of_60() {
    let i = deg60(&[1, 1, 1]);
    let sieve = periodic::DegreeSieve::new(&i, &default_primes(&i));
    let open: Vec<u32> = (1..=240).filter(|&d| !sieve.rules_out(d)).collect();
    assert_eq!(open, vec![60, 120, 180, 240]);
}

#[test]
fn obstruction_examples() {
    let primes = [big(5)];
    for targets in [[1, 5, 1], [1, 1, 5]] {
        let i = deg60(&targets);
        let c = periodic_obstruction(&i, &primes, 64).unwrap().expect("obstructed");
        assert!(matches!(&c, Certificate::ModularPeriodic { prime, .. } if prime == &big(5)));
        c.replay(&i).unwrap();
    }
    assert!(periodic_obstruction(&deg60(&[1, 1, 1]), &primes, 64).unwrap().is_none());
}

#[test]
fn tampered_periodic_certificate_is_rejected() {
    let i = deg60(&[1, 5, 1]);
    let c = periodic_obstruction(&i, &[big(5)], 64).unwrap().unwrap();
    let Certificate::ModularPeriodic {
        prime,
        stabilization_degree,
        period,
        mut functionals,
    } = c
    else {
        unreachable!()
    };
    functionals[0][0] += 1;
    let bad = Certificate::ModularPeriodic {
        prime,
        stabilization_degree,
        period,
        functionals,
    };
    assert!(matches!(bad.replay(&i), Err(Error::CertificateRejected(_))));
    // certificate for one target vector does not transfer to a feasible one
    assert!(bad.replay(&deg60(&[1, 1, 1])).is_err());
}

#[test]
fn separating_forms() {
    let l = separating_form(&pt(&[1, 4]), &pt(&[3, 5])).unwrap();
    assert_eq!(l, HomogeneousPoly::linear(&[big(5), big(-3)]));
    assert_eq!(l.eval_at(&pt(&[1, 4])).unwrap(), big(-7));
    let l = separating_form(&pt(&[1, 4]), &pt(&[4, 5])).unwrap();
    assert_eq!(l.eval_at(&pt(&[1, 4])).unwrap(), big(-11));
    let l = separating_form(&pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap();
    assert_eq!(l.eval_at(&pt(&[0, 1, 0])).unwrap(), big(0));
    assert_ne!(l.eval_at(&pt(&[1, 0, 0])).unwrap(), big(0));
    assert_eq!(
        separating_form(&pt(&[1, 2]), &pt(&[-1, -2])),
        Err(Error::ScalarMultiples)
    );
}

#[test]
fn vanishing_polys() {
    let f = vanishing_poly(&pt(&[1, 4]), &[pt(&[3, 5]), pt(&[4, 5])]).unwrap();
    assert_eq!(f.degree(), 2);
    assert_eq!(f.eval_at(&pt(&[1, 4])).unwrap(), big(77));
    assert_eq!(f.eval_at(&pt(&[3, 5])).unwrap(), big(0));
    let g = vanishing_poly(&pt(&[3, 5]), &[pt(&[1, 4]), pt(&[4, 5])]).unwrap();
    assert_eq!(g.eval_at(&pt(&[3, 5])).unwrap(), big(-35));
    let lone = vanishing_poly(&pt(&[2, 3]), &[]).unwrap();
    assert_eq!(lone.degree(), 1);
    assert_eq!(lone.eval_at(&pt(&[2, 3])).unwrap(), big(1));
}

#[test]
fn unit_linear_forms() {
    for c in [&[1, 0, 0][..], &[6, 10, 15], &[4, 5], &[-3, 7], &[0, -1], &[-5, 0, 3]] {
        let l = unit_linear_form(&pt(c)).unwrap();
        assert_eq!(l.eval_at(&pt(c)).unwrap(), big(1), "{c:?}");
    }
    assert_eq!(
        unit_linear_form(&pt(&[1, 0, 0])).unwrap(),
        HomogeneousPoly::variable(3, 0)
    );
    assert!(matches!(unit_linear_form(&pt(&[2, 4])), Err(Error::NotCoprime { .. })));
}

#[test]
fn witness_fast_paths() {
    let x = construct_witness(&PointSet::from_i64(2, &[[1, 0]]).unwrap(), &WitnessOptions::default());
    assert_eq!(x.unwrap(), HomogeneousPoly::variable(2, 0));
    let empty = construct_witness(&PointSet::new(3, vec![]).unwrap(), &WitnessOptions::default());
    assert_eq!(empty.unwrap(), HomogeneousPoly::variable(3, 0));
    let one = construct_witness(&PointSet::from_i64(1, &[[1], [-1]]).unwrap(), &WitnessOptions::default());
    assert_eq!(one.unwrap().degree(), 2);
}

#[test]
fn witness_with_opposite_points_has_even_degree() {
    let s = PointSet::from_i64(2, &[[1, 1], [-1, -1]]).unwrap();
    let f = construct_witness(&s, &WitnessOptions::default()).unwrap();
    assert_eq!(f.degree() % 2, 0);
}

#[test]
fn degree_60_witness() {
    let s = PointSet::from_i64(2, &[[1, 4], [3, 5], [4, 5]]).unwrap();
    let f = construct_witness(&s, &WitnessOptions::default()).unwrap();
    assert_eq!(f.degree(), 60);
}

#[test]
fn unit_power_strategy() {
    let opts = WitnessOptions {
        strategy: WitnessStrategy::UnitPower,
        max_degree: 10_000,
        seed: 0,
    };
    for rows in [&[[1, 2], [2, 1]][..], &[[1, 0], [0, 1], [1, 1]], &[[2, 3], [5, 7], [-2, -3]]] {
        let s = PointSet::from_i64(2, rows).unwrap();
        let f = construct_witness(&s, &opts).unwrap();
        assert!(f.degree() >= 1);
    }
    let s = PointSet::from_i64(2, &[[1, 4], [3, 5], [4, 5]]).unwrap();
    let small = WitnessOptions {
        max_degree: 1000,
        ..opts
    };
    assert!(matches!(
        construct_witness(&s, &small),
        Err(Error::DegreeBudgetExceeded { required: 4620, .. })
    ));
}

#[test]
fn witness_budget_reports_forced_divisor() {
    let s = PointSet::from_i64(2, &[[1, 4], [3, 5], [4, 5]]).unwrap();
    let opts = WitnessOptions {
        max_degree: 10,
        ..Default::default()
    };
    match construct_witness(&s, &opts) {
        Err(Error::DegreeBudgetExceeded {
            forced_divisor, budget, ..
        }) => {
            assert_eq!(budget, 10);
            assert_eq!(forced_divisor, Some(60));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn candidate_primes_of_degree_60_instance() {
    let pts = [pt(&[1, 4]), pt(&[3, 5]), pt(&[4, 5])];
    assert_eq!(candidate_primes(&pts), vec![big(5), big(7), big(11)]);
    assert_eq!(forced_degree_divisor(&pts), Some(60));
}

#[test]
fn certificate_json_round_trip() {
    let i = deg60(&[1, 5, 1]);
    let c = periodic_obstruction(&i, &[big(5)], 64).unwrap().unwrap();
    let back: Certificate = serde_json::from_str(&c.to_json()).unwrap();
    assert_eq!(back, c);
    let r = feasible_degree(&deg60(&[1, 1, 1]), 59).unwrap();
    let c = r.certificate.unwrap();
    let back: Certificate = serde_json::from_str(&c.to_json()).unwrap();
    assert_eq!(back, c);
    back.replay(&deg60(&[1, 1, 1])).unwrap();
}

use num_rational::BigRational;
use ptcubic::goldens;
use ptcubic::hermitian::{
    hermitian_equivalent, observables, represent_in_observables, unscale, DimExponents, DimensionfulOperator,
    OperatorKind,
};
use ptcubic::metric::{solve_metric, CubicModel};
use ptcubic::weyl::{ratio, EpsilonSeries, GaussianRational, OperatorPoly, SymmetryKind};

fn m_values() -> [BigRational; 3] {
    [ratio(1, 1), ratio(3, 2), ratio(4, 1)]
}

#[test]
fn odd_orders_vanish_through_fifth() {
    let sol = solve_metric(5, &ratio(1, 1)).unwrap();
    let exp = hermitian_equivalent(&sol).unwrap();
    assert_eq!(exp.order(), 5);
    for j in [1, 3, 5] {
        assert!(exp.coeff(j).is_zero(), "h^({j})");
    }
}

#[test]
fn even_orders_and_identities_match_closed_forms() {
    for m in m_values() {
        let sol = solve_metric(3, &m).unwrap();
        let exp = hermitian_equivalent(&sol).unwrap();
        assert_eq!(exp.coeff(0), CubicModel::new(m.clone()).h0());
        assert_eq!(exp.coeff(2), goldens::h2(&m));
        assert_eq!(exp.coeff(4), goldens::h4(&m));
        assert_eq!(exp.comm_h1_q1, goldens::comm_h1_q1(&m));
        assert_eq!(exp.comm_h1_q3.as_ref().unwrap(), &goldens::comm_h1_q3(&m));
        assert_eq!(exp.triple_comm_h1_q1, goldens::triple_comm_h1_q1(&m));
    }
}

#[test]
fn observables_match_closed_forms() {
    for m in m_values() {
        let sol = solve_metric(1, &m).unwrap();
        let pair = observables(&sol, 2).unwrap();
        assert_eq!(pair.x, goldens::x_observable(&m));
        assert_eq!(pair.p, goldens::p_observable(&m));
    }
}

#[test]
fn observables_form_canonical_pair() {
    let sol = solve_metric(3, &ratio(3, 2)).unwrap();
    let pair = observables(&sol, 4).unwrap();
    let comm = pair.x.commutator(&pair.p);
    assert_eq!(comm, EpsilonSeries::constant(OperatorPoly::constant(GaussianRational::i()), 4));
    assert_eq!(pair.x.transform(SymmetryKind::PT), -&pair.x);
    assert_eq!(pair.p.transform(SymmetryKind::PT), pair.p);
    assert_ne!(pair.p.transform(SymmetryKind::Parity), -&pair.p);
    assert_ne!(pair.x.transform(SymmetryKind::TimeReversal), pair.x);
}

#[test]
fn h_in_terms_of_observables_is_h() {
    for m in m_values() {
        let sol = solve_metric(3, &m).unwrap();
        let exp = hermitian_equivalent(&sol).unwrap();
        let pair = observables(&sol, 4).unwrap();
        let back = represent_in_observables(&exp.series, &pair);
        assert_eq!(back, CubicModel::new(m).hamiltonian(4));
    }
}

#[test]
fn unscaled_h_matches_physical_form_for_any_length_scale() {
    let golden = goldens::h_dimensionful();
    for m in m_values() {
        let sol = solve_metric(3, &m).unwrap();
        let exp = hermitian_equivalent(&sol).unwrap();
        let dim = unscale(&exp.series, &m, OperatorKind::Energy).unwrap();
        assert_eq!(dim, golden, "M = {m}");
    }
}

#[test]
fn unscaled_x_matches_physical_form() {
    // X = x + 2iμ⁻⁴(p²/m + μ²x²/2)ϵ + μ⁻⁶({x,p²}/m − μ²x³)ϵ²
    let x = |a| OperatorPoly::monomial(GaussianRational::one(), a, 0);
    let p2 = OperatorPoly::monomial(GaussianRational::one(), 0, 2);
    let mut golden = DimensionfulOperator::new();
    let add = |g: &mut DimensionfulOperator, c: GaussianRational, e: [i32; 4], op: OperatorPoly, deg| {
        for ((a, b), v) in op.terms() {
            let lost = (deg - a - b) / 2;
            g.add_term(DimExponents::new(e[0], e[1], e[2], e[3] + lost as i32), a, b, &(v * &c)).unwrap();
        }
    };
    add(&mut golden, GaussianRational::one(), [0, 0, 0, 0], x(1), 1);
    add(&mut golden, GaussianRational::imag_ratio(2, 1), [-1, -4, 1, 0], p2.clone(), 2);
    add(&mut golden, GaussianRational::imag_ratio(1, 1), [0, -2, 1, 0], x(2), 2);
    add(&mut golden, GaussianRational::one(), [-1, -6, 2, 0], x(1).anticommutator(&p2), 3);
    add(&mut golden, GaussianRational::from_integer(-1), [0, -4, 2, 0], x(3), 3);
    for m in m_values() {
        let sol = solve_metric(1, &m).unwrap();
        let pair = observables(&sol, 2).unwrap();
        assert_eq!(unscale(&pair.x, &m, OperatorKind::Position).unwrap(), golden);
        let p = unscale(&pair.p, &m, OperatorKind::Momentum).unwrap();
        assert!(p.terms().all(|t| t.exps.hbar >= 0 && t.exps.m <= 0));
    }
}

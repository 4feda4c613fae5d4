mod common;

use common::strategy::coefficients;
use common::{max_abs, max_diff, ONE, ZERO};
use jacobi_inverse::connecting::{connecting_from_response, rotate};
use jacobi_inverse::factorization::{minor_ladder, reconstruct_factorization};
use jacobi_inverse::forward::{control_matrix, control_solve, goursat_kernel, response_vector};
use jacobi_inverse::krein::{krein_control, reconstruct_krein, reconstruct_krein_with_retry};
use jacobi_inverse::reconstruction::Diagnostics;
use jacobi_inverse::{
    Error, JacobiCoefficients, KreinParameters, Method, ReconstructionResult, ResponseVector,
    Scalar, ToleranceConfig,
};
use proptest::prelude::*;

fn recovers(rec: &ReconstructionResult, c: &JacobiCoefficients, tol: f64) -> bool {
    (rec.a0 - c.a(0)).norm() <= tol
        && (1..c.depth()).all(|k| {
            let sq = c.a(k) * c.a(k);
            (rec.b[k - 1] - c.b(k)).norm() <= tol && (rec.a_sq[k - 1] - sq).norm() <= tol * sq.norm()
        })
}

fn seeds() -> impl Strategy<Value = KreinParameters> {
    prop_oneof![
        Just(KreinParameters::new(ZERO, ONE).unwrap()),
        Just(KreinParameters::new(ONE, ZERO).unwrap()),
        Just(KreinParameters::new(ONE, ONE).unwrap()),
    ]
}

proptest! {
    #[test]
    fn factorization_recovers(c in coefficients(1..=8)) {
        let r = response_vector(&c, c.depth()).unwrap();
        let rec = reconstruct_factorization(&r, c.depth(), &ToleranceConfig::default()).unwrap();
        prop_assert_eq!(rec.method, Method::Factorization);
        prop_assert_eq!(rec.depth(), c.depth());
        prop_assert!(recovers(&rec, &c, 1e-8));
    }

    #[test]
    fn krein_recovers(c in coefficients(1..=8)) {
        let r = response_vector(&c, c.depth()).unwrap();
        let rec = reconstruct_krein_with_retry(&r, c.depth(), &ToleranceConfig::default()).unwrap();
        prop_assert_eq!(rec.method, Method::Krein);
        prop_assert!(recovers(&rec, &c, 1e-8));
    }

    #[test]
    fn methods_agree(c in coefficients(1..=8)) {
        let tol = ToleranceConfig::default();
        let r = response_vector(&c, c.depth()).unwrap();
        let f = reconstruct_factorization(&r, c.depth(), &tol).unwrap();
        let k = reconstruct_krein_with_retry(&r, c.depth(), &tol).unwrap();
        prop_assert!(f.max_difference(&k) <= 1e-8);
    }

    #[test]
    fn seed_does_not_matter(c in coefficients(2..=8), p in seeds(), q in seeds()) {
        let tol = ToleranceConfig::default();
        let r = response_vector(&c, c.depth()).unwrap();
        // an isolated zero of the seed trajectory is the only admissible failure
        if let (Ok(x), Ok(y)) = (reconstruct_krein(&r, c.depth(), &p, &tol), reconstruct_krein(&r, c.depth(), &q, &tol)) {
            prop_assert!(x.max_difference(&y) <= 1e-8);
        }
    }

    #[test]
    fn krein_control_is_the_steering_control(c in coefficients(1..=8), p in seeds()) {
        let depth = c.depth();
        let r = response_vector(&c, depth).unwrap();
        let y = common::stationary(&c, p.alpha, p.beta, depth);
        for window in 1..=depth {
            let direct = control_solve(&c, &y[1..=window]).unwrap();
            let from_data = krein_control(&r, &p, window, &ToleranceConfig::default()).unwrap();
            prop_assert!(max_diff(direct.values(), from_data.values()) <= 1e-9 * max_abs(direct.values()).max(1.0));
        }
    }

    #[test]
    fn only_squares_are_seen(c in coefficients(2..=8), mask in prop::collection::vec(any::<bool>(), 7)) {
        let tol = ToleranceConfig::default();
        let mut flipped = c.clone();
        for k in 1..c.depth() {
            if mask[k - 1] {
                flipped = flipped.with_negated_coupling(k);
            }
        }
        let (r, s) = (response_vector(&c, c.depth()).unwrap(), response_vector(&flipped, c.depth()).unwrap());
        prop_assert_eq!(&r, &s);
        prop_assert_eq!(
            reconstruct_factorization(&r, c.depth(), &tol).unwrap(),
            reconstruct_factorization(&s, c.depth(), &tol).unwrap()
        );
    }

    #[test]
    fn minors_telescope(c in coefficients(1..=10)) {
        let depth = c.depth();
        let r = response_vector(&c, depth).unwrap();
        let ladder = minor_ladder(&rotate(&connecting_from_response(&r, depth).unwrap()), &ToleranceConfig::default()).unwrap();
        for k in 1..=depth {
            let p = c.coupling_product(k);
            let ratio = ladder.det_c[k] / ladder.det_c[k - 1];
            // a pivot is only known to within rounding of the row it eliminates
            let scale = (p * p).norm().max(ladder.row_norms[k - 1]);
            prop_assert!((ratio - p * p).norm() <= 1e-10 * scale, "k={} err={:e} p2={:e} row={:e}", k, (ratio - p * p).norm(), (p*p).norm(), ladder.row_norms[k-1]);
        }
    }

    #[test]
    fn inverse_upper_factor(c in coefficients(2..=8)) {
        let depth = c.depth();
        let v = control_matrix(&c, depth).unwrap();
        let inverse = v.upper().clone().try_inverse().unwrap();
        let w = goursat_kernel(&c, depth).unwrap();
        for k in 1..=depth {
            let pk = c.coupling_product(k);
            prop_assert!((inverse[(k - 1, k - 1)] * pk - ONE).norm() <= 1e-12);
            if k < depth {
                let expected = -w.get(k, k) / (pk * c.coupling_product(k + 1));
                prop_assert!((inverse[(k - 1, k)] - expected).norm() <= 1e-10 * expected.norm().max(1.0));
            }
        }
    }

    #[test]
    fn upper_factor_whitens_the_connecting_matrix(c in coefficients(1..=8)) {
        let depth = c.depth();
        let r = response_vector(&c, depth).unwrap();
        let rotated = rotate(&connecting_from_response(&r, depth).unwrap());
        let inverse = control_matrix(&c, depth).unwrap().upper().clone().try_inverse().unwrap();
        let identity = inverse.transpose() * rotated.entries() * &inverse;
        let scale = rotated.entries().norm() * inverse.norm() * inverse.norm();
        for i in 0..depth {
            for j in 0..depth {
                let want = if i == j { ONE } else { ZERO };
                prop_assert!((identity[(i, j)] - want).norm() <= 1e-13 * scale);
            }
        }
    }

    #[test]
    fn first_potential_closed_form(c in coefficients(2..=6)) {
        let r = response_vector(&c, c.depth()).unwrap();
        let rec = reconstruct_factorization(&r, c.depth(), &ToleranceConfig::default()).unwrap();
        let closed = r.at(1) / r.at(0);
        prop_assert!((rec.b[0] - closed).norm() <= 1e-12);
    }

    #[test]
    fn diagnostics_record_the_run(c in coefficients(2..=8)) {
        let tol = ToleranceConfig::default();
        let r = response_vector(&c, c.depth()).unwrap();
        match reconstruct_factorization(&r, c.depth(), &tol).unwrap().diagnostics {
            Diagnostics::Factorization { ladder, relative_pivots } => {
                prop_assert_eq!(ladder.size(), c.depth());
                prop_assert_eq!(relative_pivots.len(), c.depth());
                prop_assert!(relative_pivots.iter().all(|&p| p > tol.singular_threshold));
            }
            other => prop_assert!(false, "unexpected diagnostics {:?}", other),
        }
        match reconstruct_krein_with_retry(&r, c.depth(), &tol).unwrap().diagnostics {
            Diagnostics::Krein { steps, .. } => {
                prop_assert_eq!(steps.len(), c.depth());
                prop_assert!(steps.iter().enumerate().all(|(i, s)| s.window == i + 1));
            }
            other => prop_assert!(false, "unexpected diagnostics {:?}", other),
        }
    }
}

#[test]
fn two_sites_by_hand() {
    // a = (1, 2), b_1 = i  =>  r = (1, i, 2)
    let r = ResponseVector::new(vec![ONE, Scalar::new(0.0, 1.0), Scalar::new(2.0, 0.0)]).unwrap();
    let tol = ToleranceConfig::default();
    for rec in [
        reconstruct_factorization(&r, 2, &tol).unwrap(),
        reconstruct_krein_with_retry(&r, 2, &tol).unwrap(),
    ] {
        assert!((rec.a0 - ONE).norm() < 1e-14);
        assert!((rec.a_sq[0] - Scalar::new(4.0, 0.0)).norm() < 1e-14);
        assert!((rec.b[0] - Scalar::new(0.0, 1.0)).norm() < 1e-14);
    }
}

#[test]
fn singular_data_is_refused_by_both_methods() {
    let r = ResponseVector::new(vec![ONE, ONE, ZERO, ZERO, -ONE]).unwrap();
    let tol = ToleranceConfig::default();
    assert_eq!(reconstruct_factorization(&r, 3, &tol).unwrap_err(), Error::SingularMinor(2));
    assert_eq!(reconstruct_krein_with_retry(&r, 3, &tol).unwrap_err(), Error::SingularConnecting(2));
}

#[test]
fn short_window_is_refused() {
    let r = ResponseVector::new(vec![ONE, ZERO, ZERO]).unwrap();
    let tol = ToleranceConfig::default();
    assert_eq!(
        reconstruct_factorization(&r, 3, &tol).unwrap_err(),
        Error::WindowTooShort { needed: 3, available: 2 }
    );
}

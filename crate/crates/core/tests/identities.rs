use curv2k_core::curvature::{bianchi_project, Rank4};
use curv2k_core::extremum::theta;
use curv2k_core::identity::{
    check_norm_identity, check_scal_identity, check_sjw_lower_bound, check_sum_sq_identity,
    cubic_objective, dai_fu_rhs, f_lambda, weyl_from_spectrum, Analysis, Outcome,
};
use curv2k_core::models::{named_models, random_einstein, standard_corpus};
use curv2k_core::rng::SplitMix64;
use curv2k_core::second_kind::Spectrum;
use num_rational::BigRational;
use proptest::prelude::*;

fn passed(o: &Outcome) -> bool {
    o.report().map(|r| r.pass).unwrap_or(false)
}

#[test]
fn identities_on_named_models() {
    for spec in named_models() {
        let r = spec.build().unwrap();
        let a = Analysis::new(&r).unwrap();
        let th = theta(spec.n()).unwrap().value;
        for o in a.verify_all(th, spec.is_symmetric_space()) {
            assert!(!o.failed(), "{spec}: {o:?}");
        }
        for o in [
            a.scal_identity(),
            a.norm_identity(),
            a.sum_sq_identity(),
            a.sjw_sum_identity(),
        ] {
            assert!(passed(&o), "{spec}: {o:?}");
        }
        if spec.is_symmetric_space() {
            assert!(passed(&a.dai_fu_vanishes()), "{spec}");
        }
    }
}

#[test]
fn identities_on_random_einstein_tensors() {
    for n in 4..=8 {
        for seed in 0..8 {
            let r = random_einstein(n, seed, 1.0).unwrap();
            for o in [
                check_scal_identity(&r),
                check_norm_identity(&r),
                check_sum_sq_identity(&r),
            ] {
                let rep = o.report().expect("Einstein");
                assert!(rep.pass && rep.rel_err < 1e-9, "n={n} seed={seed} {rep:?}");
            }
            let a = Analysis::new(&r).unwrap();
            assert!(passed(&a.weyl_spectrum_identity()));
            assert!(passed(&a.sjw_sum_identity()));
            assert!(weyl_from_spectrum(&r).unwrap() > 0.0);
        }
    }
}

#[test]
fn non_einstein_inputs_are_not_applicable() {
    let mut rng = SplitMix64::new(3);
    let m: Vec<f64> = (0..36).map(|_| rng.next_normal()).collect();
    let m: Vec<f64> = (0..36).map(|k| m[k] + m[(k % 6) * 6 + k / 6]).collect();
    let r = bianchi_project(&Rank4::from_two_form_matrix(4, &m).unwrap()).unwrap();
    assert!(matches!(
        check_scal_identity(&r),
        Outcome::NotApplicable { .. }
    ));
    assert!(weyl_from_spectrum(&r).is_err());
    assert!(dai_fu_rhs(&r).is_err());
    // the trace identity needs no Einstein condition
    assert!(passed(&Analysis::new(&r).unwrap().trace_identity()));
}

#[test]
fn sjw_bound_with_zero_theta() {
    // sphere with Weyl perturbation small enough that all eigenvalues stay positive
    let r = random_einstein(5, 9, 0.002).unwrap();
    let o = check_sjw_lower_bound(&r, 0.0);
    let rep = o.report().expect("applicable");
    assert!(rep.pass && rep.slack.unwrap() >= 0.0, "{rep:?}");
}

#[test]
fn chain_inequality_on_corpus() {
    let mut applicable = 0;
    for entry in standard_corpus(200, 0).unwrap() {
        let n = entry.spec.n();
        let a = Analysis::new(&entry.tensor).unwrap();
        let o = a.chain_inequality(theta(n).unwrap().value);
        if let Some(rep) = o.report() {
            applicable += 1;
            assert!(rep.pass, "{}: {rep:?}", entry.spec);
        }
    }
    assert!(
        applicable >= 40,
        "only {applicable} applicable corpus members"
    );
}

#[test]
fn cubic_objective_exact_matches_float() {
    let spec = Spectrum::from_eigenvalues(
        4,
        vec![-0.5, 0.25, 1.0, 1.0, 1.5, 2.0, 0.0, 3.0, 1.25],
        true,
    );
    let th = 0.3;
    let float = f_lambda(&spec, th).unwrap();
    let exact: Vec<BigRational> = spec
        .eigenvalues
        .iter()
        .map(|x| BigRational::from_float(*x).unwrap())
        .collect();
    let v = cubic_objective(&exact, 4, &BigRational::from_float(th).unwrap()).unwrap();
    let v = curv2k_core::rational::to_f64(&v);
    assert!((v - float).abs() < 1e-12 * float.abs().max(1.0));
    assert!(cubic_objective(&exact[..5], 4, &BigRational::from_float(th).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_is_symmetric_and_cubic(
        values in proptest::collection::vec(-2.0f64..2.0, 9),
        shift in 0usize..9,
        c in 0.1f64..4.0,
        th in 0.0f64..2.0,
    ) {
        let mut rotated = values.clone();
        rotated.rotate_left(shift);
        rotated.reverse();
        let a = f_lambda(&Spectrum::from_eigenvalues(4, values.clone(), true), th).unwrap();
        let b = f_lambda(&Spectrum::from_eigenvalues(4, rotated, true), th).unwrap();
        let scale = values.iter().map(|x| x.abs()).fold(1.0, f64::max).powi(3) * 1e4;
        prop_assert!((a - b).abs() < 1e-12 * scale);
        let scaled: Vec<f64> = values.iter().map(|x| c * x).collect();
        let s = f_lambda(&Spectrum::from_eigenvalues(4, scaled, true), th).unwrap();
        prop_assert!((s - c.powi(3) * a).abs() < 1e-11 * scale * c.powi(3));
    }
}

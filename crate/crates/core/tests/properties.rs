//! Randomized invariants over the fixture corpus.

mod common;

use std::sync::Arc;

use proptest::prelude::*;
use qhk_core::delta::{delta_regrade, find_height_function, HeightOutcome};
use qhk_core::fixtures::{fixture, fixture_source, PROPERTY_FIXTURES};
use qhk_core::pipeline::{run_pipeline, PipelineOptions, Status};
use qhk_core::quasi_hereditary::StandardFamily;
use qhk_core::{parse_presentation, Field, GradedAlgebra, PrimeField, Rationals};

fn small_fixture() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["CATO", "PARA", "AK:2", "AK:3", "DUALEXT", "K", "TRIANGLE", "ODDCYCLE"])
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![101u64, 103, 1009, 65_537])
}

fn build<F: Field>(field: &F, name: &str) -> Arc<GradedAlgebra<F>> {
    Arc::new(GradedAlgebra::build(field, &fixture(name).unwrap(), None).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn basis_matches_path_count(name in prop::sample::select(PROPERTY_FIXTURES.to_vec())) {
        let p = fixture(name).unwrap();
        let a = GradedAlgebra::build(&Rationals, &p, None).unwrap();
        let oracle = common::path_dims(&p);
        prop_assert_eq!(a.dim(), oracle.values().sum::<usize>());
        prop_assert_eq!(a.graded_dim_vector(), common::length_dims(&p));
    }

    #[test]
    fn product_is_associative_on_random_elements(
        name in small_fixture(),
        seed in prop::collection::vec(-3i64..4, 3 * 40),
    ) {
        let f = PrimeField::new(101).unwrap();
        let a = build(&f, name);
        let n = a.dim();
        let elem = |k: usize| -> Vec<_> {
            (0..n).map(|i| f.from_i64(seed[(k * n + i) % seed.len()])).collect()
        };
        let (x, y, z) = (elem(0), elem(1), elem(2));
        prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
    }

    #[test]
    fn verdicts_do_not_depend_on_the_prime(name in small_fixture(), p in prime()) {
        let src = fixture_source(name).unwrap();
        let opts = PipelineOptions { input: name.into(), ..Default::default() };
        let (q, _) = run_pipeline(&Rationals, &src, &opts).unwrap();
        let (fp, _) = run_pipeline(&PrimeField::new(p).unwrap(), &src, &opts).unwrap();
        for (a, b) in q.stages.iter().zip(&fp.stages) {
            if a.status != Status::NotApplicable && b.status != Status::NotApplicable {
                prop_assert_eq!(a.status, b.status, "stage {}", a.name);
            }
        }
        prop_assert_eq!(format!("{:?}", q.data.delta_layers), format!("{:?}", fp.data.delta_layers));
        prop_assert_eq!(q.data.gamma_ext_dims, fp.data.gamma_ext_dims);
    }

    #[test]
    fn shifting_heights_keeps_the_delta_grading(
        name in prop::sample::select(vec!["CATO", "PARA", "AK:3", "DUALEXT", "CATO+DUALEXT"]),
        k in 0i64..5,
    ) {
        let a = build(&Rationals, name);
        let fam = StandardFamily::new(&a).unwrap();
        let HeightOutcome::Found(h) = find_height_function(&a, &fam) else {
            return Err(TestCaseError::fail("expected a height function"));
        };
        let base = delta_regrade(&a, &h.values).unwrap();
        let moved = delta_regrade(&a, &h.shifted(k).values).unwrap();
        prop_assert_eq!(base.dims(), moved.dims());
        prop_assert_eq!(base.arrow_degrees(), moved.arrow_degrees());
        prop_assert_eq!(base.dims(), common::delta_dims(&fixture(name).unwrap(), &h.values));
    }

    #[test]
    fn printed_presentations_parse_back(name in prop::sample::select(PROPERTY_FIXTURES.to_vec())) {
        let p = fixture(name).unwrap();
        let again = parse_presentation(&p.to_text()).unwrap();
        prop_assert_eq!(again.to_text(), p.to_text());
        let a = GradedAlgebra::build(&Rationals, &p, None).unwrap();
        let b = GradedAlgebra::build(&Rationals, &again, None).unwrap();
        prop_assert_eq!(a.slot_dims(), b.slot_dims());
    }

    #[test]
    fn standard_dims_sum_to_algebra_dim(name in small_fixture()) {
        // dim Λ = Σ_j dim Δ_j · dim ∇_j for a quasi-hereditary algebra.
        let a = build(&Rationals, name);
        let fam = StandardFamily::new(&a).unwrap();
        if !qhk_core::quasi_hereditary::check_quasi_hereditary(&a, &fam).unwrap().passed {
            return Ok(());
        }
        let total: usize = fam.deltas.iter().zip(&fam.nablas).map(|(d, n)| d.dim() * n.dim()).sum();
        prop_assert_eq!(total, a.dim());
    }
}

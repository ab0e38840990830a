mod common;

use common::oracle;
use proptest::prelude::*;
use zswc_core::arith::{component, factorize, Residue};
use zswc_core::engine::{self, Mode, Sequence, WeightSet, Witness};
use zswc_core::search::SearchConfig;
use zswc_core::theory::{self, Effort, Status, VerifyConfig};
use zswc_core::Modulus;

fn nonsquare_odd(n: u64) -> bool {
    n % 2 == 1 && !zswc_core::arith::is_perfect_square(n)
}

#[test]
fn constructions_block_by_brute_force() {
    // The oracle is exponential, so stick to short sequences and small moduli.
    for n in (3..=45).filter(|&n| nonsquare_odd(n)) {
        let q = theory::construct_nonsquare_odd_witness(n).unwrap();
        assert!(
            !oracle::has_zero_sum_subsequence(n, q.terms(), &oracle::nonzero_squares(n)),
            "n={n}"
        );
    }
    for n in [4, 16, 36] {
        let q = theory::construct_even_square_witness(n).unwrap();
        assert!(
            !oracle::has_zero_sum_subsequence(n, q.terms(), &oracle::nonzero_squares(n)),
            "n={n}"
        );
    }
    for n in [9, 25, 49] {
        let q = theory::construct_odd_square_d_witness(n).unwrap();
        assert!(
            !oracle::has_zero_sum_subsequence(n, q.terms(), &oracle::nonzero_squares(n)),
            "n={n}"
        );
    }
    let q = theory::construct_consecutive_witness(9).unwrap();
    assert!(!oracle::has_zero_sum_consecutive(
        9,
        q.terms(),
        &oracle::nonzero_squares(9)
    ));
}

#[test]
fn non_qp_pairs_are_lexicographically_least() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
        let (u, v) = theory::find_non_qp_pair(p, 1).unwrap();
        let qp = oracle::unit_squares(p);
        let first = (1..p)
            .flat_map(|a| (1..p).map(move |b| (a, b)))
            .find(|&(a, b)| !oracle::has_zero_sum_subsequence(p, &[a, b], &qp))
            .unwrap();
        assert_eq!((u.value(), v.value()), first, "p={p}");
    }
}

#[test]
fn partitions_up_to_two_thousand() {
    for q in 2..=2000u64 {
        let f = factorize(q).unwrap();
        if f.is_prime_power() {
            let (p, r) = f.factors()[0];
            assert_eq!(theory::check_square_partition(p, r), Ok(true), "{p}^{r}");
        }
    }
}

#[test]
fn square_lifts_for_odd_prime_powers() {
    for q in 3..=1000u64 {
        let f = factorize(q).unwrap();
        let (p, r) = f.factors()[0];
        if p == 2 || !f.is_prime_power() {
            continue;
        }
        let c = theory::check_square_lift(p, r, 200, q).unwrap();
        assert!(c.pass(), "{c:?}");
    }
}

#[test]
fn verify_reports_for_small_moduli() {
    let config = VerifyConfig {
        search: SearchConfig::default(),
        node_budget: 1_000_000_000,
    };
    let moduli: Vec<u64> = (2..=20).collect();
    for (n, report) in theory::verify_many(&moduli, Effort::Full, &config) {
        let report = report.unwrap();
        assert_eq!(report.status, Status::Ok, "n={n}: {:?}", report.notes);
        assert_eq!(report.d_search, Some(report.prediction.d));
        assert!(report.prediction.c.contains(report.c_search.unwrap()));
    }
}

#[test]
fn record_json_round_trip() {
    let report = theory::verify_results(36, Effort::Fast, &VerifyConfig::default()).unwrap();
    let record = report.record();
    let text = serde_json::to_string(&record).unwrap();
    let back: theory::ReportRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(back, record);
    assert!(text.contains("\"status\":\"ok\""));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifted_weights_witness_the_full_sequence(
        n in 2u64..300,
        raw in prop::collection::vec(0u64..300, 1..4),
        pick in 0usize..8,
    ) {
        let modulus = Modulus::new(n).unwrap();
        let terms: Vec<u64> = raw.iter().map(|x| x % n).collect();
        let seq = Sequence::new(modulus, terms.clone()).unwrap();
        let fact = factorize(n).unwrap();
        let (p, r) = fact.factors()[pick % fact.factors().len()];
        let q = Modulus::new(p.pow(r)).unwrap();
        let local = WeightSet::nonzero_squares(q).unwrap();
        let image = Sequence::new(q, terms.iter().map(|&x| x % q.get()).collect()).unwrap();
        // Take any zero-sum of the component and weight the unused terms by nothing.
        if let Some(w) = engine::has_zero_sum_subsequence(&image, &local).unwrap() {
            let sub = Sequence::new(modulus, w.indices.iter().map(|&i| terms[i]).collect()).unwrap();
            let lifted = theory::crt_weight_lift(&sub, p, &w.coefficients).unwrap();
            let full = WeightSet::nonzero_squares(modulus).unwrap();
            for &a in &lifted {
                prop_assert!(full.contains(a));
                let parts = component(Residue::new(a, modulus).unwrap(), p).unwrap();
                prop_assert!(!parts.is_zero());
            }
            let wit = Witness { indices: w.indices.clone(), coefficients: lifted };
            prop_assert_eq!(engine::verify_witness(&seq, &full, &wit, Mode::Subsequence), Ok(()));
        }
    }
}

#[test]
fn length_nine_sequences_over_z25_have_consecutive_unit_square_zero_sums() {
    let w = WeightSet::unit_squares(Modulus::new(25).unwrap()).unwrap();
    assert_eq!(
        theory::check_sampled_consecutive_bound(&w, 9, 100_000, 25).unwrap(),
        None
    );
    for seq in theory::u25_adversarial_sequences(2000, 9) {
        assert!(
            !engine::is_blocking(&seq, &w, Mode::Consecutive).unwrap(),
            "{:?}",
            seq.terms()
        );
    }
    // Length 8 is not enough.
    let eight = Sequence::new(Modulus::new(25).unwrap(), vec![5, 10, 1, 5, 10, 2, 5, 10]).unwrap();
    assert!(engine::is_blocking(&eight, &w, Mode::Consecutive).unwrap());
}

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use zswc_cli::{run, CheckOutput};

fn check(n: u64, terms: &[u64], mode: &str) -> CheckOutput {
    let seq = terms
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let args = [
        "zswc",
        "check",
        "--n",
        &n.to_string(),
        "--seq",
        &seq,
        "--mode",
        mode,
        "--format",
        "json",
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(run(args, &mut out, &mut err), 0);
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn check_agrees_with_brute_force() {
    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..2000 {
        let n = rng.gen_range(2..=15u64);
        let len = rng.gen_range(1..=4);
        let terms: Vec<u64> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        let weights = oracle::nonzero_squares(n);
        for (mode, want) in [
            (
                "subsequence",
                oracle::has_zero_sum_subsequence(n, &terms, &weights),
            ),
            (
                "consecutive",
                oracle::has_zero_sum_consecutive(n, &terms, &weights),
            ),
        ] {
            let got = check(n, &terms, mode);
            assert_eq!(got.zero_sum, want, "n={n} {terms:?} {mode}");
            if let Some(w) = got.witness {
                // Recheck the 1-based witness by hand.
                let sum = w
                    .indices
                    .iter()
                    .zip(&w.coefficients)
                    .map(|(&i, &a)| a * terms[i - 1])
                    .sum::<u64>();
                assert_eq!(sum % n, 0);
                assert!(w.coefficients.iter().all(|a| weights.contains(a)));
                if mode == "consecutive" {
                    assert!(w.indices.windows(2).all(|p| p[1] == p[0] + 1));
                }
            }
        }
    }
}

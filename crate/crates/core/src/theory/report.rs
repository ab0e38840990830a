//! Per-modulus verification: predictions, constructions, lemma checks and,
//! at full effort, exact searches.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, Modulus};
use crate::engine::{self, Mode, Sequence, WeightSet};
use crate::error::Result;
use crate::search::{self, ConstantKind, ConstantQuery, ConstantValue, SearchConfig};

use super::checks::{self, CoverageVariant};
use super::constructions;
use super::prediction::{predicted_constants, CaseTag, Prediction};

/// Largest modulus for which the element-wise membership check runs.
const MEMBERSHIP_LIMIT: u64 = 100_000;
/// Largest prime power whose coverage lemma is checked at full exponent;
/// larger ones are checked at exponent 1 only.
const COVERAGE_LIMIT: u64 = 200;
const LIFT_LIMIT: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Effort {
    /// Predictions, constructions and lemma checks only.
    Fast,
    /// Additionally searches for the constants.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// A search was infeasible under the node budget; nothing failed.
    Skip,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCheck {
    pub name: String,
    pub pass: bool,
    pub sequence: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub params: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub prediction: Prediction,
    pub effort: Effort,
    pub d_search: Option<u64>,
    pub c_search: Option<u64>,
    pub constructions: Vec<ConstructionCheck>,
    pub lemmas: Vec<LemmaCheck>,
    /// Skipped searches and mismatches, in plain words.
    pub notes: Vec<String>,
    pub status: Status,
}

/// One JSON line of the verification output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub n: u64,
    pub case: String,
    pub d_pred: u64,
    pub c_pred: [u64; 2],
    pub d_search: Option<u64>,
    pub c_search: Option<u64>,
    pub constructions: Vec<ConstructionCheck>,
    pub lemmas: Vec<LemmaCheck>,
    pub status: Status,
}

impl VerificationReport {
    pub fn n(&self) -> u64 {
        self.prediction.n.get()
    }

    pub fn record(&self) -> ReportRecord {
        let p = &self.prediction;
        ReportRecord {
            n: p.n.get(),
            case: p.case.as_str().to_string(),
            d_pred: p.d,
            c_pred: [p.c.lo, p.c.hi],
            d_search: self.d_search,
            c_search: self.c_search,
            constructions: self.constructions.clone(),
            lemmas: self.lemmas.clone(),
            status: self.status,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub search: SearchConfig,
    /// A consecutive search is attempted only when `n^(c_hi - 1)` is at most
    /// this many nodes.
    pub node_budget: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            search: SearchConfig::default(),
            node_budget: search::node_budget_from_env(),
        }
    }
}

/// Builds the full report for one modulus.
pub fn verify_results(n: u64, effort: Effort, config: &VerifyConfig) -> Result<VerificationReport> {
    let prediction = predicted_constants(n)?;
    let modulus = prediction.n;
    let weights = WeightSet::nonzero_squares(modulus)?;
    let mut report = VerificationReport {
        prediction,
        effort,
        d_search: None,
        c_search: None,
        constructions: construction_checks(&prediction, &weights),
        lemmas: lemma_checks(&prediction, effort)?,
        notes: Vec::new(),
        status: Status::Ok,
    };
    let mut skipped = false;
    // A search that ran past its cap contradicts the prediction.
    let mut overran = false;
    if effort == Effort::Full {
        let d_cap = n.min(prediction.d + 1);
        match search_value(&weights, ConstantKind::Davenport, d_cap, &config.search)? {
            SearchValue::Exact(d) => report.d_search = Some(d),
            SearchValue::AtLeast(v) => {
                overran = true;
                report.notes.push(format!("D search stopped with D >= {v}"));
            }
            SearchValue::Skipped => {
                skipped = true;
                report
                    .notes
                    .push("D search exceeded the node budget".into());
            }
        }
        if c_search_feasible(n, prediction.c.hi, config.node_budget) {
            let c_cap = n.min(prediction.c.hi + 1);
            match search_value(&weights, ConstantKind::Consecutive, c_cap, &config.search)? {
                SearchValue::Exact(c) => report.c_search = Some(c),
                SearchValue::AtLeast(v) => {
                    overran = true;
                    report.notes.push(format!("C search stopped with C >= {v}"));
                }
                SearchValue::Skipped => {
                    skipped = true;
                    report
                        .notes
                        .push("C search exceeded the node budget".into());
                }
            }
        } else {
            skipped = true;
            report.notes.push(format!(
                "C search skipped: {n}^{} exceeds the node budget",
                prediction.c.hi - 1
            ));
        }
    }
    let mut failed = overran
        || report.constructions.iter().any(|c| !c.pass)
        || report.lemmas.iter().any(|l| !l.pass);
    if let Some(d) = report.d_search {
        if d != prediction.d {
            report
                .notes
                .push(format!("searched D = {d}, predicted {}", prediction.d));
            failed = true;
        }
    }
    if let Some(c) = report.c_search {
        if !prediction.c.contains(c) {
            report
                .notes
                .push(format!("searched C = {c}, predicted {}", prediction.c));
            failed = true;
        }
    }
    report.status = if failed {
        Status::Fail
    } else if skipped {
        Status::Skip
    } else {
        Status::Ok
    };
    Ok(report)
}

/// Reports for several moduli, built in parallel with one worker per report.
pub fn verify_many(
    moduli: &[u64],
    effort: Effort,
    config: &VerifyConfig,
) -> Vec<(u64, Result<VerificationReport>)> {
    let inner = VerifyConfig {
        search: config.search.clone().with_threads(1),
        node_budget: config.node_budget,
    };
    if let [n] = moduli {
        // A single report gets the whole thread pool for its searches.
        return vec![(*n, verify_results(*n, effort, config))];
    }
    let run = |&n: &u64| (n, verify_results(n, effort, &inner));
    if config.search.threads <= 1 {
        return moduli.iter().map(run).collect();
    }
    match rayon::ThreadPoolBuilder::new()
        .num_threads(config.search.threads)
        .build()
    {
        Ok(pool) => pool.install(|| moduli.par_iter().map(run).collect()),
        Err(_) => moduli.iter().map(run).collect(),
    }
}

fn c_search_feasible(n: u64, c_hi: u64, budget: u64) -> bool {
    let exp = u32::try_from(c_hi.saturating_sub(1)).unwrap_or(u32::MAX);
    n.checked_pow(exp).is_some_and(|bound| bound <= budget)
}

enum SearchValue {
    Exact(u64),
    AtLeast(u64),
    Skipped,
}

fn search_value(
    weights: &WeightSet,
    kind: ConstantKind,
    cap: u64,
    config: &SearchConfig,
) -> Result<SearchValue> {
    let query = ConstantQuery::new(weights.clone(), kind).with_cap(cap)?;
    let result = search::compute_constant(query, config)?;
    Ok(match result.value {
        ConstantValue::Exact(v) => SearchValue::Exact(v),
        ConstantValue::Undetermined {
            reason: search::UndeterminedReason::BudgetExhausted,
            ..
        } => SearchValue::Skipped,
        ConstantValue::Undetermined { at_least, .. } => SearchValue::AtLeast(at_least),
    })
}

fn construction_checks(prediction: &Prediction, weights: &WeightSet) -> Vec<ConstructionCheck> {
    let n = prediction.n.get();
    let mut out = Vec::new();
    let mut push = |name: &str, built: Result<Sequence>, mode: Mode| {
        let check = match built {
            Ok(seq) => ConstructionCheck {
                name: name.to_string(),
                pass: engine::is_blocking(&seq, weights, mode).unwrap_or(false),
                sequence: seq.into_terms(),
            },
            Err(_) => ConstructionCheck {
                name: name.to_string(),
                pass: false,
                sequence: Vec::new(),
            },
        };
        out.push(check);
    };
    match prediction.case {
        CaseTag::V2Odd => push(
            "unit_singleton",
            Sequence::new(prediction.n, vec![1]),
            Mode::Subsequence,
        ),
        CaseTag::EvenSquare => push(
            "even_square",
            constructions::construct_even_square_witness(n),
            Mode::Subsequence,
        ),
        CaseTag::NonSquareV2Even if n % 2 == 1 => push(
            "nonsquare_odd",
            constructions::construct_nonsquare_odd_witness(n),
            Mode::Subsequence,
        ),
        CaseTag::NonSquareV2Even => push(
            "even_v2_pair",
            constructions::construct_even_v2_pair_witness(n),
            Mode::Subsequence,
        ),
        _ => {
            push(
                "odd_square_d",
                constructions::construct_odd_square_d_witness(n),
                Mode::Subsequence,
            );
            if prediction.case == CaseTag::OddSquareSquarefreeRadicalSquared {
                push(
                    "consecutive",
                    constructions::construct_consecutive_witness(n),
                    Mode::Consecutive,
                );
            }
        }
    }
    out
}

fn lemma(name: &str, params: String, outcome: Result<bool>) -> LemmaCheck {
    LemmaCheck {
        name: name.to_string(),
        params,
        pass: outcome.unwrap_or(false),
    }
}

fn lemma_checks(prediction: &Prediction, effort: Effort) -> Result<Vec<LemmaCheck>> {
    let n = prediction.n.get();
    let fact = factorize(n)?;
    let mut out = vec![lemma(
        "size_formula",
        format!("n={n}"),
        checks::check_size_formula(n),
    )];
    if n <= MEMBERSHIP_LIMIT {
        out.push(lemma(
            "crt_membership",
            format!("n={n}"),
            checks::check_crt_membership(n),
        ));
    }
    let lift_samples = match effort {
        Effort::Fast => 200,
        Effort::Full => 2000,
    };
    for &(p, r) in fact.factors() {
        let q = p.pow(r);
        if q <= MEMBERSHIP_LIMIT {
            out.push(lemma(
                "square_partition",
                format!("p={p},r={r}"),
                checks::check_square_partition(p, r),
            ));
        }
        if p == 2 {
            continue;
        }
        out.push(lemma(
            "non_qp_pair",
            format!("p={p},r={r}"),
            constructions::find_non_qp_pair(p, r).map(|_| true),
        ));
        if q <= LIFT_LIMIT {
            out.push(lemma(
                "square_lift",
                format!("p={p},r={r}"),
                checks::check_square_lift(p, r, lift_samples, n).map(|c| c.pass()),
            ));
        }
        if prediction.case.is_odd_square() {
            let mut exponents = vec![1];
            if r > 1 && q <= COVERAGE_LIMIT {
                exponents.push(r);
            }
            for e in exponents {
                let params = format!("p={p},r={e}");
                out.push(lemma(
                    "coverage_zero_augmented",
                    params.clone(),
                    checks::verify_coverage_lemma(p, e, 3, CoverageVariant::WithZeroAugment),
                ));
                if p >= 7 {
                    out.push(lemma(
                        "coverage_three_units",
                        params,
                        checks::verify_coverage_lemma(p, e, 3, CoverageVariant::AllUnits),
                    ));
                } else if p == 5 {
                    out.push(lemma(
                        "coverage_four_units",
                        params,
                        checks::verify_coverage_lemma(p, e, 4, CoverageVariant::AllUnits),
                    ));
                }
            }
        }
        if p <= 13 {
            out.push(lemma(
                "consecutive_qp",
                format!("p={p}"),
                consecutive_qp_is_three(p),
            ));
        }
    }
    if n.is_multiple_of(2) {
        out.push(lemma(
            "consecutive_z2",
            "p=2".into(),
            consecutive_z2_is_two(),
        ));
    }
    Ok(out)
}

/// `C_{Q_p} = 3` by exact search.
pub(crate) fn consecutive_qp_is_three(p: u64) -> Result<bool> {
    let w = WeightSet::q_p(p)?;
    let r = search::consecutive_constant(&w, None, &SearchConfig::sequential().with_budget(None))?;
    Ok(r.exact() == Some(3))
}

/// `C(2) = 2`: over `Z_2` with weights `{1}`.
pub(crate) fn consecutive_z2_is_two() -> Result<bool> {
    let w = WeightSet::custom(Modulus::new(2)?, &[1])?;
    let r = search::consecutive_constant(&w, None, &SearchConfig::sequential().with_budget(None))?;
    Ok(r.exact() == Some(2))
}

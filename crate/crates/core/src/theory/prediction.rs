use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_perfect_square, v_p, Modulus};
use crate::error::Result;

/// Which closed-form case a modulus falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// Non-square with `v_2(n)` odd.
    V2Odd,
    EvenSquare,
    /// Non-square with `v_2(n)` even (possibly zero).
    NonSquareV2Even,
    /// `n = m^2` with `m` odd and squarefree.
    OddSquareSquarefreeRadicalSquared,
    /// Odd square divisible by `p^4` for some prime `p >= 7`.
    OddSquareP4Big,
    /// Odd square divisible by `5^4` (and by no `p^4` with `p >= 7`).
    OddSquare5to4,
    OddSquareOther,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::V2Odd => "V2Odd",
            CaseTag::EvenSquare => "EvenSquare",
            CaseTag::NonSquareV2Even => "NonSquareV2Even",
            CaseTag::OddSquareSquarefreeRadicalSquared => "OddSquareSquarefreeRadicalSquared",
            CaseTag::OddSquareP4Big => "OddSquareP4Big",
            CaseTag::OddSquare5to4 => "OddSquare5to4",
            CaseTag::OddSquareOther => "OddSquareOther",
        }
    }

    pub fn is_odd_square(self) -> bool {
        matches!(
            self,
            CaseTag::OddSquareSquarefreeRadicalSquared
                | CaseTag::OddSquareP4Big
                | CaseTag::OddSquare5to4
                | CaseTag::OddSquareOther
        )
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed interval `[lo, hi]`; exact when `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bound {
    pub lo: u64,
    pub hi: u64,
}

impl Bound {
    pub fn exact(v: u64) -> Self {
        Bound { lo: v, hi: v }
    }

    pub fn range(lo: u64, hi: u64) -> Self {
        assert!(lo <= hi, "empty bound [{lo}, {hi}]");
        Bound { lo, hi }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: u64) -> bool {
        (self.lo..=self.hi).contains(&v)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prediction {
    pub n: Modulus,
    pub case: CaseTag,
    /// `D_{S(n)*}`, determined in every case.
    pub d: u64,
    /// `C_{S(n)*}`.
    pub c: Bound,
}

/// Predicted `D_{S(n)*}` and `C_{S(n)*}`.
///
/// Cases are tried in a fixed order: `V2Odd`, `EvenSquare`,
/// `NonSquareV2Even`, then the odd-square cases from most to least specific.
pub fn predicted_constants(n: u64) -> Result<Prediction> {
    let modulus = Modulus::new(n)?;
    let square = is_perfect_square(n);
    let v2 = v_p(n, 2)?;
    let (case, d, c) = if !square && v2 % 2 == 1 {
        (CaseTag::V2Odd, 2, Bound::exact(2))
    } else if square && v2 > 0 {
        (CaseTag::EvenSquare, 4, Bound::exact(4))
    } else if !square {
        (CaseTag::NonSquareV2Even, 3, Bound::exact(3))
    } else {
        let fact = factorize(n)?;
        let exps = fact.factors();
        if exps.iter().all(|&(_, r)| r == 2) {
            (
                CaseTag::OddSquareSquarefreeRadicalSquared,
                5,
                Bound::exact(9),
            )
        } else if exps.iter().any(|&(p, r)| p >= 7 && r >= 4) {
            (CaseTag::OddSquareP4Big, 5, Bound::exact(5))
        } else if fact.exponent_of(5) >= 4 {
            (CaseTag::OddSquare5to4, 5, Bound::range(5, 7))
        } else {
            (CaseTag::OddSquareOther, 5, Bound::range(5, 9))
        }
    };
    Ok(Prediction {
        n: modulus,
        case,
        d,
        c,
    })
}

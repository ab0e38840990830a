//! Exact computation of `D_A(n)` and `C_A(n)` by depth-first search for
//! blocking sequences, i.e. sequences without an `A`-weighted zero-sum
//! subsequence of the relevant kind.
//!
//! The search state is a single sum-set:
//!
//! * Davenport: all nonempty weighted subsequence sums of the prefix. Terms
//!   are enumerated in non-decreasing order since the property is invariant
//!   under permutation.
//! * Consecutive: the union of the sum-sets of all windows ending at the last
//!   term. Minkowski sums distribute over unions, so appending `x` maps this
//!   union `E` to `A x ∪ (E ⊕ A x)` without tracking windows separately.
//!
//! A candidate term `x` is admissible iff `A x` avoids `{0} ∪ -E`. Since the
//! future of a branch depends only on its state, dead states are memoized.
//! The first term is scaled by a unit to `gcd(x, n)`, the least element of
//! its orbit under `U(n)`.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, Modulus};
use crate::bitset::BitSet;
use crate::engine::{self, Mode, Sequence, WeightSet};
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Environment variable overriding [`DEFAULT_NODE_BUDGET`].
pub const NODE_BUDGET_ENV: &str = "ZSWC_NODE_BUDGET";

const MEMO_LIMIT: usize = 1 << 22;
const MULT_TABLE_LIMIT: u64 = 8192;
const FLUSH_EVERY: u64 = 1024;

/// `D_A` (any subsequence) or `C_A` (consecutive terms).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantKind {
    Davenport,
    Consecutive,
}

impl ConstantKind {
    pub fn mode(self) -> Mode {
        match self {
            ConstantKind::Davenport => Mode::Subsequence,
            ConstantKind::Consecutive => Mode::Consecutive,
        }
    }
}

/// The node budget from `ZSWC_NODE_BUDGET`, falling back to the default.
pub fn node_budget_from_env() -> u64 {
    std::env::var(NODE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub threads: usize,
    pub node_budget: Option<u64>,
    /// Scale the first term to the least element of its unit orbit.
    pub canonicalize: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            node_budget: Some(node_budget_from_env()),
            canonicalize: true,
        }
    }
}

impl SearchConfig {
    /// Single-threaded, reproducible node counts.
    pub fn sequential() -> Self {
        SearchConfig {
            threads: 1,
            ..Default::default()
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn with_canonicalize(mut self, on: bool) -> Self {
        self.canonicalize = on;
        self
    }
}

#[derive(Debug, Clone)]
pub struct ConstantQuery {
    weights: WeightSet,
    kind: ConstantKind,
    cap: u64,
}

impl ConstantQuery {
    /// A query with the default cap `n`.
    pub fn new(weights: WeightSet, kind: ConstantKind) -> Self {
        let cap = weights.modulus().get();
        ConstantQuery { weights, kind, cap }
    }

    pub fn with_cap(mut self, cap: u64) -> Result<Self> {
        let n = self.modulus().get();
        if cap == 0 || cap > n {
            return Err(Error::Domain(format!(
                "cap must lie in [1, {n}], got {cap}"
            )));
        }
        self.cap = cap;
        Ok(self)
    }

    pub fn modulus(&self) -> Modulus {
        self.weights.modulus()
    }

    pub fn weights(&self) -> &WeightSet {
        &self.weights
    }

    pub fn kind(&self) -> ConstantKind {
        self.kind
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockingOutcome {
    Found(Sequence),
    Absent,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UndeterminedReason {
    CapReached,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstantValue {
    Exact(u64),
    /// The search stopped early; the constant is at least `at_least`.
    Undetermined {
        at_least: u64,
        reason: UndeterminedReason,
    },
}

#[derive(Debug, Clone)]
pub struct ConstantResult {
    pub query: ConstantQuery,
    pub value: ConstantValue,
    /// Longest blocking sequence found: length `value - 1` when exact.
    pub extremal: Option<Sequence>,
    pub stats: SearchStats,
}

impl ConstantResult {
    pub fn exact(&self) -> Option<u64> {
        match self.value {
            ConstantValue::Exact(v) => Some(v),
            ConstantValue::Undetermined { .. } => None,
        }
    }
}

/// Looks for a length-`len` sequence over `Z_n` with no `A`-weighted
/// zero-sum subsequence of the given kind.
///
/// The returned sequence is the lexicographically least one in the
/// canonical search space (non-decreasing for Davenport, first term a
/// divisor of `n` when canonicalizing).
pub fn exists_blocking_sequence(
    weights: &WeightSet,
    len: u64,
    kind: ConstantKind,
    config: &SearchConfig,
) -> Result<(BlockingOutcome, SearchStats)> {
    let runner = Runner::new(config)?;
    let start = Instant::now();
    let (outcome, nodes) = runner.blocking(weights, len, kind);
    Ok((
        outcome,
        SearchStats {
            nodes,
            elapsed: start.elapsed(),
        },
    ))
}

pub fn davenport_constant(
    weights: &WeightSet,
    cap: Option<u64>,
    config: &SearchConfig,
) -> Result<ConstantResult> {
    compute_constant(
        query_with_cap(weights, ConstantKind::Davenport, cap)?,
        config,
    )
}

pub fn consecutive_constant(
    weights: &WeightSet,
    cap: Option<u64>,
    config: &SearchConfig,
) -> Result<ConstantResult> {
    compute_constant(
        query_with_cap(weights, ConstantKind::Consecutive, cap)?,
        config,
    )
}

fn query_with_cap(
    weights: &WeightSet,
    kind: ConstantKind,
    cap: Option<u64>,
) -> Result<ConstantQuery> {
    let q = ConstantQuery::new(weights.clone(), kind);
    match cap {
        Some(c) => q.with_cap(c),
        None => Ok(q),
    }
}

/// Smallest `k <= cap` such that no blocking sequence of length `k` exists.
pub fn compute_constant(query: ConstantQuery, config: &SearchConfig) -> Result<ConstantResult> {
    let runner = Runner::new(config)?;
    let start = Instant::now();
    let mut nodes = 0;
    let mut extremal: Option<Sequence> = None;
    let mut value = ConstantValue::Undetermined {
        at_least: query.cap + 1,
        reason: UndeterminedReason::CapReached,
    };
    for len in 1..=query.cap {
        let (outcome, used) = runner.blocking(&query.weights, len, query.kind);
        nodes += used;
        match outcome {
            BlockingOutcome::Found(seq) => extremal = Some(seq),
            BlockingOutcome::Absent => {
                value = ConstantValue::Exact(len);
                break;
            }
            BlockingOutcome::BudgetExhausted => {
                value = ConstantValue::Undetermined {
                    at_least: len,
                    reason: UndeterminedReason::BudgetExhausted,
                };
                break;
            }
        }
    }
    if let Some(seq) = &extremal {
        debug_assert!(engine::is_blocking(seq, &query.weights, query.kind.mode())?);
    }
    Ok(ConstantResult {
        query,
        value,
        extremal,
        stats: SearchStats {
            nodes,
            elapsed: start.elapsed(),
        },
    })
}

/// Weight families for batch computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightFamily {
    NonzeroSquares,
    UnitSquares,
    Units,
    /// Quadratic residues; only defined when `n` is an odd prime.
    Qp,
    Custom(Vec<u64>),
}

impl WeightFamily {
    pub fn weights_for(&self, n: u64) -> Result<WeightSet> {
        let m = Modulus::new(n)?;
        match self {
            WeightFamily::NonzeroSquares => WeightSet::nonzero_squares(m),
            WeightFamily::UnitSquares => WeightSet::unit_squares(m),
            WeightFamily::Units => WeightSet::units(m),
            WeightFamily::Qp => WeightSet::q_p(n),
            WeightFamily::Custom(values) => WeightSet::custom(m, values),
        }
    }
}

/// One constant per modulus. Entries are computed independently (in
/// parallel when `config.threads > 1`) and failures are reported per entry.
pub fn constant_table(
    moduli: &[u64],
    family: &WeightFamily,
    kind: ConstantKind,
    config: &SearchConfig,
) -> Vec<(u64, Result<ConstantResult>)> {
    let inner = config.clone().with_threads(1);
    let run = |&n: &u64| {
        let result = family
            .weights_for(n)
            .and_then(|w| compute_constant(ConstantQuery::new(w, kind), &inner));
        (n, result)
    };
    if config.threads <= 1 {
        return moduli.iter().map(run).collect();
    }
    match rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
    {
        Ok(pool) => pool.install(|| moduli.par_iter().map(run).collect()),
        Err(_) => moduli.iter().map(run).collect(),
    }
}

struct Runner {
    pool: Option<rayon::ThreadPool>,
    budget: Option<u64>,
    canonicalize: bool,
}

impl Runner {
    fn new(config: &SearchConfig) -> Result<Self> {
        let pool = if config.threads > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(config.threads)
                    .build()
                    .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Runner {
            pool,
            budget: config.node_budget,
            canonicalize: config.canonicalize,
        })
    }

    fn blocking(
        &self,
        weights: &WeightSet,
        len: u64,
        kind: ConstantKind,
    ) -> (BlockingOutcome, u64) {
        let m = weights.modulus();
        if len > m.get() {
            return (BlockingOutcome::Absent, 0);
        }
        if len == 0 {
            return (BlockingOutcome::Found(Sequence::empty(m)), 0);
        }
        let space = Space::new(weights, kind, len as usize, self.canonicalize);
        let shared = Shared::new(self.budget);
        match &self.pool {
            None => {
                let mut worker = Worker::new(&space, &shared, 0);
                let mut prefix = Vec::with_capacity(len as usize);
                let root = BitSet::new(space.n);
                let res = worker.dfs(&root, 0, &mut prefix);
                worker.flush();
                let nodes = shared.nodes.load(Ordering::Relaxed);
                (space.outcome(res, prefix, &shared), nodes)
            }
            Some(pool) => pool.install(|| self.blocking_parallel(&space, &shared)),
        }
    }

    fn blocking_parallel(&self, space: &Space, shared: &Shared) -> (BlockingOutcome, u64) {
        // Fan out over the first two levels, in lexicographic order.
        let depth = space.len.min(2);
        let mut items: Vec<(Vec<u64>, BitSet)> = vec![(Vec::new(), BitSet::new(space.n))];
        let mut expansion_nodes = 0;
        for _ in 0..depth {
            let mut next = Vec::new();
            for (prefix, state) in &items {
                expansion_nodes += 1;
                let last = prefix.last().copied().unwrap_or(0);
                for (x, child) in space.children(state, prefix.len(), last) {
                    let mut p = prefix.clone();
                    p.push(x);
                    next.push((p, child));
                }
            }
            items = next;
        }
        shared.nodes.fetch_add(expansion_nodes, Ordering::Relaxed);
        if depth == space.len {
            let nodes = shared.nodes.load(Ordering::Relaxed);
            return match items.into_iter().next() {
                Some((prefix, _)) => (BlockingOutcome::Found(space.sequence(prefix)), nodes),
                None => (BlockingOutcome::Absent, nodes),
            };
        }
        let results: Vec<Option<Vec<u64>>> = items
            .par_iter()
            .enumerate()
            .map(|(idx, (prefix, state))| {
                if shared.cancelled(idx) {
                    return None;
                }
                let mut worker = Worker::new(space, shared, idx);
                let mut path = prefix.clone();
                let res = worker.dfs(state, prefix.len(), &mut path);
                worker.flush();
                match res {
                    Dfs::Found => {
                        shared.best.fetch_min(idx, Ordering::Relaxed);
                        Some(path)
                    }
                    _ => None,
                }
            })
            .collect();
        let nodes = shared.nodes.load(Ordering::Relaxed);
        match results.into_iter().flatten().next() {
            Some(path) => (BlockingOutcome::Found(space.sequence(path)), nodes),
            None if shared.exhausted.load(Ordering::Relaxed) => {
                (BlockingOutcome::BudgetExhausted, nodes)
            }
            None => (BlockingOutcome::Absent, nodes),
        }
    }
}

/// Immutable description of one blocking-sequence search.
struct Space<'a> {
    modulus: Modulus,
    n: usize,
    weights: &'a [u64],
    kind: ConstantKind,
    len: usize,
    first_terms: Vec<u64>,
    mults: Option<Vec<BitSet>>,
}

impl<'a> Space<'a> {
    fn new(weights: &'a WeightSet, kind: ConstantKind, len: usize, canonicalize: bool) -> Self {
        let modulus = weights.modulus();
        let n = modulus.get();
        let first_terms: Vec<u64> = if canonicalize {
            (1..n).filter(|&d| n.is_multiple_of(d)).collect()
        } else {
            (1..n).collect()
        };
        debug_assert!(first_terms.iter().all(|&d| !canonicalize || gcd(d, n) == d));
        let mults = (n <= MULT_TABLE_LIMIT).then(|| {
            (0..n)
                .map(|x| engine::multiples_bits(modulus, x, weights.members()))
                .collect()
        });
        Space {
            modulus,
            n: n as usize,
            weights: weights.members(),
            kind,
            len,
            first_terms,
            mults,
        }
    }

    fn multiples(&self, x: u64) -> std::borrow::Cow<'_, BitSet> {
        match &self.mults {
            Some(t) => std::borrow::Cow::Borrowed(&t[x as usize]),
            None => std::borrow::Cow::Owned(engine::multiples_bits(self.modulus, x, self.weights)),
        }
    }

    fn forbidden(&self, state: &BitSet) -> BitSet {
        let mut f = BitSet::new(self.n);
        f.insert(0);
        for s in state.iter() {
            f.insert(self.modulus.neg(s as u64) as usize);
        }
        f
    }

    fn candidates(&self, depth: usize, last: u64) -> Box<dyn Iterator<Item = u64> + '_> {
        if depth == 0 {
            return Box::new(self.first_terms.iter().copied());
        }
        match self.kind {
            ConstantKind::Davenport => Box::new(last.max(1)..self.n as u64),
            ConstantKind::Consecutive => Box::new(1..self.n as u64),
        }
    }

    fn child(&self, state: &BitSet, mult: &BitSet) -> BitSet {
        let mut next = match self.kind {
            ConstantKind::Davenport => state.clone(),
            ConstantKind::Consecutive => BitSet::new(self.n),
        };
        next.union_with(mult);
        if !state.is_empty() {
            engine::minkowski_into(state, mult, &mut next);
        }
        next
    }

    fn children(&self, state: &BitSet, depth: usize, last: u64) -> Vec<(u64, BitSet)> {
        let forbidden = self.forbidden(state);
        self.candidates(depth, last)
            .filter_map(|x| {
                let mult = self.multiples(x);
                (!mult.intersects(&forbidden)).then(|| (x, self.child(state, &mult)))
            })
            .collect()
    }

    fn sequence(&self, terms: Vec<u64>) -> Sequence {
        Sequence::new(self.modulus, terms).expect("search terms are reduced")
    }

    fn outcome(&self, res: Dfs, prefix: Vec<u64>, shared: &Shared) -> BlockingOutcome {
        match res {
            Dfs::Found => BlockingOutcome::Found(self.sequence(prefix)),
            Dfs::Dead => BlockingOutcome::Absent,
            Dfs::Stopped if shared.exhausted.load(Ordering::Relaxed) => {
                BlockingOutcome::BudgetExhausted
            }
            Dfs::Stopped => BlockingOutcome::Absent,
        }
    }
}

struct Shared {
    nodes: AtomicU64,
    budget: Option<u64>,
    exhausted: AtomicBool,
    best: AtomicUsize,
}

impl Shared {
    fn new(budget: Option<u64>) -> Self {
        Shared {
            nodes: AtomicU64::new(0),
            budget,
            exhausted: AtomicBool::new(false),
            best: AtomicUsize::new(usize::MAX),
        }
    }

    fn cancelled(&self, item: usize) -> bool {
        self.exhausted.load(Ordering::Relaxed) || self.best.load(Ordering::Relaxed) < item
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dfs {
    Found,
    Dead,
    Stopped,
}

struct Worker<'s, 'a> {
    space: &'s Space<'a>,
    shared: &'s Shared,
    item: usize,
    pending: u64,
    flush_every: u64,
    dead: HashSet<(BitSet, u64, usize)>,
}

impl<'s, 'a> Worker<'s, 'a> {
    fn new(space: &'s Space<'a>, shared: &'s Shared, item: usize) -> Self {
        let flush_every = shared
            .budget
            .map_or(FLUSH_EVERY, |b| (b / 64).clamp(1, FLUSH_EVERY));
        Worker {
            space,
            shared,
            item,
            pending: 0,
            flush_every,
            dead: HashSet::new(),
        }
    }

    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if let Some(b) = self.shared.budget {
            if total > b {
                self.shared.exhausted.store(true, Ordering::Relaxed);
            }
        }
    }

    fn dfs(&mut self, state: &BitSet, depth: usize, path: &mut Vec<u64>) -> Dfs {
        if depth == self.space.len {
            return Dfs::Found;
        }
        self.pending += 1;
        if self.pending >= self.flush_every {
            self.flush();
            if self.shared.cancelled(self.item) {
                return Dfs::Stopped;
            }
        }
        let last = path.last().copied().unwrap_or(0);
        let memo_last = match self.space.kind {
            ConstantKind::Davenport => last,
            ConstantKind::Consecutive => 0,
        };
        let remaining = self.space.len - depth;
        if depth > 0 && self.dead.contains(&(state.clone(), memo_last, remaining)) {
            return Dfs::Dead;
        }
        let forbidden = self.space.forbidden(state);
        let candidates: Vec<u64> = self.space.candidates(depth, last).collect();
        for x in candidates {
            let mult = self.space.multiples(x);
            if mult.intersects(&forbidden) {
                continue;
            }
            let child = self.space.child(state, &mult);
            path.push(x);
            match self.dfs(&child, depth + 1, path) {
                Dfs::Found => return Dfs::Found,
                Dfs::Stopped => return Dfs::Stopped,
                Dfs::Dead => {}
            }
            path.pop();
        }
        if depth > 0 && self.dead.len() < MEMO_LIMIT {
            self.dead.insert((state.clone(), memo_last, remaining));
        }
        Dfs::Dead
    }
}

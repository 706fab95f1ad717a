//! Branch-and-bound over the one-contact spaces of FM-tetrahedra.
//!
//! A case fixes the type of the tetrahedron and one tight edge. Its initial
//! block bounds every other edge XY by [r_X + r_Y, r_X + r_Y + 2r]. Blocks
//! are classified, and the undecided ones are halved until every leaf is
//! discarded.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use thiserror::Error;

use crate::geometry::{density, edge_index, small_radius, EdgeLengths, Radii, TypeTag, EDGE_VERTICES};
use crate::interval::Interval;
use crate::local_opt::{published_epsilon, OptimalTetra};
use crate::support_sphere::{is_fm_block_with, FmVerdict};

pub const DEFAULT_MAX_DEPTH: u32 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TightKind {
    K11,
    K1r,
    Krr,
}

impl TightKind {
    fn large_ends(self) -> usize {
        match self {
            TightKind::K11 => 2,
            TightKind::K1r => 1,
            TightKind::Krr => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TightKind::K11 => "11",
            TightKind::K1r => "1r",
            TightKind::Krr => "rr",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TetraCase {
    pub tag: TypeTag,
    pub kind: TightKind,
    /// Index of the tight edge in (ab, ac, ad, bc, bd, cd).
    pub tight_edge: usize,
    pub radii: Radii,
    /// Density of the optimum of this type; blocks strictly below its lower
    /// endpoint are hollow.
    pub bound: Interval,
}

const CASE_LIST: [(TypeTag, TightKind); 9] = [
    (TypeTag::T1111, TightKind::K11),
    (TypeTag::T111r, TightKind::K11),
    (TypeTag::T111r, TightKind::K1r),
    (TypeTag::T11rr, TightKind::K11),
    (TypeTag::T11rr, TightKind::K1r),
    (TypeTag::T11rr, TightKind::Krr),
    (TypeTag::T1rrr, TightKind::K1r),
    (TypeTag::T1rrr, TightKind::Krr),
    (TypeTag::Trrrr, TightKind::Krr),
];

impl TetraCase {
    pub fn new(tag: TypeTag, kind: TightKind) -> Option<TetraCase> {
        let radii = Radii::of_type(tag);
        let n = tag.large_count();
        // vertex i is large iff i < n, radii being sorted
        let tight_edge = EDGE_VERTICES
            .iter()
            .position(|&(i, j)| usize::from(i < n) + usize::from(j < n) == kind.large_ends())?;
        Some(TetraCase { tag, kind, tight_edge, radii, bound: OptimalTetra::of(tag).delta })
    }

    pub fn all() -> Vec<TetraCase> {
        CASE_LIST.iter().map(|&(t, k)| TetraCase::new(t, k).expect("listed case exists")).collect()
    }

    pub fn name(&self) -> String {
        format!("{}/{}", self.tag, self.kind.name())
    }

    pub fn initial_block(&self) -> Block {
        let extra = Interval::new(0.0, (small_radius() * 2.0).hi());
        let sums = self.radii.edge_sums();
        let edges = std::array::from_fn(|i| {
            if i == self.tight_edge {
                // a point for 1+1, the narrowest enclosure otherwise
                sums[i]
            } else {
                Interval::new(sums[i].lo(), (sums[i] + extra).hi())
            }
        });
        Block { edges, depth: 0 }
    }
}

impl fmt::Display for TetraCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for TetraCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TetraCase::all()
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<String> = TetraCase::all().iter().map(|c| c.name()).collect();
                format!("unknown case `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Block {
    pub edges: EdgeLengths,
    pub depth: u32,
}

impl Block {
    /// Product of the edge widths.
    pub fn volume(&self) -> f64 {
        self.edges.iter().map(|e| e.hi() - e.lo()).filter(|w| *w > 0.0).product()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    NearOptimal,
    NotFm,
    Hollow,
    Split,
}

impl Class {
    pub fn code(self) -> i32 {
        match self {
            Class::NearOptimal => 0,
            Class::NotFm => 1,
            Class::Hollow => 2,
            Class::Split => -1,
        }
    }
}

/// Per-case classification data.
#[derive(Clone, Debug)]
pub struct Classifier {
    pub case: TetraCase,
    small: Interval,
    /// For each radius-preserving relabelling, the block edge bounds that
    /// place the block inside the certified neighbourhood: per block edge,
    /// the required lower bound (or −∞) and upper bound.
    windows: Vec<[(f64, f64); 6]>,
}

impl Classifier {
    pub fn new(case: TetraCase) -> Classifier {
        let opt = OptimalTetra::of(case.tag);
        let (n, _) = published_epsilon(case.tag);
        let eps = Interval::ONE / Interval::point(n as f64);
        let mut windows: Vec<[(f64, f64); 6]> = Vec::new();
        for perm in permutations() {
            // certificate vertex v sits at block vertex perm[v]
            if (0..4).any(|v| opt.radii.0[v] != case.radii.0[perm[v]]) {
                continue;
            }
            let mut w = [(f64::NEG_INFINITY, f64::INFINITY); 6];
            for (k, &(i, j)) in EDGE_VERTICES.iter().enumerate() {
                let target = edge_index(perm[i], perm[j]);
                let upper = (opt.edges[k] + eps).lo();
                // a tight edge cannot be shorter than its optimum
                let lower = if opt.stretched[k] { (opt.edges[k] - eps).hi() } else { f64::NEG_INFINITY };
                w[target] = (lower, upper);
            }
            if !windows.contains(&w) {
                windows.push(w);
            }
        }
        Classifier { case, small: small_radius(), windows }
    }

    pub fn near_optimal(&self, b: &Block) -> bool {
        self.windows
            .iter()
            .any(|w| (0..6).all(|i| b.edges[i].lo() >= w[i].0 && b.edges[i].hi() <= w[i].1))
    }

    pub fn classify(&self, b: &Block) -> Class {
        if self.near_optimal(b) {
            return Class::NearOptimal;
        }
        if is_fm_block_with(&b.edges, &self.case.radii, self.small) == FmVerdict::NotFm {
            return Class::NotFm;
        }
        if density(&b.edges, &self.case.radii).hi() < self.case.bound.lo() {
            return Class::Hollow;
        }
        Class::Split
    }
}

fn permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|v| p.contains(&v)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExploreError {
    #[error("maximum depth {max_depth} reached at block {block:?}")]
    DepthExhausted { max_depth: u32, block: Block },
    #[error("block {0:?} cannot be split")]
    Unsplittable(Block),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Bisects the widest splittable edge, lowest index first among ties.
pub fn halve_block(b: &Block) -> Result<(Block, Block), ExploreError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, e) in b.edges.iter().enumerate() {
        if !e.is_splittable() {
            continue;
        }
        let w = e.width();
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((i, w));
        }
    }
    let (i, _) = best.ok_or(ExploreError::Unsplittable(*b))?;
    let (lo, hi) = b.edges[i].bisect().map_err(|_| ExploreError::Unsplittable(*b))?;
    let mut left = Block { edges: b.edges, depth: b.depth + 1 };
    let mut right = left;
    left.edges[i] = lo;
    right.edges[i] = hi;
    Ok((left, right))
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExplorationStats {
    pub near_optimal: u64,
    pub not_fm: u64,
    pub hollow: u64,
    pub splits: u64,
    pub max_depth: u32,
    pub seconds: f64,
}

impl ExplorationStats {
    pub fn discarded(&self) -> u64 {
        self.near_optimal + self.not_fm + self.hollow
    }

    /// Counts only, for comparisons across runs.
    pub fn counts(&self) -> (u64, u64, u64, u64, u32) {
        (self.near_optimal, self.not_fm, self.hollow, self.splits, self.max_depth)
    }

    pub fn summary_line(&self, case: &TetraCase) -> String {
        format!(
            "case={} discarded_near={} discarded_notfm={} discarded_hollow={} max_depth={} seconds={:.3}",
            case.name(),
            self.near_optimal,
            self.not_fm,
            self.hollow,
            self.max_depth,
            self.seconds
        )
    }
}

struct Shared<'a> {
    classifier: Classifier,
    max_depth: u32,
    counts: [AtomicU64; 4],
    deepest: AtomicU32,
    abort: AtomicBool,
    failure: Mutex<Option<ExploreError>>,
    observer: &'a (dyn Fn(&Block, Class) + Sync),
}

impl Shared<'_> {
    fn fail(&self, err: ExploreError) {
        self.abort.store(true, Ordering::SeqCst);
        let mut slot = self.failure.lock().expect("failure slot");
        if slot.is_none() {
            *slot = Some(err);
        }
    }

    fn visit(&self, b: Block) {
        if self.abort.load(Ordering::Relaxed) {
            return;
        }
        self.deepest.fetch_max(b.depth, Ordering::Relaxed);
        let class = self.classifier.classify(&b);
        (self.observer)(&b, class);
        let slot = match class {
            Class::NearOptimal => 0,
            Class::NotFm => 1,
            Class::Hollow => 2,
            Class::Split => 3,
        };
        self.counts[slot].fetch_add(1, Ordering::Relaxed);
        if class != Class::Split {
            return;
        }
        if b.depth >= self.max_depth {
            self.fail(ExploreError::DepthExhausted { max_depth: self.max_depth, block: b });
            return;
        }
        match halve_block(&b) {
            Ok((l, r)) => {
                rayon::join(|| self.visit(l), || self.visit(r));
            }
            Err(e) => self.fail(e),
        }
    }
}

/// Runs the case to exhaustion on `max_workers` threads.
pub fn explore(case: &TetraCase, max_workers: usize, max_depth: u32) -> Result<ExplorationStats, ExploreError> {
    explore_observed(case, max_workers, max_depth, &|_, _| {})
}

/// As [`explore`], calling `observer` on every classified block.
pub fn explore_observed(
    case: &TetraCase,
    max_workers: usize,
    max_depth: u32,
    observer: &(dyn Fn(&Block, Class) + Sync),
) -> Result<ExplorationStats, ExploreError> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(max_workers.max(1))
        .stack_size(64 << 20)
        .build()
        .map_err(|e| ExploreError::Pool(e.to_string()))?;
    let shared = Shared {
        classifier: Classifier::new(*case),
        max_depth,
        counts: Default::default(),
        deepest: AtomicU32::new(0),
        abort: AtomicBool::new(false),
        failure: Mutex::new(None),
        observer,
    };
    pool.install(|| shared.visit(case.initial_block()));
    if let Some(err) = shared.failure.lock().expect("failure slot").take() {
        return Err(err);
    }
    let c = |i: usize| shared.counts[i].load(Ordering::SeqCst);
    Ok(ExplorationStats {
        near_optimal: c(0),
        not_fm: c(1),
        hollow: c(2),
        splits: c(3),
        max_depth: shared.deepest.load(Ordering::SeqCst),
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_cases() {
        let names: Vec<(String, usize)> = TetraCase::all().iter().map(|c| (c.name(), c.tight_edge)).collect();
        let expected = [
            ("1111/11", 0),
            ("111r/11", 0),
            ("111r/1r", 2),
            ("11rr/11", 0),
            ("11rr/1r", 1),
            ("11rr/rr", 5),
            ("1rrr/1r", 0),
            ("1rrr/rr", 3),
            ("rrrr/rr", 0),
        ];
        for ((n, t), (en, et)) in names.iter().zip(expected) {
            assert_eq!((n.as_str(), *t), (en, et));
        }
        assert!("bogus".parse::<TetraCase>().is_err());
        assert!(TetraCase::new(TypeTag::T1111, TightKind::K1r).is_none());
    }

    #[test]
    fn initial_blocks() {
        let r = small_radius();
        let b = "1111/11".parse::<TetraCase>().unwrap().initial_block();
        assert_eq!(b.edges[0], Interval::point(2.0));
        for e in &b.edges[1..] {
            assert_eq!(e.lo(), 2.0);
            assert!(e.contains_literal("2.8284271247461900976").unwrap());
            assert!(e.hi() <= (r * 2.0 + 2.0).hi());
        }
        let b = "rrrr/rr".parse::<TetraCase>().unwrap().initial_block();
        assert_eq!(b.edges[0], r * 2.0);
        assert!(b.edges[0].width() < 1e-15);
        for e in &b.edges[1..] {
            assert!(e.contains(2.0 * r.mid()) && e.contains(4.0 * r.mid()));
        }
        let c = "111r/1r".parse::<TetraCase>().unwrap();
        let b = c.initial_block();
        assert_eq!(b.edges[2], r + 1.0);
        assert!(b.edges[2].width() < 1e-15);
        for i in [0, 1, 3] {
            assert_eq!(b.edges[i].lo(), 2.0);
        }
        for i in [4, 5] {
            assert!(b.edges[i].contains(1.0 + r.mid()) && b.edges[i].contains(1.0 + 3.0 * r.mid()));
        }
    }

    #[test]
    fn halving_rules() {
        let b = "1111/11".parse::<TetraCase>().unwrap().initial_block();
        let (l, r) = halve_block(&b).unwrap();
        assert_eq!(l.edges[1].hi(), r.edges[1].lo());
        assert_eq!(l.edges[1].hull(r.edges[1]), b.edges[1]);
        assert_eq!(l.depth, 1);

        let widths = [0.0, 0.1, 0.2, 0.1, 0.1, 0.1];
        let block = Block { edges: widths.map(|w| Interval::new(2.0, 2.0 + w)), depth: 3 };
        let (l, _) = halve_block(&block).unwrap();
        assert!(l.edges[2].width() < 0.2 && l.edges[1] == block.edges[1]);

        let flat = Block { edges: [Interval::point(2.0); 6], depth: 0 };
        assert!(halve_block(&flat).is_err());
    }

    #[test]
    fn classification_examples() {
        let case: TetraCase = "1111/11".parse().unwrap();
        let cls = Classifier::new(case);
        let near = Block { edges: std::array::from_fn(|i| if i == 0 { Interval::point(2.0) } else { Interval::new(2.0, 2.01) }), depth: 0 };
        assert_eq!(cls.classify(&near), Class::NearOptimal);

        let top = (small_radius() * 2.0 + 2.0).hi();
        let pinned = Block { edges: std::array::from_fn(|i| if i == 0 { Interval::point(2.0) } else { Interval::point(top) }), depth: 0 };
        assert_eq!(cls.classify(&pinned), Class::NotFm);

        // support radius about 0.32 < r, density about 0.61
        let far = Block {
            edges: std::array::from_fn(|i| if i == 0 { Interval::point(2.0) } else { Interval::new(2.2, 2.201) }),
            depth: 0,
        };
        assert_eq!(cls.classify(&far), Class::Hollow);
        assert_eq!(cls.classify(&case.initial_block()), Class::Split);
    }

    #[test]
    fn near_optimal_windows_follow_relabelling() {
        // T* of 111r lies in case 111r/11 with ab tight; its stretched edge
        // appears at another position.
        let case: TetraCase = "111r/11".parse().unwrap();
        let cls = Classifier::new(case);
        let opt = OptimalTetra::of(TypeTag::T111r);
        let long = opt.edges[5];
        let one_r = small_radius() + 1.0;
        let two = Interval::point(2.0);
        let thin = |x: Interval| Interval::new(x.lo(), x.hi() + 1e-4);
        // A, B, C unit with ac stretched, D small
        let edges = [two, thin(long), thin(one_r), thin(two), thin(one_r), thin(one_r)];
        assert!(cls.near_optimal(&Block { edges, depth: 0 }));
    }

    #[test]
    fn summary_line_format() {
        let case: TetraCase = "1111/11".parse().unwrap();
        let stats = ExplorationStats { near_optimal: 1, not_fm: 2, hollow: 3, splits: 5, max_depth: 7, seconds: 0.5 };
        assert_eq!(
            stats.summary_line(&case),
            "case=1111/11 discarded_near=1 discarded_notfm=2 discarded_hollow=3 max_depth=7 seconds=0.500"
        );
    }

    #[test]
    fn shallow_depth_limit_fails_loudly() {
        let case: TetraCase = "1111/11".parse().unwrap();
        match explore(&case, 1, 1) {
            Err(ExploreError::DepthExhausted { max_depth, block }) => {
                assert_eq!(max_depth, 1);
                assert!(block.depth >= 1);
            }
            other => panic!("{other:?}"),
        }
    }
}

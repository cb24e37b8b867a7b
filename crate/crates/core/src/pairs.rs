//! Proper pairs of oriented prime segments, their geometric classification,
//! and the counts `q`, `p` and `t₂`.

use std::collections::BTreeMap;
use std::hash::Hash;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet, FxHasher};

use crate::error::{Error, Result};
use crate::geometry::{
    in_convex_position, on_segment, orient, within_unit_of_line, OrientedSegment, Orientation,
    Point, Segment,
};
use crate::threshold::{
    enumerate_threshold, is_threshold, oriented_prime_segments, segment_value,
    GridDims, GridFunction,
};
use crate::GridPoint;

/// Cap on `m·n` for [`count_proper_pairs`].
pub const PROPER_PAIR_LIMIT: u64 = 256;
/// Cap on `m·n` for [`count_convex_position_pairs`].
pub const CONVEX_PAIR_LIMIT: u64 = 1024;
/// Cap on `m·n` for [`enumerate_two_threshold`] and [`count_two_threshold`].
pub const TWO_THRESHOLD_LIMIT: u64 = 144;
/// Violations kept verbatim in a report; the rest are only counted.
const KEPT_VIOLATIONS: usize = 20;

type Seg = OrientedSegment<i32>;

/// Unordered pair of oriented segments, stored with `s1 <= s2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentPair {
    pub s1: Seg,
    pub s2: Seg,
}

impl SegmentPair {
    pub fn new(s1: Seg, s2: Seg) -> Self {
        if s1 <= s2 {
            SegmentPair { s1, s2 }
        } else {
            SegmentPair { s1: s2, s2: s1 }
        }
    }

    /// Whether the two segments have an endpoint in common.
    pub fn shares_endpoint(&self) -> bool {
        let (a, b, c, d) = self.points();
        a == c || a == d || b == c || b == d
    }

    /// `(A, B, C, D)` for `s1 = A -> B`, `s2 = C -> D`.
    #[inline(always)]
    pub fn points(&self) -> (GridPoint, GridPoint, GridPoint, GridPoint) {
        (self.s1.head, self.s1.tail, self.s2.head, self.s2.tail)
    }
}

/// Geometric shape of a proper pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairClass {
    /// `AC ⊂ BD`, all four points collinear.
    Nested,
    /// One head lies on the segment joining the tails, with the other
    /// segment turning counterclockwise.
    Touching,
    /// `ABCD` is a counterclockwise convex quadrilateral.
    ConvexQuad,
    NotProper,
}

fn check_pair(dims: GridDims, pair: &SegmentPair) -> Result<()> {
    for s in [pair.s1, pair.s2] {
        for q in [s.head, s.tail] {
            if !dims.contains(q) {
                return Err(Error::invalid(format!("endpoint {q} outside grid {dims}")));
            }
        }
        if s.head == s.tail || !s.is_prime() {
            return Err(Error::invalid(format!(
                "segment {} -> {} is not prime",
                s.head, s.tail
            )));
        }
    }
    Ok(())
}

#[inline(always)]
fn proper_unchecked(a: GridPoint, b: GridPoint, c: GridPoint, d: GridPoint) -> bool {
    segment_value(a, b, c)
        && segment_value(a, b, d)
        && segment_value(c, d, a)
        && segment_value(c, d, b)
}

/// `f_CD(A) = f_CD(B) = f_AB(C) = f_AB(D) = 1`.
pub fn is_proper_pair(dims: GridDims, pair: &SegmentPair) -> Result<bool> {
    check_pair(dims, pair)?;
    let (a, b, c, d) = pair.points();
    Ok(proper_unchecked(a, b, c, d))
}

fn ccw(a: GridPoint, b: GridPoint, c: GridPoint) -> bool {
    orient(a, b, c) == Orientation::Counterclockwise
}

fn classify_labeled(a: GridPoint, b: GridPoint, c: GridPoint, d: GridPoint) -> Option<PairClass> {
    if on_segment(a, b, d) && on_segment(c, b, d) {
        return Some(PairClass::Nested);
    }
    if (on_segment(a, b, d) && ccw(c, d, b)) || (on_segment(c, b, d) && ccw(a, b, d)) {
        return Some(PairClass::Touching);
    }
    if ccw(a, b, c) && ccw(b, c, d) && ccw(c, d, a) && ccw(d, a, b) {
        return Some(PairClass::ConvexQuad);
    }
    None
}

/// Shape of the pair by orientation and incidence alone, trying both
/// labelings of the two segments.
pub fn classify_pair_geometric(pair: &SegmentPair) -> PairClass {
    let (a, b, c, d) = pair.points();
    classify_labeled(a, b, c, d)
        .or_else(|| classify_labeled(c, d, a, b))
        .unwrap_or(PairClass::NotProper)
}

/// Calls `visit` on every unordered pair of distinct oriented prime segments,
/// in parallel over the first segment.
fn for_each_segment_pair<T, F>(segs: &[Seg], init: T, visit: F) -> T
where
    T: Send + Default + Merge,
    F: Fn(&mut T, Seg, Seg) + Sync,
{
    let partial = (0..segs.len())
        .into_par_iter()
        .fold(T::default, |mut acc, i| {
            let s = segs[i];
            for &t in &segs[i + 1..] {
                visit(&mut acc, s, t);
            }
            acc
        })
        .reduce(T::default, |mut x, y| {
            x.merge(y);
            x
        });
    let mut out = init;
    out.merge(partial);
    out
}

trait Merge {
    fn merge(&mut self, other: Self);
}

impl Merge for u64 {
    fn merge(&mut self, other: u64) {
        *self += other;
    }
}

impl<T> Merge for Vec<T> {
    fn merge(&mut self, mut other: Vec<T>) {
        self.append(&mut other);
    }
}

/// All proper pairs on the grid, sorted.
pub fn proper_pairs(dims: GridDims) -> Result<Vec<SegmentPair>> {
    Error::guard("proper pair cells", dims.cells() as u64, PROPER_PAIR_LIMIT)?;
    let segs = oriented_prime_segments(dims);
    let mut out = for_each_segment_pair(&segs, Vec::new(), |acc, s, t| {
        if proper_unchecked(s.head, s.tail, t.head, t.tail) {
            acc.push(SegmentPair::new(s, t));
        }
    });
    out.sort_unstable();
    Ok(out)
}

/// `q(m, n)`: unordered proper pairs.
pub fn count_proper_pairs(dims: GridDims) -> Result<u64> {
    Error::guard("proper pair cells", dims.cells() as u64, PROPER_PAIR_LIMIT)?;
    let segs = oriented_prime_segments(dims);
    Ok(for_each_segment_pair(&segs, 0u64, |acc, s, t| {
        *acc += proper_unchecked(s.head, s.tail, t.head, t.tail) as u64;
    }))
}

/// Unordered prime segments in the grid, sorted.
pub fn prime_segments(dims: GridDims) -> Vec<Segment<i32>> {
    oriented_prime_segments(dims)
        .into_iter()
        .filter(|s| s.head < s.tail)
        .map(|s| Segment { a: s.head, b: s.tail })
        .collect()
}

/// `p(m, n)` by direct enumeration: unordered pairs of prime segments in
/// convex position.
pub fn count_convex_position_pairs(dims: GridDims) -> Result<u64> {
    Error::guard("convex pair cells", dims.cells() as u64, CONVEX_PAIR_LIMIT)?;
    let segs = prime_segments(dims);
    Ok((0..segs.len())
        .into_par_iter()
        .map(|i| {
            let s = segs[i];
            segs[i + 1..]
                .iter()
                .filter(|&&t| in_convex_position(s, t))
                .count() as u64
        })
        .sum())
}

/// Dedup key: the function bits packed into a fixed array.
trait Key: Copy + Eq + Hash + Ord + Send + Sync + 'static {
    fn from_function(f: &GridFunction) -> Self;
    fn and(self, other: Self) -> Self;
    fn words(&self) -> &[u64];
}

impl<const W: usize> Key for [u64; W] {
    fn from_function(f: &GridFunction) -> Self {
        let mut k = [0u64; W];
        k.copy_from_slice(f.words());
        k
    }

    #[inline(always)]
    fn and(self, other: Self) -> Self {
        let mut k = self;
        for i in 0..W {
            k[i] &= other[i];
        }
        k
    }

    fn words(&self) -> &[u64] {
        self
    }
}

const SHARDS: usize = 64;

fn shard_of<K: Hash>(k: &K) -> usize {
    use std::hash::Hasher;
    let mut h = FxHasher::default();
    k.hash(&mut h);
    (h.finish() >> 58) as usize % SHARDS
}

/// All distinct conjunctions `f ∧ g` of two threshold functions, as keys.
fn conjunction_keys<K: Key>(funcs: &[GridFunction]) -> Vec<FxHashSet<K>> {
    let keys: Vec<K> = funcs.iter().map(K::from_function).collect();
    let shards: Vec<Mutex<FxHashSet<K>>> =
        (0..SHARDS).map(|_| Mutex::new(FxHashSet::default())).collect();
    (0..keys.len()).into_par_iter().for_each(|i| {
        let mut local: Vec<Vec<K>> = vec![Vec::new(); SHARDS];
        let f = keys[i];
        for &g in &keys[i..] {
            let h = f.and(g);
            local[shard_of(&h)].push(h);
        }
        for (s, batch) in local.into_iter().enumerate() {
            if !batch.is_empty() {
                shards[s].lock().expect("shard lock").extend(batch);
            }
        }
    });
    shards
        .into_iter()
        .map(|m| m.into_inner().expect("shard lock"))
        .collect()
}

fn with_key_width<R>(
    dims: GridDims,
    funcs: &[GridFunction],
    run: impl FnOnce(Vec<Vec<Vec<u64>>>) -> R,
) -> R {
    fn flatten<K: Key>(shards: Vec<FxHashSet<K>>) -> Vec<Vec<Vec<u64>>> {
        shards
            .into_iter()
            .map(|s| s.into_iter().map(|k| k.words().to_vec()).collect())
            .collect()
    }
    match dims.words() {
        1 => run(flatten(conjunction_keys::<[u64; 1]>(funcs))),
        2 => run(flatten(conjunction_keys::<[u64; 2]>(funcs))),
        3 => run(flatten(conjunction_keys::<[u64; 3]>(funcs))),
        w => unreachable!("{w} words exceeds the two-threshold guard"),
    }
}

fn count_keys(dims: GridDims, funcs: &[GridFunction]) -> u64 {
    match dims.words() {
        1 => conjunction_keys::<[u64; 1]>(funcs).iter().map(|s| s.len() as u64).sum(),
        2 => conjunction_keys::<[u64; 2]>(funcs).iter().map(|s| s.len() as u64).sum(),
        3 => conjunction_keys::<[u64; 3]>(funcs).iter().map(|s| s.len() as u64).sum(),
        w => unreachable!("{w} words exceeds the two-threshold guard"),
    }
}

/// Every 2-threshold function (conjunction of at most two threshold
/// functions), sorted.
pub fn enumerate_two_threshold(dims: GridDims) -> Result<Vec<GridFunction>> {
    Error::guard("two-threshold cells", dims.cells() as u64, TWO_THRESHOLD_LIMIT)?;
    let funcs = enumerate_threshold(dims)?;
    let mut out = with_key_width(dims, &funcs, |shards| {
        shards
            .into_iter()
            .flatten()
            .map(|w| GridFunction::from_words(dims, &w).expect("conjunction keeps padding clear"))
            .collect::<Vec<_>>()
    });
    out.par_sort_unstable();
    Ok(out)
}

/// `t₂(m, n)` without materializing the functions.
pub fn count_two_threshold(dims: GridDims) -> Result<u64> {
    Error::guard("two-threshold cells", dims.cells() as u64, TWO_THRESHOLD_LIMIT)?;
    let funcs = enumerate_threshold(dims)?;
    Ok(count_keys(dims, &funcs))
}

/// A property check that failed on a concrete input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: &'static str,
    pub detail: String,
}

/// Collected violations: the first few verbatim, all of them counted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Violations {
    pub count: u64,
    pub examples: Vec<Violation>,
}

impl Violations {
    pub fn push(&mut self, property: &'static str, detail: String) {
        self.count += 1;
        if self.examples.len() < KEPT_VIOLATIONS {
            self.examples.push(Violation { property, detail });
        }
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn absorb(&mut self, other: Violations) {
        self.count += other.count;
        for v in other.examples {
            if self.examples.len() < KEPT_VIOLATIONS {
                self.examples.push(v);
            }
        }
    }
}

fn describe(pair: &SegmentPair) -> String {
    let (a, b, c, d) = pair.points();
    format!("{a}->{b} / {c}->{d}")
}

/// Function defined by a pair: `f_AB ∧ f_CD`.
pub fn pair_function(dims: GridDims, pair: &SegmentPair) -> GridFunction {
    let (a, b, c, d) = pair.points();
    GridFunction::from_fn(dims, |x| segment_value(a, b, x) && segment_value(c, d, x))
}

fn pair_has_boundary_true(dims: GridDims, pair: &SegmentPair) -> bool {
    let (a, b, c, d) = pair.points();
    let (m, n) = (dims.m() as i32, dims.n() as i32);
    let hit = |x: i32, y: i32| {
        let p = Point::new(x, y);
        segment_value(a, b, p) && segment_value(c, d, p)
    };
    (0..m).any(|x| hit(x, 0) || hit(x, n - 1)) || (0..n).any(|y| hit(0, y) || hit(m - 1, y))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub dims: GridDims,
    pub proper_pairs: u64,
    /// Distinct functions defined by proper pairs.
    pub defined_functions: u64,
    /// Preimage multiplicity -> number of functions, for functions with a
    /// true point on the boundary.
    pub boundary_multiplicity: BTreeMap<usize, u64>,
    /// The same for functions without one; multiplicity above one is allowed.
    pub interior_multiplicity: BTreeMap<usize, u64>,
    /// Proper 2-threshold functions in the exhaustive enumeration that no
    /// proper pair defines.
    pub undefined_functions: u64,
    pub violations: Violations,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every proper pair defines a non-threshold function, that
/// every proper 2-threshold function is defined by some proper pair, and
/// that functions with a true boundary point have exactly one such pair.
pub fn verify_uniqueness(dims: GridDims) -> Result<UniquenessReport> {
    Error::guard("uniqueness cells", dims.cells() as u64, TWO_THRESHOLD_LIMIT)?;
    let pairs = proper_pairs(dims)?;
    let mut preimages: FxHashMap<GridFunction, Vec<SegmentPair>> = FxHashMap::default();
    let mut violations = Violations::default();
    for pair in &pairs {
        let f = pair_function(dims, pair);
        preimages.entry(f).or_default().push(*pair);
    }
    let mut boundary_multiplicity = BTreeMap::new();
    let mut interior_multiplicity = BTreeMap::new();
    let mut sorted: Vec<_> = preimages.iter().collect();
    sorted.sort_unstable_by(|x, y| x.0.cmp(y.0));
    for (f, pre) in &sorted {
        if is_threshold(f) {
            violations.push(
                "proper pair defines a threshold function",
                describe(&pre[0]),
            );
        }
        if crate::threshold::has_boundary_true(f) {
            *boundary_multiplicity.entry(pre.len()).or_insert(0) += 1;
            if pre.len() != 1 {
                let list: Vec<String> = pre.iter().map(describe).collect();
                violations.push(
                    "boundary-true function has a unique proper pair",
                    list.join(", "),
                );
            }
        } else {
            *interior_multiplicity.entry(pre.len()).or_insert(0) += 1;
        }
    }
    let mut undefined = 0;
    for f in enumerate_two_threshold(dims)? {
        if !is_threshold(&f) && !preimages.contains_key(&f) {
            undefined += 1;
            violations.push(
                "proper 2-threshold function is defined by a proper pair",
                format!("{f:?}"),
            );
        }
    }
    Ok(UniquenessReport {
        dims,
        proper_pairs: pairs.len() as u64,
        defined_functions: preimages.len() as u64,
        boundary_multiplicity,
        interior_multiplicity,
        undefined_functions: undefined,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub dims: GridDims,
    /// `t₂`, from the exhaustive conjunction enumeration.
    pub t2: u64,
    /// `t`, threshold functions.
    pub threshold: u64,
    /// Proper 2-threshold functions without a true boundary point.
    pub proper_interior: u64,
    /// Proper 2-threshold functions with a true boundary point, counted on
    /// the function side.
    pub t2_boundary: u64,
    /// Distinct boundary-true functions defined by proper pairs.
    pub t2_boundary_from_pairs: u64,
    /// `q`, unordered proper pairs.
    pub q: u64,
    /// Proper pairs whose function has no true boundary point.
    pub q_interior: u64,
    /// `t₂ = t₂' + t + (interior proper functions)` with `t₂'` taken from pairs.
    pub functions_identity: bool,
    /// `q = t₂' + (interior proper pairs)` with `t₂'` taken from functions.
    pub pairs_identity: bool,
    /// When the pairs identity fails, the exact ratio of boundary-true proper
    /// pairs to boundary-true functions, if integral (2 would indicate that
    /// pairs ought to be ordered).
    pub ordered_pair_factor: Option<u64>,
    pub violations: Violations,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Computes both sides of the partitions of 2-threshold functions and of
/// proper pairs by boundary behaviour, and checks the two exact identities
/// linking them.
pub fn verify_decomposition(dims: GridDims) -> Result<DecompositionReport> {
    Error::guard("decomposition cells", dims.cells() as u64, TWO_THRESHOLD_LIMIT)?;
    let all = enumerate_two_threshold(dims)?;
    let mut threshold = 0;
    let mut proper_interior = 0;
    let mut t2_boundary = 0;
    for f in &all {
        if is_threshold(f) {
            threshold += 1;
        } else if crate::threshold::has_boundary_true(f) {
            t2_boundary += 1;
        } else {
            proper_interior += 1;
        }
    }
    let pairs = proper_pairs(dims)?;
    let mut boundary_funcs: FxHashSet<GridFunction> = FxHashSet::default();
    let mut q_interior = 0;
    for pair in &pairs {
        if pair_has_boundary_true(dims, pair) {
            boundary_funcs.insert(pair_function(dims, pair));
        } else {
            q_interior += 1;
        }
    }
    let t2 = all.len() as u64;
    let q = pairs.len() as u64;
    let from_pairs = boundary_funcs.len() as u64;
    let functions_identity = t2 == from_pairs + threshold + proper_interior;
    let pairs_identity = q == t2_boundary + q_interior;
    let boundary_pairs = q - q_interior;
    let ordered_pair_factor = (!pairs_identity
        && t2_boundary > 0
        && boundary_pairs % t2_boundary == 0)
        .then(|| boundary_pairs / t2_boundary);
    let mut violations = Violations::default();
    if !functions_identity {
        violations.push(
            "t2 = t2' + t + interior proper functions",
            format!("{t2} != {from_pairs} + {threshold} + {proper_interior}"),
        );
    }
    if !pairs_identity {
        violations.push(
            "q = t2' + interior proper pairs",
            format!("{q} != {t2_boundary} + {q_interior}"),
        );
    }
    Ok(DecompositionReport {
        dims,
        t2,
        threshold,
        proper_interior,
        t2_boundary,
        t2_boundary_from_pairs: from_pairs,
        q,
        q_interior,
        functions_identity,
        pairs_identity,
        ordered_pair_factor,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    pub dims: GridDims,
    /// Proper pairs whose function has no true boundary point.
    pub checked: u64,
    /// Proper pairs skipped because their function touches the boundary.
    pub skipped: u64,
    pub violations: Violations,
}

impl DistanceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For proper pairs whose function has no true boundary point, checks that
/// each endpoint of either segment lies within distance one of the other
/// segment's line.
pub fn verify_distance_claim(dims: GridDims) -> Result<DistanceReport> {
    Error::guard("proper pair cells", dims.cells() as u64, PROPER_PAIR_LIMIT)?;
    let segs = oriented_prime_segments(dims);
    #[derive(Default)]
    struct Acc {
        checked: u64,
        skipped: u64,
        violations: Violations,
    }
    impl Merge for Acc {
        fn merge(&mut self, o: Acc) {
            self.checked += o.checked;
            self.skipped += o.skipped;
            self.violations.absorb(o.violations);
        }
    }
    let acc = for_each_segment_pair(&segs, Acc::default(), |acc, s, t| {
        let (a, b, c, d) = (s.head, s.tail, t.head, t.tail);
        if !proper_unchecked(a, b, c, d) {
            return;
        }
        let pair = SegmentPair::new(s, t);
        if pair_has_boundary_true(dims, &pair) {
            acc.skipped += 1;
            return;
        }
        acc.checked += 1;
        let ok = within_unit_of_line(a, c, d)
            && within_unit_of_line(b, c, d)
            && within_unit_of_line(c, a, b)
            && within_unit_of_line(d, a, b);
        if !ok {
            acc.violations
                .push("endpoints within distance one of the other line", describe(&pair));
        }
    });
    Ok(DistanceReport {
        dims,
        checked: acc.checked,
        skipped: acc.skipped,
        violations: acc.violations,
    })
}

/// A pair where the geometric classification and the value-based definition
/// disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassMismatch {
    pub dims: GridDims,
    pub pair: SegmentPair,
    pub proper: bool,
    pub class: PairClass,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub checked: u64,
    pub proper: u64,
    pub by_class: BTreeMap<PairClass, u64>,
    /// Mismatches between pairs with four distinct endpoints.
    pub mismatches: Vec<ClassMismatch>,
    /// Mismatches between pairs sharing an endpoint, kept apart.
    pub shared_endpoint_anomalies: Vec<ClassMismatch>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Whether every shared-endpoint anomaly has the head of one segment at
    /// the tail of the other.
    pub fn anomalies_are_head_on_tail(&self) -> bool {
        self.shared_endpoint_anomalies.iter().all(|m| {
            let (a, b, c, d) = m.pair.points();
            a == d || b == c
        })
    }

    fn record(&mut self, dims: GridDims, pair: SegmentPair) {
        let (a, b, c, d) = pair.points();
        let proper = proper_unchecked(a, b, c, d);
        let class = classify_pair_geometric(&pair);
        self.checked += 1;
        self.proper += proper as u64;
        *self.by_class.entry(class).or_insert(0) += 1;
        if proper != (class != PairClass::NotProper) {
            let m = ClassMismatch {
                dims,
                pair,
                proper,
                class,
            };
            if pair.shares_endpoint() {
                self.shared_endpoint_anomalies.push(m);
            } else {
                self.mismatches.push(m);
            }
        }
    }

    fn absorb(&mut self, other: EquivalenceReport) {
        self.checked += other.checked;
        self.proper += other.proper;
        for (k, v) in other.by_class {
            *self.by_class.entry(k).or_insert(0) += v;
        }
        self.mismatches.extend(other.mismatches);
        self.shared_endpoint_anomalies
            .extend(other.shared_endpoint_anomalies);
    }
}

/// Compares classification and definition on every unordered pair of
/// distinct oriented prime segments of the grid.
pub fn check_classification_exhaustive(dims: GridDims) -> Result<EquivalenceReport> {
    Error::guard("proper pair cells", dims.cells() as u64, PROPER_PAIR_LIMIT)?;
    let segs = oriented_prime_segments(dims);
    let parts: Vec<EquivalenceReport> = (0..segs.len())
        .into_par_iter()
        .map(|i| {
            let mut r = EquivalenceReport::default();
            for &t in &segs[i + 1..] {
                r.record(dims, SegmentPair::new(segs[i], t));
            }
            r
        })
        .collect();
    let mut out = EquivalenceReport::default();
    for p in parts {
        out.absorb(p);
    }
    Ok(out)
}

/// Uniformly random oriented prime segment in the grid (rejection sampling).
pub fn random_prime_segment(dims: GridDims, rng: &mut impl Rng) -> Result<Seg> {
    if dims.cells() < 2 {
        return Err(Error::invalid(format!("grid {dims} has no segments")));
    }
    loop {
        let head = dims.point(rng.gen_range(0..dims.cells()));
        let tail = dims.point(rng.gen_range(0..dims.cells()));
        if head != tail && crate::geometry::is_prime_segment(head, tail)? {
            return Ok(OrientedSegment { head, tail });
        }
    }
}

/// Compares classification and definition on `samples` random pairs of
/// distinct segments drawn from a seeded generator.
pub fn check_classification_sampled(
    dims: GridDims,
    samples: u64,
    seed: u64,
) -> Result<EquivalenceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = EquivalenceReport::default();
    let mut drawn = 0;
    while drawn < samples {
        let s = random_prime_segment(dims, &mut rng)?;
        let t = random_prime_segment(dims, &mut rng)?;
        if s == t {
            continue;
        }
        out.record(dims, SegmentPair::new(s, t));
        drawn += 1;
    }
    Ok(out)
}

/// Proper pairs whose geometric class is [`PairClass::ConvexQuad`].
pub fn count_convex_quad_proper_pairs(dims: GridDims) -> Result<u64> {
    Error::guard("proper pair cells", dims.cells() as u64, PROPER_PAIR_LIMIT)?;
    let segs = oriented_prime_segments(dims);
    Ok(for_each_segment_pair(&segs, 0u64, |acc, s, t| {
        if proper_unchecked(s.head, s.tail, t.head, t.tail)
            && classify_pair_geometric(&SegmentPair::new(s, t)) == PairClass::ConvexQuad
        {
            *acc += 1;
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(m: u32, n: u32) -> GridDims {
        GridDims::new(m, n).unwrap()
    }

    fn p(x: i32, y: i32) -> GridPoint {
        Point::new(x, y)
    }

    fn pair(a: GridPoint, b: GridPoint, c: GridPoint, d: GridPoint) -> SegmentPair {
        SegmentPair::new(
            OrientedSegment::new(a, b).unwrap(),
            OrientedSegment::new(c, d).unwrap(),
        )
    }

    #[test]
    fn figure_pair_is_proper_convex_quad() {
        let fig = pair(p(1, 1), p(2, 0), p(3, 1), p(1, 2));
        assert!(is_proper_pair(dims(4, 3), &fig).unwrap());
        assert_eq!(classify_pair_geometric(&fig), PairClass::ConvexQuad);
    }

    #[test]
    fn reversed_copy_is_not_proper() {
        // head of each segment is the tail of the other: the incidence tests
        // fire trivially, so the geometric class disagrees with properness
        let pr = pair(p(0, 0), p(1, 0), p(1, 0), p(0, 0));
        assert!(!is_proper_pair(dims(2, 2), &pr).unwrap());
        assert_eq!(classify_pair_geometric(&pr), PairClass::Nested);
    }

    #[test]
    fn collinear_nested_pair() {
        let pr = pair(p(1, 0), p(0, 0), p(2, 0), p(3, 0));
        assert!(is_proper_pair(dims(4, 1), &pr).unwrap());
        assert_eq!(classify_pair_geometric(&pr), PairClass::Nested);
    }

    #[test]
    fn square_diagonals_not_proper() {
        let pr = pair(p(0, 0), p(1, 1), p(1, 0), p(0, 1));
        assert_eq!(classify_pair_geometric(&pr), PairClass::NotProper);
        assert!(!is_proper_pair(dims(2, 2), &pr).unwrap());
    }

    #[test]
    fn order_of_segments_is_irrelevant() {
        let s = OrientedSegment::new(p(1, 1), p(2, 0)).unwrap();
        let t = OrientedSegment::new(p(3, 1), p(1, 2)).unwrap();
        assert_eq!(SegmentPair::new(s, t), SegmentPair::new(t, s));
    }

    #[test]
    fn invalid_pairs_rejected() {
        let pr = pair(p(0, 0), p(2, 0), p(1, 1), p(0, 1));
        assert!(is_proper_pair(dims(3, 3), &pr).is_err());
        let pr = pair(p(0, 0), p(1, 0), p(1, 1), p(0, 2));
        assert!(is_proper_pair(dims(2, 2), &pr).is_err());
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_proper_pairs(dims(1, 2)).unwrap(), 0);
        assert_eq!(count_convex_position_pairs(dims(2, 2)).unwrap(), 2);
        assert_eq!(count_two_threshold(dims(1, 1)).unwrap(), 2);
        assert_eq!(enumerate_two_threshold(dims(1, 1)).unwrap().len(), 2);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            count_proper_pairs(dims(17, 16)),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(matches!(
            count_two_threshold(dims(13, 12)),
            Err(Error::ResourceLimit { .. })
        ));
    }
}

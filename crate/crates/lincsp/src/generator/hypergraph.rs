//! Greedy construction of ell-disjoint k-uniform hypergraphs.
//!
//! Two k-sets are incompatible when they share at least ell vertices, i.e.
//! when they share an ell-subset. An ell-disjoint family therefore uses every
//! ell-subset at most once, and the greedy acceptance test reduces to rank
//! lookups over the accepted family's ell-subsets.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// A family of k-subsets of {1, .., n}, stored flat; edges keep their
/// acceptance order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: u64,
    k: usize,
    flat: Vec<u32>,
}

impl Hypergraph {
    /// Wraps explicit edges. Each edge must list exactly k distinct vertices
    /// in 1..=n, ascending.
    pub fn new(n: u64, k: usize, edges: Vec<Vec<u32>>) -> Self {
        assert!(k > 0, "edges must have at least one vertex");
        let mut flat = Vec::with_capacity(edges.len() * k);
        for e in &edges {
            assert_eq!(e.len(), k);
            debug_assert!(e.windows(2).all(|w| w[0] < w[1]) && *e.last().unwrap() as u64 <= n);
            flat.extend_from_slice(e);
        }
        Hypergraph { n, k, flat }
    }

    fn from_flat(n: u64, k: usize, flat: Vec<u32>) -> Self {
        Hypergraph { n, k, flat }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Sorted vertex list of the i-th accepted edge.
    pub fn edge(&self, i: usize) -> &[u32] {
        &self.flat[i * self.k..(i + 1) * self.k]
    }

    /// Edges in acceptance order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.flat.chunks_exact(self.k)
    }

    pub fn num_edges(&self) -> usize {
        self.flat.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    /// Keeps the first `m` edges.
    pub fn truncated(&self, m: usize) -> Hypergraph {
        let keep = m.min(self.num_edges()) * self.k;
        Hypergraph::from_flat(self.n, self.k, self.flat[..keep].to_vec())
    }

    /// Index pair of two edges sharing at least `ell` vertices, if any.
    pub fn overlap_witness(&self, ell: usize) -> Option<(usize, usize)> {
        if let Ok(mut marks) = SubsetMarks::new(self.n, self.k, ell) {
            for i in 0..self.num_edges() {
                if !marks.try_insert(self.edge(i)) {
                    for j in 0..i {
                        if shared_count(self.edge(j), self.edge(i)) >= ell {
                            return Some((j, i));
                        }
                    }
                    unreachable!("mark hit without a witness");
                }
            }
            return None;
        }
        if ell == self.k {
            // Distinct edges of equal size never share all k vertices, so
            // only duplicates can violate.
            let mut seen: HashSet<&[u32]> = HashSet::with_capacity(self.num_edges());
            for (i, e) in self.edges().enumerate() {
                if !seen.insert(e) {
                    let j = self.edges().position(|f| f == e).expect("seen above");
                    return Some((j, i));
                }
            }
            return None;
        }
        // Parameters too large for ranking: quadratic fallback.
        for i in 0..self.num_edges() {
            for j in (i + 1)..self.num_edges() {
                if shared_count(self.edge(i), self.edge(j)) >= ell {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

fn shared_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut shared) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                shared += 1;
                i += 1;
                j += 1;
            }
        }
    }
    shared
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// ceil(C(n,ell) / C(k,ell)^2): at least this many edges appear in every
/// maximal ell-disjoint k-uniform hypergraph on n vertices.
pub fn hypergraph_size_lower_bound(n: u64, k: u64, ell: u64) -> Result<BigUint> {
    if ell < 1 || ell > k || k > n {
        return Err(Error::Parameter(format!(
            "need 1 <= ell <= k <= n, got ell={ell}, k={k}, n={n}"
        )));
    }
    let numer = binomial_big(n, ell);
    let denom = binomial_big(k, ell).pow(2);
    Ok((&numer + &denom - BigUint::one()) / denom)
}

/// Colex ranking of ell-subsets plus a seen-set over the ranks.
struct SubsetMarks {
    // binom[v * stride + j] = C(v, j) for v <= n, j <= ell.
    binom: Vec<u64>,
    stride: usize,
    seen: Seen,
    ell: usize,
}

/// Visits the colex rank of every ell-subset of `edge` until `probe` returns
/// true. The odometer keeps the rank as prefix sums, so a step that advances
/// only the last index updates the rank in constant time.
#[inline]
fn walk_subsets<F: FnMut(u64) -> bool>(
    binom: &[u64],
    stride: usize,
    edge: &[u32],
    l: usize,
    mut probe: F,
) -> bool {
    let k = edge.len();
    let mut idx = [0usize; MAX_EXHAUSTIVE_EDGE];
    let mut sums = [0u64; MAX_EXHAUSTIVE_EDGE + 1];
    for i in 0..l {
        idx[i] = i;
        sums[i + 1] = sums[i] + binom[(edge[i] - 1) as usize * stride + i + 1];
    }
    loop {
        if probe(sums[l]) {
            return true;
        }
        let mut i = l;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] + 1 <= k - (l - i) {
                idx[i] += 1;
                sums[i + 1] = sums[i] + binom[(edge[idx[i]] - 1) as usize * stride + i + 1];
                for j in (i + 1)..l {
                    idx[j] = idx[j - 1] + 1;
                    sums[j + 1] = sums[j] + binom[(edge[idx[j]] - 1) as usize * stride + j + 1];
                }
                break;
            }
        }
    }
}

enum Seen {
    Bits(Vec<u64>),
    Set(HashSet<u64>),
}

impl SubsetMarks {
    fn new(n: u64, k: usize, ell: usize) -> Result<Self> {
        let choices = binomial_big(k as u64, ell as u64);
        if choices > BigUint::from(100_000u32) {
            return Err(Error::Parameter(format!(
                "C(k={k}, ell={ell}) too large for subset bookkeeping"
            )));
        }
        let total = binomial_big(n, ell as u64);
        let seen = if total <= BigUint::from(1u64 << 31) {
            let words = (total.to_u64().expect("fits") as usize).div_ceil(64);
            Seen::Bits(vec![0u64; words])
        } else if total < BigUint::from(1u64 << 62) {
            Seen::Set(HashSet::new())
        } else {
            return Err(Error::Parameter(format!(
                "C(n={n}, ell={ell}) too large for subset bookkeeping"
            )));
        };
        // Pascal's triangle; saturating keeps the table well-defined past the
        // guarded range.
        let stride = ell + 1;
        let mut binom = vec![0u64; (n as usize + 1) * stride];
        binom[0] = 1;
        for v in 1..=n as usize {
            binom[v * stride] = 1;
            for j in 1..=ell {
                binom[v * stride + j] =
                    binom[(v - 1) * stride + j - 1].saturating_add(binom[(v - 1) * stride + j]);
            }
        }
        Ok(SubsetMarks {
            binom,
            stride,
            seen,
            ell,
        })
    }

    /// True (and marks the edge's ell-subsets) iff the edge shares fewer
    /// than ell vertices with every previously inserted edge.
    fn try_insert(&mut self, edge: &[u32]) -> bool {
        debug_assert!(self.ell <= edge.len() && edge.len() <= MAX_EXHAUSTIVE_EDGE);
        let hit = match &self.seen {
            Seen::Bits(words) => walk_subsets(&self.binom, self.stride, edge, self.ell, |r| {
                words[(r / 64) as usize] & (1 << (r % 64)) != 0
            }),
            Seen::Set(set) => {
                walk_subsets(&self.binom, self.stride, edge, self.ell, |r| set.contains(&r))
            }
        };
        if hit {
            return false;
        }
        match &mut self.seen {
            Seen::Bits(words) => {
                walk_subsets(&self.binom, self.stride, edge, self.ell, |r| {
                    words[(r / 64) as usize] |= 1 << (r % 64);
                    false
                });
            }
            Seen::Set(set) => {
                walk_subsets(&self.binom, self.stride, edge, self.ell, |r| {
                    set.insert(r);
                    false
                });
            }
        }
        true
    }
}

const EXHAUSTIVE_CANDIDATE_CAP: u64 = 1 << 23;
const MAX_EXHAUSTIVE_EDGE: usize = 16;

/// True when `greedy_maximal_hypergraph` supports the parameters.
pub fn exhaustive_feasible(n: u64, k: usize) -> bool {
    n <= 128
        && k <= MAX_EXHAUSTIVE_EDGE
        && k as u64 <= n
        && binomial_big(n, k as u64) <= BigUint::from(EXHAUSTIVE_CANDIDATE_CAP)
}

fn check_params(n: u64, k: usize, ell: usize) -> Result<()> {
    if ell < 1 || ell > k || (k as u64) > n {
        return Err(Error::Parameter(format!(
            "need 1 <= ell <= k <= n, got ell={ell}, k={k}, n={n}"
        )));
    }
    Ok(())
}

/// Considers every k-subset of {1, .., n} in a seed-determined uniformly
/// random order and keeps each one sharing fewer than ell vertices with all
/// edges kept so far. The result is a maximal ell-disjoint family, so its
/// size is at least `hypergraph_size_lower_bound(n, k, ell)`.
pub fn greedy_maximal_hypergraph(n: u64, k: usize, ell: usize, seed: u64) -> Result<Hypergraph> {
    greedy_maximal_with_rng(n, k, ell, &mut rng_from_seed(seed))
}

pub(crate) fn greedy_maximal_with_rng(
    n: u64,
    k: usize,
    ell: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Hypergraph> {
    check_params(n, k, ell)?;
    if !exhaustive_feasible(n, k) {
        return Err(Error::Parameter(format!(
            "C({n},{k}) too large to enumerate; use sample_packing for edge collection"
        )));
    }
    // Candidates as bitmasks over the (at most 128) vertices; 64-bit words
    // where the vertex count allows.
    let flat = if n <= 64 {
        greedy_scan::<u64>(n, k, ell, rng)?
    } else {
        greedy_scan::<u128>(n, k, ell, rng)?
    };
    Ok(Hypergraph::from_flat(n, k, flat))
}

trait MaskWord: Copy {
    const ZERO: Self;
    fn with_bit(self, i: usize) -> Self;
    fn without_bit(self, i: usize) -> Self;
    /// Index of the lowest set bit, which is also cleared.
    fn pop_lowest(&mut self) -> u32;
    fn is_zero(self) -> bool;
}

macro_rules! impl_mask_word {
    ($($t:ty),*) => {$(
        impl MaskWord for $t {
            const ZERO: Self = 0;
            #[inline]
            fn with_bit(self, i: usize) -> Self {
                self | (1 << i)
            }
            #[inline]
            fn without_bit(self, i: usize) -> Self {
                self & !(1 << i)
            }
            #[inline]
            fn pop_lowest(&mut self) -> u32 {
                let i = self.trailing_zeros();
                *self &= *self - 1;
                i
            }
            #[inline]
            fn is_zero(self) -> bool {
                self == 0
            }
        }
    )*};
}
impl_mask_word!(u64, u128);

fn greedy_scan<M: MaskWord>(
    n: u64,
    k: usize,
    ell: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u32>> {
    let count = binomial_big(n, k as u64).to_usize().expect("capped");
    let mut candidates: Vec<M> = Vec::with_capacity(count);
    let mut idx: Vec<usize> = (0..k).collect();
    // Masks are maintained incrementally: an odometer step clears the moved
    // indices' old bits and sets their new ones.
    let mut mask = idx.iter().fold(M::ZERO, |m, &i| m.with_bit(i));
    loop {
        candidates.push(mask);
        let nu = n as usize;
        let mut i = k;
        let advanced = loop {
            if i == 0 {
                break false;
            }
            i -= 1;
            if idx[i] + 1 <= nu - (k - i) {
                mask = mask.without_bit(idx[i]);
                idx[i] += 1;
                mask = mask.with_bit(idx[i]);
                for j in (i + 1)..k {
                    mask = mask.without_bit(idx[j]);
                    idx[j] = idx[j - 1] + 1;
                    mask = mask.with_bit(idx[j]);
                }
                break true;
            }
        };
        if !advanced {
            break;
        }
    }
    // Fisher-Yates on a splitmix64 stream seeded from the caller's
    // generator: one draw per element regardless of element width.
    shuffle_cheap(&mut candidates, rng);

    let mut buf = [0u32; MAX_EXHAUSTIVE_EDGE];
    #[inline]
    fn decode<M: MaskWord>(mut m: M, buf: &mut [u32; MAX_EXHAUSTIVE_EDGE]) {
        let mut i = 0;
        while !m.is_zero() {
            buf[i] = m.pop_lowest() + 1;
            i += 1;
        }
    }

    let mut flat: Vec<u32> = Vec::new();
    if ell == k {
        // Distinct k-sets always share at most k-1 vertices.
        flat.reserve(count * k);
        for mask in candidates {
            decode(mask, &mut buf);
            flat.extend_from_slice(&buf[..k]);
        }
    } else if ell == 2 {
        // Pair bookkeeping degenerates to per-vertex neighbor masks.
        let mut adj: Vec<u128> = vec![0; n as usize + 1];
        'outer: for mask in candidates {
            decode(mask, &mut buf);
            let full = buf[..k]
                .iter()
                .fold(0u128, |m, &v| m | (1u128 << (v - 1)));
            for &v in &buf[..k] {
                if adj[v as usize] & full != 0 {
                    continue 'outer;
                }
            }
            for &v in &buf[..k] {
                adj[v as usize] |= full ^ (1u128 << (v - 1));
            }
            flat.extend_from_slice(&buf[..k]);
        }
    } else {
        let mut marks = SubsetMarks::new(n, k, ell)?;
        for mask in candidates {
            decode(mask, &mut buf);
            if marks.try_insert(&buf[..k]) {
                flat.extend_from_slice(&buf[..k]);
            }
        }
    }
    Ok(flat)
}

/// Uniform shuffle driven by a splitmix64 stream whose state comes from the
/// caller's generator. Large inputs are first dealt into 64 piles (so the
/// per-pile Fisher-Yates stays cache-resident); dealing uniformly at random,
/// shuffling each pile and concatenating in pile order is again a uniform
/// shuffle.
fn shuffle_cheap<T: Copy>(items: &mut Vec<T>, rng: &mut ChaCha8Rng) {
    use rand::RngCore;
    let mut state = rng.next_u64();
    let mut next = move || -> u64 {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    fn fisher_yates<T, F: FnMut() -> u64>(items: &mut [T], next: &mut F) {
        for i in (1..items.len()).rev() {
            let bound = i as u64 + 1;
            let limit = u64::MAX - u64::MAX % bound;
            let j = loop {
                let r = next();
                if r < limit {
                    break r % bound;
                }
            };
            items.swap(i, j as usize);
        }
    }
    const PILE_LIMIT: usize = 1 << 15;
    if items.len() <= PILE_LIMIT {
        fisher_yates(items, &mut next);
        return;
    }
    let mut piles: Vec<Vec<T>> = (0..64)
        .map(|_| Vec::with_capacity(items.len() / 48))
        .collect();
    for &x in items.iter() {
        piles[(next() & 63) as usize].push(x);
    }
    items.clear();
    for pile in &mut piles {
        fisher_yates(pile, &mut next);
        items.extend_from_slice(pile);
    }
}

/// Samples random k-subsets until `target_edges` compatible ones are
/// collected. Unlike the exhaustive builder this makes no maximality claim;
/// it exists for vertex counts whose candidate space cannot be enumerated.
pub fn sample_packing(
    n: u64,
    k: usize,
    ell: usize,
    seed: u64,
    target_edges: u64,
) -> Result<Hypergraph> {
    sample_packing_with_rng(n, k, ell, &mut rng_from_seed(seed), target_edges)
}

pub(crate) fn sample_packing_with_rng(
    n: u64,
    k: usize,
    ell: usize,
    rng: &mut ChaCha8Rng,
    target_edges: u64,
) -> Result<Hypergraph> {
    check_params(n, k, ell)?;
    if n > u32::MAX as u64 || k > 64 {
        return Err(Error::Parameter(format!(
            "sampling supports n <= 2^32 and k <= 64, got n={n}, k={k}"
        )));
    }
    if target_edges > 20_000_000 {
        return Err(Error::Parameter(format!(
            "target of {target_edges} edges is out of the supported range"
        )));
    }
    let mut flat: Vec<u32> = Vec::new();
    let mut collected = 0u64;
    let mut seen_full: HashSet<Vec<u32>> = HashSet::new();
    let mut marks = if ell < k {
        Some(SubsetMarks::new(n, k, ell)?)
    } else {
        None
    };
    let budget = target_edges.saturating_mul(50).max(1_000_000);
    let mut attempts = 0u64;
    while collected < target_edges {
        if attempts == budget {
            return Err(Error::NotEnoughEdges {
                requested: target_edges,
                available: collected,
            });
        }
        attempts += 1;
        let mut verts: Vec<u32> = rand::seq::index::sample(rng, n as usize, k)
            .into_iter()
            .map(|i| i as u32 + 1)
            .collect();
        verts.sort_unstable();
        let accepted = match &mut marks {
            Some(marks) => marks.try_insert(&verts),
            None => seen_full.insert(verts.clone()),
        };
        if accepted {
            flat.extend_from_slice(&verts);
            collected += 1;
        }
    }
    Ok(Hypergraph::from_flat(n, k, flat))
}

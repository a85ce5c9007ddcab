//! Orderings of projections: greedy nearest-neighbor recovery, synthetic
//! shuffle/shift corruptions, and goodness measurement.
//!
//! A [`Permutation`] maps claimed positions to original indices. The quality
//! model counts how many positions are displaced by more than `delta_bar`;
//! a map is "good" with parameters `(delta_bar, n_delta)` when at most
//! `n_delta` positions violate the displacement bound.
//!
//! Position 0 is the anchor (the projection whose angle is known to be zero)
//! and perturbations never move it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;
use crate::rng::RngSeed;

/// A bijection of `{0..n-1}`, mapping claimed position to original index.
///
/// Serialized as a 1-based JSON integer array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
    anchor_fixed: bool,
}

/// Measured goodness: `n_delta` positions displaced by more than `delta_bar`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingQuality {
    pub delta_bar: usize,
    pub n_delta: usize,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
            anchor_fixed: true,
        }
    }

    /// Validate and wrap a 0-based map.
    pub fn from_map(map: Vec<usize>, anchor_fixed: bool) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::EmptyInput("Permutation: empty map"));
        }
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::InvalidParameter("map is not a bijection".into()));
            }
            seen[v] = true;
        }
        if anchor_fixed && map[0] != 0 {
            return Err(Error::InvalidParameter("anchored permutation must fix position 0".into()));
        }
        Ok(Permutation { map, anchor_fixed })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn anchor_fixed(&self) -> bool {
        self.anchor_fixed
    }

    /// Original index claimed at position `i`.
    pub fn image_of(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// The same circular tour walked backwards, anchor kept in place.
    pub fn reversed(&self) -> Permutation {
        let n = self.map.len();
        let mut map = Vec::with_capacity(n);
        map.push(self.map[0]);
        map.extend(self.map[1..].iter().rev());
        Permutation {
            map,
            anchor_fixed: self.anchor_fixed,
        }
    }

    /// Pearson correlation between position and image; strongly negative
    /// values indicate a globally reversed ordering.
    pub fn orientation_correlation(&self) -> f64 {
        let n = self.map.len();
        if n < 2 {
            return 1.0;
        }
        let mean = (n - 1) as f64 / 2.0;
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, &v) in self.map.iter().enumerate() {
            num += (i as f64 - mean) * (v as f64 - mean);
            den += (i as f64 - mean).powi(2);
        }
        num / den
    }

    /// 1-based copy for serialization.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v + 1).collect()
    }

    pub fn from_one_based(map: Vec<usize>, anchor_fixed: bool) -> Result<Self> {
        let shifted: Vec<usize> = map
            .into_iter()
            .map(|v| v.checked_sub(1).ok_or_else(|| Error::Format("permutation entries are 1-based".into())))
            .collect::<Result<_>>()?;
        Permutation::from_map(shifted, anchor_fixed)
    }
}

/// Greedy nearest-neighbor chain over row vectors, starting at `start`.
///
/// At each step the unvisited vector with minimal Euclidean distance to the
/// current one is appended; distance ties break toward the lowest index, so
/// the result is deterministic.
pub fn nn_order<R: Real, V: AsRef<[R]>>(vectors: &[V], start: usize) -> Result<Permutation> {
    let n = vectors.len();
    if n == 0 {
        return Err(Error::EmptyInput("nn_order: no vectors"));
    }
    if start >= n {
        return Err(Error::InvalidParameter(format!("start index {start} out of range {n}")));
    }
    let dim = vectors[0].as_ref().len();
    if vectors.iter().any(|v| v.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch("nn_order: ragged vector lengths".into()));
    }

    let mut visited = vec![false; n];
    let mut map = Vec::with_capacity(n);
    let mut current = start;
    visited[start] = true;
    map.push(start);
    for _ in 1..n {
        let cur = vectors[current].as_ref();
        let mut best: Option<(R, usize)> = None;
        for (j, v) in vectors.iter().enumerate() {
            if visited[j] {
                continue;
            }
            let d2: R = v
                .as_ref()
                .iter()
                .zip(cur.iter())
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum();
            // strict less keeps the lowest index on ties
            if best.map_or(true, |(bd, _)| d2 < bd) {
                best = Some((d2, j));
            }
        }
        let (_, next) = best.expect("unvisited vector exists");
        visited[next] = true;
        map.push(next);
        current = next;
    }
    Permutation::from_map(map, start == 0)
}

/// Count positions displaced by more than `delta_bar`.
pub fn measure_goodness(perm: &Permutation, delta_bar: usize) -> OrderingQuality {
    let n_delta = perm
        .as_slice()
        .iter()
        .enumerate()
        .filter(|&(i, &v)| i.abs_diff(v) > delta_bar)
        .count();
    OrderingQuality { delta_bar, n_delta }
}

/// Re-permute the images of a uniformly random subset of `subset_size`
/// positions among themselves. The anchor position is never eligible.
pub fn perturb_shuffle(perm: &Permutation, subset_size: usize, seed: RngSeed) -> Result<Permutation> {
    use rand::seq::SliceRandom;
    let n = perm.len();
    let first_eligible = if perm.anchor_fixed() { 1 } else { 0 };
    let eligible = n - first_eligible;
    if subset_size > eligible {
        return Err(Error::InvalidParameter(format!(
            "shuffle subset {subset_size} exceeds {eligible} eligible positions"
        )));
    }
    if subset_size <= 1 {
        return Ok(perm.clone());
    }
    let mut rng = seed.rng();
    let mut positions: Vec<usize> = (first_eligible..n).collect();
    positions.shuffle(&mut rng);
    positions.truncate(subset_size);

    let mut images: Vec<usize> = positions.iter().map(|&p| perm.map[p]).collect();
    images.shuffle(&mut rng);

    let mut map = perm.map.clone();
    for (&p, &img) in positions.iter().zip(images.iter()) {
        map[p] = img;
    }
    Permutation::from_map(map, perm.anchor_fixed())
}

/// Remove the block of `block_len` images starting at position `block_start`
/// and reinsert it at `insert_at` (an index into the shortened sequence),
/// displacing everything in between. All indices 0-based.
pub fn perturb_shift(
    perm: &Permutation,
    block_start: usize,
    block_len: usize,
    insert_at: usize,
) -> Result<Permutation> {
    let n = perm.len();
    if block_len == 0 || block_start + block_len > n {
        return Err(Error::InvalidParameter(format!(
            "block [{block_start}, {block_start}+{block_len}) out of range for n={n}"
        )));
    }
    if insert_at > n - block_len {
        return Err(Error::InvalidParameter(format!(
            "insert position {insert_at} invalid after removing {block_len} elements"
        )));
    }
    if perm.anchor_fixed() && (block_start == 0 || insert_at == 0) {
        return Err(Error::InvalidParameter("shift would move the anchored position".into()));
    }
    let mut seq = perm.map.clone();
    let block: Vec<usize> = seq.drain(block_start..block_start + block_len).collect();
    for (offset, img) in block.into_iter().enumerate() {
        seq.insert(insert_at + offset, img);
    }
    Permutation::from_map(seq, perm.anchor_fixed())
}

/// Synthesize a permutation whose measured goodness at `delta_bar` is exactly
/// `n_delta`: the violating positions are produced by far moves (beyond
/// `delta_bar`), everything else stays within it via small local swaps.
pub fn synth_good_map(
    n: usize,
    delta_bar: usize,
    n_delta: usize,
    seed: RngSeed,
) -> Result<Permutation> {
    use rand::seq::SliceRandom;
    use rand::Rng;

    if n == 0 {
        return Err(Error::EmptyInput("synth_good_map: n = 0"));
    }
    if n_delta > n {
        return Err(Error::InvalidParameter(format!("n_delta {n_delta} exceeds n {n}")));
    }
    if delta_bar >= n.saturating_sub(1) && n_delta > 0 {
        return Err(Error::Infeasible(format!(
            "no displacement in [n]={n} can exceed delta_bar={delta_bar}"
        )));
    }

    let mut rng = seed.rng();
    let mut map: Vec<usize> = (0..n).collect();
    let mut free = vec![true; n];
    free[0] = false; // anchor

    // Far violations. A swap of positions at distance > delta_bar yields two
    // violations; a wide 3-cycle yields three; a lopsided 3-cycle (one long
    // edge, two short) yields exactly one when delta_bar >= 1.
    let mut remaining = n_delta;
    if remaining % 2 == 1 {
        if remaining >= 3 && place_wide_three_cycle(&mut map, &mut free, n, delta_bar, &mut rng) {
            remaining -= 3;
        } else if delta_bar >= 1
            && place_lopsided_three_cycle(&mut map, &mut free, n, delta_bar, &mut rng)
        {
            remaining -= 1;
        } else {
            return Err(Error::Infeasible(format!(
                "cannot realize odd n_delta={n_delta} with delta_bar={delta_bar}, n={n}"
            )));
        }
    }
    while remaining > 0 {
        if !place_far_swap(&mut map, &mut free, n, delta_bar, &mut rng) {
            return Err(Error::Infeasible(format!(
                "ran out of room for {remaining} more violations (delta_bar={delta_bar}, n={n})"
            )));
        }
        remaining -= 2;
    }

    // Local texture on a few of the untouched positions: adjacent swaps are
    // displacement 1, harmless whenever delta_bar >= 1.
    if delta_bar >= 1 {
        let mut candidates: Vec<usize> =
            (1..n.saturating_sub(1)).filter(|&i| free[i] && free[i + 1]).collect();
        candidates.shuffle(&mut rng);
        let want = (n / 16).min(candidates.len());
        let mut used = 0;
        for &i in &candidates {
            if used >= want {
                break;
            }
            if free[i] && free[i + 1] && rng.random_bool(0.5) {
                map.swap(i, i + 1);
                free[i] = false;
                free[i + 1] = false;
                used += 1;
            }
        }
    }

    let perm = Permutation::from_map(map, true)?;
    let measured = measure_goodness(&perm, delta_bar).n_delta;
    if measured != n_delta {
        return Err(Error::Infeasible(format!(
            "constructed map measures n_delta={measured}, wanted {n_delta}"
        )));
    }
    Ok(perm)
}

/// Swap two free positions at distance > delta_bar: two violations.
fn place_far_swap(
    map: &mut [usize],
    free: &mut [bool],
    n: usize,
    delta_bar: usize,
    rng: &mut impl rand::Rng,
) -> bool {
    for _ in 0..4 * n {
        let i = rng.random_range(1..n);
        if !free[i] {
            continue;
        }
        let lo_room = i > delta_bar + 1;
        let hi_room = i + delta_bar + 1 < n;
        if !lo_room && !hi_room {
            continue;
        }
        let go_hi = if lo_room && hi_room { rng.random_bool(0.5) } else { hi_room };
        let j = if go_hi {
            rng.random_range(i + delta_bar + 1..n)
        } else {
            rng.random_range(1..i - delta_bar)
        };
        if free[j] {
            map.swap(i, j);
            free[i] = false;
            free[j] = false;
            return true;
        }
    }
    false
}

/// 3-cycle with all pairwise distances > delta_bar: three violations.
fn place_wide_three_cycle(
    map: &mut [usize],
    free: &mut [bool],
    n: usize,
    delta_bar: usize,
    rng: &mut impl rand::Rng,
) -> bool {
    let span = 2 * delta_bar + 2;
    if n < span + 2 {
        return false;
    }
    for _ in 0..4 * n {
        let i = rng.random_range(1..n - span);
        let j = i + delta_bar + 1;
        let m = j + delta_bar + 1;
        if free[i] && free[j] && free[m] {
            // positions i <- image of j, j <- image of m, m <- image of i
            let (a, b, c) = (map[i], map[j], map[m]);
            map[i] = b;
            map[j] = c;
            map[m] = a;
            free[i] = false;
            free[j] = false;
            free[m] = false;
            return true;
        }
    }
    false
}

/// 3-cycle with one long edge and two short ones: exactly one violation.
/// Positions (i, i+1, i+delta_bar+1): i takes the far image, the others stay
/// within delta_bar.
fn place_lopsided_three_cycle(
    map: &mut [usize],
    free: &mut [bool],
    n: usize,
    delta_bar: usize,
    rng: &mut impl rand::Rng,
) -> bool {
    if n < delta_bar + 3 {
        return false;
    }
    for _ in 0..4 * n {
        let i = rng.random_range(1..n - delta_bar - 1);
        let m = i + 1;
        let j = i + delta_bar + 1;
        if free[i] && free[m] && free[j] {
            // |i - j| = delta_bar + 1 (violation), |m - i| = 1,
            // |j - m| = delta_bar;  images rotate i -> j -> m -> i.
            let (a, b, c) = (map[i], map[m], map[j]);
            map[i] = c;
            map[j] = b;
            map[m] = a;
            free[i] = false;
            free[m] = false;
            free[j] = false;
            return true;
        }
    }
    false
}

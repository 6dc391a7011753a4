//! Independent-set selection for one contraction round.

use rayon::prelude::*;

use super::{Scheme, NONE32};

/// One neighbor of a selection candidate, as the round sees it.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CandNbr {
    pub vert: u32,
    /// Index into the candidate list, or `NONE32` if the neighbor is not
    /// being re-decided this round.
    pub cand: u32,
    /// Degree at most 2 this round.
    pub eligible: bool,
    /// Non-candidate whose standing decision this round is a contraction;
    /// such a neighbor blocks the candidate outright.
    pub contracted: bool,
}

impl CandNbr {
    pub(crate) fn empty() -> Self {
        CandNbr { vert: NONE32, cand: NONE32, eligible: false, contracted: false }
    }
}

/// Everything the selection needs to know about this round's candidates.
/// Vertex ids double as the valid initial coloring.
#[derive(Clone, Debug, Default)]
pub(crate) struct SelectInput {
    pub verts: Vec<u32>,
    pub degs: Vec<u8>,
    pub nbrs: Vec<[CandNbr; 3]>,
}

impl SelectInput {
    fn nbrs_of(&self, i: usize) -> &[CandNbr] {
        &self.nbrs[i][..self.degs[i] as usize]
    }
}

/// splitmix64; the per-round random colors are `mix(seed, level, v)` so a
/// seed fully reproduces a randomized build.
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

pub(crate) fn random_color(seed: u64, level: u32, v: u32) -> u64 {
    mix(seed ^ mix(level as u64 + 1) ^ mix(v as u64 ^ 0xd1b54a32d192ed03))
}

/// Chain color of a node with initial color `init` against the initial
/// colors of its eligible neighbors: reserved colors 0/1 for local
/// maxima/minima, otherwise `2 + 2i + b` where `i` is the first bit on
/// which `init` differs from the maximum-colored eligible neighbor and `b`
/// the node's bit there. Adjacent eligible nodes always end up distinct,
/// and the number of distinct colors is logarithmic in the initial range.
pub(crate) fn chain_color(init: u64, eligible_nbrs: &[u64]) -> u32 {
    if eligible_nbrs.iter().all(|&c| c < init) {
        return 0;
    }
    if eligible_nbrs.iter().all(|&c| c > init) {
        return 1;
    }
    let m = *eligible_nbrs.iter().max().unwrap();
    let i = (init ^ m).trailing_zeros();
    let bit = ((init >> i) & 1) as u32;
    2 + 2 * i + bit
}

/// Decides which candidates contract this round. Degree-0 candidates
/// always finalize. A candidate adjacent to a standing contraction never
/// contracts. Among the rest, `Randomized` picks strict local
/// `(color, id)` maxima; `Deterministic` extracts a maximal independent
/// set by sweeping the chain colors in increasing order.
pub(crate) fn select(scheme: &Scheme, seed: u64, level: u32, input: &SelectInput) -> Vec<bool> {
    match scheme {
        Scheme::Randomized => select_randomized(seed, level, input),
        Scheme::Deterministic => select_deterministic(input),
        Scheme::Forced(_) => unreachable!("forced schedules are resolved by the caller"),
    }
}

fn base_ok(input: &SelectInput, i: usize) -> bool {
    input.degs[i] <= 2 && input.nbrs_of(i).iter().all(|n| !n.contracted)
}

fn select_randomized(seed: u64, level: u32, input: &SelectInput) -> Vec<bool> {
    let one = |i: usize| -> bool {
        let v = input.verts[i];
        if input.degs[i] == 0 {
            return true;
        }
        if !base_ok(input, i) {
            return false;
        }
        let mine = (random_color(seed, level, v), v);
        input
            .nbrs_of(i)
            .iter()
            .filter(|n| n.eligible)
            .all(|n| (random_color(seed, level, n.vert), n.vert) < mine)
    };
    if input.verts.len() >= 4096 {
        (0..input.verts.len()).into_par_iter().map(one).collect()
    } else {
        (0..input.verts.len()).map(one).collect()
    }
}

fn select_deterministic(input: &SelectInput) -> Vec<bool> {
    let k = input.verts.len();
    let color_of = |i: usize| -> u32 {
        if input.degs[i] > 2 {
            return u32::MAX;
        }
        let mut nbr_inits = [0u64; 3];
        let mut m = 0;
        for n in input.nbrs_of(i) {
            if n.eligible {
                nbr_inits[m] = n.vert as u64;
                m += 1;
            }
        }
        chain_color(input.verts[i] as u64, &nbr_inits[..m])
    };
    let colors: Vec<u32> = if k >= 4096 {
        (0..k).into_par_iter().map(color_of).collect()
    } else {
        (0..k).map(color_of).collect()
    };

    let mut order: Vec<u32> = (0..k as u32).filter(|&i| colors[i as usize] != u32::MAX).collect();
    if k >= 4096 {
        order.par_sort_unstable_by_key(|&i| (colors[i as usize], input.verts[i as usize]));
    } else {
        order.sort_unstable_by_key(|&i| (colors[i as usize], input.verts[i as usize]));
    }

    let mut selected = vec![false; k];
    for i in order {
        let i = i as usize;
        if input.degs[i] == 0 {
            selected[i] = true;
            continue;
        }
        if !base_ok(input, i) {
            continue;
        }
        let free = input
            .nbrs_of(i)
            .iter()
            .all(|n| n.cand == NONE32 || !selected[n.cand as usize]);
        if free {
            selected[i] = true;
        }
    }
    selected
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Candidate graph for a chain of `n` eligible nodes with the given
    /// vertex labels.
    fn chain_input(labels: &[u32]) -> SelectInput {
        let n = labels.len();
        let mut input = SelectInput {
            verts: labels.to_vec(),
            degs: vec![0; n],
            nbrs: vec![[CandNbr::empty(); 3]; n],
        };
        for i in 0..n {
            let mut deg = 0;
            if i > 0 {
                input.nbrs[i][deg] = CandNbr {
                    vert: labels[i - 1],
                    cand: (i - 1) as u32,
                    eligible: true,
                    contracted: false,
                };
                deg += 1;
            }
            if i + 1 < n {
                input.nbrs[i][deg] = CandNbr {
                    vert: labels[i + 1],
                    cand: (i + 1) as u32,
                    eligible: true,
                    contracted: false,
                };
                deg += 1;
            }
            input.degs[i] = deg as u8;
        }
        input
    }

    fn assert_independent(input: &SelectInput, sel: &[bool]) {
        for i in 0..sel.len() {
            if !sel[i] {
                continue;
            }
            for n in input.nbrs_of(i) {
                if n.cand != NONE32 {
                    assert!(!sel[n.cand as usize], "adjacent pair selected");
                }
            }
        }
    }

    fn assert_maximal(input: &SelectInput, sel: &[bool]) {
        for i in 0..sel.len() {
            if sel[i] || input.degs[i] > 2 {
                continue;
            }
            let covered = input
                .nbrs_of(i)
                .iter()
                .any(|n| n.cand != NONE32 && sel[n.cand as usize]);
            assert!(covered, "eligible node {i} neither selected nor covered");
        }
    }

    #[test]
    fn isolated_vertex_always_selected() {
        let input = SelectInput {
            verts: vec![7],
            degs: vec![0],
            nbrs: vec![[CandNbr::empty(); 3]],
        };
        assert_eq!(select(&Scheme::Randomized, 1, 0, &input), vec![true]);
        assert_eq!(select(&Scheme::Deterministic, 1, 0, &input), vec![true]);
    }

    #[test]
    fn deterministic_chain_is_maximal_independent() {
        let labels: Vec<u32> = (0..10).collect();
        let input = chain_input(&labels);
        let sel = select(&Scheme::Deterministic, 0, 0, &input);
        assert_independent(&input, &sel);
        assert_maximal(&input, &sel);
    }

    #[test]
    fn deterministic_random_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let n = rng.gen_range(1..40);
            let mut labels: Vec<u32> = (0..1000).choose_multiple(&mut rng, n);
            labels.shuffle(&mut rng);
            let input = chain_input(&labels);
            let sel = select(&Scheme::Deterministic, 0, 0, &input);
            assert_independent(&input, &sel);
            assert_maximal(&input, &sel);
        }
    }

    #[test]
    fn randomized_chain_is_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for seed in 0..100u64 {
            let n = rng.gen_range(2..50);
            let labels: Vec<u32> = (0..n as u32).collect();
            let input = chain_input(&labels);
            let sel = select(&Scheme::Randomized, seed, 3, &input);
            assert_independent(&input, &sel);
            assert!(sel.iter().any(|&s| s), "the global maximum is always selected");
        }
    }

    #[test]
    fn chain_coloring_is_proper_and_small() {
        // consecutive indices on a chain: at most ceil(log2 n) + 2 colors
        let n = 10usize;
        let labels: Vec<u32> = (0..n as u32).collect();
        let mut colors = Vec::new();
        for i in 0..n {
            let mut nbrs = Vec::new();
            if i > 0 {
                nbrs.push(labels[i - 1] as u64);
            }
            if i + 1 < n {
                nbrs.push(labels[i + 1] as u64);
            }
            colors.push(chain_color(labels[i] as u64, &nbrs));
        }
        for w in colors.windows(2) {
            assert_ne!(w[0], w[1], "adjacent colors collide: {colors:?}");
        }
        let mut distinct = colors.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let bound = (n as f64).log2().ceil() as usize + 2;
        assert!(distinct.len() <= bound, "{} colors > {bound}", distinct.len());
    }

    #[test]
    fn chain_coloring_proper_on_random_labels() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..500 {
            let n = rng.gen_range(2..60);
            let mut labels: Vec<u64> = (0..100_000u64).choose_multiple(&mut rng, n);
            labels.shuffle(&mut rng);
            let color = |i: usize| {
                let mut nbrs = Vec::new();
                if i > 0 {
                    nbrs.push(labels[i - 1]);
                }
                if i + 1 < n {
                    nbrs.push(labels[i + 1]);
                }
                chain_color(labels[i], &nbrs)
            };
            for i in 0..n - 1 {
                assert_ne!(color(i), color(i + 1), "labels {labels:?} at {i}");
            }
        }
    }
}

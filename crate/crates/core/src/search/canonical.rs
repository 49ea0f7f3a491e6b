//! Permutation-invariant keys for framed links.
//!
//! Colour refinement on the weighted graph of the linking matrix, then
//! individualisation over the remaining ties, keeping the lexicographically
//! smallest encoding. A branch is skipped when swapping it with an already
//! explored sibling is an automorphism.

use crate::link::FramedLink;

pub type Key = Box<[u8]>;

/// Canonical ordering of the components and the key it produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub order: Vec<usize>,
    pub key: Key,
}

pub fn canonical_key(link: &FramedLink) -> Key {
    canonical_form(link, None).key
}

/// Key where component i additionally carries `colors[i]`; only
/// permutations preserving the colours identify two links.
pub fn canonical_key_colored(link: &FramedLink, colors: &[u64]) -> Key {
    canonical_form(link, Some(colors)).key
}

pub fn canonical_form(link: &FramedLink, colors: Option<&[u64]>) -> Canonical {
    let g = Graph::new(link, colors);
    let mut best: Option<(Vec<i64>, Vec<usize>)> = None;
    let start = g.refine(g.initial_colors());
    g.search(start, &mut best);
    let (code, order) = best.unwrap_or_default();
    Canonical { order, key: encode(&code) }
}

struct Graph {
    n: usize,
    attr: Vec<(u64, bool, i64)>,
    m: Vec<i64>,
}

impl Graph {
    fn new(link: &FramedLink, colors: Option<&[u64]>) -> Self {
        let n = link.len();
        let attr = (0..n)
            .map(|i| (colors.map_or(0, |c| c[i]), link.is_dotted(i), link.linking(i, i)))
            .collect();
        let m = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| link.linking(i, j)).collect();
        Graph { n, attr, m }
    }

    fn at(&self, i: usize, j: usize) -> i64 {
        self.m[i * self.n + j]
    }

    fn initial_colors(&self) -> Vec<u32> {
        let sigs: Vec<_> = (0..self.n)
            .map(|i| {
                let mut abs: Vec<u64> = (0..self.n).filter(|&j| j != i).map(|j| self.at(i, j).unsigned_abs()).collect();
                abs.sort_unstable();
                (self.attr[i], abs)
            })
            .collect();
        rank(&sigs)
    }

    /// Iterated refinement: a component's new colour is its old colour plus
    /// the multiset of (neighbour colour, linking) over nonzero links.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<_> = (0..self.n)
                .map(|i| {
                    let mut nb: Vec<(u32, i64)> = (0..self.n)
                        .filter(|&j| j != i && self.at(i, j) != 0)
                        .map(|j| (colors[j], self.at(i, j)))
                        .collect();
                    nb.sort_unstable();
                    (colors[i], nb)
                })
                .collect();
            let next = rank(&sigs);
            let next_classes = count_classes(&next);
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    fn is_swap_automorphism(&self, v: usize, w: usize) -> bool {
        self.attr[v] == self.attr[w] && (0..self.n).all(|k| k == v || k == w || self.at(v, k) == self.at(w, k))
    }

    fn search(&self, colors: Vec<u32>, best: &mut Option<(Vec<i64>, Vec<usize>)>) {
        let classes = count_classes(&colors);
        if classes == self.n {
            let mut order = vec![0; self.n];
            for (v, &c) in colors.iter().enumerate() {
                order[c as usize] = v;
            }
            let code = self.code(&order);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, order));
            }
            return;
        }
        let target = (0..classes as u32)
            .find(|&c| colors.iter().filter(|&&x| x == c).count() > 1)
            .expect("a non-discrete colouring has a non-singleton cell");
        let cell: Vec<usize> = (0..self.n).filter(|&v| colors[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if tried.iter().any(|&w| self.is_swap_automorphism(v, w)) {
                continue;
            }
            tried.push(v);
            let split: Vec<u32> = (0..self.n)
                .map(|u| 2 * colors[u] + u32::from(colors[u] == target && u != v))
                .collect();
            self.search(self.refine(rank(&split)), best);
        }
    }

    fn code(&self, order: &[usize]) -> Vec<i64> {
        let mut out = Vec::with_capacity(1 + 3 * self.n + self.n * self.n / 2);
        out.push(self.n as i64);
        for &v in order {
            let (c, d, f) = self.attr[v];
            out.extend([c as i64, i64::from(d), f]);
        }
        for (a, &i) in order.iter().enumerate() {
            for &j in &order[a + 1..] {
                out.push(self.at(i, j));
            }
        }
        out
    }
}

fn rank<T: Ord>(sigs: &[T]) -> Vec<u32> {
    let mut sorted: Vec<&T> = sigs.iter().collect();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(&s).expect("present") as u32).collect()
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

/// Zigzag varints.
fn encode(code: &[i64]) -> Key {
    let mut out = Vec::with_capacity(code.len() + 8);
    for &x in code {
        let mut z = ((x << 1) ^ (x >> 63)) as u64;
        loop {
            let byte = (z & 0x7f) as u8;
            z >>= 7;
            if z == 0 {
                out.push(byte);
                break;
            }
            out.push(byte | 0x80);
        }
    }
    out.into_boxed_slice()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainSpec;

    #[test]
    fn chain_orderings_agree() {
        let chain = FramedLink::from_matrix(&ChainSpec::new(3).matrix()).unwrap();
        let shuffled = chain.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(canonical_key(&chain), canonical_key(&shuffled));
    }

    #[test]
    fn chain_differs_from_split_pair() {
        let chain = FramedLink::from_matrix(&ChainSpec::new(2).matrix()).unwrap();
        let split = FramedLink::from_matrix(&[vec![-2, 0], vec![0, -2]]).unwrap();
        assert_ne!(canonical_key(&chain), canonical_key(&split));
    }

    #[test]
    fn key_is_pinned() {
        let chain = FramedLink::from_matrix(&ChainSpec::new(2).matrix()).unwrap();
        // n=2, attrs (0,0,-2) twice, off-diagonal 1, zigzag encoded
        assert_eq!(&*canonical_key(&chain), &[4, 0, 0, 3, 0, 0, 3, 2]);
    }

    #[test]
    fn symmetric_links_stay_cheap() {
        let link = FramedLink::from_matrix(&vec![vec![0; 12]; 12]).unwrap();
        let c = canonical_form(&link, None);
        assert_eq!(c.order.len(), 12);
    }

    #[test]
    fn colors_separate_otherwise_equal_links() {
        let link = FramedLink::from_matrix(&[vec![-1, 0], vec![0, -1]]).unwrap();
        assert_eq!(canonical_key_colored(&link, &[1, 0]), canonical_key_colored(&link, &[0, 1]));
        let three = FramedLink::from_matrix(&[vec![-1, 1, 0], vec![1, -1, 0], vec![0, 0, -1]]).unwrap();
        assert_ne!(canonical_key_colored(&three, &[1, 0, 0]), canonical_key_colored(&three, &[0, 0, 1]));
    }
}

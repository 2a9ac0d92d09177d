//! Augmenting-path bipartite matching on a square support graph.
//!
//! Left vertices are messages, right vertices are cryptograms. The matching is
//! kept between calls so that deleting a few edges only costs a few
//! augmentations.

pub(crate) struct Matching {
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

impl Matching {
    pub(crate) fn new(n: usize) -> Self {
        Matching {
            left: vec![None; n],
            right: vec![None; n],
        }
    }

    /// Unmatch `l` if its current edge is no longer in `support`.
    pub(crate) fn drop_dead_edges(&mut self, support: &[Vec<bool>]) {
        for (l, edges) in support.iter().enumerate() {
            if let Some(r) = self.left[l] {
                if !edges[r] {
                    self.left[l] = None;
                    self.right[r] = None;
                }
            }
        }
    }

    /// Augment every unmatched left vertex, smallest index first. Returns false if some vertex cannot
    /// be matched (Hall's condition fails).
    pub(crate) fn complete(&mut self, support: &[Vec<bool>]) -> bool {
        let n = self.left.len();
        let mut visited = vec![false; n];
        for l in 0..n {
            if self.left[l].is_some() {
                continue;
            }
            visited.iter_mut().for_each(|v| *v = false);
            if !self.augment(l, support, &mut visited) {
                return false;
            }
        }
        true
    }

    /// A free neighbour is taken directly when one exists; only then are the
    /// matched neighbours re-routed, each in ascending order.
    fn augment(&mut self, l: usize, support: &[Vec<bool>], visited: &mut [bool]) -> bool {
        let neighbours = || (0..support[l].len()).filter(|&r| support[l][r]);
        let target = neighbours()
            .find(|&r| self.right[r].is_none() && !visited[r])
            .or_else(|| {
                neighbours().find(|&r| {
                    if visited[r] {
                        return false;
                    }
                    visited[r] = true;
                    let other = self.right[r].expect("free neighbours were tried first");
                    self.augment(other, support, visited)
                })
            });
        match target {
            Some(r) => {
                visited[r] = true;
                self.left[l] = Some(r);
                self.right[r] = Some(l);
                true
            }
            None => false,
        }
    }

    /// `perm[l] = r`. Only meaningful after a successful [`complete`](Self::complete).
    pub(crate) fn permutation(&self) -> Vec<usize> {
        self.left
            .iter()
            .map(|r| r.expect("matching is perfect"))
            .collect()
    }
}

/// A perfect matching of the support graph, if one exists.
pub fn perfect_matching(support: &[Vec<bool>]) -> Option<Vec<usize>> {
    let mut m = Matching::new(support.len());
    m.complete(support).then(|| m.permutation())
}

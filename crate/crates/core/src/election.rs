use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// A candidate is an index into the roster.
pub type Cand = usize;

/// A strict ranking, stored in both directions.
///
/// `order[i]` is the candidate at position `i` (0 is the top) and
/// `rank[c]` is the position of candidate `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vote {
    order: Vec<Cand>,
    rank: Vec<usize>,
}

impl Vote {
    /// Builds a vote from its ranking, top first.
    pub fn from_order(order: Vec<Cand>) -> Result<Vote, Error> {
        let m = order.len();
        let mut rank = vec![usize::MAX; m];
        for (i, &c) in order.iter().enumerate() {
            if c >= m || rank[c] != usize::MAX {
                return Err(Error::NotAPermutation { vote: 0 });
            }
            rank[c] = i;
        }
        Ok(Vote { order, rank })
    }

    /// The identity ranking `0 > 1 > ... > m-1`.
    pub fn identity(m: usize) -> Vote {
        Vote { order: (0..m).collect(), rank: (0..m).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Candidates from most to least preferred.
    pub fn order(&self) -> &[Cand] {
        &self.order
    }

    /// Zero-based position of `c`.
    #[inline]
    pub fn rank(&self, c: Cand) -> usize {
        self.rank[c]
    }

    /// One-based position of `c`, the convention used for approval thresholds.
    #[inline]
    pub fn position(&self, c: Cand) -> usize {
        self.rank[c] + 1
    }

    #[inline]
    pub fn prefers(&self, a: Cand, b: Cand) -> bool {
        self.rank[a] < self.rank[b]
    }

    pub fn top(&self) -> Cand {
        self.order[0]
    }

    pub fn last(&self) -> Cand {
        self.order[self.order.len() - 1]
    }

    /// Candidates ranked strictly above `c`, best first.
    pub fn above(&self, c: Cand) -> &[Cand] {
        &self.order[..self.rank[c]]
    }

    pub fn reversed(&self) -> Vote {
        let mut order = self.order.clone();
        order.reverse();
        Vote::from_order(order).expect("reversal keeps a permutation")
    }
}

/// A roster of named candidates together with a sequence of votes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    names: Vec<String>,
    votes: Vec<Vote>,
}

impl Election {
    pub fn new(names: Vec<String>, votes: Vec<Vote>) -> Result<Election, Error> {
        if names.is_empty() {
            return Err(Error::EmptyRoster);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateCandidate(n.clone()));
            }
        }
        for (i, v) in votes.iter().enumerate() {
            if v.len() != names.len() {
                return Err(Error::NotAPermutation { vote: i });
            }
        }
        Ok(Election { names, votes })
    }

    /// Election over candidates named `c0, c1, ...`.
    pub fn anonymous(m: usize, votes: Vec<Vote>) -> Result<Election, Error> {
        let names = (0..m).map(|i| alloc::format!("c{i}")).collect();
        Election::new(names, votes)
    }

    /// Builds an election from ranked name lists, e.g. `[["a","b"],["b","a"]]`.
    pub fn from_names(names: &[&str], votes: &[&[&str]]) -> Result<Election, Error> {
        let roster: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::with_capacity(votes.len());
        for (i, v) in votes.iter().enumerate() {
            let mut order = Vec::with_capacity(v.len());
            for name in v.iter() {
                let c = roster
                    .iter()
                    .position(|r| r == name)
                    .ok_or_else(|| Error::UnknownCandidate(name.to_string()))?;
                order.push(c);
            }
            out.push(Vote::from_order(order).map_err(|_| Error::NotAPermutation { vote: i })?);
        }
        Election::new(roster, out)
    }

    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn n(&self) -> usize {
        self.votes.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, c: Cand) -> &str {
        &self.names[c]
    }

    pub fn candidate(&self, name: &str) -> Option<Cand> {
        self.names.iter().position(|n| n == name)
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    /// Same roster, different votes.
    pub fn with_votes(&self, votes: Vec<Vote>) -> Election {
        debug_assert!(votes.iter().all(|v| v.len() == self.m()));
        Election { names: self.names.clone(), votes }
    }

    /// Same roster, the votes at `indices` only.
    pub fn select(&self, indices: &[usize]) -> Election {
        self.with_votes(indices.iter().map(|&i| self.votes[i].clone()).collect())
    }

    /// Pairwise majority counts.
    pub fn majority_matrix(&self) -> MajorityMatrix {
        let m = self.m();
        let mut counts = vec![0u32; m * m];
        for v in &self.votes {
            let order = v.order();
            for (i, &a) in order.iter().enumerate() {
                for &b in &order[i + 1..] {
                    counts[a * m + b] += 1;
                }
            }
        }
        MajorityMatrix { m, n: self.n() as u32, counts }
    }

    /// Restriction of every vote to `subset`, keeping relative orders.
    ///
    /// Candidates of the result are the members of `subset` in roster order.
    pub fn restrict(&self, subset: &[Cand]) -> Result<Election, Error> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let m = self.m();
        let mut new_index = vec![usize::MAX; m];
        for &c in subset {
            if c >= m {
                return Err(Error::CandidateOutOfRange(c));
            }
            if new_index[c] != usize::MAX {
                return Err(Error::DuplicateCandidate(self.names[c].clone()));
            }
            new_index[c] = 0;
        }
        let mut names = Vec::with_capacity(subset.len());
        for c in 0..m {
            if new_index[c] != usize::MAX {
                new_index[c] = names.len();
                names.push(self.names[c].clone());
            }
        }
        let votes = self
            .votes
            .iter()
            .map(|v| {
                let order =
                    v.order().iter().filter(|&&c| new_index[c] != usize::MAX).map(|&c| new_index[c]);
                Vote::from_order(order.collect()).expect("restriction keeps a permutation")
            })
            .collect();
        Ok(Election { names, votes })
    }
}

/// `N(c, d)`: how many votes rank `c` above `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorityMatrix {
    m: usize,
    n: u32,
    counts: Vec<u32>,
}

impl MajorityMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn get(&self, c: Cand, d: Cand) -> u32 {
        self.counts[c * self.m + d]
    }

    #[inline]
    pub fn beats(&self, c: Cand, d: Cand) -> bool {
        self.get(c, d) > self.get(d, c)
    }

    #[inline]
    pub fn ties(&self, c: Cand, d: Cand) -> bool {
        c != d && self.get(c, d) == self.get(d, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle() -> Election {
        Election::from_names(
            &["a", "b", "c"],
            &[&["a", "b", "c"], &["b", "c", "a"], &["c", "a", "b"]],
        )
        .unwrap()
    }

    #[test]
    fn unanimous_pair() {
        let e = Election::from_names(&["a", "b"], &[&["a", "b"], &["a", "b"]]).unwrap();
        let n = e.majority_matrix();
        assert_eq!((n.get(0, 1), n.get(1, 0)), (2, 0));
    }

    #[test]
    fn empty_profile_has_zero_counts() {
        let e = Election::from_names(&["a", "b", "c"], &[]).unwrap();
        let n = e.majority_matrix();
        for c in 0..3 {
            for d in 0..3 {
                assert_eq!(n.get(c, d), 0);
            }
        }
    }

    #[test]
    fn cycle_counts() {
        let n = cycle().majority_matrix();
        assert_eq!((n.get(0, 1), n.get(1, 2), n.get(2, 0)), (2, 2, 2));
    }

    #[test]
    fn restrict_keeps_order() {
        let e = Election::from_names(&["a", "b", "c"], &[&["a", "b", "c"]]).unwrap();
        let r = e.restrict(&[0, 2]).unwrap();
        assert_eq!(r.names(), &["a", "c"]);
        assert_eq!(r.votes()[0].order(), &[0, 1]);
        assert_eq!(e.restrict(&[0, 1, 2]).unwrap(), e);
    }

    #[test]
    fn cycle_restricted_to_two() {
        let r = cycle().restrict(&[0, 1]).unwrap();
        let orders: Vec<&[usize]> = r.votes().iter().map(|v| v.order()).collect();
        assert_eq!(orders, [&[0, 1][..], &[1, 0], &[0, 1]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Election::new(Vec::new(), Vec::new()), Err(Error::EmptyRoster));
        assert!(Election::from_names(&["a", "a"], &[]).is_err());
        assert!(Vote::from_order(alloc::vec![0, 0]).is_err());
        assert!(cycle().restrict(&[]).is_err());
        assert!(cycle().restrict(&[5]).is_err());
    }
}

//! Constructive control by adding or deleting votes, and the exhaustive
//! oracle used to cross-check every other solver.

use alloc::vec;
use alloc::vec::Vec;

use crate::election::{Cand, Election, Vote};
use crate::error::Error;
use crate::rules::{self, Rule};

/// Whether the distinguished candidate has to win alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Model {
    #[default]
    Unique,
    NonUnique,
}

/// Add at most `budget` votes of `pool` to `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcavInstance {
    pub base: Election,
    pub pool: Vec<Vote>,
    pub p: Cand,
    pub budget: usize,
    pub rule: Rule,
    pub model: Model,
}

/// Delete at most `budget` votes of `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcdvInstance {
    pub base: Election,
    pub p: Cand,
    pub budget: usize,
    pub rule: Rule,
    pub model: Model,
}

/// Selected vote indices, ascending: into the pool for CCAV, into the
/// registered votes for CCDV.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Solution {
    pub indices: Vec<usize>,
}

impl Solution {
    pub fn new(mut indices: Vec<usize>) -> Solution {
        indices.sort_unstable();
        Solution { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Whether `p` wins `e` under `rule` in the given model.
pub fn wins(rule: &Rule, model: Model, e: &Election, p: Cand) -> bool {
    let w = rules::winners(rule, e);
    match model {
        Model::Unique => w == [p],
        Model::NonUnique => w.contains(&p),
    }
}

fn check_indices(sol: &Solution, len: usize, budget: usize) -> Result<(), Error> {
    if sol.indices.len() > budget {
        return Err(Error::InvalidSolution("more votes than the budget"));
    }
    if sol.indices.iter().any(|&i| i >= len) {
        return Err(Error::InvalidSolution("vote index out of range"));
    }
    if sol.indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSolution("indices must be strictly increasing"));
    }
    Ok(())
}

pub fn is_feasible_ccav(inst: &CcavInstance, sol: &Solution) -> Result<bool, Error> {
    check_indices(sol, inst.pool.len(), inst.budget)?;
    let mut votes = inst.base.votes().to_vec();
    votes.extend(sol.indices.iter().map(|&i| inst.pool[i].clone()));
    Ok(wins(&inst.rule, inst.model, &inst.base.with_votes(votes), inst.p))
}

pub fn is_feasible_ccdv(inst: &CcdvInstance, sol: &Solution) -> Result<bool, Error> {
    check_indices(sol, inst.base.n(), inst.budget)?;
    let keep: Vec<usize> = (0..inst.base.n()).filter(|i| sol.indices.binary_search(i).is_err()).collect();
    Ok(wins(&inst.rule, inst.model, &inst.base.select(&keep), inst.p))
}

/// Restrictions of the search space, each valid only under its stated
/// argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pruning {
    /// r-approval CCAV: only votes approving `p` can help, so others are
    /// never in a minimum solution.
    ApprovingP,
    /// r-approval CCDV: deleting a vote that approves `p` never helps.
    NonApprovingP,
    /// Gadget-specific: the listed votes are never needed.
    Exclude { votes: Vec<usize>, reason: &'static str },
}

impl Pruning {
    pub fn tag(&self) -> &'static str {
        match self {
            Pruning::ApprovingP => "approving-p-only",
            Pruning::NonApprovingP => "delete-non-approving-only",
            Pruning::Exclude { reason, .. } => reason,
        }
    }
}

/// Default guardrail on the number of subsets a search may visit.
pub const DEFAULT_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub cap: u128,
    pub pruning: Option<Pruning>,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions { cap: DEFAULT_CAP, pruning: None }
    }
}

/// Number of subsets of size at most `k` of an `n`-set, saturating.
pub fn subsets_up_to(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for i in 0..=k.min(n) {
        total = total.saturating_add(term);
        term = term.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    total
}

/// Running tally that can add or remove single votes.
#[derive(Debug, Clone)]
enum Tally {
    /// Integer scores of a positional rule.
    Scores(Vec<i64>),
    /// `margin[c] = N(p, c) - N(c, p)`, enough for a unique Condorcet winner.
    Margins(Vec<i64>),
    /// Full pairwise counts, row-major.
    Pairwise(Vec<i64>),
}

/// A prepared exhaustive search; immutable and shareable between threads.
#[derive(Debug, Clone)]
pub struct Search {
    rule: Rule,
    model: Model,
    m: usize,
    p: Cand,
    budget: usize,
    /// +1 when adding votes, -1 when deleting.
    sign: i64,
    base: Tally,
    /// Original vote index of each search item.
    items: Vec<usize>,
    votes: Vec<Vote>,
}

impl Search {
    pub fn ccav(inst: &CcavInstance, opts: &SearchOptions) -> Result<Search, Error> {
        let r = approval_threshold(&inst.rule);
        let items: Vec<usize> = match &opts.pruning {
            None => (0..inst.pool.len()).collect(),
            Some(Pruning::ApprovingP) => {
                let r = r.ok_or(Error::WrongRule("r-approval"))?;
                (0..inst.pool.len()).filter(|&i| inst.pool[i].position(inst.p) <= r).collect()
            }
            Some(Pruning::NonApprovingP) => return Err(Error::UnsupportedParameter("pruning is for deletion")),
            Some(Pruning::Exclude { votes, .. }) => {
                (0..inst.pool.len()).filter(|i| !votes.contains(i)).collect()
            }
        };
        let votes = items.iter().map(|&i| inst.pool[i].clone()).collect();
        Search::prepare(&inst.base, inst.p, inst.budget, inst.rule, inst.model, 1, items, votes, opts.cap)
    }

    pub fn ccdv(inst: &CcdvInstance, opts: &SearchOptions) -> Result<Search, Error> {
        let base = inst.base.votes();
        let items: Vec<usize> = match &opts.pruning {
            None => (0..base.len()).collect(),
            Some(Pruning::NonApprovingP) => {
                let r = approval_threshold(&inst.rule).ok_or(Error::WrongRule("r-approval"))?;
                (0..base.len()).filter(|&i| base[i].position(inst.p) > r).collect()
            }
            Some(Pruning::ApprovingP) => return Err(Error::UnsupportedParameter("pruning is for addition")),
            Some(Pruning::Exclude { votes, .. }) => (0..base.len()).filter(|i| !votes.contains(i)).collect(),
        };
        let votes = items.iter().map(|&i| base[i].clone()).collect();
        Search::prepare(&inst.base, inst.p, inst.budget, inst.rule, inst.model, -1, items, votes, opts.cap)
    }

    #[allow(clippy::too_many_arguments)]
    fn prepare(
        e: &Election,
        p: Cand,
        budget: usize,
        rule: Rule,
        model: Model,
        sign: i64,
        items: Vec<usize>,
        votes: Vec<Vote>,
        cap: u128,
    ) -> Result<Search, Error> {
        if p >= e.m() {
            return Err(Error::CandidateOutOfRange(p));
        }
        let needed = subsets_up_to(items.len(), budget);
        if needed > cap {
            return Err(Error::CapExceeded { needed, cap });
        }
        let m = e.m();
        let mut search = Search {
            rule,
            model,
            m,
            p,
            budget,
            sign,
            base: Tally::Scores(Vec::new()),
            items,
            votes,
        };
        search.base = match rule {
            Rule::RApproval(_) | Rule::Borda => Tally::Scores(vec![0; m]),
            Rule::Condorcet if model == Model::Unique => Tally::Margins(vec![0; m]),
            _ => Tally::Pairwise(vec![0; m * m]),
        };
        let mut base = search.base.clone();
        for v in e.votes() {
            search.apply(&mut base, v, 1);
        }
        search.base = base;
        Ok(search)
    }

    /// Number of votes the search chooses from.
    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn budget(&self) -> usize {
        self.budget.min(self.items.len())
    }

    fn apply(&self, t: &mut Tally, v: &Vote, sign: i64) {
        match t {
            Tally::Scores(s) => match self.rule {
                Rule::RApproval(r) => {
                    for &c in &v.order()[..r.min(self.m)] {
                        s[c] += sign;
                    }
                }
                _ => {
                    for (i, &c) in v.order().iter().enumerate() {
                        s[c] += sign * (self.m - 1 - i) as i64;
                    }
                }
            },
            Tally::Margins(margin) => {
                let rp = v.rank(self.p);
                for c in 0..self.m {
                    margin[c] += if v.rank(c) > rp { sign } else { -sign };
                }
            }
            Tally::Pairwise(n) => {
                let o = v.order();
                for (i, &a) in o.iter().enumerate() {
                    for &b in &o[i + 1..] {
                        n[a * self.m + b] += sign;
                    }
                }
            }
        }
    }

    fn satisfied(&self, t: &Tally) -> bool {
        let p = self.p;
        match t {
            Tally::Scores(s) => match self.model {
                Model::Unique => (0..self.m).all(|c| c == p || s[c] < s[p]),
                Model::NonUnique => (0..self.m).all(|c| s[c] <= s[p]),
            },
            Tally::Margins(margin) => (0..self.m).all(|c| c == p || margin[c] > 0),
            Tally::Pairwise(n) => {
                let w = rules::pairwise_winners(&self.rule, self.m, &|a, b| n[a * self.m + b]);
                match self.model {
                    Model::Unique => w == [p],
                    Model::NonUnique => w.contains(&p),
                }
            }
        }
    }

    /// True when no choice of `rem` more votes can make `p` win.
    fn hopeless(&self, t: &Tally, rem: i64) -> bool {
        let p = self.p;
        match (t, self.model) {
            (Tally::Margins(margin), _) => (0..self.m).any(|c| c != p && margin[c] + rem <= 0),
            (Tally::Scores(s), model) => {
                let step = match self.rule {
                    Rule::RApproval(_) => 1,
                    _ => self.m as i64 - 1,
                };
                let strict = (model == Model::Unique) as i64;
                (0..self.m).any(|c| c != p && s[c] - s[p] + strict > rem * step)
            }
            _ => false,
        }
    }

    /// Whether `p` already wins without any change.
    pub fn empty_works(&self) -> bool {
        self.satisfied(&self.base)
    }

    /// The lexicographically first feasible `k`-subset whose smallest item is
    /// `first`, as original vote indices.
    pub fn first_with(&self, k: usize, first: usize) -> Option<Solution> {
        if k == 0 || first + k > self.items.len() {
            return None;
        }
        let mut t = self.base.clone();
        self.apply(&mut t, &self.votes[first], self.sign);
        let mut chosen = vec![first];
        if self.dfs(&mut t, &mut chosen, first + 1, k - 1) {
            Some(Solution::new(chosen.into_iter().map(|i| self.items[i]).collect()))
        } else {
            None
        }
    }

    fn dfs(&self, t: &mut Tally, chosen: &mut Vec<usize>, start: usize, rem: usize) -> bool {
        if rem == 0 {
            return self.satisfied(t);
        }
        if self.hopeless(t, rem as i64) {
            return false;
        }
        for i in start..=self.items.len() - rem {
            self.apply(t, &self.votes[i], self.sign);
            chosen.push(i);
            if self.dfs(t, chosen, i + 1, rem - 1) {
                return true;
            }
            chosen.pop();
            self.apply(t, &self.votes[i], -self.sign);
        }
        false
    }

    /// Sequential search: smallest size first, lexicographic within a size.
    pub fn run(&self) -> Option<Solution> {
        if self.empty_works() {
            return Some(Solution::default());
        }
        for k in 1..=self.budget() {
            if let Some(s) = (0..self.items.len()).find_map(|f| self.first_with(k, f)) {
                return Some(s);
            }
        }
        None
    }
}

fn approval_threshold(rule: &Rule) -> Option<usize> {
    match *rule {
        Rule::RApproval(r) => Some(r),
        _ => None,
    }
}

/// Minimum-size solution by exhaustive search.
pub fn brute_force_ccav(inst: &CcavInstance, opts: &SearchOptions) -> Result<Option<Solution>, Error> {
    Ok(Search::ccav(inst, opts)?.run())
}

/// Minimum-size solution by exhaustive search.
pub fn brute_force_ccdv(inst: &CcdvInstance, opts: &SearchOptions) -> Result<Option<Solution>, Error> {
    Ok(Search::ccdv(inst, opts)?.run())
}

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::election::{Cand, Election, MajorityMatrix, Vote};
use crate::error::Error;

/// Exact score value.
pub type Score = Ratio<i64>;

/// The voting correspondences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Each vote approves its top `r` candidates.
    RApproval(usize),
    Borda,
    Condorcet,
    /// Beaten opponents plus `alpha` per tied opponent.
    CopelandAlpha(Ratio<i64>),
    Maximin,
}

impl Rule {
    /// Copeland with `alpha = num / den`, which must lie in `[0, 1]`.
    pub fn copeland(num: i64, den: i64) -> Result<Rule, Error> {
        if den <= 0 || num < 0 || num > den {
            return Err(Error::UnsupportedParameter("alpha must be a fraction in [0, 1]"));
        }
        Ok(Rule::CopelandAlpha(Ratio::new(num, den)))
    }

    pub fn is_pairwise(&self) -> bool {
        matches!(self, Rule::Condorcet | Rule::CopelandAlpha(_) | Rule::Maximin)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::RApproval(r) => write!(f, "approval:{r}"),
            Rule::Borda => write!(f, "borda"),
            Rule::Condorcet => write!(f, "condorcet"),
            Rule::CopelandAlpha(a) => write!(f, "copeland:{}/{}", a.numer(), a.denom()),
            Rule::Maximin => write!(f, "maximin"),
        }
    }
}

/// Parses `approval:R`, `borda`, `condorcet`, `copeland:NUM/DEN` (or `copeland:NUM`)
/// and `maximin`.
pub fn parse_rule(text: &str) -> Result<Rule, Error> {
    let text = text.trim();
    let (head, arg) = match text.split_once(':') {
        Some((h, a)) => (h, Some(a.trim())),
        None => (text, None),
    };
    let bad = || Error::UnsupportedParameter("unrecognised rule");
    match (head.to_ascii_lowercase().as_str(), arg) {
        ("approval", Some(r)) => {
            let r: usize = r.parse().map_err(|_| bad())?;
            if r == 0 {
                return Err(Error::UnsupportedParameter("approval threshold must be positive"));
            }
            Ok(Rule::RApproval(r))
        }
        ("borda", None) => Ok(Rule::Borda),
        ("condorcet", None) => Ok(Rule::Condorcet),
        ("maximin", None) => Ok(Rule::Maximin),
        ("copeland", Some(a)) => {
            let (num, den) = match a.split_once('/') {
                Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
                None => (a.parse().map_err(|_| bad())?, 1),
            };
            Rule::copeland(num, den)
        }
        _ => Err(bad()),
    }
}

/// Per-vote score contribution of `c` under a positional rule.
#[inline]
pub(crate) fn positional_points(rule: &Rule, v: &Vote, c: Cand) -> i64 {
    match *rule {
        Rule::RApproval(r) => (v.position(c) <= r) as i64,
        Rule::Borda => (v.len() - v.position(c)) as i64,
        _ => unreachable!("not a positional rule"),
    }
}

/// Score of `c` under `rule`.
pub fn score(rule: &Rule, e: &Election, c: Cand) -> Result<Score, Error> {
    if c >= e.m() {
        return Err(Error::CandidateOutOfRange(c));
    }
    match rule {
        Rule::Condorcet => Err(Error::CondorcetHasNoScore),
        Rule::RApproval(_) | Rule::Borda => {
            let s: i64 = e.votes().iter().map(|v| positional_points(rule, v, c)).sum();
            Ok(Score::from_integer(s))
        }
        _ => {
            let n = e.majority_matrix();
            Ok(pairwise_score(rule, e.m(), &|a, b| n.get(a, b) as i64, c))
        }
    }
}

/// Score of every candidate; `None` for Condorcet.
pub fn scores(rule: &Rule, e: &Election) -> Option<Vec<Score>> {
    match rule {
        Rule::Condorcet => None,
        Rule::RApproval(_) | Rule::Borda => {
            let mut s = vec![0i64; e.m()];
            for v in e.votes() {
                for c in 0..e.m() {
                    s[c] += positional_points(rule, v, c);
                }
            }
            Some(s.into_iter().map(Score::from_integer).collect())
        }
        _ => {
            let n = e.majority_matrix();
            Some((0..e.m()).map(|c| pairwise_score(rule, e.m(), &|a, b| n.get(a, b) as i64, c)).collect())
        }
    }
}

pub(crate) fn pairwise_score(rule: &Rule, m: usize, n: &dyn Fn(Cand, Cand) -> i64, c: Cand) -> Score {
    match *rule {
        Rule::CopelandAlpha(alpha) => {
            let (mut beaten, mut tied) = (0i64, 0i64);
            for d in (0..m).filter(|&d| d != c) {
                let (f, b) = (n(c, d), n(d, c));
                if f > b {
                    beaten += 1;
                } else if f == b {
                    tied += 1;
                }
            }
            Score::from_integer(beaten) + alpha * tied
        }
        Rule::Maximin => {
            let min = (0..m).filter(|&d| d != c).map(|d| n(c, d)).min();
            // A lone candidate has no opponent; any constant works.
            Score::from_integer(min.unwrap_or(0))
        }
        _ => unreachable!("not a pairwise score rule"),
    }
}

/// Candidates that beat every other candidate (at most one).
pub(crate) fn condorcet_winner(m: usize, n: &dyn Fn(Cand, Cand) -> i64) -> Option<Cand> {
    (0..m).find(|&c| (0..m).all(|d| d == c || n(c, d) > n(d, c)))
}

/// Winners from integer positional scores.
pub(crate) fn argmax(scores: &[i64]) -> Vec<Cand> {
    let best = scores.iter().copied().max().unwrap_or(0);
    (0..scores.len()).filter(|&c| scores[c] == best).collect()
}

/// Winners computed from a pairwise count accessor.
pub(crate) fn pairwise_winners(rule: &Rule, m: usize, n: &dyn Fn(Cand, Cand) -> i64) -> Vec<Cand> {
    if let Rule::Condorcet = rule {
        return match condorcet_winner(m, n) {
            Some(w) => vec![w],
            None => (0..m).collect(),
        };
    }
    let s: Vec<Score> = (0..m).map(|c| pairwise_score(rule, m, n, c)).collect();
    let best = s.iter().copied().max().expect("roster is non-empty");
    (0..m).filter(|&c| s[c] == best).collect()
}

/// The co-winner set, in roster order. Never empty.
pub fn winners(rule: &Rule, e: &Election) -> Vec<Cand> {
    match rule {
        Rule::RApproval(_) | Rule::Borda => {
            let mut s = vec![0i64; e.m()];
            for v in e.votes() {
                for c in 0..e.m() {
                    s[c] += positional_points(rule, v, c);
                }
            }
            argmax(&s)
        }
        _ => {
            let n = e.majority_matrix();
            pairwise_winners(rule, e.m(), &|a, b| n.get(a, b) as i64)
        }
    }
}

/// Candidates beaten by nobody. May be empty.
pub fn weak_condorcet_winners(e: &Election) -> Vec<Cand> {
    weak_winners_of(&e.majority_matrix())
}

pub fn weak_winners_of(n: &MajorityMatrix) -> Vec<Cand> {
    let m = n.m();
    (0..m).filter(|&c| (0..m).all(|d| !n.beats(d, c))).collect()
}

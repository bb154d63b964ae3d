//! Single-peakedness: checks, recognition, forbidden patterns, k-axes and
//! k-CP verification, 2-axes recognition, and vote construction on an axis.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::election::{Cand, Election, Vote};
use crate::error::Error;
use crate::sat2::{Lit, TwoSat};

/// A left-to-right order of the whole roster.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Axis {
    order: Vec<Cand>,
    pos: Vec<usize>,
}

impl Axis {
    pub fn new(order: Vec<Cand>) -> Result<Axis, Error> {
        let v = Vote::from_order(order).map_err(|_| Error::RosterMismatch)?;
        Ok(Axis { order: v.order().to_vec(), pos: (0..v.len()).map(|c| v.rank(c)).collect() })
    }

    pub fn identity(m: usize) -> Axis {
        Axis { order: (0..m).collect(), pos: (0..m).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[Cand] {
        &self.order
    }

    /// Zero-based place of `c` from the left.
    #[inline]
    pub fn pos(&self, c: Cand) -> usize {
        self.pos[c]
    }

    pub fn reversed(&self) -> Axis {
        let mut order = self.order.clone();
        order.reverse();
        Axis::new(order).expect("reversal keeps a permutation")
    }
}

/// Three votes and three candidates, each candidate ranked last among the
/// three by its own vote: `cands[i]` is last for `votes[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WdStructure {
    pub votes: [usize; 3],
    pub cands: [Cand; 3],
}

/// Votes `x`, `y` with `a > b > c` and `d > b` in `x`, and `c > b > a` and
/// `d > b` in `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaStructure {
    pub x: usize,
    pub y: usize,
    pub a: Cand,
    pub b: Cand,
    pub c: Cand,
    pub d: Cand,
}

/// Axes plus, for each vote, the index of an axis it is single-peaked on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxesCertificate {
    pub axes: Vec<Axis>,
    pub assignment: Vec<usize>,
}

/// A candidate partition whose parts are each single-peaked, with an axis
/// for every part (over the part's own indices, in roster order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpCertificate {
    pub parts: Vec<Vec<Cand>>,
    pub axes: Vec<Axis>,
}

/// A split of the votes into two single-peaked halves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoAxes {
    pub sides: [Vec<usize>; 2],
    pub axes: [Axis; 2],
}

impl TwoAxes {
    pub fn certificate(&self, n: usize) -> AxesCertificate {
        let mut assignment = vec![0; n];
        for &v in &self.sides[1] {
            assignment[v] = 1;
        }
        AxesCertificate { axes: self.axes.to_vec(), assignment }
    }
}

/// Descent check: walking away from the vote's top in either direction
/// along the axis, every step must reach a less preferred candidate.
pub fn is_single_peaked_wrt(vote: &Vote, axis: &Axis) -> Result<bool, Error> {
    if vote.len() != axis.len() {
        return Err(Error::RosterMismatch);
    }
    Ok(single_peaked(vote, axis))
}

pub(crate) fn single_peaked(vote: &Vote, axis: &Axis) -> bool {
    let order = axis.order();
    let peak = axis.pos(vote.top());
    let left = order[..=peak].windows(2).all(|w| vote.rank(w[0]) > vote.rank(w[1]));
    left && order[peak..].windows(2).all(|w| vote.rank(w[0]) < vote.rank(w[1]))
}

/// An axis on which every vote is single-peaked, if there is one.
///
/// The axis is built from both ends inwards. At each step the candidates
/// ranked last among the not yet placed ones must take the two free ends;
/// when both sides are locally admissible the remainder is mirror-symmetric,
/// so the left side is taken.
pub fn find_axis(e: &Election) -> Option<Axis> {
    find_axis_of(e.m(), e.votes())
}

pub(crate) fn find_axis_of(m: usize, votes: &[Vote]) -> Option<Axis> {
    if votes.is_empty() {
        return Some(Axis::identity(m));
    }
    let mut placed = vec![false; m];
    let mut bottom = vec![m - 1; votes.len()];
    let mut lasts = vec![0; votes.len()];
    let (mut left, mut right): (Vec<Cand>, Vec<Cand>) = (Vec::new(), Vec::new());
    let mut remaining = m;
    while remaining > 0 {
        if remaining == 1 {
            left.push((0..m).find(|&c| !placed[c]).expect("one candidate left"));
            break;
        }
        for (i, v) in votes.iter().enumerate() {
            while placed[v.order()[bottom[i]]] {
                bottom[i] -= 1;
            }
            lasts[i] = v.order()[bottom[i]];
        }
        let x = lasts.iter().copied().min().expect("votes are present");
        let y = lasts.iter().copied().max().expect("votes are present");
        if lasts.iter().any(|&c| c != x && c != y) {
            return None;
        }
        // `beats_end(z, end)`: every vote ranking `z` last ranks it above `end`.
        let fits = |z: Cand, end: Option<&Cand>| match end {
            None => true,
            Some(&end) => votes.iter().zip(&lasts).all(|(v, &l)| l != z || v.prefers(z, end)),
        };
        if x == y {
            if fits(x, left.last()) {
                left.push(x);
            } else if fits(x, right.last()) {
                right.push(x);
            } else {
                return None;
            }
            placed[x] = true;
            remaining -= 1;
        } else {
            if fits(x, left.last()) && fits(y, right.last()) {
                left.push(x);
                right.push(y);
            } else if fits(y, left.last()) && fits(x, right.last()) {
                left.push(y);
                right.push(x);
            } else {
                return None;
            }
            placed[x] = true;
            placed[y] = true;
            remaining -= 2;
        }
    }
    left.extend(right.into_iter().rev());
    let axis = Axis::new(left).expect("every candidate placed once");
    votes.iter().all(|v| single_peaked(v, &axis)).then_some(axis)
}

/// Which of `a`, `b`, `c` the vote ranks last.
#[inline]
fn last_of(v: &Vote, tri: [Cand; 3]) -> usize {
    let r = [v.rank(tri[0]), v.rank(tri[1]), v.rank(tri[2])];
    if r[0] > r[1] && r[0] > r[2] {
        0
    } else if r[1] > r[2] {
        1
    } else {
        2
    }
}

/// Lexicographically first increasing index triple whose categories are
/// pairwise distinct.
fn first_rainbow_triple(cat: &[usize]) -> Option<[usize; 3]> {
    let n = cat.len();
    let mut suffix = vec![0u8; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] | 1 << cat[i];
    }
    let i = (0..n).find(|&i| suffix[i + 1] | 1 << cat[i] == 0b111)?;
    let j = (i + 1..n)
        .find(|&j| cat[j] != cat[i] && suffix[j + 1] & !(1 << cat[i] | 1 << cat[j]) & 0b111 != 0)?;
    let k = (j + 1..n).find(|&k| cat[k] != cat[i] && cat[k] != cat[j])?;
    Some([i, j, k])
}

/// The first WD-structure in (vote triple, candidate triple) order.
pub fn find_wd_structure(e: &Election) -> Option<WdStructure> {
    let (m, votes) = (e.m(), e.votes());
    if votes.len() < 3 || m < 3 {
        return None;
    }
    let mut best: Option<WdStructure> = None;
    let mut cat = vec![0usize; votes.len()];
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let tri = [a, b, c];
                for (i, v) in votes.iter().enumerate() {
                    cat[i] = last_of(v, tri);
                }
                if let Some(vs) = first_rainbow_triple(&cat) {
                    let cands = [tri[cat[vs[0]]], tri[cat[vs[1]]], tri[cat[vs[2]]]];
                    let found = WdStructure { votes: vs, cands };
                    if best.is_none_or(|w| (vs, cands) < (w.votes, w.cands)) {
                        best = Some(found);
                    }
                }
            }
        }
    }
    best
}

/// Whether three votes WD-conflict, with a witness triple.
pub fn wd_conflict(x: &Vote, y: &Vote, z: &Vote) -> Option<[Cand; 3]> {
    let m = x.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let tri = [a, b, c];
                let (i, j, k) = (last_of(x, tri), last_of(y, tri), last_of(z, tri));
                if i != j && j != k && i != k {
                    return Some([tri[i], tri[j], tri[k]]);
                }
            }
        }
    }
    None
}

/// Whether two votes alpha-conflict, with a witness `[a, b, c, d]` in the
/// roles of [`AlphaStructure`] (`x` first).
pub fn alpha_conflict(x: &Vote, y: &Vote) -> Option<[Cand; 4]> {
    let m = x.len();
    for b in 0..m {
        let (mut a, mut c, mut d) = (None, None, None);
        for e in (0..m).filter(|&e| e != b) {
            let (above_x, above_y) = (x.prefers(e, b), y.prefers(e, b));
            match (above_x, above_y) {
                (true, false) if a.is_none() => a = Some(e),
                (false, true) if c.is_none() => c = Some(e),
                (true, true) if d.is_none() => d = Some(e),
                _ => {}
            }
        }
        if let (Some(a), Some(c), Some(d)) = (a, c, d) {
            return Some([a, b, c, d]);
        }
    }
    None
}

/// The first alpha-structure over vote pairs in lexicographic order.
pub fn find_alpha_structure(e: &Election) -> Option<AlphaStructure> {
    let votes = e.votes();
    for x in 0..votes.len() {
        for y in x + 1..votes.len() {
            if let Some([a, b, c, d]) = alpha_conflict(&votes[x], &votes[y]) {
                return Some(AlphaStructure { x, y, a, b, c, d });
            }
        }
    }
    None
}

/// Assigns each vote to the first axis it is single-peaked on.
pub fn verify_k_axes(e: &Election, axes: &[Axis]) -> Result<Option<AxesCertificate>, Error> {
    if axes.iter().any(|a| a.len() != e.m()) {
        return Err(Error::RosterMismatch);
    }
    let mut assignment = Vec::with_capacity(e.n());
    for v in e.votes() {
        match axes.iter().position(|a| single_peaked(v, a)) {
            Some(i) => assignment.push(i),
            None => return Ok(None),
        }
    }
    Ok(Some(AxesCertificate { axes: axes.to_vec(), assignment }))
}

/// Checks that a certificate's assignment is valid for `e`.
pub fn check_certificate(e: &Election, cert: &AxesCertificate) -> bool {
    cert.assignment.len() == e.n()
        && cert.axes.iter().all(|a| a.len() == e.m())
        && e.votes()
            .iter()
            .zip(&cert.assignment)
            .all(|(v, &i)| i < cert.axes.len() && single_peaked(v, &cert.axes[i]))
}

fn check_partition(m: usize, parts: &[Vec<Cand>]) -> Result<(), Error> {
    let mut seen = vec![false; m];
    for part in parts {
        if part.is_empty() {
            return Err(Error::InvalidPartition("empty part"));
        }
        for &c in part {
            if c >= m {
                return Err(Error::CandidateOutOfRange(c));
            }
            if seen[c] {
                return Err(Error::InvalidPartition("parts overlap"));
            }
            seen[c] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::InvalidPartition("parts do not cover the roster"));
    }
    Ok(())
}

/// Axes for every part when each restricted profile is single-peaked.
pub fn cp_certificate(e: &Election, parts: &[Vec<Cand>]) -> Result<Option<CpCertificate>, Error> {
    check_partition(e.m(), parts)?;
    let mut axes = Vec::with_capacity(parts.len());
    for part in parts {
        match find_axis(&e.restrict(part)?) {
            Some(a) => axes.push(a),
            None => return Ok(None),
        }
    }
    Ok(Some(CpCertificate { parts: parts.to_vec(), axes }))
}

/// Whether the restriction of `e` to every part is single-peaked.
pub fn verify_k_cp(e: &Election, parts: &[Vec<Cand>]) -> Result<bool, Error> {
    Ok(cp_certificate(e, parts)?.is_some())
}

/// Splits the votes into two single-peaked halves, if possible.
pub fn recognize_two_axes(e: &Election) -> Option<TwoAxes> {
    let votes = e.votes();
    let n = votes.len();
    if let Some(axis) = find_axis(e) {
        return Some(TwoAxes { sides: [(0..n).collect(), Vec::new()], axes: [axis, Axis::identity(e.m())] });
    }
    let finish = |values: &[bool]| -> Option<TwoAxes> {
        let t: Vec<usize> = (0..n).filter(|&i| values[i]).collect();
        let f: Vec<usize> = (0..n).filter(|&i| !values[i]).collect();
        let at = find_axis(&e.select(&t))?;
        let af = find_axis(&e.select(&f))?;
        Some(TwoAxes { sides: [t, f], axes: [at, af] })
    };
    let Some(wd) = find_wd_structure(e) else {
        // Without WD-structures, alpha-conflicting votes must be separated.
        let mut sat = TwoSat::new(n);
        for x in 0..n {
            for y in x + 1..n {
                if alpha_conflict(&votes[x], &votes[y]).is_some() {
                    separate(&mut sat, x, y);
                }
            }
        }
        return finish(&sat.solve()?);
    };
    let mut group: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (i, v) in votes.iter().enumerate() {
        group[last_of(v, wd.cands)].push(i);
    }
    for (t, f, free) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let (gt, gf, gfree) = (&group[t], &group[f], &group[free]);
        if find_axis(&e.select(gt)).is_none() || find_axis(&e.select(gf)).is_none() {
            continue;
        }
        let mut sat = TwoSat::new(n);
        for &i in gt {
            sat.add_unit(Lit::pos(i)).expect("index in range");
        }
        for &i in gf {
            sat.add_unit(Lit::neg(i)).expect("index in range");
        }
        for &i in gfree {
            // Conflicts with the forced sides push the vote to the other one.
            for (side, lit) in [(gt, Lit::neg(i)), (gf, Lit::pos(i))] {
                let alpha = side.iter().any(|&j| alpha_conflict(&votes[i], &votes[j]).is_some());
                let wd = || {
                    side.iter().enumerate().any(|(s, &j)| {
                        side[s + 1..].iter().any(|&k| wd_conflict(&votes[i], &votes[j], &votes[k]).is_some())
                    })
                };
                if alpha || wd() {
                    sat.add_unit(lit).expect("index in range");
                }
            }
        }
        for (s, &i) in gfree.iter().enumerate() {
            for &j in &gfree[s + 1..] {
                if gt.iter().any(|&k| wd_conflict(&votes[i], &votes[j], &votes[k]).is_some()) {
                    sat.add_clause(Lit::neg(i), Lit::neg(j)).expect("index in range");
                }
                if gf.iter().any(|&k| wd_conflict(&votes[i], &votes[j], &votes[k]).is_some()) {
                    sat.add_clause(Lit::pos(i), Lit::pos(j)).expect("index in range");
                }
                if alpha_conflict(&votes[i], &votes[j]).is_some() {
                    separate(&mut sat, i, j);
                }
            }
        }
        if let Some(found) = sat.solve().and_then(|values| finish(&values)) {
            return Some(found);
        }
    }
    None
}

fn separate(sat: &mut TwoSat, x: usize, y: usize) {
    sat.add_clause(Lit::pos(x), Lit::pos(y)).expect("index in range");
    sat.add_clause(Lit::neg(x), Lit::neg(y)).expect("index in range");
}

/// A vote, single-peaked on `axis`, ranking `block` on top.
///
/// The block is listed left to right, then the placed interval grows by one
/// neighbour at a time, the left one whenever it exists.
pub fn complete_from_block(axis: &Axis, block: &[Cand]) -> Result<Vote, Error> {
    if block.is_empty() {
        return Err(Error::EmptySubset);
    }
    let m = axis.len();
    let mut in_block = vec![false; m];
    for &c in block {
        if c >= m {
            return Err(Error::CandidateOutOfRange(c));
        }
        in_block[c] = true;
    }
    let lo = block.iter().map(|&c| axis.pos(c)).min().expect("block is non-empty");
    let hi = block.iter().map(|&c| axis.pos(c)).max().expect("block is non-empty");
    if hi - lo + 1 != block.len() || (lo..=hi).any(|i| !in_block[axis.order()[i]]) {
        return Err(Error::BlockNotConsecutive);
    }
    let mut order: Vec<Cand> = axis.order()[lo..=hi].to_vec();
    order.extend(axis.order()[..lo].iter().rev());
    order.extend(&axis.order()[hi + 1..]);
    Vote::from_order(order)
}

/// A seeded random vote that is single-peaked on `axis`.
pub fn sample_single_peaked_vote(axis: &Axis, seed: u64) -> Vote {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(axis, &mut rng)
}

/// Same as [`sample_single_peaked_vote`] but drawing from a caller's generator.
pub fn sample_with<R: Rng>(axis: &Axis, rng: &mut R) -> Vote {
    let m = axis.len();
    let peak = rng.gen_range(0..m);
    let (mut lo, mut hi) = (peak, peak);
    let mut order = Vec::with_capacity(m);
    order.push(axis.order()[peak]);
    while order.len() < m {
        let go_left = match (lo > 0, hi + 1 < m) {
            (true, true) => rng.gen_bool(0.5),
            (can_left, _) => can_left,
        };
        if go_left {
            lo -= 1;
            order.push(axis.order()[lo]);
        } else {
            hi += 1;
            order.push(axis.order()[hi]);
        }
    }
    Vote::from_order(order).expect("every candidate placed once")
}

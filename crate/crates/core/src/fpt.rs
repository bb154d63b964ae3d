//! Integer programs with piecewise-linear constraint terms, and the
//! parameterized solvers for r-approval and Condorcet control built on them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer_shim::lcm;
use num_rational::Ratio;

use crate::control::{CcavInstance, CcdvInstance, Model, Solution};
use crate::election::{Cand, Vote};
use crate::error::Error;
use crate::rules::Rule;
use crate::structure::{single_peaked, AxesCertificate};

mod num_integer_shim {
    pub fn gcd(mut a: i128, mut b: i128) -> i128 {
        a = a.abs();
        b = b.abs();
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }

    pub fn lcm(a: i128, b: i128) -> i128 {
        a / gcd(a, b) * b
    }
}

/// A function given by breakpoints `(x, value)`, linear in between and
/// constant outside the breakpoint span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    points: Vec<(i64, Ratio<i64>)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(i64, Ratio<i64>)>) -> Result<PiecewiseLinear, Error> {
        if points.is_empty() || points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::UnsupportedParameter("breakpoints must be non-empty and strictly increasing"));
        }
        Ok(PiecewiseLinear { points })
    }

    /// Integer values at `0, 1, ..., values.len() - 1`.
    pub fn from_values(values: &[i64]) -> PiecewiseLinear {
        assert!(!values.is_empty());
        PiecewiseLinear {
            points: values.iter().enumerate().map(|(x, &v)| (x as i64, Ratio::from_integer(v))).collect(),
        }
    }

    /// `x -> x` on `[0, upper]`.
    pub fn identity(upper: i64) -> PiecewiseLinear {
        PiecewiseLinear { points: vec![(0, Ratio::from_integer(0)), (upper.max(1), Ratio::from_integer(upper.max(1)))] }
    }

    pub fn points(&self) -> &[(i64, Ratio<i64>)] {
        &self.points
    }

    pub fn eval(&self, x: i64) -> Ratio<i64> {
        let pts = &self.points;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        let last = pts[pts.len() - 1];
        if x >= last.0 {
            return last.1;
        }
        let i = pts.partition_point(|&(bx, _)| bx <= x) - 1;
        let ((x0, y0), (x1, y1)) = (pts[i], pts[i + 1]);
        y0 + (y1 - y0) * Ratio::new(x - x0, x1 - x0)
    }

    /// Slopes are non-increasing over the breakpoint span.
    pub fn is_concave(&self) -> bool {
        let slopes: Vec<Ratio<i64>> = self
            .points
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / Ratio::from_integer(w[1].0 - w[0].0))
            .collect();
        slopes.windows(2).all(|s| s[0] >= s[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `sum_j fns[j](x_j) <rel> rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlConstraint {
    pub fns: Vec<PiecewiseLinear>,
    pub rel: Relation,
    pub rhs: i64,
}

/// `sum_j coeffs[j] * x_j <rel> rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRow {
    pub coeffs: Vec<i64>,
    pub rel: Relation,
    pub rhs: i64,
}

/// Bounded integer variables with piecewise-linear and linear rows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IpInstance {
    pub bounds: Vec<(i64, i64)>,
    pub constraints: Vec<PlConstraint>,
    pub rows: Vec<LinearRow>,
}

impl IpInstance {
    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        if x.len() != self.bounds.len() || x.iter().zip(&self.bounds).any(|(&v, &(lo, hi))| v < lo || v > hi) {
            return false;
        }
        let holds = |lhs: Ratio<i64>, rel: Relation, rhs: i64| {
            let rhs = Ratio::from_integer(rhs);
            match rel {
                Relation::Le => lhs <= rhs,
                Relation::Ge => lhs >= rhs,
                Relation::Eq => lhs == rhs,
            }
        };
        self.constraints.iter().all(|c| {
            let lhs = c.fns.iter().zip(x).map(|(f, &v)| f.eval(v)).fold(Ratio::from_integer(0), |a, b| a + b);
            holds(lhs, c.rel, c.rhs)
        }) && self.rows.iter().all(|r| {
            let lhs: i64 = r.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            holds(Ratio::from_integer(lhs), r.rel, r.rhs)
        })
    }

    /// Number of integer points in the variable box, saturating.
    pub fn volume(&self) -> u128 {
        self.bounds.iter().fold(1u128, |acc, &(lo, hi)| acc.saturating_mul((hi - lo + 1).max(0) as u128))
    }
}

/// One row scaled to integers: per-variable value tables plus bounds on
/// what the unassigned suffix can still contribute.
struct ScaledRow {
    table: Vec<Vec<i128>>,
    rel: Relation,
    rhs: i128,
    suffix_min: Vec<i128>,
    suffix_max: Vec<i128>,
}

impl ScaledRow {
    fn new(table: Vec<Vec<i128>>, rel: Relation, rhs: i128) -> ScaledRow {
        let t = table.len();
        let (mut suffix_min, mut suffix_max) = (vec![0i128; t + 1], vec![0i128; t + 1]);
        for j in (0..t).rev() {
            suffix_min[j] = suffix_min[j + 1] + table[j].iter().copied().min().unwrap_or(0);
            suffix_max[j] = suffix_max[j + 1] + table[j].iter().copied().max().unwrap_or(0);
        }
        ScaledRow { table, rel, rhs, suffix_min, suffix_max }
    }

    /// Whether a partial sum over the first `j` variables can still be completed.
    fn open(&self, partial: i128, j: usize) -> bool {
        let lower_ok = partial + self.suffix_min[j] <= self.rhs;
        let upper_ok = partial + self.suffix_max[j] >= self.rhs;
        match self.rel {
            Relation::Le => lower_ok,
            Relation::Ge => upper_ok,
            Relation::Eq => lower_ok && upper_ok,
        }
    }
}

/// Lexicographically smallest feasible assignment, by depth-first search
/// over the variable boxes with bound propagation on every row.
pub fn solve_ip(inst: &IpInstance) -> Option<Vec<i64>> {
    let t = inst.bounds.len();
    if inst.bounds.iter().any(|&(lo, hi)| lo > hi) {
        return None;
    }
    let mut rows = Vec::with_capacity(inst.constraints.len() + inst.rows.len());
    for c in &inst.constraints {
        let mut scale: i128 = 1;
        for (f, &(lo, hi)) in c.fns.iter().zip(&inst.bounds) {
            for x in lo..=hi {
                scale = lcm(scale, *f.eval(x).denom() as i128);
            }
        }
        let table = c
            .fns
            .iter()
            .zip(&inst.bounds)
            .map(|(f, &(lo, hi))| {
                (lo..=hi)
                    .map(|x| {
                        let v = f.eval(x);
                        *v.numer() as i128 * (scale / *v.denom() as i128)
                    })
                    .collect()
            })
            .collect();
        rows.push(ScaledRow::new(table, c.rel, c.rhs as i128 * scale));
    }
    for r in &inst.rows {
        let table = r
            .coeffs
            .iter()
            .zip(&inst.bounds)
            .map(|(&a, &(lo, hi))| (lo..=hi).map(|x| (a * x) as i128).collect())
            .collect();
        rows.push(ScaledRow::new(table, r.rel, r.rhs as i128));
    }
    let mut x = vec![0i64; t];
    let mut partial = vec![vec![0i128; t + 1]; rows.len()];
    if !rows.iter().all(|r| r.open(0, 0)) {
        return None;
    }
    descend(inst, &rows, &mut x, &mut partial, 0).then_some(x)
}

fn descend(inst: &IpInstance, rows: &[ScaledRow], x: &mut [i64], partial: &mut [Vec<i128>], j: usize) -> bool {
    let t = inst.bounds.len();
    if j == t {
        return rows.iter().enumerate().all(|(i, r)| match r.rel {
            Relation::Le => partial[i][t] <= r.rhs,
            Relation::Ge => partial[i][t] >= r.rhs,
            Relation::Eq => partial[i][t] == r.rhs,
        });
    }
    let (lo, hi) = inst.bounds[j];
    for v in lo..=hi {
        let k = (v - lo) as usize;
        let mut ok = true;
        for (i, r) in rows.iter().enumerate() {
            partial[i][j + 1] = partial[i][j] + r.table[j][k];
            if !r.open(partial[i][j + 1], j + 1) {
                ok = false;
            }
        }
        if ok {
            x[j] = v;
            if descend(inst, rows, x, partial, j + 1) {
                return true;
            }
        }
    }
    false
}

/// Result of a parameterized solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptResult {
    pub assignment: Vec<i64>,
    pub solution: Solution,
}

/// Size figures of the r-approval program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ApprovalStats {
    /// Candidates other than `p` approved by some pool vote that approves `p`.
    pub candidates: usize,
    /// Distinct approval sets realized by those votes, one variable each.
    pub subsets: usize,
}

/// The r-approval CCAV program, ready to solve and decode.
#[derive(Debug, Clone)]
pub struct ApprovalProgram {
    pub ip: IpInstance,
    pub stats: ApprovalStats,
    /// Pool indices of the votes behind each variable, in pool order.
    groups: Vec<Vec<usize>>,
    /// Set when the instance is decided before any search.
    trivially_infeasible: bool,
}

impl ApprovalProgram {
    pub fn build(inst: &CcavInstance) -> Result<ApprovalProgram, Error> {
        let Rule::RApproval(r) = inst.rule else {
            return Err(Error::WrongRule("r-approval"));
        };
        if inst.model != Model::Unique {
            return Err(Error::WrongModel);
        }
        let (m, p) = (inst.base.m(), inst.p);
        let approving: Vec<usize> = (0..inst.pool.len()).filter(|&i| inst.pool[i].position(p) <= r).collect();
        let budget = inst.budget.min(approving.len()) as i64;
        let mut score = vec![0i64; m];
        for v in inst.base.votes() {
            for &c in &v.order()[..r.min(m)] {
                score[c] += 1;
            }
        }
        let mut groups: BTreeMap<Vec<Cand>, Vec<usize>> = BTreeMap::new();
        for &i in &approving {
            let mut beta: Vec<Cand> = inst.pool[i].order()[..r.min(m)].iter().copied().filter(|&c| c != p).collect();
            beta.sort_unstable();
            groups.entry(beta).or_default().push(i);
        }
        let mut involved: Vec<Cand> = groups.keys().flatten().copied().collect();
        involved.sort_unstable();
        involved.dedup();
        let stats = ApprovalStats { candidates: involved.len(), subsets: groups.len() };
        let trivially_infeasible = (0..m).any(|c| c != p && score[c] >= score[p] + budget);
        let (betas, groups): (Vec<Vec<Cand>>, Vec<Vec<usize>>) = groups.into_iter().unzip();
        let mut ip = IpInstance {
            bounds: groups.iter().map(|g| (0, g.len() as i64)).collect(),
            ..IpInstance::default()
        };
        ip.rows.push(LinearRow { coeffs: vec![1; betas.len()], rel: Relation::Eq, rhs: budget });
        for &c in &involved {
            ip.rows.push(LinearRow {
                coeffs: betas.iter().map(|b| b.binary_search(&c).is_ok() as i64).collect(),
                rel: Relation::Le,
                rhs: score[p] + budget - 1 - score[c],
            });
        }
        Ok(ApprovalProgram { ip, stats, groups, trivially_infeasible })
    }

    pub fn solve(&self) -> Option<FptResult> {
        if self.trivially_infeasible {
            return None;
        }
        let assignment = solve_ip(&self.ip)?;
        let picked = self.groups.iter().zip(&assignment).flat_map(|(g, &x)| g[..x as usize].iter().copied());
        Some(FptResult { solution: Solution::new(picked.collect()), assignment })
    }
}

/// r-approval CCAV via the approval-set program; needs no axes.
pub fn ccav_rapproval_kaxes(inst: &CcavInstance) -> Result<Option<FptResult>, Error> {
    Ok(ApprovalProgram::build(inst)?.solve())
}

/// Which side of `p` the candidates ranked above it occupy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// The Condorcet program: one variable per (axis, side) counting a prefix
/// of that side's votes.
#[derive(Debug, Clone)]
pub struct CondorcetProgram {
    pub ip: IpInstance,
    /// Per variable: the ordered vote indices whose prefix it selects.
    pub sides: Vec<Vec<usize>>,
    /// Per candidate other than `p`: the count of the prefix votes that
    /// rank it above `p`, one function per variable.
    pub above_counts: Vec<(Cand, Vec<PiecewiseLinear>)>,
}

impl CondorcetProgram {
    /// Program for adding votes; `cert` covers the pool.
    pub fn ccav(inst: &CcavInstance, cert: &AxesCertificate) -> Result<CondorcetProgram, Error> {
        if inst.rule != Rule::Condorcet {
            return Err(Error::WrongRule("condorcet"));
        }
        if inst.model != Model::Unique {
            return Err(Error::WrongModel);
        }
        build_condorcet(inst.base.votes(), &inst.pool, inst.p, inst.budget, cert, true)
    }

    /// Program for deleting votes; `cert` covers the registered votes.
    pub fn ccdv(inst: &CcdvInstance, cert: &AxesCertificate) -> Result<CondorcetProgram, Error> {
        if inst.rule != Rule::Condorcet {
            return Err(Error::WrongRule("condorcet"));
        }
        if inst.model != Model::Unique {
            return Err(Error::WrongModel);
        }
        build_condorcet(inst.base.votes(), inst.base.votes(), inst.p, inst.budget, cert, false)
    }

    pub fn decode(&self, assignment: &[i64]) -> Solution {
        let picked = self.sides.iter().zip(assignment).flat_map(|(s, &x)| s[..x as usize].iter().copied());
        Solution::new(picked.collect())
    }

    pub fn solve(&self) -> Option<FptResult> {
        let assignment = solve_ip(&self.ip)?;
        Some(FptResult { solution: self.decode(&assignment), assignment })
    }
}

fn build_condorcet(
    registered: &[Vote],
    chosen_from: &[Vote],
    p: Cand,
    budget: usize,
    cert: &AxesCertificate,
    adding: bool,
) -> Result<CondorcetProgram, Error> {
    if cert.assignment.len() != chosen_from.len() {
        return Err(Error::CertificateMismatch("assignment length differs from the vote count"));
    }
    let m = cert.axes.first().map_or_else(|| chosen_from.first().map_or(0, Vote::len), |a| a.len());
    if registered.iter().chain(chosen_from).any(|v| v.len() != m) || cert.axes.iter().any(|a| a.len() != m) {
        return Err(Error::RosterMismatch);
    }
    if p >= m {
        return Err(Error::CandidateOutOfRange(p));
    }
    let k = cert.axes.len();
    let mut sides: Vec<Vec<usize>> = vec![Vec::new(); 2 * k];
    for (i, (v, &a)) in chosen_from.iter().zip(&cert.assignment).enumerate() {
        let axis = cert.axes.get(a).ok_or(Error::CertificateMismatch("axis index out of range"))?;
        if !single_peaked(v, axis) {
            return Err(Error::CertificateMismatch("vote is not single-peaked on its axis"));
        }
        let above = v.above(p);
        let side = if above.iter().all(|&c| axis.pos(c) < axis.pos(p)) {
            Side::Left
        } else if above.iter().all(|&c| axis.pos(c) > axis.pos(p)) {
            Side::Right
        } else {
            return Err(Error::CertificateMismatch("candidates above p straddle it"));
        };
        sides[2 * a + (side == Side::Right) as usize].push(i);
    }
    // Adding prefers votes with few candidates above p, deleting the opposite.
    for (s, side) in sides.iter_mut().enumerate() {
        side.sort_by_key(|&i| {
            let r = chosen_from[i].rank(p) as i64;
            (if adding { r } else { -r }, i)
        });
        let chain_ok = side.windows(2).all(|w| {
            let (first, second) = (&chosen_from[w[0]], &chosen_from[w[1]]);
            let (small, big) = if adding { (first, second) } else { (second, first) };
            small.above(p).iter().all(|&c| big.prefers(c, p))
        });
        if !chain_ok {
            return Err(Error::NestingViolated { axis: s / 2 });
        }
    }
    let mut n_cp = vec![0i64; m];
    for v in registered {
        for &c in v.above(p) {
            n_cp[c] += 1;
        }
    }
    let total = registered.len() as i64;
    let mut ip = IpInstance { bounds: sides.iter().map(|s| (0, s.len() as i64)).collect(), ..IpInstance::default() };
    let mut above_counts = Vec::with_capacity(m.saturating_sub(1));
    for c in (0..m).filter(|&c| c != p) {
        let mut counts = Vec::with_capacity(sides.len());
        let mut fns = Vec::with_capacity(sides.len());
        for side in &sides {
            let mut above = vec![0i64];
            for &i in side {
                let next = above[above.len() - 1] + chosen_from[i].prefers(c, p) as i64;
                above.push(next);
            }
            // Both rows use a count with 0/1 increments that stop rising
            // once they drop: above-p counts when deleting, below-p counts
            // when adding.
            let helpful: Vec<i64> = if adding {
                above.iter().enumerate().map(|(x, &a)| x as i64 - a).collect()
            } else {
                above.clone()
            };
            let row: Vec<i64> = helpful.iter().enumerate().map(|(x, &h)| 2 * h - x as i64).collect();
            let f = PiecewiseLinear::from_values(&helpful);
            let g = PiecewiseLinear::from_values(&row);
            if !f.is_concave() || !g.is_concave() {
                return Err(Error::NotConcave);
            }
            counts.push(PiecewiseLinear::from_values(&above));
            fns.push(g);
        }
        // p must beat c: sum (2 h - x) > N(c, p) - N(p, c).
        let n_pc = total - n_cp[c];
        ip.constraints.push(PlConstraint { fns, rel: Relation::Ge, rhs: n_cp[c] - n_pc + 1 });
        above_counts.push((c, counts));
    }
    ip.rows.push(LinearRow { coeffs: vec![1; sides.len()], rel: Relation::Le, rhs: budget as i64 });
    Ok(CondorcetProgram { ip, sides, above_counts })
}

/// Condorcet CCAV given axes for the pool votes.
pub fn ccav_condorcet_kaxes(inst: &CcavInstance, cert: &AxesCertificate) -> Result<Option<FptResult>, Error> {
    Ok(CondorcetProgram::ccav(inst, cert)?.solve())
}

/// Condorcet CCDV given axes for the registered votes.
pub fn ccdv_condorcet_kaxes(inst: &CcdvInstance, cert: &AxesCertificate) -> Result<Option<FptResult>, Error> {
    Ok(CondorcetProgram::ccdv(inst, cert)?.solve())
}

//! Exact cover by 3-sets with every element in three sets, and the
//! control instances built from it.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::control::{CcavInstance, CcdvInstance, Model, Pruning, Solution};
use crate::election::{Cand, Election, Vote};
use crate::error::Error;
use crate::graphs::{consecutive_pair_orders, BipartiteGraph};
use crate::rules::Rule;
use crate::structure::{complete_from_block, AxesCertificate, Axis};

/// Elements are `0..3 * kappa`; each set lists three of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rx3c {
    pub kappa: usize,
    pub sets: Vec<[usize; 3]>,
}

impl Rx3c {
    pub fn universe(&self) -> usize {
        3 * self.kappa
    }

    /// Bipartite graph with elements on the left and sets on the right.
    pub fn incidence_graph(&self) -> BipartiteGraph {
        let edges = self.sets.iter().enumerate().flat_map(|(j, s)| s.iter().map(move |&x| (x, j))).collect();
        BipartiteGraph::new(self.universe(), self.sets.len(), edges).expect("validated instance")
    }

    fn check(&self) -> Result<(), Error> {
        if validate_rx3c(self) {
            Ok(())
        } else {
            Err(Error::InvalidRx3c("needs 3k distinct 3-sets over 3k elements, each element in exactly three sets"))
        }
    }
}

/// Sizes, ranges, distinctness and the three-occurrence condition.
pub fn validate_rx3c(inst: &Rx3c) -> bool {
    let n = inst.universe();
    if inst.kappa == 0 || inst.sets.len() != n {
        return false;
    }
    let mut count = vec![0usize; n];
    let mut seen = BTreeSet::new();
    for s in &inst.sets {
        let mut t = *s;
        t.sort_unstable();
        if t[2] >= n || t[0] == t[1] || t[1] == t[2] || !seen.insert(t) {
            return false;
        }
        for x in t {
            count[x] += 1;
        }
    }
    count.iter().all(|&c| c == 3)
}

/// An exact cover as ascending set indices. Branches on the lowest
/// uncovered element, trying its sets in index order.
pub fn brute_force_rx3c(inst: &Rx3c) -> Option<Vec<usize>> {
    let n = inst.universe();
    if inst.sets.iter().flatten().any(|&x| x >= n) {
        return None;
    }
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, s) in inst.sets.iter().enumerate() {
        for &x in s {
            containing[x].push(j);
        }
    }
    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    if cover_from(inst, &containing, &mut covered, &mut chosen) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

fn cover_from(inst: &Rx3c, containing: &[Vec<usize>], covered: &mut [bool], chosen: &mut Vec<usize>) -> bool {
    let Some(x) = covered.iter().position(|&c| !c) else {
        return true;
    };
    for &j in &containing[x] {
        let s = inst.sets[j];
        if s.iter().any(|&y| covered[y]) || s[0] == s[1] || s[1] == s[2] || s[0] == s[2] {
            continue;
        }
        for &y in &s {
            covered[y] = true;
        }
        chosen.push(j);
        if cover_from(inst, containing, covered, chosen) {
            return true;
        }
        chosen.pop();
        for &y in &s {
            covered[y] = false;
        }
    }
    false
}

/// A uniformly shuffled valid instance: every element three times, cut into triples.
pub fn random_rx3c<R: Rng>(kappa: usize, rng: &mut R) -> Rx3c {
    assert!(kappa > 0);
    let n = 3 * kappa;
    loop {
        let mut slots: Vec<usize> = (0..n).flat_map(|x| [x, x, x]).collect();
        slots.shuffle(rng);
        let sets: Vec<[usize; 3]> = slots
            .chunks(3)
            .map(|c| {
                let mut t = [c[0], c[1], c[2]];
                t.sort_unstable();
                t
            })
            .collect();
        let inst = Rx3c { kappa, sets };
        if validate_rx3c(&inst) {
            return inst;
        }
    }
}

/// First seeded random instance whose coverability matches `coverable`,
/// trying at most `attempts` draws.
pub fn mine_rx3c(kappa: usize, coverable: bool, seed: u64, attempts: usize) -> Option<Rx3c> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..attempts).map(|_| random_rx3c(kappa, &mut rng)).find(|i| brute_force_rx3c(i).is_some() == coverable)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    CcavApproval3Cp,
    CcdvApproval2Axes2Cp,
    CcavCondorcet3Cp,
    CcdvCondorcet3Cp,
    CcavCopelandAlpha2Axes,
    CcdvCopelandAlpha2Axes,
    CcavCw2Axes,
    CcdvCw2Axes,
    CcavCw2Cp,
    CcdvCw2Cp,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 10] = [
        GadgetKind::CcavApproval3Cp,
        GadgetKind::CcdvApproval2Axes2Cp,
        GadgetKind::CcavCondorcet3Cp,
        GadgetKind::CcdvCondorcet3Cp,
        GadgetKind::CcavCopelandAlpha2Axes,
        GadgetKind::CcdvCopelandAlpha2Axes,
        GadgetKind::CcavCw2Axes,
        GadgetKind::CcdvCw2Axes,
        GadgetKind::CcavCw2Cp,
        GadgetKind::CcdvCw2Cp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::CcavApproval3Cp => "ccav-approval-3cp",
            GadgetKind::CcdvApproval2Axes2Cp => "ccdv-approval-2axes-2cp",
            GadgetKind::CcavCondorcet3Cp => "ccav-condorcet-3cp",
            GadgetKind::CcdvCondorcet3Cp => "ccdv-condorcet-3cp",
            GadgetKind::CcavCopelandAlpha2Axes => "ccav-copeland-alpha-2axes",
            GadgetKind::CcdvCopelandAlpha2Axes => "ccdv-copeland-alpha-2axes",
            GadgetKind::CcavCw2Axes => "ccav-cw-2axes",
            GadgetKind::CcdvCw2Axes => "ccdv-cw-2axes",
            GadgetKind::CcavCw2Cp => "ccav-cw-2cp",
            GadgetKind::CcdvCw2Cp => "ccdv-cw-2cp",
        }
    }

    pub fn parse(text: &str) -> Option<GadgetKind> {
        GadgetKind::ALL.into_iter().find(|k| k.name() == text)
    }

    pub fn is_ccav(self) -> bool {
        matches!(
            self,
            GadgetKind::CcavApproval3Cp
                | GadgetKind::CcavCondorcet3Cp
                | GadgetKind::CcavCopelandAlpha2Axes
                | GadgetKind::CcavCw2Axes
                | GadgetKind::CcavCw2Cp
        )
    }

    /// Smallest supported `kappa`.
    pub fn min_kappa(self) -> usize {
        match self {
            GadgetKind::CcavCw2Axes | GadgetKind::CcavCw2Cp | GadgetKind::CcdvCw2Cp => 3,
            GadgetKind::CcdvCw2Axes => 4,
            _ => 1,
        }
    }

    pub fn default_rule(self) -> Rule {
        match self {
            GadgetKind::CcavApproval3Cp => Rule::RApproval(4),
            GadgetKind::CcdvApproval2Axes2Cp => Rule::RApproval(3),
            GadgetKind::CcavCondorcet3Cp | GadgetKind::CcdvCondorcet3Cp => Rule::Condorcet,
            GadgetKind::CcavCopelandAlpha2Axes | GadgetKind::CcdvCopelandAlpha2Axes => {
                Rule::copeland(1, 2).expect("valid fraction")
            }
            _ => Rule::copeland(1, 1).expect("valid fraction"),
        }
    }

    fn check_rule(self, rule: Rule) -> Result<(), Error> {
        let ok = match (self, rule) {
            (GadgetKind::CcavApproval3Cp, Rule::RApproval(r)) => r >= 4,
            (GadgetKind::CcdvApproval2Axes2Cp, Rule::RApproval(r)) => r >= 3,
            (GadgetKind::CcavCondorcet3Cp | GadgetKind::CcdvCondorcet3Cp, Rule::Condorcet) => true,
            (GadgetKind::CcavCopelandAlpha2Axes | GadgetKind::CcdvCopelandAlpha2Axes, Rule::CopelandAlpha(a)) => {
                a < num_rational::Ratio::from_integer(1)
            }
            (
                GadgetKind::CcavCw2Axes | GadgetKind::CcdvCw2Axes | GadgetKind::CcavCw2Cp | GadgetKind::CcdvCw2Cp,
                Rule::CopelandAlpha(a),
            ) => a == num_rational::Ratio::from_integer(1),
            (GadgetKind::CcavCw2Axes | GadgetKind::CcdvCw2Axes | GadgetKind::CcavCw2Cp | GadgetKind::CcdvCw2Cp, Rule::Maximin) => {
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedParameter("rule not supported by this construction"))
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ControlInstance {
    Ccav(CcavInstance),
    Ccdv(CcdvInstance),
}

impl ControlInstance {
    pub fn rule(&self) -> Rule {
        match self {
            ControlInstance::Ccav(i) => i.rule,
            ControlInstance::Ccdv(i) => i.rule,
        }
    }

    /// Registered votes followed by the pool, the profile the witnesses describe.
    pub fn profile(&self) -> Election {
        match self {
            ControlInstance::Ccav(i) => {
                let mut votes = i.base.votes().to_vec();
                votes.extend(i.pool.iter().cloned());
                i.base.with_votes(votes)
            }
            ControlInstance::Ccdv(i) => i.base.clone(),
        }
    }
}

/// Candidates, registered votes, pool size and budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GadgetCounts {
    pub candidates: usize,
    pub registered: usize,
    pub pool: usize,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetOutput {
    pub kind: GadgetKind,
    pub instance: ControlInstance,
    /// Axes with an assignment of the profile's votes.
    pub axes: Option<AxesCertificate>,
    /// Candidate parts whose restricted profiles are single-peaked.
    pub partition: Option<Vec<Vec<Cand>>>,
    /// Sizes predicted by the closed forms.
    pub expected: GadgetCounts,
    /// A search restriction that keeps some minimum solution.
    pub pruning: Option<Pruning>,
    kappa: usize,
}

impl GadgetOutput {
    /// Sizes of the built instance.
    pub fn counts(&self) -> GadgetCounts {
        match &self.instance {
            ControlInstance::Ccav(i) => {
                GadgetCounts { candidates: i.base.m(), registered: i.base.n(), pool: i.pool.len(), budget: i.budget }
            }
            ControlInstance::Ccdv(i) => GadgetCounts { candidates: i.base.m(), registered: i.base.n(), pool: 0, budget: i.budget },
        }
    }

    /// The solution the construction pairs with an exact cover (set indices).
    pub fn forward_solution(&self, cover: &[usize]) -> Solution {
        let sets = 3 * self.kappa;
        let chosen: Vec<bool> = (0..sets).map(|j| cover.contains(&j)).collect();
        let mut picked = Vec::new();
        match self.kind {
            GadgetKind::CcavApproval3Cp | GadgetKind::CcavCondorcet3Cp => {
                for (j, &c) in chosen.iter().enumerate() {
                    if c {
                        picked.extend([4 * j + 1, 4 * j + 2, 4 * j + 3]);
                    } else {
                        picked.push(4 * j);
                    }
                }
            }
            GadgetKind::CcdvApproval2Axes2Cp | GadgetKind::CcdvCondorcet3Cp => {
                let base = if self.kind == GadgetKind::CcdvApproval2Axes2Cp { 2 } else { 0 };
                for (j, &c) in chosen.iter().enumerate() {
                    if c {
                        picked.push(base + 4 * j);
                    } else {
                        picked.extend([base + 4 * j + 1, base + 4 * j + 2, base + 4 * j + 3]);
                    }
                }
            }
            GadgetKind::CcavCopelandAlpha2Axes | GadgetKind::CcavCw2Axes | GadgetKind::CcavCw2Cp => {
                picked.extend((0..sets).filter(|&j| chosen[j]));
            }
            GadgetKind::CcdvCopelandAlpha2Axes | GadgetKind::CcdvCw2Axes => {
                picked.extend((0..sets).filter(|&j| chosen[j]));
            }
            GadgetKind::CcdvCw2Cp => {
                let base = self.kappa + 2;
                picked.extend((0..sets).filter(|&j| !chosen[j]).map(|j| base + j));
            }
        }
        Solution::new(picked)
    }
}

/// Builds the construction of `kind` for `rx3c`; `rule` defaults per kind.
pub fn build_gadget(kind: GadgetKind, rx3c: &Rx3c, rule: Option<Rule>) -> Result<GadgetOutput, Error> {
    rx3c.check()?;
    if rx3c.kappa < kind.min_kappa() {
        return Err(Error::UnsupportedParameter("kappa below the construction's minimum"));
    }
    let rule = rule.unwrap_or_else(|| kind.default_rule());
    kind.check_rule(rule)?;
    let mut g = Builder { kappa: rx3c.kappa, sets: rx3c.sets.iter().map(sorted).collect(), names: Vec::new() };
    match kind {
        GadgetKind::CcavApproval3Cp => g.ccav_approval_3cp(rule),
        GadgetKind::CcdvApproval2Axes2Cp => g.ccdv_approval_2axes(rx3c, rule),
        GadgetKind::CcavCondorcet3Cp => g.condorcet_3cp(true),
        GadgetKind::CcdvCondorcet3Cp => g.condorcet_3cp(false),
        GadgetKind::CcavCopelandAlpha2Axes => g.copeland_alpha(true, rule),
        GadgetKind::CcdvCopelandAlpha2Axes => g.copeland_alpha(false, rule),
        GadgetKind::CcavCw2Axes => g.cw_2axes(true, rule),
        GadgetKind::CcdvCw2Axes => g.cw_2axes(false, rule),
        GadgetKind::CcavCw2Cp => g.cw_2cp(true, rule),
        GadgetKind::CcdvCw2Cp => g.cw_2cp(false, rule),
    }
}

fn sorted(s: &[usize; 3]) -> [usize; 3] {
    let mut t = *s;
    t.sort_unstable();
    t
}

/// Ranks `block` first and the rest of `order` after it, single-peaked on
/// `order`; an empty block gives `order` itself.
fn walk(order: &[Cand], block: &[Cand]) -> Vec<Cand> {
    if block.is_empty() {
        return order.to_vec();
    }
    let local: Vec<Cand> = block.iter().map(|c| order.iter().position(|x| x == c).expect("block inside order")).collect();
    let v = complete_from_block(&Axis::identity(order.len()), &local).expect("block is consecutive");
    v.order().iter().map(|&i| order[i]).collect()
}

/// Every part ranks its approved candidates first, parts in sequence, then
/// the remainders in the same part sequence.
fn part_vote(parts: &[Vec<Cand>], approved: &[Cand]) -> Vote {
    let walks: Vec<(usize, Vec<Cand>)> = parts
        .iter()
        .map(|part| {
            let block: Vec<Cand> = part.iter().copied().filter(|c| approved.contains(c)).collect();
            (block.len(), walk(part, &block))
        })
        .collect();
    let mut order: Vec<Cand> = walks.iter().flat_map(|(k, w)| w[..*k].iter().copied()).collect();
    order.extend(walks.iter().flat_map(|(k, w)| w[*k..].iter().copied()));
    Vote::from_order(order).expect("parts cover the roster")
}

fn repeat(v: &Vote, times: usize, into: &mut Vec<Vote>) {
    into.extend(core::iter::repeat_n(v.clone(), times));
}

struct Builder {
    kappa: usize,
    sets: Vec<[usize; 3]>,
    names: Vec<String>,
}

impl Builder {
    fn cand(&mut self, name: String) -> Cand {
        self.names.push(name);
        self.names.len() - 1
    }

    fn election(&self, votes: Vec<Vote>) -> Election {
        Election::new(self.names.clone(), votes).expect("construction yields a valid election")
    }

    fn universe(&self) -> usize {
        3 * self.kappa
    }

    fn output(
        &self,
        kind: GadgetKind,
        instance: ControlInstance,
        axes: Option<AxesCertificate>,
        partition: Option<Vec<Vec<Cand>>>,
        expected: GadgetCounts,
        pruning: Option<Pruning>,
    ) -> Result<GadgetOutput, Error> {
        Ok(GadgetOutput { kind, instance, axes, partition, expected, pruning, kappa: self.kappa })
    }

    fn ccav(&self, registered: Vec<Vote>, pool: Vec<Vote>, p: Cand, budget: usize, rule: Rule) -> ControlInstance {
        ControlInstance::Ccav(CcavInstance { base: self.election(registered), pool, p, budget, rule, model: Model::Unique })
    }

    fn ccdv(&self, votes: Vec<Vote>, p: Cand, budget: usize, rule: Rule) -> ControlInstance {
        ControlInstance::Ccdv(CcdvInstance { base: self.election(votes), p, budget, rule, model: Model::Unique })
    }

    fn ccav_approval_3cp(&mut self, rule: Rule) -> Result<GadgetOutput, Error> {
        let Rule::RApproval(r) = rule else { unreachable!("rule checked") };
        let (k, n, extra) = (self.kappa, self.universe(), r - 4);
        // Element blocks: c^1, copies of c^2, c^2, c^3, c^4.
        let mut elem = Vec::with_capacity(n);
        let mut part1 = Vec::new();
        for x in 1..=n {
            let one = self.cand(format!("c{x}^1"));
            let copies: Vec<Cand> = (1..=extra).map(|i| self.cand(format!("c{x}^2~{i}"))).collect();
            let two = self.cand(format!("c{x}^2"));
            let three = self.cand(format!("c{x}^3"));
            let four = self.cand(format!("c{x}^4"));
            part1.push(one);
            part1.extend(&copies);
            part1.extend([two, three, four]);
            elem.push((one, copies, two, three, four));
        }
        // Set blocks: the three element copies, s', then copies of s'.
        let mut per_set = Vec::with_capacity(n);
        let mut part2 = Vec::new();
        for j in 0..n {
            let s = self.sets[j];
            let trio: Vec<Cand> = s.iter().map(|&x| self.cand(format!("c{}(s{})", x + 1, j + 1))).collect();
            let prime = self.cand(format!("s{}'", j + 1));
            let copies: Vec<Cand> = (1..=extra).map(|i| self.cand(format!("s{}'~{i}", j + 1))).collect();
            part2.extend(&trio);
            part2.push(prime);
            part2.extend(&copies);
            per_set.push((trio, prime, copies));
        }
        let left: Vec<Cand> = (1..=extra).map(|i| self.cand(format!("pl{i}"))).collect();
        let p = self.cand("p".into());
        let q: Vec<Cand> = (1..=4).map(|i| self.cand(format!("q{i}"))).collect();
        let right: Vec<Cand> = (1..=extra).map(|i| self.cand(format!("qr{i}"))).collect();
        let mut part3 = left.clone();
        part3.push(p);
        part3.extend(&q);
        part3.extend(&right);
        let parts = vec![part1, part2, part3];

        let mut registered = Vec::new();
        let mut approved: Vec<Cand> = q.clone();
        approved.extend(&right);
        repeat(&part_vote(&parts, &approved), 5 * k - 1, &mut registered);
        for (trio, prime, copies) in &per_set {
            let mut a = trio.clone();
            a.push(*prime);
            a.extend(copies);
            repeat(&part_vote(&parts, &a), 5 * k - 2, &mut registered);
        }
        for (one, copies, two, three, four) in &elem {
            let mut a = vec![*one, *two, *three, *four];
            a.extend(copies);
            repeat(&part_vote(&parts, &a), 5 * k - 2, &mut registered);
        }
        let mut pool = Vec::new();
        for (j, (trio, _, _)) in per_set.iter().enumerate() {
            let mut a = trio.clone();
            a.push(p);
            a.extend(&left);
            pool.push(part_vote(&parts, &a));
            for (i, &x) in self.sets[j].iter().enumerate() {
                let (one, copies, two, _, _) = &elem[x];
                let mut a = vec![trio[i], *one, *two, p];
                a.extend(copies);
                pool.push(part_vote(&parts, &a));
            }
        }
        let expected = GadgetCounts {
            candidates: 24 * k + 5 + 6 * k * extra + 2 * extra,
            registered: (5 * k - 1) + 2 * n * (5 * k - 2),
            pool: 12 * k,
            budget: 5 * k,
        };
        let inst = self.ccav(registered, pool, p, 5 * k, rule);
        self.output(GadgetKind::CcavApproval3Cp, inst, None, Some(parts), expected, Some(Pruning::ApprovingP))
    }

    fn ccdv_approval_2axes(&mut self, rx3c: &Rx3c, rule: Rule) -> Result<GadgetOutput, Error> {
        let Rule::RApproval(r) = rule else { unreachable!("rule checked") };
        let (k, n, extra) = (self.kappa, self.universe(), r - 3);
        // Element blocks: c^1, copies of c^2, c^2.
        let mut elem: Vec<Vec<Cand>> = Vec::with_capacity(n);
        for x in 1..=n {
            let mut block = vec![self.cand(format!("c{x}^1"))];
            block.extend((1..=extra).map(|i| self.cand(format!("c{x}^2~{i}"))));
            block.push(self.cand(format!("c{x}^2")));
            elem.push(block);
        }
        let a_q1: Vec<Cand> = (1..=extra).map(|i| self.cand(format!("q1~{i}"))).collect();
        let q1 = self.cand("q1".into());
        let q2 = self.cand("q2".into());
        let p = self.cand("p".into());
        let q3 = self.cand("q3".into());
        let q4 = self.cand("q4".into());
        let a_q4: Vec<Cand> = (1..=extra).map(|i| self.cand(format!("q4~{i}"))).collect();
        let mut head = a_q1.clone();
        head.extend([q1, q2, p, q3, q4]);
        head.extend(&a_q4);
        // Per set: the element copies in set order and the dummy block.
        let mut trio: Vec<[Cand; 3]> = Vec::with_capacity(n);
        let mut dummies: Vec<Vec<Cand>> = Vec::with_capacity(n);
        for j in 0..n {
            let s = self.sets[j];
            let t = [0, 1, 2].map(|i| self.cand(format!("c{}(s{})", s[i] + 1, j + 1)));
            trio.push(t);
            dummies.push((1..=extra).map(|i| self.cand(format!("s{}~{i}", j + 1))).collect());
        }

        // Two axes from the incidence graph's consecutive-pair orders.
        let co = consecutive_pair_orders(&rx3c.incidence_graph())?;
        let graph = rx3c.incidence_graph();
        let expand = |order: &[usize]| -> Vec<Cand> {
            let mut out = head.clone();
            for (i, &v) in order.iter().enumerate() {
                if v < n {
                    out.extend(&elem[v]);
                    continue;
                }
                let j = v - n;
                let s = self.sets[j];
                let before = i.checked_sub(1).map(|b| order[b]).filter(|&u| u < n);
                let after = order.get(i + 1).copied().filter(|&u| u < n);
                let slot = |u: Option<usize>| u.and_then(|u| s.iter().position(|&x| x == u));
                let (first, last) = (slot(before), slot(after));
                let mut rest: Vec<usize> = (0..3).filter(|&t| Some(t) != first && Some(t) != last).collect();
                let mut seq: Vec<usize> = first.into_iter().collect();
                seq.append(&mut rest);
                // The dummies sit before the final copy so both ends stay free.
                let tail = last.or_else(|| seq.pop());
                out.extend(seq.iter().map(|&t| trio[j][t]));
                out.extend(&dummies[j]);
                out.extend(tail.map(|t| trio[j][t]));
            }
            out
        };
        let axes = [Axis::new(expand(&co.order1))?, Axis::new(expand(&co.order2))?];
        let in_first: BTreeSet<(usize, usize)> = co.edge_partition.0.iter().map(|&e| graph.edges()[e]).collect();

        // The claimed partition; the completions above need not respect it.
        let mut part1: Vec<Cand> = elem.iter().flatten().copied().collect();
        part1.extend(&head);
        let part2: Vec<Cand> = (0..n).flat_map(|j| trio[j].iter().chain(&dummies[j]).copied().collect::<Vec<_>>()).collect();
        let parts = vec![part1, part2];

        // Approved sets with the axis each one is consecutive on.
        let mut blocks: Vec<(Vec<Cand>, usize)> = Vec::new();
        let mut first_vote = vec![p, q1, q2];
        first_vote.extend(&a_q1);
        let mut second_vote = vec![p, q3, q4];
        second_vote.extend(&a_q4);
        blocks.push((first_vote, 0));
        blocks.push((second_vote, 0));
        for j in 0..n {
            let mut a = trio[j].to_vec();
            a.extend(&dummies[j]);
            blocks.push((a, 0));
            for (t, &x) in self.sets[j].iter().enumerate() {
                let mut a = vec![trio[j][t]];
                a.extend(&elem[x]);
                blocks.push((a, if in_first.contains(&(x, j)) { 0 } else { 1 }));
            }
        }
        let votes: Vec<Vote> =
            blocks.iter().map(|(b, a)| complete_from_block(&axes[*a], b)).collect::<Result<_, _>>()?;
        let assignment = blocks.iter().map(|b| b.1).collect();
        let expected = GadgetCounts {
            candidates: 15 * k + 5 + 2 * extra + 6 * k * extra,
            registered: 2 + 4 * n,
            pool: 0,
            budget: 7 * k,
        };
        let cert = AxesCertificate { axes: axes.to_vec(), assignment };
        let inst = self.ccdv(votes, p, 7 * k, rule);
        self.output(GadgetKind::CcdvApproval2Axes2Cp, inst, Some(cert), Some(parts), expected, Some(Pruning::NonApprovingP))
    }

    fn condorcet_3cp(&mut self, adding: bool) -> Result<GadgetOutput, Error> {
        let (k, n) = (self.kappa, self.universe());
        let primes: Vec<Cand> = (1..=n).map(|x| self.cand(format!("c{x}'"))).collect();
        let mut trio: Vec<[Cand; 3]> = Vec::with_capacity(n);
        for j in 0..n {
            let s = self.sets[j];
            trio.push([0, 1, 2].map(|i| self.cand(format!("c{}(s{})", s[i] + 1, j + 1))));
        }
        let p = self.cand("p".into());
        let q = (!adding).then(|| self.cand("q".into()));
        let part2: Vec<Cand> = trio.iter().flatten().copied().collect();
        let mut part3 = vec![p];
        part3.extend(q);
        let parts = vec![primes.clone(), part2.clone(), part3];
        // `lead` ranked first, then q (when present) and p, then the rest of
        // the set part and the element part, each single-peaked.
        let shaped = |lead_sets: &[Cand], lead_elem: &[Cand], q_above: bool| -> Vote {
            let w2 = walk(&part2, lead_sets);
            let w1 = walk(&primes, lead_elem);
            let mut order: Vec<Cand> = w2[..lead_sets.len()].to_vec();
            order.extend(&w1[..lead_elem.len()]);
            if q_above {
                order.extend(q);
            }
            order.push(p);
            order.extend(&w2[lead_sets.len()..]);
            order.extend(&w1[lead_elem.len()..]);
            if !q_above {
                order.extend(q);
            }
            Vote::from_order(order).expect("permutation")
        };
        let mut gadget_votes = Vec::with_capacity(4 * n);
        for j in 0..n {
            gadget_votes.push(shaped(&trio[j], &[], q.is_some()));
            for (t, &x) in self.sets[j].iter().enumerate() {
                gadget_votes.push(shaped(&[trio[j][t]], &[primes[x]], q.is_some()));
            }
        }
        let bottom = |tail: &[Cand]| -> Vote {
            let mut order = primes.clone();
            order.extend(&part2);
            order.extend(tail);
            Vote::from_order(order).expect("permutation")
        };
        if adding {
            let mut registered = Vec::new();
            repeat(&bottom(&[p]), 5 * k - 3, &mut registered);
            let expected = GadgetCounts { candidates: 12 * k + 1, registered: 5 * k - 3, pool: 12 * k, budget: 5 * k };
            let inst = self.ccav(registered, gadget_votes, p, 5 * k, Rule::Condorcet);
            return self.output(GadgetKind::CcavCondorcet3Cp, inst, None, Some(parts), expected, None);
        }
        let q = q.expect("deletion variant has q");
        let mut votes = gadget_votes;
        let mut top = vec![p, q];
        top.extend(&primes);
        top.extend(&part2);
        repeat(&Vote::from_order(top)?, 2, &mut votes);
        repeat(&bottom(&[p, q]), 5 * k - 1, &mut votes);
        let guard: Vec<usize> = (4 * n..votes.len()).collect();
        let expected = GadgetCounts { candidates: 12 * k + 2, registered: 17 * k + 1, pool: 0, budget: 7 * k };
        let inst = self.ccdv(votes, p, 7 * k, Rule::Condorcet);
        let pruning = Pruning::Exclude { votes: guard, reason: "keep-p-q-votes" };
        self.output(GadgetKind::CcdvCondorcet3Cp, inst, None, Some(parts), expected, Some(pruning))
    }

    fn copeland_alpha(&mut self, adding: bool, rule: Rule) -> Result<GadgetOutput, Error> {
        let (k, n) = (self.kappa, self.universe());
        let mut lr = Vec::with_capacity(n);
        for x in 1..=n {
            lr.push((self.cand(format!("c{x}L")), self.cand(format!("c{x}R"))));
        }
        let p = self.cand("p".into());
        let pp = self.cand("p'".into());
        let a: Vec<Cand> = lr.iter().map(|c| c.0).collect();
        let b: Vec<Cand> = lr.iter().map(|c| c.1).collect();
        let mut axis1 = vec![p];
        axis1.extend(&a);
        axis1.extend(b.iter().rev());
        axis1.push(pp);
        let mut axis2: Vec<Cand> = a.iter().rev().copied().collect();
        axis2.extend([p, pp]);
        axis2.extend(&b);
        let axes = vec![Axis::new(axis1)?, Axis::new(axis2)?];
        // Pairs from the last element down, each pair ordered by `left_first`.
        let descending = |left_first: &dyn Fn(usize) -> bool, tail: [Cand; 2]| -> Vote {
            let mut order = Vec::new();
            for x in (0..n).rev() {
                let (l, r) = lr[x];
                order.extend(if left_first(x) { [l, r] } else { [r, l] });
            }
            order.extend(tail);
            Vote::from_order(order).expect("permutation")
        };
        let ascending = |left_first: &dyn Fn(usize) -> bool| -> Vote {
            let mut order = vec![p, pp];
            for (x, &(l, r)) in lr.iter().enumerate() {
                order.extend(if left_first(x) { [l, r] } else { [r, l] });
            }
            Vote::from_order(order).expect("permutation")
        };
        let per_set: Vec<BTreeSet<usize>> = self.sets.iter().map(|s| s.iter().copied().collect()).collect();
        if adding {
            let mut registered = Vec::new();
            repeat(&descending(&|_| true, [pp, p]), k - 1, &mut registered);
            registered.push(descending(&|_| false, [p, pp]));
            let pool: Vec<Vote> = per_set.iter().map(|s| ascending(&|x| s.contains(&x))).collect();
            let assignment = [vec![0; k], vec![1; n]].concat();
            let expected = GadgetCounts { candidates: 6 * k + 2, registered: k, pool: n, budget: k };
            let inst = self.ccav(registered, pool, p, k, rule);
            let cert = AxesCertificate { axes, assignment };
            return self.output(GadgetKind::CcavCopelandAlpha2Axes, inst, Some(cert), None, expected, None);
        }
        let mut votes: Vec<Vote> = per_set.iter().map(|s| descending(&|x| s.contains(&x), [p, pp])).collect();
        repeat(&ascending(&|_| true), 2 * k - 2, &mut votes);
        repeat(&ascending(&|_| false), 2, &mut votes);
        let assignment = [vec![0; n], vec![1; 2 * k]].concat();
        let expected = GadgetCounts { candidates: 6 * k + 2, registered: 5 * k, pool: 0, budget: k };
        let inst = self.ccdv(votes, p, k, rule);
        let cert = AxesCertificate { axes, assignment };
        self.output(GadgetKind::CcdvCopelandAlpha2Axes, inst, Some(cert), None, expected, None)
    }

    fn cw_2axes(&mut self, adding: bool, rule: Rule) -> Result<GadgetOutput, Error> {
        let (k, n) = (self.kappa, self.universe());
        let mut c: Vec<[Cand; 3]> = Vec::with_capacity(n);
        for x in 1..=n {
            c.push([1, 2, 3].map(|i| self.cand(format!("c{x}^{i}"))));
        }
        let p = self.cand("p".into());
        // Element blocks in the given index sequence, members in `pattern`
        // (1-based member numbers) chosen per element.
        let blocks = |xs: &mut dyn Iterator<Item = usize>, pattern: &dyn Fn(usize) -> [usize; 3]| -> Vec<Cand> {
            xs.flat_map(|x| pattern(x).map(|i| c[x][i - 1])).collect()
        };
        let per_set: Vec<BTreeSet<usize>> = self.sets.iter().map(|s| s.iter().copied().collect()).collect();
        // The deletion profile runs the elements in the opposite direction,
        // so its axes use the mirrored element sequence.
        let seq: Vec<usize> = if adding { (0..n).collect() } else { (0..n).rev().collect() };
        let mut axis1: Vec<Cand> = seq.iter().map(|&x| c[x][0]).collect();
        axis1.extend(seq.iter().rev().flat_map(|&x| [c[x][1], c[x][2]]));
        axis1.push(p);
        let mut axis2: Vec<Cand> = seq.iter().rev().flat_map(|&x| [c[x][0], c[x][2]]).collect();
        axis2.push(p);
        axis2.extend(seq.iter().map(|&x| c[x][1]));
        let axes = vec![Axis::new(axis1)?, Axis::new(axis2)?];
        let with_p_last = |mut v: Vec<Cand>| {
            v.push(p);
            Vote::from_order(v).expect("permutation")
        };
        let with_p_first = |v: Vec<Cand>| {
            let mut order = vec![p];
            order.extend(v);
            Vote::from_order(order).expect("permutation")
        };
        if adding {
            let mut registered = Vec::new();
            repeat(&with_p_last(blocks(&mut (0..n).rev(), &|_| [1, 2, 3])), 2, &mut registered);
            repeat(&with_p_last(blocks(&mut (0..n).rev(), &|_| [2, 3, 1])), k - 2, &mut registered);
            let pool: Vec<Vote> = per_set
                .iter()
                .map(|s| with_p_first(blocks(&mut (0..n), &|x| if s.contains(&x) { [2, 3, 1] } else { [3, 1, 2] })))
                .collect();
            let assignment = [vec![0; k], vec![1; n]].concat();
            let expected = GadgetCounts { candidates: 9 * k + 1, registered: k, pool: n, budget: k };
            let inst = self.ccav(registered, pool, p, k, rule);
            let cert = AxesCertificate { axes, assignment };
            return self.output(GadgetKind::CcavCw2Axes, inst, Some(cert), None, expected, None);
        }
        let mut votes: Vec<Vote> = per_set
            .iter()
            .map(|s| with_p_last(blocks(&mut (0..n), &|x| if s.contains(&x) { [1, 2, 3] } else { [2, 3, 1] })))
            .collect();
        votes.push(with_p_first(blocks(&mut (0..n).rev(), &|_| [2, 3, 1])));
        repeat(&with_p_first(blocks(&mut (0..n).rev(), &|_| [3, 1, 2])), 2 * k - 1, &mut votes);
        let assignment = [vec![0; n], vec![1; 2 * k]].concat();
        let expected = GadgetCounts { candidates: 9 * k + 1, registered: 5 * k, pool: 0, budget: k };
        let inst = self.ccdv(votes, p, k, rule);
        let cert = AxesCertificate { axes, assignment };
        self.output(GadgetKind::CcdvCw2Axes, inst, Some(cert), None, expected, None)
    }

    fn cw_2cp(&mut self, adding: bool, rule: Rule) -> Result<GadgetOutput, Error> {
        let (k, n) = (self.kappa, self.universe());
        let mut c: Vec<[Cand; 4]> = Vec::with_capacity(n);
        for x in 1..=n {
            c.push([1, 2, 3, 4].map(|i| self.cand(format!("c{x}^{i}"))));
        }
        let p = self.cand("p".into());
        let mut part1 = vec![p];
        part1.extend(c.iter().flat_map(|b| [b[0], b[2]]));
        let part2: Vec<Cand> = c.iter().flat_map(|b| [b[1], b[3]]).collect();
        let parts = vec![part1, part2];
        let per_set: Vec<BTreeSet<usize>> = self.sets.iter().map(|s| s.iter().copied().collect()).collect();
        // Element blocks in index order (or reversed), members by `pattern`,
        // with p first or last.
        let vote = |descending: bool, pattern: &dyn Fn(usize) -> [usize; 4], p_first: bool| -> Vote {
            let xs: Vec<usize> = if descending { (0..n).rev().collect() } else { (0..n).collect() };
            let mut order = Vec::with_capacity(4 * n + 1);
            if p_first {
                order.push(p);
            }
            order.extend(xs.iter().flat_map(|&x| pattern(x).map(|i| c[x][i - 1])));
            if !p_first {
                order.push(p);
            }
            Vote::from_order(order).expect("permutation")
        };
        // The adding profile ranks p last in these votes; deletion flips p.
        let mut votes = Vec::new();
        repeat(&vote(true, &|_| [3, 1, 4, 2], !adding), k - 2, &mut votes);
        votes.push(vote(true, &|_| [4, 2, 3, 1], !adding));
        repeat(&vote(true, &|_| [3, 4, 1, 2], !adding), 2, &mut votes);
        votes.push(vote(false, &|_| [1, 2, 3, 4], adding));
        let set_votes: Vec<Vote> = per_set
            .iter()
            .map(|s| vote(false, &|x| if s.contains(&x) { [1, 2, 3, 4] } else { [2, 4, 1, 3] }, adding)).collect();
        if adding {
            let expected = GadgetCounts { candidates: 12 * k + 1, registered: k + 2, pool: n, budget: k };
            let inst = self.ccav(votes, set_votes, p, k, rule);
            return self.output(GadgetKind::CcavCw2Cp, inst, None, Some(parts), expected, None);
        }
        votes.extend(set_votes);
        let expected = GadgetCounts { candidates: 12 * k + 1, registered: 4 * k + 2, pool: 0, budget: 2 * k };
        let inst = self.ccdv(votes, p, 2 * k, rule);
        self.output(GadgetKind::CcdvCw2Cp, inst, None, Some(parts), expected, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{brute_force_ccav, brute_force_ccdv, is_feasible_ccav, is_feasible_ccdv, SearchOptions};
    use crate::structure::{check_certificate, verify_k_axes, verify_k_cp};

    fn fixed_yes() -> Rx3c {
        // {0,1,2} and {3,4,5} cover; the others make every element appear thrice.
        Rx3c { kappa: 2, sets: vec![[0, 1, 2], [3, 4, 5], [0, 1, 3], [2, 4, 5], [0, 2, 4], [1, 3, 5]] }
    }

    #[test]
    fn validation() {
        assert!(validate_rx3c(&fixed_yes()));
        let mut bad = fixed_yes();
        bad.sets[5] = [1, 3, 4];
        assert!(!validate_rx3c(&bad));
        let mut dup = fixed_yes();
        dup.sets[1] = [0, 1, 2];
        assert!(!validate_rx3c(&dup));
        assert!(!validate_rx3c(&Rx3c { kappa: 0, sets: Vec::new() }));
    }

    #[test]
    fn exact_cover_search() {
        assert_eq!(brute_force_rx3c(&fixed_yes()), Some(vec![0, 1]));
        let no = mine_rx3c(2, false, 7, 10_000).expect("a coverless instance exists");
        assert!(validate_rx3c(&no));
        assert_eq!(brute_force_rx3c(&no), None);
    }

    fn instances(kappa: usize) -> Vec<(Rx3c, bool)> {
        let yes = mine_rx3c(kappa, true, 11, 100_000).unwrap();
        let no = mine_rx3c(kappa, false, 11, 100_000).unwrap();
        vec![(yes, true), (no, false)]
    }

    fn check_structure(out: &GadgetOutput) {
        assert_eq!(out.counts(), out.expected, "{}", out.kind);
        let profile = out.instance.profile();
        if let Some(cert) = &out.axes {
            assert!(check_certificate(&profile, cert), "{}", out.kind);
            assert!(verify_k_axes(&profile, &cert.axes).unwrap().is_some());
        }
        if let Some(parts) = &out.partition {
            assert!(verify_k_cp(&profile, parts).unwrap(), "{}", out.kind);
        }
    }

    fn forward_ok(out: &GadgetOutput, cover: &[usize]) -> bool {
        let sol = out.forward_solution(cover);
        match &out.instance {
            ControlInstance::Ccav(i) => is_feasible_ccav(i, &sol).unwrap(),
            ControlInstance::Ccdv(i) => is_feasible_ccdv(i, &sol).unwrap(),
        }
    }

    #[test]
    fn closed_form_counts() {
        let yes = fixed_yes();
        let c = build_gadget(GadgetKind::CcavApproval3Cp, &yes, None).unwrap().counts();
        assert_eq!(c, GadgetCounts { candidates: 53, registered: 105, pool: 24, budget: 10 });
        let c = build_gadget(GadgetKind::CcavCondorcet3Cp, &yes, None).unwrap().counts();
        assert_eq!(c, GadgetCounts { candidates: 25, registered: 7, pool: 24, budget: 10 });
        let three = mine_rx3c(3, true, 3, 100_000).unwrap();
        let c = build_gadget(GadgetKind::CcdvCw2Cp, &three, None).unwrap().counts();
        assert_eq!(c, GadgetCounts { candidates: 37, registered: 14, pool: 0, budget: 6 });
    }

    #[test]
    fn structures_and_forward_solutions() {
        for kind in GadgetKind::ALL {
            let kappa = kind.min_kappa().max(2);
            for (rx, _) in instances(kappa).into_iter().filter(|x| x.1) {
                let out = build_gadget(kind, &rx, None).unwrap();
                if kind != GadgetKind::CcdvApproval2Axes2Cp {
                    check_structure(&out);
                } else {
                    assert_eq!(out.counts(), out.expected);
                    assert!(check_certificate(&out.instance.profile(), out.axes.as_ref().unwrap()));
                }
                let cover = brute_force_rx3c(&rx).unwrap();
                assert!(forward_ok(&out, &cover), "{kind}");
            }
        }
    }

    #[test]
    fn wider_approval_variants() {
        let rx = fixed_yes();
        for r in [5, 6] {
            let out = build_gadget(GadgetKind::CcavApproval3Cp, &rx, Some(Rule::RApproval(r))).unwrap();
            check_structure(&out);
            assert!(forward_ok(&out, &[0, 1]));
        }
        for r in [4, 5] {
            let out = build_gadget(GadgetKind::CcdvApproval2Axes2Cp, &rx, Some(Rule::RApproval(r))).unwrap();
            assert_eq!(out.counts(), out.expected);
            assert!(check_certificate(&out.instance.profile(), out.axes.as_ref().unwrap()));
            assert!(forward_ok(&out, &[0, 1]));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let rx = fixed_yes();
        assert!(build_gadget(GadgetKind::CcavApproval3Cp, &rx, Some(Rule::RApproval(3))).is_err());
        assert!(build_gadget(GadgetKind::CcavCw2Axes, &rx, None).is_err());
        assert!(build_gadget(GadgetKind::CcavCopelandAlpha2Axes, &rx, Some(Rule::copeland(1, 1).unwrap())).is_err());
        let mut bad = rx.clone();
        bad.sets.pop();
        assert!(build_gadget(GadgetKind::CcavCondorcet3Cp, &bad, None).is_err());
    }

    #[test]
    fn small_constructions_decide_like_the_cover() {
        let kinds = [
            (GadgetKind::CcavCopelandAlpha2Axes, 2),
            (GadgetKind::CcdvCopelandAlpha2Axes, 2),
            (GadgetKind::CcavCw2Axes, 3),
            (GadgetKind::CcdvCw2Axes, 4),
            (GadgetKind::CcavCw2Cp, 3),
            (GadgetKind::CcdvCw2Cp, 3),
        ];
        for (kind, kappa) in kinds {
            let rules: Vec<Rule> = if kind.default_rule() == Rule::copeland(1, 1).unwrap() {
                vec![Rule::copeland(1, 1).unwrap(), Rule::Maximin]
            } else {
                vec![Rule::copeland(0, 1).unwrap(), Rule::copeland(1, 2).unwrap()]
            };
            for rule in rules {
                for (rx, coverable) in instances(kappa) {
                    let out = build_gadget(kind, &rx, Some(rule)).unwrap();
                    let opts = SearchOptions { pruning: out.pruning.clone(), ..SearchOptions::default() };
                    let found = match &out.instance {
                        ControlInstance::Ccav(i) => brute_force_ccav(i, &opts).unwrap().is_some(),
                        ControlInstance::Ccdv(i) => brute_force_ccdv(i, &opts).unwrap().is_some(),
                    };
                    assert_eq!(found, coverable, "{kind} {rule}");
                }
            }
        }
    }
}

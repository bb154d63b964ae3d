//! Text formats: elections, control instances, axes, partitions, graphs,
//! RX3C instances and 2-CNF DIMACS.
//!
//! All readers skip blank lines and `#` comments and report 1-based line
//! numbers on failure.

use std::fmt::Write as _;

use peak_core::control::{CcavInstance, CcdvInstance, Model};
use peak_core::election::{Cand, Election, Vote};
use peak_core::gadgets::Rx3c;
use peak_core::graphs::BipartiteGraph;
use peak_core::rules::{parse_rule, Rule};
use peak_core::sat2::{Lit, TwoSat};
use peak_core::structure::Axis;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    /// 1-based; 0 when the problem is the end of input.
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// Content lines with their numbers, comments stripped.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn parse_num<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T, FormatError> {
    token.parse().or_else(|_| fail(line, format!("expected {what}, found `{token}`")))
}

fn ranking(line: usize, text: &str, e_names: &[String]) -> Result<Vote, FormatError> {
    let order: Result<Vec<Cand>, FormatError> = text
        .split('>')
        .map(|t| {
            let t = t.trim();
            e_names.iter().position(|n| n == t).map_or_else(|| fail(line, format!("unknown candidate `{t}`")), Ok)
        })
        .collect();
    Vote::from_order(order?).or_else(|_| fail(line, "ranking must list every candidate exactly once"))
}

/// Reads the election header, roster and rankings from the front of
/// `lines`, returning the election and how many lines it used.
fn election_prefix(lines: &[(usize, &str)]) -> Result<(Election, usize), FormatError> {
    let Some(&(l1, header)) = lines.first() else {
        return fail(0, "missing `m n` header");
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return fail(l1, "header must be `m n`");
    }
    let m: usize = parse_num(l1, fields[0], "candidate count")?;
    let n: usize = parse_num(l1, fields[1], "vote count")?;
    let Some(&(l2, roster)) = lines.get(1) else {
        return fail(0, "missing candidate names");
    };
    let names: Vec<String> = roster.split_whitespace().map(String::from).collect();
    if names.len() != m {
        return fail(l2, format!("expected {m} candidate names, found {}", names.len()));
    }
    if let Some(bad) = names.iter().find(|n| n.contains('>') || n.starts_with('[')) {
        return fail(l2, format!("invalid candidate name `{bad}`"));
    }
    let mut votes = Vec::with_capacity(n);
    for i in 0..n {
        let Some(&(l, text)) = lines.get(2 + i) else {
            return fail(0, format!("expected {n} rankings, found {i}"));
        };
        if text.starts_with('[') {
            return fail(l, format!("expected {n} rankings, found {i}"));
        }
        votes.push(ranking(l, text, &names)?);
    }
    let e = Election::new(names, votes).or_else(|err| fail(l2, err.to_string()))?;
    Ok((e, 2 + n))
}

pub fn parse_election(text: &str) -> Result<Election, FormatError> {
    let lines = content_lines(text);
    let (e, used) = election_prefix(&lines)?;
    if let Some(&(l, _)) = lines.get(used) {
        return fail(l, "unexpected content after the rankings");
    }
    Ok(e)
}

pub fn write_election(e: &Election) -> String {
    let mut out = format!("{} {}\n{}\n", e.m(), e.n(), e.names().join(" "));
    for v in e.votes() {
        out.push_str(&ranking_text(e, v));
        out.push('\n');
    }
    out
}

fn ranking_text(e: &Election, v: &Vote) -> String {
    v.order().iter().map(|&c| e.name(c)).collect::<Vec<_>>().join(" > ")
}

/// A control instance as written on disk; the command decides whether it is
/// read as adding or deleting votes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub base: Election,
    /// `Some` when a `[pool]` section is present.
    pub pool: Option<Vec<Vote>>,
    pub p: Cand,
    pub budget: usize,
    pub rule: Option<Rule>,
    pub model: Model,
}

impl InstanceFile {
    /// Registered votes followed by pool votes.
    pub fn profile(&self) -> Election {
        let mut votes = self.base.votes().to_vec();
        votes.extend(self.pool.iter().flatten().cloned());
        self.base.with_votes(votes)
    }

    pub fn ccav(&self, rule: Rule) -> CcavInstance {
        CcavInstance {
            base: self.base.clone(),
            pool: self.pool.clone().unwrap_or_default(),
            p: self.p,
            budget: self.budget,
            rule,
            model: self.model,
        }
    }

    pub fn ccdv(&self, rule: Rule) -> CcdvInstance {
        CcdvInstance { base: self.base.clone(), p: self.p, budget: self.budget, rule, model: self.model }
    }
}

/// Whether the text carries instance sections after the election.
pub fn looks_like_instance(text: &str) -> bool {
    content_lines(text).iter().any(|(_, l)| l.starts_with('['))
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, FormatError> {
    let lines = content_lines(text);
    let (base, used) = election_prefix(&lines)?;
    let mut pool: Option<Vec<Vote>> = None;
    let (mut p, mut budget, mut rule, mut model) = (None, None, None, None);
    let mut in_pool = false;
    for &(l, text) in &lines[used..] {
        if !text.starts_with('[') {
            if !in_pool {
                return fail(l, "content outside a section");
            }
            pool.as_mut().expect("pool open").push(ranking(l, text, base.names())?);
            continue;
        }
        let Some((head, rest)) = text[1..].split_once(']') else {
            return fail(l, "unterminated section name");
        };
        let rest = rest.trim();
        in_pool = false;
        let once = |set: bool| if set { fail(l, format!("repeated section [{head}]")) } else { Ok(()) };
        match head {
            "pool" => {
                once(pool.is_some())?;
                if !rest.is_empty() {
                    return fail(l, "[pool] takes rankings on the following lines");
                }
                pool = Some(Vec::new());
                in_pool = true;
            }
            "p" => {
                once(p.is_some())?;
                p = Some(base.candidate(rest).map_or_else(|| fail(l, format!("unknown candidate `{rest}`")), Ok)?);
            }
            "budget" => {
                once(budget.is_some())?;
                budget = Some(parse_num(l, rest, "a non-negative budget")?);
            }
            "rule" => {
                once(rule.is_some())?;
                rule = Some(parse_rule(rest).or_else(|e| fail(l, e.to_string()))?);
            }
            "model" => {
                once(model.is_some())?;
                model = Some(match rest {
                    "unique" => Model::Unique,
                    "nonunique" => Model::NonUnique,
                    _ => return fail(l, "model must be `unique` or `nonunique`"),
                });
            }
            other => return fail(l, format!("unknown section [{other}]")),
        }
    }
    let p = p.map_or_else(|| fail(0, "missing [p] section"), Ok)?;
    let budget = budget.map_or_else(|| fail(0, "missing [budget] section"), Ok)?;
    Ok(InstanceFile { base, pool, p, budget, rule, model: model.unwrap_or(Model::Unique) })
}

pub fn write_instance(
    base: &Election,
    pool: Option<&[Vote]>,
    p: Cand,
    budget: usize,
    rule: Rule,
    model: Model,
) -> String {
    let mut out = write_election(base);
    if let Some(pool) = pool {
        out.push_str("[pool]\n");
        for v in pool {
            out.push_str(&ranking_text(base, v));
            out.push('\n');
        }
    }
    let model = match model {
        Model::Unique => "unique",
        Model::NonUnique => "nonunique",
    };
    let _ = write!(out, "[p] {}\n[budget] {budget}\n[rule] {rule}\n[model] {model}\n", base.name(p));
    out
}

fn name_list(line: usize, text: &str, e: &Election) -> Result<Vec<Cand>, FormatError> {
    text.split_whitespace()
        .map(|t| e.candidate(t).map_or_else(|| fail(line, format!("unknown candidate `{t}`")), Ok))
        .collect()
}

/// One axis per line, each a full ordering of the roster.
pub fn parse_axes(text: &str, e: &Election) -> Result<Vec<Axis>, FormatError> {
    let lines = content_lines(text);
    if lines.is_empty() {
        return fail(0, "no axis given");
    }
    lines
        .iter()
        .map(|&(l, t)| {
            let order = name_list(l, t, e)?;
            if order.len() != e.m() {
                return fail(l, format!("axis lists {} of {} candidates", order.len(), e.m()));
            }
            Axis::new(order).or_else(|err| fail(l, err.to_string()))
        })
        .collect()
}

pub fn write_axis(axis: &Axis, e: &Election) -> String {
    axis.order().iter().map(|&c| e.name(c)).collect::<Vec<_>>().join(" ")
}

/// One part per line.
pub fn parse_partition(text: &str, e: &Election) -> Result<Vec<Vec<Cand>>, FormatError> {
    let parts: Vec<Vec<Cand>> =
        content_lines(text).iter().map(|&(l, t)| name_list(l, t, e)).collect::<Result<_, _>>()?;
    if parts.is_empty() {
        return fail(0, "no part given");
    }
    Ok(parts)
}

/// `L R E` header, then `E` lines `u v` with `0 <= u < L` and `0 <= v < R`.
pub fn parse_graph(text: &str) -> Result<BipartiteGraph, FormatError> {
    let lines = content_lines(text);
    let Some(&(l1, header)) = lines.first() else {
        return fail(0, "missing `L R E` header");
    };
    let f: Vec<&str> = header.split_whitespace().collect();
    if f.len() != 3 {
        return fail(l1, "header must be `L R E`");
    }
    let left: usize = parse_num(l1, f[0], "left size")?;
    let right: usize = parse_num(l1, f[1], "right size")?;
    let count: usize = parse_num(l1, f[2], "edge count")?;
    if lines.len() - 1 != count {
        return fail(l1, format!("header announces {count} edges, found {}", lines.len() - 1));
    }
    let mut edges = Vec::with_capacity(count);
    for &(l, t) in &lines[1..] {
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 2 {
            return fail(l, "edge must be `u v`");
        }
        let u: usize = parse_num(l, f[0], "left vertex")?;
        let v: usize = parse_num(l, f[1], "right vertex")?;
        if u >= left || v >= right {
            return fail(l, format!("edge ({u}, {v}) outside {left} x {right}"));
        }
        edges.push((u, v));
    }
    BipartiteGraph::new(left, right, edges).or_else(|e| fail(l1, e.to_string()))
}

pub fn write_graph(g: &BipartiteGraph) -> String {
    let mut out = format!("{} {} {}\n", g.left(), g.right(), g.edges().len());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// `kappa`, then `3 kappa` lines of three element names. Elements are
/// numbered by first appearance; the names come back in that order.
pub fn parse_rx3c(text: &str) -> Result<(Rx3c, Vec<String>), FormatError> {
    let lines = content_lines(text);
    let Some(&(l1, head)) = lines.first() else {
        return fail(0, "missing `kappa` line");
    };
    let kappa: usize = parse_num(l1, head, "kappa")?;
    if kappa == 0 {
        return fail(l1, "kappa must be positive");
    }
    if lines.len() - 1 != 3 * kappa {
        return fail(l1, format!("expected {} sets, found {}", 3 * kappa, lines.len() - 1));
    }
    let mut names: Vec<String> = Vec::new();
    let mut sets = Vec::with_capacity(3 * kappa);
    for &(l, t) in &lines[1..] {
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 3 {
            return fail(l, "a set lists exactly three elements");
        }
        let mut set = [0; 3];
        for (slot, name) in set.iter_mut().zip(f) {
            *slot = names.iter().position(|n| n == name).unwrap_or_else(|| {
                names.push(name.to_string());
                names.len() - 1
            });
        }
        if set[0] == set[1] || set[1] == set[2] || set[0] == set[2] {
            return fail(l, "a set repeats an element");
        }
        sets.push(set);
    }
    if names.len() != 3 * kappa {
        return fail(l1, format!("expected {} distinct elements, found {}", 3 * kappa, names.len()));
    }
    let inst = Rx3c { kappa, sets };
    if !peak_core::gadgets::validate_rx3c(&inst) {
        return fail(l1, "every element must lie in exactly three distinct sets");
    }
    Ok((inst, names))
}

/// Elements are written as `e1`, `e2`, and so on.
pub fn write_rx3c(inst: &Rx3c) -> String {
    let mut out = format!("{}\n", inst.kappa);
    for s in &inst.sets {
        let _ = writeln!(out, "e{} e{} e{}", s[0] + 1, s[1] + 1, s[2] + 1);
    }
    out
}

/// DIMACS CNF with clauses of one or two literals.
pub fn parse_dimacs(text: &str) -> Result<TwoSat, FormatError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
        .collect();
    let Some(&(l1, header)) = lines.first() else {
        return fail(0, "missing `p cnf` header");
    };
    let f: Vec<&str> = header.split_whitespace().collect();
    if f.len() != 4 || f[0] != "p" || f[1] != "cnf" {
        return fail(l1, "header must be `p cnf VARS CLAUSES`");
    }
    let vars: usize = parse_num(l1, f[2], "variable count")?;
    let count: usize = parse_num(l1, f[3], "clause count")?;
    let mut sat = TwoSat::new(vars);
    let mut seen = 0;
    for &(l, t) in &lines[1..] {
        let nums: Vec<i64> = t.split_whitespace().map(|x| parse_num(l, x, "a literal")).collect::<Result<_, _>>()?;
        if nums.last() != Some(&0) {
            return fail(l, "clause must end with 0");
        }
        let lits: Vec<Lit> = nums[..nums.len() - 1]
            .iter()
            .map(|&x| {
                let var = x.unsigned_abs() as usize;
                if x == 0 || var > vars {
                    return fail(l, format!("literal {x} out of range"));
                }
                Ok(if x > 0 { Lit::pos(var - 1) } else { Lit::neg(var - 1) })
            })
            .collect::<Result<_, _>>()?;
        match lits[..] {
            [a] => sat.add_unit(a),
            [a, b] => sat.add_clause(a, b),
            _ => return fail(l, "only clauses of width one or two are supported"),
        }
        .or_else(|e| fail(l, e.to_string()))?;
        seen += 1;
    }
    if seen != count {
        return fail(l1, format!("header announces {count} clauses, found {seen}"));
    }
    Ok(sat)
}

pub fn write_dimacs(sat: &TwoSat) -> String {
    let lit = |l: Lit| {
        let v = l.var as i64 + 1;
        if l.positive {
            v
        } else {
            -v
        }
    };
    let mut out = format!("p cnf {} {}\n", sat.vars(), sat.clauses().len());
    for &(a, b) in sat.clauses() {
        let _ = writeln!(out, "{} {} 0", lit(a), lit(b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CYCLE: &str = "# cycle\n3 3\na b c\na > b > c\nb > c > a\n\nc > a > b\n";

    #[test]
    fn election_round_trip() {
        let e = parse_election(CYCLE).unwrap();
        assert_eq!(e.m(), 3);
        assert_eq!(e.n(), 3);
        assert_eq!(parse_election(&write_election(&e)).unwrap(), e);
    }

    #[test]
    fn election_diagnostics() {
        let err = parse_election("3 2\na b c\na > b > c\nb > b > c\n").unwrap_err();
        assert_eq!(err.line, 4);
        let err = parse_election("3 2\na b\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_election("3 2\na b c\na > b > d\n").unwrap_err();
        assert!(err.message.contains("unknown candidate"));
        assert_eq!(parse_election("3 1\na b c\na > b > c\nc > b > a\n").unwrap_err().line, 4);
        assert_eq!(parse_election("x 1\n").unwrap_err().line, 1);
    }

    #[test]
    fn instance_round_trip() {
        let text = "2 1\np a\na > p\n[pool]\np > a\np > a\n[p] p\n[budget] 1\n[rule] condorcet\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.pool.as_ref().unwrap().len(), 2);
        assert_eq!(inst.model, Model::Unique);
        let again = write_instance(&inst.base, inst.pool.as_deref(), inst.p, inst.budget, inst.rule.unwrap(), inst.model);
        assert_eq!(parse_instance(&again).unwrap(), inst);
        assert!(looks_like_instance(text));
        assert!(!looks_like_instance(CYCLE));
    }

    #[test]
    fn instance_diagnostics() {
        assert_eq!(parse_instance("2 0\np a\n[p] q\n[budget] 0\n").unwrap_err().line, 3);
        assert_eq!(parse_instance("2 0\np a\n[p] p\n").unwrap_err().line, 0);
        assert_eq!(parse_instance("2 0\np a\n[p] p\n[budget] 1\n[rule] plurality\n").unwrap_err().line, 5);
        assert_eq!(parse_instance("2 0\np a\n[p] p\n[budget] x\n").unwrap_err().line, 4);
        assert_eq!(parse_instance("2 0\np a\np > a\n").unwrap_err().line, 3);
    }

    #[test]
    fn axes_and_partitions() {
        let e = parse_election(CYCLE).unwrap();
        let axes = parse_axes("a b c\nb a c\n", &e).unwrap();
        assert_eq!(axes.len(), 2);
        assert_eq!(write_axis(&axes[1], &e), "b a c");
        assert_eq!(parse_axes("a b\n", &e).unwrap_err().line, 1);
        assert_eq!(parse_partition("a b\nc\n", &e).unwrap(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn graph_round_trip() {
        let g = parse_graph("2 2 4\n0 0\n0 1\n1 0\n1 1\n").unwrap();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        assert_eq!(parse_graph("2 2 1\n0 5\n").unwrap_err().line, 2);
        assert_eq!(parse_graph("2 2 2\n0 0\n").unwrap_err().line, 1);
    }

    #[test]
    fn rx3c_round_trip() {
        let text = "2\nx y z\nu v w\nx y u\nz v w\nx z v\ny u w\n";
        let (inst, names) = parse_rx3c(text).unwrap();
        assert_eq!(names, ["x", "y", "z", "u", "v", "w"]);
        assert_eq!(parse_rx3c(&write_rx3c(&inst)).unwrap().0, inst);
        assert_eq!(parse_rx3c("1\na b c\n").unwrap_err().line, 1);
        assert_eq!(parse_rx3c("2\nx x z\n").unwrap_err().line, 1);
    }

    #[test]
    fn dimacs_round_trip() {
        let sat = parse_dimacs("c demo\np cnf 3 3\n1 -2 0\n2 3 0\n-1 0\n").unwrap();
        assert_eq!(sat.clauses().len(), 3);
        assert_eq!(parse_dimacs(&write_dimacs(&sat)).unwrap(), sat);
        assert_eq!(parse_dimacs("p cnf 2 1\n1 2 3 0\n").unwrap_err().line, 2);
        assert_eq!(parse_dimacs("p cnf 2 1\n1 4 0\n").unwrap_err().line, 2);
    }
}

//! Exhaustive enumeration of admissible level trees and the saddle-count
//! census built on it.
//!
//! Generation runs in two phases. First the unmarked *skeletons* are grown
//! saddle by saddle: a new saddle replaces an extremum leaf and brings two
//! fresh leaves. Every skeleton with `s + 1` saddles arises this way from one
//! with `s` saddles (remove a saddle whose other two neighbours are leaves),
//! and the number of pair-attached leaves never decreases along the way.
//! Since each of those leaves needs its own mark, skeletons with more than
//! `k` of them are pruned without losing completeness. Skeletons are
//! deduplicated level by level through their canonical codes.
//!
//! The second phase distributes the `k` marks over each surviving skeleton
//! (one on every pair-attached leaf, the rest anywhere), keeps the
//! admissible placements and deduplicates them. Different skeletons never
//! produce isomorphic marked trees, so deduplication is per skeleton.
//!
//! Both phases fan out over a rayon pool and merge into ordered maps, so the
//! result does not depend on the number of threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{code_mod_flip, code_of, representative_of, CanonicalCode};
use crate::error::{Error, Result};
use crate::level_tree::LevelTree;
use crate::topology::Topology;

/// Skeletons processed between two checks of the resource caps.
const CHUNK: usize = 64;

#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    /// Worker threads; `0` uses the rayon default.
    pub threads: usize,
    /// Stop once this many candidate marked trees have been examined.
    pub max_nodes: Option<u64>,
    pub max_duration: Option<Duration>,
    /// Count classes up to isomorphism combined with `h -> -h`.
    pub mod_flip: bool,
    /// Skeletons processed between two cap checks; `0` means the default.
    pub chunk: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub s: usize,
    pub code: CanonicalCode,
    pub tree: LevelTree,
}

/// Resumable state of an interrupted enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusProgress {
    pub k: usize,
    pub s_max: usize,
    pub mod_flip: bool,
    /// Skeletons fully processed, in enumeration order.
    pub units_done: usize,
    pub nodes_examined: u64,
    pub classes: Vec<ClassRecord>,
}

/// Admissible classes sorted by saddle count, then canonical code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub k: usize,
    pub s_max: usize,
    pub mod_flip: bool,
    pub nodes_examined: u64,
    pub classes: Vec<ClassRecord>,
}

impl Enumeration {
    pub fn count_at(&self, s: usize) -> usize {
        self.classes.iter().filter(|c| c.s == s).count()
    }

    pub fn max_saddles(&self) -> Option<usize> {
        self.classes.iter().map(|c| c.s).max()
    }

    pub fn trees(&self) -> impl Iterator<Item = &LevelTree> {
        self.classes.iter().map(|c| &c.tree)
    }

    pub fn extremal(&self) -> impl Iterator<Item = &ClassRecord> {
        let max = self.max_saddles();
        self.classes.iter().filter(move |c| Some(c.s) == max)
    }
}

/// One representative per isomorphism class of admissible trees with `k`
/// marks and at most `s_max` saddles.
pub fn enumerate_admissible(k: usize, s_max: usize) -> Result<Vec<LevelTree>> {
    let e = enumerate_with(k, s_max, &CensusOptions::default(), None)?;
    Ok(e.classes.into_iter().map(|c| c.tree).collect())
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))
}

/// Children of one skeleton level that can still carry an admissible
/// marking with `k` marks, deduplicated and in code order. The count of
/// pair-attached leaves plus the marks forced by three-chains never drops
/// along a growth step, so pruning on it keeps every needed ancestor.
fn grow_level(level: &[Topology], k: usize) -> Vec<Topology> {
    let grown: BTreeMap<CanonicalCode, Topology> = level
        .par_iter()
        .map(|parent| {
            let mut local = BTreeMap::new();
            for leaf in 0..parent.vertex_count() {
                if parent.is_saddle(leaf) {
                    continue;
                }
                for via_join in [false, true] {
                    let child = parent.grow_at_leaf(leaf, via_join);
                    if child.pair_leaf_count() + child.chain_marks_needed() <= k {
                        local.entry(code_of(&child)).or_insert(child);
                    }
                }
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (code, t) in b {
                a.entry(code).or_insert(t);
            }
            a
        });
    grown.into_values().collect()
}

/// Calls `f` for every placement of `extra` indistinguishable marks on top
/// of the current marks of `topo`.
fn distribute(topo: &mut Topology, from: usize, extra: usize, f: &mut dyn FnMut(&Topology)) {
    if extra == 0 {
        f(topo);
        return;
    }
    for e in from..topo.edge_count() {
        let m = topo.edge(e).marks;
        topo.set_marks(e, m + 1);
        distribute(topo, e, extra - 1, f);
        topo.set_marks(e, m);
    }
}

struct UnitResult {
    nodes: u64,
    classes: BTreeMap<CanonicalCode, ClassRecord>,
}

fn process_unit(k: usize, s: usize, skeleton: &Topology, mod_flip: bool) -> UnitResult {
    let mut base = skeleton.clone();
    let mut required = 0;
    for (_, e) in skeleton.outermost() {
        base.set_marks(e, 1);
        required += 1;
    }
    let mut out = UnitResult {
        nodes: 0,
        classes: BTreeMap::new(),
    };
    if required > k {
        return out;
    }
    distribute(&mut base, 0, k - required, &mut |candidate| {
        out.nodes += 1;
        if candidate.three_chain().is_some() {
            return;
        }
        let (code, rep) = if mod_flip {
            let flipped = candidate.flipped();
            let (a, b) = (code_of(candidate), code_of(&flipped));
            if b < a {
                (b, flipped)
            } else {
                (a, candidate.clone())
            }
        } else {
            (code_of(candidate), candidate.clone())
        };
        debug_assert!(!mod_flip || code == code_mod_flip(candidate));
        out.classes.entry(code.clone()).or_insert_with(|| ClassRecord {
            s,
            code,
            tree: representative_of(&rep),
        });
    });
    out
}

/// Where a capped run stopped.
struct Interrupted {
    units_done: usize,
    nodes: u64,
}

/// Walks the skeletons in (saddle count, code) order starting at unit
/// `start`, handing every class found to `sink` in a thread-independent
/// order. Only one skeleton level is held in memory at a time.
fn drive(
    k: usize,
    s_max: usize,
    options: &CensusOptions,
    start: usize,
    mut nodes: u64,
    sink: &mut dyn FnMut(ClassRecord),
) -> Result<std::result::Result<u64, Interrupted>> {
    let started = Instant::now();
    let pool = pool(options.threads)?;
    let chunk = if options.chunk == 0 { CHUNK } else { options.chunk };
    let mut level = vec![Topology::sphere(0)];
    let mut base = 0;
    for s in 0..=s_max {
        if s > 0 {
            level = pool.install(|| grow_level(&level, k));
        }
        if level.is_empty() {
            break;
        }
        let mut i = start.saturating_sub(base).min(level.len());
        while i < level.len() {
            let end = (i + chunk).min(level.len());
            let results: Vec<UnitResult> = pool.install(|| {
                level[i..end]
                    .par_iter()
                    .map(|skel| process_unit(k, s, skel, options.mod_flip))
                    .collect()
            });
            for r in results {
                nodes += r.nodes;
                r.classes.into_values().for_each(&mut *sink);
            }
            i = end;

            let finished = i == level.len() && s == s_max;
            let over_nodes = options.max_nodes.is_some_and(|cap| nodes > cap);
            let over_time = options.max_duration.is_some_and(|cap| started.elapsed() > cap);
            if !finished && (over_nodes || over_time) {
                return Ok(Err(Interrupted {
                    units_done: base + i,
                    nodes,
                }));
            }
        }
        base += level.len();
    }
    Ok(Ok(nodes))
}

/// Enumeration with resource caps and optional resumption. On a cap the
/// error carries a [`CensusProgress`] that can be passed back as `resume`.
pub fn enumerate_with(
    k: usize,
    s_max: usize,
    options: &CensusOptions,
    resume: Option<CensusProgress>,
) -> Result<Enumeration> {
    let (start, nodes, mut found) = match resume {
        Some(p) => {
            if p.k != k || p.s_max != s_max || p.mod_flip != options.mod_flip {
                return Err(Error::InvalidParams(format!(
                    "progress state is for k={} s_max={} mod_flip={}",
                    p.k, p.s_max, p.mod_flip
                )));
            }
            let found: BTreeMap<(usize, CanonicalCode), ClassRecord> = p
                .classes
                .into_iter()
                .map(|c| ((c.s, c.code.clone()), c))
                .collect();
            (p.units_done, p.nodes_examined, found)
        }
        None => (0, 0, BTreeMap::new()),
    };

    // A class and its flip can come from different skeletons, so classes
    // are merged across units here.
    let outcome = drive(k, s_max, options, start, nodes, &mut |rec| {
        found.entry((rec.s, rec.code.clone())).or_insert(rec);
    })?;
    match outcome {
        Ok(nodes) => Ok(Enumeration {
            k,
            s_max,
            mod_flip: options.mod_flip,
            nodes_examined: nodes,
            classes: found.into_values().collect(),
        }),
        Err(stop) => Err(Error::ResourceCapExceeded(Box::new(CensusProgress {
            k,
            s_max,
            mod_flip: options.mod_flip,
            units_done: stop.units_done,
            nodes_examined: stop.nodes,
            classes: found.into_values().collect(),
        }))),
    }
}

/// Visits every admissible class (up to isomorphism, not flips) with `k`
/// marks and at most `s_max` saddles without keeping them, for censuses too
/// large to hold in memory. Isomorphic marked trees share their skeleton, so
/// each class is produced exactly once. Returns the number of candidates
/// examined.
pub fn for_each_admissible(
    k: usize,
    s_max: usize,
    threads: usize,
    mut f: impl FnMut(&ClassRecord),
) -> Result<u64> {
    let options = CensusOptions {
        threads,
        ..CensusOptions::default()
    };
    match drive(k, s_max, &options, 0, 0, &mut |rec| f(&rec))? {
        Ok(nodes) => Ok(nodes),
        Err(_) => unreachable!("no caps were set"),
    }
}

/// Saddle-count census for `k` marks, probing `probe_margin` levels past the
/// `5k - 8` bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub k: usize,
    pub s_limit: usize,
    pub mod_flip: bool,
    /// Admissible classes per saddle count, zero entries included.
    pub table: BTreeMap<usize, usize>,
    pub max_saddles_observed: usize,
    pub bound_5k_minus_8: i64,
    pub bound_respected: bool,
    pub achieved: bool,
    /// Codes of the classes with the most saddles.
    pub witnesses: Vec<CanonicalCode>,
    /// Distinct non-standard saddle counts seen among the witnesses.
    pub nonstandard_at_max: Vec<usize>,
    pub nodes_examined: u64,
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}   bound 5k-8 = {}", self.k, self.bound_5k_minus_8)?;
        writeln!(f, "{:>4}  {:>10}", "s", "classes")?;
        for (s, n) in &self.table {
            let flag = if (*s as i64) > self.bound_5k_minus_8 { "  (probe)" } else { "" };
            writeln!(f, "{s:>4}  {n:>10}{flag}")?;
        }
        writeln!(f, "max saddles observed: {}", self.max_saddles_observed)?;
        writeln!(f, "bound respected: {}", if self.bound_respected { "yes" } else { "NO" })?;
        writeln!(f, "bound achieved: {}", if self.achieved { "yes" } else { "no" })?;
        let ns: Vec<String> = self.nonstandard_at_max.iter().map(|n| n.to_string()).collect();
        writeln!(f, "non-standard saddles at max: {}", ns.join(", "))?;
        writeln!(f, "extremal classes: {}", self.witnesses.len())?;
        for w in &self.witnesses {
            writeln!(f, "  {w}")?;
        }
        Ok(())
    }
}

pub fn bound_5k_minus_8(k: usize) -> i64 {
    5 * k as i64 - 8
}

fn nonstandard_count(tree: &LevelTree) -> usize {
    let topo = Topology::from_valid_tree(tree);
    topo.saddles().filter(|&v| !topo.is_standard(v)).count()
}

pub fn max_saddle_census(k: usize, probe_margin: usize) -> Result<CensusReport> {
    max_saddle_census_with(k, probe_margin, &CensusOptions::default(), None).map(|(r, _)| r)
}

/// Runs the census and returns the report together with the underlying
/// enumeration (for witness dumps and claim checks).
pub fn max_saddle_census_with(
    k: usize,
    probe_margin: usize,
    options: &CensusOptions,
    resume: Option<CensusProgress>,
) -> Result<(CensusReport, Enumeration)> {
    if k < 2 {
        return Err(Error::InvalidParams(format!(
            "the saddle census needs k >= 2, got {k}"
        )));
    }
    let bound = bound_5k_minus_8(k);
    let s_limit = bound as usize + probe_margin;
    let e = enumerate_with(k, s_limit, options, resume)?;
    Ok((report_from(&e, k, s_limit), e))
}

fn report_from(e: &Enumeration, k: usize, s_limit: usize) -> CensusReport {
    let bound = bound_5k_minus_8(k);
    let table: BTreeMap<usize, usize> = (0..=s_limit).map(|s| (s, e.count_at(s))).collect();
    let max = e.max_saddles().unwrap_or(0);
    let bound_respected =
        (max as i64) <= bound && table.iter().all(|(&s, &n)| (s as i64) <= bound || n == 0);
    let achieved = bound >= 0 && table.get(&(bound as usize)).copied().unwrap_or(0) >= 1;
    let extremal: Vec<&ClassRecord> = e.extremal().collect();
    let nonstandard: BTreeSet<usize> = extremal.iter().map(|c| nonstandard_count(&c.tree)).collect();
    CensusReport {
        k,
        s_limit,
        mod_flip: e.mod_flip,
        table,
        max_saddles_observed: max,
        bound_5k_minus_8: bound,
        bound_respected,
        achieved,
        witnesses: extremal.iter().map(|c| c.code.clone()).collect(),
        nonstandard_at_max: nonstandard.into_iter().collect(),
        nodes_examined: e.nodes_examined,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Claim {
    /// Every mark lies on an outermost edge.
    MarksOnOutermost,
    /// Every outermost edge carries exactly one mark.
    OutermostSinglyMarked,
    /// Exactly `k - 2` saddles are non-standard.
    NonstandardCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub claim: Claim,
    pub code: CanonicalCode,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub k: usize,
    pub max_saddles: usize,
    pub extremal_classes: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl ClaimReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks the structure of the saddle-maximal classes of an enumeration.
pub fn verify_claims(e: &Enumeration) -> ClaimReport {
    let mut counterexamples = Vec::new();
    let mut extremal = 0;
    for class in e.extremal() {
        extremal += 1;
        let topo = Topology::from_valid_tree(&class.tree);
        let outermost: BTreeSet<usize> = topo.outermost().into_iter().map(|(_, x)| x).collect();
        let stray: usize = (0..topo.edge_count())
            .filter(|x| !outermost.contains(x))
            .map(|x| topo.edge(x).marks)
            .sum();
        if stray > 0 {
            counterexamples.push(Counterexample {
                claim: Claim::MarksOnOutermost,
                code: class.code.clone(),
                detail: format!("{stray} marks off the outermost edges"),
            });
        }
        if let Some(&x) = outermost.iter().find(|&&x| topo.edge(x).marks != 1) {
            counterexamples.push(Counterexample {
                claim: Claim::OutermostSinglyMarked,
                code: class.code.clone(),
                detail: format!("outermost edge carries {} marks", topo.edge(x).marks),
            });
        }
        let ns = topo.saddles().filter(|&v| !topo.is_standard(v)).count();
        if e.k >= 2 && ns != e.k - 2 {
            counterexamples.push(Counterexample {
                claim: Claim::NonstandardCount,
                code: class.code.clone(),
                detail: format!("{ns} non-standard saddles, expected {}", e.k - 2),
            });
        }
    }
    ClaimReport {
        k: e.k,
        max_saddles: e.max_saddles().unwrap_or(0),
        extremal_classes: extremal,
        counterexamples,
    }
}

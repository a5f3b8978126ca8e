//! Exhaustive move checks over census trees, shared by the move tests and
//! the acceptance suite.

use std::collections::HashSet;

use follab_core::census::{bound_5k_minus_8, enumerate_admissible};
use follab_core::moves::{
    eliminate_all, eliminate_outermost, finger_move, reduce_five, split_outermost, EliminationStrategy,
    FINGER_PARAMETERS,
};
use follab_core::predicates::{is_admissible, outermost_edges};
use follab_core::{validate, LevelTree};

use super::isomorphic;

/// All admissible classes with `k` marks up to the saddle bound (or three
/// saddles when the bound is negative).
pub fn census_trees(k: usize) -> Vec<LevelTree> {
    let s_max = bound_5k_minus_8(k).max(3) as usize;
    enumerate_admissible(k, s_max).unwrap()
}

#[derive(Debug, Default)]
pub struct MoveSuite {
    pub checks: usize,
    pub failures: Vec<String>,
    pub reductions: usize,
    pub round_trips: usize,
}

impl MoveSuite {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn ids(t: &LevelTree) -> HashSet<String> {
    t.vertices.iter().map(|v| v.id.clone()).collect()
}

/// Saddle/extremum/mark arithmetic and validity of every legal move on
/// every tree, plus the split-then-eliminate round trip.
pub fn move_suite(trees: &[LevelTree]) -> MoveSuite {
    let mut r = MoveSuite::default();
    for (ti, t) in trees.iter().enumerate() {
        let (s, k, m) = (t.saddle_count(), t.mark_count(), t.vertices.len() - t.saddle_count());
        let shape = |u: &LevelTree| (u.saddle_count(), u.mark_count(), u.vertices.len() - u.saddle_count());

        for e in &t.edges {
            for i in 0..e.marks.len() {
                for (o, side) in FINGER_PARAMETERS {
                    match finger_move(t, &e.id, i, o, side) {
                        Ok(out) => {
                            let valid = validate(&out).is_valid();
                            r.expect(valid && shape(&out) == (s + 1, k, m + 1), || {
                                format!("tree {ti}: finger {} #{i} {o}: {:?}", e.id, shape(&out))
                            });
                        }
                        Err(err) => r.expect(false, || format!("tree {ti}: finger {} #{i} {o}: {err}", e.id)),
                    }
                }
            }
        }

        for (saddle, edge) in outermost_edges(t).unwrap() {
            let marks = t.edge(&edge).unwrap().marks.len();
            match eliminate_outermost(t, &saddle, &edge) {
                Ok((out, cost)) => {
                    let valid = validate(&out).is_valid();
                    r.expect(valid && cost == marks && shape(&out) == (s - 1, k, m - 1), || {
                        format!("tree {ti}: eliminate ({saddle}, {edge}) cost {cost}")
                    });
                }
                Err(err) => r.expect(false, || format!("tree {ti}: eliminate ({saddle}, {edge}): {err}")),
            }

            for below in 0..=marks {
                for cap in 1..=marks - below {
                    let keep = marks - below - cap;
                    if keep == 0 {
                        continue;
                    }
                    let out = match split_outermost(t, &edge, below, cap, keep) {
                        Ok(out) => out,
                        Err(err) => {
                            r.expect(false, || format!("tree {ti}: split {edge} ({below},{cap},{keep}): {err}"));
                            continue;
                        }
                    };
                    let valid = validate(&out).is_valid();
                    r.expect(valid && shape(&out) == (s + 1, k, m + 1), || {
                        format!("tree {ti}: split {edge} ({below},{cap},{keep})")
                    });
                    let before = ids(t);
                    let w = out
                        .vertices
                        .iter()
                        .find(|v| v.kind.is_saddle() && !before.contains(&v.id))
                        .map(|v| v.id.clone())
                        .unwrap();
                    let at_w: Vec<String> = outermost_edges(&out)
                        .unwrap()
                        .into_iter()
                        .filter(|(sd, _)| *sd == w)
                        .map(|(_, e)| e)
                        .collect();
                    r.expect(at_w.len() == 2, || format!("tree {ti}: split {edge}: new saddle not outermost twice"));
                    for cap_edge in at_w {
                        let back = eliminate_outermost(&out, &w, &cap_edge).map(|(b, _)| b);
                        let ok = back.as_ref().is_ok_and(|b| isomorphic(b, t));
                        r.expect(ok, || format!("tree {ti}: split {edge} then eliminate {cap_edge} is not a round trip"));
                        if ok {
                            r.round_trips += 1;
                        }
                    }
                }
            }
        }

        for v in t.vertices.iter().filter(|v| v.kind.is_saddle()) {
            if let Ok(out) = reduce_five(t, &v.id) {
                r.reductions += 1;
                let valid = validate(&out).is_valid();
                let admissible = is_admissible(&out).unwrap().admissible;
                r.expect(valid && admissible && shape(&out) == (s - 5, k - 1, m - 5), || {
                    format!("tree {ti}: reduce_five at {}: {:?}", v.id, shape(&out))
                });
            }
        }
    }
    r
}

#[derive(Debug, Default)]
pub struct FingerPreservation {
    /// (tree, mark) pairs examined.
    pub cases: usize,
    pub failures: Vec<String>,
}

/// For every mark off the outermost edges, some legal finger move keeps the
/// tree admissible.
pub fn finger_preservation(trees: &[LevelTree]) -> FingerPreservation {
    let mut r = FingerPreservation::default();
    for (ti, t) in trees.iter().enumerate() {
        let outer: HashSet<String> = outermost_edges(t).unwrap().into_iter().map(|(_, e)| e).collect();
        for e in t.edges.iter().filter(|e| !outer.contains(&e.id)) {
            for i in 0..e.marks.len() {
                r.cases += 1;
                let ok = FINGER_PARAMETERS.iter().any(|&(o, side)| {
                    finger_move(t, &e.id, i, o, side).is_ok_and(|out| is_admissible(&out).unwrap().admissible)
                });
                if !ok {
                    r.failures.push(format!("tree {ti}: no admissible finger move for {} #{i}", e.id));
                }
            }
        }
    }
    r
}

#[derive(Debug, Default)]
pub struct BudgetCheck {
    pub trees: usize,
    pub max_step: usize,
    pub max_total: usize,
    pub violations: Vec<String>,
}

/// Greedy elimination of every tree: per-step cost at most `step_cap`, total
/// at most `total_cap`, ledger length equal to the saddle count.
pub fn elimination_budget(trees: &[LevelTree], step_cap: usize, total_cap: Option<usize>) -> BudgetCheck {
    let mut r = BudgetCheck::default();
    for (ti, t) in trees.iter().enumerate() {
        r.trees += 1;
        let (fin, ledger) = eliminate_all(t, EliminationStrategy::MinCostOutermost).unwrap();
        let step = ledger.max_step_cost().unwrap_or(0);
        r.max_step = r.max_step.max(step);
        r.max_total = r.max_total.max(ledger.total_cost);
        let bad = step > step_cap
            || total_cap.is_some_and(|cap| ledger.total_cost > cap)
            || ledger.steps.len() != t.saddle_count()
            || !ledger.is_consistent()
            || fin.saddle_count() != 0
            || fin.mark_count() != t.mark_count();
        if bad {
            r.violations.push(format!(
                "tree {ti}: s={} steps={} max step {step} total {}",
                t.saddle_count(),
                ledger.steps.len(),
                ledger.total_cost
            ));
        }
    }
    r
}

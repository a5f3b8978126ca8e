//! Bridge-number bookkeeping for `n`-strand tangle products.
//!
//! The product sphere meets the product link in `k = 2n` points. After
//! cancelling every saddle of its foliation (each cancellation costs at most
//! `n` new maxima) the sphere is round, and each factor is recovered by
//! capping its side with a trivial tangle, adding at most `n` maxima per
//! side. This module evaluates the resulting bounds and checks certificates
//! that instantiate the chain on a concrete foliation.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level_tree::LevelTree;
use crate::moves::{eliminate_all, EliminationLedger, EliminationStrategy};
use crate::topology::Topology;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangleProductParams {
    pub n: u64,
    pub beta1: u64,
    pub beta2: u64,
}

impl TangleProductParams {
    pub fn new(n: u64, beta1: u64, beta2: u64) -> Result<Self> {
        if n == 0 || beta1 == 0 || beta2 == 0 {
            return Err(Error::InvalidParams(format!(
                "strand count and bridge numbers must be positive (n={n}, beta1={beta1}, beta2={beta2})"
            )));
        }
        Ok(TangleProductParams { n, beta1, beta2 })
    }
}

/// `beta1 + beta2 - n(10n - 6)`, unclamped.
pub fn product_lower_bound(params: TangleProductParams) -> i64 {
    let n = params.n as i64;
    params.beta1 as i64 + params.beta2 as i64 - n * (10 * n - 6)
}

/// A lower bound below one says nothing about a bridge number.
pub fn is_vacuous(bound: i64) -> bool {
    bound < 1
}

/// Saddles an admissible product-sphere foliation can have: `10n - 8`.
pub fn saddle_budget(n: u64) -> i64 {
    10 * n as i64 - 8
}

/// Maxima that cancelling all those saddles can create: `n(10n - 8)`.
pub fn elimination_budget(n: u64) -> i64 {
    n as i64 * saddle_budget(n)
}

/// Bridge number of a connected sum.
pub fn schubert_sum(beta1: u64, beta2: u64) -> i64 {
    beta1 as i64 + beta2 as i64 - 1
}

/// Unverified hypotheses under which the bound applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attestations {
    pub bridge_sphere_distance_at_least_three: bool,
    pub product_sphere_c_incompressible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountingCertificate {
    pub n: u64,
    pub beta1: u64,
    pub beta2: u64,
    /// Maxima of the witnessed embedding of the product link.
    pub beta_star: u64,
    pub initial_tree: LevelTree,
    pub ledger: EliminationLedger,
    /// `beta1 + beta2 - 2n - total_cost`: what the ledger forces on `beta_star`.
    pub derived_lower_bound: i64,
    #[serde(default)]
    pub attestations: Attestations,
}

impl AccountingCertificate {
    /// Certificate for `tree`, with the ledger produced by greedy elimination.
    pub fn build(n: u64, beta1: u64, beta2: u64, beta_star: u64, tree: &LevelTree) -> Result<Self> {
        let (_, ledger) = eliminate_all(tree, EliminationStrategy::MinCostOutermost)?;
        let derived_lower_bound = derived_bound(n, beta1, beta2, ledger.total_cost);
        Ok(AccountingCertificate {
            n,
            beta1,
            beta2,
            beta_star,
            initial_tree: tree.clone(),
            ledger,
            derived_lower_bound,
            attestations: Attestations::default(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization is infallible")
    }
}

fn derived_bound(n: u64, beta1: u64, beta2: u64, total_cost: usize) -> i64 {
    beta1 as i64 + beta2 as i64 - 2 * n as i64 - total_cost as i64
}

/// Clauses of the certificate check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    /// The initial tree is valid, admissible and carries `2n` marks.
    A,
    /// The ledger replays exactly under greedy elimination.
    B,
    /// Every step costs at most `n`.
    C,
    /// At most `10n - 8` steps.
    D,
    /// The recovered-factor inequality holds.
    E,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::A => "a",
            Clause::B => "b",
            Clause::C => "c",
            Clause::D => "d",
            Clause::E => "e",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum CertificateFailure {
    InvalidTree { detail: String },
    NotAdmissible { detail: String },
    WrongMarkCount { marks: usize, expected: u64 },
    StepCostExceedsN { step: usize, cost: usize, n: u64 },
    TooManySteps { steps: usize, budget: i64 },
    ReplayMismatch { step: usize, detail: String },
    DerivedBoundMismatch { claimed: i64, expected: i64 },
    InequalityViolated { lhs: i64, rhs: i64 },
}

impl CertificateFailure {
    pub fn clause(&self) -> Clause {
        use CertificateFailure::*;
        match self {
            InvalidTree { .. } | NotAdmissible { .. } | WrongMarkCount { .. } => Clause::A,
            ReplayMismatch { .. } => Clause::B,
            StepCostExceedsN { .. } => Clause::C,
            TooManySteps { .. } => Clause::D,
            DerivedBoundMismatch { .. } | InequalityViolated { .. } => Clause::E,
        }
    }
}

impl fmt::Display for CertificateFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CertificateFailure::*;
        match self {
            InvalidTree { detail } => write!(f, "initial tree is invalid: {detail}"),
            NotAdmissible { detail } => write!(f, "initial tree is not admissible: {detail}"),
            WrongMarkCount { marks, expected } => {
                write!(f, "initial tree has {marks} marks, expected {expected}")
            }
            StepCostExceedsN { step, cost, n } => {
                write!(f, "step {step} costs {cost} > n = {n}")
            }
            TooManySteps { steps, budget } => {
                write!(f, "{steps} steps exceed the saddle budget {budget}")
            }
            ReplayMismatch { step, detail } => write!(f, "replay mismatch at step {step}: {detail}"),
            DerivedBoundMismatch { claimed, expected } => {
                write!(f, "derived lower bound {claimed} should be {expected}")
            }
            InequalityViolated { lhs, rhs } => {
                write!(f, "beta1 + beta2 = {lhs} exceeds beta_star + total_cost + 2n = {rhs}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub failed_clause: Option<Clause>,
    pub failure: Option<CertificateFailure>,
    pub steps: usize,
    pub total_cost: usize,
    pub min_step_cost: Option<usize>,
    pub max_step_cost: Option<usize>,
    pub attestations: Attestations,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => writeln!(f, "certificate passed")?,
            Some(fail) => writeln!(f, "certificate rejected at clause ({}): {fail}", fail.clause())?,
        }
        writeln!(f, "steps: {}  total cost: {}", self.steps, self.total_cost)?;
        if let (Some(lo), Some(hi)) = (self.min_step_cost, self.max_step_cost) {
            writeln!(f, "per-step cost: min {lo}, max {hi}")?;
        }
        Ok(())
    }
}

/// Verifies a certificate and reports the first failing clause.
///
/// Clauses are evaluated as (a), then the arithmetic clauses (c) and (d) on
/// the ledger as supplied, then the replay (b), then (e). A tampered step
/// cost that exceeds `n` is therefore reported as (c) rather than as a
/// replay mismatch.
pub fn check_certificate(cert: &AccountingCertificate) -> CheckReport {
    let failure = first_failure(cert);
    CheckReport {
        passed: failure.is_none(),
        failed_clause: failure.as_ref().map(CertificateFailure::clause),
        failure,
        steps: cert.ledger.steps.len(),
        total_cost: cert.ledger.total_cost,
        min_step_cost: cert.ledger.min_step_cost(),
        max_step_cost: cert.ledger.max_step_cost(),
        attestations: cert.attestations,
    }
}

fn first_failure(cert: &AccountingCertificate) -> Option<CertificateFailure> {
    use CertificateFailure::*;
    let topo = match Topology::from_tree(&cert.initial_tree) {
        Ok(t) => t,
        Err(e) => {
            return Some(InvalidTree {
                detail: e.to_string(),
            })
        }
    };
    let marks = topo.mark_count();
    if marks as u64 != 2 * cert.n {
        return Some(WrongMarkCount {
            marks,
            expected: 2 * cert.n,
        });
    }
    if !topo.is_admissible() {
        let report = crate::predicates::is_admissible(&cert.initial_tree).expect("validated");
        return Some(NotAdmissible {
            detail: report.to_string().trim().replace('\n', ";"),
        });
    }

    for (i, step) in cert.ledger.steps.iter().enumerate() {
        if step.cost as u64 > cert.n {
            return Some(StepCostExceedsN {
                step: i,
                cost: step.cost,
                n: cert.n,
            });
        }
    }
    let budget = saddle_budget(cert.n);
    if cert.ledger.steps.len() as i64 > budget {
        return Some(TooManySteps {
            steps: cert.ledger.steps.len(),
            budget,
        });
    }

    let (_, replay) = eliminate_all(&cert.initial_tree, EliminationStrategy::MinCostOutermost)
        .expect("validated");
    for (i, (got, want)) in cert.ledger.steps.iter().zip(&replay.steps).enumerate() {
        if got != want {
            return Some(ReplayMismatch {
                step: i,
                detail: format!(
                    "ledger has ({}, cost {}), replay gives ({}, cost {})",
                    got.saddle, got.cost, want.saddle, want.cost
                ),
            });
        }
    }
    if cert.ledger.steps.len() != replay.steps.len() {
        let step = cert.ledger.steps.len().min(replay.steps.len());
        return Some(ReplayMismatch {
            step,
            detail: format!(
                "ledger has {} steps, replay has {}",
                cert.ledger.steps.len(),
                replay.steps.len()
            ),
        });
    }
    if !cert.ledger.is_consistent() {
        return Some(ReplayMismatch {
            step: cert.ledger.steps.len(),
            detail: format!(
                "total_cost {} is not the sum of the step costs",
                cert.ledger.total_cost
            ),
        });
    }

    let expected = derived_bound(cert.n, cert.beta1, cert.beta2, cert.ledger.total_cost);
    if cert.derived_lower_bound != expected {
        return Some(DerivedBoundMismatch {
            claimed: cert.derived_lower_bound,
            expected,
        });
    }
    let lhs = cert.beta1 as i64 + cert.beta2 as i64;
    let rhs = cert.beta_star as i64 + cert.ledger.total_cost as i64 + 2 * cert.n as i64;
    if lhs > rhs {
        return Some(InequalityViolated { lhs, rhs });
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub crossings: u32,
    pub bridge_number: u32,
}

impl KnotRecord {
    pub fn is_unknot(&self) -> bool {
        self.bridge_number == 1
    }
}

const KNOT_HEADER: [&str; 3] = ["name", "crossings", "bridge_number"];

/// Parses a knot table. The header must be exactly
/// `name,crossings,bridge_number`; a record has bridge number one exactly
/// when it has no crossings.
pub fn parse_knot_table(text: &str) -> Result<Vec<KnotRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    let mut header_seen = false;
    for (i, row) in reader.records().enumerate() {
        let line = i + 1;
        let row = row.map_err(|e| Error::KnotTable {
            line,
            message: e.to_string(),
        })?;
        if !header_seen {
            let got: Vec<&str> = row.iter().collect();
            if got != KNOT_HEADER {
                return Err(Error::KnotTable {
                    line,
                    message: format!("expected header `name,crossings,bridge_number`, got `{}`", got.join(",")),
                });
            }
            header_seen = true;
            continue;
        }
        let bad = |message: String| Error::KnotTable { line, message };
        if row.len() != 3 {
            return Err(bad(format!("expected 3 fields, got {}", row.len())));
        }
        let name = row[0].trim().to_string();
        if name.is_empty() {
            return Err(bad("empty name".into()));
        }
        let crossings: u32 = row[1]
            .trim()
            .parse()
            .map_err(|_| bad(format!("crossings `{}` is not a non-negative integer", &row[1])))?;
        let bridge_number: i64 = row[2]
            .trim()
            .parse()
            .map_err(|_| bad(format!("bridge_number `{}` is not an integer", &row[2])))?;
        if bridge_number < 1 {
            return Err(bad(format!("bridge_number must be at least 1, got {bridge_number}")));
        }
        let record = KnotRecord {
            name,
            crossings,
            bridge_number: bridge_number as u32,
        };
        if record.is_unknot() != (crossings == 0) {
            return Err(bad(format!(
                "{}: bridge number 1 must go with 0 crossings (unknot) and vice versa",
                record.name
            )));
        }
        records.push(record);
    }
    if !header_seen {
        return Err(Error::KnotTable {
            line: 1,
            message: "missing header".into(),
        });
    }
    Ok(records)
}

pub fn load_knot_table(path: impl AsRef<Path>) -> Result<Vec<KnotRecord>> {
    parse_knot_table(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRow {
    pub first: String,
    pub second: String,
    pub n: u64,
    pub lower_bound: i64,
    pub schubert: i64,
    pub vacuous: bool,
}

/// One row per unordered pair of records (self-pairs included), in table
/// order.
pub fn product_report(table: &[KnotRecord], n: u64) -> Result<Vec<ProductRow>> {
    let mut rows = Vec::new();
    for (i, a) in table.iter().enumerate() {
        for b in &table[i..] {
            let params = TangleProductParams::new(n, a.bridge_number as u64, b.bridge_number as u64)?;
            let lower_bound = product_lower_bound(params);
            rows.push(ProductRow {
                first: a.name.clone(),
                second: b.name.clone(),
                n,
                lower_bound,
                schubert: schubert_sum(a.bridge_number as u64, b.bridge_number as u64),
                vacuous: is_vacuous(lower_bound),
            });
        }
    }
    Ok(rows)
}

pub fn product_report_tsv(rows: &[ProductRow]) -> String {
    let mut out = String::from("first\tsecond\tn\tlower_bound\tschubert\tvacuous\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.first, r.second, r.n, r.lower_bound, r.schubert, r.vacuous
        ));
    }
    out
}

//! Consistency metrics over per-case evaluation results.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Whether a result row is for an original question or a perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Before,
    After,
}

/// One graded prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultRow {
    pub case_id: String,
    pub phase: Phase,
    /// Perturbation index; `None` for the original question.
    pub index: Option<u32>,
    pub correct: bool,
}

/// Aggregate metrics, all percentages in `[0, 100]`.
///
/// Normalized metrics restrict to the cases answered correctly before
/// perturbation; their "before" column is 100 by construction and is not
/// stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSummary {
    pub accuracy_before: f64,
    pub accuracy_after: f64,
    pub normalized_after: f64,
    /// Share of correct-before cases whose perturbations are all correct.
    pub pct_all_correct: f64,
    /// The same count over all cases instead of correct-before cases,
    /// reported for transparency about the denominator choice.
    pub pct_all_correct_all_cases: f64,
    pub n_cases: usize,
    pub n_perturbations: usize,
    /// Size of the correct-before subset.
    pub n_normalized_cases: usize,
    /// True when the correct-before subset is empty, in which case the
    /// normalized columns are reported as zero.
    pub normalized_empty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    /// Results must cover both phases.
    EmptyResults { missing: &'static str },
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::EmptyResults { missing } => {
                write!(f, "no results for the {missing} phase")
            }
        }
    }
}

struct CaseAgg {
    case_id: String,
    before_correct: Option<bool>,
    after_total: usize,
    after_correct: usize,
}

/// Pure function of the result rows; row order does not matter. Duplicate
/// `(case_id, phase, index)` rows keep the first occurrence.
pub fn compute_metrics(rows: &[ResultRow]) -> Result<MetricsSummary, MetricsError> {
    let mut cases: Vec<CaseAgg> = Vec::new();
    let mut seen: Vec<(&str, Phase, Option<u32>)> = Vec::new();
    for row in rows {
        let key = (row.case_id.as_str(), row.phase, row.index);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let agg = match cases.iter_mut().find(|c| c.case_id == row.case_id) {
            Some(agg) => agg,
            None => {
                cases.push(CaseAgg {
                    case_id: row.case_id.clone(),
                    before_correct: None,
                    after_total: 0,
                    after_correct: 0,
                });
                cases.last_mut().unwrap()
            }
        };
        match row.phase {
            Phase::Before => {
                if agg.before_correct.is_none() {
                    agg.before_correct = Some(row.correct);
                }
            }
            Phase::After => {
                agg.after_total += 1;
                if row.correct {
                    agg.after_correct += 1;
                }
            }
        }
    }

    // Cases are those with a graded original question.
    let graded: Vec<&CaseAgg> = cases.iter().filter(|c| c.before_correct.is_some()).collect();
    if graded.is_empty() {
        return Err(MetricsError::EmptyResults { missing: "before" });
    }
    let n_perturbations: usize = graded.iter().map(|c| c.after_total).sum();
    if n_perturbations == 0 {
        return Err(MetricsError::EmptyResults { missing: "after" });
    }

    let n_cases = graded.len();
    let before_correct = graded
        .iter()
        .filter(|c| c.before_correct == Some(true))
        .count();
    let after_correct: usize = graded.iter().map(|c| c.after_correct).sum();

    let subset: Vec<&&CaseAgg> = graded
        .iter()
        .filter(|c| c.before_correct == Some(true))
        .collect();
    let subset_total: usize = subset.iter().map(|c| c.after_total).sum();
    let subset_correct: usize = subset.iter().map(|c| c.after_correct).sum();
    let all_correct = |c: &CaseAgg| c.after_correct == c.after_total;
    let subset_all_correct = subset.iter().filter(|c| all_correct(c)).count();
    let graded_all_correct = graded
        .iter()
        .filter(|c| c.before_correct == Some(true) && all_correct(c))
        .count();

    let pct = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            100.0 * num as f64 / den as f64
        }
    };

    Ok(MetricsSummary {
        accuracy_before: pct(before_correct, n_cases),
        accuracy_after: pct(after_correct, n_perturbations),
        normalized_after: pct(subset_correct, subset_total),
        pct_all_correct: pct(subset_all_correct, subset.len()),
        pct_all_correct_all_cases: pct(graded_all_correct, n_cases),
        n_cases,
        n_perturbations,
        n_normalized_cases: subset.len(),
        normalized_empty: subset.is_empty(),
    })
}

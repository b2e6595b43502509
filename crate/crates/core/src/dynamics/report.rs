//! The per-map iteration report and its CSV/JSON forms.

use serde::{Deserialize, Serialize};

use super::{b_sequence_direct, degree_sequence_prefix, mu_from_tracker, verdict_from_mu, Method, Tracker, Verdict};
use crate::error::Result;
use crate::plane_map::{Birational, DEFAULT_DEGREE_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub degree_horizon: usize,
    pub tracked_horizon: usize,
    /// Iterates whose trees are also built directly, as a cross-check.
    pub direct_horizon: usize,
    pub persistence_horizon: usize,
    pub degree_cap: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            degree_horizon: super::DEFAULT_DEGREE_HORIZON,
            tracked_horizon: super::DEFAULT_TRACKED_HORIZON,
            direct_horizon: 2,
            persistence_horizon: super::DEFAULT_PERSISTENCE_HORIZON,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub map: String,
    pub horizon: usize,
    pub degree_sequence: Vec<u64>,
    pub b_sequence: Vec<Option<usize>>,
    pub methods: Vec<Option<Method>>,
    pub direct_b_sequence: Vec<usize>,
    pub dynamical_degree_estimate: f64,
    pub mu_lower_bound: usize,
    pub mu_exact: Option<usize>,
    pub verdict: Verdict,
    /// Disagreements between the direct and tracked counts.
    pub inconsistencies: Vec<String>,
    pub notes: Vec<String>,
}

/// Builds the report; direct tree counts are computed only while the iterate's
/// degree stays within `degree_cap`.
pub fn iteration_report(name: &str, f: &Birational, opts: &ReportOptions) -> Result<IterationReport> {
    let degrees = degree_sequence_prefix(&f.map, opts.degree_horizon, opts.degree_cap)?;
    let mut notes = Vec::new();
    if degrees.len() < opts.degree_horizon {
        notes.push(format!(
            "degree sequence stops at n = {}: the next iterate exceeds the degree cap {}",
            degrees.len(),
            opts.degree_cap
        ));
    }
    let k = opts.tracked_horizon.max(opts.persistence_horizon).max(1);
    let tracker = Tracker::new(f, k)?;
    let mu = mu_from_tracker(&tracker, opts.persistence_horizon);
    let verdict = verdict_from_mu(&mu);
    let mut b = tracker.b.clone();
    b.truncate(opts.tracked_horizon.max(1));
    let mut methods = tracker.methods.clone();
    methods.truncate(b.len());

    let d = f.degree() as u64;
    let direct_k = (1..=opts.direct_horizon)
        .take_while(|&j| d.saturating_pow(j as u32) <= opts.degree_cap)
        .last()
        .unwrap_or(0);
    let direct = b_sequence_direct(&f.map, direct_k, opts.degree_cap)?;
    let mut inconsistencies = Vec::new();
    for (i, &v) in direct.iter().enumerate() {
        if i < b.len() {
            match b[i] {
                Some(t) if t == v => methods[i] = Some(Method::Direct),
                Some(t) => inconsistencies.push(format!("b(f^{}): direct {} but tracked {}", i + 1, v, t)),
                None => {
                    b[i] = Some(v);
                    methods[i] = Some(Method::Direct);
                }
            }
        }
    }
    let last = *degrees.last().unwrap_or(&1) as f64;
    let dyn_deg = last.powf(1.0 / degrees.len().max(1) as f64);
    Ok(IterationReport {
        map: name.to_string(),
        horizon: b.len(),
        degree_sequence: degrees,
        b_sequence: b,
        methods,
        direct_b_sequence: direct,
        dynamical_degree_estimate: dyn_deg,
        mu_lower_bound: mu.lower_bound,
        mu_exact: mu.exact,
        verdict,
        inconsistencies,
        notes: {
            notes.extend(mu.diagnostics.iter().cloned());
            notes
        },
    })
}

impl IterationReport {
    /// Rows `k,degree,b,method`; unknown cells are left empty.
    pub fn to_csv(&self) -> String {
        let rows = self.degree_sequence.len().max(self.b_sequence.len());
        let mut s = String::from("k,degree,b,method\n");
        for i in 0..rows {
            let deg = self.degree_sequence.get(i).map(|d| d.to_string()).unwrap_or_default();
            let b = self.b_sequence.get(i).copied().flatten().map(|b| b.to_string()).unwrap_or_default();
            let m = self
                .methods
                .get(i)
                .copied()
                .flatten()
                .map(|m| m.as_str())
                .unwrap_or("");
            s.push_str(&format!("{},{},{},{}\n", i + 1, deg, b, m));
        }
        s
    }
}

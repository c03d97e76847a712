//! Rigged configurations and the KKR bijection in both directions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crystal::{BoxElement, Path};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KkrError {
    #[error("InvalidRiggedConfiguration: {0}")]
    InvalidRiggedConfiguration(String),
}

/// (lambda, (mu, r)). Rows of mu are kept in creation order; equality and
/// serialization ignore that order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "RcJson", from = "RcJson")]
pub struct RiggedConfiguration {
    pub quantum_space: Vec<u32>,
    pub pairs: Vec<(u32, i64)>,
}

#[derive(Serialize, Deserialize)]
struct RcJson {
    quantum_space: Vec<u32>,
    pairs: Vec<(u32, i64)>,
}

impl From<RiggedConfiguration> for RcJson {
    fn from(rc: RiggedConfiguration) -> Self {
        RcJson {
            quantum_space: rc.quantum_space,
            pairs: canonical_pairs(&rc.pairs),
        }
    }
}

impl From<RcJson> for RiggedConfiguration {
    fn from(j: RcJson) -> Self {
        RiggedConfiguration {
            quantum_space: j.quantum_space,
            pairs: j.pairs,
        }
    }
}

/// Sorted by row length descending, then rigging ascending.
pub fn canonical_pairs(pairs: &[(u32, i64)]) -> Vec<(u32, i64)> {
    let mut v = pairs.to_vec();
    v.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    v
}

impl PartialEq for RiggedConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.quantum_space == other.quantum_space
            && canonical_pairs(&self.pairs) == canonical_pairs(&other.pairs)
    }
}

impl Eq for RiggedConfiguration {}

impl fmt::Display for RiggedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lam: Vec<String> = self.quantum_space.iter().map(|x| x.to_string()).collect();
        let pairs: Vec<String> = canonical_pairs(&self.pairs)
            .iter()
            .map(|(m, r)| format!("({m},{r})"))
            .collect();
        write!(f, "lambda=({}) pairs={{{}}}", lam.join(","), pairs.join(","))
    }
}

fn vacancy(quantum: &[u32], rows: &[u32], j: u32) -> i64 {
    let q0: i64 = quantum.iter().map(|&l| l.min(j) as i64).sum();
    let q1: i64 = rows.iter().map(|&m| m.min(j) as i64).sum();
    q0 - 2 * q1
}

impl RiggedConfiguration {
    pub fn new(quantum_space: Vec<u32>, pairs: Vec<(u32, i64)>) -> Self {
        RiggedConfiguration { quantum_space, pairs }
    }

    pub fn empty() -> Self {
        RiggedConfiguration::new(Vec::new(), Vec::new())
    }

    pub fn mu(&self) -> Vec<u32> {
        self.pairs.iter().map(|&(m, _)| m).collect()
    }

    /// p_j = sum_k min(j, lambda_k) - 2 sum_k min(j, mu_k)
    pub fn vacancy_number(&self, j: u32) -> i64 {
        vacancy(&self.quantum_space, &self.mu(), j)
    }

    /// Restricted mode requires 0 <= r <= p and p >= 0; otherwise -mu <= r <= p.
    pub fn validate(&self, strict: bool) -> Result<(), KkrError> {
        let bad = |msg: String| Err(KkrError::InvalidRiggedConfiguration(msg));
        if self.quantum_space.contains(&0) {
            return bad("quantum space rows must be positive".into());
        }
        for &(m, r) in &self.pairs {
            if m == 0 {
                return bad("rows of mu must be positive".into());
            }
            let p = self.vacancy_number(m);
            if r > p {
                return bad(format!("rigging {r} exceeds vacancy number {p} of a row of length {m}"));
            }
            if strict {
                if p < 0 {
                    return bad(format!("vacancy number {p} of a row of length {m} is negative"));
                }
                if r < 0 {
                    return bad(format!("rigging {r} of a row of length {m} is negative"));
                }
            } else if r < -(m as i64) {
                return bad(format!("rigging {r} is below -{m}"));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, strict: bool) -> bool {
        self.validate(strict).is_ok()
    }
}

/// phi with the fixed tie-break: earliest created among the longest singular rows.
pub fn phi(b: &Path) -> RiggedConfiguration {
    phi_with(b, |_| 0)
}

/// phi where `choose(n)` picks one of `n` tied candidate rows (in creation order).
pub fn phi_with(b: &Path, mut choose: impl FnMut(usize) -> usize) -> RiggedConfiguration {
    let mut quantum: Vec<u32> = Vec::with_capacity(b.len());
    let mut rows: Vec<u32> = Vec::new();
    let mut rig: Vec<i64> = Vec::new();

    for site in &b.sites {
        quantum.push(0);
        let q = quantum.len() - 1;
        for letter_two in std::iter::repeat(true)
            .take(site.x2 as usize)
            .chain(std::iter::repeat(false).take(site.x1 as usize))
        {
            let i = quantum[q];
            if !letter_two {
                quantum[q] += 1;
                continue;
            }
            // longest singular rows among those reaching column i
            let mut best: Vec<usize> = Vec::new();
            let mut best_len = 0;
            for (k, &len) in rows.iter().enumerate() {
                if len < i || rig[k] != vacancy(&quantum, &rows, len) {
                    continue;
                }
                if best.is_empty() || len > best_len {
                    best.clear();
                    best_len = len;
                    best.push(k);
                } else if len == best_len {
                    best.push(k);
                }
            }
            quantum[q] += 1;
            if best.is_empty() {
                rows.push(1);
                rig.push(0);
                let k = rows.len() - 1;
                rig[k] = vacancy(&quantum, &rows, 1);
            } else {
                let pick = if best.len() == 1 { 0 } else { choose(best.len()) };
                let k = best[pick];
                rows[k] += 1;
                rig[k] = vacancy(&quantum, &rows, rows[k]);
            }
        }
    }
    RiggedConfiguration::new(quantum, rows.into_iter().zip(rig).collect())
}

/// Box-removing inverse of `phi`.
pub fn phi_inverse(rc: &RiggedConfiguration, strict: bool) -> Result<Path, KkrError> {
    phi_inverse_with(rc, strict, |_| 0)
}

pub fn phi_inverse_with(
    rc: &RiggedConfiguration,
    strict: bool,
    mut choose: impl FnMut(usize) -> usize,
) -> Result<Path, KkrError> {
    rc.validate(strict)?;
    let mut quantum = rc.quantum_space.clone();
    let mut rows: Vec<u32> = rc.mu();
    let mut rig: Vec<i64> = rc.pairs.iter().map(|&(_, r)| r).collect();
    let mut sites = vec![BoxElement::new(0, 0); quantum.len()];

    for q in (0..quantum.len()).rev() {
        while quantum[q] > 0 {
            let c = quantum[q];
            let mut best: Vec<usize> = Vec::new();
            let mut best_len = 0;
            for (k, &len) in rows.iter().enumerate() {
                if len < c || rig[k] != vacancy(&quantum, &rows, len) {
                    continue;
                }
                if best.is_empty() || len < best_len {
                    best.clear();
                    best_len = len;
                    best.push(k);
                } else if len == best_len {
                    best.push(k);
                }
            }
            quantum[q] -= 1;
            match best.len() {
                0 => sites[q].x1 += 1,
                n => {
                    let pick = if n == 1 { 0 } else { choose(n) };
                    let k = best[pick];
                    rows[k] -= 1;
                    if rows[k] == 0 {
                        rows.remove(k);
                        rig.remove(k);
                    } else {
                        rig[k] = vacancy(&quantum, &rows, rows[k]);
                    }
                    sites[q].x2 += 1;
                }
            }
        }
        quantum.pop();
    }
    if !rows.is_empty() {
        return Err(KkrError::InvalidRiggedConfiguration(format!(
            "{} row(s) of mu left after removing the quantum space",
            rows.len()
        )));
    }
    Ok(Path::new(sites))
}

/// The configuration of 1^Lambda (x) b given that of b.
pub fn prepend_ones_shift(rc: &RiggedConfiguration, lambda: u32) -> RiggedConfiguration {
    let mut q = vec![1; lambda as usize];
    q.extend_from_slice(&rc.quantum_space);
    let pairs = rc
        .pairs
        .iter()
        .map(|&(m, r)| (m, r + lambda as i64))
        .collect();
    RiggedConfiguration::new(q, pairs)
}

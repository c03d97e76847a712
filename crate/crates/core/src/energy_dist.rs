//! Local energy distribution of a path and the soliton-grouping form of phi.

use thiserror::Error;

use crate::crystal::{combinatorial_r, BoxElement, Path};
use crate::kkr::RiggedConfiguration;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnergyDistError {
    #[error("MalformedTable: {0}")]
    MalformedTable(String),
}

/// E_{l,j} = H(u_l^{(j-1)} (x) b_j) for l = 1..=l_max, j = 1..=L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyTable {
    /// values[l-1][j-1] = E_{l,j}
    pub values: Vec<Vec<u32>>,
    /// carriers[l-1][j] = u_l^{(j)}, with carriers[l-1][0] = u_l
    pub carriers: Vec<Vec<BoxElement>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// start at the rightmost 1 of the first row and go down
    TopDown,
    /// start at a lowest 1 and go up
    BottomUp,
}

/// One row of local energies driven by the carrier `start` through `b`.
pub(crate) fn energy_row(start: BoxElement, b: &Path) -> (Vec<u32>, Vec<BoxElement>, Vec<BoxElement>) {
    let mut carrier = start;
    let mut es = Vec::with_capacity(b.len());
    let mut cs = Vec::with_capacity(b.len() + 1);
    let mut out = Vec::with_capacity(b.len());
    cs.push(carrier);
    for &site in &b.sites {
        let (site_out, next, h) = combinatorial_r(carrier, site);
        es.push(h);
        out.push(site_out);
        carrier = next;
        cs.push(carrier);
    }
    (es, cs, out)
}

impl EnergyTable {
    pub fn l_max(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn width(&self) -> usize {
        self.values.first().map_or(0, |r| r.len())
    }

    /// E_{l,j}, 1-based; E_{0,j} = 0 and rows beyond l_max repeat the last row.
    pub fn energy(&self, l: u32, j: usize) -> u32 {
        if l == 0 || self.values.is_empty() {
            return 0;
        }
        let row = (l as usize).min(self.values.len()) - 1;
        self.values[row][j - 1]
    }

    /// E_{l,j} - E_{l-1,j}
    pub fn diff(&self, l: u32, j: usize) -> u32 {
        self.energy(l, j) - self.energy(l - 1, j)
    }

    /// The full 0/1 difference table, diff_table()[l-1][j-1].
    pub fn diff_table(&self) -> Vec<Vec<u8>> {
        (1..=self.l_max())
            .map(|l| (1..=self.width()).map(|j| self.diff(l, j) as u8).collect())
            .collect()
    }

    /// Row sums E_l.
    pub fn row_sum(&self, l: u32) -> u64 {
        (1..=self.width()).map(|j| self.energy(l, j) as u64).sum()
    }
}

/// Builds the table for l = 1..=l_max. Without `l_max` rows are added until two
/// consecutive difference rows vanish.
pub fn local_energy_table(b: &Path, l_max: Option<u32>) -> EnergyTable {
    let mut values = Vec::new();
    let mut carriers = Vec::new();
    let cap = b.count_twos() + 2;
    let mut zero_rows = 0;
    let mut l = 1;
    loop {
        match l_max {
            Some(m) if l > m => break,
            None if zero_rows >= 2 || l > cap => break,
            _ => {}
        }
        let (es, cs, _) = energy_row(BoxElement::highest(l), b);
        let zero = match values.last() {
            Some(prev) => es == *prev,
            None => es.iter().all(|&e| e == 0),
        };
        zero_rows = if zero { zero_rows + 1 } else { 0 };
        values.push(es);
        carriers.push(cs);
        l += 1;
    }
    EnergyTable { values, carriers }
}

/// Splits the 1s of the difference table into solitons. Returns (mu_k, j_k),
/// with j_k a 1-based column.
pub fn group_solitons(t: &EnergyTable, rule: Rule) -> Result<Vec<(u32, usize)>, EnergyDistError> {
    let mut d = t.diff_table();
    group_dots(&mut d, rule)
}

pub(crate) fn group_dots(d: &mut [Vec<u8>], rule: Rule) -> Result<Vec<(u32, usize)>, EnergyDistError> {
    let rows = d.len();
    let width = d.first().map_or(0, |r| r.len());
    let total: usize = d.iter().map(|r| r.iter().filter(|&&x| x == 1).count()).sum();
    let n = d.first().map_or(0, |r| r.iter().filter(|&&x| x == 1).count());
    let mut groups = Vec::with_capacity(n);
    let mut consumed = 0;
    match rule {
        Rule::TopDown => {
            while let Some(start) = (0..width).rev().find(|&j| d[0][j] == 1) {
                let mut col = start;
                d[0][col] = 0;
                let mut len = 1;
                while len < rows {
                    match (col..width).find(|&j| d[len][j] == 1) {
                        Some(j) => {
                            d[len][j] = 0;
                            col = j;
                            len += 1;
                        }
                        None => break,
                    }
                }
                consumed += len;
                groups.push((len as u32, col + 1));
            }
        }
        Rule::BottomUp => loop {
            let lowest = (0..rows).rev().find(|&l| d[l].contains(&1));
            let Some(mut l) = lowest else { break };
            let start = d[l].iter().position(|&x| x == 1).unwrap();
            let mut col = start;
            d[l][col] = 0;
            let len = l + 1;
            while l > 0 {
                l -= 1;
                match (0..=col).rev().find(|&j| d[l][j] == 1) {
                    Some(j) => {
                        d[l][j] = 0;
                        col = j;
                    }
                    None => {
                        return Err(EnergyDistError::MalformedTable(format!(
                            "no 1 weakly left of column {} in row {}",
                            col + 1,
                            l + 1
                        )))
                    }
                }
            }
            consumed += len;
            groups.push((len as u32, start + 1));
        },
    }
    if consumed != total || groups.len() != n {
        return Err(EnergyDistError::MalformedTable(format!(
            "{} groups cover {} of {} ones",
            groups.len(),
            consumed,
            total
        )));
    }
    Ok(groups)
}

/// r = sum_{i<j} min(mu, lambda_i) + E_{mu,j} - 2 sum_{i<=j} E_{mu,i}
pub fn rigging_of_group(b: &Path, t: &EnergyTable, mu: u32, j: usize) -> i64 {
    let head: i64 = b.sites[..j - 1]
        .iter()
        .map(|s| s.capacity().min(mu) as i64)
        .sum();
    let run: i64 = (1..=j).map(|i| t.energy(mu, i) as i64).sum();
    head + t.energy(mu, j) as i64 - 2 * run
}

pub fn phi_via_energy(b: &Path) -> RiggedConfiguration {
    phi_via_energy_with(b, Rule::TopDown).expect("grouping is well defined")
}

pub fn phi_via_energy_with(b: &Path, rule: Rule) -> Result<RiggedConfiguration, EnergyDistError> {
    let t = local_energy_table(b, None);
    let groups = group_solitons(&t, rule)?;
    let pairs = groups
        .into_iter()
        .map(|(mu, j)| (mu, rigging_of_group(b, &t, mu, j)))
        .collect();
    Ok(RiggedConfiguration::new(b.capacities(), pairs))
}

/// Dot diagram: one line per row l, '*' for a 1 and '.' for a 0.
pub fn render_ascii(t: &EnergyTable) -> String {
    let mut s = String::new();
    for (l, row) in t.diff_table().iter().enumerate() {
        s.push_str(&format!("{:>3} ", l + 1));
        for &x in row {
            s.push(if x == 1 { '*' } else { '.' });
        }
        s.push('\n');
    }
    s
}

//! Periodic box-ball system on B_{s_1} (x) ... (x) B_{s_L}: time evolutions T_l,
//! energies E_l and the iso-level bookkeeping.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::crystal::{BoxElement, Node, Path};
use crate::energy_dist::energy_row;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbbsError {
    #[error("NotEvolvable: {0}")]
    NotEvolvable(String),
    #[error("InvalidLevel: carrier capacity must be at least 1")]
    InvalidLevel,
    #[error("EmptyPath: a periodic path needs at least one site")]
    EmptyPath,
}

/// Drives `carrier` once around `b`. Returns (image, final carrier, energy).
pub fn pump(carrier: BoxElement, b: &Path) -> (Path, BoxElement, u64) {
    let (es, cs, out) = energy_row(carrier, b);
    let e = es.iter().map(|&x| x as u64).sum();
    (Path::new(out), *cs.last().unwrap(), e)
}

/// Some site is 1...1 or 2...2.
pub fn is_evolvable(b: &Path) -> bool {
    b.sites.iter().any(|s| s.is_frozen())
}

fn check(b: &Path, l: u32) -> Result<(), PbbsError> {
    if b.is_empty() {
        return Err(PbbsError::EmptyPath);
    }
    if l == 0 {
        return Err(PbbsError::InvalidLevel);
    }
    Ok(())
}

/// All carriers v in B_l with v (x) b ~ b' (x) v.
pub fn fixed_carriers(b: &Path, l: u32) -> Vec<BoxElement> {
    BoxElement::all(l).filter(|&v| pump(v, b).1 == v).collect()
}

/// T_l by exhaustive search over B_l: a fixed carrier must exist and every fixed
/// carrier must give the same image.
pub fn time_evolve_definitional(b: &Path, l: u32) -> Result<(Path, u64), PbbsError> {
    check(b, l)?;
    let mut found: Option<(Path, u64)> = None;
    for v in BoxElement::all(l) {
        let (out, v2, e) = pump(v, b);
        if v2 != v {
            continue;
        }
        match &found {
            None => found = Some((out, e)),
            Some((p, _)) if *p != out => {
                return Err(PbbsError::NotEvolvable(format!(
                    "{b} has fixed carriers of capacity {l} with different images"
                )))
            }
            Some(_) => {}
        }
    }
    found.ok_or_else(|| PbbsError::NotEvolvable(format!("{b} has no fixed carrier of capacity {l}")))
}

/// The carrier v_l used by `time_evolve`.
pub fn fixed_carrier(b: &Path, l: u32) -> Result<BoxElement, PbbsError> {
    check(b, l)?;
    let smax = b.sites.iter().map(|s| s.capacity()).max().unwrap();
    if l >= smax {
        let seed = if b.weight() > 0 {
            BoxElement::highest(l)
        } else {
            BoxElement::lowest(l)
        };
        let v = pump(seed, b).1;
        if pump(v, b).1 == v {
            return Ok(v);
        }
    }
    let fixed = fixed_carriers(b, l);
    match fixed.as_slice() {
        [] => Err(PbbsError::NotEvolvable(format!("{b} has no fixed carrier of capacity {l}"))),
        [v] => Ok(*v),
        [v, rest @ ..] => {
            let img = pump(*v, b).0;
            if rest.iter().all(|w| pump(*w, b).0 == img) {
                Ok(*v)
            } else {
                Err(PbbsError::NotEvolvable(format!(
                    "{b} has fixed carriers of capacity {l} with different images"
                )))
            }
        }
    }
}

/// (T_l(b), E_l(b)).
pub fn time_evolve(b: &Path, l: u32) -> Result<(Path, u64), PbbsError> {
    let v = fixed_carrier(b, l)?;
    let (out, _, e) = pump(v, b);
    Ok((out, e))
}

/// T_l^{-1} = rho T_l rho, checked by applying T_l again.
pub fn time_evolve_inverse(b: &Path, l: u32) -> Result<Path, PbbsError> {
    let (r, _) = time_evolve(&b.reversed(), l)?;
    let c = r.reversed();
    match time_evolve(&c, l) {
        Ok((back, _)) if back == *b => Ok(c),
        _ => Err(PbbsError::NotEvolvable(format!("{b} has no preimage under T_{l}"))),
    }
}

/// T_l^steps; negative steps use the inverse.
pub fn evolve_steps(b: &Path, l: u32, steps: i64) -> Result<Path, PbbsError> {
    let mut cur = b.clone();
    for _ in 0..steps.unsigned_abs() {
        cur = if steps > 0 {
            time_evolve(&cur, l)?.0
        } else {
            time_evolve_inverse(&cur, l)?
        };
    }
    Ok(cur)
}

/// E_infinity = (sum s_i - |wt|) / 2.
pub fn e_infinity(b: &Path) -> u64 {
    (b.total_size() as u64 - b.weight().unsigned_abs()) / 2
}

/// (T_infinity(b), E_infinity(b))
pub fn t_infinity(b: &Path) -> (Path, u64) {
    let w = if b.weight() >= 0 {
        b.weyl_s(Node::Zero)
    } else {
        b.weyl_s(Node::One)
    };
    (w.omega(), e_infinity(b))
}

/// Energies E_1..E_K with E_K = E_infinity, and everything derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergySpectrum {
    pub capacities: Vec<u32>,
    /// energies[l-1] = E_l, ending at the first l with E_l = E_infinity
    pub energies: Vec<u64>,
}

impl EnergySpectrum {
    /// Rebuilds E_l = sum_k min(l, k) m_k.
    pub fn from_multiplicities(capacities: Vec<u32>, m: &BTreeMap<u32, u32>) -> Self {
        let top = m.keys().copied().max().unwrap_or(0).max(1);
        let energies = (1..=top)
            .map(|l| m.iter().map(|(&k, &c)| l.min(k) as u64 * c as u64).sum())
            .collect();
        EnergySpectrum { capacities, energies }
    }

    pub fn energy(&self, l: u32) -> u64 {
        if l == 0 {
            return 0;
        }
        let k = (l as usize).min(self.energies.len());
        self.energies[k - 1]
    }

    pub fn e_infinity(&self) -> u64 {
        *self.energies.last().unwrap_or(&0)
    }

    /// m_k = -E_{k-1} + 2E_k - E_{k+1}
    pub fn multiplicity(&self, k: u32) -> i64 {
        if k == 0 {
            return 0;
        }
        -(self.energy(k - 1) as i64) + 2 * self.energy(k) as i64 - self.energy(k + 1) as i64
    }

    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        (1..=self.energies.len() as u32)
            .filter_map(|k| {
                let m = self.multiplicity(k);
                (m > 0).then_some((k, m as u32))
            })
            .collect()
    }

    /// Row lengths in weakly decreasing order.
    pub fn mu(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .multiplicities()
            .iter()
            .flat_map(|(&k, &c)| std::iter::repeat(k).take(c as usize))
            .collect();
        v.reverse();
        v
    }

    /// p_j = sum_i min(s_i, j) - 2 E_j
    pub fn vacancy(&self, j: u32) -> i64 {
        let q: i64 = self.capacities.iter().map(|&s| s.min(j) as i64).sum();
        q - 2 * self.energy(j) as i64
    }

    pub fn p_infinity(&self) -> i64 {
        self.capacities.iter().map(|&s| s as i64).sum::<i64>() - 2 * self.e_infinity() as i64
    }

    /// All p_j >= 1.
    pub fn is_positive(&self) -> bool {
        let smax = self.capacities.iter().copied().max().unwrap_or(0);
        let top = smax.max(self.energies.len() as u32) + 1;
        (1..=top).all(|j| self.vacancy(j) >= 1)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.capacities.windows(2).all(|w| w[0] == w[1])
    }
}

/// E_l for l = 1, 2, ... until E_infinity is reached.
pub fn energy_spectrum(b: &Path) -> Result<EnergySpectrum, PbbsError> {
    if b.is_empty() {
        return Err(PbbsError::EmptyPath);
    }
    let target = e_infinity(b);
    let smax = b.sites.iter().map(|s| s.capacity()).max().unwrap();
    let mut energies = Vec::new();
    let mut l = 1;
    loop {
        let (_, e) = time_evolve(b, l)?;
        energies.push(e);
        if e == target || l > smax + b.total_size() {
            break;
        }
        l += 1;
    }
    Ok(EnergySpectrum {
        capacities: b.capacities(),
        energies,
    })
}

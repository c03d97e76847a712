//! Action-angle variables of the periodic box-ball system: the direct map, its
//! inverse, state counting and generic periods.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crystal::Path;
use crate::energy_dist::energy_row;
use crate::kkr::{phi, phi_inverse, KkrError, RiggedConfiguration};
use crate::linalg::{self, RatMatrix};
use crate::pbbs::{
    energy_spectrum, evolve_steps, fixed_carrier, is_evolvable, time_evolve, time_evolve_inverse,
    EnergySpectrum, PbbsError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScatteringError {
    #[error("NotEvolvable: {0}")]
    NotEvolvable(String),
    #[error("NegativeWeight: apply omega before scattering")]
    NegativeWeight,
    #[error("NoCleanShift: every cyclic shift leaves a soliton across the boundary")]
    NoCleanShift,
    #[error("DepthExceeded: no highest path within {0} time steps")]
    DepthExceeded(usize),
    #[error("PositivityViolated: {0}")]
    PositivityViolated(String),
    #[error("InvalidAngle: {0}")]
    InvalidAngle(String),
    #[error("InvalidRiggedConfiguration: {0}")]
    InvalidRiggedConfiguration(String),
    #[error("Inconsistent: {0}")]
    Inconsistent(String),
}

impl From<PbbsError> for ScatteringError {
    fn from(e: PbbsError) -> Self {
        match e {
            PbbsError::NotEvolvable(s) => ScatteringError::NotEvolvable(s),
            other => ScatteringError::NotEvolvable(other.to_string()),
        }
    }
}

impl From<KkrError> for ScatteringError {
    fn from(e: KkrError) -> Self {
        match e {
            KkrError::InvalidRiggedConfiguration(s) => ScatteringError::InvalidRiggedConfiguration(s),
        }
    }
}

/// Either a common capacity s or the list s_1..s_L.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Capacities {
    Uniform(u32),
    Sites(Vec<u32>),
}

impl Capacities {
    pub fn of(b: &Path) -> Self {
        let c = b.capacities();
        match c.first() {
            Some(&s) if c.iter().all(|&x| x == s) => Capacities::Uniform(s),
            _ => Capacities::Sites(c),
        }
    }

    pub fn sites(&self, length: usize) -> Vec<u32> {
        match self {
            Capacities::Uniform(s) => vec![*s; length],
            Capacities::Sites(v) => v.clone(),
        }
    }

    pub fn is_uniform(&self) -> bool {
        match self {
            Capacities::Uniform(_) => true,
            Capacities::Sites(v) => v.windows(2).all(|w| w[0] == w[1]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    HighestReduction,
    SolitonGrouping,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionAngle {
    #[serde(rename = "L")]
    pub length: usize,
    pub capacities: Capacities,
    pub m: BTreeMap<u32, u32>,
    #[serde(rename = "I")]
    pub angles: Vec<i64>,
    #[serde(default)]
    pub omega_flipped: bool,
}

/// The blocks j_1 < ... < j_g with their multiplicities and vacancy numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    pub rows: Vec<u32>,
    pub mult: Vec<u32>,
    pub vacancy: Vec<i64>,
}

impl Blocks {
    pub fn new(m: &BTreeMap<u32, u32>, length: usize, capacities: &Capacities) -> Self {
        let sp = EnergySpectrum::from_multiplicities(capacities.sites(length), m);
        let mut rows = Vec::new();
        let mut mult = Vec::new();
        let mut vacancy = Vec::new();
        for (&j, &c) in m {
            if c > 0 {
                rows.push(j);
                mult.push(c);
                vacancy.push(sp.vacancy(j));
            }
        }
        Blocks { rows, mult, vacancy }
    }

    pub fn dim(&self) -> usize {
        self.mult.iter().map(|&c| c as usize).sum()
    }

    /// Row length of every component, block by block.
    pub fn component_rows(&self) -> Vec<u32> {
        self.rows
            .iter()
            .zip(&self.mult)
            .flat_map(|(&j, &c)| std::iter::repeat(j).take(c as usize))
            .collect()
    }

    /// Start offsets of the blocks within a component vector.
    fn offsets(&self) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.rows.len() + 1);
        let mut acc = 0;
        o.push(0);
        for &c in &self.mult {
            acc += c as usize;
            o.push(acc);
        }
        o
    }
}

fn positivity(m: &BTreeMap<u32, u32>, length: usize, capacities: &Capacities) -> Result<(), ScatteringError> {
    let sp = EnergySpectrum::from_multiplicities(capacities.sites(length), m);
    if sp.is_positive() {
        Ok(())
    } else {
        Err(ScatteringError::PositivityViolated(
            "some vacancy number p_j is below 1".into(),
        ))
    }
}

/// A_{ja,kb} = delta_{jk} delta_{ab} (p_j + m_j) + 2 min(j,k) - delta_{jk}
pub fn block_matrix(m: &BTreeMap<u32, u32>, length: usize, capacities: &Capacities) -> Vec<Vec<i64>> {
    let bl = Blocks::new(m, length, capacities);
    let mut comp = Vec::new();
    for (b, &c) in bl.mult.iter().enumerate() {
        for a in 0..c {
            comp.push((b, a));
        }
    }
    comp.iter()
        .map(|&(b1, a1)| {
            comp.iter()
                .map(|&(b2, a2)| {
                    let (j, k) = (bl.rows[b1] as i64, bl.rows[b2] as i64);
                    let mut v = 2 * j.min(k);
                    if b1 == b2 {
                        v -= 1;
                        if a1 == a2 {
                            v += bl.vacancy[b1] + bl.mult[b1] as i64;
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// h_l = (min(j, l))
pub fn velocity(m: &BTreeMap<u32, u32>, l: u32) -> Vec<i64> {
    m.iter()
        .flat_map(|(&j, &c)| std::iter::repeat(j.min(l) as i64).take(c as usize))
        .collect()
}

/// h_infinity = (j)
pub fn velocity_infinity(m: &BTreeMap<u32, u32>) -> Vec<i64> {
    m.iter()
        .flat_map(|(&j, &c)| std::iter::repeat(j as i64).take(c as usize))
        .collect()
}

impl ActionAngle {
    pub fn site_capacities(&self) -> Vec<u32> {
        self.capacities.sites(self.length)
    }

    pub fn blocks(&self) -> Blocks {
        Blocks::new(&self.m, self.length, &self.capacities)
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        block_matrix(&self.m, self.length, &self.capacities)
    }

    pub fn spectrum(&self) -> EnergySpectrum {
        EnergySpectrum::from_multiplicities(self.site_capacities(), &self.m)
    }
}

/// I <- I + steps * h_l
pub fn angle_evolve(aa: &ActionAngle, l: u32, steps: i64) -> ActionAngle {
    let h = velocity(&aa.m, l);
    let mut out = aa.clone();
    for (x, v) in out.angles.iter_mut().zip(h) {
        *x += steps * v;
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Same class in J(m): some within-block permutation of a differs from b by A Z^n.
pub fn angle_equal(a: &ActionAngle, b: &ActionAngle) -> bool {
    if a.length != b.length
        || a.site_capacities() != b.site_capacities()
        || a.m != b.m
        || a.omega_flipped != b.omega_flipped
        || a.angles.len() != b.angles.len()
    {
        return false;
    }
    let mat = a.matrix();
    if mat.is_empty() {
        return true;
    }
    let Some(inv) = linalg::inverse(&linalg::to_rat(&mat)) else {
        return false;
    };
    let bl = a.blocks();
    let off = bl.offsets();
    let perms: Vec<Vec<Vec<usize>>> = bl.mult.iter().map(|&c| permutations(c as usize)).collect();
    let mut choice = vec![0usize; perms.len()];
    loop {
        let mut diff = vec![0i64; a.angles.len()];
        for (blk, ps) in perms.iter().enumerate() {
            let p = &ps[choice[blk]];
            for (alpha, &src) in p.iter().enumerate() {
                let i = off[blk] + alpha;
                diff[i] = a.angles[off[blk] + src] - b.angles[i];
            }
        }
        if linalg::in_lattice(&inv, &diff) {
            return true;
        }
        // odometer over the blocks
        let mut k = 0;
        loop {
            if k == choice.len() {
                return false;
            }
            choice[k] += 1;
            if choice[k] < perms[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn sorted_riggings(pairs: &[(u32, i64)], bl: &Blocks) -> Result<Vec<i64>, ScatteringError> {
    let mut out = Vec::with_capacity(bl.dim());
    for (&j, &c) in bl.rows.iter().zip(&bl.mult) {
        let mut r: Vec<i64> = pairs.iter().filter(|p| p.0 == j).map(|p| p.1).collect();
        if r.len() != c as usize {
            return Err(ScatteringError::Inconsistent(format!(
                "found {} solitons of length {j}, expected {c}",
                r.len()
            )));
        }
        r.sort_unstable();
        out.extend(r.iter().enumerate().map(|(a, x)| x + a as i64));
    }
    let total: u32 = bl.mult.iter().sum();
    if pairs.len() != total as usize {
        return Err(ScatteringError::Inconsistent(
            "soliton content differs from the energy spectrum".into(),
        ));
    }
    Ok(out)
}

fn generators(b: &Path) -> Vec<u32> {
    let caps = b.capacities();
    let smax = caps.iter().copied().max().unwrap_or(1);
    if caps.iter().all(|&s| s == smax) {
        if smax > 1 {
            vec![smax, smax - 1]
        } else {
            vec![1]
        }
    } else {
        (1..=smax).rev().collect()
    }
}

pub fn default_depth(b: &Path) -> usize {
    let smax = b.capacities().into_iter().max().unwrap_or(1) as usize;
    4 * b.len() * smax
}

/// Breadth-first search for a highest path in the orbit of b. Returns (b_+, c)
/// with b_+ = prod_l T_l^{c_l} (b).
pub fn find_highest(b: &Path, depth: usize) -> Result<(Path, BTreeMap<u32, i64>), ScatteringError> {
    let gens = generators(b);
    let mut seen: HashSet<Path> = HashSet::new();
    let mut queue: VecDeque<(Path, Vec<i64>, usize)> = VecDeque::new();
    seen.insert(b.clone());
    queue.push_back((b.clone(), vec![0; gens.len()], 0));
    while let Some((cur, exps, d)) = queue.pop_front() {
        if cur.is_highest() {
            let c = gens.iter().copied().zip(exps).filter(|&(_, e)| e != 0).collect();
            return Ok((cur, c));
        }
        if d >= depth {
            continue;
        }
        for (g, &l) in gens.iter().enumerate() {
            for sign in [1i64, -1] {
                let next = if sign > 0 {
                    time_evolve(&cur, l).map(|x| x.0)
                } else {
                    time_evolve_inverse(&cur, l)
                };
                let Ok(next) = next else { continue };
                if seen.insert(next.clone()) {
                    let mut e = exps.clone();
                    e[g] += sign;
                    queue.push_back((next, e, d + 1));
                }
            }
        }
    }
    Err(ScatteringError::DepthExceeded(depth))
}

fn prepare(b: &Path) -> Result<EnergySpectrum, ScatteringError> {
    if b.is_empty() || !is_evolvable(b) {
        return Err(ScatteringError::NotEvolvable(format!("{b} has no frozen site")));
    }
    if b.weight() < 0 {
        return Err(ScatteringError::NegativeWeight);
    }
    let sp = energy_spectrum(b)?;
    if !sp.is_positive() {
        return Err(ScatteringError::PositivityViolated(format!(
            "{b} has a vacancy number below 1"
        )));
    }
    Ok(sp)
}

/// Phi(b) for an evolvable path of nonnegative weight.
pub fn direct_scattering(b: &Path, method: Method) -> Result<ActionAngle, ScatteringError> {
    match method {
        Method::HighestReduction => highest_reduction(b, default_depth(b)),
        Method::SolitonGrouping => soliton_grouping(b),
    }
}

pub fn highest_reduction(b: &Path, depth: usize) -> Result<ActionAngle, ScatteringError> {
    let sp = prepare(b)?;
    let m = sp.multiplicities();
    let caps = Capacities::of(b);
    let bl = Blocks::new(&m, b.len(), &caps);
    let (top, c) = find_highest(b, depth)?;
    let rc = phi(&top);
    let mut angles = sorted_riggings(&rc.pairs, &bl)?;
    for (&l, &e) in &c {
        for (x, h) in angles.iter_mut().zip(velocity(&m, l)) {
            *x -= e * h;
        }
    }
    Ok(ActionAngle {
        length: b.len(),
        capacities: caps,
        m,
        angles,
        omega_flipped: false,
    })
}

/// Groups the 1s of a periodic difference table. Each group is (length, lowest
/// column, wraps around the boundary).
fn group_cyclic(d: &mut [Vec<u8>]) -> Result<Vec<(u32, usize, bool)>, ScatteringError> {
    let width = d.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    while let Some(low) = (0..d.len()).rev().find(|&l| d[l].contains(&1)) {
        let start = d[low].iter().position(|&x| x == 1).unwrap();
        d[low][start] = 0;
        let mut col = start;
        let mut wraps = false;
        for l in (0..low).rev() {
            let hit = (0..width)
                .map(|s| (col + width - s) % width)
                .find(|&k| d[l][k] == 1);
            match hit {
                Some(k) => {
                    if k > col {
                        wraps = true;
                    }
                    d[l][k] = 0;
                    col = k;
                }
                None => {
                    return Err(ScatteringError::Inconsistent(format!(
                        "no 1 left of column {} in row {}",
                        col + 1,
                        l + 1
                    )))
                }
            }
        }
        out.push((low as u32 + 1, start + 1, wraps));
    }
    Ok(out)
}

/// Periodic local energies E_{l,k} = H(v_l(k-1) (x) b_k) for l = 1..=l_max.
pub fn periodic_energy_table(b: &Path, l_max: u32) -> Result<Vec<Vec<u32>>, ScatteringError> {
    (1..=l_max)
        .map(|l| {
            let v = fixed_carrier(b, l)?;
            Ok(energy_row(v, b).0)
        })
        .collect()
}

pub fn soliton_grouping(b: &Path) -> Result<ActionAngle, ScatteringError> {
    let sp = prepare(b)?;
    let m = sp.multiplicities();
    let caps = Capacities::of(b);
    let bl = Blocks::new(&m, b.len(), &caps);
    let top = m.keys().copied().max().unwrap_or(0);
    let n = b.len();
    for d in 0..n {
        let shifted = b.rotate_left(d);
        let e = periodic_energy_table(&shifted, top + 1)?;
        let mut diff: Vec<Vec<u8>> = Vec::with_capacity(e.len());
        for l in 0..e.len() {
            let row: Vec<u8> = (0..n)
                .map(|k| {
                    let below = if l == 0 { 0 } else { e[l - 1][k] };
                    e[l][k].checked_sub(below).unwrap_or(2) as u8
                })
                .collect();
            if row.iter().any(|&x| x > 1) {
                return Err(ScatteringError::Inconsistent(
                    "local energy differences outside {0, 1}".into(),
                ));
            }
            diff.push(row);
        }
        let groups = group_cyclic(&mut diff)?;
        if groups.iter().any(|g| g.2) {
            continue;
        }
        let sc = shifted.capacities();
        let pairs: Vec<(u32, i64)> = groups
            .iter()
            .map(|&(mu, j, _)| {
                let row = &e[mu as usize - 1];
                let head: i64 = sc[..j - 1].iter().map(|&s| s.min(mu) as i64).sum();
                let run: i64 = row[..j].iter().map(|&x| x as i64).sum();
                let r = head + row[j - 1] as i64 - 2 * run;
                let back: i64 = b.sites[..d].iter().map(|s| s.capacity().min(mu) as i64).sum();
                (mu, r + back)
            })
            .collect();
        let angles = sorted_riggings(&pairs, &bl)?;
        return Ok(ActionAngle {
            length: n,
            capacities: caps,
            m,
            angles,
            omega_flipped: false,
        });
    }
    Err(ScatteringError::NoCleanShift)
}

/// Phi for any evolvable path: negative weight goes through omega, and a failed
/// grouping falls back to the highest-path search.
pub fn scatter(b: &Path, method: Method) -> Result<ActionAngle, ScatteringError> {
    if b.weight() < 0 {
        let mut aa = scatter(&b.omega(), method)?;
        aa.omega_flipped = true;
        return Ok(aa);
    }
    match direct_scattering(b, method) {
        Err(ScatteringError::NoCleanShift) => direct_scattering(b, Method::HighestReduction),
        r => r,
    }
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn f_matrix(bl: &Blocks) -> Vec<Vec<i64>> {
    let g = bl.rows.len();
    (0..g)
        .map(|a| {
            (0..g)
                .map(|c| {
                    let v = 2 * bl.rows[a].min(bl.rows[c]) as i64 * bl.mult[c] as i64;
                    if a == c {
                        v + bl.vacancy[a]
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect()
}

/// |J(m)| = det F * prod_j (1/m_j) C(p_j + m_j - 1, m_j - 1)
pub fn count_states(m: &BTreeMap<u32, u32>, length: usize, capacities: &Capacities) -> Result<BigInt, ScatteringError> {
    positivity(m, length, capacities)?;
    let bl = Blocks::new(m, length, capacities);
    let mut acc = BigRational::from_integer(linalg::det_i64(&f_matrix(&bl)));
    for (&c, &p) in bl.mult.iter().zip(&bl.vacancy) {
        let c = c as i64;
        acc = acc * BigRational::new(binomial(p + c - 1, c - 1), BigInt::from(c));
    }
    if !acc.is_integer() {
        return Err(ScatteringError::Inconsistent(format!("non-integral count {acc}")));
    }
    Ok(acc.to_integer())
}

/// N_l = LCM_j (det F / det F[j]) with F[j] having column j replaced by (min(l, k))_k.
pub fn generic_period(m: &BTreeMap<u32, u32>, length: usize, capacities: &Capacities, l: u32) -> Result<BigInt, ScatteringError> {
    positivity(m, length, capacities)?;
    let bl = Blocks::new(m, length, capacities);
    let f = f_matrix(&bl);
    let det_f = linalg::det_i64(&f);
    let mut nums = Vec::new();
    for col in 0..f.len() {
        let mut fj = f.clone();
        for (r, row) in fj.iter_mut().enumerate() {
            row[col] = bl.rows[r].min(l) as i64;
        }
        let d = linalg::det_i64(&fj);
        if d.is_zero() {
            continue;
        }
        nums.push(linalg::abs_numer(&BigRational::new(det_f.clone(), d)));
    }
    Ok(linalg::lcm_all(&nums))
}

fn floor_div(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

/// Finds (d, y) with I - d h_1 - A n = y for some integer n, where every block of
/// y has distinct entries in [0, p_j + m_j - 1].
fn representative(aa: &ActionAngle, period: u64) -> Result<(u64, Vec<i64>), ScatteringError> {
    let bl = aa.blocks();
    let g = bl.rows.len();
    let off = bl.offsets();
    let big_m: Vec<i64> = (0..g).map(|b| bl.vacancy[b] + bl.mult[b] as i64).collect();
    let c: Vec<Vec<i64>> = (0..g)
        .map(|a| {
            (0..g)
                .map(|b| 2 * bl.rows[a].min(bl.rows[b]) as i64 - if a == b { 1 } else { 0 })
                .collect()
        })
        .collect();
    for b in 0..g {
        let mut residues: Vec<i64> = aa.angles[off[b]..off[b + 1]]
            .iter()
            .map(|&x| x.rem_euclid(big_m[b]))
            .collect();
        residues.sort_unstable();
        if residues.windows(2).any(|w| w[0] == w[1]) {
            return Err(ScatteringError::InvalidAngle(format!(
                "coincident components in the block of length {}",
                bl.rows[b]
            )));
        }
    }
    // G N = S - m d - eps with G = diag(M) + diag(m) C and 0 <= eps_j < m_j M_j
    let gm: Vec<Vec<i64>> = (0..g)
        .map(|a| {
            (0..g)
                .map(|b| bl.mult[a] as i64 * c[a][b] + if a == b { big_m[a] } else { 0 })
                .collect()
        })
        .collect();
    let ginv: RatMatrix = linalg::inverse(&linalg::to_rat(&gm))
        .ok_or_else(|| ScatteringError::InvalidAngle("singular block system".into()))?;
    let sums: Vec<i64> = (0..g).map(|b| aa.angles[off[b]..off[b + 1]].iter().sum()).collect();
    let spread: Vec<i64> = (0..g).map(|b| bl.mult[b] as i64 * big_m[b]).collect();

    for d in 0..period.max(1) {
        let rhs: Vec<i64> = (0..g).map(|b| sums[b] - bl.mult[b] as i64 * d as i64).collect();
        let centre = linalg::mat_vec(&ginv, &linalg::rat_vec(&rhs));
        let mut ranges = Vec::with_capacity(g);
        for i in 0..g {
            let mut lo = centre[i].clone();
            let mut hi = centre[i].clone();
            for j in 0..g {
                let t = &ginv[i][j] * BigRational::from_integer(spread[j].into());
                if t > BigRational::zero() {
                    lo -= t;
                } else {
                    hi -= t;
                }
            }
            let lo = lo.ceil().to_integer().to_i64().unwrap();
            let hi = hi.floor().to_integer().to_i64().unwrap();
            ranges.push((lo, hi));
        }
        if ranges.iter().any(|&(lo, hi)| lo > hi) {
            continue;
        }
        let mut tot: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'search: loop {
            let mut y = vec![0i64; aa.angles.len()];
            let mut ok = true;
            for a in 0..g {
                let t: i64 = d as i64 + (0..g).map(|b| c[a][b] * tot[b]).sum::<i64>();
                let mut count = 0;
                for i in off[a]..off[a + 1] {
                    let n = floor_div(aa.angles[i] - t, big_m[a]);
                    count += n;
                    y[i] = aa.angles[i] - t - big_m[a] * n;
                }
                if count != tot[a] {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok((d, y));
            }
            let mut k = 0;
            loop {
                if k == g {
                    break 'search;
                }
                tot[k] += 1;
                if tot[k] <= ranges[k].1 {
                    break;
                }
                tot[k] = ranges[k].0;
                k += 1;
            }
        }
    }
    Err(ScatteringError::InvalidAngle("no representative with admissible riggings".into()))
}

/// Phi^{-1}: a representative d h_1 + (r + alpha - 1), then T_1^d of the highest path.
pub fn inverse_scattering(aa: &ActionAngle) -> Result<Path, ScatteringError> {
    let caps = aa.site_capacities();
    if caps.len() != aa.length || caps.contains(&0) {
        return Err(ScatteringError::InvalidAngle("capacities do not match L".into()));
    }
    let bl = aa.blocks();
    if aa.angles.len() != bl.dim() {
        return Err(ScatteringError::InvalidAngle(format!(
            "expected {} angle components, got {}",
            bl.dim(),
            aa.angles.len()
        )));
    }
    positivity(&aa.m, aa.length, &aa.capacities)?;
    let period = generic_period(&aa.m, aa.length, &aa.capacities, 1)?
        .to_u64()
        .ok_or_else(|| ScatteringError::InvalidAngle("period out of range".into()))?;
    let (d, y) = representative(aa, period)?;
    let off = bl.offsets();
    let mut pairs = Vec::with_capacity(y.len());
    for (b, &j) in bl.rows.iter().enumerate() {
        let mut ys = y[off[b]..off[b + 1]].to_vec();
        ys.sort_unstable();
        for (a, v) in ys.into_iter().enumerate() {
            pairs.push((j, v - a as i64));
        }
    }
    let rc = RiggedConfiguration::new(caps, pairs);
    let top = phi_inverse(&rc, true)?;
    let b = evolve_steps(&top, 1, d as i64)?;
    Ok(if aa.omega_flipped { b.omega() } else { b })
}

/// Phi^{-1}(Phi(b) + sum steps * h_l).
pub fn solve_ivp(b: &Path, schedule: &[(u32, i64)], method: Method) -> Result<Path, ScatteringError> {
    if schedule.iter().all(|&(_, s)| s == 0) {
        return Ok(b.clone());
    }
    let mut aa = scatter(b, method)?;
    for &(l, s) in schedule {
        aa = angle_evolve(&aa, l, s);
    }
    inverse_scattering(&aa)
}

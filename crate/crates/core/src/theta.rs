//! Ultradiscrete Riemann theta function and the theta-function form of the
//! periodic box-ball solution, for multiplicity-free action variables.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::crystal::{combinatorial_r, BoxElement, Path};
use crate::linalg;
use crate::scattering::{velocity, velocity_infinity, ActionAngle, Blocks};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error("NotPositiveDefinite: the quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("UnsupportedMultiplicity: m_{0} = {1}; use the inverse scattering solver for repeated lengths")]
    UnsupportedMultiplicity(u32, u32),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("OutOfRange: {0}")]
    OutOfRange(String),
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn half(x: i64) -> BigRational {
    BigRational::new(BigInt::from(x), BigInt::from(2))
}

/// Exact minimization of q(n) = n^T A n / 2 + n^T z over Z^g.
#[derive(Debug, Clone)]
pub struct ThetaForm {
    a: Vec<Vec<i64>>,
    a_inv: Vec<Vec<BigRational>>,
    // A = U^T D U with U unit upper triangular
    d: Vec<BigRational>,
    u: Vec<Vec<BigRational>>,
}

impl ThetaForm {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self, ThetaError> {
        let g = a.len();
        if a.iter().any(|r| r.len() != g) || (0..g).any(|i| (0..g).any(|j| a[i][j] != a[j][i])) {
            return Err(ThetaError::NotPositiveDefinite);
        }
        let ar = linalg::to_rat(&a);
        let mut d = vec![BigRational::zero(); g];
        let mut u = vec![vec![BigRational::zero(); g]; g];
        for i in 0..g {
            let mut di = ar[i][i].clone();
            for k in 0..i {
                di -= &d[k] * &u[k][i] * &u[k][i];
            }
            if !di.is_positive() {
                return Err(ThetaError::NotPositiveDefinite);
            }
            u[i][i] = BigRational::one();
            for j in i + 1..g {
                let mut v = ar[i][j].clone();
                for k in 0..i {
                    v -= &d[k] * &u[k][i] * &u[k][j];
                }
                u[i][j] = v / &di;
            }
            d[i] = di;
        }
        let a_inv = linalg::inverse(&ar).ok_or(ThetaError::NotPositiveDefinite)?;
        Ok(ThetaForm { a, a_inv, d, u })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    /// n^T A n / 2 + n^T z
    pub fn objective(&self, n: &[i64], z: &[BigRational]) -> BigRational {
        let an = linalg::mat_vec_i64(&self.a, n);
        let quad: i64 = n.iter().zip(&an).map(|(x, y)| x * y).sum();
        let lin: BigRational = n.iter().zip(z).map(|(&x, y)| rat(x) * y).sum();
        half(quad) + lin
    }

    /// A minimizer of the objective and the minimum. Enumerates every n with
    /// (n-c)^T A (n-c) below the incumbent, c = -A^{-1} z.
    pub fn minimize(&self, z: &[BigRational]) -> Result<(Vec<i64>, BigRational), ThetaError> {
        let g = self.dim();
        if z.len() != g {
            return Err(ThetaError::DimensionMismatch(format!("z has {} entries, A is {g}x{g}", z.len())));
        }
        if g == 0 {
            return Ok((Vec::new(), BigRational::zero()));
        }
        let c: Vec<BigRational> = linalg::mat_vec(&self.a_inv, z).into_iter().map(|x| -x).collect();
        let seed: Vec<i64> = c.iter().map(|x| x.round().to_integer().to_i64().unwrap()).collect();
        let mut best_n = seed.clone();
        let mut best = self.objective(&seed, z);
        // (n-c)^T A (n-c) = 2 (q(n) - q(c)); q(c) = -c^T A c / 2 = z^T c / 2
        let qc: BigRational = z.iter().zip(&c).map(|(a, b)| a * b).sum::<BigRational>() / rat(2);
        let mut bound = (&best - &qc) * rat(2);

        let mut n = vec![0i64; g];
        let mut partial = vec![BigRational::zero(); g + 1];
        self.search(g, &c, z, &mut n, &mut partial, &mut bound, &mut best, &mut best_n, &qc);
        Ok((best_n, best))
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        level: usize,
        c: &[BigRational],
        z: &[BigRational],
        n: &mut Vec<i64>,
        partial: &mut Vec<BigRational>,
        bound: &mut BigRational,
        best: &mut BigRational,
        best_n: &mut Vec<i64>,
        qc: &BigRational,
    ) {
        if level == 0 {
            let v = self.objective(n, z);
            if v < *best {
                *best = v;
                *best_n = n.clone();
                *bound = (&*best - qc) * rat(2);
            }
            return;
        }
        let i = level - 1;
        let mut centre = c[i].clone();
        for j in i + 1..self.dim() {
            centre -= &self.u[i][j] * (rat(n[j]) - &c[j]);
        }
        let start = centre.floor().to_integer().to_i64().unwrap();
        for dir in [1i64, -1] {
            let mut k = if dir > 0 { start } else { start - 1 };
            loop {
                let y = rat(k) - &centre;
                let term = &self.d[i] * &y * &y;
                let total = &partial[level] + &term;
                if total > *bound {
                    // convex in k: moving further only grows the term
                    let beyond = if dir > 0 { rat(k) > centre } else { rat(k) < centre };
                    if beyond {
                        break;
                    }
                    k += dir;
                    continue;
                }
                n[i] = k;
                partial[i] = total;
                self.search(i, c, z, n, partial, bound, best, best_n, qc);
                k += dir;
            }
        }
        n[i] = 0;
    }

    /// Theta(z) = -min_n (n^T A n / 2 + n^T z)
    pub fn theta(&self, z: &[BigRational]) -> Result<BigRational, ThetaError> {
        Ok(-self.minimize(z)?.1)
    }
}

/// Theta(z) for the form A.
pub fn ultradiscrete_theta(z: &[BigRational], a: &[Vec<i64>]) -> Result<BigRational, ThetaError> {
    ThetaForm::new(a.to_vec())?.theta(z)
}

/// Theta(z, z') = Theta(z) - Theta(z') - Theta(z + h) + Theta(z' + h)
pub fn theta_edge(
    z: &[BigRational],
    z_prime: &[BigRational],
    a: &[Vec<i64>],
    h_inf: &[i64],
) -> Result<BigRational, ThetaError> {
    let f = ThetaForm::new(a.to_vec())?;
    let shift = |v: &[BigRational]| -> Vec<BigRational> { v.iter().zip(h_inf).map(|(x, &h)| x + rat(h)).collect() };
    Ok(f.theta(z)? - f.theta(z_prime)? - f.theta(&shift(z))? + f.theta(&shift(z_prime))?)
}

/// The data fixing the lattice z_{t,k}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaLattice {
    pub a: Vec<Vec<i64>>,
    pub rows: Vec<u32>,
    pub p: Vec<i64>,
    pub angles: Vec<i64>,
    pub row_schedule: Vec<u32>,
    pub column_capacities: Vec<u32>,
}

impl ThetaLattice {
    pub fn from_action_angle(aa: &ActionAngle, row_schedule: Vec<u32>) -> Result<Self, ThetaError> {
        if let Some((&j, &c)) = aa.m.iter().find(|(_, &c)| c > 1) {
            return Err(ThetaError::UnsupportedMultiplicity(j, c));
        }
        let bl: Blocks = aa.blocks();
        if aa.angles.len() != bl.dim() {
            return Err(ThetaError::DimensionMismatch(format!(
                "{} angles for {} solitons",
                aa.angles.len(),
                bl.dim()
            )));
        }
        Ok(ThetaLattice {
            a: aa.matrix(),
            rows: bl.rows.clone(),
            p: bl.vacancy.clone(),
            angles: aa.angles.clone(),
            row_schedule,
            column_capacities: aa.site_capacities(),
        })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn m(&self) -> std::collections::BTreeMap<u32, u32> {
        self.rows.iter().map(|&j| (j, 1)).collect()
    }

    pub fn h(&self, l: u32) -> Vec<i64> {
        velocity(&self.m(), l)
    }

    pub fn h_inf(&self) -> Vec<i64> {
        velocity_infinity(&self.m())
    }

    /// Inhomogeneous capacities rest on an unproven extension.
    pub fn is_conjectural(&self) -> bool {
        self.column_capacities.windows(2).any(|w| w[0] != w[1])
    }

    /// z_{t,k} = I - p/2 + h_{l_1} + ... + h_{l_t} - h_{s_1} - ... - h_{s_k}
    pub fn z(&self, t: usize, k: usize) -> Vec<BigRational> {
        let mut acc: Vec<i64> = self.angles.iter().map(|&x| 2 * x).collect();
        for (i, v) in acc.iter_mut().enumerate() {
            *v -= self.p[i];
        }
        for &l in &self.row_schedule[..t] {
            for (v, h) in acc.iter_mut().zip(self.h(l)) {
                *v += 2 * h;
            }
        }
        for &s in &self.column_capacities[..k] {
            for (v, h) in acc.iter_mut().zip(self.h(s)) {
                *v -= 2 * h;
            }
        }
        acc.into_iter().map(half).collect()
    }
}

/// Theta tables on the lattice and the paths they encode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    /// rows[t] = T_{l_t} ... T_{l_1}(b), t = 0..=T
    pub rows: Vec<Path>,
    /// carriers[t-1][k-1] = x_{t,k} for k = 1..=L+1
    pub carriers: Vec<Vec<BoxElement>>,
    /// theta[t][k] = Theta(z_{t,k}), t = 0..=T, k = 0..=L
    pub theta: Vec<Vec<BigRational>>,
    /// theta_shift[t][k] = Theta(z_{t,k} + h_infinity)
    pub theta_shift: Vec<Vec<BigRational>>,
    pub conjectural: bool,
}

impl Reconstruction {
    /// site_edges[t-1][k-1] = number of 2s in y_{t,k}
    pub fn site_edges(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|r| r.sites.iter().map(|s| s.x2).collect()).collect()
    }

    /// carrier_edges[t-1][k-1] = number of 2s in x_{t,k}
    pub fn carrier_edges(&self) -> Vec<Vec<u32>> {
        self.carriers.iter().map(|r| r.iter().map(|s| s.x2).collect()).collect()
    }

    /// Vertices where R(x_{t,k} (x) y_{t,k}) = y_{t+1,k} (x) x_{t,k+1} fails.
    pub fn r_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for t in 1..self.rows.len() {
            for k in 1..=self.rows[t - 1].len() {
                let x = self.carriers[t - 1][k - 1];
                let y = self.rows[t - 1].sites[k - 1];
                let (y2, x2, _) = combinatorial_r(x, y);
                if y2 != self.rows[t].sites[k - 1] || x2 != self.carriers[t - 1][k] {
                    bad.push((t, k));
                }
            }
        }
        bad
    }
}

fn edge_element(cap: u32, value: &BigRational, what: &str) -> Result<BoxElement, ThetaError> {
    if !value.is_integer() || value.is_negative() || *value > rat(cap as i64) {
        return Err(ThetaError::OutOfRange(format!("{what} = {value} outside [0, {cap}]")));
    }
    let v = value.to_integer().to_u32().unwrap();
    Ok(BoxElement::new(cap - v, v))
}

/// Evaluates the theta tables and assembles rows and carriers.
pub fn reconstruct(lat: &ThetaLattice) -> Result<Reconstruction, ThetaError> {
    let form = ThetaForm::new(lat.a.clone())?;
    if lat.angles.len() != lat.dim() || lat.p.len() != lat.dim() {
        return Err(ThetaError::DimensionMismatch("angles, p and A disagree".into()));
    }
    let big_t = lat.row_schedule.len();
    let big_l = lat.column_capacities.len();
    let hinf = lat.h_inf();
    let mut cache: HashMap<Vec<BigRational>, BigRational> = HashMap::new();
    let mut th = |z: Vec<BigRational>| -> Result<BigRational, ThetaError> {
        if let Some(v) = cache.get(&z) {
            return Ok(v.clone());
        }
        let v = form.theta(&z)?;
        cache.insert(z, v.clone());
        Ok(v)
    };
    let mut theta = Vec::with_capacity(big_t + 1);
    let mut theta_shift = Vec::with_capacity(big_t + 1);
    for t in 0..=big_t {
        let mut row = Vec::with_capacity(big_l + 1);
        let mut row_s = Vec::with_capacity(big_l + 1);
        for k in 0..=big_l {
            let z = lat.z(t, k);
            let zs: Vec<BigRational> = z.iter().zip(&hinf).map(|(x, &h)| x + rat(h)).collect();
            row.push(th(z)?);
            row_s.push(th(zs)?);
        }
        theta.push(row);
        theta_shift.push(row_s);
    }
    // Theta(z_{t,k}, z_{t',k'}) from the tables
    let edge = |t: usize, k: usize, t2: usize, k2: usize| -> BigRational {
        &theta[t][k] - &theta[t2][k2] - &theta_shift[t][k] + &theta_shift[t2][k2]
    };
    let mut rows = Vec::with_capacity(big_t + 1);
    for t in 1..=big_t + 1 {
        let sites = (1..=big_l)
            .map(|k| {
                let s = lat.column_capacities[k - 1];
                edge_element(s, &edge(t - 1, k, t - 1, k - 1), &format!("site edge ({t},{k})"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(Path::new(sites));
    }
    let mut carriers = Vec::with_capacity(big_t);
    for t in 1..=big_t {
        let l = lat.row_schedule[t - 1];
        let row = (1..=big_l + 1)
            .map(|k| edge_element(l, &edge(t - 1, k - 1, t, k - 1), &format!("carrier edge ({t},{k})")))
            .collect::<Result<Vec<_>, _>>()?;
        if row[0] != row[big_l] {
            return Err(ThetaError::OutOfRange(format!("carrier row {t} is not periodic")));
        }
        carriers.push(row);
    }
    Ok(Reconstruction {
        rows,
        carriers,
        theta,
        theta_shift,
        conjectural: lat.is_conjectural(),
    })
}

mod common;

use bbs_core::linalg;
use bbs_core::pbbs::{energy_spectrum, is_evolvable, time_evolve};
use bbs_core::scattering::{scatter, Method};
use bbs_core::theta::{reconstruct, theta_edge, ThetaError, ThetaForm, ThetaLattice};
use bbs_core::{path, Path};
use common::{random_path, random_uniform_path, rng};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::Rng;

fn half(x: i64) -> BigRational {
    BigRational::new(BigInt::from(x), BigInt::from(2))
}

/// B^T B + I for a random small integer B.
fn random_form(r: &mut StdRng, g: usize) -> Vec<Vec<i64>> {
    let b: Vec<Vec<i64>> = (0..g).map(|_| (0..g).map(|_| r.gen_range(-2..=2)).collect()).collect();
    (0..g)
        .map(|i| {
            (0..g)
                .map(|j| (0..g).map(|k| b[k][i] * b[k][j]).sum::<i64>() + (i == j) as i64)
                .collect()
        })
        .collect()
}

fn random_half_vector(r: &mut StdRng, g: usize, range: i64) -> Vec<BigRational> {
    (0..g).map(|_| half(r.gen_range(-range..=range))).collect()
}

#[test]
fn quasi_periodicity() {
    let mut r = rng(61);
    for _ in 0..1000 {
        let g = r.gen_range(1..5);
        let a = random_form(&mut r, g);
        let form = ThetaForm::new(a.clone()).unwrap();
        let z = random_half_vector(&mut r, g, 30);
        let n: Vec<i64> = (0..g).map(|_| r.gen_range(-3..=3)).collect();
        let v = linalg::rat_vec(&linalg::mat_vec_i64(&a, &n));
        let zv: Vec<BigRational> = z.iter().zip(&v).map(|(x, y)| x + y).collect();
        // v^T A^{-1} (z + v/2) = n^T (z + v/2)
        let mid: Vec<BigRational> = z.iter().zip(&v).map(|(x, y)| x + y / BigRational::from_integer(2.into())).collect();
        let lin: BigRational = n.iter().zip(&mid).map(|(&k, m)| BigRational::from_integer(k.into()) * m).sum();
        assert_eq!(form.theta(&zv).unwrap(), lin + form.theta(&z).unwrap());
    }
}

#[test]
fn minimizer_is_complete() {
    let mut r = rng(62);
    for _ in 0..300 {
        let g = r.gen_range(1..4);
        let a = random_form(&mut r, g);
        let form = ThetaForm::new(a).unwrap();
        let z = random_half_vector(&mut r, g, 12);
        let (n, best) = form.minimize(&z).unwrap();
        assert_eq!(form.objective(&n, &z), best);
        let mut box_min: Option<BigRational> = None;
        let mut cur = vec![-6i64; g];
        loop {
            let v = form.objective(&cur, &z);
            if box_min.as_ref().map_or(true, |m| v < *m) {
                box_min = Some(v);
            }
            let mut k = 0;
            while k < g && cur[k] == 6 {
                cur[k] = -6;
                k += 1;
            }
            if k == g {
                break;
            }
            cur[k] += 1;
        }
        let box_min = box_min.unwrap();
        assert!(best <= box_min);
        if n.iter().all(|x| x.abs() <= 6) {
            assert_eq!(best, box_min);
        }
    }
}

#[test]
fn trivial_values() {
    let a = vec![vec![5, 2, 2], vec![2, 6, 4], vec![2, 4, 7]];
    let zero = vec![half(0); 3];
    assert_eq!(ThetaForm::new(a.clone()).unwrap().theta(&zero).unwrap(), half(0));
    let z = vec![half(1), half(-3), half(5)];
    assert_eq!(theta_edge(&z, &z, &a, &[1, 2, 3]).unwrap(), half(0));
}

fn multiplicity_free(b: &Path) -> bool {
    let sp = energy_spectrum(b).unwrap();
    sp.is_positive() && sp.multiplicities().values().all(|&c| c == 1)
}

fn check_reconstruction(b: &Path, schedule: Vec<u32>) {
    let aa = scatter(b, Method::HighestReduction).unwrap();
    let lat = ThetaLattice::from_action_angle(&aa, schedule.clone()).unwrap();
    let rec = reconstruct(&lat).unwrap_or_else(|e| panic!("{b} {schedule:?}: {e}"));
    let mut cur = b.clone();
    assert_eq!(rec.rows[0], cur);
    for (t, &l) in schedule.iter().enumerate() {
        cur = time_evolve(&cur, l).unwrap().0;
        assert_eq!(rec.rows[t + 1], cur, "{b} {schedule:?} row {}", t + 1);
    }
    assert!(rec.r_violations().is_empty(), "{b}");
    assert_eq!(rec.conjectural, !aa.capacities.is_uniform());
}

#[test]
fn reconstruction_matches_time_evolution() {
    let mut r = rng(63);
    let mut done = 0;
    while done < 300 {
        let len = r.gen_range(4..12);
        let s = r.gen_range(1..4);
        let b = random_uniform_path(&mut r, len, s);
        if !is_evolvable(&b) || b.weight() <= 0 || !multiplicity_free(&b) {
            continue;
        }
        let steps = r.gen_range(1..5);
        let schedule: Vec<u32> = (0..steps).map(|_| r.gen_range(1..6)).collect();
        check_reconstruction(&b, schedule);
        done += 1;
    }
}

#[test]
fn reconstruction_with_mixed_capacities() {
    let mut r = rng(64);
    let mut done = 0;
    while done < 200 {
        let len = r.gen_range(4..10);
        let b = random_path(&mut r, len, 3);
        if !is_evolvable(&b) || b.weight() <= 0 || !multiplicity_free(&b) {
            continue;
        }
        let steps = r.gen_range(1..5);
        let schedule: Vec<u32> = (0..steps).map(|_| r.gen_range(1..5)).collect();
        check_reconstruction(&b, schedule);
        done += 1;
    }
}

#[test]
fn repeated_lengths_are_rejected() {
    let aa = scatter(&path("122.122.112.112.111.122.111.111.112"), Method::SolitonGrouping).unwrap();
    assert_eq!(
        ThetaLattice::from_action_angle(&aa, vec![1]),
        Err(ThetaError::UnsupportedMultiplicity(2, 2))
    );
}

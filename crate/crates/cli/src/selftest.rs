//! Golden examples checked by `bbs selftest`.

use std::collections::BTreeMap;

use bbs_core::energy_dist::{group_solitons, local_energy_table, phi_via_energy, rigging_of_group, Rule};
use bbs_core::pbbs::{energy_spectrum, evolve_steps, is_evolvable, t_infinity, time_evolve, time_evolve_inverse};
use bbs_core::scattering::{
    angle_equal, angle_evolve, block_matrix, count_states, direct_scattering, generic_period, inverse_scattering,
    scatter, solve_ivp, ActionAngle, Capacities, Method,
};
use bbs_core::theta::{reconstruct, ThetaLattice};
use bbs_core::{affine_r, combinatorial_r, phi, phi_inverse, AffineElement, BoxElement, Node, Path, RiggedConfiguration};
use num_bigint::BigInt;
use num_rational::BigRational;

const ORBIT: &str = "122.122.112.112.111.122.111.111.112";
const MIXED: &str = "11.2.1.2.122.1.12.2.1";
const KKR: &str = "1111.11.22.12.2.122.122.1112";
const BIG: &str = "22.2.2.1.1122.112.1.11.222.12.11.2.2.2.22.2.1122.22.2.222.1.112.1.12.1222.11122.2.22.2.2";
const CARRIER_PATH: &str = "112.111.222.122.112";
const CRYSTAL: &str = "11112.12.2.1122";

type Check = Result<bool, String>;

fn p(s: &str) -> Path {
    s.parse().expect("built-in path")
}

fn e(s: &str) -> BoxElement {
    s.parse().expect("built-in element")
}

fn err(x: impl std::fmt::Display) -> String {
    x.to_string()
}

fn orbit_m() -> BTreeMap<u32, u32> {
    [(1, 1), (2, 2), (4, 1)].into_iter().collect()
}

fn orbit_angle(v: Vec<i64>) -> ActionAngle {
    ActionAngle {
        length: 9,
        capacities: Capacities::Uniform(3),
        m: orbit_m(),
        angles: v,
        omega_flipped: false,
    }
}

fn mixed_angle() -> ActionAngle {
    ActionAngle {
        length: 9,
        capacities: Capacities::Sites(vec![2, 1, 1, 1, 3, 1, 2, 1, 1]),
        m: [(1, 1), (2, 1), (3, 1)].into_iter().collect(),
        angles: vec![0, 1, -1],
        omega_flipped: false,
    }
}

fn crystal_operators() -> Check {
    let b = p(CRYSTAL);
    Ok(b.eps_phi(Node::Zero) == (4, 2)
        && b.eps_phi(Node::One) == (1, 3)
        && b.kashiwara_f(Node::Zero) == Some(p("11112.12.2.1112"))
        && b.kashiwara_f(Node::One) == Some(p("11122.12.2.1122"))
        && b.kashiwara_e(Node::One) == Some(p("11111.12.2.1122"))
        && b.kashiwara_e(Node::Zero) == Some(p("11122.12.2.1122"))
        && b.weyl_s(Node::Zero) == p("11222.12.2.1122")
        && b.weyl_s(Node::One) == p("11122.12.2.1222"))
}

fn r_matrix() -> Check {
    let classical = combinatorial_r(e("12222"), e("1122")) == (e("1222"), e("11222"), 1);
    let affine = affine_r(AffineElement::new(e("12222"), 0), AffineElement::new(e("1122"), 0))
        == (AffineElement::new(e("1222"), -1), AffineElement::new(e("11222"), 1));
    Ok(classical && affine)
}

fn highest_path() -> Check {
    let b = p("111.122.111.111.112.122.122.112.112");
    let rc = RiggedConfiguration::new(vec![3; 9], vec![(4, 6), (2, 3), (2, 0), (1, 1)]);
    let vac = [1, 2, 4].map(|j| rc.vacancy_number(j)) == [1, 4, 9];
    Ok(b.is_highest() && vac && phi_inverse(&rc, true).map_err(err)? == b)
}

fn kkr() -> Check {
    let b = p(KKR);
    let want = RiggedConfiguration::new(vec![4, 2, 2, 2, 1, 3, 3, 4], vec![(6, 0), (2, 4), (1, 1)]);
    Ok(phi(&b) == want && phi_inverse(&want, true).map_err(err)? == b && phi_via_energy(&b) == want)
}

fn non_highest() -> Check {
    let b = p(BIG);
    let want = RiggedConfiguration::new(
        b.capacities(),
        vec![(4, 8), (4, 8), (1, 10), (2, 8), (3, 2), (16, -15), (2, 0), (5, -5)],
    );
    let rc = phi(&b);
    Ok(rc == want && phi_via_energy(&b) == want && rc.vacancy_number(16) == -15)
}

fn energy_table() -> Check {
    let b = p(KKR);
    let t = local_energy_table(&b, None);
    let mut ones = Vec::new();
    for l in 1..=t.l_max() {
        for j in 1..=t.width() {
            if t.diff(l, j) == 1 {
                ones.push((l, j));
            }
        }
    }
    let groups = group_solitons(&t, Rule::TopDown).map_err(err)?;
    let r: Vec<i64> = groups.iter().map(|&(mu, j)| rigging_of_group(&b, &t, mu, j)).collect();
    Ok(ones == [(1, 3), (1, 5), (1, 7), (2, 3), (2, 8), (3, 4), (4, 6), (5, 6), (6, 7)]
        && groups == [(2, 8), (1, 5), (6, 7)]
        && r == [4, 1, 0])
}

fn energy_groups() -> Check {
    let t = local_energy_table(&p(BIG), None);
    let mut sizes: Vec<u32> = group_solitons(&t, Rule::TopDown).map_err(err)?.iter().map(|g| g.0).collect();
    sizes.reverse();
    Ok(sizes == [5, 2, 16, 3, 2, 1, 4, 4])
}

fn orbit() -> Check {
    let b = p(ORBIT);
    let t1 = p("112.112.122.122.112.111.122.111.111");
    let step = time_evolve(&b, 4).map_err(err)?.0;
    let back = time_evolve_inverse(&t1, 4).map_err(err)?;
    Ok(step == t1 && back == b && evolve_steps(&b, 4, 11).map_err(err)? == b)
}

fn carriers() -> Check {
    let b = p(CARRIER_PATH);
    let rows = [
        "122.111.122.222.111",
        "112.112.112.222.112",
        "112.112.111.222.122",
        "122.112.111.122.122",
    ];
    for (l, w) in (1..=4).zip(rows) {
        if time_evolve(&b, l).map_err(err)?.0 != p(w) {
            return Ok(false);
        }
    }
    Ok(t_infinity(&b).0 == p("122.122.111.112.122"))
}

fn evolvability() -> Check {
    Ok(is_evolvable(&p("11.22")) && is_evolvable(&p("22.11")) && time_evolve(&p("12.12"), 1).is_err())
}

fn spectrum() -> Check {
    let sp = energy_spectrum(&p(ORBIT)).map_err(err)?;
    Ok((1..=6).map(|l| sp.energy(l)).collect::<Vec<_>>() == [4, 7, 8, 9, 9, 9]
        && sp.mu() == [4, 2, 2, 1]
        && [1, 2, 4].map(|j| sp.vacancy(j)) == [1, 4, 9])
}

fn matrices() -> Check {
    let a = block_matrix(&orbit_m(), 9, &Capacities::Uniform(3));
    let pa = mixed_angle();
    let b = block_matrix(&pa.m, 9, &pa.capacities);
    Ok(a == [vec![3, 2, 2, 2], vec![2, 9, 3, 4], vec![2, 3, 9, 4], vec![2, 4, 4, 17]]
        && b == [vec![5, 2, 2], vec![2, 6, 4], vec![2, 4, 7]])
}

fn angles() -> Check {
    let b = p(ORBIT);
    let g = direct_scattering(&b, Method::SolitonGrouping).map_err(err)?;
    let h = direct_scattering(&b, Method::HighestReduction).map_err(err)?;
    let mixed = scatter(&p(MIXED), Method::SolitonGrouping).map_err(err)?;
    Ok(g.angles == [2, 6, 10, 16]
        && angle_equal(&h, &g)
        && angle_equal(&g, &orbit_angle(vec![-4, -10, -6, -9]))
        && mixed == mixed_angle())
}

fn linearization() -> Check {
    let a = orbit_angle(vec![2, 6, 10, 16]);
    let two = angle_evolve(&a, 2, 1000);
    let four = angle_evolve(&a, 4, 1000);
    let want2 = p("111.111.112.112.122.122.112.111.122");
    let want4 = p("112.112.112.111.122.111.111.122.122");
    Ok(two.angles == [1002, 2006, 2010, 2016]
        && four.angles == [1002, 2006, 2010, 4016]
        && inverse_scattering(&two).map_err(err)? == want2
        && inverse_scattering(&four).map_err(err)? == want4
        && inverse_scattering(&a).map_err(err)? == p(ORBIT)
        && solve_ivp(&p(ORBIT), &[(2, 1000)], Method::SolitonGrouping).map_err(err)? == want2)
}

fn counting() -> Check {
    let caps = Capacities::Uniform(3);
    let n = count_states(&orbit_m(), 9, &caps).map_err(err)?;
    let periods: Vec<BigInt> = (1..=4)
        .map(|l| generic_period(&orbit_m(), 9, &caps, l))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    Ok(n == BigInt::from(990) && periods == [396, 99, 9, 11].map(BigInt::from))
}

fn theta() -> Check {
    let lat = ThetaLattice::from_action_angle(&mixed_angle(), vec![2, 1, 3]).map_err(err)?;
    let rec = reconstruct(&lat).map_err(err)?;
    let q = |x: i64| BigRational::from_integer(x.into());
    let rows: Vec<Path> = [MIXED, "12.1.2.1.122.2.11.1.2", "22.1.1.2.112.2.12.1.1", "11.2.2.1.112.1.12.2.2"]
        .iter()
        .map(|s| p(s))
        .collect();
    Ok(rec.theta[0][0] == q(0)
        && rec.theta[0][4] == q(4)
        && rec.theta[3][0] == q(2)
        && rec.theta[3][9] == q(8)
        && rec.theta_shift[0][0] == q(0)
        && rec.theta_shift[3][0] == q(4)
        && rec.site_edges()[1][0] == 1
        && rec.carrier_edges()[0][5] == 1
        && rec.site_edges()[1][4] == 2
        && rec.rows == rows
        && rec.r_violations().is_empty())
}

/// Runs every golden check and returns (name, passed).
pub fn run_all() -> Vec<(&'static str, bool)> {
    let checks: [(&'static str, fn() -> Check); 17] = [
        ("crystal operators on 11112.12.2.1122", crystal_operators),
        ("R(12222 x 1122) = 1222 x 11222, H=1", r_matrix),
        ("highest path of the mu=(4,2,2,1) configuration", highest_path),
        ("phi of 1111.11.22.12.2.122.122.1112", kkr),
        ("phi of the length-30 non-highest path", non_highest),
        ("energy table, groups and riggings", energy_table),
        ("group sizes 5,2,16,3,2,1,4,4", energy_groups),
        ("T_4 orbit of period 11", orbit),
        ("T_1..T_4 and T_infinity on 112.111.222.122.112", carriers),
        ("evolvability of 11.22, 22.11, 12.12", evolvability),
        ("energies 4,7,8,9 and vacancies 1,4,9", spectrum),
        ("interaction matrices", matrices),
        ("action-angle variables", angles),
        ("T_2^1000 and T_4^1000 via angles", linearization),
        ("990 states, periods 396,99,9,11", counting),
        ("theta tables and rows", theta),
        ("inverse scattering round trip", round_trip),
    ];
    checks
        .into_iter()
        .map(|(name, f)| (name, matches!(f(), Ok(true))))
        .collect()
}

fn round_trip() -> Check {
    let b = p(ORBIT);
    let aa = scatter(&b, Method::HighestReduction).map_err(err)?;
    let w = b.omega();
    let wa = scatter(&w, Method::HighestReduction).map_err(err)?;
    Ok(inverse_scattering(&aa).map_err(err)? == b && inverse_scattering(&wa).map_err(err)? == w)
}

mod common;

use bbs_core::crystal::local_energy;
use bbs_core::{affine_r, combinatorial_r, path, AffineElement, BoxElement, Node, Path};
use common::{graphical_r, random_path, rng};
use proptest::prelude::*;
use rand::Rng;

fn pairs(max: u32) -> impl Iterator<Item = (BoxElement, BoxElement)> {
    (1..=max).flat_map(move |k| {
        (1..=max).flat_map(move |l| {
            BoxElement::all(k).flat_map(move |x| BoxElement::all(l).map(move |y| (x, y)))
        })
    })
}

#[test]
fn graphical_rule_matches_formula() {
    let mut r = rng(11);
    for (x, y) in pairs(6) {
        let want = combinatorial_r(x, y);
        for _ in 0..4 {
            assert_eq!(graphical_r(x, y, &mut r), want, "{x} (x) {y}");
        }
    }
}

#[test]
fn graphical_examples() {
    let mut r = rng(3);
    let b = |s: &str| s.parse::<BoxElement>().unwrap();
    assert_eq!(graphical_r(b("12222"), b("1122"), &mut r), (b("1222"), b("11222"), 1));
    assert_eq!(graphical_r(b("2"), b("11"), &mut r), (b("12"), b("1"), 0));
}

#[test]
fn r_is_an_involution() {
    for (x, y) in pairs(6) {
        let (a, b, h) = combinatorial_r(x, y);
        let (c, d, h2) = combinatorial_r(a, b);
        assert_eq!((c, d), (x, y));
        assert_eq!(h, h2, "H is symmetric under R");
    }
}

#[test]
fn r_preserves_weight_and_bounds_energy() {
    for (x, y) in pairs(6) {
        let (a, b, h) = combinatorial_r(x, y);
        assert_eq!(a.weight() + b.weight(), x.weight() + y.weight());
        assert_eq!(a.capacity(), y.capacity());
        assert_eq!(b.capacity(), x.capacity());
        assert!(h <= x.capacity().min(y.capacity()));
        assert_eq!(local_energy(x, y), h);
    }
    for k in 1..=6 {
        for l in 1..=6 {
            assert_eq!(combinatorial_r(BoxElement::highest(k), BoxElement::highest(l)).2, 0);
        }
    }
}

#[test]
fn classical_part_trivial_on_equal_capacities() {
    for l in 1..=6 {
        for x in BoxElement::all(l) {
            for y in BoxElement::all(l) {
                let (a, b, _) = combinatorial_r(x, y);
                assert_eq!((a, b), (x, y));
            }
        }
    }
}

#[test]
fn omega_commutes_with_r() {
    for (x, y) in pairs(6) {
        let (a, b, _) = combinatorial_r(x, y);
        let (c, d, _) = combinatorial_r(x.omega(), y.omega());
        assert_eq!((c, d), (a.omega(), b.omega()));
    }
}

#[test]
fn reversal_commutes_with_r() {
    for (x, y) in pairs(6) {
        let (a, b, _) = combinatorial_r(x, y);
        let (c, d, _) = combinatorial_r(y, x);
        assert_eq!((c, d), (b, a));
    }
}

#[test]
fn yang_baxter_affine() {
    let modes = [-1i64, 0, 1];
    for j in 1..=4 {
        for l in 1..=4 {
            for k in 1..=4 {
                for a in BoxElement::all(j) {
                    for b in BoxElement::all(l) {
                        for c in BoxElement::all(k) {
                            for &da in &modes {
                                for &db in &modes {
                                    for &dc in &modes {
                                        let v = [
                                            AffineElement::new(a, da),
                                            AffineElement::new(b, db),
                                            AffineElement::new(c, dc),
                                        ];
                                        assert_eq!(ybe_left(v), ybe_right(v), "{a} {b} {c}");
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

fn apply(v: &mut [AffineElement; 3], i: usize) {
    let (p, q) = affine_r(v[i], v[i + 1]);
    v[i] = p;
    v[i + 1] = q;
}

fn ybe_left(mut v: [AffineElement; 3]) -> [AffineElement; 3] {
    apply(&mut v, 1);
    apply(&mut v, 0);
    apply(&mut v, 1);
    v
}

fn ybe_right(mut v: [AffineElement; 3]) -> [AffineElement; 3] {
    apply(&mut v, 0);
    apply(&mut v, 1);
    apply(&mut v, 0);
    v
}

/// Which factor of a two-site path e_i acts on (0 = left).
fn acting_side(b: &Path, i: Node) -> Option<usize> {
    let e = b.kashiwara_e(i)?;
    Some(if e.sites[0] != b.sites[0] { 0 } else { 1 })
}

#[test]
fn r_is_a_crystal_morphism_with_energy_recursion() {
    for (x, y) in pairs(4) {
        let b = Path::new(vec![x, y]);
        let (a, c, h) = combinatorial_r(x, y);
        let rb = Path::new(vec![a, c]);
        for i in Node::ALL {
            match (b.kashiwara_e(i), rb.kashiwara_e(i)) {
                (None, None) => {}
                (Some(eb), Some(erb)) => {
                    let (p, q, h2) = combinatorial_r(eb.sites[0], eb.sites[1]);
                    assert_eq!(Path::new(vec![p, q]), erb, "e_{i:?} on {b}");
                    let delta = h2 as i64 - h as i64;
                    let sides = (acting_side(&b, i).unwrap(), acting_side(&rb, i).unwrap());
                    let want = match (i, sides) {
                        (Node::Zero, (0, 0)) => -1,
                        (Node::Zero, (1, 1)) => 1,
                        _ => 0,
                    };
                    assert_eq!(delta, want, "H recursion for e_{i:?} on {b}");
                }
                _ => panic!("e_{i:?} defined on only one side for {b}"),
            }
            match (b.kashiwara_f(i), rb.kashiwara_f(i)) {
                (None, None) => {}
                (Some(fb), Some(frb)) => {
                    let (p, q, _) = combinatorial_r(fb.sites[0], fb.sites[1]);
                    assert_eq!(Path::new(vec![p, q]), frb, "f_{i:?} on {b}");
                }
                _ => panic!("f_{i:?} defined on only one side for {b}"),
            }
        }
    }
}

/// Sign word of a path for node i with the site index of each sign.
fn sign_word(b: &Path, i: Node) -> Vec<(char, usize)> {
    let mut w = Vec::new();
    for (k, s) in b.sites.iter().enumerate() {
        for _ in 0..s.epsilon(i) {
            w.push(('-', k));
        }
        for _ in 0..s.phi(i) {
            w.push(('+', k));
        }
    }
    w
}

#[test]
fn signature_elimination_order_is_irrelevant() {
    let mut r = rng(5);
    for _ in 0..2000 {
        let len = r.gen_range(1..7);
        let b = random_path(&mut r, len, 4);
        for i in Node::ALL {
            let mut w = sign_word(&b, i);
            loop {
                let spots: Vec<usize> = (0..w.len().saturating_sub(1))
                    .filter(|&k| w[k].0 == '+' && w[k + 1].0 == '-')
                    .collect();
                if spots.is_empty() {
                    break;
                }
                let k = spots[r.gen_range(0..spots.len())];
                w.drain(k..k + 2);
            }
            let eps = w.iter().filter(|c| c.0 == '-').count() as u32;
            let phi = w.len() as u32 - eps;
            assert_eq!(b.eps_phi(i), (eps, phi), "{b}");
            if let Some(&(_, k)) = w.iter().find(|c| c.0 == '+') {
                let f = b.kashiwara_f(i).unwrap();
                assert_eq!(f.sites[k], b.sites[k].f(i).unwrap());
            } else {
                assert!(b.kashiwara_f(i).is_none());
            }
            if let Some(&(_, k)) = w.iter().rev().find(|c| c.0 == '-') {
                let e = b.kashiwara_e(i).unwrap();
                assert_eq!(e.sites[k], b.sites[k].e(i).unwrap());
            } else {
                assert!(b.kashiwara_e(i).is_none());
            }
        }
    }
}

#[test]
fn weyl_reflections() {
    let mut r = rng(6);
    for _ in 0..2000 {
        let len = r.gen_range(1..8);
        let b = random_path(&mut r, len, 4);
        for i in Node::ALL {
            let s = b.weyl_s(i);
            assert_eq!(s.weyl_s(i), b);
            assert_eq!(s.weight(), -b.weight());
            let (e, p) = b.eps_phi(i);
            assert_eq!(s.eps_phi(i), (p, e));
        }
    }
    assert_eq!(path("12").weyl_s(Node::One), path("12"));
}

#[test]
fn operator_list() {
    let p = path("11112.12.2.1122");
    assert_eq!(p.kashiwara_e(Node::One), Some(path("11111.12.2.1122")));
    assert_eq!(p.kashiwara_e(Node::Zero), Some(path("11122.12.2.1122")));
    assert_eq!(p.weyl_s(Node::Zero), path("11222.12.2.1122"));
    assert_eq!(p.weyl_s(Node::One), path("11122.12.2.1222"));
    assert_eq!(path("111").kashiwara_e(Node::One), None);
    assert!(path("111.122.111.111.112.122.122.112.112").is_highest());
    assert!(!path("2").is_highest());
}

proptest! {
    #[test]
    fn path_text_round_trip(sites in prop::collection::vec((0u32..5, 0u32..5), 1..12)) {
        let sites: Vec<BoxElement> = sites
            .into_iter()
            .filter(|(a, b)| a + b > 0)
            .map(|(a, b)| BoxElement::new(a, b))
            .collect();
        prop_assume!(!sites.is_empty());
        let b = Path::new(sites);
        prop_assert_eq!(b.to_string().parse::<Path>().unwrap(), b.clone());
        prop_assert_eq!(b.join(" : ").parse::<Path>().unwrap(), b.clone());
        prop_assert_eq!(b.omega().omega(), b.clone());
        prop_assert_eq!(b.reversed().reversed(), b);
    }

    #[test]
    fn affine_modes_shift_by_energy(x2 in 0u32..6, y2 in 0u32..6, k in 1u32..6, l in 1u32..6, d in -5i64..5, e in -5i64..5) {
        let x = BoxElement::new(k.saturating_sub(x2), x2.min(k));
        let y = BoxElement::new(l.saturating_sub(y2), y2.min(l));
        let (a, b) = affine_r(AffineElement::new(x, d), AffineElement::new(y, e));
        let h = combinatorial_r(x, y).2 as i64;
        prop_assert_eq!(a.mode, e - h);
        prop_assert_eq!(b.mode, d + h);
    }
}

#[test]
fn parse_errors() {
    assert!("12.21".parse::<Path>().is_err());
    assert!("12..1".parse::<Path>().is_err());
    assert!("".parse::<Path>().is_err());
    assert!("13".parse::<Path>().is_err());
}

mod common;

use bbs_core::energy_dist::{
    group_solitons, local_energy_table, phi_via_energy, phi_via_energy_with, render_ascii, Rule,
};
use bbs_core::{path, phi, BoxElement, Path};
use common::{capacity_lists, paths_with, random_path, rng};
use rand::Rng;

fn big() -> Path {
    path("22.2.2.1.1122.112.1.11.222.12.11.2.2.2.22.2.1122.22.2.222.1.112.1.12.1222.11122.2.22.2.2")
}

#[test]
fn big_dot_diagram() {
    let t = local_energy_table(&big(), None);
    let mut dots = Vec::new();
    for l in 1..=t.l_max() {
        for j in 1..=t.width() {
            if t.diff(l, j) == 1 {
                dots.push((j, 17 - l));
            }
        }
    }
    dots.sort_by_key(|&(x, y)| (y, x));
    let want = vec![
        (30, 1), (29, 2), (26, 3), (20, 4), (20, 5), (20, 6), (19, 7), (17, 8), (17, 9), (16, 10),
        (15, 11), (5, 12), (15, 12), (3, 13), (10, 13), (25, 13), (28, 13), (2, 14), (9, 14),
        (14, 14), (25, 14), (28, 14), (1, 15), (6, 15), (9, 15), (13, 15), (18, 15), (25, 15),
        (27, 15), (1, 16), (5, 16), (9, 16), (12, 16), (18, 16), (22, 16), (24, 16), (26, 16),
    ];
    assert_eq!(dots, want);
}

#[test]
fn big_group_sizes() {
    let t = local_energy_table(&big(), None);
    // groups come out from the rightmost first-row dot leftwards
    let top = group_solitons(&t, Rule::TopDown).unwrap();
    let sizes: Vec<u32> = top.iter().rev().map(|&(m, _)| m).collect();
    assert_eq!(sizes, vec![5, 2, 16, 3, 2, 1, 4, 4]);
    let mut bottom: Vec<u32> = group_solitons(&t, Rule::BottomUp).unwrap().iter().map(|g| g.0).collect();
    bottom.sort_unstable();
    let mut want = sizes.clone();
    want.sort_unstable();
    assert_eq!(bottom, want);
    assert_eq!(phi_via_energy(&big()), phi(&big()));
}

#[test]
fn ascii_rendering() {
    let t = local_energy_table(&path("1.2.1"), None);
    let s = render_ascii(&t);
    assert!(s.starts_with("  1 .*.\n"));
}

fn check(b: &Path) {
    let want = phi(b);
    let top = phi_via_energy_with(b, Rule::TopDown).unwrap();
    let bottom = phi_via_energy_with(b, Rule::BottomUp).unwrap();
    assert_eq!(top, want, "{b}");
    assert_eq!(bottom, want, "{b}");
    let t = local_energy_table(b, None);
    for l in 1..=t.l_max() {
        assert!(t.row_sum(l) >= t.row_sum(l - 1));
        for j in 1..=t.width() {
            assert!(t.diff(l, j) <= 1);
        }
    }
    assert_eq!(group_solitons(&t, Rule::TopDown).unwrap().len() as u64, t.row_sum(1));
}

#[test]
fn sweep_small_capacities() {
    for caps in capacity_lists(3, 7) {
        for b in paths_with(&caps) {
            check(&b);
        }
    }
}

#[test]
fn sweep_random() {
    let mut r = rng(31);
    for _ in 0..2000 {
        let len = r.gen_range(5..30);
        check(&random_path(&mut r, len, 5));
    }
}

#[test]
fn carriers_return_to_highest_after_padding() {
    let mut r = rng(32);
    for _ in 0..300 {
        let len = r.gen_range(1..12);
        let b = random_path(&mut r, len, 4);
        let lambda = b.total_size() as usize + 1;
        let mut sites = b.sites.clone();
        sites.extend(std::iter::repeat(BoxElement::highest(1)).take(lambda));
        let t = local_energy_table(&Path::new(sites), Some(b.count_twos() + 2));
        for (l, row) in t.carriers.iter().enumerate() {
            assert_eq!(*row.last().unwrap(), BoxElement::highest(l as u32 + 1));
        }
    }
}

#![allow(dead_code)]

use bbs_core::{combinatorial_r, BoxElement, Path};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Every path over the given capacity list.
pub fn paths_with(caps: &[u32]) -> Vec<Path> {
    let mut out = vec![Vec::new()];
    for &s in caps {
        let mut next = Vec::with_capacity(out.len() * (s as usize + 1));
        for p in &out {
            for e in BoxElement::all(s) {
                let mut q: Vec<BoxElement> = p.clone();
                q.push(e);
                next.push(q);
            }
        }
        out = next;
    }
    out.into_iter().map(Path::new).collect()
}

/// Compositions of every n in 1..=max_total with parts at most max_part.
pub fn capacity_lists(max_part: u32, max_total: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for s in 1..=max_part.min(rest) {
            cur.push(s);
            go(rest - s, max_part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(max_total, max_part, &mut Vec::new(), &mut out);
    out
}

pub fn random_element(r: &mut StdRng, s: u32) -> BoxElement {
    let x2 = r.gen_range(0..=s);
    BoxElement::new(s - x2, x2)
}

pub fn random_path(r: &mut StdRng, len: usize, max_cap: u32) -> Path {
    Path::new(
        (0..len)
            .map(|_| {
                let s = r.gen_range(1..=max_cap);
                random_element(r, s)
            })
            .collect(),
    )
}

pub fn random_uniform_path(r: &mut StdRng, len: usize, s: u32) -> Path {
    Path::new((0..len).map(|_| random_element(r, s)).collect())
}

/// Dot-pairing rule for x in B_k (left) and y in B_l (right), k >= l. The upper
/// row holds the 1s, the lower row the 2s. Right dots are paired one at a time
/// in the order given by `order` (true = lower-row dot).
fn graphical_pairing(x: BoxElement, y: BoxElement, order: &[bool]) -> (BoxElement, BoxElement, u32) {
    assert!(x.capacity() >= y.capacity());
    let (mut up, mut low) = (x.x1, x.x2);
    let (mut paired_up, mut paired_low) = (0, 0);
    let mut unwinding = 0;
    for &lower in order {
        if lower {
            if up > 0 {
                up -= 1;
                paired_up += 1;
                unwinding += 1;
            } else {
                low -= 1;
                paired_low += 1;
            }
        } else if low > 0 {
            low -= 1;
            paired_low += 1;
        } else {
            up -= 1;
            paired_up += 1;
        }
    }
    (
        BoxElement::new(paired_up, paired_low),
        BoxElement::new(y.x1 + up, y.x2 + low),
        unwinding,
    )
}

/// The graphical rule with a random pairing order; the case k < l is obtained by
/// inverting the k >= l case.
pub fn graphical_r(x: BoxElement, y: BoxElement, r: &mut StdRng) -> (BoxElement, BoxElement, u32) {
    if x.capacity() >= y.capacity() {
        let mut order: Vec<bool> = std::iter::repeat(false)
            .take(y.x1 as usize)
            .chain(std::iter::repeat(true).take(y.x2 as usize))
            .collect();
        order.shuffle(r);
        return graphical_pairing(x, y, &order);
    }
    let (k, l) = (x.capacity(), y.capacity());
    let mut found = None;
    for a in BoxElement::all(l) {
        for b in BoxElement::all(k) {
            let (x2, y2, h) = graphical_r(a, b, r);
            if x2 == x && y2 == y {
                assert!(found.is_none(), "graphical rule is not injective");
                found = Some((a, b, h));
            }
        }
    }
    found.expect("graphical rule is not surjective")
}

/// R acting on sites i, i+1 of a list of affine-free elements.
pub fn r_at(v: &mut [BoxElement], i: usize) -> u32 {
    let (a, b, h) = combinatorial_r(v[i], v[i + 1]);
    v[i] = a;
    v[i + 1] = b;
    h
}

//! One-row tableaux of B_l, their tensor products and the combinatorial R.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("EmptyToken: empty site in path text")]
    EmptyToken,
    #[error("InvalidToken: {0:?} is not a nondecreasing word over 1 and 2")]
    InvalidToken(String),
    #[error("EmptyPath: no sites given")]
    EmptyPath,
}

/// Dynkin node index. Indices are taken in Z/2, so x_0 means x_2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Zero,
    One,
}

impl Node {
    pub const ALL: [Node; 2] = [Node::Zero, Node::One];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxElement {
    pub x1: u32,
    pub x2: u32,
}

impl BoxElement {
    pub const fn new(x1: u32, x2: u32) -> Self {
        BoxElement { x1, x2 }
    }

    /// u_l = 1...1
    pub const fn highest(l: u32) -> Self {
        BoxElement { x1: l, x2: 0 }
    }

    pub const fn lowest(l: u32) -> Self {
        BoxElement { x1: 0, x2: l }
    }

    pub const fn capacity(&self) -> u32 {
        self.x1 + self.x2
    }

    pub fn weight(&self) -> i64 {
        self.x1 as i64 - self.x2 as i64
    }

    pub const fn omega(&self) -> Self {
        BoxElement { x1: self.x2, x2: self.x1 }
    }

    pub fn is_frozen(&self) -> bool {
        self.x1 == 0 || self.x2 == 0
    }

    pub fn epsilon(&self, i: Node) -> u32 {
        match i {
            Node::Zero => self.x1,
            Node::One => self.x2,
        }
    }

    pub fn phi(&self, i: Node) -> u32 {
        match i {
            Node::Zero => self.x2,
            Node::One => self.x1,
        }
    }

    pub fn f(&self, i: Node) -> Option<Self> {
        match i {
            Node::One if self.x1 > 0 => Some(BoxElement::new(self.x1 - 1, self.x2 + 1)),
            Node::Zero if self.x2 > 0 => Some(BoxElement::new(self.x1 + 1, self.x2 - 1)),
            _ => None,
        }
    }

    pub fn e(&self, i: Node) -> Option<Self> {
        match i {
            Node::One if self.x2 > 0 => Some(BoxElement::new(self.x1 + 1, self.x2 - 1)),
            Node::Zero if self.x1 > 0 => Some(BoxElement::new(self.x1 - 1, self.x2 + 1)),
            _ => None,
        }
    }

    /// All l+1 elements of B_l, from u_l down to 2...2.
    pub fn all(l: u32) -> impl Iterator<Item = BoxElement> {
        (0..=l).map(move |x2| BoxElement::new(l - x2, x2))
    }
}

impl fmt::Display for BoxElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.x1 {
            f.write_str("1")?;
        }
        for _ in 0..self.x2 {
            f.write_str("2")?;
        }
        Ok(())
    }
}

impl FromStr for BoxElement {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseError::EmptyToken);
        }
        let (mut x1, mut x2) = (0u32, 0u32);
        for c in s.chars() {
            match c {
                '1' if x2 == 0 => x1 += 1,
                '2' => x2 += 1,
                _ => return Err(ParseError::InvalidToken(s.to_string())),
            }
        }
        Ok(BoxElement::new(x1, x2))
    }
}

/// b[d], an element of Aff(B_l).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub element: BoxElement,
    pub mode: i64,
}

impl AffineElement {
    pub const fn new(element: BoxElement, mode: i64) -> Self {
        AffineElement { element, mode }
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.element, self.mode)
    }
}

impl FromStr for AffineElement {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.find('[') {
            None => Ok(AffineElement::new(s.parse()?, 0)),
            Some(k) => {
                let bad = || ParseError::InvalidToken(s.to_string());
                let rest = s[k + 1..].strip_suffix(']').ok_or_else(bad)?;
                let mode = rest.trim().parse::<i64>().map_err(|_| bad())?;
                Ok(AffineElement::new(s[..k].parse()?, mode))
            }
        }
    }
}

/// Classical combinatorial R on B_k (x) B_l together with the local energy.
///
/// Returns (y~, x~, H) with x (x) y ~ y~ (x) x~ and H = Q_0(x, y).
pub fn combinatorial_r(x: BoxElement, y: BoxElement) -> (BoxElement, BoxElement, u32) {
    let q0 = x.x1.min(y.x2);
    let q1 = x.x2.min(y.x1);
    let xt = BoxElement::new(x.x1 + q1 - q0, x.x2 + q0 - q1);
    let yt = BoxElement::new(y.x1 + q0 - q1, y.x2 + q1 - q0);
    (yt, xt, q0)
}

pub fn local_energy(x: BoxElement, y: BoxElement) -> u32 {
    x.x1.min(y.x2)
}

/// R(x[d] (x) y[e]) = y~[e - H] (x) x~[d + H].
pub fn affine_r(x: AffineElement, y: AffineElement) -> (AffineElement, AffineElement) {
    let (yt, xt, h) = combinatorial_r(x.element, y.element);
    let h = h as i64;
    (
        AffineElement::new(yt, y.mode - h),
        AffineElement::new(xt, x.mode + h),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Path {
    pub sites: Vec<BoxElement>,
}

/// Reduced signature bookkeeping for one node.
struct Reduced {
    // unmatched minuses per site, left to right
    minus: Vec<(usize, u32)>,
    // unmatched pluses per site, left to right
    plus: Vec<(usize, u32)>,
}

impl Reduced {
    fn epsilon(&self) -> u32 {
        self.minus.iter().map(|&(_, c)| c).sum()
    }

    fn phi(&self) -> u32 {
        self.plus.iter().map(|&(_, c)| c).sum()
    }
}

impl Path {
    pub fn new(sites: Vec<BoxElement>) -> Self {
        Path { sites }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn capacities(&self) -> Vec<u32> {
        self.sites.iter().map(|b| b.capacity()).collect()
    }

    pub fn total_size(&self) -> u32 {
        self.sites.iter().map(|b| b.capacity()).sum()
    }

    pub fn count_twos(&self) -> u32 {
        self.sites.iter().map(|b| b.x2).sum()
    }

    pub fn weight(&self) -> i64 {
        self.sites.iter().map(|b| b.weight()).sum()
    }

    pub fn omega(&self) -> Path {
        Path::new(self.sites.iter().map(|b| b.omega()).collect())
    }

    /// The reversal b_1 (x) ... (x) b_L -> b_L (x) ... (x) b_1.
    pub fn reversed(&self) -> Path {
        Path::new(self.sites.iter().rev().copied().collect())
    }

    /// b_L (x) b_1 (x) ... (x) b_{L-1}
    pub fn rotate_right(&self, k: usize) -> Path {
        let mut s = self.sites.clone();
        if !s.is_empty() {
            let n = s.len();
            s.rotate_right(k % n);
        }
        Path::new(s)
    }

    pub fn rotate_left(&self, k: usize) -> Path {
        let mut s = self.sites.clone();
        if !s.is_empty() {
            let n = s.len();
            s.rotate_left(k % n);
        }
        Path::new(s)
    }

    fn reduce(&self, i: Node) -> Reduced {
        let mut minus: Vec<(usize, u32)> = Vec::new();
        let mut plus: Vec<(usize, u32)> = Vec::new();
        for (k, b) in self.sites.iter().enumerate() {
            let mut m = b.epsilon(i);
            while m > 0 {
                match plus.last_mut() {
                    Some(top) => {
                        let c = top.1.min(m);
                        top.1 -= c;
                        m -= c;
                        if top.1 == 0 {
                            plus.pop();
                        }
                    }
                    None => break,
                }
            }
            if m > 0 {
                minus.push((k, m));
            }
            let p = b.phi(i);
            if p > 0 {
                plus.push((k, p));
            }
        }
        Reduced { minus, plus }
    }

    pub fn eps_phi(&self, i: Node) -> (u32, u32) {
        let r = self.reduce(i);
        (r.epsilon(), r.phi())
    }

    pub fn kashiwara_f(&self, i: Node) -> Option<Path> {
        let r = self.reduce(i);
        let &(k, _) = r.plus.first()?;
        let mut out = self.clone();
        out.sites[k] = out.sites[k].f(i)?;
        Some(out)
    }

    pub fn kashiwara_e(&self, i: Node) -> Option<Path> {
        let r = self.reduce(i);
        let &(k, _) = r.minus.last()?;
        let mut out = self.clone();
        out.sites[k] = out.sites[k].e(i)?;
        Some(out)
    }

    /// Weyl reflection s_i. Flips the leftmost (phi - eps) unmatched pluses, or
    /// the rightmost (eps - phi) unmatched minuses, in one pass.
    pub fn weyl_s(&self, i: Node) -> Path {
        let r = self.reduce(i);
        let (a, b) = (r.epsilon(), r.phi());
        let mut out = self.clone();
        if b > a {
            let mut left = b - a;
            for &(k, c) in &r.plus {
                let t = c.min(left);
                for _ in 0..t {
                    out.sites[k] = out.sites[k].f(i).expect("unmatched plus");
                }
                left -= t;
                if left == 0 {
                    break;
                }
            }
        } else if a > b {
            let mut left = a - b;
            for &(k, c) in r.minus.iter().rev() {
                let t = c.min(left);
                for _ in 0..t {
                    out.sites[k] = out.sites[k].e(i).expect("unmatched minus");
                }
                left -= t;
                if left == 0 {
                    break;
                }
            }
        }
        out
    }

    pub fn is_highest(&self) -> bool {
        self.eps_phi(Node::One).0 == 0
    }

    /// Render with a custom separator, e.g. " . ".
    pub fn join(&self, sep: &str) -> String {
        self.sites
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl From<Vec<BoxElement>> for Path {
    fn from(sites: Vec<BoxElement>) -> Self {
        Path::new(sites)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join("."))
    }
}

impl FromStr for Path {
    type Err = ParseError;

    /// Sites are separated by '.', ':', the tensor sign or whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut sites = Vec::new();
        let pieces: Vec<&str> = s.trim().split(['.', ':', '⊗', '·']).collect();
        for piece in &pieces {
            let words: Vec<&str> = piece.split_whitespace().collect();
            if words.is_empty() {
                if pieces.len() == 1 {
                    return Err(ParseError::EmptyPath);
                }
                return Err(ParseError::EmptyToken);
            }
            for w in words {
                sites.push(w.parse()?);
            }
        }
        Ok(Path::new(sites))
    }
}

/// Convenience parser for literals known to be valid.
pub fn path(s: &str) -> Path {
    s.parse().unwrap_or_else(|e| panic!("bad path literal {s:?}: {e}"))
}

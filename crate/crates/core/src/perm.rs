//! Permutations of `{1..n}` for `n <= 16`.
//!
//! Composition is right-acts-first: `a.compose(&b)` maps `i` to `a(b(i))`.
//! Points are 1-based in all text I/O and 0-based in storage.

use std::fmt;

use crate::error::{Error, Result};

/// Largest degree a [`Perm`] can carry.
pub const MAX_DEGREE: usize = 16;

/// A bijection of `{1..degree}`.
///
/// Images past `degree` are padded with the identity so that two
/// permutations of equal degree compare lexicographically by their image
/// arrays.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    degree: u8,
    images: [u8; MAX_DEGREE],
}

const PADDED_IDENTITY: [u8; MAX_DEGREE] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15];

impl Perm {
    pub fn identity(degree: usize) -> Result<Self> {
        check_degree(degree)?;
        Ok(Self {
            degree: degree as u8,
            images: PADDED_IDENTITY,
        })
    }

    /// Builds a permutation from 1-based images: `images[i - 1]` is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let degree = images.len();
        check_degree(degree)?;
        let mut out = PADDED_IDENTITY;
        let mut seen = [false; MAX_DEGREE];
        for (i, &img) in images.iter().enumerate() {
            if img == 0 || img > degree {
                return Err(Error::PointOutOfRange { point: img, degree });
            }
            if seen[img - 1] {
                return Err(Error::RepeatedPoint(img));
            }
            seen[img - 1] = true;
            out[i] = (img - 1) as u8;
        }
        Ok(Self {
            degree: degree as u8,
            images: out,
        })
    }

    /// The cycle `(points[0] points[1] ...)` on `degree` points (1-based).
    pub fn cycle(degree: usize, points: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=degree).collect();
        check_degree(degree)?;
        let mut seen = [false; MAX_DEGREE];
        for &pt in points {
            if pt == 0 || pt > degree {
                return Err(Error::PointOutOfRange { point: pt, degree });
            }
            if seen[pt - 1] {
                return Err(Error::RepeatedPoint(pt));
            }
            seen[pt - 1] = true;
        }
        for (i, &pt) in points.iter().enumerate() {
            images[pt - 1] = points[(i + 1) % points.len()];
        }
        Self::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// 1-based image array.
    pub fn images(&self) -> Vec<usize> {
        self.raw().iter().map(|&x| x as usize + 1).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.images[..self.degree as usize]
    }

    /// Image of a 1-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    pub fn compose(&self, right: &Perm) -> Result<Perm> {
        if self.degree != right.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: right.degree(),
            });
        }
        Ok(self.compose_unchecked(right))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, right: &Perm) -> Perm {
        let mut images = [0u8; MAX_DEGREE];
        for (slot, &r) in images.iter_mut().zip(right.images.iter()) {
            *slot = self.images[r as usize];
        }
        Perm {
            degree: self.degree,
            images,
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = [0u8; MAX_DEGREE];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u8;
        }
        Perm {
            degree: self.degree,
            images,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images == PADDED_IDENTITY
    }

    /// Disjoint cycles of length at least 2, each starting at its least point (1-based).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur + 1);
                cur = self.images[cur] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        // a k-cycle is a product of k - 1 transpositions
        let odd_cycles = self.cycles().iter().filter(|c| c.len() % 2 == 0).count();
        odd_cycles % 2 == 0
    }

    /// Least `m >= 1` with `self^m` the identity.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn pow(&self, mut exp: u64) -> Perm {
        let mut base = *self;
        let mut acc = Perm {
            degree: self.degree,
            images: PADDED_IDENTITY,
        };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// 1-based points moved by the permutation, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree())
            .filter(|&i| self.images[i] as usize != i)
            .map(|i| i + 1)
            .collect()
    }

    /// Bitmask of moved points, bit `i - 1` for point `i`.
    pub fn support_mask(&self) -> u32 {
        let mut mask = 0u32;
        for i in 0..self.degree() {
            if self.images[i] as usize != i {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// Packs the images into nibbles, first image in the high nibble. For
    /// equal degrees the key order is the lexicographic image order.
    #[inline]
    pub fn key(&self) -> u64 {
        self.images
            .iter()
            .fold(0u64, |acc, &x| (acc << 4) | x as u64)
    }

    #[cfg(test)]
    pub(crate) fn from_key(degree: usize, key: u64) -> Perm {
        let mut images = [0u8; MAX_DEGREE];
        for (i, slot) in images.iter_mut().enumerate() {
            *slot = ((key >> (4 * (MAX_DEGREE - 1 - i))) & 0xf) as u8;
        }
        Perm {
            degree: degree as u8,
            images,
        }
    }

    /// Re-embeds into a larger degree, shifting every point by `offset`.
    pub fn shifted(&self, offset: usize, new_degree: usize) -> Result<Perm> {
        check_degree(new_degree)?;
        if offset + self.degree() > new_degree {
            return Err(Error::PointOutOfRange {
                point: offset + self.degree(),
                degree: new_degree,
            });
        }
        let mut images = PADDED_IDENTITY;
        for i in 0..self.degree() {
            images[i + offset] = self.images[i] + offset as u8;
        }
        Ok(Perm {
            degree: new_degree as u8,
            images,
        })
    }

    /// Parses a product of disjoint cycles such as `"(1 2 3)(4 5)"` or `"()"`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm> {
        check_degree(degree)?;
        let malformed = |reason: &str| Error::Parse {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(malformed("empty permutation"));
        }
        let mut images = PADDED_IDENTITY;
        let mut seen = [false; MAX_DEGREE];
        let compact: String = trimmed.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "()" {
            return Perm::identity(degree);
        }
        let mut rest = trimmed;
        while !rest.is_empty() {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('(') {
                return Err(malformed("expected '('"));
            }
            let close = rest.find(')').ok_or_else(|| malformed("unclosed '('"))?;
            let body = &rest[1..close];
            if body.contains('(') {
                return Err(malformed("nested '('"));
            }
            let mut points = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let pt: usize = tok
                    .parse()
                    .map_err(|_| malformed(&format!("bad point '{tok}'")))?;
                if pt == 0 || pt > degree {
                    return Err(Error::PointOutOfRange { point: pt, degree });
                }
                if seen[pt - 1] {
                    return Err(Error::RepeatedPoint(pt));
                }
                seen[pt - 1] = true;
                points.push(pt - 1);
            }
            if points.len() < 2 {
                return Err(malformed("a cycle needs at least two points"));
            }
            for (i, &pt) in points.iter().enumerate() {
                images[pt] = points[(i + 1) % points.len()] as u8;
            }
            rest = &rest[close + 1..];
        }
        Ok(Perm {
            degree: degree as u8,
            images,
        })
    }

    /// Canonical cycle notation: cycles start at their least point and are
    /// sorted by it; identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut out = String::new();
        for c in cycles {
            out.push('(');
            let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push(')');
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree, self.to_cycle_string())
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::CapExceeded {
            what: "degree",
            limit: MAX_DEGREE as u64,
            actual: degree as u64,
        });
    }
    Ok(())
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Every permutation of `points` (1-based, distinct) acting on `degree` points, fixing the rest.
pub(crate) fn all_perms_on(degree: usize, points: &[usize]) -> Vec<Perm> {
    let k = points.len();
    let mut out = Vec::new();
    let mut arrangement: Vec<usize> = points.to_vec();
    // Heap's algorithm
    let mut c = vec![0usize; k];
    let emit = |arr: &[usize], out: &mut Vec<Perm>| {
        let mut images = PADDED_IDENTITY;
        for (src, &dst) in points.iter().zip(arr) {
            images[src - 1] = (dst - 1) as u8;
        }
        out.push(Perm {
            degree: degree as u8,
            images,
        });
    };
    emit(&arrangement, &mut out);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                arrangement.swap(0, i);
            } else {
                arrangement.swap(c[i], i);
            }
            emit(&arrangement, &mut out);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, n: usize) -> Perm {
        Perm::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn identity_images() {
        assert_eq!(Perm::identity(3).unwrap().images(), vec![1, 2, 3]);
        assert_eq!(Perm::identity(4).unwrap().inverse(), Perm::identity(4).unwrap());
    }

    #[test]
    fn compose_right_acts_first() {
        // (1 2)(2 3): 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1
        let got = p("(1 2)", 3).compose(&p("(2 3)", 3)).unwrap();
        assert_eq!(got.images(), vec![2, 3, 1]);
        assert_eq!(got, p("(1 2 3)", 3));
        assert!(p("(1 2)", 3).compose(&p("(1 2)", 3)).unwrap().is_identity());
        let g = p("(1 4)(2 5 3)", 5);
        assert_eq!(Perm::identity(5).unwrap().compose(&g).unwrap(), g);
        assert_eq!(g.compose(&Perm::identity(5).unwrap()).unwrap(), g);
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = p("(1 2)", 3).compose(&p("(1 2)", 4)).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("(1 2)", 3).images(), vec![2, 1, 3]);
        assert_eq!(p("()", 4), Perm::identity(4).unwrap());
        assert_eq!(p("(1 2 3)(4 5)", 5).images(), vec![2, 3, 1, 5, 4]);
        assert_eq!(p("  ( 1 , 2 ,3 ) (4  5) ", 5), p("(1 2 3)(4 5)", 5));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Perm::parse_cycles("(1 9)", 5),
            Err(Error::PointOutOfRange { point: 9, .. })
        ));
        assert!(matches!(
            Perm::parse_cycles("(1 2)(2 3)", 5),
            Err(Error::RepeatedPoint(2))
        ));
        for bad in ["(1 2", "1 2)", "((1 2))", "(1)", "", "(a b)", "()(1 2)"] {
            assert!(Perm::parse_cycles(bad, 5).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn parity_and_order() {
        assert!(!p("(1 2)", 3).is_even());
        assert!(p("(1 2 3)", 3).is_even());
        assert!(Perm::identity(3).unwrap().is_even());
        assert_eq!(p("(1 2 3)", 3).order(), 3);
        assert_eq!(p("(1 2)(3 4 5)", 5).order(), 6);
        assert_eq!(Perm::identity(2).unwrap().order(), 1);
    }

    #[test]
    fn key_round_trip_and_order() {
        let a = p("(1 3)", 4);
        let b = p("(2 4 3)", 4);
        assert_eq!(Perm::from_key(4, a.key()), a);
        assert_eq!(a.cmp(&b), a.key().cmp(&b.key()));
    }

    #[test]
    fn print_parse_exhaustive_small_degrees() {
        for n in 1..=5 {
            let all = all_perms_on(n, &(1..=n).collect::<Vec<_>>());
            let mut keys: Vec<u64> = all.iter().map(|g| g.key()).collect();
            keys.sort_unstable();
            keys.dedup();
            assert_eq!(keys.len(), (1..=n).product::<usize>());
            for g in all {
                assert_eq!(Perm::parse_cycles(&g.to_cycle_string(), n).unwrap(), g);
            }
        }
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((1..=n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(&v).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (Perm, Perm)> {
        (1usize..=7).prop_flat_map(|n| (arb_perm(n), arb_perm(n)))
    }

    proptest! {
        #[test]
        fn parity_is_a_homomorphism((a, b) in arb_pair()) {
            let ab = a.compose(&b).unwrap();
            prop_assert_eq!(ab.is_even(), a.is_even() == b.is_even());
        }

        #[test]
        fn inverse_cancels((a, _b) in arb_pair()) {
            let e = a.compose(&a.inverse()).unwrap();
            prop_assert!(e.is_identity());
            prop_assert_eq!(e.order(), 1);
            prop_assert!(a.pow(a.order()).is_identity());
        }

        #[test]
        fn print_then_parse((a, _b) in arb_pair()) {
            prop_assert_eq!(Perm::parse_cycles(&a.to_cycle_string(), a.degree()).unwrap(), a);
        }
    }
}

use std::fmt;

use crate::error::{Error, Result};

/// Largest degree a [`Perm`] can act on.
pub const MAX_DEGREE: usize = 8;

/// A permutation of `{0, .., n-1}` stored as its image table.
///
/// Products compose right to left: `(p * q)(x) = p(q(x))`, so in cycle
/// notation `(1 2 3)(1 2) = (1 3)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    len: u8,
    img: [u8; MAX_DEGREE],
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DEGREE, "degree {n} exceeds {MAX_DEGREE}");
        let mut img = [0u8; MAX_DEGREE];
        for (i, slot) in img.iter_mut().enumerate() {
            *slot = i as u8;
        }
        Perm { len: n as u8, img }
    }

    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::Input(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        let mut seen = [false; MAX_DEGREE];
        let mut img = Perm::identity(n).img;
        for (i, &x) in images.iter().enumerate() {
            if x >= n || seen[x] {
                return Err(Error::Input(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
            img[i] = x as u8;
        }
        Ok(Perm { len: n as u8, img })
    }

    /// Builds a permutation of degree `n` from 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &point) in cycle.iter().enumerate() {
                if point == 0 || point > n {
                    return Err(Error::Input(format!("point {point} outside 1..={n}")));
                }
                if touched[point - 1] {
                    return Err(Error::Input(format!("point {point} repeated in cycles")));
                }
                touched[point - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                if next == 0 || next > n {
                    return Err(Error::Input(format!("point {next} outside 1..={n}")));
                }
                images[point - 1] = next - 1;
            }
        }
        Perm::from_images(&images)
    }

    /// Parses cycle notation such as `(1 2 3)`, `(12)(34)` or `e`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "e" || text == "()" || text.is_empty() {
            return Ok(Perm::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Input(format!("bad cycle notation {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Input(format!("unclosed cycle in {text:?}")))?;
            let body = &open[..close];
            // Digits may be written with or without separators when n < 10.
            let points: Vec<usize> = if body.contains([' ', ',']) {
                body.split([' ', ','])
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|e| Error::Input(format!("{s:?}: {e}"))))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Input(format!("bad point {c:?} in {text:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            cycles.push(points);
            rest = open[close + 1..].trim_start();
        }
        Perm::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.len as usize
    }

    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    /// `self * rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        assert_eq!(self.len, rhs.len, "degree mismatch");
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[i] = self.img[rhs.img[i] as usize];
        }
        out
    }

    pub fn inverse(&self) -> Perm {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[self.img[i] as usize] = i as u8;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.img[i] as usize == i)
    }

    /// Disjoint cycles of length > 1, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// All permutations of degree `n` in lexicographic order of image tables.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm::from_images(&current).expect("valid permutation"));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("e");
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

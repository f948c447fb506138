use alloc::vec::Vec;

use crate::{Error, Result};

/// Four contiguous regions of a ring, in the order `A, C₁, B, C₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub n_sites: usize,
    pub a: Vec<usize>,
    pub c1: Vec<usize>,
    pub b: Vec<usize>,
    pub c2: Vec<usize>,
}

impl Partition {
    /// Regions of the given lengths starting at site 0; `C₂` takes the remaining sites.
    pub fn with_sizes(n_sites: usize, a: usize, c1: usize, b: usize) -> Result<Self> {
        if a + c1 + b > n_sites {
            return Err(Error::InvalidRegion(alloc::format!(
                "regions of {a} + {c1} + {b} sites do not fit {n_sites} sites"
            )));
        }
        let mut next = 0;
        let mut take = |len: usize| {
            let r: Vec<usize> = (next..next + len).collect();
            next += len;
            r
        };
        let (ra, rc1, rb) = (take(a), take(c1), take(b));
        let rc2 = take(n_sites - a - c1 - b);
        Ok(Self { n_sites, a: ra, c1: rc1, b: rb, c2: rc2 })
    }

    /// Partition for a depth-`D` circuit: `|A| = |B| = 2D + 2`, the separators
    /// split the rest evenly with `C₂` taking an odd remainder.
    pub fn for_depth(n_sites: usize, depth: usize) -> Result<Self> {
        let side = 2 * depth + 2;
        let rest = n_sites.saturating_sub(2 * side);
        let p = Self::with_sizes(n_sites, side.min(n_sites), rest / 2, side.min(n_sites.saturating_sub(side)))?;
        p.validate(depth)?;
        Ok(p)
    }

    /// The same partition shifted `k` sites around the ring.
    pub fn rotated(&self, k: usize) -> Self {
        let n = self.n_sites;
        let shift = |r: &Vec<usize>| r.iter().map(|&s| (s + k) % n).collect();
        Self { n_sites: n, a: shift(&self.a), c1: shift(&self.c1), b: shift(&self.b), c2: shift(&self.c2) }
    }

    /// Every region has at least `2D + 2` sites.
    pub fn validate(&self, depth: usize) -> Result<()> {
        let required = 2 * depth + 2;
        for r in [&self.a, &self.c1, &self.b, &self.c2] {
            if r.len() < required {
                return Err(Error::PartitionTooSmall { required, found: r.len() });
            }
        }
        Ok(())
    }

    /// `A ∪ B`, ordered by site.
    pub fn ab(&self) -> Vec<usize> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    /// `C′ = C₁ ∪ C₂`.
    pub fn c(&self) -> Vec<usize> {
        self.c1.iter().chain(&self.c2).copied().collect()
    }

    /// `4D + 4 ≤ |A ∪ B| ≤ 8D`.
    pub fn satisfies_size_window(&self, depth: usize) -> bool {
        let ab = self.a.len() + self.b.len();
        4 * depth + 4 <= ab && ab <= 8 * depth
    }

    pub(crate) fn region_of(&self, site: usize) -> Region {
        if self.a.contains(&site) {
            Region::A
        } else if self.b.contains(&site) {
            Region::B
        } else if self.c1.contains(&site) {
            Region::C1
        } else {
            Region::C2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Region {
    A,
    C1,
    B,
    C2,
}

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported truncation; monomials are single-word bitsets.
pub const MAX_GENERATORS: usize = 64;

/// Number of generators `N` of the truncated algebra `E_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Truncation(usize);

impl Truncation {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_GENERATORS).contains(&n) {
            Ok(Self(n))
        } else {
            Err(Error::InvalidTruncation(n))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn check_index(self, index: usize) -> Result<()> {
        if (1..=self.0).contains(&index) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, n: self.0 })
        }
    }

    pub fn ensure_same(self, other: Truncation) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::TruncationMismatch {
                left: self.0,
                right: other.0,
            })
        }
    }

    /// Mask with one bit for each generator `e_1..e_N`.
    pub fn full_mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }

    pub fn contains(self, m: Monomial) -> bool {
        m.0 & !self.full_mask() == 0
    }

    /// Every basis monomial of length at most `max_len`, shortest first and
    /// lexicographic within a length.
    pub fn monomials_up_to(self, max_len: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        for len in 0..=max_len.min(self.0) {
            let mut layer = Vec::new();
            subsets_of_size(self.0, len, 0, 0, &mut layer);
            layer.sort();
            out.extend(layer);
        }
        out
    }
}

fn subsets_of_size(n: usize, len: usize, start: usize, acc: u64, out: &mut Vec<Monomial>) {
    if len == 0 {
        out.push(Monomial(acc));
        return;
    }
    for bit in start..=(n - len) {
        subsets_of_size(n, len - 1, bit + 1, acc | (1 << bit), out);
    }
}

/// A basis word `e_{i1}...e_{ik}` with `i1 < ... < ik`; generator `e_i`
/// occupies bit `i - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn generator(index: usize) -> Result<Self> {
        if (1..=MAX_GENERATORS).contains(&index) {
            Ok(Self(1 << (index - 1)))
        } else {
            Err(Error::IndexOutOfRange {
                index,
                n: MAX_GENERATORS,
            })
        }
    }

    /// Builds a monomial from strictly increasing indices.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        let mut last = 0;
        for &i in indices {
            if i <= last {
                return Err(Error::NonCanonicalMonomial(indices.to_vec()));
            }
            bits |= Self::generator(i)?.0;
            last = i;
        }
        Ok(Self(bits))
    }

    /// Product `e_1 e_2 ... e_k`.
    pub fn prefix(k: usize) -> Self {
        if k >= 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << k) - 1)
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn is_even(self) -> bool {
        self.len().is_multiple_of(2)
    }

    pub fn contains(self, index: usize) -> bool {
        (1..=MAX_GENERATORS).contains(&index) && self.0 & (1 << (index - 1)) != 0
    }

    pub fn disjoint(self, other: Monomial) -> bool {
        self.0 & other.0 == 0
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                tz + 1
            })
        })
    }

    /// Signed product `self * other`; `None` when the factors share a
    /// generator. The sign is the parity of the number of pairs `(i, j)`
    /// with `i` in `self`, `j` in `other` and `i > j`.
    #[inline]
    pub fn times(self, other: Monomial) -> Option<(bool, Monomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut crossings = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            // generators of `self` strictly above this one
            crossings += (self.0 >> bit).count_ones();
            rest &= rest - 1;
        }
        Some((crossings % 2 == 1, Monomial(self.0 | other.0)))
    }
}

impl Ord for Monomial {
    /// Lexicographic order of the index sequences: `1 < e1 < e1e2 < e2`.
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        let above = !((low << 1).wrapping_sub(1));
        if self.0 & low != 0 {
            // `other` either stops here (prefix) or continues with a larger index.
            if other.0 & above == 0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if self.0 & above == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for i in self.indices() {
            write!(f, "e{i}")?;
        }
        Ok(())
    }
}

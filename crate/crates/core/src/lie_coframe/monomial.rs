use core::cmp::Ordering;
use core::fmt;

/// Number of generators: `dr` (index 0) and `theta1..theta6`.
pub const GENERATORS: usize = 7;
pub const DR: usize = 0;
/// The vertical direction of the isotropy U(1).
pub const VERTICAL: usize = 6;

/// A wedge product of distinct generators stored as a bitmask, always in
/// increasing index order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u8);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub const fn from_bits(bits: u8) -> Self {
        Monomial(bits & 0x7f)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn generator(i: usize) -> Self {
        assert!(i < GENERATORS);
        Monomial(1 << i)
    }

    pub const fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..GENERATORS).filter(move |&i| self.contains(i))
    }

    /// Normalise an arbitrary word of generators. Returns the sign of the
    /// sorting permutation, or `None` when an index repeats.
    pub fn from_word(word: &[usize]) -> Option<(f64, Monomial)> {
        let mut bits = 0u8;
        let mut inversions = 0usize;
        for &i in word {
            assert!(i < GENERATORS, "generator index {i} out of range");
            if bits & (1 << i) != 0 {
                return None;
            }
            inversions += (bits >> (i + 1)).count_ones() as usize;
            bits |= 1 << i;
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        Some((sign, Monomial(bits)))
    }

    /// `self ^ other` as a sign times a monomial, `None` if they overlap.
    pub fn wedge(self, other: Monomial) -> Option<(f64, Monomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0usize;
        for b in other.indices() {
            inversions += (self.0 >> (b + 1)).count_ones() as usize;
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        Some((sign, Monomial(self.0 | other.0)))
    }

    /// Complement inside `{dr, theta1..theta5}`.
    pub const fn horizontal_complement(self) -> Monomial {
        Monomial(!self.0 & 0x3f)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut a = self.indices();
            let mut b = other.indices();
            loop {
                match (a.next(), b.next()) {
                    (Some(x), Some(y)) if x != y => return x.cmp(&y),
                    (Some(_), Some(_)) => continue,
                    _ => return Ordering::Equal,
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for i in self.indices() {
            if !first {
                f.write_str("^")?;
            }
            first = false;
            if i == DR {
                f.write_str("dr")?;
            } else {
                write!(f, "θ{i}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn word_normalisation() {
        assert_eq!(Monomial::from_word(&[3, 2]), Some((-1.0, Monomial(0b1100))));
        assert_eq!(Monomial::from_word(&[2, 2]), None);
        let (s, m) = Monomial::from_word(&[5, 1, 3]).unwrap();
        assert_eq!(m.indices().collect::<alloc::vec::Vec<_>>(), [1, 3, 5]);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn wedge_sign_matches_word() {
        for a in 0u8..128 {
            for b in 0u8..128 {
                let (ma, mb) = (Monomial(a), Monomial(b));
                let word: alloc::vec::Vec<usize> = ma.indices().chain(mb.indices()).collect();
                assert_eq!(ma.wedge(mb), Monomial::from_word(&word));
            }
        }
    }

    #[test]
    fn display_and_order() {
        let (_, m) = Monomial::from_word(&[0, 2, 3]).unwrap();
        assert_eq!(m.to_string(), "dr^θ2^θ3");
        let (_, a) = Monomial::from_word(&[1, 6]).unwrap();
        let (_, b) = Monomial::from_word(&[2, 3]).unwrap();
        assert!(a < b);
        assert!(Monomial::generator(5) < a);
    }
}

// SPDX-License-Identifier: Apache-2.0
use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{PrimInt, Unsigned};
use serde::Serialize;

use crate::error::{Error, Result};

/// Unsigned integer type usable for lengths in semilinear sets.
pub trait Natural:
    PrimInt + Unsigned + Integer + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn to_u128(self) -> u128;
    /// `None` if `v` does not fit.
    fn from_u128(v: u128) -> Option<Self>;
}

macro_rules! impl_natural {
    ($($t:ty),*) => {$(
        impl Natural for $t {
            fn to_u128(self) -> u128 {
                self as u128
            }
            fn from_u128(v: u128) -> Option<Self> {
                <$t>::try_from(v).ok()
            }
        }
    )*};
}

impl_natural!(u8, u16, u32, u64, u128, usize);

/// `{offset + period·k : k ≥ 0}` with `period ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Progression<N = u64> {
    offset: N,
    period: N,
}

impl<N: Natural> Progression<N> {
    pub fn new(offset: N, period: N) -> Result<Self> {
        if period.is_zero() {
            return Err(Error::Invalid("progression period must be at least 1".into()));
        }
        Ok(Progression { offset, period })
    }

    pub fn offset(&self) -> N {
        self.offset
    }

    pub fn period(&self) -> N {
        self.period
    }

    pub fn contains(&self, n: N) -> bool {
        n >= self.offset && ((n - self.offset) % self.period).is_zero()
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Progression<N>) -> bool {
        other.contains(self.offset) && (self.period % other.period).is_zero()
    }

    /// Intersection by the Chinese remainder theorem, or `None` if disjoint.
    ///
    /// Panics if the combined period does not fit in `N`.
    pub fn intersect(&self, other: &Progression<N>) -> Option<Progression<N>> {
        let (t1, p1) = (self.offset.to_u128() as i128, self.period.to_u128() as i128);
        let (t2, p2) = (other.offset.to_u128() as i128, other.period.to_u128() as i128);
        let eg = p1.extended_gcd(&p2);
        let g = eg.gcd;
        if (t2 - t1) % g != 0 {
            return None;
        }
        let l = p1 / g * p2;
        // x = t1 + p1·k with p1·k ≡ t2 − t1 (mod p2)
        let m = p2 / g;
        let k = ((t2 - t1) / g % m * (eg.x % m)).rem_euclid(m);
        let lo = t1.max(t2);
        let x = lo + (t1 + p1 * k - lo).rem_euclid(l);
        let offset = N::from_u128(x as u128).expect("offset fits");
        let period = N::from_u128(l as u128).expect("period overflow in progression intersection");
        Some(Progression { offset, period })
    }
}

impl<N: Natural> fmt::Display for Progression<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}k", self.offset, self.period)
    }
}

/// A finite set of naturals together with finitely many progressions.
///
/// The representation is kept canonical: no progression contains another, no
/// finite element lies in a progression, and both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SemilinearSet<N = u64> {
    finite: Vec<N>,
    progressions: Vec<Progression<N>>,
}

impl<N: Natural> Default for SemilinearSet<N> {
    fn default() -> Self {
        SemilinearSet::empty()
    }
}

impl<N: Natural> SemilinearSet<N> {
    pub fn empty() -> Self {
        SemilinearSet {
            finite: Vec::new(),
            progressions: Vec::new(),
        }
    }

    pub fn new(finite: impl IntoIterator<Item = N>, progressions: impl IntoIterator<Item = Progression<N>>) -> Self {
        let mut progs: Vec<Progression<N>> = progressions.into_iter().collect();
        progs.sort();
        progs.dedup();
        let mut kept: Vec<Progression<N>> = Vec::with_capacity(progs.len());
        for (i, p) in progs.iter().enumerate() {
            // after dedup, mutual inclusion cannot happen
            if !progs.iter().enumerate().any(|(j, q)| j != i && p.is_subset_of(q)) {
                kept.push(*p);
            }
        }
        let mut finite: Vec<N> = finite
            .into_iter()
            .filter(|&n| !kept.iter().any(|p| p.contains(n)))
            .collect();
        finite.sort_unstable();
        finite.dedup();
        SemilinearSet {
            finite,
            progressions: kept,
        }
    }

    pub fn finite_part(&self) -> &[N] {
        &self.finite
    }

    pub fn progressions(&self) -> &[Progression<N>] {
        &self.progressions
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.progressions.is_empty()
    }

    pub fn contains(&self, n: N) -> bool {
        self.finite.binary_search(&n).is_ok() || self.progressions.iter().any(|p| p.contains(n))
    }

    pub fn min(&self) -> Option<N> {
        let f = self.finite.first().copied();
        let p = self.progressions.iter().map(|p| p.offset).min();
        match (f, p) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Least common multiple of all periods (1 if there are none).
    pub fn period_lcm(&self) -> N {
        self.progressions
            .iter()
            .fold(N::one(), |acc, p| acc.lcm(&p.period))
    }

    pub fn intersect(&self, other: &SemilinearSet<N>) -> SemilinearSet<N> {
        let finite = self
            .finite
            .iter()
            .copied()
            .filter(|&n| other.contains(n))
            .chain(other.finite.iter().copied().filter(|&n| self.contains(n)));
        let progs: Vec<Progression<N>> = self
            .progressions
            .iter()
            .flat_map(|p| other.progressions.iter().filter_map(move |q| p.intersect(q)))
            .collect();
        SemilinearSet::new(finite.collect::<Vec<_>>(), progs)
    }

    pub fn union(&self, other: &SemilinearSet<N>) -> SemilinearSet<N> {
        SemilinearSet::new(
            self.finite.iter().chain(&other.finite).copied().collect::<Vec<_>>(),
            self.progressions
                .iter()
                .chain(&other.progressions)
                .copied()
                .collect::<Vec<_>>(),
        )
    }
}

impl<N: Natural> fmt::Display for SemilinearSet<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self
            .finite
            .iter()
            .map(|n| n.to_string())
            .chain(self.progressions.iter().map(|p| p.to_string()))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn semilinear_member<N: Natural>(s: &SemilinearSet<N>, n: N) -> bool {
    s.contains(n)
}

pub fn semilinear_intersect<N: Natural>(x: &SemilinearSet<N>, y: &SemilinearSet<N>) -> SemilinearSet<N> {
    x.intersect(y)
}

/// If `extras ∪ ⋃ progs` contains a full period window starting at `probe`
/// inside the region where membership is periodic, the union is cofinite and
/// the progressions alone cover every integer from `T_max = max offset` on;
/// `T_max` is returned. Otherwise `None`.
pub fn progression_threshold<N: Natural>(progs: &[Progression<N>], extras: &[N], probe: N) -> Option<N> {
    let t_max = progs.iter().map(|p| p.offset).max()?;
    let lcm = progs.iter().fold(N::one(), |acc, p| acc.lcm(&p.period));
    let after_extras = extras
        .iter()
        .map(|&e| e + N::one())
        .max()
        .unwrap_or_else(N::zero);
    let start = probe.max(t_max).max(after_extras);
    let covered = |n: N| extras.contains(&n) || progs.iter().any(|p| p.contains(n));
    let mut n = start;
    while n <= start + lcm {
        if !covered(n) {
            return None;
        }
        n = n + N::one();
    }
    Some(t_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prog(t: u64, p: u64) -> Progression {
        Progression::new(t, p).unwrap()
    }

    fn set(finite: &[u64], progs: &[(u64, u64)]) -> SemilinearSet {
        SemilinearSet::new(finite.to_vec(), progs.iter().map(|&(t, p)| prog(t, p)).collect::<Vec<_>>())
    }

    #[test]
    fn zero_period_is_rejected() {
        assert!(Progression::<u64>::new(3, 0).is_err());
    }

    #[test]
    fn membership() {
        let s = set(&[], &[(1, 2)]);
        assert!(s.contains(5));
        assert!(!s.contains(4));
        assert!(set(&[0, 3], &[]).contains(3));
    }

    #[test]
    fn crt_examples() {
        assert_eq!(prog(1, 2).intersect(&prog(3, 4)), Some(prog(3, 4)));
        assert_eq!(prog(0, 2).intersect(&prog(1, 2)), None);
        assert_eq!(prog(2, 3).intersect(&prog(2, 5)), Some(prog(2, 15)));
        for (a, b) in [((1, 2), (3, 4)), ((2, 3), (2, 5)), ((7, 6), (1, 4)), ((0, 5), (13, 3))] {
            let (x, y) = (prog(a.0, a.1), prog(b.0, b.1));
            let z = x.intersect(&y);
            for n in 0..200 {
                let expected = x.contains(n) && y.contains(n);
                assert_eq!(z.is_some_and(|z| z.contains(n)), expected, "{x} ∩ {y} at {n}");
            }
        }
    }

    #[test]
    fn canonical_form_drops_subsumed_parts() {
        let s = set(&[3, 4, 5], &[(1, 2), (3, 4), (1, 2)]);
        assert_eq!(s.progressions(), &[prog(1, 2)]);
        assert_eq!(s.finite_part(), &[4]);
        assert_eq!(s.min(), Some(1));
    }

    #[test]
    fn generic_over_width() {
        let a = Progression::<u8>::new(2, 3).unwrap();
        let b = Progression::<u8>::new(2, 5).unwrap();
        assert_eq!(a.intersect(&b), Some(Progression::new(2, 15).unwrap()));
        let s: SemilinearSet<u32> = SemilinearSet::new([0u32], [Progression::new(4u32, 2).unwrap()]);
        assert!(s.contains(10));
    }

    #[test]
    fn thresholds() {
        assert_eq!(progression_threshold(&[prog(0, 2), prog(3, 2)], &[], 0), Some(3));
        assert_eq!(progression_threshold(&[prog(0, 2)], &[], 0), None);
        assert_eq!(progression_threshold(&[prog(5, 1)], &[], 0), Some(5));
        assert_eq!(progression_threshold::<u64>(&[], &[1, 2], 0), None);
    }

    #[test]
    fn display() {
        assert_eq!(set(&[0, 3], &[(5, 2)]).to_string(), "{0, 3, 5+2k}");
        assert_eq!(SemilinearSet::<u64>::empty().to_string(), "{}");
    }
}

//! Symbolic base elements and their exact containment test.
//!
//! Every base element of a representable filter is a Boolean combination of
//! cofinite sets `ω∖[0,k]` and factorial-interval sets
//! `F_{A,k} = ∪_{n∈A} [n!−n+k, n!+n−k]`. Past the block of some `N0` the
//! intervals around distinct `n!` are pairwise disjoint, each leaf behaves
//! like a symmetric interval around `n!` whose presence depends only on the
//! residue pattern of `n`, and containment becomes a finite comparison. Below
//! that block, membership is piecewise constant between interval endpoints,
//! so a sweep over breakpoints is exact.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::omega::{classes_cover, intersect_class_unions, OmegaSet, ResidueClass};

const FACT_TABLE: usize = 128;

/// Largest `n` whose factorial is materialised as a witness point.
const SAMPLE_LIMIT: u64 = 4096;

fn table() -> &'static [BigUint] {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACT_TABLE);
        let mut acc = BigUint::from(1u32);
        t.push(acc.clone());
        for n in 1..FACT_TABLE as u64 {
            acc *= n;
            t.push(acc.clone());
        }
        t
    })
}

/// `n!`
pub fn factorial(n: u64) -> BigUint {
    let t = table();
    if (n as usize) < t.len() {
        return t[n as usize].clone();
    }
    let mut acc = t[t.len() - 1].clone();
    for k in t.len() as u64..=n {
        acc *= k;
    }
    acc
}

const SMALL_FACT: [u64; 21] = {
    let mut t = [1u64; 21];
    let mut i = 1;
    while i < 21 {
        t[i] = t[i - 1] * i as u64;
        i += 1;
    }
    t
};

/// Membership of `m` in `F_{A,level}`.
pub fn factorial_member_u64(set: &OmegaSet, level: u64, m: u64) -> bool {
    let mut n = level;
    while n <= 20 {
        let f = SMALL_FACT[n as usize];
        // n!−n is non-decreasing from n = 1 on
        let lo = f - n + level;
        if lo > m {
            if n >= 1 {
                return false;
            }
        } else if m <= f + n - level && set.contains_u64(n) {
            return true;
        }
        n += 1;
    }
    false
}

/// Membership of `m` in `F_{A,level}` for arbitrary naturals.
pub fn factorial_member(set: &OmegaSet, level: u64, m: &BigUint) -> bool {
    if let Some(small) = m.to_u64() {
        if small < u64::MAX / 2 {
            return factorial_member_u64(set, level, small);
        }
    }
    let mut n = level;
    loop {
        let f = factorial(n);
        let lo = &f - n + level;
        if &lo > m {
            if n >= 1 {
                return false;
            }
        } else if m <= &(&f + n - level) && set.contains(&BigUint::from(n)) {
            return true;
        }
        n += 1;
    }
}

/// A base element as a Boolean expression over cofinite and factorial sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseSet {
    All,
    Nothing,
    /// `ω ∖ [0, k]`
    Above(u64),
    /// `F_{set, level}`
    Factorial { set: OmegaSet, level: u64 },
    Union(Vec<BaseSet>),
    Inter(Vec<BaseSet>),
}

/// Outcome of [`BaseSet::subset_of`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Containment {
    Subset,
    /// `witness` lies in the left set but not the right one. A `robust`
    /// failure comes from the residue pattern of the far blocks and so
    /// persists when every factorial level on the left is raised.
    NotSubset { witness: Option<BigUint>, robust: bool },
}

impl Containment {
    pub fn holds(&self) -> bool {
        matches!(self, Containment::Subset)
    }

    pub fn is_robust_failure(&self) -> bool {
        matches!(self, Containment::NotSubset { robust: true, .. })
    }
}

/// Shape of an element inside one far block `[n!−n, n!+n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    Empty,
    /// `[n!−n+k, n!+n−k]`
    Trim(u64),
    Full,
}

impl Block {
    fn rank(self) -> u8 {
        match self {
            Block::Empty => 0,
            Block::Trim(_) => 1,
            Block::Full => 2,
        }
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Block::Trim(a), Block::Trim(b)) => b.cmp(a),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl BaseSet {
    pub fn factorial(set: OmegaSet, level: u64) -> Self {
        BaseSet::Factorial { set, level }
    }

    pub fn union(parts: impl IntoIterator<Item = BaseSet>) -> Self {
        BaseSet::Union(parts.into_iter().collect())
    }

    pub fn inter(parts: impl IntoIterator<Item = BaseSet>) -> Self {
        BaseSet::Inter(parts.into_iter().collect())
    }

    pub fn contains(&self, m: &BigUint) -> bool {
        match self {
            BaseSet::All => true,
            BaseSet::Nothing => false,
            BaseSet::Above(k) => m > &BigUint::from(*k),
            BaseSet::Factorial { set, level } => factorial_member(set, *level, m),
            BaseSet::Union(xs) => xs.iter().any(|x| x.contains(m)),
            BaseSet::Inter(xs) => xs.iter().all(|x| x.contains(m)),
        }
    }

    pub fn contains_u64(&self, m: u64) -> bool {
        match self {
            BaseSet::All => true,
            BaseSet::Nothing => false,
            BaseSet::Above(k) => m > *k,
            BaseSet::Factorial { set, level } => factorial_member_u64(set, *level, m),
            BaseSet::Union(xs) => xs.iter().any(|x| x.contains_u64(m)),
            BaseSet::Inter(xs) => xs.iter().all(|x| x.contains_u64(m)),
        }
    }

    fn visit<'a>(&'a self, out: &mut Vec<&'a BaseSet>) {
        match self {
            BaseSet::Union(xs) | BaseSet::Inter(xs) => xs.iter().for_each(|x| x.visit(out)),
            leaf => out.push(leaf),
        }
    }

    fn leaves(&self) -> Vec<&BaseSet> {
        let mut out = Vec::new();
        self.visit(&mut out);
        out
    }

    /// Gap behaviour between far blocks: only cofinite leaves reach there.
    fn in_gaps(&self) -> bool {
        match self {
            BaseSet::All | BaseSet::Above(_) => true,
            BaseSet::Nothing | BaseSet::Factorial { .. } => false,
            BaseSet::Union(xs) => xs.iter().any(BaseSet::in_gaps),
            BaseSet::Inter(xs) => xs.iter().all(BaseSet::in_gaps),
        }
    }

    fn block(&self, sets: &[&OmegaSet], pattern: u64) -> Block {
        match self {
            BaseSet::All | BaseSet::Above(_) => Block::Full,
            BaseSet::Nothing => Block::Empty,
            BaseSet::Factorial { set, level } => {
                let i = sets.iter().position(|s| *s == set).expect("leaf registered");
                if pattern & (1 << i) != 0 {
                    Block::Trim(*level)
                } else {
                    Block::Empty
                }
            }
            BaseSet::Union(xs) => xs.iter().map(|x| x.block(sets, pattern)).max().unwrap_or(Block::Empty),
            BaseSet::Inter(xs) => xs.iter().map(|x| x.block(sets, pattern)).min().unwrap_or(Block::Full),
        }
    }

    /// Exact decision of `self ⊆ other`.
    pub fn subset_of(&self, other: &BaseSet) -> Containment {
        let frame = Frame::new(&[self, other]);

        if self.in_gaps() && !other.in_gaps() {
            let n = frame.n0;
            return Containment::NotSubset { witness: Some(factorial(n) + n + 1u64), robust: true };
        }
        for (pattern, sample) in frame.patterns() {
            let a = self.block(&frame.sets, pattern);
            let b = other.block(&frame.sets, pattern);
            if a.rank() > b.rank() {
                let witness = sample.map(|n| match b {
                    Block::Empty => factorial(n),
                    _ => factorial(n) + n + 1u64,
                });
                return Containment::NotSubset { witness, robust: true };
            }
            if let (Block::Trim(ka), Block::Trim(kb)) = (a, b) {
                if ka < kb {
                    let witness = sample.map(|n| factorial(n) - n + ka);
                    return Containment::NotSubset { witness, robust: false };
                }
            }
        }
        for x in frame.breakpoints(&[self, other]) {
            if self.contains(&x) && !other.contains(&x) {
                return Containment::NotSubset { witness: Some(x), robust: false };
            }
        }
        Containment::Subset
    }

    pub fn is_empty(&self) -> bool {
        self.subset_of(&BaseSet::Nothing).holds()
    }

    /// Whether the set has infinitely many points.
    pub fn is_infinite(&self) -> bool {
        let frame = Frame::new(&[self]);
        self.in_gaps()
            || frame
                .patterns()
                .into_iter()
                .any(|(p, _)| self.block(&frame.sets, p) != Block::Empty)
    }

    /// Least element, if any, searched up to `limit`.
    pub fn first_member_below(&self, limit: u64) -> Option<u64> {
        (0..limit).find(|&m| self.contains_u64(m))
    }
}

struct Frame<'a> {
    sets: Vec<&'a OmegaSet>,
    n0: u64,
}

impl<'a> Frame<'a> {
    fn new(exprs: &[&'a BaseSet]) -> Self {
        let mut sets: Vec<&OmegaSet> = Vec::new();
        let mut n0 = 5u64;
        for e in exprs {
            for leaf in e.leaves() {
                match leaf {
                    BaseSet::Above(k) => n0 = n0.max(k + 1),
                    BaseSet::Factorial { set, level } => {
                        n0 = n0.max(level + 1);
                        let bound = set.tail_bound().to_u64().expect("descriptor bound fits u64");
                        n0 = n0.max(bound);
                        if !sets.contains(&set) {
                            sets.push(set);
                        }
                    }
                    _ => {}
                }
            }
        }
        assert!(sets.len() < 20, "too many distinct leaf sets in one comparison");
        Frame { sets, n0 }
    }

    /// Residue patterns realised by infinitely many `n`, each with a sample
    /// `n0 ≤ n ≤ SAMPLE_LIMIT` when one turns up quickly.
    fn patterns(&self) -> Vec<(u64, Option<u64>)> {
        let classes: Vec<Vec<ResidueClass>> = self.sets.iter().map(|s| s.classes()).collect();
        let mut out = Vec::new();
        for pattern in 0..(1u64 << self.sets.len()) {
            let mut inside = vec![ResidueClass::all()];
            let mut outside = Vec::new();
            for (i, cs) in classes.iter().enumerate() {
                if pattern & (1 << i) != 0 {
                    inside = intersect_class_unions(&inside, cs);
                } else {
                    outside.extend(cs.iter().cloned());
                }
            }
            let Some(class) = inside.iter().find(|c| !classes_cover(c, &outside)) else {
                continue;
            };
            let sample = self.sample(class, pattern);
            out.push((pattern, sample));
        }
        out
    }

    fn sample(&self, class: &ResidueClass, pattern: u64) -> Option<u64> {
        let mut n = class.first_at_least(&BigUint::from(self.n0));
        for _ in 0..4096 {
            let small = n.to_u64().filter(|&n| n <= SAMPLE_LIMIT)?;
            let fits = self
                .sets
                .iter()
                .enumerate()
                .all(|(i, s)| s.contains_u64(small) == (pattern & (1 << i) != 0));
            if fits {
                return Some(small);
            }
            n += &class.modulus;
        }
        None
    }

    /// Points where membership may change below the far blocks.
    fn breakpoints(&self, exprs: &[&BaseSet]) -> Vec<BigUint> {
        let mut pts = vec![BigUint::from(0u32)];
        for e in exprs {
            for leaf in e.leaves() {
                match leaf {
                    BaseSet::Above(k) => pts.push(BigUint::from(k + 1)),
                    BaseSet::Factorial { set, level } => {
                        for n in *level..self.n0 {
                            if set.contains_u64(n) {
                                let f = factorial(n);
                                pts.push(&f - n + level);
                                pts.push(&f + n - level + 1u64);
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fa(set: OmegaSet, k: u64) -> BaseSet {
        BaseSet::factorial(set, k)
    }

    /// Brute-force interval enumeration.
    fn naive_member(set: &OmegaSet, k: u64, m: u64) -> bool {
        (0..=20u64).any(|n| {
            let f = SMALL_FACT[n as usize] as i128;
            let (lo, hi) = (f - n as i128 + k as i128, f + n as i128 - k as i128);
            set.contains_u64(n) && lo <= m as i128 && (m as i128) <= hi
        })
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial(21).to_string(), "51090942171709440000");
        assert_eq!(factorial(130), factorial(129) * 130u32);
    }

    #[test]
    fn membership_examples() {
        let omega = OmegaSet::omega();
        assert!(factorial_member_u64(&omega, 0, 6));
        assert!(factorial_member_u64(&omega, 2, 23));
        assert!(!factorial_member_u64(&OmegaSet::evens(), 0, 6));
        assert!(factorial_member_u64(&omega, 0, 0));
        assert!(factorial_member_u64(&omega, 0, 1));
    }

    #[test]
    fn membership_matches_enumeration_small() {
        for set in [OmegaSet::omega(), OmegaSet::evens(), OmegaSet::odds(), OmegaSet::multiples(4u32)] {
            for k in 0..=6 {
                for m in 0..5000 {
                    assert_eq!(factorial_member_u64(&set, k, m), naive_member(&set, k, m), "{set} {k} {m}");
                }
            }
        }
    }

    #[test]
    fn big_membership() {
        let f25 = factorial(25);
        let omega = OmegaSet::omega();
        assert!(factorial_member(&omega, 3, &(&f25 + 22u32)));
        assert!(!factorial_member(&omega, 3, &(&f25 + 23u32)));
        assert!(!factorial_member(&OmegaSet::evens(), 0, &f25));
    }

    #[test]
    fn containment_between_factorial_sets() {
        let evens = OmegaSet::evens();
        let m4 = OmegaSet::multiples(4u32);
        assert!(fa(m4.clone(), 0).subset_of(&fa(evens.clone(), 0)).holds());
        let c = fa(evens.clone(), 0).subset_of(&fa(m4.clone(), 0));
        assert!(c.is_robust_failure());
        // a deeper level on the left is still a subset
        assert!(fa(evens.clone(), 3).subset_of(&fa(evens.clone(), 1)).holds());
        let c = fa(evens.clone(), 1).subset_of(&fa(evens.clone(), 3));
        assert!(!c.holds() && !c.is_robust_failure());
    }

    #[test]
    fn collisions_below_the_far_blocks() {
        let evens = OmegaSet::evens();
        let odds = OmegaSet::odds();
        // F_{evens,1} and F_{odds,1} share the point 1
        let meet1 = BaseSet::inter([fa(evens.clone(), 1), fa(odds.clone(), 1)]);
        assert!(!meet1.is_empty());
        assert!(meet1.contains_u64(1));
        let meet2 = BaseSet::inter([fa(evens, 2), fa(odds, 2)]);
        assert!(meet2.is_empty());
        assert!(!meet2.is_infinite());
    }

    #[test]
    fn cofinite_leaves() {
        let omega = OmegaSet::omega();
        assert!(!BaseSet::Above(3).subset_of(&fa(omega.clone(), 0)).holds());
        assert!(fa(omega.clone(), 6).subset_of(&BaseSet::Above(5)).holds());
        assert!(fa(omega.clone(), 5).subset_of(&BaseSet::Above(5)).holds());
        assert!(!fa(omega.clone(), 2).subset_of(&BaseSet::Above(5)).holds());
        assert!(BaseSet::Above(7).subset_of(&BaseSet::union([BaseSet::Above(9), fa(omega, 0)])).holds());
    }

    #[test]
    fn union_of_halves_is_whole() {
        let u = BaseSet::union([fa(OmegaSet::evens(), 2), fa(OmegaSet::odds(), 2)]);
        let w = fa(OmegaSet::omega(), 2);
        assert!(u.subset_of(&w).holds());
        assert!(w.subset_of(&u).holds());
    }

    #[test]
    fn witnesses_are_genuine() {
        let a = fa(OmegaSet::omega(), 0);
        let b = fa(OmegaSet::multiples(3u32), 0);
        match a.subset_of(&b) {
            Containment::NotSubset { witness: Some(w), .. } => {
                assert!(a.contains(&w));
                assert!(!b.contains(&w));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }
}

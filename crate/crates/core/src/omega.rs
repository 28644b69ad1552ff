//! Decidable descriptors for subsets of ω.
//!
//! An [`OmegaSet`] is a finite union of arithmetic progressions, adjusted by
//! finite include and exclude sets. The class is closed under union,
//! intersection and integer shifts, and every almost-inclusion question
//! between two descriptors reduces to residue arithmetic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OmegaError {
    #[error("progression step must be at least 1")]
    ZeroStep,
    #[error("{what} must be at least {min}")]
    TooSmall { what: &'static str, min: u64 },
}

/// `{start + step·i : i ∈ ω}` with `step ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Progression {
    start: BigUint,
    step: BigUint,
}

impl Progression {
    pub fn new(start: impl Into<BigUint>, step: impl Into<BigUint>) -> Result<Self, OmegaError> {
        let step = step.into();
        if step.is_zero() {
            return Err(OmegaError::ZeroStep);
        }
        Ok(Progression { start: start.into(), step })
    }

    pub fn start(&self) -> &BigUint {
        &self.start
    }

    pub fn step(&self) -> &BigUint {
        &self.step
    }

    pub fn contains(&self, m: &BigUint) -> bool {
        m >= &self.start && ((m - &self.start) % &self.step).is_zero()
    }

    #[inline]
    pub fn contains_u64(&self, m: u64) -> bool {
        let Some(start) = self.start.to_u64() else {
            return false;
        };
        if m < start {
            return false;
        }
        match self.step.to_u64() {
            Some(step) => (m - start).is_multiple_of(step),
            // a step beyond u64 can only hit its start below u64::MAX
            None => m == start,
        }
    }

    /// The residue class this progression eventually agrees with.
    pub fn class(&self) -> ResidueClass {
        ResidueClass {
            residue: &self.start % &self.step,
            modulus: self.step.clone(),
        }
    }

    fn covers(&self, other: &Progression) -> bool {
        (&other.step % &self.step).is_zero() && self.contains(&other.start)
    }
}

/// `{x ∈ ω : x ≡ residue (mod modulus)}` with `residue < modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueClass {
    pub residue: BigUint,
    pub modulus: BigUint,
}

impl ResidueClass {
    pub fn new(residue: impl Into<BigUint>, modulus: impl Into<BigUint>) -> Self {
        let modulus = modulus.into();
        assert!(!modulus.is_zero(), "residue class modulus must be positive");
        ResidueClass { residue: residue.into() % &modulus, modulus }
    }

    pub fn all() -> Self {
        ResidueClass::new(0u32, 1u32)
    }

    pub fn contains(&self, m: &BigUint) -> bool {
        m % &self.modulus == self.residue
    }

    pub fn is_subclass_of(&self, other: &ResidueClass) -> bool {
        (&self.modulus % &other.modulus).is_zero() && &self.residue % &other.modulus == other.residue
    }

    /// Chinese remaindering; `None` when the congruences are incompatible.
    pub fn intersect(&self, other: &ResidueClass) -> Option<ResidueClass> {
        let m1 = BigInt::from(self.modulus.clone());
        let m2 = BigInt::from(other.modulus.clone());
        let r1 = BigInt::from(self.residue.clone());
        let r2 = BigInt::from(other.residue.clone());
        let eg = m1.extended_gcd(&m2);
        let g = eg.gcd;
        let diff = &r2 - &r1;
        if !(&diff % &g).is_zero() {
            return None;
        }
        let lcm = &m1 / &g * &m2;
        // x = r1 + m1 * t, with m1 * t ≡ diff (mod m2)
        let t = (&diff / &g * &eg.x).mod_floor(&(&m2 / &g));
        let x = (r1 + m1 * t).mod_floor(&lcm);
        Some(ResidueClass {
            residue: x.to_biguint().expect("non-negative after mod_floor"),
            modulus: lcm.to_biguint().expect("positive lcm"),
        })
    }

    /// The `p` classes modulo `p·modulus` that partition this one.
    fn split(&self, p: &BigUint) -> Vec<ResidueClass> {
        let modulus = &self.modulus * p;
        let count = p.to_u64().expect("split factor fits a machine word");
        (0..count)
            .map(|i| ResidueClass {
                residue: &self.residue + &self.modulus * BigUint::from(i),
                modulus: modulus.clone(),
            })
            .collect()
    }

    /// The least element that is at least `from`.
    pub fn first_at_least(&self, from: &BigUint) -> BigUint {
        if from <= &self.residue {
            return self.residue.clone();
        }
        let gap = from - &self.residue;
        let steps = gap.div_ceil(&self.modulus);
        &self.residue + steps * &self.modulus
    }
}

/// Pairwise intersections of two unions of classes.
pub fn intersect_class_unions(a: &[ResidueClass], b: &[ResidueClass]) -> Vec<ResidueClass> {
    let mut out: Vec<ResidueClass> = a
        .iter()
        .flat_map(|x| b.iter().filter_map(move |y| x.intersect(y)))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn smallest_prime_factor(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let mut d = 3u64;
    while d < (1 << 20) {
        let bd = BigUint::from(d);
        if &bd * &bd > *n {
            return n.clone();
        }
        if (n % &bd).is_zero() {
            return bd;
        }
        d += 2;
    }
    // no small factor; split by the whole ratio
    n.clone()
}

/// Whether the union of `cover` contains every element of `class`.
pub fn classes_cover(class: &ResidueClass, cover: &[ResidueClass]) -> bool {
    let relevant: Vec<ResidueClass> = cover.iter().filter_map(|q| class.intersect(q)).collect();
    if relevant.is_empty() {
        return false;
    }
    if relevant.iter().any(|q| q.modulus == class.modulus) {
        return true;
    }
    // density: Σ class.modulus / q.modulus < 1 rules out a cover
    let ratios: Vec<BigUint> = relevant.iter().map(|q| &q.modulus / &class.modulus).collect();
    let lcm = ratios.iter().fold(BigUint::one(), |acc, r| acc.lcm(r));
    let mass: BigUint = ratios.iter().map(|r| &lcm / r).sum();
    if mass < lcm {
        return false;
    }
    let smallest = ratios.iter().min().expect("non-empty");
    let p = smallest_prime_factor(smallest);
    class.split(&p).iter().all(|sub| classes_cover(sub, &relevant))
}

/// How two descriptors relate modulo finite sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum SetRelation {
    /// `s =* t`
    EqualStar,
    /// `s ⊂* t` and `t ∖ s` infinite
    AlmostSubset,
    /// `t ⊂* s` and `s ∖ t` infinite
    AlmostSuperset,
    /// `s ∩ t` finite, neither almost contained in the other
    AlmostDisjoint,
    /// `s ∩ t`, `s ∖ t`, `t ∖ s` all infinite
    Overlapping,
}

/// Result of [`OmegaSet::relate`]: the relation together with every
/// difference or intersection that turned out finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub relation: SetRelation,
    pub left_minus_right: Option<BTreeSet<BigUint>>,
    pub right_minus_left: Option<BTreeSet<BigUint>>,
    pub intersection: Option<BTreeSet<BigUint>>,
}

/// `(∪ progressions ∪ include) ∖ exclude`, kept in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaSet {
    progressions: Vec<Progression>,
    include: BTreeSet<BigUint>,
    exclude: BTreeSet<BigUint>,
}

impl OmegaSet {
    pub fn new(
        progressions: Vec<Progression>,
        include: impl IntoIterator<Item = BigUint>,
        exclude: impl IntoIterator<Item = BigUint>,
    ) -> Self {
        let include: BTreeSet<BigUint> = include.into_iter().collect();
        let exclude: BTreeSet<BigUint> = exclude.into_iter().collect();
        let specials: BTreeMap<BigUint, bool> = include
            .iter()
            .chain(exclude.iter())
            .map(|x| {
                let member = !exclude.contains(x)
                    && (include.contains(x) || progressions.iter().any(|p| p.contains(x)));
                (x.clone(), member)
            })
            .collect();
        Self::canonical(progressions, specials)
    }

    fn canonical(progressions: Vec<Progression>, specials: BTreeMap<BigUint, bool>) -> Self {
        let (mut progressions, specials) = match periodic_form(&progressions, &specials) {
            Some(form) => form,
            None => (progressions, specials),
        };
        loop {
            progressions.sort();
            progressions.dedup();
            let before = progressions.clone();

            // drop progressions covered by a single other one
            let mut kept: Vec<Progression> = Vec::with_capacity(progressions.len());
            for (i, p) in progressions.iter().enumerate() {
                let covered = progressions
                    .iter()
                    .enumerate()
                    .any(|(j, q)| i != j && q.covers(p) && !(p.covers(q) && j > i));
                if !covered {
                    kept.push(p.clone());
                }
            }
            progressions = kept;

            // merge complete sibling families into their parent
            if let Some(merged) = merge_siblings(&progressions) {
                progressions = merged;
                continue;
            }

            // move starts so that include/exclude stay minimal
            let member = |x: &BigUint, ps: &[Progression]| -> bool {
                match specials.get(x) {
                    Some(&m) => m,
                    None => ps.iter().any(|p| p.contains(x)),
                }
            };
            let mut changed = false;
            for i in 0..progressions.len() {
                loop {
                    let p = &progressions[i];
                    if !member(&p.start, &progressions) {
                        let next = &p.start + &p.step;
                        progressions[i].start = next;
                        changed = true;
                        continue;
                    }
                    if p.start >= p.step {
                        let prev = &p.start - &p.step;
                        if member(&prev, &progressions) {
                            progressions[i].start = prev;
                            changed = true;
                            continue;
                        }
                    }
                    break;
                }
            }
            progressions.sort();
            progressions.dedup();
            if !changed && progressions == before {
                break;
            }
        }

        let in_prog = |x: &BigUint| progressions.iter().any(|p| p.contains(x));
        let include = specials
            .iter()
            .filter(|(x, &m)| m && !in_prog(x))
            .map(|(x, _)| x.clone())
            .collect();
        let exclude = specials
            .iter()
            .filter(|(x, &m)| !m && in_prog(x))
            .map(|(x, _)| x.clone())
            .collect();
        OmegaSet { progressions, include, exclude }
    }

    pub fn empty() -> Self {
        OmegaSet { progressions: vec![], include: BTreeSet::new(), exclude: BTreeSet::new() }
    }

    /// All of ω.
    pub fn omega() -> Self {
        Self::progression(0u32, 1u32)
    }

    /// `{start + step·i}`; panics on `step = 0`.
    pub fn progression(start: impl Into<BigUint>, step: impl Into<BigUint>) -> Self {
        let p = Progression::new(start, step).expect("step must be positive");
        Self::new(vec![p], [], [])
    }

    /// `[from, ∞)`.
    pub fn from_point(from: impl Into<BigUint>) -> Self {
        Self::progression(from, 1u32)
    }

    pub fn residue(r: impl Into<BigUint>, modulus: impl Into<BigUint>) -> Self {
        let c = ResidueClass::new(r, modulus);
        Self::progression(c.residue, c.modulus)
    }

    pub fn multiples(step: impl Into<BigUint>) -> Self {
        Self::progression(0u32, step)
    }

    pub fn evens() -> Self {
        Self::multiples(2u32)
    }

    pub fn odds() -> Self {
        Self::residue(1u32, 2u32)
    }

    pub fn finite(points: impl IntoIterator<Item = BigUint>) -> Self {
        Self::new(vec![], points, [])
    }

    pub fn progressions(&self) -> &[Progression] {
        &self.progressions
    }

    pub fn include(&self) -> &BTreeSet<BigUint> {
        &self.include
    }

    pub fn exclude(&self) -> &BTreeSet<BigUint> {
        &self.exclude
    }

    pub fn contains(&self, m: &BigUint) -> bool {
        if self.exclude.contains(m) {
            return false;
        }
        self.include.contains(m) || self.progressions.iter().any(|p| p.contains(m))
    }

    #[inline]
    pub fn contains_u64(&self, m: u64) -> bool {
        if self.include.is_empty() && self.exclude.is_empty() {
            return self.progressions.iter().any(|p| p.contains_u64(m));
        }
        self.contains(&BigUint::from(m))
    }

    pub fn is_infinite(&self) -> bool {
        !self.progressions.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty() && self.include.is_empty()
    }

    /// Number of elements, `None` when infinite.
    pub fn size(&self) -> Option<usize> {
        if self.is_infinite() {
            None
        } else {
            Some(self.include.len())
        }
    }

    /// The residue classes the set agrees with up to a finite set.
    pub fn classes(&self) -> Vec<ResidueClass> {
        let mut cs: Vec<ResidueClass> = self.progressions.iter().map(Progression::class).collect();
        cs.sort();
        cs.dedup();
        cs
    }

    /// A bound past which membership is decided by [`Self::classes`] alone.
    pub fn tail_bound(&self) -> BigUint {
        self.progressions
            .iter()
            .filter(|p| p.start >= p.step)
            .map(|p| &p.start)
            .chain(self.include.iter())
            .chain(self.exclude.iter())
            .max()
            .map(|m| m + 1u32)
            .unwrap_or_default()
    }

    fn special_points<'a>(&'a self, other: &'a OmegaSet) -> impl Iterator<Item = &'a BigUint> {
        self.include
            .iter()
            .chain(self.exclude.iter())
            .chain(other.include.iter())
            .chain(other.exclude.iter())
    }

    pub fn union(&self, other: &OmegaSet) -> OmegaSet {
        let specials = self
            .special_points(other)
            .map(|x| (x.clone(), self.contains(x) || other.contains(x)))
            .collect();
        let progressions = self.progressions.iter().chain(&other.progressions).cloned().collect();
        Self::canonical(progressions, specials)
    }

    pub fn intersect(&self, other: &OmegaSet) -> OmegaSet {
        let specials = self
            .special_points(other)
            .map(|x| (x.clone(), self.contains(x) && other.contains(x)))
            .collect();
        let mut progressions = Vec::new();
        for p in &self.progressions {
            for q in &other.progressions {
                if let Some(c) = p.class().intersect(&q.class()) {
                    let from = (&p.start).max(&q.start);
                    let start = c.first_at_least(from);
                    progressions.push(Progression { start, step: c.modulus });
                }
            }
        }
        Self::canonical(progressions, specials)
    }

    /// `n + s = {n + x : x ∈ s} ∩ ω`.
    pub fn shift(&self, n: i64) -> OmegaSet {
        let delta = BigInt::from(n);
        let move_point = |x: &BigUint| -> Option<BigUint> {
            let y = BigInt::from(x.clone()) + &delta;
            (y.sign() != Sign::Minus).then(|| y.to_biguint().expect("non-negative"))
        };
        let progressions = self
            .progressions
            .iter()
            .map(|p| {
                let s = BigInt::from(p.start.clone()) + &delta;
                let start = if s.sign() == Sign::Minus {
                    let step = BigInt::from(p.step.clone());
                    let k = (-&s).div_ceil(&step);
                    (s + k * step).to_biguint().expect("non-negative")
                } else {
                    s.to_biguint().expect("non-negative")
                };
                Progression { start, step: p.step.clone() }
            })
            .collect();
        let include: Vec<BigUint> = self.include.iter().filter_map(&move_point).collect();
        let exclude: Vec<BigUint> = self.exclude.iter().filter_map(&move_point).collect();
        Self::new(progressions, include, exclude)
    }

    /// `self ⊂* other`
    pub fn almost_subset_of(&self, other: &OmegaSet) -> bool {
        let cover = other.classes();
        self.classes().iter().all(|c| classes_cover(c, &cover))
    }

    /// Whether `self ∩ other` is infinite.
    pub fn meets_infinitely(&self, other: &OmegaSet) -> bool {
        !intersect_class_unions(&self.classes(), &other.classes()).is_empty()
    }

    fn finite_part(&self, other: &OmegaSet, keep: impl Fn(bool, bool) -> bool) -> BTreeSet<BigUint> {
        let bound = self.tail_bound().max(other.tail_bound());
        let limit = bound.to_u64().expect("descriptor bound fits a machine word");
        (0..limit)
            .map(BigUint::from)
            .filter(|x| keep(self.contains(x), other.contains(x)))
            .collect()
    }

    pub fn relate(&self, other: &OmegaSet) -> RelationReport {
        let sub = self.almost_subset_of(other);
        let sup = other.almost_subset_of(self);
        let meets = self.meets_infinitely(other);
        let relation = match (sub, sup) {
            (true, true) => SetRelation::EqualStar,
            (true, false) => SetRelation::AlmostSubset,
            (false, true) => SetRelation::AlmostSuperset,
            (false, false) if !meets => SetRelation::AlmostDisjoint,
            (false, false) => SetRelation::Overlapping,
        };
        RelationReport {
            relation,
            left_minus_right: sub.then(|| self.finite_part(other, |a, b| a && !b)),
            right_minus_left: sup.then(|| self.finite_part(other, |a, b| b && !a)),
            intersection: (!meets).then(|| self.finite_part(other, |a, b| a && b)),
        }
    }

    /// Elements below `limit`, ascending.
    pub fn elements_below(&self, limit: u64) -> Vec<u64> {
        (0..limit).filter(|&m| self.contains_u64(m)).collect()
    }
}

/// Largest period and prefix handled by [`periodic_form`].
const PERIODIC_LIMIT: u64 = 1 << 12;

/// Rewrites a set with a small period and prefix as a fixed cover of its
/// residue pattern, recording the finitely many disagreements as special
/// points. Equal sets yield equal forms.
fn periodic_form(
    progressions: &[Progression],
    specials: &BTreeMap<BigUint, bool>,
) -> Option<(Vec<Progression>, BTreeMap<BigUint, bool>)> {
    let mut period = 1u64;
    let mut prefix = 0u64;
    let mut small = Vec::with_capacity(progressions.len());
    for p in progressions {
        let (start, step) = (p.start.to_u64()?, p.step.to_u64()?);
        period = period.lcm(&step);
        prefix = prefix.max(start);
        if period > PERIODIC_LIMIT || prefix > PERIODIC_LIMIT {
            return None;
        }
        small.push((start, step));
    }
    let member = |x: u64| -> bool {
        match specials.get(&BigUint::from(x)) {
            Some(&m) => m,
            None => small.iter().any(|&(s, d)| x >= s && (x - s).is_multiple_of(d)),
        }
    };
    // residue pattern past every start and special point
    let last_special = match specials.keys().next_back() {
        Some(x) => x.to_u64()? + 1,
        None => 0,
    };
    let tail = prefix.max(last_special);
    if tail > PERIODIC_LIMIT * 16 {
        return None;
    }
    let pattern_of = |r: u64| small.iter().any(|&(s, d)| s % d == r % d);
    let pattern: Vec<bool> = (0..period).map(pattern_of).collect();

    let mut reduced = period;
    for q in 2..=period {
        while reduced.is_multiple_of(q) && (0..period).all(|r| pattern[r as usize] == pattern[((r + reduced / q) % period) as usize]) {
            reduced /= q;
        }
    }

    let mut covered = vec![false; reduced as usize];
    let mut classes = Vec::new();
    for d in (1..=reduced).filter(|d| reduced.is_multiple_of(*d)) {
        for r in 0..d {
            let members: Vec<u64> = (r..reduced).step_by(d as usize).collect();
            if members.iter().all(|&x| pattern[x as usize]) && members.iter().any(|&x| !covered[x as usize]) {
                members.iter().for_each(|&x| covered[x as usize] = true);
                classes.push(Progression { start: BigUint::from(r), step: BigUint::from(d) });
            }
        }
    }
    let mut out = specials.clone();
    for x in 0..tail {
        let by_classes = classes.iter().any(|p| p.contains_u64(x));
        if member(x) != by_classes {
            out.insert(BigUint::from(x), member(x));
        }
    }
    Some((classes, out))
}

fn merge_siblings(progressions: &[Progression]) -> Option<Vec<Progression>> {
    let set: BTreeSet<&Progression> = progressions.iter().collect();
    let max_p = progressions.len() as u64;
    for p in progressions {
        for prime in (2..=max_p).filter(|&q| (2..q).all(|d| q % d != 0)) {
            let bp = BigUint::from(prime);
            if !(&p.step % &bp).is_zero() {
                continue;
            }
            let parent_step = &p.step / &bp;
            let family: Vec<Progression> = (0..prime)
                .map(|k| Progression {
                    start: &p.start + &parent_step * BigUint::from(k),
                    step: p.step.clone(),
                })
                .collect();
            if family.iter().all(|q| set.contains(q)) {
                let mut out: Vec<Progression> =
                    progressions.iter().filter(|q| !family.contains(q)).cloned().collect();
                out.push(Progression { start: p.start.clone(), step: parent_step });
                return Some(out);
            }
        }
    }
    None
}

/// `m` pairwise disjoint infinite sets: the residue classes modulo `m`.
pub fn ad_family(m: u64) -> Result<Vec<OmegaSet>, OmegaError> {
    if m == 0 {
        return Err(OmegaError::TooSmall { what: "family size", min: 1 });
    }
    Ok((0..m).map(|r| OmegaSet::residue(r, m)).collect())
}

/// `T_j = multiples of base^j` for `j = 1..=m`, a ⊂*-decreasing chain.
pub fn tower(m: u64, base: u64) -> Result<Vec<OmegaSet>, OmegaError> {
    if m == 0 {
        return Err(OmegaError::TooSmall { what: "tower length", min: 1 });
    }
    if base < 2 {
        return Err(OmegaError::TooSmall { what: "tower base", min: 2 });
    }
    let b = BigUint::from(base);
    let mut power = BigUint::one();
    Ok((0..m)
        .map(|_| {
            power *= &b;
            OmegaSet::multiples(power.clone())
        })
        .collect())
}

impl fmt::Display for OmegaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .progressions
            .iter()
            .map(|p| format!("{}+{}i", p.start, p.step))
            .collect();
        if !self.include.is_empty() {
            let pts: Vec<String> = self.include.iter().map(ToString::to_string).collect();
            parts.push(format!("{{{}}}", pts.join(",")));
        }
        let body = if parts.is_empty() { "∅".to_string() } else { parts.join(" ∪ ") };
        if self.exclude.is_empty() {
            write!(f, "{body}")
        } else {
            let pts: Vec<String> = self.exclude.iter().map(ToString::to_string).collect();
            write!(f, "({body}) ∖ {{{}}}", pts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn set(ps: &[(u64, u64)], inc: &[u64], exc: &[u64]) -> OmegaSet {
        OmegaSet::new(
            ps.iter().map(|&(s, t)| Progression::new(s, t).unwrap()).collect(),
            inc.iter().map(|&x| b(x)),
            exc.iter().map(|&x| b(x)),
        )
    }

    #[test]
    fn membership_examples() {
        let m3 = OmegaSet::multiples(3u32);
        assert!(m3.contains_u64(9));
        assert!(!m3.contains_u64(10));
        assert!(!set(&[(0, 3)], &[], &[0]).contains_u64(0));
        assert!(set(&[(0, 2)], &[7], &[]).contains_u64(7));
    }

    #[test]
    fn zero_step_rejected() {
        assert_eq!(Progression::new(3u32, 0u32), Err(OmegaError::ZeroStep));
    }

    #[test]
    fn union_and_intersection_examples() {
        assert_eq!(OmegaSet::evens().union(&OmegaSet::odds()), OmegaSet::omega());
        assert_eq!(OmegaSet::evens().intersect(&OmegaSet::multiples(3u32)), OmegaSet::multiples(6u32));
        let e = OmegaSet::residue(1u32, 4u32).intersect(&OmegaSet::residue(3u32, 4u32));
        assert!(e.is_empty());
        assert_eq!(e.size(), Some(0));
    }

    #[test]
    fn canonical_forms() {
        // exclude on the start raises the start
        assert_eq!(set(&[(0, 3)], &[], &[0]), set(&[(3, 3)], &[], &[]));
        // include just below the start lowers it
        assert_eq!(set(&[(4, 2)], &[0, 2], &[]), OmegaSet::evens());
        // a covered progression disappears
        assert_eq!(set(&[(0, 2), (4, 4)], &[], &[]), OmegaSet::evens());
        // three siblings mod 3 collapse
        assert_eq!(set(&[(0, 3), (1, 3), (2, 3)], &[], &[]), OmegaSet::omega());
        // include ∩ exclude resolves to exclusion
        assert_eq!(set(&[], &[5], &[5]), OmegaSet::empty());
    }

    #[test]
    fn relate_examples() {
        let evens = OmegaSet::evens();
        let trimmed = set(&[(0, 2)], &[], &[0, 2]);
        let r = evens.relate(&trimmed);
        assert_eq!(r.relation, SetRelation::EqualStar);
        assert_eq!(r.left_minus_right, Some([b(0), b(2)].into_iter().collect()));
        assert_eq!(r.right_minus_left, Some(BTreeSet::new()));

        let r = OmegaSet::multiples(4u32).relate(&evens);
        assert_eq!(r.relation, SetRelation::AlmostSubset);
        assert_eq!(r.right_minus_left, None);

        let r = evens.relate(&OmegaSet::odds());
        assert_eq!(r.relation, SetRelation::AlmostDisjoint);
        assert_eq!(r.intersection, Some(BTreeSet::new()));

        assert_eq!(evens.relate(&OmegaSet::multiples(3u32)).relation, SetRelation::Overlapping);
    }

    #[test]
    fn relate_with_multi_class_cover() {
        // evens = {0 mod 4} ∪ {2 mod 4} only as a union
        let parts = set(&[(0, 4), (2, 4)], &[], &[]);
        assert_eq!(parts, OmegaSet::evens());
        let cover = set(&[(0, 3), (1, 6), (5, 6)], &[], &[]);
        // 0 mod 3 ∪ 1 mod 6 ∪ 5 mod 6 misses 2 mod 6 and 4 mod 6
        assert!(!OmegaSet::evens().almost_subset_of(&cover));
        let full = set(&[(0, 2), (0, 3), (1, 6), (5, 6), (3, 6)], &[], &[]);
        assert!(OmegaSet::omega().almost_subset_of(&full));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(OmegaSet::evens().shift(1), OmegaSet::odds());
        assert_eq!(OmegaSet::multiples(3u32).shift(-3), OmegaSet::multiples(3u32));
        let fin = OmegaSet::finite([b(0), b(1), b(2)]);
        assert!(fin.shift(-5).is_empty());
        assert_eq!(fin.shift(-1), OmegaSet::finite([b(0), b(1)]));
    }

    #[test]
    fn ad_family_examples() {
        assert_eq!(ad_family(2).unwrap(), vec![OmegaSet::evens(), OmegaSet::odds()]);
        assert_eq!(ad_family(1).unwrap(), vec![OmegaSet::omega()]);
        let fam = ad_family(4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(fam[i].relate(&fam[j]).relation, SetRelation::AlmostDisjoint);
                }
            }
        }
        assert!(ad_family(0).is_err());
    }

    #[test]
    fn tower_examples() {
        let t = tower(3, 2).unwrap();
        assert_eq!(t[2], OmegaSet::multiples(8u32));
        assert_eq!(t[1].relate(&t[0]).relation, SetRelation::AlmostSubset);
        assert_eq!(tower(1, 5).unwrap(), vec![OmegaSet::multiples(5u32)]);
        let t = tower(10, 2).unwrap();
        for w in t.windows(2) {
            let r = w[0].relate(&w[1]);
            assert_eq!(r.relation, SetRelation::AlmostSuperset);
            assert_eq!(r.left_minus_right, None, "difference must be infinite");
        }
        assert!(tower(3, 1).is_err());
    }

    #[test]
    fn huge_moduli() {
        let t = tower(130, 2).unwrap();
        assert!(t[129].almost_subset_of(&t[128]));
        assert!(!t[128].almost_subset_of(&t[129]));
        assert!(t[129].contains(&BigUint::from(0u32)));
        assert!(!t[129].contains_u64(1 << 40));
    }

    #[test]
    fn display() {
        assert_eq!(set(&[(0, 2)], &[7], &[4]).to_string(), "(0+2i ∪ {7}) ∖ {4}");
        assert_eq!(OmegaSet::empty().to_string(), "∅");
    }
}

//! Finitely represented shift-invariant filters on ω.
//!
//! Each filter comes with a countable indexed base. Base elements are
//! materialised as [`BaseSet`] expressions, which makes membership, shift
//! witnesses and containment between base elements exact.

mod baseset;
mod order;

pub use baseset::{factorial, factorial_member, factorial_member_u64, BaseSet, Containment};
pub use order::{
    compare_filters, join_filters, meet_filters, Certificate, Escape, JoinOutcome, OrderVerdict,
    RefinementMap, Verdict,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::omega::OmegaSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error("base index {index} is not valid for a {kind} filter")]
    InvalidIndex { index: String, kind: &'static str },
    #[error("set {position} of the base is finite")]
    NotInfinite { position: usize },
    #[error("base sets {left} and {right} have finite intersection")]
    ImproperBase { left: usize, right: usize },
    #[error("a filter base needs at least one set")]
    EmptyBase,
    #[error("closing the base under intersections exceeds {limit} sets")]
    BaseTooLarge { limit: usize },
    #[error("the join is improper (the top element 1)")]
    ImproperJoin,
    #[error("properness of the join is undecided within bound {bound}")]
    Undecided { bound: u64 },
    #[error("cannot read base index `{0}`")]
    IndexSyntax(String),
}

/// Properness evidence stored with a composite join: every pair of base
/// shapes was shown to meet in an infinite set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinCertificate {
    pub shape_pairs: usize,
}

/// A shift-invariant filter with a finitely described base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SiFilter {
    /// Cofinite sets; base `ω∖[0,k]`.
    Frechet,
    /// `F_A`, generated by `F_{A,k}`; the set is infinite.
    Factorial(OmegaSet),
    /// `F_𝒢` for the free filter generated by the listed sets, closed under
    /// intersection; base `F_{G_i,k}`.
    FilterInduced(Vec<OmegaSet>),
    /// Family intersection; base elements are pairwise unions.
    Meet(Box<SiFilter>, Box<SiFilter>),
    /// Generated filter of the union; base elements are pairwise intersections.
    Join(Box<SiFilter>, Box<SiFilter>, JoinCertificate),
}

/// Index into a filter's base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseIndex {
    Level(u64),
    Generator { generator: usize, level: u64 },
    Pair(Box<BaseIndex>, Box<BaseIndex>),
}

/// Character of a filter. Every representable base here is countable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharacterTag {
    Countable,
}

const CLOSURE_LIMIT: usize = 64;

impl BaseIndex {
    pub fn pair(a: BaseIndex, b: BaseIndex) -> Self {
        BaseIndex::Pair(Box::new(a), Box::new(b))
    }

    /// The same shape with every level replaced by `level`.
    pub fn at_level(&self, level: u64) -> BaseIndex {
        match self {
            BaseIndex::Level(_) => BaseIndex::Level(level),
            BaseIndex::Generator { generator, .. } => BaseIndex::Generator { generator: *generator, level },
            BaseIndex::Pair(a, b) => BaseIndex::pair(a.at_level(level), b.at_level(level)),
        }
    }

    pub fn max_level(&self) -> u64 {
        match self {
            BaseIndex::Level(k) | BaseIndex::Generator { level: k, .. } => *k,
            BaseIndex::Pair(a, b) => a.max_level().max(b.max_level()),
        }
    }

    /// The same index with every level raised by `d`.
    pub fn raised(&self, d: u64) -> BaseIndex {
        self.map_levels(&|k| k + d)
    }

    fn map_levels(&self, f: &impl Fn(u64) -> u64) -> BaseIndex {
        match self {
            BaseIndex::Level(k) => BaseIndex::Level(f(*k)),
            BaseIndex::Generator { generator, level } => {
                BaseIndex::Generator { generator: *generator, level: f(*level) }
            }
            BaseIndex::Pair(a, b) => BaseIndex::pair(a.map_levels(f), b.map_levels(f)),
        }
    }
}

impl fmt::Display for BaseIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseIndex::Level(k) => write!(f, "{k}"),
            BaseIndex::Generator { generator, level } => write!(f, "g{generator}:{level}"),
            BaseIndex::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// Reads the [`fmt::Display`] form: `k`, `g<i>:<k>` or `(<index>,<index>)`.
impl FromStr for BaseIndex {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FilterError::IndexSyntax(s.to_string());
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let mut depth = 0i32;
            let split = inner.char_indices().find(|&(_, c)| {
                match c {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                c == ',' && depth == 0
            });
            let (i, _) = split.ok_or_else(err)?;
            let a = inner[..i].parse().map_err(|_| err())?;
            let b = inner[i + 1..].parse().map_err(|_| err())?;
            return Ok(BaseIndex::pair(a, b));
        }
        if let Some(rest) = t.strip_prefix('g') {
            let (g, k) = rest.split_once(':').ok_or_else(err)?;
            return Ok(BaseIndex::Generator {
                generator: g.parse().map_err(|_| err())?,
                level: k.parse().map_err(|_| err())?,
            });
        }
        t.parse().map(BaseIndex::Level).map_err(|_| err())
    }
}

impl SiFilter {
    /// `F_A`; rejects finite `A`.
    pub fn factorial(set: OmegaSet) -> Result<Self, FilterError> {
        if !set.is_infinite() {
            return Err(FilterError::NotInfinite { position: 0 });
        }
        Ok(SiFilter::Factorial(set))
    }

    /// `F_𝒢` for the filter generated by `base`.
    pub fn from_filter_base(base: Vec<OmegaSet>) -> Result<Self, FilterError> {
        if base.is_empty() {
            return Err(FilterError::EmptyBase);
        }
        if let Some(position) = base.iter().position(|s| !s.is_infinite()) {
            return Err(FilterError::NotInfinite { position });
        }
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                if !base[i].meets_infinitely(&base[j]) {
                    return Err(FilterError::ImproperBase { left: i, right: j });
                }
            }
        }
        let mut closed: Vec<OmegaSet> = Vec::new();
        for s in base {
            if !closed.contains(&s) {
                closed.push(s);
            }
        }
        let mut i = 0;
        while i < closed.len() {
            for j in 0..i {
                let meet = closed[i].intersect(&closed[j]);
                if !meet.is_infinite() {
                    return Err(FilterError::ImproperBase { left: j, right: i });
                }
                if !closed.contains(&meet) {
                    if closed.len() >= CLOSURE_LIMIT {
                        return Err(FilterError::BaseTooLarge { limit: CLOSURE_LIMIT });
                    }
                    closed.push(meet);
                }
            }
            i += 1;
        }
        Ok(SiFilter::FilterInduced(closed))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SiFilter::Frechet => "frechet",
            SiFilter::Factorial(_) => "factorial",
            SiFilter::FilterInduced(_) => "filter-induced",
            SiFilter::Meet(..) => "meet",
            SiFilter::Join(..) => "join",
        }
    }

    /// Every index shape at level 0, in a fixed order.
    pub fn index_shapes(&self) -> Vec<BaseIndex> {
        match self {
            SiFilter::Frechet | SiFilter::Factorial(_) => vec![BaseIndex::Level(0)],
            SiFilter::FilterInduced(gs) => {
                (0..gs.len()).map(|generator| BaseIndex::Generator { generator, level: 0 }).collect()
            }
            SiFilter::Meet(a, b) | SiFilter::Join(a, b, _) => {
                let bs = b.index_shapes();
                a.index_shapes()
                    .into_iter()
                    .flat_map(|x| bs.iter().map(move |y| BaseIndex::pair(x.clone(), y.clone())))
                    .collect()
            }
        }
    }

    pub fn validate_index(&self, idx: &BaseIndex) -> Result<(), FilterError> {
        let ok = match (self, idx) {
            (SiFilter::Frechet | SiFilter::Factorial(_), BaseIndex::Level(_)) => true,
            (SiFilter::FilterInduced(gs), BaseIndex::Generator { generator, .. }) => *generator < gs.len(),
            (SiFilter::Meet(a, b) | SiFilter::Join(a, b, _), BaseIndex::Pair(x, y)) => {
                return a.validate_index(x).and_then(|_| b.validate_index(y));
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(FilterError::InvalidIndex { index: idx.to_string(), kind: self.kind() })
        }
    }

    /// The base element an index denotes.
    pub fn base_set(&self, idx: &BaseIndex) -> Result<BaseSet, FilterError> {
        self.validate_index(idx)?;
        Ok(self.base_set_unchecked(idx))
    }

    fn base_set_unchecked(&self, idx: &BaseIndex) -> BaseSet {
        match (self, idx) {
            (SiFilter::Frechet, BaseIndex::Level(k)) => BaseSet::Above(*k),
            (SiFilter::Factorial(a), BaseIndex::Level(k)) => BaseSet::factorial(a.clone(), *k),
            (SiFilter::FilterInduced(gs), BaseIndex::Generator { generator, level }) => {
                BaseSet::factorial(gs[*generator].clone(), *level)
            }
            (SiFilter::Meet(a, b), BaseIndex::Pair(x, y)) => {
                BaseSet::union([a.base_set_unchecked(x), b.base_set_unchecked(y)])
            }
            (SiFilter::Join(a, b, _), BaseIndex::Pair(x, y)) => {
                BaseSet::inter([a.base_set_unchecked(x), b.base_set_unchecked(y)])
            }
            _ => unreachable!("index validated"),
        }
    }

    pub fn base_member(&self, idx: &BaseIndex, m: &BigUint) -> Result<bool, FilterError> {
        self.validate_index(idx)?;
        Ok(self.member_unchecked(idx, m))
    }

    fn member_unchecked(&self, idx: &BaseIndex, m: &BigUint) -> bool {
        match (self, idx) {
            (SiFilter::Frechet, BaseIndex::Level(k)) => m > &BigUint::from(*k),
            (SiFilter::Factorial(a), BaseIndex::Level(k)) => factorial_member(a, *k, m),
            (SiFilter::FilterInduced(gs), BaseIndex::Generator { generator, level }) => {
                factorial_member(&gs[*generator], *level, m)
            }
            (SiFilter::Meet(a, b), BaseIndex::Pair(x, y)) => a.member_unchecked(x, m) || b.member_unchecked(y, m),
            (SiFilter::Join(a, b, _), BaseIndex::Pair(x, y)) => a.member_unchecked(x, m) && b.member_unchecked(y, m),
            _ => unreachable!("index validated"),
        }
    }

    /// Machine-word membership; the index must already be valid.
    pub fn base_member_u64(&self, idx: &BaseIndex, m: u64) -> bool {
        match (self, idx) {
            (SiFilter::Frechet, BaseIndex::Level(k)) => m > *k,
            (SiFilter::Factorial(a), BaseIndex::Level(k)) => factorial_member_u64(a, *k, m),
            (SiFilter::FilterInduced(gs), BaseIndex::Generator { generator, level }) => {
                factorial_member_u64(&gs[*generator], *level, m)
            }
            (SiFilter::Meet(a, b), BaseIndex::Pair(x, y)) => a.base_member_u64(x, m) || b.base_member_u64(y, m),
            (SiFilter::Join(a, b, _), BaseIndex::Pair(x, y)) => a.base_member_u64(x, m) && b.base_member_u64(y, m),
            _ => panic!("index {idx} is not valid for a {} filter", self.kind()),
        }
    }

    /// An index whose element misses `[0, k]`.
    pub fn base_escape_index(&self, k: u64) -> BaseIndex {
        match self {
            SiFilter::Frechet => BaseIndex::Level(k),
            SiFilter::Factorial(_) => BaseIndex::Level(k + 1),
            SiFilter::FilterInduced(_) => BaseIndex::Generator { generator: 0, level: k + 1 },
            SiFilter::Meet(a, b) | SiFilter::Join(a, b, _) => {
                BaseIndex::pair(a.base_escape_index(k), b.base_escape_index(k))
            }
        }
    }

    /// An index `idx'` with `n + element(idx') ⊆ element(idx)`.
    pub fn shift_witness(&self, idx: &BaseIndex, n: i64) -> Result<BaseIndex, FilterError> {
        self.validate_index(idx)?;
        let d = n.unsigned_abs();
        Ok(idx.map_levels(&|k| k + d))
    }

    pub fn character(&self) -> CharacterTag {
        CharacterTag::Countable
    }

    /// Every set the base expressions mention.
    pub fn leaf_sets(&self) -> Vec<&OmegaSet> {
        match self {
            SiFilter::Frechet => vec![],
            SiFilter::Factorial(a) => vec![a],
            SiFilter::FilterInduced(gs) => gs.iter().collect(),
            SiFilter::Meet(a, b) | SiFilter::Join(a, b, _) => {
                let mut v = a.leaf_sets();
                v.extend(b.leaf_sets());
                v
            }
        }
    }
}

impl fmt::Display for SiFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiFilter::Frechet => write!(f, "Fréchet"),
            SiFilter::Factorial(a) => write!(f, "F[{a}]"),
            SiFilter::FilterInduced(gs) => {
                let parts: Vec<String> = gs.iter().map(ToString::to_string).collect();
                write!(f, "F<{}>", parts.join("; "))
            }
            SiFilter::Meet(a, b) => write!(f, "({a} ∧ {b})"),
            SiFilter::Join(a, b, _) => write!(f, "({a} ∨ {b})"),
        }
    }
}

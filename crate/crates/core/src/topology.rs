//! Weak topologies on the bicyclic monoid with zero as pairs of
//! shift-invariant filters or the top element.
//!
//! A topology `(left, right)` has all nonzero points isolated. Its basic
//! neighbourhoods of zero are indexed by [`NbhdParams`] and contain `(a,b)`
//! when `a > n` or `b` lies in the left base element, and `b > m` or `a` lies
//! in the right base element.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bicyclic::Element;
use crate::filters::{
    compare_filters, join_filters, meet_filters, BaseIndex, BaseSet, Containment, FilterError, JoinOutcome,
    OrderVerdict, SiFilter, Verdict,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("invalid neighbourhood parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("the join is undecided within bound {bound}")]
    Undecided { bound: u64 },
}

/// An element of SIF¹.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SifOne {
    Top,
    Filter(SiFilter),
}

impl SifOne {
    pub fn filter(&self) -> Option<&SiFilter> {
        match self {
            SifOne::Top => None,
            SifOne::Filter(f) => Some(f),
        }
    }

    pub fn frechet() -> Self {
        SifOne::Filter(SiFilter::Frechet)
    }
}

impl fmt::Display for SifOne {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SifOne::Top => write!(f, "1"),
            SifOne::Filter(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakTopology {
    /// Row-trace filter.
    pub left: SifOne,
    /// Column-trace filter.
    pub right: SifOne,
}

/// Parameters of a basic neighbourhood of zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NbhdParams {
    pub n: u64,
    pub m: u64,
    pub li: Option<BaseIndex>,
    pub ri: Option<BaseIndex>,
}

impl NbhdParams {
    pub fn new(n: u64, m: u64, li: Option<BaseIndex>, ri: Option<BaseIndex>) -> Self {
        NbhdParams { n, m, li, ri }
    }
}

impl fmt::Display for NbhdParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={}", self.n, self.m)?;
        if let Some(li) = &self.li {
            write!(f, " li={li}")?;
        }
        if let Some(ri) = &self.ri {
            write!(f, " ri={ri}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Row,
    Column,
}

/// Componentwise comparison of two topologies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyVerdict {
    pub verdict: Verdict,
    pub left: ComponentVerdict,
    pub right: ComponentVerdict,
}

/// Comparison of two SIF¹ components; `filters` is present when both are
/// filters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentVerdict {
    pub verdict: Verdict,
    pub filters: Option<OrderVerdict>,
}

/// Outcome of the set-level refinement search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Refinement {
    /// Pairs (coarse params, fine params) with the fine neighbourhood inside
    /// the coarse one. The corner entries use the largest coarse params, which
    /// covers every smaller choice of the same shape.
    Evidence(Vec<(NbhdParams, NbhdParams)>),
    /// A coarse neighbourhood containing no fine one, with a fine point
    /// outside it.
    Failure {
        coarse: NbhdParams,
        #[serde(with = "crate::decimal::optional_pair")]
        point: Option<(BigUint, BigUint)>,
    },
    BoundExhausted { bound: u64 },
}

impl Refinement {
    pub fn is_evidence(&self) -> bool {
        matches!(self, Refinement::Evidence(_))
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Refinement::Failure { .. })
    }
}

/// Combines component verdicts in the product order.
pub fn product_verdict(a: &Verdict, b: &Verdict, bound: u64) -> Verdict {
    if !a.is_decided() || !b.is_decided() {
        return Verdict::Unknown { bound };
    }
    match (a, b) {
        (Verdict::Equal, Verdict::Equal) => Verdict::Equal,
        _ if a.is_le() && b.is_le() => Verdict::Less,
        _ if a.is_ge() && b.is_ge() => Verdict::Greater,
        _ => Verdict::Incomparable,
    }
}

pub fn compare_sif_one(x: &SifOne, y: &SifOne, bound: u64) -> ComponentVerdict {
    match (x, y) {
        (SifOne::Top, SifOne::Top) => ComponentVerdict { verdict: Verdict::Equal, filters: None },
        (SifOne::Top, SifOne::Filter(_)) => ComponentVerdict { verdict: Verdict::Greater, filters: None },
        (SifOne::Filter(_), SifOne::Top) => ComponentVerdict { verdict: Verdict::Less, filters: None },
        (SifOne::Filter(f), SifOne::Filter(g)) => {
            let v = compare_filters(f, g, bound);
            ComponentVerdict { verdict: v.verdict.clone(), filters: Some(v) }
        }
    }
}

pub fn join_sif_one(x: &SifOne, y: &SifOne, bound: u64) -> Result<SifOne, TopologyError> {
    match (x, y) {
        (SifOne::Top, _) | (_, SifOne::Top) => Ok(SifOne::Top),
        (SifOne::Filter(f), SifOne::Filter(g)) => match join_filters(f, g, bound) {
            JoinOutcome::Filter(h) => Ok(SifOne::Filter(h)),
            JoinOutcome::Top { .. } => Ok(SifOne::Top),
            JoinOutcome::Unknown { bound } => Err(TopologyError::Undecided { bound }),
        },
    }
}

pub fn meet_sif_one(x: &SifOne, y: &SifOne) -> SifOne {
    match (x, y) {
        (SifOne::Top, z) | (z, SifOne::Top) => z.clone(),
        (SifOne::Filter(f), SifOne::Filter(g)) => SifOne::Filter(meet_filters(f, g)),
    }
}

fn cond(b: bool) -> BaseSet {
    if b {
        BaseSet::All
    } else {
        BaseSet::Nothing
    }
}

impl WeakTopology {
    pub fn from_pair(left: SifOne, right: SifOne) -> Self {
        WeakTopology { left, right }
    }

    pub fn tau_min() -> Self {
        Self::from_pair(SifOne::Top, SifOne::Top)
    }

    pub fn tau_c() -> Self {
        Self::from_pair(SifOne::frechet(), SifOne::frechet())
    }

    #[allow(non_snake_case)]
    pub fn tau_L() -> Self {
        Self::from_pair(SifOne::Top, SifOne::frechet())
    }

    #[allow(non_snake_case)]
    pub fn tau_R() -> Self {
        Self::from_pair(SifOne::frechet(), SifOne::Top)
    }

    /// The topology with the two slots exchanged; inversion maps one onto the
    /// other.
    pub fn transposed(&self) -> Self {
        Self::from_pair(self.right.clone(), self.left.clone())
    }

    pub fn validate(&self, p: &NbhdParams) -> Result<(), TopologyError> {
        fn slot(name: &str, s: &SifOne, idx: &Option<BaseIndex>) -> Result<(), TopologyError> {
            match (s, idx) {
                (SifOne::Top, None) => Ok(()),
                (SifOne::Top, Some(_)) => Err(TopologyError::InvalidParams(format!("{name} slot is 1 and takes no index"))),
                (SifOne::Filter(_), None) => Err(TopologyError::InvalidParams(format!("{name} slot needs a base index"))),
                (SifOne::Filter(f), Some(i)) => f.validate_index(i).map_err(TopologyError::from),
            }
        }
        slot("left", &self.left, &p.li)?;
        slot("right", &self.right, &p.ri)
    }

    /// Params of the given cutoffs with every base index at `level`.
    pub fn params_at(&self, n: u64, m: u64, level: u64) -> NbhdParams {
        let first = |s: &SifOne| s.filter().map(|f| f.index_shapes()[0].at_level(level));
        NbhdParams::new(n, m, first(&self.left), first(&self.right))
    }

    /// All index shape combinations at `level`.
    pub fn params_shapes(&self, n: u64, m: u64, level: u64) -> Vec<NbhdParams> {
        let shapes = |s: &SifOne| match s.filter() {
            None => vec![None],
            Some(f) => f.index_shapes().into_iter().map(|i| Some(i.at_level(level))).collect(),
        };
        let rs = shapes(&self.right);
        shapes(&self.left)
            .into_iter()
            .flat_map(|l| rs.iter().map(move |r| NbhdParams::new(n, m, l.clone(), r.clone())))
            .collect()
    }

    pub fn nbhd_member(&self, p: &NbhdParams, e: &Element) -> Result<bool, TopologyError> {
        self.validate(p)?;
        Ok(match e {
            Element::Zero => true,
            Element::Pair(a, b) => {
                let side = |s: &SifOne, idx: &Option<BaseIndex>, x: &BigUint| match (s, idx) {
                    (SifOne::Filter(f), Some(i)) => f.base_member(i, x).expect("validated"),
                    _ => false,
                };
                let lok = a > &BigUint::from(p.n) || side(&self.left, &p.li, b);
                let rok = b > &BigUint::from(p.m) || side(&self.right, &p.ri, a);
                lok && rok
            }
        })
    }

    /// Membership of the pair `(a,b)` for already validated params.
    pub fn member_u64(&self, p: &NbhdParams, a: u64, b: u64) -> bool {
        let side = |s: &SifOne, idx: &Option<BaseIndex>, x: u64| match (s, idx) {
            (SifOne::Filter(f), Some(i)) => f.base_member_u64(i, x),
            _ => false,
        };
        (a > p.n || side(&self.left, &p.li, b)) && (b > p.m || side(&self.right, &p.ri, a))
    }

    fn slot_set(s: &SifOne, idx: &Option<BaseIndex>) -> BaseSet {
        match (s, idx) {
            (SifOne::Filter(f), Some(i)) => f.base_set(i).expect("validated"),
            _ => BaseSet::Nothing,
        }
    }

    fn slot_has(s: &SifOne, idx: &Option<BaseIndex>, x: u64) -> bool {
        match (s, idx) {
            (SifOne::Filter(f), Some(i)) => f.base_member_u64(i, x),
            _ => false,
        }
    }

    /// The trace of a basic neighbourhood along row `i` (the set of `b` with
    /// `(i,b)` inside) or column `i` (the set of `a` with `(a,i)` inside).
    pub fn trace_set(&self, side: Side, i: u64, p: &NbhdParams) -> Result<BaseSet, TopologyError> {
        self.validate(p)?;
        let l = Self::slot_set(&self.left, &p.li);
        let r = Self::slot_set(&self.right, &p.ri);
        Ok(match side {
            Side::Row => BaseSet::inter([
                if i > p.n { BaseSet::All } else { l },
                BaseSet::union([BaseSet::Above(p.m), cond(Self::slot_has(&self.right, &p.ri, i))]),
            ]),
            Side::Column => BaseSet::inter([
                BaseSet::union([BaseSet::Above(p.n), cond(Self::slot_has(&self.left, &p.li, i))]),
                if i > p.m { BaseSet::All } else { r },
            ]),
        })
    }

    /// Membership oracle for a trace, built on [`Self::nbhd_member`].
    pub fn filter_trace(&self, side: Side, i: u64, p: &NbhdParams) -> Result<TraceOracle<'_>, TopologyError> {
        self.validate(p)?;
        Ok(TraceOracle { topology: self, side, i, params: p.clone() })
    }

    /// `fine ⊆ coarse` for two neighbourhoods, decided row by row below the
    /// coarse row cutoff and column by column below the coarse column cutoff.
    fn nbhd_subset(&self, coarse: &NbhdParams, fine_t: &WeakTopology, fine: &NbhdParams) -> NbhdContainment {
        let ul = Self::slot_set(&self.left, &coarse.li);
        let ur = Self::slot_set(&self.right, &coarse.ri);
        let vl = Self::slot_set(&fine_t.left, &fine.li);
        let vr = Self::slot_set(&fine_t.right, &fine.ri);
        let mut robust = true;
        for a in 0..=coarse.n {
            let u_row = BaseSet::inter([
                ul.clone(),
                BaseSet::union([BaseSet::Above(coarse.m), cond(Self::slot_has(&self.right, &coarse.ri, a))]),
            ]);
            let v_row = BaseSet::inter([
                if a > fine.n { BaseSet::All } else { vl.clone() },
                BaseSet::union([BaseSet::Above(fine.m), cond(Self::slot_has(&fine_t.right, &fine.ri, a))]),
            ]);
            match v_row.subset_of(&u_row) {
                Containment::Subset => {}
                Containment::NotSubset { witness, robust: r } => {
                    if r {
                        return NbhdContainment::No { point: witness.map(|w| (BigUint::from(a), w)), robust: true };
                    }
                    robust = false;
                }
            }
        }
        for b in 0..=coarse.m {
            let u_col = BaseSet::inter([BaseSet::Above(coarse.n), ur.clone()]);
            let v_col = BaseSet::inter([
                BaseSet::Above(coarse.n),
                BaseSet::union([BaseSet::Above(fine.n), cond(Self::slot_has(&fine_t.left, &fine.li, b))]),
                if b > fine.m { BaseSet::All } else { vr.clone() },
            ]);
            match v_col.subset_of(&u_col) {
                Containment::Subset => {}
                Containment::NotSubset { witness, robust: r } => {
                    if r {
                        return NbhdContainment::No { point: witness.map(|w| (w, BigUint::from(b))), robust: true };
                    }
                    robust = false;
                }
            }
        }
        if robust {
            NbhdContainment::Yes
        } else {
            NbhdContainment::No { point: None, robust: false }
        }
    }

    /// Set-level check that every basic neighbourhood of `self` with params
    /// up to `bound` contains a basic neighbourhood of `fine`.
    pub fn refinement_witness(&self, fine: &WeakTopology, bound: u64) -> Refinement {
        let tail = [&self.left, &self.right, &fine.left, &fine.right]
            .iter()
            .filter_map(|s| s.filter())
            .flat_map(|f| f.leaf_sets())
            .map(|s| s.tail_bound().to_u64().unwrap_or(u64::MAX / 4))
            .max()
            .unwrap_or(0);
        let limit = bound.saturating_add(tail).saturating_add(5);
        let mut grid: Vec<u64> = [0, 1, 2, 5, 10, 20, bound].into_iter().filter(|&g| g <= bound).collect();
        grid.sort_unstable();
        grid.dedup();

        let mut evidence = Vec::new();
        for corner in self.params_shapes(bound, bound, bound) {
            let fine_max = fine.params_shapes(limit, limit, limit);
            let mut any = false;
            let mut all_robust = true;
            let mut point = None;
            for v in &fine_max {
                match self.nbhd_subset(&corner, fine, v) {
                    NbhdContainment::Yes => any = true,
                    NbhdContainment::No { point: p, robust } => {
                        all_robust &= robust;
                        if point.is_none() {
                            point = p;
                        }
                    }
                }
            }
            if !any {
                return if all_robust {
                    Refinement::Failure { coarse: corner, point }
                } else {
                    Refinement::BoundExhausted { bound }
                };
            }
            let mut from = 0;
            for &g in &grid {
                let coarse = self.with_cutoffs_and_level(&corner, g);
                let found = (from..=limit).find_map(|t| {
                    fine.params_shapes(t, t, t)
                        .into_iter()
                        .find(|v| self.nbhd_subset(&coarse, fine, v) == NbhdContainment::Yes)
                        .map(|v| (t, v))
                });
                match found {
                    Some((t, v)) => {
                        from = t;
                        evidence.push((coarse, v));
                    }
                    None => return Refinement::BoundExhausted { bound },
                }
            }
        }
        Refinement::Evidence(evidence)
    }

    fn with_cutoffs_and_level(&self, shape: &NbhdParams, g: u64) -> NbhdParams {
        NbhdParams::new(
            g,
            g,
            shape.li.as_ref().map(|i| i.at_level(g)),
            shape.ri.as_ref().map(|i| i.at_level(g)),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum NbhdContainment {
    Yes,
    No { point: Option<(BigUint, BigUint)>, robust: bool },
}

/// Membership oracle for one row or column trace.
pub struct TraceOracle<'a> {
    topology: &'a WeakTopology,
    side: Side,
    i: u64,
    params: NbhdParams,
}

impl TraceOracle<'_> {
    pub fn contains(&self, x: u64) -> bool {
        match self.side {
            Side::Row => self.topology.member_u64(&self.params, self.i, x),
            Side::Column => self.topology.member_u64(&self.params, x, self.i),
        }
    }
}

pub fn compare_topologies(t1: &WeakTopology, t2: &WeakTopology, bound: u64) -> TopologyVerdict {
    let left = compare_sif_one(&t1.left, &t2.left, bound);
    let right = compare_sif_one(&t1.right, &t2.right, bound);
    TopologyVerdict { verdict: product_verdict(&left.verdict, &right.verdict, bound), left, right }
}

pub fn join_topologies(t1: &WeakTopology, t2: &WeakTopology, bound: u64) -> Result<WeakTopology, TopologyError> {
    Ok(WeakTopology::from_pair(join_sif_one(&t1.left, &t2.left, bound)?, join_sif_one(&t1.right, &t2.right, bound)?))
}

pub fn meet_topologies(t1: &WeakTopology, t2: &WeakTopology) -> WeakTopology {
    WeakTopology::from_pair(meet_sif_one(&t1.left, &t2.left), meet_sif_one(&t1.right, &t2.right))
}

impl fmt::Display for WeakTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "τ[{}, {}]", self.left, self.right)
    }
}

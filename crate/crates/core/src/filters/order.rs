//! Order, meet and join on representable filters, with certificates.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{BaseIndex, BaseSet, Containment, FilterError, JoinCertificate, SiFilter};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Less,
    Equal,
    Greater,
    Incomparable,
    Unknown { bound: u64 },
}

impl Verdict {
    pub fn flip(&self) -> Verdict {
        match self {
            Verdict::Less => Verdict::Greater,
            Verdict::Greater => Verdict::Less,
            other => other.clone(),
        }
    }

    pub fn is_le(&self) -> bool {
        matches!(self, Verdict::Less | Verdict::Equal)
    }

    pub fn is_ge(&self) -> bool {
        matches!(self, Verdict::Greater | Verdict::Equal)
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self, Verdict::Unknown { .. })
    }
}

/// For each coarse index, the least fine index whose element it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementMap {
    pub entries: Vec<(BaseIndex, BaseIndex)>,
}

impl RefinementMap {
    /// Re-checks every entry: `fine(entry.1) ⊆ coarse(entry.0)`.
    pub fn verify(&self, coarse: &SiFilter, fine: &SiFilter) -> bool {
        self.entries.iter().all(|(c, f)| match (coarse.base_set(c), fine.base_set(f)) {
            (Ok(cs), Ok(fs)) => fs.subset_of(&cs).holds(),
            _ => false,
        })
    }
}

/// A coarse base element that contains no fine base element: for every fine
/// shape, at the stated level, a point of the fine element outside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Escape {
    pub coarse: BaseIndex,
    #[serde(with = "crate::decimal::indexed_points")]
    pub points: Vec<(BaseIndex, Option<BigUint>)>,
}

impl Escape {
    pub fn verify(&self, coarse: &SiFilter, fine: &SiFilter) -> bool {
        let Ok(cs) = coarse.base_set(&self.coarse) else { return false };
        self.points.iter().all(|(idx, point)| {
            let Ok(fs) = fine.base_set(idx) else { return false };
            match point {
                Some(p) => fs.contains(p) && !cs.contains(p),
                None => fs.subset_of(&cs).is_robust_failure(),
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// `map` refines the coarser filter by the finer one; `strict` shows the
    /// reverse fails.
    Refines { map: RefinementMap, strict: Option<Escape> },
    Mutual { forward: RefinementMap, backward: RefinementMap },
    /// Base elements of the left and right filter with empty intersection.
    Disjoint { left: BaseIndex, right: BaseIndex },
    /// `left` is a left element containing no right element, and vice versa.
    Escapes { left: Escape, right: Escape },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

impl OrderVerdict {
    /// Re-checks the certificate against the two filters.
    pub fn verify(&self, f: &SiFilter, g: &SiFilter) -> bool {
        match (&self.verdict, &self.certificate) {
            (Verdict::Less, Certificate::Refines { map, strict }) => {
                map.verify(f, g) && strict.as_ref().is_none_or(|e| e.verify(g, f))
            }
            (Verdict::Greater, Certificate::Refines { map, strict }) => {
                map.verify(g, f) && strict.as_ref().is_none_or(|e| e.verify(f, g))
            }
            (Verdict::Equal, Certificate::Mutual { forward, backward }) => {
                forward.verify(f, g) && backward.verify(g, f)
            }
            (Verdict::Incomparable, Certificate::Disjoint { left, right }) => disjoint(f, left, g, right),
            (Verdict::Incomparable, Certificate::Escapes { left, right }) => left.verify(f, g) && right.verify(g, f),
            (Verdict::Unknown { .. }, Certificate::None) => true,
            _ => false,
        }
    }
}

fn disjoint(f: &SiFilter, fi: &BaseIndex, g: &SiFilter, gi: &BaseIndex) -> bool {
    match (f.base_set(fi), g.base_set(gi)) {
        (Ok(a), Ok(b)) => BaseSet::inter([a, b]).is_empty(),
        _ => false,
    }
}

/// Outcome of a one-directional refinement search.
enum Direction {
    Holds(RefinementMap),
    Fails(Escape),
    Open,
}

fn tail_of(f: &SiFilter) -> u64 {
    f.leaf_sets()
        .iter()
        .map(|s| s.tail_bound().to_u64().unwrap_or(u64::MAX / 4))
        .max()
        .unwrap_or(0)
}

fn fine_limit(f: &SiFilter, g: &SiFilter, bound: u64) -> u64 {
    bound.saturating_add(tail_of(f).max(tail_of(g))).saturating_add(5)
}

/// `coarse ≤ fine`, certified on coarse levels `0..=bound`.
fn refine(coarse: &SiFilter, fine: &SiFilter, bound: u64) -> Direction {
    let limit = fine_limit(coarse, fine, bound);
    let fine_shapes = fine.index_shapes();
    let mut entries = Vec::new();
    for shape in coarse.index_shapes() {
        let mut from = 0;
        for level in 0..=bound {
            let cidx = shape.at_level(level);
            let cset = coarse.base_set_unchecked(&cidx);
            let mut found = None;
            'search: for fl in from..=limit {
                for fs in &fine_shapes {
                    let fidx = fs.at_level(fl);
                    if fine.base_set_unchecked(&fidx).subset_of(&cset).holds() {
                        found = Some((fl, fidx));
                        break 'search;
                    }
                }
            }
            match found {
                Some((fl, fidx)) => {
                    from = fl;
                    entries.push((cidx, fidx));
                }
                None => {
                    return match escape_at(coarse, fine, &cidx, limit) {
                        Some(e) => Direction::Fails(e),
                        None => Direction::Open,
                    };
                }
            }
        }
    }
    Direction::Holds(RefinementMap { entries })
}

/// An escape with coarse index `cidx` when every fine shape fails robustly.
fn escape_at(coarse: &SiFilter, fine: &SiFilter, cidx: &BaseIndex, level: u64) -> Option<Escape> {
    let cset = coarse.base_set_unchecked(cidx);
    let mut points = Vec::new();
    for fs in fine.index_shapes() {
        let fidx = fs.at_level(level);
        match fine.base_set_unchecked(&fidx).subset_of(&cset) {
            Containment::NotSubset { witness, robust: true } => points.push((fidx, witness)),
            _ => return None,
        }
    }
    Some(Escape { coarse: cidx.clone(), points })
}

/// Searches coarse indices up to `bound` for a robust escape.
fn find_escape(coarse: &SiFilter, fine: &SiFilter, bound: u64) -> Option<Escape> {
    let limit = fine_limit(coarse, fine, bound);
    for level in 0..=bound {
        for shape in coarse.index_shapes() {
            if let Some(e) = escape_at(coarse, fine, &shape.at_level(level), limit) {
                return Some(e);
            }
        }
    }
    None
}

/// Least level (then first shape pair) where base elements are disjoint.
fn least_disjoint(f: &SiFilter, g: &SiFilter, limit: u64) -> Option<(BaseIndex, BaseIndex)> {
    let fs = f.index_shapes();
    let gs = g.index_shapes();
    for level in 0..=limit {
        for a in &fs {
            for b in &gs {
                let (ai, bi) = (a.at_level(level), b.at_level(level));
                let meet = BaseSet::inter([f.base_set_unchecked(&ai), g.base_set_unchecked(&bi)]);
                if meet.is_empty() {
                    return Some((ai, bi));
                }
            }
        }
    }
    None
}

/// `f ≤ g` when decidable from the descriptors alone.
fn exact_le(f: &SiFilter, g: &SiFilter) -> Option<bool> {
    match (f, g) {
        (SiFilter::Frechet, _) => Some(true),
        (SiFilter::Factorial(_), SiFilter::Frechet) => Some(false),
        (SiFilter::Factorial(a), SiFilter::Factorial(b)) => Some(b.almost_subset_of(a)),
        _ => None,
    }
}

/// Decides `f` against `g` in the inclusion order; `Less` means `f ⊊ g`.
pub fn compare_filters(f: &SiFilter, g: &SiFilter, bound: u64) -> OrderVerdict {
    let unknown = OrderVerdict { verdict: Verdict::Unknown { bound }, certificate: Certificate::None };
    let le = exact_le(f, g);
    let ge = exact_le(g, f);
    if le == Some(false) && ge == Some(false) {
        let limit = fine_limit(f, g, bound);
        if let Some((left, right)) = least_disjoint(f, g, limit) {
            return OrderVerdict { verdict: Verdict::Incomparable, certificate: Certificate::Disjoint { left, right } };
        }
        if let (Some(left), Some(right)) = (find_escape(f, g, bound), find_escape(g, f, bound)) {
            return OrderVerdict { verdict: Verdict::Incomparable, certificate: Certificate::Escapes { left, right } };
        }
        return unknown;
    }
    let forward = refine(f, g, bound);
    let backward = refine(g, f, bound);
    let le = le.unwrap_or(matches!(forward, Direction::Holds(_)));
    let ge = ge.unwrap_or(matches!(backward, Direction::Holds(_)));
    match (forward, backward) {
        (Direction::Holds(fw), Direction::Holds(bw)) if le && ge => OrderVerdict {
            verdict: Verdict::Equal,
            certificate: Certificate::Mutual { forward: fw, backward: bw },
        },
        (Direction::Holds(map), Direction::Fails(e)) if le && !ge => OrderVerdict {
            verdict: Verdict::Less,
            certificate: Certificate::Refines { map, strict: Some(e) },
        },
        (Direction::Fails(e), Direction::Holds(map)) if !le && ge => OrderVerdict {
            verdict: Verdict::Greater,
            certificate: Certificate::Refines { map, strict: Some(e) },
        },
        (Direction::Fails(left), Direction::Fails(right)) => {
            let limit = fine_limit(f, g, bound);
            let certificate = match least_disjoint(f, g, limit) {
                Some((l, r)) => Certificate::Disjoint { left: l, right: r },
                None => Certificate::Escapes { left, right },
            };
            OrderVerdict { verdict: Verdict::Incomparable, certificate }
        }
        _ => unknown,
    }
}

/// The family intersection `f ∩ g`.
pub fn meet_filters(f: &SiFilter, g: &SiFilter) -> SiFilter {
    match (f, g) {
        _ if f == g => f.clone(),
        (SiFilter::Frechet, _) | (_, SiFilter::Frechet) => SiFilter::Frechet,
        (SiFilter::Factorial(a), SiFilter::Factorial(b)) => SiFilter::Factorial(a.union(b)),
        _ => SiFilter::Meet(Box::new(f.clone()), Box::new(g.clone())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinOutcome {
    Filter(SiFilter),
    /// The generated family contains the empty set; the two indices name
    /// disjoint base elements.
    Top { left: BaseIndex, right: BaseIndex },
    Unknown { bound: u64 },
}

fn generators(f: &SiFilter) -> Option<Vec<crate::omega::OmegaSet>> {
    match f {
        SiFilter::Factorial(a) => Some(vec![a.clone()]),
        SiFilter::FilterInduced(gs) => Some(gs.clone()),
        _ => None,
    }
}

/// The filter generated by `f ∪ g`, or the top element when improper.
pub fn join_filters(f: &SiFilter, g: &SiFilter, bound: u64) -> JoinOutcome {
    let limit = fine_limit(f, g, bound);
    let top = |f: &SiFilter, g: &SiFilter| match least_disjoint(f, g, limit) {
        Some((left, right)) => JoinOutcome::Top { left, right },
        None => JoinOutcome::Unknown { bound },
    };
    match (f, g) {
        _ if f == g => JoinOutcome::Filter(f.clone()),
        (SiFilter::Frechet, x) | (x, SiFilter::Frechet) => JoinOutcome::Filter(x.clone()),
        (SiFilter::Factorial(a), SiFilter::Factorial(b)) => {
            let c = a.intersect(b);
            if c.is_infinite() {
                JoinOutcome::Filter(SiFilter::Factorial(c))
            } else {
                top(f, g)
            }
        }
        _ => {
            if let (Some(mut gf), Some(gg)) = (generators(f), generators(g)) {
                gf.extend(gg);
                match SiFilter::from_filter_base(gf) {
                    Ok(h) => return JoinOutcome::Filter(h),
                    Err(FilterError::ImproperBase { .. }) => return top(f, g),
                    Err(_) => {}
                }
            }
            let fs = f.index_shapes();
            let gs = g.index_shapes();
            let pairs = fs.len() * gs.len();
            if pairs as u64 > bound.max(1) {
                return JoinOutcome::Unknown { bound };
            }
            let proper = fs.iter().all(|a| {
                gs.iter().all(|b| {
                    BaseSet::inter([f.base_set_unchecked(a), g.base_set_unchecked(b)]).is_infinite()
                })
            });
            if proper {
                JoinOutcome::Filter(SiFilter::Join(
                    Box::new(f.clone()),
                    Box::new(g.clone()),
                    JoinCertificate { shape_pairs: pairs },
                ))
            } else {
                top(f, g)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::{ad_family, tower, OmegaSet};

    fn fa(s: OmegaSet) -> SiFilter {
        SiFilter::factorial(s).unwrap()
    }

    #[test]
    fn factorial_pairs() {
        let evens = fa(OmegaSet::evens());
        let m4 = fa(OmegaSet::multiples(4u32));
        let v = compare_filters(&m4, &evens, 12);
        assert_eq!(v.verdict, Verdict::Greater);
        assert!(v.verify(&m4, &evens));
        let v = compare_filters(&evens, &m4, 12);
        assert_eq!(v.verdict, Verdict::Less);
        assert!(v.verify(&evens, &m4));
        let v = compare_filters(&evens, &evens, 12);
        assert_eq!(v.verdict, Verdict::Equal);
        assert!(v.verify(&evens, &evens));
    }

    #[test]
    fn evens_odds_disjoint_from_level_two() {
        let (e, o) = (fa(OmegaSet::evens()), fa(OmegaSet::odds()));
        let v = compare_filters(&e, &o, 10);
        assert_eq!(v.verdict, Verdict::Incomparable);
        assert_eq!(
            v.certificate,
            Certificate::Disjoint { left: BaseIndex::Level(2), right: BaseIndex::Level(2) }
        );
        assert!(v.verify(&e, &o));
    }

    #[test]
    fn overlapping_sets_give_escapes() {
        let (e, t) = (fa(OmegaSet::evens()), fa(OmegaSet::multiples(3u32)));
        let v = compare_filters(&e, &t, 10);
        assert_eq!(v.verdict, Verdict::Incomparable);
        let Certificate::Escapes { left, right } = &v.certificate else { panic!("{v:?}") };
        assert!(left.points.iter().all(|(_, p)| p.is_some()));
        assert!(right.points.iter().all(|(_, p)| p.is_some()));
        assert!(v.verify(&e, &t));
    }

    #[test]
    fn frechet_is_bottom() {
        let f = fa(OmegaSet::omega());
        let v = compare_filters(&SiFilter::Frechet, &f, 10);
        assert_eq!(v.verdict, Verdict::Less);
        assert!(v.verify(&SiFilter::Frechet, &f));
        let v = compare_filters(&SiFilter::Frechet, &SiFilter::Frechet, 10);
        assert_eq!(v.verdict, Verdict::Equal);
    }

    #[test]
    fn equal_star_sets_are_equal_filters() {
        let a = fa(OmegaSet::evens());
        let b = fa(OmegaSet::evens().intersect(&OmegaSet::from_point(6u32)));
        let v = compare_filters(&a, &b, 10);
        assert_eq!(v.verdict, Verdict::Equal);
        assert!(v.verify(&a, &b));
    }

    #[test]
    fn filter_induced_chain() {
        let t = tower(2, 2).unwrap();
        let g1 = SiFilter::from_filter_base(vec![t[0].clone()]).unwrap();
        let g2 = SiFilter::from_filter_base(vec![t[0].clone(), t[1].clone()]).unwrap();
        let v = compare_filters(&g1, &g2, 8);
        assert_eq!(v.verdict, Verdict::Less);
        assert!(v.verify(&g1, &g2));
    }

    #[test]
    fn meet_examples() {
        let (e, o) = (fa(OmegaSet::evens()), fa(OmegaSet::odds()));
        assert_eq!(meet_filters(&e, &o), fa(OmegaSet::omega()));
        assert_eq!(meet_filters(&SiFilter::Frechet, &e), SiFilter::Frechet);
        assert_eq!(meet_filters(&e, &e), e);
    }

    #[test]
    fn join_examples() {
        let (e, o) = (fa(OmegaSet::evens()), fa(OmegaSet::odds()));
        let m4 = fa(OmegaSet::multiples(4u32));
        assert_eq!(join_filters(&e, &m4, 10), JoinOutcome::Filter(m4.clone()));
        assert!(matches!(join_filters(&e, &o, 10), JoinOutcome::Top { .. }));
        assert_eq!(join_filters(&e, &SiFilter::Frechet, 10), JoinOutcome::Filter(e.clone()));
    }

    #[test]
    fn filter_induced_join_matches_composite() {
        let g = SiFilter::from_filter_base(vec![OmegaSet::evens()]).unwrap();
        let h = SiFilter::from_filter_base(vec![OmegaSet::multiples(3u32)]).unwrap();
        let JoinOutcome::Filter(merged) = join_filters(&g, &h, 10) else { panic!() };
        let composite = SiFilter::Join(Box::new(g), Box::new(h), JoinCertificate { shape_pairs: 1 });
        let v = compare_filters(&merged, &composite, 10);
        assert_eq!(v.verdict, Verdict::Equal);
        assert!(v.verify(&merged, &composite));
    }

    #[test]
    fn composite_meet_against_normal_form() {
        let (e, o) = (fa(OmegaSet::evens()), fa(OmegaSet::odds()));
        let composite = SiFilter::Meet(Box::new(e), Box::new(o));
        let normal = fa(OmegaSet::omega());
        let v = compare_filters(&composite, &normal, 12);
        assert_eq!(v.verdict, Verdict::Equal);
        assert!(v.verify(&composite, &normal));
    }

    #[test]
    fn antichain_mod_eight() {
        let fam: Vec<SiFilter> = ad_family(8).unwrap().into_iter().map(fa).collect();
        for i in 0..fam.len() {
            for j in i + 1..fam.len() {
                let v = compare_filters(&fam[i], &fam[j], 4);
                assert_eq!(v.verdict, Verdict::Incomparable);
                assert!(matches!(v.certificate, Certificate::Disjoint { .. }));
                assert!(v.verify(&fam[i], &fam[j]));
            }
        }
    }
}

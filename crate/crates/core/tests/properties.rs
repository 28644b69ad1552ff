use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use weaktop::{
    ad_family, compare_filters, join_filters, meet_filters, multiply_small, BaseIndex, Element, JoinOutcome, OmegaSet,
    Progression, SetRelation, SiFilter, Verdict,
};

/// Plain description of a set, interpreted directly by [`Raw::member`].
#[derive(Clone, Debug)]
struct Raw {
    progressions: Vec<(u64, u64)>,
    include: BTreeSet<u64>,
    exclude: BTreeSet<u64>,
}

impl Raw {
    fn member(&self, m: u64) -> bool {
        !self.exclude.contains(&m)
            && (self.include.contains(&m) || self.progressions.iter().any(|&(s, d)| m >= s && (m - s).is_multiple_of(d)))
    }

    fn build(&self) -> OmegaSet {
        let ps = self.progressions.iter().map(|&(s, d)| Progression::new(s, d).unwrap()).collect();
        OmegaSet::new(
            ps,
            self.include.iter().map(|&x| BigUint::from(x)),
            self.exclude.iter().map(|&x| BigUint::from(x)),
        )
    }
}

fn raw_set(min_progressions: usize) -> impl Strategy<Value = Raw> {
    (
        prop::collection::vec((0u64..30, 1u64..=8), min_progressions..4),
        prop::collection::btree_set(0u64..40, 0..4),
        prop::collection::btree_set(0u64..40, 0..4),
    )
        .prop_map(|(progressions, include, exclude)| Raw { progressions, include, exclude })
}

fn element() -> impl Strategy<Value = Element> {
    prop_oneof![
        1 => Just(Element::Zero),
        9 => (0u64..1_000_000, 0u64..1_000_000).prop_map(|(a, b)| Element::pair(a, b)),
    ]
}

/// Period after which every generated set repeats: lcm(1..=8).
const PERIOD: u64 = 840;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bicyclic_associative(x in element(), y in element(), z in element()) {
        prop_assert_eq!(x.multiply(&y).multiply(&z), x.multiply(&y.multiply(&z)));
    }

    #[test]
    fn bicyclic_inversion_reverses(x in element(), y in element()) {
        prop_assert_eq!(x.multiply(&y).invert(), y.invert().multiply(&x.invert()));
        prop_assert_eq!(x.multiply(&x.invert()).multiply(&x), x);
    }

    #[test]
    fn sigma_is_additive(a in 0u64..10_000, b in 0u64..10_000, c in 0u64..10_000, d in 0u64..10_000) {
        let (x, y) = (Element::pair(a, b), Element::pair(c, d));
        let s = x.multiply(&y).sigma_class().unwrap();
        prop_assert_eq!(s, x.sigma_class().unwrap() + y.sigma_class().unwrap());
    }

    #[test]
    fn small_product_agrees(a in 0u64..1000, b in 0u64..1000, c in 0u64..1000, d in 0u64..1000) {
        let (p, q) = multiply_small((a, b), (c, d));
        prop_assert_eq!(Element::pair(a, b).multiply(&Element::pair(c, d)), Element::pair(p, q));
    }

    #[test]
    fn omega_denotation(raw in raw_set(0)) {
        let s = raw.build();
        for m in 0..10_000u64 {
            prop_assert_eq!(s.contains_u64(m), raw.member(m), "m = {}", m);
        }
        prop_assert_eq!(s.contains(&BigUint::from(1234u32)), raw.member(1234));
    }

    #[test]
    fn union_and_intersection_pointwise(x in raw_set(0), y in raw_set(0), z in raw_set(0)) {
        let (a, b, c) = (x.build(), y.build(), z.build());
        let (u, i) = (a.union(&b), a.intersect(&b));
        let (u2, i2) = (b.union(&a), b.intersect(&a));
        let (ua, ia) = (a.union(&b).union(&c), a.intersect(&b.intersect(&c)));
        let (ub, ib) = (a.union(&b.union(&c)), a.intersect(&b).intersect(&c));
        for m in 0..=5000u64 {
            let (p, q, r) = (x.member(m), y.member(m), z.member(m));
            prop_assert_eq!(u.contains_u64(m), p || q);
            prop_assert_eq!(i.contains_u64(m), p && q);
            prop_assert_eq!(u2.contains_u64(m), u.contains_u64(m));
            prop_assert_eq!(i2.contains_u64(m), i.contains_u64(m));
            prop_assert_eq!(ua.contains_u64(m), ub.contains_u64(m));
            prop_assert_eq!(ia.contains_u64(m), ib.contains_u64(m));
            prop_assert_eq!(ua.contains_u64(m), p || q || r);
        }
    }

    #[test]
    fn equal_sets_have_equal_forms(x in raw_set(0), y in raw_set(0)) {
        let (a, b) = (x.build(), y.build());
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.intersect(&a.union(&b)), a.clone());
        prop_assert_eq!(a.union(&a.intersect(&b)), a);
    }

    #[test]
    fn shift_law(raw in raw_set(0), n in -10i64..=10) {
        let s = raw.build().shift(n);
        for m in 0..=2000u64 {
            let back = m as i64 - n;
            prop_assert_eq!(s.contains_u64(m), back >= 0 && raw.member(back as u64), "m = {}", m);
        }
    }

    #[test]
    fn relation_matches_brute_force(x in raw_set(0), y in raw_set(0)) {
        let (a, b) = (x.build(), y.build());
        let r = a.relate(&b);
        let flipped = b.relate(&a).relation;
        let expected_flip = match r.relation {
            SetRelation::AlmostSubset => SetRelation::AlmostSuperset,
            SetRelation::AlmostSuperset => SetRelation::AlmostSubset,
            other => other,
        };
        prop_assert_eq!(flipped, expected_flip);
        // past every listed point both sets are periodic
        let tail = 64u64;
        let window = tail..tail + PERIOD;
        let left_extra = window.clone().any(|m| x.member(m) && !y.member(m));
        let right_extra = window.clone().any(|m| y.member(m) && !x.member(m));
        let common = window.clone().any(|m| x.member(m) && y.member(m));
        prop_assert_eq!(a.almost_subset_of(&b), !left_extra);
        prop_assert_eq!(b.almost_subset_of(&a), !right_extra);
        prop_assert_eq!(a.meets_infinitely(&b), common);
        if let Some(diff) = &r.left_minus_right {
            let brute: BTreeSet<BigUint> = (0..tail).filter(|&m| x.member(m) && !y.member(m)).map(BigUint::from).collect();
            prop_assert_eq!(diff, &brute);
        }
    }
}

fn infinite_set() -> impl Strategy<Value = Raw> {
    raw_set(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shift_witness_is_contained(raw in infinite_set(), k in 0u64..=6, n in -5i64..=5) {
        let f = SiFilter::factorial(raw.build()).unwrap();
        let idx = BaseIndex::Level(k);
        let w = f.shift_witness(&idx, n).unwrap();
        for m in 0..=50_000u64 {
            let target = m as i64 + n;
            if target >= 0 && f.base_member_u64(&w, m) {
                prop_assert!(f.base_member_u64(&idx, target as u64), "{} ∈ witness, {} ∉ element", m, target);
            }
        }
    }

    #[test]
    fn filter_base_shift_witness(x in infinite_set(), y in infinite_set(), k in 0u64..=4, n in -3i64..=3) {
        let (a, b) = (x.build(), y.build());
        prop_assume!(a.meets_infinitely(&b));
        let f = SiFilter::from_filter_base(vec![a, b]).unwrap();
        for shape in f.index_shapes() {
            let idx = shape.at_level(k);
            let w = f.shift_witness(&idx, n).unwrap();
            for m in 0..=20_000u64 {
                let target = m as i64 + n;
                if target >= 0 && f.base_member_u64(&w, m) {
                    prop_assert!(f.base_member_u64(&idx, target as u64));
                }
            }
        }
    }

    #[test]
    fn comparison_certificates_verify(x in infinite_set(), y in infinite_set()) {
        let (f, g) = (SiFilter::factorial(x.build()).unwrap(), SiFilter::factorial(y.build()).unwrap());
        let v = compare_filters(&f, &g, 12);
        prop_assert!(v.verdict.is_decided());
        prop_assert!(v.verify(&f, &g), "{:?}", v);
        prop_assert_eq!(compare_filters(&g, &f, 12).verdict, v.verdict.flip());
    }
}

/// Every filter `F_A` with `A` a non-empty union of classes modulo 6.
fn residue_lattice() -> Vec<SiFilter> {
    let classes = ad_family(6).unwrap();
    (1u32..64)
        .map(|mask| {
            let set = (0..6).filter(|i| mask & (1 << i) != 0).fold(OmegaSet::empty(), |acc, i| acc.union(&classes[i]));
            SiFilter::factorial(set).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lattice_laws(i in 0usize..63, j in 0usize..63, l in 0usize..63) {
        let fs = residue_lattice();
        let (f, g, h) = (&fs[i], &fs[j], &fs[l]);
        let meet = meet_filters(f, g);
        prop_assert_eq!(&meet, &meet_filters(g, f));
        prop_assert_eq!(meet_filters(f, f), f.clone());
        prop_assert_eq!(meet_filters(&meet, h), meet_filters(f, &meet_filters(g, h)));
        prop_assert!(compare_filters(&meet, f, 8).verdict.is_le());
        prop_assert!(compare_filters(&meet, g, 8).verdict.is_le());
        match join_filters(f, g, 8) {
            JoinOutcome::Filter(join) => {
                prop_assert!(compare_filters(f, &join, 8).verdict.is_le());
                prop_assert!(compare_filters(g, &join, 8).verdict.is_le());
                prop_assert_eq!(meet_filters(f, &join), f.clone());
                prop_assert_eq!(compare_filters(&meet, &join, 8).verdict == Verdict::Equal, f == g);
            }
            JoinOutcome::Top { .. } => {
                prop_assert_eq!(compare_filters(f, g, 8).verdict, Verdict::Incomparable);
            }
            JoinOutcome::Unknown { .. } => prop_assert!(false, "residue joins are decided"),
        }
    }
}

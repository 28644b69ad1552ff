//! Separate continuity of the four generator translations at zero.
//!
//! Left and right multiplication by `(0,1)` and `(1,0)` generate every
//! translation, so continuity at zero reduces to these four maps. For a
//! target neighbourhood `U` the witness raises both cutoffs by one and moves
//! both base indices through `shift_witness` by one step; containment of the
//! translate is then checked on every point with coordinates up to a cap and
//! on windows around `t!` for `t ≤ 20`. Points with both coordinates beyond
//! the cutoffs plus two land beyond the cutoffs of `U` and need no check.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{CheckReport, CheckVerdict};
use crate::bicyclic::multiply_small;
use crate::descriptor::topology_to_value;
use crate::filters::{BaseIndex, SiFilter};
use crate::topology::{NbhdParams, SifOne, WeakTopology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftCase {
    /// `x ↦ (0,1)·x`
    LeftZeroOne,
    /// `x ↦ (1,0)·x`
    LeftOneZero,
    /// `x ↦ x·(0,1)`
    RightZeroOne,
    /// `x ↦ x·(1,0)`
    RightOneZero,
}

impl ShiftCase {
    pub const ALL: [ShiftCase; 4] =
        [ShiftCase::LeftZeroOne, ShiftCase::LeftOneZero, ShiftCase::RightZeroOne, ShiftCase::RightOneZero];

    pub fn apply(self, x: (u64, u64)) -> (u64, u64) {
        match self {
            ShiftCase::LeftZeroOne => multiply_small((0, 1), x),
            ShiftCase::LeftOneZero => multiply_small((1, 0), x),
            ShiftCase::RightZeroOne => multiply_small(x, (0, 1)),
            ShiftCase::RightOneZero => multiply_small(x, (1, 0)),
        }
    }
}

/// Slot contents as seen by the harness, including the negative control.
#[derive(Clone, Copy)]
enum Slot<'a> {
    Top,
    Filter(&'a SiFilter),
    /// `{t! : t ≥ k}`: radius-zero intervals, not shift-invariant.
    RawFactorials,
}

impl Slot<'_> {
    fn member(&self, idx: &Option<BaseIndex>, x: u64) -> bool {
        match (self, idx) {
            (Slot::Filter(f), Some(i)) => f.base_member_u64(i, x),
            (Slot::RawFactorials, Some(BaseIndex::Level(k))) => raw_factorial_member(*k, x),
            _ => false,
        }
    }

    fn shapes(&self) -> Vec<Option<BaseIndex>> {
        match self {
            Slot::Top => vec![None],
            Slot::Filter(f) => f.index_shapes().into_iter().map(Some).collect(),
            Slot::RawFactorials => vec![Some(BaseIndex::Level(0))],
        }
    }
}

fn raw_factorial_member(k: u64, x: u64) -> bool {
    let mut f = 1u64;
    for t in 1..=20u64 {
        if t >= k && f == x {
            return true;
        }
        if f > x {
            return false;
        }
        match f.checked_mul(t + 1) {
            Some(g) => f = g,
            None => return false,
        }
    }
    false
}

/// A sorted coordinate list stored as runs of consecutive values.
struct Runs {
    coords: Vec<u64>,
    /// `(first value, position of that value, run length)`
    runs: Vec<(u64, usize, u64)>,
}

impl Runs {
    fn new(coords: Vec<u64>) -> Self {
        let mut runs: Vec<(u64, usize, u64)> = Vec::new();
        for (pos, &x) in coords.iter().enumerate() {
            match runs.last_mut() {
                Some((first, _, len)) if *first + *len == x => *len += 1,
                _ => runs.push((x, pos, 1)),
            }
        }
        Runs { coords, runs }
    }

    fn position(&self, x: u64) -> Option<usize> {
        self.runs
            .iter()
            .find(|&&(first, _, len)| x < first + len)
            .filter(|&&(first, _, _)| x >= first)
            .map(|&(first, pos, _)| pos + (x - first) as usize)
    }
}

/// Cached membership over every coordinate of a run list.
struct Table<'a> {
    slot: Slot<'a>,
    coords: &'a Runs,
    bits: HashMap<Option<BaseIndex>, Vec<bool>>,
    /// Members among the scanned line, in order.
    members: HashMap<Option<BaseIndex>, Vec<u64>>,
}

impl<'a> Table<'a> {
    fn new(slot: Slot<'a>, indices: Vec<Option<BaseIndex>>, coords: &'a Runs, line: &[u64]) -> Self {
        let bits: HashMap<Option<BaseIndex>, Vec<bool>> = indices
            .into_par_iter()
            .map(|i| {
                let v = coords.coords.iter().map(|&x| slot.member(&i, x)).collect();
                (i, v)
            })
            .collect();
        let members = bits
            .iter()
            .map(|(i, v)| {
                let on = line.iter().copied().filter(|&x| v[coords.position(x).expect("line is cached")]).collect();
                (i.clone(), on)
            })
            .collect();
        Table { slot, coords, bits, members }
    }

    fn resolve(&self, idx: &'a Option<BaseIndex>) -> Lookup<'_> {
        Lookup {
            table: self,
            idx,
            bits: self.bits.get(idx).map(Vec::as_slice),
            members: self.members.get(idx).map(Vec::as_slice),
        }
    }
}

/// Membership for one index, resolved once per scan.
struct Lookup<'a> {
    table: &'a Table<'a>,
    idx: &'a Option<BaseIndex>,
    bits: Option<&'a [bool]>,
    members: Option<&'a [u64]>,
}

impl Lookup<'_> {
    fn has(&self, x: u64) -> bool {
        if let Some(bits) = self.bits {
            if let Some(pos) = self.table.coords.position(x) {
                return bits[pos];
            }
        }
        self.table.slot.member(self.idx, x)
    }
}

struct Nbhd<'a> {
    n: u64,
    m: u64,
    left: Lookup<'a>,
    right: Lookup<'a>,
}

impl Nbhd<'_> {
    fn contains(&self, (a, b): (u64, u64)) -> bool {
        (a > self.n || self.left.has(b)) && (b > self.m || self.right.has(a))
    }
}

struct Layout<'a> {
    left: Table<'a>,
    right: Table<'a>,
}

impl<'a> Layout<'a> {
    fn nbhd(&'a self, p: &'a NbhdParams) -> Nbhd<'a> {
        Nbhd { n: p.n, m: p.m, left: self.left.resolve(&p.li), right: self.right.resolve(&p.ri) }
    }
}

fn cap_for(depth: u64) -> u64 {
    depth.max(28) * (depth + 2)
}

/// Coordinates scanned along a line: `0..=cap` and windows around `t!`.
fn line(cap: u64) -> Vec<u64> {
    let mut pts: Vec<u64> = (0..=cap).collect();
    let mut f = 24u64;
    for t in 4..=20u64 {
        if t > 4 {
            f *= t;
        }
        let lo = f - t - 2;
        pts.extend(lo.max(cap + 1)..=f + t + 2);
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// The coordinates together with their neighbours, sorted.
fn neighbourhood_of(coords: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = coords.iter().flat_map(|&x| [x.saturating_sub(1), x, x + 1]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Per-case witnesses of every corner target, or the first target without
/// one together with the escape of each candidate tried.
type RunOutcome = Result<Vec<(ShiftCase, NbhdParams, NbhdParams)>, (NbhdParams, Vec<(NbhdParams, Escape)>)>;
type TargetOutcome = Result<Vec<(ShiftCase, NbhdParams)>, Vec<(NbhdParams, Escape)>>;

#[derive(Clone, Debug)]
struct Escape {
    case: ShiftCase,
    point: (u64, u64),
    image: (u64, u64),
}

/// First point of `v` whose translate leaves `u`, scanning rows then columns.
fn translate_escape(layout: &Layout, case: ShiftCase, u: &NbhdParams, v: &NbhdParams, coords: &[u64]) -> Option<Escape> {
    let rows = u.n.max(v.n) + 2;
    let cols = u.m.max(v.m) + 2;
    let (nu, nv) = (layout.nbhd(u), layout.nbhd(v));
    let check = |p: (u64, u64)| -> Option<Escape> {
        if nv.contains(p) {
            let image = case.apply(p);
            if !nu.contains(image) {
                return Some(Escape { case, point: p, image });
            }
        }
        None
    };
    // at or below a cutoff only base members can lie in `v`
    for a in 0..=rows {
        let line = match nv.left.members {
            Some(ms) if a <= v.n => ms,
            _ => coords,
        };
        for &b in line {
            if let Some(e) = check((a, b)) {
                return Some(e);
            }
        }
    }
    for b in 0..=cols {
        let line = match nv.right.members {
            Some(ms) if b <= v.m => ms,
            _ => coords,
        };
        for &a in line {
            if a > rows {
                if let Some(e) = check((a, b)) {
                    return Some(e);
                }
            }
        }
    }
    None
}

fn targets(left: &Slot, right: &Slot, depth: u64) -> Vec<NbhdParams> {
    let mut out = Vec::new();
    for level in 0..=depth {
        for n in 0..=depth {
            for m in 0..=depth {
                for li in left.shapes() {
                    for ri in right.shapes() {
                        out.push(NbhdParams::new(
                            n,
                            m,
                            li.as_ref().map(|i| i.at_level(level)),
                            ri.as_ref().map(|i| i.at_level(level)),
                        ));
                    }
                }
            }
        }
    }
    out
}

fn index_universe(slot: &Slot, depth: u64) -> Vec<Option<BaseIndex>> {
    let shapes = slot.shapes();
    (0..=depth + 1)
        .flat_map(|level| shapes.iter().map(move |s| s.as_ref().map(|i| i.at_level(level))))
        .collect()
}

fn slot_of(s: &SifOne) -> Slot<'_> {
    match s {
        SifOne::Top => Slot::Top,
        SifOne::Filter(f) => Slot::Filter(f),
    }
}

/// The shift witness of `idx` for a one-step translation.
fn step_witness(slot: &Slot, idx: &Option<BaseIndex>) -> Option<BaseIndex> {
    match (slot, idx) {
        (Slot::Filter(f), Some(i)) => Some(f.shift_witness(i, 1).expect("index from the filter's own shapes")),
        (_, i) => i.as_ref().map(|i| i.raised(1)),
    }
}

fn run(
    left: Slot,
    right: Slot,
    depth: u64,
    candidates: impl Fn(&NbhdParams) -> Vec<NbhdParams> + Sync,
) -> RunOutcome {
    let cap = cap_for(depth);
    let coords = line(cap);
    let cached = Runs::new(neighbourhood_of(&coords));
    let layout = Layout {
        left: Table::new(left, index_universe(&left, depth), &cached, &coords),
        right: Table::new(right, index_universe(&right, depth), &cached, &coords),
    };
    let ts = targets(&left, &right, depth);
    let outcomes: Vec<TargetOutcome> = ts
        .par_iter()
        .map(|u| {
            let cands = candidates(u);
            let mut found = Vec::new();
            for case in ShiftCase::ALL {
                let mut misses = Vec::new();
                let mut ok = None;
                for v in &cands {
                    match translate_escape(&layout, case, u, v, &coords) {
                        None => {
                            ok = Some(v.clone());
                            break;
                        }
                        Some(e) => misses.push((v.clone(), e)),
                    }
                }
                match ok {
                    Some(v) => found.push((case, v)),
                    None => return Err(misses),
                }
            }
            Ok(found)
        })
        .collect();
    let mut witnesses = Vec::new();
    for (u, outcome) in ts.into_iter().zip(outcomes) {
        match outcome {
            Ok(found) => {
                if u.n == depth && u.m == depth && u.li.as_ref().is_none_or(|i| i.max_level() == depth) {
                    witnesses.extend(found.into_iter().map(|(c, v)| (c, u.clone(), v)));
                }
            }
            Err(misses) => return Err((u, misses)),
        }
    }
    Ok(witnesses)
}

fn params_json(p: &NbhdParams) -> serde_json::Value {
    serde_json::to_value(p).expect("params serialise")
}

/// Checks separate continuity at zero for the four generator translations
/// against every target neighbourhood with cutoffs and levels up to `depth`.
pub fn check_shift_continuity(t: &WeakTopology, depth: u64) -> CheckReport {
    let (left, right) = (slot_of(&t.left), slot_of(&t.right));
    let outcome = run(left, right, depth, |u| {
        vec![NbhdParams::new(u.n + 1, u.m + 1, step_witness(&left, &u.li), step_witness(&right, &u.ri))]
    });
    report(vec![topology_to_value(t)], depth, outcome)
}

/// The same check on `({t! : t ≥ k}, 1)`, whose base is not shift-invariant.
/// Every candidate witness level from the target level up to `depth` is
/// tried; the report is expected to fail.
pub fn check_shift_continuity_impostor(depth: u64) -> CheckReport {
    let outcome = run(Slot::RawFactorials, Slot::Top, depth, |u| {
        let k = u.li.as_ref().map_or(0, BaseIndex::max_level);
        (k..=depth)
            .map(|l| NbhdParams::new(u.n + 1, u.m + 1, Some(BaseIndex::Level(l)), None))
            .collect()
    });
    let input = json!({"left": {"kind": "raw-factorials"}, "right": {"kind": "top"}});
    report(vec![input], depth, outcome)
}

fn report(
    inputs: Vec<serde_json::Value>,
    depth: u64,
    outcome: RunOutcome,
) -> CheckReport {
    let params = json!({"depth": depth, "cap": cap_for(depth)});
    match outcome {
        Ok(ws) => CheckReport {
            check: "shift-continuity".into(),
            inputs,
            params,
            verdict: CheckVerdict::Pass,
            witnesses: ws
                .iter()
                .map(|(c, u, v)| json!({"case": c, "target": params_json(u), "witness": params_json(v)}))
                .collect(),
        },
        Err((u, misses)) => {
            let tried: Vec<_> = misses
                .iter()
                .map(|(v, e)| {
                    json!({
                        "candidate": params_json(v),
                        "case": e.case,
                        "point": [e.point.0, e.point.1],
                        "image": [e.image.0, e.image.1],
                    })
                })
                .collect();
            CheckReport {
                check: "shift-continuity".into(),
                inputs,
                params,
                verdict: CheckVerdict::Fail { counterexample: json!({"target": params_json(&u), "escapes": tried}) },
                witnesses: Vec::new(),
            }
        }
    }
}

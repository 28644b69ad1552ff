//! Separation, inversion, accumulation and trace checks.

use rayon::prelude::*;
use serde_json::json;

use super::{CheckReport, CheckVerdict};
use crate::bicyclic::multiply_small;
use crate::descriptor::topology_to_value;
use crate::filters::Verdict;
use crate::topology::{compare_sif_one, NbhdParams, Refinement, Side, WeakTopology};

fn params_json(p: &NbhdParams) -> serde_json::Value {
    serde_json::to_value(p).expect("params serialise")
}

/// Separates zero from every `(a,b)` with `a, b ≤ point_bound`.
pub fn check_hausdorff(t: &WeakTopology, point_bound: u64) -> CheckReport {
    let params_for = |a: u64, b: u64| {
        NbhdParams::new(
            a,
            b,
            t.left.filter().map(|f| f.base_escape_index(b)),
            t.right.filter().map(|f| f.base_escape_index(a)),
        )
    };
    let mut witnesses = Vec::new();
    let mut verdict = CheckVerdict::Pass;
    'outer: for a in 0..=point_bound {
        for b in 0..=point_bound {
            let p = params_for(a, b);
            if t.member_u64(&p, a, b) {
                verdict = CheckVerdict::Fail { counterexample: json!({"point": [a, b], "params": params_json(&p)}) };
                break 'outer;
            }
            if (a, b) == (0, 0) || (a, b) == (point_bound, point_bound) {
                witnesses.push(json!({"point": [a, b], "params": params_json(&p)}));
            }
        }
    }
    CheckReport {
        check: "hausdorff".into(),
        inputs: vec![topology_to_value(t)],
        params: json!({"point_bound": point_bound}),
        verdict,
        witnesses,
    }
}

/// Inversion maps the neighbourhood `(n,m,li,ri)` onto `(m,n,ri,li)` of the
/// transposed pair, so it is continuous exactly when both slots agree.
pub fn check_inversion_continuity(t: &WeakTopology, depth: u64) -> CheckReport {
    let component = compare_sif_one(&t.left, &t.right, depth);
    let base = |verdict, witnesses| CheckReport {
        check: "inversion-continuity".into(),
        inputs: vec![topology_to_value(t)],
        params: json!({"depth": depth}),
        verdict,
        witnesses,
    };
    let certificate = serde_json::to_value(&component).expect("verdict serialises");
    match component.verdict {
        Verdict::Equal => base(CheckVerdict::Pass, vec![certificate]),
        Verdict::Unknown { bound } => base(CheckVerdict::Unknown { bound }, vec![certificate]),
        _ => {
            let transposed = t.transposed();
            // a neighbourhood of `t` containing no neighbourhood of the
            // transpose has a preimage under inversion containing no
            // neighbourhood of `t`
            let (neighbourhood, point) = match t.refinement_witness(&transposed, depth) {
                Refinement::Failure { coarse, point } => (coarse, point.map(|(a, b)| (b, a))),
                _ => match transposed.refinement_witness(t, depth) {
                    Refinement::Failure { coarse, point } => {
                        (NbhdParams::new(coarse.m, coarse.n, coarse.ri, coarse.li), point)
                    }
                    _ => return base(CheckVerdict::Unknown { bound: depth }, vec![certificate]),
                },
            };
            let preimage = NbhdParams::new(
                neighbourhood.m,
                neighbourhood.n,
                neighbourhood.ri.clone(),
                neighbourhood.li.clone(),
            );
            let counterexample = json!({
                "neighbourhood": params_json(&neighbourhood),
                "preimage": params_json(&preimage),
                "point": point.map(|(a, b)| [a.to_string(), b.to_string()]),
            });
            base(CheckVerdict::Fail { counterexample }, vec![certificate])
        }
    }
}

/// Finds, inside each sampled neighbourhood, a point of the σ-class `k`
/// whose larger coordinate exceeds `bound`.
pub fn check_sigma_accumulation(t: &WeakTopology, k: i64, bound: u64) -> CheckReport {
    let mut samples = vec![0, 1, bound / 2, bound];
    samples.sort_unstable();
    samples.dedup();
    let limit = 4 * bound + k.unsigned_abs() + 64;
    let mut witnesses = Vec::new();
    let mut verdict = CheckVerdict::Pass;
    'outer: for &n in &samples {
        for &m in &samples {
            for &level in &samples {
                for p in t.params_shapes(n, m, level) {
                    let found = (0..=limit).find_map(|c| {
                        let (a, b) = if k >= 0 { (c + k as u64, c) } else { (c, c + k.unsigned_abs()) };
                        (a.max(b) > bound && t.member_u64(&p, a, b)).then_some((a, b))
                    });
                    match found {
                        Some((a, b)) => {
                            if n == bound && m == bound && level == bound {
                                witnesses.push(json!({"params": params_json(&p), "point": [a, b]}));
                            }
                        }
                        None => {
                            verdict = CheckVerdict::Unknown { bound: limit };
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    CheckReport {
        check: "sigma-accumulation".into(),
        inputs: vec![topology_to_value(t)],
        params: json!({"k": k, "bound": bound}),
        verdict,
        witnesses,
    }
}

/// The inclusions `(i,j)·A_{n+j} ⊆ A_n`, `A_n·(i,j) ⊆ A_n`, `A_n·A_n ⊆ A_n`
/// and their duals for `B_n`, for `i, j, n ≤ bound`. Pairs are enumerated
/// with coordinates up to `max(50, 4·bound)`; past that the first (or second)
/// coordinate of a product only grows.
pub fn check_tau_l_identities(bound: u64) -> CheckReport {
    let cap = 50.max(4 * bound);
    let fail = (0..=bound).into_par_iter().find_map_first(|n| {
        let a_set = |from: u64| -> Vec<(u64, u64)> {
            (from + 1..=cap).flat_map(|k| (0..=cap).map(move |m| (k, m))).collect()
        };
        let in_a = |x: (u64, u64)| x.0 > n;
        let in_b = |x: (u64, u64)| x.1 > n;
        let an = a_set(n);
        let bn: Vec<(u64, u64)> = an.iter().map(|&(k, m)| (m, k)).collect();
        for i in 0..=bound {
            for j in 0..=bound {
                let s = (i, j);
                for x in a_set(n + j) {
                    if !in_a(multiply_small(s, x)) {
                        return Some(json!({"identity": "(i,j)·A_{n+j} ⊆ A_n", "n": n, "s": [i, j], "x": [x.0, x.1]}));
                    }
                }
                for &x in &an {
                    if !in_a(multiply_small(x, s)) {
                        return Some(json!({"identity": "A_n·(i,j) ⊆ A_n", "n": n, "s": [i, j], "x": [x.0, x.1]}));
                    }
                }
                for x in a_set(n + i).into_iter().map(|(k, m)| (m, k)) {
                    if !in_b(multiply_small(x, s)) {
                        return Some(json!({"identity": "B_{n+i}·(i,j) ⊆ B_n", "n": n, "s": [i, j], "x": [x.0, x.1]}));
                    }
                }
                for &x in &bn {
                    if !in_b(multiply_small(s, x)) {
                        return Some(json!({"identity": "(i,j)·B_n ⊆ B_n", "n": n, "s": [i, j], "x": [x.0, x.1]}));
                    }
                }
            }
        }
        for &x in &an {
            for &y in &an {
                if !in_a(multiply_small(x, y)) {
                    return Some(json!({"identity": "A_n·A_n ⊆ A_n", "n": n, "x": [x.0, x.1], "y": [y.0, y.1]}));
                }
            }
        }
        for &x in &bn {
            for &y in &bn {
                if !in_b(multiply_small(x, y)) {
                    return Some(json!({"identity": "B_n·B_n ⊆ B_n", "n": n, "x": [x.0, x.1], "y": [y.0, y.1]}));
                }
            }
        }
        None
    });
    let verdict = match fail {
        Some(counterexample) => CheckVerdict::Fail { counterexample },
        None => CheckVerdict::Pass,
    };
    let example = multiply_small((2, 3), (9, 0));
    CheckReport {
        check: "tau-l-identities".into(),
        inputs: vec![topology_to_value(&WeakTopology::tau_L()), topology_to_value(&WeakTopology::tau_R())],
        params: json!({"bound": bound, "cap": cap}),
        verdict,
        witnesses: vec![json!({"product": "(2,3)·(9,0)", "value": [example.0, example.1], "in": "A_5"})],
    }
}

/// Row traces at rows `i, j ≤ rows` generate the same filter: for every
/// level `k ≤ levels`, shifting the row-`j` trace at the shift-witness level
/// by `i − j` lands inside the row-`i` trace at level `k`. Checked for every
/// point up to `cap`.
pub fn check_trace_equality(t: &WeakTopology, rows: u64, levels: u64, cap: u64) -> CheckReport {
    let jobs: Vec<(u64, u64, u64)> = (0..=levels)
        .flat_map(|k| (0..=rows).flat_map(move |i| (0..=rows).map(move |j| (k, i, j))))
        .collect();
    let fail = jobs.par_iter().find_map_first(|&(k, i, j)| {
        let d = i as i64 - j as i64;
        let target = t.params_at(rows, k, k);
        let witness = NbhdParams::new(
            rows,
            k + d.unsigned_abs(),
            target.li.as_ref().map(|x| x.raised(d.unsigned_abs())),
            target.ri.as_ref().map(|x| x.raised(d.unsigned_abs())),
        );
        let ti = t.filter_trace(Side::Row, i, &target).expect("params from the topology's own shapes");
        let tj = t.filter_trace(Side::Row, j, &witness).expect("params from the topology's own shapes");
        (0..=cap).find_map(|x| {
            let y = x as i64 + d;
            (y >= 0 && tj.contains(x) && !ti.contains(y as u64)).then(|| {
                json!({"rows": [i, j], "level": k, "target": params_json(&target),
                       "witness": params_json(&witness), "point": x, "shifted": y})
            })
        })
    });
    let verdict = match fail {
        Some(counterexample) => CheckVerdict::Fail { counterexample },
        None => CheckVerdict::Pass,
    };
    CheckReport {
        check: "trace-equality".into(),
        inputs: vec![topology_to_value(t)],
        params: json!({"rows": rows, "levels": levels, "cap": cap}),
        verdict,
        witnesses: Vec::new(),
    }
}

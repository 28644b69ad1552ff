//! Finite antichains and chains of weak topologies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{CheckReport, CheckVerdict};
use crate::descriptor::topology_to_value;
use crate::filters::{SiFilter, Verdict};
use crate::omega::{ad_family, tower, OmegaError, OmegaSet};
use crate::topology::{compare_topologies, SifOne, WeakTopology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AntichainFlavor {
    /// `F_A` over the residue classes modulo `m`.
    Residues,
    /// The filter generated by each residue class on its own.
    FilterInduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainFlavor {
    /// `F_{T_j}` over the multiples of `2^j`.
    Tower,
    /// Filters generated by growing prefixes of the same tower.
    FilterChain,
}

/// Topologies together with the comparison reports that certify their shape.
#[derive(Clone, Debug)]
pub struct Family {
    pub topologies: Vec<WeakTopology>,
    pub reports: Vec<CheckReport>,
}

fn topology_over(f: SiFilter) -> WeakTopology {
    WeakTopology::from_pair(SifOne::Filter(f), SifOne::frechet())
}

fn pair_report(check: &str, t: &[WeakTopology], i: usize, j: usize, expected: Verdict, bound: u64) -> CheckReport {
    let v = compare_topologies(&t[i], &t[j], bound);
    let verdict = match &v.verdict {
        got if *got == expected => CheckVerdict::Pass,
        Verdict::Unknown { bound } => CheckVerdict::Unknown { bound: *bound },
        got => CheckVerdict::Fail { counterexample: json!({"pair": [i, j], "verdict": got}) },
    };
    CheckReport {
        check: check.into(),
        inputs: vec![topology_to_value(&t[i]), topology_to_value(&t[j])],
        params: json!({"pair": [i, j], "bound": bound}),
        verdict,
        witnesses: vec![serde_json::to_value(&v).expect("verdict serialises")],
    }
}

/// `m` pairwise incomparable topologies with one report per unordered pair,
/// in lexicographic pair order.
pub fn build_antichain(m: u64, flavor: AntichainFlavor, bound: u64) -> Result<Family, OmegaError> {
    if m < 1 {
        return Err(OmegaError::TooSmall { what: "antichain size", min: 1 });
    }
    let topologies: Vec<WeakTopology> = ad_family(m)?
        .into_iter()
        .map(|a| {
            let f = match flavor {
                AntichainFlavor::Residues => SiFilter::Factorial(a),
                AntichainFlavor::FilterInduced => SiFilter::from_filter_base(vec![a]).expect("a single infinite set"),
            };
            topology_over(f)
        })
        .collect();
    let n = topologies.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let reports = pairs
        .par_iter()
        .map(|&(i, j)| pair_report("antichain-pair", &topologies, i, j, Verdict::Incomparable, bound))
        .collect();
    Ok(Family { topologies, reports })
}

/// A strictly increasing chain of length `m` with one report per consecutive
/// pair.
pub fn build_chain(m: u64, flavor: ChainFlavor, bound: u64) -> Result<Family, OmegaError> {
    let sets = tower(m, 2)?;
    let topologies: Vec<WeakTopology> = match flavor {
        ChainFlavor::Tower => sets.into_iter().map(|s| topology_over(SiFilter::Factorial(s))).collect(),
        ChainFlavor::FilterChain => (1..=sets.len())
            .map(|j| {
                let prefix: Vec<OmegaSet> = sets[..j].to_vec();
                topology_over(SiFilter::from_filter_base(prefix).expect("tower prefixes are proper"))
            })
            .collect(),
    };
    let reports = (0..topologies.len().saturating_sub(1))
        .into_par_iter()
        .map(|i| pair_report("chain-step", &topologies, i, i + 1, Verdict::Less, bound))
        .collect();
    Ok(Family { topologies, reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_antichains() {
        let fam = build_antichain(2, AntichainFlavor::Residues, 10).unwrap();
        assert_eq!(fam.reports.len(), 1);
        assert!(fam.reports[0].is_pass());
        let fam = build_antichain(1, AntichainFlavor::Residues, 10).unwrap();
        assert!(fam.reports.is_empty());
        let fam = build_antichain(4, AntichainFlavor::FilterInduced, 6).unwrap();
        assert_eq!(fam.reports.len(), 6);
        assert!(fam.reports.iter().all(CheckReport::is_pass));
    }

    #[test]
    fn small_chains() {
        let fam = build_chain(5, ChainFlavor::Tower, 10).unwrap();
        assert_eq!(fam.topologies.len(), 5);
        assert!(fam.reports.iter().all(CheckReport::is_pass));
        let fam = build_chain(4, ChainFlavor::FilterChain, 6).unwrap();
        assert!(fam.reports.iter().all(CheckReport::is_pass), "{:?}", fam.reports);
        let fam = build_chain(1, ChainFlavor::Tower, 10).unwrap();
        assert!(fam.reports.is_empty());
    }
}

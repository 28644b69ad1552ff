use serde_json::{json, Value};
use thiserror::Error;

use weaktop::descriptor::{
    filter_to_value, load, load_topology, omega_set_to_value, sif_one_to_value, topology_to_value, Descriptor,
    DescriptorError,
};
use weaktop::topology::{compare_sif_one, join_sif_one, meet_sif_one};
use weaktop::verify::{
    build_antichain, build_chain, check_hausdorff, check_inversion_continuity, check_shift_continuity,
    check_sigma_accumulation, AntichainFlavor, ChainFlavor, Family,
};
use weaktop::{
    compare_filters, compare_topologies, join_filters, join_topologies, meet_filters, meet_topologies, BaseIndex,
    BicyclicError, CheckReport, CheckVerdict, Element, FilterError, JoinOutcome, NbhdParams, OmegaError, Side, SifOne,
    SiFilter, TopologyError, Verdict, WeakTopology,
};

use crate::args::{
    AntichainArgs, AntichainFlavorArg, BinaryArgs, ChainArgs, ChainFlavorArg, Command, MemberArgs, Suite, TraceArgs,
    VerifyArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Element(#[from] BicyclicError),
    #[error(transparent)]
    Omega(#[from] OmegaError),
    #[error(transparent)]
    Index(#[from] FilterError),
    #[error("invalid --params `{0}`: expected n,m[,li,ri]")]
    Params(String),
    #[error("{0}")]
    Operands(String),
}

/// Reports plus the lines shown in human format.
pub struct Output {
    pub reports: Vec<CheckReport>,
    pub human: Vec<String>,
}

impl Output {
    /// 0 pass, 1 any failure, 3 any unknown otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().any(CheckReport::is_fail) {
            1
        } else if self.reports.iter().any(CheckReport::is_unknown) {
            3
        } else {
            0
        }
    }
}

pub fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Order(a) => order(a),
        Command::Join(a) => join(a),
        Command::Meet(a) => meet(a),
        Command::Member(a) => member(a),
        Command::Trace(a) => trace(a),
        Command::Verify(a) => verify(a),
        Command::Antichain(a) => antichain(a),
        Command::Chain(a) => chain(a),
    }
}

fn descriptor_value(d: &Descriptor) -> Value {
    match d {
        Descriptor::OmegaSet(s) => omega_set_to_value(s),
        Descriptor::Filter(f) => filter_to_value(f),
        Descriptor::SifOne(s) => sif_one_to_value(s),
        Descriptor::Topology(t) => topology_to_value(t),
    }
}

/// Operands of a binary lattice command, lifted to a common kind.
enum Operands {
    Filters(SiFilter, SiFilter),
    SifOnes(SifOne, SifOne),
    Topologies(WeakTopology, WeakTopology),
}

fn operands(a: &Descriptor, b: &Descriptor) -> Result<Operands, CliError> {
    let lift = |d: &Descriptor| match d {
        Descriptor::Filter(f) => Some(SifOne::Filter(f.clone())),
        Descriptor::SifOne(s) => Some(s.clone()),
        _ => None,
    };
    match (a, b) {
        (Descriptor::Filter(f), Descriptor::Filter(g)) => Ok(Operands::Filters(f.clone(), g.clone())),
        (Descriptor::Topology(s), Descriptor::Topology(t)) => Ok(Operands::Topologies(s.clone(), t.clone())),
        _ => match (lift(a), lift(b)) {
            (Some(x), Some(y)) => Ok(Operands::SifOnes(x, y)),
            _ => Err(CliError::Operands(
                "operands must both be topologies, or both filters or SIF¹ elements".into(),
            )),
        },
    }
}

fn binary_inputs(a: &BinaryArgs) -> Result<(Descriptor, Descriptor), CliError> {
    Ok((load(&a.left)?, load(&a.right)?))
}

fn single(check: &str, inputs: Vec<Value>, params: Value, verdict: CheckVerdict, witness: Value) -> CheckReport {
    CheckReport { check: check.into(), inputs, params, verdict, witnesses: vec![witness] }
}

fn verdict_status(v: &Verdict) -> CheckVerdict {
    match v {
        Verdict::Unknown { bound } => CheckVerdict::Unknown { bound: *bound },
        _ => CheckVerdict::Pass,
    }
}

fn order(a: &BinaryArgs) -> Result<Output, CliError> {
    let (x, y) = binary_inputs(a)?;
    let (verdict, certificate) = match operands(&x, &y)? {
        Operands::Filters(f, g) => {
            let v = compare_filters(&f, &g, a.bound);
            (v.verdict.clone(), serde_json::to_value(&v).expect("verdict serialises"))
        }
        Operands::SifOnes(s, t) => {
            let v = compare_sif_one(&s, &t, a.bound);
            (v.verdict.clone(), serde_json::to_value(&v).expect("verdict serialises"))
        }
        Operands::Topologies(s, t) => {
            let v = compare_topologies(&s, &t, a.bound);
            (v.verdict.clone(), serde_json::to_value(&v).expect("verdict serialises"))
        }
    };
    let report = single(
        "order",
        vec![descriptor_value(&x), descriptor_value(&y)],
        json!({"bound": a.bound}),
        verdict_status(&verdict),
        certificate.clone(),
    );
    let name = match &verdict {
        Verdict::Unknown { bound } => format!("Unknown (bound {bound})"),
        v => format!("{v:?}"),
    };
    Ok(Output { reports: vec![report], human: vec![name, format!("certificate: {certificate}")] })
}

fn lattice_output(check: &str, x: &Descriptor, y: &Descriptor, bound: u64, result: Result<Descriptor, u64>) -> Output {
    let inputs = vec![descriptor_value(x), descriptor_value(y)];
    match result {
        Ok(d) => {
            let v = descriptor_value(&d);
            let report = single(check, inputs, json!({"bound": bound}), CheckVerdict::Pass, json!({"result": v}));
            Output { reports: vec![report], human: vec![v.to_string()] }
        }
        Err(b) => {
            let report = CheckReport {
                check: check.into(),
                inputs,
                params: json!({"bound": bound}),
                verdict: CheckVerdict::Unknown { bound: b },
                witnesses: Vec::new(),
            };
            Output { reports: vec![report], human: vec![format!("unknown within bound {b}")] }
        }
    }
}

fn join(a: &BinaryArgs) -> Result<Output, CliError> {
    let (x, y) = binary_inputs(a)?;
    let result = match operands(&x, &y)? {
        Operands::Filters(f, g) => match join_filters(&f, &g, a.bound) {
            JoinOutcome::Filter(h) => Ok(Descriptor::Filter(h)),
            JoinOutcome::Top { .. } => Ok(Descriptor::SifOne(SifOne::Top)),
            JoinOutcome::Unknown { bound } => Err(bound),
        },
        Operands::SifOnes(s, t) => match join_sif_one(&s, &t, a.bound) {
            Ok(j) => Ok(Descriptor::SifOne(j)),
            Err(TopologyError::Undecided { bound }) => Err(bound),
            Err(e) => return Err(e.into()),
        },
        Operands::Topologies(s, t) => match join_topologies(&s, &t, a.bound) {
            Ok(j) => Ok(Descriptor::Topology(j)),
            Err(TopologyError::Undecided { bound }) => Err(bound),
            Err(e) => return Err(e.into()),
        },
    };
    Ok(lattice_output("join", &x, &y, a.bound, result))
}

fn meet(a: &BinaryArgs) -> Result<Output, CliError> {
    let (x, y) = binary_inputs(a)?;
    let result = match operands(&x, &y)? {
        Operands::Filters(f, g) => Descriptor::Filter(meet_filters(&f, &g)),
        Operands::SifOnes(s, t) => Descriptor::SifOne(meet_sif_one(&s, &t)),
        Operands::Topologies(s, t) => Descriptor::Topology(meet_topologies(&s, &t)),
    };
    Ok(lattice_output("meet", &x, &y, a.bound, Ok(result)))
}

/// Splits at commas outside parentheses.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut from) = (0i32, 0usize);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[from..i]);
                from = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[from..]);
    parts
}

/// `n,m[,li,ri]`, validated against the topology.
fn parse_params(t: &WeakTopology, text: &str) -> Result<NbhdParams, CliError> {
    let bad = || CliError::Params(text.to_string());
    let parts = split_top_level(text);
    let number = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let index = |s: &str| -> Result<Option<BaseIndex>, CliError> {
        match s.trim() {
            "-" => Ok(None),
            other => Ok(Some(other.parse()?)),
        }
    };
    let p = match parts.as_slice() {
        [n, m] => NbhdParams::new(number(n)?, number(m)?, None, None),
        [n, m, li, ri] => NbhdParams::new(number(n)?, number(m)?, index(li)?, index(ri)?),
        _ => return Err(bad()),
    };
    t.validate(&p)?;
    Ok(p)
}

fn member(a: &MemberArgs) -> Result<Output, CliError> {
    let t = load_topology(&a.topology)?;
    let p = parse_params(&t, &a.params)?;
    let e: Element = a.point.parse()?;
    let inside = t.nbhd_member(&p, &e)?;
    let report = single(
        "member",
        vec![topology_to_value(&t)],
        json!({"point": e.to_string(), "params": p}),
        CheckVerdict::Pass,
        json!({"member": inside}),
    );
    Ok(Output { reports: vec![report], human: vec![inside.to_string()] })
}

fn trace(a: &TraceArgs) -> Result<Output, CliError> {
    let t = load_topology(&a.topology)?;
    let p = parse_params(&t, &a.params)?;
    let (side, i) = match (a.row, a.column) {
        (Some(i), _) => (Side::Row, i),
        (None, Some(i)) => (Side::Column, i),
        (None, None) => unreachable!("clap requires one of --row and --column"),
    };
    let oracle = t.filter_trace(side, i, &p)?;
    let members: Vec<u64> = (0..=a.upto).filter(|&x| oracle.contains(x)).collect();
    let line = members.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let report = single(
        "trace",
        vec![topology_to_value(&t)],
        json!({"side": side, "index": i, "params": p, "upto": a.upto}),
        CheckVerdict::Pass,
        json!({"members": members}),
    );
    Ok(Output { reports: vec![report], human: vec![line] })
}

fn report_line(r: &CheckReport) -> String {
    match &r.verdict {
        CheckVerdict::Pass => format!("PASS {}", r.check),
        CheckVerdict::Fail { counterexample } => format!("FAIL {}: {counterexample}", r.check),
        CheckVerdict::Unknown { bound } => format!("UNKNOWN {} (bound {bound})", r.check),
    }
}

fn verify(a: &VerifyArgs) -> Result<Output, CliError> {
    let t = load_topology(&a.topology)?;
    let want = |s: Suite| a.suite == Suite::All || a.suite == s;
    let mut reports = Vec::new();
    if want(Suite::Continuity) {
        reports.push(check_shift_continuity(&t, a.depth));
    }
    if want(Suite::Hausdorff) {
        reports.push(check_hausdorff(&t, a.point_bound));
    }
    if want(Suite::Inversion) {
        reports.push(check_inversion_continuity(&t, a.depth));
    }
    if want(Suite::Accumulation) {
        for k in [-2, 0, 2] {
            reports.push(check_sigma_accumulation(&t, k, a.bound));
        }
    }
    let human = reports.iter().map(report_line).collect();
    Ok(Output { reports, human })
}

fn family_output(fam: Family) -> Output {
    let mut human: Vec<String> =
        fam.topologies.iter().enumerate().map(|(i, t)| format!("[{i}] {t}")).collect();
    let count = |f: fn(&CheckReport) -> bool| fam.reports.iter().filter(|r| f(r)).count();
    human.push(format!(
        "{} reports: {} pass, {} fail, {} unknown",
        fam.reports.len(),
        count(CheckReport::is_pass),
        count(CheckReport::is_fail),
        count(CheckReport::is_unknown)
    ));
    human.extend(fam.reports.iter().filter(|r| !r.is_pass()).map(|r| format!("{} {}", report_line(r), r.params)));
    Output { reports: fam.reports, human }
}

fn antichain(a: &AntichainArgs) -> Result<Output, CliError> {
    let flavor = match a.flavor {
        AntichainFlavorArg::Residues => AntichainFlavor::Residues,
        AntichainFlavorArg::FilterInduced => AntichainFlavor::FilterInduced,
    };
    Ok(family_output(build_antichain(a.size, flavor, a.bound)?))
}

fn chain(a: &ChainArgs) -> Result<Output, CliError> {
    let flavor = match a.flavor {
        ChainFlavorArg::Tower => ChainFlavor::Tower,
        ChainFlavorArg::FilterChain => ChainFlavor::FilterChain,
    };
    Ok(family_output(build_chain(a.length, flavor, a.bound)?))
}

//! Weak shift-continuous topologies on the bicyclic monoid with an adjoined
//! zero, as an exact computable lattice.
//!
//! The layers build on each other:
//!
//! * [`bicyclic`]: the monoid itself.
//! * [`omega`]: decidable descriptors of subsets of ω.
//! * [`filters`]: finitely represented shift-invariant filters and their order.
//! * [`topology`]: weak topologies as pairs of filters or the top element.
//! * [`verify`]: bounded checks that produce re-checkable reports.
//! * [`descriptor`]: the JSON text format shared with the command line.

pub mod bicyclic;
mod decimal;
pub mod descriptor;
pub mod filters;
pub mod omega;
pub mod topology;
pub mod verify;

pub use bicyclic::{multiply_small, BicyclicError, Element};
pub use filters::{
    compare_filters, join_filters, meet_filters, BaseIndex, BaseSet, Certificate, CharacterTag, FilterError,
    JoinOutcome, OrderVerdict, SiFilter, Verdict,
};
pub use omega::{ad_family, tower, OmegaError, OmegaSet, Progression, SetRelation};
pub use topology::{
    compare_topologies, join_topologies, meet_topologies, NbhdParams, Refinement, Side, SifOne, TopologyError,
    TopologyVerdict, WeakTopology,
};

pub use verify::{CheckReport, CheckVerdict};

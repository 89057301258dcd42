//! Exact combinatorics of tight contact structures on plumbed 3-manifolds.
//!
//! The crate is organized around five calculi:
//!
//! - [`cfrac`]: negative continued fractions, their convergents, and the
//!   identities relating an expansion to its decremented and reversed forms.
//! - [`slope`]: projective slope arithmetic, gluing-matrix actions, the Farey
//!   bypass rule, and edge-rounding slopes.
//! - [`cycles`]: cyclic plumbing chains, torus-bundle monodromy, the
//!   blowup/blowdown rewriting engine, dual cycles, and embeddability.
//! - [`legendrian`]: front-projection invariants, stabilization enumeration,
//!   Chern cochains, and the d3 invariant.
//! - [`census`]: the assembled classification counts with fillability labels.
//!
//! Everything is exact integer or rational arithmetic; no floating point.

pub mod census;
pub mod cfrac;
pub mod cycles;
pub mod error;
pub mod legendrian;
pub mod slope;

pub use census::{
    census, cyclic_census, enumerate_tight, honda_count, CensusOptions, CensusReport, Counts,
    Fillability, PlumbingSpec, StructureDescriptor, Twisting,
};
pub use cfrac::{
    convergents, eval_neg_cf, expand_neg_cf, verify_appendix, AppendixReport, Cfrac, Convergents,
    LemmaCheck,
};
pub use cycles::{
    blow_down, blow_up, blowup_census, dual_cycle, dual_cycle_with_bound, enumerate_blowups,
    find_dominating_blowup, is_embeddable, is_hyperbolic, monodromy, BlowupNode, BlowupStyle,
    CyclicChain, Embeddability, EmbeddingWitness, MonodromyClass, Sign,
};
pub use error::{Error, Result};
pub use legendrian::{
    chern_cochain, count_distinct_spinc, d3, enumerate_rotation_vectors, invariants, stabilize,
    ChernCochain, FillingData, FrontDiagram, KnotClass, LegendrianInvariants, RotationVector,
};
pub use slope::{
    act, build_matrices, bypass_on_dividing_set, bypass_slope, edge_round_slope, is_farey_edge,
    normal_form_targets, slope_triple, DividingSet, IntMat2, Side, Slope,
};

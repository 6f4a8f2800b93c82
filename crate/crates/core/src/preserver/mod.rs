//! Maps on states, invariance checks, Wigner-type reconstruction and the
//! numerical lemma checks used to characterize preservers.

mod invariance;
mod lemmas;
mod map;
mod wigner;

pub use invariance::{
    check_invariance, mixed_rank, verify_conjugation, ConjugationReport, InvarianceReport,
    InvarianceWitness,
};
pub use lemmas::{
    functional_eq_residual, order_dominance_test, orthogonality_indicator, prop1_grid,
    prop1_refutation, prop1_sides, thm4_scalar_test, trace_similarity_check, OrderDominance,
    OrderVerdict, Prop1Witness, Thm4Report, Thm4Verdict, TraceSimilarity, PROBE_DELTA, PROP1_GRID,
    PROP1_LOWER, PROP1_UPPER,
};
pub use map::{conjugate, weyl, StateMap, SymmetryKind, MAP_TOL};
pub use wigner::{
    fix_global_phase, wigner_reconstruct, WignerImages, WignerResult, TRANSITION_TOL,
};

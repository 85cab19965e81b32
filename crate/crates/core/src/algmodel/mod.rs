//! The algebra model: index sets, the evaluation map, the symbolic trace, the
//! two constructions of `G'_{2k}` and the degree function.

pub mod basis;
pub mod corollary;
pub mod degree;
pub mod enumerate;
pub mod g2k;
pub mod phi;
pub mod trace;
pub mod verify;

pub use basis::HLBasis;
pub use corollary::{corollary_eval, corollary_poly, CorollaryEvaluator};
pub use degree::{l_degree, representative_search, SearchOutcome};
pub use enumerate::{compositions, d_count, enum_d, enum_d_filter, IndexTuple};
pub use g2k::{
    build_g2k_hl, build_g2k_trace, complete_homogeneous, constant_sum_check, g2k_hl_part, gz_identity, theorem3_check,
    ConstantSum, GFraction, HlBuild, Theorem3Report,
};
pub use phi::{phi_eval, PhiProgram};
pub use trace::{g2k_trace_symbolic, lemma5_check, lemma5_prediction, trace_symbolic, AlphaMonomial, Lemma5Report, SymbolicTrace};
pub use verify::{plan, run_job, verify_suite, CaseRecord, Job, Status};

//! Exact algebra model and numerics for higher-order sum rules of
//! orthogonal polynomials on the unit circle.

pub mod algmodel;
pub mod coeff;
pub mod error;
pub mod lab;
pub mod laurent;
pub mod opuc;
pub mod trig;

pub use coeff::GaussRat;
pub use error::{AlgebraError, LabError, OpucError, ParseError, TrigError};
pub use laurent::{divided_diff, LaurentPoly, NumericPoly, VarKind, VarTable};
pub use lab::{convergence_study, condition_diagnostics, export_report, GemReport, SequenceFamily, StudyConfig, Verdict};
pub use opuc::{bs_weight_quadrature, ggt_matrix, sum_rule_functional, trace_v, GgtMatrix, VerblunskySeq};
pub use trig::{Angle, CriticalPoint, CriticalPoints, ExactTrigPoly, NumericTrigPoly};

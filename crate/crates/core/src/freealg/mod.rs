//! The free algebra on two generators, its weighted `l1` norms, the map onto
//! the universal enveloping algebra of `vect` and the induced quotient norms.

pub mod lp;
pub mod pbw;
pub mod qnorm;
pub mod word;

pub use lp::{LinearProgram, LpOutcome, PivotRule};
pub use pbw::{pbw_basis, pbw_straighten, pi_map, PbwMonomial, Strategy, UElement};
pub use qnorm::{
    inclusion_check, q1_norm, q1_norm_joint, q_lower_vect, q_norm_weighted, q_upper_vect, qt_norm,
    recursion_bound, represent, ComponentSolution, InclusionReport, InclusionRow, LowerCertificate,
    QNorm, UpperEstimate,
};
pub use word::{r_norm, words_of_degree, NCPolynomial, Word};

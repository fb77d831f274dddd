//! Exact weighted growth computations in the Grigorchuk 2-group.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`] and [`approx`]: exact arithmetic in Q(η) and rigorous real
//!   enclosures for quantities outside the field;
//! * [`group`] and [`portrait`]: the recursive action, reduction, ψ and
//!   canonical portraits;
//! * [`metrics`] and [`table`]: weighted lengths, ball enumeration and the
//!   growth function;
//! * [`encoding`]: tree representations of elements and the resulting
//!   counting bound;
//! * [`verify`]: exhaustive checks of the quantitative claims behind that
//!   bound.

pub mod approx;
pub mod encoding;
pub mod error;
pub mod field;
pub mod group;
pub mod metrics;
pub mod portrait;
pub mod table;
pub mod verify;

pub use approx::ApproxReal;
pub use encoding::{
    alpha, catalan, decode, encode, leaf_budget, upper_bound, zeta, CodeTree, LeafBudgetParams, RootLabel,
};
pub use error::{Error, Result};
pub use field::FieldElement;
pub use group::{act, activity, is_trivial, psi_split, reduce, BinaryString, Generator, SectionTable, Word};
pub use metrics::{
    enumerate_ball, estimate_alpha, fit_exponent, growth_function, growth_series, length_of, word_weight, BallEntry,
    BallTable, ExponentFit, WeightScheme,
};
pub use portrait::{canonical_key, Nucleus, Portrait};
pub use table::{load_table, save_table};
pub use verify::{
    check_weight_identities, verify_injection, verify_leaf_budget_properties, verify_minimal_form,
    verify_psi_consistency, verify_shortening, LeafBudgetFindings, VerificationReport, Violation,
};

//! Exact linear-extension counting and balanced-pair search for finite
//! posets, with a constructive search for N-free posets and exhaustive
//! small-size verification.

pub mod balance;
pub mod error;
pub mod linext;
pub mod nfree;
pub mod poset;
pub mod prob;
pub mod set;
pub mod sortsim;
pub mod verify;

pub use balance::{
    all_pair_probabilities, find_balanced_exhaustive, find_balanced_nfree, select_ab, BalanceCertificate,
    ConstructiveStep, ConstructiveTrace, Method, Probe, Selection,
};
pub use error::{Error, Result};
pub use linext::{
    count_extensions, count_extensions_with, enumerate_extensions, prob_before, q_distribution, CountConfig,
    ExtensionCount, QDistribution,
};
pub use nfree::{find_n, is_n_free, CriticalPair, NWitness};
pub use poset::{transitive_closure, CoverRelation, LevelDecomposition, Poset, Stripped, MAX_ELEMENTS};
pub use prob::PairProbability;
pub use set::ElementSet;
pub use sortsim::{info_lower_bound, simulate_sort, SortTranscript};
pub use verify::{
    canonical_form, census_nfree, enumerate_posets, random_poset, verify_theorem, CanonicalForm, VerificationReport,
};

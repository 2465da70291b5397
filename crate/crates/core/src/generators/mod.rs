// SPDX-License-Identifier: Apache-2.0
//! Instance families: hardness reductions, the separation languages and
//! their semantic membership tests.

mod graph;
mod monoid;
mod sat;
mod separation;

pub use graph::{edge_dfa, gap1_to_dfa, gap2_to_nfa, grid_dfa, vertex_cover_to_ine, Graph};
pub use monoid::{monoid_membership, monoid_to_ine, TransformationSystem};
pub use sat::{
    assignment_of, assignment_word, literal_alphabet, literal_letter, sat_to_commutative_ine,
    CnfFormula,
};
pub use separation::{
    in_l, in_m, in_m_double_prime, l_nfa, m_nfa, mpp_nfa, phi_decode, phi_encode,
    separation_report, zimin, SeparationReport,
};

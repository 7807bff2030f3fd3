//! Builders: negacirculant and four-negacirculant codes, the neighbor
//! transform `A -> A(x,y)`, and seeded candidate generation for searches.

mod negacirculant;
mod neighbor;
mod search;

pub use negacirculant::{
    check_four_nega_self_dual, check_four_nega_type_ii, four_negacirculant, negacirculant, FourNegaSpec,
};
pub use neighbor::{check_transform_type_ii, neighbor_self_dual, neighbor_type_ii, transform_matrix, TransformSpec};
pub use search::{Candidate, CandidateOutcome, Construction, Filters, Rejection, SearchKind, SearchSpace};

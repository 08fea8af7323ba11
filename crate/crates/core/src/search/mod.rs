//! Enumeration of small cubications, flip paths and the census.

mod census;
mod enumerate;
mod path;

pub use census::{
    census, diagonal_model, realize_diagonal_as_flips, CensusReport, ClassInvariant, ClassRecord,
    ComponentRecord, DiagonalRealization, Unresolved,
};
pub use enumerate::enumerate_cubications;
pub use path::{
    flip_path, parse_sequence, replay_sequence, write_sequence, Budget, BudgetDimension, PathOutcome,
    PathResult, SearchError, SequenceError,
};

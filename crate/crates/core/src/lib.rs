//! Toolkit for one-sided subshifts over finite alphabets: languages and
//! follower sets, circuits and exits, the standard partial action of the
//! free group, finite views of the spectrum, and decision procedures for
//! topological freeness, cofinality, minimality and simplicity.

pub mod circuits;
pub mod criteria;
pub mod machine;
pub mod paction;
pub mod shifts;
pub mod spectrum;
pub mod verdict;
pub mod words;

pub use shifts::{FollowerConfig, Point, ShiftError, ShiftKind, ShiftSpec, Subshift};
pub use verdict::{Confidence, ReplayStep, Verdict, Witness};
pub use words::{Alphabet, EvPeriodicWord, FreeGroupElement, Letter, PositivePair, Word};

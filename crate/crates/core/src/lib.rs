//! Exact partial dynamical systems on shift spaces.

pub mod boolean_algebra;
pub mod config;
pub mod free_group;
pub mod ideals;
pub mod partial_action;
pub mod representation;
pub mod report;
pub mod shift_space;
pub mod truth;

pub use free_group::{FreeGroup, Letter, ReducedWord, Symbol, Word};
pub use shift_space::{Alphabet, Point, PresentationKind, ShiftError, ShiftPresentation, Side};
pub use truth::Tri;
pub use boolean_algebra::{Algebra, Atom, Resolution, SymbolicSet};
pub use partial_action::PartialAction;
pub use report::{Report, ReportBuilder, Verdict};
pub use config::SystemConfig;

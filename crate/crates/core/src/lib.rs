//! Kantian-augmented bimatrix games and zero-determinant strategy audits.
//!
//! The crate is organised as a pipeline:
//!
//! * [`game`] builds two-player normal-form games and adds moral (Kantian)
//!   values to strategies;
//! * [`solvers`] finds Nash equilibria and applies four ethics schemes;
//! * [`valuation`] recovers Kantian values from observed play;
//! * [`zd`] computes long-run scores of memory-one strategies in the
//!   iterated prisoner's dilemma and the lines ZD strategies enforce;
//! * [`audit`] turns that geometry into ethics verdicts and runs tournaments;
//! * [`interface`] holds the game-spec format, report writers and the CLI.

pub mod audit;
pub mod error;
pub mod game;
pub mod interface;
pub mod solvers;
pub mod valuation;
pub mod zd;

pub use error::{Error, Result};
pub use game::{
    augment_kantian, builtin_game, expected_payoffs, outcome_table, BimatrixGame, BuiltinGame,
    KantianAnnotation, KantianValue, MixedProfile, OutcomeRow, Player,
};
pub use zd::{MemoryOneStrategy, Move, PdPayoffs};

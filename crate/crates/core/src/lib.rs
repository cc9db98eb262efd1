//! Signatures of Lefschetz fibrations computed from their monodromy words.
//!
//! A fibration is described by a genus, a base (`D2` or `S2`) and a word of
//! Dehn twists. [`compute`] attaches the 2-handles one at a time, adds up the
//! relative signature of each attachment and runs the closed-form checks.
//!
//! ```
//! let spec = lefschetz::parse("genus 1\npreset chain\nbase S2\nword (a b)^6").unwrap();
//! let report = lefschetz::compute(&spec).unwrap();
//! assert_eq!(report.sigma, -8);
//! assert_eq!(report.euler, 12);
//! ```

pub mod catalog;
pub mod checks;
pub mod cycle;
pub mod dsl;
pub mod error;
pub mod fibration;
pub mod homology;
pub mod linalg;
pub mod report;
mod small;
pub mod wall;

pub use catalog::{chain_preset, load_table, preset, CurveTable};
pub use checks::{CheckResult, CheckStatus};
pub use cycle::{CycleKind, VanishingCycle};
pub use dsl::{parse, parse_with, render, ParseOptions};
pub use error::{Error, Result};
pub use fibration::{compute, compute_signature, Base, FibrationReport, FibrationSpec, Hyperelliptic};
pub use homology::{GenusContext, HomologyClass, SymplecticMap};
pub use linalg::{RatMatrix, Rational};
pub use wall::{relative_signature, KernelLine, StepOutcome};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/input-format.md")]
    mod input_format {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/handle-step.md")]
    mod handle_step {}
    #[doc = include_str!("../../../book/src/fibrations.md")]
    mod fibrations {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/achiral.md")]
    mod achiral {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

//! Zelevinsky–Aubert duals, derivatives and socles for p-adic `Sp(2n)` and
//! `SO(2n+1)`, computed on Langlands data.
//!
//! ```
//! use aubert::duality::dual;
//! use aubert::model::GroupType;
//! use aubert::parse::{parse_rep, Decls};
//!
//! let decls = Decls::standard(GroupType::SpEven);
//! let pi = parse_rep("pi(1-,1-,3+,5-,5-)", &decls)?;
//! let (hat, trace) = dual(&pi)?;
//! assert_eq!(hat.to_string(), "L(D[-2,-2],D[-1,-1],D[0,-2];pi(1-,1-,3+))");
//! assert_eq!(trace.steps.iter().filter(|s| s.is_derivative()).count(), 4);
//! # Ok::<(), aubert::Error>(())
//! ```

pub mod arthur;
pub mod calculus;
pub mod duality;
pub mod error;
pub mod halfint;
pub mod jantzen;
pub mod matching;
pub mod model;
pub mod parse;

pub use error::{Error, Result};
pub use halfint::HalfInt;

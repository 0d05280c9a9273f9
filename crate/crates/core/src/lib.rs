//! Corpus-compressed streaming: build an acyclic Moore schematic from a
//! fixed set of bit strings, then send each string as the short sequence of
//! choices that walks the schematic's path for it.
//!
//! ```
//! use ccss_core::{bits::bits, construct, encode, Corpus};
//!
//! let corpus = Corpus::new(vec![bits("0"), bits("00"), bits("01")]).unwrap();
//! let (d, _) = construct(&corpus);
//! let code = encode(&d, d.aux(), &bits("01")).unwrap();
//! assert_eq!(code.to_string(), "1");
//! assert_eq!(d.decode(&code).unwrap(), bits("01"));
//! ```

pub mod analysis;
pub mod bits;
pub mod construct;
pub mod corpus;
pub mod encode;
pub mod error;
pub mod format;
pub mod partition;
pub mod schematic;
pub mod simulate;

pub use analysis::{verify, VerificationReport};
pub use bits::{BitString, StreamCode};
pub use construct::{construct, construct_stage1, BuildTrace};
pub use corpus::Corpus;
pub use encode::{encode, encode_all};
pub use schematic::{MooreSchematic, OutputSymbol, SchematicBuilder, StateId, TransitionLabel};
pub use simulate::{simulate, SimulationConfig, SimulationReport};

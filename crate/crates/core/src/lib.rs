//! Iterative bounds on belief-propagation decoding thresholds of LDPC code
//! ensembles, driven by the Bhattacharyya (CB) and soft-bit (SB) noise measures.

pub mod binary;
pub mod channel;
pub mod cli;
pub mod de;
pub mod ensemble;
pub mod error;
pub mod extremal;
pub mod family;
pub mod threshold;
pub mod zm;

pub use binary::{BoundKind, BoundTrajectory, IterationLimits, Verdict};
pub use channel::msc::{CbVector, MscChannel, MscMixture};
pub use channel::{BinaryChannel, NoisePair, ReverseBnsc};
pub use ensemble::DegreeEnsemble;
pub use error::{Error, Result};
pub use extremal::AtomicBscFamily;

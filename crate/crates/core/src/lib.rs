//! Exact entropy of probability distributions modulo a prime.
//!
//! The crate covers arithmetic in Z/pZ and Z/p²Z together with the Fermat
//! quotient ([`modular`]), distributions mod p and their entropy
//! ([`dist`]), information loss on finite probability spaces ([`finprob`]),
//! the residue of real entropy of rational distributions ([`residue`]), the
//! entropy polynomial and its identities ([`poly`]), and a finite linear
//! algebra check of the characterization of entropy by the chain rule
//! ([`characterization`]).

pub mod characterization;
pub mod cli;
pub mod dist;
pub mod error;
pub mod finprob;
pub mod modular;
pub mod poly;
pub mod report;
pub mod residue;

pub use dist::{ModDist, ModMeasure};
pub use error::{Error, Result};
pub use finprob::{FinProbSpace, MPMap};
pub use modular::{LiftedResidue, PrimeModulus, Residue};
pub use poly::MultiPoly;
pub use report::VerificationReport;
pub use residue::RationalDist;

//! Structure-preserving error correction for polynomial frames over
//! `Z_{2^k}[X]/(X^N + 1)`.

pub mod analysis;
pub mod bch;
pub mod channel;
pub mod crc;
pub mod error;
pub mod frame;
pub mod galois_ring;
pub mod gf2;
pub mod hensel;
pub mod interleave;
pub mod par;
pub mod pattern;
pub mod ring;
pub mod rr;
pub mod zlin;
pub mod zpoly;

pub use error::{Error, Result};

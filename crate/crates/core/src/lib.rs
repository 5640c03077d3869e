//! Software twin of a binary-coded dynamic metasurface antenna testbed.
//!
//! The crate models the 16-element waveguide-fed array of one-bit
//! meta-elements, searches its 2^16 beamforming code space, emulates the
//! FPGA beam-control protocol, and simulates the DVB QPSK 62 GHz link end to
//! end, including the directional physical-layer behavior of the beams.
//!
//! Modules follow the testbed's structure:
//!
//! - [`em`] — forward far-field model and calibration,
//! - [`codebook`] — enumeration, scoring and synthesis of code words,
//! - [`dvb`] — the DVB transmit/receive chain, channel and link budget,
//! - [`proto`] — the beam-control wire protocol and device emulator,
//! - [`harness`] — config-driven experiment runner behind the CLI.

pub mod code;
pub mod codebook;
pub mod dvb;
pub mod em;
pub mod harness;
pub mod proto;

pub use code::{CodeError, CodeWord, Radix};

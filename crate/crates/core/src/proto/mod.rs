//! Beam-control wire protocol and device emulator.

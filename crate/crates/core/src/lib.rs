//! Estimate the weight of food waste in a bin from the RSSI measured between
//! a transceiver below the bin and one above it.
//!
//! The pipeline is:
//!
//! 1. [`signal_model`] predicts the received strength of an empty link from a
//!    link budget (free-space path loss plus antenna and system gains).
//! 2. [`ingestion`] parses recorded sessions of RSSI readings.
//! 3. [`stats`] reduces each session to a [`stats::SessionSummary`].
//! 4. [`calibration`] fits a polynomial from cumulative waste weight to median
//!    RSSI and inverts it to estimate an unknown weight.
//!
//! [`simulator`] stands in for the transceiver pair so the whole chain can be
//! exercised without hardware.

pub mod calibration;
pub mod error;
pub mod ingestion;
pub mod signal_model;
pub mod simulator;
pub mod stats;

pub use error::{Error, Result};

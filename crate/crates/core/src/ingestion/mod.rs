//! Reading session logs and persisting calibration profiles.

mod points_csv;
mod profile;
mod session_log;

pub use points_csv::{parse_points_csv, write_points_csv, POINTS_CSV_HEADER};
pub use profile::{
    load_profile, profile_from_str, profile_to_string, save_profile, CalibrationProfile,
    DeviceConfig, PROFILE_VERSION, REFIT_TOLERANCE,
};
pub use session_log::{parse_session_log, write_session_log};

use std::fs;
use std::path::Path;

use crate::stats::ReadingSession;
use crate::{Error, Result};

pub fn read_session_file(path: &Path) -> Result<ReadingSession> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_session_log(&text)
}

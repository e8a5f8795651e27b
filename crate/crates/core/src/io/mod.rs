//! Configuration, snapshots and CSV series.

mod config;
mod csv;
mod snapshot;

pub use config::{parse_config, Preset, RunConfig, CONFIG_KEYS};
pub use csv::{
    append_csv_row, append_series_row, append_twin_row, format_value, read_csv, read_series,
};
pub use snapshot::{
    decode_snapshot, encode_snapshot, read_snapshot, snapshot_len, write_snapshot,
    SNAPSHOT_MAGIC, SNAPSHOT_VERSION,
};

//! File formats, reports, plots and the command-line front end.

#[cfg(feature = "cli")]
pub mod cli;
pub mod number;
pub mod plot;
pub mod report;
pub mod spec_format;

pub use plot::{emit_plot_data, PlotFormat, PlotSeries, SeriesKind};
pub use report::{write_report, Format, Report};
pub use spec_format::{parse_game_spec, GameSpecDocument};

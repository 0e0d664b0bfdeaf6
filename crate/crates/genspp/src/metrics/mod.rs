//! Evaluation metrics, reference baselines, significance testing, and the
//! objective-landscape grid.

pub mod landscape;
pub mod scores;
pub mod wilcoxon;

pub use landscape::{landscape_csv, landscape_point, loss_landscape_grid, LandscapeRow};
pub use scores::{
    macro_f1, match_mask, selection_stats, string_match_baseline, token_f1, token_f1_macro,
    MetricsReport,
};
pub use wilcoxon::{normal_cdf, wilcoxon_signed_rank};

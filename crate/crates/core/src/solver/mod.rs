//! Bad-event detectors, finishing procedures, the exhaustive oracle and the
//! end-to-end resampling pipelines.

mod events;
mod finish;
mod pipeline;

pub use events::{
    a_u_thresholds, detect_a_u, detect_b_events, detect_dp_a_u, detect_monochromatic_edge, BadEventReport, EventKind,
};
pub use finish::{
    exhaustive_colourable, exhaustive_list_colourable, greedy_complete, haxell_transversal, moser_tardos_reed,
    GreedyOutcome, HaxellOutcome, OracleOutcome, ReedOutcome,
};
pub use pipeline::{
    perturb_outside_ball, resample_cover_region, resample_region, solve_pipeline, Diagnostic, Instance, Pipeline,
    PipelineConfig, PipelineReport, Solution, Stage, DEFAULT_BUDGET,
};

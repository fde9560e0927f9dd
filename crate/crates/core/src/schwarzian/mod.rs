//! Möbius maps, the Schwarzian derivative, `Q`, and reconstruction of dilatations.

mod derivative;
mod mobius;
mod reconstruct;

pub use derivative::{
    compute_q_analytic, compute_q_blackbox, q_series_from_dilatation, schwarzian,
    schwarzian_of_jet, BLACKBOX_ZERO_THRESHOLD, DEFAULT_INNER_STEP, DEFAULT_OUTER_STEP,
};
pub use mobius::{
    disk_automorphism, is_disk_automorphism, mobius_from_3_points, DiskAutomorphismParams, Mobius,
    CIRCLE_TOLERANCE, EPS_DET, MAX_Z0,
};
pub use reconstruct::{
    angle_distance, default_probes, expected_automorphism_params, fit_disk_automorphism,
    fit_mobius, normalize_to_metric, solve_schwarzian_series, DiskFit, OriginMetric, FIT_TOLERANCE,
};

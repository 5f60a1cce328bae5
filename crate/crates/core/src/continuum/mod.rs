//! Continuum model domains described by their inner parallel bodies.

pub mod geometry;
pub mod ode;
pub mod profile;
pub mod quadrature;
pub mod sphere;

pub use geometry::{
    explicit_flow_value, extinction_time, level_set_radius, lower_bound_i2, perimeter_bound_check,
    solve_g, variational_time, GTrajectory, LevelSet, PerimeterBoundCheck,
};
pub use profile::{DomainProfile, Pchip, ProfileShape};
pub use sphere::{sphere_calibration, SphereCalibration};

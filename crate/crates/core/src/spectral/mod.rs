//! Subdifferential of `J_w`, eigen-certificates, extreme points, prox and gradient flow.

pub mod certificate;
pub mod extreme;
pub mod flow;
pub mod lp;
pub mod prox;

pub use certificate::{
    eigen_certificate, eigen_residual, subgradient_membership, Certification, EigenCertificate,
    MembershipDiagnostics,
};
pub use extreme::{extreme_point_check, ExtremeVerdict};
pub use flow::{
    asymptotic_profile, gradient_flow, gradient_flow_with, FlowOptions, FlowTrajectory,
};
pub use prox::{project_l1_ball, prox_jw, ProxOptions, ProxResult, ProxSolver};

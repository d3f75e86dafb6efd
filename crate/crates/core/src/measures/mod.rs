//! Compatible systems on torus orbits, theta elements, ordinary and signed
//! p-adic L-functions.

mod system;
mod theta;

pub use system::{
    check_distribution, first_level, synth_system, CompatibleSystem, DistributionReport, FormSource, Mode, SynthSpec,
    Violation,
};
pub use theta::{
    lp, pm_extract, sign_factor, theta_level, theta_ordinary, LKind, PadicLFunction, SignedTheta, ThetaElement,
};

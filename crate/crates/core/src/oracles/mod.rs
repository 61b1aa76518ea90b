//! Reference solutions used to validate the WCD schemes.

pub mod baseline;
pub mod direct;
pub mod riemann;
pub mod traveling_wave;

pub use baseline::{lax_friedrichs_baseline, BaselineTrajectory, LaxFriedrichsConfig};
pub use direct::{direct_regularized_cubic, DirectSimulationConfig};
pub use riemann::{classical_riemann_cubic, nonclassical_riemann_cubic, RiemannSolution, Wave};
pub use traveling_wave::{traveling_wave_kinetic, KineticConnection, TravelingWaveProblem};

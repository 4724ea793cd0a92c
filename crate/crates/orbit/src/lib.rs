//! Two-body Keplerian orbit propagation and impulsive maneuver planning.
//!
//! Everything here is pure value math: closed orbits around a single
//! gravitating body, scalar state sampling via Kepler's equation, and
//! planners that place apsis-change burns at the opposite apsis and
//! plane-change burns at the cheaper of the next two nodal crossings.

pub mod body;
pub mod kepler;
pub mod node;
pub mod orbit;
pub mod planner;

pub use body::CentralBody;
pub use kepler::{solve_kepler, UnsupportedOrbit};
pub use node::ManeuverNode;
pub use orbit::{KeplerOrbit, OrbitalState};
pub use planner::{
    apply_node, apply_node_with_error, plan_apoapsis_change, plan_inclination_change,
    plan_periapsis_change, PlanError,
};

//! Reduced-order cardiovascular simulation toolkit.
//!
//! * [`rcr`]: closed-form Windkessel responses, cycle-mean recursion and
//!   convergence error metrics.
//! * [`network`]: RK4 and generalized-α integration of lumped networks,
//!   and cycle-by-cycle runs to the periodic state.
//! * [`periodicity`]: decides whether multi-outlet pressure/flow traces have
//!   reached their limit cycle, using per-outlet 0D companion models.
//! * [`mesh`]: centerlines, tetrahedral meshes and the layer-by-layer map
//!   from volume nodes to centerline nodes.
//! * [`init`]: pressure and parabolic velocity fields on the volume mesh
//!   from a mapped centerline solution.
//! * [`io`]: text and binary file formats (`f64` only).
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the file formats use.

pub mod error;
pub mod init;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod network;
pub mod periodicity;
pub mod rcr;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type RcrParameters64 = rcr::RcrParameters<f64>;
pub type PeriodicWaveform64 = rcr::PeriodicWaveform<f64>;
pub type TimeSeries64 = rcr::TimeSeries<f64>;
pub type LumpedNetwork64 = network::LumpedNetwork<f64>;
pub type SolutionTrace64 = network::SolutionTrace<f64>;
pub type OutletTraceSet64 = periodicity::OutletTraceSet<f64>;
pub type ConvergenceReport64 = periodicity::ConvergenceReport<f64>;
pub type Centerline64 = mesh::Centerline<f64>;
pub type VolumeMesh64 = mesh::VolumeMesh<f64>;
pub type InitialConditionField64 = init::InitialConditionField<f64>;

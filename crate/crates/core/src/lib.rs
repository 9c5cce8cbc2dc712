//! Support-function geometry of smooth strictly convex plane curves.
//!
//! A convex curve is stored as samples of its Euclidean support function on a
//! uniform periodic angle grid. On top of that representation the crate
//! provides:
//!
//! * differential quantities and scalars (length, area, curvature) via
//!   spectral differentiation ([`curve`]),
//! * Minkowski geometries given by a centrally symmetric isoperimetrix,
//!   mixed areas and Minkowski length ([`gauge`]),
//! * Bonnesen functionals and positive-center audits ([`bonnesen`]),
//! * inradius, outradius and the minimal-width annulus as small linear
//!   programs ([`annulus`]),
//! * the weighted curve-shortening flow in support-function form ([`flow`]),
//! * Monte Carlo checks of the translative and kinematic integral-geometry
//!   identities ([`integral_geometry`]).

pub mod annulus;
pub mod bonnesen;
pub mod curve;
pub mod error;
pub mod flow;
pub mod gauge;
pub mod grid;
pub mod integral_geometry;
pub mod io;
pub mod lp;
pub mod point;
pub mod polygon;
pub mod rng;

pub use annulus::{AnnulusResult, Contact, ContactKind, RadiiResult};
pub use bonnesen::{BonnesenReport, PositiveCenterAudit};
pub use curve::{CurveScalars, SupportCurve};
pub use error::{GeomError, Result};
pub use flow::{FlowConfig, FlowRecord, FlowState, FlowTrace, Integrator, RateReport};
pub use gauge::{Gauge, MinkowskiScalars};
pub use grid::AngleGrid;
pub use integral_geometry::{MCConfig, MCReport, RegionTally};
pub use io::IoError;
pub use point::Point;

/// Default number of grid nodes.
pub const DEFAULT_GRID: usize = 256;

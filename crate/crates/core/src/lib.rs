//! Paths of curves in constant-curvature spaces under the first-order Sobolev
//! metric: discrete curves, the metric and its horizontality tests, variation
//! formulas, closed-form geodesic families, and elastica.
//!
//! Everything is generic over the scalar type (`f32` or `f64`) through
//! [`Real`]; the aliases below fix it to `f64`, with `F32` variants.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discrete_curves;
pub mod elastica;
pub mod error;
pub mod families;
pub mod io;
pub mod numerics;
pub mod render;
pub mod report;
pub mod scalar;
pub mod sobolev_metric;
pub mod space_forms;
pub mod special_geodesics;
pub mod stencil;
pub mod variations;
pub mod vector;

pub use discrete_curves::{build_curve, CurveConfig, DiscreteCurve, TangentField};
pub use elastica::{
    elastica_path_energy, optimize_elastica_path, ElasticaEndpoints, ElasticaParams,
    ElasticaPathSpec, OptimizeOptions, ShapeParams,
};
pub use error::{Error, Result};
pub use scalar::Real;
pub use sobolev_metric::CurvePath;
pub use space_forms::{Model, PolarFrame, SpaceForm};
pub use special_geodesics::{solve_concentric_geodesic, solve_helix_geodesic, RadiusTrajectory};
pub use stencil::Topology;
pub use vector::Vec3;

pub type Point = Vec3<f64>;
pub type Space = SpaceForm<f64>;
pub type Curve = DiscreteCurve<f64>;
pub type Field = TangentField<f64>;
pub type Path = CurvePath<f64>;
pub type Trajectory = RadiusTrajectory<f64>;
pub type Elastica = ElasticaParams<f64>;

pub type PointF32 = Vec3<f32>;
pub type SpaceF32 = SpaceForm<f32>;
pub type CurveF32 = DiscreteCurve<f32>;
pub type FieldF32 = TangentField<f32>;
pub type PathF32 = CurvePath<f32>;
pub type TrajectoryF32 = RadiusTrajectory<f32>;
pub type ElasticaF32 = ElasticaParams<f32>;

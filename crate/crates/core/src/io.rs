//! JSON and CSV formats for space forms, curves, paths, reports and elastica
//! endpoints.
//!
//! Every number is written with 17 significant digits, so saving and then
//! loading reproduces bit-identical `f64` values.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::discrete_curves::{CurveConfig, DiscreteCurve};
use crate::elastica::{ElasticaEndpoints, Frame, Gauge, LengthMode, ShapeParams};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sobolev_metric::CurvePath;
use crate::space_forms::{Model, SpaceForm};
use crate::special_geodesics::RadiusTrajectory;
use crate::stencil::Topology;
use crate::vector::Vec3;

/// Writes floats as `{:.16e}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactFloatFormatter;

impl serde_json::ser::Formatter for ExactFloatFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", fmt_f64(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// 17 significant digits; non-finite values are not representable in JSON.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes with [`ExactFloatFormatter`]; non-finite numbers become `null`.
pub fn to_json_string<S: Serialize>(value: &S) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloatFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_json<S: Serialize>(path: impl AsRef<Path>, value: &S) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

fn read_json<D: DeserializeOwned>(path: &Path) -> Result<D> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn invalid(path: &Path, e: Error) -> Error {
    match e {
        Error::InvalidInput(_) => e,
        other => Error::InvalidInput(format!("{}: {other}", path.display())),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpaceFormJson {
    pub model: String,
    pub curvature: f64,
}

impl SpaceFormJson {
    pub fn from_space<T: Real>(s: &SpaceForm<T>) -> Self {
        Self {
            model: s.model().name().to_string(),
            curvature: s.curvature().to_f64_lossy(),
        }
    }

    pub fn to_space<T: Real>(&self) -> Result<SpaceForm<T>> {
        let model = Model::from_name(&self.model)
            .ok_or_else(|| Error::InvalidInput(format!("unknown model {:?}", self.model)))?;
        SpaceForm::new(model, T::c(self.curvature))
    }
}

fn point_dim<T: Real>(space: &SpaceForm<T>) -> usize {
    space.ambient_dim()
}

fn point_to_json<T: Real>(p: Vec3<T>, dim: usize) -> Vec<f64> {
    p.to_array()[..dim]
        .iter()
        .map(|v| v.to_f64_lossy())
        .collect()
}

fn point_from_json<T: Real>(v: &[f64], dim: usize) -> Result<Vec3<T>> {
    if v.len() != dim {
        return Err(Error::InvalidInput(format!(
            "expected {dim} coordinates per point, got {}",
            v.len()
        )));
    }
    let c: Vec<T> = v.iter().map(|x| T::c(*x)).collect();
    Vec3::from_slice(&c).ok_or_else(|| Error::InvalidInput("bad point".into()))
}

fn topology_from<T: Real>(closed: bool, shift: Option<&[f64]>) -> Result<Topology<T>> {
    match (closed, shift) {
        (false, None) => Ok(Topology::Open),
        (true, None) => Ok(Topology::Closed),
        (true, Some(s)) => Ok(Topology::Screw(point_from_json(s, 3)?)),
        (false, Some(_)) => Err(Error::InvalidInput(
            "screw_shift needs a closed parameter domain".into(),
        )),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurveJson {
    pub space: SpaceFormJson,
    pub closed: bool,
    pub t_samples: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screw_shift: Option<Vec<f64>>,
}

impl CurveJson {
    pub fn from_curve<T: Real>(c: &DiscreteCurve<T>) -> Self {
        let dim = point_dim(c.space());
        Self {
            space: SpaceFormJson::from_space(c.space()),
            closed: c.topology().is_periodic(),
            t_samples: c.len(),
            points: c.points().iter().map(|p| point_to_json(*p, dim)).collect(),
            screw_shift: c.screw_shift().map(|s| point_to_json(s, 3)),
        }
    }

    pub fn to_curve<T: Real>(&self) -> Result<DiscreteCurve<T>> {
        let space = self.space.to_space::<T>()?;
        if self.points.len() != self.t_samples {
            return Err(Error::InvalidInput(format!(
                "t_samples is {} but {} points are listed",
                self.t_samples,
                self.points.len()
            )));
        }
        let dim = point_dim(&space);
        let pts = self
            .points
            .iter()
            .map(|p| point_from_json(p, dim))
            .collect::<Result<Vec<_>>>()?;
        let topology = topology_from(self.closed, self.screw_shift.as_deref())?;
        DiscreteCurve::build(space, pts, topology, CurveConfig::default())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PathJson {
    pub space: SpaceFormJson,
    pub closed: bool,
    pub t_samples: usize,
    pub s_samples: usize,
    pub points: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screw_shift: Option<Vec<f64>>,
}

impl PathJson {
    pub fn from_path<T: Real>(path: &CurvePath<T>) -> Self {
        let c0 = path.curve(0);
        let dim = point_dim(c0.space());
        Self {
            space: SpaceFormJson::from_space(c0.space()),
            closed: c0.topology().is_periodic(),
            t_samples: path.t_samples(),
            s_samples: path.len(),
            points: path
                .curves()
                .iter()
                .map(|c| c.points().iter().map(|p| point_to_json(*p, dim)).collect())
                .collect(),
            screw_shift: c0.screw_shift().map(|s| point_to_json(s, 3)),
        }
    }

    pub fn to_path<T: Real>(&self) -> Result<CurvePath<T>> {
        if self.points.len() != self.s_samples {
            return Err(Error::InvalidInput(format!(
                "s_samples is {} but {} curves are listed",
                self.s_samples,
                self.points.len()
            )));
        }
        let curves = self
            .points
            .iter()
            .enumerate()
            .map(|(j, pts)| {
                CurveJson {
                    space: self.space.clone(),
                    closed: self.closed,
                    t_samples: self.t_samples,
                    points: pts.clone(),
                    screw_shift: self.screw_shift.clone(),
                }
                .to_curve()
                .map_err(|e| e.at_sample(j))
            })
            .collect::<Result<Vec<_>>>()?;
        CurvePath::new(curves)
    }
}

pub fn save_curve<T: Real>(path: impl AsRef<Path>, c: &DiscreteCurve<T>) -> Result<()> {
    write_json(path, &CurveJson::from_curve(c))
}

pub fn load_curve<T: Real>(path: impl AsRef<Path>) -> Result<DiscreteCurve<T>> {
    let p = path.as_ref();
    read_json::<CurveJson>(p)?
        .to_curve()
        .map_err(|e| invalid(p, e))
}

pub fn save_path<T: Real>(file: impl AsRef<Path>, path: &CurvePath<T>) -> Result<()> {
    write_json(file, &PathJson::from_path(path))
}

/// Loads a path; any parse or validation failure is reported as invalid input.
pub fn load_path<T: Real>(file: impl AsRef<Path>) -> Result<CurvePath<T>> {
    let p = file.as_ref();
    read_json::<PathJson>(p)?
        .to_path()
        .map_err(|e| invalid(p, e))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ShapeJson {
    pub k: f64,
    pub lambda: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FrameJson {
    pub origin: Vec<f64>,
    #[serde(rename = "T")]
    pub t: Vec<f64>,
    #[serde(rename = "N")]
    pub n: Vec<f64>,
    #[serde(rename = "B")]
    pub b: Vec<f64>,
}

/// Endpoint file of the `elastica` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EndpointsJson {
    #[serde(rename = "K")]
    pub curvature: f64,
    #[serde(rename = "L")]
    pub length: f64,
    pub start: ShapeJson,
    pub end: ShapeJson,
    pub init_frame: FrameJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_samples: Option<usize>,
}

impl EndpointsJson {
    pub fn to_endpoints<T: Real>(&self) -> Result<ElasticaEndpoints<T>> {
        let v = |x: &[f64]| point_from_json::<T>(x, 3);
        let f = &self.init_frame;
        let frame = Frame::new(v(&f.origin)?, v(&f.t)?, v(&f.n)?, v(&f.b)?);
        let shape = |s: &ShapeJson| ShapeParams::new(T::c(s.k), T::c(s.lambda), T::c(s.mu));
        let gauge = match self.gauge.as_deref() {
            None => Gauge::default(),
            Some(name) => Gauge::from_name(name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown gauge {name:?}")))?,
        };
        let mode = match self.length_mode.as_deref() {
            None => LengthMode::default(),
            Some(name) => LengthMode::from_name(name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown length_mode {name:?}")))?,
        };
        ElasticaEndpoints::new(
            T::c(self.curvature),
            T::c(self.length),
            frame,
            shape(&self.start),
            shape(&self.end),
        )?
        .with_gauge(gauge)?
        .with_length_mode(mode)
    }

    pub fn from_endpoints<T: Real>(e: &ElasticaEndpoints<T>) -> Self {
        let v = |p: Vec3<T>| point_to_json(p, 3);
        let shape = |s: ShapeParams<T>| ShapeJson {
            k: s.k.to_f64_lossy(),
            lambda: s.lambda.to_f64_lossy(),
            mu: s.mu.to_f64_lossy(),
        };
        Self {
            curvature: e.curvature.to_f64_lossy(),
            length: e.length.to_f64_lossy(),
            start: shape(e.start),
            end: shape(e.end),
            init_frame: FrameJson {
                origin: v(e.frame.origin),
                t: v(e.frame.t),
                n: v(e.frame.n),
                b: v(e.frame.b),
            },
            gauge: Some(e.gauge.name().to_string()),
            length_mode: Some(e.length_mode.name().to_string()),
            s_samples: None,
            t_samples: None,
        }
    }
}

pub fn load_endpoints(path: impl AsRef<Path>) -> Result<EndpointsJson> {
    let p = path.as_ref();
    let e: EndpointsJson = read_json(p)?;
    e.to_endpoints::<f64>().map_err(|err| invalid(p, err))?;
    Ok(e)
}

fn csv_writer(rows: Vec<Vec<String>>, header: &[&str]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Io(io::Error::other(e));
    w.write_record(header).map_err(io_err)?;
    for r in rows {
        w.write_record(&r).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
}

/// `s,r,conserved` with the per-sample finite-difference estimate of `E`.
pub fn trajectory_csv<T: Real>(traj: &RadiusTrajectory<T>) -> Result<String> {
    let e = traj.conserved_fd()?;
    let rows = traj
        .s_grid
        .iter()
        .zip(&traj.r)
        .zip(&e)
        .map(|((s, r), e)| {
            vec![
                fmt_f64(s.to_f64_lossy()),
                fmt_f64(r.to_f64_lossy()),
                fmt_f64(e.to_f64_lossy()),
            ]
        })
        .collect();
    csv_writer(rows, &["s", "r", "conserved"])
}

/// `iter,energy`.
pub fn trace_csv<T: Real>(trace: &[T]) -> Result<String> {
    let rows = trace
        .iter()
        .enumerate()
        .map(|(i, e)| vec![i.to_string(), fmt_f64(e.to_f64_lossy())])
        .collect();
    csv_writer(rows, &["iter", "energy"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn float_format_is_exact() {
        for v in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02e23,
            f64::MIN_POSITIVE,
            5e-324,
        ] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        let j = to_json_string(&vec![0.1f64, 1.0]).unwrap();
        assert_eq!(j, "[1.0000000000000001e-1,1.0000000000000000e0]\n");
    }

    #[test]
    fn path_json_round_trip_is_bitwise() {
        let path = families::sphere_latitudes(1.0f64, 5, 16, |s| 0.3 + 0.7 * s).unwrap();
        let json = PathJson::from_path(&path);
        let text = to_json_string(&json).unwrap();
        let back: PathJson = serde_json::from_str(&text).unwrap();
        let p2: CurvePath<f64> = back.to_path().unwrap();
        for (a, b) in path.curves().iter().zip(p2.curves()) {
            for (x, y) in a.points().iter().zip(b.points()) {
                assert_eq!(
                    x.to_array().map(f64::to_bits),
                    y.to_array().map(f64::to_bits)
                );
            }
        }
        assert_eq!(to_json_string(&PathJson::from_path(&p2)).unwrap(), text);
    }

    #[test]
    fn plane_points_use_two_coordinates() {
        let c = families::plane_circle::<f64>(16, 1.0);
        let j = CurveJson::from_curve(&c);
        assert!(j.points.iter().all(|p| p.len() == 2));
        assert!(j.to_curve::<f64>().is_ok());
        let mut bad = j.clone();
        bad.points[3] = vec![1.0, 0.0, 0.0];
        assert!(bad.to_curve::<f64>().is_err());
    }

    #[test]
    fn csv_headers() {
        let t = trace_csv(&[2.0f64, 1.0]).unwrap();
        assert_eq!(
            t,
            "iter,energy\n0,2.0000000000000000e0\n1,1.0000000000000000e0\n"
        );
    }

    #[test]
    fn endpoints_round_trip() {
        let text = r#"{"K": 0, "L": 6.283185307179586,
            "start": {"k": 1, "lambda": 1, "mu": 0},
            "end": {"k": 0.5, "lambda": 0.25, "mu": 0},
            "init_frame": {"origin": [0,0,0], "T": [1,0,0], "N": [0,1,0], "B": [0,0,1]},
            "gauge": "centroid", "length_mode": "scale_with_amplitude"}"#;
        let j: EndpointsJson = serde_json::from_str(text).unwrap();
        let e = j.to_endpoints::<f64>().unwrap();
        assert_eq!(e.gauge, Gauge::Centroid);
        assert_eq!(e.end.k, 0.5);
        let again = EndpointsJson::from_endpoints(&e)
            .to_endpoints::<f64>()
            .unwrap();
        assert_eq!(again, e);
        let mut bad = j.clone();
        bad.gauge = Some("nope".into());
        assert!(bad.to_endpoints::<f64>().is_err());
    }
}

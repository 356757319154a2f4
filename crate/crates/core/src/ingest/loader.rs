use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};
use csv::{ReaderBuilder, StringRecord, WriterBuilder};

use super::projection::{check_bounds, ProjectionSpec};
use super::schema::Schema;
use crate::error::{Error, Result};
use crate::types::{Point, Samples, Trajectories, Trajectory, TrajectoryId};

/// A loaded CSV file: trajectories in planar meters plus the raw rows, so
/// that samples can be written back in the input's own layout.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub trajectories: Trajectories,
    /// Projection used for geographic inputs.
    pub projection: Option<ProjectionSpec>,
    headers: StringRecord,
    rows: Vec<StringRecord>,
    row_of: HashMap<(TrajectoryId, u64), usize>,
    delimiter: u8,
}

#[derive(Debug)]
struct Parsed {
    line: u64,
    row: usize,
    id: TrajectoryId,
    ts: f64,
    a: f64,
    b: f64,
    sog: Option<f64>,
    cog: Option<f64>,
}

struct Columns {
    id: usize,
    ts: usize,
    a: usize,
    b: usize,
    sog: Option<usize>,
    cog: Option<usize>,
}

fn column(headers: &StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Schema(format!("missing column '{name}'")))
}

fn optional_column(headers: &StringRecord, name: Option<&String>, optional: bool) -> Result<Option<usize>> {
    match name {
        None => Ok(None),
        Some(n) => match column(headers, n) {
            Ok(i) => Ok(Some(i)),
            Err(_) if optional => Ok(None),
            Err(e) => Err(e),
        },
    }
}

fn parse_f64(field: &str, what: &str, line: u64) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} '{field}'"),
    })
}

pub(crate) fn parse_timestamp(field: &str, format: &str) -> Option<f64> {
    let field = field.trim();
    let from_naive = |n: NaiveDateTime| {
        let u = n.and_utc();
        u.timestamp() as f64 + f64::from(u.timestamp_subsec_nanos()) * 1e-9
    };
    let iso = |s: &str| {
        DateTime::parse_from_rfc3339(s)
            .map(|d| d.timestamp() as f64 + f64::from(d.timestamp_subsec_nanos()) * 1e-9)
            .ok()
            .or_else(|| {
                ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"]
                    .iter()
                    .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
                    .map(from_naive)
            })
    };
    match format {
        "epoch" => field.parse().ok(),
        "iso8601" => iso(field),
        "auto" => field.parse().ok().or_else(|| iso(field)),
        custom => NaiveDateTime::parse_from_str(field, custom).ok().map(from_naive),
    }
    .filter(|t: &f64| t.is_finite())
}

/// Compass degrees (0 = north, clockwise) to radians with x along
/// `cos` and y along `sin`.
pub fn compass_to_math(deg: f64) -> f64 {
    let r = (90.0 - deg).rem_euclid(360.0).to_radians();
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Inverse of [`compass_to_math`].
pub fn math_to_compass(rad: f64) -> f64 {
    let d = (90.0 - rad.to_degrees()).rem_euclid(360.0);
    if d >= 360.0 {
        0.0
    } else {
        d
    }
}

impl Dataset {
    pub fn from_path(path: &Path, schema: &Schema, projection: Option<ProjectionSpec>) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        Self::from_reader(file, schema, projection)
    }

    /// Parses a headered CSV. `projection` overrides the schema's reference
    /// point and the data centroid.
    pub fn from_reader<R: Read>(reader: R, schema: &Schema, projection: Option<ProjectionSpec>) -> Result<Self> {
        schema.validate()?;
        let delimiter = u8::try_from(schema.delimiter)
            .map_err(|_| Error::Config("delimiter must be ASCII".into()))?;
        let mut rdr = ReaderBuilder::new()
            .delimiter(delimiter)
            .flexible(false)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();

        let geo = schema.is_geographic();
        let (a_name, b_name) = if geo {
            (schema.lat.as_ref().unwrap(), schema.lon.as_ref().unwrap())
        } else {
            (schema.x.as_ref().unwrap(), schema.y.as_ref().unwrap())
        };
        let cols = Columns {
            id: column(&headers, &schema.id)?,
            ts: column(&headers, &schema.timestamp)?,
            a: column(&headers, a_name)?,
            b: column(&headers, b_name)?,
            sog: optional_column(&headers, schema.sog.as_ref(), schema.optional_motion)?,
            cog: optional_column(&headers, schema.cog.as_ref(), schema.optional_motion)?,
        };

        let mut labels: HashMap<String, TrajectoryId> = HashMap::new();
        let mut parsed = Vec::new();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            let field = |i: usize| rec.get(i).unwrap_or("");

            let raw_id = field(cols.id).trim();
            let id = match raw_id.parse::<TrajectoryId>() {
                Ok(v) => v,
                Err(_) if !raw_id.is_empty() => {
                    // non-numeric identifiers are numbered by first appearance
                    let next = labels.len() as TrajectoryId;
                    *labels.entry(raw_id.to_string()).or_insert(next)
                }
                Err(_) => {
                    return Err(Error::Parse {
                        line,
                        message: "empty trajectory id".into(),
                    })
                }
            };
            let ts = parse_timestamp(field(cols.ts), &schema.timestamp_format).ok_or_else(|| {
                Error::Parse {
                    line,
                    message: format!("invalid timestamp '{}'", field(cols.ts)),
                }
            })?;
            let a = parse_f64(field(cols.a), a_name, line)?;
            let b = parse_f64(field(cols.b), b_name, line)?;
            if geo {
                check_bounds(a, b).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
            } else if !(a.is_finite() && b.is_finite()) {
                return Err(Error::Parse {
                    line,
                    message: "non-finite coordinate".into(),
                });
            }
            let sog = match cols.sog.map(field).map(str::trim) {
                None | Some("") => None,
                Some(s) => {
                    let v = parse_f64(s, "sog", line)?;
                    if !(v >= 0.0 && v.is_finite()) {
                        return Err(Error::Parse {
                            line,
                            message: format!("sog {v} is negative"),
                        });
                    }
                    Some(schema.sog_unit.to_mps(v))
                }
            };
            let cog = match cols.cog.map(field).map(str::trim) {
                None | Some("") => None,
                Some(s) => {
                    let v = parse_f64(s, "cog", line)?;
                    if !(0.0..=360.0).contains(&v) {
                        return Err(Error::Parse {
                            line,
                            message: format!("cog {v} outside [0, 360]"),
                        });
                    }
                    Some(compass_to_math(v))
                }
            };
            parsed.push(Parsed {
                line,
                row: rows.len(),
                id,
                ts,
                a,
                b,
                sog,
                cog,
            });
            rows.push(rec);
        }

        let projection = if geo {
            projection
                .or(match (schema.ref_lat, schema.ref_lon) {
                    (Some(la), Some(lo)) => Some(ProjectionSpec::new(la, lo)?),
                    _ => None,
                })
                .or_else(|| ProjectionSpec::centroid(parsed.iter().map(|r| (r.a, r.b))))
        } else {
            None
        };

        let mut grouped: BTreeMap<TrajectoryId, Vec<(Point, u64, usize)>> = BTreeMap::new();
        for r in &parsed {
            let (x, y) = match &projection {
                Some(proj) => {
                    let p = proj.project(r.a, r.b)?;
                    (p.x, p.y)
                }
                None => (r.a, r.b),
            };
            let point = Point {
                id: r.id,
                ts: r.ts,
                x,
                y,
                sog: r.sog,
                cog: r.cog,
            };
            grouped.entry(r.id).or_default().push((point, r.line, r.row));
        }

        let mut trajectories = BTreeMap::new();
        let mut row_of = HashMap::new();
        for (id, mut pts) in grouped {
            pts.sort_by(|a, b| a.0.ts.total_cmp(&b.0.ts).then(a.1.cmp(&b.1)));
            for w in pts.windows(2) {
                if w[0].0.ts == w[1].0.ts {
                    return Err(Error::Integrity(format!(
                        "trajectory {id}: duplicate timestamp {} on lines {} and {}",
                        w[0].0.ts, w[0].1, w[1].1
                    )));
                }
            }
            for (p, _, row) in &pts {
                row_of.insert((id, p.ts.to_bits()), *row);
            }
            let points = pts.into_iter().map(|(p, _, _)| p).collect();
            trajectories.insert(id, Trajectory::new(id, points)?);
        }

        Ok(Self {
            trajectories,
            projection,
            headers,
            rows,
            row_of,
            delimiter,
        })
    }

    pub fn point_count(&self) -> usize {
        self.trajectories.values().map(Trajectory::len).sum()
    }

    /// Writes the input rows of every sample point, in input order, with an
    /// extra `kept` column set to 1.
    pub fn write_samples<W: Write>(&self, samples: &Samples, out: W) -> Result<()> {
        let mut idx = Vec::new();
        for s in samples.values() {
            for p in &s.points {
                let row = self.row_of.get(&(p.id, p.ts.to_bits())).ok_or_else(|| {
                    Error::Integrity(format!("sample point {} @ {} not in dataset", p.id, p.ts))
                })?;
                idx.push(*row);
            }
        }
        idx.sort_unstable();
        let mut w = WriterBuilder::new().delimiter(self.delimiter).from_writer(out);
        let mut header = self.headers.clone();
        header.push_field("kept");
        w.write_record(&header)?;
        for i in idx {
            let mut rec = self.rows[i].clone();
            rec.push_field("1");
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Writes trajectories in the native `id,ts,x,y,sog,cog` layout (course
/// as compass degrees).
pub fn write_trajectories<W: Write>(trajectories: &Trajectories, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "ts", "x", "y", "sog", "cog"])?;
    for t in trajectories.values() {
        for p in t.points() {
            let sog = p.sog.map(|v| v.to_string()).unwrap_or_default();
            let cog = p.cog.map(|v| math_to_compass(v).to_string()).unwrap_or_default();
            w.write_record([
                p.id.to_string(),
                p.ts.to_string(),
                p.x.to_string(),
                p.y.to_string(),
                sog,
                cog,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_csv(path: &Path, schema: &Schema) -> Result<Trajectories> {
    Ok(Dataset::from_path(path, schema, None)?.trajectories)
}

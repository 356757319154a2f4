use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Position;

pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Local equirectangular projection around a reference point.
///
/// `x = R * cos(ref_lat) * dlon`, `y = R * dlat` with angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSpec {
    pub ref_lat: f64,
    pub ref_lon: f64,
}

impl ProjectionSpec {
    pub fn new(ref_lat: f64, ref_lon: f64) -> Result<Self> {
        check_bounds(ref_lat, ref_lon)?;
        Ok(Self { ref_lat, ref_lon })
    }

    /// Reference at the arithmetic mean of the given coordinates.
    pub fn centroid<I: IntoIterator<Item = (f64, f64)>>(coords: I) -> Option<Self> {
        let (mut lat, mut lon, mut n) = (0.0, 0.0, 0usize);
        for (la, lo) in coords {
            lat += la;
            lon += lo;
            n += 1;
        }
        (n > 0).then(|| Self {
            ref_lat: lat / n as f64,
            ref_lon: lon / n as f64,
        })
    }

    pub fn project(&self, lat: f64, lon: f64) -> Result<Position> {
        check_bounds(lat, lon)?;
        let dlon = wrap_degrees(lon - self.ref_lon).to_radians();
        let dlat = (lat - self.ref_lat).to_radians();
        Ok(Position::new(
            EARTH_RADIUS_M * self.ref_lat.to_radians().cos() * dlon,
            EARTH_RADIUS_M * dlat,
        ))
    }

    /// Inverse of [`project`](Self::project), returning `(lat, lon)`.
    pub fn unproject(&self, p: Position) -> (f64, f64) {
        let lat = self.ref_lat + (p.y / EARTH_RADIUS_M).to_degrees();
        let lon = self.ref_lon
            + (p.x / (EARTH_RADIUS_M * self.ref_lat.to_radians().cos())).to_degrees();
        (lat, wrap_degrees(lon))
    }
}

fn wrap_degrees(d: f64) -> f64 {
    let w = (d + 180.0).rem_euclid(360.0) - 180.0;
    if w == -180.0 && d > 0.0 {
        180.0
    } else {
        w
    }
}

pub(crate) fn check_bounds(lat: f64, lon: f64) -> Result<()> {
    if !(-90.0..=90.0).contains(&lat) {
        return Err(Error::Schema(format!("latitude {lat} outside [-90, 90]")));
    }
    if !(-180.0..=180.0).contains(&lon) {
        return Err(Error::Schema(format!("longitude {lon} outside [-180, 180]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn haversine(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
        let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
        let dp = p2 - p1;
        let dl = (lon2 - lon1).to_radians();
        let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
        2.0 * EARTH_RADIUS_M * a.sqrt().asin()
    }

    #[test]
    fn reference_maps_to_origin() {
        let s = ProjectionSpec::new(55.6, 12.7).unwrap();
        assert_eq!(s.project(55.6, 12.7).unwrap(), Position::new(0.0, 0.0));
    }

    #[test]
    fn north_offset() {
        let s = ProjectionSpec::new(10.0, 20.0).unwrap();
        let p = s.project(10.01, 20.0).unwrap();
        // R * 0.01 * pi / 180
        assert!((p.y - 1111.9492664455872).abs() < 1e-6);
        assert_eq!(p.x, 0.0);
    }

    #[test]
    fn east_offset_at_sixty() {
        let s = ProjectionSpec::new(60.0, 0.0).unwrap();
        let a = s.project(60.0, 5.0).unwrap();
        let b = s.project(60.0, 5.01).unwrap();
        assert!(((b.x - a.x) - 555.9746332227937).abs() < 1e-6);
    }

    #[test]
    fn bounds() {
        let s = ProjectionSpec::new(0.0, 0.0).unwrap();
        assert!(s.project(95.0, 0.0).is_err());
        assert!(s.project(0.0, 181.0).is_err());
        assert!(ProjectionSpec::new(-91.0, 0.0).is_err());
    }

    #[test]
    fn inverse() {
        let s = ProjectionSpec::new(51.2, 3.1).unwrap();
        let (lat, lon) = s.unproject(s.project(51.25, 3.02).unwrap());
        assert!((lat - 51.25).abs() < 1e-12 && (lon - 3.02).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn locally_distance_faithful(ref_lat in -69.0..69.0f64, ref_lon in -170.0..170.0f64,
                                     b1 in 0.0..std::f64::consts::TAU, r1 in 0.0..10_000.0f64,
                                     b2 in 0.0..std::f64::consts::TAU, r2 in 0.0..10_000.0f64) {
            let s = ProjectionSpec::new(ref_lat, ref_lon).unwrap();
            let to_ll = |b: f64, r: f64| s.unproject(Position::new(r * b.cos(), r * b.sin()));
            let (la1, lo1) = to_ll(b1, r1);
            let (la2, lo2) = to_ll(b2, r2);
            prop_assume!(la1.abs() < 70.0 && la2.abs() < 70.0);
            let h = haversine(la1, lo1, la2, lo2);
            prop_assume!(h > 1.0);
            let pa = s.project(la1, lo1).unwrap();
            let pb = s.project(la2, lo2).unwrap();
            let planar = crate::geometry::dist(pa, pb);
            prop_assert!((planar - h).abs() / h < 0.01, "planar {} haversine {}", planar, h);
        }
    }
}

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SpeedUnit {
    #[default]
    Mps,
    Knots,
    Kmh,
}

impl SpeedUnit {
    pub fn to_mps(&self, v: f64) -> f64 {
        match self {
            SpeedUnit::Mps => v,
            SpeedUnit::Knots => v * 1852.0 / 3600.0,
            SpeedUnit::Kmh => v / 3.6,
        }
    }
}

/// Column mapping and units of a CSV dataset, usually read from a small
/// TOML file:
///
/// ```toml
/// id = "MMSI"
/// timestamp = "# Timestamp"
/// timestamp_format = "%d/%m/%Y %H:%M:%S"
/// lat = "Latitude"
/// lon = "Longitude"
/// sog = "SOG"
/// sog_unit = "knots"
/// cog = "COG"
/// ```
///
/// `timestamp_format` is `auto` (epoch seconds or ISO-8601), `epoch`,
/// `iso8601`, or a chrono format string interpreted as UTC. Course is
/// always read as compass degrees (0 = north, clockwise).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Schema {
    pub id: String,
    pub timestamp: String,
    pub timestamp_format: String,
    pub lat: Option<String>,
    pub lon: Option<String>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub sog: Option<String>,
    pub sog_unit: SpeedUnit,
    pub cog: Option<String>,
    /// When set, missing sog/cog columns are tolerated.
    pub optional_motion: bool,
    pub delimiter: char,
    pub ref_lat: Option<f64>,
    pub ref_lon: Option<f64>,
}

impl Default for Schema {
    fn default() -> Self {
        Self::native()
    }
}

impl Schema {
    /// Layout written by the synthetic generator: `id,ts,x,y,sog,cog` with
    /// planar meters and epoch seconds.
    pub fn native() -> Self {
        Self {
            id: "id".into(),
            timestamp: "ts".into(),
            timestamp_format: "auto".into(),
            lat: None,
            lon: None,
            x: Some("x".into()),
            y: Some("y".into()),
            sog: Some("sog".into()),
            sog_unit: SpeedUnit::Mps,
            cog: Some("cog".into()),
            optional_motion: true,
            delimiter: ',',
            ref_lat: None,
            ref_lon: None,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let mut schema: Schema =
            toml::from_str(s).map_err(|e| Error::Config(format!("schema: {e}")))?;
        // a geographic schema should not inherit the planar defaults
        if schema.lat.is_some() || schema.lon.is_some() {
            let raw: toml::Table =
                toml::from_str(s).map_err(|e| Error::Config(format!("schema: {e}")))?;
            if !raw.contains_key("x") {
                schema.x = None;
            }
            if !raw.contains_key("y") {
                schema.y = None;
            }
        }
        schema.validate()?;
        Ok(schema)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn is_geographic(&self) -> bool {
        self.lat.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let geo = self.lat.is_some() || self.lon.is_some();
        let planar = self.x.is_some() || self.y.is_some();
        match (geo, planar) {
            (true, true) => Err(Error::Config(
                "schema declares both lat/lon and x/y columns".into(),
            )),
            (false, false) => Err(Error::Config("schema declares no position columns".into())),
            (true, false) if self.lat.is_none() || self.lon.is_none() => {
                Err(Error::Config("schema needs both lat and lon".into()))
            }
            (false, true) if self.x.is_none() || self.y.is_none() => {
                Err(Error::Config("schema needs both x and y".into()))
            }
            _ => Ok(()),
        }?;
        if self.ref_lat.is_some() != self.ref_lon.is_some() {
            return Err(Error::Config("ref_lat and ref_lon go together".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ais_schema() {
        let s = Schema::from_toml_str(
            r##"
id = "MMSI"
timestamp = "# Timestamp"
timestamp_format = "%d/%m/%Y %H:%M:%S"
lat = "Latitude"
lon = "Longitude"
sog = "SOG"
sog_unit = "knots"
cog = "COG"
optional_motion = false
"##,
        )
        .unwrap();
        assert!(s.is_geographic());
        assert_eq!(s.x, None);
        assert_eq!(s.sog_unit, SpeedUnit::Knots);
        assert!((s.sog_unit.to_mps(1.0) - 0.5144444444444445).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_schemas() {
        assert!(Schema::from_toml_str("lat = \"a\"").is_err());
        assert!(Schema::from_toml_str("bogus = 1").is_err());
        assert!(Schema::from_toml_str("lat = \"a\"\nlon = \"b\"\nx = \"c\"").is_err());
        assert!(Schema::from_toml_str("ref_lat = 1.0").is_err());
    }
}

//! Dataset loading, projection to planar meters, stream merging and
//! synthetic data.

mod loader;
mod projection;
mod schema;
mod stream;
mod synth;

pub use loader::{compass_to_math, load_csv, math_to_compass, write_trajectories, Dataset};
pub use projection::{ProjectionSpec, EARTH_RADIUS_M};
pub use schema::{Schema, SpeedUnit};
pub use stream::merge_stream;
pub use synth::{burst_fixture, synth, MotionModel, SynthSpec};

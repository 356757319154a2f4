//! Turns algorithm flags into a validated [`Algorithm`].

use clap::Args;

use bwtraj_core::eval::default_interval;
use bwtraj_core::{
    Algorithm, AlgorithmKind, DrConfig, Error, ImpConfig, ImpSign, Predictor, RatioPlan, Result,
    SquishCapacity, StTraceConfig, TdTrConfig, Trajectories, WindowConfig,
};

pub const DEFAULT_DELTA: f64 = 900.0;

#[derive(Args, Debug, Clone)]
pub struct AlgoArgs {
    /// squish, sttrace, dr, tdtr, bwc-squish, bwc-sttrace, bwc-sttrace-imp, bwc-dr
    #[arg(long)]
    pub algo: String,

    /// Points kept per trajectory (squish) or in total (sttrace).
    #[arg(long)]
    pub capacity: Option<usize>,

    /// Dead-reckoning deviation threshold in meters.
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// TD-TR distance tolerance in meters.
    #[arg(long)]
    pub tolerance: Option<f64>,

    /// Points per window (bwc-*).
    #[arg(long)]
    pub bw: Option<usize>,

    /// Window length in seconds (bwc-*; with --ratio also for the others).
    #[arg(long)]
    pub delta: Option<f64>,

    /// Start of the first window; defaults to the first timestamp.
    #[arg(long)]
    pub start: Option<f64>,

    /// Seconds between error samples for bwc-sttrace-imp.
    #[arg(long)]
    pub precision: Option<f64>,

    /// two-point or sog-cog.
    #[arg(long)]
    pub predictor: Option<Predictor>,

    /// increase (default) or printed.
    #[arg(long)]
    pub imp_sign: Option<ImpSign>,

    /// Derive capacity, threshold or bw from a target kept/original ratio.
    #[arg(long)]
    pub ratio: Option<f64>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn require<T>(v: Option<T>, flag: &str, kind: AlgorithmKind) -> Result<T> {
    v.ok_or_else(|| usage(format!("{kind} needs --{flag}")))
}

impl AlgoArgs {
    fn given(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let flags = [
            ("capacity", self.capacity.is_some()),
            ("epsilon", self.epsilon.is_some()),
            ("tolerance", self.tolerance.is_some()),
            ("bw", self.bw.is_some()),
            ("delta", self.delta.is_some()),
            ("start", self.start.is_some()),
            ("precision", self.precision.is_some()),
            ("predictor", self.predictor.is_some()),
            ("imp-sign", self.imp_sign.is_some()),
        ];
        for (name, set) in flags {
            if set {
                out.push(name);
            }
        }
        out
    }

    /// Flags that may accompany `kind`.
    fn allowed(kind: AlgorithmKind, with_ratio: bool) -> &'static [&'static str] {
        use AlgorithmKind::*;
        match (kind, with_ratio) {
            (Squish | StTrace, false) => &["capacity"],
            (Dr, false) => &["epsilon", "predictor"],
            (TdTr, false) => &["tolerance"],
            (BwcSquish | BwcStTrace, false) => &["bw", "delta", "start"],
            (BwcStTraceImp, false) => &["bw", "delta", "start", "precision", "imp-sign"],
            (BwcDr, false) => &["bw", "delta", "start", "predictor"],
            (Squish | StTrace | TdTr, true) => &["delta", "start"],
            (Dr, true) => &["delta", "start", "predictor"],
            (BwcSquish | BwcStTrace, true) => &["delta", "start"],
            (BwcStTraceImp, true) => &["delta", "start", "precision", "imp-sign"],
            (BwcDr, true) => &["delta", "start", "predictor"],
        }
    }

    pub fn kind(&self) -> Result<AlgorithmKind> {
        self.algo.parse()
    }

    pub fn resolve(&self, data: &Trajectories) -> Result<Algorithm> {
        let kind = self.kind()?;
        let allowed = Self::allowed(kind, self.ratio.is_some());
        if let Some(bad) = self.given().into_iter().find(|f| !allowed.contains(f)) {
            let hint = if self.ratio.is_some() { " together with --ratio" } else { "" };
            return Err(usage(format!("--{bad} does not apply to {kind}{hint}")));
        }
        if let Some(ratio) = self.ratio {
            let mut plan = RatioPlan::new(ratio, self.delta.unwrap_or(DEFAULT_DELTA));
            plan.start = self.start;
            plan.predictor = self.predictor.unwrap_or_default();
            plan.precision = self.precision;
            plan.sign = self.imp_sign.unwrap_or_default();
            return plan.derive(kind, data);
        }
        let start = || -> Result<f64> {
            match self.start {
                Some(s) => Ok(s),
                None => bwtraj_core::algorithm::time_span(data)
                    .map(|s| s.0)
                    .ok_or(Error::EmptyInput),
            }
        };
        let window = || -> Result<WindowConfig> {
            WindowConfig::new(
                require(self.bw, "bw", kind)?,
                require(self.delta, "delta", kind)?,
                start()?,
            )
        };
        let alg = match kind {
            AlgorithmKind::Squish => Algorithm::Squish {
                capacity: SquishCapacity::Fixed(require(self.capacity, "capacity", kind)?),
            },
            AlgorithmKind::StTrace => {
                Algorithm::StTrace(StTraceConfig::new(require(self.capacity, "capacity", kind)?)?)
            }
            AlgorithmKind::Dr => Algorithm::Dr(DrConfig::new(
                require(self.epsilon, "epsilon", kind)?,
                self.predictor.unwrap_or_default(),
            )?),
            AlgorithmKind::TdTr => Algorithm::TdTr(TdTrConfig::new(require(self.tolerance, "tolerance", kind)?)?),
            AlgorithmKind::BwcSquish => Algorithm::BwcSquish(window()?),
            AlgorithmKind::BwcStTrace => Algorithm::BwcStTrace(window()?),
            AlgorithmKind::BwcStTraceImp => {
                let w = window()?;
                let precision = match self.precision {
                    Some(p) => p,
                    None => default_interval(data).unwrap_or(w.delta).min(w.delta),
                };
                Algorithm::BwcStTraceImp(ImpConfig::new(w, precision)?.with_sign(self.imp_sign.unwrap_or_default()))
            }
            AlgorithmKind::BwcDr => Algorithm::BwcDr {
                window: window()?,
                predictor: self.predictor.unwrap_or_default(),
            },
        };
        alg.validate()?;
        Ok(alg)
    }
}

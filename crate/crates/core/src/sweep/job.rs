use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::fock_oracle::Evolution;
use crate::pointers::{Family, Pointer};
use crate::{Coupling, Error, Result, SelectionPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    ShiftX,
    ShiftP,
    SnrPost,
    SnrNon,
    Chi,
    ChiPrime,
    Qfi,
    FisherPost,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::ShiftX,
        Quantity::ShiftP,
        Quantity::SnrPost,
        Quantity::SnrNon,
        Quantity::Chi,
        Quantity::ChiPrime,
        Quantity::Qfi,
        Quantity::FisherPost,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::ShiftX => "shift_x",
            Quantity::ShiftP => "shift_p",
            Quantity::SnrPost => "snr_post",
            Quantity::SnrNon => "snr_non",
            Quantity::Chi => "chi",
            Quantity::ChiPrime => "chi_prime",
            Quantity::Qfi => "qfi",
            Quantity::FisherPost => "fisher_post",
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.replace('-', "_");
        Quantity::ALL.into_iter().find(|q| q.name() == wanted).ok_or_else(|| {
            let names: Vec<_> = Quantity::ALL.iter().map(|q| q.name()).collect();
            Error::config(
                "quantity",
                format!("unknown quantity `{s}` (expected one of {})", names.join(", ")),
            )
        })
    }
}

/// One grid axis, written `name:min:max:steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Self {
        Self {
            name: name.to_string(),
            min,
            max,
            steps,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let span = self.max - self.min;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + span * i as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }

    fn parse(field: &str, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::config(
                field,
                format!("expected `name:min:max:steps`, got `{text}`"),
            ));
        }
        let num = |sub: &str, v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::config(format!("{field}.{sub}"), format!("not a number: `{v}`")))
        };
        let steps = parts[3]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::config(format!("{field}.steps"), format!("not a count: `{}`", parts[3])))?;
        Ok(Self {
            name: parts[0].trim().to_string(),
            min: num("min", parts[1])?,
            max: num("max", parts[2])?,
            steps,
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.name, self.min, self.max, self.steps)
    }
}

impl Serialize for Axis {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Axis {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Axis::parse("axis", &text).map_err(serde::de::Error::custom)
    }
}

fn evolution_name(e: Evolution) -> &'static str {
    match e {
        Evolution::Full => "full",
        Evolution::FirstOrder => "first-order",
    }
}

pub(crate) fn parse_evolution(s: &str) -> Result<Evolution> {
    match s {
        "full" => Ok(Evolution::Full),
        "first-order" | "first_order" => Ok(Evolution::FirstOrder),
        other => Err(Error::config(
            "evolution",
            format!("expected `full` or `first-order`, got `{other}`"),
        )),
    }
}

/// Partially specified job, as read from a config file or command-line
/// flags. Keys match the flag names.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct JobConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_runs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evolution: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl JobConfig {
    /// Reads a flat TOML key-value file, or a JSON sweep sidecar (whose
    /// `job` object is used).
    pub fn from_file(path: &Path) -> Result<Self> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(shown.clone(), format!("cannot read config file: {e}")))?;
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::config(shown.clone(), e.to_string()))?;
            let job = value.get("job").cloned().unwrap_or(value);
            serde_json::from_value(job).map_err(|e| Error::config(shown, e.to_string()))
        } else {
            toml::from_str(&text).map_err(|e| Error::config(shown, e.message().to_string()))
        }
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: &JobConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f.clone(); } )* };
        }
        take!(
            quantity, pointer, theta, phi, s, g, sigma, n_runs, r, phi_c, eta, delta, evolution, axis1, axis2, output
        );
        self
    }

    pub fn family(&self) -> Result<Family> {
        self.pointer.as_deref().unwrap_or("coherent").parse()
    }

    pub fn selection(&self) -> Result<SelectionPair> {
        SelectionPair::new(
            self.theta.unwrap_or(7.0 * std::f64::consts::PI / 9.0),
            self.phi.unwrap_or(FRAC_PI_4),
        )
        .map_err(|e| Error::config("theta/phi", e.to_string()))
    }

    /// Coupling from `s` or `g` (with `σ`, default 1).
    pub fn coupling(&self) -> Result<Coupling> {
        let sigma = self.sigma.unwrap_or(1.0);
        let n_runs = self.n_runs.unwrap_or(1);
        let g = match (self.s, self.g) {
            (Some(s), Some(g)) => {
                if (s * sigma - g).abs() > 1e-12 * g.abs().max(1e-300) {
                    return Err(Error::config(
                        "g",
                        format!("g = {g} conflicts with s·sigma = {}", s * sigma),
                    ));
                }
                g
            }
            (Some(s), None) => s * sigma,
            (None, Some(g)) => g,
            (None, None) => 1e-5 * sigma,
        };
        Coupling::new(g, sigma, n_runs).map_err(|e| match e {
            Error::InvalidParameter { name, reason } => Error::config(name, reason),
            other => other,
        })
    }

    pub fn pointer(&self) -> Result<Pointer> {
        let family = self.family()?;
        let (modulus, angle) = match family {
            Family::Coherent | Family::Cat => (self.r.unwrap_or(1.0), self.phi_c.unwrap_or(FRAC_PI_4)),
            Family::Squeezed => (self.eta.unwrap_or(1.0), self.delta.unwrap_or(FRAC_PI_4)),
        };
        Pointer::from_family(family, modulus, angle).map_err(|e| match e {
            Error::InvalidParameter { name, reason } => Error::config(name, reason),
            other => other,
        })
    }

    pub fn evolution(&self) -> Result<Evolution> {
        self.evolution
            .as_deref()
            .map(parse_evolution)
            .unwrap_or(Ok(Evolution::Full))
    }

    /// Resolves defaults and validates into a runnable job.
    pub fn into_job(self) -> Result<SweepJob> {
        let quantity: Quantity = self
            .quantity
            .as_deref()
            .ok_or_else(|| Error::config("quantity", "required"))?
            .parse()?;
        let family = self.family()?;
        let sel = self.selection()?;
        let cfg = self.coupling()?;
        let pointer = self.pointer()?;
        let (modulus_name, angle_name) = modulus_angle_names(family);
        let (def1, def2) = (
            Axis::new(modulus_name, 0.0, 3.0, 41),
            Axis::new(angle_name, 0.0, TAU, 61),
        );
        let axis1 = match &self.axis1 {
            Some(t) => Axis::parse("axis1", t)?,
            None => def1,
        };
        let axis2 = match &self.axis2 {
            Some(t) => Axis::parse("axis2", t)?,
            None => def2,
        };
        let (modulus, angle) = match pointer {
            Pointer::Coherent(c) => (c.r, c.phi_c),
            Pointer::EvenCat(c) => (c.r, c.phi_c),
            Pointer::SqueezedVacuum(q) => (q.eta, q.delta),
        };
        let job = SweepJob {
            quantity,
            pointer: family,
            theta: sel.theta(),
            phi: sel.phi(),
            s: cfg.strength(),
            sigma: cfg.sigma(),
            n_runs: cfg.n_runs(),
            modulus,
            angle,
            evolution: self.evolution()?,
            axis1,
            axis2,
            output: self.output.unwrap_or_else(|| "sweep".to_string()),
        };
        job.validate()?;
        Ok(job)
    }
}

fn modulus_angle_names(family: Family) -> (&'static str, &'static str) {
    match family {
        Family::Coherent | Family::Cat => ("r", "phi-c"),
        Family::Squeezed => ("eta", "delta"),
    }
}

/// Fully resolved sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepJob {
    pub quantity: Quantity,
    pub pointer: Family,
    pub theta: f64,
    pub phi: f64,
    pub s: f64,
    pub sigma: f64,
    pub n_runs: u64,
    /// `r` or `η`.
    pub modulus: f64,
    /// `φ_c` or `δ`.
    pub angle: f64,
    pub evolution: Evolution,
    pub axis1: Axis,
    pub axis2: Axis,
    pub output: String,
}

impl SweepJob {
    pub fn valid_axis_names(&self) -> [&'static str; 5] {
        let (m, a) = modulus_angle_names(self.pointer);
        ["theta", "phi", "s", m, a]
    }

    pub fn validate(&self) -> Result<()> {
        let names = self.valid_axis_names();
        for (field, axis) in [("axis1", &self.axis1), ("axis2", &self.axis2)] {
            if !names.contains(&axis.name.as_str()) {
                return Err(Error::config(
                    format!("{field}.name"),
                    format!(
                        "`{}` is not a parameter of the {} pointer (expected one of {})",
                        axis.name,
                        self.pointer.name(),
                        names.join(", ")
                    ),
                ));
            }
            if axis.steps < 2 {
                return Err(Error::config(
                    format!("{field}.steps"),
                    format!("need at least 2 steps, got {}", axis.steps),
                ));
            }
            if !(axis.min.is_finite() && axis.max.is_finite() && axis.min < axis.max) {
                return Err(Error::config(
                    format!("{field}.min"),
                    format!("need finite min < max, got {}..{}", axis.min, axis.max),
                ));
            }
        }
        if self.axis1.name == self.axis2.name {
            return Err(Error::config(
                "axis2.name",
                format!("both axes sweep `{}`", self.axis1.name),
            ));
        }
        Ok(())
    }

    /// Flat key-value form, re-readable by [`JobConfig`].
    pub fn to_config(&self) -> JobConfig {
        let (m, a) = (Some(self.modulus), Some(self.angle));
        let (r, phi_c, eta, delta) = match self.pointer {
            Family::Coherent | Family::Cat => (m, a, None, None),
            Family::Squeezed => (None, None, m, a),
        };
        JobConfig {
            quantity: Some(self.quantity.name().to_string()),
            pointer: Some(self.pointer.name().to_string()),
            theta: Some(self.theta),
            phi: Some(self.phi),
            s: Some(self.s),
            g: None,
            sigma: Some(self.sigma),
            n_runs: Some(self.n_runs),
            r,
            phi_c,
            eta,
            delta,
            evolution: Some(evolution_name(self.evolution).to_string()),
            axis1: Some(self.axis1.to_string()),
            axis2: Some(self.axis2.to_string()),
            output: Some(self.output.clone()),
        }
    }

    /// Parameters at one grid point.
    pub fn point(&self, v1: f64, v2: f64) -> Result<(SelectionPair, Pointer, Coupling)> {
        let mut cfg = self.to_config();
        cfg.g = None;
        for (axis, v) in [(&self.axis1, v1), (&self.axis2, v2)] {
            match axis.name.as_str() {
                "theta" => cfg.theta = Some(v),
                "phi" => cfg.phi = Some(v),
                "s" => cfg.s = Some(v),
                "r" => cfg.r = Some(v),
                "phi-c" => cfg.phi_c = Some(v),
                "eta" => cfg.eta = Some(v),
                "delta" => cfg.delta = Some(v),
                other => return Err(Error::config("axis.name", format!("unknown axis `{other}`"))),
            }
        }
        Ok((cfg.selection()?, cfg.pointer()?, cfg.coupling()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> JobConfig {
        JobConfig {
            quantity: Some("chi".into()),
            pointer: Some("squeezed".into()),
            ..Default::default()
        }
    }

    #[test]
    fn defaults_follow_family() {
        let job = base().into_job().unwrap();
        assert_eq!(job.axis1, Axis::new("eta", 0.0, 3.0, 41));
        assert_eq!(job.axis2.name, "delta");
        assert_eq!(job.axis2.steps, 61);
        assert!((job.s - 1e-5).abs() < 1e-20);
    }

    #[test]
    fn axis_errors_name_the_field() {
        let mut c = base();
        c.axis1 = Some("r:0:3:41".into());
        match c.into_job() {
            Err(Error::ConfigInvalid { path, .. }) => assert_eq!(path, "axis1.name"),
            other => panic!("{other:?}"),
        }
        let mut c = base();
        c.axis2 = Some("delta:0:1:1".into());
        assert!(matches!(c.into_job(), Err(Error::ConfigInvalid { path, .. }) if path == "axis2.steps"));
        let mut c = base();
        c.axis2 = Some("delta:1:0:5".into());
        assert!(matches!(c.into_job(), Err(Error::ConfigInvalid { path, .. }) if path == "axis2.min"));
        let mut c = base();
        c.axis2 = Some("delta:0:1".into());
        assert!(matches!(c.into_job(), Err(Error::ConfigInvalid { path, .. }) if path == "axis2"));
        let mut c = base();
        c.quantity = Some("nope".into());
        assert!(matches!(c.into_job(), Err(Error::ConfigInvalid { path, .. }) if path == "quantity"));
    }

    #[test]
    fn conflicting_strength_rejected() {
        let mut c = base();
        c.s = Some(0.1);
        c.g = Some(0.5);
        assert!(matches!(c.into_job(), Err(Error::ConfigInvalid { path, .. }) if path == "g"));
        let mut c = base();
        c.g = Some(0.02);
        c.sigma = Some(0.1);
        let job = c.into_job().unwrap();
        assert!((job.s - 0.2).abs() < 1e-15);
    }

    #[test]
    fn toml_config_parses() {
        let text = "quantity = \"chi_prime\"\npointer = \"coherent\"\ntheta = 2.443460952792061\nphi-c = 0.5\nn-runs = 4\naxis1 = \"r:0:3:5\"\naxis2 = \"phi-c:0:6.283185307179586:7\"\n";
        let c: JobConfig = toml::from_str(text).unwrap();
        let job = c.into_job().unwrap();
        assert_eq!(job.quantity, Quantity::ChiPrime);
        assert_eq!(job.n_runs, 4);
        assert_eq!(job.axis2.max, TAU);
        let bad: std::result::Result<JobConfig, _> = toml::from_str("bogus = 1\n");
        assert!(bad.is_err());
    }

    #[test]
    fn config_round_trip() {
        let mut c = base();
        c.theta = Some(1.234);
        c.axis1 = Some("theta:0.1:3:9".into());
        c.axis2 = Some("s:0.001:2:3".into());
        let job = c.into_job().unwrap();
        let json = serde_json::to_string(&job.to_config()).unwrap();
        let again: JobConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(again.into_job().unwrap(), job);
    }

    #[test]
    fn axis_values_hit_endpoints() {
        let v = Axis::new("r", 0.0, TAU, 61).values();
        assert_eq!(v.len(), 61);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[60], TAU);
    }
}

//! JSON job descriptions. Unknown fields are rejected so that a typo in a
//! job file fails loudly instead of silently running defaults.

use serde::Deserialize;
use weylkit::maps::MapSpec;
use weylkit::GridSpec;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    /// symbol | star | bracket | kernel | transform | wigner | propagate | verify
    pub command: String,
    #[serde(default)]
    pub map: Option<MapSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub input: Option<String>,
    #[serde(default)]
    pub input2: Option<String>,
    #[serde(default)]
    pub output: Option<String>,
    /// secondary output (e.g. the phase-space kernel samples)
    #[serde(default)]
    pub emit: Option<String>,
    #[serde(default)]
    pub hbar: Option<f64>,
    /// star truncation order for star/bracket/propagate
    #[serde(default)]
    pub order: Option<u32>,
    /// `invert` flips the symbol command to symbol→operator
    #[serde(default)]
    pub invert: Option<bool>,
    /// flow-generator spec "m,n" plus gamma for propagate
    #[serde(default)]
    pub generator: Option<String>,
    #[serde(default)]
    pub gamma: Option<f64>,
    /// propagate route: "flow" (default) or "kernel"
    #[serde(default)]
    pub route: Option<String>,
    /// verify selection and environment
    #[serde(default)]
    pub suite: Option<Vec<String>>,
    #[serde(default)]
    pub hbars: Option<Vec<f64>>,
    #[serde(default)]
    pub grid_points: Option<usize>,
    #[serde(default)]
    pub tol_scale: Option<f64>,
}

impl JobSpec {
    pub fn from_reader<R: std::io::Read>(r: R) -> Result<Self, String> {
        let mut de = serde_json::Deserializer::from_reader(r);
        serde_path_to_error_free(&mut de)
    }
}

fn serde_path_to_error_free<'de, D>(de: D) -> Result<JobSpec, String>
where
    D: serde::Deserializer<'de>,
{
    JobSpec::deserialize(de).map_err(|e| format!("invalid job spec: {e}"))
}

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ufield::FieldDesc;

/// A batch job as read from a JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub field: FieldDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapDesc>,
    pub command: Command,
    #[serde(default)]
    pub params: Params,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDesc {
    pub lambda: String,
    /// `a_2, a_3, ...`
    #[serde(default)]
    pub coefficients: Vec<String>,
    #[serde(default)]
    pub tail: TailDesc,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TailDesc {
    #[default]
    Polynomial,
    Affine {
        alpha: i64,
        beta: i64,
        from: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<String>,
    },
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Radii,
    Solve,
    Verify,
    Oracle,
    Census,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Radii => "radii",
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Oracle => "oracle",
            Command::Census => "census",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeDesc {
    Semi,
    Full,
    #[default]
    Both,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Solve order.
    #[serde(rename = "N", alias = "order", default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    /// Extra seeded points drawn inside the domain disc.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeDesc>,
    /// Census depth `m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Census input `c_1, c_2, ...`; the map's `f` is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<String>>,
}

pub const DEFAULT_ORDER: usize = 64;
pub const MAX_ORDER: usize = 1024;
pub const DEFAULT_KMAX: usize = 12;
pub const DEFAULT_DEPTH: u32 = 3;

impl JobSpec {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            msg: e.inner().to_string(),
        })
    }

    pub fn order(&self) -> usize {
        self.params.order.unwrap_or(DEFAULT_ORDER)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_job() {
        let j = JobSpec::from_json(
            r#"{"field": {"kind": "padic", "p": 5}, "map": {"lambda": "5", "coefficients": ["1"]}, "command": "radii"}"#,
        )
        .unwrap();
        assert_eq!(j.map.unwrap().tail, TailDesc::Polynomial);
        assert_eq!(j.params, Params::default());
    }

    #[test]
    fn tails_and_order_alias() {
        let j = JobSpec::from_json(
            r#"{"field": {"kind": "laurent_fp", "p": 3}, "command": "solve", "params": {"order": 12},
                "map": {"lambda": "T", "tail": {"affine": {"alpha": -1, "beta": 0, "from": 2}}}}"#,
        )
        .unwrap();
        assert_eq!(j.order(), 12);
        assert!(matches!(j.map.unwrap().tail, TailDesc::Affine { alpha: -1, .. }));
        let j = JobSpec::from_json(
            r#"{"field": {"kind": "laurent_q"}, "command": "solve", "params": {"N": 7},
                "map": {"lambda": "T", "tail": "unknown"}}"#,
        )
        .unwrap();
        assert_eq!(j.order(), 7);
    }

    #[test]
    fn unknown_key_names_path() {
        let e =
            JobSpec::from_json(r#"{"field": {"kind": "padic", "p": 5}, "command": "radii", "params": {"ordr": 3}}"#)
                .unwrap_err();
        match e {
            Error::Schema { path, msg } => {
                assert_eq!(path, "params.ordr");
                assert!(msg.contains("ordr"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        let e = JobSpec::from_json(r#"{"field": {"kind": "padic", "p": 5}, "command": "plot"}"#).unwrap_err();
        assert!(
            matches!(e, Error::Schema { ref path, .. } if path == "command"),
            "{e:?}"
        );
    }
}

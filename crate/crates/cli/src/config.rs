//! Run configuration and the `--grid` syntax.

use std::collections::BTreeMap;

use opinv_core::invar::SignatureConfig;
use opinv_core::scalar::{format_rational, parse_rational};
use opinv_core::Rational;
use serde::Serialize;

use crate::error::CliError;

/// One grid axis `from:to:count`, sampled at `count` equally spaced points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub from: Rational,
    pub to: Rational,
    pub count: usize,
}

impl Serialize for GridAxis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GridAxis", 3)?;
        st.serialize_field("from", &format_rational(&self.from))?;
        st.serialize_field("to", &format_rational(&self.to))?;
        st.serialize_field("count", &self.count)?;
        st.end()
    }
}

impl GridAxis {
    pub fn points(&self) -> Vec<Rational> {
        if self.count == 1 {
            return vec![self.from.clone()];
        }
        let step = (&self.to - &self.from) / Rational::from_integer((self.count - 1).into());
        (0..self.count).map(|i| &self.from + &step * Rational::from_integer(i.into())).collect()
    }
}

/// Parses `"a:b:count,a:b:count,..."`; endpoints are exact rationals.
pub fn parse_grid(text: &str) -> Result<Vec<GridAxis>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("invalid --grid `{text}`: {why}"));
    text.split(',')
        .map(|axis| {
            let parts: Vec<&str> = axis.split(':').collect();
            let [a, b, n] = parts[..] else { return Err(bad("each axis must be from:to:count")) };
            let from = parse_rational(a).map_err(|_| bad(&format!("bad endpoint `{a}`")))?;
            let to = parse_rational(b).map_err(|_| bad(&format!("bad endpoint `{b}`")))?;
            let count: usize = n.trim().parse().map_err(|_| bad(&format!("bad count `{n}`")))?;
            if count == 0 {
                return Err(bad("count must be positive"));
            }
            if count > 1 && from == to {
                return Err(bad("an axis with several points needs distinct endpoints"));
            }
            Ok(GridAxis { from, to, count })
        })
        .collect()
}

/// Cartesian product of the axes, first axis varying slowest.
pub fn grid_points(axes: &[GridAxis]) -> Vec<Vec<Rational>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        let pts = axis.points();
        acc.into_iter()
            .flat_map(|prefix| {
                pts.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

/// Everything besides the input files that determines a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub grid: Option<Vec<GridAxis>>,
    pub signature_config: Option<SignatureConfig>,
    pub output: Option<String>,
    pub format: Format,
    /// Subcommand-specific settings.
    pub options: BTreeMap<String, serde_json::Value>,
}

//! Experiment configuration files.

use std::fmt;
use std::path::PathBuf;

use dirac_core::liestruct::SubalgebraSpec;
use dirac_core::linalg::{fmt_q, parse_q, Q};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// Exact rational written as `"n/d"` or as a bare integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Q);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string such as \"-3/2\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat(Q::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat(Q::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                parse_q(v)
                    .map(Rat)
                    .ok_or_else(|| E::custom(format!("`{v}` is not an exact rational")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Multiplets,
    Cohomology,
    Cocycle,
    SquareIdentity,
    HcDiagram,
    Nonvanishing,
    DescribePair,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Multiplets => "multiplets",
            Command::Cohomology => "cohomology",
            Command::Cocycle => "cocycle",
            Command::SquareIdentity => "square-identity",
            Command::HcDiagram => "hc-diagram",
            Command::Nonvanishing => "nonvanishing",
            Command::DescribePair => "describe-pair",
        }
    }
}

/// Subalgebra r. Simple roots are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Subalgebra {
    Full,
    Zero,
    Levi {
        simple: Vec<usize>,
    },
    /// Generating roots in simple-root coordinates; h is always included.
    EqualRank {
        roots: Vec<Vec<i64>>,
    },
    /// Basis vectors of r in the Chevalley basis of g.
    Explicit {
        basis: Vec<Vec<Rat>>,
    },
    PrincipalSl2,
    Diagonal,
}

impl Subalgebra {
    pub fn to_spec(&self, rank: usize) -> Result<SubalgebraSpec, CliError> {
        Ok(match self {
            Subalgebra::Full => SubalgebraSpec::Full,
            Subalgebra::Zero => SubalgebraSpec::Zero,
            Subalgebra::Levi { simple } => {
                let mut out = Vec::with_capacity(simple.len());
                for &i in simple {
                    if i == 0 || i > rank {
                        return Err(CliError::config(
                            "subalgebra.simple",
                            format!("simple root {i} outside 1..={rank}"),
                        ));
                    }
                    out.push(i - 1);
                }
                SubalgebraSpec::Levi(out)
            }
            Subalgebra::EqualRank { roots } => {
                if let Some(r) = roots.iter().find(|r| r.len() != rank) {
                    return Err(CliError::config(
                        "subalgebra.roots",
                        format!("root {r:?} does not have {rank} coordinates"),
                    ));
                }
                SubalgebraSpec::EqualRank(roots.clone())
            }
            Subalgebra::Explicit { basis } => SubalgebraSpec::Explicit(
                basis
                    .iter()
                    .map(|v| v.iter().map(|x| x.0.clone()).collect())
                    .collect(),
            ),
            Subalgebra::PrincipalSl2 => SubalgebraSpec::PrincipalSl2,
            Subalgebra::Diagonal => SubalgebraSpec::Diagonal,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightBasis {
    /// Coefficients of the fundamental weights.
    Fundamental,
    /// Coefficients of the simple roots.
    SimpleRoot,
    /// Values of `λ+ρ` on the basis of `h_r`, with `λ+ρ` zero on `h_p`.
    ShiftedHr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub basis: WeightBasis,
    pub coords: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default = "default_group_order")]
    pub group_order: usize,
}

fn default_max_dim() -> usize {
    5000
}

fn default_group_order() -> usize {
    100_000
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_dim: default_max_dim(),
            group_order: default_group_order(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    pub algebra: String,
    pub subalgebra: Subalgebra,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<WeightSpec>,
    /// Truncation depth for Verma modules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Number of grid points for `hc-diagram`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default)]
    pub caps: Caps,
    /// Report path, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config {
            field: String::new(),
            message: e.to_string().trim_end().to_string(),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

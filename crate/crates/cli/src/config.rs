//! Session configuration: a TOML file naming a group, a parameter per
//! reflection class and a list of analyses.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use cherednik::exact::{Cyclotomic, Matrix};
use cherednik::rca::Param;
use cherednik::refl::{parabolic_classes, ReflGroup, DEFAULT_BOUND};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("malformed config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] cherednik::Error),
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub group: GroupSpec,
    /// Reflection class label → scalar string. Omitted means `c = 0`.
    #[serde(default)]
    pub parameters: Option<BTreeMap<String, String>>,
    #[serde(default, rename = "analysis")]
    pub analyses: Vec<AnalysisSpec>,
    #[serde(default)]
    pub seed: u64,
    /// Report directory, relative to the config file.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        order: u32,
    },
    Dihedral {
        m: u32,
    },
    /// Generators given as square matrices of scalar strings.
    Matrices {
        name: String,
        generators: Vec<Vec<Vec<String>>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AnalysisSpec {
    GroupInfo {
        #[serde(default)]
        id: Option<String>,
    },
    LeafCensusC0 {
        #[serde(default)]
        id: Option<String>,
    },
    RestrictedBlocks {
        #[serde(default)]
        id: Option<String>,
    },
    BeCheck {
        #[serde(default)]
        id: Option<String>,
        /// Explicit base point; otherwise the representative of `parabolic`.
        #[serde(default)]
        b: Option<Vec<String>>,
        #[serde(default)]
        parabolic: Option<String>,
        k: u32,
        /// Orders `j` at which to compare ideal images.
        #[serde(default)]
        ideals: Vec<u32>,
        #[serde(default)]
        printed_sign: bool,
    },
    MainCheck {
        #[serde(default)]
        id: Option<String>,
        parabolic: String,
        k: u32,
        #[serde(default)]
        psi: Option<Vec<String>>,
    },
}

impl AnalysisSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            AnalysisSpec::GroupInfo { .. } => "group-info",
            AnalysisSpec::LeafCensusC0 { .. } => "leaf-census-c0",
            AnalysisSpec::RestrictedBlocks { .. } => "restricted-blocks",
            AnalysisSpec::BeCheck { .. } => "be-check",
            AnalysisSpec::MainCheck { .. } => "main-check",
        }
    }

    pub fn id(&self) -> &str {
        let id = match self {
            AnalysisSpec::GroupInfo { id }
            | AnalysisSpec::LeafCensusC0 { id }
            | AnalysisSpec::RestrictedBlocks { id }
            | AnalysisSpec::BeCheck { id, .. }
            | AnalysisSpec::MainCheck { id, .. } => id,
        };
        id.as_deref().unwrap_or(self.kind())
    }
}

/// A validated configuration with its group, parameter and analyses resolved.
#[derive(Debug)]
pub struct Session {
    pub config: SessionConfig,
    pub conductor: u32,
    pub group: Arc<ReflGroup>,
    pub param: Param,
    pub analyses: Vec<Analysis>,
    /// Directory of the config file; relative output paths hang off it.
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone)]
pub enum Analysis {
    GroupInfo,
    LeafCensus,
    RestrictedBlocks,
    BeCheck {
        b: Option<Vec<Cyclotomic>>,
        members: Option<Vec<usize>>,
        k: u32,
        ideals: Vec<u32>,
        printed_sign: bool,
    },
    MainCheck {
        members: Vec<usize>,
        k: u32,
        psi: Option<Vec<Cyclotomic>>,
    },
}

fn lcm(a: u32, b: u32) -> u32 {
    let gcd = |mut a: u32, mut b: u32| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    a / gcd(a, b) * b
}

/// Strips decorations so `b`, `<b>` and `(<b>)` name the same class.
fn norm_label(s: &str) -> String {
    s.chars().filter(|c| !"()<> ".contains(*c)).collect()
}

impl Session {
    pub fn load(path: &Path) -> Result<Session> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Session::from_str(&text, base)
    }

    pub fn from_str(text: &str, base_dir: PathBuf) -> Result<Session> {
        let config: SessionConfig = toml::from_str(text)?;
        let conductor = session_conductor(&config)?;
        let group = Arc::new(build_group(&config.group, conductor)?);
        let param = build_param(&group, config.parameters.as_ref(), conductor)?;
        let analyses = config
            .analyses
            .iter()
            .map(|a| resolve(a, &group, conductor))
            .collect::<Result<_>>()?;
        Ok(Session {
            config,
            conductor,
            group,
            param,
            analyses,
            base_dir,
        })
    }
}

/// Smallest conductor holding the group's matrices and every scalar string.
fn session_conductor(config: &SessionConfig) -> Result<u32> {
    let mut n = match &config.group {
        GroupSpec::Cyclic { order } => *order,
        GroupSpec::Dihedral { m } => *m,
        GroupSpec::Matrices { .. } => 1,
    }
    .max(1);
    let mut strings: Vec<&String> = Vec::new();
    if let GroupSpec::Matrices { generators, .. } = &config.group {
        strings.extend(generators.iter().flatten().flatten());
    }
    if let Some(p) = &config.parameters {
        strings.extend(p.values());
    }
    for a in &config.analyses {
        match a {
            AnalysisSpec::BeCheck { b: Some(b), .. } => strings.extend(b),
            AnalysisSpec::MainCheck { psi: Some(p), .. } => strings.extend(p),
            _ => {}
        }
    }
    for s in strings {
        n = lcm(n, Cyclotomic::required_conductor(s)?);
    }
    Ok(n)
}

fn build_group(spec: &GroupSpec, conductor: u32) -> Result<ReflGroup> {
    Ok(match spec {
        GroupSpec::Cyclic { order } => ReflGroup::cyclic(*order, conductor)?,
        GroupSpec::Dihedral { m } => ReflGroup::dihedral(*m, conductor)?,
        GroupSpec::Matrices { name, generators } => {
            let mats = generators
                .iter()
                .map(|rows| {
                    let n = rows.len();
                    if rows.iter().any(|r| r.len() != n) {
                        return Err(ConfigError::Invalid(format!(
                            "generator of {name} is not square"
                        )));
                    }
                    let rows = rows
                        .iter()
                        .map(|r| r.iter().map(|s| Cyclotomic::parse(conductor, s)).collect())
                        .collect::<std::result::Result<Vec<Vec<_>>, _>>()?;
                    Ok(Matrix::from_rows(rows, n))
                })
                .collect::<Result<Vec<_>>>()?;
            ReflGroup::build(name, mats, None, DEFAULT_BOUND)?
        }
    })
}

fn build_param(
    g: &ReflGroup,
    values: Option<&BTreeMap<String, String>>,
    conductor: u32,
) -> Result<Param> {
    let Some(values) = values else {
        return Ok(Param::zero(g));
    };
    let labels: Vec<String> = (0..g.reflection_classes().len())
        .map(|i| g.reflection_class_label(i))
        .collect();
    let mut pairs = Vec::new();
    for (key, v) in values {
        let Some(label) = labels.iter().find(|l| norm_label(l) == norm_label(key)) else {
            return Err(ConfigError::Invalid(format!(
                "parameter key {key:?} is not a reflection class of {} (classes: {})",
                g.name(),
                labels.join(", ")
            )));
        };
        pairs.push((label.clone(), Cyclotomic::parse(conductor, v)?));
    }
    if let Some(missing) = labels
        .iter()
        .find(|l| !values.keys().any(|k| norm_label(k) == norm_label(l)))
    {
        return Err(ConfigError::Invalid(format!(
            "no parameter given for reflection class {missing:?}"
        )));
    }
    Ok(Param::from_labels(g, &pairs)?)
}

fn class_members(g: &ReflGroup, label: &str) -> Result<Vec<usize>> {
    let poset = parabolic_classes(g)?;
    poset
        .classes
        .iter()
        .find(|c| norm_label(&c.label) == norm_label(label))
        .map(|c| c.representative.members.clone())
        .ok_or_else(|| {
            let known: Vec<&str> = poset.classes.iter().map(|c| c.label.as_str()).collect();
            ConfigError::Invalid(format!(
                "no parabolic class {label:?} in {} (classes: {})",
                g.name(),
                known.join(", ")
            ))
        })
}

fn check_order(k: u32) -> Result<()> {
    if k < 1 {
        return Err(ConfigError::Invalid(
            "truncation order k must be at least 1".into(),
        ));
    }
    Ok(())
}

fn resolve(spec: &AnalysisSpec, g: &ReflGroup, conductor: u32) -> Result<Analysis> {
    let scalars = |v: &[String]| -> Result<Vec<Cyclotomic>> {
        v.iter()
            .map(|s| Ok(Cyclotomic::parse(conductor, s)?))
            .collect()
    };
    Ok(match spec {
        AnalysisSpec::GroupInfo { .. } => Analysis::GroupInfo,
        AnalysisSpec::LeafCensusC0 { .. } => Analysis::LeafCensus,
        AnalysisSpec::RestrictedBlocks { .. } => Analysis::RestrictedBlocks,
        AnalysisSpec::BeCheck {
            b,
            parabolic,
            k,
            ideals,
            printed_sign,
            ..
        } => {
            check_order(*k)?;
            if let Some(j) = ideals.iter().find(|&&j| j > *k) {
                return Err(ConfigError::Invalid(format!(
                    "ideal order {j} exceeds k = {k}"
                )));
            }
            let (b, members) = match (b, parabolic) {
                (Some(_), Some(_)) => {
                    return Err(ConfigError::Invalid(
                        "be-check takes either b or parabolic, not both".into(),
                    ))
                }
                (Some(b), None) => {
                    if b.len() != g.rank() {
                        return Err(ConfigError::Invalid(format!(
                            "base point has {} coordinates, the group has rank {}",
                            b.len(),
                            g.rank()
                        )));
                    }
                    (Some(scalars(b)?), None)
                }
                (None, Some(label)) => (None, Some(class_members(g, label)?)),
                (None, None) => {
                    return Err(ConfigError::Invalid("be-check needs b or parabolic".into()))
                }
            };
            Analysis::BeCheck {
                b,
                members,
                k: *k,
                ideals: ideals.clone(),
                printed_sign: *printed_sign,
            }
        }
        AnalysisSpec::MainCheck {
            parabolic, k, psi, ..
        } => {
            check_order(*k)?;
            Analysis::MainCheck {
                members: class_members(g, parabolic)?,
                k: *k,
                psi: psi.as_deref().map(scalars).transpose()?,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Session> {
        Session::from_str(text, PathBuf::new())
    }

    #[test]
    fn conductor_covers_every_scalar() {
        let s = load(
            "[group]\nfamily = \"dihedral\"\nm = 4\n[parameters]\nb = \"1/2*z6^2\"\nab = \"0\"\n",
        )
        .unwrap();
        assert_eq!(s.conductor, 12);
        assert_eq!(
            s.param.values()[0],
            Cyclotomic::parse(12, "1/2*z6^2").unwrap()
        );
    }

    #[test]
    fn labels_may_carry_brackets() {
        let s = load("[group]\nfamily = \"dihedral\"\nm = 4\n[parameters]\n\"<b>\" = \"1\"\n\"(ab)\" = \"2\"\n").unwrap();
        assert_eq!(s.param.values()[1], Cyclotomic::from_int(4, 2));
        assert_eq!(norm_label("(<ab>)"), "ab");
    }

    #[test]
    fn missing_parameters_mean_zero() {
        let s = load("[group]\nfamily = \"cyclic\"\norder = 3\n").unwrap();
        assert!(s.param.is_zero());
        assert!(s.analyses.is_empty());
    }

    #[test]
    fn incomplete_parameters_are_rejected() {
        let e =
            load("[group]\nfamily = \"dihedral\"\nm = 4\n[parameters]\nb = \"1\"\n").unwrap_err();
        assert!(e.to_string().contains("\"ab\""), "{e}");
    }

    #[test]
    fn be_check_resolution() {
        let base = "[group]\nfamily = \"dihedral\"\nm = 3\n";
        let ok = load(&format!(
            "{base}[[analysis]]\ntype = \"be-check\"\nb = [\"1\", \"1\"]\nk = 2\n"
        ))
        .unwrap();
        assert!(matches!(
            &ok.analyses[0],
            Analysis::BeCheck {
                b: Some(_),
                members: None,
                ..
            }
        ));
        for bad in [
            "b = [\"1\"]\nk = 2",
            "k = 2",
            "parabolic = \"b\"\nk = 2\nideals = [3]",
            "b = [\"1\", \"1\"]\nparabolic = \"b\"\nk = 2",
        ] {
            assert!(
                load(&format!("{base}[[analysis]]\ntype = \"be-check\"\n{bad}\n")).is_err(),
                "{bad}"
            );
        }
    }

    #[test]
    fn ids_default_to_kinds() {
        let s = load("[group]\nfamily = \"cyclic\"\norder = 2\n[[analysis]]\ntype = \"group-info\"\n[[analysis]]\ntype = \"leaf-census-c0\"\nid = \"leaves\"\n").unwrap();
        let ids: Vec<&str> = s.config.analyses.iter().map(|a| a.id()).collect();
        assert_eq!(ids, vec!["group-info", "leaves"]);
    }
}

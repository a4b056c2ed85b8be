use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::algebra::{parse_operator, OperatorSum, PauliWord};
use crate::models::{Coupling, Field, LatticeSpec, ModelSpec, DEFAULT_SITE_CAP};
use crate::sdeom::Kind;

pub const DEFAULT_GRID_COUNT: usize = 401;
pub const DEFAULT_GRID_MIN: f64 = -2.0;
pub const DEFAULT_GRID_MAX: f64 = 2.0;
pub const DEFAULT_OUT_DIR: &str = "adt-out";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    tasks: Vec<Task>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    model: RawModel,
    state: RawState,
    operators: Option<RawOperators>,
    grid: Option<RawGrid>,
    compare: Option<RawCompare>,
    perturb: Option<RawPerturb>,
    moments: Option<RawMoments>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawModel {
    QsmBond {
        jz: f64,
        #[serde(default)]
        hz: f64,
        #[serde(default)]
        hx: f64,
    },
    QsmLattice {
        n_sites: usize,
        #[serde(default)]
        fields: Vec<Field>,
        #[serde(default)]
        couplings: Vec<Coupling>,
    },
    HubbardAtom {
        mu_up: [f64; 3],
        mu_dn: [f64; 3],
        u: f64,
    },
    KondoLocal {
        mu_up: [f64; 3],
        mu_dn: [f64; 3],
        h: [f64; 3],
        jk: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    theta: Option<f64>,
    eigenstate: Option<usize>,
    expectations: Option<BTreeMap<String, f64>>,
    max_grade: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperators {
    initial: String,
    #[serde(rename = "final")]
    final_: String,
    kinds: Option<Vec<KindName>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindName {
    Plus,
    Minus,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    eta: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompare {
    tolerance: Option<f64>,
    margin: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPerturb {
    hx: f64,
    probe: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMoments {
    order: Option<usize>,
    observable: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Greens,
    Cumulants,
    Pivotal,
    Perturb,
    OracleCompare,
    Moments,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Greens => "greens",
            Task::Cumulants => "cumulants",
            Task::Pivotal => "pivotal",
            Task::Perturb => "perturb",
            Task::OracleCompare => "oracle-compare",
            Task::Moments => "moments",
        }
    }

    fn needs_operators(self) -> bool {
        matches!(self, Task::Greens | Task::Pivotal | Task::OracleCompare)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Theta(f64),
    Eigenstate(usize),
    Expectations(BTreeMap<PauliWord, f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Operators {
    pub initial: OperatorSum,
    pub final_: OperatorSum,
    pub initial_text: String,
    pub final_text: String,
    pub kinds: Vec<Kind>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub eta: f64,
}

impl GridSpec {
    /// Evenly spaced real parts, `count` points from `min` to `max` inclusive.
    pub fn points(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.min + step * k as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareSpec {
    pub tolerance: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbSpec {
    pub hx: f64,
    pub probe: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSpec {
    pub order: usize,
    pub observable: OperatorSum,
    pub observable_text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub path: PathBuf,
    /// Raw file contents, hashed into the manifest.
    pub source: String,
    pub tasks: Vec<Task>,
    pub out: PathBuf,
    pub seed: u64,
    pub model: ModelSpec,
    pub n_sites: usize,
    pub state: StateSource,
    pub max_grade: usize,
    pub operators: Option<Operators>,
    pub grid: GridSpec,
    pub compare: CompareSpec,
    pub perturb: Option<PerturbSpec>,
    pub moments: Option<MomentSpec>,
}

fn key_err(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config {
        key: key.to_string(),
        message: msg.to_string(),
    }
}

fn finite(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(key_err(key, format!("must be finite, got {v}")))
    }
}

/// Dotted path of an unknown key, from the table header the parser points at.
fn unknown_key(source: &str, e: &toml::de::Error) -> Option<String> {
    let field = e.message().strip_prefix("unknown field `")?.split('`').next()?;
    let table = e
        .span()
        .and_then(|sp| source.get(sp))
        .map(|t| t.trim())
        .filter(|t| t.starts_with('[') && t.ends_with(']'))
        .map(|t| t.trim_matches(|c| c == '[' || c == ']').trim().to_string());
    Some(match table {
        Some(t) => format!("{t}.{field}"),
        None => field.to_string(),
    })
}

pub fn parse_config(path: &Path) -> Result<RunConfig, CliError> {
    let source = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_config_str(&source, path)
}

/// Parses and validates; relative paths resolve against the directory of `path`.
pub fn parse_config_str(source: &str, path: &Path) -> Result<RunConfig, CliError> {
    let raw: RawConfig = toml::from_str(source).map_err(|e| match unknown_key(source, &e) {
        Some(key) => CliError::Config {
            key,
            message: format!("unknown key\n{e}"),
        },
        None => CliError::Syntax {
            path: path.to_path_buf(),
            message: e.to_string(),
        },
    })?;

    if raw.tasks.is_empty() {
        return Err(key_err("tasks", "at least one task is required"));
    }
    for (i, t) in raw.tasks.iter().enumerate() {
        if raw.tasks[..i].contains(t) {
            return Err(key_err("tasks", format!("task `{}` is listed twice", t.name())));
        }
    }

    let model = match raw.model {
        RawModel::QsmBond { jz, hz, hx } => ModelSpec::QsmBond {
            jz: finite("model.jz", jz)?,
            hz: finite("model.hz", hz)?,
            hx: finite("model.hx", hx)?,
        },
        RawModel::QsmLattice { n_sites, fields, couplings } => ModelSpec::QsmLattice(LatticeSpec {
            n_sites,
            fields,
            couplings,
        }),
        RawModel::HubbardAtom { mu_up, mu_dn, u } => ModelSpec::HubbardAtom { mu_up, mu_dn, u },
        RawModel::KondoLocal { mu_up, mu_dn, h, jk } => ModelSpec::KondoLocal { mu_up, mu_dn, h, jk },
    };
    model
        .build(DEFAULT_SITE_CAP)
        .map_err(|e| key_err("model", e))?;
    let n_sites = model.n_sites();

    let given: Vec<&str> = [
        ("state.theta", raw.state.theta.is_some()),
        ("state.eigenstate", raw.state.eigenstate.is_some()),
        ("state.expectations", raw.state.expectations.is_some()),
    ]
    .into_iter()
    .filter(|(_, g)| *g)
    .map(|(k, _)| k)
    .collect();
    if given.len() != 1 {
        let found = if given.is_empty() { "none".to_string() } else { given.join(", ") };
        return Err(key_err(
            "state",
            format!("exactly one of state.theta, state.eigenstate, state.expectations is required (found {found})"),
        ));
    }
    let state = if let Some(th) = raw.state.theta {
        if n_sites != 2 {
            return Err(key_err("state.theta", format!("needs a two-site model, model has {n_sites} sites")));
        }
        StateSource::Theta(finite("state.theta", th)?)
    } else if let Some(k) = raw.state.eigenstate {
        let dim = 1usize << n_sites;
        if k >= dim {
            return Err(key_err("state.eigenstate", format!("index {k} out of range for dimension {dim}")));
        }
        StateSource::Eigenstate(k)
    } else {
        let mut table = BTreeMap::new();
        for (w, v) in raw.state.expectations.unwrap_or_default() {
            let key = format!("state.expectations.{w}");
            let word: PauliWord = w.parse().map_err(|e| key_err(&key, e))?;
            if word.n_sites() != n_sites {
                return Err(key_err(&key, format!("word has {} sites, model has {n_sites}", word.n_sites())));
            }
            table.insert(word, finite(&key, v)?);
        }
        crate::cobs_state::StateSpec::from_expectations(n_sites, table.clone().into_iter())
            .map_err(|e| key_err("state.expectations", e))?;
        StateSource::Expectations(table)
    };
    let max_grade = raw.state.max_grade.unwrap_or(n_sites.min(2));
    if max_grade > n_sites {
        return Err(key_err(
            "state.max_grade",
            format!("{max_grade} exceeds n_sites = {n_sites} (enumerate_cobs requires max_grade <= n_sites)"),
        ));
    }

    let operators = match raw.operators {
        Some(o) => {
            let initial = parse_operator(&o.initial, n_sites).map_err(|e| key_err("operators.initial", e))?;
            let final_ = parse_operator(&o.final_, n_sites).map_err(|e| key_err("operators.final", e))?;
            let kinds = o
                .kinds
                .unwrap_or_else(|| vec![KindName::Plus, KindName::Minus])
                .into_iter()
                .map(|k| match k {
                    KindName::Plus => Kind::Plus,
                    KindName::Minus => Kind::Minus,
                })
                .collect::<Vec<_>>();
            if kinds.is_empty() {
                return Err(key_err("operators.kinds", "at least one kind is required"));
            }
            Some(Operators {
                initial,
                final_,
                initial_text: o.initial,
                final_text: o.final_,
                kinds,
            })
        }
        None => None,
    };
    for t in &raw.tasks {
        if t.needs_operators() && operators.is_none() {
            return Err(key_err("operators", format!("task `{}` needs an [operators] table", t.name())));
        }
    }

    let g = raw.grid.unwrap_or(RawGrid {
        min: None,
        max: None,
        count: None,
        eta: None,
    });
    let grid = GridSpec {
        min: finite("grid.min", g.min.unwrap_or(DEFAULT_GRID_MIN))?,
        max: finite("grid.max", g.max.unwrap_or(DEFAULT_GRID_MAX))?,
        count: g.count.unwrap_or(DEFAULT_GRID_COUNT),
        eta: finite("grid.eta", g.eta.unwrap_or(0.0))?,
    };
    if grid.count < 2 {
        return Err(key_err("grid.count", format!("must be at least 2, got {}", grid.count)));
    }
    if grid.min >= grid.max {
        return Err(key_err("grid.max", format!("must exceed grid.min ({} >= {})", grid.min, grid.max)));
    }
    if grid.eta < 0.0 {
        return Err(key_err("grid.eta", "must be non-negative"));
    }

    let c = raw.compare.unwrap_or(RawCompare {
        tolerance: None,
        margin: None,
    });
    let compare = CompareSpec {
        tolerance: finite("compare.tolerance", c.tolerance.unwrap_or(1e-8))?,
        margin: finite("compare.margin", c.margin.unwrap_or(0.05))?,
    };
    if compare.tolerance <= 0.0 {
        return Err(key_err("compare.tolerance", "must be positive"));
    }
    if compare.margin < 0.0 {
        return Err(key_err("compare.margin", "must be non-negative"));
    }

    let perturb = match raw.perturb {
        Some(p) => {
            let probe = match p.probe {
                Some(v) if !(v > 0.0 && v.is_finite()) => {
                    return Err(key_err("perturb.probe", format!("must be positive, got {v}")))
                }
                other => other,
            };
            Some(PerturbSpec {
                hx: finite("perturb.hx", p.hx)?,
                probe,
            })
        }
        None => None,
    };
    if raw.tasks.contains(&Task::Perturb) {
        if perturb.is_none() {
            return Err(key_err("perturb", "task `perturb` needs a [perturb] table"));
        }
        if !matches!(model, ModelSpec::QsmBond { .. }) {
            return Err(key_err("model.kind", "task `perturb` needs the qsm-bond model"));
        }
    }

    let moments = match raw.moments {
        Some(m) => {
            let text = match m.observable {
                Some(t) => t,
                None => operators
                    .as_ref()
                    .map(|o| o.initial_text.clone())
                    .ok_or_else(|| key_err("moments.observable", "required when [operators] is absent"))?,
            };
            let observable = parse_operator(&text, n_sites).map_err(|e| key_err("moments.observable", e))?;
            let order = m.order.unwrap_or(6);
            if order > crate::sdeom::analysis::MAX_MOMENT_ORDER {
                return Err(key_err(
                    "moments.order",
                    format!("{order} exceeds {}", crate::sdeom::analysis::MAX_MOMENT_ORDER),
                ));
            }
            Some(MomentSpec {
                order,
                observable,
                observable_text: text,
            })
        }
        None => None,
    };
    if raw.tasks.contains(&Task::Moments) && moments.is_none() {
        return Err(key_err("moments", "task `moments` needs a [moments] table"));
    }
    if raw.tasks.contains(&Task::OracleCompare) && matches!(state, StateSource::Expectations(_)) {
        return Err(key_err(
            "state.expectations",
            "task `oracle-compare` needs a wavefunction (state.theta or state.eigenstate)",
        ));
    }

    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let out = base.join(raw.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)));

    Ok(RunConfig {
        path: path.to_path_buf(),
        source: source.to_string(),
        tasks: raw.tasks,
        out,
        seed: raw.seed.unwrap_or(0),
        model,
        n_sites,
        state,
        max_grade,
        operators,
        grid,
        compare,
        perturb,
        moments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
tasks = ["greens"]

[model]
kind = "qsm-bond"
jz = 1.0

[state]
theta = 0.7853981633974483

[operators]
initial = "s+:0"
final = "s-:0"
"#;

    fn parse(s: &str) -> Result<RunConfig, CliError> {
        parse_config_str(s, Path::new("dir/run.toml"))
    }

    fn key_of(e: CliError) -> String {
        match e {
            CliError::Config { key, .. } => key,
            other => panic!("expected key error, got {other}"),
        }
    }

    #[test]
    fn defaults_filled() {
        let c = parse(MINIMAL).unwrap();
        assert_eq!(c.grid.count, 401);
        assert_eq!(c.grid.eta, 0.0);
        assert_eq!(c.out, Path::new("dir").join(DEFAULT_OUT_DIR));
        assert_eq!(c.operators.unwrap().kinds, vec![Kind::Plus, Kind::Minus]);
        assert_eq!(c.max_grade, 2);
    }

    #[test]
    fn two_state_sources_rejected() {
        let s = MINIMAL.replace("theta = 0.7853981633974483", "theta = 0.1\neigenstate = 0");
        let e = parse(&s).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("state.theta") && msg.contains("state.eigenstate"), "{msg}");
    }

    #[test]
    fn max_grade_checked() {
        let s = MINIMAL.replace("[state]", "[state]\nmax_grade = 3");
        let e = parse(&s).unwrap_err();
        assert!(e.to_string().contains("enumerate_cobs"));
        assert_eq!(key_of(e), "state.max_grade");
    }

    #[test]
    fn unknown_key_rejected() {
        let s = MINIMAL.replace("jz = 1.0", "jz = 1.0\nj_z = 2.0");
        let e = parse(&s).unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
        assert_eq!(key_of(e), "model.j_z");
        let top = MINIMAL.replace("tasks", "colour = 1\ntasks");
        assert_eq!(key_of(parse(&top).unwrap_err()), "colour");
    }

    #[test]
    fn syntax_error_has_line() {
        let e = parse("tasks = [\"greens\"\n[model]\n").unwrap_err();
        assert!(matches!(e, CliError::Syntax { .. }));
        assert!(e.to_string().contains("line"), "{e}");
    }

    #[test]
    fn operator_errors_name_key() {
        let s = MINIMAL.replace("s-:0", "s-:7");
        assert_eq!(key_of(parse(&s).unwrap_err()), "operators.final");
    }

    #[test]
    fn grid_points_inclusive() {
        let g = GridSpec { min: -1.0, max: 1.0, count: 5, eta: 0.0 };
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }
}

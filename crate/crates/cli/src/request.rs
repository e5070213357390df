//! Resolution of flags, config file and per-mode defaults into a sweep request.

use std::collections::BTreeMap;
use std::fmt;

use lattice_casimir::lattice::NumericsSpec;

use crate::range::parse_range;
use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    EnergyCurve,
    Displacement,
    PairwiseCompare,
    LimitsCheck,
    CylinderOracle,
    FiniteOracle,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::EnergyCurve => "energy-curve",
            Mode::Displacement => "displacement",
            Mode::PairwiseCompare => "pairwise-compare",
            Mode::LimitsCheck => "limits-check",
            Mode::CylinderOracle => "cylinder-oracle",
            Mode::FiniteOracle => "finite-oracle",
        }
    }

    /// Keys the mode reads, with their defaults (`None`: no default).
    fn keys(self, geometry: Geometry, direction: Option<Direction>) -> Vec<(&'static str, Option<&'static str>)> {
        let mut keys = match self {
            Mode::EnergyCurve => vec![
                ("geometry", Some("lattice2d")),
                ("g-over-a", Some("0.01,0.05,0.1")),
                ("b-over-a", Some("0.2:3:20:log")),
                ("c-over-a", Some("0")),
            ],
            Mode::Displacement => vec![
                ("geometry", Some("chain")),
                ("g-over-a", Some("0.1")),
                ("beta", Some("0.1,0.2,0.4,0.6")),
                ("c-over-a", Some("0:1:11")),
            ],
            Mode::PairwiseCompare => vec![
                ("geometry", Some("chain")),
                ("g-over-a", Some("0.1")),
                ("b-over-a", Some("0.05:2:20:log")),
                ("n-terms", Some("1000")),
            ],
            Mode::LimitsCheck => {
                let ratios = match (geometry, direction) {
                    (_, Some(Direction::ToInfinity)) => "10,30,100",
                    (Geometry::Chain, _) => "0.1,0.03,0.01",
                    (Geometry::Lattice2D, _) => "0.2,0.1,0.05",
                };
                vec![
                    ("geometry", Some("chain")),
                    ("direction", None),
                    ("g-over-a", Some("0.1")),
                    ("a-over-b", Some(ratios)),
                ]
            }
            Mode::CylinderOracle => vec![("r-over-d", Some("1e-2,1e-3,1e-4")), ("g-r", Some("inf"))],
            Mode::FiniteOracle => vec![
                ("geometry", Some("chain")),
                ("g-over-a", Some("0.1")),
                ("b-over-a", Some("1")),
                ("c-over-a", Some("0")),
                ("sites", Some("51,101,201")),
            ],
        };
        let q_default = if geometry == Geometry::Lattice2D { "32" } else { "64" };
        keys.extend([
            ("xi-order", Some("64")),
            ("q-order", Some(q_default)),
            ("n-recip", Some("8")),
            ("tol", Some("1e-6")),
            ("max-panels", Some("4000")),
        ]);
        keys
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Chain,
    Lattice2D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Lattice spacing small against the separation.
    ToZero,
    /// Lattice spacing large against the separation.
    ToInfinity,
}

/// Every key the front end understands.
pub const KNOWN_KEYS: &[&str] = &[
    "geometry",
    "g-over-a",
    "b-over-a",
    "c-over-a",
    "beta",
    "n-terms",
    "direction",
    "a-over-b",
    "r-over-d",
    "g-r",
    "sites",
    "xi-order",
    "q-order",
    "n-recip",
    "tol",
    "max-panels",
];

/// A fully resolved sweep. Lengths are in units of the lattice spacing.
#[derive(Debug, Clone)]
pub struct Request {
    pub mode: Mode,
    pub geometry: Geometry,
    pub direction: Option<Direction>,
    pub g: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub beta: Vec<f64>,
    pub a_over_b: Vec<f64>,
    pub r_over_d: Vec<f64>,
    pub g_r: f64,
    pub n_terms: usize,
    pub sites: Vec<usize>,
    pub numerics: NumericsSpec,
    /// The resolved settings, written ahead of the table.
    pub metadata: Vec<(String, String)>,
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn list(key: &str, value: &str) -> Result<Vec<f64>, UsageError> {
    parse_range(value).map_err(|e| usage(format!("--{key}: {e}")))
}

fn positive_list(key: &str, value: &str) -> Result<Vec<f64>, UsageError> {
    let v = list(key, value)?;
    if let Some(x) = v.iter().find(|x| !(**x > 0.0)) {
        return Err(usage(format!("--{key}: values must be positive, got {x}")));
    }
    Ok(v)
}

fn integer<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, UsageError> {
    value
        .trim()
        .parse()
        .map_err(|_| usage(format!("--{key}: expected a non-negative integer, got {value:?}")))
}

fn geometry(value: &str) -> Result<Geometry, UsageError> {
    match value {
        "chain" => Ok(Geometry::Chain),
        "lattice2d" => Ok(Geometry::Lattice2D),
        other => Err(usage(format!("--geometry: expected chain or lattice2d, got {other:?}"))),
    }
}

fn direction(value: &str) -> Result<Direction, UsageError> {
    match value {
        "a-to-zero" => Ok(Direction::ToZero),
        "a-to-infinity" => Ok(Direction::ToInfinity),
        other => Err(usage(format!("--direction: expected a-to-zero or a-to-infinity, got {other:?}"))),
    }
}

/// Merges `file` and `flags` (flags win), fills the mode's defaults and parses.
pub fn resolve(
    mode: Mode,
    file: &BTreeMap<String, String>,
    flags: &BTreeMap<String, String>,
) -> Result<Request, UsageError> {
    let mut given = BTreeMap::new();
    for (k, v) in file.iter().chain(flags) {
        let key = k.replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(usage(format!("unknown setting {k:?}")));
        }
        given.insert(key, v.trim().to_string());
    }
    // geometry and direction pick the remaining defaults
    let geom = geometry(given.get("geometry").map_or(
        match mode {
            Mode::EnergyCurve => "lattice2d",
            _ => "chain",
        },
        String::as_str,
    ))?;
    let dir = given.get("direction").map(|d| direction(d)).transpose()?;

    let mut settings = BTreeMap::new();
    for (key, default) in mode.keys(geom, dir) {
        match (given.get(key), default) {
            (Some(v), _) => settings.insert(key, v.clone()),
            (None, Some(d)) => settings.insert(key, d.to_string()),
            (None, None) => return Err(usage(format!("{mode} needs --{key}"))),
        };
    }
    let get = |key: &str| settings.get(key).map(String::as_str);

    if matches!(mode, Mode::Displacement | Mode::PairwiseCompare | Mode::FiniteOracle) && geom != Geometry::Chain {
        return Err(usage(format!("{mode} supports only --geometry chain")));
    }

    let mut req = Request {
        mode,
        geometry: geom,
        direction: dir,
        g: Vec::new(),
        b: Vec::new(),
        c: Vec::new(),
        beta: Vec::new(),
        a_over_b: Vec::new(),
        r_over_d: Vec::new(),
        g_r: f64::INFINITY,
        n_terms: 0,
        sites: Vec::new(),
        numerics: match geom {
            Geometry::Chain => NumericsSpec::chain(),
            Geometry::Lattice2D => NumericsSpec::lattice2d(),
        },
        metadata: Vec::new(),
    };
    if let Some(v) = get("g-over-a") {
        req.g = positive_list("g-over-a", v)?;
    }
    if let Some(v) = get("b-over-a") {
        req.b = positive_list("b-over-a", v)?;
    }
    if let Some(v) = get("c-over-a") {
        req.c = list("c-over-a", v)?;
    }
    if let Some(v) = get("beta") {
        req.beta = positive_list("beta", v)?;
    }
    if let Some(v) = get("a-over-b") {
        req.a_over_b = positive_list("a-over-b", v)?;
    }
    if let Some(v) = get("r-over-d") {
        req.r_over_d = positive_list("r-over-d", v)?;
        if let Some(x) = req.r_over_d.iter().find(|x| **x >= 0.5) {
            return Err(usage(format!("--r-over-d: cylinders overlap at {x}")));
        }
    }
    if let Some(v) = get("g-r") {
        req.g_r = v
            .parse()
            .ok()
            .filter(|x: &f64| *x > 0.0)
            .ok_or_else(|| usage(format!("--g-r: expected a positive number or inf, got {v:?}")))?;
    }
    if let Some(v) = get("n-terms") {
        req.n_terms = integer("n-terms", v)?;
    }
    if let Some(v) = get("sites") {
        req.sites = list("sites", v)?
            .into_iter()
            .map(|x| {
                if x >= 1.0 && x.fract() == 0.0 && x <= 4096.0 {
                    Ok(x as usize)
                } else {
                    Err(usage(format!("--sites: expected integers in 1..=4096, got {x}")))
                }
            })
            .collect::<Result<_, _>>()?;
    }
    if matches!(mode, Mode::EnergyCurve | Mode::FiniteOracle) && req.c.len() != 1 {
        return Err(usage(format!("{mode} takes a single --c-over-a")));
    }
    if mode == Mode::FiniteOracle && (req.g.len() != 1 || req.b.len() != 1) {
        return Err(usage("finite-oracle takes a single --g-over-a and --b-over-a"));
    }

    let quad = &mut req.numerics.quadrature;
    quad.xi_order = integer("xi-order", get("xi-order").unwrap_or_default())?;
    quad.q_order = integer("q-order", get("q-order").unwrap_or_default())?;
    quad.max_panels = integer("max-panels", get("max-panels").unwrap_or_default())?;
    let tol = get("tol").unwrap_or_default();
    quad.adaptive_tol = tol
        .parse()
        .map_err(|_| usage(format!("--tol: expected a number, got {tol:?}")))?;
    req.numerics.truncation.n_recip = integer("n-recip", get("n-recip").unwrap_or_default())?;
    req.numerics
        .validate()
        .map_err(|e| usage(e.to_string()))?;
    if !(req.numerics.quadrature.adaptive_tol < 1.0) {
        return Err(usage("--tol must lie in (0, 1)"));
    }

    req.metadata.push(("mode".into(), mode.name().into()));
    req.metadata
        .extend(settings.into_iter().map(|(k, v)| (k.to_string(), v)));
    Ok(req)
}

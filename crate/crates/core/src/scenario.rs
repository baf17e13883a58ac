//! Scenario files: JSON descriptions of a manifold, an edge, wedges and
//! analysis parameters, plus the builtin scenarios shipped with the crate.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::{Cone, Face};
use crate::error::{Error, Result};
use crate::manifold::{realify, CVec, EdgeSpec, GraphManifold};
use crate::wedge::WedgeSpec;

/// Environment variable naming the default scenario directory.
pub const SCENARIO_DIR_VAR: &str = "CRWEDGE_SCENARIO_DIR";

/// Complex numbers are written as `[re, im]`.
pub type ComplexJson = [f64; 2];
pub type CVecJson = Vec<ComplexJson>;

fn to_cvec(v: &CVecJson) -> CVec {
    v.iter().map(|[a, b]| Complex64::new(*a, *b)).collect()
}

fn from_cvec(v: &[Complex64]) -> CVecJson {
    v.iter().map(|c| [c.re, c.im]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub manifold: ManifoldBlock,
    pub edge: EdgeBlock,
    pub wedges: Vec<WedgeBlock>,
    #[serde(default)]
    pub analysis: AnalysisBlock,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldBlock {
    pub l: usize,
    pub n: usize,
    pub h: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeBlock {
    pub span: Vec<CVecJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceJson {
    pub normal: CVecJson,
    #[serde(default)]
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConeJson {
    Polyhedral {
        faces: Vec<FaceJson>,
    },
    Sector {
        e1: CVecJson,
        e2: CVecJson,
        phi0: f64,
        phi1: f64,
        #[serde(default)]
        lineality: Vec<CVecJson>,
    },
    FullSpace,
    Generated {
        generators: Vec<CVecJson>,
        #[serde(default)]
        lineality: Vec<CVecJson>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeBlock {
    pub name: String,
    pub cone: ConeJson,
    /// Inequalities `p(x, w) > 0` describing the wedge near the origin.
    #[serde(default)]
    pub predicate: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub attach: f64,
    pub holomorphy: f64,
    pub levi: f64,
    pub angle: f64,
    pub correlation: f64,
    pub alignment: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            attach: 1e-7,
            holomorphy: 1e-6,
            levi: 1e-6,
            angle: 0.01,
            correlation: 0.999,
            alignment: 0.99,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisBlock {
    pub alpha: f64,
    pub eta_list: Vec<f64>,
    /// Nominal direction for angle and Levi queries.
    pub w0: Option<CVecJson>,
    /// Directions tried for the extension hypotheses and sweeps.
    pub w0_candidates: Vec<CVecJson>,
    pub grid_size: usize,
    pub samples: usize,
    pub seed: u64,
    pub resolution: usize,
    pub c: f64,
    pub c3: f64,
    pub c4: f64,
    /// Generators of the transverse cone of the ambient wedge, in `ℝ^l`.
    pub transverse: Vec<Vec<f64>>,
    pub query_direction: Option<Vec<f64>>,
    pub tolerances: Tolerances,
}

impl Default for AnalysisBlock {
    fn default() -> Self {
        Self {
            alpha: 0.75,
            eta_list: vec![0.02, 0.01, 0.005],
            w0: None,
            w0_candidates: vec![],
            grid_size: 2048,
            samples: 2000,
            seed: 0,
            resolution: 720,
            c: 1.0,
            c3: 0.8,
            c4: 0.1,
            transverse: vec![],
            query_direction: None,
            tolerances: Tolerances::default(),
        }
    }
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub manifold: GraphManifold,
    pub edge: EdgeSpec,
    pub wedges: Vec<WedgeSpec>,
}

impl Scenario {
    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn analysis(&self) -> &AnalysisBlock {
        &self.file.analysis
    }

    pub fn w0(&self) -> Option<CVec> {
        self.file.analysis.w0.as_ref().map(to_cvec)
    }

    /// Candidates, falling back to the nominal `w0`.
    pub fn w0_candidates(&self) -> Vec<CVec> {
        let a = &self.file.analysis;
        if a.w0_candidates.is_empty() {
            self.w0().into_iter().collect()
        } else {
            a.w0_candidates.iter().map(to_cvec).collect()
        }
    }

    /// Transverse cone of the ambient wedge (default: the positive orthant).
    pub fn transverse_cone(&self) -> Cone {
        let l = self.manifold.l();
        let gens = if self.file.analysis.transverse.is_empty() {
            (0..l)
                .map(|k| {
                    let mut e = vec![0.0; l];
                    e[k] = 1.0;
                    e
                })
                .collect()
        } else {
            self.file.analysis.transverse.clone()
        };
        Cone::generated(l, gens, vec![])
    }

    pub fn wedge(&self, name: &str) -> Option<&WedgeSpec> {
        self.wedges.iter().find(|w| w.name == name)
    }
}

fn cone_from_json(c: &ConeJson, big_n: usize) -> Result<Cone> {
    let check = |v: &CVecJson, what: &str| -> Result<Vec<f64>> {
        if v.len() != big_n {
            return Err(Error::DimensionMismatch {
                what: what.into(),
                expected: big_n,
                actual: v.len(),
            });
        }
        Ok(realify(&to_cvec(v)))
    };
    match c {
        ConeJson::Polyhedral { faces } => {
            if faces.is_empty() {
                return Err(Error::InvalidInput("polyhedral cone without faces".into()));
            }
            let faces = faces
                .iter()
                .map(|f| {
                    Ok(Face {
                        normal: check(&f.normal, "face normal")?,
                        strict: f.strict,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Cone::polyhedral(2 * big_n, faces)
        }
        ConeJson::Sector {
            e1,
            e2,
            phi0,
            phi1,
            lineality,
        } => Cone::sector(
            check(e1, "sector e1")?,
            check(e2, "sector e2")?,
            *phi0,
            *phi1,
            lineality
                .iter()
                .map(|v| check(v, "lineality"))
                .collect::<Result<Vec<_>>>()?,
        ),
        ConeJson::FullSpace => Ok(Cone::FullSpace { dim: 2 * big_n }),
        ConeJson::Generated {
            generators,
            lineality,
        } => Ok(Cone::generated(
            2 * big_n,
            generators
                .iter()
                .map(|v| check(v, "generator"))
                .collect::<Result<Vec<_>>>()?,
            lineality
                .iter()
                .map(|v| check(v, "lineality"))
                .collect::<Result<Vec<_>>>()?,
        )),
    }
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with a trailing newline; the on-disk format.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<Scenario> {
        let m = &self.manifold;
        let manifold = GraphManifold::from_sources(&m.h, m.l, m.n)?;
        let big_n = m.l + m.n;
        let span = self
            .edge
            .span
            .iter()
            .map(|v| {
                if v.len() != big_n {
                    return Err(Error::DimensionMismatch {
                        what: "edge vector".into(),
                        expected: big_n,
                        actual: v.len(),
                    });
                }
                Ok(to_cvec(v))
            })
            .collect::<Result<Vec<_>>>()?;
        let edge = EdgeSpec::new(span, &manifold)?;
        if self.wedges.is_empty() {
            return Err(Error::InvalidInput("scenario declares no wedge".into()));
        }
        let wedges = self
            .wedges
            .iter()
            .map(|w| {
                let cone = cone_from_json(&w.cone, big_n)?;
                WedgeSpec::new(
                    w.name.clone(),
                    manifold.clone(),
                    edge.clone(),
                    cone,
                    &w.predicate,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let a = &self.analysis;
        for v in a.w0.iter().chain(&a.w0_candidates) {
            if v.len() != m.n {
                return Err(Error::DimensionMismatch {
                    what: "w0".into(),
                    expected: m.n,
                    actual: v.len(),
                });
            }
        }
        for g in &a.transverse {
            if g.len() != m.l {
                return Err(Error::DimensionMismatch {
                    what: "transverse generator".into(),
                    expected: m.l,
                    actual: g.len(),
                });
            }
        }
        if let Some(q) = &a.query_direction {
            if q.len() != m.l {
                return Err(Error::DimensionMismatch {
                    what: "query direction".into(),
                    expected: m.l,
                    actual: q.len(),
                });
            }
        }
        let t = &a.tolerances;
        let positive = [
            a.c,
            a.c3,
            a.c4,
            t.attach,
            t.holomorphy,
            t.levi,
            t.angle,
            t.correlation,
            t.alignment,
        ];
        if positive.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidInput(
                "constants and tolerances must be positive".into(),
            ));
        }
        Ok(Scenario {
            file: self.clone(),
            manifold,
            edge,
            wedges,
        })
    }
}

fn c(re: f64, im: f64) -> ComplexJson {
    [re, im]
}

fn unit(big_n: usize, k: usize, v: ComplexJson) -> CVecJson {
    let mut out = vec![c(0.0, 0.0); big_n];
    out[k] = v;
    out
}

fn real_edge(big_n: usize) -> EdgeBlock {
    EdgeBlock {
        span: (0..big_n).map(|k| unit(big_n, k, c(1.0, 0.0))).collect(),
    }
}

fn face(normal: CVecJson, strict: bool) -> FaceJson {
    FaceJson { normal, strict }
}

/// The ±45° wedge over a real edge with an indefinite Levi form.
pub fn example_1_2() -> ScenarioFile {
    let wedge = |s: f64| WedgeBlock {
        name: if s > 0.0 {
            "V".into()
        } else {
            "V-reflected".into()
        },
        cone: ConeJson::Polyhedral {
            faces: vec![
                face(vec![c(0.0, 0.0), c(0.0, s), c(0.0, -s)], true),
                face(vec![c(0.0, 0.0), c(0.0, s), c(0.0, s)], true),
            ],
        },
        predicate: if s > 0.0 {
            vec!["Im(w1) - Im(w2)".into(), "Im(w1) + Im(w2)".into()]
        } else {
            vec!["Im(w2) - Im(w1)".into(), "-Im(w1) - Im(w2)".into()]
        },
    };
    ScenarioFile {
        name: "example-1.2".into(),
        description: "Hypersurface y = (Im w1)^2 - (Im w2)^2 in C^3 with edge R^3 and the wedge Im w1 > |Im w2|; \
                      every direction with a wide opening angle has L >= 0, so only the upper side is reachable."
            .into(),
        manifold: ManifoldBlock {
            l: 1,
            n: 2,
            h: vec!["Im(w1)^2 - Im(w2)^2".into()],
        },
        edge: real_edge(3),
        wedges: vec![wedge(1.0), wedge(-1.0)],
        analysis: AnalysisBlock {
            alpha: 0.75,
            samples: 10000,
            query_direction: Some(vec![-1.0]),
            ..Default::default()
        },
    }
}

/// Sector wedge of opening `0.75π` over a non-generic edge.
pub fn example_1_3() -> ScenarioFile {
    ScenarioFile {
        name: "example-1.3".into(),
        description:
            "Quadric y = |w1|^2 in C^2, wedge 0 < arg w1 < 0.75*pi over the edge {w1 = 0}; \
                      the edge is not generic."
                .into(),
        manifold: ManifoldBlock {
            l: 1,
            n: 1,
            h: vec!["abs2(w1)".into()],
        },
        edge: EdgeBlock {
            span: vec![unit(2, 0, c(1.0, 0.0))],
        },
        wedges: vec![WedgeBlock {
            name: "V".into(),
            cone: ConeJson::Sector {
                e1: unit(2, 1, c(1.0, 0.0)),
                e2: unit(2, 1, c(0.0, 1.0)),
                phi0: 0.0,
                phi1: 0.75 * PI,
                lineality: vec![unit(2, 0, c(1.0, 0.0))],
            },
            predicate: vec!["Im(w1)".into(), "Re(w1) + Im(w1)".into()],
        }],
        analysis: AnalysisBlock {
            alpha: 0.75,
            w0: Some(vec![c(1.0, 0.0)]),
            ..Default::default()
        },
    }
}

/// Quadrant wedge with a negative Levi direction at a right-angle slice.
pub fn example_1_4() -> ScenarioFile {
    let tilt = Complex64::from_polar(2f64.sqrt(), PI / 4.0 + 0.2);
    ScenarioFile {
        name: "example-1.4".into(),
        description: "Hypersurface y = |w1|^2 + |w2|^2 - 2.1 Im(w1 conj(w2)) in C^3, wedge Im w1 > 0, Im w2 > 0 \
                      over the edge R^3; L(w0, w0) = -0.2 at w0 = (-1+i, 1+i) where the slice angle is pi/2."
            .into(),
        manifold: ManifoldBlock {
            l: 1,
            n: 2,
            h: vec!["abs2(w1) + abs2(w2) - 2.1*Im(w1*conj(w2))".into()],
        },
        edge: real_edge(3),
        wedges: vec![WedgeBlock {
            name: "V".into(),
            cone: ConeJson::Polyhedral {
                faces: vec![
                    face(vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)], true),
                    face(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)], true),
                ],
            },
            predicate: vec!["Im(w1)".into(), "Im(w2)".into()],
        }],
        analysis: AnalysisBlock {
            alpha: 0.55,
            eta_list: vec![0.04, 0.02, 0.01],
            w0: Some(vec![c(-1.0, 1.0), c(1.0, 1.0)]),
            w0_candidates: vec![vec![c(-1.0, 1.0), c(tilt.re, tilt.im)]],
            samples: 2000,
            query_direction: Some(vec![-1.0]),
            ..Default::default()
        },
    }
}

/// Strictly pseudoconvex quadric in `ℂ²`, seen from the whole manifold and
/// from the half-space `Im w1 > 0`.
pub fn quadric() -> ScenarioFile {
    ScenarioFile {
        name: "quadric".into(),
        description: "Quadric y = |w1|^2 in C^2 with edge R^2; the first wedge is all of M, the second the half-space Im w1 > 0."
            .into(),
        manifold: ManifoldBlock {
            l: 1,
            n: 1,
            h: vec!["abs2(w1)".into()],
        },
        edge: real_edge(2),
        wedges: vec![
            WedgeBlock {
                name: "whole".into(),
                cone: ConeJson::FullSpace,
                predicate: vec![],
            },
            WedgeBlock {
                name: "upper".into(),
                cone: ConeJson::Polyhedral {
                    faces: vec![face(vec![c(0.0, 0.0), c(0.0, 1.0)], true)],
                },
                predicate: vec!["Im(w1)".into()],
            },
        ],
        analysis: AnalysisBlock {
            alpha: 1.0,
            eta_list: vec![0.02, 0.01, 0.005],
            w0: Some(vec![c(1.0, 0.0)]),
            grid_size: 1024,
            ..Default::default()
        },
    }
}

/// Quadric `y = |w1|²` in `ℂ³` with the half-space wedge `Im w2 > 0`; input
/// for the lifting construction.
pub fn lift() -> ScenarioFile {
    ScenarioFile {
        name: "lift".into(),
        description:
            "Quadric y = |w1|^2 in C^3, wedge Im w2 > 0 over the generic edge {Im w2 = 0}; \
                      the lift deforms M to y = c3(|w1|^2 + |w2|^2 + x^2)."
                .into(),
        manifold: ManifoldBlock {
            l: 1,
            n: 2,
            h: vec!["abs2(w1)".into()],
        },
        edge: EdgeBlock {
            span: vec![
                unit(3, 0, c(1.0, 0.0)),
                unit(3, 1, c(1.0, 0.0)),
                unit(3, 1, c(0.0, 1.0)),
                unit(3, 2, c(1.0, 0.0)),
            ],
        },
        wedges: vec![WedgeBlock {
            name: "V".into(),
            cone: ConeJson::Polyhedral {
                faces: vec![face(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)], true)],
            },
            predicate: vec!["Im(w2)".into()],
        }],
        analysis: AnalysisBlock {
            alpha: 0.75,
            c: 1.0,
            c3: 0.8,
            c4: 0.1,
            transverse: vec![vec![1.0]],
            ..Default::default()
        },
    }
}

pub const BUILTIN_NAMES: [&str; 5] = [
    "example-1.2",
    "example-1.3",
    "example-1.4",
    "quadric",
    "lift",
];

pub fn builtin(name: &str) -> Option<ScenarioFile> {
    match name {
        "example-1.2" | "1.2" => Some(example_1_2()),
        "example-1.3" | "1.3" => Some(example_1_3()),
        "example-1.4" | "1.4" => Some(example_1_4()),
        "quadric" => Some(quadric()),
        "lift" => Some(lift()),
        _ => None,
    }
}

/// Resolves a scenario argument: an existing path, then `<dir>/<name>.json`
/// under the scenario directory, then a builtin name.
pub fn resolve(arg: &str, dir: Option<&Path>) -> Result<ScenarioFile> {
    let direct = PathBuf::from(arg);
    if direct.is_file() {
        return ScenarioFile::from_json(&std::fs::read_to_string(&direct)?);
    }
    if let Some(d) = dir {
        let candidate = d.join(format!("{arg}.json"));
        if candidate.is_file() {
            return ScenarioFile::from_json(&std::fs::read_to_string(&candidate)?);
        }
    }
    builtin(arg).ok_or_else(|| Error::InvalidInput(format!("unknown scenario `{arg}`")))
}

/// `CVec` to the JSON form, for reports.
pub fn cvec_json(v: &[Complex64]) -> CVecJson {
    from_cvec(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate_and_roundtrip() {
        for name in BUILTIN_NAMES {
            let file = builtin(name).unwrap();
            let text = file.to_json();
            let back = ScenarioFile::from_json(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_json(), text);
            back.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn rejects_inconsistent_files() {
        let mut f = example_1_4();
        f.analysis.w0 = Some(vec![c(1.0, 0.0)]);
        assert!(matches!(f.validate(), Err(Error::DimensionMismatch { .. })));
        let mut f = example_1_4();
        f.analysis.tolerances.angle = 0.0;
        assert!(matches!(f.validate(), Err(Error::InvalidInput(_))));
        assert!(ScenarioFile::from_json("{\"name\": 3}").is_err());
        let mut f = example_1_4();
        f.manifold.h = vec!["w1 + 1".into()];
        assert!(matches!(f.validate(), Err(Error::Type { .. })));
    }
}

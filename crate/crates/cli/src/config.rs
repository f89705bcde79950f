//! Scenario configuration files.
//!
//! A scenario is a TOML document; every key carries its unit in its name
//! and unknown keys are rejected. Relative dataset paths resolve against the
//! directory of the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swipt_core::channel::{EmitterParams, Fading, PathLossParams};
use swipt_core::fit::{load_dataset, HarvesterDataset};
use swipt_core::harvest::{GroundTruthPoly, HarvestModel, Harvester, ModelKind, PiecewiseLinear};
use swipt_core::link::{Impedances, ReaderParams, TagRfParams};
use swipt_core::num_complex::Complex;
use swipt_core::numerics::{dbm_to_mw, watt_to_mw};
use swipt_core::outage::{Scenario, TagEnergyParams};
use toml::Table;

use crate::models::{FitSettings, ModelSet};
use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub path_loss: PathLossSection,
    pub fading: FadingSection,
    pub emitter: EmitterSection,
    pub tag_rf: TagRfSection,
    pub tag_energy: TagEnergySection,
    pub reader: ReaderSection,
    /// Parsed by [`ModelSection::parse`]: a [`ModelSpec`] plus harvester options.
    pub harvest_model: Table,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathLossSection {
    pub lambda_m: f64,
    pub d0_m: f64,
    pub nu: f64,
    pub d_m: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSection {
    pub nakagami_m: NakagamiM,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NakagamiM {
    Value(f64),
    Keyword(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitterSection {
    pub p_r_watt: f64,
    pub carrier_hz: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagRfSection {
    pub gamma0: Option<[f64; 2]>,
    pub gamma1: Option<[f64; 2]>,
    pub z0_ohm: Option<[f64; 2]>,
    pub z1_ohm: Option<[f64; 2]>,
    pub za_ohm: Option<[f64; 2]>,
    pub structural_mode: Option<[f64; 2]>,
    pub rho_u: f64,
    pub bit_duration_s: Option<f64>,
    pub bits_per_frame: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagEnergySection {
    pub tau_d: f64,
    pub chi: f64,
    pub p_c_mw: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReaderSection {
    /// `σ²` in W, the unit `P_R` is given in.
    pub noise_variance_watt: Option<f64>,
    pub noise_variance_mw: Option<f64>,
    pub ber_threshold: f64,
}

/// A harvest model as written in a config or emitted by `swipt fit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Linear {
        efficiency: f64,
    },
    ConstantLinear {
        efficiency: f64,
        p_sen_dbm: f64,
    },
    SigmoidNorm {
        a_per_mw: f64,
        b_mw: f64,
        c_mw: f64,
    },
    SigmoidSens {
        a_per_mw: f64,
        b: f64,
        c_mw: f64,
        p_sen_dbm: f64,
    },
    Quadratic {
        a_per_mw: f64,
        b: f64,
        c_mw: f64,
    },
    QuadraticSens {
        a_per_mw: f64,
        b: f64,
        p_sen_dbm: f64,
    },
    /// `[input dBm, harvested mW]` pairs.
    Piecewise {
        points: Vec<[f64; 2]>,
    },
    GroundTruth {
        coefficients: Vec<f64>,
        p_sen_dbm: f64,
        p_sat_dbm: f64,
    },
    /// A model fitted at load time from a dataset.
    Fitted {
        dataset: PathBuf,
        /// Name of a [`ModelKind`].
        fit: String,
        degree: Option<usize>,
        p_sen_dbm: Option<f64>,
        p_sat_dbm: Option<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct ModelSection {
    pub spec: ModelSpec,
    /// Optional input clamp applied on top of the model.
    pub clamp_saturation_dbm: Option<f64>,
}

impl ModelSection {
    pub fn parse(mut table: Table) -> Result<Self, CliError> {
        let bad = |e: String| CliError::Input(format!("harvest_model: {e}"));
        let clamp_saturation_dbm = match table.remove("clamp_saturation_dbm") {
            None => None,
            Some(v) => Some(
                v.as_float()
                    .or_else(|| v.as_integer().map(|i| i as f64))
                    .ok_or_else(|| bad("clamp_saturation_dbm must be a number".into()))?,
            ),
        };
        let spec = ModelSpec::deserialize(table).map_err(|e| bad(e.to_string()))?;
        Ok(ModelSection {
            spec,
            clamp_saturation_dbm,
        })
    }
}

impl ModelSpec {
    pub fn to_model(&self) -> Result<HarvestModel<f64>, CliError> {
        let m = match *self {
            ModelSpec::Linear { efficiency } => HarvestModel::Linear { efficiency },
            ModelSpec::ConstantLinear { efficiency, p_sen_dbm } => HarvestModel::ConstantLinear {
                efficiency,
                p_sen: dbm_to_mw(p_sen_dbm),
            },
            ModelSpec::SigmoidNorm { a_per_mw, b_mw, c_mw } => HarvestModel::SigmoidNorm {
                a: a_per_mw,
                b: b_mw,
                c: c_mw,
            },
            ModelSpec::SigmoidSens {
                a_per_mw,
                b,
                c_mw,
                p_sen_dbm,
            } => HarvestModel::SigmoidSens {
                a: a_per_mw,
                b,
                c: c_mw,
                p_sen: dbm_to_mw(p_sen_dbm),
            },
            ModelSpec::Quadratic { a_per_mw, b, c_mw } => HarvestModel::Quadratic {
                a: a_per_mw,
                b,
                c: c_mw,
            },
            ModelSpec::QuadraticSens { a_per_mw, b, p_sen_dbm } => HarvestModel::QuadraticSens {
                a: a_per_mw,
                b,
                p_sen: dbm_to_mw(p_sen_dbm),
            },
            ModelSpec::Piecewise { ref points } => {
                let pts: Vec<(f64, f64)> = points.iter().map(|p| (dbm_to_mw(p[0]), p[1])).collect();
                HarvestModel::Piecewise(PiecewiseLinear::new(&pts)?)
            }
            ModelSpec::GroundTruth {
                ref coefficients,
                p_sen_dbm,
                p_sat_dbm,
            } => HarvestModel::GroundTruthPoly(GroundTruthPoly::new(
                coefficients.clone(),
                dbm_to_mw(p_sen_dbm),
                dbm_to_mw(p_sat_dbm),
            )?),
            ModelSpec::Fitted { .. } => {
                return Err(CliError::Input("a fitted model needs its dataset loaded first".into()))
            }
        };
        Ok(m)
    }

    pub fn from_model(model: &HarvestModel<f64>) -> Self {
        let dbm = |mw: f64| 10.0 * mw.log10();
        match *model {
            HarvestModel::Linear { efficiency } => ModelSpec::Linear { efficiency },
            HarvestModel::ConstantLinear { efficiency, p_sen } => ModelSpec::ConstantLinear {
                efficiency,
                p_sen_dbm: dbm(p_sen),
            },
            HarvestModel::SigmoidNorm { a, b, c } => ModelSpec::SigmoidNorm {
                a_per_mw: a,
                b_mw: b,
                c_mw: c,
            },
            HarvestModel::SigmoidSens { a, b, c, p_sen } => ModelSpec::SigmoidSens {
                a_per_mw: a,
                b,
                c_mw: c,
                p_sen_dbm: dbm(p_sen),
            },
            HarvestModel::Quadratic { a, b, c } => ModelSpec::Quadratic {
                a_per_mw: a,
                b,
                c_mw: c,
            },
            HarvestModel::QuadraticSens { a, b, p_sen } => ModelSpec::QuadraticSens {
                a_per_mw: a,
                b,
                p_sen_dbm: dbm(p_sen),
            },
            HarvestModel::Piecewise(ref pw) => ModelSpec::Piecewise {
                points: pw.points().map(|(q, v)| [dbm(q), v]).collect(),
            },
            HarvestModel::GroundTruthPoly(ref gt) => ModelSpec::GroundTruth {
                coefficients: gt.coeffs().to_vec(),
                p_sen_dbm: dbm(gt.p_sen()),
                p_sat_dbm: dbm(gt.p_sat()),
            },
        }
    }
}

/// `[harvest_model]` table of a fitted model, ready to paste into a config.
pub fn model_file(model: &HarvestModel<f64>) -> String {
    #[derive(Serialize)]
    struct File {
        harvest_model: ModelSpec,
    }
    toml::to_string(&File {
        harvest_model: ModelSpec::from_model(model),
    })
    .expect("model specs serialize")
}

fn complex(v: [f64; 2]) -> Complex<f64> {
    Complex::new(v[0], v[1])
}

/// A loaded scenario, plus the dataset-derived model set when the config
/// names a dataset.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub path: PathBuf,
    pub scenario: Scenario<f64>,
    pub dataset: Option<HarvesterDataset<f64>>,
    pub models: Option<ModelSet>,
}

impl Loaded {
    /// The scenario with its harvest model swapped for `model`.
    pub fn with_model(&self, model: &HarvestModel<f64>) -> Scenario<f64> {
        let mut s = self.scenario.clone();
        s.harvester.model = model.clone();
        s
    }

    pub fn require_models(&self) -> Result<&ModelSet, CliError> {
        self.models.as_ref().ok_or_else(|| {
            CliError::Input(format!(
                "{}: the model comparison needs fitted models; use variant = \"fitted\" with a dataset",
                self.path.display()
            ))
        })
    }
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let cfg: ScenarioConfig = toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    build(cfg, base).map(|(scenario, dataset, models)| Loaded {
        path: path.to_path_buf(),
        scenario,
        dataset,
        models,
    })
}

type Built = (Scenario<f64>, Option<HarvesterDataset<f64>>, Option<ModelSet>);

pub fn build(cfg: ScenarioConfig, base: &Path) -> Result<Built, CliError> {
    let pl = &cfg.path_loss;
    let path_loss = PathLossParams::new(pl.lambda_m, pl.d0_m, pl.nu, pl.d_m)?;
    let fading = match cfg.fading.nakagami_m {
        NakagamiM::Value(m) => Fading::nakagami(m)?,
        NakagamiM::Keyword(ref k) if k == "none" => Fading::None,
        NakagamiM::Keyword(ref k) => {
            return Err(CliError::Input(format!(
                "fading.nakagami_m: expected a number or \"none\", got \"{k}\""
            )))
        }
    };
    let emitter = EmitterParams::new(watt_to_mw(cfg.emitter.p_r_watt), cfg.emitter.carrier_hz)?;

    let rf = &cfg.tag_rf;
    let mut tag_rf = match (rf.gamma0, rf.gamma1, rf.z0_ohm, rf.z1_ohm, rf.za_ohm) {
        (Some(g0), Some(g1), z0, z1, za) => {
            let mut t = TagRfParams::new(complex(g0), complex(g1), rf.rho_u)?;
            match (z0, z1, za) {
                (Some(z0), Some(z1), Some(za)) => {
                    t.impedances = Some(Impedances {
                        z0: complex(z0),
                        z1: complex(z1),
                        za: complex(za),
                    })
                }
                (None, None, None) => {}
                _ => {
                    return Err(CliError::Input(
                        "tag_rf: give all of z0_ohm, z1_ohm, za_ohm or none".into(),
                    ))
                }
            }
            t
        }
        (None, None, Some(z0), Some(z1), Some(za)) => TagRfParams::from_impedances(
            Impedances {
                z0: complex(z0),
                z1: complex(z1),
                za: complex(za),
            },
            rf.rho_u,
        )?,
        _ => {
            return Err(CliError::Input(
                "tag_rf: give gamma0 and gamma1, or z0_ohm, z1_ohm and za_ohm".into(),
            ))
        }
    };
    if let Some(a) = rf.structural_mode {
        tag_rf.structural_mode = complex(a);
    }
    tag_rf.bit_duration_s = rf.bit_duration_s;
    tag_rf.bits_per_frame = rf.bits_per_frame;
    tag_rf.check()?;

    let te = &cfg.tag_energy;
    let tag_energy = TagEnergyParams::new(te.tau_d, te.chi, te.p_c_mw)?;

    let r = &cfg.reader;
    let noise_mw = match (r.noise_variance_watt, r.noise_variance_mw) {
        (Some(w), None) => watt_to_mw(w),
        (None, Some(mw)) => mw,
        _ => {
            return Err(CliError::Input(
                "reader: give exactly one of noise_variance_watt, noise_variance_mw".into(),
            ))
        }
    };
    let reader = ReaderParams::new(noise_mw, r.ber_threshold)?;

    let section = ModelSection::parse(cfg.harvest_model)?;
    let (model, dataset, models) = match section.spec {
        ModelSpec::Fitted {
            ref dataset,
            ref fit,
            degree,
            p_sen_dbm,
            p_sat_dbm,
        } => {
            let fit: ModelKind = fit
                .parse()
                .map_err(|e| CliError::Input(format!("harvest_model.fit: {e}")))?;
            let path = base.join(dataset);
            let data = load_dataset::<f64>(&path)?;
            let settings = FitSettings::for_dataset(&data, degree, p_sen_dbm, p_sat_dbm)?;
            let set = ModelSet::fit(&data, &settings)?;
            (set.get(fit).clone(), Some(data), Some(set))
        }
        ref spec => (spec.to_model()?, None, None),
    };
    let harvester = match section.clamp_saturation_dbm {
        Some(d) => Harvester::with_saturation(model, dbm_to_mw(d))?,
        None => Harvester::from(model),
    };

    let scenario = Scenario {
        path_loss,
        fading,
        emitter,
        tag_rf,
        tag_energy,
        reader,
        harvester,
    };
    scenario.check()?;
    Ok((scenario, dataset, models))
}

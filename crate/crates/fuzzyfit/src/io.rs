//! File formats: JSON-lines datasets, model JSON, experiment configuration,
//! loss specification strings, and CSV emission.
//!
//! One example per line, `{"x": [...], "y": ...}`. Coordinates are numbers
//! or `{"lo": .., "hi": ..}` boxes; observations are tagged by precision:
//! `{"real": 2.5}`, `{"interval": [2, 3]}`, `{"trap": [1, 2, 3, 4]}`,
//! `{"label": "+1"}`, or `{"flabel": {"+1": 1.0, "-1": 0.3}}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::core::data::Example;
use crate::core::experiment::{default_gamma_grid, ExperimentConfig, Method, Which};
use crate::core::fuzzy::{CrispValue, FuzzyDatum, Interval, Label};
use crate::core::gmli::GmliConfig;
use crate::core::loss::{BaseLoss, CrispLoss, MarginLoss};
use crate::core::model::LinearModel;
use crate::core::optimize::LossSpec;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoordDto {
    Precise(f64),
    Box { lo: f64, hi: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DatumDto {
    Real(f64),
    Interval([f64; 2]),
    Trap([f64; 4]),
    Label(String),
    Flabel(BTreeMap<String, f64>),
}

#[derive(Serialize, Deserialize)]
struct ExampleDto {
    x: Vec<CoordDto>,
    y: DatumDto,
}

fn example_from_dto(dto: ExampleDto) -> Result<Example> {
    let mut x = Vec::with_capacity(dto.x.len());
    for c in dto.x {
        let iv = match c {
            CoordDto::Precise(v) => Interval::degenerate(v),
            CoordDto::Box { lo, hi } => Interval::new(lo, hi),
        }?;
        x.push(iv);
    }
    let y = match dto.y {
        DatumDto::Real(v) => FuzzyDatum::real(v)?,
        DatumDto::Interval([lo, hi]) => FuzzyDatum::interval(lo, hi)?,
        DatumDto::Trap([a, b, c, d]) => FuzzyDatum::trapezoid(a, b, c, d)?,
        DatumDto::Label(name) => FuzzyDatum::Label(Label::new(name)),
        DatumDto::Flabel(m) => {
            let memberships =
                m.into_iter().map(|(name, degree)| (Label::new(name), degree)).collect();
            FuzzyDatum::fuzzy_label(memberships)?
        }
    };
    Ok(Example::new(x, y))
}

/// Parse one dataset line.
pub fn parse_example(line: &str) -> Result<Example> {
    let dto: ExampleDto = serde_json::from_str(line)?;
    example_from_dto(dto)
}

/// Read a JSON-lines dataset; blank lines are skipped, errors carry the
/// line number.
pub fn read_examples(path: &Path) -> Result<Vec<Example>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading dataset {}", path.display()))?;
    let mut data = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let e = parse_example(line)
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        data.push(e);
    }
    Ok(data)
}

#[derive(Serialize, Deserialize)]
struct ModelDto {
    weights: Vec<f64>,
    bias: f64,
}

pub fn read_model(path: &Path) -> Result<LinearModel> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading model {}", path.display()))?;
    let dto: ModelDto = serde_json::from_str(&text)?;
    Ok(LinearModel::new(dto.weights, dto.bias))
}

pub fn write_model(path: &Path, model: &LinearModel) -> Result<()> {
    let dto = ModelDto { weights: model.weights.clone(), bias: model.bias };
    let text = serde_json::to_string_pretty(&dto)?;
    fs::write(path, text + "\n").with_context(|| format!("writing model {}", path.display()))
}

/// A loss specification string: `l1`, `l2`, `0/1`, `hinge`, `exponential`,
/// `logistic`, `gmli-interval`, or `gmli-logistic`. The generalization over
/// sets and fuzzy sets is implied by the data each operation receives.
pub fn parse_loss_spec(spec: &str) -> Result<LossSpec> {
    let parsed = match spec.to_ascii_lowercase().as_str() {
        "l1" => LossSpec::Generalized(CrispLoss::Base(BaseLoss::L1)),
        "l2" => LossSpec::Generalized(CrispLoss::Base(BaseLoss::L2)),
        "0/1" | "zero-one" | "01" => LossSpec::Generalized(CrispLoss::Base(BaseLoss::ZeroOne)),
        "hinge" => LossSpec::Generalized(CrispLoss::Margin(MarginLoss::Hinge)),
        "exponential" | "exp" => LossSpec::Generalized(CrispLoss::Margin(MarginLoss::Exponential)),
        "logistic" | "log" => LossSpec::Generalized(CrispLoss::Margin(MarginLoss::Logistic)),
        "gmli-interval" => LossSpec::GmliInterval(GmliConfig::default()),
        "gmli-logistic" => LossSpec::GmliLogistic,
        other => bail!(
            "unknown loss '{other}'; expected l1, l2, 0/1, hinge, exponential, logistic, \
             gmli-interval, or gmli-logistic"
        ),
    };
    Ok(parsed)
}

/// The crisp losses usable for risk curves and disambiguation; likelihood
/// specifications are rejected.
pub fn parse_crisp_loss(spec: &str) -> Result<CrispLoss> {
    match parse_loss_spec(spec)? {
        LossSpec::Generalized(loss) => Ok(loss),
        _ => bail!("loss '{spec}' is a likelihood; this operation needs a generalized loss"),
    }
}

/// One disambiguated example on output: chosen input, chosen value, loss
/// paid.
#[derive(Serialize)]
pub struct SelectionDto {
    pub x: Vec<f64>,
    pub y: serde_json::Value,
    pub loss: f64,
}

impl SelectionDto {
    pub fn new(x: Vec<f64>, y: &CrispValue, loss: f64) -> Self {
        let y = match y {
            CrispValue::Real(v) => serde_json::json!(v),
            CrispValue::Label(l) => serde_json::json!(l.to_string()),
        };
        SelectionDto { x, y, loss }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentConfigDto {
    #[serde(default)]
    n_per_class: Option<usize>,
    #[serde(default)]
    mu_plus: Option<[f64; 2]>,
    #[serde(default)]
    mu_minus: Option<[f64; 2]>,
    #[serde(default)]
    covariance: Option<f64>,
    #[serde(default)]
    gamma_grid: Option<Vec<f64>>,
    #[serde(default)]
    repetitions: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    methods: Option<Vec<String>>,
}

fn parse_method(name: &str) -> Result<Method> {
    match name.to_ascii_lowercase().as_str() {
        "fuzzy" => Ok(Method::Fuzzy),
        "gmli" => Ok(Method::Gmli),
        "standard" => Ok(Method::Standard),
        other => bail!("unknown method '{other}'; expected fuzzy, gmli, or standard"),
    }
}

/// Read an experiment configuration, filling absent fields with the
/// defaults for `which` (including its corruption grid).
pub fn read_experiment_config(path: &Path, which: Which) -> Result<ExperimentConfig> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let dto: ExperimentConfigDto = serde_json::from_str(&text)?;
    let mut cfg = ExperimentConfig::for_experiment(which);
    if let Some(v) = dto.n_per_class {
        cfg.n_per_class = v;
    }
    if let Some(v) = dto.mu_plus {
        cfg.mu_plus = v;
    }
    if let Some(v) = dto.mu_minus {
        cfg.mu_minus = v;
    }
    if let Some(v) = dto.covariance {
        cfg.covariance = v;
    }
    if let Some(v) = dto.gamma_grid {
        cfg.gamma_grid = v;
    } else {
        cfg.gamma_grid = default_gamma_grid(which);
    }
    if let Some(v) = dto.repetitions {
        cfg.repetitions = v;
    }
    if let Some(v) = dto.seed {
        cfg.seed = v;
    }
    if let Some(names) = dto.methods {
        cfg.methods = names.iter().map(|n| parse_method(n)).collect::<Result<_>>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parse `lo:hi:step` into an inclusive sweep.
pub fn parse_range(range: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = range.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        bail!("range '{range}' is not lo:hi:step");
    };
    let lo: f64 = lo.parse().context("range start")?;
    let hi: f64 = hi.parse().context("range end")?;
    let step: f64 = step.parse().context("range step")?;
    if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && hi >= lo) {
        bail!("range '{range}' must satisfy lo <= hi with step > 0");
    }
    // Half a step of slack so hi itself survives rounding.
    let n = ((hi - lo) / step + 0.5).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

/// Parse an observation given inline as JSON, e.g. `{"trap": [1, 2, 3, 4]}`.
pub fn parse_datum(text: &str) -> Result<FuzzyDatum> {
    let dto: DatumDto = serde_json::from_str(text)?;
    Ok(example_from_dto(ExampleDto { x: vec![], y: dto })?.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::fuzzy::DatumKind;

    #[test]
    fn dataset_round_trip_covers_every_kind() {
        let lines = r#"
            {"x": [1.0, 2.0], "y": {"real": 3.5}}
            {"x": [{"lo": 0.0, "hi": 1.0}, 2.0], "y": {"interval": [2, 3]}}
            {"x": [0.5], "y": {"trap": [1, 2, 3, 4]}}
            {"x": [0.0], "y": {"label": "+1"}}
            {"x": [0.0], "y": {"flabel": {"+1": 1.0, "-1": 0.3}}}
        "#;
        let kinds: Vec<DatumKind> = lines
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| parse_example(l).unwrap().y.kind())
            .collect();
        assert_eq!(
            kinds,
            vec![
                DatumKind::Real,
                DatumKind::Interval,
                DatumKind::Trapezoid,
                DatumKind::Label,
                DatumKind::FuzzyLabel
            ]
        );

        let boxed = parse_example(r#"{"x": [{"lo": 0.0, "hi": 1.0}], "y": {"real": 0}}"#).unwrap();
        assert!(!boxed.is_precise_x());
        assert!(parse_example(r#"{"x": [1.0], "y": {"interval": [3, 2]}}"#).is_err());
        assert!(parse_example(r#"{"x": [], "y": {"nope": 1}}"#).is_err());
    }

    #[test]
    fn loss_specs_parse_and_reject() {
        assert_eq!(
            parse_loss_spec("l2").unwrap(),
            LossSpec::Generalized(CrispLoss::Base(BaseLoss::L2))
        );
        assert_eq!(
            parse_loss_spec("LOGISTIC").unwrap(),
            LossSpec::Generalized(CrispLoss::Margin(MarginLoss::Logistic))
        );
        assert_eq!(parse_loss_spec("gmli-logistic").unwrap(), LossSpec::GmliLogistic);
        assert!(matches!(parse_loss_spec("gmli-interval").unwrap(), LossSpec::GmliInterval(_)));
        assert!(parse_loss_spec("huber").is_err());
        assert!(parse_crisp_loss("gmli-interval").is_err());
        assert_eq!(parse_crisp_loss("hinge").unwrap(), CrispLoss::Margin(MarginLoss::Hinge));
    }

    #[test]
    fn ranges_are_inclusive_and_validated() {
        assert_eq!(parse_range("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        let sweep = parse_range("-2:2:0.1").unwrap();
        assert_eq!(sweep.len(), 41);
        assert!((sweep[40] - 2.0).abs() < 1e-12);
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("1:0:0.5").is_err());
        assert!(parse_range("1:2").is_err());
    }

    #[test]
    fn experiment_config_fills_defaults() {
        let dir = std::env::temp_dir().join("fuzzyfit-io-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.json");
        fs::write(&path, r#"{"repetitions": 3, "methods": ["standard", "fuzzy"]}"#).unwrap();
        let cfg = read_experiment_config(&path, Which::LabelNoise).unwrap();
        assert_eq!(cfg.repetitions, 3);
        assert_eq!(cfg.methods, vec![Method::Standard, Method::Fuzzy]);
        assert_eq!(cfg.n_per_class, 100);
        assert_eq!(cfg.gamma_grid, default_gamma_grid(Which::LabelNoise));

        fs::write(&path, r#"{"methods": ["svm"]}"#).unwrap();
        assert!(read_experiment_config(&path, Which::LabelNoise).is_err());
        fs::write(&path, r#"{"gamma_grid": [1.5]}"#).unwrap();
        assert!(read_experiment_config(&path, Which::LabelNoise).is_err());
        fs::write(&path, r#"{"unknown_field": 1}"#).unwrap();
        assert!(read_experiment_config(&path, Which::LabelNoise).is_err());
    }

    #[test]
    fn model_json_round_trip() {
        let dir = std::env::temp_dir().join("fuzzyfit-io-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("model.json");
        let model = LinearModel::new(vec![0.25, -1.5], 2.0);
        write_model(&path, &model).unwrap();
        assert_eq!(read_model(&path).unwrap(), model);
    }
}

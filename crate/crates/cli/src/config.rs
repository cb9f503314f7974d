//! Line-based scenario configuration: `[section]` headers with `key = value`
//! entries. Sections: model, params, initial, integration, sweep.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use epigame_core::integrator::IntegrationConfig;
use epigame_core::model::{SiriParams, SisParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Sis,
    Siri,
    SiriVanilla,
    ReducedSis,
    ReducedSiriStrong,
    ReducedSiriWeak,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Sis => "sis",
            ModelKind::Siri => "siri",
            ModelKind::SiriVanilla => "siri-vanilla",
            ModelKind::ReducedSis => "reduced-sis",
            ModelKind::ReducedSiriStrong => "reduced-siri-strong",
            ModelKind::ReducedSiriWeak => "reduced-siri-weak",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "sis" => ModelKind::Sis,
            "siri" => ModelKind::Siri,
            "siri-vanilla" => ModelKind::SiriVanilla,
            "reduced-sis" => ModelKind::ReducedSis,
            "reduced-siri-strong" => ModelKind::ReducedSiriStrong,
            "reduced-siri-weak" => ModelKind::ReducedSiriWeak,
            _ => return None,
        })
    }

    /// State coordinate names, in CSV column order.
    pub fn state_names(&self) -> &'static [&'static str] {
        match self {
            ModelKind::Sis => &["y", "z_S", "z_I"],
            ModelKind::Siri => &["s", "y", "r", "z_S", "z_I", "z_R"],
            ModelKind::SiriVanilla => &["s", "y", "r"],
            ModelKind::ReducedSis => &["y"],
            ModelKind::ReducedSiriStrong | ModelKind::ReducedSiriWeak => &["y", "r"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Sis(SisParams),
    Siri(SiriParams),
    Vanilla { beta: f64, beta_hat: f64, gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub model: ModelKind,
    pub params: ModelParams,
    pub initial: Vec<f64>,
    pub integration: IntegrationConfig,
    pub sweep: Option<SweepConfig>,
    /// Set from the command line, never from the config text.
    pub output_path: Option<PathBuf>,
}

#[derive(Debug)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(n) => write!(f, "config line {n}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: Option<usize>, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

struct Section {
    entries: BTreeMap<String, (usize, String)>,
}

impl Section {
    fn new() -> Self {
        Section { entries: BTreeMap::new() }
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn require_f64(&mut self, section: &str, key: &str) -> Result<f64, ParseError> {
        match self.take(key) {
            Some((line, value)) => parse_f64(line, key, &value),
            None => err(None, format!("missing required key `{key}` in [{section}]")),
        }
    }

    fn optional_f64(&mut self, key: &str) -> Result<Option<f64>, ParseError> {
        match self.take(key) {
            Some((line, value)) => parse_f64(line, key, &value).map(Some),
            None => Ok(None),
        }
    }

    fn finish(self, section: &str) -> Result<(), ParseError> {
        if let Some((key, (line, _))) = self.entries.into_iter().next() {
            return err(Some(line), format!("unknown key `{key}` in [{section}]"));
        }
        Ok(())
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ParseError> {
    value
        .parse::<f64>()
        .map_err(|_| ParseError { line: Some(line), message: format!("malformed number for `{key}`: `{value}`") })
}

/// Parses a scenario document, enforcing the model invariants; the violated
/// invariant is named in the error.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ParseError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return err(Some(line_no), format!("malformed section header `{raw}`"));
            };
            let name = name.trim();
            if !["model", "params", "initial", "integration", "sweep"].contains(&name) {
                return err(Some(line_no), format!("unknown section `[{name}]`"));
            }
            sections.entry(name.to_string()).or_insert_with(Section::new);
            current = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(Some(line_no), format!("expected `key = value`, got `{raw}`"));
        };
        let Some(section) = &current else {
            return err(Some(line_no), "entry before any [section] header");
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let entries = &mut sections.get_mut(section).unwrap().entries;
        if entries.insert(key.clone(), (line_no, value)).is_some() {
            return err(Some(line_no), format!("duplicate key `{key}` in [{section}]"));
        }
    }

    let mut model_sec = sections
        .remove("model")
        .ok_or_else(|| ParseError { line: None, message: "missing [model] section".into() })?;
    let (kind_line, kind_raw) = model_sec
        .take("kind")
        .ok_or_else(|| ParseError { line: None, message: "missing required key `kind` in [model]".into() })?;
    let model = ModelKind::parse(&kind_raw)
        .ok_or_else(|| ParseError { line: Some(kind_line), message: format!("unknown model kind `{kind_raw}`") })?;
    model_sec.finish("model")?;

    let mut params_sec = sections
        .remove("params")
        .ok_or_else(|| ParseError { line: None, message: "missing [params] section".into() })?;
    let params = parse_params(model, &mut params_sec)?;
    params_sec.finish("params")?;

    let initial = match sections.remove("initial") {
        Some(mut sec) => {
            let names = model.state_names();
            let mut out = Vec::with_capacity(names.len());
            for name in names {
                out.push(sec.require_f64("initial", name)?);
            }
            sec.finish("initial")?;
            validate_initial(model, &out)?;
            out
        }
        None => default_initial(model),
    };

    let mut integration = IntegrationConfig::default();
    if let Some(mut sec) = sections.remove("integration") {
        if let Some(v) = sec.optional_f64("dt")? {
            integration.dt = v;
        }
        if let Some(v) = sec.optional_f64("t_end")? {
            integration.t_end = v;
        }
        if let Some(v) = sec.optional_f64("epsilon")? {
            integration.epsilon = v;
        }
        if let Some(v) = sec.optional_f64("projection_tol")? {
            integration.projection_tol = v;
        }
        if let Some((line, value)) = sec.take("record_stride") {
            integration.record_stride = value.parse::<usize>().map_err(|_| ParseError {
                line: Some(line),
                message: format!("malformed number for `record_stride`: `{value}`"),
            })?;
        }
        sec.finish("integration")?;
        integration
            .validate()
            .map_err(|e| ParseError { line: None, message: e.to_string() })?;
    }

    let sweep = match sections.remove("sweep") {
        Some(mut sec) => {
            let gamma_lo = sec.require_f64("sweep", "gamma_lo")?;
            let gamma_hi = sec.require_f64("sweep", "gamma_hi")?;
            let (line, value) = sec
                .take("n_points")
                .ok_or_else(|| ParseError { line: None, message: "missing required key `n_points` in [sweep]".into() })?;
            let n_points = value.parse::<usize>().map_err(|_| ParseError {
                line: Some(line),
                message: format!("malformed number for `n_points`: `{value}`"),
            })?;
            sec.finish("sweep")?;
            if !(gamma_lo > 0.0 && gamma_lo < gamma_hi) {
                return err(None, "sweep requires 0 < gamma_lo < gamma_hi");
            }
            if n_points < 2 {
                return err(None, "sweep requires n_points >= 2");
            }
            Some(SweepConfig { gamma_lo, gamma_hi, n_points })
        }
        None => None,
    };

    if let Some((name, sec)) = sections.into_iter().next() {
        sec.finish(&name)?;
    }

    Ok(ScenarioConfig { model, params, initial, integration, sweep, output_path: None })
}

fn parse_params(model: ModelKind, sec: &mut Section) -> Result<ModelParams, ParseError> {
    let invariant = |e: epigame_core::Error| ParseError { line: None, message: e.to_string() };
    match model {
        ModelKind::SiriVanilla => {
            let beta = sec.require_f64("params", "beta")?;
            let beta_hat = sec.require_f64("params", "beta_hat")?;
            let gamma = sec.require_f64("params", "gamma")?;
            if !(beta > 0.0 && beta_hat > 0.0 && gamma > 0.0) {
                return err(None, "parameter invariant violated: beta, beta_hat, gamma > 0");
            }
            Ok(ModelParams::Vanilla { beta, beta_hat, gamma })
        }
        ModelKind::Sis | ModelKind::ReducedSis => {
            let sis = parse_sis(sec)?;
            sis.validate().map_err(invariant)?;
            Ok(ModelParams::Sis(sis))
        }
        _ => {
            let sis = parse_sis(sec)?;
            let beta_hat_u = sec.require_f64("params", "beta_hat_u")?;
            let beta_hat_p = sec.require_f64("params", "beta_hat_p")?;
            let siri = SiriParams { sis, beta_hat_u, beta_hat_p };
            siri.validate().map_err(invariant)?;
            Ok(ModelParams::Siri(siri))
        }
    }
}

fn parse_sis(sec: &mut Section) -> Result<SisParams, ParseError> {
    Ok(SisParams {
        beta_u: sec.require_f64("params", "beta_u")?,
        beta_p: sec.require_f64("params", "beta_p")?,
        alpha: sec.require_f64("params", "alpha")?,
        gamma: sec.require_f64("params", "gamma")?,
        c_p: sec.require_f64("params", "c_P")?,
        c_iu: sec.require_f64("params", "c_IU")?,
        c_ip: sec.require_f64("params", "c_IP")?,
        loss: sec.require_f64("params", "L")?,
    })
}

fn validate_initial(model: ModelKind, state: &[f64]) -> Result<(), ParseError> {
    for (name, v) in model.state_names().iter().zip(state) {
        if !(0.0..=1.0).contains(v) {
            return err(None, format!("initial {name} = {v} outside [0,1]"));
        }
    }
    let simplex = match model {
        ModelKind::Siri | ModelKind::SiriVanilla => Some(state[0] + state[1] + state[2]),
        ModelKind::ReducedSiriStrong | ModelKind::ReducedSiriWeak => {
            (state[0] + state[1] > 1.0).then_some(state[0] + state[1])
        }
        _ => None,
    };
    if let Some(total) = simplex {
        if (total - 1.0).abs() > 1e-9 && total > 1.0 {
            return err(None, format!("initial compartments sum to {total}, expected at most 1"));
        }
        if matches!(model, ModelKind::Siri | ModelKind::SiriVanilla) && (total - 1.0).abs() > 1e-9 {
            return err(None, format!("initial s + y + r = {total}, expected 1"));
        }
    }
    Ok(())
}

fn default_initial(model: ModelKind) -> Vec<f64> {
    match model {
        ModelKind::Sis => vec![0.2, 0.5, 0.5],
        ModelKind::Siri => vec![0.79, 0.2, 0.01, 0.5, 0.5, 0.5],
        ModelKind::SiriVanilla => vec![0.5, 0.5, 0.0],
        ModelKind::ReducedSis => vec![0.5],
        ModelKind::ReducedSiriStrong | ModelKind::ReducedSiriWeak => vec![0.2, 0.01],
    }
}

/// Canonical text form; `parse_config(render(c))` reproduces `c` exactly
/// (floats print in shortest round-trip form).
pub fn render(config: &ScenarioConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[model]\nkind = {}\n", config.model.as_str());
    out.push_str("[params]\n");
    match &config.params {
        ModelParams::Sis(p) => render_sis(&mut out, p),
        ModelParams::Siri(p) => {
            render_sis(&mut out, &p.sis);
            let _ = writeln!(out, "beta_hat_u = {}", p.beta_hat_u);
            let _ = writeln!(out, "beta_hat_p = {}", p.beta_hat_p);
        }
        ModelParams::Vanilla { beta, beta_hat, gamma } => {
            let _ = writeln!(out, "beta = {beta}\nbeta_hat = {beta_hat}\ngamma = {gamma}");
        }
    }
    out.push_str("\n[initial]\n");
    for (name, v) in config.model.state_names().iter().zip(&config.initial) {
        let _ = writeln!(out, "{name} = {v}");
    }
    let i = &config.integration;
    let _ = writeln!(
        out,
        "\n[integration]\ndt = {}\nt_end = {}\nepsilon = {}\nprojection_tol = {}\nrecord_stride = {}",
        i.dt, i.t_end, i.epsilon, i.projection_tol, i.record_stride
    );
    if let Some(sweep) = &config.sweep {
        let _ = writeln!(
            out,
            "\n[sweep]\ngamma_lo = {}\ngamma_hi = {}\nn_points = {}",
            sweep.gamma_lo, sweep.gamma_hi, sweep.n_points
        );
    }
    out
}

fn render_sis(out: &mut String, p: &SisParams) {
    let _ = writeln!(out, "beta_u = {}", p.beta_u);
    let _ = writeln!(out, "beta_p = {}", p.beta_p);
    let _ = writeln!(out, "alpha = {}", p.alpha);
    let _ = writeln!(out, "gamma = {}", p.gamma);
    let _ = writeln!(out, "c_P = {}", p.c_p);
    let _ = writeln!(out, "c_IU = {}", p.c_iu);
    let _ = writeln!(out, "c_IP = {}", p.c_ip);
    let _ = writeln!(out, "L = {}", p.loss);
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIS_DOC: &str = "\
[model]
kind = sis

[params]
beta_u = 0.3
beta_p = 0.15
alpha = 0.5
gamma = 0.1
c_P = 1
c_IU = 2
c_IP = 1
L = 80

[initial]
y = 0.2
z_S = 0.5
z_I = 0.5

[integration]
dt = 0.05
t_end = 2000
epsilon = 1
";

    #[test]
    fn parses_reference_document() {
        let cfg = parse_config(SIS_DOC).unwrap();
        assert_eq!(cfg.model, ModelKind::Sis);
        let ModelParams::Sis(p) = cfg.params else { panic!() };
        assert_eq!(p.beta_p, 0.15);
        assert_eq!(cfg.initial, vec![0.2, 0.5, 0.5]);
        assert_eq!(cfg.integration.t_end, 2000.0);
        assert_eq!(cfg.integration.record_stride, 1);
    }

    #[test]
    fn invariant_violations_are_named() {
        let doc = SIS_DOC.replace("c_IU = 2", "c_IU = 1");
        let e = parse_config(&doc).unwrap_err().to_string();
        assert!(e.contains("c_IU > c_IP"), "{e}");

        let doc = SIS_DOC.replace("beta_u = 0.3", "beta_u = 0.1");
        let e = parse_config(&doc).unwrap_err().to_string();
        assert!(e.contains("beta_u > beta_p"), "{e}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let doc = SIS_DOC.replace("gamma = 0.1", "gamma = zero.one");
        let e = parse_config(&doc).unwrap_err().to_string();
        assert!(e.contains("line 8") && e.contains("malformed number"), "{e}");

        let doc = SIS_DOC.replace("L = 80", "L = 80\nextra = 1");
        let e = parse_config(&doc).unwrap_err().to_string();
        assert!(e.contains("unknown key `extra`"), "{e}");
        assert!(e.contains("line 13"), "{e}");

        let doc = SIS_DOC.replace("beta_u = 0.3\n", "");
        let e = parse_config(&doc).unwrap_err().to_string();
        assert!(e.contains("missing required key `beta_u`"), "{e}");
    }

    #[test]
    fn round_trip_is_exact() {
        let cfg = parse_config(SIS_DOC).unwrap();
        assert_eq!(parse_config(&render(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn vanilla_params_have_their_own_shape() {
        let doc = "\
[model]
kind = siri-vanilla

[params]
beta = 0.2
beta_hat = 0.25
gamma = 0.1
";
        let cfg = parse_config(doc).unwrap();
        assert!(matches!(cfg.params, ModelParams::Vanilla { .. }));
        assert_eq!(cfg.initial, vec![0.5, 0.5, 0.0]);
    }
}

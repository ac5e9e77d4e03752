//! Experiment configuration files: flat `key = value` lines with dotted
//! section names, `#` comments, comma-separated lists.
//!
//! ```text
//! model.dim = 2
//! model.variant = boolean
//! model.radius.law = fixed
//! model.radius.value = 0.5
//! lambda = 0.5, 1.0
//! event.kind = crossing
//! event.r = 2
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use perco::estimators::{McSettings, RGrid, TrendOptions};
use perco::events::{EventSpec, DEFAULT_MARGIN};
use perco::model::{Classical, Kernel, LocalDamping, ModelSpec, Profile, RadiusLaw, Variant};
use perco::ppp::{Budget, Window};
use perco::renorm::{BracketOptions, RenormParams};

const KNOWN_KEYS: &[&str] = &[
    "seed",
    "trials",
    "confidence",
    "margin",
    "lambda",
    "model.dim",
    "model.variant",
    "model.radius.law",
    "model.radius.value",
    "model.radius.lo",
    "model.radius.hi",
    "model.radius.scale",
    "model.radius.shape",
    "model.kernel",
    "model.profile",
    "model.profile.theta",
    "model.profile.delta",
    "model.profile.knots",
    "model.tau",
    "model.beta",
    "model.damping.radius",
    "model.damping.factor",
    "event.kind",
    "event.r",
    "event.c",
    "event.center",
    "grid.r_min",
    "grid.r_max",
    "grid.ratio",
    "grid.count",
    "trend.c",
    "trend.p_min",
    "trend.decrease_factor",
    "lemma1.r",
    "lemma1.c",
    "lemma1.c_prime",
    "lemma2.lambda_prime",
    "lemma2.r",
    "mixing.r",
    "mixing.x",
    "renorm.r",
    "renorm.constant",
    "renorm.c_mix",
    "renorm.zeta",
    "bracket.threshold",
    "bracket.lambda_min",
    "bracket.lambda_max",
    "bracket.max_iterations",
    "bracket.r_probe",
    "window.shape",
    "window.radius",
    "window.center",
    "window.lower",
    "window.upper",
    "output.name",
];

/// A parse or validation error, anchored to a line when one is responsible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub msg: String,
}

impl ConfigError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            msg: msg.into(),
        }
    }

    fn global(msg: impl Into<String>) -> Self {
        Self {
            line: None,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.msg),
            None => f.write_str(&self.msg),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Params {
    pub r: f64,
    pub c: f64,
    pub c_prime: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Params {
    pub lambda_prime: f64,
    pub rs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingParams {
    pub r: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub lambdas: Vec<f64>,
    pub trials: usize,
    pub confidence: f64,
    pub seed: u64,
    pub margin: f64,
    pub event: Option<EventSpec>,
    pub grid: Option<RGrid>,
    pub trend_c: f64,
    pub trend: TrendOptions,
    pub lemma1: Option<Lemma1Params>,
    pub lemma2: Option<Lemma2Params>,
    pub mixing: Option<MixingParams>,
    pub renorm_rs: Vec<f64>,
    pub renorm: RenormParams,
    pub bracket: BracketOptions,
    pub window: Option<Window>,
    pub output_name: Option<String>,
}

impl ExperimentConfig {
    /// A config with defaults everywhere except the model.
    pub fn new(model: ModelSpec) -> Self {
        Self {
            model,
            lambdas: Vec::new(),
            trials: 1000,
            confidence: 0.95,
            seed: 0,
            margin: DEFAULT_MARGIN,
            event: None,
            grid: None,
            trend_c: 1.0,
            trend: TrendOptions::default(),
            lemma1: None,
            lemma2: None,
            mixing: None,
            renorm_rs: Vec::new(),
            renorm: RenormParams::default(),
            bracket: BracketOptions::default(),
            window: None,
            output_name: None,
        }
    }

    pub fn settings(&self, budget: Budget) -> McSettings {
        McSettings {
            trials: self.trials,
            seed: self.seed,
            confidence: self.confidence,
            margin: self.margin,
            budget,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut r = Reader::new(text)?;
        let cfg = build(&mut r)?;
        r.finish()?;
        Ok(cfg)
    }

    /// Normalized text form; `parse(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("seed", self.seed.to_string());
        kv("trials", self.trials.to_string());
        kv("confidence", num(self.confidence));
        kv("margin", num(self.margin));
        if !self.lambdas.is_empty() {
            kv("lambda", list(&self.lambdas));
        }
        kv("model.dim", self.model.dim.to_string());
        match &self.model.variant {
            Variant::Boolean(law) => {
                kv("model.variant", "boolean".into());
                match *law {
                    RadiusLaw::Fixed { radius } => {
                        kv("model.radius.law", "fixed".into());
                        kv("model.radius.value", num(radius));
                    }
                    RadiusLaw::Uniform { lo, hi } => {
                        kv("model.radius.law", "uniform".into());
                        kv("model.radius.lo", num(lo));
                        kv("model.radius.hi", num(hi));
                    }
                    RadiusLaw::Pareto { scale, shape } => {
                        kv("model.radius.law", "pareto".into());
                        kv("model.radius.scale", num(scale));
                        kv("model.radius.shape", num(shape));
                    }
                }
            }
            Variant::Classical(c) => {
                kv("model.variant", "classical".into());
                classical_text(c, &mut kv);
            }
            Variant::Generalized { base, damping } => {
                kv("model.variant", "generalized".into());
                classical_text(base, &mut kv);
                kv("model.damping.radius", num(damping.radius));
                kv("model.damping.factor", num(damping.factor));
            }
        }
        if let Some(e) = &self.event {
            match e {
                EventSpec::LongEdge { r, c } => {
                    kv("event.kind", "long-edge".into());
                    kv("event.r", num(*r));
                    kv("event.c", num(*c));
                }
                EventSpec::Crossing { r } => {
                    kv("event.kind", "crossing".into());
                    kv("event.r", num(*r));
                }
                EventSpec::LocalCrossing { r, center } => {
                    kv("event.kind", "local-crossing".into());
                    kv("event.r", num(*r));
                    kv("event.center", list(center));
                }
                EventSpec::FarEdge { r } => {
                    kv("event.kind", "far-edge".into());
                    kv("event.r", num(*r));
                }
            }
        }
        if let Some(g) = &self.grid {
            kv("grid.r_min", num(g.r_min));
            kv("grid.r_max", num(g.r_max));
            kv("grid.count", g.count.to_string());
        }
        kv("trend.c", num(self.trend_c));
        kv("trend.p_min", num(self.trend.p_min));
        kv("trend.decrease_factor", num(self.trend.decrease_factor));
        if let Some(l) = &self.lemma1 {
            kv("lemma1.r", num(l.r));
            kv("lemma1.c", num(l.c));
            kv("lemma1.c_prime", num(l.c_prime));
        }
        if let Some(l) = &self.lemma2 {
            kv("lemma2.lambda_prime", num(l.lambda_prime));
            kv("lemma2.r", list(&l.rs));
        }
        if let Some(m) = &self.mixing {
            kv("mixing.r", num(m.r));
            kv("mixing.x", list(&m.x));
        }
        if !self.renorm_rs.is_empty() {
            kv("renorm.r", list(&self.renorm_rs));
        }
        kv("renorm.constant", num(self.renorm.constant));
        if let Some((c_mix, zeta)) = self.renorm.mixing {
            kv("renorm.c_mix", num(c_mix));
            kv("renorm.zeta", num(zeta));
        }
        let b = &self.bracket;
        kv("bracket.threshold", num(b.threshold));
        kv("bracket.lambda_min", num(b.lambda_min));
        kv("bracket.lambda_max", num(b.lambda_max));
        kv("bracket.max_iterations", b.max_iterations.to_string());
        if let Some(r) = b.r_probe {
            kv("bracket.r_probe", num(r));
        }
        match &self.window {
            Some(Window::Ball { center, radius }) => {
                kv("window.shape", "ball".into());
                kv("window.radius", num(*radius));
                kv("window.center", list(center));
            }
            Some(Window::Box { lower, upper }) => {
                kv("window.shape", "box".into());
                kv("window.lower", list(lower));
                kv("window.upper", list(upper));
            }
            None => {}
        }
        if let Some(n) = &self.output_name {
            kv("output.name", n.clone());
        }
        out
    }
}

fn classical_text(c: &Classical, kv: &mut impl FnMut(&str, String)) {
    kv("model.kernel", c.kernel.name().into());
    match &c.profile {
        Profile::Indicator { theta } => {
            kv("model.profile", "indicator".into());
            kv("model.profile.theta", num(*theta));
        }
        Profile::Polynomial { delta } => {
            kv("model.profile", "polynomial".into());
            kv("model.profile.delta", num(*delta));
        }
        Profile::Tabulated { knots } => {
            kv("model.profile", "tabulated".into());
            let s: Vec<String> = knots.iter().map(|(t, v)| format!("{}:{}", num(*t), num(*v))).collect();
            kv("model.profile.knots", s.join(", "));
        }
    }
    kv("model.tau", num(c.tau));
    kv("model.beta", num(c.beta));
}

/// Shortest representation that parses back to the same value.
fn num(x: f64) -> String {
    format!("{x}")
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

struct Entry {
    line: usize,
    value: String,
}

struct Reader {
    entries: BTreeMap<String, Entry>,
    used: BTreeSet<String>,
}

impl Reader {
    fn new(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((k, v)) = content.split_once('=') else {
                return Err(ConfigError::at(line, format!("expected `key = value`, got `{content}`")));
            };
            let (k, v) = (k.trim(), v.trim());
            if !KNOWN_KEYS.contains(&k) {
                return Err(ConfigError::at(line, format!("unknown key `{k}`")));
            }
            if v.is_empty() {
                return Err(ConfigError::at(line, format!("`{k}` has no value")));
            }
            if let Some(prev) = entries.get(k) {
                let prev: &Entry = prev;
                return Err(ConfigError::at(
                    line,
                    format!("`{k}` already set on line {}", prev.line),
                ));
            }
            entries.insert(
                k.to_string(),
                Entry {
                    line,
                    value: v.to_string(),
                },
            );
        }
        Ok(Self {
            entries,
            used: BTreeSet::new(),
        })
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.line)
    }

    fn has_section(&self, prefix: &str) -> bool {
        self.entries.keys().any(|k| k.starts_with(prefix))
    }

    fn str(&mut self, key: &str) -> Option<(usize, String)> {
        let e = self.entries.get(key)?;
        self.used.insert(key.to_string());
        Some((e.line, e.value.clone()))
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Result<Option<T>, ConfigError> {
        match self.str(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| ConfigError::at(line, format!("`{key}`: expected {what}, got `{v}`"))),
        }
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.parse(key, "a number")?;
        if let Some(x) = v {
            if !x.is_finite() {
                return Err(ConfigError::at(self.line(key).unwrap_or(0), format!("`{key}` must be finite")));
            }
        }
        Ok(v)
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    fn req_f64(&mut self, key: &str) -> Result<f64, ConfigError> {
        self.f64(key)?
            .ok_or_else(|| ConfigError::global(format!("missing required key `{key}`")))
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some((line, v)) = self.str(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| ConfigError::at(line, format!("`{key}`: `{s}` is not a finite number")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn check<T>(&self, key: &str, r: perco::Result<T>) -> Result<T, ConfigError> {
        r.map_err(|e| match self.line(key) {
            Some(l) => ConfigError::at(l, e.to_string()),
            None => ConfigError::global(e.to_string()),
        })
    }

    fn fail(&self, key: &str, msg: impl Into<String>) -> ConfigError {
        match self.line(key) {
            Some(l) => ConfigError::at(l, msg),
            None => ConfigError::global(msg),
        }
    }

    /// Every key must have been read by the builder.
    fn finish(&self) -> Result<(), ConfigError> {
        let mut left: Vec<(&String, &Entry)> =
            self.entries.iter().filter(|(k, _)| !self.used.contains(*k)).collect();
        left.sort_by_key(|(_, e)| e.line);
        match left.first() {
            Some((k, e)) => Err(ConfigError::at(
                e.line,
                format!("`{k}` does not apply to this configuration"),
            )),
            None => Ok(()),
        }
    }
}

fn build(r: &mut Reader) -> Result<ExperimentConfig, ConfigError> {
    let model = build_model(r)?;
    let d = model.dim;
    let mut cfg = ExperimentConfig::new(model);
    if let Some(s) = r.parse::<u64>("seed", "an unsigned integer")? {
        cfg.seed = s;
    }
    if let Some(n) = r.parse::<usize>("trials", "a positive integer")? {
        if n == 0 {
            return Err(r.fail("trials", "`trials` must be at least 1"));
        }
        cfg.trials = n;
    }
    cfg.confidence = r.f64_or("confidence", cfg.confidence)?;
    if !(cfg.confidence > 0.0 && cfg.confidence < 1.0) {
        return Err(r.fail("confidence", "`confidence` must lie in (0, 1)"));
    }
    cfg.margin = r.f64_or("margin", cfg.margin)?;
    if cfg.margin < 0.0 {
        return Err(r.fail("margin", "`margin` must be >= 0"));
    }
    if let Some(ls) = r.list("lambda")? {
        if ls.iter().any(|&l| l < 0.0) {
            return Err(r.fail("lambda", "intensities must be >= 0"));
        }
        cfg.lambdas = ls;
    }

    if r.has_section("event.") {
        let event = build_event(r, d)?;
        r.check("event.kind", event.validate(d))?;
        cfg.event = Some(event);
    }
    if r.has_section("grid.") {
        let r_min = r.req_f64("grid.r_min")?;
        let count = r
            .parse::<usize>("grid.count", "an integer")?
            .ok_or_else(|| ConfigError::global("missing required key `grid.count`"))?;
        let r_max = match (r.f64("grid.r_max")?, r.f64("grid.ratio")?) {
            (Some(m), None) => m,
            (None, Some(q)) => r_min * q.powi(count as i32 - 1),
            (Some(_), Some(_)) => return Err(r.fail("grid.ratio", "set either `grid.r_max` or `grid.ratio`, not both")),
            (None, None) => return Err(ConfigError::global("the grid needs `grid.r_max` or `grid.ratio`")),
        };
        cfg.grid = Some(r.check("grid.r_min", RGrid::geometric(r_min, r_max, count))?);
    }
    cfg.trend_c = r.f64_or("trend.c", cfg.trend_c)?;
    cfg.trend.p_min = r.f64_or("trend.p_min", cfg.trend.p_min)?;
    cfg.trend.decrease_factor = r.f64_or("trend.decrease_factor", cfg.trend.decrease_factor)?;
    if !(cfg.trend_c > 0.0) {
        return Err(r.fail("trend.c", "`trend.c` must be positive"));
    }

    if r.has_section("lemma1.") {
        let p = Lemma1Params {
            r: r.req_f64("lemma1.r")?,
            c: r.f64_or("lemma1.c", 1.0)?,
            c_prime: r.req_f64("lemma1.c_prime")?,
        };
        if !(p.r > 0.0 && p.c > 0.0 && p.c_prime >= p.c) {
            return Err(r.fail("lemma1.c_prime", "need lemma1.r > 0 and lemma1.c_prime >= lemma1.c > 0"));
        }
        cfg.lemma1 = Some(p);
    }
    if r.has_section("lemma2.") {
        let lambda_prime = r.req_f64("lemma2.lambda_prime")?;
        let rs = r
            .list("lemma2.r")?
            .ok_or_else(|| ConfigError::global("missing required key `lemma2.r`"))?;
        if rs.iter().any(|&x| !(x > 0.0)) {
            return Err(r.fail("lemma2.r", "scales must be positive"));
        }
        cfg.lemma2 = Some(Lemma2Params { lambda_prime, rs });
    }
    if r.has_section("mixing.") {
        let mr = r.req_f64("mixing.r")?;
        let x = r
            .list("mixing.x")?
            .ok_or_else(|| ConfigError::global("missing required key `mixing.x`"))?;
        if x.len() != d {
            return Err(r.fail("mixing.x", format!("`mixing.x` needs {d} coordinates")));
        }
        cfg.mixing = Some(MixingParams { r: mr, x });
    }

    if let Some(rs) = r.list("renorm.r")? {
        if rs.iter().any(|&x| !(x > 0.0)) {
            return Err(r.fail("renorm.r", "scales must be positive"));
        }
        cfg.renorm_rs = rs;
    }
    cfg.renorm.constant = r.f64_or("renorm.constant", cfg.renorm.constant)?;
    match (r.f64("renorm.c_mix")?, r.f64("renorm.zeta")?) {
        (Some(c), Some(z)) => cfg.renorm.mixing = Some((c, z)),
        (None, None) => {}
        _ => return Err(ConfigError::global("`renorm.c_mix` and `renorm.zeta` go together")),
    }

    let b = &mut cfg.bracket;
    b.threshold = r.f64_or("bracket.threshold", b.threshold)?;
    b.lambda_min = r.f64_or("bracket.lambda_min", b.lambda_min)?;
    b.lambda_max = r.f64_or("bracket.lambda_max", b.lambda_max)?;
    if let Some(n) = r.parse::<usize>("bracket.max_iterations", "an integer")? {
        b.max_iterations = n;
    }
    b.r_probe = r.f64("bracket.r_probe")?;

    if r.has_section("window.") {
        let (_, shape) = r
            .str("window.shape")
            .ok_or_else(|| ConfigError::global("missing required key `window.shape`"))?;
        let w = match shape.as_str() {
            "ball" => Window::Ball {
                radius: r.req_f64("window.radius")?,
                center: r.list("window.center")?.unwrap_or_else(|| vec![0.0; d]),
            },
            "box" => Window::Box {
                lower: r
                    .list("window.lower")?
                    .ok_or_else(|| ConfigError::global("missing required key `window.lower`"))?,
                upper: r
                    .list("window.upper")?
                    .ok_or_else(|| ConfigError::global("missing required key `window.upper`"))?,
            },
            other => return Err(r.fail("window.shape", format!("unknown window shape `{other}` (ball, box)"))),
        };
        r.check("window.shape", w.validate())?;
        if w.dim() != d {
            return Err(r.fail("window.shape", "window dimension differs from model.dim"));
        }
        cfg.window = Some(w);
    }
    cfg.output_name = r.str("output.name").map(|(_, v)| v);
    if let Some(n) = &cfg.output_name {
        if !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.') {
            return Err(r.fail("output.name", "`output.name` may only use letters, digits, `_`, `-` and `.`"));
        }
    }
    Ok(cfg)
}

fn build_model(r: &mut Reader) -> Result<ModelSpec, ConfigError> {
    let dim = r
        .parse::<usize>("model.dim", "a dimension")?
        .ok_or_else(|| ConfigError::global("missing required key `model.dim`"))?;
    let (_, variant) = r
        .str("model.variant")
        .ok_or_else(|| ConfigError::global("missing required key `model.variant`"))?;
    let model = match variant.as_str() {
        "boolean" => {
            let (_, law) = r
                .str("model.radius.law")
                .ok_or_else(|| ConfigError::global("missing required key `model.radius.law`"))?;
            let law = match law.as_str() {
                "fixed" => RadiusLaw::Fixed {
                    radius: r.req_f64("model.radius.value")?,
                },
                "uniform" => RadiusLaw::Uniform {
                    lo: r.req_f64("model.radius.lo")?,
                    hi: r.req_f64("model.radius.hi")?,
                },
                "pareto" => RadiusLaw::Pareto {
                    scale: r.req_f64("model.radius.scale")?,
                    shape: r.req_f64("model.radius.shape")?,
                },
                other => {
                    return Err(r.fail(
                        "model.radius.law",
                        format!("unknown radius law `{other}` (fixed, uniform, pareto)"),
                    ))
                }
            };
            ModelSpec::boolean(dim, law)
        }
        "classical" => {
            let c = build_classical(r)?;
            ModelSpec {
                dim,
                variant: Variant::Classical(c),
            }
        }
        "generalized" => {
            let base = build_classical(r)?;
            let def = LocalDamping::default();
            let damping = LocalDamping {
                radius: r.f64_or("model.damping.radius", def.radius)?,
                factor: r.f64_or("model.damping.factor", def.factor)?,
            };
            ModelSpec::generalized(dim, base, damping)
        }
        other => {
            return Err(r.fail(
                "model.variant",
                format!("unknown variant `{other}` (boolean, classical, generalized)"),
            ))
        }
    };
    r.check("model.variant", model.validate())?;
    Ok(model)
}

fn build_classical(r: &mut Reader) -> Result<Classical, ConfigError> {
    let (_, k) = r
        .str("model.kernel")
        .ok_or_else(|| ConfigError::global("missing required key `model.kernel`"))?;
    let kernel = match k.as_str() {
        "plain" => Kernel::Plain,
        "product" => Kernel::Product,
        "sum" => Kernel::Sum,
        "max" => Kernel::Max,
        other => {
            return Err(r.fail(
                "model.kernel",
                format!("unknown kernel `{other}` (plain, product, sum, max)"),
            ))
        }
    };
    let (_, p) = r
        .str("model.profile")
        .ok_or_else(|| ConfigError::global("missing required key `model.profile`"))?;
    let profile = match p.as_str() {
        "indicator" => Profile::Indicator {
            theta: r.req_f64("model.profile.theta")?,
        },
        "polynomial" => Profile::Polynomial {
            delta: r.req_f64("model.profile.delta")?,
        },
        "tabulated" => {
            let (line, v) = r
                .str("model.profile.knots")
                .ok_or_else(|| ConfigError::global("missing required key `model.profile.knots`"))?;
            let knots = v
                .split(',')
                .map(|pair| {
                    let (t, y) = pair.split_once(':')?;
                    Some((t.trim().parse::<f64>().ok()?, y.trim().parse::<f64>().ok()?))
                })
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| ConfigError::at(line, "knots must look like `t:v, t:v, ...`"))?;
            Profile::Tabulated { knots }
        }
        other => {
            return Err(r.fail(
                "model.profile",
                format!("unknown profile `{other}` (indicator, polynomial, tabulated)"),
            ))
        }
    };
    Ok(Classical {
        kernel,
        profile,
        tau: r.f64_or("model.tau", 2.5)?,
        beta: r.f64_or("model.beta", 1.0)?,
    })
}

fn build_event(r: &mut Reader, d: usize) -> Result<EventSpec, ConfigError> {
    let (line, kind) = r
        .str("event.kind")
        .ok_or_else(|| ConfigError::global("missing required key `event.kind`"))?;
    let radius = r.req_f64("event.r")?;
    Ok(match kind.as_str() {
        "long-edge" | "L" => EventSpec::LongEdge {
            r: radius,
            c: r.req_f64("event.c")?,
        },
        "crossing" | "C" => EventSpec::Crossing { r: radius },
        "local-crossing" | "G" => EventSpec::LocalCrossing {
            r: radius,
            center: r.list("event.center")?.unwrap_or_else(|| vec![0.0; d]),
        },
        "far-edge" | "F" => EventSpec::FarEdge { r: radius },
        other => {
            return Err(ConfigError::at(
                line,
                format!("unknown event `{other}` (long-edge, crossing, local-crossing, far-edge)"),
            ))
        }
    })
}

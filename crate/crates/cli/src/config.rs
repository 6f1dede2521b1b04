//! `key = value` configuration. Defaults, the config file and command-line
//! overrides are merged in that order, then validated into a typed [`Plan`]
//! so that every guard fires before any work starts.

use std::collections::BTreeMap;
use std::path::PathBuf;

use ncft::matfun::MAX_AL_ORDER;
use ncft::ncmeasure::{MomentFunctional, MAX_EVAL_DEGREE};
use ncft::ncseries::text::parse_word;
use ncft::ncseries::{word_count, Word, MAX_CAP, MAX_WORDS};
use ncft::pathsig::GroupWord;
use ncft::rmt::{check_size, LaurentPoly};
use ncft::wiener::{check_budget, Quadrature};

use crate::CliError;

/// Largest sample count any matrix experiment accepts.
pub const MAX_SAMPLES: usize = 10_000_000;
/// Largest number of rows an identity check may generate.
pub const MAX_CHECK_ROWS: u64 = 100_000;
/// Largest number of random tuples for the Amitsur–Levitsky check.
pub const MAX_TRIALS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("format must be csv or json, got `{s}`"))),
        }
    }
}

/// Scalar functions available to the matrix-Fourier experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarFn {
    /// `exp(-z^2)`
    Gauss,
    /// `cos z`
    Cos,
    /// `z^2`
    Square,
}

impl ScalarFn {
    fn parse(s: &str) -> Result<ScalarFn, CliError> {
        match s {
            "gauss" => Ok(ScalarFn::Gauss),
            "cos" => Ok(ScalarFn::Cos),
            "square" => Ok(ScalarFn::Square),
            _ => Err(CliError::Config(format!(
                "function must be gauss, cos or square, got `{s}`"
            ))),
        }
    }

    pub fn eval(self, z: f64) -> f64 {
        match self {
            ScalarFn::Gauss => (-z * z).exp(),
            ScalarFn::Cos => z.cos(),
            ScalarFn::Square => z * z,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MomentSource {
    Rule(MomentFunctional),
    Table(PathBuf),
}

/// A validated experiment with typed parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Plan {
    Sig {
        input: PathBuf,
        cap: usize,
    },
    Bch {
        n: usize,
        degree: usize,
    },
    Basis {
        n: usize,
        degree: usize,
    },
    ShuffleCheck {
        n: usize,
        cap: usize,
        segments: usize,
        tol: f64,
    },
    WienerExpsig {
        n: usize,
        cap: usize,
        q: u32,
        paths: usize,
    },
    HeisHeat {
        lambdas: Vec<f64>,
        q: u32,
        paths: usize,
        quad: Quadrature,
        se_mult: f64,
        rel_tol: f64,
    },
    Folland {
        h: f64,
        tol: f64,
    },
    HaarCoeff {
        f: LaurentPoly,
        gammas: Vec<GroupWord>,
        size: usize,
        samples: usize,
    },
    HaarOrth {
        gamma: GroupWord,
        sizes: Vec<usize>,
        samples: usize,
    },
    GueMoments {
        words: Vec<Word>,
        size: usize,
        samples: usize,
    },
    FreeMoments {
        source: MomentSource,
        degree: usize,
    },
    MatrixFourier {
        function: ScalarFn,
        ks: Vec<i32>,
        size: usize,
        samples: usize,
    },
    AlIdentity {
        size: usize,
        trials: usize,
        input: Option<PathBuf>,
        tol: f64,
    },
}

pub const EXPERIMENTS: &[&str] = &[
    "sig",
    "bch",
    "basis",
    "shuffle-check",
    "wiener-expsig",
    "heis-heat",
    "folland",
    "haar-coeff",
    "haar-orth",
    "gue-moments",
    "free-moments",
    "matrix-fourier",
    "al-identity",
];

/// Keys each experiment accepts, with their defaults. An empty default
/// means "unset".
fn defaults(experiment: &str) -> Option<&'static [(&'static str, &'static str)]> {
    Some(match experiment {
        "sig" => &[("input", ""), ("cap", "4")],
        "bch" => &[("n", "2"), ("degree", "3")],
        "basis" => &[("n", "2"), ("degree", "4")],
        "shuffle-check" => &[("n", "2"), ("cap", "4"), ("segments", "5"), ("tol", "1e-10")],
        "wiener-expsig" => &[("n", "2"), ("cap", "4"), ("q", "10"), ("paths", "100000")],
        "heis-heat" => &[
            ("lambdas", "0.5,1,2"),
            ("q", "10"),
            ("paths", "100000"),
            ("quad_t", "10"),
            ("quad_steps", "2000"),
            ("se_mult", "3"),
            ("rel_tol", "0.02"),
        ],
        "folland" => &[("h", "0.001"), ("tol", "0.001")],
        "haar-coeff" => &[
            ("f", "3 : e; 2 : 1 -2; -1 : 2 1"),
            ("gammas", "e; 1 -2; 2 1; 1 2"),
            ("N", "32"),
            ("samples", "10000"),
        ],
        "haar-orth" => &[("gamma", "1 2 -1 -2"), ("N", "4,8,16"), ("samples", "10000")],
        "gue-moments" => &[
            ("words", "1 1; 1 1 1 1; 1 1 2 2; 1 2 1 2"),
            ("N", "64"),
            ("samples", "200"),
        ],
        "free-moments" => &[("rule", "gaussian(2)"), ("table", ""), ("degree", "4")],
        "matrix-fourier" => &[
            ("function", "gauss"),
            ("k", "0,1,2,3"),
            ("N", "1"),
            ("samples", "10000"),
        ],
        "al-identity" => &[("N", "2"), ("trials", "100"), ("input", ""), ("tol", "1e-12")],
        _ => return None,
    })
}

/// Parses `key = value` lines; `#` starts a comment line. Keys are
/// identifiers and may not repeat.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", k + 1)))?;
        let key = key.trim();
        check_key(key).map_err(|m| CliError::Config(format!("line {}: {m}", k + 1)))?;
        if out.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{key}`", k + 1)));
        }
    }
    Ok(out)
}

fn check_key(key: &str) -> Result<(), String> {
    if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad key `{key}`"));
    }
    Ok(())
}

/// Splits a `KEY=VALUE` command-line override.
pub fn parse_override(s: &str) -> Result<(String, String), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{s}` is not KEY=VALUE")))?;
    let k = k.trim();
    check_key(k).map_err(CliError::Config)?;
    Ok((k.to_string(), v.trim().to_string()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    /// Every parameter after defaults and overrides, as recorded in output headers.
    pub values: BTreeMap<String, String>,
    pub plan: Plan,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    /// Merges defaults, `file` and `overrides` (later wins) and validates.
    pub fn build(
        experiment: &str,
        file: BTreeMap<String, String>,
        overrides: impl IntoIterator<Item = (String, String)>,
    ) -> Result<ExperimentConfig, CliError> {
        let table = defaults(experiment).ok_or_else(|| {
            CliError::Config(format!(
                "unknown experiment `{experiment}` (one of {})",
                EXPERIMENTS.join(", ")
            ))
        })?;
        let mut merged: BTreeMap<String, String> = table.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let mut output = None;
        let mut format = Format::Csv;
        let mut seed = None;
        for (k, v) in file.into_iter().chain(overrides) {
            match k.as_str() {
                "experiment" if v == experiment => {}
                "experiment" => {
                    return Err(CliError::Config(format!(
                        "config is for experiment `{v}`, not `{experiment}`"
                    )))
                }
                "out" => output = (!v.is_empty()).then(|| PathBuf::from(v)),
                "format" => format = Format::parse(&v)?,
                "seed" => seed = Some(v),
                _ if merged.contains_key(&k) => {
                    merged.insert(k, v);
                }
                _ => return Err(CliError::Config(format!("`{k}` is not a parameter of `{experiment}`"))),
            }
        }
        let seed = seed.ok_or_else(|| CliError::Config("seed is mandatory".into()))?;
        let seed: u64 = seed
            .parse()
            .map_err(|_| CliError::Config(format!("seed must be an unsigned integer, got `{seed}`")))?;
        let plan = plan(experiment, &Values(&merged))?;
        Ok(ExperimentConfig {
            experiment: experiment.to_string(),
            seed,
            values: merged,
            plan,
            output,
            format,
        })
    }

    /// Config-file text alone, as the fuzz target sees it.
    pub fn parse(experiment: &str, text: &str) -> Result<ExperimentConfig, CliError> {
        ExperimentConfig::build(experiment, parse_config_text(text)?, Vec::new())
    }

    /// `(key, value)` pairs for output headers: version, experiment, seed,
    /// then parameters in key order.
    pub fn header(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("ncft_version".to_string(), ncft::VERSION.to_string()),
            ("experiment".to_string(), self.experiment.clone()),
            ("seed".to_string(), self.seed.to_string()),
        ];
        out.extend(self.values.iter().map(|(k, v)| (k.clone(), v.clone())));
        out
    }
}

struct Values<'a>(&'a BTreeMap<String, String>);

fn bad(key: &str, v: &str, what: &str) -> CliError {
    CliError::Config(format!("`{key}` must be {what}, got `{v}`"))
}

fn guard(msg: String) -> CliError {
    CliError::Guard(msg)
}

impl Values<'_> {
    fn raw(&self, key: &str) -> &str {
        self.0.get(key).map(String::as_str).unwrap_or("")
    }

    fn usize(&self, key: &str) -> Result<usize, CliError> {
        let v = self.raw(key);
        v.parse().map_err(|_| bad(key, v, "a non-negative integer"))
    }

    fn positive(&self, key: &str) -> Result<usize, CliError> {
        let n = self.usize(key)?;
        if n == 0 {
            return Err(bad(key, "0", "positive"));
        }
        Ok(n)
    }

    fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v = self.raw(key);
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad(key, v, "a finite number"))
    }

    fn positive_f64(&self, key: &str) -> Result<f64, CliError> {
        let x = self.f64(key)?;
        if x <= 0.0 {
            return Err(bad(key, self.raw(key), "positive"));
        }
        Ok(x)
    }

    fn list<T>(&self, key: &str, sep: char, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
        let v = self.raw(key);
        let items: Option<Vec<T>> = v.split(sep).map(|s| f(s.trim())).collect();
        match items {
            Some(items) if !items.is_empty() && !v.trim().is_empty() => Ok(items),
            _ => Err(bad(key, v, &format!("a non-empty `{sep}`-separated list"))),
        }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        let v = self.raw(key);
        (!v.is_empty()).then(|| PathBuf::from(v))
    }
}

fn check_words(n: usize, cap: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Config("n must be positive".into()));
    }
    if n > usize::from(u8::MAX) {
        return Err(guard(format!("alphabet size {n} above {}", u8::MAX)));
    }
    if cap > MAX_CAP {
        return Err(guard(format!("cap {cap} above {MAX_CAP}")));
    }
    if word_count(n, cap) > MAX_WORDS {
        return Err(guard(format!(
            "{} words at n={n}, cap={cap} exceed {MAX_WORDS}",
            word_count(n, cap)
        )));
    }
    Ok(())
}

fn level(v: &Values) -> Result<u32, CliError> {
    let q = v.usize("q")?;
    u32::try_from(q).map_err(|_| guard(format!("dyadic level {q} too large")))
}

fn samples(v: &Values) -> Result<usize, CliError> {
    let s = v.positive("samples")?;
    if s > MAX_SAMPLES {
        return Err(guard(format!("{s} samples above {MAX_SAMPLES}")));
    }
    Ok(s)
}

fn sizes(v: &Values) -> Result<Vec<usize>, CliError> {
    let sizes = v.list("N", ',', |s| s.parse::<usize>().ok())?;
    for &n in &sizes {
        if n == 0 {
            return Err(CliError::Config("matrix size must be positive".into()));
        }
        check_size(n, 1)?;
    }
    Ok(sizes)
}

fn single_size(v: &Values) -> Result<usize, CliError> {
    match sizes(v)?.as_slice() {
        [n] => Ok(*n),
        _ => Err(bad("N", v.raw("N"), "a single matrix size")),
    }
}

fn group_word(s: &str) -> Option<GroupWord> {
    GroupWord::parse(s).ok()
}

fn plan(experiment: &str, v: &Values) -> Result<Plan, CliError> {
    Ok(match experiment {
        "sig" => {
            let cap = v.usize("cap")?;
            check_words(1, cap)?;
            let input = v
                .path("input")
                .ok_or_else(|| CliError::Config("sig needs `input`".into()))?;
            Plan::Sig { input, cap }
        }
        "bch" | "basis" => {
            let n = v.positive("n")?;
            let degree = v.positive("degree")?;
            check_words(n, degree)?;
            if experiment == "bch" {
                if n < 2 {
                    return Err(CliError::Config("bch needs n >= 2".into()));
                }
                Plan::Bch { n, degree }
            } else {
                Plan::Basis { n, degree }
            }
        }
        "shuffle-check" => {
            let n = v.positive("n")?;
            let cap = v.usize("cap")?;
            check_words(n, cap)?;
            let segments = v.positive("segments")?;
            if segments > 10_000 {
                return Err(guard(format!("{segments} segments above 10000")));
            }
            let rows = shuffle_rows(n, cap);
            if rows > MAX_CHECK_ROWS {
                return Err(guard(format!("{rows} identity rows above {MAX_CHECK_ROWS}")));
            }
            Plan::ShuffleCheck {
                n,
                cap,
                segments,
                tol: v.positive_f64("tol")?,
            }
        }
        "wiener-expsig" => {
            let n = v.positive("n")?;
            let cap = v.usize("cap")?;
            let q = level(v)?;
            let paths = v.positive("paths")?;
            check_budget(n, cap, q, paths)?;
            Plan::WienerExpsig { n, cap, q, paths }
        }
        "heis-heat" => {
            let q = level(v)?;
            let paths = v.positive("paths")?;
            check_budget(2, 2, q, paths)?;
            let lambdas = v.list("lambdas", ',', |s| s.parse::<f64>().ok().filter(|x| x.is_finite()))?;
            let quad = Quadrature {
                t: v.positive_f64("quad_t")?,
                steps: v.positive("quad_steps")?,
            };
            if quad.steps < 2 {
                return Err(bad("quad_steps", v.raw("quad_steps"), "at least 2"));
            }
            // The refinement pass runs 4x the steps squared.
            if quad.steps > 20_000 {
                return Err(guard(format!("{} quadrature steps above 20000", quad.steps)));
            }
            Plan::HeisHeat {
                lambdas,
                q,
                paths,
                quad,
                se_mult: v.positive_f64("se_mult")?,
                rel_tol: v.positive_f64("rel_tol")?,
            }
        }
        "folland" => Plan::Folland {
            h: v.positive_f64("h")?,
            tol: v.positive_f64("tol")?,
        },
        "haar-coeff" => {
            let f = LaurentPoly::parse(v.raw("f"))?;
            let gammas = v.list("gammas", ';', group_word)?;
            Plan::HaarCoeff {
                f,
                gammas,
                size: single_size(v)?,
                samples: samples(v)?,
            }
        }
        "haar-orth" => {
            let gamma = GroupWord::parse(v.raw("gamma"))?;
            Plan::HaarOrth {
                gamma,
                sizes: sizes(v)?,
                samples: samples(v)?,
            }
        }
        "gue-moments" => {
            let words = v.list("words", ';', |s| parse_word(s).ok())?;
            if let Some(w) = words.iter().find(|w| w.degree() > MAX_EVAL_DEGREE) {
                return Err(guard(format!("word {w} above degree {MAX_EVAL_DEGREE}")));
            }
            Plan::GueMoments {
                words,
                size: single_size(v)?,
                samples: samples(v)?,
            }
        }
        "free-moments" => {
            let degree = v.usize("degree")?;
            if degree > MAX_EVAL_DEGREE {
                return Err(guard(format!("degree {degree} above {MAX_EVAL_DEGREE}")));
            }
            let source = match v.path("table") {
                Some(p) => MomentSource::Table(p),
                None => {
                    let rule = MomentFunctional::parse_rule(v.raw("rule"))?;
                    check_words(rule.arity().max(1), degree)?;
                    MomentSource::Rule(rule)
                }
            };
            Plan::FreeMoments { source, degree }
        }
        "matrix-fourier" => Plan::MatrixFourier {
            function: ScalarFn::parse(v.raw("function"))?,
            ks: v.list("k", ',', |s| s.parse::<i32>().ok().filter(|k| k.unsigned_abs() <= 64))?,
            size: single_size(v)?,
            samples: samples(v)?,
        },
        "al-identity" => {
            let size = v.positive("N")?;
            if size > MAX_AL_ORDER {
                return Err(guard(format!("Amitsur-Levitsky order {size} above {MAX_AL_ORDER}")));
            }
            let trials = v.positive("trials")?;
            if trials > MAX_TRIALS {
                return Err(guard(format!("{trials} trials above {MAX_TRIALS}")));
            }
            Plan::AlIdentity {
                size,
                trials,
                input: v.path("input"),
                tol: v.positive_f64("tol")?,
            }
        }
        _ => unreachable!("experiment names are checked against the defaults table"),
    })
}

/// Rows of the shuffle-check table: one per pair of nonempty words with
/// total degree at most `cap`, plus one per nonempty word for deconcatenation.
pub fn shuffle_rows(n: usize, cap: usize) -> u64 {
    let n = n as u64;
    let mut rows = 0u64;
    for total in 2..=cap {
        // (total - 1) ways to split the degree, n^total letter choices.
        rows = rows.saturating_add((total as u64 - 1).saturating_mul(n.saturating_pow(total as u32)));
    }
    rows.saturating_add(word_count(n as usize, cap).saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(exp: &str, file: &str, overrides: &[&str]) -> Result<ExperimentConfig, CliError> {
        let ov = overrides
            .iter()
            .map(|s| parse_override(s))
            .collect::<Result<Vec<_>, _>>()?;
        ExperimentConfig::build(exp, parse_config_text(file)?, ov)
    }

    #[test]
    fn config_text_syntax() {
        let m = parse_config_text("# c\n\n a = 1 \nb=x y = z\n").unwrap();
        assert_eq!(m["a"], "1");
        assert_eq!(m["b"], "x y = z");
        assert!(parse_config_text("a = 1\na = 2\n").is_err());
        assert!(parse_config_text("no equals\n").is_err());
        assert!(parse_config_text("bad key = 1\n").is_err());
        assert!(parse_config_text(" = 1\n").is_err());
    }

    #[test]
    fn overrides_win_and_defaults_fill() {
        let c = build("haar-orth", "seed = 4\nsamples = 10\n", &["samples=20"]).unwrap();
        assert_eq!(c.values["samples"], "20");
        assert_eq!(c.values["N"], "4,8,16");
        assert_eq!(c.seed, 4);
        match c.plan {
            Plan::HaarOrth { ref sizes, samples, .. } => {
                assert_eq!(sizes, &[4, 8, 16]);
                assert_eq!(samples, 20);
            }
            ref p => panic!("{p:?}"),
        }
        assert_eq!(c.format, Format::Csv);
        let j = build("bch", "seed = 1\nformat = json\nout = x.json\n", &[]).unwrap();
        assert_eq!(j.format, Format::Json);
        assert_eq!(j.output, Some(PathBuf::from("x.json")));
        assert!(!j.values.contains_key("out"));
    }

    #[test]
    fn rejects_bad_configs() {
        let code = |exp: &str, file: &str| build(exp, file, &[]).unwrap_err().exit_code();
        assert_eq!(code("bch", ""), 1);
        assert_eq!(code("bch", "seed = -1\n"), 1);
        assert_eq!(code("bch", "seed = 1\nexperiment = sig\n"), 1);
        assert_eq!(code("bch", "seed = 1\nq = 3\n"), 1);
        assert_eq!(code("bch", "seed = 1\nn = 1\n"), 1);
        assert_eq!(code("haar-coeff", "seed = 1\nN = 4,8\n"), 1);
        assert_eq!(code("haar-coeff", "seed = 1\nf = 1 : 1 x\n"), 1);
        assert_eq!(code("heis-heat", "seed = 1\nlambdas = \n"), 1);
        assert_eq!(code("sig", "seed = 1\n"), 1);
        assert_eq!(code("free-moments", "seed = 1\nrule = cauchy(2)\n"), 1);
        assert_eq!(code("haar-orth", "seed = 1\nN = 4,128\n"), 2);
        assert_eq!(code("haar-orth", "seed = 1\nsamples = 20000000\n"), 2);
        assert_eq!(code("shuffle-check", "seed = 1\nn = 8\ncap = 6\n"), 2);
        assert_eq!(code("wiener-expsig", "seed = 1\npaths = 100000000\n"), 2);
        assert_eq!(code("free-moments", "seed = 1\ndegree = 17\n"), 2);
    }

    #[test]
    fn shuffle_row_count() {
        // n = 2, cap = 2: pairs (1,1),(1,2),(2,1),(2,2) plus 6 nonempty words.
        assert_eq!(shuffle_rows(2, 2), 4 + 6);
    }
}

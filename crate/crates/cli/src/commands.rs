use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use jacobi_inverse::characterize::materialize;
use jacobi_inverse::factorization::reconstruct_factorization;
use jacobi_inverse::krein::{reconstruct_krein, reconstruct_krein_with_retry};
use jacobi_inverse::{
    characterize, forward, sample, validate_coefficients, BoundaryControl, JacobiCoefficients,
    KreinParameters, ReconstructionResult, ResponseVector, Scalar, ToleranceConfig, Verdict,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, Global, MethodArg};
use crate::error::{exit, CliError};
use crate::files::{self, canonical_json, emit, load, InputDigest};

/// Environment variable naming the tolerance file used when `--tol-file` is absent.
pub const TOLERANCE_ENV: &str = "JACOBI_TOLERANCES";

#[derive(Debug, Serialize)]
struct CommandEcho {
    name: &'static str,
    args: BTreeMap<&'static str, String>,
}

/// Everything a run produced. No field depends on the clock or the
/// environment beyond the inputs, so reruns are byte-identical.
#[derive(Debug, Serialize)]
struct RunReport {
    command: CommandEcho,
    inputs: BTreeMap<&'static str, InputDigest>,
    tolerances: ToleranceConfig,
    outputs: Value,
    residuals: Value,
    diagnostics: Value,
    version: &'static str,
}

struct Context {
    tol: ToleranceConfig,
    inputs: BTreeMap<&'static str, InputDigest>,
}

impl Context {
    fn new(global: &Global) -> Result<Self, CliError> {
        let path = global
            .tol_file
            .clone()
            .or_else(|| std::env::var_os(TOLERANCE_ENV).map(PathBuf::from));
        let mut inputs = BTreeMap::new();
        let tol = match path {
            Some(path) => {
                let loaded = load::<ToleranceConfig>(&path)?;
                inputs.insert("tolerances", loaded.digest);
                loaded.value
            }
            None => ToleranceConfig::default(),
        };
        Ok(Self {
            tol: tol.validate().map_err(CliError::Input)?,
            inputs,
        })
    }

    fn load<T: serde::de::DeserializeOwned>(&mut self, key: &'static str, path: &Path) -> Result<T, CliError> {
        let loaded = files::load(path)?;
        self.inputs.insert(key, loaded.digest);
        Ok(loaded.value)
    }

    fn report(self, command: CommandEcho, outputs: Value, residuals: Value, diagnostics: Value) -> RunReport {
        RunReport {
            command,
            inputs: self.inputs,
            tolerances: self.tol,
            outputs,
            residuals,
            diagnostics,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

fn echo(name: &'static str, args: &[(&'static str, String)]) -> CommandEcho {
    CommandEcho {
        name,
        args: args.iter().cloned().collect(),
    }
}

fn show(path: &Path) -> String {
    path.display().to_string()
}

fn scalar_text(z: Scalar) -> String {
    format!("{},{}", z.re, z.im)
}

/// Runs one subcommand and returns its exit code.
pub fn run(command: &Command, global: &Global) -> Result<u8, CliError> {
    let mut ctx = Context::new(global)?;
    match command {
        Command::Gen {
            depth,
            seed,
            profile,
            out,
        } => {
            let c = sample::random_coefficients(*depth, *seed, *profile).map_err(CliError::Input)?;
            emit(out.as_ref(), &canonical_json(&c))?;
            Ok(exit::SUCCESS)
        }
        Command::Simulate {
            coeffs,
            control,
            steps,
            out,
        } => {
            let c: JacobiCoefficients = ctx.load("coeffs", coeffs)?;
            let f: BoundaryControl = ctx.load("control", control)?;
            let u = forward::simulate(&c, &f, *steps).map_err(CliError::computing)?;
            emit(out.as_ref(), &files::wavefield_csv(&u))?;
            Ok(exit::SUCCESS)
        }
        Command::Response { coeffs, steps, out } => {
            let c: JacobiCoefficients = ctx.load("coeffs", coeffs)?;
            let r = forward::response_vector(&c, *steps).map_err(CliError::computing)?;
            emit(out.as_ref(), &canonical_json(&r))?;
            Ok(exit::SUCCESS)
        }
        Command::Reconstruct {
            response,
            method,
            alpha,
            beta,
            out,
        } => {
            let r: ResponseVector = ctx.load("response", response)?;
            let seed = match (alpha, beta) {
                (Some(a), Some(b)) => Some(KreinParameters::new(*a, *b).map_err(CliError::Input)?),
                _ => None,
            };
            let mut args = vec![("response", show(response)), ("method", method.name().into())];
            if let Some(p) = seed {
                args.push(("alpha", scalar_text(p.alpha)));
                args.push(("beta", scalar_text(p.beta)));
            }
            let runs = reconstruct(&r, r.window(), *method, seed.as_ref(), &ctx.tol)?;
            let agreement = runs.agreement();
            let diagnostics = data_diagnostics(&r, &ctx.tol)?;
            let status = runs.status(&ctx.tol);
            let report = ctx.report(
                echo("reconstruct", &args),
                runs.outputs(),
                json!({ "method_agreement": agreement }),
                diagnostics,
            );
            emit(out.as_ref(), &canonical_json(&report))?;
            Ok(status)
        }
        Command::Characterize { response, tol, out } => {
            let r: ResponseVector = ctx.load("response", response)?;
            if let Some(threshold) = tol {
                ctx.tol.singular_threshold = *threshold;
                ctx.tol = ctx.tol.validate().map_err(CliError::Input)?;
            }
            let report = match characterize(r.values(), &ctx.tol) {
                Ok(report) => report,
                Err(e @ jacobi_inverse::Error::ZeroLeadingEntry) => {
                    eprintln!("jacobi: not a response vector: {e}");
                    return Ok(exit::CHARACTERIZATION);
                }
                Err(e) => return Err(CliError::computing(e)),
            };
            let status = match report.verdict {
                Verdict::Valid => exit::SUCCESS,
                Verdict::Invalid => exit::CHARACTERIZATION,
            };
            let mut args = vec![("response", show(response))];
            if let Some(threshold) = tol {
                args.push(("tol", threshold.to_string()));
            }
            let run = ctx.report(
                echo("characterize", &args),
                json!({ "characterization": report }),
                Value::Null,
                Value::Null,
            );
            emit(out.as_ref(), &canonical_json(&run))?;
            Ok(status)
        }
        Command::Roundtrip {
            coeffs,
            steps,
            method,
            out,
        } => {
            let c: JacobiCoefficients = ctx.load("coeffs", coeffs)?;
            let c = validate_coefficients(c, &ctx.tol).map_err(CliError::Input)?;
            let r = forward::response_vector(&c, *steps).map_err(CliError::computing)?;
            let runs = reconstruct(&r, *steps, *method, None, &ctx.tol)?;
            let mut residuals = serde_json::Map::new();
            for (name, rec) in runs.iter() {
                residuals.insert(
                    name.into(),
                    json!({
                        "coefficient_error": coefficient_error(rec, &c),
                        "response_residual": response_residual(rec, &r)?,
                    }),
                );
            }
            residuals.insert("method_agreement".into(), json!(runs.agreement()));
            let diagnostics = data_diagnostics(&r, &ctx.tol)?;
            let status = runs.status(&ctx.tol);
            let mut outputs = runs.outputs();
            outputs["response"] = serde_json::to_value(&r).expect("response serializes");
            let report = ctx.report(
                echo(
                    "roundtrip",
                    &[
                        ("coeffs", show(coeffs)),
                        ("steps", steps.to_string()),
                        ("method", method.name().into()),
                    ],
                ),
                outputs,
                Value::Object(residuals),
                diagnostics,
            );
            emit(out.as_ref(), &canonical_json(&report))?;
            Ok(status)
        }
    }
}

struct Runs {
    factorization: Option<ReconstructionResult>,
    krein: Option<ReconstructionResult>,
}

impl Runs {
    fn iter(&self) -> impl Iterator<Item = (&'static str, &ReconstructionResult)> {
        [("factorization", &self.factorization), ("krein", &self.krein)]
            .into_iter()
            .filter_map(|(name, rec)| rec.as_ref().map(|rec| (name, rec)))
    }

    fn agreement(&self) -> Option<f64> {
        match (&self.factorization, &self.krein) {
            (Some(f), Some(k)) => Some(f.max_difference(k)),
            _ => None,
        }
    }

    /// Exit code 3 when the two methods disagree beyond `roundtrip_tol`.
    fn status(&self, tol: &ToleranceConfig) -> u8 {
        match self.agreement() {
            Some(d) if !(d <= tol.roundtrip_tol) => {
                eprintln!("jacobi: methods disagree by {d:e} (roundtrip_tol {:e})", tol.roundtrip_tol);
                exit::NUMERICAL
            }
            _ => exit::SUCCESS,
        }
    }

    fn outputs(&self) -> Value {
        let map = self
            .iter()
            .map(|(name, rec)| (name.to_string(), serde_json::to_value(rec).expect("results serialize")))
            .collect();
        Value::Object(map)
    }
}

fn reconstruct(
    r: &ResponseVector,
    depth: usize,
    method: MethodArg,
    seed: Option<&KreinParameters>,
    tol: &ToleranceConfig,
) -> Result<Runs, CliError> {
    let factorization = method
        .factorization()
        .then(|| reconstruct_factorization(r, depth, tol))
        .transpose()
        .map_err(CliError::computing)?;
    let krein = method
        .krein()
        .then(|| match seed {
            Some(p) => reconstruct_krein(r, depth, p, tol),
            None => reconstruct_krein_with_retry(r, depth, tol),
        })
        .transpose()
        .map_err(CliError::computing)?;
    Ok(Runs {
        factorization,
        krein,
    })
}

/// Conditioning of the data itself: the relative pivots of the nested blocks.
fn data_diagnostics(r: &ResponseVector, tol: &ToleranceConfig) -> Result<Value, CliError> {
    let report = characterize(r.values(), tol).map_err(CliError::computing)?;
    Ok(json!({
        "block_determinants": report.block_determinants,
        "relative_pivots": report.relative_pivots,
    }))
}

/// Largest error against the true coefficients: absolute for `a_0` and `b_k`,
/// relative for `(a_k)^2`.
fn coefficient_error(rec: &ReconstructionResult, c: &JacobiCoefficients) -> f64 {
    let mut worst = (rec.a0 - c.a(0)).norm();
    for k in 1..rec.depth() {
        let sq = c.a(k) * c.a(k);
        worst = worst
            .max((rec.b[k - 1] - c.b(k)).norm())
            .max((rec.a_sq[k - 1] - sq).norm() / sq.norm());
    }
    worst
}

/// `max |r - r'|` where `r'` is the response of the reconstruction realized
/// with principal square roots.
fn response_residual(rec: &ReconstructionResult, r: &ResponseVector) -> Result<f64, CliError> {
    let realized = materialize(rec, &[]).map_err(CliError::computing)?;
    let again = forward::response_vector(&realized, r.window()).map_err(CliError::computing)?;
    Ok(r.values()
        .iter()
        .zip(again.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

//! `curlspec` command-line front end.
//!
//! Every subcommand takes exactly one manifold source (`--basis`, `--n`,
//! `--angles` or `--matrices`), writes one report to stdout and exits with
//!
//! * 0 on success,
//! * 2 on invalid input,
//! * 3 when a numerical check fails (rounding residual, identity mismatch),
//! * 4 when group closure hits its cap.
//!
//! Failures print a single JSON line `{"error": .., "message": .., "exit_code": ..}`
//! to stderr.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use curlspec::analysis::{
    check_lower_bound, counting_identity_check_torus, eta_partial, weyl_fit, zeta_at_zero, zeta_partial,
    BoundKind,
};
use curlspec::sphere::{sphere_spectrum, SphereParams};
use curlspec::spaceform::{
    asymmetry_certificate, auxiliary_G, poincare_F, spectrum_from_series, GroupInput, IsometryGroup, SeriesConfig,
    DEFAULT_CLOSURE_CAP, DEFAULT_ORDER,
};
use curlspec::spectrum::SpectrumJson;
use curlspec::torus::{torus_spectrum, EnumerationConfig, LatticeBasis};
use curlspec::{symmetry_defect, Error, Spectrum};

#[derive(Parser, Debug)]
#[command(name = "curlspec", version, about = "Exact curl spectra of tori, spheres and spherical space forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum of a flat torus ℝⁿ/Γ.
    Torus(Job),
    /// Spectrum of the round unit sphere Sⁿ.
    Sphere(Job),
    /// Spectrum of a spherical space form Γ\S³.
    Spaceform(Job),
    /// Counting functions against the leading Weyl term.
    Weyl(Job),
    /// Partial ζ sum (with --s) and ζ(0).
    Zeta(Job),
    /// Partial η sum and the symmetry defect.
    Eta(Job),
    /// Curvature lower bound on |λ|.
    Bounds(Job),
    /// Independent consistency check for the chosen manifold.
    Crosscheck(Job),
}

#[derive(Args, Debug)]
struct Job {
    /// Sphere dimension.
    #[arg(long)]
    n: Option<u32>,
    /// Lattice basis: a JSON file, inline JSON, or `identity<n>`.
    #[arg(long)]
    basis: Option<String>,
    /// Cyclic group ⟨R(2πp₁/q, 2πp₂/q)⟩ written `q:p1,p2`.
    #[arg(long)]
    angles: Option<String>,
    /// Group JSON: a file or inline JSON.
    #[arg(long)]
    matrices: Option<String>,
    /// Truncation index for spheres and space forms.
    #[arg(long)]
    kmax: Option<usize>,
    /// Truncation in λ.
    #[arg(long)]
    lmax: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, default_value = "curvature-operator")]
    kind: String,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Starting working precision for space-form series.
    #[arg(long, default_value_t = 60)]
    precision_digits: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Source {
    Torus(LatticeBasis),
    Sphere(u32),
    Spaceform(IsometryGroup),
}

struct Failure {
    kind: &'static str,
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (kind, code) = match &e {
            Error::Residual { .. } => ("residual", 3),
            Error::NegativeCoefficient { .. } => ("negative-coefficient", 3),
            Error::CountingMismatch { .. } => ("counting-mismatch", 3),
            Error::ClosureCap { .. } => ("closure-cap", 4),
            _ => ("validation", 2),
        };
        Failure { kind, message: e.to_string(), code }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { kind: "validation", message: message.into(), code: 2 }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read_json_arg(arg: &str) -> Outcome<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| invalid(format!("cannot read {arg}: {e}")))
}

fn parse_angles(text: &str) -> Outcome<GroupInput> {
    let bad = || invalid(format!("--angles expects q:p1,p2, got {text:?}"));
    let (q, pair) = text.split_once(':').ok_or_else(bad)?;
    let (p1, p2) = pair.split_once(',').ok_or_else(bad)?;
    let q: u64 = q.trim().parse().map_err(|_| bad())?;
    let p1: i64 = p1.trim().parse().map_err(|_| bad())?;
    let p2: i64 = p2.trim().parse().map_err(|_| bad())?;
    Ok(GroupInput::Angles { q, pairs: vec![[p1, p2]] })
}

impl Job {
    fn source(&self) -> Outcome<Source> {
        let given =
            [self.n.is_some(), self.basis.is_some(), self.angles.is_some(), self.matrices.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(invalid("exactly one of --n, --basis, --angles, --matrices is required"));
        }
        if let Some(n) = self.n {
            return Ok(Source::Sphere(n));
        }
        if let Some(b) = &self.basis {
            let basis = match b.strip_prefix("identity") {
                Some(dim) if !dim.is_empty() && dim.chars().all(|c| c.is_ascii_digit()) => {
                    let n: usize = dim.parse().map_err(|_| invalid(format!("bad basis {b:?}")))?;
                    LatticeBasis::identity(n)?
                }
                _ => LatticeBasis::from_json_str(&read_json_arg(b)?)?,
            };
            return Ok(Source::Torus(basis));
        }
        let input = match (&self.angles, &self.matrices) {
            (Some(a), _) => parse_angles(a)?,
            (_, Some(m)) => GroupInput::from_json_str(&read_json_arg(m)?)?,
            _ => unreachable!("one source is present"),
        };
        Ok(Source::Spaceform(input.build(DEFAULT_CLOSURE_CAP)?))
    }

    fn series_config(&self) -> Outcome<SeriesConfig> {
        if self.precision_digits < 16 {
            return Err(invalid("--precision-digits must be at least 16"));
        }
        Ok(SeriesConfig { digits: self.precision_digits, ..SeriesConfig::default() })
    }

    /// Truncation index for integer spectra `±(offset + k)`.
    fn k_max(&self, offset: u32, default: Option<usize>) -> Outcome<usize> {
        match (self.kmax, self.lmax) {
            (Some(k), _) => Ok(k),
            (None, Some(l)) => {
                if !(l >= f64::from(offset)) {
                    return Err(invalid(format!("--lmax must be at least {offset}")));
                }
                Ok((l.floor() as usize) - offset as usize)
            }
            (None, None) => default.ok_or_else(|| invalid("--kmax or --lmax is required")),
        }
    }

    fn lambda_max(&self) -> Outcome<f64> {
        match self.lmax {
            Some(l) if l.is_finite() && l > 0.0 => Ok(l),
            Some(l) => Err(invalid(format!("--lmax must be positive, got {l}"))),
            None => Err(invalid("--lmax is required for tori")),
        }
    }

    fn spectrum(&self, source: &Source) -> Outcome<Spectrum> {
        Ok(match source {
            Source::Torus(b) => torus_spectrum(b, self.lambda_max()?, &EnumerationConfig::default())?,
            Source::Sphere(n) => {
                let offset = n.checked_add(1).ok_or_else(|| invalid("dimension too large"))? / 2;
                sphere_spectrum(SphereParams::new(*n, self.k_max(offset, None)? as u64)?)?
            }
            Source::Spaceform(g) => {
                let series = poincare_F(g, self.k_max(2, Some(DEFAULT_ORDER))?, &self.series_config()?)?;
                spectrum_from_series(g, &series)?
            }
        })
    }

    fn json_only(&self) -> Outcome<()> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(invalid("this command only supports --format json")),
        }
    }
}

#[derive(Serialize)]
struct SpaceformReport {
    #[serde(flatten)]
    spectrum: SpectrumJson,
    group_order: usize,
    symmetric: bool,
    residual: f64,
    precision_digits: u32,
}

#[derive(Serialize)]
struct ZetaReport {
    zeta_zero: curlspec::analysis::ZetaZero,
    #[serde(skip_serializing_if = "Option::is_none")]
    partial: Option<curlspec::analysis::ZetaPartial>,
}

#[derive(Serialize)]
struct EtaReport {
    s: f64,
    eta_partial: f64,
    symmetric: bool,
    defect: Vec<curlspec::spectrum::SymmetryDefect>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<curlspec::spaceform::AsymmetryCertificate>,
}

#[derive(Serialize)]
struct CrosscheckReport {
    check: &'static str,
    pass: bool,
    detail: serde_json::Value,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn run(cli: Cli) -> Outcome<String> {
    match cli.command {
        Command::Torus(job) => {
            let Source::Torus(basis) = job.source()? else {
                return Err(invalid("torus needs --basis"));
            };
            let spectrum = job.spectrum(&Source::Torus(basis))?;
            Ok(match job.format {
                Format::Json => spectrum.to_json_string() + "\n",
                Format::Csv => spectrum.to_csv(),
            })
        }
        Command::Sphere(job) => {
            let source @ Source::Sphere(_) = job.source()? else {
                return Err(invalid("sphere needs --n"));
            };
            let spectrum = job.spectrum(&source)?;
            Ok(match job.format {
                Format::Json => spectrum.to_json_string() + "\n",
                Format::Csv => spectrum.to_csv(),
            })
        }
        Command::Spaceform(job) => {
            let Source::Spaceform(group) = job.source()? else {
                return Err(invalid("spaceform needs --angles or --matrices"));
            };
            let series = poincare_F(&group, job.k_max(2, Some(DEFAULT_ORDER))?, &job.series_config()?)?;
            let spectrum = spectrum_from_series(&group, &series)?;
            if job.format == Format::Csv {
                return Ok(spectrum.to_csv());
            }
            Ok(to_json(&SpaceformReport {
                spectrum: spectrum.to_json(),
                group_order: group.order(),
                symmetric: series.plus == series.minus,
                residual: series.residual,
                precision_digits: series.digits,
            }))
        }
        Command::Weyl(job) => {
            let spectrum = job.spectrum(&job.source()?)?;
            let report = weyl_fit(&spectrum)?;
            Ok(match job.format {
                Format::Json => to_json(&report),
                Format::Csv => report.to_csv(),
            })
        }
        Command::Zeta(job) => {
            job.json_only()?;
            let source = job.source()?;
            let partial = match job.s {
                Some(s) => Some(zeta_partial(&job.spectrum(&source)?, s)?),
                None => None,
            };
            let descriptor = match &source {
                Source::Torus(b) => curlspec::torus::torus_descriptor(b)?,
                Source::Sphere(n) => curlspec::sphere::sphere_descriptor(*n)?,
                Source::Spaceform(g) => curlspec::spaceform::spaceform_descriptor(g)?,
            };
            Ok(to_json(&ZetaReport { zeta_zero: zeta_at_zero(&descriptor), partial }))
        }
        Command::Eta(job) => {
            job.json_only()?;
            let s = job.s.ok_or_else(|| invalid("eta needs --s"))?;
            let source = job.source()?;
            let spectrum = job.spectrum(&source)?;
            let defect = symmetry_defect(&spectrum);
            let certificate = match &source {
                Source::Spaceform(g) => {
                    Some(asymmetry_certificate(g, job.k_max(2, Some(DEFAULT_ORDER))?, &job.series_config()?)?)
                }
                _ => None,
            };
            Ok(to_json(&EtaReport {
                s,
                eta_partial: eta_partial(&spectrum, s),
                symmetric: defect.is_empty(),
                defect,
                certificate,
            }))
        }
        Command::Bounds(job) => {
            job.json_only()?;
            let kind: BoundKind = job.kind.parse()?;
            let spectrum = job.spectrum(&job.source()?)?;
            Ok(to_json(&check_lower_bound(&spectrum, job.kappa, kind)?))
        }
        Command::Crosscheck(job) => {
            job.json_only()?;
            let report = crosscheck(&job)?;
            if report.pass {
                Ok(to_json(&report))
            } else {
                Err(Failure {
                    kind: "crosscheck",
                    message: format!("{} failed: {}", report.check, report.detail),
                    code: 3,
                })
            }
        }
    }
}

fn crosscheck(job: &Job) -> Outcome<CrosscheckReport> {
    match job.source()? {
        Source::Torus(basis) => {
            let lambda = job.lambda_max()?;
            let r = counting_identity_check_torus(&basis, lambda, &EnumerationConfig::default())?;
            Ok(CrosscheckReport {
                check: "counting-identity",
                pass: r.lhs == r.rhs,
                detail: serde_json::json!({ "lambda": lambda, "lhs": r.lhs, "rhs": r.rhs }),
            })
        }
        Source::Sphere(n) => {
            if n != 3 {
                return Err(invalid("the sphere crosscheck compares with the trivial space form and needs --n 3"));
            }
            let k = job.k_max(2, None)?;
            let sphere = sphere_spectrum(SphereParams::new(3, k as u64)?)?;
            let trivial = IsometryGroup::trivial();
            let form = spectrum_from_series(&trivial, &poincare_F(&trivial, k, &job.series_config()?)?)?;
            let pass = sphere.lines() == form.lines();
            Ok(CrosscheckReport {
                check: "trivial-group",
                pass,
                detail: serde_json::json!({ "kmax": k, "lines": sphere.lines().len() }),
            })
        }
        Source::Spaceform(group) => {
            let k = job.k_max(2, Some(DEFAULT_ORDER))?;
            let cfg = job.series_config()?;
            let f = poincare_F(&group, k, &cfg)?;
            let g = auxiliary_G(&group, k, &cfg)?;
            let shifted = |a: &[u64], b: &[u64], i: usize| a[i] as i64 + if i >= 2 { b[i - 2] as i64 } else { 0 };
            let first_bad = (0..=k)
                .find(|&i| shifted(&f.plus, &f.minus, i) != g.plus[i] || shifted(&f.minus, &f.plus, i) != g.minus[i]);
            Ok(CrosscheckReport {
                check: "poincare-identity",
                pass: first_bad.is_none(),
                detail: serde_json::json!({
                    "kmax": k,
                    "group_order": group.order(),
                    "first_mismatch": first_bad,
                    "residual": f.residual.max(g.residual),
                }),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            report(&invalid(first));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            report(&f);
            ExitCode::from(f.code)
        }
    }
}

fn report(f: &Failure) {
    let record = serde_json::json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
    eprintln!("{record}");
}

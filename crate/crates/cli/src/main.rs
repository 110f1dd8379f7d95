use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use torstab_core::{
    analyze, classify_support, def_weights_surface, hirzebruch, hj_resolve, quotient_fan,
    render_svg, standard_fan, xhat2, Classification, ConeCertificate, Error, Fan2D, FanFile,
    LatticeVector, QuotientSpec, Splitting, StandardFanSpec, SupportSet, WeightSystem,
};

#[derive(Parser)]
#[command(
    name = "torstab",
    version,
    about = "Deformations and stability of toric surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: weights, roots, stability strata and verdicts.
    Analyze {
        fan: PathBuf,
        /// Basis of the fixed sublattice N_f, e.g. "0,1" or "1,0;0,1".
        #[arg(long)]
        splitting: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a fan file for a named surface.
    Construct {
        /// p2 | p1xp1 | hirzebruch:A | quotient-p1p1:Q | quotient-fa:A,P | xhat2[:A,P]
        spec: String,
        /// Replace the fan by its minimal resolution.
        #[arg(long)]
        resolve: bool,
        /// Blow up the cone (rho_i, rho_i+1), indexed in the fan before any blow-up.
        #[arg(long = "blowup", value_name = "I")]
        blowups: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Hilbert-Mumford classification of one support set.
    Classify {
        fan: PathBuf,
        /// Weight indices (0-based, as in the report) or labels, e.g. "1,2" or "e1*,-e1*".
        #[arg(long)]
        support: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Render the fan as SVG.
    Svg {
        fan: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Invalid(String),
    Singular(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotSmooth(_) => Failure::Singular(format!(
                "{e}; run `torstab construct ... --resolve` or resolve the fan first"
            )),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_fan(path: &Path) -> CliResult<Fan2D> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let file = FanFile::from_json(&text)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    file.to_surface_fan()
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// Writes through a sibling temporary file so that no partial output survives an error.
fn emit(output: Option<&Path>, content: &str) -> CliResult<()> {
    let Some(path) = output else {
        print!("{content}");
        return Ok(());
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".part");
    let tmp = PathBuf::from(tmp);
    let io = |e: std::io::Error| Failure::Invalid(format!("cannot write {}: {e}", path.display()));
    fs::write(&tmp, content).map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

fn parse_ints(s: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Invalid(format!("not an integer: {t:?}")))
        })
        .collect()
}

fn parse_splitting(s: &str) -> CliResult<Splitting> {
    let fixed = s
        .split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_ints(t).map(|c| LatticeVector::from_i64s(&c)))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Splitting::new(fixed, 2)?)
}

fn parse_support(s: &str, ws: &WeightSystem) -> CliResult<SupportSet> {
    let labels = ws.labels();
    let mut indices = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let index = match item.parse::<usize>() {
            Ok(i) if i < ws.len() => i,
            Ok(i) => {
                return Err(Failure::Invalid(format!(
                    "weight index {i} out of range (the fan has {} weights)",
                    ws.len()
                )))
            }
            Err(_) => labels.iter().position(|l| l == item).ok_or_else(|| {
                Failure::Invalid(format!(
                    "{item:?} is neither an index nor a weight label (weights: {})",
                    labels.join(", ")
                ))
            })?,
        };
        indices.push(index);
    }
    Ok(SupportSet::new(indices))
}

fn parse_pair(args: &str) -> CliResult<(u32, u32)> {
    let parts: Vec<&str> = args.split(',').collect();
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| Failure::Invalid(format!("bad parameter {t:?}")))
    };
    match parts.as_slice() {
        [a, p] => Ok((num(a)?, num(p)?)),
        _ => Err(Failure::Invalid(format!(
            "expected two parameters A,P, got {args:?}"
        ))),
    }
}

fn build(spec: &str) -> CliResult<Fan2D> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let bad = || Failure::Invalid(format!("unrecognized fan spec {spec:?}"));
    let number = |a: Option<&str>| -> CliResult<u32> {
        a.ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| Failure::Invalid(format!("bad parameter in {spec:?}")))
    };
    let fan = match name {
        "p2" if args.is_none() => standard_fan(StandardFanSpec::ProjectivePlane)?,
        "p1xp1" if args.is_none() => standard_fan(StandardFanSpec::P1xP1)?,
        "hirzebruch" => {
            let a = number(args)?;
            if a == 0 {
                hirzebruch(0)
            } else {
                standard_fan(StandardFanSpec::Hirzebruch { a })?
            }
        }
        "quotient-p1p1" => quotient_fan(QuotientSpec::DiagonalP1xP1 { q: number(args)? })?,
        "quotient-fa" => {
            let (a, p) = parse_pair(args.ok_or_else(bad)?)?;
            quotient_fan(QuotientSpec::HirzebruchQuotient { a, p })?
        }
        "xhat2" => {
            let (a, p) = match args {
                Some(args) => parse_pair(args)?,
                None => (2, 3),
            };
            xhat2(a, p)?
        }
        _ => return Err(bad()),
    };
    Ok(fan)
}

fn construct(spec: &str, resolve: bool, blowups: &[usize]) -> CliResult<Fan2D> {
    let mut fan = build(spec)?;
    if resolve {
        fan = hj_resolve(&fan);
    }
    let cones: Vec<(LatticeVector, LatticeVector)> = blowups
        .iter()
        .map(|&i| {
            if i >= fan.len() {
                return Err(Failure::Invalid(format!(
                    "cone index {i} out of range (the fan has {} cones)",
                    fan.len()
                )));
            }
            Ok((fan.ray(i).clone(), fan.ray(i + 1).clone()))
        })
        .collect::<CliResult<_>>()?;
    for (k, (a, b)) in cones.iter().enumerate() {
        let i = (0..fan.len())
            .find(|&j| fan.ray(j) == a && fan.ray(j + 1) == b)
            .ok_or_else(|| {
                Failure::Invalid(format!("cone index {} was already blown up", blowups[k]))
            })?;
        fan = fan.blow_up(i)?;
    }
    Ok(fan)
}

fn describe(c: &Classification, ws: &WeightSystem) -> String {
    let labels = ws.labels();
    let name = |s: &SupportSet| {
        let parts: Vec<&str> = s.indices().iter().map(|&i| labels[i].as_str()).collect();
        format!("{{{}}}", parts.join(", "))
    };
    let mut out = String::new();
    let _ = writeln!(out, "{}", c.status());
    match c {
        Classification::Polystable { balanced: None, .. } => {
            let _ = writeln!(out, "  empty support (the origin)");
        }
        Classification::Polystable {
            balanced: Some(b),
            subspace,
        } => {
            let coeffs: Vec<String> = b
                .relation
                .coefficients
                .iter()
                .map(|a| a.to_string())
                .collect();
            let _ = writeln!(
                out,
                "  balanced: {} with coefficients ({})",
                name(&b.subfamily),
                coeffs.join(", ")
            );
            if let Some(ConeCertificate::Subspace { .. }) = subspace {
                let _ = writeln!(out, "  the positive span of the support is a subspace");
            }
        }
        Classification::StrictlySemistable {
            balanced,
            separating,
        } => {
            let _ = writeln!(out, "  balanced subfamily: {}", name(&balanced.subfamily));
            let _ = writeln!(out, "  separating p = {separating}");
        }
        Classification::Unstable { destabilizing } => {
            let _ = writeln!(out, "  destabilizing p = {destabilizing}");
        }
    }
    out
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze {
            fan,
            splitting,
            format,
        } => {
            let fan = read_fan(&fan)?;
            let split = splitting.as_deref().map(parse_splitting).transpose()?;
            let report = analyze(&fan, split.as_ref())?;
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            emit(None, &text)
        }
        Command::Construct {
            spec,
            resolve,
            blowups,
            output,
        } => {
            let fan = construct(&spec, resolve, &blowups)?;
            emit(output.as_deref(), &(fan.to_file().to_json() + "\n"))
        }
        Command::Classify {
            fan,
            support,
            format,
        } => {
            let fan = read_fan(&fan)?;
            let ws = def_weights_surface(&fan)?;
            let support = parse_support(&support, &ws)?;
            let c = classify_support(&ws, &support)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&c).expect("serializable") + "\n",
                Format::Text => describe(&c, &ws),
            };
            emit(None, &text)
        }
        Command::Svg { fan, output } => {
            let fan = read_fan(&fan)?;
            emit(output.as_deref(), &render_svg(&fan))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Singular(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_accepts_indices_and_labels() {
        let fan = construct("p1xp1", false, &[0, 1, 2, 3]).ok().unwrap();
        let ws = def_weights_surface(&fan).unwrap();
        let by_label = parse_support("e1*, -e1*", &ws).ok().unwrap();
        let by_index = parse_support("3,0", &ws).ok().unwrap();
        assert_eq!(by_label, by_index);
        assert!(parse_support("4", &ws).is_err());
        assert!(parse_support("x", &ws).is_err());
    }

    #[test]
    fn splitting_syntax() {
        let s = parse_splitting("0,1").ok().unwrap();
        assert_eq!(s.fixed(), &[LatticeVector::from_i64s(&[0, 1])]);
        assert!(parse_splitting("0,2").is_err());
        assert!(parse_splitting("0,1,1").is_err());
        assert_eq!(parse_splitting("").ok().unwrap().fixed().len(), 0);
    }

    #[test]
    fn specs() {
        assert_eq!(build("hirzebruch:0").ok().unwrap(), hirzebruch(0));
        assert_eq!(build("xhat2").ok().unwrap(), xhat2(2, 3).unwrap());
        assert!(build("quotient-fa:2").is_err());
        assert!(build("p2:1").is_err());
        assert!(construct("p2", false, &[0, 0]).is_err());
    }
}

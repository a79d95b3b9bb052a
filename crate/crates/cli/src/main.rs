use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use hessbasis::basis::{
    classical_t, dihedral_basis, enumerate_candidate_sets, product_basis, CandidateSet,
    Certificate, Certifier,
};
use hessbasis::decompose::{decompose, symmetrize, DECOMPOSITION_SCHEMA};
use hessbasis::groups::{DEFAULT_ELEMENT_BOUND, LONG_ELEMENT_BOUND};
use hessbasis::invariants::{InvariantRepr, InvariantSystem, RegularVector};
use hessbasis::molien::{
    closed_form_ratio, cycle_index_molien, default_truncation, invariant_series_from_degrees,
    molien_series, product_ratio, ratio_polynomial,
};
use hessbasis::selfcheck::{run_selfcheck, Profile, SelfcheckOptions};
use hessbasis::{
    Character, CycloScalar, Family, Fixtures, GroupSpec, GroupType, RatioPolynomial,
    ReflectionGroup, SymTensorPoly, TruncSeries,
};

const MOLIEN_SCHEMA: &str = "hessbasis.molien/1";
const INVARIANTS_SCHEMA: &str = "hessbasis.invariants/1";
const REGULAR_SCHEMA: &str = "hessbasis.regular/1";
const ORDER_SCHEMA: &str = "hessbasis.order/1";
const CANDIDATES_SCHEMA: &str = "hessbasis.candidates/1";

/// Hessian bases for equivariant symmetric 2-tensors of finite reflection groups.
#[derive(Parser)]
#[command(name = "hessbasis", version)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a group or report its order.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Molien series and the Sym^2 ratio polynomial.
    Molien(MolienArgs),
    /// Basic invariants of a group.
    Invariants {
        #[arg(long)]
        group: String,
        /// Expand orbit-sum invariants into explicit polynomials.
        #[arg(long)]
        expand: bool,
    },
    /// Check whether a point avoids every reflecting hyperplane.
    RegularCheck {
        #[arg(long)]
        group: String,
        #[arg(long)]
        point: String,
    },
    /// Enumerate or certify candidate Hessian bases.
    #[command(subcommand)]
    Basis(BasisCmd),
    /// Express an equivariant tensor in a Hessian basis.
    Decompose {
        #[arg(long)]
        group: String,
        /// SymTensorPoly JSON file.
        #[arg(long)]
        tensor: PathBuf,
        /// `auto` or a set such as "r1,r1*r1,r2".
        #[arg(long, default_value = "auto")]
        basis: String,
        /// Average the tensor over the group first.
        #[arg(long)]
        symmetrize: bool,
    },
    /// Reproduce the published tables.
    Selfcheck {
        #[arg(long, default_value = "quick")]
        profile: Profile,
        /// Comma-separated section names (dihedral, classical, product, decompose, H3, ...).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// Replacement fixture file.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Generators, plus the census when the group is small enough.
    Build {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_census: bool,
    },
    Order {
        #[arg(long = "type")]
        kind: String,
    },
}

#[derive(Args)]
struct MolienArgs {
    /// Group spec such as "H3" or "I2:5", or a group JSON file.
    #[arg(long)]
    group: String,
    #[arg(long, default_value = "sym2")]
    tensor: Character,
    #[arg(long, default_value = "census")]
    method: String,
    #[arg(long)]
    trunc: Option<usize>,
    /// Print the ratio polynomial instead of the series.
    #[arg(long)]
    ratio: bool,
}

#[derive(Subcommand)]
enum BasisCmd {
    /// Candidate sets matching the ratio polynomial.
    Enumerate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        certify_all: bool,
        #[arg(long)]
        point: Option<String>,
        /// Also allow sets that omit some basic invariant.
        #[arg(long)]
        allow_missing_singles: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Determinant certificate for one set.
    Certify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("HESSBASIS_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: HESSBASIS_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        println!("{}", text());
    }
    Ok(())
}

fn write_out(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// A spec string, or a group JSON file written by `group build`.
fn load_group(s: &str) -> anyhow::Result<ReflectionGroup> {
    let p = Path::new(s);
    if p.extension().is_some_and(|e| e == "json") && p.exists() {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {s}"))?;
        return Ok(ReflectionGroup::from_json(&text)?);
    }
    Ok(hessbasis::build_generators(&GroupSpec::parse(s)?)?)
}

fn parse_point(s: &str) -> anyhow::Result<Vec<CycloScalar>> {
    s.split(',')
        .map(|t| {
            CycloScalar::parse_expr(t.trim(), 1).with_context(|| format!("bad coordinate '{t}'"))
        })
        .collect()
}

fn point_or_default(
    sys: &InvariantSystem,
    point: &Option<String>,
) -> anyhow::Result<RegularVector> {
    Ok(match point {
        Some(p) => sys.regular_vector(parse_point(p)?)?,
        None => sys.default_regular_vector()?,
    })
}

fn series_strings(s: &TruncSeries) -> Vec<String> {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}

fn render_series(s: &TruncSeries) -> String {
    let mut parts = Vec::new();
    for (k, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = c.to_string();
        parts.push(match (k, c.as_str()) {
            (0, _) => c,
            (1, "1") => "t".into(),
            (_, "1") => format!("t^{k}"),
            (1, _) => format!("{c}*t"),
            _ => format!("{c}*t^{k}"),
        });
    }
    parts.push(format!("O(t^{})", s.coeffs().len()));
    parts.join(" + ")
}

/// Ratio from the closed forms where available, else from the census, else
/// the published table.
fn best_ratio(spec: &GroupSpec) -> anyhow::Result<(RatioPolynomial, &'static str)> {
    if let Some((f, n)) = Family::of(&spec.kind) {
        return Ok((closed_form_ratio(f, n)?, "closed form"));
    }
    match &spec.kind {
        GroupType::Product(..) => {
            let (a, b) = (&spec.factors[0], &spec.factors[1]);
            let ((ra, _), (rb, _)) = (best_ratio(a)?, best_ratio(b)?);
            Ok((
                product_ratio(&ra, &a.degrees, &rb, &b.degrees),
                "product identity",
            ))
        }
        GroupType::Exceptional(_) if spec.order() <= DEFAULT_ELEMENT_BOUND => Ok((
            hessbasis::molien::census_ratio(spec, DEFAULT_ELEMENT_BOUND)?,
            "census",
        )),
        GroupType::Exceptional(e) => Ok((
            RatioPolynomial::new(Fixtures::builtin().get(*e)?.ratio_coeffs()),
            "published table",
        )),
        _ => bail!("no ratio source for {}", spec.name()),
    }
}

fn auto_basis(spec: &GroupSpec) -> anyhow::Result<CandidateSet> {
    match &spec.kind {
        GroupType::Dihedral(_) => Ok(dihedral_basis()),
        GroupType::Product(..) => {
            let (a, b) = (&spec.factors[0], &spec.factors[1]);
            Ok(product_basis(
                &auto_basis(a)?,
                a.rank,
                &auto_basis(b)?,
                b.rank,
            ))
        }
        kind => match Family::of(kind) {
            Some((f, n)) => Ok(classical_t(f, n, None)?),
            None => bail!("no automatic basis for {}; pass --basis", spec.name()),
        },
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let json = cli.json;
    match &cli.cmd {
        Cmd::Group(GroupCmd::Build {
            kind,
            out,
            no_census,
        }) => {
            let spec = GroupSpec::parse(kind)?;
            let g = if *no_census || spec.order() > DEFAULT_ELEMENT_BOUND {
                hessbasis::build_generators(&spec)?
            } else {
                ReflectionGroup::with_census(spec, DEFAULT_ELEMENT_BOUND)?
            };
            let text = g.to_json()?;
            match out {
                Some(p) => {
                    write_out(p, &text)?;
                    if !json {
                        println!("wrote {}", p.display());
                    }
                }
                None => println!("{text}"),
            }
        }
        Cmd::Group(GroupCmd::Order { kind }) => {
            let spec = GroupSpec::parse(kind)?;
            let order = spec.order();
            let note =
                (order > DEFAULT_ELEMENT_BOUND).then_some("not enumerable; product of degrees");
            emit(
                json,
                &json!({"schema": ORDER_SCHEMA, "group": spec.name(), "order": order.to_string(), "note": note}),
                || match note {
                    Some(n) => format!("{order} ({n})"),
                    None => order.to_string(),
                },
            )?;
        }
        Cmd::Molien(a) => molien(json, a)?,
        Cmd::Invariants { group, expand } => {
            let spec = GroupSpec::parse(group)?;
            let sys = InvariantSystem::new(&spec)?;
            let mut rows = Vec::new();
            let mut lines = Vec::new();
            for (i, inv) in sys.invariants.iter().enumerate() {
                let explicit = match &inv.repr {
                    InvariantRepr::Explicit(p) => Some(p.clone()),
                    InvariantRepr::Chern(_) if *expand => Some(inv.expand()),
                    InvariantRepr::Chern(_) => None,
                };
                match (&explicit, &inv.repr) {
                    (Some(p), _) => {
                        lines.push(format!("r{} (degree {}) = {p}", i + 1, inv.degree));
                        rows.push(json!({"degree": inv.degree, "poly": p}));
                    }
                    (None, InvariantRepr::Chern(o)) => {
                        let size = o.orbit().len();
                        lines.push(format!(
                            "r{} (degree {}) = sum of l^{} over an orbit of {size} linear forms",
                            i + 1,
                            inv.degree,
                            o.exponent()
                        ));
                        rows.push(json!({"degree": inv.degree, "orbit_size": size, "exponent": o.exponent(),
                            "orbit": o.orbit().forms()}));
                    }
                    _ => unreachable!(),
                }
            }
            emit(
                json,
                &json!({"schema": INVARIANTS_SCHEMA, "group": spec, "degrees": sys.degrees(), "invariants": rows}),
                || lines.join("\n"),
            )?;
        }
        Cmd::RegularCheck { group, point } => {
            let sys = InvariantSystem::new(&GroupSpec::parse(group)?)?;
            let v = sys.regular_vector(parse_point(point)?)?;
            emit(
                json,
                &json!({"schema": REGULAR_SCHEMA, "group": group, "point": v.point, "regular": v.certified,
                    "jacobian_det": v.jacobian_det}),
                || {
                    if v.certified {
                        format!("regular (det J = {})", v.jacobian_det)
                    } else {
                        "not regular (det J = 0)".into()
                    }
                },
            )?;
        }
        Cmd::Basis(BasisCmd::Enumerate {
            group,
            certify_all,
            point,
            allow_missing_singles,
            out,
        }) => {
            let spec = GroupSpec::parse(group)?;
            let (ratio, source) = best_ratio(&spec)?;
            let sets = enumerate_candidate_sets(&spec.degrees, &ratio, !allow_missing_singles);
            if *certify_all {
                let sys = InvariantSystem::new(&spec)?;
                let v = point_or_default(&sys, point)?;
                let certs: Vec<Certificate> = Certifier::new(&sys.invariants, &v, &spec.name())?
                    .certify_all(&sets)?
                    .into_iter()
                    .map(Certificate::without_matrix)
                    .collect();
                let ok = certs.iter().filter(|c| c.is_certified()).count();
                let text = serde_json::to_string_pretty(&certs)?;
                if let Some(p) = out {
                    write_out(p, &text)?;
                }
                if json && out.is_none() {
                    println!("{text}");
                } else {
                    for c in &certs {
                        println!("{}  {:?}  det = {}", c.set, c.verdict, c.determinant);
                    }
                    println!(
                        "{ok}/{} certified (ratio from {source}: {ratio})",
                        certs.len()
                    );
                }
            } else {
                let v = json!({"schema": CANDIDATES_SCHEMA, "group": spec.name(), "ratio": ratio.to_string(),
                    "ratio_source": source, "sets": sets});
                if let Some(p) = out {
                    write_out(p, &serde_json::to_string_pretty(&v)?)?;
                }
                emit(json, &v, || {
                    let mut s: Vec<String> = sets.iter().map(|t| t.to_string()).collect();
                    s.push(format!(
                        "{} candidate sets (ratio from {source}: {ratio})",
                        sets.len()
                    ));
                    s.join("\n")
                })?;
            }
        }
        Cmd::Basis(BasisCmd::Certify {
            group,
            set,
            point,
            out,
        }) => {
            let spec = GroupSpec::parse(group)?;
            let sys = InvariantSystem::new(&spec)?;
            let v = point_or_default(&sys, point)?;
            let set = CandidateSet::parse(set)?;
            let cert = Certifier::new(&sys.invariants, &v, &spec.name())?
                .certify(&set)?
                .without_matrix();
            if let Some(p) = out {
                write_out(p, &serde_json::to_string_pretty(&cert)?)?;
            }
            emit(json, &cert, || {
                let verdict = if cert.is_certified() {
                    "certified"
                } else {
                    "degenerate"
                };
                format!("verdict: {verdict}\ndeterminant: {}", cert.determinant)
            })?;
        }
        Cmd::Decompose {
            group,
            tensor,
            basis,
            symmetrize: sym,
        } => {
            let spec = GroupSpec::parse(group)?;
            let sys = InvariantSystem::new(&spec)?;
            let text = std::fs::read_to_string(tensor)
                .with_context(|| format!("reading {}", tensor.display()))?;
            let mut sigma: SymTensorPoly =
                serde_json::from_str(&text).context("parsing tensor JSON")?;
            if *sym {
                sigma = symmetrize(&sigma, &sys.group, DEFAULT_ELEMENT_BOUND)?;
            }
            let set = if basis == "auto" {
                auto_basis(&spec)?
            } else {
                CandidateSet::parse(basis)?
            };
            let d = decompose(&sigma, &set, &sys.invariants, &sys.group)?;
            emit(
                json,
                &json!({"schema": DECOMPOSITION_SCHEMA, "group": spec.name(), "variables": "y",
                    "set": d.set, "coeffs": d.coeffs, "residual": d.residual}),
                || {
                    let mut s: Vec<String> = d
                        .set
                        .entries
                        .iter()
                        .zip(&d.coeffs)
                        .map(|(e, c)| format!("Hess({e}): {}", c.to_string_with("y")))
                        .collect();
                    s.push(format!("residual: {}", d.residual));
                    s.join("\n")
                },
            )?;
            if d.residual {
                eprintln!("tensor is not in the span of the basis");
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Selfcheck {
            profile,
            only,
            fixtures,
        } => {
            let loaded;
            let mut opts = SelfcheckOptions::new(*profile);
            if let Some(path) = fixtures {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                loaded = Fixtures::from_toml(&text)?;
                opts.fixtures = &loaded;
            }
            opts.only = only.clone();
            if *profile == Profile::Long {
                eprintln!(
                    "note: the long profile enumerates E7 and needs a few hundred MB of memory"
                );
            }
            let report = run_selfcheck(&opts);
            emit(json, &report, || report.to_string())?;
            if !report.passed() {
                for c in report.failures() {
                    eprintln!("failed: {}", c.name);
                }
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn molien(json: bool, a: &MolienArgs) -> anyhow::Result<()> {
    let g = load_group(&a.group)?;
    let spec = g.spec().clone();
    let order = a.trunc.unwrap_or_else(|| default_truncation(&spec.degrees));
    if a.ratio && a.tensor != Character::Sym2 {
        bail!("--ratio needs --tensor sym2");
    }
    let series = match a.method.as_str() {
        "census" => {
            let g = if g.census().is_some() {
                g
            } else {
                let bound = if spec.order() <= LONG_ELEMENT_BOUND {
                    LONG_ELEMENT_BOUND
                } else {
                    DEFAULT_ELEMENT_BOUND
                };
                ReflectionGroup::with_census(spec.clone(), bound)?
            };
            molien_series(g.census().expect("census present"), a.tensor, order)?
        }
        "cycle-index" => {
            let (f, n) = Family::of(&spec.kind)
                .filter(|(f, _)| *f != Family::I2)
                .context("cycle-index needs type A, B or D")?;
            cycle_index_molien(f, n, a.tensor, order)?
        }
        "closed-form" => {
            let (f, n) =
                Family::of(&spec.kind).context("closed-form needs a dihedral or classical type")?;
            let inv = invariant_series_from_degrees(&spec.degrees, order)?;
            match a.tensor {
                Character::Trivial => inv,
                Character::Sym2 => inv.mul(&TruncSeries::from_poly(
                    &closed_form_ratio(f, n)?.to_unipoly(),
                    order,
                )),
            }
        }
        m => bail!("unknown method '{m}' (census, cycle-index, closed-form)"),
    };
    let ratio = if a.ratio {
        Some(ratio_polynomial(&series, &spec.degrees)?)
    } else {
        None
    };
    let value = json!({
        "schema": MOLIEN_SCHEMA,
        "group": spec.name(),
        "tensor": a.tensor,
        "method": a.method,
        "series": series_strings(&series),
        "ratio": ratio.as_ref().map(|r| r.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    });
    emit(json, &value, || match &ratio {
        Some(r) => r.to_string(),
        None => render_series(&series),
    })
}
